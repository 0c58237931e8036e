//! Marching-squares isolines on a rectilinear grid.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Joins segments that share endpoints into polylines. Every key may appear
/// in at most two segments. Open chains come first, then closed loops, which
/// repeat their first key at the end.
pub fn chain_segments<K: Ord + Copy>(segments: &[(K, K)]) -> Vec<Vec<K>> {
    let mut adjacency: BTreeMap<K, Vec<usize>> = BTreeMap::new();
    for (i, &(a, b)) in segments.iter().enumerate() {
        adjacency.entry(a).or_default().push(i);
        adjacency.entry(b).or_default().push(i);
    }
    let mut used = vec![false; segments.len()];
    let mut out = Vec::new();
    let walk = |start: K, used: &mut Vec<bool>| {
        let mut line = vec![start];
        let mut here = start;
        while let Some(&seg) = adjacency[&here].iter().find(|&&s| !used[s]) {
            used[seg] = true;
            let (a, b) = segments[seg];
            here = if a == here { b } else { a };
            line.push(here);
        }
        line
    };
    let ends: Vec<K> = adjacency.iter().filter(|(_, s)| s.len() == 1).map(|(k, _)| *k).collect();
    for k in ends {
        if adjacency[&k].iter().any(|&s| !used[s]) {
            out.push(walk(k, &mut used));
        }
    }
    for i in 0..segments.len() {
        if !used[i] {
            out.push(walk(segments[i].0, &mut used));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContourLevel {
    pub isovalue: f64,
    pub polylines: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ContourSet {
    pub levels: Vec<ContourLevel>,
}

impl ContourSet {
    pub fn isovalues(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.isovalue).collect()
    }

    pub fn polyline_count(&self) -> usize {
        self.levels.iter().map(|l| l.polylines.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.polyline_count() == 0
    }
}

/// Edge keys: `(0, ix, iy)` between `(ix, iy)` and `(ix+1, iy)`,
/// `(1, ix, iy)` between `(ix, iy)` and `(ix, iy+1)`.
type Edge = (u8, usize, usize);

/// Isolines of `values` (row-major, `y` outer) at each isovalue. A level
/// outside the data range yields no polylines.
pub fn extract_contours(xs: &[f64], ys: &[f64], values: &[f64], isovalues: &[f64]) -> ContourSet {
    let (nx, ny) = (xs.len(), ys.len());
    assert_eq!(values.len(), nx * ny, "grid shape mismatch");
    let v = |ix: usize, iy: usize| values[iy * nx + ix];
    let levels = isovalues
        .iter()
        .map(|&iso| {
            let above = |ix: usize, iy: usize| v(ix, iy) > iso;
            let mut points: BTreeMap<Edge, [f64; 2]> = BTreeMap::new();
            let mut crossing = |e: Edge| -> Option<Edge> {
                let (kind, ix, iy) = e;
                let (bx, by) = if kind == 0 { (ix + 1, iy) } else { (ix, iy + 1) };
                if above(ix, iy) == above(bx, by) {
                    return None;
                }
                let (a, b) = (v(ix, iy), v(bx, by));
                let t = (iso - a) / (b - a);
                points.entry(e).or_insert_with(|| {
                    if kind == 0 {
                        [xs[ix] + t * (xs[bx] - xs[ix]), ys[iy]]
                    } else {
                        [xs[ix], ys[iy] + t * (ys[by] - ys[iy])]
                    }
                });
                Some(e)
            };
            let mut segments = Vec::new();
            for iy in 0..ny.saturating_sub(1) {
                for ix in 0..nx.saturating_sub(1) {
                    // bottom, right, top, left
                    let around = [(0, ix, iy), (1, ix + 1, iy), (0, ix, iy + 1), (1, ix, iy)];
                    let hits: Vec<Option<Edge>> = around.iter().map(|&e| crossing(e)).collect();
                    let found: Vec<Edge> = hits.iter().flatten().copied().collect();
                    match found.len() {
                        2 => segments.push((found[0], found[1])),
                        4 => {
                            let center = 0.25 * (v(ix, iy) + v(ix + 1, iy) + v(ix, iy + 1) + v(ix + 1, iy + 1));
                            let [b, r, t, l] = around;
                            if (center > iso) == above(ix, iy) {
                                segments.push((b, r));
                                segments.push((t, l));
                            } else {
                                segments.push((b, l));
                                segments.push((r, t));
                            }
                        }
                        _ => {}
                    }
                }
            }
            let polylines = chain_segments(&segments)
                .into_iter()
                .map(|keys| keys.iter().map(|k| points[k]).collect())
                .collect();
            ContourLevel { isovalue: iso, polylines }
        })
        .collect();
    ContourSet { levels }
}
