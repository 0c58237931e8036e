//! Quantum-number labels `|S_t, S_t^z⟩^{branch}` of the eighteen levels.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::spin::HalfInt;
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Branch {
    None,
    I,
    II,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::None => "",
            Branch::I => "I",
            Branch::II => "II",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LevelLabel {
    pub st: HalfInt,
    pub stz: HalfInt,
    pub branch: Branch,
}

const fn fam(st2: i32, stz2: i32, branch: Branch) -> LevelLabel {
    LevelLabel { st: HalfInt::from_twice(st2), stz: HalfInt::from_twice(stz2), branch }
}

impl LevelLabel {
    pub const STRETCHED: LevelLabel = fam(5, 5, Branch::None);
    pub const QUARTET_32_I: LevelLabel = fam(3, 3, Branch::I);
    pub const QUARTET_32_II: LevelLabel = fam(3, 3, Branch::II);
    pub const SEXTET_32: LevelLabel = fam(5, 3, Branch::None);
    pub const DOUBLET_12_II: LevelLabel = fam(1, 1, Branch::II);
    pub const QUARTET_12_I: LevelLabel = fam(3, 1, Branch::I);
    pub const SEXTET_12: LevelLabel = fam(5, 1, Branch::None);
    pub const QUARTET_12_II: LevelLabel = fam(3, 1, Branch::II);
    pub const DOUBLET_12_I: LevelLabel = fam(1, 1, Branch::I);

    /// The nine level families (positive `S_t^z` members), each of which also
    /// has a `-S_t^z` partner.
    pub const FAMILIES: [LevelLabel; 9] = [
        Self::STRETCHED,
        Self::QUARTET_32_I,
        Self::QUARTET_32_II,
        Self::SEXTET_32,
        Self::DOUBLET_12_II,
        Self::QUARTET_12_I,
        Self::SEXTET_12,
        Self::QUARTET_12_II,
        Self::DOUBLET_12_I,
    ];

    pub fn partner(self) -> LevelLabel {
        LevelLabel { stz: self.stz.neg(), ..self }
    }

    /// The positive-`S_t^z` member of this label's family.
    pub fn family(self) -> LevelLabel {
        LevelLabel { stz: self.stz.abs(), ..self }
    }

    pub fn is_known(self) -> bool {
        Self::FAMILIES.contains(&self.family())
    }

    /// Compact form accepted on the command line, e.g. `3/2,3/2,II`.
    pub fn compact(self) -> String {
        match self.branch {
            Branch::None => format!("{},{}", self.st, self.stz),
            b => format!("{},{},{}", self.st, self.stz, b),
        }
    }
}

impl fmt::Display for LevelLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{},{}>", self.st, self.stz)?;
        if self.branch != Branch::None {
            write!(f, "^{}", self.branch)?;
        }
        Ok(())
    }
}

fn parse_half(s: &str) -> Option<HalfInt> {
    let s = s.trim();
    match s.split_once('/') {
        Some((num, den)) => {
            if den.trim() != "2" {
                return None;
            }
            let n: i32 = num.trim().parse().ok()?;
            (n % 2 != 0).then(|| HalfInt::from_twice(n))
        }
        None => {
            let n: i32 = s.parse().ok()?;
            n.checked_mul(2).map(HalfInt::from_twice)
        }
    }
}

impl FromStr for LevelLabel {
    type Err = Error;

    /// Accepts `3/2,3/2,II`, `|3/2,3/2>^II` and `5/2,5/2`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::InvalidLabel(s.to_string());
        let t = s.trim();
        let (body, branch) = if let Some(rest) = t.strip_prefix('|') {
            let (inner, tail) = rest.split_once('>').ok_or_else(bad)?;
            let branch = match tail.trim() {
                "" => Branch::None,
                "^I" => Branch::I,
                "^II" => Branch::II,
                _ => return Err(bad()),
            };
            (inner, Some(branch))
        } else {
            (t, None)
        };
        let parts: Vec<&str> = body.split(',').collect();
        let (st, stz, branch) = match (parts.as_slice(), branch) {
            ([st, stz], Some(b)) => (st, stz, b),
            ([st, stz], None) => (st, stz, Branch::None),
            ([st, stz, b], None) => {
                let b = match b.trim() {
                    "I" => Branch::I,
                    "II" => Branch::II,
                    "" => Branch::None,
                    _ => return Err(bad()),
                };
                (st, stz, b)
            }
            _ => return Err(bad()),
        };
        let label = LevelLabel {
            st: parse_half(st).ok_or_else(bad)?,
            stz: parse_half(stz).ok_or_else(bad)?,
            branch,
        };
        if label.is_known() {
            Ok(label)
        } else {
            Err(bad())
        }
    }
}
