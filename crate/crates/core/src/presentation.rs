//! Contact surgery presentations of `M(-1; r1, r2, r3)`: two `+1`-unknots and
//! three legs of Legendrian unknots.
//!
//! Each unknot carries stabilization holes. With `S` stabilizations and
//! rotation number `rot`, `(S + rot)/2` of them are positive (lambda holes) and
//! `(S - rot)/2` negative (rho holes). The first unknot of a leg has
//! `S = -a1 - 1`, later ones `S = -aj - 2`.

use serde::{Deserialize, Serialize};

use crate::cf::{cf_expand, Chain, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Leg {
    coefficients: Chain,
    rotations: Vec<i64>,
}

/// Number of stabilizations on unknot `j` (0-based) of a chain.
pub fn stab_count(chain: &Chain, j: usize) -> i64 {
    let a = chain.entries()[j];
    if j == 0 {
        -a - 1
    } else {
        -a - 2
    }
}

impl Leg {
    pub fn new(coefficients: Chain, rotations: Vec<i64>) -> Result<Self> {
        if rotations.len() != coefficients.len() {
            return Err(Error::validation(
                "one rotation number per unknot",
                format!("{} coefficients but {} rotations", coefficients.len(), rotations.len()),
            ));
        }
        for (j, &rot) in rotations.iter().enumerate() {
            let s = stab_count(&coefficients, j);
            if rot.abs() > s {
                return Err(Error::validation(
                    "|rot| <= stabilization count",
                    format!("unknot {} has {s} stabilizations but rot {rot}", j + 1),
                ));
            }
            if (s - rot).rem_euclid(2) != 0 {
                return Err(Error::validation(
                    "rot = stabilization count (mod 2)",
                    format!("unknot {} has {s} stabilizations but rot {rot}", j + 1),
                ));
            }
        }
        Ok(Leg {
            coefficients,
            rotations,
        })
    }

    /// Leg for `r` in `(0,1)`, with coefficients from the expansion of `-1/r`.
    pub fn from_r(r: &Rational, rotations: Vec<i64>) -> Result<Self> {
        if *r <= Rational::zero() || *r >= Rational::one() {
            return Err(Error::validation("r in (0,1)", format!("r = {r}")));
        }
        let chain = cf_expand(&-r.checked_recip().expect("r > 0"))?;
        Leg::new(chain, rotations)
    }

    pub fn coefficients(&self) -> &Chain {
        &self.coefficients
    }

    pub fn rotations(&self) -> &[i64] {
        &self.rotations
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `r = -1/cf_eval(coefficients)`.
    pub fn r(&self) -> Rational {
        self.coefficients.s()
    }

    /// Per unknot `(|lambda_j|, |rho_j|)`.
    pub fn stab_counts(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .map(|j| {
                let s = stab_count(&self.coefficients, j);
                let rot = self.rotations[j];
                (((s + rot) / 2) as usize, ((s - rot) / 2) as usize)
            })
            .collect()
    }

    /// Thurston-Bennequin invariant of unknot `j` (0-based).
    pub fn tb(&self, j: usize) -> i64 {
        let (l, r) = self.stab_counts()[j];
        -1 - l as i64 - r as i64
    }

    /// The same leg with every stabilization sign reversed.
    pub fn mirrored(&self) -> Leg {
        Leg {
            coefficients: self.coefficients.clone(),
            rotations: self.rotations.iter().map(|r| -r).collect(),
        }
    }

    /// The first `m` unknots.
    pub fn truncated(&self, m: usize) -> Leg {
        Leg {
            coefficients: self.coefficients.prefix(m),
            rotations: self.rotations[..m].to_vec(),
        }
    }

    pub fn start_sign(&self) -> StartSign {
        match self.stab_counts()[0] {
            (l, 0) if l > 0 => StartSign::Positive,
            (0, r) if r > 0 => StartSign::Negative,
            _ => StartSign::None,
        }
    }
}

/// Sign shared by the stabilizations of a run of unknots.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StartSign {
    Positive,
    Negative,
    None,
}

/// The longest run of leading unknots stabilized on one side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrefixData {
    /// Length of the run; 0 when the first unknot is mixed.
    pub k: usize,
    pub sign: StartSign,
    /// `-1/cf_eval(a1..ak)`, or 0 when `k = 0`.
    pub q: Rational,
}

pub fn stab_counts(leg: &Leg) -> Vec<(usize, usize)> {
    leg.stab_counts()
}

/// Unknots without stabilizations never break the run.
pub fn one_sided_prefix(leg: &Leg) -> PrefixData {
    let sign = leg.start_sign();
    if sign == StartSign::None {
        return PrefixData {
            k: 0,
            sign,
            q: Rational::zero(),
        };
    }
    let k = leg
        .stab_counts()
        .iter()
        .take_while(|&&(l, r)| match sign {
            StartSign::Positive => r == 0,
            _ => l == 0,
        })
        .count();
    PrefixData {
        k,
        sign,
        q: leg.coefficients.prefix(k).s(),
    }
}

/// Exactly three legs; `e0 = -1` is implicit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Presentation {
    legs: Vec<Leg>,
}

impl Presentation {
    pub fn new(legs: Vec<Leg>) -> Result<Self> {
        if legs.len() != 3 {
            return Err(Error::validation(
                "exactly three legs",
                format!("got {} legs", legs.len()),
            ));
        }
        Ok(Presentation { legs })
    }

    pub fn legs(&self) -> &[Leg] {
        &self.legs
    }

    /// Leg by 1-based index.
    pub fn leg(&self, index: usize) -> &Leg {
        &self.legs[index - 1]
    }

    /// The presentation seen with inner and outer boundary interchanged:
    /// every stabilization changes sign.
    pub fn mirrored(&self) -> Presentation {
        Presentation {
            legs: self.legs.iter().map(Leg::mirrored).collect(),
        }
    }

    pub fn prefixes(&self) -> Vec<PrefixData> {
        self.legs.iter().map(one_sided_prefix).collect()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: PresentationJson =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        raw.try_into()
    }

    pub fn to_json(&self) -> PresentationJson {
        PresentationJson {
            legs: self
                .legs
                .iter()
                .map(|l| LegJson::Coeffs {
                    coeffs: l.coefficients.entries().to_vec(),
                    rot: l.rotations.clone(),
                })
                .collect(),
        }
    }
}

/// Some leg starts fully positive and another fully negative.
pub fn opposite_start_check(p: &Presentation) -> bool {
    let signs: Vec<StartSign> = p.legs.iter().map(Leg::start_sign).collect();
    signs.contains(&StartSign::Positive) && signs.contains(&StartSign::Negative)
}

/// Wire form of a presentation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PresentationJson {
    pub legs: Vec<LegJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LegJson {
    Coeffs { coeffs: Vec<i64>, rot: Vec<i64> },
    Rational { r: Rational, rot: Vec<i64> },
}

impl TryFrom<PresentationJson> for Presentation {
    type Error = Error;

    fn try_from(raw: PresentationJson) -> Result<Self> {
        let legs = raw
            .legs
            .into_iter()
            .enumerate()
            .map(|(i, leg)| {
                match leg {
                    LegJson::Coeffs { coeffs, rot } => Leg::new(Chain::new(coeffs)?, rot),
                    LegJson::Rational { r, rot } => Leg::from_r(&r, rot),
                }
                .map_err(|e| match e {
                    Error::Validation { invariant, detail } => Error::Validation {
                        invariant,
                        detail: format!("leg {}: {detail}", i + 1),
                    },
                    other => other,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Presentation::new(legs)
    }
}

impl Serialize for Presentation {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

/// Every rotation assignment on three fixed chains, in lexicographic order of
/// the concatenated rotation vectors. Cloning restarts nothing; call
/// [`enumerate_structures`] again for a fresh stream.
#[derive(Clone, Debug)]
pub struct Structures {
    chains: Vec<Chain>,
    /// Stabilization count per unknot, legs concatenated.
    limits: Vec<i64>,
    current: Option<Vec<i64>>,
}

impl Structures {
    /// `prod (S + 1)` over all unknots.
    pub fn total(&self) -> u64 {
        self.limits.iter().map(|&s| (s + 1) as u64).product()
    }
}

impl Iterator for Structures {
    type Item = Presentation;

    fn next(&mut self) -> Option<Presentation> {
        let rots = self.current.clone()?;
        // Advance odometer: last digit fastest.
        let mut next = rots.clone();
        let mut i = next.len();
        self.current = loop {
            if i == 0 {
                break None;
            }
            i -= 1;
            if next[i] + 2 <= self.limits[i] {
                next[i] += 2;
                break Some(next);
            }
            next[i] = -self.limits[i];
        };
        let mut offset = 0;
        let legs = self
            .chains
            .iter()
            .map(|c| {
                let r = rots[offset..offset + c.len()].to_vec();
                offset += c.len();
                Leg::new(c.clone(), r).expect("enumerated rotations are valid")
            })
            .collect();
        Some(Presentation { legs })
    }
}

pub fn enumerate_structures(chains: &[Chain; 3]) -> Structures {
    let limits: Vec<i64> = chains
        .iter()
        .flat_map(|c| (0..c.len()).map(move |j| stab_count(c, j)))
        .collect();
    Structures {
        chains: chains.to_vec(),
        current: Some(limits.iter().map(|s| -s).collect()),
        limits,
    }
}
