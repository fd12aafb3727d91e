//! Planar open books read off a surgery presentation.
//!
//! A book is a sphere with holes. One hole is distinguished as the outer
//! boundary and every twist is stored by the set of other holes it encircles.
//! Changing the outer boundary replaces each set containing the new outer by
//! its complement.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::presentation::{Leg, Presentation};

/// Variant order is the canonical hole order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HoleKind {
    Inner,
    OuterToken,
    Lambda,
    Rho,
}

/// Leg, level and copy are 1-based and zero for the two annulus boundaries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hole {
    pub kind: HoleKind,
    pub leg: usize,
    pub level: usize,
    pub copy: usize,
}

impl Hole {
    pub const INNER: Hole = Hole {
        kind: HoleKind::Inner,
        leg: 0,
        level: 0,
        copy: 0,
    };
    pub const OUTER: Hole = Hole {
        kind: HoleKind::OuterToken,
        leg: 0,
        level: 0,
        copy: 0,
    };

    pub fn lambda(leg: usize, level: usize, copy: usize) -> Hole {
        Hole {
            kind: HoleKind::Lambda,
            leg,
            level,
            copy,
        }
    }

    pub fn rho(leg: usize, level: usize, copy: usize) -> Hole {
        Hole {
            kind: HoleKind::Rho,
            leg,
            level,
            copy,
        }
    }

    pub fn is_stabilization(&self) -> bool {
        matches!(self.kind, HoleKind::Lambda | HoleKind::Rho)
    }
}

impl fmt::Display for Hole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            HoleKind::Inner => write!(f, "in"),
            HoleKind::OuterToken => write!(f, "out"),
            HoleKind::Lambda => write!(f, "L{}.{}.{}", self.leg, self.level, self.copy),
            HoleKind::Rho => write!(f, "R{}.{}.{}", self.leg, self.level, self.copy),
        }
    }
}

impl FromStr for Hole {
    type Err = Error;

    fn from_str(s: &str) -> Result<Hole> {
        let bad = || Error::Parse(format!("bad hole name {s:?}"));
        match s {
            "in" => return Ok(Hole::INNER),
            "out" => return Ok(Hole::OUTER),
            _ => {}
        }
        let kind = match s.chars().next() {
            Some('L') => HoleKind::Lambda,
            Some('R') => HoleKind::Rho,
            _ => return Err(bad()),
        };
        let parts: Vec<usize> = s[1..]
            .split('.')
            .map(|t| t.parse::<usize>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        match parts[..] {
            [leg, level, copy] if leg > 0 && level > 0 && copy > 0 => Ok(Hole {
                kind,
                leg,
                level,
                copy,
            }),
            _ => Err(bad()),
        }
    }
}

impl Serialize for Hole {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Hole {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Negative,
    Positive,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i64(self.value())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match i64::deserialize(d)? {
            1 => Ok(Sign::Positive),
            -1 => Ok(Sign::Negative),
            v => Err(serde::de::Error::custom(format!("sign must be 1 or -1, got {v}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SignedTwist {
    pub sign: Sign,
    pub holes: BTreeSet<Hole>,
}

impl SignedTwist {
    pub fn positive(holes: impl IntoIterator<Item = Hole>) -> SignedTwist {
        SignedTwist {
            sign: Sign::Positive,
            holes: holes.into_iter().collect(),
        }
    }

    pub fn negative(holes: impl IntoIterator<Item = Hole>) -> SignedTwist {
        SignedTwist {
            sign: Sign::Negative,
            holes: holes.into_iter().collect(),
        }
    }
}

/// `universe` includes the outer boundary; twists are kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawBook")]
pub struct OpenBook {
    universe: BTreeSet<Hole>,
    outer: Hole,
    twists: Vec<SignedTwist>,
}

#[derive(Deserialize)]
struct RawBook {
    universe: BTreeSet<Hole>,
    outer: Hole,
    twists: Vec<SignedTwist>,
}

impl TryFrom<RawBook> for OpenBook {
    type Error = Error;

    fn try_from(raw: RawBook) -> Result<OpenBook> {
        OpenBook::new(raw.universe, raw.outer, raw.twists)
    }
}

impl OpenBook {
    pub fn new(universe: BTreeSet<Hole>, outer: Hole, mut twists: Vec<SignedTwist>) -> Result<OpenBook> {
        if !universe.contains(&outer) {
            return Err(Error::UnknownHole(outer.to_string()));
        }
        for t in &twists {
            if t.holes.is_empty() {
                return Err(Error::validation("twist hole set nonempty", "empty twist"));
            }
            if t.holes.contains(&outer) {
                return Err(Error::validation(
                    "twists avoid the outer boundary",
                    format!("twist contains {outer}"),
                ));
            }
            if let Some(h) = t.holes.iter().find(|h| !universe.contains(h)) {
                return Err(Error::UnknownHole(h.to_string()));
            }
        }
        twists.sort();
        Ok(OpenBook {
            universe,
            outer,
            twists,
        })
    }

    pub fn universe(&self) -> &BTreeSet<Hole> {
        &self.universe
    }

    pub fn outer(&self) -> Hole {
        self.outer
    }

    pub fn twists(&self) -> &[SignedTwist] {
        &self.twists
    }

    /// Every hole other than the outer boundary, in canonical order.
    pub fn inner_holes(&self) -> Vec<Hole> {
        self.universe.iter().copied().filter(|h| *h != self.outer).collect()
    }

    pub fn count(&self, sign: Sign) -> usize {
        self.twists.iter().filter(|t| t.sign == sign).count()
    }

    /// Same book with `new_outer` as outer boundary.
    pub fn reroot(&self, new_outer: Hole) -> Result<OpenBook> {
        if !self.universe.contains(&new_outer) {
            return Err(Error::UnknownHole(new_outer.to_string()));
        }
        let twists = self
            .twists
            .iter()
            .map(|t| {
                if t.holes.contains(&new_outer) {
                    SignedTwist {
                        sign: t.sign,
                        holes: self
                            .universe
                            .iter()
                            .copied()
                            .filter(|h| *h != new_outer && !t.holes.contains(h))
                            .collect(),
                    }
                } else {
                    t.clone()
                }
            })
            .collect();
        OpenBook::new(self.universe.clone(), new_outer, twists)
    }

    /// Fill in `holes`. Twists left around no hole are dropped.
    pub fn cap(&self, holes: &BTreeSet<Hole>) -> Result<OpenBook> {
        if holes.contains(&self.outer) {
            return Err(Error::CapOuter(self.outer.to_string()));
        }
        if let Some(h) = holes.iter().find(|h| !self.universe.contains(h)) {
            return Err(Error::UnknownHole(h.to_string()));
        }
        let universe: BTreeSet<Hole> = self.universe.difference(holes).copied().collect();
        let twists = self
            .twists
            .iter()
            .filter_map(|t| {
                let kept: BTreeSet<Hole> = t.holes.difference(holes).copied().collect();
                (!kept.is_empty()).then_some(SignedTwist {
                    sign: t.sign,
                    holes: kept,
                })
            })
            .collect();
        OpenBook::new(universe, self.outer, twists)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("books serialize")
    }
}

/// Open book of the full presentation, with `λ^out` as outer boundary.
pub fn translate(p: &Presentation) -> OpenBook {
    let legs: Vec<(usize, &Leg)> = p.legs().iter().enumerate().map(|(i, l)| (i + 1, l)).collect();
    translate_legs(&legs)
}

/// Stabilization holes of one leg, per level.
struct LegHoles {
    lambda: Vec<Vec<Hole>>,
    rho: Vec<Vec<Hole>>,
}

/// Translation of any subcollection of legs, keyed by their 1-based indices.
///
/// The core contributes one negative twist around `ρ^in` and every rho hole.
/// Unknot `j` of leg `i` contributes a positive twist around `ρ^in`, the rho
/// holes of the other legs, `ρ_k^i` for `k > j` and `λ_k^i` for `k <= j`.
/// Each stabilization hole also carries one positive boundary twist.
pub(crate) fn translate_legs(legs: &[(usize, &Leg)]) -> OpenBook {
    let holes: Vec<LegHoles> = legs
        .iter()
        .map(|&(i, leg)| {
            let counts = leg.stab_counts();
            LegHoles {
                lambda: counts
                    .iter()
                    .enumerate()
                    .map(|(j, &(l, _))| (1..=l).map(|c| Hole::lambda(i, j + 1, c)).collect())
                    .collect(),
                rho: counts
                    .iter()
                    .enumerate()
                    .map(|(j, &(_, r))| (1..=r).map(|c| Hole::rho(i, j + 1, c)).collect())
                    .collect(),
            }
        })
        .collect();

    let all_rho = |skip: Option<usize>| -> Vec<Hole> {
        holes
            .iter()
            .enumerate()
            .filter(|(x, _)| Some(*x) != skip)
            .flat_map(|(_, lh)| lh.rho.iter().flatten().copied())
            .collect()
    };

    let mut twists = vec![SignedTwist::negative(
        std::iter::once(Hole::INNER).chain(all_rho(None)),
    )];
    for (x, lh) in holes.iter().enumerate() {
        let others = all_rho(Some(x));
        for j in 0..lh.lambda.len() {
            let set = std::iter::once(Hole::INNER)
                .chain(others.iter().copied())
                .chain(lh.rho[j + 1..].iter().flatten().copied())
                .chain(lh.lambda[..=j].iter().flatten().copied());
            twists.push(SignedTwist::positive(set));
        }
    }
    let stab: Vec<Hole> = holes
        .iter()
        .flat_map(|lh| lh.lambda.iter().chain(lh.rho.iter()).flatten().copied())
        .collect();
    twists.extend(stab.iter().map(|&h| SignedTwist::positive([h])));

    let universe = [Hole::INNER, Hole::OUTER].into_iter().chain(stab).collect();
    OpenBook::new(universe, Hole::OUTER, twists).expect("translation is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::Chain;

    fn leg(c: &[i64], r: &[i64]) -> Leg {
        Leg::new(Chain::new(c.to_vec()).unwrap(), r.to_vec()).unwrap()
    }

    fn set(names: &[&str]) -> BTreeSet<Hole> {
        names.iter().map(|n| n.parse().unwrap()).collect()
    }

    fn worked_example() -> Presentation {
        Presentation::new(vec![
            leg(&[-2, -3, -2], &[-1, -1, 0]),
            leg(&[-2, -3], &[-1, 1]),
            leg(&[-3, -3], &[2, 1]),
        ])
        .unwrap()
    }

    /// `L_j = [-2,-3,-2]` as leg 1, `L_i = [-3,-3]` as leg 2.
    fn worked_sublink() -> OpenBook {
        let j = leg(&[-2, -3, -2], &[-1, -1, 0]);
        let i = leg(&[-3, -3], &[2, 1]);
        translate_legs(&[(1, &j), (2, &i)])
    }

    fn non_boundary(b: &OpenBook) -> Vec<SignedTwist> {
        b.twists()
            .iter()
            .filter(|t| !(t.holes.len() == 1 && t.holes.iter().next().unwrap().is_stabilization()))
            .cloned()
            .collect()
    }

    #[test]
    fn hole_names_round_trip() {
        for name in ["in", "out", "L3.1.2", "R1.12.1"] {
            assert_eq!(name.parse::<Hole>().unwrap().to_string(), name);
        }
        for bad in ["L0.1.1", "X1.1.1", "R1.1", "L1.a.1", ""] {
            assert!(bad.parse::<Hole>().is_err(), "{bad}");
        }
        assert!(Hole::INNER < Hole::OUTER);
        assert!(Hole::OUTER < Hole::lambda(3, 9, 9));
        assert!(Hole::lambda(3, 9, 9) < Hole::rho(1, 1, 1));
        assert!(Hole::rho(1, 2, 1) < Hole::rho(2, 1, 1));
    }

    #[test]
    fn worked_example_leg2_twists() {
        let b = translate(&worked_example());
        let want1 = SignedTwist::positive(set(&["in", "R1.1.1", "R1.2.1"]));
        let want2 = SignedTwist::positive(set(&["in", "R1.1.1", "R1.2.1", "L2.2.1"]));
        assert!(b.twists().contains(&want1));
        assert!(b.twists().contains(&want2));
    }

    #[test]
    fn worked_sublink_twists() {
        let b = worked_sublink();
        let mut want = vec![
            SignedTwist::negative(set(&["in", "R1.1.1", "R1.2.1"])),
            SignedTwist::positive(set(&["in", "R1.2.1"])),
            SignedTwist::positive(set(&["in"])),
            SignedTwist::positive(set(&["in"])),
            SignedTwist::positive(set(&["in", "R1.1.1", "R1.2.1", "L2.1.1", "L2.1.2"])),
            SignedTwist::positive(set(&["in", "R1.1.1", "R1.2.1", "L2.1.1", "L2.1.2", "L2.2.1"])),
        ];
        want.sort();
        assert_eq!(non_boundary(&b), want);
        assert_eq!(b.count(Sign::Negative), 1);
        assert_eq!(b.count(Sign::Positive), 5 + 5);
        assert_eq!(b.universe().len(), 7);
    }

    #[test]
    fn extreme_negative_has_no_lambda() {
        let p = Presentation::new(vec![leg(&[-3, -4], &[-2, -2]), leg(&[-2], &[-1]), leg(&[-5], &[-4])]).unwrap();
        let b = translate(&p);
        assert!(b.universe().iter().all(|h| h.kind != HoleKind::Lambda));
        for t in b.twists().iter().filter(|t| t.holes.contains(&Hole::INNER) && t.sign == Sign::Positive) {
            assert!(t.holes.iter().all(|h| h.kind != HoleKind::Lambda));
        }
    }

    #[test]
    fn reroot_core_at_inner() {
        let b = worked_sublink().reroot(Hole::INNER).unwrap();
        let core: Vec<_> = b.twists().iter().filter(|t| t.sign == Sign::Negative).collect();
        assert_eq!(core.len(), 1);
        assert_eq!(core[0].holes, set(&["out", "L2.1.1", "L2.1.2", "L2.2.1"]));
    }

    #[test]
    fn reroot_is_involution() {
        let b = translate(&worked_example());
        for h in b.inner_holes() {
            let r = b.reroot(h).unwrap();
            assert_eq!(r.outer(), h);
            assert!(r.twists().iter().all(|t| !t.holes.contains(&h)));
            assert_eq!(r.reroot(Hole::OUTER).unwrap(), b);
        }
        assert!(b.reroot(Hole::lambda(9, 9, 9)).is_err());
        assert_eq!(b.reroot(Hole::OUTER).unwrap(), b);
    }

    #[test]
    fn cap_rules() {
        let b = worked_sublink();
        assert_eq!(b.cap(&BTreeSet::new()).unwrap(), b);
        assert!(matches!(b.cap(&set(&["out"])), Err(Error::CapOuter(_))));
        assert!(matches!(b.cap(&set(&["L9.1.1"])), Err(Error::UnknownHole(_))));

        // Outer in a lambda hole of the positive leg, all other lambda holes
        // capped: the positive-leg twists vanish, the rest keep their rho holes,
        // and the boundary twist of the new outer turns inside out.
        let r = b.reroot(Hole::lambda(2, 1, 1)).unwrap();
        let capped = r.cap(&set(&["out", "L2.1.2", "L2.2.1"])).unwrap();
        let mut want = vec![
            SignedTwist::negative(set(&["in", "R1.1.1", "R1.2.1"])),
            SignedTwist::positive(set(&["in", "R1.2.1"])),
            SignedTwist::positive(set(&["in"])),
            SignedTwist::positive(set(&["in"])),
            SignedTwist::positive(set(&["in", "R1.1.1", "R1.2.1"])),
        ];
        want.sort();
        assert_eq!(non_boundary(&capped), want);

        // Capping every hole but one leaves its signed multiplicity.
        let keep = Hole::rho(1, 2, 1);
        let rest: BTreeSet<Hole> = b.inner_holes().into_iter().filter(|h| *h != keep).collect();
        let only = b.cap(&rest).unwrap();
        let m: i64 = only.twists().iter().map(|t| t.sign.value()).sum();
        let expect: i64 = b.twists().iter().filter(|t| t.holes.contains(&keep)).map(|t| t.sign.value()).sum();
        assert_eq!(m, expect);
        assert!(only.twists().iter().all(|t| t.holes.len() == 1));
    }

    #[test]
    fn json_dump() {
        let b = worked_sublink();
        let text = b.to_json_string();
        assert!(text.contains("\"outer\": \"out\""));
        assert!(text.contains("\"sign\": -1"));
        let back: OpenBook = serde_json::from_str(&text).unwrap();
        assert_eq!(back, b);
    }
}
