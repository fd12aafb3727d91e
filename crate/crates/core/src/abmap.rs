//! Abelianized planar mapping classes.
//!
//! A product of twists on a planar surface is determined up to the lantern
//! relation by its multiplicities: `m_a` counts signed twists around hole `a`,
//! `m_ab` those around both `a` and `b`.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::openbook::{Hole, OpenBook, SignedTwist};

/// Largest number of non-outer holes the feasibility search accepts by default.
pub const DEFAULT_MAX_HOLES: usize = 14;

/// Multiplicities over `universe \ {outer}`. Zero entries are not stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbClass {
    universe: BTreeSet<Hole>,
    outer: Hole,
    singles: BTreeMap<Hole, i64>,
    /// Keys are ordered `a < b`.
    pairs: BTreeMap<(Hole, Hole), i64>,
}

impl AbClass {
    pub fn from_twists(universe: &BTreeSet<Hole>, outer: Hole, twists: &[SignedTwist]) -> AbClass {
        let mut singles = BTreeMap::new();
        let mut pairs = BTreeMap::new();
        for t in twists {
            let s = t.sign.value();
            let hs: Vec<Hole> = t.holes.iter().copied().collect();
            for (x, &a) in hs.iter().enumerate() {
                *singles.entry(a).or_insert(0) += s;
                for &b in &hs[x + 1..] {
                    *pairs.entry((a, b)).or_insert(0) += s;
                }
            }
        }
        singles.retain(|_, v| *v != 0);
        pairs.retain(|_, v| *v != 0);
        AbClass {
            universe: universe.clone(),
            outer,
            singles,
            pairs,
        }
    }

    pub fn universe(&self) -> &BTreeSet<Hole> {
        &self.universe
    }

    pub fn outer(&self) -> Hole {
        self.outer
    }

    pub fn single(&self, a: Hole) -> i64 {
        self.singles.get(&a).copied().unwrap_or(0)
    }

    pub fn pair(&self, a: Hole, b: Hole) -> i64 {
        let key = if a < b { (a, b) } else { (b, a) };
        self.pairs.get(&key).copied().unwrap_or(0)
    }

    pub fn singles(&self) -> &BTreeMap<Hole, i64> {
        &self.singles
    }

    pub fn pairs(&self) -> &BTreeMap<(Hole, Hole), i64> {
        &self.pairs
    }

    pub fn is_zero(&self) -> bool {
        self.singles.is_empty() && self.pairs.is_empty()
    }
}

impl Serialize for AbClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Pairs<'a>(&'a BTreeMap<(Hole, Hole), i64>);
        impl Serialize for Pairs<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut m = s.serialize_map(Some(self.0.len()))?;
                for ((a, b), v) in self.0 {
                    m.serialize_entry(&format!("{a}|{b}"), v)?;
                }
                m.end()
            }
        }
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("singles", &self.singles)?;
        m.serialize_entry("pairs", &Pairs(&self.pairs))?;
        m.end()
    }
}

pub fn ab_class(b: &OpenBook) -> AbClass {
    AbClass::from_twists(b.universe(), b.outer(), b.twists())
}

pub fn ab_equal(x: &AbClass, y: &AbClass) -> Result<bool> {
    if x.universe != y.universe || x.outer != y.outer {
        return Err(Error::UniverseMismatch(format!(
            "{} holes with outer {} vs {} holes with outer {}",
            x.universe.len(),
            x.outer,
            y.universe.len(),
            y.outer
        )));
    }
    Ok(x.singles == y.singles && x.pairs == y.pairs)
}

/// Pairwise twists plus `-(r-2)` boundary twists per hole, all scaled by the sign.
pub fn lantern_decompose(t: &SignedTwist) -> Vec<SignedTwist> {
    let r = t.holes.len();
    if r < 2 {
        return vec![t.clone()];
    }
    let hs: Vec<Hole> = t.holes.iter().copied().collect();
    let mut out = Vec::with_capacity(r * (r - 1) / 2 + r * (r - 2));
    for (x, &a) in hs.iter().enumerate() {
        for &b in &hs[x + 1..] {
            out.push(SignedTwist {
                sign: t.sign,
                holes: [a, b].into_iter().collect(),
            });
        }
    }
    for &a in &hs {
        for _ in 0..r - 2 {
            out.push(SignedTwist {
                sign: t.sign.flip(),
                holes: [a].into_iter().collect(),
            });
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FeasibilityStatus {
    Feasible,
    Infeasible,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessTerm {
    pub holes: BTreeSet<Hole>,
    pub multiplicity: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FeasibilityResult {
    pub status: FeasibilityStatus,
    pub witness: Option<Vec<WitnessTerm>>,
}

impl FeasibilityResult {
    pub fn is_feasible(&self) -> bool {
        self.status == FeasibilityStatus::Feasible
    }

    /// The witness as a list of positive twists.
    pub fn witness_twists(&self) -> Vec<SignedTwist> {
        self.witness
            .iter()
            .flatten()
            .flat_map(|w| (0..w.multiplicity).map(|_| SignedTwist::positive(w.holes.iter().copied())))
            .collect()
    }
}

/// Decides whether `target` is the class of some product of positive twists.
///
/// Repeatedly takes the first pair with positive remaining multiplicity and
/// branches over every clique of holes through it whose pairs and holes all
/// still have room. Pairs exhausted, the leftover single multiplicities
/// become boundary twists. A hole whose remaining single multiplicity is below
/// any of its remaining pair multiplicities is a dead end; failed states are
/// memoized.
pub fn positive_feasible(target: &AbClass, max_holes: usize) -> Result<FeasibilityResult> {
    let holes: Vec<Hole> = target.universe.iter().copied().filter(|h| *h != target.outer).collect();
    if holes.len() > max_holes {
        return Err(Error::SizeGuard {
            holes: holes.len(),
            limit: max_holes,
        });
    }
    let infeasible = FeasibilityResult {
        status: FeasibilityStatus::Infeasible,
        witness: None,
    };
    if target.singles.values().chain(target.pairs.values()).any(|&v| v < 0) {
        return Ok(infeasible);
    }
    let n = holes.len();
    let mut search = Search {
        n,
        rem: vec![0; n * n],
        budget: holes.iter().map(|&h| target.single(h)).collect(),
        dead: HashSet::new(),
        chosen: Vec::new(),
    };
    for a in 0..n {
        for b in 0..n {
            if a != b {
                search.rem[a * n + b] = target.pair(holes[a], holes[b]);
            }
        }
    }
    if !search.run() {
        return Ok(infeasible);
    }

    let mut counts: BTreeMap<BTreeSet<Hole>, u64> = BTreeMap::new();
    for clique in &search.chosen {
        *counts.entry(clique.iter().map(|&x| holes[x]).collect()).or_insert(0) += 1;
    }
    for (x, &left) in search.budget.iter().enumerate() {
        if left > 0 {
            *counts.entry([holes[x]].into_iter().collect()).or_insert(0) += left as u64;
        }
    }
    let result = FeasibilityResult {
        status: FeasibilityStatus::Feasible,
        witness: Some(
            counts
                .into_iter()
                .map(|(holes, multiplicity)| WitnessTerm { holes, multiplicity })
                .collect(),
        ),
    };
    let replay = AbClass::from_twists(&target.universe, target.outer, &result.witness_twists());
    if !ab_equal(&replay, target)? {
        return Err(Error::validation("witness replays the target", "replay differs"));
    }
    Ok(result)
}

struct Search {
    n: usize,
    /// Symmetric `n x n` remaining pair multiplicities.
    rem: Vec<i64>,
    budget: Vec<i64>,
    dead: HashSet<(Vec<i64>, Vec<i64>)>,
    chosen: Vec<Vec<usize>>,
}

impl Search {
    fn run(&mut self) -> bool {
        let n = self.n;
        for a in 0..n {
            let row = &self.rem[a * n..(a + 1) * n];
            if row.iter().any(|&v| v > self.budget[a]) {
                return false;
            }
        }
        let Some((a, b)) = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .find(|&(a, b)| self.rem[a * n + b] > 0)
        else {
            return true;
        };
        let key = (self.rem.clone(), self.budget.clone());
        if self.dead.contains(&key) {
            return false;
        }
        let cands: Vec<usize> = (0..n)
            .filter(|&c| {
                c != a && c != b && self.rem[a * n + c] > 0 && self.rem[b * n + c] > 0 && self.budget[c] > 0
            })
            .collect();
        let mut cliques = Vec::new();
        self.cliques(&cands, vec![a, b], 0, &mut cliques);
        for clique in cliques {
            self.apply(&clique, -1);
            self.chosen.push(clique);
            if self.run() {
                return true;
            }
            let clique = self.chosen.pop().expect("pushed above");
            self.apply(&clique, 1);
        }
        self.dead.insert(key);
        false
    }

    /// `cur` and every clique extending it by candidates from `start` on.
    fn cliques(&self, cands: &[usize], cur: Vec<usize>, start: usize, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        for (x, &c) in cands.iter().enumerate().skip(start) {
            if cur.iter().all(|&y| self.rem[c * self.n + y] > 0) {
                let mut next = cur.clone();
                next.push(c);
                self.cliques(cands, next, x + 1, out);
            }
        }
    }

    fn apply(&mut self, clique: &[usize], delta: i64) {
        for (x, &a) in clique.iter().enumerate() {
            self.budget[a] += delta;
            for &b in &clique[x + 1..] {
                self.rem[a * self.n + b] += delta;
                self.rem[b * self.n + a] += delta;
            }
        }
    }
}
