//! Positive factorizations of two-leg sublinks presenting tight `S^1 x S^2`.
//!
//! One leg is stabilized only positively, the other only negatively, and their
//! values sum to 1. The negative core twist is pushed across the stabilization
//! levels by repeated daisy relations
//!
//! ```text
//! t_C^(p-1) * t_P1 * ... * t_Pp * t_U = t_(C+P1) * ... * t_(C+Pp) * t_(P1+...+Pp)
//! ```
//!
//! with `U = C + P1 + ... + Pp`, until it cancels.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::abmap::{ab_class, ab_equal, AbClass};
use crate::cf::{Chain, Rational};
use crate::error::{Error, Result};
use crate::openbook::{translate_legs, Hole, OpenBook, Sign, SignedTwist};
use crate::presentation::{one_sided_prefix, Leg, StartSign};

/// Run lengths of `-2` entries in a dual pair of chains.
///
/// `runs[0]` counts the leading `-2`s of the chain `L_j` that starts with `-2`.
/// After that, even positions (1-based) hold the run following each head of
/// the other chain `L_i` and odd positions the run following each head of
/// `L_j`. A head is the first entry of `L_i` or any entry other than `-2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BPattern {
    pub runs: Vec<usize>,
}

/// `(heads, run after each head)`; a chain starting with `-2` has no leading head.
fn heads_and_runs(c: &[i64], first_is_head: bool) -> (Vec<i64>, Vec<usize>) {
    let mut heads = Vec::new();
    let mut runs: Vec<usize> = Vec::new();
    for (x, &a) in c.iter().enumerate() {
        if a != -2 || (x == 0 && first_is_head) {
            heads.push(a);
            runs.push(0);
        } else if let Some(r) = runs.last_mut() {
            *r += 1;
        }
    }
    (heads, runs)
}

/// `(L_i, L_j)`: `L_j` is the chain starting with `-2`, the negative one on a tie.
fn order_pair<'a>(pos: &'a Chain, neg: &'a Chain) -> (&'a Chain, &'a Chain) {
    if neg.entries()[0] == -2 {
        (pos, neg)
    } else {
        (neg, pos)
    }
}

pub fn extract_bpattern(l_pos: &Chain, l_neg: &Chain) -> Result<BPattern> {
    if l_pos.s() + l_neg.s() != Rational::one() {
        return Err(Error::Precondition(format!(
            "chains {:?} and {:?} are not dual",
            l_pos.entries(),
            l_neg.entries()
        )));
    }
    let (li, lj) = order_pair(l_pos, l_neg);
    let lead = lj.entries().iter().take_while(|&&a| a == -2).count();
    let b1 = if lead == lj.len() { lead - 1 } else { lead };
    let (_, ri) = heads_and_runs(li.entries(), true);
    let (_, rj) = heads_and_runs(lj.entries(), false);
    let mut runs = vec![b1];
    for k in 0..ri.len().max(rj.len()) {
        runs.extend(ri.get(k));
        runs.extend(rj.get(k));
    }
    Ok(BPattern { runs })
}

impl BPattern {
    /// `b_k` with 1-based `k`.
    pub fn b(&self, k: usize) -> usize {
        self.runs[k - 1]
    }

    /// Rebuilds `(L_i, L_j)`.
    pub fn synthesize(&self) -> (Vec<i64>, Vec<i64>) {
        let m = self.runs.len();
        let b = |k: usize| self.runs[k - 1] as i64;
        let twos = |n: i64| std::iter::repeat_n(-2, n as usize);
        let mut li = Vec::new();
        let mut lj: Vec<i64> = twos(b(1)).collect();
        // Head k of L_i exists with b_2k, head k of L_j with b_(2k+1).
        let mut last_head = None;
        for k in 1..=m / 2 {
            li.push(if k == 1 { -b(1) - 2 } else { -b(2 * k - 1) - 3 });
            last_head = Some((true, li.len() - 1));
            li.extend(twos(b(2 * k)));
            if 2 * k < m {
                lj.push(-b(2 * k) - 3);
                last_head = Some((false, lj.len() - 1));
                lj.extend(twos(b(2 * k + 1)));
            }
        }
        if lj.len() == b(1) as usize {
            lj.push(-2);
        } else if let Some((in_i, x)) = last_head {
            if in_i {
                li[x] += 1;
            } else {
                lj[x] += 1;
            }
        }
        (li, lj)
    }
}

/// A two-leg book: the positive leg carries only lambda holes, the negative leg
/// only rho holes, and their values sum to 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SublinkBook {
    positive: (usize, Leg),
    negative: (usize, Leg),
    book: OpenBook,
}

impl SublinkBook {
    /// Legs are given with their 1-based indices in the ambient presentation.
    pub fn new(positive: (usize, Leg), negative: (usize, Leg)) -> Result<SublinkBook> {
        if positive.0 == negative.0 {
            return Err(Error::Precondition("the two legs must differ".into()));
        }
        for (leg, sign) in [(&positive.1, StartSign::Positive), (&negative.1, StartSign::Negative)] {
            let p = one_sided_prefix(leg);
            if p.sign != sign || p.k != leg.len() {
                return Err(Error::Precondition(format!(
                    "leg {:?} with rotations {:?} is not stabilized only {:?}",
                    leg.coefficients().entries(),
                    leg.rotations(),
                    sign
                )));
            }
        }
        if positive.1.r() + negative.1.r() != Rational::one() {
            return Err(Error::Precondition(format!(
                "values {} and {} do not sum to 1",
                positive.1.r(),
                negative.1.r()
            )));
        }
        let mut legs = [(positive.0, &positive.1), (negative.0, &negative.1)];
        legs.sort_by_key(|l| l.0);
        let book = translate_legs(&legs);
        Ok(SublinkBook {
            positive,
            negative,
            book,
        })
    }

    pub fn book(&self) -> &OpenBook {
        &self.book
    }

    pub fn positive(&self) -> (usize, &Leg) {
        (self.positive.0, &self.positive.1)
    }

    pub fn negative(&self) -> (usize, &Leg) {
        (self.negative.0, &self.negative.1)
    }
}

/// One daisy relation application.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DaisyStep {
    pub level: usize,
    pub consumed: Vec<SignedTwist>,
    pub produced: Vec<SignedTwist>,
    #[serde(rename = "D")]
    pub d: BTreeSet<Hole>,
    /// Negative twist pushed at odd levels.
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub n: Option<BTreeSet<Hole>>,
    /// Negative twist pushed at even levels.
    #[serde(rename = "N'", skip_serializing_if = "Option::is_none")]
    pub n_prime: Option<BTreeSet<Hole>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DaisyTrace {
    pub bpattern: BPattern,
    pub steps: Vec<DaisyStep>,
    /// The resulting positive factorization, sorted.
    pub twists: Vec<SignedTwist>,
}

/// Multiset of twists stored against the fixed outer boundary `out`.
struct State {
    all: BTreeSet<Hole>,
    twists: BTreeMap<(Sign, BTreeSet<Hole>), usize>,
    consumed: Vec<SignedTwist>,
    produced: Vec<SignedTwist>,
}

impl State {
    fn norm(&self, s: &BTreeSet<Hole>) -> BTreeSet<Hole> {
        if s.contains(&Hole::OUTER) {
            self.all.difference(s).copied().collect()
        } else {
            s.clone()
        }
    }

    fn take(&mut self, s: &BTreeSet<Hole>, step: usize) -> Result<()> {
        let key = (Sign::Positive, self.norm(s));
        match self.twists.get_mut(&key) {
            Some(c) if *c > 0 => {
                *c -= 1;
                self.consumed.push(SignedTwist::positive(key.1));
                Ok(())
            }
            _ => Err(Error::TemplateMismatch {
                step,
                detail: format!("no positive twist around {}", names(&key.1)),
            }),
        }
    }

    /// Adds a twist, cancelling it against an opposite one if present.
    fn add(&mut self, sign: Sign, s: &BTreeSet<Hole>) {
        let holes = self.norm(s);
        self.produced.push(SignedTwist { sign, holes: holes.clone() });
        if let Some(c) = self.twists.get_mut(&(sign.flip(), holes.clone())) {
            if *c > 0 {
                *c -= 1;
                return;
            }
        }
        *self.twists.entry((sign, holes)).or_insert(0) += 1;
    }

    fn list(&self) -> Vec<SignedTwist> {
        self.twists
            .iter()
            .flat_map(|((sign, holes), &c)| {
                std::iter::repeat_n(
                    SignedTwist {
                        sign: *sign,
                        holes: holes.clone(),
                    },
                    c,
                )
            })
            .collect()
    }

    fn negatives(&self) -> usize {
        self.twists
            .iter()
            .filter(|((s, _), _)| *s == Sign::Negative)
            .map(|(_, c)| c)
            .sum()
    }
}

fn names(s: &BTreeSet<Hole>) -> String {
    let v: Vec<String> = s.iter().map(Hole::to_string).collect();
    format!("{{{}}}", v.join(", "))
}

/// Holes per chain position.
fn levels(leg: usize, l: &Leg, lambda: bool) -> Vec<Vec<Hole>> {
    l.stab_counts()
        .iter()
        .enumerate()
        .map(|(j, &(nl, nr))| {
            if lambda {
                (1..=nl).map(|c| Hole::lambda(leg, j + 1, c)).collect()
            } else {
                (1..=nr).map(|c| Hole::rho(leg, j + 1, c)).collect()
            }
        })
        .collect()
}

/// Maximal runs `(start, end)` of levels, 0-based, each starting at level 0 or
/// at a level with holes.
fn families(levels: &[Vec<Hole>]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = 0;
    for j in 1..=levels.len() {
        if j == levels.len() || !levels[j].is_empty() {
            out.push((start, j - 1));
            start = j;
        }
    }
    out
}

fn upto(levels: &[Vec<Hole>], n: usize) -> impl Iterator<Item = Hole> + '_ {
    levels[..n.min(levels.len())].iter().flatten().copied()
}

/// Pushes the negative core twist through the sublink book until it cancels.
///
/// Both levels structures alternate: the leg starting with `-2` is the inside
/// one. Every step's `D` and pushed negative twist are checked against the
/// positions predicted by the b-pattern, and every step is checked to keep the
/// abelian class and at most two negative twists.
pub fn daisy_rewrite(sub: &SublinkBook) -> Result<DaisyTrace> {
    let (pi, pleg) = sub.positive();
    let (ni, nleg) = sub.negative();
    let bpattern = extract_bpattern(pleg.coefficients(), nleg.coefficients())?;
    let (inside, outside, c0, cinf) = if nleg.coefficients().entries()[0] == -2 {
        (levels(ni, nleg, false), levels(pi, pleg, true), Hole::INNER, Hole::OUTER)
    } else {
        (levels(pi, pleg, true), levels(ni, nleg, false), Hole::OUTER, Hole::INNER)
    };
    let book = sub.book();
    let initial: AbClass = ab_class(book);
    let mut state = State {
        all: book.universe().clone(),
        twists: BTreeMap::new(),
        consumed: Vec::new(),
        produced: Vec::new(),
    };
    for t in book.twists() {
        *state.twists.entry((t.sign, t.holes.clone())).or_insert(0) += 1;
    }

    let ifam = families(&inside);
    let ofam = families(&outside);
    if inside[0].len() != 1 {
        return Err(Error::TemplateMismatch {
            step: 0,
            detail: "first inside level must hold one hole".into(),
        });
    }
    let mut d: BTreeSet<Hole> = inside[0].iter().copied().collect();
    let h1 = *outside[0].last().ok_or_else(|| Error::TemplateMismatch {
        step: 0,
        detail: "first outside level is empty".into(),
    })?;

    let mut steps = Vec::new();
    let total = 2 * ifam.len().max(ofam.len());
    for t in 0..total {
        let level = t + 1;
        let is_inside = t % 2 == 0;
        let fams = if is_inside { &ifam } else { &ofam };
        let &(start, end) = fams.get(t / 2).ok_or_else(|| Error::TemplateMismatch {
            step: level,
            detail: "ran out of families".into(),
        })?;
        let copies = end - start + 1;
        let (mut core, targets, far): (BTreeSet<Hole>, Vec<Hole>, Hole) = if is_inside {
            let tgt = ofam
                .get(t / 2)
                .map(|f| outside[f.0].iter().copied().filter(|&h| t != 0 || h != h1).collect())
                .unwrap_or_default();
            (inside[end + 1..].iter().flatten().copied().collect(), tgt, cinf)
        } else {
            let tgt = ifam.get(t / 2 + 1).map(|f| inside[f.0].clone()).unwrap_or_default();
            (outside[end + 1..].iter().flatten().copied().collect(), tgt, c0)
        };
        core.insert(if is_inside { c0 } else { cinf });

        let terminal = if targets.len() == copies {
            false
        } else if targets.len() + 1 == copies {
            true
        } else {
            return Err(Error::TemplateMismatch {
                step: level,
                detail: format!("{} parallel twists but {} target holes", copies, targets.len()),
            });
        };
        let mut petals: Vec<BTreeSet<Hole>> = vec![d.clone()];
        petals.extend(targets.iter().map(|&h| BTreeSet::from([h])));
        if terminal {
            petals.push(BTreeSet::from([far]));
        }

        state.consumed.clear();
        state.produced.clear();
        for _ in 0..copies {
            state.take(&core, level)?;
        }
        for p in &petals {
            state.take(p, level)?;
        }
        let union: BTreeSet<Hole> = petals.iter().flatten().copied().collect();
        let u: BTreeSet<Hole> = core.union(&union).copied().collect();
        for p in &petals {
            state.add(Sign::Positive, &core.union(p).copied().collect());
        }
        state.add(Sign::Positive, &union);
        state.add(Sign::Negative, &u);
        d = union;

        check_templates(&bpattern, level, terminal, &inside, &outside, (c0, cinf, h1, far), &d, &u)?;
        let now = AbClass::from_twists(book.universe(), book.outer(), &state.list());
        if !ab_equal(&now, &initial)? {
            return Err(Error::TemplateMismatch {
                step: level,
                detail: "abelian class changed".into(),
            });
        }
        if state.negatives() > 2 {
            return Err(Error::TemplateMismatch {
                step: level,
                detail: format!("{} negative twists", state.negatives()),
            });
        }
        steps.push(DaisyStep {
            level,
            consumed: std::mem::take(&mut state.consumed),
            produced: std::mem::take(&mut state.produced),
            d: d.clone(),
            n: is_inside.then(|| state.norm(&u)),
            n_prime: (!is_inside).then(|| state.norm(&u)),
        });
        if terminal {
            break;
        }
    }
    if state.negatives() != 0 {
        return Err(Error::TemplateMismatch {
            step: steps.len(),
            detail: format!("{} negative twists remain", state.negatives()),
        });
    }
    Ok(DaisyTrace {
        bpattern,
        steps,
        twists: state.list(),
    })
}

/// Expected `D` and pushed negative twist after step `level`, located by the
/// b-pattern alone.
#[allow(clippy::too_many_arguments)]
fn check_templates(
    b: &BPattern,
    level: usize,
    terminal: bool,
    inside: &[Vec<Hole>],
    outside: &[Vec<Hole>],
    (c0, cinf, h1, far): (Hole, Hole, Hole, Hole),
    d: &BTreeSet<Hole>,
    u: &BTreeSet<Hole>,
) -> Result<()> {
    let bb = |k: usize| b.runs.get(k - 1).copied().unwrap_or(0);
    let half = level / 2;
    let (idepth, odepth) = if level % 2 == 1 {
        (
            ((1..=half).map(|k| bb(2 * k - 1)).sum::<usize>() + half).max(1),
            (1..=half).map(|k| bb(2 * k)).sum::<usize>() + half + 1,
        )
    } else {
        (
            (1..=half).map(|k| bb(2 * k - 1)).sum::<usize>() + half,
            (1..half).map(|k| bb(2 * k)).sum::<usize>() + half,
        )
    };
    let extra = terminal.then_some(far);
    let want_d: BTreeSet<Hole> = upto(inside, idepth)
        .chain(upto(outside, odepth))
        .filter(|&h| h != h1)
        .chain(extra)
        .collect();
    let want_u: BTreeSet<Hole> = if level % 2 == 1 {
        std::iter::once(c0)
            .chain(inside.iter().flatten().copied())
            .chain(upto(outside, odepth).filter(|&h| h != h1))
            .chain(extra)
            .collect()
    } else {
        std::iter::once(cinf)
            .chain(outside.iter().flatten().copied().filter(|&h| h != h1))
            .chain(upto(inside, idepth))
            .chain(extra)
            .collect()
    };
    for (what, got, want) in [("D", d, &want_d), ("pushed negative twist", u, &want_u)] {
        if got != want {
            return Err(Error::TemplateMismatch {
                step: level,
                detail: format!("{what} is {} but the pattern predicts {}", names(got), names(want)),
            });
        }
    }
    Ok(())
}

/// True iff `candidate` is all positive and has the class of `book`.
pub fn verify_certificate(book: &OpenBook, candidate: &[SignedTwist]) -> Result<bool> {
    let target = ab_class(book);
    let got = AbClass::from_twists(book.universe(), book.outer(), candidate);
    let same = ab_equal(&target, &got)?;
    Ok(same && candidate.iter().all(|t| t.sign == Sign::Positive))
}
