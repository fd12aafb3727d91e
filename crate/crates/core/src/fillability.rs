//! Deciding Stein fillability.
//!
//! A structure is fillable exactly when a leg stabilized only positively at
//! its start and a leg stabilized only negatively at its start have truncations
//! whose values sum to 1. Such a pair bounds a sublink presenting tight
//! `S^1 x S^2`; its book gets an explicit positive factorization.

use serde::Serialize;

use crate::abmap::{ab_class, positive_feasible, FeasibilityResult};
use crate::cf::{truncation_values, Rational};
use crate::error::{Error, Result};
use crate::factorization::{daisy_rewrite, verify_certificate, SublinkBook};
use crate::openbook::{translate, SignedTwist};
use crate::presentation::{opposite_start_check, PrefixData, Presentation, StartSign};

/// Legs are 1-based; truncations count unknots.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SublinkChoice {
    pub positive_leg: usize,
    pub negative_leg: usize,
    pub trunc_pos: usize,
    pub trunc_neg: usize,
    pub s_pos: Rational,
    pub s_neg: Rational,
}

fn legs_with(prefixes: &[PrefixData], sign: StartSign) -> impl Iterator<Item = usize> + '_ {
    (0..prefixes.len()).filter(move |&x| prefixes[x].sign == sign)
}

pub fn find_sublinks(p: &Presentation) -> Vec<SublinkChoice> {
    let pre = p.prefixes();
    let mut out = Vec::new();
    for i in legs_with(&pre, StartSign::Positive) {
        let vi = truncation_values(&p.legs()[i].coefficients().prefix(pre[i].k));
        for j in legs_with(&pre, StartSign::Negative) {
            let vj = truncation_values(&p.legs()[j].coefficients().prefix(pre[j].k));
            for (mi, si) in vi.iter().enumerate() {
                for (mj, sj) in vj.iter().enumerate() {
                    if si + sj == Rational::one() {
                        out.push(SublinkChoice {
                            positive_leg: i + 1,
                            negative_leg: j + 1,
                            trunc_pos: mi + 1,
                            trunc_neg: mj + 1,
                            s_pos: si.clone(),
                            s_neg: sj.clone(),
                        });
                    }
                }
            }
        }
    }
    out
}

/// First `(positive leg, negative leg)` with `q_i + q_j >= 1`.
pub fn q_condition(p: &Presentation) -> Option<(usize, usize)> {
    let pre = p.prefixes();
    let neg: Vec<usize> = legs_with(&pre, StartSign::Negative).collect();
    let found = legs_with(&pre, StartSign::Positive)
        .flat_map(|i| neg.iter().map(move |&j| (i, j)))
        .find(|&(i, j)| &pre[i].q + &pre[j].q >= Rational::one());
    found.map(|(i, j)| (i + 1, j + 1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    Fillable,
    NotFillable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Obstruction {
    /// No leg starts fully positive, or none fully negative.
    FailedOppositeCheck,
    /// `q` per leg; no opposite pair reaches 1.
    NoQualifyingPair { q_values: Vec<Rational> },
    TraceObstruction { trace: ObstructionTrace },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub status: Status,
    pub sublink: Option<SublinkChoice>,
    /// Positive factorization of the sublink book.
    pub geometric_certificate: Option<Vec<SignedTwist>>,
    /// Search witness for the full book; absent above the hole limit.
    pub abelian_certificate: Option<FeasibilityResult>,
    pub obstruction: Option<Obstruction>,
}

impl Verdict {
    pub fn is_fillable(&self) -> bool {
        self.status == Status::Fillable
    }
}

/// Sublink book of a choice, keeping the ambient leg indices.
pub fn sublink_book(p: &Presentation, c: &SublinkChoice) -> Result<SublinkBook> {
    SublinkBook::new(
        (c.positive_leg, p.leg(c.positive_leg).truncated(c.trunc_pos)),
        (c.negative_leg, p.leg(c.negative_leg).truncated(c.trunc_neg)),
    )
}

pub fn decide(p: &Presentation) -> Result<Verdict> {
    decide_with_limit(p, crate::abmap::DEFAULT_MAX_HOLES)
}

/// As [`decide`]; the full-book search runs only up to `max_holes` holes.
pub fn decide_with_limit(p: &Presentation, max_holes: usize) -> Result<Verdict> {
    if let Some(choice) = find_sublinks(p).into_iter().next() {
        let sub = sublink_book(p, &choice)?;
        let twists = daisy_rewrite(&sub)?.twists;
        if !verify_certificate(sub.book(), &twists)? {
            return Err(Error::validation("sublink certificate verifies", "abelian class differs"));
        }
        let abelian = match positive_feasible(&ab_class(&translate(p)), max_holes) {
            Ok(r) if r.is_feasible() => Some(r),
            Ok(_) => {
                return Err(Error::validation(
                    "fillable books are positively feasible",
                    "search found no positive factorization",
                ))
            }
            Err(Error::SizeGuard { .. }) => None,
            Err(e) => return Err(e),
        };
        return Ok(Verdict {
            status: Status::Fillable,
            sublink: Some(choice),
            geometric_certificate: Some(twists),
            abelian_certificate: abelian,
            obstruction: None,
        });
    }
    let obstruction = if !opposite_start_check(p) {
        Obstruction::FailedOppositeCheck
    } else {
        let trace = obstruction_trace(p);
        if trace.conclusion == Conclusion::NoPositiveFactorization {
            Obstruction::TraceObstruction { trace }
        } else {
            Obstruction::NoQualifyingPair {
                q_values: p.prefixes().into_iter().map(|x| x.q).collect(),
            }
        }
    };
    Ok(Verdict {
        status: Status::NotFillable,
        sublink: None,
        geometric_certificate: None,
        abelian_certificate: None,
        obstruction: Some(obstruction),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Conclusion {
    NoPositiveFactorization,
    OutsideHypotheses,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LevelCase {
    /// A partition with fewer parts is available.
    #[serde(rename = "(i)")]
    I,
    /// Not enough partitions with the right number of parts.
    #[serde(rename = "(ii)")]
    II,
    /// Enough partitions with exactly `J + 1` parts.
    #[serde(rename = "(iii)")]
    III,
}

/// Which leg plays which part in the trace; 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Roles {
    /// The only leg starting fully positive.
    pub third: usize,
    pub first: usize,
    pub second: usize,
    /// Whether every stabilization sign was reversed to get one positive leg.
    pub flipped: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceLevel {
    /// Level of the positive leg; one past its run for the final check.
    pub j: usize,
    /// Partitions to be lifted at this level.
    pub need: usize,
    /// Unused partitions as `(parts, count)`, fewest parts first.
    pub partitions: Vec<(usize, usize)>,
    pub case: LevelCase,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObstructionTrace {
    pub role_assignment: Option<Roles>,
    pub levels: Vec<TraceLevel>,
    pub conclusion: Conclusion,
}

/// Walks the lambda levels of the only fully positive leg, lifting the
/// twists around them along partitions of the rho holes of the first leg.
///
/// Truncating the first leg's run after `j` unknots gives a partition into
/// `1 + (number of rho holes on levels <= j)` parts. Level `J` of the
/// positive leg needs `|lambda_J|` partitions into exactly `J + 1` parts
/// (one fewer at `J = 1`).
pub fn obstruction_trace(p: &Presentation) -> ObstructionTrace {
    let outside = |roles, levels| ObstructionTrace {
        role_assignment: roles,
        levels,
        conclusion: Conclusion::OutsideHypotheses,
    };
    let mut p = p.clone();
    let mut pre = p.prefixes();
    let count = |pre: &[PrefixData], s| pre.iter().filter(|x| x.sign == s).count();
    if count(&pre, StartSign::Positive) == 0 || count(&pre, StartSign::Negative) == 0 {
        return outside(None, vec![]);
    }
    let flipped = count(&pre, StartSign::Positive) == 2;
    if flipped {
        p = p.mirrored();
        pre = p.prefixes();
    }
    if count(&pre, StartSign::Positive) != 1 {
        return outside(None, vec![]);
    }
    let third = legs_with(&pre, StartSign::Positive).next().expect("one positive leg");
    let mut others: Vec<usize> = (0..3).filter(|&x| x != third).collect();
    others.sort_by(|&a, &b| pre[b].q.cmp(&pre[a].q).then(a.cmp(&b)));
    let roles = Roles {
        third: third + 1,
        first: others[0] + 1,
        second: others[1] + 1,
        flipped,
    };

    let first = &p.legs()[others[0]];
    let k1 = if pre[others[0]].sign == StartSign::Negative {
        pre[others[0]].k
    } else {
        0
    };
    let mut groups: Vec<(usize, usize)> = Vec::new();
    let mut acc = 0;
    for &(_, rho) in first.stab_counts().iter().take(k1) {
        acc += rho;
        match groups.last_mut() {
            Some(g) if g.0 == 1 + acc => g.1 += 1,
            _ => groups.push((1 + acc, 1)),
        }
    }

    let lam: Vec<usize> = p.legs()[third].stab_counts().iter().map(|c| c.0).collect();
    let k3 = pre[third].k;
    let mut levels = Vec::new();
    let mut jprev = 0;
    loop {
        // At the first level one lambda hole serves as the outer boundary.
        let next = (jprev + 1..=lam.len()).find(|&j| lam[j - 1] > usize::from(j == 1));
        let Some(j) = next.filter(|&j| j <= k3) else {
            let case = if groups.iter().any(|g| g.0 <= k3 + 1) {
                LevelCase::I
            } else {
                LevelCase::II
            };
            levels.push(TraceLevel {
                j: k3 + 1,
                need: 0,
                partitions: groups.clone(),
                case,
            });
            let conclusion = if case == LevelCase::I {
                Conclusion::OutsideHypotheses
            } else {
                Conclusion::NoPositiveFactorization
            };
            return ObstructionTrace {
                role_assignment: Some(roles),
                levels,
                conclusion,
            };
        };
        let need = lam[j - 1] - usize::from(j == 1);
        let snapshot = groups.clone();
        let case = match groups.first_mut() {
            Some(g) if g.0 < j + 1 => LevelCase::I,
            Some(g) if g.0 == j + 1 && g.1 >= need => {
                g.1 -= need;
                if g.1 == 0 {
                    groups.remove(0);
                }
                LevelCase::III
            }
            _ => LevelCase::II,
        };
        levels.push(TraceLevel {
            j,
            need,
            partitions: snapshot,
            case,
        });
        match case {
            LevelCase::III => jprev = j,
            LevelCase::I => return outside(Some(roles), levels),
            LevelCase::II => {
                return ObstructionTrace {
                    role_assignment: Some(roles),
                    levels,
                    conclusion: Conclusion::NoPositiveFactorization,
                }
            }
        }
    }
}
