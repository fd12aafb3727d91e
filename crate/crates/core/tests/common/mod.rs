#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sfs_fill::cf::dual_chain;
use sfs_fill::presentation::stab_count;
use sfs_fill::{Chain, Hole, Leg, Presentation, SignedTwist};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn chain(v: &[i64]) -> Chain {
    Chain::new(v.to_vec()).unwrap()
}

pub fn leg(c: &[i64], r: &[i64]) -> Leg {
    Leg::new(chain(c), r.to_vec()).unwrap()
}

/// Leg with every stabilization of sign `sign`.
pub fn extreme(c: &Chain, sign: i64) -> Leg {
    let r = (0..c.len()).map(|j| sign * stab_count(c, j)).collect();
    Leg::new(c.clone(), r).unwrap()
}

/// `p/q` in lowest terms, `q > 0`, for the chain's value, by plain integers.
pub fn eval_fraction(c: &[i64]) -> (i128, i128) {
    let (mut p, mut q) = (*c.last().unwrap() as i128, 1i128);
    for &a in c.iter().rev().skip(1) {
        // a - q/p
        let (np, nq) = (a as i128 * p - q, p);
        p = np;
        q = nq;
    }
    if q < 0 {
        p = -p;
        q = -q;
    }
    let g = gcd(p.abs(), q);
    (p / g, q / g)
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `s = -1/value` as `(p, q)`.
pub fn s_fraction(c: &[i64]) -> (i128, i128) {
    let (p, q) = eval_fraction(c);
    // -q/p with p < 0
    (q, -p)
}

pub fn s_sum_is_one(a: &[i64], b: &[i64]) -> bool {
    let (p1, q1) = s_fraction(a);
    let (p2, q2) = s_fraction(b);
    p1 * q2 + p2 * q1 == q1 * q2
}

/// Chains `A` with `|A| + |dual A| <= max_total`, found by bounding the dual
/// length `1 + sum(-a - 2)`.
pub fn dual_pairs(max_total: usize) -> Vec<(Chain, Chain)> {
    fn rec(cur: &mut Vec<i64>, budget: usize, out: &mut Vec<Vec<i64>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        for a in 2..=(budget as i64 + 1) {
            let cost = 1 + (a - 2) as usize;
            if cost <= budget {
                cur.push(-a);
                rec(cur, budget - cost, out);
                cur.pop();
            }
        }
    }
    let mut raw = Vec::new();
    rec(&mut Vec::new(), max_total - 1, &mut raw);
    raw.into_iter()
        .map(|a| {
            let c = Chain::new(a).unwrap();
            let d = dual_chain(&c).unwrap();
            (c, d)
        })
        .filter(|(c, d)| c.len() + d.len() <= max_total)
        .collect()
}

/// Every chain with entries in `lo..=-2` and length `1..=max_len`.
pub fn chains(lo: i64, max_len: usize) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = vec![vec![]];
    let mut all = Vec::new();
    for _ in 0..max_len {
        out = out
            .iter()
            .flat_map(|c| (lo..=-2).map(move |a| [c.clone(), vec![a]].concat()))
            .collect();
        all.extend(out.iter().cloned());
    }
    all
}

/// Unordered chain triples with entries in `lo..=-2` and total length `<= max_total`.
pub fn manifolds(lo: i64, max_total: usize) -> Vec<[Chain; 3]> {
    let cs = chains(lo, max_total - 2);
    let mut out = Vec::new();
    for a in 0..cs.len() {
        for b in a..cs.len() {
            for c in b..cs.len() {
                if cs[a].len() + cs[b].len() + cs[c].len() <= max_total {
                    out.push([chain(&cs[a]), chain(&cs[b]), chain(&cs[c])]);
                }
            }
        }
    }
    out
}

pub fn random_chain(rng: &mut impl Rng, max_len: usize, lo: i64) -> Chain {
    let n = rng.gen_range(1..=max_len);
    Chain::new((0..n).map(|_| rng.gen_range(lo..=-2)).collect()).unwrap()
}

pub fn random_leg(rng: &mut impl Rng, max_len: usize, lo: i64) -> Leg {
    let c = random_chain(rng, max_len, lo);
    let r = (0..c.len())
        .map(|j| {
            let s = stab_count(&c, j);
            -s + 2 * rng.gen_range(0..=s)
        })
        .collect();
    Leg::new(c, r).unwrap()
}

pub fn random_presentation(rng: &mut impl Rng, max_len: usize, lo: i64) -> Presentation {
    Presentation::new((0..3).map(|_| random_leg(rng, max_len, lo)).collect()).unwrap()
}

/// Signed number of twists containing all of `holes`.
pub fn count_through(twists: &[SignedTwist], holes: &[Hole]) -> i64 {
    twists
        .iter()
        .filter(|t| holes.iter().all(|h| t.holes.contains(h)))
        .map(|t| t.sign.value())
        .sum()
}

pub fn set(names: &[&str]) -> BTreeSet<Hole> {
    names.iter().map(|n| n.parse().unwrap()).collect()
}
