mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use sfs_fill::abmap::{positive_feasible, AbClass, DEFAULT_MAX_HOLES};
use sfs_fill::{Hole, SignedTwist};

fn holes(n: usize) -> Vec<Hole> {
    std::iter::once(Hole::INNER).chain((1..n).map(|c| Hole::lambda(1, 1, c))).collect()
}

/// Plain exhaustive search: a multiplicity for every nonempty subset, raised
/// one at a time while no hole or pair it covers is exhausted.
fn naive(singles: &mut [i64], pairs: &mut [Vec<i64>], subsets: &[Vec<usize>], k: usize) -> bool {
    if k == subsets.len() {
        return singles.iter().all(|&v| v == 0) && pairs.iter().flatten().all(|&v| v == 0);
    }
    let s = &subsets[k];
    let shift = |singles: &mut [i64], pairs: &mut [Vec<i64>], d: i64| {
        for (i, &a) in s.iter().enumerate() {
            singles[a] += d;
            for &b in &s[i + 1..] {
                pairs[a][b] += d;
            }
        }
    };
    let mut x = 0;
    let found = loop {
        if naive(singles, pairs, subsets, k + 1) {
            break true;
        }
        let room = s.iter().enumerate().all(|(i, &a)| singles[a] > 0 && s[i + 1..].iter().all(|&b| pairs[a][b] > 0));
        if !room {
            break false;
        }
        shift(singles, pairs, -1);
        x += 1;
    };
    shift(singles, pairs, x);
    found
}

fn naive_feasible(n: usize, class: &AbClass) -> bool {
    let hs = holes(n);
    let mut singles: Vec<i64> = hs.iter().map(|&h| class.single(h)).collect();
    // Upper triangle only; subsets list holes in increasing order.
    let mut pairs: Vec<Vec<i64>> = (0..n)
        .map(|a| (0..n).map(|b| if a < b { class.pair(hs[a], hs[b]) } else { 0 }).collect())
        .collect();
    let subsets: Vec<Vec<usize>> = (1u32..(1 << n))
        .map(|m| (0..n).filter(|x| m >> x & 1 == 1).collect())
        .collect();
    naive(&mut singles, &mut pairs, &subsets, 0)
}

fn twist_strategy(n: usize) -> impl Strategy<Value = (bool, u32)> {
    (prop::bool::weighted(0.8), 1u32..(1 << n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn search_matches_naive_enumeration(
        n in 1usize..=5,
        raw in prop::collection::vec(twist_strategy(5), 0..6),
    ) {
        let hs = holes(n);
        let universe: BTreeSet<Hole> = hs.iter().copied().chain([Hole::OUTER]).collect();
        let twists: Vec<SignedTwist> = raw
            .iter()
            .map(|&(pos, mask)| {
                let set = (0..n).filter(|x| mask >> x & 1 == 1).map(|x| hs[x]);
                if pos { SignedTwist::positive(set) } else { SignedTwist::negative(set) }
            })
            .filter(|t| !t.holes.is_empty())
            .collect();
        let class = AbClass::from_twists(&universe, Hole::OUTER, &twists);
        let fast = positive_feasible(&class, DEFAULT_MAX_HOLES).unwrap();
        prop_assert_eq!(fast.is_feasible(), naive_feasible(n, &class));
        if fast.is_feasible() {
            let replay = AbClass::from_twists(&universe, Hole::OUTER, &fast.witness_twists());
            prop_assert_eq!(replay, class);
        }
    }
}

#[test]
fn naive_enumerator_sanity() {
    let hs = holes(3);
    let universe: BTreeSet<Hole> = hs.iter().copied().chain([Hole::OUTER]).collect();
    let pos = AbClass::from_twists(&universe, Hole::OUTER, &[SignedTwist::positive(hs.clone())]);
    assert!(naive_feasible(3, &pos));
    let neg = AbClass::from_twists(&universe, Hole::OUTER, &[SignedTwist::negative([hs[0]])]);
    assert!(!naive_feasible(3, &neg));
    // A lone pair twist minus its boundary twists is not positive.
    let mixed = AbClass::from_twists(
        &universe,
        Hole::OUTER,
        &[
            SignedTwist::positive([hs[0], hs[1]]),
            SignedTwist::positive([hs[0], hs[1], hs[2]]),
            SignedTwist::negative([hs[2]]),
        ],
    );
    assert!(!naive_feasible(3, &mixed));
}
