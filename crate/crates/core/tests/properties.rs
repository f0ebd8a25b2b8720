use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use kummer3_core::arith::{factorize, is_prime, normalize_radicand, Radicand};
use kummer3_core::conductor::{companion_values, conductor_of, enumerate_companions, multiplicity, Conductor};
use kummer3_core::eisenstein::{lambda_cube_congruent_one, split_prime, EisensteinInt};
use kummer3_core::rank::{bwb_bounds, classify_item, ramification_profile, TheoremItem};
use kummer3_core::{classify, Error};

const BOUND: u64 = 100_000;

fn normalized_radicands(bound: u64) -> impl Iterator<Item = Radicand> {
    (2..bound).filter_map(|n| {
        let fact = factorize(n).unwrap();
        if !fact.is_cube_free() {
            return None;
        }
        let r = Radicand::from_cube_free(&fact).unwrap();
        r.normalized.then_some(r)
    })
}

#[test]
fn multiplets_partition_the_fields() {
    let mut by_conductor: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for r in normalized_radicands(BOUND) {
        by_conductor.entry(conductor_of(&r).f).or_default().push(r.d);
    }
    let mut seen = BTreeSet::new();
    let mut total = 0u64;
    for (&f, members) in &by_conductor {
        let c = Conductor::from_value(f).unwrap();
        let comps = companion_values(&c).unwrap();
        let below: Vec<u64> = comps.iter().copied().filter(|&d| d < BOUND).collect();
        assert_eq!(&below, members, "f={f}");
        for d in comps {
            assert!(seen.insert(d), "d={d} in two multiplets");
        }
        total += members.len() as u64;
        // companions all share one theorem item
        let items: BTreeSet<TheoremItem> = members
            .iter()
            .map(|&d| classify(d).unwrap().item)
            .collect();
        assert_eq!(items.len(), 1, "f={f}");
    }
    assert_eq!(total, normalized_radicands(BOUND).count() as u64);
}

#[test]
fn companion_enumeration_matches_formula_for_small_conductors() {
    let mut realized = 0;
    for f in 2..=10_000u64 {
        let Ok(c) = Conductor::from_value(f) else { continue };
        match multiplicity(&c) {
            Ok(m) => {
                let mult = enumerate_companions(&c).unwrap();
                assert_eq!(mult.companions.len() as u64, m);
                for r in &mult.companions {
                    assert_eq!(conductor_of(r).f, f);
                    assert!(r.normalized);
                }
                realized += 1;
            }
            Err(Error::NoFieldExists(_)) => {}
            Err(e) => panic!("f={f}: {e}"),
        }
    }
    assert!(realized > 1000);
}

#[test]
fn rank_and_bounds_invariants() {
    let mut conductors = BTreeSet::new();
    for r in normalized_radicands(BOUND) {
        conductors.insert(conductor_of(&r).f);
    }
    for f in conductors {
        let c = Conductor::from_value(f).unwrap();
        let p = ramification_profile(&c);
        assert!(p.t + p.qstar >= 2, "f={f}");
        if p.t == 1 {
            assert_eq!(p.qstar, 1, "f={f}");
        }
        let b = bwb_bounds(&c);
        assert!(b.delta_tilde >= 0 && b.lower <= b.upper, "f={f}");
        match classify_item(&c) {
            TheoremItem::Honda(_) => assert_eq!((p.ambiguous_rank, b.exact_r), (0, Some(0))),
            TheoremItem::Ismaili1(_) | TheoremItem::Ismaili2(_) => {
                assert_eq!((p.ambiguous_rank, b.exact_r), (1, Some(1)))
            }
            TheoremItem::RankTwoOrMore => assert!(p.ambiguous_rank >= 2),
            TheoremItem::Other => panic!("f={f} has no item"),
        }
    }
}

fn primes_with_residue(r: u64) -> Vec<u64> {
    (5..500).filter(|&p| p % 9 == r && is_prime(p)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    /// Replacing primes of the conductor by others in the same class mod 9
    /// and changing the exponents of d never changes the item.
    #[test]
    fn item_depends_only_on_residue_classes(
        residues in proptest::collection::vec(prop::sample::select(vec![1u64, 2, 4, 5, 7, 8]), 1..4),
        picks in proptest::collection::vec((0usize..40, 0usize..40, 1u32..3), 4),
        e3 in 0u32..3,
    ) {
        let mut a = 3u64.pow(e3);
        let mut b = 3u64.pow(e3);
        let (mut used_a, mut used_b) = (BTreeSet::new(), BTreeSet::new());
        for (i, &r) in residues.iter().enumerate() {
            let pool = primes_with_residue(r);
            let (ia, ib, exp) = picks[i];
            let (pa, pb) = (pool[ia % pool.len()], pool[ib % pool.len()]);
            prop_assume!(used_a.insert(pa) && used_b.insert(pb));
            a *= pa.pow(exp);
            b *= pb.pow(3 - exp);
        }
        let (ra, rb) = (normalize_radicand(a).unwrap(), normalize_radicand(b).unwrap());
        let (ca, cb) = (conductor_of(&ra), conductor_of(&rb));
        prop_assume!(ca.e == cb.e);
        prop_assume!(multiplicity(&ca).is_ok() && multiplicity(&cb).is_ok());
        prop_assert_eq!(classify_item(&ca), classify_item(&cb));
    }

    /// `ℓ ≡ ±1 (mod 9)` exactly when the primary primes above `ℓ` are
    /// `≡ 1 (mod λ³)`, which is how the norm-index invariant is computed.
    #[test]
    fn norm_index_congruence_reduction(idx in 0usize..5_000) {
        let primes: Vec<u64> = (2..50_000).filter(|&p| p != 3 && is_prime(p)).collect();
        let l = primes[idx % primes.len()];
        let factors = if l % 3 == 1 {
            let s = split_prime(l).unwrap();
            vec![s.pi1, s.pi2]
        } else {
            vec![EisensteinInt::rational(-(l as i64))]
        };
        let pm1 = matches!(l % 9, 1 | 8);
        for pi in factors {
            prop_assert_eq!(lambda_cube_congruent_one(pi).unwrap(), pm1, "l={}", l);
        }
    }
}
