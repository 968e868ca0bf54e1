use std::collections::BTreeSet;

use dtomo::cyclotomic::CycNum;
use dtomo::exec::Exec;
use dtomo::modelset::{
    find_homothety, generate_patch, is_pv, membership, pv_unit, star_of, HomothetySearch, LatticePoint, ModelSetSpec,
};
use dtomo::rational::{q, qi, totient};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn point(n: u64, c: &[i64]) -> CycNum {
    LatticePoint::from_i64(n, c).embed()
}

fn arb_pair() -> impl Strategy<Value = (u64, Vec<i64>, Vec<i64>)> {
    prop::sample::select(vec![5u64, 8, 12]).prop_flat_map(|n| {
        let k = totient(n) as usize;
        (Just(n), prop::collection::vec(-9i64..=9, k), prop::collection::vec(-9i64..=9, k))
    })
}

/// Box scan with exact predicates only.
fn naive_patch(spec: &ModelSetSpec, r: i64, bound: i64) -> BTreeSet<LatticePoint> {
    let k = totient(spec.n) as usize;
    let side = (2 * bound + 1) as usize;
    let mut out = BTreeSet::new();
    for mut t in 0..side.pow(k as u32) {
        let c: Vec<i64> = (0..k)
            .map(|_| {
                let v = (t % side) as i64 - bound;
                t /= side;
                v
            })
            .collect();
        let p = LatticePoint::from_i64(spec.n, &c);
        let z = p.embed();
        let d = &CycNum::from_int(z.order(), r * r) - &(&z * &z.conj());
        if d.real_sign().unwrap() >= 0 && membership(&p, spec).unwrap() {
            out.insert(p);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn star_map_is_a_ring_homomorphism((n, a, b) in arb_pair()) {
        let spec = ModelSetSpec::standard(n, &qi(1)).unwrap();
        let (x, y) = (point(n, &a), point(n, &b));
        let s = |v: &CycNum| star_of(v, &spec).unwrap();
        prop_assert_eq!(s(&(&x + &y)), &s(&x) + &s(&y));
        prop_assert_eq!(s(&(&x * &y)), &s(&x) * &s(&y));
    }
}

#[test]
fn patches_match_a_naive_scan() {
    for (n, r, bound) in [(4u64, 3, 4), (3, 3, 4), (5, 2, 6), (8, 2, 6), (12, 2, 6)] {
        let spec = ModelSetSpec::standard(n, &qi(1)).unwrap();
        let fast: BTreeSet<LatticePoint> = generate_patch(&spec, &qi(r), Exec::Sequential).unwrap().points.into_iter().collect();
        assert_eq!(fast, naive_patch(&spec, r, bound), "n = {n}");
    }
}

#[test]
fn execution_modes_agree() {
    for n in [5u64, 8, 12] {
        let spec = ModelSetSpec::standard(n, &qi(1)).unwrap();
        let a = generate_patch(&spec, &qi(5), Exec::Sequential).unwrap();
        let b = generate_patch(&spec, &qi(5), Exec::Parallel).unwrap();
        assert_eq!(a.points, b.points);
    }
}

#[test]
fn patches_grow_with_radius_and_window() {
    for n in [5u64, 8, 12] {
        let spec = ModelSetSpec::standard(n, &qi(1)).unwrap();
        let small: BTreeSet<_> = generate_patch(&spec, &qi(3), Exec::Parallel).unwrap().points.into_iter().collect();
        let big: BTreeSet<_> = generate_patch(&spec, &qi(4), Exec::Parallel).unwrap().points.into_iter().collect();
        assert!(small.is_subset(&big) && small.len() < big.len());
        let wide = ModelSetSpec::standard(n, &q(3, 2)).unwrap();
        let w: BTreeSet<_> = generate_patch(&wide, &qi(3), Exec::Parallel).unwrap().points.into_iter().collect();
        assert!(small.is_subset(&w) && small.len() < w.len());
    }
}

#[test]
fn pv_units_contract_internal_space() {
    for n in [5u64, 8, 12] {
        let spec = ModelSetSpec::standard(n, &qi(1)).unwrap();
        let l = pv_unit(n).unwrap();
        assert!(is_pv(&l, &spec).unwrap());
        let s = star_of(&l, &spec).unwrap();
        let gap = &CycNum::one(s.order()) - &(&s * &s.conj());
        assert_eq!(gap.real_sign().unwrap(), 1);
    }
}

#[test]
fn homotheties_land_in_the_model_set() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in [5u64, 8, 12] {
        let spec = ModelSetSpec::standard(n, &qi(1)).unwrap();
        let k = totient(n) as usize;
        for _ in 0..10 {
            let pts: Vec<CycNum> = (0..rng.random_range(1..6))
                .map(|_| {
                    let c: Vec<(i64, dtomo::Q)> =
                        (0..k).map(|j| (j as i64, q(rng.random_range(-5..=5), rng.random_range(1..=4)))).collect();
                    CycNum::from_monomials(n, &c)
                })
                .collect();
            let h = find_homothety(&pts, &spec, HomothetySearch::default()).unwrap();
            for p in &pts {
                assert!(membership(&h.apply(p).unwrap(), &spec).unwrap());
            }
        }
    }
}
