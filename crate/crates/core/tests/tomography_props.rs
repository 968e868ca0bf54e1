use std::collections::HashMap;

use dtomo::cyclotomic::CycNum;
use dtomo::enumerate::{eval_f, Quadruple};
use dtomo::exec::Exec;
use dtomo::modelset::LatticePoint;
use dtomo::rational::totient;
use dtomo::tomography::{
    brute_force_oracle, cross_ratio, cross_ratio_dirs, is_convex_subset, slope, slope_of, xray, Direction,
    OracleResult, Region, Slope,
};
use proptest::prelude::*;

fn lp(n: u64, c: &[i64]) -> LatticePoint {
    LatticePoint::from_i64(n, c)
}

fn arb_set(n: u64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-4i64..=4, totient(n) as usize), 1..12)
}

fn frame_slope(m: u64, h: u64) -> Slope {
    if 2 * h == m {
        Slope::Inf
    } else {
        slope_of(&(&CycNum::one(m) + &CycNum::zeta(m, h as i64)))
    }
}

/// Four pairwise nonparallel directions of Z[zeta_12].
fn arb_dirs() -> impl Strategy<Value = Vec<Direction>> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, 4), 4).prop_filter_map("parallel or zero", |cs| {
        let d: Vec<Direction> = cs.iter().map(|c| Direction::from_i64(12, c)).collect::<Result<_, _>>().ok()?;
        for i in 0..4 {
            for j in i + 1..4 {
                if d[i].is_parallel(&d[j]) {
                    return None;
                }
            }
        }
        Some(d)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn xray_mass_and_translation(pts in arb_set(8), t in prop::collection::vec(-5i64..=5, 4), u in prop::collection::vec(-2i64..=2, 4)) {
        let d = match Direction::from_i64(8, &u) { Ok(d) => d, Err(_) => return Ok(()) };
        let mut f: Vec<LatticePoint> = pts.iter().map(|c| lp(8, c)).collect();
        f.sort();
        f.dedup();
        let row = xray(&f, &d).unwrap();
        prop_assert_eq!(row.total(), f.len());
        let g: Vec<LatticePoint> = f
            .iter()
            .map(|p| lp(8, &p.coeffs_i64().unwrap().iter().zip(&t).map(|(a, b)| a + b).collect::<Vec<_>>()))
            .collect();
        prop_assert_eq!(xray(&g, &d).unwrap().counts(), row.counts());
    }

    #[test]
    fn cross_ratio_routes_agree(d in arb_dirs()) {
        let s: Vec<Slope> = d.iter().map(slope).collect();
        let a = cross_ratio([&s[0], &s[1], &s[2], &s[3]]).unwrap();
        let b = cross_ratio_dirs([&d[0], &d[1], &d[2], &d[3]]).unwrap();
        prop_assert_eq!(a.demote(), b.demote());
    }

    #[test]
    fn cross_ratio_is_invariant_under_linear_maps(
        d in arb_dirs(),
        al in prop::collection::vec(-3i64..=3, 4),
        be in prop::collection::vec(-3i64..=3, 4),
    ) {
        let (a, b) = (lp(12, &al).embed(), lp(12, &be).embed());
        let det = &(&a * &a.conj()) - &(&b * &b.conj());
        prop_assume!(!det.is_zero());
        let img: Vec<Direction> = d
            .iter()
            .map(|x| Direction::new(&(&(&a * x.rep()) + &(&b * &x.rep().conj())), 12).unwrap())
            .collect();
        let before = cross_ratio_dirs([&d[0], &d[1], &d[2], &d[3]]).unwrap();
        let after = cross_ratio_dirs([&img[0], &img[1], &img[2], &img[3]]).unwrap();
        prop_assert_eq!(before.demote(), after.demote());
    }

    #[test]
    fn slope_cross_ratio_is_the_sine_quotient(m in 4u64..=60, a in 0u64..1000, b in 0u64..1000, c in 0u64..1000, e in 0u64..1000) {
        let mut h = vec![a % m, b % m, c % m, e % m];
        h.sort_unstable();
        h.dedup();
        prop_assume!(h.len() == 4);
        let t: Vec<Slope> = h.iter().map(|&x| frame_slope(m, x)).collect();
        let cr = cross_ratio([&t[0], &t[1], &t[2], &t[3]]).unwrap();
        let (k1, k2) = ((h[2] - h[0]).min(h[3] - h[1]), (h[2] - h[0]).max(h[3] - h[1]));
        let d = Quadruple::new(m, [k1, k2, h[2] - h[1], h[3] - h[0]]).unwrap();
        prop_assert_eq!(cr.demote(), eval_f(&d).demote());
    }
}

fn grid(w: i64, h: i64) -> Vec<LatticePoint> {
    let mut v = Vec::new();
    for y in 0..h {
        for x in 0..w {
            v.push(lp(4, &[x, y]));
        }
    }
    v
}

/// Every subset checked with the convexity predicate, fingerprinted by X-rays.
fn naive(region: &[LatticePoint], u: &[Direction]) -> (usize, bool) {
    let k = region.len();
    let amb = Region::Points(region.to_vec());
    let mut count = 0;
    let mut prints: HashMap<Vec<Vec<usize>>, u32> = HashMap::new();
    let mut collide = false;
    for mask in 0u32..1 << k {
        let s: Vec<LatticePoint> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| region[i].clone()).collect();
        if !is_convex_subset(&s, &amb).unwrap() {
            continue;
        }
        count += 1;
        let fp: Vec<Vec<usize>> = u
            .iter()
            .map(|d| {
                let r = xray(&s, d).unwrap();
                // the lines of the full region fix the positions
                let full = xray(region, d).unwrap();
                full.buckets.keys().map(|key| r.buckets.get(key).copied().unwrap_or(0)).collect()
            })
            .collect();
        collide |= prints.insert(fp, mask).is_some();
    }
    (count, collide)
}

#[test]
fn oracle_matches_naive_enumeration() {
    let region = grid(4, 3);
    let dir = |c: [i64; 2]| Direction::from_i64(4, &c).unwrap();
    for u in [
        vec![dir([1, 0]), dir([0, 1])],
        vec![dir([1, 0]), dir([0, 1]), dir([1, 1]), dir([1, -1])],
        vec![dir([1, 0]), dir([1, 1]), dir([1, 5]), dir([0, 1])],
    ] {
        let (count, collide) = naive(&region, &u);
        let res = brute_force_oracle(&region, &u, 40, Exec::Parallel).unwrap();
        let subsets = match &res {
            OracleResult::Unique { subsets } | OracleResult::Collision { subsets, .. } => *subsets,
        };
        assert_eq!(subsets, count);
        assert_eq!(res.is_unique(), !collide);
    }
}
