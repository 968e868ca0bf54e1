use dtomo::cyclotomic::CycNum;
use std::collections::HashSet;

use dtomo::enumerate::{obstruction_set, order_for, real_subfield_d, solve_in_field};
use dtomo::exec::Exec;
use dtomo::modelset::{pv_unit, LatticePoint, ModelSetSpec};
use dtomo::rational::qi;
use dtomo::tomography::{
    brute_force_oracle, certify_slopes, cross_ratio, is_convex_subset, slope_of, xray, Region, Slope,
};
use dtomo::upolygon::{
    build_upolygon, ghost_pair, is_upolygon, max_direction_sets, range_directions, two_coloring, HRangeSet,
};

fn frame_slope(m: u64, h: u64) -> Slope {
    if 2 * h == m {
        Slope::Inf
    } else {
        slope_of(&(&CycNum::one(m) + &CycNum::zeta(m, h as i64)))
    }
}

fn dodecagon() -> HRangeSet {
    HRangeSet::new(24, &(0..12).map(|j| 2 * j).collect::<Vec<_>>()).unwrap()
}

#[test]
fn ranges_are_admissible_and_largest_ones_maximal() {
    for n in [8u64, 12] {
        let obs = obstruction_set(n, Exec::Parallel).unwrap();
        let res = max_direction_sets(n, Exec::Parallel).unwrap();
        let m = res.m;
        let slopes: Vec<Slope> = (0..m).map(|h| frame_slope(m, h)).collect();
        let cr = |h: [u64; 4]| {
            let mut h = h;
            h.sort_unstable();
            cross_ratio([&slopes[h[0] as usize], &slopes[h[1] as usize], &slopes[h[2] as usize], &slopes[h[3] as usize]])
                .unwrap()
        };
        let inside = |x: &CycNum| obs.contains_cyc(x);
        for r in &res.ranges {
            let hs = &r.hs;
            let k = hs.len();
            for a in 0..k {
                for b in a + 1..k {
                    for c in b + 1..k {
                        for d in c + 1..k {
                            assert!(inside(&cr([hs[a], hs[b], hs[c], hs[d]])), "{hs:?}");
                        }
                    }
                }
            }
            // A largest range admits no further direction. Smaller ones may: the
            // growth only appends directions beyond the current last one.
            if k < res.b {
                continue;
            }
            for x in (0..m).filter(|x| !hs.contains(x)) {
                let mut broken = false;
                'search: for a in 0..k {
                    for b in a + 1..k {
                        for c in b + 1..k {
                            if !inside(&cr([hs[a], hs[b], hs[c], x])) {
                                broken = true;
                                break 'search;
                            }
                        }
                    }
                }
                assert!(broken, "{hs:?} + {x}");
            }
        }
    }
}

/// Largest admissible set containing 0, by exhaustive search over all directions.
fn largest_admissible(n: u64) -> usize {
    let m = order_for(n);
    let d = real_subfield_d(n).unwrap();
    let good: HashSet<[u64; 4]> = solve_in_field(m, d, Exec::Parallel).unwrap().into_iter().map(|r| r.quadruple.k).collect();
    let ok = |h: [u64; 4]| {
        let (k1, k2) = ((h[2] - h[0]).min(h[3] - h[1]), (h[2] - h[0]).max(h[3] - h[1]));
        good.contains(&[k1, k2, h[2] - h[1], h[3] - h[0]])
    };
    fn grow(m: u64, set: &mut Vec<u64>, ok: &dyn Fn([u64; 4]) -> bool, best: &mut usize) {
        *best = (*best).max(set.len());
        let last = *set.last().unwrap();
        for x in last + 1..m {
            let k = set.len();
            let fits = (0..k).all(|a| (a + 1..k).all(|b| (b + 1..k).all(|c| ok([set[a], set[b], set[c], x]))));
            if fits {
                set.push(x);
                grow(m, set, ok, best);
                set.pop();
            }
        }
    }
    let mut best = 0;
    grow(m, &mut vec![0], &ok, &mut best);
    best
}

#[test]
fn largest_direction_counts_by_exhaustion() {
    for n in [5u64, 8, 12] {
        let b = max_direction_sets(n, Exec::Parallel).unwrap().b;
        assert_eq!(largest_admissible(n), b, "n = {n}");
    }
}

#[test]
fn upolygon_property_survives_homotheties() {
    for (n, hs) in [(12u64, dodecagon()), (5, HRangeSet::new(60, &[0, 6, 12, 18, 24, 30, 36, 42, 48, 54]).unwrap())] {
        let p = build_upolygon(&hs, n).unwrap();
        assert_eq!(p.len() % 2, 0);
        let l = pv_unit(n).unwrap();
        let t = LatticePoint::from_i64(n, &[3, -1, 2, 0]).embed();
        for k in 0..3 {
            let s = l.pow(k).unwrap();
            let img: Vec<CycNum> = p.vertices.iter().map(|v| &(&s * v) + &t).collect();
            assert!(is_upolygon(&img, &p.directions).unwrap());
        }
        let mut bent = p.vertices.clone();
        bent[0] = &bent[0] + &CycNum::from_int(n, 1).scale(&dtomo::rational::q(1, 7));
        assert!(!is_upolygon(&bent, &p.directions).unwrap_or(false));
    }
}

#[test]
fn dodecagon_directions_and_coloring() {
    let p = build_upolygon(&dodecagon(), 12).unwrap();
    assert_eq!(p.len(), 24);
    assert_eq!(range_directions(&dodecagon(), 12).unwrap().len(), 12);
    let c = two_coloring(&p).unwrap();
    assert_eq!((c.black.len(), c.grey.len()), (12, 12));
}

fn check_pair(n: u64, hs: &HRangeSet) -> usize {
    let p = build_upolygon(hs, n).unwrap();
    let spec = ModelSetSpec::standard(n, &qi(1)).unwrap();
    let g = ghost_pair(&p, &spec, Exec::Parallel).unwrap();
    let (f, h) = (g.first(), g.second());
    assert_ne!(f, h);
    for d in &g.directions {
        assert_eq!(xray(&f, d).unwrap().buckets, xray(&h, d).unwrap().buckets);
    }
    // Convexity judged against an independently generated disk of model-set points.
    let rmax = g.ambient.iter().map(|q| q.to_c64()).map(|(x, y)| x.hypot(y)).fold(0.0, f64::max);
    let region = Region::Disk { spec, radius: qi(rmax.ceil() as i64) };
    assert!(is_convex_subset(&f, &region).unwrap());
    assert!(is_convex_subset(&h, &region).unwrap());
    p.len()
}

#[test]
fn ghost_pairs_in_lattices() {
    assert_eq!(check_pair(4, &HRangeSet::new(12, &[0, 2, 4, 8]).unwrap()), 12);
    assert_eq!(check_pair(3, &HRangeSet::new(12, &[0, 4, 8]).unwrap()), 6);
}

#[test]
fn ghost_pair_in_a_model_set() {
    assert_eq!(check_pair(8, &HRangeSet::new(48, &[0, 6, 12, 18, 24, 30, 36, 42]).unwrap()), 16);
}

#[test]
fn inconclusive_certificate_and_oracle_collision() {
    let obs = obstruction_set(4, Exec::Sequential).unwrap();
    let t: Vec<Slope> = ["0", "1", "inf", "-1"].iter().map(|s| Slope::parse(s).unwrap()).collect();
    assert!(!certify_slopes(&t, &obs).unwrap().is_determined());
    let hs = HRangeSet::new(12, &[0, 3, 6, 9]).unwrap();
    let p = build_upolygon(&hs, 4).unwrap();
    let g = ghost_pair(&p, &ModelSetSpec::lattice(4).unwrap(), Exec::Parallel).unwrap();
    let mut region = g.first();
    region.extend(g.grey.iter().cloned());
    region.sort();
    assert!(region.len() <= 40);
    let res = brute_force_oracle(&region, &g.directions, 40, Exec::Parallel).unwrap();
    assert!(!res.is_unique());
}
