//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line to
//! stdout (uncaptured) followed by any itemized differences. Criteria whose
//! reference data disagrees with the computation print FAIL; the test then
//! asserts only the parts that are attainable.

use std::collections::BTreeSet;
use std::io::Write;
use std::time::{Duration, Instant};

use dtomo::cyclotomic::CycNum;
use dtomo::enumerate::{enum_quadruples, eval_f, obstruction_set, solve_in_field, Quadruple};
use dtomo::modelset::{find_homothety, is_pv, membership, pv_unit, star_of, HomothetySearch, LatticePoint, ModelSetSpec};
use dtomo::rational::{q, qi, totient};
use dtomo::reference::{
    printed_obstruction, printed_ranges, reconcile_ranges, reconcile_values, reconcile_with_reference, Table,
};
use dtomo::tomography::{
    brute_force_oracle, cross_ratio, determination_certificate, slope, slope_of, xrays_equal, Direction,
    OracleResult, Slope,
};
use dtomo::upolygon::{build_upolygon, ghost_pair, max_direction_sets, HRangeSet};
use dtomo::{Exec, QuadraticSurd};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Pinned budgets and sample sizes.
const RATIONAL_BUDGET: Duration = Duration::from_secs(10);
const TABLES_BUDGET: Duration = Duration::from_secs(600);
const MAXDIRS_BUDGET: Duration = Duration::from_secs(300);
const GHOST12_BUDGET: Duration = Duration::from_secs(600);
const ORACLE_BUDGET: Duration = Duration::from_secs(900);
const SWEEP_MAX_M: u64 = 30;
const LINEAR_MAPS: usize = 500;
const BRIDGES: usize = 200;
const BRIDGE_MAX_M: u64 = 60;
const HOMOTHETY_SETS: usize = 50;
const ORACLE_MAX_POINTS: usize = 36;
// Cross-ratio comparisons are exact: zero tolerance.

struct Report {
    hard_failures: Vec<String>,
}

impl Report {
    fn line(&mut self, id: u32, pass: bool, what: &str, detail: &str) {
        let mut out = std::io::stdout().lock();
        let tag = if pass { "PASS" } else { "FAIL" };
        writeln!(out, "{tag} [{id:>2}] {what}: {detail}").unwrap();
    }

    fn item(&mut self, s: &str) {
        writeln!(std::io::stdout().lock(), "        {s}").unwrap();
    }

    /// Records a failure of an attainable part.
    fn require(&mut self, id: u32, ok: bool, why: &str) {
        if !ok {
            self.hard_failures.push(format!("[{id}] {why}"));
        }
    }
}

fn qd(m: u64, k: [u64; 4]) -> Quadruple {
    Quadruple::new(m, k).unwrap()
}

fn criterion_1(r: &mut Report) {
    let t = Instant::now();
    let recs = solve_in_field(12, 1, Exec::Parallel).unwrap();
    let el = t.elapsed();
    let expected: BTreeSet<(Quadruple, QuadraticSurd)> = [
        ([6, 6, 4, 8], q(4, 3)),
        ([6, 6, 2, 10], qi(4)),
        ([4, 8, 3, 9], q(3, 2)),
        ([4, 8, 2, 10], qi(3)),
        ([4, 4, 2, 6], q(3, 2)),
        ([8, 8, 6, 10], q(3, 2)),
        ([4, 4, 1, 7], qi(3)),
        ([8, 8, 5, 11], qi(3)),
        ([3, 9, 2, 10], qi(2)),
        ([3, 3, 1, 5], qi(2)),
        ([9, 9, 7, 11], qi(2)),
    ]
    .into_iter()
    .map(|(k, v)| (qd(12, k), QuadraticSurd::rational(v)))
    .collect();
    let got: BTreeSet<(Quadruple, QuadraticSurd)> =
        recs.iter().filter(|x| x.is_sporadic()).map(|x| (x.quadruple, x.value.clone())).collect();
    let values: BTreeSet<QuadraticSurd> = recs.iter().map(|x| x.value.clone()).collect();
    let want_values: BTreeSet<QuadraticSurd> =
        [q(4, 3), q(3, 2), qi(2), qi(3), qi(4)].into_iter().map(QuadraticSurd::rational).collect();
    let ok = got == expected && values == want_values && el < RATIONAL_BUDGET;
    r.line(1, ok, "rational case m=12", &format!("{} sporadic, {} values, {el:.2?}", got.len(), values.len()));
    r.require(1, ok, "rational quadruples or value set differ");
}

fn criterion_2(r: &mut Report) {
    let t = Instant::now();
    let mut clean = true;
    let mut lines = Vec::new();
    for table in Table::all() {
        let reference = table.load();
        let recs = solve_in_field(reference.m, table.sqrt_d(), Exec::Parallel).unwrap();
        let diff = reconcile_with_reference(&recs, &reference).unwrap();
        let sporadic = recs.iter().filter(|x| x.is_sporadic()).count();
        lines.push(format!(
            "table {}: m={} entries={} computed sporadic={} diff {}",
            table.name(),
            reference.m,
            reference.entries.len(),
            sporadic,
            if diff.is_empty() { "empty" } else { "nonempty" }
        ));
        for s in diff.to_string().lines().filter(|_| !diff.is_empty()) {
            lines.push(format!("  {s}"));
        }
        clean &= diff.is_empty();
        // Every shipped entry must be a valid, non-family solution.
        r.require(2, diff.missing_from_computation.is_empty(), "reference entry is not a solution");
        r.require(2, diff.family_in_reference.is_empty(), "reference entry is a family form");
        r.require(2, diff.duplicated_in_reference.is_empty(), "reference entry duplicated");
        if table != Table::C {
            r.require(2, diff.is_empty(), "tables a/b must reconcile");
        }
    }
    let el = t.elapsed();
    r.line(2, clean && el < TABLES_BUDGET, "table reconciliation", &format!("{el:.2?}"));
    for l in lines {
        r.item(&l);
    }
    r.require(2, el < TABLES_BUDGET, "table budget exceeded");
}

fn criterion_3(r: &mut Report) {
    let want = [(5u64, 33usize), (8, 17), (12, 28)];
    let mut all = true;
    let mut items = Vec::new();
    for (n, count) in want {
        let o = obstruction_set(n, Exec::Parallel).unwrap();
        let printed = printed_obstruction(n).unwrap();
        let d = reconcile_values(&o.values, &printed);
        let ok = o.values.len() == count && d.is_empty();
        all &= ok;
        items.push(format!("n={n}: computed {} printed {} expected {count}", o.values.len(), printed.len()));
        for v in &d.only_computed {
            items.push(format!("  computed, not printed: {v}"));
        }
        for v in &d.only_printed {
            items.push(format!("  printed, not computed: {v}"));
        }
        r.require(3, d.only_printed.is_empty() && d.repeated.is_empty(), "printed value not computed");
        if n != 12 {
            r.require(3, ok, "obstruction set for n=5 or n=8 differs");
        }
    }
    r.line(3, all, "obstruction sets", "n=5,8,12");
    for i in items {
        r.item(&i);
    }
}

fn criterion_4(r: &mut Report) {
    let t = Instant::now();
    let mut all = true;
    let mut items = Vec::new();
    for (n, b, printed_count) in [(5u64, 10usize, 16usize), (8, 8, 8), (12, 12, 12)] {
        let res = max_direction_sets(n, Exec::Parallel).unwrap();
        let printed = printed_ranges(n).unwrap();
        let computed: Vec<Vec<u64>> = res.ranges.iter().map(|h| h.hs.clone()).collect();
        let d = reconcile_ranges(&computed, &printed);
        all &= res.b == b && d.is_empty() && printed.len() == printed_count;
        items.push(format!(
            "n={n}: b={} (expected {b}), {} computed ranges, {} printed",
            res.b,
            computed.len(),
            printed.len()
        ));
        for x in &d.only_computed {
            items.push(format!("  computed only: {x:?}"));
        }
        for x in &d.only_printed {
            items.push(format!("  printed only:  {x:?}"));
        }
        r.require(4, res.b == b, "b_n differs");
        let full = res.ranges.iter().filter(|h| h.len() == b).count();
        r.require(4, full > 0, "no range attains b_n");
    }
    let el = t.elapsed();
    r.line(4, all && el < MAXDIRS_BUDGET, "direction-set maximality", &format!("{el:.2?}"));
    for i in items {
        r.item(&i);
    }
    r.require(4, el < MAXDIRS_BUDGET, "max-dirs budget exceeded");
}

fn criterion_5(r: &mut Report) {
    let mut checked = 0usize;
    let mut failures = 0usize;
    for m in 4..=SWEEP_MAX_M {
        for d in enum_quadruples(m).unwrap() {
            let v = eval_f(&d);
            let one = CycNum::one(v.order());
            if !(v.is_real() && (&v - &one).real_sign().unwrap() == 1) {
                failures += 1;
            }
            checked += 1;
        }
    }
    let ok = failures == 0;
    r.line(5, ok, "quotient real and > 1", &format!("{checked} quadruples, {failures} failures"));
    r.require(5, ok, "sweep failures");
}

fn random_dir(rng: &mut ChaCha8Rng, n: u64) -> Option<Direction> {
    let c: Vec<i64> = (0..totient(n)).map(|_| rng.random_range(-3..=3)).collect();
    Direction::from_i64(n, &c).ok()
}

fn four_nonparallel(rng: &mut ChaCha8Rng, n: u64) -> Vec<Direction> {
    loop {
        let d: Vec<Direction> = (0..4).filter_map(|_| random_dir(rng, n)).collect();
        if d.len() == 4 && (0..4).all(|i| (i + 1..4).all(|j| !d[i].is_parallel(&d[j]))) {
            return d;
        }
    }
}

fn criterion_6(r: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut failures = 0usize;
    let mut done = 0usize;
    while done < LINEAR_MAPS {
        let a = LatticePoint::from_i64(12, &(0..4).map(|_| rng.random_range(-3..=3)).collect::<Vec<_>>()).embed();
        let b = LatticePoint::from_i64(12, &(0..4).map(|_| rng.random_range(-3..=3)).collect::<Vec<_>>()).embed();
        let det = &(&a * &a.conj()) - &(&b * &b.conj());
        if det.is_zero() {
            continue;
        }
        let d = four_nonparallel(&mut rng, 12);
        let img: Vec<Direction> =
            d.iter().map(|x| Direction::new(&(&(&a * x.rep()) + &(&b * &x.rep().conj())), 12).unwrap()).collect();
        let s0: Vec<Slope> = d.iter().map(slope).collect();
        let s1: Vec<Slope> = img.iter().map(slope).collect();
        let before = cross_ratio([&s0[0], &s0[1], &s0[2], &s0[3]]).unwrap();
        let after = cross_ratio([&s1[0], &s1[1], &s1[2], &s1[3]]).unwrap();
        if before.demote() != after.demote() {
            failures += 1;
        }
        done += 1;
    }
    let ok = failures == 0;
    r.line(6, ok, "cross-ratio invariance over Q(zeta_12)", &format!("{done} maps, {failures} failures"));
    r.require(6, ok, "invariance failures");
}

fn criterion_7(r: &mut Report) {
    let t = Instant::now();
    let hs = HRangeSet::new(24, &(0..12).map(|j| 2 * j).collect::<Vec<_>>()).unwrap();
    let p = build_upolygon(&hs, 12).unwrap();
    let spec = ModelSetSpec::standard(12, &qi(1)).unwrap();
    let g = ghost_pair(&p, &spec, Exec::Parallel).unwrap();
    let (f, h) = (g.first(), g.second());
    let equal = xrays_equal(&f, &h, &g.directions).unwrap();
    let verified = g.verify().unwrap();
    let el = t.elapsed();
    let ok = g.directions.len() == 12 && p.len() == 24 && equal && f != h && verified && el < GHOST12_BUDGET;
    r.line(
        7,
        ok,
        "ghost pair n=12",
        &format!(
            "{}-gon, {} directions, {} common, {}+{} colored, {el:.2?}",
            p.len(),
            g.directions.len(),
            g.common.len(),
            g.black.len(),
            g.grey.len()
        ),
    );
    r.require(7, ok, "n=12 ghost pair");
}

fn slope_dir(s: &str) -> Direction {
    let c = match s {
        "inf" => [0, 1],
        _ => [1, s.parse::<i64>().unwrap()],
    };
    Direction::from_i64(4, &c).unwrap()
}

fn square_regions() -> Vec<(String, Vec<LatticePoint>)> {
    let mut out = Vec::new();
    for r2 in 0i64..=ORACLE_MAX_POINTS as i64 {
        let pts: Vec<LatticePoint> = (-6i64..=6)
            .flat_map(|a| (-6i64..=6).map(move |b| (a, b)))
            .filter(|(a, b)| a * a + b * b <= r2)
            .map(|(a, b)| LatticePoint::from_i64(4, &[a, b]))
            .collect();
        if pts.len() > ORACLE_MAX_POINTS {
            break;
        }
        if out.last().map(|(_, p): &(String, Vec<LatticePoint>)| p.len()) != Some(pts.len()) {
            out.push((format!("disk r^2={r2}"), pts));
        }
    }
    for w in 1..=ORACLE_MAX_POINTS as i64 {
        let h = ORACLE_MAX_POINTS as i64 / w;
        if w > h {
            break;
        }
        let pts = (0..w).flat_map(|a| (0..h).map(move |b| LatticePoint::from_i64(4, &[a, b]))).collect();
        out.push((format!("rect {w}x{h}"), pts));
    }
    out
}

fn criterion_8(r: &mut Report) {
    let t = Instant::now();
    let u: Vec<Direction> = ["0", "1", "5", "inf"].iter().map(|s| slope_dir(s)).collect();
    let obs = obstruction_set(4, Exec::Parallel).unwrap();
    let cert = determination_certificate(&u, &obs).unwrap();
    let mut unique = true;
    let mut items = Vec::new();
    for (name, region) in square_regions() {
        let res = brute_force_oracle(&region, &u, 64, Exec::Parallel).unwrap();
        if let OracleResult::Unique { subsets } = res {
            items.push(format!("{name}: {} points, {subsets} convex subsets, unique", region.len()));
        } else {
            unique = false;
            items.push(format!("{name}: collision"));
        }
    }
    // The other slope set admits a 12-vertex U-polygon and a verified collision.
    let v: Vec<Direction> = ["0", "1", "inf", "-1"].iter().map(|s| slope_dir(s)).collect();
    let p = build_upolygon(&HRangeSet::new(12, &[0, 2, 4, 8]).unwrap(), 4).unwrap();
    let same_dirs = p.directions.len() == 4 && p.directions.iter().all(|d| v.iter().any(|e| e.is_parallel(d)));
    let g = ghost_pair(&p, &ModelSetSpec::lattice(4).unwrap(), Exec::Parallel).unwrap();
    let mut hull_region = g.first();
    hull_region.extend(g.grey.iter().cloned());
    hull_region.sort();
    let collision = matches!(
        brute_force_oracle(&hull_region, &v, 64, Exec::Parallel).unwrap(),
        OracleResult::Collision { .. }
    );
    let inconclusive = !determination_certificate(&v, &obs).unwrap().is_determined();
    let el = t.elapsed();
    let ok = cert.is_determined()
        && unique
        && p.len() == 12
        && same_dirs
        && g.verify().unwrap()
        && collision
        && inconclusive
        && el < ORACLE_BUDGET;
    r.line(
        8,
        ok,
        "oracle agreement n=4",
        &format!("{} regions unique, 12-gon ghost collision {collision}, {el:.2?}", items.len()),
    );
    for i in items {
        r.item(&i);
    }
    r.require(8, ok, "oracle agreement");
}

fn frame_slope(m: u64, h: u64) -> Slope {
    if 2 * h == m {
        Slope::Inf
    } else {
        slope_of(&(&CycNum::one(m) + &CycNum::zeta(m, h as i64)))
    }
}

fn criterion_9(r: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut done, mut failures) = (0usize, 0usize);
    while done < BRIDGES {
        let m = rng.random_range(4..=BRIDGE_MAX_M);
        let mut h: Vec<u64> = (0..4).map(|_| rng.random_range(0..m)).collect();
        h.sort_unstable();
        h.dedup();
        if h.len() != 4 {
            continue;
        }
        let t: Vec<Slope> = h.iter().map(|&x| frame_slope(m, x)).collect();
        let cr = cross_ratio([&t[0], &t[1], &t[2], &t[3]]).unwrap();
        let (a, b) = (h[2] - h[0], h[3] - h[1]);
        let d = qd(m, [a.min(b), a.max(b), h[2] - h[1], h[3] - h[0]]);
        if cr.demote() != eval_f(&d).demote() {
            failures += 1;
        }
        done += 1;
    }
    let ok = failures == 0;
    r.line(9, ok, "sine-quotient bridge", &format!("{done} tuples, {failures} failures"));
    r.require(9, ok, "bridge failures");
}

fn criterion_10(r: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut ok = true;
    let mut detail = Vec::new();
    for n in [5u64, 8, 12] {
        let spec = ModelSetSpec::standard(n, &qi(1)).unwrap();
        let l = pv_unit(n).unwrap();
        let s = star_of(&l, &spec).unwrap();
        let gap = &CycNum::one(s.order()) - &(&s * &s.conj());
        let contracts = gap.real_sign().unwrap() == 1 && is_pv(&l, &spec).unwrap();
        let k = totient(n) as usize;
        let mut landed = 0;
        for _ in 0..HOMOTHETY_SETS {
            let pts: Vec<CycNum> = (0..rng.random_range(1..6))
                .map(|_| {
                    let c: Vec<(i64, dtomo::Q)> =
                        (0..k).map(|j| (j as i64, q(rng.random_range(-5..=5), rng.random_range(1..=4)))).collect();
                    CycNum::from_monomials(n, &c)
                })
                .collect();
            let h = find_homothety(&pts, &spec, HomothetySearch::default()).unwrap();
            if pts.iter().all(|p| membership(&h.apply(p).unwrap(), &spec).unwrap()) {
                landed += 1;
            }
        }
        ok &= contracts && landed == HOMOTHETY_SETS;
        detail.push(format!("n={n}: contracts={contracts} landed {landed}/{HOMOTHETY_SETS}"));
    }
    r.line(10, ok, "PV contraction and homotheties", &detail.join(", "));
    r.require(10, ok, "contraction or homothety");
}

#[test]
fn acceptance() {
    let mut r = Report { hard_failures: Vec::new() };
    criterion_1(&mut r);
    criterion_2(&mut r);
    criterion_3(&mut r);
    criterion_4(&mut r);
    criterion_5(&mut r);
    criterion_6(&mut r);
    criterion_7(&mut r);
    criterion_8(&mut r);
    criterion_9(&mut r);
    criterion_10(&mut r);
    assert!(r.hard_failures.is_empty(), "{:#?}", r.hard_failures);
}
