//! Directions, slopes and cross ratios; discrete X-rays; convex subsets; the
//! cross-ratio certificate and an exhaustive uniqueness oracle for small regions.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::cyclotomic::CycNum;
use crate::enumerate::{real_subfield_d, ObstructionSet};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::modelset::{at_order, membership, LatticePoint, ModelSetSpec};
use crate::rational::{self, lcm_u64};

/// A Λ-direction: nonzero element of Z[zeta_n] with content 1, in the half plane
/// Re > 0 or (Re = 0, Im > 0). Equality is parallelism.
#[derive(Clone, Debug)]
pub struct Direction {
    n: u64,
    rep: CycNum,
}

impl Direction {
    pub fn new(z: &CycNum, n: u64) -> Result<Self> {
        let z = at_order(z, n)?;
        if z.is_zero() {
            return Err(Error::DegenerateTuple("zero direction".into()));
        }
        let (num, _) = z.num_den();
        let g = num.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        let prim: Vec<BigInt> = num.iter().map(|c| c / &g).collect();
        let mut rep = CycNum::from_ints(n, &prim);
        let re = rep.re_sign()?;
        if re < 0 || (re == 0 && rep.im_sign()? < 0) {
            rep = -rep;
        }
        Ok(Direction { n, rep })
    }

    pub fn from_i64(n: u64, coeffs: &[i64]) -> Result<Self> {
        Self::new(&LatticePoint::from_i64(n, coeffs).embed(), n)
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn rep(&self) -> &CycNum {
        &self.rep
    }

    pub fn rep_point(&self) -> LatticePoint {
        LatticePoint::from_cyc(&self.rep, self.n).expect("integral rep")
    }

    pub fn is_parallel(&self, o: &Direction) -> bool {
        let w = &self.rep.conj() * &o.rep;
        w.is_real()
    }

    /// The representative rotated into the upper half plane, angle in [0, pi).
    fn upper(&self) -> CycNum {
        match self.rep.im_sign().expect("sign") {
            s if s < 0 => -self.rep.clone(),
            _ => self.rep.clone(),
        }
    }
}

impl PartialEq for Direction {
    fn eq(&self, o: &Self) -> bool {
        self.n == o.n && self.is_parallel(o)
    }
}

impl Eq for Direction {}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rep)
    }
}

impl Serialize for Direction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rep_point().serialize(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Slope {
    Finite(CycNum),
    Inf,
}

impl Slope {
    pub fn rational(x: rational::Q) -> Slope {
        Slope::Finite(CycNum::from_q(1, &x))
    }

    /// Parse a rational or `inf`.
    pub fn parse(s: &str) -> Result<Slope> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s == "∞" {
            Ok(Slope::Inf)
        } else {
            Ok(Slope::rational(rational::parse_q(s)?))
        }
    }

    /// Angle position in [0, pi): nonnegative slopes, then infinity, then negative slopes.
    fn angle_cmp(&self, o: &Slope) -> Result<Ordering> {
        let class = |s: &Slope| -> Result<u8> {
            Ok(match s {
                Slope::Finite(x) if x.real_sign()? >= 0 => 0,
                Slope::Inf => 1,
                Slope::Finite(_) => 2,
            })
        };
        let (a, b) = (class(self)?, class(o)?);
        if a != b {
            return Ok(a.cmp(&b));
        }
        match (self, o) {
            (Slope::Finite(x), Slope::Finite(y)) => Ok((x - y).real_sign()?.cmp(&0)),
            _ => Ok(Ordering::Equal),
        }
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::Finite(x) => write!(f, "{x}"),
            Slope::Inf => write!(f, "inf"),
        }
    }
}

/// -i (z - conj z) / (z + conj z), computed at order lcm(n, 4).
pub fn slope(d: &Direction) -> Slope {
    slope_of(&d.rep)
}

pub fn slope_of(z: &CycNum) -> Slope {
    let m = lcm_u64(z.order(), 4);
    let z = z.promote(m).expect("divisor");
    let zb = z.conj();
    let re2 = &z + &zb;
    if re2.is_zero() {
        return Slope::Inf;
    }
    let mi = -CycNum::zeta(m, m as i64 / 4);
    let im2 = &mi * &(&z - &zb);
    Slope::Finite(im2.div(&re2).expect("nonzero").demote())
}

/// (t3 - t1)(t4 - t2) / ((t3 - t2)(t4 - t1)), with the limiting forms when one slope is infinite.
pub fn cross_ratio(t: [&Slope; 4]) -> Result<CycNum> {
    for i in 0..4 {
        for j in i + 1..4 {
            if t[i] == t[j] {
                return Err(Error::DegenerateTuple(format!(
                    "slopes {i} and {j} coincide"
                )));
            }
        }
    }
    let inf = t.iter().position(|s| **s == Slope::Inf);
    let f = |i: usize| match t[i] {
        Slope::Finite(x) => x.clone(),
        Slope::Inf => unreachable!(),
    };
    let (num, den) = match inf {
        None => {
            let (t1, t2, t3, t4) = (f(0), f(1), f(2), f(3));
            (&(&t3 - &t1) * &(&t4 - &t2), &(&t3 - &t2) * &(&t4 - &t1))
        }
        Some(0) => (&f(3) - &f(1), &f(2) - &f(1)),
        Some(1) => (&f(2) - &f(0), &f(3) - &f(0)),
        Some(2) => (&f(3) - &f(1), &f(3) - &f(0)),
        Some(_) => (&f(2) - &f(0), &f(2) - &f(1)),
    };
    Ok(num.div(&den)?.demote())
}

/// `conj(a) b - a conj(b)`: zero exactly when a and b are parallel.
pub fn wedge(a: &CycNum, b: &CycNum) -> CycNum {
    &(&a.conj() * b) - &(a * &b.conj())
}

/// Cross ratio of the slopes of four directions through 2x2 determinants, staying at order n.
pub fn cross_ratio_dirs(u: [&Direction; 4]) -> Result<CycNum> {
    let r: Vec<&CycNum> = u.iter().map(|d| &d.rep).collect();
    let num = &wedge(r[0], r[2]) * &wedge(r[1], r[3]);
    let den = &wedge(r[1], r[2]) * &wedge(r[0], r[3]);
    if num.is_zero() || den.is_zero() {
        return Err(Error::ParallelPair);
    }
    Ok(num.div(&den)?.demote())
}

/// Sort by angle in [0, pi).
pub fn order_by_angle(u: &[Direction]) -> Result<Vec<Direction>> {
    for i in 0..u.len() {
        for j in i + 1..u.len() {
            if u[i].is_parallel(&u[j]) {
                return Err(Error::ParallelPair);
            }
        }
    }
    let ups: Vec<CycNum> = u.iter().map(|d| d.upper()).collect();
    let mut idx: Vec<usize> = (0..u.len()).collect();
    let mut err = None;
    idx.sort_by(|&a, &b| {
        let (pa, pb) = (&ups[a], &ups[b]);
        // Horizontal directions come first.
        let za = pa.im_sign().unwrap_or(0) == 0;
        let zb = pb.im_sign().unwrap_or(0) == 0;
        match (za, zb) {
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        match wedge(pa, pb).im_sign() {
            Ok(s) => 0.cmp(&s),
            Err(e) => {
                err = Some(e);
                Ordering::Equal
            }
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(idx.into_iter().map(|i| u[i].clone()).collect())
}

pub fn order_slopes(t: &[Slope]) -> Result<Vec<Slope>> {
    let mut v = t.to_vec();
    let mut err = None;
    v.sort_by(|a, b| {
        a.angle_cmp(b).unwrap_or_else(|e| {
            err = Some(e);
            Ordering::Equal
        })
    });
    match err {
        Some(e) => Err(e),
        None => Ok(v),
    }
}

pub(crate) type LineKey = (Vec<BigInt>, BigInt);

/// Counts of points per line in one direction; keys are the exact values p conj(u) - conj(p) u.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XRayRow {
    pub direction: Direction,
    pub buckets: BTreeMap<LineKey, usize>,
}

impl XRayRow {
    pub fn total(&self) -> usize {
        self.buckets.values().sum()
    }

    pub fn counts(&self) -> Vec<usize> {
        let mut c: Vec<usize> = self.buckets.values().copied().collect();
        c.sort_unstable();
        c
    }
}

impl Serialize for XRayRow {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct B {
            key: CycNum,
            count: usize,
        }
        #[derive(Serialize)]
        struct J<'a> {
            dir: &'a Direction,
            buckets: Vec<B>,
        }
        let n = self.direction.n;
        let buckets = self
            .buckets
            .iter()
            .map(|((num, den), &count)| B {
                key: CycNum::from_ints(n, num).scale(&rational::Q::new(BigInt::one(), den.clone())),
                count,
            })
            .collect();
        J {
            dir: &self.direction,
            buckets,
        }
        .serialize(s)
    }
}

pub(crate) fn line_key(p: &CycNum, u: &Direction) -> Result<LineKey> {
    let p = at_order(p, u.n)?;
    let k = wedge(&u.rep, &p);
    let k = at_order(&k, u.n)?;
    let (num, den) = k.num_den();
    Ok((num.to_vec(), den.clone()))
}

pub fn xray(f: &[LatticePoint], u: &Direction) -> Result<XRayRow> {
    let mut buckets = BTreeMap::new();
    for p in f {
        if p.n != u.n {
            return Err(Error::OrderMismatch(u.n, p.n));
        }
        *buckets.entry(line_key(&p.embed(), u)?).or_insert(0) += 1;
    }
    Ok(XRayRow {
        direction: u.clone(),
        buckets,
    })
}

pub fn xrays_equal(f: &[LatticePoint], g: &[LatticePoint], u: &[Direction]) -> Result<bool> {
    for d in u {
        if xray(f, d)?.buckets != xray(g, d)?.buckets {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Sign of the turn a -> b -> c.
pub fn orient(a: &CycNum, b: &CycNum, c: &CycNum) -> i8 {
    crate::modelset::orient(a, b, c).expect("sign")
}

fn cmp_xy(a: &CycNum, b: &CycNum) -> Ordering {
    let d = a - b;
    match d.re_sign().expect("sign") {
        0 => d.im_sign().expect("sign").cmp(&0),
        s => s.cmp(&0),
    }
}

/// Vertices of the convex hull, counter-clockwise, without collinear points.
pub fn convex_hull(pts: &[CycNum]) -> Vec<CycNum> {
    let mut p: Vec<CycNum> = pts.to_vec();
    p.sort_by(cmp_xy);
    p.dedup_by(|a, b| a == b);
    if p.len() <= 2 {
        return p;
    }
    let mut lower: Vec<CycNum> = Vec::new();
    for x in &p {
        while lower.len() >= 2 && orient(&lower[lower.len() - 2], &lower[lower.len() - 1], x) <= 0 {
            lower.pop();
        }
        lower.push(x.clone());
    }
    let mut upper: Vec<CycNum> = Vec::new();
    for x in p.iter().rev() {
        while upper.len() >= 2 && orient(&upper[upper.len() - 2], &upper[upper.len() - 1], x) <= 0 {
            upper.pop();
        }
        upper.push(x.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Closed-hull membership for a hull from `convex_hull`.
pub fn in_closed_hull(hull: &[CycNum], p: &CycNum) -> bool {
    match hull.len() {
        0 => false,
        1 => hull[0] == *p,
        2 => {
            orient(&hull[0], &hull[1], p) == 0 && cmp_xy(p, &hull[0]) != cmp_xy(p, &hull[1])
                || *p == hull[0]
                || *p == hull[1]
        }
        k => (0..k).all(|i| orient(&hull[i], &hull[(i + 1) % k], p) >= 0),
    }
}

/// The ambient points against which convexity is judged: Λ-points of a disk or an explicit list.
#[derive(Clone, Debug)]
pub enum Region {
    /// All members of the model set with |z| <= radius.
    Disk {
        spec: ModelSetSpec,
        radius: rational::Q,
    },
    /// An explicit finite point set.
    Points(Vec<LatticePoint>),
}

/// `C = conv(C) ∩ Λ` within the region. Errors when C is not inside the region.
pub fn is_convex_subset(c: &[LatticePoint], region: &Region) -> Result<bool> {
    if c.is_empty() {
        return Ok(true);
    }
    let emb: Vec<CycNum> = c.iter().map(|p| p.embed()).collect();
    let ambient: Vec<LatticePoint> = match region {
        Region::Points(ps) => {
            let set: HashSet<&LatticePoint> = ps.iter().collect();
            if let Some(p) = c.iter().find(|p| !set.contains(p)) {
                return Err(Error::RegionTooSmall(format!("{p} is outside the region")));
            }
            ps.clone()
        }
        Region::Disk { spec, radius } => {
            let r2 = radius * radius;
            for (p, z) in c.iter().zip(&emb) {
                let d = &CycNum::from_q(z.order(), &r2) - &(z * &z.conj());
                if d.real_sign()? < 0 || !membership(p, spec)? {
                    return Err(Error::RegionTooSmall(format!("{p} is outside the region")));
                }
            }
            crate::modelset::generate_patch(spec, radius, Exec::default())?.points
        }
    };
    let hull = convex_hull(&emb);
    let mine: HashSet<&LatticePoint> = c.iter().collect();
    for q in &ambient {
        if !mine.contains(q) && in_closed_hull(&hull, &q.embed()) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Certificate {
    /// Some angle-ordered 4-subset has a cross ratio outside the obstruction set,
    /// so no U-polygon exists.
    Determined { witness: [usize; 4], value: String },
    /// Every 4-subset passes; the first subset is reported.
    Inconclusive { witness: [usize; 4], value: String },
}

impl Certificate {
    pub fn is_determined(&self) -> bool {
        matches!(self, Certificate::Determined { .. })
    }
}

fn in_obstruction(x: &CycNum, obs: &ObstructionSet) -> bool {
    let d = real_subfield_d(obs.n).unwrap_or(1);
    match x.to_quadratic(d) {
        Ok(v) => obs.contains(&v),
        Err(_) => false,
    }
}

fn certify_sorted<F>(k: usize, obs: &ObstructionSet, cr: F) -> Result<Certificate>
where
    F: Fn([usize; 4]) -> Result<CycNum>,
{
    if k < 4 {
        return Err(Error::TooFewDirections(k));
    }
    let mut first = None;
    for a in 0..k {
        for b in a + 1..k {
            for c in b + 1..k {
                for d in c + 1..k {
                    let w = [a, b, c, d];
                    let v = cr(w)?;
                    if !in_obstruction(&v, obs) {
                        return Ok(Certificate::Determined {
                            witness: w,
                            value: v.to_string(),
                        });
                    }
                    first.get_or_insert((w, v));
                }
            }
        }
    }
    let (w, v) = first.expect("at least one subset");
    Ok(Certificate::Inconclusive {
        witness: w,
        value: v.to_string(),
    })
}

/// Cross-ratio certificate for directions; witness indices refer to the angle-sorted order.
pub fn determination_certificate(u: &[Direction], obs: &ObstructionSet) -> Result<Certificate> {
    if u.len() < 4 {
        return Err(Error::TooFewDirections(u.len()));
    }
    let s = order_by_angle(u)?;
    certify_sorted(s.len(), obs, |w| {
        cross_ratio_dirs([&s[w[0]], &s[w[1]], &s[w[2]], &s[w[3]]])
    })
}

/// The same certificate from slopes alone.
pub fn certify_slopes(t: &[Slope], obs: &ObstructionSet) -> Result<Certificate> {
    if t.len() < 4 {
        return Err(Error::TooFewDirections(t.len()));
    }
    let s = order_slopes(t)?;
    certify_sorted(s.len(), obs, |w| {
        cross_ratio([&s[w[0]], &s[w[1]], &s[w[2]], &s[w[3]]])
    })
}

pub const DEFAULT_ORACLE_CAP: usize = 40;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleResult {
    /// Number of convex subsets examined; all X-ray fingerprints distinct.
    Unique { subsets: usize },
    Collision {
        f: Vec<LatticePoint>,
        g: Vec<LatticePoint>,
        subsets: usize,
    },
}

impl OracleResult {
    pub fn is_unique(&self) -> bool {
        matches!(self, OracleResult::Unique { .. })
    }
}

/// Orientation and triangle tables over a point set of at most 64 points.
struct Tables {
    k: usize,
    orient: Vec<i8>,
    /// Position of each point in (x, y) order.
    rank: Vec<usize>,
    /// tri[(a*k + b)*k + c]: points in the closed triangle abc (segments when indices repeat).
    tri: Vec<u64>,
}

impl Tables {
    fn new(pts: &[CycNum], exec: Exec) -> Tables {
        let k = pts.len();
        let rows: Vec<Vec<i8>> = exec.map_range(k * k, |ab| {
            let (a, b) = (ab / k, ab % k);
            (0..k)
                .map(|c| {
                    if a == b {
                        0
                    } else {
                        orient(&pts[a], &pts[b], &pts[c])
                    }
                })
                .collect()
        });
        let orient: Vec<i8> = rows.into_iter().flatten().collect();
        let o = |a: usize, b: usize, c: usize| orient[(a * k + b) * k + c];
        let mut by_xy: Vec<usize> = (0..k).collect();
        by_xy.sort_by(|&a, &b| cmp_xy(&pts[a], &pts[b]));
        let mut rank = vec![0; k];
        for (r, &i) in by_xy.iter().enumerate() {
            rank[i] = r;
        }
        let on_segment = |a: usize, b: usize, p: usize| {
            if p == a || p == b {
                return true;
            }
            a != b && o(a, b, p) == 0 && (rank[p] > rank[a]) != (rank[p] > rank[b])
        };
        let tri = exec.map_range(k * k * k, |idx| {
            let (a, b, c) = (idx / (k * k), (idx / k) % k, idx % k);
            let mut mask = 0u64;
            let s = o(a, b, c);
            for p in 0..k {
                let inside = if s == 0 {
                    on_segment(a, b, p) || on_segment(b, c, p) || on_segment(a, c, p)
                } else {
                    let (x, y, z) = (o(a, b, p), o(b, c, p), o(c, a, p));
                    x * s >= 0 && y * s >= 0 && z * s >= 0
                };
                if inside {
                    mask |= 1 << p;
                }
            }
            mask
        });
        Tables {
            k,
            orient,
            rank,
            tri,
        }
    }

    fn o(&self, a: usize, b: usize, c: usize) -> i8 {
        self.orient[(a * self.k + b) * self.k + c]
    }

    fn tri(&self, a: usize, b: usize, c: usize) -> u64 {
        self.tri[(a * self.k + b) * self.k + c]
    }

    /// Strict hull vertices (monotone chain) of a small index set.
    fn hull(&self, mut idx: Vec<u8>) -> Vec<u8> {
        idx.sort_unstable_by_key(|&i| self.rank[i as usize]);
        idx.dedup();
        if idx.len() <= 2 {
            return idx;
        }
        let mut h: Vec<u8> = Vec::with_capacity(idx.len() + 1);
        for pass in 0..2 {
            let start = h.len();
            let it: Box<dyn Iterator<Item = &u8>> = if pass == 0 {
                Box::new(idx.iter())
            } else {
                Box::new(idx.iter().rev())
            };
            for &x in it {
                while h.len() >= start + 2
                    && self.o(h[h.len() - 2] as usize, h[h.len() - 1] as usize, x as usize) <= 0
                {
                    h.pop();
                }
                h.push(x);
            }
            h.pop();
        }
        if h.len() < 2 {
            // All collinear: keep the two extremes.
            return vec![idx[0], idx[idx.len() - 1]];
        }
        h
    }

    /// conv(S ∪ {p}) ∩ region and its hull, for a closed set S with hull vertices `hull`.
    fn extend(&self, s: u64, hull: &[u8], p: usize) -> (u64, Vec<u8>) {
        let mut out = s | (1 << p);
        match hull.len() {
            0 => {}
            1 => out |= self.tri(p, hull[0] as usize, hull[0] as usize),
            h => {
                for i in 0..h {
                    out |= self.tri(p, hull[i] as usize, hull[(i + 1) % h] as usize);
                }
            }
        }
        let mut cand = hull.to_vec();
        cand.push(p as u8);
        (out, self.hull(cand))
    }
}

/// Exhaustively enumerate the convex subsets of `region` and look for two with equal X-rays in `u`.
pub fn brute_force_oracle(
    region: &[LatticePoint],
    u: &[Direction],
    cap: usize,
    exec: Exec,
) -> Result<OracleResult> {
    let k = region.len();
    if k > cap.min(64) {
        return Err(Error::RegionTooLarge {
            size: k,
            cap: cap.min(64),
        });
    }
    if u.is_empty() {
        return Err(Error::TooFewDirections(0));
    }
    let pts: Vec<CycNum> = region.iter().map(|p| p.embed()).collect();
    let tables = Tables::new(&pts, exec);
    // Line index of each point in each direction.
    let mut line_id: Vec<Vec<u16>> = Vec::with_capacity(u.len());
    for d in u {
        let mut ids: HashMap<LineKey, u16> = HashMap::new();
        let mut row = Vec::with_capacity(k);
        for p in &pts {
            let key = line_key(p, d)?;
            let next = ids.len() as u16;
            row.push(*ids.entry(key).or_insert(next));
        }
        line_id.push(row);
    }
    let n_lines: Vec<usize> = line_id
        .iter()
        .map(|r| r.iter().map(|&x| x as usize + 1).max().unwrap_or(0))
        .collect();

    let mut seen: HashSet<u64> = HashSet::new();
    seen.insert(0);
    let mut frontier: Vec<(u64, Vec<u8>)> = (0..k).map(|p| tables.extend(0, &[], p)).collect();
    frontier.sort_unstable();
    frontier.dedup_by_key(|e| e.0);
    seen.extend(frontier.iter().map(|e| e.0));
    while !frontier.is_empty() {
        let grown: Vec<Vec<(u64, Vec<u8>)>> = exec.map(&frontier, |(s, h)| {
            (0..k)
                .filter(|&p| s >> p & 1 == 0)
                .map(|p| tables.extend(*s, h, p))
                .collect()
        });
        let mut next: Vec<(u64, Vec<u8>)> = grown
            .into_iter()
            .flatten()
            .filter(|e| !seen.contains(&e.0))
            .collect();
        next.sort_unstable_by_key(|e| e.0);
        next.dedup_by_key(|e| e.0);
        seen.extend(next.iter().map(|e| e.0));
        frontier = next;
    }
    let mut all: Vec<u64> = seen.into_iter().collect();
    all.sort_unstable_by_key(|&s| (s.count_ones(), s));
    let prints: Vec<Vec<u8>> = exec.map(&all, |&s| {
        let mut fp = Vec::new();
        for (row, &nl) in line_id.iter().zip(&n_lines) {
            let mut c = vec![0u8; nl];
            for p in 0..k {
                if s >> p & 1 == 1 {
                    c[row[p] as usize] += 1;
                }
            }
            fp.extend(c);
        }
        fp
    });
    let mut first: HashMap<&[u8], u64> = HashMap::new();
    for (s, fp) in all.iter().zip(&prints) {
        if let Some(&t) = first.get(fp.as_slice()) {
            let pick = |m: u64| {
                (0..k)
                    .filter(|&i| m >> i & 1 == 1)
                    .map(|i| region[i].clone())
                    .collect()
            };
            return Ok(OracleResult::Collision {
                f: pick(t),
                g: pick(*s),
                subsets: all.len(),
            });
        }
        first.insert(fp, *s);
    }
    Ok(OracleResult::Unique { subsets: all.len() })
}
