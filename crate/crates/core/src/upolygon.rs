//! U-polygons: verification, maximal direction sets, construction from a direction
//! frame, two-colorings and ghost pairs of convex subsets with equal X-rays.

use std::collections::{BTreeMap, HashSet, VecDeque};

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::cyclotomic::CycNum;
use crate::enumerate::{classify_family, order_for, real_subfield_d, solve_in_field, Quadruple};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::linalg;
use crate::modelset::{
    at_order, find_homothety, generate_patch, HomothetySearch, LatticePoint, ModelSetSpec,
};
use crate::rational::{self, gcd_u64, lcm_u64, Q};
use crate::tomography::{
    convex_hull, cross_ratio_dirs, is_convex_subset, wedge, xrays_equal, Direction, Region,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPolygon {
    pub n: u64,
    /// Counter-clockwise, at order n.
    pub vertices: Vec<CycNum>,
    pub directions: Vec<Direction>,
}

impl UPolygon {
    /// Checked constructor; the vertices are re-oriented counter-clockwise.
    pub fn new(n: u64, vertices: Vec<CycNum>, directions: Vec<Direction>) -> Result<Self> {
        let mut vertices: Vec<CycNum> = vertices
            .iter()
            .map(|v| at_order(v, n))
            .collect::<Result<_>>()?;
        if convexity(&vertices)? < 0 {
            vertices.reverse();
        }
        if !is_upolygon(&vertices, &directions)? {
            return Err(Error::ConstructionFailed(
                "vertex-line property fails".into(),
            ));
        }
        Ok(UPolygon {
            n,
            vertices,
            directions,
        })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

impl Serialize for UPolygon {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct J<'a> {
            n: u64,
            vertices: &'a [CycNum],
            directions: &'a [Direction],
        }
        J {
            n: self.n,
            vertices: &self.vertices,
            directions: &self.directions,
        }
        .serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for UPolygon {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(serde::Deserialize)]
        struct J {
            n: u64,
            vertices: Vec<CycNum>,
            directions: Vec<Vec<i64>>,
        }
        use serde::de::Error as _;
        let j = J::deserialize(d)?;
        let dirs = j
            .directions
            .iter()
            .map(|c| Direction::from_i64(j.n, c))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        UPolygon::new(j.n, j.vertices, dirs).map_err(D::Error::custom)
    }
}

/// +1 for a strictly convex counter-clockwise polygon, -1 for clockwise, error otherwise.
fn convexity(v: &[CycNum]) -> Result<i8> {
    let k = v.len();
    if k < 3 {
        return Err(Error::DegeneratePolygon(format!("{k} vertices")));
    }
    let mut sign = 0i8;
    for i in 0..k {
        let (a, b) = (&v[i], &v[(i + 1) % k]);
        for (j, c) in v.iter().enumerate() {
            if j == i || j == (i + 1) % k {
                continue;
            }
            let s = crate::modelset::orient(a, b, c)?;
            if s == 0 || (sign != 0 && s != sign) {
                return Err(Error::DegeneratePolygon(format!(
                    "not strictly convex at vertex {i}"
                )));
            }
            sign = s;
        }
    }
    Ok(sign)
}

fn line_keys(v: &[CycNum], u: &Direction) -> Result<Vec<(u64, Vec<BigInt>, BigInt)>> {
    v.iter()
        .map(|p| Ok(at_order(&wedge(u.rep(), &at_order(p, u.n())?), u.n())?.key()))
        .collect()
}

/// Exact check that every line through a vertex in a direction of `u` meets another vertex.
pub fn is_upolygon(vertices: &[CycNum], u: &[Direction]) -> Result<bool> {
    convexity(vertices)?;
    for d in u {
        let keys = line_keys(vertices, d)?;
        let mut count: BTreeMap<&(u64, Vec<BigInt>, BigInt), usize> = BTreeMap::new();
        for k in &keys {
            *count.entry(k).or_insert(0) += 1;
        }
        if count.values().any(|&c| c < 2) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Sorted directions e^{h pi i / m}, h in `hs`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct HRangeSet {
    pub m: u64,
    pub hs: Vec<u64>,
}

impl HRangeSet {
    pub fn new(m: u64, hs: &[u64]) -> Result<Self> {
        let mut hs = hs.to_vec();
        hs.sort_unstable();
        hs.dedup();
        if hs.len() < 3 || hs.iter().any(|&h| h >= m) {
            return Err(Error::Parse(format!(
                "need at least 3 distinct values below {m}"
            )));
        }
        Ok(HRangeSet { m, hs })
    }

    /// Parse "0,2,4" or "0 2 4".
    pub fn parse(m: u64, s: &str) -> Result<Self> {
        let hs = s
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<u64>()
                    .map_err(|_| Error::Parse(format!("bad range entry {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(m, &hs)
    }

    pub fn len(&self) -> usize {
        self.hs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hs.is_empty()
    }

    /// Every 4-subset maps to a quadruple in `ok`.
    pub fn all_subsets_ok(&self, ok: &dyn Fn(&Quadruple) -> bool) -> bool {
        let h = &self.hs;
        let k = h.len();
        for a in 0..k {
            for b in a + 1..k {
                for c in b + 1..k {
                    for d in c + 1..k {
                        if !ok(&window_quad(self.m, h[a], h[b], h[c], h[d])) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

/// The quadruple of four increasing h values, with k1 <= k2 enforced by swapping.
fn window_quad(m: u64, h1: u64, h2: u64, h3: u64, h4: u64) -> Quadruple {
    let (mut k1, mut k2) = (h3 - h1, h4 - h2);
    if k1 > k2 {
        std::mem::swap(&mut k1, &mut k2);
    }
    Quadruple {
        m,
        k: [k1, k2, h3 - h2, h4 - h1],
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MaxDirectionSets {
    pub n: u64,
    pub m: u64,
    pub b: usize,
    pub ranges: Vec<HRangeSet>,
}

/// Grow seeds from sporadic solutions one direction at a time while every new
/// 4-subset stays admissible; keep the maximal ranges of at least 5 directions.
pub fn max_direction_sets(n: u64, exec: Exec) -> Result<MaxDirectionSets> {
    match n {
        3 | 4 => {
            return Ok(MaxDirectionSets {
                n,
                m: order_for(n),
                b: 6,
                ranges: Vec::new(),
            })
        }
        5 | 8 | 12 => {}
        _ => return Err(Error::UnsupportedN(n)),
    }
    let m = order_for(n);
    let d = real_subfield_d(n).ok_or(Error::UnsupportedField(n))?;
    let sporadic: HashSet<[u64; 4]> = solve_in_field(m, d, exec)?
        .into_iter()
        .filter(|r| r.is_sporadic())
        .map(|r| r.quadruple.k)
        .collect();
    let ok = |q: &Quadruple| sporadic.contains(&q.k) || classify_family(q).is_some();
    let mut seeds: Vec<[u64; 4]> = sporadic
        .iter()
        .copied()
        .filter(|k| k.iter().all(|&x| x <= m / 2))
        .collect();
    seeds.sort_unstable();
    let per_seed: Vec<Vec<Vec<u64>>> = exec.map(&seeds, |&[k1, _, k3, k4]| {
        let mut finals = Vec::new();
        extend(m, &mut vec![0, k1 - k3, k1, k4], &ok, &mut finals);
        let sets: Vec<HashSet<u64>> = finals
            .iter()
            .map(|f: &Vec<u64>| f.iter().copied().collect())
            .collect();
        finals
            .iter()
            .zip(&sets)
            .filter(|(_, s)| !sets.iter().any(|t| s.len() < t.len() && s.is_subset(t)))
            .map(|(f, _)| f.clone())
            .collect()
    });
    let mut ranges: Vec<HRangeSet> = per_seed
        .into_iter()
        .flatten()
        .map(|hs| HRangeSet { m, hs })
        .collect();
    ranges.sort_by(|a, b| (a.len(), &a.hs).cmp(&(b.len(), &b.hs)));
    ranges.dedup();
    let b = ranges.iter().map(|r| r.len()).max().unwrap_or(0);
    Ok(MaxDirectionSets { n, m, b, ranges })
}

fn extend(m: u64, h: &mut Vec<u64>, ok: &dyn Fn(&Quadruple) -> bool, finals: &mut Vec<Vec<u64>>) {
    let k = h.len();
    let last = h[k - 1];
    let mut grew = false;
    for x in last + 1..m {
        if !ok(&window_quad(m, h[k - 3], h[k - 2], h[k - 1], x)) {
            continue;
        }
        let mut all = true;
        'outer: for a in 0..k {
            for b in a + 1..k {
                for c in b + 1..k {
                    if !ok(&window_quad(m, h[a], h[b], h[c], x)) {
                        all = false;
                        break 'outer;
                    }
                }
            }
        }
        if !all {
            continue;
        }
        grew = true;
        h.push(x);
        extend(m, h, ok, finals);
        h.pop();
    }
    if !grew && k >= 5 {
        finals.push(h.clone());
    }
}

/// The direction e^{h pi i / m}, represented at order m.
fn frame_direction(m: u64, h: u64) -> Result<Direction> {
    let z = CycNum::zeta(m, h as i64);
    let rep = if 2 * h == m {
        CycNum::zeta(4, 1).promote(lcm_u64(m, 4))?
    } else {
        &CycNum::one(m) + &z
    };
    Direction::new(&rep, lcm_u64(m, 4))
}

fn omega(n: u64) -> CycNum {
    &CycNum::zeta(n, 1) - &CycNum::zeta(n, -1)
}

/// Λ-directions for a frame: the frame itself when it lies in Q(zeta_n), otherwise
/// the image under a linear map sending the first three to slopes 0, sin(2 pi / n), inf.
pub fn range_directions(hs: &HRangeSet, n: u64) -> Result<Vec<Direction>> {
    let m = hs.m;
    let direct: Option<Vec<CycNum>> = hs
        .hs
        .iter()
        .map(|&h| {
            if 2 * h == m {
                Some(omega(n))
            } else {
                at_order(&(&CycNum::one(m) + &CycNum::zeta(m, h as i64)), n).ok()
            }
        })
        .collect();
    if let Some(reps) = direct {
        return reps.iter().map(|r| Direction::new(r, n)).collect();
    }
    let frame: Vec<Direction> = hs
        .hs
        .iter()
        .map(|&h| frame_direction(m, h))
        .collect::<Result<_>>()?;
    let w = omega(n);
    let two = CycNum::from_int(n, 2);
    let mut reps = vec![two.clone(), &two + &w, w.clone()];
    for f in &frame[3..] {
        let chi = cross_ratio_dirs([&frame[0], &frame[1], &frame[2], f])?;
        let chi = at_order(&chi, n).map_err(|_| {
            Error::ConstructionFailed(format!("cross ratio {chi} is not in Q(zeta_{n})"))
        })?;
        let c = (&CycNum::one(n) - &chi).inv()?;
        reps.push(&two + &(&c * &w));
    }
    let dirs: Vec<Direction> = reps
        .iter()
        .map(|r| Direction::new(r, n))
        .collect::<Result<_>>()?;
    for (j, f) in frame.iter().enumerate().skip(3) {
        let a = cross_ratio_dirs([&frame[0], &frame[1], &frame[2], f])?;
        let b = cross_ratio_dirs([&dirs[0], &dirs[1], &dirs[2], &dirs[j]])?;
        if at_order(&a, n)? != at_order(&b, n)? {
            return Err(Error::VerificationFailed(
                "frame map does not preserve cross ratios".into(),
            ));
        }
    }
    Ok(dirs)
}

/// Sizes of the target polygon, in units of the integral basis.
fn scales() -> impl Iterator<Item = f64> {
    [1.0, 1.5, 2.0, 3.0, 4.0, 5.0, 6.0, 8.0, 10.0, 12.0]
        .into_iter()
        .chain((4..=22).map(|e| 2f64.powi(e)))
}

fn cross2(a: (f64, f64), b: (f64, f64)) -> f64 {
    a.0 * b.1 - a.1 * b.0
}

/// Real linear map sending the frame directions to the image directions, det +-1.
fn frame_map(hs: &HRangeSet, dirs: &[Direction]) -> [[f64; 2]; 2] {
    let ang = |h: u64| std::f64::consts::PI * h as f64 / hs.m as f64;
    let d: Vec<(f64, f64)> = hs
        .hs
        .iter()
        .map(|&h| (ang(h).cos(), ang(h).sin()))
        .collect();
    let u: Vec<(f64, f64)> = dirs.iter().map(|x| x.rep().to_c64()).collect();
    // d2 = x d0 + y d1
    let det = cross2(d[0], d[1]);
    let x = cross2(d[2], d[1]) / det;
    let y = cross2(d[0], d[2]) / det;
    let beta = -x * cross2(u[0], u[2]) / (y * cross2(u[1], u[2]));
    // A [d0 d1] = [u0 beta*u1]
    let (p, q) = (u[0], (beta * u[1].0, beta * u[1].1));
    let inv = [[d[1].1 / det, -d[1].0 / det], [-d[0].1 / det, d[0].0 / det]];
    let mut a = [
        [
            p.0 * inv[0][0] + q.0 * inv[1][0],
            p.0 * inv[0][1] + q.0 * inv[1][1],
        ],
        [
            p.1 * inv[0][0] + q.1 * inv[1][0],
            p.1 * inv[0][1] + q.1 * inv[1][1],
        ],
    ];
    let s = (a[0][0] * a[1][1] - a[0][1] * a[1][0]).abs().sqrt();
    for row in a.iter_mut() {
        for x in row.iter_mut() {
            *x /= s;
        }
    }
    a
}

/// Integral multiple of a rational vector with coprime entries.
fn integralize(v: &[Q]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let w: Vec<BigInt> = v
        .iter()
        .map(|x| (x * Q::from_integer(l.clone())).to_integer())
        .collect();
    let g = w.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return w;
    }
    w.into_iter().map(|x| x / &g).collect()
}

/// A convex polygon with the U-property for the directions of `hs`, with vertices in Z[zeta_n].
///
/// The vertices of a regular 2N-gon pair up along the N frame directions; the same
/// pairing, imposed as exact linear conditions on vertices in Q(zeta_n), cuts out a
/// rational subspace. Integral points of that subspace near an affine image of the
/// regular polygon are tried until one is strictly convex.
pub fn build_upolygon(hs: &HRangeSet, n: u64) -> Result<UPolygon> {
    let dirs = range_directions(hs, n)?;
    let g = hs.hs.iter().fold(hs.m, |g, &h| gcd_u64(g, h));
    let big_n = (hs.m / g) as usize;
    let js: Vec<usize> = hs.hs.iter().map(|&h| (h / g) as usize).collect();
    let v = 2 * big_n;
    let phi = rational::totient(n) as usize;

    // Pairing a + b = c_j (mod 2N) for a 2N-gon with vertex angles pi v / N + phi0.
    let shift = if big_n.is_multiple_of(2) { 1 } else { 0 };
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for (j, d) in js.iter().zip(&dirs) {
        let c = (2 * j + 2 * v - big_n - shift) % v;
        let u = d.rep();
        let cols: Vec<Vec<Q>> = (0..phi)
            .map(|t| {
                let z = CycNum::zeta(n, t as i64);
                let e = &(&z * &u.conj()) - &(&z.conj() * u);
                at_order(&e, n).expect("order n").coeffs()
            })
            .collect();
        for a in 0..v {
            let b = (c + v - a) % v;
            if a >= b {
                continue;
            }
            for i in 0..phi {
                let mut row = vec![Q::zero(); v * phi];
                for t in 0..phi {
                    row[a * phi + t] = cols[t][i].clone();
                    row[b * phi + t] = -cols[t][i].clone();
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let basis: Vec<Vec<BigInt>> = linalg::nullspace(&rows, v * phi)
        .iter()
        .map(|b| integralize(b))
        .collect();
    if basis.is_empty() {
        return Err(Error::ConstructionFailed(
            "pairing conditions admit only the zero polygon".into(),
        ));
    }

    let a = frame_map(hs, &dirs);
    let star = ModelSetSpec::default_star_exponent(n).unwrap_or(0);
    let internal = star != 0;
    let per = if internal { 4 } else { 2 };
    let emb = |t: usize, k: u64| {
        let x = std::f64::consts::TAU * (k as usize * t) as f64 / n as f64;
        (x.cos(), x.sin())
    };
    let phi0 = if big_n.is_multiple_of(2) {
        std::f64::consts::PI / (2 * big_n) as f64
    } else {
        0.0
    };
    // A small internal part keeps the later embedding cheap; the second pass fits the shape alone.
    for weight in [1.0, 1e-4] {
        let mut mat = DMatrix::<f64>::zeros(v * per, basis.len());
        for (col, b) in basis.iter().enumerate() {
            for p in 0..v {
                let mut acc = [0.0; 4];
                for t in 0..phi {
                    let c = b[p * phi + t].to_f64().unwrap_or(f64::NAN);
                    if c == 0.0 {
                        continue;
                    }
                    let (x, y) = emb(t, 1);
                    acc[0] += c * x;
                    acc[1] += c * y;
                    if internal {
                        let (x, y) = emb(t, star);
                        acc[2] += c * x * weight;
                        acc[3] += c * y * weight;
                    }
                }
                for r in 0..per {
                    mat[(p * per + r, col)] = acc[r];
                }
            }
        }
        let svd = mat.svd(true, true);
        for scale in scales() {
            let mut target = DVector::<f64>::zeros(v * per);
            for p in 0..v {
                let ang = std::f64::consts::PI * p as f64 / big_n as f64 + phi0;
                let (x, y) = (scale * ang.cos(), scale * ang.sin());
                target[p * per] = a[0][0] * x + a[0][1] * y;
                target[p * per + 1] = a[1][0] * x + a[1][1] * y;
            }
            let Ok(y) = svd.solve(&target, 1e-10) else {
                continue;
            };
            let coef: Vec<i64> = y.iter().map(|x| x.round() as i64).collect();
            if coef.iter().all(|&c| c == 0) {
                continue;
            }
            let verts: Vec<CycNum> = (0..v)
                .map(|p| {
                    let c: Vec<BigInt> = (0..phi)
                        .map(|t| {
                            basis
                                .iter()
                                .zip(&coef)
                                .map(|(b, &k)| &b[p * phi + t] * k)
                                .sum()
                        })
                        .collect();
                    CycNum::from_ints(n, &c)
                })
                .collect();
            if !float_convex(&verts) {
                continue;
            }
            match UPolygon::new(n, verts, dirs.clone()) {
                Ok(p) => return Ok(p),
                Err(Error::DegeneratePolygon(_)) => continue,
                Err(e) => return Err(e),
            }
        }
        if !internal {
            break;
        }
    }
    Err(Error::ConstructionFailed(format!(
        "no strictly convex integral solution for {} directions at scales up to 2^22",
        dirs.len()
    )))
}

fn float_convex(v: &[CycNum]) -> bool {
    let p: Vec<(f64, f64)> = v.iter().map(|z| z.to_c64()).collect();
    let k = p.len();
    let turns: Vec<f64> = (0..k)
        .map(|i| {
            let (a, b, c) = (p[i], p[(i + 1) % k], p[(i + 2) % k]);
            cross2((b.0 - a.0, b.1 - a.1), (c.0 - b.0, c.1 - b.1))
        })
        .collect();
    turns.iter().all(|&t| t > 1e-9) || turns.iter().all(|&t| t < -1e-9)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Coloring {
    pub black: Vec<usize>,
    pub grey: Vec<usize>,
}

/// Two-color the vertices so that the two vertices on each U-line get different colors.
pub fn two_coloring(p: &UPolygon) -> Result<Coloring> {
    let k = p.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); k];
    for d in &p.directions {
        let keys = line_keys(&p.vertices, d)?;
        let mut lines: BTreeMap<&(u64, Vec<BigInt>, BigInt), Vec<usize>> = BTreeMap::new();
        for (i, key) in keys.iter().enumerate() {
            lines.entry(key).or_default().push(i);
        }
        for members in lines.values() {
            if members.len() != 2 {
                return Err(Error::DegeneratePolygon(format!(
                    "a line in direction {d} carries {} vertices",
                    members.len()
                )));
            }
            adj[members[0]].push(members[1]);
            adj[members[1]].push(members[0]);
        }
    }
    let mut color: Vec<Option<bool>> = vec![None; k];
    for s in 0..k {
        if color[s].is_some() {
            continue;
        }
        color[s] = Some(true);
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            let cx = color[x].expect("colored");
            for &y in &adj[x] {
                match color[y] {
                    None => {
                        color[y] = Some(!cx);
                        queue.push_back(y);
                    }
                    Some(cy) if cy == cx => return Err(Error::NotColorable),
                    Some(_) => {}
                }
            }
        }
    }
    let black = (0..k).filter(|&i| color[i] == Some(true)).collect();
    let grey = (0..k).filter(|&i| color[i] == Some(false)).collect();
    Ok(Coloring { black, grey })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GhostPair {
    pub n: u64,
    pub common: Vec<LatticePoint>,
    pub black: Vec<LatticePoint>,
    pub grey: Vec<LatticePoint>,
    pub directions: Vec<Direction>,
    /// All model-set points of the patch used for the convexity checks.
    pub ambient: Vec<LatticePoint>,
}

impl GhostPair {
    pub fn first(&self) -> Vec<LatticePoint> {
        let mut v = self.common.clone();
        v.extend(self.black.iter().cloned());
        v.sort();
        v
    }

    pub fn second(&self) -> Vec<LatticePoint> {
        let mut v = self.common.clone();
        v.extend(self.grey.iter().cloned());
        v.sort();
        v
    }

    /// Exact re-verification: equal X-rays, distinct sets, both convex in the ambient patch.
    pub fn verify(&self) -> Result<bool> {
        let (f, g) = (self.first(), self.second());
        if f == g || !xrays_equal(&f, &g, &self.directions)? {
            return Ok(false);
        }
        let region = Region::Points(self.ambient.clone());
        Ok(is_convex_subset(&f, &region)? && is_convex_subset(&g, &region)?)
    }
}

impl Serialize for GhostPair {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct J<'a> {
            n: u64,
            common: &'a [LatticePoint],
            black: &'a [LatticePoint],
            grey: &'a [LatticePoint],
            directions: &'a [Direction],
        }
        J {
            n: self.n,
            common: &self.common,
            black: &self.black,
            grey: &self.grey,
            directions: &self.directions,
        }
        .serialize(s)
    }
}

/// Closed-hull membership with a float filter in front of the exact test.
fn hull_contains(hull: &[CycNum], fl: &[(f64, f64)], p: &CycNum) -> Result<bool> {
    let (x, y) = p.to_c64();
    let k = hull.len();
    let mut exact = Vec::new();
    for i in 0..k {
        let (a, b) = (fl[i], fl[(i + 1) % k]);
        let c = cross2((b.0 - a.0, b.1 - a.1), (x - a.0, y - a.1));
        let tol = 1e-9 * (1.0 + a.0.abs() + a.1.abs() + x.abs() + y.abs()).powi(2);
        if c < -tol {
            return Ok(false);
        }
        if c <= tol {
            exact.push(i);
        }
    }
    for i in exact {
        if crate::modelset::orient(&hull[i], &hull[(i + 1) % k], p)? < 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Embed `p` into the model set, fill its hull with model-set points and split the
/// vertices by color. The result is verified exactly before it is returned.
pub fn ghost_pair(p: &UPolygon, spec: &ModelSetSpec, exec: Exec) -> Result<GhostPair> {
    if p.n != spec.n {
        return Err(Error::OrderMismatch(spec.n, p.n));
    }
    let h = find_homothety(&p.vertices, spec, HomothetySearch::default())
        .map_err(|e| Error::EmbeddingFailed(e.to_string()))?;
    let imgs: Vec<LatticePoint> = p
        .vertices
        .iter()
        .map(|v| h.apply(v))
        .collect::<Result<_>>()?;
    let emb: Vec<CycNum> = imgs.iter().map(|q| q.embed()).collect();
    let rmax = emb
        .iter()
        .map(|z| z.to_c64())
        .map(|(x, y)| x.hypot(y))
        .fold(0.0, f64::max);
    let radius = Q::from_integer(BigInt::from(rmax.ceil() as i64 + 1));
    let patch = generate_patch(spec, &radius, exec)?;
    let hull = convex_hull(&emb);
    let fl: Vec<(f64, f64)> = hull.iter().map(|z| z.to_c64()).collect();
    let verts: HashSet<&LatticePoint> = imgs.iter().collect();
    let inside: Vec<Result<bool>> = exec.map(&patch.points, |q| {
        if verts.contains(q) {
            return Ok(false);
        }
        hull_contains(&hull, &fl, &q.embed())
    });
    let mut common = Vec::new();
    for (q, r) in patch.points.iter().zip(inside) {
        if r? {
            common.push(q.clone());
        }
    }
    common.sort();
    let col = two_coloring(p)?;
    let pick = |idx: &[usize]| -> Vec<LatticePoint> {
        let mut v: Vec<LatticePoint> = idx.iter().map(|&i| imgs[i].clone()).collect();
        v.sort();
        v
    };
    let pair = GhostPair {
        n: p.n,
        common,
        black: pick(&col.black),
        grey: pick(&col.grey),
        directions: p.directions.clone(),
        ambient: patch.points,
    };
    if !pair.verify()? {
        return Err(Error::VerificationFailed(
            "ghost pair fails its exact checks".into(),
        ));
    }
    Ok(pair)
}

/// Whether an affinely regular k-gon exists with vertices in Q(zeta_n):
/// Q(zeta_k)^+ must lie in Q(zeta_n)^+.
pub fn affinely_regular_exists(k: u64, n: u64) -> bool {
    if k < 3 || n == 0 {
        return false;
    }
    let half = |x: u64| (rational::totient(x) / 2).max(1);
    if half(n) % half(k) != 0 {
        return false;
    }
    let g = &CycNum::zeta(k, 1) + &CycNum::zeta(k, -1);
    g.promote(lcm_u64(k, n))
        .map(|x| x.lies_in(n))
        .unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(n: u64, c: &[i64]) -> CycNum {
        LatticePoint::from_i64(n, c).embed()
    }

    fn dir(n: u64, c: &[i64]) -> Direction {
        Direction::from_i64(n, c).unwrap()
    }

    #[test]
    fn squares_and_hexagons() {
        let sq: Vec<CycNum> = [[0, 0], [1, 0], [1, 1], [0, 1]]
            .iter()
            .map(|c| pt(4, c))
            .collect();
        assert!(is_upolygon(&sq, &[dir(4, &[1, 0]), dir(4, &[0, 1])]).unwrap());
        assert!(!is_upolygon(&sq, &[dir(4, &[1, 0]), dir(4, &[0, 1]), dir(4, &[1, 1])]).unwrap());
        // 1, 1+w, w, -1, -1-w, -w with w = zeta_3
        let hex: Vec<CycNum> = [[1, 0], [1, 1], [0, 1], [-1, 0], [-1, -1], [0, -1]]
            .iter()
            .map(|c| pt(3, c))
            .collect();
        let u = [dir(3, &[1, 0]), dir(3, &[0, 1]), dir(3, &[1, 1])];
        assert!(is_upolygon(&hex, &u).unwrap());
        let p = UPolygon::new(3, hex, u.to_vec()).unwrap();
        let c = two_coloring(&p).unwrap();
        assert_eq!(c.black, vec![0, 2, 4]);
        assert_eq!(c.grey, vec![1, 3, 5]);
        let collinear: Vec<CycNum> = [[0, 0], [1, 0], [2, 0]].iter().map(|c| pt(4, c)).collect();
        assert!(matches!(
            is_upolygon(&collinear, &u[..1]),
            Err(Error::DegeneratePolygon(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let p = build_upolygon(&HRangeSet::new(12, &[0, 2, 4, 8]).unwrap(), 4).unwrap();
        let j = serde_json::to_string(&p).unwrap();
        let back: UPolygon = serde_json::from_str(&j).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn square_coloring() {
        let sq: Vec<CycNum> = [[0, 0], [1, 0], [1, 1], [0, 1]]
            .iter()
            .map(|c| pt(4, c))
            .collect();
        let p = UPolygon::new(4, sq, vec![dir(4, &[1, 0]), dir(4, &[0, 1])]).unwrap();
        let c = two_coloring(&p).unwrap();
        assert_eq!(c.black, vec![0, 2]);
        assert_eq!(c.grey, vec![1, 3]);
    }

    #[test]
    fn window_quadruples() {
        assert_eq!(window_quad(12, 0, 2, 4, 8).k, [4, 6, 2, 8]);
        assert_eq!(window_quad(12, 0, 3, 6, 9).k, [6, 6, 3, 9]);
    }

    #[test]
    fn lattice_frames() {
        let hs = HRangeSet::new(12, &[0, 2, 4, 8]).unwrap();
        let p = build_upolygon(&hs, 4).unwrap();
        assert_eq!(p.len(), 12);
        let oct = build_upolygon(&HRangeSet::new(12, &[0, 3, 6, 9]).unwrap(), 4).unwrap();
        assert_eq!(oct.len(), 8);
        let hex = build_upolygon(&HRangeSet::new(12, &[0, 4, 8]).unwrap(), 3).unwrap();
        assert_eq!(hex.len(), 6);
    }

    #[test]
    fn affinely_regular() {
        assert!(affinely_regular_exists(10, 5));
        assert!(affinely_regular_exists(5, 5));
        assert!(!affinely_regular_exists(7, 5));
        assert!(!affinely_regular_exists(8, 5));
        for n in [3, 4, 5, 7, 8, 12] {
            assert!(affinely_regular_exists(4, n));
            assert!(affinely_regular_exists(6, n));
        }
        assert!(!affinely_regular_exists(24, 12));
        assert!(affinely_regular_exists(12, 12));
        assert!(affinely_regular_exists(8, 8));
        assert!(!affinely_regular_exists(8, 4));
    }
}
