//! Cut-and-project sets in Z[zeta_n] for n in {3, 4, 5, 8, 12}.
//!
//! For n = 5, 8, 12 the internal space is one complex line reached by a single
//! Galois embedding; for n = 3, 4 it is trivial and the set is the lattice itself.

use std::fmt;

use nalgebra::Matrix4;
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclotomic::CycNum;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::rational::{self, gcd_u64, Q};

/// Relative slack for the float filters; anything closer goes to the exact predicates.
const FILTER_EPS: f64 = 1e-9;

/// Point of Z[zeta_n] (plus an optional offset in Q(zeta_n)), in power-basis coordinates.
#[derive(Clone, Debug)]
pub struct LatticePoint {
    pub n: u64,
    pub coeffs: Vec<BigInt>,
    pub translate: Option<CycNum>,
}

type PointKey = (u64, Vec<BigInt>, Option<(u64, Vec<BigInt>, BigInt)>);

impl LatticePoint {
    fn sort_key(&self) -> PointKey {
        (
            self.n,
            self.coeffs.clone(),
            self.translate.as_ref().map(|t| t.key()),
        )
    }
}

impl PartialEq for LatticePoint {
    fn eq(&self, o: &Self) -> bool {
        self.n == o.n && self.coeffs == o.coeffs && self.translate == o.translate
    }
}

impl Eq for LatticePoint {}

impl std::hash::Hash for LatticePoint {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        self.sort_key().hash(h)
    }
}

impl PartialOrd for LatticePoint {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for LatticePoint {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.sort_key().cmp(&o.sort_key())
    }
}

impl LatticePoint {
    pub fn new(n: u64, coeffs: Vec<BigInt>) -> Self {
        assert_eq!(
            coeffs.len(),
            rational::totient(n) as usize,
            "coefficient count"
        );
        LatticePoint {
            n,
            coeffs,
            translate: None,
        }
    }

    pub fn from_i64(n: u64, coeffs: &[i64]) -> Self {
        Self::new(n, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(n: u64) -> Self {
        Self::new(n, vec![BigInt::zero(); rational::totient(n) as usize])
    }

    /// The point with value `x`, which must be an integral element of Q(zeta_n).
    pub fn from_cyc(x: &CycNum, n: u64) -> Result<Self> {
        let y = at_order(x, n)?;
        if !y.is_integral() {
            return Err(Error::Parse(format!("{y} is not in Z[zeta_{n}]")));
        }
        let (num, _) = y.num_den();
        Ok(Self::new(n, num.to_vec()))
    }

    pub fn embed(&self) -> CycNum {
        let base = CycNum::from_ints(self.n, &self.coeffs);
        match &self.translate {
            Some(t) => &base + t,
            None => base,
        }
    }

    pub fn to_c64(&self) -> (f64, f64) {
        self.embed().to_c64()
    }

    pub fn coeffs_i64(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(|c| c.to_i64()).collect()
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.embed())
    }
}

impl Serialize for LatticePoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            match c.to_i64() {
                Some(v) => seq.serialize_element(&v)?,
                None => seq.serialize_element(&c.to_string())?,
            }
        }
        seq.end()
    }
}

/// Re-express `x` at order exactly `n`.
pub fn at_order(x: &CycNum, n: u64) -> Result<CycNum> {
    if x.order() == n {
        return Ok(x.clone());
    }
    if n.is_multiple_of(x.order()) {
        return x.promote(n);
    }
    let d = x.demote();
    if n.is_multiple_of(d.order()) {
        d.promote(n)
    } else {
        Err(Error::OrderMismatch(n, x.order()))
    }
}

/// Convex polygon in internal space, counter-clockwise, vertices in Q(zeta_n).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub vertices: Vec<CycNum>,
}

impl Window {
    /// Regular k-gon with vertices `c * zeta_k^j`, k in {8, 10, 12}, expressed at order n.
    pub fn regular(k: u64, c: &Q, n: u64) -> Result<Window> {
        let vertices = (0..k)
            .map(|j| at_order(&CycNum::zeta(k, j as i64).scale(c), n))
            .collect::<Result<Vec<_>>>()?;
        let w = Window { vertices };
        w.check()?;
        Ok(w)
    }

    /// The shipped default for n: octagon, decagon or dodecagon of circumradius `c`.
    pub fn default_for(n: u64, c: &Q) -> Result<Window> {
        match n {
            5 => Window::regular(10, c, 5),
            8 => Window::regular(8, c, 8),
            12 => Window::regular(12, c, 12),
            _ => Err(Error::NoInternalSpace(n)),
        }
    }

    /// Parse `octagon:c`, `decagon:c` or `dodecagon:c`.
    pub fn parse(s: &str, n: u64) -> Result<Window> {
        let (name, c) = s.split_once(':').unwrap_or((s, "1"));
        let c = rational::parse_q(c)?;
        let k = match name {
            "octagon" => 8,
            "decagon" => 10,
            "dodecagon" => 12,
            _ => return Err(Error::Parse(format!("unknown window {name:?}"))),
        };
        Window::regular(k, &c, n)
    }

    fn check(&self) -> Result<()> {
        let k = self.vertices.len();
        if k < 3 {
            return Err(Error::WindowDegenerate("fewer than 3 vertices".into()));
        }
        for j in 0..k {
            let a = &self.vertices[j];
            let b = &self.vertices[(j + 1) % k];
            let c = &self.vertices[(j + 2) % k];
            if orient(a, b, c)? <= 0 {
                return Err(Error::WindowDegenerate(
                    "not strictly convex and counter-clockwise".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn order(&self) -> u64 {
        self.vertices[0].order()
    }

    fn float_edges(&self) -> Vec<Edge> {
        let k = self.vertices.len();
        (0..k)
            .map(|j| {
                (
                    self.vertices[j].to_c64(),
                    self.vertices[(j + 1) % k].to_c64(),
                )
            })
            .collect()
    }

    pub fn circumradius_f64(&self) -> f64 {
        self.vertices
            .iter()
            .map(|v| {
                let (x, y) = v.to_c64();
                x.hypot(y)
            })
            .fold(0.0, f64::max)
    }

    /// Exact strict-interior test.
    pub fn contains_strict(&self, p: &CycNum) -> Result<bool> {
        let k = self.vertices.len();
        for j in 0..k {
            if orient(&self.vertices[j], &self.vertices[(j + 1) % k], p)? <= 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Sign of the turn a -> b -> c: Im(conj(b - a) (c - a)).
pub fn orient(a: &CycNum, b: &CycNum, c: &CycNum) -> Result<i8> {
    let u = b - a;
    let v = c - a;
    (&u.conj() * &v).im_sign()
}

type Edge = ((f64, f64), (f64, f64));

/// Float verdict for strict interior: Some(answer) when clear, None near the boundary.
fn float_inside(edges: &[Edge], p: (f64, f64), scale: f64) -> Option<bool> {
    let tol = FILTER_EPS * (1.0 + scale);
    let mut clear = true;
    for &((ax, ay), (bx, by)) in edges {
        let cr = (bx - ax) * (p.1 - ay) - (by - ay) * (p.0 - ax);
        if cr < -tol {
            return Some(false);
        }
        if cr <= tol {
            clear = false;
        }
    }
    clear.then_some(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelSetSpec {
    pub n: u64,
    pub star_exponent: u64,
    /// None for n in {3, 4}.
    pub window: Option<Window>,
    /// Internal-space offset: members satisfy z* - translate in the open window.
    pub translate: Option<CycNum>,
}

impl ModelSetSpec {
    pub fn default_star_exponent(n: u64) -> Result<u64> {
        match n {
            3 | 4 => Ok(0),
            5 => Ok(2),
            8 => Ok(3),
            12 => Ok(5),
            _ => Err(Error::UnsupportedN(n)),
        }
    }

    /// The lattice Z[zeta_n] for n in {3, 4}.
    pub fn lattice(n: u64) -> Result<Self> {
        if n != 3 && n != 4 {
            return Err(Error::UnsupportedN(n));
        }
        Ok(ModelSetSpec {
            n,
            star_exponent: 0,
            window: None,
            translate: None,
        })
    }

    pub fn new(
        n: u64,
        star_exponent: u64,
        window: Window,
        translate: Option<CycNum>,
    ) -> Result<Self> {
        if ![5, 8, 12].contains(&n) {
            return Err(Error::UnsupportedN(n));
        }
        if gcd_u64(star_exponent, n) != 1 || star_exponent % n == 1 || star_exponent % n == n - 1 {
            return Err(Error::Parse(format!(
                "star exponent {star_exponent} is not admissible for n = {n}"
            )));
        }
        if window.order() != n && !n.is_multiple_of(window.order()) {
            return Err(Error::OrderMismatch(n, window.order()));
        }
        let window = Window {
            vertices: window
                .vertices
                .iter()
                .map(|v| at_order(v, n))
                .collect::<Result<_>>()?,
        };
        window.check()?;
        let translate = translate.map(|t| at_order(&t, n)).transpose()?;
        Ok(ModelSetSpec {
            n,
            star_exponent,
            window: Some(window),
            translate,
        })
    }

    /// Default window of circumradius `c` and default star map.
    pub fn standard(n: u64, c: &Q) -> Result<Self> {
        match n {
            3 | 4 => Self::lattice(n),
            _ => Self::new(
                n,
                Self::default_star_exponent(n)?,
                Window::default_for(n, c)?,
                None,
            ),
        }
    }

    pub fn has_internal_space(&self) -> bool {
        self.window.is_some()
    }

    fn internal_target(&self, star: &CycNum) -> CycNum {
        match &self.translate {
            Some(t) => star - t,
            None => star.clone(),
        }
    }
}

/// The Galois image z -> sigma_a(z) used as internal coordinate; zero for lattices.
pub fn star_map(z: &LatticePoint, spec: &ModelSetSpec) -> Result<CycNum> {
    if z.n != spec.n {
        return Err(Error::OrderMismatch(spec.n, z.n));
    }
    if !spec.has_internal_space() {
        return Ok(CycNum::zero(spec.n));
    }
    at_order(&z.embed(), spec.n)?.galois(spec.star_exponent as i64)
}

pub fn star_of(x: &CycNum, spec: &ModelSetSpec) -> Result<CycNum> {
    if !spec.has_internal_space() {
        return Ok(CycNum::zero(spec.n));
    }
    at_order(x, spec.n)?.galois(spec.star_exponent as i64)
}

pub fn membership(z: &LatticePoint, spec: &ModelSetSpec) -> Result<bool> {
    let Some(w) = &spec.window else {
        return Ok(z.n == spec.n);
    };
    let s = star_map(z, spec)?;
    w.contains_strict(&spec.internal_target(&s))
}

/// Real 4x4 (or 2x2) embedding matrix `c -> (Re z, Im z, Re z*, Im z*)` and float helpers.
struct Minkowski {
    n: u64,
    phi: usize,
    cols: Vec<[f64; 4]>,
}

impl Minkowski {
    fn new(spec: &ModelSetSpec) -> Self {
        let n = spec.n;
        let phi = rational::totient(n) as usize;
        let a = spec.star_exponent as f64;
        let cols = (0..phi)
            .map(|j| {
                let t = std::f64::consts::TAU * j as f64 / n as f64;
                [t.cos(), t.sin(), (a * t).cos(), (a * t).sin()]
            })
            .collect();
        Minkowski { n, phi, cols }
    }

    fn apply(&self, c: &[i64]) -> [f64; 4] {
        let mut x = [0.0; 4];
        for (cj, col) in c.iter().zip(&self.cols) {
            for i in 0..4 {
                x[i] += *cj as f64 * col[i];
            }
        }
        x
    }

    /// Per-coordinate bounds on |c_i| for points with physical modulus <= r and internal modulus <= rho.
    fn box_bounds(&self, r: f64, rho: f64) -> Vec<i64> {
        let inv_rows: Vec<Vec<f64>> = if self.phi == 2 {
            let (a, b, c, d) = (
                self.cols[0][0],
                self.cols[1][0],
                self.cols[0][1],
                self.cols[1][1],
            );
            let det = a * d - b * c;
            vec![vec![d / det, -b / det], vec![-c / det, a / det]]
        } else {
            let m = Matrix4::from_fn(|i, j| self.cols[j][i]);
            let inv = m.try_inverse().expect("Minkowski matrix is invertible");
            (0..4)
                .map(|i| (0..4).map(|j| inv[(i, j)]).collect())
                .collect()
        };
        let bounds = [r, r, rho, rho];
        inv_rows
            .iter()
            .map(|row| {
                let s: f64 = row.iter().zip(&bounds).map(|(x, b)| x.abs() * b).sum();
                (s * (1.0 + 1e-6)).floor() as i64 + 1
            })
            .collect()
    }

    /// Inverse of the internal part of the first two columns.
    fn internal_pair_inverse(&self) -> [[f64; 2]; 2] {
        let (a, b) = (self.cols[0][2], self.cols[1][2]);
        let (c, d) = (self.cols[0][3], self.cols[1][3]);
        let det = a * d - b * c;
        [[d / det, -b / det], [-c / det, a / det]]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Patch {
    pub spec: ModelSetSpec,
    pub radius: Q,
    pub points: Vec<LatticePoint>,
}

impl Serialize for Patch {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct J<'a> {
            n: u64,
            radius: String,
            points: &'a [LatticePoint],
        }
        J {
            n: self.spec.n,
            radius: rational::fmt_q(&self.radius),
            points: &self.points,
        }
        .serialize(s)
    }
}

/// Exact test |z|^2 <= r^2.
fn within_radius(z: &CycNum, r2: &Q) -> Result<bool> {
    let m = z.order();
    let d = &CycNum::from_q(m, r2) - &(z * &z.conj());
    Ok(d.real_sign()? >= 0)
}

/// Members of the model set with physical modulus at most `radius`, sorted by coordinates.
pub fn generate_patch(spec: &ModelSetSpec, radius: &Q, exec: Exec) -> Result<Patch> {
    if radius <= &Q::zero() {
        return Err(Error::Parse("radius must be positive".into()));
    }
    let mk = Minkowski::new(spec);
    let r = rational::to_f64(radius);
    let (edges, rho) = match &spec.window {
        Some(w) => {
            let t = spec
                .translate
                .as_ref()
                .map(|t| t.to_c64())
                .unwrap_or((0.0, 0.0));
            let e: Vec<_> = w
                .float_edges()
                .into_iter()
                .map(|((ax, ay), (bx, by))| ((ax + t.0, ay + t.1), (bx + t.0, by + t.1)))
                .collect();
            (Some(e), w.circumradius_f64() + t.0.hypot(t.1))
        }
        None => (None, 0.0),
    };
    let bounds = mk.box_bounds(r, rho);
    let r2 = radius * radius;
    let phi = mk.phi;
    let center = spec
        .translate
        .as_ref()
        .map(|t| t.to_c64())
        .unwrap_or((0.0, 0.0));
    let check = |c: &[i64]| -> Result<bool> {
        let x = mk.apply(c);
        let m2 = x[0] * x[0] + x[1] * x[1];
        let ok_r = if m2 > r * r * (1.0 + FILTER_EPS) + FILTER_EPS {
            false
        } else if m2 < r * r * (1.0 - FILTER_EPS) - FILTER_EPS {
            true
        } else {
            within_radius(&CycNum::from_ints(mk.n, &to_big(c)), &r2)?
        };
        if !ok_r {
            return Ok(false);
        }
        match &edges {
            Some(e) => match float_inside(e, (x[2], x[3]), rho) {
                Some(v) => Ok(v),
                None => membership(&LatticePoint::from_i64(mk.n, c), spec),
            },
            None => Ok(true),
        }
    };
    let chunks: Vec<Result<Vec<Vec<i64>>>> = if phi == 2 {
        let side = (2 * bounds[0] + 1) as usize;
        exec.map_range(side, |i0| {
            let mut found = Vec::new();
            for c1 in -bounds[1]..=bounds[1] {
                let c = [i0 as i64 - bounds[0], c1];
                if check(&c)? {
                    found.push(c.to_vec());
                }
            }
            Ok(found)
        })
    } else {
        // Fix (c2, c3); the window then confines (c0, c1) to a small ellipse.
        let mi = mk.internal_pair_inverse();
        let half = [
            rho * mi[0][0].hypot(mi[0][1]) + 1.0,
            rho * mi[1][0].hypot(mi[1][1]) + 1.0,
        ];
        let side = (2 * bounds[2] + 1) as usize;
        exec.map_range(side, |i2| {
            let mut found = Vec::new();
            let c2 = i2 as i64 - bounds[2];
            for c3 in -bounds[3]..=bounds[3] {
                let wx = c2 as f64 * mk.cols[2][2] + c3 as f64 * mk.cols[3][2];
                let wy = c2 as f64 * mk.cols[2][3] + c3 as f64 * mk.cols[3][3];
                let (tx, ty) = (center.0 - wx, center.1 - wy);
                let m0 = mi[0][0] * tx + mi[0][1] * ty;
                let m1 = mi[1][0] * tx + mi[1][1] * ty;
                let lo0 = ((m0 - half[0]).floor() as i64).max(-bounds[0]);
                let hi0 = ((m0 + half[0]).ceil() as i64).min(bounds[0]);
                let lo1 = ((m1 - half[1]).floor() as i64).max(-bounds[1]);
                let hi1 = ((m1 + half[1]).ceil() as i64).min(bounds[1]);
                for c0 in lo0..=hi0 {
                    for c1 in lo1..=hi1 {
                        let c = [c0, c1, c2, c3];
                        if check(&c)? {
                            found.push(c.to_vec());
                        }
                    }
                }
            }
            Ok(found)
        })
    };
    let mut points = Vec::new();
    for ch in chunks {
        for c in ch? {
            points.push(LatticePoint::from_i64(spec.n, &c));
        }
    }
    points.sort();
    Ok(Patch {
        spec: spec.clone(),
        radius: radius.clone(),
        points,
    })
}

fn to_big(c: &[i64]) -> Vec<BigInt> {
    c.iter().map(|&x| BigInt::from(x)).collect()
}

/// Fundamental PV unit of Z[zeta_n]^+ for n in {5, 8, 12}.
pub fn pv_unit(n: u64) -> Result<CycNum> {
    let mono = |m: u64, t: &[(i64, i64)]| {
        CycNum::from_monomials(
            m,
            &t.iter()
                .map(|&(e, c)| (e, rational::qi(c)))
                .collect::<Vec<_>>(),
        )
    };
    match n {
        5 => Ok(mono(5, &[(0, 1), (1, 1), (4, 1)])),
        8 => Ok(mono(8, &[(0, 1), (1, 1), (7, 1)])),
        12 => Ok(mono(12, &[(0, 2), (1, 1), (11, 1)])),
        3 | 4 => Err(Error::NoInternalSpace(n)),
        _ => Err(Error::UnsupportedN(n)),
    }
}

/// Exact PV check for `lambda` under `spec`: lambda > 1 and |lambda*| < 1.
pub fn is_pv(lambda: &CycNum, spec: &ModelSetSpec) -> Result<bool> {
    let one = CycNum::one(lambda.order());
    if (lambda - &one).real_sign()? <= 0 {
        return Ok(false);
    }
    let s = star_of(lambda, spec)?;
    let one = CycNum::one(s.order());
    Ok((&one - &(&s * &s.conj())).real_sign()? > 0)
}

/// `z -> scale * z + offset` with `scale = l * lambda^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homothety {
    pub l: BigInt,
    pub k: u32,
    pub scale: CycNum,
    pub offset: LatticePoint,
}

impl Homothety {
    pub fn apply(&self, f: &CycNum) -> Result<LatticePoint> {
        let n = self.offset.n;
        let y = &(&self.scale * &at_order(f, n)?) + &self.offset.embed();
        LatticePoint::from_cyc(&y, n)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct HomothetySearch {
    pub max_k: u32,
    pub offset_bound: i64,
}

impl Default for HomothetySearch {
    fn default() -> Self {
        HomothetySearch {
            max_k: 64,
            offset_bound: 2,
        }
    }
}

fn offsets(phi: usize, bound: i64) -> Vec<Vec<i64>> {
    let side = (2 * bound + 1) as usize;
    let mut out: Vec<Vec<i64>> = (0..side.pow(phi as u32))
        .map(|mut t| {
            (0..phi)
                .map(|_| {
                    let v = (t % side) as i64 - bound;
                    t /= side;
                    v
                })
                .collect()
        })
        .collect();
    out.sort_by_key(|c| (c.iter().map(|x| x.abs()).max().unwrap_or(0), c.clone()));
    out
}

/// Find `h(z) = l lambda^k z + z0` mapping every point of `f` into the model set.
/// `k` is minimal; for each k the offsets are tried by increasing size, zero first.
pub fn find_homothety(
    f: &[CycNum],
    spec: &ModelSetSpec,
    search: HomothetySearch,
) -> Result<Homothety> {
    if f.is_empty() {
        return Err(Error::Parse("empty point set".into()));
    }
    let n = spec.n;
    let pts: Vec<CycNum> = f.iter().map(|x| at_order(x, n)).collect::<Result<_>>()?;
    let l = pts.iter().fold(BigInt::from(1), |acc, x| {
        let d = x.num_den().1;
        num_integer::Integer::lcm(&acc, d)
    });
    let lq = Q::from_integer(l.clone());
    let base: Vec<CycNum> = pts.iter().map(|x| x.scale(&lq)).collect();
    if !spec.has_internal_space() {
        let h = Homothety {
            l: l.clone(),
            k: 0,
            scale: CycNum::from_q(n, &lq),
            offset: LatticePoint::zero(n),
        };
        return Ok(h);
    }
    let lambda = pv_unit(n)?;
    let phi = rational::totient(n) as usize;
    let cands = offsets(phi, search.offset_bound);
    let mut power = CycNum::one(n);
    for k in 0..=search.max_k {
        let imgs: Vec<CycNum> = base.iter().map(|x| &power * x).collect();
        for c in &cands {
            let z0 = LatticePoint::from_i64(n, c);
            if !membership(&z0, spec)? {
                continue;
            }
            let z0c = z0.embed();
            let mut ok = true;
            for y in &imgs {
                let p = LatticePoint::from_cyc(&(y + &z0c), n)?;
                if !membership(&p, spec)? {
                    ok = false;
                    break;
                }
            }
            if ok {
                return Ok(Homothety {
                    l,
                    k,
                    scale: power.scale(&lq),
                    offset: z0,
                });
            }
        }
        power = &power * &lambda;
    }
    Err(Error::SearchExhausted(format!(
        "no homothety with k <= {} and offsets within {}",
        search.max_k, search.offset_bound
    )))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeloneReport {
    pub points: usize,
    pub min_distance: f64,
    pub packing_ok: bool,
    pub covering_estimate: f64,
    pub covering_ok: bool,
    pub duplicates: usize,
    pub pass: bool,
}

/// Packing check (exact near the threshold) and a grid estimate of the covering radius
/// inside the disk of radius `patch.radius - r_cov`.
pub fn verify_delone(patch: &Patch, r: &Q, r_cov: &Q) -> Result<DeloneReport> {
    if patch.points.is_empty() {
        return Err(Error::Parse("empty patch".into()));
    }
    let emb: Vec<CycNum> = patch.points.iter().map(|p| p.embed()).collect();
    let fl: Vec<(f64, f64)> = emb.iter().map(|z| z.to_c64()).collect();
    let four_r2 = Q::from_integer(BigInt::from(4)) * r * r;
    let thr = rational::to_f64(&four_r2);
    let mut min_d2 = f64::INFINITY;
    let mut duplicates = 0;
    let mut packing_ok = true;
    for i in 0..fl.len() {
        for j in i + 1..fl.len() {
            let d2 = (fl[i].0 - fl[j].0).powi(2) + (fl[i].1 - fl[j].1).powi(2);
            min_d2 = min_d2.min(d2);
            if d2 > thr * (1.0 + FILTER_EPS) + FILTER_EPS {
                continue;
            }
            let diff = &emb[i] - &emb[j];
            if diff.is_zero() {
                duplicates += 1;
                packing_ok = false;
                continue;
            }
            if !within_radius(&diff, &four_r2)? {
                continue;
            }
            let m = diff.order();
            let gap = &(&diff * &diff.conj()) - &CycNum::from_q(m, &four_r2);
            if gap.real_sign()? < 0 {
                packing_ok = false;
            }
        }
    }
    let rc = rational::to_f64(r_cov);
    let inner = rational::to_f64(&patch.radius) - rc;
    let mut cov = 0.0f64;
    if inner > 0.0 {
        let steps = 40;
        for a in -steps..=steps {
            for b in -steps..=steps {
                let y = (
                    inner * a as f64 / steps as f64,
                    inner * b as f64 / steps as f64,
                );
                if y.0.hypot(y.1) > inner {
                    continue;
                }
                let near = fl
                    .iter()
                    .map(|p| (p.0 - y.0).hypot(p.1 - y.1))
                    .fold(f64::INFINITY, f64::min);
                cov = cov.max(near);
            }
        }
    }
    let covering_ok = cov <= rc;
    Ok(DeloneReport {
        points: fl.len(),
        min_distance: min_d2.sqrt(),
        packing_ok,
        covering_estimate: cov,
        covering_ok,
        duplicates,
        pass: packing_ok && covering_ok,
    })
}
