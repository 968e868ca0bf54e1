//! Real quadratic numbers a + b*sqrt(D) and their embedding into cyclotomic fields.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclotomic::CycNum;
use crate::error::{Error, Result};
use crate::rational::{self, qi, Q};

/// `a + b*sqrt(d)` with `d` squarefree; `d == 1` exactly when `b == 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticSurd {
    a: Q,
    b: Q,
    d: u64,
}

impl QuadraticSurd {
    pub fn new(a: Q, b: Q, d: u64) -> Result<Self> {
        if !rational::is_squarefree(d) {
            return Err(Error::Parse(format!("{d} is not squarefree")));
        }
        if d == 1 {
            return Ok(Self::rational(a + b));
        }
        if b.is_zero() {
            return Ok(Self::rational(a));
        }
        Ok(QuadraticSurd { a, b, d })
    }

    pub fn rational(a: Q) -> Self {
        QuadraticSurd {
            a,
            b: Q::zero(),
            d: 1,
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(qi(n))
    }

    pub fn a(&self) -> &Q {
        &self.a
    }
    pub fn b(&self) -> &Q {
        &self.b
    }
    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.d == 1
    }

    fn common_d(&self, o: &Self) -> Option<u64> {
        match (self.d, o.d) {
            (1, d) | (d, 1) => Some(d),
            (x, y) if x == y => Some(x),
            _ => None,
        }
    }

    pub fn checked_add(&self, o: &Self) -> Option<Self> {
        let d = self.common_d(o)?;
        Self::new(&self.a + &o.a, &self.b + &o.b, d).ok()
    }

    pub fn checked_mul(&self, o: &Self) -> Option<Self> {
        let d = self.common_d(o)?;
        let dq = qi(d as i64);
        let a = &self.a * &o.a + &self.b * &o.b * dq;
        let b = &self.a * &o.b + &self.b * &o.a;
        Self::new(a, b, d).ok()
    }

    /// Galois conjugate a - b*sqrt(d).
    pub fn conjugate(&self) -> Self {
        QuadraticSurd {
            a: self.a.clone(),
            b: -self.b.clone(),
            d: self.d,
        }
    }

    /// a^2 - d b^2.
    pub fn norm(&self) -> Q {
        &self.a * &self.a - &self.b * &self.b * qi(self.d as i64)
    }

    pub fn recip(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let c = self.conjugate();
        Self::new(c.a / &n, c.b / n, self.d)
    }

    pub fn checked_div(&self, o: &Self) -> Option<Self> {
        self.checked_mul(&o.recip().ok()?)
    }

    pub fn signum(&self) -> i8 {
        let sa = sgn(&self.a);
        let sb = sgn(&self.b);
        if sb == 0 || sa == sb {
            return if sa == 0 { sb } else { sa };
        }
        if sa == 0 {
            return sb;
        }
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * qi(self.d as i64);
        if a2 > b2d {
            sa
        } else {
            sb
        }
    }

    pub fn to_f64(&self) -> f64 {
        rational::to_f64(&self.a) + rational::to_f64(&self.b) * (self.d as f64).sqrt()
    }

    /// The element as a cyclotomic number at order `conductor(d)`.
    pub fn to_cyc(&self) -> CycNum {
        let s = sqrt_embedding(self.d);
        let m = s.order();
        &CycNum::from_q(m, &self.a) + &s.scale(&self.b)
    }
}

fn sgn(x: &Q) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

impl PartialOrd for QuadraticSurd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total order by real value; surds over different fields compare via floats
/// only when their exact difference cannot be formed, which never ties.
impl Ord for QuadraticSurd {
    fn cmp(&self, other: &Self) -> Ordering {
        match (-other).checked_add(self) {
            Some(d) => d.signum().cmp(&0),
            None => {
                let x = self.to_cyc();
                let y = other.to_cyc();
                let s = (&x - &y).real_sign().expect("real quadratic numbers");
                s.cmp(&0)
            }
        }
    }
}

impl Add for &QuadraticSurd {
    type Output = QuadraticSurd;
    fn add(self, o: &QuadraticSurd) -> QuadraticSurd {
        self.checked_add(o).expect("mixed quadratic fields")
    }
}

impl Sub for &QuadraticSurd {
    type Output = QuadraticSurd;
    fn sub(self, o: &QuadraticSurd) -> QuadraticSurd {
        self.checked_add(&-o).expect("mixed quadratic fields")
    }
}

impl Mul for &QuadraticSurd {
    type Output = QuadraticSurd;
    fn mul(self, o: &QuadraticSurd) -> QuadraticSurd {
        self.checked_mul(o).expect("mixed quadratic fields")
    }
}

impl Neg for &QuadraticSurd {
    type Output = QuadraticSurd;
    fn neg(self) -> QuadraticSurd {
        QuadraticSurd {
            a: -self.a.clone(),
            b: -self.b.clone(),
            d: self.d,
        }
    }
}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.d == 1 {
            return write!(f, "{}", rational::fmt_q(&self.a));
        }
        let b = if self.b.is_one() {
            String::new()
        } else if (-&self.b).is_one() {
            "-".to_string()
        } else {
            format!("{}*", rational::fmt_q(&self.b))
        };
        if self.a.is_zero() {
            write!(f, "{b}sqrt({})", self.d)
        } else {
            let sep = if self.b.is_negative() { "" } else { "+" };
            write!(f, "{}{sep}{b}sqrt({})", rational::fmt_q(&self.a), self.d)
        }
    }
}

#[derive(Serialize, Deserialize)]
struct SurdJson {
    a: String,
    b: String,
    #[serde(rename = "D")]
    d: u64,
}

impl Serialize for QuadraticSurd {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SurdJson {
            a: rational::fmt_q(&self.a),
            b: rational::fmt_q(&self.b),
            d: self.d,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadraticSurd {
    fn deserialize<De: serde::Deserializer<'de>>(d: De) -> std::result::Result<Self, De::Error> {
        let j = SurdJson::deserialize(d)?;
        let a = rational::parse_q(&j.a).map_err(serde::de::Error::custom)?;
        let b = rational::parse_q(&j.b).map_err(serde::de::Error::custom)?;
        if j.d == 1 && !b.is_zero() {
            return Err(serde::de::Error::custom("D = 1 requires b = 0"));
        }
        QuadraticSurd::new(a, b, j.d).map_err(serde::de::Error::custom)
    }
}

/// Smallest m with sqrt(d) in Q(zeta_m).
pub fn conductor(d: u64) -> u64 {
    if d % 4 == 1 {
        d
    } else {
        4 * d
    }
}

fn legendre(a: u64, p: u64) -> i64 {
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    if r == 1 {
        1
    } else {
        -1
    }
}

/// Positive square root of a squarefree d as an element of Q(zeta_conductor(d)),
/// built from quadratic Gauss sums.
pub fn sqrt_embedding(d: u64) -> CycNum {
    assert!(rational::is_squarefree(d), "{d} is not squarefree");
    let mut acc = CycNum::one(1);
    for p in rational::prime_factors(d) {
        let root = if p == 2 {
            CycNum::from_monomials(8, &[(1, qi(1)), (7, qi(1))])
        } else {
            let terms: Vec<(i64, Q)> = (1..p).map(|a| (a as i64, qi(legendre(a, p)))).collect();
            let g = CycNum::from_monomials(p, &terms);
            if p % 4 == 1 {
                g
            } else {
                // g = i*sqrt(p)
                &(-&CycNum::zeta(4, 1)) * &g
            }
        };
        acc = &acc * &root;
    }
    let f = conductor(d);
    if acc.order() == f {
        acc
    } else if f.is_multiple_of(acc.order()) {
        acc.promote(f).unwrap()
    } else {
        let r = acc.demote();
        if r.order() == f {
            r
        } else {
            r.promote(f).unwrap()
        }
    }
}

type Subgroup = Arc<(Vec<u64>, u64)>;

fn subgroup_cache() -> &'static RwLock<HashMap<(u64, u64), Subgroup>> {
    static C: OnceLock<RwLock<HashMap<(u64, u64), Subgroup>>> = OnceLock::new();
    C.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Generators of `{a : sigma_a(sqrt d) = sqrt d}` in (Z/m)^x, plus one unit negating sqrt d.
fn fixing_subgroup(m: u64, d: u64) -> Subgroup {
    if let Some(s) = subgroup_cache().read().unwrap().get(&(m, d)) {
        return s.clone();
    }
    let units: Vec<u64> = (1..m.max(2))
        .filter(|&a| rational::gcd_u64(a, m) == 1)
        .collect();
    let (fixing, flip): (Vec<u64>, Vec<u64>) = if d == 1 {
        (units.clone(), vec![])
    } else {
        let s = sqrt_embedding(d).promote(m).unwrap();
        units
            .iter()
            .partition(|&&a| s.galois(a as i64).unwrap() == s)
    };
    // Greedy generating set of the fixing subgroup.
    let mut gens = Vec::new();
    let mut span: Vec<u64> = vec![1 % m.max(1)];
    for &a in &fixing {
        if span.contains(&(a % m.max(1))) {
            continue;
        }
        gens.push(a);
        let mut frontier = span.clone();
        while let Some(x) = frontier.pop() {
            for &g in &gens {
                let y = x * g % m;
                if !span.contains(&y) {
                    span.push(y);
                    frontier.push(y);
                }
            }
        }
    }
    let tau = flip.first().copied().unwrap_or(0);
    let s = Arc::new((gens, tau));
    subgroup_cache().write().unwrap().insert((m, d), s.clone());
    s
}

/// Whether sqrt(d) lies in Q(zeta_m).
pub fn contains_sqrt(m: u64, d: u64) -> bool {
    d == 1 || m.is_multiple_of(conductor(d))
}

impl CycNum {
    /// Write a real element as a + b*sqrt(d), or report that it is not in Q(sqrt d).
    pub fn to_quadratic(&self, d: u64) -> Result<QuadraticSurd> {
        if !rational::is_squarefree(d) {
            return Err(Error::Parse(format!("{d} is not squarefree")));
        }
        if !contains_sqrt(self.order(), d) {
            let up = rational::lcm_u64(self.order(), conductor(d));
            return self.promote(up)?.to_quadratic(d);
        }
        let m = self.order();
        if !self.is_real() {
            return Err(Error::NotReal);
        }
        if d == 1 {
            return self
                .as_rational()
                .map(QuadraticSurd::rational)
                .ok_or(Error::NotInSubfield { d });
        }
        let sub = fixing_subgroup(m, d);
        let (gens, tau) = (&sub.0, sub.1);
        for &g in gens {
            if self.galois(g as i64)? != *self {
                return Err(Error::NotInSubfield { d });
            }
        }
        let t = self.galois(tau as i64)?;
        let half = rational::q(1, 2);
        let a = (self + &t).scale(&half);
        let s = sqrt_embedding(d).promote(m).unwrap();
        // b = (x - tau x) / (2 sqrt d) = (x - tau x) sqrt d / (2 d)
        let b = (&(self - &t) * &s).scale(&rational::q(1, 2 * d as i64));
        match (a.as_rational(), b.as_rational()) {
            (Some(a), Some(b)) => QuadraticSurd::new(a, b, d),
            _ => Err(Error::NotInSubfield { d }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn s(a: Q, b: Q, d: u64) -> QuadraticSurd {
        QuadraticSurd::new(a, b, d).unwrap()
    }

    #[test]
    fn gauss_sums_match_explicit_roots() {
        let r5 = CycNum::from_monomials(5, &[(0, qi(1)), (1, qi(2)), (4, qi(2))]);
        assert_eq!(sqrt_embedding(5), r5);
        let r2 = CycNum::from_monomials(8, &[(1, qi(1)), (7, qi(1))]);
        assert_eq!(sqrt_embedding(2), r2);
        let r3 = CycNum::from_monomials(12, &[(1, qi(1)), (11, qi(1))]);
        assert_eq!(sqrt_embedding(3), r3);
        for d in [2u64, 3, 5, 6, 7, 10, 11, 13, 15, 21] {
            let r = sqrt_embedding(d);
            assert_eq!(r.order(), conductor(d), "d={d}");
            assert_eq!(&r * &r, CycNum::from_int(r.order(), d as i64), "d={d}");
            assert_eq!(r.real_sign().unwrap(), 1, "d={d}");
        }
    }

    #[test]
    fn ordering_is_exact() {
        let phi = s(q(1, 2), q(1, 2), 5);
        assert!(phi > QuadraticSurd::rational(q(1618, 1000)));
        assert!(phi < QuadraticSurd::rational(q(1619, 1000)));
        let x = s(qi(3), qi(-2), 2); // 3 - 2 sqrt2 > 0
        assert_eq!(x.signum(), 1);
        let y = s(qi(-3), qi(2), 2);
        assert_eq!(y.signum(), -1);
        assert!(s(qi(0), qi(1), 2) < s(qi(0), qi(1), 3));
    }

    #[test]
    fn arithmetic() {
        let r = s(qi(1), qi(1), 2);
        let inv = r.recip().unwrap();
        assert_eq!(inv, s(qi(-1), qi(1), 2));
        assert_eq!(&r * &inv, QuadraticSurd::from_int(1));
        assert_eq!(QuadraticSurd::new(qi(2), qi(0), 5).unwrap().d(), 1);
    }

    #[test]
    fn to_quadratic_examples() {
        let r2 = CycNum::from_monomials(8, &[(1, qi(1)), (7, qi(1))]);
        assert_eq!(r2.to_quadratic(2).unwrap(), s(qi(0), qi(1), 2));
        assert!(matches!(
            r2.to_quadratic(3),
            Err(Error::NotInSubfield { .. })
        ));
        assert_eq!(CycNum::from_int(1, 2).to_quadratic(2), Ok(QuadraticSurd::from_int(2)));
        assert!(matches!(
            r2.to_quadratic(1),
            Err(Error::NotInSubfield { .. })
        ));
        assert_eq!(CycNum::zeta(8, 1).to_quadratic(2), Err(Error::NotReal));
        // golden ratio from order 60
        let g = CycNum::from_monomials(5, &[(0, qi(1)), (1, qi(1)), (4, qi(1))])
            .promote(60)
            .unwrap();
        assert_eq!(g.to_quadratic(5).unwrap(), s(q(1, 2), q(1, 2), 5));
        // cos(2 pi/7) is real but cubic
        let c7 = CycNum::from_monomials(28, &[(4, qi(1)), (24, qi(1))]);
        assert!(matches!(
            c7.to_quadratic(7),
            Err(Error::NotInSubfield { .. })
        ));
    }

    #[test]
    fn round_trip_json() {
        let x = s(q(-3, 2), q(5, 7), 5);
        let j = serde_json::to_string(&x).unwrap();
        assert_eq!(j, r#"{"a":"-3/2","b":"5/7","D":5}"#);
        let y: QuadraticSurd = serde_json::from_str(&j).unwrap();
        assert_eq!(x, y);
        assert!(serde_json::from_str::<QuadraticSurd>(r#"{"a":"1","b":"1","D":1}"#).is_err());
        assert!(serde_json::from_str::<QuadraticSurd>(r#"{"a":"1","b":"1","D":4}"#).is_err());
    }

    #[test]
    fn display() {
        assert_eq!(s(q(1, 2), q(1, 2), 5).to_string(), "1/2+1/2*sqrt(5)");
        assert_eq!(s(qi(0), qi(1), 2).to_string(), "sqrt(2)");
        assert_eq!(s(qi(3), qi(-1), 3).to_string(), "3-sqrt(3)");
    }
}
