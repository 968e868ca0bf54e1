//! Elements of the cyclotomic field Q(zeta_m) in the power basis.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::{self, Q};

fn phi_cache() -> &'static RwLock<HashMap<u64, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Coefficients of the m-th cyclotomic polynomial, constant term first.
pub fn cyclotomic_poly(m: u64) -> Arc<Vec<i64>> {
    assert!(m >= 1, "cyclotomic polynomial of order 0");
    if let Some(p) = phi_cache().read().unwrap().get(&m) {
        return p.clone();
    }
    // x^m - 1 divided by every Phi_d with d | m, d < m.
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in rational::divisors(m) {
        if d == m {
            continue;
        }
        let div = cyclotomic_poly(d);
        num = exact_div_monic(&num, &div);
    }
    let p = Arc::new(num);
    phi_cache().write().unwrap().insert(m, p.clone());
    p
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let qn = num.len() - 1 - dn;
    let mut quo = vec![0i64; qn + 1];
    for i in (0..=qn).rev() {
        let c = rem[i + dn];
        quo[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] = rem[i + j]
                    .checked_sub(c.checked_mul(dj).expect("coefficient overflow"))
                    .expect("coefficient overflow");
            }
        }
    }
    debug_assert!(rem.iter().all(|&x| x == 0));
    quo
}

/// Reduce an integer polynomial modulo Phi_m; result has length phi(m).
fn reduce(m: u64, mut v: Vec<BigInt>) -> Vec<BigInt> {
    let p = cyclotomic_poly(m);
    let deg = p.len() - 1;
    if v.len() < deg {
        v.resize(deg, BigInt::zero());
        return v;
    }
    for j in (deg..v.len()).rev() {
        if v[j].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut v[j]);
        for (i, &pi) in p.iter().enumerate().take(deg) {
            if pi != 0 {
                v[j - deg + i] -= &c * pi;
            }
        }
    }
    v.truncate(deg);
    v
}

/// An element of Q(zeta_m): `num / den` in the basis 1, zeta, ..., zeta^(phi(m)-1).
#[derive(Clone, Debug)]
pub struct CycNum {
    m: u64,
    num: Vec<BigInt>,
    den: BigInt,
}

impl CycNum {
    fn normalized(m: u64, mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        if den.is_negative() {
            den = -den;
            for x in num.iter_mut() {
                *x = -std::mem::take(x);
            }
        }
        let mut g = den.clone();
        for x in &num {
            if g.is_one() {
                break;
            }
            if !x.is_zero() {
                g = g.gcd(x);
            }
        }
        if num.iter().all(Zero::is_zero) {
            den = BigInt::one();
        } else if !g.is_one() {
            for x in num.iter_mut() {
                *x = &*x / &g;
            }
            den /= g;
        }
        CycNum { m, num, den }
    }

    /// Build from a length-`len` integer polynomial in zeta_m (any length) over `den`.
    pub fn from_poly(m: u64, poly: Vec<BigInt>, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let num = reduce(m, poly);
        Self::normalized(m, num, den)
    }

    /// Sum of `coeff * zeta_m^exponent`; exponents are taken modulo m.
    pub fn from_monomials(m: u64, monomials: &[(i64, Q)]) -> Self {
        assert!(m >= 1, "order must be positive");
        let den = rational::common_denom(monomials.iter().map(|(_, c)| c));
        let mut poly = vec![BigInt::zero(); m as usize];
        for (e, c) in monomials {
            let k = e.rem_euclid(m as i64) as usize;
            poly[k] += c.numer() * (&den / c.denom());
        }
        Self::from_poly(m, poly, den)
    }

    /// From power-basis coordinates (length must be phi(m)).
    pub fn from_coeffs(m: u64, coeffs: &[Q]) -> Result<Self> {
        let phi = rational::totient(m) as usize;
        if coeffs.len() != phi {
            return Err(Error::Parse(format!(
                "order {m} needs {phi} coefficients, got {}",
                coeffs.len()
            )));
        }
        let den = rational::common_denom(coeffs);
        let num = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        Ok(Self::normalized(m, num, den))
    }

    /// From integer power-basis coordinates (length must be phi(m)).
    pub fn from_ints(m: u64, coeffs: &[BigInt]) -> Self {
        assert_eq!(coeffs.len(), rational::totient(m) as usize);
        Self::normalized(m, coeffs.to_vec(), BigInt::one())
    }

    pub fn zero(m: u64) -> Self {
        let phi = rational::totient(m) as usize;
        CycNum {
            m,
            num: vec![BigInt::zero(); phi],
            den: BigInt::one(),
        }
    }

    pub fn from_q(m: u64, x: &Q) -> Self {
        let mut c = Self::zero(m);
        c.num[0] = x.numer().clone();
        c.den = x.denom().clone();
        Self::normalized(m, c.num, c.den)
    }

    pub fn from_int(m: u64, x: i64) -> Self {
        Self::from_q(m, &rational::qi(x))
    }

    pub fn one(m: u64) -> Self {
        Self::from_int(m, 1)
    }

    /// zeta_m^k.
    pub fn zeta(m: u64, k: i64) -> Self {
        Self::from_monomials(m, &[(k, rational::qi(1))])
    }

    pub fn order(&self) -> u64 {
        self.m
    }

    pub fn phi(&self) -> usize {
        self.num.len()
    }

    /// Integer numerators and the common positive denominator.
    pub fn num_den(&self) -> (&[BigInt], &BigInt) {
        (&self.num, &self.den)
    }

    pub fn coeffs(&self) -> Vec<Q> {
        self.num
            .iter()
            .map(|n| Q::new(n.clone(), self.den.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|q| q.is_one())
    }

    /// The rational value, if this element lies in Q.
    pub fn as_rational(&self) -> Option<Q> {
        if self.num.iter().skip(1).all(Zero::is_zero) {
            Some(Q::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    /// Coordinates are integers (element of Z[zeta_m]).
    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    /// Same element in Q(zeta_m2); requires m | m2.
    pub fn promote(&self, m2: u64) -> Result<Self> {
        if m2 == 0 || !m2.is_multiple_of(self.m) {
            return Err(Error::NotADivisor {
                from: self.m,
                to: m2,
            });
        }
        if m2 == self.m {
            return Ok(self.clone());
        }
        let step = (m2 / self.m) as usize;
        let mut poly = vec![BigInt::zero(); m2 as usize];
        for (j, c) in self.num.iter().enumerate() {
            if !c.is_zero() {
                poly[j * step] = c.clone();
            }
        }
        Ok(Self::from_poly(m2, poly, self.den.clone()))
    }

    fn promote_pair(&self, other: &Self) -> (Self, Self) {
        if self.m == other.m {
            return (self.clone(), other.clone());
        }
        let l = self.m.lcm(&other.m);
        (self.promote(l).unwrap(), other.promote(l).unwrap())
    }

    /// sigma_a: zeta_m -> zeta_m^a.
    pub fn galois(&self, a: i64) -> Result<Self> {
        let m = self.m as i64;
        let a = a.rem_euclid(m.max(1));
        let a = if self.m == 1 { 1 } else { a };
        if rational::gcd_u64(a as u64, self.m) != 1 {
            return Err(Error::NotAUnit {
                a: a as u64,
                m: self.m,
            });
        }
        Ok(self.galois_unchecked(a as u64))
    }

    fn galois_unchecked(&self, a: u64) -> Self {
        if a % self.m == 1 % self.m {
            return self.clone();
        }
        let mut poly = vec![BigInt::zero(); self.m as usize];
        for (j, c) in self.num.iter().enumerate() {
            if !c.is_zero() {
                poly[((j as u64 * a) % self.m) as usize] += c;
            }
        }
        Self::from_poly(self.m, poly, self.den.clone())
    }

    /// Complex conjugate, sigma_{m-1}.
    pub fn conj(&self) -> Self {
        if self.m <= 2 {
            return self.clone();
        }
        self.galois_unchecked(self.m - 1)
    }

    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }

    /// Multiply by a rational.
    pub fn scale(&self, x: &Q) -> Self {
        let num = self.num.iter().map(|c| c * x.numer()).collect();
        Self::normalized(self.m, num, &self.den * x.denom())
    }

    /// Multiplicative inverse by solving the linear system of multiplication by self.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(Self::from_q(self.m, &r.recip()));
        }
        let phi = self.phi();
        // Column j holds num * zeta^j.
        let mut cols: Vec<Vec<BigInt>> = Vec::with_capacity(phi);
        for j in 0..phi {
            let mut poly = vec![BigInt::zero(); phi + j];
            for (i, c) in self.num.iter().enumerate() {
                poly[i + j] = c.clone();
            }
            cols.push(reduce(self.m, poly));
        }
        let rows: Vec<Vec<Q>> = (0..phi)
            .map(|i| {
                (0..phi)
                    .map(|j| Q::from_integer(cols[j][i].clone()))
                    .collect()
            })
            .collect();
        let mut rhs = vec![Q::zero(); phi];
        rhs[0] = Q::from_integer(self.den.clone());
        let y = linalg::solve(&rows, &rhs, phi).ok_or(Error::DivisionByZero)?;
        Self::from_coeffs(self.m, &y)
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one(self.m);
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        Ok(acc)
    }

    /// True when the element lies in the subfield Q(zeta_d), d | m.
    pub fn lies_in(&self, d: u64) -> bool {
        if !self.m.is_multiple_of(d) {
            return false;
        }
        (1..self.m)
            .filter(|a| a % d == 1 % d && rational::gcd_u64(*a, self.m) == 1)
            .all(|a| self.galois_unchecked(a) == *self)
    }

    /// Re-express at the smallest order d | m whose field contains the element.
    pub fn demote(&self) -> Self {
        for d in rational::divisors(self.m) {
            if d == self.m {
                return self.clone();
            }
            if !self.lies_in(d) {
                continue;
            }
            let phi_d = rational::totient(d) as usize;
            let basis: Vec<Self> = (0..phi_d)
                .map(|j| Self::zeta(d, j as i64).promote(self.m).unwrap())
                .collect();
            let rows: Vec<Vec<Q>> = (0..self.phi())
                .map(|i| basis.iter().map(|b| b.coeffs()[i].clone()).collect())
                .collect();
            if let Some(y) = linalg::solve(&rows, &self.coeffs(), phi_d) {
                return Self::from_coeffs(d, &y).unwrap();
            }
        }
        self.clone()
    }

    /// Floating-point value (re, im), for display and filtering only.
    pub fn to_c64(&self) -> (f64, f64) {
        let d = rational::big_to_f64(&self.den);
        let mut re = 0.0;
        let mut im = 0.0;
        for (j, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let t = std::f64::consts::TAU * j as f64 / self.m as f64;
            let cf = rational::big_to_f64(c);
            re += cf * t.cos();
            im += cf * t.sin();
        }
        (re / d, im / d)
    }

    /// Exact hashable key for elements of one fixed order.
    pub fn key(&self) -> (u64, Vec<BigInt>, BigInt) {
        (self.m, self.num.clone(), self.den.clone())
    }
}

impl PartialEq for CycNum {
    fn eq(&self, other: &Self) -> bool {
        if self.m == other.m {
            return self.num == other.num && self.den == other.den;
        }
        let (a, b) = self.promote_pair(other);
        a.num == b.num && a.den == b.den
    }
}

impl Eq for CycNum {}

impl<'a> Add<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn add(self, rhs: &CycNum) -> CycNum {
        if self.m != rhs.m {
            let (a, b) = self.promote_pair(rhs);
            return &a + &b;
        }
        let num = self
            .num
            .iter()
            .zip(&rhs.num)
            .map(|(x, y)| x * &rhs.den + y * &self.den)
            .collect();
        CycNum::normalized(self.m, num, &self.den * &rhs.den)
    }
}

impl<'a> Sub<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn sub(self, rhs: &CycNum) -> CycNum {
        self + &(-rhs)
    }
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum {
            m: self.m,
            num: self.num.iter().map(|x| -x).collect(),
            den: self.den.clone(),
        }
    }
}

impl<'a> Mul<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn mul(self, rhs: &CycNum) -> CycNum {
        if self.m != rhs.m {
            let (a, b) = self.promote_pair(rhs);
            return &a * &b;
        }
        let n = self.num.len();
        let mut poly = vec![BigInt::zero(); 2 * n - 1];
        for (i, x) in self.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in rhs.num.iter().enumerate() {
                if !y.is_zero() {
                    poly[i + j] += x * y;
                }
            }
        }
        CycNum::from_poly(self.m, poly, &self.den * &rhs.den)
    }
}

macro_rules! owned_ops {
    ($tr:ident, $f:ident) => {
        impl $tr<CycNum> for CycNum {
            type Output = CycNum;
            fn $f(self, rhs: CycNum) -> CycNum {
                (&self).$f(&rhs)
            }
        }
        impl<'a> $tr<&'a CycNum> for CycNum {
            type Output = CycNum;
            fn $f(self, rhs: &CycNum) -> CycNum {
                (&self).$f(rhs)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (j, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let c = rational::fmt_q(c);
            terms.push(match j {
                0 => c,
                1 => format!("{c}*z{}", self.m),
                _ => format!("{c}*z{}^{j}", self.m),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CycNumJson {
    m: u64,
    coeffs: Vec<String>,
}

impl Serialize for CycNum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycNumJson {
            m: self.m,
            coeffs: self.coeffs().iter().map(rational::fmt_q).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycNum {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = CycNumJson::deserialize(d)?;
        if j.m == 0 {
            return Err(serde::de::Error::custom("order must be positive"));
        }
        let coeffs = j
            .coeffs
            .iter()
            .map(|s| rational::parse_q(s))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        CycNum::from_coeffs(j.m, &coeffs).map_err(serde::de::Error::custom)
    }
}
