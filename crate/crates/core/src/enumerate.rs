//! The quadruple sets D_m, the sine quotient f_m, and the obstruction sets it generates.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::CycNum;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::quadratic::{contains_sqrt, QuadraticSurd};
use crate::rational::{gcd_u64, lcm_u64};

/// `(k1, k2, k3, k4)` with `k3 < k1 <= k2 < k4 <= m - 1` and `k1 + k2 = k3 + k4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Quadruple {
    pub m: u64,
    pub k: [u64; 4],
}

impl Quadruple {
    pub fn new(m: u64, k: [u64; 4]) -> Result<Self> {
        let [k1, k2, k3, k4] = k;
        if m < 4 {
            return Err(Error::OrderTooSmall(m));
        }
        if !(k3 < k1 && k1 <= k2 && k2 < k4 && k4 < m && k1 + k2 == k3 + k4) {
            return Err(Error::InvalidQuadruple(format!("{k:?} at m = {m}")));
        }
        Ok(Quadruple { m, k })
    }

    pub fn content(&self) -> u64 {
        self.k.iter().fold(self.m, |g, &x| gcd_u64(g, x))
    }

    pub fn is_primitive(&self) -> bool {
        self.content() == 1
    }

    /// Divide `m` and every `k_i` by their common gcd.
    pub fn primitive(&self) -> Quadruple {
        let g = self.content();
        Quadruple {
            m: self.m / g,
            k: self.k.map(|x| x / g),
        }
    }

    pub fn scaled(&self, t: u64) -> Quadruple {
        Quadruple {
            m: self.m * t,
            k: self.k.map(|x| x * t),
        }
    }
}

impl fmt::Display for Quadruple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.k;
        write!(f, "({a},{b},{c},{d})@{}", self.m)
    }
}

/// Lexicographic enumeration of D_m.
pub fn enum_quadruples(m: u64) -> Result<Vec<Quadruple>> {
    if m < 4 {
        return Err(Error::OrderTooSmall(m));
    }
    let mut out = Vec::new();
    for k1 in 2..m {
        for k2 in k1..m {
            for k3 in 1..k1 {
                let k4 = k1 + k2 - k3;
                if k4 < m && k4 > k2 {
                    out.push(Quadruple {
                        m,
                        k: [k1, k2, k3, k4],
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Cyclic convolution in Z[x]/(x^m - 1).
fn convolve(a: &[i64], b: &[i64]) -> Vec<i64> {
    let m = a.len();
    let mut out = vec![0i64; m];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y != 0 {
                out[(i + j) % m] += x * y;
            }
        }
    }
    out
}

/// `-(sum_j j w^j)` for `w = zeta_m^k`; equals `d/(1 - w)` where `d` is the order of `w`.
fn scaled_inverse(m: u64, k: u64) -> (Vec<i64>, i64) {
    let d = m / gcd_u64(m, k);
    let mut v = vec![0i64; m as usize];
    for j in 0..d {
        v[((j * k) % m) as usize] -= j as i64;
    }
    (v, d as i64)
}

fn one_minus(m: u64, k: u64) -> Vec<i64> {
    let mut v = vec![0i64; m as usize];
    v[0] += 1;
    v[(k % m) as usize] -= 1;
    v
}

/// Exact f_m(d), using the closed form `1/(1 - w) = -(1/d) sum_j j w^j` for roots of unity.
pub fn eval_f(q: &Quadruple) -> CycNum {
    let m = q.m;
    let [k1, k2, k3, k4] = q.k;
    let (i3, d3) = scaled_inverse(m, k3);
    let (i4, d4) = scaled_inverse(m, k4);
    let num = convolve(&one_minus(m, k1), &one_minus(m, k2));
    let p = convolve(&convolve(&num, &i3), &i4);
    let poly = p.into_iter().map(BigInt::from).collect();
    CycNum::from_poly(m, poly, BigInt::from(d3 * d4))
}

/// f_m(d) through generic field inversion; used to cross-check `eval_f`.
pub fn eval_f_generic(q: &Quadruple) -> CycNum {
    let m = q.m;
    let om = |k: u64| &CycNum::one(m) - &CycNum::zeta(m, k as i64);
    let [k1, k2, k3, k4] = q.k;
    let num = &om(k1) * &om(k2);
    let den = &om(k3) * &om(k4);
    num.div(&den).expect("denominator never vanishes on D_m")
}

/// The two infinite families of quadruples with value 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum Family {
    /// `(2k, s, k, k+s)` at `m = 2s`, `1 <= k <= s/2`.
    XII { s: u64, k: u64 },
    /// `(s, 2k, k, k+s)` at `m = 2s`, `s/2 <= k < s`.
    XIII { s: u64, k: u64 },
}

/// Family tag of the primitive reduction of `q`.
pub fn classify_family(q: &Quadruple) -> Option<Family> {
    let p = q.primitive();
    if !p.m.is_multiple_of(2) {
        return None;
    }
    let s = p.m / 2;
    let [k1, k2, k3, k4] = p.k;
    let k = k3;
    if k4 != k + s || s < 2 {
        return None;
    }
    if k2 == s && k1 == 2 * k && k >= 1 && 2 * k <= s {
        return Some(Family::XII { s, k });
    }
    if k1 == s && k2 == 2 * k && 2 * k >= s && k < s {
        return Some(Family::XIII { s, k });
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionRecord {
    pub quadruple: Quadruple,
    pub value: QuadraticSurd,
    pub family: Option<Family>,
    pub primitive: bool,
}

impl SolutionRecord {
    pub fn is_sporadic(&self) -> bool {
        self.family.is_none()
    }
}

#[derive(Serialize, Deserialize)]
struct RecordJson {
    m: u64,
    d: [u64; 4],
    q: QuadraticSurd,
    family: Option<Family>,
    primitive: bool,
}

impl Serialize for SolutionRecord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RecordJson {
            m: self.quadruple.m,
            d: self.quadruple.k,
            q: self.value.clone(),
            family: self.family,
            primitive: self.primitive,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SolutionRecord {
    fn deserialize<De: serde::Deserializer<'de>>(d: De) -> std::result::Result<Self, De::Error> {
        let j = RecordJson::deserialize(d)?;
        let quadruple = Quadruple::new(j.m, j.d).map_err(serde::de::Error::custom)?;
        Ok(SolutionRecord {
            quadruple,
            value: j.q,
            family: j.family,
            primitive: j.primitive,
        })
    }
}

/// All `d` in D_m with `f_m(d)` in Q(sqrt D), sorted by quadruple.
pub fn solve_in_field(m: u64, d: u64, exec: Exec) -> Result<Vec<SolutionRecord>> {
    if !contains_sqrt(m, d) {
        return Err(Error::SubfieldAbsent { d, m });
    }
    let quads = enum_quadruples(m)?;
    let mut out: Vec<SolutionRecord> = exec.filter_map(&quads, |q| {
        let v = eval_f(q).to_quadratic(d).ok()?;
        Some(SolutionRecord {
            quadruple: *q,
            value: v,
            family: classify_family(q),
            primitive: q.is_primitive(),
        })
    });
    out.sort_by_key(|r| r.quadruple);
    Ok(out)
}

pub fn sporadic(records: &[SolutionRecord]) -> Vec<SolutionRecord> {
    records
        .iter()
        .filter(|r| r.is_sporadic())
        .cloned()
        .collect()
}

/// Squarefree D with Q(zeta_n)^+ = Q(sqrt D), for the n where that field is at most quadratic.
pub fn real_subfield_d(n: u64) -> Option<u64> {
    match n {
        1..=4 | 6 => Some(1),
        5 | 10 => Some(5),
        8 => Some(2),
        12 => Some(3),
        _ => None,
    }
}

/// The order used for n: lcm(2n, 12).
pub fn order_for(n: u64) -> u64 {
    lcm_u64(2 * n, 12)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionSet {
    pub n: u64,
    pub m_used: u64,
    pub values: Vec<QuadraticSurd>,
}

impl ObstructionSet {
    pub fn contains(&self, x: &QuadraticSurd) -> bool {
        self.values.binary_search(x).is_ok()
    }

    /// Membership of a cyclotomic value; false when it is not in the field at all.
    pub fn contains_cyc(&self, x: &CycNum) -> bool {
        let d = real_subfield_d(self.n).unwrap_or(1);
        match x.to_quadratic(d) {
            Ok(v) => self.contains(&v),
            Err(_) => false,
        }
    }
}

/// Values of f_m on D_m lying in Q(zeta_n)^+, for m = lcm(2n, 12), sorted ascending.
pub fn obstruction_set(n: u64, exec: Exec) -> Result<ObstructionSet> {
    if n < 3 {
        return Err(Error::UnsupportedN(n));
    }
    let d = real_subfield_d(n).ok_or(Error::UnsupportedField(n))?;
    let m = order_for(n);
    let recs = solve_in_field(m, d, exec)?;
    let values: BTreeSet<QuadraticSurd> = recs.into_iter().map(|r| r.value).collect();
    Ok(ObstructionSet {
        n,
        m_used: m,
        values: values.into_iter().collect(),
    })
}

/// Values of f_m on D_m lying in Q(zeta_n)^+ for any n, as cyclotomic numbers at order m.
/// Membership is decided by Galois invariance rather than by a quadratic model.
pub fn obstruction_values_cyc(n: u64, exec: Exec) -> Result<Vec<CycNum>> {
    if n < 3 {
        return Err(Error::UnsupportedN(n));
    }
    let m = order_for(n);
    let quads = enum_quadruples(m)?;
    let vals = exec.filter_map(&quads, |q| {
        let v = eval_f(q);
        v.lies_in(n).then_some(v)
    });
    let mut out: Vec<CycNum> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for v in vals {
        if seen.insert(v.key()) {
            out.push(v);
        }
    }
    out.sort_by(|a, b| {
        let d = a - b;
        if d.is_zero() {
            std::cmp::Ordering::Equal
        } else {
            d.real_sign().expect("real values").cmp(&0)
        }
    });
    Ok(out)
}
