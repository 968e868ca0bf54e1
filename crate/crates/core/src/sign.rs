//! Rigorous sign determination for real and imaginary parts of cyclotomic numbers.
//!
//! cos and sin of 2*pi*j/m are enclosed as fixed-point balls computed with
//! Machin's formula and Taylor series; the sum over the power basis is then
//! an exact integer interval. Precision doubles from 64 bits up to a cap.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::cyclotomic::CycNum;
use crate::error::{Error, Result};
use crate::rational;

pub const DEFAULT_PRECISION_CAP_BITS: u32 = 4096;
const START_BITS: u32 = 64;
const GUARD_BITS: u32 = 64;
// Radius, in ulps of the working precision, of every cos/sin enclosure.
// The accumulated rounding error is far below this for any realistic precision.
const RADIUS_ULP_BITS: u32 = 40;

static PRECISION_CAP: AtomicU32 = AtomicU32::new(DEFAULT_PRECISION_CAP_BITS);

pub fn precision_cap() -> u32 {
    PRECISION_CAP.load(Ordering::Relaxed)
}

pub fn set_precision_cap(bits: u32) {
    PRECISION_CAP.store(bits.max(START_BITS), Ordering::Relaxed);
}

/// Closed interval `[lo, hi] / 2^exp`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealInterval {
    pub lo: BigInt,
    pub hi: BigInt,
    pub exp: u32,
}

impl RealInterval {
    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn sign(&self) -> Option<i8> {
        if self.lo.is_positive() {
            Some(1)
        } else if self.hi.is_negative() {
            Some(-1)
        } else {
            None
        }
    }

    pub fn width_bits(&self) -> u64 {
        (&self.hi - &self.lo).bits()
    }

    pub fn mid_f64(&self) -> f64 {
        let s = (&self.lo + &self.hi) >> 1usize;
        let sh = s.bits().saturating_sub(60);
        rational::big_to_f64(&(s >> sh as usize)) * 2f64.powi(sh as i32 - self.exp as i32)
    }
}

fn pi_fixed(w: u32) -> BigInt {
    // pi = 16 atan(1/5) - 4 atan(1/239)
    16 * atan_inv(5, w) - 4 * atan_inv(239, w)
}

fn atan_inv(x: u64, w: u32) -> BigInt {
    let one = BigInt::from(1) << w as usize;
    let x2 = BigInt::from(x * x);
    let mut term = one / x;
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !term.is_zero() {
        let t = &term / (2 * k + 1);
        if k.is_multiple_of(2) {
            sum += t;
        } else {
            sum -= t;
        }
        term /= &x2;
        k += 1;
    }
    sum
}

/// cos and sin of a fixed-point angle |alpha| <= pi/4 at scale 2^w.
fn cos_sin_fixed(alpha: &BigInt, w: u32) -> (BigInt, BigInt) {
    let mut c = BigInt::zero();
    let mut s = BigInt::zero();
    let mut term = BigInt::from(1) << w as usize;
    let mut k = 0u64;
    while !term.is_zero() {
        match k % 4 {
            0 => c += &term,
            1 => s += &term,
            2 => c -= &term,
            _ => s -= &term,
        }
        k += 1;
        term = ((&term * alpha) >> w as usize) / k;
    }
    (c, s)
}

type Table = Arc<Vec<(BigInt, BigInt)>>;

fn table_cache() -> &'static RwLock<HashMap<(u64, u32), Table>> {
    static C: OnceLock<RwLock<HashMap<(u64, u32), Table>>> = OnceLock::new();
    C.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Midpoints of cos(2*pi*j/m), sin(2*pi*j/m) for j < m at scale 2^(bits+GUARD_BITS).
fn trig_table(m: u64, bits: u32) -> Table {
    if let Some(t) = table_cache().read().unwrap().get(&(m, bits)) {
        return t.clone();
    }
    let w = bits + GUARD_BITS;
    let pi = pi_fixed(w);
    let mut out = Vec::with_capacity(m as usize);
    for j in 0..m {
        // angle = 2*pi*j/m = q*pi/2 + 2*pi*r with |r| <= 1/8
        let qd = (4 * j + m / 2) / m; // round(4j/m)
        let rn = 4 * j as i64 - (qd * m) as i64; // r = rn / (4m)
        let alpha = (&pi * BigInt::from(2 * rn)) / BigInt::from(4 * m as i64);
        let (c, s) = cos_sin_fixed(&alpha, w);
        let (c, s) = match qd % 4 {
            0 => (c, s),
            1 => (-s, c),
            2 => (-c, -s),
            _ => (s, -c),
        };
        out.push((c, s));
    }
    let t = Arc::new(out);
    table_cache().write().unwrap().insert((m, bits), t.clone());
    t
}

#[derive(Clone, Copy)]
enum Part {
    Re,
    Im,
}

/// Enclosure of the real or imaginary part at the given precision.
fn enclose(x: &CycNum, part: Part, bits: u32) -> RealInterval {
    let w = bits + GUARD_BITS;
    let table = trig_table(x.order(), bits);
    let (num, den) = x.num_den();
    let mut mid = BigInt::zero();
    let mut abs_sum = BigInt::zero();
    for (j, c) in num.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let t = match part {
            Part::Re => &table[j].0,
            Part::Im => &table[j].1,
        };
        mid += c * t;
        abs_sum += c.abs();
    }
    let rad = abs_sum << RADIUS_ULP_BITS as usize;
    // Divide by the positive denominator with outward rounding.
    let lo = (&mid - &rad).div_floor(den);
    let hi = -((-(&mid + &rad)).div_floor(den));
    RealInterval { lo, hi, exp: w }
}

/// Double-precision filter: Some(sign) only when the sign is certain.
fn float_filter(x: &CycNum, part: Part) -> Option<i8> {
    let (num, den) = x.num_den();
    let m = x.order() as f64;
    let d = rational::big_to_f64(den);
    if !d.is_finite() || d == 0.0 {
        return None;
    }
    let mut v = 0.0f64;
    let mut mag = 0.0f64;
    for (j, c) in num.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let cf = rational::big_to_f64(c) / d;
        let t = std::f64::consts::TAU * j as f64 / m;
        let tr = match part {
            Part::Re => t.cos(),
            Part::Im => t.sin(),
        };
        v += cf * tr;
        mag += cf.abs();
    }
    if !v.is_finite() || !mag.is_finite() || mag > 1e250 {
        return None;
    }
    let err = 1e-12 * mag + 1e-300;
    if v > err {
        Some(1)
    } else if v < -err {
        Some(-1)
    } else {
        None
    }
}

fn refine(x: &CycNum, part: Part) -> Result<i8> {
    if let Some(s) = float_filter(x, part) {
        return Ok(s);
    }
    let cap = precision_cap();
    let mut bits = START_BITS;
    loop {
        if let Some(s) = enclose(x, part, bits).sign() {
            return Ok(s);
        }
        if bits >= cap {
            return Err(Error::PrecisionExhausted { bits });
        }
        bits = (bits * 2).min(cap);
    }
}

/// Sign of Re(x).
pub fn re_sign(x: &CycNum) -> Result<i8> {
    if (x + &x.conj()).is_zero() {
        return Ok(0);
    }
    refine(x, Part::Re)
}

/// Sign of Im(x).
pub fn im_sign(x: &CycNum) -> Result<i8> {
    if (x - &x.conj()).is_zero() {
        return Ok(0);
    }
    refine(x, Part::Im)
}

/// Sign of a real element.
pub fn real_sign(x: &CycNum) -> Result<i8> {
    if x.is_zero() {
        return Ok(0);
    }
    if !x.is_real() {
        return Err(Error::NotReal);
    }
    refine(x, Part::Re)
}

/// Interval enclosure of the real part at a fixed precision (no filtering).
pub fn real_interval(x: &CycNum, bits: u32) -> RealInterval {
    enclose(x, Part::Re, bits)
}

/// Interval enclosure of the imaginary part at a fixed precision.
pub fn imag_interval(x: &CycNum, bits: u32) -> RealInterval {
    enclose(x, Part::Im, bits)
}

/// Sign of the real part using intervals only, refining from 64 bits.
pub fn re_sign_interval_only(x: &CycNum) -> Result<i8> {
    re_sign_capped(x, precision_cap())
}

fn re_sign_capped(x: &CycNum, cap: u32) -> Result<i8> {
    if (x + &x.conj()).is_zero() {
        return Ok(0);
    }
    let mut bits = START_BITS;
    loop {
        if let Some(s) = enclose(x, Part::Re, bits).sign() {
            return Ok(s);
        }
        if bits >= cap {
            return Err(Error::PrecisionExhausted { bits });
        }
        bits = (bits * 2).min(cap);
    }
}

impl CycNum {
    pub fn re_sign(&self) -> Result<i8> {
        re_sign(self)
    }
    pub fn im_sign(&self) -> Result<i8> {
        im_sign(self)
    }
    pub fn real_sign(&self) -> Result<i8> {
        real_sign(self)
    }
    /// Compare |self| with |other|: sign of |self|^2 - |other|^2.
    pub fn cmp_abs(&self, other: &CycNum) -> Result<i8> {
        let d = &(self * &self.conj()) - &(other * &other.conj());
        real_sign(&d)
    }
}
