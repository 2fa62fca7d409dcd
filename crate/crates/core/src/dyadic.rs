//! Dyadic-rounded rational arithmetic and a high-precision natural
//! logarithm.
//!
//! Real quantities in this crate are `BigRational` values whose
//! denominators are kept to powers of two by explicit rounding. All
//! operations stay exact except [`round_bits`] and [`ln_rat`], whose
//! absolute error is bounded by `2^-prec`.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::Rat;

/// `2^k` as an exact rational, for any sign of `k`.
pub fn two_pow(k: i64) -> Rat {
    if k >= 0 {
        Rat::from_integer(BigInt::one() << k as usize)
    } else {
        Rat::new(BigInt::one(), BigInt::one() << (-k) as usize)
    }
}

/// Approximate binary magnitude: `floor(log2(|x|))` within +-1. Returns
/// `i64::MIN` for zero.
pub fn mag2(x: &Rat) -> i64 {
    if x.is_zero() {
        return i64::MIN;
    }
    x.numer().bits() as i64 - x.denom().bits() as i64
}

/// Round `x` to the nearest multiple of `2^-bits`.
pub fn round_bits(x: &Rat, bits: u32) -> Rat {
    let num = x.numer() << (bits as usize + 1);
    let den = x.denom() << 1usize;
    // floor((num + den/2) / den) with exact integers: (2*num + den) / (2*den)
    let q = (num + x.denom()).div_floor(&den);
    Rat::new(q, BigInt::one() << bits as usize)
}

fn atanh_series(t: &Rat, work: u32) -> Rat {
    // atanh(t) = t + t^3/3 + t^5/5 + ...; |t| <= 1/3 here.
    let t = round_bits(t, work + 16);
    let t2 = round_bits(&(&t * &t), work + 16);
    let mut term = t.clone();
    let mut sum = t;
    let mut k: u64 = 1;
    let cutoff = -(work as i64) - 8;
    loop {
        term = round_bits(&(&term * &t2), work + 16);
        k += 2;
        if term.is_zero() || mag2(&term) < cutoff {
            break;
        }
        sum += &term / Rat::from_integer(BigInt::from(k));
    }
    sum
}

/// `ln 2` with absolute error below `2^-prec`, cached per precision.
pub fn ln2(prec: u32) -> Rat {
    static CACHE: OnceLock<Mutex<HashMap<u32, Rat>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&prec) {
        return v.clone();
    }
    // ln 2 = 2 atanh(1/3)
    let third = Rat::new(BigInt::one(), BigInt::from(3));
    let v = round_bits(
        &(atanh_series(&third, prec + 16) * Rat::from_integer(BigInt::from(2))),
        prec + 8,
    );
    cache.lock().unwrap().insert(prec, v.clone());
    v
}

/// Natural logarithm of a positive rational, absolute error below
/// `2^-prec`.
///
/// Panics if `x <= 0`.
pub fn ln_rat(x: &Rat, prec: u32) -> Rat {
    assert!(x.is_positive(), "ln_rat: argument must be positive");
    let work = prec + 64;
    let mut e = mag2(x);
    let mut m = x * two_pow(-e);
    if m < Rat::one() {
        m = m * Rat::from_integer(BigInt::from(2));
        e -= 1;
    }
    debug_assert!(m >= Rat::one() && m < Rat::from_integer(BigInt::from(2)));
    // ln m = 2 atanh((m-1)/(m+1)), with (m-1)/(m+1) in [0, 1/3)
    let t = (&m - Rat::one()) / (&m + Rat::one());
    let ln_m = atanh_series(&t, work) * Rat::from_integer(BigInt::from(2));
    let res = ln_m + Rat::from_integer(BigInt::from(e)) * ln2(work);
    round_bits(&res, prec + 8)
}

/// `ln |x|` as above.
pub fn ln_abs(x: &Rat, prec: u32) -> Rat {
    ln_rat(&x.abs(), prec)
}

/// Lossy conversion to `f64`, safe for arbitrarily large magnitudes
/// (saturates to +-inf).
pub fn rat_to_f64(x: &Rat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let neg = x.is_negative();
    let a = x.numer().abs();
    let b = x.denom().clone();
    let shift = a.bits() as i64 - b.bits() as i64;
    // normalize a/b * 2^-shift into [1/2, 2), keep ~80 significant bits
    let (an, bn) = if shift >= 0 {
        (a << 80usize, b << shift as usize)
    } else {
        (a << (80 + (-shift) as usize), b)
    };
    let q = an / bn;
    let qf = q.to_f64().unwrap_or(f64::INFINITY);
    let v = qf * exp2_i(shift - 80);
    if neg {
        -v
    } else {
        v
    }
}

fn exp2_i(k: i64) -> f64 {
    if k > 1100 {
        f64::INFINITY
    } else if k < -1100 {
        0.0
    } else {
        (k as f64).exp2()
    }
}

/// `ln |x|` as an `f64`, accurate to ~1e-15 relative even when `x` does not
/// fit in an `f64`.
pub fn ln_abs_f64(x: &Rat) -> f64 {
    assert!(!x.is_zero());
    let e = mag2(x);
    let m = x.abs() * two_pow(-e);
    rat_to_f64(&m).ln() + e as f64 * std::f64::consts::LN_2
}

/// Fixed-point decimal rendering with `digits` fractional digits
/// (deterministic, for reports).
pub fn rat_to_decimal(x: &Rat, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = x * Rat::from_integer(scale.clone());
    // round half away from zero
    let half = Rat::new(BigInt::one(), BigInt::from(2));
    let adj = if scaled.is_negative() {
        scaled - half
    } else {
        scaled + half
    };
    let q = adj.to_integer();
    let neg = q.sign() == Sign::Minus;
    let q = q.abs();
    let (int_part, frac_part) = q.div_rem(&scale);
    let frac_str = format!("{:0>width$}", frac_part.to_string(), width = digits as usize);
    format!("{}{}.{}", if neg { "-" } else { "" }, int_part, frac_str)
}

/// Parse an exact rational from `"a"`, `"a/b"`, or a plain decimal like
/// `"1.5"`.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let num: BigInt = a.trim().parse().map_err(|e| format!("bad numerator: {e}"))?;
        let den: BigInt = b.trim().parse().map_err(|e| format!("bad denominator: {e}"))?;
        if den.is_zero() {
            return Err("zero denominator".into());
        }
        Ok(Rat::new(num, den))
    } else if let Some((i, f)) = s.split_once('.') {
        let digits = f.len() as u32;
        let joined: BigInt = format!("{i}{f}")
            .parse()
            .map_err(|e| format!("bad decimal: {e}"))?;
        Ok(Rat::new(joined, BigInt::from(10u32).pow(digits)))
    } else {
        let num: BigInt = s.parse().map_err(|e| format!("bad integer: {e}"))?;
        Ok(Rat::from_integer(num))
    }
}
