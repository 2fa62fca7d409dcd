//! Exact univariate polynomials over the integers and rationals: Horner
//! evaluation, Sturm-chain real-root counting and isolation, Sylvester
//! resultants via fraction-free (Bareiss) elimination, and discriminants.


use num_traits::{One, Signed, Zero};

use crate::{Error, Int, Rat, Result};

/// Dense integer polynomial, coefficients in ascending degree order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<Int>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<Int>) -> Self {
        while coeffs.len() > 1 && coeffs.last().map_or(false, Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Int::zero());
        }
        IntPoly { coeffs }
    }

    pub fn zero() -> Self {
        IntPoly::new(vec![])
    }

    /// Monic product `prod (x - r_i)`.
    pub fn from_roots(roots: &[Int]) -> Self {
        let mut c = vec![Int::one()];
        for r in roots {
            // multiply by (x - r)
            let mut next = vec![Int::zero(); c.len() + 1];
            for (k, ck) in c.iter().enumerate() {
                next[k + 1] += ck;
                next[k] -= r * ck;
            }
            c = next;
        }
        IntPoly::new(c)
    }

    pub fn coeffs(&self) -> &[Int] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    pub fn leading(&self) -> &Int {
        self.coeffs.last().unwrap()
    }

    pub fn eval_int(&self, x: &Int) -> Int {
        let mut acc = Int::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_rat(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + Rat::from_integer(c.clone());
        }
        acc
    }

    /// Exact sign of `p(x)` for rational `x`, without building the full
    /// rational value: evaluates `den^deg * p(num/den)` in integers.
    pub fn sign_at(&self, x: &Rat) -> i32 {
        let num = x.numer();
        let den = x.denom();
        let d = self.degree();
        let mut acc = self.coeffs[d].clone();
        let mut den_pow = Int::one();
        // sum_k c_k num^k den^(d-k), Horner in num with den scaling
        for k in (0..d).rev() {
            den_pow *= den;
            acc = acc * num + &self.coeffs[k] * &den_pow;
        }
        sign_of(&acc)
    }

    pub fn derivative(&self) -> IntPoly {
        if self.degree() == 0 {
            return IntPoly::zero();
        }
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, ck)| ck * Int::from(k))
            .collect();
        IntPoly::new(c)
    }

    pub fn to_rat(&self) -> RatPoly {
        RatPoly::new(
            self.coeffs
                .iter()
                .map(|c| Rat::from_integer(c.clone()))
                .collect(),
        )
    }

    /// Cauchy root bound: all real roots lie in `(-B, B)`.
    pub fn cauchy_bound(&self) -> Rat {
        let lc = self.leading().abs();
        let mut m = Int::zero();
        for c in &self.coeffs[..self.coeffs.len() - 1] {
            let a = c.abs();
            if a > m {
                m = a;
            }
        }
        Rat::one() + Rat::new(m, lc)
    }

    /// All integer roots, sorted ascending, found by certified Sturm
    /// isolation plus exact evaluation at candidate integers.
    pub fn integer_roots(&self) -> Vec<Int> {
        assert!(!self.is_zero());
        if self.degree() == 0 {
            return vec![];
        }
        let mut out = Vec::new();
        if self.coeffs[0].is_zero() {
            out.push(Int::zero());
        }
        let chain = self.to_rat().sturm_chain();
        let bound = self.cauchy_bound();
        let mut stack = vec![(-bound.clone(), bound)];
        let quarter = Rat::new(Int::one(), Int::from(4));
        let mut candidates: Vec<Int> = Vec::new();
        while let Some((a, b)) = stack.pop() {
            let roots = sturm_count(&chain, &a, &b);
            if roots == 0 {
                continue;
            }
            if &b - &a <= quarter {
                candidates.push(a.floor().to_integer());
                candidates.push(a.ceil().to_integer());
                candidates.push(b.floor().to_integer());
                candidates.push(b.ceil().to_integer());
                continue;
            }
            let mid = (&a + &b) / Rat::from_integer(Int::from(2));
            stack.push((a, mid.clone()));
            stack.push((mid, b));
        }
        candidates.sort();
        candidates.dedup();
        for c in candidates {
            if !c.is_zero() && self.eval_int(&c).is_zero() {
                out.push(c);
            }
        }
        out.sort();
        out.dedup();
        out
    }
}

fn sign_of(x: &Int) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Dense rational polynomial, ascending coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct RatPoly {
    coeffs: Vec<Rat>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.len() > 1 && coeffs.last().map_or(false, Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Rat::zero());
        }
        RatPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> RatPoly {
        if self.degree() == 0 {
            return RatPoly::new(vec![]);
        }
        RatPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rat::from_integer(Int::from(k)))
                .collect(),
        )
    }

    /// Remainder of `self / div` (rational long division).
    fn rem(&self, div: &RatPoly) -> RatPoly {
        assert!(!div.is_zero());
        let dd = div.degree();
        if dd == 0 {
            // division by a nonzero constant leaves no remainder
            return RatPoly::new(vec![]);
        }
        let mut r = self.coeffs.clone();
        let lc = &div.coeffs[dd];
        while r.len() > dd && r.len() > 1 {
            let k = r.len() - 1;
            if r[k].is_zero() {
                r.pop();
                continue;
            }
            if k < dd {
                break;
            }
            let q = &r[k] / lc;
            for j in 0..=dd {
                let idx = k - dd + j;
                let sub = &q * &div.coeffs[j];
                r[idx] = &r[idx] - sub;
            }
            r.pop();
        }
        RatPoly::new(r)
    }

    /// Signed-remainder Sturm chain, each entry scaled to unit leading
    /// coefficient magnitude to limit growth.
    pub fn sturm_chain(&self) -> Vec<RatPoly> {
        let mut chain = Vec::new();
        let norm = |p: RatPoly| -> RatPoly {
            if p.is_zero() {
                return p;
            }
            let lc = p.coeffs.last().unwrap().abs();
            RatPoly::new(p.coeffs.iter().map(|c| c / &lc).collect())
        };
        let mut a = norm(self.clone());
        let mut b = norm(self.derivative());
        chain.push(a.clone());
        while !b.is_zero() {
            chain.push(b.clone());
            let r = a.rem(&b);
            let neg = RatPoly::new(r.coeffs.iter().map(|c| -c).collect());
            a = b;
            b = norm(neg);
        }
        chain
    }

}

fn variations(signs: &[i32]) -> usize {
    let mut last = 0i32;
    let mut v = 0usize;
    for &s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            v += 1;
        }
        last = s;
    }
    v
}

fn sign_rat(x: &Rat) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Number of distinct real roots of the chain's polynomial in `(a, b]`.
pub fn sturm_count(chain: &[RatPoly], a: &Rat, b: &Rat) -> usize {
    let va = variations(&chain.iter().map(|p| sign_rat(&p.eval(a))).collect::<Vec<_>>());
    let vb = variations(&chain.iter().map(|p| sign_rat(&p.eval(b))).collect::<Vec<_>>());
    va.saturating_sub(vb)
}

/// Isolating intervals `(a, b]` for every distinct real root, sorted.
pub fn isolate_real_roots(p: &IntPoly) -> Vec<(Rat, Rat)> {
    let chain = p.to_rat().sturm_chain();
    let bound = p.cauchy_bound();
    let mut out = Vec::new();
    let mut stack = vec![(-bound.clone(), bound)];
    while let Some((a, b)) = stack.pop() {
        let n = sturm_count(&chain, &a, &b);
        if n == 0 {
            continue;
        }
        if n == 1 {
            out.push((a, b));
            continue;
        }
        let mid = (&a + &b) / Rat::from_integer(Int::from(2));
        stack.push((a, mid.clone()));
        stack.push((mid, b));
    }
    out.sort_by(|x, y| x.0.cmp(&y.0));
    out
}

/// Shrink an isolating interval `(a, b]` containing exactly one distinct
/// real root down to width `2^-width_bits`, by Sturm-count bisection.
/// Returns a point interval if a rational root is hit exactly.
pub fn refine_root_sturm(chain: &[RatPoly], a: &Rat, b: &Rat, width_bits: u32) -> (Rat, Rat) {
    let target = crate::dyadic::two_pow(-(width_bits as i64));
    let two = Rat::from_integer(Int::from(2));
    let mut lo = a.clone();
    let mut hi = b.clone();
    while &hi - &lo > target {
        let mid = (&lo + &hi) / &two;
        if chain[0].eval(&mid).is_zero() {
            return (mid.clone(), mid);
        }
        if sturm_count(chain, &lo, &mid) == 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}

/// Fraction-free (Bareiss) determinant of an exact integer matrix.
pub fn bareiss_det(mut m: Vec<Vec<Int>>) -> Int {
    let n = m.len();
    if n == 0 {
        return Int::one();
    }
    let mut sign = 1i32;
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            // pivot search
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return Int::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = num / &prev; // exact by Bareiss
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Resultant of `f` and `g` via the Sylvester matrix.
pub fn resultant(f: &IntPoly, g: &IntPoly) -> Int {
    if f.is_zero() || g.is_zero() {
        return Int::zero();
    }
    let m = f.degree();
    let n = g.degree();
    if m == 0 {
        return f.leading().pow(n as u32);
    }
    if n == 0 {
        return g.leading().pow(m as u32);
    }
    let size = m + n;
    let mut s = vec![vec![Int::zero(); size]; size];
    // n rows of f coefficients (descending), m rows of g
    for row in 0..n {
        for (k, c) in f.coeffs().iter().rev().enumerate() {
            s[row][row + k] = c.clone();
        }
    }
    for row in 0..m {
        for (k, c) in g.coeffs().iter().rev().enumerate() {
            s[n + row][row + k] = c.clone();
        }
    }
    bareiss_det(s)
}

/// Discriminant with the sign convention
/// `disc = (-1)^(d(d-1)/2) * Res(f, f') / lc(f)`.
pub fn discriminant(f: &IntPoly) -> Result<Int> {
    let d = f.degree();
    assert!(d >= 1, "discriminant needs degree >= 1");
    let res = resultant(f, &f.derivative());
    let (q, r) = num_integer::Integer::div_rem(&res, f.leading());
    debug_assert!(r.is_zero(), "resultant not divisible by leading coeff");
    let disc = if (d * (d - 1) / 2) % 2 == 1 { -q } else { q };
    if disc.is_zero() {
        return Err(Error::ZeroDiscriminant);
    }
    Ok(disc)
}

/// Discriminant that reports zero instead of erroring (for fixtures).
pub fn discriminant_allow_zero(f: &IntPoly) -> Int {
    match discriminant(f) {
        Ok(d) => d,
        Err(_) => Int::zero(),
    }
}
