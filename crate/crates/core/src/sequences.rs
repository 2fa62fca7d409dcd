//! Exact evaluation of simple linear recurrence sequences, their dominant
//! root structure, and verification of the growth conditions a split
//! family has to satisfy.

use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::dyadic::two_pow;
use crate::eigen;
use crate::linalg::solve_rat;
use crate::poly::{isolate_real_roots, refine_root_sturm, resultant, IntPoly};
use crate::{Error, Int, Rat, Result};

/// Exact definition of one integer sequence, either by its recurrence or
/// by an explicit exponential sum with rational roots.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceSpec {
    pub name: String,
    pub form: SeqForm,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SeqForm {
    /// `G(n) = c_1 G(n-1) + ... + c_k G(n-k)` with `initial = [G(1), ..., G(k)]`.
    Recurrence { coeffs: Vec<Int>, initial: Vec<Int> },
    /// `G(n) = sum_i coeff_i * root_i^n`, all roots rational and distinct.
    /// An empty term list is the identically-zero sequence.
    ExpSum { terms: Vec<(Rat, Rat)> },
}

fn rat_pow(r: &Rat, n: u32) -> Rat {
    if n == 0 {
        return Rat::one();
    }
    Rat::new(r.numer().pow(n), r.denom().pow(n))
}

impl RecurrenceSpec {
    pub fn recurrence(name: &str, coeffs: Vec<Int>, initial: Vec<Int>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidSpec {
                name: name.into(),
                reason: "recurrence order must be >= 1".into(),
            });
        }
        if coeffs.len() != initial.len() {
            return Err(Error::InvalidSpec {
                name: name.into(),
                reason: format!(
                    "{} coefficients but {} initial terms",
                    coeffs.len(),
                    initial.len()
                ),
            });
        }
        Ok(RecurrenceSpec {
            name: name.into(),
            form: SeqForm::Recurrence { coeffs, initial },
        })
    }

    pub fn exp_sum(name: &str, terms: Vec<(Rat, Rat)>) -> Result<Self> {
        for (a, (_, ra)) in terms.iter().enumerate() {
            for (_, rb) in terms.iter().skip(a + 1) {
                if ra == rb {
                    return Err(Error::InvalidSpec {
                        name: name.into(),
                        reason: format!("repeated root {ra} (sequence must be simple)"),
                    });
                }
            }
        }
        let spec = RecurrenceSpec {
            name: name.into(),
            form: SeqForm::ExpSum { terms },
        };
        // integrality spot-check
        for n in 0..=10 {
            spec.eval_exact(n)?;
        }
        Ok(spec)
    }

    pub fn zero(name: &str) -> Self {
        RecurrenceSpec {
            name: name.into(),
            form: SeqForm::ExpSum { terms: vec![] },
        }
    }

    pub fn is_identically_zero(&self) -> bool {
        match &self.form {
            SeqForm::ExpSum { terms } => terms.iter().all(|(c, _)| c.is_zero()),
            SeqForm::Recurrence { initial, .. } => initial.iter().all(Zero::is_zero),
        }
    }

    /// `G(n)` as an exact integer.
    pub fn eval_exact(&self, n: u32) -> Result<Int> {
        match &self.form {
            SeqForm::ExpSum { terms } => {
                let v: Rat = terms
                    .iter()
                    .map(|(c, r)| c * rat_pow(r, n))
                    .fold(Rat::zero(), |a, b| a + b);
                if v.is_integer() {
                    Ok(v.to_integer())
                } else {
                    Err(Error::NonIntegralValue {
                        n,
                        value: v.to_string(),
                    })
                }
            }
            SeqForm::Recurrence { coeffs, initial } => {
                let k = coeffs.len();
                if n == 0 {
                    // back-solve G(0) from G(k) = sum_j c_j G(k-j)
                    if coeffs[k - 1].is_zero() {
                        return Err(Error::InvalidSpec {
                            name: self.name.clone(),
                            reason: "cannot evaluate at n=0: last coefficient is zero".into(),
                        });
                    }
                    let gk = if k == 1 {
                        // G(1) = c_1 G(0)
                        initial[0].clone()
                    } else {
                        initial[k - 1].clone()
                    };
                    let mut rest = Int::zero();
                    for j in 1..k {
                        rest += &coeffs[j - 1] * &initial[k - 1 - j];
                    }
                    let num = gk - rest;
                    let (q, r) = num_integer::Integer::div_rem(&num, &coeffs[k - 1]);
                    if !r.is_zero() {
                        return Err(Error::NonIntegralValue {
                            n: 0,
                            value: format!("{}/{}", num, coeffs[k - 1]),
                        });
                    }
                    return Ok(q);
                }
                let n = n as usize;
                if n <= k {
                    return Ok(initial[n - 1].clone());
                }
                let mut window: Vec<Int> = initial.clone();
                for _ in k..n {
                    let mut next = Int::zero();
                    for (j, c) in coeffs.iter().enumerate() {
                        next += c * &window[k - 1 - j];
                    }
                    window.rotate_left(1);
                    window[k - 1] = next;
                }
                Ok(window[k - 1].clone())
            }
        }
    }

    /// Characteristic polynomial `x^k - c_1 x^(k-1) - ... - c_k`
    /// (recurrence form only).
    pub fn characteristic_poly(&self) -> Option<IntPoly> {
        match &self.form {
            SeqForm::Recurrence { coeffs, .. } => {
                let k = coeffs.len();
                let mut c = vec![Int::zero(); k + 1];
                c[k] = Int::one();
                for (j, cj) in coeffs.iter().enumerate() {
                    c[k - 1 - j] = -cj.clone();
                }
                Some(IntPoly::new(c))
            }
            SeqForm::ExpSum { .. } => None,
        }
    }

    /// Reindex `n -> 2n` (even subsequence) or `n -> 2n+1` (odd), the
    /// transformation that turns an alternating dominant root positive.
    /// Only available for the exponential-sum form.
    pub fn subsequence(&self, odd: bool) -> Result<RecurrenceSpec> {
        match &self.form {
            SeqForm::ExpSum { terms } => {
                let mapped: Vec<(Rat, Rat)> = terms
                    .iter()
                    .map(|(c, r)| {
                        let c2 = if odd { c * r } else { c.clone() };
                        (c2, r * r)
                    })
                    .collect();
                // squaring can merge +-r pairs; combine coefficients
                let mut combined: Vec<(Rat, Rat)> = Vec::new();
                for (c, r) in mapped {
                    if let Some(e) = combined.iter_mut().find(|(_, rr)| *rr == r) {
                        e.0 += c;
                    } else {
                        combined.push((c, r));
                    }
                }
                combined.retain(|(c, _)| !c.is_zero());
                RecurrenceSpec::exp_sum(
                    &format!("{}[{}]", self.name, if odd { "odd" } else { "even" }),
                    combined,
                )
            }
            SeqForm::Recurrence { .. } => Err(Error::InvalidSpec {
                name: self.name.clone(),
                reason: "subsequence reindexing requires the exponential-sum form".into(),
            }),
        }
    }
}

/// A real value known either exactly (`width = 0`) or within a certified
/// half-width.
#[derive(Debug, Clone, PartialEq)]
pub struct Approx {
    pub value: Rat,
    pub width: Rat,
}

impl Approx {
    pub fn exact(value: Rat) -> Self {
        Approx {
            value,
            width: Rat::zero(),
        }
    }

    pub fn is_exact(&self) -> bool {
        self.width.is_zero()
    }

    pub fn abs(&self) -> Approx {
        Approx {
            value: self.value.abs(),
            width: self.width.clone(),
        }
    }

    /// Certified strict `self < other`: `None` when undecidable at the
    /// stored widths.
    pub fn lt(&self, other: &Approx) -> Option<bool> {
        if &self.value + &self.width < &other.value - &other.width {
            return Some(true);
        }
        if &self.value - &self.width >= &other.value + &other.width {
            return Some(false);
        }
        if self.is_exact() && other.is_exact() {
            return Some(self.value < other.value);
        }
        None
    }

    /// Equality: exact when both operands are exact, else within the sum
    /// of widths. `None` when the intervals overlap but are not exact.
    pub fn eq_within(&self, other: &Approx) -> Option<bool> {
        if self.is_exact() && other.is_exact() {
            return Some(self.value == other.value);
        }
        let gap = (&self.value - &other.value).abs();
        let tol = &self.width + &other.width;
        if gap <= tol {
            Some(true)
        } else {
            Some(false)
        }
    }
}

/// Dominant root data of one sequence.
#[derive(Debug, Clone)]
pub struct DominantStructure {
    /// Dominant root `gamma` (strictly largest modulus, positive real).
    pub gamma: Approx,
    /// Coefficient of the dominant root in the closed form.
    pub g: Approx,
    /// Second dominant root, when present and real.
    pub delta: Option<Approx>,
    /// Coefficient of the second dominant root.
    pub h: Option<Approx>,
    /// Modulus bound for all remaining roots.
    pub remaining_radius: Rat,
    /// True for the identically-zero sequence (`gamma = 0` by convention).
    pub is_zero_sequence: bool,
}

/// Extract the dominant structure of a sequence at the given precision.
pub fn dominant_structure(spec: &RecurrenceSpec, precision: u32) -> Result<DominantStructure> {
    if spec.is_identically_zero() {
        return Ok(DominantStructure {
            gamma: Approx::exact(Rat::zero()),
            g: Approx::exact(Rat::zero()),
            delta: None,
            h: None,
            remaining_radius: Rat::zero(),
            is_zero_sequence: true,
        });
    }
    match &spec.form {
        SeqForm::ExpSum { terms } => {
            let mut sorted: Vec<(Rat, Rat)> = terms.clone();
            sorted.retain(|(c, _)| !c.is_zero());
            sorted.sort_by(|a, b| b.1.abs().cmp(&a.1.abs()));
            let (g, gamma) = sorted[0].clone();
            if sorted.len() > 1 && sorted[1].1.abs() == gamma.abs() {
                return Err(Error::NoDominantRoot {
                    name: spec.name.clone(),
                });
            }
            if !gamma.is_positive() {
                return Err(Error::ComplexDominantRoot {
                    name: spec.name.clone(),
                    hint: " (dominant root is not positive; consider the even/odd \
                           subsequence transformation `subsequence()`)"
                        .into(),
                });
            }
            let (delta, h) = match sorted.get(1) {
                Some((c, r)) => (Some(Approx::exact(r.clone())), Some(Approx::exact(c.clone()))),
                None => (None, None),
            };
            // second dominant root must itself dominate the remainder
            if let (Some(d), Some(third)) = (&delta, sorted.get(2)) {
                if third.1.abs() == d.value.abs() {
                    // tie for the second dominant root: drop it
                    return Ok(DominantStructure {
                        gamma: Approx::exact(gamma),
                        g: Approx::exact(g),
                        delta: None,
                        h: None,
                        remaining_radius: third.1.abs(),
                        is_zero_sequence: false,
                    });
                }
            }
            let remaining = sorted
                .get(2)
                .map(|(_, r)| r.abs())
                .unwrap_or_else(Rat::zero);
            Ok(DominantStructure {
                gamma: Approx::exact(gamma),
                g: Approx::exact(g),
                delta,
                h,
                remaining_radius: remaining,
                is_zero_sequence: false,
            })
        }
        SeqForm::Recurrence { coeffs, initial } => {
            dominant_from_recurrence(spec, coeffs, initial, precision)
        }
    }
}

fn dominant_from_recurrence(
    spec: &RecurrenceSpec,
    _coeffs: &[Int],
    initial: &[Int],
    precision: u32,
) -> Result<DominantStructure> {
    let q = spec.characteristic_poly().unwrap();
    let deg = q.degree();
    let chain = q.to_rat().sturm_chain();
    let intervals = isolate_real_roots(&q);
    let width_bits = precision + 16;
    let real_roots: Vec<Approx> = intervals
        .iter()
        .map(|(a, b)| {
            let (lo, hi) = refine_root_sturm(&chain, a, b, width_bits);
            let two = Rat::from_integer(Int::from(2));
            Approx {
                value: (&lo + &hi) / &two,
                width: (&hi - &lo) / two,
            }
        })
        .collect();
    // numeric view of every root (for complex moduli)
    let fcoeffs: Vec<f64> = q
        .coeffs()
        .iter()
        .map(|c| c.to_f64().unwrap_or(f64::INFINITY))
        .collect();
    let all_roots = eigen::durand_kerner(&fcoeffs);
    let complex_moduli: Vec<f64> = all_roots
        .iter()
        .filter(|z| z.im.abs() > 1e-8 * (1.0 + z.norm()))
        .map(|z| z.norm())
        .collect();

    if real_roots.is_empty() {
        return Err(Error::ComplexDominantRoot {
            name: spec.name.clone(),
            hint: " (no real characteristic roots)".into(),
        });
    }
    // sort real roots by modulus, descending
    let mut order: Vec<usize> = (0..real_roots.len()).collect();
    order.sort_by(|&i, &j| real_roots[j].value.abs().cmp(&real_roots[i].value.abs()));
    let dom = &real_roots[order[0]];
    let dom_mod = crate::dyadic::rat_to_f64(&dom.value.abs());
    if let Some(cmax) = complex_moduli.iter().cloned().fold(None::<f64>, |a, b| {
        Some(a.map_or(b, |x| x.max(b)))
    }) {
        if cmax >= dom_mod * (1.0 - 1e-9) {
            return Err(Error::ComplexDominantRoot {
                name: spec.name.clone(),
                hint: " (a complex root modulus reaches the largest real root)".into(),
            });
        }
    }
    if order.len() > 1 {
        let second = &real_roots[order[1]];
        match second.abs().lt(&dom.abs()) {
            Some(true) => {}
            Some(false) => {
                return Err(Error::NoDominantRoot {
                    name: spec.name.clone(),
                })
            }
            None => {
                // overlap: either a genuine +-gamma tie or insufficient bits
                let qneg = IntPoly::new(
                    q.coeffs()
                        .iter()
                        .enumerate()
                        .map(|(k, c)| if k % 2 == 1 { -c.clone() } else { c.clone() })
                        .collect(),
                );
                if resultant(&q, &qneg).is_zero() {
                    return Err(Error::NoDominantRoot {
                        name: spec.name.clone(),
                    });
                }
                return Err(Error::PrecisionInsufficient {
                    bits: precision,
                    what: format!(
                        "cannot separate the two largest real root moduli of `{}`",
                        spec.name
                    ),
                });
            }
        }
    }
    if !dom.value.is_positive() {
        return Err(Error::ComplexDominantRoot {
            name: spec.name.clone(),
            hint: " (dominant root is negative; split into even/odd subsequences \
                   via `subsequence()`)"
                .into(),
        });
    }

    // closed-form coefficients
    let (g, h) = if real_roots.len() == deg {
        // all roots real: solve the Vandermonde system exactly at midpoints
        let a: Vec<Vec<Rat>> = (1..=deg)
            .map(|n| {
                real_roots
                    .iter()
                    .map(|r| rat_pow_usize(&r.value, n))
                    .collect()
            })
            .collect();
        let b: Vec<Rat> = initial.iter().map(|v| Rat::from_integer(v.clone())).collect();
        let sol = solve_rat(&a, &b).ok_or_else(|| Error::PrecisionInsufficient {
            bits: precision,
            what: format!("singular Vandermonde system for `{}`", spec.name),
        })?;
        let gv = sol[order[0]].clone();
        let hv = order.get(1).map(|&i| sol[i].clone());
        let w = two_pow(-(precision as i64) + 8);
        (
            Approx {
                value: gv,
                width: w.clone(),
            },
            hv.map(|v| Approx { value: v, width: w }),
        )
    } else {
        // complex roots present: coefficients from the numeric system
        let sol = complex_vandermonde_coeff(&all_roots, initial);
        let gi = nearest_root_index(&all_roots, &dom.value);
        let g = sol[gi].re;
        let w = Rat::new(Int::from(1), Int::from(1u64 << 30));
        let second = order.get(1).map(|&i| &real_roots[i]);
        let h = second.map(|s| {
            let si = nearest_root_index(&all_roots, &s.value);
            Approx {
                value: f64_to_rat(sol[si].re),
                width: w.clone(),
            }
        });
        (
            Approx {
                value: f64_to_rat(g),
                width: w,
            },
            h,
        )
    };
    if g.value.is_zero() {
        return Err(Error::InvalidSpec {
            name: spec.name.clone(),
            reason: "coefficient of the dominant root vanishes".into(),
        });
    }

    let delta = order.get(1).map(|&i| real_roots[i].clone());
    // remaining radius: third real modulus and all complex moduli
    let mut remaining = order
        .get(2)
        .map(|&i| real_roots[i].value.abs())
        .unwrap_or_else(Rat::zero);
    for m in &complex_moduli {
        let mr = f64_to_rat(*m);
        if mr > remaining {
            remaining = mr;
        }
    }
    // delta must strictly dominate the remainder to count as second
    // dominant root
    let (delta, h) = match &delta {
        Some(d) if d.value.abs() > remaining => (delta.clone(), h),
        _ => (None, None),
    };

    Ok(DominantStructure {
        gamma: dom.clone(),
        g,
        delta,
        h,
        remaining_radius: remaining,
        is_zero_sequence: false,
    })
}

fn rat_pow_usize(r: &Rat, n: usize) -> Rat {
    rat_pow(r, n as u32)
}

fn f64_to_rat(x: f64) -> Rat {
    Rat::from_float(x).unwrap_or_else(Rat::zero)
}

fn nearest_root_index(roots: &[Complex64], target: &Rat) -> usize {
    let t = crate::dyadic::rat_to_f64(target);
    let mut best = 0;
    let mut bd = f64::INFINITY;
    for (i, z) in roots.iter().enumerate() {
        let d = (z - Complex64::new(t, 0.0)).norm();
        if d < bd {
            bd = d;
            best = i;
        }
    }
    best
}

fn complex_vandermonde_coeff(roots: &[Complex64], initial: &[Int]) -> Vec<Complex64> {
    let k = roots.len();
    let mut m: Vec<Vec<Complex64>> = Vec::with_capacity(k);
    for n in 1..=k {
        let mut row: Vec<Complex64> = roots.iter().map(|r| r.powu(n as u32)).collect();
        row.push(Complex64::new(
            initial[n - 1].to_f64().unwrap_or(f64::INFINITY),
            0.0,
        ));
        m.push(row);
    }
    // Gaussian elimination in Complex64
    for c in 0..k {
        let p = (c..k)
            .max_by(|&i, &j| {
                m[i][c]
                    .norm()
                    .partial_cmp(&m[j][c].norm())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap();
        m.swap(c, p);
        for i in 0..k {
            if i == c {
                continue;
            }
            let f = m[i][c] / m[c][c];
            for j in c..=k {
                let s = m[c][j];
                m[i][j] -= f * s;
            }
        }
    }
    (0..k).map(|i| m[i][k] / m[i][i]).collect()
}

/// Verdict for one of the three growth conditions.
#[derive(Debug, Clone)]
pub struct ConditionVerdict {
    pub pass: bool,
    pub detail: String,
}

/// Witnessed per-condition report for a candidate family.
#[derive(Debug, Clone)]
pub struct FamilyConditionsReport {
    pub cond_ordering: ConditionVerdict,
    pub cond_equal_top_coeffs: ConditionVerdict,
    pub cond_second_roots: ConditionVerdict,
    pub gammas: Vec<Rat>,
    pub g_top: (Rat, Rat),
    pub deltas: (Option<Rat>, Option<Rat>),
    pub gamma_d2_squared: Rat,
    pub gamma_times_abs_delta_d: Rat,
    pub pass: bool,
}

/// Check the three structural conditions a degree-`d` split family must
/// satisfy (`d >= 4`); every strict inequality is certified with an
/// interval margin.
pub fn check_theorem_conditions(
    family: &[RecurrenceSpec],
    precision: u32,
) -> Result<FamilyConditionsReport> {
    let d = family.len();
    if d < 4 {
        return Err(Error::InvalidFamily(format!(
            "condition checking requires degree >= 4 (got {d}); lower-degree families \
             are accepted by the solver only"
        )));
    }
    let st: Vec<DominantStructure> = family
        .iter()
        .map(|s| dominant_structure(s, precision))
        .collect::<Result<_>>()?;

    let undecided = |what: &str| Error::PrecisionInsufficient {
        bits: precision,
        what: what.to_string(),
    };

    // condition (1): 0 <= gamma_1 < ... < gamma_{d-2} < gamma_{d-1} = gamma_d
    let mut c1_pass = true;
    let mut c1_notes: Vec<String> = Vec::new();
    if st[0].gamma.value.is_zero() && !st[0].is_zero_sequence {
        c1_pass = false;
        c1_notes.push("gamma_1 = 0 is only allowed for the identically-zero sequence".into());
    }
    for i in 0..d - 2 {
        let a = &st[i].gamma;
        let b = &st[i + 1].gamma;
        match a.lt(b) {
            Some(true) => {}
            Some(false) => {
                c1_pass = false;
                c1_notes.push(format!("gamma_{} >= gamma_{}", i + 1, i + 2));
            }
            None => return Err(undecided(&format!("gamma_{} vs gamma_{}", i + 1, i + 2))),
        }
    }
    match st[d - 2].gamma.eq_within(&st[d - 1].gamma) {
        Some(true) => {}
        _ => {
            c1_pass = false;
            c1_notes.push(format!("gamma_{} != gamma_{}", d - 1, d));
        }
    }

    // condition (2): g_{d-1} = g_d
    let mut c2_pass = true;
    let mut c2_notes: Vec<String> = Vec::new();
    match st[d - 2].g.eq_within(&st[d - 1].g) {
        Some(true) => {}
        _ => {
            c2_pass = false;
            c2_notes.push(format!(
                "g_{} = {} differs from g_{} = {}",
                d - 1,
                st[d - 2].g.value,
                d,
                st[d - 1].g.value
            ));
        }
    }

    // condition (3): |delta_{d-1}| < |delta_d| < gamma_{d-2},
    //                gamma_{d-2}^2 < gamma |delta_d|
    let mut c3_pass = true;
    let mut c3_notes: Vec<String> = Vec::new();
    let gamma_d2 = st[d - 3].gamma.clone();
    let gamma = st[d - 1].gamma.clone();
    let lhs = Approx {
        value: &gamma_d2.value * &gamma_d2.value,
        width: {
            let w = &gamma_d2.width * &gamma_d2.value * Rat::from_integer(Int::from(4));
            w.abs()
        },
    };
    let (mut delta_d1_v, mut delta_d_v) = (None, None);
    let mut rhs_val = Rat::zero();
    match (&st[d - 2].delta, &st[d - 1].delta) {
        (Some(dd1), Some(dd)) => {
            delta_d1_v = Some(dd1.value.clone());
            delta_d_v = Some(dd.value.clone());
            match dd1.abs().lt(&dd.abs()) {
                Some(true) => {}
                Some(false) => {
                    c3_pass = false;
                    c3_notes.push(format!("|delta_{}| >= |delta_{}|", d - 1, d));
                }
                None => return Err(undecided("second dominant root moduli")),
            }
            match dd.abs().lt(&gamma_d2) {
                Some(true) => {}
                Some(false) => {
                    c3_pass = false;
                    c3_notes.push(format!("|delta_{}| >= gamma_{}", d, d - 2));
                }
                None => return Err(undecided("|delta_d| vs gamma_{d-2}")),
            }
            let rhs = Approx {
                value: &gamma.value * &dd.value.abs(),
                width: (&gamma.width * &dd.value.abs()
                    + &dd.width * &gamma.value
                    + &gamma.width * &dd.width)
                    .abs(),
            };
            rhs_val = rhs.value.clone();
            match lhs.lt(&rhs) {
                Some(true) => {}
                Some(false) => {
                    c3_pass = false;
                    c3_notes.push(format!(
                        "gamma_{}^2 = {} >= gamma*|delta_{}| = {}",
                        d - 2,
                        lhs.value,
                        d,
                        rhs.value
                    ));
                }
                None => return Err(undecided("gamma_{d-2}^2 vs gamma*|delta_d|")),
            }
        }
        _ => {
            c3_pass = false;
            c3_notes.push(format!(
                "sequences {} and {} need second dominant roots",
                d - 1,
                d
            ));
        }
    }

    let pass = c1_pass && c2_pass && c3_pass;
    Ok(FamilyConditionsReport {
        cond_ordering: ConditionVerdict {
            pass: c1_pass,
            detail: c1_notes.join("; "),
        },
        cond_equal_top_coeffs: ConditionVerdict {
            pass: c2_pass,
            detail: c2_notes.join("; "),
        },
        cond_second_roots: ConditionVerdict {
            pass: c3_pass,
            detail: c3_notes.join("; "),
        },
        gammas: st.iter().map(|s| s.gamma.value.clone()).collect(),
        g_top: (st[d - 2].g.value.clone(), st[d - 1].g.value.clone()),
        deltas: (delta_d1_v, delta_d_v),
        gamma_d2_squared: lhs.value,
        gamma_times_abs_delta_d: rhs_val,
        pass,
    })
}

/// Exact gap `|G_i(n) - G_j(n)|` together with the growth base the gap is
/// expected to follow (for downstream fitting). Indices are 1-based.
pub struct GrowthGap {
    pub gap: Int,
    pub predicted_base: Rat,
}

pub fn growth_gap(
    family: &[RecurrenceSpec],
    structures: &[DominantStructure],
    i: usize,
    j: usize,
    n: u32,
) -> Result<GrowthGap> {
    let d = family.len();
    assert!(i >= 1 && i < j && j <= d, "need 1 <= i < j <= d");
    let gi = family[i - 1].eval_exact(n)?;
    let gj = family[j - 1].eval_exact(n)?;
    let gap = (gi - gj).abs();
    let predicted_base = if i == d - 1 && j == d {
        structures[d - 1]
            .delta
            .as_ref()
            .map(|a| a.value.abs())
            .unwrap_or_else(Rat::zero)
    } else {
        let a = structures[i - 1].gamma.value.abs();
        let b = structures[j - 1].gamma.value.abs();
        if a > b {
            a
        } else {
            b
        }
    };
    Ok(GrowthGap {
        gap,
        predicted_base,
    })
}

/// The error-term base `gamma_eps(i)` (1-based `i`):
/// `gamma_i^(i-1) * prod_{k=i+1}^{d-2} gamma_k * gamma^2` for
/// `i <= d-2`, else `gamma^(d-2) * |delta_d|`.
pub fn gamma_eps(structures: &[DominantStructure], i: usize) -> Rat {
    let d = structures.len();
    assert!(i >= 1 && i <= d);
    let gamma = structures[d - 1].gamma.value.clone();
    if i >= d - 1 {
        let delta_d = structures[d - 1]
            .delta
            .as_ref()
            .map(|a| a.value.abs())
            .expect("gamma_eps for i in {d-1, d} needs delta_d");
        rat_pow_usize(&gamma, d - 2) * delta_d
    } else {
        let mut v = rat_pow_usize(&structures[i - 1].gamma.value, i - 1);
        for k in i + 1..=d - 2 {
            v *= structures[k - 1].gamma.value.clone();
        }
        v * &gamma * &gamma
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> Rat {
        Rat::from_integer(Int::from(n))
    }

    fn fib() -> RecurrenceSpec {
        RecurrenceSpec::recurrence("fib", vec![Int::from(1), Int::from(1)], vec![Int::from(1), Int::from(1)])
            .unwrap()
    }

    fn t1() -> Vec<RecurrenceSpec> {
        vec![
            RecurrenceSpec::exp_sum("2^n", vec![(rat(1), rat(2))]).unwrap(),
            RecurrenceSpec::exp_sum("3^n", vec![(rat(1), rat(3))]).unwrap(),
            RecurrenceSpec::exp_sum("5^n+1", vec![(rat(1), rat(5)), (rat(1), rat(1))]).unwrap(),
            RecurrenceSpec::exp_sum("5^n+2^n", vec![(rat(1), rat(5)), (rat(1), rat(2))]).unwrap(),
        ]
    }

    #[test]
    fn fibonacci_eval() {
        let f = fib();
        assert_eq!(f.eval_exact(10).unwrap(), Int::from(55));
        assert_eq!(f.eval_exact(1).unwrap(), Int::from(1));
        assert_eq!(f.eval_exact(0).unwrap(), Int::from(0)); // back-solved
    }

    #[test]
    fn exp_sum_eval() {
        let s = RecurrenceSpec::exp_sum("5^n+1", vec![(rat(1), rat(5)), (rat(1), rat(1))]).unwrap();
        assert_eq!(s.eval_exact(0).unwrap(), Int::from(2));
        let p = RecurrenceSpec::exp_sum("2^n", vec![(rat(1), rat(2))]).unwrap();
        assert_eq!(p.eval_exact(20).unwrap(), Int::from(1048576));
    }

    #[test]
    fn non_integral_rejected() {
        let err = RecurrenceSpec::exp_sum("half", vec![(Rat::new(Int::from(1), Int::from(2)), rat(3))]);
        assert!(matches!(err, Err(Error::NonIntegralValue { .. })));
    }

    #[test]
    fn recurrence_and_exp_sum_agree() {
        // 5^n + 2^n satisfies G(n) = 7G(n-1) - 10G(n-2)
        let r = RecurrenceSpec::recurrence(
            "mix",
            vec![Int::from(7), Int::from(-10)],
            vec![Int::from(7), Int::from(29)],
        )
        .unwrap();
        let e = RecurrenceSpec::exp_sum("mix", vec![(rat(1), rat(5)), (rat(1), rat(2))]).unwrap();
        for n in 0..=25 {
            assert_eq!(r.eval_exact(n).unwrap(), e.eval_exact(n).unwrap(), "n={n}");
        }
    }

    #[test]
    fn dominant_structure_exp_sum() {
        let s = RecurrenceSpec::exp_sum("5^n+2^n", vec![(rat(1), rat(5)), (rat(1), rat(2))]).unwrap();
        let ds = dominant_structure(&s, 64).unwrap();
        assert_eq!(ds.gamma.value, rat(5));
        assert_eq!(ds.g.value, rat(1));
        assert_eq!(ds.delta.unwrap().value, rat(2));
        assert_eq!(ds.h.unwrap().value, rat(1));
    }

    #[test]
    fn dominant_structure_fibonacci() {
        let ds = dominant_structure(&fib(), 128).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let gf = crate::dyadic::rat_to_f64(&ds.gamma.value);
        assert!((gf - phi).abs() < 1e-30_f64.max(1e-15));
        let g = crate::dyadic::rat_to_f64(&ds.g.value);
        assert!((g - 1.0 / 5f64.sqrt()).abs() < 1e-12, "g = {g}");
        let delta = ds.delta.unwrap();
        let df = crate::dyadic::rat_to_f64(&delta.value);
        assert!((df - (1.0 - 5f64.sqrt()) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn gamma_precision_doubling() {
        let a = dominant_structure(&fib(), 128).unwrap();
        let b = dominant_structure(&fib(), 256).unwrap();
        let diff = (a.gamma.value - b.gamma.value).abs();
        assert!(diff < two_pow(-64));
    }

    #[test]
    fn tied_moduli_rejected() {
        // 2^n + (-2)^n
        let s = RecurrenceSpec::exp_sum("tied", vec![(rat(1), rat(2)), (rat(1), rat(-2))]).unwrap();
        assert!(matches!(
            dominant_structure(&s, 64),
            Err(Error::NoDominantRoot { .. })
        ));
        // recurrence with char poly x^2 - 4 has roots +-2
        let r = RecurrenceSpec::recurrence(
            "tied-rec",
            vec![Int::from(0), Int::from(4)],
            vec![Int::from(0), Int::from(8)],
        )
        .unwrap();
        assert!(matches!(
            dominant_structure(&r, 64),
            Err(Error::NoDominantRoot { .. })
        ));
    }

    #[test]
    fn negative_dominant_rejected_with_hint() {
        let s = RecurrenceSpec::exp_sum("alt", vec![(rat(1), rat(-3)), (rat(1), rat(2))]).unwrap();
        match dominant_structure(&s, 64) {
            Err(Error::ComplexDominantRoot { hint, .. }) => {
                assert!(hint.contains("subsequence"));
            }
            other => panic!("expected ComplexDominantRoot, got {other:?}"),
        }
        // the even subsequence fixes it
        let even = s.subsequence(false).unwrap();
        let ds = dominant_structure(&even, 64).unwrap();
        assert_eq!(ds.gamma.value, rat(9));
    }

    #[test]
    fn t1_passes_conditions() {
        let rep = check_theorem_conditions(&t1(), 128).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert_eq!(rep.gamma_d2_squared, rat(9));
        assert_eq!(rep.gamma_times_abs_delta_d, rat(10));
    }

    #[test]
    fn t1_prime_fails_condition3() {
        let fam = vec![
            RecurrenceSpec::exp_sum("2^n", vec![(rat(1), rat(2))]).unwrap(),
            RecurrenceSpec::exp_sum("3^n", vec![(rat(1), rat(3))]).unwrap(),
            RecurrenceSpec::exp_sum("4^n+1", vec![(rat(1), rat(4)), (rat(1), rat(1))]).unwrap(),
            RecurrenceSpec::exp_sum("4^n+2^n", vec![(rat(1), rat(4)), (rat(1), rat(2))]).unwrap(),
        ];
        let rep = check_theorem_conditions(&fam, 128).unwrap();
        assert!(!rep.pass);
        assert!(!rep.cond_second_roots.pass);
        assert_eq!(rep.gamma_d2_squared, rat(9));
        assert_eq!(rep.gamma_times_abs_delta_d, rat(8));
    }

    #[test]
    fn identical_top_sequences_fail() {
        let fam = vec![
            RecurrenceSpec::exp_sum("2^n", vec![(rat(1), rat(2))]).unwrap(),
            RecurrenceSpec::exp_sum("3^n", vec![(rat(1), rat(3))]).unwrap(),
            RecurrenceSpec::exp_sum("a", vec![(rat(1), rat(5)), (rat(1), rat(2))]).unwrap(),
            RecurrenceSpec::exp_sum("b", vec![(rat(1), rat(5)), (rat(1), rat(2))]).unwrap(),
        ];
        let rep = check_theorem_conditions(&fam, 128).unwrap();
        assert!(!rep.pass);
        assert!(!rep.cond_second_roots.pass, "{rep:?}");
    }

    #[test]
    fn growth_gap_examples() {
        let fam = t1();
        let st: Vec<_> = fam
            .iter()
            .map(|s| dominant_structure(s, 64).unwrap())
            .collect();
        let g = growth_gap(&fam, &st, 3, 4, 5).unwrap();
        assert_eq!(g.gap, Int::from(31));
        assert_eq!(g.predicted_base, rat(2));
        let g = growth_gap(&fam, &st, 1, 2, 3).unwrap();
        assert_eq!(g.gap, Int::from(19));
        assert_eq!(g.predicted_base, rat(3));
    }

    #[test]
    #[should_panic]
    fn growth_gap_equal_indices_panics() {
        let fam = t1();
        let st: Vec<_> = fam
            .iter()
            .map(|s| dominant_structure(s, 64).unwrap())
            .collect();
        let _ = growth_gap(&fam, &st, 2, 2, 3);
    }

    #[test]
    fn gamma_eps_t1() {
        let fam = t1();
        let st: Vec<_> = fam
            .iter()
            .map(|s| dominant_structure(s, 64).unwrap())
            .collect();
        assert_eq!(gamma_eps(&st, 1), rat(75));
        assert_eq!(gamma_eps(&st, 2), rat(75));
        assert_eq!(gamma_eps(&st, 3), rat(50));
        assert_eq!(gamma_eps(&st, 4), rat(50));
    }
}
