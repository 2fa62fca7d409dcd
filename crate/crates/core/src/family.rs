//! A split Thue family `f_n(x, y) = prod_i (x - G_i(n) y) - y^d` and its
//! exact instantiation at a parameter value `n`.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::poly::IntPoly;
use crate::sequences::RecurrenceSpec;
use crate::{Error, Int, Result};

/// A family of `d` integer sequences defining the split form.
#[derive(Debug, Clone)]
pub struct ThueFamily {
    pub name: String,
    pub sequences: Vec<RecurrenceSpec>,
}

impl ThueFamily {
    pub fn new(name: &str, sequences: Vec<RecurrenceSpec>) -> Result<Self> {
        if sequences.len() < 3 {
            return Err(Error::InvalidFamily(format!(
                "a split form needs degree >= 3, got {}",
                sequences.len()
            )));
        }
        Ok(ThueFamily {
            name: name.into(),
            sequences,
        })
    }

    pub fn degree(&self) -> usize {
        self.sequences.len()
    }

    /// Instantiate at `n`; errors when two factor values coincide.
    pub fn instantiate(&self, n: u32) -> Result<FormInstance> {
        let inst = self.instantiate_any(n)?;
        if inst.degenerate {
            return Err(Error::DegenerateInstance {
                n,
                values: format!("{:?}", inst.g_values),
            });
        }
        Ok(inst)
    }

    /// Instantiate at `n`, flagging (rather than rejecting) coincident
    /// factor values.
    pub fn instantiate_any(&self, n: u32) -> Result<FormInstance> {
        let g_values: Vec<Int> = self
            .sequences
            .iter()
            .map(|s| s.eval_exact(n))
            .collect::<Result<_>>()?;
        let d = g_values.len();
        let mut degenerate = false;
        for i in 0..d {
            for j in i + 1..d {
                if g_values[i] == g_values[j] {
                    degenerate = true;
                }
            }
        }
        // elementary symmetric functions of the g values, for the
        // expanded-coefficient evaluation path
        let mut esym = vec![Int::zero(); d + 1];
        esym[0] = Int::one();
        for (taken, g) in g_values.iter().enumerate() {
            for k in (1..=taken + 1).rev() {
                let add = &esym[k - 1] * g;
                esym[k] += add;
            }
        }
        Ok(FormInstance {
            family_name: self.name.clone(),
            n,
            g_values,
            esym,
            degenerate,
        })
    }
}

/// The form `f_n(x, y)` at a fixed `n`, with both evaluation paths.
#[derive(Debug, Clone)]
pub struct FormInstance {
    pub family_name: String,
    pub n: u32,
    /// `G_1(n), ..., G_d(n)`.
    pub g_values: Vec<Int>,
    /// Elementary symmetric functions `e_0, ..., e_d` of the `g_values`.
    esym: Vec<Int>,
    /// True when two factor values coincide at this `n`.
    pub degenerate: bool,
}

impl FormInstance {
    pub fn degree(&self) -> usize {
        self.g_values.len()
    }

    /// `f_n(x, y)` via the factored product.
    pub fn eval_product(&self, x: &Int, y: &Int) -> Int {
        let d = self.degree();
        let mut prod = Int::one();
        for g in &self.g_values {
            prod *= x - g * y;
        }
        prod - y.pow(d as u32)
    }

    /// `f_n(x, y)` via the expanded coefficients
    /// `sum_k (-1)^k e_k x^(d-k) y^k - y^d`.
    pub fn eval_expanded(&self, x: &Int, y: &Int) -> Int {
        let d = self.degree();
        let mut acc = Int::zero();
        for k in 0..=d {
            let term = &self.esym[k] * x.pow((d - k) as u32) * y.pow(k as u32);
            if k % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc - y.pow(d as u32)
    }

    /// `f_n(x, y)`, asserting both evaluation paths agree.
    pub fn eval(&self, x: &Int, y: &Int) -> Int {
        let a = self.eval_product(x, y);
        debug_assert_eq!(a, self.eval_expanded(x, y));
        a
    }

    /// The univariate polynomial `x -> f_n(x, y)` for fixed `y`.
    pub fn poly_in_x(&self, y: &Int) -> IntPoly {
        let d = self.degree();
        let mut coeffs = vec![Int::zero(); d + 1];
        for k in 0..=d {
            let mut c = &self.esym[k] * y.pow(k as u32);
            if k % 2 == 1 {
                c = -c;
            }
            coeffs[d - k] = c;
        }
        coeffs[0] -= y.pow(d as u32);
        IntPoly::new(coeffs)
    }

    /// The monic defining polynomial of the roots `alpha`, i.e.
    /// `f_n(x, 1) = prod (x - g_i) - 1`.
    pub fn root_poly(&self) -> IntPoly {
        self.poly_in_x(&Int::one())
    }

    /// Solutions with `y = 0`: `x^d = t`.
    pub fn y_zero_solutions(&self) -> Vec<SolutionRecord> {
        let d = self.degree();
        let mut out = vec![SolutionRecord::new(Int::one(), Int::zero(), 1)];
        if d % 2 == 0 {
            out.push(SolutionRecord::new(-Int::one(), Int::zero(), 1));
        } else {
            out.push(SolutionRecord::new(-Int::one(), Int::zero(), -1));
        }
        out
    }

    /// The full trivial solution set
    /// `{(+-1, 0)} union {+-(G_i(n), 1)}` — `2(d+1)` records for distinct
    /// factor values — deduplicated and sorted.
    pub fn trivial_solutions(&self) -> Vec<SolutionRecord> {
        let d = self.degree();
        let mut out = self.y_zero_solutions();
        for g in &self.g_values {
            // f(G_i, 1) = -1; f(-G_i, -1) = (-1)^d * -1
            out.push(SolutionRecord::new(g.clone(), Int::one(), -1));
            let t = if d % 2 == 0 { -1 } else { 1 };
            out.push(SolutionRecord::new(-g.clone(), -Int::one(), t));
        }
        out.sort();
        out.dedup();
        out
    }

    /// All solutions with `|y| <= 2`, found by exact integer root
    /// extraction of `f_n(x, y) - t` for each small `y` and `t = +-1`.
    pub fn classify_small_y(&self) -> Vec<SolutionRecord> {
        let mut out = Vec::new();
        for y in [-2i64, -1, 0, 1, 2] {
            let y = Int::from(y);
            for t in [1i8, -1] {
                let mut p = self.poly_in_x(&y);
                let mut c = p.coeffs().to_vec();
                c[0] -= Int::from(t);
                p = IntPoly::new(c);
                for x in p.integer_roots() {
                    out.push(SolutionRecord::new(x, y.clone(), t));
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// Case analysis for `|y| = 1` by elementary factorization.
    ///
    /// For `|y| = 1`, `f_n(x, y) = t` forces
    /// `prod_i (x - G_i(n) y) = t + y^d in {0, +-2}`.
    /// The factors are `d` *distinct* integers (the `G_i` are distinct),
    /// so a zero product forces a zero factor, `x = G_i(n) y`, and a
    /// product `+-2` requires `d` distinct integer divisors of 2 — which
    /// exists only for `d <= 3`. This enumerates both cases exhaustively
    /// and returns every certified `|y| = 1` solution, independently of
    /// polynomial root extraction.
    pub fn small_y_factorization_solutions(&self) -> Vec<SolutionRecord> {
        let d = self.degree();
        let mut out = Vec::new();
        for y in [Int::one(), -Int::one()] {
            for t in [1i8, -1] {
                // target product: t + y^d
                let prod = Int::from(t) + y.pow(d as u32);
                if prod.is_zero() {
                    // a zero factor: x = G_i * y
                    for g in &self.g_values {
                        out.push(SolutionRecord::new(g * &y, y.clone(), t));
                    }
                    continue;
                }
                if prod.abs() != Int::from(2) || d > 3 {
                    // |prod| = 2 cannot be a product of more than three
                    // distinct integers (divisors of 2 are +-1, +-2).
                    continue;
                }
                // Enumerate d-subsets of {1, -1, 2, -2} with the right
                // product, then look for x with {x - G_i y} equal to the
                // subset in some order, i.e. x = G_i y + s constant.
                let divisors = [1i64, -1, 2, -2];
                let mut subsets: Vec<Vec<i64>> = Vec::new();
                for mask in 0u32..16 {
                    if mask.count_ones() as usize != d {
                        continue;
                    }
                    let set: Vec<i64> = (0..4)
                        .filter(|b| mask >> b & 1 == 1)
                        .map(|b| divisors[b])
                        .collect();
                    if Int::from(set.iter().product::<i64>()) == prod {
                        subsets.push(set);
                    }
                }
                for set in &subsets {
                    // candidate x from matching the first factor slot
                    for (i0, g0) in self.g_values.iter().enumerate() {
                        for s in set {
                            let x = g0 * &y + Int::from(*s);
                            let mut residuals: Vec<Int> = self
                                .g_values
                                .iter()
                                .enumerate()
                                .filter(|(i, _)| *i != i0)
                                .map(|(_, g)| &x - g * &y)
                                .collect();
                            residuals.push(Int::from(*s));
                            residuals.sort();
                            let mut want: Vec<Int> =
                                set.iter().map(|v| Int::from(*v)).collect();
                            want.sort();
                            if residuals == want {
                                out.push(SolutionRecord::new(x, y.clone(), t));
                            }
                        }
                    }
                }
            }
        }
        out.sort();
        out.dedup();
        debug_assert!(out
            .iter()
            .all(|r| self.eval(&r.x_int(), &r.y_int()) == Int::from(r.t)));
        out
    }
}

/// One solution `(x, y)` of `f_n(x, y) = t`, `t = +-1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct SolutionRecord {
    /// Decimal string, to keep report JSON exact for arbitrary size.
    pub x: String,
    /// Decimal string.
    pub y: String,
    pub t: i8,
}

impl SolutionRecord {
    pub fn new(x: Int, y: Int, t: i8) -> Self {
        SolutionRecord {
            x: x.to_string(),
            y: y.to_string(),
            t,
        }
    }

    pub fn x_int(&self) -> Int {
        self.x.parse().unwrap()
    }

    pub fn y_int(&self) -> Int {
        self.y.parse().unwrap()
    }
}

/// `(x, y)` is expected iff `y = 0` (the trivial solutions) or
/// `x/y` equals one of the factor values with the matching sign pattern;
/// used by reports to separate structural solutions from discoveries.
pub fn is_expected_solution(inst: &FormInstance, rec: &SolutionRecord) -> bool {
    let y = rec.y_int();
    if y.is_zero() {
        return true;
    }
    if !y.abs().is_one() {
        return false;
    }
    let x = rec.x_int();
    inst.g_values.iter().any(|g| &x == &(g * &y))
}
