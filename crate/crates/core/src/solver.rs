//! Exact desk-scale solving of `f_n(x, y) = +-1` over a bounded `y` range,
//! and verification that only the expected solution set occurs.

use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::family::{FormInstance, SolutionRecord, ThueFamily};
use crate::poly::IntPoly;
use crate::{Int, Rat, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Candidate `x` values near `alpha_i y` for the certified real roots
    /// `alpha_i` of `f_n(z, 1)` (default; complete because a solution has
    /// `prod_i |x - alpha_i y| = 1`, so some factor is at most 1).
    RootGuided,
    /// Double loop over a sound `x` range (test oracle).
    Exhaustive,
}

impl std::str::FromStr for Strategy {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "root" | "root_guided" => Ok(Strategy::RootGuided),
            "exhaustive" => Ok(Strategy::Exhaustive),
            other => Err(format!("unknown strategy `{other}` (use root|exhaustive)")),
        }
    }
}

/// All integer solutions of `f_n(x, y) = +-1` with `|y| <= y_max`.
pub fn solve_instance(inst: &FormInstance, y_max: u64, strategy: Strategy) -> Vec<SolutionRecord> {
    let mut out = match strategy {
        Strategy::RootGuided => solve_root_guided(inst, y_max),
        Strategy::Exhaustive => solve_exhaustive(inst, y_max),
    };
    out.sort();
    out.dedup();
    // every record must re-validate exactly
    debug_assert!(out
        .iter()
        .all(|s| inst.eval(&s.x_int(), &s.y_int()) == Int::from(s.t)));
    out
}

fn solve_root_guided(inst: &FormInstance, y_max: u64) -> Vec<SolutionRecord> {
    let mut out = inst.classify_small_y();
    out.retain(|s| s.y_int().abs() <= Int::from(y_max));
    if y_max < 3 {
        return out;
    }
    let d = inst.degree();
    // f_n(x, y) = prod_i (x - alpha_i y) over the roots of f_n(z, 1), so a
    // solution has min_i |x - alpha_i y| <= 1: x lies within distance 1 of
    // alpha y for some root alpha.  Real roots give a constant number of
    // integer candidates per y; a complex root alpha can only be the
    // minimizing one while |Im(alpha)| |y| <= 1, which bounds the y range
    // that needs the generic per-y fallback.
    let rp = inst.root_poly();
    // certified real-root enclosures narrow enough that the candidate
    // window [alpha y - 2, alpha y + 2] stays a constant-size integer range
    let wb = 64 - (y_max | 1).leading_zeros() + 4;
    let chain = rp.to_rat().sturm_chain();
    let real_roots: Vec<(Rat, Rat)> = crate::poly::isolate_real_roots(&rp)
        .into_iter()
        .map(|(a, b)| crate::poly::refine_root_sturm(&chain, &a, &b, wb))
        .collect();
    // fallback threshold from the complex roots of the f64 oracle
    let mut y_fallback: u64 = 2;
    if real_roots.len() < d {
        let coeffs: Vec<f64> = rp
            .coeffs()
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::INFINITY))
            .collect();
        if coeffs.iter().all(|c| c.is_finite()) {
            for z in crate::eigen::durand_kerner(&coeffs) {
                if z.im.abs() > 1e-9 {
                    // complex pair: its factor exceeds 1 once |Im| |y| > 1;
                    // keep a 4x safety margin over the f64 estimate
                    y_fallback = y_fallback.max((4.0 / z.im.abs()).ceil() as u64);
                }
            }
        } else {
            // cannot certify the complex-root threshold: fall back for all y
            y_fallback = y_max;
        }
    }
    let y_fallback = y_fallback.min(y_max);
    // generic per-y integer-root extraction for the small-|y| window
    let slow_ys: Vec<i64> = (3..=y_fallback as i64).flat_map(|y| [y, -y]).collect();
    let slow: Vec<SolutionRecord> = slow_ys
        .par_iter()
        .flat_map_iter(|&y| {
            let yi = Int::from(y);
            let base = inst.poly_in_x(&yi);
            let mut recs = Vec::new();
            for t in [1i8, -1] {
                let mut c = base.coeffs().to_vec();
                c[0] -= Int::from(t);
                let p = IntPoly::new(c);
                for x in p.integer_roots() {
                    recs.push(SolutionRecord::new(x, yi.clone(), t));
                }
            }
            recs
        })
        .collect();
    out.extend(slow);
    // root-guided candidates for the remaining y
    let ys: Vec<i64> = (y_fallback as i64 + 1..=y_max as i64)
        .flat_map(|y| [y, -y])
        .collect();
    let two = Int::from(2);
    let found: Vec<SolutionRecord> = ys
        .par_iter()
        .flat_map_iter(|&y| {
            let yi = Int::from(y);
            let yr = Rat::from_integer(yi.clone());
            let mut recs = Vec::new();
            for (lo, hi) in &real_roots {
                let (mut a, mut b) = ((lo * &yr).floor(), (hi * &yr).ceil());
                if a > b {
                    std::mem::swap(&mut a, &mut b);
                }
                let mut x = a.to_integer() - &two;
                let xe = b.to_integer() + &two;
                while x <= xe {
                    let v = inst.eval_product(&x, &yi);
                    if v.abs().is_one() {
                        let t = if v.is_one() { 1 } else { -1 };
                        recs.push(SolutionRecord::new(x.clone(), yi.clone(), t));
                    }
                    x += 1;
                }
            }
            recs
        })
        .collect();
    out.extend(found);
    out
}

fn solve_exhaustive(inst: &FormInstance, y_max: u64) -> Vec<SolutionRecord> {
    let d = inst.degree();
    let gmin = inst.g_values.iter().min().unwrap().clone();
    let gmax = inst.g_values.iter().max().unwrap().clone();
    let ys: Vec<i64> = (-(y_max as i64)..=y_max as i64).collect();
    let g128: Option<Vec<i128>> = inst
        .g_values
        .iter()
        .map(num_traits::ToPrimitive::to_i128)
        .collect();
    ys.par_iter()
        .flat_map_iter(|&y| {
            let yi = Int::from(y);
            // any solution has some factor |x - g_i y| <= (|y|^d + 1)^(1/d)
            // <= |y| + 2, so x lies within that margin of [gmin*y, gmax*y]
            let margin = Int::from(y.abs() + 2);
            let (mut lo, mut hi) = (&gmin * &yi, &gmax * &yi);
            if lo > hi {
                std::mem::swap(&mut lo, &mut hi);
            }
            lo -= &margin;
            hi += &margin;
            let mut recs = Vec::new();
            match (&g128, lo.to_i128(), hi.to_i128()) {
                (Some(gs), Some(lo), Some(hi)) => {
                    let y = y as i128;
                    'x: for x in lo..=hi {
                        let mut prod: i128 = 1;
                        for g in gs {
                            let f = match x.checked_sub(match g.checked_mul(y) {
                                Some(v) => v,
                                None => continue 'x,
                            }) {
                                Some(v) => v,
                                None => continue 'x,
                            };
                            prod = match prod.checked_mul(f) {
                                Some(v) => v,
                                None => continue 'x,
                            };
                        }
                        let yd = y.checked_pow(d as u32);
                        let v = yd.and_then(|yd| prod.checked_sub(yd));
                        match v {
                            Some(1) => recs.push(SolutionRecord::new(
                                Int::from(x),
                                Int::from(y),
                                1,
                            )),
                            Some(-1) => recs.push(SolutionRecord::new(
                                Int::from(x),
                                Int::from(y),
                                -1,
                            )),
                            _ => {}
                        }
                    }
                }
                _ => {
                    let mut x = lo.clone();
                    while x <= hi {
                        let v = inst.eval_product(&x, &yi);
                        if v.abs().is_one() {
                            let t = if v.is_one() { 1 } else { -1 };
                            recs.push(SolutionRecord::new(x.clone(), yi.clone(), t));
                        }
                        x += 1;
                    }
                }
            }
            recs
        })
        .collect()
}

/// Per-`n` outcome of a corollary verification run.
#[derive(Debug, Clone, Serialize)]
pub struct NSolveReport {
    pub n: u32,
    pub degenerate: bool,
    pub solutions: Vec<SolutionRecord>,
    /// Solutions beyond the expected set `{(+-1,0), +-(G_i(n),1)}`.
    pub extras: Vec<SolutionRecord>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub family: String,
    pub y_max: u64,
    pub strategy: Strategy,
    pub per_n: Vec<NSolveReport>,
    pub nontrivial_found: bool,
}

/// Solve every `n` in the range and diff against the expected set.
pub fn verify_corollary(
    family: &ThueFamily,
    n_range: (u32, u32),
    y_max: u64,
    strategy: Strategy,
) -> Result<SolveReport> {
    let mut per_n = Vec::new();
    for n in n_range.0..=n_range.1 {
        let inst = family.instantiate_any(n)?;
        let solutions = solve_instance(&inst, y_max, strategy);
        let expected = inst.trivial_solutions();
        let extras: Vec<SolutionRecord> = solutions
            .iter()
            .filter(|s| !expected.contains(s))
            .cloned()
            .collect();
        per_n.push(NSolveReport {
            n,
            degenerate: inst.degenerate,
            solutions,
            extras,
        });
    }
    let nontrivial_found = per_n.iter().any(|r| !r.extras.is_empty());
    Ok(SolveReport {
        family: family.name.clone(),
        y_max,
        strategy,
        per_n,
        nontrivial_found,
    })
}
