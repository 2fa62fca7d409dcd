//! Least-squares fitting of the asymptotic model
//! `log|Q(n)| = log_c + a*log(n) + n*log_r`, used by every growth-rate
//! verification pipeline.

use serde::Serialize;

use crate::dyadic::ln_abs_f64;
use crate::{Error, Rat, Result};

/// Fitted parameters of `|Q(n)| ~ c * n^a * r^n`.
#[derive(Debug, Clone, Serialize)]
pub struct AsymptoticFit {
    pub log_c: f64,
    /// Polynomial exponent `a`.
    pub a: f64,
    /// `log r` (natural log of the exponential base).
    pub log_r: f64,
    /// `r = exp(log_r)`.
    pub r: f64,
    pub residual_rms: f64,
    pub n_min: u32,
    pub n_max: u32,
    pub samples: usize,
}

fn solve3(mut m: [[f64; 4]; 3]) -> Option<[f64; 3]> {
    for c in 0..3 {
        let p = (c..3).max_by(|&i, &j| m[i][c].abs().partial_cmp(&m[j][c].abs()).unwrap())?;
        if m[p][c].abs() < 1e-300 {
            return None;
        }
        m.swap(c, p);
        for i in 0..3 {
            if i == c {
                continue;
            }
            let f = m[i][c] / m[c][c];
            for j in c..4 {
                m[i][j] -= f * m[c][j];
            }
        }
    }
    Some([m[0][3] / m[0][0], m[1][3] / m[1][1], m[2][3] / m[2][2]])
}

/// Fit on pre-logged samples `(n, log|Q(n)|)`, without the stability gate.
pub fn fit_logs(samples: &[(u32, f64)]) -> Result<AsymptoticFit> {
    if samples.len() < 3 {
        return Err(Error::FitUnstable(format!(
            "need at least 3 samples, got {}",
            samples.len()
        )));
    }
    // normal equations for [1, ln n, n]
    let mut ata = [[0.0f64; 4]; 3];
    for &(n, y) in samples {
        let row = [1.0, (n as f64).ln(), n as f64];
        for i in 0..3 {
            for j in 0..3 {
                ata[i][j] += row[i] * row[j];
            }
            ata[i][3] += row[i] * y;
        }
    }
    let sol = solve3(ata).ok_or_else(|| {
        Error::FitUnstable("singular normal equations (degenerate sample set)".into())
    })?;
    let [log_c, a, log_r] = sol;
    let mut ss = 0.0;
    for &(n, y) in samples {
        let pred = log_c + a * (n as f64).ln() + n as f64 * log_r;
        ss += (y - pred).powi(2);
    }
    let n_min = samples.iter().map(|s| s.0).min().unwrap();
    let n_max = samples.iter().map(|s| s.0).max().unwrap();
    Ok(AsymptoticFit {
        log_c,
        a,
        log_r,
        r: log_r.exp(),
        residual_rms: (ss / samples.len() as f64).sqrt(),
        n_min,
        n_max,
        samples: samples.len(),
    })
}

/// Fit `(n, |Q(n)|)` samples with the refit-stability gate: refitting on
/// the second half of the samples must change `a` by less than 0.3 and
/// `log_r` by less than 2% (absolute floor 0.02 when `log_r ~ 0`).
pub fn fit_asymptotics(samples: &[(u32, Rat)]) -> Result<AsymptoticFit> {
    if samples.len() < 8 {
        return Err(Error::FitUnstable(format!(
            "need at least 8 samples for a gated fit, got {}",
            samples.len()
        )));
    }
    let mut logs = Vec::with_capacity(samples.len());
    for (n, q) in samples {
        if !num_traits::Signed::is_positive(q) {
            return Err(Error::NonPositiveSample { n: *n });
        }
        logs.push((*n, ln_abs_f64(q)));
    }
    fit_logs_gated(&logs)
}

/// Gated fit on pre-logged samples.
pub fn fit_logs_gated(logs: &[(u32, f64)]) -> Result<AsymptoticFit> {
    let full = fit_logs(logs)?;
    let half = fit_logs(&logs[logs.len() / 2..])?;
    let da = (full.a - half.a).abs();
    let dr = (full.log_r - half.log_r).abs();
    let r_tol = (0.02 * full.log_r.abs()).max(0.02);
    if da >= 0.3 || dr >= r_tol {
        return Err(Error::FitUnstable(format!(
            "refit on second half moved a by {da:.3} (gate 0.3) and log_r by {dr:.4} \
             (gate {r_tol:.4})"
        )));
    }
    Ok(full)
}
