//! `splithue` — check, solve, and verify split families of Thue equations
//! defined by linear recurrence sequences.
//!
//! Exit codes: 0 = all checks pass, 2 = findings (nontrivial solutions,
//! bound violations, fit instabilities), 1 = usage or configuration error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use splithue::analysis::{
    baker_lower_bound, build_system, cramer_uv, height_growth_samples, lower_bound_log_y,
    s_unit_form, siegel_residual, BetaVector,
};
use splithue::config::{load_family, RunConfig};
use splithue::dyadic::{ln_abs_f64, rat_to_f64, two_pow};
use splithue::eta::{det_bk, regulator_estimates, EtaSystem};
use splithue::family::{SolutionRecord, ThueFamily};
use splithue::fit::{fit_logs, fit_logs_gated, AsymptoticFit};
use splithue::report::{f64_str, real_str, write_csv, Finding, ReportEnvelope};
use splithue::roots::{isolate_roots, lemma1_residual, predictions, width_bits_for, CertifiedRoot};
use splithue::sequences::{check_theorem_conditions, dominant_structure, gamma_eps, DominantStructure};
use splithue::solver::{verify_corollary, Strategy};
use splithue::{Int, Rat};

#[derive(Parser)]
#[command(name = "splithue", version, about = "Split Thue family verifier and solver")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the structural family conditions and report per-condition
    /// verdicts with witnesses.
    Check {
        /// Family definition file (TOML).
        #[arg(long)]
        family: PathBuf,
        /// Working precision in bits (>= 64).
        #[arg(long, default_value_t = 128)]
        precision: u32,
        /// Write the JSON report here (otherwise printed to stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve f_n(x, y) = +-1 exactly for every n in a range and diff the
    /// solution set against the trivial one.
    Solve {
        #[arg(long)]
        family: PathBuf,
        /// Parameter range `a..b` (inclusive).
        #[arg(long, value_parser = parse_range)]
        n: NRange,
        /// Bound on |y|.
        #[arg(long)]
        ymax: u64,
        /// `root` (default) or `exhaustive`.
        #[arg(long, default_value = "root")]
        strategy: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one of the verification pipelines.
    Verify {
        #[command(subcommand)]
        pipeline: Pipeline,
    },
}

#[derive(Args, Clone)]
struct Common {
    /// Family definition file (TOML).
    #[arg(long)]
    family: PathBuf,
    /// Parameter range `a..b` (inclusive); each pipeline has a sensible
    /// default.
    #[arg(long, value_parser = parse_range)]
    n: Option<NRange>,
    /// Working precision in bits (>= 64).
    #[arg(long, default_value_t = 128)]
    precision: u32,
    /// Write the JSON report here (otherwise printed to stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write per-sample plot data (CSV) here.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Pipeline {
    /// Root-location residual decay against the predicted error bases.
    Lemma1(Common),
    /// Unit-grid identities and entry growth/decay cases.
    Eta(Common),
    /// Growth of the log-matrix determinants det B_k.
    Det(Common),
    /// Regulator estimate, discriminant growth, and the unit-index bound.
    Regulator(Common),
    /// Cramer determinant structure: structural zeros and u-growth.
    Cramer(Common),
    /// Siegel identity and S-unit equation residuals on random points.
    Siegel(Common),
    /// Baker-style lower bound for the linear form in logarithms.
    Baker(Common),
    /// Lower/upper envelope comparison for log|y| and the crossover n*.
    Bounds(Common),
}

#[derive(Clone, Debug)]
struct NRange(u32, u32);

fn parse_range(s: &str) -> Result<NRange, String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected `a..b`, got `{s}`"))?;
    let a: u32 = a.trim().parse().map_err(|_| format!("bad start `{a}`"))?;
    let b: u32 = b.trim().parse().map_err(|_| format!("bad end `{b}`"))?;
    if a == 0 || b < a {
        return Err(format!("need 1 <= a <= b, got {a}..{b}"));
    }
    Ok(NRange(a, b))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn emit<T: Serialize>(env: &ReportEnvelope<T>, out: &Option<PathBuf>) -> anyhow::Result<u8> {
    match out {
        Some(path) => env.write(path)?,
        None => print!("{}", env.to_json()),
    }
    Ok(if env.findings.is_empty() { 0 } else { 2 })
}

fn load(path: &Path) -> anyhow::Result<ThueFamily> {
    Ok(load_family(path)?)
}

fn config(precision: u32) -> anyhow::Result<RunConfig> {
    let cfg = RunConfig {
        precision,
        ..RunConfig::default()
    };
    cfg.validate()?;
    Ok(cfg)
}

fn structures(fam: &ThueFamily, precision: u32) -> anyhow::Result<Vec<DominantStructure>> {
    Ok(fam
        .sequences
        .iter()
        .map(|s| dominant_structure(s, precision))
        .collect::<splithue::Result<_>>()?)
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.cmd {
        Cmd::Check {
            family,
            precision,
            out,
        } => cmd_check(&family, precision, &out),
        Cmd::Solve {
            family,
            n,
            ymax,
            strategy,
            out,
        } => cmd_solve(&family, n, ymax, &strategy, &out),
        Cmd::Verify { pipeline } => match pipeline {
            Pipeline::Lemma1(c) => verify_lemma1(c),
            Pipeline::Eta(c) => verify_eta(c),
            Pipeline::Det(c) => verify_det(c),
            Pipeline::Regulator(c) => verify_regulator(c),
            Pipeline::Cramer(c) => verify_cramer(c),
            Pipeline::Siegel(c) => verify_siegel(c),
            Pipeline::Baker(c) => verify_baker(c),
            Pipeline::Bounds(c) => verify_bounds(c),
        },
    }
}

// ---------------------------------------------------------------- check

#[derive(Serialize)]
struct ConditionOut {
    pass: bool,
    detail: String,
}

#[derive(Serialize)]
struct CheckData {
    family: String,
    degree: usize,
    precision: u32,
    ordering: ConditionOut,
    equal_top_coefficients: ConditionOut,
    second_roots: ConditionOut,
    gammas: Vec<String>,
    top_coefficients: [String; 2],
    second_root_moduli: [Option<String>; 2],
    gamma_d2_squared: String,
    gamma_times_abs_delta_d: String,
    pass: bool,
}

fn cmd_check(family: &Path, precision: u32, out: &Option<PathBuf>) -> anyhow::Result<u8> {
    let cfg = config(precision)?;
    let fam = load(family)?;
    let rep = check_theorem_conditions(&fam.sequences, cfg.precision)?;
    let mut findings = Vec::new();
    for (name, v) in [
        ("ordering", &rep.cond_ordering),
        ("equal-top-coefficients", &rep.cond_equal_top_coeffs),
        ("second-roots", &rep.cond_second_roots),
    ] {
        if !v.pass {
            findings.push(Finding::new(
                "condition-failed",
                format!("{name}: {}", v.detail),
            ));
        }
    }
    let data = CheckData {
        family: fam.name.clone(),
        degree: fam.degree(),
        precision: cfg.precision,
        ordering: ConditionOut {
            pass: rep.cond_ordering.pass,
            detail: rep.cond_ordering.detail.clone(),
        },
        equal_top_coefficients: ConditionOut {
            pass: rep.cond_equal_top_coeffs.pass,
            detail: rep.cond_equal_top_coeffs.detail.clone(),
        },
        second_roots: ConditionOut {
            pass: rep.cond_second_roots.pass,
            detail: rep.cond_second_roots.detail.clone(),
        },
        gammas: rep.gammas.iter().map(real_str).collect(),
        top_coefficients: [real_str(&rep.g_top.0), real_str(&rep.g_top.1)],
        second_root_moduli: [
            rep.deltas.0.as_ref().map(real_str),
            rep.deltas.1.as_ref().map(real_str),
        ],
        gamma_d2_squared: real_str(&rep.gamma_d2_squared),
        gamma_times_abs_delta_d: real_str(&rep.gamma_times_abs_delta_d),
        pass: rep.pass,
    };
    emit(&ReportEnvelope::new("check", data, findings), out)
}

// ---------------------------------------------------------------- solve

fn cmd_solve(
    family: &Path,
    n: NRange,
    ymax: u64,
    strategy: &str,
    out: &Option<PathBuf>,
) -> anyhow::Result<u8> {
    let fam = load(family)?;
    let strategy: Strategy = strategy
        .parse()
        .map_err(|e: String| anyhow::anyhow!(e))?;
    let rep = verify_corollary(&fam, (n.0, n.1), ymax, strategy)?;
    let mut findings = Vec::new();
    for r in &rep.per_n {
        for s in &r.extras {
            findings.push(Finding::new(
                "nontrivial-solution",
                format!("n={}: (x, y) = ({}, {}) with t = {}", r.n, s.x, s.y, s.t),
            ));
        }
    }
    emit(&ReportEnvelope::new("solve", rep, findings), out)
}

// ------------------------------------------------------------- pipelines

#[derive(Serialize)]
struct FitOut {
    log_c: String,
    poly_exponent: String,
    base: String,
    residual_rms: String,
    n_min: u32,
    n_max: u32,
    samples: usize,
}

impl From<&AsymptoticFit> for FitOut {
    fn from(f: &AsymptoticFit) -> Self {
        FitOut {
            log_c: f64_str(f.log_c),
            poly_exponent: f64_str(f.a),
            base: f64_str(f.r),
            residual_rms: f64_str(f.residual_rms),
            n_min: f.n_min,
            n_max: f.n_max,
            samples: f.samples,
        }
    }
}

fn range_or(c: &Common, lo: u32, hi: u32) -> (u32, u32) {
    c.n.as_ref().map(|r| (r.0, r.1)).unwrap_or((lo, hi))
}

/// Build (inst, system) for each n in the range, in order.
fn systems(
    fam: &ThueFamily,
    range: (u32, u32),
    precision: u32,
) -> anyhow::Result<Vec<(u32, splithue::family::FormInstance, EtaSystem)>> {
    let rows: splithue::Result<Vec<_>> = (range.0..=range.1)
        .into_par_iter()
        .map(|n| {
            let (inst, sys) = build_system(fam, n, precision)?;
            Ok((n, inst, sys))
        })
        .collect();
    let mut rows = rows?;
    rows.sort_by_key(|r| r.0);
    Ok(rows)
}

#[derive(Serialize)]
struct Lemma1PerRoot {
    i: usize,
    gamma_eps: String,
    fitted_decay_base: String,
    fitted_poly_exponent: String,
    envelope_ok: bool,
}

#[derive(Serialize)]
struct Lemma1Data {
    family: String,
    precision: u32,
    n_min: u32,
    n_max: u32,
    per_root: Vec<Lemma1PerRoot>,
}

fn verify_lemma1(c: Common) -> anyhow::Result<u8> {
    let cfg = config(c.precision)?;
    let fam = load(&c.family)?;
    let (lo, hi) = range_or(&c, 4, 14);
    let st = structures(&fam, cfg.precision)?;
    let max_gamma = st.iter().map(|s| s.gamma.value.clone()).max().unwrap();
    let d = fam.degree();
    let rows: splithue::Result<Vec<(u32, Vec<f64>)>> = (lo..=hi)
        .into_par_iter()
        .map(|n| {
            let inst = fam.instantiate(n)?;
            let wb = width_bits_for(cfg.precision, n, d, &max_gamma);
            let roots = isolate_roots(&inst, wb)?;
            let preds = predictions(&inst)?;
            let per_i = (1..=d)
                .map(|i| ln_abs_f64(&lemma1_residual(&inst, &roots[i - 1], &preds[i - 1]).value))
                .collect();
            Ok((n, per_i))
        })
        .collect();
    let rows = {
        let mut r = rows?;
        r.sort_by_key(|x| x.0);
        r
    };
    let mut findings = Vec::new();
    let mut per_root = Vec::new();
    for i in 1..=d {
        let ge = gamma_eps(&st, i);
        let logs: Vec<(u32, f64)> = rows.iter().map(|(n, v)| (*n, v[i - 1])).collect();
        let fit = fit_logs(&logs)?;
        let decay = 1.0 / fit.r;
        let ok = decay >= 0.9 * rat_to_f64(&ge);
        if !ok {
            findings.push(Finding::new(
                "envelope-violated",
                format!(
                    "root {i}: residual decay base {decay:.3} below 0.9 * gamma_eps = {}",
                    real_str(&ge)
                ),
            ));
        }
        per_root.push(Lemma1PerRoot {
            i,
            gamma_eps: real_str(&ge),
            fitted_decay_base: f64_str(decay),
            fitted_poly_exponent: f64_str(fit.a),
            envelope_ok: ok,
        });
    }
    if let Some(csv) = &c.csv {
        let mut rows_csv = Vec::new();
        for (n, v) in &rows {
            for (i, ln_r) in v.iter().enumerate() {
                rows_csv.push(vec![n.to_string(), (i + 1).to_string(), f64_str(*ln_r)]);
            }
        }
        write_csv(csv, &["n", "i", "ln_residual"], &rows_csv)?;
    }
    let data = Lemma1Data {
        family: fam.name.clone(),
        precision: cfg.precision,
        n_min: lo,
        n_max: hi,
        per_root,
    };
    emit(&ReportEnvelope::new("verify-lemma1", data, findings), &c.out)
}

#[derive(Serialize)]
struct EtaData {
    family: String,
    precision: u32,
    n_min: u32,
    n_max: u32,
    max_row_product_residual: String,
    diagonal_decay: FitOut,
    predicted_diagonal_base: String,
    top_pair_growth: FitOut,
    predicted_top_pair_base: String,
}

fn verify_eta(c: Common) -> anyhow::Result<u8> {
    let cfg = config(c.precision)?;
    let fam = load(&c.family)?;
    let (lo, hi) = range_or(&c, 6, 20);
    let st = structures(&fam, cfg.precision)?;
    let d = fam.degree();
    let rows = systems(&fam, (lo, hi), cfg.precision)?;
    let mut max_resid = Rat::zero();
    let mut diag = Vec::new();
    let mut top = Vec::new();
    let mut csv_rows = Vec::new();
    for (n, _, sys) in &rows {
        for s in sys.row_log_sums() {
            if s > max_resid {
                max_resid = s;
            }
        }
        let ld = rat_to_f64(&sys.log_abs[0][0]);
        let lt = rat_to_f64(&sys.log_abs[d - 2][d - 1]);
        diag.push((*n, ld));
        top.push((*n, lt));
        csv_rows.push(vec![n.to_string(), f64_str(ld), f64_str(lt)]);
    }
    // predicted diagonal decay base for row 1: the growth of the gap
    // product prod_{k>=2} gamma_k; predicted top-pair base: |delta_d|
    let mut pred_diag = Rat::one();
    for s in st.iter().skip(1) {
        pred_diag *= s.gamma.value.clone();
    }
    let pred_top = st[d - 1]
        .delta
        .as_ref()
        .map(|a| a.value.abs())
        .unwrap_or_else(Rat::zero);
    let fit_d = fit_logs(&diag)?;
    let fit_t = fit_logs(&top)?;
    let mut findings = Vec::new();
    let decay = 1.0 / fit_d.r;
    if (decay - rat_to_f64(&pred_diag)).abs() > 0.1 * rat_to_f64(&pred_diag) {
        findings.push(Finding::new(
            "eta-diagonal-off",
            format!("diagonal decay base {decay:.3} vs predicted {}", real_str(&pred_diag)),
        ));
    }
    if !pred_top.is_zero()
        && (fit_t.r - rat_to_f64(&pred_top)).abs() > 0.1 * rat_to_f64(&pred_top)
    {
        findings.push(Finding::new(
            "eta-top-pair-off",
            format!("top-pair growth base {:.3} vs predicted {}", fit_t.r, real_str(&pred_top)),
        ));
    }
    if let Some(csv) = &c.csv {
        write_csv(csv, &["n", "ln_eta_diag_1", "ln_eta_top_pair"], &csv_rows)?;
    }
    let data = EtaData {
        family: fam.name.clone(),
        precision: cfg.precision,
        n_min: lo,
        n_max: hi,
        max_row_product_residual: real_str(&max_resid),
        diagonal_decay: FitOut::from(&fit_d),
        predicted_diagonal_base: real_str(&pred_diag),
        top_pair_growth: FitOut::from(&fit_t),
        predicted_top_pair_base: real_str(&pred_top),
    };
    emit(&ReportEnvelope::new("verify-eta", data, findings), &c.out)
}

#[derive(Serialize)]
struct DetPerK {
    k: usize,
    fit: FitOut,
    exponent_ok: bool,
    base_ok: bool,
}

#[derive(Serialize)]
struct DetData {
    family: String,
    precision: u32,
    n_min: u32,
    n_max: u32,
    per_k: Vec<DetPerK>,
}

fn verify_det(c: Common) -> anyhow::Result<u8> {
    let cfg = config(c.precision)?;
    let fam = load(&c.family)?;
    let (lo, hi) = range_or(&c, 6, 30);
    let d = fam.degree();
    let rows = systems(&fam, (lo, hi), cfg.precision)?;
    let mut findings = Vec::new();
    let mut per_k = Vec::new();
    let mut csv_rows = Vec::new();
    for k in 1..=d - 1 {
        let logs: Vec<(u32, f64)> = rows
            .iter()
            .map(|(n, _, sys)| (*n, ln_abs_f64(&det_bk(sys, k))))
            .collect();
        for (n, v) in &logs {
            csv_rows.push((*n, k, f64_str(*v)));
        }
        let fit = fit_logs_gated(&logs)?;
        let exponent_ok = (fit.a - k as f64).abs() < 0.25;
        let base_ok = (fit.r - 1.0).abs() < 0.02;
        if !exponent_ok || !base_ok {
            findings.push(Finding::new(
                "det-growth-off",
                format!("k={k}: exponent {:.3} (want {k}), base {:.4} (want 1)", fit.a, fit.r),
            ));
        }
        per_k.push(DetPerK {
            k,
            fit: FitOut::from(&fit),
            exponent_ok,
            base_ok,
        });
    }
    csv_rows.sort_by_key(|r| (r.0, r.1));
    if let Some(csv) = &c.csv {
        let rows_csv: Vec<Vec<String>> = csv_rows
            .into_iter()
            .map(|(n, k, v)| vec![n.to_string(), k.to_string(), v])
            .collect();
        write_csv(csv, &["n", "k", "ln_det_bk"], &rows_csv)?;
    }
    let data = DetData {
        family: fam.name.clone(),
        precision: cfg.precision,
        n_min: lo,
        n_max: hi,
        per_k,
    };
    emit(&ReportEnvelope::new("verify-det", data, findings), &c.out)
}

#[derive(Serialize)]
struct RegulatorPerN {
    n: u32,
    r_g: String,
    disc: String,
    log_abs_disc: String,
    pohst_lower: String,
    index_upper: String,
}

#[derive(Serialize)]
struct RegulatorData {
    family: String,
    precision: u32,
    n_min: u32,
    n_max: u32,
    pohst_c: String,
    r_g_growth: FitOut,
    expected_r_g_exponent: usize,
    log_disc_growth: FitOut,
    per_n: Vec<RegulatorPerN>,
}

fn verify_regulator(c: Common) -> anyhow::Result<u8> {
    let cfg = config(c.precision)?;
    let fam = load(&c.family)?;
    let (lo, hi) = range_or(&c, 6, 30);
    let d = fam.degree();
    let rows = systems(&fam, (lo, hi), cfg.precision)?;
    let mut findings = Vec::new();
    let mut per_n = Vec::new();
    let mut rg_logs = Vec::new();
    let mut ld_logs = Vec::new();
    for (n, inst, sys) in &rows {
        let est = regulator_estimates(sys, inst, &cfg.pohst_c)?;
        if est.index_upper < Rat::one() {
            findings.push(Finding::new(
                "index-below-one",
                format!("n={n}: regulator index upper bound {} < 1", real_str(&est.index_upper)),
            ));
        }
        let la = ln_abs_f64(&Rat::from_integer(est.disc.clone()));
        rg_logs.push((*n, ln_abs_f64(&est.r_g)));
        ld_logs.push((*n, la.ln()));
        per_n.push(RegulatorPerN {
            n: *n,
            r_g: real_str(&est.r_g),
            disc: est.disc.to_string(),
            log_abs_disc: f64_str(la),
            pohst_lower: real_str(&est.pohst_lower),
            index_upper: real_str(&est.index_upper),
        });
    }
    let fit_rg = fit_logs_gated(&rg_logs)?;
    let fit_ld = fit_logs(&ld_logs)?;
    if (fit_rg.a - (d - 1) as f64).abs() > 0.25 || (fit_rg.r - 1.0).abs() > 0.02 {
        findings.push(Finding::new(
            "regulator-growth-off",
            format!("R_G exponent {:.3} (want {})", fit_rg.a, d - 1),
        ));
    }
    if (fit_ld.a - 1.0).abs() > 0.2 {
        findings.push(Finding::new(
            "disc-growth-off",
            format!("log|disc| exponent {:.3} (want 1)", fit_ld.a),
        ));
    }
    if let Some(csv) = &c.csv {
        let rows_csv: Vec<Vec<String>> = rg_logs
            .iter()
            .zip(&ld_logs)
            .map(|((n, rg), (_, ld))| vec![n.to_string(), f64_str(*rg), f64_str(*ld)])
            .collect();
        write_csv(csv, &["n", "ln_r_g", "ln_ln_disc"], &rows_csv)?;
    }
    let data = RegulatorData {
        family: fam.name.clone(),
        precision: cfg.precision,
        n_min: lo,
        n_max: hi,
        pohst_c: real_str(&cfg.pohst_c),
        r_g_growth: FitOut::from(&fit_rg),
        expected_r_g_exponent: d - 1,
        log_disc_growth: FitOut::from(&fit_ld),
        per_n,
    };
    emit(&ReportEnvelope::new("verify-regulator", data, findings), &c.out)
}

#[derive(Serialize)]
struct CramerData {
    family: String,
    precision: u32,
    n_min: u32,
    n_max: u32,
    structural_zero_max_rel: String,
    u_top_growth: FitOut,
    predicted_u_top_base: String,
    u_combined_growth: FitOut,
    predicted_u_combined_base: String,
}

fn verify_cramer(c: Common) -> anyhow::Result<u8> {
    let cfg = config(c.precision)?;
    let fam = load(&c.family)?;
    let (lo, hi) = range_or(&c, 8, 30);
    let st = structures(&fam, cfg.precision)?;
    let d = fam.degree();
    if d < 4 {
        anyhow::bail!("the Cramer pipeline requires degree >= 4 (got {d})");
    }
    let rows = systems(&fam, (lo, hi), cfg.precision)?;
    let half = two_pow(-(cfg.precision as i64) / 2);
    let mut findings = Vec::new();
    let mut max_rel = Rat::zero();
    let mut u_top = Vec::new();
    let mut u_comb = Vec::new();
    let mut csv_rows = Vec::new();
    for (n, _, sys) in &rows {
        for j in 1..=d - 2 {
            let cs = cramer_uv(sys, j);
            for k in 1..=d - 1 {
                if k != j && !cs.v[k - 1].is_zero() {
                    let rel = cs.v[k - 1].abs() / cs.r_det.abs();
                    if rel > max_rel {
                        max_rel = rel.clone();
                    }
                    if rel > half {
                        findings.push(Finding::new(
                            "structural-zero-violated",
                            format!("n={n}, j={j}, k={k}: relative v = {}", real_str(&rel)),
                        ));
                    }
                }
            }
        }
        let cs = cramer_uv(sys, d);
        let rel = cs.combined_v.abs() / cs.r_det.abs();
        if rel > max_rel {
            max_rel = rel.clone();
        }
        if rel > half {
            findings.push(Finding::new(
                "structural-zero-violated",
                format!("n={n}, j={d}: relative combined v = {}", real_str(&rel)),
            ));
        }
        let cs1 = cramer_uv(sys, 1);
        let top = ln_abs_f64(&cs1.u[d - 2].abs());
        let comb = ln_abs_f64(&cs.combined_u.abs());
        u_top.push((*n, top));
        u_comb.push((*n, comb));
        csv_rows.push(vec![n.to_string(), f64_str(top), f64_str(comb)]);
    }
    // predicted bases: |u_{d-1}| ~ (|delta_d| / gamma)^n for j <= d-2 and
    // |u_{d-2} - u_{d-3}| ~ (gamma_{d-2} / gamma)^n for j in {d-1, d}
    let gamma = &st[d - 1].gamma.value;
    let delta_d = st[d - 1]
        .delta
        .as_ref()
        .map(|a| a.value.abs())
        .unwrap_or_else(Rat::zero);
    let pred_top = &delta_d / gamma;
    let pred_comb = &st[d - 3].gamma.value / gamma;
    let fit_top = fit_logs_gated(&u_top)?;
    let fit_comb = fit_logs_gated(&u_comb)?;
    if (fit_top.r - rat_to_f64(&pred_top)).abs() > 0.05 * rat_to_f64(&pred_top) {
        findings.push(Finding::new(
            "u-growth-off",
            format!("|u_(d-1)| base {:.4} vs predicted {}", fit_top.r, real_str(&pred_top)),
        ));
    }
    if (fit_comb.r - rat_to_f64(&pred_comb)).abs() > 0.05 * rat_to_f64(&pred_comb) {
        findings.push(Finding::new(
            "u-growth-off",
            format!(
                "|u_(d-2) - u_(d-3)| base {:.4} vs predicted {}",
                fit_comb.r,
                real_str(&pred_comb)
            ),
        ));
    }
    if let Some(csv) = &c.csv {
        write_csv(csv, &["n", "ln_u_top", "ln_u_combined"], &csv_rows)?;
    }
    let data = CramerData {
        family: fam.name.clone(),
        precision: cfg.precision,
        n_min: lo,
        n_max: hi,
        structural_zero_max_rel: real_str(&max_rel),
        u_top_growth: FitOut::from(&fit_top),
        predicted_u_top_base: real_str(&pred_top),
        u_combined_growth: FitOut::from(&fit_comb),
        predicted_u_combined_base: real_str(&pred_comb),
    };
    emit(&ReportEnvelope::new("verify-cramer", data, findings), &c.out)
}

/// Deterministic random integer points with |y| >= 2 plus the beta vector
/// formed from the certified root midpoints.
fn random_points(
    roots: &[CertifiedRoot],
    count: usize,
    seed: u64,
) -> Vec<(BetaVector, (usize, usize, usize))> {
    let d = roots.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let x = Int::from(rng.gen_range(-1000i64..=1000));
        let mut y = rng.gen_range(2i64..=1000);
        if rng.gen_bool(0.5) {
            y = -y;
        }
        let y = Int::from(y);
        let xr = Rat::from_integer(x.clone());
        let yr = Rat::from_integer(y.clone());
        let beta: Vec<Rat> = roots.iter().map(|r| &xr - r.mid() * &yr).collect();
        let type_j = beta
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.abs().cmp(&b.1.abs()))
            .map(|(i, _)| i + 1)
            .unwrap();
        let bv = BetaVector {
            solution: SolutionRecord::new(x, y, 1),
            beta,
            type_j,
            product_residual: Rat::zero(),
            separation_ok: true,
            smallest_bound_ok: true,
        };
        let mut idx: Vec<usize> = (1..=d).collect();
        for i in (1..d).rev() {
            idx.swap(i, rng.gen_range(0..=i));
        }
        out.push((bv, (idx[0], idx[1], idx[2])));
    }
    out
}

#[derive(Serialize)]
struct SiegelData {
    family: String,
    precision: u32,
    n: u32,
    samples: usize,
    tolerance: String,
    max_siegel_residual: String,
    max_sunit_residual: String,
}

fn verify_siegel(c: Common) -> anyhow::Result<u8> {
    let cfg = config(c.precision)?;
    let fam = load(&c.family)?;
    let (_, hi) = range_or(&c, 5, 5);
    let st = structures(&fam, cfg.precision)?;
    let max_gamma = st.iter().map(|s| s.gamma.value.clone()).max().unwrap();
    let inst = fam.instantiate(hi)?;
    let d = fam.degree();
    let wb = width_bits_for(cfg.precision, hi, d, &max_gamma);
    let roots = isolate_roots(&inst, wb)?;
    let tol = two_pow(-(cfg.precision as i64) + 20);
    let mut findings = Vec::new();
    let mut max_siegel = Rat::zero();
    let mut max_sunit = Rat::zero();
    for (bv, idx) in random_points(&roots, 100, 11) {
        let r = siegel_residual(&roots, &bv, idx);
        if r > max_siegel {
            max_siegel = r.clone();
        }
        if r > tol {
            findings.push(Finding::new(
                "siegel-residual",
                format!("relative residual {} exceeds tolerance", real_str(&r)),
            ));
        }
        if let Ok(ev) = s_unit_form(&roots, &bv, idx, &inst, cfg.precision) {
            if ev.sunit_rel_residual > max_sunit {
                max_sunit = ev.sunit_rel_residual.clone();
            }
            if ev.sunit_rel_residual > tol {
                findings.push(Finding::new(
                    "sunit-residual",
                    format!(
                        "two-sided disagreement {} exceeds tolerance",
                        real_str(&ev.sunit_rel_residual)
                    ),
                ));
            }
        }
    }
    let data = SiegelData {
        family: fam.name.clone(),
        precision: cfg.precision,
        n: hi,
        samples: 100,
        tolerance: real_str(&tol),
        max_siegel_residual: real_str(&max_siegel),
        max_sunit_residual: real_str(&max_sunit),
    };
    emit(&ReportEnvelope::new("verify-siegel", data, findings), &c.out)
}

#[derive(Serialize)]
struct BakerData {
    family: String,
    precision: u32,
    n: u32,
    baker_c: String,
    samples: usize,
    evaluated: usize,
    min_margin: String,
    near_zero_findings: usize,
}

fn verify_baker(c: Common) -> anyhow::Result<u8> {
    let cfg = config(c.precision)?;
    let fam = load(&c.family)?;
    let (_, hi) = range_or(&c, 5, 5);
    let st = structures(&fam, cfg.precision)?;
    let max_gamma = st.iter().map(|s| s.gamma.value.clone()).max().unwrap();
    let inst = fam.instantiate(hi)?;
    let d = fam.degree();
    let wb = width_bits_for(cfg.precision, hi, d, &max_gamma);
    let roots = isolate_roots(&inst, wb)?;
    let mut findings = Vec::new();
    let mut min_margin = f64::INFINITY;
    let mut evaluated = 0usize;
    let mut near_zero = 0usize;
    for (bv, idx) in random_points(&roots, 100, 13) {
        let ev = match s_unit_form(&roots, &bv, idx, &inst, cfg.precision) {
            Ok(ev) => ev,
            Err(_) => continue,
        };
        evaluated += 1;
        if ev.lambda_near_zero {
            near_zero += 1;
            findings.push(Finding::new(
                "lambda-near-zero",
                "linear form vanishes to working precision even after doubling",
            ));
            continue;
        }
        match baker_lower_bound(&ev, cfg.baker_c, d) {
            Ok(rep) => {
                let margin = rep.log_lambda - rep.bound;
                if margin < min_margin {
                    min_margin = margin;
                }
            }
            Err(e) => {
                findings.push(Finding::new("baker-violated", e.to_string()));
            }
        }
    }
    let data = BakerData {
        family: fam.name.clone(),
        precision: cfg.precision,
        n: hi,
        baker_c: f64_str(cfg.baker_c),
        samples: 100,
        evaluated,
        min_margin: f64_str(min_margin),
        near_zero_findings: near_zero,
    };
    emit(&ReportEnvelope::new("verify-baker", data, findings), &c.out)
}

#[derive(Serialize)]
struct BoundsData {
    family: String,
    precision: u32,
    n_min: u32,
    n_max: u32,
    type_dependent_base: String,
    uniform_base: String,
    poly_exponent: i64,
    height_linear_coefficient: String,
    crossover_n_star: Option<u64>,
}

fn verify_bounds(c: Common) -> anyhow::Result<u8> {
    let cfg = config(c.precision)?;
    let fam = load(&c.family)?;
    let (lo, hi) = range_or(&c, 2, 20);
    let st = structures(&fam, cfg.precision)?;
    let env = lower_bound_log_y(&st)?;
    // heights grow linearly: estimate the K in K * n log n from the last
    // sample of h(alpha)(n)
    let hs = height_growth_samples(&fam, (lo, hi))?;
    let (n_last, h_last) = *hs.last().unwrap();
    let upper_coeff = h_last / n_last as f64;
    let cmp = splithue::analysis::bound_comparison(
        0.0,
        env.uniform_base,
        env.poly_exponent as f64,
        upper_coeff,
    );
    let mut findings = Vec::new();
    if cmp.n_star.is_none() {
        findings.push(Finding::new(
            "no-crossover",
            "exponential lower envelope never beats the n log n upper envelope in range",
        ));
    }
    if let Some(csv) = &c.csv {
        let rows: Vec<Vec<String>> = hs
            .iter()
            .map(|(n, h)| vec![n.to_string(), f64_str(*h)])
            .collect();
        write_csv(csv, &["n", "height"], &rows)?;
    }
    let data = BoundsData {
        family: fam.name.clone(),
        precision: cfg.precision,
        n_min: lo,
        n_max: hi,
        type_dependent_base: f64_str(env.type_dependent_base),
        uniform_base: f64_str(env.uniform_base),
        poly_exponent: env.poly_exponent,
        height_linear_coefficient: f64_str(upper_coeff),
        crossover_n_star: cmp.n_star,
    };
    emit(&ReportEnvelope::new("verify-bounds", data, findings), &c.out)
}
