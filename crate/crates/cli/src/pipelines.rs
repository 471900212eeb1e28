//! The seven pipelines. Each returns its artifacts in memory; the caller
//! writes them in order, so nothing here touches the file system except
//! reading an input field.

use anyhow::{Context, Result};
use helmlab::annulus::{
    apply_t_at, counterexample_image, kernel_k, make_counterexample, periodic_counterexample, CounterexampleId,
    MultiplierSpec,
};
use helmlab::normlab::{
    estimate_norm_lower, farey, fit_power_law, fit_scaling_exponent, gamma_conditions, predicted_gamma,
    region_membership, ExponentPair, FourierMultiplier, RegionId, TestFamily, Q,
};
use helmlab::resolvent::{
    frequency_decomposition, interface_correction, mountain_pass_certificate, residual, solve_lap,
    solve_perturbed_with, Branch, Evaluation, FrequencyParams,
};
use helmlab::spectral::{dft, hlzf, lp_norm, Direction, Domain, GridSpec, SampledField};
use helmlab::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{ConfigError, KernelConfig, Plan, ProfileConfig, SolveConfig, SolveMethod, SourceConfig, Spacing};

/// Shell-to-peak ratio above which the truncation warning is raised.
const SHELL_TOLERANCE: f64 = 1e-10;

/// A named output file.
pub struct Artifact {
    pub name: String,
    pub bytes: Vec<u8>,
}

/// Artifacts plus the diagnostics recorded in the manifest.
pub struct Output {
    pub artifacts: Vec<Artifact>,
    pub diagnostics: Value,
}

/// Shortest round-trip scientific notation; stable across platforms.
pub fn num(x: f64) -> String {
    format!("{x:e}")
}

fn hlzf_artifact(name: &str, field: &SampledField) -> Result<Artifact> {
    let mut bytes = Vec::new();
    hlzf::write(field, &mut bytes)?;
    Ok(Artifact { name: name.into(), bytes })
}

fn json_artifact(name: &str, value: &Value) -> Result<Artifact> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(Artifact { name: name.into(), bytes })
}

fn csv_artifact(name: &str, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<Artifact> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    let bytes = w.into_inner().map_err(|e| anyhow::anyhow!("csv: {e}"))?;
    Ok(Artifact { name: name.into(), bytes })
}

pub fn run(plan: &Plan) -> Result<Output> {
    match plan {
        Plan::Solve { grid, params, source, solve } => run_solve(grid, params, source, solve),
        Plan::Decompose { grid, params, source } => run_decompose(grid, params, source),
        Plan::Kernel { spec, kernel } => run_kernel(spec, kernel),
        Plan::Scaling { grid, spec, alpha, pairs, lambdas, budget, families } => {
            run_scaling(grid, spec, *alpha, pairs, lambdas, *budget, families)
        }
        Plan::Counterexample { grid, spec, id, ce } => run_counterexample(grid, spec, id, ce.periodic, &ce.points),
        Plan::Regions { region, selfdual, max_den, gamma } => run_regions(region, *selfdual, *max_den, *gamma),
        Plan::MpCheck { grid, params, profiles } => run_mp_check(grid, params, profiles),
    }
}

fn load_source(source: &SourceConfig, grid: &GridSpec) -> Result<SampledField> {
    match source {
        SourceConfig::Gaussian { centre, width, amplitude } => {
            Ok(SampledField::from_fn(grid.clone(), Domain::Physical, |x| {
                let r2: f64 = x.iter().zip(centre).map(|(a, c)| (a - c).powi(2)).sum();
                Complex64::new(amplitude * (-r2 / (width * width)).exp(), 0.0)
            }))
        }
        SourceConfig::File { path } => {
            let f = hlzf::load(path).with_context(|| format!("reading {}", path.display()))?;
            if f.domain != Domain::Physical {
                return Err(ConfigError(format!("source: {} holds a frequency-domain field", path.display())).into());
            }
            if f.grid.ndim() < 2 {
                return Err(ConfigError(format!("source: {} is one-dimensional", path.display())).into());
            }
            Ok(f)
        }
    }
}

fn shell_diagnostics(f: &SampledField) -> Value {
    let shell = f.shell_ratio();
    json!({ "shell_ratio": shell, "truncation_warning": shell > SHELL_TOLERANCE })
}

fn run_solve(grid: &GridSpec, params: &FrequencyParams, source: &SourceConfig, solve: &SolveConfig) -> Result<Output> {
    let f = load_source(source, grid)?;
    let branch = if solve.incoming { Branch::Incoming } else { Branch::Outgoing };
    let (u, used) = match solve.method {
        SolveMethod::Periodic => (solve_perturbed_with(&f, params, Evaluation::Periodic)?, *params),
        SolveMethod::Continuum => (solve_perturbed_with(&f, params, Evaluation::Continuum)?, *params),
        SolveMethod::Limiting => {
            let p0 = params.with_eps(0.0)?;
            (solve_lap(&f, &p0, branch)?, p0)
        }
    };
    let res = residual(&u, &f, &used)?;
    let f_norm = lp_norm(&f, 2.0)?;
    let diagnostics = json!({
        "method": solve.method,
        "branch": branch,
        "lambda": used.lambda,
        "eps": used.eps,
        "mu1": used.mu1(),
        "mu2": used.mu2(),
        "residual": res,
        "f_l2": f_norm,
        "relative_residual": res / f_norm,
        "u_l2": lp_norm(&u, 2.0)?,
        "source": shell_diagnostics(&f),
    });
    Ok(Output {
        artifacts: vec![hlzf_artifact("u.hlzf", &u)?, json_artifact("residual.json", &diagnostics)?],
        diagnostics,
    })
}

fn run_decompose(grid: &GridSpec, params: &FrequencyParams, source: &SourceConfig) -> Result<Output> {
    let f = load_source(source, grid)?;
    let dec = frequency_decomposition(&f, params)?;
    let total = interface_correction(&f, params)?;
    let sum = dec.sum()?;
    let one = Complex64::new(1.0, 0.0);
    let total_norm = lp_norm(&total, 2.0)?;
    let mismatch = lp_norm(&sum.combine(one, &total, -one)?, 2.0)?;
    let diagnostics = json!({
        "lambda": params.lambda,
        "eps": params.eps,
        "mu1": params.mu1(),
        "mu2": params.mu2(),
        "block_l2": {
            "w": lp_norm(&dec.w, 2.0)?,
            "frak_w": lp_norm(&dec.frak_w, 2.0)?,
            "frak_big_w": lp_norm(&dec.frak_big_w, 2.0)?,
            "w_large": lp_norm(&dec.w_large, 2.0)?,
        },
        "correction_l2": total_norm,
        "relative_mismatch": if total_norm > 0.0 { mismatch / total_norm } else { mismatch },
        "source": shell_diagnostics(&f),
    });
    Ok(Output {
        artifacts: vec![
            hlzf_artifact("w.hlzf", &dec.w)?,
            hlzf_artifact("frak_w.hlzf", &dec.frak_w)?,
            hlzf_artifact("frak_big_w.hlzf", &dec.frak_big_w)?,
            hlzf_artifact("w_large.hlzf", &dec.w_large)?,
            json_artifact("decomposition.json", &diagnostics)?,
        ],
        diagnostics,
    })
}

/// Sample points for a kernel study.
pub fn kernel_points(k: &KernelConfig) -> Vec<f64> {
    let m = (k.samples - 1) as f64;
    (0..k.samples)
        .map(|i| {
            let t = i as f64 / m;
            match k.spacing {
                Spacing::Linear => k.z_min + t * (k.z_max - k.z_min),
                Spacing::Log => k.z_min * (k.z_max / k.z_min).powf(t),
            }
        })
        .collect()
}

fn run_kernel(spec: &MultiplierSpec, k: &KernelConfig) -> Result<Output> {
    let zs = kernel_points(k);
    let values: Vec<Complex64> = zs.par_iter().map(|&z| kernel_k(spec, z)).collect::<helmlab::Result<_>>()?;
    let abs: Vec<f64> = values.iter().map(|v| v.norm()).collect();
    let mut flags = vec![false; zs.len()];
    for i in helmlab::normlab::local_maxima(&abs) {
        flags[i] = true;
    }
    let from = k.fit_from.unwrap_or(f64::NEG_INFINITY);
    let (fx, fy): (Vec<f64>, Vec<f64>) =
        (0..zs.len()).filter(|&i| flags[i] && zs[i] > 0.0 && zs[i] >= from && abs[i] > 0.0).map(|i| (zs[i], abs[i])).unzip();
    let fit = if fx.len() >= 3 { Some(fit_power_law(&fx, &fy)?) } else { None };
    let rows = (0..zs.len()).map(|i| {
        vec![num(zs[i]), num(values[i].re), num(values[i].im), num(abs[i]), u8::from(flags[i]).to_string()]
    });
    let diagnostics = json!({
        "multiplier": spec,
        "samples": zs.len(),
        "envelope_points": fx.len(),
        "envelope_fit": fit,
    });
    Ok(Output {
        artifacts: vec![
            csv_artifact("kernel.csv", &["z", "re", "im", "abs", "envelope_flag"], rows)?,
            json_artifact("kernel.json", &diagnostics)?,
        ],
        diagnostics,
    })
}

#[allow(clippy::too_many_arguments)]
fn run_scaling(
    grid: &GridSpec,
    spec: &MultiplierSpec,
    alpha: Q,
    pairs: &[ExponentPair],
    lambdas: &[f64],
    budget: usize,
    families: &[TestFamily],
) -> Result<Output> {
    let s = Complex64::new(spec.alpha, 0.0);
    let mut rows = Vec::new();
    let mut summary = Vec::new();
    for e in pairs {
        let gamma = predicted_gamma(e, spec.d as u32, alpha)?;
        let mut estimates = Vec::with_capacity(lambdas.len());
        for &l in lambdas {
            let op = FourierMultiplier::annulus(&spec.with_lambda(l), s, grid)?;
            estimates.push(estimate_norm_lower(&op, e.p(), e.q(), families, budget)?);
        }
        let norms: Vec<f64> = estimates.iter().map(|x| x.lower_bound).collect();
        let fit = fit_scaling_exponent(lambdas, &norms)?;
        for (l, est) in lambdas.iter().zip(&estimates) {
            rows.push(vec![
                num(*l),
                num(e.p()),
                num(e.q()),
                num(spec.alpha),
                num(est.lower_bound),
                num(gamma.gamma),
                num(fit.slope),
                num(fit.stderr),
            ]);
        }
        summary.push(json!({
            "inv_p": e.inv_p.to_string(),
            "inv_q": e.inv_q.to_string(),
            "prediction": gamma,
            "fit": fit,
            "within_prediction": fit.slope <= gamma.gamma + 0.1,
            "estimates": estimates,
        }));
    }
    let diagnostics = json!({ "grid": grid_json(grid), "multiplier": spec, "budget": budget, "pairs": summary });
    Ok(Output {
        artifacts: vec![
            csv_artifact(
                "scaling.csv",
                &["lambda", "p", "q", "alpha", "lower_bound", "predicted_gamma", "fitted_slope", "stderr"],
                rows,
            )?,
            json_artifact("scaling.json", &diagnostics)?,
        ],
        diagnostics,
    })
}

fn grid_json(grid: &GridSpec) -> Value {
    json!({ "points": grid.points(), "half_width": grid.half_width() })
}

fn run_counterexample(
    grid: &GridSpec,
    spec: &MultiplierSpec,
    id: &CounterexampleId,
    periodic: bool,
    points: &[f64],
) -> Result<Output> {
    let f = if periodic { periodic_counterexample(id, grid)? } else { make_counterexample(id, grid)? };
    let (image, method) = match id {
        CounterexampleId::LogFamily { .. } => {
            let pts: Vec<Vec<f64>> = points.iter().map(|&x| vec![x]).collect();
            (apply_t_at(spec, &f, &pts)?, "samples")
        }
        _ => (counterexample_image(id, spec, points)?, "exact_spectrum"),
    };
    let norm_exponent = if spec.alpha > 0.0 { 1.0 / spec.alpha } else { 2.0 };
    let mut diag = json!({
        "family": id,
        "multiplier": spec,
        "grid": grid_json(grid),
        "periodic": periodic,
        "image_method": method,
        "norm_exponent": norm_exponent,
        "norm": lp_norm(&f, norm_exponent)?,
    });
    match *id {
        CounterexampleId::LogFamily { k, alpha } => {
            if let Some(i) = points.iter().position(|&x| x == 0.0) {
                let growth = ((k as f64 + 1.0).ln()).powf(1.0 - alpha);
                diag["t_at_zero"] = json!(image[i].norm());
                diag["log_ratio"] = json!(image[i].norm() / growth);
            }
        }
        CounterexampleId::BetaFamily { beta } | CounterexampleId::EpsFamily { beta, .. } => {
            let (x, y): (Vec<f64>, Vec<f64>) =
                points.iter().zip(&image).filter(|(x, v)| **x > 0.0 && v.norm() > 0.0).map(|(x, v)| (*x, v.norm())).unzip();
            if x.len() >= 3 {
                diag["decay_fit"] = json!(fit_power_law(&x, &y)?);
                diag["predicted_slope"] = json!(spec.alpha + beta - 1.0);
            }
        }
    }
    let rows = points.iter().zip(&image).map(|(x, v)| vec![num(*x), num(v.re), num(v.im), num(v.norm())]);
    Ok(Output {
        artifacts: vec![
            hlzf_artifact("f.hlzf", &f)?,
            csv_artifact("image.csv", &["x", "re", "im", "abs"], rows)?,
            json_artifact("counterexample.json", &diag)?,
        ],
        diagnostics: diag,
    })
}

fn exponent(inv: Q) -> String {
    if inv == Q::from_integer(0) {
        "inf".into()
    } else {
        (Q::from_integer(1) / inv).to_string()
    }
}

fn run_regions(region: &RegionId, selfdual: bool, max_den: i64, gamma: Option<(u32, Q)>) -> Result<Output> {
    let values = farey(max_den);
    let mut artifacts = Vec::new();
    let mut diag = json!({ "region": region, "max_den": max_den, "selfdual": selfdual });
    if selfdual {
        let mut rows = Vec::new();
        let mut admissible: Vec<Q> = Vec::new();
        for &inv_q in values.iter().rev() {
            let e = ExponentPair::new(Q::from_integer(1) - inv_q, inv_q)?;
            let member = region_membership(&e, region)?;
            if member {
                admissible.push(inv_q);
            }
            rows.push(vec![
                e.inv_p.to_string(),
                e.inv_q.to_string(),
                exponent(e.inv_p),
                exponent(e.inv_q),
                u8::from(member).to_string(),
            ]);
        }
        diag["admissible_pairs"] = json!(admissible.len());
        if let (Some(lo), Some(hi)) = (admissible.first(), admissible.last()) {
            diag["q_min"] = json!(exponent(*lo));
            diag["q_max"] = json!(exponent(*hi));
        }
        artifacts.push(csv_artifact("regions.csv", &["inv_p", "inv_q", "p", "q", "member"], rows)?);
    } else {
        let mut header = vec!["inv_p\\inv_q".to_string()];
        header.extend(values.iter().map(|v| v.to_string()));
        let mut rows = Vec::with_capacity(values.len());
        let mut count = 0usize;
        for &inv_p in values.iter().rev() {
            let mut row = vec![inv_p.to_string()];
            for &inv_q in &values {
                let member = region_membership(&ExponentPair::new(inv_p, inv_q)?, region)?;
                count += usize::from(member);
                row.push(u8::from(member).to_string());
            }
            rows.push(row);
        }
        diag["members"] = json!(count);
        diag["pairs"] = json!(values.len() * values.len());
        let header: Vec<&str> = header.iter().map(String::as_str).collect();
        artifacts.push(csv_artifact("regions.csv", &header, rows)?);
    }
    if let Some((d, alpha)) = gamma {
        let mut rows = Vec::new();
        let (mut checked, mut failed) = (0usize, 0usize);
        for &inv_p in &values {
            for &inv_q in &values {
                let e = ExponentPair::new(inv_p, inv_q)?;
                if !region_membership(&e, region)? {
                    continue;
                }
                let Some(ok) = gamma_conditions(&e, d, alpha)? else { continue };
                let g = predicted_gamma(&e, d, alpha)?;
                checked += 1;
                failed += usize::from(!ok);
                rows.push(vec![
                    inv_p.to_string(),
                    inv_q.to_string(),
                    serde_json::to_value(g.case)?.as_str().unwrap_or_default().to_string(),
                    num(g.gamma),
                    u8::from(ok).to_string(),
                ]);
            }
        }
        diag["gamma_checked"] = json!(checked);
        diag["gamma_violations"] = json!(failed);
        artifacts.push(csv_artifact("gamma.csv", &["inv_p", "inv_q", "case", "gamma", "condition"], rows)?);
    }
    artifacts.push(json_artifact("regions.json", &diag)?);
    Ok(Output { artifacts, diagnostics: diag })
}

/// `ŵ(ξ) = amplitude · (1 - t²)³` on `|t| < 1`, `t = (|ξ| - centre)/width`.
pub fn band_profile(grid: &GridSpec, p: &ProfileConfig) -> Result<SampledField> {
    let strides = grid.strides();
    let mut hat = SampledField::zeros(grid.clone(), Domain::Frequency);
    for (flat, v) in hat.values.iter_mut().enumerate() {
        let r = (0..grid.ndim())
            .map(|a| grid.freq(a, (flat / strides[a]) % grid.points()[a]).powi(2))
            .sum::<f64>()
            .sqrt();
        let t = (r - p.centre) / p.width;
        if t.abs() < 1.0 {
            *v = Complex64::new(p.amplitude * (1.0 - t * t).powi(3), 0.0);
        }
    }
    Ok(dft(&hat, Direction::Inverse)?)
}

fn run_mp_check(grid: &GridSpec, params: &FrequencyParams, profiles: &[ProfileConfig]) -> Result<Output> {
    let mut rows = Vec::new();
    let mut results = Vec::new();
    for p in profiles {
        let w = band_profile(grid, p)?;
        let (row, entry) = match mountain_pass_certificate(&w, params) {
            Ok(c) => (
                vec![num(c.volume_term), num(c.interface_term), u8::from(c.positive).to_string(), "accepted".into()],
                json!({ "profile": p, "certificate": c }),
            ),
            Err(helmlab::Error::InvalidInput(msg)) => (
                vec![String::new(), String::new(), "0".into(), "rejected".into()],
                json!({ "profile": p, "rejected": msg }),
            ),
            Err(e) => return Err(e.into()),
        };
        let mut full = vec![num(p.centre), num(p.width), num(p.amplitude)];
        full.extend(row);
        rows.push(full);
        results.push(entry);
    }
    let diagnostics = json!({
        "lambda": params.lambda,
        "mu1": params.mu1(),
        "mu2": params.mu2(),
        "grid": grid_json(grid),
        "profiles": results,
    });
    Ok(Output {
        artifacts: vec![
            csv_artifact(
                "mp_check.csv",
                &["centre", "width", "amplitude", "volume_term", "interface_term", "positive", "status"],
                rows,
            )?,
            json_artifact("mp_check.json", &diagnostics)?,
        ],
        diagnostics,
    })
}
