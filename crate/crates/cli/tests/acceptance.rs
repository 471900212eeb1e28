//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero on any unexpected failure. A criterion listed as a known failure
//! still prints FAIL; it only passes the harness while its documented
//! failure pattern is reproduced exactly.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use helmlab::annulus::*;
use helmlab::normlab::*;
use helmlab::resolvent::*;
use helmlab::spectral::*;
use helmlab::Complex64;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

enum Verdict {
    Pass,
    Fail,
    /// Fails as documented; `true` when the documented pattern holds.
    KnownFail(bool),
}

struct Outcome {
    verdict: Verdict,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { verdict: if pass { Verdict::Pass } else { Verdict::Fail }, detail }
}

fn within(t: &Instant, limit: f64) -> (bool, f64) {
    let s = t.elapsed().as_secs_f64();
    (s <= limit, s)
}

fn bump(grid: &GridSpec, centre: &[f64], width: f64) -> SampledField {
    SampledField::from_fn(grid.clone(), Domain::Physical, |x| {
        let r2: f64 = x.iter().zip(centre).map(|(a, c)| (a - c).powi(2)).sum();
        Complex64::new((-r2 / (width * width)).exp(), 0.0)
    })
}

/// ChaCha20 noise (member `j` of the random family), optionally real and
/// under a Gaussian window.
fn noise(grid: &GridSpec, j: usize, real: bool, window: Option<f64>) -> SampledField {
    let (mut f, _) = TestFamily::Random { seed: 2024 }.member(grid, j).unwrap().unwrap();
    let pts: Vec<Vec<f64>> = (0..f.len()).map(|i| f.point(i)).collect();
    for (v, x) in f.values.iter_mut().zip(pts) {
        if real {
            v.im = 0.0;
        }
        if let Some(w) = window {
            *v *= (-x.iter().map(|c| c * c).sum::<f64>() / (w * w)).exp();
        }
    }
    f
}

fn diff_norm(a: &SampledField, b: &SampledField) -> f64 {
    lp_norm(&a.combine(ONE, b, -ONE).unwrap(), 2.0).unwrap()
}

fn rel(a: &SampledField, b: &SampledField) -> f64 {
    diff_norm(a, b) / lp_norm(b, 2.0).unwrap()
}

fn params(lambda: f64, eps: f64, v1: f64, v2: f64) -> FrequencyParams {
    FrequencyParams::new(lambda, eps, StepPotential::new(v1, v2).unwrap()).unwrap()
}

fn spread(v: &[f64]) -> f64 {
    v.iter().cloned().fold(0.0, f64::max) / v.iter().cloned().fold(f64::INFINITY, f64::min)
}

fn c1_constant_potential() -> Outcome {
    let grid = GridSpec::cube(2, 512, 8.0).unwrap();
    let f = bump(&grid, &[0.0, -0.3], 1.0);
    let mut pass = true;
    let mut parts = Vec::new();
    for eps in [0.5, 0.25, 0.125] {
        let t = Instant::now();
        let p = params(2.0, eps, 0.0, 0.0);
        let u = solve_perturbed(&f, &p).unwrap();
        let (fast, secs) = within(&t, 10.0);
        let err = rel(&u, &direct_multiplier_solution(&f, &p).unwrap());
        pass &= err <= 1e-9 && fast;
        parts.push(format!("ε={eps}: rel {err:.2e} in {secs:.1}s"));
    }
    outcome(pass, parts.join(", "))
}

fn c2_residual() -> Outcome {
    let p = params(5.0, 0.25, 1.0, 0.0);
    let t = Instant::now();
    let g2 = GridSpec::cube(2, 512, 8.0).unwrap();
    let f2 = bump(&g2, &[0.2, 0.5], 1.0);
    let r2 = residual(&solve_perturbed(&f2, &p).unwrap(), &f2, &p).unwrap() / lp_norm(&f2, 2.0).unwrap();
    let (fast2, s2) = within(&t, 30.0);
    let t = Instant::now();
    let g3 = GridSpec::cube(3, 128, 8.0).unwrap();
    let f3 = bump(&g3, &[0.0, 0.3, 0.5], 1.0);
    let r3 = residual(&solve_perturbed(&f3, &p).unwrap(), &f3, &p).unwrap() / lp_norm(&f3, 2.0).unwrap();
    let (fast3, s3) = within(&t, 600.0);
    outcome(
        r2 <= 1e-4 && r3 <= 1e-3 && fast2 && fast3,
        format!("n=2: {r2:.2e}·‖f‖ in {s2:.1}s; n=3: {r3:.2e}·‖f‖ in {s3:.1}s"),
    )
}

fn c3_one_sided() -> Outcome {
    let t = Instant::now();
    let grid = GridSpec::cube(2, 64, 4.0).unwrap();
    let k0 = grid.points()[1] / 2;
    let (mut split, mut orth) = (0.0f64, 0.0f64);
    for j in 0..50 {
        let f = noise(&grid, 2 * j, false, None);
        let mut g = noise(&grid, 2 * j + 1, false, None);
        let full = dft(&f, Direction::Forward).unwrap();
        let plus = one_sided_ft(&f, Side::Plus).unwrap();
        let minus = one_sided_ft(&f, Side::Minus).unwrap();
        split = split.max(diff_norm(&plus.combine(ONE, &minus, ONE).unwrap(), &full) / lp_norm(&full, 2.0).unwrap());
        // Orthogonality needs data vanishing on the shared line y = 0.
        let mut f0 = f.clone();
        for (i, (a, b)) in f0.values.iter_mut().zip(g.values.iter_mut()).enumerate() {
            if i % grid.points()[1] == k0 {
                *a = ZERO;
                *b = ZERO;
            }
        }
        let ip = inner(&one_sided_ft(&f0, Side::Plus).unwrap(), &one_sided_ft(&g, Side::Minus).unwrap()).unwrap();
        orth = orth.max(ip.norm() / (lp_norm(&f0, 2.0).unwrap() * lp_norm(&g, 2.0).unwrap()));
    }
    let (fast, s) = within(&t, 5.0);
    outcome(split <= 1e-12 && orth <= 1e-10 && fast, format!("split {split:.1e}, orthogonality {orth:.1e}, {s:.2}s"))
}

fn c4_conjugation() -> Outcome {
    let grid = GridSpec::cube(2, 32, 6.0).unwrap();
    let p = params(5.0, 0.0, 1.0, 0.0);
    let (mut dev, mut norm_dev) = (0.0f64, 0.0f64);
    for j in 0..20 {
        let f = noise(&grid, j, true, Some(1.5));
        let out = solve_lap(&f, &p, Branch::Outgoing).unwrap();
        let inc = solve_lap(&f, &p, Branch::Incoming).unwrap();
        dev = dev.max(rel(&inc, &out.conj()));
        let (a, b) = (lp_norm(&inc, 6.0).unwrap(), lp_norm(&out, 6.0).unwrap());
        norm_dev = norm_dev.max((a - b).abs() / b);
    }
    outcome(dev <= 1e-12 && norm_dev <= 1e-12, format!("conjugation {dev:.1e}, L⁶ norms {norm_dev:.1e}"))
}

fn c5_decomposition() -> Outcome {
    let t = Instant::now();
    let grid = GridSpec::cube(2, 128, 8.0).unwrap();
    let f = bump(&grid, &[0.3, 0.6], 0.7);
    let mut worst = 0.0f64;
    for eps in [0.5, 0.0] {
        let p = params(5.0, eps, 1.0, 0.0);
        let dec = frequency_decomposition(&f, &p).unwrap();
        worst = worst.max(rel(&dec.sum().unwrap(), &interface_correction(&f, &p).unwrap()));
    }
    let empty = frequency_decomposition(&f, &params(5.0, 0.5, 0.0, 0.0)).unwrap().frak_w.max_abs();
    let (fast, s) = within(&t, 30.0);
    outcome(worst <= 1e-10 && empty == 0.0 && fast, format!("sum vs correction {worst:.1e}, annulus block {empty:e} for μ1=μ2, {s:.1}s"))
}

fn c6_kernel_closed_form() -> Outcome {
    let t = Instant::now();
    let spec = MultiplierSpec::new(1, 1.0, 2.0, 0.0, 0.0).unwrap();
    let mut worst = 0.0f64;
    for j in 0..1000 {
        let z = 0.05 * (j as f64 + 0.5);
        let exact = ((2.0 * z).sin() - z.sin()) / (std::f64::consts::PI * z);
        worst = worst.max((kernel_k(&spec, z).unwrap() - exact).norm());
    }
    let (fast, s) = within(&t, 1.0);
    outcome(worst <= 1e-8 && fast, format!("max error {worst:.1e} at 1000 points, {s:.2}s"))
}

fn c7_kernel_asymptotics() -> Outcome {
    let t = Instant::now();
    let spec = MultiplierSpec::new(1, 1.0, 2.0, 0.5, 0.0).unwrap();
    // Envelope: max |K₀| over one period 2π at 16 log-spaced centres.
    let centres: Vec<f64> = (0..16).map(|i| 1e2 * 100f64.powf(i as f64 / 15.0)).collect();
    let env: Vec<f64> = centres
        .iter()
        .map(|&c| {
            (0..64)
                .map(|k| kernel_k(&spec, c + 2.0 * std::f64::consts::PI * k as f64 / 64.0).unwrap().norm())
                .fold(0.0, f64::max)
        })
        .collect();
    let slope = fit_power_law(&centres, &env).unwrap().slope;
    let plateau: Vec<f64> = [0.0f64, 1.0, 2.0, 4.0, 8.0, 16.0]
        .iter()
        .map(|&l| kernel_k(&spec.with_lambda(l), 0.0).unwrap().norm() * (1.0 + l).powf(2.0 - 2.0 * spec.alpha))
        .collect();
    let sp = spread(&plateau);
    let (fast, s) = within(&t, 60.0);
    outcome(
        (slope + 0.5).abs() <= 0.05 && sp <= 3.0 && fast,
        format!("envelope slope {slope:.3}, plateau·(1+λ)^(2-2α) spread {sp:.2}, {s:.1}s"),
    )
}

fn c8_oscillatory() -> Outcome {
    let t = Instant::now();
    let cs = [1e2, 1e3, 1e4];
    let first: Vec<f64> =
        cs.iter().map(|&c| osc_asymptotics(&|_| ONE, 0.5, c).unwrap().remainder * c).collect();
    let second: Vec<f64> = cs
        .iter()
        .map(|&c| osc_asymptotics(&|r| Complex64::new(1.0 + r * r, 0.0), 0.0, c).unwrap().remainder * c * c)
        .collect();
    let (s1, s2) = (spread(&first), spread(&second));
    let (fast, s) = within(&t, 10.0);
    outcome(s1 <= 3.0 && s2 <= 3.0 && fast, format!("remainder·c spread {s1:.2}, remainder·c² spread {s2:.2}, {s:.2}s"))
}

const LOG_RATIO_FLOOR: f64 = 0.05;

fn c9_counterexamples() -> Outcome {
    let t = Instant::now();
    let spec = MultiplierSpec::new(1, 1.0, 2.0, 0.5, 0.0).unwrap();
    let (mut norm_dev, mut min_ratio) = (0.0f64, f64::INFINITY);
    let mut ratios = Vec::new();
    for k in [10u64, 100, 1000, 10_000] {
        let l = (k as f64 + 2.0).max(16.0).log2().ceil().exp2();
        let g = GridSpec::cube(1, (4.0 * l) as usize, l).unwrap();
        let f = make_counterexample(&CounterexampleId::LogFamily { k, alpha: 0.5 }, &g).unwrap();
        norm_dev = norm_dev.max((lp_norm(&f, 2.0).unwrap() - 1.0).abs());
        let v = apply_t_at(&spec, &f, &[vec![0.0]]).unwrap()[0];
        let r = v.norm() / ((k as f64 + 1.0).ln()).powf(0.5);
        min_ratio = min_ratio.min(r);
        ratios.push(format!("{r:.3}"));
    }
    let beta = 0.3;
    let xs: Vec<f64> = (0..40).map(|k| 100.0 * 10f64.powf(k as f64 / 39.0)).collect();
    let tf = counterexample_image(&CounterexampleId::BetaFamily { beta }, &spec, &xs).unwrap();
    let slope = fit_power_law(&xs, &tf.iter().map(|v| v.norm()).collect::<Vec<_>>()).unwrap().slope;
    let target = spec.alpha + beta - 1.0;
    let (fast, s) = within(&t, 120.0);
    outcome(
        norm_dev <= 1e-6 && min_ratio >= LOG_RATIO_FLOOR && (slope - target).abs() <= 0.07 && fast,
        format!(
            "‖f_k‖ dev {norm_dev:.1e}, |Tf_k(0)|/ln^(1-α) = [{}] ≥ {LOG_RATIO_FLOOR}, blow-up slope {slope:.3} vs {target:.2}, {s:.1}s",
            ratios.join(", ")
        ),
    )
}

fn sweep(grid: &GridSpec, spec: &MultiplierSpec, pair: &ExponentPair, lambdas: &[f64], budget: usize) -> (f64, f64) {
    let alpha = rational_from_f64(spec.alpha).unwrap();
    let gamma = predicted_gamma(pair, spec.d as u32, alpha).unwrap().gamma;
    let fams = [TestFamily::GaussianBumps, TestFamily::WavePackets { radius: spec.a }];
    let s = Complex64::new(spec.alpha, 0.0);
    let norms: Vec<f64> = lambdas
        .iter()
        .map(|&l| {
            let op = FourierMultiplier::annulus(&spec.with_lambda(l), s, grid).unwrap();
            estimate_norm_lower(&op, pair.p(), pair.q(), &fams, budget).unwrap().lower_bound
        })
        .collect();
    (fit_scaling_exponent(lambdas, &norms).unwrap().slope, gamma)
}

fn c10_scaling() -> Outcome {
    let t = Instant::now();
    let lambdas: Vec<f64> = (0..8).map(|k| 2f64.powi(k)).collect();
    let mut pass = true;
    let mut parts = Vec::new();
    let g1 = GridSpec::cube(1, 16384, 2048.0).unwrap();
    let s1 = MultiplierSpec::new(1, 1.0, 2.0, 0.5, 0.0).unwrap();
    for (p, q) in [("4/3", "4"), ("6/5", "6"), ("1", "inf")] {
        let (slope, gamma) = sweep(&g1, &s1, &ExponentPair::parse(p, q).unwrap(), &lambdas, 40);
        pass &= slope <= gamma + 0.1;
        parts.push(format!("d=1 ({p},{q}): {slope:.3} ≤ {gamma:.2}+0.1"));
    }
    let g2 = GridSpec::cube(2, 256, 64.0).unwrap();
    let s2 = MultiplierSpec::new(2, 1.0, 2.0, 0.25, 0.0).unwrap();
    let e = ExponentPair::new(Q::new(7, 8), Q::new(1, 8)).unwrap();
    let case = predicted_gamma(&e, 2, Q::new(1, 4)).unwrap().case;
    let (slope, gamma) = sweep(&g2, &s2, &e, &lambdas, 24);
    pass &= slope <= gamma + 0.1 && case == GammaCase::A;
    parts.push(format!("d=2 (8/7,8) case {case:?}: {slope:.3} ≤ {gamma:.2}+0.1"));
    let (fast, s) = within(&t, 600.0);
    outcome(pass && fast, format!("{}, {s:.1}s", parts.join("; ")))
}

/// Pairs of the scan violating the γ guarantee, and pairs checked.
fn gamma_violations(alpha: Q, farey40: &[Q]) -> (usize, usize) {
    let region = RegionId::DAlphaAnnulus { d: 2, alpha };
    let (mut bad, mut total) = (0, 0);
    for &a in farey40 {
        for &b in farey40 {
            let e = ExponentPair::new(a, b).unwrap();
            if region_membership(&e, &region).unwrap() {
                if let Some(ok) = gamma_conditions(&e, 2, alpha).unwrap() {
                    total += 1;
                    bad += usize::from(!ok);
                }
            }
        }
    }
    (bad, total)
}

fn selfdual_qs(region: RegionId, farey40: &[Q]) -> Vec<Q> {
    farey40
        .iter()
        .filter(|&&b| region_membership(&ExponentPair::new(Q::from_integer(1) - b, b).unwrap(), &region).unwrap())
        .copied()
        .collect()
}

fn c11_regions() -> Outcome {
    let t = Instant::now();
    let f = farey(40);
    let (mut subset3, mut equal2) = (true, true);
    for &a in &f {
        for &b in &f {
            let e = ExponentPair::new(a, b).unwrap();
            let m = |r| region_membership(&e, &r).unwrap();
            subset3 &= !m(RegionId::DTildeN { n: 3 }) || m(RegionId::DN { n: 3 });
            equal2 &= m(RegionId::DTildeN { n: 2 }) == m(RegionId::DN { n: 2 });
        }
    }
    // n = 3: 1/q from 1/6 to 1/4. n = 2: every finite q ≥ 6, never ∞.
    let q3 = selfdual_qs(RegionId::DTildeN { n: 3 }, &f);
    let sd3 = q3.first() == Some(&Q::new(1, 6)) && q3.last() == Some(&Q::new(1, 4));
    let q2 = selfdual_qs(RegionId::DTildeN { n: 2 }, &f);
    let sd2 = q2 == f.iter().copied().filter(|&b| b > Q::from_integer(0) && b <= Q::new(1, 6)).collect::<Vec<_>>();
    let scans: Vec<(Q, usize, usize)> =
        [Q::new(1, 10), Q::new(1, 4), Q::new(1, 2), Q::new(3, 4)].iter().map(|&a| {
            let (bad, total) = gamma_violations(a, &f);
            (a, bad, total)
        }).collect();
    let gamma_ok = scans.iter().all(|s| s.1 == 0);
    // Documented pattern: violations for α ∈ {1/10, 1/4}, none for {1/2, 3/4}.
    let pattern = scans.iter().all(|&(a, bad, _)| (bad > 0) == (a < Q::new(1, 2)));
    let (fast, s) = within(&t, 30.0);
    let rest = subset3 && equal2 && sd3 && sd2 && fast;
    let detail = format!(
        "D̃⊆D (n=3) {subset3}, D̃=D (n=2) {equal2}, selfdual q∈[4,6] {sd3}, q∈[6,∞) {sd2}; γ conditions violated {}; {s:.1}s",
        scans.iter().map(|(a, b, t)| format!("α={a}: {b}/{t}")).collect::<Vec<_>>().join(", ")
    );
    let verdict = match (rest, gamma_ok) {
        (false, _) => Verdict::Fail,
        (true, true) => Verdict::Pass,
        (true, false) => Verdict::KnownFail(pattern),
    };
    Outcome { verdict, detail }
}

fn c12_mountain_pass() -> Outcome {
    let t = Instant::now();
    let p = params(2.0, 0.0, 1.0, 0.0);
    let grid = GridSpec::cube(1, 512, 32.0).unwrap();
    let band = |centre: f64, width: f64| {
        let mut hat = SampledField::zeros(grid.clone(), Domain::Frequency);
        for (k, v) in hat.values.iter_mut().enumerate() {
            let tt = (grid.freq(0, k).abs() - centre) / width;
            if tt.abs() < 1.0 {
                *v = Complex64::new((1.0 - tt * tt).powi(3), 0.0);
            }
        }
        dft(&hat, Direction::Inverse).unwrap()
    };
    let mut positive = 0;
    for (c, w) in [(2.0, 0.5), (2.5, 0.8), (3.0, 1.0), (4.0, 1.5), (5.0, 0.25)] {
        let cert = mountain_pass_certificate(&band(c, w), &p).unwrap();
        positive += usize::from(cert.volume_term > 0.0 && cert.interface_term > 0.0 && cert.positive);
    }
    let rejected = matches!(mountain_pass_certificate(&band(1.0, 0.5), &p), Err(helmlab::Error::InvalidInput(_)));
    let (fast, s) = within(&t, 10.0);
    outcome(positive == 5 && rejected && fast, format!("{positive}/5 certificates positive, inadmissible rejected {rejected}, {s:.2}s"))
}

fn c13_herglotz() -> Outcome {
    let t = Instant::now();
    let p = params(1.0, 0.0, 0.0, 0.0);
    let mut fitted = Vec::new();
    for n in [256usize, 512, 1024] {
        let grid = GridSpec::cube(2, n, 8.0).unwrap();
        let f = SampledField::from_fn(grid.clone(), Domain::Physical, |q| {
            Complex64::new((-((q[0] - 0.3).powi(2) + (q[1] - 0.4).powi(2))).exp() * (1.0 + 0.5 * q[0]), 0.0)
        });
        let u = solve_lap(&f, &p, Branch::Outgoing).unwrap();
        let h = herglotz(&f, p.mu1()).unwrap();
        let num: f64 = pairwise_sum(&u.values.iter().zip(&h.values).map(|(a, b)| a.im * b.re).collect::<Vec<_>>());
        let den: f64 = pairwise_sum(&h.values.iter().map(|b| b.re * b.re).collect::<Vec<_>>());
        fitted.push(num / den);
    }
    let dev = fitted.iter().map(|c| (c / fitted[0] - 1.0).abs()).fold(0.0, f64::max);
    let (fast, s) = within(&t, 120.0);
    outcome(
        dev <= 0.01 && fast,
        format!("constants {:?} (π/2μ = {:.6}), spread {dev:.1e}, {s:.1}s", fitted.iter().map(|c| format!("{c:.6}")).collect::<Vec<_>>(), std::f64::consts::PI / 2.0),
    )
}

const CONFIGS: [(&str, &str); 7] = [
    ("solve", "[grid]\nndim = 2\nn = 64\nhalf_width = 8.0\n[physics]\nlambda = 5.0\neps = 0.25\nv1 = 1.0\nv2 = 0.0\n"),
    ("decompose", "[grid]\nndim = 2\nn = 64\nhalf_width = 8.0\n[physics]\nlambda = 5.0\neps = 0.5\nv1 = 1.0\nv2 = 0.0\n"),
    ("kernel", "[multiplier]\nd = 1\na = 1.0\nb = 2.0\nalpha = 0.5\n[kernel]\nz_min = 1.0\nz_max = 200.0\nsamples = 200\nspacing = \"log\"\n"),
    (
        "scaling",
        "seed = 11\n[grid]\nndim = 1\nn = 512\nhalf_width = 64.0\n[multiplier]\nd = 1\na = 1.0\nb = 2.0\nalpha = 0.5\n\
         [scaling]\npairs = [[\"4/3\", \"4\"], [\"1\", \"inf\"]]\nlambdas = [1.0, 2.0, 4.0]\nbudget = 12\n\
         families = [{ family = \"random\" }, { family = \"gaussian_bumps\" }]\n",
    ),
    ("counterexample", "[counterexample]\nfamily = \"log_family\"\nk = 10\nalpha = 0.5\npoints = [0.0, 1.0, 2.5]\n"),
    ("regions", "[regions]\nregion = \"D_alpha\"\nn = 2\nalpha = \"1/4\"\nmax_den = 16\n"),
    ("mp-check", ""),
];

fn run_cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_helmlab")).args(args).output().expect("running helmlab")
}

/// All output files except the manifest, plus the manifest's checksum list.
fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.file_name().unwrap() != "manifest.json")
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
        .collect();
    files.sort();
    let manifest: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.join("manifest.json")).unwrap()).unwrap();
    files.push(("manifest.outputs".into(), manifest["outputs"].to_string().into_bytes()));
    files
}

fn c14_determinism() -> Outcome {
    let tmp = tempfile::tempdir().unwrap();
    let mut mismatches = Vec::new();
    let mut files = 0;
    for (cmd, cfg) in CONFIGS {
        let cfg_path = tmp.path().join(format!("{cmd}.toml"));
        std::fs::write(&cfg_path, cfg).unwrap();
        let mut reference = None;
        for (run, threads) in [(0, "1"), (1, "1"), (2, "4"), (3, "8")] {
            let out = tmp.path().join(format!("{cmd}-{run}"));
            let o = run_cli(&[
                cmd,
                "--config",
                cfg_path.to_str().unwrap(),
                "--out",
                out.to_str().unwrap(),
                "--threads",
                threads,
            ]);
            if !o.status.success() {
                mismatches.push(format!("{cmd} failed: {}", String::from_utf8_lossy(&o.stderr).trim()));
                break;
            }
            let snap = snapshot(&out);
            match &reference {
                None => {
                    files += snap.len() - 1;
                    reference = Some(snap);
                }
                Some(r) if *r != snap => mismatches.push(format!("{cmd} run {run} (threads {threads})")),
                Some(_) => {}
            }
        }
    }
    // Validation errors: exit 2 with one line naming the key.
    let bad = tmp.path().join("bad.toml");
    std::fs::write(&bad, "[grid]\nndim = 2\nn = 64\nhalf_width = 8.0\nhalfwidth = 3.0\n").unwrap();
    let o = run_cli(&["solve", "--config", bad.to_str().unwrap(), "--out", tmp.path().join("bad").to_str().unwrap()]);
    let stderr = String::from_utf8_lossy(&o.stderr);
    let strict = o.status.code() == Some(2) && stderr.lines().count() == 1 && stderr.contains("`halfwidth`");
    outcome(
        mismatches.is_empty() && strict,
        format!(
            "{files} files byte-identical over 2 runs × threads {{1,4,8}}{}; unknown key → exit {:?} {strict}",
            if mismatches.is_empty() { String::new() } else { format!("; mismatches: {}", mismatches.join(", ")) },
            o.status.code()
        ),
    )
}

/// `regions --region D_tilde --n 3 --selfdual` through the binary.
fn cli_selfdual_range() -> bool {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("r");
    let o = run_cli(&["regions", "--region", "D_tilde", "--n", "3", "--selfdual", "--out", out.to_str().unwrap()]);
    if !o.status.success() {
        return false;
    }
    let mut rdr = csv::Reader::from_path(out.join("regions.csv")).unwrap();
    let qs: Vec<f64> = rdr
        .records()
        .map(|r| r.unwrap())
        .filter(|r| &r[4] == "1")
        .map(|r| {
            let q = &r[3];
            match q.split_once('/') {
                Some((a, b)) => a.parse::<f64>().unwrap() / b.parse::<f64>().unwrap(),
                None => q.parse().unwrap(),
            }
        })
        .collect();
    let lo = qs.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = qs.iter().cloned().fold(0.0, f64::max);
    lo == 4.0 && hi == 6.0
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 14] = [
        ("constant-potential reduction", c1_constant_potential),
        ("PDE residual", c2_residual),
        ("one-sided transforms", c3_one_sided),
        ("conjugation", c4_conjugation),
        ("decomposition consistency", c5_decomposition),
        ("kernel closed form", c6_kernel_closed_form),
        ("kernel asymptotics", c7_kernel_asymptotics),
        ("oscillatory asymptotics", c8_oscillatory),
        ("counterexamples", c9_counterexamples),
        ("scaling laws", c10_scaling),
        ("region predicates", c11_regions),
        ("mountain-pass certificate", c12_mountain_pass),
        ("Herglotz identity", c13_herglotz),
        ("determinism", c14_determinism),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut unexpected = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        if only.is_some_and(|k| k != i + 1) {
            continue;
        }
        let mut o = check();
        if i + 1 == 11 && !cli_selfdual_range() {
            o.verdict = Verdict::Fail;
            o.detail.push_str("; CLI selfdual CSV range wrong");
        }
        let (tag, note) = match o.verdict {
            Verdict::Pass => ("PASS", ""),
            Verdict::Fail => {
                unexpected += 1;
                ("FAIL", "")
            }
            Verdict::KnownFail(true) => ("FAIL", " [known: γ guarantee sub-check, documented pattern reproduced]"),
            Verdict::KnownFail(false) => {
                unexpected += 1;
                ("FAIL", " [known failure, but the documented pattern changed]")
            }
        };
        println!("{tag} criterion {:>2} ({name}): {}{note}", i + 1, o.detail);
    }
    if unexpected > 0 {
        eprintln!("{unexpected} criteria failed unexpectedly");
        std::process::exit(1);
    }
}
