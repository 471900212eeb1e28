use helmlab::resolvent::*;
use helmlab::spectral::*;
use helmlab::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn step(lambda: f64, eps: f64) -> FrequencyParams {
    FrequencyParams::new(lambda, eps, StepPotential::new(1.0, 0.0).unwrap()).unwrap()
}

fn constant(lambda: f64, eps: f64) -> FrequencyParams {
    FrequencyParams::new(lambda, eps, StepPotential::new(0.0, 0.0).unwrap()).unwrap()
}

fn bump(grid: &GridSpec, center: [f64; 2], width: f64) -> SampledField {
    SampledField::from_fn(grid.clone(), Domain::Physical, |p| {
        let r2 = (p[0] - center[0]).powi(2) + (p[1] - center[1]).powi(2);
        Complex64::new((-r2 / (width * width)).exp(), 0.0)
    })
}

fn random_field(grid: &GridSpec, seed: u64, real: bool) -> SampledField {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let values = (0..grid.len())
        .map(|_| {
            let re = rng.gen_range(-1.0..1.0);
            let im = if real { 0.0 } else { rng.gen_range(-1.0..1.0) };
            Complex64::new(re, im)
        })
        .collect();
    SampledField::new(grid.clone(), values, Domain::Physical).unwrap()
}

/// Smooth random data: a few Gaussians with random centres, widths and
/// complex amplitudes.
fn random_smooth(grid: &GridSpec, seed: u64, real: bool) -> SampledField {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let blobs: Vec<(f64, f64, f64, Complex64)> = (0..3)
        .map(|_| {
            let amp = Complex64::new(rng.gen_range(-1.0..1.0), if real { 0.0 } else { rng.gen_range(-1.0..1.0) });
            (rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5), rng.gen_range(0.6..1.2), amp)
        })
        .collect();
    SampledField::from_fn(grid.clone(), Domain::Physical, |p| {
        blobs
            .iter()
            .map(|(cx, cy, w, a)| a * (-((p[0] - cx).powi(2) + (p[1] - cy).powi(2)) / (w * w)).exp())
            .sum()
    })
}

fn diff_norm(a: &SampledField, b: &SampledField, p: f64) -> f64 {
    lp_norm(&a.combine(ONE, b, -ONE).unwrap(), p).unwrap()
}

fn rel(a: &SampledField, b: &SampledField) -> f64 {
    diff_norm(a, b, 2.0) / lp_norm(b, 2.0).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn one_sided_transforms_split_and_are_orthogonal(seed in any::<u64>(), n in prop::sample::select(vec![16usize, 32])) {
        let grid = GridSpec::cube(2, n, 3.0).unwrap();
        let f = random_field(&grid, seed, false);
        let g = random_field(&grid, seed ^ 0x5555, false);
        let plus = one_sided_ft(&f, Side::Plus).unwrap();
        let minus = one_sided_ft(&f, Side::Minus).unwrap();
        let full = dft(&f, Direction::Forward).unwrap();
        let sum = plus.combine(ONE, &minus, ONE).unwrap();
        prop_assert!(diff_norm(&sum, &full, 2.0) <= 1e-12 * lp_norm(&full, 2.0).unwrap());
        // The y = 0 line is shared, so the two pieces are orthogonal only
        // when it carries no data.
        let mut f0 = f.clone();
        let mut g0 = g.clone();
        for (i, (a, b)) in f0.values.iter_mut().zip(g0.values.iter_mut()).enumerate() {
            if i % n == n / 2 {
                *a = Complex64::new(0.0, 0.0);
                *b = Complex64::new(0.0, 0.0);
            }
        }
        let ip = inner(&one_sided_ft(&f0, Side::Plus).unwrap(), &one_sided_ft(&g0, Side::Minus).unwrap()).unwrap();
        prop_assert!(ip.norm() <= 1e-10 * lp_norm(&f0, 2.0).unwrap() * lp_norm(&g0, 2.0).unwrap());
    }

    #[test]
    fn perturbed_solution_is_linear(seed in any::<u64>(), a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let grid = GridSpec::cube(2, 32, 6.0).unwrap();
        let f = random_smooth(&grid, seed, false);
        let g = random_smooth(&grid, seed.wrapping_add(1), false);
        let p = step(5.0, 0.25);
        let (ca, cb) = (Complex64::new(a, 0.3), Complex64::new(b, -0.7));
        let lhs = solve_perturbed(&f.combine(ca, &g, cb).unwrap(), &p).unwrap();
        let rhs = solve_perturbed(&f, &p).unwrap().combine(ca, &solve_perturbed(&g, &p).unwrap(), cb).unwrap();
        prop_assert!(diff_norm(&lhs, &rhs, 2.0) <= 1e-12 * lp_norm(&rhs, 2.0).unwrap().max(1e-300));
    }
}

#[test]
fn one_sided_transform_of_upper_data_has_no_lower_part() {
    let grid = GridSpec::cube(2, 32, 4.0).unwrap();
    let f = SampledField::from_fn(grid, Domain::Physical, |p| {
        Complex64::new(if p[1] > 0.0 { (-(p[0] * p[0]) - (p[1] - 2.0).powi(2)).exp() } else { 0.0 }, 0.0)
    });
    assert_eq!(one_sided_ft(&f, Side::Minus).unwrap().max_abs(), 0.0);
}

#[test]
fn limiting_solution_is_linear() {
    let grid = GridSpec::cube(2, 32, 6.0).unwrap();
    let f = random_smooth(&grid, 3, false);
    let g = random_smooth(&grid, 4, false);
    let p = step(5.0, 0.0);
    let (ca, cb) = (Complex64::new(1.5, 0.3), Complex64::new(-0.5, 2.0));
    let lhs = solve_lap(&f.combine(ca, &g, cb).unwrap(), &p, Branch::Outgoing).unwrap();
    let rhs = solve_lap(&f, &p, Branch::Outgoing)
        .unwrap()
        .combine(ca, &solve_lap(&g, &p, Branch::Outgoing).unwrap(), cb)
        .unwrap();
    assert!(diff_norm(&lhs, &rhs, 2.0) <= 1e-12 * lp_norm(&rhs, 2.0).unwrap());
}

#[test]
fn zero_data_give_zero_solutions() {
    let grid = GridSpec::cube(2, 32, 4.0).unwrap();
    let z = SampledField::zeros(grid, Domain::Physical);
    assert_eq!(solve_perturbed(&z, &step(5.0, 0.5)).unwrap().max_abs(), 0.0);
    assert_eq!(solve_lap(&z, &step(5.0, 0.0), Branch::Outgoing).unwrap().max_abs(), 0.0);
    assert_eq!(herglotz(&z, 1.0).unwrap().max_abs(), 0.0);
    let t = boundary_traces(&z, &step(5.0, 0.0)).unwrap();
    assert!(t.g_plus.iter().chain(&t.g_minus).all(|v| *v == Complex64::new(0.0, 0.0)));
    let d = interface_data(&t, &step(5.0, 0.5)).unwrap();
    assert!(d.trace0.iter().chain(&d.trace1).all(|v| *v == Complex64::new(0.0, 0.0)));
}

#[test]
fn incoming_is_the_conjugate_of_outgoing_for_real_data() {
    let grid = GridSpec::cube(2, 32, 6.0).unwrap();
    let p = step(5.0, 0.0);
    for seed in 0..3 {
        let f = random_smooth(&grid, seed, true);
        let out = solve_lap(&f, &p, Branch::Outgoing).unwrap();
        let inc = solve_lap(&f, &p, Branch::Incoming).unwrap();
        assert_eq!(inc.values, out.conj().values);
        assert_eq!(lp_norm(&inc, 6.0).unwrap(), lp_norm(&out, 6.0).unwrap());
        assert_eq!(residual(&inc, &f, &p).unwrap(), residual(&out, &f, &p).unwrap());
    }
}

#[test]
fn perturbed_solution_satisfies_the_equation() {
    let grid = GridSpec::cube(2, 256, 8.0).unwrap();
    let f = bump(&grid, [0.2, 0.5], 1.0);
    let p = step(5.0, 0.5);
    let u = solve_perturbed(&f, &p).unwrap();
    assert!(residual(&u, &f, &p).unwrap() <= 1e-4 * lp_norm(&f, 2.0).unwrap());
}

#[test]
fn limiting_solution_satisfies_the_equation() {
    let grid = GridSpec::cube(2, 256, 8.0).unwrap();
    let f = bump(&grid, [0.3, 0.4], 1.0);
    let p = step(5.0, 0.0);
    let u = solve_lap(&f, &p, Branch::Outgoing).unwrap();
    assert!(residual(&u, &f, &p).unwrap() <= 1e-4 * lp_norm(&f, 2.0).unwrap());
}

#[test]
fn three_dimensional_solution_satisfies_the_equation() {
    let grid = GridSpec::cube(3, 64, 6.0).unwrap();
    let f = SampledField::from_fn(grid.clone(), Domain::Physical, |p| {
        Complex64::new((-(p[0] * p[0] + p[1] * p[1] + (p[2] - 0.4).powi(2))).exp(), 0.0)
    });
    let p = step(5.0, 0.25);
    let u = solve_perturbed(&f, &p).unwrap();
    assert!(residual(&u, &f, &p).unwrap() <= 1e-3 * lp_norm(&f, 2.0).unwrap());
}

#[test]
fn constant_potential_oracle() {
    let grid = GridSpec::cube(2, 512, 8.0).unwrap();
    let f = bump(&grid, [0.0, -0.3], 1.0);
    for eps in [0.5, 0.25] {
        let p = FrequencyParams::new(2.0, eps, StepPotential::new(0.0, 0.0).unwrap()).unwrap();
        let u = solve_perturbed(&f, &p).unwrap();
        let v = direct_multiplier_solution(&f, &p).unwrap();
        assert!(rel(&u, &v) <= 1e-9, "eps={eps}: {}", rel(&u, &v));
    }
}

#[test]
fn absorption_limit_is_approached_monotonically() {
    let grid = GridSpec::cube(2, 64, 8.0).unwrap();
    let f = bump(&grid, [0.0, 0.4], 1.0);
    let p = step(5.0, 0.0);
    let u0 = solve_lap(&f, &p, Branch::Outgoing).unwrap();
    let mut prev = f64::INFINITY;
    for k in 1..=8 {
        let u = solve_perturbed_with(&f, &p.with_eps(0.5f64.powi(k)).unwrap(), Evaluation::Continuum).unwrap();
        let d = diff_norm(&u, &u0, 6.0);
        assert!(d <= prev * 1.05, "k={k}: {d} after {prev}");
        prev = d;
    }
}

#[test]
fn traces_of_an_exponential_profile() {
    // f = w(x) e^{-y} 1_{y>0} with ŵ supported in |ξ| > μ₂.
    let grid = GridSpec::new(vec![128, 256], vec![16.0, 24.0]).unwrap();
    let p = step(2.0, 0.0);
    let mu2 = p.mu2();
    let w = |x: f64| (-(x * x) / 2.0).exp() * (3.0 * x).cos();
    let xgrid = grid.leading(1).unwrap();
    let wfield = SampledField::from_fn(xgrid.clone(), Domain::Physical, |x| Complex64::new(w(x[0]), 0.0));
    let mut what = dft(&wfield, Direction::Forward).unwrap();
    for (k, v) in what.values.iter_mut().enumerate() {
        if xgrid.freq(0, k).abs() <= mu2 {
            *v = Complex64::new(0.0, 0.0);
        }
    }
    let wband = dft(&what, Direction::Inverse).unwrap();
    let ny = grid.points()[1];
    let mut f = SampledField::zeros(grid.clone(), Domain::Physical);
    for (i, v) in f.values.iter_mut().enumerate() {
        let y = grid.coord(1, i % ny);
        if y > 0.0 {
            *v = wband.values[i / ny] * (-y).exp();
        }
    }
    let t = boundary_traces(&f, &p).unwrap();
    let scale = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
    for k in 0..xgrid.len() {
        assert_eq!(t.g_minus[k], Complex64::new(0.0, 0.0));
        let xi = xgrid.freq(0, k).abs();
        if xi > mu2 {
            let expected = what.values[k] * scale / (1.0 + nu(xi, 1, &p).norm());
            assert!((t.g_plus[k] - expected).norm() <= 1e-8, "ξ={xi}");
        }
    }
}

#[test]
fn even_data_have_equal_traces_for_a_constant_potential() {
    let grid = GridSpec::cube(2, 64, 8.0).unwrap();
    let f = SampledField::from_fn(grid.clone(), Domain::Physical, |p| {
        Complex64::new((-(p[0] - 0.5).powi(2) - p[1] * p[1]).exp() * (1.0 + p[1] * p[1]), 0.0)
    });
    let t = boundary_traces(&f, &constant(2.0, 0.0)).unwrap();
    for (a, b) in t.g_plus.iter().zip(&t.g_minus) {
        assert!((a - b).norm() <= 1e-12);
    }
}

#[test]
fn interface_data_invert_the_trace_system() {
    let grid = GridSpec::cube(2, 64, 8.0).unwrap();
    let f = random_smooth(&grid, 11, false);
    let p = step(5.0, 0.3);
    let t = boundary_traces(&f, &p).unwrap();
    let d = interface_data(&t, &p).unwrap();
    let s = (2.0 * std::f64::consts::PI).sqrt();
    let i = Complex64::new(0.0, 1.0);
    for k in 0..t.g_plus.len() {
        let xi = t.grid.freq(0, k).abs();
        let (n1, n2) = (nu(xi, 1, &p), nu(xi, 2, &p));
        let r1 = -i * n1 * d.trace0[k] + d.trace1[k] - s * t.g_plus[k];
        let r2 = -i * n2 * d.trace0[k] - d.trace1[k] - s * t.g_minus[k];
        let scale = t.g_plus[k].norm() + t.g_minus[k].norm() + 1e-300;
        assert!(r1.norm() <= 1e-12 * s * scale.max(1e-12) && r2.norm() <= 1e-12 * s * scale.max(1e-12));
    }
    // Constant potential, data in y > 0: trace0 = √(2π) i g₊ / (2ν).
    let q = constant(2.0, 0.3);
    let upper = SampledField::from_fn(grid.clone(), Domain::Physical, |p| {
        Complex64::new(if p[1] > 0.0 { (-(p[0] * p[0]) - (p[1] - 2.5).powi(2)).exp() } else { 0.0 }, 0.0)
    });
    let t = boundary_traces(&upper, &q).unwrap();
    let d = interface_data(&t, &q).unwrap();
    for k in 0..t.g_plus.len() {
        let xi = t.grid.freq(0, k).abs();
        let expected = s * i * t.g_plus[k] / (2.0 * nu(xi, 1, &q));
        assert!((d.trace0[k] - expected).norm() <= 1e-12 * (1.0 + expected.norm()));
    }
}

#[test]
fn decomposition_blocks() {
    let grid = GridSpec::cube(2, 128, 8.0).unwrap();
    let f = bump(&grid, [0.3, 0.6], 0.7);
    let p = step(5.0, 0.5);
    let dec = frequency_decomposition(&f, &p).unwrap();
    let total = interface_correction(&f, &p).unwrap();
    assert!(rel(&dec.sum().unwrap(), &total) <= 1e-10);
    // Per-line lateral support of each block.
    let xgrid = grid.leading(1).unwrap();
    let ny = grid.points()[1];
    let (mu1, mu2) = (p.mu1(), p.mu2());
    let checks: [(&SampledField, Box<dyn Fn(f64) -> bool>); 4] = [
        (&dec.w, Box::new(move |xi| xi <= mu2)),
        (&dec.frak_w, Box::new(move |xi| xi > mu1 && xi <= mu2)),
        (&dec.frak_big_w, Box::new(move |xi| xi > mu1 && xi <= mu1 + mu2)),
        (&dec.w_large, Box::new(move |xi| xi > mu1 + mu2)),
    ];
    for (block, allowed) in checks.iter() {
        for k in 0..ny {
            let line: Vec<Complex64> = (0..xgrid.len()).map(|j| block.values[j * ny + k]).collect();
            let lf = SampledField::new(xgrid.clone(), line, Domain::Physical).unwrap();
            let hat = dft(&lf, Direction::Forward).unwrap();
            let (mut inside, mut all) = (0.0, 0.0);
            for (j, v) in hat.values.iter().enumerate() {
                all += v.norm_sqr();
                if !allowed(xgrid.freq(0, j).abs()) {
                    inside += v.norm_sqr();
                }
            }
            assert!(inside <= 1e-20 * all.max(1e-300), "leakage {}", (inside / all).sqrt());
        }
    }
    // Empty annulus for a constant potential.
    let dec = frequency_decomposition(&f, &constant(5.0, 0.5)).unwrap();
    assert_eq!(dec.frak_w.max_abs(), 0.0);
}

#[test]
fn decomposition_at_zero_absorption() {
    let grid = GridSpec::cube(2, 64, 8.0).unwrap();
    let f = bump(&grid, [0.3, 0.6], 0.7);
    let p = step(5.0, 0.0);
    let dec = frequency_decomposition(&f, &p).unwrap();
    let total = interface_correction(&f, &p).unwrap();
    assert!(rel(&dec.sum().unwrap(), &total) <= 1e-10);
    assert_eq!(frequency_decomposition(&f, &constant(5.0, 0.0)).unwrap().frak_w.max_abs(), 0.0);
}

#[test]
fn nu_sandwich_and_multiplier_decay() {
    let p = step(5.0, 0.0);
    let mut decay = Vec::new();
    for n in [256usize, 512, 1024] {
        let grid = GridSpec::cube(1, n, 40.0).unwrap();
        let s = nu_sandwich(&grid, 1, &p).unwrap();
        assert!(s.lower.is_finite() && s.upper.is_finite() && s.lower > 0.0);
        decay.push(multiplier_decay(&grid, &p));
    }
    for d in &decay[1..] {
        for j in 0..2 {
            assert!((d[j] / decay[0][j] - 1.0).abs() <= 0.05);
        }
    }
}

#[test]
fn herglotz_identity_for_constant_potential() {
    let p = constant(1.0, 0.0);
    let mut fitted = Vec::new();
    for n in [64usize, 128] {
        let grid = GridSpec::cube(2, n, 8.0).unwrap();
        let f = SampledField::from_fn(grid.clone(), Domain::Physical, |q| {
            Complex64::new((-((q[0] - 0.3).powi(2) + (q[1] - 0.4).powi(2))).exp() * (1.0 + 0.5 * q[0]), 0.0)
        });
        let u = solve_lap(&f, &p, Branch::Outgoing).unwrap();
        let h = herglotz(&f, p.mu1()).unwrap();
        let num: f64 = u.values.iter().zip(&h.values).map(|(a, b)| a.im * b.re).sum();
        let den: f64 = h.values.iter().map(|b| b.re * b.re).sum();
        fitted.push(num / den);
    }
    assert!((fitted[1] / fitted[0] - 1.0).abs() <= 0.01);
    assert!((fitted[1] - std::f64::consts::PI / (2.0 * p.mu1())).abs() <= 1e-4);
}

#[test]
fn mountain_pass_certificates() {
    let p = step(2.0, 0.0);
    let grid = GridSpec::cube(1, 512, 32.0).unwrap();
    let band = |shift: f64, width: f64, c: f64, admissible: bool| {
        let mut hat = SampledField::zeros(grid.clone(), Domain::Frequency);
        for (k, v) in hat.values.iter_mut().enumerate() {
            let xi = grid.freq(0, k);
            let t = (xi.abs() - shift) / width;
            if (!admissible || xi.abs() > p.mu2()) && t.abs() < 1.0 {
                *v = Complex64::new(c * (1.0 - t * t).powi(3), 0.0);
            }
        }
        dft(&hat, Direction::Inverse).unwrap()
    };
    let w = band(3.0, 1.0, 1.0, true);
    let c1 = mountain_pass_certificate(&w, &p).unwrap();
    assert!(c1.positive && c1.volume_term > 0.0 && c1.interface_term > 0.0);
    let c2 = mountain_pass_certificate(&w.scale(Complex64::new(3.0, 0.0)), &p).unwrap();
    assert!((c2.volume_term / c1.volume_term - 9.0).abs() < 1e-12);
    assert!((c2.interface_term / c1.interface_term - 9.0).abs() < 1e-12);
    let bad = band(1.0, 0.5, 1.0, false);
    assert!(mountain_pass_certificate(&bad, &p).is_err());
}
