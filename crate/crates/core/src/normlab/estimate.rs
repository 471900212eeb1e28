//! Empirical lower bounds for `‖op‖_{L^p → L^q}` on a grid.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::annulus::{
    apply_s, apply_s_adjoint, apply_weights, multiplier_weights, periodic_counterexample, CounterexampleId,
    MultiplierSpec,
};
use crate::error::{invalid, Result};
use crate::spectral::{dft, lp_norm, lp_norm_slice, Direction, Domain, GridSpec, SampledField};

/// Power-iteration steps for `p = q = 2`.
const POWER_STEPS: usize = 100;
/// Stream of the fixed power-iteration start vector.
const POWER_STREAM: u64 = u64::MAX;
const WAVE_WIDTHS: usize = 6;
const WAVE_OFFSETS: usize = 8;

/// A linear map from fields on `grid()` to samples with a quadrature cell.
pub trait LinearOperator: Sync {
    fn grid(&self) -> &GridSpec;

    /// Output samples and the cell volume used for their norms.
    fn apply(&self, h: &SampledField) -> Result<(Vec<Complex64>, f64)>;

    /// `op* op h`, when available.
    fn normal(&self, _h: &SampledField) -> Option<Result<SampledField>> {
        None
    }
}

/// Periodic Fourier multiplier given by its dual-grid weights.
#[derive(Clone, Debug)]
pub struct FourierMultiplier {
    grid: GridSpec,
    weights: Vec<Complex64>,
}

impl FourierMultiplier {
    pub fn new(grid: GridSpec, weights: Vec<Complex64>) -> Result<Self> {
        if weights.len() != grid.len() {
            return invalid("weight array does not match the grid");
        }
        Ok(Self { grid, weights })
    }

    /// `𝒯`-type multiplier of order `s` for `spec` (without the family
    /// prefactor); `s = α` gives `T_{λ,α}`.
    pub fn annulus(spec: &MultiplierSpec, s: Complex64, grid: &GridSpec) -> Result<Self> {
        Self::new(grid.clone(), multiplier_weights(spec, s, grid)?)
    }

    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }

    /// Largest weight modulus, the exact `L² → L²` norm on the grid.
    pub fn sup(&self) -> f64 {
        self.weights.iter().fold(0.0, |m, w| m.max(w.norm()))
    }
}

impl LinearOperator for FourierMultiplier {
    fn grid(&self) -> &GridSpec {
        &self.grid
    }

    fn apply(&self, h: &SampledField) -> Result<(Vec<Complex64>, f64)> {
        Ok((apply_weights(&self.weights, h)?.values, self.grid.cell_volume()))
    }

    fn normal(&self, h: &SampledField) -> Option<Result<SampledField>> {
        let w: Vec<Complex64> = self.weights.iter().map(|w| Complex64::new(w.norm_sqr(), 0.0)).collect();
        Some(apply_weights(&w, h))
    }
}

/// `S_λ` into samples on the annulus nodes.
#[derive(Clone, Debug)]
pub struct Restriction {
    spec: MultiplierSpec,
    grid: GridSpec,
}

impl Restriction {
    pub fn new(spec: MultiplierSpec, grid: GridSpec) -> Result<Self> {
        spec.validate()?;
        if grid.ndim() != spec.d {
            return invalid("grid dimension differs from the multiplier's");
        }
        Ok(Self { spec, grid })
    }
}

impl LinearOperator for Restriction {
    fn grid(&self) -> &GridSpec {
        &self.grid
    }

    fn apply(&self, h: &SampledField) -> Result<(Vec<Complex64>, f64)> {
        Ok((apply_s(&self.spec, h)?.values, self.grid.dual_cell_volume()))
    }

    fn normal(&self, h: &SampledField) -> Option<Result<SampledField>> {
        Some(apply_s(&self.spec, h).and_then(|g| apply_s_adjoint(&self.spec, &g)))
    }
}

/// Any closure producing field values on the same grid.
pub struct FnOperator<F> {
    grid: GridSpec,
    f: F,
}

impl<F> FnOperator<F>
where
    F: Fn(&SampledField) -> Result<SampledField> + Sync,
{
    pub fn new(grid: GridSpec, f: F) -> Self {
        Self { grid, f }
    }
}

impl<F> LinearOperator for FnOperator<F>
where
    F: Fn(&SampledField) -> Result<SampledField> + Sync,
{
    fn grid(&self) -> &GridSpec {
        &self.grid
    }

    fn apply(&self, h: &SampledField) -> Result<(Vec<Complex64>, f64)> {
        let out = (self.f)(h)?;
        let cell = match out.domain {
            Domain::Physical => out.grid.cell_volume(),
            Domain::Frequency => out.grid.dual_cell_volume(),
        };
        Ok((out.values, cell))
    }
}

/// Test inputs. Every member is a deterministic function of its index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum TestFamily {
    /// `e^{-|x-c|²/(2w²)}` with widths doubling from the grid spacing to a
    /// quarter of the box and centres on a golden-ratio sequence.
    GaussianBumps,
    /// Radial spectra `e^{-(|ξ|-r)²/(2σ²)}` with `r` at or just above
    /// `radius` and `σ` a few dual-grid spacings.
    WavePackets { radius: f64 },
    /// The listed counterexamples, on the periodic grid.
    Counterexamples { members: Vec<CounterexampleId> },
    /// Uniform complex noise from ChaCha20, stream = member index.
    Random { seed: u64 },
}

/// Golden-ratio style irrational steps for quasi-random centres.
const STEPS: [f64; 3] = [0.618_033_988_749_894_8, 0.754_877_666_246_692_7, 0.569_840_290_998_053_3];

impl TestFamily {
    /// Member `j`, or `None` past the end of a finite family.
    pub fn member(&self, grid: &GridSpec, j: usize) -> Result<Option<(SampledField, String)>> {
        match self {
            TestFamily::GaussianBumps => {
                let h = grid.spacing(0);
                let half = grid.half_width()[0];
                let widths = ((0.25 * half / h).log2().floor().max(0.0) as usize) + 1;
                let w = h * 2f64.powi((j % widths) as i32);
                let c = j / widths;
                let centre: Vec<f64> = (0..grid.ndim())
                    .map(|ax| {
                        let u = (c as f64 * STEPS[ax % 3]).fract();
                        if c == 0 {
                            0.0
                        } else {
                            (u - 0.5) * grid.half_width()[ax]
                        }
                    })
                    .collect();
                let f = SampledField::from_fn(grid.clone(), Domain::Physical, |x| {
                    let r2: f64 = x.iter().zip(&centre).map(|(a, b)| (a - b).powi(2)).sum();
                    Complex64::new((-r2 / (2.0 * w * w)).exp(), 0.0)
                });
                Ok(Some((f, format!("gaussian(width={w}, centre={centre:?})"))))
            }
            TestFamily::WavePackets { radius } => {
                if j >= WAVE_WIDTHS * WAVE_OFFSETS {
                    return Ok(None);
                }
                let dxi = grid.dual_spacing(0);
                let sigma = dxi * 2f64.powi((j % WAVE_WIDTHS) as i32);
                let r0 = radius + 0.5 * sigma * (j / WAVE_WIDTHS) as f64;
                let hat = SampledField::from_fn(grid.clone(), Domain::Frequency, |xi| {
                    let r = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
                    Complex64::new((-(r - r0).powi(2) / (2.0 * sigma * sigma)).exp(), 0.0)
                });
                let f = dft(&hat, Direction::Inverse)?;
                Ok(Some((f, format!("wave_packet(radius={r0}, sigma={sigma})"))))
            }
            TestFamily::Counterexamples { members } => match members.get(j) {
                None => Ok(None),
                Some(id) => Ok(Some((periodic_counterexample(id, grid)?, format!("{id:?}")))),
            },
            TestFamily::Random { seed } => {
                let f = random_field(grid, *seed, j as u64);
                Ok(Some((f, format!("random(seed={seed}, stream={j})"))))
            }
        }
    }
}

fn random_field(grid: &GridSpec, seed: u64, stream: u64) -> SampledField {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let values = (0..grid.len())
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    SampledField { grid: grid.clone(), values, domain: Domain::Physical }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimateMethod {
    TestFamily,
    PowerIteration,
}

/// Largest observed `‖op h‖_q / ‖h‖_p`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorNormEstimate {
    pub inv_p: f64,
    pub inv_q: f64,
    pub lower_bound: f64,
    pub method: EstimateMethod,
    pub witnesses: Vec<String>,
}

fn check_exponent(e: f64, name: &str) -> Result<()> {
    if e.is_nan() || e < 1.0 {
        return invalid(format!("{name} = {e} below 1"));
    }
    Ok(())
}

/// `‖op h‖_q / ‖h‖_p`; `None` for `h = 0`.
pub fn norm_ratio(op: &dyn LinearOperator, h: &SampledField, p: f64, q: f64) -> Result<Option<f64>> {
    let den = lp_norm(h, p)?;
    if den == 0.0 || !den.is_finite() {
        return Ok(None);
    }
    let (out, cell) = op.apply(h)?;
    Ok(Some(lp_norm_slice(&out, cell, q)? / den))
}

/// Maximizes `‖op h‖_q / ‖h‖_p` over the first `budget` test inputs, taken
/// round-robin from `families`. For `p = q = 2` and operators with a
/// normal map, power iteration from a fixed random start competes too.
pub fn estimate_norm_lower(
    op: &dyn LinearOperator,
    p: f64,
    q: f64,
    families: &[TestFamily],
    budget: usize,
) -> Result<OperatorNormEstimate> {
    check_exponent(p, "p")?;
    check_exponent(q, "q")?;
    if families.is_empty() {
        return invalid("no test families given");
    }
    let grid = op.grid().clone();
    let nf = families.len();
    let ratios: Vec<Option<(f64, String)>> = (0..budget)
        .into_par_iter()
        .map(|i| -> Result<Option<(f64, String)>> {
            let Some((h, label)) = families[i % nf].member(&grid, i / nf)? else {
                return Ok(None);
            };
            Ok(norm_ratio(op, &h, p, q)?.map(|r| (r, label)))
        })
        .collect::<Result<_>>()?;
    // Index-ordered reduction: the first maximizer wins ties.
    let mut best: Option<(f64, String)> = None;
    for (r, label) in ratios.into_iter().flatten() {
        if best.as_ref().map_or(true, |b| r > b.0) {
            best = Some((r, label));
        }
    }
    let Some((mut lower, label)) = best else {
        return invalid("every test input had zero norm or lay outside its family");
    };
    let mut method = EstimateMethod::TestFamily;
    let mut witness = label;
    if p == 2.0 && q == 2.0 {
        if let Some(r) = power_iteration(op, &grid)? {
            if r > lower {
                lower = r;
                method = EstimateMethod::PowerIteration;
                witness = format!("power_iteration(steps={POWER_STEPS})");
            }
        }
    }
    Ok(OperatorNormEstimate { inv_p: 1.0 / p, inv_q: 1.0 / q, lower_bound: lower, method, witnesses: vec![witness] })
}

/// Best `‖op v‖₂/‖v‖₂` along the power iteration of `op* op`.
fn power_iteration(op: &dyn LinearOperator, grid: &GridSpec) -> Result<Option<f64>> {
    let mut v = random_field(grid, 0, POWER_STREAM);
    let mut best = 0.0f64;
    let mut last = 0.0f64;
    for _ in 0..POWER_STEPS {
        let Some(next) = op.normal(&v) else { return Ok(None) };
        if let Some(r) = norm_ratio(op, &v, 2.0, 2.0)? {
            best = best.max(r);
            if (r - last).abs() <= 1e-13 * r {
                break;
            }
            last = r;
        }
        let next = next?;
        let n = lp_norm(&next, 2.0)?;
        if n == 0.0 || !n.is_finite() {
            break;
        }
        v = next.scale(Complex64::new(1.0 / n, 0.0));
    }
    Ok(Some(best))
}
