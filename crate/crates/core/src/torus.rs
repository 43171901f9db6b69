//! Smooth periodic functions on [0,1]² sampled on ℤ_N²: discretization, norm
//! estimation, the explicit Fourier-ratio bound
//!
//! ```text
//! FR(g) ≤ r_N = 2|∫f|/‖f‖_{L²} + 16π² (‖f‖_{C²}/‖f‖_{L²}) ln N + 8π² ‖f‖_{C²} / (‖f‖_{L²} N)
//! ```
//!
//! together with the Riemann-sum, energy and coefficient-decay estimates it
//! rests on, and the sample-size formula for recovery from a random subset.
//!
//! `‖f‖_{C²}` is the largest sup norm over all partial derivatives of order
//! at most two (including order zero), without multinomial weights.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use log::warn;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::spectral::{self, forward_dft, wrapped_magnitude, GridField, SpectralVector};

/// Point evaluator on [0,1]², periodic in both variables.
pub type Evaluator = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Where the norms entering a bound came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    Analytic,
    Estimated,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Analytic => "analytic",
            Provenance::Estimated => "estimated",
        })
    }
}

/// Norm data of a function on [0,1]².
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TorusNorms {
    pub l2: f64,
    pub c2: f64,
    /// `∫ f` over the unit square.
    pub mean: f64,
    pub sup: f64,
    /// `sup |∂₁f|`, `sup |∂₂f|`.
    pub grad_sup: [f64; 2],
    pub provenance: Provenance,
}

impl TorusNorms {
    /// Analytic norm data; `c2` is taken as given and must dominate every other sup.
    pub fn analytic(l2: f64, c2: f64, mean: f64, sup: f64, grad_sup: [f64; 2]) -> Self {
        Self { l2, c2, mean, sup, grad_sup, provenance: Provenance::Analytic }
    }

    fn validate(&self) -> Result<()> {
        let finite = [self.l2, self.c2, self.mean, self.sup, self.grad_sup[0], self.grad_sup[1]]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::Data("non-finite norm data".into()));
        }
        if self.l2 <= 0.0 {
            return Err(Error::Domain("L² norm must be positive".into()));
        }
        if self.c2 < self.sup || self.c2 < self.grad_sup[0] || self.c2 < self.grad_sup[1] {
            return Err(Error::Domain(format!(
                "C² norm {} is below a lower-order sup ({}, {:?})",
                self.c2, self.sup, self.grad_sup
            )));
        }
        Ok(())
    }

    /// `N ‖f‖²_{L²} ≥ 8 ‖f‖²_{C²}`.
    pub fn certifies(&self, n: usize) -> bool {
        n as f64 * self.l2 * self.l2 >= 8.0 * self.c2 * self.c2
    }

    /// Smallest N satisfying [`TorusNorms::certifies`].
    pub fn certification_threshold(&self) -> usize {
        let mut n = (8.0 * self.c2 * self.c2 / (self.l2 * self.l2)).ceil().max(2.0) as usize;
        while n > 2 && self.certifies(n - 1) {
            n -= 1;
        }
        while !self.certifies(n) {
            n += 1;
        }
        n
    }
}

/// A C² function on [0,1]², 1-periodic in each variable.
#[derive(Clone)]
pub struct SmoothFunctionSpec {
    name: String,
    evaluator: Evaluator,
    analytic: Option<TorusNorms>,
}

impl fmt::Debug for SmoothFunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SmoothFunctionSpec")
            .field("name", &self.name)
            .field("analytic", &self.analytic)
            .finish()
    }
}

impl SmoothFunctionSpec {
    pub fn new(name: impl Into<String>, f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Self { name: name.into(), evaluator: Arc::new(f), analytic: None }
    }

    /// Attaches analytic norms, which then override numerical estimates.
    pub fn with_analytic(mut self, mut norms: TorusNorms) -> Result<Self> {
        norms.provenance = Provenance::Analytic;
        norms.validate()?;
        self.analytic = Some(norms);
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn analytic(&self) -> Option<&TorusNorms> {
        self.analytic.as_ref()
    }

    pub fn eval(&self, x: f64, y: f64) -> Result<f64> {
        let v = (self.evaluator)(x, y);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Evaluation { x, y, reason: format!("non-finite value {v}") })
        }
    }

    /// Spot-checks periodicity on 100 boundary points; returns the largest mismatch.
    pub fn check_periodicity(&self) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for i in 0..50 {
            let t = (i as f64 + 0.5) / 50.0;
            worst = worst.max((self.eval(0.0, t)? - self.eval(1.0, t)?).abs());
            worst = worst.max((self.eval(t, 0.0)? - self.eval(t, 1.0)?).abs());
        }
        if worst > 1e-9 {
            return Err(Error::Data(format!(
                "{} is not 1-periodic: boundary mismatch {worst:.3e}",
                self.name
            )));
        }
        Ok(worst)
    }
}

/// Default refinement `max(8N, 256)` for norm estimation.
pub fn default_refinement(n: usize) -> usize {
    (8 * n).max(256)
}

/// Norms of `f`: the analytic data when present, otherwise [`estimate_norms_numerically`].
pub fn estimate_norms(f: &SmoothFunctionSpec, refinement: usize) -> Result<TorusNorms> {
    match f.analytic {
        Some(norms) => Ok(norms),
        None => estimate_norms_numerically(f, refinement),
    }
}

/// Midpoint-rule L² norm and mean on an M×M grid; C² from sup|f| and
/// central differences of all first and second partials with step 1/M.
pub fn estimate_norms_numerically(f: &SmoothFunctionSpec, refinement: usize) -> Result<TorusNorms> {
    let m = refinement;
    if m < 8 {
        return Err(Error::Domain(format!("refinement {m} is below 8")));
    }
    let h = 1.0 / m as f64;
    let values: Vec<f64> = (0..m * m)
        .into_par_iter()
        .map(|i| f.eval((i / m) as f64 * h + 0.5 * h, (i % m) as f64 * h + 0.5 * h))
        .collect::<Result<_>>()?;
    let at = |i: usize, j: usize| values[(i % m) * m + (j % m)];

    let (sum, sum_sq, sup, d) = (0..m)
        .into_par_iter()
        .map(|i| {
            let mut acc: (f64, f64, f64, [f64; 5]) = (0.0, 0.0, 0.0, [0.0; 5]);
            for j in 0..m {
                let v = at(i, j);
                let (ip, im, jp, jm) = (i + 1, i + m - 1, j + 1, j + m - 1);
                let d1 = (at(ip, j) - at(im, j)) / (2.0 * h);
                let d2 = (at(i, jp) - at(i, jm)) / (2.0 * h);
                let d11 = (at(ip, j) - 2.0 * v + at(im, j)) / (h * h);
                let d22 = (at(i, jp) - 2.0 * v + at(i, jm)) / (h * h);
                let d12 = (at(ip, jp) - at(ip, jm) - at(im, jp) + at(im, jm)) / (4.0 * h * h);
                acc.0 += v;
                acc.1 += v * v;
                acc.2 = acc.2.max(v.abs());
                for (slot, val) in acc.3.iter_mut().zip([d1, d2, d11, d22, d12]) {
                    *slot = slot.max(val.abs());
                }
            }
            acc
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold((0.0f64, 0.0f64, 0.0f64, [0.0f64; 5]), |a, b| {
            let mut d = a.3;
            for (x, y) in d.iter_mut().zip(b.3) {
                *x = x.max(y);
            }
            (a.0 + b.0, a.1 + b.1, a.2.max(b.2), d)
        });
    let area = (m * m) as f64;
    let c2 = d.iter().fold(sup, |acc, &v| acc.max(v));
    Ok(TorusNorms {
        l2: (sum_sq / area).sqrt(),
        c2,
        mean: sum / area,
        sup,
        grad_sup: [d[0], d[1]],
        provenance: Provenance::Estimated,
    })
}

/// `g(x₁, x₂) = f(x₁/N, x₂/N)` on ℤ_N².
pub fn discretize(f: &SmoothFunctionSpec, n: usize) -> Result<GridField> {
    if n < 2 {
        return Err(Error::Domain(format!("grid side {n} is below 2")));
    }
    let inv = 1.0 / n as f64;
    let values: Vec<f64> = (0..n * n)
        .into_par_iter()
        .map(|i| f.eval((i / n) as f64 * inv, (i % n) as f64 * inv))
        .collect::<Result<_>>()?;
    GridField::from_real(2, n, values)
}

/// Terms of the Fourier-ratio bound at one grid size.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrBoundReport {
    pub n: usize,
    /// Mean term `2|∫f| / ‖f‖_{L²}`.
    pub a: f64,
    /// Logarithmic term `16π² (‖f‖_{C²}/‖f‖_{L²}) ln N`.
    pub b: f64,
    /// Discretization term `8π² ‖f‖_{C²} / (‖f‖_{L²} N)`.
    pub c: f64,
    pub r: f64,
    pub certified: bool,
    pub norms: TorusNorms,
}

impl FrBoundReport {
    pub fn provenance(&self) -> Provenance {
        self.norms.provenance
    }
}

pub fn compute_rn(norms: &TorusNorms, n: usize) -> Result<FrBoundReport> {
    if n < 2 {
        return Err(Error::Domain(format!("grid side {n} is below 2")));
    }
    norms.validate()?;
    let ratio = norms.c2 / norms.l2;
    let a = 2.0 * norms.mean.abs() / norms.l2;
    let b = 16.0 * PI * PI * ratio * (n as f64).ln();
    let c = 8.0 * PI * PI * ratio / n as f64;
    Ok(FrBoundReport { n, a, b, c, r: a + b + c, certified: norms.certifies(n), norms: *norms })
}

/// Measured Fourier ratio of the discretization against `r_N`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrCheck {
    pub bound: FrBoundReport,
    pub fr_measured: f64,
    /// `r_N − FR(g)`.
    pub slack: f64,
}

impl FrCheck {
    pub const CSV_HEADER: &'static str = "N,A,B,C,r,fr_measured,slack,certified,provenance";

    pub fn csv_row(&self) -> String {
        let b = &self.bound;
        format!(
            "{},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{},{}",
            b.n,
            b.a,
            b.b,
            b.c,
            b.r,
            self.fr_measured,
            self.slack,
            b.certified,
            b.provenance()
        )
    }
}

fn spectrum(f: &SmoothFunctionSpec, n: usize) -> Result<SpectralVector> {
    forward_dft(&discretize(f, n)?)
}

/// Runs discretize → DFT → Fourier ratio and compares with `r_N`.
///
/// Inputs that fail the hypothesis `N‖f‖² ≥ 8‖f‖²_{C²}` still produce a
/// report (flagged uncertified) and a logged warning.
pub fn verify_fr_bound(f: &SmoothFunctionSpec, n: usize) -> Result<FrCheck> {
    let norms = estimate_norms(f, default_refinement(n))?;
    let bound = compute_rn(&norms, n)?;
    if !bound.certified {
        warn!(
            "{} at N={n}: hypothesis N‖f‖² ≥ 8‖f‖²_C² not met; bound is not certified",
            f.name()
        );
    }
    let fr_measured = spectrum(f, n)?.fourier_ratio()?;
    Ok(FrCheck { bound, fr_measured, slack: bound.r - fr_measured })
}

/// Worst observed coefficient decay relative to `|ĝ(m)| ≤ 4π² N ‖f‖_{C²} / |m|_*²`.
#[derive(Clone, Debug, PartialEq)]
pub struct DecayReport {
    pub n: usize,
    /// `max_{m≠0} |ĝ(m)| |m|_*² / (N ‖f‖_{C²})`.
    pub worst_ratio: f64,
    pub worst_frequency: Vec<usize>,
    /// The constant `4π²` the ratio is checked against.
    pub limit: f64,
    pub pass: bool,
    pub certified: bool,
    /// `Σ_{m≠0} |m|_*^{-2}` over ℤ_N².
    pub frequency_sum: f64,
    /// Whether `frequency_sum ≤ 2 ln N + 2`.
    pub frequency_sum_within_estimate: bool,
    pub provenance: Provenance,
}

/// `Σ_{m ∈ ℤ_N², m≠0} 1 / |m|_*²`.
pub fn wrapped_inverse_square_sum(n: usize) -> f64 {
    let mut total = 0.0;
    for m1 in 0..n {
        for m2 in 0..n {
            let w = wrapped_magnitude(&[m1, m2], n).magnitude_sq;
            if w > 0 {
                total += 1.0 / w as f64;
            }
        }
    }
    total
}

pub fn verify_decay(f: &SmoothFunctionSpec, n: usize) -> Result<DecayReport> {
    let norms = estimate_norms(f, default_refinement(n))?;
    norms.validate()?;
    let spec = spectrum(f, n)?;
    let scale = n as f64 * norms.c2;
    let mut worst_ratio = 0.0;
    let mut worst_index = 0;
    for (i, c) in spec.coefficients().iter().enumerate().skip(1) {
        let w = wrapped_magnitude(&spectral::unravel(i, n, 2), n).magnitude_sq as f64;
        let ratio = c.norm() * w / scale;
        if ratio > worst_ratio {
            worst_ratio = ratio;
            worst_index = i;
        }
    }
    let limit = 4.0 * PI * PI;
    let frequency_sum = wrapped_inverse_square_sum(n);
    let estimate = 2.0 * (n as f64).ln() + 2.0;
    let within = frequency_sum <= estimate;
    if !within {
        warn!(
            "N={n}: Σ|m|_*^-2 = {frequency_sum:.4} exceeds 2 ln N + 2 = {estimate:.4} \
             (the wrapped/Euclidean constant is absorbed in the final bound)"
        );
    }
    Ok(DecayReport {
        n,
        worst_ratio,
        worst_frequency: spectral::unravel(worst_index, n, 2),
        limit,
        pass: worst_ratio <= limit,
        certified: norms.certifies(n),
        frequency_sum,
        frequency_sum_within_estimate: within,
        provenance: norms.provenance,
    })
}

/// Riemann-sum error against `(sup|∂₁h| + sup|∂₂h|) / N`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RiemannCheck {
    pub n: usize,
    /// `|N⁻² Σ h(x/N) − ∫h|`.
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

/// Summation rounding allowance: the comparison is `lhs ≤ rhs·(1 + 1e-6) + 1e-13·scale`.
const ROUNDING_ALLOWANCE: f64 = 1e-13;

pub fn verify_riemann_lemma(h: &SmoothFunctionSpec, n: usize) -> Result<RiemannCheck> {
    if n < 2 {
        return Err(Error::Domain(format!("grid side {n} is below 2")));
    }
    let norms = estimate_norms(h, default_refinement(n))?;
    let inv = 1.0 / n as f64;
    let sum: f64 = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| h.eval(i as f64 * inv, j as f64 * inv))
                .sum::<Result<f64>>()
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .sum();
    let lhs = (sum * inv * inv - norms.mean).abs();
    let rhs = (norms.grad_sup[0] + norms.grad_sup[1]) * inv;
    let scale = norms.sup.max(norms.mean.abs());
    Ok(RiemannCheck { n, lhs, rhs, pass: lhs <= rhs * (1.0 + 1e-6) + ROUNDING_ALLOWANCE * scale })
}

/// Discrete energy against `N²‖f‖² − 4N‖f‖²_{C²}` and, when certified, `(N/√2)‖f‖`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct L2LowerCheck {
    pub n: usize,
    /// `‖g‖²_{L²(ℤ_N²)}`.
    pub energy: f64,
    pub lower: f64,
    pub pass: bool,
    pub certified: bool,
    /// `‖g‖₂ ≥ (N/√2)‖f‖_{L²}`; checked only for certified inputs.
    pub certified_pass: Option<bool>,
}

pub fn verify_l2_lower_bound(f: &SmoothFunctionSpec, n: usize) -> Result<L2LowerCheck> {
    let norms = estimate_norms(f, default_refinement(n))?;
    let g = discretize(f, n)?;
    let energy: f64 = g.values().iter().map(Complex64::norm_sqr).sum();
    let nf = n as f64;
    let lower = nf * nf * norms.l2 * norms.l2 - 4.0 * nf * norms.c2 * norms.c2;
    let certified = norms.certifies(n);
    let certified_pass = certified.then(|| energy.sqrt() >= nf / 2f64.sqrt() * norms.l2);
    Ok(L2LowerCheck {
        n,
        energy,
        lower,
        pass: energy >= lower,
        certified,
        certified_pass,
    })
}

/// Output of a sample-size formula.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampleSize {
    pub count: u64,
    /// Unrounded formula value.
    pub formula: f64,
    /// Whether the count was clamped to the grid size.
    pub clamped: bool,
}

pub(crate) fn check_formula_inputs(r: f64, eps: f64, c_univ: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::Domain(format!("ε = {eps} outside (0, 1/2)")));
    }
    if !(r >= 1.0) || !r.is_finite() {
        return Err(Error::Domain(format!("r = {r} must be a finite value ≥ 1")));
    }
    if !(c_univ > 0.0) || !c_univ.is_finite() {
        return Err(Error::Domain(format!("C = {c_univ} must be positive")));
    }
    Ok(())
}

/// `C r²/ε² ln(r/ε)² ln D` with natural logarithms.
pub(crate) fn sample_formula(r: f64, eps: f64, c_univ: f64, ambient: f64) -> f64 {
    let log_ratio = (r / eps).ln();
    c_univ * (r * r) / (eps * eps) * log_ratio * log_ratio * ambient.ln()
}

/// `min(⌈C r²/ε² ln(r/ε)² ln(N^d)⌉, N^d)`.
pub fn sample_size_torus(r: f64, eps: f64, n: usize, d: usize, c_univ: f64) -> Result<SampleSize> {
    check_formula_inputs(r, eps, c_univ)?;
    if n < 2 || d == 0 {
        return Err(Error::Domain(format!("invalid grid ℤ_{n}^{d}")));
    }
    let total = (n as f64).powi(d as i32);
    let formula = sample_formula(r, eps, c_univ, total);
    let raw = formula.ceil();
    let clamped = raw > total;
    Ok(SampleSize { count: raw.min(total) as u64, formula, clamped })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn const_one() -> SmoothFunctionSpec {
        SmoothFunctionSpec::new("const1", |_, _| 1.0)
    }

    #[test]
    fn discretize_examples() {
        let g = discretize(&const_one(), 4).unwrap();
        assert!(g.is_real());
        assert!(g.values().iter().all(|v| *v == Complex64::new(1.0, 0.0)));

        let s = SmoothFunctionSpec::new("sin1", |u, _| (2.0 * PI * u).sin());
        let g = discretize(&s, 8).unwrap();
        let h = 2f64.sqrt() / 2.0;
        for (x1, expect) in [0.0, h, 1.0, h, 0.0, -h, -1.0, -h].iter().enumerate() {
            for x2 in 0..8 {
                assert!((g.get(&[x1, x2]).re - expect).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn evaluator_failure_reports_point() {
        let f = SmoothFunctionSpec::new("bad", |u, v| if u > 0.5 && v > 0.5 { f64::NAN } else { 0.0 });
        match discretize(&f, 4) {
            Err(Error::Evaluation { x, y, .. }) => assert!(x > 0.5 && y > 0.5),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn constant_norms_are_exact() {
        let n = estimate_norms_numerically(&const_one(), 64).unwrap();
        assert!((n.l2 - 1.0).abs() < 1e-14 && (n.mean - 1.0).abs() < 1e-14);
        assert_eq!(n.c2, 1.0);
        assert_eq!(n.grad_sup, [0.0, 0.0]);
        assert_eq!(n.provenance, Provenance::Estimated);
    }

    #[test]
    fn analytic_norms_take_precedence() {
        let norms = TorusNorms::analytic(1.0, 1.0, 1.0, 1.0, [0.0, 0.0]);
        let f = const_one().with_analytic(norms).unwrap();
        assert_eq!(estimate_norms(&f, 16).unwrap().provenance, Provenance::Analytic);
        let bad = TorusNorms::analytic(0.0, 1.0, 1.0, 1.0, [0.0, 0.0]);
        assert!(const_one().with_analytic(bad).is_err());
        let low_c2 = TorusNorms::analytic(1.0, 0.5, 1.0, 1.0, [0.0, 0.0]);
        assert!(const_one().with_analytic(low_c2).is_err());
    }

    #[test]
    fn rn_for_constant() {
        let norms = TorusNorms::analytic(1.0, 1.0, 1.0, 1.0, [0.0, 0.0]);
        let rep = compute_rn(&norms, 8).unwrap();
        assert!((rep.a - 2.0).abs() < 1e-15);
        assert!((rep.b - 328.372_246_265).abs() < 1e-6);
        assert!((rep.c - 9.8696).abs() < 1e-4);
        assert!(rep.certified);
        assert_eq!(rep.r, rep.a + rep.b + rep.c);
        let rep = compute_rn(&norms, 100).unwrap();
        assert!((rep.r - 730.008_895_318).abs() < 1e-6, "{}", rep.r);
        assert!(compute_rn(&norms, 1).is_err());
        let zero_mean = TorusNorms::analytic(1.0, 1.0, 0.0, 1.0, [0.0, 0.0]);
        assert_eq!(compute_rn(&zero_mean, 8).unwrap().a, 0.0);
    }

    #[test]
    fn certification_threshold_is_minimal() {
        let norms = TorusNorms::analytic((17.0f64 / 16.0).sqrt(), 2.0 * PI * PI, 1.0, 1.5, [PI, PI]);
        let t = norms.certification_threshold();
        assert_eq!(t, 2934);
        assert!(norms.certifies(t) && !norms.certifies(t - 1));
    }

    #[test]
    fn riemann_lemma_examples() {
        let c = SmoothFunctionSpec::new("c", |_, _| 0.3);
        let chk = verify_riemann_lemma(&c, 10).unwrap();
        assert_eq!(chk.rhs, 0.0);
        assert!(chk.lhs < 1e-13 && chk.pass, "{chk:?}");

        let s = SmoothFunctionSpec::new("sin1", |u, _| (2.0 * PI * u).sin())
            .with_analytic(TorusNorms::analytic(0.5f64.sqrt(), 4.0 * PI * PI, 0.0, 1.0, [2.0 * PI, 0.0]))
            .unwrap();
        let chk = verify_riemann_lemma(&s, 10).unwrap();
        assert!(chk.lhs < 1e-15);
        assert!((chk.rhs - 2.0 * PI / 10.0).abs() < 1e-15);
        assert!(chk.pass);
    }

    #[test]
    fn l2_lower_bound_examples() {
        let chk = verify_l2_lower_bound(&const_one(), 16).unwrap();
        assert!((chk.energy - 256.0).abs() < 1e-9);
        assert!(chk.pass && chk.certified && chk.certified_pass == Some(true));

        let s = SmoothFunctionSpec::new("sin1", |u, _| (2.0 * PI * u).sin())
            .with_analytic(TorusNorms::analytic(0.5f64.sqrt(), 4.0 * PI * PI, 0.0, 1.0, [2.0 * PI, 0.0]))
            .unwrap();
        let chk = verify_l2_lower_bound(&s, 64).unwrap();
        assert!((chk.energy - 64.0 * 64.0 / 2.0).abs() < 1e-9);
        assert!(chk.pass && !chk.certified && chk.certified_pass.is_none());
    }

    #[test]
    fn sample_size_examples() {
        let s = sample_size_torus(1.0, 0.25, 8, 2, 1.0).unwrap();
        assert_eq!(s.formula.ceil(), 128.0);
        assert_eq!(s.count, 64);
        assert!(s.clamped);

        let s = sample_size_torus(10.0, 0.1, 256, 2, 1.0).unwrap();
        let expect = (1e4 * 100f64.ln().powi(2) * 65536f64.ln()).ceil();
        assert_eq!(s.count, 65536.0f64.min(expect) as u64);
        assert!(s.clamped);

        assert!(sample_size_torus(1.0, 0.5, 8, 2, 1.0).is_err());
        assert!(sample_size_torus(1.0, 0.0, 8, 2, 1.0).is_err());
        assert!(sample_size_torus(0.5, 0.1, 8, 2, 1.0).is_err());
    }

    #[test]
    fn periodicity_spot_check() {
        let s = SmoothFunctionSpec::new("sin1", |u, _| (2.0 * PI * u).sin());
        assert!(s.check_periodicity().unwrap() < 1e-12);
        let ramp = SmoothFunctionSpec::new("ramp", |u, _| u);
        assert!(ramp.check_periodicity().is_err());
    }
}
