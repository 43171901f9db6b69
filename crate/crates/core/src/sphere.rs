//! Bandlimited signals on S²: real orthonormal spherical harmonics, a
//! product quadrature exact to degree 2L, analysis/synthesis, the C²(S²)
//! norm and the explicit bound on the spherical Fourier ratio
//!
//! ```text
//! FR_L(f) ≤ r_L = |∫f|/‖f‖ + C₀ (‖f‖_{C²}/‖f‖) ln L + C₀ ‖f‖_{C²} / (‖f‖ L),   C₀ = 48√π.
//! ```
//!
//! The basis is the real one without Condon–Shortley phase:
//! `Y_ℓ^0 = P̄_ℓ^0`, `Y_ℓ^m = √2 P̄_ℓ^m cos mφ`, `Y_ℓ^{-m} = √2 P̄_ℓ^m sin mφ`
//! for m > 0, with `P̄_ℓ^m` the associated Legendre functions normalized so
//! that every `Y_ℓ^m` has unit L²(S²) norm. Coefficients are packed at
//! index `ℓ² + ℓ + m`.
//!
//! `‖f‖_{C²(S²)} = max(sup|f|, sup|∇f|, sup|Δf|)`, with the sups taken on a
//! 4L×8L equiangular grid and the derivatives evaluated exactly from the
//! expansion.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sampler::SpherePoint;
use crate::spectral::{sphere_degree_order, sphere_index, SpectralDomain, SpectralVector};
use crate::torus::{check_formula_inputs, sample_formula, Provenance, SampleSize};

/// Highest degree the Legendre recurrences are validated for.
pub const MAX_DEGREE: usize = 256;

/// `C₀ = 48√π`.
pub const C0: f64 = 48.0 * 1.772_453_850_905_516;

pub const BASIS_CONVENTION: &str = "real-orthonormal-no-condon-shortley";

fn tri(l: usize, m: usize) -> usize {
    l * (l + 1) / 2 + m
}

/// Normalized associated Legendre functions `P̄_ℓ^m(cos θ)`, 0 ≤ m ≤ ℓ ≤ L,
/// with their first and second θ-derivatives.
#[derive(Clone, Debug)]
pub struct LegendreTable {
    l_max: usize,
    p: Vec<f64>,
    dp: Vec<f64>,
    d2p: Vec<f64>,
}

impl LegendreTable {
    pub fn new(l_max: usize, theta: f64) -> Self {
        let mut table = Self::values_only(l_max, theta);
        table.fill_derivatives();
        table
    }

    fn values_only(l_max: usize, theta: f64) -> Self {
        let (x, s) = (theta.cos(), theta.sin().abs());
        let n = tri(l_max, l_max) + 1;
        let mut p = vec![0.0; n];
        p[0] = (4.0 * PI).sqrt().recip();
        for m in 1..=l_max {
            let mf = m as f64;
            p[tri(m, m)] = ((2.0 * mf + 1.0) / (2.0 * mf)).sqrt() * s * p[tri(m - 1, m - 1)];
        }
        for m in 0..l_max {
            p[tri(m + 1, m)] = (2.0 * m as f64 + 3.0).sqrt() * x * p[tri(m, m)];
        }
        for m in 0..=l_max {
            let mf = (m * m) as f64;
            for l in (m + 2)..=l_max {
                let lf = l as f64;
                let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf)).sqrt();
                let b = (((lf - 1.0) * (lf - 1.0) - mf) / (4.0 * (lf - 1.0) * (lf - 1.0) - 1.0)).sqrt();
                p[tri(l, m)] = a * (x * p[tri(l - 1, m)] - b * p[tri(l - 2, m)]);
            }
        }
        Self { l_max, p, dp: Vec::new(), d2p: Vec::new() }
    }

    /// θ-derivative within one degree:
    /// `dP̄^0 = −√(ℓ(ℓ+1)) P̄^1`,
    /// `dP̄^m = ½(√((ℓ+m)(ℓ−m+1)) P̄^{m−1} − √((ℓ+m+1)(ℓ−m)) P̄^{m+1})`.
    fn differentiate(l_max: usize, src: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; src.len()];
        for l in 1..=l_max {
            let lf = l as f64;
            let at = |m: usize| if m <= l { src[tri(l, m)] } else { 0.0 };
            out[tri(l, 0)] = -(lf * (lf + 1.0)).sqrt() * at(1);
            for m in 1..=l {
                let mf = m as f64;
                let up = ((lf + mf) * (lf - mf + 1.0)).sqrt();
                let down = ((lf + mf + 1.0) * (lf - mf)).sqrt();
                out[tri(l, m)] = 0.5 * (up * at(m - 1) - down * at(m + 1));
            }
        }
        out
    }

    fn fill_derivatives(&mut self) {
        self.dp = Self::differentiate(self.l_max, &self.p);
        self.d2p = Self::differentiate(self.l_max, &self.dp);
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }

    pub fn value(&self, l: usize, m: usize) -> f64 {
        self.p[tri(l, m)]
    }

    pub fn d_theta(&self, l: usize, m: usize) -> f64 {
        self.dp[tri(l, m)]
    }

    pub fn d2_theta(&self, l: usize, m: usize) -> f64 {
        self.d2p[tri(l, m)]
    }
}

/// Azimuthal factor of `Y_ℓ^m` and its φ-derivative.
fn azimuthal(m: i64, phi: f64) -> (f64, f64) {
    let k = m.unsigned_abs() as f64;
    match m.signum() {
        0 => (1.0, 0.0),
        1 => (2f64.sqrt() * (k * phi).cos(), -2f64.sqrt() * k * (k * phi).sin()),
        _ => (2f64.sqrt() * (k * phi).sin(), 2f64.sqrt() * k * (k * phi).cos()),
    }
}

/// All `Y_ℓ^m(θ, φ)` for ℓ ≤ L, packed at ℓ² + ℓ + m.
pub fn real_sh_all(l_max: usize, point: SpherePoint) -> Vec<f64> {
    let table = LegendreTable::values_only(l_max, point.theta);
    let mut out = vec![0.0; (l_max + 1) * (l_max + 1)];
    for l in 0..=l_max {
        for m in -(l as i64)..=(l as i64) {
            let (az, _) = azimuthal(m, point.phi);
            out[sphere_index(l, m)] = table.value(l, m.unsigned_abs() as usize) * az;
        }
    }
    out
}

/// Single real orthonormal spherical harmonic `Y_ℓ^m(ω)`.
pub fn evaluate_basis(l: usize, m: i64, point: SpherePoint) -> Result<f64> {
    if l > MAX_DEGREE || m.unsigned_abs() as usize > l {
        return Err(Error::Domain(format!(
            "(ℓ, m) = ({l}, {m}) outside 0 ≤ ℓ ≤ {MAX_DEGREE}, |m| ≤ ℓ"
        )));
    }
    let table = LegendreTable::values_only(l, point.theta);
    Ok(table.value(l, m.unsigned_abs() as usize) * azimuthal(m, point.phi).0)
}

/// Real coefficients of a function in V_L.
#[derive(Clone, Debug, PartialEq)]
pub struct SphericalSignal {
    bandwidth: usize,
    coefficients: Vec<f64>,
}

impl SphericalSignal {
    pub fn new(bandwidth: usize, coefficients: Vec<f64>) -> Result<Self> {
        let expected = (bandwidth + 1) * (bandwidth + 1);
        if coefficients.len() != expected {
            return Err(Error::Structural(format!(
                "V_{bandwidth} has {expected} coefficients, got {}",
                coefficients.len()
            )));
        }
        if bandwidth > MAX_DEGREE {
            return Err(Error::Domain(format!("bandwidth {bandwidth} above {MAX_DEGREE}")));
        }
        Ok(Self { bandwidth, coefficients })
    }

    pub fn zero(bandwidth: usize) -> Self {
        Self { bandwidth, coefficients: vec![0.0; (bandwidth + 1) * (bandwidth + 1)] }
    }

    /// Signal with the listed `(ℓ, m, value)` entries and zeros elsewhere.
    pub fn from_terms(bandwidth: usize, terms: &[(usize, i64, f64)]) -> Result<Self> {
        let mut s = Self::zero(bandwidth);
        for &(l, m, v) in terms {
            s.set(l, m, v)?;
        }
        Ok(s)
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn basis_convention(&self) -> &'static str {
        BASIS_CONVENTION
    }

    pub fn get(&self, l: usize, m: i64) -> f64 {
        if l > self.bandwidth || m.unsigned_abs() as usize > l {
            return 0.0;
        }
        self.coefficients[sphere_index(l, m)]
    }

    pub fn set(&mut self, l: usize, m: i64, value: f64) -> Result<()> {
        if l > self.bandwidth || m.unsigned_abs() as usize > l {
            return Err(Error::Domain(format!("(ℓ, m) = ({l}, {m}) outside V_{}", self.bandwidth)));
        }
        self.coefficients[sphere_index(l, m)] = value;
        Ok(())
    }

    pub fn l1_norm(&self) -> f64 {
        self.coefficients.iter().map(|c| c.abs()).sum()
    }

    /// Equals ‖f‖_{L²(S²)} by orthonormality.
    pub fn l2_norm(&self) -> f64 {
        self.coefficients.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// `∫_{S²} f dσ = √(4π) f̂(0, 0)`.
    pub fn integral(&self) -> f64 {
        (4.0 * PI).sqrt() * self.coefficients[0]
    }

    pub fn fourier_ratio(&self) -> Result<f64> {
        self.to_spectral().fourier_ratio()
    }

    pub fn to_spectral(&self) -> SpectralVector {
        let coeffs = self.coefficients.iter().map(|&c| Complex64::new(c, 0.0)).collect();
        SpectralVector::new(SpectralDomain::Sphere { bandwidth: self.bandwidth }, coeffs)
            .expect("length matches by construction")
    }

    /// Real parts of a sphere-mode spectral vector.
    pub fn from_spectral(spec: &SpectralVector) -> Result<Self> {
        let SpectralDomain::Sphere { bandwidth } = spec.domain() else {
            return Err(Error::Mode("expected a sphere-mode spectrum".into()));
        };
        Self::new(bandwidth, spec.coefficients().iter().map(|c| c.re).collect())
    }

    /// Spectral Laplace–Beltrami operator: `f̂(ℓ,m) ↦ −ℓ(ℓ+1) f̂(ℓ,m)`.
    pub fn laplacian(&self) -> SphericalSignal {
        let coefficients = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let (l, _) = sphere_degree_order(i);
                -((l * (l + 1)) as f64) * c
            })
            .collect();
        Self { bandwidth: self.bandwidth, coefficients }
    }

    /// Swaps every `(ℓ, m)` coefficient with `(ℓ, −m)`.
    pub fn mirror_orders(&self) -> SphericalSignal {
        let mut out = self.clone();
        for l in 0..=self.bandwidth {
            for m in -(l as i64)..=(l as i64) {
                out.coefficients[sphere_index(l, -m)] = self.coefficients[sphere_index(l, m)];
            }
        }
        out
    }
}

/// Nodes and positive weights on S².
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule {
    bandwidth: usize,
    nodes: Vec<SpherePoint>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    /// Polynomial degree integrated exactly, `2L`.
    pub fn exactness_degree(&self) -> usize {
        2 * self.bandwidth
    }

    pub fn nodes(&self) -> &[SpherePoint] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, values: &[f64]) -> Result<f64> {
        if values.len() != self.len() {
            return Err(Error::Structural(format!(
                "{} values for a rule with {} nodes",
                values.len(),
                self.len()
            )));
        }
        Ok(self.weights.iter().zip(values).map(|(w, v)| w * v).sum())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("theta,phi,weight\n");
        for (p, w) in self.nodes.iter().zip(&self.weights) {
            let _ = writeln!(out, "{:.17e},{:.17e},{:.17e}", p.theta, p.phi, w);
        }
        out
    }
}

/// Gauss–Legendre nodes and weights on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            // Legendre P_n and P_n' by the three-term recurrence.
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else { p1 };
            let pm = if n == 0 { 0.0 } else { p0 };
            dp = n as f64 * (x * pn - pm) / (x * x - 1.0);
            let step = pn / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = x;
        weights[i] = w;
        nodes[n - 1 - i] = -x;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Gauss–Legendre in cos θ (L+1 nodes) tensored with 2L+1 equally spaced
/// φ values; integrates every spherical polynomial of degree ≤ 2L exactly.
pub fn build_quadrature(bandwidth: usize) -> Result<QuadratureRule> {
    if bandwidth == 0 {
        return Err(Error::Domain("quadrature bandwidth must be at least 1".into()));
    }
    if bandwidth > MAX_DEGREE {
        return Err(Error::Domain(format!("bandwidth {bandwidth} above {MAX_DEGREE}")));
    }
    let (xs, ws) = gauss_legendre(bandwidth + 1);
    let n_phi = 2 * bandwidth + 1;
    let dphi = 2.0 * PI / n_phi as f64;
    let mut nodes = Vec::with_capacity(xs.len() * n_phi);
    let mut weights = Vec::with_capacity(xs.len() * n_phi);
    for (x, w) in xs.iter().zip(&ws) {
        let theta = x.clamp(-1.0, 1.0).acos();
        for k in 0..n_phi {
            nodes.push(SpherePoint::new(theta, k as f64 * dphi));
            weights.push(dphi * w);
        }
    }
    Ok(QuadratureRule { bandwidth, nodes, weights })
}

/// Discrete coefficients `ĝ(ℓ,m) = Σ_j w_j g(ω_j) Y_ℓ^m(ω_j)` for ℓ ≤ `bandwidth`.
///
/// For input in V_L these equal the continuous coefficients exactly, since
/// `f Y_ℓ^m` has degree at most 2L.
pub fn analyze(values: &[f64], rule: &QuadratureRule, bandwidth: usize) -> Result<SphericalSignal> {
    if values.len() != rule.len() {
        return Err(Error::Structural(format!(
            "{} node values for a rule with {} nodes",
            values.len(),
            rule.len()
        )));
    }
    if bandwidth > rule.bandwidth {
        return Err(Error::Domain(format!(
            "rule of bandwidth {} is not exact for V_{bandwidth}",
            rule.bandwidth
        )));
    }
    let mut coefficients = vec![0.0; (bandwidth + 1) * (bandwidth + 1)];
    for ((node, w), v) in rule.nodes.iter().zip(&rule.weights).zip(values) {
        let scale = w * v;
        if scale == 0.0 {
            continue;
        }
        for (c, y) in coefficients.iter_mut().zip(real_sh_all(bandwidth, *node)) {
            *c += scale * y;
        }
    }
    SphericalSignal::new(bandwidth, coefficients)
}

/// [`analyze`] applied to point evaluations of `f` at the rule's nodes.
pub fn analyze_fn(
    f: impl Fn(SpherePoint) -> f64,
    rule: &QuadratureRule,
    bandwidth: usize,
) -> Result<SphericalSignal> {
    let values: Vec<f64> = rule.nodes.iter().map(|&p| f(p)).collect();
    analyze(&values, rule, bandwidth)
}

/// Pointwise expansion `Σ f̂(ℓ,m) Y_ℓ^m(ω)`.
pub fn synthesize(signal: &SphericalSignal, points: &[SpherePoint]) -> Vec<f64> {
    points
        .iter()
        .map(|&p| {
            real_sh_all(signal.bandwidth, p)
                .iter()
                .zip(&signal.coefficients)
                .map(|(y, c)| y * c)
                .sum()
        })
        .collect()
}

/// Value and derivatives of a bandlimited signal at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointDerivatives {
    pub value: f64,
    pub d_theta: f64,
    pub d_phi: f64,
    pub d2_theta: f64,
    pub d2_phi: f64,
}

impl PointDerivatives {
    /// `|∇_{S²} f|`; at the poles the φ-term is dropped (it vanishes there for V_L).
    pub fn gradient_norm(&self, theta: f64) -> f64 {
        let s = theta.sin();
        if s.abs() < 1e-300 {
            return self.d_theta.abs();
        }
        (self.d_theta * self.d_theta + (self.d_phi / s).powi(2)).sqrt()
    }

    /// `Δf = ∂²_θ f + cot θ ∂_θ f + ∂²_φ f / sin² θ` (valid away from the poles).
    pub fn laplacian(&self, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        self.d2_theta + c / s * self.d_theta + self.d2_phi / (s * s)
    }
}

/// Exact derivatives of the expansion at `point`.
pub fn evaluate_with_derivatives(signal: &SphericalSignal, point: SpherePoint) -> PointDerivatives {
    let table = LegendreTable::new(signal.bandwidth, point.theta);
    let mut out = PointDerivatives { value: 0.0, d_theta: 0.0, d_phi: 0.0, d2_theta: 0.0, d2_phi: 0.0 };
    for l in 0..=signal.bandwidth {
        for m in -(l as i64)..=(l as i64) {
            let c = signal.coefficients[sphere_index(l, m)];
            if c == 0.0 {
                continue;
            }
            let k = m.unsigned_abs() as usize;
            let (az, daz) = azimuthal(m, point.phi);
            let p = table.value(l, k);
            out.value += c * p * az;
            out.d_theta += c * table.d_theta(l, k) * az;
            out.d2_theta += c * table.d2_theta(l, k) * az;
            out.d_phi += c * p * daz;
            out.d2_phi -= c * p * az * (k * k) as f64;
        }
    }
    out
}

/// Norm data of a spherical signal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphereNorms {
    pub l2: f64,
    pub c2: f64,
    /// `∫_{S²} f dσ`.
    pub integral: f64,
    pub sup: f64,
    pub grad_sup: f64,
    pub laplacian_sup: f64,
    pub provenance: Provenance,
}

impl SphereNorms {
    fn validate(&self) -> Result<()> {
        if !(self.l2 > 0.0) || !self.l2.is_finite() {
            return Err(Error::Domain("L² norm must be positive".into()));
        }
        if !self.c2.is_finite() || !self.integral.is_finite() {
            return Err(Error::Data("non-finite norm data".into()));
        }
        Ok(())
    }
}

/// Equiangular evaluation grid of `4L × 8L` points, offset from the poles.
pub fn sup_grid(bandwidth: usize) -> Vec<SpherePoint> {
    let l = bandwidth.max(1);
    let (n_theta, n_phi) = (4 * l, 8 * l);
    let mut pts = Vec::with_capacity(n_theta * n_phi);
    for i in 0..n_theta {
        let theta = (i as f64 + 0.5) * PI / n_theta as f64;
        for j in 0..n_phi {
            pts.push(SpherePoint::new(theta, j as f64 * 2.0 * PI / n_phi as f64));
        }
    }
    pts
}

/// L² norm and integral from the coefficients; sup|f|, sup|∇f| and sup|Δf|
/// on [`sup_grid`].
pub fn sphere_norms(signal: &SphericalSignal) -> SphereNorms {
    let lap = signal.laplacian();
    let mut sup: f64 = 0.0;
    let mut grad_sup: f64 = 0.0;
    let mut laplacian_sup: f64 = 0.0;
    for p in sup_grid(signal.bandwidth) {
        let d = evaluate_with_derivatives(signal, p);
        sup = sup.max(d.value.abs());
        grad_sup = grad_sup.max(d.gradient_norm(p.theta));
        laplacian_sup = laplacian_sup.max(synthesize(&lap, &[p])[0].abs());
    }
    SphereNorms {
        l2: signal.l2_norm(),
        c2: sup.max(grad_sup).max(laplacian_sup),
        integral: signal.integral(),
        sup,
        grad_sup,
        laplacian_sup,
        provenance: Provenance::Estimated,
    }
}

/// Terms of the spherical Fourier-ratio bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphereFrBoundReport {
    pub bandwidth: usize,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub r: f64,
    pub c0: f64,
    pub norms: SphereNorms,
}

/// `A_L = |∫f|/‖f‖`, `B_L = C₀ (‖f‖_{C²}/‖f‖) ln L`, `C_L = C₀ (‖f‖_{C²}/‖f‖) / L`.
pub fn compute_rl(norms: &SphereNorms, bandwidth: usize) -> Result<SphereFrBoundReport> {
    if bandwidth < 2 {
        return Err(Error::Domain(format!(
            "bandwidth {bandwidth} < 2: ln L vanishes and the logarithmic term degenerates"
        )));
    }
    norms.validate()?;
    let ratio = norms.c2 / norms.l2;
    let a = norms.integral.abs() / norms.l2;
    let b = C0 * ratio * (bandwidth as f64).ln();
    let c = C0 * ratio / bandwidth as f64;
    Ok(SphereFrBoundReport { bandwidth, a, b, c, r: a + b + c, c0: C0, norms: *norms })
}

/// Bound for nonnegative signals with positive mass μ = ∫f:
/// `√(4π) + C₀√(4π) ‖f‖_{C²}/μ (ln L + 1/L)`.
///
/// The caller asserts nonnegativity; only μ > 0 is checked.
pub fn nonnegative_bound(norms: &SphereNorms, bandwidth: usize) -> Result<f64> {
    if bandwidth < 2 {
        return Err(Error::Domain(format!("bandwidth {bandwidth} < 2")));
    }
    if !(norms.integral > 0.0) {
        return Err(Error::Domain("nonnegative bound needs ∫f > 0".into()));
    }
    let root = (4.0 * PI).sqrt();
    let lf = bandwidth as f64;
    Ok(root + C0 * root * norms.c2 / norms.integral * (lf.ln() + 1.0 / lf))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphereFrCheck {
    pub bound: SphereFrBoundReport,
    pub fr_measured: f64,
    pub slack: f64,
}

impl SphereFrCheck {
    pub const CSV_HEADER: &'static str = "L,A,B,C,r,fr_measured,slack,C0,provenance";

    pub fn csv_row(&self) -> String {
        let b = &self.bound;
        format!(
            "{},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{}",
            b.bandwidth, b.a, b.b, b.c, b.r, self.fr_measured, self.slack, b.c0, b.norms.provenance
        )
    }
}

/// FR_L measured from the coefficients against `r_L` with the given norms.
pub fn verify_sphere_fr_bound_with(signal: &SphericalSignal, norms: &SphereNorms) -> Result<SphereFrCheck> {
    let bound = compute_rl(norms, signal.bandwidth)?;
    let fr_measured = signal.fourier_ratio()?;
    Ok(SphereFrCheck { bound, fr_measured, slack: bound.r - fr_measured })
}

/// [`verify_sphere_fr_bound_with`] using [`sphere_norms`].
pub fn verify_sphere_fr_bound(signal: &SphericalSignal) -> Result<SphereFrCheck> {
    verify_sphere_fr_bound_with(signal, &sphere_norms(signal))
}

/// `⌈C r²/ε² ln(r/ε)² ln((L+1)²)⌉`; never clamped since sphere samples may repeat.
pub fn sample_size_sphere(r: f64, eps: f64, bandwidth: usize, c_univ: f64) -> Result<SampleSize> {
    check_formula_inputs(r, eps, c_univ)?;
    if bandwidth == 0 {
        return Err(Error::Domain("bandwidth must be at least 1".into()));
    }
    let d = ((bandwidth + 1) * (bandwidth + 1)) as f64;
    let formula = sample_formula(r, eps, c_univ, d);
    let count = formula.ceil();
    if count >= u64::MAX as f64 {
        return Err(Error::SampleBudget { requested: u64::MAX, limit: u64::MAX });
    }
    Ok(SampleSize { count: (count as u64).max(1), formula, clamped: false })
}
