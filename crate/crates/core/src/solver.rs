//! Basis pursuit with noise,
//!
//! ```text
//! minimize ‖a‖₁  subject to  ‖A a − y‖₂ ≤ δ,
//! ```
//!
//! over complex coefficient vectors, for a matrix-free measurement operator.
//! [`solve_bpdn`] is a primal-dual hybrid gradient (Chambolle–Pock) iteration
//! with residual-balancing step sizes; [`oracle_solve`] is an independent
//! log-barrier Newton method for small dense instances; [`check_kkt`]
//! certifies a candidate without trusting either.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::sampler::SampleSet;
use crate::spectral::{TorusFft, C64};

const ZERO: C64 = C64::new(0.0, 0.0);

/// Linear map from coefficients to sampled values, with its adjoint and a
/// bound on its operator norm.
pub trait MeasurementOperator: Send + Sync {
    fn rows(&self) -> usize;
    fn cols(&self) -> usize;
    /// `out = A a`.
    fn apply(&self, a: &[C64], out: &mut [C64]);
    /// `out = Aᴴ y`.
    fn adjoint(&self, y: &[C64], out: &mut [C64]);
    /// Upper bound on `‖A‖₂`.
    fn norm_bound(&self) -> f64;
}

/// Rows of the unitary synthesis matrix `N^{-d/2} χ(x·m)` at the sampled
/// grid points; applied with two FFTs.
#[derive(Clone, Debug)]
pub struct SubsampledDft {
    fft: TorusFft,
    sample: Vec<usize>,
}

impl SubsampledDft {
    pub fn new(sample: &SampleSet) -> Result<Self> {
        Ok(Self { fft: TorusFft::new(sample.dims(), sample.side())?, sample: sample.indices().to_vec() })
    }
}

impl MeasurementOperator for SubsampledDft {
    fn rows(&self) -> usize {
        self.sample.len()
    }

    fn cols(&self) -> usize {
        self.fft.len()
    }

    fn apply(&self, a: &[C64], out: &mut [C64]) {
        let mut buf = a.to_vec();
        self.fft.inverse(&mut buf);
        for (o, &i) in out.iter_mut().zip(&self.sample) {
            *o = buf[i];
        }
    }

    fn adjoint(&self, y: &[C64], out: &mut [C64]) {
        out.fill(ZERO);
        for (&v, &i) in y.iter().zip(&self.sample) {
            out[i] = v;
        }
        self.fft.forward(out);
    }

    /// A row restriction of a unitary map.
    fn norm_bound(&self) -> f64 {
        1.0
    }
}

/// Explicit matrix; the norm bound is the spectral norm (exact for narrow
/// matrices, power iteration on AᴴA otherwise) inflated by 1%.
#[derive(Clone, Debug)]
pub struct DenseOperator {
    matrix: DMatrix<C64>,
    bound: f64,
}

impl DenseOperator {
    pub fn new(matrix: DMatrix<C64>) -> Self {
        let bound = 1.01 * power_iteration_norm(&matrix);
        Self { matrix, bound }
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }
}

/// Above this many columns the operator norm is estimated by power iteration.
const EXACT_NORM_MAX_COLS: usize = 1024;

fn power_iteration_norm(m: &DMatrix<C64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    let n = m.ncols();
    if n <= EXACT_NORM_MAX_COLS {
        // Exact: largest eigenvalue of the Gram matrix. Power iteration stalls when the
        // top of the spectrum is clustered, which is the usual case for random sampling.
        let gram = m.ad_mul(m);
        let top = gram.symmetric_eigenvalues().iter().cloned().fold(0.0, f64::max);
        return top.max(0.0).sqrt();
    }
    // Deterministic start with no special alignment to any column.
    let mut v = DVector::from_fn(n, |i, _| C64::new(1.0 + (i as f64 * 0.618_033_988_75).fract(), 0.0));
    v /= C64::new(v.norm(), 0.0);
    let mut est = 0.0;
    for _ in 0..1000 {
        let w = m.ad_mul(&(m * &v));
        let norm = w.norm();
        if norm == 0.0 {
            return 0.0;
        }
        v = w / C64::new(norm, 0.0);
        let prev = est;
        est = norm.sqrt();
        if (est - prev).abs() <= 1e-9 * est {
            break;
        }
    }
    (m * &v).norm().max(est)
}

impl MeasurementOperator for DenseOperator {
    fn rows(&self) -> usize {
        self.matrix.nrows()
    }

    fn cols(&self) -> usize {
        self.matrix.ncols()
    }

    fn apply(&self, a: &[C64], out: &mut [C64]) {
        let r = &self.matrix * DVector::from_column_slice(a);
        out.copy_from_slice(r.as_slice());
    }

    fn adjoint(&self, y: &[C64], out: &mut [C64]) {
        let r = self.matrix.ad_mul(&DVector::from_column_slice(y));
        out.copy_from_slice(r.as_slice());
    }

    fn norm_bound(&self) -> f64 {
        self.bound
    }
}

/// Dense copy of an operator, one column per unit vector.
pub fn materialize(op: &dyn MeasurementOperator) -> DMatrix<C64> {
    let (m, n) = (op.rows(), op.cols());
    let mut out = DMatrix::from_element(m, n, ZERO);
    let mut e = vec![ZERO; n];
    let mut col = vec![ZERO; m];
    for j in 0..n {
        e[j] = C64::new(1.0, 0.0);
        op.apply(&e, &mut col);
        out.column_mut(j).copy_from_slice(&col);
        e[j] = ZERO;
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverConfig {
    /// Feasibility radius δ.
    pub delta: f64,
    pub max_iter: usize,
    /// Relative tolerance on the duality gap and on feasibility.
    pub tol: f64,
}

impl SolverConfig {
    pub const DEFAULT_MAX_ITER: usize = 50_000;
    pub const DEFAULT_TOL: f64 = 1e-8;

    pub fn new(delta: f64) -> Result<Self> {
        Self { delta, max_iter: Self::DEFAULT_MAX_ITER, tol: Self::DEFAULT_TOL }.validated()
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Result<Self> {
        self.tol = tol;
        self.validated()
    }

    fn validated(self) -> Result<Self> {
        if !(self.delta >= 0.0) || !self.delta.is_finite() {
            return Err(Error::Domain(format!("feasibility radius {} must be finite and ≥ 0", self.delta)));
        }
        if !(self.tol > 0.0) {
            return Err(Error::Domain(format!("tolerance {} must be positive", self.tol)));
        }
        Ok(self)
    }
}

/// Outcome of one solve.
#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport {
    pub coefficients: Vec<C64>,
    /// `‖a*‖₁`.
    pub objective: f64,
    /// `‖A a* − y‖₂ − δ`; nonpositive when feasible.
    pub feasibility_residual: f64,
    /// Gap against the scaled dual iterate.
    pub duality_gap: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

fn l1(v: &[C64]) -> f64 {
    v.iter().map(|c| c.norm()).sum()
}

fn soft_threshold(v: C64, t: f64) -> C64 {
    let mag = v.norm();
    if mag <= t {
        ZERO
    } else {
        v * ((mag - t) / mag)
    }
}

fn check_shapes(op: &dyn MeasurementOperator, y: &[C64]) -> Result<()> {
    if y.len() != op.rows() {
        return Err(Error::Structural(format!("{} observations for an operator with {} rows", y.len(), op.rows())));
    }
    Ok(())
}

/// Chambolle–Pock on `min ‖a‖₁ + ι{‖Aa − y‖ ≤ δ}`:
///
/// ```text
/// a⁺ = soft(a − τ Aᴴz, τ)
/// z⁺ = prox_{σF*}(z + σ A(2a⁺ − a)),   prox_{σF*}(v) = v − σ proj_ball(v/σ)
/// ```
///
/// with τσ‖A‖² < 1 kept fixed while τ/σ adapts to balance the primal and dual
/// residuals. Stops once `‖Aa − y‖ − δ ≤ tol·max(1, ‖y‖)` and the gap against
/// the rescaled dual iterate is at most `tol·max(1, ‖a‖₁)`.
pub fn solve_bpdn(op: &dyn MeasurementOperator, y: &[C64], cfg: &SolverConfig) -> Result<SolveReport> {
    check_shapes(op, y)?;
    let cfg = cfg.validated()?;
    let (m, n) = (op.rows(), op.cols());
    let delta = cfg.delta;
    let y_norm = norm(y);
    if y_norm <= delta {
        return Ok(SolveReport {
            coefficients: vec![ZERO; n],
            objective: 0.0,
            feasibility_residual: y_norm - delta,
            duality_gap: 0.0,
            iterations: 0,
            converged: true,
        });
    }
    let bound = op.norm_bound();
    if !(bound > 0.0) {
        return Err(Error::Degenerate("operator norm bound is zero".into()));
    }
    let feas_tol = cfg.tol * y_norm.max(1.0);

    let mut tau = 0.99 / bound;
    let mut sigma = 0.99 / bound;
    let mut alpha = 0.5;
    const ETA: f64 = 0.95;
    const BALANCE: f64 = 1.5;

    let mut a = vec![ZERO; n];
    let mut z = vec![ZERO; m];
    let mut az = vec![ZERO; n]; // Aᴴz
    let mut aa = vec![ZERO; m]; // Aa
    let mut a_new = vec![ZERO; n];
    let mut aa_new = vec![ZERO; m];
    let mut z_new = vec![ZERO; m];
    let mut az_new = vec![ZERO; n];
    let mut v = vec![ZERO; m];

    let mut gap = f64::INFINITY;
    let mut residual = y_norm;
    for iter in 1..=cfg.max_iter {
        for i in 0..n {
            a_new[i] = soft_threshold(a[i] - az[i] * tau, tau);
        }
        op.apply(&a_new, &mut aa_new);
        for k in 0..m {
            v[k] = z[k] + (aa_new[k] * 2.0 - aa[k]) * sigma;
        }
        // prox_{σF*}(v) = v − σ (y + proj_{δ-ball}(v/σ − y)).
        let mut dist = 0.0;
        for k in 0..m {
            dist += (v[k] / sigma - y[k]).norm_sqr();
        }
        let dist = dist.sqrt();
        let shrink = if dist > delta { delta / dist } else { 1.0 };
        for k in 0..m {
            let w = v[k] / sigma - y[k];
            z_new[k] = v[k] - (y[k] + w * shrink) * sigma;
        }
        op.adjoint(&z_new, &mut az_new);

        let mut p_sq = 0.0;
        for i in 0..n {
            p_sq += ((a[i] - a_new[i]) / tau - (az[i] - az_new[i])).norm_sqr();
        }
        let mut d_sq = 0.0;
        for k in 0..m {
            d_sq += ((z[k] - z_new[k]) / sigma - (aa[k] - aa_new[k])).norm_sqr();
        }

        std::mem::swap(&mut a, &mut a_new);
        std::mem::swap(&mut aa, &mut aa_new);
        std::mem::swap(&mut z, &mut z_new);
        std::mem::swap(&mut az, &mut az_new);

        let (p, d) = (p_sq.sqrt(), d_sq.sqrt());
        if p > BALANCE * d {
            tau /= 1.0 - alpha;
            sigma *= 1.0 - alpha;
            alpha *= ETA;
        } else if d > BALANCE * p {
            tau *= 1.0 - alpha;
            sigma /= 1.0 - alpha;
            alpha *= ETA;
        }

        residual = aa.iter().zip(y).map(|(p, q)| (p - q).norm_sqr()).sum::<f64>().sqrt();
        let objective = l1(&a);
        gap = objective - dual_value(&z, &az, y, delta);
        if residual - delta <= feas_tol && gap <= cfg.tol * objective.max(1.0) {
            if let Some(polished) = polish(op, y, delta, &a, feas_tol, objective * (1.0 + cfg.tol)) {
                a = polished;
                op.apply(&a, &mut aa);
                residual = aa.iter().zip(y).map(|(p, q)| (p - q).norm_sqr()).sum::<f64>().sqrt();
            }
            let objective = l1(&a);
            return Ok(SolveReport {
                coefficients: a,
                objective,
                feasibility_residual: residual - delta,
                duality_gap: gap,
                iterations: iter,
                converged: true,
            });
        }
    }
    log::warn!("basis pursuit did not converge in {} iterations (gap {gap:.3e})", cfg.max_iter);
    let objective = l1(&a);
    Ok(SolveReport {
        coefficients: a,
        objective,
        feasibility_residual: residual - delta,
        duality_gap: gap,
        iterations: cfg.max_iter,
        converged: false,
    })
}

/// Largest support [`polish`] refines.
const POLISH_MAX_SUPPORT: usize = 512;

/// Newton refinement on the support of a converged iterate.
///
/// Solves the stationarity system of the reduced problem with the support
/// and the active constraint fixed: `sgn(a) + λ A_Sᴴ(A_S a − y) = 0`,
/// `‖A_S a − y‖ = δ` (or `sgn(a) + A_Sᴴν = 0`, `A_S a = y` for δ = 0).
/// With δ > 0 the refined point is kept only if it is a KKT point of the full
/// problem (feasible, λ > 0, stationary on the support, `|(Aᴴν)ᵢ| ≤ 1` off it);
/// indices violating the last condition join the support for another round.
/// With δ = 0 the dual is not unique, so the point is kept if it is feasible
/// and does not raise the objective above `max_objective`.
fn polish(
    op: &dyn MeasurementOperator,
    y: &[C64],
    delta: f64,
    a: &[C64],
    feas_tol: f64,
    max_objective: f64,
) -> Option<Vec<C64>> {
    // First-order iterates carry spurious entries far below the true support;
    // try the pruned support before the raw one.
    let amax = a.iter().fold(0.0f64, |acc, c| acc.max(c.norm()));
    let pruned: Vec<usize> = (0..a.len()).filter(|&i| a[i].norm() > SUPPORT_THRESHOLD * amax).collect();
    let raw: Vec<usize> = (0..a.len()).filter(|&i| a[i] != ZERO).collect();
    let starts = if raw.len() == pruned.len() { vec![pruned] } else { vec![pruned, raw] };
    for start in starts {
        let mut support = start;
        let mut init = a.to_vec();
        for _ in 0..POLISH_ROUNDS {
            match polish_on(op, y, delta, &init, &support, feas_tol, max_objective) {
                Polish::Accepted(out) => return Some(out),
                Polish::Failed => break,
                Polish::Violations(extra) => {
                    for (i, u) in extra {
                        // Stationarity gives sgn(aᵢ) = −(Aᴴν)ᵢ; start small in that direction.
                        init[i] = -u / u.norm() * (SUPPORT_THRESHOLD * amax);
                        support.push(i);
                    }
                    support.sort_unstable();
                }
            }
        }
    }
    None
}

/// Support-growing rounds in [`polish`].
const POLISH_ROUNDS: usize = 4;

enum Polish {
    Accepted(Vec<C64>),
    /// Off-support indices with `|(Aᴴν)ᵢ| > 1`, with `(Aᴴν)ᵢ`.
    Violations(Vec<(usize, C64)>),
    Failed,
}

fn polish_on(
    op: &dyn MeasurementOperator,
    y: &[C64],
    delta: f64,
    a: &[C64],
    support: &[usize],
    feas_tol: f64,
    max_objective: f64,
) -> Polish {
    match polish_newton(op, y, delta, a, support, feas_tol, max_objective) {
        Some(p) => p,
        None => Polish::Failed,
    }
}

fn polish_newton(
    op: &dyn MeasurementOperator,
    y: &[C64],
    delta: f64,
    a: &[C64],
    support: &[usize],
    feas_tol: f64,
    max_objective: f64,
) -> Option<Polish> {
    let s = support.len();
    if s == 0 || s > POLISH_MAX_SUPPORT {
        return None;
    }
    let m = op.rows();
    let mut cols = DMatrix::from_element(m, s, ZERO);
    let mut e = vec![ZERO; a.len()];
    let mut col = vec![ZERO; m];
    for (j, &i) in support.iter().enumerate() {
        e[i] = C64::new(1.0, 0.0);
        op.apply(&e, &mut col);
        cols.column_mut(j).copy_from_slice(&col);
        e[i] = ZERO;
    }
    let mr = DMatrix::from_fn(2 * m, 2 * s, |i, j| {
        let c = cols[(i % m, j % s)];
        match (i < m, j < s) {
            (true, true) | (false, false) => c.re,
            (true, false) => -c.im,
            (false, true) => c.im,
        }
    });
    let yr = DVector::from_fn(2 * m, |i, _| if i < m { y[i].re } else { y[i - m].im });
    let mut x = DVector::from_fn(2 * s, |j, _| if j < s { a[support[j]].re } else { a[support[j - s]].im });
    let mtm = mr.transpose() * &mr;

    let grad_f = |x: &DVector<f64>| {
        DVector::from_fn(2 * s, |j, _| {
            let k = j % s;
            x[j] / x[k].hypot(x[k + s])
        })
    };
    let hess_f = |x: &DVector<f64>| {
        let mut h = DMatrix::zeros(2 * s, 2 * s);
        for k in 0..s {
            let r = x[k].hypot(x[k + s]);
            let (gu, gv) = (x[k] / r, x[k + s] / r);
            h[(k, k)] = (1.0 - gu * gu) / r;
            h[(k + s, k + s)] = (1.0 - gv * gv) / r;
            h[(k, k + s)] = -gu * gv / r;
            h[(k + s, k)] = -gu * gv / r;
        }
        h
    };

    let equality = delta == 0.0;
    let n_mult = if equality { 2 * m } else { 1 };
    let dim = 2 * s + n_mult;
    let mut mult = if equality {
        // Least-squares ν from ∇f + Mᵀν = 0.
        mr.transpose().svd(true, true).solve(&(-grad_f(&x)), 1e-12).ok()?
    } else {
        let r = &mr * &x - &yr;
        let gc = mr.transpose() * r;
        let den = gc.norm_squared();
        if den == 0.0 {
            return None;
        }
        DVector::from_element(1, -grad_f(&x).dot(&gc) / den)
    };

    let residual_of = |x: &DVector<f64>, mult: &DVector<f64>| {
        let r = &mr * x - &yr;
        let mut out = DVector::zeros(dim);
        if equality {
            out.rows_mut(0, 2 * s).copy_from(&(grad_f(x) + mr.transpose() * mult));
            out.rows_mut(2 * s, n_mult).copy_from(&r);
        } else {
            out.rows_mut(0, 2 * s).copy_from(&(grad_f(x) + mr.transpose() * &r * mult[0]));
            out[2 * s] = 0.5 * (r.norm_squared() - delta * delta);
        }
        out
    };

    let mut f = residual_of(&x, &mult);
    for _ in 0..30 {
        let mut jac = DMatrix::zeros(dim, dim);
        if equality {
            jac.view_mut((0, 0), (2 * s, 2 * s)).copy_from(&hess_f(&x));
            jac.view_mut((0, 2 * s), (2 * s, n_mult)).copy_from(&mr.transpose());
            jac.view_mut((2 * s, 0), (n_mult, 2 * s)).copy_from(&mr);
        } else {
            let gc = mr.transpose() * (&mr * &x - &yr);
            jac.view_mut((0, 0), (2 * s, 2 * s)).copy_from(&(hess_f(&x) + &mtm * mult[0]));
            jac.view_mut((0, 2 * s), (2 * s, 1)).copy_from(&gc);
            jac.view_mut((2 * s, 0), (1, 2 * s)).copy_from(&gc.transpose());
        }
        let step = jac.svd(true, true).solve(&(-&f), 1e-14).ok()?;
        let x_new = &x + step.rows(0, 2 * s);
        let mult_new = &mult + step.rows(2 * s, n_mult);
        if (0..s).any(|k| x_new[k].hypot(x_new[k + s]) < 0.5 * x[k].hypot(x[k + s])) {
            return None;
        }
        let f_new = residual_of(&x_new, &mult_new);
        if !(f_new.norm() < f.norm()) {
            break;
        }
        x = x_new;
        mult = mult_new;
        f = f_new;
    }

    let mut out = vec![ZERO; a.len()];
    for (j, &i) in support.iter().enumerate() {
        out[i] = C64::new(x[j], x[j + s]);
    }
    let mut r = vec![ZERO; m];
    op.apply(&out, &mut r);
    for (rk, yk) in r.iter_mut().zip(y) {
        *rk -= yk;
    }
    if norm(&r) - delta > feas_tol {
        return None;
    }
    if equality {
        return (l1(&out) <= max_objective).then_some(Polish::Accepted(out));
    }
    if !(mult[0] > 0.0) {
        return None;
    }
    // ν = λ r in sample space; sgn(a) = −Aᴴν on the support, |Aᴴν| ≤ 1 off it.
    let nu: Vec<C64> = r.iter().map(|c| c * mult[0]).collect();
    let mut u = vec![ZERO; a.len()];
    op.adjoint(&nu, &mut u);
    let mut on = vec![false; a.len()];
    for &i in support {
        on[i] = true;
        if (u[i] + out[i] / out[i].norm()).norm() > POLISH_KKT_TOL {
            return None;
        }
    }
    let violations: Vec<(usize, C64)> =
        (0..a.len()).filter(|&i| !on[i] && u[i].norm() > 1.0 + POLISH_KKT_TOL).map(|i| (i, u[i])).collect();
    Some(if violations.is_empty() { Polish::Accepted(out) } else { Polish::Violations(violations) })
}

/// Stationarity tolerance a polished point must meet.
const POLISH_KKT_TOL: f64 = 1e-9;

/// Dual objective `−Re⟨z, y⟩ − δ‖z‖` at `z / max(1, ‖Aᴴz‖∞)`.
fn dual_value(z: &[C64], az: &[C64], y: &[C64], delta: f64) -> f64 {
    let inf = az.iter().fold(0.0f64, |acc, c| acc.max(c.norm()));
    let scale = inf.max(1.0);
    let inner: f64 = z.iter().zip(y).map(|(zk, yk)| (zk.conj() * yk).re).sum();
    -(inner + delta * norm(z)) / scale
}

/// Largest instance [`oracle_solve`] accepts in either dimension.
pub const ORACLE_MAX_DIM: usize = 64;

/// Target duality gap of [`oracle_solve`].
pub const ORACLE_GAP: f64 = 1e-12;

/// Gap accepted from the last centered point when a later stage fails.
const ORACLE_FALLBACK_GAP: f64 = 1e-7;

/// Log-barrier Newton method on the epigraph form
///
/// ```text
/// minimize Σ tᵢ  subject to |aᵢ| ≤ tᵢ,  ‖A a − y‖ ≤ δ,
/// ```
///
/// in real variables. Each centering step minimizes
/// `s Σ t − Σ log(tᵢ² − |aᵢ|²) − log(δ² − ‖Aa − y‖²)` by damped Newton steps
/// (step `1/(1+λ)` for Newton decrement λ); δ = 0 is handled as an equality
/// constraint by restricting to the affine solution set. Starts from the
/// minimum-norm least-squares solution and raises `s` until the central-path
/// gap `ν/s` is at most [`ORACLE_GAP`].
pub fn oracle_solve(matrix: &DMatrix<C64>, y: &[C64], delta: f64) -> Result<Vec<C64>> {
    let (m, n) = matrix.shape();
    if m > ORACLE_MAX_DIM || n > ORACLE_MAX_DIM {
        return Err(Error::Structural(format!("oracle instance {m}×{n} exceeds {ORACLE_MAX_DIM}")));
    }
    if y.len() != m {
        return Err(Error::Structural(format!("{} observations for {m} rows", y.len())));
    }
    if !(delta >= 0.0) {
        return Err(Error::Domain(format!("feasibility radius {delta} must be ≥ 0")));
    }
    let y_norm = norm(y);
    if y_norm <= delta {
        return Ok(vec![ZERO; n]);
    }

    // Real embedding: x = (Re a, Im a), M x = (Re Aa, Im Aa).
    let mr = DMatrix::from_fn(2 * m, 2 * n, |i, j| {
        let c = matrix[(i % m, j % n)];
        match (i < m, j < n) {
            (true, true) | (false, false) => c.re,
            (true, false) => -c.im,
            (false, true) => c.im,
        }
    });
    let yr = DVector::from_fn(2 * m, |i, _| if i < m { y[i].re } else { y[i - m].im });

    let a0 = matrix
        .clone()
        .svd(true, true)
        .solve(&DVector::from_column_slice(y), 1e-12)
        .map_err(|e| Error::Degenerate(format!("least-squares start failed: {e}")))?;
    let x0 = DVector::from_fn(2 * n, |i, _| if i < n { a0[i].re } else { a0[i - n].im });
    let r0 = (&mr * &x0 - &yr).norm();

    let equality = delta == 0.0;
    let (basis, w0) = if equality {
        if r0 > 1e-9 * y_norm.max(1.0) {
            return Err(Error::Infeasible { residual: r0, radius: 0.0 });
        }
        // Null space of M from the eigenvectors of MᵀM.
        let eig = SymmetricEigen::new(mr.transpose() * &mr);
        let top = eig.eigenvalues.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
        let cols: Vec<usize> =
            (0..2 * n).filter(|&i| eig.eigenvalues[i].abs() <= 1e-12 * top.max(1e-300)).collect();
        let basis = DMatrix::from_fn(2 * n, cols.len(), |i, j| eig.eigenvectors[(i, cols[j])]);
        let w0 = DVector::zeros(cols.len());
        (basis, w0)
    } else {
        if r0 >= delta {
            return Err(Error::Infeasible { residual: r0, radius: delta });
        }
        (DMatrix::identity(2 * n, 2 * n), x0.clone())
    };
    let origin = if equality { x0.clone() } else { DVector::zeros(2 * n) };
    let k = basis.ncols();

    let barrier = Barrier { mr: &mr, yr: &yr, delta, equality, basis: &basis, origin: &origin, n };

    let x_init = barrier.point(&w0);
    let mut t = DVector::from_fn(n, |i, _| x_init[i].hypot(x_init[i + n]) + 1.0);
    let mut w = w0;
    let nu = if equality { 2 * n } else { 2 * n + 1 } as f64;
    let mut s = nu / (t.sum()).max(1.0);

    let unpack = |x: &DVector<f64>| (0..n).map(|i| C64::new(x[i], x[i + n])).collect::<Vec<_>>();
    // Last centered point with its gap, kept in case a later stage breaks down
    // in rounding.
    let mut best: Option<(Vec<C64>, f64)> = None;
    loop {
        if let Err(e) = barrier.center(&mut w, &mut t, s) {
            return match best {
                Some((a, gap)) if gap <= ORACLE_FALLBACK_GAP => Ok(a),
                _ => Err(e),
            };
        }
        let x = barrier.point(&w);
        let objective: f64 = (0..n).map(|i| x[i].hypot(x[i + n])).sum();
        let gap = nu / s / objective.max(1.0);
        if gap <= ORACLE_GAP || k == 0 {
            return Ok(unpack(&x));
        }
        best = Some((unpack(&x), gap));
        s *= 10.0;
    }
}

/// `t² − u² − v²`, factored to avoid cancellation near the cone boundary.
fn cone_slack(t: f64, u: f64, v: f64) -> f64 {
    let h = u.hypot(v);
    (t - h) * (t + h)
}

struct Barrier<'a> {
    mr: &'a DMatrix<f64>,
    yr: &'a DVector<f64>,
    delta: f64,
    equality: bool,
    basis: &'a DMatrix<f64>,
    origin: &'a DVector<f64>,
    n: usize,
}

impl Barrier<'_> {
    fn point(&self, w: &DVector<f64>) -> DVector<f64> {
        self.origin + self.basis * w
    }

    /// Strictly feasible?
    fn inside(&self, x: &DVector<f64>, t: &DVector<f64>) -> bool {
        let n = self.n;
        let cones = (0..n).all(|i| cone_slack(t[i], x[i], x[i + n]) > 0.0);
        if !cones {
            return false;
        }
        self.equality || self.delta * self.delta - (self.mr * x - self.yr).norm_squared() > 0.0
    }

    /// Damped Newton on the barrier-augmented objective at weight `s`.
    fn center(&self, w: &mut DVector<f64>, t: &mut DVector<f64>, s: f64) -> Result<()> {
        let n = self.n;
        let k = self.basis.ncols();
        let dim = k + n;
        let mut previous = f64::INFINITY;
        for _ in 0..500 {
            let x = self.point(w);
            // Gradient and Hessian in (x, t), then pulled back to (w, t).
            let mut gx = DVector::zeros(2 * n);
            let mut hx = DMatrix::zeros(2 * n, 2 * n);
            let mut gt = DVector::from_element(n, s);
            let mut ht = DVector::zeros(n);
            let mut hxt = DMatrix::zeros(2 * n, n);
            for i in 0..n {
                let (u, v, ti) = (x[i], x[i + n], t[i]);
                let q = cone_slack(ti, u, v);
                let grad = [-2.0 * u, -2.0 * v, 2.0 * ti];
                gx[i] -= grad[0] / q;
                gx[i + n] -= grad[1] / q;
                gt[i] -= grad[2] / q;
                let q2 = q * q;
                hx[(i, i)] += grad[0] * grad[0] / q2 + 2.0 / q;
                hx[(i + n, i + n)] += grad[1] * grad[1] / q2 + 2.0 / q;
                hx[(i, i + n)] += grad[0] * grad[1] / q2;
                hx[(i + n, i)] += grad[0] * grad[1] / q2;
                ht[i] += grad[2] * grad[2] / q2 - 2.0 / q;
                hxt[(i, i)] += grad[0] * grad[2] / q2;
                hxt[(i + n, i)] += grad[1] * grad[2] / q2;
            }
            if !self.equality {
                let r = self.mr * &x - self.yr;
                let h = self.delta * self.delta - r.norm_squared();
                let mtr = self.mr.transpose() * &r;
                gx += &mtr * (2.0 / h);
                hx += &mtr * mtr.transpose() * (4.0 / (h * h));
                hx += self.mr.transpose() * self.mr * (2.0 / h);
            }
            let bt = self.basis.transpose();
            let gw = &bt * &gx;
            let hw = &bt * &hx * self.basis;
            let hwt = &bt * &hxt;

            let mut g = DVector::zeros(dim);
            g.rows_mut(0, k).copy_from(&gw);
            g.rows_mut(k, n).copy_from(&gt);
            let mut hess = DMatrix::zeros(dim, dim);
            hess.view_mut((0, 0), (k, k)).copy_from(&hw);
            hess.view_mut((0, k), (k, n)).copy_from(&hwt);
            hess.view_mut((k, 0), (n, k)).copy_from(&hwt.transpose());
            for i in 0..n {
                hess[(k + i, k + i)] = ht[i];
            }
            // Jacobi scaling keeps the factorization stable when barrier
            // curvatures differ by many orders of magnitude.
            let scale = DVector::from_fn(dim, |i, _| hess[(i, i)].abs().sqrt().recip());
            let scaled = DMatrix::from_fn(dim, dim, |i, j| hess[(i, j)] * scale[i] * scale[j]);
            let rhs = DVector::from_fn(dim, |i, _| -g[i] * scale[i]);
            // Cancellation in t² − |x|² can cost definiteness at large `s`.
            let solved = match scaled.clone().cholesky() {
                Some(chol) => Some(chol.solve(&rhs)),
                None => scaled.lu().solve(&rhs),
            };
            let step = solved
                .ok_or_else(|| Error::IllConditioned { barrier: s, reason: "singular Newton system".into() })?
                .component_mul(&scale);
            let decrement_sq = -g.dot(&step);
            if !decrement_sq.is_finite() {
                return Err(Error::IllConditioned { barrier: s, reason: "non-finite Newton decrement".into() });
            }
            let lambda = decrement_sq.max(0.0).sqrt();
            let mut alpha = if lambda > 0.25 { 1.0 / (1.0 + lambda) } else { 1.0 };
            loop {
                let w_try = &*w + step.rows(0, k) * alpha;
                let t_try = &*t + step.rows(k, n) * alpha;
                if self.inside(&self.point(&w_try), &t_try) {
                    *w = w_try;
                    *t = t_try;
                    break;
                }
                alpha *= 0.5;
                if alpha < 1e-20 {
                    return Err(Error::IllConditioned { barrier: s, reason: "line search left the domain".into() });
                }
            }
            // Below λ ≈ 1e-6 the remaining suboptimality (≈ λ²/2) is at rounding
            // level; a stalled decrement in that range means the same.
            if lambda <= 1e-6 || (lambda <= 1e-3 && lambda >= 0.5 * previous) {
                return Ok(());
            }
            previous = lambda;
        }
        Err(Error::IllConditioned { barrier: s, reason: "centering did not converge".into() })
    }
}

/// Optimality certificate for a candidate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KktReport {
    /// Largest violation of the subdifferential conditions.
    pub residual: f64,
    /// Fitted multiplier of the ball constraint (scaled by `‖Aa − y‖`);
    /// `None` when the dual was fitted directly (δ = 0 or zero residual).
    pub multiplier: Option<f64>,
    /// `‖Aa − y‖ − δ`.
    pub feasibility_residual: f64,
}

/// Coefficients below this fraction of the largest one count as zero.
const SUPPORT_THRESHOLD: f64 = 1e-6;

/// Builds a dual vector ν from the candidate and reports the largest violation of
/// `Aᴴν ∈ ∂‖a‖₁`: `(Aᴴν)ᵢ = aᵢ/|aᵢ|` on the support and `|(Aᴴν)ᵢ| ≤ 1` off it.
///
/// With the ball constraint active, `ν = −λ r/‖r‖` for `r = Aa − y` and λ ≥ 0
/// fitted by least squares on the support; an inactive constraint forces
/// λ = 0, hence a = 0. With δ = 0 (or a zero residual) the dual is not unique;
/// ν is chosen among the fits of the support conditions to minimize the largest
/// off-support magnitude (see [`equality_certificate`]). Candidates violating the
/// constraint by more than `1e-6·max(1, ‖y‖)` are rejected.
pub fn check_kkt(op: &dyn MeasurementOperator, y: &[C64], delta: f64, candidate: &[C64]) -> Result<KktReport> {
    check_shapes(op, y)?;
    if candidate.len() != op.cols() {
        return Err(Error::Structural(format!("candidate has {} entries, operator {}", candidate.len(), op.cols())));
    }
    let (m, n) = (op.rows(), op.cols());
    let tol = 1e-6 * norm(y).max(1.0);
    let mut r = vec![ZERO; m];
    op.apply(candidate, &mut r);
    for (rk, yk) in r.iter_mut().zip(y) {
        *rk -= yk;
    }
    let r_norm = norm(&r);
    if r_norm > delta + tol {
        return Err(Error::Infeasible { residual: r_norm, radius: delta });
    }
    let feasibility_residual = r_norm - delta;
    let amax = candidate.iter().fold(0.0f64, |acc, c| acc.max(c.norm()));
    let support: Vec<usize> = (0..n).filter(|&i| candidate[i].norm() > SUPPORT_THRESHOLD * amax).collect();
    let sign = |i: usize| candidate[i] / candidate[i].norm();

    let violation = |u: &[C64], support: &[usize]| {
        let mut worst = 0.0f64;
        let mut on = vec![false; n];
        for &i in support {
            on[i] = true;
            worst = worst.max((u[i] - sign(i)).norm());
        }
        for i in (0..n).filter(|&i| !on[i]) {
            worst = worst.max(u[i].norm() - 1.0);
        }
        worst
    };

    if delta <= tol || r_norm <= tol {
        if support.is_empty() {
            return Ok(KktReport { residual: 0.0, multiplier: None, feasibility_residual });
        }
        let signs: Vec<C64> = support.iter().map(|&i| sign(i)).collect();
        let residual = equality_certificate(&materialize(op), &support, &signs)?;
        return Ok(KktReport { residual, multiplier: None, feasibility_residual });
    }

    if r_norm < delta - tol {
        // Inactive constraint: the multiplier vanishes and so must a.
        let residual = if support.is_empty() { 0.0 } else { 1.0 };
        return Ok(KktReport { residual, multiplier: Some(0.0), feasibility_residual });
    }

    let direction: Vec<C64> = r.iter().map(|c| -c / r_norm).collect();
    let mut u = vec![ZERO; n];
    op.adjoint(&direction, &mut u);
    let (num, den) = support.iter().fold((0.0, 0.0), |(num, den), &i| {
        (num + (u[i].conj() * sign(i)).re, den + u[i].norm_sqr())
    });
    let lambda = if den > 0.0 { num / den } else { 0.0 };
    let scaled: Vec<C64> = u.iter().map(|c| c * lambda).collect();
    let mut residual = violation(&scaled, &support);
    if lambda < 0.0 {
        residual = residual.max(-lambda * u.iter().fold(0.0f64, |a, c| a.max(c.norm())));
    }
    Ok(KktReport { residual, multiplier: Some(lambda), feasibility_residual })
}

/// Best dual certificate for the equality-constrained program.
///
/// Writes the solutions of `A_Sᴴν = sgn(a_S)` as `ν₀ + Nz` (ν₀ minimum-norm,
/// N spanning the null space of `A_Sᴴ`) and minimizes `t = max_{j∉S} |A_jᴴν|`
/// over z with a log-barrier Newton method on `t² ≥ |A_jᴴν|²`. Returns
/// `max(‖A_Sᴴν₀ − sgn‖∞, t − 1)`.
fn equality_certificate(dense: &DMatrix<C64>, support: &[usize], signs: &[C64]) -> Result<f64> {
    let (m, n) = dense.shape();
    let b = DMatrix::from_fn(support.len(), m, |i, k| dense[(k, support[i])].conj());
    let rhs = DVector::from_column_slice(signs);
    let nu0 = b
        .clone()
        .svd(true, true)
        .solve(&rhs, 1e-12)
        .map_err(|e| Error::Degenerate(format!("dual fit failed: {e}")))?;
    let eq_err = (&b * &nu0 - &rhs).iter().fold(0.0f64, |acc, c| acc.max(c.norm()));

    let mut on = vec![false; n];
    for &i in support {
        on[i] = true;
    }
    let off: Vec<usize> = (0..n).filter(|&j| !on[j]).collect();
    if off.is_empty() {
        return Ok(eq_err);
    }
    let c: Vec<C64> = off.iter().map(|&j| (dense.column(j).adjoint() * &nu0)[(0, 0)]).collect();

    // Null space of A_Sᴴ from the eigenvectors of BᴴB with negligible eigenvalues.
    let eig = (b.adjoint() * &b).symmetric_eigen();
    let top = eig.eigenvalues.iter().fold(0.0f64, |acc, &v| acc.max(v));
    let null: Vec<usize> = (0..m).filter(|&k| eig.eigenvalues[k] <= 1e-10 * top.max(1e-300)).collect();
    let p = null.len();
    let start = c.iter().fold(0.0f64, |acc, w| acc.max(w.norm()));
    if p == 0 {
        return Ok(eq_err.max(start - 1.0));
    }
    // w_j(x) = c_j + D_j x with x = (Re z, Im z); rows of D_j give (Re, Im) of w_j.
    let d: Vec<[Vec<f64>; 2]> = off
        .iter()
        .map(|&j| {
            let mut re = vec![0.0; 2 * p];
            let mut im = vec![0.0; 2 * p];
            for (q, &k) in null.iter().enumerate() {
                // A_jᴴ N_k = Σ conj(A_kj) N_kq
                let g: C64 = (0..m).map(|r| dense[(r, j)].conj() * eig.eigenvectors[(r, k)]).sum();
                re[q] = g.re;
                im[q] = g.im;
                re[q + p] = -g.im;
                im[q + p] = g.re;
            }
            [re, im]
        })
        .collect();
    let w_of = |x: &[f64], j: usize| {
        let (mut wr, mut wi) = (c[j].re, c[j].im);
        for q in 0..2 * p {
            wr += d[j][0][q] * x[q];
            wi += d[j][1][q] * x[q];
        }
        (wr, wi)
    };
    let dim = 2 * p + 1;
    let barrier = |v: &[f64], mu: f64| -> Option<f64> {
        let t = v[2 * p];
        let mut total = mu * t;
        for j in 0..d.len() {
            let (wr, wi) = w_of(v, j);
            let g = cone_slack(t, wr, wi);
            if !(g > 0.0) || t <= 0.0 {
                return None;
            }
            total -= g.ln();
        }
        Some(total)
    };

    let mut v = vec![0.0; dim];
    v[2 * p] = 1.1 * start + 1e-3;
    let mut mu = 1.0;
    loop {
        for _ in 0..100 {
            let t = v[2 * p];
            let mut grad = DVector::zeros(dim);
            let mut hess = DMatrix::zeros(dim, dim);
            grad[2 * p] = mu;
            for (j, dj) in d.iter().enumerate() {
                let (wr, wi) = w_of(&v, j);
                let g = cone_slack(t, wr, wi);
                let mut dg = DVector::zeros(dim);
                for q in 0..2 * p {
                    dg[q] = -2.0 * (dj[0][q] * wr + dj[1][q] * wi);
                }
                dg[2 * p] = 2.0 * t;
                grad -= &dg / g;
                hess += &dg * dg.transpose() / (g * g);
                for q in 0..2 * p {
                    for r in 0..2 * p {
                        hess[(q, r)] += 2.0 * (dj[0][q] * dj[0][r] + dj[1][q] * dj[1][r]) / g;
                    }
                }
                hess[(2 * p, 2 * p)] -= 2.0 / g;
            }
            let Some(step) = hess.clone().cholesky().map(|ch| ch.solve(&(-&grad))).or_else(|| {
                hess.svd(true, true).solve(&(-&grad), 1e-14).ok()
            }) else {
                break;
            };
            let decrement = -grad.dot(&step);
            if decrement <= 1e-12 {
                break;
            }
            let f0 = barrier(&v, mu).unwrap_or(f64::INFINITY);
            let mut h = 1.0;
            let mut moved = false;
            while h > 1e-12 {
                let cand: Vec<f64> = v.iter().zip(step.iter()).map(|(a, s)| a + h * s).collect();
                if let Some(f1) = barrier(&cand, mu) {
                    if f1 <= f0 - 0.25 * h * decrement {
                        v = cand;
                        moved = true;
                        break;
                    }
                }
                h *= 0.5;
            }
            if !moved {
                break;
            }
        }
        if off.len() as f64 / mu <= 1e-11 * v[2 * p].max(1.0) {
            break;
        }
        mu *= 10.0;
    }
    let t = (0..off.len()).fold(0.0f64, |acc, j| {
        let (wr, wi) = w_of(&v, j);
        acc.max(wr.hypot(wi))
    });
    Ok(eq_err.max(t - 1.0))
}
