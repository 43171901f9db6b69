//! Discrete Fourier analysis on the torus ℤ_N^d.
//!
//! All transforms use the unitary normalization
//!
//! ```text
//! ĝ(m) = N^{-d/2} Σ_x e^{-2πi x·m / N} g(x)
//! ```
//!
//! so that `‖ĝ‖₂ = ‖g‖₂` and the Fourier ratio `‖ĝ‖₁ / ‖ĝ‖₂` is directly
//! comparable across grid sizes. Fields are stored row-major with the first
//! coordinate varying slowest.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Highest grid dimension supported by the transforms.
pub const MAX_DIMS: usize = 3;

/// Normalization tag carried by every torus-mode [`SpectralVector`].
pub const UNITARY_NORMALIZATION: &str = "unitary-N^{-d/2}";

fn check_grid(dims: usize, side: usize) -> Result<usize> {
    if dims == 0 || dims > MAX_DIMS {
        return Err(Error::Structural(format!(
            "grid dimension {dims} not in 1..={MAX_DIMS}"
        )));
    }
    if side < 2 {
        return Err(Error::Structural(format!("grid side {side} is below 2")));
    }
    side.checked_pow(dims as u32)
        .ok_or_else(|| Error::Structural(format!("grid {side}^{dims} overflows")))
}

/// Row-major linear index of a grid point.
pub fn ravel(point: &[usize], side: usize) -> usize {
    point.iter().fold(0, |acc, &p| acc * side + p)
}

/// Inverse of [`ravel`].
pub fn unravel(mut index: usize, side: usize, dims: usize) -> Vec<usize> {
    let mut point = vec![0; dims];
    for slot in point.iter_mut().rev() {
        *slot = index % side;
        index /= side;
    }
    point
}

/// Values on ℤ_N^d.
#[derive(Clone, Debug, PartialEq)]
pub struct GridField {
    dims: usize,
    side: usize,
    values: Vec<C64>,
    real: bool,
}

impl GridField {
    pub fn new(dims: usize, side: usize, values: Vec<C64>) -> Result<Self> {
        let len = check_grid(dims, side)?;
        if values.len() != len {
            return Err(Error::Structural(format!(
                "field on ℤ_{side}^{dims} needs {len} values, got {}",
                values.len()
            )));
        }
        Ok(Self { dims, side, values, real: false })
    }

    /// Real-valued field; the realness flag is set and every imaginary part is zero.
    pub fn from_real(dims: usize, side: usize, values: Vec<f64>) -> Result<Self> {
        let values = values.into_iter().map(|v| C64::new(v, 0.0)).collect();
        let mut field = Self::new(dims, side, values)?;
        field.real = true;
        Ok(field)
    }

    pub fn from_fn(dims: usize, side: usize, f: impl Fn(&[usize]) -> C64) -> Result<Self> {
        let len = check_grid(dims, side)?;
        let values = (0..len).map(|i| f(&unravel(i, side, dims))).collect();
        Self::new(dims, side, values)
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<C64> {
        self.values
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    pub fn point(&self, index: usize) -> Vec<usize> {
        unravel(index, self.side, self.dims)
    }

    pub fn get(&self, point: &[usize]) -> C64 {
        self.values[ravel(point, self.side)]
    }

    pub fn l2_norm(&self) -> f64 {
        l2_norm(&self.values)
    }

    /// Projection onto real values: imaginary parts are dropped and the flag is set.
    pub fn real_part(&self) -> GridField {
        GridField {
            dims: self.dims,
            side: self.side,
            values: self.values.iter().map(|v| C64::new(v.re, 0.0)).collect(),
            real: true,
        }
    }

    /// Largest imaginary magnitude relative to the field's ℓ² norm.
    pub fn relative_imaginary(&self) -> f64 {
        let norm = self.l2_norm();
        if norm == 0.0 {
            return 0.0;
        }
        l2_norm_real(self.values.iter().map(|v| v.im)) / norm
    }
}

pub(crate) fn l2_norm(values: &[C64]) -> f64 {
    values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn l2_norm_real(values: impl Iterator<Item = f64>) -> f64 {
    values.map(|v| v * v).sum::<f64>().sqrt()
}

pub(crate) fn l1_norm(values: &[C64]) -> f64 {
    values.iter().map(|v| v.norm()).sum()
}

/// Index set of a coefficient sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpectralDomain {
    /// Frequencies m ∈ ℤ_N^d, row-major.
    Torus { dims: usize, side: usize },
    /// Spherical harmonic indices (ℓ, m), 0 ≤ ℓ ≤ L, |m| ≤ ℓ, stored at ℓ² + ℓ + m.
    Sphere { bandwidth: usize },
}

impl SpectralDomain {
    pub fn len(&self) -> usize {
        match *self {
            SpectralDomain::Torus { dims, side } => side.pow(dims as u32),
            SpectralDomain::Sphere { bandwidth } => (bandwidth + 1) * (bandwidth + 1),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Integer label of the coefficient at `index`: the frequency tuple on the
    /// torus, or `(ℓ, m)` on the sphere.
    pub fn label(&self, index: usize) -> Vec<i64> {
        match *self {
            SpectralDomain::Torus { dims, side } => {
                unravel(index, side, dims).into_iter().map(|k| k as i64).collect()
            }
            SpectralDomain::Sphere { .. } => {
                let (l, m) = sphere_degree_order(index);
                vec![l as i64, m]
            }
        }
    }
}

/// `(ℓ, m)` for the packed sphere index ℓ² + ℓ + m.
pub fn sphere_degree_order(index: usize) -> (usize, i64) {
    let mut l = (index as f64).sqrt() as usize;
    while l * l > index {
        l -= 1;
    }
    while (l + 1) * (l + 1) <= index {
        l += 1;
    }
    (l, index as i64 - (l * l + l) as i64)
}

/// Packed position of `(ℓ, m)`.
pub fn sphere_index(l: usize, m: i64) -> usize {
    ((l * l + l) as i64 + m) as usize
}

/// Indexed coefficient sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralVector {
    domain: SpectralDomain,
    coefficients: Vec<C64>,
}

impl SpectralVector {
    pub fn new(domain: SpectralDomain, coefficients: Vec<C64>) -> Result<Self> {
        if let SpectralDomain::Torus { dims, side } = domain {
            check_grid(dims, side)?;
        }
        if coefficients.len() != domain.len() {
            return Err(Error::Structural(format!(
                "{:?} needs {} coefficients, got {}",
                domain,
                domain.len(),
                coefficients.len()
            )));
        }
        Ok(Self { domain, coefficients })
    }

    pub fn domain(&self) -> SpectralDomain {
        self.domain
    }

    pub fn coefficients(&self) -> &[C64] {
        &self.coefficients
    }

    pub fn into_coefficients(self) -> Vec<C64> {
        self.coefficients
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn normalization(&self) -> &'static str {
        match self.domain {
            SpectralDomain::Torus { .. } => UNITARY_NORMALIZATION,
            SpectralDomain::Sphere { .. } => "orthonormal-real-sh",
        }
    }

    pub fn l1_norm(&self) -> f64 {
        l1_norm(&self.coefficients)
    }

    pub fn l2_norm(&self) -> f64 {
        l2_norm(&self.coefficients)
    }

    pub fn fourier_ratio(&self) -> Result<f64> {
        fourier_ratio(self)
    }
}

/// Cached plans for the unitary transform on one grid shape.
#[derive(Clone)]
pub struct TorusFft {
    dims: usize,
    side: usize,
    len: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scale: f64,
}

impl fmt::Debug for TorusFft {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TorusFft")
            .field("dims", &self.dims)
            .field("side", &self.side)
            .finish()
    }
}

impl TorusFft {
    pub fn new(dims: usize, side: usize) -> Result<Self> {
        let len = check_grid(dims, side)?;
        let mut planner = FftPlanner::new();
        Ok(Self {
            dims,
            side,
            len,
            forward: planner.plan_fft_forward(side),
            inverse: planner.plan_fft_inverse(side),
            scale: (len as f64).sqrt().recip(),
        })
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// In-place unitary forward transform.
    pub fn forward(&self, buf: &mut [C64]) {
        self.run(&*self.forward, buf);
    }

    /// In-place unitary inverse transform.
    pub fn inverse(&self, buf: &mut [C64]) {
        self.run(&*self.inverse, buf);
    }

    fn run(&self, fft: &dyn Fft<f64>, buf: &mut [C64]) {
        assert_eq!(buf.len(), self.len, "buffer does not match the grid");
        let side = self.side;
        let mut scratch = vec![C64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        let mut lines = vec![C64::new(0.0, 0.0); if self.dims > 1 { self.len } else { 0 }];
        for axis in 0..self.dims {
            let stride = side.pow((self.dims - 1 - axis) as u32);
            if stride == 1 {
                fft.process_with_scratch(buf, &mut scratch);
                continue;
            }
            let block = side * stride;
            let mut line = 0;
            for base in (0..self.len).step_by(block) {
                for offset in 0..stride {
                    for k in 0..side {
                        lines[line * side + k] = buf[base + offset + k * stride];
                    }
                    line += 1;
                }
            }
            fft.process_with_scratch(&mut lines, &mut scratch);
            line = 0;
            for base in (0..self.len).step_by(block) {
                for offset in 0..stride {
                    for k in 0..side {
                        buf[base + offset + k * stride] = lines[line * side + k];
                    }
                    line += 1;
                }
            }
        }
        for v in buf.iter_mut() {
            *v *= self.scale;
        }
    }
}

/// Unitary DFT of a field: `ĝ(m) = N^{-d/2} Σ_x χ(-x·m) g(x)` with `χ(t) = e^{2πit/N}`.
pub fn forward_dft(field: &GridField) -> Result<SpectralVector> {
    let plan = TorusFft::new(field.dims, field.side)?;
    let mut buf = field.values.clone();
    plan.forward(&mut buf);
    SpectralVector::new(SpectralDomain::Torus { dims: field.dims, side: field.side }, buf)
}

/// Inverse of [`forward_dft`]; rejects sphere-mode vectors.
pub fn inverse_dft(spec: &SpectralVector) -> Result<GridField> {
    let SpectralDomain::Torus { dims, side } = spec.domain else {
        return Err(Error::Mode("inverse DFT needs a torus-mode spectrum".into()));
    };
    let plan = TorusFft::new(dims, side)?;
    let mut buf = spec.coefficients.clone();
    plan.inverse(&mut buf);
    GridField::new(dims, side, buf)
}

/// `‖c‖₁ / ‖c‖₂`, which lies in `[1, √len]`.
pub fn fourier_ratio(spec: &SpectralVector) -> Result<f64> {
    let l2 = spec.l2_norm();
    if l2 == 0.0 || !l2.is_finite() {
        return Err(Error::Degenerate(
            "Fourier ratio of an all-zero spectrum is undefined".into(),
        ));
    }
    Ok(spec.l1_norm() / l2)
}

/// Keeps the `s` largest-magnitude coefficients (ties go to the lower index)
/// and returns the truncation with its relative ℓ² tail.
///
/// The tail never exceeds `FR(spec) / √s`.
pub fn best_s_truncation(spec: &SpectralVector, s: usize) -> Result<(SpectralVector, f64)> {
    if s == 0 || s > spec.len() {
        return Err(Error::Domain(format!(
            "truncation size {s} outside 1..={}",
            spec.len()
        )));
    }
    let mags: Vec<f64> = spec.coefficients.iter().map(|c| c.norm()).collect();
    let mut order: Vec<usize> = (0..spec.len()).collect();
    order.sort_by(|&a, &b| {
        mags[b]
            .partial_cmp(&mags[a])
            .unwrap_or(Ordering::Equal)
            .then(a.cmp(&b))
    });

    let mut kept = vec![C64::new(0.0, 0.0); spec.len()];
    for &i in &order[..s] {
        kept[i] = spec.coefficients[i];
    }
    let dropped = l2_norm_real(order[s..].iter().map(|&i| mags[i]));
    let total = spec.l2_norm();
    let tail = if total == 0.0 { 0.0 } else { dropped / total };
    Ok((SpectralVector::new(spec.domain, kept)?, tail))
}

/// Frequency tuple with its wrapped magnitudes `|k|_* = min(k, N − k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WrappedFrequency {
    pub components: Vec<usize>,
    pub wrapped: Vec<usize>,
    /// `|m|_*² = Σ |k|_*²`.
    pub magnitude_sq: usize,
}

pub fn wrapped_magnitude(m: &[usize], side: usize) -> WrappedFrequency {
    let components: Vec<usize> = m.iter().map(|&k| k % side).collect();
    let wrapped: Vec<usize> = components.iter().map(|&k| k.min(side - k)).collect();
    let magnitude_sq = wrapped.iter().map(|k| k * k).sum();
    WrappedFrequency { components, wrapped, magnitude_sq }
}
