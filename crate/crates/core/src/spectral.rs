//! Periodic grid fields on the torus `[0, 2pi)^n`, forward/inverse
//! discrete Fourier transforms, spectral differentiation, per-frequency
//! matrix multipliers, and discrete `L^p` norms.
//!
//! Conventions, fixed across the crate:
//! - the grid has an odd number `N` of points per axis, so every
//!   frequency `xi` has a partner `-xi` on the lattice and odd-symmetric
//!   multipliers keep real fields exactly real (no unpaired Nyquist
//!   mode);
//! - frequencies are integer vectors in the centered box
//!   `[-(N-1)/2, (N-1)/2]^n`;
//! - the forward transform divides by `N^n`, so `coefficient(0)` is the
//!   mean of the field and `f(x) = sum_xi F(xi) exp(i x . xi)`.

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::{Fft, FftDirection, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::CMatrix;

pub const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Absolute-per-unit-amplitude bound on the imaginary residual left by
/// an inverse transform of a Hermitian-symmetric spectrum.
const IMAG_RESIDUAL_TOL: f64 = 1e-10;

fn validate_grid(n: usize, grid_size: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    if grid_size == 0 || grid_size.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "grid size must be odd and positive, got {grid_size}"
        )));
    }
    Ok(())
}

fn num_points(n: usize, grid_size: usize) -> usize {
    grid_size.pow(n as u32)
}

/// Decodes a flat row-major grid index into per-axis indices
/// (axis 0 varies slowest).
fn decode_index(mut flat: usize, n: usize, grid_size: usize, out: &mut [usize]) {
    for a in (0..n).rev() {
        out[a] = flat % grid_size;
        flat /= grid_size;
    }
}

/// Centered frequency for an FFT-order axis index.
fn index_to_freq(idx: usize, grid_size: usize) -> i64 {
    let half = (grid_size as i64 - 1) / 2;
    let idx = idx as i64;
    if idx <= half {
        idx
    } else {
        idx - grid_size as i64
    }
}

/// FFT-order axis index for a centered frequency.
fn freq_to_index(freq: i64, grid_size: usize) -> usize {
    if freq >= 0 {
        freq as usize
    } else {
        (freq + grid_size as i64) as usize
    }
}

/// Calls `f(flat, xi)` for every lattice frequency in FFT storage order.
fn for_each_frequency(n: usize, grid_size: usize, mut f: impl FnMut(usize, &[i64])) {
    let total = num_points(n, grid_size);
    let mut idx = vec![0usize; n];
    let mut xi = vec![0i64; n];
    for flat in 0..total {
        decode_index(flat, n, grid_size, &mut idx);
        for a in 0..n {
            xi[a] = index_to_freq(idx[a], grid_size);
        }
        f(flat, &xi);
    }
}

/// Real vector-valued samples on the uniform periodic grid.
///
/// Storage is planar: component `c` occupies the contiguous block
/// `samples[c * N^n .. (c + 1) * N^n]`, each block in row-major grid
/// order with axis 0 slowest. The serialized form carries exactly these
/// four fields and revalidates on the way in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGridField")]
pub struct GridField {
    n: usize,
    grid_size: usize,
    dim: usize,
    samples: Vec<f64>,
}

#[derive(Deserialize)]
struct RawGridField {
    n: usize,
    grid_size: usize,
    dim: usize,
    samples: Vec<f64>,
}

impl TryFrom<RawGridField> for GridField {
    type Error = Error;

    fn try_from(raw: RawGridField) -> Result<Self> {
        GridField::new(raw.n, raw.grid_size, raw.dim, raw.samples)
    }
}

impl GridField {
    pub fn new(n: usize, grid_size: usize, dim: usize, samples: Vec<f64>) -> Result<Self> {
        validate_grid(n, grid_size)?;
        if dim == 0 {
            return Err(Error::InvalidArgument(
                "fiber dimension must be positive".into(),
            ));
        }
        let expected = num_points(n, grid_size) * dim;
        if samples.len() != expected {
            return Err(Error::ShapeMismatch(format!(
                "expected {expected} samples, got {}",
                samples.len()
            )));
        }
        if let Some(k) = samples.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                row: k / num_points(n, grid_size),
                col: k % num_points(n, grid_size),
            });
        }
        Ok(Self {
            n,
            grid_size,
            dim,
            samples,
        })
    }

    pub fn zeros(n: usize, grid_size: usize, dim: usize) -> Result<Self> {
        Self::new(
            n,
            grid_size,
            dim,
            vec![0.0; num_points(n, grid_size) * dim],
        )
    }

    /// Samples `f(x, component)` on the grid, `x` in `[0, 2pi)^n`.
    pub fn from_fn(
        n: usize,
        grid_size: usize,
        dim: usize,
        f: impl Fn(&[f64], usize) -> f64,
    ) -> Result<Self> {
        validate_grid(n, grid_size)?;
        let points = num_points(n, grid_size);
        let h = TWO_PI / grid_size as f64;
        let mut samples = vec![0.0; points * dim];
        let mut idx = vec![0usize; n];
        let mut x = vec![0.0; n];
        for g in 0..points {
            decode_index(g, n, grid_size, &mut idx);
            for a in 0..n {
                x[a] = h * idx[a] as f64;
            }
            for c in 0..dim {
                samples[c * points + g] = f(&x, c);
            }
        }
        Self::new(n, grid_size, dim, samples)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn grid_size(&self) -> usize {
        self.grid_size
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_points(&self) -> usize {
        num_points(self.n, self.grid_size)
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// Contiguous samples of one fiber component.
    pub fn component(&self, c: usize) -> &[f64] {
        let points = self.num_points();
        &self.samples[c * points..(c + 1) * points]
    }

    pub fn value(&self, flat: usize, component: usize) -> f64 {
        self.samples[component * self.num_points() + flat]
    }

    pub fn sup_norm(&self) -> f64 {
        self.samples.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }

    pub fn scale(&self, lambda: f64) -> Self {
        Self {
            n: self.n,
            grid_size: self.grid_size,
            dim: self.dim,
            samples: self.samples.iter().map(|x| lambda * x).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if (self.n, self.grid_size, self.dim) != (other.n, other.grid_size, other.dim) {
            return Err(Error::ShapeMismatch(
                "grid fields have different shapes".into(),
            ));
        }
        Ok(Self {
            n: self.n,
            grid_size: self.grid_size,
            dim: self.dim,
            samples: self
                .samples
                .iter()
                .zip(&other.samples)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    /// Concatenates fields on the same grid along the fiber.
    pub fn stack(fields: &[Self]) -> Result<Self> {
        let first = fields
            .first()
            .ok_or_else(|| Error::InvalidArgument("stack of no fields".into()))?;
        let mut samples = Vec::new();
        let mut dim = 0;
        for f in fields {
            if (f.n, f.grid_size) != (first.n, first.grid_size) {
                return Err(Error::ShapeMismatch(
                    "stacked fields live on different grids".into(),
                ));
            }
            samples.extend_from_slice(&f.samples);
            dim += f.dim;
        }
        Self::new(first.n, first.grid_size, dim, samples)
    }
}

/// Complex Fourier coefficients of a grid field, stored planar like
/// `GridField` but in FFT order along each axis.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumField {
    n: usize,
    grid_size: usize,
    dim: usize,
    coefficients: Vec<Complex64>,
}

impl SpectrumField {
    pub fn zeros(n: usize, grid_size: usize, dim: usize) -> Result<Self> {
        validate_grid(n, grid_size)?;
        Ok(Self {
            n,
            grid_size,
            dim,
            coefficients: vec![Complex64::new(0.0, 0.0); num_points(n, grid_size) * dim],
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn grid_size(&self) -> usize {
        self.grid_size
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn num_points(&self) -> usize {
        num_points(self.n, self.grid_size)
    }

    fn flat_index(&self, xi: &[i64]) -> Result<usize> {
        if xi.len() != self.n {
            return Err(Error::ShapeMismatch(format!(
                "frequency vector has length {}, expected {}",
                xi.len(),
                self.n
            )));
        }
        let half = (self.grid_size as i64 - 1) / 2;
        let mut flat = 0;
        for &f in xi {
            if f.abs() > half {
                return Err(Error::InvalidArgument(format!(
                    "frequency component {f} outside the centered box [-{half}, {half}]"
                )));
            }
            flat = flat * self.grid_size + freq_to_index(f, self.grid_size);
        }
        Ok(flat)
    }

    /// Coefficient at a centered integer frequency.
    pub fn coefficient(&self, xi: &[i64], component: usize) -> Result<Complex64> {
        let flat = self.flat_index(xi)?;
        Ok(self.coefficients[component * self.num_points() + flat])
    }

    pub fn set_coefficient(&mut self, xi: &[i64], component: usize, value: Complex64) -> Result<()> {
        let flat = self.flat_index(xi)?;
        let points = self.num_points();
        self.coefficients[component * points + flat] = value;
        Ok(())
    }

    /// Largest deviation from Hermitian symmetry,
    /// `max |F(-xi) - conj F(xi)|`.
    pub fn hermitian_asymmetry(&self) -> f64 {
        let points = self.num_points();
        let mut worst = 0.0_f64;
        for_each_frequency(self.n, self.grid_size, |flat, xi| {
            let neg: Vec<i64> = xi.iter().map(|f| -f).collect();
            let neg_flat = self.flat_index(&neg).expect("lattice frequency");
            for c in 0..self.dim {
                let a = self.coefficients[c * points + neg_flat];
                let b = self.coefficients[c * points + flat].conj();
                worst = worst.max((a - b).norm());
            }
        });
        worst
    }

    /// `sum_xi |F(xi)|^2` over all frequencies and components.
    pub fn energy(&self) -> f64 {
        self.coefficients.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// Per-frequency complex matrices applied in Fourier space.
///
/// `M(0)` is always explicitly stored: the zero-frequency policy
/// (usually `0` for singular symbols, or the identity for projections
/// that keep the mean) is part of the data.
#[derive(Debug, Clone)]
pub struct MultiplierBank {
    n: usize,
    grid_size: usize,
    in_dim: usize,
    out_dim: usize,
    matrices: Vec<CMatrix>,
}

impl MultiplierBank {
    /// Builds a bank by evaluating `f` at every lattice frequency.
    pub fn from_fn(
        n: usize,
        grid_size: usize,
        in_dim: usize,
        out_dim: usize,
        f: impl Fn(&[i64]) -> Result<CMatrix>,
    ) -> Result<Self> {
        validate_grid(n, grid_size)?;
        let mut matrices = Vec::with_capacity(num_points(n, grid_size));
        let mut failure = None;
        for_each_frequency(n, grid_size, |_, xi| {
            if failure.is_some() {
                return;
            }
            match f(xi) {
                Ok(m) => {
                    if m.rows() != out_dim || m.cols() != in_dim {
                        failure = Some(Error::ShapeMismatch(format!(
                            "multiplier at {xi:?} is {}x{}, expected {out_dim}x{in_dim}",
                            m.rows(),
                            m.cols()
                        )));
                    } else {
                        matrices.push(m);
                    }
                }
                Err(e) => failure = Some(e),
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }
        Ok(Self {
            n,
            grid_size,
            in_dim,
            out_dim,
            matrices,
        })
    }

    pub fn identity(n: usize, grid_size: usize, dim: usize) -> Result<Self> {
        Self::from_fn(n, grid_size, dim, dim, |_| Ok(CMatrix::identity(dim)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn grid_size(&self) -> usize {
        self.grid_size
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    fn flat_index(&self, xi: &[i64]) -> Result<usize> {
        let mut flat = 0;
        let half = (self.grid_size as i64 - 1) / 2;
        if xi.len() != self.n {
            return Err(Error::ShapeMismatch("frequency arity".into()));
        }
        for &f in xi {
            if f.abs() > half {
                return Err(Error::InvalidArgument(format!(
                    "frequency component {f} outside the centered box"
                )));
            }
            flat = flat * self.grid_size + freq_to_index(f, self.grid_size);
        }
        Ok(flat)
    }

    /// Matrix at a centered frequency.
    pub fn matrix_at(&self, xi: &[i64]) -> Result<&CMatrix> {
        Ok(&self.matrices[self.flat_index(xi)?])
    }

    /// Replaces the matrix at one frequency; the per-frequency policy is
    /// data, so it can be edited (fault injection, alternative
    /// zero-frequency conventions).
    pub fn set_matrix(&mut self, xi: &[i64], m: CMatrix) -> Result<()> {
        if m.rows() != self.out_dim || m.cols() != self.in_dim {
            return Err(Error::ShapeMismatch(format!(
                "multiplier must be {}x{}, got {}x{}",
                self.out_dim,
                self.in_dim,
                m.rows(),
                m.cols()
            )));
        }
        let flat = self.flat_index(xi)?;
        self.matrices[flat] = m;
        Ok(())
    }

    /// `max |M(-xi) - conj M(xi)|` over the lattice; zero for banks that
    /// map real fields to real fields.
    pub fn hermitian_asymmetry(&self) -> f64 {
        let mut worst = 0.0_f64;
        for_each_frequency(self.n, self.grid_size, |flat, xi| {
            let neg: Vec<i64> = xi.iter().map(|f| -f).collect();
            let neg_m = self.matrix_at(&neg).expect("lattice frequency");
            worst = worst.max(neg_m.sub(&self.matrices[flat].conj()).max_abs());
        });
        worst
    }

    /// Frequency-wise product `self(xi) * inner(xi)`, the bank of the
    /// composed operator.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if (self.n, self.grid_size) != (inner.n, inner.grid_size) || self.in_dim != inner.out_dim {
            return Err(Error::ShapeMismatch(
                "banks are not composable on this grid".into(),
            ));
        }
        Ok(Self {
            n: self.n,
            grid_size: self.grid_size,
            in_dim: inner.in_dim,
            out_dim: self.out_dim,
            matrices: self
                .matrices
                .iter()
                .zip(&inner.matrices)
                .map(|(a, b)| a.matmul(b))
                .collect(),
        })
    }
}

/// Shared FFT plans for one grid shape.
struct TorusFft {
    n: usize,
    grid_size: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl TorusFft {
    fn new(n: usize, grid_size: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n,
            grid_size,
            forward: planner.plan_fft(grid_size, FftDirection::Forward),
            inverse: planner.plan_fft(grid_size, FftDirection::Inverse),
        }
    }

    /// In-place transform along every axis of one planar component.
    fn transform(&self, data: &mut [Complex64], direction: FftDirection) {
        let fft = match direction {
            FftDirection::Forward => &self.forward,
            FftDirection::Inverse => &self.inverse,
        };
        let nn = self.grid_size;
        let total = data.len();
        let mut line = vec![Complex64::new(0.0, 0.0); nn];
        for axis in 0..self.n {
            let stride = nn.pow((self.n - 1 - axis) as u32);
            let block = stride * nn;
            for chunk in (0..total).step_by(block) {
                for inner in 0..stride {
                    let base = chunk + inner;
                    for k in 0..nn {
                        line[k] = data[base + k * stride];
                    }
                    fft.process(&mut line);
                    for k in 0..nn {
                        data[base + k * stride] = line[k];
                    }
                }
            }
        }
    }
}

/// Forward transform; `coefficient(0)` is the mean.
pub fn forward_dft(field: &GridField) -> SpectrumField {
    let fft = TorusFft::new(field.n(), field.grid_size());
    let points = field.num_points();
    let scale = 1.0 / points as f64;
    let mut coefficients = Vec::with_capacity(points * field.dim());
    for c in 0..field.dim() {
        let mut buf: Vec<Complex64> = field
            .component(c)
            .iter()
            .map(|&x| Complex64::new(x, 0.0))
            .collect();
        fft.transform(&mut buf, FftDirection::Forward);
        coefficients.extend(buf.into_iter().map(|z| z * scale));
    }
    SpectrumField {
        n: field.n(),
        grid_size: field.grid_size(),
        dim: field.dim(),
        coefficients,
    }
}

/// Unnormalized inverse transform of one planar component; returns the
/// complex grid values.
fn inverse_component(fft: &TorusFft, coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut buf = coeffs.to_vec();
    fft.transform(&mut buf, FftDirection::Inverse);
    buf
}

/// Inverse transform onto the real grid.
///
/// Intended for Hermitian-symmetric spectra (anything that came from a
/// real field through symmetric multipliers); the rounding-level
/// imaginary part is discarded. `apply_multiplier` checks the residual
/// before discarding.
pub fn inverse_dft(spectrum: &SpectrumField) -> GridField {
    let fft = TorusFft::new(spectrum.n, spectrum.grid_size);
    let points = spectrum.num_points();
    let mut samples = Vec::with_capacity(points * spectrum.dim);
    for c in 0..spectrum.dim {
        let buf = inverse_component(&fft, &spectrum.coefficients[c * points..(c + 1) * points]);
        samples.extend(buf.into_iter().map(|z| z.re));
    }
    GridField {
        n: spectrum.n,
        grid_size: spectrum.grid_size,
        dim: spectrum.dim,
        samples,
    }
}

/// Spectral partial derivative along `axis` (0-based): multiplier
/// `i * xi_axis` on every component.
pub fn partial_derivative(field: &GridField, axis: usize) -> Result<GridField> {
    if axis >= field.n() {
        return Err(Error::InvalidArgument(format!(
            "axis {axis} out of range for dimension {}",
            field.n()
        )));
    }
    let mut spectrum = forward_dft(field);
    let points = spectrum.num_points();
    let mut factors = vec![Complex64::new(0.0, 0.0); points];
    for_each_frequency(spectrum.n, spectrum.grid_size, |flat, xi| {
        factors[flat] = Complex64::new(0.0, xi[axis] as f64);
    });
    for c in 0..spectrum.dim {
        for (k, factor) in factors.iter().enumerate() {
            spectrum.coefficients[c * points + k] *= factor;
        }
    }
    Ok(inverse_dft(&spectrum))
}

/// Applies a multiplier bank to a real field: transform, multiply by
/// `M(xi)` frequency-wise, transform back.
///
/// The output of a Hermitian-symmetric bank is real up to rounding; the
/// imaginary residual is checked against `1e-10 * (1 + |f|_inf)` and then
/// discarded. A residual above the threshold means the bank does not map
/// real fields to real fields and is reported as an error.
pub fn apply_multiplier(field: &GridField, bank: &MultiplierBank) -> Result<GridField> {
    if field.n() != bank.n || field.grid_size() != bank.grid_size {
        return Err(Error::ShapeMismatch(
            "field and bank live on different grids".into(),
        ));
    }
    if field.dim() != bank.in_dim {
        return Err(Error::ShapeMismatch(format!(
            "field has fiber dimension {}, bank expects {}",
            field.dim(),
            bank.in_dim
        )));
    }
    let spectrum = forward_dft(field);
    let points = spectrum.num_points();
    let mut out = vec![Complex64::new(0.0, 0.0); points * bank.out_dim];
    let mut in_vec = vec![Complex64::new(0.0, 0.0); bank.in_dim];
    for flat in 0..points {
        for (c, slot) in in_vec.iter_mut().enumerate() {
            *slot = spectrum.coefficients[c * points + flat];
        }
        let product = bank.matrices[flat].matvec(&in_vec);
        for (c, z) in product.into_iter().enumerate() {
            out[c * points + flat] = z;
        }
    }

    let fft = TorusFft::new(field.n(), field.grid_size());
    let mut samples = Vec::with_capacity(points * bank.out_dim);
    let mut max_imag = 0.0_f64;
    for c in 0..bank.out_dim {
        let buf = inverse_component(&fft, &out[c * points..(c + 1) * points]);
        for z in &buf {
            max_imag = max_imag.max(z.im.abs());
        }
        samples.extend(buf.into_iter().map(|z| z.re));
    }
    let threshold = IMAG_RESIDUAL_TOL * (1.0 + field.sup_norm());
    if max_imag >= threshold {
        return Err(Error::ImaginaryResidual {
            residual: max_imag,
            threshold,
        });
    }
    Ok(GridField {
        n: field.n(),
        grid_size: field.grid_size(),
        dim: bank.out_dim,
        samples,
    })
}

/// Discrete `L^p` norm: `(sum_x |f(x)|^p (2pi/N)^n)^(1/p)` with the
/// pointwise Euclidean norm across the fiber.
///
/// Callers must supply a finite `p > 1`.
pub fn lp_norm(field: &GridField, p: f64) -> f64 {
    assert!(p.is_finite() && p > 1.0, "lp_norm requires finite p > 1");
    let points = field.num_points();
    let cell = (TWO_PI / field.grid_size() as f64).powi(field.n() as i32);
    let mut acc = 0.0;
    for g in 0..points {
        let mut norm_sq = 0.0;
        for c in 0..field.dim() {
            let v = field.samples[c * points + g];
            norm_sq += v * v;
        }
        acc += norm_sq.sqrt().powf(p) * cell;
    }
    acc.powf(1.0 / p)
}

/// Random real field with Hermitian-symmetric coefficients supported on
/// `0 < |xi|_inf <= bandwidth`; zero mean, deterministic per seed.
pub fn random_band_limited(
    n: usize,
    grid_size: usize,
    dim: usize,
    bandwidth: usize,
    seed: u64,
) -> Result<GridField> {
    validate_grid(n, grid_size)?;
    let half = (grid_size - 1) / 2;
    if bandwidth == 0 || bandwidth > half {
        return Err(Error::InvalidArgument(format!(
            "bandwidth must lie in 1..={half}, got {bandwidth}"
        )));
    }
    if dim == 0 {
        return Err(Error::InvalidArgument(
            "fiber dimension must be positive".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut spectrum = SpectrumField::zeros(n, grid_size, dim)?;
    let band = bandwidth as i64;
    for c in 0..dim {
        // fixed frequency order keeps the field a pure function of the
        // seed
        let mut draws: Vec<(Vec<i64>, Vec<i64>)> = Vec::new();
        for_each_frequency(n, grid_size, |_, xi| {
            let in_band = xi.iter().all(|f| f.abs() <= band) && xi.iter().any(|&f| f != 0);
            // draw once per conjugate pair, at the representative whose
            // first nonzero component is positive
            let positive = xi.iter().find(|&&f| f != 0).is_some_and(|&f| f > 0);
            if in_band && positive {
                draws.push((xi.to_vec(), xi.iter().map(|f| -f).collect()));
            }
        });
        for (xi, neg) in draws {
            let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            spectrum.set_coefficient(&xi, c, z)?;
            spectrum.set_coefficient(&neg, c, z.conj())?;
        }
    }
    Ok(inverse_dft(&spectrum))
}
