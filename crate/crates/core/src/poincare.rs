//! The constructive side of the generalized Poincare inequality
//! `|D(f - f_0)|_p <= C |P f|_p` on the torus: first- and second-order
//! Riesz-type multiplier banks built from Moore-Penrose pseudoinverses,
//! the two `f_0` constructions (kernel projection and Laplace-Beltrami
//! route), the `sum_j A_j R_j = Id` identity, the curl-free commutation
//! check, and the empirical-constant harness.
//!
//! Frequency-wise, with `P(i xi) = i P(xi)`:
//! - first-order Riesz bank for axis `j`: `i xi_j P^dagger(i xi)`,
//!   homogeneous of degree 0, zero at `xi = 0`;
//! - kernel projector: `I - P^dagger(i xi) P(i xi)`, identity at
//!   `xi = 0` (the mean is the natural kernel complement on the torus);
//! - second-order Riesz bank: `xi_i xi_j L(xi)^{-1}` for the positive
//!   Laplace-Beltrami form `L`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::elliptic::{laplace_beltrami_symbol, ComplexSpec};
use crate::error::{Error, Result};
use crate::matrix::{self, CMatrix, RankTolerance};
use crate::operator::{rank_profile, sphere_samples, Operator, RankProfile};
use crate::spectral::{
    apply_multiplier, lp_norm, partial_derivative, random_band_limited, GridField, MultiplierBank,
};

/// Denominator threshold below which `P f` is treated as zero and the
/// ratio reported as undefined; far above rounding noise (~1e-16 for
/// unit-size fields), far below any genuine `P f` in the ensembles.
const KERNEL_NORM_TOL: f64 = 1e-13;

/// The symbol bank of `P` itself: `M(xi) = P(i xi)`. Applying it
/// computes `P f` spectrally.
pub fn operator_bank(op: &Operator, grid_size: usize) -> Result<MultiplierBank> {
    MultiplierBank::from_fn(op.n(), grid_size, op.dim_u(), op.dim_v(), |xi| {
        let xi_f: Vec<f64> = xi.iter().map(|&f| f as f64).collect();
        op.symbol_at_i(&xi_f)
    })
}

/// `P f` computed spectrally.
pub fn apply_operator(op: &Operator, field: &GridField) -> Result<GridField> {
    apply_multiplier(field, &operator_bank(op, field.grid_size())?)
}

/// First-order Riesz-type bank for one axis:
/// `M(xi) = i xi_j P^dagger(i xi)` away from zero and `M(0) = 0`.
///
/// Callers that rely on the transform identities should have verified a
/// constant rank profile first; rank drops at isolated frequencies do
/// not fail here (the pseudoinverse is still defined) but surface later
/// as violated identities.
pub fn riesz_first_bank(op: &Operator, axis: usize, grid_size: usize) -> Result<MultiplierBank> {
    if axis >= op.n() {
        return Err(Error::InvalidArgument(format!(
            "axis {axis} out of range for dimension {}",
            op.n()
        )));
    }
    MultiplierBank::from_fn(op.n(), grid_size, op.dim_v(), op.dim_u(), |xi| {
        if xi.iter().all(|&f| f == 0) {
            return Ok(CMatrix::zeros(op.dim_u(), op.dim_v()));
        }
        let xi_f: Vec<f64> = xi.iter().map(|&f| f as f64).collect();
        let pinv = matrix::pseudo_inverse(&op.symbol_at_i(&xi_f)?, RankTolerance::Default)?;
        Ok(pinv.scale(Complex64::new(0.0, xi_f[axis])))
    })
}

/// Second-order Riesz-type bank `M(xi) = xi_i xi_j L(xi)^{-1}` with
/// `M(0) = 0`, for the positive Laplace-Beltrami form of the complex.
///
/// Fails with the witness frequency if `L` is singular at any nonzero
/// lattice point (the complex is not elliptic there).
pub fn riesz_second_bank(
    spec: &ComplexSpec,
    axis_i: usize,
    axis_j: usize,
    grid_size: usize,
) -> Result<MultiplierBank> {
    let dim_v = spec.p_op().dim_v();
    if axis_i >= spec.n() || axis_j >= spec.n() {
        return Err(Error::InvalidArgument("axis out of range".into()));
    }
    MultiplierBank::from_fn(spec.n(), grid_size, dim_v, dim_v, |xi| {
        if xi.iter().all(|&f| f == 0) {
            return Ok(CMatrix::zeros(dim_v, dim_v));
        }
        let xi_f: Vec<f64> = xi.iter().map(|&f| f as f64).collect();
        let inv = invert_symbol(&laplace_beltrami_symbol(spec, &xi_f)?, xi)?;
        Ok(inv.scale(Complex64::new(xi_f[axis_i] * xi_f[axis_j], 0.0)))
    })
}

/// Inverse of a symbol matrix that must be nonsingular at `xi`.
fn invert_symbol(m: &CMatrix, xi: &[i64]) -> Result<CMatrix> {
    if matrix::numeric_rank(m, RankTolerance::Default)? < m.rows() {
        return Err(Error::SingularAtFrequency {
            witness: xi.to_vec(),
        });
    }
    matrix::pseudo_inverse(m, RankTolerance::Default)
}

/// Bank of the frequency-wise orthogonal projection onto
/// `ker P(i xi)`: `I - P^dagger(i xi) P(i xi)`, identity at `xi = 0`.
pub fn kernel_projector_bank(op: &Operator, grid_size: usize) -> Result<MultiplierBank> {
    let dim_u = op.dim_u();
    MultiplierBank::from_fn(op.n(), grid_size, dim_u, dim_u, |xi| {
        if xi.iter().all(|&f| f == 0) {
            return Ok(CMatrix::identity(dim_u));
        }
        let xi_f: Vec<f64> = xi.iter().map(|&f| f as f64).collect();
        let symbol = op.symbol_at_i(&xi_f)?;
        let projector =
            matrix::kernel_complement_projector(&symbol, RankTolerance::Default)?;
        Ok(CMatrix::identity(dim_u).sub(&projector))
    })
}

/// Kernel element via the generalized inverse: frequency-wise
/// projection of `f` onto `ker P(i xi)`, keeping the mean.
///
/// Consequences (all tested): `P f_0 = 0`, `d_j f_0 = d_j f - R_j(P f)`
/// for every axis, and idempotence.
pub fn f0_geninv(op: &Operator, field: &GridField) -> Result<GridField> {
    if field.dim() != op.dim_u() {
        return Err(Error::ShapeMismatch(format!(
            "field has fiber dimension {}, operator domain is {}",
            field.dim(),
            op.dim_u()
        )));
    }
    apply_multiplier(field, &kernel_projector_bank(op, field.grid_size())?)
}

/// Kernel element via the elliptic-complex route: solve
/// `L_U phi = f` spectrally (`phi-hat(0) = 0`) for the left complex
/// `(R: X -> U, P: U -> V)` and return `f - P* P phi`.
///
/// Requires `L_U(xi) = R(xi) R(xi)^H + P(xi)^H P(xi)` invertible at
/// every nonzero lattice frequency; fails with a witness otherwise.
pub fn f0_complex(left_spec: &ComplexSpec, field: &GridField) -> Result<GridField> {
    let p_op = left_spec.q_op();
    let dim_u = p_op.dim_u();
    if field.dim() != dim_u {
        return Err(Error::ShapeMismatch(format!(
            "field has fiber dimension {}, operator domain is {}",
            field.dim(),
            dim_u
        )));
    }
    let bank = MultiplierBank::from_fn(left_spec.n(), field.grid_size(), dim_u, dim_u, |xi| {
        if xi.iter().all(|&f| f == 0) {
            return Ok(CMatrix::identity(dim_u));
        }
        let xi_f: Vec<f64> = xi.iter().map(|&f| f as f64).collect();
        let inv = invert_symbol(&laplace_beltrami_symbol(left_spec, &xi_f)?, xi)?;
        // P*(i xi) P(i xi) = (i P(xi))^H (i P(xi))
        let p = p_op.symbol_at_i(&xi_f)?;
        let correction = p.adjoint().matmul(&p).matmul(&inv);
        Ok(CMatrix::identity(dim_u).sub(&correction))
    })?;
    apply_multiplier(field, &bank)
}

/// Pointwise application of a constant real matrix to the fiber.
fn apply_constant_matrix(coeff: &[f64], rows: usize, cols: usize, field: &GridField) -> GridField {
    assert_eq!(cols, field.dim(), "coefficient shape mismatch");
    let points = field.num_points();
    let mut samples = vec![0.0; rows * points];
    for r in 0..rows {
        for c in 0..cols {
            let a = coeff[r * cols + c];
            if a == 0.0 {
                continue;
            }
            let src = field.component(c);
            let dst = &mut samples[r * points..(r + 1) * points];
            for (d, &s) in dst.iter_mut().zip(src) {
                *d += a * s;
            }
        }
    }
    GridField::new(field.n(), field.grid_size(), rows, samples).expect("finite arithmetic")
}

/// The operator's symbol bank together with its `n` first-order
/// Riesz-type banks on one grid; builds everything once so that
/// ensemble loops do not refactor every pseudoinverse per field.
pub struct RieszTransforms {
    op: Operator,
    grid_size: usize,
    symbol_bank: MultiplierBank,
    riesz_banks: Vec<MultiplierBank>,
}

impl RieszTransforms {
    pub fn new(op: &Operator, grid_size: usize) -> Result<Self> {
        let symbol_bank = operator_bank(op, grid_size)?;
        let riesz_banks = (0..op.n())
            .map(|axis| riesz_first_bank(op, axis, grid_size))
            .collect::<Result<_>>()?;
        Ok(Self {
            op: op.clone(),
            grid_size,
            symbol_bank,
            riesz_banks,
        })
    }

    pub fn riesz_bank(&self, axis: usize) -> &MultiplierBank {
        &self.riesz_banks[axis]
    }

    /// Mutable bank access; the per-frequency matrices are data and may
    /// be edited (fault injection, alternative zero-frequency policies).
    pub fn riesz_bank_mut(&mut self, axis: usize) -> &mut MultiplierBank {
        &mut self.riesz_banks[axis]
    }

    /// Residual of the identity `sum_j A_j R_j h = h` on `h = P g`:
    /// `|sum_j A_j (R_j h) - h|_inf`.
    pub fn identity_residual(&self, g: &GridField) -> Result<f64> {
        let op = &self.op;
        if g.dim() != op.dim_u() || g.grid_size() != self.grid_size {
            return Err(Error::ShapeMismatch(format!(
                "field has fiber dimension {} on grid {}, transforms were built for {} on {}",
                g.dim(),
                g.grid_size(),
                op.dim_u(),
                self.grid_size
            )));
        }
        let h = apply_multiplier(g, &self.symbol_bank)?;
        let mut acc = GridField::zeros(g.n(), g.grid_size(), op.dim_v())?;
        for axis in 0..op.n() {
            let r_h = apply_multiplier(&h, &self.riesz_banks[axis])?;
            let term = apply_constant_matrix(op.coeff(axis), op.dim_v(), op.dim_u(), &r_h);
            acc = acc.add(&term)?;
        }
        Ok(acc.sub(&h)?.sup_norm())
    }

    /// Residual of the curl-free property `d_j R_k h = d_k R_j h`:
    /// `|d_j (R_k h) - d_k (R_j h)|_inf`. Exactly zero when `j == k`.
    pub fn commutation_residual(&self, h: &GridField, j: usize, k: usize) -> Result<f64> {
        let op = &self.op;
        if h.dim() != op.dim_v() || h.grid_size() != self.grid_size {
            return Err(Error::ShapeMismatch(format!(
                "field has fiber dimension {} on grid {}, transforms were built for {} on {}",
                h.dim(),
                h.grid_size(),
                op.dim_v(),
                self.grid_size
            )));
        }
        let r_j = apply_multiplier(h, &self.riesz_banks[j])?;
        let r_k = apply_multiplier(h, &self.riesz_banks[k])?;
        let lhs = partial_derivative(&r_k, j)?;
        let rhs = partial_derivative(&r_j, k)?;
        Ok(lhs.sub(&rhs)?.sup_norm())
    }

    /// Max commutation residual over all axis pairs, transforming each
    /// `R_j h` only once.
    pub fn max_commutation_residual(&self, h: &GridField) -> Result<f64> {
        let n = self.op.n();
        let transformed: Vec<GridField> = (0..n)
            .map(|axis| apply_multiplier(h, &self.riesz_banks[axis]))
            .collect::<Result<_>>()?;
        let mut worst = 0.0_f64;
        for j in 0..n {
            for k in (j + 1)..n {
                let lhs = partial_derivative(&transformed[k], j)?;
                let rhs = partial_derivative(&transformed[j], k)?;
                worst = worst.max(lhs.sub(&rhs)?.sup_norm());
            }
        }
        Ok(worst)
    }
}

/// One-shot form of [`RieszTransforms::identity_residual`].
pub fn riesz_identity_residual(op: &Operator, g: &GridField) -> Result<f64> {
    RieszTransforms::new(op, g.grid_size())?.identity_residual(g)
}

/// One-shot form of [`RieszTransforms::commutation_residual`].
pub fn commutation_residual(op: &Operator, h: &GridField, j: usize, k: usize) -> Result<f64> {
    RieszTransforms::new(op, h.grid_size())?.commutation_residual(h, j, k)
}

/// `|D(f - f_0)|_p / |P f|_p` with `f_0 = f0_geninv(op, f)` and the
/// numerator the stacked Jacobian (all `n * dim_u` partial components,
/// pointwise Euclidean norm).
pub fn poincare_ratio(op: &Operator, field: &GridField, p: f64) -> Result<f64> {
    let f0 = f0_geninv(op, field)?;
    ratio_given_f0(op, field, &f0, p, JacobianNorm::Stacked)
}

/// Same ratio with the numerator read literally as the vector sum
/// `sum_j d_j (f - f_0)`; comparison diagnostic only, the sum can
/// vanish by cancellation.
pub fn poincare_ratio_literal_sum(op: &Operator, field: &GridField, p: f64) -> Result<f64> {
    let f0 = f0_geninv(op, field)?;
    ratio_given_f0(op, field, &f0, p, JacobianNorm::LiteralSum)
}

#[derive(Clone, Copy)]
enum JacobianNorm {
    Stacked,
    LiteralSum,
}

fn ratio_given_f0(
    op: &Operator,
    field: &GridField,
    f0: &GridField,
    p: f64,
    mode: JacobianNorm,
) -> Result<f64> {
    let h = apply_operator(op, field)?;
    let denominator = lp_norm(&h, p);
    if denominator <= KERNEL_NORM_TOL * (1.0 + lp_norm(field, p)) {
        return Err(Error::KernelField);
    }
    let diff = field.sub(f0)?;
    let partials: Vec<GridField> = (0..op.n())
        .map(|axis| partial_derivative(&diff, axis))
        .collect::<Result<_>>()?;
    let numerator_field = match mode {
        JacobianNorm::Stacked => GridField::stack(&partials)?,
        JacobianNorm::LiteralSum => {
            let mut acc = partials[0].clone();
            for d in &partials[1..] {
                acc = acc.add(d)?;
            }
            acc
        }
    };
    Ok(lp_norm(&numerator_field, p) / denominator)
}

/// Degree-0 gain of the stacked first-order Riesz multiplier at one
/// direction: `|xi| * sigma_1(P^dagger(i xi))`. Its maximum over the
/// occupied frequencies bounds every `p = 2` ratio.
pub fn first_riesz_gain(op: &Operator, xi: &[f64]) -> Result<f64> {
    let norm = xi.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::InvalidArgument(
            "gain is only defined away from xi = 0".into(),
        ));
    }
    let pinv = matrix::pseudo_inverse(&op.symbol_at_i(xi)?, RankTolerance::Default)?;
    Ok(norm * pinv.operator_norm()?)
}

/// Max gain over all nonzero lattice frequencies of the grid plus the
/// axis directions; the sharp `p = 2` bound for grid fields.
pub fn lattice_gain_bound(op: &Operator, grid_size: usize) -> Result<f64> {
    let half = (grid_size as i64 - 1) / 2;
    let n = op.n();
    let mut bound = 0.0_f64;
    // axis directions first (also lattice points, listed for clarity)
    for axis in 0..n {
        let mut xi = vec![0.0; n];
        xi[axis] = 1.0;
        bound = bound.max(first_riesz_gain(op, &xi)?);
    }
    let mut xi = vec![-half; n];
    loop {
        if xi.iter().any(|&f| f != 0) {
            let xi_f: Vec<f64> = xi.iter().map(|&f| f as f64).collect();
            bound = bound.max(first_riesz_gain(op, &xi_f)?);
        }
        // odometer over the centered box
        let mut axis = n;
        loop {
            if axis == 0 {
                return Ok(bound);
            }
            axis -= 1;
            if xi[axis] < half {
                xi[axis] += 1;
                break;
            }
            xi[axis] = -half;
        }
    }
}

/// Max gain over unit-sphere samples.
pub fn sphere_gain_bound(op: &Operator, samples: &[Vec<f64>]) -> Result<f64> {
    let mut bound = 0.0_f64;
    for xi in samples {
        bound = bound.max(first_riesz_gain(op, xi)?);
    }
    Ok(bound)
}

/// Ensemble layout for the empirical-constant harness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleParams {
    pub grid_size: usize,
    pub bandwidth: usize,
    pub size: usize,
    pub seed: u64,
    /// Unit-sphere directions used for the rank profile and the sampled
    /// bound.
    pub rank_samples: usize,
}

impl EnsembleParams {
    /// Stock layout: 100 fields, `N = 33` up to two dimensions and
    /// `N = 21` beyond, bandwidth `N/4`, seed 0.
    pub fn defaults_for(n: usize) -> Self {
        let grid_size = if n <= 2 { 33 } else { 21 };
        Self {
            grid_size,
            bandwidth: grid_size / 4,
            size: 100,
            seed: 0,
            rank_samples: 1000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorSummary {
    pub n: usize,
    pub dim_u: usize,
    pub dim_v: usize,
}

/// Outcome of one ensemble run at one exponent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoincareReport {
    pub operator: OperatorSummary,
    pub p: f64,
    pub grid_size: usize,
    pub bandwidth: usize,
    pub ensemble_size: usize,
    pub seed: u64,
    /// One ratio per ensemble member, in seed order; empty when the
    /// rank profile came back non-constant and ratios were skipped.
    pub ratios: Vec<f64>,
    pub empirical_constant: Option<f64>,
    /// Max gain over the grid's nonzero lattice frequencies plus the
    /// axes; a rigorous `p = 2` bound for fields on this grid.
    pub theoretical_bound_p2: f64,
    /// Max gain over the sampled unit sphere, recorded alongside; the
    /// two maxima agree in the fine-grid limit by degree-0 homogeneity.
    pub theoretical_bound_p2_sphere: f64,
    pub rank_profile: RankProfile,
}

/// Runs the ensemble harness: verifies the rank profile, computes the
/// two bounds, then the per-field ratios (skipped when the profile is
/// non-constant). Deterministic for a fixed seed.
pub fn poincare_report(op: &Operator, params: &EnsembleParams, p: f64) -> Result<PoincareReport> {
    if params.size == 0 {
        return Err(Error::InvalidArgument("ensemble size must be positive".into()));
    }
    let samples = sphere_samples(op.n(), params.rank_samples.max(2 * op.n()), params.seed)?;
    let profile = rank_profile(op, &samples, RankTolerance::Default)?;
    let theoretical_bound_p2 = lattice_gain_bound(op, params.grid_size)?;
    let theoretical_bound_p2_sphere = sphere_gain_bound(op, &samples)?;

    let mut ratios = Vec::new();
    let mut empirical_constant = None;
    if profile.is_constant {
        let projector = kernel_projector_bank(op, params.grid_size)?;
        let symbol_bank = operator_bank(op, params.grid_size)?;
        for k in 0..params.size {
            let field = random_band_limited(
                op.n(),
                params.grid_size,
                op.dim_u(),
                params.bandwidth,
                params.seed.wrapping_add(k as u64),
            )?;
            let f0 = apply_multiplier(&field, &projector)?;
            let h = apply_multiplier(&field, &symbol_bank)?;
            let denominator = lp_norm(&h, p);
            if denominator <= KERNEL_NORM_TOL * (1.0 + lp_norm(&field, p)) {
                return Err(Error::KernelField);
            }
            let diff = field.sub(&f0)?;
            let partials: Vec<GridField> = (0..op.n())
                .map(|axis| partial_derivative(&diff, axis))
                .collect::<Result<_>>()?;
            let ratio = lp_norm(&GridField::stack(&partials)?, p) / denominator;
            ratios.push(ratio);
        }
        empirical_constant = ratios.iter().copied().reduce(f64::max);
    }

    Ok(PoincareReport {
        operator: OperatorSummary {
            n: op.n(),
            dim_u: op.dim_u(),
            dim_v: op.dim_v(),
        },
        p,
        grid_size: params.grid_size,
        bandwidth: params.bandwidth,
        ensemble_size: params.size,
        seed: params.seed,
        ratios,
        empirical_constant,
        theoretical_bound_p2,
        theoretical_bound_p2_sphere,
        rank_profile: profile,
    })
}
