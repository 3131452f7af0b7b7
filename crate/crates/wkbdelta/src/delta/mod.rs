//! Delta expansion of the WKB integrals.
//!
//! The potential is interpolated as V0 + delta (V - V0) with a harmonic
//! V0 = (m w^2 + lambda^2) x^2 / 2 sharing the turning points, the integrands
//! are expanded binomially in the bounded ratio Delta, each term is integrated
//! in closed form, and lambda is fixed per integral by first-order minimal
//! sensitivity. The result is a [`RadicalSeries`] in the dimensionless
//! variable zeta with exact rational coefficients.

mod expand;
mod series;

pub use series::{DeltaGate, ParamExponents, RadicalFactor, RadicalSeries};

use crate::error::{Error, Result};
use crate::exact::Rat;
use crate::model::{Family, PotentialSpec};
use crate::quadrature::IntegralKind;

/// How the interpolation frequency shift lambda^2 is chosen. Ratios are
/// relative to the coupling scale mu A^2 (quartic) or rho A^4 (sextic), which
/// keeps every approximant a function of zeta alone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LambdaChoice {
    /// First-order minimal sensitivity, applied per integral (default).
    Pms,
    /// Reuse J1's first-order ratio for all three integrals.
    PmsFromJ1,
    /// Fixed ratio lambda^2 / (coupling scale).
    FixedRatio(f64),
}

/// Truncation order in delta and the lambda choice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterpolationConfig {
    /// All binomial terms through this index are kept (delta set to 1).
    pub delta_order: usize,
    pub lambda: LambdaChoice,
}

impl Default for InterpolationConfig {
    fn default() -> Self {
        InterpolationConfig { delta_order: 10, lambda: LambdaChoice::Pms }
    }
}

impl InterpolationConfig {
    pub fn order(delta_order: usize) -> Self {
        InterpolationConfig { delta_order, ..Default::default() }
    }
}

/// The ratio Delta(x) = [E - E0 - V(x) + V0(x)] / [E0 - V0(x)] as a
/// polynomial in x^2: the common factor (A^2 - x^2) cancels exactly, so Delta
/// has no pole on [-A, A].
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaPolynomial {
    /// Coefficients in powers of x^2.
    pub coeffs_x2: Vec<f64>,
    pub amplitude: f64,
}

impl DeltaPolynomial {
    pub fn evaluate(&self, x: f64) -> f64 {
        let x2 = x * x;
        let mut acc = 0.0;
        for c in self.coeffs_x2.iter().rev() {
            acc = acc * x2 + c;
        }
        acc
    }

    /// sup over [-A, A] of |Delta|, from a 201-point grid on x >= 0 (Delta is
    /// even and at most quadratic in x^2 here, so the grid is plenty).
    pub fn sup_abs(&self) -> f64 {
        let mut sup: f64 = 0.0;
        for i in 0..=200 {
            let x = self.amplitude * i as f64 / 200.0;
            sup = sup.max(self.evaluate(x).abs());
        }
        sup
    }
}

/// First-order minimal-sensitivity result for one integral kind.
#[derive(Debug, Clone, PartialEq)]
pub struct PmsResult {
    pub lambda_squared: f64,
    /// Exact ratio lambda^2 / (coupling scale) when it is zeta-independent
    /// (J1; the J2/J3 ratios depend on zeta).
    pub ratio: Option<Rat>,
    /// Numeric value of the lambda-derivative of the first-order integral at
    /// the optimum.
    pub residual: f64,
    pub order_used: u32,
}

fn coupling_scale(spec: &PotentialSpec, amplitude: f64) -> f64 {
    let a2 = amplitude * amplitude;
    match spec.family {
        Family::Quartic => spec.coupling * a2,
        Family::Sextic => spec.coupling * a2 * a2,
    }
}

fn zeta_at_amplitude(spec: &PotentialSpec, amplitude: f64) -> f64 {
    spec.mass * spec.omega * spec.omega / coupling_scale(spec, amplitude)
}

/// Build Delta for the interpolation V0 = (m w^2 + lambda^2) x^2 / 2 at the
/// given turning amplitude.
pub fn build_delta(spec: &PotentialSpec, amplitude: f64, lambda_squared: f64) -> Result<DeltaPolynomial> {
    if !(amplitude > 0.0 && amplitude.is_finite()) {
        return Err(Error::Domain(format!("amplitude must be positive, got {amplitude}")));
    }
    if !(lambda_squared >= 0.0 && lambda_squared.is_finite()) {
        return Err(Error::Domain(format!("lambda^2 must be nonnegative, got {lambda_squared}")));
    }
    let u = spec.mass * spec.omega * spec.omega + lambda_squared;
    let a2 = amplitude * amplitude;
    let g = spec.coupling;
    let coeffs = match spec.family {
        Family::Quartic => vec![(0.5 * g * a2 - lambda_squared) / u, 0.5 * g / u],
        Family::Sextic => vec![
            (g * a2 * a2 / 3.0 - lambda_squared) / u,
            g * a2 / 3.0 / u,
            g / 3.0 / u,
        ],
    };
    Ok(DeltaPolynomial { coeffs_x2: coeffs, amplitude })
}

/// First-order PMS: the lambda^2 making the first-order expansion of the
/// integral stationary, in closed form, with the residual re-evaluated
/// numerically from the analytic derivative.
pub fn pms_first_order(kind: IntegralKind, spec: &PotentialSpec, amplitude: f64) -> Result<PmsResult> {
    if !(amplitude > 0.0 && amplitude.is_finite()) {
        return Err(Error::Domain(format!("amplitude must be positive, got {amplitude}")));
    }
    let (r_l, s_l) = expand::pms_lambda_ratio(spec.family, kind);
    let zeta = zeta_at_amplitude(spec, amplitude);
    let ratio_value = r_l.eval_f64(zeta) / s_l.eval_f64(zeta);
    if !(ratio_value >= 0.0) {
        return Err(Error::PmsFailure(format!(
            "no stationary point with lambda^2 >= 0 for {kind:?} (ratio {ratio_value})"
        )));
    }
    let cs = coupling_scale(spec, amplitude);
    let lambda_squared = ratio_value * cs;
    let ratio = if s_l.degree() == 0 {
        Some(&r_l.0[0] / &s_l.0[0])
    } else {
        None
    };
    let residual = first_order_lambda_derivative(kind, spec, amplitude, lambda_squared);
    Ok(PmsResult { lambda_squared, ratio, residual, order_used: 1 })
}

/// d/d(lambda) of the first-order truncation, evaluated numerically from its
/// closed form. Vanishes at the PMS point up to roundoff.
fn first_order_lambda_derivative(
    kind: IntegralKind,
    spec: &PotentialSpec,
    amplitude: f64,
    lambda_squared: f64,
) -> f64 {
    let mw2 = spec.mass * spec.omega * spec.omega;
    let u = mw2 + lambda_squared;
    let cs = coupling_scale(spec, amplitude);
    let zeta = zeta_at_amplitude(spec, amplitude);
    let a2 = amplitude * amplitude;
    let pi = std::f64::consts::PI;
    let lambda = lambda_squared.sqrt();
    // Wallis moments w0..w6 against 1/sqrt(A^2-x^2).
    let w = [1.0, 0.5, 0.375, 5.0 / 16.0, 35.0 / 128.0, 63.0 / 256.0, 231.0 / 1024.0];
    // k0 = M[kernel], g0 = M[kernel * phi] at this zeta (dimensionless).
    let (k0, g0, d_exp) = match (kind, spec.family) {
        (IntegralKind::J1, Family::Quartic) => (0.5, (0.5 + 0.125) / 2.0, 0.0),
        (IntegralKind::J1, Family::Sextic) => (0.5, (0.5 + 0.125 + 0.0625) / 3.0, 0.0),
        (IntegralKind::J2, Family::Quartic) => {
            (zeta + 1.5, 0.5 * (1.5 * zeta + 1.5 + 9.0 / 8.0), 1.0)
        }
        (IntegralKind::J2, Family::Sextic) => (
            zeta + 5.0 * w[2],
            (zeta * (w[0] + w[1] + w[2]) + 5.0 * (w[2] + w[3] + w[4])) / 3.0,
            1.0,
        ),
        (IntegralKind::J3, Family::Quartic) => (
            7.0 * zeta * zeta + 12.0 * zeta * w[1] + 33.0 * w[2],
            0.5 * (7.0 * zeta * zeta * (w[0] + w[1])
                + 12.0 * zeta * (w[1] + w[2])
                + 33.0 * (w[2] + w[3])),
            2.0,
        ),
        (IntegralKind::J3, Family::Sextic) => (
            7.0 * zeta * zeta - 30.0 * zeta * w[2] + 75.0 * w[4],
            (7.0 * zeta * zeta * (w[0] + w[1] + w[2]) - 30.0 * zeta * (w[2] + w[3] + w[4])
                + 75.0 * (w[4] + w[5] + w[6]))
                / 3.0,
            2.0,
        ),
    };
    match kind {
        IntegralKind::J1 => {
            // J1 case uses the sqrt-weight moments instead: k0 and g0 above
            // already carry them. d/du of
            // (pi A^2 / sqrt(2)) [ (k0/2) sqrt(u) + ((cs g0 + mw2 k0)/2)/sqrt(u) ]
            let du = (pi * a2 / (4.0 * 2f64.sqrt()) / u.powf(1.5)) * (k0 * u - (cs * g0 + mw2 * k0));
            2.0 * lambda * du
        }
        _ => {
            let csd = cs.powf(d_exp);
            let du = (3.0 * 2f64.sqrt() * pi * csd / (4.0 * u.powf(2.5)))
                * ((cs * g0 + mw2 * k0) - k0 * u);
            2.0 * lambda * du
        }
    }
}

/// Expand the integral `kind` for this spec to the configured delta order.
/// The series is a function of zeta times a dimensional prefactor, so beyond
/// validation the amplitude and parameter values select nothing.
pub fn expand_integral(
    kind: IntegralKind,
    spec: &PotentialSpec,
    amplitude: f64,
    config: &InterpolationConfig,
) -> Result<RadicalSeries> {
    if !(amplitude > 0.0 && amplitude.is_finite()) {
        return Err(Error::Domain(format!("amplitude must be positive, got {amplitude}")));
    }
    expand::expand(spec.family, kind, config.delta_order, &config.lambda)
}

/// Family-level expansion when no particular spec is at hand.
pub fn expand_family(kind: IntegralKind, family: Family, config: &InterpolationConfig) -> Result<RadicalSeries> {
    expand::expand(family, kind, config.delta_order, &config.lambda)
}

/// Numeric value of the approximant at zeta for the spec's parameters.
pub fn evaluate_series(series: &RadicalSeries, spec: &PotentialSpec, zeta: f64) -> f64 {
    debug_assert!(zeta > 0.0);
    series.evaluate(spec, zeta)
}

/// Exact term-by-term d/dzeta, applied `order` times (1..=3).
pub fn differentiate_series(series: &RadicalSeries, order: u32) -> Result<RadicalSeries> {
    if !(1..=3).contains(&order) {
        return Err(Error::Domain(format!("derivative order must be in 1..=3, got {order}")));
    }
    let mut out = series.derivative();
    for _ in 1..order {
        out = out.derivative();
    }
    Ok(out)
}

/// The first-order PMS ratio polynomials (numerator, denominator) of zeta.
pub fn pms_ratio_polynomials(family: Family, kind: IntegralKind) -> (Vec<Rat>, Vec<Rat>) {
    let (r, s) = expand::pms_lambda_ratio(family, kind);
    (r.0, s.0)
}
