//! Exact-value oracle for the three WKB integrals.
//!
//! The substitution x = A sin(theta) removes the inverse-square-root endpoint
//! singularity exactly for polynomial potentials: E - V(x) factors as
//! (A^2 - x^2) W(x) with W smooth and strictly positive on [-A, A], so every
//! integrand below is analytic on the closed theta-interval. On top of that a
//! pair of Gauss-Legendre rules of different order drives an adaptive
//! bisection with an error estimate per panel.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::model::{turning_amplitude, Family, Potential};

/// Which WKB integral: J1 has integrand sqrt(E-V), J2 has V''/sqrt(E-V), and
/// J3 has (7 V''^2 - 5 V' V''')/sqrt(E-V), all between the turning points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IntegralKind {
    J1,
    J2,
    J3,
}

impl IntegralKind {
    pub fn as_str(self) -> &'static str {
        match self {
            IntegralKind::J1 => "J1",
            IntegralKind::J2 => "J2",
            IntegralKind::J3 => "J3",
        }
    }
}

/// A value with the integrator's error bound attached.
#[derive(Debug, Clone, Copy)]
pub struct IntegralValue {
    pub value: f64,
    pub error_bound: f64,
}

/// Embedded pair of Gauss-Legendre rules; the difference of the two orders is
/// the panel error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadRule {
    /// 15/30 point pair (default).
    Primary,
    /// 20/40 point pair, used as the independent cross-check.
    Secondary,
}

impl QuadRule {
    fn orders(self) -> (usize, usize) {
        match self {
            QuadRule::Primary => (15, 30),
            QuadRule::Secondary => (20, 40),
        }
    }
}

const MAX_DEPTH: u32 = 20;

/// Smooth factor W(x) = (E - V(x)) / (A^2 - x^2), positive on [-A, A].
fn smooth_factor(potential: &Potential, amplitude: f64, x: f64) -> f64 {
    let half_mw2 = 0.5 * potential.mass() * potential.omega() * potential.omega();
    match potential {
        Potential::Harmonic(_) => half_mw2,
        Potential::Anharmonic(spec) => {
            let a2 = amplitude * amplitude;
            let x2 = x * x;
            match spec.family {
                Family::Quartic => half_mw2 + 0.25 * spec.coupling * (a2 + x2),
                Family::Sextic => half_mw2 + spec.coupling * (a2 * a2 + a2 * x2 + x2 * x2) / 6.0,
            }
        }
    }
}

/// V''(x).
fn second_derivative(potential: &Potential, x: f64) -> f64 {
    let mw2 = potential.mass() * potential.omega() * potential.omega();
    match potential {
        Potential::Harmonic(_) => mw2,
        Potential::Anharmonic(spec) => match spec.family {
            Family::Quartic => mw2 + 3.0 * spec.coupling * x * x,
            Family::Sextic => mw2 + 5.0 * spec.coupling * x.powi(4),
        },
    }
}

/// 7 V''(x)^2 - 5 V'(x) V'''(x), expanded per family.
fn j3_kernel(potential: &Potential, x: f64) -> f64 {
    let mw2 = potential.mass() * potential.omega() * potential.omega();
    let x2 = x * x;
    match potential {
        Potential::Harmonic(_) => 7.0 * mw2 * mw2,
        Potential::Anharmonic(spec) => {
            let g = spec.coupling;
            match spec.family {
                Family::Quartic => 7.0 * mw2 * mw2 + 12.0 * mw2 * g * x2 + 33.0 * g * g * x2 * x2,
                Family::Sextic => {
                    let x4 = x2 * x2;
                    7.0 * mw2 * mw2 - 30.0 * mw2 * g * x4 + 75.0 * g * g * x4 * x4
                }
            }
        }
    }
}

fn validate_tol(tol: f64) -> Result<()> {
    if !(1e-14..=1e-6).contains(&tol) {
        return Err(Error::Domain(format!("tol must lie in [1e-14, 1e-6], got {tol}")));
    }
    Ok(())
}

/// The integral of `kind` between the turning points at energy E, accurate to
/// relative `tol`, with the default rule pair.
pub fn integral_exact(
    kind: IntegralKind,
    potential: &Potential,
    energy: f64,
    tol: f64,
) -> Result<IntegralValue> {
    integral_exact_with_rule(kind, potential, energy, tol, QuadRule::Primary)
}

/// Same as [`integral_exact`] with an explicit rule pair, for cross-checks.
pub fn integral_exact_with_rule(
    kind: IntegralKind,
    potential: &Potential,
    energy: f64,
    tol: f64,
    rule: QuadRule,
) -> Result<IntegralValue> {
    validate_tol(tol)?;
    let turning = turning_amplitude(potential, energy)?;
    let a = turning.amplitude;
    // theta-substituted integrands; all even in theta, so integrate [0, pi/2]
    // and double.
    let f = |theta: f64| {
        let x = a * theta.sin();
        let c = theta.cos();
        let w = smooth_factor(potential, a, x);
        match kind {
            IntegralKind::J1 => a * a * c * c * w.sqrt(),
            IntegralKind::J2 => second_derivative(potential, x) / w.sqrt(),
            IntegralKind::J3 => j3_kernel(potential, x) / w.sqrt(),
        }
    };
    let half = adaptive_integrate(&f, 0.0, std::f64::consts::FRAC_PI_2, tol, rule)?;
    Ok(IntegralValue { value: 2.0 * half.value, error_bound: 2.0 * half.error_bound })
}

/// d^order J / dE^order by central finite differences with Richardson
/// extrapolation; order 1 or 3. Serves as an oracle for the analytic series
/// derivatives, not as a production path.
pub fn integral_exact_derivatives(
    kind: IntegralKind,
    potential: &Potential,
    energy: f64,
    order: u32,
    tol: f64,
) -> Result<IntegralValue> {
    validate_tol(tol)?;
    if order != 1 && order != 3 {
        return Err(Error::Domain(format!("derivative order must be 1 or 3, got {order}")));
    }
    if !(energy > 0.0) {
        return Err(Error::Domain(format!("energy must be positive, got {energy}")));
    }
    let inner_tol = 1e-14;
    let h0 = 1e-3 * energy;
    if h0 < 32.0 * f64::EPSILON * energy {
        return Err(Error::AccuracyNotReached { estimate: f64::NAN, error_bound: f64::INFINITY });
    }
    let f = |e: f64| -> Result<f64> {
        Ok(integral_exact(kind, potential, e, inner_tol)?.value)
    };

    // 5-point central stencils. The first-derivative stencil starts its error
    // series at h^4, the third-derivative one at h^2; both proceed in h^2.
    const LEVELS: usize = 4;
    let mut estimates = [0.0f64; LEVELS];
    let mut scale = 0.0f64;
    for (i, est) in estimates.iter_mut().enumerate() {
        let h = h0 / 2f64.powi(i as i32);
        let fm2 = f(energy - 2.0 * h)?;
        let fm1 = f(energy - h)?;
        let fp1 = f(energy + h)?;
        let fp2 = f(energy + 2.0 * h)?;
        scale = scale.max(fm2.abs()).max(fp2.abs());
        *est = match order {
            1 => (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h),
            _ => (-fm2 + 2.0 * fm1 - 2.0 * fp1 + fp2) / (2.0 * h * h * h),
        };
    }
    let p0 = if order == 1 { 4 } else { 2 };
    let (value, rich_err) = richardson(&estimates, p0);
    let h_min = h0 / 2f64.powi(LEVELS as i32 - 1);
    let noise = 8.0 * inner_tol * scale / h_min.powi(order as i32);
    let error_bound = rich_err.max(noise);
    if !value.is_finite() {
        return Err(Error::AccuracyNotReached { estimate: value, error_bound });
    }
    Ok(IntegralValue { value, error_bound })
}

/// Richardson extrapolation for estimates T(h/2^i) whose error series starts
/// at h^p0 and proceeds in even powers. Returns the extrapolated value and the
/// difference of the last two diagonal entries as an error estimate.
fn richardson(estimates: &[f64], p0: u32) -> (f64, f64) {
    let n = estimates.len();
    let mut table = estimates.to_vec();
    let mut prev_diag = table[0];
    let mut diag = table[n - 1];
    for j in 1..n {
        let factor = 2f64.powi((p0 + 2 * (j as u32 - 1)) as i32);
        for i in (j..n).rev() {
            table[i] = (factor * table[i] - table[i - 1]) / (factor - 1.0);
        }
        prev_diag = diag;
        diag = table[n - 1];
    }
    (diag, (diag - prev_diag).abs())
}

/// Adaptive bisection driven by a low/high Gauss-Legendre pair. Panels are
/// accepted when the pair difference fits within their share of the budget;
/// exceeding the depth cap returns the best estimate inside the error.
pub(crate) fn adaptive_integrate<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    rel_tol: f64,
    rule: QuadRule,
) -> Result<IntegralValue> {
    let (lo_order, hi_order) = rule.orders();
    let lo_rule = gauss_rule(lo_order);
    let hi_rule = gauss_rule(hi_order);
    // Returns the panel estimate together with the integral of |f|, which
    // sets the attainable accuracy scale for sign-changing integrands.
    let apply = |nodes: &[(f64, f64)], x0: f64, x1: f64| -> (f64, f64) {
        let c = 0.5 * (x0 + x1);
        let h = 0.5 * (x1 - x0);
        let mut acc = 0.0;
        let mut acc_abs = 0.0;
        for &(t, w) in nodes {
            let v = f(c + h * t);
            acc += w * v;
            acc_abs += w * v.abs();
        }
        (acc * h, acc_abs * h)
    };

    let (_, whole_scale) = apply(&hi_rule, a, b);
    let scale = whole_scale.abs().max(1e-300);
    let total_len = b - a;
    let mut total = 0.0;
    let mut total_err = 0.0;
    let mut cap_exceeded = false;
    let mut stack = vec![(a, b, 0u32)];
    while let Some((x0, x1, depth)) = stack.pop() {
        let (hi, _) = apply(&hi_rule, x0, x1);
        let (lo, _) = apply(&lo_rule, x0, x1);
        let err = (hi - lo).abs();
        let budget = rel_tol * scale * ((x1 - x0) / total_len).max(f64::MIN_POSITIVE);
        if err <= budget || depth >= MAX_DEPTH {
            total += hi;
            total_err += err;
            if err > budget {
                cap_exceeded = true;
            }
        } else {
            let mid = 0.5 * (x0 + x1);
            stack.push((x0, mid, depth + 1));
            stack.push((mid, x1, depth + 1));
        }
    }
    if cap_exceeded && total_err > rel_tol * scale {
        return Err(Error::AccuracyNotReached { estimate: total, error_bound: total_err });
    }
    Ok(IntegralValue {
        value: total,
        error_bound: total_err.max(scale * f64::EPSILON),
    })
}

/// Runtime Gauss-Legendre nodes and weights on [-1, 1], cached per order.
/// Nodes are Newton-refined roots of P_n seeded by the Chebyshev estimate.
fn gauss_rule(order: usize) -> Arc<Vec<(f64, f64)>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<(f64, f64)>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    guard
        .entry(order)
        .or_insert_with(|| Arc::new(compute_gauss_rule(order)))
        .clone()
}

fn legendre_with_derivative(order: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=order {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = order as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn compute_gauss_rule(order: usize) -> Vec<(f64, f64)> {
    assert!(order >= 2);
    let mut rule = Vec::with_capacity(order);
    for i in 0..(order + 1) / 2 {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (order as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(order, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-17 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(order, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.push((x, w));
        if x.abs() > 1e-12 {
            rule.push((-x, w));
        }
    }
    rule
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{HarmonicSpec, PotentialSpec};
    use approx::assert_relative_eq;

    fn harmonic() -> Potential {
        HarmonicSpec::new(1.0, 1.0, 1.0).unwrap().into()
    }

    #[test]
    fn gauss_rule_integrates_polynomials() {
        // order-n rule is exact through degree 2n-1
        let rule = gauss_rule(5);
        let mut acc = 0.0;
        for &(x, w) in rule.iter() {
            acc += w * x.powi(8);
        }
        assert_relative_eq!(acc, 2.0 / 9.0, max_relative = 1e-14);
        let total_weight: f64 = rule.iter().map(|&(_, w)| w).sum();
        assert_relative_eq!(total_weight, 2.0, max_relative = 1e-14);
    }

    #[test]
    fn harmonic_j1_closed_form() {
        let p = harmonic();
        for energy in [0.5, 2.0, 20.0] {
            let v = integral_exact(IntegralKind::J1, &p, energy, 1e-13).unwrap();
            let expected = std::f64::consts::PI * energy / 2f64.sqrt();
            assert_relative_eq!(v.value, expected, max_relative = 1e-13);
            assert!((v.value - expected).abs() <= v.error_bound.max(1e-13 * expected));
        }
    }

    #[test]
    fn harmonic_j2_and_j3_constant() {
        let p = harmonic();
        let j2_expected = std::f64::consts::PI * 2f64.sqrt();
        let j3_expected = 7.0 * std::f64::consts::PI * 2f64.sqrt();
        for energy in [0.3, 1.0, 3.0] {
            let j2 = integral_exact(IntegralKind::J2, &p, energy, 1e-13).unwrap();
            assert_relative_eq!(j2.value, j2_expected, max_relative = 1e-12);
            let j3 = integral_exact(IntegralKind::J3, &p, energy, 1e-13).unwrap();
            assert_relative_eq!(j3.value, j3_expected, max_relative = 1e-12);
        }
    }

    #[test]
    fn quartic_j1_dual_rule_agreement() {
        // Frozen from the two independent rules agreeing at tol 1e-14; the
        // assertion keeps both rules pinned to it.
        let spec = PotentialSpec::unit(Family::Quartic);
        let p = Potential::from(spec);
        let a = integral_exact_with_rule(IntegralKind::J1, &p, 0.75, 1e-13, QuadRule::Primary).unwrap();
        let b = integral_exact_with_rule(IntegralKind::J1, &p, 0.75, 1e-13, QuadRule::Secondary).unwrap();
        assert!((a.value - b.value).abs() < 1e-12 * a.value.abs());
        let frozen = 1.4148844305059562;
        assert_relative_eq!(a.value, frozen, max_relative = 1e-12);
    }

    #[test]
    fn dual_rules_agree_on_random_samples() {
        // 50 pseudo-random (kind, spec, E) samples; the two rule pairs must
        // agree within the sum of their reported bounds.
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for i in 0..50 {
            let kind = match i % 3 {
                0 => IntegralKind::J1,
                1 => IntegralKind::J2,
                _ => IntegralKind::J3,
            };
            let family = if i % 2 == 0 { Family::Quartic } else { Family::Sextic };
            let spec = PotentialSpec::new(
                family,
                1.0,
                0.5 + 1.5 * next(),
                0.5 + 1.5 * next(),
                0.5 + 3.5 * next(),
            )
            .unwrap();
            let energy = 10f64.powf(-1.0 + 3.0 * next());
            let p = Potential::from(spec);
            let a = integral_exact_with_rule(kind, &p, energy, 1e-12, QuadRule::Primary).unwrap();
            let b = integral_exact_with_rule(kind, &p, energy, 1e-12, QuadRule::Secondary).unwrap();
            let bound = (a.error_bound + b.error_bound).max(1e-12 * a.value.abs());
            assert!(
                (a.value - b.value).abs() <= bound,
                "rules disagree for {kind:?} {family:?} E={energy}: {} vs {} (bound {bound})",
                a.value,
                b.value
            );
        }
    }

    #[test]
    fn j1_strictly_increasing_in_energy() {
        for family in [Family::Quartic, Family::Sextic] {
            let p = Potential::from(PotentialSpec::unit(family));
            let mut prev = 0.0;
            for i in 0..12 {
                let energy = 0.1 * 10f64.powf(i as f64 / 3.0);
                let v = integral_exact(IntegralKind::J1, &p, energy, 1e-12).unwrap().value;
                assert!(v > prev, "J1 must increase with E");
                prev = v;
            }
        }
    }

    #[test]
    fn substituted_integrand_finite_at_endpoints() {
        // W(A) = V'(A) / (2A) > 0, so the theta-integrands stay finite at
        // theta = pi/2.
        for family in [Family::Quartic, Family::Sextic] {
            let spec = PotentialSpec::new(family, 1.0, 1.2, 0.9, 2.0).unwrap();
            let p = Potential::from(spec);
            for energy in [0.1, 1.0, 100.0] {
                let td = turning_amplitude(&p, energy).unwrap();
                let w_end = smooth_factor(&p, td.amplitude, td.amplitude);
                let vprime = crate::model::potential_derivative(&p, td.amplitude);
                assert!(w_end > 0.0);
                assert_relative_eq!(w_end, vprime / (2.0 * td.amplitude), max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn harmonic_derivatives_vanish() {
        let p = harmonic();
        for energy in [0.7, 2.0, 9.0] {
            let d1 = integral_exact_derivatives(IntegralKind::J2, &p, energy, 1, 1e-10).unwrap();
            assert!(d1.value.abs() < 1e-10, "dJ2/dE = {}", d1.value);
            let d3 = integral_exact_derivatives(IntegralKind::J3, &p, energy, 3, 1e-10).unwrap();
            assert!(d3.value.abs() < 1e-8, "d3J3/dE3 = {}", d3.value);
        }
    }

    #[test]
    fn first_derivative_matches_forward_difference_sanity() {
        // Coarse consistency before the delta module provides the analytic
        // oracle: compare against a plain secant on a wide step.
        let spec = PotentialSpec::unit(Family::Quartic);
        let p = Potential::from(spec);
        let d = integral_exact_derivatives(IntegralKind::J2, &p, 0.75, 1, 1e-10).unwrap();
        let h = 1e-4;
        let fp = integral_exact(IntegralKind::J2, &p, 0.75 + h, 1e-13).unwrap().value;
        let fm = integral_exact(IntegralKind::J2, &p, 0.75 - h, 1e-13).unwrap().value;
        let secant = (fp - fm) / (2.0 * h);
        assert_relative_eq!(d.value, secant, max_relative = 1e-6);
        assert!(d.error_bound < 1e-6 * d.value.abs());
    }

    #[test]
    fn rejects_bad_inputs() {
        let p = harmonic();
        assert!(integral_exact(IntegralKind::J1, &p, 1.0, 1e-20).is_err());
        assert!(integral_exact(IntegralKind::J1, &p, -1.0, 1e-12).is_err());
        assert!(integral_exact_derivatives(IntegralKind::J2, &p, 1.0, 2, 1e-10).is_err());
    }
}
