//! Potentials, turning-point geometry, and the zeta <-> energy change of
//! variables that the rest of the crate consumes.
//!
//! The harmonic oscillator is a dedicated branch ([`HarmonicSpec`]) rather
//! than the coupling -> 0 limit of [`PotentialSpec`]: that keeps the
//! anharmonic invariants (coupling > 0) testable and avoids 0/0 in the zeta
//! map.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Quartic,
    Sextic,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Quartic => "quartic",
            Family::Sextic => "sextic",
        }
    }
}

/// An even anharmonic oscillator: V(x) = m omega^2 x^2 / 2 + mu x^4 / 4
/// (quartic) or V(x) = m omega^2 x^2 / 2 + rho x^6 / 6 (sextic).
///
/// `coupling` is mu or rho depending on the family and must be positive.
/// omega = 0 is allowed for the quartic family only (the pure-quartic case
/// used by the zeta benchmark).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialSpec {
    pub family: Family,
    pub hbar: f64,
    pub mass: f64,
    pub omega: f64,
    pub coupling: f64,
}

impl PotentialSpec {
    pub fn new(family: Family, hbar: f64, mass: f64, omega: f64, coupling: f64) -> Result<Self> {
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::Domain(format!("hbar must be positive, got {hbar}")));
        }
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::Domain(format!("mass must be positive, got {mass}")));
        }
        if !(omega >= 0.0 && omega.is_finite()) {
            return Err(Error::Domain(format!("omega must be nonnegative, got {omega}")));
        }
        if !(coupling > 0.0 && coupling.is_finite()) {
            return Err(Error::Domain(format!(
                "coupling must be positive, got {coupling}; use HarmonicSpec for the harmonic case"
            )));
        }
        if omega == 0.0 && family == Family::Sextic {
            return Err(Error::Domain(
                "omega = 0 is only supported for the quartic family".into(),
            ));
        }
        Ok(PotentialSpec { family, hbar, mass, omega, coupling })
    }

    pub fn quartic(hbar: f64, mass: f64, omega: f64, mu: f64) -> Result<Self> {
        Self::new(Family::Quartic, hbar, mass, omega, mu)
    }

    pub fn sextic(hbar: f64, mass: f64, omega: f64, rho: f64) -> Result<Self> {
        Self::new(Family::Sextic, hbar, mass, omega, rho)
    }

    /// All parameters set to one.
    pub fn unit(family: Family) -> Self {
        Self::new(family, 1.0, 1.0, 1.0, 1.0).unwrap()
    }
}

/// The harmonic reference branch: V(x) = m omega^2 x^2 / 2 with omega > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicSpec {
    pub hbar: f64,
    pub mass: f64,
    pub omega: f64,
}

impl HarmonicSpec {
    pub fn new(hbar: f64, mass: f64, omega: f64) -> Result<Self> {
        if !(hbar > 0.0 && mass > 0.0 && omega > 0.0) {
            return Err(Error::Domain(
                "harmonic branch needs hbar, mass, omega all positive".into(),
            ));
        }
        Ok(HarmonicSpec { hbar, mass, omega })
    }

    /// Exact spectrum: E_n = hbar omega (n + 1/2).
    pub fn level_energy(&self, n: usize) -> f64 {
        self.hbar * self.omega * (n as f64 + 0.5)
    }

    /// Closed-form action integral J1(E) = pi E / (omega sqrt(2 m)).
    pub fn j1(&self, energy: f64) -> f64 {
        std::f64::consts::PI * energy / (self.omega * (2.0 * self.mass).sqrt())
    }

    /// J2 = pi omega sqrt(2 m), independent of E.
    pub fn j2(&self) -> f64 {
        std::f64::consts::PI * self.omega * (2.0 * self.mass).sqrt()
    }

    /// J3 = 7 pi m^{3/2} omega^3 sqrt(2), independent of E.
    pub fn j3(&self) -> f64 {
        7.0 * std::f64::consts::PI * self.mass.powf(1.5) * self.omega.powi(3) * 2f64.sqrt()
    }
}

/// Either branch, for the operations that accept both (potential evaluation,
/// quadrature, the level solver, the diagonalization oracle).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Potential {
    Harmonic(HarmonicSpec),
    Anharmonic(PotentialSpec),
}

impl From<PotentialSpec> for Potential {
    fn from(spec: PotentialSpec) -> Self {
        Potential::Anharmonic(spec)
    }
}

impl From<HarmonicSpec> for Potential {
    fn from(spec: HarmonicSpec) -> Self {
        Potential::Harmonic(spec)
    }
}

impl Potential {
    pub fn hbar(&self) -> f64 {
        match self {
            Potential::Harmonic(h) => h.hbar,
            Potential::Anharmonic(a) => a.hbar,
        }
    }

    pub fn mass(&self) -> f64 {
        match self {
            Potential::Harmonic(h) => h.mass,
            Potential::Anharmonic(a) => a.mass,
        }
    }

    pub fn omega(&self) -> f64 {
        match self {
            Potential::Harmonic(h) => h.omega,
            Potential::Anharmonic(a) => a.omega,
        }
    }
}

/// Turning-point data for a level of energy E: V(amplitude) = E with the
/// turning points at +-amplitude. `zeta` is the dimensionless variable
/// m omega^2 / (coupling A^2), populated for the quartic family with
/// omega > 0 only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TurningData {
    pub energy: f64,
    pub amplitude: f64,
    pub zeta: Option<f64>,
}

/// V(x) for either branch. Even in x with V(0) = 0.
pub fn evaluate_potential(potential: &Potential, x: f64) -> f64 {
    let x2 = x * x;
    match potential {
        Potential::Harmonic(h) => 0.5 * h.mass * h.omega * h.omega * x2,
        Potential::Anharmonic(spec) => {
            let harmonic = 0.5 * spec.mass * spec.omega * spec.omega * x2;
            match spec.family {
                Family::Quartic => harmonic + 0.25 * spec.coupling * x2 * x2,
                Family::Sextic => harmonic + spec.coupling * x2 * x2 * x2 / 6.0,
            }
        }
    }
}

/// dV/dx.
pub fn potential_derivative(potential: &Potential, x: f64) -> f64 {
    match potential {
        Potential::Harmonic(h) => h.mass * h.omega * h.omega * x,
        Potential::Anharmonic(spec) => {
            let harmonic = spec.mass * spec.omega * spec.omega * x;
            match spec.family {
                Family::Quartic => harmonic + spec.coupling * x * x * x,
                Family::Sextic => harmonic + spec.coupling * x.powi(5),
            }
        }
    }
}

/// Positive turning point A with V(A) = E. Closed form for the harmonic and
/// quartic branches; safeguarded Newton on the depressed cubic in A^2 for the
/// sextic.
pub fn turning_amplitude(potential: &Potential, energy: f64) -> Result<TurningData> {
    if !(energy > 0.0 && energy.is_finite()) {
        return Err(Error::Domain(format!("energy must be positive, got {energy}")));
    }
    let amplitude = match potential {
        Potential::Harmonic(h) => (2.0 * energy / (h.mass * h.omega * h.omega)).sqrt(),
        Potential::Anharmonic(spec) => {
            let mw2 = spec.mass * spec.omega * spec.omega;
            match spec.family {
                Family::Quartic => {
                    // (mu/4) y^2 + (m w^2/2) y - E = 0 in y = A^2, written so the
                    // mu -> 0 limit stays stable.
                    let disc = (0.25 * mw2 * mw2 + spec.coupling * energy).sqrt();
                    let y = 2.0 * energy / (disc + 0.5 * mw2);
                    y.sqrt()
                }
                Family::Sextic => {
                    // (rho/6) y^3 + (m w^2/2) y - E = 0, single positive root.
                    let f = |y: f64| spec.coupling * y * y * y / 6.0 + 0.5 * mw2 * y - energy;
                    let df = |y: f64| 0.5 * spec.coupling * y * y + 0.5 * mw2;
                    let mut y = (6.0 * energy / spec.coupling).cbrt().min(2.0 * energy / mw2.max(f64::MIN_POSITIVE));
                    if !y.is_finite() || y <= 0.0 {
                        y = (6.0 * energy / spec.coupling).cbrt();
                    }
                    for _ in 0..100 {
                        let step = f(y) / df(y);
                        let next = y - step;
                        let next = if next > 0.0 { next } else { 0.5 * y };
                        if (next - y).abs() <= 1e-16 * y {
                            y = next;
                            break;
                        }
                        y = next;
                    }
                    y.sqrt()
                }
            }
        }
    };
    let zeta = match potential {
        Potential::Anharmonic(spec) if spec.family == Family::Quartic && spec.omega > 0.0 => {
            Some(spec.mass * spec.omega * spec.omega / (spec.coupling * amplitude * amplitude))
        }
        _ => None,
    };
    Ok(TurningData { energy, amplitude, zeta })
}

/// zeta(E) = (m^2 w^4 / 4 mu E) [1 + sqrt(1 + 4 mu E / m^2 w^4)], the
/// closed-form map for the quartic family with omega > 0. Strictly decreasing
/// in E.
pub fn zeta_from_energy(spec: &PotentialSpec, energy: f64) -> Result<f64> {
    if spec.family != Family::Quartic || spec.omega == 0.0 {
        return Err(Error::UnsupportedMap(
            "zeta(E) is defined for the quartic family with omega > 0".into(),
        ));
    }
    if !(energy > 0.0 && energy.is_finite()) {
        return Err(Error::Domain(format!("energy must be positive, got {energy}")));
    }
    let mw4 = (spec.mass * spec.omega * spec.omega).powi(2);
    let g = 4.0 * spec.coupling * energy / mw4;
    Ok((1.0 + (1.0 + g).sqrt()) / g)
}

/// Exact inverse of [`zeta_from_energy`]:
/// E(zeta) = (m^2 w^4 / 4 mu) (2/zeta + 1/zeta^2).
pub fn energy_from_zeta(spec: &PotentialSpec, zeta: f64) -> Result<f64> {
    if spec.family != Family::Quartic || spec.omega == 0.0 {
        return Err(Error::UnsupportedMap(
            "E(zeta) is defined for the quartic family with omega > 0".into(),
        ));
    }
    if !(zeta > 0.0 && zeta.is_finite()) {
        return Err(Error::Domain(format!("zeta must be positive, got {zeta}")));
    }
    let mw4 = (spec.mass * spec.omega * spec.omega).powi(2);
    Ok(mw4 / (4.0 * spec.coupling) * (2.0 / zeta + 1.0 / (zeta * zeta)))
}

/// The dimensionless series variable for either family:
/// m omega^2 / (mu A^2) for the quartic, m omega^2 / (rho A^4) for the sextic.
/// This is what the delta-expansion approximants are functions of.
pub fn anharmonicity_zeta(spec: &PotentialSpec, energy: f64) -> Result<f64> {
    if spec.omega == 0.0 {
        return Err(Error::UnsupportedMap(
            "the series variable degenerates to 0 at omega = 0".into(),
        ));
    }
    match spec.family {
        Family::Quartic => zeta_from_energy(spec, energy),
        Family::Sextic => {
            let td = turning_amplitude(&Potential::Anharmonic(*spec), energy)?;
            let a2 = td.amplitude * td.amplitude;
            Ok(spec.mass * spec.omega * spec.omega / (spec.coupling * a2 * a2))
        }
    }
}

/// E as a function of the sextic series variable:
/// E = sqrt(m^3 w^6 / rho) (tau/2 + tau^3/6) with tau = zeta^{-1/2}.
pub fn sextic_energy_from_zeta(spec: &PotentialSpec, zeta: f64) -> Result<f64> {
    if spec.family != Family::Sextic || spec.omega == 0.0 {
        return Err(Error::UnsupportedMap(
            "sextic E(zeta) needs the sextic family with omega > 0".into(),
        ));
    }
    if !(zeta > 0.0 && zeta.is_finite()) {
        return Err(Error::Domain(format!("zeta must be positive, got {zeta}")));
    }
    let scale = (spec.mass.powi(3) * spec.omega.powi(6) / spec.coupling).sqrt();
    let tau = zeta.powf(-0.5);
    Ok(scale * (0.5 * tau + tau * tau * tau / 6.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn potential_values() {
        let quartic = Potential::from(PotentialSpec::unit(Family::Quartic));
        assert_relative_eq!(evaluate_potential(&quartic, 1.0), 0.75);
        assert_eq!(evaluate_potential(&quartic, 0.0), 0.0);
        assert_relative_eq!(
            evaluate_potential(&quartic, -1.3),
            evaluate_potential(&quartic, 1.3)
        );
        let sextic = Potential::from(PotentialSpec::unit(Family::Sextic));
        assert_relative_eq!(evaluate_potential(&sextic, 1.0), 2.0 / 3.0);
    }

    #[test]
    fn spec_validation() {
        assert!(PotentialSpec::quartic(1.0, 1.0, 0.0, 4.0).is_ok());
        assert!(PotentialSpec::sextic(1.0, 1.0, 0.0, 1.0).is_err());
        assert!(PotentialSpec::quartic(1.0, 1.0, 1.0, 0.0).is_err());
        assert!(PotentialSpec::quartic(1.0, -1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn turning_points() {
        let spec = PotentialSpec::unit(Family::Quartic);
        let td = turning_amplitude(&spec.into(), 0.75).unwrap();
        assert_relative_eq!(td.amplitude, 1.0, max_relative = 1e-14);
        assert_relative_eq!(td.zeta.unwrap(), 1.0, max_relative = 1e-14);

        let harmonic = HarmonicSpec::new(1.0, 1.0, 1.0).unwrap();
        let td = turning_amplitude(&harmonic.into(), 2.0).unwrap();
        assert_relative_eq!(td.amplitude, 2.0, max_relative = 1e-14);

        let sextic = PotentialSpec::unit(Family::Sextic);
        let td = turning_amplitude(&sextic.into(), 2.0 / 3.0).unwrap();
        assert_relative_eq!(td.amplitude, 1.0, max_relative = 1e-13);

        assert!(turning_amplitude(&Potential::from(spec), -1.0).is_err());
    }

    #[test]
    fn turning_amplitude_satisfies_definition() {
        // V(A) = E to 1e-13 relative across both families and wide energies.
        for family in [Family::Quartic, Family::Sextic] {
            let spec = PotentialSpec::new(family, 1.0, 0.7, 1.9, 3.0).unwrap();
            let p = Potential::from(spec);
            for k in -3..=6 {
                let energy = 10f64.powi(k);
                let td = turning_amplitude(&p, energy).unwrap();
                assert_relative_eq!(
                    evaluate_potential(&p, td.amplitude),
                    energy,
                    max_relative = 1e-13
                );
            }
        }
    }

    #[test]
    fn zeta_map_examples() {
        let spec = PotentialSpec::unit(Family::Quartic);
        assert_relative_eq!(zeta_from_energy(&spec, 0.75).unwrap(), 1.0, max_relative = 1e-14);
        let expected = (1.0 + 13f64.sqrt()) / 12.0;
        assert_relative_eq!(zeta_from_energy(&spec, 3.0).unwrap(), expected, max_relative = 1e-14);
        assert_relative_eq!(energy_from_zeta(&spec, 1.0).unwrap(), 0.75, max_relative = 1e-14);
        assert_relative_eq!(energy_from_zeta(&spec, 2.0).unwrap(), 0.3125, max_relative = 1e-14);
        // zeta -> 0 monotonically as E grows.
        let mut prev = zeta_from_energy(&spec, 1.0).unwrap();
        for e in [10.0, 1e3, 1e6, 1e9] {
            let z = zeta_from_energy(&spec, e).unwrap();
            assert!(z < prev && z > 0.0);
            prev = z;
        }
    }

    #[test]
    fn zeta_map_round_trip_and_monotone() {
        let spec = PotentialSpec::quartic(1.0, 1.3, 0.8, 2.5).unwrap();
        // Round trip on a log grid of E, and strict monotonicity.
        let mut prev_zeta = f64::INFINITY;
        for i in 0..=36 {
            let energy = 1e-3 * 10f64.powf(i as f64 / 4.0);
            let zeta = zeta_from_energy(&spec, energy).unwrap();
            assert!(zeta < prev_zeta, "zeta(E) must strictly decrease");
            prev_zeta = zeta;
            let back = energy_from_zeta(&spec, zeta).unwrap();
            assert_relative_eq!(back, energy, max_relative = 1e-12);
        }
        for zeta in [0.1, 1.0, 10.0] {
            let energy = energy_from_zeta(&spec, zeta).unwrap();
            let z2 = zeta_from_energy(&spec, energy).unwrap();
            assert_relative_eq!(z2, zeta, max_relative = 1e-13);
        }
        // Consistency with the turning-point definition of zeta.
        for energy in [0.3, 4.0, 900.0] {
            let td = turning_amplitude(&spec.into(), energy).unwrap();
            assert_relative_eq!(
                zeta_from_energy(&spec, energy).unwrap(),
                td.zeta.unwrap(),
                max_relative = 1e-13
            );
        }
    }

    #[test]
    fn zeta_map_rejects_unsupported() {
        let sextic = PotentialSpec::unit(Family::Sextic);
        assert!(matches!(zeta_from_energy(&sextic, 1.0), Err(Error::UnsupportedMap(_))));
        let pure = PotentialSpec::quartic(1.0, 1.0, 0.0, 4.0).unwrap();
        assert!(matches!(zeta_from_energy(&pure, 1.0), Err(Error::UnsupportedMap(_))));
        let spec = PotentialSpec::unit(Family::Quartic);
        assert!(energy_from_zeta(&spec, 0.0).is_err());
    }

    #[test]
    fn sextic_zeta_consistency() {
        let spec = PotentialSpec::unit(Family::Sextic);
        let energy = 2.0 / 3.0;
        // A = 1 at this energy, so zeta = 1.
        assert_relative_eq!(anharmonicity_zeta(&spec, energy).unwrap(), 1.0, max_relative = 1e-12);
        for e in [0.5, 5.0, 500.0] {
            let z = anharmonicity_zeta(&spec, e).unwrap();
            let back = sextic_energy_from_zeta(&spec, z).unwrap();
            assert_relative_eq!(back, e, max_relative = 1e-12);
        }
    }

    #[test]
    fn harmonic_reference_values() {
        let h = HarmonicSpec::new(1.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(h.level_energy(3), 3.5);
        assert_relative_eq!(h.j1(2.0), std::f64::consts::PI * 2.0 / 2f64.sqrt());
        assert_relative_eq!(h.j2(), std::f64::consts::PI * 2f64.sqrt());
    }
}
