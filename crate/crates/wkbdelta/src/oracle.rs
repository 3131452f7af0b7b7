//! Brute-force spectrum oracle: the Hamiltonian in a harmonic-oscillator
//! eigenbasis, dense symmetric eigensolve, basis-size doubling until every
//! requested level is converged.
//!
//! Matrix elements come from applying the ladder combination (a + a^dag) to
//! basis columns inside a padded workspace, so x^2, x^4, x^6 blocks are the
//! exact infinite-space elements with no truncation contamination; the matrix
//! is banded (bandwidth 6) and exactly symmetric by construction.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::model::{Family, Potential};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    Both,
}

/// Basis oscillator configuration. `scale_frequency` tunes conditioning only;
/// converged eigenvalues are independent of it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisConfig {
    pub size: usize,
    pub scale_frequency: f64,
    pub parity: Parity,
}

impl BasisConfig {
    pub fn new(size: usize, scale_frequency: f64, parity: Parity) -> Result<Self> {
        if size < 4 {
            return Err(Error::Domain(format!("basis size must be at least 4, got {size}")));
        }
        if !(scale_frequency > 0.0 && scale_frequency.is_finite()) {
            return Err(Error::Domain(format!(
                "scale frequency must be positive, got {scale_frequency}"
            )));
        }
        Ok(BasisConfig { size, scale_frequency, parity })
    }

    /// Default scale: the potential's own frequency, or the anharmonic
    /// frequency scale (hbar g / m^2)^{1/3} for the pure quartic.
    pub fn default_for(potential: &Potential, size: usize) -> Result<Self> {
        let omega = default_scale_frequency(potential);
        Self::new(size, omega, Parity::Both)
    }
}

fn default_scale_frequency(potential: &Potential) -> f64 {
    match potential {
        Potential::Harmonic(h) => h.omega,
        Potential::Anharmonic(spec) => {
            if spec.omega > 0.0 {
                spec.omega
            } else {
                (spec.hbar * spec.coupling / (spec.mass * spec.mass)).cbrt()
            }
        }
    }
}

/// Converged spectrum with per-level doubling estimates.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleSpectrum {
    pub energies: Vec<f64>,
    pub basis_size_used: usize,
    /// Relative change of each level under the final basis doubling.
    pub convergence_estimate: Vec<f64>,
}

/// Column j of (a + a^dag)^power applied inside a padded workspace, so the
/// entries below `dim` are exact.
fn ladder_power_column(power: usize, j: usize, dim: usize) -> Vec<f64> {
    let padded = dim + power + 1;
    let mut v = vec![0.0; padded];
    v[j] = 1.0;
    for _ in 0..power {
        let mut w = vec![0.0; padded];
        for k in 0..padded {
            let c = v[k];
            if c != 0.0 {
                if k + 1 < padded {
                    w[k + 1] += ((k + 1) as f64).sqrt() * c;
                }
                if k > 0 {
                    w[k - 1] += (k as f64).sqrt() * c;
                }
            }
        }
        v = w;
    }
    v.truncate(dim);
    v
}

/// Matrix of the Hamiltonian in the normalized oscillator eigenbasis at the
/// basis frequency. Exactly symmetric; at matching harmonic frequency the
/// off-diagonal kinetic and potential parts cancel exactly and the matrix is
/// diagonal.
pub fn hamiltonian_matrix(potential: &Potential, basis: &BasisConfig) -> DMatrix<f64> {
    let full = full_hamiltonian(potential, basis);
    match basis.parity {
        Parity::Both => full,
        Parity::Even => parity_block(&full, 0),
        Parity::Odd => parity_block(&full, 1),
    }
}

fn full_hamiltonian(potential: &Potential, basis: &BasisConfig) -> DMatrix<f64> {
    let dim = basis.size;
    let hbar = potential.hbar();
    let mass = potential.mass();
    let omega = potential.omega();
    let cap_omega = basis.scale_frequency;
    let b = hbar / (2.0 * mass * cap_omega);

    // H = p^2/2m + m w^2 x^2 / 2 + anharmonic term. With S2 = (a+a^dag)^2:
    // p^2/2m = (hbar W / 4)(2(2N+1) - S2) and x^2 = b S2, so the S2
    // coefficient is (hbar / 4 W)(w - W)(w + W), exactly zero at w = W.
    let s2_coefficient = hbar / (4.0 * cap_omega) * (omega - cap_omega) * (omega + cap_omega);
    let (anh_power, anh_coefficient) = match potential {
        Potential::Harmonic(_) => (0usize, 0.0),
        Potential::Anharmonic(spec) => match spec.family {
            Family::Quartic => (4, spec.coupling / 4.0 * b * b),
            Family::Sextic => (6, spec.coupling / 6.0 * b * b * b),
        },
    };

    let mut h = DMatrix::zeros(dim, dim);
    for j in 0..dim {
        h[(j, j)] = hbar * cap_omega * (j as f64 + 0.5);
        let s2 = ladder_power_column(2, j, dim);
        for i in j..dim {
            h[(i, j)] += s2_coefficient * s2[i];
        }
        if anh_power > 0 {
            let sk = ladder_power_column(anh_power, j, dim);
            for i in j..dim {
                h[(i, j)] += anh_coefficient * sk[i];
            }
        }
    }
    // Mirror the strict lower triangle.
    for j in 0..dim {
        for i in (j + 1)..dim {
            h[(j, i)] = h[(i, j)];
        }
    }
    h
}

fn parity_block(full: &DMatrix<f64>, offset: usize) -> DMatrix<f64> {
    let dim = (full.nrows() - offset).div_ceil(2);
    DMatrix::from_fn(dim, dim, |i, j| full[(2 * i + offset, 2 * j + offset)])
}

fn sorted_eigenvalues(matrix: DMatrix<f64>) -> Vec<f64> {
    let eigen = matrix.symmetric_eigen();
    let mut values: Vec<f64> = eigen.eigenvalues.iter().copied().collect();
    values.sort_by(|a, b| a.total_cmp(b));
    values
}

/// All eigenvalues at one basis size (parity-split fast path).
fn spectrum_at_size(potential: &Potential, size: usize, scale_frequency: f64) -> Result<Vec<f64>> {
    let basis = BasisConfig::new(size, scale_frequency, Parity::Both)?;
    let full = full_hamiltonian(potential, &basis);
    let mut values = sorted_eigenvalues(parity_block(&full, 0));
    values.extend(sorted_eigenvalues(parity_block(&full, 1)));
    values.sort_by(|a, b| a.total_cmp(b));
    Ok(values)
}

pub const DEFAULT_BASIS_CAP: usize = 4096;

/// Converged spectrum of levels 0..=n_max: double the basis from
/// max(4 n_max, 64) until every level moves by less than `tol` relative.
pub fn exact_spectrum(potential: &Potential, n_max: usize, tol: f64) -> Result<OracleSpectrum> {
    exact_spectrum_with_cap(potential, n_max, tol, DEFAULT_BASIS_CAP)
}

/// [`exact_spectrum`] with an explicit basis cap.
pub fn exact_spectrum_with_cap(
    potential: &Potential,
    n_max: usize,
    tol: f64,
    basis_cap: usize,
) -> Result<OracleSpectrum> {
    if !(1e-12..=1e-4).contains(&tol) {
        return Err(Error::Domain(format!("tol must lie in [1e-12, 1e-4], got {tol}")));
    }
    let scale_frequency = default_scale_frequency(potential);
    let mut size = (4 * n_max).max(64);
    let mut previous = spectrum_at_size(potential, size, scale_frequency)?;
    while 2 * size <= basis_cap {
        size *= 2;
        let current = spectrum_at_size(potential, size, scale_frequency)?;
        let mut changes = Vec::with_capacity(n_max + 1);
        let mut all_converged = true;
        for n in 0..=n_max {
            let change = ((current[n] - previous[n]) / current[n]).abs();
            // Rayleigh-Ritz: estimates must not increase as the basis grows,
            // beyond eigensolver roundoff.
            debug_assert!(
                current[n] <= previous[n] * (1.0 + 1e-10) + 1e-12,
                "variational monotonicity violated at level {n}: {} -> {}",
                previous[n],
                current[n]
            );
            if !(change < tol) {
                all_converged = false;
            }
            changes.push(change);
        }
        if all_converged {
            return Ok(OracleSpectrum {
                energies: current[..=n_max].to_vec(),
                basis_size_used: size,
                convergence_estimate: changes,
            });
        }
        previous = current;
    }
    // Report the prefix that did converge at the cap.
    let at_cap = previous;
    let mut converged = Vec::new();
    for n in 0..=n_max.min(at_cap.len().saturating_sub(1)) {
        converged.push(at_cap[n]);
    }
    Err(Error::OracleConvergence { basis_cap, requested: n_max + 1, converged })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{HarmonicSpec, PotentialSpec};
    use approx::assert_relative_eq;

    #[test]
    fn harmonic_matrix_is_diagonal_at_matching_scale() {
        let h = HarmonicSpec::new(1.0, 1.0, 1.3).unwrap();
        let p = Potential::from(h);
        let basis = BasisConfig::new(16, 1.3, Parity::Both).unwrap();
        let matrix = hamiltonian_matrix(&p, &basis);
        for i in 0..16 {
            for j in 0..16 {
                if i == j {
                    assert_relative_eq!(matrix[(i, j)], 1.3 * (i as f64 + 0.5), max_relative = 1e-15);
                } else {
                    assert_eq!(matrix[(i, j)], 0.0, "off-diagonal ({i},{j}) must vanish exactly");
                }
            }
        }
    }

    #[test]
    fn ground_state_x4_element() {
        // <0|x^4|0> = 3 (hbar / 2 m W)^2 shows up in the pure-quartic (0,0)
        // entry on top of the kinetic and S2 parts.
        let spec = PotentialSpec::quartic(1.0, 1.0, 0.0, 4.0).unwrap();
        let p = Potential::from(spec);
        let cap_omega = default_scale_frequency(&p);
        let b = 1.0 / (2.0 * cap_omega);
        let basis = BasisConfig::new(8, cap_omega, Parity::Both).unwrap();
        let matrix = hamiltonian_matrix(&p, &basis);
        let kinetic_and_s2 = 0.5 * cap_omega
            + (1.0 / (4.0 * cap_omega)) * (0.0 - cap_omega) * (0.0 + cap_omega) * 1.0;
        let expected_x4 = 3.0 * b * b; // times mu/4 = 1
        assert_relative_eq!(matrix[(0, 0)] - kinetic_and_s2, expected_x4, max_relative = 1e-13);
    }

    #[test]
    fn matrix_exactly_symmetric_and_banded() {
        let mut state = 1234u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            0.5 + 1.5 * ((state >> 11) as f64 / (1u64 << 53) as f64)
        };
        for trial in 0..10 {
            let family = if trial % 2 == 0 { Family::Quartic } else { Family::Sextic };
            let spec = PotentialSpec::new(family, next(), next(), next(), next()).unwrap();
            let p = Potential::from(spec);
            let basis = BasisConfig::new(24, next(), Parity::Both).unwrap();
            let m = hamiltonian_matrix(&p, &basis);
            let bandwidth = if family == Family::Quartic { 4 } else { 6 };
            for i in 0..24 {
                for j in 0..24 {
                    assert_eq!(m[(i, j)], m[(j, i)], "asymmetry at ({i},{j})");
                    if i.abs_diff(j) > bandwidth {
                        assert_eq!(m[(i, j)], 0.0, "band structure violated at ({i},{j})");
                    }
                    if (i + j) % 2 == 1 {
                        assert_eq!(m[(i, j)], 0.0, "parity coupling at ({i},{j})");
                    }
                }
            }
        }
    }

    #[test]
    fn harmonic_spectrum_exact() {
        let h = HarmonicSpec::new(1.0, 1.0, 1.0).unwrap();
        let spectrum = exact_spectrum(&h.into(), 10, 1e-10).unwrap();
        for (n, e) in spectrum.energies.iter().enumerate() {
            assert_relative_eq!(*e, n as f64 + 0.5, max_relative = 1e-12);
        }
    }

    #[test]
    fn strong_quartic_ground_state() {
        // The anchor value for the level-solver tests: V = x^2/2 + x^4.
        let spec = PotentialSpec::quartic(1.0, 1.0, 1.0, 4.0).unwrap();
        let spectrum = exact_spectrum(&spec.into(), 0, 1e-10).unwrap();
        assert!((spectrum.energies[0] - 0.8037707).abs() < 1e-7, "E0 = {:.10}", spectrum.energies[0]);
        assert!(spectrum.convergence_estimate[0] < 1e-10);
    }

    #[test]
    fn variational_monotonicity_under_doubling() {
        let spec = PotentialSpec::quartic(1.0, 1.0, 1.0, 4.0).unwrap();
        let p = Potential::from(spec);
        let w = default_scale_frequency(&p);
        let small = spectrum_at_size(&p, 64, w).unwrap();
        let large = spectrum_at_size(&p, 128, w).unwrap();
        for n in 0..=10 {
            assert!(
                large[n] <= small[n] * (1.0 + 1e-12),
                "level {n} rose under basis doubling: {} -> {}",
                small[n],
                large[n]
            );
        }
    }

    #[test]
    fn scale_frequency_independence() {
        let spec = PotentialSpec::quartic(1.0, 1.0, 1.0, 4.0).unwrap();
        let p = Potential::from(spec);
        let tol = 1e-9;
        let a = exact_spectrum(&p, 5, tol).unwrap();
        // Same potential diagonalized at twice the basis frequency.
        let mut size = 64;
        let doubled_scale = 2.0 * default_scale_frequency(&p);
        let mut previous = spectrum_at_size(&p, size, doubled_scale).unwrap();
        let b = loop {
            size *= 2;
            let current = spectrum_at_size(&p, size, doubled_scale).unwrap();
            if (0..=5).all(|n| ((current[n] - previous[n]) / current[n]).abs() < tol) {
                break current;
            }
            previous = current;
            assert!(size <= 4096);
        };
        for n in 0..=5 {
            assert_relative_eq!(a.energies[n], b[n], max_relative = 10.0 * tol);
        }
    }

    #[test]
    fn parity_blocks_match_full_matrix() {
        let spec = PotentialSpec::sextic(1.0, 1.0, 1.0, 1.0).unwrap();
        let p = Potential::from(spec);
        let basis = BasisConfig::new(96, 1.0, Parity::Both).unwrap();
        let full = sorted_eigenvalues(hamiltonian_matrix(&p, &basis));
        let even = BasisConfig::new(96, 1.0, Parity::Even).unwrap();
        let odd = BasisConfig::new(96, 1.0, Parity::Odd).unwrap();
        let mut split = sorted_eigenvalues(hamiltonian_matrix(&p, &even));
        split.extend(sorted_eigenvalues(hamiltonian_matrix(&p, &odd)));
        split.sort_by(|a, b| a.total_cmp(b));
        // Agreement is limited by eigensolver roundoff relative to the matrix
        // norm (the x^6 band grows like k^3).
        let norm = full.last().unwrap().abs();
        for n in 0..=12 {
            assert!(
                (full[n] - split[n]).abs() <= 1e-13 * norm,
                "level {n}: {} vs {}",
                full[n],
                split[n]
            );
        }
    }

    #[test]
    fn interleaved_parity_levels() {
        // Even and odd levels alternate strictly in a symmetric single well.
        let spec = PotentialSpec::quartic(1.0, 1.0, 1.0, 4.0).unwrap();
        let spectrum = exact_spectrum(&spec.into(), 12, 1e-9).unwrap();
        for pair in spectrum.energies.windows(2) {
            assert!(pair[1] > pair[0]);
        }
    }

    #[test]
    fn basis_cap_reports_converged_prefix() {
        let spec = PotentialSpec::quartic(1.0, 1.0, 1.0, 4.0).unwrap();
        let err = exact_spectrum_with_cap(&spec.into(), 40, 1e-12, 128);
        match err {
            Err(Error::OracleConvergence { basis_cap, requested, converged }) => {
                assert_eq!(basis_cap, 128);
                assert_eq!(requested, 41);
                assert!(!converged.is_empty());
            }
            other => panic!("expected convergence error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let spec = PotentialSpec::quartic(1.0, 1.0, 1.0, 4.0).unwrap();
        assert!(exact_spectrum(&spec.into(), 0, 1e-13).is_err());
        assert!(exact_spectrum(&spec.into(), 0, 1e-3).is_err());
        assert!(BasisConfig::new(2, 1.0, Parity::Both).is_err());
        assert!(BasisConfig::new(16, 0.0, Parity::Both).is_err());
    }
}
