// temporary: dissect Lambda at the strong-quartic ground state
use wkbdelta::delta::{expand_family, InterpolationConfig};
use wkbdelta::model::{anharmonicity_zeta, Family, Potential, PotentialSpec};
use wkbdelta::quadrature::{integral_exact, integral_exact_derivatives, IntegralKind};

fn main() {
    let spec = PotentialSpec::quartic(1.0, 1.0, 1.0, 4.0).unwrap();
    let p = Potential::from(spec);
    let e0 = 0.8037707;
    let target = std::f64::consts::PI * 0.5 / 2f64.sqrt();
    let zeta = anharmonicity_zeta(&spec, e0).unwrap();
    println!("zeta(E0) = {zeta}");
    let config = InterpolationConfig::default();
    let j1 = expand_family(IntegralKind::J1, Family::Quartic, &config).unwrap();
    let j2 = expand_family(IntegralKind::J2, Family::Quartic, &config).unwrap();
    let j3 = expand_family(IntegralKind::J3, Family::Quartic, &config).unwrap();
    let j1v = j1.evaluate(&spec, zeta);
    let dj2 = j2.energy_derivative().evaluate(&spec, zeta);
    let d3j3 = j3.energy_derivative().energy_derivative().energy_derivative().evaluate(&spec, zeta);
    println!("series:  J1 = {j1v:.10}  dJ2/dE = {dj2:.10}  d3J3/dE3 = {d3j3:.10}");
    let j1q = integral_exact(IntegralKind::J1, &p, e0, 1e-13).unwrap().value;
    let dj2q = integral_exact_derivatives(IntegralKind::J2, &p, e0, 1, 1e-10).unwrap().value;
    let d3j3q = integral_exact_derivatives(IntegralKind::J3, &p, e0, 3, 1e-10).unwrap().value;
    println!("quad:    J1 = {j1q:.10}  dJ2/dE = {dj2q:.10}  d3J3/dE3 = {d3j3q:.10}");
    let lam_series = j1v - dj2 / 48.0 + d3j3 / 11520.0;
    let lam_quad = j1q - dj2q / 48.0 + d3j3q / 11520.0;
    println!("Lambda(E0): series {lam_series:.8} quad {lam_quad:.8} target {target:.8}");
    println!("h0-only:    series {j1v:.8}");
}
