//! The expansion engine: interpolate the potential with a harmonic trial
//! potential sharing the turning points, expand the integrand binomially in
//! the ratio Delta, integrate every term with the closed-form even moments
//! against sqrt(A^2-x^2)^{+-1}, and collect the result into a single radical
//! form in the dimensionless variable zeta = m w^2 / (coupling A^{2 or 4}).
//!
//! Everything here is exact rational arithmetic; floats never enter.

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{binomial, moment_inv_sqrt, moment_sqrt, rat, rat_int, sqrt_rational, Poly, Rat};
use crate::model::Family;
use crate::quadrature::IntegralKind;

use super::series::{DeltaGate, ParamExponents, RadicalFactor, RadicalSeries};
use super::LambdaChoice;

/// Bivariate polynomial in (zeta, s): entry j is the zeta-polynomial
/// multiplying s^j, where s = x^2 / A^2.
type BiPoly = Vec<Poly>;

fn bi_mul(a: &BiPoly, b: &BiPoly) -> BiPoly {
    let mut out = vec![Poly::zero(); a.len() + b.len() - 1];
    for (i, pa) in a.iter().enumerate() {
        if pa.is_zero() {
            continue;
        }
        for (j, pb) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&pa.mul(pb));
        }
    }
    out
}

/// phi(s): the anharmonic shape factor with E - V = (A^2-x^2)(cs/2)(zeta + phi(s)).
fn phi(family: Family) -> Vec<Rat> {
    match family {
        Family::Quartic => vec![rat(1, 2), rat(1, 2)],
        Family::Sextic => vec![rat(1, 3), rat(1, 3), rat(1, 3)],
    }
}

/// Dimensionless integrand kernel in (zeta, s); the dimensional scale cs^d is
/// handled in the prefactor. J1 uses kernel 1 against the sqrt weight.
fn kernel(family: Family, kind: IntegralKind) -> BiPoly {
    match (kind, family) {
        (IntegralKind::J1, _) => vec![Poly::one()],
        // V'' = cs (zeta + 3 s)
        (IntegralKind::J2, Family::Quartic) => vec![Poly::from_ints(&[0, 1]), Poly::from_ints(&[3])],
        // V'' = cs (zeta + 5 s^2)
        (IntegralKind::J2, Family::Sextic) => {
            vec![Poly::from_ints(&[0, 1]), Poly::zero(), Poly::from_ints(&[5])]
        }
        // 7 V''^2 - 5 V' V''' = cs^2 (7 zeta^2 + 12 zeta s + 33 s^2)
        (IntegralKind::J3, Family::Quartic) => vec![
            Poly::from_ints(&[0, 0, 7]),
            Poly::from_ints(&[0, 12]),
            Poly::from_ints(&[33]),
        ],
        // = cs^2 (7 zeta^2 - 30 zeta s^2 + 75 s^4)
        (IntegralKind::J3, Family::Sextic) => vec![
            Poly::from_ints(&[0, 0, 7]),
            Poly::zero(),
            Poly::from_ints(&[0, -30]),
            Poly::zero(),
            Poly::from_ints(&[75]),
        ],
    }
}

fn weight(kind: IntegralKind, j: usize) -> Rat {
    match kind {
        IntegralKind::J1 => moment_sqrt(j),
        _ => moment_inv_sqrt(j),
    }
}

/// Moment functional M[.]: integrate a bivariate polynomial over s with the
/// kind's Wallis weights, leaving a polynomial in zeta.
fn bi_moment(bp: &BiPoly, kind: IntegralKind) -> Poly {
    let mut acc = Poly::zero();
    for (j, p) in bp.iter().enumerate() {
        acc = acc.add(&p.scale(&weight(kind, j)));
    }
    acc
}

/// First-order PMS ratio L(zeta) = M[kernel * phi] / M[kernel] with
/// lambda^2 = L * cs: returns (R_L, S_L) with S_L integer-primitive with
/// positive leading coefficient and R_L rational-coefficient, in lowest terms.
pub(crate) fn pms_lambda_ratio(family: Family, kind: IntegralKind) -> (Poly, Poly) {
    let k = kernel(family, kind);
    let phi_bp: BiPoly = phi(family).into_iter().map(Poly::constant).collect();
    let numerator = bi_moment(&bi_mul(&k, &phi_bp), kind);
    let denominator = bi_moment(&k, kind);
    reduce_ratio(numerator, denominator)
}

/// Reduce num/den, normalizing den to its integer primitive part.
fn reduce_ratio(num: Poly, den: Poly) -> (Poly, Poly) {
    let g = poly_gcd(&num, &den);
    let num = num.divide_exact(&g).expect("gcd divides");
    let den = den.divide_exact(&g).expect("gcd divides");
    let (c_den, den_prim) = den.content_primitive();
    let num_adj = num.scale(&(Rat::one() / c_den));
    (num_adj, den_prim)
}

fn poly_gcd(a: &Poly, b: &Poly) -> Poly {
    let mut x = a.clone();
    let mut y = b.clone();
    while !y.is_zero() {
        let r = poly_rem(&x, &y);
        x = y;
        y = r;
    }
    if x.is_zero() {
        return Poly::one();
    }
    let (_, prim) = x.content_primitive();
    prim
}

fn poly_rem(a: &Poly, b: &Poly) -> Poly {
    if a.0.len() < b.0.len() {
        return a.clone();
    }
    let mut rem = a.0.clone();
    let dlead = b.0.last().unwrap();
    for qi in (0..rem.len() - b.0.len() + 1).rev() {
        let lead = rem[qi + b.0.len() - 1].clone();
        if lead.is_zero() {
            continue;
        }
        let q = &lead / dlead;
        for (di, dc) in b.0.iter().enumerate() {
            let v = &q * dc;
            rem[qi + di] -= v;
        }
    }
    Poly(rem).add(&Poly::zero())
}

/// lambda ratio for the requested choice.
fn lambda_ratio(family: Family, kind: IntegralKind, choice: &LambdaChoice) -> Result<(Poly, Poly)> {
    match choice {
        LambdaChoice::Pms => Ok(pms_lambda_ratio(family, kind)),
        LambdaChoice::PmsFromJ1 => Ok(pms_lambda_ratio(family, IntegralKind::J1)),
        LambdaChoice::FixedRatio(r) => {
            if !(*r >= 0.0 && r.is_finite()) {
                return Err(Error::Domain(format!("lambda ratio must be nonnegative, got {r}")));
            }
            let ratio = Rat::from_float(*r).expect("finite float");
            Ok((Poly::constant(ratio), Poly::one()))
        }
    }
}

/// Parameter exponents of A^2 expressed through zeta: returns the exponents
/// and the zeta power.
fn a_squared_exponents(family: Family) -> (ParamExponents, Rat) {
    match family {
        // A^2 = m w^2 / (mu zeta)
        Family::Quartic => (
            ParamExponents {
                mass: Rat::one(),
                omega: rat_int(2),
                hbar: Rat::zero(),
                coupling: -Rat::one(),
            },
            -Rat::one(),
        ),
        // A^2 = (m w^2 / rho)^{1/2} zeta^{-1/2}
        Family::Sextic => (
            ParamExponents {
                mass: rat(1, 2),
                omega: Rat::one(),
                hbar: Rat::zero(),
                coupling: rat(-1, 2),
            },
            rat(-1, 2),
        ),
    }
}

/// cs = coupling * A^{2 or 4} = m w^2 / zeta for both families.
fn cs_exponents(power: &Rat) -> (ParamExponents, Rat) {
    (
        ParamExponents {
            mass: power.clone(),
            omega: power * rat_int(2),
            hbar: Rat::zero(),
            coupling: Rat::zero(),
        },
        -power.clone(),
    )
}

/// Expand the integral of `kind` to binomial order `order` in delta (delta set
/// to 1), with the interpolation frequency fixed by `choice`.
pub(crate) fn expand(
    family: Family,
    kind: IntegralKind,
    order: usize,
    choice: &LambdaChoice,
) -> Result<RadicalSeries> {
    if order < 1 {
        return Err(Error::Domain(format!("delta order must be >= 1, got {order}")));
    }
    let (r_l, s_l) = lambda_ratio(family, kind, choice)?;
    let n_raw = s_l.shift_up(1).add(&r_l);
    let (c_u, n_u) = n_raw.content_primitive();
    if !c_u.is_positive() {
        return Err(Error::PmsFailure("interpolation frequency is not positive".into()));
    }

    // Delta = D / N_U with D = (phi(s) S_L(zeta) - R_L(zeta)) / c_U.
    let inv_cu = Rat::one() / &c_u;
    let mut d: BiPoly = phi(family)
        .into_iter()
        .map(|c| s_l.scale(&(&c * &inv_cu)))
        .collect();
    d[0] = d[0].sub(&r_l.scale(&inv_cu));

    // T = sum_k C(a, k) M[kernel D^k] N_U^{order-k}
    let a = match kind {
        IntegralKind::J1 => rat(1, 2),
        _ => rat(-1, 2),
    };
    let kern = kernel(family, kind);
    let mut t = Poly::zero();
    let mut dk: BiPoly = vec![Poly::one()];
    for k in 0..=order {
        if k > 0 {
            dk = bi_mul(&dk, &d);
        }
        let mk = bi_moment(&bi_mul(&kern, &dk), kind);
        t = t.add(&mk.scale(&binomial(&a, k)).mul(&n_u.pow(order - k)));
    }

    // Assemble prefactor, folding every rational factor into the coefficients.
    let mut fold = Rat::one();
    let mut radicals: Vec<RadicalFactor> = Vec::new();
    let params;
    let zeta_power;
    match kind {
        IntegralKind::J1 => {
            // J = pi A^2 sqrt(cs) sqrt(c_U N_U / (2 s_l0)) N_U^{-order} T
            let (a2_params, a2_zeta) = a_squared_exponents(family);
            let (cs_params, cs_zeta) = cs_exponents(&rat(1, 2));
            params = a2_params.add(&cs_params);
            zeta_power = a2_zeta + cs_zeta;
            let s_l0 = s_l.0[0].clone();
            debug_assert_eq!(s_l.degree(), 0);
            let (factor, residue) = sqrt_rational(&(&c_u / (rat_int(2) * s_l0)));
            fold *= factor * rat_int(residue as i64);
            if residue != 1 {
                radicals.push(RadicalFactor {
                    base: Poly::constant(rat_int(residue as i64)),
                    power: rat(-1, 2),
                });
            }
            radicals.push(RadicalFactor {
                base: n_u.clone(),
                power: rat(1, 2) - rat_int(order as i64),
            });
        }
        IntegralKind::J2 | IntegralKind::J3 => {
            // J = pi cs^{d-1/2} sqrt(2 S_L / c_U) N_U^{-1/2-order} T
            let d_pow = if kind == IntegralKind::J2 { rat(1, 2) } else { rat(3, 2) };
            let (cs_params, cs_zeta) = cs_exponents(&d_pow);
            params = cs_params;
            zeta_power = cs_zeta;
            let (factor, residue) = sqrt_rational(&(rat_int(2) / &c_u));
            fold *= factor * rat_int(residue as i64);
            if residue != 1 {
                radicals.push(RadicalFactor {
                    base: Poly::constant(rat_int(residue as i64)),
                    power: rat(-1, 2),
                });
            }
            let mut s_power = rat(1, 2);
            if s_l.degree() > 0 {
                // Factor every exact copy of S_L out of T; the first-order PMS
                // structure guarantees at least one.
                while !t.is_zero() {
                    match t.divide_exact(&s_l) {
                        Some(quotient) => {
                            t = quotient;
                            s_power += Rat::one();
                        }
                        None => break,
                    }
                }
                radicals.push(RadicalFactor { base: s_l.clone(), power: s_power });
            }
            radicals.push(RadicalFactor {
                base: n_u.clone(),
                power: rat(-1, 2) - rat_int(order as i64),
            });
        }
    }
    let coeffs = t.scale(&fold);
    let gate = DeltaGate { numerator_s: d, denominator: n_u };
    Ok(RadicalSeries::new(
        family,
        kind,
        Rat::one(),
        1,
        params,
        zeta_power,
        radicals,
        coeffs.0,
        Some(gate),
    ))
}
