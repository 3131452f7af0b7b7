//! Closed-form approximant shape: C * zeta^p * prod_i Q_i(zeta)^{q_i} * sum_n c_n zeta^n
//! with exact rational c_n and half-integer exponents.
//!
//! The type is closed under d/dzeta and under multiplication by rational
//! monomials times integer powers of polynomial bases, which is what the
//! energy chain rule needs: both operations return another `RadicalSeries`.

use std::str::FromStr;

use num::{BigInt, One, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::{rat_to_f64, Poly, Rat};
use crate::model::{Family, PotentialSpec};
use crate::quadrature::IntegralKind;

/// One radical factor Q(zeta)^power with an integer-primitive base.
#[derive(Debug, Clone, PartialEq)]
pub struct RadicalFactor {
    pub base: Poly,
    pub power: Rat,
}

/// Exponents of the physical parameters in the dimensional prefactor.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamExponents {
    pub mass: Rat,
    pub omega: Rat,
    pub hbar: Rat,
    pub coupling: Rat,
}

impl ParamExponents {
    pub fn zero() -> Self {
        ParamExponents {
            mass: Rat::zero(),
            omega: Rat::zero(),
            hbar: Rat::zero(),
            coupling: Rat::zero(),
        }
    }

    pub(crate) fn add(&self, other: &ParamExponents) -> ParamExponents {
        ParamExponents {
            mass: &self.mass + &other.mass,
            omega: &self.omega + &other.omega,
            hbar: &self.hbar + &other.hbar,
            coupling: &self.coupling + &other.coupling,
        }
    }
}

/// Convergence diagnostic: the interpolation ratio Delta as a bivariate
/// rational function of (zeta, s = x^2/A^2). The expansion converges
/// uniformly where sup_s |Delta| < 1.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaGate {
    /// Coefficient polynomials in zeta of the s-powers of the numerator.
    pub numerator_s: Vec<Poly>,
    /// Common denominator polynomial in zeta.
    pub denominator: Poly,
}

impl DeltaGate {
    /// max |Delta(x)| over a 200-point grid of x in [-A, A] (s in [0, 1],
    /// using evenness) at the given zeta.
    pub fn sup_abs(&self, zeta: f64) -> f64 {
        let den = self.denominator.eval_f64(zeta);
        let num: Vec<f64> = self.numerator_s.iter().map(|p| p.eval_f64(zeta)).collect();
        let mut sup: f64 = 0.0;
        for i in 0..=200 {
            let s = i as f64 / 200.0;
            let mut acc = 0.0;
            for c in num.iter().rev() {
                acc = acc * s + c;
            }
            sup = sup.max((acc / den).abs());
        }
        sup
    }
}

/// An analytic approximant of one WKB integral (or a derivative chain of
/// one): rational prefactor, pi power, parameter powers, a half-integer power
/// of zeta, radical factors, and an exact rational polynomial part.
#[derive(Debug, Clone, PartialEq)]
pub struct RadicalSeries {
    pub family: Family,
    pub kind: IntegralKind,
    pub prefactor: Rat,
    pub pi_power: i64,
    pub params: ParamExponents,
    pub zeta_power: Rat,
    pub radicals: Vec<RadicalFactor>,
    pub coeffs: Vec<Rat>,
    /// Present on freshly expanded approximants; dropped by derivatives.
    pub gate: Option<DeltaGate>,
    coeffs_f64: Vec<f64>,
}

impl RadicalSeries {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn new(
        family: Family,
        kind: IntegralKind,
        prefactor: Rat,
        pi_power: i64,
        params: ParamExponents,
        zeta_power: Rat,
        radicals: Vec<RadicalFactor>,
        coeffs: Vec<Rat>,
        gate: Option<DeltaGate>,
    ) -> Self {
        let mut series = RadicalSeries {
            family,
            kind,
            prefactor,
            pi_power,
            params,
            zeta_power,
            radicals,
            coeffs,
            gate,
            coeffs_f64: vec![],
        };
        series.normalize();
        series
    }

    /// Canonical form: trailing zero coefficients trimmed, a common zeta power
    /// moved into `zeta_power`, radicals merged by base, zero-power and unit
    /// bases dropped, factors sorted by (degree, coefficients).
    fn normalize(&mut self) {
        while self.coeffs.last().map_or(false, |c| c.is_zero()) {
            self.coeffs.pop();
        }
        let poly = Poly(self.coeffs.clone());
        if !poly.is_zero() {
            let val = poly.zeta_valuation();
            if val > 0 {
                self.coeffs.drain(..val);
                self.zeta_power += Rat::from(BigInt::from(val as i64));
            }
        }
        let mut merged: Vec<RadicalFactor> = Vec::new();
        for factor in self.radicals.drain(..) {
            if let Some(existing) = merged.iter_mut().find(|f| f.base == factor.base) {
                existing.power += factor.power;
            } else {
                merged.push(factor);
            }
        }
        merged.retain(|f| !f.power.is_zero() && f.base != Poly::one());
        merged.sort_by(|a, b| {
            a.base
                .degree()
                .cmp(&b.base.degree())
                .then_with(|| a.base.0.cmp(&b.base.0))
        });
        self.radicals = merged;
        self.coeffs_f64 = self.coeffs.iter().map(rat_to_f64).collect();
    }

    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Numeric value at the given zeta for the given physical parameters.
    pub fn evaluate(&self, spec: &PotentialSpec, zeta: f64) -> f64 {
        debug_assert_eq!(spec.family, self.family, "series family mismatch");
        let mut v = rat_to_f64(&self.prefactor)
            * std::f64::consts::PI.powi(self.pi_power as i32)
            * spec.mass.powf(rat_to_f64(&self.params.mass))
            * spec.omega.powf(rat_to_f64(&self.params.omega))
            * spec.hbar.powf(rat_to_f64(&self.params.hbar))
            * spec.coupling.powf(rat_to_f64(&self.params.coupling))
            * zeta.powf(rat_to_f64(&self.zeta_power));
        for factor in &self.radicals {
            v *= factor.base.eval_f64(zeta).powf(rat_to_f64(&factor.power));
        }
        let mut poly = 0.0;
        for c in self.coeffs_f64.iter().rev() {
            poly = poly * zeta + c;
        }
        v * poly
    }

    /// sup_x |Delta(x)| at this zeta, when the series still carries its
    /// interpolation data. Values below 1 certify uniform convergence of the
    /// underlying expansion at this zeta.
    pub fn convergence_gate(&self, zeta: f64) -> Option<f64> {
        self.gate.as_ref().map(|g| g.sup_abs(zeta))
    }

    /// Exact d/dzeta. Single closed-form result:
    /// the polynomial part absorbs one copy of every radical base.
    pub fn derivative(&self) -> RadicalSeries {
        let poly = Poly(self.coeffs.clone());
        // p P + zeta P'
        let mut bracket = poly.scale(&self.zeta_power).add(&poly.derivative().shift_up(1));
        let product_all = self
            .radicals
            .iter()
            .fold(Poly::one(), |acc, f| acc.mul(&f.base));
        bracket = bracket.mul(&product_all);
        for (i, factor) in self.radicals.iter().enumerate() {
            let mut term = factor.base.derivative().scale(&factor.power).mul(&poly);
            for (j, other) in self.radicals.iter().enumerate() {
                if j != i {
                    term = term.mul(&other.base);
                }
            }
            bracket = bracket.add(&term.shift_up(1));
        }
        let radicals = self
            .radicals
            .iter()
            .map(|f| RadicalFactor { base: f.base.clone(), power: &f.power - Rat::one() })
            .collect();
        RadicalSeries::new(
            self.family,
            self.kind,
            self.prefactor.clone(),
            self.pi_power,
            self.params.clone(),
            &self.zeta_power - Rat::one(),
            radicals,
            bracket.0,
            None,
        )
    }

    /// Multiply by rational * params * zeta^shift * prod extra_base^power.
    pub(crate) fn mul_monomial(
        &self,
        rational: &Rat,
        params: &ParamExponents,
        zeta_shift: &Rat,
        extra: &[RadicalFactor],
    ) -> RadicalSeries {
        let mut radicals = self.radicals.clone();
        radicals.extend(extra.iter().cloned());
        RadicalSeries::new(
            self.family,
            self.kind,
            &self.prefactor * rational,
            self.pi_power,
            self.params.add(params),
            &self.zeta_power + zeta_shift,
            radicals,
            self.coeffs.clone(),
            None,
        )
    }

    /// d/dE via the chain rule through the family's zeta(E) map: multiplies
    /// the zeta-derivative by dzeta/dE, which is a rational monomial times
    /// (1+zeta)^{-1} for both families.
    pub fn energy_derivative(&self) -> RadicalSeries {
        let d = self.derivative();
        let one_plus_zeta = RadicalFactor { base: Poly::from_ints(&[1, 1]), power: -Rat::one() };
        match self.family {
            Family::Quartic => {
                // dzeta/dE = -2 mu m^{-2} w^{-4} zeta^3 / (1 + zeta)
                let params = ParamExponents {
                    mass: -crate::exact::rat_int(2),
                    omega: -crate::exact::rat_int(4),
                    hbar: Rat::zero(),
                    coupling: Rat::one(),
                };
                d.mul_monomial(
                    &-crate::exact::rat_int(2),
                    &params,
                    &crate::exact::rat_int(3),
                    &[one_plus_zeta],
                )
            }
            Family::Sextic => {
                // dzeta/dE = -4 (rho/m^3 w^6)^{1/2} zeta^{5/2} / (1 + zeta)
                let params = ParamExponents {
                    mass: crate::exact::rat(-3, 2),
                    omega: -crate::exact::rat_int(3),
                    hbar: Rat::zero(),
                    coupling: crate::exact::rat(1, 2),
                };
                d.mul_monomial(
                    &-crate::exact::rat_int(4),
                    &params,
                    &crate::exact::rat(5, 2),
                    &[one_plus_zeta],
                )
            }
        }
    }

    /// Lossless JSON export. The principal radical (highest degree) fills the
    /// flat `radical_base`/`radical_power` fields; any remaining factors go to
    /// `extra_radicals`.
    pub fn to_json(&self) -> Value {
        let (principal, extra) = match self.radicals.split_last() {
            Some((last, rest)) => (Some(last), rest),
            None => (None, &[][..]),
        };
        json!({
            "family": self.family.as_str(),
            "kind": self.kind.as_str(),
            "prefactor_rational": rat_json(&self.prefactor),
            "pi_power": self.pi_power,
            "param_exponents": {
                "mass": rat_json(&self.params.mass),
                "omega": rat_json(&self.params.omega),
                "hbar": rat_json(&self.params.hbar),
                "coupling": rat_json(&self.params.coupling),
            },
            "zeta_power": rat_json(&self.zeta_power),
            "radical_base": principal.map(|f| poly_int_json(&f.base)).unwrap_or_else(|| json!([1])),
            "radical_power": principal.map(|f| rat_json(&f.power)).unwrap_or_else(|| rat_json(&Rat::zero())),
            "extra_radicals": extra.iter().map(|f| json!({
                "base": poly_int_json(&f.base),
                "power": rat_json(&f.power),
            })).collect::<Vec<_>>(),
            "coeffs": self.coeffs.iter().map(rat_json).collect::<Vec<_>>(),
            "gate": self.gate.as_ref().map(|g| json!({
                "numerator_s": g.numerator_s.iter().map(poly_rat_json).collect::<Vec<_>>(),
                "denominator": poly_rat_json(&g.denominator),
            })),
        })
    }

    pub fn from_json(value: &Value) -> Result<RadicalSeries> {
        let obj = value.as_object().ok_or_else(|| Error::SeriesJson("not an object".into()))?;
        let family = match obj.get("family").and_then(Value::as_str) {
            Some("quartic") => Family::Quartic,
            Some("sextic") => Family::Sextic,
            other => return Err(Error::SeriesJson(format!("bad family {other:?}"))),
        };
        let kind = match obj.get("kind").and_then(Value::as_str) {
            Some("J1") => IntegralKind::J1,
            Some("J2") => IntegralKind::J2,
            Some("J3") => IntegralKind::J3,
            other => return Err(Error::SeriesJson(format!("bad kind {other:?}"))),
        };
        let get = |key: &str| obj.get(key).ok_or_else(|| Error::SeriesJson(format!("missing {key}")));
        let params = get("param_exponents")?;
        let mut radicals = Vec::new();
        let principal = RadicalFactor {
            base: poly_int_from_json(get("radical_base")?)?,
            power: rat_from_json(get("radical_power")?)?,
        };
        for item in get("extra_radicals")?.as_array().into_iter().flatten() {
            radicals.push(RadicalFactor {
                base: poly_int_from_json(item.get("base").ok_or_else(|| Error::SeriesJson("missing base".into()))?)?,
                power: rat_from_json(item.get("power").ok_or_else(|| Error::SeriesJson("missing power".into()))?)?,
            });
        }
        radicals.push(principal);
        let coeffs = get("coeffs")?
            .as_array()
            .ok_or_else(|| Error::SeriesJson("coeffs not an array".into()))?
            .iter()
            .map(rat_from_json)
            .collect::<Result<Vec<_>>>()?;
        let gate = match obj.get("gate") {
            Some(Value::Null) | None => None,
            Some(g) => Some(DeltaGate {
                numerator_s: g
                    .get("numerator_s")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::SeriesJson("gate numerator missing".into()))?
                    .iter()
                    .map(poly_rat_from_json)
                    .collect::<Result<Vec<_>>>()?,
                denominator: poly_rat_from_json(
                    g.get("denominator").ok_or_else(|| Error::SeriesJson("gate denominator missing".into()))?,
                )?,
            }),
        };
        Ok(RadicalSeries::new(
            family,
            kind,
            rat_from_json(get("prefactor_rational")?)?,
            get("pi_power")?.as_i64().ok_or_else(|| Error::SeriesJson("pi_power not an int".into()))?,
            ParamExponents {
                mass: rat_from_json(params.get("mass").ok_or_else(|| Error::SeriesJson("missing mass".into()))?)?,
                omega: rat_from_json(params.get("omega").ok_or_else(|| Error::SeriesJson("missing omega".into()))?)?,
                hbar: rat_from_json(params.get("hbar").ok_or_else(|| Error::SeriesJson("missing hbar".into()))?)?,
                coupling: rat_from_json(
                    params.get("coupling").ok_or_else(|| Error::SeriesJson("missing coupling".into()))?,
                )?,
            },
            rat_from_json(get("zeta_power")?)?,
            radicals,
            coeffs,
            gate,
        ))
    }
}

fn rat_json(r: &Rat) -> Value {
    json!([r.numer().to_string(), r.denom().to_string()])
}

fn rat_from_json(v: &Value) -> Result<Rat> {
    let arr = v.as_array().filter(|a| a.len() == 2).ok_or_else(|| Error::SeriesJson("rational must be [num, den]".into()))?;
    let parse = |x: &Value| -> Result<BigInt> {
        let s = x.as_str().ok_or_else(|| Error::SeriesJson("rational entries must be strings".into()))?;
        BigInt::from_str(s).map_err(|e| Error::SeriesJson(format!("bad integer {s}: {e}")))
    };
    let den = parse(&arr[1])?;
    if den.is_zero() {
        return Err(Error::SeriesJson("zero denominator".into()));
    }
    Ok(Rat::new(parse(&arr[0])?, den))
}

fn poly_int_json(p: &Poly) -> Value {
    Value::Array(
        p.0.iter()
            .map(|c| {
                debug_assert!(c.denom().is_one());
                json!(c.numer().to_i64().expect("radical base coefficient exceeds i64"))
            })
            .collect(),
    )
}

fn poly_int_from_json(v: &Value) -> Result<Poly> {
    let arr = v.as_array().ok_or_else(|| Error::SeriesJson("polynomial must be an array".into()))?;
    let coeffs = arr
        .iter()
        .map(|c| c.as_i64().ok_or_else(|| Error::SeriesJson("polynomial coefficients must be integers".into())))
        .collect::<Result<Vec<_>>>()?;
    Ok(Poly::from_ints(&coeffs))
}

fn poly_rat_json(p: &Poly) -> Value {
    Value::Array(p.0.iter().map(rat_json).collect())
}

fn poly_rat_from_json(v: &Value) -> Result<Poly> {
    let arr = v.as_array().ok_or_else(|| Error::SeriesJson("polynomial must be an array".into()))?;
    Ok(Poly(arr.iter().map(rat_from_json).collect::<Result<Vec<_>>>()?))
}
