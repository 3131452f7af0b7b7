//! Exact rational scaffolding for the series machinery: big rationals, dense
//! polynomials over Q, Wallis moments, and generalized binomial coefficients.
//!
//! Floating point enters only through [`rat_to_f64`]; everything that builds a
//! series stays in exact arithmetic.

use num::bigint::Sign;
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

pub type Rat = BigRational;

/// Shorthand for a small rational.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from(BigInt::from(n))
}

/// Convert a big rational to f64 without overflowing on huge numerators or
/// denominators: both sides are shifted into range first, so the result is
/// accurate to a few ulp no matter how many digits the rational carries.
pub fn rat_to_f64(r: &Rat) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let (num, den) = (r.numer(), r.denom());
    let nbits = num.bits() as i64;
    let dbits = den.bits() as i64;
    // Keep ~80 significant bits on each side.
    let shift_n = (nbits - 80).max(0);
    let shift_d = (dbits - 80).max(0);
    let n = (num >> shift_n).to_f64().unwrap_or(f64::NAN);
    let d = (den >> shift_d).to_f64().unwrap_or(f64::NAN);
    let scale = (shift_n - shift_d) as i32;
    (n / d) * 2f64.powi(scale)
}

/// Generalized binomial coefficient C(alpha, k) for rational alpha.
pub fn binomial(alpha: &Rat, k: usize) -> Rat {
    let mut acc = Rat::one();
    for j in 0..k {
        let factor = alpha - rat_int(j as i64);
        acc *= factor;
        acc /= rat_int((j + 1) as i64);
    }
    acc
}

/// (2j-1)!! with the convention (-1)!! = 1.
fn odd_double_factorial(j: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 1..=j {
        acc *= BigInt::from(2 * i as i64 - 1);
    }
    acc
}

/// (2j)!! = 2^j j!.
fn even_double_factorial(j: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 1..=j {
        acc *= BigInt::from(2 * i as i64);
    }
    acc
}

/// Normalized moment of x^{2j} against sqrt(A^2 - x^2):
/// integral over [-A, A] equals pi A^{2j+2} (2j-1)!!/(2j+2)!!.
pub fn moment_sqrt(j: usize) -> Rat {
    Rat::new(odd_double_factorial(j), even_double_factorial(j + 1))
}

/// Normalized moment of x^{2j} against 1/sqrt(A^2 - x^2):
/// integral over [-A, A] equals pi A^{2j} (2j-1)!!/(2j)!!.
pub fn moment_inv_sqrt(j: usize) -> Rat {
    Rat::new(odd_double_factorial(j), even_double_factorial(j))
}

/// Split sqrt of a positive rational into (rational factor, squarefree residue):
/// sqrt(r) = factor * sqrt(residue) with residue a squarefree positive integer.
pub fn sqrt_rational(r: &Rat) -> (Rat, u64) {
    assert!(r.is_positive(), "sqrt_rational needs a positive argument");
    // sqrt(n/d) = sqrt(n d) / d
    let nd = r.numer() * r.denom();
    let (square, residue) = split_square(&nd);
    (Rat::new(square, r.denom().clone()), residue)
}

/// Factor n = s^2 * residue with residue squarefree. Trial division is plenty:
/// the rationals this sees come from small moment denominators.
fn split_square(n: &BigInt) -> (BigInt, u64) {
    assert!(n.sign() == Sign::Plus);
    let mut m = n.clone();
    let mut square_root = BigInt::one();
    let mut residue: u64 = 1;
    let mut p = BigInt::from(2u32);
    while &p * &p <= m {
        let mut count = 0u32;
        while (&m % &p).is_zero() {
            m /= &p;
            count += 1;
        }
        if count > 0 {
            square_root *= p.pow(count / 2);
            if count % 2 == 1 {
                residue *= p.to_u64().expect("squarefree residue exceeds u64");
            }
        }
        p += 1u32;
    }
    if !m.is_one() {
        residue *= m.to_u64().expect("squarefree residue exceeds u64");
    }
    (square_root, residue)
}

/// Dense univariate polynomial over Q, lowest degree first.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly(pub Vec<Rat>);

impl std::fmt::Debug for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let terms: Vec<String> = self.0.iter().enumerate().map(|(i, c)| format!("{c} z^{i}")).collect();
        write!(f, "[{}]", terms.join(" + "))
    }
}

impl Poly {
    pub fn zero() -> Self {
        Poly(vec![])
    }

    pub fn constant(c: Rat) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Poly(vec![c])
        }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly(coeffs.iter().map(|&c| rat_int(c)).collect()).trimmed()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn trimmed(mut self) -> Self {
        while self.0.last().map_or(false, |c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let mut out = vec![Rat::zero(); n];
        for (i, c) in self.0.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.0.iter().enumerate() {
            out[i] += c;
        }
        Poly(out).trimmed()
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&-Rat::one()))
    }

    pub fn scale(&self, k: &Rat) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly(self.0.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rat::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out).trimmed()
    }

    pub fn pow(&self, k: usize) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiply by z^k.
    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rat::zero(); k];
        out.extend(self.0.iter().cloned());
        Poly(out)
    }

    /// d/dz.
    pub fn derivative(&self) -> Poly {
        if self.0.len() <= 1 {
            return Poly::zero();
        }
        Poly(
            self.0[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * rat_int(i as i64 + 1))
                .collect(),
        )
        .trimmed()
    }

    /// Exact division; returns None when the remainder is nonzero.
    pub fn divide_exact(&self, divisor: &Poly) -> Option<Poly> {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if self.0.len() < divisor.0.len() {
            return None;
        }
        let mut rem = self.0.clone();
        let dlead = divisor.0.last().unwrap();
        let qlen = rem.len() - divisor.0.len() + 1;
        let mut quot = vec![Rat::zero(); qlen];
        for qi in (0..qlen).rev() {
            let lead = rem[qi + divisor.0.len() - 1].clone();
            if lead.is_zero() {
                continue;
            }
            let q = &lead / dlead;
            for (di, dc) in divisor.0.iter().enumerate() {
                let val = &q * dc;
                rem[qi + di] -= val;
            }
            quot[qi] = q;
        }
        if rem.iter().all(|c| c.is_zero()) {
            Some(Poly(quot).trimmed())
        } else {
            None
        }
    }

    /// Largest k with z^k dividing the polynomial.
    pub fn zeta_valuation(&self) -> usize {
        self.0.iter().position(|c| !c.is_zero()).unwrap_or(0)
    }

    /// Drop a factor z^k.
    pub fn shift_down(&self, k: usize) -> Poly {
        assert!(self.zeta_valuation() >= k || self.is_zero());
        Poly(self.0.iter().skip(k).cloned().collect()).trimmed()
    }

    /// (content, primitive part): content is the positive rational such that
    /// the primitive part has coprime integer coefficients and positive leading
    /// coefficient.
    pub fn content_primitive(&self) -> (Rat, Poly) {
        if self.is_zero() {
            return (Rat::zero(), Poly::zero());
        }
        let mut gcd_num = BigInt::zero();
        let mut lcm_den = BigInt::one();
        for c in &self.0 {
            gcd_num = num::integer::gcd(gcd_num, c.numer().abs());
            lcm_den = num::integer::lcm(lcm_den, c.denom().clone());
        }
        let mut content = Rat::new(gcd_num, lcm_den);
        if self.0.last().unwrap().is_negative() {
            content = -content;
        }
        let prim = self.scale(&(Rat::one() / &content));
        (content, prim)
    }

    pub fn eval_rat(&self, z: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.0.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    pub fn eval_f64(&self, z: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.0.iter().rev() {
            acc = acc * z + rat_to_f64(c);
        }
        acc
    }

    pub fn coeffs_f64(&self) -> Vec<f64> {
        self.0.iter().map(rat_to_f64).collect()
    }
}
