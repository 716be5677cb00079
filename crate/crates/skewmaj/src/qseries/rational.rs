//! Reduced fractions of Laurent polynomials, i.e. exact elements of `Q(q)`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

use super::LaurentPoly;
use crate::{Error, Result};

/// Default tolerance for rejecting near-vanishing denominators in
/// floating-point evaluation.
pub const EVAL_DENOM_TOLERANCE: f64 = 1e-12;

/// A reduced ratio of two [`LaurentPoly`] values.
///
/// Canonical form: the denominator is nonzero with minimal exponent 0 and
/// positive leading coefficient, the polynomial gcd of numerator and
/// denominator is a unit `±q^k`, and the integer contents of numerator and
/// denominator are coprime. Equality is structural.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalQ {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RationalQ {
    /// Builds `num / den` in canonical reduced form.
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduced(num, den))
    }

    fn reduced(mut num: LaurentPoly, mut den: LaurentPoly) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return RationalQ { num, den: LaurentPoly::one() };
        }
        // q-power units move into the numerator's exponent offset
        num = num.shift(-den.min_exponent());
        den = den.shift(-den.min_exponent());
        // coprime integer contents
        let g = num.content().gcd(&den.content());
        if !g.is_one() {
            num = num.exact_div(&LaurentPoly::constant(g.clone())).unwrap();
            den = den.exact_div(&LaurentPoly::constant(g)).unwrap();
        }
        if den.len() > 1 && num.len() > 1 {
            let g = poly_gcd(&num, &den);
            if g.len() > 1 {
                num = num.exact_div(&g).unwrap();
                den = den.exact_div(&g).unwrap();
                let s = den.min_exponent();
                if s != 0 {
                    num = num.shift(-s);
                    den = den.shift(-s);
                }
            }
        }
        if den.leading_coeff().is_negative() {
            num = num.neg();
            den = den.neg();
        }
        RationalQ { num, den }
    }

    pub fn zero() -> Self {
        RationalQ { num: LaurentPoly::zero(), den: LaurentPoly::one() }
    }

    /// Builds a fraction whose parts are already known to be coprime with
    /// a canonical denominator (content 1, minimal exponent 0, positive
    /// leading coefficient); skips the reduction. Callers with factored
    /// denominators use this to avoid polynomial gcds.
    pub(crate) fn from_coprime_parts(num: LaurentPoly, den: LaurentPoly) -> Self {
        debug_assert!(!den.is_zero());
        debug_assert_eq!(den.min_exponent(), 0);
        debug_assert!(!den.leading_coeff().is_negative());
        if num.is_zero() {
            return RationalQ::zero();
        }
        RationalQ { num, den }
    }

    pub fn one() -> Self {
        RationalQ { num: LaurentPoly::one(), den: LaurentPoly::one() }
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        RationalQ { num: p, den: LaurentPoly::one() }
    }

    pub fn from_i64(c: i64) -> Self {
        Self::from_poly(LaurentPoly::from_i64(c))
    }

    /// The monomial `q^e`.
    pub fn q_power(e: i64) -> Self {
        Self::from_poly(LaurentPoly::monomial(BigInt::one(), e))
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return Self::reduced(self.num.add(&other.num), self.den.clone());
        }
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        Self::reduced(num, den)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        RationalQ { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        // cross-cancel first so the final products need no further gcd
        let (a, d) = cancel(&self.num, &other.den);
        let (c, b) = cancel(&other.num, &self.den);
        Self::reduced(a.mul(&c), b.mul(&d))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduced(self.den.clone(), self.num.clone()))
    }

    /// Integer power; negative exponents invert (erroring on zero).
    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one();
        let mut e = k.unsigned_abs();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        Ok(acc)
    }

    /// Replaces `q` by `q^k`, `k >= 1`.
    pub fn substitute_power(&self, k: u32) -> Self {
        Self::reduced(self.num.substitute_power(k), self.den.substitute_power(k))
    }

    /// Whether the value lies in `Z[q]` (denominator 1, no negative powers).
    pub fn is_polynomial(&self) -> bool {
        self.den.is_one() && (self.num.is_zero() || self.num.min_exponent() >= 0)
    }

    /// Final polynomiality gate: returns the numerator when the canonical
    /// denominator is 1 and the minimal exponent is nonnegative.
    pub fn as_polynomial(&self) -> Result<LaurentPoly> {
        if !self.den.is_one() {
            return Err(Error::NotAPolynomial {
                denominator: self.den.to_text(),
                min_exponent: self.num.min_exponent(),
            });
        }
        if !self.num.is_zero() && self.num.min_exponent() < 0 {
            return Err(Error::NotAPolynomial {
                denominator: self.den.to_text(),
                min_exponent: self.num.min_exponent(),
            });
        }
        Ok(self.num.clone())
    }

    /// As [`Self::as_polynomial`] but allowing negative exponents, i.e. the
    /// value must merely lie in `Z[q, q^-1]`.
    pub fn as_laurent(&self) -> Result<LaurentPoly> {
        if !self.den.is_one() {
            return Err(Error::NotAPolynomial {
                denominator: self.den.to_text(),
                min_exponent: self.num.min_exponent(),
            });
        }
        Ok(self.num.clone())
    }

    /// Floating evaluation `num(z) / den(z)` with the default tolerance.
    pub fn eval_complex(&self, z: Complex64) -> Result<Complex64> {
        self.eval_complex_tol(z, EVAL_DENOM_TOLERANCE)
    }

    pub fn eval_complex_tol(&self, z: Complex64, tol: f64) -> Result<Complex64> {
        let d = self.den.eval_complex(z);
        if d.norm() < tol {
            return Err(Error::NearZeroDenominator { magnitude: d.norm() });
        }
        Ok(self.num.eval_complex(z) / d)
    }
}

/// Removes the common polynomial and content factors of `a` and `b`.
fn cancel(a: &LaurentPoly, b: &LaurentPoly) -> (LaurentPoly, LaurentPoly) {
    let mut a = a.clone();
    let mut b = b.clone();
    let g = a.content().gcd(&b.content());
    if !g.is_one() && !g.is_zero() {
        a = a.exact_div(&LaurentPoly::constant(g.clone())).unwrap();
        b = b.exact_div(&LaurentPoly::constant(g)).unwrap();
    }
    if a.len() > 1 && b.len() > 1 {
        let g = poly_gcd(&a, &b);
        if g.len() > 1 {
            a = a.exact_div(&g).unwrap();
            b = b.exact_div(&g).unwrap();
        }
    }
    (a, b)
}

/// Primitive positive-leading gcd of the polynomial parts (`q`-power units
/// ignored), computed by a fraction-free subresultant remainder sequence.
pub fn poly_gcd(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    if a.is_zero() {
        return primitive_positive(b);
    }
    if b.is_zero() {
        return primitive_positive(a);
    }
    let mut f = to_primitive_vec(a);
    let mut g = to_primitive_vec(b);
    if f.len() < g.len() {
        std::mem::swap(&mut f, &mut g);
    }
    let mut gg = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let delta = f.len() - g.len();
        let mut r = prem(&f, &g);
        if r.iter().all(|c| c.is_zero()) {
            return primitive_positive(&LaurentPoly::new(0, g));
        }
        trim(&mut r);
        if r.len() == 1 {
            return LaurentPoly::one();
        }
        f = g;
        let scale = &gg * h.pow(delta as u32);
        g = r
            .into_iter()
            .map(|c| {
                let (q, rem) = c.div_rem(&scale);
                debug_assert!(rem.is_zero());
                q
            })
            .collect();
        gg = f.last().unwrap().clone();
        if delta > 0 {
            // h <- g^delta / h^(delta-1), an exact integer division
            let (q, rem) = gg.pow(delta as u32).div_rem(&h.pow(delta as u32 - 1));
            debug_assert!(rem.is_zero());
            h = q;
        }
    }
}

fn to_primitive_vec(p: &LaurentPoly) -> Vec<BigInt> {
    let c = p.content();
    p.exact_div(&LaurentPoly::constant(c)).unwrap().coeffs().to_vec()
}

fn trim(v: &mut Vec<BigInt>) {
    while v.last().map_or(false, |c| c.is_zero()) {
        v.pop();
    }
    if v.is_empty() {
        v.push(BigInt::zero());
    }
}

fn primitive_positive(p: &LaurentPoly) -> LaurentPoly {
    if p.is_zero() {
        return LaurentPoly::zero();
    }
    let mut out = p.shift(-p.min_exponent());
    let c = out.content();
    if !c.is_one() {
        out = out.exact_div(&LaurentPoly::constant(c)).unwrap();
    }
    if out.leading_coeff().is_negative() {
        out = out.neg();
    }
    out
}

/// Pseudo-remainder `lc(g)^(deg f - deg g + 1) * f mod g` over `Z[q]`.
fn prem(f: &[BigInt], g: &[BigInt]) -> Vec<BigInt> {
    let df = f.len() - 1;
    let dg = g.len() - 1;
    let lc_g = &g[dg];
    let mut r = f.to_vec();
    let mut steps = 0usize;
    while r.len() >= g.len() && !r.iter().all(|c| c.is_zero()) {
        let dr = r.len() - 1;
        let lead = r[dr].clone();
        for c in r.iter_mut() {
            *c *= lc_g;
        }
        let shift = dr - dg;
        for (i, gc) in g.iter().enumerate() {
            let t = gc * &lead;
            r[i + shift] -= t;
        }
        while r.last().map_or(false, |c| c.is_zero()) && r.len() > 1 {
            r.pop();
        }
        steps += 1;
        if r.iter().all(|c| c.is_zero()) {
            break;
        }
    }
    // bring the scaling up to exactly lc(g)^(df-dg+1)
    let want = df - dg + 1;
    if steps < want {
        let extra = lc_g.pow((want - steps) as u32);
        for c in r.iter_mut() {
            *c *= &extra;
        }
    }
    r
}

impl fmt::Display for RationalQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalQ({self})")
    }
}

impl From<LaurentPoly> for RationalQ {
    fn from(p: LaurentPoly) -> Self {
        Self::from_poly(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(min_exp: i64, coeffs: &[i64]) -> LaurentPoly {
        LaurentPoly::new(min_exp, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    fn random_poly(rng: &mut ChaCha8Rng, max_len: usize) -> LaurentPoly {
        let len = rng.gen_range(0..max_len);
        LaurentPoly::new(
            rng.gen_range(-4..4),
            (0..len).map(|_| BigInt::from(rng.gen_range(-9i64..10))).collect(),
        )
    }

    #[test]
    fn factorization_reduces() {
        // (1 - q^2) / (1 - q) = 1 + q
        let r = RationalQ::new(p(0, &[1, 0, -1]), p(0, &[1, -1])).unwrap();
        assert!(r.is_polynomial());
        assert_eq!(r.as_polynomial().unwrap(), p(0, &[1, 1]));
    }

    #[test]
    fn not_a_polynomial() {
        let r = RationalQ::new(p(0, &[1]), p(0, &[1, -1])).unwrap();
        assert!(matches!(r.as_polynomial(), Err(Error::NotAPolynomial { .. })));
        // q^-1 * q = 1
        let r = RationalQ::q_power(-1).mul(&RationalQ::q_power(1));
        assert_eq!(r.as_polynomial().unwrap(), LaurentPoly::one());
        // a plain q^-1 is Laurent but not a polynomial
        let r = RationalQ::q_power(-1);
        assert!(r.as_polynomial().is_err());
        assert_eq!(r.as_laurent().unwrap(), p(-1, &[1]));
    }

    #[test]
    fn division_by_zero_signals() {
        assert!(matches!(
            RationalQ::new(p(0, &[1]), LaurentPoly::zero()),
            Err(Error::DivisionByZero)
        ));
        assert!(matches!(RationalQ::zero().inv(), Err(Error::DivisionByZero)));
    }

    #[test]
    fn reduce_times_denominator_restores() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let a = random_poly(&mut rng, 7);
            let mut b = random_poly(&mut rng, 7);
            if b.is_zero() {
                b = p(0, &[2, 3]);
            }
            let r = RationalQ::new(a.clone(), b.clone()).unwrap();
            let back = r.mul(&RationalQ::from_poly(b));
            assert_eq!(back, RationalQ::from_poly(a));
        }
    }

    #[test]
    fn field_axioms_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..60 {
            let mk = |rng: &mut ChaCha8Rng| loop {
                let den = random_poly(rng, 5);
                if !den.is_zero() {
                    return RationalQ::new(random_poly(rng, 5), den).unwrap();
                }
            };
            let a = mk(&mut rng);
            let b = mk(&mut rng);
            let c = mk(&mut rng);
            assert_eq!(a.add(&b), b.add(&a));
            assert_eq!(a.mul(&b), b.mul(&a));
            assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            assert!(a.add(&a.neg()).is_zero());
            if !a.is_zero() {
                assert!(a.mul(&a.inv().unwrap()).is_one());
            }
        }
    }

    #[test]
    fn pow_negative_is_reciprocal() {
        let r = RationalQ::new(p(0, &[1, 1]), p(0, &[1])).unwrap();
        let inv2 = r.pow(-2).unwrap();
        assert_eq!(inv2.mul(&r.pow(2).unwrap()), RationalQ::one());
    }

    #[test]
    fn substitute_power_examples() {
        let r = RationalQ::from_poly(p(0, &[1, 1]));
        assert_eq!(r.substitute_power(2), RationalQ::from_poly(p(0, &[1, 0, 1])));
        assert_eq!(RationalQ::q_power(-1).substitute_power(3), RationalQ::q_power(-3));
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..40 {
            let den = p(0, &[1, -1, 2]);
            let r = RationalQ::new(random_poly(&mut rng, 6), den).unwrap();
            assert_eq!(r.substitute_power(1), r);
            assert_eq!(
                r.substitute_power(2).substitute_power(3),
                r.substitute_power(6)
            );
        }
    }

    #[test]
    fn eval_complex_examples() {
        let r = RationalQ::from_poly(p(0, &[1, 1]));
        let v = r.eval_complex(Complex64::new(0.5, 0.0)).unwrap();
        assert!((v.re - 1.5).abs() < 1e-14);
        let r = RationalQ::new(p(0, &[1, 0, -1]), p(0, &[1, -1])).unwrap();
        let v = r.eval_complex(Complex64::new(0.3, 0.0)).unwrap();
        assert!((v.re - 1.3).abs() < 1e-14);
        // denominator vanishing at the point is rejected
        let r = RationalQ::new(p(0, &[1]), p(0, &[1, -1])).unwrap();
        assert!(matches!(
            r.eval_complex(Complex64::new(1.0, 0.0)),
            Err(Error::NearZeroDenominator { .. })
        ));
    }

    #[test]
    fn canonical_denominator_sign() {
        let r = RationalQ::new(p(0, &[1]), p(0, &[-1, -1])).unwrap();
        assert!(r.denominator().leading_coeff() > BigInt::zero());
        assert_eq!(r.numerator(), &p(0, &[-1]));
    }

    #[test]
    fn gcd_random_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..100 {
            let g = {
                let mut g = random_poly(&mut rng, 5);
                if g.is_zero() {
                    g = p(0, &[1, 1]);
                }
                g
            };
            let a = random_poly(&mut rng, 5).mul(&g);
            let b = random_poly(&mut rng, 5).mul(&g);
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let d = poly_gcd(&a, &b);
            assert!(a.exact_div(&d).is_some());
            assert!(b.exact_div(&d).is_some());
            // the gcd contains g's primitive part
            let gp = primitive_positive(&g);
            assert!(d.exact_div(&gp).is_some());
        }
    }
}
