//! Dense Laurent polynomials in one variable `q` over the integers.

use num_bigint::{BigInt, BigUint, Sign};
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;


/// A Laurent polynomial `sum_e c_e q^e` with integer exponents of either
/// sign and arbitrary-precision integer coefficients.
///
/// Canonical form: for a nonzero value the first and last stored
/// coefficients are nonzero; the zero value has an empty coefficient vector
/// and `min_exponent == 0`. Equality is plain structural comparison.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    min_exp: i64,
    coeffs: Vec<BigInt>,
}

impl LaurentPoly {
    /// Builds a polynomial from the exponent of its lowest-order term and
    /// the coefficient sequence from that exponent upward, trimming to
    /// canonical form.
    pub fn new(min_exp: i64, coeffs: Vec<BigInt>) -> Self {
        let mut p = LaurentPoly { min_exp, coeffs };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        let lead_zeros = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros == self.coeffs.len() {
            self.coeffs.clear();
            self.min_exp = 0;
            return;
        }
        if lead_zeros > 0 {
            self.coeffs.drain(..lead_zeros);
            self.min_exp += lead_zeros as i64;
        }
        while self.coeffs.last().map_or(false, |c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn zero() -> Self {
        LaurentPoly { min_exp: 0, coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        LaurentPoly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        if c.is_zero() {
            LaurentPoly::zero()
        } else {
            LaurentPoly { min_exp: 0, coeffs: vec![c] }
        }
    }

    pub fn from_i64(c: i64) -> Self {
        LaurentPoly::constant(BigInt::from(c))
    }

    /// The monomial `c * q^e`.
    pub fn monomial(c: BigInt, e: i64) -> Self {
        if c.is_zero() {
            LaurentPoly::zero()
        } else {
            LaurentPoly { min_exp: e, coeffs: vec![c] }
        }
    }

    /// The variable `q`.
    pub fn q() -> Self {
        LaurentPoly::monomial(BigInt::one(), 1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.min_exp == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `true` for `±q^k`.
    pub fn is_unit_monomial(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].magnitude().is_one()
    }

    pub fn min_exponent(&self) -> i64 {
        self.min_exp
    }

    /// Largest exponent with nonzero coefficient; 0 for the zero value.
    pub fn max_exponent(&self) -> i64 {
        if self.is_zero() {
            0
        } else {
            self.min_exp + self.coeffs.len() as i64 - 1
        }
    }

    /// Number of stored coefficients.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `q^e`.
    pub fn coeff(&self, e: i64) -> BigInt {
        if self.is_zero() || e < self.min_exp || e > self.max_exponent() {
            BigInt::zero()
        } else {
            self.coeffs[(e - self.min_exp) as usize].clone()
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of the highest power (zero for the zero value).
    pub fn leading_coeff(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    /// Coefficient of the lowest power (zero for the zero value).
    pub fn trailing_coeff(&self) -> BigInt {
        self.coeffs.first().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            min_exp: self.min_exp,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let lo = self.min_exp.min(other.min_exp);
        let hi = self.max_exponent().max(other.max_exponent());
        let mut coeffs = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[(self.min_exp - lo) as usize + i] = c.clone();
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            coeffs[(other.min_exp - lo) as usize + i] += c;
        }
        LaurentPoly::new(lo, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Multiplies by `q^e`.
    pub fn shift(&self, e: i64) -> Self {
        if self.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly { min_exp: self.min_exp + e, coeffs: self.coeffs.clone() }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() || self.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            min_exp: self.min_exp,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return LaurentPoly::zero();
        }
        let (a, b) = (&self.coeffs, &other.coeffs);
        let coeffs = if a.len().min(b.len()) >= 24 && a.len() + b.len() >= 128 {
            mul_kronecker(a, b)
        } else {
            mul_schoolbook(a, b)
        };
        LaurentPoly::new(self.min_exp + other.min_exp, coeffs)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = LaurentPoly::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Replaces `q` by `q^k`, `k >= 1`.
    pub fn substitute_power(&self, k: u32) -> Self {
        assert!(k >= 1, "substitute_power requires k >= 1");
        if self.is_zero() || k == 1 {
            return self.clone();
        }
        let mut coeffs = vec![BigInt::zero(); (self.coeffs.len() - 1) * k as usize + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k as usize] = c.clone();
        }
        LaurentPoly { min_exp: self.min_exp * k as i64, coeffs }
    }

    /// Replaces `q` by `q^-1`.
    pub fn reverse(&self) -> Self {
        if self.is_zero() {
            return LaurentPoly::zero();
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        LaurentPoly { min_exp: -self.max_exponent(), coeffs }
    }

    /// Multiplies by `1 - q^k` (`k >= 1`) in a single pass.
    pub fn mul_one_minus_qk(&self, k: u32) -> Self {
        if self.is_zero() {
            return LaurentPoly::zero();
        }
        let k = k as usize;
        let n = self.coeffs.len();
        let mut coeffs = vec![BigInt::zero(); n + k];
        coeffs[..n].clone_from_slice(&self.coeffs);
        for i in 0..n {
            let c = self.coeffs[i].clone();
            coeffs[i + k] -= c;
        }
        LaurentPoly::new(self.min_exp, coeffs)
    }

    /// Exactly divides by `1 - q^k` (`k >= 1`). Returns `None` when the
    /// division is not exact.
    pub fn div_one_minus_qk(&self, k: u32) -> Option<Self> {
        if self.is_zero() {
            return Some(LaurentPoly::zero());
        }
        let k = k as usize;
        let n = self.coeffs.len();
        if n < k + 1 {
            return None;
        }
        // p = s - q^k s  =>  s_j = p_j + s_{j-k}
        let m = n - k;
        let mut s = Vec::with_capacity(m);
        for j in 0..m {
            let mut c = self.coeffs[j].clone();
            if j >= k {
                c += &s[j - k];
            }
            s.push(c);
        }
        // remaining coefficients must telescope to zero: p_j = -s_{j-k}
        for j in m..n {
            let c = &self.coeffs[j];
            if j >= k {
                if *c != -&s[j - k] {
                    return None;
                }
            } else if !c.is_zero() {
                return None;
            }
        }
        Some(LaurentPoly::new(self.min_exp, s))
    }

    /// Exact division; returns `None` if `divisor` does not divide `self`
    /// (or is zero).
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(LaurentPoly::zero());
        }
        if divisor.coeffs.len() == 1 {
            let d = &divisor.coeffs[0];
            let mut out = Vec::with_capacity(self.coeffs.len());
            for c in &self.coeffs {
                let (q, r) = c.div_rem(d);
                if !r.is_zero() {
                    return None;
                }
                out.push(q);
            }
            return Some(LaurentPoly::new(self.min_exp - divisor.min_exp, out));
        }
        let n = self.coeffs.len();
        let m = divisor.coeffs.len();
        if n < m {
            return None;
        }
        // synthetic division from the low end; every step must divide exactly
        let d0 = &divisor.coeffs[0];
        let mut rem = self.coeffs.clone();
        let qlen = n - m + 1;
        let mut quot = Vec::with_capacity(qlen);
        for j in 0..qlen {
            let (qc, r) = rem[j].div_rem(d0);
            if !r.is_zero() {
                return None;
            }
            if !qc.is_zero() {
                for (i, dc) in divisor.coeffs.iter().enumerate() {
                    if !dc.is_zero() {
                        let t = dc * &qc;
                        rem[j + i] -= t;
                    }
                }
            }
            quot.push(qc);
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(LaurentPoly::new(self.min_exp - divisor.min_exp, quot))
    }

    /// Positive gcd of all coefficients; zero for the zero value.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Value at `q = 1`, i.e. the coefficient sum.
    pub fn eval_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// Value at `q = -1`.
    pub fn eval_neg_one(&self) -> BigInt {
        let mut acc = BigInt::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if (self.min_exp + i as i64).rem_euclid(2) == 0 {
                acc += c;
            } else {
                acc -= c;
            }
        }
        acc
    }

    /// Floating evaluation by Horner accumulation. For negative minimal
    /// exponents the value is `z^{min_exp} * (polynomial part)(z)`.
    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + bigint_to_c64(c);
        }
        acc * z.powi(self.min_exp as i32)
    }

    /// All coefficients nonnegative?
    pub fn is_coeff_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    /// Renders with `^` exponents, e.g. `q + 2q^2 - q^4`.
    pub fn to_text(&self) -> String {
        self.render(false)
    }

    /// Renders with braced exponents for LaTeX, e.g. `q + 2q^{2}`.
    pub fn to_latex(&self) -> String {
        self.render(true)
    }

    fn render(&self, latex: bool) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = self.min_exp + i as i64;
            let mag = c.magnitude();
            if first {
                if c.is_negative() {
                    out.push('-');
                }
                first = false;
            } else if c.is_negative() {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let show_coeff = e == 0 || !mag.is_one();
            if show_coeff {
                out.push_str(&mag.to_string());
            }
            if e != 0 {
                out.push('q');
                if e != 1 {
                    if latex {
                        out.push_str(&format!("^{{{e}}}"));
                    } else {
                        out.push_str(&format!("^{e}"));
                    }
                }
            }
        }
        out
    }
}

fn mul_schoolbook(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                out[i + j] += ai * bj;
            }
        }
    }
    out
}

/// Kronecker substitution: packs signed coefficient vectors into big
/// integers (split by sign), multiplies, and unpacks. The slot width is a
/// multiple of 32 bits sized to hold any convolution coefficient.
fn mul_kronecker(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let max_bits = |v: &[BigInt]| v.iter().map(|c| c.magnitude().bits()).max().unwrap_or(0);
    let slot_bits = max_bits(a)
        + max_bits(b)
        + 64 - (a.len().min(b.len()) as u64).leading_zeros() as u64
        + 2;
    let slot_words = slot_bits.div_ceil(32) as usize;

    let pack = |v: &[BigInt], positive: bool| -> BigUint {
        let mut words = vec![0u32; v.len() * slot_words];
        for (i, c) in v.iter().enumerate() {
            let take = match (positive, c.sign()) {
                (true, Sign::Plus) | (false, Sign::Minus) => true,
                _ => false,
            };
            if take {
                let digits = c.magnitude().to_u32_digits();
                words[i * slot_words..i * slot_words + digits.len()].copy_from_slice(&digits);
            }
        }
        BigUint::from_slice(&words)
    };

    let ap = pack(a, true);
    let an = pack(a, false);
    let bp = pack(b, true);
    let bn = pack(b, false);

    let pos = &ap * &bp + &an * &bn;
    let neg = &ap * &bn + &an * &bp;

    let out_len = a.len() + b.len() - 1;
    let unpack = |x: BigUint| -> Vec<BigUint> {
        let mut words = x.to_u32_digits();
        words.resize(out_len * slot_words, 0);
        words
            .chunks(slot_words)
            .map(BigUint::from_slice)
            .collect()
    };
    let pos = unpack(pos);
    let neg = unpack(neg);
    pos.into_iter()
        .zip(neg)
        .map(|(p, n)| BigInt::from(p) - BigInt::from(n))
        .collect()
}

pub(crate) fn bigint_to_c64(c: &BigInt) -> Complex64 {
    Complex64::new(c.to_f64().unwrap_or(f64::INFINITY), 0.0)
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({})", self.to_text())
    }
}

// JSON form: {"min_exponent": int, "coefficients": ["…", …]} with decimal
// strings, since coefficients routinely exceed 64-bit range.
impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            min_exponent: i64,
            coefficients: Vec<String>,
        }
        Repr {
            min_exponent: self.min_exp,
            coefficients: self.coeffs.iter().map(|c| c.to_string()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            min_exponent: i64,
            coefficients: Vec<String>,
        }
        let r = Repr::deserialize(d)?;
        let coeffs = r
            .coefficients
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(D::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(LaurentPoly::new(r.min_exponent, coeffs))
    }
}

/// Parses a handful of convenient forms used in tests: a plain integer, or
/// `c*q^e` terms joined by `+`/`-`. Not a general expression parser.
impl LaurentPoly {
    pub fn eval_at_bigint(&self, x: &BigInt) -> BigInt {
        // Horner on the polynomial part; min_exp must be >= 0.
        assert!(self.min_exp >= 0 || self.is_zero(), "negative exponents in integer evaluation");
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        for _ in 0..self.min_exp {
            acc *= x;
        }
        acc
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

    fn random_poly(rng: &mut ChaCha8Rng) -> LaurentPoly {
        let len = rng.gen_range(0..8);
        let min_exp = rng.gen_range(-5..5);
        LaurentPoly::new(
            min_exp,
            (0..len).map(|_| BigInt::from(rng.gen_range(-9i64..10))).collect(),
        )
    }

    #[test]
    fn canonical_form() {
        assert!(p(3, &[0, 0]).is_zero());
        assert_eq!(p(3, &[0, 0]).min_exponent(), 0);
        let x = p(-1, &[0, 1, 2, 0]);
        assert_eq!(x.min_exponent(), 0);
        assert_eq!(x.max_exponent(), 1);
        // normalizing twice is the same as normalizing once
        let y = LaurentPoly::new(x.min_exponent(), x.coeffs().to_vec());
        assert_eq!(x, y);
    }

    #[test]
    fn add_inverse_cancels() {
        let a = p(0, &[1, 1]);
        assert!(a.add(&a.neg()).is_zero());
    }

    #[test]
    fn mul_expands() {
        // (1+q)(1-q) = 1-q^2
        let a = p(0, &[1, 1]);
        let b = p(0, &[1, -1]);
        assert_eq!(a.mul(&b), p(0, &[1, 0, -1]));
    }

    #[test]
    fn ring_axioms_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..200 {
            let a = random_poly(&mut rng);
            let b = random_poly(&mut rng);
            let c = random_poly(&mut rng);
            assert_eq!(a.add(&b), b.add(&a));
            assert_eq!(a.mul(&b), b.mul(&a));
            assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        }
    }

    #[test]
    fn kronecker_matches_schoolbook() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let a: Vec<BigInt> = (0..40)
                .map(|_| BigInt::from(rng.gen_range(-1_000_000_007i64..1_000_000_007)))
                .collect();
            let b: Vec<BigInt> = (0..90)
                .map(|_| BigInt::from(rng.gen_range(-1_000_000_007i64..1_000_000_007)))
                .collect();
            assert_eq!(mul_kronecker(&a, &b), mul_schoolbook(&a, &b));
        }
    }

    #[test]
    fn substitute_power_composes() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let a = random_poly(&mut rng);
            assert_eq!(a.substitute_power(1), a);
            assert_eq!(
                a.substitute_power(2).substitute_power(3),
                a.substitute_power(6)
            );
        }
    }

    #[test]
    fn one_minus_qk_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let a = random_poly(&mut rng);
            for k in 1..4u32 {
                let m = a.mul_one_minus_qk(k);
                assert_eq!(m.div_one_minus_qk(k).unwrap(), a);
                let factor = p(0, &[1]).sub(&LaurentPoly::monomial(BigInt::one(), k as i64));
                assert_eq!(m, a.mul(&factor));
            }
        }
    }

    #[test]
    fn exact_div_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..100 {
            let a = random_poly(&mut rng);
            let mut b = random_poly(&mut rng);
            if b.is_zero() {
                b = LaurentPoly::one();
            }
            let prod = a.mul(&b);
            assert_eq!(prod.exact_div(&b).unwrap(), a);
        }
        // non-exact division is rejected
        assert!(p(0, &[1, 0, 1]).exact_div(&p(0, &[1, 1])).is_none());
    }

    #[test]
    fn eval_complex_horner() {
        let a = p(0, &[1, 1]); // 1 + q
        let v = a.eval_complex(Complex64::new(0.5, 0.0));
        assert!((v.re - 1.5).abs() < 1e-15 && v.im.abs() < 1e-15);
        let qinv = p(-1, &[1]);
        let v = qinv.eval_complex(Complex64::new(2.0, 0.0));
        assert!((v.re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn display_forms() {
        assert_eq!(p(1, &[1, 1]).to_text(), "q + q^2");
        assert_eq!(p(0, &[1, 2, -1]).to_text(), "1 + 2q - q^2");
        assert_eq!(p(-2, &[3]).to_text(), "3q^-2");
        assert_eq!(p(-2, &[3]).to_latex(), "3q^{-2}");
        assert_eq!(LaurentPoly::zero().to_text(), "0");
    }

    #[test]
    fn json_roundtrip_decimal_strings() {
        let big = BigInt::from(2).pow(100);
        let a = LaurentPoly::new(-1, vec![BigInt::one(), big.clone()]);
        let js = serde_json::to_string(&a).unwrap();
        assert!(js.contains("\"min_exponent\":-1"));
        assert!(js.contains(&format!("\"{big}\"")));
        let b: LaurentPoly = serde_json::from_str(&js).unwrap();
        assert_eq!(a, b);
    }
}
