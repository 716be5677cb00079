//! Values kept as products `± q^a * prod_k (1 - q^k)^{e_k}`.
//!
//! Every summand of the hypergeometric sums, every q-factorial and every
//! Pochhammer symbol at a q-power specialization is such a product. Keeping
//! them factored makes summand assembly O(number of factors) instead of
//! O(degree), lets whole blocks of huge q-factorial prefactors cancel
//! without ever being expanded, and resolves the `(1 - q^0) = 0` factors
//! that terminating parameters produce: a summand is zero when the net
//! multiplicity of vanished factors is positive, finite when it is zero,
//! and an inadmissible pole when it is negative.

use std::collections::BTreeMap;
use std::fmt;

use crate::qseries::{LaurentPoly, RationalQ};
use crate::{Error, Result};

/// A factored value `sign * q^q_pow * prod_k (1 - q^k)^{factors[k]}` times
/// `(1 - q^0)^{zero_exp}`, or exact zero.
#[derive(Clone, PartialEq, Eq)]
pub struct QProd {
    is_zero: bool,
    negative: bool,
    q_pow: i64,
    /// Vanished factors whose base does not move with the terminating
    /// parameter. Numerator occurrences make the value zero; denominator
    /// occurrences are poles, and the two never cancel each other.
    flat_num: i64,
    flat_den: i64,
    /// Vanished factors whose base contains the terminating parameter to
    /// the power +1 (they vanish like `+delta` under its perturbation).
    zero_plus: i64,
    /// As above with power -1 (vanishing like `-delta`).
    zero_minus: i64,
    factors: BTreeMap<u32, i64>,
}

/// How a factor's base moves under perturbation of the terminating
/// parameter; determines how vanished `(1 - q^0)` factors cancel.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Rate {
    /// Base independent of the terminating parameter.
    Flat,
    /// Base contains the terminating parameter to the first power.
    Plus,
    /// Base contains its reciprocal.
    Minus,
}

impl QProd {
    pub fn one() -> Self {
        QProd {
            is_zero: false,
            negative: false,
            q_pow: 0,
            flat_num: 0,
            flat_den: 0,
            zero_plus: 0,
            zero_minus: 0,
            factors: BTreeMap::new(),
        }
    }

    /// The exact zero value (used for conventions like `1/[m]_q! = 0` for
    /// negative `m`, and out-of-range binomials).
    pub fn zero() -> Self {
        QProd { is_zero: true, ..QProd::one() }
    }

    pub fn is_zero_value(&self) -> bool {
        self.is_zero
    }

    /// Multiplies by `(-1)^e`.
    pub fn mul_sign_pow(&mut self, e: i64) {
        if e.rem_euclid(2) == 1 {
            self.negative = !self.negative;
        }
    }

    /// Multiplies by `q^e`.
    pub fn mul_q_pow(&mut self, e: i64) {
        self.q_pow += e;
    }

    /// Multiplies by `(1 - q^e)^exp` for any integer `e`, normalizing
    /// negative exponents via `1 - q^-t = -q^-t (1 - q^t)`. A vanished
    /// factor (`e = 0`) lands in the channel named by `rate`.
    pub fn mul_one_minus_q_rated(&mut self, e: i64, exp: i64, rate: Rate) {
        if exp == 0 || self.is_zero {
            return;
        }
        if e == 0 {
            match rate {
                Rate::Flat if exp > 0 => self.flat_num += exp,
                Rate::Flat => self.flat_den -= exp,
                Rate::Plus => self.zero_plus += exp,
                Rate::Minus => self.zero_minus += exp,
            }
        } else if e > 0 {
            add_factor(&mut self.factors, e as u32, exp);
        } else {
            self.mul_sign_pow(exp);
            self.q_pow += e * exp;
            add_factor(&mut self.factors, (-e) as u32, exp);
        }
    }

    /// [`Self::mul_one_minus_q_rated`] with a flat (non-perturbable) rate.
    pub fn mul_one_minus_q(&mut self, e: i64, exp: i64) {
        self.mul_one_minus_q_rated(e, exp, Rate::Flat);
    }

    pub fn mul_assign(&mut self, other: &QProd) {
        if other.is_zero {
            *self = QProd::zero();
            return;
        }
        if self.is_zero {
            return;
        }
        if other.negative {
            self.negative = !self.negative;
        }
        self.q_pow += other.q_pow;
        self.flat_num += other.flat_num;
        self.flat_den += other.flat_den;
        self.zero_plus += other.zero_plus;
        self.zero_minus += other.zero_minus;
        for (&k, &e) in &other.factors {
            add_factor(&mut self.factors, k, e);
        }
    }

    /// Divides by a nonzero factored value.
    pub fn div_assign(&mut self, other: &QProd) {
        assert!(!other.is_zero, "division by the zero value");
        if self.is_zero {
            return;
        }
        if other.negative {
            self.negative = !self.negative;
        }
        self.q_pow -= other.q_pow;
        self.flat_num += other.flat_den;
        self.flat_den += other.flat_num;
        self.zero_plus -= other.zero_plus;
        self.zero_minus -= other.zero_minus;
        for (&k, &e) in &other.factors {
            add_factor(&mut self.factors, k, -e);
        }
    }

    /// The q-integer `[alpha]_{q^step} = (1 - q^{alpha*step}) / (1 - q^step)`
    /// for any integer `alpha` (negative values follow the identity
    /// `[-a] = -q^{-a} [a]`); `[0] = 0`.
    pub fn mul_q_int(&mut self, alpha: i64, step: i64) {
        self.mul_one_minus_q(alpha * step, 1);
        self.mul_one_minus_q(step, -1);
    }

    /// `[m]_{q^step}!^e` for `m >= 0`.
    pub fn mul_q_factorial_pow(&mut self, m: i64, step: i64, e: i64) {
        debug_assert!(m >= 0, "factorial of negative argument");
        for j in 1..=m {
            self.mul_one_minus_q(j * step, e);
        }
        self.mul_one_minus_q(step, -m * e);
    }

    /// `[m]_{q^step}!` for `m >= 0`.
    pub fn mul_q_factorial(&mut self, m: i64, step: i64) {
        self.mul_q_factorial_pow(m, step, 1);
    }

    /// `1 / [m]_{q^step}!`, with the convention that the whole value is
    /// zero when `m < 0`.
    pub fn mul_recip_q_factorial(&mut self, m: i64, step: i64) {
        if m < 0 {
            *self = QProd::zero();
            return;
        }
        self.mul_q_factorial_pow(m, step, -1);
    }

    /// Gaussian binomial `[n over k]_{q^step}`; zero outside `0 <= k <= n`.
    pub fn mul_gaussian_binomial(&mut self, n: i64, k: i64, step: i64) {
        if k < 0 || k > n {
            *self = QProd::zero();
            return;
        }
        self.mul_q_factorial_pow(n, step, 1);
        self.mul_q_factorial_pow(k, step, -1);
        self.mul_q_factorial_pow(n - k, step, -1);
    }

    /// Double q-factorial `[a]_q!! = [a][a-2]...[2]` for even `a >= 0`,
    /// raised to the power `e`.
    pub fn mul_q_double_factorial_pow(&mut self, a: i64, e: i64) {
        debug_assert!(a >= 0 && a % 2 == 0);
        for j in 1..=(a / 2) {
            self.mul_one_minus_q(2 * j, e);
            self.mul_one_minus_q(1, -e);
        }
    }

    /// Shifted factorial `(q^a; q^step)_len^e` with integer `len` of either
    /// sign: nonnegative lengths multiply `len` factors, negative lengths
    /// use `(x; q)_{-t} = 1 / (x q^{-t}; q)_t`. The rate classifies zeros
    /// of the base family.
    pub fn mul_pochhammer_rated(&mut self, a: i64, step: i64, len: i64, e: i64, rate: Rate) {
        if len >= 0 {
            for j in 0..len {
                self.mul_one_minus_q_rated(a + j * step, e, rate);
            }
        } else {
            for j in 1..=(-len) {
                self.mul_one_minus_q_rated(a - j * step, -e, rate);
            }
        }
    }

    /// `(q^a; q^step)_len^e` with signed length and flat rate.
    pub fn mul_pochhammer_pow(&mut self, a: i64, step: i64, len: i64, e: i64) {
        self.mul_pochhammer_rated(a, step, len, e, Rate::Flat);
    }

    /// `(q^a; q^step)_len` with signed length.
    pub fn mul_pochhammer(&mut self, a: i64, step: i64, len: i64) {
        self.mul_pochhammer_pow(a, step, len, 1);
    }

    /// `(1 + q^step)^e`, written as `(1 - q^{2 step}) / (1 - q^step)`.
    pub fn mul_one_plus_q(&mut self, step: i64, e: i64) {
        self.mul_one_minus_q(2 * step, e);
        self.mul_one_minus_q(step, -e);
    }

    /// Resolves the vanished-factor channels. Flat zeros cannot cancel:
    /// a positive count means the value is zero, a negative one a pole.
    /// Rated zeros cancel within the perturbation limit; a surviving
    /// surplus is a zero or pole, and an exact cancellation contributes
    /// `(-1)^{minus-channel count}` because the two channels vanish with
    /// opposite signs.
    fn resolve_zeros(&self) -> ZeroResolution {
        if self.is_zero {
            return ZeroResolution::Zero;
        }
        if self.flat_den > 0 {
            return ZeroResolution::Pole;
        }
        if self.flat_num > 0 {
            return ZeroResolution::Zero;
        }
        let net = self.zero_plus + self.zero_minus;
        if net > 0 {
            return ZeroResolution::Zero;
        }
        if net < 0 {
            return ZeroResolution::Pole;
        }
        ZeroResolution::Finite { extra_negative: self.zero_minus.rem_euclid(2) == 1 }
    }

    /// Whether any factor vanished at all (used by strict verifiers that
    /// reject every degenerate specialization outright).
    pub fn has_vanished_factors(&self) -> bool {
        self.flat_num != 0 || self.flat_den != 0 || self.zero_plus != 0 || self.zero_minus != 0
    }

    fn parts(&self) -> Option<(bool, i64, ZeroResolution, BTreeMap<u32, i64>, BTreeMap<u32, i64>)> {
        if self.is_zero {
            return None;
        }
        let mut pos = BTreeMap::new();
        let mut neg = BTreeMap::new();
        for (&k, &e) in &self.factors {
            if e > 0 {
                pos.insert(k, e);
            } else if e < 0 {
                neg.insert(k, -e);
            }
        }
        Some((self.negative, self.q_pow, self.resolve_zeros(), pos, neg))
    }

    /// Expands to a canonical rational value. A positive net vanished
    /// multiplicity gives zero; a negative one is a pole and is reported as
    /// an inadmissible specialization.
    pub fn to_rational(&self) -> Result<RationalQ> {
        if self.is_zero {
            return Ok(RationalQ::zero());
        }
        let extra_negative = match self.resolve_zeros() {
            ZeroResolution::Zero => return Ok(RationalQ::zero()),
            ZeroResolution::Pole => {
                return Err(Error::Inadmissible(
                    "vanishing denominator factor".to_string(),
                ))
            }
            ZeroResolution::Finite { extra_negative } => extra_negative,
        };
        // Numerator and denominator built from the cyclotomic split are
        // coprime by construction: distinct irreducible factors only.
        let (cyclo, sign_flips) = cyclotomic_map(&self.factors);
        let mut pos = BTreeMap::new();
        let mut neg = BTreeMap::new();
        for (&d, &e) in &cyclo {
            if e > 0 {
                pos.insert(d, e);
            } else if e < 0 {
                neg.insert(d, -e);
            }
        }
        let mut num = expand_cyclotomic_map(&pos).shift(self.q_pow);
        if (self.negative != extra_negative) != (sign_flips.rem_euclid(2) == 1) {
            num = num.neg();
        }
        Ok(RationalQ::from_coprime_parts(num, expand_cyclotomic_map(&neg)))
    }

    /// Expands to a polynomial, failing when the value is not one.
    pub fn to_polynomial(&self) -> Result<LaurentPoly> {
        self.to_rational()?.as_polynomial()
    }

    /// Degree as a rational function of `q`; `None` for the zero value.
    pub fn degree(&self) -> Option<i64> {
        let (_, q_pow, zeros, pos, neg) = self.parts()?;
        if !matches!(zeros, ZeroResolution::Finite { .. }) {
            return None;
        }
        let d = |m: &BTreeMap<u32, i64>| m.iter().map(|(&k, &e)| k as i64 * e).sum::<i64>();
        Some(q_pow + d(&pos) - d(&neg))
    }

    /// Order of vanishing at q = 0; `None` unless the value is finite and
    /// nonzero.
    pub fn valuation(&self) -> Option<i64> {
        if self.is_zero || !matches!(self.resolve_zeros(), ZeroResolution::Finite { .. }) {
            return None;
        }
        Some(self.q_pow)
    }

    pub(crate) fn factor_view(&self) -> (&BTreeMap<u32, i64>, bool, i64, ZeroResolution) {
        (&self.factors, self.negative, self.q_pow, self.resolve_zeros())
    }

    pub fn equals_int(&self, c: i64) -> bool {
        self.to_rational()
            .map(|r| r == RationalQ::from_i64(c))
            .unwrap_or(false)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum ZeroResolution {
    Zero,
    Pole,
    Finite { extra_negative: bool },
}

fn add_factor(map: &mut BTreeMap<u32, i64>, k: u32, e: i64) {
    let v = map.entry(k).or_insert(0);
    *v += e;
    if *v == 0 {
        map.remove(&k);
    }
}

/// Expands `prod_k (1 - q^k)^{e_k}` with all `e_k >= 0` into a polynomial.
pub fn expand_factor_map(map: &BTreeMap<u32, i64>) -> LaurentPoly {
    let mut acc = LaurentPoly::one();
    for (&k, &e) in map {
        debug_assert!(e >= 0);
        for _ in 0..e {
            acc = acc.mul_one_minus_qk(k);
        }
    }
    acc
}

/// The d-th cyclotomic polynomial, memoized: `q^d - 1 = prod_{e | d} C_e`,
/// so `C_d = (q^d - 1) / prod_{e | d, e < d} C_e` by exact division.
pub fn cyclotomic(d: u32) -> LaurentPoly {
    use std::sync::Mutex;
    static MEMO: Mutex<BTreeMap<u32, LaurentPoly>> = Mutex::new(BTreeMap::new());
    if let Some(p) = MEMO.lock().unwrap().get(&d) {
        return p.clone();
    }
    let mut acc = LaurentPoly::monomial(num_bigint::BigInt::from(1), d as i64)
        .sub(&LaurentPoly::one());
    for e in 1..=d / 2 {
        if d % e == 0 {
            acc = acc
                .exact_div(&cyclotomic(e))
                .expect("cyclotomic division is exact");
        }
    }
    MEMO.lock().unwrap().insert(d, acc.clone());
    acc
}

/// Converts a `(1 - q^k)` exponent map into a cyclotomic exponent map
/// using `1 - q^k = -(q^k - 1) = - prod_{d | k} C_d`. The sign bookkeeping
/// stays with the caller: `(1 - q^k)` and `prod_{d|k} C_d` differ by -1.
fn cyclotomic_map(factors: &BTreeMap<u32, i64>) -> (BTreeMap<u32, i64>, i64) {
    let mut out = BTreeMap::new();
    let mut sign_flips = 0i64;
    for (&k, &e) in factors {
        sign_flips += e;
        for d in 1..=k {
            if k % d == 0 {
                add_factor(&mut out, d, e);
            }
        }
    }
    (out, sign_flips)
}

/// Expands `prod_d C_d^{e_d}` with all `e_d >= 0`.
fn expand_cyclotomic_map(map: &BTreeMap<u32, i64>) -> LaurentPoly {
    let mut acc = LaurentPoly::one();
    for (&d, &e) in map {
        debug_assert!(e >= 0);
        if d == 1 {
            // C_1 = q - 1 = -(1 - q)
            for _ in 0..e {
                acc = acc.mul_one_minus_qk(1).neg();
            }
            continue;
        }
        let c = cyclotomic(d);
        for _ in 0..e {
            acc = acc.mul(&c);
        }
    }
    acc
}

/// Sums factored terms exactly over their common denominator, reducing
/// once at the end. Zero terms are skipped; a term with a net vanishing
/// denominator makes the whole sum inadmissible.
pub fn sum_qprods<'a, I: IntoIterator<Item = &'a QProd>>(terms: I) -> Result<RationalQ> {
    let mut split = Vec::new();
    for t in terms {
        if t.is_zero {
            continue;
        }
        let extra_negative = match t.resolve_zeros() {
            ZeroResolution::Zero => continue,
            ZeroResolution::Pole => {
                return Err(Error::Inadmissible(
                    "vanishing denominator in a summand".to_string(),
                ))
            }
            ZeroResolution::Finite { extra_negative } => extra_negative,
        };
        let (cyclo, sign_flips) = cyclotomic_map(&t.factors);
        let mut pos = BTreeMap::new();
        let mut neg = BTreeMap::new();
        for (&d, &e) in &cyclo {
            if e > 0 {
                pos.insert(d, e);
            } else if e < 0 {
                neg.insert(d, -e);
            }
        }
        let negative = (t.negative != extra_negative) != (sign_flips.rem_euclid(2) == 1);
        split.push((negative, t.q_pow, pos, neg));
    }
    if split.is_empty() {
        return Ok(RationalQ::zero());
    }
    let mut common: BTreeMap<u32, i64> = BTreeMap::new();
    for (_, _, _, neg) in &split {
        for (&d, &e) in neg {
            let v = common.entry(d).or_insert(0);
            *v = (*v).max(e);
        }
    }
    let mut acc = LaurentPoly::zero();
    for (negative, q_pow, pos, neg) in &split {
        let mut scaled = pos.clone();
        for (&d, &e) in &common {
            let deficit = e - neg.get(&d).copied().unwrap_or(0);
            if deficit > 0 {
                add_factor(&mut scaled, d, deficit);
            }
        }
        let mut num = expand_cyclotomic_map(&scaled).shift(*q_pow);
        if *negative {
            num = num.neg();
        }
        acc = acc.add(&num);
    }
    // the sum can drop cyclotomic factors of the common denominator;
    // peel them off by exact division instead of a generic gcd
    let mut den_map = common;
    if acc.is_zero() {
        return Ok(RationalQ::zero());
    }
    for (&d, e) in den_map.iter_mut() {
        let c = cyclotomic(d);
        while *e > 0 {
            match acc.exact_div(&c) {
                Some(q) => {
                    acc = q;
                    *e -= 1;
                }
                None => break,
            }
        }
    }
    den_map.retain(|_, e| *e > 0);
    Ok(RationalQ::from_coprime_parts(acc, expand_cyclotomic_map(&den_map)))
}

/// Builds a `QProd` from a closure; purely a readability helper.
pub fn qprod(build: impl FnOnce(&mut QProd)) -> QProd {
    let mut p = QProd::one();
    build(&mut p);
    p
}

/// `(-1)^e` as a standalone value.
pub fn sign_pow(e: i64) -> QProd {
    qprod(|p| p.mul_sign_pow(e))
}

impl fmt::Debug for QProd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero {
            return write!(f, "QProd(0)");
        }
        write!(
            f,
            "QProd({}q^{}, zeros {}/{} flat, {} plus, {} minus, {:?})",
            if self.negative { "-" } else { "" },
            self.q_pow,
            self.flat_num,
            self.flat_den,
            self.zero_plus,
            self.zero_minus,
            self.factors
        )
    }
}
