//! q-integers, q-factorials, double q-factorials, Gaussian binomials and
//! shifted q-factorials (Pochhammer symbols), all exact.
//!
//! Conventions: `[0]_q = 0`, `[0]_q! = 1`, and `1/[m]_q! = 0` for `m < 0`
//! (the determinant of reciprocal q-factorials needs entries to vanish for
//! negative arguments).

use num_bigint::BigInt;
use std::sync::Mutex;

use crate::factored::QProd;
use crate::qseries::{LaurentPoly, RationalQ};
use crate::{Error, Result};

/// `[alpha]_q = 1 + q + ... + q^{alpha-1}`; `[0]_q = 0`.
pub fn q_int(alpha: u64) -> LaurentPoly {
    LaurentPoly::new(0, vec![BigInt::from(1); alpha as usize])
}

/// `[alpha]_q = (1 - q^alpha)/(1 - q)` for any integer `alpha`, so that
/// `[-a]_q = -q^-a [a]_q`.
pub fn q_int_signed(alpha: i64) -> LaurentPoly {
    if alpha >= 0 {
        q_int(alpha as u64)
    } else {
        q_int((-alpha) as u64).shift(alpha).neg()
    }
}

static FACTORIAL_MEMO: Mutex<Vec<LaurentPoly>> = Mutex::new(Vec::new());

/// `[m]_q! = [m]_q [m-1]_q ... [1]_q`; `[0]_q! = 1`. Memoized.
pub fn q_factorial(m: u64) -> LaurentPoly {
    let mut memo = FACTORIAL_MEMO.lock().unwrap();
    if memo.is_empty() {
        memo.push(LaurentPoly::one());
    }
    while memo.len() <= m as usize {
        let next = memo.last().unwrap().mul(&q_int(memo.len() as u64));
        memo.push(next);
    }
    memo[m as usize].clone()
}

/// `1/[m]_q!` for `m >= 0`, and the zero value for `m < 0`.
pub fn q_factorial_recip(m: i64) -> RationalQ {
    if m < 0 {
        RationalQ::zero()
    } else {
        RationalQ::new(LaurentPoly::one(), q_factorial(m as u64)).unwrap()
    }
}

/// Double q-factorial `[a]_q!! = [a]_q [a-2]_q ... [2]_q` for even `a`;
/// `[0]_q!! = 1`. Odd arguments are a domain error.
pub fn q_double_factorial(a: u64) -> Result<LaurentPoly> {
    if a % 2 != 0 {
        return Err(Error::Domain(format!(
            "double q-factorial requires an even argument, got {a}"
        )));
    }
    let mut acc = LaurentPoly::one();
    let mut j = 2;
    while j <= a {
        acc = acc.mul(&q_int(j));
        j += 2;
    }
    Ok(acc)
}

/// Gaussian binomial `[n over k]_q`; zero outside `0 <= k <= n`. The
/// division `[n]_q!/([k]_q! [n-k]_q!)` is asserted exact.
pub fn gaussian_binomial(n: u64, k: i64) -> LaurentPoly {
    if k < 0 || k as u64 > n {
        return LaurentPoly::zero();
    }
    let mut p = QProd::one();
    p.mul_gaussian_binomial(n as i64, k, 1);
    p.to_polynomial()
        .expect("Gaussian binomial division must be exact")
}

/// `(q^a; q^step)_k = prod_{j=0}^{k-1} (1 - q^{a + j*step})` for `k >= 0`.
/// The step may be negative (base `q^-2` Pochhammers appear in the Laplace
/// expansion of the staircase determinant).
pub fn q_pochhammer_power(a: i64, step: i64, k: u64) -> LaurentPoly {
    assert!(step != 0, "Pochhammer step must be nonzero");
    let mut acc = LaurentPoly::one();
    for j in 0..k as i64 {
        let e = a + j * step;
        let factor = LaurentPoly::one().sub(&LaurentPoly::monomial(BigInt::from(1), e));
        acc = acc.mul(&factor);
    }
    acc
}

/// `prod_{j=0}^{k-1} (1 - base * q^{j*step})` for a rational base.
pub fn q_pochhammer_rat(base: &RationalQ, step: i64, k: u64) -> RationalQ {
    assert!(step != 0, "Pochhammer step must be nonzero");
    let mut acc = RationalQ::one();
    for j in 0..k as i64 {
        let factor = RationalQ::one().sub(&base.mul(&RationalQ::q_power(j * step)));
        acc = acc.mul(&factor);
    }
    acc
}
