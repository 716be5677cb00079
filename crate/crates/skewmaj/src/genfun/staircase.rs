//! Hypergeometric-sum and closed-product evaluators for the shapes
//! `(N, N-1, ..., N-n+1)/(m^r)`.
//!
//! All summands are assembled as factored products; sums run over strictly
//! increasing index tuples and are accumulated over a common denominator.
//! Empty tuples contribute the single term 1 and empty products are 1,
//! which makes the zero-offset degenerations come out of the same code
//! path as the general case.

use crate::factored::{sum_qprods, QProd};
use crate::hypergeom::increasing_tuples;
use crate::qseries::{LaurentPoly, RationalQ};
use crate::tableaux::StaircaseSpec;
use crate::{Error, Result};

use super::{binom2, binom3, GfForm};

fn spec_params(spec: &StaircaseSpec) -> Result<(i64, i64, i64, i64, i64)> {
    spec.validate()?;
    let nn = spec.top as i64;
    let n = spec.rows as i64;
    let m = spec.rect_width as i64;
    let r = spec.rect_height as i64;
    let cells = binom2(nn + 1) - binom2(nn - n + 1) - m * r;
    Ok((nn, n, m, r, cells))
}

/// Even-offset multi-sum form: offset `N - n = 2 s2`, an `s2`-fold sum of
/// base-`q^2` products. Requires `N - n` even.
pub fn thm1_even_factored(spec: &StaircaseSpec) -> Result<GfForm> {
    let (nn, n, m, r, cells) = spec_params(spec)?;
    if (nn - n) % 2 != 0 {
        return Err(Error::Domain(format!(
            "even-offset evaluator requires N - n even, got N={nn}, n={n}"
        )));
    }
    let s2 = (nn - n) / 2;

    let mut pre = QProd::one();
    pre.mul_sign_pow(binom2(s2) + r * s2);
    pre.mul_one_plus_q(1, binom2(n) - binom2(s2) - m * r);
    pre.mul_one_minus_q(1, -(binom2(s2) + 2 * r * s2));
    debug_assert!((m * r * (r + m - 2 * n)) % 2 == 0);
    pre.mul_q_pow(
        m * r * (r + m - 2 * n) / 2
            + r * s2 * (s2 - n - m + 1)
            + binom3(n + 1)
            + (nn - n) * (binom2(n) + binom2(s2)),
    );
    pre.mul_q_factorial(cells, 1);
    if s2 > 0 {
        pre.mul_q_factorial_pow(r + s2 - 1, 2, -s2);
        pre.mul_q_factorial_pow((nn + n - 2) / 2, 2, -s2);
    }
    for i in 1..=(nn + n) / 2 {
        pre.mul_q_factorial(i - 1, 2);
    }
    for i in 1..=n {
        pre.mul_q_factorial_pow(nn - n + 2 * i - 1, 1, -1);
    }
    for i in 1..=r {
        pre.mul_q_factorial(s2 + i - 1, 2);
        pre.mul_q_factorial(n + m - r + 2 * i - 1, 1);
        pre.mul_pochhammer(n + m - r + 2 * i, 2, s2);
        pre.mul_q_factorial_pow(m + i - 1, 2, -1);
        pre.mul_q_factorial_pow(nn - m - r + 2 * i - 1, 1, -1);
    }

    let mut terms = Vec::new();
    for tuple in increasing_tuples(s2 as usize, r + s2 - 1) {
        let mut t = QProd::one();
        for (idx, &l) in tuple.iter().enumerate() {
            let i = idx as i64 + 1;
            t.mul_q_pow((nn + n - 2 * (2 * i - 1)) * l);
            t.mul_gaussian_binomial(s2 - 1 + r, l, 2);
            t.mul_pochhammer(2 - nn - n, 2, l);
            t.mul_pochhammer(n + m - r - 2 * i + 1, 2, r + i - l - 1);
            t.mul_pochhammer(nn - m - r - 2 * i + 2, 2, r + i - l - 1);
            t.mul_pochhammer_pow(nn + m - r - 2 * i + 2, 2, r + i - l - 1, -1);
        }
        for a in 0..tuple.len() {
            for b in a + 1..tuple.len() {
                t.mul_one_minus_q(2 * (tuple[b] - tuple[a]), 2);
                t.mul_one_minus_q(2, -2);
            }
        }
        terms.push(t);
    }
    Ok(GfForm { prefactor: pre, dense: sum_qprods(&terms)? })
}

/// Odd-offset multi-sum form: offset `N - n = 2 s2 - 1`, an `s2`-fold sum.
/// Requires `N - n` odd.
pub fn thm1_odd_factored(spec: &StaircaseSpec) -> Result<GfForm> {
    let (nn, n, m, r, cells) = spec_params(spec)?;
    if (nn - n) % 2 != 1 {
        return Err(Error::Domain(format!(
            "odd-offset evaluator requires N - n odd, got N={nn}, n={n}"
        )));
    }
    let s2 = (nn - n + 1) / 2;

    let mut pre = QProd::one();
    pre.mul_sign_pow(binom2(s2) + r * s2);
    pre.mul_one_plus_q(1, binom2(n) - binom2(s2) - m * r);
    pre.mul_one_minus_q(1, -(binom2(s2) + r * (nn - n)));
    debug_assert!((m * r * (r + m - 2 * n + 2)) % 2 == 0);
    pre.mul_q_pow(
        m * r * (r + m - 2 * n + 2) / 2
            + r * s2 * (s2 - n - m)
            + binom3(n + 1)
            + (nn - n) * binom2(n)
            + (nn - n + 1) * binom2(s2),
    );
    pre.mul_q_factorial(cells, 1);
    if s2 > 0 {
        pre.mul_q_factorial_pow(r + s2 - 1, 2, -s2);
        pre.mul_q_factorial_pow((nn + n - 1) / 2, 2, -s2);
    }
    for i in 1..=(nn + n + 1) / 2 {
        pre.mul_q_factorial(i - 1, 2);
    }
    for i in 1..=n {
        pre.mul_q_factorial_pow(nn - n + 2 * i - 1, 1, -1);
    }
    for i in 1..=r {
        pre.mul_q_factorial(s2 + i - 1, 2);
        pre.mul_q_factorial(n + m - r + 2 * i - 1, 1);
        pre.mul_pochhammer(n + m - r + 2 * i + 1, 2, s2 - 1);
        pre.mul_q_factorial_pow(m + i - 1, 2, -1);
        pre.mul_q_factorial_pow(nn - m - r + 2 * i - 1, 1, -1);
    }

    let mut terms = Vec::new();
    for tuple in increasing_tuples(s2 as usize, r + s2 - 1) {
        let mut t = QProd::one();
        for (idx, &l) in tuple.iter().enumerate() {
            let i = idx as i64 + 1;
            t.mul_q_pow((nn + n + 1 - 2 * (2 * i - 1)) * l);
            t.mul_gaussian_binomial(s2 - 1 + r, l, 2);
            t.mul_pochhammer(1 - nn - n, 2, l);
            t.mul_pochhammer(n + m - r - 2 * i + 2, 2, r + i - l - 1);
            t.mul_pochhammer(nn - m - r - 2 * i + 2, 2, r + i - l - 1);
            t.mul_pochhammer_pow(nn + m - r - 2 * i + 2, 2, r + i - l - 1, -1);
        }
        for a in 0..tuple.len() {
            for b in a + 1..tuple.len() {
                t.mul_one_minus_q(2 * (tuple[b] - tuple[a]), 2);
                t.mul_one_minus_q(2, -2);
            }
        }
        terms.push(t);
    }
    Ok(GfForm { prefactor: pre, dense: sum_qprods(&terms)? })
}

fn expand_checked(form: GfForm, what: &str) -> Result<LaurentPoly> {
    let gf = form.expand()?;
    if !gf.is_coeff_nonnegative() {
        return Err(Error::Domain(format!(
            "{what} produced negative coefficients"
        )));
    }
    Ok(gf)
}

/// The even-offset generating function, expanded and checked.
pub fn thm1_even(spec: &StaircaseSpec) -> Result<LaurentPoly> {
    expand_checked(thm1_even_factored(spec)?, "even-offset evaluator")
}

/// The odd-offset generating function, expanded and checked.
pub fn thm1_odd(spec: &StaircaseSpec) -> Result<LaurentPoly> {
    expand_checked(thm1_odd_factored(spec)?, "odd-offset evaluator")
}

/// Parity dispatch to the two multi-sum forms, in factored form.
pub fn staircase_gf_factored(spec: &StaircaseSpec) -> Result<GfForm> {
    if (spec.top - spec.rows) % 2 == 0 {
        thm1_even_factored(spec)
    } else {
        thm1_odd_factored(spec)
    }
}

/// Parity dispatch to the two multi-sum forms.
pub fn staircase_gf(spec: &StaircaseSpec) -> Result<LaurentPoly> {
    expand_checked(staircase_gf_factored(spec)?, "staircase evaluator")
}

/// Closed product for the pure staircase case `N = n`, i.e. the shape
/// `(n, n-1, ..., 1)/(m^r)`.
pub fn closed_staircase(n: u64, m: u64, r: u64) -> Result<LaurentPoly> {
    let spec = StaircaseSpec::new(n, n, m, r)?;
    let _ = spec;
    let (n, m, r) = (n as i64, m as i64, r as i64);
    let mut p = QProd::one();
    debug_assert!((m * r * (r + m - 2 * n)) % 2 == 0);
    p.mul_q_pow(m * r * (r + m - 2 * n) / 2 + binom3(n + 1));
    p.mul_one_plus_q(1, binom2(n) - m * r);
    p.mul_q_factorial(binom2(n + 1) - m * r, 1);
    for i in 1..=n {
        p.mul_q_factorial(i - 1, 2);
        p.mul_q_factorial_pow(2 * i - 1, 1, -1);
    }
    for i in 1..=r {
        p.mul_q_factorial(i - 1, 2);
        p.mul_q_factorial(n + m - r + 2 * i - 1, 1);
        p.mul_q_factorial_pow(m + i - 1, 2, -1);
        p.mul_q_factorial_pow(n - m - r + 2 * i - 1, 1, -1);
    }
    expand_checked(
        GfForm { prefactor: p, dense: RationalQ::one() },
        "closed staircase product",
    )
}

/// Closed form (product times a single sum) for offset one, `N = n + 1`,
/// i.e. the shape `(n+1, n, ..., 2)/(m^r)`.
pub fn closed_staircase_plus1(n: u64, m: u64, r: u64) -> Result<LaurentPoly> {
    let spec = StaircaseSpec::new(n + 1, n, m, r)?;
    let _ = spec;
    let (n, m, r) = (n as i64, m as i64, r as i64);
    let mut pre = QProd::one();
    pre.mul_one_plus_q(1, binom2(n) - (m - 1) * r);
    debug_assert!((m * r * (r + m - 2 * n + 2)) % 2 == 0);
    pre.mul_q_pow(
        m * r * (r + m - 2 * n + 2) / 2
            + r * (1 - n - m)
            + binom3(n + 1)
            + binom2(n),
    );
    pre.mul_q_factorial(binom2(n + 2) - m * r - 1, 1);
    for i in 1..=n {
        pre.mul_q_factorial(i - 1, 2);
        pre.mul_q_factorial_pow(2 * i, 1, -1);
    }
    for i in 1..=r {
        pre.mul_q_factorial(i - 1, 2);
        pre.mul_q_factorial(n + m - r + 2 * i - 1, 1);
        pre.mul_q_factorial_pow(m + i - 1, 2, -1);
        pre.mul_q_factorial_pow(n - m - r + 2 * i, 1, -1);
    }
    let mut terms = Vec::new();
    for l in 0..=r {
        let mut t = QProd::one();
        t.mul_sign_pow(r);
        t.mul_q_pow(2 * n * l);
        t.mul_one_minus_q(2, -r);
        t.mul_gaussian_binomial(r, l, 2);
        t.mul_pochhammer(-2 * n, 2, l);
        t.mul_pochhammer(n + m - r, 2, r - l);
        t.mul_pochhammer(n - m - r + 1, 2, r - l);
        t.mul_pochhammer_pow(n + m - r + 1, 2, r - l, -1);
        terms.push(t);
    }
    expand_checked(
        GfForm { prefactor: pre, dense: sum_qprods(&terms)? },
        "offset-one closed form",
    )
}

/// The Laplace expansion of the determinant along the first `r` columns:
/// a prefactor times a sum over `0 <= k_1 < ... < k_r <= n-1` of products
/// of base-`q^-2` shifted factorials. Rational in `q` termwise; equals the
/// determinant evaluator as a rational value.
pub fn laplace_sum(spec: &StaircaseSpec) -> Result<RationalQ> {
    let n = spec.rows as i64;
    laplace_sum_with_bound(spec, n - 1)
}

/// As [`laplace_sum`] but with an explicit upper summation bound. The sum
/// is invariant under extending the bound from `n-1` up to
/// `floor((N-m+r-1)/2)`: the extra summands vanish.
pub fn laplace_sum_with_bound(spec: &StaircaseSpec, bound: i64) -> Result<RationalQ> {
    let (nn, n, m, r, cells) = spec_params(spec)?;

    let mut pre = QProd::one();
    pre.mul_sign_pow(binom2(r));
    pre.mul_one_plus_q(1, binom2(n) - (n - 1) * r);
    pre.mul_one_minus_q(1, -r * (r - 1));
    pre.mul_q_pow(
        2 * binom3(r + 1) + 2 * binom3(n - r + 1)
            + (nn + 1 - m) * binom2(r)
            + (nn + 1 + r) * binom2(n - r)
            - 4 * binom3(n + 1)
            + 2 * r * binom2(n + 1)
            - 2 * r * r,
    );
    pre.mul_q_factorial(cells, 1);
    for i in 1..=n {
        pre.mul_q_factorial(i - 1, 2);
        pre.mul_q_factorial_pow(nn + n + 1 - 2 * i, 1, -1);
    }
    for _ in 0..r {
        pre.mul_q_factorial(nn + n - 1, 1);
        pre.mul_q_factorial_pow(n - 1, 2, -1);
        pre.mul_q_factorial_pow(nn - m + r - 1, 1, -1);
    }

    let mut terms = Vec::new();
    for tuple in increasing_tuples(r as usize, bound) {
        let mut t = QProd::one();
        for (idx, &k) in tuple.iter().enumerate() {
            let i = idx as i64 + 1;
            t.mul_q_pow(-2 * (2 * i - 1) * k);
            t.mul_pochhammer(nn - m + r - 1, -2, k);
            t.mul_pochhammer(nn - m + r - 2, -2, k);
            t.mul_pochhammer(2 * n - 2, -2, k);
            t.mul_pochhammer_pow(nn + n - 1, -2, k, -1);
            t.mul_pochhammer_pow(nn + n - 2, -2, k, -1);
            t.mul_pochhammer_pow(-2, -2, k, -1);
        }
        for a in 0..tuple.len() {
            for b in a + 1..tuple.len() {
                t.mul_one_minus_q(2 * (tuple[b] - tuple[a]), 2);
            }
        }
        terms.push(t);
    }
    let sum = sum_qprods(&terms)?;
    pre.to_rational().map(|p| p.mul(&sum))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genfun::det_majgf;
    use crate::tableaux::maj_gf_oracle;

    fn spec(nn: u64, n: u64, m: u64, r: u64) -> StaircaseSpec {
        StaircaseSpec::new(nn, n, m, r).unwrap()
    }

    #[test]
    fn even_form_small() {
        // (N=2,n=2,m=0,r=0): shape (2,1), gf = q + q^2
        let gf = thm1_even(&spec(2, 2, 0, 0)).unwrap();
        assert_eq!(gf, maj_gf_oracle(&spec(2, 2, 0, 0).to_skew_shape()).unwrap());
        // (N=1,n=1,m=1,r=1): empty shape
        assert!(thm1_even(&spec(1, 1, 1, 1)).unwrap().is_one());
        // cross-method at a nontrivial offset
        let s = spec(4, 2, 1, 1);
        assert_eq!(thm1_even(&s).unwrap(), det_majgf(&s.to_skew_shape()).unwrap());
    }

    #[test]
    fn odd_form_small() {
        let s = spec(3, 2, 0, 0);
        let gf = thm1_odd(&s).unwrap();
        assert_eq!(gf, maj_gf_oracle(&s.to_skew_shape()).unwrap());
        assert_eq!(gf.to_text(), "q^2 + q^3 + q^4 + q^5 + q^6");
        // single-cell shape (2)/(1)
        assert!(thm1_odd(&spec(2, 1, 1, 1)).unwrap().is_one());
        let s = spec(5, 2, 2, 1);
        assert_eq!(thm1_odd(&s).unwrap(), det_majgf(&s.to_skew_shape()).unwrap());
    }

    #[test]
    fn parity_dispatch() {
        assert!(thm1_even(&spec(3, 2, 0, 0)).is_err());
        assert!(thm1_odd(&spec(2, 2, 0, 0)).is_err());
        assert_eq!(
            staircase_gf(&spec(1, 1, 0, 0)).unwrap(),
            LaurentPoly::one()
        );
    }

    #[test]
    fn closed_forms_small() {
        assert_eq!(
            closed_staircase(2, 0, 0).unwrap(),
            maj_gf_oracle(&spec(2, 2, 0, 0).to_skew_shape()).unwrap()
        );
        assert_eq!(
            closed_staircase(2, 1, 1).unwrap(),
            maj_gf_oracle(&spec(2, 2, 1, 1).to_skew_shape()).unwrap()
        );
        assert!(closed_staircase(1, 1, 1).unwrap().is_one());
        assert_eq!(
            closed_staircase_plus1(2, 0, 0).unwrap(),
            maj_gf_oracle(&spec(3, 2, 0, 0).to_skew_shape()).unwrap()
        );
        assert!(closed_staircase_plus1(1, 1, 1).unwrap().is_one());
        let s = spec(4, 3, 2, 1);
        assert_eq!(
            closed_staircase_plus1(3, 2, 1).unwrap(),
            det_majgf(&s.to_skew_shape()).unwrap()
        );
    }

    #[test]
    fn laplace_small() {
        for (nn, n, m, r) in [(2, 2, 0, 0), (3, 2, 0, 0), (4, 3, 1, 1), (5, 4, 2, 2)] {
            let s = spec(nn, n, m, r);
            let lap = laplace_sum(&s).unwrap();
            let det = det_majgf(&s.to_skew_shape()).unwrap();
            assert_eq!(lap, RationalQ::from_poly(det), "spec {s}");
        }
    }

    #[test]
    fn laplace_range_extension() {
        for (nn, n, m, r) in [(4, 3, 1, 1), (5, 3, 0, 2), (6, 3, 0, 3), (5, 4, 1, 2)] {
            let s = spec(nn, n, m, r);
            let base = laplace_sum(&s).unwrap();
            let ext_bound = (nn as i64 - m as i64 + r as i64 - 1).div_euclid(2);
            let ext = laplace_sum_with_bound(&s, ext_bound).unwrap();
            assert_eq!(base, ext, "spec {s} bound {ext_bound}");
        }
    }
}
