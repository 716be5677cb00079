//! Exact verification of the basic hypergeometric transformation chain at
//! q-power specializations.
//!
//! Each identity relates two multi-dimensional terminating sums (or a sum
//! and a closed product). With every parameter specialized to an integer
//! power of `q`, both sides are exact rational functions of `q`, and the
//! verifiers compare them structurally. Checking many such points is the
//! same mechanism the "polynomial argument" uses to prove the general
//! identity; the verifiers sample admissible integer exponent tuples from
//! a seeded generator and demand exact equality on every one.
//!
//! Identity names follow their role in the chain:
//! - [`verify_dimension_change`]: the transformation between an `r`-fold
//!   and an `s`-fold sum (the specialization of the elliptic theorem);
//! - [`verify_whipple`]: the multi-dimensional Whipple transformation it
//!   degenerates from at `p = 0`;
//! - [`verify_inverted`]: the same after inverting `q` and all parameters;
//! - [`verify_symmetric`]: the symmetric form in which either of two
//!   parameters may terminate the sum (both branches);
//! - [`verify_product_case`] and [`verify_single_sum_case`]: its fully
//!   multiplicative `s = 0` case and its single-sum `s = 1` case.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::factored::{sum_qprods, QProd, Rate};
use crate::qseries::RationalQ;
use crate::{Error, Result};

/// All strictly increasing tuples `0 <= t_1 < ... < t_len <= max`. A
/// zero-length request yields the single empty tuple regardless of `max`.
pub fn increasing_tuples(len: usize, max: i64) -> Vec<Vec<i64>> {
    if len == 0 {
        return vec![Vec::new()];
    }
    if max < len as i64 - 1 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur: Vec<i64> = (0..len as i64).collect();
    loop {
        out.push(cur.clone());
        let mut i = len;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < max - (len as i64 - 1 - i as i64) {
                cur[i] += 1;
                for j in i + 1..len {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Exact sum of `term` over all strictly increasing tuples
/// `0 <= k_1 < ... < k_r <= bound`. The `r = 0` sum contributes the single
/// empty term, which is 1 by the empty-product convention.
pub fn multisum<F: FnMut(&[i64]) -> RationalQ>(r: usize, bound: i64, mut term: F) -> RationalQ {
    if r == 0 {
        return RationalQ::one();
    }
    let mut acc = RationalQ::zero();
    for tuple in increasing_tuples(r, bound) {
        acc = acc.add(&term(&tuple));
    }
    acc
}

/// Integer q-power exponents specializing the parameters `b, c, d, e, f`
/// of the transformation chain, plus the sum dimensions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct QPowerParams {
    pub b: i64,
    pub c: i64,
    pub d: i64,
    pub e: i64,
    pub f: i64,
    pub m: i64,
    pub r: i64,
    pub s: i64,
}

/// Which of the parameters `b`, `c` is the terminating one `q^-m` in the
/// symmetric form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Terminating {
    B,
    C,
}

fn binom2(x: i64) -> i64 {
    debug_assert!(x >= 0);
    x * (x - 1) / 2
}

fn binom3(x: i64) -> i64 {
    debug_assert!(x >= 0);
    x * (x - 1) * (x - 2) / 6
}

/// The squared Vandermonde-type factor `prod_{i<j} (1 - q^{k_i - k_j})^2`.
fn vandermonde_sq(t: &mut QProd, tuple: &[i64]) {
    for a in 0..tuple.len() {
        for b in a + 1..tuple.len() {
            t.mul_one_minus_q(tuple[a] - tuple[b], 2);
        }
    }
}

fn q_pow_weighted(t: &mut QProd, tuple: &[i64]) {
    for (idx, &k) in tuple.iter().enumerate() {
        t.mul_q_pow((2 * idx as i64 + 1) * k);
    }
}

/// Ratio of infinite products `prod (q^{a_i}; q)_inf / prod (q^{b_j}; q)_inf`
/// reduced to a finite value. Numerator and denominator exponents are
/// matched in sorted order; each pair telescopes to a finite shifted
/// factorial `(q^a; q)_{b-a}`. Mismatched counts cannot telescope.
pub fn finite_poch_ratio(num_exps: &[i64], den_exps: &[i64]) -> Result<RationalQ> {
    Ok(poch_ratio_prod(num_exps, den_exps)?.to_rational()?)
}

pub(crate) fn poch_ratio_prod(num_exps: &[i64], den_exps: &[i64]) -> Result<QProd> {
    if num_exps.len() != den_exps.len() {
        return Err(Error::Domain(format!(
            "infinite product does not reduce: {} numerator vs {} denominator factors",
            num_exps.len(),
            den_exps.len()
        )));
    }
    let mut nums = num_exps.to_vec();
    let mut dens = den_exps.to_vec();
    nums.sort_unstable();
    dens.sort_unstable();
    let mut p = QProd::one();
    for (a, b) in nums.iter().zip(&dens) {
        p.mul_pochhammer(*a, 1, b - a);
    }
    Ok(p)
}

// ---------------------------------------------------------------------------
// Identity evaluators: each returns the exact (lhs, rhs) pair
// ---------------------------------------------------------------------------

/// Left side shared by the dimension-changing transformation and the
/// symmetric form: an `r`-fold sum with factors
/// `(q^{d+k_i};q)_s (q^{b};q)_{k_i} (q^{c};q)_{k_i} / ((q;q)_{k_i} (q^{f};q)_{k_i})`.
fn lhs_terminating_sum(
    b: i64,
    c: i64,
    d: i64,
    f: i64,
    s: i64,
    r: i64,
    bound: i64,
    rate_b: Rate,
    rate_c: Rate,
) -> Result<RationalQ> {
    let mut terms = Vec::new();
    for tuple in increasing_tuples(r as usize, bound) {
        let mut t = QProd::one();
        q_pow_weighted(&mut t, &tuple);
        vandermonde_sq(&mut t, &tuple);
        for &k in &tuple {
            t.mul_pochhammer(d + k, 1, s);
            t.mul_pochhammer_rated(b, 1, k, 1, rate_b);
            t.mul_pochhammer_rated(c, 1, k, 1, rate_c);
            t.mul_pochhammer_pow(1, 1, k, -1);
            t.mul_pochhammer_pow(f, 1, k, -1);
        }
        terms.push(t);
    }
    sum_qprods(&terms)
}

/// Both sides of the dimension-changing transformation: an `r`-fold sum
/// terminated by `q^-m` equals a prefactor times an `s`-fold sum over
/// `0 <= l_1 < ... < l_s <= r+s-1`.
pub fn dimension_change_sides(p: &QPowerParams) -> Result<(RationalQ, RationalQ)> {
    let QPowerParams { b, d, f, m, r, s, .. } = *p;
    if m < 0 || r < 0 || s < 0 {
        return Err(Error::Inadmissible("m, r, s must be nonnegative".into()));
    }
    if r + s == 0 {
        return Err(Error::Inadmissible(
            "degenerate instance r = s = 0 (the right side's normalization vanishes)".into(),
        ));
    }
    if r > m + 1 {
        return Err(Error::Inadmissible(
            "terminating range shorter than the sum dimension (r > m + 1); \
             the right side's normalization degenerates"
                .into(),
        ));
    }
    let lhs = lhs_terminating_sum(b, -m, d, f, s, r, m, Rate::Flat, Rate::Plus)?;

    let mut pre = QProd::one();
    pre.mul_q_pow(binom3(r + s) + binom3(r + 1) + s * binom2(r) - m * binom2(r + s));
    pre.mul_q_pow(-f * binom2(r));
    pre.mul_pochhammer_pow(1, 1, r + s - 1, -(s - 1));
    for i in 1..=r {
        pre.mul_pochhammer(b, 1, i - 1);
        pre.mul_pochhammer_rated(b + s + r + i - m - 1 - f, 1, m - r + 1, 1, Rate::Plus);
        pre.mul_pochhammer_rated(i - m - f, 1, m - i + 1, -1, Rate::Plus);
    }
    for i in 1..=(r + s - 1) {
        pre.mul_pochhammer(1, 1, i - 1);
        // (q;q)_m / (q;q)_{m-i} written as (-1)^i q^{im - C(i,2)} (q^-m;q)_i,
        // the form whose vanishing factors carry the terminating parameter
        pre.mul_sign_pow(i);
        pre.mul_q_pow(i * m - binom2(i));
        pre.mul_pochhammer_rated(-m, 1, i, 1, Rate::Plus);
    }
    for i in r..=(r + s - 1) {
        pre.mul_pochhammer(d + 1 - r - b, 1, i);
        pre.mul_pochhammer_pow(1, 1, r + s - i - 1, -1);
        pre.mul_pochhammer_pow(d, 1, i - r, -1);
        pre.mul_pochhammer_pow(f + 1 - r - s - b, 1, i, -1);
    }

    let mut terms = Vec::new();
    for tuple in increasing_tuples(s as usize, r + s - 1) {
        let mut t = pre.clone();
        q_pow_weighted(&mut t, &tuple);
        vandermonde_sq(&mut t, &tuple);
        for &l in &tuple {
            t.mul_pochhammer(d, 1, l);
            t.mul_pochhammer(f + 1 - r - s - b, 1, l);
            t.mul_pochhammer(1 - r - s, 1, l);
            t.mul_pochhammer_pow(1, 1, l, -1);
            t.mul_pochhammer_pow(d + 1 - r - b, 1, l, -1);
            t.mul_pochhammer_rated(-m, 1, l, -1, Rate::Plus);
        }
        terms.push(t);
    }
    Ok((lhs, sum_qprods(&terms)?))
}

/// Sums strict terms: any vanished factor at all makes the
/// specialization inadmissible (used by the identities whose degenerate
/// points have no single continuation parameter).
fn sum_strict(terms: &[QProd]) -> Result<RationalQ> {
    for t in terms {
        if t.has_vanished_factors() {
            return Err(Error::Inadmissible(
                "a shifted-factorial factor vanishes at this specialization".to_string(),
            ));
        }
    }
    sum_qprods(terms)
}

/// Both sides of the multi-dimensional Whipple transformation (five free
/// parameters `b, c, d, e, f`; both sides are `r`-fold sums over the same
/// range, with the balanced parameter `b c e q^{2r-m-1}/(d f)` on the left).
pub fn whipple_sides(p: &QPowerParams) -> Result<(RationalQ, RationalQ)> {
    let QPowerParams { b, c, d, e, f, m, r, .. } = *p;
    if m < 0 || r < 0 {
        return Err(Error::Inadmissible("m, r must be nonnegative".into()));
    }
    let balanced = b + c + e + 2 * r - m - 1 - d - f;

    let mut lhs_terms = Vec::new();
    for tuple in increasing_tuples(r as usize, m) {
        let mut t = QProd::one();
        q_pow_weighted(&mut t, &tuple);
        vandermonde_sq(&mut t, &tuple);
        for &k in &tuple {
            t.mul_pochhammer(b, 1, k);
            t.mul_pochhammer(c, 1, k);
            t.mul_pochhammer(e, 1, k);
            t.mul_pochhammer(-m, 1, k);
            t.mul_pochhammer_pow(1, 1, k, -1);
            t.mul_pochhammer_pow(d, 1, k, -1);
            t.mul_pochhammer_pow(f, 1, k, -1);
            t.mul_pochhammer_pow(balanced, 1, k, -1);
        }
        lhs_terms.push(t);
    }
    let lhs = sum_strict(&lhs_terms)?;

    let mut pre = QProd::one();
    for i in 1..=r {
        pre.mul_pochhammer(b, 1, i - 1);
        pre.mul_pochhammer(c, 1, i - 1);
        pre.mul_pochhammer(e + 1 - f, 1, i - 1);
        pre.mul_pochhammer_pow(d + 1 - r - c, 1, i - 1, -1);
        pre.mul_pochhammer_pow(d + 1 - r - b, 1, i - 1, -1);
        pre.mul_pochhammer_pow(b + c + e + r - d - f, 1, i - 1, -1);
        pre.mul_pochhammer(f - e, 1, m + 1 - r);
        pre.mul_pochhammer(d + f + 1 - r - b - c, 1, m - i + 1);
        pre.mul_pochhammer_pow(d + f + 1 - r - b - c - e, 1, m + 1 - r, -1);
        pre.mul_pochhammer_pow(f, 1, m - i + 1, -1);
    }

    let mut rhs_terms = Vec::new();
    for tuple in increasing_tuples(r as usize, m) {
        let mut t = pre.clone();
        q_pow_weighted(&mut t, &tuple);
        vandermonde_sq(&mut t, &tuple);
        for &k in &tuple {
            t.mul_pochhammer(d + 1 - r - c, 1, k);
            t.mul_pochhammer(d + 1 - r - b, 1, k);
            t.mul_pochhammer(e, 1, k);
            t.mul_pochhammer(-m, 1, k);
            t.mul_pochhammer_pow(1, 1, k, -1);
            t.mul_pochhammer_pow(d, 1, k, -1);
            t.mul_pochhammer_pow(d + f + 1 - r - b - c, 1, k, -1);
            t.mul_pochhammer_pow(e + r - m - f, 1, k, -1);
        }
        rhs_terms.push(t);
    }
    Ok((lhs, sum_strict(&rhs_terms)?))
}

/// Both sides of the inverted Whipple form (parameters `b, c, d, f`; the
/// `e -> infinity` limit with `q` and all parameters inverted).
pub fn inverted_sides(p: &QPowerParams) -> Result<(RationalQ, RationalQ)> {
    let QPowerParams { b, c, d, f, m, r, .. } = *p;
    if m < 0 || r < 0 {
        return Err(Error::Inadmissible("m, r must be nonnegative".into()));
    }
    let mut lhs_terms = Vec::new();
    for tuple in increasing_tuples(r as usize, m) {
        let mut t = QProd::one();
        q_pow_weighted(&mut t, &tuple);
        vandermonde_sq(&mut t, &tuple);
        for &k in &tuple {
            t.mul_pochhammer(b, 1, k);
            t.mul_pochhammer(c, 1, k);
            t.mul_pochhammer(-m, 1, k);
            t.mul_pochhammer_pow(1, 1, k, -1);
            t.mul_pochhammer_pow(d, 1, k, -1);
            t.mul_pochhammer_pow(f, 1, k, -1);
        }
        lhs_terms.push(t);
    }
    let lhs = sum_strict(&lhs_terms)?;

    let mut pre = QProd::one();
    pre.mul_q_pow((b + c - d - 1 + r) * r * (m - r + 1));
    for i in 1..=r {
        pre.mul_pochhammer(b, 1, i - 1);
        pre.mul_pochhammer(c, 1, i - 1);
        pre.mul_pochhammer_pow(d + 1 - r - c, 1, i - 1, -1);
        pre.mul_pochhammer_pow(d + 1 - r - b, 1, i - 1, -1);
        pre.mul_pochhammer(d + f + 1 - r - b - c, 1, m - i + 1);
        pre.mul_pochhammer_pow(f, 1, m - i + 1, -1);
    }

    let mut rhs_terms = Vec::new();
    for tuple in increasing_tuples(r as usize, m) {
        let mut t = pre.clone();
        q_pow_weighted(&mut t, &tuple);
        vandermonde_sq(&mut t, &tuple);
        for &k in &tuple {
            t.mul_pochhammer(d + 1 - r - c, 1, k);
            t.mul_pochhammer(d + 1 - r - b, 1, k);
            t.mul_pochhammer(-m, 1, k);
            t.mul_pochhammer_pow(1, 1, k, -1);
            t.mul_pochhammer_pow(d, 1, k, -1);
            t.mul_pochhammer_pow(d + f + 1 - r - b - c, 1, k, -1);
        }
        rhs_terms.push(t);
    }
    Ok((lhs, sum_strict(&rhs_terms)?))
}

/// The infinite-product block of the symmetric form,
/// `(q/f;q)_inf (b c q^{s+r+i-1}/f;q)_inf / ((c q^i/f;q)_inf (b q^{s+i}/f;q)_inf)`,
/// telescoped to finite factorials. The pairing follows the terminating
/// branch: products whose ratio does not involve the free parameter are
/// matched, which is exactly the continuation the polynomial argument
/// assigns to the block.
fn symmetric_block(b: i64, c: i64, f: i64, s: i64, r: i64, i: i64, term: Terminating) -> QProd {
    let mut p = QProd::one();
    match term {
        Terminating::C => {
            // pair (q/f) with (c q^i/f) and (b c q^{s+r+i-1}/f) with
            // (b q^{s+i}/f): the shifts are free of the free parameter b
            p.mul_pochhammer(1 - f, 1, c + i - 1);
            p.mul_pochhammer_rated(b + c + s + r + i - 1 - f, 1, 1 - c - r, 1, Rate::Plus);
        }
        Terminating::B => {
            p.mul_pochhammer(1 - f, 1, b + s + i - 1);
            p.mul_pochhammer_rated(b + c + s + r + i - 1 - f, 1, 1 - b - s - r, 1, Rate::Plus);
        }
    }
    p
}

/// Both sides of the symmetric form. One of `b`, `c` must be `q^-m` with
/// `m >= 0` (the `terminating` argument says which); the other is free.
/// The left sum runs to the terminating modulus; the implementation also
/// asserts that one further index value only contributes a zero term.
pub fn symmetric_sides(
    p: &QPowerParams,
    terminating: Terminating,
) -> Result<(RationalQ, RationalQ)> {
    let QPowerParams { b, c, d, f, r, s, .. } = *p;
    if r < 0 || s < 0 {
        return Err(Error::Inadmissible("r, s must be nonnegative".into()));
    }
    if r + s == 0 {
        return Err(Error::Inadmissible(
            "degenerate instance r = s = 0 (the right side's normalization vanishes)".into(),
        ));
    }
    let modulus = match terminating {
        Terminating::B => -b,
        Terminating::C => -c,
    };
    if modulus < 0 {
        return Err(Error::Inadmissible(format!(
            "terminating parameter must be q^-m with m >= 0, got exponent {}",
            -modulus
        )));
    }
    if terminating == Terminating::C && r > modulus + 1 {
        return Err(Error::Inadmissible(
            "terminating range shorter than the sum dimension (r > m + 1); \
             the right side's normalization degenerates"
                .into(),
        ));
    }

    // The polynomial argument continues the identity in the parameter c
    // in both branches (with b fixed), so only factors whose base carries
    // c move under the perturbation; everything else is flat and its
    // zeros are genuine.
    let lhs = lhs_terminating_sum(b, c, d, f, s, r, modulus, Rate::Flat, Rate::Plus)?;
    // terms beyond the terminating bound vanish; spot-check the first one
    if r >= 1 {
        let mut probe: Vec<i64> = (0..r - 1).collect();
        probe.push(modulus + 1);
        let mut t = QProd::one();
        q_pow_weighted(&mut t, &probe);
        vandermonde_sq(&mut t, &probe);
        for &k in &probe {
            t.mul_pochhammer(d + k, 1, s);
            t.mul_pochhammer(b, 1, k);
            t.mul_pochhammer_rated(c, 1, k, 1, Rate::Plus);
            t.mul_pochhammer_pow(1, 1, k, -1);
            t.mul_pochhammer_pow(f, 1, k, -1);
        }
        let beyond = t.to_rational()?;
        if !beyond.is_zero() {
            return Err(Error::Inadmissible(
                "sum does not terminate at the expected bound".into(),
            ));
        }
    }

    let mut pre = QProd::one();
    pre.mul_sign_pow(binom2(r + s));
    pre.mul_q_pow(binom3(r + 1) + s * binom2(r));
    pre.mul_q_pow(-f * binom2(r));
    pre.mul_pochhammer_pow(1, 1, r + s - 1, -(s - 1));
    for i in 1..=r {
        pre.mul_pochhammer(b, 1, i - 1);
        pre.mul_assign(&symmetric_block(b, c, f, s, r, i, terminating));
    }
    for i in 1..=(r + s - 1) {
        pre.mul_pochhammer(1, 1, i - 1);
        pre.mul_pochhammer_rated(c, 1, i, 1, Rate::Plus);
    }
    for i in r..=(r + s - 1) {
        pre.mul_pochhammer(d + 1 - r - b, 1, i);
        pre.mul_pochhammer_pow(1, 1, r + s - i - 1, -1);
        pre.mul_pochhammer_pow(d, 1, i - r, -1);
        pre.mul_pochhammer_pow(f + 1 - r - s - b, 1, i, -1);
    }

    let mut terms = Vec::new();
    for tuple in increasing_tuples(s as usize, r + s - 1) {
        let mut t = pre.clone();
        q_pow_weighted(&mut t, &tuple);
        vandermonde_sq(&mut t, &tuple);
        for &l in &tuple {
            t.mul_pochhammer(d, 1, l);
            t.mul_pochhammer(f + 1 - r - s - b, 1, l);
            t.mul_pochhammer(1 - r - s, 1, l);
            t.mul_pochhammer_pow(1, 1, l, -1);
            t.mul_pochhammer_pow(d + 1 - r - b, 1, l, -1);
            t.mul_pochhammer_rated(c, 1, l, -1, Rate::Plus);
        }
        terms.push(t);
    }
    Ok((lhs, sum_qprods(&terms)?))
}

/// Both sides of the fully multiplicative case (`s = 0`): the `r`-fold
/// terminating sum equals a closed product.
pub fn product_case_sides(p: &QPowerParams) -> Result<(RationalQ, RationalQ)> {
    let QPowerParams { b, f, m, r, .. } = *p;
    if m < 0 || r < 0 {
        return Err(Error::Inadmissible("m, r must be nonnegative".into()));
    }
    let lhs = lhs_terminating_sum(b, -m, 0, f, 0, r, m, Rate::Flat, Rate::Plus)?;

    let mut rhs = QProd::one();
    rhs.mul_sign_pow(binom2(r));
    rhs.mul_q_pow(binom2(r) * (m - r + 1));
    rhs.mul_q_pow(b * r * (m - r + 1));
    for i in 1..=r {
        rhs.mul_pochhammer(b, 1, i - 1);
        rhs.mul_pochhammer(1, 1, m);
        rhs.mul_pochhammer(f + 1 - i - b, 1, m - r + 1);
        rhs.mul_pochhammer(1, 1, i - 1);
        rhs.mul_pochhammer_pow(f, 1, m - i + 1, -1);
        rhs.mul_pochhammer_pow(1, 1, m - i + 1, -1);
    }
    Ok((lhs, rhs.to_rational()?))
}

/// Both sides of the single-sum case (`s = 1`): the `r`-fold terminating
/// sum equals a prefactor times a one-dimensional sum of length `r + 1`.
pub fn single_sum_case_sides(
    p: &QPowerParams,
    terminating: Terminating,
) -> Result<(RationalQ, RationalQ)> {
    let QPowerParams { b, c, d, f, r, .. } = *p;
    if r < 0 {
        return Err(Error::Inadmissible("r must be nonnegative".into()));
    }
    let modulus = match terminating {
        Terminating::B => -b,
        Terminating::C => -c,
    };
    if modulus < 0 {
        return Err(Error::Inadmissible(format!(
            "terminating parameter must be q^-m with m >= 0, got exponent {}",
            -modulus
        )));
    }
    if terminating == Terminating::C && r > modulus + 1 {
        return Err(Error::Inadmissible(
            "terminating range shorter than the sum dimension (r > m + 1); \
             the right side's normalization degenerates"
                .into(),
        ));
    }
    let lhs = lhs_terminating_sum(b, c, d, f, 1, r, modulus, Rate::Flat, Rate::Plus)?;

    let mut pre = QProd::one();
    pre.mul_sign_pow(binom2(r + 1));
    pre.mul_q_pow(binom3(r + 1) + binom2(r));
    pre.mul_q_pow(-f * binom2(r));
    for i in 1..=r {
        pre.mul_pochhammer(1, 1, i - 1);
        pre.mul_pochhammer(b, 1, i - 1);
        pre.mul_pochhammer_rated(c, 1, i, 1, Rate::Plus);
        pre.mul_assign(&symmetric_block(b, c, f, 1, r, i, terminating));
    }

    let mut terms = Vec::new();
    for l in 0..=r {
        let mut t = pre.clone();
        t.mul_q_pow(l);
        t.mul_pochhammer(d, 1, l);
        t.mul_pochhammer(d + 1 - r + l - b, 1, r - l);
        t.mul_pochhammer(-r, 1, l);
        t.mul_pochhammer_pow(1, 1, l, -1);
        t.mul_pochhammer_pow(f - r + l - b, 1, r - l, -1);
        t.mul_pochhammer_rated(c, 1, l, -1, Rate::Plus);
        terms.push(t);
    }
    Ok((lhs, sum_qprods(&terms)?))
}

// ---------------------------------------------------------------------------
// Reports and seeded sweeps
// ---------------------------------------------------------------------------

/// Result of checking one identity at one parameter specialization.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub identity: String,
    pub params: QPowerParams,
    pub terminating: Option<Terminating>,
    /// `None` when the specialization was inadmissible.
    pub equal: Option<bool>,
    pub inadmissible: Option<String>,
    /// Canonical forms of the two sides, included on failure only.
    pub lhs: Option<String>,
    pub rhs: Option<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.equal == Some(true)
    }

    pub fn is_admissible(&self) -> bool {
        self.inadmissible.is_none()
    }

    fn build(
        identity: &str,
        params: &QPowerParams,
        terminating: Option<Terminating>,
        outcome: Result<(RationalQ, RationalQ)>,
    ) -> Self {
        match outcome {
            Ok((lhs, rhs)) => {
                let equal = lhs == rhs;
                VerifyReport {
                    identity: identity.to_string(),
                    params: *params,
                    terminating,
                    equal: Some(equal),
                    inadmissible: None,
                    lhs: (!equal).then(|| lhs.to_string()),
                    rhs: (!equal).then(|| rhs.to_string()),
                }
            }
            Err(Error::Inadmissible(reason)) => VerifyReport {
                identity: identity.to_string(),
                params: *params,
                terminating,
                equal: None,
                inadmissible: Some(reason),
                lhs: None,
                rhs: None,
            },
            Err(other) => VerifyReport {
                identity: identity.to_string(),
                params: *params,
                terminating,
                equal: None,
                inadmissible: Some(format!("evaluation error: {other}")),
                lhs: None,
                rhs: None,
            },
        }
    }
}

pub fn verify_dimension_change(p: &QPowerParams) -> VerifyReport {
    VerifyReport::build("dimension_change", p, None, dimension_change_sides(p))
}

pub fn verify_whipple(p: &QPowerParams) -> VerifyReport {
    VerifyReport::build("whipple", p, None, whipple_sides(p))
}

pub fn verify_inverted(p: &QPowerParams) -> VerifyReport {
    VerifyReport::build("inverted", p, None, inverted_sides(p))
}

pub fn verify_symmetric(p: &QPowerParams, terminating: Terminating) -> VerifyReport {
    VerifyReport::build(
        "symmetric",
        p,
        Some(terminating),
        symmetric_sides(p, terminating),
    )
}

pub fn verify_product_case(p: &QPowerParams) -> VerifyReport {
    VerifyReport::build("product_case", p, None, product_case_sides(p))
}

pub fn verify_single_sum_case(p: &QPowerParams, terminating: Terminating) -> VerifyReport {
    VerifyReport::build(
        "single_sum_case",
        p,
        Some(terminating),
        single_sum_case_sides(p, terminating),
    )
}

/// The identities of the transformation chain, as selectable by sweeps and
/// the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Identity {
    /// `r`-fold to `s`-fold transformation (`m, r, s` grid).
    DimensionChange,
    /// Multi-dimensional Whipple transformation (`m, r` grid).
    Whipple,
    /// Inverted Whipple form (`m, r` grid).
    Inverted,
    /// Symmetric form, b-terminating branch (`m, r, s >= 1` grid).
    SymmetricB,
    /// Symmetric form, c-terminating branch (`m, r, s >= 1` grid).
    SymmetricC,
    /// Fully multiplicative `s = 0` case (`m, r` grid).
    ProductCase,
    /// Single-sum `s = 1` case, b-terminating branch (`m, r` grid).
    SingleSumB,
    /// Single-sum `s = 1` case, c-terminating branch (`m, r` grid).
    SingleSumC,
}

impl Identity {
    pub const ALL: [Identity; 8] = [
        Identity::DimensionChange,
        Identity::Whipple,
        Identity::Inverted,
        Identity::SymmetricB,
        Identity::SymmetricC,
        Identity::ProductCase,
        Identity::SingleSumB,
        Identity::SingleSumC,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Identity::DimensionChange => "dimension_change",
            Identity::Whipple => "whipple",
            Identity::Inverted => "inverted",
            Identity::SymmetricB => "symmetric_b",
            Identity::SymmetricC => "symmetric_c",
            Identity::ProductCase => "product_case",
            Identity::SingleSumB => "single_sum_b",
            Identity::SingleSumC => "single_sum_c",
        }
    }

    fn uses_s_grid(&self) -> bool {
        matches!(
            self,
            Identity::DimensionChange | Identity::SymmetricB | Identity::SymmetricC
        )
    }

    /// Grid cells `(m, r, s)` this identity sweeps; identities without an
    /// `s` parameter collapse the `s` axis.
    pub fn grid(&self, max: i64) -> Vec<(i64, i64, i64)> {
        let mut cells = Vec::new();
        for m in 0..=max {
            for r in 0..=max {
                if self.uses_s_grid() {
                    for s in 0..=max {
                        if self.cell_feasible(m, r, s) {
                            cells.push((m, r, s));
                        }
                    }
                } else if self.cell_feasible(m, r, 1) {
                    cells.push((m, r, 0));
                }
            }
        }
        cells
    }

    fn cell_feasible(&self, m: i64, r: i64, s: i64) -> bool {
        match self {
            // r = s = 0 makes the right-hand normalization vanish, and an
            // r-fold sum needs the terminating range to reach r (otherwise
            // the left side is empty and the right side degenerate)
            Identity::DimensionChange => r + s >= 1 && r <= m + 1,
            Identity::SymmetricB => s >= 1,
            Identity::SymmetricC => s >= 1 && r <= m + 1,
            Identity::SingleSumC => r <= m + 1,
            _ => true,
        }
    }

    fn sides(&self, p: &QPowerParams) -> Result<(RationalQ, RationalQ)> {
        match self {
            Identity::DimensionChange => dimension_change_sides(p),
            Identity::Whipple => whipple_sides(p),
            Identity::Inverted => inverted_sides(p),
            Identity::SymmetricB => symmetric_sides(p, Terminating::B),
            Identity::SymmetricC => symmetric_sides(p, Terminating::C),
            Identity::ProductCase => product_case_sides(p),
            Identity::SingleSumB => single_sum_case_sides(p, Terminating::B),
            Identity::SingleSumC => single_sum_case_sides(p, Terminating::C),
        }
    }

    fn terminating(&self) -> Option<Terminating> {
        match self {
            Identity::SymmetricB | Identity::SingleSumB => Some(Terminating::B),
            Identity::SymmetricC | Identity::SingleSumC => Some(Terminating::C),
            _ => None,
        }
    }

    /// Evaluates and classifies one specialization.
    pub fn verify(&self, p: &QPowerParams) -> VerifyReport {
        VerifyReport::build(self.name(), p, self.terminating(), self.sides(p))
    }

    /// Draws a parameter candidate for one grid cell. Free exponents are
    /// uniform in `[-max_exp, max_exp]` (nonterminating sum parameters are
    /// kept at positive exponents so that exactly one parameter
    /// terminates); admissibility is decided by evaluation.
    fn sample(&self, rng: &mut ChaCha8Rng, cell: (i64, i64, i64), max_exp: i64) -> (QPowerParams, Option<Terminating>) {
        let (m, r, s) = cell;
        let any = |rng: &mut ChaCha8Rng| rng.gen_range(-max_exp..=max_exp);
        let pos = |rng: &mut ChaCha8Rng| rng.gen_range(1..=max_exp);
        match self {
            Identity::DimensionChange => (
                QPowerParams { b: any(rng), d: any(rng), f: any(rng), m, r, s, ..Default::default() },
                None,
            ),
            Identity::Whipple => (
                QPowerParams {
                    b: any(rng),
                    c: any(rng),
                    d: any(rng),
                    e: any(rng),
                    f: any(rng),
                    m,
                    r,
                    s: 0,
                },
                None,
            ),
            Identity::Inverted => (
                QPowerParams {
                    b: any(rng),
                    c: any(rng),
                    d: any(rng),
                    f: any(rng),
                    m,
                    r,
                    s: 0,
                    ..Default::default()
                },
                None,
            ),
            Identity::SymmetricB => (
                QPowerParams {
                    b: -m,
                    c: pos(rng),
                    d: any(rng),
                    f: any(rng),
                    m,
                    r,
                    s,
                    ..Default::default()
                },
                Some(Terminating::B),
            ),
            Identity::SymmetricC => (
                QPowerParams {
                    b: pos(rng),
                    c: -m,
                    d: any(rng),
                    f: any(rng),
                    m,
                    r,
                    s,
                    ..Default::default()
                },
                Some(Terminating::C),
            ),
            Identity::ProductCase => (
                QPowerParams { b: any(rng), f: any(rng), m, r, s: 0, ..Default::default() },
                None,
            ),
            Identity::SingleSumB => (
                QPowerParams {
                    b: -m,
                    c: pos(rng),
                    d: any(rng),
                    f: any(rng),
                    m,
                    r,
                    s: 1,
                    ..Default::default()
                },
                Some(Terminating::B),
            ),
            Identity::SingleSumC => (
                QPowerParams {
                    b: pos(rng),
                    c: -m,
                    d: any(rng),
                    f: any(rng),
                    m,
                    r,
                    s: 1,
                    ..Default::default()
                },
                Some(Terminating::C),
            ),
        }
    }
}

/// Configuration of a seeded verification sweep.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SweepConfig {
    pub seed: u64,
    /// Admissible samples demanded per grid cell.
    pub trials: u64,
    /// Free exponents are drawn from `[-max_exp, max_exp]`.
    pub max_exp: i64,
    /// Grid bound for `m`, `r` (and `s` where applicable).
    pub max_mrs: i64,
    /// Each exact verification is re-evaluated at this many random complex
    /// q points as a floating cross-check.
    pub numeric_checks: u32,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig { seed: 0, trials: 25, max_exp: 10, max_mrs: 3, numeric_checks: 3 }
    }
}

/// Outcome of a sweep over one identity's grid.
#[derive(Clone, Debug, Serialize)]
pub struct SweepOutcome {
    pub identity: String,
    pub cells: usize,
    pub samples: u64,
    pub rejected: u64,
    pub all_equal: bool,
    pub max_numeric_error: f64,
    /// Reports of failing samples (empty on success).
    pub failures: Vec<VerifyReport>,
}

/// Runs the seeded sweep for one identity: for every feasible grid cell,
/// draws admissible samples until `trials` of them verified, rejecting
/// inadmissible specializations (vanishing denominators).
pub fn sweep(identity: Identity, cfg: &SweepConfig) -> Result<SweepOutcome> {
    let grid = identity.grid(cfg.max_mrs);
    let mut out = SweepOutcome {
        identity: identity.name().to_string(),
        cells: grid.len(),
        samples: 0,
        rejected: 0,
        all_equal: true,
        max_numeric_error: 0.0,
        failures: Vec::new(),
    };
    for (cell_idx, &cell) in grid.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream((identity.name().len() as u64) << 32 | cell_idx as u64);
        let mut accepted = 0;
        let mut attempts = 0;
        while accepted < cfg.trials {
            attempts += 1;
            if attempts > 400 * cfg.trials {
                return Err(Error::ResourceLimit(format!(
                    "sweep for {} cell {:?} cannot find admissible samples",
                    identity.name(),
                    cell
                )));
            }
            let (params, _term) = identity.sample(&mut rng, cell, cfg.max_exp);
            let sides = identity.sides(&params);
            let report =
                VerifyReport::build(identity.name(), &params, identity.terminating(), sides);
            if !report.is_admissible() {
                out.rejected += 1;
                continue;
            }
            accepted += 1;
            out.samples += 1;
            if !report.passed() {
                out.all_equal = false;
                out.failures.push(report);
                continue;
            }
            // floating cross-check of the same exact verification
            let (lhs, rhs) = identity
                .sides(&params)
                .expect("sides evaluated admissibly a moment ago");
            let err = numeric_crosscheck(&lhs, &rhs, cfg, &mut rng);
            out.max_numeric_error = out.max_numeric_error.max(err);
        }
    }
    Ok(out)
}

/// Evaluates both (already exactly equal) sides at random complex q and
/// returns the worst relative disagreement of the floating route.
fn numeric_crosscheck(
    lhs: &RationalQ,
    rhs: &RationalQ,
    cfg: &SweepConfig,
    rng: &mut ChaCha8Rng,
) -> f64 {
    let mut worst = 0.0f64;
    let mut done = 0;
    let mut guard = 0;
    while done < cfg.numeric_checks && guard < 50 {
        guard += 1;
        let radius = rng.gen_range(0.3..0.7);
        let angle = rng.gen_range(0.0..std::f64::consts::TAU);
        let z = Complex64::from_polar(radius, angle);
        let (Ok(lv), Ok(rv)) = (lhs.eval_complex(z), rhs.eval_complex(z)) else {
            continue;
        };
        let scale = lv.norm().max(rv.norm()).max(1e-300);
        worst = worst.max((lv - rv).norm() / scale);
        done += 1;
    }
    worst
}

// ---------------------------------------------------------------------------
// Exact p = 0 evaluation of the elliptic transformation
// ---------------------------------------------------------------------------

/// Integer q-power exponents for all six parameters of the elliptic
/// transformation, used to evaluate it exactly at `p = 0`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct EllipticQPowers {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
    pub e: i64,
    pub f: i64,
    pub m: i64,
    pub r: i64,
}

/// Both sides of the elliptic transformation at `p = 0` with every
/// parameter an integer power of q — each theta factor collapses to
/// `1 - q^exponent` and both sides become exact rational functions. This
/// is the oracle for the floating elliptic evaluator.
pub fn elliptic_p0_sides(p: &EllipticQPowers) -> Result<(RationalQ, RationalQ)> {
    let EllipticQPowers { a, b, c, d, e, f, m, r } = *p;
    if m < 0 || r < 1 {
        return Err(Error::Inadmissible("requires m >= 0 and r >= 1".into()));
    }
    let lam = 2 * a + 2 - r - b - c - d;

    let side = |root: i64, prods: [i64; 8], denoms: [i64; 8]| -> Result<RationalQ> {
        let mut terms = Vec::new();
        for tuple in increasing_tuples(r as usize, m) {
            let mut t = QProd::one();
            q_pow_weighted(&mut t, &tuple);
            for x in 0..tuple.len() {
                for y in x + 1..tuple.len() {
                    t.mul_one_minus_q(tuple[x] - tuple[y], 2);
                    t.mul_one_minus_q(root + tuple[x] + tuple[y], 2);
                }
            }
            for &k in &tuple {
                t.mul_one_minus_q(root + 2 * k, 1);
                t.mul_one_minus_q(root, -1);
                for base in prods {
                    t.mul_pochhammer(base, 1, k);
                }
                for base in denoms {
                    t.mul_pochhammer_pow(base, 1, k, -1);
                }
            }
            terms.push(t);
        }
        sum_strict(&terms)
    };

    let lhs = side(
        a,
        [a, b, c, d, e, f, lam + a + 2 - r + m - e - f, -m],
        [1, a + 1 - b, a + 1 - c, a + 1 - d, a + 1 - e, a + 1 - f, e + f + r - 1 - m - lam, a + 1 + m],
    )?;

    let mut pre = QProd::one();
    for i in 1..=r {
        for base in [b, c, d, e + f - a] {
            pre.mul_pochhammer(base, 1, i - 1);
        }
        for base in [lam + b - a, lam + c - a, lam + d - a, e + f - lam] {
            pre.mul_pochhammer_pow(base, 1, i - 1, -1);
        }
        pre.mul_pochhammer(a + 1, 1, m);
        pre.mul_pochhammer(a + 1 - e - f, 1, m + 1 - r);
        pre.mul_pochhammer(lam + 1 - e, 1, m - i + 1);
        pre.mul_pochhammer(lam + 1 - f, 1, m - i + 1);
        pre.mul_pochhammer_pow(lam + 1, 1, m, -1);
        pre.mul_pochhammer_pow(lam + 1 - e - f, 1, m + 1 - r, -1);
        pre.mul_pochhammer_pow(a + 1 - e, 1, m - i + 1, -1);
        pre.mul_pochhammer_pow(a + 1 - f, 1, m - i + 1, -1);
    }
    let rhs_sum = side(
        lam,
        [lam, lam + b - a, lam + c - a, lam + d - a, e, f, lam + a + 2 - r + m - e - f, -m],
        [1, a + 1 - b, a + 1 - c, a + 1 - d, lam + 1 - e, lam + 1 - f, e + f + r - 1 - m - a, lam + 1 + m],
    )?;
    if pre.has_vanished_factors() {
        return Err(Error::Inadmissible(
            "a prefactor shifted factorial vanishes at this specialization".to_string(),
        ));
    }
    let rhs = pre.to_rational()?.mul(&rhs_sum);
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::LaurentPoly;

    #[test]
    fn tuples_basic() {
        assert_eq!(increasing_tuples(0, 5), vec![Vec::<i64>::new()]);
        assert_eq!(increasing_tuples(0, -1), vec![Vec::<i64>::new()]);
        assert!(increasing_tuples(2, 0).is_empty());
        assert_eq!(
            increasing_tuples(2, 2),
            vec![vec![0, 1], vec![0, 2], vec![1, 2]]
        );
        assert_eq!(increasing_tuples(3, 10).len(), 165); // C(11,3)
    }

    #[test]
    fn multisum_examples() {
        assert!(multisum(0, 7, |_| RationalQ::from_i64(5)).is_one());
        let geom = multisum(1, 2, |t| RationalQ::q_power(t[0]));
        assert_eq!(
            geom,
            RationalQ::from_poly(crate::qcombinat::q_int(3))
        );
        assert!(multisum(2, 1, |_| RationalQ::one()).is_one());
    }

    #[test]
    fn poch_ratio_examples() {
        // (q^3;q)_inf / (q;q)_inf = 1/((1-q)(1-q^2))
        let r = finite_poch_ratio(&[3], &[1]).unwrap();
        let den = crate::qcombinat::q_pochhammer_power(1, 1, 2);
        assert_eq!(r, RationalQ::new(LaurentPoly::one(), den).unwrap());
        assert!(finite_poch_ratio(&[1], &[1]).unwrap().is_one());
        assert!(finite_poch_ratio(&[1, 2], &[1]).is_err());
    }

    #[test]
    fn symmetric_block_matches_sorted_ratio_on_terminating_instances() {
        // b = q^-beta, c = q^-m: the branch pairing and the sorted pairing
        // of the four-product block agree (both are the finite reduction).
        for (beta, m, s, r, f) in [(2i64, 3i64, 1i64, 2i64, 6i64), (2, 2, 2, 1, 5), (1, 0, 1, 1, 4)] {
            for i in 1..=r {
                let b = -beta;
                let c = -m;
                let block = symmetric_block(b, c, f, s, r, i, Terminating::B);
                let sorted = poch_ratio_prod(
                    &[1 - f, b + c + s + r + i - 1 - f],
                    &[c + i - f, b + s + i - f],
                )
                .unwrap();
                let (Ok(lhs), Ok(rhs)) = (block.to_rational(), sorted.to_rational()) else {
                    continue;
                };
                assert_eq!(lhs, rhs, "beta={beta} m={m} s={s} r={r} i={i}");
            }
        }
    }

    #[test]
    fn dimension_change_trivial_and_small() {
        // m=0, r=1, s=1: the left side is the single k_1 = 0 term
        let p = QPowerParams { b: 2, d: 3, f: 5, m: 0, r: 1, s: 1, ..Default::default() };
        let rep = verify_dimension_change(&p);
        assert!(rep.passed(), "{rep:?}");
        let p = QPowerParams { b: 1, d: 2, f: 5, m: 2, r: 1, s: 1, ..Default::default() };
        assert!(verify_dimension_change(&p).passed());
        let p = QPowerParams { b: 2, d: 5, f: 9, m: 3, r: 2, s: 2, ..Default::default() };
        let rep = verify_dimension_change(&p);
        assert!(rep.passed(), "{rep:?}");
        // an adversarial combination d + 1 - r - b = 0 vanishes inside the
        // right-hand denominators and is rejected, not failed
        let p = QPowerParams { b: 2, d: 3, f: 7, m: 3, r: 2, s: 2, ..Default::default() };
        assert!(!verify_dimension_change(&p).is_admissible());
    }

    #[test]
    fn whipple_small() {
        let p = QPowerParams { b: 1, c: 2, d: 4, e: 3, f: 6, m: 2, r: 1, s: 0 };
        assert!(verify_whipple(&p).passed());
        let p = QPowerParams { b: 1, c: 3, d: 5, e: 2, f: 8, m: 3, r: 2, s: 0 };
        assert!(verify_whipple(&p).passed());
        // m=0: both sides are empty-region sums
        let p = QPowerParams { b: 2, c: 2, d: 3, e: 4, f: 5, m: 0, r: 1, s: 0 };
        assert!(verify_whipple(&p).passed());
    }

    #[test]
    fn inverted_small() {
        let p = QPowerParams { b: 1, c: 2, d: 3, f: 6, m: 2, r: 1, ..Default::default() };
        assert!(verify_inverted(&p).passed());
        let p = QPowerParams { b: 1, c: 2, d: 4, f: 7, m: 2, r: 2, ..Default::default() };
        assert!(verify_inverted(&p).passed());
    }

    #[test]
    fn symmetric_small_both_branches() {
        let p = QPowerParams { b: 1, c: -2, d: 3, f: 6, m: 2, r: 1, s: 1, ..Default::default() };
        let rep = verify_symmetric(&p, Terminating::C);
        assert!(rep.passed(), "{rep:?}");
        let p = QPowerParams { b: -2, c: 2, d: 4, f: 7, m: 2, r: 2, s: 1, ..Default::default() };
        let rep = verify_symmetric(&p, Terminating::B);
        assert!(rep.passed(), "{rep:?}");
        // c-terminating with m = 0
        let p = QPowerParams { b: 3, c: 0, d: 2, f: 5, m: 0, r: 1, s: 1, ..Default::default() };
        assert!(verify_symmetric(&p, Terminating::C).passed());
    }

    #[test]
    fn product_case_small() {
        let p = QPowerParams { b: 0, f: 0, m: 0, r: 0, ..Default::default() };
        assert!(verify_product_case(&p).passed());
        let p = QPowerParams { b: 1, f: 5, m: 2, r: 1, ..Default::default() };
        assert!(verify_product_case(&p).passed());
        let p = QPowerParams { b: 2, f: 6, m: 3, r: 2, ..Default::default() };
        assert!(verify_product_case(&p).passed());
    }

    #[test]
    fn single_sum_small() {
        let p = QPowerParams { b: 1, c: -2, d: 3, f: 6, r: 1, m: 2, s: 1, ..Default::default() };
        assert!(verify_single_sum_case(&p, Terminating::C).passed());
        let p = QPowerParams { b: -3, c: 1, d: 2, f: 7, r: 2, m: 3, s: 1, ..Default::default() };
        let rep = verify_single_sum_case(&p, Terminating::B);
        assert!(rep.passed(), "{rep:?}");
        // r = 0: both sides reduce to their empty normalizations
        let p = QPowerParams { b: 2, c: -1, d: 3, f: 4, r: 0, m: 1, s: 1, ..Default::default() };
        assert!(verify_single_sum_case(&p, Terminating::C).passed());
    }

    #[test]
    fn inadmissible_is_reported_not_failed() {
        // f = q^0 vanishes inside the left denominators
        let p = QPowerParams { b: 1, d: 2, f: 0, m: 2, r: 1, s: 1, ..Default::default() };
        let rep = verify_dimension_change(&p);
        assert!(!rep.is_admissible());
        assert_eq!(rep.equal, None);
    }

    #[test]
    fn quick_sweep_two_identities() {
        let cfg = SweepConfig { trials: 3, max_mrs: 2, ..Default::default() };
        for id in [Identity::ProductCase, Identity::Inverted] {
            let out = sweep(id, &cfg).unwrap();
            assert!(out.all_equal, "{out:?}");
            assert!(out.max_numeric_error < 1e-10);
        }
    }

    #[test]
    fn elliptic_p0_exact_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(4242);
        let mut checked = 0;
        let mut attempts = 0;
        while checked < 4 {
            attempts += 1;
            assert!(attempts < 4000, "no admissible elliptic p=0 instances found");
            let p = EllipticQPowers {
                a: rng.gen_range(-12..=12),
                b: rng.gen_range(-6..=6),
                c: rng.gen_range(-6..=6),
                d: rng.gen_range(-6..=6),
                e: rng.gen_range(-6..=6),
                f: rng.gen_range(-6..=6),
                m: rng.gen_range(0..=2),
                r: rng.gen_range(1..=2),
            };
            let Ok((lhs, rhs)) = elliptic_p0_sides(&p) else {
                continue;
            };
            assert_eq!(lhs, rhs, "{p:?}");
            checked += 1;
        }
    }
}
