//! Generating-function evaluators for the major index of skew standard
//! Young tableaux.
//!
//! Four independent routes to the same polynomial:
//!
//! - [`det_majgf`]: `[cells]_q! * det(1/[lambda_i - i - mu_j + j]_q!)`,
//!   evaluated by fraction-free elimination (or, for large staircase
//!   shapes, by modular evaluation and interpolation of the row-scaled
//!   polynomial matrix);
//! - [`staircase_gf`]: the multi-dimensional basic hypergeometric sums for
//!   staircase-minus-rectangle shapes, one form per parity of the offset;
//! - [`closed_staircase`] and [`closed_staircase_plus1`]: product formulas
//!   for offsets 0 and 1;
//! - [`laplace_sum`]: the Laplace expansion of the determinant along the
//!   rectangle columns, as a sum of base-`q^-2` hypergeometric products
//!   (rational in `q` termwise, polynomial in total).
//!
//! [`lemma_det_rhs`] is the closed form of the auxiliary determinant
//! `det(1/[X_i + j]_q!)` that powers the Laplace route.

mod bareiss;
mod modular;
mod staircase;

pub use bareiss::bareiss_det;
pub use staircase::{
    closed_staircase, closed_staircase_plus1, laplace_sum, laplace_sum_with_bound,
    staircase_gf, staircase_gf_factored, thm1_even, thm1_odd,
};

use crate::factored::{QProd, ZeroResolution};
use crate::qseries::{LaurentPoly, RationalQ};
use crate::tableaux::SkewShape;
use crate::{Error, Result};

pub(crate) fn binom2(x: i64) -> i64 {
    debug_assert!(x >= 0);
    x * (x - 1) / 2
}

pub(crate) fn binom3(x: i64) -> i64 {
    debug_assert!(x >= 0);
    x * (x - 1) * (x - 2) / 6
}

/// A generating function kept as `prefactor * dense`, with the prefactor a
/// factored product of `(1 - q^k)` powers and the dense part a (usually
/// small) reduced rational function. Expansion to the coefficient vector
/// is deferred: for large staircase shapes the prefactor holds hundreds of
/// thousands of degrees' worth of q-factorials that the evaluators never
/// need to expand to compare or benchmark.
#[derive(Clone, Debug)]
pub struct GfForm {
    pub prefactor: QProd,
    pub dense: RationalQ,
}

impl GfForm {
    pub fn from_poly(p: LaurentPoly) -> Self {
        GfForm { prefactor: QProd::one(), dense: RationalQ::from_poly(p) }
    }

    /// Expands to the generating polynomial, asserting polynomiality.
    pub fn expand(&self) -> Result<LaurentPoly> {
        if self.prefactor.is_zero_value() || self.dense.is_zero() {
            return Ok(LaurentPoly::zero());
        }
        let (factors, mut negative, q_pow, zeros) = self.prefactor.factor_view();
        match zeros {
            ZeroResolution::Zero => return Ok(LaurentPoly::zero()),
            ZeroResolution::Pole => {
                return Err(Error::Inadmissible(
                    "prefactor has a vanishing denominator".into(),
                ))
            }
            ZeroResolution::Finite { extra_negative } => negative ^= extra_negative,
        }
        let mut p = self.dense.numerator().clone();
        for (&k, &e) in factors.iter() {
            for _ in 0..e.max(0) {
                p = p.mul_one_minus_qk(k);
            }
        }
        for (&k, &e) in factors.iter() {
            for _ in 0..(-e).max(0) {
                p = p.div_one_minus_qk(k).ok_or_else(|| Error::NotAPolynomial {
                    denominator: format!("1 - q^{k}"),
                    min_exponent: p.min_exponent(),
                })?;
            }
        }
        if !self.dense.denominator().is_one() {
            p = p
                .exact_div(self.dense.denominator())
                .ok_or_else(|| Error::NotAPolynomial {
                    denominator: self.dense.denominator().to_text(),
                    min_exponent: p.min_exponent(),
                })?;
        }
        p = p.shift(q_pow);
        if negative {
            p = p.neg();
        }
        if !p.is_zero() && p.min_exponent() < 0 {
            return Err(Error::NotAPolynomial {
                denominator: "1".into(),
                min_exponent: p.min_exponent(),
            });
        }
        Ok(p)
    }

    /// Exact equality without expanding the shared prefactor mass: moves
    /// the net factored quotient to one side and compares cross-multiplied
    /// dense parts.
    pub fn eq_exact(&self, other: &GfForm) -> Result<bool> {
        let a_zero = self.is_zero()?;
        let b_zero = other.is_zero()?;
        if a_zero || b_zero {
            return Ok(a_zero == b_zero);
        }
        let mut delta = self.prefactor.clone();
        delta.div_assign(&other.prefactor);
        let (factors, mut negative, q_pow, zeros) = delta.factor_view();
        match zeros {
            // the quotient of two finite nonzero values is finite nonzero
            ZeroResolution::Zero | ZeroResolution::Pole => return Ok(false),
            ZeroResolution::Finite { extra_negative } => negative ^= extra_negative,
        }
        let mut lhs = self.dense.numerator().mul(other.dense.denominator());
        let mut rhs = other.dense.numerator().mul(self.dense.denominator());
        for (&k, &e) in factors.iter() {
            for _ in 0..e.max(0) {
                lhs = lhs.mul_one_minus_qk(k);
            }
            for _ in 0..(-e).max(0) {
                rhs = rhs.mul_one_minus_qk(k);
            }
        }
        lhs = lhs.shift(q_pow);
        if negative {
            lhs = lhs.neg();
        }
        Ok(lhs == rhs)
    }

    fn is_zero(&self) -> Result<bool> {
        if self.prefactor.is_zero_value() || self.dense.is_zero() {
            return Ok(true);
        }
        let (_, _, _, zeros) = self.prefactor.factor_view();
        match zeros {
            ZeroResolution::Zero => Ok(true),
            ZeroResolution::Pole => Err(Error::Inadmissible(
                "prefactor has a vanishing denominator".into(),
            )),
            ZeroResolution::Finite { .. } => Ok(false),
        }
    }

    /// Degree of the value as a rational function of q.
    pub fn degree(&self) -> Option<i64> {
        if self.dense.is_zero() {
            return None;
        }
        let pre = self.prefactor.degree()?;
        Some(pre + self.dense.numerator().max_exponent()
            - self.dense.denominator().max_exponent())
    }
}

/// Entry data of the scaled determinant: `d[i][j] = lambda_i - i - mu_j + j`
/// (1-based in the formula, 0-based here) and the row maxima.
pub(crate) struct DetMatrix {
    pub d: Vec<Vec<i64>>,
    pub row_max: Vec<i64>,
    pub cells: i64,
}

pub(crate) fn det_matrix(shape: &SkewShape) -> DetMatrix {
    let n = shape.rows();
    let lambda = shape.lambda();
    let mu = shape.mu();
    let d: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| lambda[i] as i64 - mu[j] as i64 + j as i64 - i as i64)
                .collect()
        })
        .collect();
    let row_max = d
        .iter()
        .map(|row| row.iter().copied().max().unwrap_or(0))
        .collect();
    DetMatrix { d, row_max, cells: shape.cell_count() as i64 }
}

/// Upper bound on the degree of the scaled determinant. Every monomial of
/// the determinant is a product over a permutation, so its degree is at
/// most `sum_i deg E_{i,sigma(i)}` for the best permutation; with
/// `d_{ij} = c_i + e_j`, `c` decreasing, `e` nondecreasing and the degree
/// convex decreasing in `d`, the rearrangement inequality says the
/// diagonal permutation maximizes that sum.
pub(crate) fn scaled_det_degree_bound(m: &DetMatrix) -> i64 {
    let t = |x: i64| {
        let x = x.max(0);
        x * (x - 1) / 2
    };
    m.d.iter()
        .enumerate()
        .zip(&m.row_max)
        .map(|((i, row), &rm)| t(rm) - t(row[i]))
        .sum()
}

/// The major-index generating function by the determinantal formula, in
/// deferred factored form: `[cells]_q! / prod_i [D_i]_q!` times the
/// determinant of the row-scaled polynomial matrix.
pub fn det_majgf_factored(shape: &SkewShape) -> Result<GfForm> {
    let mat = det_matrix(shape);
    let n = shape.rows();
    let mut prefactor = QProd::one();
    prefactor.mul_q_factorial(mat.cells, 1);
    for &rm in &mat.row_max {
        prefactor.mul_recip_q_factorial(rm, 1);
    }
    let det = if scaled_det_degree_bound(&mat) <= 900 && n <= 10 {
        let rows: Vec<Vec<LaurentPoly>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| scaled_entry_poly(mat.d[i][j], mat.row_max[i]))
                    .collect()
            })
            .collect();
        bareiss_det(rows)
    } else {
        modular::modular_scaled_det(&mat)?
    };
    Ok(GfForm { prefactor, dense: RationalQ::from_poly(det) })
}

fn scaled_entry_poly(d: i64, row_max: i64) -> LaurentPoly {
    if d < 0 {
        return LaurentPoly::zero();
    }
    let mut acc = LaurentPoly::one();
    for k in (d + 1)..=row_max {
        acc = acc.mul(&crate::qcombinat::q_int(k as u64));
    }
    acc
}

/// The generating function `sum_T q^maj(T)` by the determinantal formula,
/// expanded and checked: the result must be a polynomial with nonnegative
/// coefficients (anything else indicates an arithmetic bug, not bad input).
pub fn det_majgf(shape: &SkewShape) -> Result<LaurentPoly> {
    let gf = det_majgf_factored(shape)?.expand()?;
    if !gf.is_coeff_nonnegative() {
        return Err(Error::Domain(format!(
            "determinant evaluator produced negative coefficients for {shape}"
        )));
    }
    Ok(gf)
}

/// Closed form of the auxiliary determinant `det_{1<=i,j<=s}(1/[X_i+j]_q!)`:
/// `q^{2 C(s+1,3) + sum (i-1) X_i} prod_i 1/[X_i+s]_q! prod_{i<j} [X_i-X_j]_q`.
pub fn lemma_det_rhs(xs: &[i64]) -> RationalQ {
    let s = xs.len() as i64;
    let mut p = QProd::one();
    p.mul_q_pow(2 * binom3(s + 1));
    for (i, &x) in xs.iter().enumerate() {
        p.mul_q_pow(i as i64 * x);
        p.mul_recip_q_factorial(x + s, 1);
    }
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            p.mul_q_int(xs[i] - xs[j], 1);
        }
    }
    p.to_rational()
        .expect("lemma right-hand side has no vanishing denominators")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcombinat::q_factorial_recip;
    use crate::tableaux::{maj_gf_oracle, SkewShape, StaircaseSpec};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn shape(text: &str) -> SkewShape {
        SkewShape::parse(text).unwrap()
    }

    /// Direct determinant of `(1/[X_i+j]_q!)` over rational functions.
    fn lemma_det_direct(xs: &[i64]) -> RationalQ {
        let s = xs.len();
        fn det(m: &[Vec<RationalQ>]) -> RationalQ {
            let n = m.len();
            if n == 0 {
                return RationalQ::one();
            }
            let mut acc = RationalQ::zero();
            for j in 0..n {
                let minor: Vec<Vec<RationalQ>> = (1..n)
                    .map(|i| {
                        (0..n)
                            .filter(|&jj| jj != j)
                            .map(|jj| m[i][jj].clone())
                            .collect()
                    })
                    .collect();
                let term = m[0][j].mul(&det(&minor));
                acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            acc
        }
        let m: Vec<Vec<RationalQ>> = (0..s)
            .map(|i| (1..=s as i64).map(|j| q_factorial_recip(xs[i] + j)).collect())
            .collect();
        det(&m)
    }

    #[test]
    fn lemma_trivial_cases() {
        assert!(lemma_det_rhs(&[0]).is_one()); // 1/[1]_q! = 1
        assert_eq!(lemma_det_rhs(&[]), RationalQ::one());
    }

    #[test]
    fn lemma_two_by_two() {
        assert_eq!(lemma_det_rhs(&[1, 0]), lemma_det_direct(&[1, 0]));
    }

    #[test]
    fn lemma_matches_direct_determinant_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(7777);
        for _ in 0..60 {
            let s = rng.gen_range(1..=4usize);
            let mut xs: Vec<i64> = (0..s).map(|_| rng.gen_range(-3i64..=8)).collect();
            xs.sort_unstable();
            xs.dedup();
            assert_eq!(
                lemma_det_rhs(&xs),
                lemma_det_direct(&xs),
                "X = {xs:?}"
            );
        }
        // repeated X values force a zero determinant on both sides
        assert!(lemma_det_rhs(&[2, 2]).is_zero());
        assert!(lemma_det_direct(&[2, 2]).is_zero());
        // negative X_i + s vanishing entries
        assert_eq!(lemma_det_rhs(&[-3, 0]), lemma_det_direct(&[-3, 0]));
    }

    #[test]
    fn det_matches_oracle_small() {
        for text in ["2,1", "3,2", "2,2/1", "4,3,2/1", "3,3,1/1", "5,4,3/2,2", "1"] {
            let s = shape(text);
            assert_eq!(
                det_majgf(&s).unwrap(),
                maj_gf_oracle(&s).unwrap(),
                "shape {text}"
            );
        }
        assert!(det_majgf(&SkewShape::empty()).unwrap().is_one());
    }

    #[test]
    fn det_matches_oracle_figure_shape() {
        let spec = StaircaseSpec::new(6, 6, 3, 2).unwrap();
        let s = spec.to_skew_shape();
        assert_eq!(det_majgf(&s).unwrap(), maj_gf_oracle(&s).unwrap());
    }

    #[test]
    fn gfform_equality() {
        let a = det_majgf_factored(&shape("4,3,2/1")).unwrap();
        let b = GfForm::from_poly(maj_gf_oracle(&shape("4,3,2/1")).unwrap());
        assert!(a.eq_exact(&b).unwrap());
        let c = GfForm::from_poly(maj_gf_oracle(&shape("4,3,2")).unwrap());
        assert!(!a.eq_exact(&c).unwrap());
    }

    #[test]
    fn gfform_degree() {
        let a = det_majgf_factored(&shape("4,3,2/1")).unwrap();
        let gf = a.expand().unwrap();
        assert_eq!(a.degree(), Some(gf.max_exponent()));
    }
}
