//! Fraction-free determinant of a polynomial matrix.

use crate::qseries::LaurentPoly;

/// Bareiss elimination over `Z[q, q^-1]`: every division is exact, so
/// intermediate entries stay minors of the input matrix. Pivoting takes the
/// first nonzero entry in column order; with exact arithmetic this affects
/// only performance. The empty matrix has determinant 1.
pub fn bareiss_det(mut m: Vec<Vec<LaurentPoly>>) -> LaurentPoly {
    let n = m.len();
    if n == 0 {
        return LaurentPoly::one();
    }
    debug_assert!(m.iter().all(|row| row.len() == n));
    let mut negated = false;
    let mut prev = LaurentPoly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return LaurentPoly::zero();
            };
            m.swap(k, swap);
            negated = !negated;
        }
        for i in k + 1..n {
            if m[i][k].is_zero() {
                // row update still rescales by the pivot
                for j in k + 1..n {
                    if !m[i][j].is_zero() {
                        m[i][j] = m[k][k]
                            .mul(&m[i][j])
                            .exact_div(&prev)
                            .expect("Bareiss division must be exact");
                    }
                }
                continue;
            }
            for j in k + 1..n {
                let num = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num
                    .exact_div(&prev)
                    .expect("Bareiss division must be exact");
            }
            m[i][k] = LaurentPoly::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negated {
        det.neg()
    } else {
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(v: i64) -> LaurentPoly {
        LaurentPoly::from_i64(v)
    }

    /// Cofactor expansion, the slow reference.
    fn naive_det(m: &[Vec<LaurentPoly>]) -> LaurentPoly {
        let n = m.len();
        if n == 0 {
            return LaurentPoly::one();
        }
        if n == 1 {
            return m[0][0].clone();
        }
        let mut acc = LaurentPoly::zero();
        for j in 0..n {
            if m[0][j].is_zero() {
                continue;
            }
            let minor: Vec<Vec<LaurentPoly>> = (1..n)
                .map(|i| {
                    (0..n)
                        .filter(|&jj| jj != j)
                        .map(|jj| m[i][jj].clone())
                        .collect()
                })
                .collect();
            let term = m[0][j].mul(&naive_det(&minor));
            acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
        }
        acc
    }

    #[test]
    fn integers_and_singulars() {
        let m = vec![vec![c(2), c(3)], vec![c(4), c(5)]];
        assert_eq!(bareiss_det(m), c(-2));
        let m = vec![vec![c(1), c(2)], vec![c(2), c(4)]];
        assert!(bareiss_det(m).is_zero());
        assert_eq!(bareiss_det(Vec::new()), LaurentPoly::one());
    }

    #[test]
    fn zero_pivot_needs_swap() {
        let m = vec![
            vec![c(0), c(1), c(2)],
            vec![c(1), c(0), c(1)],
            vec![c(2), c(1), c(0)],
        ];
        assert_eq!(bareiss_det(m.clone()), naive_det(&m));
    }

    #[test]
    fn random_polynomial_matrices_match_cofactor_expansion() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for n in 1..=4usize {
            for _ in 0..8 {
                let m: Vec<Vec<LaurentPoly>> = (0..n)
                    .map(|_| {
                        (0..n)
                            .map(|_| {
                                let len = rng.gen_range(0..3);
                                LaurentPoly::new(
                                    rng.gen_range(-1..2),
                                    (0..len)
                                        .map(|_| BigInt::from(rng.gen_range(-3i64..4)))
                                        .collect(),
                                )
                            })
                            .collect()
                    })
                    .collect();
                assert_eq!(bareiss_det(m.clone()), naive_det(&m));
            }
        }
    }
}
