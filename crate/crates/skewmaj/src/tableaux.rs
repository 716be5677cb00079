//! Skew shapes, the staircase-minus-rectangle family, brute-force
//! enumeration of standard Young tableaux, and the major index.
//!
//! The enumerator is the independent oracle for every formula evaluator in
//! [`crate::genfun`]: it never touches the determinant or the
//! hypergeometric sums, only the combinatorial definition. Entries
//! `1, 2, ..., |shape|` are placed one at a time into any cell whose left
//! and upper neighbours (within the skew diagram) are already filled, which
//! generates each tableau exactly once; `maj` accumulates incrementally
//! during the backtracking.

use num_bigint::BigInt;
use num_traits::Zero;
use std::fmt;

use crate::qseries::LaurentPoly;
use crate::{Error, Result};

/// Default cap on the number of cells the enumerator accepts.
pub const DEFAULT_CELL_LIMIT: usize = 16;

/// A skew shape `lambda/mu`: both partitions weakly decreasing, `mu`
/// padded with zeros to the length of `lambda`, `mu_i <= lambda_i`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SkewShape {
    lambda: Vec<u64>,
    mu: Vec<u64>,
}

impl SkewShape {
    pub fn new(lambda: Vec<u64>, mu: Vec<u64>) -> Result<Self> {
        if mu.len() > lambda.len() && mu[lambda.len()..].iter().any(|&x| x > 0) {
            return Err(Error::InvalidInput(format!(
                "inner shape has more parts than outer: {mu:?} vs {lambda:?}"
            )));
        }
        let mut mu = mu;
        mu.truncate(lambda.len());
        mu.resize(lambda.len(), 0);
        for w in lambda.windows(2) {
            if w[0] < w[1] {
                return Err(Error::InvalidInput(format!(
                    "outer shape not weakly decreasing: {} < {}",
                    w[0], w[1]
                )));
            }
        }
        for w in mu.windows(2) {
            if w[0] < w[1] {
                return Err(Error::InvalidInput(format!(
                    "inner shape not weakly decreasing: {} < {}",
                    w[0], w[1]
                )));
            }
        }
        for (i, (&l, &m)) in lambda.iter().zip(&mu).enumerate() {
            if m > l {
                return Err(Error::InvalidInput(format!(
                    "inner part exceeds outer part in row {}: {m} > {l}",
                    i + 1
                )));
            }
        }
        Ok(SkewShape { lambda, mu })
    }

    /// A straight shape (empty inner partition).
    pub fn straight(lambda: Vec<u64>) -> Result<Self> {
        SkewShape::new(lambda, Vec::new())
    }

    pub fn empty() -> Self {
        SkewShape { lambda: Vec::new(), mu: Vec::new() }
    }

    pub fn lambda(&self) -> &[u64] {
        &self.lambda
    }

    pub fn mu(&self) -> &[u64] {
        &self.mu
    }

    /// Number of rows of the outer partition (including empty skew rows).
    pub fn rows(&self) -> usize {
        self.lambda.len()
    }

    pub fn cell_count(&self) -> usize {
        self.lambda
            .iter()
            .zip(&self.mu)
            .map(|(&l, &m)| (l - m) as usize)
            .sum()
    }

    /// Parses `"6,5,4,3,2,1/3,3"`; the part after `/` is optional.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(SkewShape::empty());
        }
        let (outer, inner) = match text.split_once('/') {
            Some((a, b)) => (a, Some(b)),
            None => (text, None),
        };
        let parse_parts = |s: &str| -> Result<Vec<u64>> {
            let s = s.trim();
            if s.is_empty() {
                return Ok(Vec::new());
            }
            s.split(',')
                .map(|p| {
                    p.trim()
                        .parse::<u64>()
                        .map_err(|_| Error::InvalidInput(format!("bad partition part: {p:?}")))
                })
                .collect()
        };
        SkewShape::new(parse_parts(outer)?, parse_parts(inner.unwrap_or(""))?)
    }

    /// ASCII diagram in English convention, `.` marking removed cells.
    pub fn ascii_diagram(&self) -> String {
        let mut out = String::new();
        for (&l, &m) in self.lambda.iter().zip(&self.mu) {
            for c in 0..l {
                out.push_str(if c < m { " ." } else { " #" });
            }
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for SkewShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        if self.mu.iter().all(|&m| m == 0) {
            write!(f, "{}", join(&self.lambda))
        } else {
            let trimmed: Vec<u64> = self.mu.iter().copied().filter(|&m| m > 0).collect();
            write!(f, "{}/{}", join(&self.lambda), join(&trimmed))
        }
    }
}

/// Parameters `(N, n, m, r)` of the shape `(N, N-1, ..., N-n+1)/(m^r)`.
///
/// `top` is N (the longest row), `rows` is n, and the removed rectangle has
/// `rect_height` = r rows of width `rect_width` = m. Requires `N >= n`,
/// `N - r + 1 >= m`, and `r <= n` (the hypergeometric formulas are not
/// established beyond `r <= n`, so such inputs are rejected rather than
/// guessed at).
#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize, serde::Deserialize)]
pub struct StaircaseSpec {
    pub top: u64,
    pub rows: u64,
    pub rect_width: u64,
    pub rect_height: u64,
}

impl StaircaseSpec {
    pub fn new(top: u64, rows: u64, rect_width: u64, rect_height: u64) -> Result<Self> {
        let s = StaircaseSpec { top, rows, rect_width, rect_height };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let (nn, n, m, r) = (self.top, self.rows, self.rect_width, self.rect_height);
        if nn < n {
            return Err(Error::InvalidInput(format!("requires N >= n, got N={nn}, n={n}")));
        }
        if nn + 1 < m + r {
            return Err(Error::InvalidInput(format!(
                "requires N - r + 1 >= m, got N={nn}, r={r}, m={m}"
            )));
        }
        if r > n {
            return Err(Error::InvalidInput(format!("requires r <= n, got r={r}, n={n}")));
        }
        Ok(())
    }

    /// The staircase offset `s = N - n`.
    pub fn offset(&self) -> u64 {
        self.top - self.rows
    }

    pub fn to_skew_shape(&self) -> SkewShape {
        let lambda: Vec<u64> = (0..self.rows).map(|i| self.top - i).collect();
        let mu: Vec<u64> = (0..self.rows)
            .map(|i| if i < self.rect_height { self.rect_width } else { 0 })
            .collect();
        SkewShape::new(lambda, mu).expect("validated spec always yields a valid shape")
    }

    pub fn cell_count(&self) -> usize {
        self.to_skew_shape().cell_count()
    }
}

impl fmt::Display for StaircaseSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "N={},n={},m={},r={}",
            self.top, self.rows, self.rect_width, self.rect_height
        )
    }
}

/// A standard Young tableau, stored as the row index of each entry.
#[derive(Clone, Debug)]
pub struct Tableau {
    pub shape: SkewShape,
    /// `row_of[v-1]` is the row (0-based) containing entry `v`.
    pub row_of: Vec<usize>,
}

/// Major index: the sum of all `i` such that `i+1` lies in a lower row
/// than `i`.
pub fn maj(t: &Tableau) -> u64 {
    let mut total = 0;
    for v in 1..t.row_of.len() {
        if t.row_of[v] > t.row_of[v - 1] {
            total += v as u64;
        }
    }
    total
}

struct Enumerator<'a> {
    lambda: &'a [u64],
    mu: &'a [u64],
    cur: Vec<u64>,
    coeffs: Vec<BigInt>,
    count: BigInt,
    rows_trace: Option<Vec<usize>>,
    tableaux: Vec<Tableau>,
    shape: &'a SkewShape,
}

impl<'a> Enumerator<'a> {
    fn addable(&self, i: usize) -> bool {
        let c = self.cur[i];
        if c >= self.lambda[i] {
            return false;
        }
        // left neighbour is filled by construction; the upper neighbour
        // exists only when row i-1 covers column c
        i == 0 || c < self.mu[i - 1] || self.cur[i - 1] > c
    }

    fn run(&mut self, placed: usize, total: usize, prev_row: usize, maj_acc: u64) {
        if placed == total {
            self.coeffs[maj_acc as usize] += 1u32;
            self.count += 1u32;
            if let Some(trace) = &self.rows_trace {
                self.tableaux.push(Tableau {
                    shape: self.shape.clone(),
                    row_of: trace.clone(),
                });
            }
            return;
        }
        for i in 0..self.lambda.len() {
            if self.addable(i) {
                let descent = placed > 0 && i > prev_row;
                let add = if descent { placed as u64 } else { 0 };
                self.cur[i] += 1;
                if let Some(trace) = &mut self.rows_trace {
                    trace.push(i);
                }
                self.run(placed + 1, total, i, maj_acc + add);
                if let Some(trace) = &mut self.rows_trace {
                    trace.pop();
                }
                self.cur[i] -= 1;
            }
        }
    }
}

fn enumerate(shape: &SkewShape, limit: usize, collect: bool) -> Result<Enumerator<'_>> {
    let cells = shape.cell_count();
    if cells > limit {
        return Err(Error::ResourceLimit(format!(
            "shape has {cells} cells, enumeration limit is {limit}; \
             use the determinant or hypergeometric evaluators instead"
        )));
    }
    let mut e = Enumerator {
        lambda: shape.lambda(),
        mu: shape.mu(),
        cur: shape.mu().to_vec(),
        coeffs: vec![BigInt::zero(); cells * cells.saturating_sub(1) / 2 + 1],
        count: BigInt::zero(),
        rows_trace: if collect { Some(Vec::new()) } else { None },
        tableaux: Vec::new(),
        shape,
    };
    e.run(0, cells, 0, 0);
    Ok(e)
}

/// `sum_T q^maj(T)` over all standard Young tableaux of the shape, by
/// exhaustive backtracking. The empty shape has one (empty) tableau.
pub fn maj_gf_oracle(shape: &SkewShape) -> Result<LaurentPoly> {
    maj_gf_oracle_with_limit(shape, DEFAULT_CELL_LIMIT)
}

pub fn maj_gf_oracle_with_limit(shape: &SkewShape, limit: usize) -> Result<LaurentPoly> {
    let e = enumerate(shape, limit, false)?;
    Ok(LaurentPoly::new(0, e.coeffs))
}

/// Number of standard Young tableaux; equals the oracle evaluated at q=1.
pub fn count_syt(shape: &SkewShape) -> Result<BigInt> {
    count_syt_with_limit(shape, DEFAULT_CELL_LIMIT)
}

pub fn count_syt_with_limit(shape: &SkewShape, limit: usize) -> Result<BigInt> {
    Ok(enumerate(shape, limit, false)?.count)
}

/// Materializes the tableaux themselves (debugging aid; the generating
/// function never needs them).
pub fn list_tableaux(shape: &SkewShape, limit: usize) -> Result<Vec<Tableau>> {
    Ok(enumerate(shape, limit, true)?.tableaux)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn shape(text: &str) -> SkewShape {
        SkewShape::parse(text).unwrap()
    }

    fn poly(coeffs: &[i64]) -> LaurentPoly {
        LaurentPoly::new(0, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    #[test]
    fn staircase_spec_shapes() {
        let s = StaircaseSpec::new(6, 6, 3, 2).unwrap();
        assert_eq!(s.to_skew_shape(), shape("6,5,4,3,2,1/3,3"));
        let s = StaircaseSpec::new(8, 6, 2, 4).unwrap();
        assert_eq!(s.to_skew_shape(), shape("8,7,6,5,4,3/2,2,2,2"));
        let s = StaircaseSpec::new(1, 1, 0, 0).unwrap();
        assert_eq!(s.to_skew_shape(), shape("1"));
    }

    #[test]
    fn staircase_spec_rejections() {
        assert!(StaircaseSpec::new(3, 4, 0, 0).is_err()); // N < n
        assert!(StaircaseSpec::new(4, 4, 4, 2).is_err()); // N - r + 1 < m
        assert!(StaircaseSpec::new(9, 2, 0, 3).is_err()); // r > n
    }

    #[test]
    fn shape_validation() {
        assert!(SkewShape::new(vec![2, 3], vec![]).is_err());
        assert!(SkewShape::new(vec![3, 2], vec![1, 2]).is_err());
        assert!(SkewShape::new(vec![3, 2], vec![3, 3]).is_err());
        assert!(SkewShape::new(vec![2], vec![1, 1]).is_err());
        assert!(SkewShape::new(vec![3, 2], vec![2, 1]).is_ok());
    }

    #[test]
    fn parse_and_display_roundtrip() {
        for text in ["6,5,4,3,2,1/3,3", "3,2", "1", "8,7,6,5,4,3/2,2,2,2"] {
            let s = shape(text);
            assert_eq!(format!("{s}"), text);
        }
        assert_eq!(shape(""), SkewShape::empty());
    }

    #[test]
    fn maj_by_hand() {
        // shape (2,1): tableau 1,2 / 3 has maj 2; tableau 1,3 / 2 has maj 1
        let s = shape("2,1");
        let t12 = Tableau { shape: s.clone(), row_of: vec![0, 0, 1] };
        let t13 = Tableau { shape: s.clone(), row_of: vec![0, 1, 0] };
        assert_eq!(maj(&t12), 2);
        assert_eq!(maj(&t13), 1);
        let single = Tableau { shape: shape("1"), row_of: vec![0] };
        assert_eq!(maj(&single), 0);
    }

    #[test]
    fn oracle_small_shapes() {
        // shape (2,1): q + q^2
        assert_eq!(maj_gf_oracle(&shape("2,1")).unwrap(), poly(&[0, 1, 1]));
        // empty shape: 1
        assert_eq!(maj_gf_oracle(&SkewShape::empty()).unwrap(), poly(&[1]));
        // skew shape (2,2)/(1): q + q^2
        assert_eq!(maj_gf_oracle(&shape("2,2/1")).unwrap(), poly(&[0, 1, 1]));
    }

    #[test]
    fn counts() {
        assert_eq!(count_syt(&shape("2,1")).unwrap(), BigInt::from(2));
        assert_eq!(count_syt(&shape("3,2")).unwrap(), BigInt::from(5));
        assert_eq!(count_syt(&SkewShape::empty()).unwrap(), BigInt::one());
    }

    #[test]
    fn oracle_at_one_equals_count() {
        for text in ["3,2", "2,2,1", "4,2/1", "3,3,1/1,1", "5,3,1"] {
            let s = shape(text);
            assert_eq!(
                maj_gf_oracle(&s).unwrap().eval_one(),
                count_syt(&s).unwrap(),
                "{text}"
            );
        }
    }

    #[test]
    fn degree_bound_and_nonnegativity() {
        for text in ["4,3,2/1", "3,3,2", "5,4/2", "2,2,2,2"] {
            let s = shape(text);
            let gf = maj_gf_oracle(&s).unwrap();
            assert!(gf.is_coeff_nonnegative());
            let cells = s.cell_count() as i64;
            assert!(gf.max_exponent() <= cells * (cells - 1) / 2);
            assert!(gf.min_exponent() >= 0);
        }
    }

    #[test]
    fn tableaux_are_standard() {
        // rows and columns strictly increase for every generated tableau
        for text in ["3,2,1", "4,3/2", "3,3,2/1,1"] {
            let s = shape(text);
            for t in list_tableaux(&s, 16).unwrap() {
                // rebuild the grid: position of each entry
                let mut grids: Vec<Vec<Option<usize>>> = s
                    .lambda()
                    .iter()
                    .map(|&l| vec![None; l as usize])
                    .collect();
                let mut next_col: Vec<usize> =
                    s.mu().iter().map(|&m| m as usize).collect();
                for (v, &row) in t.row_of.iter().enumerate() {
                    grids[row][next_col[row]] = Some(v + 1);
                    next_col[row] += 1;
                }
                for (i, row) in grids.iter().enumerate() {
                    for (c, cell) in row.iter().enumerate() {
                        if let Some(v) = cell {
                            if c + 1 < row.len() {
                                if let Some(right) = row[c + 1] {
                                    assert!(right > *v);
                                }
                            }
                            if i + 1 < grids.len() && c < grids[i + 1].len() {
                                if let Some(below) = grids[i + 1][c] {
                                    assert!(below > *v);
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn hook_length_crosscheck_straight_shapes() {
        // hook-length count, implemented only here, as an independent check
        fn hook_count(lambda: &[u64]) -> BigInt {
            let cells: u64 = lambda.iter().sum();
            let conj = |c: u64| lambda.iter().filter(|&&l| l > c).count() as u64;
            let mut numer = BigInt::one();
            for v in 1..=cells {
                numer *= v;
            }
            let mut denom = BigInt::one();
            for (i, &l) in lambda.iter().enumerate() {
                for c in 0..l {
                    let hook = (l - c) + (conj(c) - i as u64 - 1);
                    denom *= hook;
                }
            }
            numer / denom
        }
        for lambda in [
            vec![3u64, 2],
            vec![4, 3, 2],
            vec![2, 2, 2],
            vec![5, 4, 1],
            vec![4, 4, 3],
            vec![6, 3, 2, 1],
        ] {
            let s = SkewShape::straight(lambda.clone()).unwrap();
            assert_eq!(count_syt(&s).unwrap(), hook_count(&lambda), "{lambda:?}");
        }
    }

    #[test]
    fn oracle_limit() {
        let s = shape("6,5,4,3,2,1"); // 21 cells
        assert!(matches!(maj_gf_oracle(&s), Err(Error::ResourceLimit(_))));
        assert!(maj_gf_oracle_with_limit(&shape("4,3,2,1/2"), 16).is_ok());
    }

    #[test]
    fn ascii_diagram_shape() {
        let d = shape("3,2/1").ascii_diagram();
        assert_eq!(d, " . # #\n # #\n");
    }
}
