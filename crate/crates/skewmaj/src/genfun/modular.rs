//! Determinant of the row-scaled matrix for shapes too large for direct
//! polynomial elimination.
//!
//! The scaled determinant is a polynomial of known degree bound; it is
//! evaluated at geometric nodes `g^t` modulo a battery of NTT primes (one
//! LU decomposition per node), interpolated per prime in quasi-linear
//! time, and reconstructed over the integers by balanced CRT. The prime
//! count comes from the determinant's value at `q = 1` (computed exactly
//! first); two held-out guard primes verify the reconstruction at random
//! nodes and trigger a retry with more primes if the estimate was short.

use num_bigint::BigInt;
use num_traits::Zero;

use super::{scaled_det_degree_bound, DetMatrix};
use crate::modp::{crt_balanced, interpolate_geometric, ntt_prime_fields, PrimeField, TWO_ADICITY};
use crate::qseries::LaurentPoly;
use crate::{Error, Result};

/// Evaluates the scaled determinant at the point `x` (Montgomery form).
fn det_at(mat: &DetMatrix, f: &PrimeField, x: u64, work: &mut Work) -> u64 {
    let n = mat.d.len();
    if n == 0 {
        return f.one_m();
    }
    let one = f.one_m();
    // q-integer brackets [k]_x = 1 + x + ... + x^{k-1}
    let max_d = *mat.row_max.iter().max().unwrap() as usize;
    work.brackets.resize(max_d + 1, 0);
    work.brackets[0] = 0;
    let mut b = 0u64;
    for k in 1..=max_d {
        b = f.add(f.mul(b, x), one);
        work.brackets[k] = b;
    }
    // scaled entries by suffix products, rightmost entry of each row is 1
    work.m.resize(n * n, 0);
    for i in 0..n {
        let row = &mat.d[i];
        let mut acc = one;
        let mut prev_d = mat.row_max[i];
        for j in (0..n).rev() {
            let d = row[j];
            if d < 0 {
                for jj in 0..=j {
                    work.m[i * n + jj] = 0;
                }
                break;
            }
            for k in (d + 1)..=prev_d {
                acc = f.mul(acc, work.brackets[k as usize]);
            }
            prev_d = d;
            work.m[i * n + j] = acc;
        }
    }
    // LU elimination with row swaps
    let m = &mut work.m;
    let mut det = one;
    let mut negate = false;
    for col in 0..n {
        let Some(pivot_row) = (col..n).find(|&i| m[i * n + col] != 0) else {
            return 0;
        };
        if pivot_row != col {
            for j in col..n {
                m.swap(pivot_row * n + j, col * n + j);
            }
            negate = !negate;
        }
        let pivot = m[col * n + col];
        det = f.mul(det, pivot);
        if col + 1 == n {
            break;
        }
        let pivot_inv = f.inv(pivot);
        for i in col + 1..n {
            let factor = m[i * n + col];
            if factor == 0 {
                continue;
            }
            let scale = f.mul(factor, pivot_inv);
            let (upper, lower) = m.split_at_mut(i * n);
            let src = &upper[col * n + col + 1..col * n + n];
            let dst = &mut lower[col + 1..n];
            for (d, s) in dst.iter_mut().zip(src) {
                *d = f.sub(*d, f.mul(scale, *s));
            }
        }
    }
    if negate {
        f.sub(0, det)
    } else {
        det
    }
}

struct Work {
    brackets: Vec<u64>,
    m: Vec<u64>,
}

/// Lanes processed per pass in the batched evaluator: amortizes the pivot
/// inversions (one field inversion per column for all lanes) and gives the
/// out-of-order core independent Montgomery chains to overlap.
const LANES: usize = 4;

/// Evaluates the scaled determinant at `LANES` points at once. Falls back
/// to the scalar path when a pivot vanishes in some lane (probability
/// ~ n * deg / p per node, i.e. never in practice).
fn det_at_batch(
    mat: &DetMatrix,
    f: &PrimeField,
    xs: &[u64; LANES],
    out: &mut [u64; LANES],
    work: &mut BatchWork,
    scalar_work: &mut Work,
) {
    let n = mat.d.len();
    if n == 0 {
        out.fill(f.one_m());
        return;
    }
    let one = f.one_m();
    let max_d = *mat.row_max.iter().max().unwrap() as usize;
    work.brackets.resize((max_d + 1) * LANES, 0);
    for b in 0..LANES {
        work.brackets[b] = 0;
    }
    for k in 1..=max_d {
        for b in 0..LANES {
            let prev = work.brackets[(k - 1) * LANES + b];
            work.brackets[k * LANES + b] = f.add(f.mul(prev, xs[b]), one);
        }
    }
    work.m.resize(n * n * LANES, 0);
    for i in 0..n {
        let row = &mat.d[i];
        let mut acc = [one; LANES];
        let mut prev_d = mat.row_max[i];
        for j in (0..n).rev() {
            let d = row[j];
            if d < 0 {
                for jj in 0..=j {
                    work.m[(i * n + jj) * LANES..(i * n + jj + 1) * LANES].fill(0);
                }
                break;
            }
            for k in (d + 1)..=prev_d {
                for b in 0..LANES {
                    acc[b] = f.mul(acc[b], work.brackets[k as usize * LANES + b]);
                }
            }
            prev_d = d;
            work.m[(i * n + j) * LANES..(i * n + j + 1) * LANES].copy_from_slice(&acc);
        }
    }
    // Elimination runs lazily: matrix values live in [0, 2p), products
    // use the uncorrected Montgomery step, and each update does a single
    // masked reduction. Pivots are normalized before the inversion chain.
    let m = &mut work.m;
    let mut det = [one; LANES];
    for col in 0..n {
        let mut pivots = [0u64; LANES];
        for b in 0..LANES {
            pivots[b] = f.normalize(m[(col * n + col) * LANES + b]);
        }
        if pivots.iter().any(|&p| p == 0) {
            // rare: redo all lanes through the pivoting scalar path
            for b in 0..LANES {
                out[b] = det_at(mat, f, xs[b], scalar_work);
            }
            return;
        }
        for b in 0..LANES {
            det[b] = f.mul(det[b], pivots[b]);
        }
        if col + 1 == n {
            break;
        }
        // batched inversion of the lane pivots: one field inversion total
        let mut prefix = [0u64; LANES];
        prefix[0] = pivots[0];
        for b in 1..LANES {
            prefix[b] = f.mul(prefix[b - 1], pivots[b]);
        }
        let mut inv_all = f.inv(prefix[LANES - 1]);
        let mut pinv = [0u64; LANES];
        for b in (1..LANES).rev() {
            pinv[b] = f.mul(inv_all, prefix[b - 1]);
            inv_all = f.mul(inv_all, pivots[b]);
        }
        pinv[0] = inv_all;
        for i in col + 1..n {
            let (upper, lower) = m.split_at_mut(i * n * LANES);
            let src = &upper[(col * n + col + 1) * LANES..(col * n + n) * LANES];
            let mut scale = [0u64; LANES];
            for b in 0..LANES {
                scale[b] = f.mul_lazy(lower[(col) * LANES + b], pinv[b]);
            }
            if scale.iter().all(|&s| s == 0) {
                continue;
            }
            let dst = &mut lower[(col + 1) * LANES..n * LANES];
            for (d4, s4) in dst.chunks_exact_mut(LANES).zip(src.chunks_exact(LANES)) {
                let d4: &mut [u64; LANES] = d4.try_into().unwrap();
                let s4: &[u64; LANES] = s4.try_into().unwrap();
                for b in 0..LANES {
                    d4[b] = f.sub_2p(d4[b], f.mul_lazy(scale[b], s4[b]));
                }
            }
        }
    }
    for b in 0..LANES {
        out[b] = f.normalize(det[b]);
    }
}

struct BatchWork {
    brackets: Vec<u64>,
    m: Vec<u64>,
}

/// Exact value of the scaled determinant at `q = 1`, via CRT over enough
/// primes to cover the permanent-style bound `prod_i sum_j E_ij(1)`.
fn exact_det_at_one(mat: &DetMatrix) -> BigInt {
    let n = mat.d.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let max_d = *mat.row_max.iter().max().unwrap().max(&0);
    let mut fact = vec![BigInt::from(1)];
    for k in 1..=max_d {
        let next = fact.last().unwrap() * k;
        fact.push(next);
    }
    let entry1 = |i: usize, j: usize| -> BigInt {
        let d = mat.d[i][j];
        if d < 0 {
            BigInt::zero()
        } else {
            &fact[mat.row_max[i] as usize] / &fact[d as usize]
        }
    };
    let mut bound = BigInt::from(1);
    for i in 0..n {
        let mut row_sum = BigInt::zero();
        for j in 0..n {
            row_sum += entry1(i, j);
        }
        if row_sum.is_zero() {
            return BigInt::zero();
        }
        bound *= row_sum;
    }
    let count = (bound.bits() / 61 + 2) as usize;
    let fields = ntt_prime_fields(count);
    let mut work = Work { brackets: Vec::new(), m: Vec::new() };
    let residues: Vec<u64> = fields
        .iter()
        .map(|f| f.from_m(det_at(mat, f, f.one_m(), &mut work)))
        .collect();
    crt_balanced(&residues, &fields)
}

/// Horner evaluation of integer coefficients reduced mod `f` at `x`
/// (Montgomery form).
fn eval_bigint_poly(coeffs: &[BigInt], f: &PrimeField, x: u64) -> u64 {
    use num_traits::ToPrimitive;
    let p_big = BigInt::from(f.p);
    let mut acc = 0u64;
    for c in coeffs.iter().rev() {
        let r = (((c % &p_big) + &p_big) % &p_big).to_u64().unwrap();
        acc = f.add(f.mul(acc, x), f.to_m(r));
    }
    acc
}

pub(crate) fn modular_scaled_det(mat: &DetMatrix) -> Result<LaurentPoly> {
    let deg_bound = scaled_det_degree_bound(mat).max(0) as usize;
    if deg_bound + 1 > (1usize << TWO_ADICITY) / 3 {
        return Err(Error::ResourceLimit(format!(
            "scaled determinant degree bound {deg_bound} exceeds the NTT capacity"
        )));
    }
    let det1 = exact_det_at_one(mat);
    // The value at q = 1 estimates the coefficient magnitude; negative
    // coefficients can exceed it, so the prime count grows on demand
    // (already-computed primes are kept) until the guard primes confirm
    // the reconstruction.
    let mut target_bits = det1.bits().max(1) + 32;
    let mut trim = true;
    let mut per_prime: Vec<Vec<u64>> = Vec::new();
    // support of the polynomial: [val, deg], detected on the first prime;
    // later primes interpolate only P(x)/x^val on a shorter node range —
    // and only its lower half when the support is (anti)palindromic, as
    // it is for the pure staircase shapes
    let mut support: Option<(usize, usize)> = None;
    let mut palindrome_sign = 0i8;
    let mut work = Work { brackets: Vec::new(), m: Vec::new() };
    let mut batch = BatchWork { brackets: Vec::new(), m: Vec::new() };
    let stats = std::env::var_os("SKEWMAJ_DET_STATS").is_some();

    'attempt: loop {
        let count = (target_bits / 59 + 1) as usize;
        if count > 600 {
            return Err(Error::ResourceLimit(
                "modular determinant failed to stabilize after precision retries".into(),
            ));
        }
        let fields = ntt_prime_fields(count + 2);
        let (main_fields, guard_fields) = fields.split_at(count);

        while per_prime.len() < count {
            let pi = per_prime.len();
            let f = &main_fields[pi];
            let g = f.two_adic_root(TWO_ADICITY);
            let (val, use_deg) = match (trim, support) {
                (true, Some((v, d))) => (v, d),
                _ => (0, deg_bound),
            };
            let width = use_deg - val;
            let mirror = trim && palindrome_sign != 0 && pi > 0 && width >= 8;
            let eval_count = if mirror { width.div_ceil(2) + 1 } else { width + 1 };
            let g_neg_val = f.inv(f.pow(g, val as u64));
            let mut values = Vec::with_capacity(eval_count + LANES);
            let mut x = f.one_m();
            let mut t = 0usize;
            while t < eval_count {
                let mut xs = [0u64; LANES];
                for lane in xs.iter_mut() {
                    *lane = x;
                    x = f.mul(x, g);
                }
                let mut dets = [0u64; LANES];
                det_at_batch(mat, f, &xs, &mut dets, &mut batch, &mut work);
                values.extend_from_slice(&dets);
                t += LANES;
            }
            values.truncate(eval_count);
            if val != 0 {
                let mut shift = f.one_m();
                for v in values.iter_mut() {
                    *v = f.mul(*v, shift);
                    shift = f.mul(shift, g_neg_val);
                }
            }
            let coeffs = if mirror {
                // Q(g^-t) = sign * g^{-w t} Q(g^t): interpolate Q(g^-u x)
                // on the doubled geometric range, then unscale
                let u = eval_count - 1;
                let gw = f.pow(g, width as u64);
                let mut extended = Vec::with_capacity(2 * u + 1);
                let mut fold = f.inv(f.pow(gw, u as u64)); // g^{-w u}
                for s in (1..=u).rev() {
                    let v = f.mul(values[s], fold);
                    extended.push(if palindrome_sign < 0 { f.sub(0, v) } else { v });
                    fold = f.mul(fold, gw);
                }
                extended.extend_from_slice(&values);
                let tilde = interpolate_geometric(&extended, g, f);
                let gu = f.pow(g, u as u64);
                let mut unscale = f.one_m();
                let mut out = Vec::with_capacity(width + 1);
                for c in tilde.into_iter().take(width + 1) {
                    out.push(f.mul(c, unscale));
                    unscale = f.mul(unscale, gu);
                }
                out
            } else {
                interpolate_geometric(&values, g, f)
            };
            // residual check: the interpolant (shifted by x^val) must
            // reproduce the determinant at nodes beyond those interpolated
            let extra_checks = if pi == 0 { 3 } else { 1 };
            let mut residual_ok = true;
            for extra in 0..extra_checks {
                let t = (eval_count + extra) as u64;
                let node = f.pow(g, t);
                let direct = det_at(mat, f, node, &mut work);
                let mut horner = 0u64;
                for c in coeffs.iter().rev() {
                    horner = f.add(f.mul(horner, node), *c);
                }
                horner = f.mul(horner, f.pow(node, val as u64));
                if horner != direct {
                    residual_ok = false;
                }
            }
            if !residual_ok {
                if trim {
                    // trim misfire (an extreme coefficient vanished mod the
                    // first prime); restart untrimmed from scratch
                    if stats {
                        eprintln!("det stats: residual failure, disabling trim");
                    }
                    trim = false;
                    per_prime.clear();
                    support = None;
                    palindrome_sign = 0;
                    continue 'attempt;
                }
                return Err(Error::ResourceLimit(
                    "modular determinant interpolation failed residual checks".into(),
                ));
            }
            if pi == 0 && trim {
                let d = coeffs.iter().rposition(|&c| c != 0).unwrap_or(0);
                let v = coeffs.iter().position(|&c| c != 0).unwrap_or(0);
                support = Some((v, d));
                if (0..=(d - v)).all(|i| coeffs[v + i] == coeffs[d - i]) {
                    palindrome_sign = 1;
                } else if (0..=(d - v)).all(|i| coeffs[v + i] == f.sub(0, coeffs[d - i])) {
                    palindrome_sign = -1;
                }
                per_prime.push(coeffs[v..=d].iter().map(|&c| f.from_m(c)).collect());
            } else {
                let keep = support.map(|(v, d)| d - v + 1).unwrap_or(coeffs.len());
                per_prime.push(coeffs.into_iter().take(keep).map(|c| f.from_m(c)).collect());
            }
        }

        let (val, td) = support.unwrap_or((0, deg_bound));
        let width = td - val;
        let mut coeffs = Vec::with_capacity(width + 1);
        let mut residues = vec![0u64; count];
        for k in 0..=width {
            for (pi, pp) in per_prime.iter().enumerate() {
                residues[pi] = pp.get(k).copied().unwrap_or(0);
            }
            coeffs.push(crt_balanced(&residues, main_fields));
        }
        // guard primes: verify the reconstruction at a few nodes each
        let mut guards_ok = true;
        'guards: for gf in guard_fields {
            let g = gf.two_adic_root(TWO_ADICITY);
            for t in [1u64, 17, (width as u64 / 2).max(1), width as u64 + 3] {
                let node = gf.pow(g, t);
                let direct = det_at(mat, gf, node, &mut work);
                let lifted = gf.mul(
                    eval_bigint_poly(&coeffs, gf, node),
                    gf.pow(node, val as u64),
                );
                if lifted != direct {
                    guards_ok = false;
                    break 'guards;
                }
            }
        }
        if guards_ok {
            if stats {
                let maxbits = coeffs.iter().map(|c| c.bits()).max().unwrap_or(0);
                eprintln!(
                    "det stats: primes {count}, deg_bound {deg_bound}, support [{val}, {td}], \
                     palindrome sign {palindrome_sign}, det1 bits {}, max coeff bits {maxbits}",
                    det1.bits()
                );
            }
            return Ok(LaurentPoly::new(val as i64, coeffs));
        }
        if stats {
            eprintln!("det stats: guard failure at {count} primes, extending");
        }
        target_bits += 3 * 59;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genfun::{bareiss_det, det_matrix};
    use crate::qcombinat::q_int;
    use crate::tableaux::StaircaseSpec;

    fn scaled_entry(d: i64, row_max: i64) -> LaurentPoly {
        if d < 0 {
            return LaurentPoly::zero();
        }
        let mut acc = LaurentPoly::one();
        for k in (d + 1)..=row_max {
            acc = acc.mul(&q_int(k as u64));
        }
        acc
    }

    #[test]
    fn modular_matches_bareiss() {
        for (nn, n, m, r) in [(6u64, 6u64, 3u64, 2u64), (8, 6, 2, 4), (9, 5, 0, 0), (7, 7, 1, 1)] {
            let spec = StaircaseSpec::new(nn, n, m, r).unwrap();
            let mat = det_matrix(&spec.to_skew_shape());
            let rows: Vec<Vec<LaurentPoly>> = (0..mat.d.len())
                .map(|i| {
                    (0..mat.d.len())
                        .map(|j| scaled_entry(mat.d[i][j], mat.row_max[i]))
                        .collect()
                })
                .collect();
            let direct = bareiss_det(rows);
            let modular = modular_scaled_det(&mat).unwrap();
            assert_eq!(direct, modular, "spec {spec}");
        }
    }

    #[test]
    fn det_at_one_matches_polynomial() {
        let spec = StaircaseSpec::new(7, 5, 2, 2).unwrap();
        let mat = det_matrix(&spec.to_skew_shape());
        let poly = modular_scaled_det(&mat).unwrap();
        assert_eq!(poly.eval_one(), exact_det_at_one(&mat));
    }
}
