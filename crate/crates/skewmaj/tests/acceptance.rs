//! Acceptance suite: one test per criterion, each printing a pass line
//! with the grid it covered (run with `--nocapture` to see them).
//!
//! Everything here is exact except the theta-function checks, whose
//! tolerances are pinned in the asserts.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

use skewmaj::elliptic;
use skewmaj::genfun::{
    self, closed_staircase, closed_staircase_plus1, det_majgf, laplace_sum,
    laplace_sum_with_bound, lemma_det_rhs, staircase_gf, thm1_even, thm1_odd,
};
use skewmaj::hypergeom::{self, Identity, SweepConfig};
use skewmaj::qcombinat::q_factorial_recip;
use skewmaj::qseries::RationalQ;
use skewmaj::tableaux::{count_syt, maj_gf_oracle, StaircaseSpec};

/// All specs with the stated invariants (`N >= n`, `N - r + 1 >= m`,
/// `r <= n`) up to the given `N`.
fn valid_specs(max_top: u64) -> Vec<StaircaseSpec> {
    let mut out = Vec::new();
    for top in 0..=max_top {
        for rows in 0..=top {
            for rect_height in 0..=rows {
                for rect_width in 0..=(top + 1 - rect_height) {
                    if let Ok(spec) = StaircaseSpec::new(top, rows, rect_width, rect_height) {
                        out.push(spec);
                    }
                }
            }
        }
    }
    out
}

#[test]
fn criterion_1_oracle_agreement() {
    let mut checked = 0;
    for spec in valid_specs(6) {
        let shape = spec.to_skew_shape();
        if shape.cell_count() > 16 {
            continue;
        }
        let oracle = maj_gf_oracle(&shape).unwrap();
        let det = det_majgf(&shape).unwrap();
        assert_eq!(oracle, det, "oracle vs determinant at {spec}");
        checked += 1;
    }
    println!("criterion 1: PASS — oracle = determinant on {checked} specs with N <= 6");
}

#[test]
fn criterion_2_multisum_agreement() {
    let mut checked = 0;
    for spec in valid_specs(9) {
        let det = det_majgf(&spec.to_skew_shape()).unwrap();
        let multisum = staircase_gf(&spec).unwrap();
        assert_eq!(multisum, det, "multi-sum vs determinant at {spec}");
        checked += 1;
    }
    println!("criterion 2: PASS — multi-sum = determinant on {checked} specs with N <= 9");
}

#[test]
fn criterion_3_closed_form_degenerations() {
    let mut checked = 0;
    for n in 0..=8u64 {
        for r in 0..=n {
            for m in 0..=(n + 1 - r) {
                let even = thm1_even(&StaircaseSpec::new(n, n, m, r).unwrap()).unwrap();
                assert_eq!(
                    closed_staircase(n, m, r).unwrap(),
                    even,
                    "offset-0 closed form at n={n} m={m} r={r}"
                );
                checked += 1;
            }
            for m in 0..=(n + 2 - r) {
                let odd = thm1_odd(&StaircaseSpec::new(n + 1, n, m, r).unwrap()).unwrap();
                assert_eq!(
                    closed_staircase_plus1(n, m, r).unwrap(),
                    odd,
                    "offset-1 closed form at n={n} m={m} r={r}"
                );
                checked += 1;
            }
        }
    }
    println!("criterion 3: PASS — closed products = multi-sums on {checked} triples with n <= 8");
}

#[test]
fn criterion_4_laplace_and_range_extension() {
    let mut checked = 0;
    let mut edge_cases = 0;
    for spec in valid_specs(8) {
        let det = RationalQ::from_poly(det_majgf(&spec.to_skew_shape()).unwrap());
        let lap = laplace_sum(&spec).unwrap();
        assert_eq!(lap, det, "expansion sum vs determinant at {spec}");
        let extended_bound = (spec.top as i64 - spec.rect_width as i64
            + spec.rect_height as i64
            - 1)
            .div_euclid(2);
        let ext = laplace_sum_with_bound(&spec, extended_bound).unwrap();
        assert_eq!(ext, det, "extended-range sum at {spec} bound {extended_bound}");
        if spec.rect_width == 0 && spec.rect_height == spec.rows {
            edge_cases += 1;
        }
        checked += 1;
    }
    assert!(edge_cases > 0, "the m=0, n=r edge family must be covered");
    println!(
        "criterion 4: PASS — expansion sum = determinant and range extension invariant \
         on {checked} specs with N <= 8 ({edge_cases} with m=0, n=r)"
    );
}

#[test]
fn criterion_5_determinant_lemma() {
    // independent oracle: cofactor expansion of (1/[X_i + j]_q!) over
    // exact rational functions
    fn direct_det(xs: &[i64]) -> RationalQ {
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
        let s = xs.len();
        let m: Vec<Vec<RationalQ>> = (0..s)
            .map(|i| (1..=s as i64).map(|j| q_factorial_recip(xs[i] + j)).collect())
            .collect();
        det(&m)
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for trial in 0..200 {
        let s = rng.gen_range(1..=4usize);
        let xs: Vec<i64> = (0..s).map(|_| rng.gen_range(-3i64..=8)).collect();
        assert_eq!(
            lemma_det_rhs(&xs),
            direct_det(&xs),
            "lemma closed form at trial {trial}, X = {xs:?}"
        );
    }
    println!("criterion 5: PASS — determinant lemma on 200 seeded instances (s <= 4)");
}

#[test]
fn criterion_6_identity_sweeps() {
    let cfg = SweepConfig { seed: 0, trials: 25, max_exp: 10, max_mrs: 3, numeric_checks: 3 };
    let mut cells = 0;
    let mut samples = 0;
    for identity in Identity::ALL {
        let outcome = hypergeom::sweep(identity, &cfg).unwrap();
        assert!(
            outcome.all_equal,
            "identity {} failed: {:?}",
            outcome.identity, outcome.failures
        );
        assert!(outcome.max_numeric_error <= 1e-10);
        cells += outcome.cells;
        samples += outcome.samples;
    }
    println!(
        "criterion 6: PASS — {} exact identity verifications over {cells} grid cells \
         (m, r, s <= 3; 25 admissible samples each)",
        samples
    );
}

#[test]
fn criterion_7_elliptic_verification() {
    let sweep = elliptic::thm2_sweep(0, 100, 1e-8).unwrap();
    assert!(sweep.all_pass, "theta-function transform failures: {:?}", sweep.failures);
    let (done, worst) = elliptic::p0_crosscheck(0, 20, 1e-10).unwrap();
    assert_eq!(done, 20);
    println!(
        "criterion 7: PASS — theta transform on 100 samples (max rel err {:.2e}), \
         p=0 cross-check on 20 samples (worst {:.2e})",
        sweep.max_relative_error, worst
    );
}

#[test]
fn criterion_8_sanity_properties() {
    let mut checked = 0;
    for spec in valid_specs(6) {
        let shape = spec.to_skew_shape();
        let gf = staircase_gf(&spec).unwrap();
        assert!(gf.is_coeff_nonnegative(), "negative coefficients at {spec}");
        let cells = shape.cell_count() as i64;
        assert!(
            gf.max_exponent() <= cells * (cells - 1) / 2,
            "degree bound exceeded at {spec}"
        );
        if cells <= 16 {
            assert_eq!(
                gf.eval_one(),
                count_syt(&shape).unwrap(),
                "tableau count mismatch at {spec}"
            );
        } else {
            assert!(gf.eval_one() > BigInt::from(0));
        }
        checked += 1;
    }
    println!(
        "criterion 8: PASS — nonnegative coefficients, degree bounds, and tableau counts \
         on {checked} specs with N <= 6"
    );
}

#[test]
fn criterion_9_performance_claim() {
    let start = Instant::now();
    let mut lines = Vec::new();
    for offset in [0u64, 1, 2] {
        let spec = StaircaseSpec::new(40 + offset, 40, 2, 2).unwrap();
        let shape = spec.to_skew_shape();
        let t = Instant::now();
        let det = genfun::det_majgf_factored(&shape).unwrap();
        let det_s = t.elapsed().as_secs_f64();
        let t = Instant::now();
        let multisum = genfun::staircase_gf_factored(&spec).unwrap();
        let thm1_s = t.elapsed().as_secs_f64();
        assert!(
            det.eq_exact(&multisum).unwrap(),
            "evaluator outputs differ at {spec}"
        );
        let ratio = det_s / thm1_s;
        assert!(
            ratio > 1.0,
            "multi-sum not faster than determinant at {spec}: ratio {ratio:.2}"
        );
        lines.push(format!(
            "{spec}: det {det_s:.1}s, multi-sum {:.1}ms, speedup {ratio:.0}x",
            thm1_s * 1e3
        ));
    }
    let total = start.elapsed();
    assert!(
        total.as_secs() <= 180,
        "benchmark exceeded its 3-minute budget: {total:?}"
    );
    println!(
        "criterion 9: PASS — multi-sum faster than determinant at n=40 ({}; total {total:.0?})",
        lines.join("; ")
    );
}
