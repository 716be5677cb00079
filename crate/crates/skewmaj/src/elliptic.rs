//! Floating-point theta functions, elliptic shifted factorials, and
//! numeric verification of the elliptic transformation that the whole
//! basic-hypergeometric chain specializes from.
//!
//! Everything here is double precision by design: the exact machinery
//! lives in [`crate::hypergeom`], and this module checks the genuinely
//! elliptic (`p != 0`) statement numerically, with an error budget far
//! below the acceptance tolerance (products of at most a few hundred
//! factors keep relative error near 1e-12; the pass threshold is 1e-8).

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::hypergeom::{elliptic_p0_sides, increasing_tuples, EllipticQPowers};
use crate::{Error, Result};

/// Truncation target for the theta product tail.
const THETA_EPS: f64 = 1e-17;
/// Hard cap on theta product factors.
const THETA_MAX_FACTORS: u32 = 300;
/// Denominators with magnitude below this are treated as degenerate and
/// the parameter set is rejected (catastrophic cancellation would
/// masquerade as verification failure).
pub const DEGENERACY_THRESHOLD: f64 = 1e-6;

/// Rescaled theta function `theta(x; p) = prod_{j>=0} (1 - p^j x)(1 - p^{j+1}/x)`.
pub fn theta(x: Complex64, p: Complex64) -> Result<Complex64> {
    theta_with_eps(x, p, THETA_EPS)
}

/// As [`theta`] with an explicit tail target (exposed so the truncation
/// robustness of the default can be measured).
pub fn theta_with_eps(x: Complex64, p: Complex64, eps: f64) -> Result<Complex64> {
    if x.norm() == 0.0 {
        return Err(Error::Domain("theta requires x != 0".into()));
    }
    if p.norm() >= 1.0 {
        return Err(Error::Domain(format!(
            "theta requires |p| < 1, got |p| = {}",
            p.norm()
        )));
    }
    let scale = x.norm().max(1.0 / x.norm()).max(1.0);
    let pn = p.norm();
    let mut bound = scale;
    let mut j = 0u32;
    while bound >= eps && j < THETA_MAX_FACTORS {
        j += 1;
        bound *= pn;
    }
    let mut acc = Complex64::new(1.0, 0.0);
    let mut pj = Complex64::new(1.0, 0.0);
    let xinv = 1.0 / x;
    for _ in 0..j {
        acc *= (Complex64::new(1.0, 0.0) - pj * x)
            * (Complex64::new(1.0, 0.0) - pj * p * xinv);
        pj *= p;
    }
    Ok(acc)
}

/// Elliptic shifted factorial `(a; q, p)_m = theta(a;p) theta(aq;p) ... theta(aq^{m-1};p)`
/// for `m >= 0`.
pub fn epoch(a: Complex64, q: Complex64, p: Complex64, m: u32) -> Result<Complex64> {
    epoch_signed(a, q, p, m as i64)
}

/// As [`epoch`] with a signed index: `(a;q,p)_{-t} = 1/(a q^-t; q, p)_t`.
pub fn epoch_signed(a: Complex64, q: Complex64, p: Complex64, m: i64) -> Result<Complex64> {
    let mut acc = Complex64::new(1.0, 0.0);
    if m >= 0 {
        for j in 0..m {
            acc *= theta(a * q.powi(j as i32), p)?;
        }
        Ok(acc)
    } else {
        for j in 1..=(-m) {
            acc *= theta(a * q.powi(-j as i32), p)?;
        }
        if acc.norm() < DEGENERACY_THRESHOLD {
            return Err(Error::Inadmissible(
                "negative-index elliptic factorial is degenerate".into(),
            ));
        }
        Ok(1.0 / acc)
    }
}

/// Parameters of the elliptic transformation. `lambda` is derived as
/// `a^2 q^{2-r} / (b c d)`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct EllipticParams {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
    pub e: Complex64,
    pub f: Complex64,
    pub q: Complex64,
    pub p: Complex64,
    pub m: u32,
    pub r: u32,
}

impl EllipticParams {
    pub fn lambda(&self) -> Complex64 {
        self.a * self.a * self.q.powi(2 - self.r as i32) / (self.b * self.c * self.d)
    }

    fn validate(&self) -> Result<()> {
        if self.r < 1 {
            return Err(Error::InvalidInput("requires r >= 1".into()));
        }
        if self.p.norm() >= 1.0 {
            return Err(Error::InvalidInput("requires |p| < 1".into()));
        }
        if self.q.norm() >= 1.0 {
            return Err(Error::InvalidInput("requires |q| < 1".into()));
        }
        Ok(())
    }
}

/// Accumulates a product of theta/epoch factors, rejecting degenerate
/// denominators.
struct FactorAcc {
    value: Complex64,
}

impl FactorAcc {
    fn new() -> Self {
        FactorAcc { value: Complex64::new(1.0, 0.0) }
    }

    fn mul(&mut self, v: Complex64) {
        self.value *= v;
    }

    fn div(&mut self, v: Complex64) -> Result<()> {
        if v.norm() < DEGENERACY_THRESHOLD {
            return Err(Error::Inadmissible(format!(
                "denominator magnitude {:.3e} below degeneracy threshold",
                v.norm()
            )));
        }
        self.value /= v;
        Ok(())
    }
}

/// Evaluates both sides of the elliptic transformation by direct
/// summation over `0 <= k_1 < ... < k_r <= m`.
pub fn thm2_sides(params: &EllipticParams) -> Result<(Complex64, Complex64)> {
    params.validate()?;
    let EllipticParams { a, b, c, d, e, f, q, p, m, r } = *params;
    let lam = params.lambda();
    let one = Complex64::new(1.0, 0.0);

    // side(root, numerator bases, denominator bases)
    let side = |root: Complex64, nums: [Complex64; 8], dens: [Complex64; 8]| -> Result<Complex64> {
        let theta_root = theta(root, p)?;
        let mut total = Complex64::new(0.0, 0.0);
        for tuple in increasing_tuples(r as usize, m as i64) {
            let mut acc = FactorAcc::new();
            let mut qexp = 0i64;
            for (idx, &k) in tuple.iter().enumerate() {
                qexp += (2 * idx as i64 + 1) * k;
            }
            acc.mul(q.powi(qexp as i32));
            for x in 0..tuple.len() {
                for y in x + 1..tuple.len() {
                    let t1 = theta(q.powi((tuple[x] - tuple[y]) as i32), p)?;
                    let t2 = theta(root * q.powi((tuple[x] + tuple[y]) as i32), p)?;
                    acc.mul(t1 * t1 * t2 * t2);
                }
            }
            for &k in &tuple {
                acc.mul(theta(root * q.powi(2 * k as i32), p)?);
                acc.div(theta_root)?;
                for base in nums {
                    acc.mul(epoch_signed(base, q, p, k)?);
                }
                for base in dens {
                    acc.div(epoch_signed(base, q, p, k)?)?;
                }
            }
            total += acc.value;
        }
        let _ = one;
        Ok(total)
    };

    let qm = q.powi(m as i32);
    let qr = q.powi(r as i32);
    let lhs = side(
        a,
        [a, b, c, d, e, f, lam * a * q * q * qm / (qr * e * f), qm.inv()],
        [q, a * q / b, a * q / c, a * q / d, a * q / e, a * q / f, e * f * qr / (q * qm * lam), a * q * qm],
    )?;

    let mut pre = FactorAcc::new();
    for i in 1..=r as i64 {
        for base in [b, c, d, e * f / a] {
            pre.mul(epoch_signed(base, q, p, i - 1)?);
        }
        for base in [lam * b / a, lam * c / a, lam * d / a, e * f / lam] {
            pre.div(epoch_signed(base, q, p, i - 1)?)?;
        }
        pre.mul(epoch_signed(a * q, q, p, m as i64)?);
        pre.div(epoch_signed(lam * q, q, p, m as i64)?)?;
        pre.mul(epoch_signed(a * q / (e * f), q, p, m as i64 + 1 - r as i64)?);
        pre.div(epoch_signed(lam * q / (e * f), q, p, m as i64 + 1 - r as i64)?)?;
        pre.mul(epoch_signed(lam * q / e, q, p, m as i64 - i + 1)?);
        pre.mul(epoch_signed(lam * q / f, q, p, m as i64 - i + 1)?);
        pre.div(epoch_signed(a * q / e, q, p, m as i64 - i + 1)?)?;
        pre.div(epoch_signed(a * q / f, q, p, m as i64 - i + 1)?)?;
    }
    let rhs_sum = side(
        lam,
        [lam, lam * b / a, lam * c / a, lam * d / a, e, f, lam * a * q * q * qm / (qr * e * f), qm.inv()],
        [q, a * q / b, a * q / c, a * q / d, lam * q / e, lam * q / f, e * f * qr / (q * qm * a), lam * q * qm],
    )?;
    Ok((lhs, pre.value * rhs_sum))
}

/// Verification report for one elliptic parameter set.
#[derive(Clone, Debug, Serialize)]
pub struct Thm2Report {
    pub sample: u64,
    pub params: EllipticParams,
    pub lhs: Option<(f64, f64)>,
    pub rhs: Option<(f64, f64)>,
    pub relative_error: Option<f64>,
    pub pass: Option<bool>,
    pub inadmissible: Option<String>,
}

/// Evaluates both sides and reports the relative error against `tolerance`.
pub fn verify_thm2(params: &EllipticParams, tolerance: f64) -> Thm2Report {
    match thm2_sides(params) {
        Ok((lhs, rhs)) => {
            let scale = lhs.norm().max(rhs.norm()).max(1e-300);
            let rel = (lhs - rhs).norm() / scale;
            Thm2Report {
                sample: 0,
                params: *params,
                lhs: Some((lhs.re, lhs.im)),
                rhs: Some((rhs.re, rhs.im)),
                relative_error: Some(rel),
                pass: Some(rel <= tolerance),
                inadmissible: None,
            }
        }
        Err(Error::Inadmissible(reason)) => Thm2Report {
            sample: 0,
            params: *params,
            lhs: None,
            rhs: None,
            relative_error: None,
            pass: None,
            inadmissible: Some(reason),
        },
        Err(other) => Thm2Report {
            sample: 0,
            params: *params,
            lhs: None,
            rhs: None,
            relative_error: None,
            pass: None,
            inadmissible: Some(format!("evaluation error: {other}")),
        },
    }
}

fn random_unit(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Complex64 {
    let mag = rng.gen_range(lo..hi);
    let phase = rng.gen_range(0.0..std::f64::consts::TAU);
    Complex64::from_polar(mag, phase)
}

/// Draws a random parameter set: magnitudes of `a..f` uniform in
/// `[0.15, 0.85]`, phases uniform, `|q|, |p|` in `[0.15, 0.5]`.
pub fn sample_params(rng: &mut ChaCha8Rng, m_max: u32, r_max: u32) -> EllipticParams {
    EllipticParams {
        a: random_unit(rng, 0.15, 0.85),
        b: random_unit(rng, 0.15, 0.85),
        c: random_unit(rng, 0.15, 0.85),
        d: random_unit(rng, 0.15, 0.85),
        e: random_unit(rng, 0.15, 0.85),
        f: random_unit(rng, 0.15, 0.85),
        q: random_unit(rng, 0.15, 0.5),
        p: random_unit(rng, 0.15, 0.5),
        m: rng.gen_range(0..=m_max),
        r: rng.gen_range(1..=r_max),
    }
}

/// Outcome of a seeded sweep of the elliptic verification.
#[derive(Clone, Debug, Serialize)]
pub struct Thm2SweepOutcome {
    pub seed: u64,
    pub tolerance: f64,
    pub samples: u64,
    pub rejected: u64,
    pub all_pass: bool,
    pub max_relative_error: f64,
    pub failures: Vec<Thm2Report>,
}

/// Runs `trials` admissible random verifications with `m, r <= 3`.
pub fn thm2_sweep(seed: u64, trials: u64, tolerance: f64) -> Result<Thm2SweepOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Thm2SweepOutcome {
        seed,
        tolerance,
        samples: 0,
        rejected: 0,
        all_pass: true,
        max_relative_error: 0.0,
        failures: Vec::new(),
    };
    let mut attempts = 0;
    while out.samples < trials {
        attempts += 1;
        if attempts > 200 * trials + 1000 {
            return Err(Error::ResourceLimit(
                "elliptic sweep cannot find admissible samples".into(),
            ));
        }
        let params = sample_params(&mut rng, 3, 3);
        let mut report = verify_thm2(&params, tolerance);
        if !report.inadmissible.is_none() {
            out.rejected += 1;
            continue;
        }
        report.sample = out.samples;
        out.samples += 1;
        let rel = report.relative_error.unwrap_or(f64::INFINITY);
        out.max_relative_error = out.max_relative_error.max(rel);
        if report.pass != Some(true) {
            out.all_pass = false;
            out.failures.push(report);
        }
    }
    Ok(out)
}

/// Cross-check of the floating evaluator against the exact module at
/// `p = 0`: all parameters are integer powers of a sampled complex q, the
/// exact sides are evaluated there, and both must agree to `tolerance`.
pub fn p0_crosscheck(seed: u64, trials: u64, tolerance: f64) -> Result<(u64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut done = 0;
    let mut worst = 0.0f64;
    let mut attempts = 0;
    while done < trials {
        attempts += 1;
        if attempts > 400 * trials + 1000 {
            return Err(Error::ResourceLimit(
                "p = 0 cross-check cannot find admissible samples".into(),
            ));
        }
        let powers = EllipticQPowers {
            a: rng.gen_range(6..=14),
            b: rng.gen_range(1..=5),
            c: rng.gen_range(1..=5),
            d: rng.gen_range(1..=5),
            e: rng.gen_range(1..=5),
            f: rng.gen_range(1..=5),
            m: rng.gen_range(0..=3),
            r: rng.gen_range(1..=3),
        };
        let Ok((exact_lhs, exact_rhs)) = elliptic_p0_sides(&powers) else {
            continue;
        };
        let q = random_unit(&mut rng, 0.2, 0.5);
        let params = EllipticParams {
            a: q.powi(powers.a as i32),
            b: q.powi(powers.b as i32),
            c: q.powi(powers.c as i32),
            d: q.powi(powers.d as i32),
            e: q.powi(powers.e as i32),
            f: q.powi(powers.f as i32),
            q,
            p: Complex64::new(0.0, 0.0),
            m: powers.m as u32,
            r: powers.r as u32,
        };
        let Ok((lhs, rhs)) = thm2_sides(&params) else {
            continue;
        };
        let (Ok(el), Ok(er)) = (exact_lhs.eval_complex(q), exact_rhs.eval_complex(q)) else {
            continue;
        };
        let scale = lhs.norm().max(el.norm()).max(1e-300);
        let rel_l = (lhs - el).norm() / scale;
        let scale = rhs.norm().max(er.norm()).max(1e-300);
        let rel_r = (rhs - er).norm() / scale;
        worst = worst.max(rel_l).max(rel_r);
        if rel_l > tolerance || rel_r > tolerance {
            return Err(Error::Domain(format!(
                "p = 0 cross-check disagrees: lhs {rel_l:.3e}, rhs {rel_r:.3e} for {powers:?}"
            )));
        }
        done += 1;
    }
    Ok((done, worst))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn theta_at_p_zero() {
        let v = theta(c(0.5, 0.0), c(0.0, 0.0)).unwrap();
        assert!((v - c(0.5, 0.0)).norm() < 1e-15);
        let v = theta(c(0.3, 0.4), c(0.0, 0.0)).unwrap();
        assert!((v - (c(1.0, 0.0) - c(0.3, 0.4))).norm() < 1e-15);
        assert!(theta(c(0.0, 0.0), c(0.1, 0.0)).is_err());
        assert!(theta(c(0.5, 0.0), c(1.1, 0.0)).is_err());
    }

    #[test]
    fn theta_inversion() {
        // theta(1/x; p) = (-1/x) theta(x; p)
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        for _ in 0..100 {
            let x = random_unit(&mut rng, 0.2, 2.0);
            let p = random_unit(&mut rng, 0.05, 0.5);
            let lhs = theta(1.0 / x, p).unwrap();
            let rhs = -theta(x, p).unwrap() / x;
            let scale = lhs.norm().max(rhs.norm()).max(1e-300);
            assert!((lhs - rhs).norm() / scale < 1e-12);
        }
    }

    #[test]
    fn theta_truncation_robustness() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..50 {
            let x = random_unit(&mut rng, 0.2, 2.0);
            let p = random_unit(&mut rng, 0.05, 0.5);
            let a = theta_with_eps(x, p, THETA_EPS).unwrap();
            let b = theta_with_eps(x, p, THETA_EPS / 2.0).unwrap();
            assert!((a - b).norm() / a.norm().max(1e-300) < 1e-14);
        }
    }

    #[test]
    fn epoch_p_zero_is_basic_pochhammer() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..100 {
            let a = random_unit(&mut rng, 0.15, 0.85);
            let q = random_unit(&mut rng, 0.15, 0.5);
            for m in 0..=6u32 {
                let e = epoch(a, q, c(0.0, 0.0), m).unwrap();
                let mut basic = c(1.0, 0.0);
                for j in 0..m {
                    basic *= c(1.0, 0.0) - a * q.powi(j as i32);
                }
                let scale = e.norm().max(basic.norm()).max(1e-300);
                assert!((e - basic).norm() / scale < 1e-12);
            }
        }
    }

    #[test]
    fn epoch_conventions() {
        let (a, q, p) = (c(0.3, 0.0), c(0.4, 0.0), c(0.2, 0.0));
        assert_eq!(epoch(a, q, p, 0).unwrap(), c(1.0, 0.0));
        let single = epoch(a, q, p, 1).unwrap();
        assert!((single - theta(a, p).unwrap()).norm() < 1e-15);
        // signed index: (a;q,p)_{-t} (a q^-t; q,p)_t = 1
        let neg = epoch_signed(a, q, p, -2).unwrap();
        let pos = epoch_signed(a * q.powi(-2), q, p, 2).unwrap();
        assert!((neg * pos - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn thm2_holds_on_seeded_samples() {
        let out = thm2_sweep(7, 30, 1e-8).unwrap();
        assert!(out.all_pass, "{:?}", out.failures);
        assert!(out.max_relative_error <= 1e-8);
    }

    #[test]
    fn thm2_m_zero_single_term() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut params = sample_params(&mut rng, 0, 1);
        params.m = 0;
        params.r = 1;
        let (lhs, rhs) = thm2_sides(&params).unwrap();
        let scale = lhs.norm().max(rhs.norm());
        assert!((lhs - rhs).norm() / scale < 1e-10);
    }

    #[test]
    fn p0_crosscheck_small() {
        let (done, worst) = p0_crosscheck(11, 5, 1e-10).unwrap();
        assert_eq!(done, 5);
        assert!(worst <= 1e-10);
    }
}
