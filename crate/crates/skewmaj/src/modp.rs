//! 64-bit prime fields with Montgomery arithmetic, power-of-two NTT
//! convolution, and polynomial interpolation from geometric nodes.
//!
//! This is the kernel behind the large-shape determinant evaluator: the
//! scaled determinant polynomial is evaluated at powers of a fixed field
//! element (one cheap LU per node), interpolated per prime in
//! quasi-linear time, and reconstructed over the integers by CRT.
//! Interpolation at geometric nodes reduces to two convolutions via the
//! chirp identity `g^{it} = g^{C(i+t,2) - C(i,2) - C(t,2)}`.

use num_bigint::BigInt;

/// Modulus together with precomputed Montgomery constants. All primes are
/// below 2^60 (so lazy-reduction products of values below `4p` cannot
/// overflow) and congruent to 1 mod 2^20, giving length-2^20 NTTs and up
/// to ~10^6 distinct geometric nodes.
#[derive(Clone, Copy, Debug)]
pub struct PrimeField {
    pub p: u64,
    /// -p^-1 mod 2^64.
    ninv: u64,
    /// 2^128 mod p (converts into Montgomery form).
    r2: u64,
    /// A generator of the multiplicative group.
    pub generator: u64,
}

pub const TWO_ADICITY: u32 = 20;

impl PrimeField {
    pub fn new(p: u64, generator: u64) -> Self {
        // Newton iteration for the inverse of p mod 2^64
        let mut inv = p;
        for _ in 0..5 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let ninv = inv.wrapping_neg();
        let r = (1u128 << 64) % p as u128;
        let r2 = (r * r % p as u128) as u64;
        PrimeField { p, ninv, r2, generator }
    }

    // The reductions below are branchless (mask-select): the values are
    // data-dependent and a conditional branch here mispredicts half the
    // time in the determinant inner loops.

    #[inline(always)]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        let t = a as u128 * b as u128;
        let m = (t as u64).wrapping_mul(self.ninv);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        let (v, borrow) = u.overflowing_sub(self.p);
        v.wrapping_add(self.p & (borrow as u64).wrapping_neg())
    }

    #[inline(always)]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        let (v, borrow) = s.overflowing_sub(self.p);
        v.wrapping_add(self.p & (borrow as u64).wrapping_neg())
    }

    #[inline(always)]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        let (v, borrow) = a.overflowing_sub(b);
        v.wrapping_add(self.p & (borrow as u64).wrapping_neg())
    }

    /// Into Montgomery form.
    #[inline(always)]
    pub fn to_m(&self, x: u64) -> u64 {
        self.mul(x % self.p, self.r2)
    }

    /// Out of Montgomery form.
    #[inline(always)]
    pub fn from_m(&self, a: u64) -> u64 {
        self.mul(a, 1)
    }

    pub fn one_m(&self) -> u64 {
        self.to_m(1)
    }

    /// Exposes `(p, ninv)` for specialized lazy-reduction inner loops.
    pub fn parts(&self) -> (u64, u64) {
        (self.p, self.ninv)
    }

    /// Montgomery product without the final reduction: for `p < 2^60` and
    /// inputs below `4p` the result is below `2p`.
    #[inline(always)]
    pub fn mul_lazy(&self, a: u64, b: u64) -> u64 {
        let t = a as u128 * b as u128;
        let m = (t as u64).wrapping_mul(self.ninv);
        ((t + m as u128 * self.p as u128) >> 64) as u64
    }

    /// `a - b` for values in `[0, 2p)`, reduced back into `[0, 2p)`.
    #[inline(always)]
    pub fn sub_2p(&self, a: u64, b: u64) -> u64 {
        let r = a + 2 * self.p - b;
        let (v, borrow) = r.overflowing_sub(2 * self.p);
        v.wrapping_add((2 * self.p) & (borrow as u64).wrapping_neg())
    }

    /// Reduces a value in `[0, 2p)` into `[0, p)`.
    #[inline(always)]
    pub fn normalize(&self, a: u64) -> u64 {
        let (v, borrow) = a.overflowing_sub(self.p);
        v.wrapping_add(self.p & (borrow as u64).wrapping_neg())
    }

    pub fn pow(&self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = self.one_m();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> u64 {
        self.pow(a, self.p - 2)
    }

    /// Montgomery-form signed representative conversion for CRT input.
    pub fn lift(&self, a: u64) -> u64 {
        self.from_m(a)
    }

    /// A root of unity of multiplicative order `2^log_order`.
    pub fn two_adic_root(&self, log_order: u32) -> u64 {
        assert!(log_order <= TWO_ADICITY);
        let g = self.to_m(self.generator);
        self.pow(g, (self.p - 1) >> log_order)
    }
}

/// Deterministic Miller-Rabin for u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        b %= n;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn factor_trial(mut n: u64) -> Vec<u64> {
    let mut fs = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            fs.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        fs.push(n);
    }
    fs
}

/// Finds `count` NTT-friendly prime fields `p = k * 2^20 + 1` just below
/// 2^62, each with a verified group generator. The search is cached.
pub fn ntt_prime_fields(count: usize) -> Vec<PrimeField> {
    use std::sync::Mutex;
    static CACHE: Mutex<Vec<PrimeField>> = Mutex::new(Vec::new());
    let mut cache = CACHE.lock().unwrap();
    while cache.len() < count {
        let mut k = cache
            .last()
            .map(|f| (f.p - 1) >> TWO_ADICITY)
            .unwrap_or((1u64 << 60) >> TWO_ADICITY);
        loop {
            k -= 1;
            let p = (k << TWO_ADICITY) + 1;
            if !is_prime_u64(p) {
                continue;
            }
            let mut factors = factor_trial(k);
            factors.push(2);
            let generator = (2u64..)
                .find(|&g| {
                    factors.iter().all(|&q| {
                        let f = PrimeField::new(p, 2);
                        f.from_m(f.pow(f.to_m(g), (p - 1) / q)) != 1
                    })
                })
                .unwrap();
            cache.push(PrimeField::new(p, generator));
            break;
        }
    }
    cache[..count].to_vec()
}

/// In-place iterative NTT (decimation in time); `root` must have order
/// exactly `a.len()`, a power of two. Values in Montgomery form.
pub fn ntt(a: &mut [u64], root: u64, f: &PrimeField) {
    let n = a.len();
    debug_assert!(n.is_power_of_two());
    // bit-reversal permutation
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let w_len = f.pow(root, (n / len) as u64);
        for start in (0..n).step_by(len) {
            let mut w = f.one_m();
            for i in start..start + len / 2 {
                let u = a[i];
                let v = f.mul(a[i + len / 2], w);
                a[i] = f.add(u, v);
                a[i + len / 2] = f.sub(u, v);
                w = f.mul(w, w_len);
            }
        }
        len <<= 1;
    }
}

/// Convolution of two Montgomery-form sequences.
pub fn convolve(a: &[u64], b: &[u64], f: &PrimeField) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let out_len = a.len() + b.len() - 1;
    let n = out_len.next_power_of_two();
    assert!(n <= 1 << TWO_ADICITY, "convolution length exceeds NTT capacity");
    let root = f.two_adic_root(n.trailing_zeros());
    let root_inv = f.inv(root);
    let mut fa = a.to_vec();
    fa.resize(n, 0);
    let mut fb = b.to_vec();
    fb.resize(n, 0);
    ntt(&mut fa, root, f);
    ntt(&mut fb, root, f);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x = f.mul(*x, *y);
    }
    ntt(&mut fa, root_inv, f);
    let n_inv = f.inv(f.to_m(n as u64));
    fa.truncate(out_len);
    for x in fa.iter_mut() {
        *x = f.mul(*x, n_inv);
    }
    fa
}

/// Evaluates `sum_i c_i y^i` at `y = g^t` for `t = 0..t_count` with one
/// convolution (chirp transform). All values in Montgomery form.
pub fn chirp_eval(coeffs: &[u64], g: u64, t_count: usize, f: &PrimeField) -> Vec<u64> {
    if coeffs.is_empty() || t_count == 0 {
        return vec![0; t_count];
    }
    let n = coeffs.len();
    let g_inv = f.inv(g);
    // gamma_u = g^{C(u,2)}, gamma_inv_u likewise for 1/g
    let max_u = n + t_count - 1;
    let mut gamma = Vec::with_capacity(max_u);
    let mut gamma_inv = Vec::with_capacity(n.max(t_count));
    let mut acc = f.one_m();
    let mut step = f.one_m();
    for _ in 0..max_u {
        gamma.push(acc);
        acc = f.mul(acc, step);
        step = f.mul(step, g);
    }
    let mut acc = f.one_m();
    let mut step = f.one_m();
    for _ in 0..n.max(t_count) {
        gamma_inv.push(acc);
        acc = f.mul(acc, step);
        step = f.mul(step, g_inv);
    }
    let mut a: Vec<u64> = (0..n).map(|i| f.mul(coeffs[i], gamma_inv[i])).collect();
    a.reverse();
    let conv = convolve(&a, &gamma, f);
    (0..t_count)
        .map(|t| f.mul(gamma_inv[t], conv[n - 1 + t]))
        .collect()
}

/// Interpolates the polynomial of degree `<= values.len() - 1` from its
/// values at the geometric nodes `g^0, g^1, ..., g^D`. Returns monomial
/// coefficients (Montgomery form). The order of `g` must exceed `D + 1`.
pub fn interpolate_geometric(values: &[u64], g: u64, f: &PrimeField) -> Vec<u64> {
    let n = values.len();
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![values[0]];
    }
    let d = n - 1;
    let one = f.one_m();
    // s_k = prod_{t=1}^k (g^t - 1), up to k = d + 1
    let mut s = Vec::with_capacity(d + 2);
    s.push(one);
    let mut gt = g;
    for _ in 1..=d + 1 {
        let last = *s.last().unwrap();
        s.push(f.mul(last, f.sub(gt, one)));
        gt = f.mul(gt, g);
    }
    // lagrange weights w_i = (-1)^{d-i} g^{C(i,2) + i(d-i)} s_i s_{d-i};
    // the exponent increases by d-1-i from one node to the next
    let g_inv = f.inv(g);
    let mut gpow = one;
    let mut w: Vec<u64> = Vec::with_capacity(n);
    let mut gstep = f.pow(g, (d as u64).saturating_sub(1));
    for i in 0..n {
        let mut wi = f.mul(gpow, f.mul(s[i], s[d - i]));
        if (d - i) % 2 == 1 {
            wi = f.sub(0, wi);
        }
        w.push(wi);
        gpow = f.mul(gpow, gstep);
        gstep = f.mul(gstep, g_inv);
    }
    // batch inversion of the weights
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(one);
    for &wi in &w {
        let last = *prefix.last().unwrap();
        prefix.push(f.mul(last, wi));
    }
    let mut inv_all = f.inv(prefix[n]);
    let mut c = vec![0u64; n];
    for i in (0..n).rev() {
        c[i] = f.mul(values[i], f.mul(inv_all, prefix[i]));
        inv_all = f.mul(inv_all, w[i]);
    }
    // h_u = sum_i c_i g^{i(u-1)} for u = 1..=d+1
    let h = chirp_eval(&c, g, n, f);
    // nodal polynomial N(x) = prod_{t=0}^d (x - g^t):
    // N_k = (-1)^{d+1-k} g^{C(d+1-k,2)} binom_g(d+1, k)
    let m = d + 1;
    let inv_s: Vec<u64> = {
        let mut pre = Vec::with_capacity(m + 2);
        pre.push(one);
        for &sk in &s {
            let last = *pre.last().unwrap();
            pre.push(f.mul(last, sk));
        }
        let mut inv_all = f.inv(pre[m + 1]);
        let mut out = vec![0u64; m + 1];
        for i in (0..=m).rev() {
            out[i] = f.mul(inv_all, pre[i]);
            inv_all = f.mul(inv_all, s[i]);
        }
        out
    };
    let mut nodal = Vec::with_capacity(m + 1);
    // g^{C(d+1-k,2)} built incrementally from k = m downward is awkward;
    // compute gamma table instead
    let mut gamma = Vec::with_capacity(m + 1);
    let mut acc = one;
    let mut step = one;
    for _ in 0..=m {
        gamma.push(acc);
        acc = f.mul(acc, step);
        step = f.mul(step, g);
    }
    for k in 0..=m {
        let binom = f.mul(s[m], f.mul(inv_s[k], inv_s[m - k]));
        let mut nk = f.mul(gamma[m - k], binom);
        if (m - k) % 2 == 1 {
            nk = f.sub(0, nk);
        }
        nodal.push(nk);
    }
    // f_k = sum_{u=1}^{m-k} N_{k+u} h_u  =  conv(N, rev h)[m + k]
    let mut rev_h = h;
    rev_h.reverse();
    let conv = convolve(&nodal, &rev_h, f);
    (0..n).map(|k| conv[m + k]).collect()
}

/// Balanced CRT: combines residues `r_i mod p_i` into the integer of
/// least absolute value congruent to all of them.
pub fn crt_balanced(residues: &[u64], fields: &[PrimeField]) -> BigInt {
    debug_assert_eq!(residues.len(), fields.len());
    use num_traits::ToPrimitive;
    let mut x = BigInt::from(0);
    let mut modulus = BigInt::from(1);
    for (&r, f) in residues.iter().zip(fields) {
        let p_big = BigInt::from(f.p);
        // t = (r - x) / modulus  mod p
        let xi = (((&x % &p_big) + &p_big) % &p_big).to_u64().unwrap();
        let mm = (&modulus % &p_big).to_u64().unwrap();
        let t = f.from_m(f.mul(f.to_m(f.sub(r % f.p, xi)), f.inv(f.to_m(mm))));
        x += &modulus * t;
        modulus *= f.p;
    }
    if &x * 2 > modulus {
        x -= &modulus;
    }
    x
}
