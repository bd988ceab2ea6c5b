//! Integer arithmetic and fixed quadrature rules shared by the other modules.

use std::ops::{Add, Mul};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest integer accepted by [`factorize`].
pub const FACTOR_LIMIT: u64 = 1_000_000_000_000;
const TRIAL_PRIME_LIMIT: u64 = 1_000_000;

/// All primes `<= limit`, in increasing order.
pub fn sieve_primes(limit: u64) -> Result<Vec<u64>> {
    if limit < 2 {
        return Err(Error::EmptyDomain(format!("no primes <= {limit}")));
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::with_capacity(estimate_prime_count(limit));
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i.saturating_mul(i);
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    Ok(primes)
}

fn estimate_prime_count(limit: u64) -> usize {
    let x = limit as f64;
    if x < 17.0 {
        8
    } else {
        (1.26 * x / x.ln()) as usize
    }
}

fn trial_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| sieve_primes(TRIAL_PRIME_LIMIT).expect("limit >= 2"))
}

/// Calls `f` on every prime `<= limit` in increasing order.
///
/// Segmented sieve over odd numbers; memory is `O(sqrt(limit))` plus one
/// segment, so it is usable for limits in the hundreds of millions.
pub fn for_each_prime<F: FnMut(u64)>(limit: u64, mut f: F) {
    if limit < 2 {
        return;
    }
    f(2);
    let root = (limit as f64).sqrt() as u64 + 1;
    let base: Vec<u64> = sieve_primes(root.max(2))
        .expect("root >= 2")
        .into_iter()
        .filter(|&p| p > 2)
        .collect();
    // Segment covers odd numbers lo, lo+2, ..., lo + 2*(SEG-1).
    const SEG: u64 = 1 << 18;
    let mut lo = 3u64;
    let mut marks = vec![false; SEG as usize];
    while lo <= limit {
        let hi = (lo + 2 * (SEG - 1)).min(limit);
        let len = ((hi - lo) / 2 + 1) as usize;
        marks[..len].iter_mut().for_each(|m| *m = false);
        for &p in &base {
            let p2 = p * p;
            if p2 > hi {
                break;
            }
            let mut start = if p2 >= lo { p2 } else { lo.div_ceil(p) * p };
            if start % 2 == 0 {
                start += p;
            }
            let mut idx = ((start - lo) / 2) as usize;
            while idx < len {
                marks[idx] = true;
                idx += p as usize;
            }
        }
        for (i, &m) in marks[..len].iter().enumerate() {
            if !m {
                f(lo + 2 * i as u64);
            }
        }
        lo = hi + 2;
        if hi == limit || hi + 1 == limit {
            break;
        }
    }
}

/// Canonical factorization of a positive integer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    pub n: u64,
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn product(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| p.pow(e))
            .product::<u64>()
    }

    /// `Some((p, k))` when `n = p^k` with `k >= 1`.
    pub fn prime_power(&self) -> Option<(u64, u32)> {
        match self.factors.as_slice() {
            [(p, k)] => Some((*p, *k)),
            _ => None,
        }
    }
}

/// Trial division by the primes below `10^6`; inputs above `10^12` are rejected.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::Domain("factorize(0)".into()));
    }
    if n > FACTOR_LIMIT {
        return Err(Error::Resource {
            requested: n,
            bound: FACTOR_LIMIT,
        });
    }
    let mut rest = n;
    let mut factors = Vec::new();
    for &p in trial_primes() {
        if p * p > rest {
            break;
        }
        if rest.is_multiple_of(p) {
            let mut e = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                e += 1;
            }
            factors.push((p, e));
        }
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(Factorization { n, factors })
}

/// `Some((p, k))` when `n = p^k`, computed without a full factorization table.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    factorize(n).ok()?.prime_power()
}

/// The von Mangoldt function.
pub fn von_mangoldt(n: u64) -> f64 {
    match prime_power(n) {
        Some((p, _)) => (p as f64).ln(),
        None => 0.0,
    }
}

/// Smallest-prime-factor table for `0..=limit`; `spf[n] == n` for primes.
pub fn smallest_prime_factors(limit: usize) -> Vec<u32> {
    let mut spf = vec![0u32; limit + 1];
    for i in 2..=limit {
        if spf[i] == 0 {
            let mut j = i;
            while j <= limit {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    if limit >= 1 {
        spf[1] = 1;
    }
    spf
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .map(|f| {
            f.factors
                .iter()
                .fold(n, |acc, &(p, _)| acc / p * (p - 1))
        })
        .unwrap_or(0)
}

const BERNOULLI_EVEN: [(f64, f64); 30] = [
    (1.0, 6.0),
    (-1.0, 30.0),
    (1.0, 42.0),
    (-1.0, 30.0),
    (5.0, 66.0),
    (-691.0, 2730.0),
    (7.0, 6.0),
    (-3617.0, 510.0),
    (43867.0, 798.0),
    (-174611.0, 330.0),
    (854513.0, 138.0),
    (-236364091.0, 2730.0),
    (8553103.0, 6.0),
    (-23749461029.0, 870.0),
    (8615841276005.0, 14322.0),
    (-7709321041217.0, 510.0),
    (2577687858367.0, 6.0),
    (-26315271553053477373.0, 1919190.0),
    (2929993913841559.0, 6.0),
    (-261082718496449122051.0, 13530.0),
    (1520097643918070802691.0, 1806.0),
    (-27833269579301024235023.0, 690.0),
    (596451111593912163277961.0, 282.0),
    (-5609403368997817686249127547.0, 46410.0),
    (495057205241079648212477525.0, 66.0),
    (-801165718135489957347924991853.0, 1590.0),
    (29149963634884862421418123812691.0, 798.0),
    (-2479392929313226753685415739663229.0, 870.0),
    (84483613348880041862046775994036021.0, 354.0),
    (-1215233140483755572040304994079820246041491.0, 56786730.0),
];

/// `B_2, B_4, ..., B_{2 count}` as binary64 values.
pub fn bernoulli_numbers(count: usize) -> Result<Vec<f64>> {
    if count > BERNOULLI_EVEN.len() {
        return Err(Error::UnsupportedPrecision(format!(
            "at most {} even Bernoulli numbers are tabulated, asked for {count}",
            BERNOULLI_EVEN.len()
        )));
    }
    Ok(BERNOULLI_EVEN[..count]
        .iter()
        .map(|&(num, den)| num / den)
        .collect())
}

/// A Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    /// `n`-point Gauss–Legendre rule, nodes by Newton iteration on `P_n`.
    pub fn gauss_legendre(n: usize) -> Self {
        assert!(n >= 1, "rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    let (_, d) = legendre_with_derivative(n, x);
                    dp = d;
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        QuadratureRule { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Integral of `f` over `[a, b]` with one application of the rule.
    pub fn integrate<T, F>(&self, a: f64, b: f64, mut f: F) -> T
    where
        T: Copy + Default + Add<Output = T> + Mul<f64, Output = T>,
        F: FnMut(f64) -> T,
    {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = T::default();
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + f(mid + half * x) * w;
        }
        acc * half
    }

    /// Composite rule over `panels` equal panels of `[a, b]`.
    pub fn composite<T, F>(&self, a: f64, b: f64, panels: usize, mut f: F) -> T
    where
        T: Copy + Default + Add<Output = T> + Mul<f64, Output = T>,
        F: FnMut(f64) -> T,
    {
        let panels = panels.max(1);
        let h = (b - a) / panels as f64;
        let mut acc = T::default();
        for k in 0..panels {
            let lo = a + h * k as f64;
            let hi = if k + 1 == panels { b } else { lo + h };
            acc = acc + self.integrate(lo, hi, &mut f);
        }
        acc
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// The shared 32-point Gauss–Legendre rule.
pub fn gl32() -> &'static QuadratureRule {
    static RULE: OnceLock<QuadratureRule> = OnceLock::new();
    RULE.get_or_init(|| QuadratureRule::gauss_legendre(32))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sieves() {
        assert_eq!(sieve_primes(10).unwrap(), vec![2, 3, 5, 7]);
        assert_eq!(sieve_primes(2).unwrap(), vec![2]);
        assert!(matches!(sieve_primes(1), Err(Error::EmptyDomain(_))));
    }

    #[test]
    fn sieve_matches_trial_division() {
        let by_trial: Vec<u64> = (2..=100u64)
            .filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0))
            .collect();
        assert_eq!(by_trial.len(), 25);
        assert_eq!(sieve_primes(100).unwrap(), by_trial);
    }

    #[test]
    fn segmented_sieve_agrees_with_plain_sieve() {
        for limit in [2u64, 3, 4, 100, 1_000_003, 2 * (1 << 18) + 7] {
            let mut seg = Vec::new();
            for_each_prime(limit, |p| seg.push(p));
            assert_eq!(seg, sieve_primes(limit).unwrap(), "limit {limit}");
        }
    }

    #[test]
    fn von_mangoldt_values() {
        assert!((von_mangoldt(8) - 2f64.ln()).abs() < 1e-15);
        assert_eq!(von_mangoldt(1), 0.0);
        assert_eq!(von_mangoldt(12), 0.0);
        assert!((von_mangoldt(9973) - 9973f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn factorizations() {
        assert_eq!(factorize(12).unwrap().factors, vec![(2, 2), (3, 1)]);
        assert!(factorize(1).unwrap().factors.is_empty());
        assert_eq!(factorize(9973).unwrap().factors, vec![(9973, 1)]);
        let big = 999_983u64 * 999_979;
        assert_eq!(
            factorize(big).unwrap().factors,
            vec![(999_979, 1), (999_983, 1)]
        );
        assert!(matches!(
            factorize(FACTOR_LIMIT + 1),
            Err(Error::Resource { .. })
        ));
    }

    #[test]
    fn chebyshev_psi_is_log_lcm() {
        // log lcm(1..x) = sum over p <= x of floor(log_p x) log p.
        let mut psi = 0.0;
        for x in 1..=10_000u64 {
            psi += von_mangoldt(x);
            if x % 997 == 0 || x == 10_000 {
                let mut log_lcm = 0.0;
                for p in sieve_primes(x.max(2)).unwrap() {
                    if p > x {
                        break;
                    }
                    let mut pk = p;
                    while pk * p <= x {
                        pk *= p;
                    }
                    log_lcm += (pk as f64).ln();
                }
                assert!((psi - log_lcm).abs() < 1e-9, "x = {x}");
            }
        }
    }

    #[test]
    fn bernoulli_against_recurrence() {
        // sum_{j<=m} C(m+1, j) B_j = 0 in exact rationals (i128 is enough up to B_20).
        fn gcd_i(a: i128, b: i128) -> i128 {
            if b == 0 {
                a.abs()
            } else {
                gcd_i(b, a % b)
            }
        }
        let mut b: Vec<(i128, i128)> = vec![(1, 1)];
        for m in 1..=20usize {
            let (mut num, mut den) = (0i128, 1i128);
            let mut binom = 1i128;
            for (j, &(bn, bd)) in b.iter().enumerate() {
                if j > 0 {
                    binom = binom * (m as i128 + 2 - j as i128) / j as i128;
                }
                num = num * bd + binom * bn * den;
                den *= bd;
                let g = gcd_i(num, den);
                num /= g;
                den /= g;
            }
            let (n2, d2) = (-num, den * (m as i128 + 1));
            let g = gcd_i(n2, d2);
            b.push((n2 / g, d2 / g));
        }
        let table = bernoulli_numbers(10).unwrap();
        for k in 1..=10 {
            let (n, d) = b[2 * k];
            assert_eq!(table[k - 1], n as f64 / d as f64, "B_{}", 2 * k);
        }
        assert_eq!(bernoulli_numbers(1).unwrap(), vec![1.0 / 6.0]);
        assert_eq!(bernoulli_numbers(2).unwrap(), vec![1.0 / 6.0, -1.0 / 30.0]);
        assert_eq!(*bernoulli_numbers(5).unwrap().last().unwrap(), 5.0 / 66.0);
        assert!(matches!(
            bernoulli_numbers(31),
            Err(Error::UnsupportedPrecision(_))
        ));
    }

    #[test]
    fn gauss_legendre_structure() {
        let rule = gl32();
        let total: f64 = rule.weights.iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
        assert!(rule.nodes.windows(2).all(|w| w[0] < w[1]));
        assert!(rule.weights.iter().all(|&w| w > 0.0));
        for deg in 0..64 {
            let exact = if deg % 2 == 1 {
                0.0
            } else {
                2.0 / (deg as f64 + 1.0)
            };
            let got: f64 = rule.integrate(-1.0, 1.0, |x| x.powi(deg));
            assert!((got - exact).abs() < 1e-12, "degree {deg}");
        }
    }

    fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
        fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
            let m = 0.5 * (a + b);
            let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
            let (flm, frm) = (f(lm), f(rm));
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
                left + right + (left + right - whole) / 15.0
            } else {
                rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
                    + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
            }
        }
        let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        rec(f, a, b, fa, fm, fb, whole, tol, 40)
    }

    #[test]
    fn gaussian_integral_matches_adaptive_oracle() {
        let f = |t: f64| (-t * t).exp();
        let reference = adaptive_simpson(&f, -1.0, 1.0, 1e-15);
        let got: f64 = gl32().integrate(-1.0, 1.0, f);
        assert!((got - reference).abs() < 1e-13, "{got} vs {reference}");
    }

    proptest::proptest! {
        #[test]
        fn factorize_inverts_multiplication(a in 0usize..78_498, b in 0usize..78_498, e in 1u32..3) {
            let primes = trial_primes();
            let (p, q) = (primes[a], primes[b]);
            let n = p.pow(e) * q;
            if n <= FACTOR_LIMIT {
                let f = factorize(n).unwrap();
                proptest::prop_assert_eq!(f.product(), n);
                proptest::prop_assert!(f.factors.windows(2).all(|w| w[0].0 < w[1].0));
                proptest::prop_assert!(f.factors.iter().all(|&(_, k)| k >= 1));
            }
        }
    }
}
