//! Mean values of `lambda(n)`: the Halasz functional, the maximizer `t1`,
//! Lipschitz and factoring defects, the twist `phi`, Mertens-type sums and
//! the cosine sum over primes.

use std::f64::consts::{E, PI};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{sieve_primes, smallest_prime_factors};
use crate::eval::{l_value, MAX_HEIGHT};
use crate::instances::LFunctionInstance;
use crate::report::IdentityReport;
use crate::{Error, Result};

/// Default cap on the `t`-window of every scan.
pub const DEFAULT_T_CAP: f64 = 200.0;
pub const DEFAULT_RATIO_CEILING: f64 = 20.0;
/// Default constant in `y = max(exp(c (log log x)^2), exp(1/|tau|))`.
pub const DEFAULT_COSINE_C: f64 = 1.0;
/// Allowed excess of the cosine sum over its main terms (the `O(1)`).
pub const DEFAULT_COSINE_SLACK: f64 = 1.0;
const GOLDEN_TOL: f64 = 1e-6;

/// `sum_{n <= x} lambda(n) n^(-i phi)`.
pub fn partial_sum_lambda(inst: &LFunctionInstance, x: f64, phi: f64) -> Result<Complex64> {
    if x < 1.0 {
        return Ok(Complex64::default());
    }
    let top = x.floor() as u64;
    if top > inst.cache_bound() {
        return Err(Error::Resource {
            requested: top,
            bound: inst.cache_bound(),
        });
    }
    let mut acc = Complex64::default();
    for n in 1..=top {
        let c = inst.coefficient_unchecked(n);
        if phi == 0.0 {
            acc += c;
        } else {
            acc += c * Complex64::from_polar(1.0, -phi * (n as f64).ln());
        }
    }
    Ok(acc)
}

/// Outcome of a windowed argmax scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanMax {
    pub t: f64,
    pub value: f64,
    pub grid_t: f64,
    pub grid_value: f64,
    pub window: f64,
    pub step: f64,
    /// The window was cut down to the evaluation ceiling.
    pub height_clamped: bool,
}

fn better(a: (f64, f64), b: (f64, f64)) -> bool {
    // Larger value; ties go to smaller |t|, then to t >= 0.
    if a.1 != b.1 {
        return a.1 > b.1;
    }
    if a.0.abs() != b.0.abs() {
        return a.0.abs() < b.0.abs();
    }
    a.0 >= 0.0 && b.0 < 0.0
}

/// Maximizes `f` over `[-window, window]` (or `[0, window]` if `even`) on a
/// grid of the given step followed by golden-section refinement. The refined
/// point is used only when it does not lose to the best grid point.
pub fn scan_max<F>(window: f64, step: f64, even: bool, f: F) -> Result<ScanMax>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let height_clamped = window > MAX_HEIGHT;
    let window = window.clamp(0.0, MAX_HEIGHT);
    let n = (window / step).floor() as i64;
    let mut grid: Vec<f64> = (if even { 0 } else { -n }..=n).map(|i| i as f64 * step).collect();
    if window > 0.0 && (window - n as f64 * step) > 1e-12 {
        grid.push(window);
        if !even {
            grid.insert(0, -window);
        }
    }
    let values = grid
        .par_iter()
        .map(|&t| f(t))
        .collect::<Result<Vec<f64>>>()?;
    let mut best = (grid[0], values[0]);
    for (&t, &v) in grid.iter().zip(&values) {
        if better((t, v), best) {
            best = (t, v);
        }
    }
    let lo_limit = if even { 0.0 } else { -window };
    let (mut a, mut b) = ((best.0 - step).max(lo_limit), (best.0 + step).min(window));
    let mut refined = best;
    if b > a {
        let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
        let mut c = b - inv_phi * (b - a);
        let mut d = a + inv_phi * (b - a);
        let (mut fc, mut fd) = (f(c)?, f(d)?);
        while b - a > GOLDEN_TOL {
            if fc >= fd {
                b = d;
                d = c;
                fd = fc;
                c = b - inv_phi * (b - a);
                fc = f(c)?;
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + inv_phi * (b - a);
                fd = f(d)?;
            }
        }
        let t = 0.5 * (a + b);
        let candidate = (t, f(t)?);
        if candidate.1 >= best.1 {
            refined = candidate;
        }
    }
    Ok(ScanMax {
        t: refined.0,
        value: refined.1,
        grid_t: best.0,
        grid_value: best.1,
        window,
        step,
        height_clamped,
    })
}

fn check_x(x: f64) -> Result<()> {
    if x >= 3.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("x = {x} < 3")))
    }
}

fn halasz_window(inst: &LFunctionInstance, log_x: f64, t_cap: f64) -> f64 {
    log_x.powi(inst.kappa() as i32).min(t_cap).max(0.0)
}

/// `t1` maximizing `|L(1 + 1/log x + it)|` over `|t| <= min((log x)^kappa, t_cap)`.
pub fn maximizer_t1(inst: &LFunctionInstance, x: f64, t_cap: f64) -> Result<ScanMax> {
    check_x(x)?;
    let log_x = x.ln();
    let sigma = 1.0 + 1.0 / log_x;
    scan_max(
        halasz_window(inst, log_x, t_cap),
        1.0 / (4.0 * log_x),
        inst.has_real_coefficients(),
        |t| Ok(l_value(inst, Complex64::new(sigma, t))?.norm()),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalaszM {
    pub m: f64,
    pub scan: ScanMax,
}

/// `M` defined by `max |L(1 + 1/log x + it) / (1 + 1/log x + it)| = e^-M (log x)^kappa`.
pub fn halasz_m(inst: &LFunctionInstance, x: f64, t_cap: f64) -> Result<HalaszM> {
    check_x(x)?;
    let log_x = x.ln();
    let sigma = 1.0 + 1.0 / log_x;
    let scan = scan_max(
        halasz_window(inst, log_x, t_cap),
        1.0 / (4.0 * log_x),
        inst.has_real_coefficients(),
        |t| {
            let s = Complex64::new(sigma, t);
            Ok(l_value(inst, s)?.norm() / s.norm())
        },
    )?;
    let m = inst.kappa() as f64 * log_x.ln() - scan.value.ln();
    Ok(HalaszM { m, scan })
}

fn window_flags(report: IdentityReport, scan: &ScanMax) -> IdentityReport {
    if scan.height_clamped {
        report.flag("window-clamped-to-height-ceiling")
    } else {
        report
    }
}

/// `|S(x)| / [(1+M) e^-M x (log x)^(kappa-1) + x (log log x)^2 / log x]`.
pub fn halasz_ratio(inst: &LFunctionInstance, x: f64, t_cap: f64, ceiling: f64) -> Result<IdentityReport> {
    check_x(x)?;
    let s = partial_sum_lambda(inst, x, 0.0)?;
    let hm = halasz_m(inst, x, t_cap)?;
    let log_x = x.ln();
    let kappa = inst.kappa() as f64;
    let trivial = x * log_x.powf(kappa - 1.0);
    let envelope = (1.0 + hm.m) * (-hm.m).exp() * trivial + x * log_x.ln().powi(2) / log_x;
    let ratio = s.norm() / envelope;
    let report = IdentityReport::new(
        "halasz",
        inst.name(),
        Complex64::new(s.norm(), 0.0),
        Complex64::new(envelope, 0.0),
        ratio,
        ceiling,
    )
    .input("x", x)
    .constant("t_cap", t_cap)
    .constant("ratio_ceiling", ceiling)
    .extra("M", hm.m)
    .extra("t_star", hm.scan.t)
    .extra("window", hm.scan.window)
    .extra("trivial_ratio", s.norm() / trivial);
    Ok(window_flags(report, &hm.scan))
}

/// Lipschitz defect at the maximizer `t1`, against its envelope.
pub fn lipschitz_defect(
    inst: &LFunctionInstance,
    x: f64,
    omega: f64,
    t_cap: f64,
    ceiling: f64,
) -> Result<IdentityReport> {
    check_x(x)?;
    if !(omega >= 1.0 && omega <= x.cbrt() * (1.0 + 1e-12)) {
        return Err(Error::Domain(format!(
            "omega = {omega} outside [1, x^(1/3)] for x = {x}"
        )));
    }
    let t1 = maximizer_t1(inst, x, t_cap)?;
    let full = partial_sum_lambda(inst, x, t1.t)?;
    let short = partial_sum_lambda(inst, x / omega, t1.t)?;
    let lhs = ((full - short * omega) / x).norm();
    let log_x = x.ln();
    let loglog = log_x.ln();
    let kappa = inst.kappa() as f64;
    let exponent = (kappa * (1.0 - (2.0 / PI).sqrt())).min(1.0);
    let envelope = ((omega.ln() + loglog * loglog) / log_x).powf(exponent)
        * log_x.powf(kappa - 1.0)
        * (log_x / (1.0 + omega.ln())).ln();
    let ratio = if lhs == 0.0 { 0.0 } else { lhs / envelope };
    let report = IdentityReport::new(
        "lipschitz",
        inst.name(),
        Complex64::new(lhs, 0.0),
        Complex64::new(envelope, 0.0),
        ratio,
        ceiling,
    )
    .input("x", x)
    .input("omega", omega)
    .constant("t_cap", t_cap)
    .constant("ratio_ceiling", ceiling)
    .extra("t1", t1.t);
    Ok(window_flags(report, &t1))
}

/// `exp(sum_{n <= x} |a(n) - n^(i phi)| Lambda(n) / (n log n))` together with
/// the two Mertens sums, all over prime powers up to `x`.
fn prime_power_sums(inst: &LFunctionInstance, x: f64, phi: f64) -> Result<(f64, f64, f64)> {
    let top = x.floor() as u64;
    if top > inst.cache_bound() {
        return Err(Error::Resource {
            requested: top,
            bound: inst.cache_bound(),
        });
    }
    let (mut dist, mut a2, mut plain) = (0.0, 0.0, 0.0);
    if top < 2 {
        return Ok((dist, a2, plain));
    }
    let spf = smallest_prime_factors(top as usize);
    for n in 2..=top {
        let p = spf[n as usize] as u64;
        let mut m = n;
        let mut k = 0;
        while m % p == 0 {
            m /= p;
            k += 1;
        }
        if m != 1 {
            continue;
        }
        let a = inst.a_prime_power(p, k);
        // Lambda(n) / (n log n) = 1 / (k n).
        let w = 1.0 / (k as f64 * n as f64);
        let twist = Complex64::from_polar(1.0, phi * (n as f64).ln());
        dist += (a - twist).norm() * w;
        a2 += a.norm_sqr() * w;
        plain += w;
    }
    Ok((dist, a2, plain))
}

/// Defect of the factoring identity relating `sum f(n)` to `sum f(n) n^(-i phi)`.
pub fn factoring_defect(inst: &LFunctionInstance, x: f64, phi: f64, ceiling: f64) -> Result<IdentityReport> {
    check_x(x)?;
    let plain = partial_sum_lambda(inst, x, 0.0)?;
    let twisted = partial_sum_lambda(inst, x, phi)?;
    let factor = Complex64::from_polar(1.0, phi * x.ln()) / Complex64::new(1.0, phi);
    let lhs = (plain - factor * twisted).norm();
    let (dist, _, _) = prime_power_sums(inst, x, phi)?;
    let log_x = x.ln();
    let envelope = x * log_x.ln().powi(inst.kappa() as i32) * (E + phi.abs()).ln().ln() / log_x
        * dist.exp();
    let ratio = if lhs == 0.0 { 0.0 } else { lhs / envelope };
    Ok(IdentityReport::new(
        "factoring",
        inst.name(),
        Complex64::new(lhs, 0.0),
        Complex64::new(envelope, 0.0),
        ratio,
        ceiling,
    )
    .input("x", x)
    .input("phi", phi)
    .constant("ratio_ceiling", ceiling)
    .extra("distance_sum", dist))
}

/// The twist `phi(y0)` and the size parameter `N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwistSelection {
    pub y0: f64,
    pub n: f64,
    pub phi: f64,
    pub m: f64,
    pub partial_sum: Complex64,
    pub scan_step: f64,
    pub scan_cap: f64,
    pub scan: ScanMax,
    /// `|sum f(n) n^(-i phi) - (1 + i phi) e^(-i phi y0) sum f(n)|` over `n <= e^y0`.
    pub defect: f64,
    /// `e^y0 y0^(kappa - 1 - 1/5)`.
    pub rhs_budget: f64,
    /// `|phi| y0 / N^(6/kappa)`, for real-coefficient instances.
    pub phi_real_ratio: Option<f64>,
    /// Whether `N <= y0^(1/10)`.
    pub in_hypothesis: bool,
}

/// The scan behind `phi`: argmax of `|L(1 + 1/y0 + it) / (1 + 1/y0 + it)|`
/// over `|t| <= min(y0^kappa, t_cap)`. It does not need `S(e^y0) != 0`.
pub fn select_phi(inst: &LFunctionInstance, y0: f64, t_cap: f64) -> Result<ScanMax> {
    if !(y0 > 0.0) {
        return Err(Error::Domain(format!("y0 = {y0} must be positive")));
    }
    let sigma = 1.0 + 1.0 / y0;
    let window = y0.powf(inst.kappa() as f64).min(t_cap);
    scan_max(window, 1.0 / (4.0 * y0), inst.has_real_coefficients(), |t| {
        let z = Complex64::new(sigma, t);
        Ok(l_value(inst, z)?.norm() / z.norm())
    })
}

/// Selects `phi` through [`select_phi`] and derives `N`, `M` and the defect.
pub fn twist_phi(inst: &LFunctionInstance, y0: f64, t_cap: f64) -> Result<TwistSelection> {
    if !(y0 > 0.0) {
        return Err(Error::Domain(format!("y0 = {y0} must be positive")));
    }
    let x = y0.exp();
    let s = partial_sum_lambda(inst, x, 0.0)?;
    if s.norm() == 0.0 {
        return Err(Error::UndefinedN(y0));
    }
    let kappa = inst.kappa() as f64;
    let n = x * y0.powf(kappa - 1.0) / s.norm();
    let scan = select_phi(inst, y0, t_cap)?;
    let step = scan.step;
    let phi = scan.t;
    let m = kappa * y0.ln() - scan.value.ln();
    let twisted = partial_sum_lambda(inst, x, phi)?;
    let factor = Complex64::new(1.0, phi) * Complex64::from_polar(1.0, -phi * y0);
    let defect = (twisted - factor * s).norm();
    Ok(TwistSelection {
        y0,
        n,
        phi,
        m,
        partial_sum: s,
        scan_step: step,
        scan_cap: t_cap,
        scan,
        defect,
        rhs_budget: x * y0.powf(kappa - 1.2),
        phi_real_ratio: inst
            .has_real_coefficients()
            .then(|| phi.abs() * y0 / n.powf(6.0 / kappa)),
        in_hypothesis: n <= y0.powf(0.1),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MertensSums {
    pub y0: f64,
    /// `sum_{2 <= n <= e^y0} |a(n)|^2 Lambda(n) / (n log n)`.
    pub sum_a2: f64,
    /// `sum_{2 <= n <= e^y0} Lambda(n) / (n log n)`.
    pub sum_plain: f64,
    /// `sum_a2 - kappa^2 log y0`.
    pub excess_a2: f64,
    /// `sum_plain - log y0`.
    pub excess_plain: f64,
}

pub fn mertens_sums(inst: &LFunctionInstance, y0: f64) -> Result<MertensSums> {
    let (_, sum_a2, sum_plain) = prime_power_sums(inst, y0.exp(), 0.0)?;
    let kappa = inst.kappa() as f64;
    Ok(MertensSums {
        y0,
        sum_a2,
        sum_plain,
        excess_a2: sum_a2 - kappa * kappa * y0.ln(),
        excess_plain: sum_plain - y0.ln(),
    })
}

/// `sum_{p <= x} |cos(tau log p)| / p` against
/// `(2/pi) log(log x / log y) + log log y`.
pub fn cosine_sum(tau: f64, x: f64, c: f64, slack: f64) -> Result<IdentityReport> {
    if x < 1e3 {
        return Err(Error::Domain(format!("x = {x} < 1000")));
    }
    let primes = sieve_primes(x.floor() as u64)?;
    let lhs: f64 = primes
        .iter()
        .map(|&p| (tau * (p as f64).ln()).cos().abs() / p as f64)
        .sum();
    let loglog = x.ln().ln();
    let mut flags = Vec::new();
    let log_y = if tau == 0.0 {
        flags.push("degenerate-tau");
        f64::INFINITY
    } else {
        (c * loglog * loglog).max(1.0 / tau.abs())
    };
    let rhs = if log_y.is_finite() {
        2.0 / PI * (x.ln() / log_y).ln() + log_y.ln()
    } else {
        // Every |cos| is 1: the sum is Mertens' sum over primes.
        loglog
    };
    if log_y > x.ln() {
        flags.push("y-exceeds-x");
    }
    let mut report = IdentityReport::new(
        "cosine",
        "none",
        Complex64::new(lhs, 0.0),
        Complex64::new(rhs, 0.0),
        lhs - rhs,
        slack,
    )
    .input("tau", tau)
    .input("x", x)
    .constant("cosine_c", c)
    .constant("cosine_slack", slack)
    .extra("log_y", if log_y.is_finite() { log_y } else { -1.0 });
    for f in flags {
        report = report.flag(f);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{delta_instance, instance_by_name};
    use std::sync::OnceLock;

    fn chi4() -> &'static LFunctionInstance {
        static I: OnceLock<LFunctionInstance> = OnceLock::new();
        I.get_or_init(|| instance_by_name("chi4", 0).unwrap())
    }

    fn delta() -> &'static LFunctionInstance {
        static I: OnceLock<LFunctionInstance> = OnceLock::new();
        I.get_or_init(|| delta_instance(120_000).unwrap())
    }

    #[test]
    fn partial_sums() {
        assert_eq!(partial_sum_lambda(chi4(), 10.0, 0.0).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(partial_sum_lambda(chi4(), 0.5, 3.0).unwrap(), Complex64::default());
        let a = partial_sum_lambda(chi4(), 10.0, 1.3).unwrap();
        let b = partial_sum_lambda(chi4(), 10.0, -1.3).unwrap();
        assert!((a - b.conj()).norm() < 1e-15);
        assert!(matches!(partial_sum_lambda(delta(), 2e5, 0.0), Err(Error::Resource { .. })));
    }

    #[test]
    fn scans_dominate_grid() {
        let t1 = maximizer_t1(chi4(), 1e3, DEFAULT_T_CAP).unwrap();
        assert!(t1.value >= t1.grid_value);
        assert!(t1.t >= 0.0);
        let at_zero = l_value(chi4(), Complex64::new(1.0 + 1.0 / 1e3f64.ln(), 0.0)).unwrap().norm();
        assert!(t1.value >= at_zero);
        let forced = maximizer_t1(chi4(), 1e3, 0.0).unwrap();
        assert_eq!(forced.t, 0.0);
        let d = maximizer_t1(delta(), 1e4, DEFAULT_T_CAP).unwrap();
        assert!(d.value >= d.grid_value && d.t >= 0.0);
    }

    #[test]
    fn halasz_functional() {
        for x in [1e2, 1e3, 1e4, 1e5, 1e6] {
            let hm = halasz_m(chi4(), x, DEFAULT_T_CAP).unwrap();
            assert!(hm.m >= -0.5, "x = {x}: M = {}", hm.m);
            assert!(hm.scan.value >= hm.scan.grid_value);
            let lhs = (-hm.m).exp() * x.ln();
            assert!((lhs - hm.scan.value).abs() <= 1e-10 * lhs);
            // The |L| maximizer cannot beat the ratio maximum.
            let t1 = maximizer_t1(chi4(), x, DEFAULT_T_CAP).unwrap();
            let at_t1 = t1.value / Complex64::new(1.0 + 1.0 / x.ln(), t1.t).norm();
            assert!(at_t1 <= hm.scan.value * (1.0 + 1e-12));
        }
        let r = halasz_ratio(chi4(), 3.5, DEFAULT_T_CAP, DEFAULT_RATIO_CEILING).unwrap();
        assert!(r.residual.is_finite() && r.pass);
        let r = halasz_ratio(delta(), 1e5, DEFAULT_T_CAP, DEFAULT_RATIO_CEILING).unwrap();
        assert!(r.residual.is_finite());
        assert!(r.has_flag("window-clamped-to-height-ceiling"));
    }

    #[test]
    fn lipschitz() {
        let r = lipschitz_defect(chi4(), 1e5, 1.0, DEFAULT_T_CAP, DEFAULT_RATIO_CEILING).unwrap();
        assert_eq!(r.lhs.re, 0.0);
        let r = lipschitz_defect(chi4(), 1e5, 10.0, DEFAULT_T_CAP, DEFAULT_RATIO_CEILING).unwrap();
        assert!(r.residual.is_finite());
        let edge = 1e6f64.cbrt();
        assert!(lipschitz_defect(chi4(), 1e6, edge, DEFAULT_T_CAP, DEFAULT_RATIO_CEILING).is_ok());
        assert!(lipschitz_defect(chi4(), 1e6, 200.0, DEFAULT_T_CAP, DEFAULT_RATIO_CEILING).is_err());
        assert!(lipschitz_defect(chi4(), 1e6, 0.5, DEFAULT_T_CAP, DEFAULT_RATIO_CEILING).is_err());
    }

    #[test]
    fn factoring() {
        let r = factoring_defect(chi4(), 1e4, 0.0, DEFAULT_RATIO_CEILING).unwrap();
        assert_eq!(r.lhs.re, 0.0);
        let r = factoring_defect(chi4(), 1e4, 1.0, DEFAULT_RATIO_CEILING).unwrap();
        assert!(r.residual.is_finite() && r.residual > 0.0);
        let mut last = 0.0;
        for phi in [1.0, 10.0, 100.0, 1000.0] {
            let env = (E + phi).ln().ln();
            assert!(env > last);
            last = env;
        }
    }

    #[test]
    fn twist() {
        assert_eq!(twist_phi(chi4(), 8.0, DEFAULT_T_CAP).unwrap_err(), Error::UndefinedN(8.0));
        let tw = twist_phi(chi4(), 10.0, DEFAULT_T_CAP).unwrap();
        let identity = tw.partial_sum.norm() * tw.n;
        let want = 10f64.exp();
        assert!((identity - want).abs() <= 1e-12 * want);
        assert!(tw.phi >= 0.0);
        assert!(tw.scan.value >= tw.scan.grid_value);
        assert!(!tw.in_hypothesis);
        assert!(tw.phi_real_ratio.is_some());
        let sigma = 1.1;
        for t in [0.3, 2.0, 7.7] {
            let f = |t: f64| {
                let z = Complex64::new(sigma, t);
                l_value(chi4(), z).unwrap().norm() / z.norm()
            };
            assert!((f(t) - f(-t)).abs() <= 1e-12 * f(t));
        }
        let dt = twist_phi(delta(), 9.0, DEFAULT_T_CAP).unwrap();
        assert!((dt.partial_sum.norm() * dt.n - 9f64.exp() * 9.0).abs() <= 1e-12 * 9f64.exp() * 9.0);
    }

    #[test]
    fn mertens() {
        let small = mertens_sums(chi4(), 0.5).unwrap();
        assert_eq!((small.sum_a2, small.sum_plain), (0.0, 0.0));
        let m = mertens_sums(chi4(), 10.0).unwrap();
        assert!(m.sum_a2 <= m.sum_plain);
        assert!(m.excess_plain.abs() < 1.0);
        let d = mertens_sums(delta(), 11.0).unwrap();
        assert!(d.excess_a2.is_finite());
    }

    #[test]
    fn cosine() {
        let big = cosine_sum(1234.5, 1e6, DEFAULT_COSINE_C, DEFAULT_COSINE_SLACK).unwrap();
        let mertens: f64 = sieve_primes(1_000_000).unwrap().iter().map(|&p| 1.0 / p as f64).sum();
        assert!(big.lhs.re < mertens);
        let r = cosine_sum(0.5, 1e6, DEFAULT_COSINE_C, DEFAULT_COSINE_SLACK).unwrap();
        assert!(r.pass, "{r:?}");
        let flat = cosine_sum(0.0, 1e4, DEFAULT_COSINE_C, DEFAULT_COSINE_SLACK).unwrap();
        assert!(flat.has_flag("degenerate-tau"));
        assert!(cosine_sum(1.0, 999.0, 1.0, 1.0).is_err());
        // Equidistribution: averaged over many large tau the sum is (2/pi) sum 1/p.
        let taus: Vec<f64> = (0..40).map(|i| 1000.0 + 37.3 * i as f64).collect();
        let mean = taus
            .iter()
            .map(|&t| cosine_sum(t, 1e6, 1.0, 1.0).unwrap().lhs.re)
            .sum::<f64>()
            / taus.len() as f64;
        assert!((mean - 2.0 / PI * mertens).abs() < 0.1, "{mean}");
    }
}
