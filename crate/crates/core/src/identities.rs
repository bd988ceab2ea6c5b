//! Numerical checks of the identities linking partial sums, `L`-values and
//! zeros: the Plancherel identity, the hybrid Euler–Hadamard product (full
//! and truncated), the power-saving partial-sum bound, and the repulsion scan.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{gl32, QuadratureRule};
use crate::constants::{self as cn, Constants};
use crate::eval::{l_value, log_l_with, prime_sum_side_batch, EvalConfig};
use crate::instances::LFunctionInstance;
use crate::meanvalue::{partial_sum_lambda, scan_max, select_phi};
use crate::report::IdentityReport;
use crate::special::BumpKernel;
use crate::zeros::ZeroSet;
use crate::{Error, Result};

/// Gaussian weights below this are dropped from the Plancherel `y`-integral.
pub const GAUSSIAN_CUTOFF: f64 = 1e-15;
/// Below this `T` the Plancherel check is flagged ill-conditioned.
pub const ILL_CONDITIONED_T: f64 = 1e-3;
/// Closest approach of `s` to a zero accepted by the Euler–Hadamard checks.
pub const ZERO_PROXIMITY: f64 = 1e-8;

fn gl10() -> &'static QuadratureRule {
    static RULE: OnceLock<QuadratureRule> = OnceLock::new();
    RULE.get_or_init(|| QuadratureRule::gauss_legendre(10))
}

/// `lambda` must lie in `[0, 1/(m + 15))`.
fn check_lambda(inst: &LFunctionInstance, lam: f64) -> Result<()> {
    let top = 1.0 / (inst.degree() as f64 + 15.0);
    if (0.0..top).contains(&lam) {
        Ok(())
    } else {
        Err(Error::Domain(format!("lambda = {lam} outside [0, {top})")))
    }
}

/// Both sides of the Plancherel identity
/// `sqrt(2 pi T) int e^-y S_phi(e^y) e^(lam y - T y^2/2) dy
///   = int L(1 - lam + i phi + it) / (1 - lam + it) e^(-t^2/(2T)) dt`.
pub fn plancherel_check(
    inst: &LFunctionInstance,
    phi: f64,
    lam: f64,
    t_param: f64,
    constants: &Constants,
) -> Result<IdentityReport> {
    check_lambda(inst, lam)?;
    if !(t_param > 0.0) {
        return Err(Error::Domain(format!("T = {t_param} must be positive")));
    }
    // The y-integral: S_phi is constant on [log n, log(n+1)).
    let y_max = (-2.0 * GAUSSIAN_CUTOFF.ln() / t_param).sqrt();
    let n_max = y_max.exp().floor() as u64;
    if n_max > inst.cache_bound() {
        return Err(Error::Resource {
            requested: n_max,
            bound: inst.cache_bound(),
        });
    }
    let weight = |y: f64| ((lam - 1.0) * y - 0.5 * t_param * y * y).exp();
    let mut partial = Complex64::default();
    let mut lhs = Complex64::default();
    for n in 1..=n_max {
        let ln_n = (n as f64).ln();
        partial += if phi == 0.0 {
            inst.coefficient_unchecked(n)
        } else {
            inst.coefficient_unchecked(n) * Complex64::from_polar(1.0, -phi * ln_n)
        };
        let hi = ((n + 1) as f64).ln().min(y_max);
        if hi > ln_n {
            lhs += partial * gl10().integrate(ln_n, hi, weight);
        }
    }
    lhs *= (2.0 * PI * t_param).sqrt();

    // The t-integral, truncated where the Gaussian is below e^-36.
    let t_max = (72.0 * t_param).sqrt();
    let panels = (4.0 * t_max).ceil().max(4.0) as usize;
    let h = 2.0 * t_max / panels as f64;
    let rule = gl32();
    let pieces = (0..panels)
        .into_par_iter()
        .map(|k| {
            let lo = -t_max + h * k as f64;
            let mut failure = None;
            let v = rule.integrate(lo, lo + h, |t| {
                let s = Complex64::new(1.0 - lam, phi + t);
                match l_value(inst, s) {
                    Ok(l) => l / Complex64::new(1.0 - lam, t) * (-t * t / (2.0 * t_param)).exp(),
                    Err(e) => {
                        failure.get_or_insert(e);
                        Complex64::default()
                    }
                }
            });
            failure.map_or(Ok(v), Err)
        })
        .collect::<Result<Vec<Complex64>>>()?;
    let rhs = pieces.into_iter().fold(Complex64::default(), |a, b| a + b);

    let abs = (lhs - rhs).norm();
    let rel = abs / rhs.norm();
    let tol = constants.get(cn::PLANCHEREL_REL_TOL);
    let mut report = IdentityReport::new("plancherel", inst.name(), lhs, rhs, rel, tol)
        .input("phi", phi)
        .input("lambda", lam)
        .input("T", t_param)
        .constants_from(&constants.subset(&[cn::PLANCHEREL_REL_TOL]))
        .extra("abs_residual", abs)
        .extra("y_max", y_max)
        .extra("t_max", t_max);
    if t_param < ILL_CONDITIONED_T {
        report = report.flag("ill-conditioned");
    }
    Ok(report)
}

/// `|S(x)| / [x^(1 - 1/(m+14)) ((log x)^(kappa^2/2) + C^(1/4))]`.
pub fn power_saving_check(inst: &LFunctionInstance, x: f64, constants: &Constants) -> Result<IdentityReport> {
    if x < 3.0 {
        return Err(Error::Domain(format!("x = {x} < 3")));
    }
    let s = partial_sum_lambda(inst, x, 0.0)?;
    let m = inst.degree() as f64;
    let kappa = inst.kappa() as f64;
    let envelope = x.powf(1.0 - 1.0 / (m + 14.0))
        * (x.ln().powf(kappa * kappa / 2.0) + inst.analytic_conductor(0.0).powf(0.25));
    let ceiling = constants.get(cn::POWER_SAVING_CEILING);
    Ok(IdentityReport::new(
        "power-saving",
        inst.name(),
        Complex64::new(s.norm(), 0.0),
        Complex64::new(envelope, 0.0),
        s.norm() / envelope,
        ceiling,
    )
    .input("x", x)
    .constants_from(&constants.subset(&[cn::POWER_SAVING_CEILING])))
}

/// One point of an Euler–Hadamard comparison, with every zero's `U` term.
#[derive(Debug, Clone)]
struct EhPoint {
    s: Complex64,
    log_l: Complex64,
    prime_sum: Complex64,
    /// `sum U((s + 2n + mu_j) log X)` over the trivial zeros. Reported, never
    /// subtracted: the identity leaves these terms in its error.
    trivial: Complex64,
    /// `(rho, U((s - rho) log X))` in ordinate order.
    terms: Vec<(Complex64, Complex64)>,
}

/// Shared state of the Euler–Hadamard checks over a set of points: the prime
/// sums and `log L` are computed once and every form reuses them.
pub struct EulerHadamard<'a> {
    inst: &'a LFunctionInstance,
    zeros: &'a ZeroSet,
    log_x: f64,
    points: Vec<EhPoint>,
    constants: Constants,
}

impl<'a> EulerHadamard<'a> {
    /// Requires `Re(s) >= 1 - 1/(2m)`, a certified zero set of the same
    /// instance, and `s` away from every zero.
    pub fn new(
        inst: &'a LFunctionInstance,
        zeros: &'a ZeroSet,
        kernel: &BumpKernel,
        log_x: f64,
        points: &[Complex64],
        constants: &Constants,
    ) -> Result<Self> {
        if zeros.instance.name != inst.name() {
            return Err(Error::Domain(format!(
                "zero set of {} used for {}",
                zeros.instance.name,
                inst.name()
            )));
        }
        if !zeros.certified {
            return Err(Error::Coverage("zero set is not certified".into()));
        }
        if !(log_x > 0.0) {
            return Err(Error::Domain(format!("log X = {log_x} must be positive")));
        }
        let sigma_min = 1.0 - 1.0 / (2.0 * inst.degree() as f64);
        let completed = zeros.completed_zeros();
        for s in points {
            if s.re < sigma_min {
                return Err(Error::Domain(format!("Re(s) = {} below {sigma_min}", s.re)));
            }
            if let Some(rho) = completed.iter().find(|rho| (*s - **rho).norm() < ZERO_PROXIMITY) {
                return Err(Error::ZeroEncounter(format!("s = {s} is at the zero {rho}")));
            }
        }
        let prime_sums = prime_sum_side_batch(inst, points, log_x.exp(), kernel)?;
        let cfg = EvalConfig::default();
        let built = points
            .par_iter()
            .zip(prime_sums)
            .map(|(&s, prime_sum)| {
                let log_l = log_l_with(inst, s, &cfg, &completed)?;
                let terms = completed
                    .iter()
                    .map(|&rho| Ok((rho, kernel.capital_u((s - rho) * log_x)?)))
                    .collect::<Result<Vec<_>>>()?;
                Ok(EhPoint {
                    s,
                    log_l,
                    prime_sum,
                    trivial: trivial_zero_term(inst, kernel, s, log_x)?,
                    terms,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(EulerHadamard {
            inst,
            zeros,
            log_x,
            points: built,
            constants: constants.clone(),
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> Complex64 {
        self.points[i].s
    }

    fn zero_sum<P: Fn(Complex64) -> bool>(p: &EhPoint, keep: P) -> (Complex64, usize) {
        let mut acc = Complex64::default();
        let mut used = 0;
        for (rho, u) in &p.terms {
            if keep(*rho) {
                acc += u;
                used += 1;
            }
        }
        (acc, used)
    }

    /// Estimate of `sum U((s - rho) log X)` over zeros at ordinate distance
    /// beyond `d` on one side: unit strips hold `c log C(i gamma)` zeros and
    /// each term is at most `e^(4k) / (dist log X)^k`.
    fn side_tail(&self, t: f64, d: f64, dir: f64, k: f64) -> f64 {
        let c = self.constants.get(cn::C_ZERO_DENSITY);
        let mut total = 0.0;
        for j in 0..100_000 {
            let dist = d + j as f64;
            let term = c * self.inst.analytic_conductor(t + dir * (dist + 1.0)).ln()
                * (4.0 * k).exp()
                / (dist.max(1e-300) * self.log_x).powf(k);
            total += term;
            if term < 1e-17 * total.max(1e-300) {
                break;
            }
        }
        total
    }

    fn base_report(&self, op: &str, p: &EhPoint, rhs: Complex64, budget: f64) -> IdentityReport {
        IdentityReport::new(op, self.inst.name(), p.log_l, rhs, (p.log_l - rhs).norm(), budget)
            .input("sigma", p.s.re)
            .input("t", p.s.im)
            .input("log_X", self.log_x)
            .extra("prime_sum_re", p.prime_sum.re)
            .extra("prime_sum_im", p.prime_sum.im)
            .extra("trivial_zero_term", p.trivial.norm())
    }

    /// `log L(s)` against the prime sum minus `U` over zeros with
    /// `|gamma - t| <= tail_height`. The band is clipped to the certified
    /// window; the budget is `c_budget e^(4k) / (log X)^k` plus the tail
    /// estimate for every zero left out.
    pub fn full(&self, i: usize, tail_height: f64) -> Result<IdentityReport> {
        if !(tail_height >= 0.0) {
            return Err(Error::Domain(format!("tail height {tail_height} is negative")));
        }
        let p = &self.points[i];
        let t = p.s.im;
        let k = self.constants.get(cn::EH_K);
        let cover = self.zeros.t_max();
        let (lo, hi) = (t - tail_height, t + tail_height);
        let (lo_c, hi_c) = (lo.max(-cover), hi.min(cover));
        if lo_c > t || hi_c < t {
            return Err(Error::Coverage(format!(
                "t = {t} lies outside the certified window [-{cover}, {cover}]"
            )));
        }
        let (zsum, used) = Self::zero_sum(p, |rho| rho.im >= lo_c && rho.im <= hi_c);
        let tail = self.side_tail(t, hi_c - t, 1.0, k) + self.side_tail(t, t - lo_c, -1.0, k);
        let budget = self.constants.get(cn::C_BUDGET) * (4.0 * k).exp() / self.log_x.powf(k) + tail;
        let mut report = self
            .base_report("euler-hadamard-full", p, p.prime_sum - zsum, budget)
            .input("tail_height", tail_height)
            .input("k", k)
            .constants_from(&self.constants.subset(&[cn::C_BUDGET, cn::C_ZERO_DENSITY, cn::EH_K]))
            .extra("zeros_used", used as f64)
            .extra("tail_estimate", tail)
            .extra("band_lo", lo_c)
            .extra("band_hi", hi_c);
        if lo_c > lo || hi_c < hi {
            report = report.flag("band-clipped-to-certified-window");
        }
        Ok(report)
    }

    /// As [`Self::full`] with the zero sum over `|s - rho| <= K / log X`, for
    /// `|Re(s) - 1| <= c_window / log X` and `k >= 3`. The budget is
    /// `c_budget e^(4k) log C(it) / (K^(k-2) log X)`.
    pub fn truncated(&self, i: usize, big_k: f64, k: f64) -> Result<IdentityReport> {
        let p = &self.points[i];
        let window = self.constants.get(cn::C_WINDOW) / self.log_x;
        if (p.s.re - 1.0).abs() > window * (1.0 + 1e-12) {
            return Err(Error::Domain(format!(
                "|Re(s) - 1| = {} exceeds {window}",
                (p.s.re - 1.0).abs()
            )));
        }
        if !(k >= 3.0) {
            return Err(Error::Domain(format!("k = {k} must be at least 3")));
        }
        if !(big_k >= 0.0) {
            return Err(Error::Domain(format!("K = {big_k} must be nonnegative")));
        }
        let radius = big_k / self.log_x;
        let t = p.s.im;
        let cover = self.zeros.t_max();
        if t.abs() > cover {
            return Err(Error::Coverage(format!(
                "t = {t} lies outside the certified window [-{cover}, {cover}]"
            )));
        }
        let clipped = t - radius < -cover || t + radius > cover;
        let (zsum, used) = Self::zero_sum(p, |rho| (p.s - rho).norm() <= radius);
        let log_c = self.inst.analytic_conductor(t).ln();
        let shape = (4.0 * k).exp() * log_c / (big_k.powf(k - 2.0) * self.log_x);
        let budget = self.constants.get(cn::C_BUDGET) * shape;
        let rhs = p.prime_sum - zsum;
        let measured = (p.log_l - rhs).norm() / shape;
        let mut report = self
            .base_report("euler-hadamard-truncated", p, rhs, budget)
            .input("K", big_k)
            .input("k", k)
            .constants_from(&self.constants.subset(&[cn::C_BUDGET, cn::C_WINDOW]))
            .extra("zeros_used", used as f64)
            .extra("c_budget_measured", measured);
        if used == 0 {
            report = report.flag("empty-zero-sum");
        }
        if clipped {
            report = report.flag("disc-clipped-to-certified-window");
        }
        Ok(report)
    }
}

fn trivial_zero_term(
    inst: &LFunctionInstance,
    kernel: &BumpKernel,
    s: Complex64,
    log_x: f64,
) -> Result<Complex64> {
    let mut acc = Complex64::default();
    for mu in &inst.gamma().shifts {
        for n in 0..200 {
            let term = kernel.capital_u((s + mu + 2.0 * n as f64) * log_x)?;
            acc += term;
            if term.norm() < 1e-20 {
                break;
            }
        }
    }
    Ok(acc)
}

/// The full form at a single point.
pub fn euler_hadamard_full(
    inst: &LFunctionInstance,
    s: Complex64,
    log_x: f64,
    kernel: &BumpKernel,
    zeros: &ZeroSet,
    tail_height: f64,
    constants: &Constants,
) -> Result<IdentityReport> {
    EulerHadamard::new(inst, zeros, kernel, log_x, &[s], constants)?.full(0, tail_height)
}

/// The truncated form at a single point.
#[allow(clippy::too_many_arguments)]
pub fn euler_hadamard_truncated(
    inst: &LFunctionInstance,
    s: Complex64,
    log_x: f64,
    big_k: f64,
    k: f64,
    kernel: &BumpKernel,
    zeros: &ZeroSet,
    constants: &Constants,
) -> Result<IdentityReport> {
    EulerHadamard::new(inst, zeros, kernel, log_x, &[s], constants)?.truncated(0, big_k, k)
}

/// The twist data a repulsion record needs. `n` is `None` when `S(e^y0) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwistInput {
    pub y0: f64,
    pub n: Option<f64>,
    pub phi: f64,
}

impl TwistInput {
    pub fn compute(inst: &LFunctionInstance, y0: f64, t_cap: f64) -> Result<Self> {
        let s = partial_sum_lambda(inst, y0.exp(), 0.0)?;
        let n = (s.norm() > 0.0)
            .then(|| y0.exp() * y0.powf(inst.kappa() as f64 - 1.0) / s.norm());
        Ok(TwistInput {
            y0,
            n,
            phi: select_phi(inst, y0, t_cap)?.t,
        })
    }
}

/// One row of the repulsion scan; flat so it maps to a CSV row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepulsionRecord {
    pub instance: String,
    pub y0: f64,
    pub n: Option<f64>,
    pub phi: f64,
    pub delta: f64,
    pub lambda: f64,
    /// `c_T y0^-2 N^(2/l_kappa)`; `None` with `N`.
    pub t_param: Option<f64>,
    pub xi: f64,
    pub xi_window: f64,
    pub xi_objective: f64,
    pub xi_grid_objective: f64,
    /// `lambda y0 / 4 - log |L(1 - lambda + i(phi+xi)) / L(1 + lambda + i(phi+xi))|`.
    pub slack: f64,
    pub log_x_param: f64,
    pub k: f64,
    pub b: f64,
    pub big_k: f64,
    pub l_thm: f64,
    pub disc_center_re: f64,
    pub disc_center_im: f64,
    pub disc_radius: f64,
    pub disc_count: usize,
    /// Count for the disc centred at `1`, for real-coefficient instances.
    pub disc_count_phi0: Option<usize>,
    pub count_over_lambda_y0: f64,
    pub in_hypothesis: bool,
    pub undefined_n: bool,
}

/// Searches `xi` and fills in the derived quantities for one `(y0, lambda)`.
pub fn repulsion_xi(
    inst: &LFunctionInstance,
    lam: f64,
    delta: f64,
    twist: &TwistInput,
    zeros: &ZeroSet,
    constants: &Constants,
) -> Result<RepulsionRecord> {
    check_lambda(inst, lam)?;
    if !(delta > 0.0 && delta <= 0.5) {
        return Err(Error::Domain(format!("delta = {delta} outside (0, 1/2]")));
    }
    let y0 = twist.y0;
    let phi = twist.phi;
    let kappa = inst.kappa() as f64;
    let m = inst.degree() as f64;
    let log_c = inst.analytic_conductor(0.0).ln();
    let t_param = twist
        .n
        .map(|n| constants.get(cn::C_T) * n.powf(2.0 / inst.ell_kappa()) / (y0 * y0));

    let xi_window = lam * (kappa * log_c / y0).powf(delta);
    let step = if lam > 0.0 { lam / 20.0 } else { 1.0 };
    let objective = |xi: f64| -> Result<f64> {
        let l = l_value(inst, Complex64::new(1.0 - lam, phi + xi))?;
        let gauss = t_param.map_or(1.0, |t| (-xi * xi / (4.0 * t)).exp());
        Ok(l.norm() / Complex64::new(1.0 - lam, xi).norm() * gauss)
    };
    let scan = scan_max(xi_window, step, false, objective)?;
    let xi = scan.t;
    let at = |sigma: f64| l_value(inst, Complex64::new(sigma, phi + xi));
    let (left, right) = (at(1.0 - lam)?, at(1.0 + lam)?);
    if left.norm() == 0.0 || right.norm() == 0.0 {
        return Err(Error::ZeroEncounter(format!(
            "L vanishes at 1 -+ {lam} + i{}",
            phi + xi
        )));
    }
    let slack = lam * y0 / 4.0 - (left.norm() / right.norm()).ln();

    let k = 1.0 / delta + 2.0;
    let b = constants.get(cn::C_B) * (4.0 * k).exp();
    let log_x_param = if lam > 0.0 { constants.get(cn::C_SMALL) / lam } else { f64::INFINITY };
    let big_k = (b * kappa * log_c / (lam * y0 * log_x_param)).powf(1.0 / (k - 2.0));
    let l_thm = constants.get(cn::C_L) * lam * y0 * (kappa * log_c / y0).powf(delta);
    let radius = l_thm / y0 * (log_c / y0).powf(delta);
    let center = Complex64::new(1.0, phi);
    let disc_count = zeros.count_in_disc(center, radius)?;
    let disc_count_phi0 = if inst.has_real_coefficients() {
        Some(zeros.count_in_disc(Complex64::new(1.0, 0.0), radius)?)
    } else {
        None
    };

    let in_hypothesis = match twist.n {
        Some(n) => {
            let lam_lo = constants.get(cn::C_A) * n.powf(2.0 / inst.ell_kappa()) / y0
                * (log_c / y0).powf(1.0 - 2.0 * delta);
            let y_range = y0 >= log_c.powf(1.0 - 1.0 / (50.0 * m)) && y0 <= 0.5 * log_c;
            let n_range = n >= 1.0 && n <= y0.powf(1.0 / (100.0 * m));
            y_range && n_range && lam >= lam_lo
        }
        None => false,
    };
    Ok(RepulsionRecord {
        instance: inst.name().to_string(),
        y0,
        n: twist.n,
        phi,
        delta,
        lambda: lam,
        t_param,
        xi,
        xi_window: scan.window,
        xi_objective: scan.value,
        xi_grid_objective: scan.grid_value,
        slack,
        log_x_param,
        k,
        b,
        big_k,
        l_thm,
        disc_center_re: center.re,
        disc_center_im: center.im,
        disc_radius: radius,
        disc_count,
        disc_count_phi0,
        count_over_lambda_y0: if lam > 0.0 { disc_count as f64 / (lam * y0) } else { 0.0 },
        in_hypothesis,
        undefined_n: twist.n.is_none(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepulsionSummary {
    pub records: usize,
    pub in_hypothesis: usize,
    pub undefined_n: usize,
    pub total_disc_count: usize,
    pub max_disc_radius: f64,
    pub max_count_over_lambda_y0: f64,
    /// Every disc of radius below 1/2 contains no zero.
    pub small_discs_empty: bool,
    pub constants: std::collections::BTreeMap<String, f64>,
}

/// Records for every `(y0, lambda)` pair in grid order, with a summary.
pub fn repulsion_scan(
    inst: &LFunctionInstance,
    delta: f64,
    y0_grid: &[f64],
    lambda_grid: &[f64],
    zeros: &ZeroSet,
    constants: &Constants,
) -> Result<(Vec<RepulsionRecord>, RepulsionSummary)> {
    let t_cap = constants.get(cn::T_CAP);
    let twists = y0_grid
        .iter()
        .map(|&y0| TwistInput::compute(inst, y0, t_cap))
        .collect::<Result<Vec<_>>>()?;
    let jobs: Vec<(TwistInput, f64)> = twists
        .iter()
        .flat_map(|tw| lambda_grid.iter().map(move |&lam| (*tw, lam)))
        .collect();
    let records = jobs
        .par_iter()
        .map(|(tw, lam)| repulsion_xi(inst, *lam, delta, tw, zeros, constants))
        .collect::<Result<Vec<_>>>()?;
    let summary = RepulsionSummary {
        records: records.len(),
        in_hypothesis: records.iter().filter(|r| r.in_hypothesis).count(),
        undefined_n: records.iter().filter(|r| r.undefined_n).count(),
        total_disc_count: records.iter().map(|r| r.disc_count).sum(),
        max_disc_radius: records.iter().map(|r| r.disc_radius).fold(0.0, f64::max),
        max_count_over_lambda_y0: records
            .iter()
            .map(|r| r.count_over_lambda_y0)
            .fold(0.0, f64::max),
        small_discs_empty: records
            .iter()
            .filter(|r| r.disc_radius < 0.5)
            .all(|r| r.disc_count == 0 && r.disc_count_phi0.unwrap_or(0) == 0),
        constants: constants.subset(&[cn::C_T, cn::C_SMALL, cn::C_B, cn::C_L, cn::C_A, cn::T_CAP]),
    };
    Ok((records, summary))
}

/// First line of every repulsion CSV; bump the version when columns change.
pub const REPULSION_CSV_HEADER_COMMENT: &str = "# lfunlab repulsion-record v1";

/// CSV encoding of repulsion records; the column order is fixed by the struct.
pub fn repulsion_to_csv(records: &[RepulsionRecord]) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for r in records {
        writer.serialize(r)?;
    }
    let bytes = writer.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    let body = String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))?;
    Ok(format!("{REPULSION_CSV_HEADER_COMMENT}\n{body}"))
}

pub fn repulsion_from_csv(text: &str) -> Result<Vec<RepulsionRecord>> {
    let (first, body) = text.split_once('\n').unwrap_or((text, ""));
    if first.trim_end() != REPULSION_CSV_HEADER_COMMENT {
        return Err(Error::Parse(format!(
            "unexpected CSV header comment {first:?}"
        )));
    }
    csv::Reader::from_reader(body.as_bytes())
        .deserialize()
        .map(|r| r.map_err(Error::from))
        .collect()
}
