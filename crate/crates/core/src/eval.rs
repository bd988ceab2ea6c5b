//! Evaluation of `L(s)`, the completed function, Hardy's Z, the branch of
//! `log L` continued from the right, and the smoothed prime sum.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::for_each_prime;
use crate::instances::{InstanceKind, LFunctionInstance};
use crate::report::IdentityReport;
use crate::special::{gamma_q, hurwitz_zeta_regularized, log_gamma, BumpKernel};
use crate::{Error, Result};

/// Largest `|Im s|` accepted by [`l_value`].
pub const MAX_HEIGHT: f64 = 60.0;
/// Real part at which `log L` is anchored to its Dirichlet series.
pub const LOG_ANCHOR: f64 = 3.0;
/// Smallest continuation step before `log_l` gives up near a zero.
pub const MIN_LOG_STEP: f64 = 1e-6;
/// The AFE ray is rotated to angle `pi/2 - AFE_ROTATION/|t|`.
const AFE_ROTATION: f64 = 1.5;
const AFE_MAX_TERMS: u64 = 20_000;
const LN_2PI: f64 = 1.837_877_066_409_345_5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub target_accuracy: f64,
    pub afe_cutoff_multiplier: f64,
    pub log_continuation_step: f64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            target_accuracy: 1e-9,
            afe_cutoff_multiplier: 10.0,
            log_continuation_step: 0.05,
        }
    }
}

impl EvalConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = [
            self.target_accuracy,
            self.afe_cutoff_multiplier,
            self.log_continuation_step,
        ]
        .iter()
        .all(|x| x.is_finite() && *x > 0.0);
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!("invalid evaluation config {self:?}")))
        }
    }
}

fn check_height(s: Complex64) -> Result<()> {
    if s.im.abs() > MAX_HEIGHT {
        Err(Error::Height {
            height: s.im.abs(),
            ceiling: MAX_HEIGHT,
        })
    } else {
        Ok(())
    }
}

/// `L(s)` with the default configuration.
pub fn l_value(inst: &LFunctionInstance, s: Complex64) -> Result<Complex64> {
    l_value_with(inst, s, &EvalConfig::default())
}

pub fn l_value_with(inst: &LFunctionInstance, s: Complex64, cfg: &EvalConfig) -> Result<Complex64> {
    check_height(s)?;
    match inst.kind() {
        InstanceKind::Dirichlet => dirichlet_l(inst, s),
        InstanceKind::Delta => delta_afe(inst, s, cfg),
    }
}

/// `L(s, chi) = q^-s sum_a chi(a) zeta(s, a/q)`. The pole parts cancel because
/// `sum chi(a) = 0`, so the regularized Hurwitz function is used throughout.
fn dirichlet_l(inst: &LFunctionInstance, s: Complex64) -> Result<Complex64> {
    let chi = inst.character().expect("dirichlet instance carries its character");
    let q = chi.modulus();
    let mut acc = Complex64::default();
    for (a, &c) in chi.values().iter().enumerate().skip(1) {
        if c.norm_sqr() == 0.0 {
            continue;
        }
        acc += c * hurwitz_zeta_regularized(s, a as f64 / q as f64)?;
    }
    Ok(acc * (-s * (q as f64).ln()).exp())
}

/// Smoothed approximate functional equation for `Delta`, on a ray rotated by
/// `beta` so that both incomplete-gamma weights stay `O(1)` at height `t`:
///
/// `L(s) = sum lambda(n) [n^-s Q(w, 2 pi n d) + (2 pi)^(2s-1) n^(s-1) Gamma(w', 2 pi n / d) / Gamma(w)]`
///
/// with `w = s + 11/2`, `w' = 13/2 - s`, `d = e^(i beta)`.
fn delta_afe(inst: &LFunctionInstance, s: Complex64, cfg: &EvalConfig) -> Result<Complex64> {
    let t = s.im;
    let beta = if t == 0.0 {
        0.0
    } else {
        t.signum() * (FRAC_PI_2 - AFE_ROTATION / t.abs()).max(0.0)
    };
    let rot = Complex64::from_polar(1.0, beta);
    let w = s + 5.5;
    let w_dual = 6.5 - s;
    let dual_log_prefactor = (2.0 * s - 1.0) * LN_2PI + log_gamma(w_dual)? - log_gamma(w)?;
    let base_cutoff =
        (cfg.afe_cutoff_multiplier * inst.analytic_conductor(t).sqrt() / (2.0 * PI)).ceil() as u64;
    let negligible = cfg.target_accuracy * 1e-7;
    let mut acc = Complex64::default();
    let mut n = 1u64;
    loop {
        if n > inst.cache_bound() {
            return Err(Error::Resource {
                requested: n,
                bound: inst.cache_bound(),
            });
        }
        let ln_n = (n as f64).ln();
        let z = 2.0 * PI * n as f64;
        let direct = (-s * ln_n).exp() * gamma_q(w, rot * z)?;
        let dual = (dual_log_prefactor + (s - 1.0) * ln_n).exp()
            * gamma_q(w_dual, z / rot)?;
        let weight = direct + dual;
        acc += inst.coefficient_unchecked(n) * weight;
        if n >= base_cutoff && weight.norm() < negligible {
            break;
        }
        if n >= AFE_MAX_TERMS {
            return Err(Error::Height {
                height: t.abs(),
                ceiling: MAX_HEIGHT,
            });
        }
        n += 1;
    }
    Ok(acc)
}

/// `log L(s, pi_infty) = (s/2) log q + sum_j log Gamma_R(s + mu_j)` with
/// `Gamma_R(s) = pi^(-s/2) Gamma(s/2)`.
pub fn log_gamma_factor(inst: &LFunctionInstance, s: Complex64) -> Result<Complex64> {
    let g = inst.gamma();
    let mut acc = s * 0.5 * (g.conductor as f64).ln();
    for mu in &g.shifts {
        let z = (s + mu) * 0.5;
        acc += log_gamma(z)? - z * PI.ln();
    }
    Ok(acc)
}

/// `Lambda(s) = L(s) L(s, pi_infty)`, satisfying `Lambda(s) = W conj(Lambda(1 - conj s))`.
pub fn completed_l(inst: &LFunctionInstance, s: Complex64) -> Result<Complex64> {
    Ok(l_value(inst, s)? * log_gamma_factor(inst, s)?.exp())
}

/// The unit-modulus rotation of `L(1/2 + it)` that is real for self-dual
/// instances; the imaginary part is a numerical residue.
pub fn hardy_z_complex(inst: &LFunctionInstance, t: f64) -> Result<Complex64> {
    if !inst.gamma().self_dual {
        return Err(Error::Unsupported(format!(
            "Hardy Z needs a self-dual instance; {} is not",
            inst.name()
        )));
    }
    let s = Complex64::new(0.5, t);
    let phase = log_gamma_factor(inst, s)?.im;
    let w_half = inst.gamma().root_number.sqrt();
    Ok(l_value(inst, s)? * Complex64::from_polar(1.0, phase) / w_half)
}

/// Hardy's Z-function: real, `|Z(t)| = |L(1/2 + it)|`, sign changes at zeros.
pub fn hardy_z(inst: &LFunctionInstance, t: f64) -> Result<f64> {
    Ok(hardy_z_complex(inst, t)?.re)
}

/// `log L(s)` on the branch continued horizontally from `Re = 3`.
pub fn log_l(inst: &LFunctionInstance, s: Complex64) -> Result<Complex64> {
    log_l_with(inst, s, &EvalConfig::default(), &[])
}

/// As [`log_l`], refusing rays that pass within [`MIN_LOG_STEP`] of one of `zeros`.
pub fn log_l_with(
    inst: &LFunctionInstance,
    s: Complex64,
    cfg: &EvalConfig,
    zeros: &[Complex64],
) -> Result<Complex64> {
    let anchor = Complex64::new(s.re.max(LOG_ANCHOR), s.im);
    for rho in zeros {
        let on_ray = rho.re >= s.re - MIN_LOG_STEP && rho.re <= anchor.re;
        if on_ray && (rho.im - s.im).abs() < MIN_LOG_STEP {
            return Err(Error::BranchAmbiguity(format!(
                "ray from {anchor} to {s} passes the zero {rho}"
            )));
        }
    }
    log_l_along(inst, &[anchor, s], cfg)
}

/// Continues `log L` along the polyline `path`, which must start at `Re >= 3`
/// where the branch is fixed by the Dirichlet series.
pub fn log_l_along(inst: &LFunctionInstance, path: &[Complex64], cfg: &EvalConfig) -> Result<Complex64> {
    let start = *path
        .first()
        .ok_or_else(|| Error::EmptyDomain("empty continuation path".into()))?;
    if start.re < LOG_ANCHOR {
        return Err(Error::Domain(format!(
            "continuation must start at Re >= {LOG_ANCHOR}, got {start}"
        )));
    }
    let mut value = l_value_with(inst, start, cfg)?;
    // On Re >= 3 the series value of log L is below pi/2 in modulus, so the
    // principal logarithm is the series branch.
    let mut log = value.ln();
    for pair in path.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let length = (b - a).norm();
        if length == 0.0 {
            continue;
        }
        let dir = (b - a) / length;
        let mut pos = 0.0;
        let mut h = cfg.log_continuation_step.min(length);
        while pos < length {
            let step = h.min(length - pos);
            let next = a + dir * (pos + step);
            let next_value = l_value_with(inst, next, cfg)?;
            if next_value.norm() == 0.0 {
                return Err(Error::ZeroEncounter(format!("{next}")));
            }
            let darg = (next_value / value).arg();
            if darg.abs() >= FRAC_PI_4 {
                h = step / 2.0;
                if h < MIN_LOG_STEP {
                    return Err(Error::BranchAmbiguity(format!(
                        "argument of L jumps near {next}"
                    )));
                }
                continue;
            }
            log = Complex64::new(next_value.norm().ln(), log.im + darg);
            value = next_value;
            pos += step;
            h = (2.0 * step).min(cfg.log_continuation_step);
        }
    }
    Ok(log)
}

/// `sum_{n < X} a(n) Lambda(n) / (n^s log n) v(e^(log n / log X))`.
pub fn prime_sum_side(
    inst: &LFunctionInstance,
    s: Complex64,
    x: f64,
    kernel: &BumpKernel,
) -> Result<Complex64> {
    Ok(prime_sum_side_batch(inst, &[s], x, kernel)?[0])
}

/// [`prime_sum_side`] at several points in one pass over the primes.
pub fn prime_sum_side_batch(
    inst: &LFunctionInstance,
    points: &[Complex64],
    x: f64,
    kernel: &BumpKernel,
) -> Result<Vec<Complex64>> {
    let mut acc = vec![Complex64::default(); points.len()];
    if !(x > 2.0) {
        return Ok(acc);
    }
    // Largest n with n < X.
    let limit = if x.fract() == 0.0 { x as u64 - 1 } else { x.floor() as u64 };
    if limit > inst.cache_bound() {
        return Err(Error::Resource {
            requested: limit,
            bound: inst.cache_bound(),
        });
    }
    let log_x = x.ln();
    let mut scratch = Vec::with_capacity(points.len());
    for_each_prime(limit, |p| {
        let lp = (p as f64).ln();
        let mut pk = p;
        let mut k = 1u32;
        loop {
            let weight = kernel.v((k as f64 * lp / log_x).exp());
            if weight == 0.0 {
                break;
            }
            let a = inst.a_prime_power(p, k) * (weight / k as f64);
            if a.norm_sqr() != 0.0 {
                let klp = k as f64 * lp;
                scratch.clear();
                scratch.extend(points.iter().map(|s| (-s * klp).exp()));
                for (acc, term) in acc.iter_mut().zip(&scratch) {
                    *acc += a * term;
                }
            }
            match pk.checked_mul(p) {
                Some(next) if next <= limit => {
                    pk = next;
                    k += 1;
                }
                _ => break,
            }
        }
    });
    Ok(acc)
}

/// Ratio of `|L(sigma + it)|` to the convexity shape
/// `C^((1-sigma)/2) (log C)^(kappa (2 sigma - 1)) (1 + |t|)^(m (1-sigma)/2)`.
pub fn convexity_check(
    inst: &LFunctionInstance,
    sigma: f64,
    t: f64,
    ceiling: f64,
) -> Result<IdentityReport> {
    if !(0.5..=1.0).contains(&sigma) {
        return Err(Error::Domain(format!("sigma = {sigma} outside [1/2, 1]")));
    }
    let value = l_value(inst, Complex64::new(sigma, t))?;
    let c = inst.analytic_conductor(t);
    let m = inst.degree() as f64;
    let shape = c.powf((1.0 - sigma) / 2.0)
        * c.ln().powf(inst.kappa() as f64 * (2.0 * sigma - 1.0))
        * (1.0 + t.abs()).powf(m * (1.0 - sigma) / 2.0);
    let ratio = value.norm() / shape;
    Ok(IdentityReport::new(
        "convexity",
        inst.name(),
        Complex64::new(value.norm(), 0.0),
        Complex64::new(shape, 0.0),
        ratio,
        ceiling,
    )
    .input("sigma", sigma)
    .input("t", t)
    .constant("convexity_ceiling", ceiling))
}
