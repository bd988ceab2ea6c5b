//! Special functions: the bump kernel and its transforms, `E1`, log-gamma,
//! Hurwitz zeta and the regularized upper incomplete gamma function.

use std::f64::consts::E;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::arith::{bernoulli_numbers, gl32, QuadratureRule};
use crate::{Error, Result};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const LN_2PI: f64 = 1.837_877_066_409_345_5;
/// Default for the constant `c` in the guard `Re(z) > -c` on `U`.
pub const DEFAULT_U_GUARD: f64 = 0.5;

const V_CELLS: usize = 8192;
const SUP_GRID: usize = 10_000;
/// Highest derivative order whose sup-norm is tabulated.
pub const MAX_DERIVATIVE: usize = 6;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn gl16() -> &'static QuadratureRule {
    static RULE: OnceLock<QuadratureRule> = OnceLock::new();
    RULE.get_or_init(|| QuadratureRule::gauss_legendre(16))
}

fn raw_bump(t: f64) -> f64 {
    let p = (t - 1.0) * (E - t);
    if p <= 0.0 {
        0.0
    } else {
        (-1.0 / p).exp()
    }
}

/// The unit-mass bump `u(t) = C exp(-1/((t-1)(e-t)))` on `(1, e)` together with
/// its tail integral `v`, Mellin transform and the kernel `U`.
#[derive(Debug, Clone)]
pub struct BumpKernel {
    normalizer: f64,
    u_max_deriv: [f64; MAX_DERIVATIVE + 1],
    panels: usize,
    guard: f64,
    // v and u on a uniform grid of [1, e], for Hermite interpolation of v.
    v_nodes: Vec<f64>,
    u_nodes: Vec<f64>,
}

impl Default for BumpKernel {
    fn default() -> Self {
        Self::new()
    }
}

impl BumpKernel {
    pub fn new() -> Self {
        Self::with_guard(DEFAULT_U_GUARD)
    }

    /// Kernel whose `U` rejects arguments with `Re(z) <= -guard`.
    pub fn with_guard(guard: f64) -> Self {
        let panels = 64;
        let mass: f64 = gl32().composite(1.0, E, panels, raw_bump);
        let normalizer = 1.0 / mass;

        let h = (E - 1.0) / V_CELLS as f64;
        let mut v_nodes = vec![0.0; V_CELLS + 1];
        let mut u_nodes = vec![0.0; V_CELLS + 1];
        for i in (0..V_CELLS).rev() {
            let a = 1.0 + h * i as f64;
            let cell: f64 = gl16().integrate(a, a + h, raw_bump);
            v_nodes[i] = v_nodes[i + 1] + cell * normalizer;
        }
        for (i, u) in u_nodes.iter_mut().enumerate() {
            *u = raw_bump(1.0 + h * i as f64) * normalizer;
        }
        // Rescale so that v(1) = 1 holds to rounding.
        let top = v_nodes[0];
        v_nodes.iter_mut().for_each(|v| *v /= top);

        let mut u_max_deriv = [0.0; MAX_DERIVATIVE + 1];
        for i in 1..SUP_GRID {
            let t = 1.0 + (E - 1.0) * i as f64 / SUP_GRID as f64;
            let jet = bump_jet(t);
            let mut factorial = 1.0;
            for (k, sup) in u_max_deriv.iter_mut().enumerate() {
                if k > 0 {
                    factorial *= k as f64;
                }
                *sup = f64::max(*sup, (jet[k] * factorial * normalizer).abs());
            }
        }
        BumpKernel {
            normalizer,
            u_max_deriv,
            panels,
            guard,
            v_nodes,
            u_nodes,
        }
    }

    /// A process-wide kernel with the default guard.
    pub fn shared() -> &'static BumpKernel {
        static KERNEL: OnceLock<BumpKernel> = OnceLock::new();
        KERNEL.get_or_init(BumpKernel::new)
    }

    pub fn normalizer(&self) -> f64 {
        self.normalizer
    }

    pub fn guard(&self) -> f64 {
        self.guard
    }

    /// Measured `sup |u^(k)|` for `k = 0..=6`.
    pub fn u_max_deriv(&self) -> &[f64; MAX_DERIVATIVE + 1] {
        &self.u_max_deriv
    }

    /// Panels of the composite rule used over `[1, e]` for smooth integrands.
    pub fn panels(&self) -> usize {
        self.panels
    }

    pub fn u(&self, t: f64) -> f64 {
        raw_bump(t) * self.normalizer
    }

    /// `v(x) = int_x^infty u(t) dt`.
    pub fn v(&self, x: f64) -> f64 {
        if x <= 1.0 {
            return 1.0;
        }
        if x >= E {
            return 0.0;
        }
        let h = (E - 1.0) / V_CELLS as f64;
        let pos = (x - 1.0) / h;
        let i = (pos.floor() as usize).min(V_CELLS - 1);
        let s = pos - i as f64;
        // Cubic Hermite with v' = -u at both ends of the cell.
        let (y0, y1) = (self.v_nodes[i], self.v_nodes[i + 1]);
        let (d0, d1) = (-self.u_nodes[i] * h, -self.u_nodes[i + 1] * h);
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        (h00 * y0 + h10 * d0 + h01 * y1 + h11 * d1).clamp(0.0, 1.0)
    }

    /// `u^(k)(t)` from the Taylor jet of the bump.
    pub fn u_derivative(&self, t: f64, k: usize) -> f64 {
        assert!(k <= MAX_DERIVATIVE);
        if t <= 1.0 || t >= E {
            return 0.0;
        }
        let factorial: f64 = (1..=k).map(|j| j as f64).product();
        bump_jet(t)[k] * factorial * self.normalizer
    }

    fn mellin_panels(s: Complex64) -> usize {
        let oscillation = (s.im.abs() / 3.0).ceil() as usize;
        let growth = (s.re.abs() / 10.0).ceil() as usize;
        (64 + oscillation + growth).min(200_000)
    }

    /// `u_hat(s) = int u(t) t^(s-1) dt`.
    pub fn mellin_u_hat(&self, s: Complex64) -> Complex64 {
        self.mellin_u_hat_derivative(s, 0)
    }

    /// `k`-th derivative of `u_hat`: `int u(t) (log t)^k t^(s-1) dt`.
    pub fn mellin_u_hat_derivative(&self, s: Complex64, k: u32) -> Complex64 {
        let sm1 = s - 1.0;
        let panels = Self::mellin_panels(s);
        gl32().composite(1.0, E, panels, |t| {
            let u = self.u(t);
            if u == 0.0 {
                return Complex64::default();
            }
            let lt = t.ln();
            (sm1 * lt).exp() * (u * lt.powi(k as i32))
        })
    }

    /// `U(z) = int u(x) E1(z log x) dx`.
    pub fn capital_u(&self, z: Complex64) -> Result<Complex64> {
        if z.re <= -self.guard {
            return Err(Error::Domain(format!(
                "U({z}) outside the guard Re(z) > -{}",
                self.guard
            )));
        }
        if z.re <= 0.0 && z.im == 0.0 {
            return Err(Error::BranchCut(format!(
                "U({z}): z log x lies on the cut of E1"
            )));
        }
        let panels = 64usize.max((z.im.abs() / 2.0).ceil() as usize);
        let mut failure = None;
        let value = gl32().composite(1.0, E, panels, |x| {
            let u = self.u(x);
            if u == 0.0 {
                return Complex64::default();
            }
            match exp_integral_e1(z * x.ln()) {
                Ok(e1) => e1 * u,
                Err(err) => {
                    failure.get_or_insert(err);
                    Complex64::default()
                }
            }
        });
        match failure {
            Some(err) => Err(err),
            None => Ok(value),
        }
    }

    /// `U(w)` through the contour form `int_0^infty u_hat(1 - w - r) / (w + r) dr`.
    pub fn capital_u_contour(&self, w: Complex64) -> Result<Complex64> {
        if w.re <= 0.0 {
            return Err(Error::Domain(format!(
                "contour form of U needs Re(w) > 0, got {w}"
            )));
        }
        let rule = gl32();
        let mut acc = Complex64::default();
        let mut lo = 0.0;
        let mut width = 0.25f64.min(w.norm() / 4.0).max(1e-3);
        // u_hat(1 - w - r) decays like exp(-2 sqrt(r / (e - 1))).
        while lo < 4096.0 {
            let hi = lo + width;
            acc += rule.composite(lo, hi, 2, |r| {
                self.mellin_u_hat(1.0 - w - r) / (w + r)
            });
            lo = hi;
            width *= 1.25;
        }
        Ok(acc)
    }
}

/// Taylor coefficients `c_k` of `exp(-1/((t+h-1)(e-t-h)))` in `h`, `k <= 6`.
fn bump_jet(t: f64) -> [f64; MAX_DERIVATIVE + 1] {
    const N: usize = MAX_DERIVATIVE + 1;
    // p(t + h) = p0 + p1 h - h^2.
    let p = [(t - 1.0) * (E - t), 1.0 + E - 2.0 * t, -1.0];
    let mut r = [0.0; N];
    r[0] = 1.0 / p[0];
    for n in 1..N {
        let mut acc = 0.0;
        for (k, pk) in p.iter().enumerate().skip(1) {
            if k <= n {
                acc += pk * r[n - k];
            }
        }
        r[n] = -acc / p[0];
    }
    let g: [f64; N] = std::array::from_fn(|k| -r[k]);
    let mut out = [0.0; N];
    out[0] = g[0].exp();
    for n in 1..N {
        let mut acc = 0.0;
        for k in 1..=n {
            acc += k as f64 * g[k] * out[n - k];
        }
        out[n] = acc / n as f64;
    }
    out
}

/// The exponential integral `E1(z)`, principal branch.
pub fn exp_integral_e1(z: Complex64) -> Result<Complex64> {
    if z.re == 0.0 && z.im == 0.0 {
        return Err(Error::Singularity("E1 at z = 0".into()));
    }
    if z.im == 0.0 && z.re < 0.0 {
        return Err(Error::BranchCut(format!("E1 on the negative real axis at {z}")));
    }
    if z.norm() <= 4.0 {
        Ok(e1_series(z))
    } else {
        Ok(e1_continued_fraction(z))
    }
}

fn e1_series(z: Complex64) -> Complex64 {
    let mut term = c(1.0, 0.0);
    let mut acc = Complex64::default();
    for k in 1..200 {
        term *= -z / k as f64;
        let add = term / k as f64;
        acc += add;
        if add.norm() < 1e-17 * acc.norm().max(1e-300) {
            break;
        }
    }
    -EULER_GAMMA - z.ln() - acc
}

fn e1_continued_fraction(z: Complex64) -> Complex64 {
    const TINY: f64 = 1e-300;
    let mut b = z + 1.0;
    let mut cc = c(1.0 / TINY, 0.0);
    let mut d = b.inv();
    let mut h = d;
    for i in 1..100_000 {
        let an = -((i * i) as f64);
        b += 2.0;
        d = an * d + b;
        if d.norm() < TINY {
            d = c(TINY, 0.0);
        }
        cc = b + an / cc;
        if cc.norm() < TINY {
            cc = c(TINY, 0.0);
        }
        d = d.inv();
        let del = cc * d;
        h *= del;
        if (del - 1.0).norm() < 1e-16 {
            break;
        }
    }
    h * (-z).exp()
}

/// Principal branch of `log Gamma(z)` (cut along the negative real axis).
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return Err(Error::Singularity(format!("Gamma has a pole at {}", z.re)));
    }
    let shift = (15.0 - z.re).max(0.0).ceil() as usize;
    let mut correction = Complex64::default();
    for k in 0..shift {
        correction += (z + k as f64).ln();
    }
    let w = z + shift as f64;
    Ok(stirling(w) - correction)
}

fn stirling(w: Complex64) -> Complex64 {
    let bern = bernoulli_table();
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut pow = inv;
    let mut series = Complex64::default();
    for (k, b) in bern.iter().enumerate() {
        let n = 2.0 * (k + 1) as f64;
        series += pow * (b / (n * (n - 1.0)));
        pow *= inv2;
    }
    (w - 0.5) * w.ln() - w + 0.5 * LN_2PI + series
}

fn bernoulli_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| bernoulli_numbers(10).expect("10 <= 30"))
}

/// `(e^w - 1) / w`, accurate near `w = 0`.
pub fn exprel(w: Complex64) -> Complex64 {
    if w.norm() < 1e-3 {
        let mut term = c(1.0, 0.0);
        let mut acc = c(1.0, 0.0);
        for k in 2..8 {
            term *= w / k as f64;
            acc += term;
        }
        acc
    } else {
        (w.exp() - 1.0) / w
    }
}

/// Largest `|Im s|` accepted by [`hurwitz_zeta`].
pub const HURWITZ_MAX_HEIGHT: f64 = 200.0;

/// Hurwitz zeta `zeta(s, a)` for `a` in `(0, 1]`, Euler–Maclaurin summation.
pub fn hurwitz_zeta(s: Complex64, a: f64) -> Result<Complex64> {
    if s.re == 1.0 && s.im == 0.0 {
        return Err(Error::PoleExcluded);
    }
    Ok(hurwitz_zeta_regularized(s, a)? + (s - 1.0).inv())
}

/// `zeta(s, a) - 1/(s - 1)`, entire in `s`.
pub fn hurwitz_zeta_regularized(s: Complex64, a: f64) -> Result<Complex64> {
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::Domain(format!("Hurwitz parameter {a} not in (0, 1]")));
    }
    if s.im.abs() > HURWITZ_MAX_HEIGHT {
        return Err(Error::Height {
            height: s.im.abs(),
            ceiling: HURWITZ_MAX_HEIGHT,
        });
    }
    let m = 15usize.max(s.im.abs().ceil() as usize);
    let mut acc = Complex64::default();
    for n in 0..m {
        acc += (-s * (n as f64 + a).ln()).exp();
    }
    let big = m as f64 + a;
    let log_big = big.ln();
    let power = (-s * log_big).exp();
    // (big^(1-s) - 1)/(s - 1) = -log(big) * exprel((1-s) log big).
    acc += -log_big * exprel((1.0 - s) * log_big);
    acc += power * 0.5;
    let bern = bernoulli_table();
    let inv_big2 = 1.0 / (big * big);
    // B_2k/(2k)! * s(s+1)...(s+2k-2) * big^(-s-2k+1)
    let mut rising = s;
    let mut pow = power / big;
    let mut factorial = 2.0;
    for (k, b) in bern.iter().enumerate() {
        let kk = k + 1;
        if kk > 1 {
            let j = 2.0 * kk as f64;
            rising = rising * (s + (j - 3.0)) * (s + (j - 2.0));
            factorial *= (j - 1.0) * j;
            pow *= inv_big2;
        }
        acc += rising * pow * (b / factorial);
    }
    Ok(acc)
}

/// Regularized upper incomplete gamma `Q(a, z) = Gamma(a, z) / Gamma(a)`.
pub fn gamma_q(a: Complex64, z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 && z.re <= 0.0 {
        return Err(Error::BranchCut(format!("incomplete gamma at z = {z}")));
    }
    let lg = log_gamma(a)?;
    let prefactor = a * z.ln() - z - lg;
    if z.norm() < (a.norm() + 1.0).max(3.0) && z.re < 40.0 {
        let p = gamma_p_series(a, z, prefactor)?;
        Ok(1.0 - p)
    } else {
        Ok(prefactor.exp() * gamma_cf(a, z))
    }
}

fn gamma_p_series(a: Complex64, z: Complex64, prefactor: Complex64) -> Result<Complex64> {
    let mut denom = a;
    let mut term = denom.inv();
    let mut acc = term;
    for _ in 0..10_000 {
        denom += 1.0;
        term *= z / denom;
        acc += term;
        if term.norm() < 1e-17 * acc.norm() {
            return Ok(prefactor.exp() * acc);
        }
    }
    Err(Error::Overflow(format!("incomplete gamma series did not settle at a={a}, z={z}")))
}

/// Legendre continued fraction for `Gamma(a, z) e^z z^-a`.
fn gamma_cf(a: Complex64, z: Complex64) -> Complex64 {
    const TINY: f64 = 1e-300;
    let mut b = z + 1.0 - a;
    let mut cc = c(1.0 / TINY, 0.0);
    let mut d = b.inv();
    let mut h = d;
    for i in 1..100_000 {
        let an = -(i as f64) * (c(i as f64, 0.0) - a);
        b += 2.0;
        d = an * d + b;
        if d.norm() < TINY {
            d = c(TINY, 0.0);
        }
        cc = b + an / cc;
        if cc.norm() < TINY {
            cc = c(TINY, 0.0);
        }
        d = d.inv();
        let del = d * cc;
        h *= del;
        if (del - 1.0).norm() < 1e-16 {
            break;
        }
    }
    h
}
