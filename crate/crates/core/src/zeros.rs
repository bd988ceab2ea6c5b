//! Critical-line zeros, argument-principle certification and local zero counts.

use std::f64::consts::{FRAC_PI_4, PI};
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eval::{completed_l, hardy_z, MAX_HEIGHT};
use crate::instances::{InstanceDescriptor, LFunctionInstance};
use crate::{Error, Result};

pub const SCAN_STEP: f64 = 0.05;
pub const REFINE_WIDTH: f64 = 1e-9;
/// Real parts of the vertical sides of the counting rectangle.
pub const CONTOUR_LEFT: f64 = -0.5;
pub const CONTOUR_RIGHT: f64 = 1.5;
const CONTOUR_STEP: f64 = 0.05;
const CONTOUR_MIN_STEP: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Zero {
    pub beta: f64,
    pub gamma: f64,
    pub refinement_width: f64,
}

impl Zero {
    pub fn rho(&self) -> Complex64 {
        Complex64::new(self.beta, self.gamma)
    }
}

/// Zeros with ordinate in `[0, T]`, certified complete by the argument principle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroSet {
    pub instance: InstanceDescriptor,
    pub window: (f64, f64),
    pub zeros: Vec<Zero>,
    pub certified: bool,
    pub argument_count: i64,
    pub raw_winding: f64,
}

/// Scans `Z(t)` on `[0, t_max]`, refines each sign change and certifies the
/// count with [`count_argument_principle`].
pub fn find_zeros(inst: &LFunctionInstance, t_max: f64) -> Result<ZeroSet> {
    if !inst.gamma().self_dual {
        return Err(Error::Unsupported(format!(
            "zero scan needs a self-dual instance; {} is not",
            inst.name()
        )));
    }
    if !(0.0..=MAX_HEIGHT).contains(&t_max) {
        return Err(Error::Height {
            height: t_max,
            ceiling: MAX_HEIGHT,
        });
    }
    let steps = (t_max / SCAN_STEP).ceil() as usize;
    let grid: Vec<f64> = (0..=steps)
        .map(|i| (i as f64 * SCAN_STEP).min(t_max))
        .collect();
    let values = grid
        .par_iter()
        .map(|&t| hardy_z(inst, t))
        .collect::<Result<Vec<f64>>>()?;
    let brackets: Vec<(f64, f64, f64)> = (1..grid.len())
        .filter(|&i| values[i - 1] * values[i] < 0.0 || (values[i] == 0.0 && grid[i] < t_max))
        .map(|i| (grid[i - 1], grid[i], values[i - 1]))
        .collect();
    let zeros = brackets
        .par_iter()
        .map(|&(a, b, fa)| refine(inst, a, b, fa))
        .collect::<Result<Vec<Zero>>>()?;
    let (argument_count, raw_winding) = if t_max == 0.0 {
        (0, 0.0)
    } else {
        argument_count_raw(inst, t_max)?
    };
    if argument_count != zeros.len() as i64 {
        return Err(Error::IncompleteScan {
            sign_changes: zeros.len(),
            argument_count,
        });
    }
    Ok(ZeroSet {
        instance: inst.descriptor(),
        window: (0.0, t_max),
        zeros,
        certified: true,
        argument_count,
        raw_winding,
    })
}

fn refine(inst: &LFunctionInstance, mut a: f64, mut b: f64, mut fa: f64) -> Result<Zero> {
    while b - a > REFINE_WIDTH {
        let mid = 0.5 * (a + b);
        let fm = hardy_z(inst, mid)?;
        if fm == 0.0 {
            return Ok(Zero {
                beta: 0.5,
                gamma: mid,
                refinement_width: 0.0,
            });
        }
        if fa * fm < 0.0 {
            b = mid;
        } else {
            a = mid;
            fa = fm;
        }
    }
    Ok(Zero {
        beta: 0.5,
        gamma: 0.5 * (a + b),
        refinement_width: b - a,
    })
}

/// Total change of `arg f` along the closed polygon `vertices`, by adaptive
/// steps whose increments stay below `pi/4`.
fn winding_along<F>(vertices: &[Complex64], mut f: F) -> Result<f64>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    let mut total = 0.0;
    let mut value = f(vertices[0])?;
    for i in 0..vertices.len() {
        let (a, b) = (vertices[i], vertices[(i + 1) % vertices.len()]);
        let length = (b - a).norm();
        if length == 0.0 {
            continue;
        }
        let dir = (b - a) / length;
        let mut pos = 0.0;
        let mut h = CONTOUR_STEP.min(length);
        while pos < length {
            let step = h.min(length - pos);
            let next_value = f(a + dir * (pos + step))?;
            if next_value.norm() == 0.0 {
                return Err(Error::ContourResolution(f64::NAN));
            }
            let darg = (next_value / value).arg();
            if darg.abs() >= FRAC_PI_4 {
                h = step / 2.0;
                if h < CONTOUR_MIN_STEP {
                    return Err(Error::ContourResolution(total / (2.0 * PI)));
                }
                continue;
            }
            total += darg;
            value = next_value;
            pos += step;
            h = (2.0 * step).min(CONTOUR_STEP);
        }
    }
    Ok(total / (2.0 * PI))
}

fn rectangle(lo: f64, hi: f64) -> [Complex64; 4] {
    [
        Complex64::new(CONTOUR_RIGHT, lo),
        Complex64::new(CONTOUR_RIGHT, hi),
        Complex64::new(CONTOUR_LEFT, hi),
        Complex64::new(CONTOUR_LEFT, lo),
    ]
}

fn argument_count_raw(inst: &LFunctionInstance, t: f64) -> Result<(i64, f64)> {
    let self_dual = inst.gamma().self_dual;
    let lo = if self_dual { -t } else { 0.0 };
    let raw = winding_along(&rectangle(lo, t), |s| completed_l(inst, s))?;
    let rounded = raw.round();
    if (raw - rounded).abs() > 0.1 {
        return Err(Error::ContourResolution(raw));
    }
    let mut count = rounded as i64;
    if self_dual {
        if count % 2 != 0 {
            // A zero at the central point is counted once by the symmetric window.
            return Err(Error::ContourResolution(raw));
        }
        count /= 2;
    }
    Ok((count, raw))
}

/// Number of zeros with `0 < gamma <= T` from the winding of the completed
/// function around `[-1/2, 3/2] x [-T, T]` (halved for self-dual instances).
pub fn count_argument_principle(inst: &LFunctionInstance, t: f64) -> Result<i64> {
    if t > MAX_HEIGHT {
        return Err(Error::Height {
            height: t,
            ceiling: MAX_HEIGHT,
        });
    }
    if t <= 0.0 {
        return Ok(0);
    }
    Ok(argument_count_raw(inst, t)?.0)
}

impl ZeroSet {
    pub fn t_max(&self) -> f64 {
        self.window.1
    }

    /// Every zero with `|gamma| <= T`, completed by the functional-equation
    /// symmetries `rho -> conj(rho)` and `rho -> 1 - rho`.
    pub fn completed_zeros(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(2 * self.zeros.len());
        for z in &self.zeros {
            let rho = z.rho();
            let mut images = vec![rho, rho.conj(), 1.0 - rho, 1.0 - rho.conj()];
            images.sort_by(|a, b| a.im.total_cmp(&b.im).then(a.re.total_cmp(&b.re)));
            images.dedup();
            out.extend(images);
        }
        out.sort_by(|a, b| a.im.total_cmp(&b.im).then(a.re.total_cmp(&b.re)));
        out
    }

    /// Completed zeros with ordinate in `[lo, hi]`.
    pub fn zeros_in_band(&self, lo: f64, hi: f64) -> Vec<Complex64> {
        self.completed_zeros()
            .into_iter()
            .filter(|z| z.im >= lo && z.im <= hi)
            .collect()
    }

    fn check_coverage(&self, lo: f64, hi: f64) -> Result<()> {
        if !self.certified {
            return Err(Error::Coverage("zero set is not certified".into()));
        }
        let t = self.t_max();
        if lo < -t || hi > t {
            return Err(Error::Coverage(format!(
                "ordinates [{lo}, {hi}] leave the certified window [-{t}, {t}]"
            )));
        }
        Ok(())
    }

    /// Zeros in the closed disc `|rho - center| <= radius`.
    pub fn count_in_disc(&self, center: Complex64, radius: f64) -> Result<usize> {
        if radius <= 0.0 {
            return Ok(0);
        }
        self.check_coverage(center.im - radius, center.im + radius)?;
        Ok(self
            .completed_zeros()
            .iter()
            .filter(|rho| (*rho - center).norm() <= radius)
            .count())
    }

    /// Zeros with ordinate in `[t, t + 1]`, and that count over `log C(it)`.
    pub fn strip_count(&self, t: f64) -> Result<(usize, f64)> {
        self.check_coverage(t, t + 1.0)?;
        let count = self
            .completed_zeros()
            .iter()
            .filter(|z| z.im >= t && z.im <= t + 1.0 && z.re >= 0.5)
            .count();
        Ok((count, count as f64 / self.instance.analytic_conductor(t).ln()))
    }

    /// Counts in discs `|rho - (1 + it)| <= r` over the two grids.
    pub fn linnik_profile(&self, t_grid: &[f64], r_grid: &[f64]) -> Result<LinnikProfile> {
        let mut rows = Vec::with_capacity(t_grid.len() * r_grid.len());
        for &t in t_grid {
            let log_c = self.instance.analytic_conductor(t).ln();
            for &r in r_grid {
                let count = self.count_in_disc(Complex64::new(1.0, t), r)?;
                rows.push(LinnikRow {
                    t,
                    r,
                    count,
                    normalized: count as f64 / (r * log_c),
                    in_hypothesis: r >= 1.0 / log_c && r <= 0.75,
                });
            }
        }
        let max_ratio = rows
            .iter()
            .filter(|r| r.in_hypothesis)
            .map(|r| r.normalized)
            .fold(0.0, f64::max);
        Ok(LinnikProfile { rows, max_ratio })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let set: ZeroSet = serde_json::from_str(text)?;
        set.validate()?;
        Ok(set)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    fn validate(&self) -> Result<()> {
        if self.certified && self.zeros.len() as i64 != self.argument_count {
            return Err(Error::Parse(format!(
                "certified zero set lists {} zeros but counts {}",
                self.zeros.len(),
                self.argument_count
            )));
        }
        if self.zeros.windows(2).any(|w| w[0].gamma >= w[1].gamma) {
            return Err(Error::Parse("zero ordinates are not increasing".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinnikRow {
    pub t: f64,
    pub r: f64,
    pub count: usize,
    pub normalized: f64,
    /// Whether `1/log C(it) <= r <= 3/4`.
    pub in_hypothesis: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinnikProfile {
    pub rows: Vec<LinnikRow>,
    /// Largest normalized count among in-hypothesis rows.
    pub max_ratio: f64,
}
