//! Concrete L-functions: primitive Dirichlet L-functions and the L-function of
//! the weight-12 cusp form `Delta`, with their Dirichlet coefficients, Satake
//! parameters, gamma data and weak-Ramanujan constants.

use std::f64::consts::{E, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::{smallest_prime_factors, FACTOR_LIMIT};
use crate::characters::{character_by_index, quadratic_character, DirichletCharacter};
use crate::{Error, Result};

/// Largest coefficient table accepted by [`delta_instance`].
pub const DELTA_MAX_CACHE: u64 = 1_000_000;
/// Default table length for `Delta`; enough for every shipped experiment.
pub const DELTA_DEFAULT_CACHE: u64 = 300_000;
/// Range over which instance constructors measure `A0`.
pub const A0_MEASURE_LIMIT: f64 = 1e5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaData {
    pub conductor: u64,
    pub shifts: Vec<Complex64>,
    pub root_number: Complex64,
    pub self_dual: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InstanceKind {
    Dirichlet,
    Delta,
}

/// JSON descriptor of an instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceDescriptor {
    pub kind: InstanceKind,
    pub name: String,
    pub modulus: Option<u64>,
    pub char_index: Option<usize>,
    pub degree: usize,
    pub kappa: u32,
    pub a0: f64,
    pub theta: f64,
    pub mu: Vec<Complex64>,
    pub root_number: Complex64,
    pub cache_bound: u64,
}

impl InstanceDescriptor {
    /// Analytic conductor `C(it)` from the stored gamma data.
    pub fn analytic_conductor(&self, t: f64) -> f64 {
        let q = self.modulus.unwrap_or(1) as f64;
        let it = Complex64::new(0.0, t);
        q * self.mu.iter().map(|mu| (it + mu).norm() + 3.0).product::<f64>()
    }
}

#[derive(Debug, Clone)]
enum Coefficients {
    Character(DirichletCharacter),
    /// `lambda(n)` for `n = 0..=N` (entry 0 unused).
    Table(Vec<f64>),
}

/// A member of the class of L-functions studied here.
#[derive(Debug, Clone)]
pub struct LFunctionInstance {
    name: String,
    degree: usize,
    gamma: GammaData,
    kind: InstanceKind,
    coefficients: Coefficients,
    cache_bound: u64,
    kappa: u32,
    a0: f64,
    a0_raw: f64,
    theta: f64,
    ell_kappa: f64,
}

/// `min{kappa (1 - sqrt(2/pi)), 1} + 1/1000`.
pub fn ell_kappa(kappa: u32) -> f64 {
    (kappa as f64 * (1.0 - (2.0 / PI).sqrt())).min(1.0) + 1e-3
}

/// The Dirichlet L-function of a primitive nonprincipal character.
pub fn dirichlet_instance(chi: DirichletCharacter) -> Result<LFunctionInstance> {
    if chi.is_principal() {
        return Err(Error::PoleExcluded);
    }
    if !chi.is_primitive() {
        return Err(Error::Domain(format!(
            "character {} mod {} is imprimitive",
            chi.index(),
            chi.modulus()
        )));
    }
    let q = chi.modulus();
    let tau = chi.gauss_sum()?;
    let i_a = if chi.parity() == 1 {
        Complex64::new(0.0, 1.0)
    } else {
        Complex64::new(1.0, 0.0)
    };
    let mut root_number = tau / (i_a * (q as f64).sqrt());
    root_number /= root_number.norm();
    let self_dual = chi.is_real();
    if self_dual {
        // Real primitive characters have root number exactly 1.
        root_number = Complex64::new(root_number.re.round(), 0.0);
    }
    let gamma = GammaData {
        conductor: q,
        shifts: vec![Complex64::new(chi.parity() as f64, 0.0)],
        root_number,
        self_dual,
    };
    let name = if chi.is_real() {
        format!("chi{q}")
    } else {
        format!("chi{q}:{}", chi.index())
    };
    let mut inst = LFunctionInstance {
        name,
        degree: 1,
        gamma,
        kind: InstanceKind::Dirichlet,
        coefficients: Coefficients::Character(chi),
        cache_bound: FACTOR_LIMIT,
        kappa: 1,
        a0: 1.0,
        a0_raw: 0.0,
        theta: 0.0,
        ell_kappa: ell_kappa(1),
    };
    inst.calibrate_a0(A0_MEASURE_LIMIT);
    Ok(inst)
}

/// `tau(n)` for `n <= n_cache`, exact, from `Delta = q (sum (-1)^k (2k+1) q^(k(k+1)/2))^8`.
pub fn ramanujan_tau(n_cache: u64) -> Result<Vec<i128>> {
    if n_cache > DELTA_MAX_CACHE {
        return Err(Error::Resource {
            requested: n_cache,
            bound: DELTA_MAX_CACHE,
        });
    }
    let len = n_cache as usize; // coefficients of q^0 .. q^(N-1) of the eighth power
    let mut sparse: Vec<(usize, i128)> = Vec::new();
    let mut k = 0usize;
    loop {
        let e = k * (k + 1) / 2;
        if e >= len {
            break;
        }
        let sign = if k % 2 == 0 { 1 } else { -1 };
        sparse.push((e, sign * (2 * k as i128 + 1)));
        k += 1;
    }
    let mut power = vec![0i128; len];
    for &(e1, c1) in &sparse {
        for &(e2, c2) in &sparse {
            if e1 + e2 < len {
                power[e1 + e2] += c1 * c2;
            }
        }
    }
    // Intermediate powers overflow; wrapping arithmetic is exact modulo 2^128 and
    // the final coefficients fit, which the Deligne bound below confirms.
    for _ in 0..6 {
        let mut next = vec![0i128; len];
        for (i, &a) in power.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for &(e, c) in &sparse {
                if i + e >= len {
                    break;
                }
                next[i + e] = next[i + e].wrapping_add(a.wrapping_mul(c));
            }
        }
        power = next;
    }
    let mut tau = vec![0i128; len + 1];
    tau[1..].copy_from_slice(&power);
    let divisors = divisor_counts(len);
    for n in 1..=len {
        let bound = divisors[n] as f64 * (n as f64).powf(5.5) * (1.0 + 1e-9);
        if (tau[n] as f64).abs() > bound {
            return Err(Error::Overflow(format!(
                "tau({n}) = {} violates the Deligne bound",
                tau[n]
            )));
        }
    }
    Ok(tau)
}

fn divisor_counts(limit: usize) -> Vec<u32> {
    let mut d = vec![0u32; limit + 1];
    for i in 1..=limit {
        let mut j = i;
        while j <= limit {
            d[j] += 1;
            j += i;
        }
    }
    d
}

/// The L-function of `Delta` in the analytic normalization.
pub fn delta_instance(n_cache: u64) -> Result<LFunctionInstance> {
    let tau = ramanujan_tau(n_cache)?;
    let table: Vec<f64> = tau
        .iter()
        .enumerate()
        .map(|(n, &t)| if n == 0 { 0.0 } else { t as f64 / (n as f64).powf(5.5) })
        .collect();
    let gamma = GammaData {
        conductor: 1,
        shifts: vec![Complex64::new(5.5, 0.0), Complex64::new(6.5, 0.0)],
        root_number: Complex64::new(1.0, 0.0),
        self_dual: true,
    };
    let mut inst = LFunctionInstance {
        name: "delta".into(),
        degree: 2,
        gamma,
        kind: InstanceKind::Delta,
        coefficients: Coefficients::Table(table),
        cache_bound: n_cache,
        kappa: 2,
        a0: 1.0,
        a0_raw: 0.0,
        theta: 0.0,
        ell_kappa: ell_kappa(2),
    };
    inst.calibrate_a0((n_cache as f64 / E).min(A0_MEASURE_LIMIT));
    Ok(inst)
}

/// Builds an instance from a short name: `chi<q>` (the primitive quadratic
/// character mod q), `chi<q>:<index>`, or `delta`.
pub fn instance_by_name(name: &str, delta_cache: u64) -> Result<LFunctionInstance> {
    if name == "delta" {
        return delta_instance(delta_cache);
    }
    let rest = name
        .strip_prefix("chi")
        .ok_or_else(|| Error::Parse(format!("unknown instance {name:?}")))?;
    let parse = |s: &str| {
        s.parse::<u64>()
            .map_err(|_| Error::Parse(format!("bad instance name {name:?}")))
    };
    let chi = match rest.split_once(':') {
        Some((q, idx)) => character_by_index(parse(q)?, parse(idx)? as usize)?,
        None => quadratic_character(parse(rest)?)?,
    };
    dirichlet_instance(chi)
}

impl LFunctionInstance {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn gamma(&self) -> &GammaData {
        &self.gamma
    }

    pub fn kind(&self) -> InstanceKind {
        self.kind
    }

    pub fn kappa(&self) -> u32 {
        self.kappa
    }

    /// The weak-Ramanujan constant carried by the instance (at least 1).
    pub fn a0(&self) -> f64 {
        self.a0
    }

    /// The measured minimal `A0` before clamping to 1 (may be negative).
    pub fn a0_measured(&self) -> f64 {
        self.a0_raw
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn ell_kappa(&self) -> f64 {
        self.ell_kappa
    }

    pub fn cache_bound(&self) -> u64 {
        self.cache_bound
    }

    pub fn character(&self) -> Option<&DirichletCharacter> {
        match &self.coefficients {
            Coefficients::Character(chi) => Some(chi),
            Coefficients::Table(_) => None,
        }
    }

    /// True when every `lambda(n)` (hence every `a(n)`) is real.
    pub fn has_real_coefficients(&self) -> bool {
        match &self.coefficients {
            Coefficients::Character(chi) => chi.is_real(),
            Coefficients::Table(_) => true,
        }
    }

    pub fn descriptor(&self) -> InstanceDescriptor {
        let (modulus, char_index) = match &self.coefficients {
            Coefficients::Character(chi) => (Some(chi.modulus()), Some(chi.index())),
            Coefficients::Table(_) => (None, None),
        };
        InstanceDescriptor {
            kind: self.kind,
            name: self.name.clone(),
            modulus,
            char_index,
            degree: self.degree,
            kappa: self.kappa,
            a0: self.a0,
            theta: self.theta,
            mu: self.gamma.shifts.clone(),
            root_number: self.gamma.root_number,
            cache_bound: self.cache_bound,
        }
    }

    fn check_cache(&self, n: u64) -> Result<()> {
        if n > self.cache_bound {
            Err(Error::Resource {
                requested: n,
                bound: self.cache_bound,
            })
        } else {
            Ok(())
        }
    }

    /// `lambda(n)`.
    pub fn coefficient(&self, n: u64) -> Result<Complex64> {
        if n == 0 {
            return Err(Error::Domain("coefficients are indexed from 1".into()));
        }
        self.check_cache(n)?;
        Ok(self.coefficient_unchecked(n))
    }

    /// `lambda(n)` without range checks; `n` must be in `1..=cache_bound`.
    #[inline]
    pub fn coefficient_unchecked(&self, n: u64) -> Complex64 {
        match &self.coefficients {
            Coefficients::Character(chi) => chi.evaluate_u64(n),
            Coefficients::Table(t) => Complex64::new(t[n as usize], 0.0),
        }
    }

    /// Satake parameters `alpha_j(p)`.
    pub fn satake(&self, p: u64) -> Result<Vec<Complex64>> {
        self.check_cache(p)?;
        Ok(match &self.coefficients {
            Coefficients::Character(chi) => vec![chi.evaluate_u64(p)],
            Coefficients::Table(t) => {
                let lp = t[p as usize];
                let disc = lp * lp - 4.0;
                if disc < 0.0 {
                    let im = (-disc).sqrt() / 2.0;
                    vec![Complex64::new(lp / 2.0, im), Complex64::new(lp / 2.0, -im)]
                } else {
                    let r = disc.sqrt() / 2.0;
                    vec![Complex64::new(lp / 2.0 + r, 0.0), Complex64::new(lp / 2.0 - r, 0.0)]
                }
            }
        })
    }

    /// `a(p^k) = sum_j alpha_j(p)^k`.
    pub fn a_prime_power(&self, p: u64, k: u32) -> Complex64 {
        match &self.coefficients {
            Coefficients::Character(chi) => chi.evaluate_u64(p).powu(k),
            Coefficients::Table(t) => {
                // Power sums of the roots of X^2 - lambda(p) X + 1.
                let lp = t[p as usize];
                let (mut prev, mut cur) = (2.0, lp);
                for _ in 1..k {
                    (prev, cur) = (cur, lp * cur - prev);
                }
                Complex64::new(cur, 0.0)
            }
        }
    }

    /// `a(n)`: the power sum of Satake parameters on prime powers, 0 elsewhere.
    pub fn a_coefficient(&self, n: u64) -> Result<Complex64> {
        if n == 0 {
            return Err(Error::Domain("a(0) is undefined".into()));
        }
        self.check_cache(n)?;
        Ok(match crate::arith::prime_power(n) {
            Some((p, k)) => self.a_prime_power(p, k),
            None => Complex64::new(0.0, 0.0),
        })
    }

    /// `C(it) = q prod_j (|it + mu_j| + 3)`.
    pub fn analytic_conductor(&self, t: f64) -> f64 {
        let it = Complex64::new(0.0, t);
        self.gamma.conductor as f64
            * self
                .gamma
                .shifts
                .iter()
                .map(|mu| (it + mu).norm() + 3.0)
                .product::<f64>()
    }

    /// `prod_{p <= p_max} prod_j (1 - alpha_j(p) p^-s)^-1`.
    pub fn euler_product(&self, s: Complex64, p_max: u64) -> Result<Complex64> {
        self.check_cache(p_max)?;
        let mut log_acc = Complex64::new(0.0, 0.0);
        let mut err = None;
        crate::arith::for_each_prime(p_max, |p| {
            if err.is_some() {
                return;
            }
            match self.satake(p) {
                Ok(alphas) => {
                    let ps = (-s * (p as f64).ln()).exp();
                    for a in alphas {
                        log_acc -= (Complex64::new(1.0, 0.0) - a * ps).ln();
                    }
                }
                Err(e) => err = Some(e),
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        Ok(log_acc.exp())
    }

    /// `sum_{n <= n_max} lambda(n) n^-s`.
    pub fn dirichlet_series(&self, s: Complex64, n_max: u64) -> Result<Complex64> {
        self.check_cache(n_max)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for n in (1..=n_max).rev() {
            acc += self.coefficient_unchecked(n) * (-s * (n as f64).ln()).exp();
        }
        Ok(acc)
    }

    fn calibrate_a0(&mut self, x_max: f64) {
        let report = verify_weak_ramanujan(self, x_max).expect("x_max within cache");
        self.a0_raw = report.a0;
        self.a0 = report.a0.max(1.0);
    }
}

/// One grid point of the weak-Ramanujan check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeakRamanujanRow {
    pub x: f64,
    /// `D(x) = sum_{x < n <= ex} |a(n)|^2 Lambda(n) / n`.
    pub d: f64,
    /// `(D(x) - kappa^2) log(ex)`: the smallest `A0` this point allows.
    pub a0_needed: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeakRamanujanReport {
    pub kappa: u32,
    pub x_max: f64,
    pub a0: f64,
    pub rows: Vec<WeakRamanujanRow>,
}

/// Measures the minimal `A0` over the grid `x = 1, e, e^2, ... <= x_max`.
pub fn verify_weak_ramanujan(inst: &LFunctionInstance, x_max: f64) -> Result<WeakRamanujanReport> {
    if !(x_max >= 1.0) {
        return Err(Error::EmptyDomain(format!("x_max = {x_max} < 1")));
    }
    if x_max > inst.cache_bound as f64 {
        return Err(Error::Resource {
            requested: x_max as u64,
            bound: inst.cache_bound,
        });
    }
    let mut grid = Vec::new();
    let mut k = 0;
    while (k as f64).exp() <= x_max * (1.0 + 1e-12) {
        grid.push((k as f64).exp());
        k += 1;
    }
    let top = (E * grid.last().copied().unwrap_or(1.0)).floor() as u64;
    inst.check_cache(top)?;
    let spf = smallest_prime_factors(top as usize);
    let kappa2 = (inst.kappa * inst.kappa) as f64;
    let mut rows = Vec::with_capacity(grid.len());
    for &x in &grid {
        let lo = x.floor() as u64 + 1;
        let hi = (E * x).floor() as u64;
        let mut d = 0.0;
        for n in lo..=hi {
            if n < 2 {
                continue;
            }
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
            d += a.norm_sqr() * (p as f64).ln() / n as f64;
        }
        rows.push(WeakRamanujanRow {
            x,
            d,
            a0_needed: (d - kappa2) * (E * x).ln(),
        });
    }
    let a0 = rows
        .iter()
        .map(|r| r.a0_needed)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(WeakRamanujanReport {
        kappa: inst.kappa,
        x_max,
        a0,
        rows,
    })
}
