//! Dirichlet characters modulo `q`, built from CRT generators of `(Z/qZ)^x`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, gcd};
use crate::{Error, Result};

/// Largest modulus accepted by [`enumerate_characters`].
pub const MAX_MODULUS: u64 = 10_000;
/// Tolerance used when comparing character values.
pub const VALUE_TOLERANCE: f64 = 1e-12;

/// A Dirichlet character with its full value table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirichletCharacter {
    modulus: u64,
    index: usize,
    order: u64,
    primitive: bool,
    parity: u8,
    /// Exponent of the unit group; values are `L`-th roots of unity.
    exponent: u64,
    /// `log_table[a]` is `r` with `chi(a) = e(r / L)`, or `None` when `gcd(a, q) > 1`.
    log_table: Vec<Option<u64>>,
    values: Vec<Complex64>,
    prefix: Vec<Complex64>,
}

impl DirichletCharacter {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Position in the output of [`enumerate_characters`] for this modulus.
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn is_primitive(&self) -> bool {
        self.primitive
    }

    pub fn is_principal(&self) -> bool {
        self.order == 1
    }

    /// 0 for even characters, 1 for odd ones.
    pub fn parity(&self) -> u8 {
        self.parity
    }

    /// True when every value is real.
    pub fn is_real(&self) -> bool {
        self.order <= 2
    }

    /// Value table indexed by residue `0..q`.
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// `chi(n)`, by table lookup at `n mod q`.
    pub fn evaluate(&self, n: i64) -> Complex64 {
        self.values[n.rem_euclid(self.modulus as i64) as usize]
    }

    pub fn evaluate_u64(&self, n: u64) -> Complex64 {
        self.values[(n % self.modulus) as usize]
    }

    /// `chi(n)` as an index `r` into the `L`-th roots of unity, `None` off the units.
    pub fn log_value(&self, n: u64) -> Option<u64> {
        self.log_table[(n % self.modulus) as usize]
    }

    pub fn group_exponent(&self) -> u64 {
        self.exponent
    }

    /// `S(x, chi) = sum_{n <= x} chi(n)` in `O(1)` after the prefix table.
    pub fn partial_sum(&self, x: f64) -> Complex64 {
        if !(x >= 1.0) {
            return Complex64::new(0.0, 0.0);
        }
        let n = x.floor() as u64;
        let q = self.modulus;
        let full = (n / q) as f64;
        let rem = (n % q) as usize;
        self.prefix[q as usize] * full + self.prefix[rem]
    }

    /// The Gauss sum `tau(chi) = sum_a chi(a) e(a/q)`; defined for primitive characters.
    pub fn gauss_sum(&self) -> Result<Complex64> {
        if !self.primitive {
            return Err(Error::Domain(format!(
                "gauss sum of an imprimitive character mod {}",
                self.modulus
            )));
        }
        let q = self.modulus;
        let mut acc = Complex64::new(0.0, 0.0);
        for a in 1..=q {
            let v = self.values[(a % q) as usize];
            if v.norm_sqr() > 0.0 {
                acc += v * root_of_unity(a % q, q);
            }
        }
        Ok(acc)
    }

    /// Value tables equal within [`VALUE_TOLERANCE`].
    pub fn approx_eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus
            && self
                .values
                .iter()
                .zip(&other.values)
                .all(|(a, b)| (a - b).norm() <= VALUE_TOLERANCE)
    }
}

/// `e(r / l) = exp(2 pi i r / l)`, exact at multiples of quarter turns.
pub fn root_of_unity(r: u64, l: u64) -> Complex64 {
    let r = r % l;
    if (4 * r).is_multiple_of(l) {
        return match 4 * r / l {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    let (s, c) = (2.0 * PI * r as f64 / l as f64).sin_cos();
    Complex64::new(c, s)
}

struct Generator {
    residue: u64,
    order: u64,
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

fn primitive_root_prime_power(p: u64, e: u32) -> u64 {
    let phi_p = p - 1;
    let divisors: Vec<u64> = factorize(phi_p)
        .expect("small")
        .factors
        .iter()
        .map(|&(r, _)| r)
        .collect();
    let g = (2..p)
        .find(|&g| divisors.iter().all(|&r| pow_mod(g, phi_p / r, p) != 1))
        .unwrap_or(1);
    if e >= 2 && pow_mod(g, p - 1, p * p) == 1 {
        g + p
    } else {
        g
    }
}

/// Lifts `g mod m` to the residue mod `q` that is 1 modulo `q / m`.
fn crt_lift(g: u64, m: u64, q: u64) -> u64 {
    let rest = q / m;
    (0..m)
        .map(|k| 1 + k * rest)
        .find(|&x| x % m == g % m)
        .unwrap_or(g)
        % q
}

fn generators(q: u64) -> Vec<Generator> {
    let mut gens = Vec::new();
    for &(p, e) in &factorize(q).expect("q <= 10^4").factors {
        let pe = p.pow(e);
        if p == 2 {
            if e >= 2 {
                gens.push(Generator {
                    residue: crt_lift(pe - 1, pe, q),
                    order: 2,
                });
            }
            if e >= 3 {
                gens.push(Generator {
                    residue: crt_lift(5, pe, q),
                    order: pe / 4,
                });
            }
        } else {
            let g = primitive_root_prime_power(p, e);
            gens.push(Generator {
                residue: crt_lift(g, pe, q),
                order: pe / p * (p - 1),
            });
        }
    }
    gens
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// All `phi(q)` characters mod `q`, principal first, lexicographic in exponent vectors.
pub fn enumerate_characters(q: u64) -> Result<Vec<DirichletCharacter>> {
    if q == 0 || q > MAX_MODULUS {
        return Err(Error::UnsupportedModulus(q));
    }
    let gens = generators(q);
    let exponent = gens.iter().fold(1, |acc, g| lcm(acc, g.order));

    // Discrete logs of every unit on the generators.
    let mut dlog: Vec<Option<Vec<u64>>> = vec![None; q as usize];
    let mut vector = vec![0u64; gens.len()];
    loop {
        let residue = gens
            .iter()
            .zip(&vector)
            .fold(1 % q, |acc, (g, &k)| acc * pow_mod(g.residue, k, q) % q);
        dlog[residue as usize] = Some(vector.clone());
        if !advance(&mut vector, gens.iter().map(|g| g.order)) {
            break;
        }
    }

    let mut chars = Vec::new();
    let mut exps = vec![0u64; gens.len()];
    loop {
        let log_table: Vec<Option<u64>> = dlog
            .iter()
            .map(|entry| {
                entry.as_ref().map(|v| {
                    v.iter()
                        .zip(&exps)
                        .zip(&gens)
                        .map(|((&ei, &ci), g)| ei * ci % g.order * (exponent / g.order))
                        .sum::<u64>()
                        % exponent
                })
            })
            .collect();
        let order = gens
            .iter()
            .zip(&exps)
            .fold(1, |acc, (g, &c)| lcm(acc, g.order / gcd(c, g.order)));
        chars.push(build(q, chars.len(), order, exponent, log_table));
        if !advance(&mut exps, gens.iter().map(|g| g.order)) {
            break;
        }
    }
    Ok(chars)
}

/// Odometer increment with the last coordinate fastest; false once it wraps.
fn advance(v: &mut [u64], bounds: impl DoubleEndedIterator<Item = u64> + ExactSizeIterator) -> bool {
    let bounds: Vec<u64> = bounds.collect();
    for i in (0..v.len()).rev() {
        v[i] += 1;
        if v[i] < bounds[i] {
            return true;
        }
        v[i] = 0;
    }
    false
}

fn build(q: u64, index: usize, order: u64, exponent: u64, log_table: Vec<Option<u64>>) -> DirichletCharacter {
    let values: Vec<Complex64> = log_table
        .iter()
        .map(|r| match r {
            Some(r) => root_of_unity(*r, exponent),
            None => Complex64::new(0.0, 0.0),
        })
        .collect();
    let mut prefix = Vec::with_capacity(q as usize + 1);
    let mut acc = Complex64::new(0.0, 0.0);
    prefix.push(acc);
    for a in 1..=q {
        acc += values[(a % q) as usize];
        prefix.push(acc);
    }
    let parity = match log_table[((q as i64 - 1).rem_euclid(q as i64)) as usize] {
        Some(r) if r != 0 => 1,
        _ => 0,
    };
    let primitive = factorize(q)
        .expect("q <= 10^4")
        .factors
        .iter()
        .all(|&(p, _)| {
            let d = q / p;
            // Induced from modulus d iff trivial on units congruent to 1 mod d.
            (0..p).any(|k| {
                let a = (1 + k * d) % q;
                matches!(log_table[a as usize], Some(r) if r != 0)
            })
        });
    DirichletCharacter {
        modulus: q,
        index,
        order,
        primitive,
        parity,
        exponent,
        log_table,
        values,
        prefix,
    }
}

/// The primitive real nonprincipal character mod `q` (the first one when several exist).
pub fn quadratic_character(q: u64) -> Result<DirichletCharacter> {
    enumerate_characters(q)?
        .into_iter()
        .find(|c| c.order == 2 && c.primitive)
        .ok_or_else(|| Error::Domain(format!("no primitive quadratic character mod {q}")))
}

/// Character number `index` mod `q` in enumeration order.
pub fn character_by_index(q: u64, index: usize) -> Result<DirichletCharacter> {
    let chars = enumerate_characters(q)?;
    let count = chars.len();
    chars
        .into_iter()
        .nth(index)
        .ok_or_else(|| Error::Domain(format!("character index {index} out of range (mod {q} has {count})")))
}
