//! Parameter grids: `start:stop:log10[:count]`, `start:stop:linear:count`,
//! or a comma-separated list.

use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    spec: String,
    values: Vec<f64>,
}

impl Grid {
    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Displays the text the grid was parsed from, for run manifests.
impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec)
    }
}

fn number(s: &str) -> Result<f64, String> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("{s:?} is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{s:?} is not finite"))
    }
}

fn count(s: &str) -> Result<usize, String> {
    match s.trim().parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(format!("{s:?} is not a positive count")),
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(spec: &str) -> Result<Self, String> {
        let parts: Vec<&str> = spec.split(':').collect();
        let values = match parts.as_slice() {
            [single] => single.split(',').map(number).collect::<Result<Vec<_>, _>>()?,
            [start, stop, mode, rest @ ..] if rest.len() <= 1 => {
                let (a, b) = (number(start)?, number(stop)?);
                if b < a {
                    return Err(format!("grid {spec:?} runs backwards"));
                }
                let n = rest.first().map(|c| count(c)).transpose()?;
                match (*mode, n) {
                    ("log10", _) if a <= 0.0 => {
                        return Err(format!("log10 grid {spec:?} needs a positive start"))
                    }
                    // Whole decades from start up to stop.
                    ("log10", None) => {
                        let decades = (b / a).log10();
                        let k = (decades + 1e-9).floor() as i32;
                        (0..=k).map(|i| a * 10f64.powi(i)).collect()
                    }
                    ("log10", Some(n)) => spaced(a.log10(), b.log10(), n)
                        .into_iter()
                        .map(|e| 10f64.powf(e))
                        .enumerate()
                        .map(|(i, v)| if i == 0 { a } else if i + 1 == n { b } else { v })
                        .collect(),
                    ("linear", Some(n)) => spaced(a, b, n),
                    ("linear", None) => return Err(format!("linear grid {spec:?} needs a count")),
                    (other, _) => return Err(format!("unknown grid spacing {other:?}")),
                }
            }
            _ => return Err(format!("cannot parse grid {spec:?}")),
        };
        if values.is_empty() {
            return Err(format!("grid {spec:?} is empty"));
        }
        Ok(Grid {
            spec: spec.to_string(),
            values,
        })
    }
}

fn spaced(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n)
        .map(|i| if i + 1 == n { b } else { a + (b - a) * i as f64 / (n - 1) as f64 })
        .collect()
}
