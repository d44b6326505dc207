//! Grid specifications: `a:b:step` (inclusive), `a,b,c`, or a single value.

use anyhow::{bail, Context, Result};

pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let spec = spec.trim();
    if spec.is_empty() {
        bail!("empty grid specification");
    }
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            bail!("range `{spec}` must have the form start:stop:step");
        }
        let num = |s: &str| {
            s.trim()
                .parse::<f64>()
                .with_context(|| format!("bad number `{s}` in range `{spec}`"))
        };
        let (a, b, step) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
        if !(step > 0.0) || !a.is_finite() || !b.is_finite() || b < a {
            bail!("range `{spec}` needs a positive step and start ≤ stop");
        }
        let count = ((b - a) / step + 1e-9).floor() as usize + 1;
        if count > 10_000_000 {
            bail!("range `{spec}` has too many points");
        }
        return Ok((0..count).map(|i| a + step * i as f64).collect());
    }
    spec.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .with_context(|| format!("bad number `{s}` in list `{spec}`"))
        })
        .collect()
}

/// Like [`parse_grid`] but every value must be a nonnegative integer.
pub fn parse_sizes(spec: &str) -> Result<Vec<usize>> {
    parse_grid(spec)?
        .into_iter()
        .map(|v| {
            if v >= 0.0 && v.fract() == 0.0 && v < 1e9 {
                Ok(v as usize)
            } else {
                bail!("N must be a whole number, got {v}")
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_include_the_endpoint() {
        assert_eq!(parse_grid("1:9:2").unwrap(), vec![1.0, 3.0, 5.0, 7.0, 9.0]);
        assert_eq!(parse_grid("0:0.3:0.1").unwrap().len(), 4);
        assert_eq!(parse_sizes("10:100:10").unwrap().len(), 10);
    }

    #[test]
    fn lists_and_errors() {
        assert_eq!(parse_grid("2, 4,8").unwrap(), vec![2.0, 4.0, 8.0]);
        assert!(parse_grid("1:2").is_err());
        assert!(parse_grid("3:1:1").is_err());
        assert!(parse_sizes("2.5").is_err());
    }
}
