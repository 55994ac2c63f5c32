//! Grid arguments: `a,b,c` lists, `start:stop:count` for reals and
//! `start:stop` (inclusive) for integers.

use crate::error::CliError;

fn parse_f64(s: &str, what: &str) -> Result<f64, CliError> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| CliError::usage(format!("{what}: `{s}` is not a number")))?;
    if !v.is_finite() {
        return Err(CliError::usage(format!("{what}: `{s}` is not finite")));
    }
    Ok(v)
}

fn parse_u64(s: &str, what: &str) -> Result<u64, CliError> {
    s.trim()
        .parse()
        .map_err(|_| CliError::usage(format!("{what}: `{s}` is not a non-negative integer")))
}

/// Real grid. `0:1:5` is five evenly spaced points from 0 to 1 inclusive.
pub fn real_grid(spec: &str, what: &str) -> Result<Vec<f64>, CliError> {
    let spec = spec.trim();
    if spec.is_empty() {
        return Ok(Vec::new());
    }
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        let [start, stop, count] = parts[..] else {
            return Err(CliError::usage(format!("{what}: expected start:stop:count, got `{spec}`")));
        };
        let (start, stop) = (parse_f64(start, what)?, parse_f64(stop, what)?);
        let count = parse_u64(count, what)? as usize;
        return Ok(match count {
            0 => Vec::new(),
            1 => vec![start],
            _ => {
                let step = (stop - start) / (count - 1) as f64;
                (0..count)
                    .map(|i| if i + 1 == count { stop } else { start + step * i as f64 })
                    .collect()
            }
        });
    }
    spec.split(',').map(|s| parse_f64(s, what)).collect()
}

/// Integer grid. `0:4` is `0,1,2,3,4`.
pub fn int_grid(spec: &str, what: &str) -> Result<Vec<u64>, CliError> {
    let spec = spec.trim();
    if spec.is_empty() {
        return Ok(Vec::new());
    }
    if let Some((lo, hi)) = spec.split_once(':') {
        let (lo, hi) = (parse_u64(lo, what)?, parse_u64(hi, what)?);
        return Ok((lo..=hi).collect());
    }
    spec.split(',').map(|s| parse_u64(s, what)).collect()
}

/// A grid that must hold at least one point.
pub fn non_empty<T>(grid: Vec<T>, what: &str) -> Result<Vec<T>, CliError> {
    if grid.is_empty() {
        return Err(CliError::usage(format!("{what}: grid is empty")));
    }
    Ok(grid)
}
