use std::ops::RangeInclusive;
use std::path::Path;

use specdim::measures::spec;
use specdim::{Error, Result, SpectralMeasure};

/// `"2^a..2^b"` or a comma-separated list of positive integers.
pub fn times(expr: &str) -> Result<Vec<usize>> {
    let expr = expr.trim();
    let bad = || Error::InvalidArgument(format!("bad times '{expr}': use 2^a..2^b or a list such as 2,4,8"));
    let out: Vec<usize> = if let Some((a, b)) = expr.split_once("..") {
        let exp = |s: &str| -> Result<u32> { s.trim().strip_prefix("2^").and_then(|e| e.trim().parse().ok()).ok_or_else(bad) };
        let (a, b) = (exp(a)?, exp(b)?);
        if a > b || b > 40 {
            return Err(bad());
        }
        (a..=b).map(|k| 1usize << k).collect()
    } else {
        expr.split(',').map(|s| s.trim().parse::<usize>().map_err(|_| bad())).collect::<Result<_>>()?
    };
    if out.is_empty() || out[0] == 0 || out.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(format!("times '{expr}' must be positive and strictly increasing")));
    }
    Ok(out)
}

/// `"a..b"` (inclusive) or a single depth.
pub fn depths(expr: &str) -> Result<RangeInclusive<u32>> {
    let bad = || Error::InvalidArgument(format!("bad depth range '{expr}': use a..b"));
    let num = |s: &str| s.trim().parse::<u32>().map_err(|_| bad());
    let (a, b) = match expr.split_once("..") {
        Some((a, b)) => (num(a)?, num(b)?),
        None => (num(expr)?, num(expr)?),
    };
    if a > b {
        return Err(bad());
    }
    Ok(a..=b)
}

/// A path to a JSON spec file, or a preset name.
pub fn measure(arg: &str) -> Result<SpectralMeasure> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path)?;
        spec::from_json(&text)
    } else {
        spec::preset(arg).map_err(|e| Error::Spec(format!("'{arg}' is neither a readable spec file nor a preset ({e})")))
    }
}
