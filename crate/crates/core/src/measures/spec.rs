//! JSON description of a measure.
//!
//! ```json
//! { "kind": "ifs",
//!   "params": { "maps": [{"scale": 0.333, "offset": 0.0}, {"scale": 0.333, "offset": 0.667}],
//!               "probs": [0.5, 0.5] },
//!   "fourier_tolerance": 1e-10 }
//! ```
//!
//! Kinds and their `params`:
//! - `atomic`: `{"atoms": [{"position": λ, "weight": w}, ...]}`
//! - `ifs`: `{"maps": [{"scale": s, "offset": b}, ...], "probs": [...]}`
//! - `digit`: `{"base": b, "law": {"iid": [...]} | {"periodic": [[...], ...]} | {"factorial_blocks": {"even": [...], "odd": [...]}}}`
//! - `mixture`: `{"p": P, "atoms": [...], "continuous": <measure spec>}`
//! - `binomial`: `{"p": p}`
//! - `uniform`, `cantor`, `appendix`: no params (omit, `null` or `{}`)
//!
//! Unknown fields are rejected at every level.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{Atom, AtomicMeasure, AffineMap, DigitLaw, DigitProductMeasure, IfsMeasure, MeasureKind, SpectralMeasure};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    kind: String,
    #[serde(default)]
    params: Value,
    #[serde(default)]
    fourier_tolerance: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AtomicParams {
    atoms: Vec<Atom>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct IfsParams {
    maps: Vec<AffineMap>,
    probs: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DigitParams {
    base: u32,
    law: DigitLaw,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MixtureParams {
    p: f64,
    atoms: Vec<Atom>,
    continuous: Value,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BinomialParams {
    p: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NoParams {}

fn params<T: for<'de> Deserialize<'de>>(kind: &str, v: Value) -> Result<T> {
    serde_json::from_value(v).map_err(|e| Error::Spec(format!("{kind} params: {e}")))
}

fn no_params(kind: &str, v: Value) -> Result<()> {
    if v.is_null() {
        return Ok(());
    }
    params::<NoParams>(kind, v).map(|_| ())
}

/// Parses a measure from its JSON description.
pub fn from_json(text: &str) -> Result<SpectralMeasure> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Spec(e.to_string()))?;
    from_value(v)
}

pub fn from_value(v: Value) -> Result<SpectralMeasure> {
    let raw: RawSpec = serde_json::from_value(v).map_err(|e| Error::Spec(e.to_string()))?;
    let kind = raw.kind.as_str();
    let m: SpectralMeasure = match kind {
        "atomic" => AtomicMeasure::new(params::<AtomicParams>(kind, raw.params)?.atoms)?.into(),
        "ifs" => {
            let p: IfsParams = params(kind, raw.params)?;
            IfsMeasure::new(p.maps, p.probs)?.into()
        }
        "digit" => {
            let p: DigitParams = params(kind, raw.params)?;
            DigitProductMeasure::new(p.base, p.law)?.into()
        }
        "mixture" => {
            let p: MixtureParams = params(kind, raw.params)?;
            let cont = from_value(p.continuous)?;
            SpectralMeasure::mixture(AtomicMeasure::new(p.atoms)?, cont, p.p)?
        }
        "binomial" => SpectralMeasure::binomial(params::<BinomialParams>(kind, raw.params)?.p)?,
        "uniform" => {
            no_params(kind, raw.params)?;
            SpectralMeasure::uniform()
        }
        "cantor" => {
            no_params(kind, raw.params)?;
            SpectralMeasure::cantor()
        }
        "appendix" => {
            no_params(kind, raw.params)?;
            SpectralMeasure::appendix()
        }
        other => return Err(Error::Spec(format!("unknown measure kind '{other}'"))),
    };
    match raw.fourier_tolerance {
        Some(t) => m.with_tolerance(t),
        None => Ok(m),
    }
}

/// Named presets: `uniform`, `cantor`, `appendix`, `binomial(p)`, `atomic` (one atom at 0),
/// `atoms(n)` (`n` equally spaced equal atoms) and `mixture` (half an atom at 0, half uniform).
pub fn preset(name: &str) -> Result<SpectralMeasure> {
    let name = name.trim();
    match name {
        "uniform" => Ok(SpectralMeasure::uniform()),
        "cantor" => Ok(SpectralMeasure::cantor()),
        "appendix" => Ok(SpectralMeasure::appendix()),
        "atomic" => Ok(AtomicMeasure::equally_spaced(1)?.into()),
        "mixture" => SpectralMeasure::mixture(AtomicMeasure::equally_spaced(1)?, SpectralMeasure::uniform(), 0.5),
        _ => {
            let arg = |prefix: &str| name.strip_prefix(prefix).and_then(|s| s.strip_suffix(')')).map(str::trim);
            if let Some(inner) = arg("binomial(") {
                let p: f64 = inner.parse().map_err(|_| Error::Spec(format!("bad binomial weight '{inner}'")))?;
                SpectralMeasure::binomial(p)
            } else if let Some(inner) = arg("atoms(") {
                let n: usize = inner.parse().map_err(|_| Error::Spec(format!("bad atom count '{inner}'")))?;
                Ok(AtomicMeasure::equally_spaced(n)?.into())
            } else {
                Err(Error::Spec(format!("unknown preset '{name}'")))
            }
        }
    }
}

/// The spec JSON describing `m`; `from_value(to_value(m))` rebuilds it.
pub fn to_value(m: &SpectralMeasure) -> Value {
    let mut v = match m.kind() {
        MeasureKind::Atomic(a) => json!({"kind": "atomic", "params": {"atoms": a.atoms()}}),
        MeasureKind::Ifs(f) => json!({"kind": "ifs", "params": {"maps": f.maps(), "probs": f.probs()}}),
        MeasureKind::Digit(d) => json!({"kind": "digit", "params": {"base": d.base(), "law": d.law()}}),
        MeasureKind::Mixture(mx) => json!({"kind": "mixture", "params": {
            "p": mx.p(),
            "atoms": mx.point_part().atoms(),
            "continuous": to_value(mx.continuous_part()),
        }}),
    };
    v["fourier_tolerance"] = json!(m.tolerance());
    v
}
