//! JSON encodings for the `f64` lane: matrices, conjugations, symbols,
//! spaces, maps, and the classification reports.
//!
//! Conventions: complex numbers are `[re, im]` pairs; matrices carry
//! `rows`, `cols`, and row-major `data`; symbol coefficients are keyed by
//! the stringified index; weights are JSON numbers for float spaces and
//! `"p/q"` strings for exact rational spaces. Every encoder emits objects
//! whose keys serialize in sorted order, so equal values give byte-equal
//! documents.

use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;

use num_complex::Complex;
use num_rational::Rational64;
use serde_json::{json, Map, Value};

use crate::canonical::{
    CNormalDecomposition, CanonicalBlocks, CanonicalDecomposition, DecompositionVariant,
};
use crate::classify::ClassificationReport;
use crate::conjugation::{Conjugation, ConjugationKind};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::measure::{
    CompositionClassification, Density, DiscreteMeasureSpace, MultiplicationClassification,
    PointId, PointMap, Weight,
};
use crate::toeplitz::{Symbol, ToeplitzReport, WindowedResidual};
use crate::tolerance::ToleranceContext;

/// Schema tag stamped on every top-level report.
pub const SCHEMA_VERSION: &str = "1";

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

pub fn complex_to_json(z: Complex<f64>) -> Value {
    json!([z.re, z.im])
}

pub fn complex_from_json(v: &Value) -> Result<Complex<f64>> {
    let arr = v.as_array().ok_or_else(|| bad("complex value must be a [re, im] pair"))?;
    if arr.len() != 2 {
        return Err(bad("complex value must have exactly two entries"));
    }
    let re = arr[0].as_f64().ok_or_else(|| bad("complex entries must be numbers"))?;
    let im = arr[1].as_f64().ok_or_else(|| bad("complex entries must be numbers"))?;
    Ok(Complex::new(re, im))
}

pub fn matrix_to_json(m: &Matrix<f64>) -> Value {
    let data: Vec<Value> = (0..m.rows())
        .flat_map(|i| (0..m.cols()).map(move |j| (i, j)))
        .map(|(i, j)| complex_to_json(m[(i, j)]))
        .collect();
    json!({"rows": m.rows(), "cols": m.cols(), "data": data})
}

pub fn matrix_from_json(v: &Value) -> Result<Matrix<f64>> {
    let obj = v.as_object().ok_or_else(|| bad("matrix must be an object"))?;
    let rows = obj
        .get("rows")
        .and_then(Value::as_u64)
        .ok_or_else(|| bad("matrix needs an integer `rows` field"))? as usize;
    let cols = obj
        .get("cols")
        .and_then(Value::as_u64)
        .ok_or_else(|| bad("matrix needs an integer `cols` field"))? as usize;
    let data = obj
        .get("data")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("matrix needs a `data` array"))?;
    if data.len() != rows * cols {
        return Err(bad(format!(
            "matrix data has {} entries, expected {}",
            data.len(),
            rows * cols
        )));
    }
    let mut m = Matrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = complex_from_json(&data[i * cols + j])?;
        }
    }
    Ok(m)
}

pub fn conjugation_to_json(c: &Conjugation<f64>) -> Value {
    match c.kind() {
        ConjugationKind::Identity => json!({"kind": "identity", "dim": c.dim()}),
        ConjugationKind::Flip => json!({"kind": "flip", "dim": c.dim()}),
        ConjugationKind::XiTheta { xi, theta } => {
            json!({"kind": "xi_theta", "dim": c.dim(), "xi": xi, "theta": theta})
        }
        ConjugationKind::Custom => {
            json!({"kind": "custom", "dim": c.dim(), "matrix": matrix_to_json(c.matrix())})
        }
    }
}

pub fn conjugation_from_json(v: &Value, tol: &ToleranceContext<f64>) -> Result<Conjugation<f64>> {
    let obj = v.as_object().ok_or_else(|| bad("conjugation must be an object"))?;
    let kind = obj
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| bad("conjugation needs a string `kind` field"))?;
    let dim = || -> Result<usize> {
        Ok(obj
            .get("dim")
            .and_then(Value::as_u64)
            .ok_or_else(|| bad("conjugation needs an integer `dim` field"))? as usize)
    };
    match kind {
        "identity" => Ok(Conjugation::identity(dim()?)),
        "flip" => Ok(Conjugation::flip(dim()?)),
        "xi_theta" => {
            let xi = obj
                .get("xi")
                .and_then(Value::as_f64)
                .ok_or_else(|| bad("xi_theta conjugation needs a numeric `xi`"))?;
            let theta = obj
                .get("theta")
                .and_then(Value::as_f64)
                .ok_or_else(|| bad("xi_theta conjugation needs a numeric `theta`"))?;
            Ok(Conjugation::xi_theta(dim()?, xi, theta))
        }
        "custom" => {
            let m = obj
                .get("matrix")
                .ok_or_else(|| bad("custom conjugation needs a `matrix` field"))?;
            Conjugation::custom(matrix_from_json(m)?, tol)
        }
        other => Err(bad(format!("unknown conjugation kind `{other}`"))),
    }
}

pub fn symbol_to_json(sym: &Symbol<f64>) -> Value {
    let coeffs: Map<String, Value> = sym
        .coeffs()
        .iter()
        .map(|(k, &v)| (k.to_string(), complex_to_json(v)))
        .collect();
    json!({"coeffs": coeffs, "tail_bound": sym.tail_bound()})
}

pub fn symbol_from_json(v: &Value) -> Result<Symbol<f64>> {
    let obj = v.as_object().ok_or_else(|| bad("symbol must be an object"))?;
    let coeffs_obj = obj
        .get("coeffs")
        .and_then(Value::as_object)
        .ok_or_else(|| bad("symbol needs a `coeffs` object"))?;
    let mut coeffs = BTreeMap::new();
    for (key, val) in coeffs_obj {
        let k: i64 = key
            .parse()
            .map_err(|_| bad(format!("coefficient key `{key}` is not an integer")))?;
        coeffs.insert(k, complex_from_json(val)?);
    }
    let tail = match obj.get("tail_bound") {
        None => 0.0,
        Some(t) => t.as_f64().ok_or_else(|| bad("`tail_bound` must be a number"))?,
    };
    Symbol::new(coeffs, tail)
}

pub fn blocks_to_json(blocks: &CanonicalBlocks<f64>) -> Value {
    let pairs: Vec<Value> = blocks.pairs.iter().map(|&(s, t)| json!([s, t])).collect();
    json!({"singles": &blocks.singles, "pairs": pairs})
}

pub fn blocks_from_json(v: &Value) -> Result<CanonicalBlocks<f64>> {
    let obj = v.as_object().ok_or_else(|| bad("blocks must be an object"))?;
    let singles = obj
        .get("singles")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("blocks need a `singles` array"))?
        .iter()
        .map(|x| x.as_f64().ok_or_else(|| bad("singles must be numbers")))
        .collect::<Result<Vec<f64>>>()?;
    let pairs = obj
        .get("pairs")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("blocks need a `pairs` array"))?
        .iter()
        .map(|p| {
            let pair = p.as_array().filter(|a| a.len() == 2).ok_or_else(|| {
                bad("each pair must be a two-entry array [s, t]")
            })?;
            let s = pair[0].as_f64().ok_or_else(|| bad("pair entries must be numbers"))?;
            let t = pair[1].as_f64().ok_or_else(|| bad("pair entries must be numbers"))?;
            Ok((s, t))
        })
        .collect::<Result<Vec<(f64, f64)>>>()?;
    Ok(CanonicalBlocks::new(singles, pairs))
}

pub fn classification_report_to_json(r: &ClassificationReport<f64>) -> Value {
    let flags: Map<String, Value> =
        r.flags.iter().map(|(&k, &v)| (k.to_string(), Value::Bool(v))).collect();
    let residuals: Map<String, Value> =
        r.residuals.iter().map(|(&k, &v)| (k.to_string(), json!(v))).collect();
    json!({
        "dim": r.dim,
        "c_normal": r.c_normal,
        "c_symmetric": r.c_symmetric,
        "c_skew_symmetric": r.c_skew_symmetric,
        "normal": r.normal,
        "flags": flags,
        "residuals": residuals,
        "c_symmetric_residual": r.c_symmetric_residual,
        "c_skew_symmetric_residual": r.c_skew_symmetric_residual,
        "normal_residual": r.normal_residual,
        "flags_agree": r.flags_agree(),
    })
}

fn windowed_residual_to_json(r: &WindowedResidual<f64>) -> Value {
    json!({"value": r.value, "tail": r.tail})
}

pub fn toeplitz_report_to_json(r: &ToeplitzReport<f64>) -> Value {
    json!({
        "c_symmetric": r.c_symmetric,
        "c_skew_symmetric": r.c_skew_symmetric,
        "c_normal": r.c_normal,
        "eta": r.eta.map(complex_to_json).unwrap_or(Value::Null),
        "reflection_residual": r
            .reflection_residual
            .as_ref()
            .map(windowed_residual_to_json)
            .unwrap_or(Value::Null),
        "balance_residual": r
            .balance_residual
            .as_ref()
            .map(windowed_residual_to_json)
            .unwrap_or(Value::Null),
    })
}

pub fn canonical_decomposition_to_json(d: &CanonicalDecomposition<f64>) -> Value {
    json!({
        "u": matrix_to_json(&d.u),
        "d": matrix_to_json(&d.d),
        "blocks": blocks_to_json(&d.blocks),
        "residual": d.residual,
    })
}

pub fn c_normal_decomposition_to_json(d: &CNormalDecomposition<f64>) -> Value {
    let variant = match d.variant {
        DecompositionVariant::OperatorConjugation => "operator_conjugation",
        DecompositionVariant::ConjugationOperator => "conjugation_operator",
    };
    json!({
        "variant": variant,
        "canonical": canonical_decomposition_to_json(&d.canonical),
        "reconstruction_residual": d.reconstruction_residual,
    })
}

/// A parsed measure space: float weights or exact rational weights,
/// depending on how the JSON spells them.
pub enum ParsedSpace {
    Float(DiscreteMeasureSpace<f64>),
    Rational(DiscreteMeasureSpace<Rational64>),
}

fn weight_values(obj: &Map<String, Value>) -> Result<(&Map<String, Value>, Vec<String>)> {
    let weights = obj
        .get("weights")
        .and_then(Value::as_object)
        .ok_or_else(|| bad("space needs a `weights` object"))?;
    let points: Vec<String> = match obj.get("points") {
        Some(v) => v
            .as_array()
            .ok_or_else(|| bad("`points` must be an array of ids"))?
            .iter()
            .map(|p| {
                p.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| bad("each point id must be a string"))
            })
            .collect::<Result<_>>()?,
        None => weights.keys().cloned().collect(),
    };
    Ok((weights, points))
}

/// Parse a measure space. All-numeric weights give the float lane,
/// all-string weights (`"3"`, `"1/2"`) the exact rational lane. An
/// `interior` array makes the space a window; `density_bound` is optional.
pub fn space_from_json(v: &Value) -> Result<ParsedSpace> {
    let obj = v.as_object().ok_or_else(|| bad("space must be an object"))?;
    let (weights, points) = weight_values(obj)?;
    let interior: Option<BTreeSet<PointId>> = match obj.get("interior") {
        None => None,
        Some(arr) => Some(
            arr.as_array()
                .ok_or_else(|| bad("`interior` must be an array of ids"))?
                .iter()
                .map(|p| {
                    p.as_str()
                        .map(str::to_string)
                        .ok_or_else(|| bad("each interior id must be a string"))
                })
                .collect::<Result<_>>()?,
        ),
    };
    let density_bound = match obj.get("density_bound") {
        None => None,
        Some(b) => Some(b.as_f64().ok_or_else(|| bad("`density_bound` must be a number"))?),
    };
    let all_strings = weights.values().all(Value::is_string);
    let all_numbers = weights.values().all(Value::is_number);
    if !(all_strings || all_numbers) {
        return Err(bad("weights must be all numbers (float lane) or all strings (rational lane)"));
    }
    let lookup = |id: &str| -> Result<&Value> {
        weights.get(id).ok_or_else(|| bad(format!("point {id} has no weight")))
    };
    if all_numbers {
        let atoms = points
            .iter()
            .map(|id| {
                let w = lookup(id)?.as_f64().unwrap();
                Ok((id.clone(), w))
            })
            .collect::<Result<Vec<_>>>()?;
        let space = match interior {
            None => DiscreteMeasureSpace::finite(atoms)?,
            Some(int) => DiscreteMeasureSpace::windowed(atoms, int, density_bound)?,
        };
        Ok(ParsedSpace::Float(space))
    } else {
        let atoms = points
            .iter()
            .map(|id| {
                let s = lookup(id)?.as_str().unwrap();
                let w = Rational64::from_str(s)
                    .map_err(|_| bad(format!("weight `{s}` is not a rational p/q")))?;
                Ok((id.clone(), w))
            })
            .collect::<Result<Vec<_>>>()?;
        let space = match interior {
            None => DiscreteMeasureSpace::finite(atoms)?,
            Some(int) => DiscreteMeasureSpace::windowed(atoms, int, density_bound)?,
        };
        Ok(ParsedSpace::Rational(space))
    }
}

/// Parse a point map: `{"map": {id: id}}` plus an optional
/// `incomplete_preimage` array for window restrictions.
pub fn point_map_from_json(v: &Value) -> Result<PointMap> {
    let obj = v.as_object().ok_or_else(|| bad("point map must be an object"))?;
    let entries = obj
        .get("map")
        .and_then(Value::as_object)
        .ok_or_else(|| bad("point map needs a `map` object"))?;
    let mut map = BTreeMap::new();
    for (from, to) in entries {
        let to = to
            .as_str()
            .ok_or_else(|| bad(format!("image of {from} must be a string id")))?;
        map.insert(from.clone(), to.to_string());
    }
    let incomplete: BTreeSet<PointId> = match obj.get("incomplete_preimage") {
        None => BTreeSet::new(),
        Some(arr) => arr
            .as_array()
            .ok_or_else(|| bad("`incomplete_preimage` must be an array of ids"))?
            .iter()
            .map(|p| {
                p.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| bad("each id must be a string"))
            })
            .collect::<Result<_>>()?,
    };
    Ok(PointMap::windowed(map, incomplete))
}

/// Parse the values of a multiplication operator: `{"values": {id: [re, im]}}`.
pub fn function_values_from_json(v: &Value) -> Result<BTreeMap<PointId, Complex<f64>>> {
    let obj = v.as_object().ok_or_else(|| bad("function must be an object"))?;
    let values = obj
        .get("values")
        .and_then(Value::as_object)
        .ok_or_else(|| bad("function needs a `values` object"))?;
    let mut out = BTreeMap::new();
    for (id, z) in values {
        out.insert(id.clone(), complex_from_json(z)?);
    }
    Ok(out)
}

pub fn density_to_json<W: Weight>(h: &Density<W>, space: &DiscreteMeasureSpace<W>) -> Value {
    let values: Map<String, Value> = space
        .points()
        .iter()
        .zip(h.values())
        .map(|(id, w)| (id.clone(), json!(format!("{w}"))))
        .collect();
    json!({"values": values})
}

pub fn multiplication_classification_to_json(r: &MultiplicationClassification) -> Value {
    json!({"c_normal": r.c_normal, "criterion": r.criterion})
}

pub fn composition_classification_to_json(r: &CompositionClassification) -> Value {
    json!({
        "c_normal": r.c_normal,
        "criterion": r.criterion,
        "normal": r.normal,
        "normal_criterion": r.normal_criterion,
    })
}
