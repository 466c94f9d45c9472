use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QubusError, Result};
use crate::state::GateOp;

/// Which builder produced a sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    GeometricGeneral,
    SpecificExample,
    SquarePath,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Real(f64),
    Complex(Complex64),
}

impl From<f64> for ParamValue {
    fn from(x: f64) -> Self {
        ParamValue::Real(x)
    }
}

impl From<Complex64> for ParamValue {
    fn from(z: Complex64) -> Self {
        ParamValue::Complex(z)
    }
}

/// An ordered list of primitive operations plus the builder inputs that made it.
///
/// Sequences are immutable once built; the JSON form is the on-disk protocol
/// format read by the CLI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSequence")]
pub struct GateSequence {
    provenance: Provenance,
    params: BTreeMap<String, ParamValue>,
    ops: Vec<GateOp>,
}

#[derive(Deserialize)]
struct RawSequence {
    provenance: Provenance,
    #[serde(default)]
    params: BTreeMap<String, ParamValue>,
    ops: Vec<GateOp>,
}

impl TryFrom<RawSequence> for GateSequence {
    type Error = QubusError;

    fn try_from(raw: RawSequence) -> Result<Self> {
        GateSequence::new(raw.ops, raw.provenance, raw.params)
    }
}

impl GateSequence {
    pub fn new(ops: Vec<GateOp>, provenance: Provenance, params: BTreeMap<String, ParamValue>) -> Result<Self> {
        if let Some(i) = ops.iter().position(|op| !op.is_finite()) {
            return Err(QubusError::InvalidConfig(format!("op {i} has a non-finite parameter")));
        }
        Ok(Self { provenance, params, ops })
    }

    pub fn custom(ops: Vec<GateOp>) -> Result<Self> {
        Self::new(ops, Provenance::Custom, BTreeMap::new())
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn params(&self) -> &BTreeMap<String, ParamValue> {
        &self.params
    }

    pub fn param(&self, name: &str) -> Option<ParamValue> {
        self.params.get(name).copied()
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("gate sequence serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::Qubit;

    #[test]
    fn json_round_trip_and_layout() {
        let mut params = BTreeMap::new();
        params.insert("theta".to_string(), ParamValue::Real(0.08));
        params.insert("omega".to_string(), ParamValue::Complex(Complex64::new(1.0, 2.0)));
        let seq = GateSequence::new(
            vec![GateOp::rotation(Qubit::Two, -0.08), GateOp::displacement(Complex64::new(0.5, -1.5))],
            Provenance::GeometricGeneral,
            params,
        )
        .unwrap();
        let v: serde_json::Value = serde_json::from_str(&seq.to_json()).unwrap();
        assert_eq!(v["provenance"], "geometric_general");
        assert_eq!(v["params"]["omega"], serde_json::json!([1.0, 2.0]));
        assert_eq!(v["ops"][0]["qubit"], 2);
        assert_eq!(GateSequence::from_json(&seq.to_json()).unwrap(), seq);
    }

    #[test]
    fn rejects_non_finite_ops() {
        let err = GateSequence::custom(vec![GateOp::rotation(Qubit::One, f64::NAN)]).unwrap_err();
        assert!(matches!(err, QubusError::InvalidConfig(_)));
    }

    #[test]
    fn params_are_optional_on_disk() {
        let seq = GateSequence::from_json(r#"{"provenance":"custom","ops":[]}"#).unwrap();
        assert!(seq.is_empty());
        assert_eq!(seq.provenance(), Provenance::Custom);
    }
}
