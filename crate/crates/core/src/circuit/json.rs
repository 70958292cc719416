use std::str::FromStr;

use num_rational::Ratio;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Angle, Circuit, GateKind, GateOp};
use crate::error::{Error, Result};

/// Rational multiplier written as `"p/q"` or `"p"`; plain integers are accepted.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Mult(Ratio<i64>);

impl Serialize for Mult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for Mult {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(Mult(Ratio::from_integer(v))),
            Raw::Text(t) => {
                let r = Ratio::<i64>::from_str(t.trim()).map_err(D::Error::custom)?;
                Ok(Mult(r))
            }
        }
    }
}

fn unit_mult() -> Mult {
    Mult(Ratio::from_integer(1))
}

#[derive(Serialize, Deserialize)]
struct ParamRef {
    slot: usize,
    #[serde(default = "unit_mult")]
    mult: Mult,
}

#[derive(Serialize, Deserialize)]
struct OpRecord {
    kind: String,
    qubits: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    angle: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    param: Option<ParamRef>,
}

#[derive(Serialize, Deserialize)]
struct CircuitRecord {
    n_qubits: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n_params: Option<usize>,
    ops: Vec<OpRecord>,
}

impl Circuit {
    pub fn to_json(&self) -> String {
        let ops = self
            .ops()
            .iter()
            .map(|op| {
                let (angle, param) = match op.angle() {
                    None => (None, None),
                    Some(Angle::Bound(v)) => (Some(v), None),
                    Some(Angle::Param { slot, mult }) => (None, Some(ParamRef { slot, mult: Mult(mult) })),
                };
                OpRecord {
                    kind: op.kind().name().to_string(),
                    qubits: op.qubits().to_vec(),
                    angle,
                    param,
                }
            })
            .collect();
        let rec = CircuitRecord {
            n_qubits: self.n_qubits(),
            n_params: (self.n_params() > 0).then_some(self.n_params()),
            ops,
        };
        serde_json::to_string_pretty(&rec).expect("circuit serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let rec: CircuitRecord = serde_json::from_str(text)?;
        let mut c = Circuit::new(rec.n_qubits);
        for (i, op) in rec.ops.into_iter().enumerate() {
            let kind = GateKind::from_name(&op.kind)
                .ok_or_else(|| Error::Config(format!("op {i}: unknown gate kind {:?}", op.kind)))?;
            let angle = match (op.angle, op.param) {
                (Some(_), Some(_)) => return Err(Error::Config(format!("op {i}: both angle and param given"))),
                (Some(v), None) => Some(Angle::Bound(v)),
                (None, Some(p)) => Some(Angle::Param {
                    slot: p.slot,
                    mult: p.mult.0,
                }),
                (None, None) => None,
            };
            let op = GateOp::new(kind, op.qubits, angle).map_err(|e| Error::Config(format!("op {i}: {e}")))?;
            c.push(op)?;
        }
        match rec.n_params {
            Some(n) => c.with_n_params(n),
            None => Ok(c),
        }
    }
}
