//! Edge rules: a predicate selecting source nodes, a predicate selecting
//! target nodes, and the policy for the resulting cross product.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::pddt::parse_word;

use super::DiffNode;

/// Default relationship label.
pub const OUTPUT_WEIGHT: &str = "OUTPUT_WEIGHT";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field {
    Id,
    InputA,
    InputB,
    Output,
    /// Probability `dp`, displayed as the node weight.
    Weight,
    Hw,
}

impl Field {
    pub fn name(self) -> &'static str {
        match self {
            Field::Id => "id",
            Field::InputA => "input_a",
            Field::InputB => "input_b",
            Field::Output => "output",
            Field::Weight => "weight",
            Field::Hw => "hw",
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "id" => Field::Id,
            "input_a" | "a" => Field::InputA,
            "input_b" | "b" => Field::InputB,
            "output" | "c" => Field::Output,
            "weight" | "dp" => Field::Weight,
            "hw" => Field::Hw,
            other => return Err(Error::config(format!("unknown node field {other:?}"))),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmpOp {
    Le,
    Ge,
    Eq,
}

impl CmpOp {
    fn symbol(self) -> &'static str {
        match self {
            CmpOp::Le => "<=",
            CmpOp::Ge => ">=",
            CmpOp::Eq => "=",
        }
    }

    fn holds(self, o: std::cmp::Ordering) -> bool {
        match self {
            CmpOp::Le => o.is_le(),
            CmpOp::Ge => o.is_ge(),
            CmpOp::Eq => o.is_eq(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Value {
    Int(u64),
    Real(f64),
}

/// `field op constant`, e.g. `output=0` or `weight>=0.5`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Predicate {
    pub field: Field,
    pub op: CmpOp,
    pub value: Value,
}

impl Predicate {
    pub fn new(field: Field, op: CmpOp, value: Value) -> Self {
        Predicate { field, op, value }
    }

    pub fn matches(&self, node: &DiffNode) -> bool {
        let lhs = match self.field {
            Field::Id => Value::Int(node.id),
            Field::InputA => Value::Int(node.a),
            Field::InputB => Value::Int(node.b),
            Field::Output => Value::Int(node.c),
            Field::Hw => Value::Int(node.hw as u64),
            Field::Weight => Value::Real(node.dp()),
        };
        let ord = match (lhs, self.value) {
            (Value::Int(x), Value::Int(y)) => x.cmp(&y),
            (x, y) => {
                let as_f = |v| match v {
                    Value::Int(i) => i as f64,
                    Value::Real(r) => r,
                };
                match as_f(x).partial_cmp(&as_f(y)) {
                    Some(o) => o,
                    None => return false,
                }
            }
        };
        self.op.holds(ord)
    }
}

impl FromStr for Predicate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (pos, op, len) = ["<=", ">=", "=="]
            .iter()
            .zip([CmpOp::Le, CmpOp::Ge, CmpOp::Eq])
            .find_map(|(sym, op)| s.find(sym).map(|p| (p, op, 2)))
            .or_else(|| s.find('=').map(|p| (p, CmpOp::Eq, 1)))
            .ok_or_else(|| Error::config(format!("predicate {s:?} needs <=, >= or =")))?;
        let field: Field = s[..pos].parse()?;
        let rhs = s[pos + len..].trim();
        let value = match parse_word(rhs) {
            Some(i) => Value::Int(i),
            None => Value::Real(
                rhs.parse()
                    .map_err(|_| Error::config(format!("bad constant {rhs:?} in {s:?}")))?,
            ),
        };
        Ok(Predicate { field, op, value })
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.field.name(), self.op.symbol())?;
        match self.value {
            Value::Int(i) => write!(f, "{i}"),
            Value::Real(r) => write!(f, "{r}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EdgeRule {
    pub source: Predicate,
    pub target: Predicate,
    pub directed: bool,
    pub allow_self_loops: bool,
    pub label: String,
}

impl Default for EdgeRule {
    /// Sources with zero output difference, targets with probability at
    /// least 1/2.
    fn default() -> Self {
        EdgeRule {
            source: Predicate::new(Field::Output, CmpOp::Eq, Value::Int(0)),
            target: Predicate::new(Field::Weight, CmpOp::Ge, Value::Real(0.5)),
            directed: true,
            allow_self_loops: true,
            label: OUTPUT_WEIGHT.to_string(),
        }
    }
}

impl EdgeRule {
    /// `output <= 0` to `weight <= 0.5`, as the relationship query is
    /// usually written.
    pub fn printed() -> Self {
        EdgeRule {
            source: Predicate::new(Field::Output, CmpOp::Le, Value::Int(0)),
            target: Predicate::new(Field::Weight, CmpOp::Le, Value::Real(0.5)),
            ..EdgeRule::default()
        }
    }

    /// `default` or `printed`.
    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "default" => Ok(EdgeRule::default()),
            "printed" => Ok(EdgeRule::printed()),
            other => Err(Error::config(format!(
                "unknown edge rule preset {other:?} (expected default or printed)"
            ))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.label.is_empty() || !self.label.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(Error::config(format!(
                "relationship label {:?} must be non-empty [A-Za-z0-9_]",
                self.label
            )));
        }
        Ok(())
    }
}
