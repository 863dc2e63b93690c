//! Pass/fail reports shared by the property checkers.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::scalar::format_float;

/// Writes infinite floats as `"+inf"` / `"-inf"` instead of JSON `null`.
pub(crate) fn extended_f64<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_infinite() {
        s.serialize_str(if *v > 0.0 { "+inf" } else { "-inf" })
    } else {
        s.serialize_f64(*v)
    }
}

pub(crate) fn extended_f64_vec<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        if x.is_infinite() {
            seq.serialize_element(if *x > 0.0 { "+inf" } else { "-inf" })?;
        } else {
            seq.serialize_element(x)?;
        }
    }
    seq.end()
}

/// A violated inequality: which inputs broke it and both of its sides.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub context: String,
    pub indices: Vec<usize>,
    #[serde(serialize_with = "extended_f64")]
    pub lhs: f64,
    #[serde(serialize_with = "extended_f64")]
    pub rhs: f64,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (lhs {}, rhs {})",
            self.context,
            format_float(self.lhs),
            format_float(self.rhs)
        )
    }
}

/// Outcome of a property check. `witness` is present iff `holds` is false.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertyReport {
    pub holds: bool,
    pub checked: usize,
    pub witness: Option<Witness>,
}

impl PropertyReport {
    pub fn pass(checked: usize) -> Self {
        Self {
            holds: true,
            checked,
            witness: None,
        }
    }

    pub fn fail(checked: usize, witness: Witness) -> Self {
        Self {
            holds: false,
            checked,
            witness: Some(witness),
        }
    }
}
