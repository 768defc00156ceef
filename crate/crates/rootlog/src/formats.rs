//! On-disk JSON formats: the recurrence input format and (elsewhere
//! assembled) the certificate file.  All numbers are exact rational strings;
//! floating-point input is rejected.

use serde::{Deserialize, Serialize};

use crate::algebra::{parse_rational, to_string_rational, Poly, Rational, Scalar};
use crate::recurrence::Recurrence;
use crate::{Error, Result};

/// Current certificate schema version.
pub const SCHEMA_VERSION: u32 = 1;

/// JSON description of a P-recursive sequence: polynomial coefficients
/// constant-first for `p_0 ... p_d`, exact rational initial values, and the
/// start index.  `alpha` optionally requests certification of `a_n / n^alpha`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecurrenceSpec {
    pub name: String,
    pub order: usize,
    /// coefficient lists (constant first), one per `p_i`, as exact rationals
    pub coeffs: Vec<Vec<String>>,
    pub initial: Vec<String>,
    pub start_index: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}

impl RecurrenceSpec {
    pub fn from_json(s: &str) -> Result<Self> {
        let spec: RecurrenceSpec = serde_json::from_str(s)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    fn validate(&self) -> Result<()> {
        if self.coeffs.len() != self.order + 1 {
            return Err(Error::InvalidSpec(format!(
                "{}: order {} needs {} coefficient polynomials, got {}",
                self.name,
                self.order,
                self.order + 1,
                self.coeffs.len()
            )));
        }
        if self.initial.len() != self.order {
            return Err(Error::InvalidSpec(format!(
                "{}: order {} needs {} initial values, got {}",
                self.name,
                self.order,
                self.order,
                self.initial.len()
            )));
        }
        Ok(())
    }

    pub fn alpha_value(&self) -> Result<Rational> {
        match &self.alpha {
            None => Ok(Rational::from_integer(0.into())),
            Some(s) => parse_rational(s),
        }
    }

    pub fn recurrence(&self) -> Result<Recurrence> {
        self.validate()?;
        let coeffs = self
            .coeffs
            .iter()
            .map(|cs| {
                let v: Result<Vec<Rational>> = cs.iter().map(|c| parse_rational(c)).collect();
                Ok(Poly::from_rationals(&v?))
            })
            .collect::<Result<Vec<_>>>()?;
        let initial = self
            .initial
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()?;
        Recurrence::new(&self.name, coeffs, initial, self.start_index)
    }

    /// Renders a recurrence back into the file format (used for round-trip
    /// checks and certificate embedding).
    pub fn from_recurrence(rec: &Recurrence, alpha: Option<&Rational>, notes: Option<&str>) -> Self {
        RecurrenceSpec {
            name: rec.name().to_string(),
            order: rec.order(),
            coeffs: rec
                .coeffs()
                .iter()
                .map(|p| {
                    p.coeffs()
                        .iter()
                        .map(|c| match c {
                            Scalar::Rat(r) => to_string_rational(r),
                            other => other.to_string(),
                        })
                        .collect()
                })
                .collect(),
            initial: rec.initial_values().iter().map(to_string_rational).collect(),
            start_index: rec.start_index(),
            alpha: alpha.map(to_string_rational),
            notes: notes.map(|s| s.to_string()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_render_roundtrip() {
        let json = r#"{
            "name": "toy",
            "order": 1,
            "coeffs": [["2", "1"], ["-2", "-4"]],
            "initial": ["1"],
            "start_index": 1,
            "notes": "test"
        }"#;
        let spec = RecurrenceSpec::from_json(json).unwrap();
        let rec = spec.recurrence().unwrap();
        assert_eq!(rec.order(), 1);
        let re_spec = RecurrenceSpec::from_recurrence(&rec, None, spec.notes.as_deref());
        assert_eq!(spec, re_spec);
        let reparsed = RecurrenceSpec::from_json(&re_spec.to_json()).unwrap();
        assert_eq!(spec, reparsed);
    }

    #[test]
    fn rejects_floats_and_shape_errors() {
        let json = r#"{
            "name": "bad",
            "order": 1,
            "coeffs": [["2.5"], ["1"]],
            "initial": ["1"],
            "start_index": 0
        }"#;
        let spec = RecurrenceSpec::from_json(json).unwrap();
        assert!(spec.recurrence().is_err());

        let json = r#"{
            "name": "bad",
            "order": 2,
            "coeffs": [["1"], ["1"]],
            "initial": ["1", "1"],
            "start_index": 0
        }"#;
        assert!(RecurrenceSpec::from_json(json).is_err());
    }
}
