//! Machine-readable outcome of a single exact check.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::matrix::Matrix;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// The two sides of a failed comparison and where they first differ.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_difference: Option<[usize; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub params: Value,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl CheckReport {
    pub fn pass(check: impl Into<String>, params: Value) -> Self {
        CheckReport { check: check.into(), params, status: Status::Pass, witness: None }
    }

    pub fn fail(check: impl Into<String>, params: Value, note: impl Into<String>) -> Self {
        CheckReport {
            check: check.into(),
            params,
            status: Status::Fail,
            witness: Some(Witness { lhs: None, rhs: None, first_difference: None, note: Some(note.into()) }),
        }
    }

    /// Pass iff `ok`; otherwise fail with `note`.
    pub fn assert(check: impl Into<String>, params: Value, ok: bool, note: impl Into<String>) -> Self {
        if ok {
            Self::pass(check, params)
        } else {
            Self::fail(check, params, note)
        }
    }

    /// Exact comparison of two matrices.
    pub fn compare<S: Scalar>(check: impl Into<String>, params: Value, lhs: &Matrix<S>, rhs: &Matrix<S>) -> Self {
        match lhs.first_difference(rhs) {
            None => Self::pass(check, params),
            Some((i, j)) => CheckReport {
                check: check.into(),
                params,
                status: Status::Fail,
                witness: Some(Witness {
                    lhs: Some(lhs.to_json()),
                    rhs: Some(rhs.to_json()),
                    first_difference: (i != usize::MAX).then_some([i, j]),
                    note: (i == usize::MAX).then(|| format!("shapes {:?} vs {:?}", lhs.shape(), rhs.shape())),
                }),
            },
        }
    }

    /// Like [`CheckReport::compare`], but an error computing either side is a failure.
    pub fn compare_results<S: Scalar, E: std::fmt::Display>(
        check: impl Into<String>,
        params: Value,
        lhs: Result<Matrix<S>, E>,
        rhs: Result<Matrix<S>, E>,
    ) -> Self {
        match (lhs, rhs) {
            (Ok(l), Ok(r)) => Self::compare(check, params, &l, &r),
            (Err(e), _) | (_, Err(e)) => Self::fail(check, params, e.to_string()),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};
    use serde_json::json;

    #[test]
    fn compare_reports_first_difference() {
        let a = Matrix::<Rational>::identity(2);
        let b = a.scale(&rat(1, 2)).unwrap();
        let rep = CheckReport::compare("demo", json!({}), &a, &b);
        assert!(!rep.passed());
        let w = rep.witness.clone().unwrap();
        assert_eq!(w.first_difference, Some([0, 0]));
        // the witness reproduces the discrepancy
        let l = Matrix::<Rational>::from_json(&w.lhs.unwrap()).unwrap();
        let r = Matrix::<Rational>::from_json(&w.rhs.unwrap()).unwrap();
        assert_ne!(l.get(0, 0), r.get(0, 0));
        assert!(CheckReport::compare("demo", json!({}), &a, &a).passed());
    }

    #[test]
    fn serializes_status_lowercase() {
        let rep = CheckReport::pass("x", json!({"n": 1}));
        let v = serde_json::to_value(&rep).unwrap();
        assert_eq!(v, json!({"check": "x", "params": {"n": 1}, "status": "pass"}));
        let back: CheckReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, rep);
    }
}
