use serde::Serialize;

/// One numeric comparison `|lhs − rhs| ≤ tol`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub lhs: f64,
    pub rhs: f64,
    pub tol: f64,
}

impl Check {
    pub fn close(name: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        Check {
            name: name.into(),
            pass: (lhs - rhs).abs() <= tol,
            lhs,
            rhs,
            tol,
        }
    }

    /// `lhs ≤ rhs + tol`.
    pub fn at_most(name: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        Check {
            name: name.into(),
            pass: lhs <= rhs + tol,
            lhs,
            rhs,
            tol,
        }
    }

    /// A boolean property, encoded as `lhs = 1` for true against `rhs = 1`.
    pub fn flag(name: impl Into<String>, ok: bool) -> Self {
        Check {
            name: name.into(),
            pass: ok,
            lhs: if ok { 1.0 } else { 0.0 },
            rhs: 1.0,
            tol: 0.0,
        }
    }
}

pub fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.pass)
}
