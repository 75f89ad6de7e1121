use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degree overflow: {lhs} + {rhs} exceeds 6")]
    DegreeOverflow { lhs: usize, rhs: usize },

    #[error("form degree {0} is outside 0..=6")]
    InvalidDegree(usize),

    #[error("cannot contract a vector into a 0-form")]
    ContractScalar,

    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("metric is degenerate or not positive definite (min eigenvalue {min_eigenvalue:e})")]
    DegenerateMetric { min_eigenvalue: f64 },

    #[error("orientation form is zero")]
    ZeroOrientation,

    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("not a Lie algebra: d∘d does not vanish on {degree}-forms (residual {residual:e})")]
    NotLieAlgebra { degree: usize, residual: f64 },

    #[error("2-form is degenerate (ω³ = {top:e})")]
    DegenerateOmega { top: f64 },

    #[error("3-form is not definite (P = {p:e})")]
    NotDefinite { p: f64 },

    #[error("3-form is not primitive (|ψ∧ω| = {residual:e})")]
    NotPrimitive { residual: f64 },

    #[error("induced metric is not positive definite (min eigenvalue {min_eigenvalue:e}, asymmetry {asymmetry:e})")]
    NotPositive { min_eigenvalue: f64, asymmetry: f64 },

    #[error("normalization violated: ψ⁺∧ψ⁻ = {lhs}·e¹²³⁴⁵⁶ but 4·vol = {rhs}·e¹²³⁴⁵⁶")]
    NormalizationViolated { lhs: f64, rhs: f64 },

    #[error("normalization did not converge after {passes} passes")]
    NormalizationDiverged { passes: usize },

    #[error("not symplectic half-flat (|dω| = {d_omega:e}, |dψ⁺| = {d_psi:e})")]
    NotHalfFlat { d_omega: f64, d_psi: f64 },

    #[error("3-form is not in the image of Sym⁻ (least-squares residual {residual:e})")]
    SymInversion { residual: f64 },

    #[error("endomorphism is not in {expected}: {reason}")]
    WrongSymmetryType {
        expected: &'static str,
        reason: String,
    },

    #[error("c = {c} is below the lower bound |w₂⁻|²/4 = {bound}")]
    BelowLowerBound { c: f64, bound: f64 },

    #[error("invalid flow data: {0}")]
    InvalidFlowData(String),

    #[error("t = {t} is outside the maximal interval ({t_min}, {t_max})")]
    OutsideInterval { t: f64, t_min: f64, t_max: f64 },

    #[error("not a Type IIA geometry: {condition}")]
    NotTypeIIA { condition: String },

    #[error("unknown algebra {0:?}")]
    UnknownAlgebra(String),

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("unknown solver {0:?}")]
    UnknownSolver(String),
}
