//! The source-free Type IIA flow `∂φ/∂t = dJ d*(|φ|²φ)` on invariant data.

mod ansatz;
mod export;
mod regime;
mod rhs;
mod solver;

pub use ansatz::{AnsatzReport, SpecialFlow};
pub use export::write_csv;
pub use regime::{classify, FlowRegime, FlowSolution, RegimeTag};
pub use rhs::{flow_rhs, type_iia_structure};
pub use solver::{
    integrate_rk4, ClosedFormSolver, Rk4Run, Rk4Solver, SolverRegistry, Trajectory,
    TrajectorySample, TrajectorySolver,
};

/// Default initial norm `F₀`; with it `φ₀ = ψ⁺`.
pub const DEFAULT_F0: f64 = 2.0;
/// Default RK4 step.
pub const DEFAULT_DT: f64 = 1e-3;
