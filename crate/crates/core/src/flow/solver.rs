use std::collections::BTreeMap;

use serde::Serialize;

use super::ansatz::SpecialFlow;
use super::rhs::{flow_rhs, type_iia_structure};
use crate::error::{Error, Result};
use crate::hitchin::analyze_3form_eps;
use crate::liealg::LieAlgebra;
use crate::multilinear::KForm;
use crate::su3::nijenhuis_norm_sq;

#[derive(Debug, Clone, Serialize)]
pub struct TrajectorySample {
    pub t: f64,
    pub phi: KForm,
    /// `|φ(t)|_{g_t}`
    pub f: f64,
    /// Coefficient of `½dw₂⁻` in `φ(t) − φ₀`.
    pub a: f64,
    pub nijenhuis_sq: f64,
    /// Solver-specific: the ansatz residual for the closed form, the deviation from the closed form for RK4.
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub solver: String,
    pub samples: Vec<TrajectorySample>,
    /// Set when integration stopped early, with the reason.
    pub truncated: Option<String>,
}

impl Trajectory {
    /// `sup_t |φ(t) − φ_exact(t)|` over the coefficients, plus `sup |φ_exact|`.
    pub fn deviation_from(&self, flow: &SpecialFlow) -> Result<(f64, f64)> {
        let mut dev = 0.0f64;
        let mut size = 0.0f64;
        for s in &self.samples {
            let exact = flow.phi_of_t(s.t)?;
            dev = dev.max((s.phi - exact).max_abs());
            size = size.max(exact.max_abs());
        }
        Ok((dev, size))
    }
}

/// A way of producing `φ(t)` on `[t0, t1]` for invariant special data.
pub trait TrajectorySolver: Send + Sync {
    fn name(&self) -> &'static str;
    fn solve(&self, flow: &SpecialFlow, t0: f64, t1: f64, dt: f64) -> Result<Trajectory>;
}

/// Uniform grid from `from` to `to` with step at most `dt`; includes both ends.
fn grid(from: f64, to: f64, dt: f64) -> Vec<f64> {
    let span = to - from;
    if span == 0.0 {
        return vec![from];
    }
    let n = (span.abs() / dt).ceil().max(1.0) as usize;
    (0..=n).map(|k| from + span * k as f64 / n as f64).collect()
}

fn check_range(t0: f64, t1: f64, dt: f64) -> Result<()> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidParameter {
            name: "dt",
            value: dt,
            reason: "must be positive",
        });
    }
    if !(t1 >= t0) || !t0.is_finite() || !t1.is_finite() {
        return Err(Error::InvalidParameter {
            name: "t1",
            value: t1,
            reason: "must be finite and not below t0",
        });
    }
    Ok(())
}

/// `a` recovered from `φ − φ₀` by projection on `dw₂⁻`.
fn a_of_phi(flow: &SpecialFlow, phi: &KForm) -> f64 {
    let n = flow.s0.norm_sq(&flow.dw2);
    if n == 0.0 {
        0.0
    } else {
        2.0 * flow.s0.inner(&(*phi - flow.phi0), &flow.dw2) / n
    }
}

/// Evaluates the analytic solution on the grid.
pub struct ClosedFormSolver;

impl TrajectorySolver for ClosedFormSolver {
    fn name(&self) -> &'static str {
        "closed-form"
    }

    fn solve(&self, flow: &SpecialFlow, t0: f64, t1: f64, dt: f64) -> Result<Trajectory> {
        check_range(t0, t1, dt)?;
        let samples = grid(t0, t1, dt)
            .into_iter()
            .map(|t| {
                Ok(TrajectorySample {
                    t,
                    phi: flow.phi_of_t(t)?,
                    f: flow.f(t)?,
                    a: flow.a(t)?,
                    nijenhuis_sq: flow.nijenhuis_sq(t)?,
                    residual: flow.rhs_residual(t)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Trajectory {
            solver: self.name().into(),
            samples,
            truncated: None,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Rk4Run {
    pub times: Vec<f64>,
    pub phis: Vec<KForm>,
    pub truncated: Option<String>,
}

/// Classical RK4 on the coefficients of `φ` from `φ(0) = phi0` to `t_end` (either sign),
/// with uniform steps of size at most `dt`. Stops before any stage where `φ` stops being definite.
pub fn integrate_rk4(
    omega: &KForm,
    phi0: &KForm,
    l: &LieAlgebra,
    t_end: f64,
    dt: f64,
    eps: f64,
) -> Result<Rk4Run> {
    let (lo, hi) = if t_end < 0.0 {
        (t_end, 0.0)
    } else {
        (0.0, t_end)
    };
    check_range(lo, hi, dt)?;
    type_iia_structure(omega, phi0, l, eps)?;
    let omega3 = omega.power(3)?;
    let ts = grid(0.0, t_end, dt);
    let mut phi = *phi0;
    let mut run = Rk4Run {
        times: vec![0.0],
        phis: vec![phi],
        truncated: None,
    };
    let field = |x: &KForm| -> std::result::Result<KForm, String> {
        let st = analyze_3form_eps(x, &omega3, eps).map_err(|e| e.to_string())?;
        if !st.definite {
            return Err(format!("φ lost definiteness (P = {:e})", st.p));
        }
        flow_rhs(omega, x, l, eps).map_err(|e| e.to_string())
    };
    for w in ts.windows(2) {
        let h = w[1] - w[0];
        let step = (|| {
            let k1 = field(&phi)?;
            let k2 = field(&(phi + k1.scale(0.5 * h)))?;
            let k3 = field(&(phi + k2.scale(0.5 * h)))?;
            let k4 = field(&(phi + k3.scale(h)))?;
            Ok::<_, String>(phi + (k1 + k2.scale(2.0) + k3.scale(2.0) + k4).scale(h / 6.0))
        })();
        match step {
            Ok(next) if next.coeffs().iter().all(|c| c.is_finite()) => {
                phi = next;
                run.times.push(w[1]);
                run.phis.push(phi);
            }
            Ok(_) => {
                run.truncated = Some(format!("non-finite state after t = {}", w[0]));
                break;
            }
            Err(reason) => {
                run.truncated = Some(format!("stopped at t = {}: {reason}", w[0]));
                break;
            }
        }
    }
    Ok(run)
}

/// Fixed-step RK4 of the full flow equation, compared against the closed form.
pub struct Rk4Solver;

impl TrajectorySolver for Rk4Solver {
    fn name(&self) -> &'static str {
        "rk4"
    }

    fn solve(&self, flow: &SpecialFlow, t0: f64, t1: f64, dt: f64) -> Result<Trajectory> {
        check_range(t0, t1, dt)?;
        let mut pts: Vec<(f64, KForm)> = Vec::new();
        let mut truncated = Vec::new();
        if t0 < 0.0 {
            let run = integrate_rk4(flow.omega(), &flow.phi0, &flow.algebra, t0, dt, flow.eps)?;
            pts.extend(run.times.into_iter().zip(run.phis).skip(1).rev());
            truncated.extend(run.truncated);
        }
        if t1 >= 0.0 {
            let run = integrate_rk4(flow.omega(), &flow.phi0, &flow.algebra, t1, dt, flow.eps)?;
            pts.extend(run.times.into_iter().zip(run.phis));
            truncated.extend(run.truncated);
        }
        let samples = pts
            .into_iter()
            .filter(|(t, _)| *t >= t0 && *t <= t1)
            .map(|(t, phi)| {
                let (st, f) = type_iia_structure(flow.omega(), &phi, &flow.algebra, flow.eps)?;
                let residual = match flow.phi_of_t(t) {
                    Ok(exact) => (phi - exact).max_abs(),
                    Err(_) => f64::NAN,
                };
                Ok(TrajectorySample {
                    t,
                    phi,
                    f,
                    a: a_of_phi(flow, &phi),
                    nijenhuis_sq: nijenhuis_norm_sq(&st, &flow.algebra),
                    residual,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Trajectory {
            solver: self.name().into(),
            samples,
            truncated: (!truncated.is_empty()).then(|| truncated.join("; ")),
        })
    }
}

/// Trajectory solvers selectable by name.
pub struct SolverRegistry {
    solvers: BTreeMap<&'static str, Box<dyn TrajectorySolver>>,
}

impl Default for SolverRegistry {
    fn default() -> Self {
        let mut r = SolverRegistry::empty();
        r.register(Box::new(ClosedFormSolver));
        r.register(Box::new(Rk4Solver));
        r
    }
}

impl SolverRegistry {
    pub fn empty() -> Self {
        SolverRegistry {
            solvers: BTreeMap::new(),
        }
    }

    /// Adds or replaces a solver under its own name.
    pub fn register(&mut self, solver: Box<dyn TrajectorySolver>) {
        self.solvers.insert(solver.name(), solver);
    }

    pub fn get(&self, name: &str) -> Result<&dyn TrajectorySolver> {
        self.solvers
            .get(name)
            .map(|s| s.as_ref())
            .ok_or_else(|| Error::UnknownSolver(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.solvers.keys().copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn grid_is_uniform_and_hits_the_end() {
        let g = grid(0.0, 0.05, 4e-3);
        assert_eq!(g.len(), 14);
        assert_eq!(*g.last().unwrap(), 0.05);
        assert_eq!(grid(0.0, -0.01, 1e-2), vec![0.0, -0.01]);
    }

    #[test]
    fn registry_lookup() {
        let r = SolverRegistry::default();
        assert_eq!(r.names().collect::<Vec<_>>(), ["closed-form", "rk4"]);
        assert_eq!(r.get("rk4").unwrap().name(), "rk4");
        assert!(matches!(r.get("euler"), Err(Error::UnknownSolver(_))));
    }

    #[test]
    fn rk4_is_exact_on_linear_a() {
        let e = catalog::get("g5_1", 1.0).unwrap();
        let flow = SpecialFlow::from_entry(&e, 2.0, 1e-9).unwrap();
        let tr = Rk4Solver.solve(&flow, -0.02, 0.05, 1e-2).unwrap();
        assert!(tr.truncated.is_none());
        assert_eq!(tr.samples.first().unwrap().t, -0.02);
        for s in &tr.samples {
            assert!((s.a - 8.0 * s.t).abs() < 1e-12, "{} {}", s.t, s.a);
            assert!(s.residual < 1e-12);
        }
    }

    #[test]
    fn rk4_truncates_at_blow_up() {
        let e = catalog::get("e11e11", 1.0).unwrap();
        let flow = SpecialFlow::from_entry(&e, 2.0, 1e-9).unwrap();
        let run = integrate_rk4(flow.omega(), &flow.phi0, &flow.algebra, 0.1, 1e-3, 1e-9).unwrap();
        assert!(run.truncated.is_some());
        assert!(*run.times.last().unwrap() < 1.0 / 16.0 + 1e-3);
    }
}
