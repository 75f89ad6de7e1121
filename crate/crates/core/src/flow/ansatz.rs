use serde::Serialize;

use super::regime::{classify, FlowSolution};
use super::rhs::{flow_rhs, type_iia_structure};
use crate::catalog::CatalogEntry;
use crate::error::{Error, Result};
use crate::liealg::LieAlgebra;
use crate::multilinear::KForm;
use crate::su3::{
    build_su3_eps, nijenhuis_norm_sq, special_check, torsion, SU3Structure, SpecialReport,
};

/// Invariant flow started at `φ₀ = (F₀/2)ψ⁺` from special SHF data.
#[derive(Debug, Clone)]
pub struct SpecialFlow {
    pub algebra: LieAlgebra,
    pub s0: SU3Structure,
    pub report: SpecialReport,
    pub f0: f64,
    pub phi0: KForm,
    pub dw2: KForm,
    /// `*₀dw₂⁻`
    pub star_dw2: KForm,
    /// `None` when `w₂⁻ = 0`: the datum is stationary.
    pub solution: Option<FlowSolution>,
    pub eps: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct AnsatzReport {
    pub samples: usize,
    /// `max ‖flow_rhs(ω, φ(t)) − ½a'(t)dw₂⁻‖_{g₀}`
    pub rhs_residual: f64,
    /// `max |(|φ(t)|_{g_t}) − F(t)|`
    pub f_residual: f64,
    /// `max |J_tψ⁺_t − ψ⁻_t(closed form)|` on coefficients
    pub psi_minus_residual: f64,
    /// `max |ψ⁺_t∧ψ⁻_t − ⅔ω³|`
    pub normalization_residual: f64,
    /// `max |d*_tψ⁺_t − F_t/(F₀+ca)·w₂⁻|` on coefficients
    pub w2_residual: f64,
    /// `max |recomputed |N_t|² − closed form|`
    pub nijenhuis_residual: f64,
    /// Relative error of `dF/dt = ¼F⁵w²/(F₀+ca)²` with `dF/dt` by central differences of the recomputed `|φ(t)|`.
    pub f_derivative_residual: f64,
}

impl SpecialFlow {
    pub fn new(
        omega: &KForm,
        psi_plus: &KForm,
        algebra: &LieAlgebra,
        f0: f64,
        eps: f64,
    ) -> Result<Self> {
        if !(f0 > 0.0) {
            return Err(Error::InvalidParameter {
                name: "F0",
                value: f0,
                reason: "must be positive",
            });
        }
        let s0 = build_su3_eps(omega, psi_plus, eps)?;
        let r = torsion(&s0, algebra)?;
        let report = special_check(&r, algebra, &s0)?;
        let solution = if report.flags.torsion_free {
            None
        } else {
            if !report.flags.is_special {
                return Err(Error::InvalidFlowData(format!(
                    "structure is not special (Δw2 = c w2: {}, dw2∧w2 = 0: {}, |dw2|² = c|w2|²: {})",
                    report.flags.cond_i, report.flags.cond_ii, report.flags.cond_iii
                )));
            }
            let c = report.c.unwrap_or(f64::NAN);
            Some(classify(c, report.w2_norm_sq, f0, eps * c.abs().max(1.0))?.solution())
        };
        Ok(SpecialFlow {
            algebra: algebra.clone(),
            s0,
            report,
            f0,
            phi0: psi_plus.scale(0.5 * f0),
            dw2: report.dw2,
            star_dw2: s0.star(&report.dw2),
            solution,
            eps,
        })
    }

    pub fn from_entry(entry: &CatalogEntry, f0: f64, eps: f64) -> Result<Self> {
        Self::new(&entry.omega, &entry.psi_plus, &entry.algebra, f0, eps)
    }

    pub fn omega(&self) -> &KForm {
        &self.s0.omega
    }

    pub fn interval(&self) -> (f64, f64) {
        self.solution
            .map_or((f64::NEG_INFINITY, f64::INFINITY), |s| (s.t_min, s.t_max))
    }

    pub fn a(&self, t: f64) -> Result<f64> {
        self.solution.map_or(Ok(0.0), |s| s.a(t))
    }

    pub fn a_prime(&self, t: f64) -> Result<f64> {
        self.solution.map_or(Ok(0.0), |s| s.a_prime(t))
    }

    pub fn f(&self, t: f64) -> Result<f64> {
        self.solution.map_or(Ok(self.f0), |s| s.f(t))
    }

    pub fn nijenhuis_sq(&self, t: f64) -> Result<f64> {
        self.solution.map_or(Ok(0.0), |s| s.nijenhuis_sq(t))
    }

    /// `φ(t) = φ₀ + ½a(t)dw₂⁻`
    pub fn phi_of_t(&self, t: f64) -> Result<KForm> {
        Ok(self.phi0 + self.dw2.scale(0.5 * self.a(t)?))
    }

    /// `ψ⁻_t = (F_t/F₀)(ψ⁻₀ − a/(F₀+ca)·*₀dw₂⁻)`
    pub fn psi_minus_of_t(&self, t: f64) -> Result<KForm> {
        let a = self.a(t)?;
        let c = self.report.c.unwrap_or(0.0);
        let ft = self.f(t)?;
        Ok((self.s0.psi_minus - self.star_dw2.scale(a / (self.f0 + c * a))).scale(ft / self.f0))
    }

    /// Recomputes the structure at `φ(t)` from scratch.
    pub fn structure_at(&self, t: f64) -> Result<(SU3Structure, f64)> {
        type_iia_structure(self.omega(), &self.phi_of_t(t)?, &self.algebra, self.eps)
    }

    /// `‖flow_rhs(ω, φ(t)) − ½a'(t)dw₂⁻‖_{g₀}`
    pub fn rhs_residual(&self, t: f64) -> Result<f64> {
        let lhs = flow_rhs(self.omega(), &self.phi_of_t(t)?, &self.algebra, self.eps)?;
        Ok(self
            .s0
            .norm(&(lhs - self.dw2.scale(0.5 * self.a_prime(t)?))))
    }

    /// `n` points evenly spread over `[t0, t1]`, kept within 90% of the distance from 0
    /// to a finite endpoint of the interval.
    pub fn sample_times(&self, t0: f64, t1: f64, n: usize) -> Vec<f64> {
        let (lo, hi) = self.interval();
        let a = t0.max(0.9 * lo);
        let b = t1.min(0.9 * hi);
        if n <= 1 {
            return vec![a];
        }
        (0..n)
            .map(|k| a + (b - a) * k as f64 / (n - 1) as f64)
            .collect()
    }

    pub fn verify_ansatz(&self, times: &[f64]) -> Result<AnsatzReport> {
        let mut r = AnsatzReport {
            samples: times.len(),
            ..Default::default()
        };
        let omega3 = self.omega().power(3)?;
        let c = self.report.c.unwrap_or(0.0);
        let wsq = self.report.w2_norm_sq;
        for &t in times {
            let a = self.a(t)?;
            r.rhs_residual = r.rhs_residual.max(self.rhs_residual(t)?);
            let (st, ft) = self.structure_at(t)?;
            let f_closed = self.f(t)?;
            r.f_residual = r.f_residual.max((ft - f_closed).abs());
            r.psi_minus_residual = r
                .psi_minus_residual
                .max((st.psi_minus - self.psi_minus_of_t(t)?).max_abs());
            let norm =
                st.psi_plus.wedge(&st.psi_minus)?.top_coeff() - 2.0 / 3.0 * omega3.top_coeff();
            r.normalization_residual = r.normalization_residual.max(norm.abs());
            let w2t = st.codiff(&self.algebra, &st.psi_plus);
            let w2_closed = self.report.w2.scale(ft / (self.f0 + c * a));
            r.w2_residual = r.w2_residual.max((w2t - w2_closed).max_abs());
            let n_rec = nijenhuis_norm_sq(&st, &self.algebra);
            r.nijenhuis_residual = r
                .nijenhuis_residual
                .max((n_rec - self.nijenhuis_sq(t)?).abs());
            if let Some(sol) = self.solution {
                let h = 1e-4 * (c * self.f0 * self.f0).max(1.0).recip();
                if sol.contains(t - 2.0 * h) && sol.contains(t + 2.0 * h) {
                    let fr = |s: f64| self.structure_at(s).map(|(_, f)| f);
                    let d = (-fr(t + 2.0 * h)? + 8.0 * fr(t + h)? - 8.0 * fr(t - h)?
                        + fr(t - 2.0 * h)?)
                        / (12.0 * h);
                    let expect = 0.25 * ft.powi(5) * wsq / (self.f0 + c * a).powi(2);
                    r.f_derivative_residual = r
                        .f_derivative_residual
                        .max((d - expect).abs() / expect.abs().max(1.0));
                }
            }
        }
        Ok(r)
    }
}
