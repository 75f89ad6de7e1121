//! SU(3)-structures `(ω, ψ⁺)` on ℝ⁶ and their torsion on Lie algebras.

mod projections;
mod sym;
mod torsion;

pub use projections::{project2, project3, Proj2, Proj3};
pub use sym::{
    check_sym_minus, check_sym_plus0, commuting_projection, invert_sigma12, lemma1_campaign,
    lemma1_check, project_sym_minus, project_sym_plus0, random_sym_minus, random_sym_plus0,
    sigma12, sigma12_matrix, sigma8, sigma8_matrix, sym_minus_basis, sym_plus0_basis,
    unitary_frame, Lemma1Campaign, Lemma1Outcome, PairKind,
};
pub use torsion::{
    eigen_constraint, eigen_constraint_check, nijenhuis_norm_sq, signed_spectrum, special_check,
    torsion, EigenConstraint, Flags, SpecialReport,
};

use crate::error::{Error, Result};
use crate::hitchin::analyze_3form_eps;
use crate::multilinear::{inner_with, star_with, unit, Endo, KForm, Mat6, Metric};
use crate::DEFAULT_EPS;

#[derive(Debug, Clone, Copy)]
pub struct SU3Structure {
    pub omega: KForm,
    pub psi_plus: KForm,
    pub j: Endo,
    pub g: Metric,
    pub psi_minus: KForm,
    pub vol: KForm,
    /// Sign of `ω³` relative to `e^{123456}`.
    pub orientation: f64,
    pub eps: f64,
    g_inv: Mat6,
}

/// Builds the structure and checks every defining condition.
pub fn build_su3(omega: &KForm, psi_plus: &KForm) -> Result<SU3Structure> {
    build_su3_eps(omega, psi_plus, DEFAULT_EPS)
}

pub fn build_su3_eps(omega: &KForm, psi_plus: &KForm, eps: f64) -> Result<SU3Structure> {
    let s = SU3Structure::derive(omega, psi_plus, eps)?;
    let lhs = psi_plus.wedge(&s.psi_minus)?.top_coeff();
    let rhs = 4.0 * s.vol.top_coeff();
    if (lhs - rhs).abs() > eps * rhs.abs().max(1.0) {
        return Err(Error::NormalizationViolated { lhs, rhs });
    }
    Ok(s)
}

/// Rescales `ψ⁺` by `2/|ψ⁺|_g` until `ψ⁺∧ψ⁻ = 4 vol_g` holds within `eps`.
pub fn normalize_pair(omega: &KForm, psi_plus: &KForm, eps: f64) -> Result<(KForm, KForm)> {
    let mut psi = *psi_plus;
    for _ in 0..10 {
        let s = SU3Structure::derive(omega, &psi, eps)?;
        let n = s.norm_sq(&psi).sqrt();
        if (n - 2.0).abs() <= eps {
            return Ok((*omega, psi));
        }
        psi = psi.scale(2.0 / n);
    }
    Err(Error::NormalizationDiverged { passes: 10 })
}

impl SU3Structure {
    /// Everything except the normalization check. `J` and `g` do not depend on
    /// the scale of `ψ⁺`.
    pub fn derive(omega: &KForm, psi_plus: &KForm, eps: f64) -> Result<Self> {
        for (f, k) in [(omega, 2), (psi_plus, 3)] {
            if f.degree() != k {
                return Err(Error::DegreeMismatch {
                    expected: k,
                    found: f.degree(),
                });
            }
        }
        let omega3 = omega.power(3)?;
        let top = omega3.top_coeff();
        if top.abs() <= eps * omega.max_abs().powi(3).max(1.0) {
            return Err(Error::DegenerateOmega { top });
        }
        let orientation = top.signum();
        let stable = analyze_3form_eps(psi_plus, &omega3, eps)?;
        let Some(j) = stable.j else {
            return Err(Error::NotDefinite { p: stable.p });
        };
        let scale = omega.max_abs() * psi_plus.max_abs();
        let prim = psi_plus.wedge(omega)?.max_abs();
        if prim > eps * scale.max(1.0) {
            return Err(Error::NotPrimitive { residual: prim });
        }
        // g_ij = ω(e_i, J e_j)
        let w = Mat6::from_fn(|a, b| omega.eval(&[unit(a + 1), unit(b + 1)]));
        let gm = w * j.0;
        let asymmetry = (gm - gm.transpose()).amax();
        let sym = (gm + gm.transpose()) * 0.5;
        let g = Metric::new(sym, f64::INFINITY)?;
        let min_eigenvalue = g.min_eigenvalue();
        if asymmetry > eps * gm.amax().max(1.0) || min_eigenvalue <= eps {
            return Err(Error::NotPositive {
                min_eigenvalue,
                asymmetry,
            });
        }
        let g_inv = g.inverse(eps)?;
        let psi_minus = j.act_on_form(psi_plus);
        let vol = KForm::top(orientation * g.det().sqrt());
        Ok(SU3Structure {
            omega: *omega,
            psi_plus: *psi_plus,
            j,
            g,
            psi_minus,
            vol,
            orientation,
            eps,
            g_inv,
        })
    }

    /// The structure induced by a Type IIA pair `(ω, φ)`: `ψ⁺ = 2φ/|φ|_g`.
    pub fn from_type_iia(omega: &KForm, phi: &KForm, eps: f64) -> Result<(Self, f64)> {
        let s = Self::derive(omega, phi, eps)?;
        let f = s.norm_sq(phi).sqrt();
        let psi = phi.scale(2.0 / f);
        Ok((
            SU3Structure {
                psi_plus: psi,
                psi_minus: s.j.act_on_form(&psi),
                ..s
            },
            f,
        ))
    }

    pub fn g_inv(&self) -> &Mat6 {
        &self.g_inv
    }

    pub fn density(&self) -> f64 {
        self.orientation * self.g.det().sqrt()
    }

    pub fn inner(&self, a: &KForm, b: &KForm) -> f64 {
        assert_eq!(
            a.degree(),
            b.degree(),
            "inner product of forms of different degree"
        );
        inner_with(&self.g_inv, a, b)
    }

    pub fn norm_sq(&self, a: &KForm) -> f64 {
        self.inner(a, a)
    }

    pub fn norm(&self, a: &KForm) -> f64 {
        self.norm_sq(a).max(0.0).sqrt()
    }

    pub fn star(&self, a: &KForm) -> KForm {
        star_with(&self.g_inv, self.density(), a)
    }

    /// Codifferential on the given algebra with respect to `g`.
    pub fn codiff(&self, l: &crate::liealg::LieAlgebra, a: &KForm) -> KForm {
        l.codiff_with(&self.g_inv, self.g.det().sqrt(), a)
    }

    /// A g-orthonormal frame (columns), `g^{-1/2}`.
    pub fn orthonormal_frame(&self) -> Mat6 {
        self.g
            .orthonormal_frame(0.0)
            .expect("metric is positive definite")
    }

    /// Numeric tolerance scaled by a characteristic magnitude.
    pub(crate) fn tol(&self, scale: f64) -> f64 {
        self.eps * scale.max(1.0)
    }
}
