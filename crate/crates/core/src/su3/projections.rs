//! Irreducible SU(3) components of 2- and 3-forms.

use serde::Serialize;

use super::SU3Structure;
use crate::multilinear::{project_onto_span, KForm};

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Proj2 {
    pub p1: KForm,
    pub p6: KForm,
    pub p8: KForm,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Proj3 {
    pub re: KForm,
    pub im: KForm,
    pub p6: KForm,
    pub p12: KForm,
}

fn along(s: &SU3Structure, b: &KForm, x: &KForm) -> KForm {
    b.scale(s.inner(b, x) / s.norm_sq(b))
}

/// `Λ²₆ = {*(α∧ψ⁺)}`.
fn lambda2_6(s: &SU3Structure) -> Vec<KForm> {
    (1..=6)
        .map(|i| s.star(&KForm::covector(i).wedge_unchecked(&s.psi_plus)))
        .collect()
}

/// `Λ³₆ = {α∧ω}`.
fn lambda3_6(s: &SU3Structure) -> Vec<KForm> {
    (1..=6)
        .map(|i| KForm::covector(i).wedge_unchecked(&s.omega))
        .collect()
}

/// `σ = p1 + p6 + p8` with `p1 ∈ ℝω`, `p6 ∈ Λ²₆` and `p8` the g-orthogonal remainder.
pub fn project2(s: &SU3Structure, sigma: &KForm) -> Proj2 {
    assert_eq!(sigma.degree(), 2, "project2 takes a 2-form");
    let p1 = along(s, &s.omega, sigma);
    let p6 = project_onto_span(s.g_inv(), &lambda2_6(s), sigma);
    Proj2 {
        p1,
        p6,
        p8: *sigma - p1 - p6,
    }
}

/// `ρ = re + im + p6 + p12` with `re ∈ ℝψ⁺`, `im ∈ ℝψ⁻`, `p6 ∈ Λ³₆` and `p12` the remainder.
pub fn project3(s: &SU3Structure, rho: &KForm) -> Proj3 {
    assert_eq!(rho.degree(), 3, "project3 takes a 3-form");
    let re = along(s, &s.psi_plus, rho);
    let im = along(s, &s.psi_minus, rho);
    let p6 = project_onto_span(s.g_inv(), &lambda3_6(s), rho);
    Proj3 {
        re,
        im,
        p6,
        p12: *rho - re - im - p6,
    }
}
