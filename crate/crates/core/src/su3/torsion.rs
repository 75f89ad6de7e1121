//! Intrinsic torsion of symplectic half-flat structures on Lie algebras.

use nalgebra::SymmetricEigen;
use serde::{Serialize, Serializer};

use super::{invert_sigma12, project2, project3, SU3Structure};
use crate::error::{Error, Result};
use crate::liealg::LieAlgebra;
use crate::multilinear::basis::DIM;
use crate::multilinear::{Endo, KForm, Vector};

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Flags {
    pub is_shf: bool,
    pub cond_i: bool,
    pub cond_ii: bool,
    pub cond_iii: bool,
    pub is_special: bool,
    pub hermitian_ricci: bool,
    pub torsion_free: bool,
    pub w2_in_lambda2_8: bool,
    pub w2_coclosed: bool,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SpecialReport {
    /// Always zero for invariant structures.
    pub w1: f64,
    pub w2: KForm,
    pub w2_norm_sq: f64,
    pub dw2: KForm,
    pub gamma: KForm,
    #[serde(serialize_with = "endo_rows")]
    pub s: Endo,
    pub c: Option<f64>,
    /// `(μ₁, μ₂, μ₃)`, sorted descending.
    pub spectrum: [f64; 3],
    pub rank: usize,
    pub flags: Flags,
    pub scal: f64,
    pub nijenhuis_norm_sq: f64,
    /// `|Δw₂⁻ − c w₂⁻|`, once `c` is known.
    pub cond_i_residual: Option<f64>,
    #[serde(skip)]
    pub eps: f64,
}

fn endo_rows<S: Serializer>(e: &Endo, s: S) -> std::result::Result<S::Ok, S::Error> {
    let rows: Vec<[f64; DIM]> = (0..DIM)
        .map(|i| std::array::from_fn(|j| e.0[(i, j)]))
        .collect();
    rows.serialize(s)
}

/// Torsion data of an SHF structure: `w₂⁻ = d*ψ⁺`, `γ`, `S`, spectrum,
/// scalar curvature and Nijenhuis norm.
pub fn torsion(s: &SU3Structure, l: &LieAlgebra) -> Result<SpecialReport> {
    let d_omega = l.ce_d(&s.omega)?.max_abs();
    let d_psi = l.ce_d(&s.psi_plus)?.max_abs();
    let scale = s.omega.max_abs().max(s.psi_plus.max_abs());
    let dscale = l.d_basis().iter().map(KForm::max_abs).fold(1.0, f64::max);
    if d_omega > s.tol(scale * dscale) || d_psi > s.tol(scale * dscale) {
        return Err(Error::NotHalfFlat { d_omega, d_psi });
    }
    let w2 = s.codiff(l, &s.psi_plus);
    let w2_norm_sq = s.norm_sq(&w2);
    let wtol = s.tol(w2.max_abs());
    let torsion_free = w2.max_abs() <= s.tol(1.0);
    let p2 = project2(s, &w2);
    let w2_in_lambda2_8 = p2.p1.max_abs() <= wtol && p2.p6.max_abs() <= wtol;
    let w2_coclosed = s.codiff(l, &w2).max_abs() <= s.tol(w2.max_abs() * dscale);
    let dw2 = l.ce_d(&w2)?;
    let gamma = project3(s, &dw2).p12;
    let sym = invert_sigma12(s, &gamma)?;
    let (spectrum, rank) = signed_spectrum(s, &sym);
    let nijenhuis_norm_sq = nijenhuis_norm_sq(s, l);
    Ok(SpecialReport {
        w1: 0.0,
        w2,
        w2_norm_sq,
        dw2,
        gamma,
        s: sym,
        c: None,
        spectrum,
        rank,
        flags: Flags {
            is_shf: true,
            torsion_free,
            w2_in_lambda2_8,
            w2_coclosed,
            ..Flags::default()
        },
        scal: -0.5 * w2_norm_sq,
        nijenhuis_norm_sq,
        cond_i_residual: None,
        eps: s.eps,
    })
}

/// Completes the report with `c` and the special-SHF conditions.
pub fn special_check(
    report: &SpecialReport,
    l: &LieAlgebra,
    s: &SU3Structure,
) -> Result<SpecialReport> {
    let mut r = *report;
    let w = &r.w2;
    let wn = r.w2_norm_sq;
    let gamma_zero = r.gamma.max_abs() <= s.tol(r.dw2.max_abs());
    r.flags.hermitian_ricci = gamma_zero;
    if r.flags.torsion_free {
        r.flags.cond_i = false;
        r.flags.cond_ii = false;
        r.flags.cond_iii = false;
        r.flags.is_special = false;
        return Ok(r);
    }
    let lap = l.laplacian(&s.g, w)?;
    let c = s.inner(&lap, w) / wn;
    let residual = s.norm(&(lap - w.scale(c)));
    r.c = Some(c);
    r.cond_i_residual = Some(residual);
    r.flags.cond_i = residual <= s.eps * wn.sqrt().max(1.0) * c.abs().max(1.0);
    let wedge = r.dw2.wedge(w)?.max_abs();
    r.flags.cond_ii = wedge <= s.tol(r.dw2.max_abs() * w.max_abs());
    let dwn = s.norm_sq(&r.dw2);
    r.flags.cond_iii = (dwn - c * wn).abs() <= s.tol(dwn);
    r.flags.is_special = r.flags.cond_i && r.flags.cond_ii && r.flags.cond_iii;
    Ok(r)
}

/// `|N_J|² = Σ_{i,j} |N(f_i, f_j)|²_g` over a g-orthonormal frame, with
/// `N(X,Y) = ¼([JX,JY] − J[JX,Y] − J[X,JY] − [X,Y])`.
pub fn nijenhuis_norm_sq(s: &SU3Structure, l: &LieAlgebra) -> f64 {
    let f = s.orthonormal_frame();
    let j = &s.j;
    let cols: Vec<Vector> = (0..DIM).map(|i| f.column(i).into_owned()).collect();
    let mut total = 0.0;
    for x in &cols {
        let jx = j.apply(x);
        for y in &cols {
            let jy = j.apply(y);
            let n = (l.bracket(&jx, &jy)
                - j.apply(&l.bracket(&jx, y))
                - j.apply(&l.bracket(x, &jy))
                - l.bracket(x, y))
                * 0.25;
            total += s.g.apply(&n, &n);
        }
    }
    total
}

/// Spectrum `(μ₁, μ₂, μ₃)` of `S ∈ Sym⁻` (eigenvalues `±μ_i`) and its rank.
///
/// For rank 6 the overall sign is fixed by `ψ⁺` on the positive eigenvectors:
/// `|ψ⁺(v₁,v₂,v₃)| = 1` reports positive values, `|ψ⁻(v₁,v₂,v₃)| = 1` negative ones.
pub fn signed_spectrum(s: &SU3Structure, e: &Endo) -> ([f64; 3], usize) {
    let f = s.orthonormal_frame();
    let f_inv = f.try_inverse().expect("frame is invertible");
    let m = f_inv * e.0 * f;
    let eig = SymmetricEigen::new((m + m.transpose()) * 0.5);
    let mut order: Vec<usize> = (0..DIM).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let top: Vec<f64> = order[..3]
        .iter()
        .map(|&k| eig.eigenvalues[k].max(0.0))
        .collect();
    let tol = s.tol(eig.eigenvalues.amax());
    let rank = 2 * top.iter().filter(|&&x| x > tol).count();
    let mut mu = [top[0], top[1], top[2]];
    if rank == DIM {
        let v: Vec<Vector> = order[..3]
            .iter()
            .map(|&k| f * eig.eigenvectors.column(k))
            .collect();
        let re = s.psi_plus.eval(&v).abs();
        let im = s.psi_minus.eval(&v).abs();
        if im > re {
            mu = [-top[2], -top[1], -top[0]];
        }
    }
    for x in mu.iter_mut() {
        if x.abs() <= tol {
            *x = 0.0;
        }
    }
    (mu, rank)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EigenConstraint {
    /// `μ₁² + μ₂² + μ₃²`
    pub lhs: f64,
    /// `¼ w² (c − ¼ w²)`
    pub rhs: f64,
    pub rank: usize,
    /// The rank-specific relation: `μ² = rhs` for rank 2, `3μ² = rhs` with equal `|μ_i|` for rank 6.
    pub rank_relation: Option<bool>,
    pub holds: bool,
}

pub fn eigen_constraint(report: &SpecialReport) -> Option<EigenConstraint> {
    let c = report.c?;
    let w = report.w2_norm_sq;
    let mu = report.spectrum;
    let lhs: f64 = mu.iter().map(|m| m * m).sum();
    let rhs = 0.25 * w * (c - 0.25 * w);
    let tol = report.eps * rhs.abs().max(lhs.abs()).max(1.0);
    let mut holds = (lhs - rhs).abs() <= tol;
    let rank_relation = match report.rank {
        2 => Some((mu[0] * mu[0] - rhs).abs() <= tol),
        6 => {
            let equal = (mu[0] - mu[2]).abs() <= report.eps * mu[0].abs().max(1.0);
            Some(equal && (3.0 * mu[0] * mu[0] - rhs).abs() <= tol)
        }
        _ => None,
    };
    if let Some(ok) = rank_relation {
        holds &= ok;
    }
    Some(EigenConstraint {
        lhs,
        rhs,
        rank: report.rank,
        rank_relation,
        holds,
    })
}

/// `μ₁² + μ₂² + μ₃² = ¼w²(c − ¼w²)` plus the rank-2 / rank-6 forms.
pub fn eigen_constraint_check(report: &SpecialReport) -> bool {
    eigen_constraint(report).is_some_and(|e| e.holds)
}
