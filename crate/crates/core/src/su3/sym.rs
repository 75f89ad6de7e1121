//! Symmetric endomorphisms split by `J`: `Sym⁺₀` (commuting, traceless) and
//! `Sym⁻` (anticommuting), with the isomorphisms `Σ₈: Sym⁺₀ → Λ²₈` and
//! `Σ₁₂: Sym⁻ → Λ³₁₂`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use serde::Serialize;

use super::SU3Structure;
use crate::error::{Error, Result};
use crate::multilinear::basis::{self, DIM};
use crate::multilinear::{derive_action, Endo, KForm, Mat6, Vector};

/// g-adjoint symmetrization `½(X + X*)`.
fn g_symmetrize(s: &SU3Structure, x: &Mat6) -> Mat6 {
    let adj = s.g_inv() * x.transpose() * s.g.matrix();
    (x + adj) * 0.5
}

fn conj_j(s: &SU3Structure, x: &Mat6) -> Mat6 {
    // J⁻¹ = −J
    -(s.j.0 * x * s.j.0)
}

pub fn project_sym_plus0(s: &SU3Structure, x: &Endo) -> Endo {
    let xs = g_symmetrize(s, &x.0);
    let a = (xs + conj_j(s, &xs)) * 0.5;
    Endo(a - Mat6::identity() * (a.trace() / DIM as f64))
}

pub fn project_sym_minus(s: &SU3Structure, x: &Endo) -> Endo {
    let xs = g_symmetrize(s, &x.0);
    Endo((xs - conj_j(s, &xs)) * 0.5)
}

/// Frobenius norm in a g-orthonormal frame.
fn frame_norm(s: &SU3Structure, e: &Mat6) -> f64 {
    let f = s.orthonormal_frame();
    let f_inv = f.try_inverse().expect("frame is invertible");
    (f_inv * e * f).norm()
}

fn sym_defects(s: &SU3Structure, e: &Endo) -> (f64, f64, f64, f64) {
    let ge = s.g.matrix() * e.0;
    let asym = (ge - ge.transpose()).amax();
    let jc = (e.0 * s.j.0 - s.j.0 * e.0).amax();
    let ja = (e.0 * s.j.0 + s.j.0 * e.0).amax();
    (asym, jc, ja, e.trace().abs())
}

pub fn check_sym_plus0(s: &SU3Structure, a: &Endo) -> Result<()> {
    let tol = s.tol(a.0.amax());
    let (asym, jc, _, tr) = sym_defects(s, a);
    let reason = if asym > tol {
        format!("not g-symmetric (defect {asym:e})")
    } else if jc > tol {
        format!("does not commute with J (defect {jc:e})")
    } else if tr > tol {
        format!("trace {tr:e} is not zero")
    } else {
        return Ok(());
    };
    Err(Error::WrongSymmetryType {
        expected: "Sym⁺₀",
        reason,
    })
}

pub fn check_sym_minus(s: &SU3Structure, e: &Endo) -> Result<()> {
    let tol = s.tol(e.0.amax());
    let (asym, _, ja, _) = sym_defects(s, e);
    let reason = if asym > tol {
        format!("not g-symmetric (defect {asym:e})")
    } else if ja > tol {
        format!("does not anticommute with J (defect {ja:e})")
    } else {
        return Ok(());
    };
    Err(Error::WrongSymmetryType {
        expected: "Sym⁻",
        reason,
    })
}

fn random_matrix<R: Rng + ?Sized>(rng: &mut R) -> Endo {
    Endo(Mat6::from_fn(|_, _| rng.gen_range(-1.0..1.0)))
}

pub fn random_sym_plus0<R: Rng + ?Sized>(s: &SU3Structure, rng: &mut R) -> Endo {
    project_sym_plus0(s, &random_matrix(rng))
}

pub fn random_sym_minus<R: Rng + ?Sized>(s: &SU3Structure, rng: &mut R) -> Endo {
    project_sym_minus(s, &random_matrix(rng))
}

/// 2-form with `σ(e_i, e_j) = m_ij` for an antisymmetric `m`.
fn two_form_from_matrix(m: &Mat6) -> KForm {
    let mut out = KForm::zero(2);
    for (pos, &mask) in basis::masks(2).iter().enumerate() {
        let mut it = basis::indices(mask);
        let (i, j) = (it.next().unwrap(), it.next().unwrap());
        out.coeffs_mut()[pos] = m[(i, j)];
    }
    out
}

/// `Σ₈(A) = g(AJ·, ·)`.
pub fn sigma8(s: &SU3Structure, a: &Endo) -> Result<KForm> {
    check_sym_plus0(s, a)?;
    Ok(sigma8_unchecked(s, a))
}

fn sigma8_unchecked(s: &SU3Structure, a: &Endo) -> KForm {
    two_form_from_matrix(&((a.0 * s.j.0).transpose() * s.g.matrix()))
}

/// `Σ₁₂(S) = S_*ψ⁺ = −ψ⁺(S·,·,·) − ψ⁺(·,S·,·) − ψ⁺(·,·,S·)`.
pub fn sigma12(s: &SU3Structure, e: &Endo) -> Result<KForm> {
    check_sym_minus(s, e)?;
    Ok(derive_action(e, &s.psi_plus))
}

/// Orthonormal basis (Frobenius norm in a g-orthonormal frame) of the image
/// of `project` applied to all g-symmetric endomorphisms.
fn basis_of(s: &SU3Structure, project: fn(&SU3Structure, &Endo) -> Endo) -> Vec<Endo> {
    let f = s.orthonormal_frame();
    let f_inv = f.try_inverse().expect("frame is invertible");
    let mut cols = Vec::new();
    for a in 0..DIM {
        for b in a..DIM {
            let mut m = Mat6::zeros();
            m[(a, b)] = 1.0;
            m[(b, a)] = 1.0;
            let e = project(s, &Endo(f * m * f_inv));
            cols.push(DVector::from_column_slice((f_inv * e.0 * f).as_slice()));
        }
    }
    let stacked = DMatrix::from_columns(&cols);
    // the left singular vectors of the rank-deficient stack are only good to ~1e-8
    let eig = (&stacked * stacked.transpose()).symmetric_eigen();
    eig.eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, &ev)| ev > 1e-6)
        .map(|(k, _)| {
            let m = Mat6::from_column_slice(eig.eigenvectors.column(k).as_slice());
            Endo(f * m * f_inv)
        })
        .collect()
}

pub fn sym_plus0_basis(s: &SU3Structure) -> Vec<Endo> {
    basis_of(s, project_sym_plus0)
}

pub fn sym_minus_basis(s: &SU3Structure) -> Vec<Endo> {
    basis_of(s, project_sym_minus)
}

/// Matrix of `Σ₈` from an orthonormal basis of `Sym⁺₀` to 2-form coefficients.
pub fn sigma8_matrix(s: &SU3Structure) -> (DMatrix<f64>, Vec<Endo>) {
    let b = sym_plus0_basis(s);
    let cols: Vec<DVector<f64>> = b
        .iter()
        .map(|a| DVector::from_column_slice(sigma8_unchecked(s, a).coeffs()))
        .collect();
    (DMatrix::from_columns(&cols), b)
}

/// Matrix of `Σ₁₂` from an orthonormal basis of `Sym⁻` to 3-form coefficients.
pub fn sigma12_matrix(s: &SU3Structure) -> (DMatrix<f64>, Vec<Endo>) {
    let b = sym_minus_basis(s);
    let cols: Vec<DVector<f64>> = b
        .iter()
        .map(|e| DVector::from_column_slice(derive_action(e, &s.psi_plus).coeffs()))
        .collect();
    (DMatrix::from_columns(&cols), b)
}

/// Least-squares inverse of `Σ₁₂`; fails when `rho` is not in the image.
pub fn invert_sigma12(s: &SU3Structure, rho: &KForm) -> Result<Endo> {
    let (m, b) = sigma12_matrix(s);
    let rhs = DVector::from_column_slice(rho.coeffs());
    let x = m
        .svd(true, true)
        .solve(&rhs, 1e-12)
        .expect("svd solve with both factors");
    let mut e = Mat6::zeros();
    for (basis_el, c) in b.iter().zip(x.iter()) {
        e += basis_el.0 * *c;
    }
    let e = Endo(e);
    let residual = s.norm(&(derive_action(&e, &s.psi_plus) - *rho));
    if residual > s.tol(s.norm(rho)) {
        return Err(Error::SymInversion { residual });
    }
    Ok(e)
}

/// A g-orthonormal frame `(f_1, J f_1, f_3, J f_3, f_5, J f_5)` (columns)
/// grown from the given candidate vectors by Gram–Schmidt.
pub fn unitary_frame(s: &SU3Structure, candidates: &[Vector]) -> Mat6 {
    let g = s.g.matrix();
    let mut frame: Vec<Vector> = Vec::with_capacity(DIM);
    let fallback: Vec<Vector> = (1..=DIM).map(crate::multilinear::unit).collect();
    for v in candidates.iter().chain(fallback.iter()) {
        if frame.len() == DIM {
            break;
        }
        let mut w = *v;
        for f in &frame {
            w -= f * f.dot(&(g * w));
        }
        let n = w.dot(&(g * w)).sqrt();
        if n < 1e-6 {
            continue;
        }
        w /= n;
        frame.push(w);
        frame.push(s.j.apply(&w));
    }
    Mat6::from_columns(&frame)
}

/// `Σ_i P_i S P_i` over the eigenspaces of `A`: the part of `S` commuting with `A`.
pub fn commuting_projection(s: &SU3Structure, a: &Endo, e: &Endo) -> Endo {
    let f = s.orthonormal_frame();
    let f_inv = f.try_inverse().expect("frame is invertible");
    let am = f_inv * a.0 * f;
    let am = (am + am.transpose()) * 0.5;
    let eig = SymmetricEigen::new(am);
    let mut order: Vec<usize> = (0..DIM).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
    let scale = eig.eigenvalues.amax().max(1e-300);
    // group numerically equal eigenvalues
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &k in &order {
        match groups.last_mut() {
            Some(gr)
                if (eig.eigenvalues[*gr.last().unwrap()] - eig.eigenvalues[k]).abs()
                    <= 1e-8 * scale =>
            {
                gr.push(k)
            }
            _ => groups.push(vec![k]),
        }
    }
    let em = f_inv * e.0 * f;
    let mut out = Mat6::zeros();
    for gr in &groups {
        let mut p = Mat6::zeros();
        for &k in gr {
            let v = eig.eigenvectors.column(k);
            p += v * v.transpose();
        }
        out += p * em * p;
    }
    Endo(f * out * f_inv)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lemma1Outcome {
    pub commute: bool,
    pub wedge_zero: bool,
    /// `‖[A,S]‖` in a g-orthonormal frame.
    pub commutator_norm: f64,
    /// `|Σ₈(A) ∧ Σ₁₂(S)|_g`.
    pub wedge_norm: f64,
    /// `‖A‖·‖S‖`, the reference for the zero thresholds.
    pub scale: f64,
}

/// Decides `[A,S] = 0` and `Σ₈(A) ∧ Σ₁₂(S) = 0`, each at `zero_tol · ‖A‖‖S‖`.
pub fn lemma1_check(s: &SU3Structure, a: &Endo, e: &Endo, zero_tol: f64) -> Result<Lemma1Outcome> {
    let sigma = sigma8(s, a)?;
    let rho = sigma12(s, e)?;
    let commutator_norm = frame_norm(s, &(a.0 * e.0 - e.0 * a.0));
    let wedge_norm = s.norm(&sigma.wedge(&rho)?);
    let scale = frame_norm(s, &a.0) * frame_norm(s, &e.0);
    let thr = zero_tol * scale;
    Ok(Lemma1Outcome {
        commute: commutator_norm <= thr,
        wedge_zero: wedge_norm <= thr,
        commutator_norm,
        wedge_norm,
        scale,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum PairKind {
    Random,
    /// `S` replaced by its part commuting with a generic `A`.
    Projected,
    /// `A` with a 4-dimensional eigenspace, `S` projected.
    Degenerate,
}

#[derive(Debug, Clone, Serialize)]
pub struct Lemma1Campaign {
    pub seed: u64,
    pub samples: usize,
    /// Pairs where `commute` and `wedge_zero` agree.
    pub agreements: usize,
    pub commuting: usize,
    /// `max |‖[A,S]‖ − |σ∧ρ|| / scale`
    pub max_norm_gap: f64,
    pub failures: Vec<(usize, PairKind, Lemma1Outcome)>,
}

impl Lemma1Campaign {
    pub fn pass(&self, agree_tol: f64) -> bool {
        self.agreements == self.samples && self.max_norm_gap <= agree_tol
    }
}

/// Random `Sym⁺₀ × Sym⁻` pairs cycling through the three [`PairKind`]s, reproducible from `seed`.
pub fn lemma1_campaign(
    s: &SU3Structure,
    samples: usize,
    seed: u64,
    zero_tol: f64,
) -> Result<Lemma1Campaign> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut out = Lemma1Campaign {
        seed,
        samples,
        agreements: 0,
        commuting: 0,
        max_norm_gap: 0.0,
        failures: Vec::new(),
    };
    for i in 0..samples {
        let kind = [PairKind::Random, PairKind::Projected, PairKind::Degenerate][i % 3];
        let a = match kind {
            PairKind::Degenerate => {
                let v: Vec<Vector> = (0..3)
                    .map(|_| Vector::from_fn(|_, _| rng.gen_range(-1.0..1.0)))
                    .collect();
                let f = unitary_frame(s, &v);
                let d = Mat6::from_diagonal(&Vector::from([1.0, 1.0, 1.0, 1.0, -2.0, -2.0]));
                // f⁻¹ = fᵀ g for a g-orthonormal frame
                Endo(f * d * f.transpose() * s.g.matrix())
            }
            _ => random_sym_plus0(s, &mut rng),
        };
        let mut e = random_sym_minus(s, &mut rng);
        if kind != PairKind::Random {
            e = commuting_projection(s, &a, &e);
        }
        let o = lemma1_check(s, &a, &e, zero_tol)?;
        if o.commute {
            out.commuting += 1;
        }
        if o.commute == o.wedge_zero {
            out.agreements += 1;
        } else {
            out.failures.push((i, kind, o));
        }
        out.max_norm_gap = out
            .max_norm_gap
            .max((o.commutator_norm - o.wedge_norm).abs() / o.scale.max(f64::MIN_POSITIVE));
    }
    Ok(out)
}
