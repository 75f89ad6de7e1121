use nalgebra::{DMatrix, DVector};

use super::basis::{self, BINOM, DIM, TOP};
use super::endo::{minor, Mat6, Metric};
use super::form::KForm;
use crate::error::{Error, Result};
use crate::DEFAULT_EPS;

/// Sign of a top form relative to `e^{123456}`.
pub fn orientation_sign(orient: &KForm) -> Result<f64> {
    if orient.degree() != DIM {
        return Err(Error::DegreeMismatch {
            expected: DIM,
            found: orient.degree(),
        });
    }
    let c = orient.top_coeff();
    if c == 0.0 || !c.is_finite() {
        return Err(Error::ZeroOrientation);
    }
    Ok(c.signum())
}

/// The g-unit volume form in the orientation class of `sign`.
pub fn vol_form(g: &Metric, sign: f64) -> Result<KForm> {
    g.inverse(DEFAULT_EPS)?;
    Ok(KForm::top(sign.signum() * g.det().sqrt()))
}

/// Gram matrix of the induced metric on `k`-forms in storage order:
/// `⟨e^S, e^T⟩ = det(g⁻¹[S,T])`.
pub fn gram(g_inv: &Mat6, k: usize) -> DMatrix<f64> {
    let m = basis::masks(k);
    DMatrix::from_fn(BINOM[k], BINOM[k], |r, c| minor(g_inv, m[r], m[c]))
}

/// Hodge star with respect to `g` and the orientation of `orient`.
pub fn hodge_star(g: &Metric, orient: &KForm, a: &KForm) -> Result<KForm> {
    let sign = orientation_sign(orient)?;
    let g_inv = g.inverse(DEFAULT_EPS)?;
    Ok(star_with(&g_inv, sign * g.det().sqrt(), a))
}

/// Star given `g⁻¹` and the signed volume density `σ√det g`.
pub(crate) fn star_with(g_inv: &Mat6, signed_density: f64, a: &KForm) -> KForm {
    let k = a.degree();
    let mut out = KForm::zero(DIM - k);
    for &s in basis::masks(k) {
        let mut raised = 0.0;
        for (t, c) in a.mask_terms() {
            raised += minor(g_inv, s, t) * c;
        }
        if raised != 0.0 {
            let comp = TOP ^ s;
            out.add_to_mask(comp, basis::wedge_sign(s, comp) * signed_density * raised);
        }
    }
    out
}

/// Induced inner product on forms of equal degree.
pub fn inner(g: &Metric, a: &KForm, b: &KForm) -> Result<f64> {
    if a.degree() != b.degree() {
        return Err(Error::DegreeMismatch {
            expected: a.degree(),
            found: b.degree(),
        });
    }
    let g_inv = g.inverse(DEFAULT_EPS)?;
    Ok(inner_with(&g_inv, a, b))
}

pub(crate) fn inner_with(g_inv: &Mat6, a: &KForm, b: &KForm) -> f64 {
    debug_assert_eq!(a.degree(), b.degree());
    let mut total = 0.0;
    for (s, ca) in a.mask_terms() {
        for (t, cb) in b.mask_terms() {
            total += ca * cb * minor(g_inv, s, t);
        }
    }
    total
}

pub fn norm_sq(g: &Metric, a: &KForm) -> Result<f64> {
    inner(g, a, a)
}

pub fn norm(g: &Metric, a: &KForm) -> Result<f64> {
    Ok(norm_sq(g, a)?.max(0.0).sqrt())
}

/// g-orthogonal projection of `x` onto the span of `spanning` (which may be
/// linearly dependent).
pub(crate) fn project_onto_span(g_inv: &Mat6, spanning: &[KForm], x: &KForm) -> KForm {
    let n = spanning.len();
    let mut out = KForm::zero(x.degree());
    if n == 0 {
        return out;
    }
    let gram = DMatrix::from_fn(n, n, |i, j| inner_with(g_inv, &spanning[i], &spanning[j]));
    let rhs = DVector::from_fn(n, |i, _| inner_with(g_inv, &spanning[i], x));
    let scale = gram.amax().max(f64::MIN_POSITIVE);
    let coeffs = gram
        .svd(true, true)
        .solve(&rhs, 1e-12 * scale)
        .expect("svd solve with both factors");
    for (b, c) in spanning.iter().zip(coeffs.iter()) {
        out += b.scale(*c);
    }
    out
}
