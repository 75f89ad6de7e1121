//! Stable 3-forms: the endomorphism `S_φ`, the quartic invariant `P(φ)` and
//! the induced almost complex structure `J_φ`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::multilinear::basis::{self, DIM, TOP};
use crate::multilinear::{orientation_sign, unit, Endo, KForm, Mat6};
use crate::DEFAULT_EPS;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StableFormResult {
    #[serde(skip)]
    pub s: Endo,
    pub p: f64,
    #[serde(skip)]
    pub j: Option<Endo>,
    pub definite: bool,
}

/// `S_φ(v)` is the vector `u` with `(ι_vφ ∧ φ) ∧ α = α(u)·Ω` for every covector `α`.
pub fn analyze_3form(phi: &KForm, orient: &KForm) -> Result<StableFormResult> {
    analyze_3form_eps(phi, orient, DEFAULT_EPS)
}

pub fn analyze_3form_eps(phi: &KForm, orient: &KForm, eps: f64) -> Result<StableFormResult> {
    if phi.degree() != 3 {
        return Err(Error::DegreeMismatch {
            expected: 3,
            found: phi.degree(),
        });
    }
    orientation_sign(orient)?;
    let s = s_phi(phi, orient.top_coeff());
    let p = (s * s).trace() / 6.0;
    let definite = p < -eps;
    let j = definite.then(|| Endo(s / (-p).sqrt()));
    Ok(StableFormResult {
        s: Endo(s),
        p,
        j,
        definite,
    })
}

fn s_phi(phi: &KForm, omega: f64) -> Mat6 {
    let mut s = Mat6::zeros();
    for j in 0..DIM {
        let beta = phi
            .contract(&unit(j + 1))
            .expect("3-form")
            .wedge_unchecked(phi);
        for i in 0..DIM {
            let rest = TOP ^ (1 << i);
            let c = beta.coeff_of_mask(rest);
            if c != 0.0 {
                s[(i, j)] = basis::wedge_sign(rest, 1 << i) * c / omega;
            }
        }
    }
    s
}

/// `J(sφ) = J(φ)` and `P(sφ) = s⁴ P(φ)` within `eps` (relative to `|P(φ)|`).
pub fn scale_covariance_check(phi: &KForm, orient: &KForm, s: f64, eps: f64) -> Result<bool> {
    if !(s > 0.0) {
        return Err(Error::InvalidParameter {
            name: "s",
            value: s,
            reason: "scale must be positive",
        });
    }
    let base = analyze_3form_eps(phi, orient, eps)?;
    let scaled = analyze_3form_eps(&phi.scale(s), orient, eps)?;
    let (Some(j0), Some(j1)) = (base.j, scaled.j) else {
        return Ok(false);
    };
    let p_ok = (scaled.p - s.powi(4) * base.p).abs() <= eps * s.powi(4) * base.p.abs().max(1.0);
    Ok(p_ok && (j0.0 - j1.0).amax() <= eps)
}
