use crate::error::{Error, Result};
use crate::liealg::LieAlgebra;
use crate::multilinear::KForm;
use crate::su3::SU3Structure;

/// Structure induced by a Type IIA pair `(ω, φ)` after checking `dω = 0`, `dφ = 0`
/// and the pointwise conditions; returns it together with `|φ|_g`.
pub fn type_iia_structure(
    omega: &KForm,
    phi: &KForm,
    l: &LieAlgebra,
    eps: f64,
) -> Result<(SU3Structure, f64)> {
    let scale = phi.max_abs().max(omega.max_abs()).max(1.0);
    let dscale = l.d_basis().iter().map(KForm::max_abs).fold(1.0, f64::max);
    if l.ce_d(omega)?.max_abs() > eps * scale * dscale {
        return Err(Error::NotTypeIIA {
            condition: "dω = 0".into(),
        });
    }
    if l.ce_d(phi)?.max_abs() > eps * scale * dscale {
        return Err(Error::NotTypeIIA {
            condition: "dφ = 0".into(),
        });
    }
    SU3Structure::from_type_iia(omega, phi, eps).map_err(|e| {
        let condition = match e {
            Error::DegenerateOmega { .. } => "ω non-degenerate",
            Error::NotDefinite { .. } => "φ definite",
            Error::NotPrimitive { .. } => "φ∧ω = 0",
            Error::NotPositive { .. } => "induced metric positive",
            _ => return e,
        };
        Error::NotTypeIIA {
            condition: condition.into(),
        }
    })
}

/// `d(J·d*(|φ|²φ))`, with `J` and `g` induced by `(ω, φ)`.
pub fn flow_rhs(omega: &KForm, phi: &KForm, l: &LieAlgebra, eps: f64) -> Result<KForm> {
    let (s, f) = type_iia_structure(omega, phi, l, eps)?;
    let inner = s.codiff(l, &phi.scale(f * f));
    l.ce_d(&s.j.act_on_form(&inner))
}
