//! Exterior algebra on ℝ⁶: forms, endomorphism actions, metrics and Hodge duality.

pub mod basis;
mod endo;
mod form;
mod hodge;
mod json;
mod parse;

pub use endo::{act_on_form, derive_action, unit, Endo, Mat6, Metric, Vector};
pub use form::KForm;
pub use hodge::{gram, hodge_star, inner, norm, norm_sq, orientation_sign, vol_form};
pub use parse::{parse_form, split_tuple};

pub(crate) use hodge::{inner_with, project_onto_span, star_with};

/// Interior product `ι_v a`.
pub fn contract(v: &Vector, a: &KForm) -> crate::Result<KForm> {
    a.contract(v)
}

/// Exterior product `a ∧ b`.
pub fn wedge(a: &KForm, b: &KForm) -> crate::Result<KForm> {
    a.wedge(b)
}

/// Standard forms on ℝ⁶ with `J e_{2k−1} = e_{2k}`.
pub mod standard {
    use super::{Endo, KForm};

    fn e(c: f64, idx: &[usize]) -> KForm {
        KForm::monomial(c, idx).expect("valid monomial")
    }

    /// `e¹² + e³⁴ + e⁵⁶`
    pub fn omega() -> KForm {
        e(1.0, &[1, 2]) + e(1.0, &[3, 4]) + e(1.0, &[5, 6])
    }

    /// `e¹³⁵ − e¹⁴⁶ − e²³⁶ − e²⁴⁵`
    pub fn psi_plus() -> KForm {
        e(1.0, &[1, 3, 5]) - e(1.0, &[1, 4, 6]) - e(1.0, &[2, 3, 6]) - e(1.0, &[2, 4, 5])
    }

    /// `e¹³⁶ + e¹⁴⁵ + e²³⁵ − e²⁴⁶`
    pub fn psi_minus() -> KForm {
        e(1.0, &[1, 3, 6]) + e(1.0, &[1, 4, 5]) + e(1.0, &[2, 3, 5]) - e(1.0, &[2, 4, 6])
    }

    /// `J e₁ = e₂, J e₂ = −e₁`, and likewise on the other two pairs.
    pub fn j() -> Endo {
        let mut m = super::Mat6::zeros();
        for k in 0..3 {
            m[(2 * k + 1, 2 * k)] = 1.0;
            m[(2 * k, 2 * k + 1)] = -1.0;
        }
        Endo(m)
    }
}
