mod common;

use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use typeiia_core::hitchin::{analyze_3form, scale_covariance_check};
use typeiia_core::multilinear::{act_on_form, standard, Endo, KForm, Mat6};
use typeiia_core::su3::{
    build_su3, check_sym_minus, check_sym_plus0, invert_sigma12, normalize_pair, project2,
    project3, random_sym_minus, random_sym_plus0, sigma12, sigma8, SU3Structure,
};

/// The standard structure pulled back along `E`: `g = EᵀE`, `J = E⁻¹J₀E`.
fn pulled_back(e: &Endo) -> SU3Structure {
    build_su3(
        &act_on_form(e, &standard::omega()),
        &act_on_form(e, &standard::psi_plus()),
    )
    .unwrap()
}

proptest! {
    #[test]
    fn j_is_equivariant(e in near_identity()) {
        let phi = act_on_form(&e, &standard::psi_plus());
        let r = analyze_3form(&phi, &KForm::top(e.0.determinant())).unwrap();
        let j = r.j.unwrap();
        let expect = e.0.try_inverse().unwrap() * standard::j().0 * e.0;
        prop_assert!((j.0 - expect).amax() <= 1e-9);
        prop_assert!((j.0 * j.0 + Mat6::identity()).amax() <= 1e-9);
    }

    #[test]
    fn quartic_invariant_scales_with_fourth_power(e in near_identity(), s in 0.2..5.0f64) {
        let phi = act_on_form(&e, &standard::psi_plus());
        prop_assert!(scale_covariance_check(&phi, &KForm::top(1.0), s, 1e-9).unwrap());
    }

    #[test]
    fn structure_from_pullback(e in near_identity()) {
        let s = pulled_back(&e);
        prop_assert!((s.g.matrix() - e.0.transpose() * e.0).amax() <= 1e-9);
        // g(J·, J·) = g
        prop_assert!((s.j.0.transpose() * s.g.matrix() * s.j.0 - s.g.matrix()).amax() <= 1e-9);
        prop_assert!(close(&s.star(&s.psi_plus), &s.psi_minus, 1e-9));
        let lhs = s.psi_plus.wedge(&s.psi_minus).unwrap().top_coeff();
        let omega3 = s.omega.power(3).unwrap().top_coeff();
        prop_assert!((lhs - 2.0 / 3.0 * omega3).abs() <= 1e-9 * omega3.abs());
        prop_assert!(close(&s.star(&s.omega), &s.omega.wedge(&s.omega).unwrap().scale(0.5), 1e-9));
    }

    #[test]
    fn normalization_recovers_the_scale(e in near_identity(), k in 0.3..4.0f64) {
        let om = act_on_form(&e, &standard::omega());
        let psi = act_on_form(&e, &standard::psi_plus());
        let (_, back) = normalize_pair(&om, &psi.scale(k), 1e-12).unwrap();
        prop_assert!(close(&back, &psi, 1e-10));
    }

    #[test]
    fn two_form_projection_is_orthogonal(e in near_identity(), a in form(2)) {
        let s = pulled_back(&e);
        let p = project2(&s, &a);
        prop_assert!(close(&(p.p1 + p.p6 + p.p8), &a, 1e-9));
        for (x, y) in [(&p.p1, &p.p6), (&p.p1, &p.p8), (&p.p6, &p.p8)] {
            prop_assert!(s.inner(x, y).abs() <= 1e-9 * a.max_abs().powi(2).max(1.0));
        }
        // Λ²₈: J-invariant, primitive, *(σ∧ω) = −σ
        prop_assert!(close(&s.j.act_on_form(&p.p8), &p.p8, 1e-9));
        prop_assert!(p.p8.wedge(&s.omega.wedge(&s.omega).unwrap()).unwrap().is_zero(1e-9));
        prop_assert!(close(&s.star(&p.p8.wedge(&s.omega).unwrap()), &p.p8.scale(-1.0), 1e-9));
    }

    #[test]
    fn three_form_projection_is_orthogonal(e in near_identity(), a in form(3)) {
        let s = pulled_back(&e);
        let p = project3(&s, &a);
        prop_assert!(close(&(p.re + p.im + p.p6 + p.p12), &a, 1e-9));
        let parts = [&p.re, &p.im, &p.p6, &p.p12];
        for i in 0..4 {
            for j in i + 1..4 {
                prop_assert!(s.inner(parts[i], parts[j]).abs() <= 1e-9 * a.max_abs().powi(2).max(1.0));
            }
        }
        prop_assert!(close(&s.star(&p.p12), &s.j.act_on_form(&p.p12), 1e-9));
        prop_assert!(p.p12.wedge(&s.omega).unwrap().is_zero(1e-9));
        prop_assert!(p.p12.wedge(&s.psi_plus).unwrap().is_zero(1e-9));
    }

    #[test]
    fn sigma_maps_land_in_their_modules(e in near_identity(), seed in any::<u64>()) {
        let s = pulled_back(&e);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_sym_plus0(&s, &mut rng);
        let m = random_sym_minus(&s, &mut rng);
        prop_assert!(check_sym_plus0(&s, &a).is_ok());
        prop_assert!(check_sym_minus(&s, &m).is_ok());
        let sigma = sigma8(&s, &a).unwrap();
        prop_assert!(close(&project2(&s, &sigma).p8, &sigma, 1e-9));
        let rho = sigma12(&s, &m).unwrap();
        prop_assert!(close(&project3(&s, &rho).p12, &rho, 1e-9));
        let back = invert_sigma12(&s, &rho).unwrap();
        prop_assert!((back.0 - m.0).amax() <= 1e-8 * m.0.amax().max(1.0));
        prop_assert!(sigma8(&s, &m).is_err());
        prop_assert!(sigma12(&s, &a).is_err());
    }
}
