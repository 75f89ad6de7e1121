#![allow(dead_code)]

use proptest::prelude::*;
use typeiia_core::multilinear::basis::BINOM;
use typeiia_core::multilinear::{Endo, KForm, Mat6, Metric};

pub fn form(k: usize) -> impl Strategy<Value = KForm> {
    prop::collection::vec(-2.0..2.0f64, BINOM[k])
        .prop_map(move |c| KForm::from_coeffs(k, &c).unwrap())
}

pub fn any_form() -> impl Strategy<Value = KForm> {
    (0usize..=6).prop_flat_map(form)
}

pub fn matrix(radius: f64) -> impl Strategy<Value = Mat6> {
    prop::collection::vec(-radius..radius, 36).prop_map(|v| Mat6::from_row_slice(&v))
}

/// `I + R` with small `R`: invertible with positive determinant.
pub fn near_identity() -> impl Strategy<Value = Endo> {
    matrix(0.25).prop_map(|r| Endo(Mat6::identity() + r))
}

/// `AᵀA + I`, positive definite.
pub fn metric() -> impl Strategy<Value = Metric> {
    matrix(1.0).prop_map(|a| Metric::new(a.transpose() * a + Mat6::identity(), 1e-9).unwrap())
}

pub fn close(a: &KForm, b: &KForm, tol: f64) -> bool {
    (*a - *b).max_abs() <= tol * a.max_abs().max(b.max_abs()).max(1.0)
}
