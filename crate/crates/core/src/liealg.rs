//! Six-dimensional Lie algebras given by structure equations `d e^i`, with the
//! Chevalley–Eilenberg differential, codifferential and Hodge Laplacian.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::multilinear::basis::{self, BINOM, DIM};
use crate::multilinear::{parse_form, split_tuple, star_with, KForm, Metric, Vector};
use crate::DEFAULT_EPS;

#[derive(Debug, Clone)]
pub struct LieAlgebra {
    d_basis: [KForm; DIM],
    /// `c[k][i][j]`: `[e_i, e_j] = Σ_k c^k_{ij} e_k`.
    structure: [[[f64; DIM]; DIM]; DIM],
    /// Matrix of `d: Λ^k → Λ^{k+1}` in storage order, for `k = 0..=5`.
    d_mats: Vec<DMatrix<f64>>,
}

impl LieAlgebra {
    /// Builds the algebra from `d e^1, …, d e^6`, checking `d∘d = 0` in every degree.
    pub fn from_structure_equations(d_basis: [KForm; DIM]) -> Result<Self> {
        Self::from_structure_equations_eps(d_basis, DEFAULT_EPS)
    }

    pub fn from_structure_equations_eps(d_basis: [KForm; DIM], eps: f64) -> Result<Self> {
        for f in &d_basis {
            if f.degree() != 2 {
                return Err(Error::DegreeMismatch {
                    expected: 2,
                    found: f.degree(),
                });
            }
        }
        let mut structure = [[[0.0; DIM]; DIM]; DIM];
        for (k, de) in d_basis.iter().enumerate() {
            for i in 0..DIM {
                for j in 0..DIM {
                    if i != j {
                        let (mask, sign) = basis::mask_of_tuple(&[i, j]).unwrap();
                        structure[k][i][j] = -sign * de.coeff_of_mask(mask);
                    }
                }
            }
        }
        let d_mats: Vec<DMatrix<f64>> = (0..DIM).map(|k| leibniz_matrix(&d_basis, k)).collect();
        let scale = d_basis.iter().map(KForm::max_abs).fold(1.0, f64::max);
        for k in 0..DIM - 1 {
            let residual = (&d_mats[k + 1] * &d_mats[k]).amax();
            if residual > eps * scale * scale {
                return Err(Error::NotLieAlgebra {
                    degree: k,
                    residual,
                });
            }
        }
        Ok(LieAlgebra {
            d_basis,
            structure,
            d_mats,
        })
    }

    /// Parses the tuple notation `(0,-e13,-e12,0,-e46,-e45)`, with symbols bound
    /// from `bindings`.
    pub fn parse(input: &str, bindings: &[(&str, f64)]) -> Result<Self> {
        let parts = split_tuple(input)?;
        if parts.len() != DIM {
            return Err(Error::Parse {
                input: input.to_string(),
                reason: format!("expected 6 entries, found {}", parts.len()),
            });
        }
        let mut d = [KForm::zero(2); DIM];
        for (slot, p) in d.iter_mut().zip(&parts) {
            *slot = parse_form(p, 2, bindings)?;
        }
        Self::from_structure_equations(d)
    }

    pub fn abelian() -> Self {
        Self::from_structure_equations([KForm::zero(2); DIM]).expect("abelian algebra")
    }

    pub fn d_basis(&self) -> &[KForm; DIM] {
        &self.d_basis
    }

    /// `c^k_{ij}` with `[e_i, e_j] = Σ_k c^k_{ij} e_k` (zero-based indices).
    pub fn structure_constant(&self, k: usize, i: usize, j: usize) -> f64 {
        self.structure[k][i][j]
    }

    pub fn bracket(&self, x: &Vector, y: &Vector) -> Vector {
        let mut out = Vector::zeros();
        for i in 0..DIM {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..DIM {
                if y[j] == 0.0 {
                    continue;
                }
                for k in 0..DIM {
                    out[k] += self.structure[k][i][j] * x[i] * y[j];
                }
            }
        }
        out
    }

    /// Chevalley–Eilenberg differential. Errors on top-degree input.
    pub fn ce_d(&self, a: &KForm) -> Result<KForm> {
        let k = a.degree();
        if k >= DIM {
            return Err(Error::InvalidDegree(k + 1));
        }
        let v = &self.d_mats[k] * DVector::from_column_slice(a.coeffs());
        KForm::from_coeffs(k + 1, v.as_slice())
    }

    /// `tr(ad_X) = 0` for every basis vector, within `eps`.
    pub fn is_unimodular(&self, eps: f64) -> bool {
        (0..DIM).all(|i| (0..DIM).map(|k| self.structure[k][i][k]).sum::<f64>().abs() <= eps)
    }

    /// Codifferential `d* = −*d*`.
    pub fn codiff(&self, g: &Metric, a: &KForm) -> Result<KForm> {
        let k = a.degree();
        if k == 0 {
            return Err(Error::InvalidDegree(0));
        }
        let g_inv = g.inverse(DEFAULT_EPS)?;
        Ok(self.codiff_with(&g_inv, g.det().sqrt(), a))
    }

    pub(crate) fn codiff_with(
        &self,
        g_inv: &nalgebra::Matrix6<f64>,
        density: f64,
        a: &KForm,
    ) -> KForm {
        // the orientation sign cancels between the two stars
        let s = star_with(g_inv, density, a);
        let ds = self
            .ce_d(&s)
            .expect("star of a positive-degree form has degree < 6");
        -star_with(g_inv, density, &ds)
    }

    /// Hodge Laplacian `d d* + d* d`.
    pub fn laplacian(&self, g: &Metric, a: &KForm) -> Result<KForm> {
        let g_inv = g.inverse(DEFAULT_EPS)?;
        let density = g.det().sqrt();
        let k = a.degree();
        let mut out = KForm::zero(k);
        if k > 0 {
            out += self.ce_d(&self.codiff_with(&g_inv, density, a))?;
        }
        if k < DIM {
            out += self.codiff_with(&g_inv, density, &self.ce_d(a)?);
        }
        Ok(out)
    }
}

/// `d(e^{t_1…t_k}) = Σ_slot (−1)^slot e^{t_1…} ∧ d e^{t_slot} ∧ e^{…t_k}`, column by column.
fn leibniz_matrix(d_basis: &[KForm; DIM], k: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(BINOM[k + 1], BINOM[k]);
    for (col, &t) in basis::masks(k).iter().enumerate() {
        let idx: Vec<usize> = basis::indices(t).collect();
        for (slot, &i) in idx.iter().enumerate() {
            let before = idx[..slot].iter().fold(0u8, |acc, j| acc | (1 << j));
            let after = idx[slot + 1..].iter().fold(0u8, |acc, j| acc | (1 << j));
            let sign = if slot % 2 == 0 { 1.0 } else { -1.0 };
            for (mask, c) in d_basis[i].mask_terms() {
                let s1 = basis::wedge_sign(before, mask);
                if s1 == 0.0 {
                    continue;
                }
                let s2 = basis::wedge_sign(before | mask, after);
                if s2 == 0.0 {
                    continue;
                }
                m[(basis::rank(before | mask | after), col)] += sign * s1 * s2 * c;
            }
        }
    }
    m
}
