use nalgebra::{Matrix6, SymmetricEigen};

use super::basis::{self, DIM};
use super::form::KForm;
use crate::error::{Error, Result};

pub type Vector = nalgebra::Vector6<f64>;
pub type Mat6 = Matrix6<f64>;

/// Unit basis vector `e_i` (1-based).
pub fn unit(i: usize) -> Vector {
    let mut v = Vector::zeros();
    v[i - 1] = 1.0;
    v
}

/// An endomorphism of ℝ⁶, acting on column vectors in the fixed basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Endo(pub Mat6);

impl Endo {
    pub fn identity() -> Self {
        Endo(Mat6::identity())
    }

    pub fn zero() -> Self {
        Endo(Mat6::zeros())
    }

    pub fn diag(d: [f64; 6]) -> Self {
        Endo(Mat6::from_diagonal(&Vector::from(d)))
    }

    pub fn matrix(&self) -> &Mat6 {
        &self.0
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        self.0 * v
    }

    pub fn compose(&self, other: &Endo) -> Endo {
        Endo(self.0 * other.0)
    }

    pub fn inverse(&self) -> Option<Endo> {
        self.0.try_inverse().map(Endo)
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    pub fn frobenius(&self) -> f64 {
        self.0.norm()
    }

    /// Pullback `a(E·, …, E·)`.
    pub fn act_on_form(&self, a: &KForm) -> KForm {
        act_on_form(self, a)
    }

    /// `−Σ_slots a(…, E·, …)`.
    pub fn derive_action(&self, a: &KForm) -> KForm {
        derive_action(self, a)
    }
}

impl std::ops::Mul for Endo {
    type Output = Endo;
    fn mul(self, rhs: Endo) -> Endo {
        self.compose(&rhs)
    }
}

/// Pullback of a form along `E`: the coefficient on `e^T` is `a(E e_{t_1}, …, E e_{t_k})`.
pub fn act_on_form(e: &Endo, a: &KForm) -> KForm {
    let k = a.degree();
    let mut out = KForm::zero(k);
    if k == 0 {
        return *a;
    }
    let cols: Vec<Vector> = (0..DIM).map(|j| e.0.column(j).into_owned()).collect();
    for &t in basis::masks(k) {
        let vs: Vec<Vector> = basis::indices(t).map(|j| cols[j]).collect();
        let v = a.eval(&vs);
        if v != 0.0 {
            out.add_to_mask(t, v);
        }
    }
    out
}

/// Derivation action with a minus sign on each slot:
/// `−a(S·,·,…) − a(·,S·,…) − …`.
pub fn derive_action(s: &Endo, a: &KForm) -> KForm {
    let k = a.degree();
    let mut out = KForm::zero(k);
    for &t in basis::masks(k) {
        let idx: Vec<usize> = basis::indices(t).collect();
        let mut total = 0.0;
        for slot in 0..k {
            let vs: Vec<Vector> = idx
                .iter()
                .enumerate()
                .map(|(p, &j)| {
                    if p == slot {
                        s.0.column(j).into_owned()
                    } else {
                        unit(j + 1)
                    }
                })
                .collect();
            total -= a.eval(&vs);
        }
        if total != 0.0 {
            out.add_to_mask(t, total);
        }
    }
    out
}

/// A symmetric positive bilinear form on ℝ⁶.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metric(Mat6);

impl Metric {
    /// Accepts a matrix symmetric within `eps`; the stored value is symmetrized.
    pub fn new(m: Mat6, eps: f64) -> Result<Self> {
        let asym = (m - m.transpose()).amax();
        if asym > eps * m.amax().max(1.0) {
            return Err(Error::NotPositive {
                min_eigenvalue: f64::NAN,
                asymmetry: asym,
            });
        }
        Ok(Metric((m + m.transpose()) * 0.5))
    }

    pub fn identity() -> Self {
        Metric(Mat6::identity())
    }

    pub fn diag(d: [f64; 6]) -> Self {
        Metric(Mat6::from_diagonal(&Vector::from(d)))
    }

    pub fn matrix(&self) -> &Mat6 {
        &self.0
    }

    pub fn min_eigenvalue(&self) -> f64 {
        SymmetricEigen::new(self.0).eigenvalues.min()
    }

    pub fn is_positive_definite(&self, eps: f64) -> bool {
        self.min_eigenvalue() > eps
    }

    pub fn apply(&self, u: &Vector, v: &Vector) -> f64 {
        u.dot(&(self.0 * v))
    }

    pub fn det(&self) -> f64 {
        self.0.determinant()
    }

    /// Inverse, rejecting metrics that are not positive definite.
    pub fn inverse(&self, eps: f64) -> Result<Mat6> {
        let min = self.min_eigenvalue();
        if min <= eps {
            return Err(Error::DegenerateMetric {
                min_eigenvalue: min,
            });
        }
        Ok(self
            .0
            .try_inverse()
            .expect("positive definite matrix is invertible"))
    }

    /// `g^{-1/2}`: its columns form a g-orthonormal frame.
    pub fn orthonormal_frame(&self, eps: f64) -> Result<Mat6> {
        let eig = SymmetricEigen::new(self.0);
        let min = eig.eigenvalues.min();
        if min <= eps {
            return Err(Error::DegenerateMetric {
                min_eigenvalue: min,
            });
        }
        let d = Mat6::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / l.sqrt()));
        Ok(eig.eigenvectors * d * eig.eigenvectors.transpose())
    }
}

/// Determinant of the leading `k×k` block of `m`, destroying it.
pub(crate) fn small_det(m: &mut [[f64; DIM]; DIM], k: usize) -> f64 {
    match k {
        0 => 1.0,
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        3 => {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        }
        _ => {
            let mut det = 1.0;
            for c in 0..k {
                let p = (c..k)
                    .max_by(|&a, &b| m[a][c].abs().total_cmp(&m[b][c].abs()))
                    .unwrap();
                if m[p][c] == 0.0 {
                    return 0.0;
                }
                if p != c {
                    m.swap(p, c);
                    det = -det;
                }
                det *= m[c][c];
                for r in c + 1..k {
                    let f = m[r][c] / m[c][c];
                    for j in c..k {
                        m[r][j] -= f * m[c][j];
                    }
                }
            }
            det
        }
    }
}

/// Minor `det(M[rows, cols])` for index masks of equal size.
pub(crate) fn minor(m: &Mat6, rows: u8, cols: u8) -> f64 {
    let k = basis::degree_of(rows);
    debug_assert_eq!(k, basis::degree_of(cols));
    let mut buf = [[0.0; DIM]; DIM];
    for (r, i) in basis::indices(rows).enumerate() {
        for (c, j) in basis::indices(cols).enumerate() {
            buf[r][c] = m[(i, j)];
        }
    }
    small_det(&mut buf, k)
}
