use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use super::basis::{self, BINOM, DIM, MAX_LEN};
use super::endo::Vector;
use crate::error::{Error, Result};

/// A degree-`k` alternating form on ℝ⁶ with dense coefficients over the
/// lexicographically ordered monomials `e^{i_1…i_k}`.
#[derive(Clone, Copy, PartialEq)]
pub struct KForm {
    degree: u8,
    coeffs: [f64; MAX_LEN],
}

impl KForm {
    /// The zero form of degree `k`.
    ///
    /// # Panics
    /// If `k > 6`.
    pub fn zero(k: usize) -> Self {
        assert!(k <= DIM, "form degree {k} is outside 0..=6");
        Self {
            degree: k as u8,
            coeffs: [0.0; MAX_LEN],
        }
    }

    pub fn zero_checked(k: usize) -> Result<Self> {
        if k > DIM {
            return Err(Error::InvalidDegree(k));
        }
        Ok(Self::zero(k))
    }

    pub fn scalar(c: f64) -> Self {
        let mut f = Self::zero(0);
        f.coeffs[0] = c;
        f
    }

    pub fn from_coeffs(k: usize, coeffs: &[f64]) -> Result<Self> {
        if k > DIM {
            return Err(Error::InvalidDegree(k));
        }
        if coeffs.len() != BINOM[k] {
            return Err(Error::DegreeMismatch {
                expected: BINOM[k],
                found: coeffs.len(),
            });
        }
        let mut f = Self::zero(k);
        f.coeffs[..coeffs.len()].copy_from_slice(coeffs);
        Ok(f)
    }

    /// `c · e^{i_1} ∧ … ∧ e^{i_k}` from 1-based indices in any order.
    /// Repeated indices give the zero form.
    pub fn monomial(c: f64, idx: &[usize]) -> Result<Self> {
        let k = idx.len();
        if k > DIM {
            return Err(Error::InvalidDegree(k));
        }
        let mut f = Self::zero(k);
        if idx.iter().any(|&i| i == 0 || i > DIM) {
            return Err(Error::Parse {
                input: format!("{idx:?}"),
                reason: "indices must lie in 1..=6".into(),
            });
        }
        let zero_based: Vec<usize> = idx.iter().map(|i| i - 1).collect();
        if let Some((mask, sign)) = basis::mask_of_tuple(&zero_based) {
            f.coeffs[basis::rank(mask)] = sign * c;
        }
        Ok(f)
    }

    /// The covector `e^i` (1-based).
    pub fn covector(i: usize) -> Self {
        Self::monomial(1.0, &[i]).expect("covector index in 1..=6")
    }

    /// A 1-form from its six components.
    pub fn from_covector(components: &Vector) -> Self {
        let mut f = Self::zero(1);
        f.coeffs[..DIM].copy_from_slice(components.as_slice());
        f
    }

    /// `c · e^{123456}`.
    pub fn top(c: f64) -> Self {
        let mut f = Self::zero(DIM);
        f.coeffs[0] = c;
        f
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.degree as usize
    }

    #[inline]
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs[..BINOM[self.degree()]]
    }

    #[inline]
    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        let n = BINOM[self.degree()];
        &mut self.coeffs[..n]
    }

    #[inline]
    pub(crate) fn coeff_of_mask(&self, mask: u8) -> f64 {
        debug_assert_eq!(basis::degree_of(mask), self.degree());
        self.coeffs[basis::rank(mask)]
    }

    #[inline]
    pub(crate) fn add_to_mask(&mut self, mask: u8, c: f64) {
        debug_assert_eq!(basis::degree_of(mask), self.degree());
        self.coeffs[basis::rank(mask)] += c;
    }

    /// Coefficient of `e^{i_1…i_k}` (1-based, any order, sign-adjusted).
    pub fn get(&self, idx: &[usize]) -> f64 {
        if idx.len() != self.degree() || idx.iter().any(|&i| i == 0 || i > DIM) {
            return 0.0;
        }
        let zero_based: Vec<usize> = idx.iter().map(|i| i - 1).collect();
        match basis::mask_of_tuple(&zero_based) {
            Some((mask, sign)) => sign * self.coeff_of_mask(mask),
            None => 0.0,
        }
    }

    /// Nonzero terms as (mask, coefficient) in storage order.
    pub(crate) fn mask_terms(&self) -> impl Iterator<Item = (u8, f64)> + '_ {
        basis::masks(self.degree())
            .iter()
            .zip(self.coeffs())
            .filter(|(_, &c)| c != 0.0)
            .map(|(&m, &c)| (m, c))
    }

    /// Nonzero terms as (1-based ascending indices, coefficient).
    pub fn terms(&self) -> Vec<(Vec<usize>, f64)> {
        self.mask_terms()
            .map(|(m, c)| (basis::indices(m).map(|i| i + 1).collect(), c))
            .collect()
    }

    /// Coefficient of `e^{123456}` for a top form.
    pub fn top_coeff(&self) -> f64 {
        debug_assert_eq!(self.degree(), DIM);
        self.coeffs[0]
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs().iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Euclidean norm of the coefficient vector (the metric-free norm).
    pub fn coeff_norm(&self) -> f64 {
        self.coeffs().iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self, eps: f64) -> bool {
        self.max_abs() <= eps
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = *self;
        out.coeffs_mut().iter_mut().for_each(|c| *c *= s);
        out
    }

    /// Exterior product.
    pub fn wedge(&self, other: &KForm) -> Result<KForm> {
        let k = self.degree() + other.degree();
        if k > DIM {
            return Err(Error::DegreeOverflow {
                lhs: self.degree(),
                rhs: other.degree(),
            });
        }
        Ok(self.wedge_unchecked(other))
    }

    pub(crate) fn wedge_unchecked(&self, other: &KForm) -> KForm {
        let mut out = KForm::zero(self.degree() + other.degree());
        for (ma, ca) in self.mask_terms() {
            for (mb, cb) in other.mask_terms() {
                let s = basis::wedge_sign(ma, mb);
                if s != 0.0 {
                    out.add_to_mask(ma | mb, s * ca * cb);
                }
            }
        }
        out
    }

    /// Interior product `ι_v a`, inserting `v` in the first slot.
    pub fn contract(&self, v: &Vector) -> Result<KForm> {
        if self.degree() == 0 {
            return Err(Error::ContractScalar);
        }
        let mut out = KForm::zero(self.degree() - 1);
        for (mask, c) in self.mask_terms() {
            for (slot, i) in basis::indices(mask).enumerate() {
                if v[i] == 0.0 {
                    continue;
                }
                let sign = if slot % 2 == 0 { 1.0 } else { -1.0 };
                out.add_to_mask(mask & !(1 << i), sign * v[i] * c);
            }
        }
        Ok(out)
    }

    /// `a(v_1, …, v_k)`.
    pub fn eval(&self, vectors: &[Vector]) -> f64 {
        let k = self.degree();
        assert_eq!(vectors.len(), k, "need exactly {k} vectors");
        if k == 0 {
            return self.coeffs[0];
        }
        let mut total = 0.0;
        let mut m = [[0.0; DIM]; DIM];
        for (mask, c) in self.mask_terms() {
            for (r, i) in basis::indices(mask).enumerate() {
                for (col, v) in vectors.iter().enumerate() {
                    m[r][col] = v[i];
                }
            }
            total += c * super::endo::small_det(&mut m, k);
        }
        total
    }

    /// `ω ∧ ω ∧ …` (`n` factors); `n = 0` gives the constant 1.
    pub fn power(&self, n: usize) -> Result<KForm> {
        let mut acc = KForm::scalar(1.0);
        for _ in 0..n {
            acc = acc.wedge(self)?;
        }
        Ok(acc)
    }
}

impl Default for KForm {
    fn default() -> Self {
        KForm::zero(0)
    }
}

impl Add for KForm {
    type Output = KForm;
    fn add(mut self, rhs: KForm) -> KForm {
        self += rhs;
        self
    }
}

impl AddAssign for KForm {
    fn add_assign(&mut self, rhs: KForm) {
        assert_eq!(self.degree, rhs.degree, "adding forms of different degree");
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *a += b;
        }
    }
}

impl Sub for KForm {
    type Output = KForm;
    fn sub(mut self, rhs: KForm) -> KForm {
        self -= rhs;
        self
    }
}

impl SubAssign for KForm {
    fn sub_assign(&mut self, rhs: KForm) {
        assert_eq!(
            self.degree, rhs.degree,
            "subtracting forms of different degree"
        );
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *a -= b;
        }
    }
}

impl Neg for KForm {
    type Output = KForm;
    fn neg(self) -> KForm {
        self.scale(-1.0)
    }
}

impl Mul<KForm> for f64 {
    type Output = KForm;
    fn mul(self, rhs: KForm) -> KForm {
        rhs.scale(self)
    }
}

impl fmt::Debug for KForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KForm<{}>({})", self.degree, self)
    }
}

impl fmt::Display for KForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (mask, c) in self.mask_terms() {
            let idx: String = basis::indices(mask)
                .map(|i| char::from(b'1' + i as u8))
                .collect();
            let sign = if c < 0.0 {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let mag = c.abs();
            if self.degree == 0 {
                write!(f, "{sign}{mag}")?;
            } else if (mag - 1.0).abs() < 1e-15 {
                write!(f, "{sign}e{idx}")?;
            } else {
                write!(f, "{sign}{mag}*e{idx}")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
