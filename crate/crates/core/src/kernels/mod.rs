//! Kernel tensors over a discretized control measure.
//!
//! A kernel of order `(p, q)` on `n` cells is a dense complex tensor with
//! `p` unbarred slots (integrated against the Gaussian measure) followed by
//! `q` barred slots (integrated against its conjugate). Coefficients are
//! stored in the orthonormal cell basis `e_k = 1_{E_k} / sqrt(mu(E_k))`, so
//! norms, inner products and contractions reduce to index algebra with no
//! measure weights. Use [`Kernel::from_indicator`] to ingest coefficients
//! written against raw cell indicators.
//!
//! Slot `0` is the most significant digit of the flat layout.

mod contract;
mod measure;
mod symmetrize;

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{ChaosError, Result};
use crate::numeric::CompensatedSum;

pub use contract::ContractionSpec;
pub use measure::DiscreteMeasure;

/// Hard cap on `p + q` for dense storage.
pub const MAX_ORDER: usize = 8;
/// Hard cap on the number of cells for dense storage.
pub const MAX_CELLS: usize = 8;

/// Order and cell-count limits. [`Caps::HARD`] is what every kernel
/// constructor enforces; front-ends may tighten it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Caps {
    pub max_order: usize,
    pub max_cells: usize,
}

impl Caps {
    pub const HARD: Caps = Caps {
        max_order: MAX_ORDER,
        max_cells: MAX_CELLS,
    };

    pub fn new(max_order: usize, max_cells: usize) -> Result<Self> {
        if max_order > MAX_ORDER || max_cells > MAX_CELLS || max_cells == 0 {
            return Err(ChaosError::InvalidKernel(format!(
                "caps must satisfy order <= {MAX_ORDER} and 1 <= cells <= {MAX_CELLS}, got ({max_order}, {max_cells})"
            )));
        }
        Ok(Self { max_order, max_cells })
    }

    pub fn check(&self, p: usize, q: usize, n: usize) -> Result<()> {
        if p + q > self.max_order || n > self.max_cells {
            return Err(ChaosError::CapExceeded {
                p,
                q,
                n,
                max_order: self.max_order,
                max_cells: self.max_cells,
            });
        }
        Ok(())
    }
}

impl Default for Caps {
    fn default() -> Self {
        Caps::HARD
    }
}

/// Dense complex kernel of order `(p, q)` on `n` cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    p: usize,
    q: usize,
    n: usize,
    coeffs: Vec<Complex64>,
}

impl Kernel {
    /// The zero kernel.
    pub fn zeros(p: usize, q: usize, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(ChaosError::InvalidKernel("cell count must be at least 1".into()));
        }
        Caps::HARD.check(p, q, n)?;
        Ok(Self {
            p,
            q,
            n,
            coeffs: vec![Complex64::new(0.0, 0.0); n.pow((p + q) as u32)],
        })
    }

    pub fn from_dense(p: usize, q: usize, n: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        let mut k = Self::zeros(p, q, n)?;
        if coeffs.len() != k.coeffs.len() {
            return Err(ChaosError::ShapeMismatch(format!(
                "order ({p},{q}) on {n} cells needs {} coefficients, got {}",
                k.coeffs.len(),
                coeffs.len()
            )));
        }
        k.coeffs = coeffs;
        Ok(k)
    }

    /// Builds a kernel from sparse `(multi-index, value)` pairs in
    /// orthonormal coordinates. Repeated indices accumulate.
    pub fn from_entries<I>(p: usize, q: usize, n: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, Complex64)>,
    {
        let mut k = Self::zeros(p, q, n)?;
        for (idx, value) in entries {
            let flat = k.flat_index(&idx)?;
            k.coeffs[flat] += value;
        }
        Ok(k)
    }

    /// Builds a kernel from coefficients written against the raw cell
    /// indicators `1_{E_{i_1} x ... x E_{j_q}}`, converting each entry to the
    /// orthonormal basis by multiplying with the product of `sqrt(mu)` over
    /// its slots.
    pub fn from_indicator<I>(p: usize, q: usize, measure: &DiscreteMeasure, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, Complex64)>,
    {
        let n = measure.cells();
        let mut k = Self::zeros(p, q, n)?;
        for (idx, value) in entries {
            let flat = k.flat_index(&idx)?;
            let weight: f64 = idx.iter().map(|&c| measure.mass(c).sqrt()).product();
            k.coeffs[flat] += value * weight;
        }
        Ok(k)
    }

    /// Inverse of [`Kernel::from_indicator`]: dense coefficients against raw
    /// cell indicators.
    pub fn to_indicator(&self, measure: &DiscreteMeasure) -> Result<Vec<Complex64>> {
        if measure.cells() != self.n {
            return Err(ChaosError::ShapeMismatch(format!(
                "measure has {} cells, kernel has {}",
                measure.cells(),
                self.n
            )));
        }
        let mut digits = vec![0usize; self.rank()];
        Ok(self
            .coeffs
            .iter()
            .enumerate()
            .map(|(flat, c)| {
                self.decode_into(flat, &mut digits);
                let weight: f64 = digits.iter().map(|&d| measure.mass(d).sqrt()).product();
                c / weight
            })
            .collect())
    }

    /// The `(0, 0)` kernel holding the constant `c`.
    pub fn scalar(c: Complex64, n: usize) -> Result<Self> {
        Self::from_dense(0, 0, n, vec![c])
    }

    /// The elementary tensor `e_{idx_1} x ... x e_{idx_{p+q}}` scaled by `c`.
    pub fn elementary(p: usize, q: usize, n: usize, idx: &[usize], c: Complex64) -> Result<Self> {
        Self::from_entries(p, q, n, [(idx.to_vec(), c)])
    }

    /// `(p, q)` order.
    pub fn order(&self) -> (usize, usize) {
        (self.p, self.q)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn cells(&self) -> usize {
        self.n
    }

    /// Total number of slots, `p + q`.
    pub fn rank(&self) -> usize {
        self.p + self.q
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn get(&self, idx: &[usize]) -> Result<Complex64> {
        Ok(self.coeffs[self.flat_index(idx)?])
    }

    pub fn set(&mut self, idx: &[usize], value: Complex64) -> Result<()> {
        let flat = self.flat_index(idx)?;
        self.coeffs[flat] = value;
        Ok(())
    }

    pub fn flat_index(&self, idx: &[usize]) -> Result<usize> {
        if idx.len() != self.rank() {
            return Err(ChaosError::ShapeMismatch(format!(
                "multi-index of length {} for a kernel of order ({},{})",
                idx.len(),
                self.p,
                self.q
            )));
        }
        let mut flat = 0;
        for &d in idx {
            if d >= self.n {
                return Err(ChaosError::ShapeMismatch(format!(
                    "cell index {d} out of range for {} cells",
                    self.n
                )));
            }
            flat = flat * self.n + d;
        }
        Ok(flat)
    }

    /// Writes the digits of flat index `flat` into `digits` (length `rank`).
    pub(crate) fn decode_into(&self, mut flat: usize, digits: &mut [usize]) {
        for slot in (0..digits.len()).rev() {
            digits[slot] = flat % self.n;
            flat /= self.n;
        }
    }

    /// Iterates `(multi-index, coefficient)` over the nonzero entries.
    pub fn nonzero_entries(&self) -> impl Iterator<Item = (Vec<usize>, Complex64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != Complex64::new(0.0, 0.0))
            .map(move |(flat, c)| {
                let mut digits = vec![0; self.rank()];
                self.decode_into(flat, &mut digits);
                (digits, *c)
            })
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| c.norm_sqr())
            .collect::<CompensatedSum>()
            .value()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `<self, other> = sum self_k * conj(other_k)`, conjugate-linear in `other`.
    pub fn inner(&self, other: &Kernel) -> Result<Complex64> {
        self.same_shape(other)?;
        let mut re = CompensatedSum::new();
        let mut im = CompensatedSum::new();
        for (a, b) in self.coeffs.iter().zip(&other.coeffs) {
            let t = a * b.conj();
            re.add(t.re);
            im.add(t.im);
        }
        Ok(Complex64::new(re.value(), im.value()))
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficient-wise deviation between two equally shaped kernels.
    pub fn max_deviation(&self, other: &Kernel) -> Result<f64> {
        self.same_shape(other)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == Complex64::new(0.0, 0.0))
    }

    pub fn scale(&self, c: Complex64) -> Kernel {
        Kernel {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
            ..self.clone()
        }
    }

    /// `self + other`, or a shape error.
    pub fn try_add(&self, other: &Kernel) -> Result<Kernel> {
        self.same_shape(other)?;
        Ok(Kernel {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
            ..self.clone()
        })
    }

    pub fn try_sub(&self, other: &Kernel) -> Result<Kernel> {
        self.try_add(&-other)
    }

    fn same_shape(&self, other: &Kernel) -> Result<()> {
        if self.order() != other.order() || self.n != other.n {
            return Err(ChaosError::ShapeMismatch(format!(
                "order ({},{}) on {} cells vs order ({},{}) on {} cells",
                self.p, self.q, self.n, other.p, other.q, other.n
            )));
        }
        Ok(())
    }

    /// Reversed complex conjugate: the `(q, p)` kernel
    /// `h(j-block; i-block) = conj(f(i-block; j-block))`.
    pub fn reversed_conjugate(&self) -> Kernel {
        let mut out = Kernel {
            p: self.q,
            q: self.p,
            n: self.n,
            coeffs: vec![Complex64::new(0.0, 0.0); self.coeffs.len()],
        };
        let rank = self.rank();
        let mut digits = vec![0usize; rank];
        let mut swapped = vec![0usize; rank];
        for (flat, c) in self.coeffs.iter().enumerate() {
            self.decode_into(flat, &mut digits);
            swapped[..self.q].copy_from_slice(&digits[self.p..]);
            swapped[self.q..].copy_from_slice(&digits[..self.p]);
            let target = swapped.iter().fold(0, |acc, &d| acc * self.n + d);
            out.coeffs[target] = c.conj();
        }
        out
    }
}

impl Add for &Kernel {
    type Output = Kernel;

    /// Panics on shape mismatch; use [`Kernel::try_add`] for a checked sum.
    fn add(self, rhs: &Kernel) -> Kernel {
        self.try_add(rhs).expect("kernel shapes must agree")
    }
}

impl Sub for &Kernel {
    type Output = Kernel;

    fn sub(self, rhs: &Kernel) -> Kernel {
        self.try_sub(rhs).expect("kernel shapes must agree")
    }
}

impl Neg for &Kernel {
    type Output = Kernel;

    fn neg(self) -> Kernel {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul<Complex64> for &Kernel {
    type Output = Kernel;

    fn mul(self, rhs: Complex64) -> Kernel {
        self.scale(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn dense_storage_has_n_pow_rank_entries() {
        let k = Kernel::zeros(2, 1, 3).unwrap();
        assert_eq!(k.coeffs().len(), 27);
        let s = Kernel::zeros(0, 0, 5).unwrap();
        assert_eq!(s.coeffs().len(), 1);
    }

    #[test]
    fn caps_are_enforced_at_construction() {
        assert!(matches!(Kernel::zeros(5, 4, 2), Err(ChaosError::CapExceeded { .. })));
        assert!(matches!(Kernel::zeros(1, 1, 9), Err(ChaosError::CapExceeded { .. })));
        assert!(Kernel::zeros(4, 4, 2).is_ok());
        assert!(Kernel::zeros(1, 0, 0).is_err());
        let tight = Caps::new(4, 3).unwrap();
        assert!(tight.check(2, 2, 3).is_ok());
        assert!(tight.check(3, 2, 3).is_err());
        assert!(Caps::new(9, 3).is_err());
    }

    #[test]
    fn flat_index_rejects_bad_indices() {
        let k = Kernel::zeros(1, 1, 2).unwrap();
        assert!(k.flat_index(&[0]).is_err());
        assert!(k.flat_index(&[0, 2]).is_err());
        assert_eq!(k.flat_index(&[1, 0]).unwrap(), 2);
    }

    #[test]
    fn indicator_conversion_multiplies_by_root_masses() {
        let mu = DiscreteMeasure::new(vec![4.0, 0.25]).unwrap();
        let k = Kernel::from_indicator(1, 1, &mu, [(vec![0, 1], c(1.0, 0.0))]).unwrap();
        assert!((k.get(&[0, 1]).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        let k = Kernel::from_indicator(2, 0, &mu, [(vec![0, 0], c(0.0, 1.0))]).unwrap();
        assert!((k.get(&[0, 0]).unwrap() - c(0.0, 4.0)).norm() < 1e-15);
        let back = k.to_indicator(&mu).unwrap();
        assert!((back[0] - c(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn reversed_conjugate_unfolds_definition() {
        let z = c(2.0, -3.0);
        let f = Kernel::elementary(1, 1, 3, &[0, 1], z).unwrap();
        let h = f.reversed_conjugate();
        assert_eq!(h.order(), (1, 1));
        assert_eq!(h.get(&[1, 0]).unwrap(), z.conj());
        assert_eq!(h.get(&[0, 1]).unwrap(), c(0.0, 0.0));

        let g = Kernel::elementary(2, 1, 3, &[0, 2, 1], z).unwrap();
        let h = g.reversed_conjugate();
        assert_eq!(h.order(), (1, 2));
        assert_eq!(h.get(&[1, 0, 2]).unwrap(), z.conj());
        assert_eq!(h.reversed_conjugate(), g);
    }

    #[test]
    fn reversed_conjugate_fixes_real_symmetric_layout() {
        let f = Kernel::from_entries(
            1,
            1,
            2,
            [
                (vec![0, 0], c(1.0, 0.0)),
                (vec![0, 1], c(0.5, 0.0)),
                (vec![1, 0], c(0.5, 0.0)),
            ],
        )
        .unwrap();
        assert_eq!(f.reversed_conjugate(), f);
    }

    #[test]
    fn norms_and_inner_products() {
        let f = Kernel::elementary(2, 0, 3, &[0, 1], c(1.0, 0.0)).unwrap();
        let g = Kernel::elementary(2, 0, 3, &[1, 0], c(1.0, 0.0)).unwrap();
        assert_eq!(f.norm(), 1.0);
        assert_eq!(f.inner(&f).unwrap(), c(f.norm_sqr(), 0.0));
        assert_eq!(f.inner(&g).unwrap(), c(0.0, 0.0));
        let fi = f.scale(c(0.0, 2.0));
        assert_eq!(f.inner(&fi).unwrap(), c(0.0, -2.0));
        assert!(f.inner(&Kernel::zeros(1, 1, 3).unwrap()).is_err());
    }

    #[test]
    fn linear_operations() {
        let f = Kernel::elementary(1, 0, 2, &[0], c(1.0, 1.0)).unwrap();
        let g = Kernel::elementary(1, 0, 2, &[1], c(2.0, 0.0)).unwrap();
        let s = &f + &g;
        assert_eq!(s.get(&[0]).unwrap(), c(1.0, 1.0));
        assert_eq!(s.get(&[1]).unwrap(), c(2.0, 0.0));
        assert!((&s - &s).is_zero());
        assert_eq!((&f * c(0.0, 1.0)).get(&[0]).unwrap(), c(-1.0, 1.0));
        assert!(f.try_add(&Kernel::zeros(0, 1, 2).unwrap()).is_err());
    }
}
