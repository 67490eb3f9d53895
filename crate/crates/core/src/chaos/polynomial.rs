use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

/// Exponents of a monomial `prod_k z_k^{a_k} zbar_k^{b_k}`.
///
/// Stored as one vector of length `2n`: the `z` exponents followed by the
/// `zbar` exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Box<[u16]>);

impl Monomial {
    pub fn new(z: &[u16], zbar: &[u16]) -> Self {
        assert_eq!(
            z.len(),
            zbar.len(),
            "z and zbar exponent vectors must have equal length"
        );
        Monomial(z.iter().chain(zbar).copied().collect())
    }

    pub fn one(n: usize) -> Self {
        Monomial(vec![0; 2 * n].into_boxed_slice())
    }

    pub fn cells(&self) -> usize {
        self.0.len() / 2
    }

    pub fn z(&self) -> &[u16] {
        &self.0[..self.cells()]
    }

    pub fn zbar(&self) -> &[u16] {
        &self.0[self.cells()..]
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub(crate) fn raw(&self) -> &[u16] {
        &self.0
    }

    fn times(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    fn conj(&self) -> Monomial {
        Monomial::new(self.zbar(), self.z())
    }
}

/// Sparse polynomial in `z_1..z_n` and their conjugates with complex
/// coefficients. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct ChaosPolynomial {
    n: usize,
    terms: BTreeMap<Monomial, Complex64>,
}

impl ChaosPolynomial {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Complex64, n: usize) -> Self {
        Self::from_terms(n, [(Monomial::one(n), c)])
    }

    /// The coordinate `z_k`.
    pub fn coordinate(k: usize, n: usize) -> Self {
        let mut z = vec![0; n];
        z[k] = 1;
        Self::from_terms(n, [(Monomial::new(&z, &vec![0; n]), Complex64::new(1.0, 0.0))])
    }

    /// Builds from terms; repeated monomials accumulate.
    pub fn from_terms<I>(n: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Complex64)>,
    {
        let mut acc: HashMap<Monomial, Complex64> = HashMap::new();
        for (m, c) in terms {
            assert_eq!(
                m.cells(),
                n,
                "monomial over {} cells in a polynomial over {n}",
                m.cells()
            );
            *acc.entry(m).or_default() += c;
        }
        Self::from_accumulator(n, acc)
    }

    fn from_accumulator(n: usize, acc: HashMap<Monomial, Complex64>) -> Self {
        Self {
            n,
            terms: acc
                .into_iter()
                .filter(|(_, c)| *c != Complex64::new(0.0, 0.0))
                .collect(),
        }
    }

    pub fn cells(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Complex64)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Complex64 {
        self.terms.get(m).copied().unwrap_or_default()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficient deviation from `other`.
    pub fn max_deviation(&self, other: &ChaosPolynomial) -> f64 {
        self.assert_same_cells(other);
        self.terms
            .keys()
            .chain(other.terms.keys())
            .map(|m| (self.coeff(m) - other.coeff(m)).norm())
            .fold(0.0, f64::max)
    }

    /// [`max_deviation`](Self::max_deviation) divided by the largest
    /// coefficient modulus on either side; zero when both are zero.
    pub fn relative_deviation(&self, other: &ChaosPolynomial) -> f64 {
        let scale = self.max_abs_coeff().max(other.max_abs_coeff());
        let dev = self.max_deviation(other);
        if scale == 0.0 {
            dev
        } else {
            dev / scale
        }
    }

    pub fn scale(&self, c: Complex64) -> ChaosPolynomial {
        Self::from_terms(self.n, self.terms.iter().map(|(m, v)| (m.clone(), v * c)))
    }

    /// Complex conjugate: swaps `z` and `zbar` exponents and conjugates
    /// coefficients.
    pub fn conj(&self) -> ChaosPolynomial {
        Self {
            n: self.n,
            terms: self.terms.iter().map(|(m, c)| (m.conj(), c.conj())).collect(),
        }
    }

    /// `|self|^2 = self * conj(self)`.
    pub fn modulus_squared(&self) -> ChaosPolynomial {
        self * &self.conj()
    }

    pub fn pow(&self, k: u32) -> ChaosPolynomial {
        let mut acc = ChaosPolynomial::constant(Complex64::new(1.0, 0.0), self.n);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Evaluates at `z` (conjugates taken internally).
    pub fn evaluate(&self, z: &[Complex64]) -> Complex64 {
        assert_eq!(z.len(), self.n);
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut v = *c;
                for (k, zk) in z.iter().enumerate() {
                    let (a, b) = (m.z()[k], m.zbar()[k]);
                    if a > 0 {
                        v *= zk.powu(a as u32);
                    }
                    if b > 0 {
                        v *= zk.conj().powu(b as u32);
                    }
                }
                v
            })
            .sum()
    }

    /// Precomputes a flat layout for repeated evaluation.
    pub fn evaluator(&self) -> Evaluator {
        let max_exp = self
            .terms
            .keys()
            .flat_map(|m| m.raw().iter().copied())
            .max()
            .unwrap_or(0) as usize;
        Evaluator {
            n: self.n,
            max_exp,
            coeffs: self.terms.values().copied().collect(),
            exponents: self
                .terms
                .keys()
                .flat_map(|m| m.raw().iter().map(|&e| e as usize))
                .collect(),
        }
    }

    fn assert_same_cells(&self, other: &ChaosPolynomial) {
        assert_eq!(self.n, other.n, "polynomials over {} and {} cells", self.n, other.n);
    }
}

impl Add for &ChaosPolynomial {
    type Output = ChaosPolynomial;

    fn add(self, rhs: &ChaosPolynomial) -> ChaosPolynomial {
        self.assert_same_cells(rhs);
        ChaosPolynomial::from_terms(
            self.n,
            self.terms.iter().chain(rhs.terms.iter()).map(|(m, c)| (m.clone(), *c)),
        )
    }
}

impl Sub for &ChaosPolynomial {
    type Output = ChaosPolynomial;

    fn sub(self, rhs: &ChaosPolynomial) -> ChaosPolynomial {
        self + &(-rhs)
    }
}

impl Neg for &ChaosPolynomial {
    type Output = ChaosPolynomial;

    fn neg(self) -> ChaosPolynomial {
        ChaosPolynomial {
            n: self.n,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &ChaosPolynomial {
    type Output = ChaosPolynomial;

    fn mul(self, rhs: &ChaosPolynomial) -> ChaosPolynomial {
        self.assert_same_cells(rhs);
        let mut acc: HashMap<Monomial, Complex64> = HashMap::with_capacity(self.len() * rhs.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                *acc.entry(m1.times(m2)).or_default() += c1 * c2;
            }
        }
        ChaosPolynomial::from_accumulator(self.n, acc)
    }
}

impl fmt::Display for Monomial {
    /// `z1^2 zb2`, with cells numbered from 1; `1` for the empty monomial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut factors = Vec::new();
        for (prefix, exps) in [("z", self.z()), ("zb", self.zbar())] {
            for (k, &e) in exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(format!("{prefix}{}", k + 1)),
                    _ => factors.push(format!("{prefix}{}^{e}", k + 1)),
                }
            }
        }
        if factors.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", factors.join(" "))
        }
    }
}

impl fmt::Display for ChaosPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if c.im == 0.0 {
                write!(f, "{}", c.re)?;
            } else {
                write!(f, "({c})")?;
            }
            if m.degree() > 0 {
                write!(f, " {m}")?;
            }
        }
        Ok(())
    }
}

/// Flattened polynomial for fast repeated evaluation.
#[derive(Debug, Clone)]
pub struct Evaluator {
    n: usize,
    max_exp: usize,
    coeffs: Vec<Complex64>,
    exponents: Vec<usize>,
}

impl Evaluator {
    /// Evaluates at `z`, reusing `powers` as scratch space.
    pub fn evaluate(&self, z: &[Complex64], powers: &mut Vec<Complex64>) -> Complex64 {
        debug_assert_eq!(z.len(), self.n);
        let width = self.max_exp + 1;
        powers.clear();
        powers.resize(2 * self.n * width, Complex64::new(1.0, 0.0));
        for (k, zk) in z.iter().enumerate() {
            let zb = zk.conj();
            for e in 1..width {
                powers[k * width + e] = powers[k * width + e - 1] * zk;
                powers[(self.n + k) * width + e] = powers[(self.n + k) * width + e - 1] * zb;
            }
        }
        let mut total = Complex64::new(0.0, 0.0);
        for (t, c) in self.coeffs.iter().enumerate() {
            let exps = &self.exponents[t * 2 * self.n..(t + 1) * 2 * self.n];
            let mut v = *c;
            for (slot, &e) in exps.iter().enumerate() {
                if e > 0 {
                    v *= powers[slot * width + e];
                }
            }
            total += v;
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display() {
        let z = ChaosPolynomial::coordinate(0, 2);
        let p = &(&z * &z.conj()) - &ChaosPolynomial::constant(Complex64::new(1.0, 0.0), 2);
        assert_eq!(p.to_string(), "-1 + 1 z1 zb1");
        assert_eq!(ChaosPolynomial::zero(1).to_string(), "0");
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn ring_operations() {
        let z1 = ChaosPolynomial::coordinate(0, 2);
        let z2 = ChaosPolynomial::coordinate(1, 2);
        let p = &(&z1 * &z2.conj()) + &ChaosPolynomial::constant(c(0.0, 2.0), 2);
        assert_eq!(p.len(), 2);
        assert_eq!(p.coeff(&Monomial::new(&[1, 0], &[0, 1])), c(1.0, 0.0));
        let q = p.conj();
        assert_eq!(q.coeff(&Monomial::new(&[0, 1], &[1, 0])), c(1.0, 0.0));
        assert_eq!(q.coeff(&Monomial::one(2)), c(0.0, -2.0));
        assert!((&p - &p).is_empty());
        assert_eq!(p.pow(0), ChaosPolynomial::constant(c(1.0, 0.0), 2));
        assert_eq!(p.pow(2), &p * &p);
        assert_eq!(p.degree(), 2);
    }

    #[test]
    fn modulus_squared_of_coordinate() {
        let z = ChaosPolynomial::coordinate(0, 1);
        let m = z.modulus_squared();
        assert_eq!(m.len(), 1);
        assert_eq!(m.coeff(&Monomial::new(&[1], &[1])), c(1.0, 0.0));
    }

    #[test]
    fn evaluation_paths_agree() {
        let z1 = ChaosPolynomial::coordinate(0, 2);
        let z2 = ChaosPolynomial::coordinate(1, 2);
        let p = &(&(&z1 * &z1) * &z2.conj()) - &(&z2 * &ChaosPolynomial::constant(c(1.5, -0.5), 2));
        let pt = [c(0.3, -0.7), c(-1.1, 0.2)];
        let direct = pt[0] * pt[0] * pt[1].conj() - pt[1] * c(1.5, -0.5);
        assert!((p.evaluate(&pt) - direct).norm() < 1e-14);
        let mut scratch = Vec::new();
        assert!((p.evaluator().evaluate(&pt, &mut scratch) - direct).norm() < 1e-14);
        let zero = ChaosPolynomial::zero(2);
        assert_eq!(zero.evaluator().evaluate(&pt, &mut scratch), c(0.0, 0.0));
    }

    #[test]
    fn deviations() {
        let a = ChaosPolynomial::constant(c(2.0, 0.0), 1);
        let b = ChaosPolynomial::constant(c(2.0, 1e-3), 1);
        assert!((a.max_deviation(&b) - 1e-3).abs() < 1e-15);
        assert!((a.relative_deviation(&b) - 1e-3 / b.max_abs_coeff()).abs() < 1e-15);
        assert_eq!(
            ChaosPolynomial::zero(1).relative_deviation(&ChaosPolynomial::zero(1)),
            0.0
        );
    }
}
