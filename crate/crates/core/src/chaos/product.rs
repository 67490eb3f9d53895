use num_complex::Complex64;
use serde::Serialize;

use super::expand::expand;
use super::polynomial::ChaosPolynomial;
use super::report::VerificationReport;
use crate::error::{ChaosError, Result};
use crate::kernels::{Caps, ContractionSpec, Kernel};
use crate::numeric::{binomial, factorial};

/// One term `weight * I_{order}(kernel)` of a product expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductTerm {
    pub spec: ContractionSpec,
    pub weight: f64,
    pub order: (usize, usize),
    pub kernel: Kernel,
}

/// Formal right-hand side of a product formula: the terms live in different
/// chaoses, so they are kept separate rather than summed into one kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductExpansion {
    pub left_order: (usize, usize),
    pub right_order: (usize, usize),
    pub conjugated: bool,
    pub terms: Vec<ProductTerm>,
}

/// Summary of a term without its kernel, for reports.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TermSummary {
    pub i: usize,
    pub j: usize,
    pub weight: f64,
    pub order: (usize, usize),
    pub kernel_norm: f64,
}

impl ProductExpansion {
    /// `sum weight * expand(kernel)`.
    pub fn expand(&self) -> Result<ChaosPolynomial> {
        let n = self.terms.first().map_or(1, |t| t.kernel.cells());
        let mut acc = ChaosPolynomial::zero(n);
        for t in &self.terms {
            acc = &acc + &expand(&t.kernel)?.scale(Complex64::new(t.weight, 0.0));
        }
        Ok(acc)
    }

    pub fn summary(&self) -> Vec<TermSummary> {
        self.terms
            .iter()
            .map(|t| TermSummary {
                i: t.spec.i,
                j: t.spec.j,
                weight: t.weight,
                order: t.order,
                kernel_norm: t.kernel.norm(),
            })
            .collect()
    }
}

fn pairing_weight(x: usize, y: usize, u: usize, v: usize, i: usize, j: usize) -> f64 {
    (binomial(x, i) * binomial(y, i) * binomial(u, j) * binomial(v, j) * factorial(i) * factorial(j)) as f64
}

fn check_combined(f: &Kernel, g: &Kernel) -> Result<()> {
    if f.cells() != g.cells() {
        return Err(ChaosError::ShapeMismatch(format!(
            "kernels on {} and {} cells",
            f.cells(),
            g.cells()
        )));
    }
    let (a, b) = f.order();
    let (c, d) = g.order();
    Caps::HARD.check(a + c, b + d, f.cells())
}

/// Product formula for `I_{a,b}(f) I_{c,d}(g)`:
///
/// ```text
/// sum_{i <= a^d, j <= b^c} C(a,i) C(d,i) C(b,j) C(c,j) i! j!
///     I_{a+c-i-j, b+d-i-j}(f (x)_{i,j} g)
/// ```
///
/// The identity is stated for Ito-symmetric kernels, so both inputs are
/// symmetrized first; this does not change either integral.
pub fn product(f: &Kernel, g: &Kernel) -> Result<ProductExpansion> {
    check_combined(f, g)?;
    let (a, b) = f.order();
    let (c, d) = g.order();
    let fs = f.ito_symmetrize();
    let gs = g.ito_symmetrize();
    let mut terms = Vec::new();
    for i in 0..=a.min(d) {
        for j in 0..=b.min(c) {
            let spec = ContractionSpec::new(i, j);
            terms.push(ProductTerm {
                spec,
                weight: pairing_weight(a, d, b, c, i, j),
                order: (a + c - i - j, b + d - i - j),
                kernel: fs.contract(&gs, spec)?,
            });
        }
    }
    Ok(ProductExpansion {
        left_order: (a, b),
        right_order: (c, d),
        conjugated: false,
        terms,
    })
}

/// Product formula for `I_{a,b}(f) conj(I_{c,d}(g))` through the reversed
/// conjugate `h` of `g`:
///
/// ```text
/// sum_{i <= a^c, j <= b^d} C(a,i) C(c,i) C(b,j) C(d,j) i! j!
///     I_{a+d-i-j, b+c-i-j}(f (x)_{i,j} h)
/// ```
pub fn product_conjugated(f: &Kernel, g: &Kernel) -> Result<ProductExpansion> {
    check_combined(f, g)?;
    let (a, b) = f.order();
    let (c, d) = g.order();
    let fs = f.ito_symmetrize();
    let h = g.ito_symmetrize().reversed_conjugate();
    let mut terms = Vec::new();
    for i in 0..=a.min(c) {
        for j in 0..=b.min(d) {
            let spec = ContractionSpec::new(i, j);
            terms.push(ProductTerm {
                spec,
                weight: pairing_weight(a, c, b, d, i, j),
                order: (a + d - i - j, b + c - i - j),
                kernel: fs.contract(&h, spec)?,
            });
        }
    }
    Ok(ProductExpansion {
        left_order: (a, b),
        right_order: (c, d),
        conjugated: true,
        terms,
    })
}

/// Certifies the product formula: `expand(f) expand(g)` against the
/// expanded right-hand side, as a relative coefficient deviation.
pub fn certify_product(f: &Kernel, g: &Kernel, tolerance: f64) -> Result<VerificationReport> {
    certify(product(f, g)?, &expand(f)?, &expand(g)?, tolerance, 0.0)
}

/// Certifies the conjugated product formula against
/// `expand(f) conj(expand(g))`.
pub fn certify_product_conjugated(f: &Kernel, g: &Kernel, tolerance: f64) -> Result<VerificationReport> {
    certify(
        product_conjugated(f, g)?,
        &expand(f)?,
        &expand(g)?.conj(),
        tolerance,
        0.0,
    )
}

/// As [`certify_product`] / [`certify_product_conjugated`] but with
/// `perturbation` added to the weight of the first term, as a negative
/// control for the certification path.
pub fn certify_perturbed(
    f: &Kernel,
    g: &Kernel,
    conjugated: bool,
    tolerance: f64,
    perturbation: f64,
) -> Result<VerificationReport> {
    if conjugated {
        certify(
            product_conjugated(f, g)?,
            &expand(f)?,
            &expand(g)?.conj(),
            tolerance,
            perturbation,
        )
    } else {
        certify(product(f, g)?, &expand(f)?, &expand(g)?, tolerance, perturbation)
    }
}

fn certify(
    mut rhs: ProductExpansion,
    left: &ChaosPolynomial,
    right: &ChaosPolynomial,
    tolerance: f64,
    perturbation: f64,
) -> Result<VerificationReport> {
    if let Some(first) = rhs.terms.first_mut() {
        first.weight += perturbation;
    }
    let lhs = left * right;
    let expanded = rhs.expand()?;
    let residual = lhs.relative_deviation(&expanded);
    let identity = if rhs.conjugated {
        "product-conjugated"
    } else {
        "product"
    };
    let (a, b) = rhs.left_order;
    let (c, d) = rhs.right_order;
    Ok(VerificationReport::new(identity, residual, tolerance)
        .with("a", a)
        .with("b", b)
        .with("c", c)
        .with("d", d)
        .with("terms", rhs.terms.len())
        .with("lhs_max_coeff", lhs.max_abs_coeff()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chaos::polynomial::Monomial;

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn first_order_times_conjugate_direction() {
        // z1 * zb1 = (z1 zb1 - 1) + 1
        let f = Kernel::elementary(1, 0, 2, &[0], one()).unwrap();
        let g = Kernel::elementary(0, 1, 2, &[0], one()).unwrap();
        let rhs = product(&f, &g).unwrap();
        assert_eq!(rhs.terms.len(), 2);
        assert_eq!(rhs.terms[0].order, (1, 1));
        assert_eq!(rhs.terms[1].order, (0, 0));
        assert_eq!(rhs.terms[1].weight, 1.0);
        assert_eq!(rhs.terms[1].kernel.coeffs(), &[one()]);
        let expanded = rhs.expand().unwrap();
        assert_eq!(
            expanded,
            ChaosPolynomial::from_terms(2, [(Monomial::new(&[1, 0], &[1, 0]), one())])
        );
        assert!(certify_product(&f, &g, 1e-12).unwrap().pass);
    }

    #[test]
    fn same_direction_has_no_contractions() {
        let f = Kernel::elementary(1, 0, 2, &[0], one()).unwrap();
        let g = Kernel::elementary(1, 0, 2, &[1], one()).unwrap();
        let rhs = product(&f, &g).unwrap();
        assert_eq!(rhs.terms.len(), 1);
        assert_eq!(rhs.terms[0].order, (2, 0));
        assert_eq!(
            rhs.terms[0].kernel,
            Kernel::elementary(2, 0, 2, &[0, 1], one()).unwrap()
        );
    }

    #[test]
    fn conjugated_product_of_a_coordinate_with_itself() {
        let f = Kernel::elementary(1, 0, 1, &[0], one()).unwrap();
        let rhs = product_conjugated(&f, &f).unwrap();
        assert_eq!(rhs.terms.len(), 2);
        let lhs = ChaosPolynomial::coordinate(0, 1).modulus_squared();
        assert_eq!(rhs.expand().unwrap(), lhs);
    }

    #[test]
    fn conjugated_product_with_disjoint_supports() {
        let f = Kernel::elementary(1, 0, 2, &[0], one()).unwrap();
        let g = Kernel::elementary(0, 1, 2, &[1], one()).unwrap();
        let rhs = product_conjugated(&f, &g).unwrap();
        // a ^ c = 1 ^ 0, b ^ d = 0 ^ 1: only the tensor term exists.
        assert_eq!(rhs.terms.len(), 1);
        assert!(certify_product_conjugated(&f, &g, 1e-12).unwrap().pass);
    }

    #[test]
    fn perturbation_is_detected() {
        let f = Kernel::elementary(1, 1, 2, &[0, 1], one()).unwrap();
        let g = Kernel::elementary(1, 1, 2, &[1, 0], one()).unwrap();
        assert!(certify_perturbed(&f, &g, false, 1e-9, 0.0).unwrap().pass);
        assert!(!certify_perturbed(&f, &g, false, 1e-9, 1e-6).unwrap().pass);
    }

    #[test]
    fn combined_order_over_cap_is_rejected() {
        let f = Kernel::zeros(3, 2, 2).unwrap();
        let g = Kernel::zeros(2, 2, 2).unwrap();
        assert!(matches!(product(&f, &g), Err(ChaosError::CapExceeded { .. })));
        let g3 = Kernel::zeros(1, 0, 3).unwrap();
        assert!(matches!(product(&f, &g3), Err(ChaosError::ShapeMismatch(_))));
    }
}
