//! Exact expectations of polynomials in independent standard complex
//! Gaussian coordinates (`E z = 0`, `E z zbar = 1`, `E z^2 = 0`).
//!
//! Rotation invariance and independence give
//! `E[prod_k z_k^{a_k} zbar_k^{b_k}] = prod_k [a_k == b_k] a_k!`,
//! which is the ground truth every identity in this crate is checked
//! against.

use std::collections::HashMap;

use gauss_quad::GaussHermite;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::chaos::{ChaosPolynomial, Monomial, VerificationReport};
use crate::error::{ChaosError, Result};
use crate::numeric::{factorial_f64, CompensatedComplexSum, MAX_EXACT_FACTORIAL};

/// Exponent vectors of a monomial moment `E[prod_k z_k^{a_k} zbar_k^{b_k}]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentQuery {
    z: Vec<u32>,
    zbar: Vec<u32>,
}

impl MomentQuery {
    pub fn new(z: Vec<u32>, zbar: Vec<u32>) -> Result<Self> {
        if z.len() != zbar.len() {
            return Err(ChaosError::ShapeMismatch(format!(
                "moment query with {} z exponents and {} zbar exponents",
                z.len(),
                zbar.len()
            )));
        }
        Ok(Self { z, zbar })
    }

    pub fn z(&self) -> &[u32] {
        &self.z
    }

    pub fn zbar(&self) -> &[u32] {
        &self.zbar
    }
}

/// `E[prod_k z_k^{a_k} zbar_k^{b_k}]`.
pub fn monomial_expectation(q: &MomentQuery) -> f64 {
    moment_of(q.z.iter().zip(&q.zbar).map(|(a, b)| (*a as usize, *b as usize)))
}

fn moment_of(pairs: impl Iterator<Item = (usize, usize)>) -> f64 {
    let mut acc = 1.0;
    for (a, b) in pairs {
        if a != b {
            return 0.0;
        }
        acc *= factorial_f64(a);
    }
    acc
}

fn monomial_moment(m: &Monomial) -> f64 {
    moment_of(m.z().iter().zip(m.zbar()).map(|(a, b)| (*a as usize, *b as usize)))
}

/// `E[p]`, the linear extension of [`monomial_expectation`].
pub fn expectation(p: &ChaosPolynomial) -> Complex64 {
    p.terms()
        .filter_map(|(m, c)| {
            let e = monomial_moment(m);
            (e != 0.0).then(|| c * e)
        })
        .collect::<CompensatedComplexSum>()
        .value()
}

/// `E[p q]` without materializing the product polynomial. Terms of `q` are
/// bucketed by their `z - zbar` exponent difference, so each term of `p` only
/// meets the terms it can pair with.
pub fn expectation_of_product(p: &ChaosPolynomial, q: &ChaosPolynomial) -> Complex64 {
    assert_eq!(p.cells(), q.cells());
    let n = p.cells();
    let mut buckets: HashMap<Vec<i32>, Vec<(&Monomial, Complex64)>> = HashMap::new();
    for (m, c) in q.terms() {
        let key = m.z().iter().zip(m.zbar()).map(|(a, b)| *a as i32 - *b as i32).collect();
        buckets.entry(key).or_default().push((m, *c));
    }
    let mut sum = CompensatedComplexSum::new();
    let mut key = vec![0i32; n];
    for (m1, c1) in p.terms() {
        let (z1, zb1) = (m1.z(), m1.zbar());
        for k in 0..n {
            key[k] = zb1[k] as i32 - z1[k] as i32;
        }
        let Some(partners) = buckets.get(&key) else {
            continue;
        };
        for (m2, c2) in partners {
            let e: f64 = (0..n).map(|k| factorial_f64((z1[k] + m2.z()[k]) as usize)).product();
            sum.add(c1 * c2 * e);
        }
    }
    sum.value()
}

/// `E[p conj(q)]`.
pub fn inner(p: &ChaosPolynomial, q: &ChaosPolynomial) -> Complex64 {
    expectation_of_product(p, &q.conj())
}

/// `E|p|^2`.
pub fn second_moment(p: &ChaosPolynomial) -> f64 {
    inner(p, p).re
}

/// Largest per-coordinate exponent the factorial table supports.
pub const MAX_COORDINATE_EXPONENT: usize = MAX_EXACT_FACTORIAL;

/// Cross-checks [`monomial_expectation`] for a single coordinate against
/// tensor-product Gauss-Hermite quadrature of `z^a zbar^b` under the density
/// `exp(-|z|^2) / pi`, for all `a, b <= max_exponent`. The residual is the
/// worst relative error (absolute below unit magnitude).
pub fn quadrature_cross_check(max_exponent: u32, nodes: usize) -> VerificationReport {
    let rule = GaussHermite::new(nodes).expect("Gauss-Hermite rule needs at least two nodes");
    let pairs: Vec<(f64, f64)> = rule.iter().map(|(x, w)| (*x, *w)).collect();
    let mut worst: f64 = 0.0;
    for a in 0..=max_exponent {
        for b in 0..=max_exponent {
            let mut integral = CompensatedComplexSum::new();
            for &(x, wx) in &pairs {
                for &(y, wy) in &pairs {
                    let z = Complex64::new(x, y);
                    integral.add(z.powu(a) * z.conj().powu(b) * (wx * wy));
                }
            }
            let numeric = integral.value() / std::f64::consts::PI;
            let exact = monomial_expectation(&MomentQuery::new(vec![a], vec![b]).expect("equal lengths"));
            let err = (numeric - Complex64::new(exact, 0.0)).norm() / exact.abs().max(1.0);
            worst = worst.max(err);
        }
    }
    VerificationReport::new("oracle-quadrature", worst, 1e-8)
        .with("max_exponent", max_exponent as i64)
        .with("quadrature_nodes", nodes as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite::HermitePolynomial;

    fn q(z: &[u32], zb: &[u32]) -> MomentQuery {
        MomentQuery::new(z.to_vec(), zb.to_vec()).unwrap()
    }

    #[test]
    fn monomial_rule() {
        assert_eq!(monomial_expectation(&q(&[1], &[1])), 1.0);
        assert_eq!(monomial_expectation(&q(&[2], &[2])), 2.0);
        assert_eq!(monomial_expectation(&q(&[1, 0], &[0, 1])), 0.0);
        assert_eq!(monomial_expectation(&q(&[3, 2], &[3, 2])), 12.0);
        assert_eq!(monomial_expectation(&q(&[2], &[0])), 0.0);
        assert_eq!(monomial_expectation(&q(&[], &[])), 1.0);
        assert!(MomentQuery::new(vec![1], vec![]).is_err());
    }

    #[test]
    fn polynomial_expectations() {
        let z = ChaosPolynomial::coordinate(0, 1);
        let one = ChaosPolynomial::constant(Complex64::new(1.0, 0.0), 1);
        let centered = &z.modulus_squared() - &one;
        assert_eq!(expectation(&centered), Complex64::new(0.0, 0.0));
        // E (|z|^2 - 1)^2 = 2 - 2 + 1
        assert_eq!(expectation(&centered.modulus_squared()), Complex64::new(1.0, 0.0));
        assert_eq!(second_moment(&centered), 1.0);
        let c = Complex64::new(3.0, -4.0);
        assert_eq!(expectation(&ChaosPolynomial::constant(c, 3)), c);
    }

    #[test]
    fn product_expectation_matches_materialized_product() {
        let z1 = ChaosPolynomial::coordinate(0, 2);
        let z2 = ChaosPolynomial::coordinate(1, 2);
        let p = &(&z1 * &z2) + &ChaosPolynomial::constant(Complex64::new(0.5, 1.0), 2);
        let r = &(&z1.conj() * &z2.conj()) + &z1;
        let direct = expectation(&(&p * &r));
        let fused = expectation_of_product(&p, &r);
        assert!((direct - fused).norm() < 1e-15);
        assert_eq!(fused, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn conjugation_commutes_with_expectation() {
        let z1 = ChaosPolynomial::coordinate(0, 2);
        let p = &(&z1.pow(2) * &z1.conj().pow(2)).scale(Complex64::new(0.3, 0.4))
            + &ChaosPolynomial::constant(Complex64::new(0.0, 1.0), 2);
        assert_eq!(expectation(&p.conj()), expectation(&p).conj());
    }

    #[test]
    fn hermite_orthogonality_at_unit_variance() {
        for m in 0..=3u32 {
            for n in 0..=3u32 {
                for m2 in 0..=3u32 {
                    for n2 in 0..=3u32 {
                        let a = hermite_poly(m, n);
                        let b = hermite_poly(m2, n2);
                        let e = inner(&a, &b);
                        let expected = if (m, n) == (m2, n2) {
                            (factorial_f64(m as usize) * factorial_f64(n as usize), 0.0)
                        } else {
                            (0.0, 0.0)
                        };
                        assert!((e - Complex64::new(expected.0, expected.1)).norm() < 1e-12);
                    }
                }
            }
        }
    }

    fn hermite_poly(m: u32, n: u32) -> ChaosPolynomial {
        let h = HermitePolynomial::build(m, n, 1.0);
        ChaosPolynomial::from_terms(
            1,
            h.terms()
                .into_iter()
                .map(|((a, b), c)| (Monomial::new(&[a as u16], &[b as u16]), Complex64::new(c, 0.0))),
        )
    }

    #[test]
    fn quadrature_agrees_with_monomial_rule() {
        let report = quadrature_cross_check(4, 20);
        assert!(report.pass, "residual {}", report.residual);
    }
}
