use num_complex::Complex64;

use super::expand::expand;
use super::report::VerificationReport;
use super::EXACT_TOLERANCE;
use crate::error::{ChaosError, Result};
use crate::kernels::Kernel;
use crate::numeric::{factorial_f64, scaled_difference};
use crate::oracle;

/// Conjugating an integral reverses its kernel:
/// `conj(expand(f)) == expand(reversed_conjugate(f))`, residual as the
/// largest coefficient deviation.
pub fn integral_conjugate(f: &Kernel) -> Result<VerificationReport> {
    let lhs = expand(f)?.conj();
    let rhs = expand(&f.reversed_conjugate())?;
    let (p, q) = f.order();
    Ok(
        VerificationReport::new("conjugate-lemma", lhs.max_deviation(&rhs), EXACT_TOLERANCE)
            .with("p", p)
            .with("q", q)
            .with("cells", f.cells()),
    )
}

/// Ito isometry: `E|I_{p,q}(f)|^2 == p! q! ||f~||^2`, with the expectation
/// taken by the exact oracle.
pub fn isometry_check(f: &Kernel) -> Result<VerificationReport> {
    let (p, q) = f.order();
    let moment = oracle::second_moment(&expand(f)?);
    let formula = factorial_f64(p) * factorial_f64(q) * f.ito_symmetrize().norm_sqr();
    Ok(
        VerificationReport::new("isometry", scaled_difference(moment, formula), EXACT_TOLERANCE)
            .with("p", p)
            .with("q", q)
            .with("cells", f.cells())
            .with("oracle_second_moment", moment)
            .with("formula", formula)
            .with("raw_norm_bound", factorial_f64(p) * factorial_f64(q) * f.norm_sqr()),
    )
}

/// `E[I(f) conj(I(g))]`: equals `p! q! <f~, g~>` for equal orders and zero
/// across different orders. The residual is the deviation scaled by
/// `max(1, sqrt(E|F|^2 E|G|^2))`.
pub fn inner_product_check(f: &Kernel, g: &Kernel) -> Result<VerificationReport> {
    if f.cells() != g.cells() {
        return Err(ChaosError::ShapeMismatch(format!(
            "kernels on {} and {} cells",
            f.cells(),
            g.cells()
        )));
    }
    let fp = expand(f)?;
    let gp = expand(g)?;
    let moment = oracle::inner(&fp, &gp);
    let expected = if f.order() == g.order() {
        let (p, q) = f.order();
        f.ito_symmetrize().inner(&g.ito_symmetrize())? * (factorial_f64(p) * factorial_f64(q))
    } else {
        Complex64::new(0.0, 0.0)
    };
    let scale = (oracle::second_moment(&fp) * oracle::second_moment(&gp))
        .sqrt()
        .max(1.0);
    let identity = if f.order() == g.order() {
        "inner-product"
    } else {
        "order-orthogonality"
    };
    Ok(
        VerificationReport::new(identity, (moment - expected).norm() / scale, EXACT_TOLERANCE)
            .with("moment_re", moment.re)
            .with("moment_im", moment.im)
            .with("expected_re", expected.re)
            .with("expected_im", expected.im),
    )
}

/// Hypercontractivity at `r = 4`:
/// `(E|I|^4)^{1/4} <= 3^{(p+q)/2} (E|I|^2)^{1/2}`.
///
/// The residual is the positive part of the gap; the comparison itself is
/// made between `E|I|^4` and `9^{p+q} (E|I|^2)^2` so that equality cases
/// (constants) are not spoiled by rounding in the fractional powers.
pub fn hypercontractivity_check(f: &Kernel) -> Result<VerificationReport> {
    let (p, q) = f.order();
    let poly = expand(f)?;
    let sq = poly.modulus_squared();
    let second = oracle::expectation(&sq).re;
    let fourth = oracle::expectation_of_product(&sq, &sq).re;
    let constant = 3f64.powf((p + q) as f64 / 2.0);
    let violated = fourth > 9f64.powi((p + q) as i32) * second * second;
    let lhs = fourth.max(0.0).powf(0.25);
    let rhs = constant * second.max(0.0).sqrt();
    let residual = if violated { (lhs - rhs).max(0.0) } else { 0.0 };
    Ok(VerificationReport::new("hypercontractivity", residual, 0.0)
        .with("p", p)
        .with("q", q)
        .with("fourth_moment", fourth)
        .with("second_moment", second)
        .with("lhs", lhs)
        .with("rhs", rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn conjugate_lemma_on_elementary_and_scalar_kernels() {
        let f = Kernel::elementary(1, 1, 2, &[0, 1], one()).unwrap();
        let r = integral_conjugate(&f).unwrap();
        assert!(r.pass);
        assert_eq!(r.residual, 0.0);
        let s = Kernel::scalar(Complex64::new(1.0, -2.0), 2).unwrap();
        assert!(integral_conjugate(&s).unwrap().pass);
    }

    #[test]
    fn isometry_examples() {
        let f = Kernel::elementary(1, 1, 2, &[0, 1], one()).unwrap();
        let r = isometry_check(&f).unwrap();
        assert_eq!(r.real("oracle_second_moment"), Some(1.0));
        assert!(r.pass);
        // Symmetrized norm 1/2, times 2! 0! = 1.
        let f = Kernel::elementary(2, 0, 2, &[0, 1], one()).unwrap();
        let r = isometry_check(&f).unwrap();
        assert_eq!(r.real("oracle_second_moment"), Some(1.0));
        assert!((r.real("formula").unwrap() - 1.0).abs() < 1e-15);
        assert!(r.pass);
        let z = Kernel::zeros(1, 2, 2).unwrap();
        let r = isometry_check(&z).unwrap();
        assert_eq!(r.residual, 0.0);
        assert_eq!(r.real("oracle_second_moment"), Some(0.0));
    }

    #[test]
    fn inner_products_and_orthogonality() {
        let f = Kernel::elementary(1, 1, 2, &[0, 0], one()).unwrap();
        let g = Kernel::elementary(1, 0, 2, &[0], one()).unwrap();
        let r = inner_product_check(&f, &g).unwrap();
        assert_eq!(r.identity, "order-orthogonality");
        assert!(r.pass);
        let r = inner_product_check(&f, &f).unwrap();
        assert_eq!(r.identity, "inner-product");
        assert!(r.pass);
        assert_eq!(r.real("moment_re"), Some(1.0));
    }

    #[test]
    fn hypercontractivity_closed_forms() {
        // E|z|^4 = 2 -> 2^{1/4} <= sqrt(3)
        let f = Kernel::elementary(1, 0, 1, &[0], one()).unwrap();
        let r = hypercontractivity_check(&f).unwrap();
        assert_eq!(r.real("fourth_moment"), Some(2.0));
        assert!((r.real("lhs").unwrap() - 2f64.powf(0.25)).abs() < 1e-15);
        assert!((r.real("rhs").unwrap() - 3f64.sqrt()).abs() < 1e-15);
        assert!(r.pass);
        // E(|z|^2 - 1)^4 = 9 -> 9^{1/4} <= 3
        let f = Kernel::elementary(1, 1, 1, &[0, 0], one()).unwrap();
        let r = hypercontractivity_check(&f).unwrap();
        assert_eq!(r.real("fourth_moment"), Some(9.0));
        assert!((r.real("rhs").unwrap() - 3.0).abs() < 1e-15);
        assert!(r.pass);
        let r = hypercontractivity_check(&Kernel::zeros(2, 0, 2).unwrap()).unwrap();
        assert_eq!(r.residual, 0.0);
        assert!(r.pass);
        let c = Kernel::scalar(Complex64::new(0.7, -0.2), 1).unwrap();
        assert!(hypercontractivity_check(&c).unwrap().pass);
    }
}
