use super::expand::expand;
use super::report::VerificationReport;
use super::IDENTITY_TOLERANCE;
use crate::error::{ChaosError, Result};
use crate::kernels::{Caps, ContractionSpec, Kernel};
use crate::numeric::{binomial, factorial_f64, scaled_difference, CompensatedSum};
use crate::oracle;

/// Negative values of the covariance formula down to this are rounding.
pub const NEGATIVITY_FLOOR: f64 = -1e-12;

/// Label recorded in reports for the binomial weighting that is certified.
pub const PROOF_STEP_VARIANT: &str =
    "proof-step: C(a,i)C(d,i)C(b,j)C(c,j) a!b!c!d! on ||f (x)_{i,j} g||^2, i<=a^d, j<=b^c; reversed terms grouped by i+j";

/// Closed-form and oracle values of `Cov(|F|^2, |G|^2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceOutcome {
    pub formula: f64,
    pub oracle: f64,
    pub report: VerificationReport,
}

fn binom(n: usize, k: usize) -> f64 {
    binomial(n, k) as f64
}

fn fact(k: usize) -> f64 {
    factorial_f64(k)
}

/// Checks shapes and returns symmetrized `f`, `g` and the reversed conjugate
/// of symmetrized `g`.
fn prepare(f: &Kernel, g: &Kernel) -> Result<(Kernel, Kernel, Kernel)> {
    if f.cells() != g.cells() {
        return Err(ChaosError::ShapeMismatch(format!(
            "kernels on {} and {} cells",
            f.cells(),
            g.cells()
        )));
    }
    let (a, b) = f.order();
    let (c, d) = g.order();
    Caps::HARD.check(a + c, b + d, f.cells())?;
    let fs = f.ito_symmetrize();
    let gs = g.ito_symmetrize();
    let h = gs.reversed_conjugate();
    Ok((fs, gs, h))
}

/// `Cov(|F|^2, |G|^2)` for `F = I_{a,b}(f)`, `G = I_{c,d}(g)`, assembled
/// from
///
/// 1. `E|F Gbar|^2 = sum_k (a+d-k)! (b+c-k)!
///    ||sum_{i+j=k} C(a,i)C(c,i)C(b,j)C(d,j) i!j! f (x)~_{i,j} h||^2`,
/// 2. its `(0, 0)` term rewritten as
///    `sum_{i<=a^d, j<=b^c} C(a,i)C(d,i)C(b,j)C(c,j) a!b!c!d! ||f (x)_{i,j} g||^2`,
/// 3. `E|F|^2 E|G|^2 = a!b!c!d! ||f||^2 ||g||^2`, the `(0, 0)` term of (2).
pub fn covariance_formula(f: &Kernel, g: &Kernel) -> Result<f64> {
    let (fs, gs, h) = prepare(f, g)?;
    let (a, b) = f.order();
    let (c, d) = g.order();
    let mut total = CompensatedSum::new();
    let all = fact(a) * fact(b) * fact(c) * fact(d);
    for i in 0..=a.min(d) {
        for j in 0..=b.min(c) {
            if i + j == 0 {
                continue;
            }
            let w = binom(a, i) * binom(d, i) * binom(b, j) * binom(c, j) * all;
            total.add(w * fs.contract(&gs, ContractionSpec::new(i, j))?.norm_sqr());
        }
    }
    // Terms with equal i + j share an output order and are not orthogonal,
    // so they are summed before taking the norm.
    for k in 1..=(a.min(c) + b.min(d)) {
        let mut group: Option<Kernel> = None;
        for i in 0..=a.min(c).min(k) {
            let j = k - i;
            if j > b.min(d) {
                continue;
            }
            let pair = binom(a, i) * binom(c, i) * binom(b, j) * binom(d, j) * fact(i) * fact(j);
            let term = fs
                .contract(&h, ContractionSpec::new(i, j))?
                .ito_symmetrize()
                .scale(pair.into());
            group = Some(match group {
                Some(acc) => acc.try_add(&term)?,
                None => term,
            });
        }
        if let Some(g) = group {
            total.add(fact(a + d - k) * fact(b + c - k) * g.norm_sqr());
        }
    }
    Ok(total.value())
}

/// The same sum with `C(a,i)C(c,i)C(b,j)C(d,j)` on the `||f (x)_{i,j} g||^2`
/// terms as well. Kept only to document that this weighting disagrees with
/// the oracle.
pub fn covariance_formula_display_variant(f: &Kernel, g: &Kernel) -> Result<f64> {
    let (fs, gs, h) = prepare(f, g)?;
    let (a, b) = f.order();
    let (c, d) = g.order();
    let top = a.max(b).max(c).max(d);
    let all = fact(a) * fact(b) * fact(c) * fact(d);
    let mut total = CompensatedSum::new();
    for i in 0..=top {
        for j in 0..=top {
            if i + j == 0 {
                continue;
            }
            let outer = binom(a, i) * binom(c, i) * binom(b, j) * binom(d, j);
            if outer == 0.0 {
                continue;
            }
            let direct = fs.contract(&gs, ContractionSpec::new(i, j))?.norm_sqr();
            let reversed = if i <= a.min(c) && j <= b.min(d) {
                fs.contract(&h, ContractionSpec::new(i, j))?.ito_symmetrize().norm_sqr()
                    * outer
                    * (fact(i) * fact(j)).powi(2)
                    * fact(a + d - i - j)
                    * fact(b + c - i - j)
            } else {
                0.0
            };
            total.add(outer * (all * direct + reversed));
        }
    }
    Ok(total.value())
}

/// `E|F|^2|G|^2 - E|F|^2 E|G|^2` from exact polynomial expectations.
pub fn oracle_covariance(f: &Kernel, g: &Kernel) -> Result<f64> {
    if f.cells() != g.cells() {
        return Err(ChaosError::ShapeMismatch(format!(
            "kernels on {} and {} cells",
            f.cells(),
            g.cells()
        )));
    }
    let fsq = expand(f)?.modulus_squared();
    let gsq = expand(g)?.modulus_squared();
    let joint = oracle::expectation_of_product(&fsq, &gsq).re;
    Ok(joint - oracle::expectation(&fsq).re * oracle::expectation(&gsq).re)
}

/// Compares [`covariance_formula`] with [`oracle_covariance`]. The residual
/// is their scaled difference, or infinite when the formula is negative
/// beyond [`NEGATIVITY_FLOOR`].
pub fn covariance_squares(f: &Kernel, g: &Kernel) -> Result<CovarianceOutcome> {
    let formula = covariance_formula(f, g)?;
    let oracle = oracle_covariance(f, g)?;
    let display = covariance_formula_display_variant(f, g)?;
    let residual = if formula < NEGATIVITY_FLOOR {
        f64::INFINITY
    } else {
        scaled_difference(formula, oracle)
    };
    let (a, b) = f.order();
    let (c, d) = g.order();
    let report = VerificationReport::new("covariance", residual, IDENTITY_TOLERANCE)
        .with("a", a)
        .with("b", b)
        .with("c", c)
        .with("d", d)
        .with("formula", formula)
        .with("oracle", oracle)
        .with("binomial_variant", PROOF_STEP_VARIANT)
        .with("display_variant_value", display)
        .with("display_variant_residual", scaled_difference(display, oracle));
    Ok(CovarianceOutcome {
        formula,
        oracle,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn disjoint_supports_are_uncorrelated() {
        let f = Kernel::elementary(1, 1, 2, &[0, 0], one()).unwrap();
        let g = Kernel::elementary(1, 1, 2, &[1, 1], one()).unwrap();
        let out = covariance_squares(&f, &g).unwrap();
        assert_eq!(out.formula, 0.0);
        assert_eq!(out.oracle, 0.0);
        assert!(out.report.pass);
    }

    #[test]
    fn coordinate_with_itself_has_unit_variance_of_modulus_squared() {
        // |z|^2 is a unit exponential: Var = 1.
        let f = Kernel::elementary(1, 0, 1, &[0], one()).unwrap();
        let out = covariance_squares(&f, &f).unwrap();
        assert_eq!(out.oracle, 1.0);
        assert!((out.formula - 1.0).abs() < 1e-15);
    }

    #[test]
    fn centered_square_with_itself() {
        // F = W - 1 with W ~ Exp(1): Var((W-1)^2) = 9 - 1 = 8.
        let f = Kernel::elementary(1, 1, 1, &[0, 0], one()).unwrap();
        let out = covariance_squares(&f, &f).unwrap();
        assert_eq!(out.oracle, 8.0);
        assert!((out.formula - 8.0).abs() < 1e-12);
        assert!(out.report.pass);
    }

    #[test]
    fn display_weighting_disagrees_where_the_binomials_differ() {
        // a=2, b=0, c=1, d=1: C(d,i) != C(c,i) at i=1 only when c != d; take c=0, d=1.
        let f = Kernel::elementary(2, 0, 1, &[0, 0], one()).unwrap();
        let g = Kernel::elementary(0, 1, 1, &[0], one()).unwrap();
        let proof = covariance_formula(&f, &g).unwrap();
        let display = covariance_formula_display_variant(&f, &g).unwrap();
        let truth = oracle_covariance(&f, &g).unwrap();
        assert!(scaled_difference(proof, truth) < 1e-12);
        assert!(scaled_difference(display, truth) > 1e-3);
    }
}
