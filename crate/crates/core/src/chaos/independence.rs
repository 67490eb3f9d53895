use num_complex::Complex64;

use super::covariance::covariance_squares;
use super::polynomial::ChaosPolynomial;
use super::report::VerificationReport;
use crate::error::{ChaosError, Result};
use crate::kernels::{ContractionSpec, Kernel};
use crate::oracle;

/// Independence criterion for `F = I_{a,b}(f)` and `G = I_{c,d}(g)`: the
/// four first-order contractions `f (x)_{1,0} g`, `f (x)_{0,1} g`,
/// `f (x)_{1,0} h`, `f (x)_{0,1} h` (with `h` the reversed conjugate of `g`)
/// must all vanish. Out-of-range contractions count as zero.
///
/// The residual is the largest of the four norms. The exact
/// `Cov(|F|^2, |G|^2)`, which vanishes exactly when the criterion holds, is
/// attached as metadata.
pub fn independence_check(f: &Kernel, g: &Kernel, tolerance: f64) -> Result<VerificationReport> {
    let (a, b) = f.order();
    let (c, d) = g.order();
    if a + b == 0 || c + d == 0 {
        return Err(ChaosError::DegenerateOrder(format!(
            "independence needs a+b >= 1 and c+d >= 1, got ({a},{b}) and ({c},{d})"
        )));
    }
    let norms = first_order_contraction_norms(f, g)?;
    let residual = norms.iter().copied().fold(0.0, f64::max);
    let cov = covariance_squares(f, g)?;
    Ok(VerificationReport::new("independence", residual, tolerance)
        .with("norm_f_10_g", norms[0])
        .with("norm_f_01_g", norms[1])
        .with("norm_f_10_h", norms[2])
        .with("norm_f_01_h", norms[3])
        .with("covariance", cov.oracle)
        .with("covariance_formula", cov.formula))
}

/// `[|f (x)_{1,0} g|, |f (x)_{0,1} g|, |f (x)_{1,0} h|, |f (x)_{0,1} h|]` on
/// the symmetrized kernels.
pub fn first_order_contraction_norms(f: &Kernel, g: &Kernel) -> Result<[f64; 4]> {
    if f.cells() != g.cells() {
        return Err(ChaosError::ShapeMismatch(format!(
            "kernels on {} and {} cells",
            f.cells(),
            g.cells()
        )));
    }
    let fs = f.ito_symmetrize();
    let gs = g.ito_symmetrize();
    let h = gs.reversed_conjugate();
    let e10 = ContractionSpec::new(1, 0);
    let e01 = ContractionSpec::new(0, 1);
    Ok([
        fs.contract(&gs, e10)?.norm(),
        fs.contract(&gs, e01)?.norm(),
        fs.contract(&h, e10)?.norm(),
        fs.contract(&h, e01)?.norm(),
    ])
}

/// Largest gap `E[prod_i F_i^{l_i} conj(F_i)^{k_i}] - prod_i E[F_i^{l_i} conj(F_i)^{k_i}]`
/// over all exponent tuples of total degree at most `max_degree`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentGap {
    /// Largest absolute gap.
    pub absolute: f64,
    /// Largest gap divided by `max(1, |joint|, |product|)`.
    pub relative: f64,
}

/// See [`MomentGap`]. Tuples touching a single variable are skipped since
/// their gap is identically zero.
pub fn moment_gap(variables: &[ChaosPolynomial], max_degree: usize) -> MomentGap {
    let d = variables.len();
    // powers[v][(l, k)] = F_v^l conj(F_v)^k for l + k <= max_degree
    let powers: Vec<Vec<Vec<ChaosPolynomial>>> = variables
        .iter()
        .map(|f| {
            let fb = f.conj();
            let mut by_l = Vec::new();
            let mut fl = ChaosPolynomial::constant(Complex64::new(1.0, 0.0), f.cells());
            for l in 0..=max_degree {
                let mut row = Vec::new();
                let mut acc = fl.clone();
                for _ in 0..=(max_degree - l) {
                    row.push(acc.clone());
                    acc = &acc * &fb;
                }
                by_l.push(row);
                fl = &fl * f;
            }
            by_l
        })
        .collect();
    let marginals: Vec<Vec<Vec<Complex64>>> = powers
        .iter()
        .map(|by_l| {
            by_l.iter()
                .map(|row| row.iter().map(oracle::expectation).collect())
                .collect()
        })
        .collect();

    let mut gap = MomentGap {
        absolute: 0.0,
        relative: 0.0,
    };
    for tuple in exponent_tuples(d, max_degree) {
        let active = tuple.iter().filter(|(l, k)| l + k > 0).count();
        if active < 2 {
            continue;
        }
        let product: Complex64 = tuple
            .iter()
            .enumerate()
            .map(|(v, (l, k))| marginals[v][*l][*k])
            .product();
        let factors: Vec<&ChaosPolynomial> = tuple
            .iter()
            .enumerate()
            .filter(|(_, (l, k))| l + k > 0)
            .map(|(v, (l, k))| &powers[v][*l][*k])
            .collect();
        let (last, init) = factors.split_last().expect("at least two active factors");
        let mut head = (*init[0]).clone();
        for f in &init[1..] {
            head = &head * f;
        }
        let joint = oracle::expectation_of_product(&head, last);
        let diff = (joint - product).norm();
        gap.absolute = gap.absolute.max(diff);
        gap.relative = gap.relative.max(diff / joint.norm().max(product.norm()).max(1.0));
    }
    gap
}

/// All `[(l_1, k_1), ..., (l_d, k_d)]` with `sum (l_i + k_i) <= max_degree`.
fn exponent_tuples(d: usize, max_degree: usize) -> Vec<Vec<(usize, usize)>> {
    let mut out = vec![Vec::new()];
    for _ in 0..d {
        let mut next = Vec::new();
        for prefix in out {
            let used: usize = prefix.iter().map(|(l, k)| l + k).sum();
            for l in 0..=(max_degree - used) {
                for k in 0..=(max_degree - used - l) {
                    let mut t = prefix.clone();
                    t.push((l, k));
                    next.push(t);
                }
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chaos::expand;

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn disjoint_supports_pass() {
        let f = Kernel::elementary(1, 1, 2, &[0, 0], one()).unwrap();
        let g = Kernel::elementary(1, 1, 2, &[1, 1], one()).unwrap();
        let r = independence_check(&f, &g, 1e-12).unwrap();
        assert!(r.pass);
        assert_eq!(r.residual, 0.0);
        assert_eq!(r.real("covariance"), Some(0.0));
    }

    #[test]
    fn overlapping_kernels_fail() {
        let f = Kernel::elementary(1, 1, 2, &[0, 0], one()).unwrap();
        let r = independence_check(&f, &f, 1e-12).unwrap();
        assert!(!r.pass);
        assert_eq!(r.real("norm_f_10_g"), Some(1.0));
        assert!(r.real("covariance").unwrap() > 0.0);
    }

    #[test]
    fn coordinate_with_itself_fails_through_the_reversed_conjugate() {
        let f = Kernel::elementary(1, 0, 1, &[0], one()).unwrap();
        let norms = first_order_contraction_norms(&f, &f).unwrap();
        assert_eq!(norms, [0.0, 0.0, 1.0, 0.0]);
        let r = independence_check(&f, &f, 1e-12).unwrap();
        assert!(!r.pass);
        let gap = moment_gap(&[expand(&f).unwrap(), expand(&f).unwrap()], 2);
        // E[z zbar] - E z E zbar = 1
        assert_eq!(gap.absolute, 1.0);
    }

    #[test]
    fn degenerate_orders_are_rejected() {
        let s = Kernel::scalar(one(), 2).unwrap();
        let f = Kernel::elementary(1, 0, 2, &[0], one()).unwrap();
        assert!(matches!(
            independence_check(&s, &f, 1e-12),
            Err(ChaosError::DegenerateOrder(_))
        ));
        assert!(matches!(
            independence_check(&f, &s, 1e-12),
            Err(ChaosError::DegenerateOrder(_))
        ));
    }

    #[test]
    fn exponent_tuple_count() {
        // pairs (l, k) per variable, two variables, total <= 2: C(2 + 4, 4) = 15
        assert_eq!(exponent_tuples(2, 2).len(), 15);
        assert_eq!(exponent_tuples(1, 0).len(), 1);
    }

    #[test]
    fn independent_coordinates_factorize() {
        let z1 = ChaosPolynomial::coordinate(0, 2);
        let z2 = ChaosPolynomial::coordinate(1, 2);
        let gap = moment_gap(&[z1, z2], 4);
        assert_eq!(gap.absolute, 0.0);
    }
}
