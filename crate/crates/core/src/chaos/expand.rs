use std::collections::BTreeMap;

use num_complex::Complex64;

use super::polynomial::{ChaosPolynomial, Monomial};
use crate::error::Result;
use crate::hermite;
use crate::kernels::{Caps, Kernel};

/// Expands `I_{p,q}(f)` as a polynomial in the cell coordinates
/// `z_k = integral of e_k dM`.
///
/// An elementary tensor whose unbarred block hits cell `k` `p_k` times and
/// whose barred block hits it `q_k` times integrates to
/// `prod_k J_{p_k, q_k}(z_k, 1)`; general kernels follow by linearity.
/// Multi-indices are first grouped by their multiplicity signature so each
/// Hermite product is formed once.
pub fn expand(f: &Kernel) -> Result<ChaosPolynomial> {
    expand_with_caps(f, Caps::HARD)
}

pub fn expand_with_caps(f: &Kernel, caps: Caps) -> Result<ChaosPolynomial> {
    let (p, q) = f.order();
    let n = f.cells();
    caps.check(p, q, n)?;

    let mut signatures: BTreeMap<Vec<u16>, Complex64> = BTreeMap::new();
    let mut digits = vec![0usize; f.rank()];
    for (flat, c) in f.coeffs().iter().enumerate() {
        if *c == Complex64::new(0.0, 0.0) {
            continue;
        }
        f.decode_into(flat, &mut digits);
        let mut sig = vec![0u16; 2 * n];
        for &d in &digits[..p] {
            sig[d] += 1;
        }
        for &d in &digits[p..] {
            sig[n + d] += 1;
        }
        *signatures.entry(sig).or_default() += c;
    }

    let mut acc: Vec<(Monomial, Complex64)> = Vec::new();
    for (sig, weight) in signatures {
        if weight == Complex64::new(0.0, 0.0) {
            continue;
        }
        // Cartesian product over cells of the terms of J_{p_k, q_k}(z_k, 1).
        let mut partial: Vec<(Vec<u16>, f64)> = vec![(vec![0u16; 2 * n], 1.0)];
        for k in 0..n {
            let (pk, qk) = (sig[k] as usize, sig[n + k] as usize);
            if pk == 0 && qk == 0 {
                continue;
            }
            let terms = hermite::unit_variance(pk, qk).terms();
            partial = partial
                .into_iter()
                .flat_map(|(exps, c)| {
                    terms.iter().map(move |((a, b), hc)| {
                        let mut e = exps.clone();
                        e[k] = *a as u16;
                        e[n + k] = *b as u16;
                        (e, c * hc)
                    })
                })
                .collect();
        }
        acc.extend(
            partial
                .into_iter()
                .map(|(e, c)| (Monomial::new(&e[..n], &e[n..]), weight * c)),
        );
    }
    Ok(ChaosPolynomial::from_terms(n, acc))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    fn mono(z: &[u16], zb: &[u16]) -> Monomial {
        Monomial::new(z, zb)
    }

    #[test]
    fn first_chaos_is_the_coordinate() {
        let f = Kernel::elementary(1, 0, 2, &[0], one()).unwrap();
        assert_eq!(expand(&f).unwrap(), ChaosPolynomial::coordinate(0, 2));
    }

    #[test]
    fn diagonal_removes_the_mean() {
        let f = Kernel::elementary(1, 1, 1, &[0, 0], one()).unwrap();
        let p = expand(&f).unwrap();
        let expected = ChaosPolynomial::from_terms(1, [(mono(&[1], &[1]), one()), (mono(&[0], &[0]), -one())]);
        assert_eq!(p, expected);
    }

    #[test]
    fn distinct_cells_multiply() {
        let f = Kernel::elementary(1, 1, 2, &[0, 1], one()).unwrap();
        let p = expand(&f).unwrap();
        assert_eq!(p, ChaosPolynomial::from_terms(2, [(mono(&[1, 0], &[0, 1]), one())]));
    }

    #[test]
    fn scalar_kernel_is_constant() {
        let c = Complex64::new(0.5, -2.0);
        let f = Kernel::scalar(c, 3).unwrap();
        assert_eq!(expand(&f).unwrap(), ChaosPolynomial::constant(c, 3));
        assert!(expand(&Kernel::zeros(2, 1, 3).unwrap()).unwrap().is_empty());
    }

    #[test]
    fn repeated_unbarred_cell_gives_hermite_power() {
        // e1 x e1 at order (2, 0) -> J_{2,0} = z^2; with an extra barred e1
        // -> J_{2,1} = z^2 zb - 2 z.
        let f = Kernel::elementary(2, 1, 1, &[0, 0, 0], one()).unwrap();
        let p = expand(&f).unwrap();
        let expected = ChaosPolynomial::from_terms(1, [(mono(&[2], &[1]), one()), (mono(&[1], &[0]), one() * -2.0)]);
        assert_eq!(p, expected);
    }

    #[test]
    fn tighter_caps_are_enforced() {
        let f = Kernel::zeros(2, 2, 3).unwrap();
        assert!(expand_with_caps(&f, Caps::new(3, 8).unwrap()).is_err());
        assert!(expand_with_caps(&f, Caps::new(4, 2).unwrap()).is_err());
    }
}
