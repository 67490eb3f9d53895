//! Seeded random kernels for certification grids and property tests.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::kernels::Kernel;
use crate::montecarlo::complex_gaussian;

/// A generator for case `stream` of a run seeded with `seed`. Distinct
/// streams never overlap, so cases can be generated in any order.
pub fn case_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// A kernel with independent complex Gaussian coefficients, rescaled to
/// unit norm (the zero-order kernel is a unit-modulus scalar).
pub fn random_kernel<R: Rng + ?Sized>(p: usize, q: usize, n: usize, rng: &mut R) -> Result<Kernel> {
    let len = n.pow((p + q) as u32);
    let coeffs: Vec<Complex64> = (0..len).map(|_| complex_gaussian(rng)).collect();
    normalized(Kernel::from_dense(p, q, n, coeffs)?)
}

/// Like [`random_kernel`] but supported on a random non-empty subset of the
/// cells: every coefficient with an index outside the subset is zero.
pub fn random_supported_kernel<R: Rng + ?Sized>(
    p: usize,
    q: usize,
    n: usize,
    rng: &mut R,
) -> Result<(Kernel, Vec<usize>)> {
    let mut support: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.5)).collect();
    if support.is_empty() {
        support.push(rng.random_range(0..n));
    }
    let mut k = Kernel::zeros(p, q, n)?;
    let mut digits = vec![0; p + q];
    for flat in 0..k.coeffs().len() {
        k.decode_into(flat, &mut digits);
        if digits.iter().all(|d| support.contains(d)) {
            k.set(&digits, complex_gaussian(rng))?;
        }
    }
    Ok((normalized(k)?, support))
}

fn normalized(k: Kernel) -> Result<Kernel> {
    let norm = k.norm();
    Ok(if norm > 0.0 {
        k.scale(Complex64::new(1.0 / norm, 0.0))
    } else {
        k
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernels_are_unit_norm_and_reproducible() {
        let a = random_kernel(2, 1, 3, &mut case_rng(7, 3)).unwrap();
        let b = random_kernel(2, 1, 3, &mut case_rng(7, 3)).unwrap();
        assert_eq!(a, b);
        assert!((a.norm() - 1.0).abs() < 1e-14);
        let c = random_kernel(2, 1, 3, &mut case_rng(7, 4)).unwrap();
        assert_ne!(a, c);
        let s = random_kernel(0, 0, 2, &mut case_rng(1, 0)).unwrap();
        assert!((s.coeffs()[0].norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn supported_kernels_vanish_off_support() {
        for stream in 0..20 {
            let (k, support) = random_supported_kernel(1, 2, 3, &mut case_rng(5, stream)).unwrap();
            assert!(!support.is_empty());
            for (idx, _) in k.nonzero_entries() {
                assert!(idx.iter().all(|d| support.contains(d)));
            }
        }
    }
}
