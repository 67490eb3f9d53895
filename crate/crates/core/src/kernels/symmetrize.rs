use itertools::Itertools;
use num_complex::Complex64;

use super::Kernel;

impl Kernel {
    /// Symmetrization in the Ito sense: the average over all permutations
    /// acting separately inside the unbarred block and inside the barred
    /// block (`p! q!` terms).
    pub fn ito_symmetrize(&self) -> Kernel {
        let perms: Vec<Vec<usize>> = block_permutations(self.p)
            .into_iter()
            .cartesian_product(block_permutations(self.q))
            .map(|(pi, sigma)| pi.into_iter().chain(sigma.into_iter().map(|s| s + self.p)).collect())
            .collect();
        self.average_over(&perms)
    }

    /// Ordinary symmetrization: the average over all `(p + q)!` permutations
    /// of the slots, ignoring the barred/unbarred split.
    pub fn ordinary_symmetrize(&self) -> Kernel {
        self.average_over(&block_permutations(self.rank()))
    }

    /// `out(d) = mean over perm of self(d o perm)`.
    fn average_over(&self, perms: &[Vec<usize>]) -> Kernel {
        let rank = self.rank();
        if rank <= 1 {
            return self.clone();
        }
        let strides: Vec<usize> = (0..rank).map(|s| self.n.pow((rank - 1 - s) as u32)).collect();
        // Permuting digits by `perm` moves digit `perm[s]` into slot `s`, so
        // digit `t` contributes with the stride of slot `perm^{-1}(t)`.
        let permuted_strides: Vec<Vec<usize>> = perms
            .iter()
            .map(|perm| {
                let mut ps = vec![0; rank];
                for (slot, &t) in perm.iter().enumerate() {
                    ps[t] = strides[slot];
                }
                ps
            })
            .collect();
        let weight = 1.0 / perms.len() as f64;
        let mut digits = vec![0usize; rank];
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len()];
        for (flat, slot) in out.iter_mut().enumerate() {
            self.decode_into(flat, &mut digits);
            let mut acc = Complex64::new(0.0, 0.0);
            for ps in &permuted_strides {
                let src: usize = digits.iter().zip(ps).map(|(d, s)| d * s).sum();
                acc += self.coeffs[src];
            }
            *slot = acc * weight;
        }
        Kernel {
            coeffs: out,
            ..self.clone()
        }
    }
}

fn block_permutations(k: usize) -> Vec<Vec<usize>> {
    (0..k).permutations(k).collect()
}
