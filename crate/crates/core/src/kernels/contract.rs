use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::Kernel;
use crate::error::{ChaosError, Result};

/// Number of pairings in a contraction: `i` pairs unbarred slots of the left
/// kernel with barred slots of the right one, `j` pairs barred slots of the
/// left kernel with unbarred slots of the right one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ContractionSpec {
    pub i: usize,
    pub j: usize,
}

impl ContractionSpec {
    pub const TENSOR: ContractionSpec = ContractionSpec { i: 0, j: 0 };

    pub fn new(i: usize, j: usize) -> Self {
        Self { i, j }
    }

    /// Whether this contraction is within range for `f` of order `(p1, q1)` against
    /// `g` of order `(p2, q2)`: `i <= p1 ^ q2` and `j <= q1 ^ p2`.
    pub fn admissible(&self, f: (usize, usize), g: (usize, usize)) -> bool {
        self.i <= f.0.min(g.1) && self.j <= f.1.min(g.0)
    }
}

impl Kernel {
    /// `f (x)_{i,j} g`.
    ///
    /// Writing `f(t, u; s, v)` and `g(t', v; s', u)` with `u` the last `i`
    /// unbarred slots of `f` (last `i` barred of `g`) and `v` the last `j`
    /// barred slots of `f` (last `j` unbarred of `g`), the result is
    /// `sum_{u,v} f(t, u; s, v) g(t', v; s', u)` with slot layout
    /// `(t, t'; s, s')` and order `(p1 + p2 - i - j, q1 + q2 - i - j)`.
    ///
    /// Out-of-range specs give the zero kernel. `(0, 0)` is the tensor
    /// product.
    pub fn contract(&self, g: &Kernel, spec: ContractionSpec) -> Result<Kernel> {
        if self.n != g.n {
            return Err(ChaosError::ShapeMismatch(format!(
                "contraction of kernels on {} and {} cells",
                self.n, g.n
            )));
        }
        let (p1, q1) = self.order();
        let (p2, q2) = g.order();
        let ContractionSpec { i, j } = spec;
        let out_p = (p1 + p2).saturating_sub(i + j);
        let out_q = (q1 + q2).saturating_sub(i + j);
        if !spec.admissible((p1, q1), (p2, q2)) {
            return Kernel::zeros(out_p, out_q, self.n);
        }
        let mut out = Kernel::zeros(out_p, out_q, self.n)?;

        let n = self.n;
        let f_rank = self.rank();
        let g_rank = g.rank();
        let stride = |rank: usize, slot: usize| n.pow((rank - 1 - slot) as u32);

        // For every free output slot, the stride it carries inside f and g
        // (zero when the slot belongs to the other kernel).
        let mut free: Vec<(usize, usize)> = Vec::with_capacity(out.rank());
        free.extend((0..p1 - i).map(|s| (stride(f_rank, s), 0)));
        free.extend((0..p2 - j).map(|s| (0, stride(g_rank, s))));
        free.extend((0..q1 - j).map(|s| (stride(f_rank, p1 + s), 0)));
        free.extend((0..q2 - i).map(|s| (0, stride(g_rank, p2 + s))));

        // Contracted slots: u pairs f's unbarred tail with g's barred tail,
        // v pairs f's barred tail with g's unbarred tail.
        let mut paired: Vec<(usize, usize)> = Vec::with_capacity(i + j);
        paired.extend((0..i).map(|k| (stride(f_rank, p1 - i + k), stride(g_rank, p2 + q2 - i + k))));
        paired.extend((0..j).map(|k| (stride(f_rank, p1 + q1 - j + k), stride(g_rank, p2 - j + k))));

        let paired_offsets: Vec<(usize, usize)> = odometer(n, paired.len())
            .map(|digits| {
                digits
                    .iter()
                    .zip(&paired)
                    .fold((0, 0), |(fo, go), (d, (fs, gs))| (fo + d * fs, go + d * gs))
            })
            .collect();

        let mut digits = vec![0usize; out.rank()];
        for flat in 0..out.coeffs.len() {
            out.decode_into(flat, &mut digits);
            let (f_base, g_base) = digits
                .iter()
                .zip(&free)
                .fold((0, 0), |(fo, go), (d, (fs, gs))| (fo + d * fs, go + d * gs));
            let mut acc = Complex64::new(0.0, 0.0);
            for (fo, go) in &paired_offsets {
                acc += self.coeffs[f_base + fo] * g.coeffs[g_base + go];
            }
            out.coeffs[flat] = acc;
        }
        Ok(out)
    }

    /// Tensor product `f (x) g`, the `(0, 0)` contraction.
    pub fn tensor(&self, g: &Kernel) -> Result<Kernel> {
        self.contract(g, ContractionSpec::TENSOR)
    }
}

/// All digit vectors of the given length over `0..n`, last digit fastest.
fn odometer(n: usize, len: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = n.pow(len as u32);
    (0..total).map(move |mut flat| {
        let mut d = vec![0; len];
        for slot in (0..len).rev() {
            d[slot] = flat % n;
            flat /= n;
        }
        d
    })
}
