//! Seeded Monte Carlo estimation of chaos moments.
//!
//! Sample `k` of a plan reads the ChaCha8 keystream of `seed` starting at
//! word `4 n k`, so any partition of the sample range into chunks yields the
//! same draws. Chunks are reduced in index order.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chaos::ChaosPolynomial;
use crate::error::{ChaosError, Result};

/// Recorded in reports next to every estimate.
pub const GENERATOR: &str =
    "ChaCha8 (rand_chacha 0.9) seeded by seed_from_u64(seed), sample k from keystream word 4nk; \
     z = sqrt(-ln u1) exp(2 pi i u2), u1 = 1 - U, u2 = U, U a 53-bit uniform on [0, 1)";

const CHUNK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplePlan {
    seed: u64,
    samples: usize,
    n: usize,
}

impl SamplePlan {
    pub fn new(seed: u64, samples: usize, n: usize) -> Result<Self> {
        if samples < 2 {
            return Err(ChaosError::InvalidPlan(format!(
                "need at least 2 samples, got {samples}"
            )));
        }
        if n == 0 {
            return Err(ChaosError::InvalidPlan("need at least one cell".into()));
        }
        Ok(Self { seed, samples, n })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn cells(&self) -> usize {
        self.n
    }

    fn rng_at(&self, sample: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_word_pos(4 * self.n as u128 * sample as u128);
        rng
    }
}

/// Mean and standard error `s / sqrt(N)` with `s^2 = sum |x - mean|^2 / (N - 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: Complex64,
    pub std_error: f64,
    pub samples: usize,
}

impl Estimate {
    /// `|value - target| / std_error`; zero when both the gap and the
    /// standard error vanish.
    pub fn z_score(&self, target: Complex64) -> f64 {
        let gap = (self.value - target).norm();
        if gap == 0.0 {
            0.0
        } else {
            gap / self.std_error
        }
    }
}

/// One standard complex Gaussian from two uniforms.
pub(crate) fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random();
    Complex64::from_polar((-u1.ln()).sqrt(), std::f64::consts::TAU * u2)
}

/// The coordinate vectors `(z_1, ..., z_n)` of the plan, in sample order.
pub fn sample_coordinates(plan: SamplePlan) -> impl Iterator<Item = Vec<Complex64>> {
    let mut rng = plan.rng_at(0);
    (0..plan.samples).map(move |_| (0..plan.n).map(|_| complex_gaussian(&mut rng)).collect())
}

#[derive(Debug, Clone, Copy)]
struct Moments {
    count: usize,
    mean: Complex64,
    m2: f64,
}

impl Moments {
    const EMPTY: Moments = Moments {
        count: 0,
        mean: Complex64::new(0.0, 0.0),
        m2: 0.0,
    };

    fn push(&mut self, x: Complex64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += (delta.conj() * (x - self.mean)).re;
    }

    fn merge(self, other: Moments) -> Moments {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        let w = other.count as f64 / count as f64;
        Moments {
            count,
            mean: self.mean + delta * w,
            m2: self.m2 + other.m2 + delta.norm_sqr() * self.count as f64 * w,
        }
    }
}

/// Estimates `E[f(z)]` over the plan. Chunks run in parallel.
pub fn estimate_with<F>(plan: SamplePlan, f: F) -> Estimate
where
    F: Fn(&[Complex64]) -> Complex64 + Sync,
{
    let chunks = plan.samples.div_ceil(CHUNK);
    let parts: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK;
            let end = (start + CHUNK).min(plan.samples);
            let mut rng = plan.rng_at(start);
            let mut z = vec![Complex64::new(0.0, 0.0); plan.n];
            let mut m = Moments::EMPTY;
            for _ in start..end {
                for zk in z.iter_mut() {
                    *zk = complex_gaussian(&mut rng);
                }
                m.push(f(&z));
            }
            m
        })
        .collect();
    let total = parts.into_iter().fold(Moments::EMPTY, Moments::merge);
    let variance = (total.m2 / (total.count - 1) as f64).max(0.0);
    Estimate {
        value: total.mean,
        std_error: (variance / total.count as f64).sqrt(),
        samples: total.count,
    }
}

/// Estimates `E[p]`. The polynomial must live on the plan's cells.
pub fn estimate(p: &ChaosPolynomial, plan: SamplePlan) -> Result<Estimate> {
    if p.cells() != plan.n {
        return Err(ChaosError::ShapeMismatch(format!(
            "polynomial on {} cells, plan on {}",
            p.cells(),
            plan.n
        )));
    }
    let ev = p.evaluator();
    Ok(estimate_with(plan, |z| {
        thread_local! {
            static SCRATCH: std::cell::RefCell<Vec<Complex64>> = const { std::cell::RefCell::new(Vec::new()) };
        }
        SCRATCH.with(|s| ev.evaluate(z, &mut s.borrow_mut()))
    }))
}
