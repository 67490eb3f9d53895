//! Small numeric helpers shared across modules: exact factorials and
//! binomials, and error-compensated summation.

use num_complex::Complex64;

/// Largest argument whose factorial fits in a `u128`.
pub const MAX_EXACT_FACTORIAL: usize = 34;

const fn factorial_table() -> [u128; MAX_EXACT_FACTORIAL + 1] {
    let mut table = [1u128; MAX_EXACT_FACTORIAL + 1];
    let mut k = 1;
    while k <= MAX_EXACT_FACTORIAL {
        table[k] = table[k - 1] * k as u128;
        k += 1;
    }
    table
}

static FACTORIALS: [u128; MAX_EXACT_FACTORIAL + 1] = factorial_table();

/// Exact `k!`.
///
/// Panics if `k` exceeds [`MAX_EXACT_FACTORIAL`]; every degree reachable
/// under the kernel caps stays far below it.
pub fn factorial(k: usize) -> u128 {
    assert!(k <= MAX_EXACT_FACTORIAL, "factorial({k}) overflows u128");
    FACTORIALS[k]
}

pub fn factorial_f64(k: usize) -> f64 {
    factorial(k) as f64
}

/// Exact binomial coefficient, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Neumaier (improved Kahan-Babuska) running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn merge(&mut self, other: &CompensatedSum) {
        self.add(other.sum);
        self.add(other.carry);
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Compensated sum of complex values, real and imaginary parts tracked separately.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedComplexSum {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl CompensatedComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn merge(&mut self, other: &CompensatedComplexSum) {
        self.re.merge(&other.re);
        self.im.merge(&other.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

impl FromIterator<Complex64> for CompensatedComplexSum {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        let mut s = CompensatedComplexSum::new();
        for z in iter {
            s.add(z);
        }
        s
    }
}

/// `|a - b| / max(|a|, |b|, 1)`: relative error that degrades to absolute
/// error for quantities of order one or smaller.
pub fn scaled_difference(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}
