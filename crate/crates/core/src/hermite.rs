//! Complex Hermite (Hermite-Laguerre-Ito) polynomials `J_{m,n}(z, rho)`.
//!
//! `J_{m,n}(z, rho) = rho^{m+n} (d*)^m (dbar*)^n 1` with the creation
//! operators
//!
//! ```text
//! (d* phi)    = -d phi / d zbar + (z / rho) phi
//! (dbar* phi) = -d phi / d z    + (zbar / rho) phi
//! ```
//!
//! acting on polynomials in the formally independent variables `z`, `zbar`.
//! Folding `rho^{m+n}` into the operators (`rho d* = -rho d/dzbar + z`)
//! keeps every intermediate coefficient an integer when `rho` is one, so
//! integer `rho` is built exactly and anything else in floating point.
//!
//! The product identity
//! `J_{a,b} J_{c,d} = sum_{i,j} C(a,i) C(d,i) C(b,j) C(c,j) i! j! J_{a+c-i-j, b+d-i-j}`
//! only holds for one variance normalization; [`resolve_rho`] finds it by
//! symbolic multiplication instead of assuming it.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::kernels::MAX_ORDER;
use crate::numeric::{binomial, factorial};

/// Exponent pair `(power of z, power of zbar)`.
pub type Exponents = (u32, u32);

#[derive(Debug, Clone, PartialEq)]
enum Terms {
    Exact(BTreeMap<Exponents, i128>),
    Float(BTreeMap<Exponents, f64>),
}

/// `J_{m,n}(z, rho)` as a sparse polynomial in `z`, `zbar` with real
/// coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitePolynomial {
    m: u32,
    n: u32,
    rho: f64,
    terms: Terms,
}

impl HermitePolynomial {
    /// Applies the creation operators symbolically to the constant `1`.
    ///
    /// Panics if `rho` is not strictly positive and finite.
    pub fn build(m: u32, n: u32, rho: f64) -> Self {
        assert!(
            rho.is_finite() && rho > 0.0,
            "rho must be positive and finite, got {rho}"
        );
        let terms = if rho.fract() == 0.0 && rho <= i64::MAX as f64 {
            build_exact(m, n, rho as i128)
                .map(Terms::Exact)
                .unwrap_or_else(|| Terms::Float(build_float(m, n, rho)))
        } else {
            Terms::Float(build_float(m, n, rho))
        };
        Self { m, n, rho, terms }
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Whether coefficients are held as exact integers.
    pub fn is_exact(&self) -> bool {
        matches!(self.terms, Terms::Exact(_))
    }

    pub fn exact_terms(&self) -> Option<&BTreeMap<Exponents, i128>> {
        match &self.terms {
            Terms::Exact(t) => Some(t),
            Terms::Float(_) => None,
        }
    }

    /// Nonzero terms as floating coefficients, in increasing exponent order.
    pub fn terms(&self) -> Vec<(Exponents, f64)> {
        match &self.terms {
            Terms::Exact(t) => t.iter().map(|(e, c)| (*e, *c as f64)).collect(),
            Terms::Float(t) => t.iter().map(|(e, c)| (*e, *c)).collect(),
        }
    }

    pub fn coeff(&self, z_pow: u32, zbar_pow: u32) -> f64 {
        match &self.terms {
            Terms::Exact(t) => t.get(&(z_pow, zbar_pow)).map_or(0.0, |c| *c as f64),
            Terms::Float(t) => t.get(&(z_pow, zbar_pow)).copied().unwrap_or(0.0),
        }
    }

    /// Evaluates at `(z, conj(z))`.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        let zb = z.conj();
        self.terms()
            .into_iter()
            .map(|((a, b), c)| z.powu(a) * zb.powu(b) * c)
            .sum()
    }

    /// Complex conjugate as a polynomial: swaps the roles of `z` and `zbar`.
    /// For real `rho` this is `J_{n,m}(z, rho)`.
    pub fn conj(&self) -> HermitePolynomial {
        let terms = match &self.terms {
            Terms::Exact(t) => Terms::Exact(t.iter().map(|((a, b), c)| ((*b, *a), *c)).collect()),
            Terms::Float(t) => Terms::Float(t.iter().map(|((a, b), c)| ((*b, *a), *c)).collect()),
        };
        HermitePolynomial {
            m: self.n,
            n: self.m,
            rho: self.rho,
            terms,
        }
    }
}

impl fmt::Display for HermitePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (k, ((a, b), c)) in terms.iter().rev().enumerate() {
            let sign = if *c < 0.0 { "-" } else { "+" };
            if k == 0 {
                if *c < 0.0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let mag = c.abs();
            let monomial = monomial_label(*a, *b);
            match (monomial.is_empty(), mag == 1.0) {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => write!(f, "{monomial}")?,
                (false, false) => write!(f, "{mag} {monomial}")?,
            }
        }
        Ok(())
    }
}

fn monomial_label(a: u32, b: u32) -> String {
    let part = |name: &str, e: u32| match e {
        0 => String::new(),
        1 => name.to_string(),
        _ => format!("{name}^{e}"),
    };
    [part("z", a), part("zb", b)]
        .into_iter()
        .filter(|s| !s.is_empty())
        .collect::<Vec<_>>()
        .join(" ")
}

fn build_exact(m: u32, n: u32, rho: i128) -> Option<BTreeMap<Exponents, i128>> {
    let mut poly: BTreeMap<Exponents, i128> = BTreeMap::from([((0, 0), 1)]);
    // rho dbar*: c z^a zb^b -> -rho a c z^{a-1} zb^b + c z^a zb^{b+1}
    for _ in 0..n {
        let mut next = BTreeMap::new();
        for (&(a, b), &c) in &poly {
            add_exact(&mut next, (a, b + 1), c)?;
            if a > 0 {
                add_exact(
                    &mut next,
                    (a - 1, b),
                    c.checked_mul(rho)?.checked_mul(a as i128)?.checked_neg()?,
                )?;
            }
        }
        poly = next;
    }
    // rho d*: c z^a zb^b -> -rho b c z^a zb^{b-1} + c z^{a+1} zb^b
    for _ in 0..m {
        let mut next = BTreeMap::new();
        for (&(a, b), &c) in &poly {
            add_exact(&mut next, (a + 1, b), c)?;
            if b > 0 {
                add_exact(
                    &mut next,
                    (a, b - 1),
                    c.checked_mul(rho)?.checked_mul(b as i128)?.checked_neg()?,
                )?;
            }
        }
        poly = next;
    }
    Some(poly)
}

fn add_exact(poly: &mut BTreeMap<Exponents, i128>, e: Exponents, c: i128) -> Option<()> {
    let entry = poly.entry(e).or_insert(0);
    *entry = entry.checked_add(c)?;
    if *entry == 0 {
        poly.remove(&e);
    }
    Some(())
}

fn build_float(m: u32, n: u32, rho: f64) -> BTreeMap<Exponents, f64> {
    let mut poly: BTreeMap<Exponents, f64> = BTreeMap::from([((0, 0), 1.0)]);
    for _ in 0..n {
        let mut next: BTreeMap<Exponents, f64> = BTreeMap::new();
        for (&(a, b), &c) in &poly {
            *next.entry((a, b + 1)).or_default() += c;
            if a > 0 {
                *next.entry((a - 1, b)).or_default() -= rho * a as f64 * c;
            }
        }
        poly = next;
    }
    for _ in 0..m {
        let mut next: BTreeMap<Exponents, f64> = BTreeMap::new();
        for (&(a, b), &c) in &poly {
            *next.entry((a + 1, b)).or_default() += c;
            if b > 0 {
                *next.entry((a, b - 1)).or_default() -= rho * b as f64 * c;
            }
        }
        poly = next;
    }
    poly.retain(|_, c| *c != 0.0);
    poly
}

/// `J_{m,n}(z, 1)` for `m + n <= MAX_ORDER`, built once and shared.
pub fn unit_variance(m: usize, n: usize) -> &'static HermitePolynomial {
    static TABLE: OnceLock<Vec<Vec<HermitePolynomial>>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        (0..=MAX_ORDER)
            .map(|m| {
                (0..=MAX_ORDER - m)
                    .map(|n| HermitePolynomial::build(m as u32, n as u32, 1.0))
                    .collect()
            })
            .collect()
    });
    assert!(m + n <= MAX_ORDER, "J_{{{m},{n}}} is beyond the precomputed order cap");
    &table[m][n]
}

/// Coefficient table of the Hermite product identity: maps `(m, n)` to the
/// total weight of `J_{m,n}` in the expansion of `J_{a,b} J_{c,d}`.
///
/// Each `(i, j)` with `i <= a ^ d`, `j <= b ^ c` contributes
/// `C(a,i) C(d,i) C(b,j) C(c,j) i! j!` to `(a + c - i - j, b + d - i - j)`;
/// pairs with equal `i + j` land on the same index and are summed.
pub fn hermite_product(a: usize, b: usize, c: usize, d: usize) -> BTreeMap<(usize, usize), u128> {
    let mut table = BTreeMap::new();
    for i in 0..=a.min(d) {
        for j in 0..=b.min(c) {
            let w = binomial(a, i) * binomial(d, i) * binomial(b, j) * binomial(c, j) * factorial(i) * factorial(j);
            *table.entry((a + c - i - j, b + d - i - j)).or_insert(0) += w;
        }
    }
    table
}

/// Residual of the Hermite product identity at variance `rho`: the largest
/// coefficient deviation between `J_{a,b} J_{c,d}` and the expansion from
/// [`hermite_product`], relative to the largest coefficient of the product.
pub fn product_identity_residual(a: usize, b: usize, c: usize, d: usize, rho: f64) -> f64 {
    let lhs = multiply(
        &HermitePolynomial::build(a as u32, b as u32, rho),
        &HermitePolynomial::build(c as u32, d as u32, rho),
    );
    let mut rhs: BTreeMap<Exponents, f64> = BTreeMap::new();
    for ((m, n), w) in hermite_product(a, b, c, d) {
        for (e, coeff) in HermitePolynomial::build(m as u32, n as u32, rho).terms() {
            *rhs.entry(e).or_default() += w as f64 * coeff;
        }
    }
    let scale = lhs.values().chain(rhs.values()).fold(0.0f64, |acc, c| acc.max(c.abs()));
    let deviation = lhs
        .keys()
        .chain(rhs.keys())
        .map(|e| (lhs.get(e).copied().unwrap_or(0.0) - rhs.get(e).copied().unwrap_or(0.0)).abs())
        .fold(0.0f64, f64::max);
    if scale == 0.0 {
        deviation
    } else {
        deviation / scale
    }
}

fn multiply(x: &HermitePolynomial, y: &HermitePolynomial) -> BTreeMap<Exponents, f64> {
    match (x.exact_terms(), y.exact_terms()) {
        (Some(xt), Some(yt)) => {
            let mut out: BTreeMap<Exponents, i128> = BTreeMap::new();
            for (&(a, b), &c) in xt {
                for (&(a2, b2), &c2) in yt {
                    *out.entry((a + a2, b + b2)).or_insert(0) += c * c2;
                }
            }
            out.into_iter()
                .filter(|(_, c)| *c != 0)
                .map(|(e, c)| (e, c as f64))
                .collect()
        }
        _ => {
            let mut out: BTreeMap<Exponents, f64> = BTreeMap::new();
            for ((a, b), c) in x.terms() {
                for ((a2, b2), c2) in y.terms() {
                    *out.entry((a + a2, b + b2)).or_default() += c * c2;
                }
            }
            out
        }
    }
}

/// Outcome of the normalization self-test.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct RhoResolution {
    /// The variance at which the product identity held for every order
    /// tested, if any candidate did.
    pub certified_rho: Option<f64>,
    /// Largest total order `a + b + c + d` exercised.
    pub max_total: usize,
    /// `(candidate rho, worst residual)` for every candidate tried.
    pub residuals: Vec<(f64, f64)>,
}

/// Candidates tried by [`resolve_rho`]: unit variance, and the `rho = 2`
/// shorthand used for the real-coordinate normalization.
pub const RHO_CANDIDATES: [f64; 2] = [1.0, 2.0];

/// Certifies the variance normalization under which the Hermite product
/// identity is exact, by symbolic multiplication for every
/// `a + b + c + d <= max_total`.
pub fn resolve_rho(max_total: usize) -> RhoResolution {
    let residuals: Vec<(f64, f64)> = RHO_CANDIDATES
        .iter()
        .map(|&rho| {
            let worst = quadruples(max_total)
                .map(|(a, b, c, d)| product_identity_residual(a, b, c, d, rho))
                .fold(0.0, f64::max);
            (rho, worst)
        })
        .collect();
    let certified_rho = residuals.iter().find(|(_, r)| *r == 0.0).map(|(rho, _)| *rho);
    RhoResolution {
        certified_rho,
        max_total,
        residuals,
    }
}

/// All `(a, b, c, d)` with `a + b + c + d <= max_total`.
pub fn quadruples(max_total: usize) -> impl Iterator<Item = (usize, usize, usize, usize)> {
    (0..=max_total).flat_map(move |a| {
        (0..=max_total - a).flat_map(move |b| {
            (0..=max_total - a - b).flat_map(move |c| (0..=max_total - a - b - c).map(move |d| (a, b, c, d)))
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Closed-form coefficients `(-1)^k k! C(m,k) C(n,k) rho^k` on
    /// `z^{m-k} zb^{n-k}`, used as an independent check of the operator
    /// construction.
    fn closed_form(m: u32, n: u32, rho: f64) -> BTreeMap<Exponents, f64> {
        (0..=m.min(n))
            .map(|k| {
                let c = factorial(k as usize) as f64
                    * binomial(m as usize, k as usize) as f64
                    * binomial(n as usize, k as usize) as f64
                    * rho.powi(k as i32)
                    * if k % 2 == 0 { 1.0 } else { -1.0 };
                ((m - k, n - k), c)
            })
            .collect()
    }

    #[test]
    fn low_orders() {
        for rho in [0.5, 1.0, 2.0, 3.7] {
            let j00 = HermitePolynomial::build(0, 0, rho);
            assert_eq!(j00.terms(), vec![((0, 0), 1.0)]);
            let j11 = HermitePolynomial::build(1, 1, rho);
            assert_eq!(j11.coeff(1, 1), 1.0);
            assert!((j11.coeff(0, 0) + rho).abs() < 1e-15);
            assert_eq!(j11.terms().len(), 2);
            let j20 = HermitePolynomial::build(2, 0, rho);
            assert_eq!(j20.terms(), vec![((2, 0), 1.0)]);
        }
    }

    #[test]
    fn exactness_follows_rho() {
        assert!(HermitePolynomial::build(3, 2, 1.0).is_exact());
        assert!(HermitePolynomial::build(3, 2, 2.0).is_exact());
        assert!(!HermitePolynomial::build(3, 2, 0.5).is_exact());
    }

    #[test]
    fn operator_construction_matches_closed_form() {
        for rho in [1.0, 2.0, 0.3] {
            for m in 0..=6 {
                for n in 0..=6 {
                    let h = HermitePolynomial::build(m, n, rho);
                    let cf = closed_form(m, n, rho);
                    assert_eq!(h.terms().len(), cf.len());
                    for (e, c) in cf {
                        let got = h.coeff(e.0, e.1);
                        assert!((got - c).abs() <= 1e-12 * c.abs().max(1.0), "J_{m},{n} at {e:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn structural_invariants() {
        for m in 0..=5u32 {
            for n in 0..=5u32 {
                let h = HermitePolynomial::build(m, n, 1.0);
                assert_eq!(h.coeff(m, n), 1.0);
                for ((a, b), _) in h.terms() {
                    assert!(a + b <= m + n);
                    assert_eq!(a as i64 - b as i64, m as i64 - n as i64);
                }
                assert_eq!(h.conj(), HermitePolynomial::build(n, m, 1.0));
            }
        }
    }

    #[test]
    fn evaluation() {
        let j11 = HermitePolynomial::build(1, 1, 1.0);
        assert_eq!(j11.evaluate(Complex64::new(0.0, 0.0)), Complex64::new(-1.0, 0.0));
        let z = Complex64::new(0.3, -1.2);
        for rho in [1.0, 2.0, 0.7] {
            assert_eq!(HermitePolynomial::build(1, 0, rho).evaluate(z), z);
            assert_eq!(
                HermitePolynomial::build(0, 0, rho).evaluate(z),
                Complex64::new(1.0, 0.0)
            );
        }
        let expected = z * z.conj() - 1.0;
        assert!((j11.evaluate(z) - expected).norm() < 1e-15);
    }

    #[test]
    fn product_table_small_cases() {
        assert_eq!(hermite_product(1, 0, 0, 1), BTreeMap::from([((1, 1), 1), ((0, 0), 1)]));
        assert_eq!(hermite_product(1, 0, 1, 0), BTreeMap::from([((2, 0), 1)]));
        // (i, j) = (1, 0) and (0, 1) both land on J_{1,1}.
        assert_eq!(
            hermite_product(1, 1, 1, 1),
            BTreeMap::from([((2, 2), 1), ((1, 1), 2), ((0, 0), 1)])
        );
    }

    #[test]
    fn product_table_matches_direct_multiplication_at_unit_variance() {
        // z zb = J_{1,1} + 1
        let j10 = HermitePolynomial::build(1, 0, 1.0);
        let j01 = HermitePolynomial::build(0, 1, 1.0);
        let prod = multiply(&j10, &j01);
        assert_eq!(prod, BTreeMap::from([((1, 1), 1.0)]));
        for (a, b, c, d) in quadruples(8) {
            assert_eq!(product_identity_residual(a, b, c, d, 1.0), 0.0, "({a},{b},{c},{d})");
        }
    }

    #[test]
    fn identity_fails_away_from_unit_variance() {
        assert!(product_identity_residual(1, 0, 0, 1, 2.0) > 0.1);
        assert!(product_identity_residual(1, 0, 0, 1, 0.5) > 0.1);
    }

    #[test]
    fn resolve_rho_certifies_unit_variance() {
        let r = resolve_rho(6);
        assert_eq!(r.certified_rho, Some(1.0));
        assert_eq!(r.residuals[0], (1.0, 0.0));
        assert!(r.residuals[1].1 > 0.0);
    }

    #[test]
    fn rescaled_rho_two_family_is_the_unit_family() {
        // 2^{-(m+n)/2} J_{m,n}(sqrt(2) z, 2) == J_{m,n}(z, 1)
        let z = Complex64::new(0.4, 0.9);
        for m in 0..=5u32 {
            for n in 0..=5u32 {
                let lhs =
                    HermitePolynomial::build(m, n, 2.0).evaluate(z * 2f64.sqrt()) * 2f64.powf(-((m + n) as f64) / 2.0);
                let rhs = HermitePolynomial::build(m, n, 1.0).evaluate(z);
                assert!((lhs - rhs).norm() < 1e-10 * rhs.norm().max(1.0));
            }
        }
    }

    #[test]
    fn memo_table_matches_direct_build() {
        assert_eq!(unit_variance(2, 3), &HermitePolynomial::build(2, 3, 1.0));
        assert_eq!(unit_variance(8, 0), &HermitePolynomial::build(8, 0, 1.0));
    }

    #[test]
    fn display() {
        assert_eq!(HermitePolynomial::build(1, 1, 1.0).to_string(), "z zb - 1");
        assert_eq!(HermitePolynomial::build(2, 2, 1.0).to_string(), "z^2 zb^2 - 4 z zb + 2");
        assert_eq!(HermitePolynomial::build(0, 0, 1.0).to_string(), "1");
    }

    #[test]
    fn quadruple_enumeration_count() {
        // C(k + 4, 4) tuples with sum <= k
        assert_eq!(quadruples(6).count(), 210);
        assert_eq!(quadruples(0).count(), 1);
    }
}
