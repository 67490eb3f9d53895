//! Seeded certification suites over grids of random kernels. Each suite
//! returns one aggregated [`VerificationReport`]; [`selftest`] runs them all.
//!
//! Case `k` of a suite draws its kernels from stream `(suite << 32) | k`
//! of the run seed, so results do not depend on scheduling.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::chaos::{
    asymptotic_diagnostics, certify_perturbed, covariance_squares, expand, hypercontractivity_check,
    independence_check, inner_product_check, integral_conjugate, isometry_check, moment_gap, ChaosPolynomial,
    KernelSequence, Monomial, VerificationReport, EXACT_TOLERANCE, IDENTITY_TOLERANCE, PROOF_STEP_VARIANT,
};
use crate::error::Result;
use crate::hermite::{self, HermitePolynomial};
use crate::kernels::Kernel;
use crate::montecarlo::{estimate_with, SamplePlan, GENERATOR};
use crate::oracle;
use crate::random::{case_rng, random_kernel, random_supported_kernel};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Monte Carlo sample count.
    pub samples: usize,
    /// Tolerance for relative identities (product formulas, covariance).
    pub tolerance: f64,
    /// Largest `a + b + c + d` on the pair grids.
    pub max_total: usize,
    /// Largest cell count on the grids.
    pub max_cells: usize,
    /// Random pairs per `(a, b, c, d, n)`.
    pub trials: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            samples: 100_000,
            tolerance: IDENTITY_TOLERANCE,
            max_total: 6,
            max_cells: 3,
            trials: 20,
        }
    }
}

/// One grid case: orders `(a, b)` and `(c, d)`, cell count, trial number.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairCase {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
    pub n: usize,
    pub trial: usize,
}

impl PairCase {
    fn label(&self) -> String {
        format!(
            "({},{},{},{}) n={} trial={}",
            self.a, self.b, self.c, self.d, self.n, self.trial
        )
    }
}

/// Every `(a, b, c, d)` with `a + b + c + d <= max_total`, every `n` in
/// `1..=max_cells`, `trials` times each.
pub fn pair_grid(cfg: &SuiteConfig) -> Vec<PairCase> {
    let mut cases = Vec::new();
    for (a, b, c, d) in hermite::quadruples(cfg.max_total) {
        for n in 1..=cfg.max_cells {
            for trial in 0..cfg.trials {
                cases.push(PairCase { a, b, c, d, n, trial });
            }
        }
    }
    cases
}

const PRODUCT: u64 = 1;
const CONJUGATED: u64 = 2;
const ISOMETRY: u64 = 3;
const CONJUGATE_LEMMA: u64 = 4;
const COVARIANCE: u64 = 5;
const DISJOINT: u64 = 6;
const RANDOM_PAIRS: u64 = 7;
const HYPER: u64 = 8;
const MONTE_CARLO: u64 = 9;

fn stream(suite: u64, case: usize) -> u64 {
    (suite << 32) | case as u64
}

fn random_pair(cfg: &SuiteConfig, suite: u64, k: usize, case: &PairCase) -> Result<(Kernel, Kernel)> {
    let mut rng = case_rng(cfg.seed, stream(suite, k));
    Ok((
        random_kernel(case.a, case.b, case.n, &mut rng)?,
        random_kernel(case.c, case.d, case.n, &mut rng)?,
    ))
}

/// Aggregates per-case reports, naming the worst case.
fn aggregate(identity: &str, tolerance: f64, labelled: Vec<(String, VerificationReport)>) -> VerificationReport {
    let worst = labelled
        .iter()
        .max_by(|x, y| (x.1.residual / x.1.tolerance).total_cmp(&(y.1.residual / y.1.tolerance)))
        .map(|(l, _)| l.clone())
        .unwrap_or_default();
    let reports: Vec<VerificationReport> = labelled.into_iter().map(|(_, r)| r).collect();
    VerificationReport::combine(identity, tolerance, &reports).with("worst_case", worst)
}

fn run_grid<F>(cfg: &SuiteConfig, identity: &str, tolerance: f64, check: F) -> Result<VerificationReport>
where
    F: Fn(usize, &PairCase) -> Result<VerificationReport> + Sync,
{
    let cases = pair_grid(cfg);
    let labelled = cases
        .par_iter()
        .enumerate()
        .map(|(k, case)| Ok((case.label(), check(k, case)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(aggregate(identity, tolerance, labelled)
        .with("seed", cfg.seed)
        .with("max_total", cfg.max_total)
        .with("max_cells", cfg.max_cells)
        .with("trials", cfg.trials))
}

/// Product formula, or its conjugated form, on the pair grid. A nonzero
/// `perturbation` is added to the first weight of every expansion.
pub fn product_grid(cfg: &SuiteConfig, conjugated: bool, perturbation: f64) -> Result<VerificationReport> {
    let (identity, suite) = if conjugated {
        ("product-conjugated", CONJUGATED)
    } else {
        ("product", PRODUCT)
    };
    let report = run_grid(cfg, identity, cfg.tolerance, |k, case| {
        let (f, g) = random_pair(cfg, suite, k, case)?;
        certify_perturbed(&f, &g, conjugated, cfg.tolerance, perturbation)
    })?;
    Ok(if perturbation != 0.0 {
        report.with("perturbation", perturbation)
    } else {
        report
    })
}

/// Ito isometry for both kernels of every pair and the inner product (or
/// order orthogonality) between them.
pub fn isometry_grid(cfg: &SuiteConfig) -> Result<VerificationReport> {
    run_grid(cfg, "isometry", EXACT_TOLERANCE, |k, case| {
        let (f, g) = random_pair(cfg, ISOMETRY, k, case)?;
        Ok(VerificationReport::combine(
            "isometry",
            EXACT_TOLERANCE,
            &[isometry_check(&f)?, isometry_check(&g)?, inner_product_check(&f, &g)?],
        ))
    })
}

/// `conj(I(f)) = I(h)` for the left kernel of every pair.
pub fn conjugate_grid(cfg: &SuiteConfig) -> Result<VerificationReport> {
    run_grid(cfg, "conjugate-lemma", EXACT_TOLERANCE, |k, case| {
        let (f, _) = random_pair(cfg, CONJUGATE_LEMMA, k, case)?;
        integral_conjugate(&f)
    })
}

/// Covariance of squared moduli: contraction formula against the oracle.
/// Records how often the display weighting disagrees.
pub fn covariance_grid(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let cases = pair_grid(cfg);
    let outcomes = cases
        .par_iter()
        .enumerate()
        .map(|(k, case)| {
            let (f, g) = random_pair(cfg, COVARIANCE, k, case)?;
            let out = covariance_squares(&f, &g)?;
            let mut r = out.report;
            r.tolerance = cfg.tolerance;
            r.pass = r.residual <= cfg.tolerance;
            Ok((case.label(), r))
        })
        .collect::<Result<Vec<_>>>()?;
    let min_formula = outcomes
        .iter()
        .filter_map(|(_, r)| r.real("formula"))
        .fold(f64::INFINITY, f64::min);
    let display_disagreements = outcomes
        .iter()
        .filter(|(_, r)| r.real("display_variant_residual").is_some_and(|d| d > cfg.tolerance))
        .count();
    Ok(aggregate("covariance", cfg.tolerance, outcomes)
        .with("binomial_variant", PROOF_STEP_VARIANT)
        .with("min_formula_value", min_formula)
        .with("display_variant_disagreements", display_disagreements)
        .with("seed", cfg.seed)
        .with("max_total", cfg.max_total)
        .with("max_cells", cfg.max_cells)
        .with("trials", cfg.trials))
}

/// Left order, right order, left cells, right cells, on three cells.
type DisjointLayout = ((usize, usize), (usize, usize), &'static [usize], &'static [usize]);

/// Disjoint-support pairs: the criterion holds and every mixed moment up to
/// total degree `max_degree` factorizes.
pub fn independence_disjoint(cfg: &SuiteConfig, max_degree: usize) -> Result<VerificationReport> {
    let layouts: [DisjointLayout; 6] = [
        ((1, 1), (1, 1), &[0], &[1]),
        ((1, 0), (0, 1), &[0], &[1, 2]),
        ((2, 0), (1, 1), &[0, 1], &[2]),
        ((1, 1), (2, 0), &[2], &[0, 1]),
        ((0, 2), (1, 0), &[1, 2], &[0]),
        ((2, 1), (1, 0), &[0], &[1, 2]),
    ];
    let labelled = layouts
        .par_iter()
        .enumerate()
        .map(|(k, &((a, b), (c, d), left, right))| {
            let mut rng = case_rng(cfg.seed, stream(DISJOINT, k));
            let f = restricted(random_kernel(a, b, 3, &mut rng)?, left)?;
            let g = restricted(random_kernel(c, d, 3, &mut rng)?, right)?;
            let criterion = independence_check(&f, &g, EXACT_TOLERANCE)?;
            let gap = moment_gap(&[expand(&f)?, expand(&g)?], max_degree);
            let residual = (criterion.residual / EXACT_TOLERANCE).max(gap.relative / cfg.tolerance) * cfg.tolerance;
            Ok((
                format!("({a},{b}) on {left:?} vs ({c},{d}) on {right:?}"),
                VerificationReport::new("independence-disjoint", residual, cfg.tolerance)
                    .with("criterion_residual", criterion.residual)
                    .with("moment_gap", gap.relative),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(aggregate("independence-disjoint", cfg.tolerance, labelled).with("max_degree", max_degree))
}

fn restricted(k: Kernel, cells: &[usize]) -> Result<Kernel> {
    let entries = k
        .nonzero_entries()
        .filter(|(idx, _)| idx.iter().all(|i| cells.contains(i)));
    let out = Kernel::from_entries(k.p(), k.q(), k.cells(), entries)?;
    let norm = out.norm();
    Ok(out.scale(Complex64::new(1.0 / norm, 0.0)))
}

/// The overlapping pair `f = g = e1 (x) e1`: the criterion must fail and the
/// covariance must be clearly positive. Passes when both are observed.
pub fn independence_overlap() -> Result<VerificationReport> {
    let f = Kernel::elementary(1, 1, 2, &[0, 0], Complex64::new(1.0, 0.0))?;
    let criterion = independence_check(&f, &f, EXACT_TOLERANCE)?;
    let cov = criterion.real("covariance").unwrap_or(0.0);
    let observed = !criterion.pass && cov > 1e-3;
    Ok(
        VerificationReport::new("independence-overlap", if observed { 0.0 } else { 1.0 }, 0.0)
            .with("criterion_residual", criterion.residual)
            .with("criterion_pass", criterion.pass)
            .with("covariance", cov),
    )
}

/// Random pairs with random supports: whenever the criterion passes at
/// `1e-12` the covariance must be below the tolerance. The residual is the
/// largest covariance among criterion-passing pairs.
pub fn independence_random(cfg: &SuiteConfig, pairs: usize) -> Result<VerificationReport> {
    let rows = (0..pairs)
        .into_par_iter()
        .map(|k| {
            let mut rng = case_rng(cfg.seed, stream(RANDOM_PAIRS, k));
            let n = rng.random_range(1..=cfg.max_cells);
            let (a, b) = nonzero_order(&mut rng, 2);
            let (c, d) = nonzero_order(&mut rng, 2);
            let (f, _) = random_supported_kernel(a, b, n, &mut rng)?;
            let (g, _) = random_supported_kernel(c, d, n, &mut rng)?;
            let r = independence_check(&f, &g, EXACT_TOLERANCE)?;
            Ok((r.pass, r.real("covariance").unwrap_or(f64::NAN)))
        })
        .collect::<Result<Vec<_>>>()?;
    let passing: Vec<f64> = rows.iter().filter(|(p, _)| *p).map(|(_, c)| *c).collect();
    let worst = passing
        .iter()
        .copied()
        .fold(0.0, |m: f64, c| if c.is_nan() { f64::INFINITY } else { m.max(c.abs()) });
    let failing_min_cov = rows
        .iter()
        .filter(|(p, _)| !*p)
        .map(|(_, c)| *c)
        .fold(f64::INFINITY, f64::min);
    Ok(VerificationReport::new("independence-random", worst, cfg.tolerance)
        .with("pairs", pairs)
        .with("criterion_passes", passing.len())
        .with("min_covariance_when_criterion_fails", failing_min_cov)
        .with("seed", cfg.seed))
}

fn nonzero_order<R: Rng>(rng: &mut R, max: usize) -> (usize, usize) {
    loop {
        let p = rng.random_range(0..=max);
        let q = rng.random_range(0..=max);
        if p + q > 0 {
            return (p, q);
        }
    }
}

/// Certifies the variance normalization and the Hermite product identity
/// for every `a + b + c + d <= max_total`.
pub fn hermite_product_check(max_total: usize) -> VerificationReport {
    let resolution = hermite::resolve_rho(max_total);
    let residual = resolution.certified_rho.map_or(f64::INFINITY, |rho| {
        resolution
            .residuals
            .iter()
            .find(|(r, _)| *r == rho)
            .map_or(f64::INFINITY, |(_, res)| *res)
    });
    let mut report = VerificationReport::new("hermite-product", residual, 0.0)
        .with("max_total", max_total)
        .with("cases", hermite::quadruples(max_total).count())
        .with("certified_rho", resolution.certified_rho.unwrap_or(f64::NAN));
    for (rho, res) in &resolution.residuals {
        report.insert(format!("residual_at_rho_{rho}"), *res);
    }
    report
}

/// `E[J_{m,n} conj(J_{m',n'})] = [m=m'][n=n'] m! n! rho^{m+n}` for
/// `m + n, m' + n' <= max_degree`, with `z = sqrt(rho) w` and `w` standard.
pub fn hermite_orthogonality(max_degree: usize, rho: f64) -> VerificationReport {
    let polys: Vec<((usize, usize), ChaosPolynomial)> = (0..=max_degree)
        .flat_map(|m| (0..=max_degree - m).map(move |n| (m, n)))
        .map(|(m, n)| {
            let j = HermitePolynomial::build(m as u32, n as u32, rho);
            let terms = j.terms().into_iter().map(|((a, b), c)| {
                let scale = rho.powf((a + b) as f64 / 2.0);
                (Monomial::new(&[a as u16], &[b as u16]), Complex64::new(c * scale, 0.0))
            });
            ((m, n), ChaosPolynomial::from_terms(1, terms))
        })
        .collect();
    let mut worst: f64 = 0.0;
    for ((m, n), p) in &polys {
        for ((m2, n2), q) in &polys {
            let got = oracle::inner(p, q);
            let expected = if (m, n) == (m2, n2) {
                crate::numeric::factorial_f64(*m) * crate::numeric::factorial_f64(*n) * rho.powi((m + n) as i32)
            } else {
                0.0
            };
            worst = worst.max((got - expected).norm() / expected.max(1.0));
        }
    }
    VerificationReport::new("hermite-orthogonality", worst, IDENTITY_TOLERANCE)
        .with("max_degree", max_degree)
        .with("rho", rho)
        .with("pairs", polys.len() * polys.len())
}

/// Hypercontractivity at `r = 4` for `per_order` random kernels of every
/// order with `p + q <= max_order`, plus the closed-form cases.
pub fn hypercontractivity_grid(cfg: &SuiteConfig, per_order: usize, max_order: usize) -> Result<VerificationReport> {
    let orders: Vec<(usize, usize)> = (0..=max_order)
        .flat_map(|p| (0..=max_order - p).map(move |q| (p, q)))
        .collect();
    let cases: Vec<(usize, (usize, usize), usize)> = orders
        .iter()
        .flat_map(|&o| (0..per_order).map(move |t| (o, t)))
        .enumerate()
        .map(|(k, (o, t))| (k, o, t))
        .collect();
    let mut labelled = cases
        .par_iter()
        .map(|&(k, (p, q), t)| {
            let n = 1 + t % cfg.max_cells;
            let f = random_kernel(p, q, n, &mut case_rng(cfg.seed, stream(HYPER, k)))?;
            Ok((format!("({p},{q}) n={n} trial={t}"), hypercontractivity_check(&f)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let one = Complex64::new(1.0, 0.0);
    let coordinate = hypercontractivity_check(&Kernel::elementary(1, 0, 1, &[0], one)?)?;
    let centered = hypercontractivity_check(&Kernel::elementary(1, 1, 1, &[0, 0], one)?)?;
    let closed_form_ok = coordinate.real("fourth_moment") == Some(2.0) && centered.real("fourth_moment") == Some(9.0);
    labelled.push(("closed form z".into(), coordinate));
    labelled.push(("closed form |z|^2 - 1".into(), centered));
    let report = aggregate("hypercontractivity", 0.0, labelled)
        .with("per_order", per_order)
        .with("max_order", max_order)
        .with("closed_forms_exact", closed_form_ok);
    Ok(if closed_form_ok {
        report
    } else {
        let mut r = report;
        r.residual = f64::INFINITY;
        r.pass = false;
        r
    })
}

/// The sequences `f_1 = e1 (x) e1` and `f_{2,k} = e1 (x) e1 / k + e2 (x) e2`
/// on two cells, `k = 1..=len`.
pub fn vanishing_overlap_sequences(len: usize) -> Result<[KernelSequence; 2]> {
    let one = Complex64::new(1.0, 0.0);
    let e11 = Kernel::elementary(1, 1, 2, &[0, 0], one)?;
    let e22 = Kernel::elementary(1, 1, 2, &[1, 1], one)?;
    let second = (1..=len)
        .map(|k| &e11.scale(Complex64::new(1.0 / k as f64, 0.0)) + &e22)
        .collect();
    Ok([
        KernelSequence::new("fixed", vec![e11.clone(); len])?,
        KernelSequence::new("vanishing-overlap", second)?,
    ])
}

/// Decay of the diagnostics along [`vanishing_overlap_sequences`]:
///
/// * contraction norms stay within a factor 3 of `C/k` on both sides,
///   `C` the value at `k = 1`;
/// * covariances stay below `3 C'/k`;
/// * the degree-4 moment gap is non-increasing up to `1e-10`.
///
/// The residual is the largest violation of these envelopes.
pub fn asymptotic_decay(len: usize) -> Result<VerificationReport> {
    let table = asymptotic_diagnostics(&vanishing_overlap_sequences(len)?, 4)?;
    let c_norm = table.rows[0].max_contraction_norm;
    let c_cov = table.rows[0].max_covariance;
    let mut violation: f64 = 0.0;
    let mut previous_gap = f64::INFINITY;
    for row in &table.rows {
        let k = row.index as f64;
        let x = row.max_contraction_norm;
        violation = violation.max(x - 3.0 * c_norm / k).max(c_norm / (3.0 * k) - x);
        violation = violation.max(row.max_covariance - 3.0 * c_cov / k);
        violation = violation.max(row.moment_gap - previous_gap - 1e-10);
        previous_gap = row.moment_gap;
    }
    let last = table.rows.last().expect("non-empty table");
    let rate = |first: f64, last_value: f64| (first / last_value).ln() / (len as f64).ln();
    Ok(VerificationReport::new("asymptotic", violation.max(0.0), 0.0)
        .with("indices", len)
        .with("contraction_norm_first", c_norm)
        .with("contraction_norm_last", last.max_contraction_norm)
        .with("covariance_first", c_cov)
        .with("covariance_last", last.max_covariance)
        .with("moment_gap_first", table.rows[0].moment_gap)
        .with("moment_gap_last", last.moment_gap)
        .with("contraction_decay_exponent", rate(c_norm, last.max_contraction_norm))
        .with("covariance_decay_exponent", rate(c_cov, last.max_covariance))
        .with(
            "sup_second_moment",
            table.sup_second_moments.iter().copied().fold(0.0, f64::max),
        ))
}

/// Monte Carlo estimates of `E|I(f)|^2` for `kernels` random kernels against
/// the oracle. A kernel is within band when its estimate is within 4
/// standard errors; the suite passes when at least 95% are.
pub fn monte_carlo_isometry(cfg: &SuiteConfig, kernels: usize) -> Result<VerificationReport> {
    let mut z_scores = Vec::with_capacity(kernels);
    for k in 0..kernels {
        let mut rng = case_rng(cfg.seed, stream(MONTE_CARLO, k));
        let n = rng.random_range(1..=cfg.max_cells);
        let (p, q) = nonzero_order(&mut rng, 2);
        let f = random_kernel(p, q, n, &mut rng)?;
        let poly = expand(&f)?;
        let exact = oracle::second_moment(&poly);
        let ev = poly.evaluator();
        let plan = SamplePlan::new(cfg.seed.wrapping_add(k as u64), cfg.samples, n)?;
        let est = estimate_with(plan, |z| {
            let mut scratch = Vec::new();
            Complex64::new(ev.evaluate(z, &mut scratch).norm_sqr(), 0.0)
        });
        z_scores.push(est.z_score(Complex64::new(exact, 0.0)));
    }
    let within = z_scores.iter().filter(|z| **z <= 4.0).count();
    let fraction = within as f64 / kernels as f64;
    Ok(VerificationReport::new("mc-estimate", (0.95 - fraction).max(0.0), 0.0)
        .with("kernels", kernels)
        .with("samples", cfg.samples)
        .with("within_4_se", within)
        .with("fraction_within", fraction)
        .with("max_z_score", z_scores.iter().copied().fold(0.0, f64::max))
        .with("generator", GENERATOR)
        .with("seed", cfg.seed))
}

/// Every suite at its acceptance size, sorted by identity. A nonzero
/// `perturbation` is injected into the product grids.
pub fn selftest(cfg: &SuiteConfig, perturbation: f64) -> Result<Vec<VerificationReport>> {
    let mut reports = vec![
        product_grid(cfg, false, perturbation)?,
        product_grid(cfg, true, perturbation)?,
        isometry_grid(cfg)?,
        conjugate_grid(cfg)?,
        covariance_grid(cfg)?,
        independence_disjoint(cfg, 6)?,
        independence_overlap()?,
        independence_random(cfg, 200)?,
        hermite_product_check(8),
        hermite_orthogonality(6, 1.0),
        hypercontractivity_grid(cfg, 100, 4)?,
        asymptotic_decay(64)?,
        monte_carlo_isometry(cfg, 50)?,
        oracle::quadrature_cross_check(4, 40),
    ];
    reports.sort_by(|x, y| x.identity.cmp(&y.identity));
    Ok(reports)
}
