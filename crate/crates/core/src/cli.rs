//! Scenario files, batch runs and reports behind the `complex-chaos` binary.
//!
//! Scenarios and reports are JSON. Complex numbers are `{"re", "im"}`,
//! multi-indices are integer arrays, kernel entries are sparse
//! `{"idx": [...], "re", "im"}` lists with omitted entries meaning zero.
//!
//! ```json
//! {
//!   "measure": { "masses": [0.5, 0.5] },
//!   "kernels": [
//!     { "name": "f", "p": 1, "q": 1, "entries": [{ "idx": [0, 0], "re": 1.0, "im": 0.0 }] },
//!     { "name": "g", "p": 1, "q": 1, "coordinates": "indicator",
//!       "entries": [{ "idx": [1, 1], "re": 2.0, "im": 0.0 }] }
//!   ],
//!   "sequences": [{ "name": "s", "kernels": ["f", "g"] }],
//!   "checks": [
//!     { "name": "f-g", "kind": "independence", "f": "f", "g": "g", "tol": 1e-12 },
//!     { "name": "grid", "kind": "product", "grid": { "max_total": 6, "max_cells": 3, "trials": 20 } }
//!   ]
//! }
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::time::{SystemTime, UNIX_EPOCH};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::chaos::{
    asymptotic_diagnostics, certify_product, certify_product_conjugated, covariance_squares, expand,
    hypercontractivity_check, independence_check, integral_conjugate, isometry_check, KernelSequence,
    VerificationReport, EXACT_TOLERANCE, IDENTITY_TOLERANCE,
};
use crate::error::ChaosError;
use crate::hermite::{self, HermitePolynomial};
use crate::kernels::{Caps, DiscreteMeasure, Kernel, MAX_ORDER};
use crate::montecarlo::{estimate, SamplePlan, GENERATOR};
use crate::oracle;
use crate::suite::{self, SuiteConfig};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorKind {
    Io,
    Parse,
    Validation,
    Cap,
}

/// Machine-readable record of an input error. Always exits with
/// [`EXIT_INPUT`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputError {
    pub kind: ErrorKind,
    pub message: String,
}

impl InputError {
    pub fn new(kind: ErrorKind, message: impl Into<String>) -> Self {
        Self {
            kind,
            message: message.into(),
        }
    }

    fn validation(message: impl Into<String>) -> Self {
        Self::new(ErrorKind::Validation, message)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&serde_json::json!({ "error": self })).expect("error record serializes")
    }
}

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?} error: {}", self.kind, self.message)
    }
}

impl std::error::Error for InputError {}

impl From<ChaosError> for InputError {
    fn from(e: ChaosError) -> Self {
        let kind = match e {
            ChaosError::CapExceeded { .. } => ErrorKind::Cap,
            _ => ErrorKind::Validation,
        };
        Self::new(kind, e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coordinates {
    /// Coefficients against the orthonormal cell basis.
    #[default]
    Orthonormal,
    /// Coefficients against raw cell indicators; converted on ingestion.
    Indicator,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub idx: Vec<usize>,
    #[serde(default)]
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelSpec {
    pub name: String,
    pub p: usize,
    pub q: usize,
    #[serde(default)]
    pub coordinates: Coordinates,
    #[serde(default)]
    pub entries: Vec<Entry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceSpec {
    pub name: String,
    pub kernels: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    Product,
    ProductConjugated,
    Isometry,
    ConjugateLemma,
    Covariance,
    Independence,
    Asymptotic,
    Hypercontractivity,
    HermiteProduct,
    McEstimate,
}

impl CheckKind {
    fn default_tolerance(self, identity_tol: f64) -> f64 {
        match self {
            CheckKind::Product | CheckKind::ProductConjugated | CheckKind::Covariance => identity_tol,
            CheckKind::Isometry | CheckKind::ConjugateLemma | CheckKind::Independence | CheckKind::Asymptotic => {
                EXACT_TOLERANCE
            }
            CheckKind::Hypercontractivity | CheckKind::HermiteProduct => 0.0,
            CheckKind::McEstimate => 4.0,
        }
    }

    fn supports_grid(self) -> bool {
        matches!(
            self,
            CheckKind::Product
                | CheckKind::ProductConjugated
                | CheckKind::Isometry
                | CheckKind::ConjugateLemma
                | CheckKind::Covariance
        )
    }
}

/// Random-pair grid over every `(a, b, c, d)` with `a + b + c + d <= max_total`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub max_total: usize,
    pub max_cells: usize,
    pub trials: usize,
}

/// One requested check. `f`/`g` name kernels, `sequences` names sequences,
/// `grid` replaces the kernels by a seeded random grid, `max` bounds the
/// Hermite product check, `degree` the asymptotic moment-gap degree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckSpec {
    pub name: String,
    pub kind: CheckKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sequences: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub measure: DiscreteMeasure,
    #[serde(default)]
    pub kernels: Vec<KernelSpec>,
    #[serde(default)]
    pub sequences: Vec<SequenceSpec>,
    pub checks: Vec<CheckSpec>,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, InputError> {
        serde_json::from_str(text).map_err(|e| {
            // Measure validation surfaces through serde as a data error.
            let kind = if e.is_data() && e.to_string().contains("invalid measure") {
                ErrorKind::Validation
            } else {
                ErrorKind::Parse
            };
            InputError::new(kind, e.to_string())
        })
    }
}

/// Run-wide settings from the command line.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    /// Tolerance for the relative identities (product formulas, covariance)
    /// when a check gives none.
    pub tolerance: f64,
    pub seed: u64,
    pub samples: usize,
    pub caps: Caps,
    /// Check names to run; empty runs all.
    pub only: Vec<String>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            tolerance: IDENTITY_TOLERANCE,
            seed: 42,
            samples: 100_000,
            caps: Caps::HARD,
            only: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Settings {
    pub tolerance: f64,
    pub seed: u64,
    pub samples: usize,
    pub max_order: usize,
    pub max_cells: usize,
    pub certified_rho: Option<f64>,
    pub generator: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelSummary {
    pub name: String,
    pub p: usize,
    pub q: usize,
    pub coordinates: Coordinates,
    /// `L^2(mu)` norm, equal to the orthonormal coefficient norm.
    pub norm: f64,
    /// Norm of the coefficients as entered.
    pub entered_norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub kind: CheckKind,
    pub report: VerificationReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<Value>,
}

/// Everything in a report except its timestamp; a deterministic function
/// of the inputs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportBody {
    pub tool: String,
    pub command: String,
    pub settings: Settings,
    pub pass: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub kernels: Vec<KernelSummary>,
    pub checks: Vec<CheckRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub generated_at_unix: u64,
    pub body: ReportBody,
}

impl Report {
    fn new(body: ReportBody) -> Self {
        let generated_at_unix = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        Self {
            generated_at_unix,
            body,
        }
    }

    /// [`EXIT_PASS`] iff every check passed.
    pub fn exit_code(&self) -> i32 {
        if self.body.pass {
            EXIT_PASS
        } else {
            EXIT_FAIL
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn body_json(&self) -> String {
        serde_json::to_string_pretty(&self.body).expect("report serializes")
    }
}

fn settings(opts: &RunOptions) -> Settings {
    Settings {
        tolerance: opts.tolerance,
        seed: opts.seed,
        samples: opts.samples,
        max_order: opts.caps.max_order,
        max_cells: opts.caps.max_cells,
        certified_rho: hermite::resolve_rho(opts.caps.max_order.min(MAX_ORDER)).certified_rho,
        generator: GENERATOR,
    }
}

fn body(command: &str, opts: &RunOptions, kernels: Vec<KernelSummary>, mut checks: Vec<CheckRecord>) -> ReportBody {
    checks.sort_by(|x, y| x.name.cmp(&y.name));
    ReportBody {
        tool: format!("complex-chaos {}", env!("CARGO_PKG_VERSION")),
        command: command.to_string(),
        settings: settings(opts),
        pass: checks.iter().all(|c| c.report.pass),
        kernels,
        checks,
    }
}

/// A validated scenario with kernels converted to orthonormal coordinates.
#[derive(Debug, Clone)]
pub struct Prepared {
    kernels: BTreeMap<String, Kernel>,
    summaries: Vec<KernelSummary>,
    sequences: BTreeMap<String, KernelSequence>,
    checks: Vec<CheckSpec>,
}

/// Validates names, references and caps, and converts kernels.
pub fn prepare(scenario: &Scenario, opts: &RunOptions) -> Result<Prepared, InputError> {
    let mut names = BTreeSet::new();
    for name in scenario
        .kernels
        .iter()
        .map(|k| &k.name)
        .chain(scenario.sequences.iter().map(|s| &s.name))
    {
        if !names.insert(name.clone()) {
            return Err(InputError::validation(format!(
                "duplicate kernel or sequence name `{name}`"
            )));
        }
    }
    let mut check_names = BTreeSet::new();
    for c in &scenario.checks {
        if !check_names.insert(c.name.clone()) {
            return Err(InputError::validation(format!("duplicate check name `{}`", c.name)));
        }
    }

    let n = scenario.measure.cells();
    let mut kernels = BTreeMap::new();
    let mut summaries = Vec::new();
    for spec in &scenario.kernels {
        opts.caps.check(spec.p, spec.q, n)?;
        for e in &spec.entries {
            if e.idx.len() != spec.p + spec.q || e.idx.iter().any(|&i| i >= n) {
                return Err(InputError::validation(format!(
                    "kernel `{}`: index {:?} is not a multi-index of length {} over {n} cells",
                    spec.name,
                    e.idx,
                    spec.p + spec.q
                )));
            }
        }
        let entries = spec.entries.iter().map(|e| (e.idx.clone(), Complex64::new(e.re, e.im)));
        let kernel = match spec.coordinates {
            Coordinates::Orthonormal => Kernel::from_entries(spec.p, spec.q, n, entries.clone())?,
            Coordinates::Indicator => Kernel::from_indicator(spec.p, spec.q, &scenario.measure, entries.clone())?,
        };
        let entered = Kernel::from_entries(spec.p, spec.q, n, entries.clone())?;
        summaries.push(KernelSummary {
            name: spec.name.clone(),
            p: spec.p,
            q: spec.q,
            coordinates: spec.coordinates,
            norm: kernel.norm(),
            entered_norm: entered.norm(),
        });
        kernels.insert(spec.name.clone(), kernel);
    }

    let mut sequences = BTreeMap::new();
    for s in &scenario.sequences {
        let entries = s
            .kernels
            .iter()
            .map(|k| {
                kernels.get(k).cloned().ok_or_else(|| {
                    InputError::validation(format!("sequence `{}` references unknown kernel `{k}`", s.name))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        sequences.insert(s.name.clone(), KernelSequence::new(s.name.clone(), entries)?);
    }

    for c in &scenario.checks {
        validate_check(c, &kernels, &sequences, opts)?;
    }
    let checks = if opts.only.is_empty() {
        scenario.checks.clone()
    } else {
        if let Some(missing) = opts.only.iter().find(|o| !check_names.contains(*o)) {
            return Err(InputError::validation(format!(
                "--only names unknown check `{missing}`"
            )));
        }
        scenario
            .checks
            .iter()
            .filter(|c| opts.only.contains(&c.name))
            .cloned()
            .collect()
    };
    Ok(Prepared {
        kernels,
        summaries,
        sequences,
        checks,
    })
}

fn validate_check(
    c: &CheckSpec,
    kernels: &BTreeMap<String, Kernel>,
    sequences: &BTreeMap<String, KernelSequence>,
    opts: &RunOptions,
) -> Result<(), InputError> {
    let need_kernel = |field: &str, v: &Option<String>| -> Result<(), InputError> {
        match v {
            None => Err(InputError::validation(format!("check `{}` needs `{field}`", c.name))),
            Some(k) if !kernels.contains_key(k) => Err(InputError::validation(format!(
                "check `{}` references unknown kernel `{k}`",
                c.name
            ))),
            Some(_) => Ok(()),
        }
    };
    if let Some(t) = c.tol {
        if !(t.is_finite() && t >= 0.0) {
            return Err(InputError::validation(format!(
                "check `{}` has invalid tolerance {t}",
                c.name
            )));
        }
    }
    if let Some(grid) = c.grid {
        if !c.kind.supports_grid() {
            return Err(InputError::validation(format!(
                "check `{}`: kind does not take a grid",
                c.name
            )));
        }
        if grid.max_total > opts.caps.max_order || grid.max_cells > opts.caps.max_cells || grid.max_cells == 0 {
            return Err(InputError::new(
                ErrorKind::Cap,
                format!(
                    "check `{}`: grid order {} / cells {} outside caps {} / {}",
                    c.name, grid.max_total, grid.max_cells, opts.caps.max_order, opts.caps.max_cells
                ),
            ));
        }
        return Ok(());
    }
    match c.kind {
        CheckKind::Product | CheckKind::ProductConjugated | CheckKind::Covariance | CheckKind::Independence => {
            need_kernel("f", &c.f)?;
            need_kernel("g", &c.g)?;
            let (f, g) = (&kernels[c.f.as_ref().unwrap()], &kernels[c.g.as_ref().unwrap()]);
            let (a, b) = f.order();
            let (cc, d) = g.order();
            opts.caps.check(a + cc, b + d, f.cells())?;
            if c.kind == CheckKind::Independence && (a + b == 0 || cc + d == 0) {
                return Err(InputError::validation(format!(
                    "check `{}`: independence needs both orders nonzero",
                    c.name
                )));
            }
        }
        CheckKind::Isometry | CheckKind::ConjugateLemma | CheckKind::Hypercontractivity | CheckKind::McEstimate => {
            need_kernel("f", &c.f)?;
        }
        CheckKind::Asymptotic => {
            if c.sequences.len() < 2 {
                return Err(InputError::validation(format!(
                    "check `{}` needs at least two sequences",
                    c.name
                )));
            }
            for s in &c.sequences {
                if !sequences.contains_key(s) {
                    return Err(InputError::validation(format!(
                        "check `{}` references unknown sequence `{s}`",
                        c.name
                    )));
                }
            }
            let len = sequences[&c.sequences[0]].len();
            if c.sequences.iter().any(|s| sequences[s].len() != len) {
                return Err(InputError::validation(format!(
                    "check `{}`: sequences differ in length",
                    c.name
                )));
            }
        }
        CheckKind::HermiteProduct => {
            if c.max.unwrap_or(MAX_ORDER) > opts.caps.max_order {
                return Err(InputError::new(
                    ErrorKind::Cap,
                    format!("check `{}`: max above order cap {}", c.name, opts.caps.max_order),
                ));
            }
        }
    }
    Ok(())
}

fn run_check(p: &Prepared, c: &CheckSpec, opts: &RunOptions) -> Result<CheckRecord, InputError> {
    let tol = c.tol.unwrap_or_else(|| c.kind.default_tolerance(opts.tolerance));
    let kernel = |v: &Option<String>| &p.kernels[v.as_ref().expect("validated")];
    let mut details = None;
    let mut report = if let Some(grid) = c.grid {
        let cfg = SuiteConfig {
            seed: opts.seed,
            samples: opts.samples,
            tolerance: tol,
            max_total: grid.max_total,
            max_cells: grid.max_cells,
            trials: grid.trials,
        };
        let mut r = match c.kind {
            CheckKind::Product => suite::product_grid(&cfg, false, 0.0)?,
            CheckKind::ProductConjugated => suite::product_grid(&cfg, true, 0.0)?,
            CheckKind::Isometry => suite::isometry_grid(&cfg)?,
            CheckKind::ConjugateLemma => suite::conjugate_grid(&cfg)?,
            CheckKind::Covariance => suite::covariance_grid(&cfg)?,
            _ => unreachable!("validated"),
        };
        if c.tol.is_some() {
            r.tolerance = tol;
            r.pass = r.residual <= tol;
        }
        r
    } else {
        match c.kind {
            CheckKind::Product | CheckKind::ProductConjugated => {
                let (f, g) = (kernel(&c.f), kernel(&c.g));
                let conjugated = c.kind == CheckKind::ProductConjugated;
                let expansion = if conjugated {
                    crate::chaos::product_conjugated(f, g)?
                } else {
                    crate::chaos::product(f, g)?
                };
                details = Some(serde_json::to_value(expansion.summary()).expect("summary serializes"));
                if conjugated {
                    certify_product_conjugated(f, g, tol)?
                } else {
                    certify_product(f, g, tol)?
                }
            }
            CheckKind::Isometry => retolerate(isometry_check(kernel(&c.f))?, tol),
            CheckKind::ConjugateLemma => retolerate(integral_conjugate(kernel(&c.f))?, tol),
            CheckKind::Covariance => retolerate(covariance_squares(kernel(&c.f), kernel(&c.g))?.report, tol),
            CheckKind::Independence => independence_check(kernel(&c.f), kernel(&c.g), tol)?,
            CheckKind::Hypercontractivity => retolerate(hypercontractivity_check(kernel(&c.f))?, tol),
            CheckKind::Asymptotic => {
                let seqs: Vec<KernelSequence> = c.sequences.iter().map(|s| p.sequences[s].clone()).collect();
                let table = asymptotic_diagnostics(&seqs, c.degree.unwrap_or(4))?;
                let consistency = table.consistency(tol, tol);
                let inconsistent = consistency.iter().filter(|ok| !**ok).count();
                details = Some(serde_json::to_value(&table).expect("table serializes"));
                VerificationReport::new("asymptotic", inconsistent as f64, 0.0)
                    .with("rows", table.rows.len())
                    .with("inconsistent_rows", inconsistent)
                    .with("vanishing_threshold", tol)
                    .with(
                        "sup_second_moment",
                        table.sup_second_moments.iter().copied().fold(0.0, f64::max),
                    )
            }
            CheckKind::HermiteProduct => retolerate(suite::hermite_product_check(c.max.unwrap_or(MAX_ORDER)), tol),
            CheckKind::McEstimate => {
                let f = kernel(&c.f);
                let sq = expand(f)?.modulus_squared();
                let exact = oracle::expectation(&sq).re;
                let plan = SamplePlan::new(opts.seed, opts.samples, f.cells())?;
                let est = estimate(&sq, plan)?;
                VerificationReport::new("mc-estimate", est.z_score(Complex64::new(exact, 0.0)), tol)
                    .with("estimate_re", est.value.re)
                    .with("estimate_im", est.value.im)
                    .with("std_error", est.std_error)
                    .with("samples", est.samples)
                    .with("oracle", exact)
                    .with("seed", opts.seed)
                    .with("residual_units", "standard errors")
            }
        }
    };
    report.insert(
        "check_tolerance_source",
        if c.tol.is_some() { "scenario" } else { "default" },
    );
    Ok(CheckRecord {
        name: c.name.clone(),
        kind: c.kind,
        report,
        details,
    })
}

fn retolerate(mut r: VerificationReport, tol: f64) -> VerificationReport {
    r.tolerance = tol;
    r.pass = r.residual <= tol;
    r
}

/// Runs every selected check of a scenario. Checks run concurrently; the
/// report lists them sorted by name.
pub fn run_scenario(scenario: &Scenario, opts: &RunOptions) -> Result<Report, InputError> {
    let prepared = prepare(scenario, opts)?;
    let checks = prepared
        .checks
        .par_iter()
        .map(|c| run_check(&prepared, c, opts))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Report::new(body("run", opts, prepared.summaries.clone(), checks)))
}

/// Reads, parses and runs a scenario file.
pub fn run_file(path: &std::path::Path, opts: &RunOptions) -> Result<Report, InputError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| InputError::new(ErrorKind::Io, format!("{}: {e}", path.display())))?;
    run_scenario(&Scenario::from_json(&text)?, opts)
}

/// All certification suites at acceptance size. A nonzero `perturbation`
/// is injected into the product expansions as a negative control.
pub fn selftest(opts: &RunOptions, perturbation: f64) -> Result<Report, InputError> {
    if opts.caps.max_order < 8 || opts.caps.max_cells < 3 {
        return Err(InputError::new(
            ErrorKind::Cap,
            "selftest needs caps of at least order 8 and 3 cells",
        ));
    }
    let cfg = SuiteConfig {
        seed: opts.seed,
        samples: opts.samples,
        tolerance: opts.tolerance,
        ..SuiteConfig::default()
    };
    if cfg.samples < 2 {
        return Err(InputError::validation("at least 2 samples are needed"));
    }
    let reports = suite::selftest(&cfg, perturbation)?;
    let checks = reports
        .into_iter()
        .map(|r| CheckRecord {
            name: r.identity.clone(),
            kind: kind_of(&r.identity),
            report: r,
            details: None,
        })
        .collect();
    Ok(Report::new(body("selftest", opts, Vec::new(), checks)))
}

fn kind_of(identity: &str) -> CheckKind {
    match identity {
        "product" => CheckKind::Product,
        "product-conjugated" => CheckKind::ProductConjugated,
        "isometry" | "oracle-quadrature" | "hermite-orthogonality" => CheckKind::Isometry,
        "conjugate-lemma" => CheckKind::ConjugateLemma,
        "covariance" => CheckKind::Covariance,
        "asymptotic" => CheckKind::Asymptotic,
        "hypercontractivity" => CheckKind::Hypercontractivity,
        "hermite-product" => CheckKind::HermiteProduct,
        "mc-estimate" => CheckKind::McEstimate,
        _ => CheckKind::Independence,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HermiteTerm {
    pub z: u32,
    pub zbar: u32,
    pub coeff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HermiteRow {
    pub m: u32,
    pub n: u32,
    pub rho: f64,
    pub polynomial: String,
    pub terms: Vec<HermiteTerm>,
}

/// `J_{m,n}(z, 1)` for every `m + n <= max`.
pub fn hermite_table(max: usize) -> Result<Vec<HermiteRow>, InputError> {
    if max > MAX_ORDER {
        return Err(InputError::new(
            ErrorKind::Cap,
            format!("--max {max} exceeds the order cap {MAX_ORDER}"),
        ));
    }
    Ok((0..=max as u32)
        .flat_map(|m| (0..=max as u32 - m).map(move |n| (m, n)))
        .map(|(m, n)| {
            let j = HermitePolynomial::build(m, n, 1.0);
            HermiteRow {
                m,
                n,
                rho: 1.0,
                polynomial: j.to_string(),
                terms: j
                    .terms()
                    .into_iter()
                    .map(|((z, zbar), coeff)| HermiteTerm { z, zbar, coeff })
                    .collect(),
            }
        })
        .collect())
}

/// The Hermite product identity for every `a + b + c + d <= max`, as a
/// one-check report.
pub fn hermite_product_report(max: usize, opts: &RunOptions) -> Result<Report, InputError> {
    if max > MAX_ORDER.min(opts.caps.max_order) {
        return Err(InputError::new(
            ErrorKind::Cap,
            format!("--max {max} exceeds the order cap"),
        ));
    }
    let report = suite::hermite_product_check(max);
    let mut table: BTreeMap<String, BTreeMap<String, u128>> = BTreeMap::new();
    for (a, b, c, d) in hermite::quadruples(max.min(4)) {
        table.insert(
            format!("{a},{b},{c},{d}"),
            hermite::hermite_product(a, b, c, d)
                .into_iter()
                .map(|((m, n), w)| (format!("{m},{n}"), w))
                .collect(),
        );
    }
    let record = CheckRecord {
        name: "hermite-product".into(),
        kind: CheckKind::HermiteProduct,
        report,
        details: Some(serde_json::to_value(table).expect("table serializes")),
    };
    Ok(Report::new(body(
        "hermite product-check",
        opts,
        Vec::new(),
        vec![record],
    )))
}
