use serde::Serialize;

use super::covariance::{covariance_formula, oracle_covariance};
use super::expand::expand;
use super::independence::moment_gap;
use crate::error::{ChaosError, Result};
use crate::kernels::{ContractionSpec, Kernel};
use crate::oracle;

/// An indexed family `f_1, f_2, ...` of kernels of one fixed order.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSequence {
    label: String,
    entries: Vec<Kernel>,
}

impl KernelSequence {
    pub fn new(label: impl Into<String>, entries: Vec<Kernel>) -> Result<Self> {
        let label = label.into();
        let first = entries
            .first()
            .ok_or_else(|| ChaosError::Heterogeneous(format!("sequence `{label}` is empty")))?;
        let (order, cells) = (first.order(), first.cells());
        if let Some((k, bad)) = entries
            .iter()
            .enumerate()
            .find(|(_, e)| e.order() != order || e.cells() != cells)
        {
            return Err(ChaosError::Heterogeneous(format!(
                "sequence `{label}` entry {k} has order {:?} on {} cells, expected {:?} on {}",
                bad.order(),
                bad.cells(),
                order,
                cells
            )));
        }
        Ok(Self { label, entries })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn entries(&self) -> &[Kernel] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn order(&self) -> (usize, usize) {
        self.entries[0].order()
    }
}

/// Diagnostics for one ordered pair `(left, right)` of sequences at one index.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairDiagnostics {
    pub left: usize,
    pub right: usize,
    /// Largest `|f_left (x)_{r,s} f_right|` over admissible `r + s > 0`.
    pub max_contraction_direct: f64,
    /// Largest `|f_left (x)_{r,s} h_right|` over admissible `r + s > 0`.
    pub max_contraction_reversed: f64,
    /// Exact `Cov(|F_left|^2, |F_right|^2)`.
    pub covariance: f64,
    /// The same covariance from the contraction-norm formula.
    pub covariance_formula: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosticsRow {
    /// 1-based position in the sequences.
    pub index: usize,
    pub cells: usize,
    pub max_contraction_norm: f64,
    pub max_covariance: f64,
    /// Largest absolute moment-factorization gap up to the table's degree.
    pub moment_gap: f64,
    /// `E|F_i|^2` for each sequence.
    pub second_moments: Vec<f64>,
    pub pairs: Vec<PairDiagnostics>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoticTable {
    pub labels: Vec<String>,
    pub moment_degree: usize,
    pub rows: Vec<DiagnosticsRow>,
    /// `sup_n E|F_{i,n}|^2` per sequence over the supplied indices.
    pub sup_second_moments: Vec<f64>,
}

impl AsymptoticTable {
    /// Per row: whether "covariance vanishes" and "all contraction norms
    /// vanish" agree at the given thresholds.
    pub fn consistency(&self, contraction_tol: f64, covariance_tol: f64) -> Vec<bool> {
        self.rows
            .iter()
            .map(|r| (r.max_contraction_norm <= contraction_tol) == (r.max_covariance <= covariance_tol))
            .collect()
    }
}

/// Tabulates, for every index position, the contraction norms and squared
/// modulus covariances between every ordered pair of distinct sequences,
/// plus the joint-moment factorization gap up to `moment_degree`.
pub fn asymptotic_diagnostics(seqs: &[KernelSequence], moment_degree: usize) -> Result<AsymptoticTable> {
    if seqs.len() < 2 {
        return Err(ChaosError::Heterogeneous("at least two sequences are needed".into()));
    }
    let len = seqs[0].len();
    if let Some(s) = seqs.iter().find(|s| s.len() != len) {
        return Err(ChaosError::Heterogeneous(format!(
            "sequence `{}` has {} entries, expected {len}",
            s.label(),
            s.len()
        )));
    }

    let mut rows = Vec::with_capacity(len);
    for idx in 0..len {
        let kernels: Vec<&Kernel> = seqs.iter().map(|s| &s.entries()[idx]).collect();
        let cells = kernels[0].cells();
        if kernels.iter().any(|k| k.cells() != cells) {
            return Err(ChaosError::Heterogeneous(format!(
                "entries at index {} live on different cell counts",
                idx + 1
            )));
        }
        let symmetric: Vec<Kernel> = kernels.iter().map(|k| k.ito_symmetrize()).collect();
        let reversed: Vec<Kernel> = symmetric.iter().map(Kernel::reversed_conjugate).collect();
        let polys = kernels.iter().map(|k| expand(k)).collect::<Result<Vec<_>>>()?;

        let mut pairs = Vec::new();
        for left in 0..seqs.len() {
            for right in 0..seqs.len() {
                if left == right {
                    continue;
                }
                let (a_l, b_l) = symmetric[left].order();
                let (a_r, b_r) = symmetric[right].order();
                let mut direct: f64 = 0.0;
                for r in 0..=a_l.min(b_r) {
                    for s in 0..=a_r.min(b_l) {
                        if r + s > 0 {
                            let c = symmetric[left].contract(&symmetric[right], ContractionSpec::new(r, s))?;
                            direct = direct.max(c.norm());
                        }
                    }
                }
                let mut rev: f64 = 0.0;
                for r in 0..=a_l.min(a_r) {
                    for s in 0..=b_l.min(b_r) {
                        if r + s > 0 {
                            let c = symmetric[left].contract(&reversed[right], ContractionSpec::new(r, s))?;
                            rev = rev.max(c.norm());
                        }
                    }
                }
                pairs.push(PairDiagnostics {
                    left,
                    right,
                    max_contraction_direct: direct,
                    max_contraction_reversed: rev,
                    covariance: oracle_covariance(kernels[left], kernels[right])?,
                    covariance_formula: covariance_formula(kernels[left], kernels[right])?,
                });
            }
        }
        rows.push(DiagnosticsRow {
            index: idx + 1,
            cells,
            max_contraction_norm: pairs
                .iter()
                .map(|p| p.max_contraction_direct.max(p.max_contraction_reversed))
                .fold(0.0, f64::max),
            max_covariance: pairs.iter().map(|p| p.covariance).fold(0.0, f64::max),
            moment_gap: moment_gap(&polys, moment_degree).absolute,
            second_moments: polys.iter().map(oracle::second_moment).collect(),
            pairs,
        });
    }
    let sup_second_moments = (0..seqs.len())
        .map(|s| rows.iter().map(|r| r.second_moments[s]).fold(0.0, f64::max))
        .collect();
    Ok(AsymptoticTable {
        labels: seqs.iter().map(|s| s.label().to_string()).collect(),
        moment_degree,
        rows,
        sup_second_moments,
    })
}
