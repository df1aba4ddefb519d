//! Exhaustive search over `(k, M, A, B)` grids for progressions on which
//! `a_k` vanishes modulo `M`.
//!
//! Survivors are reported as verified to the configured precision only; the
//! report echoes the grid and bounds.

use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::congruence::{
    catalog_lookup, ClaimReport, CongruenceClaim, Status, VerificationResult, Witness,
};
use crate::error::{Error, Result};
use crate::partitions::a_table_series;
use crate::series::{CoefficientRing, MAX_MODULUS};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanConfig {
    #[serde(rename = "k")]
    pub k_values: Vec<u64>,
    #[serde(rename = "M")]
    pub moduli: Vec<u64>,
    #[serde(rename = "A")]
    pub steps: Vec<u64>,
    /// Offsets to try; `None` means every `B < A`.
    #[serde(rename = "B", default)]
    pub offsets: Option<Vec<u64>>,
    #[serde(rename = "N")]
    pub precision: usize,
    #[serde(default)]
    pub survivors_only: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanLimits {
    pub max_precision: usize,
    /// Ceiling on `grid size * N`.
    pub max_work: u128,
}

impl Default for ScanLimits {
    fn default() -> Self {
        ScanLimits {
            max_precision: 50_000,
            max_work: 200_000_000,
        }
    }
}

impl ScanLimits {
    pub fn unlimited() -> Self {
        ScanLimits {
            max_precision: usize::MAX,
            max_work: u128::MAX,
        }
    }
}

impl ScanConfig {
    fn offsets_for(&self, step: u64) -> Vec<u64> {
        match &self.offsets {
            Some(list) => list.iter().copied().filter(|&b| b < step).collect(),
            None => (0..step).collect(),
        }
    }

    /// Every claim in the grid, in `(M, k, A, B)` order.
    pub fn grid(&self) -> Vec<CongruenceClaim> {
        let mut moduli = self.moduli.clone();
        moduli.sort_unstable();
        moduli.dedup();
        let mut ks = self.k_values.clone();
        ks.sort_unstable();
        ks.dedup();
        let mut steps = self.steps.clone();
        steps.sort_unstable();
        steps.dedup();
        let mut out = Vec::new();
        for &m in &moduli {
            for &k in &ks {
                for &a in &steps {
                    let mut offsets = self.offsets_for(a);
                    offsets.sort_unstable();
                    offsets.dedup();
                    for b in offsets {
                        out.push(CongruenceClaim::single(k, a, b, m));
                    }
                }
            }
        }
        out
    }

    pub fn validate(&self, limits: &ScanLimits) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        if self.k_values.is_empty() || self.moduli.is_empty() || self.steps.is_empty() {
            return bad("scan grid needs at least one k, one modulus and one step".into());
        }
        if self.precision == 0 {
            return Err(Error::ZeroPrecision);
        }
        if let Some(&k) = self.k_values.iter().find(|&&k| k == 0) {
            return bad(format!("k = {k} is not a number of colors"));
        }
        if let Some(&m) = self
            .moduli
            .iter()
            .find(|&&m| !(2..=MAX_MODULUS).contains(&m))
        {
            return Err(Error::InvalidModulus(m));
        }
        if self.steps.contains(&0) {
            return bad("progression step A must be >= 1".into());
        }
        if let Some(&a) = self.steps.iter().find(|&&a| a > self.precision as u64) {
            return bad(format!(
                "step A = {a} exceeds precision N = {}",
                self.precision
            ));
        }
        let grid = self.grid().len() as u128;
        if grid == 0 {
            return bad("scan grid is empty".into());
        }
        if self.precision > limits.max_precision {
            return Err(Error::ResourceCeiling {
                estimate: self.precision as u128,
                ceiling: limits.max_precision as u128,
            });
        }
        let estimate = grid * self.precision as u128;
        if estimate > limits.max_work {
            return Err(Error::ResourceCeiling {
                estimate,
                ceiling: limits.max_work,
            });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanEntry {
    #[serde(flatten)]
    pub report: ClaimReport,
    /// Catalog entry that lists this progression, if any.
    pub catalog: Option<String>,
    /// A survivor absent from the catalog: a finding, not a failure.
    pub unlisted: bool,
}

impl ScanEntry {
    pub fn survived(&self) -> bool {
        self.report.result.is_verified()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub config: ScanConfig,
    pub grid_size: usize,
    pub survivor_count: usize,
    pub results: Vec<ScanEntry>,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

impl ScanReport {
    pub fn survivors(&self) -> impl Iterator<Item = &ScanEntry> {
        self.results.iter().filter(|e| e.survived())
    }
}

pub fn scan(config: &ScanConfig, limits: &ScanLimits) -> Result<ScanReport> {
    config.validate(limits)?;
    let grid = config.grid();
    let n_terms = config.precision;

    // One series per (k, M); extraction per (A, B) is cheap.
    let mut pairs: Vec<(u64, u64)> = grid.iter().map(|c| (c.k.k0, c.modulus)).collect();
    pairs.dedup();
    let series: Vec<_> = pairs
        .par_iter()
        .map(|&(k, m)| {
            a_table_series(k, CoefficientRing::Modular(m), n_terms)
                .map(|t| ((k, m), t.into_series()))
        })
        .collect::<Result<_>>()?;

    let results: Vec<ScanEntry> = grid
        .par_iter()
        .map(|claim| {
            let (k, m) = (claim.k.k0, claim.modulus);
            let s = &series
                .iter()
                .find(|(key, _)| *key == (k, m))
                .expect("series built")
                .1;
            let checked_n_up_to = (n_terms as u64 - 1 - claim.offset) / claim.step;
            let sub = s.extract_progression(claim.step, claim.offset)?;
            let witness = sub.first_nonzero().map(|n| Witness {
                j: 0,
                k,
                n: n as u64,
                residue: sub.residues().expect("modular ring")[n],
            });
            let result = VerificationResult {
                status: if witness.is_some() {
                    Status::Counterexample
                } else {
                    Status::Verified
                },
                checked_n_up_to,
                checked_j_up_to: 0,
                witness,
            };
            let catalog = catalog_lookup(k, claim.step, claim.offset, m).map(|e| e.name);
            let unlisted = result.is_verified() && catalog.is_none();
            Ok(ScanEntry {
                report: ClaimReport {
                    name: None,
                    claim: *claim,
                    result,
                },
                catalog,
                unlisted,
            })
        })
        .collect::<Result<_>>()?;

    let survivor_count = results.iter().filter(|e| e.survived()).count();
    let grid_size = results.len();
    let results = if config.survivors_only {
        results.into_iter().filter(|e| e.survived()).collect()
    } else {
        results
    };
    let timestamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or_default();
    Ok(ScanReport {
        config: config.clone(),
        grid_size,
        survivor_count,
        results,
        timestamp,
    })
}
