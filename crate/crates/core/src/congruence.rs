//! Congruence claims `a_{c j + k0}(A n + B) = 0 (mod M)` and their
//! finite verification.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eta::f_ell;
use crate::partitions::a_table_series;
use crate::series::{CoefficientRing, MAX_MODULUS};

/// `k = c * j + k0`; `c = 0` pins a single `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KFamily {
    pub c: u64,
    pub k0: u64,
}

impl KFamily {
    pub fn fixed(k: u64) -> Self {
        KFamily { c: 0, k0: k }
    }

    pub fn at(&self, j: u64) -> u64 {
        self.c * j + self.k0
    }

    /// Smallest `j` with `at(j) == k`, if any.
    pub fn index_of(&self, k: u64) -> Option<u64> {
        if k < self.k0 {
            return None;
        }
        match self.c {
            0 => (k == self.k0).then_some(0),
            c => (k - self.k0).is_multiple_of(c).then_some((k - self.k0) / c),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModulusFamily {
    #[default]
    Fixed,
    /// Instance `j` reads `k = 2^j`, `M = 2^j`. Such claims carry
    /// `k = {c: 0, k0: 1}` and `M = 2`.
    TwoPower,
}

fn is_fixed(f: &ModulusFamily) -> bool {
    *f == ModulusFamily::Fixed
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CongruenceClaim {
    pub k: KFamily,
    #[serde(rename = "A")]
    pub step: u64,
    #[serde(rename = "B")]
    pub offset: u64,
    #[serde(rename = "M")]
    pub modulus: u64,
    #[serde(default, skip_serializing_if = "is_fixed")]
    pub family: ModulusFamily,
}

impl CongruenceClaim {
    pub fn new(k: KFamily, step: u64, offset: u64, modulus: u64) -> Self {
        CongruenceClaim {
            k,
            step,
            offset,
            modulus,
            family: ModulusFamily::Fixed,
        }
    }

    /// `a_k(A n + B) = 0 (mod M)` for one `k`.
    pub fn single(k: u64, step: u64, offset: u64, modulus: u64) -> Self {
        Self::new(KFamily::fixed(k), step, offset, modulus)
    }

    /// `a_{2^r}(A n + B) = 0 (mod 2^r)` for every `r`.
    pub fn two_power(step: u64, offset: u64) -> Self {
        CongruenceClaim {
            k: KFamily::fixed(1),
            step,
            offset,
            modulus: 2,
            family: ModulusFamily::TwoPower,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidArgument(m.to_string()));
        if self.k.k0 == 0 {
            return bad("k0 must be >= 1");
        }
        if self.step == 0 {
            return bad("progression step A must be >= 1");
        }
        match self.family {
            ModulusFamily::Fixed => {
                if self.modulus == 0 || self.modulus > MAX_MODULUS {
                    return Err(Error::InvalidModulus(self.modulus));
                }
            }
            ModulusFamily::TwoPower => {
                if self.k != KFamily::fixed(1) || self.modulus != 2 {
                    return bad("two_power claims must use k = {c: 0, k0: 1} and M = 2");
                }
            }
        }
        Ok(())
    }

    /// A single `(k, M)` pair: nothing varies with `j`.
    pub fn is_single(&self) -> bool {
        self.k.c == 0 && self.family == ModulusFamily::Fixed
    }

    /// `(k, M)` at family index `j`.
    pub fn instance(&self, j: u64) -> (u64, u64) {
        match self.family {
            ModulusFamily::Fixed => (self.k.at(j), self.modulus),
            ModulusFamily::TwoPower => (1 << j, 1 << j),
        }
    }

    /// `(j, k, M)` triples covered when families run up to `j_max`.
    pub fn instances(&self, j_max: u64) -> Vec<(u64, u64, u64)> {
        let top = if self.is_single() { 0 } else { j_max };
        (0..=top)
            .map(|j| {
                let (k, m) = self.instance(j);
                (j, k, m)
            })
            .collect()
    }

    /// Whether `a_k(A n + B) = 0 (mod M)` is one of the instances.
    pub fn covers(&self, k: u64, step: u64, offset: u64, modulus: u64) -> bool {
        if (self.step, self.offset) != (step, offset) {
            return false;
        }
        match self.family {
            ModulusFamily::Fixed => self.modulus == modulus && self.k.index_of(k).is_some(),
            ModulusFamily::TwoPower => k.is_power_of_two() && k == modulus,
        }
    }
}

impl fmt::Display for CongruenceClaim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prog = match self.offset {
            0 => format!("{}n", self.step),
            b => format!("{}n+{b}", self.step),
        };
        match self.family {
            ModulusFamily::TwoPower => write!(f, "a_{{2^j}}({prog}) = 0 mod 2^j"),
            ModulusFamily::Fixed => {
                let k = match (self.k.c, self.k.k0) {
                    (0, k0) => k0.to_string(),
                    (c, k0) => format!("{{{c}j+{k0}}}"),
                };
                write!(f, "a_{k}({prog}) = 0 mod {}", self.modulus)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Verified,
    Counterexample,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Witness {
    pub j: u64,
    pub k: u64,
    pub n: u64,
    pub residue: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VerificationResult {
    pub status: Status,
    pub checked_n_up_to: u64,
    pub checked_j_up_to: u64,
    pub witness: Option<Witness>,
}

impl VerificationResult {
    pub fn is_verified(&self) -> bool {
        self.status == Status::Verified
    }
}

/// A claim with its outcome; the JSON shape of one verification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimReport {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub claim: CongruenceClaim,
    #[serde(flatten)]
    pub result: VerificationResult,
}

/// Check `claim` on every coefficient index `A n + B < n_terms` and every
/// family index `j <= j_max`. `M = 1` instances hold vacuously.
pub fn verify_claim(
    claim: &CongruenceClaim,
    n_terms: usize,
    j_max: u64,
) -> Result<VerificationResult> {
    claim.validate()?;
    if n_terms as u64 <= claim.offset {
        return Err(Error::InvalidArgument(format!(
            "precision {n_terms} does not reach offset B = {}",
            claim.offset
        )));
    }
    let instances = claim.instances(j_max);
    if let Some(&(_, _, m)) = instances.iter().find(|&&(_, _, m)| m > MAX_MODULUS) {
        return Err(Error::InvalidModulus(m));
    }
    let checked_n_up_to = (n_terms as u64 - 1 - claim.offset) / claim.step;
    let checked_j_up_to = instances.last().map_or(0, |&(j, _, _)| j);
    for (j, k, m) in instances {
        if m == 1 {
            continue;
        }
        let series = a_table_series(k, CoefficientRing::Modular(m), n_terms)?.into_series();
        let sub = series.extract_progression(claim.step, claim.offset)?;
        if let Some(n) = sub.first_nonzero() {
            let residue = sub.residues().expect("modular ring")[n];
            return Ok(VerificationResult {
                status: Status::Counterexample,
                checked_n_up_to,
                checked_j_up_to,
                witness: Some(Witness {
                    j,
                    k,
                    n: n as u64,
                    residue,
                }),
            });
        }
    }
    Ok(VerificationResult {
        status: Status::Verified,
        checked_n_up_to,
        checked_j_up_to,
        witness: None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    /// `thm1` .. `thm9`, or `conj` for the congruences found by computer search.
    pub group: String,
    pub claim: CongruenceClaim,
}

fn entry(group: &str, claim: CongruenceClaim) -> CatalogEntry {
    CatalogEntry {
        name: format!("{group}: {claim}"),
        group: group.to_string(),
        claim,
    }
}

/// Every published congruence, as printed.
///
/// The `thm3` pair and every `a_5(p n + 3)` entry fail verification; they are
/// kept verbatim so that reports show the counterexamples.
pub fn builtin_catalog() -> Vec<CatalogEntry> {
    let mut out = Vec::new();
    for (k0, b) in [(1, 5), (3, 2), (4, 4), (5, 6), (7, 3)] {
        out.push(entry(
            "thm1",
            CongruenceClaim::new(KFamily { c: 7, k0 }, 7, b, 7),
        ));
    }
    out.push(entry("thm2", CongruenceClaim::single(5, 5, 3, 5)));
    // a_5(3^{2a+2} n + (153 * 3^{2a} - 1) / 8) = 0 mod 3
    for alpha in 0..2u32 {
        let step = 3u64.pow(2 * alpha + 2);
        let offset = (153 * 3u64.pow(2 * alpha) - 1) / 8;
        out.push(entry("thm3", CongruenceClaim::single(5, step, offset, 3)));
    }
    out.push(entry(
        "thm4",
        CongruenceClaim::new(KFamily { c: 5, k0: 5 }, 5, 3, 5),
    ));
    for r in 0..=6u32 {
        let k = 1u64 << r;
        out.push(entry("thm5", CongruenceClaim::single(k, 2, 1, k)));
    }
    for r in 1..=8 {
        out.push(entry("thm6", CongruenceClaim::single(2 * r, 2, 1, 2)));
    }
    for (p, r) in [
        (5, 3),
        (7, 3),
        (11, 3),
        (13, 3),
        (17, 3),
        (5, 4),
        (7, 4),
        (7, 6),
        (11, 6),
        (13, 6),
    ] {
        out.push(entry("thm7", CongruenceClaim::single(3, p, r, 2)));
    }
    for p in [7, 11, 13, 17, 19] {
        out.push(entry("thm8", CongruenceClaim::single(5, p, 3, 2)));
    }
    out.push(entry("thm8", CongruenceClaim::single(5, 3, 2, 2)));
    out.push(entry("thm8", CongruenceClaim::single(5, 6, 5, 2)));
    out.push(entry("thm8", CongruenceClaim::single(11, 9, 6, 2)));
    for (k0, b) in [(1, 6), (4, 10), (6, 9), (8, 8), (11, 1)] {
        out.push(entry(
            "thm9",
            CongruenceClaim::new(KFamily { c: 11, k0 }, 11, b, 11),
        ));
    }
    for p in [13, 17] {
        out.push(entry("conj", CongruenceClaim::single(3, p, 3, 2)));
    }
    out.push(entry("conj", CongruenceClaim::single(3, 13, 6, 2)));
    for p in [13, 17, 19] {
        out.push(entry("conj", CongruenceClaim::single(5, p, 3, 2)));
    }
    out
}

/// Catalog entries matching `selector`: `all`, a group name, or an exact entry name.
pub fn select_catalog(selector: &str) -> Result<Vec<CatalogEntry>> {
    let all = builtin_catalog();
    if selector == "all" {
        return Ok(all);
    }
    let picked: Vec<_> = all
        .into_iter()
        .filter(|e| e.group == selector || e.name == selector)
        .collect();
    if picked.is_empty() {
        return Err(Error::UnknownName(selector.to_string()));
    }
    Ok(picked)
}

/// First catalog entry having `a_k(A n + B) = 0 (mod M)` as an instance.
pub fn catalog_lookup(k: u64, step: u64, offset: u64, modulus: u64) -> Option<CatalogEntry> {
    builtin_catalog()
        .into_iter()
        .find(|e| e.claim.covers(k, step, offset, modulus))
}

/// Verify each entry in parallel; output keeps the input order.
pub fn verify_entries(
    entries: &[CatalogEntry],
    n_terms: usize,
    j_max: u64,
) -> Result<Vec<ClaimReport>> {
    entries
        .par_iter()
        .map(|e| {
            Ok(ClaimReport {
                name: Some(e.name.clone()),
                claim: e.claim,
                result: verify_claim(&e.claim, n_terms, j_max)?,
            })
        })
        .collect()
}

pub fn verify_catalog(n_terms: usize, j_max: u64) -> Result<Vec<ClaimReport>> {
    verify_entries(&builtin_catalog(), n_terms, j_max)
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusCheck {
    pub holds: bool,
    pub first_mismatch: Option<usize>,
}

/// Compare `f_m^{p^e}` with `f_{mp}^{p^{e-1}}` modulo `p^e` to `n_terms`.
pub fn verify_frobenius_congruence(
    m: u64,
    p: u64,
    e: u32,
    n_terms: usize,
) -> Result<FrobeniusCheck> {
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    if e == 0 {
        return Err(Error::InvalidArgument("exponent must be >= 1".into()));
    }
    let modulus = p
        .checked_pow(e)
        .filter(|&q| q <= MAX_MODULUS)
        .ok_or(Error::InvalidModulus(u64::MAX))?;
    let ring = CoefficientRing::modular(modulus)?;
    let lhs = f_ell(m, ring, n_terms)?.pow(modulus as i64)?;
    let rhs = f_ell(m * p, ring, n_terms)?.pow((modulus / p) as i64)?;
    let first_mismatch = lhs.first_difference(&rhs)?;
    Ok(FrobeniusCheck {
        holds: first_mismatch.is_none(),
        first_mismatch,
    })
}
