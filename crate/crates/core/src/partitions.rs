//! Tables of `p(n)`, `a_k(n)` and colored distinct-part counts.
//!
//! `a_k(n)` counts partitions of `n` whose even parts carry one color and
//! whose odd parts carry one of `k` colors. Three independent routes are
//! provided: the eta quotient `f_2^{k-1} / f_1^k`, the convolution
//! `a_k = p * D_{k-1}` with `D_j` the `j`-colored distinct-part counts, and a
//! direct enumeration for small `n`.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eta::{eta_quotient, EtaQuotientSpec};
use crate::series::{CoefficientRing, Series};

/// Largest `n` accepted by [`a_bruteforce`].
pub const BRUTE_FORCE_MAX_N: u64 = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum TableKind {
    Partitions,
    Colored { k: u64 },
    DistinctColored { j: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionTable {
    kind: TableKind,
    series: Series,
}

impl PartitionTable {
    pub fn kind(&self) -> TableKind {
        self.kind
    }

    pub fn ring(&self) -> CoefficientRing {
        self.series.ring()
    }

    pub fn len(&self) -> usize {
        self.series.precision()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn value(&self, n: usize) -> BigInt {
        self.series.coeff(n)
    }

    pub fn values(&self) -> Vec<BigInt> {
        self.series.coeffs()
    }

    pub fn as_series(&self) -> &Series {
        &self.series
    }

    pub fn into_series(self) -> Series {
        self.series
    }
}

/// `p(0..n)` by the pentagonal recurrence
/// `p(m) = sum_{k>=1} (-1)^{k+1} [p(m - k(3k-1)/2) + p(m - k(3k+1)/2)]`.
pub fn p_table(n: usize) -> Result<PartitionTable> {
    if n == 0 {
        return Err(Error::ZeroPrecision);
    }
    let mut p: Vec<BigInt> = Vec::with_capacity(n);
    p.push(BigInt::one());
    for m in 1..n {
        let mut total = BigInt::zero();
        for k in 1usize.. {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > m {
                break;
            }
            let mut term = p[m - g1].clone();
            let g2 = k * (3 * k + 1) / 2;
            if g2 <= m {
                term += &p[m - g2];
            }
            if k % 2 == 1 {
                total += term;
            } else {
                total -= term;
            }
        }
        p.push(total);
    }
    Ok(PartitionTable {
        kind: TableKind::Partitions,
        series: Series::from_bigints(CoefficientRing::Exact, p)?,
    })
}

fn check_k(k: u64) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidArgument(
            "number of colors k must be >= 1".into(),
        ));
    }
    Ok(())
}

/// Coefficients of `f_2^{k-1} / f_1^k`.
pub fn a_table_series(k: u64, ring: CoefficientRing, n: usize) -> Result<PartitionTable> {
    check_k(k)?;
    Ok(PartitionTable {
        kind: TableKind::Colored { k },
        series: eta_quotient(&EtaQuotientSpec::colored(k), ring, n)?,
    })
}

/// Coefficients of `(f_2 / f_1)^j`: partitions into distinct parts, each part
/// in one of `j` colors, distinctness taken within a color.
pub fn distinct_colored_table(j: u64, ring: CoefficientRing, n: usize) -> Result<PartitionTable> {
    Ok(PartitionTable {
        kind: TableKind::DistinctColored { j },
        series: eta_quotient(&EtaQuotientSpec::distinct_colored(j), ring, n)?,
    })
}

/// `a_k(m) = p(m) + sum_{v=1..m} D_{k-1}(v) p(m - v)` in the exact ring.
pub fn a_table_recurrence(k: u64, n: usize) -> Result<PartitionTable> {
    check_k(k)?;
    let p = p_table(n)?.values();
    let d = distinct_colored_table(k - 1, CoefficientRing::Exact, n)?.values();
    let values: Vec<BigInt> = (0..n)
        .map(|m| {
            let mut total = p[m].clone();
            for v in 1..=m {
                if !d[v].is_zero() {
                    total += &d[v] * &p[m - v];
                }
            }
            total
        })
        .collect();
    Ok(PartitionTable {
        kind: TableKind::Colored { k },
        series: Series::from_bigints(CoefficientRing::Exact, values)?,
    })
}

fn multichoose(k: u64, m: u64) -> BigUint {
    // Number of color multisets of size m drawn from k colors: C(m + k - 1, m).
    let mut r = BigUint::one();
    for i in 0..m {
        r = r * BigUint::from(k + i) / BigUint::from(i + 1);
    }
    r
}

fn count_from(remaining: u64, largest: u64, k: u64) -> BigUint {
    if remaining == 0 {
        return BigUint::one();
    }
    if largest == 0 {
        return BigUint::zero();
    }
    let mut total = BigUint::zero();
    let mut m = 0;
    while m * largest <= remaining {
        let rest = count_from(remaining - m * largest, largest - 1, k);
        if !rest.is_zero() {
            if largest % 2 == 1 {
                total += rest * multichoose(k, m);
            } else {
                total += rest;
            }
        }
        m += 1;
    }
    total
}

/// Count `a_k(n)` by enumerating part multiplicities, largest part first.
///
/// An odd part of multiplicity `m` contributes `C(m + k - 1, k - 1)` color
/// assignments; even parts have one.
pub fn a_bruteforce(k: u64, n: u64) -> Result<BigInt> {
    check_k(k)?;
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::OracleBound {
            n,
            max: BRUTE_FORCE_MAX_N,
        });
    }
    Ok(BigInt::from(count_from(n, n, k)))
}
