//! Named q-series: `f_l = (q^l; q^l)_inf`, eta quotients, Pochhammer
//! quotients and the sum sides of the Jacobi triple product.
//!
//! Note on naming: the classical pentagonal number theorem expands `f_1`
//! itself, and that is what [`f_ell`] uses. The cube `f_1^3` has its own
//! triangular-number expansion, built by [`jacobi_cube_sum`]. Some sources
//! attach the "pentagonal" label to the cube identity; both are provided
//! here under their mathematical content.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{BinomialSign, CoefficientRing, Series};

/// Formal product `prod f_l^{e_l}` over distinct scales `l`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EtaQuotientSpec {
    factors: Vec<(u64, i64)>,
}

impl EtaQuotientSpec {
    /// Merge duplicate scales and drop zero exponents. Scale 0 is rejected.
    pub fn new(factors: impl IntoIterator<Item = (u64, i64)>) -> Result<Self> {
        let mut merged: BTreeMap<u64, i64> = BTreeMap::new();
        for (scale, e) in factors {
            if scale == 0 {
                return Err(Error::InvalidArgument("eta scale must be >= 1".into()));
            }
            *merged.entry(scale).or_default() += e;
        }
        let factors = merged.into_iter().rev().filter(|&(_, e)| e != 0).collect();
        Ok(EtaQuotientSpec { factors })
    }

    /// `f_2^{k-1} / f_1^k`, the generating function of `a_k(n)`.
    pub fn colored(k: u64) -> Self {
        Self::new([(2, k as i64 - 1), (1, -(k as i64))]).expect("valid scales")
    }

    /// `(f_2 / f_1)^j`, distinct parts in `j` colors.
    pub fn distinct_colored(j: u64) -> Self {
        Self::new([(2, j as i64), (1, -(j as i64))]).expect("valid scales")
    }

    /// Normalized `(scale, exponent)` pairs, largest scale first.
    pub fn factors(&self) -> &[(u64, i64)] {
        &self.factors
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }
}

impl fmt::Display for EtaQuotientSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(l, e)| format!("{l}^{e}"))
            .collect();
        write!(f, "{}", parts.join(" * "))
    }
}

impl FromStr for EtaQuotientSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        crate::grammar::parse_eta(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    Numerator,
    Denominator,
}

/// `prod (q^a; q^b)_inf^{±1}` over a list of residues sharing one modulus `b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PochhammerProductSpec {
    modulus: u64,
    residues: Vec<(u64, Placement)>,
}

impl PochhammerProductSpec {
    pub fn new(modulus: u64, residues: impl IntoIterator<Item = (u64, Placement)>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidArgument(
                "Pochhammer modulus must be >= 1".into(),
            ));
        }
        let residues: Vec<_> = residues.into_iter().collect();
        if residues.iter().any(|&(a, _)| a == 0) {
            return Err(Error::InvalidArgument(
                "Pochhammer residues must be >= 1".into(),
            ));
        }
        Ok(PochhammerProductSpec { modulus, residues })
    }

    /// `numerators` over `denominators`, all modulo `b`.
    pub fn quotient(b: u64, numerators: &[u64], denominators: &[u64]) -> Result<Self> {
        Self::new(
            b,
            numerators
                .iter()
                .map(|&a| (a, Placement::Numerator))
                .chain(denominators.iter().map(|&a| (a, Placement::Denominator))),
        )
    }

    /// Rogers-Ramanujan type quotient `a(q) = (q^2, q^3; q^5) / (q, q^4; q^5)`.
    pub fn quintic_a() -> Self {
        Self::quotient(5, &[2, 3], &[1, 4]).expect("valid residues")
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn residues(&self) -> &[(u64, Placement)] {
        &self.residues
    }

    /// The same product at `q^t`.
    pub fn dilated(&self, t: u64) -> Self {
        PochhammerProductSpec {
            modulus: self.modulus * t,
            residues: self.residues.iter().map(|&(a, p)| (a * t, p)).collect(),
        }
    }

    /// Numerator and denominator swapped.
    pub fn reciprocal(&self) -> Self {
        PochhammerProductSpec {
            modulus: self.modulus,
            residues: self
                .residues
                .iter()
                .map(|&(a, p)| {
                    let p = match p {
                        Placement::Numerator => Placement::Denominator,
                        Placement::Denominator => Placement::Numerator,
                    };
                    (a, p)
                })
                .collect(),
        }
    }
}

impl fmt::Display for PochhammerProductSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let group = |p: Placement| -> Option<String> {
            let r: Vec<String> = self
                .residues
                .iter()
                .filter(|(_, q)| *q == p)
                .map(|(a, _)| a.to_string())
                .collect();
            (!r.is_empty()).then(|| format!("[{};{}]", r.join(","), self.modulus))
        };
        match (group(Placement::Numerator), group(Placement::Denominator)) {
            (Some(n), Some(d)) => write!(f, "{n}/{d}"),
            (Some(n), None) => write!(f, "{n}"),
            (None, Some(d)) => write!(f, "[;{}]/{d}", self.modulus),
            (None, None) => write!(f, "1"),
        }
    }
}

/// `f_l` to `n` terms from the pentagonal exponents `l k (3k - 1) / 2`, `k` in Z.
pub fn f_ell(ell: u64, ring: CoefficientRing, n: usize) -> Result<Series> {
    if ell == 0 {
        return Err(Error::InvalidArgument("eta scale must be >= 1".into()));
    }
    if n == 0 {
        return Err(Error::ZeroPrecision);
    }
    let mut c = vec![0i64; n];
    let ell = ell as usize;
    for k in 0usize.. {
        let lower = ell * (k * (3 * k).saturating_sub(1) / 2);
        if lower >= n {
            break;
        }
        let sign = if k % 2 == 0 { 1 } else { -1 };
        c[lower] += sign;
        if k > 0 {
            let upper = ell * (k * (3 * k + 1) / 2);
            if upper < n {
                c[upper] += sign;
            }
        }
    }
    Series::new(ring, &c)
}

/// `prod f_l^{e_l}` to `n` terms.
///
/// When every scale shares a factor `g`, the product is built in `q^g` and
/// spread out afterwards.
pub fn eta_quotient(spec: &EtaQuotientSpec, ring: CoefficientRing, n: usize) -> Result<Series> {
    if n == 0 {
        return Err(Error::ZeroPrecision);
    }
    let g = spec.factors.iter().fold(0u64, |g, &(l, _)| g.gcd(&l));
    if g > 1 {
        let reduced = EtaQuotientSpec {
            factors: spec.factors.iter().map(|&(l, e)| (l / g, e)).collect(),
        };
        let inner = (n - 1) / g as usize + 1;
        return eta_quotient(&reduced, ring, inner)?.dilate_to(g, n);
    }
    let mut acc: Option<Series> = None;
    for &(ell, e) in &spec.factors {
        let mut base = f_ell(ell, ring, n)?;
        if e < 0 {
            base = base.invert()?;
        }
        let term = base.pow(e.abs())?;
        acc = Some(match acc {
            None => term,
            Some(a) => a.mul(&term)?,
        });
    }
    match acc {
        Some(s) => Ok(s),
        None => Series::one(ring, n),
    }
}

/// `prod_residues prod_{i>=0} (1 - q^{a + i b})^{±1}` to `n` terms.
pub fn pochhammer_product(
    spec: &PochhammerProductSpec,
    ring: CoefficientRing,
    n: usize,
) -> Result<Series> {
    let mut s = Series::one(ring, n)?;
    let b = spec.modulus as usize;
    for &(a, placement) in &spec.residues {
        for e in (a as usize..n).step_by(b) {
            s = match placement {
                Placement::Numerator => s.times_binomial(e, BinomialSign::Minus)?,
                Placement::Denominator => s.over_binomial(e, BinomialSign::Minus)?,
            };
        }
    }
    Ok(s)
}

/// `a(q)` to `n` terms.
pub fn quintic_a(ring: CoefficientRing, n: usize) -> Result<Series> {
    pochhammer_product(&PochhammerProductSpec::quintic_a(), ring, n)
}

/// Sum side of `f_1^3 = sum_{k>=0} (-1)^k (2k + 1) q^{k(k+1)/2}`.
pub fn jacobi_cube_sum(ring: CoefficientRing, n: usize) -> Result<Series> {
    if n == 0 {
        return Err(Error::ZeroPrecision);
    }
    let mut c = vec![0i64; n];
    for k in 0usize.. {
        let e = k * (k + 1) / 2;
        if e >= n {
            break;
        }
        let mag = 2 * k as i64 + 1;
        c[e] = if k % 2 == 0 { mag } else { -mag };
    }
    Series::new(ring, &c)
}

/// Sum side `sum_{m in Z} q^{s m(m+1)/2 + t m(m-1)/2}` of `f(q^s, q^t)`.
pub fn theta_sum_side(s: u64, t: u64, ring: CoefficientRing, n: usize) -> Result<Series> {
    if s == 0 || t == 0 {
        return Err(Error::InvalidArgument(
            "theta parameters must be >= 1".into(),
        ));
    }
    if n == 0 {
        return Err(Error::ZeroPrecision);
    }
    let (s, t) = (s as i128, t as i128);
    let exponent = |m: i128| s * m * (m + 1) / 2 + t * m * (m - 1) / 2;
    let mut c = vec![0i64; n];
    for m in 0i128.. {
        let e = exponent(m);
        if e >= n as i128 {
            break;
        }
        c[e as usize] += 1;
    }
    for m in 1i128.. {
        let e = exponent(-m);
        if e >= n as i128 {
            break;
        }
        c[e as usize] += 1;
    }
    Series::new(ring, &c)
}

/// Product side `(-q^s; q^{s+t}) (-q^t; q^{s+t}) (q^{s+t}; q^{s+t})`.
pub fn theta_product_side(s: u64, t: u64, ring: CoefficientRing, n: usize) -> Result<Series> {
    if s == 0 || t == 0 {
        return Err(Error::InvalidArgument(
            "theta parameters must be >= 1".into(),
        ));
    }
    let period = (s + t) as usize;
    let mut out = Series::one(ring, n)?;
    for start in [s as usize, t as usize] {
        for e in (start..n).step_by(period) {
            out = out.times_binomial(e, BinomialSign::Plus)?;
        }
    }
    for e in (period..n).step_by(period) {
        out = out.times_binomial(e, BinomialSign::Minus)?;
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaCheck {
    pub equal: bool,
    pub first_mismatch: Option<usize>,
}

/// Compare both sides of the Jacobi triple product at `a = q^s, b = q^t`.
pub fn theta_triple_product_check(s: u64, t: u64, n: usize) -> Result<ThetaCheck> {
    let ring = CoefficientRing::Exact;
    let sum = theta_sum_side(s, t, ring, n)?;
    let product = theta_product_side(s, t, ring, n)?;
    let first_mismatch = sum.first_difference(&product)?;
    Ok(ThetaCheck {
        equal: first_mismatch.is_none(),
        first_mismatch,
    })
}
