//! Truncated formal power series in `q`.
//!
//! A [`Series`] knows the coefficients of `q^0 .. q^(N-1)` and nothing beyond.
//! Every operation reports the tightest precision it can vouch for; binary
//! operations truncate to the smaller operand.
//!
//! Two coefficient rings are supported: exact integers (arbitrary precision)
//! and `Z/mZ` with machine-word residues. Composite moduli are fine; units are
//! decided by `gcd`, not primality.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported modulus. Residue products then fit in a `u64`.
pub const MAX_MODULUS: u64 = u32::MAX as u64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoefficientRing {
    Exact,
    Modular(u64),
}

impl CoefficientRing {
    pub fn modular(m: u64) -> Result<Self> {
        if !(2..=MAX_MODULUS).contains(&m) {
            return Err(Error::InvalidModulus(m));
        }
        Ok(CoefficientRing::Modular(m))
    }

    pub fn modulus(self) -> Option<u64> {
        match self {
            CoefficientRing::Exact => None,
            CoefficientRing::Modular(m) => Some(m),
        }
    }
}

impl fmt::Display for CoefficientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientRing::Exact => write!(f, "Z"),
            CoefficientRing::Modular(m) => write!(f, "Z/{m}"),
        }
    }
}

/// Sign of the monomial in a two-term factor `1 ± q^e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinomialSign {
    Minus,
    Plus,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Coeffs {
    Exact(Vec<BigInt>),
    Modular { m: u64, c: Vec<u64> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    coeffs: Coeffs,
}

fn residue_i64(x: i64, m: u64) -> u64 {
    x.rem_euclid(m as i64) as u64
}

fn residue_big(x: &BigInt, m: u64) -> u64 {
    x.mod_floor(&BigInt::from(m))
        .to_u64()
        .expect("residue below modulus")
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
fn inverse_mod(a: u64, m: u64) -> Option<u64> {
    let e = (a as i64).extended_gcd(&(m as i64));
    if e.gcd != 1 {
        return None;
    }
    Some(residue_i64(e.x, m))
}

/// `true` when `count` products of residues below `m` can be summed in a `u64`.
fn fits_u64(m: u64, count: usize) -> bool {
    (m - 1)
        .checked_mul(m - 1)
        .and_then(|p| p.checked_mul(count.max(1) as u64))
        .is_some()
}

fn nonzero_count_exact(c: &[BigInt]) -> usize {
    c.iter().filter(|x| !x.is_zero()).count()
}

fn mul_exact(a: &[BigInt], b: &[BigInt], n: usize) -> Vec<BigInt> {
    // Iterate the outer loop over the sparser operand.
    let (a, b) = if nonzero_count_exact(&a[..n]) <= nonzero_count_exact(&b[..n]) {
        (a, b)
    } else {
        (b, a)
    };
    let mut acc = vec![BigInt::zero(); n];
    for (i, x) in a[..n].iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (slot, y) in acc[i..].iter_mut().zip(&b[..n - i]) {
            if !y.is_zero() {
                *slot += x * y;
            }
        }
    }
    acc
}

fn mul_modular(a: &[u64], b: &[u64], m: u64, n: usize) -> Vec<u64> {
    let nz = |c: &[u64]| c.iter().filter(|&&x| x != 0).count();
    let (a, b) = if nz(&a[..n]) <= nz(&b[..n]) {
        (a, b)
    } else {
        (b, a)
    };
    if fits_u64(m, n) {
        let mut acc = vec![0u64; n];
        for (i, &x) in a[..n].iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (slot, &y) in acc[i..].iter_mut().zip(&b[..n - i]) {
                *slot += x * y;
            }
        }
        acc.into_iter().map(|v| v % m).collect()
    } else {
        let mut acc = vec![0u128; n];
        for (i, &x) in a[..n].iter().enumerate() {
            if x == 0 {
                continue;
            }
            let x = x as u128;
            for (slot, &y) in acc[i..].iter_mut().zip(&b[..n - i]) {
                *slot += x * y as u128;
            }
        }
        acc.into_iter().map(|v| (v % m as u128) as u64).collect()
    }
}

impl Series {
    /// Build a series from integer coefficients, canonicalized into `ring`.
    pub fn new(ring: CoefficientRing, coeffs: &[i64]) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::ZeroPrecision);
        }
        let coeffs = match ring {
            CoefficientRing::Exact => {
                Coeffs::Exact(coeffs.iter().map(|&x| BigInt::from(x)).collect())
            }
            CoefficientRing::Modular(m) => {
                CoefficientRing::modular(m)?;
                Coeffs::Modular {
                    m,
                    c: coeffs.iter().map(|&x| residue_i64(x, m)).collect(),
                }
            }
        };
        Ok(Series { coeffs })
    }

    pub fn from_bigints(ring: CoefficientRing, coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::ZeroPrecision);
        }
        let coeffs = match ring {
            CoefficientRing::Exact => Coeffs::Exact(coeffs),
            CoefficientRing::Modular(m) => {
                CoefficientRing::modular(m)?;
                Coeffs::Modular {
                    m,
                    c: coeffs.iter().map(|x| residue_big(x, m)).collect(),
                }
            }
        };
        Ok(Series { coeffs })
    }

    pub fn zero(ring: CoefficientRing, precision: usize) -> Result<Self> {
        Self::monomial(ring, precision, 0, 0)
    }

    pub fn one(ring: CoefficientRing, precision: usize) -> Result<Self> {
        Self::monomial(ring, precision, 0, 1)
    }

    /// `c * q^e` known to `precision` terms.
    pub fn monomial(ring: CoefficientRing, precision: usize, e: usize, c: i64) -> Result<Self> {
        if precision == 0 {
            return Err(Error::ZeroPrecision);
        }
        let mut v = vec![0i64; precision];
        if e < precision {
            v[e] = c;
        }
        Self::new(ring, &v)
    }

    fn modular_raw(m: u64, c: Vec<u64>) -> Self {
        Series {
            coeffs: Coeffs::Modular { m, c },
        }
    }

    fn exact_raw(c: Vec<BigInt>) -> Self {
        Series {
            coeffs: Coeffs::Exact(c),
        }
    }

    pub fn ring(&self) -> CoefficientRing {
        match &self.coeffs {
            Coeffs::Exact(_) => CoefficientRing::Exact,
            Coeffs::Modular { m, .. } => CoefficientRing::Modular(*m),
        }
    }

    pub fn precision(&self) -> usize {
        match &self.coeffs {
            Coeffs::Exact(c) => c.len(),
            Coeffs::Modular { c, .. } => c.len(),
        }
    }

    /// Coefficient of `q^i`; the canonical residue in a modular ring.
    ///
    /// Panics if `i` is not below the precision.
    pub fn coeff(&self, i: usize) -> BigInt {
        match &self.coeffs {
            Coeffs::Exact(c) => c[i].clone(),
            Coeffs::Modular { c, .. } => BigInt::from(c[i]),
        }
    }

    pub fn coeffs(&self) -> Vec<BigInt> {
        (0..self.precision()).map(|i| self.coeff(i)).collect()
    }

    /// Residues when the ring is modular.
    pub fn residues(&self) -> Option<&[u64]> {
        match &self.coeffs {
            Coeffs::Modular { c, .. } => Some(c),
            Coeffs::Exact(_) => None,
        }
    }

    pub fn is_zero_at(&self, i: usize) -> bool {
        match &self.coeffs {
            Coeffs::Exact(c) => c[i].is_zero(),
            Coeffs::Modular { c, .. } => c[i] == 0,
        }
    }

    pub fn first_nonzero(&self) -> Option<usize> {
        (0..self.precision()).find(|&i| !self.is_zero_at(i))
    }

    pub fn is_zero(&self) -> bool {
        self.first_nonzero().is_none()
    }

    fn check_ring(&self, other: &Series) -> Result<()> {
        if self.ring() != other.ring() {
            return Err(Error::RingMismatch(self.ring(), other.ring()));
        }
        Ok(())
    }

    /// First `precision` coefficients.
    pub fn truncate(&self, precision: usize) -> Result<Series> {
        if precision == 0 {
            return Err(Error::ZeroPrecision);
        }
        if precision > self.precision() {
            return Err(Error::InvalidArgument(format!(
                "cannot truncate a series of precision {} to {precision}",
                self.precision()
            )));
        }
        Ok(match &self.coeffs {
            Coeffs::Exact(c) => Self::exact_raw(c[..precision].to_vec()),
            Coeffs::Modular { m, c } => Self::modular_raw(*m, c[..precision].to_vec()),
        })
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(&self, other: &Series) -> Result<Series> {
        self.check_ring(other)?;
        let n = self.precision().min(other.precision());
        Ok(match (&self.coeffs, &other.coeffs) {
            (Coeffs::Exact(a), Coeffs::Exact(b)) => {
                Self::exact_raw(a[..n].iter().zip(&b[..n]).map(|(x, y)| x + y).collect())
            }
            (Coeffs::Modular { m, c: a }, Coeffs::Modular { c: b, .. }) => Self::modular_raw(
                *m,
                a[..n]
                    .iter()
                    .zip(&b[..n])
                    .map(|(x, y)| (x + y) % m)
                    .collect(),
            ),
            _ => unreachable!("rings checked"),
        })
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(&self, other: &Series) -> Result<Series> {
        self.add(&other.neg())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(&self) -> Series {
        self.scale(-1)
    }

    /// Multiply every coefficient by the integer `c`.
    pub fn scale(&self, c: i64) -> Series {
        match &self.coeffs {
            Coeffs::Exact(a) => {
                let c = BigInt::from(c);
                Self::exact_raw(a.iter().map(|x| x * &c).collect())
            }
            Coeffs::Modular { m, c: a } => {
                let r = residue_i64(c, *m);
                Self::modular_raw(*m, a.iter().map(|x| x * r % m).collect())
            }
        }
    }

    /// Cauchy product truncated to the smaller precision; O(N²).
    #[allow(clippy::should_implement_trait)]
    pub fn mul(&self, other: &Series) -> Result<Series> {
        self.check_ring(other)?;
        let n = self.precision().min(other.precision());
        Ok(match (&self.coeffs, &other.coeffs) {
            (Coeffs::Exact(a), Coeffs::Exact(b)) => Self::exact_raw(mul_exact(a, b, n)),
            (Coeffs::Modular { m, c: a }, Coeffs::Modular { c: b, .. }) => {
                Self::modular_raw(*m, mul_modular(a, b, *m, n))
            }
            _ => unreachable!("rings checked"),
        })
    }

    /// Multiplicative inverse to full precision via the linear recurrence
    /// `b_n = -a_0^{-1} * sum_{i=1..n} a_i b_{n-i}`.
    pub fn invert(&self) -> Result<Series> {
        let n = self.precision();
        match &self.coeffs {
            Coeffs::Exact(a) => {
                let a0 = &a[0];
                if !(a0.is_one() || (-a0).is_one()) {
                    return Err(Error::NotInvertible {
                        constant: a0.to_string(),
                        ring: self.ring(),
                    });
                }
                // a0 = ±1 is its own inverse.
                let neg_inv = -a0;
                let support: Vec<(usize, &BigInt)> = a
                    .iter()
                    .enumerate()
                    .skip(1)
                    .filter(|(_, x)| !x.is_zero())
                    .collect();
                let mut b: Vec<BigInt> = Vec::with_capacity(n);
                b.push(a0.clone());
                for k in 1..n {
                    let mut s = BigInt::zero();
                    for &(i, x) in support.iter().take_while(|(i, _)| *i <= k) {
                        let y = &b[k - i];
                        if !y.is_zero() {
                            s += x * y;
                        }
                    }
                    b.push(s * &neg_inv);
                }
                Ok(Self::exact_raw(b))
            }
            Coeffs::Modular { m, c: a } => {
                let m = *m;
                let inv0 = inverse_mod(a[0], m).ok_or_else(|| Error::NotInvertible {
                    constant: a[0].to_string(),
                    ring: self.ring(),
                })?;
                let support: Vec<(usize, u64)> = a
                    .iter()
                    .copied()
                    .enumerate()
                    .skip(1)
                    .filter(|&(_, x)| x != 0)
                    .collect();
                let wide = !fits_u64(m, support.len());
                let mut b = Vec::with_capacity(n);
                b.push(inv0);
                for k in 1..n {
                    let s = if wide {
                        let mut s = 0u128;
                        for &(i, x) in support.iter().take_while(|(i, _)| *i <= k) {
                            s += x as u128 * b[k - i] as u128;
                        }
                        (s % m as u128) as u64
                    } else {
                        let mut s = 0u64;
                        for &(i, x) in support.iter().take_while(|(i, _)| *i <= k) {
                            s += x * b[k - i];
                        }
                        s % m
                    };
                    b.push((m - s * inv0 % m) % m);
                }
                Ok(Self::modular_raw(m, b))
            }
        }
    }

    /// `self^e` by binary exponentiation. Negative exponents invert first.
    pub fn pow(&self, e: i64) -> Result<Series> {
        let base = if e < 0 { self.invert()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut result: Option<Series> = None;
        let mut square = base;
        while e > 0 {
            if e & 1 == 1 {
                result = Some(match result {
                    None => square.clone(),
                    Some(r) => r.mul(&square)?,
                });
            }
            e >>= 1;
            if e > 0 {
                square = square.mul(&square)?;
            }
        }
        match result {
            Some(r) => Ok(r),
            None => Series::one(self.ring(), self.precision()),
        }
    }

    /// Substitute `q -> q^t`. Precision becomes `(N - 1) * t + 1`.
    pub fn dilate(&self, t: u64) -> Result<Series> {
        let precision = (self.precision() - 1) * t as usize + 1;
        self.dilate_to(t, precision)
    }

    /// Substitute `q -> q^t` and report `precision` terms.
    ///
    /// Any `precision <= N * t` is sound: the coefficients strictly between
    /// `(N - 1) * t` and `N * t` vanish whatever the unknown tail is.
    pub fn dilate_to(&self, t: u64, precision: usize) -> Result<Series> {
        if t == 0 {
            return Err(Error::InvalidArgument(
                "dilation factor must be >= 1".into(),
            ));
        }
        if precision == 0 {
            return Err(Error::ZeroPrecision);
        }
        let t = t as usize;
        if precision > self.precision() * t {
            return Err(Error::InvalidArgument(format!(
                "dilation by {t} of a series of precision {} only determines {} terms",
                self.precision(),
                self.precision() * t
            )));
        }
        Ok(match &self.coeffs {
            Coeffs::Exact(a) => {
                let mut out = vec![BigInt::zero(); precision];
                for (i, x) in a.iter().enumerate().take_while(|(i, _)| i * t < precision) {
                    out[i * t] = x.clone();
                }
                Self::exact_raw(out)
            }
            Coeffs::Modular { m, c: a } => {
                let mut out = vec![0u64; precision];
                for (i, &x) in a.iter().enumerate().take_while(|(i, _)| i * t < precision) {
                    out[i * t] = x;
                }
                Self::modular_raw(*m, out)
            }
        })
    }

    /// Multiply by `q^t`. Precision grows by `t`.
    pub fn shift(&self, t: usize) -> Series {
        match &self.coeffs {
            Coeffs::Exact(a) => {
                let mut out = vec![BigInt::zero(); t];
                out.extend(a.iter().cloned());
                Self::exact_raw(out)
            }
            Coeffs::Modular { m, c: a } => {
                let mut out = vec![0u64; t];
                out.extend_from_slice(a);
                Self::modular_raw(*m, out)
            }
        }
    }

    /// The series `sum_n a_{A n + B} q^n`.
    pub fn extract_progression(&self, step: u64, offset: u64) -> Result<Series> {
        if step == 0 {
            return Err(Error::InvalidArgument(
                "progression step must be >= 1".into(),
            ));
        }
        let n = self.precision();
        if offset >= n as u64 {
            return Err(Error::EmptyExtraction {
                offset,
                precision: n,
            });
        }
        let (step, offset) = (step as usize, offset as usize);
        Ok(match &self.coeffs {
            Coeffs::Exact(a) => {
                Self::exact_raw(a[offset..].iter().step_by(step).cloned().collect())
            }
            Coeffs::Modular { m, c: a } => {
                Self::modular_raw(*m, a[offset..].iter().step_by(step).copied().collect())
            }
        })
    }

    /// Keep only the terms whose exponent is `offset` modulo `step`.
    pub fn progression_part(&self, step: u64, offset: u64) -> Result<Series> {
        if step == 0 {
            return Err(Error::InvalidArgument(
                "progression step must be >= 1".into(),
            ));
        }
        let keep = |i: usize| i as u64 % step == offset % step;
        Ok(match &self.coeffs {
            Coeffs::Exact(a) => Self::exact_raw(
                a.iter()
                    .enumerate()
                    .map(|(i, x)| if keep(i) { x.clone() } else { BigInt::zero() })
                    .collect(),
            ),
            Coeffs::Modular { m, c: a } => Self::modular_raw(
                *m,
                a.iter()
                    .enumerate()
                    .map(|(i, &x)| if keep(i) { x } else { 0 })
                    .collect(),
            ),
        })
    }

    /// Reduce into `Z/mZ`. A modular series may be reduced further when `m`
    /// divides its modulus.
    pub fn reduce_mod(&self, m: u64) -> Result<Series> {
        CoefficientRing::modular(m)?;
        match &self.coeffs {
            Coeffs::Exact(a) => Ok(Self::modular_raw(
                m,
                a.iter().map(|x| residue_big(x, m)).collect(),
            )),
            Coeffs::Modular { m: current, c } => {
                if current % m != 0 {
                    return Err(Error::InvalidArgument(format!(
                        "cannot reduce Z/{current} coefficients modulo {m}"
                    )));
                }
                Ok(Self::modular_raw(m, c.iter().map(|x| x % m).collect()))
            }
        }
    }

    /// Multiply by the two-term factor `1 ± q^e` in O(N).
    pub fn times_binomial(&self, e: usize, sign: BinomialSign) -> Result<Series> {
        if e == 0 {
            return Err(Error::InvalidArgument(
                "binomial exponent must be >= 1".into(),
            ));
        }
        let mut out = self.clone();
        let n = out.precision();
        match &mut out.coeffs {
            Coeffs::Exact(c) => {
                for i in (e..n).rev() {
                    let (lo, hi) = c.split_at_mut(i);
                    match sign {
                        BinomialSign::Minus => hi[0] -= &lo[i - e],
                        BinomialSign::Plus => hi[0] += &lo[i - e],
                    }
                }
            }
            Coeffs::Modular { m, c } => {
                for i in (e..n).rev() {
                    c[i] = match sign {
                        BinomialSign::Minus => (c[i] + *m - c[i - e]) % *m,
                        BinomialSign::Plus => (c[i] + c[i - e]) % *m,
                    };
                }
            }
        }
        Ok(out)
    }

    /// Divide by the two-term factor `1 ± q^e` in O(N).
    pub fn over_binomial(&self, e: usize, sign: BinomialSign) -> Result<Series> {
        if e == 0 {
            return Err(Error::InvalidArgument(
                "binomial exponent must be >= 1".into(),
            ));
        }
        let mut out = self.clone();
        let n = out.precision();
        match &mut out.coeffs {
            Coeffs::Exact(c) => {
                for i in e..n {
                    let (lo, hi) = c.split_at_mut(i);
                    match sign {
                        BinomialSign::Minus => hi[0] += &lo[i - e],
                        BinomialSign::Plus => hi[0] -= &lo[i - e],
                    }
                }
            }
            Coeffs::Modular { m, c } => {
                for i in e..n {
                    c[i] = match sign {
                        BinomialSign::Minus => (c[i] + c[i - e]) % *m,
                        BinomialSign::Plus => (c[i] + *m - c[i - e]) % *m,
                    };
                }
            }
        }
        Ok(out)
    }

    /// First index where two series over the same ring differ, up to the
    /// shared precision.
    pub fn first_difference(&self, other: &Series) -> Result<Option<usize>> {
        self.check_ring(other)?;
        let n = self.precision().min(other.precision());
        Ok(match (&self.coeffs, &other.coeffs) {
            (Coeffs::Exact(a), Coeffs::Exact(b)) => (0..n).find(|&i| a[i] != b[i]),
            (Coeffs::Modular { c: a, .. }, Coeffs::Modular { c: b, .. }) => {
                (0..n).find(|&i| a[i] != b[i])
            }
            _ => unreachable!("rings checked"),
        })
    }

    /// Largest coefficient magnitude; the canonical residue in modular rings.
    pub fn max_abs(&self) -> BigInt {
        (0..self.precision())
            .map(|i| self.coeff(i).abs())
            .max()
            .unwrap_or_default()
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for i in 0..self.precision() {
            if self.is_zero_at(i) {
                continue;
            }
            let c = self.coeff(i);
            let sep = if first {
                if c.is_negative() {
                    "-"
                } else {
                    ""
                }
            } else if c.is_negative() {
                " - "
            } else {
                " + "
            };
            first = false;
            let mag = c.abs();
            let mono = match i {
                0 => mag.to_string(),
                1 if mag.is_one() => "q".to_string(),
                1 => format!("{mag}q"),
                _ if mag.is_one() => format!("q^{i}"),
                _ => format!("{mag}q^{i}"),
            };
            write!(f, "{sep}{mono}")?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.precision())
    }
}
