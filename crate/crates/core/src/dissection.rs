//! Series identities and residue-class support claims, checked
//! coefficientwise to a requested precision.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eta::{
    eta_quotient, jacobi_cube_sum, pochhammer_product, EtaQuotientSpec, PochhammerProductSpec,
};
use crate::series::{CoefficientRing, Series};

/// A small closed algebra of series expressions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Eta(EtaQuotientSpec),
    Pochhammer(PochhammerProductSpec),
    /// Sum side of `f_1^3` over triangular exponents.
    JacobiCube,
    Shift(usize, Box<Expr>),
    Scale(i64, Box<Expr>),
    Dilate(u64, Box<Expr>),
    /// Terms with exponent congruent to `offset` modulo `step`, left in place.
    Part {
        step: u64,
        offset: u64,
        inner: Box<Expr>,
    },
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
}

impl Expr {
    pub fn eta(factors: &[(u64, i64)]) -> Result<Expr> {
        Ok(Expr::Eta(EtaQuotientSpec::new(factors.iter().copied())?))
    }

    pub fn pochhammer(b: u64, numerators: &[u64], denominators: &[u64]) -> Result<Expr> {
        Ok(Expr::Pochhammer(PochhammerProductSpec::quotient(
            b,
            numerators,
            denominators,
        )?))
    }

    pub fn one() -> Expr {
        Expr::Product(vec![])
    }

    pub fn zero() -> Expr {
        Expr::Sum(vec![])
    }

    pub fn shifted(self, t: usize) -> Expr {
        Expr::Shift(t, Box::new(self))
    }

    pub fn scaled(self, c: i64) -> Expr {
        Expr::Scale(c, Box::new(self))
    }

    pub fn dilated(self, t: u64) -> Expr {
        Expr::Dilate(t, Box::new(self))
    }

    pub fn part(self, step: u64, offset: u64) -> Expr {
        Expr::Part {
            step,
            offset,
            inner: Box::new(self),
        }
    }

    /// Evaluate to exactly `n` coefficients.
    pub fn eval(&self, ring: CoefficientRing, n: usize) -> Result<Series> {
        if n == 0 {
            return Err(Error::ZeroPrecision);
        }
        match self {
            Expr::Eta(spec) => eta_quotient(spec, ring, n),
            Expr::Pochhammer(spec) => pochhammer_product(spec, ring, n),
            Expr::JacobiCube => jacobi_cube_sum(ring, n),
            Expr::Shift(t, inner) => {
                if *t >= n {
                    Series::zero(ring, n)
                } else {
                    Ok(inner.eval(ring, n - t)?.shift(*t))
                }
            }
            Expr::Scale(c, inner) => Ok(inner.eval(ring, n)?.scale(*c)),
            Expr::Dilate(t, inner) => {
                if *t == 0 {
                    return Err(Error::InvalidArgument(
                        "dilation factor must be >= 1".into(),
                    ));
                }
                inner
                    .eval(ring, (n - 1) / *t as usize + 1)?
                    .dilate_to(*t, n)
            }
            Expr::Part {
                step,
                offset,
                inner,
            } => inner.eval(ring, n)?.progression_part(*step, *offset),
            Expr::Sum(terms) => {
                let mut acc = Series::zero(ring, n)?;
                for t in terms {
                    acc = acc.add(&t.eval(ring, n)?)?;
                }
                Ok(acc)
            }
            Expr::Product(factors) => {
                let mut acc: Option<Series> = None;
                for f in factors {
                    let s = f.eval(ring, n)?;
                    acc = Some(match acc {
                        None => s,
                        Some(a) => a.mul(&s)?,
                    });
                }
                match acc {
                    Some(s) => Ok(s),
                    None => Series::one(ring, n),
                }
            }
        }
    }

    /// Shifts of the addends of the first sum found depth-first.
    pub fn sum_shifts(&self) -> Option<Vec<usize>> {
        fn shift_of(e: &Expr) -> usize {
            match e {
                Expr::Shift(t, inner) => t + shift_of(inner),
                Expr::Scale(_, inner) => shift_of(inner),
                _ => 0,
            }
        }
        match self {
            Expr::Sum(terms) if !terms.is_empty() => Some(terms.iter().map(shift_of).collect()),
            Expr::Shift(_, inner) | Expr::Scale(_, inner) | Expr::Dilate(_, inner) => {
                inner.sum_shifts()
            }
            Expr::Part { inner, .. } => inner.sum_shifts(),
            Expr::Product(fs) | Expr::Sum(fs) => fs.iter().find_map(Expr::sum_shifts),
            _ => None,
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Eta(spec) => write!(f, "eta({spec})"),
            Expr::Pochhammer(spec) => write!(f, "{spec}"),
            Expr::JacobiCube => write!(f, "sum(-1)^k(2k+1)q^(k(k+1)/2)"),
            Expr::Shift(t, inner) => write!(f, "q^{t}*{inner}"),
            Expr::Scale(c, inner) => write!(f, "{c}*{inner}"),
            Expr::Dilate(t, inner) => write!(f, "({inner})@q^{t}"),
            Expr::Part {
                step,
                offset,
                inner,
            } => write!(f, "[{inner}]_{{{step}n+{offset}}}"),
            Expr::Sum(terms) if terms.is_empty() => write!(f, "0"),
            Expr::Sum(terms) => {
                let parts: Vec<String> = terms.iter().map(|t| t.to_string()).collect();
                write!(f, "({})", parts.join(" + "))
            }
            Expr::Product(fs) if fs.is_empty() => write!(f, "1"),
            Expr::Product(fs) => {
                let parts: Vec<String> = fs.iter().map(|t| t.to_string()).collect();
                write!(f, "{}", parts.join(" * "))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exact,
    Congruent(u64),
}

impl Mode {
    fn ring(self) -> Result<CoefficientRing> {
        match self {
            Mode::Exact => Ok(CoefficientRing::Exact),
            Mode::Congruent(m) => CoefficientRing::modular(m),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => write!(f, "exact"),
            Mode::Congruent(m) => write!(f, "congruent(mod {m})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DissectionIdentity {
    pub name: String,
    pub lhs: Expr,
    pub rhs: Expr,
    pub mode: Mode,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub index: usize,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub holds: bool,
    pub mismatch: Option<Mismatch>,
}

pub fn verify_identity(id: &DissectionIdentity, n: usize) -> Result<IdentityCheck> {
    let ring = id.mode.ring()?;
    let lhs = id.lhs.eval(ring, n)?;
    let rhs = id.rhs.eval(ring, n)?;
    let mismatch = lhs.first_difference(&rhs)?.map(|index| Mismatch {
        index,
        lhs: lhs.coeff(index).to_string(),
        rhs: rhs.coeff(index).to_string(),
    });
    Ok(IdentityCheck {
        holds: mismatch.is_none(),
        mismatch,
    })
}

/// Exponent residues mod `t` that carry a coefficient nonzero mod `m`.
///
/// A modular series can only be read modulo a divisor of its own modulus.
pub fn support_classes(series: &Series, t: u64, m: u64) -> Result<BTreeSet<u64>> {
    if t < 2 {
        return Err(Error::InvalidArgument(
            "exponent modulus must be >= 2".into(),
        ));
    }
    if m < 2 {
        return Err(Error::InvalidModulus(m));
    }
    if let Some(own) = series.ring().modulus() {
        if own % m != 0 {
            return Err(Error::InvalidArgument(format!(
                "cannot read Z/{own} coefficients modulo {m}"
            )));
        }
    }
    let m_big = BigInt::from(m);
    Ok((0..series.precision())
        .filter(|&i| !series.coeff(i).mod_floor(&m_big).is_zero())
        .map(|i| i as u64 % t)
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportClaim {
    pub name: String,
    pub expr: Expr,
    pub coefficient_modulus: u64,
    pub exponent_modulus: u64,
    pub allowed: BTreeSet<u64>,
}

impl SupportClaim {
    pub fn new(
        name: impl Into<String>,
        expr: Expr,
        coefficient_modulus: u64,
        exponent_modulus: u64,
        allowed: impl IntoIterator<Item = u64>,
    ) -> Result<Self> {
        let allowed: BTreeSet<u64> = allowed.into_iter().collect();
        if allowed.is_empty() {
            return Err(Error::InvalidArgument(
                "allowed residue set is empty".into(),
            ));
        }
        if exponent_modulus < 2 || allowed.iter().any(|&r| r >= exponent_modulus) {
            return Err(Error::InvalidArgument(format!(
                "allowed residues must lie in [0, {exponent_modulus})"
            )));
        }
        CoefficientRing::modular(coefficient_modulus)?;
        Ok(SupportClaim {
            name: name.into(),
            expr,
            coefficient_modulus,
            exponent_modulus,
            allowed,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportCheck {
    pub holds: bool,
    pub classes: BTreeSet<u64>,
    pub first_violation: Option<u64>,
}

pub fn verify_support_claim(claim: &SupportClaim, n: usize) -> Result<SupportCheck> {
    let series = claim
        .expr
        .eval(CoefficientRing::modular(claim.coefficient_modulus)?, n)?;
    let classes = support_classes(&series, claim.exponent_modulus, claim.coefficient_modulus)?;
    let first_violation = (0..series.precision())
        .find(|&i| {
            !series.is_zero_at(i) && !claim.allowed.contains(&(i as u64 % claim.exponent_modulus))
        })
        .map(|i| i as u64);
    Ok(SupportCheck {
        holds: first_violation.is_none(),
        classes,
        first_violation,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RegistryItem {
    Identity(DissectionIdentity),
    Support(SupportClaim),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegistryEntry {
    pub name: String,
    pub description: String,
    pub item: RegistryItem,
    /// `false` for documented negative controls (printed forms that fail).
    pub expected_to_hold: bool,
}

/// Outcome of one registry entry, as reported by `dissect`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub mode: String,
    pub verified_to: usize,
    pub holds: bool,
    pub expected_to_hold: bool,
    pub mismatch: Option<Mismatch>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classes: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_violation: Option<u64>,
}

impl Verdict {
    /// The entry behaved as documented.
    pub fn as_expected(&self) -> bool {
        self.holds == self.expected_to_hold
    }
}

pub fn verify_entry(entry: &RegistryEntry, n: usize) -> Result<Verdict> {
    Ok(match &entry.item {
        RegistryItem::Identity(id) => {
            let check = verify_identity(id, n)?;
            Verdict {
                name: entry.name.clone(),
                mode: id.mode.to_string(),
                verified_to: n,
                holds: check.holds,
                expected_to_hold: entry.expected_to_hold,
                mismatch: check.mismatch,
                classes: None,
                first_violation: None,
            }
        }
        RegistryItem::Support(claim) => {
            let check = verify_support_claim(claim, n)?;
            Verdict {
                name: entry.name.clone(),
                mode: format!(
                    "support(coefficients mod {}, exponents mod {})",
                    claim.coefficient_modulus, claim.exponent_modulus
                ),
                verified_to: n,
                holds: check.holds,
                expected_to_hold: entry.expected_to_hold,
                mismatch: None,
                classes: Some(check.classes.into_iter().collect()),
                first_violation: check.first_violation,
            }
        }
    })
}

pub fn verify_entries(entries: &[RegistryEntry], n: usize) -> Result<Vec<Verdict>> {
    entries.par_iter().map(|e| verify_entry(e, n)).collect()
}

fn eta(factors: &[(u64, i64)]) -> Expr {
    Expr::eta(factors).expect("static eta spec")
}

fn poch(b: u64, num: &[u64], den: &[u64]) -> Expr {
    Expr::pochhammer(b, num, den).expect("static Pochhammer spec")
}

fn identity(
    name: &str,
    description: &str,
    lhs: Expr,
    rhs: Expr,
    mode: Mode,
    expected: bool,
) -> RegistryEntry {
    RegistryEntry {
        name: name.to_string(),
        description: description.to_string(),
        item: RegistryItem::Identity(DissectionIdentity {
            name: name.to_string(),
            lhs,
            rhs,
            mode,
        }),
        expected_to_hold: expected,
    }
}

fn support(
    name: &str,
    description: &str,
    expr: Expr,
    m: u64,
    t: u64,
    allowed: &[u64],
) -> RegistryEntry {
    RegistryEntry {
        name: name.to_string(),
        description: description.to_string(),
        item: RegistryItem::Support(
            SupportClaim::new(name, expr, m, t, allowed.iter().copied())
                .expect("static support claim"),
        ),
        expected_to_hold: true,
    }
}

fn l5_first() -> Expr {
    eta(&[(6, 1), (9, 2), (3, -1), (18, -1)])
}

fn l5_second() -> Expr {
    eta(&[(18, 2), (9, -1)])
}

/// The built-in identities, support claims and proof intermediates.
pub fn builtin_identities() -> Vec<RegistryEntry> {
    let cube = eta(&[(1, 3)]);
    let f1_product = poch(1, &[1], &[]);
    let a11 = eta(&[(2, 10), (1, -11)]);
    let a11_main = eta(&[(6, 3), (9, 14), (3, -3), (18, -7)]);
    let a_q5 = Expr::Pochhammer(PochhammerProductSpec::quintic_a().dilated(5));
    let a_q5_inv = Expr::Pochhammer(PochhammerProductSpec::quintic_a().dilated(5).reciprocal());

    vec![
        identity(
            "L1",
            "f_1^3 = sum (-1)^k (2k+1) q^{k(k+1)/2} (eta product against the triangular sum)",
            cube.clone(),
            Expr::JacobiCube,
            Mode::Exact,
            true,
        ),
        identity(
            "L1-pentagonal",
            "(q;q)_inf as a product equals the pentagonal-number sum f_1",
            f1_product.clone(),
            eta(&[(1, 1)]),
            Mode::Exact,
            true,
        ),
        identity(
            "L2",
            "(q;q)_inf^3 from three explicit products equals the triangular sum",
            Expr::Product(vec![f1_product.clone(), f1_product.clone(), f1_product]),
            Expr::JacobiCube,
            Mode::Exact,
            true,
        ),
        support(
            "L2-support",
            "f_1^3 mod 11 lives on exponents 0,1,3,6,10 mod 11 (classes J_i)",
            Expr::JacobiCube,
            11,
            11,
            &[0, 1, 3, 6, 10],
        ),
        support(
            "L3-support",
            "f_1^3 mod 2 lives on exponents 0,1,3,6 mod 7 (classes beta_i)",
            cube.clone(),
            2,
            7,
            &[0, 1, 3, 6],
        ),
        support(
            "L4-support",
            "f_1^3 mod 2 lives on exponents 0,1,3,4,6,10 mod 11 (classes gamma_i)",
            cube.clone(),
            2,
            11,
            &[0, 1, 3, 4, 6, 10],
        ),
        identity(
            "L5",
            "f_2^2/f_1 = f_6 f_9^2/(f_3 f_18) + q f_18^2/f_9",
            eta(&[(2, 2), (1, -1)]),
            Expr::Sum(vec![l5_first(), l5_second().shifted(1)]),
            Mode::Exact,
            true,
        ),
        identity(
            "L5-literal",
            "f_2^2/f_1 = f_6 f_9^2/(f_3 f_18) + f_18^2/f_9 as printed, without the q; fails at q^0",
            eta(&[(2, 2), (1, -1)]),
            Expr::Sum(vec![l5_first(), l5_second()]),
            Mode::Exact,
            false,
        ),
        identity(
            "L5-3n+2",
            "the q^{3n+2} terms of f_2^2/f_1 vanish",
            eta(&[(2, 2), (1, -1)]).part(3, 2),
            Expr::zero(),
            Mode::Exact,
            true,
        ),
        identity(
            "L6",
            "f_1^3 = f_6 f_9^6/(f_3 f_18^3) - 3q f_9^3 + 4q^3 f_3^2 f_18^6/(f_6^2 f_9^3)",
            cube.clone(),
            Expr::Sum(vec![
                eta(&[(6, 1), (9, 6), (3, -1), (18, -3)]),
                eta(&[(9, 3)]).shifted(1).scaled(-3),
                eta(&[(3, 2), (18, 6), (6, -2), (9, -3)])
                    .shifted(3)
                    .scaled(4),
            ]),
            Mode::Exact,
            true,
        ),
        identity(
            "L7",
            "f_1 = f_25 (a(q^5) - q - q^2/a(q^5))",
            eta(&[(1, 1)]),
            Expr::Product(vec![
                eta(&[(25, 1)]),
                Expr::Sum(vec![
                    a_q5,
                    Expr::one().shifted(1).scaled(-1),
                    a_q5_inv.shifted(2).scaled(-1),
                ]),
            ]),
            Mode::Exact,
            true,
        ),
        identity(
            "L8",
            "7-dissection of f_1 with quotients of (q^a; q^49)_inf",
            eta(&[(1, 1)]),
            Expr::Product(vec![
                eta(&[(49, 1)]),
                Expr::Sum(vec![
                    poch(49, &[14, 35], &[7, 42]),
                    poch(49, &[21, 28], &[14, 35]).shifted(1).scaled(-1),
                    Expr::one().shifted(2).scaled(-1),
                    poch(49, &[7, 42], &[21, 28]).shifted(5),
                ]),
            ]),
            Mode::Exact,
            true,
        ),
        identity(
            "L9",
            "11-dissection of f_1 with quotients of (q^a; q^121)_inf",
            eta(&[(1, 1)]),
            Expr::Product(vec![
                eta(&[(121, 1)]),
                Expr::Sum(vec![
                    poch(121, &[44, 77], &[22, 99]),
                    poch(121, &[22, 99], &[11, 110]).shifted(1).scaled(-1),
                    poch(121, &[55, 66], &[33, 88]).shifted(2).scaled(-1),
                    Expr::one().shifted(5),
                    poch(121, &[33, 88], &[44, 77]).shifted(7),
                    poch(121, &[11, 110], &[55, 66]).shifted(15).scaled(-1),
                ]),
            ]),
            Mode::Exact,
            true,
        ),
        identity(
            "a3-mod2",
            "a_3 generating function f_2^2/f_1^3 is f_1 mod 2",
            eta(&[(2, 2), (1, -3)]),
            eta(&[(1, 1)]),
            Mode::Congruent(2),
            true,
        ),
        identity(
            "a5-mod2",
            "a_5 generating function f_2^4/f_1^5 is f_1^3 mod 2",
            eta(&[(2, 4), (1, -5)]),
            cube.clone(),
            Mode::Congruent(2),
            true,
        ),
        identity(
            "a11-mod2-product",
            "f_2^10/f_1^11 = (f_1^3)^2 f_2^2/f_1 mod 2",
            a11.clone(),
            Expr::Product(vec![cube.clone(), cube, eta(&[(2, 2), (1, -1)])]),
            Mode::Congruent(2),
            true,
        ),
        identity(
            "a11-mod2-3n",
            "q^{3n} terms of f_2^10/f_1^11 = f_6^3 f_9^14/(f_3^3 f_18^7) + q^3 f_9^5 f_18^2 mod 2",
            a11.clone().part(3, 0),
            Expr::Sum(vec![a11_main.clone(), eta(&[(9, 5), (18, 2)]).shifted(3)]),
            Mode::Congruent(2),
            true,
        ),
        identity(
            "a11-mod2-3n-printed",
            "q^{3n} extraction as printed (16q^6 and 4q^3 terms); fails mod 2 at q^3",
            a11.clone().part(3, 0),
            Expr::Sum(vec![
                a11_main,
                eta(&[(3, 3), (18, 1), (6, -3), (9, -4)])
                    .shifted(6)
                    .scaled(16),
                eta(&[(18, 2), (9, 5)]).shifted(3).scaled(4),
            ]),
            Mode::Congruent(2),
            false,
        ),
        identity(
            "a11-mod11",
            "f_2^10/f_1^11 = (f_22/f_11) sum p(n) q^{2n} mod 11",
            a11,
            Expr::Product(vec![eta(&[(22, 1), (11, -1)]), eta(&[(1, -1)]).dilated(2)]),
            Mode::Congruent(11),
            true,
        ),
    ]
}

pub fn registry_entry(name: &str) -> Result<RegistryEntry> {
    builtin_identities()
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownName(name.to_string()))
}
