//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so every criterion reports even when an
//! earlier one fails. Exits nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qcong::congruence::{
    catalog_lookup, verify_catalog, verify_claim, verify_frobenius_congruence, CongruenceClaim,
    Status,
};
use qcong::dissection::{registry_entry, support_classes, verify_entry, RegistryItem};
use qcong::eta::theta_triple_product_check;
use qcong::partitions::{a_bruteforce, a_table_recurrence, a_table_series, p_table};
use qcong::scan::{scan, ScanConfig, ScanLimits};
use qcong::{CoefficientRing, Series};

const Z: CoefficientRing = CoefficientRing::Exact;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn three_routes(k: u64, n: u64) -> (BigInt, BigInt, BigInt) {
    let len = n as usize + 1;
    (
        a_bruteforce(k, n).unwrap(),
        a_table_series(k, Z, len).unwrap().value(n as usize),
        a_table_recurrence(k, len).unwrap().value(n as usize),
    )
}

fn c1_worked_example() -> Check {
    let (b, s, r) = three_routes(3, 3);
    let want = BigInt::from(16);
    ensure(b == want && s == want && r == want, || {
        format!("a_3(3): {b} / {s} / {r}, want 16")
    })?;
    Ok("a_3(3) = 16 by brute force, series and recurrence".into())
}

fn c2_oracle_equivalence() -> Check {
    for k in 1..=5 {
        let series = a_table_series(k, Z, 26).unwrap();
        let rec = a_table_recurrence(k, 26).unwrap();
        for n in 0..=25u64 {
            let b = a_bruteforce(k, n).unwrap();
            let (s, r) = (series.value(n as usize), rec.value(n as usize));
            ensure(b == s && s == r, || format!("k={k} n={n}: {b} / {s} / {r}"))?;
        }
    }
    Ok("130 (k, n) pairs agree across all three routes".into())
}

fn c3_catalog() -> Check {
    let reports = verify_catalog(2000, 3).map_err(|e| e.to_string())?;
    let failed: Vec<String> = reports
        .iter()
        .filter(|r| !r.result.is_verified())
        .map(|r| {
            let w = r.result.witness.unwrap();
            format!(
                "{} [k={} n={} residue={}]",
                r.name.as_deref().unwrap_or("?"),
                w.k,
                w.n,
                w.residue
            )
        })
        .collect();
    ensure(failed.is_empty(), || {
        format!(
            "{} of {} claims have counterexamples: {}",
            failed.len(),
            reports.len(),
            failed.join("; ")
        )
    })?;
    Ok(format!(
        "{} claims verified at N = 2000, j <= 3",
        reports.len()
    ))
}

fn c4_negative_control() -> Check {
    let r =
        verify_claim(&CongruenceClaim::single(3, 5, 2, 2), 2000, 0).map_err(|e| e.to_string())?;
    ensure(r.status == Status::Counterexample, || {
        "planted claim was not rejected".into()
    })?;
    let w = r.witness.unwrap();
    ensure(w.n == 0 && w.residue == 1, || {
        format!("witness n={} residue={}", w.n, w.residue)
    })?;
    let brute = a_bruteforce(3, 2).unwrap();
    ensure(brute == BigInt::from(7), || {
        format!("a_3(2) by brute force = {brute}")
    })?;
    Ok("a_3(5n+2) = 0 mod 2 rejected at n = 0, residue 1 (a_3(2) = 7)".into())
}

fn c5_dissections() -> Check {
    let mut notes = Vec::new();
    for name in ["L1", "L2", "L5", "L6", "L7", "L8", "L9"] {
        let v = verify_entry(&registry_entry(name).unwrap(), 1000).map_err(|e| e.to_string())?;
        ensure(v.holds, || format!("{name} fails at {:?}", v.mismatch))?;
    }
    let lit =
        verify_entry(&registry_entry("L5-literal").unwrap(), 1000).map_err(|e| e.to_string())?;
    ensure(lit.mismatch.as_ref().map(|m| m.index) == Some(0), || {
        format!("literal L5 mismatch {:?}, want index 0", lit.mismatch)
    })?;
    for name in ["L2-support", "L3-support", "L4-support"] {
        let entry = registry_entry(name).unwrap();
        let v = verify_entry(&entry, 2000).map_err(|e| e.to_string())?;
        ensure(v.holds, || {
            format!("{name} violated at q^{:?}", v.first_violation)
        })?;
        let RegistryItem::Support(claim) = &entry.item else {
            return Err(format!("{name} is not a support claim"));
        };
        let head = claim
            .expr
            .eval(CoefficientRing::Modular(claim.coefficient_modulus), 200)
            .map_err(|e| e.to_string())?;
        let seen =
            support_classes(&head, claim.exponent_modulus, claim.coefficient_modulus).unwrap();
        ensure(seen == claim.allowed, || {
            format!(
                "{name}: classes below 200 are {seen:?}, want {:?}",
                claim.allowed
            )
        })?;
        notes.push(format!("{name} {seen:?}"));
    }
    Ok(format!(
        "7 identities to N = 1000, literal L5 fails at 0, tight supports: {}",
        notes.join(", ")
    ))
}

fn c6_frobenius() -> Check {
    for (m, p, e) in [
        (1, 2, 1),
        (1, 2, 2),
        (1, 2, 3),
        (1, 3, 1),
        (2, 11, 1),
        (1, 7, 1),
    ] {
        let r = verify_frobenius_congruence(m, p, e, 500).map_err(|e| e.to_string())?;
        ensure(r.holds, || {
            format!("(m,p,k) = ({m},{p},{e}) fails at {:?}", r.first_mismatch)
        })?;
    }
    Ok("six (m, p, k) cases hold to N = 500".into())
}

fn c7_ramanujan() -> Check {
    let p = p_table(5000).unwrap();
    let eleven = BigInt::from(11);
    let mut count = 0;
    for i in (6..5000).step_by(11) {
        ensure((p.value(i) % &eleven).is_zero(), || {
            format!("p({i}) = {} is not 0 mod 11", p.value(i))
        })?;
        count += 1;
    }
    Ok(format!(
        "p(11n+6) = 0 mod 11 for all {count} indices below 5000"
    ))
}

fn c8_scan() -> Check {
    let steps = [3, 5, 6, 7, 9, 11, 13, 17, 19];
    let config = ScanConfig {
        k_values: vec![3, 5],
        moduli: vec![2],
        steps: steps.to_vec(),
        offsets: None,
        precision: 3000,
        survivors_only: false,
    };
    let report = scan(&config, &ScanLimits::default()).map_err(|e| e.to_string())?;
    let survivors: BTreeSet<(u64, u64, u64)> = report
        .survivors()
        .map(|e| {
            (
                e.report.claim.k.k0,
                e.report.claim.step,
                e.report.claim.offset,
            )
        })
        .collect();

    for e in report.survivors() {
        let c = &e.report.claim;
        let listed = catalog_lookup(c.k.k0, c.step, c.offset, c.modulus).is_some();
        ensure(e.unlisted == !listed, || {
            format!("unlisted flag wrong for {c}")
        })?;
    }

    // Published mod-2 progressions a_k(A n + B) for these k and A.
    let mut published: BTreeSet<(u64, u64, u64)> = BTreeSet::new();
    for (a, b) in [
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
        published.insert((3, a, b));
    }
    for a in [7, 11, 13, 17, 19] {
        published.insert((5, a, 3));
    }
    published.insert((5, 3, 2));
    published.insert((5, 6, 5));

    let missing: Vec<String> = published
        .difference(&survivors)
        .map(|&(k, a, b)| {
            let e = report
                .results
                .iter()
                .find(|e| {
                    (
                        e.report.claim.k.k0,
                        e.report.claim.step,
                        e.report.claim.offset,
                    ) == (k, a, b)
                })
                .unwrap();
            let w = e.report.result.witness.unwrap();
            format!("a_{k}({a}n+{b}) [n={} residue={}]", w.n, w.residue)
        })
        .collect();
    let unlisted = report.survivors().filter(|e| e.unlisted).count();
    ensure(missing.is_empty(), || {
        format!(
            "{} published progressions did not survive: {}; {} survivors, {} unlisted",
            missing.len(),
            missing.join(", "),
            survivors.len(),
            unlisted
        )
    })?;
    Ok(format!(
        "{} survivors of {} progressions contain all {} published ones; {} flagged unlisted",
        survivors.len(),
        report.grid_size,
        published.len(),
        unlisted
    ))
}

/// Schoolbook product on i128, independent of the library's multiplication.
fn naive_mul(a: &[i64], b: &[i64], n: usize) -> Vec<i128> {
    let mut out = vec![0i128; n];
    for (i, &x) in a.iter().enumerate().take(n) {
        for (j, &y) in b.iter().enumerate().take(n - i) {
            out[i + j] += x as i128 * y as i128;
        }
    }
    out
}

fn as_i128(s: &Series) -> Vec<i128> {
    s.coeffs().iter().map(|c| c.to_i128().unwrap()).collect()
}

fn c9_kernel_properties() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_2024);
    let mut cases = 0;
    for _ in 0..200 {
        let n = rng.gen_range(1..=40);
        let a: Vec<i64> = (0..n).map(|_| rng.gen_range(-1000..=1000)).collect();
        let b: Vec<i64> = (0..n).map(|_| rng.gen_range(-1000..=1000)).collect();
        let c: Vec<i64> = (0..n).map(|_| rng.gen_range(-1000..=1000)).collect();
        let m = rng.gen_range(2..=u32::MAX as u64);
        for ring in [Z, CoefficientRing::Modular(m)] {
            let sa = Series::new(ring, &a).unwrap();
            let sb = Series::new(ring, &b).unwrap();
            let sc = Series::new(ring, &c).unwrap();
            let ab = sa.mul(&sb).unwrap();
            ensure(ab == sb.mul(&sa).unwrap(), || {
                format!("commutativity over {ring}")
            })?;
            ensure(
                ab.mul(&sc).unwrap() == sa.mul(&sb.mul(&sc).unwrap()).unwrap(),
                || format!("associativity over {ring}"),
            )?;
            ensure(
                sa.mul(&sb.add(&sc).unwrap()).unwrap() == ab.add(&sa.mul(&sc).unwrap()).unwrap(),
                || format!("distributivity over {ring}"),
            )?;
            ensure(sa.add(&sa.neg()).unwrap().is_zero(), || {
                format!("additive inverse over {ring}")
            })?;
        }
        let naive = naive_mul(&a, &b, n);
        ensure(
            as_i128(
                &Series::new(Z, &a)
                    .unwrap()
                    .mul(&Series::new(Z, &b).unwrap())
                    .unwrap(),
            ) == naive,
            || "exact product differs from schoolbook".into(),
        )?;

        let mut u = a.clone();
        u[0] = if rng.gen_bool(0.5) { 1 } else { -1 };
        let su = Series::new(Z, &u).unwrap();
        let inv = su.invert().unwrap();
        ensure(su.mul(&inv).unwrap() == Series::one(Z, n).unwrap(), || {
            "u * u^-1 != 1".into()
        })?;
        let mm = Series::new(CoefficientRing::Modular(m), &u).unwrap();
        ensure(
            mm.mul(&mm.invert().unwrap()).unwrap()
                == Series::one(CoefficientRing::Modular(m), n).unwrap(),
            || format!("modular inverse mod {m}"),
        )?;

        let t = rng.gen_range(1..=12u64);
        let sa = Series::new(Z, &a).unwrap();
        let d = sa.dilate(t).unwrap();
        ensure(d.extract_progression(t, 0).unwrap() == sa, || {
            format!("extract(dilate(s, {t})) != s")
        })?;
        for off in 1..t.min(d.precision() as u64) {
            ensure(d.extract_progression(t, off).unwrap().is_zero(), || {
                format!("dilate by {t} leaks into class {off}")
            })?;
        }
        cases += 1;
    }
    let mut theta = 0;
    for s in 1..=5 {
        for t in s..=5 {
            let r = theta_triple_product_check(s, t, 300).map_err(|e| e.to_string())?;
            ensure(r.equal, || {
                format!(
                    "triple product (s,t)=({s},{t}) fails at {:?}",
                    r.first_mismatch
                )
            })?;
            theta += 1;
        }
    }
    Ok(format!(
        "{cases} seeded cases over Z and Z/m, {theta} triple-product specializations to N = 300"
    ))
}

struct Criterion {
    id: u32,
    title: &'static str,
    limit: Option<Duration>,
    run: fn() -> Check,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            id: 1,
            title: "worked example",
            limit: Some(Duration::from_secs(1)),
            run: c1_worked_example,
        },
        Criterion {
            id: 2,
            title: "oracle equivalence",
            limit: Some(Duration::from_secs(30)),
            run: c2_oracle_equivalence,
        },
        Criterion {
            id: 3,
            title: "catalog regression",
            limit: Some(Duration::from_secs(60)),
            run: c3_catalog,
        },
        Criterion {
            id: 4,
            title: "negative control",
            limit: None,
            run: c4_negative_control,
        },
        Criterion {
            id: 5,
            title: "dissection suite",
            limit: None,
            run: c5_dissections,
        },
        Criterion {
            id: 6,
            title: "binomial congruence",
            limit: None,
            run: c6_frobenius,
        },
        Criterion {
            id: 7,
            title: "Ramanujan anchor",
            limit: None,
            run: c7_ramanujan,
        },
        Criterion {
            id: 8,
            title: "scan rediscovery",
            limit: Some(Duration::from_secs(300)),
            run: c8_scan,
        },
        Criterion {
            id: 9,
            title: "kernel properties",
            limit: None,
            run: c9_kernel_properties,
        },
    ];
    // Keep panics from tangling with the report lines.
    panic::set_hook(Box::new(|_| {}));
    let mut failures = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let outcome = match (outcome, c.limit) {
            (Ok(_), Some(limit)) if elapsed > limit => {
                Err(format!("took {elapsed:.2?}, limit {limit:?}"))
            }
            (o, _) => o,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        if outcome.is_err() {
            failures += 1;
        }
        println!(
            "criterion {} {:<20} {tag}  [{elapsed:.2?}]  {detail}",
            c.id, c.title
        );
    }
    println!(
        "acceptance: {} passed, {failures} failed",
        criteria.len() - failures
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
