use num_bigint::BigInt;
use proptest::prelude::*;

use qcong::congruence::{verify_claim, ClaimReport, CongruenceClaim};
use qcong::partitions::a_table_series;
use qcong::scan::{scan, ScanConfig, ScanLimits};
use qcong::{CoefficientRing, Series};

fn exact(coeffs: Vec<i64>) -> Series {
    Series::new(CoefficientRing::Exact, &coeffs).unwrap()
}

fn coeffs(len: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-50i64..50, len)
}

fn unit_coeffs(len: usize) -> impl Strategy<Value = Vec<i64>> {
    coeffs(len).prop_map(|mut c| {
        c[0] = if c[0] >= 0 { 1 } else { -1 };
        c
    })
}

fn ring() -> impl Strategy<Value = CoefficientRing> {
    prop_oneof![
        Just(CoefficientRing::Exact),
        (2u64..200).prop_map(CoefficientRing::Modular),
        Just(CoefficientRing::Modular(u32::MAX as u64)),
    ]
}

proptest! {
    #[test]
    fn ring_axioms(r in ring(), a in coeffs(24), b in coeffs(24), c in coeffs(24)) {
        let (a, b, c) = (Series::new(r, &a).unwrap(), Series::new(r, &b).unwrap(), Series::new(r, &c).unwrap());
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(
            a.mul(&b.add(&c).unwrap()).unwrap(),
            a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
        );
        prop_assert!(a.sub(&a).unwrap().is_zero());
        prop_assert_eq!(a.mul(&Series::one(r, 24).unwrap()).unwrap(), a.clone());
        prop_assert_eq!(a.add(&a.neg()).unwrap(), Series::zero(r, 24).unwrap());
    }

    #[test]
    fn inverse_is_two_sided(a in unit_coeffs(30)) {
        let a = exact(a);
        let inv = a.invert().unwrap();
        prop_assert_eq!(a.mul(&inv).unwrap(), Series::one(CoefficientRing::Exact, 30).unwrap());
        prop_assert_eq!(inv.invert().unwrap(), a);
    }

    #[test]
    fn pow_is_additive(a in unit_coeffs(20), e1 in -4i64..5, e2 in -4i64..5) {
        let a = exact(a);
        prop_assert_eq!(a.pow(e1 + e2).unwrap(), a.pow(e1).unwrap().mul(&a.pow(e2).unwrap()).unwrap());
    }

    #[test]
    fn extract_undoes_dilate(a in coeffs(20), t in 1u64..=12) {
        let a = exact(a);
        let d = a.dilate(t).unwrap();
        prop_assert_eq!(d.precision(), 19 * t as usize + 1);
        prop_assert_eq!(d.extract_progression(t, 0).unwrap(), a);
        for b in 1..t {
            prop_assert!(d.extract_progression(t, b).unwrap().is_zero());
        }
    }

    #[test]
    fn progression_parts_partition_a_series(a in coeffs(40), t in 1u64..=9) {
        let a = exact(a);
        let mut total = Series::zero(CoefficientRing::Exact, 40).unwrap();
        for b in 0..t {
            let part = a.progression_part(t, b).unwrap();
            let back = part.extract_progression(t, b).unwrap().dilate_to(t, 40 - b as usize).unwrap().shift(b as usize);
            prop_assert_eq!(&back, &part);
            total = total.add(&part).unwrap();
        }
        prop_assert_eq!(total, a);
    }

    #[test]
    fn reduction_is_a_homomorphism(a in coeffs(20), b in unit_coeffs(20), m in 2u64..1000) {
        let (a, b) = (exact(a), exact(b));
        let red = |s: &Series| s.reduce_mod(m).unwrap();
        prop_assert_eq!(red(&a.add(&b).unwrap()), red(&a).add(&red(&b)).unwrap());
        prop_assert_eq!(red(&a.mul(&b).unwrap()), red(&a).mul(&red(&b)).unwrap());
        prop_assert_eq!(red(&b.invert().unwrap()), red(&b).invert().unwrap());
        prop_assert_eq!(red(&a.dilate(3).unwrap()), red(&a).dilate(3).unwrap());
        prop_assert_eq!(red(&a.extract_progression(4, 1).unwrap()), red(&a).extract_progression(4, 1).unwrap());
    }

    #[test]
    fn modular_mul_agrees_with_exact_near_the_limit(a in prop::collection::vec(0i64..i64::MAX, 40), b in prop::collection::vec(0i64..i64::MAX, 40)) {
        let m = u32::MAX as u64;
        let (a, b) = (exact(a), exact(b));
        prop_assert_eq!(a.mul(&b).unwrap().reduce_mod(m).unwrap(), a.reduce_mod(m).unwrap().mul(&b.reduce_mod(m).unwrap()).unwrap());
    }

    #[test]
    fn scanner_agrees_with_verifier(k in 1u64..7, m in 2u64..6, a in 2u64..9) {
        let config = ScanConfig {
            k_values: vec![k],
            moduli: vec![m],
            steps: vec![a],
            offsets: None,
            precision: 300,
            survivors_only: false,
        };
        let report = scan(&config, &ScanLimits::default()).unwrap();
        for e in &report.results {
            let direct = verify_claim(&e.report.claim, 300, 0).unwrap();
            prop_assert_eq!(e.report.result, direct);
        }
    }

    #[test]
    fn witness_is_a_real_counterexample(k in 1u64..8, a in 1u64..12, b in 0u64..12, m in 2u64..8) {
        let claim = CongruenceClaim::single(k, a, b, m);
        let r = verify_claim(&claim, 400, 0).unwrap();
        let table = a_table_series(k, CoefficientRing::Exact, 400).unwrap();
        match r.witness {
            Some(w) => {
                let v = table.value((a * w.n + b) as usize);
                prop_assert_eq!(BigInt::from(w.residue), v.clone() % BigInt::from(m));
                prop_assert!(v % BigInt::from(m) != BigInt::from(0));
                for n in 0..w.n {
                    prop_assert_eq!(table.value((a * n + b) as usize) % BigInt::from(m), BigInt::from(0));
                }
            }
            None => {
                for n in 0..=r.checked_n_up_to {
                    prop_assert_eq!(table.value((a * n + b) as usize) % BigInt::from(m), BigInt::from(0));
                }
            }
        }
    }

    #[test]
    fn verification_is_monotone_in_precision(k in 1u64..8, a in 1u64..12, b in 0u64..12, m in 2u64..8) {
        let claim = CongruenceClaim::single(k, a, b, m);
        let short = verify_claim(&claim, 200, 0).unwrap();
        let long = verify_claim(&claim, 500, 0).unwrap();
        if !short.is_verified() {
            prop_assert_eq!(short.witness, long.witness);
        }
        if long.is_verified() {
            prop_assert!(short.is_verified());
        }
    }

    #[test]
    fn claim_report_json_round_trips(k0 in 1u64..30, c in 0u64..12, a in 1u64..30, b in 0u64..30, m in 2u64..30) {
        let claim = CongruenceClaim::new(qcong::congruence::KFamily { c, k0 }, a, b, m);
        let report = ClaimReport {
            name: Some(claim.to_string()),
            claim,
            result: verify_claim(&claim, 200, 1).unwrap(),
        };
        let text = serde_json::to_string(&report).unwrap();
        prop_assert_eq!(serde_json::from_str::<ClaimReport>(&text).unwrap(), report);
    }
}
