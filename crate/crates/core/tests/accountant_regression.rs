mod common;

use common::{accountant_regression_cases, rel_err, REGRESSION_RTOL};
use netshuffle::accountant::*;

#[test]
fn frozen_oracle_values() {
    let mut failures = Vec::new();
    for (name, got, want) in accountant_regression_cases() {
        if rel_err(got, want) > REGRESSION_RTOL {
            failures.push(format!("{name}: got {got:.17e}, want {want:.17e}"));
        }
    }
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn symmetric_with_unit_rho_equals_stationary() {
    let lp = LocalPrivacyParams::pure(0.8).unwrap();
    let d = DeltaParams::defaults_for(5000);
    for sp2 in [1.0 / 5000.0, 3e-4, 0.01] {
        let a = amplify_all_stationary(&lp, 5000, sp2, &d).unwrap();
        let b = amplify_all_symmetric(&lp, 5000, sp2, 1.0, &d).unwrap();
        assert_eq!(a.epsilon, b.epsilon);
    }
}

#[test]
fn approximate_path_rejects_large_delta0() {
    let d = DeltaParams { delta: 1e-6, delta1: Some(1e-12), delta2: 1e-6 };
    let lp = LocalPrivacyParams::new(0.05, 1e-9).unwrap();
    assert!(matches!(amplify_all_stationary(&lp, 1000, 0.002, &d), Err(AccountantError::Delta0TooLarge { .. })));
    let no_d1 = DeltaParams { delta1: None, ..d };
    let lp = LocalPrivacyParams::new(0.05, 1e-20).unwrap();
    assert_eq!(amplify_all_stationary(&lp, 1000, 0.002, &no_d1).unwrap_err(), AccountantError::MissingDelta1);
}
