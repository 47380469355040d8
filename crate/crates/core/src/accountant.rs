//! Central `(epsilon, delta)` guarantees of network shuffling.
//!
//! All bounds take `sum_p2 = sum_i P_i^2` as an input. For the stationary
//! scenario callers pass the finite-time bound from
//! [`crate::spectral::sum_p_squared_bound`]; for the symmetric scenario they
//! pass the exact walk distribution's value together with its `rho_star`.
//!
//! When the local randomizer is `(eps0, delta0)`-DP with `delta0 > 0`, it is
//! first replaced by a pure `8 eps0`-DP randomizer within total variation
//! `delta1`, which is only possible below [`delta0_threshold`]. The
//! resulting `delta' = delta + delta2 + n (e^eps' + 1) delta1`.
//!
//! Comparison with other amplification mechanisms, for `eps0 > 1` and
//! ignoring polylog factors in `delta` and `n`: no amplification keeps
//! `eps0`; uniform shuffling and subsampling need a trusted curator to break
//! the user-report link; network shuffling reaches `O(e^{1.5 eps0} / sqrt(n))`
//! without one.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum AccountantError {
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter { name: &'static str, value: f64, reason: &'static str },
    #[error("delta1 is required when delta0 > 0")]
    MissingDelta1,
    #[error("delta0 = {delta0:e} too large for the 8*eps0 pure-DP reduction (threshold {threshold:e})")]
    Delta0TooLarge { delta0: f64, threshold: f64 },
    #[error("bound is not finite for these inputs (eps0 too large)")]
    NonFinite,
}

fn check(name: &'static str, value: f64, ok: bool, reason: &'static str) -> Result<(), AccountantError> {
    if ok {
        Ok(())
    } else {
        Err(AccountantError::InvalidParameter { name, value, reason })
    }
}

/// Privacy of the local randomizer.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalPrivacyParams {
    pub epsilon0: f64,
    pub delta0: f64,
}

impl LocalPrivacyParams {
    pub fn new(epsilon0: f64, delta0: f64) -> Result<Self, AccountantError> {
        check("epsilon0", epsilon0, epsilon0 >= 0.0 && epsilon0.is_finite(), "must be finite and >= 0")?;
        check("delta0", delta0, (0.0..1.0).contains(&delta0), "must lie in [0, 1)")?;
        Ok(Self { epsilon0, delta0 })
    }

    pub fn pure(epsilon0: f64) -> Result<Self, AccountantError> {
        Self::new(epsilon0, 0.0)
    }
}

/// The failure probabilities entering a bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeltaParams {
    /// Slack of the advanced composition.
    pub delta: f64,
    /// Total-variation slack of the `8 eps0` reduction (approximate LDP only).
    pub delta1: Option<f64>,
    /// Failure probability of the report-allocation concentration bound.
    pub delta2: f64,
}

impl DeltaParams {
    /// `delta = delta2 = 1/n^2`, `delta1 = 1/n^3`.
    pub fn defaults_for(n: usize) -> Self {
        let n = n as f64;
        Self { delta: 1.0 / (n * n), delta1: Some(1.0 / (n * n * n)), delta2: 1.0 / (n * n) }
    }

    fn validate(&self) -> Result<(), AccountantError> {
        let open = |x: f64| x > 0.0 && x < 1.0;
        check("delta", self.delta, open(self.delta), "must lie in (0, 1)")?;
        check("delta2", self.delta2, open(self.delta2), "must lie in (0, 1)")?;
        if let Some(d1) = self.delta1 {
            check("delta1", d1, open(d1), "must lie in (0, 1)")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Protocol {
    /// Every user submits all reports it holds.
    All,
    /// Every user submits one held report, or a dummy when it holds none.
    Single,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scenario {
    /// Any ergodic graph, bounded through the stationary distribution.
    Stationary,
    /// Regular graphs, with the exact per-user walk distribution.
    Symmetric,
}

/// Leading factor of `epsilon1` in the all-reports bounds.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Epsilon1Scaling {
    /// `sqrt((1 - 1/n) sum_p2)`, the published statement.
    #[default]
    Normalized,
    /// `sqrt((n - 1) sum_p2)`, the scaling written in the fixed-allocation
    /// argument. Kept for comparison; the two forms disagree by a factor `n`.
    Unnormalized,
}

/// Inputs echoed alongside every result.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AmplificationInputs {
    pub n: usize,
    pub sum_p2: f64,
    pub rho_star: f64,
    pub local: LocalPrivacyParams,
    pub deltas: DeltaParams,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AmplificationResult {
    pub epsilon: f64,
    pub delta: f64,
    /// `epsilon1` of the all-reports bounds; `None` for single reporting.
    pub epsilon1: Option<f64>,
    pub protocol: Protocol,
    pub scenario: Scenario,
    /// Whether the `8 eps0` approximate-LDP path was taken.
    pub approximate: bool,
    pub inputs: AmplificationInputs,
}

/// Heterogeneous advanced composition of `eps_i`-DP mechanisms:
/// `sum_i (e^eps_i - 1) eps_i / (e^eps_i + 1) + sqrt(2 log(1/delta) sum_i eps_i^2)`.
pub fn compose_heterogeneous(eps: &[f64], delta: f64) -> f64 {
    let first: f64 = eps.iter().map(|&e| e * (e / 2.0).tanh()).sum();
    let squares: f64 = eps.iter().map(|e| e * e).sum();
    first + (2.0 * (1.0 / delta).ln() * squares).sqrt()
}

/// Largest `delta0` for which an `(eps0, delta0)` randomizer is within total
/// variation `delta1` of a pure `8 eps0` one.
pub fn delta0_threshold(epsilon0: f64, delta1: f64) -> Result<f64, AccountantError> {
    check("epsilon0", epsilon0, epsilon0 > 0.0, "threshold needs eps0 > 0")?;
    check("delta1", delta1, delta1 > 0.0 && delta1 < 1.0, "must lie in (0, 1)")?;
    let one_minus_exp = -(-epsilon0).exp_m1();
    // ln(1 / (1 - e^{-5 eps0})) = -ln(1 - e^{-5 eps0})
    let denom_log = -(-(-5.0 * epsilon0).exp()).ln_1p();
    let inner = 2.0 + (2.0 / delta1).ln() / denom_log;
    Ok(one_minus_exp * delta1 / (4.0 * epsilon0.exp() * inner))
}

/// Effective pure local epsilon after the optional approximate-LDP
/// reduction, and the `delta1` it used.
fn effective_epsilon0(lp: &LocalPrivacyParams, deltas: &DeltaParams) -> Result<(f64, Option<f64>), AccountantError> {
    if lp.delta0 == 0.0 {
        return Ok((lp.epsilon0, None));
    }
    let delta1 = deltas.delta1.ok_or(AccountantError::MissingDelta1)?;
    let threshold = delta0_threshold(lp.epsilon0, delta1)?;
    if lp.delta0 > threshold {
        return Err(AccountantError::Delta0TooLarge { delta0: lp.delta0, threshold });
    }
    Ok((8.0 * lp.epsilon0, Some(delta1)))
}

fn validate_common(n: usize, sum_p2: f64, deltas: &DeltaParams) -> Result<(), AccountantError> {
    check("n", n as f64, n >= 1, "need at least one user")?;
    let lower = 1.0 / n as f64;
    check("sum_p2", sum_p2, sum_p2 >= lower * (1.0 - 1e-9) && sum_p2 <= 1.0 + 1e-12, "must lie in [1/n, 1]")?;
    deltas.validate()
}

fn total_delta(deltas: &DeltaParams, n: usize, epsilon: f64, delta1: Option<f64>, base: f64) -> f64 {
    match delta1 {
        None => base,
        Some(d1) => deltas.delta + deltas.delta2 + n as f64 * (epsilon.exp() + 1.0) * d1,
    }
}

/// `epsilon1 = sqrt(c_n rho*^2 sum_p2) + sqrt(log(1/delta2) / n)`.
fn epsilon1(n: usize, sum_p2: f64, rho_star: f64, delta2: f64, scaling: Epsilon1Scaling) -> f64 {
    let nf = n as f64;
    let c = match scaling {
        Epsilon1Scaling::Normalized => 1.0 - 1.0 / nf,
        Epsilon1Scaling::Unnormalized => nf - 1.0,
    };
    (c * (rho_star * rho_star) * sum_p2).sqrt() + ((1.0 / delta2).ln() / nf).sqrt()
}

/// `A eps1^2 / 2 + eps1 sqrt(2 A log(1/delta))` with `A = (e^e0 - 1)^2 e^{4 e0}`.
fn all_reports_epsilon(e0: f64, eps1: f64, delta: f64) -> f64 {
    let a = (e0.exp_m1() * (2.0 * e0).exp()).powi(2);
    a * eps1 * eps1 / 2.0 + eps1 * (2.0 * a * (1.0 / delta).ln()).sqrt()
}

/// `e^{2 e0} (e^e0 - 1)^2 / 2 * S + e^e0 (e^e0 - 1) sqrt(2 log(1/delta) S)`.
fn single_report_epsilon(e0: f64, sum_p2: f64, delta: f64) -> f64 {
    let em1 = e0.exp_m1();
    (2.0 * e0).exp() * em1 * em1 / 2.0 * sum_p2 + e0.exp() * em1 * (2.0 * (1.0 / delta).ln() * sum_p2).sqrt()
}

fn finite(x: f64) -> Result<f64, AccountantError> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(AccountantError::NonFinite)
    }
}

fn amplify_all(
    lp: &LocalPrivacyParams,
    n: usize,
    sum_p2: f64,
    rho_star: f64,
    deltas: &DeltaParams,
    scenario: Scenario,
    scaling: Epsilon1Scaling,
) -> Result<AmplificationResult, AccountantError> {
    validate_common(n, sum_p2, deltas)?;
    check("rho_star", rho_star, rho_star >= 1.0 && rho_star.is_finite(), "must be finite and >= 1")?;
    let (e0, delta1) = effective_epsilon0(lp, deltas)?;
    let eps1 = epsilon1(n, sum_p2, rho_star, deltas.delta2, scaling);
    let epsilon = finite(all_reports_epsilon(e0, eps1, deltas.delta))?;
    let delta = total_delta(deltas, n, epsilon, delta1, deltas.delta + deltas.delta2);
    Ok(AmplificationResult {
        epsilon,
        delta,
        epsilon1: Some(eps1),
        protocol: Protocol::All,
        scenario,
        approximate: delta1.is_some(),
        inputs: AmplificationInputs { n, sum_p2, rho_star, local: *lp, deltas: *deltas },
    })
}

/// All-reports protocol on an ergodic graph.
pub fn amplify_all_stationary(
    lp: &LocalPrivacyParams,
    n: usize,
    sum_p2: f64,
    deltas: &DeltaParams,
) -> Result<AmplificationResult, AccountantError> {
    amplify_all(lp, n, sum_p2, 1.0, deltas, Scenario::Stationary, Epsilon1Scaling::Normalized)
}

/// [`amplify_all_stationary`] with a selectable `epsilon1` scaling.
pub fn amplify_all_stationary_scaled(
    lp: &LocalPrivacyParams,
    n: usize,
    sum_p2: f64,
    deltas: &DeltaParams,
    scaling: Epsilon1Scaling,
) -> Result<AmplificationResult, AccountantError> {
    amplify_all(lp, n, sum_p2, 1.0, deltas, Scenario::Stationary, scaling)
}

/// All-reports protocol on a regular graph with exact walk distribution.
///
/// The published second term reads `(e^e0 - 1) e^{2 e0} eps1 sqrt(2 log(1/delta))`,
/// which equals the stationary form's `eps1 sqrt(2 A log(1/delta))` for every
/// `e0 >= 0`; both use the same evaluation so `rho_star = 1` reproduces the
/// stationary result bit for bit.
pub fn amplify_all_symmetric(
    lp: &LocalPrivacyParams,
    n: usize,
    sum_p2: f64,
    rho_star: f64,
    deltas: &DeltaParams,
) -> Result<AmplificationResult, AccountantError> {
    amplify_all(lp, n, sum_p2, rho_star, deltas, Scenario::Symmetric, Epsilon1Scaling::Normalized)
}

/// Single-report protocol. The stationary and symmetric scenarios share the
/// same bound; only the meaning of `sum_p2` differs.
pub fn amplify_single(
    lp: &LocalPrivacyParams,
    n: usize,
    sum_p2: f64,
    deltas: &DeltaParams,
    scenario: Scenario,
) -> Result<AmplificationResult, AccountantError> {
    validate_common(n, sum_p2, deltas)?;
    let (e0, delta1) = effective_epsilon0(lp, deltas)?;
    let epsilon = finite(single_report_epsilon(e0, sum_p2, deltas.delta))?;
    let delta = total_delta(deltas, n, epsilon, delta1, deltas.delta);
    Ok(AmplificationResult {
        epsilon,
        delta,
        epsilon1: None,
        protocol: Protocol::Single,
        scenario,
        approximate: delta1.is_some(),
        inputs: AmplificationInputs { n, sum_p2, rho_star: 1.0, local: *lp, deltas: *deltas },
    })
}

/// Closed-form upper bound of the approximate single-report epsilon valid
/// for `eps0 <= 1`: `800 eps0^2 S + 40 eps0 sqrt(2 log(1/delta) S)`.
pub fn single_simplified_epsilon(epsilon0: f64, sum_p2: f64, delta: f64) -> Result<f64, AccountantError> {
    check("epsilon0", epsilon0, (0.0..=1.0).contains(&epsilon0), "simplified form needs eps0 in [0, 1]")?;
    check("delta", delta, delta > 0.0 && delta < 1.0, "must lie in (0, 1)")?;
    Ok(800.0 * epsilon0 * epsilon0 * sum_p2 + 40.0 * epsilon0 * (2.0 * (1.0 / delta).ln() * sum_p2).sqrt())
}

/// Dispatches on protocol and scenario.
pub fn amplify(
    protocol: Protocol,
    scenario: Scenario,
    lp: &LocalPrivacyParams,
    n: usize,
    sum_p2: f64,
    rho_star: f64,
    deltas: &DeltaParams,
) -> Result<AmplificationResult, AccountantError> {
    match (protocol, scenario) {
        (Protocol::All, Scenario::Stationary) => amplify_all_stationary(lp, n, sum_p2, deltas),
        (Protocol::All, Scenario::Symmetric) => amplify_all_symmetric(lp, n, sum_p2, rho_star, deltas),
        (Protocol::Single, s) => amplify_single(lp, n, sum_p2, deltas, s),
    }
}

/// Per-node epsilon bound for a realized allocation `counts` (summing to
/// `n`): `eps_i = log(1 + e^{2 eps0} (e^eps0 - 1) l_i / n)`.
pub fn per_node_epsilons(counts: &[u32], epsilon0: f64) -> Vec<f64> {
    let n = counts.iter().map(|&c| c as f64).sum::<f64>();
    let factor = (2.0 * epsilon0).exp() * epsilon0.exp_m1();
    counts.iter().map(|&l| (factor * l as f64 / n).ln_1p()).collect()
}

/// Data-dependent accountant: central epsilon conditioned on a realized
/// allocation, composing the per-node bounds.
pub fn empirical_epsilon_from_allocation(counts: &[u32], epsilon0: f64, delta: f64) -> f64 {
    compose_heterogeneous(&per_node_epsilons(counts, epsilon0), delta)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn deltas() -> DeltaParams {
        DeltaParams { delta: 1e-6, delta1: Some(1e-9), delta2: 1e-6 }
    }

    #[test]
    fn composition_examples() {
        assert_eq!(compose_heterogeneous(&[0.0, 0.0, 0.0], 1e-3), 0.0);
        let e = std::f64::consts::E;
        let v = compose_heterogeneous(&[1.0], 1.0 / e);
        assert!((v - ((e - 1.0) / (e + 1.0) + 2f64.sqrt())).abs() < 1e-12);
        assert!((v - 1.8763).abs() < 1e-4);
        // the second term grows as sqrt(k)
        let delta = 1e-6;
        let second = |k: usize| {
            let eps = vec![0.01; k];
            compose_heterogeneous(&eps, delta) - eps.iter().map(|&x| x * (x / 2.0).tanh()).sum::<f64>()
        };
        assert!((second(400) / second(100) - 2.0).abs() < 1e-9);
    }

    #[test]
    fn zero_local_epsilon_gives_zero() {
        let lp = LocalPrivacyParams::pure(0.0).unwrap();
        let d = deltas();
        assert_eq!(amplify_all_stationary(&lp, 100, 0.02, &d).unwrap().epsilon, 0.0);
        assert_eq!(amplify_all_symmetric(&lp, 100, 0.02, 3.0, &d).unwrap().epsilon, 0.0);
        assert_eq!(amplify_single(&lp, 100, 0.02, &d, Scenario::Stationary).unwrap().epsilon, 0.0);
        assert_eq!(amplify_single(&lp, 100, 0.02, &d, Scenario::Symmetric).unwrap().epsilon, 0.0);
    }

    #[test]
    fn doubling_population_shrinks_epsilon() {
        let lp = LocalPrivacyParams::pure(1.0).unwrap();
        for n in [1_000usize, 10_000, 100_000, 1_000_000] {
            let d = DeltaParams { delta: 1e-6, delta1: None, delta2: 1e-6 };
            let a = amplify_all_stationary(&lp, n, 1.0 / n as f64, &d).unwrap().epsilon;
            let b = amplify_all_stationary(&lp, 2 * n, 1.0 / (2 * n) as f64, &d).unwrap().epsilon;
            assert!(a / b >= 1.35, "n={n}: {a} / {b}");
        }
    }

    #[test]
    fn symmetric_reduces_to_stationary_bitwise() {
        let d = deltas();
        for &(e0, n, s) in &[(0.3, 100usize, 0.02), (1.0, 22470, 5.0064 / 22470.0), (2.5, 7, 0.5)] {
            let lp = LocalPrivacyParams::pure(e0).unwrap();
            let a = amplify_all_stationary(&lp, n, s, &d).unwrap();
            let b = amplify_all_symmetric(&lp, n, s, 1.0, &d).unwrap();
            assert_eq!(a.epsilon.to_bits(), b.epsilon.to_bits());
            assert_eq!(a.delta.to_bits(), b.delta.to_bits());
            let c = amplify_all_symmetric(&lp, n, s, 2.0, &d).unwrap();
            assert!(c.epsilon > a.epsilon);
        }
    }

    #[test]
    fn uniform_symmetric_matches_stationary_uniform() {
        let n = 4096;
        let lp = LocalPrivacyParams::pure(0.7).unwrap();
        let d = deltas();
        let uniform = crate::graph::PositionDistribution::uniform(n);
        let rho = crate::walk::rho_star(&uniform);
        let a = amplify_all_symmetric(&lp, n, uniform.sum_squared(), rho, &d).unwrap();
        let b = amplify_all_stationary(&lp, n, 1.0 / n as f64, &d).unwrap();
        assert!((a.epsilon - b.epsilon).abs() <= 1e-12 * b.epsilon);
    }

    #[test]
    fn monotone_in_inputs() {
        let d = deltas();
        let grid_e0 = [0.1, 0.5, 1.0, 2.0];
        let grid_s = [0.001, 0.01, 0.1];
        for protocol in [Protocol::All, Protocol::Single] {
            for scenario in [Scenario::Stationary, Scenario::Symmetric] {
                let eps = |e0: f64, s: f64, rho: f64, n: usize| {
                    amplify(protocol, scenario, &LocalPrivacyParams::pure(e0).unwrap(), n, s, rho, &d)
                        .unwrap()
                        .epsilon
                };
                for w in grid_e0.windows(2) {
                    assert!(eps(w[0], 0.01, 1.0, 1000) <= eps(w[1], 0.01, 1.0, 1000));
                }
                for w in grid_s.windows(2) {
                    assert!(eps(1.0, w[0], 1.0, 1000) <= eps(1.0, w[1], 1.0, 1000));
                }
                assert!(eps(1.0, 0.01, 1.0, 1000) <= eps(1.0, 0.01, 1.5, 1000));
                // fixed irregularity gamma = 5
                for w in [1_000usize, 10_000, 100_000].windows(2) {
                    assert!(eps(1.0, 5.0 / w[1] as f64, 1.0, w[1]) <= eps(1.0, 5.0 / w[0] as f64, 1.0, w[0]));
                }
            }
        }
    }

    #[test]
    fn approximate_path_selection() {
        let d = deltas();
        let pure = LocalPrivacyParams::pure(0.5).unwrap();
        let r = amplify_all_stationary(&pure, 1000, 0.002, &d).unwrap();
        assert!(!r.approximate);
        assert_eq!(r.delta, d.delta + d.delta2);

        let threshold = delta0_threshold(0.5, 1e-9).unwrap();
        let approx = LocalPrivacyParams::new(0.5, threshold / 2.0).unwrap();
        let r = amplify_all_stationary(&approx, 1000, 0.002, &d).unwrap();
        assert!(r.approximate);
        let expect = all_reports_epsilon(4.0, r.epsilon1.unwrap(), 1e-6);
        assert_eq!(r.epsilon, expect);

        let too_big = LocalPrivacyParams::new(0.5, threshold * 2.0).unwrap();
        assert!(matches!(
            amplify_all_stationary(&too_big, 1000, 0.002, &d),
            Err(AccountantError::Delta0TooLarge { .. })
        ));
        let no_d1 = DeltaParams { delta1: None, ..d };
        assert_eq!(amplify_single(&approx, 1000, 0.002, &no_d1, Scenario::Stationary), Err(AccountantError::MissingDelta1));
    }

    #[test]
    fn simplified_form_sits_between_pure_and_reduced_forms() {
        // The closed form bounds the pure eps0 evaluation but not the 8*eps0
        // one, which is orders of magnitude larger on this grid.
        for e0 in [0.25, 0.5, 1.0] {
            for s in [1.0 / 100.0, 1.0 / 10_000.0] {
                let reduced = single_report_epsilon(8.0 * e0, s, 1e-6);
                let pure = single_report_epsilon(e0, s, 1e-6);
                let simple = single_simplified_epsilon(e0, s, 1e-6).unwrap();
                assert!(pure <= simple && simple < reduced, "e0={e0} S={s}: {pure} {simple} {reduced}");
            }
        }
        let v = single_simplified_epsilon(1.0, 1e-6, 1e-8).unwrap();
        let expect = 40.0 * (2.0 * 1e8f64.ln() / 1e6).sqrt() + 800.0 / 1e6;
        assert!((v - expect).abs() < 1e-12);
        assert!((v - 0.2436).abs() < 1e-4);
    }

    #[test]
    fn threshold_properties() {
        let mut prev = 0.0;
        for d1 in [1e-12, 1e-9, 1e-6, 1e-3, 0.1] {
            let t = delta0_threshold(1.0, d1).unwrap();
            assert!(t > prev);
            prev = t;
        }
        let t = delta0_threshold(1.0, 1e-6).unwrap();
        assert!(t > 0.0 && t < 1e-6);
        assert!(delta0_threshold(1.0, 1e-300).unwrap() < 1e-300);
        assert!(delta0_threshold(0.0, 1e-6).is_err());
    }

    #[test]
    fn per_node_epsilon_examples() {
        let e0: f64 = 0.8;
        let factor = (2.0 * e0).exp() * e0.exp_m1();
        let eps = per_node_epsilons(&[1; 10], e0);
        for e in &eps {
            assert!((e - (factor / 10.0).ln_1p()).abs() < 1e-15);
        }
        let mut piled = vec![0u32; 10];
        piled[0] = 10;
        let eps = per_node_epsilons(&piled, e0);
        assert!((eps[0] - factor.ln_1p()).abs() < 1e-15);
        assert!(eps[1..].iter().all(|&e| e == 0.0));
        assert_eq!(empirical_epsilon_from_allocation(&piled, e0, 1e-3), compose_heterogeneous(&eps, 1e-3));
    }

    #[test]
    fn rejects_bad_parameters() {
        let lp = LocalPrivacyParams::pure(1.0).unwrap();
        assert!(LocalPrivacyParams::new(-1.0, 0.0).is_err());
        assert!(LocalPrivacyParams::new(1.0, 1.0).is_err());
        assert!(amplify_all_stationary(&lp, 100, 0.001, &deltas()).is_err());
        assert!(amplify_all_stationary(&lp, 100, 1.5, &deltas()).is_err());
        let bad = DeltaParams { delta: 0.0, ..deltas() };
        assert!(amplify_all_stationary(&lp, 100, 0.1, &bad).is_err());
        assert!(amplify_all_symmetric(&lp, 100, 0.1, 0.5, &deltas()).is_err());
        let huge = LocalPrivacyParams::pure(400.0).unwrap();
        assert_eq!(amplify_all_stationary(&huge, 100, 0.1, &deltas()), Err(AccountantError::NonFinite));
    }
}
