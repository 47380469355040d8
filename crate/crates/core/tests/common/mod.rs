//! Shared fixtures for the integration tests and the acceptance runner.
#![allow(dead_code)]

use netshuffle::accountant::*;

/// Values printed by `tests/oracles/accountant_oracle.py` (50-digit mpmath),
/// frozen before the Rust accountant existed.
#[allow(clippy::excessive_precision)]
pub mod frozen {
    pub const COMPOSE: f64 = 13.1180310067191361154045;
    pub const ALL_STAT_PURE_EPS1: f64 = 0.03972229705157751432021865;
    pub const ALL_STAT_PURE_EPS: f64 = 2.778215486468790196929639;
    pub const ALL_STAT_APPROX_EPS: f64 = 0.2294939075289327700691232;
    pub const ALL_STAT_APPROX_DELTA: f64 = 0.000002050736433173556594934235;
    pub const ALL_SYM_PURE_EPS1: f64 = 0.08751817836632464653946598;
    pub const ALL_SYM_PURE_EPS: f64 = 0.8231489046803889836300525;
    pub const ALL_SYM_APPROX_EPS: f64 = 0.5081384341183864479814619;
    pub const ALL_SYM_APPROX_DELTA: f64 = 0.00000201090434674424928151928;
    pub const SINGLE_PURE_EPS: f64 = 0.702487758604140933024418;
    pub const SINGLE_APPROX_EPS: f64 = 0.1091981572384589577819871;
    pub const SINGLE_APPROX_DELTA: f64 = 0.000002020091911055724293111842;
    pub const SINGLE_SIMPLIFIED_EPS: f64 = 0.2986688463743719310626061;
    pub const THRESHOLD_E1_D1E6: f64 = 2.706502863716624778529879e-11;
    pub const THRESHOLD_E005_D1E12: f64 = 5.582942212421617797330696e-16;
    pub const EMPIRICAL_EPS: f64 = 3.124139075694728489470622;
}

pub const REGRESSION_RTOL: f64 = 1e-12;

fn deltas_pure() -> DeltaParams {
    DeltaParams { delta: 1e-6, delta1: None, delta2: 1e-6 }
}

fn deltas_approx() -> DeltaParams {
    DeltaParams { delta: 1e-6, delta1: Some(1e-12), delta2: 1e-6 }
}

/// `(name, computed, frozen)` for every frozen accountant path.
pub fn accountant_regression_cases() -> Vec<(&'static str, f64, f64)> {
    use frozen::*;
    let approx_lp = |e0: f64| {
        let t = delta0_threshold(e0, 1e-12).unwrap();
        LocalPrivacyParams::new(e0, t / 2.0).unwrap()
    };
    let mut out = Vec::new();
    out.push(("compose", compose_heterogeneous(&[0.1, 0.5, 1.0, 2.0], 1e-5), COMPOSE));

    let n = 22470;
    let sp2 = 5.0064 / n as f64;
    let r = amplify_all_stationary(&LocalPrivacyParams::pure(1.0).unwrap(), n, sp2, &deltas_pure()).unwrap();
    out.push(("all/stationary/pure eps1", r.epsilon1.unwrap(), ALL_STAT_PURE_EPS1));
    out.push(("all/stationary/pure eps", r.epsilon, ALL_STAT_PURE_EPS));
    let r = amplify_all_stationary(&approx_lp(0.05), n, sp2, &deltas_approx()).unwrap();
    out.push(("all/stationary/approx eps", r.epsilon, ALL_STAT_APPROX_EPS));
    out.push(("all/stationary/approx delta", r.delta, ALL_STAT_APPROX_DELTA));

    let n = 4096;
    let r = amplify_all_symmetric(&LocalPrivacyParams::pure(0.5).unwrap(), n, 3e-4, 1.7, &deltas_pure()).unwrap();
    out.push(("all/symmetric/pure eps1", r.epsilon1.unwrap(), ALL_SYM_PURE_EPS1));
    out.push(("all/symmetric/pure eps", r.epsilon, ALL_SYM_PURE_EPS));
    let r = amplify_all_symmetric(&approx_lp(0.05), n, 3e-4, 1.7, &deltas_approx()).unwrap();
    out.push(("all/symmetric/approx eps", r.epsilon, ALL_SYM_APPROX_EPS));
    out.push(("all/symmetric/approx delta", r.delta, ALL_SYM_APPROX_DELTA));

    let n = 9498;
    let sp2 = 7.584 / n as f64;
    let r = amplify_single(&LocalPrivacyParams::pure(1.0).unwrap(), n, sp2, &deltas_pure(), Scenario::Stationary).unwrap();
    out.push(("single/pure eps", r.epsilon, SINGLE_PURE_EPS));
    let r = amplify_single(&approx_lp(0.05), n, sp2, &deltas_approx(), Scenario::Symmetric).unwrap();
    out.push(("single/approx eps", r.epsilon, SINGLE_APPROX_EPS));
    out.push(("single/approx delta", r.delta, SINGLE_APPROX_DELTA));
    out.push(("single/simplified eps", single_simplified_epsilon(0.05, sp2, 1e-6).unwrap(), SINGLE_SIMPLIFIED_EPS));

    out.push(("delta0 threshold eps0=1", delta0_threshold(1.0, 1e-6).unwrap(), THRESHOLD_E1_D1E6));
    out.push(("delta0 threshold eps0=0.05", delta0_threshold(0.05, 1e-12).unwrap(), THRESHOLD_E005_D1E12));
    out.push((
        "per-allocation eps",
        empirical_epsilon_from_allocation(&[3, 0, 1, 0, 2, 0, 0, 4, 0, 0], 0.5, 1e-3),
        EMPIRICAL_EPS,
    ));
    out
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    ((got - want) / want).abs()
}

/// All connected simple graphs used as the small-graph corpus: every graph on
/// 2 to 5 nodes (as labelled edge subsets, deduplicated by edge set), plus
/// random connected graphs on 6 to 8 nodes.
pub fn small_graph_corpus(random_per_size: usize, seed: u64) -> Vec<netshuffle::Graph> {
    use netshuffle::graph::check_ergodic;
    use netshuffle::Graph;
    use rand::{Rng, SeedableRng};

    let mut out = Vec::new();
    for n in 2..=5u64 {
        let pairs: Vec<(u64, u64)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        for mask in 1u32..(1 << pairs.len()) {
            let mut edges: Vec<(u64, u64)> = (0..n).map(|u| (u, u)).collect();
            edges.extend(pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| *e));
            let g = Graph::from_edges(edges).unwrap();
            if check_ergodic(&g).is_connected {
                out.push(g);
            }
        }
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    for n in 6..=8u64 {
        let mut made = 0;
        while made < random_per_size {
            let p = rng.random_range(0.2..0.9);
            let mut edges: Vec<(u64, u64)> = (0..n).map(|u| (u, u)).collect();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.random_bool(p) {
                        edges.push((u, v));
                    }
                }
            }
            if let Ok(g) = Graph::from_edges(edges) {
                if check_ergodic(&g).is_connected {
                    out.push(g);
                    made += 1;
                }
            }
        }
    }
    out
}

/// Dense eigenvalues of `D^-1/2 A D^-1/2`, ascending.
pub fn dense_spectrum(g: &netshuffle::Graph) -> Vec<f64> {
    let n = g.node_count();
    let m = nalgebra::DMatrix::from_fn(n, n, |i, j| {
        if g.has_edge(i, j) {
            1.0 / ((g.degree(i) as f64) * (g.degree(j) as f64)).sqrt()
        } else {
            0.0
        }
    });
    let mut ev: Vec<f64> = nalgebra::SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}
