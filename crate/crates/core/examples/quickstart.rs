//! Build a graph, measure how fast it mixes, and bound the central privacy of
//! network shuffling on it.
//!
//! ```text
//! cargo run --example quickstart
//! ```

use netshuffle::generators::barabasi_albert;
use netshuffle::graph::stationary_distribution;
use netshuffle::spectral::sum_p_squared_bound;
use netshuffle::{amplify, graph_summary, spectral_summary, DeltaParams, LocalPrivacyParams, Protocol, Scenario, SpectralOptions};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = barabasi_albert(2_000, 4, &mut ChaCha8Rng::seed_from_u64(1));
    let summary = graph_summary(&g);
    let spectral = spectral_summary(&g, &SpectralOptions::default())?;
    let steps = spectral.mixing_time.expect("not bipartite");
    println!("n={} edges={} gamma={:.3}", summary.node_count, summary.edge_count, summary.gamma);
    println!("spectral gap {:.4}, mixing time {steps} rounds", spectral.gap);

    let n = g.node_count();
    let sum_p2 = sum_p_squared_bound(&stationary_distribution(&g)?, spectral.gap, steps);
    let deltas = DeltaParams::defaults_for(n);
    for eps0 in [0.5, 1.0, 2.0] {
        let lp = LocalPrivacyParams::pure(eps0)?;
        let all = amplify(Protocol::All, Scenario::Stationary, &lp, n, sum_p2, 1.0, &deltas)?;
        let single = amplify(Protocol::Single, Scenario::Stationary, &lp, n, sum_p2, 1.0, &deltas)?;
        println!("eps0={eps0}: all-reports eps={:.4}, single-report eps={:.4} (delta={:.2e})", all.epsilon, single.epsilon, all.delta);
    }
    Ok(())
}
