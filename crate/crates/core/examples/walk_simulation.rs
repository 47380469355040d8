//! Simulate the report exchange and check the allocation against its
//! concentration bound.

use netshuffle::generators::barabasi_albert;
use netshuffle::graph::stationary_distribution;
use netshuffle::spectral::sum_p_squared_bound;
use netshuffle::walk::{allocation_l2_bound, expected_empty_holders, simulate_allocations_par, simulate_trace};
use netshuffle::{spectral_summary, SpectralOptions};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = barabasi_albert(1_000, 3, &mut ChaCha8Rng::seed_from_u64(9));
    let n = g.node_count();
    let s = spectral_summary(&g, &SpectralOptions::default())?;
    let steps = s.mixing_time.expect("not bipartite");
    let pi = stationary_distribution(&g)?;

    let trace = simulate_trace(&g, steps, 7, 0);
    println!("report of user 0 ended at node {} after {steps} rounds", trace.final_nodes[0]);

    let trials = 2_000;
    let allocs = simulate_allocations_par(&g, steps, trials, 7);
    let bound = allocation_l2_bound(sum_p_squared_bound(&pi, s.gap, steps), n, 0.01);
    let over = allocs.iter().filter(|a| a.l2_norm() > bound).count();
    let mean_empty = allocs.iter().map(|a| a.empty_holders() as f64).sum::<f64>() / trials as f64;
    println!("||allocation||_2 above bound {bound:.2} in {over}/{trials} trials (allowed 1%)");
    println!("users left without a report: {mean_empty:.1} simulated, {:.1} expected", expected_empty_holders(&pi));
    Ok(())
}
