//! Compare the spectral mixing bound with the exact walk distribution.
//!
//! The exact distance to stationarity must always sit below
//! `sqrt(n) (1 - gap)^t`.

use netshuffle::generators::{cycle, random_regular};
use netshuffle::graph::{stationary_distribution, PositionDistribution};
use netshuffle::spectral::tv_upper_bound;
use netshuffle::walk::evolve_distribution;
use netshuffle::{spectral_summary, Graph, SpectralOptions};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn report(name: &str, g: &Graph) -> Result<(), Box<dyn std::error::Error>> {
    let s = spectral_summary(g, &SpectralOptions::default())?;
    println!("{name}: alpha2={:.5} alpha_n={:.5} gap={:.5} mixing={:?}", s.alpha2, s.alpha_n, s.gap, s.mixing_time);
    let pi = stationary_distribution(g)?;
    let n = g.node_count();
    for t in [1u64, 5, 20, 80] {
        let p = evolve_distribution(g, &PositionDistribution::delta(n, 0), t);
        let tv = p.l1_distance(&pi) / 2.0;
        println!("  t={t:>3}  tv={tv:.3e}  bound={:.3e}", tv_upper_bound(n, s.gap, t));
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    report("8-regular n=500", &random_regular(500, 8, &mut ChaCha8Rng::seed_from_u64(2))?)?;
    // odd cycle: slow, but not bipartite
    report("cycle n=31", &cycle(31))?;
    Ok(())
}
