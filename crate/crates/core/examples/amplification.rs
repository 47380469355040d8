//! Central guarantees of both reporting protocols, for pure and approximate
//! local randomizers.

use netshuffle::accountant::{compose_heterogeneous, delta0_threshold, per_node_epsilons};
use netshuffle::{amplify, DeltaParams, LocalPrivacyParams, Protocol, Scenario};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 10_000;
    let gamma = 5.0;
    let sum_p2 = gamma / n as f64 + 1.0 / (n as f64 * n as f64);
    let deltas = DeltaParams::defaults_for(n);

    println!("protocol,scenario,eps0,delta0,epsilon,delta");
    for (protocol, scenario, rho) in [
        (Protocol::All, Scenario::Stationary, 1.0),
        (Protocol::All, Scenario::Symmetric, 1.3),
        (Protocol::Single, Scenario::Stationary, 1.0),
    ] {
        let mut locals = vec![LocalPrivacyParams::pure(0.25)?, LocalPrivacyParams::pure(1.0)?];
        // approximate LDP goes through an 8 eps0 reduction, so only small eps0 stays useful
        locals.push(LocalPrivacyParams::new(0.05, delta0_threshold(0.05, 1e-12)? / 2.0)?);
        for lp in locals {
            let r = amplify(protocol, scenario, &lp, n, sum_p2, rho, &deltas)?;
            println!("{protocol:?},{scenario:?},{},{:.1e},{:.4},{:.3e}", lp.epsilon0, lp.delta0, r.epsilon, r.delta);
        }
    }

    // a realized allocation: heavy holders pay more
    let counts = [4, 0, 1, 0, 3, 2, 0, 0, 0, 0];
    let eps: Vec<String> = per_node_epsilons(&counts, 1.0).iter().map(|e| format!("{e:.3}")).collect();
    println!("per-node eps for {counts:?}: {}", eps.join(" "));
    println!("composed over 4 mechanisms: {:.4}", compose_heterogeneous(&[0.1, 0.5, 1.0, 2.0], 1e-5));
    Ok(())
}
