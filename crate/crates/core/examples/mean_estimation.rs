//! Private mean estimation after network shuffling, for both protocols.
//!
//! Prints the error-versus-central-epsilon curve behind the utility figure on a
//! small graph. The same table comes from `netshuffle utility`.

use netshuffle::experiments::{matched_errors, utility_curve, utility_table, UtilitySpec};
use netshuffle::generators::barabasi_albert;
use netshuffle::Protocol;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = barabasi_albert(1_000, 4, &mut ChaCha8Rng::seed_from_u64(4));
    let spec = UtilitySpec {
        dimension: 32,
        epsilon0: vec![0.5, 1.0, 2.0, 4.0],
        seeds: (0..4).collect(),
        protocols: vec![Protocol::All, Protocol::Single],
        steps: None,
    };
    let table = utility_table(&g, "ba:1000:4", &spec, None)?;
    print!("{}", table.to_csv()?);

    let all = utility_curve(&table, Protocol::All);
    let single = utility_curve(&table, Protocol::Single);
    for (eps, a, s) in matched_errors(&all, &single) {
        println!("central eps {eps:.3}: all {a:.4}, single {s:.4}");
    }
    Ok(())
}
