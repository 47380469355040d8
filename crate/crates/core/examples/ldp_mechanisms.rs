//! The two local randomizers: k-ary randomized response and PrivUnit.

use netshuffle::ldp::{normalized_gaussian, PrivUnit, RandomizedResponse};
use netshuffle::walk::trial_rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rr = RandomizedResponse::new(4, 1.0)?;
    let mut rng = trial_rng(3, 0);
    let mut hist = [0u32; 4];
    for _ in 0..10_000 {
        hist[rr.randomize(2, &mut rng) as usize] += 1;
    }
    println!("RR k=4 eps0=1: keep prob {:.4}, output histogram for input 2: {hist:?}", rr.keep_probability());

    for d in [2, 16, 200] {
        let mech = PrivUnit::new(d, 2.0)?;
        let x = normalized_gaussian(d, 0.0, &mut rng);
        let trials = 20_000;
        let mut mean = vec![0.0; d];
        for _ in 0..trials {
            let y = mech.randomize(&x, &mut rng);
            mean.iter_mut().zip(&y).for_each(|(m, v)| *m += v / trials as f64);
        }
        let err: f64 = mean.iter().zip(x.as_slice()).map(|(m, v)| (m - v).powi(2)).sum::<f64>().sqrt();
        println!(
            "PrivUnit d={d:>3}: privacy level {:.3}, output norm {:.3}, |mean - x| over {trials} draws {err:.3}",
            mech.privacy_level(),
            mech.output_norm()
        );
    }
    Ok(())
}
