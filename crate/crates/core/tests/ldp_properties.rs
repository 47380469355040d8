use netshuffle::generators::barabasi_albert;
use netshuffle::ldp::*;
use netshuffle::walk::{simulate_trace, trial_rng};
use netshuffle::Protocol;
use rand::SeedableRng;
use rayon::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn mean_of_randomizations(mech: &PrivUnit, x: &UnitVector, draws: u64, seed: u64) -> Vec<f64> {
    let d = x.dim();
    let chunks = 64u64;
    let sum = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = trial_rng(seed, c);
            let mut acc = vec![0.0; d];
            for _ in 0..draws / chunks {
                mech.randomize(x, &mut rng).iter().zip(acc.iter_mut()).for_each(|(z, a)| *a += z);
            }
            acc
        })
        .reduce(|| vec![0.0; d], |a, b| a.iter().zip(b).map(|(x, y)| x + y).collect());
    sum.into_iter().map(|s| s / (draws / chunks * chunks) as f64).collect()
}

fn l2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

#[test]
fn randomized_response_likelihood_ratio() {
    let (k, e0, samples) = (4u32, 1.0, 1_000_000u64);
    let rr = RandomizedResponse::new(k, e0).unwrap();
    let freq: Vec<Vec<f64>> = (0..k)
        .into_par_iter()
        .map(|x| {
            let mut rng = trial_rng(21, x as u64);
            let mut c = vec![0u64; k as usize];
            for _ in 0..samples {
                c[rr.randomize(x, &mut rng) as usize] += 1;
            }
            c.into_iter().map(|v| v as f64 / samples as f64).collect()
        })
        .collect();
    let mut worst: f64 = 0.0;
    for a in &freq {
        for b in &freq {
            worst = a.iter().zip(b).fold(worst, |w, (pa, pb)| w.max(pa / pb));
        }
    }
    assert!(worst <= e0.exp() * 1.02, "max ratio {worst}");
}

#[test]
fn privunit_reference_example_is_unbiased() {
    let x = UnitVector::basis(16, 0);
    let mech = PrivUnit::new(16, 2.0).unwrap();
    let mean = mean_of_randomizations(&mech, &x, 100_000, 0);
    let err = l2(&mean, x.as_slice());
    assert!(err <= 0.02, "L2 error of the mean {err}");
}

#[test]
fn privunit_unbiased_across_dimensions() {
    for (d, e0) in [(2usize, 1.0), (16, 0.5), (200, 2.0)] {
        let draws = 100_000u64;
        let mech = PrivUnit::new(d, e0).unwrap();
        let x = UnitVector::normalize((0..d).map(|i| 1.0 + i as f64).collect()).unwrap();
        let mean = mean_of_randomizations(&mech, &x, draws, 7);
        // ||mean - x||^2 is about (norm^2 - 1)/(d N) times a chi-squared with d degrees
        let var = (mech.output_norm().powi(2) - 1.0) / (d as f64 * draws as f64);
        let q = ChiSquared::new(d as f64).unwrap().inverse_cdf(0.999);
        let tol = (var * q).sqrt();
        let err = l2(&mean, x.as_slice());
        assert!(err <= tol, "d={d} eps0={e0}: error {err} > {tol}");
    }
}

#[test]
fn privunit_hemisphere_ratio() {
    for (d, e0) in [(3usize, 1.0), (16, 2.0), (200, 0.5)] {
        let mech = PrivUnit::new(d, e0).unwrap();
        let samples = 200_000u64;
        let up = |sign: f64, seed: u64| {
            let mut x = vec![0.0; d];
            x[0] = sign;
            let x = UnitVector::normalize(x).unwrap();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            (0..samples).filter(|_| mech.randomize(&x, &mut rng)[0] > 0.0).count() as f64 / samples as f64
        };
        let (a, b) = (up(1.0, 1), up(-1.0, 2));
        let ratio = (a / b).max(b / a).max((1.0 - a) / (1.0 - b)).max((1.0 - b) / (1.0 - a));
        assert!(ratio <= e0.exp() * 1.05, "d={d}: ratio {ratio} vs e^eps0 {}", e0.exp());
    }
}

#[test]
fn mean_estimation_is_deterministic_and_improves_with_epsilon() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    let g = barabasi_albert(400, 3, &mut rng);
    let trace = simulate_trace(&g, 20, 1, 0);
    let a = mean_estimation_experiment(&trace, 20, 1.0, Protocol::Single, 9).unwrap();
    let b = mean_estimation_experiment(&trace, 20, 1.0, Protocol::Single, 9).unwrap();
    assert_eq!(a, b);
    let avg = |e0: f64, p: Protocol| {
        (0..20).map(|s| mean_estimation_experiment(&trace, 20, e0, p, s).unwrap().squared_error).sum::<f64>() / 20.0
    };
    for p in [Protocol::All, Protocol::Single] {
        let errs: Vec<f64> = [0.5, 1.0, 2.0, 4.0].iter().map(|&e| avg(e, p)).collect();
        assert!(errs.windows(2).all(|w| w[1] <= w[0]), "{p:?}: {errs:?}");
    }
    let dummies = mean_estimation_experiment(&trace, 20, 1.0, Protocol::Single, 0).unwrap().dummies;
    let empty = netshuffle::walk::ReportAllocation::from_trace(&trace).empty_holders();
    assert_eq!(dummies, empty);
}
