//! Local randomizers and the private mean-estimation experiment.

use rand::Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use rayon::prelude::*;
use statrs::function::beta::{inv_beta_reg, ln_beta};
use thiserror::Error;

use crate::accountant::Protocol;
use crate::walk::{sample_single_reports, trial_rng, ReportAllocation, SingleReport, WalkTrace};

#[derive(Debug, Error, PartialEq)]
pub enum LdpError {
    #[error("vector has zero or non-finite norm")]
    ZeroVector,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// k-ary randomized response: keeps the true category with probability
/// `e^eps0 / (e^eps0 + k - 1)` and otherwise reports one of the other
/// `k - 1` categories uniformly.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandomizedResponse {
    pub k: u32,
    pub epsilon0: f64,
}

impl RandomizedResponse {
    pub fn new(k: u32, epsilon0: f64) -> Result<Self, LdpError> {
        if k < 2 {
            return Err(LdpError::InvalidParameter(format!("k = {k} must be at least 2")));
        }
        if epsilon0.is_nan() || epsilon0 < 0.0 {
            return Err(LdpError::InvalidParameter(format!("epsilon0 = {epsilon0} must be >= 0")));
        }
        Ok(Self { k, epsilon0 })
    }

    pub fn keep_probability(&self) -> f64 {
        // e^e / (e^e + k - 1), written to stay finite for large e
        1.0 / (1.0 + (self.k - 1) as f64 * (-self.epsilon0).exp())
    }

    pub fn randomize<R: Rng + ?Sized>(&self, value: u32, rng: &mut R) -> u32 {
        assert!(value < self.k);
        if rng.random::<f64>() < self.keep_probability() {
            value
        } else {
            let other = rng.random_range(0..self.k - 1);
            if other >= value {
                other + 1
            } else {
                other
            }
        }
    }

    /// `P(output = y | input = x)` as a row-stochastic matrix.
    pub fn transition_matrix(&self) -> Vec<Vec<f64>> {
        let keep = self.keep_probability();
        let other = (1.0 - keep) / (self.k - 1) as f64;
        (0..self.k).map(|x| (0..self.k).map(|y| if x == y { keep } else { other }).collect()).collect()
    }
}

/// Randomizes one categorical value with a fresh generator seeded by `seed`.
pub fn randomized_response(value: u32, k: u32, epsilon0: f64, seed: u64) -> Result<u32, LdpError> {
    let rr = RandomizedResponse::new(k, epsilon0)?;
    Ok(rr.randomize(value, &mut trial_rng(seed, 0)))
}

/// A point on the unit sphere in `R^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitVector(Vec<f64>);

impl UnitVector {
    /// `z / ||z||_2`.
    pub fn normalize(z: Vec<f64>) -> Result<Self, LdpError> {
        let norm = z.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(LdpError::ZeroVector);
        }
        Ok(Self(z.into_iter().map(|x| x / norm).collect()))
    }

    pub fn basis(d: usize, i: usize) -> Self {
        let mut v = vec![0.0; d];
        v[i] = 1.0;
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// Unbiased unit-vector randomizer built from spherical caps.
///
/// With probability `p` the output direction is uniform on the cap
/// `{v : <v, x> >= gamma}`, otherwise uniform on its complement; the direction
/// is then scaled by `1/m` so that `E[output] = x`. If the cap covers a
/// fraction `q` of the sphere, the density ratio between any two inputs is at
/// most `p (1 - q) / ((1 - p) q)`, so splitting `eps0` into `ln(p / (1 - p))`
/// plus `ln((1 - q) / q)` gives exactly `eps0`-LDP. The split maximizing `m`
/// (minimizing variance) is chosen at construction.
#[derive(Clone, Debug, PartialEq)]
pub struct PrivUnit {
    d: usize,
    epsilon0: f64,
    p: f64,
    cap_mass: f64,
    gamma: f64,
    m: f64,
}

impl PrivUnit {
    pub fn new(d: usize, epsilon0: f64) -> Result<Self, LdpError> {
        if d == 0 {
            return Err(LdpError::InvalidParameter("dimension must be at least 1".into()));
        }
        if !(epsilon0 > 0.0 && epsilon0.is_finite()) {
            return Err(LdpError::InvalidParameter(format!("epsilon0 = {epsilon0} must be finite and > 0")));
        }
        if d == 1 {
            // the sphere is {-1, +1}: a signed randomized response
            let p = logistic(epsilon0);
            return Ok(Self { d, epsilon0, p, cap_mass: 0.5, gamma: 0.0, m: 2.0 * p - 1.0 });
        }
        let eval = |eps_p: f64| Self::with_split(d, epsilon0, eps_p);
        // coarse grid, then golden-section refinement around the best point
        let grid = 64;
        let best = (0..=grid)
            .map(|i| epsilon0 * i as f64 / grid as f64)
            .max_by(|a, b| eval(*a).m.total_cmp(&eval(*b).m))
            .unwrap();
        let step = epsilon0 / grid as f64;
        let (mut lo, mut hi) = ((best - step).max(0.0), (best + step).min(epsilon0));
        let ratio = (5f64.sqrt() - 1.0) / 2.0;
        for _ in 0..40 {
            let a = hi - ratio * (hi - lo);
            let b = lo + ratio * (hi - lo);
            if eval(a).m >= eval(b).m {
                hi = b;
            } else {
                lo = a;
            }
        }
        let refined = eval(0.5 * (lo + hi));
        let coarse = eval(best);
        Ok(if refined.m >= coarse.m { refined } else { coarse })
    }

    fn with_split(d: usize, epsilon0: f64, eps_p: f64) -> Self {
        let a = (d as f64 - 1.0) / 2.0;
        let p = logistic(eps_p);
        let cap_mass = 1.0 - logistic(epsilon0 - eps_p);
        // (1 + <v, x>) / 2 ~ Beta(a, a) for uniform v
        let gamma = (1.0 - 2.0 * inv_beta_reg(a, a, cap_mass)).clamp(-1.0, 1.0);
        // E[<v,x> 1{<v,x> >= gamma}] = (1 - gamma^2)^a / ((d - 1) B(1/2, a))
        let edge = (a * (1.0 - gamma * gamma).ln() - ln_beta(0.5, a)).exp() / (d as f64 - 1.0);
        let m = edge * (p / cap_mass - (1.0 - p) / (1.0 - cap_mass));
        Self { d, epsilon0, p, cap_mass, gamma, m }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn epsilon0(&self) -> f64 {
        self.epsilon0
    }

    /// Exact privacy level `ln(p/(1-p)) + ln((1-q)/q)` of the chosen split.
    pub fn privacy_level(&self) -> f64 {
        (self.p / (1.0 - self.p)).ln() + ((1.0 - self.cap_mass) / self.cap_mass).ln()
    }

    /// Norm of every output, `1/m`.
    pub fn output_norm(&self) -> f64 {
        1.0 / self.m
    }

    pub fn randomize<R: Rng + ?Sized>(&self, x: &UnitVector, rng: &mut R) -> Vec<f64> {
        assert_eq!(x.dim(), self.d, "dimension mismatch");
        let scale = 1.0 / self.m;
        if self.d == 1 {
            let sign = if rng.random_bool(self.p) { 1.0 } else { -1.0 };
            return vec![sign * x.0[0] * scale];
        }
        let a = (self.d as f64 - 1.0) / 2.0;
        let in_cap = rng.random_bool(self.p);
        let u: f64 = rng.random();
        let level = if in_cap { u * self.cap_mass } else { self.cap_mass + u * (1.0 - self.cap_mass) };
        let t = (1.0 - 2.0 * inv_beta_reg(a, a, level.clamp(0.0, 1.0))).clamp(-1.0, 1.0);

        // uniform direction orthogonal to x
        let mut w: Vec<f64> = (0..self.d).map(|_| StandardNormal.sample(rng)).collect();
        let along: f64 = w.iter().zip(&x.0).map(|(a, b)| a * b).sum();
        w.iter_mut().zip(&x.0).for_each(|(wi, xi)| *wi -= along * xi);
        let wn = w.iter().map(|v| v * v).sum::<f64>().sqrt();
        let s = (1.0 - t * t).max(0.0).sqrt() / wn;
        x.0.iter().zip(&w).map(|(xi, wi)| (t * xi + s * wi) * scale).collect()
    }
}

fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Randomizes `x` with a fresh generator seeded by `seed`.
pub fn privunit_randomize(x: &UnitVector, epsilon0: f64, seed: u64) -> Result<Vec<f64>, LdpError> {
    let mech = PrivUnit::new(x.dim(), epsilon0)?;
    Ok(mech.randomize(x, &mut trial_rng(seed, 0)))
}

/// Normalized draw of `N(mean, 1)^d`.
pub fn normalized_gaussian<R: Rng + ?Sized>(d: usize, mean: f64, rng: &mut R) -> UnitVector {
    let normal = Normal::new(mean, 1.0).expect("unit variance");
    loop {
        if let Ok(v) = UnitVector::normalize((0..d).map(|_| normal.sample(rng)).collect()) {
            return v;
        }
    }
}

/// `n` samples: the first half normalized `N(1,1)^d`, the rest `N(10,1)^d`.
pub fn synthetic_dataset<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Vec<UnitVector> {
    (0..n).map(|i| normalized_gaussian(d, if i < n / 2 { 1.0 } else { 10.0 }, rng)).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeanEstimate {
    /// Total squared L2 error of the estimated mean.
    pub squared_error: f64,
    /// Dummy reports the server received (single reporting only).
    pub dummies: usize,
}

/// Private mean estimation over the outcome of one report exchange.
///
/// Genuine data is [`synthetic_dataset`]; dummies are normalized
/// `N(5,1)^d` draws. Every submitted vector is randomized with [`PrivUnit`]
/// and the server averages the `n` received vectors. The error is measured
/// against the mean of the `n` genuine samples.
pub fn mean_estimation_experiment(
    trace: &WalkTrace,
    d: usize,
    epsilon0: f64,
    protocol: Protocol,
    seed: u64,
) -> Result<MeanEstimate, LdpError> {
    let n = trace.final_nodes.len();
    if n == 0 || !n.is_multiple_of(2) {
        return Err(LdpError::InvalidParameter(format!("n = {n} must be positive and even")));
    }
    let mech = PrivUnit::new(d, epsilon0)?;
    // stream layout under `seed`: 0 data, 1 single-report choice, 2.. users
    let data = synthetic_dataset(n, d, &mut trial_rng(seed, 0));
    let mut truth = vec![0.0; d];
    for x in &data {
        truth.iter_mut().zip(x.as_slice()).for_each(|(t, v)| *t += v / n as f64);
    }

    let submitted: Vec<Option<usize>> = match protocol {
        Protocol::All => (0..n).map(Some).collect(),
        Protocol::Single => {
            let alloc = ReportAllocation::from_trace(trace);
            sample_single_reports(&alloc, trace, seed ^ 0x9e37_79b9_7f4a_7c15)
                .into_iter()
                .map(|r| match r {
                    SingleReport::Report(j) => Some(j),
                    SingleReport::Dummy => None,
                })
                .collect()
        }
    };
    let dummies = submitted.iter().filter(|s| s.is_none()).count();

    let estimate = submitted
        .par_iter()
        .enumerate()
        .map(|(slot, source)| {
            let mut rng = trial_rng(seed, 2 + slot as u64);
            let x = match source {
                Some(j) => data[*j].clone(),
                None => normalized_gaussian(d, 5.0, &mut rng),
            };
            mech.randomize(&x, &mut rng)
        })
        .reduce(
            || vec![0.0; d],
            |mut acc, v| {
                acc.iter_mut().zip(v).for_each(|(a, b)| *a += b);
                acc
            },
        );
    let squared_error = estimate.iter().zip(&truth).map(|(e, t)| (e / n as f64 - t).powi(2)).sum();
    Ok(MeanEstimate { squared_error, dummies })
}
