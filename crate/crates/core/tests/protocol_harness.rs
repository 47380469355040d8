use std::collections::BTreeMap;

use netshuffle::generators::*;
use netshuffle::graph::PositionDistribution;
use netshuffle::protocol::*;
use netshuffle::walk::{evolve_distribution, simulate_allocation};
use netshuffle::{Graph, Protocol};
use rand::SeedableRng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Exact law of the allocation vector: reports land independently.
fn exact_allocation_law(g: &Graph, t: u64) -> BTreeMap<Vec<u32>, f64> {
    let n = g.node_count();
    let rows: Vec<Vec<f64>> =
        (0..n).map(|j| evolve_distribution(g, &PositionDistribution::delta(n, j), t).probs().to_vec()).collect();
    let mut law = BTreeMap::new();
    for code in 0..n.pow(n as u32) {
        let (mut c, mut p, mut counts) = (code, 1.0, vec![0u32; n]);
        for row in &rows {
            let dest = c % n;
            c /= n;
            p *= row[dest];
            counts[dest] += 1;
        }
        *law.entry(counts).or_insert(0.0) += p;
    }
    law
}

fn chi2_pvalue(observed: &BTreeMap<Vec<u32>, u64>, law: &BTreeMap<Vec<u32>, f64>, total: u64) -> f64 {
    let mut stat = 0.0;
    let mut cells = 0;
    for (k, p) in law.iter().filter(|(_, p)| **p > 0.0) {
        let e = p * total as f64;
        let o = *observed.get(k).unwrap_or(&0) as f64;
        stat += (o - e).powi(2) / e;
        cells += 1;
    }
    assert!(observed.keys().all(|k| law.get(k).is_some_and(|p| *p > 0.0)), "impossible allocation observed");
    1.0 - ChiSquared::new((cells - 1) as f64).unwrap().cdf(stat)
}

#[test]
fn allocation_law_matches_walk_simulation() {
    let g = complete(4);
    let law = exact_allocation_law(&g, 3);
    let runs = 10_000u64;
    let mut from_protocol = BTreeMap::new();
    for seed in 0..runs {
        let t = run_protocol(&g, 3, Protocol::All, seed).unwrap();
        *from_protocol.entry(t.allocation().counts).or_insert(0u64) += 1;
    }
    let mut from_walks = BTreeMap::new();
    for a in simulate_allocation(&g, 3, runs, 77) {
        *from_walks.entry(a.counts).or_insert(0u64) += 1;
    }
    assert!(chi2_pvalue(&from_protocol, &law, runs) > 0.001);
    assert!(chi2_pvalue(&from_walks, &law, runs) > 0.001);
}

#[test]
fn invariants_hold_on_random_runs() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
    for run in 0..300u64 {
        let g = match run % 4 {
            0 => complete(3 + (run as usize % 5)),
            1 => cycle(3 + (run as usize % 7)),
            2 => barabasi_albert(12, 2, &mut rng),
            _ => petersen(),
        };
        let mut config = ProtocolConfig::new(1 + run % 5, if run % 2 == 0 { Protocol::All } else { Protocol::Single }, run);
        config.curious = run % 3 == 0;
        let t = run_protocol_with(&g, &config).unwrap();
        check_invariants(&t).unwrap();
        match adversary_view(&t, Observer::Server) {
            AdversaryView::Server(v) => {
                assert_eq!(v.links.len(), g.node_count());
                assert!(v.linkable_envelopes.is_empty());
            }
            _ => unreachable!(),
        }
        for j in 0..g.node_count() as u32 {
            match adversary_view(&t, Observer::Client(j)) {
                AdversaryView::Client(v) => assert_eq!(v.revealed, 0),
                _ => unreachable!(),
            }
        }
    }
}

#[test]
fn final_sender_is_owner_at_return_probability() {
    let g = cycle(5);
    let rounds = 4;
    let p_return = evolve_distribution(&g, &PositionDistribution::delta(5, 0), rounds).probs()[0];
    let runs = 4000u64;
    let mut hits = 0u64;
    for seed in 0..runs {
        let t = run_protocol(&g, rounds, Protocol::All, seed).unwrap();
        hits += t.aggregated.iter().filter(|(s, r)| t.ground_truth.origin[&r.token] == *s).count() as u64;
    }
    let total = (runs * 5) as f64;
    let rate = hits as f64 / total;
    // reports in one run are dependent only through the shared rng; treat as independent
    let se = (p_return * (1.0 - p_return) / total).sqrt();
    assert!((rate - p_return).abs() <= 4.0 * se, "{rate} vs {p_return}");
}

#[test]
fn transcript_records_are_line_delimited() {
    let t = run_protocol(&complete(3), 2, Protocol::Single, 1).unwrap();
    let text = t.to_records();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), t.events.len() + 1);
    assert!(lines[1..].iter().all(|l| l.split(',').count() == 6));
    assert_eq!(t.messages_in_round(3, EventKind::Submit), 3);
}
