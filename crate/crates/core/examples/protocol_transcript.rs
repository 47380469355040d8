//! Run the message-level protocol and inspect what each party learns.

use netshuffle::generators::petersen;
use netshuffle::protocol::{adversary_view, check_invariants, run_protocol_with, AdversaryView, EventKind, Observer, ProtocolConfig};
use netshuffle::Protocol;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = petersen();
    let mut config = ProtocolConfig::new(3, Protocol::Single, 11);
    config.curious = true;
    let t = run_protocol_with(&g, &config)?;
    check_invariants(&t)?;

    print!("{}", t.to_records().lines().take(12).collect::<Vec<_>>().join("\n"));
    println!("\n... {} events in total", t.events.len());
    for round in 1..=t.rounds {
        println!("round {round}: {} relays", t.messages_in_round(round, EventKind::Relay));
    }
    println!("dummies submitted: {}", t.ground_truth.dummies.len());

    if let AdversaryView::Server(v) = adversary_view(&t, Observer::Server) {
        println!("server: {} submissions, {} envelopes linkable across rounds", v.links.len(), v.linkable_envelopes.len());
    }
    if let AdversaryView::Client(v) = adversary_view(&t, Observer::Client(0)) {
        println!("client 0: relayed {}, read {} reports, {} denied open attempts", v.relayed.len(), v.revealed, v.denied_attempts);
    }
    Ok(())
}
