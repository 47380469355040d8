//! Executable model of the report-exchange protocol.
//!
//! Clients hold two-layer sealed envelopes: the inner layer can only be opened
//! by the server, the outer hop layer only by the next client on the walk.
//! Every hop is relayed through the server, which therefore sees who talks to
//! whom but never the contents. Encryption is modeled by capability checks:
//! [`SealedEnvelope::open`] refuses any identity other than the recipient and
//! every attempt is written to the transcript.

use std::collections::{HashMap, HashSet};
use std::fmt;

use rand::seq::IndexedRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::accountant::Protocol;
use crate::graph::{check_ergodic, Graph};
use crate::ldp::RandomizedResponse;
use crate::walk::{trial_rng, ReportAllocation};

#[derive(Debug, Error, PartialEq)]
pub enum ProtocolError {
    #[error("node {0} has no neighbors")]
    IsolatedNode(usize),
    #[error("graph is not connected")]
    Disconnected,
    #[error("the protocol needs at least one exchange round")]
    NoRounds,
    #[error("invalid phase transition from {from:?} to {to:?}")]
    PhaseOrder { from: Phase, to: Phase },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Identity {
    Server,
    Client(u32),
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Identity::Server => write!(f, "server"),
            Identity::Client(j) => write!(f, "client{j}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Layer {
    Hop,
    Server,
}

impl fmt::Display for Layer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Layer::Hop => "hop",
            Layer::Server => "server",
        })
    }
}

/// A locally randomized report. The token is random and carries no identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Report {
    pub token: u64,
    pub value: u32,
}

#[derive(Clone, Debug, PartialEq)]
enum Content {
    Inner(Box<SealedEnvelope>),
    Report(Report),
}

/// What a successful [`SealedEnvelope::open`] yields.
#[derive(Clone, Debug, PartialEq)]
pub enum Opened {
    Envelope(SealedEnvelope),
    Report(Report),
}

/// Opening was refused; the envelope is handed back unchanged.
#[derive(Clone, Debug, PartialEq)]
pub struct AccessDenied {
    pub opener: Identity,
    pub envelope: SealedEnvelope,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SealedEnvelope {
    id: u64,
    recipient: Identity,
    layer: Layer,
    content: Content,
}

impl SealedEnvelope {
    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn recipient(&self) -> Identity {
        self.recipient
    }

    pub fn layer(&self) -> Layer {
        self.layer
    }

    pub fn open(self, opener: Identity) -> Result<Opened, AccessDenied> {
        if opener != self.recipient {
            return Err(AccessDenied { opener, envelope: self });
        }
        Ok(match self.content {
            Content::Inner(e) => Opened::Envelope(*e),
            Content::Report(r) => Opened::Report(r),
        })
    }
}

/// Issues envelopes with unique ids.
#[derive(Debug, Default)]
struct Sealer {
    next_id: u64,
}

impl Sealer {
    fn fresh(&mut self) -> u64 {
        self.next_id += 1;
        self.next_id
    }

    fn seal_for_server(&mut self, report: Report) -> SealedEnvelope {
        SealedEnvelope { id: self.fresh(), recipient: Identity::Server, layer: Layer::Server, content: Content::Report(report) }
    }

    /// Re-encrypts a server-layer envelope without opening it, giving it a
    /// new id so it cannot be matched across hops.
    fn reseal(&mut self, envelope: SealedEnvelope) -> SealedEnvelope {
        debug_assert_eq!(envelope.layer, Layer::Server);
        SealedEnvelope { id: self.fresh(), ..envelope }
    }

    fn seal_for_hop(&mut self, inner: SealedEnvelope, to: u32) -> SealedEnvelope {
        SealedEnvelope { id: self.fresh(), recipient: Identity::Client(to), layer: Layer::Hop, content: Content::Inner(Box::new(inner)) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Phase {
    Keying,
    Exchanging,
    Submitting,
    Aggregated,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EventKind {
    /// A client uploads its hop public key.
    PublishKey,
    /// The server distributes the key directory and its own key.
    BroadcastKeys,
    /// Client to server, hop-layer envelope addressed to another client.
    Relay,
    /// Server to the addressed client.
    Forward,
    /// Final upload of a server-layer envelope.
    Submit,
    Open,
    Denied,
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EventKind::PublishKey => "publish_key",
            EventKind::BroadcastKeys => "broadcast_keys",
            EventKind::Relay => "relay",
            EventKind::Forward => "forward",
            EventKind::Submit => "submit",
            EventKind::Open => "open",
            EventKind::Denied => "denied",
        })
    }
}

/// One transcript record. For `Open` and `Denied` the sender is the identity
/// that attempted the opening and the receiver is the envelope's recipient.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Event {
    pub round: u64,
    pub sender: Identity,
    pub receiver: Identity,
    pub layer: Option<Layer>,
    pub kind: EventKind,
    pub envelope: Option<u64>,
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let layer = self.layer.map_or("-".to_string(), |l| l.to_string());
        let env = self.envelope.map_or("-".to_string(), |e| e.to_string());
        write!(f, "{},{},{},{},{},{}", self.round, self.sender, self.receiver, layer, self.kind, env)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProtocolConfig {
    pub rounds: u64,
    pub reporting: Protocol,
    pub seed: u64,
    /// Categories of the randomized-response input.
    pub categories: u32,
    pub epsilon0: f64,
    /// Clients and server try to open every envelope they handle, including
    /// ones not addressed to them.
    pub curious: bool,
}

impl ProtocolConfig {
    pub fn new(rounds: u64, reporting: Protocol, seed: u64) -> Self {
        Self { rounds, reporting, seed, categories: 4, epsilon0: 1.0, curious: false }
    }
}

/// Mutable state of one run.
#[derive(Debug)]
pub struct ProtocolState {
    pub round: u64,
    pub phase: Phase,
    pub held: Vec<Vec<SealedEnvelope>>,
    pub server_inbox: Vec<(u32, SealedEnvelope)>,
}

impl ProtocolState {
    fn advance(&mut self, to: Phase) -> Result<(), ProtocolError> {
        if to <= self.phase {
            return Err(ProtocolError::PhaseOrder { from: self.phase, to });
        }
        self.phase = to;
        Ok(())
    }

    pub fn reports_in_system(&self) -> usize {
        self.held.iter().map(Vec::len).sum::<usize>() + self.server_inbox.len()
    }
}

/// Facts hidden from every participant, kept for verification.
#[derive(Clone, Debug, PartialEq)]
pub struct GroundTruth {
    /// Originating client of each genuine report token.
    pub origin: HashMap<u64, u32>,
    pub dummies: HashSet<u64>,
    /// Randomized inputs in client order.
    pub randomized_inputs: Vec<u32>,
    /// Reports held by each client after the last exchange round.
    pub holdings: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Transcript {
    pub node_count: usize,
    pub rounds: u64,
    pub reporting: Protocol,
    pub events: Vec<Event>,
    /// Reports aggregated by the server with the client that submitted them.
    pub aggregated: Vec<(u32, Report)>,
    pub ground_truth: GroundTruth,
}

impl Transcript {
    /// Line-delimited records `round,sender,receiver,layer,event,envelope`.
    pub fn to_records(&self) -> String {
        let mut out = String::from("round,sender,receiver,layer,event,envelope\n");
        for e in &self.events {
            out.push_str(&e.to_string());
            out.push('\n');
        }
        out
    }

    pub fn allocation(&self) -> ReportAllocation {
        ReportAllocation { counts: self.ground_truth.holdings.clone() }
    }

    pub fn messages_in_round(&self, round: u64, kind: EventKind) -> usize {
        self.events.iter().filter(|e| e.round == round && e.kind == kind).count()
    }
}

pub fn run_protocol(g: &Graph, rounds: u64, reporting: Protocol, seed: u64) -> Result<Transcript, ProtocolError> {
    run_protocol_with(g, &ProtocolConfig::new(rounds, reporting, seed))
}

pub fn run_protocol_with(g: &Graph, config: &ProtocolConfig) -> Result<Transcript, ProtocolError> {
    let n = g.node_count();
    if let Some(j) = (0..n).find(|&j| g.degree(j) == 0) {
        return Err(ProtocolError::IsolatedNode(j));
    }
    if !check_ergodic(g).is_connected {
        return Err(ProtocolError::Disconnected);
    }
    if config.rounds == 0 {
        return Err(ProtocolError::NoRounds);
    }
    let rr = RandomizedResponse::new(config.categories, config.epsilon0)
        .map_err(|e| ProtocolError::InvalidParameter(e.to_string()))?;

    let mut rng = trial_rng(config.seed, 0);
    let mut sealer = Sealer::default();
    let mut events = Vec::new();
    let mut truth = GroundTruth {
        origin: HashMap::with_capacity(n),
        dummies: HashSet::new(),
        randomized_inputs: Vec::with_capacity(n),
        holdings: Vec::new(),
    };
    let mut state = ProtocolState { round: 0, phase: Phase::Keying, held: vec![Vec::new(); n], server_inbox: Vec::new() };
    let client = |j: usize| Identity::Client(j as u32);

    // keying: all key material goes through the server
    for j in 0..n {
        events.push(Event { round: 0, sender: client(j), receiver: Identity::Server, layer: None, kind: EventKind::PublishKey, envelope: None });
    }
    for j in 0..n {
        events.push(Event { round: 0, sender: Identity::Server, receiver: client(j), layer: None, kind: EventKind::BroadcastKeys, envelope: None });
    }
    for j in 0..n {
        let value = rr.randomize(j as u32 % config.categories, &mut rng);
        let report = new_report(value, &mut rng, &truth);
        truth.origin.insert(report.token, j as u32);
        truth.randomized_inputs.push(value);
        state.held[j].push(sealer.seal_for_server(report));
    }

    state.advance(Phase::Exchanging)?;
    for round in 1..=config.rounds {
        state.round = round;
        // clients in id order; each held report goes to an independent neighbor
        for j in 0..n {
            for inner in std::mem::take(&mut state.held[j]) {
                let to = *g.neighbors(j).choose(&mut rng).expect("non-isolated");
                let inner = sealer.reseal(inner);
                let outer = sealer.seal_for_hop(inner, to);
                events.push(Event { round, sender: client(j), receiver: Identity::Server, layer: Some(Layer::Hop), kind: EventKind::Relay, envelope: Some(outer.id) });
                state.server_inbox.push((to, outer));
            }
        }
        debug_assert_eq!(state.reports_in_system(), n);
        let mut deliveries = std::mem::take(&mut state.server_inbox);
        deliveries.sort_by_key(|(to, e)| (*to, e.id));
        let mut arrived: Vec<Vec<SealedEnvelope>> = vec![Vec::new(); n];
        for (to, mut envelope) in deliveries {
            if config.curious {
                envelope = attempt(envelope, Identity::Server, round, &mut events);
            }
            events.push(Event { round, sender: Identity::Server, receiver: Identity::Client(to), layer: Some(Layer::Hop), kind: EventKind::Forward, envelope: Some(envelope.id) });
            arrived[to as usize].push(envelope);
        }
        for (j, envelopes) in arrived.into_iter().enumerate() {
            for envelope in envelopes {
                let inner = match open_logged(envelope, client(j), round, &mut events) {
                    Ok(Opened::Envelope(inner)) => inner,
                    _ => unreachable!("hop envelopes wrap a server envelope and are addressed to their holder"),
                };
                let inner = if config.curious { attempt(inner, client(j), round, &mut events) } else { inner };
                state.held[j].push(inner);
            }
        }
    }
    truth.holdings = state.held.iter().map(|h| h.len() as u32).collect();

    state.advance(Phase::Submitting)?;
    let submit_round = config.rounds + 1;
    state.round = submit_round;
    for j in 0..n {
        let held = std::mem::take(&mut state.held[j]);
        let submitted = match config.reporting {
            Protocol::All => held,
            Protocol::Single if held.is_empty() => {
                // dummy: a randomization of the default input, sealed like any report
                let value = rr.randomize(0, &mut rng);
                let report = new_report(value, &mut rng, &truth);
                truth.dummies.insert(report.token);
                vec![sealer.seal_for_server(report)]
            }
            Protocol::Single => {
                let pick = rng.random_range(0..held.len());
                vec![held.into_iter().nth(pick).unwrap()]
            }
        };
        for envelope in submitted {
            let envelope = sealer.reseal(envelope);
            events.push(Event { round: submit_round, sender: client(j), receiver: Identity::Server, layer: Some(Layer::Server), kind: EventKind::Submit, envelope: Some(envelope.id) });
            state.server_inbox.push((j as u32, envelope));
        }
    }

    state.advance(Phase::Aggregated)?;
    let mut aggregated = Vec::with_capacity(state.server_inbox.len());
    for (sender, envelope) in std::mem::take(&mut state.server_inbox) {
        match open_logged(envelope, Identity::Server, submit_round, &mut events) {
            Ok(Opened::Report(r)) => aggregated.push((sender, r)),
            _ => unreachable!("submitted envelopes are server-layer"),
        }
    }

    Ok(Transcript { node_count: n, rounds: config.rounds, reporting: config.reporting, events, aggregated, ground_truth: truth })
}

fn new_report(value: u32, rng: &mut ChaCha8Rng, truth: &GroundTruth) -> Report {
    loop {
        let token = rng.random();
        if !truth.origin.contains_key(&token) && !truth.dummies.contains(&token) {
            return Report { token, value };
        }
    }
}

fn open_logged(envelope: SealedEnvelope, opener: Identity, round: u64, events: &mut Vec<Event>) -> Result<Opened, AccessDenied> {
    let (id, recipient, layer) = (envelope.id, envelope.recipient, envelope.layer);
    let result = envelope.open(opener);
    let kind = if result.is_ok() { EventKind::Open } else { EventKind::Denied };
    events.push(Event { round, sender: opener, receiver: recipient, layer: Some(layer), kind, envelope: Some(id) });
    result
}

/// A curious participant tries to open an envelope it only relays.
fn attempt(envelope: SealedEnvelope, opener: Identity, round: u64, events: &mut Vec<Event>) -> SealedEnvelope {
    match open_logged(envelope, opener, round, events) {
        Err(denied) => denied.envelope,
        Ok(_) => unreachable!("relayed envelopes are never addressed to the relayer"),
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum InvariantViolation {
    #[error("{opener} opened a {layer} envelope addressed to {recipient} in round {round}")]
    ForeignOpen { round: u64, opener: Identity, recipient: Identity, layer: Layer },
    #[error("{opener} opened a server-layer envelope in round {round}")]
    ServerLayerExposed { round: u64, opener: Identity },
    #[error("round {round}: {relays} relays but {held} reports held")]
    MessageCount { round: u64, relays: usize, held: usize },
    #[error("{submitted} reports submitted, expected {expected}")]
    SubmissionCount { submitted: usize, expected: usize },
    #[error("aggregated reports differ from the randomized inputs")]
    NotConserved,
}

/// Checks every event against the access structure plus the counting and
/// conservation contracts of the protocol.
pub fn check_invariants(t: &Transcript) -> Result<(), InvariantViolation> {
    for e in t.events.iter().filter(|e| e.kind == EventKind::Open) {
        if e.sender != e.receiver {
            return Err(InvariantViolation::ForeignOpen { round: e.round, opener: e.sender, recipient: e.receiver, layer: e.layer.unwrap() });
        }
        if e.layer == Some(Layer::Server) && e.sender != Identity::Server {
            return Err(InvariantViolation::ServerLayerExposed { round: e.round, opener: e.sender });
        }
    }
    let n = t.node_count;
    for round in 1..=t.rounds {
        let relays = t.messages_in_round(round, EventKind::Relay);
        if relays != n {
            return Err(InvariantViolation::MessageCount { round, relays, held: n });
        }
    }
    let submitted = t.messages_in_round(t.rounds + 1, EventKind::Submit);
    if submitted != n || t.aggregated.len() != n {
        return Err(InvariantViolation::SubmissionCount { submitted, expected: n });
    }
    if t.reporting == Protocol::All {
        let mut got: Vec<u32> = t.aggregated.iter().map(|(_, r)| r.value).collect();
        let mut want = t.ground_truth.randomized_inputs.clone();
        got.sort_unstable();
        want.sort_unstable();
        let tokens: HashSet<u64> = t.aggregated.iter().map(|(_, r)| r.token).collect();
        if got != want || tokens.len() != n || !tokens.iter().all(|k| t.ground_truth.origin.contains_key(k)) {
            return Err(InvariantViolation::NotConserved);
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Observer {
    Server,
    Client(u32),
}

/// What the server can link from its own view.
#[derive(Clone, Debug, PartialEq)]
pub struct ServerView {
    /// Each aggregated report with the client that submitted it.
    pub links: Vec<(u64, u32)>,
    /// Envelope ids the server saw in more than one round; empty means no
    /// report can be followed back past its final hop from envelope data.
    pub linkable_envelopes: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClientView {
    pub client: u32,
    pub relayed: Vec<u64>,
    pub received: Vec<u64>,
    /// Report contents this client managed to read.
    pub revealed: usize,
    pub denied_attempts: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum AdversaryView {
    Server(ServerView),
    Client(ClientView),
}

pub fn adversary_view(t: &Transcript, observer: Observer) -> AdversaryView {
    match observer {
        Observer::Server => {
            let links = t.aggregated.iter().map(|(s, r)| (r.token, *s)).collect();
            let mut rounds_seen: HashMap<u64, HashSet<u64>> = HashMap::new();
            for e in &t.events {
                let touches_server = e.sender == Identity::Server || e.receiver == Identity::Server;
                if let (true, Some(id)) = (touches_server, e.envelope) {
                    rounds_seen.entry(id).or_default().insert(e.round);
                }
            }
            let mut linkable: Vec<u64> = rounds_seen.into_iter().filter(|(_, r)| r.len() > 1).map(|(id, _)| id).collect();
            linkable.sort_unstable();
            AdversaryView::Server(ServerView { links, linkable_envelopes: linkable })
        }
        Observer::Client(j) => {
            let me = Identity::Client(j);
            let mut view = ClientView { client: j, relayed: Vec::new(), received: Vec::new(), revealed: 0, denied_attempts: 0 };
            for e in &t.events {
                match e.kind {
                    EventKind::Relay if e.sender == me => view.relayed.push(e.envelope.unwrap()),
                    EventKind::Forward if e.receiver == me => view.received.push(e.envelope.unwrap()),
                    EventKind::Open if e.sender == me && e.layer == Some(Layer::Server) => view.revealed += 1,
                    EventKind::Denied if e.sender == me => view.denied_attempts += 1,
                    _ => {}
                }
            }
            AdversaryView::Client(view)
        }
    }
}
