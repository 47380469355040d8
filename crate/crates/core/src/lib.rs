//! Privacy amplification by network shuffling.
//!
//! Users sit on the nodes of an undirected graph. Each randomizes its data
//! locally, then the reports perform independent random walks for a number of
//! rounds before every holder forwards what it has to an untrusted server.
//! This crate simulates the exchange, measures how fast walks mix on a given
//! graph, and computes the resulting central `(eps, delta)` guarantee.

pub mod accountant;
pub mod experiments;
pub mod generators;
pub mod graph;
pub mod ldp;
pub mod protocol;
pub mod spectral;
pub mod walk;

pub use accountant::{amplify, AmplificationResult, DeltaParams, LocalPrivacyParams, Protocol, Scenario};
pub use graph::{graph_summary, largest_connected_component, load_edge_list, Graph, GraphSummary, LoadOptions};
pub use spectral::{spectral_summary, SpectralOptions, SpectralSummary};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
