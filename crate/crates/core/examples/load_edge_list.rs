//! Load a SNAP-style edge list, keep the largest connected component and
//! print the statistics table.
//!
//! ```text
//! cargo run --example load_edge_list -- path/to/edges.txt
//! ```
//! Without an argument a small built-in list is used.

use netshuffle::experiments::{graph_stats_row, Table, GRAPH_STATS_COLUMNS};
use netshuffle::graph::parse_edge_list;
use netshuffle::{largest_connected_component, load_edge_list, spectral_summary, LoadOptions, SpectralOptions};

const DEMO: &str = "# toy network\n# FromNodeId\tToNodeId\n1\t2\n2\t3\n3\t1\n3\t4\n4\t5\n5\t3\n10\t11\n";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (name, g) = match std::env::args().nth(1) {
        Some(path) => (path.clone(), load_edge_list(&path, LoadOptions::default())?),
        None => ("demo".to_string(), parse_edge_list(DEMO, LoadOptions::default())?),
    };
    let lcc = largest_connected_component(&g);
    println!("{} nodes loaded, {} in the largest component", g.node_count(), lcc.node_count());

    let spectral = spectral_summary(&lcc, &SpectralOptions::default())?;
    let mut table = Table::new("graph_stats", 1, GRAPH_STATS_COLUMNS);
    table.push(graph_stats_row(&name, &lcc, Some(&spectral)));
    print!("{}", table.to_csv()?);
    Ok(())
}
