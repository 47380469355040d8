//! Write the CSV tables consumed by the plotting scripts.
//!
//! Only figures that need no dataset are built here; pass a manifest to the
//! `netshuffle figure` subcommand for the rest.
//!
//! ```text
//! cargo run --example figure_data -- out_dir
//! ```

use std::path::PathBuf;

use netshuffle::experiments::{figure_table, Figure, FigureOptions, GraphSource};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| std::env::temp_dir().join("netshuffle-figures").display().to_string()));
    std::fs::create_dir_all(&dir)?;

    let fig7 = figure_table(Figure::Fig7, &FigureOptions::default(), None)?;
    fig7.write(dir.join("fig7.csv"))?;

    // reference (n, Gamma) profiles stand in for the datasets
    let fig5 = figure_table(Figure::Fig5, &FigureOptions { reference_profiles: true, ..Default::default() }, None)?;
    fig5.write(dir.join("fig5.csv"))?;

    let fig4 = figure_table(
        Figure::Fig4,
        &FigureOptions { sources: vec![GraphSource::Regular { n: 512, k: 4 }, GraphSource::Regular { n: 512, k: 8 }], seeds: 2, ..Default::default() },
        None,
    )?;
    fig4.write(dir.join("fig4.csv"))?;

    for (name, t) in [("fig4", &fig4), ("fig5", &fig5), ("fig7", &fig7)] {
        println!("{name}: {} rows -> {}", t.rows.len(), dir.join(format!("{name}.csv")).display());
    }
    Ok(())
}
