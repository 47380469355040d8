//! Every example must run to completion.

use std::process::Command;

fn run(name: &str, args: &[&str]) -> String {
    let out = Command::new(env!("CARGO"))
        .args(["run", "--quiet", "--manifest-path", concat!(env!("CARGO_MANIFEST_DIR"), "/Cargo.toml"), "--example", name, "--"])
        .args(args)
        .output()
        .expect("cargo is runnable");
    let stdout = String::from_utf8_lossy(&out.stdout).into_owned();
    assert!(out.status.success(), "example {name} failed:\n{stdout}\n{}", String::from_utf8_lossy(&out.stderr));
    stdout
}

#[test]
fn quickstart() {
    assert!(run("quickstart", &[]).contains("single-report eps"));
}

#[test]
fn load_edge_list() {
    let out = run("load_edge_list", &[]);
    assert!(out.contains("5 in the largest component"));
    assert!(out.contains("# schema: graph_stats"));
}

#[test]
fn spectral_mixing() {
    assert!(run("spectral_mixing", &[]).contains("cycle n=31"));
}

#[test]
fn walk_simulation() {
    assert!(run("walk_simulation", &[]).contains("above bound"));
}

#[test]
fn amplification() {
    let out = run("amplification", &[]);
    assert!(out.starts_with("protocol,scenario,eps0,delta0,epsilon,delta"));
    assert!(!out.contains("inf"));
}

#[test]
fn ldp_mechanisms() {
    assert!(run("ldp_mechanisms", &[]).contains("output norm 17.973"));
}

#[test]
fn mean_estimation() {
    assert!(run("mean_estimation", &[]).contains("central eps"));
}

#[test]
fn protocol_transcript() {
    assert!(run("protocol_transcript", &[]).contains("read 0 reports"));
}

#[test]
fn figure_data() {
    let dir = std::env::temp_dir().join(format!("netshuffle-example-{}", std::process::id()));
    run("figure_data", &[dir.to_str().unwrap()]);
    for f in ["fig4.csv", "fig5.csv", "fig7.csv"] {
        let text = std::fs::read_to_string(dir.join(f)).unwrap();
        assert!(text.starts_with("# schema: "), "{f}");
    }
    std::fs::remove_dir_all(dir).unwrap();
}
