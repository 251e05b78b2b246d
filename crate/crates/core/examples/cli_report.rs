//! Drives the command-line entry point in-process: writes an example datum,
//! verifies it and prints the JSON report.
//!
//! cargo run --example cli_report

fn main() {
    let dir = std::env::temp_dir().join("qhopf-cli-report");
    std::fs::create_dir_all(&dir).expect("temp dir");
    let file = dir.join("dwz2.json");
    let file = file.to_str().expect("utf-8 path");
    let steps: [&[&str]; 3] = [
        &["qhopf", "example", "--kind", "dpr", "--group", "Z2", "--q", "1", "--out", file],
        &["qhopf", "verify", file, "--level", "qt"],
        &["qhopf", "check", "twist-props", file, "--seeds", "0..3", "--format", "text"],
    ];
    for args in steps {
        let code = qhopf::cli::main_with_args(args.iter().copied());
        eprintln!("exit {code}");
    }
}
