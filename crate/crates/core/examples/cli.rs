//! Drives the command-line front end in-process on the bundled problem
//! files. The same commands work with the `parawarm` binary.
//!
//!     cargo run --example cli

use parawarm::cli::run_with;

fn main() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data");
    let p1 = format!("{dir}/p1.json");
    let p4 = format!("{dir}/p4.json");
    let jordan = format!("{dir}/jordan.json");
    let runs: Vec<Vec<&str>> = vec![
        vec!["solve", &p4, "--lambda", "3"],
        vec!["sweep", &p4, "--lambda", "0:3:4"],
        vec!["sweep", &jordan, "--strategy", "tweaked", "--seed", "7"],
        vec!["bound", &p1, "--lambda", "0", "--eps", "0.5", "--format", "csv"],
        vec!["approx", &p4, "--range", "0:3", "--eps", "0.1", "--format", "csv"],
        vec!["sweep", &jordan, "--strategy", "eigen"],
    ];
    for args in runs {
        println!("$ parawarm {}", args.join(" ").replace(dir, "data"));
        let argv = std::iter::once("parawarm").chain(args.iter().copied());
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_with(argv, &mut out, &mut err);
        print!("{}{}", String::from_utf8_lossy(&out), String::from_utf8_lossy(&err));
        println!("[exit {code}]\n");
    }
}
