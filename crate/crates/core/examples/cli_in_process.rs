// Drives the command-line front end in-process: a stability query and a
// small bifurcation sweep written to a temporary directory.

use std::error::Error;

use dyncons::cli;

/// Returns the exit codes of the two invocations.
pub fn run_example() -> Result<(i32, i32), Box<dyn Error>> {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(
        ["dyncons", "stability", "--scheme", "euler", "--h", "2.5"],
        &mut out,
        &mut err,
    );
    let report: serde_json::Value = serde_json::from_slice(&out)?;
    println!("stability exit {code}: {}", report["classification"]);

    let dir = std::env::temp_dir().join(format!("dyncons-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let csv = dir.join("logistic.csv");
    let script = dir.join("logistic.gp");
    let args = [
        "dyncons",
        "bifurcate",
        "--scheme",
        "euler-logistic",
        "--h-min",
        "0.5",
        "--h-max",
        "1.0",
        "--grid",
        "11",
        "--out",
    ];
    let mut argv: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    argv.push(csv.display().to_string());
    argv.push("--plot-script".into());
    argv.push(script.display().to_string());
    let sweep_code = cli::run(argv, &mut out, &mut err);
    let rows = std::fs::read_to_string(&csv)?.lines().count();
    println!(
        "bifurcate exit {sweep_code}: {rows} lines in {}",
        csv.display()
    );
    std::fs::remove_dir_all(&dir)?;
    Ok((code, sweep_code))
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()?;
    Ok(())
}
