//! Drive the experiment runner from a JSON config, as `redlab reduce` does.

use reduced_measure::experiment::{run_reduce, run_sweep, ExperimentConfig};
use reduced_measure::Result;

const CONFIG: &str = r#"{
    "grid": {"kind": "radial", "dim": 2, "R": 1.0, "h": 0.001953125},
    "g": {"kind": "exp"},
    "measure": {"atoms": [{"at": [0.0], "weight": 25.132741228718345}]},
    "expect": {"atom": [[0.0], 12.566370614359172, 0.1]},
    "sweep": {"parameter": "h", "values": [0.0078125, 0.00390625, 0.001953125]}
}"#;

pub fn run_example() -> Result<()> {
    let cfg = ExperimentConfig::from_json(CONFIG)?.with_env_overrides()?;
    let out = std::env::temp_dir().join("redlab-config-runner");
    let o = run_reduce(&cfg.build()?, &out)?;
    println!("reduce: exit {} ({})", o.code, o.message);
    let o = run_sweep(&cfg, 2, &out)?;
    println!("sweep: exit {} ({})", o.code, o.message);
    print!("{}", std::fs::read_to_string(out.join("sweep.csv"))?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
