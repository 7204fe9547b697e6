//! Runs the six-condition synthetic experiment at a reduced size and prints
//! the per-condition means. Pass `--full` for the 50-trial default setup.

use seis::{run_validation_suite, Dims, HarnessConfig};

fn main() -> seis::Result<()> {
    let full = std::env::args().any(|a| a == "--full");
    let cfg = if full {
        HarnessConfig::default()
    } else {
        HarnessConfig { dims: Dims::new(32, 16, 16, 16)?, trials: 5, ..HarnessConfig::default() }
    };
    let report = run_validation_suite(&cfg)?;
    println!("dims {}  trials {}  seed {}", cfg.dims, cfg.trials, cfg.master_seed);
    println!("{:<16} {:>9} {:>9}", "condition", "s_equiv", "s_inv");
    for s in &report.summaries {
        println!("{:<16} {:>9.6} {:>9.6}", s.condition.as_str(), s.mean_equiv, s.mean_inv);
    }
    Ok(())
}
