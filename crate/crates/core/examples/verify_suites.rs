//! Runs every property suite on a twisted su(4) chain and prints residuals.

use twistred::config::RunConfig;
use twistred::verify::run_suites;

fn main() -> twistred::Result<()> {
    let mut cfg = RunConfig::new("A", 3, vec![2.0, 2.0]);
    cfg.gamma_order = 2;
    cfg.samples = 5;
    let setup = cfg.setup()?;
    for report in run_suites("all", &cfg, &setup)? {
        if let Some(why) = &report.skipped {
            println!("{:<12} skipped: {why}", report.suite);
            continue;
        }
        for c in &report.checks {
            let mark = if c.passed { "ok" } else { "FAIL" };
            println!("{:<12} {:<34} {:>10.2e} <= {:<8.0e} {mark}", report.suite, c.name, c.max_residual, c.tolerance);
        }
    }
    Ok(())
}
