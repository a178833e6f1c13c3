//! Running a configured experiment from code, with a smaller budget.

use regen_stable::config::Config;
use regen_stable::experiments::run_localtime_moments;

fn main() -> regen_stable::Result<()> {
    let cfg = Config::from_toml_str("master_seed = 99\n", &["replications=2000".to_string()], Some("localtime_moments"))?;
    let out = run_localtime_moments(&cfg.localtime_moments, cfg.master_seed)?;
    for c in &out.checks {
        println!("{:<28} {:.4} vs {:.4}  {}", c.name, c.value, c.target, if c.passed { "ok" } else { "FAIL" });
    }
    print!("{}", out.table.to_csv());
    Ok(())
}
