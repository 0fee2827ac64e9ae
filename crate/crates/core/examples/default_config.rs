//! Prints the bundled ten-arm study as a config file, ready to edit and pass
//! to `fair-cmab run --config`.
//!
//! cargo run --example default_config > my_config.json

use fair_cmab::experiment::ExperimentConfig;

fn main() -> fair_cmab::Result<()> {
    println!("{}", ExperimentConfig::synthetic_default().to_json()?);
    Ok(())
}
