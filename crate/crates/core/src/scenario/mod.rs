//! Configuration-driven scenarios: parsing and validation, the canonical
//! catalog, execution and CSV/JSON emission.

mod catalog;
mod config;
mod output;
mod run;

pub use catalog::{canonical, list_scenarios, CatalogEntry, CATALOG};
pub use config::*;
pub use output::{write_outputs, Cell, Table};
pub use run::{run_scenario, RunOptions, RunOutput, VERSION};

use crate::error::{Error, Result};

/// Load a scenario from a config file path or a canonical id.
pub fn load(target: &str) -> Result<ScenarioConfig> {
    let path = std::path::Path::new(target);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(target, e))?;
        return validate_config(&text);
    }
    if let Ok(entry) = canonical(target) {
        return entry.config();
    }
    if target.ends_with(".toml") || target.ends_with(".json") || target.contains('/') {
        return Err(Error::io(target, std::io::Error::from(std::io::ErrorKind::NotFound)));
    }
    canonical(target)?.config()
}
