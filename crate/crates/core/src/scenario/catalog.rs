use super::config::{validate_config, ScenarioConfig};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CatalogEntry {
    pub id: &'static str,
    /// Panel the scenario regenerates.
    pub anchor: &'static str,
    pub source: &'static str,
}

macro_rules! entry {
    ($id:literal, $anchor:literal) => {
        CatalogEntry { id: $id, anchor: $anchor, source: include_str!(concat!("../../scenarios/", $id, ".toml")) }
    };
}

pub const CATALOG: [CatalogEntry; 11] = [
    entry!("fig2a", "energy differences w_i0 vs qubit frequency"),
    entry!("fig2b", "enlarged anticrossing and crossing, both phase choices"),
    entry!("fig3a", "occupation probabilities, vacuum Rabi oscillation"),
    entry!("fig3b", "occupation probabilities after a narrow Gaussian pulse"),
    entry!("fig4a", "occupation probabilities, localized photon, maximum P_ee = 1/2"),
    entry!("fig4b", "occupation probabilities after a broad Gaussian pulse"),
    entry!("fig5b", "density plot of the normal-mode transformation matrix"),
    entry!("fig6", "energy differences w_i0 vs qubit frequency, three cavities"),
    entry!("fig7a", "temporal dynamics from the antisymmetric photon, three cavities"),
    entry!("fig7b", "temporal dynamics from a cavity-1 photon, three cavities"),
    entry!("fig7c", "temporal dynamics from a cavity-1 photon, detuned central cavity"),
];

impl CatalogEntry {
    pub fn config(&self) -> Result<ScenarioConfig> {
        validate_config(self.source)
    }

    pub fn description(&self) -> String {
        self.config().map(|c| c.description).unwrap_or_default()
    }
}

pub fn list_scenarios() -> &'static [CatalogEntry] {
    &CATALOG
}

pub fn canonical(id: &str) -> Result<&'static CatalogEntry> {
    CATALOG.iter().find(|e| e.id == id).ok_or_else(|| {
        let ids: Vec<&str> = CATALOG.iter().map(|e| e.id).collect();
        Error::Config(format!("unknown scenario '{id}'; canonical ids are {}", ids.join(", ")))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eleven_canonical_entries_that_validate() {
        assert_eq!(list_scenarios().len(), 11);
        for e in list_scenarios() {
            let c = e.config().unwrap_or_else(|err| panic!("{}: {err}", e.id));
            assert_eq!(c.scenario_id, e.id);
            assert!(!c.description.is_empty());
        }
    }

    #[test]
    fn detuned_entry_cites_the_detuning() {
        assert!(canonical("fig7c").unwrap().description().contains("Delta/omega_c = 0.5"));
        assert!(canonical("fig9").is_err());
    }
}
