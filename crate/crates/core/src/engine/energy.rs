use alloc::collections::BTreeMap;
use alloc::string::String;

/// Who spent the CPU time.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EnergyEntity {
    Detector(String),
    RsuHost(String),
    Controller,
    /// Fixed platform cost per simulated second.
    Overhead,
}

impl EnergyEntity {
    pub fn kind(&self) -> &'static str {
        match self {
            EnergyEntity::Detector(_) => "detector",
            EnergyEntity::RsuHost(_) => "rsu-host",
            EnergyEntity::Controller => "controller",
            EnergyEntity::Overhead => "overhead",
        }
    }

    pub fn label(&self) -> String {
        match self {
            EnergyEntity::Detector(id) | EnergyEntity::RsuHost(id) => alloc::format!("{}:{id}", self.kind()),
            _ => String::from(self.kind()),
        }
    }
}

/// Accumulated cost units per entity. Only ever grows.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EnergyAccount {
    costs: BTreeMap<EnergyEntity, f64>,
}

impl EnergyAccount {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `amount` (clamped at zero) to `entity`.
    pub fn charge(&mut self, entity: EnergyEntity, amount: f64) {
        *self.costs.entry(entity).or_insert(0.0) += amount.max(0.0);
    }

    pub fn get(&self, entity: &EnergyEntity) -> f64 {
        self.costs.get(entity).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&EnergyEntity, f64)> {
        self.costs.iter().map(|(e, c)| (e, *c))
    }

    /// Sum over every entity of the given kind.
    pub fn total_of(&self, kind: &str) -> f64 {
        self.costs.iter().filter(|(e, _)| e.kind() == kind).map(|(_, c)| c).sum()
    }

    pub fn total(&self) -> f64 {
        self.costs.values().sum()
    }
}
