//! JSON scenario files. Unknown keys are rejected; every field is validated
//! before any computation runs.

use serde::Deserialize;

use crate::exchange::ExchangeSector;
use crate::statistics::StatisticsKind;

/// `[re, im]`.
pub type ComplexPair = [f64; 2];

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountConfig {
    /// Resonators of a Planck counting problem.
    #[serde(rename = "N")]
    pub resonators: Option<u64>,
    /// Quanta of a Planck counting problem.
    #[serde(rename = "P")]
    pub quanta: Option<u64>,
    /// Particles.
    pub n: Option<u64>,
    /// Modes.
    pub d: Option<u64>,
    pub kinds: Option<Vec<StatisticsKind>>,
    #[serde(default)]
    pub enumerate: bool,
    /// Boltzmann constant in the entropy, default 1.
    pub k: Option<f64>,
    /// Quantum size ε, display only.
    pub epsilon: Option<f64>,
    pub cap: Option<u64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisConfig {
    pub d: Option<usize>,
    pub n: usize,
    pub sector: ExchangeSector,
    pub labels: Option<Vec<String>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FockTerm {
    pub symbol: String,
    pub amplitude: ComplexPair,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpec {
    pub symbol: Option<String>,
    pub fock: Option<Vec<FockTerm>>,
    pub amplitudes: Option<Vec<ComplexPair>>,
    pub n_slots: Option<usize>,
    pub d: Option<usize>,
    pub labels: Option<Vec<String>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalyzeConfig {
    pub sector: ExchangeSector,
    pub state: StateSpec,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomConfig {
    /// Row-major 2×2 override, `[[u00, u01], [u10, u11]]`.
    pub splitter: Option<[[ComplexPair; 2]; 2]>,
    #[serde(default)]
    pub baseline: bool,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PacketSpec {
    pub center: f64,
    pub width: f64,
    #[serde(default)]
    pub phase_velocity: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityConfig {
    pub packet_s: Option<PacketSpec>,
    pub packet_n: Option<PacketSpec>,
    /// Centers at `±separation/2`, in units of `width`.
    pub separation: Option<f64>,
    pub width: Option<f64>,
    pub grid: Option<GridConfig>,
    pub n_points: Option<usize>,
    pub output: Option<String>,
}
