//! Scenario configuration document (JSON).
//!
//! ```json
//! {
//!   "note": "free text, ignored",
//!   "lattice": { "index_bound": 4, "radius": 1.0, "origin": [0.0, 0.0] },
//!   "domain": "Europe",
//!   "channel_table": [ { "phy_channel": 4, "code": 7 } ],
//!   "us_data_card": 24,
//!   "superframes": [ { "cell": [0, 0], "so": 0, "bo": 3, "phase": 0 } ],
//!   "workload": { "count": 8, "slots": 3 },
//!   "solver": { "exact_vertex_cap": 64 },
//!   "output_dir": "out"
//! }
//! ```
//!
//! `lattice` takes either `index_bound` or an explicit `cells` list.
//! `workload` takes either `count`/`slots` (same for every PAN) or
//! `per_pan` (one request list per superframe entry).

use std::path::{Path, PathBuf};

use cellchan_core::coloring::DEFAULT_EXACT_VERTEX_CAP;
use cellchan_core::{
    CellIndex, ChannelPlan, DomainName, Lattice, LogicalChannel, Point, RegulatoryDomain,
    RequestScenario, SuperframeConfig, ZykovSolver,
};
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub note: Option<String>,
    pub lattice: LatticeSpec,
    #[serde(default)]
    pub domain: Option<DomainName>,
    #[serde(default)]
    pub channel_table: Option<Vec<LogicalChannel>>,
    #[serde(default)]
    pub us_data_card: Option<u32>,
    #[serde(default)]
    pub superframes: Vec<SuperframeConfig>,
    #[serde(default)]
    pub workload: Option<WorkloadSpec>,
    #[serde(default)]
    pub solver: SolverSpec,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSpec {
    #[serde(default)]
    pub index_bound: Option<u32>,
    #[serde(default)]
    pub cells: Option<Vec<CellIndex>>,
    #[serde(default = "default_radius")]
    pub radius: f64,
    #[serde(default)]
    pub origin: Point,
}

fn default_radius() -> f64 {
    1.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkloadSpec {
    #[serde(default)]
    pub count: Option<usize>,
    #[serde(default)]
    pub slots: Option<u64>,
    #[serde(default)]
    pub per_pan: Option<Vec<Vec<u64>>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSpec {
    #[serde(default = "default_cap")]
    pub exact_vertex_cap: usize,
}

fn default_cap() -> usize {
    DEFAULT_EXACT_VERTEX_CAP
}

impl Default for SolverSpec {
    fn default() -> Self {
        SolverSpec {
            exact_vertex_cap: DEFAULT_EXACT_VERTEX_CAP,
        }
    }
}

fn invalid(field: impl Into<String>, message: impl std::fmt::Display) -> CliError {
    CliError::Validation(format!("{}: {message}", field.into()))
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Validation(msg) => CliError::Validation(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// Parses and validates a config document.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: ScenarioConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            if path == "." {
                CliError::Validation(inner.to_string())
            } else {
                invalid(path, inner)
            }
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        let lattice = self.lattice()?;
        if let Some(card) = self.us_data_card {
            if card != 24 && card != 28 {
                return Err(invalid(
                    "us_data_card",
                    format!("must be 24 or 28, got {card}"),
                ));
            }
        }
        if let Some(table) = &self.channel_table {
            for (k, ch) in table.iter().enumerate() {
                ch.validate()
                    .map_err(|e| invalid(format!("channel_table[{k}]"), e))?;
            }
        }
        for (k, sf) in self.superframes.iter().enumerate() {
            let field = format!("superframes[{k}]");
            sf.validate().map_err(|e| invalid(&field, e))?;
            if !lattice.contains(sf.cell) {
                return Err(invalid(
                    &field,
                    format!("cell {} is not part of the lattice", sf.cell),
                ));
            }
            if self.superframes[..k]
                .iter()
                .any(|other| other.cell == sf.cell)
            {
                return Err(invalid(
                    &field,
                    format!("cell {} already has a superframe", sf.cell),
                ));
            }
        }
        if self.solver.exact_vertex_cap == 0 {
            return Err(invalid("solver.exact_vertex_cap", "must be positive"));
        }
        if self.workload.is_some() {
            self.workload()?;
        }
        Ok(())
    }

    pub fn lattice(&self) -> Result<Lattice, CliError> {
        let spec = &self.lattice;
        let built = match (&spec.index_bound, &spec.cells) {
            (Some(n), None) => Lattice::new(*n, spec.radius, spec.origin),
            (None, Some(cells)) => {
                if cells.is_empty() {
                    return Err(invalid("lattice.cells", "must not be empty"));
                }
                Lattice::from_cells(cells, spec.radius, spec.origin)
            }
            _ => {
                return Err(invalid(
                    "lattice",
                    "give exactly one of `index_bound` or `cells`",
                ))
            }
        };
        built.map_err(|e| invalid("lattice", e))
    }

    pub fn domain_name(&self, override_name: Option<DomainName>) -> Result<DomainName, CliError> {
        override_name.or(self.domain).ok_or_else(|| {
            invalid(
                "domain",
                "no regulatory domain given (set `domain` or pass --domain)",
            )
        })
    }

    pub fn regulatory_domain(&self, name: DomainName) -> Result<RegulatoryDomain, CliError> {
        match &self.channel_table {
            Some(table) => RegulatoryDomain::custom(name.as_str(), table)
                .map_err(|e| invalid("channel_table", e)),
            None => Ok(RegulatoryDomain::builtin(name)),
        }
    }

    /// Channel plan, honouring `us_data_card: 28` (four control channels).
    pub fn plan(&self, name: DomainName) -> Result<ChannelPlan, CliError> {
        let domain = self.regulatory_domain(name)?;
        let plan = if self.us_28_reading(name) {
            ChannelPlan::with_control_limit(&domain, 4)
        } else {
            ChannelPlan::new(&domain)
        };
        plan.map_err(|e| invalid("domain", e))
    }

    pub fn us_28_reading(&self, name: DomainName) -> bool {
        name == DomainName::US && self.us_data_card == Some(28)
    }

    pub fn superframes(&self) -> Result<&[SuperframeConfig], CliError> {
        if self.superframes.is_empty() {
            return Err(invalid(
                "superframes",
                "at least one superframe is required",
            ));
        }
        Ok(&self.superframes)
    }

    pub fn workload(&self) -> Result<RequestScenario, CliError> {
        let pans = self.superframes.len();
        let Some(spec) = &self.workload else {
            return Ok(RequestScenario::default_for(pans));
        };
        let scenario = match (&spec.per_pan, spec.count, spec.slots) {
            (Some(per_pan), None, None) => RequestScenario {
                per_pan: per_pan.clone(),
            },
            (None, count, slots) => {
                let count = count.unwrap_or(RequestScenario::DEFAULT_COUNT);
                let slots = slots.unwrap_or(RequestScenario::DEFAULT_SLOTS);
                if count == 0 {
                    return Err(invalid("workload.count", "must be positive"));
                }
                if slots == 0 {
                    return Err(invalid("workload.slots", "must be positive"));
                }
                RequestScenario::uniform(pans, count, slots)
            }
            _ => {
                return Err(invalid(
                    "workload",
                    "give either `per_pan` or `count`/`slots`, not both",
                ))
            }
        };
        scenario
            .validate(pans)
            .map_err(|e| invalid("workload", e))?;
        Ok(scenario)
    }

    pub fn solver(&self) -> ZykovSolver {
        ZykovSolver::with_cap(self.solver.exact_vertex_cap)
    }
}
