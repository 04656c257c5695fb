//! Time-slot latency of the single-channel, static and dynamic schemes.
//!
//! A PAN's requests are divisible across its channels, but a request never
//! finishes faster than its own length, so serving requests `r` on `m`
//! channels takes `max(max r, ceil(sum r / m))` slots.

use std::fmt;

use serde::Serialize;

use crate::coloring::ZykovSolver;
use crate::dynamic_alloc::{AllocationMatrix, DynamicAllocator, SuperframeConfig};
use crate::error::{Error, Result};
use crate::lattice::{CellIndex, Lattice};
use crate::spectrum::ChannelPlan;
use crate::static_alloc::StaticAllocator;

/// Slots needed to serve `requests` over `channels` parallel channels.
///
/// # Panics
///
/// If `channels` is zero.
pub fn makespan(requests: &[u64], channels: usize) -> u64 {
    assert!(channels > 0, "makespan needs at least one channel");
    let total: u64 = requests.iter().sum();
    let longest = requests.iter().copied().max().unwrap_or(0);
    longest.max(total.div_ceil(channels as u64))
}

/// Relative reduction from `baseline` to `improved`, in percent.
pub fn delay_decrease_percent(baseline: u64, improved: u64) -> Result<f64> {
    if improved > baseline {
        return Err(Error::Ordering { baseline, improved });
    }
    if baseline == 0 {
        return Ok(0.0);
    }
    Ok(100.0 * (baseline - improved) as f64 / baseline as f64)
}

/// Slot requests issued by each PAN during each of its active cycles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RequestScenario {
    pub per_pan: Vec<Vec<u64>>,
}

impl RequestScenario {
    /// Eight 3-slot requests per PAN.
    pub const DEFAULT_COUNT: usize = 8;
    pub const DEFAULT_SLOTS: u64 = 3;

    pub fn uniform(pans: usize, count: usize, slots: u64) -> Self {
        RequestScenario {
            per_pan: vec![vec![slots; count]; pans],
        }
    }

    pub fn default_for(pans: usize) -> Self {
        Self::uniform(pans, Self::DEFAULT_COUNT, Self::DEFAULT_SLOTS)
    }

    pub fn validate(&self, pans: usize) -> Result<()> {
        if self.per_pan.len() != pans {
            return Err(Error::InvalidWorkload(format!(
                "workload lists {} PANs but {} are configured",
                self.per_pan.len(),
                pans
            )));
        }
        for (p, reqs) in self.per_pan.iter().enumerate() {
            if reqs.is_empty() {
                return Err(Error::InvalidWorkload(format!(
                    "PAN {} has no requests",
                    p + 1
                )));
            }
            if reqs.contains(&0) {
                return Err(Error::InvalidWorkload(format!(
                    "PAN {} has a zero-slot request",
                    p + 1
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Single,
    Static,
    Dynamic,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Single, Scheme::Static, Scheme::Dynamic];

    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Single => "single",
            Scheme::Static => "static",
            Scheme::Dynamic => "dynamic",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Makespan of one PAN in one active cycle under one scheme.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MakespanRow {
    /// Zero-based PAN index (config order).
    pub pan: usize,
    pub cell: CellIndex,
    /// Zero-based elementary cycle.
    pub cycle: usize,
    pub channels: usize,
    pub makespan: u64,
    /// Reduction against the single-channel makespan of the same PAN/cycle.
    pub delay_decrease_percent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchemeReport {
    pub scheme: Scheme,
    pub rows: Vec<MakespanRow>,
    /// Largest channel count each PAN receives over the major cycle.
    pub max_channels: Vec<usize>,
}

/// Everything [`Evaluator::compare`] produces.
#[derive(Debug, Clone)]
pub struct Comparison {
    pub reports: Vec<SchemeReport>,
    pub k_static: usize,
    pub allocation: AllocationMatrix,
}

impl Comparison {
    pub fn report(&self, scheme: Scheme) -> &SchemeReport {
        self.reports
            .iter()
            .find(|r| r.scheme == scheme)
            .expect("all schemes are reported")
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Evaluator {
    pub solver: ZykovSolver,
}

impl Evaluator {
    pub fn new(solver: ZykovSolver) -> Self {
        Evaluator { solver }
    }

    pub fn compare(
        &self,
        lattice: &Lattice,
        configs: &[SuperframeConfig],
        plan: &ChannelPlan,
        scenario: &RequestScenario,
    ) -> Result<Comparison> {
        scenario.validate(configs.len())?;
        let allocator = StaticAllocator::new(self.solver);
        let k_static = allocator.allocate_data(lattice, plan)?.k_static;
        let allocation = DynamicAllocator::new(self.solver).allocate(lattice, configs, plan)?;

        let reports = Scheme::ALL
            .into_iter()
            .map(|scheme| {
                let channels_for = |pan: usize, cycle: usize| match scheme {
                    Scheme::Single => 1,
                    Scheme::Static => k_static,
                    Scheme::Dynamic => allocation.entry(pan, cycle).k,
                };
                let mut rows = Vec::new();
                let mut max_channels = vec![0; configs.len()];
                for (pan, cfg) in configs.iter().enumerate() {
                    let requests = &scenario.per_pan[pan];
                    let baseline = makespan(requests, 1);
                    for cycle in 0..allocation.cycles() {
                        if !allocation.entry(pan, cycle).active {
                            continue;
                        }
                        let channels = channels_for(pan, cycle);
                        let slots = makespan(requests, channels);
                        max_channels[pan] = max_channels[pan].max(channels);
                        rows.push(MakespanRow {
                            pan,
                            cell: cfg.cell,
                            cycle,
                            channels,
                            makespan: slots,
                            delay_decrease_percent: delay_decrease_percent(baseline, slots)?,
                        });
                    }
                }
                Ok(SchemeReport {
                    scheme,
                    rows,
                    max_channels,
                })
            })
            .collect::<Result<Vec<_>>>()?;

        Ok(Comparison {
            reports,
            k_static,
            allocation,
        })
    }
}

pub fn compare_schemes(
    lattice: &Lattice,
    configs: &[SuperframeConfig],
    plan: &ChannelPlan,
    scenario: &RequestScenario,
) -> Result<Vec<SchemeReport>> {
    Evaluator::default()
        .compare(lattice, configs, plan, scenario)
        .map(|c| c.reports)
}
