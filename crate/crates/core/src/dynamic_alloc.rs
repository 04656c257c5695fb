//! Duty-cycle aware data-channel allocation.
//!
//! Each PAN runs a superframe with active period `SD = 2^SO` inside a beacon
//! interval `BI = 2^BO` (both in base superframe units). Time is cut into
//! elementary cycles of length `SD_min`; the pattern repeats every
//! `BI_maj = max BI`, i.e. every `U = BI_maj / SD_min` elementary cycles.
//!
//! For every elementary cycle only the active PANs compete for spectrum. The
//! active interference graph is split into connected components, each
//! component is colored exactly, and a PAN in a component needing `chi`
//! colors receives `floor(|data| / chi)` channels.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::coloring::ZykovSolver;
use crate::error::{Error, Result};
use crate::graph::build_interference_graph;
use crate::lattice::{CellIndex, Lattice, DATA_REUSE_METRIC};
use crate::spectrum::{partition_channels, ChannelPlan, LogicalChannel};

/// Largest accepted SO/BO exponent (the beacon order range of 802.15.4).
pub const MAX_ORDER: u32 = 14;

/// Superframe parameters of one PAN coordinator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuperframeConfig {
    pub cell: CellIndex,
    pub so: u32,
    pub bo: u32,
    /// Start offset of the first active period, in base superframe units.
    #[serde(default)]
    pub phase: u64,
}

impl SuperframeConfig {
    pub fn new(cell: CellIndex, so: u32, bo: u32) -> Self {
        SuperframeConfig {
            cell,
            so,
            bo,
            phase: 0,
        }
    }

    pub fn with_phase(mut self, phase: u64) -> Self {
        self.phase = phase;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.bo > MAX_ORDER {
            return Err(Error::ExponentOverflow(self.bo));
        }
        if self.so > self.bo {
            return Err(Error::InvalidSuperframe {
                cell: self.cell,
                so: self.so,
                bo: self.bo,
            });
        }
        Ok(())
    }

    pub fn superframe_duration(&self) -> u64 {
        1 << self.so
    }

    pub fn beacon_interval(&self) -> u64 {
        1 << self.bo
    }

    /// Whether the PAN is active during elementary cycle `t` (0-based).
    pub fn is_active(&self, t: u64, sd_min: u64) -> bool {
        let bi = self.beacon_interval() as i128;
        let offset = (t as i128 * sd_min as i128 - self.phase as i128).rem_euclid(bi);
        offset < self.superframe_duration() as i128
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CycleStructure {
    /// Major cycle: the longest beacon interval.
    pub bi_maj: u64,
    /// Elementary cycle: the shortest active period.
    pub sd_min: u64,
    /// Elementary cycles per major cycle.
    pub u_cycles: u64,
}

fn validate_all(configs: &[SuperframeConfig]) -> Result<()> {
    if configs.is_empty() {
        return Err(Error::NoSuperframes);
    }
    let mut seen = BTreeSet::new();
    for cfg in configs {
        cfg.validate()?;
        if !seen.insert(cfg.cell) {
            return Err(Error::DuplicateCell(cfg.cell));
        }
    }
    Ok(())
}

pub fn cycle_structure(configs: &[SuperframeConfig]) -> Result<CycleStructure> {
    validate_all(configs)?;
    let bi_maj = configs
        .iter()
        .map(SuperframeConfig::beacon_interval)
        .max()
        .expect("non-empty");
    let sd_min = configs
        .iter()
        .map(SuperframeConfig::superframe_duration)
        .min()
        .expect("non-empty");
    Ok(CycleStructure {
        bi_maj,
        sd_min,
        u_cycles: bi_maj / sd_min,
    })
}

/// Activity of every PAN (rows, in config order) in every elementary cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActivityMatrix {
    pub active: Vec<Vec<bool>>,
}

impl ActivityMatrix {
    pub fn cycles(&self) -> usize {
        self.active.first().map_or(0, Vec::len)
    }

    pub fn active_in(&self, cycle: usize) -> impl Iterator<Item = usize> + '_ {
        self.active
            .iter()
            .enumerate()
            .filter(move |(_, row)| row[cycle])
            .map(|(p, _)| p)
    }
}

pub fn activity_matrix(configs: &[SuperframeConfig], cs: &CycleStructure) -> ActivityMatrix {
    activity_for_cycles(configs, cs.sd_min, cs.u_cycles)
}

fn activity_for_cycles(configs: &[SuperframeConfig], sd_min: u64, cycles: u64) -> ActivityMatrix {
    ActivityMatrix {
        active: configs
            .iter()
            .map(|cfg| (0..cycles).map(|t| cfg.is_active(t, sd_min)).collect())
            .collect(),
    }
}

/// One (PAN, cycle) cell of the allocation matrix.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct CycleEntry {
    pub active: bool,
    /// Colors needed by the PAN's active component (0 when inactive).
    pub chi: usize,
    /// Channels granted (0 when inactive).
    pub k: usize,
    pub channels: Vec<LogicalChannel>,
}

/// Data channels per PAN per elementary cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AllocationMatrix {
    pub pans: Vec<CellIndex>,
    pub structure: CycleStructure,
    /// `entries[pan][cycle]`.
    pub entries: Vec<Vec<CycleEntry>>,
    /// Chromatic number of each cycle's whole active graph.
    pub per_cycle_chi: Vec<usize>,
    /// Smallest channel count among active PANs; `None` for idle cycles.
    pub per_cycle_k: Vec<Option<usize>>,
}

impl AllocationMatrix {
    pub fn cycles(&self) -> usize {
        self.per_cycle_chi.len()
    }

    pub fn entry(&self, pan: usize, cycle: usize) -> &CycleEntry {
        &self.entries[pan][cycle]
    }

    /// Largest channel count a PAN ever receives.
    pub fn max_channels(&self, pan: usize) -> usize {
        self.entries[pan].iter().map(|e| e.k).max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct DynamicAllocator {
    pub solver: ZykovSolver,
}

impl DynamicAllocator {
    pub fn new(solver: ZykovSolver) -> Self {
        DynamicAllocator { solver }
    }

    /// One major cycle.
    pub fn allocate(
        &self,
        lattice: &Lattice,
        configs: &[SuperframeConfig],
        plan: &ChannelPlan,
    ) -> Result<AllocationMatrix> {
        let cs = cycle_structure(configs)?;
        self.allocate_cycles(lattice, configs, plan, cs.u_cycles)
    }

    /// The first `cycles` elementary cycles (may exceed one major cycle).
    pub fn allocate_cycles(
        &self,
        lattice: &Lattice,
        configs: &[SuperframeConfig],
        plan: &ChannelPlan,
        cycles: u64,
    ) -> Result<AllocationMatrix> {
        let structure = cycle_structure(configs)?;
        for cfg in configs {
            if !lattice.contains(cfg.cell) {
                return Err(Error::NotInLattice(cfg.cell));
            }
        }
        let activity = activity_for_cycles(configs, structure.sd_min, cycles);
        let pans: Vec<CellIndex> = configs.iter().map(|c| c.cell).collect();

        let mut entries = vec![Vec::with_capacity(cycles as usize); pans.len()];
        let mut per_cycle_chi = Vec::with_capacity(cycles as usize);
        let mut per_cycle_k = Vec::with_capacity(cycles as usize);
        // identical active sets share one solve
        let mut memo: HashMap<Vec<usize>, (Vec<CycleEntry>, usize)> = HashMap::new();

        for t in 0..cycles as usize {
            let active: Vec<usize> = activity.active_in(t).collect();
            if !memo.contains_key(&active) {
                let solved = self.allocate_active(lattice, &pans, &active, plan)?;
                memo.insert(active.clone(), solved);
            }
            let (row, chi) = &memo[&active];
            for (p, entry) in row.iter().enumerate() {
                entries[p].push(entry.clone());
            }
            per_cycle_chi.push(*chi);
            per_cycle_k.push(row.iter().filter(|e| e.active).map(|e| e.k).min());
        }

        Ok(AllocationMatrix {
            pans,
            structure,
            entries,
            per_cycle_chi,
            per_cycle_k,
        })
    }

    /// Entries for every PAN given the set of active PAN indices, plus the
    /// chromatic number of the active graph.
    fn allocate_active(
        &self,
        lattice: &Lattice,
        pans: &[CellIndex],
        active: &[usize],
        plan: &ChannelPlan,
    ) -> Result<(Vec<CycleEntry>, usize)> {
        let mut row = vec![CycleEntry::default(); pans.len()];
        let cells: Vec<CellIndex> = active.iter().map(|&p| pans[p]).collect();
        let graph = build_interference_graph(lattice, &cells, DATA_REUSE_METRIC)?;
        let pan_of: HashMap<CellIndex, usize> = active.iter().map(|&p| (pans[p], p)).collect();

        let mut chi_all = 0;
        for comp in graph.components() {
            let sub = graph.induced(&comp);
            let coloring = self.solver.solve(&sub)?.coloring;
            let chi = coloring.num_colors();
            if chi > plan.data.len() {
                return Err(Error::InsufficientSpectrum {
                    kind: "data",
                    colors: chi,
                    available: plan.data.len(),
                });
            }
            chi_all = chi_all.max(chi);
            let k = plan.data.len() / chi;
            let groups = partition_channels(&plan.data, chi, k)?.groups;
            for (cell, color) in coloring.iter() {
                row[pan_of[&cell]] = CycleEntry {
                    active: true,
                    chi,
                    k,
                    channels: groups[color].clone(),
                };
            }
        }
        Ok((row, chi_all))
    }
}

pub fn allocate_dynamic(
    lattice: &Lattice,
    configs: &[SuperframeConfig],
    plan: &ChannelPlan,
) -> Result<AllocationMatrix> {
    DynamicAllocator::default().allocate(lattice, configs, plan)
}
