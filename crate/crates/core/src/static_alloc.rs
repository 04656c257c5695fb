//! Static allocation: one control channel per cell, and a fixed group of
//! `K` data channels per cell.
//!
//! Colors map onto channels in sorted (channel, code) order: control color
//! `k` takes the `k`-th control channel, data color `k` takes the `k`-th run
//! of `K` data channels.

use std::collections::BTreeMap;

use crate::coloring::{pattern_coloring, Coloring, ZykovSolver};
use crate::error::{Error, Result};
use crate::graph::lattice_graph;
use crate::lattice::{CellIndex, ChannelKind, Lattice};
use crate::spectrum::{partition_channels, ChannelPlan, LogicalChannel};

#[derive(Debug, Clone, PartialEq)]
pub struct ControlAllocation {
    pub coloring: Coloring,
    pub channels: BTreeMap<CellIndex, LogicalChannel>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DataAllocation {
    pub coloring: Coloring,
    /// Channels granted to each cell; every group has `k_static` entries.
    pub groups: BTreeMap<CellIndex, Vec<LogicalChannel>>,
    pub k_static: usize,
    /// Data channels left over after cutting `chi` equal groups.
    pub unassigned: Vec<LogicalChannel>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StaticAllocation {
    pub control: ControlAllocation,
    pub data: DataAllocation,
}

impl StaticAllocation {
    pub fn chi_control(&self) -> usize {
        self.control.coloring.num_colors()
    }

    pub fn chi_data(&self) -> usize {
        self.data.coloring.num_colors()
    }

    pub fn k_static(&self) -> usize {
        self.data.k_static
    }
}

/// Static allocator. Lattices up to the solver's vertex cap are colored
/// exactly; larger ones fall back to the periodic pattern coloring.
#[derive(Debug, Clone, Copy, Default)]
pub struct StaticAllocator {
    pub solver: ZykovSolver,
}

impl StaticAllocator {
    pub fn new(solver: ZykovSolver) -> Self {
        StaticAllocator { solver }
    }

    pub fn color(&self, lattice: &Lattice, kind: ChannelKind) -> Result<Coloring> {
        if lattice.len() <= self.solver.vertex_cap {
            let graph = lattice_graph(lattice, kind.reuse_metric());
            Ok(self.solver.solve(&graph)?.coloring)
        } else {
            Ok(pattern_coloring(lattice, kind))
        }
    }

    pub fn allocate_control(
        &self,
        lattice: &Lattice,
        plan: &ChannelPlan,
    ) -> Result<ControlAllocation> {
        let coloring = self.color(lattice, ChannelKind::Control)?;
        if coloring.num_colors() > plan.control.len() {
            return Err(Error::InsufficientSpectrum {
                kind: "control",
                colors: coloring.num_colors(),
                available: plan.control.len(),
            });
        }
        let channels = coloring.iter().map(|(c, k)| (c, plan.control[k])).collect();
        Ok(ControlAllocation { coloring, channels })
    }

    pub fn allocate_data(&self, lattice: &Lattice, plan: &ChannelPlan) -> Result<DataAllocation> {
        let coloring = self.color(lattice, ChannelKind::Data)?;
        let chi = coloring.num_colors();
        if chi > plan.data.len() {
            return Err(Error::InsufficientSpectrum {
                kind: "data",
                colors: chi,
                available: plan.data.len(),
            });
        }
        let k_static = plan.data.len() / chi.max(1);
        let parts = partition_channels(&plan.data, chi, k_static)?;
        let groups = coloring
            .iter()
            .map(|(c, k)| (c, parts.groups[k].clone()))
            .collect();
        Ok(DataAllocation {
            coloring,
            groups,
            k_static,
            unassigned: parts.unassigned,
        })
    }

    pub fn allocate(&self, lattice: &Lattice, plan: &ChannelPlan) -> Result<StaticAllocation> {
        Ok(StaticAllocation {
            control: self.allocate_control(lattice, plan)?,
            data: self.allocate_data(lattice, plan)?,
        })
    }
}

pub fn allocate_control(lattice: &Lattice, plan: &ChannelPlan) -> Result<ControlAllocation> {
    StaticAllocator::default().allocate_control(lattice, plan)
}

pub fn allocate_static_data(lattice: &Lattice, plan: &ChannelPlan) -> Result<DataAllocation> {
    StaticAllocator::default().allocate_data(lattice, plan)
}
