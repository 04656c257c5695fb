//! Channel allocation for hexagonal-cell wireless sensor networks.
//!
//! Every cell hosts one PAN coordinator. Control channels are assigned once
//! per cell; data channels are assigned either statically (a fixed group per
//! cell) or per elementary cycle, following which PANs are awake.
//!
//! * [`lattice`]: cell coordinates, the integer reuse metric, E/F/G sets
//! * [`spectrum`]: logical channels and regulatory-domain tables
//! * [`graph`]: interference graphs
//! * [`coloring`]: exact, greedy and closed-form colorings
//! * [`static_alloc`], [`dynamic_alloc`]: the two allocation schemes
//! * [`eval`]: slot makespans and scheme comparison
//! * [`reference`]: the 12-PAN evaluation scenario

pub mod coloring;
pub mod dynamic_alloc;
pub mod error;
pub mod eval;
pub mod graph;
pub mod lattice;
pub mod reference;
pub mod spectrum;
pub mod static_alloc;

pub use coloring::{
    brute_force_chromatic, chromatic_coloring, greedy_clique, greedy_coloring, pattern_coloring,
    verify_coloring, Coloring, ZykovSolver,
};
pub use dynamic_alloc::{
    activity_matrix, allocate_dynamic, cycle_structure, ActivityMatrix, AllocationMatrix,
    CycleEntry, CycleStructure, DynamicAllocator, SuperframeConfig,
};
pub use error::{Error, Result};
pub use eval::{
    compare_schemes, delay_decrease_percent, makespan, Comparison, Evaluator, MakespanRow,
    RequestScenario, Scheme, SchemeReport,
};
pub use graph::{build_interference_graph, lattice_graph, InterferenceGraph};
pub use lattice::{
    lattice_metric, CellIndex, ChannelKind, Lattice, NeighborhoodPartition, Point,
    CONTROL_REUSE_METRIC, DATA_REUSE_METRIC,
};
pub use spectrum::{
    channel_plan, default_domain, partition_channels, ChannelGroups, ChannelPlan, DomainName,
    LogicalChannel, RegulatoryDomain,
};
pub use static_alloc::{
    allocate_control, allocate_static_data, ControlAllocation, DataAllocation, StaticAllocation,
    StaticAllocator,
};
