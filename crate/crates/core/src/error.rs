use thiserror::Error;

use crate::lattice::CellIndex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cell {0} is not part of the lattice")]
    NotInLattice(CellIndex),

    #[error("cell {0} violates the lattice parity rule (i + j must be even)")]
    InvalidParity(CellIndex),

    #[error("cell {0} appears more than once")]
    DuplicateCell(CellIndex),

    #[error("cell radius must be positive and finite, got {0}")]
    InvalidRadius(f64),

    #[error("channel table for {domain} contains no control channel")]
    InvalidDomainTable { domain: String },

    #[error("invalid logical channel (phy {phy_channel}, code {code})")]
    InvalidChannel { phy_channel: u8, code: u8 },

    #[error("need {required} channels but only {available} are available")]
    Capacity { required: usize, available: usize },

    #[error(
        "insufficient {kind} spectrum: {colors} colors needed, {available} channels available"
    )]
    InsufficientSpectrum {
        kind: &'static str,
        colors: usize,
        available: usize,
    },

    #[error(
        "graph has {vertices} vertices, above the exact solver cap of {cap}; \
         use pattern_coloring or greedy_coloring instead"
    )]
    SizeLimit { vertices: usize, cap: usize },

    #[error("coloring has no color for vertex {0}")]
    IncompleteColoring(CellIndex),

    #[error("superframe for cell {cell}: SO ({so}) exceeds BO ({bo})")]
    InvalidSuperframe { cell: CellIndex, so: u32, bo: u32 },

    #[error("superframe exponent {0} is too large")]
    ExponentOverflow(u32),

    #[error("no superframe configurations given")]
    NoSuperframes,

    #[error("invalid workload: {0}")]
    InvalidWorkload(String),

    #[error("improved delay ({improved}) exceeds baseline ({baseline})")]
    Ordering { baseline: u64, improved: u64 },
}
