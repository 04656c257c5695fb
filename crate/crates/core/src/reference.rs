//! The 12-PAN evaluation scenario on the 12-cell block.
//!
//! PAN numbering and superframe orders are a reconstruction chosen to
//! produce this major cycle (1-based elementary cycles, 14 data channels):
//!
//! | cycles           | active PANs                  | channels per PAN |
//! |------------------|------------------------------|------------------|
//! | 1, 2, 17, 18     | most PANs                    | 4                |
//! | 3, 4             | 3 and 11 (adjacent)          | 7                |
//! | 9, 25            | 1 and 2 (adjacent)           | 7                |
//! | 5-8              | 11 alone                     | 14               |
//! | 19, 20           | 3 alone                      | 14               |
//! | 10, 26           | 6 and 10 (at reuse distance) | 14               |
//!
//! PANs 6 and 10 start one base unit late; every other PAN starts at 0.

use crate::dynamic_alloc::SuperframeConfig;
use crate::lattice::CellIndex;

/// `(i, j, SO, BO, phase)` for PANs 1 through 12.
pub const REFERENCE_PANS: [(i32, i32, u32, u32, u64); 12] = [
    (0, 0, 0, 3, 0),
    (0, 2, 0, 3, 0),
    (0, 4, 2, 4, 0),
    (0, 6, 1, 4, 0),
    (1, 1, 1, 4, 0),
    (1, 3, 0, 3, 1),
    (1, 7, 1, 4, 0),
    (2, 0, 1, 4, 0),
    (2, 2, 1, 4, 0),
    (2, 6, 0, 3, 1),
    (1, 5, 3, 5, 0),
    (2, 4, 1, 4, 0),
];

pub fn reference_superframes() -> Vec<SuperframeConfig> {
    REFERENCE_PANS
        .iter()
        .map(|&(i, j, so, bo, phase)| {
            SuperframeConfig::new(CellIndex::new(i, j), so, bo).with_phase(phase)
        })
        .collect()
}
