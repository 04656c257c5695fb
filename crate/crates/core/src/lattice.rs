//! Hexagonal cell lattice.
//!
//! Cells are addressed by an index pair `(i, j)` with `i + j` even. The
//! center of cell `(i, j)` sits at `(x0 + i * 3R/2, y0 + j * sqrt(3) R/2)`,
//! so two neighbouring hexagons differ by `(0, ±2)` or `(±1, ±1)`.
//!
//! Adjacency decisions never go through floating point: the integer
//! [`lattice_metric`] `3 di^2 + dj^2` is proportional to the squared center
//! distance (`d^2 = 3R^2/4 * metric`) and is compared against the integer
//! reuse thresholds directly.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Metric threshold below which two cells may not share a control channel
/// (reuse distance `2 sqrt(3) R`).
pub const CONTROL_REUSE_METRIC: u64 = 16;

/// Metric threshold below which two cells may not share a data channel
/// (reuse distance `3 R`).
pub const DATA_REUSE_METRIC: u64 = 12;

/// Which of the two channel families a reuse rule applies to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelKind {
    Control,
    Data,
}

impl ChannelKind {
    pub fn reuse_metric(self) -> u64 {
        match self {
            ChannelKind::Control => CONTROL_REUSE_METRIC,
            ChannelKind::Data => DATA_REUSE_METRIC,
        }
    }

    /// Minimum reuse distance between cell centers, in units of the cell radius.
    pub fn reuse_distance_factor(self) -> f64 {
        match self {
            ChannelKind::Control => 2.0 * 3f64.sqrt(),
            ChannelKind::Data => 3.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ChannelKind::Control => "control",
            ChannelKind::Data => "data",
        }
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Lattice index of a cell. Ordered row-major: by `j`, then by `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "(i32, i32)", into = "(i32, i32)")]
pub struct CellIndex {
    pub i: i32,
    pub j: i32,
}

impl CellIndex {
    pub const ORIGIN: CellIndex = CellIndex { i: 0, j: 0 };

    /// Creates an index without checking the parity rule.
    pub const fn new(i: i32, j: i32) -> Self {
        CellIndex { i, j }
    }

    /// Creates an index, rejecting pairs with odd `i + j`.
    pub fn checked(i: i32, j: i32) -> Result<Self> {
        let c = CellIndex { i, j };
        if c.has_valid_parity() {
            Ok(c)
        } else {
            Err(Error::InvalidParity(c))
        }
    }

    pub fn has_valid_parity(self) -> bool {
        (self.i + self.j).rem_euclid(2) == 0
    }

    pub fn offset(self, di: i32, dj: i32) -> Self {
        CellIndex::new(self.i + di, self.j + dj)
    }
}

impl Ord for CellIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.j, self.i).cmp(&(other.j, other.i))
    }
}

impl PartialOrd for CellIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<(i32, i32)> for CellIndex {
    fn from((i, j): (i32, i32)) -> Self {
        CellIndex::new(i, j)
    }
}

impl From<CellIndex> for (i32, i32) {
    fn from(c: CellIndex) -> Self {
        (c.i, c.j)
    }
}

impl fmt::Display for CellIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "(f64, f64)", into = "(f64, f64)")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Point { x, y }
    }
}

impl From<Point> for (f64, f64) {
    fn from(p: Point) -> Self {
        (p.x, p.y)
    }
}

/// `3 (di)^2 + (dj)^2` for the index difference of two cells.
pub fn lattice_metric(a: CellIndex, b: CellIndex) -> u64 {
    let di = (a.i as i64 - b.i as i64).unsigned_abs();
    let dj = (a.j as i64 - b.j as i64).unsigned_abs();
    3 * di * di + dj * dj
}

/// A finite set of hexagonal cells sharing one radius and origin.
#[derive(Debug, Clone)]
pub struct Lattice {
    radius: f64,
    origin: Point,
    index_bound: u32,
    cells: Vec<CellIndex>,
    positions: HashMap<CellIndex, usize>,
}

impl Lattice {
    /// Every parity-valid index in `[-N, N]^2`.
    pub fn new(index_bound: u32, radius: f64, origin: Point) -> Result<Self> {
        let n = index_bound as i32;
        let cells = (-n..=n)
            .flat_map(|j| (-n..=n).map(move |i| CellIndex::new(i, j)))
            .filter(|c| c.has_valid_parity())
            .collect();
        Self::assemble(cells, index_bound, radius, origin)
    }

    /// A lattice over an explicit cell list (irregular deployments).
    ///
    /// The index bound is the largest absolute index in the list. Cells are
    /// stored in row-major order regardless of the input order.
    pub fn from_cells(cells: &[CellIndex], radius: f64, origin: Point) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for &c in cells {
            if !c.has_valid_parity() {
                return Err(Error::InvalidParity(c));
            }
            if !seen.insert(c) {
                return Err(Error::DuplicateCell(c));
            }
        }
        let bound = cells
            .iter()
            .map(|c| c.i.unsigned_abs().max(c.j.unsigned_abs()))
            .max()
            .unwrap_or(0);
        Self::assemble(seen.into_iter().collect(), bound, radius, origin)
    }

    fn assemble(
        mut cells: Vec<CellIndex>,
        index_bound: u32,
        radius: f64,
        origin: Point,
    ) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidRadius(radius));
        }
        cells.sort();
        let positions = cells.iter().enumerate().map(|(k, &c)| (c, k)).collect();
        Ok(Lattice {
            radius,
            origin,
            index_bound,
            cells,
            positions,
        })
    }

    /// The 12-cell block (3 columns by 4 rows) used as the reference network.
    pub fn twelve_cell_fixture(radius: f64) -> Self {
        Self::from_cells(&twelve_cell_layout(), radius, Point::default())
            .expect("fixture layout is valid")
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn origin(&self) -> Point {
        self.origin
    }

    pub fn index_bound(&self) -> u32 {
        self.index_bound
    }

    pub fn cells(&self) -> &[CellIndex] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, c: CellIndex) -> bool {
        self.positions.contains_key(&c)
    }

    /// Position of `c` in [`Lattice::cells`].
    pub fn position(&self, c: CellIndex) -> Option<usize> {
        self.positions.get(&c).copied()
    }

    fn require(&self, c: CellIndex) -> Result<()> {
        if self.contains(c) {
            Ok(())
        } else {
            Err(Error::NotInLattice(c))
        }
    }

    pub fn center_of(&self, c: CellIndex) -> Result<Point> {
        self.require(c)?;
        Ok(Point::new(
            self.origin.x + c.i as f64 * 1.5 * self.radius,
            self.origin.y + c.j as f64 * 3f64.sqrt() / 2.0 * self.radius,
        ))
    }

    /// Euclidean distance between two cell centers.
    pub fn distance(&self, a: CellIndex, b: CellIndex) -> Result<f64> {
        let pa = self.center_of(a)?;
        let pb = self.center_of(b)?;
        Ok((pa.x - pb.x).hypot(pa.y - pb.y))
    }

    /// Splits the lattice into cells strictly beyond (`E`), exactly at (`F`),
    /// and strictly inside (`G`) the metric threshold around `c`.
    pub fn neighborhood_sets(&self, c: CellIndex, threshold: u64) -> Result<NeighborhoodPartition> {
        self.require(c)?;
        let mut part = NeighborhoodPartition::default();
        for &other in &self.cells {
            let m = lattice_metric(c, other);
            match m.cmp(&threshold) {
                Ordering::Greater => part.e_set.insert(other),
                Ordering::Equal => part.f_set.insert(other),
                Ordering::Less => part.g_set.insert(other),
            };
        }
        Ok(part)
    }
}

/// Result of [`Lattice::neighborhood_sets`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NeighborhoodPartition {
    /// Cells that may reuse the channel with margin.
    pub e_set: BTreeSet<CellIndex>,
    /// Cells sitting exactly at the reuse threshold; reuse is allowed.
    pub f_set: BTreeSet<CellIndex>,
    /// Cells inside the no-reuse zone, including the center cell.
    pub g_set: BTreeSet<CellIndex>,
}

/// Cell list of the 12-cell reference block.
pub fn twelve_cell_layout() -> Vec<CellIndex> {
    [
        (0, 0),
        (0, 2),
        (0, 4),
        (0, 6),
        (1, 1),
        (1, 3),
        (1, 5),
        (1, 7),
        (2, 0),
        (2, 2),
        (2, 4),
        (2, 6),
    ]
    .into_iter()
    .map(CellIndex::from)
    .collect()
}

/// A cell and its six hexagonal neighbours: the no-reuse zone for data
/// channels around `center`.
pub fn data_cluster(center: CellIndex) -> Vec<CellIndex> {
    HEX_NEIGHBOR_OFFSETS
        .iter()
        .map(|&(di, dj)| center.offset(di, dj))
        .chain(std::iter::once(center))
        .collect()
}

/// Index offsets of the six adjacent hexagons (metric 4).
pub const HEX_NEIGHBOR_OFFSETS: [(i32, i32); 6] =
    [(0, 2), (0, -2), (1, 1), (-1, -1), (-1, 1), (1, -1)];
