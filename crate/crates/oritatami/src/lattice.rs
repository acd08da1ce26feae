//! Triangular lattice geometry: points, the six-neighbor relation, path
//! validity, and the adjacency-preserving symmetries used by the folding
//! constructions.

use std::fmt;
use thiserror::Error;

/// A vertex of the triangular lattice, addressed by integer coordinates.
///
/// Adjacency is the six-offset relation: `(x,y)` touches `(x±1,y)`,
/// `(x,y±1)`, `(x+1,y+1)` and `(x-1,y-1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub x: i32,
    pub y: i32,
}

impl Point {
    pub const fn new(x: i32, y: i32) -> Self {
        Point { x, y }
    }

    /// Cartesian coordinates of this vertex in the standard drawing, with
    /// basis vectors at 0° and 60°.
    pub fn to_cartesian(self) -> (f64, f64) {
        let x = self.x as f64;
        let y = self.y as f64;
        (x - y * 0.5, y * (3.0f64).sqrt() * 0.5)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// The six neighbor offsets of the lattice, in a fixed enumeration order.
pub const NEIGHBOR_OFFSETS: [(i32, i32); 6] = [(-1, 0), (1, 0), (0, 1), (1, 1), (-1, -1), (0, -1)];

/// The six lattice neighbors of `p`, in `NEIGHBOR_OFFSETS` order.
pub fn neighbors(p: Point) -> [Point; 6] {
    let mut out = [p; 6];
    for (slot, (dx, dy)) in out.iter_mut().zip(NEIGHBOR_OFFSETS) {
        *slot = Point::new(p.x + dx, p.y + dy);
    }
    out
}

/// Whether two lattice points are adjacent.
pub fn adjacent(a: Point, b: Point) -> bool {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    NEIGHBOR_OFFSETS.contains(&(dx, dy))
}

/// Graph distance between two lattice points.
pub fn distance(a: Point, b: Point) -> u32 {
    let dx = (b.x - a.x) as i64;
    let dy = (b.y - a.y) as i64;
    ((dx.abs() + dy.abs() + (dx - dy).abs()) / 2) as u32
}

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("points at indices {index} and {} are not lattice-adjacent", index + 1)]
pub struct NonPathError {
    /// Index of the first point of the offending consecutive pair.
    pub index: usize,
}

/// True iff all points are pairwise distinct. Errors if some consecutive
/// pair is not adjacent (the input is not a lattice path at all).
pub fn is_self_avoiding(path: &[Point]) -> Result<bool, NonPathError> {
    for (i, pair) in path.windows(2).enumerate() {
        if !adjacent(pair[0], pair[1]) {
            return Err(NonPathError { index: i });
        }
    }
    let mut seen = std::collections::HashSet::with_capacity(path.len());
    Ok(path.iter().all(|p| seen.insert(*p)))
}

/// The point maps that preserve the six-neighbor relation and appear in the
/// folding constructions: identity, mirroring across a vertical axis of the
/// drawn lattice, and rotation by 180°.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymmetryKind {
    Identity,
    VerticalMirror,
    Rotate180,
}

/// A lattice symmetry: one of the three kinds composed with a translation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LatticeSymmetry {
    pub kind: SymmetryKind,
    pub offset: (i32, i32),
}

impl LatticeSymmetry {
    pub const fn identity() -> Self {
        LatticeSymmetry {
            kind: SymmetryKind::Identity,
            offset: (0, 0),
        }
    }

    pub const fn vertical_mirror(offset: (i32, i32)) -> Self {
        LatticeSymmetry {
            kind: SymmetryKind::VerticalMirror,
            offset,
        }
    }

    pub const fn rotate_180(offset: (i32, i32)) -> Self {
        LatticeSymmetry {
            kind: SymmetryKind::Rotate180,
            offset,
        }
    }

    /// Apply the symmetry to a point.
    ///
    /// In drawn coordinates the embedding is `(x - y/2, y·√3/2)`; negating
    /// the drawn x-axis gives the coordinate map `(x,y) ↦ (y-x, y)`, which
    /// is the unique vertical mirror fixing the drawn y-axis.
    pub fn apply(&self, p: Point) -> Point {
        let q = match self.kind {
            SymmetryKind::Identity => p,
            SymmetryKind::VerticalMirror => Point::new(p.y - p.x, p.y),
            SymmetryKind::Rotate180 => Point::new(-p.x, -p.y),
        };
        Point::new(q.x + self.offset.0, q.y + self.offset.1)
    }
}
