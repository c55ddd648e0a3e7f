//! Exact outer billiard outside the regular decagon.

pub mod billiard;
pub mod cyclotomic;
pub mod dynamics;
pub mod geometry;
pub mod lattice;
pub mod partition;
pub mod periods;
pub mod report;
pub mod returns;
pub mod sampling;
pub mod selfsim;
pub mod suites;
pub mod symbolic;

pub use billiard::{MapChoice, Table};
pub use cyclotomic::{CycNum, FieldError, Rational, Sign};
pub use dynamics::{Halt, PiecewiseIsometry};
pub use geometry::{Area, ConvexRegion, Line, Location, MapKind, PlanarMap, Point, Polygon, Region};
