//! Sets without tangents in PG(2,q), exterior sets of conics, and the
//! stopping sets of the LDPC code of a projective plane.

pub mod error;
pub mod exterior;
pub mod cli;
pub mod codes;
pub mod conic;
pub mod constructions;
pub mod field;
pub mod linalg;
pub mod plane;
pub mod search;
pub mod tangency;

pub use error::{Error, Result};
pub use field::{Fe, Field, FieldSpec, Modulus, QuadChar};
pub use plane::{Line, Plane, Point, PointSet, PointSetFile};
