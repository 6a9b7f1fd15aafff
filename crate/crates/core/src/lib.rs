//! Biregular girth-5 cages from the incidence graphs of the biaffine and
//! affine planes over GF(q), with the surgery operations used to build them
//! and an independent certifier.

pub mod families;
pub mod gf;
pub mod graph;
pub mod incidence;
pub mod io;
pub mod surgery;
pub mod sweep;
pub mod verify;

pub use families::{build, Construction, Family, FamilyError, FamilyId, FamilyKind};
pub use gf::{FieldElement, FiniteField, GfError};
pub use graph::{BlockId, BlockedGraph, GraphError, Side, SimpleGraph, Slope, VertexLabel};
pub use io::{Format, Imported, IoError};
pub use sweep::{certify_construction, hypothesis_lines, run_sweep, SweepReport};
pub use verify::{certify, downs_lower_bound, girth, CageCertificate, Girth};
