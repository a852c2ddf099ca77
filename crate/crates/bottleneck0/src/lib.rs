//! Exact dimension-zero bottleneck distance between persistence diagrams.
//!
//! The fast path ([`bottleneck0`]) resolves the distance through a case
//! analysis on rank-paired death times instead of solving a bipartite
//! matching problem, which makes million-point diagrams comparable in well
//! under a second. Two independent exact oracles ([`oracle`]) certify it:
//! exhaustive bijection search on tiny inputs and threshold matching with
//! Hopcroft–Karp on medium inputs. Seeded simulation ([`sim`]), a timing and
//! regression-fit harness ([`bench`]), and pairwise distance matrices
//! ([`features`]) round out the toolkit.
//!
//! ```
//! use bottleneck0::{bottleneck0, PersistenceDiagram};
//!
//! let a = PersistenceDiagram::from_deaths([10.0, 2.0]).unwrap();
//! let b = PersistenceDiagram::from_deaths([4.0, 1.0]).unwrap();
//! assert_eq!(bottleneck0(&a, &b).value, 5.0);
//! ```

pub mod bench;
pub mod diagram;
pub mod distance;
pub mod features;
pub mod oracle;
pub mod sim;
pub mod stats;
pub mod verify;

pub use diagram::{parse_diagram, DiagramFormat, PersistenceDiagram, ValidationPolicy};
pub use distance::{bottleneck0, trace_bottleneck0, CaseTag, DistanceResult, TraceStep};
