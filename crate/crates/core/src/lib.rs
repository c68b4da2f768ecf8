//! Detection of commutative argument subsets in factors, plus the colour
//! passing that groups indistinguishable parts of a factor graph.
//!
//! ```
//! use decor::{decor, max_candidate, Factor, RandomVariable};
//!
//! let args = ["R1", "R2", "R3"].map(RandomVariable::boolean).to_vec();
//! let phi = Factor::from_strs("phi", args, &["1", "2", "2", "3", "4", "5", "5", "6"])?;
//! let best = max_candidate(&decor(&phi).candidates);
//! assert_eq!(best.unwrap().positions(), vec![1, 2]); // R2 and R3
//! # Ok::<(), decor::Error>(())
//! ```

pub mod bench;
pub mod buckets;
pub mod candidates;
pub mod colour;
pub mod commutative;
pub mod crv;
pub mod deadline;
pub mod error;
pub mod factor;
pub mod graph;
pub mod naive;
pub mod potential;
pub mod search;

pub use candidates::{max_candidate, CandidateAntichain, CandidateSet};
pub use colour::{run_cpr, Evidence, Grouping};
pub use commutative::is_commutative;
pub use crv::{compress_to_crv, expand_crv, CompressedFactor};
pub use deadline::{Deadline, Timeout};
pub use error::{Error, Result};
pub use factor::{Assignment, Factor, RandomVariable};
pub use graph::FactorGraph;
pub use naive::{naive_max_commutative, NaiveOutcome};
pub use potential::Potential;
pub use search::{decor, decor_with_deadline, DecorOutcome, DecorStats};
