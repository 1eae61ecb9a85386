//! Exact and asymptotic success probabilities for classical, quantum and
//! extended quantum color coding.
//!
//! Alice labels `n` boxes with a code drawn from `d` colors, Bob permutes the
//! boxes uniformly at random, and Alice guesses the permutation. The crate
//! computes her optimal success probability for
//!
//! * the classical scheme (balanced painting),
//! * the quantum scheme with a code state on `(C^d)^{⊗n}`,
//! * the extended scheme where the code state may be entangled with an
//!   ancilla of dimension `|R|` (or an unbounded ancilla),
//!
//! from the representation theory of the symmetric group, and checks those
//! closed forms against Monte Carlo sampling of the Plancherel measure, the
//! Tracy–Widom limit law, and a brute-force construction of the optimal
//! covariant measurement at small sizes.

pub mod error;
pub mod partitions;
pub mod quantumoracle;
pub mod repmeasure;
pub mod sampler;
pub mod success;
pub mod tracywidom;

pub use error::{Error, Result};
pub use partitions::{CellStats, Partition};
pub use repmeasure::{LogRepData, RepData};
pub use sampler::{Estimator, SampleRun};
pub use success::{Ancilla, Scheme, SchemeQuery, SuccessReport};
