//! Linear nonlocal games over finite abelian groups.
//!
//! A game is a table of targets `f(u, v)` in a group `G` and a question
//! distribution `q(u, v)`; the players win when `a + b = f(u, v)`.

pub mod algebra;
pub mod bounds;
pub mod error;
pub mod format;
pub mod games;
pub mod nlc;
pub mod numerics;
pub mod selftest;

pub use algebra::{FieldElement, FiniteAbelianGroup, FiniteField, GroupElement, OutputGroup};
pub use bounds::{analyze, classical_value, quantum_bound, AnalysisOptions, ClassicalValue, GameReport, QuantumBound};
pub use error::{Error, Result};
pub use nlc::{nlc_game, verify_block_circulant, verify_theorem3, NlcSpec};
pub use games::{chsh_d, Distribution, LinearGame, ProbabilityBox, QTable};
