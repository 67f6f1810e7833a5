//! Discrete Wigner functions over finite fields, the mutually unbiased bases
//! they induce, and the circularly symmetric state whose outcome
//! probabilities are the same in every one of those bases.
//!
//! Supported dimensions are prime powers `d = rⁿ` with odd `r`. The balanced
//! state itself needs `d ≡ 3 (mod 4)`.
//!
//! ```
//! use std::sync::Arc;
//! use mub_balanced::{BalancedState, Field};
//!
//! let field = Arc::new(Field::new(7, 1).unwrap());
//! let state = BalancedState::build(field).unwrap();
//! assert!(state.verify_balanced().spread < 1e-10);
//! ```

pub mod balanced;
pub mod error;
pub mod field;
pub mod matrix;
pub mod mub;
pub mod number;
pub mod phase_space;
pub mod report;
pub mod wigner;

pub use balanced::{BalancedState, StateVector};
pub use error::{Error, Result};
pub use field::{Elem, Field, FieldSpec};
pub use matrix::{CMatrix, HermitianOperator};
pub use mub::{build_mubs, MubBasis, MubSet};
pub use number::{prime_power, supported_dimension};
pub use phase_space::{Line, PhasePoint, Slope, Striation, SymplecticMap};
pub use report::{verify_dimension, VerificationReport, VerifyOptions};
pub use wigner::{ComplexWigner, MoyalCaps, WignerFunction};
