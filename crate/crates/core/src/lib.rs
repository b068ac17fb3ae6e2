//! Mathieu moonshine numerics: the twined coefficients `c_g(n)` of the `M₂₄`
//! mock modular forms, the multiplicities of irreducibles in each graded
//! piece, and the filtration of those multiplicity vectors by element order.

pub mod chartab;
pub mod decomp;
pub mod filtration;
pub mod numerics;
mod provider;
pub mod rademacher;

pub use chartab::{CharacterTable, QuadraticValue, RadicalSum, TableError};
pub use decomp::{DecompError, MultiplicityVector};
pub use filtration::{FiltrationError, FiltrationResult, SignProfile};
pub use numerics::{DedekindMode, ModeSelection, PrecisionContext};
pub use provider::{CoefficientProvider, CoefficientValue};
pub use rademacher::{
    ClassParams, CoefficientCache, CoefficientRecord, Conventions, Multiplier, RademacherError, RademacherProvider,
    TruncationPolicy,
};
