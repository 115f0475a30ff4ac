//! Bipartite entanglement measures on small multipartite states and the
//! monogamy / polygamy relations between them.
//!
//! ```
//! use entanglion::{catalog_state, lcren, Bipartition, RoofConfig};
//!
//! let psi = catalog_state("example1").unwrap();
//! let e = lcren(&psi, &Bipartition::focus_rest(0, 3), &RoofConfig::default()).unwrap();
//! assert!((e.value - (9.0f64 / 5.0).log2()).abs() < 1e-12);
//! ```

pub mod error;
pub mod inequalities;
pub mod measures;
pub mod roof;
pub mod states;
pub mod tensor;

pub use error::{Error, Result};
pub use inequalities::{
    check_monogamy, check_negative_alpha, check_polygamy, ckw_check, compare_tightness, evaluate, measure_profile,
    InequalityReport, MeasureProfile, NegativeMode, Scheme, TheoremId, Verdict,
};
pub use measures::{
    concurrence_2qubit, concurrence_assist_2qubit, cren, crenoa, lcren, lcrenoa, log_negativity, measure, negativity,
    tangle, Bipartition, MeasureKind, MeasureValue, Method,
};
pub use roof::{roof_maximize, roof_minimize, RoofConfig, RoofResult};
pub use states::{catalog, catalog_state, haar_random_pure, QuantumState, StateKind};
pub use tensor::{ComplexMatrix, SubsystemShape};
