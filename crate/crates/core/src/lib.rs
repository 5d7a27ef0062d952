//! The mixed-permutation channel `Δ(X) = (1/d!) Σ_π P_π X P_π^dagger` on
//! finite-dimensional systems.
//!
//! Closed forms for the single-system, one-sided and two-sided actions are
//! paired with brute-force group averages that serve as oracles. On top of the
//! channel sit coherence measures with their `Δ`-based lower bounds, PPT
//! separability checks, figure-data sweeps and a self-verification suite.
//!
//! ```
//! use permutwirl::{qubit_from_bloch, twirl_closed_form, BlochVector};
//!
//! let rho = qubit_from_bloch(BlochVector::new(0.6, 0.3, 0.2)).unwrap();
//! let out = twirl_closed_form(rho.matrix()).unwrap();
//! assert!((out[(0, 1)].re - 0.3).abs() < 1e-15);
//! assert!((out[(0, 0)].re - 0.5).abs() < 1e-15);
//! ```

pub mod coherence;
pub mod entanglement;
pub mod error;
pub mod io;
pub mod linalg;
pub mod par;
pub mod random;
pub mod states;
pub mod sweep;
pub mod twirl;
pub mod verify;

pub use coherence::{
    assistance_estimate, coherence_report, l1_coherence, l1_lower_bound, rel_ent_coherence, rel_ent_lower_bound,
    AssistanceEstimate, CoherenceReport, Measure,
};
pub use entanglement::{bell_octahedron_member, is_ppt, separable_verdict, PptReport, Verdict};
pub use error::{Error, Result};
pub use io::StateFile;
pub use linalg::{ComplexMatrix, Subsystem};
pub use par::Exec;
pub use states::{
    bell_diagonal_state, maximally_coherent_mixed_state, maximally_coherent_state, qubit_from_bloch,
    BellDiagonalParams, BlochVector, DensityMatrix, Permutation,
};
pub use twirl::{
    choi_matrix, entanglement_breaking_certificate, reconstruct_output_state, twirl_bruteforce, twirl_closed_form,
    twirl_one_sided, twirl_params, twirl_two_sided, BipartiteTwirlCoefficients, TwirlSummary,
};
pub use verify::{run_verify, VerifyConfig, VerifyReport};
