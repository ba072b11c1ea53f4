//! Bell-CHSH scenario toolkit.
//!
//! Builds Bell-test scenarios from states and observables, verifies the
//! operator identities behind the CHSH bound, derives outcome-probability
//! behaviors, checks the marginal (no-signaling) laws, and decides whether
//! observed statistics admit a single classical (Kolmogorovian)
//! hidden-variable model.
//!
//! Everything is immutable after construction and every operation is a pure
//! function, so all types are freely shareable across threads.

pub mod behavior;
pub mod error;
pub mod kolmogorov;
pub mod linalg;
pub mod models;
pub mod random;
pub mod rng;
pub mod sampling;
pub mod scenario;
pub mod state;

pub use error::{Error, Result};

/// Convenience re-exports of the most commonly used items.
pub mod prelude {
    pub use crate::behavior::{
        behavior_from_scenario, behavior_from_text, behavior_to_text, check_marginal_laws,
        chsh_from_behavior, correlators, grand_measurement, marginalize, Behavior,
        GrandDistribution, MarginalReport,
    };
    pub use crate::error::{Error, Result};
    pub use crate::kolmogorov::{
        embed, embed_exact, embeddability_equivalence_check, fine_inequalities,
        max_fine_inequality, verify_model, DeterministicStrategy, EmbeddabilityResult,
        ExactBehavior, ExactEmbeddabilityResult, ExactKolmogorovModel, ExactWitness,
        FineInequality, KolmogorovModel, Witness,
    };
    pub use crate::linalg::{
        adjoint, commutator, hermitian_eigensystem, matmul, pauli_angle, pauli_x, pauli_y,
        pauli_z, tensor, ComplexScalar, Eigensystem, HermitianCheckReport, Matrix,
    };
    pub use crate::models::{
        preset_beyond_tsirelson, preset_classical, preset_singlet_tsirelson, MarginalStatus,
        Preset,
    };
    pub use crate::random::{
        random_commuting_pair, random_commuting_scenario, random_dichotomic,
        random_product_scenario, random_pure_state, random_unitary,
    };
    pub use crate::rng::Prng;
    pub use crate::sampling::{
        estimate_chsh, estimate_correlator, sample, statistical_marginal_check,
        EstimateWithError, SampledBehavior, StatisticalMarginalReport, StatisticalVerdict,
    };
    pub use crate::scenario::{
        AliceSetting, BellScenario, BobSetting, Context, DichotomicObservable, JointMeasurement,
        LocalObservables, MeasurementForm, Outcome,
    };
    pub use crate::state::{expectation, State};
}
