//! Bell-CHSH measurement scenarios and the operator identities they satisfy.
//!
//! A scenario is a state together with four joint measurements, one per
//! context `(x, y) ∈ {A, A'} × {B, B'}`. Product-form contexts are built from
//! four local dichotomic observables; custom contexts carry an arbitrary
//! 4-outcome projection-valued measure, which is what lets joint measurements
//! be entangled (non-product).
//!
//! The operator-level checks live here: the CHSH operator
//! `C = A⊗(B+B') + A'⊗(B−B')`, its square identity
//! `C² = 4𝕀 + [A,A']⊗[B,B']`, and the six commutation relations among the
//! four joint observables `A⊗B, A'⊗B, A⊗B', A'⊗B'`.

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigensystem, Matrix, HERMITICITY_TOL};
use crate::state::{expectation, State};

/// Frobenius tolerance for the dichotomy condition `M² = I`.
pub const DICHOTOMY_TOL: f64 = 1e-10;

/// Frobenius tolerance for PVM idempotence, orthogonality and completeness.
pub const PVM_TOL: f64 = 1e-10;

/// Agreement tolerance between the direct and identity-form commutators.
pub const COMMUTATOR_AGREEMENT_TOL: f64 = 1e-10;

/// A ±1 measurement outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    /// Canonical order: `+1` before `−1`.
    pub const BOTH: [Outcome; 2] = [Outcome::Plus, Outcome::Minus];

    pub fn value(self) -> f64 {
        match self {
            Outcome::Plus => 1.0,
            Outcome::Minus => -1.0,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Outcome::Plus => 0,
            Outcome::Minus => 1,
        }
    }

    pub fn from_index(index: usize) -> Outcome {
        if index == 0 {
            Outcome::Plus
        } else {
            Outcome::Minus
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Outcome::Plus => "+1",
            Outcome::Minus => "-1",
        }
    }
}

/// Alice's setting choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AliceSetting {
    A,
    APrime,
}

/// Bob's setting choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BobSetting {
    B,
    BPrime,
}

impl AliceSetting {
    pub fn label(self) -> &'static str {
        match self {
            AliceSetting::A => "A",
            AliceSetting::APrime => "A'",
        }
    }
}

impl BobSetting {
    pub fn label(self) -> &'static str {
        match self {
            BobSetting::B => "B",
            BobSetting::BPrime => "B'",
        }
    }
}

/// One of the four measurement contexts of a Bell-CHSH test.
///
/// Canonical order is `(A,B), (A,B'), (A',B), (A',B')`; the CHSH combination
/// weighs them `+1, +1, +1, −1`, matching the operator grouping
/// `A⊗(B+B') + A'⊗(B−B')`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Context {
    AB,
    ABPrime,
    APrimeB,
    APrimeBPrime,
}

impl Context {
    pub const ALL: [Context; 4] = [
        Context::AB,
        Context::ABPrime,
        Context::APrimeB,
        Context::APrimeBPrime,
    ];

    pub fn index(self) -> usize {
        match self {
            Context::AB => 0,
            Context::ABPrime => 1,
            Context::APrimeB => 2,
            Context::APrimeBPrime => 3,
        }
    }

    pub fn alice(self) -> AliceSetting {
        match self {
            Context::AB | Context::ABPrime => AliceSetting::A,
            Context::APrimeB | Context::APrimeBPrime => AliceSetting::APrime,
        }
    }

    pub fn bob(self) -> BobSetting {
        match self {
            Context::AB | Context::APrimeB => BobSetting::B,
            Context::ABPrime | Context::APrimeBPrime => BobSetting::BPrime,
        }
    }

    pub fn from_settings(x: AliceSetting, y: BobSetting) -> Context {
        match (x, y) {
            (AliceSetting::A, BobSetting::B) => Context::AB,
            (AliceSetting::A, BobSetting::BPrime) => Context::ABPrime,
            (AliceSetting::APrime, BobSetting::B) => Context::APrimeB,
            (AliceSetting::APrime, BobSetting::BPrime) => Context::APrimeBPrime,
        }
    }

    /// Sign of this context's correlator in the CHSH combination.
    pub fn chsh_sign(self) -> f64 {
        match self {
            Context::APrimeBPrime => -1.0,
            _ => 1.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Context::AB => "(A,B)",
            Context::ABPrime => "(A,B')",
            Context::APrimeB => "(A',B)",
            Context::APrimeBPrime => "(A',B')",
        }
    }
}

/// Hermitian operator with spectrum in `{+1, −1}`, i.e. `M² = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct DichotomicObservable {
    matrix: Matrix,
    label: String,
}

impl DichotomicObservable {
    /// Validates Hermiticity and the dichotomy condition at the default
    /// tolerances.
    pub fn new(matrix: Matrix, label: impl Into<String>) -> Result<Self> {
        let label = label.into();
        if !matrix.is_square() {
            return Err(Error::InvalidScenario {
                reason: format!("observable {label:?} must be square"),
            });
        }
        matrix.require_hermitian(HERMITICITY_TOL)?;
        let defect = matrix.dichotomy_defect()?;
        if defect > DICHOTOMY_TOL {
            return Err(Error::NotDichotomic {
                label,
                defect,
                tolerance: DICHOTOMY_TOL,
            });
        }
        Ok(DichotomicObservable { matrix, label })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Spectral projector onto the `±1` eigenspace: `(I ± M)/2`.
    pub fn projector(&self, outcome: Outcome) -> Matrix {
        let identity = Matrix::identity(self.dim());
        match outcome {
            Outcome::Plus => identity.add(&self.matrix).unwrap().scale_re(0.5),
            Outcome::Minus => identity.sub(&self.matrix).unwrap().scale_re(0.5),
        }
    }
}

/// The four local observables of a product-form scenario.
#[derive(Debug, Clone)]
pub struct LocalObservables {
    pub a: DichotomicObservable,
    pub a_prime: DichotomicObservable,
    pub b: DichotomicObservable,
    pub b_prime: DichotomicObservable,
}

impl LocalObservables {
    pub fn alice(&self, setting: AliceSetting) -> &DichotomicObservable {
        match setting {
            AliceSetting::A => &self.a,
            AliceSetting::APrime => &self.a_prime,
        }
    }

    pub fn bob(&self, setting: BobSetting) -> &DichotomicObservable {
        match setting {
            BobSetting::B => &self.b,
            BobSetting::BPrime => &self.b_prime,
        }
    }
}

/// How a context's joint measurement is realized.
#[derive(Debug, Clone)]
pub enum MeasurementForm {
    /// `Π_{a,b} = P_{x=a} ⊗ P_{y=b}` from the local spectral projectors.
    Product,
    /// Arbitrary 4-outcome PVM; projectors in canonical outcome order
    /// `(+,+), (+,−), (−,+), (−,−)`.
    Custom { projectors: [Matrix; 4] },
}

/// One context's joint measurement.
#[derive(Debug, Clone)]
pub struct JointMeasurement {
    pub context: Context,
    pub form: MeasurementForm,
}

impl JointMeasurement {
    pub fn product(context: Context) -> Self {
        JointMeasurement { context, form: MeasurementForm::Product }
    }

    pub fn custom(context: Context, projectors: [Matrix; 4]) -> Self {
        JointMeasurement { context, form: MeasurementForm::Custom { projectors } }
    }

    pub fn is_product(&self) -> bool {
        matches!(self.form, MeasurementForm::Product)
    }
}

/// Joint outcome index in canonical order `(+,+), (+,−), (−,+), (−,−)`.
pub fn joint_outcome_index(a: Outcome, b: Outcome) -> usize {
    a.index() * 2 + b.index()
}

/// All four joint outcomes in canonical order.
pub fn joint_outcomes() -> [(Outcome, Outcome); 4] {
    [
        (Outcome::Plus, Outcome::Plus),
        (Outcome::Plus, Outcome::Minus),
        (Outcome::Minus, Outcome::Plus),
        (Outcome::Minus, Outcome::Minus),
    ]
}

/// A complete Bell-CHSH measurement setup.
#[derive(Debug, Clone)]
pub struct BellScenario {
    dim_alice: usize,
    dim_bob: usize,
    state: State,
    observables: Option<LocalObservables>,
    measurements: [JointMeasurement; 4],
}

impl BellScenario {
    /// Product-form scenario: all four contexts measure `X ⊗ Y`.
    pub fn product(
        state: State,
        a: DichotomicObservable,
        a_prime: DichotomicObservable,
        b: DichotomicObservable,
        b_prime: DichotomicObservable,
    ) -> Result<Self> {
        let measurements = Context::ALL.map(JointMeasurement::product);
        BellScenario::assemble(
            a.dim(),
            b.dim(),
            state,
            Some(LocalObservables { a, a_prime, b, b_prime }),
            measurements,
        )
    }

    /// General constructor; validates dimensions, context coverage, and PVMs.
    pub fn assemble(
        dim_alice: usize,
        dim_bob: usize,
        state: State,
        observables: Option<LocalObservables>,
        measurements: [JointMeasurement; 4],
    ) -> Result<Self> {
        if dim_alice == 0 || dim_bob == 0 {
            return Err(Error::InvalidScenario { reason: "party dimensions must be positive".into() });
        }
        let joint_dim = dim_alice * dim_bob;
        if state.dim() != joint_dim {
            return Err(Error::InvalidScenario {
                reason: format!(
                    "state dimension {} does not match dim_alice·dim_bob = {}",
                    state.dim(),
                    joint_dim
                ),
            });
        }
        if let Some(obs) = &observables {
            for (o, dim, side) in [
                (&obs.a, dim_alice, "Alice"),
                (&obs.a_prime, dim_alice, "Alice"),
                (&obs.b, dim_bob, "Bob"),
                (&obs.b_prime, dim_bob, "Bob"),
            ] {
                if o.dim() != dim {
                    return Err(Error::InvalidScenario {
                        reason: format!(
                            "{side} observable {:?} has dimension {} instead of {}",
                            o.label(),
                            o.dim(),
                            dim
                        ),
                    });
                }
            }
        }

        let mut seen = [false; 4];
        for m in &measurements {
            let idx = m.context.index();
            if seen[idx] {
                return Err(Error::InvalidScenario {
                    reason: format!("context {} declared more than once", m.context.label()),
                });
            }
            seen[idx] = true;
            match &m.form {
                MeasurementForm::Product => {
                    if observables.is_none() {
                        return Err(Error::InvalidScenario {
                            reason: format!(
                                "context {} is product-form but no local observables are given",
                                m.context.label()
                            ),
                        });
                    }
                }
                MeasurementForm::Custom { projectors } => {
                    validate_pvm(m.context, projectors, joint_dim)?;
                }
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::InvalidScenario {
                reason: "all four contexts (A,B), (A,B'), (A',B), (A',B') must be present".into(),
            });
        }

        // Keep the measurements in canonical context order.
        let mut slots: [Option<JointMeasurement>; 4] = [None, None, None, None];
        for m in measurements {
            let idx = m.context.index();
            slots[idx] = Some(m);
        }
        let measurements = slots.map(|m| m.unwrap());

        Ok(BellScenario { dim_alice, dim_bob, state, observables, measurements })
    }

    pub fn dim_alice(&self) -> usize {
        self.dim_alice
    }

    pub fn dim_bob(&self) -> usize {
        self.dim_bob
    }

    pub fn joint_dim(&self) -> usize {
        self.dim_alice * self.dim_bob
    }

    pub fn state(&self) -> &State {
        &self.state
    }

    pub fn observables(&self) -> Option<&LocalObservables> {
        self.observables.as_ref()
    }

    pub fn measurement(&self, context: Context) -> &JointMeasurement {
        &self.measurements[context.index()]
    }

    /// True when every context is product-form.
    pub fn is_fully_product(&self) -> bool {
        self.measurements.iter().all(JointMeasurement::is_product)
    }

    fn locals(&self) -> Result<&LocalObservables> {
        self.observables.as_ref().ok_or(Error::MissingLocalObservables)
    }

    /// The four PVM projectors of a context, in canonical outcome order.
    pub fn pvm(&self, context: Context) -> Result<[Matrix; 4]> {
        match &self.measurement(context).form {
            MeasurementForm::Custom { projectors } => Ok(projectors.clone()),
            MeasurementForm::Product => {
                let obs = self.locals()?;
                let alice = obs.alice(context.alice());
                let bob = obs.bob(context.bob());
                let mut out: Vec<Matrix> = Vec::with_capacity(4);
                for (a, b) in joint_outcomes() {
                    out.push(alice.projector(a).tensor(&bob.projector(b))?);
                }
                Ok([
                    out[0].clone(),
                    out[1].clone(),
                    out[2].clone(),
                    out[3].clone(),
                ])
            }
        }
    }

    /// `C = A⊗(B+B') + A'⊗(B−B')`.
    pub fn build_chsh_operator(&self) -> Result<Matrix> {
        let obs = self.locals()?;
        let b_sum = obs.b.matrix().add(obs.b_prime.matrix())?;
        let b_diff = obs.b.matrix().sub(obs.b_prime.matrix())?;
        obs.a
            .matrix()
            .tensor(&b_sum)?
            .add(&obs.a_prime.matrix().tensor(&b_diff)?)
    }

    /// Residual `‖C² − 4I − [A,A']⊗[B,B']‖_F` of the square identity.
    ///
    /// At most `1e-9` for any valid scenario; an observable whose dichotomy
    /// defect exceeds tolerance is reported by label instead.
    pub fn verify_square_identity(&self) -> Result<f64> {
        let obs = self.locals()?;
        for o in [&obs.a, &obs.a_prime, &obs.b, &obs.b_prime] {
            let defect = o.matrix().dichotomy_defect()?;
            if defect > DICHOTOMY_TOL {
                return Err(Error::NotDichotomic {
                    label: o.label().to_string(),
                    defect,
                    tolerance: DICHOTOMY_TOL,
                });
            }
        }
        let c = self.build_chsh_operator()?;
        let c_squared = c.matmul(&c)?;
        // Expanding C² with M² = I for all four observables leaves
        // C² = 4𝕀 + [A',A]⊗[B,B']: the cross terms are
        // AA'⊗(B+B')(B−B') + A'A⊗(B−B')(B+B') = (A'A − AA')⊗[B,B'].
        let comm_alice = obs.a_prime.matrix().commutator(obs.a.matrix())?;
        let comm_bob = obs.b.matrix().commutator(obs.b_prime.matrix())?;
        let rhs = Matrix::identity(self.joint_dim())
            .scale_re(4.0)
            .add(&comm_alice.tensor(&comm_bob)?)?;
        c_squared.frobenius_distance(&rhs)
    }

    /// The six pairwise commutators of the joint observables, each computed
    /// directly and through its product-identity form.
    pub fn commutator_table(&self) -> Result<CommutatorTable> {
        let obs = self.locals()?;
        let a = obs.a.matrix();
        let ap = obs.a_prime.matrix();
        let b = obs.b.matrix();
        let bp = obs.b_prime.matrix();

        let id_a = Matrix::identity(self.dim_alice);
        let id_b = Matrix::identity(self.dim_bob);

        let ab = a.tensor(b)?;
        let apb = ap.tensor(b)?;
        let abp = a.tensor(bp)?;
        let apbp = ap.tensor(bp)?;

        let comm_a = a.commutator(ap)?; // [A, A']
        let comm_b = b.commutator(bp)?; // [B, B']
        let bbp = b.matmul(bp)?;
        let apa = ap.matmul(a)?;
        let aap = a.matmul(ap)?;

        let entries = [
            CommutatorEntry::build("[A⊗B, A'⊗B]", ab.commutator(&apb)?, comm_a.tensor(&id_b)?)?,
            CommutatorEntry::build("[A⊗B, A⊗B']", ab.commutator(&abp)?, id_a.tensor(&comm_b)?)?,
            CommutatorEntry::build("[A'⊗B, A'⊗B']", apb.commutator(&apbp)?, id_a.tensor(&comm_b)?)?,
            CommutatorEntry::build("[A⊗B', A'⊗B']", abp.commutator(&apbp)?, comm_a.tensor(&id_b)?)?,
            CommutatorEntry::build(
                "[A⊗B, A'⊗B']",
                ab.commutator(&apbp)?,
                comm_a.tensor(&bbp)?.add(&apa.tensor(&comm_b)?)?,
            )?,
            CommutatorEntry::build(
                "[A'⊗B, A⊗B']",
                apb.commutator(&abp)?,
                comm_a.scale_re(-1.0).tensor(&bbp)?.add(&aap.tensor(&comm_b)?)?,
            )?,
        ];
        Ok(CommutatorTable { entries })
    }

    /// `⟨ψ|C|ψ⟩` (or `tr(ρC)`).
    pub fn chsh_expectation(&self) -> Result<f64> {
        let c = self.build_chsh_operator()?;
        expectation(&self.state, &c)
    }

    /// Largest `|eigenvalue|` of the CHSH operator.
    pub fn chsh_spectral_bound(&self) -> Result<f64> {
        let c = self.build_chsh_operator()?;
        Ok(hermitian_eigensystem(&c, HERMITICITY_TOL)?.spectral_radius())
    }
}

fn validate_pvm(context: Context, projectors: &[Matrix; 4], joint_dim: usize) -> Result<()> {
    let ctx = context.label().to_string();
    let mut sum = Matrix::zeros(joint_dim, joint_dim);
    for (k, p) in projectors.iter().enumerate() {
        if !p.is_square() || p.rows() != joint_dim {
            return Err(Error::InvalidPvm {
                context: ctx,
                reason: format!(
                    "projector {k} has dimension {}×{} instead of {joint_dim}",
                    p.rows(),
                    p.cols()
                ),
            });
        }
        if let Err(Error::NotHermitian { max_asymmetry, .. }) = p.require_hermitian(HERMITICITY_TOL)
        {
            return Err(Error::InvalidPvm {
                context: ctx,
                reason: format!("projector {k} is not Hermitian (asymmetry {max_asymmetry:.3e})"),
            });
        }
        let idempotency = p.matmul(p)?.frobenius_distance(p)?;
        if idempotency > PVM_TOL {
            return Err(Error::InvalidPvm {
                context: ctx,
                reason: format!("projector {k} is not idempotent (defect {idempotency:.3e})"),
            });
        }
        sum = sum.add(p)?;
    }
    for i in 0..4 {
        for j in (i + 1)..4 {
            let overlap = projectors[i].matmul(&projectors[j])?.frobenius_norm();
            if overlap > PVM_TOL {
                return Err(Error::InvalidPvm {
                    context: ctx,
                    reason: format!(
                        "projectors {i} and {j} are not orthogonal (overlap {overlap:.3e})"
                    ),
                });
            }
        }
    }
    let completeness = sum.frobenius_distance(&Matrix::identity(joint_dim))?;
    if completeness > PVM_TOL {
        return Err(Error::InvalidPvm {
            context: ctx,
            reason: format!("projectors do not sum to identity (defect {completeness:.3e})"),
        });
    }
    Ok(())
}

/// One row of the commutation-relation table.
#[derive(Debug, Clone)]
pub struct CommutatorEntry {
    pub label: &'static str,
    pub direct: Matrix,
    pub via_identity: Matrix,
    /// Frobenius distance between the two computations.
    pub residual: f64,
}

impl CommutatorEntry {
    fn build(label: &'static str, direct: Matrix, via_identity: Matrix) -> Result<Self> {
        let residual = direct.frobenius_distance(&via_identity)?;
        Ok(CommutatorEntry { label, direct, via_identity, residual })
    }
}

/// The six commutators of `{A⊗B, A'⊗B, A⊗B', A'⊗B'}`.
#[derive(Debug, Clone)]
pub struct CommutatorTable {
    pub entries: [CommutatorEntry; 6],
}

impl CommutatorTable {
    /// Worst direct-vs-identity disagreement across the six rows.
    pub fn max_residual(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, e| m.max(e.residual))
    }

    /// Frobenius norms of the six (direct) commutators.
    pub fn norms(&self) -> [f64; 6] {
        [
            self.entries[0].direct.frobenius_norm(),
            self.entries[1].direct.frobenius_norm(),
            self.entries[2].direct.frobenius_norm(),
            self.entries[3].direct.frobenius_norm(),
            self.entries[4].direct.frobenius_norm(),
            self.entries[5].direct.frobenius_norm(),
        ]
    }
}
