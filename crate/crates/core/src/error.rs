use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("invalid action: {0}")]
    InvalidAction(String),

    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),

    #[error("invalid bundle: {0}")]
    InvalidBundle(String),

    #[error("invalid clutching map: {0}")]
    InvalidClutch(String),

    #[error("invalid fiberwise isomorphism: {0}")]
    InvalidFiso(String),

    #[error("point {point} out of range for base of size {base_size}")]
    PointOutOfRange { point: usize, base_size: usize },

    #[error("subset of the base set must be nonempty")]
    EmptySubset,

    #[error("operands live over different groups")]
    GroupMismatch,

    #[error("operands live over different bundles")]
    BundleMismatch,

    #[error("fiber ranks differ across orbits; a clutching map needs a single rank")]
    RankMismatch,

    #[error("clutching map is not equivariant (worst residual {residual:.3e})")]
    NotEquivariant { residual: f64 },

    #[error("representations are not isomorphic; no intertwiner exists")]
    NonIsomorphic,

    #[error("inner product {value} is not a nonnegative integer within tolerance")]
    NonIntegralMultiplicity { value: String },

    #[error("singular matrix where an isomorphism was required (sigma_min {sigma_min:.3e})")]
    Singular { sigma_min: f64 },

    #[error("averaging produced a singular map (sigma_min {sigma_min:.3e}); the two maps lie in different components")]
    SingularAveraging { sigma_min: f64 },

    #[error("random intertwiner stayed singular after {attempts} attempts")]
    IntertwinerRetries { attempts: usize },

    #[error("character table computation failed to separate irreducibles after {attempts} attempts")]
    CharacterTableDegenerate { attempts: usize },

    #[error("integer overflow during Smith normal form reduction")]
    Overflow,

    #[error("not a representation extension of the bundle")]
    NotAnExtension,

    #[error("partial data on pairs {relation:?} does not determine a clutching map")]
    Insufficient { relation: Vec<(usize, usize)> },

    #[error("inconsistent partial data at pair ({0}, {1}): {detail} (residual {residual:.3e})", pair.0, pair.1)]
    Inconsistent {
        pair: (usize, usize),
        detail: String,
        residual: f64,
    },

    #[error("unknown catalog entry `{0}`")]
    UnknownFixture(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
