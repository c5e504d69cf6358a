use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library can report.
///
/// Variants are grouped by the exit-code class the command-line tool maps them
/// to; see [`Error::exit_code`].
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    // --- mesh validation
    #[error("triangle {triangle} references vertex {index} but the mesh has {count} vertices")]
    IndexOutOfRange { triangle: usize, index: usize, count: usize },
    #[error("mesh needs at least 4 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("triangle {0} repeats a vertex")]
    DegenerateTriangle(usize),
    #[error("non-manifold mesh: {0}")]
    NonManifold(String),
    #[error("non-orientable surface")]
    NonOrientable,
    #[error("triangle orientations are not coherent across edge ({0}, {1})")]
    IncoherentOrientation(usize, usize),
    #[error("mesh is disconnected")]
    Disconnected,
    #[error("degenerate tangent frame at vertex {0}")]
    DegenerateFrame(usize),
    #[error("frame at vertex {0} disagrees with the triangle orientation")]
    FrameOrientation(usize),
    #[error("Euler characteristic {0} does not correspond to a closed orientable surface")]
    BadEulerCharacteristic(i64),
    #[error("resolution {found} is below the minimum of {minimum}")]
    ResolutionTooLow { found: usize, minimum: usize },

    // --- homology
    #[error("tree-cotree decomposition produced {found} generators, expected {expected}")]
    InternalRankError { found: usize, expected: usize },
    #[error("data belongs to a different mesh")]
    MeshMismatch,
    #[error("value {0} is not an integer within tolerance")]
    NotIntegral(f64),
    #[error("basis is not unimodular (intersection determinant {0})")]
    NotUnimodular(i64),
    #[error("class vector has length {found}, expected {expected}")]
    WrongLength { found: usize, expected: usize },

    // --- winding
    #[error("edge ({0}, {1}) has an angle jump of pi: the lift is ambiguous")]
    EdgeAliasing(usize, usize),
    #[error("triangle {0} wraps by a full turn: field under-resolved")]
    TriangleWrap(usize),
    #[error("singular or orientation-reversing matrix at vertex {0}")]
    SingularMatrix(usize),

    // --- forms
    #[error("form at vertex {vertex}: {reason}")]
    InvalidForm { vertex: usize, reason: String },
    #[error("fiber block degenerate at vertex {0}")]
    DegenerateBlock(usize),
    #[error("metric is not symmetric positive definite at vertex {0}")]
    NotSpd(usize),
    #[error("form is degenerate at vertex {0}")]
    NondegeneracyFailure(usize),

    // --- lambda
    #[error("surface has genus {0}, operation needs genus 1")]
    WrongGenus(usize),
    #[error("mesh has no grid lattice parametrization")]
    MissingLattice,

    // --- suspension
    #[error("suspension needs at least 2 time steps, got {0}")]
    TooFewTimeSteps(usize),
    #[error("prism split produced an inconsistent face")]
    InconsistentPrismSplit,
    #[error("chain is not a cycle: {0}")]
    NotACycle(String),

    // --- classifier
    #[error("sphere map: {0}")]
    InvalidSphereMap(String),
    #[error("complex structures do not define a trivialization at vertex {0}")]
    DegenerateTrivialization(usize),
    #[error("no regular value found after {0} attempts")]
    NoRegularValue(usize),
    #[error("regular values disagree on the pullback class: {0:?} vs {1:?}")]
    RegularValueDisagreement(Vec<i64>, Vec<i64>),
    #[error("value is not regular for the map")]
    NotRegular,
    #[error("image of tetrahedron {0} contains the origin: refine the map")]
    DegenerateImage(usize),
    #[error("preimage cycle does not bound over the integers")]
    NotNullHomologous,
    #[error("boundary condition violated at slice {slice}: {reason}")]
    BoundaryConditionViolated { slice: usize, reason: String },

    // --- io
    #[error("i/o error: {0}")]
    Io(String),
    #[error("malformed input: {0}")]
    Parse(String),
}

impl Error {
    /// Process exit code class: 1 validation, 2 resolution, 3 undefined
    /// invariant, 4 i/o.
    pub fn exit_code(&self) -> i32 {
        use Error::*;
        match self {
            EdgeAliasing(..)
            | TriangleWrap(_)
            | NotIntegral(_)
            | DegenerateImage(_)
            | NoRegularValue(_)
            | RegularValueDisagreement(..)
            | NotRegular => 2,
            NotNullHomologous => 3,
            Io(_) => 4,
            _ => 1,
        }
    }
}
