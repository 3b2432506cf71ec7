use cosetcx::geometry::GeometryError;
use cosetcx::matgroup::GroupError;
use cosetcx::ortho::OrthoError;
use cosetcx::spectra::SpectraError;
use cosetcx::symmetry::SymmetryError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("projected group order 10^{projected_log10:.1} exceeds the enumeration cap {cap}")]
    CapExceeded { cap: u64, projected_log10: f64 },
    #[error("bundle schema {found:?} is not {expected:?}")]
    SchemaMismatch { found: String, expected: String },
    #[error("bundle digest does not match its contents")]
    DigestMismatch,
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("{section}: {source}")]
    Section { section: String, source: Box<CliError> },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error(transparent)]
    Ortho(#[from] OrthoError),
    #[error(transparent)]
    Symmetry(#[from] SymmetryError),
}

impl CliError {
    /// 2 for usage and configuration problems, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::InvalidConfig(_) | CliError::Usage(_) | CliError::SchemaMismatch { .. } => 2,
            CliError::Section { source, .. } => source.exit_code(),
            _ => 1,
        }
    }

    pub fn tagged(self, section: &str) -> Self {
        CliError::Section { section: section.to_string(), source: Box::new(self) }
    }

    /// The error comes from a size limit rather than a defect.
    pub fn is_cap(&self) -> bool {
        match self {
            CliError::CapExceeded { .. } => true,
            CliError::Group(e) => group_cap(e),
            CliError::Geometry(e) => geometry_cap(e),
            CliError::Spectra(e) => spectra_cap(e),
            CliError::Ortho(OrthoError::TooLarge { .. }) => true,
            CliError::Ortho(OrthoError::Spectra(e)) => spectra_cap(e),
            CliError::Ortho(OrthoError::Geometry(e)) => geometry_cap(e),
            CliError::Symmetry(SymmetryError::Group(e)) => group_cap(e),
            CliError::Symmetry(SymmetryError::Geometry(e)) => geometry_cap(e),
            CliError::Section { source, .. } => source.is_cap(),
            _ => false,
        }
    }
}

fn group_cap(e: &GroupError) -> bool {
    matches!(e, GroupError::CapExceeded { .. })
}

fn geometry_cap(e: &GeometryError) -> bool {
    match e {
        GeometryError::Group(g) => group_cap(g),
        GeometryError::AmbientNotTabulated { .. } => true,
        _ => false,
    }
}

fn spectra_cap(e: &SpectraError) -> bool {
    match e {
        SpectraError::TooLarge { .. } => true,
        SpectraError::Geometry(g) => geometry_cap(g),
        _ => false,
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Json(e.to_string())
    }
}
