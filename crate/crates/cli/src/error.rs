use std::fmt;

use auxetic_core::Error;

/// A failure together with the process exit code it maps to.
#[derive(Debug)]
pub enum Failure {
    /// Bad arguments, malformed spec or invalid geometry: exit 2.
    Input(String),
    /// Reading or writing files: exit 3.
    Io(String),
    /// The numerics did not produce a result: exit 4.
    Numerical(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Io(_) => 3,
            Failure::Numerical(_) => 4,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(m) => write!(f, "input error: {m}"),
            Failure::Io(m) => write!(f, "i/o error: {m}"),
            Failure::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl std::error::Error for Failure {}

/// Variant name plus message, e.g. `NoAssembly: bar lengths cannot ...`.
fn describe(e: &Error) -> String {
    let name = format!("{e:?}");
    let name = name.split(|c: char| !c.is_alphanumeric()).next().unwrap_or_default();
    format!("{name}: {e}")
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = describe(&e);
        match e {
            Error::NonFinite
            | Error::DimensionMismatch { .. }
            | Error::InvalidInput(_)
            | Error::DegeneratePencil { .. }
            | Error::DegenerateAngle { .. }
            | Error::NoAssembly
            | Error::NonGeneric
            | Error::OutOfRange
            | Error::Underconnected { .. }
            | Error::BadBasis
            | Error::DuplicateEdge { .. }
            | Error::NotOneDof(_) => Failure::Input(msg),
            Error::NearSingular
            | Error::Resolution { .. }
            | Error::LoopNotClosed
            | Error::SingularLattice
            | Error::InconsistentConfig(_)
            | Error::SeedingFailed
            | Error::Continuation(_) => Failure::Numerical(msg),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.to_string())
    }
}
