use std::fmt;
use std::io::Write;
use std::path::Path;

use covtime_core::report::Record;
use covtime_core::Error;

/// Records of a finished run.
#[derive(Debug, Default)]
pub struct Outcome {
    pub records: Vec<Record>,
    pub pass: bool,
    /// Human-readable lines for stderr.
    pub notes: Vec<String>,
}

impl Outcome {
    pub fn new() -> Self {
        Outcome {
            pass: true,
            ..Outcome::default()
        }
    }

    pub fn push(&mut self, record: Record) {
        if record.get("pass") == Some("false") {
            self.pass = false;
        }
        self.records.push(record);
    }

    pub fn text(&self) -> String {
        self.records.iter().map(|r| format!("{r}\n")).collect()
    }
}

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, files or parameters.
    Usage(String),
    /// A mathematical precondition or check failed.
    Failed(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failed(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Failed(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NotHermitian { .. }
            | Error::NotUnimodular { .. }
            | Error::IndefiniteGram { .. }
            | Error::StateNorm { .. }
            | Error::NegativeProbability { .. }
            | Error::ProbabilityMass { .. }
            | Error::NegativeEnergies { .. }
            | Error::BoundaryMass { .. }
            | Error::ScalingUndersampled { .. } => CliError::Failed(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

/// Writes through a temporary file in the target directory and renames it
/// into place, so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let fail = |e: &dyn fmt::Display| CliError::Usage(format!("cannot write {}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| fail(&e))?;
    tmp.write_all(bytes).map_err(|e| fail(&e))?;
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        let mode = std::fs::metadata(path).map(|m| m.permissions().mode()).unwrap_or(0o644);
        tmp.as_file()
            .set_permissions(std::fs::Permissions::from_mode(mode))
            .map_err(|e| fail(&e))?;
    }
    tmp.persist(path).map_err(|e| fail(&e.error))?;
    Ok(())
}
