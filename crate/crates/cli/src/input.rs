//! Reading input files and mapping failures to exit codes.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use qrel::io::matrix_from_json;
use qrel::{Cf64, Error, GaussRat, Matrix, Scalar};
use serde_json::{json, Value};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: file not found", path.display())]
    NotFound { path: PathBuf },

    #[error("{}: {source}", path.display())]
    Unreadable { path: PathBuf, source: io::Error },

    #[error("{}: {message}", path.display())]
    Syntax {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },

    #[error(transparent)]
    Library(#[from] Error),

    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::NotFound { .. } | CliError::Unreadable { .. } => 3,
            CliError::Syntax { .. } | CliError::Library(Error::Parse(_)) => 4,
            CliError::Library(_) | CliError::Usage(_) => 2,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::NotFound { .. } => "not_found",
            CliError::Unreadable { .. } => "unreadable",
            CliError::Syntax { .. } | CliError::Library(Error::Parse(_)) => "parse",
            CliError::Library(Error::Validation { .. }) => "validation",
            CliError::Library(_) => "invalid",
            CliError::Usage(_) => "usage",
        }
    }

    pub fn to_json(&self) -> Value {
        let mut err = json!({"kind": self.kind(), "message": self.to_string()});
        match self {
            CliError::Syntax { line, column, .. } => {
                err["line"] = json!(line);
                err["column"] = json!(column);
            }
            CliError::Library(e) => {
                if let Some(w) = e.witness() {
                    err["witness"] = w.clone();
                }
            }
            _ => {}
        }
        json!({ "error": err })
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub fn read_json(path: &Path) -> CliResult<Value> {
    let text = fs::read_to_string(path).map_err(|source| match source.kind() {
        io::ErrorKind::NotFound => CliError::NotFound { path: path.to_owned() },
        _ => CliError::Unreadable {
            path: path.to_owned(),
            source,
        },
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Syntax {
        path: path.to_owned(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Scalars the front end can run in. Float entries pick up `--tol`.
pub trait Field: Scalar {
    fn tolerance(self, tol: f64) -> Self;
}

impl Field for GaussRat {
    fn tolerance(self, _tol: f64) -> Self {
        self
    }
}

impl Field for Cf64 {
    fn tolerance(self, tol: f64) -> Self {
        self.with_tol(tol)
    }
}

/// A list of operators read from a file.
pub struct Operators<S> {
    pub n: Option<usize>,
    pub matrices: Vec<Matrix<S>>,
    /// The file stated a subspace (`"basis"`) rather than generators.
    pub is_basis: bool,
}

impl<S: Scalar> Operators<S> {
    pub fn size(&self, what: &str) -> CliResult<usize> {
        self.n
            .or_else(|| self.matrices.first().map(Matrix::rows))
            .ok_or_else(|| CliError::Usage(format!("{what} has no matrices and no \"n\" field")))
    }
}

/// Accepts a bare list, a single matrix, or an object holding the list
/// under `"basis"`, `"generators"` or `"matrices"`. Objects with a
/// `"relation"` member are unwrapped first, so relation outputs can be
/// fed back in.
pub fn operators<S: Field>(v: &Value, tol: f64) -> CliResult<Operators<S>> {
    let parse = |list: &Value| -> CliResult<Vec<Matrix<S>>> {
        let items = list
            .as_array()
            .ok_or_else(|| Error::Parse("expected a list of matrices".into()))?;
        Ok(items
            .iter()
            .map(|m| matrix_from_json::<S>(m).map(|m| m.map(|x| x.clone().tolerance(tol))))
            .collect::<qrel::Result<_>>()?)
    };
    match v {
        Value::Array(_) => Ok(Operators {
            n: None,
            matrices: parse(v)?,
            is_basis: false,
        }),
        Value::Object(o) => {
            if let Some(inner @ Value::Object(_)) = o.get("relation") {
                return operators(inner, tol);
            }
            let n = o.get("n").and_then(Value::as_u64).map(|n| n as usize);
            for key in ["basis", "generators", "matrices"] {
                if let Some(list) = o.get(key) {
                    return Ok(Operators {
                        n,
                        matrices: parse(list)?,
                        is_basis: key == "basis",
                    });
                }
            }
            let m = matrix_from_json::<S>(v)?.map(|x| x.clone().tolerance(tol));
            Ok(Operators {
                n: None,
                matrices: vec![m],
                is_basis: false,
            })
        }
        _ => Err(Error::Parse("expected a matrix or a list of matrices".into()).into()),
    }
}

pub fn single<S: Scalar>(ops: Operators<S>, what: &str) -> CliResult<Matrix<S>> {
    let mut ms = ops.matrices;
    if ms.len() != 1 {
        return Err(CliError::Usage(format!("{what} must hold exactly one matrix, found {}", ms.len())));
    }
    Ok(ms.remove(0))
}
