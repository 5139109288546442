use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

use crate::{Batch, Config, Key, Tree};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetOp {
    Union,
    Intersect,
    Diff,
}

impl FromStr for SetOp {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "union" => Ok(SetOp::Union),
            "intersect" => Ok(SetOp::Intersect),
            "diff" => Ok(SetOp::Diff),
            other => Err(format!(
                "unknown set operation `{other}` (union, intersect, diff)"
            )),
        }
    }
}

impl fmt::Display for SetOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SetOp::Union => "union",
            SetOp::Intersect => "intersect",
            SetOp::Diff => "diff",
        })
    }
}

#[derive(Debug, Error)]
pub enum SetopsError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{path}:{line}: not a 64-bit signed integer: `{text}`")]
    Parse {
        path: PathBuf,
        line: usize,
        text: String,
    },
    #[error(transparent)]
    Config(#[from] crate::ConfigError),
}

/// Parses newline-separated decimal keys. Blank lines are skipped; `line`
/// numbers in errors are 1-based.
pub fn parse_keys(text: &str, path: &Path) -> Result<Vec<Key>, SetopsError> {
    let mut keys = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let t = raw.trim();
        if t.is_empty() {
            continue;
        }
        let k = t.parse::<Key>().map_err(|_| SetopsError::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            text: t.to_string(),
        })?;
        keys.push(k);
    }
    Ok(keys)
}

pub fn read_keys(path: &Path) -> Result<Vec<Key>, SetopsError> {
    let text = fs::read_to_string(path).map_err(|source| SetopsError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_keys(&text, path)
}

pub fn write_keys(path: &Path, keys: &[Key]) -> Result<(), SetopsError> {
    let mut text = String::with_capacity(keys.len() * 8);
    for k in keys {
        text.push_str(&k.to_string());
        text.push('\n');
    }
    fs::write(path, text).map_err(|source| SetopsError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Set algebra through the batched tree operations: union inserts `b` into a
/// tree over `a`, difference removes `b`, and intersection keeps the keys of
/// `b` that a lookup finds in `a`. Inputs may be unsorted and repeat keys.
pub fn run_setop(
    op: SetOp,
    a: Vec<Key>,
    b: Vec<Key>,
    config: Config,
) -> Result<Vec<Key>, SetopsError> {
    let a = Batch::normalize(a);
    let b = Batch::normalize(b);
    let mut tree = Tree::from_batch(&a, config)?;
    Ok(match op {
        SetOp::Union => {
            tree.insert_batched(&b);
            tree.to_vec()
        }
        SetOp::Diff => {
            tree.remove_batched(&b);
            tree.to_vec()
        }
        SetOp::Intersect => {
            let found = tree.contains_batched(&b);
            config.par().pack(b.keys(), &found)
        }
    })
}

pub fn setops_cmd(
    op: SetOp,
    file_a: &Path,
    file_b: &Path,
    out: &Path,
    config: Config,
) -> Result<(), SetopsError> {
    let a = read_keys(file_a)?;
    let b = read_keys(file_b)?;
    let result = run_setop(op, a, b, config)?;
    write_keys(out, &result)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(op: SetOp, a: &[Key], b: &[Key]) -> Vec<Key> {
        run_setop(op, a.to_vec(), b.to_vec(), Config::default()).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(
            run(SetOp::Union, &[1, 3, 5, 7, 9], &[2, 4, 5, 7, 8]),
            vec![1, 2, 3, 4, 5, 7, 8, 9]
        );
        assert_eq!(
            run(SetOp::Diff, &[1, 3, 5, 7, 9], &[2, 3, 6, 7, 9]),
            vec![1, 5]
        );
        assert_eq!(
            run(SetOp::Intersect, &[1, 3, 5, 7, 9], &[]),
            Vec::<Key>::new()
        );
        assert_eq!(
            run(SetOp::Intersect, &[9, 1, 3, 5, 7], &[7, 2, 3, 3]),
            vec![3, 7]
        );
    }

    #[test]
    fn parse_reports_line_numbers() {
        let err = parse_keys("1\n\n 2 \nx3\n", Path::new("in.txt")).unwrap_err();
        match err {
            SetopsError::Parse { line, text, .. } => {
                assert_eq!(line, 4);
                assert_eq!(text, "x3");
            }
            other => panic!("unexpected {other}"),
        }
        assert_eq!(
            parse_keys("-5\n\n 2 \n", Path::new("in.txt")).unwrap(),
            vec![-5, 2]
        );
        assert!(parse_keys("99999999999999999999", Path::new("in.txt")).is_err());
    }

    #[test]
    fn missing_file_is_an_io_error() {
        let err = read_keys(Path::new("/nonexistent/keys.txt")).unwrap_err();
        assert!(matches!(err, SetopsError::Io { .. }));
    }
}
