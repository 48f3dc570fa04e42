//! On-disk formats: Matrix Market coordinate files with `.terms`/`.docs`
//! companions, raw text corpora, and stop-word lists.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use super::matrix::{DocTermMatrix, Vocabulary, Weighting};
use super::RawCorpus;
use crate::error::{Error, Result};

/// The three files making up a preprocessed corpus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusPaths {
    pub mtx: PathBuf,
    pub terms: PathBuf,
    pub docs: PathBuf,
}

impl CorpusPaths {
    /// Companion paths for a `.mtx` file (`bbc.mtx` → `bbc.terms`, `bbc.docs`).
    pub fn from_mtx(mtx: impl AsRef<Path>) -> Self {
        let mtx = mtx.as_ref().to_path_buf();
        CorpusPaths {
            terms: mtx.with_extension("terms"),
            docs: mtx.with_extension("docs"),
            mtx,
        }
    }

    pub fn in_dir(dir: impl AsRef<Path>, stem: &str) -> Self {
        Self::from_mtx(dir.as_ref().join(format!("{stem}.mtx")))
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

/// Parsed coordinate matrix: dimensions plus 0-based `(row, col, value)` triplets.
struct Coordinates {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, f64)>,
}

fn parse_matrix_market(path: &Path, text: &str) -> Result<Coordinates> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| parse_err(path, 1, "empty file"))?;
    let fields: Vec<String> = header.split_whitespace().map(str::to_lowercase).collect();
    if fields.len() < 5 || fields[0] != "%%matrixmarket" || fields[1] != "matrix" {
        return Err(parse_err(path, 1, "missing %%MatrixMarket matrix header"));
    }
    if fields[2] != "coordinate" {
        return Err(parse_err(path, 1, "only coordinate format is supported"));
    }
    if fields[3] != "real" && fields[3] != "integer" {
        return Err(parse_err(path, 1, format!("unsupported field {:?}", fields[3])));
    }
    if fields[4] != "general" {
        return Err(parse_err(path, 1, format!("unsupported symmetry {:?}", fields[4])));
    }

    let mut size: Option<(usize, usize, usize)> = None;
    let mut entries = Vec::new();
    for (no, line) in lines {
        let line = line.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let lineno = no + 1;
        let parts: Vec<&str> = line.split_whitespace().collect();
        match size {
            None => {
                if parts.len() != 3 {
                    return Err(parse_err(path, lineno, "expected 'rows cols nnz'"));
                }
                let p = |s: &str| {
                    s.parse::<usize>()
                        .map_err(|_| parse_err(path, lineno, format!("bad integer {s:?}")))
                };
                let dims = (p(parts[0])?, p(parts[1])?, p(parts[2])?);
                entries.reserve(dims.2);
                size = Some(dims);
            }
            Some((rows, cols, _)) => {
                if parts.len() != 3 {
                    return Err(parse_err(path, lineno, "expected 'row col value'"));
                }
                let i: usize = parts[0]
                    .parse()
                    .map_err(|_| parse_err(path, lineno, "bad row index"))?;
                let j: usize = parts[1]
                    .parse()
                    .map_err(|_| parse_err(path, lineno, "bad column index"))?;
                let v: f64 = parts[2]
                    .parse()
                    .map_err(|_| parse_err(path, lineno, "bad value"))?;
                if i == 0 || j == 0 || i > rows || j > cols {
                    return Err(parse_err(path, lineno, format!("index ({i}, {j}) out of range")));
                }
                if !v.is_finite() || v < 0.0 {
                    return Err(parse_err(path, lineno, format!("value {v} is not non-negative")));
                }
                entries.push((i - 1, j - 1, v));
            }
        }
    }
    let (rows, cols, nnz) = size.ok_or_else(|| parse_err(path, 1, "missing size line"))?;
    if entries.len() != nnz {
        return Err(parse_err(
            path,
            1,
            format!("header declares {nnz} entries, found {}", entries.len()),
        ));
    }
    Ok(Coordinates { rows, cols, entries })
}

fn read_lines(path: &Path) -> Result<Vec<String>> {
    Ok(read(path)?
        .lines()
        .map(|l| l.trim().to_owned())
        .filter(|l| !l.is_empty())
        .collect())
}

/// Guess what the stored weights are: integral values are raw counts, unit-norm
/// columns are normalized TF-IDF, anything else is an opaque weighting.
fn detect_weighting(matrix: &DocTermMatrix) -> Weighting {
    let integral = (0..matrix.n_docs())
        .all(|j| matrix.column(j).1.iter().all(|v| v.fract() == 0.0));
    if integral && matrix.nnz() > 0 {
        return Weighting::Counts;
    }
    let unit = (0..matrix.n_docs()).all(|j| {
        let (rows, _) = matrix.column(j);
        rows.is_empty() || (matrix.column_norm(j) - 1.0).abs() < 1e-9
    });
    if unit {
        Weighting::Normalized
    } else {
        Weighting::Weighted
    }
}

/// Load a term × document `.mtx` plus its `.terms` file. The `.docs` file is optional;
/// without it documents are numbered from 1.
pub fn load_corpus(mtx: impl AsRef<Path>) -> Result<DocTermMatrix> {
    let paths = CorpusPaths::from_mtx(mtx);
    let coords = parse_matrix_market(&paths.mtx, &read(&paths.mtx)?)?;
    let terms = read_lines(&paths.terms)?;
    if terms.len() != coords.rows {
        return Err(Error::Data(format!(
            "{} lists {} terms but the matrix has {} rows",
            paths.terms.display(),
            terms.len(),
            coords.rows
        )));
    }
    let doc_ids = if paths.docs.exists() {
        let ids = read_lines(&paths.docs)?;
        if ids.len() != coords.cols {
            return Err(Error::Data(format!(
                "{} lists {} documents but the matrix has {} columns",
                paths.docs.display(),
                ids.len(),
                coords.cols
            )));
        }
        ids
    } else {
        (1..=coords.cols).map(|j| j.to_string()).collect()
    };
    let mut columns = vec![Vec::new(); coords.cols];
    for (i, j, v) in coords.entries {
        columns[j].push((i, v));
    }
    let vocabulary = Arc::new(Vocabulary::new(terms)?);
    let mut matrix =
        DocTermMatrix::from_columns(vocabulary, doc_ids, columns, Weighting::Weighted)?;
    let weighting = detect_weighting(&matrix);
    matrix.set_weighting(weighting);
    Ok(matrix)
}

/// Write `<stem>.mtx`, `<stem>.terms` and `<stem>.docs` into `dir`.
///
/// Values use the shortest representation that round-trips exactly, so a saved and
/// reloaded matrix is bit-identical.
pub fn save_corpus(dir: impl AsRef<Path>, stem: &str, matrix: &DocTermMatrix) -> Result<CorpusPaths> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let paths = CorpusPaths::in_dir(dir, stem);

    let field = if matrix.weighting() == Weighting::Counts { "integer" } else { "real" };
    let mut out = String::with_capacity(matrix.nnz() * 24 + 128);
    let _ = writeln!(out, "%%MatrixMarket matrix coordinate {field} general");
    let _ = writeln!(out, "{} {} {}", matrix.n_terms(), matrix.n_docs(), matrix.nnz());
    for j in 0..matrix.n_docs() {
        let (rows, vals) = matrix.column(j);
        for (&i, &v) in rows.iter().zip(vals) {
            let _ = writeln!(out, "{} {} {}", i + 1, j + 1, v);
        }
    }
    write(&paths.mtx, &out)?;
    write(&paths.terms, &lines(matrix.vocabulary().terms()))?;
    write(&paths.docs, &lines(matrix.doc_ids()))?;
    Ok(paths)
}

fn lines(items: &[String]) -> String {
    let mut s = String::new();
    for item in items {
        s.push_str(item);
        s.push('\n');
    }
    s
}

/// Read raw documents from a directory of `.txt` files (id = file stem, sorted by
/// file name) or from a single file with one document per line (id = line number).
pub fn read_raw_corpus(path: impl AsRef<Path>) -> Result<RawCorpus> {
    let path = path.as_ref();
    let meta = fs::metadata(path).map_err(|e| Error::io(path, e))?;
    let documents = if meta.is_dir() {
        let mut files: Vec<PathBuf> = fs::read_dir(path)
            .map_err(|e| Error::io(path, e))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "txt"))
            .collect();
        files.sort();
        files
            .into_iter()
            .map(|f| {
                let id = f
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_default();
                read(&f).map(|text| (id, text))
            })
            .collect::<Result<Vec<_>>>()?
    } else {
        read(path)?
            .lines()
            .enumerate()
            .map(|(i, l)| ((i + 1).to_string(), l.to_owned()))
            .collect()
    };
    if documents.is_empty() {
        return Err(Error::Data(format!("no documents found in {}", path.display())));
    }
    RawCorpus::new(documents)
}

/// One word per line; blank lines and `#` comments are ignored. Words are lowercased.
pub fn read_stopwords(path: impl AsRef<Path>) -> Result<HashSet<String>> {
    let path = path.as_ref();
    Ok(read(path)?
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_lowercase)
        .collect())
}
