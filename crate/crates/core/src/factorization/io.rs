use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use super::{Factorization, InitStrategy};
use crate::error::{Error, Result};

/// Contents of `meta.json` next to the factor CSVs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorizationMeta {
    pub k: usize,
    pub seed: Option<u64>,
    pub init: InitStrategy,
    pub iterations: usize,
    pub final_error: f64,
    pub error_trace: Vec<f64>,
}

fn matrix_csv(x: &Array2<f64>) -> String {
    let mut out = String::new();
    for row in x.rows() {
        for (c, v) in row.iter().enumerate() {
            if c > 0 {
                out.push(',');
            }
            // 17 significant digits round-trip every f64.
            let _ = write!(out, "{v:.16e}");
        }
        out.push('\n');
    }
    out
}

fn parse_csv(path: &Path) -> Result<Array2<f64>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut rows = 0;
    let mut cols = None;
    let mut data = Vec::new();
    for (no, line) in text.lines().enumerate() {
        if line.is_empty() {
            continue;
        }
        let before = data.len();
        for field in line.split(',') {
            data.push(field.trim().parse::<f64>().map_err(|_| Error::Parse {
                path: path.to_path_buf(),
                line: no + 1,
                message: format!("bad number {field:?}"),
            })?);
        }
        let width = data.len() - before;
        if *cols.get_or_insert(width) != width {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: no + 1,
                message: "ragged row".into(),
            });
        }
        rows += 1;
    }
    Array2::from_shape_vec((rows, cols.unwrap_or(0)), data)
        .map_err(|e| Error::Data(format!("{}: {e}", path.display())))
}

/// Write `W.csv`, `H.csv` and `meta.json` into `dir`.
pub fn write_factorization(dir: impl AsRef<Path>, f: &Factorization) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let w_path = dir.join("W.csv");
    fs::write(&w_path, matrix_csv(&f.w)).map_err(|e| Error::io(&w_path, e))?;
    let h_path = dir.join("H.csv");
    fs::write(&h_path, matrix_csv(&f.h)).map_err(|e| Error::io(&h_path, e))?;
    let meta = FactorizationMeta {
        k: f.k(),
        seed: match f.init {
            InitStrategy::Random { seed } => Some(seed),
            InitStrategy::Nndsvd => None,
        },
        init: f.init,
        iterations: f.iterations(),
        final_error: f.final_error(),
        error_trace: f.error_trace.clone(),
    };
    let meta_path = dir.join("meta.json");
    fs::write(&meta_path, serde_json::to_string_pretty(&meta)?).map_err(|e| Error::io(&meta_path, e))
}

pub fn read_factorization(dir: impl AsRef<Path>) -> Result<Factorization> {
    let dir = dir.as_ref();
    let w = parse_csv(&dir.join("W.csv"))?;
    let h = parse_csv(&dir.join("H.csv"))?;
    let meta_path = dir.join("meta.json");
    let meta: FactorizationMeta = serde_json::from_str(
        &fs::read_to_string(&meta_path).map_err(|e| Error::io(&meta_path, e))?,
    )?;
    if w.ncols() != meta.k || h.nrows() != meta.k {
        return Err(Error::Data(format!("factor shapes disagree with k={}", meta.k)));
    }
    Ok(Factorization {
        w,
        h,
        error_trace: meta.error_trace,
        init: meta.init,
    })
}
