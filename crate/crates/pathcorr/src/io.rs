//! Matrix files: a JSON object carrying kind, labels and row-major data, or a
//! plain CSV grid whose kind is supplied separately.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use pathcorr_core::matrices::{
    cov_to_marginal, partial_to_marginal_oracle, partial_to_precision, precision_to_partial, CovarianceMatrix,
    MarginalCorrelationMatrix, PartialCorrelationGraph, PrecisionMatrix,
};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum MatrixKind {
    Covariance,
    Precision,
    Partial,
    Marginal,
}

impl MatrixKind {
    pub fn name(self) -> &'static str {
        match self {
            MatrixKind::Covariance => "covariance",
            MatrixKind::Precision => "precision",
            MatrixKind::Partial => "partial",
            MatrixKind::Marginal => "marginal",
        }
    }
}

/// Where a generated matrix came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub kind: String,
    pub params: BTreeMap<String, serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub kind: MatrixKind,
    pub dim: usize,
    pub labels: Vec<String>,
    pub data: Vec<f64>,
    /// `λ_i = sqrt(ω_ii)` for partial-correlation files, when known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

fn default_labels(n: usize) -> Vec<String> {
    (1..=n).map(|k| k.to_string()).collect()
}

impl MatrixFile {
    pub fn new(kind: MatrixKind, m: &DMatrix<f64>, labels: &[String]) -> Self {
        let n = m.nrows();
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(m[(i, j)]);
            }
        }
        MatrixFile {
            kind,
            dim: n,
            labels: labels.to_vec(),
            data,
            scale: None,
            provenance: None,
        }
    }

    pub fn from_graph(g: &PartialCorrelationGraph) -> Self {
        let mut f = Self::new(MatrixKind::Partial, g.weights(), g.labels());
        f.scale = g.scale().map(<[f64]>::to_vec);
        f
    }

    pub fn with_provenance(mut self, p: Provenance) -> Self {
        self.provenance = Some(p);
        self
    }

    pub fn matrix(&self) -> Result<DMatrix<f64>, CliError> {
        if self.data.len() != self.dim * self.dim {
            return Err(CliError::Format(format!(
                "data holds {} values, expected {} for dim {}",
                self.data.len(),
                self.dim * self.dim,
                self.dim
            )));
        }
        if self.labels.len() != self.dim {
            return Err(CliError::Format(format!(
                "{} labels for dim {}",
                self.labels.len(),
                self.dim
            )));
        }
        Ok(DMatrix::from_row_slice(self.dim, self.dim, &self.data))
    }

    /// The file read as a partial-correlation graph, converting other kinds.
    pub fn to_graph(&self) -> Result<PartialCorrelationGraph, CliError> {
        let m = self.matrix()?;
        let g = match self.kind {
            MatrixKind::Partial => {
                let g = PartialCorrelationGraph::new(m)?;
                match &self.scale {
                    Some(s) => g.with_scale(s.clone())?,
                    None => g,
                }
            }
            MatrixKind::Precision => precision_to_partial(&PrecisionMatrix::new(m)?),
            MatrixKind::Covariance => precision_to_partial(&CovarianceMatrix::new(m)?.to_precision()?),
            MatrixKind::Marginal => {
                precision_to_partial(&MarginalCorrelationMatrix::new(m)?.to_covariance()?.to_precision()?)
            }
        };
        Ok(g.with_labels(self.labels.clone())?)
    }

    /// Converts to `target`. Partial to covariance or precision needs `scale`.
    pub fn convert(&self, target: MatrixKind) -> Result<MatrixFile, CliError> {
        if target == self.kind {
            return Ok(self.clone());
        }
        let labels = &self.labels;
        let out = match target {
            MatrixKind::Partial => Self::from_graph(&self.to_graph()?),
            MatrixKind::Marginal => {
                let m = match self.kind {
                    MatrixKind::Covariance => cov_to_marginal(&CovarianceMatrix::new(self.matrix()?)?),
                    _ => partial_to_marginal_oracle(&self.to_graph()?)?,
                };
                Self::new(MatrixKind::Marginal, m.matrix(), labels)
            }
            MatrixKind::Precision => {
                let p = match self.kind {
                    MatrixKind::Covariance => CovarianceMatrix::new(self.matrix()?)?.to_precision()?,
                    MatrixKind::Marginal => MarginalCorrelationMatrix::new(self.matrix()?)?
                        .to_covariance()?
                        .to_precision()?,
                    _ => partial_to_precision(&self.to_graph()?)?,
                };
                Self::new(MatrixKind::Precision, p.matrix(), labels)
            }
            MatrixKind::Covariance => {
                let c = match self.kind {
                    MatrixKind::Precision => PrecisionMatrix::new(self.matrix()?)?.to_covariance()?,
                    MatrixKind::Marginal => MarginalCorrelationMatrix::new(self.matrix()?)?.to_covariance()?,
                    _ => partial_to_precision(&self.to_graph()?)?.to_covariance()?,
                };
                Self::new(MatrixKind::Covariance, c.matrix(), labels)
            }
        };
        Ok(out)
    }
}

fn is_csv(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

/// Parses a headerless CSV grid of numbers.
pub fn parse_csv_grid(text: &str) -> Result<DMatrix<f64>, CliError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| CliError::Format(e.to_string()))?;
        let row = rec
            .iter()
            .map(|s| {
                s.parse::<f64>()
                    .map_err(|_| CliError::Format(format!("not a number: {s:?}")))
            })
            .collect::<Result<Vec<f64>, _>>()?;
        rows.push(row);
    }
    let n = rows.len();
    if let Some((k, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(CliError::Format(format!("row {} has {} values, expected {n}", k + 1, r.len())));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

/// Reads a JSON matrix file, or a CSV grid when the extension is `.csv`.
/// `kind` is required for CSV and, for JSON, must agree with the file.
pub fn read_matrix(path: &Path, kind: Option<MatrixKind>) -> Result<MatrixFile, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    if is_csv(path) {
        let kind = kind.ok_or_else(|| CliError::Usage("CSV input needs --kind".into()))?;
        let m = parse_csv_grid(&text)?;
        return Ok(MatrixFile::new(kind, &m, &default_labels(m.nrows())));
    }
    let f: MatrixFile =
        serde_json::from_str(&text).map_err(|e| CliError::Format(format!("{}: {e}", path.display())))?;
    if let Some(k) = kind {
        if k != f.kind {
            return Err(CliError::Usage(format!(
                "--kind {} does not match file kind {}",
                k.name(),
                f.kind.name()
            )));
        }
    }
    f.matrix()?;
    Ok(f)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Format(e.to_string()))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Writes a CSV table. Floats use the shortest representation that reads back
/// exactly; non-finite values are written as `NaN`.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let io = |e: csv::Error| CliError::Io(format!("{}: {e}", path.display()));
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x}")
    } else {
        "NaN".into()
    }
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map_or_else(|| "NaN".into(), num)
}
