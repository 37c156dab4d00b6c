//! JSON file formats. Complex scalars are `[re, im]` pairs and matrices are
//! row-major nested arrays of them.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::algebra::{central_projections, generate_algebra, StarAlgebra};
use crate::deform::{DeformedAlgebra, StarTable, StructureConstants};
use crate::error::{Error, Result};
use crate::matcore::{ComplexMatrix, MatrixRepr, ToleranceConfig, C64};

/// `{"ambient_dim": n, "generators": [matrix, ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub ambient_dim: usize,
    #[serde(default)]
    pub generators: Vec<MatrixRepr>,
}

impl AlgebraFile {
    /// Stores the basis of `alg` as generators.
    pub fn from_algebra(alg: &StarAlgebra) -> Self {
        Self {
            ambient_dim: alg.ambient_dim(),
            generators: alg.basis().iter().map(ComplexMatrix::to_repr).collect(),
        }
    }

    /// Parses the generators, naming the first malformed one.
    pub fn generators(&self) -> Result<Vec<ComplexMatrix>> {
        let n = self.ambient_dim;
        if n == 0 {
            return Err(Error::InvalidInput("ambient_dim must be positive".into()));
        }
        self.generators
            .iter()
            .enumerate()
            .map(|(idx, g)| {
                if g.len() != n {
                    return Err(Error::DimensionMismatch(format!(
                        "generator {idx} has {} rows, expected {n}",
                        g.len()
                    )));
                }
                if let Some((r, row)) = g.iter().enumerate().find(|(_, row)| row.len() != n) {
                    return Err(Error::DimensionMismatch(format!(
                        "generator {idx} is not square: row {r} has {} entries, expected {n}",
                        row.len()
                    )));
                }
                ComplexMatrix::from_repr(g)
                    .map_err(|e| Error::InvalidMatrix(format!("generator {idx}: {e}")))
            })
            .collect()
    }

    pub fn build(&self, cfg: &ToleranceConfig) -> Result<StarAlgebra> {
        generate_algebra(self.ambient_dim, &self.generators()?, cfg)
    }
}

/// Either a path (relative to the referring file) or an inline algebra.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgebraSource {
    Path(PathBuf),
    Inline(AlgebraFile),
}

/// `{"algebra": path | inline, "u": matrix, "p_selector": [indices]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeformationFile {
    pub algebra: AlgebraSource,
    pub u: MatrixRepr,
    #[serde(default)]
    pub p_selector: Vec<usize>,
}

/// A deformation file resolved against the file system.
#[derive(Debug, Clone)]
pub struct LoadedDeformation {
    pub algebra_file: AlgebraFile,
    pub deformed: DeformedAlgebra,
}

impl DeformationFile {
    pub fn load(path: &Path, cfg: &ToleranceConfig) -> Result<LoadedDeformation> {
        let file: DeformationFile = read_json(path)?;
        let base_dir = path.parent().unwrap_or_else(|| Path::new("."));
        file.resolve(base_dir, cfg)
    }

    pub fn resolve(&self, base_dir: &Path, cfg: &ToleranceConfig) -> Result<LoadedDeformation> {
        let algebra_file = match &self.algebra {
            AlgebraSource::Inline(a) => a.clone(),
            AlgebraSource::Path(p) => read_json(&base_dir.join(p))?,
        };
        let alg = algebra_file.build(cfg)?;
        let u = ComplexMatrix::from_repr(&self.u)
            .map_err(|e| Error::InvalidMatrix(format!("u: {e}")))?;
        let projections = central_projections(&alg, cfg)?;
        let p = projections.sum(&self.p_selector).map_err(|e| {
            Error::NotCentralProjection(format!("p_selector {:?}: {e}", self.p_selector))
        })?;
        let deformed = DeformedAlgebra::new(alg, u, p, cfg)?;
        Ok(LoadedDeformation {
            algebra_file,
            deformed,
        })
    }
}

/// `{"dim": d, "table": d×d×d, "star": d×d}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructureFile {
    pub dim: usize,
    pub table: Vec<Vec<Vec<[f64; 2]>>>,
    pub star: Vec<Vec<[f64; 2]>>,
}

fn to_pair(z: &C64) -> [f64; 2] {
    [z.re, z.im]
}

fn from_pair(p: &[f64; 2]) -> C64 {
    C64::new(p[0], p[1])
}

impl StructureFile {
    pub fn from_tables(sc: &StructureConstants, star: &StarTable) -> Self {
        Self {
            dim: sc.dim,
            table: sc
                .table
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|v| v.iter().map(to_pair).collect())
                        .collect()
                })
                .collect(),
            star: star
                .0
                .iter()
                .map(|v| v.iter().map(to_pair).collect())
                .collect(),
        }
    }

    /// Checks the declared shape and converts to tables.
    pub fn to_tables(&self) -> Result<(StructureConstants, StarTable)> {
        let d = self.dim;
        let shape_err = |what: String| Error::InvalidInput(format!("structure file: {what}"));
        if self.table.len() != d {
            return Err(shape_err(format!(
                "table has {} rows, expected {d}",
                self.table.len()
            )));
        }
        for (i, row) in self.table.iter().enumerate() {
            if row.len() != d {
                return Err(shape_err(format!(
                    "table[{i}] has {} entries, expected {d}",
                    row.len()
                )));
            }
            if let Some(j) = row.iter().position(|v| v.len() != d) {
                return Err(shape_err(format!(
                    "table[{i}][{j}] has {} coefficients, expected {d}",
                    row[j].len()
                )));
            }
        }
        if self.star.len() != d {
            return Err(shape_err(format!(
                "star has {} rows, expected {d}",
                self.star.len()
            )));
        }
        if let Some(i) = self.star.iter().position(|v| v.len() != d) {
            return Err(shape_err(format!(
                "star[{i}] has {} coefficients, expected {d}",
                self.star[i].len()
            )));
        }
        let all_finite = self
            .table
            .iter()
            .flatten()
            .flatten()
            .chain(self.star.iter().flatten())
            .all(|p| p[0].is_finite() && p[1].is_finite());
        if !all_finite {
            return Err(shape_err("non-finite coefficient".into()));
        }
        let table = self
            .table
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| v.iter().map(from_pair).collect())
                    .collect()
            })
            .collect();
        let star = self
            .star
            .iter()
            .map(|v| v.iter().map(from_pair).collect())
            .collect();
        Ok((StructureConstants { dim: d, table }, StarTable(star)))
    }
}

/// A bare matrix or `{"element": matrix}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementFile {
    Wrapped { element: MatrixRepr },
    Bare(MatrixRepr),
}

impl ElementFile {
    pub fn matrix(&self) -> Result<ComplexMatrix> {
        let repr = match self {
            ElementFile::Wrapped { element } => element,
            ElementFile::Bare(m) => m,
        };
        ComplexMatrix::from_repr(repr)
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}
