//! JSON file formats.
//!
//! | file | shape |
//! |---|---|
//! | space | `{"points": [..], "edges": [[i, j, w], ..]}` or `{"points": [..], "dist": [[..], ..]}` |
//! | matrix | `{"rows": n, "cols": m, "re": [..], "im": [..]}`, row-major |
//! | module | `{"space": path, "multiplicity": [..]}` |
//! | operator | matrix fields plus `{"source": module path, "target": module path}` |
//! | map | `{"source": space path, "target": space path, "map": [..]}` |
//! | relation | `{"source": space path, "target": space path, "pairs": [[y, x], ..]}` |
//! | partition | `[[x, ..], ..]` |
//!
//! Infinite distances are written as the string `"inf"`. Paths inside a
//! file are resolved relative to the directory of that file.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Component, Path, PathBuf};
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::coarse_map::CoarseMapRep;
use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::module::{GeometricModule, ModuleOperator};
use crate::relation::Relation;
use crate::space::ExtMetricSpace;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceFile {
    pub points: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<(usize, usize, f64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dist: Option<Vec<Vec<Dist>>>,
}

impl SpaceFile {
    pub fn from_space(space: &ExtMetricSpace) -> Self {
        let n = space.len();
        SpaceFile {
            points: space.labels().to_vec(),
            edges: None,
            dist: Some((0..n).map(|i| (0..n).map(|j| space.d(i, j)).collect()).collect()),
        }
    }

    pub fn build(self) -> Result<ExtMetricSpace> {
        match (self.edges, self.dist) {
            (Some(e), None) => ExtMetricSpace::from_edges(self.points, &e),
            (None, Some(d)) => ExtMetricSpace::from_matrix(self.points, d),
            (None, None) => ExtMetricSpace::from_edges(self.points, &[]),
            (Some(_), Some(_)) => Err(Error::InvalidSpace(
                "give either \"edges\" or \"dist\", not both".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl MatrixFile {
    pub fn from_matrix(m: &CMatrix) -> Self {
        MatrixFile {
            rows: m.rows(),
            cols: m.cols(),
            re: m.re(),
            im: m.im(),
        }
    }

    pub fn build(&self) -> Result<CMatrix> {
        CMatrix::from_parts(self.rows, self.cols, &self.re, &self.im)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModuleFile {
    pub space: String,
    pub multiplicity: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorFile {
    pub source: String,
    pub target: String,
    #[serde(flatten)]
    pub matrix: MatrixFile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapFile {
    pub source: String,
    pub target: String,
    pub map: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationFile {
    pub source: String,
    pub target: String,
    pub pairs: Vec<(usize, usize)>,
}

impl RelationFile {
    pub fn from_relation(rel: &Relation, source: &str, target: &str) -> Self {
        RelationFile {
            source: source.to_string(),
            target: target.to_string(),
            pairs: rel.pairs().iter().copied().collect(),
        }
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(serde_json::from_str(&text)?)
}

/// Pretty JSON with a trailing newline.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| Error::Io {
            path: dir.display().to_string(),
            source,
        })?;
    }
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_text(path, &to_json_string(value)?)
}

/// `reference` read relative to the directory holding `base`.
pub fn resolve(base: &Path, reference: &str) -> PathBuf {
    let dir = base.parent().unwrap_or(Path::new(""));
    dir.join(reference)
}

fn normalize(path: &Path) -> PathBuf {
    fs::canonicalize(path).unwrap_or_else(|_| {
        let mut out = PathBuf::new();
        for c in path.components() {
            match c {
                Component::CurDir => {}
                Component::ParentDir => {
                    out.pop();
                }
                other => out.push(other),
            }
        }
        out
    })
}

/// `target` written relative to the directory `from`, falling back to the
/// absolute form when the two share no root.
pub fn relative_path(target: &Path, from: &Path) -> String {
    let t = normalize(target);
    let f = normalize(from);
    let tc: Vec<Component> = t.components().collect();
    let fc: Vec<Component> = f.components().collect();
    let common = tc.iter().zip(&fc).take_while(|(a, b)| a == b).count();
    if common == 0 {
        return t.display().to_string();
    }
    let mut out = PathBuf::new();
    for _ in common..fc.len() {
        out.push("..");
    }
    for c in &tc[common..] {
        out.push(c);
    }
    out.to_string_lossy().replace('\\', "/")
}

/// Loads files, sharing one `Arc` per distinct path so that spaces and
/// modules referenced twice compare equal by pointer.
#[derive(Debug, Default)]
pub struct Loader {
    spaces: BTreeMap<PathBuf, Arc<ExtMetricSpace>>,
    modules: BTreeMap<PathBuf, Arc<GeometricModule>>,
}

impl Loader {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn space(&mut self, path: &Path) -> Result<Arc<ExtMetricSpace>> {
        let key = normalize(path);
        if let Some(s) = self.spaces.get(&key) {
            return Ok(s.clone());
        }
        let file: SpaceFile = read_json(path)?;
        let space = Arc::new(file.build()?);
        self.spaces.insert(key, space.clone());
        Ok(space)
    }

    pub fn module(&mut self, path: &Path) -> Result<Arc<GeometricModule>> {
        let key = normalize(path);
        if let Some(m) = self.modules.get(&key) {
            return Ok(m.clone());
        }
        let file: ModuleFile = read_json(path)?;
        let space = self.space(&resolve(path, &file.space))?;
        let module = Arc::new(GeometricModule::new(space, file.multiplicity)?);
        self.modules.insert(key, module.clone());
        Ok(module)
    }

    pub fn operator(&mut self, path: &Path) -> Result<ModuleOperator> {
        let file: OperatorFile = read_json(path)?;
        let source = self.module(&resolve(path, &file.source))?;
        let target = self.module(&resolve(path, &file.target))?;
        ModuleOperator::new(file.matrix.build()?, source, target)
    }

    pub fn map(&mut self, path: &Path) -> Result<CoarseMapRep> {
        let file: MapFile = read_json(path)?;
        let source = self.space(&resolve(path, &file.source))?;
        let target = self.space(&resolve(path, &file.target))?;
        CoarseMapRep::from_function(source, target, &file.map)
    }

    pub fn relation(&mut self, path: &Path) -> Result<Relation> {
        let file: RelationFile = read_json(path)?;
        let source = self.space(&resolve(path, &file.source))?;
        let target = self.space(&resolve(path, &file.target))?;
        Relation::new(source, target, file.pairs)
    }

    /// The space path a map file points at, as written on disk.
    pub fn map_space_paths(path: &Path) -> Result<(PathBuf, PathBuf)> {
        let file: MapFile = read_json(path)?;
        Ok((resolve(path, &file.source), resolve(path, &file.target)))
    }
}

pub fn load_partition(path: &Path) -> Result<Vec<Vec<usize>>> {
    read_json(path)
}

pub fn operator_file(op: &ModuleOperator, source: &str, target: &str) -> OperatorFile {
    OperatorFile {
        source: source.to_string(),
        target: target.to_string(),
        matrix: MatrixFile::from_matrix(op.matrix()),
    }
}
