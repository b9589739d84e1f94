//! JSON file formats for complexes, stratifications, singular loci, and
//! local systems.
//!
//! All formats name simplices by comma-joined vertex names ("v0,v1"); maps
//! use `BTreeMap` so serialized output is deterministic.

use crate::complex::{ComplexError, SimplicialComplex, SimplexId, Stratification};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("invalid local-system edge key `{0}` (expected `face<coface`)")]
    BadEdgeKey(String),
    #[error("invalid matrix entry `{0}`")]
    BadEntry(String),
}

fn read_file(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.display().to_string(),
        source,
    })
}

// ---------------------------------------------------------------------------
// Complex files
// ---------------------------------------------------------------------------

/// `{"vertices": ["v0", ...], "maximal_simplices": [["v0","v1"], ...]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplexFile {
    pub vertices: Vec<String>,
    pub maximal_simplices: Vec<Vec<String>>,
}

impl ComplexFile {
    pub fn into_complex(self) -> Result<SimplicialComplex, ComplexError> {
        SimplicialComplex::from_maximal(self.vertices, &self.maximal_simplices)
    }

    pub fn from_complex(c: &SimplicialComplex) -> ComplexFile {
        ComplexFile {
            vertices: c.vertex_names().to_vec(),
            maximal_simplices: c
                .maximal_simplices()
                .into_iter()
                .map(|id| {
                    c.simplex(id)
                        .iter()
                        .map(|&v| c.vertex_names()[v].clone())
                        .collect()
                })
                .collect(),
        }
    }
}

pub fn parse_complex(json: &str) -> Result<SimplicialComplex, IoError> {
    let file: ComplexFile = serde_json::from_str(json)?;
    Ok(file.into_complex()?)
}

pub fn read_complex(path: &Path) -> Result<SimplicialComplex, IoError> {
    parse_complex(&read_file(path)?)
}

// ---------------------------------------------------------------------------
// Stratification files
// ---------------------------------------------------------------------------

/// `{"depth": {"v0": 2, "v0,v1": 1, ...}}`; omitted simplices have depth 0.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StratificationFile {
    pub depth: BTreeMap<String, u32>,
}

impl StratificationFile {
    pub fn into_stratification(
        self,
        c: &SimplicialComplex,
    ) -> Result<Stratification, ComplexError> {
        Stratification::from_named_depths(c, &self.depth)
    }

    pub fn from_stratification(c: &SimplicialComplex, s: &Stratification) -> StratificationFile {
        let depth = c
            .ids()
            .filter(|&id| s.depth(id) > 0)
            .map(|id| (c.name_of(id), s.depth(id)))
            .collect();
        StratificationFile { depth }
    }
}

pub fn parse_stratification(
    json: &str,
    c: &SimplicialComplex,
) -> Result<Stratification, IoError> {
    let file: StratificationFile = serde_json::from_str(json)?;
    Ok(file.into_stratification(c)?)
}

pub fn read_stratification(
    path: &Path,
    c: &SimplicialComplex,
) -> Result<Stratification, IoError> {
    parse_stratification(&read_file(path)?, c)
}

// ---------------------------------------------------------------------------
// Singular locus files
// ---------------------------------------------------------------------------

/// `{"simplices": [["v0"], ["v0","v1"], ...]}` — must be face-closed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SigmaFile {
    pub simplices: Vec<Vec<String>>,
}

impl SigmaFile {
    pub fn into_sigma(self, c: &SimplicialComplex) -> Result<BTreeSet<SimplexId>, ComplexError> {
        let mut out = BTreeSet::new();
        for names in &self.simplices {
            let refs: Vec<&str> = names.iter().map(String::as_str).collect();
            let Some(id) = c.id_by_names(&refs) else {
                return Err(ComplexError::UnknownSimplex(names.join(",")));
            };
            out.insert(id);
        }
        for &id in &out {
            for &f in c.facets(id) {
                if !out.contains(&f) {
                    return Err(ComplexError::SigmaNotClosed {
                        face: c.name_of(f),
                        simplex: c.name_of(id),
                    });
                }
            }
        }
        Ok(out)
    }
}

pub fn parse_sigma(json: &str, c: &SimplicialComplex) -> Result<BTreeSet<SimplexId>, IoError> {
    let file: SigmaFile = serde_json::from_str(json)?;
    Ok(file.into_sigma(c)?)
}

pub fn read_sigma(path: &Path, c: &SimplicialComplex) -> Result<BTreeSet<SimplexId>, IoError> {
    parse_sigma(&read_file(path)?, c)
}

// ---------------------------------------------------------------------------
// Local system files
// ---------------------------------------------------------------------------

/// A matrix entry: an integer or a fraction literal like `"1/2"`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EntryLit {
    Int(i64),
    Lit(String),
}

/// `{"rank": 1, "edges": {"t0<t0,t1": [[-1]], ...}}`
///
/// Keys are `face<coface` cover pairs inside the regular part; omitted
/// cover pairs default to the identity.  Matrices are row-major,
/// rank x rank.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LocalSystemFile {
    pub rank: usize,
    #[serde(default)]
    pub edges: BTreeMap<String, Vec<Vec<EntryLit>>>,
}

/// Edge matrices keyed by `(face, coface)` simplex id pairs.
pub type ResolvedEdges = BTreeMap<(SimplexId, SimplexId), Vec<Vec<EntryLit>>>;

impl LocalSystemFile {
    /// Resolve edge keys to simplex id pairs (face first).
    pub fn resolved_edges(&self, c: &SimplicialComplex) -> Result<ResolvedEdges, IoError> {
        let mut out = BTreeMap::new();
        for (key, mat) in &self.edges {
            let Some((face, coface)) = key.split_once('<') else {
                return Err(IoError::BadEdgeKey(key.clone()));
            };
            let Some(fid) = c.id_by_joined_name(face.trim()) else {
                return Err(IoError::Complex(ComplexError::UnknownSimplex(face.to_string())));
            };
            let Some(cid) = c.id_by_joined_name(coface.trim()) else {
                return Err(IoError::Complex(ComplexError::UnknownSimplex(coface.to_string())));
            };
            out.insert((fid, cid), mat.clone());
        }
        Ok(out)
    }
}

pub fn parse_local_system_file(json: &str) -> Result<LocalSystemFile, IoError> {
    Ok(serde_json::from_str(json)?)
}

pub fn read_local_system_file(path: &Path) -> Result<LocalSystemFile, IoError> {
    parse_local_system_file(&read_file(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_roundtrip() {
        let json = r#"{
            "vertices": ["a", "b", "c"],
            "maximal_simplices": [["a", "b", "c"]]
        }"#;
        let c = parse_complex(json).unwrap();
        assert_eq!(c.len(), 7);
        let back = ComplexFile::from_complex(&c);
        assert_eq!(back.maximal_simplices, vec![vec!["a", "b", "c"]]);
        let again = back.into_complex().unwrap();
        assert_eq!(again.len(), 7);
    }

    #[test]
    fn stratification_parse_and_errors() {
        let c = crate::builtin::sphere2();
        let s = parse_stratification(r#"{"depth": {"v0": 2}}"#, &c).unwrap();
        assert_eq!(s.depth(c.id_by_names(&["v0"]).unwrap()), 2);
        s.validate(&c).unwrap();
        let bad = parse_stratification(r#"{"depth": {"v9": 2}}"#, &c);
        assert!(matches!(bad, Err(IoError::Complex(ComplexError::UnknownSimplex(_)))));
        // Whitespace-tolerant simplex names.
        let s = parse_stratification(r#"{"depth": {"v0, v1": 1, "v0": 1, "v1": 1}}"#, &c).unwrap();
        assert_eq!(s.depth(c.id_by_names(&["v0", "v1"]).unwrap()), 1);
    }

    #[test]
    fn sigma_requires_closure() {
        let c = crate::builtin::sphere2();
        let good = parse_sigma(r#"{"simplices": [["v0"], ["v1"], ["v0","v1"]]}"#, &c).unwrap();
        assert_eq!(good.len(), 3);
        let bad = parse_sigma(r#"{"simplices": [["v0","v1"]]}"#, &c);
        assert!(matches!(bad, Err(IoError::Complex(ComplexError::SigmaNotClosed { .. }))));
    }

    #[test]
    fn local_system_file_parses() {
        let c = crate::builtin::torus7();
        let json = r#"{
            "rank": 2,
            "edges": {"t0<t0,t1": [[0, -1], [1, "1/2"]]}
        }"#;
        let f = parse_local_system_file(json).unwrap();
        assert_eq!(f.rank, 2);
        let edges = f.resolved_edges(&c).unwrap();
        assert_eq!(edges.len(), 1);
        let (&(a, b), _) = edges.iter().next().unwrap();
        assert_eq!(c.name_of(a), "t0");
        assert_eq!(c.name_of(b), "t0,t1");
        let bad = LocalSystemFile {
            rank: 1,
            edges: BTreeMap::from([("t0|t1".to_string(), vec![])]),
        };
        assert!(matches!(bad.resolved_edges(&c), Err(IoError::BadEdgeKey(_))));
    }
}
