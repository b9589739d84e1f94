//! Finite simplicial complexes, their face posets, and stratifications.
//!
//! Simplices are stored once, sorted by (dimension, lexicographic vertex
//! order), so ids of equal dimension are contiguous and all derived data is
//! deterministic.  A stratification is a depth map on simplices: depth `k`
//! places a simplex in the stratum of codimension `k`, i.e. the closed
//! skeleton `X^(n-k)` consists of the simplices of depth at least `k`, and
//! the open sets `U_k = X - X^(n-k)` are the simplices of depth below `k`.

use crate::linalg::{CochainComplex, Field, Scalar, SparseMat};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

pub type SimplexId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("complex has no simplices")]
    EmptyComplex,
    #[error("duplicate vertex name `{0}`")]
    DuplicateVertexName(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("vertex `{vertex}` repeats in simplex `{simplex}`")]
    DuplicateVertexInSimplex { simplex: String, vertex: String },
    #[error("duplicate maximal simplex `{0}`")]
    DuplicateSimplex(String),
    #[error("unknown simplex `{0}`")]
    UnknownSimplex(String),
    #[error("stratification is not closed: face `{face}` of `{simplex}` has smaller depth")]
    NotClosed { face: String, simplex: String },
    #[error("simplex `{simplex}` of dimension {dim} cannot have depth {depth} in a {n}-dimensional complex")]
    DimensionExceeded { simplex: String, dim: usize, depth: u32, n: usize },
    #[error("top stratum is not dense: `{simplex}` is not a face of any top-dimensional simplex")]
    TopStratumNotDense { simplex: String },
    #[error("singular locus is not closed: face `{face}` of `{simplex}` is missing")]
    SigmaNotClosed { face: String, simplex: String },
    #[error("singular locus contains top-dimensional simplex `{simplex}`")]
    SigmaTooDeep { simplex: String },
}

// ---------------------------------------------------------------------------
// Simplicial complexes
// ---------------------------------------------------------------------------

/// A finite abstract simplicial complex with named vertices.
#[derive(Debug, Clone)]
pub struct SimplicialComplex {
    vertex_names: Vec<String>,
    vertex_index: BTreeMap<String, usize>,
    /// Sorted vertex-index sets, ordered by (dimension, lexicographic).
    simplices: Vec<Vec<usize>>,
    index: BTreeMap<Vec<usize>, SimplexId>,
    /// `dim_offsets[q]` is the first id of dimension `q`; one past the end
    /// is appended, so the table has `dim + 2` entries for a nonempty complex.
    dim_offsets: Vec<usize>,
    facets: Vec<Vec<SimplexId>>,
    cofacets: Vec<Vec<SimplexId>>,
}

impl SimplicialComplex {
    /// Build from maximal simplices given by vertex names.  The face closure
    /// is generated; exact duplicates in the input are rejected.
    pub fn from_maximal(
        vertices: Vec<String>,
        maximal: &[Vec<String>],
    ) -> Result<SimplicialComplex, ComplexError> {
        if maximal.is_empty() {
            return Err(ComplexError::EmptyComplex);
        }
        let mut vertex_index = BTreeMap::new();
        for (i, name) in vertices.iter().enumerate() {
            if vertex_index.insert(name.clone(), i).is_some() {
                return Err(ComplexError::DuplicateVertexName(name.clone()));
            }
        }
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut closure: BTreeSet<Vec<usize>> = BTreeSet::new();
        for names in maximal {
            let mut s = Vec::with_capacity(names.len());
            for name in names {
                let Some(&i) = vertex_index.get(name) else {
                    return Err(ComplexError::UnknownVertex(name.clone()));
                };
                if s.contains(&i) {
                    return Err(ComplexError::DuplicateVertexInSimplex {
                        simplex: names.join(","),
                        vertex: name.clone(),
                    });
                }
                s.push(i);
            }
            s.sort_unstable();
            if !seen.insert(s.clone()) {
                return Err(ComplexError::DuplicateSimplex(names.join(",")));
            }
            // All nonempty subsets.
            let m = s.len();
            for mask in 1u32..(1 << m) {
                let face: Vec<usize> =
                    (0..m).filter(|i| mask >> i & 1 == 1).map(|i| s[i]).collect();
                closure.insert(face);
            }
        }
        Ok(SimplicialComplex::build(vertices, vertex_index, closure))
    }

    /// Build from an already face-closed set of simplices (may be empty);
    /// used internally for links and order complexes.
    fn from_closed_set(
        vertex_names: Vec<String>,
        sets: BTreeSet<Vec<usize>>,
    ) -> SimplicialComplex {
        let vertex_index =
            vertex_names.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        SimplicialComplex::build(vertex_names, vertex_index, sets)
    }

    fn build(
        vertex_names: Vec<String>,
        vertex_index: BTreeMap<String, usize>,
        sets: BTreeSet<Vec<usize>>,
    ) -> SimplicialComplex {
        let mut simplices: Vec<Vec<usize>> = sets.into_iter().collect();
        simplices.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        let index: BTreeMap<Vec<usize>, usize> =
            simplices.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let top = simplices.last().map_or(0, |s| s.len() - 1);
        let mut dim_offsets = vec![0usize; top + 2];
        for (q, off) in dim_offsets.iter_mut().enumerate().skip(1) {
            *off = simplices.partition_point(|s| s.len() < q + 1);
        }
        if !simplices.is_empty() {
            dim_offsets[top + 1] = simplices.len();
        }
        let mut facets: Vec<Vec<usize>> = vec![Vec::new(); simplices.len()];
        let mut cofacets: Vec<Vec<usize>> = vec![Vec::new(); simplices.len()];
        for (id, s) in simplices.iter().enumerate() {
            if s.len() == 1 {
                continue;
            }
            for drop in 0..s.len() {
                let face: Vec<usize> = s
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != drop)
                    .map(|(_, v)| *v)
                    .collect();
                let fid = index[&face];
                facets[id].push(fid);
                cofacets[fid].push(id);
            }
        }
        for v in facets.iter_mut().chain(cofacets.iter_mut()) {
            v.sort_unstable();
        }
        SimplicialComplex {
            vertex_names,
            vertex_index,
            simplices,
            index,
            dim_offsets,
            facets,
            cofacets,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    /// Dimension of the complex (0 for an empty complex; check `is_empty`).
    pub fn dim(&self) -> usize {
        self.simplices.last().map_or(0, |s| s.len() - 1)
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    pub fn simplex(&self, id: SimplexId) -> &[usize] {
        &self.simplices[id]
    }

    pub fn dim_of(&self, id: SimplexId) -> usize {
        self.simplices[id].len() - 1
    }

    pub fn name_of(&self, id: SimplexId) -> String {
        self.simplices[id]
            .iter()
            .map(|&v| self.vertex_names[v].as_str())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Ids of all simplices of the given dimension, as a contiguous range.
    pub fn ids_of_dim(&self, q: usize) -> std::ops::Range<SimplexId> {
        if q + 1 >= self.dim_offsets.len() {
            return 0..0;
        }
        self.dim_offsets[q]..self.dim_offsets[q + 1]
    }

    pub fn ids(&self) -> std::ops::Range<SimplexId> {
        0..self.simplices.len()
    }

    /// Look up a simplex by vertex names (order-insensitive).
    pub fn id_by_names(&self, names: &[&str]) -> Option<SimplexId> {
        let mut s = Vec::with_capacity(names.len());
        for n in names {
            s.push(*self.vertex_index.get(*n)?);
        }
        s.sort_unstable();
        s.dedup();
        if s.len() != names.len() {
            return None;
        }
        self.index.get(&s).copied()
    }

    /// Parse a comma-joined simplex name.
    pub fn id_by_joined_name(&self, name: &str) -> Option<SimplexId> {
        let parts: Vec<&str> = name.split(',').map(str::trim).collect();
        self.id_by_names(&parts)
    }

    pub fn facets(&self, id: SimplexId) -> &[SimplexId] {
        &self.facets[id]
    }

    pub fn cofacets(&self, id: SimplexId) -> &[SimplexId] {
        &self.cofacets[id]
    }

    /// Is `a` a (not necessarily proper) face of `b`?
    pub fn is_face(&self, a: SimplexId, b: SimplexId) -> bool {
        let (sa, sb) = (&self.simplices[a], &self.simplices[b]);
        if sa.len() > sb.len() {
            return false;
        }
        sa.iter().all(|v| sb.binary_search(v).is_ok())
    }

    /// Open star: all simplices having `id` as a face (including itself).
    pub fn star(&self, id: SimplexId) -> BTreeSet<SimplexId> {
        // Breadth-first over cofacets.
        let mut out = BTreeSet::new();
        let mut stack = vec![id];
        while let Some(s) = stack.pop() {
            if out.insert(s) {
                stack.extend_from_slice(&self.cofacets[s]);
            }
        }
        out
    }

    /// Open star minus the simplex itself (the strict up-set).
    pub fn strict_star(&self, id: SimplexId) -> BTreeSet<SimplexId> {
        let mut s = self.star(id);
        s.remove(&id);
        s
    }

    /// Downward closure of a set of simplices.
    pub fn closure(&self, ids: impl IntoIterator<Item = SimplexId>) -> BTreeSet<SimplexId> {
        let mut out = BTreeSet::new();
        let mut stack: Vec<usize> = ids.into_iter().collect();
        while let Some(s) = stack.pop() {
            if out.insert(s) {
                stack.extend_from_slice(&self.facets[s]);
            }
        }
        out
    }

    /// Link of a simplex: all simplices disjoint from it whose union with it
    /// is again a simplex.  May be empty.
    pub fn link(&self, id: SimplexId) -> SimplicialComplex {
        self.link_within(id, None)
    }

    /// Link computed inside a down-closed subset of simplices (pass `None`
    /// for the whole complex).
    pub fn link_within(
        &self,
        id: SimplexId,
        subset: Option<&BTreeSet<SimplexId>>,
    ) -> SimplicialComplex {
        let s = &self.simplices[id];
        let mut sets = BTreeSet::new();
        for (tid, t) in self.simplices.iter().enumerate() {
            if let Some(sub) = subset {
                if !sub.contains(&tid) {
                    continue;
                }
            }
            if t.iter().any(|v| s.binary_search(v).is_ok()) {
                continue;
            }
            let mut union: Vec<usize> = s.iter().chain(t.iter()).copied().collect();
            union.sort_unstable();
            let Some(&uid) = self.index.get(&union) else { continue };
            if let Some(sub) = subset {
                if !sub.contains(&uid) {
                    continue;
                }
            }
            sets.insert(t.clone());
        }
        SimplicialComplex::from_closed_set(self.vertex_names.clone(), sets)
    }

    /// Ids of the `j`-skeleton (all simplices of dimension at most `j`).
    pub fn skeleton(&self, j: i64) -> BTreeSet<SimplexId> {
        self.ids().filter(|&id| (self.dim_of(id) as i64) <= j).collect()
    }

    /// Simplices that are not proper faces of any other simplex.
    pub fn maximal_simplices(&self) -> Vec<SimplexId> {
        self.ids().filter(|&id| self.cofacets[id].is_empty()).collect()
    }

    /// Closed pseudoboundary: downward closure of the ridges ((n-1)-simplices)
    /// with exactly one top-dimensional cofacet.
    pub fn pseudoboundary(&self) -> BTreeSet<SimplexId> {
        if self.is_empty() || self.dim() == 0 {
            return BTreeSet::new();
        }
        let n = self.dim();
        let ridges: Vec<SimplexId> = self
            .ids_of_dim(n - 1)
            .filter(|&id| {
                self.cofacets[id].iter().filter(|&&c| self.dim_of(c) == n).count() == 1
            })
            .collect();
        self.closure(ridges)
    }

    /// Signed coboundary matrix from dimension `q` to `q + 1`.  Columns are
    /// the `q`-simplices in id order, rows the `(q+1)`-simplices; the entry
    /// for dropping position `i` of the target simplex is `(-1)^i`.
    pub fn coboundary(&self, q: usize, field: &Field) -> SparseMat {
        let src = self.ids_of_dim(q);
        let tgt = self.ids_of_dim(q + 1);
        let (src0, tgt0) = (src.start, tgt.start);
        let mut triplets: Vec<(usize, usize, Scalar)> = Vec::new();
        for tid in tgt.clone() {
            let t = &self.simplices[tid];
            for (i, _) in t.iter().enumerate() {
                let face: Vec<usize> = t
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, v)| *v)
                    .collect();
                let fid = self.index[&face];
                let sign = if i % 2 == 0 { 1 } else { -1 };
                triplets.push((tid - tgt0, fid - src0, field.from_i64(sign)));
            }
        }
        SparseMat::from_triplets(tgt.len(), src.len(), triplets, field)
    }

    /// Simplicial cochain complex with the given coefficients.
    pub fn cochain_complex(&self, field: Field) -> CochainComplex {
        if self.is_empty() {
            return CochainComplex::zero(field);
        }
        let n = self.dim();
        let dims: Vec<usize> = (0..=n).map(|q| self.ids_of_dim(q).len()).collect();
        let diffs: Vec<SparseMat> = (0..n).map(|q| self.coboundary(q, &field)).collect();
        CochainComplex::new(field, 0, dims, diffs)
            .expect("simplicial coboundary squares to zero")
    }

    /// Betti numbers over the given field, as a degree -> rank map.
    pub fn betti(&self, field: Field) -> BTreeMap<i32, usize> {
        self.cochain_complex(field).cohomology()
    }
}

/// Order complex (nerve) of a subset of the face poset: vertices are the
/// subset's simplices, simplices are the strict chains under the face
/// relation.  This is an independent model of the subset's topology when the
/// subset is open (up-closed) or closed (down-closed).
pub fn order_complex(c: &SimplicialComplex, subset: &BTreeSet<SimplexId>) -> SimplicialComplex {
    let members: Vec<SimplexId> = subset.iter().copied().collect();
    let pos: BTreeMap<SimplexId, usize> = members.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let vertex_names: Vec<String> = members.iter().map(|&s| c.name_of(s)).collect();
    // Chains, grown upward; simplex ids increase along a chain because faces
    // sort before cofaces.
    let mut sets: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut stack: Vec<Vec<SimplexId>> = members.iter().map(|&s| vec![s]).collect();
    while let Some(chain) = stack.pop() {
        sets.insert(chain.iter().map(|s| pos[s]).collect());
        let last = *chain.last().unwrap();
        for &next in &members {
            if next > last && c.is_face(last, next) {
                let mut longer = chain.clone();
                longer.push(next);
                stack.push(longer);
            }
        }
    }
    SimplicialComplex::from_closed_set(vertex_names, sets)
}

// ---------------------------------------------------------------------------
// Stratifications
// ---------------------------------------------------------------------------

/// A stratification of a complex, recorded as a depth per simplex.
///
/// Depth `k` means the simplex lies in the codimension-`k` stratum
/// `S_(n-k) = X^(n-k) - X^(n-k-1)`; depth 0 is the dense top stratum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stratification {
    depth: Vec<u32>,
}

impl Stratification {
    /// The trivial (intrinsic-coarsest) stratification: everything in the
    /// top stratum.
    pub fn trivial(c: &SimplicialComplex) -> Stratification {
        Stratification { depth: vec![0; c.len()] }
    }

    pub fn from_depths(c: &SimplicialComplex, depth: Vec<u32>) -> Stratification {
        assert_eq!(depth.len(), c.len(), "depth table size mismatch");
        Stratification { depth }
    }

    /// Build from a name -> depth map; omitted simplices get depth 0.
    pub fn from_named_depths(
        c: &SimplicialComplex,
        named: &BTreeMap<String, u32>,
    ) -> Result<Stratification, ComplexError> {
        let mut depth = vec![0u32; c.len()];
        for (name, &d) in named {
            let Some(id) = c.id_by_joined_name(name) else {
                return Err(ComplexError::UnknownSimplex(name.clone()));
            };
            depth[id] = d;
        }
        Ok(Stratification { depth })
    }

    /// The default stratification subject to a face-closed singular locus:
    /// each simplex of the locus gets the largest depth its dimension
    /// allows (`n - dim`), everything else depth 0.
    pub fn default_for_sigma(
        c: &SimplicialComplex,
        sigma: &BTreeSet<SimplexId>,
    ) -> Result<Stratification, ComplexError> {
        let n = c.dim();
        let mut depth = vec![0u32; c.len()];
        for &id in sigma {
            for &f in c.facets(id) {
                if !sigma.contains(&f) {
                    return Err(ComplexError::SigmaNotClosed {
                        face: c.name_of(f),
                        simplex: c.name_of(id),
                    });
                }
            }
            if c.dim_of(id) >= n {
                return Err(ComplexError::SigmaTooDeep { simplex: c.name_of(id) });
            }
            depth[id] = (n - c.dim_of(id)) as u32;
        }
        Ok(Stratification { depth })
    }

    pub fn depth(&self, id: SimplexId) -> u32 {
        self.depth[id]
    }

    pub fn depths(&self) -> &[u32] {
        &self.depth
    }

    /// Check that the depth map defines a filtration by closed subcomplexes
    /// compatible with the dimension bounds, with a dense top stratum.
    pub fn validate(&self, c: &SimplicialComplex) -> Result<(), ComplexError> {
        if c.is_empty() {
            return Err(ComplexError::EmptyComplex);
        }
        let n = c.dim();
        for id in c.ids() {
            for &f in c.facets(id) {
                if self.depth[f] < self.depth[id] {
                    return Err(ComplexError::NotClosed {
                        face: c.name_of(f),
                        simplex: c.name_of(id),
                    });
                }
            }
            let d = self.depth[id];
            if d >= 1 && c.dim_of(id) + d as usize > n {
                return Err(ComplexError::DimensionExceeded {
                    simplex: c.name_of(id),
                    dim: c.dim_of(id),
                    depth: d,
                    n,
                });
            }
        }
        // Dense top stratum: every simplex is a face of a top-dimensional
        // simplex (top-dimensional simplices are depth 0 by the bound above).
        for id in c.ids() {
            let dense = c
                .star(id)
                .iter()
                .any(|&s| c.dim_of(s) == n);
            if !dense {
                return Err(ComplexError::TopStratumNotDense { simplex: c.name_of(id) });
            }
        }
        Ok(())
    }

    /// The singular locus: simplices of positive depth (a closed set once
    /// validated).
    pub fn singular_set(&self, c: &SimplicialComplex) -> BTreeSet<SimplexId> {
        c.ids().filter(|&id| self.depth[id] >= 1).collect()
    }

    /// Closed skeleton `X^j`: simplices of depth at least `n - j`.
    pub fn closed_skeleton(&self, c: &SimplicialComplex, j: i64) -> BTreeSet<SimplexId> {
        let n = c.dim() as i64;
        c.ids().filter(|&id| self.depth[id] as i64 >= n - j).collect()
    }

    /// Open union of strata `U_k = X - X^(n-k)`: simplices of depth below
    /// `k`.  `U_1` is the top stratum; `U_(n+1) = X`.
    pub fn open_union(&self, c: &SimplicialComplex, k: i64) -> BTreeSet<SimplexId> {
        c.ids().filter(|&id| (self.depth[id] as i64) < k).collect()
    }

    /// The codimension-`k` stratum `S_(n-k)` (depth exactly `k`).
    pub fn stratum(&self, c: &SimplicialComplex, k: u32) -> BTreeSet<SimplexId> {
        c.ids().filter(|&id| self.depth[id] == k).collect()
    }

    /// Depths with a nonempty stratum, ascending.
    pub fn present_depths(&self) -> BTreeSet<u32> {
        self.depth.iter().copied().collect()
    }

    /// Does this stratification have the given closed set as its singular
    /// locus?  Comparisons of intersection cohomology across stratifications
    /// are meaningful exactly when the singular loci agree.
    pub fn is_subject_to(&self, c: &SimplicialComplex, sigma: &BTreeSet<SimplexId>) -> bool {
        self.singular_set(c) == *sigma
    }

    /// Poset-connected components of the codimension-`k` stratum.
    pub fn stratum_components(
        &self,
        c: &SimplicialComplex,
        k: u32,
    ) -> Vec<Vec<SimplexId>> {
        let members: Vec<SimplexId> = self.stratum(c, k).into_iter().collect();
        let pos: BTreeMap<SimplexId, usize> =
            members.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let mut uf = UnionFind::new(members.len());
        for (i, &id) in members.iter().enumerate() {
            for &cf in c.cofacets(id) {
                if let Some(&j) = pos.get(&cf) {
                    uf.union(i, j);
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<SimplexId>> = BTreeMap::new();
        for (i, &id) in members.iter().enumerate() {
            groups.entry(uf.find(i)).or_default().push(id);
        }
        groups.into_values().collect()
    }

    /// Heuristic checks that the stratification is geometrically reasonable:
    /// pure-dimensional strata whose simplex links inside their skeleton
    /// have the Betti numbers of the appropriate sphere, a pseudoboundary
    /// contained in the singular locus, and ridges with at most two
    /// top-dimensional cofacets.  Failures are warnings, not errors: the
    /// axioms and the sheaf machinery are well-defined regardless.
    pub fn sanity_warnings(&self, c: &SimplicialComplex) -> Vec<SanityWarning> {
        let mut out = Vec::new();
        let n = c.dim();
        // Ridge branching.
        if n >= 1 {
            for id in c.ids_of_dim(n - 1) {
                let tops = c.cofacets(id).iter().filter(|&&t| c.dim_of(t) == n).count();
                if tops > 2 {
                    out.push(SanityWarning::OverbranchedRidge {
                        simplex: c.name_of(id),
                        cofacets: tops,
                    });
                }
            }
        }
        // Pseudoboundary inside the singular locus.
        let sing = self.singular_set(c);
        for id in c.pseudoboundary() {
            if !sing.contains(&id) {
                out.push(SanityWarning::PseudoboundaryNotSingular { simplex: c.name_of(id) });
            }
        }
        // Per-stratum purity and link sphericity.
        for &k in self.present_depths().iter().filter(|&&k| k >= 1) {
            let stratum_dim = n as i64 - k as i64;
            let skeleton = self.closed_skeleton(c, stratum_dim);
            for id in self.stratum(c, k) {
                let d = c.dim_of(id);
                let pure = c.star(id).iter().any(|&s| {
                    self.depth[s] == k && c.dim_of(s) as i64 == stratum_dim
                });
                if !pure {
                    out.push(SanityWarning::ImpureStratum {
                        simplex: c.name_of(id),
                        depth: k,
                    });
                    continue;
                }
                let link = c.link_within(id, Some(&skeleton));
                let expected_dim = stratum_dim - d as i64 - 1;
                let expected = sphere_betti(expected_dim);
                let observed = link.betti(Field::Q);
                if observed != expected {
                    out.push(SanityWarning::NonSphericalStratumLink {
                        simplex: c.name_of(id),
                        depth: k,
                        expected_sphere_dim: expected_dim,
                        observed: observed.into_iter().collect(),
                    });
                }
            }
        }
        out
    }
}

/// Betti table of the sphere of the given dimension (unreduced; the
/// (-1)-sphere is the empty complex).
fn sphere_betti(dim: i64) -> BTreeMap<i32, usize> {
    match dim {
        d if d < 0 => BTreeMap::new(),
        0 => BTreeMap::from([(0, 2)]),
        d => BTreeMap::from([(0, 1), (d as i32, 1)]),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SanityWarning {
    /// A stratum member with no coface of the stratum's full dimension.
    ImpureStratum { simplex: String, depth: u32 },
    /// Link of a stratum simplex inside its skeleton is not a homology sphere.
    NonSphericalStratumLink {
        simplex: String,
        depth: u32,
        expected_sphere_dim: i64,
        observed: Vec<(i32, usize)>,
    },
    /// A ridge with exactly one top cofacet lies outside the singular locus.
    PseudoboundaryNotSingular { simplex: String },
    /// A ridge with more than two top-dimensional cofacets.
    OverbranchedRidge { simplex: String, cofacets: usize },
}

impl std::fmt::Display for SanityWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SanityWarning::ImpureStratum { simplex, depth } => write!(
                f,
                "impure stratum: `{simplex}` (depth {depth}) has no coface of the stratum dimension"
            ),
            SanityWarning::NonSphericalStratumLink { simplex, depth, expected_sphere_dim, observed } => {
                write!(
                    f,
                    "link of `{simplex}` (depth {depth}) inside its skeleton is not a {expected_sphere_dim}-sphere (betti {observed:?})"
                )
            }
            SanityWarning::PseudoboundaryNotSingular { simplex } => {
                write!(f, "pseudoboundary simplex `{simplex}` is not in the singular locus")
            }
            SanityWarning::OverbranchedRidge { simplex, cofacets } => {
                write!(f, "ridge `{simplex}` has {cofacets} top-dimensional cofacets")
            }
        }
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, i: usize) -> usize {
        if self.parent[i] != i {
            let root = self.find(self.parent[i]);
            self.parent[i] = root;
        }
        self.parent[i]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}
