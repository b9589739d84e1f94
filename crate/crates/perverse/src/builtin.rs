//! Built-in example spaces: simplex boundaries (spheres), the 7-vertex
//! torus, and suspensions.  These drive the bundled examples and tests.

use crate::complex::{ComplexError, SimplicialComplex, Stratification};
use std::collections::BTreeSet;

/// Boundary of the `m`-simplex on vertices `v0..vm`: a triangulated
/// `(m-1)`-sphere.  `m >= 2`.
pub fn simplex_boundary(m: usize) -> SimplicialComplex {
    assert!(m >= 2, "need at least a triangle boundary");
    let vertices: Vec<String> = (0..=m).map(|i| format!("v{i}")).collect();
    let mut maximal = Vec::new();
    for drop in 0..=m {
        let facet: Vec<String> =
            (0..=m).filter(|&i| i != drop).map(|i| format!("v{i}")).collect();
        maximal.push(facet);
    }
    SimplicialComplex::from_maximal(vertices, &maximal).expect("valid by construction")
}

/// The 2-sphere as the boundary of the 3-simplex (14 simplices).
pub fn sphere2() -> SimplicialComplex {
    simplex_boundary(3)
}

/// The circle as the boundary of the 2-simplex (6 simplices).
pub fn circle() -> SimplicialComplex {
    simplex_boundary(2)
}

/// The 7-vertex (Csaszar) triangulation of the torus on vertices `t0..t6`:
/// triangles `{i, i+1, i+3}` and `{i, i+2, i+3}` mod 7.  Every pair of
/// vertices is an edge, every edge lies in exactly two triangles.
pub fn torus7() -> SimplicialComplex {
    let vertices: Vec<String> = (0..7).map(|i| format!("t{i}")).collect();
    let mut maximal = Vec::new();
    for i in 0..7u32 {
        let t = |d: u32| format!("t{}", (i + d) % 7);
        maximal.push(vec![t(0), t(1), t(3)]);
        maximal.push(vec![t(0), t(2), t(3)]);
    }
    SimplicialComplex::from_maximal(vertices, &maximal).expect("valid by construction")
}

/// Suspension: two new apex vertices are coned onto every maximal simplex.
pub fn suspension(
    c: &SimplicialComplex,
    north: &str,
    south: &str,
) -> Result<SimplicialComplex, ComplexError> {
    let mut vertices: Vec<String> = c.vertex_names().to_vec();
    vertices.push(north.to_string());
    vertices.push(south.to_string());
    let mut maximal = Vec::new();
    for id in c.maximal_simplices() {
        let base: Vec<String> = c
            .simplex(id)
            .iter()
            .map(|&v| c.vertex_names()[v].clone())
            .collect();
        for apex in [north, south] {
            let mut s = base.clone();
            s.push(apex.to_string());
            maximal.push(s);
        }
    }
    SimplicialComplex::from_maximal(vertices, &maximal)
}

/// Suspension of the 7-vertex torus with apexes `N` and `S`: a 3-dimensional
/// pseudomanifold whose two apex points have non-sphere links.
pub fn suspended_torus() -> SimplicialComplex {
    suspension(&torus7(), "N", "S").expect("valid by construction")
}

/// A stratification placing the named vertices at the given depth.
pub fn vertex_stratification(
    c: &SimplicialComplex,
    vertices: &[&str],
    depth: u32,
) -> Stratification {
    let mut depths = vec![0u32; c.len()];
    for name in vertices {
        let id = c.id_by_names(&[name]).unwrap_or_else(|| panic!("no vertex {name}"));
        depths[id] = depth;
    }
    Stratification::from_depths(c, depths)
}

/// The equator singular locus of `sphere2()`: the boundary circle of the
/// face `v0 v1 v2`.
pub fn equator_sigma(c: &SimplicialComplex) -> BTreeSet<usize> {
    let edges = [["v0", "v1"], ["v0", "v2"], ["v1", "v2"]];
    let tops: Vec<usize> = edges
        .iter()
        .map(|e| c.id_by_names(&[e[0], e[1]]).expect("equator edge"))
        .collect();
    c.closure(tops)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Field;
    use std::collections::BTreeMap;

    #[test]
    fn sphere_counts() {
        let s2 = sphere2();
        assert_eq!(s2.len(), 14);
        assert_eq!(s2.dim(), 2);
        let s1 = circle();
        assert_eq!(s1.len(), 6);
        assert_eq!(s1.betti(Field::Q), BTreeMap::from([(0, 1), (1, 1)]));
        let s3 = simplex_boundary(4);
        assert_eq!(s3.betti(Field::Q), BTreeMap::from([(0, 1), (3, 1)]));
    }

    #[test]
    fn torus_is_a_closed_surface() {
        let t = torus7();
        assert_eq!(t.ids_of_dim(0).len(), 7);
        assert_eq!(t.ids_of_dim(1).len(), 21);
        assert_eq!(t.ids_of_dim(2).len(), 14);
        assert_eq!(t.len(), 42);
        // Every edge lies in exactly two triangles.
        for e in t.ids_of_dim(1) {
            assert_eq!(t.cofacets(e).len(), 2, "edge {}", t.name_of(e));
        }
        assert!(t.pseudoboundary().is_empty());
        assert_eq!(t.betti(Field::Q), BTreeMap::from([(0, 1), (1, 2), (2, 1)]));
        assert_eq!(
            t.betti(Field::prime(7).unwrap()),
            BTreeMap::from([(0, 1), (1, 2), (2, 1)])
        );
    }

    #[test]
    fn suspended_torus_counts_and_betti() {
        let st = suspended_torus();
        assert_eq!(st.ids_of_dim(0).len(), 9);
        assert_eq!(st.ids_of_dim(1).len(), 35);
        assert_eq!(st.ids_of_dim(2).len(), 56);
        assert_eq!(st.ids_of_dim(3).len(), 28);
        assert_eq!(st.len(), 128);
        assert_eq!(
            st.betti(Field::Q),
            BTreeMap::from([(0, 1), (2, 2), (3, 1)])
        );
        // Apex links are tori, not spheres: the suspension is a genuine
        // pseudomanifold with singular points.
        let n = st.id_by_names(&["N"]).unwrap();
        assert_eq!(
            st.link(n).betti(Field::Q),
            BTreeMap::from([(0, 1), (1, 2), (2, 1)])
        );
        // Every ridge bounds exactly two top simplices.
        for r in st.ids_of_dim(2) {
            assert_eq!(st.cofacets(r).len(), 2);
        }
    }

    #[test]
    fn apex_stratification_is_valid_and_sane() {
        let st = suspended_torus();
        let s = vertex_stratification(&st, &["N", "S"], 3);
        s.validate(&st).unwrap();
        assert!(s.sanity_warnings(&st).is_empty());
        assert_eq!(s.stratum_components(&st, 3).len(), 2);
        // Demoting the apexes to depth 2 stays valid but is flagged impure.
        let demoted = vertex_stratification(&st, &["N", "S"], 2);
        demoted.validate(&st).unwrap();
        assert_eq!(
            demoted
                .sanity_warnings(&st)
                .iter()
                .filter(|w| matches!(
                    w,
                    crate::complex::SanityWarning::ImpureStratum { .. }
                ))
                .count(),
            2
        );
    }

    #[test]
    fn equator_locus() {
        let c = sphere2();
        let sigma = equator_sigma(&c);
        assert_eq!(sigma.len(), 6);
        let s = Stratification::default_for_sigma(&c, &sigma).unwrap();
        s.validate(&c).unwrap();
        assert!(s.is_subject_to(&c, &sigma));
    }
}
