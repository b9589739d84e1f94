//! Intersection cohomology of stratified simplicial complexes.
//!
//! This crate computes intersection cohomology with general perversities —
//! including superperversities, which exceed the classical growth range at
//! codimension two — for finite simplicial pseudomanifolds equipped with a
//! stratification.  The construction is sheaf-theoretic: cellular sheaf
//! complexes on the face poset, derived pushforwards computed by ordered
//! chain (Roos) complexes, and stalkwise truncations, iterated stratum by
//! stratum.  Exact linear algebra over the rationals or a prime field keeps
//! every rank and every differential exact.
//!
//! Alongside the computation, the crate mechanizes several axiomatic
//! characterizations of the resulting sheaf complexes and can empirically
//! probe how the answers depend on the chosen stratification.

pub mod axioms;
pub mod builtin;
pub mod complex;
pub mod io;
pub mod linalg;
pub mod perversity;
pub mod deligne;
pub mod sheaf;
