//! Cellular sheaves of cochain complexes on the face poset.
//!
//! A sheaf assigns a bounded cochain complex to every simplex of an
//! up-closed carrier and a restriction chain map to every face relation,
//! functorially.  Sections over an open (up-closed) subset are computed by
//! the ordered-chain (Roos) double complex: one block per strict chain in
//! the subset, carrying the stalk of the chain's top simplex.  Derived
//! pushforwards, attachment maps, costalks, stalkwise truncations and a
//! quasi-isomorphic subsheaf reduction are built on top of it.

use crate::complex::{SimplexId, SimplicialComplex, Stratification};
use crate::linalg::{
    cone, induced_cohomology_map, ChainMap, CochainComplex, CohomologyBasis, DoubleComplex,
    Field, LinalgError, Scalar, SparseMat, TotalIndex,
};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SheafError {
    #[error("carrier is not up-closed: `{simplex}` is present but its coface `{coface}` is not")]
    CarrierNotUpClosed { simplex: String, coface: String },
    #[error("missing stalk at `{0}`")]
    MissingStalk(String),
    #[error("stalk at `{0}` is not in the carrier")]
    ExtraStalk(String),
    #[error("missing restriction for cover pair `{from}` < `{to}`")]
    MissingRestriction { from: String, to: String },
    #[error("restriction `{from}` -> `{to}` is invalid: {source}")]
    RestrictionInvalid {
        from: String,
        to: String,
        #[source]
        source: LinalgError,
    },
    #[error("restrictions are not functorial on `{from}` < `{via}` < `{to}`")]
    NotFunctorial { from: String, via: String, to: String },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("reduction is not a quasi-isomorphism at `{simplex}`, degree {degree}")]
    NotQuasiIso { simplex: String, degree: i32 },
}

// ---------------------------------------------------------------------------
// Sheaf complexes
// ---------------------------------------------------------------------------

/// A complex of sheaves on the face poset, presented cellwise.
///
/// Restrictions are stored for every strict face pair inside the carrier
/// (derived once from the cover pairs), so lookups never compose paths.
#[derive(Clone)]
pub struct CellSheafComplex {
    pub field: Field,
    carrier: BTreeSet<SimplexId>,
    stalks: BTreeMap<SimplexId, CochainComplex>,
    res: BTreeMap<(SimplexId, SimplexId), ChainMap>,
}

impl CellSheafComplex {
    /// The constant sheaf of rank `rank` in degree 0 on the whole complex.
    pub fn constant(complex: &SimplicialComplex, field: Field, rank: usize) -> CellSheafComplex {
        let carrier: BTreeSet<SimplexId> = complex.ids().collect();
        let stalks = carrier
            .iter()
            .map(|&id| (id, CochainComplex::concentrated(field, 0, rank)))
            .collect();
        let mut cover = BTreeMap::new();
        for &id in &carrier {
            for &cf in complex.cofacets(id) {
                let mut comps = BTreeMap::new();
                if rank > 0 {
                    comps.insert(0, SparseMat::identity(rank, &field));
                }
                cover.insert((id, cf), ChainMap { comps });
            }
        }
        CellSheafComplex::from_cover_data(complex, field, carrier, stalks, cover)
            .expect("constant sheaf data is consistent")
    }

    /// Assemble a sheaf from stalks and cover-pair restrictions, deriving
    /// all longer restrictions by composition.  Validates shapes, the chain
    /// map property of every cover restriction, and functoriality on
    /// diamonds (which implies path independence).
    pub fn from_cover_data(
        complex: &SimplicialComplex,
        field: Field,
        carrier: BTreeSet<SimplexId>,
        stalks: BTreeMap<SimplexId, CochainComplex>,
        cover: BTreeMap<(SimplexId, SimplexId), ChainMap>,
    ) -> Result<CellSheafComplex, SheafError> {
        for &id in &carrier {
            for &cf in complex.cofacets(id) {
                if !carrier.contains(&cf) {
                    return Err(SheafError::CarrierNotUpClosed {
                        simplex: complex.name_of(id),
                        coface: complex.name_of(cf),
                    });
                }
            }
            if !stalks.contains_key(&id) {
                return Err(SheafError::MissingStalk(complex.name_of(id)));
            }
        }
        for id in stalks.keys() {
            if !carrier.contains(id) {
                return Err(SheafError::ExtraStalk(complex.name_of(*id)));
            }
        }
        // Validate cover restrictions.
        for &id in &carrier {
            for &cf in complex.cofacets(id) {
                let Some(map) = cover.get(&(id, cf)) else {
                    return Err(SheafError::MissingRestriction {
                        from: complex.name_of(id),
                        to: complex.name_of(cf),
                    });
                };
                map.validate(&stalks[&id], &stalks[&cf]).map_err(|source| {
                    SheafError::RestrictionInvalid {
                        from: complex.name_of(id),
                        to: complex.name_of(cf),
                        source,
                    }
                })?;
            }
        }
        // Derive all strict pairs along canonical saturated chains (adding
        // the missing vertices of the coface in ascending order).
        let mut res: BTreeMap<(SimplexId, SimplexId), ChainMap> = BTreeMap::new();
        for &sigma in &carrier {
            for &tau in complex.star(sigma).iter() {
                if tau == sigma || !carrier.contains(&tau) {
                    continue;
                }
                let missing: Vec<usize> = complex
                    .simplex(tau)
                    .iter()
                    .filter(|v| complex.simplex(sigma).binary_search(v).is_err())
                    .copied()
                    .collect();
                let mut cur = sigma;
                let mut acc: Option<ChainMap> = None;
                let mut verts: Vec<usize> = complex.simplex(sigma).to_vec();
                for &v in &missing {
                    verts.push(v);
                    verts.sort_unstable();
                    let next = *complex
                        .cofacets(cur)
                        .iter()
                        .find(|&&cf| complex.simplex(cf) == verts.as_slice())
                        .expect("vertex extensions inside a simplex are cofacets");
                    let step = cover.get(&(cur, next)).ok_or_else(|| {
                        SheafError::MissingRestriction {
                            from: complex.name_of(cur),
                            to: complex.name_of(next),
                        }
                    })?;
                    acc = Some(match acc {
                        None => step.clone(),
                        Some(prev) => step.compose(
                            &prev,
                            &stalks[&sigma],
                            &stalks[&cur],
                            &stalks[&next],
                        ),
                    });
                    cur = next;
                }
                res.insert((sigma, tau), acc.expect("at least one step"));
            }
        }
        let sheaf = CellSheafComplex { field, carrier, stalks, res };
        sheaf.validate_functoriality(complex)?;
        Ok(sheaf)
    }

    /// Check functoriality of the stored all-pairs table: for every stored
    /// pair and every intermediate simplex, composition agrees.
    fn validate_functoriality(&self, complex: &SimplicialComplex) -> Result<(), SheafError> {
        for ((sigma, tau), direct) in &self.res {
            for &mid in complex.star(*sigma).iter() {
                if mid == *sigma || mid == *tau || !self.carrier.contains(&mid) {
                    continue;
                }
                if !complex.is_face(mid, *tau) {
                    continue;
                }
                let first = &self.res[&(*sigma, mid)];
                let second = &self.res[&(mid, *tau)];
                let composed = second.compose(
                    first,
                    &self.stalks[sigma],
                    &self.stalks[&mid],
                    &self.stalks[tau],
                );
                if !chain_maps_equal(&composed, direct, &self.stalks[sigma], &self.stalks[tau]) {
                    return Err(SheafError::NotFunctorial {
                        from: complex.name_of(*sigma),
                        via: complex.name_of(mid),
                        to: complex.name_of(*tau),
                    });
                }
            }
        }
        Ok(())
    }

    /// Full validation: carrier closure, stalk complexes, chain-map property
    /// of every stored restriction, and functoriality.
    pub fn validate(&self, complex: &SimplicialComplex) -> Result<(), SheafError> {
        for &id in &self.carrier {
            for &cf in complex.cofacets(id) {
                if !self.carrier.contains(&cf) {
                    return Err(SheafError::CarrierNotUpClosed {
                        simplex: complex.name_of(id),
                        coface: complex.name_of(cf),
                    });
                }
            }
        }
        for ((sigma, tau), map) in &self.res {
            map.validate(&self.stalks[sigma], &self.stalks[tau]).map_err(|source| {
                SheafError::RestrictionInvalid {
                    from: complex.name_of(*sigma),
                    to: complex.name_of(*tau),
                    source,
                }
            })?;
        }
        self.validate_functoriality(complex)
    }

    pub fn carrier(&self) -> &BTreeSet<SimplexId> {
        &self.carrier
    }

    pub fn stalk(&self, id: SimplexId) -> &CochainComplex {
        &self.stalks[&id]
    }

    /// Restriction along `sigma <= tau` (identity when equal).
    pub fn restriction(&self, sigma: SimplexId, tau: SimplexId) -> ChainMap {
        if sigma == tau {
            return ChainMap::identity(&self.stalks[&sigma]);
        }
        self.res[&(sigma, tau)].clone()
    }

    pub fn restriction_ref(&self, sigma: SimplexId, tau: SimplexId) -> Option<&ChainMap> {
        self.res.get(&(sigma, tau))
    }

    /// Restrict the sheaf to an up-closed subset of its carrier.
    pub fn restrict_to(&self, subset: &BTreeSet<SimplexId>) -> CellSheafComplex {
        debug_assert!(subset.is_subset(&self.carrier));
        let stalks = subset.iter().map(|&id| (id, self.stalks[&id].clone())).collect();
        let res = self
            .res
            .iter()
            .filter(|((a, b), _)| subset.contains(a) && subset.contains(b))
            .map(|(k, v)| (*k, v.clone()))
            .collect();
        CellSheafComplex { field: self.field, carrier: subset.clone(), stalks, res }
    }

    pub fn stalk_betti(&self, id: SimplexId) -> BTreeMap<i32, usize> {
        self.stalks[&id].cohomology()
    }

    /// Simplices whose stalk cohomology is nonzero in the given degree.
    pub fn support_of_degree(&self, degree: i32) -> Vec<SimplexId> {
        self.carrier
            .iter()
            .copied()
            .filter(|&id| self.stalk_betti(id).contains_key(&degree))
            .collect()
    }

    /// Total stalk dimension across the carrier (a size measure).
    pub fn total_size(&self) -> usize {
        self.stalks.values().map(|c| c.total_dim()).sum()
    }

    /// Highest degree carrying a nonzero stalk entry anywhere on the
    /// carrier, if any.  Soft truncation at or above this degree is the
    /// identity.
    pub fn max_entry_degree(&self) -> Option<i32> {
        self.stalks
            .values()
            .filter_map(|s| (s.lo..=s.hi()).rev().find(|&d| s.dim_at(d) > 0))
            .max()
    }

    /// Degreewise summary for debugging / the CLI's check output.
    pub fn debug_summary(&self, complex: &SimplicialComplex) -> serde_json::Value {
        let cells: Vec<serde_json::Value> = self
            .carrier
            .iter()
            .map(|&id| {
                let stalk = &self.stalks[&id];
                serde_json::json!({
                    "simplex": complex.name_of(id),
                    "window": [stalk.lo, stalk.hi()],
                    "dims": stalk.dims,
                    "betti": self.stalk_betti(id),
                })
            })
            .collect();
        serde_json::json!({
            "carrier_size": self.carrier.len(),
            "total_dim": self.total_size(),
            "cells": cells,
        })
    }
}

fn chain_maps_equal(
    a: &ChainMap,
    b: &ChainMap,
    source: &CochainComplex,
    target: &CochainComplex,
) -> bool {
    let lo = source.lo.min(target.lo);
    let hi = source.hi().max(target.hi());
    (lo..=hi).all(|deg| a.comp_at(deg, source, target) == b.comp_at(deg, source, target))
}

// ---------------------------------------------------------------------------
// Roos section complexes
// ---------------------------------------------------------------------------

/// The ordered-chain double complex computing derived sections over an
/// up-closed subset, flattened to its total complex with block bookkeeping.
///
/// `C^(p,q) = ⊕ S(top(c))^q` over strict chains `c` of length `p+1`; the
/// horizontal differential drops elements of the target chain with
/// alternating signs, applying the restriction map when the top is dropped;
/// the vertical differential is the stalk differential, twisted by `(-1)^p`
/// in the total complex.
pub struct RoosComplex {
    pub total: CochainComplex,
    chains: Vec<Vec<Vec<SimplexId>>>,
    chain_pos: BTreeMap<Vec<SimplexId>, (usize, usize)>,
    q_lo: i32,
    q_count: usize,
    /// `intra[p][qi]` has one entry per chain plus a sentinel: the offset of
    /// each chain's block inside the (p, q) slab.
    intra: Vec<Vec<Vec<usize>>>,
    index: TotalIndex,
}

impl RoosComplex {
    pub fn build(
        complex: &SimplicialComplex,
        sheaf: &CellSheafComplex,
        subset: &BTreeSet<SimplexId>,
    ) -> RoosComplex {
        debug_assert!(
            subset.is_subset(sheaf.carrier()),
            "sections requested outside the carrier"
        );
        let field = sheaf.field;
        let members: Vec<SimplexId> = subset.iter().copied().collect();
        // Successors of each member inside the subset (strict cofaces).
        let succ: BTreeMap<SimplexId, Vec<SimplexId>> = members
            .iter()
            .map(|&s| {
                let mut up: Vec<SimplexId> = complex
                    .strict_star(s)
                    .into_iter()
                    .filter(|t| subset.contains(t))
                    .collect();
                up.sort_unstable();
                (s, up)
            })
            .collect();
        // All strict chains, grouped by length.  Ids increase along chains
        // because proper faces always sort first.
        let mut grouped: Vec<Vec<Vec<SimplexId>>> = Vec::new();
        let mut stack: Vec<Vec<SimplexId>> = members.iter().map(|&s| vec![s]).collect();
        while let Some(chain) = stack.pop() {
            let p = chain.len() - 1;
            if grouped.len() <= p {
                grouped.resize_with(p + 1, Vec::new);
            }
            for &next in &succ[chain.last().unwrap()] {
                let mut longer = chain.clone();
                longer.push(next);
                stack.push(longer);
            }
            grouped[p].push(chain);
        }
        for group in &mut grouped {
            group.sort();
        }
        let chain_pos: BTreeMap<Vec<SimplexId>, (usize, usize)> = grouped
            .iter()
            .enumerate()
            .flat_map(|(p, group)| {
                group.iter().enumerate().map(move |(i, c)| (c.clone(), (p, i)))
            })
            .collect();

        // Stalk degree window across the subset.
        let mut q_lo = i32::MAX;
        let mut q_hi = i32::MIN;
        for &s in &members {
            let stalk = sheaf.stalk(s);
            if !stalk.dims.is_empty() {
                q_lo = q_lo.min(stalk.lo);
                q_hi = q_hi.max(stalk.hi());
            }
        }
        if grouped.is_empty() || q_lo > q_hi {
            return RoosComplex {
                total: CochainComplex::zero(field),
                chains: grouped,
                chain_pos,
                q_lo: 0,
                q_count: 0,
                intra: Vec::new(),
                index: TotalIndex { lo: 0, offsets: Vec::new() },
            };
        }
        let np = grouped.len();
        let nq = (q_hi - q_lo + 1) as usize;

        // Block offsets inside each (p, q) slab.
        let mut intra: Vec<Vec<Vec<usize>>> = Vec::with_capacity(np);
        let mut dims: Vec<Vec<usize>> = Vec::with_capacity(np);
        for group in grouped.iter() {
            let mut per_q: Vec<Vec<usize>> = Vec::with_capacity(nq);
            let mut dim_row: Vec<usize> = Vec::with_capacity(nq);
            for qi in 0..nq {
                let q = q_lo + qi as i32;
                let mut offs = Vec::with_capacity(group.len() + 1);
                let mut acc = 0usize;
                for c in group {
                    offs.push(acc);
                    acc += sheaf.stalk(*c.last().unwrap()).dim_at(q);
                }
                offs.push(acc);
                per_q.push(offs);
                dim_row.push(acc);
            }
            intra.push(per_q);
            dims.push(dim_row);
        }

        // Vertical differentials: blockwise stalk differentials.
        let mut d_v: Vec<Vec<SparseMat>> = Vec::with_capacity(np);
        for (p, group) in grouped.iter().enumerate() {
            let mut row = Vec::with_capacity(nq.saturating_sub(1));
            for qi in 0..nq.saturating_sub(1) {
                let q = q_lo + qi as i32;
                let mut m = SparseMat::zero(dims[p][qi + 1], dims[p][qi]);
                for (idx, c) in group.iter().enumerate() {
                    let stalk = sheaf.stalk(*c.last().unwrap());
                    let d = stalk.diff_at(q);
                    let (ro, co) = (intra[p][qi + 1][idx], intra[p][qi][idx]);
                    for r in 0..d.nrows {
                        for (cc, v) in d.row(r) {
                            m.set(ro + r, co + cc, v.clone());
                        }
                    }
                }
                row.push(m);
            }
            d_v.push(row);
        }

        // Horizontal differentials: iterate target chains, dropping each
        // element; dropping a non-top element keeps the top (identity block,
        // sign (-1)^i), dropping the top applies the restriction with sign
        // (-1)^(p+1).
        let mut d_h: Vec<Vec<SparseMat>> = Vec::with_capacity(np.saturating_sub(1));
        for p in 0..np.saturating_sub(1) {
            let mut row = Vec::with_capacity(nq);
            for qi in 0..nq {
                let q = q_lo + qi as i32;
                let mut m = SparseMat::zero(dims[p + 1][qi], dims[p][qi]);
                for (tgt_idx, cprime) in grouped[p + 1].iter().enumerate() {
                    let ro = intra[p + 1][qi][tgt_idx];
                    let top = *cprime.last().unwrap();
                    for drop in 0..cprime.len() {
                        let shorter: Vec<SimplexId> = cprime
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| *i != drop)
                            .map(|(_, s)| *s)
                            .collect();
                        let &(_, src_idx) = chain_pos
                            .get(&shorter)
                            .expect("subchains of a chain are chains");
                        let co = intra[p][qi][src_idx];
                        let negate = drop % 2 == 1;
                        if drop < cprime.len() - 1 {
                            // Same top: signed identity block.
                            let dim = sheaf.stalk(top).dim_at(q);
                            for r in 0..dim {
                                let one =
                                    if negate { field.from_i64(-1) } else { field.one() };
                                m.set(ro + r, co + r, one);
                            }
                        } else {
                            let prev_top = *shorter.last().unwrap();
                            let rho = sheaf
                                .restriction_ref(prev_top, top)
                                .expect("restriction for comparable pair");
                            let comp =
                                rho.comp_at(q, sheaf.stalk(prev_top), sheaf.stalk(top));
                            for r in 0..comp.nrows {
                                for (cc, v) in comp.row(r) {
                                    let val = if negate { field.neg(v) } else { v.clone() };
                                    m.set(ro + r, co + cc, val);
                                }
                            }
                        }
                    }
                }
                row.push(m);
            }
            d_h.push(row);
        }

        let dc = DoubleComplex { field, p_lo: 0, q_lo, dims, d_h, d_v };
        dc.validate().expect("Roos double complex must validate");
        let (total, index) = dc.total_complex();
        RoosComplex {
            total,
            chains: grouped,
            chain_pos,
            q_lo,
            q_count: nq,
            intra,
            index,
        }
    }

    /// Offset of the `(chain, q)` block inside the total-degree
    /// `(len(chain) - 1) + q` component.
    pub fn block_offset(&self, chain: &[SimplexId], q: i32) -> Option<usize> {
        let &(p, idx) = self.chain_pos.get(chain)?;
        let qi = q - self.q_lo;
        if qi < 0 || qi as usize >= self.q_count {
            return None;
        }
        let base = self.index.offset(p as i32 + q, p as i32)?;
        Some(base + self.intra[p][qi as usize][idx])
    }

    pub fn chain_count(&self) -> usize {
        self.chains.iter().map(|g| g.len()).sum()
    }

    pub fn chains_of_len(&self, len: usize) -> &[Vec<SimplexId>] {
        self.chains.get(len - 1).map_or(&[], |g| g.as_slice())
    }

    pub fn max_chain_len(&self) -> usize {
        self.chains.len()
    }
}

/// Derived sections (hypercohomology) of the sheaf over an up-closed subset.
pub fn hypercohomology(
    complex: &SimplicialComplex,
    sheaf: &CellSheafComplex,
    subset: &BTreeSet<SimplexId>,
) -> BTreeMap<i32, usize> {
    RoosComplex::build(complex, sheaf, subset).total.cohomology()
}

/// Restriction of sections: the projection from sections over a larger
/// subset to sections over a smaller one (chains not inside the smaller
/// subset are dropped).  Strictly functorial.
pub fn roos_projection(
    sheaf: &CellSheafComplex,
    big: &RoosComplex,
    small: &RoosComplex,
) -> ChainMap {
    let field = sheaf.field;
    let mut comps: BTreeMap<i32, SparseMat> = BTreeMap::new();
    for p in 0..small.max_chain_len() {
        for chain in small.chains_of_len(p + 1) {
            let top = *chain.last().unwrap();
            let stalk = sheaf.stalk(top);
            for qi in 0..small.q_count {
                let q = small.q_lo + qi as i32;
                let dim = stalk.dim_at(q);
                if dim == 0 {
                    continue;
                }
                let deg = p as i32 + q;
                let ro = small.block_offset(chain, q).expect("block in small");
                let co = big.block_offset(chain, q).expect("small subset chains exist in big");
                let m = comps.entry(deg).or_insert_with(|| {
                    SparseMat::zero(small.total.dim_at(deg), big.total.dim_at(deg))
                });
                for r in 0..dim {
                    m.set(ro + r, co + r, field.one());
                }
            }
        }
    }
    comps.retain(|_, m| !m.is_zero());
    ChainMap { comps }
}

/// Attachment map `S(sigma) -> sections over a subset of st(sigma)`:
/// a section `s` goes to the family `(restriction of s)` on singleton
/// chains, zero on longer chains.  A chain map by functoriality.
pub fn attachment(sheaf: &CellSheafComplex, sigma: SimplexId, roos: &RoosComplex) -> ChainMap {
    let source = sheaf.stalk(sigma);
    let mut comps: BTreeMap<i32, SparseMat> = BTreeMap::new();
    for chain in roos.chains_of_len(1) {
        let tau = chain[0];
        let rho = sheaf.restriction(sigma, tau);
        let target = sheaf.stalk(tau);
        for qi in 0..roos.q_count {
            let q = roos.q_lo + qi as i32;
            let comp = rho.comp_at(q, source, target);
            if comp.is_zero() {
                continue;
            }
            let ro = roos.block_offset(chain, q).expect("singleton block");
            let m = comps.entry(q).or_insert_with(|| {
                SparseMat::zero(roos.total.dim_at(q), source.dim_at(q))
            });
            for r in 0..comp.nrows {
                for (cc, v) in comp.row(r) {
                    m.set(ro + r, *cc, v.clone());
                }
            }
        }
    }
    comps.retain(|_, m| !m.is_zero());
    ChainMap { comps }
}

/// Costalk complex at `sigma` relative to the ambient up-closed set: the
/// derived fiber of sections-supported-at-sigma, shifted so that a rank-one
/// constant sheaf on a closed n-manifold has costalk cohomology exactly in
/// degree n at every simplex.
pub fn costalk(
    complex: &SimplicialComplex,
    sheaf: &CellSheafComplex,
    sigma: SimplexId,
    ambient: &BTreeSet<SimplexId>,
) -> CochainComplex {
    let deleted: BTreeSet<SimplexId> = complex
        .strict_star(sigma)
        .into_iter()
        .filter(|t| ambient.contains(t))
        .collect();
    let roos = RoosComplex::build(complex, sheaf, &deleted);
    let alpha = attachment(sheaf, sigma, &roos);
    let cn = cone(&alpha, sheaf.stalk(sigma), &roos.total);
    cn.shift(-(complex.dim_of(sigma) as i32 + 1))
}

// ---------------------------------------------------------------------------
// Pushforward
// ---------------------------------------------------------------------------

/// Derived pushforward along the inclusion of the sheaf's carrier into a
/// larger up-closed set: the stalk at each target simplex is the Roos
/// section complex of `carrier ∩ st(sigma)`, and restrictions are the
/// section projections.
pub fn pushforward(
    complex: &SimplicialComplex,
    sheaf: &CellSheafComplex,
    target: &BTreeSet<SimplexId>,
) -> Result<CellSheafComplex, SheafError> {
    debug_assert!(sheaf.carrier().is_subset(target));
    let field = sheaf.field;
    let mut roos: BTreeMap<SimplexId, RoosComplex> = BTreeMap::new();
    for &id in target {
        let sub: BTreeSet<SimplexId> = complex
            .star(id)
            .into_iter()
            .filter(|t| sheaf.carrier().contains(t))
            .collect();
        roos.insert(id, RoosComplex::build(complex, sheaf, &sub));
    }
    let stalks: BTreeMap<SimplexId, CochainComplex> =
        roos.iter().map(|(&id, r)| (id, r.total.clone())).collect();
    let mut cover = BTreeMap::new();
    for &id in target {
        for &cf in complex.cofacets(id) {
            if !target.contains(&cf) {
                continue;
            }
            cover.insert((id, cf), roos_projection(sheaf, &roos[&id], &roos[&cf]));
        }
    }
    CellSheafComplex::from_cover_data(complex, field, target.clone(), stalks, cover)
}

// ---------------------------------------------------------------------------
// Truncation
// ---------------------------------------------------------------------------

/// Stalkwise soft truncation `τ≤m`: degrees above `m` are dropped, degree
/// `m` is replaced by the kernel of its differential.  Restrictions are
/// re-expressed in the kernel bases by unique linear solves, so strict
/// functoriality is preserved.
pub fn truncate(sheaf: &CellSheafComplex, m: i64) -> Result<CellSheafComplex, SheafError> {
    let field = sheaf.field;
    let m = i32::try_from(m).unwrap_or(if m > 0 { i32::MAX } else { i32::MIN });
    // New stalks plus the kernel basis used at the cut degree.
    let mut stalks: BTreeMap<SimplexId, CochainComplex> = BTreeMap::new();
    let mut cut_basis: BTreeMap<SimplexId, SparseMat> = BTreeMap::new();
    for (&id, stalk) in &sheaf.stalks {
        if stalk.dims.is_empty() || m >= stalk.hi() {
            stalks.insert(id, stalk.clone());
            continue;
        }
        if m < stalk.lo {
            stalks.insert(id, CochainComplex::zero(field));
            continue;
        }
        let keep = (m - stalk.lo) as usize; // index of the cut degree
        let kernel = stalk.diff_at(m).kernel_basis(&field);
        let mut dims: Vec<usize> = stalk.dims[..keep].to_vec();
        dims.push(kernel.ncols);
        let mut diffs: Vec<SparseMat> = stalk.diffs[..keep.saturating_sub(1)].to_vec();
        if keep >= 1 {
            let d_in = stalk.diff_at(m - 1);
            let coords = kernel
                .solve(&d_in, &field)
                .expect("image of the incoming differential lies in the kernel");
            diffs.push(coords);
        }
        stalks.insert(id, CochainComplex::new(field, stalk.lo, dims, diffs)?);
        cut_basis.insert(id, kernel);
    }
    // Transport every stored restriction.
    let mut res = BTreeMap::new();
    for (&(a, b), map) in &sheaf.res {
        let (sa, sb) = (&sheaf.stalks[&a], &sheaf.stalks[&b]);
        let (ta, tb) = (&stalks[&a], &stalks[&b]);
        let mut comps: BTreeMap<i32, SparseMat> = BTreeMap::new();
        for deg in ta.lo..=ta.hi() {
            if ta.dim_at(deg) == 0 || tb.dim_at(deg) == 0 {
                continue;
            }
            let old = map.comp_at(deg, sa, sb);
            let ka = cut_basis.get(&a).filter(|_| deg == m);
            let kb = cut_basis.get(&b).filter(|_| deg == m);
            let new = match (ka, kb) {
                (None, None) => old,
                (Some(ka), None) => old.mul(ka, &field),
                (None, Some(kb)) => kb
                    .solve(&old, &field)
                    .expect("restriction preserves kernels"),
                (Some(ka), Some(kb)) => kb
                    .solve(&old.mul(ka, &field), &field)
                    .expect("restriction preserves kernels"),
            };
            if !new.is_zero() {
                comps.insert(deg, new);
            }
        }
        res.insert((a, b), ChainMap { comps });
    }
    Ok(CellSheafComplex { field, carrier: sheaf.carrier.clone(), stalks, res })
}

// ---------------------------------------------------------------------------
// Reduction
// ---------------------------------------------------------------------------

/// Replace the sheaf by a quasi-isomorphic subsheaf with small stalks.
///
/// Cells are processed faces-first.  The candidate stalk at `sigma` spans
/// the restrictions of all already-reduced face stalks together with chosen
/// cohomology representatives of the full stalk; whenever the candidate has
/// excess cohomology (the inclusion-induced map on cohomology is always
/// surjective), a candidate cycle that bounds in the full stalk gets its
/// bounding cochain adjoined, and the cell is re-examined.  The result is a
/// genuine subsheaf, so the inclusion is natural and every observable
/// (stalk and costalk cohomology, sections over any subset, supports) is
/// preserved exactly.
pub fn reduce(
    complex: &SimplicialComplex,
    sheaf: &CellSheafComplex,
) -> Result<CellSheafComplex, SheafError> {
    let field = sheaf.field;
    let mut bases: BTreeMap<SimplexId, CohomologyBasis> = BTreeMap::new();
    for &id in &sheaf.carrier {
        bases.insert(id, CohomologyBasis::new(&sheaf.stalks[&id]));
    }
    // Per cell, per degree: the span matrix of the reduced stalk (columns
    // independent, ambient coordinates) — plus repair vectors adjoined on
    // the fly.
    let mut spans: BTreeMap<SimplexId, BTreeMap<i32, SparseMat>> = BTreeMap::new();
    let mut repairs: BTreeMap<SimplexId, BTreeMap<i32, Vec<Vec<Scalar>>>> = BTreeMap::new();

    for &sigma in &sheaf.carrier {
        let stalk = &sheaf.stalks[&sigma];
        let window: Vec<i32> = (stalk.lo..=stalk.hi()).collect();
        loop {
            // Gather generators per degree: inherited spans, representatives,
            // repairs.
            let mut gen_cols: BTreeMap<i32, Vec<Vec<Scalar>>> = BTreeMap::new();
            for &deg in &window {
                gen_cols.insert(deg, Vec::new());
            }
            for &ups in &sheaf.carrier {
                if ups == sigma || !complex.is_face(ups, sigma) {
                    continue;
                }
                let Some(span_u) = spans.get(&ups) else { continue };
                let rho = &sheaf.res[&(ups, sigma)];
                let source = &sheaf.stalks[&ups];
                for (&deg, mat) in span_u {
                    if mat.ncols == 0 {
                        continue;
                    }
                    let comp = rho.comp_at(deg, source, stalk);
                    let image = comp.mul(mat, &field);
                    let cols = gen_cols.entry(deg).or_default();
                    for c in 0..image.ncols {
                        cols.push(image.column(c, &field));
                    }
                }
            }
            let basis = &bases[&sigma];
            for &deg in &window {
                let reps = &basis.reps[(deg - stalk.lo) as usize];
                let cols = gen_cols.entry(deg).or_default();
                for c in 0..reps.ncols {
                    cols.push(reps.column(c, &field));
                }
                if let Some(extra) = repairs.get(&sigma).and_then(|m| m.get(&deg)) {
                    cols.extend(extra.iter().cloned());
                }
            }
            // Independent spanning columns per degree.
            let mut span_sigma: BTreeMap<i32, SparseMat> = BTreeMap::new();
            for &deg in &window {
                let cols = &gen_cols[&deg];
                let mat = SparseMat::from_columns(stalk.dim_at(deg), cols);
                let chosen = mat.independent_columns(&field);
                let picked: Vec<Vec<Scalar>> =
                    chosen.iter().map(|&c| mat.column(c, &field)).collect();
                span_sigma.insert(deg, SparseMat::from_columns(stalk.dim_at(deg), &picked));
            }
            // Candidate complex in the span bases.
            let dims: Vec<usize> = window.iter().map(|d| span_sigma[d].ncols).collect();
            let mut diffs: Vec<SparseMat> = Vec::new();
            for deg in stalk.lo..stalk.hi() {
                let b_src = &span_sigma[&deg];
                let b_tgt = &span_sigma[&(deg + 1)];
                let image = stalk.diff_at(deg).mul(b_src, &field);
                let coords = b_tgt
                    .solve(&image, &field)
                    .expect("span is closed under the differential");
                diffs.push(coords);
            }
            let candidate = CochainComplex::new(field, stalk.lo, dims, diffs)?;
            let cand_h = candidate.cohomology();
            let full_h = stalk.cohomology();
            if cand_h == full_h {
                spans.insert(sigma, span_sigma);
                break;
            }
            // Find a candidate cycle that bounds in the full stalk but not
            // in the candidate, and adjoin its bounding cochain.
            let mut repaired = false;
            for &deg in &window {
                let have = cand_h.get(&deg).copied().unwrap_or(0);
                let want = full_h.get(&deg).copied().unwrap_or(0);
                if have <= want {
                    continue;
                }
                let b_here = &span_sigma[&deg];
                let kern = candidate.diff_at(deg).kernel_basis(&field);
                let ambient_cycles = b_here.mul(&kern, &field);
                let classes = bases[&sigma]
                    .class_coords(deg, &ambient_cycles)
                    .expect("candidate cycles are cycles");
                let null = classes.kernel_basis(&field);
                // Candidate boundary space in ambient coordinates.
                let cand_bnd = b_here.mul(&candidate.diff_at(deg - 1), &field);
                for k in 0..null.ncols {
                    let z = ambient_cycles.mul(
                        &SparseMat::from_columns(null.nrows, &[null.column(k, &field)]),
                        &field,
                    );
                    if cand_bnd.ncols > 0 && cand_bnd.solve(&z, &field).is_some() {
                        continue;
                    }
                    if cand_bnd.ncols == 0 && z.is_zero() {
                        continue;
                    }
                    // z bounds in the full stalk: d w = z.
                    let w = sheaf.stalks[&sigma]
                        .diff_at(deg - 1)
                        .solve(&z, &field)
                        .expect("null-class cycles bound in the full stalk");
                    repairs
                        .entry(sigma)
                        .or_default()
                        .entry(deg - 1)
                        .or_default()
                        .push(w.column(0, &field));
                    repaired = true;
                    break;
                }
                if repaired {
                    break;
                }
            }
            assert!(repaired, "cohomology excess must yield a repair vector");
        }
    }

    // Assemble the reduced sheaf.
    let mut stalks: BTreeMap<SimplexId, CochainComplex> = BTreeMap::new();
    for &sigma in &sheaf.carrier {
        let stalk = &sheaf.stalks[&sigma];
        let span = &spans[&sigma];
        let window: Vec<i32> = (stalk.lo..=stalk.hi()).collect();
        let dims: Vec<usize> = window.iter().map(|d| span[d].ncols).collect();
        let mut diffs = Vec::new();
        for deg in stalk.lo..stalk.hi() {
            let image = stalk.diff_at(deg).mul(&span[&deg], &field);
            diffs.push(
                span[&(deg + 1)]
                    .solve(&image, &field)
                    .expect("span closed under differential"),
            );
        }
        let reduced = CochainComplex::new(field, stalk.lo, dims, diffs)?.trimmed();
        stalks.insert(sigma, reduced);
    }
    let mut res = BTreeMap::new();
    for (&(a, b), map) in &sheaf.res {
        let (sa, sb) = (&sheaf.stalks[&a], &sheaf.stalks[&b]);
        let (ta, tb) = (&stalks[&a], &stalks[&b]);
        let mut comps = BTreeMap::new();
        for deg in ta.lo..=ta.hi() {
            if ta.dim_at(deg) == 0 || tb.dim_at(deg) == 0 {
                continue;
            }
            let image = map.comp_at(deg, sa, sb).mul(&spans[&a][&deg], &field);
            let coords = spans[&b][&deg]
                .solve(&image, &field)
                .expect("restriction maps span into span");
            if !coords.is_zero() {
                comps.insert(deg, coords);
            }
        }
        res.insert((a, b), ChainMap { comps });
    }
    let reduced = CellSheafComplex { field, carrier: sheaf.carrier.clone(), stalks, res };
    // Verify: stalkwise quasi-isomorphic (dimensions suffice — the inclusion
    // induces a surjection, and equal dimensions make it an isomorphism).
    for &sigma in &sheaf.carrier {
        let got = reduced.stalk_betti(sigma);
        let want = sheaf.stalk_betti(sigma);
        if got != want {
            let degree = *want
                .keys()
                .chain(got.keys())
                .find(|d| got.get(d) != want.get(d))
                .unwrap_or(&0);
            return Err(SheafError::NotQuasiIso {
                simplex: complex.name_of(sigma),
                degree,
            });
        }
    }
    reduced.validate(complex)?;
    Ok(reduced)
}

// ---------------------------------------------------------------------------
// Local constancy along strata
// ---------------------------------------------------------------------------

/// A cover pair within a stratum whose restriction fails to be a
/// cohomology isomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClcFailure {
    pub from: SimplexId,
    pub to: SimplexId,
    pub degree: i32,
}

/// Check that stalk cohomology is locally constant along each stratum:
/// restrictions over cover pairs of equal depth must induce isomorphisms.
/// (Cover pairs suffice: any comparable pair of equal depth is connected by
/// a saturated chain whose members all have that same depth, depth being
/// order-reversing.)
pub fn clc_failures(
    complex: &SimplicialComplex,
    sheaf: &CellSheafComplex,
    strat: &Stratification,
) -> Vec<ClcFailure> {
    let mut bases: BTreeMap<SimplexId, CohomologyBasis> = BTreeMap::new();
    let mut out = Vec::new();
    for &sigma in sheaf.carrier() {
        for &tau in complex.cofacets(sigma) {
            if !sheaf.carrier().contains(&tau) || strat.depth(sigma) != strat.depth(tau) {
                continue;
            }
            bases
                .entry(sigma)
                .or_insert_with(|| CohomologyBasis::new(sheaf.stalk(sigma)));
            bases
                .entry(tau)
                .or_insert_with(|| CohomologyBasis::new(sheaf.stalk(tau)));
            let (ba, bb) = (&bases[&sigma], &bases[&tau]);
            let map = sheaf.restriction(sigma, tau);
            let lo = sheaf.stalk(sigma).lo.min(sheaf.stalk(tau).lo);
            let hi = sheaf.stalk(sigma).hi().max(sheaf.stalk(tau).hi());
            for deg in lo..=hi {
                let (ha, hb) = (ba.betti(deg), bb.betti(deg));
                if ha != hb {
                    out.push(ClcFailure { from: sigma, to: tau, degree: deg });
                    continue;
                }
                if ha == 0 {
                    continue;
                }
                let m = induced_cohomology_map(
                    &map,
                    sheaf.stalk(sigma),
                    sheaf.stalk(tau),
                    ba,
                    bb,
                    deg,
                );
                if m.rank(&sheaf.field) != ha {
                    out.push(ClcFailure { from: sigma, to: tau, degree: deg });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::{sphere2, torus7};

    #[test]
    fn constant_sheaf_sections_over_sphere() {
        let c = sphere2();
        let s = CellSheafComplex::constant(&c, Field::Q, 1);
        s.validate(&c).unwrap();
        let all: BTreeSet<usize> = c.ids().collect();
        let h = hypercohomology(&c, &s, &all);
        assert_eq!(h, BTreeMap::from([(0, 1), (2, 1)]));
    }

    #[test]
    fn constant_sheaf_sections_over_torus() {
        let c = torus7();
        let s = CellSheafComplex::constant(&c, Field::Q, 1);
        let all: BTreeSet<usize> = c.ids().collect();
        assert_eq!(
            hypercohomology(&c, &s, &all),
            BTreeMap::from([(0, 1), (1, 2), (2, 1)])
        );
    }

    #[test]
    fn sections_over_deleted_star_are_link_cohomology() {
        let c = sphere2();
        let s = CellSheafComplex::constant(&c, Field::Q, 1);
        let v0 = c.id_by_names(&["v0"]).unwrap();
        let h = hypercohomology(&c, &s, &c.strict_star(v0));
        assert_eq!(h, BTreeMap::from([(0, 1), (1, 1)]));
        // Over a star (contractible): just H^0.
        let h = hypercohomology(&c, &s, &c.star(v0));
        assert_eq!(h, BTreeMap::from([(0, 1)]));
        // Complement of a closed point: a disk.
        let mut u: BTreeSet<usize> = c.ids().collect();
        u.remove(&v0);
        assert_eq!(hypercohomology(&c, &s, &u), BTreeMap::from([(0, 1)]));
    }

    #[test]
    fn sections_match_order_complex_for_many_open_sets() {
        let c = sphere2();
        let s = CellSheafComplex::constant(&c, Field::Q, 1);
        let mut subsets: Vec<BTreeSet<usize>> = Vec::new();
        subsets.push(c.ids().collect());
        for id in c.ids() {
            subsets.push(c.star(id));
            subsets.push(c.strict_star(id));
        }
        // Complements of closures of each vertex pair.
        for a in 0..4usize {
            let va = c.id_by_names(&[&format!("v{a}")]).unwrap();
            let closed = c.closure([va]);
            let open: BTreeSet<usize> =
                c.ids().filter(|id| !closed.contains(id)).collect();
            subsets.push(open);
        }
        for subset in subsets {
            if subset.is_empty() {
                continue;
            }
            let nerve = crate::complex::order_complex(&c, &subset);
            assert_eq!(
                hypercohomology(&c, &s, &subset),
                nerve.betti(Field::Q),
                "disagreement on subset {subset:?}"
            );
        }
    }

    #[test]
    fn attachment_is_a_chain_map_and_quasi_iso_over_star() {
        let c = sphere2();
        let s = CellSheafComplex::constant(&c, Field::Q, 1);
        let v0 = c.id_by_names(&["v0"]).unwrap();
        let star = c.star(v0);
        let roos = RoosComplex::build(&c, &s, &star);
        let alpha = attachment(&s, v0, &roos);
        alpha.validate(s.stalk(v0), &roos.total).unwrap();
        // Over the full star the attachment is a quasi-isomorphism.
        let cn = cone(&alpha, s.stalk(v0), &roos.total);
        assert!(cn.cohomology().is_empty());
    }

    #[test]
    fn costalk_of_constant_sheaf_on_sphere_is_orientation() {
        let c = sphere2();
        let s = CellSheafComplex::constant(&c, Field::Q, 1);
        let all: BTreeSet<usize> = c.ids().collect();
        for id in c.ids() {
            let co = costalk(&c, &s, id, &all);
            assert_eq!(
                co.cohomology(),
                BTreeMap::from([(2, 1)]),
                "costalk at {}",
                c.name_of(id)
            );
        }
    }

    #[test]
    fn costalk_euler_characteristic_identity() {
        // χ(costalk) = (-1)^(dim+1) (χ(deleted sections) - χ(stalk)), the
        // cone long exact sequence read through the degree shift.
        let c = torus7();
        let s = CellSheafComplex::constant(&c, Field::Q, 1);
        let all: BTreeSet<usize> = c.ids().collect();
        let chi = |h: &BTreeMap<i32, usize>| -> i64 {
            h.iter().map(|(d, r)| (-1i64).pow(d.rem_euclid(2) as u32) * *r as i64).sum()
        };
        for id in [0usize, 7, 30, 41] {
            let co = costalk(&c, &s, id, &all);
            let deleted = hypercohomology(&c, &s, &c.strict_star(id));
            let sign = (-1i64).pow(((c.dim_of(id) + 1) % 2) as u32);
            assert_eq!(
                chi(&co.cohomology()),
                sign * (chi(&deleted) - 1),
                "at {}",
                c.name_of(id)
            );
        }
    }

    #[test]
    fn pushforward_from_punctured_sphere() {
        let c = sphere2();
        let v0 = c.id_by_names(&["v0"]).unwrap();
        let u: BTreeSet<usize> = c.ids().filter(|&id| id != v0).collect();
        let s = CellSheafComplex::constant(&c, Field::Q, 1).restrict_to(&u);
        let all: BTreeSet<usize> = c.ids().collect();
        let pushed = pushforward(&c, &s, &all).unwrap();
        pushed.validate(&c).unwrap();
        // Stalk at the removed vertex computes the deleted-star sections
        // (the link circle); elsewhere stalks are contractible stars.
        assert_eq!(
            pushed.stalk_betti(v0),
            BTreeMap::from([(0, 1), (1, 1)])
        );
        for &id in &u {
            assert_eq!(pushed.stalk_betti(id), BTreeMap::from([(0, 1)]), "at {id}");
        }
        // Sections don't change under pushforward: H(X, Ri_* S) = H(U, S).
        assert_eq!(
            hypercohomology(&c, &pushed, &all),
            hypercohomology(&c, &s, &u)
        );
    }

    #[test]
    fn truncation_cuts_stalk_cohomology() {
        let c = sphere2();
        let v0 = c.id_by_names(&["v0"]).unwrap();
        let u: BTreeSet<usize> = c.ids().filter(|&id| id != v0).collect();
        let s = CellSheafComplex::constant(&c, Field::Q, 1).restrict_to(&u);
        let all: BTreeSet<usize> = c.ids().collect();
        let pushed = pushforward(&c, &s, &all).unwrap();
        let t0 = truncate(&pushed, 0).unwrap();
        t0.validate(&c).unwrap();
        assert_eq!(t0.stalk_betti(v0), BTreeMap::from([(0, 1)]));
        // Truncating below the window kills everything.
        let tneg = truncate(&pushed, -1).unwrap();
        assert_eq!(tneg.total_size(), 0);
        // Truncating above the window changes nothing.
        let tbig = truncate(&pushed, 10).unwrap();
        assert_eq!(tbig.total_size(), pushed.total_size());
    }

    #[test]
    fn reduce_preserves_everything_and_shrinks() {
        let c = sphere2();
        let v0 = c.id_by_names(&["v0"]).unwrap();
        let u: BTreeSet<usize> = c.ids().filter(|&id| id != v0).collect();
        let s = CellSheafComplex::constant(&c, Field::Q, 1).restrict_to(&u);
        let all: BTreeSet<usize> = c.ids().collect();
        let pushed = pushforward(&c, &s, &all).unwrap();
        let red = reduce(&c, &pushed).unwrap();
        assert!(red.total_size() < pushed.total_size());
        for id in c.ids() {
            assert_eq!(red.stalk_betti(id), pushed.stalk_betti(id));
            let a = costalk(&c, &red, id, &all).cohomology();
            let b = costalk(&c, &pushed, id, &all).cohomology();
            assert_eq!(a, b, "costalk at {}", c.name_of(id));
        }
        assert_eq!(
            hypercohomology(&c, &red, &all),
            hypercohomology(&c, &pushed, &all)
        );
        // Sections over smaller opens agree too.
        let star = c.star(v0);
        assert_eq!(
            hypercohomology(&c, &red, &star),
            hypercohomology(&c, &pushed, &star)
        );
        // A second reduction does not grow.
        let red2 = reduce(&c, &red).unwrap();
        assert!(red2.total_size() <= red.total_size());
    }

    #[test]
    fn mobius_local_system_depends_on_field() {
        // Rank-one system on the circle with one sign flip: cohomology
        // vanishes over Q but not over F_2.
        for (field, expected) in [
            (Field::Q, BTreeMap::new()),
            (Field::prime(2).unwrap(), BTreeMap::from([(0, 1), (1, 1)])),
        ] {
            let c = crate::builtin::circle();
            let carrier: BTreeSet<usize> = c.ids().collect();
            let stalks: BTreeMap<usize, CochainComplex> = carrier
                .iter()
                .map(|&id| (id, CochainComplex::concentrated(field, 0, 1)))
                .collect();
            let mut cover = BTreeMap::new();
            let flip = c.id_by_names(&["v0", "v1"]).unwrap();
            let v0 = c.id_by_names(&["v0"]).unwrap();
            for &id in &carrier {
                for &cf in c.cofacets(id) {
                    let sign = if id == v0 && cf == flip { -1 } else { 1 };
                    let mut m = SparseMat::zero(1, 1);
                    m.set(0, 0, field.from_i64(sign));
                    cover.insert(
                        (id, cf),
                        ChainMap { comps: BTreeMap::from([(0, m)]) },
                    );
                }
            }
            let s = CellSheafComplex::from_cover_data(&c, field, carrier.clone(), stalks, cover)
                .unwrap();
            assert_eq!(hypercohomology(&c, &s, &carrier), expected);
        }
    }

    #[test]
    fn clc_detects_rank_jumps() {
        let c = sphere2();
        let s = CellSheafComplex::constant(&c, Field::Q, 1);
        let strat = Stratification::trivial(&c);
        assert!(clc_failures(&c, &s, &strat).is_empty());
        // A sheaf with a fatter stalk at one vertex: restrictions from the
        // vertex cannot be isomorphisms on H^0.
        let carrier: BTreeSet<usize> = c.ids().collect();
        let v0 = c.id_by_names(&["v0"]).unwrap();
        let stalks: BTreeMap<usize, CochainComplex> = carrier
            .iter()
            .map(|&id| {
                let rank = if id == v0 { 2 } else { 1 };
                (id, CochainComplex::concentrated(Field::Q, 0, rank))
            })
            .collect();
        let mut cover = BTreeMap::new();
        for &id in &carrier {
            for &cf in c.cofacets(id) {
                let m = if id == v0 {
                    let mut m = SparseMat::zero(1, 2);
                    m.set(0, 0, Field::Q.one());
                    m
                } else {
                    SparseMat::identity(1, &Field::Q)
                };
                cover.insert((id, cf), ChainMap { comps: BTreeMap::from([(0, m)]) });
            }
        }
        let s = CellSheafComplex::from_cover_data(&c, Field::Q, carrier, stalks, cover).unwrap();
        let fails = clc_failures(&c, &s, &strat);
        assert!(!fails.is_empty());
        assert!(fails.iter().all(|f| f.from == v0 && f.degree == 0));
    }
}
