//! Mechanized checkers for the axiom systems that characterize the Deligne
//! sheaf: AX1, AX1′, the clause (1″c), AX2, AX2′, AX2″, AX3, and AX3″.
//!
//! Every checker returns a structured [`AxiomReport`].  Each clause carries
//! observed-versus-bound data (as [`Bound`] extended integers) even when it
//! passes, plus a [`Witness`] locating the first failure.  "Points" in the
//! clause statements are evaluated once per simplex: on the open cell of a
//! simplex the stalk and costalk data are constant, so per-cell evaluation
//! is exhaustive for the locally constant situations the axioms describe.
//!
//! Conventions for the numeric comparisons:
//! - Support/cosupport clauses compare the dimension of a set of open cells
//!   (the maximum simplex dimension, `-inf` when empty) against
//!   `n - p⁻¹(j)`-style bounds.
//! - Vanishing clauses compare the first offending degree against the
//!   threshold; `+inf` means nothing offends.
//! - "Matches the coefficients" is verified by a quasi-isomorphism proxy:
//!   stalk cohomology shape, isomorphism of induced restriction maps, and
//!   equality of derived sections.  These conditions are necessary in
//!   general and sufficient for every sheaf this pipeline produces.

use crate::complex::{ComplexError, SimplexId, SimplicialComplex, Stratification};
use crate::deligne::{full_pushforward, DeligneError, LocalSystem};
use crate::linalg::{induced_cohomology_map, CohomologyBasis, Field};
use crate::perversity::{Bound, Perversity};
use crate::sheaf::{
    attachment, clc_failures, costalk, hypercohomology, CellSheafComplex, RoosComplex,
};
use serde::Serialize;
use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AxiomsError {
    #[error("no candidate stratifications supplied for an existential axiom")]
    NoCandidates,
    #[error("candidate stratification #{index} is not subject to the prescribed singular set")]
    NotSubjectToSigma { index: usize },
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Deligne(#[from] DeligneError),
}

// ---------------------------------------------------------------------------
// Report structures
// ---------------------------------------------------------------------------

/// Location of a clause failure: the simplex and degree where the observed
/// value escapes the bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub simplex: String,
    pub degree: i64,
    pub observed: Bound,
    pub bound: Bound,
}

/// One observed-versus-bound row of a clause, recorded even on pass.
#[derive(Debug, Clone, Serialize)]
pub struct ClauseCheck {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub codim: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<i64>,
    pub observed: Bound,
    pub bound: Bound,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClauseReport {
    pub id: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<ClauseCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl ClauseReport {
    fn new(id: &str, witness: Option<Witness>, checks: Vec<ClauseCheck>) -> ClauseReport {
        let pass = witness.is_none() && checks.iter().all(|c| c.pass);
        ClauseReport { id: id.to_string(), pass, witness, checks, note: None }
    }

    fn with_note(mut self, note: String) -> ClauseReport {
        self.note = Some(note);
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub system: String,
    pub pass: bool,
    pub clauses: Vec<ClauseReport>,
}

impl AxiomReport {
    fn new(system: &str, clauses: Vec<ClauseReport>) -> AxiomReport {
        let pass = clauses.iter().all(|c| c.pass);
        AxiomReport { system: system.to_string(), pass, clauses }
    }

    pub fn clause(&self, id: &str) -> Option<&ClauseReport> {
        self.clauses.iter().find(|c| c.id == id)
    }
}

/// The checkable axiom systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SystemId {
    Ax1,
    Ax1Prime,
    Ax1DoublePrimeC,
    Ax2,
    Ax2Prime,
    Ax2DoublePrime,
    Ax3,
    Ax3DoublePrime,
}

impl SystemId {
    pub const ALL: [SystemId; 8] = [
        SystemId::Ax1,
        SystemId::Ax1Prime,
        SystemId::Ax1DoublePrimeC,
        SystemId::Ax2,
        SystemId::Ax2Prime,
        SystemId::Ax2DoublePrime,
        SystemId::Ax3,
        SystemId::Ax3DoublePrime,
    ];

    pub fn label(self) -> &'static str {
        match self {
            SystemId::Ax1 => "AX1",
            SystemId::Ax1Prime => "AX1'",
            SystemId::Ax1DoublePrimeC => "AX1''c",
            SystemId::Ax2 => "AX2",
            SystemId::Ax2Prime => "AX2'",
            SystemId::Ax2DoublePrime => "AX2''",
            SystemId::Ax3 => "AX3",
            SystemId::Ax3DoublePrime => "AX3''",
        }
    }

    /// Parse a user-facing name.  Primes may be spelled `'` or `p`.
    pub fn parse(s: &str) -> Option<SystemId> {
        let norm: String = s
            .trim()
            .to_ascii_lowercase()
            .chars()
            .map(|ch| if ch == '\u{2032}' || ch == 'p' { '\'' } else { ch })
            .collect();
        match norm.as_str() {
            "ax1" => Some(SystemId::Ax1),
            "ax1'" => Some(SystemId::Ax1Prime),
            "ax1''" | "ax1''c" => Some(SystemId::Ax1DoublePrimeC),
            "ax2" => Some(SystemId::Ax2),
            "ax2'" => Some(SystemId::Ax2Prime),
            "ax2''" => Some(SystemId::Ax2DoublePrime),
            "ax3" => Some(SystemId::Ax3),
            "ax3''" => Some(SystemId::Ax3DoublePrime),
            _ => None,
        }
    }
}

// ---------------------------------------------------------------------------
// Evaluation context
// ---------------------------------------------------------------------------

/// Shared evaluation state for one sheaf: caches the per-simplex stalk and
/// costalk cohomology so that several systems can be checked without
/// recomputation.
pub struct AxiomContext<'a> {
    pub complex: &'a SimplicialComplex,
    pub sheaf: &'a CellSheafComplex,
    n: i64,
    stalks: RefCell<BTreeMap<SimplexId, BTreeMap<i32, usize>>>,
    costalks: RefCell<BTreeMap<SimplexId, BTreeMap<i32, usize>>>,
}

impl<'a> AxiomContext<'a> {
    pub fn new(complex: &'a SimplicialComplex, sheaf: &'a CellSheafComplex) -> AxiomContext<'a> {
        AxiomContext {
            complex,
            sheaf,
            n: complex.dim() as i64,
            stalks: RefCell::new(BTreeMap::new()),
            costalks: RefCell::new(BTreeMap::new()),
        }
    }

    fn field(&self) -> Field {
        self.sheaf.field
    }

    /// Stalk cohomology at a cell; zero off the carrier (extension by zero).
    fn stalk_betti(&self, id: SimplexId) -> BTreeMap<i32, usize> {
        if let Some(b) = self.stalks.borrow().get(&id) {
            return b.clone();
        }
        let b = if self.sheaf.carrier().contains(&id) {
            self.sheaf.stalk_betti(id)
        } else {
            BTreeMap::new()
        };
        self.stalks.borrow_mut().insert(id, b.clone());
        b
    }

    /// Costalk cohomology `H^j(f_x^! S)` for `x` in the open cell.  Off the
    /// carrier the sections over the star and the deleted star coincide, so
    /// the costalk vanishes.
    fn costalk_betti(&self, id: SimplexId) -> BTreeMap<i32, usize> {
        if let Some(b) = self.costalks.borrow().get(&id) {
            return b.clone();
        }
        let b = if self.sheaf.carrier().contains(&id) {
            costalk(self.complex, self.sheaf, id, self.sheaf.carrier()).cohomology()
        } else {
            BTreeMap::new()
        };
        self.costalks.borrow_mut().insert(id, b.clone());
        b
    }

    /// Degrees in which some stalk has cohomology.
    fn stalk_degrees(&self) -> BTreeSet<i32> {
        self.sheaf
            .carrier()
            .iter()
            .flat_map(|&id| self.stalk_betti(id).into_keys())
            .collect()
    }

    /// Degrees in which some costalk has cohomology.
    fn costalk_degrees(&self) -> BTreeSet<i32> {
        self.complex
            .ids()
            .flat_map(|id| self.costalk_betti(id).into_keys())
            .collect()
    }

    /// Dimension of a union of open cells: the maximum simplex dimension,
    /// `-inf` when the set is empty.
    fn set_dim(&self, cells: impl IntoIterator<Item = SimplexId>) -> Bound {
        cells
            .into_iter()
            .map(|id| Bound::Finite(self.complex.dim_of(id) as i64))
            .max()
            .unwrap_or(Bound::NegInf)
    }

    fn depths(&self, strat: &Stratification) -> Vec<u32> {
        strat.present_depths().into_iter().filter(|&d| d >= 1).collect()
    }
}

// ---------------------------------------------------------------------------
// Clause evaluators
// ---------------------------------------------------------------------------

/// Chain-level vanishing below degree zero (`S^i = 0` for `i < 0`).
fn chain_degrees_nonnegative(ctx: &AxiomContext) -> Option<Witness> {
    for &id in ctx.sheaf.carrier() {
        let stalk = ctx.sheaf.stalk(id);
        for d in stalk.lo..0 {
            let dim = stalk.dim_at(d);
            if dim > 0 {
                return Some(Witness {
                    simplex: ctx.complex.name_of(id),
                    degree: d as i64,
                    observed: Bound::Finite(dim as i64),
                    bound: Bound::Finite(0),
                });
            }
        }
    }
    None
}

/// Cohomology-level vanishing below degree zero (`H^i(S) = 0` for `i < 0`).
fn negative_cohomology(ctx: &AxiomContext) -> Option<Witness> {
    for &id in ctx.sheaf.carrier() {
        if let Some((&d, &dim)) = ctx.stalk_betti(id).iter().find(|(&d, _)| d < 0) {
            return Some(Witness {
                simplex: ctx.complex.name_of(id),
                degree: d as i64,
                observed: Bound::Finite(dim as i64),
                bound: Bound::Finite(0),
            });
        }
    }
    None
}

/// The normalization `S|_{U_1} = G`: every stalk on `U_1` is the coefficient
/// rank concentrated in degree zero, restrictions within `U_1` induce
/// isomorphisms, and derived sections over `U_1` agree with those of the
/// coefficient system.
fn normalization(
    ctx: &AxiomContext,
    u1: &BTreeSet<SimplexId>,
    system: &LocalSystem,
) -> Result<Option<Witness>, AxiomsError> {
    let rank = system.rank;
    let expected: BTreeMap<i32, usize> =
        if rank == 0 { BTreeMap::new() } else { BTreeMap::from([(0, rank)]) };
    for &id in u1 {
        let betti = ctx.stalk_betti(id);
        if betti != expected {
            let degs: BTreeSet<i32> = betti.keys().chain(expected.keys()).copied().collect();
            let d = degs
                .into_iter()
                .find(|d| betti.get(d) != expected.get(d))
                .expect("unequal maps differ somewhere");
            return Ok(Some(Witness {
                simplex: ctx.complex.name_of(id),
                degree: d as i64,
                observed: Bound::Finite(*betti.get(&d).unwrap_or(&0) as i64),
                bound: Bound::Finite(*expected.get(&d).unwrap_or(&0) as i64),
            }));
        }
    }
    if rank > 0 {
        // Every cell of U_1 passed the shape check, so all stalks exist.
        let mut bases: BTreeMap<SimplexId, CohomologyBasis> = BTreeMap::new();
        for &id in u1 {
            for &cf in ctx.complex.cofacets(id) {
                if !u1.contains(&cf) {
                    continue;
                }
                bases.entry(id).or_insert_with(|| CohomologyBasis::new(ctx.sheaf.stalk(id)));
                bases.entry(cf).or_insert_with(|| CohomologyBasis::new(ctx.sheaf.stalk(cf)));
                let map = ctx.sheaf.restriction(id, cf);
                let m = induced_cohomology_map(
                    &map,
                    ctx.sheaf.stalk(id),
                    ctx.sheaf.stalk(cf),
                    &bases[&id],
                    &bases[&cf],
                    0,
                );
                let r = m.rank(&ctx.field());
                if r != rank {
                    return Ok(Some(Witness {
                        simplex: format!(
                            "{} < {}",
                            ctx.complex.name_of(id),
                            ctx.complex.name_of(cf)
                        ),
                        degree: 0,
                        observed: Bound::Finite(r as i64),
                        bound: Bound::Finite(rank as i64),
                    }));
                }
            }
        }
    }
    let gs = system.sheaf_on(ctx.complex, ctx.field(), u1)?;
    let ours_over: BTreeSet<SimplexId> =
        u1.intersection(ctx.sheaf.carrier()).copied().collect();
    let ours = hypercohomology(ctx.complex, ctx.sheaf, &ours_over);
    let theirs = hypercohomology(ctx.complex, &gs, u1);
    if ours != theirs {
        let degs: BTreeSet<i32> = ours.keys().chain(theirs.keys()).copied().collect();
        let d = degs
            .into_iter()
            .find(|d| ours.get(d) != theirs.get(d))
            .expect("unequal maps differ somewhere");
        return Ok(Some(Witness {
            simplex: "sections over U_1".to_string(),
            degree: d as i64,
            observed: Bound::Finite(*ours.get(&d).unwrap_or(&0) as i64),
            bound: Bound::Finite(*theirs.get(&d).unwrap_or(&0) as i64),
        }));
    }
    Ok(None)
}

/// Local constancy along the strata of the given stratification, including
/// jumps onto cells where the sheaf vanishes identically.
fn clc_witness(ctx: &AxiomContext, strat: &Stratification) -> Option<Witness> {
    if let Some(f) = clc_failures(ctx.complex, ctx.sheaf, strat).first() {
        let a = *ctx.stalk_betti(f.from).get(&f.degree).unwrap_or(&0);
        let b = *ctx.stalk_betti(f.to).get(&f.degree).unwrap_or(&0);
        return Some(Witness {
            simplex: format!("{} < {}", ctx.complex.name_of(f.from), ctx.complex.name_of(f.to)),
            degree: f.degree as i64,
            observed: Bound::Finite(a as i64),
            bound: Bound::Finite(b as i64),
        });
    }
    // Jumps across the carrier boundary inside a single stratum: the stalk
    // is zero outside the carrier, so nonzero cohomology inside violates
    // local constancy.
    for &id in ctx.sheaf.carrier() {
        let betti = ctx.stalk_betti(id);
        let Some((&deg, &dim)) = betti.iter().next() else { continue };
        let same_depth_missing = ctx
            .complex
            .cofacets(id)
            .iter()
            .chain(ctx.complex.facets(id))
            .find(|&&other| {
                strat.depth(other) == strat.depth(id)
                    && !ctx.sheaf.carrier().contains(&other)
            });
        if let Some(&other) = same_depth_missing {
            return Some(Witness {
                simplex: format!(
                    "{} ~ {}",
                    ctx.complex.name_of(id),
                    ctx.complex.name_of(other)
                ),
                degree: deg as i64,
                observed: Bound::Finite(dim as i64),
                bound: Bound::Finite(0),
            });
        }
    }
    None
}

/// Stalk vanishing per stratum: `H^i(S_x) = 0` for `i > p(k)` when `x` has
/// codimension `k >= 1`.  Rows record the top nonzero stalk degree per
/// stratum against the allowance `p(k)`.
fn stalk_vanishing_clause(
    ctx: &AxiomContext,
    strat: &Stratification,
    pers: &Perversity,
    id: &str,
) -> ClauseReport {
    let mut checks = Vec::new();
    let mut witness = None;
    for k in ctx.depths(strat) {
        let cut = pers.at(k as i64);
        let mut worst = Bound::NegInf;
        let mut offender: Option<(SimplexId, i32)> = None;
        for &sigma in &strat.stratum(ctx.complex, k) {
            if let Some((&deg, _)) = ctx.stalk_betti(sigma).iter().next_back() {
                if Bound::Finite(deg as i64) > worst {
                    worst = Bound::Finite(deg as i64);
                    offender = Some((sigma, deg));
                }
            }
        }
        let pass = worst <= Bound::Finite(cut);
        checks.push(ClauseCheck {
            codim: Some(k as i64),
            degree: None,
            observed: worst,
            bound: Bound::Finite(cut),
            pass,
        });
        if !pass && witness.is_none() {
            let (sigma, deg) = offender.expect("failure implies a nonzero stalk degree");
            witness = Some(Witness {
                simplex: ctx.complex.name_of(sigma),
                degree: deg as i64,
                observed: Bound::Finite(deg as i64),
                bound: Bound::Finite(cut),
            });
        }
    }
    ClauseReport::new(id, witness, checks)
}

/// The attachment condition: at each cell of codimension `k >= 1` the map
/// `S(sigma) -> sections over st(sigma) ∩ U_k` induces isomorphisms on
/// `H^i` for `i <= p(k)`.  Rows record the first failing degree (`+inf` if
/// none) against the allowance.  A failure witness carries the two
/// cohomology dimensions being compared.
fn attachment_clause(
    ctx: &AxiomContext,
    strat: &Stratification,
    pers: &Perversity,
    id: &str,
) -> ClauseReport {
    let mut checks = Vec::new();
    let mut witness = None;
    for k in ctx.depths(strat) {
        let cut = pers.at(k as i64);
        let cut32 = cut.clamp(i32::MIN as i64, i32::MAX as i64) as i32;
        let uk = strat.open_union(ctx.complex, k as i64);
        let mut first_bad = Bound::PosInf;
        for &sigma in &strat.stratum(ctx.complex, k) {
            let sub: BTreeSet<SimplexId> = ctx
                .complex
                .strict_star(sigma)
                .into_iter()
                .filter(|t| uk.contains(t) && ctx.sheaf.carrier().contains(t))
                .collect();
            let roos = RoosComplex::build(ctx.complex, ctx.sheaf, &sub);
            let target_basis = CohomologyBasis::new(&roos.total);
            if !ctx.sheaf.carrier().contains(&sigma) {
                // Zero stalk: the condition asks the target to vanish in
                // the compared range.
                for (&d, &dim) in roos.total.cohomology().iter() {
                    if d <= cut32 && Bound::Finite(d as i64) < first_bad {
                        first_bad = Bound::Finite(d as i64);
                        if witness.is_none() {
                            witness = Some(Witness {
                                simplex: ctx.complex.name_of(sigma),
                                degree: d as i64,
                                observed: Bound::Finite(0),
                                bound: Bound::Finite(dim as i64),
                            });
                        }
                        break;
                    }
                }
                continue;
            }
            let stalk = ctx.sheaf.stalk(sigma);
            let source_basis = CohomologyBasis::new(stalk);
            let alpha = attachment(ctx.sheaf, sigma, &roos);
            let lo = stalk.lo.min(roos.total.lo);
            for i in lo..=cut32 {
                let ha = source_basis.betti(i);
                let hb = target_basis.betti(i);
                let iso = ha == hb
                    && (ha == 0
                        || induced_cohomology_map(
                            &alpha,
                            stalk,
                            &roos.total,
                            &source_basis,
                            &target_basis,
                            i,
                        )
                        .rank(&ctx.field())
                            == ha);
                if !iso {
                    if Bound::Finite(i as i64) < first_bad {
                        first_bad = Bound::Finite(i as i64);
                    }
                    if witness.is_none() {
                        witness = Some(Witness {
                            simplex: ctx.complex.name_of(sigma),
                            degree: i as i64,
                            observed: Bound::Finite(ha as i64),
                            bound: Bound::Finite(hb as i64),
                        });
                    }
                    break;
                }
            }
        }
        checks.push(ClauseCheck {
            codim: Some(k as i64),
            degree: None,
            observed: first_bad,
            bound: Bound::Finite(cut),
            pass: first_bad > Bound::Finite(cut),
        });
    }
    ClauseReport::new(id, witness, checks)
}

/// How a costalk-vanishing threshold is displayed.
enum ThresholdStyle {
    /// `H^j(f_x^!) = 0` for `j < n - q(k)`: the bound is the first admitted
    /// degree.
    FirstAdmitted,
    /// `H^j(f_x^!) = 0` for `j <= p(k)+1+n-k`: the bound is the last
    /// forbidden degree.
    LastForbidden,
}

/// Costalk vanishing below a per-codimension threshold ((1′c) and (1″c)).
/// Rows record the lowest nonzero costalk degree on each stratum.
fn costalk_threshold_clause(
    ctx: &AxiomContext,
    strat: &Stratification,
    pers: &Perversity,
    id: &str,
    style: ThresholdStyle,
) -> ClauseReport {
    let qbar = pers.dual();
    let mut checks = Vec::new();
    let mut witness = None;
    for k in ctx.depths(strat) {
        // n - q(k) = p(k) + n - k + 2, the first degree the clause admits.
        let admitted = ctx.n - qbar.at(k as i64);
        let bound = match style {
            ThresholdStyle::FirstAdmitted => Bound::Finite(admitted),
            ThresholdStyle::LastForbidden => Bound::Finite(admitted - 1),
        };
        let mut observed = Bound::PosInf;
        let mut offender: Option<(SimplexId, i32)> = None;
        for &sigma in &strat.stratum(ctx.complex, k) {
            if let Some((&deg, _)) = ctx.costalk_betti(sigma).iter().next() {
                if Bound::Finite(deg as i64) < observed {
                    observed = Bound::Finite(deg as i64);
                    offender = Some((sigma, deg));
                }
            }
        }
        let pass = observed >= Bound::Finite(admitted);
        checks.push(ClauseCheck {
            codim: Some(k as i64),
            degree: None,
            observed,
            bound,
            pass,
        });
        if !pass && witness.is_none() {
            let (sigma, deg) = offender.expect("failure implies a nonzero costalk degree");
            witness = Some(Witness {
                simplex: ctx.complex.name_of(sigma),
                degree: deg as i64,
                observed: Bound::Finite(deg as i64),
                bound,
            });
        }
    }
    ClauseReport::new(id, witness, checks)
}

/// Support-dimension clause: `dim supp H^j(S) <= n - p⁻¹(j)` for every
/// degree `j` with `j > min_exclusive`.
fn support_clause(
    ctx: &AxiomContext,
    pers: &Perversity,
    min_exclusive: Bound,
    id: &str,
) -> ClauseReport {
    let mut checks = Vec::new();
    let mut witness = None;
    for &j in &ctx.stalk_degrees() {
        let jj = j as i64;
        if Bound::Finite(jj) <= min_exclusive {
            continue;
        }
        let support: Vec<SimplexId> = ctx
            .sheaf
            .carrier()
            .iter()
            .copied()
            .filter(|&c| ctx.stalk_betti(c).contains_key(&j))
            .collect();
        let observed = ctx.set_dim(support.iter().copied());
        let bound = pers.inverse(jj).sub_from(ctx.n);
        let pass = observed <= bound;
        checks.push(ClauseCheck { codim: None, degree: Some(jj), observed, bound, pass });
        if !pass && witness.is_none() {
            let top = support
                .iter()
                .copied()
                .max_by_key(|&c| ctx.complex.dim_of(c))
                .expect("failing support is nonempty");
            witness = Some(Witness {
                simplex: ctx.complex.name_of(top),
                degree: jj,
                observed,
                bound,
            });
        }
    }
    ClauseReport::new(id, witness, checks)
}

/// Which degrees a cosupport clause constrains.
enum CosupportRange {
    /// `j < n` only (AX2's (2c) and AX3's (3c)).
    BelowTop,
    /// All `j != n`, plus the degree-`n` row restricted to the given closed
    /// set ((2′c) and (2″c)).
    SigmaAtTop(BTreeSet<SimplexId>),
}

/// Cosupport-dimension clause:
/// `dim {x : H^j(f_x^! S) != 0} <= n - q⁻¹(n - j)` over the selected range,
/// with the optional degree-`n` row measured inside the prescribed set
/// against `n - q⁻¹(0)`.
fn cosupport_clause(
    ctx: &AxiomContext,
    pers: &Perversity,
    range: CosupportRange,
    id: &str,
) -> ClauseReport {
    let qbar = pers.dual();
    let n32 = ctx.n.clamp(i32::MIN as i64, i32::MAX as i64) as i32;
    let mut checks = Vec::new();
    let mut witness = None;
    let mut push_row = |cells: Vec<SimplexId>, jj: i64, bound: Bound| {
        let observed = ctx.set_dim(cells.iter().copied());
        let pass = observed <= bound;
        checks.push(ClauseCheck { codim: None, degree: Some(jj), observed, bound, pass });
        if !pass && witness.is_none() {
            let top = cells
                .iter()
                .copied()
                .max_by_key(|&c| ctx.complex.dim_of(c))
                .expect("failing cosupport is nonempty");
            witness = Some(Witness {
                simplex: ctx.complex.name_of(top),
                degree: jj,
                observed,
                bound,
            });
        }
    };
    for &j in &ctx.costalk_degrees() {
        let keep = match range {
            CosupportRange::BelowTop => j < n32,
            CosupportRange::SigmaAtTop(_) => j != n32,
        };
        if !keep {
            continue;
        }
        let jj = j as i64;
        let cells: Vec<SimplexId> = ctx
            .complex
            .ids()
            .filter(|&c| ctx.costalk_betti(c).contains_key(&j))
            .collect();
        push_row(cells, jj, qbar.inverse(ctx.n - jj).sub_from(ctx.n));
    }
    if let CosupportRange::SigmaAtTop(sigma) = range {
        let cells: Vec<SimplexId> = sigma
            .iter()
            .copied()
            .filter(|&c| ctx.costalk_betti(c).contains_key(&n32))
            .collect();
        push_row(cells, ctx.n, qbar.inverse(0).sub_from(ctx.n));
    }
    ClauseReport::new(id, witness, checks)
}

/// The coefficients clause of AX3: on `U_c` the sheaf has the stalkwise
/// cohomology of the full pushforward of the coefficient system (a
/// quasi-isomorphism proxy for `S|_{U_c} = (Ri_* G)|_{U_c}`).
fn pushforward_match(
    ctx: &AxiomContext,
    strat: &Stratification,
    pers: &Perversity,
    system: &LocalSystem,
) -> Result<(Option<Witness>, String), AxiomsError> {
    let c = pers.dual().inverse(0);
    let u_c: BTreeSet<SimplexId> = match c {
        Bound::PosInf => ctx.complex.ids().collect(),
        Bound::NegInf => BTreeSet::new(),
        Bound::Finite(v) => strat.open_union(ctx.complex, v),
    };
    let note = format!("c = {c}; compared on U_c ({} cells)", u_c.len());
    let u1 = strat.open_union(ctx.complex, 1);
    let push = full_pushforward(ctx.complex, ctx.field(), Some(system), &u1)?;
    for &sigma in &u_c {
        let ours = ctx.stalk_betti(sigma);
        let want = push.stalk_betti(sigma);
        if ours != want {
            let degs: BTreeSet<i32> = ours.keys().chain(want.keys()).copied().collect();
            let d = degs
                .into_iter()
                .find(|d| ours.get(d) != want.get(d))
                .expect("unequal maps differ somewhere");
            return Ok((
                Some(Witness {
                    simplex: ctx.complex.name_of(sigma),
                    degree: d as i64,
                    observed: Bound::Finite(*ours.get(&d).unwrap_or(&0) as i64),
                    bound: Bound::Finite(*want.get(&d).unwrap_or(&0) as i64),
                }),
                note,
            ));
        }
    }
    Ok((None, note))
}

// ---------------------------------------------------------------------------
// The systems
// ---------------------------------------------------------------------------

impl<'a> AxiomContext<'a> {
    /// AX1: normalization up to quasi-isomorphism, stalk vanishing, and the
    /// attachment condition.
    pub fn ax1(
        &self,
        strat: &Stratification,
        pers: &Perversity,
        system: &LocalSystem,
    ) -> Result<AxiomReport, AxiomsError> {
        strat.validate(self.complex)?;
        let u1 = strat.open_union(self.complex, 1);
        let witness = negative_cohomology(self)
            .or(normalization(self, &u1, system)?);
        let a = ClauseReport::new("1a", witness, Vec::new())
            .with_note("bounded: finite complex".to_string());
        let b = stalk_vanishing_clause(self, strat, pers, "1b");
        let c = attachment_clause(self, strat, pers, "1c");
        Ok(AxiomReport::new("AX1", vec![a, b, c]))
    }

    /// AX1′: as AX1 but with local constancy in place of the attachment
    /// condition's normalization role, and costalk vanishing instead of the
    /// attachment isomorphisms.
    pub fn ax1_prime(
        &self,
        strat: &Stratification,
        pers: &Perversity,
        system: &LocalSystem,
    ) -> Result<AxiomReport, AxiomsError> {
        strat.validate(self.complex)?;
        let u1 = strat.open_union(self.complex, 1);
        let witness = negative_cohomology(self)
            .or(normalization(self, &u1, system)?)
            .or_else(|| clc_witness(self, strat));
        let a = ClauseReport::new("1'a", witness, Vec::new())
            .with_note("bounded: finite complex; includes local constancy".to_string());
        let b = stalk_vanishing_clause(self, strat, pers, "1'b");
        let c = costalk_threshold_clause(
            self,
            strat,
            pers,
            "1'c",
            ThresholdStyle::FirstAdmitted,
        );
        Ok(AxiomReport::new("AX1'", vec![a, b, c]))
    }

    /// The clause (1″c) alone: `H^j(j_k^! S) = 0` for `j <= p(k) + 1`,
    /// evaluated through the shift identity
    /// `H^j(f_x^!) = H^{j-n+k}((j_k^! S)_x)`, which needs the sheaf to be
    /// locally constant along strata.
    pub fn ax1_double_prime_c(
        &self,
        strat: &Stratification,
        pers: &Perversity,
    ) -> Result<AxiomReport, AxiomsError> {
        strat.validate(self.complex)?;
        if let Some(w) = clc_witness(self, strat) {
            let clause = ClauseReport {
                id: "1''c".to_string(),
                pass: false,
                witness: Some(w),
                checks: Vec::new(),
                note: Some(
                    "not applicable: the sheaf is not locally constant along strata, \
                     so the shift identity for stratum costalks does not apply"
                        .to_string(),
                ),
            };
            return Ok(AxiomReport::new("AX1''c", vec![clause]));
        }
        let mut clause = costalk_threshold_clause(
            self,
            strat,
            pers,
            "1''c",
            ThresholdStyle::LastForbidden,
        );
        if clause.checks.is_empty() {
            clause = clause.with_note("vacuous: no strata of codimension >= 1".to_string());
        }
        Ok(AxiomReport::new("AX1''c", vec![clause]))
    }

    /// AX2: the standard support/cosupport axioms, with the cosupport
    /// clause restricted to degrees below `n`.
    pub fn ax2(
        &self,
        strat: &Stratification,
        pers: &Perversity,
        system: &LocalSystem,
    ) -> Result<AxiomReport, AxiomsError> {
        strat.validate(self.complex)?;
        let u1 = strat.open_union(self.complex, 1);
        let witness = chain_degrees_nonnegative(self)
            .or(normalization(self, &u1, system)?)
            .or_else(|| clc_witness(self, strat));
        let a = ClauseReport::new("2a", witness, Vec::new())
            .with_note("bounded: finite complex; includes local constancy".to_string());
        let b = support_clause(self, pers, Bound::Finite(0), "2b");
        let c = cosupport_clause(self, pers, CosupportRange::BelowTop, "2c");
        Ok(AxiomReport::new("AX2", vec![a, b, c]))
    }

    /// AX2′: as AX2, but the degree-`n` cosupport is also constrained,
    /// measured inside the skeleton `X^{n-1}`.
    pub fn ax2_prime(
        &self,
        strat: &Stratification,
        pers: &Perversity,
        system: &LocalSystem,
    ) -> Result<AxiomReport, AxiomsError> {
        strat.validate(self.complex)?;
        let u1 = strat.open_union(self.complex, 1);
        let witness = chain_degrees_nonnegative(self)
            .or(normalization(self, &u1, system)?)
            .or_else(|| clc_witness(self, strat));
        let a = ClauseReport::new("2'a", witness, Vec::new())
            .with_note("bounded: finite complex; includes local constancy".to_string());
        let b = support_clause(self, pers, Bound::Finite(0), "2'b");
        let sigma = strat.closed_skeleton(self.complex, self.n - 1);
        let c = cosupport_clause(self, pers, CosupportRange::SigmaAtTop(sigma), "2'c");
        Ok(AxiomReport::new("AX2'", vec![a, b, c]))
    }

    /// AX2″: as AX2′, but local constancy is existential over candidate
    /// stratifications subject to the prescribed singular set.
    pub fn ax2_double_prime(
        &self,
        sigma: &BTreeSet<SimplexId>,
        candidates: &[Stratification],
        pers: &Perversity,
        system: &LocalSystem,
    ) -> Result<AxiomReport, AxiomsError> {
        let (sigma_closed, u1) = self.existential_setup(sigma, candidates)?;
        let mut witness = chain_degrees_nonnegative(self)
            .or(normalization(self, &u1, system)?);
        let mut note = "bounded: finite complex".to_string();
        if witness.is_none() {
            let mut found = None;
            let mut first_failure = None;
            for (i, cand) in candidates.iter().enumerate() {
                match clc_witness(self, cand) {
                    None => {
                        found = Some(i);
                        break;
                    }
                    Some(w) => {
                        first_failure.get_or_insert(w);
                    }
                }
            }
            match found {
                Some(i) => {
                    note = format!(
                        "locally constant for candidate stratification #{i} of {}",
                        candidates.len()
                    );
                }
                None => {
                    note = "no candidate stratification makes the sheaf locally constant"
                        .to_string();
                    witness = first_failure;
                }
            }
        }
        let a = ClauseReport::new("2''a", witness, Vec::new()).with_note(note);
        let b = support_clause(self, pers, Bound::Finite(0), "2''b");
        let c = cosupport_clause(self, pers, CosupportRange::SigmaAtTop(sigma_closed), "2''c");
        Ok(AxiomReport::new("AX2''", vec![a, b, c]))
    }

    /// AX3: the codimension-threshold axioms.  On `U_c` the sheaf must be
    /// the full pushforward of the coefficients; support is constrained
    /// only above `c - 2`, cosupport only below `n`.
    pub fn ax3(
        &self,
        strat: &Stratification,
        pers: &Perversity,
        system: &LocalSystem,
    ) -> Result<AxiomReport, AxiomsError> {
        strat.validate(self.complex)?;
        let c_thresh = pers.dual().inverse(0);
        let witness = chain_degrees_nonnegative(self).or_else(|| clc_witness(self, strat));
        let (push_witness, push_note) = match witness {
            Some(_) => (None, "pushforward comparison skipped".to_string()),
            None => pushforward_match(self, strat, pers, system)?,
        };
        let a = ClauseReport::new("3a", witness.or(push_witness), Vec::new()).with_note(
            format!("bounded: finite complex; includes local constancy; {push_note}"),
        );
        let mut b = support_clause(self, pers, c_thresh.offset(-2), "3b");
        if b.checks.is_empty() {
            b = b.with_note(format!("vacuous: no stalk degree exceeds c - 2 with c = {c_thresh}"));
        }
        let c = cosupport_clause(self, pers, CosupportRange::BelowTop, "3c");
        Ok(AxiomReport::new("AX3", vec![a, b, c]))
    }

    /// AX3″: as AX3, but the stratification-dependent parts (local
    /// constancy and the pushforward comparison on `U_c`) are existential
    /// over candidate stratifications subject to the prescribed singular
    /// set.
    pub fn ax3_double_prime(
        &self,
        sigma: &BTreeSet<SimplexId>,
        candidates: &[Stratification],
        pers: &Perversity,
        system: &LocalSystem,
    ) -> Result<AxiomReport, AxiomsError> {
        self.existential_setup(sigma, candidates)?;
        let c_thresh = pers.dual().inverse(0);
        let mut witness = chain_degrees_nonnegative(self);
        let mut note = "bounded: finite complex".to_string();
        if witness.is_none() {
            let mut found = None;
            let mut first_failure = None;
            for (i, cand) in candidates.iter().enumerate() {
                let w = match clc_witness(self, cand) {
                    Some(w) => Some(w),
                    None => pushforward_match(self, cand, pers, system)?.0,
                };
                match w {
                    None => {
                        found = Some(i);
                        break;
                    }
                    Some(w) => {
                        first_failure.get_or_insert(w);
                    }
                }
            }
            match found {
                Some(i) => {
                    note = format!(
                        "locally constant and matching Ri_*G on U_c for candidate #{i} of {} \
                         (c = {c_thresh})",
                        candidates.len()
                    );
                }
                None => {
                    note = format!(
                        "no candidate stratification satisfies the clause (c = {c_thresh})"
                    );
                    witness = first_failure;
                }
            }
        }
        let a = ClauseReport::new("3''a", witness, Vec::new()).with_note(note);
        let mut b = support_clause(self, pers, c_thresh.offset(-2), "3''b");
        if b.checks.is_empty() {
            b = b.with_note(format!("vacuous: no stalk degree exceeds c - 2 with c = {c_thresh}"));
        }
        let c = cosupport_clause(self, pers, CosupportRange::BelowTop, "3''c");
        Ok(AxiomReport::new("AX3''", vec![a, b, c]))
    }

    fn existential_setup(
        &self,
        sigma: &BTreeSet<SimplexId>,
        candidates: &[Stratification],
    ) -> Result<(BTreeSet<SimplexId>, BTreeSet<SimplexId>), AxiomsError> {
        if candidates.is_empty() {
            return Err(AxiomsError::NoCandidates);
        }
        let sigma_closed = self.complex.closure(sigma.iter().copied());
        for (index, cand) in candidates.iter().enumerate() {
            cand.validate(self.complex)?;
            if !cand.is_subject_to(self.complex, &sigma_closed) {
                return Err(AxiomsError::NotSubjectToSigma { index });
            }
        }
        let u1: BTreeSet<SimplexId> =
            self.complex.ids().filter(|id| !sigma_closed.contains(id)).collect();
        Ok((sigma_closed, u1))
    }

    /// Run one named system.  The ″-systems take the singular set of
    /// `strat` as the prescribed `Σ` and check the existential clauses over
    /// `candidates` (falling back to `strat` itself when empty).
    pub fn check(
        &self,
        id: SystemId,
        strat: &Stratification,
        candidates: &[Stratification],
        pers: &Perversity,
        system: &LocalSystem,
    ) -> Result<AxiomReport, AxiomsError> {
        let own: Vec<Stratification>;
        let cands: &[Stratification] = if candidates.is_empty() {
            own = vec![strat.clone()];
            &own
        } else {
            candidates
        };
        let sigma = strat.singular_set(self.complex);
        match id {
            SystemId::Ax1 => self.ax1(strat, pers, system),
            SystemId::Ax1Prime => self.ax1_prime(strat, pers, system),
            SystemId::Ax1DoublePrimeC => self.ax1_double_prime_c(strat, pers),
            SystemId::Ax2 => self.ax2(strat, pers, system),
            SystemId::Ax2Prime => self.ax2_prime(strat, pers, system),
            SystemId::Ax2DoublePrime => self.ax2_double_prime(&sigma, cands, pers, system),
            SystemId::Ax3 => self.ax3(strat, pers, system),
            SystemId::Ax3DoublePrime => self.ax3_double_prime(&sigma, cands, pers, system),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::{circle, equator_sigma, sphere2, suspended_torus, vertex_stratification};
    use crate::deligne::{build_deligne, DeligneOptions};
    use crate::linalg::{ChainMap, CochainComplex, SparseMat};
    use std::collections::BTreeMap;

    fn id1() -> LocalSystem {
        LocalSystem::identity(1)
    }

    #[test]
    fn bounds_serialize_as_numbers_or_infinity_strings() {
        assert_eq!(serde_json::to_string(&Bound::NegInf).unwrap(), "\"-inf\"");
        assert_eq!(serde_json::to_string(&Bound::Finite(3)).unwrap(), "3");
        assert_eq!(serde_json::to_string(&Bound::PosInf).unwrap(), "\"+inf\"");
        assert_eq!(Bound::Finite(-2).to_string(), "-2");
        assert_eq!(SystemId::parse("AX2'"), Some(SystemId::Ax2Prime));
        assert_eq!(SystemId::parse("ax2p"), Some(SystemId::Ax2Prime));
        assert_eq!(SystemId::parse("AX1''c"), Some(SystemId::Ax1DoublePrimeC));
        assert_eq!(SystemId::parse("AX3''"), Some(SystemId::Ax3DoublePrime));
        assert_eq!(SystemId::parse("nonsense"), None);
        for id in SystemId::ALL {
            assert_eq!(SystemId::parse(id.label()), Some(id), "{}", id.label());
        }
    }

    #[test]
    fn deligne_sheaf_on_superperverse_sphere_satisfies_every_system() {
        let c = sphere2();
        let strat = vertex_stratification(&c, &["v0"], 2);
        let p = Perversity::ultra(2);
        let sys = id1();
        let build =
            build_deligne(&c, &strat, &p, Field::Q, None, DeligneOptions::default()).unwrap();
        let ctx = AxiomContext::new(&c, &build.sheaf);
        for id in SystemId::ALL {
            let rep = ctx.check(id, &strat, &[], &p, &sys).unwrap();
            assert!(rep.pass, "{} should hold for the Deligne sheaf", id.label());
        }
        // The costalk threshold row: nothing observed, first admitted
        // degree is n - q(2) = 3.
        let rep = ctx.ax1_prime(&strat, &p, &sys).unwrap();
        let row = &rep.clause("1'c").unwrap().checks;
        assert_eq!(row.len(), 1);
        assert_eq!(row[0].codim, Some(2));
        assert_eq!(row[0].observed, Bound::PosInf);
        assert_eq!(row[0].bound, Bound::Finite(3));
        // The ultra perversity never reaches its dual's zero: c is infinite
        // and the pushforward comparison covers the whole space.
        let rep = ctx.ax3(&strat, &p, &sys).unwrap();
        assert!(rep.clause("3a").unwrap().note.as_deref().unwrap().contains("c = +inf"));
        assert!(rep.clause("3b").unwrap().note.as_deref().unwrap().contains("vacuous"));
    }

    #[test]
    fn constant_sheaf_separates_the_prime_systems_on_the_superperverse_sphere() {
        let c = sphere2();
        let strat = vertex_stratification(&c, &["v0"], 2);
        let p = Perversity::ultra(2);
        let sys = id1();
        let sheaf = CellSheafComplex::constant(&c, Field::Q, 1);
        let ctx = AxiomContext::new(&c, &sheaf);

        // AX2 is blind to the degree-n costalk: the constant sheaf passes.
        assert!(ctx.ax2(&strat, &p, &sys).unwrap().pass);

        // AX2' catches it on the singular skeleton, with the canonical
        // witness: at v0 the degree-2 costalk is supported on a point
        // (dimension 0) while the bound is -inf.
        let rep = ctx.ax2_prime(&strat, &p, &sys).unwrap();
        assert!(!rep.pass);
        let w = rep.clause("2'c").unwrap().witness.as_ref().unwrap();
        assert_eq!(
            serde_json::to_string(w).unwrap(),
            r#"{"simplex":"v0","degree":2,"observed":0,"bound":"-inf"}"#
        );

        // AX1 fails the attachment isomorphism at degree 1 (stalk H^1 = 0
        // against link H^1 = 1).
        let rep = ctx.ax1(&strat, &p, &sys).unwrap();
        assert!(!rep.pass);
        let w = rep.clause("1c").unwrap().witness.as_ref().unwrap();
        assert_eq!(
            (w.simplex.as_str(), w.degree, w.observed, w.bound),
            ("v0", 1, Bound::Finite(0), Bound::Finite(1))
        );

        // AX1' sees the degree-2 costalk below the admitted degree 3.
        let rep = ctx.ax1_prime(&strat, &p, &sys).unwrap();
        assert!(!rep.pass);
        let w = rep.clause("1'c").unwrap().witness.as_ref().unwrap();
        assert_eq!(
            (w.simplex.as_str(), w.degree, w.observed, w.bound),
            ("v0", 2, Bound::Finite(2), Bound::Finite(3))
        );

        // The (1''c) formulation displays the last forbidden degree
        // p(2) + 1 + n - 2 = 2 and fails on the same costalk.
        let rep = ctx.ax1_double_prime_c(&strat, &p).unwrap();
        assert!(!rep.pass);
        let w = rep.clause("1''c").unwrap().witness.as_ref().unwrap();
        assert_eq!(
            (w.simplex.as_str(), w.degree, w.observed, w.bound),
            ("v0", 2, Bound::Finite(2), Bound::Finite(2))
        );

        // AX3 compares against the full pushforward everywhere (c = +inf)
        // and finds the missing link cohomology at degree 1.
        let rep = ctx.ax3(&strat, &p, &sys).unwrap();
        assert!(!rep.pass);
        let w = rep.clause("3a").unwrap().witness.as_ref().unwrap();
        assert_eq!(
            (w.simplex.as_str(), w.degree, w.observed, w.bound),
            ("v0", 1, Bound::Finite(0), Bound::Finite(1))
        );

        // The existential variants inherit the failures.
        assert!(!ctx.check(SystemId::Ax2DoublePrime, &strat, &[], &p, &sys).unwrap().pass);
        assert!(!ctx.check(SystemId::Ax3DoublePrime, &strat, &[], &p, &sys).unwrap().pass);
    }

    #[test]
    fn zero_rank_sheaf_fails_normalization() {
        let c = sphere2();
        let strat = vertex_stratification(&c, &["v0"], 2);
        let p = Perversity::zero(2);
        let sheaf = CellSheafComplex::constant(&c, Field::Q, 0);
        let ctx = AxiomContext::new(&c, &sheaf);
        let rep = ctx.ax1(&strat, &p, &id1()).unwrap();
        assert!(!rep.pass);
        let w = rep.clause("1a").unwrap().witness.as_ref().unwrap();
        assert_eq!(w.degree, 0);
        assert_eq!(w.observed, Bound::Finite(0));
        assert_eq!(w.bound, Bound::Finite(1));
    }

    #[test]
    fn extra_stalk_degree_violates_the_support_bound() {
        let c = sphere2();
        let strat = Stratification::trivial(&c);
        let p = Perversity::zero(2);
        let field = Field::Q;
        // Stalks F + F[-1] with zero differential, identity restrictions.
        let stalk =
            CochainComplex::new(field, 0, vec![1, 1], vec![SparseMat::zero(1, 1)]).unwrap();
        let carrier: BTreeSet<SimplexId> = c.ids().collect();
        let stalks: BTreeMap<SimplexId, CochainComplex> =
            carrier.iter().map(|&id| (id, stalk.clone())).collect();
        let mut cover = BTreeMap::new();
        for &id in &carrier {
            for &cf in c.cofacets(id) {
                cover.insert((id, cf), ChainMap::identity(&stalk));
            }
        }
        let sheaf = CellSheafComplex::from_cover_data(&c, field, carrier, stalks, cover).unwrap();
        let ctx = AxiomContext::new(&c, &sheaf);
        let rep = ctx.ax2(&strat, &p, &id1()).unwrap();
        assert!(!rep.pass);
        assert!(!rep.clause("2a").unwrap().pass, "stalks are not the coefficients");
        let b = rep.clause("2b").unwrap();
        assert!(!b.pass);
        assert_eq!(b.checks.len(), 1);
        assert_eq!(b.checks[0].degree, Some(1));
        assert_eq!(b.checks[0].observed, Bound::Finite(2));
        assert_eq!(b.checks[0].bound, Bound::NegInf);
        assert_eq!(b.witness.as_ref().unwrap().degree, 1);
    }

    #[test]
    fn trivial_stratification_makes_every_system_vacuous() {
        let c = sphere2();
        let strat = Stratification::trivial(&c);
        let p = Perversity::zero(2);
        let sys = id1();
        let sheaf = CellSheafComplex::constant(&c, Field::Q, 1);
        let ctx = AxiomContext::new(&c, &sheaf);
        for id in SystemId::ALL {
            let rep = ctx.check(id, &strat, &[], &p, &sys).unwrap();
            assert!(rep.pass, "{} on an unstratified manifold", id.label());
        }
        let rep = ctx.ax1_double_prime_c(&strat, &p).unwrap();
        let clause = rep.clause("1''c").unwrap();
        assert!(clause.checks.is_empty());
        assert!(clause.note.as_deref().unwrap().contains("vacuous"));
    }

    /// A sheaf that jumps rank at one vertex of a circle stratum: locally
    /// constant for the stratification that isolates the vertices, but not
    /// for the coarse one keeping the circle in one piece.
    fn rank_jump_on_equator() -> (SimplicialComplex, Stratification, Stratification, CellSheafComplex)
    {
        let c = sphere2();
        let sigma = equator_sigma(&c);
        let fine = Stratification::default_for_sigma(&c, &sigma).unwrap();
        let mut depth = vec![0u32; c.len()];
        for &id in &sigma {
            depth[id] = 1;
        }
        let coarse = Stratification::from_depths(&c, depth);
        let field = Field::Q;
        let v0 = c.id_by_names(&["v0"]).unwrap();
        let carrier: BTreeSet<SimplexId> = c.ids().collect();
        let stalks: BTreeMap<SimplexId, CochainComplex> = carrier
            .iter()
            .map(|&id| {
                let rank = if id == v0 { 2 } else { 1 };
                (id, CochainComplex::concentrated(field, 0, rank))
            })
            .collect();
        let mut cover = BTreeMap::new();
        for &id in &carrier {
            for &cf in c.cofacets(id) {
                let map = if id == v0 {
                    let mut m = SparseMat::zero(1, 2);
                    m.set(0, 0, field.one());
                    ChainMap { comps: BTreeMap::from([(0, m)]) }
                } else {
                    ChainMap { comps: BTreeMap::from([(0, SparseMat::identity(1, &field))]) }
                };
                cover.insert((id, cf), map);
            }
        }
        let sheaf = CellSheafComplex::from_cover_data(&c, field, carrier, stalks, cover).unwrap();
        (c, coarse, fine, sheaf)
    }

    #[test]
    fn local_constancy_failures_are_reported_not_searched() {
        let (c, coarse, fine, sheaf) = rank_jump_on_equator();
        let p = Perversity::zero(2);
        let sys = id1();
        let ctx = AxiomContext::new(&c, &sheaf);

        // AX1' fails its a-clause outright for the coarse stratification.
        let rep = ctx.ax1_prime(&coarse, &p, &sys).unwrap();
        assert!(!rep.clause("1'a").unwrap().pass);

        // (1''c) refuses to interpret costalks through the shift identity.
        let rep = ctx.ax1_double_prime_c(&coarse, &p).unwrap();
        assert!(!rep.pass);
        assert!(rep
            .clause("1''c")
            .unwrap()
            .note
            .as_deref()
            .unwrap()
            .contains("not applicable"));

        // With only the coarse candidate the existential clause fails...
        let sigma = coarse.singular_set(&c);
        let rep = ctx.ax2_double_prime(&sigma, std::slice::from_ref(&coarse), &p, &sys).unwrap();
        let a = rep.clause("2''a").unwrap();
        assert!(!a.pass);
        assert!(a.note.as_deref().unwrap().contains("no candidate"));

        // ...but the finer stratification witnesses local constancy.
        let rep = ctx
            .ax2_double_prime(&sigma, &[coarse.clone(), fine.clone()], &p, &sys)
            .unwrap();
        let a = rep.clause("2''a").unwrap();
        assert!(a.pass);
        assert!(a.note.as_deref().unwrap().contains("#1"));
    }

    #[test]
    fn existential_systems_demand_candidates_subject_to_sigma() {
        let c = sphere2();
        let strat = vertex_stratification(&c, &["v0"], 2);
        let p = Perversity::zero(2);
        let sys = id1();
        let sheaf = CellSheafComplex::constant(&c, Field::Q, 1);
        let ctx = AxiomContext::new(&c, &sheaf);
        let sigma = strat.singular_set(&c);

        let rep = ctx.ax2_double_prime(&sigma, std::slice::from_ref(&strat), &p, &sys).unwrap();
        assert!(rep.pass);
        assert!(rep.clause("2''a").unwrap().note.as_deref().unwrap().contains("#0"));
        let rep = ctx.ax3_double_prime(&sigma, std::slice::from_ref(&strat), &p, &sys).unwrap();
        assert!(rep.pass);

        let err = ctx.ax2_double_prime(&sigma, &[], &p, &sys).unwrap_err();
        assert!(matches!(err, AxiomsError::NoCandidates));
        let err = ctx
            .ax2_double_prime(&sigma, &[Stratification::trivial(&c)], &p, &sys)
            .unwrap_err();
        assert!(matches!(err, AxiomsError::NotSubjectToSigma { index: 0 }));
    }

    /// The verdicts of AX1, AX1', AX2', and AX3 agree on every locally
    /// constant sheaf in the corpus: Deligne outputs pass all four, the
    /// constant sheaf fails all four wherever it differs from the Deligne
    /// sheaf.
    #[test]
    fn equivalent_systems_agree_across_the_corpus() {
        let quadruple = [SystemId::Ax1, SystemId::Ax1Prime, SystemId::Ax2Prime, SystemId::Ax3];
        let sphere = sphere2();
        let ring = circle();
        let st = suspended_torus();
        let cases: Vec<(&SimplicialComplex, Stratification, Perversity)> = vec![
            (&sphere, vertex_stratification(&sphere, &["v0"], 2), Perversity::ultra(2)),
            (
                &sphere,
                Stratification::default_for_sigma(&sphere, &equator_sigma(&sphere)).unwrap(),
                Perversity::zero(2),
            ),
            (&ring, vertex_stratification(&ring, &["v0"], 1), Perversity::ultra(1)),
            (&st, vertex_stratification(&st, &["N", "S"], 3), Perversity::new(vec![0, 1, 1]).unwrap()),
        ];
        let sys = id1();
        for (complex, strat, p) in &cases {
            let build =
                build_deligne(complex, strat, p, Field::Q, None, DeligneOptions::default())
                    .unwrap();
            let ctx = AxiomContext::new(complex, &build.sheaf);
            for id in quadruple {
                assert!(
                    ctx.check(id, strat, &[], p, &sys).unwrap().pass,
                    "{} on a Deligne sheaf (n = {})",
                    id.label(),
                    complex.dim()
                );
            }
            let constant = CellSheafComplex::constant(complex, Field::Q, 1);
            let ctx = AxiomContext::new(complex, &constant);
            let verdicts: Vec<bool> = quadruple
                .iter()
                .map(|&id| ctx.check(id, strat, &[], p, &sys).unwrap().pass)
                .collect();
            assert!(
                verdicts.iter().all(|&v| v == verdicts[0]),
                "verdicts diverge on the constant sheaf (n = {}): {verdicts:?}",
                complex.dim()
            );
        }
        // A twisted coefficient system through the same machinery.
        let strat = vertex_stratification(&ring, &["v0"], 1);
        let p = Perversity::ultra(1);
        let v1 = ring.id_by_names(&["v1"]).unwrap();
        let e12 = ring.id_by_names(&["v1", "v2"]).unwrap();
        let mut m = SparseMat::zero(1, 1);
        m.set(0, 0, Field::Q.from_i64(-1));
        let twisted = LocalSystem { rank: 1, twists: BTreeMap::from([((v1, e12), m)]) };
        let build = build_deligne(
            &ring,
            &strat,
            &p,
            Field::Q,
            Some(&twisted),
            DeligneOptions::default(),
        )
        .unwrap();
        let ctx = AxiomContext::new(&ring, &build.sheaf);
        for id in quadruple {
            assert!(
                ctx.check(id, &strat, &[], &p, &twisted).unwrap().pass,
                "{} on the twisted Deligne sheaf",
                id.label()
            );
        }
    }

    /// Where the dual perversity stays nonnegative on the present
    /// codimensions, the degree-n cosupport row is harmless: AX2 and AX2'
    /// return the same verdict.
    #[test]
    fn ax2_and_ax2_prime_agree_for_traditional_perversities() {
        let sphere = sphere2();
        let st = suspended_torus();
        let sys = id1();
        let cases: Vec<(&SimplicialComplex, Stratification, Perversity)> = vec![
            (&sphere, vertex_stratification(&sphere, &["v0"], 2), Perversity::zero(2)),
            (&sphere, vertex_stratification(&sphere, &["v0"], 2), Perversity::top(2)),
            (&st, vertex_stratification(&st, &["N", "S"], 3), Perversity::new(vec![0, 1, 1]).unwrap()),
        ];
        for (complex, strat, p) in &cases {
            let build =
                build_deligne(complex, strat, p, Field::Q, None, DeligneOptions::default())
                    .unwrap();
            for sheaf in [build.sheaf, CellSheafComplex::constant(complex, Field::Q, 1)] {
                let ctx = AxiomContext::new(complex, &sheaf);
                let a = ctx.ax2(strat, p, &sys).unwrap().pass;
                let b = ctx.ax2_prime(strat, p, &sys).unwrap().pass;
                assert_eq!(a, b, "AX2 vs AX2' (n = {})", complex.dim());
            }
        }
    }

    #[test]
    fn reduced_suspension_sheaf_passes_with_many_candidate_stratifications() {
        let c = suspended_torus();
        let strat33 = vertex_stratification(&c, &["N", "S"], 3);
        let north = c.id_by_names(&["N"]).unwrap();
        let south = c.id_by_names(&["S"]).unwrap();
        let mut d = strat33.depths().to_vec();
        d[south] = 2;
        let strat32 = Stratification::from_depths(&c, d);
        let mut d = strat33.depths().to_vec();
        d[north] = 2;
        d[south] = 2;
        let strat22 = Stratification::from_depths(&c, d);
        let p = Perversity::new(vec![0, 1, 1]).unwrap();
        let sys = id1();
        let opts = DeligneOptions { reduce: true, retain_stages: false };
        let build = build_deligne(&c, &strat33, &p, Field::Q, None, opts).unwrap();
        let ctx = AxiomContext::new(&c, &build.sheaf);
        assert!(ctx.ax1_prime(&strat33, &p, &sys).unwrap().pass);
        assert!(ctx.ax2_prime(&strat33, &p, &sys).unwrap().pass);
        assert!(ctx.ax3(&strat33, &p, &sys).unwrap().pass);
        let sigma = strat33.singular_set(&c);
        let cands = [strat33.clone(), strat32, strat22];
        assert!(ctx.ax2_double_prime(&sigma, &cands, &p, &sys).unwrap().pass);
        assert!(ctx.ax3_double_prime(&sigma, &cands, &p, &sys).unwrap().pass);
    }
}
