//! Acceptance suite: ten end-to-end criteria covering the headline
//! computations, the axiom checkers, stratification independence, and the
//! supporting infrastructure.  Each test prints one `ACCEPTANCE <n>` line
//! (visible with `cargo test --test acceptance -- --nocapture`).

use perverse::axioms::{AxiomContext, SystemId};
use perverse::builtin::{
    circle, equator_sigma, sphere2, suspended_torus, torus7, vertex_stratification,
};
use perverse::complex::{SimplexId, SimplicialComplex, Stratification};
use perverse::deligne::{
    build_deligne, complement_cohomology, full_pushforward, intersection_cohomology,
    DeligneBuild, DeligneOptions, LocalSystem,
};
use perverse::linalg::Field;
use perverse::perversity::Perversity;
use perverse::sheaf::{costalk, hypercohomology, CellSheafComplex};
use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

fn dense(map: &BTreeMap<i32, usize>, hi: i32) -> Vec<usize> {
    (0..=hi).map(|d| map.get(&d).copied().unwrap_or(0)).collect()
}

fn chi(map: &BTreeMap<i32, usize>) -> i64 {
    map.iter().map(|(&d, &b)| if d % 2 == 0 { b as i64 } else { -(b as i64) }).sum()
}

fn ih(
    complex: &SimplicialComplex,
    strat: &Stratification,
    pers: &Perversity,
) -> BTreeMap<i32, usize> {
    intersection_cohomology(complex, strat, pers, Field::Q, None, false).unwrap()
}

fn deligne(
    complex: &SimplicialComplex,
    strat: &Stratification,
    pers: &Perversity,
    reduce: bool,
) -> DeligneBuild {
    let opts = DeligneOptions { reduce, retain_stages: false };
    build_deligne(complex, strat, pers, Field::Q, None, opts).unwrap()
}

fn point_sphere() -> (SimplicialComplex, Stratification) {
    let c = sphere2();
    let strat = vertex_stratification(&c, &["v0"], 2);
    (c, strat)
}

fn all_ids(c: &SimplicialComplex) -> BTreeSet<SimplexId> {
    c.ids().collect()
}

#[test]
fn acceptance_01_superperverse_point_kills_the_top_class() {
    let (c, strat) = point_sphere();
    let got = dense(&ih(&c, &strat, &Perversity::ultra(2)), 2);
    assert_eq!(got, vec![1, 0, 0]);
    println!("ACCEPTANCE 1 (sphere, point stratum, ultra -> [1,0,1] loses the top class): PASS");
}

#[test]
fn acceptance_02_trivial_stratification_recovers_ordinary_cohomology() {
    let c = sphere2();
    let strat = Stratification::trivial(&c);
    for pers in [Perversity::zero(2), Perversity::top(2), Perversity::ultra(2)] {
        assert_eq!(dense(&ih(&c, &strat, &pers), 2), vec![1, 0, 1]);
    }
    println!("ACCEPTANCE 2 (unstratified sphere -> [1,0,1] for every perversity): PASS");
}

#[test]
fn acceptance_03_equator_stratum_splits_the_sphere() {
    let c = sphere2();
    let strat = Stratification::default_for_sigma(&c, &equator_sigma(&c)).unwrap();
    assert_eq!(dense(&ih(&c, &strat, &Perversity::zero(2)), 2), vec![2, 0, 0]);
    println!("ACCEPTANCE 3 (sphere cut along the equator, zero -> [2,0,0]): PASS");
}

#[test]
fn acceptance_04_stalk_and_costalk_at_the_singular_point() {
    let (c, strat) = point_sphere();
    let v0 = c.id_by_names(&["v0"]).unwrap();
    let build = deligne(&c, &strat, &Perversity::ultra(2), false);

    // Deligne stalk at the singular point: truncated link cohomology.
    let stalk = build.sheaf.stalk_betti(v0);
    assert_eq!(dense(&stalk, 2), vec![1, 1, 0]);

    // Deligne costalk at the singular point vanishes through degree 2.
    let co = costalk(&c, &build.sheaf, v0, build.sheaf.carrier()).cohomology();
    for j in 0..=2 {
        assert_eq!(co.get(&j).copied().unwrap_or(0), 0, "costalk degree {j}");
    }

    // The constant sheaf's costalk is one dimension of H^2 at every
    // simplex (local cohomology of a closed surface).
    let constant = CellSheafComplex::constant(&c, Field::Q, 1);
    let ids = all_ids(&c);
    for id in c.ids() {
        let cc = costalk(&c, &constant, id, &ids).cohomology();
        assert_eq!(cc, BTreeMap::from([(2, 1)]), "constant costalk at {}", c.name_of(id));
    }
    println!("ACCEPTANCE 4 (stalk [1,1,0] and vanishing costalk at the point; constant costalk H2=1): PASS");
}

#[test]
fn acceptance_05_support_axioms_agree_but_cosupport_separates() {
    let (c, strat) = point_sphere();
    let pers = Perversity::ultra(2);
    let coeffs = LocalSystem::identity(1);
    let build = deligne(&c, &strat, &pers, false);
    let constant = CellSheafComplex::constant(&c, Field::Q, 1);

    let run = |sheaf: &CellSheafComplex, id: SystemId| {
        AxiomContext::new(&c, sheaf).check(id, &strat, &[], &pers, &coeffs).unwrap()
    };

    assert!(run(&build.sheaf, SystemId::Ax2).pass);
    assert!(run(&constant, SystemId::Ax2).pass);
    assert!(run(&build.sheaf, SystemId::Ax2Prime).pass);

    let failed = run(&constant, SystemId::Ax2Prime);
    assert!(!failed.pass);
    let clause = failed.clause("2'c").unwrap();
    assert!(!clause.pass);
    let witness = clause.witness.as_ref().unwrap();
    assert_eq!(
        serde_json::to_string(witness).unwrap(),
        r#"{"simplex":"v0","degree":2,"observed":0,"bound":"-inf"}"#
    );
    println!("ACCEPTANCE 5 (AX2 passes for both sheaves; AX2' rejects the constant sheaf with the degree-2 witness at v0): PASS");
}

#[test]
fn acceptance_06_low_degrees_match_the_complement() {
    // Whenever the perversity dominates k-1 up to codimension m, the
    // intersection cohomology agrees with the ordinary cohomology of the
    // complement of the singular set in degrees below m.
    let sphere = sphere2();
    let ring = circle();
    let torus = torus7();
    let st = suspended_torus();

    let cases: Vec<(&str, &SimplicialComplex, Stratification, Perversity, usize)> = vec![
        (
            "sphere/point/ultra",
            &sphere,
            vertex_stratification(&sphere, &["v0"], 2),
            Perversity::ultra(2),
            2,
        ),
        (
            "sphere/point/[1,1]",
            &sphere,
            vertex_stratification(&sphere, &["v0"], 2),
            Perversity::new(vec![1, 1]).unwrap(),
            2,
        ),
        (
            "sphere/equator/[0,1]",
            &sphere,
            Stratification::default_for_sigma(&sphere, &equator_sigma(&sphere)).unwrap(),
            Perversity::new(vec![0, 1]).unwrap(),
            2,
        ),
        (
            "circle/point/[0]",
            &ring,
            vertex_stratification(&ring, &["v0"], 1),
            Perversity::ultra(1),
            1,
        ),
        (
            "torus/point/ultra",
            &torus,
            vertex_stratification(&torus, &["t0"], 2),
            Perversity::ultra(2),
            2,
        ),
        (
            "suspended torus/points/ultra",
            &st,
            vertex_stratification(&st, &["N", "S"], 3),
            Perversity::ultra(3),
            3,
        ),
    ];
    assert!(cases.len() >= 5);

    for (name, complex, strat, pers, m) in &cases {
        for k in 1..=*m {
            assert!(pers.at(k as i64) >= k as i64 - 1, "{name}: perversity too small at {k}");
        }
        let got = ih(complex, strat, pers);
        let want = complement_cohomology(complex, strat, Field::Q, None).unwrap();
        for j in 0..*m as i32 {
            assert_eq!(
                got.get(&j).copied().unwrap_or(0),
                want.get(&j).copied().unwrap_or(0),
                "{name}: degree {j}"
            );
        }
    }
    println!("ACCEPTANCE 6 (6 dominating perversities match the complement below codimension): PASS");
}

#[test]
fn acceptance_07_negative_perversities_give_zero() {
    let (sphere, point) = point_sphere();
    let st = suspended_torus();
    let st_points = vertex_stratification(&st, &["N", "S"], 3);

    let cases: Vec<(&SimplicialComplex, &Stratification, Perversity)> = vec![
        (&sphere, &point, Perversity::new(vec![-1, -1]).unwrap()),
        (&st, &st_points, Perversity::new(vec![-1, -1, 0]).unwrap()),
    ];
    for (complex, strat, pers) in cases {
        assert!(pers.at(2) < 0);
        assert!(!strat.singular_set(complex).is_empty());
        let got = ih(complex, strat, &pers);
        assert!(got.values().all(|&b| b == 0), "expected zero, got {got:?}");
    }
    println!("ACCEPTANCE 7 (negative perversity at codimension 2 kills everything): PASS");
}

#[test]
fn acceptance_08_stalks_and_betti_agree_across_stratifications() {
    let start = Instant::now();
    let st = suspended_torus();
    let pers = Perversity::new(vec![0, 1, 1]).unwrap();
    let north = st.id_by_names(&["N"]).unwrap();

    let mut strats = vec![vertex_stratification(&st, &["N", "S"], 3)];
    for (dn, ds) in [(3u32, 2u32), (2, 2)] {
        let mut depths = strats[0].depths().to_vec();
        depths[north] = dn;
        depths[st.id_by_names(&["S"]).unwrap()] = ds;
        strats.push(Stratification::from_depths(&st, depths));
    }
    assert!(strats.len() >= 3);

    let builds: Vec<DeligneBuild> =
        strats.iter().map(|s| deligne(&st, s, &pers, false)).collect();
    for (strat, build) in strats.iter().zip(&builds) {
        let betti = hypercohomology(&st, &build.sheaf, &all_ids(&st));
        assert_eq!(dense(&betti, 3), vec![1, 2, 0, 1]);
        // Identical stalks cell by cell, not just identical global answers.
        for id in st.ids() {
            assert_eq!(
                build.sheaf.stalk_betti(id),
                builds[0].sheaf.stalk_betti(id),
                "stalk at {} for {:?}",
                st.name_of(id),
                strat.present_depths()
            );
        }
    }

    // Cone-point stalk: the truncated torus link.
    assert_eq!(dense(&builds[0].sheaf.stalk_betti(north), 3), vec![1, 2, 0, 0]);

    // Reduction between stages is permitted and changes nothing observable.
    let reduced = deligne(&st, &strats[0], &pers, true);
    assert_eq!(dense(&hypercohomology(&st, &reduced.sheaf, &all_ids(&st)), 3), vec![1, 2, 0, 1]);

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 120, "took {elapsed:?}");
    println!("ACCEPTANCE 8 (three stratifications, identical stalks and [1,2,0,1] in {elapsed:?}): PASS");
}

#[test]
fn acceptance_09_equivalent_axiom_systems_agree_everywhere() {
    let sphere = sphere2();
    let ring = circle();
    let torus = torus7();
    let st = suspended_torus();

    let cases: Vec<(&SimplicialComplex, Stratification, Perversity)> = vec![
        (&sphere, vertex_stratification(&sphere, &["v0"], 2), Perversity::ultra(2)),
        (
            &sphere,
            Stratification::default_for_sigma(&sphere, &equator_sigma(&sphere)).unwrap(),
            Perversity::zero(2),
        ),
        (
            &sphere,
            Stratification::default_for_sigma(&sphere, &equator_sigma(&sphere)).unwrap(),
            Perversity::new(vec![0, 1]).unwrap(),
        ),
        (&ring, vertex_stratification(&ring, &["v0"], 1), Perversity::ultra(1)),
        (&torus, vertex_stratification(&torus, &["t0"], 2), Perversity::ultra(2)),
        (&st, vertex_stratification(&st, &["N", "S"], 3), Perversity::new(vec![0, 1, 1]).unwrap()),
        (&st, vertex_stratification(&st, &["N", "S"], 3), Perversity::ultra(3)),
    ];

    let quad = [SystemId::Ax1, SystemId::Ax1Prime, SystemId::Ax2Prime, SystemId::Ax3];
    let coeffs = LocalSystem::identity(1);
    let mut sheaves_checked = 0usize;
    for (complex, strat, pers) in &cases {
        let build = deligne(complex, strat, pers, false);
        let constant = CellSheafComplex::constant(complex, Field::Q, 1);
        for (label, sheaf) in [("deligne", &build.sheaf), ("constant", &constant)] {
            let ctx = AxiomContext::new(complex, sheaf);
            let verdicts: Vec<bool> = quad
                .iter()
                .map(|&id| ctx.check(id, strat, &[], pers, &coeffs).unwrap().pass)
                .collect();
            assert!(
                verdicts.windows(2).all(|w| w[0] == w[1]),
                "{label}: verdicts {verdicts:?} for {:?}",
                pers.values()
            );
            sheaves_checked += 1;
        }
    }
    assert_eq!(sheaves_checked, 14);
    println!("ACCEPTANCE 9 (AX1, AX1', AX2', AX3 agree on all 14 corpus sheaves): PASS");
}

#[test]
fn acceptance_10_infrastructure_invariants() {
    let (c, strat) = point_sphere();
    let pers = Perversity::ultra(2);
    let ids = all_ids(&c);

    // Functoriality and d^2 = 0 hold for the built sheaf.
    let build = deligne(&c, &strat, &pers, false);
    build.sheaf.validate(&c).unwrap();

    // The staged construction matches the one-step derived pushforward
    // stalk by stalk (the truncation cut is above the link cohomology).
    let push = full_pushforward(&c, Field::Q, None, &strat.open_union(&c, 1)).unwrap();
    push.validate(&c).unwrap();
    for id in c.ids() {
        assert_eq!(build.sheaf.stalk_betti(id), push.stalk_betti(id), "at {}", c.name_of(id));
    }

    // Euler characteristics satisfy the costalk triangle identity.
    let constant = CellSheafComplex::constant(&c, Field::Q, 1);
    for id in c.ids() {
        let co = chi(&costalk(&c, &constant, id, &ids).cohomology());
        let deleted: BTreeSet<SimplexId> =
            c.strict_star(id).into_iter().filter(|t| ids.contains(t)).collect();
        let sections = chi(&hypercohomology(&c, &constant, &deleted));
        let stalk = chi(&constant.stalk(id).cohomology());
        let sign = if c.dim_of(id) % 2 == 0 { -1 } else { 1 };
        assert_eq!(co, sign * (sections - stalk), "at {}", c.name_of(id));
    }

    // Constant-sheaf hypercohomology reproduces ordinary cohomology.
    assert_eq!(dense(&hypercohomology(&c, &constant, &ids), 2), vec![1, 0, 1]);
    let torus = torus7();
    let tconst = CellSheafComplex::constant(&torus, Field::Q, 1);
    assert_eq!(dense(&hypercohomology(&torus, &tconst, &all_ids(&torus)), 2), vec![1, 2, 1]);

    // Reduction is invisible to every observable checked above.
    let reduced = deligne(&c, &strat, &pers, true);
    reduced.sheaf.validate(&c).unwrap();
    for id in c.ids() {
        assert_eq!(reduced.sheaf.stalk_betti(id), build.sheaf.stalk_betti(id));
    }
    assert_eq!(
        hypercohomology(&c, &reduced.sheaf, &ids),
        hypercohomology(&c, &build.sheaf, &ids)
    );
    println!("ACCEPTANCE 10 (validation, pushforward match, Euler identity, nerve oracle, reduction): PASS");
}
