//! Command-line front end: load complexes, stratifications, and local
//! systems from JSON, compute intersection cohomology, compare
//! stratifications, run the axiom checkers, and reproduce the bundled
//! example suite.
//!
//! Exit codes: 0 success, 1 comparison mismatch (`compare` only), 2 invalid
//! input (the underlying error is printed verbatim on stderr).

use clap::{Args, Parser, Subcommand, ValueEnum};
use perverse::axioms::{AxiomContext, AxiomReport, SystemId};
use perverse::builtin;
use perverse::complex::{SimplicialComplex, Stratification};
use perverse::deligne::{
    build_deligne, intersection_cohomology, DeligneBuild, DeligneOptions, LocalSystem,
};
use perverse::io;
use perverse::linalg::Field;
use perverse::perversity::Perversity;
use perverse::sheaf::CellSheafComplex;
use serde_json::json;
use std::collections::BTreeMap;
use std::error::Error;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "perverse",
    version,
    about = "Intersection cohomology of stratified simplicial complexes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate inputs and summarize the complex and the Deligne sheaf.
    Check(CheckArgs),
    /// Compute intersection cohomology Betti numbers.
    Ih(IhArgs),
    /// Compare intersection cohomology across stratifications with the
    /// same singular set.
    Compare(CompareArgs),
    /// Run axiom-system checkers on the freshly built Deligne sheaf.
    Axioms(AxiomsArgs),
    /// Run the bundled example suite and compare with expected values.
    PaperExamples(PaperExamplesArgs),
}

#[derive(Args)]
struct CommonOpts {
    /// Coefficient field: Q, F<p>, or Fp:<p>.
    #[arg(long, default_value = "Q", value_parser = parse_field)]
    field: Field,
    /// Perversity: a preset (zero, top, ultra) or a JSON array of values
    /// indexed by codimension 1..=n.
    #[arg(long, default_value = "zero")]
    perversity: String,
    /// Insert a quasi-isomorphic reduction pass between Deligne stages.
    #[arg(long)]
    reduce: bool,
    /// Keep per-stage sheaf snapshots (off by default).
    #[arg(long)]
    retain_stages: bool,
    /// Local system file for twisted coefficients on the top stratum.
    #[arg(long)]
    local_system: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Output::Json)]
    output: Output,
}

#[derive(Args)]
struct CheckArgs {
    /// Complex file.
    complex: PathBuf,
    /// Stratification file (trivial when omitted).
    #[arg(long)]
    strat: Option<PathBuf>,
    #[command(flatten)]
    common: CommonOpts,
}

#[derive(Args)]
struct IhArgs {
    /// Complex file.
    complex: PathBuf,
    /// Stratification file (trivial when omitted).
    #[arg(long)]
    strat: Option<PathBuf>,
    #[command(flatten)]
    common: CommonOpts,
}

#[derive(Args)]
struct CompareArgs {
    /// Complex file.
    complex: PathBuf,
    /// Singular locus file every stratification must realize.
    #[arg(long)]
    sigma: PathBuf,
    /// Stratification files to compare (at least one).
    #[arg(long = "strat", required = true)]
    strats: Vec<PathBuf>,
    #[command(flatten)]
    common: CommonOpts,
}

#[derive(Args)]
struct AxiomsArgs {
    /// Complex file.
    complex: PathBuf,
    /// Stratification file (trivial when omitted).
    #[arg(long)]
    strat: Option<PathBuf>,
    /// Axiom systems to run (default: all of AX1 AX1' AX1''c AX2 AX2'
    /// AX2'' AX3 AX3'').
    #[arg(long = "system")]
    systems: Vec<String>,
    /// Additional candidate stratification files for the existential
    /// systems (the given stratification is always a candidate).
    #[arg(long = "candidate")]
    candidates: Vec<PathBuf>,
    /// Also run the checkers on the constant sheaf with the same
    /// coefficients.
    #[arg(long)]
    against_constant: bool,
    #[command(flatten)]
    common: CommonOpts,
}

#[derive(Args)]
struct PaperExamplesArgs {
    #[command(flatten)]
    common: CommonOpts,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Md,
}

fn parse_field(s: &str) -> Result<Field, String> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("q") {
        return Ok(Field::Q);
    }
    let rest = t
        .strip_prefix("Fp:")
        .or_else(|| t.strip_prefix("fp:"))
        .or_else(|| t.strip_prefix('F'))
        .or_else(|| t.strip_prefix('f'));
    if let Some(num) = rest {
        let p: u64 = num
            .parse()
            .map_err(|_| format!("invalid field `{s}` (expected Q, F<p>, or Fp:<p>)"))?;
        return Field::prime(p).map_err(|e| e.to_string());
    }
    Err(format!("invalid field `{s}` (expected Q, F<p>, or Fp:<p>)"))
}

fn field_label(field: Field) -> String {
    match field {
        Field::Q => "Q".to_string(),
        Field::Fp(p) => format!("F{p}"),
    }
}

fn parse_perversity(spec: &str, n: usize) -> Result<Perversity, Box<dyn Error>> {
    let t = spec.trim();
    if t.starts_with('[') {
        let values: Vec<i64> = serde_json::from_str(t)?;
        Ok(Perversity::new(values)?)
    } else {
        Ok(Perversity::preset(t, n)?)
    }
}

fn load_stratification(
    path: Option<&Path>,
    complex: &SimplicialComplex,
) -> Result<Stratification, Box<dyn Error>> {
    let strat = match path {
        Some(p) => io::read_stratification(p, complex)?,
        None => Stratification::trivial(complex),
    };
    strat.validate(complex)?;
    Ok(strat)
}

fn load_local_system(
    path: Option<&Path>,
    complex: &SimplicialComplex,
    field: Field,
) -> Result<Option<LocalSystem>, Box<dyn Error>> {
    match path {
        None => Ok(None),
        Some(p) => {
            let file = io::read_local_system_file(p)?;
            Ok(Some(LocalSystem::from_file(&file, complex, field)?))
        }
    }
}

fn build(
    complex: &SimplicialComplex,
    strat: &Stratification,
    pers: &Perversity,
    common: &CommonOpts,
    system: Option<&LocalSystem>,
) -> Result<DeligneBuild, Box<dyn Error>> {
    let opts = DeligneOptions { reduce: common.reduce, retain_stages: common.retain_stages };
    Ok(build_deligne(complex, strat, pers, common.field, system, opts)?)
}

/// Betti numbers as a dense vector over degrees `0..=n` (extended upward if
/// anything lives above `n`).
fn dense_betti(map: &BTreeMap<i32, usize>, n: usize) -> Vec<usize> {
    let hi = map.keys().next_back().map_or(0, |&d| d.max(0)).max(n as i32);
    (0..=hi).map(|d| map.get(&d).copied().unwrap_or(0)).collect()
}

fn emit(output: Output, value: &serde_json::Value, md: String) {
    match output {
        Output::Json => println!("{value}"),
        Output::Md => print!("{md}"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check(args) => cmd_check(args),
        Command::Ih(args) => cmd_ih(args),
        Command::Compare(args) => cmd_compare(args),
        Command::Axioms(args) => cmd_axioms(args),
        Command::PaperExamples(args) => cmd_paper_examples(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(2)
        }
    }
}

// ---------------------------------------------------------------------------
// check
// ---------------------------------------------------------------------------

fn cmd_check(args: CheckArgs) -> Result<u8, Box<dyn Error>> {
    let complex = io::read_complex(&args.complex)?;
    let strat = load_stratification(args.strat.as_deref(), &complex)?;
    let pers = parse_perversity(&args.common.perversity, complex.dim())?;
    let system = load_local_system(args.common.local_system.as_deref(), &complex, args.common.field)?;
    let build = build(&complex, &strat, &pers, &args.common, system.as_ref())?;

    let depths: BTreeMap<String, usize> = strat
        .present_depths()
        .into_iter()
        .map(|k| (k.to_string(), strat.stratum(&complex, k).len()))
        .collect();
    let stages: Vec<serde_json::Value> = build
        .stages
        .iter()
        .map(|s| {
            let mut row = json!({
                "codim": s.codim,
                "truncation": s.truncation,
                "skipped": s.skipped,
                "carrier_size": s.carrier_size,
                "total_dim": s.total_dim,
            });
            if let Some(sheaf) = &s.sheaf {
                row["sheaf"] = sheaf.debug_summary(&complex);
            }
            row
        })
        .collect();
    let value = json!({
        "command": "check",
        "complex": {
            "dimension": complex.dim(),
            "simplices": complex.len(),
            "vertices": complex.vertex_names().len(),
        },
        "stratification": {
            "singular_simplices": strat.singular_set(&complex).len(),
            "stratum_sizes_by_depth": depths,
        },
        "field": field_label(args.common.field),
        "perversity": pers.values(),
        "deligne": {
            "stages": stages,
            "carrier_size": build.sheaf.carrier().len(),
            "total_dim": build.sheaf.total_size(),
        },
    });

    let mut md = String::new();
    let _ = writeln!(md, "# Check\n");
    let _ = writeln!(
        md,
        "- complex: dimension {}, {} simplices",
        complex.dim(),
        complex.len()
    );
    let _ = writeln!(
        md,
        "- stratification: {} singular simplices, strata {:?}",
        strat.singular_set(&complex).len(),
        depths
    );
    let _ = writeln!(md, "- field: {}", field_label(args.common.field));
    let _ = writeln!(md, "- perversity: {:?}", pers.values());
    let _ = writeln!(
        md,
        "- Deligne sheaf: carrier {}, total dimension {}",
        build.sheaf.carrier().len(),
        build.sheaf.total_size()
    );
    emit(args.common.output, &value, md);
    Ok(0)
}

// ---------------------------------------------------------------------------
// ih
// ---------------------------------------------------------------------------

fn cmd_ih(args: IhArgs) -> Result<u8, Box<dyn Error>> {
    let complex = io::read_complex(&args.complex)?;
    let strat = load_stratification(args.strat.as_deref(), &complex)?;
    let pers = parse_perversity(&args.common.perversity, complex.dim())?;
    let system = load_local_system(args.common.local_system.as_deref(), &complex, args.common.field)?;
    let ih = intersection_cohomology(
        &complex,
        &strat,
        &pers,
        args.common.field,
        system.as_ref(),
        args.common.reduce,
    )?;
    let betti = dense_betti(&ih, complex.dim());
    let value = json!({
        "command": "ih",
        "field": field_label(args.common.field),
        "perversity": pers.values(),
        "betti": betti,
    });
    let mut md = String::new();
    let _ = writeln!(md, "# Intersection cohomology\n");
    let _ = writeln!(md, "| degree | betti |");
    let _ = writeln!(md, "|---|---|");
    for (d, b) in betti.iter().enumerate() {
        let _ = writeln!(md, "| {d} | {b} |");
    }
    emit(args.common.output, &value, md);
    Ok(0)
}

// ---------------------------------------------------------------------------
// compare
// ---------------------------------------------------------------------------

fn cmd_compare(args: CompareArgs) -> Result<u8, Box<dyn Error>> {
    let complex = io::read_complex(&args.complex)?;
    let sigma = io::read_sigma(&args.sigma, &complex)?;
    let pers = parse_perversity(&args.common.perversity, complex.dim())?;
    let system = load_local_system(args.common.local_system.as_deref(), &complex, args.common.field)?;

    let mut strats = Vec::new();
    for path in &args.strats {
        let strat = io::read_stratification(path, &complex)?;
        strat.validate(&complex)?;
        if !strat.is_subject_to(&complex, &sigma) {
            return Err(format!(
                "stratification `{}` is not subject to the given singular set",
                path.display()
            )
            .into());
        }
        strats.push((path, strat));
    }

    let mut runs = Vec::new();
    for (path, strat) in &strats {
        let ih = intersection_cohomology(
            &complex,
            strat,
            &pers,
            args.common.field,
            system.as_ref(),
            args.common.reduce,
        )?;
        runs.push((path, dense_betti(&ih, complex.dim())));
    }

    let width = runs.iter().map(|(_, b)| b.len()).max().unwrap_or(0);
    let padded: Vec<Vec<usize>> = runs
        .iter()
        .map(|(_, b)| {
            let mut v = b.clone();
            v.resize(width, 0);
            v
        })
        .collect();
    let first_diff = (0..width).find(|&d| padded.iter().any(|b| b[d] != padded[0][d]));

    let value = json!({
        "command": "compare",
        "field": field_label(args.common.field),
        "perversity": pers.values(),
        "runs": runs
            .iter()
            .map(|(path, betti)| json!({
                "stratification": path.display().to_string(),
                "betti": betti,
            }))
            .collect::<Vec<_>>(),
        "equal": first_diff.is_none(),
        "first_differing_degree": first_diff,
    });
    let mut md = String::new();
    let _ = writeln!(md, "# Stratification comparison\n");
    let _ = writeln!(md, "| stratification | betti |");
    let _ = writeln!(md, "|---|---|");
    for (path, betti) in &runs {
        let _ = writeln!(md, "| {} | {:?} |", path.display(), betti);
    }
    let _ = match first_diff {
        None => writeln!(md, "\nAll runs agree."),
        Some(d) => writeln!(md, "\nRuns differ; first differing degree: {d}."),
    };
    emit(args.common.output, &value, md);
    Ok(if first_diff.is_none() { 0 } else { 1 })
}

// ---------------------------------------------------------------------------
// axioms
// ---------------------------------------------------------------------------

fn parse_systems(specs: &[String]) -> Result<Vec<SystemId>, Box<dyn Error>> {
    if specs.is_empty() {
        return Ok(SystemId::ALL.to_vec());
    }
    specs
        .iter()
        .map(|s| {
            SystemId::parse(s).ok_or_else(|| format!("unknown axiom system `{s}`").into())
        })
        .collect()
}

fn run_systems(
    complex: &SimplicialComplex,
    sheaf: &CellSheafComplex,
    systems: &[SystemId],
    strat: &Stratification,
    candidates: &[Stratification],
    pers: &Perversity,
    system: &LocalSystem,
) -> Result<Vec<AxiomReport>, Box<dyn Error>> {
    let ctx = AxiomContext::new(complex, sheaf);
    let mut out = Vec::new();
    for &id in systems {
        out.push(ctx.check(id, strat, candidates, pers, system)?);
    }
    Ok(out)
}

fn reports_md(md: &mut String, label: &str, reports: &[AxiomReport]) {
    let _ = writeln!(md, "## {label}\n");
    for rep in reports {
        let verdict = if rep.pass { "pass" } else { "FAIL" };
        let _ = writeln!(md, "- **{}**: {}", rep.system, verdict);
        for clause in &rep.clauses {
            let cv = if clause.pass { "pass" } else { "FAIL" };
            match &clause.witness {
                Some(w) => {
                    let _ = writeln!(
                        md,
                        "  - {}: {cv} (witness `{}` degree {}: observed {}, bound {})",
                        clause.id, w.simplex, w.degree, w.observed, w.bound
                    );
                }
                None => {
                    let _ = writeln!(md, "  - {}: {cv}", clause.id);
                }
            }
        }
    }
    let _ = writeln!(md);
}

fn cmd_axioms(args: AxiomsArgs) -> Result<u8, Box<dyn Error>> {
    let complex = io::read_complex(&args.complex)?;
    let strat = load_stratification(args.strat.as_deref(), &complex)?;
    let pers = parse_perversity(&args.common.perversity, complex.dim())?;
    let system = load_local_system(args.common.local_system.as_deref(), &complex, args.common.field)?;
    let systems = parse_systems(&args.systems)?;

    let mut candidates = vec![strat.clone()];
    for path in &args.candidates {
        let cand = io::read_stratification(path, &complex)?;
        cand.validate(&complex)?;
        candidates.push(cand);
    }

    let coeffs = match &system {
        Some(s) => s.clone(),
        None => LocalSystem::identity(1),
    };
    let deligne = build(&complex, &strat, &pers, &args.common, system.as_ref())?;
    let mut sheaves = vec![(
        "deligne".to_string(),
        run_systems(&complex, &deligne.sheaf, &systems, &strat, &candidates, &pers, &coeffs)?,
    )];
    if args.against_constant {
        let constant = CellSheafComplex::constant(&complex, args.common.field, coeffs.rank);
        sheaves.push((
            "constant".to_string(),
            run_systems(&complex, &constant, &systems, &strat, &candidates, &pers, &coeffs)?,
        ));
    }

    let value = json!({
        "command": "axioms",
        "field": field_label(args.common.field),
        "perversity": pers.values(),
        "sheaves": sheaves
            .iter()
            .map(|(name, reports)| json!({ "sheaf": name, "reports": reports }))
            .collect::<Vec<_>>(),
    });
    let mut md = String::new();
    let _ = writeln!(md, "# Axiom reports\n");
    for (name, reports) in &sheaves {
        reports_md(&mut md, name, reports);
    }
    emit(args.common.output, &value, md);
    Ok(0)
}

// ---------------------------------------------------------------------------
// paper-examples
// ---------------------------------------------------------------------------

struct ExampleRow {
    name: &'static str,
    expected: serde_json::Value,
    computed: serde_json::Value,
}

fn ih_row(
    name: &'static str,
    complex: &SimplicialComplex,
    strat: &Stratification,
    pers: &Perversity,
    common: &CommonOpts,
    expected: &[usize],
) -> Result<ExampleRow, Box<dyn Error>> {
    let ih = intersection_cohomology(complex, strat, pers, common.field, None, common.reduce)?;
    Ok(ExampleRow {
        name,
        expected: json!(expected),
        computed: json!(dense_betti(&ih, complex.dim())),
    })
}

fn cmd_paper_examples(args: PaperExamplesArgs) -> Result<u8, Box<dyn Error>> {
    let common = &args.common;
    let sphere = builtin::sphere2();
    let ring = builtin::circle();
    let torus = builtin::torus7();
    let st = builtin::suspended_torus();

    let trivial = Stratification::trivial(&sphere);
    let point = builtin::vertex_stratification(&sphere, &["v0"], 2);
    let equator =
        Stratification::default_for_sigma(&sphere, &builtin::equator_sigma(&sphere)).unwrap();
    let ring_point = builtin::vertex_stratification(&ring, &["v0"], 1);
    let torus_point = builtin::vertex_stratification(&torus, &["t0"], 2);
    let st_points = builtin::vertex_stratification(&st, &["N", "S"], 3);

    let mut rows = vec![
        ih_row("sphere, unstratified, zero", &sphere, &trivial, &Perversity::zero(2), common, &[1, 0, 1])?,
        ih_row("sphere, unstratified, top", &sphere, &trivial, &Perversity::top(2), common, &[1, 0, 1])?,
        ih_row("sphere, unstratified, ultra", &sphere, &trivial, &Perversity::ultra(2), common, &[1, 0, 1])?,
        ih_row("sphere with a point stratum, zero", &sphere, &point, &Perversity::zero(2), common, &[1, 0, 1])?,
        ih_row("sphere with a point stratum, ultra", &sphere, &point, &Perversity::ultra(2), common, &[1, 0, 0])?,
        ih_row("sphere cut along the equator, zero", &sphere, &equator, &Perversity::zero(2), common, &[2, 0, 0])?,
        ih_row(
            "sphere cut along the equator, [0,1]",
            &sphere,
            &equator,
            &Perversity::new(vec![0, 1]).unwrap(),
            common,
            &[2, 0, 0],
        )?,
        ih_row(
            "sphere with a point stratum, negative perversity",
            &sphere,
            &point,
            &Perversity::with_lower(vec![-1, -1], perverse::perversity::LowerExtension::Slope1)
                .unwrap(),
            common,
            &[0, 0, 0],
        )?,
        ih_row("circle with a point stratum, [0]", &ring, &ring_point, &Perversity::ultra(1), common, &[1, 0])?,
        ih_row("torus with a point stratum, ultra", &torus, &torus_point, &Perversity::ultra(2), common, &[1, 2, 0])?,
        ih_row(
            "suspended torus, [0,1,1]",
            &st,
            &st_points,
            &Perversity::new(vec![0, 1, 1]).unwrap(),
            common,
            &[1, 2, 0, 1],
        )?,
        ih_row("suspended torus, ultra", &st, &st_points, &Perversity::ultra(3), common, &[1, 2, 1, 0])?,
    ];

    // The separation exhibit: on the sphere with the maximal
    // superperversity, the Deligne sheaf and the constant sheaf both pass
    // AX2 but only the Deligne sheaf passes AX2'.
    let p = Perversity::ultra(2);
    let sys = LocalSystem::identity(1);
    let opts = DeligneOptions { reduce: common.reduce, retain_stages: false };
    let deligne = build_deligne(&sphere, &point, &p, common.field, None, opts)?;
    let constant = CellSheafComplex::constant(&sphere, common.field, 1);
    let verdicts = |sheaf: &CellSheafComplex| -> Result<serde_json::Value, Box<dyn Error>> {
        let ctx = AxiomContext::new(&sphere, sheaf);
        let ax2 = ctx.check(SystemId::Ax2, &point, &[], &p, &sys)?.pass;
        let ax2p = ctx.check(SystemId::Ax2Prime, &point, &[], &p, &sys)?.pass;
        Ok(json!({ "AX2": ax2, "AX2'": ax2p }))
    };
    rows.push(ExampleRow {
        name: "axiom separation on the superperverse sphere (Deligne)",
        expected: json!({ "AX2": true, "AX2'": true }),
        computed: verdicts(&deligne.sheaf)?,
    });
    rows.push(ExampleRow {
        name: "axiom separation on the superperverse sphere (constant)",
        expected: json!({ "AX2": true, "AX2'": false }),
        computed: verdicts(&constant)?,
    });

    let all_match = rows.iter().all(|r| r.expected == r.computed);
    let value = json!({
        "command": "paper-examples",
        "field": field_label(common.field),
        "rows": rows
            .iter()
            .map(|r| json!({
                "name": r.name,
                "expected": r.expected,
                "computed": r.computed,
                "match": r.expected == r.computed,
            }))
            .collect::<Vec<_>>(),
        "all_match": all_match,
    });
    let mut md = String::new();
    let _ = writeln!(md, "# Example suite\n");
    let _ = writeln!(md, "| example | expected | computed | ok |");
    let _ = writeln!(md, "|---|---|---|---|");
    for r in &rows {
        let _ = writeln!(
            md,
            "| {} | {} | {} | {} |",
            r.name,
            r.expected,
            r.computed,
            if r.expected == r.computed { "yes" } else { "NO" }
        );
    }
    emit(common.output, &value, md);
    Ok(if all_match { 0 } else { 1 })
}
