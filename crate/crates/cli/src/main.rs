//! `heffter`: build, verify, search and embed from the command line.
//!
//! Exit codes: 0 ok, 1 mathematical violation or unsatisfiable search,
//! 2 usage, parse or I/O error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use heffter::constructions::{
    build_archdeacon_composite, build_b, build_h7, build_h9, build_h_2n_3, build_h_n_3, build_skeleton_cor39,
};
use heffter::heffter::{verify_archdeacon, verify_integer, verify_relative_heffter};
use heffter::knight::{
    knight_search_lift_shape, knight_search_with, knight_tour, lemma_4_10_orientation, lemma_4_10_skeleton,
    lift_solution, orientation_to_orderings, LiftSpec,
};
use heffter::orderings::is_globally_simple;
use heffter::pfarray::diagonal_skeleton;
use heffter::topology::{
    base_cycles, build_rho0, develop_and_verify, trace_faces, two_color_check, verify_orthogonal, CayleyGraph,
};
use heffter::{Error, GroupSpec, HeffterParams, Orientation, PFArray, SearchOptions, VerificationReport};

#[derive(Parser)]
#[command(
    name = "heffter",
    version,
    about = "Relative Heffter arrays, Archdeacon arrays and their biembeddings"
)]
struct Cli {
    /// Worker threads for searches.
    #[arg(long, global = true, env = "HEFFTER_JOBS")]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an array from one of the direct constructions.
    Construct(ConstructArgs),
    /// Check an array file.
    Verify(VerifyArgs),
    /// Crazy Knight's Tour on an array or skeleton.
    Knight(KnightArgs),
    /// Trace the biembedding induced by a solving orientation.
    Embed(EmbedArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    #[value(name = "h-n-3")]
    HN3,
    #[value(name = "h-2n-3")]
    H2N3,
    H7,
    H9,
    B,
    ArchdeaconComposite,
    SkeletonCor39,
    DiagonalSkeleton,
    Lemma410Skeleton,
}

#[derive(Args)]
struct ConstructArgs {
    family: Family,
    #[arg(long)]
    n: usize,
    /// Diagonal count for skeleton-cor39.
    #[arg(long)]
    k: Option<usize>,
    /// Second group order for B and archdeacon-composite.
    #[arg(long)]
    d: Option<u64>,
    /// Rows of B (defaults to n).
    #[arg(long)]
    m: Option<usize>,
    /// Cells of B as i1,i2,j1,j2.
    #[arg(long, value_delimiter = ',', default_value = "1,2,1,2")]
    cells: Vec<usize>,
    /// Base family for archdeacon-composite.
    #[arg(long, default_value = "h-n-3")]
    base: Family,
    /// Filled diagonals for diagonal-skeleton.
    #[arg(long, value_delimiter = ',')]
    diagonals: Vec<usize>,
    /// Write PREFIX.json and PREFIX.csv; without it the CSV goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Input {
    /// Array file, `.json` or `.csv`.
    path: PathBuf,
    /// Group orders for CSV input, e.g. `51,3`.
    #[arg(long, value_delimiter = ',')]
    group: Vec<u64>,
    /// Subgroup order; for CSV input without --group the group is Z_{2nk+t}.
    #[arg(long)]
    t: Option<u64>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: Input,
    /// Also require integer zero sums (needs --t).
    #[arg(long)]
    integer: bool,
    #[arg(long)]
    archdeacon: bool,
    #[arg(long)]
    globally_simple: bool,
}

#[derive(Args)]
struct KnightArgs {
    #[command(flatten)]
    input: Input,
    /// Exhaustive search for the least solution with r_1 = +1.
    #[arg(long)]
    search: bool,
    /// Orientation as ROWS/COLS, e.g. `+++/-++`.
    #[arg(long)]
    orientation: Option<String>,
    /// Use the closed-form 9-diagonal orientation.
    #[arg(long)]
    lemma410: bool,
    /// Lift along these diagonal indices; without --orientation a solution
    /// of the lifting shape is searched first.
    #[arg(long, value_delimiter = ',')]
    lift: Vec<usize>,
    /// Skip the skeleton parity pre-filter.
    #[arg(long)]
    no_parity_filter: bool,
    /// Include the orbit as a list of cells.
    #[arg(long)]
    orbit: bool,
}

#[derive(Args)]
struct EmbedArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, conflicts_with = "search")]
    orientation: Option<String>,
    /// Search for an orientation first.
    #[arg(long)]
    search: bool,
    /// Include every face in the output.
    #[arg(long)]
    faces: bool,
    /// Write the row and column decompositions as edge lists to PREFIX.rows.txt and PREFIX.cols.txt.
    #[arg(long)]
    edges: Option<PathBuf>,
}

struct Outcome {
    ok: bool,
    unsat: bool,
    report: Value,
    artifacts: Vec<String>,
}

impl Outcome {
    fn print(&self) {
        let out = json!({
            "status": match (self.ok, self.unsat) {
                (true, _) => "ok",
                (false, true) => "unsat",
                (false, false) => "violation",
            },
            "report": self.report,
            "artifacts": self.artifacts,
        });
        println!("{}", serde_json::to_string_pretty(&out).expect("json values serialize"));
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Construct(a) => construct(a),
        Command::Verify(a) => verify(a),
        Command::Knight(a) => knight(a, cli.jobs),
        Command::Embed(a) => embed(a, cli.jobs),
    };
    match result {
        Ok(Some(o)) => {
            o.print();
            ExitCode::from(if o.ok { 0 } else { 1 })
        }
        Ok(None) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn build(family: Family, a: &ConstructArgs) -> anyhow::Result<PFArray> {
    let n = a.n;
    let need = |x: Option<u64>, name: &str| x.ok_or_else(|| anyhow!("--{name} is required for this family"));
    Ok(match family {
        Family::HN3 => build_h_n_3(n)?,
        Family::H2N3 => build_h_2n_3(n)?,
        Family::H7 => build_h7(n)?,
        Family::H9 => build_h9(n)?,
        Family::B => {
            let [i1, i2, j1, j2] = a.cells[..] else {
                bail!("--cells takes exactly four indices");
            };
            build_b(a.m.unwrap_or(n), n, need(a.d, "d")?, i1, i2, j1, j2)?
        }
        Family::ArchdeaconComposite => {
            if matches!(a.base, Family::ArchdeaconComposite) {
                bail!("composite base must be a Heffter family");
            }
            build_archdeacon_composite(&build(a.base, a)?, need(a.d, "d")?)?
        }
        Family::SkeletonCor39 => build_skeleton_cor39(n, a.k.ok_or_else(|| anyhow!("--k is required"))?)?,
        Family::DiagonalSkeleton => diagonal_skeleton(n, &a.diagonals)?,
        Family::Lemma410Skeleton => lemma_4_10_skeleton(n)?,
    })
}

fn heffter_t(family: Family, n: usize) -> Option<(usize, u64)> {
    match family {
        Family::HN3 => Some((3, n as u64)),
        Family::H2N3 => Some((3, 2 * n as u64)),
        Family::H7 => Some((7, 7)),
        Family::H9 => Some((9, 9)),
        _ => None,
    }
}

fn construct(a: ConstructArgs) -> anyhow::Result<Option<Outcome>> {
    let arr = build(a.family, &a)?;
    let mut report = serde_json::Map::new();
    let mut ok = true;
    if let Some((k, t)) = heffter_t(a.family, a.n) {
        let r = verify_integer(&arr, &HeffterParams::square(a.n, k, t)?)?;
        ok &= r.valid;
        report.insert("integer".into(), serde_json::to_value(&r)?);
    }
    if matches!(a.family, Family::ArchdeaconComposite) {
        let r = verify_archdeacon(&arr);
        ok &= r.valid;
        report.insert("archdeacon".into(), serde_json::to_value(&r)?);
    }
    if !arr.spec().orders().iter().all(|&o| o == 1) && !matches!(a.family, Family::B) {
        let gs = is_globally_simple(&arr);
        report.insert("globally_simple".into(), json!(gs));
        if matches!(a.family, Family::H7 | Family::H9 | Family::ArchdeaconComposite) {
            ok &= gs;
        }
    }
    report.insert("rows".into(), json!(arr.rows()));
    report.insert("cols".into(), json!(arr.cols()));
    report.insert("group".into(), json!(arr.spec().orders()));
    report.insert("filled".into(), json!(arr.len()));
    let Some(prefix) = a.out else {
        print!("{}", arr.to_csv());
        eprintln!("{}", serde_json::to_string(&Value::Object(report))?);
        return Ok(None);
    };
    let json_path = with_suffix(&prefix, "json");
    let csv_path = with_suffix(&prefix, "csv");
    fs::write(&json_path, arr.to_json()).with_context(|| format!("writing {}", json_path.display()))?;
    fs::write(&csv_path, arr.to_csv()).with_context(|| format!("writing {}", csv_path.display()))?;
    Ok(Some(Outcome {
        unsat: false,
        ok,
        report: Value::Object(report),
        artifacts: vec![json_path.display().to_string(), csv_path.display().to_string()],
    }))
}

fn with_suffix(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn load(input: &Input) -> anyhow::Result<PFArray> {
    let text = fs::read_to_string(&input.path).with_context(|| format!("reading {}", input.path.display()))?;
    let is_json = input.path.extension().is_some_and(|e| e == "json");
    let arr = if is_json {
        PFArray::from_json(&text)?
    } else if !input.group.is_empty() {
        PFArray::from_csv(&text, &GroupSpec::new(input.group.clone())?)?
    } else if let Some(t) = input.t {
        // a first pass over the trivial group recovers the shape
        let shape = PFArray::from_csv(&text, &GroupSpec::trivial())?;
        let k = shape.col_cells(1).len();
        let v = 2 * (shape.cols() * k) as u64 + t;
        PFArray::from_csv(&text, &GroupSpec::cyclic(v)?)?
    } else {
        bail!("CSV input needs --group or --t");
    };
    if !input.group.is_empty() && arr.spec().orders() != input.group.as_slice() {
        bail!(
            "file group {:?} differs from --group {:?}",
            arr.spec().orders(),
            input.group
        );
    }
    Ok(arr)
}

fn params_for(arr: &PFArray, t: u64) -> anyhow::Result<HeffterParams> {
    let s = arr.row_cells(1).len();
    let k = arr.col_cells(1).len();
    Ok(HeffterParams::new(arr.rows(), arr.cols(), s, k, t)?)
}

fn verify(a: VerifyArgs) -> anyhow::Result<Option<Outcome>> {
    let arr = load(&a.input)?;
    let mut report = serde_json::Map::new();
    let mut ok = true;
    let mut record = |name: &str, r: VerificationReport| -> anyhow::Result<()> {
        ok &= r.valid;
        report.insert(name.into(), serde_json::to_value(&r)?);
        Ok(())
    };
    if let Some(t) = a.input.t {
        let p = params_for(&arr, t)?;
        if a.integer {
            record("integer", verify_integer(&arr, &p)?)?;
        } else {
            record("relative_heffter", verify_relative_heffter(&arr, &p)?)?;
        }
    } else if a.integer {
        bail!("--integer needs --t");
    }
    if a.archdeacon || (a.input.t.is_none() && !a.globally_simple) {
        record("archdeacon", verify_archdeacon(&arr))?;
    }
    if a.globally_simple {
        let gs = is_globally_simple(&arr);
        ok &= gs;
        report.insert("globally_simple".into(), json!(gs));
    }
    Ok(Some(Outcome {
        unsat: false,
        ok,
        report: Value::Object(report),
        artifacts: vec![],
    }))
}

fn search_options(jobs: Option<usize>, no_filter: bool) -> SearchOptions {
    SearchOptions {
        parity_filter: !no_filter,
        jobs,
    }
}

fn knight(a: KnightArgs, jobs: Option<usize>) -> anyhow::Result<Option<Outcome>> {
    let arr = load(&a.input)?;
    let modes = [
        a.search,
        a.orientation.is_some() && a.lift.is_empty(),
        a.lemma410,
        !a.lift.is_empty(),
    ];
    if modes.iter().filter(|m| **m).count() != 1 {
        bail!("choose exactly one of --search, --orientation, --lemma410, --lift");
    }
    let opts = search_options(jobs, a.no_parity_filter);
    if !a.lift.is_empty() {
        return lift(&arr, &a, opts);
    }
    let orientation = if a.search {
        knight_search_with(&arr, opts)?
    } else if a.lemma410 {
        Some(lemma_4_10_orientation(arr.cols())?)
    } else {
        Some(a.orientation.as_deref().unwrap_or_default().parse::<Orientation>()?)
    };
    let Some(o) = orientation else {
        return Ok(Some(Outcome {
            ok: false,
            unsat: true,
            report: json!({ "solution": Value::Null, "filled": arr.len() }),
            artifacts: vec![],
        }));
    };
    let start = *arr
        .skeleton()
        .first()
        .ok_or_else(|| anyhow!("array has no filled cells"))?;
    let tour = knight_tour(&arr, &o, start)?;
    let mut report = json!({
        "orientation": o,
        "orbit_length": tour.orbit.len(),
        "filled": arr.len(),
        "is_solution": tour.is_solution,
    });
    if a.orbit {
        report["orbit"] = serde_json::to_value(&tour.orbit)?;
    }
    Ok(Some(Outcome {
        unsat: false,
        ok: tour.is_solution,
        report,
        artifacts: vec![],
    }))
}

fn lift(arr: &PFArray, a: &KnightArgs, opts: SearchOptions) -> anyhow::Result<Option<Outcome>> {
    let spec = LiftSpec::new(a.lift.clone())?;
    let n = arr.cols();
    if arr.skeleton() != spec.skeleton(n)?.skeleton() {
        bail!("input skeleton is not the diagonal array A_{n}{:?}", a.lift);
    }
    let base = match &a.orientation {
        Some(s) => s.parse::<Orientation>()?,
        None => match knight_search_lift_shape(arr, spec.prefix_len(n), opts)? {
            Some(o) => o,
            None => {
                return Ok(Some(Outcome {
                    ok: false,
                    unsat: true,
                    report: json!({ "solution": Value::Null, "m": spec.m }),
                    artifacts: vec![],
                }))
            }
        },
    };
    let lifted = lift_solution(&spec, n, &base)?;
    Ok(Some(Outcome {
        unsat: false,
        ok: true,
        report: json!({
            "m": spec.m,
            "input": base,
            "lifted_size": n + spec.m,
            "lifted": lifted,
            "verified": true,
        }),
        artifacts: vec![],
    }))
}

fn embed(a: EmbedArgs, jobs: Option<usize>) -> anyhow::Result<Option<Outcome>> {
    let arr = load(&a.input)?;
    let o = match (&a.orientation, a.search) {
        (Some(s), false) => s.parse::<Orientation>()?,
        (None, true) => match knight_search_with(&arr.to_skeleton(), search_options(jobs, false))? {
            Some(o) => o,
            None => {
                return Ok(Some(Outcome {
                    ok: false,
                    unsat: true,
                    report: json!({ "solution": Value::Null, "diagnostic": "no orientation solves the knight problem on this skeleton" }),
                    artifacts: vec![],
                }))
            }
        },
        _ => bail!("give --orientation or --search"),
    };
    let ord = orientation_to_orderings(&arr, &o)?;
    let rho = match build_rho0(&arr, &ord) {
        Ok(r) => r,
        Err(e @ (Error::Precondition(_) | Error::Certification { .. })) => {
            return Ok(Some(Outcome {
                unsat: false,
                ok: false,
                report: json!({ "orientation": o, "diagnostic": e.to_string() }),
                artifacts: vec![],
            }))
        }
        Err(e) => return Err(e.into()),
    };
    let cay = CayleyGraph::from_array(&arr)?;
    let rep = trace_faces(&cay, &rho)?;
    let colours = two_color_check(&rep, &arr, &ord)?;
    let base = base_cycles(&arr, &ord)?;
    let rows = develop_and_verify(&base.rows, &cay)?;
    let cols = develop_and_verify(&base.cols, &cay)?;
    let orthogonal = verify_orthogonal(&rows, &cols)?;
    let mut report = json!({
        "orientation": o,
        "embedding": {
            "v": rep.v,
            "s": rep.s,
            "f": rep.f,
            "genus": rep.genus,
            "formula_genus": rep.formula_genus,
        },
        "two_color": colours,
        "decompositions": { "rows": rows, "cols": cols, "orthogonal": orthogonal },
    });
    if let Some(t) = a.input.t {
        if let Some(v) = arr.spec().as_cyclic() {
            let j = heffter::group::subgroup_of_order(v, t)?;
            report["multipartite"] = json!(cay.is_multipartite_over(&j));
        }
    }
    if a.faces {
        report["faces"] = serde_json::to_value(&rep.faces)?;
    }
    let mut artifacts = vec![];
    if let Some(prefix) = &a.edges {
        for (name, d) in [("rows.txt", &rows), ("cols.txt", &cols)] {
            let path = with_suffix(prefix, name);
            fs::write(&path, d.edge_list()).with_context(|| format!("writing {}", path.display()))?;
            artifacts.push(path.display().to_string());
        }
    }
    let genus_ok = rep.formula_genus == Some(rep.genus as i64);
    Ok(Some(Outcome {
        unsat: false,
        ok: colours.passed && orthogonal && genus_ok,
        report,
        artifacts,
    }))
}
