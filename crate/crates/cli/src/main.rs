use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use divide_core::divide::DivideError;
use divide_core::doubling::{double, double_point_census};
use divide_core::hirasawa::{link_of_graph_divide, LinkError};
use divide_core::layout::{embed, normalize_slopes};
use divide_core::{
    band_word, braid_index_bound, counts, crosscheck, fuzz, gibson_tree_to_graph_divide,
    invariant_report, parse_divide, parse_tree_divide, positive_braid_to_divide, render_svg, simplify, validate,
    BraidWord, GraphDivide, RenderSvg,
};
use serde_json::json;

#[derive(Parser)]
#[command(name = "divide-forge", version, about = "Graph divides, their links and their invariants")]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Also write a picture to this path.
    #[arg(long, global = true, value_name = "PATH")]
    svg: Option<PathBuf>,
    /// Seed for `fuzz` and for the orientation in `from-tree`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse and validate a divide file.
    Validate { file: PathBuf },
    /// Draw the divide on the grid.
    Render { file: PathBuf },
    /// Double the divide into an oriented divide.
    Double { file: PathBuf },
    /// Link diagram of the divide, as a PD code.
    Diagram {
        file: PathBuf,
        /// Skip Reidemeister reduction.
        #[arg(long)]
        raw: bool,
    },
    /// Quasipositive band word of the divide.
    Braid { file: PathBuf },
    /// Jones polynomial, determinant and four-dimensional invariants.
    Invariants { file: PathBuf },
    /// Compare the diagram pipeline with the band-word pipeline.
    Crosscheck { file: PathBuf },
    /// Divide whose link is the closure of a positive braid, e.g. "s1 s1 s2".
    FromBraid {
        word: String,
        #[arg(long)]
        strands: Option<u32>,
    },
    /// Signed graph divide of a tree divide with degree-2 marks.
    FromTree { file: PathBuf },
    /// Crosscheck random divides.
    Fuzz {
        #[arg(long, default_value_t = 200)]
        count: usize,
        /// Maximum number of connectors per divide.
        #[arg(long, default_value_t = 8)]
        size: usize,
    },
}

/// Failure with its exit code.
struct Fail {
    code: u8,
    msg: String,
}

impl Fail {
    fn parse(msg: impl ToString) -> Self {
        Fail { code: 1, msg: msg.to_string() }
    }
    fn invalid(msg: impl ToString) -> Self {
        Fail { code: 2, msg: msg.to_string() }
    }
    fn io(msg: impl ToString) -> Self {
        Fail { code: 4, msg: msg.to_string() }
    }
}

impl From<DivideError> for Fail {
    fn from(e: DivideError) -> Self {
        Fail::invalid(e)
    }
}

impl From<LinkError> for Fail {
    fn from(e: LinkError) -> Self {
        match e {
            LinkError::Divide(d) => Fail::invalid(d),
            other => Fail { code: 5, msg: other.to_string() },
        }
    }
}

fn read(path: &Path) -> Result<String, Fail> {
    std::fs::read_to_string(path).map_err(|e| Fail::io(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<GraphDivide, Fail> {
    parse_divide(&read(path)?).map_err(|e| Fail::parse(format!("{}: {e}", path.display())))
}

fn load_valid(path: &Path) -> Result<GraphDivide, Fail> {
    let d = load(path)?;
    let report = validate(&d);
    if !report.ok {
        let lines: Vec<String> = report.violations.iter().map(|v| format!("{}: {}", v.rule, v.detail)).collect();
        return Err(Fail::invalid(format!("{}: invalid divide\n{}", path.display(), lines.join("\n"))));
    }
    Ok(d)
}

fn write_svg(path: &Option<PathBuf>, obj: &(impl RenderSvg + ?Sized)) -> Result<(), Fail> {
    if let Some(p) = path {
        std::fs::write(p, render_svg(obj)).map_err(|e| Fail::io(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

fn print_json(v: serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(&v).expect("JSON values serialize"));
}

fn run(cli: Cli) -> Result<(), Fail> {
    match cli.cmd {
        Cmd::Validate { file } => {
            let d = load(&file)?;
            let report = validate(&d);
            if cli.json {
                print_json(serde_json::to_value(&report).expect("report serializes"));
            } else if report.ok {
                let c = counts(&d)?;
                println!(
                    "ok: n={} delta={} m={} e1={} t3={} chi(G)={} branches={}",
                    c.n, c.delta, c.m, c.e1, c.t3, c.euler_g, c.branches
                );
            } else {
                for v in &report.violations {
                    println!("{}: {}", v.rule, v.detail);
                }
            }
            if !report.ok {
                return Err(Fail::invalid(format!("{}: invalid divide", file.display())));
            }
        }
        Cmd::Render { file } => {
            let g = embed(&load_valid(&file)?)?;
            match &cli.svg {
                Some(_) => write_svg(&cli.svg, &g)?,
                None => print!("{}", render_svg(&g)),
            }
        }
        Cmd::Double { file } => {
            let g = normalize_slopes(&embed(&load_valid(&file)?)?);
            let q = double(&g).map_err(|e| Fail { code: 5, msg: e.to_string() })?;
            let census = double_point_census(&q);
            if cli.json {
                print_json(json!({ "curves": q.curves.len(), "census": census }));
            } else {
                println!(
                    "curves={} sharp={} loop={} vertex-turn={} pre-existing={}",
                    q.curves.len(),
                    census.sharp,
                    census.loops,
                    census.vertex_turn,
                    census.pre_existing
                );
            }
            write_svg(&cli.svg, &q)?;
        }
        Cmd::Diagram { file, raw } => {
            let drawn = link_of_graph_divide(&load_valid(&file)?)?;
            let diag = if raw { drawn.diagram.clone() } else { simplify(&drawn.diagram) };
            if cli.json {
                print_json(diag.to_json());
            } else {
                print!("{}", diag.to_pd_text());
            }
            write_svg(&cli.svg, &drawn)?;
        }
        Cmd::Braid { file } => {
            let d = load_valid(&file)?;
            let w = band_word(&d)?;
            let flat = w.flatten();
            let (qp, sqp) = (w.is_quasipositive_syntactic(), w.is_strongly_quasipositive_syntactic());
            let bound = braid_index_bound(&d)?;
            if cli.json {
                print_json(json!({
                    "strands": w.strands,
                    "bands": w.to_json(),
                    "k": w.bands.len(),
                    "word": flat.letters,
                    "quasipositive": qp,
                    "strongly_quasipositive": sqp,
                    "braid_index_bound": bound,
                }));
            } else {
                println!("n={} k={} quasipositive={qp} strongly_quasipositive={sqp} braid_index_bound={bound}", w.strands, w.bands.len());
                println!("{flat}");
            }
            write_svg(&cli.svg, &flat)?;
        }
        Cmd::Invariants { file } => {
            let r = invariant_report(&load_valid(&file)?)?;
            if cli.json {
                print_json(r.to_json());
            } else {
                let show = |v: Option<i64>| v.map_or("none".to_string(), |x| x.to_string());
                println!("jones: {}", r.jones.display_half("t"));
                println!("determinant: {}", r.determinant);
                println!("components: {}", r.components);
                println!("chi_s: {}", r.chi_s);
                println!(
                    "clasp: lower={} upper={} exact={}",
                    r.clasp.lower,
                    show(r.clasp.upper),
                    show(r.clasp.exact)
                );
                println!("braid_index_bound: {}", r.braid_index_bound);
            }
        }
        Cmd::Crosscheck { file } => {
            let r = crosscheck(&load_valid(&file)?)?;
            if cli.json {
                print_json(r.to_json());
            } else {
                println!("{}: {}", r.name, if r.passed() { "equal" } else { "MISMATCH" });
                println!("jones A: {}", r.jones_a.display_half("t"));
                println!("jones B: {}", r.jones_b.display_half("t"));
                println!("chi_s: formula={} n-k={}", r.chi_s.formula, r.chi_s.n_minus_k);
            }
            if !r.passed() {
                return Err(Fail { code: 3, msg: format!("{}: pipelines disagree", file.display()) });
            }
        }
        Cmd::FromBraid { word, strands } => {
            let w = BraidWord::parse(&word, strands).map_err(Fail::parse)?;
            let d = positive_braid_to_divide(&w).map_err(Fail::invalid)?;
            print!("{d}");
            write_svg(&cli.svg, &embed(&d)?)?;
        }
        Cmd::FromTree { file } => {
            let t = parse_tree_divide(&read(&file)?).map_err(|e| Fail::parse(format!("{}: {e}", file.display())))?;
            let d = gibson_tree_to_graph_divide(&t, cli.seed).map_err(Fail::invalid)?;
            print!("{d}");
            write_svg(&cli.svg, &embed(&d)?)?;
        }
        Cmd::Fuzz { count, size } => {
            let seed = cli.seed.unwrap_or(1);
            let report = fuzz(seed, count, size);
            if cli.json {
                print_json(json!({
                    "seed": seed,
                    "results": report.results.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
                    "failures": report.failures.iter().map(|f| json!({
                        "case": f.case,
                        "original": f.original.to_string(),
                        "shrunk": f.shrunk.to_string(),
                        "result": f.result.to_json(),
                    })).collect::<Vec<_>>(),
                }));
            } else {
                println!("seed={seed} cases={} failures={}", report.results.len(), report.failures.len());
                for f in &report.failures {
                    println!("case {} shrinks to:\n{}", f.case, f.shrunk);
                }
            }
            if !report.failures.is_empty() {
                return Err(Fail { code: 3, msg: format!("{} fuzz cases failed", report.failures.len()) });
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { 64 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
