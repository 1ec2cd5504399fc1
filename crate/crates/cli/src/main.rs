use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rapoly::census::{
    composition_audit, format_volume, parse_seed_spec, verify_against, CensusDatabase, CensusError,
    CensusOptions, ReferenceTable, DEFAULT_SEEDS,
};
use rapoly::geometry::{volume_with, SolverOptions};
use rapoly::render::{contact_sheet, default_outer_face, to_svg, tutte_embedding, RenderError, RenderOptions};
use rapoly::surgery::{all_compositions, reduce_to_lobell};
use rapoly::CombinatorialPolyhedron;

const EXIT_FAILURE: u8 = 1;
const EXIT_PARSE: u8 = 3;
const EXIT_SOLVER: u8 = 4;
const EXIT_DB: u8 = 5;
const EXIT_VERIFY: u8 = 6;

#[derive(Parser)]
#[command(name = "rapoly", version, about = "Census of right-angled hyperbolic polyhedra by volume")]
struct Cli {
    /// Census database file; polyhedron files live next to it.
    #[arg(long, global = true, default_value = "census.tsv", env = "RAPOLY_DB")]
    db: PathBuf,
    /// Worker threads, default all cores.
    #[arg(long, global = true, env = "RAPOLY_WORKERS")]
    workers: Option<usize>,
    /// Largest accepted realization residual.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tolerance: f64,
    /// Solver restarts before a volume is recorded as failed.
    #[arg(long, global = true, default_value_t = 128)]
    restarts: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Create a database from seeds.
    Init {
        #[arg(long, default_value = DEFAULT_SEEDS)]
        seeds: String,
        /// Replace an existing database.
        #[arg(long)]
        force: bool,
    },
    /// Rank the next `n` polyhedra.
    Extend {
        #[arg(short, default_value_t = 1)]
        n: usize,
    },
    /// Print an entry and its ancestors.
    Show {
        #[command(flatten)]
        target: Target,
        /// Also print the polyhedron.
        #[arg(long)]
        structure: bool,
        /// Levels of ancestors to print.
        #[arg(long, default_value_t = 5)]
        depth: usize,
    },
    /// Draw an entry, or a contact sheet of the first ranks.
    Render {
        #[command(flatten)]
        target: OptionalTarget,
        /// Contact sheet of ranks 1..=N.
        #[arg(long, conflicts_with_all = ["rank", "id"])]
        sheet: Option<usize>,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long)]
        outer: Option<usize>,
        #[arg(long, default_value_t = 512)]
        size: u32,
        #[arg(long, default_value_t = 1.5)]
        stroke: f64,
        /// Radius of vertex dots.
        #[arg(long, default_value_t = 0.0)]
        dots: f64,
    },
    /// Compare ranked volumes with a reference table.
    Verify {
        /// `rank<TAB>volume` table; the bundled reference table when omitted.
        #[arg(long)]
        reference: Option<PathBuf>,
        #[arg(long, default_value_t = 100)]
        upto: usize,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
    },
    /// Compose two ranked polyhedra, or audit compositions below a bound.
    Compose {
        #[arg(long, conflicts_with_all = ["p", "q"])]
        audit: bool,
        #[arg(long, default_value_t = 15.0)]
        bound: f64,
        /// Rank of the first polyhedron.
        #[arg(long, requires = "q")]
        p: Option<usize>,
        /// Rank of the second polyhedron.
        #[arg(long, requires = "p")]
        q: Option<usize>,
    },
    /// Reduce an entry to Löbell polyhedra.
    Reduce {
        #[command(flatten)]
        target: Target,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Target {
    #[arg(long)]
    rank: Option<usize>,
    #[arg(long)]
    id: Option<usize>,
}

#[derive(Args)]
#[group(multiple = false)]
struct OptionalTarget {
    #[arg(long)]
    rank: Option<usize>,
    #[arg(long)]
    id: Option<usize>,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<CensusError> for Failure {
    fn from(e: CensusError) -> Self {
        let code = match e {
            CensusError::Polyhedron { .. }
            | CensusError::SeedSpec(_)
            | CensusError::InvalidSeed(_)
            | CensusError::Reference { .. } => EXIT_PARSE,
            CensusError::BlockedByFailure { .. } => EXIT_SOLVER,
            _ => EXIT_DB,
        };
        Failure::new(code, format!("census: {e}"))
    }
}

impl From<RenderError> for Failure {
    fn from(e: RenderError) -> Self {
        Failure::new(EXIT_FAILURE, format!("render: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn options(cli: &Cli) -> Result<CensusOptions, Failure> {
    if !(cli.tolerance > 0.0) {
        return Err(Failure::new(EXIT_PARSE, "tolerance must be positive"));
    }
    let workers = match cli.workers {
        Some(0) => return Err(Failure::new(EXIT_PARSE, "worker count must be at least 1")),
        Some(n) => n,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    Ok(CensusOptions {
        solver: SolverOptions {
            tolerance: cli.tolerance,
            restarts: cli.restarts.max(1),
            ..SolverOptions::default()
        },
        workers,
    })
}

fn load(cli: &Cli) -> Result<CensusDatabase, Failure> {
    if !cli.db.exists() {
        return Err(Failure::new(
            EXIT_DB,
            format!("census: no database at {}; run `rapoly init` first", cli.db.display()),
        ));
    }
    Ok(CensusDatabase::load(&cli.db, options(cli)?)?)
}

fn resolve(db: &CensusDatabase, rank: Option<usize>, id: Option<usize>) -> Result<usize, Failure> {
    let found = match (rank, id) {
        (Some(r), _) => db.by_rank(r).map(|e| e.id),
        (_, Some(i)) => db.entry(i).map(|e| e.id),
        (None, None) => None,
    };
    found.ok_or_else(|| Failure::new(EXIT_DB, "census: no such entry"))
}

fn volume_text(v: Option<f64>) -> String {
    v.map_or_else(|| "FAIL".to_string(), format_volume)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match &cli.command {
        Command::Init { seeds, force } => {
            if cli.db.exists() && !force {
                return Err(Failure::new(
                    EXIT_DB,
                    format!("census: {} exists; pass --force to replace it", cli.db.display()),
                ));
            }
            let sources = parse_seed_spec(seeds)?;
            let db = CensusDatabase::init_from_sources(&sources, Some(cli.db.clone()), options(&cli)?)?;
            for e in db.entries() {
                println!("{}\t{}\t{}", e.id, volume_text(e.volume), e.provenance);
            }
            Ok(0)
        }
        Command::Extend { n } => {
            let mut db = load(&cli)?;
            for _ in 0..*n {
                let r = db.step()?;
                println!(
                    "rank {}: {:.7}\tid {}\tchildren {}\tnew {}\tknown {}\tfailed {}",
                    r.rank,
                    r.volume,
                    r.id,
                    r.raw_children,
                    r.new_entries.len(),
                    r.dedup_hits,
                    r.volume_failures.len()
                );
            }
            Ok(0)
        }
        Command::Show {
            target,
            structure,
            depth,
        } => {
            let db = load(&cli)?;
            let id = resolve(&db, target.rank, target.id)?;
            show(&db, id, *depth);
            if *structure {
                print!("{}", db.polyhedron(id).expect("resolved").serialize());
            }
            Ok(0)
        }
        Command::Render {
            target,
            sheet,
            output,
            outer,
            size,
            stroke,
            dots,
        } => {
            let db = load(&cli)?;
            let opts = RenderOptions {
                size: *size,
                stroke_width: *stroke,
                vertex_radius: *dots,
                ..RenderOptions::default()
            };
            let svg = if let Some(n) = sheet {
                let mut items: Vec<(String, &CombinatorialPolyhedron)> = Vec::new();
                for r in 1..=*n {
                    let e = db
                        .by_rank(r)
                        .ok_or_else(|| Failure::new(EXIT_DB, format!("census: rank {r} not assigned")))?;
                    items.push((r.to_string(), db.polyhedron(e.id).expect("stored")));
                }
                let panel = RenderOptions {
                    size: (*size / 10).max(32),
                    margin: 4.0,
                    ..opts
                };
                contact_sheet(&items, 10, &panel)?
            } else {
                let id = resolve(&db, target.rank, target.id)?;
                let p = db.polyhedron(id).expect("resolved");
                let emb = tutte_embedding(p, outer.unwrap_or_else(|| default_outer_face(p)))?;
                to_svg(p, &emb, &opts)?
            };
            write(output, &svg)?;
            Ok(0)
        }
        Command::Verify { reference, upto, tol } => {
            let db = load(&cli)?;
            let table = match reference {
                Some(path) => {
                    let text = fs::read_to_string(path)
                        .map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))?;
                    ReferenceTable::parse(&text)?
                }
                None => ReferenceTable::bundled(),
            };
            let report = verify_against(&db, &table, *upto, *tol);
            println!("{report}");
            Ok(if report.passed { 0 } else { EXIT_VERIFY })
        }
        Command::Compose { audit, bound, p, q } => {
            let db = load(&cli)?;
            if *audit {
                let report = composition_audit(&db, *bound)?;
                println!("A: {:?}", report.a);
                println!("B: {:?}", report.b);
                for pf in &report.pairs {
                    println!(
                        "({}, {}): {} compositions, {} distinct",
                        pf.ranks.0,
                        pf.ranks.1,
                        pf.raw_count,
                        pf.compositions.len()
                    );
                }
                let absent: Vec<_> = report.absent().collect();
                println!("absent: {}", absent.len());
                for (pf, c) in absent {
                    println!(
                        "({}, {}) at {}: volume {} very good edges {} code {}",
                        pf.ranks.0,
                        pf.ranks.1,
                        c.site,
                        volume_text(c.volume),
                        c.very_good_edges,
                        c.code
                    );
                }
                return Ok(0);
            }
            let (Some(rp), Some(rq)) = (p, q) else {
                return Err(Failure::new(EXIT_PARSE, "compose needs --audit or both --p and --q"));
            };
            let a = resolve(&db, Some(*rp), None)?;
            let b = resolve(&db, Some(*rq), None)?;
            let summary = all_compositions(db.polyhedron(a).expect("stored"), db.polyhedron(b).expect("stored"));
            println!("compositions {} distinct {}", summary.raw_count, summary.distinct_count());
            for (poly, site, code) in &summary.distinct {
                let known = db.find_code(code);
                let v = match known {
                    Some(id) => db.entry(id).and_then(|e| e.volume),
                    None => volume_with(poly, &db.options().solver).ok().map(|r| r.volume),
                };
                let place = known.map_or_else(|| "new".to_string(), |id| format!("id {id}"));
                println!("{site}\t{}\t{place}", volume_text(v));
            }
            Ok(0)
        }
        Command::Reduce { target } => {
            let db = load(&cli)?;
            let id = resolve(&db, target.rank, target.id)?;
            let p = db.polyhedron(id).expect("resolved");
            let chain = reduce_to_lobell(p).map_err(|e| Failure::new(EXIT_FAILURE, format!("surgery: {e}")))?;
            for (i, step) in chain.steps.iter().enumerate() {
                println!("{}. component {} of {}: {}", i + 1, step.target, step.components.len(), step.mv);
            }
            let names: Vec<String> = chain.lobell_indices.iter().map(|n| format!("L{n}")).collect();
            println!("terminal: {}", names.join(", "));
            Ok(0)
        }
    }
}

fn show(db: &CensusDatabase, id: usize, depth: usize) {
    let e = db.entry(id).expect("resolved");
    println!(
        "id {}\trank {}\tvolume {}\tfaces {}\t{}\t{}",
        e.id,
        e.rank.map_or_else(|| "-".into(), |r| r.to_string()),
        volume_text(e.volume),
        e.face_vector.to_sparse_string(),
        if e.expanded { "expanded" } else { "unexpanded" },
        e.provenance
    );
    println!("code {}", e.code);
    ancestors(db, id, 1, depth);
}

fn ancestors(db: &CensusDatabase, id: usize, level: usize, depth: usize) {
    if level > depth {
        return;
    }
    for link in &db.entry(id).expect("resolved").parents {
        let p = db.entry(link.parent).expect("parents resolve");
        println!(
            "{}<- id {} rank {} volume {} at {}",
            "  ".repeat(level),
            p.id,
            p.rank.map_or_else(|| "-".into(), |r| r.to_string()),
            volume_text(p.volume),
            link.site
        );
        ancestors(db, p.id, level + 1, depth);
    }
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::new(EXIT_FAILURE, format!("{}: {e}", path.display())))
}
