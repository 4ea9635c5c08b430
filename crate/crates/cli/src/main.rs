//! Command line front end: enumeration, characteristic polynomials,
//! certificates, separation scans, geometric realization, spectral search,
//! and the full self-check suite, each with an optional JSON report.
//!
//! Exit codes: 0 on success, 1 when a verification fails (collisions found,
//! self-checks failing), 2 on usage or input errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use resonant_blocks::blocks::{build_matrix, build_matrix_marked};
use resonant_blocks::certify::{certify_irreducible, separation_check};
use resonant_blocks::geometry::{
    random_generic_sites, realization_system, residual, solve_realization, RealizationVerdict,
};
use resonant_blocks::graphs::{enumerate_graphs, ColoredGraph, GraphClass, GraphFile};
use resonant_blocks::lattice::TangentialSites;
use resonant_blocks::spectral::search_elliptic;
use resonant_blocks::verify::{all_passed, run_criterion};

#[derive(Parser)]
#[command(
    name = "rb",
    version,
    about = "Exact blocks, certificates and spectra of colored lattice graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List every graph in an enumeration range, one line each.
    Enumerate(EnumerateArgs),
    /// Print the characteristic polynomial of a graph file.
    Charpoly(GraphInput),
    /// Certify irreducibility of a graph's characteristic polynomial.
    Certify(GraphInput),
    /// Scan an enumeration range for characteristic polynomial collisions.
    Separate(SeparateArgs),
    /// Solve the geometric realization system of a graph over site families.
    Realize(RealizeArgs),
    /// Search a graph family for a common all-real separated frequency point.
    Spectrum(SpectrumArgs),
    /// Run the numbered self-checks and exit nonzero if any fails.
    VerifyAll(VerifyArgs),
}

#[derive(Args)]
struct EnumerateArgs {
    /// Lattice dimension (number of frequencies).
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 4)]
    max_vertices: usize,
    /// Coordinate bound on the vertices.
    #[arg(long, default_value_t = 2)]
    bound: i64,
    /// Append degeneracy class and allowability to each line.
    #[arg(long)]
    classify: bool,
    /// Write the full JSON reports here.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GraphInput {
    /// Graph file: JSON {"vertices": [...], "colors": optional} or a line
    /// `vertices: [[0,0],[1,-1]]`.
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SeparateArgs {
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 4)]
    max_vertices: usize,
    #[arg(long, default_value_t = 3)]
    bound: i64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct RealizeArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Site family file: JSON list of integer vectors, one per frequency.
    #[arg(long)]
    sites: Option<PathBuf>,
    /// Draw this many random generic site families instead.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 0xB10C)]
    seed: u64,
    /// Ambient dimension for random sites (0 = smallest sensible).
    #[arg(long, default_value_t = 0)]
    ambient: usize,
    /// Coordinate bound for random sites.
    #[arg(long, default_value_t = 20)]
    site_bound: i64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SpectrumArgs {
    /// Family file: a JSON array of graph objects (or a single one).
    #[arg(long)]
    family: PathBuf,
    /// Number of frequency samples on the unit simplex.
    #[arg(long, default_value_t = 400)]
    grid: usize,
    /// Required margin between eigenvalues at the reported point.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Comma-separated check numbers (default: all of 1..=11).
    #[arg(long, value_delimiter = ',')]
    criteria: Vec<usize>,
    #[arg(long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    // Die quietly when the reader of a pipe goes away (`rb enumerate | head`),
    // matching the usual Unix tool behavior instead of panicking mid-write.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    if let Ok(threads) = std::env::var("RB_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<bool> {
    match command {
        Command::Enumerate(args) => enumerate(args),
        Command::Charpoly(args) => charpoly(args),
        Command::Certify(args) => certify(args),
        Command::Separate(args) => separate(args),
        Command::Realize(args) => realize(args),
        Command::Spectrum(args) => spectrum(args),
        Command::VerifyAll(args) => verify_all(args),
    }
}

fn read_graph_file(path: &Path) -> Result<GraphFile> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    GraphFile::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_json(path: &Option<PathBuf>, value: &serde_json::Value) -> Result<()> {
    if let Some(path) = path {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn enumerate(args: EnumerateArgs) -> Result<bool> {
    if args.m < 1 || args.max_vertices < 1 || args.bound < 1 {
        bail!("--m, --max-vertices and --bound must all be at least 1");
    }
    let mut reports = Vec::new();
    let mut count = 0usize;
    for g in enumerate_graphs(args.m, args.max_vertices, args.bound) {
        count += 1;
        if args.classify {
            let report = g.report();
            println!(
                "{}  {}  {}",
                g.to_line(),
                report.class,
                if report.allowable { "allowable" } else { "forbidden" }
            );
            if args.output.is_some() {
                reports.push(report);
            }
        } else {
            println!("{}", g.to_line());
            if args.output.is_some() {
                reports.push(g.report());
            }
        }
    }
    println!("# {count} graphs");
    write_json(&args.output, &serde_json::to_value(&reports)?)?;
    Ok(true)
}

/// Builds the block and polynomial, honoring explicit colors when present.
fn block_of(file: &GraphFile) -> Result<(resonant_blocks::BlockMatrix, resonant_blocks::MultiPoly)> {
    let block = match &file.colors {
        Some(_) => build_matrix_marked(&file.build_marked()?),
        None => build_matrix(&file.build_combinatorial()?),
    };
    let chi = block.charpoly()?;
    Ok((block, chi))
}

fn charpoly(args: GraphInput) -> Result<bool> {
    let file = read_graph_file(&args.graph)?;
    let (block, chi) = block_of(&file)?;
    println!("{chi}");
    write_json(
        &args.output,
        &json!({
            "vertices": file.vertices,
            "colors": file.colors,
            "dimension": block.size(),
            "m": block.m,
            "chi": chi.to_string(),
        }),
    )?;
    Ok(true)
}

fn certify(args: GraphInput) -> Result<bool> {
    let file = read_graph_file(&args.graph)?;
    let (_, chi) = block_of(&file)?;
    let cert = certify_irreducible(&chi);
    match &cert.factors {
        Some(factors) => println!("{:?}: {}", cert.verdict, factors.join(" | ")),
        None => println!("{:?} ({} specialization attempts)", cert.verdict, cert.attempts),
    }
    write_json(
        &args.output,
        &json!({
            "vertices": file.vertices,
            "chi": chi.to_string(),
            "certificate": cert,
        }),
    )?;
    Ok(true)
}

fn separate(args: SeparateArgs) -> Result<bool> {
    if args.m < 1 || args.max_vertices < 1 || args.bound < 1 {
        bail!("--m, --max-vertices and --bound must all be at least 1");
    }
    let mut family = Vec::new();
    for g in enumerate_graphs(args.m, args.max_vertices, args.bound) {
        if g.classify() != GraphClass::NonDegenerate || !g.is_allowable() {
            continue;
        }
        let chi = resonant_blocks::charpoly_block(&g)?;
        family.push((g, chi));
    }
    let collisions = separation_check(&family);
    println!(
        "{} non-degenerate allowable graphs, {} collisions",
        family.len(),
        collisions.len()
    );
    for c in &collisions {
        println!("collision: {} shared by {:?} and {:?}", c.chi, c.first, c.second);
    }
    write_json(
        &args.output,
        &json!({
            "m": args.m,
            "max_vertices": args.max_vertices,
            "bound": args.bound,
            "graphs": family.len(),
            "collisions": collisions,
        }),
    )?;
    Ok(collisions.is_empty())
}

fn realize(args: RealizeArgs) -> Result<bool> {
    let file = read_graph_file(&args.graph)?;
    let g = file.build_combinatorial()?;
    match (&args.sites, args.samples) {
        (Some(path), None) => {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let vectors: Vec<Vec<i64>> = serde_json::from_str(&text)
                .with_context(|| format!("parsing {} as a list of integer vectors", path.display()))?;
            let sites = TangentialSites::new(vectors);
            let sys = realization_system(&g, &sites)?;
            let verdict = solve_realization(&sys);
            describe_verdict(&verdict);
            let defect = match &verdict {
                RealizationVerdict::GenericSolutions { witness, .. } => {
                    Some(residual(&sys, witness))
                }
                _ => None,
            };
            write_json(
                &args.output,
                &json!({
                    "vertices": g.vertices,
                    "sites": sites.vectors,
                    "generic": sites.is_generic(),
                    "verdict": verdict,
                    "residual": defect,
                }),
            )?;
            Ok(true)
        }
        (None, Some(samples)) => {
            if samples == 0 {
                bail!("--samples must be at least 1");
            }
            let ambient = if args.ambient == 0 { g.m().max(4) } else { args.ambient };
            if ambient < g.m() {
                bail!("--ambient {} is below the {} sites required", ambient, g.m());
            }
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            let mut classes: Vec<(String, usize)> = Vec::new();
            for _ in 0..samples {
                let sites = random_generic_sites(&mut rng, g.m(), ambient, args.site_bound);
                let sys = realization_system(&g, &sites)?;
                let class = solve_realization(&sys).class().to_string();
                match classes.iter_mut().find(|(name, _)| *name == class) {
                    Some((_, n)) => *n += 1,
                    None => classes.push((class, 1)),
                }
            }
            classes.sort();
            for (class, n) in &classes {
                println!("{class}: {n}/{samples}");
            }
            let table: serde_json::Map<String, serde_json::Value> = classes
                .iter()
                .map(|(class, n)| (class.clone(), json!(n)))
                .collect();
            write_json(
                &args.output,
                &json!({
                    "vertices": g.vertices,
                    "samples": samples,
                    "seed": args.seed,
                    "ambient": ambient,
                    "site_bound": args.site_bound,
                    "classes": table,
                }),
            )?;
            Ok(true)
        }
        _ => bail!("pass exactly one of --sites FILE or --samples N"),
    }
}

fn describe_verdict(verdict: &RealizationVerdict) {
    match verdict {
        RealizationVerdict::GenericSolutions { witness, exact } => {
            match exact {
                Some(point) => println!("generic_solutions at [{}]", point.join(", ")),
                None => println!("generic_solutions near {witness:?}"),
            }
        }
        RealizationVerdict::OnlyInS { site } => println!("only_in_S at {site:?}"),
        RealizationVerdict::OnlyComplex => println!("only_complex"),
        RealizationVerdict::EmptyReal { radius_squared } => {
            println!("empty_real (radius squared {radius_squared})")
        }
        RealizationVerdict::Inconsistent => println!("inconsistent"),
    }
}

fn spectrum(args: SpectrumArgs) -> Result<bool> {
    if args.grid < 1 || !(args.tol > 0.0) {
        bail!("--grid must be at least 1 and --tol positive");
    }
    let text = fs::read_to_string(&args.family)
        .with_context(|| format!("reading {}", args.family.display()))?;
    let files: Vec<GraphFile> = match serde_json::from_str::<Vec<GraphFile>>(&text) {
        Ok(list) => list,
        Err(_) => vec![GraphFile::parse(&text)
            .with_context(|| format!("parsing {}", args.family.display()))?],
    };
    if files.is_empty() {
        bail!("the family file lists no graphs");
    }
    let gs: Vec<ColoredGraph> = files
        .iter()
        .map(GraphFile::build_combinatorial)
        .collect::<Result<_, _>>()?;
    let m = gs[0].m();
    if gs.iter().any(|g| g.m() != m) {
        bail!("family members disagree on the number of frequencies");
    }
    let report = search_elliptic(&gs, m, args.grid, args.tol)?;
    if report.found {
        println!(
            "found {:?} with margin {:.6e} over {} graphs ({} samples)",
            report.point,
            report.margin,
            report.graphs.len(),
            report.n_samples
        );
    } else {
        println!(
            "no common elliptic point over {} graphs; best margin {:.6e} at {:?} ({} samples)",
            report.graphs.len(),
            report.margin,
            report.point,
            report.n_samples
        );
    }
    write_json(&args.output, &serde_json::to_value(&report)?)?;
    Ok(true)
}

fn verify_all(args: VerifyArgs) -> Result<bool> {
    let indices = if args.criteria.is_empty() {
        (1..=11).collect::<Vec<_>>()
    } else {
        args.criteria.clone()
    };
    if indices.iter().any(|&i| i < 1 || i > 11) {
        bail!("check numbers run from 1 to 11");
    }
    let outcomes: Vec<_> = indices.iter().map(|&i| run_criterion(i)).collect();
    for outcome in &outcomes {
        println!("{}", outcome.line());
    }
    write_json(&args.output, &serde_json::to_value(&outcomes)?)?;
    Ok(all_passed(&outcomes))
}
