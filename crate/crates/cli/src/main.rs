//! `classsize`: solve schools, map the (p, W) plane, scan crossing roots
//! and run the invariant suites.

mod config;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use classsize::format::{profit6, sig12};
use classsize::model::PROFIT_TOLERANCE;
use classsize::multitype::structure::verify_structure;
use classsize::multitype::{
    solve_multitype_bruteforce_with_cap, MultiTypeInstance, DEFAULT_MULTITYPE_CAP,
};
use classsize::regions::atlas::{default_p_grid, default_w_grid, write_cells, write_curves};
use classsize::regions::{conjecture_a_scan, emit_atlas};
use classsize::solver::{solve_balanced, solve_bruteforce_with_cap, DEFAULT_ENUMERATION_CAP};
use classsize::suites::{run_all, Scale};
use classsize::{Error, Instance};

use config::{ConfigFile, GridSpec, List};

/// Why a command stopped; each maps to an exit code.
#[derive(Debug, Clone, PartialEq)]
pub enum Failure {
    Usage(String),
    Capacity(String),
    Invariant(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Capacity(_) => 3,
            Failure::Invariant(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Capacity(m) | Failure::Invariant(m) | Failure::Io(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Capacity { .. } => Failure::Capacity(e.to_string()),
            Error::Io(_) => Failure::Io(e.to_string()),
            Error::InvalidArgument(_) | Error::Parse(_) | Error::HypothesisUnmet(_) => {
                Failure::Usage(e.to_string())
            }
            Error::RootNotBracketed { .. } | Error::ImprovementNotGuaranteed(_) => {
                Failure::Invariant(e.to_string())
            }
        }
    }
}

fn io_failure(path: &Path) -> impl Fn(io::Error) -> Failure + '_ {
    move |e| Failure::Io(format!("{}: {e}", path.display()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScaleArg {
    Quick,
    Full,
}

#[derive(Debug, Parser)]
#[command(name = "classsize", version, about = "Class-size profit model toolkit")]
struct Cli {
    /// key=value file; flags override its entries
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Seed for randomized checks
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Optimal class sizes for one school
    Solve {
        #[arg(long = "Z")]
        students: Option<usize>,
        #[arg(long = "p")]
        p: Option<f64>,
        #[arg(long = "W")]
        teacher_cost: Option<f64>,
        #[arg(long = "V")]
        unit_value: Option<f64>,
        /// Largest Z solved by full enumeration
        #[arg(long)]
        cap: Option<usize>,
        /// Relative profit tolerance for the solver agreement check
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Classify a (p, W) grid and write the cell and curve tables
    Atlas {
        #[arg(long = "Z")]
        students: Option<usize>,
        /// lo:hi:n or a comma list
        #[arg(long)]
        p_grid: Option<GridSpec>,
        #[arg(long)]
        w_grid: Option<GridSpec>,
        /// Directory for cells.csv and curves.csv
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Crossing-root ordering report for a range of school sizes
    Conjecture {
        #[arg(long)]
        from: Option<usize>,
        #[arg(long)]
        to: Option<usize>,
        /// Report file; standard output when absent
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Optimal allocation for several student types
    Multitype {
        /// Per-type p, comma separated
        #[arg(long)]
        probs: Option<List<f64>>,
        /// Per-type student counts, comma separated
        #[arg(long)]
        counts: Option<List<usize>>,
        #[arg(long = "W")]
        teacher_cost: Option<f64>,
        #[arg(long = "V")]
        unit_value: Option<f64>,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Run the invariant suites
    Verify {
        #[arg(long, value_enum)]
        scale: Option<ScaleArg>,
    },
}

struct Context {
    config: ConfigFile,
    format: Format,
    seed: u64,
}

fn parse_enum<T: ValueEnum>(raw: &str) -> Result<T, Failure> {
    T::from_str(raw, true).map_err(|_| Failure::Usage(format!("config: unknown value {raw:?}")))
}

fn emit(ctx: &Context, text: &str, value: Value) {
    match ctx.format {
        Format::Text => print!("{text}"),
        Format::Json => println!("{value}"),
    }
}

fn num(x: f64) -> Value {
    json!(sig12(x).parse::<f64>().unwrap_or(x))
}

struct SolveArgs {
    students: Option<usize>,
    p: Option<f64>,
    teacher_cost: Option<f64>,
    unit_value: Option<f64>,
    cap: Option<usize>,
    tolerance: Option<f64>,
}

fn solve(ctx: &Context, args: SolveArgs) -> Result<(), Failure> {
    let c = &ctx.config;
    let inst = Instance::with_value(
        c.require(args.students, "Z")?,
        c.require(args.p, "p")?,
        c.require(args.teacher_cost, "W")?,
        c.pick(args.unit_value, "V")?.unwrap_or(1.0),
    )?;
    let cap = c.pick(args.cap, "cap")?.unwrap_or(DEFAULT_ENUMERATION_CAP);
    let tolerance = c
        .pick(args.tolerance, "tolerance")?
        .unwrap_or(PROFIT_TOLERANCE);
    if !(tolerance >= 0.0 && tolerance.is_finite()) {
        return Err(Failure::Usage(format!(
            "tolerance must be finite and non-negative, got {tolerance}"
        )));
    }
    let balanced = solve_balanced(&inst);
    let oracle = match solve_bruteforce_with_cap(&inst, cap) {
        Ok(r) => Some(r),
        Err(Error::Capacity { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let noise = tolerance * inst.students() as f64 * inst.unit_value();
    let agreement = oracle
        .as_ref()
        .map(|o| !o.profitable || (o.profit - balanced.profit).abs() <= noise);
    let best = oracle.clone().unwrap_or_else(|| balanced.clone());
    let sizes: Vec<String> = best.best.sizes().iter().map(|n| n.to_string()).collect();
    let text = format!(
        "sizes: {}\nclasses: {}\nprofit: {}\nprofitable: {}\nsolver: {}\nagreement: {}\n",
        sizes.join(","),
        best.classes(),
        profit6(best.profit),
        best.profitable,
        if oracle.is_some() {
            "enumeration"
        } else {
            "balanced"
        },
        agreement.map_or("n/a".to_string(), |a| a.to_string()),
    );
    emit(
        ctx,
        &text,
        json!({
            "sizes": best.best.sizes(),
            "classes": best.classes(),
            "profit": num(best.profit),
            "profitable": best.profitable,
            "solver": if oracle.is_some() { "enumeration" } else { "balanced" },
            "agreement": agreement,
        }),
    );
    if agreement == Some(false) {
        return Err(Failure::Invariant(format!(
            "balanced solver found {} instead of {}",
            balanced.best, best.best
        )));
    }
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(io_failure(path))
}

fn atlas(
    ctx: &Context,
    z: Option<usize>,
    p_grid: Option<GridSpec>,
    w_grid: Option<GridSpec>,
    out: Option<PathBuf>,
) -> Result<(), Failure> {
    let c = &ctx.config;
    let z: usize = c.require(z, "Z")?;
    let grid = |flag: Option<GridSpec>, key: &str| -> Result<Option<Vec<f64>>, Failure> {
        match flag {
            Some(g) => Ok(Some(g.0)),
            None => c
                .raw(key)
                .map(|raw| raw.parse::<GridSpec>().map(|g| g.0).map_err(Failure::Usage))
                .transpose(),
        }
    };
    let p_grid = grid(p_grid, "p_grid")?.unwrap_or_else(default_p_grid);
    let w_grid = grid(w_grid, "w_grid")?.unwrap_or_else(|| default_w_grid(z));
    let out: PathBuf = c.require(out, "out")?;
    let atlas = emit_atlas(z, &p_grid, &w_grid)?;
    std::fs::create_dir_all(&out).map_err(io_failure(&out))?;
    let cells_path = out.join("cells.csv");
    let curves_path = out.join("curves.csv");
    write_cells(&atlas.cells, create(&cells_path)?)?;
    write_curves(&atlas.curves, create(&curves_path)?)?;

    let mut counts = std::collections::BTreeMap::new();
    let mut unlabelled = 0;
    for cell in &atlas.cells {
        match cell.l_label {
            Some(k) => *counts.entry(k).or_insert(0usize) += 1,
            None => unlabelled += 1,
        }
    }
    let mut text = format!(
        "cells: {}\ncurves: {}\n",
        atlas.cells.len(),
        atlas.curves.len()
    );
    for (k, n) in &counts {
        text.push_str(&format!("label {k}: {n}\n"));
    }
    text.push_str(&format!("unlabelled: {unlabelled}\n"));
    let labels: serde_json::Map<String, Value> = counts
        .iter()
        .map(|(k, n)| (k.to_string(), json!(n)))
        .collect();
    emit(
        ctx,
        &text,
        json!({
            "cells": atlas.cells.len(),
            "curves": atlas.curves.len(),
            "labels": labels,
            "unlabelled": unlabelled,
            "cells_file": cells_path.display().to_string(),
            "curves_file": curves_path.display().to_string(),
        }),
    );
    Ok(())
}

fn conjecture(
    ctx: &Context,
    from: Option<usize>,
    to: Option<usize>,
    out: Option<PathBuf>,
) -> Result<(), Failure> {
    let c = &ctx.config;
    let from: usize = c.require(from, "from")?;
    let to: usize = c.pick(to, "to")?.unwrap_or(from);
    if from > to {
        return Err(Failure::Usage(format!("empty range {from}..={to}")));
    }
    let report = conjecture_a_scan(from..=to)?;
    let out: Option<PathBuf> = c.pick(out, "out")?;
    match &out {
        Some(path) => report.write(create(path)?)?,
        None if ctx.format == Format::Text => {
            let stdout = io::stdout();
            report.write(stdout.lock())?;
            return Ok(());
        }
        None => {}
    }
    let text = format!(
        "roots: {}\ncomparisons: {}\nviolations: {}\nstatus: {}\n",
        report.lines.len(),
        report.comparisons.len(),
        report.violations().len(),
        report.status()
    );
    emit(
        ctx,
        &text,
        json!({
            "roots": report.lines.len(),
            "comparisons": report.comparisons.len(),
            "violations": report.violations().len(),
            "status": report.status(),
        }),
    );
    Ok(())
}

fn multitype(
    ctx: &Context,
    probs: Option<List<f64>>,
    counts: Option<List<usize>>,
    w: Option<f64>,
    v: Option<f64>,
    cap: Option<usize>,
) -> Result<(), Failure> {
    let c = &ctx.config;
    let probs: List<f64> = match probs {
        Some(p) => p,
        None => c
            .raw("probs")
            .ok_or_else(|| Failure::Usage("missing --probs".into()))?
            .parse()
            .map_err(Failure::Usage)?,
    };
    let counts: List<usize> = match counts {
        Some(n) => n,
        None => c
            .raw("counts")
            .ok_or_else(|| Failure::Usage("missing --counts".into()))?
            .parse()
            .map_err(Failure::Usage)?,
    };
    let inst = MultiTypeInstance::with_value(
        probs.0,
        counts.0,
        c.require(w, "W")?,
        c.pick(v, "V")?.unwrap_or(1.0),
    )?;
    let cap = c.pick(cap, "cap")?.unwrap_or(DEFAULT_MULTITYPE_CAP);
    let best = solve_multitype_bruteforce_with_cap(&inst, cap)?;
    let structure = verify_structure(&best.best, inst.types())?;
    let text = format!(
        "allocation: {}\nclasses: {}\nprofit: {}\nmixed_classes: {}\nforest: {}\n",
        best.best,
        best.best.classes(),
        profit6(best.profit),
        structure.mixed_classes,
        structure.forest
    );
    emit(
        ctx,
        &text,
        json!({
            "allocation": best.best.rows(),
            "classes": best.best.classes(),
            "profit": num(best.profit),
            "mixed_classes": structure.mixed_classes,
            "forest": structure.forest,
        }),
    );
    if !structure.holds() {
        return Err(Failure::Invariant(format!(
            "optimum {} breaks the forest structure",
            best.best
        )));
    }
    Ok(())
}

fn verify(ctx: &Context, scale: Option<ScaleArg>) -> Result<(), Failure> {
    let scale = match scale {
        Some(s) => s,
        None => ctx
            .config
            .raw("scale")
            .map(parse_enum)
            .transpose()?
            .unwrap_or(ScaleArg::Full),
    };
    let reports = run_all(
        if scale == ScaleArg::Quick {
            Scale::Quick
        } else {
            Scale::Full
        },
        ctx.seed,
    );
    let text: String = reports.iter().map(|r| format!("{r}\n")).collect();
    emit(ctx, &text, json!(reports));
    let failed: Vec<&str> = reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| r.name.as_str())
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Invariant(format!(
            "failed suites: {}",
            failed.join(", ")
        )))
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let config = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let format = match cli.format {
        Some(f) => f,
        None => config
            .raw("format")
            .map(parse_enum)
            .transpose()?
            .unwrap_or(Format::Text),
    };
    let seed = config.pick(cli.seed, "seed")?.unwrap_or(0);
    let ctx = Context {
        config,
        format,
        seed,
    };
    let result = match cli.command {
        Command::Solve {
            students,
            p,
            teacher_cost,
            unit_value,
            cap,
            tolerance,
        } => solve(
            &ctx,
            SolveArgs {
                students,
                p,
                teacher_cost,
                unit_value,
                cap,
                tolerance,
            },
        ),
        Command::Atlas {
            students,
            p_grid,
            w_grid,
            out,
        } => atlas(&ctx, students, p_grid, w_grid, out),
        Command::Conjecture { from, to, out } => conjecture(&ctx, from, to, out),
        Command::Multitype {
            probs,
            counts,
            teacher_cost,
            unit_value,
            cap,
        } => multitype(&ctx, probs, counts, teacher_cost, unit_value, cap),
        Command::Verify { scale } => verify(&ctx, scale),
    };
    io::stdout()
        .flush()
        .map_err(|e| Failure::Io(e.to_string()))?;
    result
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
