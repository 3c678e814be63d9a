//! Command line front end: build frames, run verification suites, audit
//! pole orders, export artifacts.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bell::{bell_matrix_t, bell_matrix_z1};
use crate::error::{Error, Result};
use crate::forge::{FrameBuilder, FrameSpec};
use crate::jet::{DiffBase, JetConfig, JetSpace};
use crate::verify::{self, Report, SuiteSelection};

#[derive(Parser)]
#[command(
    name = "jetframe",
    version,
    about = "Exact frames of slanted vector fields on vertical jet spaces, with mechanical verification"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a frame and write it as JSON.
    Gen(GenArgs),
    /// Run verification suites over a frame (from file or inline instance).
    Verify(VerifyArgs),
    /// Print the pole-order table of a frame.
    Pole(PoleArgs),
    /// Export derived artifacts (Bell matrices, defining equations, frame).
    Export(ExportArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum CaseArg {
    Compact,
    Log,
}

#[derive(Clone, Copy, ValueEnum)]
enum PresetArg {
    Small,
    Medium,
}

#[derive(Args, Clone)]
struct InstanceArgs {
    /// Ambient affine dimension.
    #[arg(long)]
    n: Option<u32>,
    /// Jet order.
    #[arg(long)]
    k: Option<u32>,
    /// Component degrees, comma separated (e.g. `3` or `1,2`).
    #[arg(long, value_delimiter = ',')]
    d: Vec<u32>,
    /// Compact or logarithmic case.
    #[arg(long, value_enum, default_value = "compact")]
    case: CaseArg,
    /// Named instance preset.
    #[arg(long, value_enum)]
    preset: Option<PresetArg>,
}

impl InstanceArgs {
    fn config(&self) -> Result<JetConfig> {
        let (n, k, d, case) = match self.preset {
            Some(PresetArg::Small) => (2, 1, vec![2], CaseArg::Compact),
            Some(PresetArg::Medium) => (2, 2, vec![3], CaseArg::Compact),
            None => {
                let n = self.n.ok_or_else(|| Error::Config("--n required".into()))?;
                let k = self.k.ok_or_else(|| Error::Config("--k required".into()))?;
                if self.d.is_empty() {
                    return Err(Error::Config("--d required".into()));
                }
                (n, k, self.d.clone(), self.case)
            }
        };
        let (cfg, warnings) = match case {
            CaseArg::Compact => JetConfig::compact(n, k, d)?,
            CaseArg::Log => JetConfig::logarithmic(n, k, d)?,
        };
        for w in warnings {
            eprintln!("warning: {w}");
        }
        Ok(cfg)
    }
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Output path for the frame JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Frame JSON produced by `gen` (otherwise built from the instance flags).
    frame: Option<PathBuf>,
    #[command(flatten)]
    instance: InstanceArgs,
    /// Run every suite (default when no `--suite` is given).
    #[arg(long)]
    all: bool,
    /// Run a single suite.
    #[arg(long, value_parser = ["tangency", "rank", "gradients", "pole", "identities"])]
    suite: Option<String>,
    /// Number of sampled vertical points.
    #[arg(long, default_value_t = 3)]
    points: u32,
    /// Base seed; per-point seeds are derived by counter.
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Write the report JSON here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PoleArgs {
    /// Frame JSON produced by `gen` (otherwise built from the instance flags).
    frame: Option<PathBuf>,
    #[command(flatten)]
    instance: InstanceArgs,
    /// Emit the table as JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportWhat {
    Bell,
    Equations,
    Frame,
    /// The geometric/standard substitution tables.
    Geo,
}

#[derive(Args)]
struct ExportArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Which artifact to export.
    #[arg(long, value_enum)]
    what: ExportWhat,
    /// Output path.
    #[arg(long)]
    out: PathBuf,
}

fn load_or_build_frame(path: &Option<PathBuf>, instance: &InstanceArgs) -> Result<FrameSpec> {
    match path {
        Some(p) => {
            let text = fs::read_to_string(p)?;
            Ok(serde_json::from_str(&text)?)
        }
        None => {
            let cfg = instance.config()?;
            let space = JetSpace::new(cfg);
            FrameBuilder::new(&space).assemble()
        }
    }
}

fn write_json<T: serde::Serialize>(path: &PathBuf, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn cmd_gen(args: &GenArgs) -> Result<i32> {
    let cfg = args.instance.config()?;
    let space = JetSpace::new(cfg);
    let frame = FrameBuilder::new(&space).assemble()?;
    println!(
        "frame: {} fields (slanted {}, vertical {}, parameter {}, logarithmic {})",
        frame.fields.len(),
        frame.family_count(crate::forge::Family::Slanted),
        frame.family_count(crate::forge::Family::Vertical),
        frame.family_count(crate::forge::Family::Parameter),
        frame.family_count(crate::forge::Family::Logarithmic),
    );
    println!("expected dimension: {}", verify::expected_dimension(&space.cfg));
    println!("max pole order: {}", frame.max_pole_order());
    if let Some(out) = &args.out {
        write_json(out, &frame)?;
        println!("wrote {}", out.display());
    }
    Ok(0)
}

fn print_report(report: &Report) {
    for v in &report.verdicts {
        println!(
            "tangency {} {}: {}",
            v.tag,
            v.params,
            if v.pass { "pass" } else { "FAIL" }
        );
    }
    for r in &report.rank_results {
        println!(
            "rank seed {}: {} / expected {} : {}",
            r.seed,
            r.rank,
            r.expected,
            if r.rank as u64 == r.expected { "pass" } else { "FAIL" }
        );
    }
    for g in &report.gradient_results {
        println!("{} {}: {}", g.name, g.detail, if g.pass { "pass" } else { "FAIL" });
    }
    for c in &report.negative_controls {
        println!(
            "negative control {}: {}",
            c.name,
            if c.pass { "pass" } else { "FAIL" }
        );
    }
    if let Some(table) = &report.pole_table {
        println!(
            "pole audit: max {} (headline {}), a-degree {}",
            table.max_pole_order,
            table.headline,
            if table.a_degree_ok { "ok" } else { "FAIL" }
        );
    }
    for i in &report.identity_suite {
        println!("identity {}: {}", i.name, if i.pass { "pass" } else { "FAIL" });
    }
    println!("overall: {}", if report.pass { "pass" } else { "FAIL" });
}

fn cmd_verify(args: &VerifyArgs) -> Result<i32> {
    // the identity suite needs no frame: run it straight off an instance
    if args.suite.as_deref() == Some("identities") && args.frame.is_none() {
        let k = args
            .instance
            .k
            .ok_or_else(|| Error::Config("--k required".into()))?;
        let n = args.instance.n.unwrap_or(2);
        let d = if args.instance.d.is_empty() {
            vec![k + 1]
        } else {
            args.instance.d.clone()
        };
        let (cfg, warnings) = JetConfig::compact(n, k, d)?;
        for w in warnings {
            eprintln!("warning: {w}");
        }
        let space = JetSpace::new(cfg);
        let results = verify::identity_suite(&space, args.seed);
        let pass = results.iter().all(|r| r.pass);
        for r in &results {
            println!("identity {}: {}", r.name, if r.pass { "pass" } else { "FAIL" });
        }
        println!("overall: {}", if pass { "pass" } else { "FAIL" });
        return Ok(if pass { 0 } else { 1 });
    }
    let frame = load_or_build_frame(&args.frame, &args.instance)?;
    let space = JetSpace::new(frame.config.clone());
    let suites = match (&args.suite, args.all) {
        (Some(name), _) => {
            let mut s = SuiteSelection::none();
            match name.as_str() {
                "tangency" => s.tangency = true,
                "rank" => s.rank = true,
                "gradients" => s.gradients = true,
                "pole" => s.pole = true,
                "identities" => s.identities = true,
                _ => unreachable!("clap validates"),
            }
            s
        }
        _ => SuiteSelection::all(),
    };
    let report = verify::run_verification(&space, &frame, suites, args.points, args.seed)?;
    print_report(&report);
    if let Some(out) = &args.out {
        write_json(out, &report)?;
        println!("wrote {}", out.display());
    }
    Ok(if report.pass { 0 } else { 1 })
}

fn cmd_pole(args: &PoleArgs) -> Result<i32> {
    let frame = load_or_build_frame(&args.frame, &args.instance)?;
    let table = verify::pole_audit(&frame);
    if args.json {
        println!("{}", serde_json::to_string_pretty(&table)?);
    } else {
        println!("{:<10} {:<40} {:>8} {:>8} {:>9} {:>8}", "tag", "params", "computed", "nominal", "predicted", "a-deg");
        for row in &table.rows {
            println!(
                "{:<10} {:<40} {:>8} {:>8} {:>9} {:>8}",
                row.tag,
                row.params.to_string(),
                row.computed,
                row.nominal.map_or("-".into(), |v| v.to_string()),
                row.predicted.map_or("-".into(), |v| v.to_string()),
                row.a_degree,
            );
        }
        println!(
            "max pole order {} at {} (headline {})",
            table.max_pole_order, table.max_tag, table.headline
        );
    }
    Ok(0)
}

fn cmd_export(args: &ExportArgs) -> Result<i32> {
    let cfg = args.instance.config()?;
    match args.what {
        ExportWhat::Bell => {
            let value = serde_json::json!({
                "config": cfg,
                "bell_z1": bell_matrix_z1(&cfg),
                "bell_t": bell_matrix_t(&cfg),
            });
            write_json(&args.out, &value)?;
        }
        ExportWhat::Equations => {
            let space = JetSpace::new(cfg.clone());
            let dt = space.defining_equations(DiffBase::Dt);
            let dz1 = space.defining_equations(DiffBase::Dz1);
            let text: Vec<Vec<String>> = dt
                .iter()
                .map(|eqs| eqs.iter().map(|e| e.to_string()).collect())
                .collect();
            let value = serde_json::json!({
                "config": cfg,
                "dt_system": dt,
                "dz1_system": dz1,
                "dt_system_text": text,
            });
            write_json(&args.out, &value)?;
        }
        ExportWhat::Frame => {
            let space = JetSpace::new(cfg);
            let frame = FrameBuilder::new(&space).assemble()?;
            write_json(&args.out, &frame)?;
        }
        ExportWhat::Geo => {
            let tables = |m: std::collections::BTreeMap<crate::var::VarId, crate::poly::FracPoly>| {
                m.into_iter().collect::<Vec<_>>()
            };
            let value = serde_json::json!({
                "config": cfg,
                "std_from_geo": tables(crate::bell::std_from_geo(&cfg)),
                "geo_from_std": tables(crate::bell::geo_from_std(&cfg)),
            });
            write_json(&args.out, &value)?;
        }
    }
    println!("wrote {}", args.out.display());
    Ok(0)
}

/// Entry point used by the thin binary; returns the process exit code.
pub fn run() -> i32 {
    if let Ok(threads) = std::env::var("JETFRAME_THREADS") {
        if let Ok(nt) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(nt).build_global();
        }
    }
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Pole(args) => cmd_pole(args),
        Command::Export(args) => cmd_export(args),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            2
        }
    }
}
