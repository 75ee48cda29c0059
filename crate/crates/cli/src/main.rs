mod export;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ssdesign::jobs::{self, Built, JobConfig, JobError, Output};
use ssdesign::verify::EXCLUSION_RADIUS;

use export::{svg_plot, write_csv, Series};

#[derive(Parser)]
#[command(name = "ssdesign", version, about = "Design and check complex potentials with prescribed spectral singularities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample U and the base functions on the grid.
    Build(JobArgs),
    /// Scattering coefficients over the k-scan.
    Scan(JobArgs),
    /// Locate spectral singularities and compare with the prescribed set.
    FindSs(JobArgs),
    /// Run the verification suite.
    Verify(JobArgs),
    /// Print a preset as a JSON config, or list the preset names.
    Presets { name: Option<String> },
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["preset", "config"])))]
struct JobArgs {
    /// Compiled-in parameter set (see `ssdesign presets`).
    #[arg(long)]
    preset: Option<String>,
    /// JSON job config.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Half-width of the computational window.
    #[arg(long = "L")]
    l: Option<f64>,
    /// SS acceptance threshold on |m22|.
    #[arg(long)]
    threshold: Option<f64>,
    /// Also write an SVG plot of the spectrum.
    #[arg(long)]
    svg: bool,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<JobError> for Failure {
    fn from(e: JobError) -> Self {
        Failure { code: e.exit_code() as u8, message: format!("{}: {e}", e.name()) }
    }
}

fn io_failure(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure { code: 1, message: format!("{}: {e}", path.display()) }
}

fn load(args: &JobArgs) -> Result<JobConfig, Failure> {
    let mut cfg = match (&args.preset, &args.config) {
        (Some(name), _) => jobs::preset(name).ok_or_else(|| JobError::Config(format!("unknown preset {name:?}")))?,
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|e| JobError::Config(format!("{}: {e}", path.display())))?;
            JobConfig::from_json(&text)?
        }
        (None, None) => unreachable!("clap enforces a source"),
    };
    if let Some(l) = args.l {
        cfg.truncation.l = Some(l);
    }
    if let Some(t) = args.threshold {
        cfg.threshold = Some(t);
    }
    cfg.validate()?;
    fs::create_dir_all(&args.out).map_err(|e| io_failure(&args.out, e))?;
    Ok(cfg)
}

fn stem(cfg: &JobConfig) -> String {
    cfg.name.clone().unwrap_or_else(|| cfg.construction.kind().to_string())
}

fn meta(built: &Built) -> Vec<(&'static str, String)> {
    vec![
        ("job", stem(&built.config)),
        ("construction", serde_json::to_string(&built.config.construction).unwrap_or_default()),
        ("L", built.trunc.l.to_string()),
    ]
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| io_failure(path, e))?;
    fs::write(path, text + "\n").map_err(|e| io_failure(path, e))
}

fn cmd_build(args: &JobArgs) -> Result<(), Failure> {
    let cfg = load(args)?;
    let built = Built::new(&cfg)?;
    let u = &built.constructed.potential;
    let grid = cfg.grid()?;
    let name = stem(&cfg);
    let singular: Vec<f64> = u.profile.singular_points().iter().map(|s| s.x).collect();
    let mut rows = Vec::new();
    for x in grid.points_avoiding(&singular, EXCLUSION_RADIUS) {
        let v = u.eval(x).map_err(JobError::from)?;
        rows.push(vec![x, v.re, v.im]);
    }
    let path = args.out.join(format!("{name}_potential.csv"));
    write_csv(&path, "potential", &meta(&built), &["x", "re_u", "im_u"], &rows).map_err(|e| io_failure(&path, e))?;
    println!("{}", path.display());
    for (j, w) in u.provenance.iter().enumerate() {
        let mut rows = Vec::new();
        for x in grid.points_avoiding(&w.nodes(), EXCLUSION_RADIUS) {
            let v = w.eval(x).map_err(JobError::from)?;
            rows.push(vec![x, v.re, v.im]);
        }
        let mut m = meta(&built);
        m.push(("k", w.k.to_string()));
        let path = args.out.join(format!("{name}_w{}.csv", j + 1));
        write_csv(&path, "base", &m, &["x", "re_w", "im_w"], &rows).map_err(|e| io_failure(&path, e))?;
        println!("{}", path.display());
    }
    Ok(())
}

fn cmd_scan(args: &JobArgs) -> Result<(), Failure> {
    let cfg = load(args)?;
    let built = Built::new(&cfg)?;
    let points = jobs::scan(&built)?;
    let name = stem(&cfg);
    let rows: Vec<Vec<f64>> = points
        .iter()
        .map(|p| {
            let c = &p.coefficients;
            vec![p.k, c.t.norm(), c.rl.norm(), c.rr.norm(), p.matrix.m22.re, p.matrix.m22.im]
        })
        .collect();
    let path = args.out.join(format!("{name}_spectrum.csv"));
    write_csv(&path, "spectrum", &meta(&built), &["k", "abs_t", "abs_rl", "abs_rr", "re_m22", "im_m22"], &rows)
        .map_err(|e| io_failure(&path, e))?;
    println!("{}", path.display());
    if args.svg || cfg.outputs.contains(&Output::Svg) {
        let series = [
            Series { label: "|T|", color: "black", points: rows.iter().map(|r| (r[0], r[1])).collect() },
            Series { label: "|R^L|", color: "crimson", points: rows.iter().map(|r| (r[0], r[2])).collect() },
            Series { label: "|R^R|", color: "royalblue", points: rows.iter().map(|r| (r[0], r[3])).collect() },
        ];
        let svg = svg_plot(&format!("{name}: scattering moduli (log scale)"), "k", &series, true);
        let path = args.out.join(format!("{name}_spectrum.svg"));
        fs::write(&path, svg).map_err(|e| io_failure(&path, e))?;
        println!("{}", path.display());
    }
    Ok(())
}

fn cmd_find_ss(args: &JobArgs) -> Result<(), Failure> {
    let cfg = load(args)?;
    let built = Built::new(&cfg)?;
    let report = jobs::find_ss(&built)?;
    let path = args.out.join(format!("{}_ss.json", stem(&cfg)));
    write_json(&path, &report)?;
    println!("{}", serde_json::to_string_pretty(&report.found).unwrap_or_default());
    if !report.recovered {
        return Err(Failure {
            code: 5,
            message: format!(
                "prescribed SS set not recovered: prescribed {:?}, found {:?}",
                report.prescribed.iter().map(|p| (p.k, p.order)).collect::<Vec<_>>(),
                report.found.iter().map(|s| (s.k0, s.order)).collect::<Vec<_>>()
            ),
        });
    }
    Ok(())
}

fn cmd_verify(args: &JobArgs) -> Result<(), Failure> {
    let cfg = load(args)?;
    let built = Built::new(&cfg)?;
    let out = jobs::verify(&built)?;
    let path = args.out.join(format!("{}_verify.json", stem(&cfg)));
    write_json(&path, &out)?;
    for c in &out.report.checks {
        let status = if c.pass { "pass" } else if c.informational { "info" } else { "FAIL" };
        println!("{status:4}  {:<32} {:>11.3e} <= {:.1e}  ({})", c.name, c.residual, c.tolerance, c.domain);
    }
    if !out.report.all_pass() {
        let names: Vec<&str> = out.report.failures().map(|c| c.name.as_str()).collect();
        return Err(Failure { code: 6, message: format!("verification failed: {}", names.join(", ")) });
    }
    Ok(())
}

fn cmd_presets(name: Option<&str>) -> Result<(), Failure> {
    match name {
        None => {
            for n in jobs::PRESET_NAMES {
                println!("{n}");
            }
            Ok(())
        }
        Some(n) => {
            let cfg = jobs::preset(n).ok_or_else(|| JobError::Config(format!("unknown preset {n:?}")))?;
            println!("{}", cfg.to_json());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Build(a) => cmd_build(a),
        Command::Scan(a) => cmd_scan(a),
        Command::FindSs(a) => cmd_find_ss(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Presets { name } => cmd_presets(name.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
