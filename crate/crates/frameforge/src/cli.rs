//! Argument parsing and the top-level run loop.
use std::ffi::OsString;
use std::io::BufRead;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, ValueEnum};

use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::pipeline::{self, Context};
use crate::report::{Report, SCHEMA_VERSION};

pub const REPORT_FILE: &str = "report.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Frame,
    Congruence,
    Maxwell,
    Energy,
    All,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Frame => "frame",
            Command::Congruence => "congruence",
            Command::Maxwell => "maxwell",
            Command::Energy => "energy",
            Command::All => "all",
        }
    }
}

/// Frenet frames, frame congruences and their electromagnetic fields in 3-dimensional space forms.
#[derive(Debug, Parser)]
#[command(name = "frameforge", version)]
pub struct Args {
    #[arg(value_enum)]
    pub command: Command,
    /// TOML run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Input CSV: a curve for frame/energy, a congruence for congruence, an electric field for maxwell.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Use the literal frame-matrix and field expressions instead of the corrected ones.
    #[arg(long)]
    pub strict_paper: bool,
    /// Synthesize an electric field instead of reading one.
    #[arg(long)]
    pub synthesize: bool,
    /// Simpson panels for the energy integrals.
    #[arg(long)]
    pub panels: Option<usize>,
    /// Finite-difference order (2 or 4).
    #[arg(long)]
    pub fd_order: Option<usize>,
    /// Gate tolerance for the Frenet, identity and Maxwell residuals.
    #[arg(long)]
    pub tol: Option<f64>,
}

/// True when the file starts with a `#` preamble line, i.e. is a congruence CSV.
fn looks_like_congruence(path: &Path) -> Result<bool> {
    let f = std::fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut line = String::new();
    std::io::BufReader::new(f).read_line(&mut line).map_err(|e| CliError::io(path, e))?;
    Ok(line.trim_start().starts_with('#'))
}

pub fn resolve_config(args: &Args) -> Result<RunConfig> {
    let mut cfg = match &args.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(p) = &args.input {
        match args.command {
            Command::Frame | Command::Energy => cfg.frame.input = Some(p.clone()),
            Command::Congruence => cfg.congruence.input = Some(p.clone()),
            Command::Maxwell => cfg.maxwell.field = Some(p.clone()),
            Command::All => {
                if looks_like_congruence(p)? {
                    cfg.congruence.input = Some(p.clone());
                } else {
                    cfg.frame.input = Some(p.clone());
                }
            }
        }
    }
    if let Some(o) = &args.out {
        cfg.output.dir = o.clone();
    }
    cfg.numerics.strict_paper |= args.strict_paper;
    cfg.maxwell.synthesize |= args.synthesize;
    if let Some(n) = args.panels {
        cfg.energy.panels = n;
    }
    if let Some(o) = args.fd_order {
        cfg.numerics.fd_order = o;
    }
    if let Some(t) = args.tol {
        let g = &mut cfg.tolerances;
        g.frenet = t;
        g.frenet_fd = t;
        g.identity = t;
        g.maxwell = t;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Runs `command` and writes `report.json` into the output directory.
pub fn run(command: Command, cfg: RunConfig) -> Result<Report> {
    let out = cfg.output.dir.clone();
    std::fs::create_dir_all(&out).map_err(|e| CliError::io(&out, e))?;
    let ctx = Context::new(cfg)?;
    let mut flags = Vec::new();
    let mut report = Report {
        schema_version: SCHEMA_VERSION,
        generated_at: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
        command: command.name().into(),
        strict_paper: ctx.cfg.numerics.strict_paper,
        frame: None,
        congruence: None,
        maxwell: None,
        energies: None,
        flags: Vec::new(),
        passed: true,
    };
    let all = command == Command::All;
    if all || command == Command::Frame {
        let f = pipeline::cmd_frame(&ctx, &out, &mut flags)?;
        report.passed &= f.frenet_residual.pass && f.orthonormality <= f.frenet_residual.tolerance;
        report.frame = Some(f);
    }
    if command != Command::Frame {
        let c = pipeline::build_congruence(&ctx)?;
        if all || command == Command::Congruence {
            let r = pipeline::cmd_congruence(&ctx, &c, &mut flags)?;
            report.passed &= r.pass;
            report.congruence = Some(r);
        }
        if all || command == Command::Maxwell {
            if all && !ctx.cfg.maxwell.synthesize && ctx.cfg.maxwell.field.is_none() {
                flags.push(crate::report::Flag::new("maxwell-skipped", "no field given and synthesis disabled"));
            } else {
                let r = pipeline::cmd_maxwell(&ctx, &c, &mut flags)?;
                report.passed &= r.pass;
                report.maxwell = Some(r);
            }
        }
        if all || command == Command::Energy {
            report.energies = Some(pipeline::cmd_energy(&ctx, &c, &mut flags)?);
        }
    }
    report.flags = flags;
    let path = out.join(REPORT_FILE);
    let text = serde_json::to_string_pretty(&report).map_err(|e| CliError::Validation(e.to_string()))?;
    std::fs::write(&path, text + "\n").map_err(|e| CliError::io(&path, e))?;
    Ok(report)
}

/// Parses `args`, runs, and returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = resolve_config(&args).and_then(|cfg| {
        let out = cfg.output.dir.clone();
        let report = run(args.command, cfg)?;
        if report.passed {
            Ok(out)
        } else {
            Err(CliError::Suite(format!("see {}", out.join(REPORT_FILE).display())))
        }
    });
    match result {
        Ok(out) => {
            println!("{}", out.join(REPORT_FILE).display());
            0
        }
        Err(e) => {
            eprintln!("frameforge: {e}");
            e.exit_code()
        }
    }
}
