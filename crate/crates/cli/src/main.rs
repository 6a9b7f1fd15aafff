//! `cagekit`: build, verify and sweep biregular girth-5 cage constructions.
//!
//! Exit status: 0 when every asserted property holds, 1 when one fails,
//! 2 on usage, parse or construction errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use cagekit::io::{self, Format};
use cagekit::sweep::{certify_construction, hypothesis_lines, run_sweep};
use cagekit::verify::certify;
use cagekit::{build, FamilyId, FamilyKind};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "cagekit",
    version,
    about = "Biregular girth-5 cages from finite-field incidence graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build one family instance, write it and its certificate.
    Build {
        /// bq, aq, rq, gt, r2rm5, cage56 or cage67
        #[arg(long, value_parser = parse_family)]
        family: FamilyKind,
        #[arg(long)]
        q: u32,
        /// Number of stars beyond L_inf (gt only).
        #[arg(long)]
        t: Option<u32>,
        /// Graph output path; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Defaults to the extension of --out, else g6.
        #[arg(long)]
        format: Option<GraphFormat>,
        /// Certificate JSON output path.
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Certify a graph file against a degree set and girth.
    Verify {
        file: PathBuf,
        /// Comma-separated degree set, e.g. 8,11.
        #[arg(long, value_delimiter = ',', required = true)]
        degrees: Vec<usize>,
        #[arg(long)]
        girth: usize,
        /// Also require the order to equal the lower bound.
        #[arg(long)]
        minimal: bool,
        /// Inferred from the file extension if omitted.
        #[arg(long)]
        format: Option<GraphFormat>,
        /// Label sidecar for graph6 input; `<file stem>.labels` is used if present.
        #[arg(long)]
        labels: Option<PathBuf>,
    },
    /// Build and certify every admissible q in a range.
    Sweep {
        #[arg(long, value_parser = parse_family)]
        family: FamilyKind,
        #[arg(long)]
        q_min: u32,
        #[arg(long)]
        q_max: u32,
        /// Worker threads; defaults to the number of CPUs.
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, value_enum, default_value_t = ReportFormat::Table)]
        format: ReportFormat,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    G6,
    Dot,
    Csv,
}

impl From<GraphFormat> for Format {
    fn from(f: GraphFormat) -> Self {
        match f {
            GraphFormat::G6 => Format::Graph6,
            GraphFormat::Dot => Format::Dot,
            GraphFormat::Csv => Format::Csv,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Table,
    Csv,
    Json,
}

fn parse_family(s: &str) -> Result<FamilyKind, String> {
    s.parse()
        .map_err(|e: String| format!("{e}; expected one of bq, aq, rq, gt, r2rm5, cage56, cage67"))
}

fn format_of(path: &Path) -> Option<Format> {
    path.extension()
        .and_then(|e| e.to_str())
        .and_then(Format::from_extension)
}

fn sniff(text: &str) -> Format {
    let head = text.trim_start();
    if head.starts_with("graph") || head.starts_with("strict") {
        Format::Dot
    } else if head.starts_with('#') || head.contains(',') {
        Format::Csv
    } else {
        Format::Graph6
    }
}

fn write(path: &Path, body: &str) -> Result<()> {
    fs::write(path, body).with_context(|| format!("writing {}", path.display()))
}

fn cmd_build(
    family: FamilyKind,
    q: u32,
    t: Option<u32>,
    out: Option<PathBuf>,
    format: Option<GraphFormat>,
    cert_path: Option<PathBuf>,
) -> Result<ExitCode> {
    if t.is_some() && family != FamilyKind::Gt {
        bail!("--t only applies to --family gt");
    }
    if family == FamilyKind::Gt && t.is_none() {
        bail!("--family gt needs --t");
    }
    let id = FamilyId::new(family.with_t(t.unwrap_or(0)), q);
    let construction = build(id).with_context(|| format!("cannot build {id}"))?;
    let cert = certify_construction(&construction);

    let format = format
        .map(Format::from)
        .or_else(|| out.as_deref().and_then(format_of))
        .unwrap_or(Format::Graph6);
    let (body, sidecar) = io::export(&construction.graph, format, &id.to_string());
    match &out {
        Some(path) => {
            write(path, &body)?;
            if let Some(labels) = sidecar {
                write(&path.with_extension("labels"), &labels)?;
            }
        }
        None => print!("{body}"),
    }
    if let Some(path) = &cert_path {
        write(path, &io::certificate_to_json(&cert))?;
    }
    eprintln!(
        "{id}: order {}, girth {}, degrees {:?}, bound {}, minimal {}",
        cert.order,
        cert.girth.map_or("none".into(), |g| g.to_string()),
        cert.degree_set,
        cert.downs_bound.map_or("none".into(), |b| b.to_string()),
        cert.minimal
    );
    for line in hypothesis_lines(&construction) {
        eprintln!("  {line}");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(
    file: &Path,
    degrees: &[usize],
    girth: usize,
    minimal: bool,
    format: Option<GraphFormat>,
    labels: Option<PathBuf>,
) -> Result<ExitCode> {
    let text = fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let format = format
        .map(Format::from)
        .or_else(|| format_of(file))
        .unwrap_or_else(|| sniff(&text));
    let sidecar_path = labels.or_else(|| {
        let p = file.with_extension("labels");
        (format == Format::Graph6 && p.is_file()).then_some(p)
    });
    let sidecar = match &sidecar_path {
        Some(p) => Some(fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?),
        None => None,
    };
    let imported =
        io::import(&text, format, sidecar.as_deref()).with_context(|| format!("parsing {}", file.display()))?;

    let mut cert = certify(&imported.graph, degrees, girth);
    if let Some(names) = imported.label_names() {
        cert = cert.with_labels(&names);
    }
    if let Some(family) = imported.family {
        cert = cert.with_family(family);
    }
    println!("{}", io::certificate_to_json(&cert));
    let holds = cert.degree_set_matches() && cert.girth_matches() && (!minimal || cert.bound_attained());
    Ok(if holds { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_sweep(
    family: FamilyKind,
    q_min: u32,
    q_max: u32,
    jobs: Option<usize>,
    format: ReportFormat,
) -> Result<ExitCode> {
    if jobs == Some(0) {
        bail!("--jobs must be at least 1");
    }
    let report = run_sweep(family, q_min, q_max, jobs)?;
    match format {
        ReportFormat::Table => print!("{}", report.to_table()),
        ReportFormat::Csv => print!("{}", report.to_csv()),
        ReportFormat::Json => println!("{}", report.to_json()),
    }
    for s in &report.skipped {
        if !matches!(format, ReportFormat::Table) {
            eprintln!("skipped q={}: {}", s.q, s.reason);
        }
    }
    Ok(if report.all_minimal() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Build {
            family,
            q,
            t,
            out,
            format,
            cert,
        } => cmd_build(family, q, t, out, format, cert),
        Command::Verify {
            file,
            degrees,
            girth,
            minimal,
            format,
            labels,
        } => cmd_verify(&file, &degrees, girth, minimal, format, labels),
        Command::Sweep {
            family,
            q_min,
            q_max,
            jobs,
            format,
        } => cmd_sweep(family, q_min, q_max, jobs, format),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e:#}");
        ExitCode::from(2)
    })
}
