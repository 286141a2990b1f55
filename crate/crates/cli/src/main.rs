use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use varcat::document::{
    run_decide, run_orbit, InputError, OrbitDoc, Overrides, SystemDocument, TraceLevel, EXIT_INPUT_ERROR,
};

#[derive(Parser, Debug)]
#[command(name = "varcat", version, about = "Decide finiteness of categories generated by affine varieties and polynomial maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether the category generated by each system document is finite.
    Decide {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Orbit analysis for a monoid acting on a vertex of the system.
    Orbit {
        file: PathBuf,
        /// Vertex carrying the base point; overrides the document.
        #[arg(long)]
        vertex: Option<String>,
        /// Base point coordinates, comma separated (e.g. `1/2,-3`).
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        /// Acting arrows, comma separated; defaults to every endomorphism arrow of the vertex.
        #[arg(long)]
        generators: Option<String>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// Largest prime tried for local probes [default: 97]
    #[arg(long)]
    prime_bound: Option<u64>,
    /// Maximum number of points in a probe's point set [default: 50000]
    #[arg(long = "pointset-cap")]
    point_set_cap: Option<usize>,
    /// Maximum orbit size explored [default: 10000]
    #[arg(long)]
    orbit_budget: Option<usize>,
    /// Longest word tried by the pair probe [default: 4]
    #[arg(long)]
    word_radius: Option<usize>,
    /// Log level on stderr [default: none]
    #[arg(long, value_enum)]
    trace: Option<Trace>,
    /// Output file; a directory when several documents are given.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Trace {
    None,
    Steps,
    Full,
}

impl From<Trace> for TraceLevel {
    fn from(t: Trace) -> Self {
        match t {
            Trace::None => TraceLevel::None,
            Trace::Steps => TraceLevel::Steps,
            Trace::Full => TraceLevel::Full,
        }
    }
}

impl Common {
    fn overrides(&self) -> Overrides {
        Overrides {
            prime_bound: self.prime_bound,
            point_set_cap: self.point_set_cap,
            orbit_budget: self.orbit_budget,
            word_radius: self.word_radius,
            trace: self.trace.map(Into::into),
        }
    }
}

fn init_logging(level: TraceLevel) {
    let filter = match level {
        TraceLevel::None => log::LevelFilter::Warn,
        TraceLevel::Steps => log::LevelFilter::Debug,
        TraceLevel::Full => log::LevelFilter::Trace,
    };
    env_logger::Builder::new()
        .filter_level(log::LevelFilter::Warn)
        .filter_module("varcat", filter)
        .format_timestamp(None)
        .target(env_logger::Target::Stderr)
        .init();
}

fn trace_of(doc: &SystemDocument, cli: Option<Trace>) -> TraceLevel {
    cli.map(Into::into).or(doc.options.trace_level).unwrap_or_default()
}

fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating a file in {}", dir.display()))?;
    tmp.write_all(text.as_bytes())?;
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

struct Outcome {
    text: Option<String>,
    code: i32,
}

fn decide_one(path: &Path, overrides: &Overrides) -> Outcome {
    let result = SystemDocument::read(path).and_then(|doc| run_decide(&doc, overrides));
    match result {
        Ok(v) => Outcome {
            code: v.exit_code(),
            text: Some(v.to_json()),
        },
        Err(e) => input_error(path, e),
    }
}

fn input_error(path: &Path, e: InputError) -> Outcome {
    eprintln!("{}: {e}", path.display());
    Outcome {
        text: None,
        code: EXIT_INPUT_ERROR,
    }
}

fn output_path(out: &Path, input: &Path, batch: bool) -> PathBuf {
    if batch {
        let stem = input.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        out.join(format!("{stem}.verdict.json"))
    } else {
        out.to_path_buf()
    }
}

fn emit(outcome: &Outcome, input: &Path, out: Option<&Path>, batch: bool) -> Result<()> {
    let Some(text) = &outcome.text else {
        return Ok(());
    };
    match out {
        Some(out) => write_atomic(&output_path(out, input, batch), text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn decide(files: &[PathBuf], common: &Common) -> Result<i32> {
    let level = files
        .first()
        .and_then(|f| SystemDocument::read(f).ok())
        .map(|d| trace_of(&d, common.trace))
        .unwrap_or_else(|| common.trace.map(Into::into).unwrap_or_default());
    init_logging(level);
    let batch = files.len() > 1;
    if let (true, Some(out)) = (batch, &common.out) {
        std::fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    }
    let overrides = common.overrides();
    let outcomes: Vec<Outcome> = std::thread::scope(|s| {
        let handles: Vec<_> = files
            .iter()
            .map(|f| {
                let overrides = &overrides;
                s.spawn(move || decide_one(f, overrides))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| {
                h.join().unwrap_or(Outcome {
                    text: None,
                    code: varcat::document::EXIT_ABORTED,
                })
            })
            .collect()
    });
    let mut code = 0;
    for (f, o) in files.iter().zip(&outcomes) {
        emit(o, f, common.out.as_deref(), batch)?;
        code = code.max(o.code);
    }
    Ok(code)
}

fn split_list(text: &str) -> Vec<String> {
    text.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}

fn orbit(
    file: &Path,
    vertex: Option<String>,
    point: Option<String>,
    generators: Option<String>,
    common: &Common,
) -> Result<i32> {
    let mut doc = match SystemDocument::read(file) {
        Ok(d) => d,
        Err(e) => {
            init_logging(common.trace.map(Into::into).unwrap_or_default());
            return Ok(input_error(file, e).code);
        }
    };
    init_logging(trace_of(&doc, common.trace));
    if vertex.is_some() || point.is_some() || generators.is_some() {
        let base = doc.orbit.take();
        let vertex = vertex
            .or_else(|| base.as_ref().map(|o| o.vertex.clone()))
            .or_else(|| (doc.vertices.len() == 1).then(|| doc.vertices[0].name.clone()));
        let point = point.map(|p| split_list(&p)).or_else(|| base.as_ref().map(|o| o.point.clone()));
        let (Some(vertex), Some(point)) = (vertex, point) else {
            eprintln!("{}: orbit needs a vertex and a base point", file.display());
            return Ok(EXIT_INPUT_ERROR);
        };
        doc.orbit = Some(OrbitDoc {
            vertex,
            point,
            generators: generators.map(|g| split_list(&g)).or_else(|| base.as_ref().and_then(|o| o.generators.clone())),
            components: base.and_then(|o| o.components),
        });
    }
    let outcome = match run_orbit(&doc, &common.overrides()) {
        Ok(r) => Outcome {
            code: r.components.as_ref().map_or(0, |c| c.exit_code()),
            text: Some(r.to_json()),
        },
        Err(e) => input_error(file, e),
    };
    emit(&outcome, file, common.out.as_deref(), false)?;
    Ok(outcome.code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Decide { files, common } => decide(&files, &common),
        Command::Orbit {
            file,
            vertex,
            point,
            generators,
            common,
        } => orbit(&file, vertex, point, generators, &common),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT_ERROR as u8)
        }
    }
}
