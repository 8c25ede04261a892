use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use kring::io::generate;
use kring::io::{parse_spec, run, Command, InputError, Overrides, Report, RunOptions, SpecDocument};
use kring::{SignConvention, TermOrder};

const INPUT_ERROR: u8 = 4;

#[derive(Parser)]
#[command(name = "kring", version, about = "K-rings of quasitoric manifolds from characteristic data")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the nerve and nonsingularity of the characteristic matrix.
    Validate(RunArgs),
    /// Find a shelling and report h-vector and Betti numbers.
    Shell(RunArgs),
    /// Compute the K-ring presentation.
    Present(RunArgs),
    /// Compute the cohomology presentation.
    Cohomology(RunArgs),
    /// Run every stage.
    Report(RunArgs),
    /// Print a built-in example as an input document.
    Generate {
        #[command(subcommand)]
        example: Example,
        /// Write to this file instead of stdout.
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct RunArgs {
    /// Input documents (`-` reads stdin).
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// Term order: degrevlex, deglex or lex.
    #[arg(long, value_parser = parse_order)]
    order: Option<TermOrder>,
    /// Sign convention of the linear relations: minus (1 - v) or plus (1 + v).
    #[arg(long, value_parser = parse_convention)]
    convention: Option<SignConvention>,
    /// Extra covector, comma separated; repeatable.
    #[arg(long = "extra-t", value_name = "T", allow_hyphen_values = true, value_parser = parse_row)]
    extra_t: Vec<Vec<i64>>,
    /// Degree bound for the truncated-quotient fallback.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    bound: Option<u64>,
    /// Output file, or directory when several inputs are given.
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Include per-stage timings (makes output nondeterministic).
    #[arg(long)]
    timings: bool,
}

#[derive(Subcommand)]
enum Example {
    /// Boundary of the n-simplex (projective space).
    Simplex { n: usize },
    /// Hirzebruch surface.
    Hirzebruch {
        #[arg(allow_hyphen_values = true)]
        k: i64,
    },
    /// Bott tower from an upper-triangular matrix given as comma-separated rows.
    Bott {
        #[arg(required = true, allow_hyphen_values = true, value_parser = parse_row)]
        rows: Vec<Vec<i64>>,
    },
    /// Product of two input documents.
    Product { first: PathBuf, second: PathBuf },
}

fn parse_order(s: &str) -> Result<TermOrder, String> {
    s.parse()
}

fn parse_convention(s: &str) -> Result<SignConvention, String> {
    s.parse()
}

fn parse_row(s: &str) -> Result<Vec<i64>, String> {
    s.split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|e| format!("`{x}`: {e}")))
        .collect()
}

fn read_input(path: &Path) -> Result<String, InputError> {
    let io_err = |e: io::Error| InputError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    };
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(io_err)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(io_err)
    }
}

fn load(path: &Path) -> Result<SpecDocument, InputError> {
    parse_spec(&read_input(path)?)
}

/// Writes via a temporary file in the same directory, then renames.
fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating file in {}", dir.display()))?;
    tmp.write_all(contents.as_bytes())?;
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(),
    }
}

fn process(command: Command, path: &Path, opts: &RunOptions) -> Result<Report, InputError> {
    run(command, &load(path)?, opts)
}

fn output_path(args: &RunArgs, input: &Path) -> Option<PathBuf> {
    let out = args.output.as_ref()?;
    if args.inputs.len() == 1 {
        return Some(out.clone());
    }
    let ext = match args.format {
        Format::Text => "txt",
        Format::Json => "json",
    };
    let stem = input.file_stem().map_or_else(|| "stdin".into(), |s| s.to_string_lossy().into_owned());
    Some(out.join(format!("{stem}.{ext}")))
}

fn run_batch(command: Command, args: &RunArgs) -> Result<u8> {
    let opts = RunOptions {
        overrides: Overrides {
            order: args.order,
            convention: args.convention,
            extra_t: args.extra_t.clone(),
            bound: args.bound.map(|b| b as usize),
        },
        timings: args.timings,
    };
    if args.inputs.len() > 1 {
        if let Some(dir) = &args.output {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        }
    }

    let results: Vec<Mutex<Option<Result<Report, InputError>>>> =
        args.inputs.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(args.inputs.len());
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(path) = args.inputs.get(i) else { break };
                let r = process(command, path, &opts);
                *results[i].lock().expect("result slot") = Some(r);
            });
        }
    });

    let mut code = 0;
    let mut stdout = io::stdout().lock();
    let many = args.inputs.len() > 1;
    for (path, slot) in args.inputs.iter().zip(results) {
        let result = slot.into_inner().expect("result slot").expect("every input processed");
        match result {
            Ok(report) => {
                code = code.max(report.exit_code as u8);
                let text = render(&report, args.format);
                match output_path(args, path) {
                    Some(out) => write_atomic(&out, &text)?,
                    None => {
                        if many && matches!(args.format, Format::Text) {
                            writeln!(stdout, "== {} ==", path.display())?;
                        }
                        stdout.write_all(text.as_bytes())?;
                    }
                }
            }
            Err(e) => {
                code = code.max(INPUT_ERROR);
                eprintln!("{}: {e}", path.display());
            }
        }
    }
    Ok(code)
}

fn generate_example(example: &Example) -> Result<SpecDocument> {
    Ok(match example {
        Example::Simplex { n } => generate::simplex(*n)?,
        Example::Hirzebruch { k } => generate::hirzebruch(*k),
        Example::Bott { rows } => generate::bott(rows)?,
        Example::Product { first, second } => {
            let a = load(first).with_context(|| first.display().to_string())?;
            let b = load(second).with_context(|| second.display().to_string())?;
            generate::product(&a, &b)?
        }
    })
}

fn main() -> ExitCode {
    // Usage errors are input errors; clap's own exit status 2 would read as non-conforming.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(INPUT_ERROR)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match &cli.command {
        Cmd::Validate(a) => run_batch(Command::Validate, a),
        Cmd::Shell(a) => run_batch(Command::Shell, a),
        Cmd::Present(a) => run_batch(Command::Present, a),
        Cmd::Cohomology(a) => run_batch(Command::Cohomology, a),
        Cmd::Report(a) => run_batch(Command::Report, a),
        Cmd::Generate { example, output } => generate_example(example).and_then(|doc| {
            let text = doc.to_toml();
            match output {
                Some(p) => write_atomic(p, &text)?,
                None => print!("{text}"),
            }
            Ok(0)
        }),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(INPUT_ERROR)
        }
    }
}
