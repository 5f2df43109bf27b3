//! The `fsl` command line.
//!
//! Exit codes: 0 when everything checked holds, 1 when a law or golden
//! comparison fails, 2 on unreadable or invalid input (including inputs whose
//! constructions exceed the carrier cap).

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::adjunctions::{check_triangles, Adjunction};
use crate::constructions::{frame_operator, hom_frame, tensor};
use crate::format::{read_structure, render_structure, FormatError, Structure};
use crate::frames::{make_frame, Frame};
use crate::lattice::{SupLattice, CARRIER_CAP_ENV};
use crate::laws::{replay, run_suite, Suite};
use crate::morphisms::FSupLattice;
use crate::table::{Table, TableArtifact};
use crate::worked::run_example;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "fsl",
    version,
    about = "Finite sup-semilattices with tense operators, frames and their adjunctions",
    after_help = format!("The carrier cap (default 4096) can be overridden with {CARRIER_CAP_ENV}.")
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate a structure file.
    Validate { file: PathBuf },
    /// Build L^J (power), J⊗H (tensor) or J[H,L] (homframe) and write it out.
    Compute {
        construction: Construction,
        /// Input structure files, in any order.
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Directory for the structure file and its table.
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Check the triangle identities of an adjunction, or run the random law suites.
    Check {
        target: CheckTarget,
        /// Input structure files (a frame, an fss and a lattice, in any order).
        files: Vec<PathBuf>,
        /// Suite seed and instance count for `check laws`.
        #[arg(long, num_args = 2, value_names = ["SEED", "COUNT"])]
        random: Option<Vec<u64>>,
        /// Re-run the single instance with this seed.
        #[arg(long, value_name = "SEED", conflicts_with = "random")]
        replay: Option<u64>,
    },
    /// Recompute a worked example and compare it with its golden tables.
    Example {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
        number: u8,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Construction {
    Power,
    Tensor,
    Homframe,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckTarget {
    #[value(name = "I")]
    I,
    #[value(name = "II")]
    II,
    #[value(name = "III")]
    III,
    Laws,
}

/// Why a command could not run.
#[derive(Debug)]
enum Failure {
    Input(String),
    /// The reader of standard output went away; nothing more to say.
    Closed,
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<crate::error::Error> for Failure {
    fn from(e: crate::error::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            return Failure::Closed;
        }
        Failure::Input(e.to_string())
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli.command, out) {
        Ok(code) => code,
        Err(Failure::Input(message)) => {
            let _ = writeln!(err, "error: {message}");
            EXIT_INPUT
        }
        Err(Failure::Closed) => EXIT_OK,
    }
}

fn execute(command: &Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Validate { file } => {
            let s = load(file)?;
            writeln!(out, "{}: valid {}", file.display(), s.summary())?;
            Ok(EXIT_OK)
        }
        Command::Compute {
            construction,
            files,
            output,
        } => compute(*construction, files, output, out),
        Command::Check {
            target,
            files,
            random,
            replay: seed,
        } => match target {
            CheckTarget::Laws => check_laws(random.as_deref(), *seed, out),
            CheckTarget::I => check_adjunction(Adjunction::I, files, out),
            CheckTarget::II => check_adjunction(Adjunction::II, files, out),
            CheckTarget::III => check_adjunction(Adjunction::III, files, out),
        },
        Command::Example { number } => {
            let run = run_example(*number as usize)?;
            out.write_all(run.render().as_bytes())?;
            Ok(if run.matches() { EXIT_OK } else { EXIT_FAILED })
        }
    }
}

fn load(path: &Path) -> Result<Structure, Failure> {
    read_structure(path).map_err(|e| match e {
        FormatError::Io { .. } => Failure::Input(e.to_string()),
        other => Failure::Input(format!("{}: {other}", path.display())),
    })
}

/// The inputs sorted by kind; each kind may appear at most once.
#[derive(Default)]
struct Inputs {
    frame: Option<Frame>,
    fss: Option<FSupLattice>,
    lattice: Option<SupLattice>,
}

fn sort_inputs(files: &[PathBuf]) -> Result<Inputs, Failure> {
    let mut inputs = Inputs::default();
    for path in files {
        let duplicate = match load(path)? {
            Structure::Frame(j) => inputs.frame.replace(j).is_some(),
            Structure::Fss(h) => inputs.fss.replace(h).is_some(),
            Structure::Lattice(l) => inputs.lattice.replace(l).is_some(),
        };
        if duplicate {
            return Err(Failure::Input(format!(
                "{}: a second structure of the same kind was given",
                path.display()
            )));
        }
    }
    Ok(inputs)
}

fn need<T>(value: Option<T>, what: &str, construction: &str) -> Result<T, Failure> {
    value.ok_or_else(|| Failure::Input(format!("{construction} needs a {what} file")))
}

fn write_outputs(dir: &Path, name: &str, structure: &Structure, tables: &TableArtifact, out: &mut dyn Write) -> Result<(), Failure> {
    fs::create_dir_all(dir)?;
    let json = dir.join(format!("{name}.json"));
    let txt = dir.join(format!("{name}.txt"));
    fs::write(&json, render_structure(structure))?;
    let mut text = tables.render();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    fs::write(&txt, &text)?;
    out.write_all(text.as_bytes())?;
    writeln!(out, "\nwrote {} and {}", json.display(), txt.display())?;
    Ok(())
}

fn compute(construction: Construction, files: &[PathBuf], dir: &Path, out: &mut dyn Write) -> Result<i32, Failure> {
    let inputs = sort_inputs(files)?;
    match construction {
        Construction::Power => {
            let l = need(inputs.lattice, "lattice", "power")?;
            let j = need(inputs.frame, "frame", "power")?;
            let power = frame_operator(&l, &j)?;
            let p = power.lattice();
            let columns = std::iter::once("F^J".to_string()).chain(j.nodes().iter().cloned()).collect();
            let mut t = Table::new("L^J", "x", columns);
            for x in p.elements() {
                let cells = std::iter::once(p.label(power.fss().f(x)).to_string())
                    .chain(power.tuple(x).iter().map(|y| l.label(y).to_string()))
                    .collect();
                t.push(p.label(x), cells);
            }
            let tables = TableArtifact { tables: vec![t] };
            write_outputs(dir, "power", &Structure::Fss(power.fss().clone()), &tables, out)?;
        }
        Construction::Tensor => {
            let j = need(inputs.frame, "frame", "tensor")?;
            let h = need(inputs.fss, "fss", "tensor")?;
            let q = tensor(&j, &h)?;
            let ql = q.lattice();
            let mut t = Table::new("J⊗H", "class", vec!["covers".into()]);
            for v in ql.elements() {
                let below: Vec<&str> = ql.lower_covers(v).into_iter().map(|u| ql.label(u)).collect();
                let cell = if below.is_empty() { "-".to_string() } else { below.join(",") };
                t.push(ql.label(v), vec![cell]);
            }
            let tables = TableArtifact { tables: vec![t] };
            write_outputs(dir, "tensor", &Structure::Lattice(ql.clone()), &tables, out)?;
        }
        Construction::Homframe => {
            let h = need(inputs.fss, "fss", "homframe")?;
            let l = need(inputs.lattice, "lattice", "homframe")?;
            let hf = hom_frame(&h, &l)?;
            let g = h.lattice();
            let mut values = Table::new("homs", "node", g.labels().to_vec());
            let names = hf.frame().nodes().to_vec();
            let mut rel = Table::new("S", "S", (1..=hf.len()).map(|k| format!("#{k}")).collect());
            for (k, a) in hf.homs().iter().enumerate() {
                values.push(format!("#{}", k + 1), a.value_labels().iter().map(|s| s.to_string()).collect());
                let cells = (0..hf.len())
                    .map(|m| if hf.frame().related(k, m) { "x" } else { "." }.to_string())
                    .collect();
                rel.push(format!("#{}", k + 1), cells);
            }
            let mut count = Table::new("counts", "count", vec!["value".into()]);
            count.push("nodes", vec![names.len().to_string()]);
            count.push("related-pairs", vec![hf.frame().rel().len().to_string()]);
            let tables = TableArtifact {
                tables: vec![values, rel, count],
            };
            write_outputs(dir, "homframe", &Structure::Frame(hf.frame().clone()), &tables, out)?;
        }
    }
    Ok(EXIT_OK)
}

fn check_adjunction(which: Adjunction, files: &[PathBuf], out: &mut dyn Write) -> Result<i32, Failure> {
    let inputs = sort_inputs(files)?;
    let mut defaults = Vec::new();
    let frame = inputs.frame.unwrap_or_else(|| {
        defaults.push("J");
        make_frame(&["*"], &[("*", "*")]).expect("one reflexive node")
    });
    let lattice = inputs.lattice.unwrap_or_else(|| {
        defaults.push("L");
        SupLattice::singleton("0")
    });
    let fss = inputs.fss.unwrap_or_else(|| {
        defaults.push("H");
        FSupLattice::plain(&SupLattice::singleton("0"))
    });
    let report = check_triangles(which, &frame, &fss, &lattice)?;
    if !defaults.is_empty() {
        writeln!(out, "not given, using one-element defaults: {}", defaults.join(", "))?;
    }
    out.write_all(report.render().as_bytes())?;
    writeln!(out, "{}", if report.passed() { "PASS" } else { "FAIL" })?;
    Ok(if report.passed() { EXIT_OK } else { EXIT_FAILED })
}

const SUITES: [Suite; 3] = [Suite::Adjunctions, Suite::Nuclei, Suite::Oracles];

fn check_laws(random: Option<&[u64]>, seed: Option<u64>, out: &mut dyn Write) -> Result<i32, Failure> {
    let mut passed = true;
    match (random, seed) {
        (Some([seed, count]), None) => {
            for suite in SUITES {
                let outcome = run_suite(suite, *seed, *count as usize)?;
                passed &= outcome.passed();
                out.write_all(outcome.render().as_bytes())?;
            }
        }
        (None, Some(seed)) => {
            for suite in SUITES {
                let outcome = replay(suite, seed)?;
                passed &= outcome.passed();
                writeln!(out, "{} on instance seed {seed} ({} redraws)", suite.name(), outcome.redraws)?;
                for r in &outcome.reports {
                    out.write_all(r.render().as_bytes())?;
                }
            }
        }
        _ => {
            return Err(Failure::Input(
                "check laws needs --random <SEED> <COUNT> or --replay <SEED>".into(),
            ))
        }
    }
    writeln!(out, "{}", if passed { "PASS" } else { "FAIL" })?;
    Ok(if passed { EXIT_OK } else { EXIT_FAILED })
}
