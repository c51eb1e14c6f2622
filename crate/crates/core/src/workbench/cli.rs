//! The `rotrep` command line.
//!
//! Exit codes: 0 success, 1 invalid input, 2 numerical failure, 3 "not isomorphic".

use std::ffi::OsString;
use std::io::{IsTerminal, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::classification::{isomorphic, CanonicalForm, ClassLabel, RotationPair};
use crate::error::{Error, Result};
use crate::linalg::{orthogonality_defect, Tolerance};
use crate::orthogonal::{Rotation, RotationKind};

use super::generate::generate_pair;
use super::io::{NormalFormReport, NormalForms, OrthogonalityPolicy, PairDocument, ReportDocument};
use super::oracle::oracle_two_plane_search;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_NOT_ISOMORPHIC: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Policy {
    /// Fail on a non-orthogonal matrix.
    Reject,
    /// Warn and continue with the nearest orthogonal matrix.
    Warn,
}

#[derive(Debug, Parser)]
#[command(
    name = "rotrep",
    version,
    about = "Decompose and classify pairs of rotations"
)]
pub struct Cli {
    /// Residual tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Angle tolerance in radians.
    #[arg(long = "angle-tol", global = true, default_value_t = 1e-7)]
    pub angle_tol: f64,
    /// Relative singular value threshold for rank decisions.
    #[arg(long = "rank-tol", global = true, default_value_t = 1e-9)]
    pub rank_tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Print nothing on success; the exit code carries the result.
    #[arg(long, short, global = true)]
    pub quiet: bool,
    /// Handling of input matrices that fail the orthogonality check.
    #[arg(long, global = true, value_enum, default_value_t = Policy::Reject)]
    pub orthogonality: Policy,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Verify that both matrices are rotations and report their angles.
    Check { file: PathBuf },
    /// Orthonormal bases putting each operator in block normal form.
    NormalForm { file: PathBuf },
    /// Split the pair into irreducible invariant blocks.
    Decompose { file: PathBuf },
    /// Canonical forms of the irreducible summands.
    Classify { file: PathBuf },
    /// Exit 0 if the two pairs are orthogonally isomorphic, 3 if not.
    Isomorphic { a: PathBuf, b: PathBuf },
    /// Build a pair with a known class from a list of canonical forms.
    Generate {
        /// JSON array of canonical forms, inline or as a file path.
        #[arg(long)]
        spec: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; the pair is printed when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Sample unit vectors looking for one in an invariant plane.
    ///
    /// The search is one-sided: a witness proves that an invariant plane exists, while finding
    /// none after any number of samples proves nothing.
    Oracle {
        file: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

struct Ctx<'a> {
    tol: Tolerance,
    format: Format,
    quiet: bool,
    policy: OrthogonalityPolicy,
    color: bool,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn load(&mut self, path: &Path) -> Result<(PairDocument, RotationPair)> {
        let doc = PairDocument::load(path)?;
        let (pair, warnings) = doc.to_pair(&self.tol, self.policy)?;
        if !self.quiet {
            for w in warnings {
                let _ = writeln!(self.err, "warning: {}: {w}", path.display());
            }
        }
        Ok((doc, pair))
    }

    fn emit<T: Serialize>(&mut self, value: &T, text: impl FnOnce(bool) -> String) {
        if self.quiet {
            return;
        }
        let body = match self.format {
            Format::Json => serde_json::to_string_pretty(value).expect("reports always serialise"),
            Format::Text => text(self.color),
        };
        let _ = writeln!(self.out, "{}", body.trim_end());
    }
}

fn paint(s: &str, code: &str, color: bool) -> String {
    if color {
        format!("\x1b[{code}m{s}\x1b[0m")
    } else {
        s.to_string()
    }
}

fn describe(r: &Rotation) -> String {
    match r.kind() {
        RotationKind::Identity => "identity".into(),
        RotationKind::NegIdentity => "minus identity".into(),
        RotationKind::Proper => format!("proper rotation, angle {:.12}", r.angle()),
    }
}

fn normal_form_text(name: &str, nf: &NormalFormReport) -> String {
    let mut s = format!(
        "{name}: angle {:.12}, {} block(s), +1 multiplicity {}, -1 multiplicity {}\n",
        nf.angle,
        nf.block_angles.len(),
        nf.fix_dim,
        nf.neg_dim
    );
    for row in &nf.basis {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:>10.6}")).collect();
        s += &format!("  {}\n", cells.join(" "));
    }
    s
}

fn label_text(label: &ClassLabel) -> String {
    label.forms().iter().map(|f| format!("{f}\n")).collect()
}

fn read_spec(spec: &str) -> Result<Vec<CanonicalForm>> {
    let text = if spec.trim_start().starts_with('[') {
        spec.to_string()
    } else {
        std::fs::read_to_string(spec)?
    };
    Ok(serde_json::from_str(&text)?)
}

fn execute(cmd: &Command, ctx: &mut Ctx<'_>) -> Result<i32> {
    let tol = ctx.tol;
    match cmd {
        Command::Check { file } => {
            ctx.policy = OrthogonalityPolicy::Reject;
            let (doc, pair) = ctx.load(file)?;
            let (d, e) = doc.matrices()?;
            let value = json!({
                "n": pair.dim(),
                "delta": { "kind": pair.delta.kind(), "angle": pair.delta.angle(), "orthogonality_defect": orthogonality_defect(&d) },
                "epsilon": { "kind": pair.epsilon.kind(), "angle": pair.epsilon.angle(), "orthogonality_defect": orthogonality_defect(&e) },
            });
            ctx.emit(&value, |c| {
                format!(
                    "{}: n = {}\ndelta: {}\nepsilon: {}\n",
                    paint("ok", "32", c),
                    pair.dim(),
                    describe(&pair.delta),
                    describe(&pair.epsilon)
                )
            });
        }
        Command::NormalForm { file } => {
            let (_, pair) = ctx.load(file)?;
            let nfs = NormalForms {
                delta: NormalFormReport::new(&pair.delta, &tol)?,
                epsilon: NormalFormReport::new(&pair.epsilon, &tol)?,
            };
            ctx.emit(&nfs, |_| {
                normal_form_text("delta", &nfs.delta) + &normal_form_text("epsilon", &nfs.epsilon)
            });
        }
        Command::Decompose { file } => {
            let (_, pair) = ctx.load(file)?;
            let report = ReportDocument::build(&pair, &tol)?;
            ctx.emit(&report, |_| {
                let mut s = format!(
                    "{} block(s); invariance residual {:.3e}; orthonormality defect {:.3e}\n",
                    report.blocks.len(),
                    report.invariance_residual,
                    report.orthonormality_defect
                );
                for (i, b) in report.blocks.iter().enumerate() {
                    s += &format!(
                        "block {i}: dim {}, residual {:.3e}, {}\n",
                        b.dim, b.invariance_residual, b.form
                    );
                }
                s
            });
        }
        Command::Classify { file } => {
            let (doc, pair) = ctx.load(file)?;
            let label = pair.classify(&tol)?;
            let expected = doc.metadata.and_then(|m| m.label);
            let matches = expected.as_ref().map(|x| x.matches(&label, tol.angle_tol));
            let value =
                json!({ "label": label, "expected": expected, "matches_expected": matches });
            ctx.emit(&value, |c| {
                let mut s = label_text(&label);
                match matches {
                    Some(true) => s += &format!("{}\n", paint("matches stored label", "32", c)),
                    Some(false) => {
                        s += &format!("{}\n", paint("differs from stored label", "31", c))
                    }
                    None => {}
                }
                s
            });
        }
        Command::Isomorphic { a, b } => {
            let (_, pa) = ctx.load(a)?;
            let (_, pb) = ctx.load(b)?;
            let iso = isomorphic(&pa, &pb, &tol)?;
            ctx.emit(&json!({ "isomorphic": iso }), |c| {
                if iso {
                    paint("isomorphic", "32", c)
                } else {
                    paint("not isomorphic", "31", c)
                }
            });
            return Ok(if iso { EXIT_OK } else { EXIT_NOT_ISOMORPHIC });
        }
        Command::Generate { spec, seed, output } => {
            let forms = read_spec(spec)?;
            let doc = generate_pair(&forms, *seed)?;
            match output {
                Some(path) => {
                    doc.save(path)?;
                    let value = json!({ "path": path, "n": doc.n });
                    ctx.emit(&value, |_| {
                        format!("wrote {} (n = {})", path.display(), doc.n)
                    });
                }
                None => {
                    if !ctx.quiet {
                        let _ = writeln!(ctx.out, "{}", doc.to_json());
                    }
                }
            }
        }
        Command::Oracle {
            file,
            samples,
            seed,
        } => {
            let (_, pair) = ctx.load(file)?;
            for r in [&pair.delta, &pair.epsilon] {
                if !r.is_proper() {
                    return Err(Error::NotProper { angle: r.angle() });
                }
            }
            let witness =
                oracle_two_plane_search(&pair.delta, &pair.epsilon, *samples, *seed, &tol);
            let value = json!({
                "samples": samples,
                "seed": seed,
                "witness": witness.as_ref().map(|v| v.iter().copied().collect::<Vec<f64>>()),
            });
            ctx.emit(&value, |_| match &witness {
                Some(v) => {
                    let cells: Vec<String> = v.iter().map(|x| format!("{x:.9}")).collect();
                    format!("invariant plane through [{}]", cells.join(", "))
                }
                None => {
                    format!("no witness in {samples} samples (this does not prove irreducibility)")
                }
            });
        }
    }
    Ok(EXIT_OK)
}

/// Runs the command line on `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write, color: bool) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            let rendered = if color {
                e.render().ansi().to_string()
            } else {
                e.render().to_string()
            };
            let _ = if e.use_stderr() {
                write!(err, "{rendered}")
            } else {
                write!(out, "{rendered}")
            };
            return code;
        }
    };
    let tol = match Tolerance::new(cli.tol, cli.angle_tol, cli.rank_tol) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_INVALID;
        }
    };
    let mut ctx = Ctx {
        tol,
        format: cli.format,
        quiet: cli.quiet,
        policy: match cli.orthogonality {
            Policy::Reject => OrthogonalityPolicy::Reject,
            Policy::Warn => OrthogonalityPolicy::Warn,
        },
        color,
        out,
        err,
    };
    match execute(&cli.command, &mut ctx) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(ctx.err, "error: {e}");
            if e.is_validation() {
                EXIT_INVALID
            } else {
                EXIT_NUMERICAL
            }
        }
    }
}

/// Entry point for the binary: process arguments and standard streams.
pub fn main() -> i32 {
    let color = std::io::stdout().is_terminal()
        && std::env::var_os("NO_COLOR").is_none_or(|v| v.is_empty());
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(
        std::env::args_os(),
        &mut stdout.lock(),
        &mut stderr.lock(),
        color,
    )
}
