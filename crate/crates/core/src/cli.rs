//! Command-line front end. Every subcommand prints one report; the exit
//! code is 0 when no check failed, 1 when one did, and 2 for unreadable or
//! invalid input.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::canonical::{canonical_frame, verify_representation};
use crate::io::{self, IoError, Morphism};
use crate::morphism::{
    check_morphism, check_naturality, dual_of_homomorphism, normality_check, roundtrip_frame, roundtrip_lattice,
    MorphError,
};
use crate::order::{validate_homomorphism, validate_normal_operator, LatticeHomomorphism};
use crate::polarity::Limits;
use crate::relational::{check_axioms, complex_algebra, CheckOptions, Level, RelError};
use crate::report::{Check, InputDigest, Report};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "nle-frames",
    version,
    about = "Dual frames of finite normal lattice expansions"
)]
pub struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Check every subfamily in distribution checks; skip what is out of reach.
    #[arg(long, global = true)]
    pub exhaustive: bool,
    /// Refuse frames with more points than this in either sort.
    #[arg(long, value_name = "N", global = true)]
    pub max_points: Option<usize>,
    /// Record wall-clock time per check.
    #[arg(long, global = true)]
    pub timings: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that a document is a lattice with normal operators.
    Validate { nle: PathBuf },
    /// Write the canonical frame of a lattice expansion and check its axioms.
    Dualize {
        nle: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check the frame axioms.
    Axioms {
        frame: PathBuf,
        /// Also check the axioms needed for the clopen round trip.
        #[arg(long)]
        star: bool,
    },
    /// Write the complex algebra of stable sets of a frame.
    Complex {
        frame: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Lattice → canonical frame → clopen algebra, with the isomorphism.
    RoundtripLattice { nle: PathBuf },
    /// Frame → clopen algebra → canonical frame, with the isomorphism.
    RoundtripFrame { frame: PathBuf },
    /// Write the dual frame morphism of a lattice homomorphism.
    DualMorphism {
        hom: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a lattice homomorphism or a frame morphism.
    CheckMorphism { morphism: PathBuf },
}

#[derive(Debug)]
enum Failure {
    Input(String),
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<RelError> for Failure {
    fn from(e: RelError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<MorphError> for Failure {
    fn from(e: MorphError) -> Self {
        Failure::Input(e.to_string())
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// `<dir>/<stem>.<suffix>` next to `input`.
pub fn sibling(input: &Path, suffix: &str) -> PathBuf {
    let stem = input
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    input.with_file_name(format!("{stem}.{suffix}"))
}

fn digests(files: &[(PathBuf, Vec<u8>)]) -> Vec<InputDigest> {
    files
        .iter()
        .map(|(p, b)| InputDigest::of(p.display().to_string(), b))
        .collect()
}

struct Timer {
    on: bool,
}

impl Timer {
    fn run(&self, f: impl FnOnce() -> Vec<Check>) -> Vec<Check> {
        let start = Instant::now();
        let mut checks = f();
        if self.on {
            let ms = start.elapsed().as_secs_f64() * 1000.0;
            for c in &mut checks {
                c.elapsed_ms = Some(ms);
            }
        }
        checks
    }
}

fn options(cli: &Cli) -> CheckOptions {
    CheckOptions {
        exhaustive: cli.exhaustive,
        limits: Limits {
            max_points: cli.max_points.unwrap_or(usize::MAX),
            ..Limits::default()
        },
        ..CheckOptions::default()
    }
}

fn check_limits(fr: &crate::relational::FrameWithRelations, opts: &CheckOptions) -> Result<(), Failure> {
    fr.frame
        .check_limits(&opts.limits)
        .map_err(|e| Failure::Input(e.to_string()))
}

fn normality(nle: &crate::order::Nle) -> Vec<Check> {
    let mut out = vec![Check::pass("lattice").with_detail(format!("{} elements", nle.lattice.len()))];
    for f in &nle.operators {
        out.push(normality_check(
            nle,
            &f.name,
            &validate_normal_operator(&nle.lattice, f),
        ));
    }
    out
}

fn hom_check(h: &LatticeHomomorphism) -> Check {
    let rep = validate_homomorphism(h);
    Check::from_witness("homomorphism", rep.failures.first().map(|f| json!(format!("{f:?}"))))
}

fn execute(cli: &Cli) -> Result<Report, Failure> {
    let opts = options(cli);
    let timer = Timer { on: cli.timings };
    let report = match &cli.command {
        Command::Validate { nle } => {
            let l = io::load_nle(nle)?;
            let checks = timer.run(|| normality(&l.value));
            Report::new("validate", digests(&l.files), checks)
        }
        Command::Dualize { nle, output } => {
            let l = io::load_nle(nle)?;
            let mut checks = timer.run(|| normality(&l.value));
            if checks.iter().all(|c| !c.failed()) {
                let cf = canonical_frame(&l.value);
                check_limits(&cf.frame, &opts)?;
                let out = output.clone().unwrap_or_else(|| sibling(nle, "frame.json"));
                write_file(&out, &io::emit_frame(&cf.frame, Some(&cf)))?;
                checks.extend(timer.run(|| check_axioms(&cf.frame, Level::Star, &opts)));
                checks.extend(timer.run(|| verify_representation(&cf, &opts.limits)));
            }
            Report::new("dualize", digests(&l.files), checks)
        }
        Command::Axioms { frame, star } => {
            let l = io::load_frame(frame)?;
            check_limits(&l.value, &opts)?;
            let level = if *star { Level::Star } else { Level::Base };
            let checks = timer.run(|| check_axioms(&l.value, level, &opts));
            Report::new("axioms", digests(&l.files), checks)
        }
        Command::Complex { frame, output } => {
            let l = io::load_frame(frame)?;
            check_limits(&l.value, &opts)?;
            let mut checks = timer.run(|| check_axioms(&l.value, Level::Base, &opts));
            match complex_algebra(&l.value, &opts.limits) {
                Ok(alg) => {
                    let out = output.clone().unwrap_or_else(|| sibling(frame, "complex.json"));
                    write_file(&out, &io::emit_nle(&alg.nle))?;
                    for f in &alg.nle.operators {
                        let mut c = normality_check(&alg.nle, &f.name, &validate_normal_operator(&alg.nle.lattice, f));
                        c.id = format!("complex-normality:{}", f.name);
                        checks.push(c);
                    }
                }
                // The failed axioms are already in `checks`; nothing is written.
                Err(RelError::AxiomViolation(_)) => {}
                Err(e) => return Err(e.into()),
            }
            Report::new("complex", digests(&l.files), checks)
        }
        Command::RoundtripLattice { nle } => {
            let l = io::load_nle(nle)?;
            let mut iso = false;
            let checks = timer.run(|| {
                let (c, i) = roundtrip_lattice(&l.value, &opts.limits);
                iso = i;
                c
            });
            Report::new("roundtrip-lattice", digests(&l.files), checks).with_iso(iso)
        }
        Command::RoundtripFrame { frame } => {
            let l = io::load_frame(frame)?;
            check_limits(&l.value, &opts)?;
            let start = Instant::now();
            let (mut checks, iso) = match roundtrip_frame(&l.value, &opts) {
                Ok(r) => r,
                // Report the axioms the round trip needs instead of an input error.
                Err(MorphError::PreconditionFailed(_)) => (check_axioms(&l.value, Level::Star, &opts), None),
                Err(e) => return Err(e.into()),
            };
            if cli.timings {
                let ms = start.elapsed().as_secs_f64() * 1000.0;
                checks.iter_mut().for_each(|c| c.elapsed_ms = Some(ms));
            }
            Report::new("roundtrip-frame", digests(&l.files), checks).with_iso(iso.is_some())
        }
        Command::DualMorphism { hom, output } => {
            let l = io::load_morphism(hom)?;
            let Morphism::Lattice(h) = &l.value else {
                return Err(Failure::Input(format!(
                    "{}: expected a lattice-hom document",
                    hom.display()
                )));
            };
            let mut checks = vec![hom_check(h)];
            if checks[0].passed() {
                let d = dual_of_homomorphism(h)?;
                let out = output.clone().unwrap_or_else(|| sibling(hom, "dual.json"));
                let src = sibling(&out, "source.json");
                let tgt = sibling(&out, "target.json");
                let name = |p: &Path| p.file_name().unwrap().to_string_lossy().into_owned();
                write_file(&src, &io::emit_frame(&d.morphism.source, Some(&d.of_target)))?;
                write_file(&tgt, &io::emit_frame(&d.morphism.target, Some(&d.of_source)))?;
                write_file(
                    &out,
                    &io::emit_morphism(&io::frame_morphism_doc(&d.morphism, &name(&src), &name(&tgt))),
                )?;
                checks.extend(timer.run(|| check_morphism(&d.morphism, &opts)));
                checks.extend(timer.run(|| vec![check_naturality(h, &d)]));
            }
            Report::new("dual-morphism", digests(&l.files), checks)
        }
        Command::CheckMorphism { morphism } => {
            let l = io::load_morphism(morphism)?;
            let checks = match &l.value {
                Morphism::Lattice(h) => {
                    let mut checks = vec![hom_check(h)];
                    if checks[0].passed() {
                        let d = dual_of_homomorphism(h)?;
                        checks.extend(timer.run(|| check_morphism(&d.morphism, &opts)));
                        checks.push(check_naturality(h, &d));
                    }
                    checks
                }
                Morphism::Frame(m) => {
                    check_limits(&m.source, &opts)?;
                    check_limits(&m.target, &opts)?;
                    timer.run(|| check_morphism(m, &opts))
                }
            };
            Report::new("check-morphism", digests(&l.files), checks)
        }
    };
    Ok(report)
}

/// Parses `args`, runs the command, and writes the report to `out`.
/// Returns the process exit code.
pub fn run(args: impl IntoIterator<Item = OsString>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match execute(&cli) {
        Ok(report) => {
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&report).expect("serializable") + "\n",
                Format::Text => report.to_text(),
            };
            let _ = out.write_all(text.as_bytes());
            if report.all_passed() {
                0
            } else {
                1
            }
        }
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}
