//! The `qsheaf` command line.
//!
//! Exit status 0 means the checked property holds, 1 means it fails and a
//! witness was printed, 2 means the invocation or an input file was bad.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use quiver_sheaves::functors::{
    check_adjunction, left_adjoint_literal, monodromy_report, AdjunctionReport, LiteralAdjoint, TransportReport,
};
use quiver_sheaves::io::{parse_quiver, parse_quiver_spec, presheaf_to_json, FunctorFile};
use quiver_sheaves::linalg::{vector_strings, LinearMap};
use quiver_sheaves::presheaf::Presheaf;
use quiver_sheaves::quiver::Quiver;
use quiver_sheaves::report;
use quiver_sheaves::sheaf::{is_sheaf, Diagnosis, SectionFamily, SheafVerdict};
use quiver_sheaves::sieve::{
    audit_axioms, AxiomReport, AxiomResult, Counterexample, Sieve, TopologySpec, DEFAULT_SIEVE_LIMIT,
};
use quiver_sheaves::FunctorError;

pub const EXIT_HOLDS: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "qsheaf",
    version,
    about = "Sheaf checks on path categories of finite acyclic quivers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for randomized work. Every current subcommand is deterministic.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Adjoint {
    Component,
    Literal,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a quiver file for duplicate ids, loops and directed cycles.
    Validate {
        #[arg(long)]
        quiver: PathBuf,
    },
    /// Check the three axioms of a Grothendieck topology by enumeration.
    Audit {
        #[arg(long)]
        quiver: PathBuf,
        #[arg(long, default_value = "coarse")]
        topology: TopologySpec,
        #[arg(long, default_value_t = DEFAULT_SIEVE_LIMIT, value_parser = positive)]
        sieve_limit: usize,
    },
    /// Check the sheaf condition for every covering sieve.
    CheckSheaf {
        #[arg(long)]
        quiver: PathBuf,
        #[arg(long)]
        presheaf: PathBuf,
        #[arg(long, default_value = "coarse")]
        topology: TopologySpec,
        #[arg(long, default_value_t = DEFAULT_SIEVE_LIMIT, value_parser = positive)]
        sieve_limit: usize,
    },
    /// Turn a representation file into the dual presheaf file.
    Dualize {
        #[arg(long)]
        quiver: PathBuf,
        #[arg(long)]
        presheaf: PathBuf,
        /// Write here instead of standard output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Adjunction and monodromy reports. With the component adjoint, give F
    /// and then a discrete sheaf G; with the literal adjoint, give F.
    Functors {
        #[arg(long)]
        quiver: PathBuf,
        #[arg(long, required = true)]
        presheaf: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = Adjoint::Component)]
        adjoint: Adjoint,
    },
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

/// What a run prints and how it exits.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(message: impl Into<String>) -> Self {
        let mut stderr = message.into();
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        Outcome {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr,
        }
    }
}

fn read(path: &Path) -> Result<String, Outcome> {
    fs::read_to_string(path).map_err(|e| Outcome::usage(format!("cannot read {}: {e}", path.display())))
}

fn load_quiver(path: &Path) -> Result<Quiver, Outcome> {
    parse_quiver(&read(path)?).map_err(|e| Outcome::usage(format!("{}: {e}", path.display())))
}

fn load_file(q: &Quiver, path: &Path) -> Result<FunctorFile, Outcome> {
    FunctorFile::parse(q, &read(path)?).map_err(|e| Outcome::usage(format!("{}: {e}", path.display())))
}

fn load_presheaf<'q>(q: &'q Quiver, path: &Path) -> Result<Presheaf<'q>, Outcome> {
    load_file(q, path)?
        .into_presheaf(q)
        .map_err(|e| Outcome::usage(format!("{}: {e}", path.display())))
}

fn emit(format: Format, holds: bool, json: Value, text: String) -> Outcome {
    let stdout = match format {
        Format::Json => serde_json::to_string_pretty(&json).expect("plain data serializes") + "\n",
        Format::Text => text,
    };
    Outcome {
        code: if holds { EXIT_HOLDS } else { EXIT_FAILS },
        stdout,
        stderr: String::new(),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                Outcome::usage(rendered)
            } else {
                Outcome {
                    code: EXIT_HOLDS,
                    stdout: rendered,
                    stderr: String::new(),
                }
            };
        }
    };
    let format = cli.format;
    let result = match cli.command {
        Command::Validate { quiver } => cmd_validate(format, &quiver),
        Command::Audit {
            quiver,
            topology,
            sieve_limit,
        } => cmd_audit(format, &quiver, topology, sieve_limit),
        Command::CheckSheaf {
            quiver,
            presheaf,
            topology,
            sieve_limit,
        } => cmd_check_sheaf(format, &quiver, &presheaf, topology, sieve_limit),
        Command::Dualize {
            quiver,
            presheaf,
            output,
        } => cmd_dualize(&quiver, &presheaf, output.as_deref()),
        Command::Functors {
            quiver,
            presheaf,
            adjoint,
        } => cmd_functors(format, &quiver, &presheaf, adjoint),
    };
    result.unwrap_or_else(|outcome| outcome)
}

fn cmd_validate(format: Format, path: &Path) -> Result<Outcome, Outcome> {
    let spec = parse_quiver_spec(&read(path)?).map_err(|e| Outcome::usage(format!("{}: {e}", path.display())))?;
    let report = spec.validate();
    let mut text = String::new();
    if report.is_valid() {
        writeln!(
            text,
            "valid: {} vertices, {} edges",
            spec.vertices.len(),
            spec.edges.len()
        )
        .unwrap();
    } else {
        writeln!(text, "invalid:").unwrap();
        for issue in &report.issues {
            writeln!(text, "  {issue}").unwrap();
        }
    }
    Ok(emit(
        format,
        report.is_valid(),
        report::validation_json(&spec, &report),
        text,
    ))
}

fn braces(labels: &[String]) -> String {
    format!("{{{}}}", labels.join(", "))
}

fn sieve_text(q: &Quiver, s: &Sieve) -> String {
    format!("{} on {}", braces(&s.labels(q)), q.vertex_name(s.codomain()))
}

fn axiom_line(q: &Quiver, name: &str, r: &AxiomResult) -> String {
    let Some(c) = &r.counterexample else {
        return format!("{name} pass\n");
    };
    let why = match c {
        Counterexample::MaximalNotCovering { vertex } => {
            format!("the maximal sieve on {} does not cover", q.vertex_name(*vertex))
        }
        Counterexample::PullbackNotCovering {
            sieve,
            morphism,
            pullback,
        } => format!(
            "covering sieve {} pulls back along {} to {}, which does not cover",
            sieve_text(q, sieve),
            q.label(morphism),
            sieve_text(q, pullback)
        ),
        Counterexample::LocalNotCovering { covering, sieve } => format!(
            "sieve {} does not cover, yet its pullback along every member of covering sieve {} covers",
            sieve_text(q, sieve),
            braces(&covering.labels(q))
        ),
    };
    format!("{name} fail: {why}\n")
}

fn audit_text(q: &Quiver, r: &AxiomReport) -> String {
    let mut text = format!("topology {}\n", r.topology);
    text += &axiom_line(q, "GT1", &r.gt1);
    text += &axiom_line(q, "GT2", &r.gt2);
    text += &axiom_line(q, "GT3", &r.gt3);
    text
}

fn cmd_audit(format: Format, quiver: &Path, t: TopologySpec, limit: usize) -> Result<Outcome, Outcome> {
    let q = load_quiver(quiver)?;
    let r = audit_axioms(&t, &q, limit).map_err(|e| Outcome::usage(e.to_string()))?;
    Ok(emit(
        format,
        r.all_hold(),
        report::axiom_report_json(&q, &r),
        audit_text(&q, &r),
    ))
}

fn vector_text(v: &[quiver_sheaves::linalg::Scalar]) -> String {
    format!("[{}]", vector_strings(v).join(", "))
}

fn verdict_text(f: &Presheaf, t: &TopologySpec, v: &SheafVerdict) -> String {
    let q = f.quiver();
    let (Some(s), Some(d)) = (&v.failing_sieve, &v.diagnosis) else {
        return format!("sheaf for topology {t}\n");
    };
    let mut text = format!("not a sheaf for topology {t}: sieve {}\n", sieve_text(q, s));
    match d {
        Diagnosis::EpsilonNotInjective { kernel_vector } => {
            writeln!(
                text,
                "  restriction to the sieve is not injective; kernel vector {}",
                vector_text(kernel_vector)
            )
            .unwrap();
        }
        Diagnosis::CompatibleFamilyNotGlued { family } => {
            writeln!(text, "  this compatible family has no gluing:").unwrap();
            let fam = SectionFamily::from_flat(f, s.clone(), family).expect("family fits its sieve");
            for (m, sec) in s.members().zip(&fam.sections) {
                writeln!(text, "    {} -> {}", q.label(m), vector_text(sec)).unwrap();
            }
        }
    }
    text
}

fn cmd_check_sheaf(
    format: Format,
    quiver: &Path,
    presheaf: &Path,
    t: TopologySpec,
    limit: usize,
) -> Result<Outcome, Outcome> {
    let q = load_quiver(quiver)?;
    let f = load_presheaf(&q, presheaf)?;
    let v = is_sheaf(&f, &t, limit).map_err(|e| Outcome::usage(e.to_string()))?;
    Ok(emit(
        format,
        v.holds,
        report::verdict_json(&f, &t, &v),
        verdict_text(&f, &t, &v),
    ))
}

fn cmd_dualize(quiver: &Path, presheaf: &Path, output: Option<&Path>) -> Result<Outcome, Outcome> {
    let q = load_quiver(quiver)?;
    let v = load_file(&q, presheaf)?
        .into_representation(&q)
        .map_err(|e| Outcome::usage(format!("{}: {e}", presheaf.display())))?;
    let out = presheaf_to_json(&v.dualize()) + "\n";
    match output {
        None => Ok(Outcome {
            code: EXIT_HOLDS,
            stdout: out,
            stderr: String::new(),
        }),
        Some(path) => {
            fs::write(path, out).map_err(|e| Outcome::usage(format!("cannot write {}: {e}", path.display())))?;
            Ok(Outcome::default())
        }
    }
}

fn matrix_text(m: &LinearMap) -> String {
    let rows: Vec<String> = m.matrix().to_string_rows().iter().map(|r| vector_text_str(r)).collect();
    format!("[{}]", rows.join(", "))
}

fn vector_text_str(v: &[String]) -> String {
    format!("[{}]", v.join(", "))
}

fn adjunction_text(r: &AdjunctionReport) -> String {
    format!(
        "adjunction (component colimit): dim Hom(LF, G) = {}, dim Hom(F, G) = {}, match = {}, unit bijection = {}\n",
        r.left_dim, r.right_dim, r.matches, r.unit_bijection
    )
}

fn monodromy_text(q: &Quiver, r: &TransportReport) -> String {
    let mut text = String::new();
    if r.cycles.is_empty() {
        text += "monodromy: no cycles\n";
    }
    for c in &r.cycles {
        writeln!(
            text,
            "monodromy around {} (walk {} from {}): {}{}",
            q.edge(c.edge).name,
            c.walk.labels(q).join(" "),
            q.vertex_name(c.walk.start),
            matrix_text(&c.monodromy),
            if c.is_identity { ", identity" } else { "" }
        )
        .unwrap();
    }
    text
}

fn literal_text(q: &Quiver, rs: &[LiteralAdjoint]) -> String {
    let mut text = String::from("literal slice colimit:\n");
    for r in rs {
        writeln!(
            text,
            "  {}: dim {}, comparison {} is {}an isomorphism",
            q.vertex_name(r.vertex),
            r.dim,
            matrix_text(&r.comparison),
            if r.comparison_is_iso { "" } else { "not " }
        )
        .unwrap();
    }
    text
}

fn functor_failure(e: FunctorError) -> Outcome {
    match e {
        FunctorError::NotDiscreteSheaf { .. } => Outcome {
            code: EXIT_FAILS,
            stdout: String::new(),
            stderr: format!("{e}\n"),
        },
        other => Outcome::usage(other.to_string()),
    }
}

fn cmd_functors(format: Format, quiver: &Path, presheaves: &[PathBuf], adjoint: Adjoint) -> Result<Outcome, Outcome> {
    let q = load_quiver(quiver)?;
    match adjoint {
        Adjoint::Literal => {
            let [path] = presheaves else {
                return Err(Outcome::usage("the literal adjoint takes exactly one --presheaf"));
            };
            let f = load_presheaf(&q, path)?;
            let rs = q
                .vertices()
                .map(|v| left_adjoint_literal(&f, v))
                .collect::<Result<Vec<_>, _>>()
                .map_err(functor_failure)?;
            let holds = rs.iter().all(|r| r.comparison_is_iso);
            let json = json!({ "literal": report::literal_adjoint_json(&q, &rs) });
            Ok(emit(format, holds, json, literal_text(&q, &rs)))
        }
        Adjoint::Component => {
            let [fp, gp] = presheaves else {
                return Err(Outcome::usage("the component adjoint takes --presheaf F --presheaf G"));
            };
            let f = load_presheaf(&q, fp)?;
            let g = load_presheaf(&q, gp)?;
            let adj = check_adjunction(&f, &g).map_err(functor_failure)?;
            let mono = monodromy_report(&g).map_err(functor_failure)?;
            let json = json!({
                "adjunction": report::adjunction_json(&adj),
                "monodromy": report::monodromy_json(&q, &mono),
            });
            let text = adjunction_text(&adj) + &monodromy_text(&q, &mono);
            Ok(emit(format, adj.matches && adj.unit_bijection, json, text))
        }
    }
}
