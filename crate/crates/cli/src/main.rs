//! Command-line front end: solve and cross-check matroid-constrained
//! disjoint-path instances stored as JSON documents.
//!
//! Exit codes: 0 success/verified, 1 verification failure, 2 input error,
//! 3 refusal because a size guard was exceeded (see MATROID_MENGER_GUARDS).

use matroid_menger_cli::{doc, gen};

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use matroid_menger::matroid::{self, AxiomReport};
use matroid_menger::oracle::{check_duality, Guards};
use matroid_menger::set::Id;
use matroid_menger::solver::{solve, verify_raw};
use matroid_menger::waves::{proof_solve_with_limits, ProofLimits};
use matroid_menger::Error;

use doc::{DocError, NamedInstance};

#[derive(Parser)]
#[command(
    name = "matroid-menger",
    version,
    about = "Edge-disjoint s→t path systems under per-vertex matroid constraints"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve with the augmenting-walk engine and emit a certificate.
    Solve {
        instance: PathBuf,
        /// Write the certificate here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve with the wave/arborescence engine and emit a certificate.
    ProofSolve {
        instance: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a certificate document against an instance document.
    Verify { instance: PathBuf, certificate: PathBuf },
    /// Exhaustively compute the maximum and the minimum cut rank.
    Oracle {
        instance: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit a seeded random instance document.
    Gen {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        vertices: u32,
        #[arg(long)]
        edges: u32,
        /// Comma-separated families a constrained vertex may draw:
        /// free,uniform,partition,gf2,graphic. Empty means all-free.
        #[arg(long, value_delimiter = ',')]
        matroids: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Spot-check the independence axioms of every vertex matroid.
    Axioms { instance: PathBuf },
}

/// A command failure: exit code plus the machine-readable error object that
/// goes to stderr.
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn new(code: u8, kind: &'static str, message: impl Into<String>) -> Self {
        Failure { code, kind, message: message.into() }
    }

    fn render(&self) -> String {
        serde_json::json!({ "error": { "kind": self.kind, "message": self.message } })
            .to_string()
    }
}

impl From<DocError> for Failure {
    fn from(e: DocError) -> Self {
        Failure::new(2, e.kind(), e.message().to_string())
    }
}

/// Core errors reaching the surface are guard refusals (exit 3); anything
/// else indicates a bug and is reported as internal.
fn engine_failure(e: Error) -> Failure {
    match e {
        Error::GuardExceeded { .. } => Failure::new(3, "guard", e.to_string()),
        other => Failure::new(2, "internal", other.to_string()),
    }
}

/// Size guards, relaxed by MATROID_MENGER_GUARDS: either "unlimited" or a
/// comma list of key=value with keys edges, vertices, paths, proof_vertices,
/// proof_edges, axioms. Relaxed guards can be very slow; that is the point.
struct EffectiveGuards {
    oracle: Guards,
    proof: ProofLimits,
    axioms: usize,
}

fn guards_from_env() -> Result<EffectiveGuards, Failure> {
    let mut guards = EffectiveGuards {
        oracle: Guards::default(),
        proof: ProofLimits::default(),
        axioms: 12,
    };
    let Ok(spec) = std::env::var("MATROID_MENGER_GUARDS") else {
        return Ok(guards);
    };
    if spec == "unlimited" {
        guards.oracle = Guards::unlimited();
        guards.proof = ProofLimits { max_vertices: usize::MAX, max_edges: usize::MAX };
        guards.axioms = usize::MAX;
        return Ok(guards);
    }
    for entry in spec.split(',') {
        let mut halves = entry.splitn(2, '=');
        let key = halves.next().unwrap_or_default();
        let value: usize = halves
            .next()
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| {
                Failure::new(2, "schema", format!("bad MATROID_MENGER_GUARDS entry {entry:?}"))
            })?;
        match key {
            "edges" => guards.oracle.max_edges = value,
            "vertices" => guards.oracle.max_vertices = value,
            "paths" => guards.oracle.max_paths = value,
            "proof_vertices" => guards.proof.max_vertices = value,
            "proof_edges" => guards.proof.max_edges = value,
            "axioms" => guards.axioms = value,
            other => {
                return Err(Failure::new(
                    2,
                    "schema",
                    format!("unknown MATROID_MENGER_GUARDS key {other:?}"),
                ))
            }
        }
    }
    Ok(guards)
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::new(2, "io", format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<NamedInstance, Failure> {
    let text = read(path)?;
    let document = doc::parse_instance_document(&text)?;
    let named = doc::realize_instance(&document)?;
    if !named.stripped.is_empty() {
        let ids: Vec<String> = named.stripped.iter().map(|e| e.0.to_string()).collect();
        eprintln!(
            "warning: stripped {} matroid loop edge(s): {}",
            ids.len(),
            ids.join(", ")
        );
    }
    Ok(named)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::new(2, "io", format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("{}", failure.render());
            ExitCode::from(failure.code)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Solve { instance, out } => {
            let named = load_instance(&instance)?;
            let cert = solve(&named.instance).map_err(engine_failure)?;
            let document = doc::certificate_document(&named, "solve", &cert);
            emit(out.as_deref(), &doc::render(&document))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::ProofSolve { instance, out } => {
            let named = load_instance(&instance)?;
            let limits = guards_from_env()?.proof;
            let cert =
                proof_solve_with_limits(&named.instance, &limits).map_err(engine_failure)?;
            let document = doc::certificate_document(&named, "proof-solve", &cert);
            emit(out.as_deref(), &doc::render(&document))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { instance, certificate } => {
            let named = load_instance(&instance)?;
            let text = read(&certificate)?;
            let document = doc::parse_certificate_document(&text)?;
            if document.instance_hash != named.hash {
                let outcome = doc::VerifyOutcome {
                    verified: false,
                    clause: Some("instance-hash"),
                    message: Some(format!(
                        "certificate was issued for {} but the instance hashes to {}",
                        document.instance_hash, named.hash
                    )),
                    transcript: Vec::new(),
                };
                print!("{}", doc::render(&outcome));
                return Ok(ExitCode::from(1));
            }
            let (paths, cut, cover) = doc::raw_material(&document, &named);
            let d = named.instance.digraph();
            let m = named.instance.matroid();
            let transcript = matroid_menger::solver::verification_transcript(
                d, m, &paths, &cut, &cover,
            )
            .into_iter()
            .map(|(clause, pass)| doc::TranscriptEntry { clause: clause.to_string(), pass })
            .collect();
            let outcome = match verify_raw(d, m, &paths, &cut, &cover) {
                Ok(()) => doc::VerifyOutcome {
                    verified: true,
                    clause: None,
                    message: None,
                    transcript,
                },
                Err(violation) => doc::VerifyOutcome {
                    verified: false,
                    clause: Some(doc::clause_name(&violation)),
                    message: Some(violation.to_string()),
                    transcript,
                },
            };
            let code = if outcome.verified { 0 } else { 1 };
            print!("{}", doc::render(&outcome));
            Ok(ExitCode::from(code))
        }
        Command::Oracle { instance, out } => {
            let named = load_instance(&instance)?;
            let guards = guards_from_env()?.oracle;
            let d = named.instance.digraph();
            let report =
                check_duality(d, named.instance.matroid(), &guards).map_err(engine_failure)?;
            let mut best_cut: Vec<String> =
                report.best_cut.set().iter().map(|v| named.name_of(v).to_string()).collect();
            best_cut.sort();
            let document = doc::OracleDocument {
                max_paths: report.max_paths,
                best_system: report
                    .best_system
                    .iter()
                    .map(|p| p.edges().iter().map(|e| e.0).collect())
                    .collect(),
                min_cut_rank: report.min_cut_rank,
                best_cut,
                duality_holds: report.duality_holds,
            };
            emit(out.as_deref(), &doc::render(&document))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Gen { seed, vertices, edges, matroids, out } => {
            if vertices < 2 {
                return Err(Failure::new(2, "schema", "gen needs at least 2 vertices"));
            }
            let mut families = Vec::new();
            for name in &matroids {
                let family = gen::Family::parse(name).ok_or_else(|| {
                    Failure::new(
                        2,
                        "schema",
                        format!(
                            "unknown matroid family {name:?} (expected free|uniform|partition|gf2|graphic)"
                        ),
                    )
                })?;
                families.push(family);
            }
            let params = gen::GenParams { seed, vertices, edges, families };
            let document = gen::generate(&params);
            doc::realize_instance(&document).expect("generated documents are valid");
            emit(out.as_deref(), &doc::render(&document))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Axioms { instance } => {
            let named = load_instance(&instance)?;
            let limit = guards_from_env()?.axioms;
            let m = named.instance.matroid();
            let mut results = Vec::new();
            let mut all_pass = true;
            for v in named.instance.digraph().vertices() {
                let report = matroid::axiom_spot_check(m.block(v.index()), limit)
                    .map_err(engine_failure)?;
                all_pass &= report.is_pass();
                results.push(doc::AxiomResult {
                    vertex: named.name_of(v).to_string(),
                    result: match report {
                        AxiomReport::Pass => "pass".to_string(),
                        other => other.to_string(),
                    },
                });
            }
            let document = doc::AxiomsDocument { all_pass, results };
            print!("{}", doc::render(&document));
            Ok(ExitCode::from(if all_pass { 0 } else { 1 }))
        }
    }
}
