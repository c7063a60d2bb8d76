//! Command-line front end: solving, classification, reduction generation,
//! Π₂ normalization, proof search and proof verification over the crate's
//! text formats.
//!
//! Exit codes: 0 true/definable/accept, 1 false/not-definable/reject,
//! 2 usage or format error, 3 resource budget exhausted. The first stdout
//! line is always machine-readable (`RESULT ...`).

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use eqqcsp_core::classify::{
    classify_language, fragment_report, Shape, VerdictMode, DEFAULT_CLASSIFY_CAP,
};
use eqqcsp_core::formula::{
    parse_qecnf, parse_relation_source, print_qecnf, print_relation, QEFormula, RelationSource,
};
use eqqcsp_core::partition::DEFAULT_PARTITION_CAP;
use eqqcsp_core::proofsys::{
    self, decide_sigma, layer_formula, parse_proof, print_proof, size_audit, Proof, ProofMode,
    SearchCaps,
};
use eqqcsp_core::reductions::{
    boolcsp_to_pi2_disj, boolean, mon3sat_to_pi2, parse as redparse, qbf_to_qcsp,
    qbf_to_qcsp_existential_tf, qnae_to_qcsp, GadgetReport,
};
use eqqcsp_core::relation::{relation_from_formula_capped, Relation};
use eqqcsp_core::solver::{
    decide, decide_naive, extract_strategy, SolverConfig, SolverError,
};
use eqqcsp_core::transform::{expand_to_pi2, pad_to_sigma_shape, DEFAULT_PI2_CAP};
use eqqcsp_core::proofsys::Equality;
use eqqcsp_core::Variable;

const VERSION_HEADER: &str = concat!("# eqqcsp ", env!("CARGO_PKG_VERSION"), "\n");

#[derive(Parser)]
#[command(name = "eqqcsp", version, about = "Quantified equality-constraint toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SolverOpts {
    /// Worker threads for the game search.
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Node budget; EQQCSP_NODE_BUDGET overrides the default.
    #[arg(long)]
    budget: Option<u64>,
    /// Enable liveness reduction of memo keys.
    #[arg(long)]
    liveness: bool,
}

impl SolverOpts {
    fn config(&self) -> SolverConfig {
        let mut cfg = SolverConfig {
            workers: self.workers.max(1),
            liveness_reduction: self.liveness,
            ..SolverConfig::default()
        };
        if let Ok(v) = std::env::var("EQQCSP_NODE_BUDGET") {
            if let Ok(v) = v.parse() {
                cfg.node_budget = v;
            }
        }
        if let Some(b) = self.budget {
            cfg.node_budget = b;
        }
        cfg
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decide a sentence in QECNF format.
    Solve {
        input: PathBuf,
        /// Use the naive reference search instead of the optimized one.
        #[arg(long)]
        naive: bool,
        /// Print a winning strategy when the sentence is true.
        #[arg(long)]
        witness: bool,
        #[command(flatten)]
        solver: SolverOpts,
    },
    /// Classify relations into the negative/positive/Horn fragments and
    /// report the complexity verdict.
    Classify {
        /// Relation files (rel format).
        inputs: Vec<PathBuf>,
        /// Bounded-alternation mode with this k (k >= 2).
        #[arg(long)]
        pi: Option<u32>,
        /// Ask only whether every relation lies in one fragment.
        #[arg(long, value_enum)]
        fragment: Option<FragmentArg>,
        /// Arity cap for the clause enumeration.
        #[arg(long, default_value_t = DEFAULT_CLASSIFY_CAP)]
        cap: u32,
        #[command(flatten)]
        solver: SolverOpts,
    },
    /// Generate a reduction output in QECNF format.
    Reduce {
        kind: ReduceKind,
        input: PathBuf,
        /// Output file for the generated formula (stdout otherwise).
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Side-car provenance report path.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Cross-check the output against the Boolean brute-force oracle.
        #[arg(long)]
        check: bool,
        /// Target alternation bound for the nae reduction.
        #[arg(long, default_value_t = 2)]
        pi: u32,
        #[command(flatten)]
        solver: SolverOpts,
    },
    /// Pad a sentence to alternating shape and rewrite it as an
    /// equivalent two-block (forall/exists) sentence.
    #[command(name = "normalize-pi2")]
    NormalizePi2 {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Override the round cap (the output is exponential).
        #[arg(long)]
        force: bool,
        #[arg(long, default_value_t = DEFAULT_PI2_CAP)]
        cap: u32,
    },
    /// Decide a sentence over the implication language through the proof
    /// system, emitting a contradiction certificate when false.
    #[command(name = "proof-search")]
    ProofSearch {
        input: PathBuf,
        /// Write the certificate here instead of stdout.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Verify a certificate against a formula.
    #[command(name = "proof-verify")]
    ProofVerify {
        formula: PathBuf,
        proof: PathBuf,
        /// Hypothesis equalities `a=b` on the free variables.
        #[arg(long = "hyp")]
        hypotheses: Vec<String>,
        /// Target equality `a=b` for equality-mode proofs.
        #[arg(long)]
        target: Option<String>,
    },
    /// Compute the relation defined by a rel-format file.
    Relation {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Arity cap for kernel enumeration.
        #[arg(long, default_value_t = DEFAULT_PARTITION_CAP)]
        cap: u32,
        #[command(flatten)]
        solver: SolverOpts,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FragmentArg {
    Negative,
    Positive,
    Horn,
}

impl FragmentArg {
    fn shape(self) -> Shape {
        match self {
            FragmentArg::Negative => Shape::Negative,
            FragmentArg::Positive => Shape::Positive,
            FragmentArg::Horn => Shape::Horn,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ReduceKind {
    /// Quantified 3-SAT (QDIMACS subset) to the implication language.
    Qsat,
    /// Same, with t and f existential plus the disequality gadget.
    QsatEtf,
    /// Monotone 3-SAT complement to a two-block Horn instance.
    Mon3sat,
    /// Quantified not-all-equal 3-SAT to the disjunction language.
    Qnae,
    /// Boolean CSP over {neq, disj} to a two-block positive instance.
    Bcsp,
}

/// Failure modes mapped to exit codes.
enum Failure {
    Usage(String),
    Resource(String),
    False,
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::False => 1,
            Failure::Usage(_) => 2,
            Failure::Resource(_) => 3,
        }
    }
}

fn usage<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, Failure> {
    r.map_err(|e| Failure::Usage(e.to_string()))
}

fn solver_failure(e: SolverError) -> Failure {
    match e {
        SolverError::BudgetExhausted { .. } | SolverError::CapExceeded { .. } => {
            Failure::Resource(e.to_string())
        }
        other => Failure::Usage(other.to_string()),
    }
}

fn proof_failure(e: proofsys::ProofError) -> Failure {
    match e {
        proofsys::ProofError::LayerCapExceeded { .. }
        | proofsys::ProofError::UniversalCapExceeded { .. }
        | proofsys::ProofError::SearchBudgetExhausted(_) => Failure::Resource(e.to_string()),
        other => Failure::Usage(other.to_string()),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn write_out(path: &Option<PathBuf>, content: &str) -> Result<(), Failure> {
    match path {
        Some(p) => {
            let body = format!("{VERSION_HEADER}{content}");
            fs::write(p, body)
                .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display())))
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn load_sentence(path: &Path) -> Result<QEFormula, Failure> {
    let text = read(path)?;
    let parsed = usage(parse_qecnf(&text))?;
    for w in &parsed.warnings {
        eprintln!("warning: line {}: {}", w.line, w.message);
    }
    Ok(parsed.formula)
}

fn load_relation(path: &Path, cap: u32, cfg: &SolverConfig) -> Result<Relation, Failure> {
    let text = read(path)?;
    match usage(parse_relation_source(&text))? {
        RelationSource::Explicit(r) => Ok(r),
        RelationSource::Defined(f) => {
            relation_from_formula_capped(&f, cfg, cap).map_err(|e| match e {
                eqqcsp_core::relation::RelationError::Solver(s) => solver_failure(s),
                eqqcsp_core::relation::RelationError::Partition(p) => {
                    Failure::Resource(p.to_string())
                }
                other => Failure::Usage(other.to_string()),
            })
        }
    }
}

fn parse_equality_arg(text: &str) -> Result<Equality, Failure> {
    let Some((a, b)) = text.split_once('=') else {
        return Err(Failure::Usage(format!("expected `a=b`, found `{text}`")));
    };
    let a: u32 = usage(a.trim().parse::<u32>())?;
    let b: u32 = usage(b.trim().parse::<u32>())?;
    if a == 0 || b == 0 {
        return Err(Failure::Usage("variable indices are 1-based".into()));
    }
    Equality::new(Variable::new(a), Variable::new(b))
        .ok_or_else(|| Failure::Usage("degenerate equality".into()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Let clap render help/version normally; everything else is a
            // usage error.
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let _ = e.print();
            return ExitCode::from(2);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(m) => {
                    println!("RESULT ERROR");
                    eprintln!("error: {m}");
                }
                Failure::Resource(m) => {
                    println!("RESULT BUDGET-EXHAUSTED");
                    eprintln!("error: {m}");
                }
                Failure::False => {}
            }
            ExitCode::from(f.code())
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Solve {
            input,
            naive,
            witness,
            solver,
        } => {
            let f = load_sentence(&input)?;
            let cfg = solver.config();
            let verdict = if naive {
                decide_naive(&f, &cfg).map_err(solver_failure)?
            } else {
                decide(&f, &cfg).map_err(solver_failure)?
            };
            println!("RESULT {}", if verdict.truth { "TRUE" } else { "FALSE" });
            eprintln!(
                "stats: nodes={} memo_hits={}",
                verdict.stats.nodes, verdict.stats.memo_hits
            );
            if witness && verdict.truth {
                let strategy = extract_strategy(&f, &cfg).map_err(solver_failure)?;
                print!("{strategy}");
            }
            if verdict.truth {
                Ok(())
            } else {
                Err(Failure::False)
            }
        }
        Command::Classify {
            inputs,
            pi,
            fragment,
            cap,
            solver,
        } => {
            if inputs.is_empty() {
                return Err(Failure::Usage("classify needs at least one relation".into()));
            }
            if let Some(k) = pi {
                if k < 2 {
                    return Err(Failure::Usage("--pi needs k >= 2".into()));
                }
            }
            let cfg = solver.config();
            let relations: Vec<Relation> = inputs
                .iter()
                .map(|p| load_relation(p, cap, &cfg))
                .collect::<Result<_, _>>()?;
            let reports: Vec<_> = relations
                .iter()
                .map(|r| fragment_report(r, cap))
                .collect::<Result<_, _>>()
                .map_err(|e| Failure::Resource(e.to_string()))?;

            if let Some(shape) = fragment {
                let shape = shape.shape();
                let ok = reports.iter().all(|r| r.holds(shape));
                println!("RESULT {}", if ok { "DEFINABLE" } else { "NOT-DEFINABLE" });
                print_reports(&inputs, &relations, &reports);
                return if ok { Ok(()) } else { Err(Failure::False) };
            }

            let mode = match pi {
                Some(k) => VerdictMode::PiK(k),
                None => VerdictMode::Full,
            };
            let (_, verdict) = classify_language(&relations, mode, cap)
                .map_err(|e| Failure::Usage(e.to_string()))?;
            println!("RESULT {}", verdict.class);
            print_reports(&inputs, &relations, &reports);
            let (_, full) = classify_language(&relations, VerdictMode::Full, cap)
                .map_err(|e| Failure::Usage(e.to_string()))?;
            println!("verdict full: {}", full.class);
            let k = pi.unwrap_or(3);
            let (_, pik) = classify_language(&relations, VerdictMode::PiK(k), cap)
                .map_err(|e| Failure::Usage(e.to_string()))?;
            println!("verdict pi_{k}: {}", pik.class);
            Ok(())
        }
        Command::Reduce {
            kind,
            input,
            output,
            report,
            check,
            pi,
            solver,
        } => {
            let text = read(&input)?;
            let cfg = solver.config();
            let (formula, gadget_report, oracle): (QEFormula, GadgetReport, Option<bool>) =
                match kind {
                    ReduceKind::Qsat => {
                        let phi = usage(redparse::parse_qdimacs(&text))?;
                        let (f, r) = usage(qbf_to_qcsp(&phi))?;
                        (f, r, check.then(|| boolean::qbf_truth(&phi)))
                    }
                    ReduceKind::QsatEtf => {
                        let phi = usage(redparse::parse_qdimacs(&text))?;
                        let (f, r) = usage(qbf_to_qcsp_existential_tf(&phi))?;
                        (f, r, check.then(|| boolean::qbf_truth(&phi)))
                    }
                    ReduceKind::Mon3sat => {
                        let phi = usage(redparse::parse_mon3sat_dimacs(&text))?;
                        let (f, r) = usage(mon3sat_to_pi2(&phi))?;
                        (f, r, check.then(|| !boolean::mon3sat_satisfiable(&phi)))
                    }
                    ReduceKind::Qnae => {
                        let inst = usage(redparse::parse_qnae(&text))?;
                        let (f, r) = usage(qnae_to_qcsp(&inst, pi))?;
                        (f, r, check.then(|| boolean::qnae_truth(&inst)))
                    }
                    ReduceKind::Bcsp => {
                        let inst = usage(redparse::parse_bcsp(&text))?;
                        let (f, r) = usage(boolcsp_to_pi2_disj(&inst))?;
                        (f, r, check.then(|| boolean::bcsp_satisfiable(&inst)))
                    }
                };
            match oracle {
                None => println!("RESULT OK"),
                Some(expected) => match decide(&formula, &cfg) {
                    Ok(v) if v.truth == expected => println!("RESULT CHECK-PASS"),
                    Ok(v) => {
                        println!("RESULT CHECK-FAIL");
                        eprintln!(
                            "error: oracle says {expected}, solver says {}",
                            v.truth
                        );
                        write_out(&output, &print_qecnf(&formula))?;
                        return Err(Failure::False);
                    }
                    Err(e) => {
                        return Err(Failure::Resource(format!(
                            "check unavailable at this scale: {e}"
                        )))
                    }
                },
            }
            write_out(&output, &print_qecnf(&formula))?;
            if let Some(rp) = report {
                write_out(&Some(rp), &gadget_report.render())?;
            }
            Ok(())
        }
        Command::NormalizePi2 {
            input,
            output,
            force,
            cap,
        } => {
            let f = load_sentence(&input)?;
            let shaped = pad_to_sigma_shape(&f);
            let expanded = expand_to_pi2(&shaped, cap, force).map_err(|e| match e {
                eqqcsp_core::transform::TransformError::CapExceeded { .. } => {
                    Failure::Resource(e.to_string())
                }
                other => Failure::Usage(other.to_string()),
            })?;
            println!("RESULT OK");
            write_out(&output, &print_qecnf(&expanded))
        }
        Command::ProofSearch { input, emit } => {
            let f = load_sentence(&input)?;
            let decision = decide_sigma(&f, &SearchCaps::default()).map_err(proof_failure)?;
            println!("RESULT {}", if decision.truth { "TRUE" } else { "FALSE" });
            if let Some(cert) = &decision.certificate {
                let lf = layer_formula(&f).map_err(proof_failure)?;
                let audit = size_audit(cert, f.num_vars(), lf.level() as u32);
                eprintln!(
                    "certificate: {} symbols, bound {}, within={}",
                    audit.symbols, audit.bound, audit.within
                );
                write_out(&emit, &print_proof(cert))?;
            }
            if decision.truth {
                Ok(())
            } else {
                Err(Failure::False)
            }
        }
        Command::ProofVerify {
            formula,
            proof,
            hypotheses,
            target,
        } => {
            let text = read(&formula)?;
            let f = if text.split_whitespace().next() == Some("rel") {
                match usage(parse_relation_source(&text))? {
                    RelationSource::Defined(f) => f,
                    RelationSource::Explicit(_) => {
                        return Err(Failure::Usage(
                            "proof verification needs a formula, not a kernel list".into(),
                        ))
                    }
                }
            } else {
                usage(parse_qecnf(&text))?.formula
            };
            let lf = layer_formula(&f).map_err(proof_failure)?;
            let proof_text = read(&proof)?;
            let proof = usage(parse_proof(&proof_text))?;
            let hyp: BTreeSet<Equality> = hypotheses
                .iter()
                .map(|h| parse_equality_arg(h))
                .collect::<Result<_, _>>()?;
            let target = match &target {
                Some(t) => Some(parse_equality_arg(t)?),
                None => None,
            };
            let outcome = match &proof {
                Proof::Zero(z) => proofsys::verify_zero_proof(
                    &lf.core,
                    &lf.free,
                    &hyp,
                    z,
                    target.as_ref(),
                ),
                Proof::K(kp) if kp.mode == ProofMode::Equality => {
                    proofsys::verify_k_proof(&lf, &hyp, kp, target.as_ref())
                }
                Proof::K(kp) => proofsys::verify_k_contradiction(&lf, &hyp, kp),
            };
            match outcome {
                Ok(()) => {
                    println!("RESULT ACCEPT");
                    Ok(())
                }
                Err(rej) => {
                    println!("RESULT REJECT");
                    eprintln!("reject: {rej}");
                    Err(Failure::False)
                }
            }
        }
        Command::Relation {
            input,
            output,
            cap,
            solver,
        } => {
            let r = load_relation(&input, cap, &solver.config())?;
            println!("RESULT OK");
            write_out(&output, &print_relation(&r))
        }
    }
}

fn print_reports(
    inputs: &[PathBuf],
    relations: &[Relation],
    reports: &[eqqcsp_core::classify::FragmentReport],
) {
    for (i, (rel, rep)) in relations.iter().zip(reports).enumerate() {
        println!(
            "relation {} {}: arity {} negative={} positive={} horn={}",
            i + 1,
            inputs[i].display(),
            rel.arity(),
            rep.is_negative,
            rep.is_positive,
            rep.is_horn
        );
        for (shape, witness) in &rep.witnesses {
            let clauses: Vec<String> = witness.iter().map(|c| format!("c {c}")).collect();
            println!(
                "witness {} {}: {}",
                i + 1,
                shape.name(),
                clauses.join(" ; ")
            );
        }
        for (shape, kernel) in &rep.separating {
            println!("separating {} {}: p {}", i + 1, shape.name(), kernel);
        }
    }
}
