//! Batch front end: validates fixture files, runs generators, quotients,
//! completions and comparison checks, and emits machine-readable reports.
//!
//! Exit codes: 0 pass, 1 property failure (the report carries witnesses),
//! 2 usage or parse error. Reports go to stdout, diagnostics to stderr.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ordcalc::dynamics::{validate_action, DEFAULT_GROUP_CAP};
use ordcalc::functional::almost_unperforated;
use ordcalc::io::{
    self, Document, NamedSemigroup, ReportEnvelope,
};
use ordcalc::pairs::classify_pair;
use ordcalc::report::AxiomReport;
use ordcalc::wsemi::{check_cu_axioms, check_w_axioms};

#[derive(Parser)]
#[command(name = "ordcalc", version, about = "relation calculus for finite W-semigroups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a semigroup file against the W- and Cu-axioms.
    Validate { file: PathBuf },
    /// Generate the normal closed pair from a seed relation.
    Gen {
        file: PathBuf,
        #[arg(long)]
        seed: PathBuf,
    },
    /// Quotient by a pair file or by the closed ideal generated by the
    /// named elements (repeat --ideal or pass several names after it).
    Quotient {
        file: PathBuf,
        #[arg(long)]
        pair: Option<PathBuf>,
        #[arg(long, num_args = 1..)]
        ideal: Option<Vec<String>>,
    },
    /// Quotient by the normal pair generated from a group action.
    DynQuotient {
        file: PathBuf,
        #[arg(long)]
        action: PathBuf,
    },
    /// Enumerate (invariant) closed ideals.
    Ideals {
        file: PathBuf,
        #[arg(long)]
        invariant: bool,
        #[arg(long)]
        action: Option<PathBuf>,
    },
    /// Complete the semigroup by round ideals.
    Complete { file: PathBuf },
    /// Vertex states and functional-transfer checks.
    Functionals {
        file: PathBuf,
        #[arg(long)]
        unit: String,
        #[arg(long)]
        action: Option<PathBuf>,
    },
    /// Comparison theory: almost unperforation or dynamical strict
    /// comparison.
    Compare {
        file: PathBuf,
        #[arg(long)]
        mode: String,
        #[arg(long)]
        action: Option<PathBuf>,
    },
    /// Run the acceptance suites.
    Check {
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(passed) => {
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(msg) => {
            eprintln!("ordcalc: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load_semigroup(path: &Path) -> Result<NamedSemigroup, String> {
    let bytes = std::fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
    match io::parse(&bytes).map_err(|e| e.to_string())? {
        Document::Semigroup(doc) => io::semigroup_from_doc(&doc).map_err(|e| e.to_string()),
        other => Err(format!(
            "{}: expected a semigroup document, found {}",
            path.display(),
            other.kind()
        )),
    }
}

fn load_relation(path: &Path, on: &NamedSemigroup) -> Result<ordcalc::Relation, String> {
    let bytes = std::fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
    match io::parse(&bytes).map_err(|e| e.to_string())? {
        Document::Relation(doc) => io::relation_from_doc(&doc, on).map_err(|e| e.to_string()),
        other => Err(format!(
            "{}: expected a relation document, found {}",
            path.display(),
            other.kind()
        )),
    }
}

fn load_action(
    path: &Path,
    on: &NamedSemigroup,
) -> Result<ordcalc::dynamics::GroupAction, String> {
    let bytes = std::fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let gens = match io::parse(&bytes).map_err(|e| e.to_string())? {
        Document::Action(doc) => io::action_from_doc(&doc, on).map_err(|e| e.to_string())?,
        other => {
            return Err(format!(
                "{}: expected an action document, found {}",
                path.display(),
                other.kind()
            ))
        }
    };
    validate_action(&on.semigroup, &gens, DEFAULT_GROUP_CAP).map_err(|e| e.to_string())
}

fn load_pair(path: &Path, on: &NamedSemigroup) -> Result<ordcalc::Pair, String> {
    let bytes = std::fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
    match io::parse(&bytes).map_err(|e| e.to_string())? {
        Document::Pair(doc) => io::pair_from_doc(&doc, on).map_err(|e| e.to_string()),
        other => Err(format!(
            "{}: expected a pair document, found {}",
            path.display(),
            other.kind()
        )),
    }
}

fn emit(env: &ReportEnvelope) -> bool {
    let bytes = env.to_bytes();
    use std::io::Write;
    std::io::stdout().write_all(&bytes).expect("stdout");
    env.passed
}

fn quotient_payload(
    named: &NamedSemigroup,
    q: &ordcalc::quotient::QuotientResult,
) -> (serde_json::Value, NamedSemigroup) {
    // Quotient classes are named by their least representative.
    let qnames: Vec<String> = q
        .reps
        .iter()
        .map(|&r| format!("[{}]", named.names[r]))
        .collect();
    let qnamed = NamedSemigroup {
        names: qnames.clone(),
        semigroup: q.quotient.clone(),
    };
    let doc = io::semigroup_to_doc(&qnamed);
    let classes: std::collections::BTreeMap<String, String> = (0..named.semigroup.size())
        .map(|a| (named.names[a].clone(), qnames[q.class_of[a]].clone()))
        .collect();
    (
        serde_json::json!({
            "quotient": doc,
            "class_of": classes,
        }),
        qnamed,
    )
}

fn run(cli: Cli) -> Result<bool, String> {
    match cli.command {
        Command::Validate { file } => {
            let named = load_semigroup(&file)?;
            let mut env = ReportEnvelope::new("validate", named.names.clone());
            env.push(check_w_axioms(&named.semigroup));
            // The Cu battery is informational here: a plain W-fixture need
            // not be complete.
            env.payload = Some(serde_json::json!({
                "cu_axioms": check_cu_axioms(&named.semigroup),
            }));
            Ok(emit(&env))
        }
        Command::Gen { file, seed } => {
            let named = load_semigroup(&file)?;
            let r = load_relation(&seed, &named)?;
            let mut env = ReportEnvelope::new("gen", named.names.clone());
            match ordcalc::genpair::generate_normal(&named.semigroup, &r) {
                Ok(g) => {
                    let prof = classify_pair(&named.semigroup, &g.pair)
                        .map_err(|e| e.to_string())?;
                    let mut rep = AxiomReport::new("generated_pair");
                    rep.record("normal", prof.normal.clone());
                    rep.record("left_closed", prof.left_closed.clone());
                    rep.record("admissible", prof.admissible.clone());
                    env.push(rep);
                    let doc = io::pair_to_doc(&g.pair, &named, &file.display().to_string());
                    env.payload = Some(serde_json::to_value(doc).expect("pair doc"));
                }
                Err(ordcalc::Error::NotLeftContinuous(a, b)) => {
                    let mut rep = AxiomReport::new("generated_pair");
                    rep.fail("seed_left_continuous", vec![a, b]);
                    env.push(rep);
                }
                Err(e) => return Err(e.to_string()),
            }
            Ok(emit(&env))
        }
        Command::Quotient { file, pair, ideal } => {
            let named = load_semigroup(&file)?;
            let p = match (&pair, &ideal) {
                (Some(path), None) => load_pair(path, &named)?,
                (None, Some(names)) => {
                    let mut seed = 0u64;
                    for name in names {
                        seed |= 1 << named.index_of(name).map_err(|e| e.to_string())?;
                    }
                    let i = ordcalc::ideal::closure(
                        &named.semigroup,
                        ordcalc::ideal::generated_ideal(&named.semigroup, seed),
                    );
                    ordcalc::ideal::pair_of_ideal(&named.semigroup, i)
                }
                _ => return Err("quotient needs exactly one of --pair or --ideal".into()),
            };
            let mut env = ReportEnvelope::new("quotient", named.names.clone());
            match ordcalc::quotient::quotient(&named.semigroup, &p) {
                Ok(q) => {
                    env.push(check_w_axioms(&q.quotient));
                    let (payload, _) = quotient_payload(&named, &q);
                    env.payload = Some(payload);
                }
                Err(ordcalc::Error::NotAdmissible(a, b)) => {
                    let mut rep = AxiomReport::new("quotient_preconditions");
                    rep.fail("pair_admissible", vec![a, b]);
                    env.push(rep);
                }
                Err(ordcalc::Error::Precondition(msg)) => {
                    let mut rep = AxiomReport::new("quotient_preconditions");
                    rep.fail(&format!("pair_normal: {msg}"), vec![]);
                    env.push(rep);
                }
                Err(e) => return Err(e.to_string()),
            }
            Ok(emit(&env))
        }
        Command::DynQuotient { file, action } => {
            let named = load_semigroup(&file)?;
            let g = load_action(&action, &named)?;
            let q = ordcalc::dynamics::dyn_quotient(&named.semigroup, &g)
                .map_err(|e| e.to_string())?;
            let mut env = ReportEnvelope::new("dyn-quotient", named.names.clone());
            env.push(check_w_axioms(&q.quotient));
            let (payload, _) = quotient_payload(&named, &q);
            // Log the Cu battery on every computed dynamical quotient to
            // hunt for counterexamples, without gating the exit code: none
            // is presumed.
            let mut payload = payload;
            payload["cu_axioms"] =
                serde_json::to_value(check_cu_axioms(&q.quotient)).expect("report");
            env.payload = Some(payload);
            Ok(emit(&env))
        }
        Command::Ideals {
            file,
            invariant,
            action,
        } => {
            let named = load_semigroup(&file)?;
            let ideals = if invariant {
                let path = action.ok_or("--invariant needs --action")?;
                let g = load_action(&path, &named)?;
                ordcalc::dynamics::invariant_closed_ideals(
                    &named.semigroup,
                    &g,
                    ordcalc::budget(),
                )
                .map_err(|e| e.to_string())?
            } else {
                ordcalc::ideal::enumerate_ideals(&named.semigroup, true, ordcalc::budget())
                    .map_err(|e| e.to_string())?
            };
            let mut env = ReportEnvelope::new("ideals", named.names.clone());
            let listed: Vec<Vec<String>> = ideals
                .iter()
                .map(|i| {
                    i.members(named.semigroup.size())
                        .into_iter()
                        .map(|a| named.names[a].clone())
                        .collect()
                })
                .collect();
            env.payload = Some(serde_json::json!({ "closed_ideals": listed }));
            Ok(emit(&env))
        }
        Command::Complete { file } => {
            let named = load_semigroup(&file)?;
            let rep = ordcalc::completion::idempotence_check(&named.semigroup)
                .map_err(|e| e.to_string())?;
            let c = ordcalc::completion::complete(&named.semigroup)
                .map_err(|e| e.to_string())?;
            let cnames: Vec<String> = c
                .ideal_masks
                .iter()
                .map(|&mask| {
                    let members: Vec<String> = (0..named.semigroup.size())
                        .filter(|&a| mask & (1 << a) != 0)
                        .map(|a| named.names[a].clone())
                        .collect();
                    format!("<{}>", members.join(" "))
                })
                .collect();
            let cnamed = NamedSemigroup {
                names: cnames,
                semigroup: c.completed.clone(),
            };
            let mut env = ReportEnvelope::new("complete", named.names.clone());
            env.push(rep);
            env.payload = Some(serde_json::json!({
                "completion": io::semigroup_to_doc(&cnamed),
            }));
            Ok(emit(&env))
        }
        Command::Functionals { file, unit, action } => {
            let named = load_semigroup(&file)?;
            let unit_idx = named.index_of(&unit).map_err(|e| e.to_string())?;
            let g = match action {
                Some(path) => load_action(&path, &named)?,
                None => ordcalc::dynamics::GroupAction::trivial(named.semigroup.size()),
            };
            let rep = ordcalc::functional::functional_transfer_check(
                &named.semigroup,
                &g,
                unit_idx,
                ordcalc::budget(),
            )
            .map_err(|e| e.to_string())?;
            let states = ordcalc::functional::vertex_states(
                &named.semigroup,
                None,
                unit_idx,
                ordcalc::budget(),
            )
            .map_err(|e| e.to_string())?;
            let listed: Vec<std::collections::BTreeMap<String, String>> = states
                .iter()
                .map(|st| {
                    (0..named.semigroup.size())
                        .map(|a| {
                            let v = match st.value(a) {
                                Some(v) => v.to_string(),
                                None => "inf".to_string(),
                            };
                            (named.names[a].clone(), v)
                        })
                        .collect()
                })
                .collect();
            let mut env = ReportEnvelope::new("functionals", named.names.clone());
            env.push(rep);
            env.payload = Some(serde_json::json!({ "vertex_states": listed }));
            Ok(emit(&env))
        }
        Command::Compare { file, mode, action } => {
            let named = load_semigroup(&file)?;
            let mut env = ReportEnvelope::new("compare", named.names.clone());
            match mode.as_str() {
                "au" => {
                    let res = almost_unperforated(&named.semigroup);
                    let mut rep = AxiomReport::new("almost_unperforation");
                    match res.witness {
                        None => rep.pass("almost_unperforated"),
                        Some((a, b, k)) => rep.fail("almost_unperforated", vec![a, b, k]),
                    }
                    env.push(rep);
                    if let Some((a, b, k)) = res.witness {
                        env.payload = Some(serde_json::json!({
                            "witness": {
                                "a": named.names[a],
                                "b": named.names[b],
                                "k": k,
                            }
                        }));
                    }
                }
                "dsc" => {
                    let path = action.ok_or("--mode dsc needs --action")?;
                    let g = load_action(&path, &named)?;
                    let rep = ordcalc::functional::dyn_strict_comparison(
                        &named.semigroup,
                        &g,
                        ordcalc::budget(),
                    )
                    .map_err(|e| e.to_string())?;
                    env.push(rep);
                }
                other => return Err(format!("unknown compare mode {other:?}")),
            }
            Ok(emit(&env))
        }
        Command::Check { suite } => {
            let outcomes = if suite == "all" {
                ordcalc::suite::run_all()
            } else {
                match ordcalc::suite::run_suite(&suite) {
                    Some(o) => vec![o],
                    None => {
                        return Err(format!(
                            "unknown suite {suite:?}; known: {}",
                            ordcalc::suite::SUITE_NAMES.join(", ")
                        ))
                    }
                }
            };
            let mut passed = true;
            for o in &outcomes {
                passed &= o.passed;
                eprintln!(
                    "{} {} ({} cases)",
                    if o.passed { "PASS" } else { "FAIL" },
                    o.name,
                    o.cases
                );
            }
            let mut out = serde_json::to_string_pretty(&serde_json::json!({
                "kind": "report",
                "command": "check",
                "suites": outcomes,
                "passed": passed,
            }))
            .expect("report serializes")
            .into_bytes();
            out.push(b'\n');
            use std::io::Write;
            std::io::stdout().write_all(&out).expect("stdout");
            Ok(passed)
        }
    }
}
