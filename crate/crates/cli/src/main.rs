//! Command-line frontend: property checking, equivalence queries, LTS
//! export, and the full taxonomy table over `.ni` specifications.
//!
//! Exit codes double as the machine-readable verdict: 0 holds/equivalent,
//! 1 fails/inequivalent, 2 undecided within bounds, 3 usage or input
//! error, 4 state space limit exceeded, 5 cyclic input where the
//! back-and-forth oracle needs acyclic, 6 internal soundness violation in
//! a taxonomy report. Reports go to stdout, diagnostics to stderr.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use ninfer_core::equiv::{
    bf_bisimilar_oracle, equivalent, BfError, BfMode, Relation, DEFAULT_ORACLE_BOUND,
};
use ninfer_core::lts::{
    build_lts_in, export_aut, export_dot, hide_high, restrict_high, BuildError, BuildLimits, Lts,
};
use ninfer_core::security::{
    check_property, taxonomy_report, CheckError, Evidence, NdcBounds, Outcome, PropertyBase,
    PropertyId, Verdict,
};
use ninfer_core::syntax::{parse_spec, SpecModel};

const EXIT_HOLDS: i32 = 0;
const EXIT_FAILS: i32 = 1;
const EXIT_UNKNOWN: i32 = 2;
const EXIT_USAGE: i32 = 3;
const EXIT_STATE_SPACE: i32 = 4;
const EXIT_CYCLIC: i32 = 5;
const EXIT_INCONSISTENT: i32 = 6;

#[derive(Parser)]
#[command(
    name = "ninfer",
    version,
    about = "Noninterference verifier for a two-level process calculus"
)]
struct CliConfig {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check one security property of a process.
    Check {
        /// Specification file in `.ni` syntax.
        file: PathBuf,
        /// Process to check: a defined constant or an inline term.
        #[arg(long)]
        process: String,
        /// Property family; pairs with --relation to name the property.
        #[arg(long, value_enum)]
        property: PropertyFlag,
        /// Equivalence the property is built on.
        #[arg(long, value_enum, default_value_t = RelationFlag::Weak)]
        relation: RelationFlag,
        /// Emit the verdict as JSON instead of text.
        #[arg(long)]
        json: bool,
        /// Attacker prefix depth for the bounded refutation search.
        #[arg(long, default_value_t = 3)]
        depth: usize,
        /// State budget for every LTS construction.
        #[arg(long)]
        max_states: Option<usize>,
    },
    /// Decide whether two processes are behaviorally equivalent.
    Equiv {
        /// Specification file in `.ni` syntax.
        file: PathBuf,
        /// First process.
        left: String,
        /// Second process.
        right: String,
        /// Equivalence to decide; the -bf modes need acyclic processes.
        #[arg(long, value_enum)]
        relation: EquivRelationFlag,
        /// Emit the verdict as JSON instead of text.
        #[arg(long)]
        json: bool,
        /// State budget for every LTS construction.
        #[arg(long)]
        max_states: Option<usize>,
    },
    /// Export a process's transition system.
    Lts {
        /// Specification file in `.ni` syntax.
        file: PathBuf,
        /// Process to export: a defined constant or an inline term.
        #[arg(long)]
        process: String,
        /// Output format.
        #[arg(long, value_enum, default_value_t = FormatFlag::Aut)]
        format: FormatFlag,
        /// Low view to apply before export.
        #[arg(long, value_enum, default_value_t = TransformFlag::None)]
        transform: TransformFlag,
        /// State budget for every LTS construction.
        #[arg(long)]
        max_states: Option<usize>,
    },
    /// Evaluate all ten properties and cross-check their implications.
    Taxonomy {
        /// Specification file in `.ni` syntax.
        file: PathBuf,
        /// Process to evaluate: a defined constant or an inline term.
        #[arg(long)]
        process: String,
        /// Emit the table as JSON instead of text.
        #[arg(long)]
        json: bool,
        /// Attacker prefix depth for the bounded refutation searches.
        #[arg(long, default_value_t = 3)]
        depth: usize,
        /// State budget for every LTS construction.
        #[arg(long)]
        max_states: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PropertyFlag {
    Snni,
    Ndc,
    SSnni,
    PNdc,
    SNdc,
}

impl PropertyFlag {
    fn base(self) -> PropertyBase {
        match self {
            PropertyFlag::Snni => PropertyBase::Snni,
            PropertyFlag::Ndc => PropertyBase::Ndc,
            PropertyFlag::SSnni => PropertyBase::StrongSnni,
            PropertyFlag::PNdc => PropertyBase::PersistentNdc,
            PropertyFlag::SNdc => PropertyBase::StrongNdc,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RelationFlag {
    Weak,
    Branching,
}

impl RelationFlag {
    fn relation(self) -> Relation {
        match self {
            RelationFlag::Weak => Relation::Weak,
            RelationFlag::Branching => Relation::Branching,
        }
    }

    fn name(self) -> &'static str {
        match self {
            RelationFlag::Weak => "weak",
            RelationFlag::Branching => "branching",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EquivRelationFlag {
    Strong,
    Weak,
    Branching,
    StrongBf,
    WeakBf,
}

impl EquivRelationFlag {
    fn name(self) -> &'static str {
        match self {
            EquivRelationFlag::Strong => "strong",
            EquivRelationFlag::Weak => "weak",
            EquivRelationFlag::Branching => "branching",
            EquivRelationFlag::StrongBf => "strong-bf",
            EquivRelationFlag::WeakBf => "weak-bf",
        }
    }

    fn adjective(self) -> &'static str {
        match self {
            EquivRelationFlag::Strong => "strongly bisimilar",
            EquivRelationFlag::Weak => "weakly bisimilar",
            EquivRelationFlag::Branching => "branching bisimilar",
            EquivRelationFlag::StrongBf => "strong back-and-forth bisimilar",
            EquivRelationFlag::WeakBf => "weak back-and-forth bisimilar",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatFlag {
    Aut,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum TransformFlag {
    None,
    Restrict,
    Hide,
}

/// A failed command, carrying its exit code and a stderr message.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

fn build_failure(e: BuildError) -> Failure {
    let code = match e {
        BuildError::StateSpaceExceeded { .. } => EXIT_STATE_SPACE,
        BuildError::UnguardedRecursion { .. } => EXIT_USAGE,
    };
    Failure {
        code,
        message: e.to_string(),
    }
}

fn check_failure(e: CheckError) -> Failure {
    match e {
        CheckError::Parse(e) => Failure::usage(e.to_string()),
        CheckError::Build(e) => build_failure(e),
    }
}

fn main() {
    let config = match CliConfig::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let code = match run(config.command) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("ninfer: {}", failure.message);
            failure.code
        }
    };
    std::process::exit(code);
}

fn run(command: Command) -> Result<i32, Failure> {
    match command {
        Command::Check {
            file,
            process,
            property,
            relation,
            json,
            depth,
            max_states,
        } => cmd_check(&file, &process, property, relation, json, depth, max_states),
        Command::Equiv {
            file,
            left,
            right,
            relation,
            json,
            max_states,
        } => cmd_equiv(&file, &left, &right, relation, json, max_states),
        Command::Lts {
            file,
            process,
            format,
            transform,
            max_states,
        } => cmd_lts(&file, &process, format, transform, max_states),
        Command::Taxonomy {
            file,
            process,
            json,
            depth,
            max_states,
        } => cmd_taxonomy(&file, &process, json, depth, max_states),
    }
}

fn load_model(file: &Path) -> Result<SpecModel, Failure> {
    let source = std::fs::read_to_string(file)
        .map_err(|e| Failure::usage(format!("{}: {e}", file.display())))?;
    parse_spec(&source).map_err(|e| Failure::usage(format!("{}: {e}", file.display())))
}

fn resolve_limits(max_states: Option<usize>) -> Result<BuildLimits, Failure> {
    let mut limits = BuildLimits::default();
    if let Ok(value) = std::env::var("NINFER_MAX_STATES") {
        if !value.is_empty() {
            limits.max_states = value
                .parse()
                .map_err(|_| Failure::usage("NINFER_MAX_STATES must be a non-negative integer"))?;
        }
    }
    if let Some(states) = max_states {
        limits.max_states = states;
    }
    Ok(limits)
}

/// Builds the LTS of a process given by constant name or inline term.
fn build_root(model: &SpecModel, text: &str, limits: &BuildLimits) -> Result<Lts, Failure> {
    let (arena, root) = model
        .parse_root(text)
        .map_err(|e| Failure::usage(format!("process `{text}`: {e}")))?;
    build_lts_in(arena, &|n| model.def(n), root, limits).map_err(build_failure)
}

fn outcome_exit(outcome: Outcome) -> i32 {
    match outcome {
        Outcome::Holds => EXIT_HOLDS,
        Outcome::Fails => EXIT_FAILS,
        Outcome::Unknown => EXIT_UNKNOWN,
    }
}

/// Writes a report to stdout. A closed pipe (`ninfer lts ... | head`)
/// terminates with the conventional SIGPIPE status instead of panicking.
fn emit(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if out
        .write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .is_err()
    {
        std::process::exit(141);
    }
}

/// Refutation evidence in the same shape the corpus manifest uses. Holds
/// rationales and exhausted bounds are narrative, not witnesses, and stay
/// out of the JSON.
fn witness_json(evidence: &Evidence) -> Option<serde_json::Value> {
    match evidence {
        Evidence::InsecureState { state } => Some(json!({
            "kind": "insecure-state",
            "state": state,
        })),
        Evidence::HighTransition {
            source,
            action,
            target,
        } => Some(json!({
            "kind": "high-transition",
            "source": source,
            "action": action,
            "target": target,
        })),
        Evidence::Attacker { attacker, sync_set } => Some(json!({
            "kind": "attacker",
            "attacker": attacker,
            "sync-set": sync_set.iter().collect::<Vec<_>>(),
        })),
        Evidence::ByImplication { .. } | Evidence::BoundsExhausted { .. } => None,
    }
}

fn print_verdict_text(property: PropertyId, process: &str, verdict: &Verdict) {
    let mut text = format!("{property} on {process}: {}\n", verdict.outcome);
    if let Some(evidence) = &verdict.evidence {
        text.push_str(&format!("  {}\n", evidence.describe()));
    }
    emit(&text);
}

fn cmd_check(
    file: &Path,
    process: &str,
    property: PropertyFlag,
    relation: RelationFlag,
    json: bool,
    depth: usize,
    max_states: Option<usize>,
) -> Result<i32, Failure> {
    let model = load_model(file)?;
    let limits = resolve_limits(max_states)?;
    let bounds = NdcBounds {
        attacker_depth: depth,
        ..NdcBounds::default()
    };
    let id = PropertyId::new(property.base(), relation.relation());

    let start = Instant::now();
    let lts = build_root(&model, process, &limits)?;
    let verdict = check_property(&model, process, id, &bounds, &limits).map_err(check_failure)?;
    let ms = start.elapsed().as_millis() as u64;

    if json {
        let mut report = json!({
            "process": process,
            "property": id.to_string(),
            "relation": relation.name(),
            "outcome": verdict.outcome.to_string(),
            "stats": {
                "states": lts.num_states(),
                "transitions": lts.num_transitions(),
                "ms": ms,
            },
        });
        if let Some(w) = verdict.evidence.as_ref().and_then(witness_json) {
            report["witness"] = w;
        }
        emit(&format!("{report:#}\n"));
    } else {
        print_verdict_text(id, process, &verdict);
    }
    Ok(outcome_exit(verdict.outcome))
}

fn cmd_equiv(
    file: &Path,
    left: &str,
    right: &str,
    relation: EquivRelationFlag,
    json: bool,
    max_states: Option<usize>,
) -> Result<i32, Failure> {
    let model = load_model(file)?;
    let limits = resolve_limits(max_states)?;

    let start = Instant::now();
    let a = build_root(&model, left, &limits)?;
    let b = build_root(&model, right, &limits)?;
    let outcome = match relation {
        EquivRelationFlag::Strong => bool_outcome(equivalent(
            &a,
            a.initial(),
            &b,
            b.initial(),
            Relation::Strong,
        )),
        EquivRelationFlag::Weak => {
            bool_outcome(equivalent(&a, a.initial(), &b, b.initial(), Relation::Weak))
        }
        EquivRelationFlag::Branching => bool_outcome(equivalent(
            &a,
            a.initial(),
            &b,
            b.initial(),
            Relation::Branching,
        )),
        EquivRelationFlag::StrongBf | EquivRelationFlag::WeakBf => {
            let mode = if relation == EquivRelationFlag::StrongBf {
                BfMode::Strong
            } else {
                BfMode::Weak
            };
            match bf_bisimilar_oracle(&a, a.initial(), &b, b.initial(), mode, DEFAULT_ORACLE_BOUND)
            {
                Ok(v) => bool_outcome(v),
                Err(e @ BfError::CyclicInput) => {
                    return Err(Failure {
                        code: EXIT_CYCLIC,
                        message: e.to_string(),
                    })
                }
                Err(e @ BfError::OracleBoundExceeded { .. }) => {
                    eprintln!("ninfer: {e}");
                    Outcome::Unknown
                }
            }
        }
    };
    let ms = start.elapsed().as_millis() as u64;

    if json {
        let report = json!({
            "process": format!("{left} vs {right}"),
            "property": "equivalence",
            "relation": relation.name(),
            "outcome": outcome.to_string(),
            "stats": {
                "states": a.num_states() + b.num_states(),
                "transitions": a.num_transitions() + b.num_transitions(),
                "ms": ms,
            },
        });
        emit(&format!("{report:#}\n"));
    } else {
        let line = match outcome {
            Outcome::Holds => format!("{left} and {right} are {}", relation.adjective()),
            Outcome::Fails => format!("{left} and {right} are not {}", relation.adjective()),
            Outcome::Unknown => format!("{left} vs {right}: undecided within the oracle bound"),
        };
        emit(&format!("{line}\n"));
    }
    Ok(outcome_exit(outcome))
}

fn bool_outcome(equivalent: bool) -> Outcome {
    if equivalent {
        Outcome::Holds
    } else {
        Outcome::Fails
    }
}

fn cmd_lts(
    file: &Path,
    process: &str,
    format: FormatFlag,
    transform: TransformFlag,
    max_states: Option<usize>,
) -> Result<i32, Failure> {
    let model = load_model(file)?;
    let limits = resolve_limits(max_states)?;
    let lts = build_root(&model, process, &limits)?;
    let high = model.high_action_set();
    let transformed = match transform {
        TransformFlag::None => lts,
        TransformFlag::Restrict => restrict_high(&lts, &high),
        TransformFlag::Hide => hide_high(&lts, &high),
    };
    match format {
        FormatFlag::Aut => emit(&export_aut(&transformed)),
        FormatFlag::Dot => emit(&export_dot(&transformed, None)),
    }
    Ok(EXIT_HOLDS)
}

fn cmd_taxonomy(
    file: &Path,
    process: &str,
    json: bool,
    depth: usize,
    max_states: Option<usize>,
) -> Result<i32, Failure> {
    let model = load_model(file)?;
    let limits = resolve_limits(max_states)?;
    let bounds = NdcBounds {
        attacker_depth: depth,
        ..NdcBounds::default()
    };

    let start = Instant::now();
    let lts = build_root(&model, process, &limits)?;
    let report = taxonomy_report(&model, process, &bounds, &limits).map_err(check_failure)?;
    let ms = start.elapsed().as_millis() as u64;

    if json {
        let rows: Vec<serde_json::Value> = report
            .rows
            .iter()
            .map(|(id, verdict)| {
                let mut row = json!({
                    "property": id.to_string(),
                    "relation": match id.relation {
                        Relation::Branching => "branching",
                        _ => "weak",
                    },
                    "outcome": verdict.outcome.to_string(),
                });
                if let Some(w) = verdict.evidence.as_ref().and_then(witness_json) {
                    row["witness"] = w;
                }
                row
            })
            .collect();
        let out = json!({
            "process": process,
            "rows": rows,
            "consistent": report.is_consistent(),
            "stats": {
                "states": lts.num_states(),
                "transitions": lts.num_transitions(),
                "ms": ms,
            },
        });
        emit(&format!("{out:#}\n"));
    } else {
        emit(&report.render_table());
    }
    if report.is_consistent() {
        Ok(EXIT_HOLDS)
    } else {
        Ok(EXIT_INCONSISTENT)
    }
}
