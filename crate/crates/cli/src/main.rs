use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bellmono_core::bell::roman_label;
use bellmono_core::catalog::Catalog;
use bellmono_core::document::{box_to_json, expression_from_json};
use bellmono_core::monogamy::{
    claim3_box, contradiction_number, minimal_witness_sets, strong_contradiction_number,
    verify_claim3, ContradictionReport, ExtensionOptions, MonogamyVerdict, RelationOptions,
    RelationRegistry, DEFAULT_LP_CAP,
};
use bellmono_core::rational::format as fmt;
use bellmono_core::solve::{local_bound, ns_bound};
use bellmono_core::{BellExpression, Error};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

const EXIT_FAILS: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_CAP: u8 = 3;

#[derive(Parser)]
#[command(
    name = "bellmono",
    version,
    about = "Exact local and no-signaling bounds and monogamy checks for Bell expressions"
)]
struct Cli {
    /// Print machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads for strategy enumeration (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the built-in expression families.
    Catalog,
    /// Local and/or no-signaling optimum of an expression.
    Bound {
        #[command(flatten)]
        source: Source,
        #[arg(long, conflicts_with_all = ["ns", "both"])]
        local: bool,
        #[arg(long, conflicts_with = "both")]
        ns: bool,
        #[arg(long)]
        both: bool,
        /// Write the no-signaling optimal box as a box document.
        #[arg(long, value_name = "PATH")]
        witness_out: Option<PathBuf>,
    },
    /// Contradiction number and its witness set of Bob settings.
    Contradiction {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        strong: bool,
        /// List every minimal witness set instead of the first.
        #[arg(long)]
        all: bool,
    },
    /// Check a monogamy relation over several Bobs.
    Monogamy {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_parser = ["thm1", "eq4", "obs1"])]
        relation: String,
        /// Number of Bobs; defaults to the count the relation prescribes.
        #[arg(long, value_name = "K")]
        bobs: Option<usize>,
        /// Run outside the classes where the relation is proven.
        #[arg(long)]
        force: bool,
        /// Use the strong contradiction number for eq4.
        #[arg(long, conflicts_with = "weak")]
        strong: bool,
        /// Use the weak contradiction number for eq4.
        #[arg(long)]
        weak: bool,
    },
    /// Re-derive every property of the three-setting counterexample.
    VerifyClaim3 {
        /// Write the tripartite box as a box document.
        #[arg(long, value_name = "PATH")]
        emit_box: Option<PathBuf>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Catalog name, e.g. chsh, chained-3, claim3, identity-unique-d3-m2x2.
    name: Option<String>,
    /// Expression document (JSON).
    #[arg(long, value_name = "PATH")]
    file: Option<PathBuf>,
}

impl Source {
    fn load(&self) -> Result<(String, BellExpression), Failure> {
        match (&self.name, &self.file) {
            (Some(name), _) => Ok((name.clone(), Catalog::builtin().build(name)?)),
            (None, Some(path)) => {
                let text =
                    std::fs::read_to_string(path).map_err(|e| Failure::io("read", path, &e))?;
                Ok((path.display().to_string(), expression_from_json(&text)?))
            }
            (None, None) => unreachable!("clap requires a source"),
        }
    }
}

/// A reportable failure with its exit code and JSON payload.
struct Failure {
    code: u8,
    payload: Value,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let mut payload = json!({ "error": e.kind(), "message": e.to_string() });
        let code = match e {
            Error::SizeCap { variables, cap } => {
                payload["variables"] = json!(variables);
                payload["cap"] = json!(cap);
                EXIT_CAP
            }
            _ => EXIT_INPUT,
        };
        Failure { code, payload }
    }
}

impl Failure {
    fn io(action: &str, path: &Path, e: &std::io::Error) -> Self {
        Failure {
            code: EXIT_INPUT,
            payload: json!({ "error": "io", "message": format!("cannot {action} {}: {e}", path.display()) }),
        }
    }

    fn usage(message: String) -> Self {
        Failure {
            code: EXIT_INPUT,
            payload: json!({ "error": "usage", "message": message }),
        }
    }
}

struct Outcome {
    code: u8,
    json: Value,
    text: String,
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| Failure::io("write", path, &e))
}

fn lp_cap() -> Result<usize, Failure> {
    match std::env::var("BELLMONO_LP_CAP") {
        Ok(v) => v.trim().parse().map_err(|_| {
            Failure::usage(format!(
                "BELLMONO_LP_CAP must be a nonnegative integer, got {v:?}"
            ))
        }),
        Err(_) => Ok(DEFAULT_LP_CAP),
    }
}

fn labels(set: impl IntoIterator<Item = usize>) -> Vec<String> {
    set.into_iter().map(roman_label).collect()
}

fn cmd_catalog() -> Outcome {
    let catalog = Catalog::builtin();
    let mut entries = Vec::new();
    let mut text = String::new();
    for family in catalog.families() {
        let example = family.example();
        let expr = catalog.build(&example).expect("catalog examples build");
        let s = expr.scenario();
        entries.push(json!({
            "name": family.pattern(),
            "example": example,
            "description": family.description(),
            "provenance": expr.provenance().kind(),
            "scenario": {
                "alice_settings": s.alice_settings(),
                "bob_settings": expr.bob_settings(),
                "outcomes": s.outcomes(),
            },
        }));
        text += &format!(
            "{:<26} {:<12} e.g. {} ({}x{} settings, {} outcomes): {}\n",
            family.pattern(),
            expr.provenance().kind(),
            example,
            s.alice_settings(),
            expr.bob_settings(),
            s.outcomes(),
            family.description()
        );
    }
    Outcome {
        code: 0,
        json: json!({ "families": entries }),
        text,
    }
}

fn cmd_bound(
    source: &Source,
    local: bool,
    ns: bool,
    witness_out: Option<&Path>,
) -> Result<Outcome, Failure> {
    let (label, expr) = source.load()?;
    let mut out = json!({ "expression": label });
    let mut text = format!("expression: {label}\n");
    if local {
        let (value, strategy) = local_bound(&expr);
        out["local"] = json!(fmt(&value));
        out["local_strategy"] = json!({ "alice": strategy.alice, "bob": strategy.bob });
        text += &format!("local: {}\n", fmt(&value));
    }
    if ns || witness_out.is_some() {
        let sol = ns_bound(&expr);
        if ns {
            out["ns"] = json!(fmt(&sol.value));
            text += &format!("ns: {}\n", fmt(&sol.value));
        }
        if let (Some(path), Some(witness)) = (witness_out, &sol.witness) {
            write_file(path, &box_to_json(witness))?;
        }
    }
    Ok(Outcome {
        code: 0,
        json: out,
        text,
    })
}

fn contradiction_json(r: &ContradictionReport) -> Value {
    json!({
        "number": r.number,
        "strong": r.strong,
        "witness_set": labels(r.witness_set.iter().copied()),
        "restricted_local": fmt(&r.restricted_local),
        "restricted_ns": fmt(&r.restricted_ns),
    })
}

fn cmd_contradiction(source: &Source, strong: bool, all: bool) -> Result<Outcome, Failure> {
    let (label, expr) = source.load()?;
    let report = if strong {
        strong_contradiction_number(&expr)?
    } else {
        contradiction_number(&expr)?
    };
    let mut out = contradiction_json(&report);
    out["expression"] = json!(label);
    let mut text = format!(
        "expression: {label}\n{} contradiction number: {}\nwitness set: {}\nrestricted local: {}\nrestricted ns: {}\n",
        if strong { "strong" } else { "weak" },
        report.number,
        serde_json::to_string(&labels(report.witness_set.iter().copied())).expect("strings serialize"),
        fmt(&report.restricted_local),
        fmt(&report.restricted_ns),
    );
    if all {
        let sets: Vec<Vec<String>> = minimal_witness_sets(&expr, strong)?
            .iter()
            .map(|r| labels(r.witness_set.iter().copied()))
            .collect();
        text += &format!(
            "all minimal witness sets: {}\n",
            serde_json::to_string(&sets).expect("strings serialize")
        );
        out["minimal_witness_sets"] = json!(sets);
    }
    Ok(Outcome {
        code: 0,
        json: out,
        text,
    })
}

fn verdict_outcome(label: &str, v: &MonogamyVerdict) -> Outcome {
    let mut out = json!({
        "expression": label,
        "relation": v.relation.label(),
        "bobs": v.bobs,
        "lhs": fmt(&v.lhs_optimum),
        "rhs": fmt(&v.rhs_bound),
        "holds": v.holds,
        "in_proven_scope": v.in_proven_scope,
    });
    let mut text = format!(
        "expression: {label}\nrelation: {}\nbobs: {}\nlhs: {}\nrhs: {}\nholds: {}\n",
        v.relation.label(),
        v.bobs,
        fmt(&v.lhs_optimum),
        fmt(&v.rhs_bound),
        v.holds
    );
    if let Some(c) = &v.contradiction {
        out["contradiction"] = contradiction_json(c);
        text += &format!(
            "contradiction number: {} ({})\n",
            c.number,
            if c.strong { "strong" } else { "weak" }
        );
    }
    if !v.in_proven_scope {
        text += "outside proven scope\n";
    }
    if v.is_violation_of_theorem() {
        out["implementation_bug"] = json!(true);
        text += "proven relation violated: implementation bug\n";
    }
    Outcome {
        code: if v.holds { 0 } else { EXIT_FAILS },
        json: out,
        text,
    }
}

fn cmd_monogamy(
    source: &Source,
    relation: &str,
    bobs: Option<usize>,
    force: bool,
    strong: Option<bool>,
) -> Result<Outcome, Failure> {
    let (label, expr) = source.load()?;
    let options = RelationOptions {
        bobs,
        force,
        strong,
        extension: ExtensionOptions {
            cap: lp_cap()?,
            ..Default::default()
        },
    };
    let registry = RelationRegistry::builtin();
    let verdict = registry.get(relation)?.check(&expr, &options)?;
    Ok(verdict_outcome(&label, &verdict))
}

fn cmd_verify_claim3(emit_box: Option<&Path>) -> Result<Outcome, Failure> {
    if let Some(path) = emit_box {
        write_file(path, &box_to_json(&claim3_box()))?;
    }
    let report = verify_claim3();
    let mut text = String::new();
    let mut assertions = Vec::new();
    for a in &report.assertions {
        text += &format!("{} {}\n", if a.passed() { "PASS" } else { "FAIL" }, a.name);
        let mut comparisons = Vec::new();
        for c in &a.comparisons {
            text += &format!(
                "    {}: expected {}, observed {}",
                c.quantity,
                fmt(&c.expected),
                fmt(&c.observed)
            );
            if !c.passed() {
                text += &format!(", discrepancy {}", fmt(&c.discrepancy()));
            }
            text.push('\n');
            comparisons.push(json!({
                "quantity": c.quantity,
                "expected": fmt(&c.expected),
                "observed": fmt(&c.observed),
                "discrepancy": fmt(&c.discrepancy()),
                "passed": c.passed(),
            }));
        }
        assertions
            .push(json!({ "name": a.name, "passed": a.passed(), "comparisons": comparisons }));
    }
    Ok(Outcome {
        code: if report.passed() { 0 } else { EXIT_FAILS },
        json: json!({ "passed": report.passed(), "assertions": assertions }),
        text,
    })
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Failure::usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::usage(e.to_string()))?;
    }
    match &cli.command {
        Command::Catalog => Ok(cmd_catalog()),
        Command::Bound {
            source,
            local,
            ns,
            both,
            witness_out,
        } => {
            let (l, n) = match (local, ns, both) {
                (false, false, _) | (_, _, true) => (true, true),
                _ => (*local, *ns),
            };
            cmd_bound(source, l, n, witness_out.as_deref())
        }
        Command::Contradiction {
            source,
            strong,
            all,
        } => cmd_contradiction(source, *strong, *all),
        Command::Monogamy {
            source,
            relation,
            bobs,
            force,
            strong,
            weak,
        } => {
            let choice = match (strong, weak) {
                (true, _) => Some(true),
                (_, true) => Some(false),
                _ => None,
            };
            cmd_monogamy(source, relation, *bobs, *force, choice)
        }
        Command::VerifyClaim3 { emit_box } => cmd_verify_claim3(emit_box.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let message = e.render().to_string();
            eprintln!(
                "{}",
                json!({ "error": "usage", "message": message.trim_end() })
            );
            return ExitCode::from(EXIT_INPUT);
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&outcome.json).expect("values serialize")
                );
            } else {
                print!("{}", outcome.text);
            }
            ExitCode::from(outcome.code)
        }
        Err(failure) => {
            eprintln!("{}", failure.payload);
            ExitCode::from(failure.code)
        }
    }
}
