//! Command-line front end: translation, finite model checking, clause
//! checking, synthesis encoding and the built-in fixtures.
//!
//! Exit codes: 0 for success or a true verdict, 1 for a false or
//! unsatisfiable verdict, 2 for usage and input errors, 3 when a search cap
//! is exceeded.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value as Json};

use ehc_trans::emit::{
    clauses_from_json, clauses_to_json, emit_text, interpretation_from_json, interpretation_to_json, parse_text,
    psi_from_json, system_from_json, ClauseSetJson, FiniteSystemJson, InterpretationJson, PsiJson,
};
use ehc_trans::fixtures::{self, Fixture};
use ehc_trans::frontend::{parse_domains, parse_formula, parse_partial_program, parse_program, print_program, to_nnf};
use ehc_trans::interp::{
    check_clause_set, compose_witness, enumerate_interpretations, EnumOptions, Enumeration, Interpretation,
};
use ehc_trans::oracle::{model_check, show_value, FiniteSystem};
use ehc_trans::syntax::{ClauseSet, Domains, StateFormula};
use ehc_trans::synthesis::{apply_resolving, delta_synth, enumerate_resolving, make_hole_predicates};
use ehc_trans::trans::{clause_count_bound, translate};

#[derive(Parser)]
#[command(
    name = "ehc-trans",
    version,
    about = "Translate CTL* verification and synthesis problems into existential Horn clauses"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(clap::Args)]
struct Output {
    /// Write the clauses here instead of standard output.
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Translate a program and a CTL* specification into clauses.
    Translate {
        program: PathBuf,
        /// A specification file, or the formula itself.
        spec: String,
        #[command(flatten)]
        out: Output,
        /// Print the count report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Decide a specification on a program over finite domains, or on an
    /// explicit system given as JSON.
    ModelCheck {
        input: PathBuf,
        spec: String,
        /// Variable ranges, e.g. `x=0..3; Int=-1..1`.
        #[arg(long, default_value = "")]
        domain: String,
        #[arg(long)]
        json: bool,
    },
    /// Check that an interpretation is a model of a clause set.
    CheckInterp {
        clauses: PathBuf,
        interp: PathBuf,
        /// Ranges to check over. Defaults to the domain stored with the
        /// interpretation.
        #[arg(long)]
        domain: Option<String>,
        /// Report every violated clause instead of the first.
        #[arg(long)]
        all: bool,
        #[arg(long)]
        json: bool,
    },
    /// Hole-filling synthesis.
    Synth {
        #[command(subcommand)]
        command: SynthCommand,
    },
    /// Search exhaustively for a model of a clause set.
    Enumerate {
        clauses: PathBuf,
        #[arg(long)]
        domain: String,
        /// Maximum number of search decisions.
        #[arg(long, default_value_t = 1_000_000)]
        cap: u64,
        #[arg(long)]
        json: bool,
    },
    /// The built-in problems.
    Fixtures {
        #[command(subcommand)]
        command: FixtureCommand,
    },
}

#[derive(Subcommand)]
enum SynthCommand {
    /// Encode a partial program and a specification as clauses.
    Encode {
        partial: PathBuf,
        spec: String,
        #[command(flatten)]
        out: Output,
        #[arg(long)]
        json: bool,
    },
    /// Fill the holes of a partial program and print the result.
    Apply {
        partial: PathBuf,
        /// A resolving function as JSON.
        psi: PathBuf,
        #[arg(long, default_value = "")]
        domain: String,
        /// Require assignment fillings to be deterministic.
        #[arg(long)]
        strict: bool,
    },
}

#[derive(Subcommand)]
enum FixtureCommand {
    /// List every fixture.
    List {
        #[arg(long)]
        json: bool,
    },
    /// Print a fixture's program, specification and domains.
    Show { name: String },
    /// Translate a fixture and, when it is finite, decide it.
    Run {
        name: String,
        #[arg(long)]
        json: bool,
    },
}

/// Outcome of a command that succeeded in reaching a verdict.
enum Verdict {
    Yes,
    No,
    Cap,
}

impl Verdict {
    fn of(b: bool) -> Self {
        if b {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }

    fn code(self) -> ExitCode {
        match self {
            Verdict::Yes => ExitCode::SUCCESS,
            Verdict::No => ExitCode::from(1),
            Verdict::Cap => ExitCode::from(3),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(v) => v.code(),
        Err(e) => {
            eprintln!("error: {e:#}");
            let capped = e.chain().any(|c| {
                matches!(
                    c.downcast_ref::<ehc_trans::Error>(),
                    Some(ehc_trans::Error::CapExceeded(_) | ehc_trans::Error::StateCap { .. })
                )
            });
            ExitCode::from(if capped { 3 } else { 2 })
        }
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

/// The contents of the file `arg` names, or `arg` itself when no such file
/// exists.
fn text_or_file(arg: &str) -> anyhow::Result<String> {
    let p = Path::new(arg);
    if p.is_file() {
        read(p)
    } else {
        Ok(arg.to_string())
    }
}

fn is_json(src: &str) -> bool {
    src.trim_start().starts_with('{')
}

fn read_clauses(path: &Path) -> anyhow::Result<ClauseSet> {
    let src = read(path)?;
    let cs = if is_json(&src) {
        clauses_from_json(&serde_json::from_str::<ClauseSetJson>(&src)?)?
    } else {
        parse_text(&src)?
    };
    Ok(cs)
}

fn write_clauses(cs: &ClauseSet, out: &Output) -> anyhow::Result<()> {
    let mut text = match out.format {
        Format::Text => emit_text(cs),
        Format::Json => serde_json::to_string_pretty(&clauses_to_json(cs))?,
    };
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &out.output {
        Some(p) => std::fs::write(p, text).with_context(|| format!("cannot write {}", p.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn print_verdict(json: bool, value: Json, text: &str) {
    if json {
        println!("{value}");
    } else {
        println!("{text}");
    }
}

/// The count report goes to standard error so that it never mixes with
/// clauses written to standard output.
fn report(json: bool, value: Json, text: &str) {
    if json {
        eprintln!("{value}");
    } else {
        eprintln!("{text}");
    }
}

fn run(cmd: Command) -> anyhow::Result<Verdict> {
    match cmd {
        Command::Translate { program, spec, out, json } => {
            let p = parse_program(&read(&program)?)?;
            let phi = parse_formula(&text_or_file(&spec)?, &p.vars)?;
            let tr = translate(&p, &phi)?;
            write_clauses(&tr.clauses, &out)?;
            let n = to_nnf(&phi).size();
            let bound = clause_count_bound(n, p.fairness.len());
            report(
                json,
                json!({ "clauses": tr.clauses.len(), "predicates": tr.clauses.preds.len(), "bound": bound }),
                &format!("{} clauses over {} predicates (bound {bound})", tr.clauses.len(), tr.clauses.preds.len()),
            );
            Ok(Verdict::Yes)
        }
        Command::ModelCheck { input, spec, domain, json } => {
            let src = read(&input)?;
            let sys = if is_json(&src) {
                system_from_json(&serde_json::from_str::<FiniteSystemJson>(&src)?)?
            } else {
                FiniteSystem::expand(&parse_program(&src)?, &parse_domains(&domain)?)?
            };
            let phi = parse_formula(&text_or_file(&spec)?, &sys.vars)?;
            let mc = model_check(&sys, &phi)?;
            let violations: Vec<String> = mc.violations.iter().map(|&s| show_state(&sys, s)).collect();
            let mut text = if mc.holds { "true".to_string() } else { "false".to_string() };
            for v in violations.iter().take(10) {
                text.push_str(&format!("\n  violated at {v}"));
            }
            print_verdict(json, json!({ "holds": mc.holds, "states": sys.len(), "violations": violations }), &text);
            Ok(Verdict::of(mc.holds))
        }
        Command::CheckInterp { clauses, interp, domain, all, json } => {
            let cs = read_clauses(&clauses)?;
            let ij: InterpretationJson = serde_json::from_str(&read(&interp)?)?;
            let d = match (&domain, &ij.domain) {
                (Some(s), _) => parse_domains(s)?,
                (None, Some(d)) => ehc_trans::emit::domains_from_json(d)?,
                (None, None) => Domains::new(),
            };
            let i = interpretation_from_json(&ij, &cs.preds, &d)?;
            let failures = check_clause_set(&cs, &i, &d, !all)?;
            let mut text = if failures.is_empty() { "model".to_string() } else { "not a model".to_string() };
            for f in &failures {
                text.push_str(&format!("\n  {f}"));
            }
            print_verdict(json, json!({ "model": failures.is_empty(), "failures": failures }), &text);
            Ok(Verdict::of(failures.is_empty()))
        }
        Command::Synth { command: SynthCommand::Encode { partial, spec, out, json } } => {
            let pp = parse_partial_program(&read(&partial)?)?;
            let phi = parse_formula(&text_or_file(&spec)?, &pp.program.vars)?;
            let st = delta_synth(&pp, &phi)?;
            write_clauses(st.clauses(), &out)?;
            let holes: Vec<&str> = st.holes.iter().map(|h| &*h.pred.name).collect();
            report(
                json,
                json!({ "clauses": st.clauses().len(), "holes": holes }),
                &format!("{} clauses, hole predicates: {}", st.clauses().len(), holes.join(", ")),
            );
            Ok(Verdict::Yes)
        }
        Command::Synth { command: SynthCommand::Apply { partial, psi, domain, strict } } => {
            let pp = parse_partial_program(&read(&partial)?)?;
            let d = parse_domains(&domain)?;
            let holes = make_hole_predicates(&pp)?;
            let pj: PsiJson = serde_json::from_str(&read(&psi)?)?;
            let p = apply_resolving(&pp, &psi_from_json(&pj, &holes, &d)?, strict)?;
            print!("{}", print_program(&p));
            Ok(Verdict::Yes)
        }
        Command::Enumerate { clauses, domain, cap, json } => {
            let cs = read_clauses(&clauses)?;
            let d = parse_domains(&domain)?;
            let opts = EnumOptions { max_decisions: cap, ..EnumOptions::default() };
            let result = enumerate_interpretations(&cs, &d, opts)?;
            let (verdict, text, value) = match &result {
                Enumeration::Sat(i) => (
                    Verdict::Yes,
                    format!("SAT\n{}", show_interp(i)),
                    json!({ "verdict": "SAT", "model": interpretation_to_json(i, &d) }),
                ),
                Enumeration::Unsat => (Verdict::No, "UNSAT".into(), json!({ "verdict": "UNSAT" })),
                Enumeration::CapExceeded(m) => {
                    (Verdict::Cap, format!("CAP_EXCEEDED: {m}"), json!({ "verdict": "CAP_EXCEEDED", "reason": m }))
                }
            };
            print_verdict(json, value, text.trim_end());
            Ok(verdict)
        }
        Command::Fixtures { command: FixtureCommand::List { json } } => {
            let all = fixtures::all();
            if json {
                let rows: Vec<Json> = all
                    .iter()
                    .map(|f| json!({ "name": f.name, "suite": f.suite.name(), "about": f.about, "partial": f.partial }))
                    .collect();
                println!("{}", Json::Array(rows));
            } else {
                let w = all.iter().map(|f| f.name.len()).max().unwrap_or(0);
                let mut stdout = std::io::stdout().lock();
                for f in &all {
                    // A closed pipe (as with `| head`) just ends the listing.
                    if writeln!(stdout, "{:w$}  {:11}  {}", f.name, f.suite.name(), f.about).is_err() {
                        break;
                    }
                }
            }
            Ok(Verdict::Yes)
        }
        Command::Fixtures { command: FixtureCommand::Show { name } } => {
            let f = fixture(&name)?;
            println!("# {}", f.about);
            println!("{}", f.source.trim_end());
            println!("# spec: {}", f.spec);
            if !f.domains.is_empty() {
                println!("# domain: {}", f.domains);
            }
            Ok(Verdict::Yes)
        }
        Command::Fixtures { command: FixtureCommand::Run { name, json } } => run_fixture(&fixture(&name)?, json),
    }
}

fn fixture(name: &str) -> anyhow::Result<Fixture> {
    match fixtures::by_name(name) {
        Some(f) => Ok(f),
        None => bail!("no fixture named `{name}` (see `fixtures list`)"),
    }
}

fn show_state(sys: &FiniteSystem, s: usize) -> String {
    let parts: Vec<String> =
        sys.vars.iter().zip(&sys.states[s]).map(|(v, x)| format!("{v}={}", show_value(&v.sort, x))).collect();
    format!("({})", parts.join(", "))
}

fn show_interp(i: &Interpretation) -> String {
    let mut out = String::new();
    for (name, rel) in &i.rels {
        let tuples: Vec<String> = rel
            .tuples()
            .map(|t| {
                let vals: Vec<String> = rel.pred.params.iter().zip(&t).map(|(p, x)| show_value(&p.sort, x)).collect();
                format!("({})", vals.join(", "))
            })
            .collect();
        out.push_str(&format!("{name} = {{{}}}\n", tuples.join(", ")));
    }
    out
}

fn run_fixture(f: &Fixture, json: bool) -> anyhow::Result<Verdict> {
    let phi: StateFormula = f.formula()?;
    let d = f.domains()?;
    let mut lines = vec![format!("{} ({}): {}", f.name, f.suite.name(), f.about)];
    let mut value = json!({ "name": f.name });
    let verdict = if f.partial {
        let pp = f.partial_program()?;
        let st = delta_synth(&pp, &phi)?;
        lines.push(format!("{} clauses, {} holes", st.clauses().len(), st.holes.len()));
        value["clauses"] = json!(st.clauses().len());
        if f.is_finite() {
            let fills = enumerate_resolving(&st.holes, &d, false, 1 << 16)?;
            let mut good = 0;
            for psi in &fills {
                let p = apply_resolving(&pp, psi, false)?;
                if model_check(&FiniteSystem::expand(&p, &d)?, &phi)?.holds {
                    good += 1;
                }
            }
            lines.push(format!("{good} of {} fillings satisfy the specification", fills.len()));
            value["fillings"] = json!(fills.len());
            value["satisfying"] = json!(good);
            Verdict::of(good > 0)
        } else {
            Verdict::Yes
        }
    } else {
        let p = f.program()?;
        let tr = translate(&p, &phi)?;
        lines.push(format!("{} clauses", tr.clauses.len()));
        value["clauses"] = json!(tr.clauses.len());
        if f.is_finite() {
            let holds = model_check(&FiniteSystem::expand(&p, &d)?, &phi)?.holds;
            lines.push(format!("holds: {holds}"));
            value["holds"] = json!(holds);
            if holds {
                let w = compose_witness(&tr, &d)?;
                let ok = check_clause_set(&tr.clauses, &w, &d, true)?.is_empty();
                lines.push(format!("witness is a model: {ok}"));
                value["witness_model"] = json!(ok);
            }
            Verdict::of(holds)
        } else {
            Verdict::Yes
        }
    };
    print_verdict(json, value, &lines.join("\n"));
    Ok(verdict)
}
