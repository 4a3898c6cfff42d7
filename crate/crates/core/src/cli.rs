//! Command-line front end. Machine output goes to `out`, diagnostics to
//! `err`; the return value is the process exit code.

use crate::closure::{il_close, m0_close, wstar_close};
use crate::conditions::{check_class_condition, FrameClass};
use crate::construct::{construct_model_with, ConstructError, ConstructOptions};
use crate::formula::{adequate_closure, parse_with_lints, Formula};
use crate::model::{to_dot, FrameFile, LabeledFrame};
use crate::search::{axiom_soundness_suite_with, find_countermodel_with, satisfiable_with, Outcome, SearchOptions};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "veltman", version, about = "Interpretability logic toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the canonical form of a formula.
    Parse { formula: String },
    /// Check whether a world of a model file forces a formula.
    CheckModel { file: PathBuf, world: String, formula: String },
    /// Report which frame conditions a frame file satisfies.
    Classify { file: PathBuf },
    /// Close a labeled quasi-frame to an adequate frame.
    Close {
        file: PathBuf,
        #[arg(long, value_parser = parse_class)]
        logic: FrameClass,
    },
    /// Search for a countermodel up to a number of worlds.
    Decide {
        formula: String,
        #[arg(long, value_parser = parse_class)]
        class: FrameClass,
        #[arg(long)]
        max_worlds: usize,
        /// Single worker; output is reproducible byte for byte.
        #[arg(long)]
        deterministic: bool,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Search for a model of all formulas at one world.
    Sat {
        #[arg(required = true)]
        formulas: Vec<String>,
        #[arg(long, value_parser = parse_class)]
        class: FrameClass,
        #[arg(long)]
        max_worlds: usize,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Run the axiom instance battery for a class.
    Soundness {
        #[arg(long, value_parser = parse_class)]
        class: FrameClass,
        #[arg(long)]
        max_worlds: usize,
    },
    /// Build a model of a formula by eliminating problems and deficiencies.
    Construct {
        formula: String,
        #[arg(long, value_parser = parse_class)]
        logic: FrameClass,
        #[arg(long, default_value_t = 50)]
        budget: usize,
        #[arg(long, default_value_t = 3)]
        bound: usize,
        /// Check every invariant after every step.
        #[arg(long)]
        debug: bool,
        /// Also write the step log to this file.
        #[arg(long)]
        log: Option<PathBuf>,
    },
}

fn parse_class(s: &str) -> Result<FrameClass, String> {
    s.parse()
}

struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

fn formula(text: &str, err: &mut dyn Write) -> Result<Formula, InputError> {
    let (f, lints) = parse_with_lints(text).map_err(|e| InputError(format!("{text:?}: {e}")))?;
    for lint in lints {
        let _ = writeln!(err, "warning: {lint}");
    }
    Ok(f)
}

fn read(path: &Path) -> Result<FrameFile, InputError> {
    let text = std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    Ok(FrameFile::from_json(&text)?)
}

fn emit(out: &mut dyn Write, value: &Value) {
    let _ = writeln!(out, "{}", serde_json::to_string_pretty(value).expect("json value"));
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("plain data serializes")
}

/// Runs the tool on `argv` (program name first).
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_YES
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_INPUT
                }
            };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(InputError(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
    }
}

fn verdict(yes: bool) -> i32 {
    if yes {
        EXIT_YES
    } else {
        EXIT_NO
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, InputError> {
    match cmd {
        Command::Parse { formula: text } => {
            let f = formula(&text, err)?;
            let _ = writeln!(out, "{f}");
            Ok(EXIT_YES)
        }
        Command::CheckModel { file, world, formula: text } => {
            let model = read(&file)?.model()?;
            let f = formula(&text, err)?;
            let report = model.frame.validate();
            if !report.is_ok() {
                return Err(InputError(format!("not an IL-frame:\n{report}")));
            }
            let forced = model.forces(&world, &f)?;
            emit(out, &json!({ "world": world, "formula": f.to_string(), "forced": forced }));
            Ok(verdict(forced))
        }
        Command::Classify { file } => {
            let frame = read(&file)?.frame()?;
            let mut classes = serde_json::Map::new();
            let mut is_il = false;
            for class in FrameClass::ALL {
                let report = check_class_condition(&frame, class);
                if class == FrameClass::IL {
                    is_il = report.is_ok();
                }
                classes.insert(class.to_string(), json!({ "holds": report.is_ok(), "violations": to_value(&report.violations) }));
            }
            emit(out, &Value::Object(classes));
            Ok(verdict(is_il))
        }
        Command::Close { file, logic } => {
            let lf = read(&file)?.labeled_frame()?;
            let closed = match logic {
                FrameClass::IL => il_close(&lf),
                FrameClass::ILM0 => m0_close(&lf),
                FrameClass::ILWstar => wstar_close(&lf, &label_closure(&lf)),
                FrameClass::ILW => return Err(InputError("closure is defined for il, ilm0 and ilwstar".into())),
            };
            match closed {
                Ok(closed) => {
                    let _ = writeln!(out, "{}", closed.to_json());
                    Ok(EXIT_YES)
                }
                Err(e) => {
                    let _ = writeln!(err, "{e}");
                    Ok(EXIT_NO)
                }
            }
        }
        Command::Decide { formula: text, class, max_worlds, deterministic, workers } => {
            let f = formula(&text, err)?;
            check_bound(max_worlds)?;
            let workers = if deterministic { 1 } else { workers };
            let v = find_countermodel_with(&f, class, max_worlds, SearchOptions { workers });
            let mut body = json!({
                "formula": f.to_string(),
                "class": class.to_string(),
                "max_worlds": max_worlds,
                "frames_examined": v.frames_examined,
                "conclusive": v.conclusive(),
                "message": v.to_string(),
            });
            match &v.outcome {
                Outcome::Countermodel { model, world } => {
                    body["verdict"] = json!("countermodel");
                    body["world"] = json!(world);
                    body["model"] = to_value(&FrameFile::from_model(model));
                    body["dot"] = json!(to_dot(model, None));
                }
                Outcome::NoCounterexampleUpTo(_) => body["verdict"] = json!("no-counterexample"),
            }
            emit(out, &body);
            Ok(verdict(!v.is_countermodel()))
        }
        Command::Sat { formulas, class, max_worlds, workers } => {
            let gamma = formulas.iter().map(|t| formula(t, err)).collect::<Result<Vec<_>, _>>()?;
            check_bound(max_worlds)?;
            let v = satisfiable_with(&gamma, class, max_worlds, SearchOptions { workers });
            let mut body = json!({
                "formulas": gamma.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
                "class": class.to_string(),
                "max_worlds": max_worlds,
                "satisfiable": v.is_sat(),
                "frames_examined": v.frames_examined,
                "message": v.to_string(),
            });
            if let Some((model, world)) = &v.witness {
                body["world"] = json!(world);
                body["model"] = to_value(&FrameFile::from_model(model));
                body["dot"] = json!(to_dot(model, None));
            }
            emit(out, &body);
            Ok(verdict(v.is_sat()))
        }
        Command::Soundness { class, max_worlds } => {
            check_bound(max_worlds)?;
            let report = axiom_soundness_suite_with(class, max_worlds, SearchOptions::deterministic());
            for e in report.failures() {
                let _ = writeln!(err, "FAIL {} {}: {}", e.schema, e.instance, e.verdict);
            }
            emit(out, &to_value(&report));
            Ok(verdict(report.all_pass()))
        }
        Command::Construct { formula: text, logic, budget, bound, debug, log } => {
            let f = formula(&text, err)?;
            check_bound(bound)?;
            if logic == FrameClass::ILW {
                return Err(InputError("construct supports il, ilm0 and ilwstar".into()));
            }
            let opts = ConstructOptions { debug, search: SearchOptions::deterministic() };
            let result = construct_model_with(&f, logic, budget, bound, opts);
            let steps: Vec<String> = match &result {
                Ok(c) => c.steps.iter().map(|s| s.to_string()).collect(),
                Err(e) => e.steps().iter().map(|s| s.to_string()).collect(),
            };
            if let Some(path) = log {
                let text: String = steps.iter().map(|s| format!("{s}\n")).collect();
                std::fs::write(&path, text).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
            }
            let mut body = json!({
                "formula": f.to_string(),
                "logic": logic.to_string(),
                "budget": budget,
                "bound": bound,
                "steps": steps,
            });
            match result {
                Ok(c) => {
                    body["constructed"] = json!(true);
                    body["root"] = json!(c.root);
                    body["frame"] = to_value(&FrameFile::from_labeled(&c.frame));
                    body["dot"] = json!(to_dot(&c.model, Some(&c.frame)));
                    emit(out, &body);
                    Ok(EXIT_YES)
                }
                Err(e) => {
                    let _ = writeln!(err, "construction aborted: {e}");
                    body["constructed"] = json!(false);
                    body["reason"] = json!(e.to_string());
                    emit(out, &body);
                    Ok(if matches!(e, ConstructError::UnsupportedLogic(_)) { EXIT_INPUT } else { EXIT_NO })
                }
            }
        }
    }
}

fn check_bound(n: usize) -> Result<(), InputError> {
    if (1..=crate::search::MAX_WORLDS).contains(&n) {
        Ok(())
    } else {
        Err(InputError(format!("world bound must be between 1 and {}", crate::search::MAX_WORLDS)))
    }
}

/// Adequate closure of every formula in the labels.
fn label_closure(lf: &LabeledFrame) -> crate::formula::AdequateSet {
    let all: Vec<Formula> = lf.labels().iter().flat_map(|l| l.iter().cloned()).collect();
    adequate_closure(&all)
}
