//! Command bodies. Each returns the text to print and the exit status, so
//! the binary only parses flags and writes output.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::json;
use trivalent::characterize::{derive_classical, replay_witness};
use trivalent::closure::{SetFile, UniverseSpec};
use trivalent::formula::parse_inference;
use trivalent::scheme::{bnm_violation, enumerate_bnm_schemes, Preset};
use trivalent::{Error, Result, Scheme, Standard, TruthValue, Valuation};

use crate::config::{logic, Format, Mode};

/// Exit statuses: success, a negative verdict, a usage or input error.
pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub output: String,
    pub code: i32,
}

impl Outcome {
    fn new(output: String, ok: bool) -> Outcome {
        Outcome {
            output,
            code: if ok { EXIT_OK } else { EXIT_NEGATIVE },
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize") + "\n"
}

#[derive(Serialize)]
struct Verdict {
    logic: String,
    valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    countervaluation: Option<Valuation>,
}

pub fn check(
    inference: &str,
    schemes: &[String],
    standards: &[String],
    allow_non_bnm: bool,
    format: Format,
) -> Result<Outcome> {
    let inf = parse_inference(inference)?;
    let mut verdicts = Vec::new();
    for s in schemes {
        for std in standards {
            let l = logic(s, std.parse::<Standard>()?, allow_non_bnm)?;
            let cv = l.find_countervaluation(&inf)?;
            verdicts.push(Verdict {
                logic: l.label(),
                valid: cv.is_none(),
                countervaluation: cv,
            });
        }
    }
    let ok = verdicts.iter().all(|v| v.valid);
    let output = match format {
        Format::Json => to_json(&json!({ "inference": inf, "results": verdicts })),
        Format::Text => {
            let mut out = String::new();
            for v in &verdicts {
                match &v.countervaluation {
                    None => {
                        let _ = writeln!(out, "{}: valid", v.logic);
                    }
                    Some(cv) => {
                        let _ = writeln!(out, "{}: invalid, countervaluation {cv}", v.logic);
                    }
                }
            }
            out
        }
    };
    Ok(Outcome::new(output, ok))
}

pub fn derive(inference: &str, tt_scheme: &str, ss_scheme: &str, format: Format) -> Result<Outcome> {
    let inf = parse_inference(inference)?;
    let tt = logic(tt_scheme, Standard::TT, false)?;
    let ss = logic(ss_scheme, Standard::SS, false)?;
    let Some(w) = derive_classical(&inf, &tt, &ss)? else {
        let output = match format {
            Format::Json => to_json(&json!({ "inference": inf, "classically_valid": false })),
            Format::Text => format!("{inf}: not classically valid\n"),
        };
        return Ok(Outcome::new(output, false));
    };
    let replayed = replay_witness(&w)?;
    let ok = w.is_accepted() && replayed;
    let output = match format {
        Format::Json => to_json(&json!({
            "inference": inf,
            "classically_valid": true,
            "witness": w,
            "replayed": replayed,
            "accepted": ok,
        })),
        Format::Text => {
            let mut out = String::new();
            let delta: Vec<String> = w.delta.iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "inference: {inf}");
            let _ = writeln!(out, "delta: {{{}}}", delta.join(", "));
            let mark = |b: bool| if b { "valid" } else { "INVALID" };
            for (step, valid) in &w.tt_checks {
                let _ = writeln!(out, "  {}: {step}  {}", tt.label(), mark(*valid));
            }
            let _ = writeln!(out, "  {}: {}  {}", ss.label(), w.ss_check.0, mark(w.ss_check.1));
            let _ = writeln!(out, "cut closure recovers the inference: {}", if replayed { "yes" } else { "no" });
            let _ = writeln!(out, "{}", if ok { "derived" } else { "not derived" });
            out
        }
    };
    Ok(Outcome::new(output, ok))
}

#[derive(Serialize)]
struct SchemeRow {
    id: u8,
    label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    preset: Option<&'static str>,
    neg: [TruthValue; 3],
    and: [[TruthValue; 3]; 3],
    or: [[TruthValue; 3]; 3],
}

pub fn schemes(named: bool, check_file: Option<&Path>, format: Format) -> Result<Outcome> {
    if let Some(path) = check_file {
        let s = Scheme::load(path, true)?;
        let violation = bnm_violation(&s);
        let output = match format {
            Format::Json => to_json(&json!({
                "file": path.display().to_string(),
                "bnm": violation.is_none(),
                "id": s.id(),
                "violation": violation,
            })),
            Format::Text => match &violation {
                None => format!("{}: BNM scheme {}\n", path.display(), s.label()),
                Some(why) => format!("{}: rejected, {why}\n", path.display()),
            },
        };
        return Ok(Outcome::new(output, violation.is_none()));
    }
    let rows: Vec<SchemeRow> = enumerate_bnm_schemes()
        .into_iter()
        .map(|s| {
            let id = s.id().expect("enumerated schemes are BNM");
            let preset = Preset::ALL.into_iter().find(|p| p.id() == id).map(Preset::name);
            SchemeRow {
                id,
                label: s.label(),
                preset: if named { preset } else { None },
                neg: s.neg,
                and: s.conj,
                or: s.disj,
            }
        })
        .collect();
    let output = match format {
        Format::Json => to_json(&rows),
        Format::Text => {
            let mut out = String::from("id  code    and(0,i) and(i,0) or(1,i) or(i,1)\n");
            let v = TruthValue::symbol;
            for r in &rows {
                let (f, i, t) = (TruthValue::F.index(), TruthValue::I.index(), TruthValue::T.index());
                let mut line = format!(
                    "{:<3} {:#06b}  {:<8} {:<8} {:<7} {:<7}",
                    r.id,
                    r.id,
                    v(r.and[f][i]),
                    v(r.and[i][f]),
                    v(r.or[t][i]),
                    v(r.or[i][t])
                );
                if let Some(p) = r.preset {
                    line.push(' ');
                    line.push_str(p);
                }
                let _ = writeln!(out, "{}", line.trim_end());
            }
            out
        }
    };
    Ok(Outcome::new(output, true))
}

pub fn closure(text: &str, mode: Mode, universe: impl FnOnce(Option<UniverseSpec>) -> UniverseSpec, format: Format) -> Result<Outcome> {
    let file = SetFile::parse(text)?;
    let spec = universe(file.universe.clone());
    let u = spec.build()?;
    let result = match mode {
        Mode::T => trivalent::closure::transitive_closure(&file.set, &u)?,
        Mode::Td => trivalent::closure::dual_transitive_closure(&file.set, &u)?,
        Mode::Tar => trivalent::closure::tarskian_closure(&file.set, &u)?,
    };
    let mode_name = match mode {
        Mode::T => "t",
        Mode::Td => "td",
        Mode::Tar => "tar",
    };
    let output = match format {
        Format::Json => to_json(&json!({
            "mode": mode_name,
            "relative": true,
            "universe": spec.to_string(),
            "size": result.len(),
            "set": result,
        })),
        Format::Text => {
            let out = SetFile {
                universe: Some(spec.clone()),
                set: result.clone(),
            };
            format!(
                "# {mode_name} closure, relative to the universe below ({} of {} inferences)\n{}",
                result.len(),
                u.inference_count(),
                out.to_text()
            )
        }
    };
    Ok(Outcome::new(output, true))
}

/// Parse and input errors map to the usage status.
pub fn failure(e: &Error) -> Outcome {
    Outcome {
        output: format!("error: {e}\n"),
        code: EXIT_USAGE,
    }
}

