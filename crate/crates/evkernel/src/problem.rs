//! JSON problem files, engine orchestration, and deterministic reports.
//!
//! A problem file names a frame, a prior (mass assignment or raw lower
//! bounds), a list of conditional rules, an engine selector, and options.
//! [`parse_problem`] resolves it against the frame; [`run_problem`] runs the
//! selected engine (or all of them plus the exact oracle) and produces a
//! report whose serialization is byte-deterministic for a fixed input and
//! tool version: canonical subset order, object keys sorted, floats rounded
//! to 12 significant digits, and no timestamps unless timing is requested.

use std::time::Instant;

use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::belief;
use crate::error::{Error, Result};
use crate::evidence::{MassFunction, SupportFunction};
use crate::interval::{self, ConsistencyReport, Violation};
use crate::lattice::{Frame, PropSet, DEFAULT_PARTITION_CAP};
use crate::oracle;
use crate::rules::{Rule, RuleBase};
use crate::API_TOLERANCE;

// ---------------------------------------------------------------------------
// Problem model
// ---------------------------------------------------------------------------

/// Which machinery a run should exercise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EngineChoice {
    /// Interval-Bayes check and refinement.
    Bayes,
    /// Optimistic-conditioning check and refinement.
    Optimistic,
    /// General (worst-case) conditional check; no refinement.
    GeneralCheck,
    /// Partition-bound refinement.
    Partition,
    /// Mass redistribution through transfer coefficients.
    Mass,
    /// Exact linear-programming bounds and definition-level check.
    Oracle,
    /// Every engine above, plus a pointwise comparison against the oracle.
    All,
}

impl EngineChoice {
    pub fn parse(name: &str) -> Result<EngineChoice> {
        match name {
            "bayes" => Ok(EngineChoice::Bayes),
            "optimistic" => Ok(EngineChoice::Optimistic),
            "general-check" => Ok(EngineChoice::GeneralCheck),
            "partition" => Ok(EngineChoice::Partition),
            "mass" => Ok(EngineChoice::Mass),
            "oracle" => Ok(EngineChoice::Oracle),
            "all" => Ok(EngineChoice::All),
            other => Err(Error::ValidationError(format!(
                "unknown engine {other:?}; expected one of bayes, optimistic, \
                 general-check, partition, mass, oracle, all"
            ))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            EngineChoice::Bayes => "bayes",
            EngineChoice::Optimistic => "optimistic",
            EngineChoice::GeneralCheck => "general-check",
            EngineChoice::Partition => "partition",
            EngineChoice::Mass => "mass",
            EngineChoice::Oracle => "oracle",
            EngineChoice::All => "all",
        }
    }
}

/// Run options, all optional in the file and overridable from the command
/// line.
#[derive(Clone, Copy, Debug)]
pub struct Options {
    /// Tolerance for the report's oracle-comparison verdicts.
    pub tolerance: f64,
    /// Run the oracle in exact rational arithmetic (stricter frame cap).
    pub exact: bool,
    /// Interleave the cheap coherence closure with optimistic refinement.
    pub closure: bool,
    /// Sweep budget for the fixpoint refinements (default `10 * 2^n`).
    pub max_sweeps: Option<usize>,
    /// Carrier-size cap for partition enumeration.
    pub partition_cap: usize,
    /// Include per-engine wall-clock times (makes the report
    /// non-deterministic).
    pub timing: bool,
}

impl Default for Options {
    fn default() -> Options {
        Options {
            tolerance: API_TOLERANCE,
            exact: false,
            closure: false,
            max_sweeps: None,
            partition_cap: DEFAULT_PARTITION_CAP,
            timing: false,
        }
    }
}

impl Options {
    fn sweep_cap(&self, frame: &Frame) -> usize {
        self.max_sweeps
            .unwrap_or_else(|| interval::default_sweep_cap(frame))
    }

    fn validate(&self) -> Result<()> {
        if !self.tolerance.is_finite() || self.tolerance < 0.0 {
            return Err(Error::ValidationError(format!(
                "tolerance must be a nonnegative number, got {}",
                self.tolerance
            )));
        }
        if self.max_sweeps == Some(0) {
            return Err(Error::ValidationError(
                "max_sweeps must be at least 1".into(),
            ));
        }
        if self.partition_cap == 0 {
            return Err(Error::ValidationError(
                "partition_cap must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// The prior body of evidence, as given.
#[derive(Clone, Debug)]
pub enum Prior {
    Mass(MassFunction),
    Bounds(SupportFunction),
}

impl Prior {
    /// The prior as a support function (beliefs for mass priors).
    pub fn support(&self) -> SupportFunction {
        match self {
            Prior::Mass(m) => m.to_belief(),
            Prior::Bounds(b) => b.clone(),
        }
    }

    /// The prior as a mass function; fails when raw bounds do not decompose.
    pub fn to_mass(&self) -> Result<MassFunction> {
        match self {
            Prior::Mass(m) => Ok(m.clone()),
            Prior::Bounds(b) => b.to_mass(),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Prior::Mass(_) => "mass",
            Prior::Bounds(_) => "bounds",
        }
    }
}

/// A fully resolved problem.
#[derive(Clone, Debug)]
pub struct Problem {
    pub frame: Frame,
    pub prior: Prior,
    pub rules: RuleBase,
    /// The rule list as given (for echoing), before compilation.
    pub rule_list: Vec<Rule>,
    pub engine: EngineChoice,
    pub options: Options,
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    frame: Vec<String>,
    #[serde(default)]
    prior: Option<RawPrior>,
    #[serde(default)]
    rules: Vec<RawRule>,
    #[serde(default)]
    engine: Option<String>,
    #[serde(default)]
    options: Option<RawOptions>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPrior {
    #[serde(rename = "type")]
    kind: String,
    #[serde(default)]
    entries: Vec<RawEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    set: Vec<String>,
    value: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRule {
    then: Vec<String>,
    given: Vec<String>,
    lower: f64,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOptions {
    #[serde(default)]
    tolerance: Option<f64>,
    #[serde(default)]
    exact: Option<bool>,
    #[serde(default)]
    closure: Option<bool>,
    #[serde(default)]
    max_sweeps: Option<usize>,
    #[serde(default)]
    partition_cap: Option<usize>,
    #[serde(default)]
    timing: Option<bool>,
}

/// Parses and resolves a JSON problem file. Malformed JSON or unknown fields
/// surface as [`Error::ParseError`] with the line and column; semantic
/// problems (unknown atoms, invalid masses, bad bounds) keep their specific
/// error types.
pub fn parse_problem(text: &str) -> Result<Problem> {
    let raw: RawProblem = serde_json::from_str(text).map_err(|e| Error::ParseError {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let frame = Frame::new(raw.frame)?;

    let prior = match &raw.prior {
        None => Prior::Mass(MassFunction::vacuous(&frame)),
        Some(rp) => {
            let mut resolved: Vec<(PropSet, f64)> = Vec::with_capacity(rp.entries.len());
            for e in &rp.entries {
                resolved.push((frame.subset(&e.set)?, e.value));
            }
            match rp.kind.as_str() {
                "mass" => {
                    if resolved.is_empty() {
                        Prior::Mass(MassFunction::vacuous(&frame))
                    } else {
                        Prior::Mass(MassFunction::new(
                            &frame,
                            resolved.iter().map(|(s, v)| (s, *v)),
                        )?)
                    }
                }
                "bounds" => Prior::Bounds(SupportFunction::from_lower_bounds(
                    &frame,
                    resolved.iter().map(|(s, v)| (s, *v)),
                )?),
                other => {
                    return Err(Error::ValidationError(format!(
                        "unknown prior type {other:?}; expected \"mass\" or \"bounds\""
                    )))
                }
            }
        }
    };

    let mut rule_list = Vec::with_capacity(raw.rules.len());
    for r in &raw.rules {
        let then = frame.subset(&r.then)?;
        let given = frame.subset(&r.given)?;
        let rule = if given.is_full() {
            Rule::unconditional(&then, r.lower)?
        } else {
            Rule::new(&then, &given, r.lower)?
        };
        rule_list.push(rule);
    }
    let rules = RuleBase::new(&frame, &rule_list)?;

    let engine = match &raw.engine {
        None => EngineChoice::All,
        Some(s) => EngineChoice::parse(s)?,
    };
    let ro = raw.options.unwrap_or_default();
    let options = Options {
        tolerance: ro.tolerance.unwrap_or(API_TOLERANCE),
        exact: ro.exact.unwrap_or(false),
        closure: ro.closure.unwrap_or(false),
        max_sweeps: ro.max_sweeps,
        partition_cap: ro.partition_cap.unwrap_or(DEFAULT_PARTITION_CAP),
        timing: ro.timing.unwrap_or(false),
    };
    options.validate()?;

    Ok(Problem {
        frame,
        prior,
        rules,
        rule_list,
        engine,
        options,
    })
}

// ---------------------------------------------------------------------------
// Running
// ---------------------------------------------------------------------------

struct EngineOutput {
    sweeps: Option<usize>,
    values: Option<Vec<f64>>,
    mass: Option<Vec<(u32, f64)>>,
    check: Option<ConsistencyReport>,
}

fn run_engine(problem: &Problem, which: EngineChoice) -> Result<EngineOutput> {
    let b = problem.prior.support();
    let rules = &problem.rules;
    let opts = &problem.options;
    match which {
        EngineChoice::Bayes => {
            let check = interval::check_bayes(&b, rules)?;
            let refined = interval::refine_bayes_bounded(&b, rules, opts.sweep_cap(b.frame()))?;
            Ok(EngineOutput {
                sweeps: Some(refined.sweeps),
                values: Some(refined.support.values().to_vec()),
                mass: None,
                check: Some(check),
            })
        }
        EngineChoice::Optimistic => {
            let check = interval::check_optimistic(&b, rules)?;
            let refined = if opts.closure {
                interval::refine_optimistic_with_closure(&b, rules, opts.sweep_cap(b.frame()))?
            } else {
                interval::refine_optimistic_bounded(&b, rules, opts.sweep_cap(b.frame()))?
            };
            Ok(EngineOutput {
                sweeps: Some(refined.sweeps),
                values: Some(refined.support.values().to_vec()),
                mass: None,
                check: Some(check),
            })
        }
        EngineChoice::GeneralCheck => {
            let check = interval::check_general(&b, rules)?;
            Ok(EngineOutput {
                sweeps: None,
                values: None,
                mass: None,
                check: Some(check),
            })
        }
        EngineChoice::Partition => {
            let refined = belief::refine_partition_capped(&b, rules, opts.partition_cap)?;
            Ok(EngineOutput {
                sweeps: Some(1),
                values: Some(refined.values().to_vec()),
                mass: None,
                check: None,
            })
        }
        EngineChoice::Mass => {
            let m = problem.prior.to_mass()?;
            let out = belief::conditionalize_mass_capped(&m, rules, opts.partition_cap)?;
            let mass: Vec<(u32, f64)> = out
                .weights_by_mask()
                .iter()
                .map(|(k, v)| (*k, *v))
                .collect();
            let values = out.to_belief().values().to_vec();
            Ok(EngineOutput {
                sweeps: None,
                values: Some(values),
                mass: Some(mass),
                check: None,
            })
        }
        EngineChoice::Oracle => {
            let check = oracle::check_consistency_definition(&b, rules)?;
            let ext = if opts.exact {
                oracle::natural_extension_exact(&b, rules)?
            } else {
                oracle::natural_extension(&b, rules)?
            };
            Ok(EngineOutput {
                sweeps: None,
                values: Some(ext.values().to_vec()),
                mass: None,
                check: Some(check),
            })
        }
        EngineChoice::All => unreachable!("expanded by run_problem"),
    }
}

/// How an engine failure maps onto the process exit code: 1 for evidential
/// conflicts (the computation is fine, the knowledge is not), 2 for inputs
/// the engine cannot accept.
fn error_exit_class(e: &Error) -> i32 {
    match e {
        Error::Inconsistent(_)
        | Error::EmptyPolytope
        | Error::TotalConflict(_)
        | Error::NegativeMass(_)
        | Error::NonConvergence(_)
        | Error::EmptyInterval { .. }
        | Error::CertainComplement
        | Error::AntecedentImpossible => 1,
        _ => 2,
    }
}

/// A finished run: the report as a JSON value plus the exit code and the
/// data for the optional aligned text table.
#[derive(Clone, Debug)]
pub struct RunReport {
    pub report: Value,
    pub exit_code: i32,
    frame: Frame,
    columns: Vec<(String, Vec<f64>)>,
}

impl RunReport {
    /// Pretty-printed JSON, keys sorted, trailing newline. Byte-identical
    /// across runs for the same input and version (unless timing is on).
    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.report).expect("report serializes");
        s.push('\n');
        s
    }

    /// Aligned per-subset table of every engine column that produced values.
    /// `None` when no engine produced any.
    pub fn table(&self) -> Option<String> {
        if self.columns.is_empty() {
            return None;
        }
        let size = self.frame.subset_count();
        let labels: Vec<String> = (0..size)
            .map(|m| interval::ps(&self.frame, m as u32).to_string())
            .collect();
        let label_width = labels
            .iter()
            .map(|l| l.len())
            .max()
            .unwrap_or(6)
            .max("subset".len());
        let mut out = String::new();
        out.push_str(&format!("{:<label_width$}", "subset"));
        for (name, _) in &self.columns {
            out.push_str(&format!("  {name:>12}"));
        }
        out.push('\n');
        for (m, label) in labels.iter().enumerate() {
            out.push_str(&format!("{label:<label_width$}"));
            for (_, vals) in &self.columns {
                out.push_str(&format!("  {:>12.6}", vals[m]));
            }
            out.push('\n');
        }
        Some(out)
    }
}

/// Runs the problem's engine selection. Engine failures are captured in the
/// report (and in the exit code), never panicked or propagated: one engine's
/// conflict should not hide another's output.
pub fn run_problem(problem: &Problem) -> RunReport {
    let list: Vec<EngineChoice> = match problem.engine {
        EngineChoice::All => vec![
            EngineChoice::Bayes,
            EngineChoice::Optimistic,
            EngineChoice::GeneralCheck,
            EngineChoice::Partition,
            EngineChoice::Mass,
            EngineChoice::Oracle,
        ],
        single => vec![single],
    };

    let mut engines_json: Vec<Value> = Vec::new();
    let mut columns: Vec<(String, Vec<f64>)> = Vec::new();
    let mut oracle_values: Option<Vec<f64>> = None;
    let mut exit_code = 0i32;

    for which in list {
        let start = Instant::now();
        let outcome = run_engine(problem, which);
        let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
        let mut obj = Map::new();
        obj.insert("engine".into(), json!(which.name()));
        match outcome {
            Ok(out) => {
                obj.insert("status".into(), json!("ok"));
                if let Some(s) = out.sweeps {
                    obj.insert("sweeps".into(), json!(s));
                }
                if let Some(vals) = &out.values {
                    let rounded: Vec<f64> = vals.iter().map(|v| sig12(*v)).collect();
                    obj.insert("values".into(), json!(rounded));
                    columns.push((which.name().to_string(), vals.clone()));
                    if which == EngineChoice::Oracle {
                        oracle_values = Some(vals.clone());
                    }
                }
                if let Some(mass) = &out.mass {
                    let entries: Vec<Value> = mass
                        .iter()
                        .map(|(k, w)| set_value_json(&problem.frame, *k, *w))
                        .collect();
                    obj.insert("mass".into(), json!(entries));
                }
                if let Some(check) = &out.check {
                    obj.insert("check".into(), check_json(check));
                }
            }
            Err(e) => {
                obj.insert("status".into(), json!(format!("error: {e}")));
                exit_code = exit_code.max(error_exit_class(&e));
            }
        }
        if problem.options.timing {
            obj.insert("wall_clock_ms".into(), json!((elapsed_ms * 1e3).round() / 1e3));
        }
        engines_json.push(Value::Object(obj));
    }

    let mut report = Map::new();
    report.insert(
        "tool".into(),
        json!({"name": "evkernel", "version": env!("CARGO_PKG_VERSION")}),
    );
    report.insert("problem".into(), problem_echo(problem));
    report.insert("engines".into(), Value::Array(engines_json));

    if problem.engine == EngineChoice::All {
        if let Some(oracle_vals) = &oracle_values {
            let mut rows = Vec::new();
            for (name, vals) in &columns {
                if name == "oracle" {
                    continue;
                }
                let max_excess = vals
                    .iter()
                    .zip(oracle_vals)
                    .map(|(a, b)| a - b)
                    .fold(f64::NEG_INFINITY, f64::max);
                // "within_oracle" is a fact, not a verdict: the mass engine
                // answers the evidential-redistribution question and may
                // legitimately land above the constraint-set envelope.
                rows.push(json!({
                    "engine": name,
                    "max_excess_over_oracle": sig12(max_excess),
                    "within_oracle": max_excess <= problem.options.tolerance,
                }));
            }
            report.insert("comparison".into(), Value::Array(rows));
        }
    }

    RunReport {
        report: Value::Object(report),
        exit_code,
        frame: problem.frame.clone(),
        columns,
    }
}

// ---------------------------------------------------------------------------
// Serialization helpers
// ---------------------------------------------------------------------------

/// Rounds to 12 significant digits so report bytes do not depend on
/// intermediate summation order beyond the documented precision.
fn sig12(v: f64) -> f64 {
    if v == 0.0 {
        return 0.0; // normalizes -0.0
    }
    format!("{v:.11e}").parse().unwrap_or(v)
}

fn atoms_json(frame: &Frame, mask: u32) -> Value {
    let set = interval::ps(frame, mask);
    Value::Array(set.atoms().map(|a| Value::String(a.to_string())).collect())
}

fn set_value_json(frame: &Frame, mask: u32, value: f64) -> Value {
    json!({"set": atoms_json(frame, mask), "value": sig12(value)})
}

fn violation_json(v: &Violation) -> Value {
    json!({
        "antecedent": Value::Array(v.antecedent.atoms().map(|a| Value::String(a.to_string())).collect()),
        "consequent": Value::Array(v.consequent.atoms().map(|a| Value::String(a.to_string())).collect()),
        "required": sig12(v.required),
        "achieved": sig12(v.achieved),
    })
}

fn check_json(report: &ConsistencyReport) -> Value {
    json!({
        "consistent": report.is_consistent(),
        "pairs_checked": report.pairs_checked(),
        "violations": Value::Array(report.violations().iter().map(violation_json).collect()),
    })
}

fn problem_echo(p: &Problem) -> Value {
    let prior = match &p.prior {
        Prior::Mass(m) => {
            let entries: Vec<Value> = m
                .weights_by_mask()
                .iter()
                .map(|(k, w)| set_value_json(&p.frame, *k, *w))
                .collect();
            json!({"type": "mass", "entries": entries})
        }
        Prior::Bounds(b) => {
            let full = p.frame.full_mask();
            let entries: Vec<Value> = (1..full)
                .filter(|m| b.value_at(*m) > 0.0)
                .map(|m| set_value_json(&p.frame, m, b.value_at(m)))
                .collect();
            json!({"type": "bounds", "entries": entries})
        }
    };
    let rules: Vec<Value> = p
        .rule_list
        .iter()
        .map(|r| {
            json!({
                "then": atoms_json(&p.frame, r.consequent().mask()),
                "given": atoms_json(&p.frame, r.antecedent().mask()),
                "lower": sig12(r.lower()),
            })
        })
        .collect();
    let mut options = Map::new();
    options.insert("tolerance".into(), json!(sig12(p.options.tolerance)));
    options.insert("exact".into(), json!(p.options.exact));
    options.insert("closure".into(), json!(p.options.closure));
    if let Some(ms) = p.options.max_sweeps {
        options.insert("max_sweeps".into(), json!(ms));
    }
    options.insert("partition_cap".into(), json!(p.options.partition_cap));
    options.insert("timing".into(), json!(p.options.timing));
    json!({
        "frame": p.frame.atom_names(),
        "prior": prior,
        "rules": rules,
        "engine": p.engine.name(),
        "options": Value::Object(options),
    })
}

/// Reference text for `evkernel formats`.
pub const FORMAT_HELP: &str = r#"PROBLEM FILE (JSON)

{
  "frame": ["pq", "p~q", "~pq", "~p~q"],      required; 1..16 distinct atom names
  "prior": {                                   optional; omitted = vacuous
    "type": "mass" | "bounds",
    "entries": [ {"set": ["pq","p~q"], "value": 0.8}, ... ]
  },
  "rules": [                                   optional
    {"then": ["pq","~pq"], "given": ["pq","p~q"], "lower": 0.9}, ...
  ],
  "engine": "bayes" | "optimistic" | "general-check" | "partition"
          | "mass" | "oracle" | "all",         optional; default "all"
  "options": {                                 optional, all fields optional
    "tolerance": 1e-9,       comparison tolerance for oracle verdicts
    "exact": false,          oracle in exact rational arithmetic (<= 6 atoms)
    "closure": false,        interleave coherence closure with optimistic runs
    "max_sweeps": 640,       refinement sweep budget (default 10 * 2^n)
    "partition_cap": 10,     carrier-size cap for partition enumeration
    "timing": false          include wall-clock times (non-deterministic)
  }
}

Notes:
- "set" lists atom names; [] is the empty set; listing every atom is the
  full frame. A rule whose "given" covers the frame is an unconditional
  lower bound on "then".
- "mass" entries are focal-element weights and must sum to 1 (within 1e-9).
- "bounds" entries are pointwise lower bounds b(set) >= value; repeats keep
  the maximum.

REPORT (stdout, JSON)

{
  "tool": {"name", "version"},
  "problem": echo of the resolved input,
  "engines": [ per selected engine, in canonical order:
    {
      "engine": name,
      "status": "ok" or "error: ...",
      "sweeps": fixpoint sweeps or alternations (refiners only),
      "values": 2^n lower bounds in canonical subset order (index = bitmask
                over frame order; bit j set <=> atom j in the subset),
      "mass":   focal elements after redistribution (mass engine only),
      "check":  {"consistent", "pairs_checked", "violations": [
                 {"antecedent", "consequent", "required", "achieved"}]},
      "wall_clock_ms": only when timing is on
    }
  ],
  "comparison": engine-vs-oracle rows (engine "all" only):
    [{"engine", "max_excess_over_oracle", "within_oracle"}]
    (the mass engine redistributes evidence and may legitimately land
     above the oracle's constraint-set envelope)
}

Serialization is byte-deterministic for a fixed input and tool version:
object keys sorted, subsets in canonical order, floats rounded to 12
significant digits, no timestamps unless "timing" is set.

EXIT CODES

0  every selected engine ran clean
1  an engine found the knowledge in conflict (inconsistent bounds, empty
   polytope, total conflict, over-committed transfers, or no convergence)
2  the input could not be parsed or validated
"#;
