//! Running scenario checks and emitting reports.

use std::time::Instant;

use serde_json::{json, Map, Value};
use tdlc::cotrajectory::{alpha_sequence, htop_limit_estimate, htop_local, is_tidy_above, is_tidy_below, plus_group};
use tdlc::dynamics::{
    entropy_lower_bound_phi_n, nub, scale, topological_entropy, verify_addition_theorem, verify_scale_entropy_link,
    Outcome, Probe, ScaleReport,
};
use tdlc::{ExactEntropy, Handle, IndexValue, System, TdlcError};

use crate::scenario::{Check, Scenario};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Flags {
    pub probe: Probe,
    pub timing: bool,
}

#[derive(Debug, Clone, Default)]
pub struct Status {
    pub failed: bool,
    pub unresolved: bool,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub json: Value,
    pub rows: Vec<CsvRow>,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsvRow {
    pub scenario: String,
    pub quantity: String,
    pub alpha: String,
    pub infinite: bool,
    pub certified: bool,
}

pub const CSV_HEADER: &str = "scenario,quantity,alpha,infinite,certified";

pub fn index_str(i: &IndexValue) -> String {
    i.to_string()
}

pub fn entropy_json(e: &ExactEntropy, certified: bool) -> Value {
    json!({
        "alpha": e.alpha().map(|a| a.to_string()),
        "infinite": e.alpha().is_none(),
        "display": e.to_string(),
        "ln": e.display_ln(),
        "certified": certified,
    })
}

fn entropy_row(scenario: &str, quantity: &str, e: &ExactEntropy, certified: bool) -> CsvRow {
    CsvRow {
        scenario: scenario.to_string(),
        quantity: quantity.to_string(),
        alpha: e.alpha().map(|a| a.to_string()).unwrap_or_default(),
        infinite: e.alpha().is_none(),
        certified,
    }
}

/// Converts a core error into report JSON, recording its severity.
fn core_error(e: TdlcError, status: &mut Status) -> Result<Value, CliError> {
    match e {
        TdlcError::Invalid(m) => Err(CliError::Invalid(m)),
        TdlcError::InvariantViolation(_) => {
            status.failed = true;
            Ok(json!({ "error": e.to_string() }))
        }
        _ => {
            status.unresolved = true;
            Ok(json!({ "unresolved": e.to_string() }))
        }
    }
}

fn outcome_status(o: Outcome, status: &mut Status) {
    match o {
        Outcome::Fail => status.failed = true,
        Outcome::Inconclusive => status.unresolved = true,
        _ => {}
    }
}

fn opt_entropy(e: &Option<ExactEntropy>) -> Value {
    e.as_ref().map(|e| Value::String(e.to_string())).unwrap_or(Value::Null)
}

fn subgroup_spec(sc: &Scenario, name: &str) -> Result<tdlc::ClosedSubgroupSpec, CliError> {
    let sys = &sc.system;
    let spec = match (name, sc.subgroups.get(name)) {
        (_, Some(d)) => sys.spec(d.clone())?,
        ("trivial", None) => sys.trivial_spec(),
        ("whole", None) => sys.whole_spec(),
        _ => return Err(CliError::Invalid(format!("unknown subgroup {name:?}"))),
    };
    Ok(spec)
}

fn arg_usize(c: &Check, key: &str, default: usize) -> Result<usize, CliError> {
    match c.args.get(key) {
        None => Ok(default),
        Some(v) => v
            .as_u64()
            .map(|x| x as usize)
            .ok_or_else(|| CliError::Invalid(format!("argument {key:?} must be a natural number"))),
    }
}

struct Ctx<'a> {
    sc: &'a Scenario,
    flags: Flags,
    status: Status,
    rows: Vec<CsvRow>,
    scale: Option<Result<ScaleReport, TdlcError>>,
}

impl Ctx<'_> {
    fn sys(&self) -> &System {
        &self.sc.system
    }

    fn scale(&mut self) -> Result<ScaleReport, TdlcError> {
        if self.scale.is_none() {
            self.scale = Some(scale(&self.sc.system, &self.flags.probe));
        }
        self.scale.clone().unwrap()
    }

    fn entropy(&mut self) -> Result<Value, CliError> {
        match topological_entropy(self.sys(), &self.flags.probe) {
            Ok(r) => {
                let mut v = entropy_json(&r.value, r.saturated);
                let sys = self.sys();
                v["witness"] = json!(sys.describe_handle(&r.achieved_at));
                v["saturation"] = json!(r.saturation);
                v["table"] = Value::Array(
                    r.table
                        .iter()
                        .map(|e| match &e.value {
                            Ok(x) => json!({ "k": e.k, "value": x.to_string() }),
                            Err(m) => json!({ "k": e.k, "unresolved": m }),
                        })
                        .collect(),
                );
                if !r.saturated {
                    self.status.unresolved = true;
                }
                self.rows.push(entropy_row(&self.sc.name, "entropy", &r.value, r.saturated));
                Ok(v)
            }
            Err(e) => core_error(e, &mut self.status),
        }
    }

    fn scale_detail(&mut self) -> Result<(Value, Value), CliError> {
        match self.scale() {
            Ok(r) => {
                let sys = self.sys();
                let detail = json!({
                    "value": index_str(&r.value),
                    "witness": sys.describe_handle(&r.witness),
                    "candidates": r.candidates,
                    "oracle": r.oracle.as_ref().map(index_str),
                    "oracle_agrees": r.oracle_agrees(),
                    "witness_tidy_above": r.witness_tidy_above,
                    "witness_tidy_below": r.witness_tidy_below,
                    "certified": r.certified,
                    "certificate": r.certificate,
                });
                if !r.certified {
                    self.status.unresolved = true;
                }
                if r.oracle_agrees() == Some(false) {
                    self.status.failed = true;
                }
                self.rows.push(CsvRow {
                    scenario: self.sc.name.clone(),
                    quantity: "scale".into(),
                    alpha: index_str(&r.value),
                    infinite: false,
                    certified: r.certified,
                });
                Ok((json!(index_str(&r.value)), detail))
            }
            Err(e) => {
                let v = core_error(e, &mut self.status)?;
                Ok((Value::Null, v))
            }
        }
    }

    fn nub(&mut self) -> Result<Value, CliError> {
        match nub(self.sys(), &self.flags.probe) {
            Ok(r) => {
                if !r.certified {
                    self.status.unresolved = true;
                }
                let sys = self.sys();
                Ok(json!({
                    "handle": sys.describe_handle(&r.handle),
                    "trivial": r.handle == sys.trivial_handle(),
                    "whole": r.handle == sys.whole(),
                    "certified": r.certified,
                    "family": r.family,
                    "resolution": r.resolution,
                    "certificate": r.certificate,
                }))
            }
            Err(e) => core_error(e, &mut self.status),
        }
    }

    fn tidy(&mut self) -> Result<Value, CliError> {
        let probe = self.flags.probe;
        let scale = self.scale().ok().map(|r| r.value);
        let mut out = Vec::new();
        for k in 0..probe.base.max(1) {
            let sys = self.sys();
            let u = sys.base_family(k);
            let above = is_tidy_above(sys, &u, probe.tidy);
            let below = is_tidy_below(sys, &u, probe.tidy, scale.as_ref());
            let mut v = json!({ "k": k, "subgroup": sys.describe_handle(&u) });
            match above {
                Ok(b) => v["tidy_above"] = json!(b),
                Err(e) => v["tidy_above"] = core_error(e, &mut self.status)?,
            }
            match below {
                Ok(t) => {
                    v["tidy_below"] = json!(t.holds);
                    v["indirect"] = json!(t.indirect);
                    v["certificate"] = json!(t.certificate);
                }
                Err(e) => v["tidy_below"] = core_error(e, &mut self.status)?,
            }
            out.push(v);
        }
        Ok(Value::Array(out))
    }

    fn cotraj(&mut self, c: &Check) -> Result<Value, CliError> {
        let k = arg_usize(c, "base", 0)?;
        let probe = self.flags.probe;
        let sys = self.sys().clone();
        let u = sys.base_family(k);
        let mut v = json!({ "base": k, "subgroup": sys.describe_handle(&u) });
        match alpha_sequence(&sys, &u, probe.n_max.max(1)) {
            Ok(t) => {
                v["rows"] = Value::Array(
                    t.rows.iter().map(|r| json!({ "n": r.n, "c": index_str(&r.c), "alpha": index_str(&r.alpha) })).collect(),
                );
                v["stabilization"] = json!(t.stabilization);
                v["limit"] = json!(t.limit.as_ref().map(index_str));
                v["certificate"] = json!(t.certificate);
                match t.stabilized_alpha() {
                    Some(a) => self.rows.push(CsvRow {
                        scenario: self.sc.name.clone(),
                        quantity: format!("alpha_limit:{k}"),
                        alpha: index_str(a),
                        infinite: false,
                        certified: true,
                    }),
                    None => self.status.unresolved = true,
                }
            }
            Err(e) => v["table"] = core_error(e, &mut self.status)?,
        }
        match plus_group(&sys, &u, probe.tidy) {
            Ok(p) => {
                v["plus"] = json!({
                    "subgroup": sys.describe_handle(&p.handle),
                    "method": p.method.name(),
                    "steps": p.steps,
                    "certificate": p.certificate,
                })
            }
            Err(e) => v["plus"] = core_error(e, &mut self.status)?,
        }
        let local = htop_local(&sys, &u, probe.tidy);
        let limit = htop_limit_estimate(&sys, &u, probe.n_max.max(1));
        if let (Ok(a), Ok(b)) = (&local, &limit) {
            v["limit_free_agrees"] = json!(a == b);
            if a != b {
                self.status.failed = true;
            }
        }
        v["htop_local"] = match local {
            Ok(e) => json!(e.to_string()),
            Err(e) => core_error(e, &mut self.status)?,
        };
        v["htop_limit"] = match limit {
            Ok(e) => json!(e.to_string()),
            Err(e) => core_error(e, &mut self.status)?,
        };
        Ok(v)
    }

    fn addition(&mut self, c: &Check) -> Result<Value, CliError> {
        let name = c.args.get("subgroup").and_then(|v| v.as_str()).unwrap_or("trivial").to_string();
        let spec = subgroup_spec(self.sc, &name)?;
        let v = verify_addition_theorem(self.sys(), &spec, &self.flags.probe);
        outcome_status(v.outcome, &mut self.status);
        Ok(json!({
            "subgroup": name,
            "flags": {
                "normal": spec.flags.normal,
                "compact": spec.flags.compact,
                "invariant": spec.flags.invariant,
                "stable": spec.flags.stable,
                "contains_kernel": spec.flags.contains_kernel,
            },
            "outcome": v.outcome.name(),
            "reason": v.reason,
            "total": opt_entropy(&v.total),
            "restricted": opt_entropy(&v.restricted),
            "quotient": opt_entropy(&v.quotient),
        }))
    }

    fn scale_link(&mut self) -> Result<Value, CliError> {
        let v = verify_scale_entropy_link(self.sys(), &self.flags.probe);
        outcome_status(v.outcome, &mut self.status);
        let sys = self.sys();
        Ok(json!({
            "outcome": v.outcome.name(),
            "reason": v.reason,
            "scale": v.scale.as_ref().map(index_str),
            "nub": v.nub.as_ref().map(|h| sys.describe_handle(h)),
            "nub_trivial": v.nub_trivial,
            "entropy": opt_entropy(&v.entropy),
            "nub_entropy": opt_entropy(&v.nub_entropy),
            "quotient_entropy": opt_entropy(&v.quotient_entropy),
            "equivalence": v.equivalence,
        }))
    }

    fn phi_n(&mut self, c: &Check) -> Result<Value, CliError> {
        let names: Vec<String> = match c.args.get("candidates") {
            None => vec!["base:0".into()],
            Some(Value::Array(a)) => a
                .iter()
                .map(|x| x.as_str().map(str::to_string).ok_or_else(|| CliError::Invalid("candidates must be strings".into())))
                .collect::<Result<_, _>>()?,
            Some(_) => return Err(CliError::Invalid("candidates must be a list".into())),
        };
        let sys = self.sys().clone();
        let probe = self.flags.probe;
        let mut handles: Vec<Handle> = Vec::new();
        for n in &names {
            let bad = || CliError::Invalid(format!("candidate {n:?} is not base:K or plus:K"));
            let (kind, k) = n.split_once(':').ok_or_else(bad)?;
            let k: usize = k.parse().map_err(|_| bad())?;
            let u = sys.base_family(k);
            match kind {
                "base" => handles.push(u),
                "plus" => match plus_group(&sys, &u, probe.tidy) {
                    Ok(p) => handles.push(p.handle),
                    Err(e) => return core_error(e, &mut self.status),
                },
                _ => return Err(bad()),
            }
        }
        match entropy_lower_bound_phi_n(&sys, &handles) {
            Ok(b) => {
                let mut v = json!({
                    "bound": b.value.to_string(),
                    "accepted": b.accepted.iter().map(|(h, e)| json!({ "subgroup": sys.describe_handle(h), "value": e.to_string() })).collect::<Vec<_>>(),
                    "rejected": b.rejected.iter().map(|(h, r)| json!({ "subgroup": sys.describe_handle(h), "reason": r })).collect::<Vec<_>>(),
                });
                if let Ok(h) = topological_entropy(&sys, &probe) {
                    v["below_entropy"] = json!(b.value <= h.value);
                    if b.value > h.value {
                        self.status.failed = true;
                    }
                }
                Ok(v)
            }
            Err(e) => core_error(e, &mut self.status),
        }
    }
}

/// Runs `checks` (or the scenario's own list) and assembles the report.
pub fn run_scenario(sc: &Scenario, checks: Option<&[Check]>, flags: Flags) -> Result<Report, CliError> {
    let checks = checks.unwrap_or(&sc.checks);
    let mut ctx = Ctx { sc, flags, status: Status::default(), rows: Vec::new(), scale: None };
    let mut top = Map::new();
    top.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    top.insert(
        "scenario".into(),
        json!({ "name": sc.name, "backend": sc.model.backend, "system": sc.system.describe() }),
    );
    top.insert(
        "probe".into(),
        json!({ "n_max": flags.probe.n_max, "tidy": flags.probe.tidy, "base": flags.probe.base, "resolution": flags.probe.resolution }),
    );
    let mut listed = Vec::new();
    for c in checks {
        let start = Instant::now();
        let mut value = match c.kind.as_str() {
            "entropy" => ctx.entropy()?,
            "scale" => {
                let (s, detail) = ctx.scale_detail()?;
                top.insert("scale".into(), s);
                detail
            }
            "nub" => ctx.nub()?,
            "tidy" => ctx.tidy()?,
            "cotraj" => ctx.cotraj(c)?,
            "addition" => ctx.addition(c)?,
            "scale_link" => ctx.scale_link()?,
            "phi_n" => ctx.phi_n(c)?,
            other => return Err(CliError::Invalid(format!("unknown check type {other:?}"))),
        };
        if flags.timing {
            if let Value::Object(m) = &mut value {
                m.insert("timing_ms".into(), json!(start.elapsed().as_millis() as u64));
            }
        }
        match c.kind.as_str() {
            "entropy" | "nub" | "tidy" => {
                top.insert(c.kind.clone(), value);
            }
            "scale" => {
                top.insert("scale_detail".into(), value);
            }
            _ => {
                let mut entry = Map::new();
                entry.insert("type".into(), json!(c.kind));
                if let Value::Object(m) = value {
                    entry.extend(m);
                }
                listed.push(Value::Object(entry));
            }
        }
    }
    if !listed.is_empty() {
        top.insert("checks".into(), Value::Array(listed));
    }
    let status = ctx.status.clone();
    let label = if status.failed {
        "fail"
    } else if status.unresolved {
        "unresolved"
    } else {
        "ok"
    };
    top.insert("status".into(), json!(label));
    Ok(Report { json: Value::Object(top), rows: ctx.rows, status })
}

pub fn emit_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

pub fn emit_csv(rows: &[CsvRow]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&format!("{},{},{},{},{}\n", r.scenario, r.quantity, r.alpha, r.infinite, r.certified));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::parse_scenario;

    fn quick() -> Flags {
        Flags { probe: Probe { n_max: 8, tidy: 8, base: 2, resolution: 2 }, timing: false }
    }

    #[test]
    fn q2_half_report() {
        let sc = parse_scenario(r#"{"schema":1,"name":"q2_half","backend":"padic","prime":2,"matrix":[["1/2"]]}"#, "x").unwrap();
        let r = run_scenario(&sc, None, quick()).unwrap();
        assert_eq!(r.json["entropy"]["alpha"], "2");
        assert_eq!(r.json["entropy"]["certified"], true);
        assert_eq!(r.json["scale"], "2");
        assert_eq!(r.json["nub"]["trivial"], true);
        assert_eq!(r.json["status"], "ok");
        let csv = emit_csv(&r.rows);
        assert!(csv.lines().any(|l| l == "q2_half,entropy,2,false,true"));
        assert!(csv.lines().any(|l| l == "q2_half,scale,2,false,true"));
    }

    #[test]
    fn empty_check_list_gives_header_only() {
        let sc = parse_scenario(r#"{"schema":1,"backend":"finite","group":"S3","checks":[]}"#, "s3").unwrap();
        let r = run_scenario(&sc, None, quick()).unwrap();
        assert_eq!(emit_csv(&r.rows), format!("{CSV_HEADER}\n"));
    }
}
