//! Scenario files: schema 1.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Deserialize;
use serde_json::Value;
use tdlc::backends::{ElemSet, FiniteGroup, FiniteSystem, PadicSystem, ShiftSystem, TailMode};
use tdlc::{SpecData, System};

use crate::CliError;

pub const SCHEMA: u64 = 1;

/// The model part of a scenario; also the shape of each product factor.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Model {
    pub backend: String,
    pub prime: Option<u64>,
    pub dim: Option<usize>,
    pub matrix: Option<Vec<Vec<String>>>,
    /// One of S3, D4, Q8, A4, or Z/n.
    pub group: Option<String>,
    pub table: Option<Vec<Vec<u32>>>,
    /// Cyclic orders whose product is the alphabet.
    pub alphabet: Option<Vec<u32>>,
    pub tail_mode: Option<String>,
    pub shift: Option<i64>,
    pub sigma: Option<Vec<u32>>,
    pub factors: Option<Vec<Model>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubgroupDef {
    /// `trivial` or `whole`.
    pub kind: Option<String>,
    pub elements: Option<Vec<u32>>,
    pub generators: Option<Vec<u32>>,
    pub span: Option<Vec<Vec<String>>>,
    /// Constant profile `S^Z` with `S` generated by these alphabet elements.
    pub alphabet_generators: Option<Vec<u32>>,
    pub pair: Option<Vec<SubgroupDef>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Check {
    #[serde(rename = "type")]
    pub kind: String,
    #[serde(default)]
    pub args: BTreeMap<String, Value>,
}

pub const CHECK_KINDS: [&str; 8] = ["entropy", "scale", "nub", "tidy", "cotraj", "addition", "scale_link", "phi_n"];

#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub model: Model,
    pub system: System,
    pub subgroups: BTreeMap<String, SpecData>,
    pub checks: Vec<Check>,
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

fn parse_power(s: &str) -> Result<BigInt, CliError> {
    let s = s.trim();
    match s.split_once('^') {
        Some((b, e)) => {
            let base: BigInt = b.trim().parse().map_err(|_| invalid(format!("bad integer {b:?}")))?;
            let exp: u32 = e.trim().parse().map_err(|_| invalid(format!("bad exponent {e:?}")))?;
            Ok(base.pow(exp))
        }
        None => s.parse().map_err(|_| invalid(format!("bad integer {s:?}"))),
    }
}

/// Parses `a`, `a/b`, and `a/p^k`.
pub fn parse_rational(s: &str) -> Result<BigRational, CliError> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (parse_power(n)?, parse_power(d)?),
        None => (parse_power(s)?, BigInt::from(1)),
    };
    if d.is_zero() {
        return Err(invalid(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(n, d))
}

fn named_group(name: &str) -> Result<FiniteGroup, CliError> {
    let g = match name {
        "S3" => FiniteGroup::symmetric3(),
        "D4" => FiniteGroup::dihedral4(),
        "Q8" => FiniteGroup::quaternion8(),
        "A4" => FiniteGroup::alternating4(),
        "trivial" => FiniteGroup::trivial(),
        _ => {
            let n = name
                .strip_prefix("Z/")
                .and_then(|n| n.parse::<u32>().ok())
                .ok_or_else(|| invalid(format!("unknown group {name:?}")))?;
            FiniteGroup::cyclic(n)?
        }
    };
    Ok(g)
}

fn reject(model: &Model, fields: &[(&str, bool)]) -> Result<(), CliError> {
    for (name, present) in fields {
        if *present {
            return Err(invalid(format!("field {name:?} does not apply to backend {:?}", model.backend)));
        }
    }
    Ok(())
}

pub fn build_system(m: &Model) -> Result<System, CliError> {
    match m.backend.as_str() {
        "finite" => {
            reject(
                m,
                &[
                    ("prime", m.prime.is_some()),
                    ("dim", m.dim.is_some()),
                    ("matrix", m.matrix.is_some()),
                    ("alphabet", m.alphabet.is_some()),
                    ("tail_mode", m.tail_mode.is_some()),
                    ("shift", m.shift.is_some()),
                    ("factors", m.factors.is_some()),
                ],
            )?;
            let g = match (&m.group, &m.table) {
                (Some(name), None) => named_group(name)?,
                (None, Some(t)) => FiniteGroup::from_table(t.clone(), None)?,
                _ => return Err(invalid("finite backend needs exactly one of \"group\" or \"table\"")),
            };
            let g = Arc::new(g);
            let map = m.sigma.clone().unwrap_or_else(|| g.elements().collect());
            Ok(System::Finite(FiniteSystem::new(g, map)?))
        }
        "padic" => {
            reject(
                m,
                &[
                    ("group", m.group.is_some()),
                    ("table", m.table.is_some()),
                    ("alphabet", m.alphabet.is_some()),
                    ("tail_mode", m.tail_mode.is_some()),
                    ("shift", m.shift.is_some()),
                    ("sigma", m.sigma.is_some()),
                    ("factors", m.factors.is_some()),
                ],
            )?;
            let p = m.prime.ok_or_else(|| invalid("padic backend needs \"prime\""))?;
            let rows = m.matrix.as_ref().ok_or_else(|| invalid("padic backend needs \"matrix\""))?;
            let dim = m.dim.unwrap_or(rows.len());
            if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
                return Err(invalid(format!("matrix must be {dim} x {dim}")));
            }
            let a = rows.iter().map(|r| r.iter().map(|x| parse_rational(x)).collect()).collect::<Result<_, _>>()?;
            Ok(System::Padic(PadicSystem::new(p, a)?))
        }
        "shift" => {
            reject(
                m,
                &[
                    ("prime", m.prime.is_some()),
                    ("dim", m.dim.is_some()),
                    ("matrix", m.matrix.is_some()),
                    ("group", m.group.is_some()),
                    ("table", m.table.is_some()),
                    ("factors", m.factors.is_some()),
                ],
            )?;
            let orders = m.alphabet.as_ref().ok_or_else(|| invalid("shift backend needs \"alphabet\""))?;
            let f = Arc::new(FiniteGroup::abelian_product(orders)?);
            let label = orders.iter().map(|n| format!("Z/{n}")).collect::<Vec<_>>().join("x");
            let mode_name = m.tail_mode.as_deref().unwrap_or("compact");
            let mode = TailMode::parse(mode_name).ok_or_else(|| invalid(format!("unknown tail_mode {mode_name:?}")))?;
            let sigma = m.sigma.clone().unwrap_or_else(|| ShiftSystem::identity_sigma(&f));
            Ok(System::Shift(ShiftSystem::new(f, label, mode, m.shift.unwrap_or(1), sigma)?))
        }
        "product" => {
            reject(
                m,
                &[
                    ("prime", m.prime.is_some()),
                    ("dim", m.dim.is_some()),
                    ("matrix", m.matrix.is_some()),
                    ("group", m.group.is_some()),
                    ("table", m.table.is_some()),
                    ("alphabet", m.alphabet.is_some()),
                    ("tail_mode", m.tail_mode.is_some()),
                    ("shift", m.shift.is_some()),
                    ("sigma", m.sigma.is_some()),
                ],
            )?;
            match m.factors.as_deref() {
                Some([a, b]) => Ok(System::make_product(build_system(a)?, build_system(b)?)),
                _ => Err(invalid("product backend needs exactly two \"factors\"")),
            }
        }
        other => Err(invalid(format!("unknown backend {other:?}"))),
    }
}

fn elements_in(g: &FiniteGroup, xs: &[u32]) -> Result<(), CliError> {
    if let Some(x) = xs.iter().find(|&&x| x as usize >= g.order()) {
        return Err(invalid(format!("element {x} is outside a group of order {}", g.order())));
    }
    Ok(())
}

pub fn build_subgroup(sys: &System, d: &SubgroupDef) -> Result<SpecData, CliError> {
    let set = [
        d.kind.is_some(),
        d.elements.is_some(),
        d.generators.is_some(),
        d.span.is_some(),
        d.alphabet_generators.is_some(),
        d.pair.is_some(),
    ];
    if set.iter().filter(|&&b| b).count() != 1 {
        return Err(invalid("a subgroup needs exactly one constructor"));
    }
    if let Some(kind) = &d.kind {
        return match kind.as_str() {
            "trivial" => Ok(sys.trivial_spec().data),
            "whole" => Ok(sys.whole_spec().data),
            _ => Err(invalid(format!("unknown subgroup kind {kind:?}"))),
        };
    }
    match sys {
        System::Finite(f) => {
            let g = &f.group;
            if let Some(xs) = &d.elements {
                elements_in(g, xs)?;
                return Ok(SpecData::Finite(ElemSet::from_iter(g.order(), xs.iter().copied())));
            }
            if let Some(xs) = &d.generators {
                elements_in(g, xs)?;
                return Ok(SpecData::Finite(g.closure(xs.iter().copied())));
            }
        }
        System::Padic(p) => {
            if let Some(rows) = &d.span {
                let basis = rows
                    .iter()
                    .map(|r| {
                        if r.len() != p.dim {
                            return Err(invalid("span vector has the wrong length"));
                        }
                        r.iter().map(|x| parse_rational(x)).collect()
                    })
                    .collect::<Result<_, _>>()?;
                return Ok(SpecData::Padic(basis));
            }
        }
        System::Shift(s) => {
            if let Some(xs) = &d.alphabet_generators {
                elements_in(&s.alphabet, xs)?;
                let set = s.alphabet.closure(xs.iter().copied());
                let id = s.sub_id(&set).expect("closure is a subgroup");
                return Ok(SpecData::Shift(id));
            }
        }
        System::Product(a, b) => {
            if let Some([x, y]) = d.pair.as_deref() {
                return Ok(SpecData::Pair(Box::new(build_subgroup(a, x)?), Box::new(build_subgroup(b, y)?)));
            }
        }
    }
    Err(invalid(format!("subgroup constructor does not apply to the {} backend", sys.kind())))
}

fn default_checks() -> Vec<Check> {
    ["entropy", "scale", "nub"].iter().map(|k| Check { kind: k.to_string(), args: BTreeMap::new() }).collect()
}

pub fn parse_scenario(text: &str, fallback_name: &str) -> Result<Scenario, CliError> {
    let value: Value = serde_json::from_str(text).map_err(|e| invalid(format!("not valid JSON: {e}")))?;
    let Value::Object(mut obj) = value else {
        return Err(invalid("scenario must be a JSON object"));
    };
    match obj.remove("schema") {
        Some(Value::Number(n)) if n.as_u64() == Some(SCHEMA) => {}
        Some(v) => return Err(invalid(format!("unsupported schema {v}"))),
        None => return Err(invalid("missing \"schema\"")),
    }
    let name = match obj.remove("name") {
        Some(Value::String(s)) => s,
        Some(_) => return Err(invalid("\"name\" must be a string")),
        None => fallback_name.to_string(),
    };
    let subgroup_defs: BTreeMap<String, SubgroupDef> = match obj.remove("subgroups") {
        Some(v) => serde_json::from_value(v).map_err(|e| invalid(format!("subgroups: {e}")))?,
        None => BTreeMap::new(),
    };
    let checks: Vec<Check> = match obj.remove("checks") {
        Some(v) => serde_json::from_value(v).map_err(|e| invalid(format!("checks: {e}")))?,
        None => default_checks(),
    };
    for c in &checks {
        if !CHECK_KINDS.contains(&c.kind.as_str()) {
            return Err(invalid(format!("unknown check type {:?}", c.kind)));
        }
    }
    let model: Model = serde_json::from_value(Value::Object(obj)).map_err(|e| invalid(e.to_string()))?;
    let system = build_system(&model)?;
    let mut subgroups = BTreeMap::new();
    for (n, d) in &subgroup_defs {
        subgroups.insert(n.clone(), build_subgroup(&system, d)?);
    }
    for c in &checks {
        if let Some(v) = c.args.get("subgroup") {
            let key = v.as_str().ok_or_else(|| invalid("\"subgroup\" argument must be a string"))?;
            if !subgroups.contains_key(key) && key != "trivial" && key != "whole" {
                return Err(invalid(format!("check refers to unknown subgroup {key:?}")));
            }
        }
    }
    Ok(Scenario { name, model, system, subgroups, checks })
}

pub fn load_scenario(path: &Path) -> Result<Scenario, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("scenario");
    parse_scenario(&text, stem)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("1/2").unwrap(), BigRational::new(1.into(), 2.into()));
        assert_eq!(parse_rational("3/2^4").unwrap(), BigRational::new(3.into(), 16.into()));
        assert_eq!(parse_rational("-5").unwrap(), BigRational::from_integer((-5).into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let ok = r#"{"schema":1,"backend":"padic","prime":2,"matrix":[["1/2"]]}"#;
        assert!(parse_scenario(ok, "x").is_ok());
        let bad = r#"{"schema":1,"backend":"padic","prime":2,"matrix":[["1/2"]],"colour":3}"#;
        assert!(matches!(parse_scenario(bad, "x"), Err(CliError::Invalid(_))));
        let wrong = r#"{"schema":1,"backend":"padic","prime":2,"matrix":[["1/2"]],"alphabet":[2]}"#;
        assert!(parse_scenario(wrong, "x").is_err());
        let schema = r#"{"schema":2,"backend":"padic","prime":2,"matrix":[["1/2"]]}"#;
        assert!(parse_scenario(schema, "x").is_err());
    }

    #[test]
    fn products_and_subgroups() {
        let text = r#"{"schema":1,"backend":"product",
            "factors":[{"backend":"padic","prime":2,"matrix":[["1/2"]]},{"backend":"shift","alphabet":[4]}],
            "subgroups":{"h":{"pair":[{"kind":"whole"},{"alphabet_generators":[2]}]}},
            "checks":[{"type":"addition","args":{"subgroup":"h"}}]}"#;
        let s = parse_scenario(text, "p").unwrap();
        assert_eq!(s.system.kind(), "product");
        assert!(s.system.spec(s.subgroups["h"].clone()).unwrap().flags.stable);
    }
}
