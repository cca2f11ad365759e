//! Property suites over the built-in catalog.

use std::time::Instant;

use serde_json::{json, Map, Value};
use tdlc::backends::identities::{check_index_identities, IdentityCount};
use tdlc::catalog::{self, CatalogEntry};
use tdlc::cotrajectory::{alpha_sequence, check_cotrajectory_identities, htop_limit_estimate, htop_local};
use tdlc::dynamics::{
    quotient_table_check, restriction_monotone, scale, topological_entropy, verify_addition_theorem,
    verify_scale_entropy_link, Outcome, Probe,
};
use tdlc::{entropy_add, entropy_from_index, IndexValue, System, TdlcError};

use crate::report::Flags;
use crate::CliError;

pub const SUITES: &[&str] =
    &["indices", "cotrajectory", "limit-free", "addition", "scale", "scale-link", "products", "oracle", "monotonicity"];

/// Cotrajectory identities are probed up to this length.
const IDENTITY_DEPTH: usize = 16;

#[derive(Debug, Clone)]
pub struct Case {
    pub name: String,
    pub outcome: Outcome,
    pub detail: Value,
}

#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: Vec<Case>,
    pub elapsed_ms: u64,
}

impl SuiteResult {
    pub fn count(&self, o: Outcome) -> usize {
        self.cases.iter().filter(|c| c.outcome == o).count()
    }
}

fn case(name: impl Into<String>, outcome: Outcome, detail: Value) -> Case {
    Case { name: name.into(), outcome, detail }
}

fn error_case(name: impl Into<String>, e: &TdlcError) -> Case {
    let o = if e.is_unresolved() { Outcome::Inconclusive } else { Outcome::Fail };
    case(name, o, json!({ "error": e.to_string() }))
}

fn pass_if(ok: bool) -> Outcome {
    if ok {
        Outcome::Pass
    } else {
        Outcome::Fail
    }
}

fn counts_json(cs: &[IdentityCount]) -> Value {
    let mut m = Map::new();
    for c in cs {
        m.insert(c.name.into(), json!({ "checked": c.checked, "violations": c.violations }));
    }
    Value::Object(m)
}

fn indices() -> Vec<Case> {
    let mut out = Vec::new();
    for (name, g) in catalog::index_groups() {
        for c in check_index_identities(&g) {
            let ok = c.checked > 0 && c.violations == 0;
            out.push(case(
                format!("{name}/{}", c.name),
                pass_if(ok),
                json!({ "checked": c.checked, "violations": c.violations }),
            ));
        }
    }
    out
}

fn cotrajectory(cat: &[CatalogEntry], probe: &Probe) -> Vec<Case> {
    let depth = probe.n_max.min(IDENTITY_DEPTH);
    let mut out = Vec::new();
    for e in cat {
        for k in 0..probe.base.max(1) {
            let name = format!("{}/base{k}", e.name);
            let u = e.system.base_family(k);
            match check_cotrajectory_identities(&e.system, &u, depth) {
                Ok(cs) => {
                    let ok = cs.iter().all(|c| c.violations == 0);
                    out.push(case(name, pass_if(ok), json!({ "depth": depth, "identities": counts_json(&cs) })));
                }
                Err(err) => out.push(error_case(name, &err)),
            }
        }
    }
    out
}

fn limit_free(cat: &[CatalogEntry], probe: &Probe) -> Vec<Case> {
    let mut out = Vec::new();
    for e in cat {
        for k in 0..probe.base.max(1) {
            let name = format!("{}/base{k}", e.name);
            let u = e.system.base_family(k);
            let table = match alpha_sequence(&e.system, &u, probe.n_max.max(1)) {
                Ok(t) => t,
                Err(err) => {
                    out.push(error_case(name, &err));
                    continue;
                }
            };
            let Some(alpha) = table.stabilized_alpha().cloned() else {
                out.push(case(name, Outcome::Inconclusive, json!({ "reason": "no certified stabilization" })));
                continue;
            };
            let local = htop_local(&e.system, &u, probe.tidy);
            let limit = htop_limit_estimate(&e.system, &u, probe.n_max.max(1));
            match (local, limit) {
                (Ok(a), Ok(b)) => {
                    let ok = a == b && entropy_from_index(&alpha) == a;
                    out.push(case(
                        name,
                        pass_if(ok),
                        json!({ "local": a.to_string(), "limit": b.to_string(), "stabilization": table.stabilization }),
                    ));
                }
                (Err(err), _) | (_, Err(err)) => out.push(error_case(name, &err)),
            }
        }
    }
    out
}

fn addition(probe: &Probe) -> Vec<Case> {
    let mut out = Vec::new();
    for inst in catalog::addition_instances() {
        let spec = match inst.system.spec(inst.subgroup.clone()) {
            Ok(s) => s,
            Err(err) => {
                out.push(error_case(inst.name, &err));
                continue;
            }
        };
        let v = verify_addition_theorem(&inst.system, &spec, probe);
        let show = |e: &Option<tdlc::ExactEntropy>| e.as_ref().map(|x| x.to_string());
        out.push(case(
            inst.name,
            v.outcome,
            json!({
                "reason": v.reason,
                "total": show(&v.total),
                "restricted": show(&v.restricted),
                "quotient": show(&v.quotient),
            }),
        ));
    }
    out
}

fn scales(cat: &[CatalogEntry], probe: &Probe) -> Vec<Case> {
    let mut out = Vec::new();
    for e in cat {
        let r = match scale(&e.system, probe) {
            Ok(r) => r,
            Err(err) => {
                out.push(error_case(e.name, &err));
                continue;
            }
        };
        let compact_one = !e.system.is_compact_group() || r.value == IndexValue::one();
        let tidy = r.witness_tidy_above != Some(false) && r.witness_tidy_below != Some(false);
        let ok = compact_one && tidy && r.oracle_agrees() != Some(false);
        let o = if !ok {
            Outcome::Fail
        } else if r.certified {
            Outcome::Pass
        } else {
            Outcome::Inconclusive
        };
        out.push(case(
            e.name,
            o,
            json!({
                "scale": r.value.to_string(),
                "witness": e.system.describe_handle(&r.witness),
                "tidy_above": r.witness_tidy_above,
                "tidy_below": r.witness_tidy_below,
                "oracle": r.oracle.as_ref().map(|x| x.to_string()),
                "certified": r.certified,
            }),
        ));
    }
    out
}

fn scale_link(cat: &[CatalogEntry], probe: &Probe) -> Vec<Case> {
    let mut out = Vec::new();
    for e in cat {
        let v = verify_scale_entropy_link(&e.system, probe);
        let show = |x: &Option<tdlc::ExactEntropy>| x.as_ref().map(|x| x.to_string());
        out.push(case(
            e.name,
            v.outcome,
            json!({
                "reason": v.reason,
                "scale": v.scale.as_ref().map(|x| x.to_string()),
                "nub": v.nub.as_ref().map(|h| e.system.describe_handle(h)),
                "nub_trivial": v.nub_trivial,
                "nub_whole": v.nub.as_ref().map(|h| *h == e.system.whole()),
                "entropy": show(&v.entropy),
                "nub_entropy": show(&v.nub_entropy),
                "quotient_entropy": show(&v.quotient_entropy),
                "equivalence": v.equivalence,
            }),
        ));
    }
    out
}

fn entropy_and_scale(sys: &System, probe: &Probe) -> Result<(tdlc::ExactEntropy, IndexValue), TdlcError> {
    Ok((topological_entropy(sys, probe)?.value, scale(sys, probe)?.value))
}

fn products(probe: &Probe) -> Vec<Case> {
    let mut out = Vec::new();
    for p in catalog::products() {
        let prod = System::make_product(p.left.clone(), p.right.clone());
        let r = (|| {
            let (hp, sp) = entropy_and_scale(&prod, probe)?;
            let (hl, sl) = entropy_and_scale(&p.left, probe)?;
            let (hr, sr) = entropy_and_scale(&p.right, probe)?;
            Ok::<_, TdlcError>((hp, sp, entropy_add(&hl, &hr), sl * sr))
        })();
        match r {
            Ok((hp, sp, hs, ss)) => out.push(case(
                p.name,
                pass_if(hp == hs && sp == ss),
                json!({
                    "entropy": hp.to_string(),
                    "entropy_sum": hs.to_string(),
                    "scale": sp.to_string(),
                    "scale_product": ss.to_string(),
                }),
            )),
            Err(err) => out.push(error_case(p.name, &err)),
        }
    }
    let square = System::make_product(catalog::q2_half(), catalog::q2_half());
    match (entropy_and_scale(&square, probe), entropy_and_scale(&catalog::diag_half(), probe)) {
        (Ok((h1, s1)), Ok((h2, s2))) => out.push(case(
            "q2_half_squared=diag_half",
            pass_if(h1 == h2 && s1 == s2),
            json!({ "product": [h1.to_string(), s1.to_string()], "matrix": [h2.to_string(), s2.to_string()] }),
        )),
        (Err(err), _) | (_, Err(err)) => out.push(error_case("q2_half_squared=diag_half", &err)),
    }
    out
}

fn oracle(cat: &[CatalogEntry], probe: &Probe) -> Vec<Case> {
    let mut out = Vec::new();
    for e in cat {
        let System::Padic(p) = &e.system else { continue };
        let predicted = p.oracle_index();
        let u = e.system.base_family(0);
        let r = (|| {
            let t = alpha_sequence(&e.system, &u, probe.n_max.max(1))?;
            let s = scale(&e.system, probe)?;
            Ok::<_, TdlcError>((t.stabilized_alpha().cloned(), s.value))
        })();
        match r {
            Ok((Some(alpha), s)) => out.push(case(
                e.name,
                pass_if(alpha == predicted && s == predicted),
                json!({ "newton": predicted.to_string(), "alpha": alpha.to_string(), "scale": s.to_string() }),
            )),
            Ok((None, _)) => out.push(case(e.name, Outcome::Inconclusive, json!({ "reason": "no certified stabilization" }))),
            Err(err) => out.push(error_case(e.name, &err)),
        }
    }
    out
}

fn monotonicity(cat: &[CatalogEntry], probe: &Probe) -> Vec<Case> {
    let mut out = Vec::new();
    for e in cat {
        for (sub, data) in &e.subgroups {
            let name = format!("{}/{sub}", e.name);
            let spec = match e.system.spec(data.clone()) {
                Ok(s) => s,
                Err(err) => {
                    out.push(error_case(name, &err));
                    continue;
                }
            };
            if !spec.flags.stable {
                out.push(case(format!("{name}/restriction"), Outcome::Skipped, json!({ "reason": "not stable" })));
            } else {
                match restriction_monotone(&e.system, &spec, probe) {
                    Ok((r, t, ok)) => out.push(case(
                        format!("{name}/restriction"),
                        pass_if(ok),
                        json!({ "restricted": r.to_string(), "total": t.to_string() }),
                    )),
                    Err(TdlcError::Unsupported(m)) => {
                        out.push(case(format!("{name}/restriction"), Outcome::Skipped, json!({ "reason": m })))
                    }
                    Err(err) => out.push(error_case(format!("{name}/restriction"), &err)),
                }
            }
            let f = spec.flags;
            if !(f.compact && f.normal && f.invariant) {
                out.push(case(format!("{name}/quotient"), Outcome::Skipped, json!({ "reason": "not compact invariant normal" })));
                continue;
            }
            match quotient_table_check(&e.system, &spec, probe) {
                Ok((checked, bad)) => out.push(case(
                    format!("{name}/quotient"),
                    pass_if(bad == 0 && checked > 0),
                    json!({ "checked": checked, "mismatches": bad }),
                )),
                Err(TdlcError::Unsupported(m)) => {
                    out.push(case(format!("{name}/quotient"), Outcome::Skipped, json!({ "reason": m })))
                }
                Err(err) => out.push(error_case(format!("{name}/quotient"), &err)),
            }
        }
    }
    out
}

/// Runs one suite by name.
pub fn run_suite(name: &str, flags: Flags) -> Result<SuiteResult, CliError> {
    let probe = &flags.probe;
    let start = Instant::now();
    let (name, cases) = match name {
        "indices" => ("indices", indices()),
        "cotrajectory" => ("cotrajectory", cotrajectory(&catalog::systems(), probe)),
        "limit-free" => ("limit-free", limit_free(&catalog::systems(), probe)),
        "addition" => ("addition", addition(probe)),
        "scale" => ("scale", scales(&catalog::systems(), probe)),
        "scale-link" => ("scale-link", scale_link(&catalog::systems(), probe)),
        "products" => ("products", products(probe)),
        "oracle" => ("oracle", oracle(&catalog::systems(), probe)),
        "monotonicity" => ("monotonicity", monotonicity(&catalog::systems(), probe)),
        other => return Err(CliError::Invalid(format!("unknown suite {other:?}"))),
    };
    Ok(SuiteResult { name, cases, elapsed_ms: start.elapsed().as_millis() as u64 })
}

/// Expands `all` and runs each suite on its own thread; results keep the
/// order of `names`.
pub fn run_suites(names: &[String], flags: Flags) -> Result<Vec<SuiteResult>, CliError> {
    let mut list: Vec<&str> = Vec::new();
    for n in names {
        if n == "all" {
            list.extend(SUITES);
        } else {
            list.push(n);
        }
    }
    std::thread::scope(|s| {
        let handles: Vec<_> = list.iter().map(|n| s.spawn(move || run_suite(n, flags))).collect();
        handles.into_iter().map(|h| h.join().expect("suite thread panicked")).collect()
    })
}

pub fn suites_json(results: &[SuiteResult], flags: Flags) -> Value {
    let mut suites = Vec::new();
    let mut totals = [0usize; 4];
    let order = [Outcome::Pass, Outcome::Fail, Outcome::Skipped, Outcome::Inconclusive];
    for r in results {
        let cases: Vec<Value> = r
            .cases
            .iter()
            .map(|c| json!({ "case": c.name, "outcome": c.outcome.name(), "detail": c.detail }))
            .collect();
        let mut summary = Map::new();
        for (i, o) in order.iter().enumerate() {
            let n = r.count(*o);
            totals[i] += n;
            summary.insert(o.name().into(), json!(n));
        }
        let mut v = json!({ "suite": r.name, "cases": cases, "summary": summary });
        if flags.timing {
            v["timing_ms"] = json!(r.elapsed_ms);
        }
        suites.push(v);
    }
    let mut summary = Map::new();
    for (i, o) in order.iter().enumerate() {
        summary.insert(o.name().into(), json!(totals[i]));
    }
    json!({
        "version": env!("CARGO_PKG_VERSION"),
        "probe": { "n_max": flags.probe.n_max, "tidy": flags.probe.tidy, "base": flags.probe.base, "resolution": flags.probe.resolution },
        "suites": suites,
        "summary": summary,
    })
}

pub const SUITE_CSV_HEADER: &str = "suite,case,outcome";

pub fn suites_csv(results: &[SuiteResult]) -> String {
    let mut s = String::from(SUITE_CSV_HEADER);
    s.push('\n');
    for r in results {
        for c in &r.cases {
            s.push_str(&format!("{},{},{}\n", r.name, c.name, c.outcome.name()));
        }
    }
    s
}

/// Exit status for a finished run: 1 on any FAIL, and on INCONCLUSIVE when strict.
pub fn suites_exit_code(results: &[SuiteResult], strict: bool) -> i32 {
    let any = |o| results.iter().any(|r| r.count(o) > 0);
    if any(Outcome::Fail) || (strict && any(Outcome::Inconclusive)) {
        1
    } else {
        0
    }
}
