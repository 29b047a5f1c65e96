use std::collections::BTreeMap;
use std::time::Instant;

use serde_json::{json, Value};

use super::oracle::run_oracle;
use super::problem::{parse_problem, BackendName, HcRoute, ProblemFile, Task};
use super::report::{tables_json, Report, Status, TaskReport};
use crate::cyclic::{adams, build_cyclic, hc, hc_de_rham, sbi_sequence};
use crate::error::{Error, Result};
use crate::grobner::{parse_poly, Budget};
use crate::hochschild::{
    cross_check_koszul, hh_bar, hh_koszul, hh_resolution, hh_theta, hkr_map, log_diagonal_ring, theta_complex,
};
use crate::logring::{de_rham_cohomology, exterior_power, log_differentials, LogRingSpec};

struct Outcome {
    result: Value,
    checks: BTreeMap<String, bool>,
}

impl Outcome {
    fn new(result: Value) -> Self {
        Outcome {
            result,
            checks: BTreeMap::new(),
        }
    }

    fn check(mut self, name: &str, holds: bool) -> Self {
        self.checks.insert(name.into(), holds);
        self
    }
}

fn run_task(p: &ProblemFile, spec: &LogRingSpec, task: &Task, budget: &Budget) -> Result<Outcome> {
    let box_or = |d: &Option<Vec<i64>>| d.clone().unwrap_or_else(|| p.default_degrees());
    Ok(match task {
        Task::Hh {
            n,
            backend,
            degrees,
            regular_sequence,
            cross_check,
        } => {
            let degrees = box_or(degrees);
            let backend = backend.unwrap_or(if regular_sequence.is_empty() {
                BackendName::Resolution
            } else {
                BackendName::Koszul
            });
            let mut h = match backend {
                BackendName::Resolution => hh_resolution(spec, *n, &degrees, budget)?,
                BackendName::Bar => hh_bar(spec, *n, budget)?,
                BackendName::Theta => hh_theta(spec, *n, budget)?,
                BackendName::Koszul => {
                    let d = log_diagonal_ring(spec, budget)?;
                    let seq = regular_sequence
                        .iter()
                        .map(|s| parse_poly(d.ring.ring(), s))
                        .collect::<Result<Vec<_>>>()?;
                    hh_koszul(spec, &seq, *n, &degrees, budget)?
                }
            };
            let mut out = Outcome::new(json!({
                "backend": format!("{:?}", h.backend).to_lowercase(),
                "tables": tables_json(&h.tables),
            }));
            if *cross_check && backend == BackendName::Koszul {
                let agree = cross_check_koszul(spec, &mut h, &degrees, budget)?;
                out = out.check("koszul_matches_resolution", agree);
            } else if *cross_check {
                let r = hh_resolution(spec, *n, &degrees, budget)?;
                let restricted: Vec<BTreeMap<i64, usize>> = h
                    .tables
                    .iter()
                    .map(|t| degrees.iter().map(|d| (*d, t.get(d).copied().unwrap_or(0))).collect())
                    .collect();
                out = out.check("matches_resolution", restricted == r.tables);
            }
            out
        }
        Task::Hc {
            m_max,
            route,
            degrees,
            width,
        } => match route {
            HcRoute::Bicomplex => {
                let cm = build_cyclic(spec, m_max + 1, budget)?;
                let w = width.unwrap_or(m_max + 2);
                let h = hc(&cm, *m_max, w)?;
                let mut tables = h.tables.clone();
                if let Some(ds) = degrees {
                    tables = tables
                        .iter()
                        .map(|t| ds.iter().map(|d| (*d, t.get(d).copied().unwrap_or(0))).collect())
                        .collect();
                }
                Outcome::new(json!({"route": "bicomplex", "width": w, "tables": tables_json(&tables)}))
                    .check("cyclic_identities", true)
                    .check("stable_at_width_plus_one", true)
            }
            HcRoute::DeRham => {
                let t = hc_de_rham(spec, *m_max, &box_or(degrees), budget)?;
                Outcome::new(json!({"route": "de_rham", "tables": tables_json(&t)}))
            }
        },
        Task::Omega { n, degrees } => {
            let om = log_differentials(spec, budget)?;
            let m = exterior_power(&om.module, *n);
            let t = m.hilbert_function(&box_or(degrees))?;
            Outcome::new(json!({
                "n": n,
                "generators": om.names,
                "relations": om.module.relations.len(),
                "hilbert": t.iter().map(|(d, v)| [*d, *v as i64]).collect::<Vec<_>>(),
            }))
        }
        Task::Derham { m_max, degrees } => {
            let ds = box_or(degrees);
            let t = (0..=*m_max)
                .map(|m| de_rham_cohomology(spec, m, &ds, budget))
                .collect::<Result<Vec<_>>>()?;
            Outcome::new(json!({"tables": tables_json(&t)}))
        }
        Task::Hkr { n, degrees } => {
            let r = hkr_map(spec, *n, &box_or(degrees), budget)?;
            let iso = r.is_iso();
            Outcome::new(json!({
                "n": r.n,
                "isomorphism": iso,
                "relations_checked": r.relations_checked,
                "degrees": serde_json::to_value(&r.degrees).expect("serializes"),
            }))
            .check("well_defined", true)
        }
        Task::Sbi { m_max } => {
            let cm = build_cyclic(spec, m_max + 2, budget)?;
            let s = sbi_sequence(&cm, *m_max)?;
            Outcome::new(json!({
                "hh": s.hh,
                "hc": s.hc,
                "spots": serde_json::to_value(&s.spots).expect("serializes"),
            }))
            .check("exact", s.exact())
        }
        Task::Adams { n, k } => {
            let mut out = Vec::new();
            let mut complete = true;
            for &k in k {
                let d = adams(spec, k, *n, budget)?;
                complete &= d.complete;
                out.push(json!({
                    "k": k,
                    "n": n,
                    "eigenspaces": d.eigen.iter().map(|(i, v)| json!({"weight": i, "eigenvalue": (k as i128).pow(*i), "dim": v})).collect::<Vec<_>>(),
                    "total": d.total(),
                }));
            }
            Outcome::new(Value::Array(out))
                .check("commutes_with_b", true)
                .check("decomposition_complete", complete)
        }
        Task::ThetaComplex { n } => {
            let t = theta_complex(spec, *n, budget)?;
            let r = t.verify();
            Outcome::new(json!({"checked": r.checked, "failures": r.failures})).check("identities", r.ok())
        }
        Task::Oracle { n, m_max } => {
            let r = run_oracle(spec, *n, *m_max, &p.default_degrees(), budget)?;
            let agree = r.agree();
            Outcome::new(serde_json::to_value(&r).expect("serializes")).check("agree", agree)
        }
    })
}

/// Parses, validates and runs every task of a problem file.
pub fn run_problem(text: &str, budget_override: Option<&Budget>) -> Report {
    let problem = match parse_problem(text) {
        Ok(p) => p,
        Err(e) => return Report::input_error(text, &e),
    };
    let budget = budget_override.cloned().unwrap_or_else(|| problem.budget());
    let spec = match problem.to_spec().and_then(|s| s.check(&budget).map(|_| s)) {
        Ok(s) => s,
        Err(e) => return Report::input_error(text, &e),
    };
    let mut report = Report::new(text);
    for task in &problem.tasks {
        let start = Instant::now();
        let res = run_task(&problem, &spec, task, &budget);
        let seconds = start.elapsed().as_secs_f64();
        let t = match res {
            Ok(o) => {
                let ok = o.checks.values().all(|&c| c);
                let unverified = o.checks.iter().any(|(k, v)| !v && (k == "koszul_matches_resolution"));
                TaskReport {
                    task: task.name().into(),
                    status: if ok {
                        Status::Ok
                    } else if unverified {
                        Status::Unverified
                    } else {
                        Status::Failed
                    },
                    message: None,
                    result: o.result,
                    checks: o.checks,
                    seconds,
                }
            }
            Err(e) => TaskReport {
                task: task.name().into(),
                status: Status::of_error(&e),
                message: Some(e.to_string()),
                result: Value::Null,
                checks: BTreeMap::new(),
                seconds,
            },
        };
        report.push(t);
    }
    report
}

/// Applies `key=value` overrides to a budget.
pub fn override_budget(mut b: Budget, items: &[String]) -> Result<Budget> {
    for item in items {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| Error::Schema(format!("budget override `{item}` is not key=value")))?;
        let bad = || Error::Schema(format!("budget value `{v}` is not a number"));
        match k.trim() {
            "max_pairs" => b.max_pairs = v.trim().parse().map_err(|_| bad())?,
            "max_terms" => b.max_terms = v.trim().parse().map_err(|_| bad())?,
            "max_degree" => b.max_degree = v.trim().parse().map_err(|_| bad())?,
            other => return Err(Error::Schema(format!("unknown budget key `{other}`"))),
        }
    }
    Ok(b)
}
