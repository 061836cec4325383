//! Configuration-driven experiment sweeps.
//!
//! Config is JSON (schema version 1):
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "defaults": { "max_ladder": 4, "eps": "1/2", "checks": ["14k3"], "timings": false },
//!   "instances": [
//!     { "id": "a", "group": "cyclic:24", "set": "0,1,8,9,16,17", "seed": 0 },
//!     { "id": "b", "group": "cyclic:101", "set": "gen:sidon_greedy(4)", "seed": 7,
//!       "checks": ["sidon"] }
//!   ]
//! }
//! ```
//!
//! Check names: `14k3`, `plunnecke:k,l`, `exponent:r`, `sidon`, `dichotomy`.
//! Each check is an assertion; any failing row makes the run exit 1.
//! `eps`, `max_ladder`, `checks`, `timings` can be overridden per instance.
//! With timings off (the default) output is byte-deterministic; enabling
//! timings adds wall-clock floats and forfeits golden comparability.
//!
//! Exit codes: 0 all assertions pass, 1 some check failed (reports still
//! written), 2 config unreadable or invalid, 3 instance resolution failure.

use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::gen::generate;
use crate::group::{Group, GroupSet, DEFAULT_SUBGROUP_BUDGET};
use crate::growth::{check_14k3, growth_stats, plunnecke_check, exponent_bound_check, rat};
use crate::report::{
    BoundCheckRepr, CheckRecord, GrowthRepr, InstanceEcho, RatioRepr, Report, StabilityRepr,
    StructureRepr, Timings, SCHEMA_VERSION,
};
use crate::stability::{classify_dichotomy, is_sidon, stability_profile};
use crate::structure::theorem_a_search;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub schema_version: u32,
    #[serde(default)]
    pub defaults: Defaults,
    pub instances: Vec<InstanceConfig>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Defaults {
    pub max_ladder: Option<usize>,
    /// "p/q"; enables the theorem_a structures section.
    pub eps: Option<String>,
    pub checks: Option<Vec<String>>,
    pub timings: Option<bool>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceConfig {
    pub id: String,
    pub group: String,
    /// Element literal "0,1,6" or generator "gen:interval(5)".
    pub set: String,
    #[serde(default)]
    pub seed: u64,
    pub max_ladder: Option<usize>,
    pub eps: Option<String>,
    pub checks: Option<Vec<String>>,
    pub timings: Option<bool>,
}

const DEFAULT_MAX_LADDER: usize = 4;

fn parse_eps(text: &str) -> Result<num_rational::BigRational> {
    let (p, q) = text
        .split_once('/')
        .ok_or_else(|| Error::InvalidParam(format!("eps {text:?}: expected p/q")))?;
    let p: usize = p
        .trim()
        .parse()
        .map_err(|_| Error::InvalidParam(format!("eps numerator {p:?}")))?;
    let q: usize = q
        .trim()
        .parse()
        .map_err(|_| Error::InvalidParam(format!("eps denominator {q:?}")))?;
    if q == 0 {
        return Err(Error::InvalidParam("eps denominator must be nonzero".into()));
    }
    Ok(rat(p, q))
}

/// Resolves the set field of an instance: `gen:` descriptors are seeded
/// generators, everything else an element literal.
pub fn resolve_set(group: &Arc<Group>, set: &str, seed: u64) -> Result<GroupSet> {
    if let Some(spec) = set.strip_prefix("gen:") {
        generate(spec, group, seed)
    } else {
        GroupSet::parse_literal(group, set)
    }
}

fn run_check(name: &str, a: &GroupSet) -> Result<CheckRecord> {
    let record = |pass: bool, detail: String| CheckRecord {
        name: name.to_string(),
        pass,
        detail,
    };
    if name == "14k3" {
        let c = check_14k3(a)?;
        let r = BoundCheckRepr::from_check(&c)?;
        return Ok(record(
            c.pass,
            format!(
                "bbb_card={} bound={}/{} mu_a={}/{}",
                r.bbb_card, r.bound.num, r.bound.den, r.mu_a.num, r.mu_a.den
            ),
        ));
    }
    if let Some(kl) = name.strip_prefix("plunnecke:") {
        let (k, l) = kl
            .split_once(',')
            .ok_or_else(|| Error::InvalidParam(format!("check {name:?}: expected plunnecke:k,l")))?;
        let k = k.trim().parse().map_err(|_| Error::InvalidParam(name.into()))?;
        let l = l.trim().parse().map_err(|_| Error::InvalidParam(name.into()))?;
        let c = plunnecke_check(a, k, l)?;
        let bound = RatioRepr::from_rational(&c.bound)?;
        return Ok(record(
            c.pass,
            format!(
                "sumset_card={} bound={}/{}",
                c.sumset_card, bound.num, bound.den
            ),
        ));
    }
    if let Some(r) = name.strip_prefix("exponent:") {
        let r = r.trim().parse().map_err(|_| Error::InvalidParam(name.into()))?;
        let c = exponent_bound_check(a, r)?;
        return Ok(record(
            c.pass,
            if c.astronomical {
                format!("subgroup_card={} bound=astronomical", c.subgroup_card)
            } else {
                format!("subgroup_card={} bound_holds={}", c.subgroup_card, c.pass)
            },
        ));
    }
    match name {
        "sidon" => {
            let s = is_sidon(a)?;
            Ok(record(
                s.sidon,
                match s.witness {
                    Some([a1, a2, a3, a4]) => format!("violation=({a1},{a2},{a3},{a4})"),
                    None => "no repeated difference".to_string(),
                },
            ))
        }
        "dichotomy" => {
            let d = classify_dichotomy(a)?;
            Ok(record(
                d.two_stable == d.two_wn && d.two_wn == d.coset_or_empty,
                format!(
                    "two_stable={} two_wn={} coset_or_empty={}",
                    d.two_stable, d.two_wn, d.coset_or_empty
                ),
            ))
        }
        other => Err(Error::InvalidParam(format!("unknown check {other:?}"))),
    }
}

/// Builds the full report for one resolved instance.
#[allow(clippy::too_many_arguments)]
pub fn analyze_instance(
    id: &str,
    group_desc: &str,
    set_desc: &str,
    seed: u64,
    a: &GroupSet,
    max_ladder: usize,
    eps: Option<&num_rational::BigRational>,
    checks: &[String],
    timings: bool,
) -> Result<Report> {
    let start = Instant::now();
    let growth = GrowthRepr::from_stats(&growth_stats(a)?)?;
    let stability = StabilityRepr::from_profile(&stability_profile(a, max_ladder)?);
    let structures = match eps {
        Some(eps) => theorem_a_search(a, eps, DEFAULT_SUBGROUP_BUDGET)?
            .pareto
            .iter()
            .map(StructureRepr::from_structure)
            .collect::<Result<Vec<_>>>()?,
        None => Vec::new(),
    };
    let check_records = checks
        .iter()
        .map(|name| run_check(name, a))
        .collect::<Result<Vec<_>>>()?;
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        instance: InstanceEcho {
            id: id.to_string(),
            group: group_desc.to_string(),
            set: set_desc.to_string(),
            seed,
            elements: a.elements(),
        },
        growth,
        stability,
        structures,
        representation: None,
        checks: check_records,
        timings: timings.then(|| Timings {
            total_ms: start.elapsed().as_secs_f64() * 1e3,
        }),
    })
}

pub const SUMMARY_HEADER: [&str; 5] = ["schema_version", "instance", "check", "status", "detail"];

/// Runs a sweep; returns the process exit code. Diagnostics go to stderr.
pub fn run_experiment(config_path: &Path, out_dir: &Path) -> i32 {
    let config: SweepConfig = match std::fs::read_to_string(config_path)
        .map_err(Error::from)
        .and_then(|text| Ok(serde_json::from_str(&text)?))
    {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config error: {e}");
            return 2;
        }
    };
    if config.schema_version != SCHEMA_VERSION {
        eprintln!(
            "config error: unsupported schema_version {}",
            config.schema_version
        );
        return 2;
    }
    {
        let mut ids: Vec<&str> = config.instances.iter().map(|i| i.id.as_str()).collect();
        ids.sort_unstable();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            eprintln!("config error: duplicate instance ids");
            return 2;
        }
    }

    // Resolve everything up front: a sweep either runs in full or not at all.
    let mut resolved = Vec::new();
    for inst in &config.instances {
        let step = || -> Result<_> {
            let group = Group::parse(&inst.group)?;
            let a = resolve_set(&group, &inst.set, inst.seed)?;
            if a.is_empty() {
                return Err(Error::EmptySet("sweep instance"));
            }
            let eps = inst
                .eps
                .as_deref()
                .or(config.defaults.eps.as_deref())
                .map(parse_eps)
                .transpose()?;
            let checks = inst
                .checks
                .clone()
                .or_else(|| config.defaults.checks.clone())
                .unwrap_or_default();
            let max_ladder = inst
                .max_ladder
                .or(config.defaults.max_ladder)
                .unwrap_or(DEFAULT_MAX_LADDER);
            let timings = inst
                .timings
                .or(config.defaults.timings)
                .unwrap_or(false);
            Ok((inst, a, eps, checks, max_ladder, timings))
        };
        match step() {
            Ok(r) => resolved.push(r),
            Err(e) => {
                eprintln!("instance {:?}: {e}", inst.id);
                return 3;
            }
        }
    }

    if let Err(e) = std::fs::create_dir_all(out_dir) {
        eprintln!("output directory: {e}");
        return 3;
    }
    let mut rows: Vec<[String; 5]> = Vec::new();
    let mut all_pass = true;
    for (inst, a, eps, checks, max_ladder, timings) in resolved {
        let report = match analyze_instance(
            &inst.id, &inst.group, &inst.set, inst.seed, &a, max_ladder,
            eps.as_ref(), &checks, timings,
        ) {
            Ok(r) => r,
            Err(e) => {
                eprintln!("instance {:?}: {e}", inst.id);
                return 3;
            }
        };
        for check in &report.checks {
            all_pass &= check.pass;
            rows.push([
                SCHEMA_VERSION.to_string(),
                inst.id.clone(),
                check.name.clone(),
                if check.pass { "pass" } else { "fail" }.to_string(),
                check.detail.clone(),
            ]);
        }
        let bytes = match report.to_bytes() {
            Ok(b) => b,
            Err(e) => {
                eprintln!("instance {:?}: {e}", inst.id);
                return 3;
            }
        };
        if let Err(e) = std::fs::write(out_dir.join(format!("{}.json", inst.id)), bytes) {
            eprintln!("instance {:?}: {e}", inst.id);
            return 3;
        }
    }

    rows.sort_by(|x, y| (&x[1], &x[2]).cmp(&(&y[1], &y[2])));
    let write_csv = || -> Result<()> {
        let mut w = csv::Writer::from_path(out_dir.join("summary.csv")).map_err(io_like)?;
        w.write_record(SUMMARY_HEADER).map_err(io_like)?;
        for row in &rows {
            w.write_record(row).map_err(io_like)?;
        }
        w.flush()?;
        Ok(())
    };
    if let Err(e) = write_csv() {
        eprintln!("summary.csv: {e}");
        return 3;
    }
    if all_pass {
        0
    } else {
        1
    }
}

fn io_like(e: csv::Error) -> Error {
    Error::InvalidParam(format!("csv: {e}"))
}
