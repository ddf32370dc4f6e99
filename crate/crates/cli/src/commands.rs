use std::fs;
use std::path::Path;

use serde::Serialize;
use tamesep_core::coloring::{col_profile, volume_ordering};
use tamesep_core::generators::{
    hub_star_family, lshape_clique, narrow_rectangles_bipartite, random_box_instance, sstar_family,
    star_path_boxes, wedge_family, AspectProfile, Provenance,
};
use tamesep_core::graph::{boxes_dichotomy, check_tame, verify_dichotomy, Dichotomy};
use tamesep_core::harness::{
    load_input, run_experiment, to_json_string, write_report, BoundConstants, ExperimentConfig, GraphFile, Input,
    LemmaSuiteConfig,
};
use tamesep_core::harness::lemma_suite;
use tamesep_core::relations::comparability_scan;
use tamesep_core::num::{f64_to_q, format_sig, parse_q, q_to_decimal, Scalar};
use tamesep_core::separators::{is_balanced_separator, SeparatorMethod, SeparatorResult};
use tamesep_core::{Graph, InstanceBundle, Ordering, Q};

use crate::output::{csv, emit, json};
use crate::{Cli, Command, Family, Format, GenArgs, Method};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] tamesep_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub enum Status {
    Ok,
    /// A certificate or bound check failed.
    Violation,
}

fn status(ok: bool) -> Status {
    if ok {
        Status::Ok
    } else {
        Status::Violation
    }
}

fn need(v: Option<usize>, flag: &str) -> Result<usize, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("this family needs {flag}")))
}

fn instance_of(input: &Input) -> Result<&InstanceBundle, CliError> {
    input.instance().ok_or_else(|| CliError::Usage("this command needs a geometric instance, not a graph file".into()))
}

pub fn run(cli: &Cli) -> Result<Status, CliError> {
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Gen(a) => gen(a, cli.seed, out, cli.format),
        Command::Graph { input } => graph(&load_input(input)?, out, cli.format),
        Command::TameCheck { input, c, s } => tame(&load_input(input)?, *c, s.as_deref(), out, cli.format),
        Command::Col { input, order, r_max } => col(&load_input(input)?, order, *r_max, out, cli.format),
        Command::Sep { input, method, r, order } => sep(&load_input(input)?, *method, *r, order, out, cli.format),
        Command::Dichotomy { input, k } => dichotomy(&load_input(input)?, *k, out, cli.format),
        Command::Experiment { config } => experiment(config, out),
        Command::VerifyLemmas { pairs, families, interval_pairs } => {
            lemmas(LemmaSuiteConfig::new(cli.seed, *pairs, *families, *interval_pairs), out, cli.format)
        }
    }
}

fn graph_file(graph: Graph, ordering: Option<Ordering>, generator: &str, params: serde_json::Value) -> GraphFile {
    GraphFile { graph, ordering, provenance: Some(Provenance { generator: generator.into(), params, seed: None }) }
}

fn gen(a: &GenArgs, seed: u64, out: Option<&Path>, format: Format) -> Result<Status, CliError> {
    if format == Format::Csv {
        return Err(CliError::Usage("gen writes JSON only".into()));
    }
    let bundle = match a.family {
        Family::Wedge => wedge_family(need(a.m, "--m")?)?,
        Family::NarrowRectangles => {
            let m = need(a.m, "--m")?;
            let t = match &a.thickness {
                Some(t) => parse_q(t)?,
                None => Q::new(1.into(), (10 * m as i64).into()),
            };
            narrow_rectangles_bipartite(m, &t)?
        }
        Family::StarPath => star_path_boxes(need(a.r, "--r")?, need(a.t, "--t")?)?,
        Family::RandomBox => {
            let profile: AspectProfile = a.profile.parse()?;
            random_box_instance(need(a.n, "--n")?, need(a.d, "--d")?, profile, seed, a.max_thinness)?
        }
        Family::Sstar => sstar_family(a.h_max)?.random_instance(need(a.n, "--n")?, seed)?,
        Family::Lshape => lshape_clique(need(a.m, "--m")?)?,
        Family::HubStar => {
            let (g, ord) = hub_star_family(&a.counts, &a.lengths)?;
            let params = serde_json::json!({ "counts": a.counts, "lengths": a.lengths });
            return write_graph_file(&graph_file(g, Some(ord), "hub_star", params), out);
        }
        Family::Path | Family::Cycle | Family::Complete => {
            let n = need(a.n, "--n")?;
            let (g, name) = match a.family {
                Family::Path => (Graph::path(n), "path"),
                Family::Cycle => (Graph::cycle(n), "cycle"),
                _ => (Graph::complete(n), "complete"),
            };
            let file = graph_file(g, Some(Ordering::identity(n)), name, serde_json::json!({ "n": n }));
            return write_graph_file(&file, out);
        }
        Family::Grid => {
            let (w, h) = (need(a.w, "--w")?, need(a.h, "--h")?);
            let file = graph_file(
                Graph::grid(w, h),
                Some(Ordering::identity(w * h)),
                "grid",
                serde_json::json!({ "w": w, "h": h }),
            );
            return write_graph_file(&file, out);
        }
    };
    emit(out, &to_json_string(&bundle)?)?;
    let s_star = bundle.measured.s_star.as_ref().map_or("-".to_string(), |s| match s {
        Scalar::Exact(q) => q.to_string(),
        Scalar::Float(x) => format_sig(*x),
    });
    summary(
        out,
        &format!(
            "{}: n={} d={} c={} s*={}",
            bundle.provenance.generator,
            bundle.n(),
            bundle.representation.dim(),
            bundle.measured.thinness,
            s_star
        ),
    );
    Ok(Status::Ok)
}

/// Summary lines go to stdout when the document went to a file.
fn summary(out: Option<&Path>, line: &str) {
    if out.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

fn write_graph_file(f: &GraphFile, out: Option<&Path>) -> Result<Status, CliError> {
    emit(out, &to_json_string(f)?)?;
    let name = f.provenance.as_ref().map_or("graph", |p| p.generator.as_str());
    summary(out, &format!("{name}: n={} m={}", f.graph.n(), f.graph.m()));
    Ok(Status::Ok)
}

fn graph(input: &Input, out: Option<&Path>, format: Format) -> Result<Status, CliError> {
    let g = input.graph()?;
    let text = match format {
        Format::Json => {
            let prov = input.instance().map(|b| b.provenance.clone());
            json(&GraphFile { graph: g, ordering: input.ordering().cloned(), provenance: prov })?
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = g.edges().iter().map(|(u, v)| vec![u.to_string(), v.to_string()]).collect();
            csv(&[format!("n={}", g.n())], &["u", "v"], &rows)?
        }
    };
    emit(out, &text)?;
    Ok(Status::Ok)
}

fn bound_s(b: &InstanceBundle) -> Option<Q> {
    match &b.measured.s_star {
        Some(Scalar::Exact(s)) => Some(s.clone()),
        _ => b.expected_s.clone(),
    }
}

fn tame(input: &Input, c: Option<usize>, s: Option<&str>, out: Option<&Path>, format: Format) -> Result<Status, CliError> {
    let b = instance_of(input)?;
    let c = c.or(b.expected_thinness).unwrap_or(b.measured.thinness);
    let s = match s {
        Some(s) => parse_q(s)?,
        None => match bound_s(b) {
            Some(s) => s,
            // Exact s* is cheap on boxes only.
            None if b.representation.all_boxes() => {
                match comparability_scan(&b.representation.realized(), &Q::from_integer(1.into()))?.s_star {
                    Scalar::Exact(s) => s,
                    Scalar::Float(x) => f64_to_q(x.max(1.0))?,
                }
            }
            None => return Err(CliError::Usage("no comparability parameter recorded for this instance; pass --s".into())),
        },
    };
    let cert = check_tame(&b.representation, c, &s)?;
    let text = match format {
        Format::Json => json(&cert)?,
        Format::Csv => csv(
            &[],
            &["c", "s", "thinness", "s_star", "status", "certified", "failures", "undecided"],
            &[vec![
                c.to_string(),
                q_to_decimal(&s),
                cert.thinness.to_string(),
                cert.s_star.as_ref().map_or(String::new(), |x| format_sig(x.to_f64())),
                serde_json::to_value(cert.status)?.as_str().unwrap_or_default().into(),
                cert.certified.to_string(),
                cert.failures.len().to_string(),
                cert.undecided.len().to_string(),
            ]],
        )?,
    };
    emit(out, &text)?;
    Ok(status(cert.certified))
}

fn resolve_order(input: &Input, spec: &str, n: usize) -> Result<Ordering, CliError> {
    Ok(match spec {
        "volume" => volume_ordering(&instance_of(input)?.representation)?,
        "given" => {
            input.ordering().cloned().ok_or_else(|| CliError::Usage("the input carries no ordering".into()))?
        }
        "identity" => Ordering::identity(n),
        path => serde_json::from_str(&fs::read_to_string(path)?)?,
    })
}

#[derive(Serialize)]
struct ColOutput<'a> {
    order: &'a str,
    constants: Option<BoundConstants>,
    profile: tamesep_core::ColoringProfile,
    /// Radii where `col > δ r^d`.
    violations: Vec<usize>,
}

fn col(input: &Input, order: &str, r_max: usize, out: Option<&Path>, format: Format) -> Result<Status, CliError> {
    let g = input.graph()?;
    let ord = resolve_order(input, order, g.n())?;
    let profile = col_profile(&g, &ord, r_max)?;
    // The bound is stated for the volume ordering.
    let constants = match (order, input.instance()) {
        ("volume", Some(b)) => bound_s(b)
            .map(|s| BoundConstants::new(b.measured.thinness.max(1), &s.max(Q::from_integer(1.into())), b.representation.dim()))
            .transpose()?,
        _ => None,
    };
    let violations = constants.as_ref().map_or_else(Vec::new, |k| profile.bound_violations(&k.delta, k.d));
    let text = match format {
        Format::Json => json(&ColOutput { order, constants: constants.clone(), profile: profile.clone(), violations: violations.clone() })?,
        Format::Csv => {
            let comments: Vec<String> = std::iter::once(format!("order={order}"))
                .chain(constants.iter().map(|k| {
                    format!(
                        "c={} d={} s={} s_prime={} k_prime={} delta={}",
                        k.c,
                        k.d,
                        k.s,
                        k.s_prime,
                        k.k_prime,
                        q_to_decimal(&k.delta)
                    )
                }))
                .collect();
            let rows: Vec<Vec<String>> = profile
                .entries
                .iter()
                .map(|e| {
                    let bound = constants.as_ref().map_or(String::new(), |k| q_to_decimal(&k.bound(e.r)));
                    vec![e.r.to_string(), e.value.to_string(), e.argmax.to_string(), bound]
                })
                .collect();
            csv(&comments, &["r", "col", "argmax", "bound"], &rows)?
        }
    };
    emit(out, &text)?;
    Ok(status(violations.is_empty()))
}

#[derive(Serialize)]
struct SepOutput {
    #[serde(flatten)]
    result: SeparatorResult,
    /// Balance recomputed from the separator alone.
    verified_balanced: bool,
}

fn sep(input: &Input, method: Method, r: usize, order: &str, out: Option<&Path>, format: Format) -> Result<Status, CliError> {
    let g = input.graph()?;
    let (m, ord) = match method {
        Method::Exact => (SeparatorMethod::Exact, Ordering::identity(g.n())),
        Method::BfsLayer => (SeparatorMethod::BfsLayer, Ordering::identity(g.n())),
        Method::Ordering => {
            let order = if order == "volume" && input.instance().is_none() { "given" } else { order };
            (SeparatorMethod::Ordering { r }, resolve_order(input, order, g.n())?)
        }
    };
    let result = m.run(&g, &ord).map_err(|e| match e {
        tamesep_core::Error::SizeCap { .. } => {
            CliError::Usage(format!("{e}; use --method bfs-layer or --method ordering for larger graphs"))
        }
        e => e.into(),
    })?;
    let check = is_balanced_separator(&g, &result.separator)?;
    let ok = result.balanced && check.balanced;
    let text = match format {
        Format::Json => json(&SepOutput { result, verified_balanced: check.balanced })?,
        Format::Csv => csv(
            &[],
            &["method", "n", "size", "balanced", "balance", "largest_component", "separator"],
            &[vec![
                result.method.clone(),
                result.n.to_string(),
                result.size().to_string(),
                ok.to_string(),
                format_sig(result.balance),
                result.component_sizes.first().copied().unwrap_or(0).to_string(),
                result.separator.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "),
            ]],
        )?,
    };
    emit(out, &text)?;
    Ok(status(ok))
}

#[derive(Serialize)]
struct DichotomyOutput {
    k: usize,
    certificate: Dichotomy,
    verified: bool,
}

fn dichotomy(input: &Input, k: usize, out: Option<&Path>, format: Format) -> Result<Status, CliError> {
    let b = instance_of(input)?;
    let boxes = b
        .representation
        .realized()
        .iter()
        .map(|s| s.as_box().cloned())
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| CliError::Usage("the dichotomy needs an all-box instance".into()))?;
    let certificate = boxes_dichotomy(&boxes, k)?;
    let verified = verify_dichotomy(&boxes, k, &certificate);
    let text = match format {
        Format::Json => json(&DichotomyOutput { k, certificate, verified })?,
        Format::Csv => {
            let (branch, members) = match &certificate {
                Dichotomy::Disjoint { axis, members } => (format!("disjoint axis {axis}"), members),
                Dichotomy::Common { members, .. } => ("common".to_string(), members),
            };
            let members = members.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ");
            csv(&[], &["k", "branch", "size", "verified", "members"], &[vec![
                k.to_string(),
                branch,
                members.split(' ').filter(|s| !s.is_empty()).count().to_string(),
                verified.to_string(),
                members,
            ]])?
        }
    };
    emit(out, &text)?;
    Ok(status(verified))
}

fn experiment(config: &Path, out: Option<&Path>) -> Result<Status, CliError> {
    let mut cfg = ExperimentConfig::from_json_str(&fs::read_to_string(config)?)?;
    if let Some(dir) = out {
        cfg.out_dir = dir.to_path_buf();
    }
    let report = run_experiment(&cfg)?;
    let files = write_report(&report, &cfg.out_dir)?;
    for line in report.summary_lines() {
        println!("{line}");
    }
    println!("violations={} failed_instances={}", report.violations(), report.failures());
    for f in files {
        println!("wrote {}", f.display());
    }
    Ok(status(report.violations() == 0))
}

fn lemmas(cfg: LemmaSuiteConfig, out: Option<&Path>, format: Format) -> Result<Status, CliError> {
    let report = lemma_suite(&cfg)?;
    let text = match format {
        Format::Json => json(&report)?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = report
                .counts
                .iter()
                .map(|c| {
                    vec![
                        c.suite.clone(),
                        c.d.map_or(String::new(), |d| d.to_string()),
                        c.checked.to_string(),
                        c.premise_held.to_string(),
                        c.passed().to_string(),
                        c.violations.to_string(),
                        c.errors.to_string(),
                    ]
                })
                .collect();
            csv(&[format!("seed={}", cfg.seed)], &["suite", "d", "checked", "premise_held", "passed", "violations", "errors"], &rows)?
        }
    };
    if out.is_some() {
        emit(out, &text)?;
        for c in &report.counts {
            println!("{}", c.line());
        }
    } else {
        emit(None, &text)?;
    }
    Ok(status(report.all_pass()))
}
