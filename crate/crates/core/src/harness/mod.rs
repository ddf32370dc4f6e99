//! Instance files, experiment orchestration and reports.
//!
//! An experiment runs one family over a ladder of sizes. Every instance gets
//! its own seed derived from the root seed, its index and the stage name, so
//! instances can run in parallel and still reproduce bit for bit. Each
//! instance goes through generation, the intersection graph, a coloring
//! profile under its ordering, a separator and (when small enough) a tameness
//! certificate. A failing instance is recorded and the run continues.

use std::fs;
use std::path::{Path, PathBuf};

use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coloring::{col_bound, col_profile, delta_bound, volume_ordering, ColoringProfile, Ordering};
use crate::error::{Error, Result};
use crate::generators::{
    lshape_clique, narrow_rectangles_bipartite, random_box_instance, sstar_family, star_path_boxes, wedge_family,
    AspectProfile, InstanceBundle, Provenance,
};
use crate::graph::{build_intersection_graph, check_tame, CertStatus, Graph, TamenessCertificate};
use crate::num::{format_sig, q, q_to_decimal, serde_q, Scalar, Q};
use crate::relations::compose_constants;
use crate::separators::{fit_scaling, is_balanced_separator, target_exponent, ScalingFit, SeparatorMethod, SeparatorResult};

pub mod lemmas;
mod report;


pub use lemmas::{lemma_suite, LemmaSuiteConfig, LemmaSuiteReport, SuiteCount};
pub use report::write_report;

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xCBF2_9CE4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01B3))
}

/// Seed for stage `stage` of instance `index`; independent of thread count.
pub fn derive_seed(root: u64, index: u64, stage: &str) -> u64 {
    splitmix64(splitmix64(root ^ fnv1a(stage)) ^ index)
}

fn bounded() -> AspectProfile {
    AspectProfile::Bounded
}

/// A generator and its fixed parameters. The free size parameter is `n` for
/// the random families, `t` for star-path and `m` for the rest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilySpec {
    RandomBox {
        d: usize,
        #[serde(default = "bounded")]
        profile: AspectProfile,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        max_thinness: Option<usize>,
    },
    Sstar {
        h_max: usize,
    },
    StarPath {
        r: usize,
    },
    Wedge,
    /// Thickness `1/(10m)`.
    NarrowRectangles,
    Lshape,
}

impl FamilySpec {
    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::RandomBox { .. } => "random_box",
            FamilySpec::Sstar { .. } => "sstar",
            FamilySpec::StarPath { .. } => "star_path",
            FamilySpec::Wedge => "wedge",
            FamilySpec::NarrowRectangles => "narrow_rectangles",
            FamilySpec::Lshape => "lshape",
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            FamilySpec::RandomBox { d, .. } => *d,
            FamilySpec::Wedge => 3,
            _ => 2,
        }
    }

    /// Whether `seed` changes the output.
    pub fn is_random(&self) -> bool {
        matches!(self, FamilySpec::RandomBox { .. } | FamilySpec::Sstar { .. })
    }

    pub fn generate(&self, size: usize, seed: u64) -> Result<InstanceBundle> {
        match *self {
            FamilySpec::RandomBox { d, profile, max_thinness } => random_box_instance(size, d, profile, seed, max_thinness),
            FamilySpec::Sstar { h_max } => sstar_family(h_max)?.random_instance(size, seed),
            FamilySpec::StarPath { r } => star_path_boxes(r, size),
            FamilySpec::Wedge => wedge_family(size),
            FamilySpec::NarrowRectangles => {
                if size == 0 {
                    return Err(Error::InvalidParameter("m must be at least 1".into()));
                }
                narrow_rectangles_bipartite(size, &Q::new(1.into(), (10 * size).into()))
            }
            FamilySpec::Lshape => lshape_clique(size),
        }
    }
}

fn default_method() -> SeparatorMethod {
    SeparatorMethod::BfsLayer
}

fn default_r_max() -> usize {
    8
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("report")
}

fn default_tame_cap() -> usize {
    512
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub family: FamilySpec,
    /// Values of the family's size parameter.
    pub sizes: Vec<usize>,
    #[serde(default = "default_method")]
    pub method: SeparatorMethod,
    #[serde(default = "default_r_max")]
    pub r_max: usize,
    pub seed: u64,
    /// Report files are written under this directory.
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
    /// Largest instance given a tameness certificate.
    #[serde(default = "default_tame_cap")]
    pub tame_check_max_n: usize,
    /// Lemma suite run alongside the ladder, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lemmas: Option<LemmaSuiteConfig>,
}

impl ExperimentConfig {
    pub fn new(family: FamilySpec, sizes: Vec<usize>, seed: u64) -> Self {
        ExperimentConfig {
            family,
            sizes,
            method: default_method(),
            r_max: default_r_max(),
            seed,
            out_dir: default_out_dir(),
            tame_check_max_n: default_tame_cap(),
            lemmas: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.sizes.is_empty() {
            return Err(Error::InvalidParameter("size ladder is empty".into()));
        }
        if self.sizes.contains(&0) {
            return Err(Error::InvalidParameter("sizes must be positive".into()));
        }
        if self.r_max == 0 {
            return Err(Error::InvalidParameter("r_max must be at least 1".into()));
        }
        match self.family {
            FamilySpec::RandomBox { d, max_thinness, .. } => {
                if d == 0 {
                    return Err(Error::InvalidParameter("d must be at least 1".into()));
                }
                if max_thinness == Some(0) {
                    return Err(Error::InvalidParameter("max_thinness must be at least 1".into()));
                }
            }
            FamilySpec::Sstar { h_max } if h_max == 0 => {
                return Err(Error::InvalidParameter("h_max must be at least 1".into()))
            }
            FamilySpec::StarPath { r } if r == 0 => return Err(Error::InvalidParameter("r must be at least 1".into())),
            _ => {}
        }
        if let Some(l) = &self.lemmas {
            l.validate()?;
        }
        Ok(())
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(s)?;
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Constants of the coloring bound for a `(c, ⊑_s)`-tame representation in
/// dimension `d`: `s' = max(s, k(s)^d)`, `k' = k(s')` and
/// `δ = 2 c s' (2k' + 1)^d d^d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundConstants {
    pub c: usize,
    pub d: usize,
    #[serde(with = "serde_q")]
    pub s: Q,
    #[serde(with = "serde_q")]
    pub s_prime: Q,
    #[serde(with = "serde_q")]
    pub k_prime: Q,
    #[serde(with = "serde_q")]
    pub delta: Q,
}

impl BoundConstants {
    pub fn new(c: usize, s: &Q, d: usize) -> Result<Self> {
        let cc = compose_constants(s, d)?;
        let exact = |x: Scalar| x.as_exact().cloned().ok_or_else(|| Error::Precondition("inexact constant".into()));
        let s_prime = exact(cc.s_prime)?;
        let k_prime = exact(cc.k_prime)?;
        let delta = delta_bound(&q(c as i64), &s_prime, d, &k_prime)?;
        Ok(BoundConstants { c, d, s: s.clone(), s_prime, k_prime, delta })
    }

    /// `δ r^d`.
    pub fn bound(&self, r: usize) -> Q {
        col_bound(&self.delta, self.d, r)
    }
}

/// Least-squares slope of `ln col` against `ln r`.
pub fn col_slope(profile: &ColoringProfile) -> Option<f64> {
    let pts: Vec<(f64, f64)> =
        profile.entries.iter().filter(|e| e.value > 0).map(|e| ((e.r as f64).ln(), (e.value as f64).ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

/// Comparability parameter used for the bound: the measured exact `s*`,
/// else the generator's promise.
fn bound_s(b: &InstanceBundle) -> Option<Q> {
    let s = match &b.measured.s_star {
        Some(Scalar::Exact(s)) => Some(s.clone()),
        _ => b.expected_s.clone(),
    }?;
    Some(if s < Q::one() { Q::one() } else { s })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceSummary {
    pub n: usize,
    pub edges: usize,
    pub d: usize,
    pub thinness: usize,
    pub thinness_status: CertStatus,
    pub s_star: Option<Scalar>,
    /// `volume` or `given`.
    pub ordering: String,
    pub constants: Option<BoundConstants>,
    pub profile: ColoringProfile,
    /// Radii where the coloring bound fails.
    pub bound_violations: Vec<usize>,
    pub col_slope: Option<f64>,
    pub separator: SeparatorResult,
    /// Recomputed independently of the separator routine.
    pub separator_verified: bool,
    pub tameness: Option<TamenessCertificate>,
}

impl InstanceSummary {
    pub fn violations(&self) -> usize {
        self.bound_violations.len()
            + usize::from(!self.separator.balanced || !self.separator_verified)
            + usize::from(self.tameness.as_ref().is_some_and(|t| !t.certified))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub index: usize,
    pub size: usize,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summary: Option<InstanceSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Coloring profile, bound check and tameness certificate of one instance.
pub fn analyse_instance(
    b: &InstanceBundle,
    method: SeparatorMethod,
    r_max: usize,
    tame_check_max_n: usize,
) -> Result<InstanceSummary> {
    let rep = &b.representation;
    let g = build_intersection_graph(rep)?;
    let (ord, ordering) = match &b.ordering {
        Some(o) => (o.clone(), "given"),
        None => (volume_ordering(rep)?, "volume"),
    };
    let profile = col_profile(&g, &ord, r_max)?;
    let c = b.measured.thinness.max(1);
    let constants = bound_s(b).map(|s| BoundConstants::new(c, &s, rep.dim())).transpose()?;
    let bound_violations = constants.as_ref().map_or_else(Vec::new, |k| profile.bound_violations(&k.delta, k.d));
    let separator = method.run(&g, &ord)?;
    let check = is_balanced_separator(&g, &separator.separator)?;
    let separator_verified = check.balanced == separator.balanced && check.component_sizes == separator.component_sizes;
    let tameness = match &constants {
        Some(k) if rep.len() <= tame_check_max_n => Some(check_tame(rep, c, &k.s)?),
        _ => None,
    };
    Ok(InstanceSummary {
        n: g.n(),
        edges: g.m(),
        d: rep.dim(),
        thinness: b.measured.thinness,
        thinness_status: b.measured.thinness_status,
        s_star: b.measured.s_star.clone(),
        ordering: ordering.into(),
        col_slope: col_slope(&profile),
        constants,
        profile,
        bound_violations,
        separator,
        separator_verified,
        tameness,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub instances: Vec<InstanceRecord>,
    pub scaling: Option<ScalingFit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scaling_error: Option<String>,
    pub exponent_target: f64,
    /// Largest coloring-profile slope over the instances.
    pub max_col_slope: Option<f64>,
    pub lemmas: Option<LemmaSuiteReport>,
}

impl ExperimentReport {
    /// Bound, balance, tameness and lemma violations.
    pub fn violations(&self) -> usize {
        self.instances.iter().filter_map(|i| i.summary.as_ref()).map(InstanceSummary::violations).sum::<usize>()
            + self.lemmas.as_ref().map_or(0, LemmaSuiteReport::violations)
    }

    pub fn failures(&self) -> usize {
        self.instances.iter().filter(|i| i.error.is_some()).count()
    }

    /// One line per instance plus the fit.
    pub fn summary_lines(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .instances
            .iter()
            .map(|i| match (&i.summary, &i.error) {
                (Some(s), _) => format!(
                    "size={} n={} c={} s*={} col_max={} sep={} balanced={} violations={}",
                    i.size,
                    s.n,
                    s.thinness,
                    s.s_star.as_ref().map_or("-".into(), |x| format_sig(x.to_f64())),
                    s.profile.values().iter().max().copied().unwrap_or(0),
                    s.separator.size(),
                    s.separator.balanced,
                    s.violations()
                ),
                (None, e) => format!("size={} failed: {}", i.size, e.as_deref().unwrap_or("unknown")),
            })
            .collect();
        if let Some(f) = &self.scaling {
            out.push(format!(
                "exponent_fit={} target={} all_balanced={}",
                format_sig(f.exponent_fit),
                format_sig(f.exponent_target),
                f.all_balanced
            ));
        }
        if let Some(s) = self.max_col_slope {
            out.push(format!("max_col_slope={}", format_sig(s)));
        }
        if let Some(l) = &self.lemmas {
            for c in &l.counts {
                out.push(c.line());
            }
        }
        out
    }
}

fn run_one(cfg: &ExperimentConfig, index: usize, size: usize) -> InstanceRecord {
    let seed = derive_seed(cfg.seed, index as u64, "generate");
    let outcome = cfg
        .family
        .generate(size, seed)
        .and_then(|b| analyse_instance(&b, cfg.method, cfg.r_max, cfg.tame_check_max_n));
    match outcome {
        Ok(s) => InstanceRecord { index, size, seed, summary: Some(s), error: None },
        Err(e) => {
            log::warn!("instance {index} (size {size}) failed: {e}");
            InstanceRecord { index, size, seed, summary: None, error: Some(e.to_string()) }
        }
    }
}

/// Runs every size of the ladder in parallel, then fits the separator sizes.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let instances: Vec<InstanceRecord> =
        cfg.sizes.par_iter().enumerate().map(|(i, &size)| run_one(cfg, i, size)).collect();
    let data: Vec<(usize, usize, bool)> = instances
        .iter()
        .filter_map(|i| i.summary.as_ref())
        .map(|s| (s.n, s.separator.size(), s.separator.balanced))
        .collect();
    let d = cfg.family.dim();
    let (scaling, scaling_error) = match fit_scaling(cfg.family.name(), d, &cfg.method.name(), &data) {
        Ok(f) => (Some(f), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let max_col_slope = instances
        .iter()
        .filter_map(|i| i.summary.as_ref()?.col_slope)
        .fold(None, |acc: Option<f64>, x| Some(acc.map_or(x, |a| a.max(x))));
    let lemmas = cfg.lemmas.as_ref().map(lemma_suite).transpose()?;
    Ok(ExperimentReport {
        config: cfg.clone(),
        instances,
        scaling,
        scaling_error,
        exponent_target: target_exponent(d),
        max_col_slope,
        lemmas,
    })
}

/// A graph without geometry, optionally with an ordering.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphFile {
    pub graph: Graph,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ordering: Option<Ordering>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

/// Contents of an input file.
#[derive(Clone, Debug, PartialEq)]
pub enum Input {
    Instance(Box<InstanceBundle>),
    Graph(GraphFile),
}

impl Input {
    pub fn graph(&self) -> Result<Graph> {
        match self {
            Input::Instance(b) => build_intersection_graph(&b.representation),
            Input::Graph(g) => Ok(g.graph.clone()),
        }
    }

    pub fn ordering(&self) -> Option<&Ordering> {
        match self {
            Input::Instance(b) => b.ordering.as_ref(),
            Input::Graph(g) => g.ordering.as_ref(),
        }
    }

    pub fn instance(&self) -> Option<&InstanceBundle> {
        match self {
            Input::Instance(b) => Some(b),
            Input::Graph(_) => None,
        }
    }
}

/// Reads an instance bundle, or a graph file if there is no representation.
pub fn parse_input(text: &str) -> Result<Input> {
    let v: serde_json::Value = serde_json::from_str(text)?;
    if v.get("representation").is_some() {
        Ok(Input::Instance(Box::new(serde_json::from_value(v)?)))
    } else if v.get("graph").is_some() {
        Ok(Input::Graph(serde_json::from_value(v)?))
    } else {
        Err(Error::Parse("expected an instance (\"representation\") or a graph file (\"graph\")".into()))
    }
}

pub fn load_input(path: &Path) -> Result<Input> {
    parse_input(&fs::read_to_string(path)?)
}

/// Pretty JSON with a trailing newline; identical values give identical bytes.
pub fn to_json_string<T: Serialize>(x: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(x)?;
    s.push('\n');
    Ok(s)
}

/// Decimal form of an exact value for CSV cells.
pub(crate) fn cell_q(x: &Q) -> String {
    q_to_decimal(x)
}

pub(crate) fn cell_scalar(x: &Scalar) -> String {
    format_sig(x.to_f64())
}
