//! Config-driven experiment runners producing CSV tables and a JSON sidecar.
//!
//! Every contract row compares `value <= bound`, except rows whose name ends
//! in `_lower`, which compare `value >= bound`. Hard contracts report `pass`
//! or `fail`; soft ones `ok` or `warn`; raw data rows are `info`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::convalg::{
    convolve, gelfand_sequences, growth_profile, inequality_suite, radial_majorant_check, u_series,
};
use crate::element::FinSuppFun;
use crate::error::{Error, Result};
use crate::funcalc::{
    apply_series, apply_spectral, approx_identity_convergence, plateau, pointwise_product, AGammaFunction,
    WEIGHTED_TAIL_REL,
};
use crate::group::{ChainOptions, GroupChain, Haar, MeasureModel, ShellModel};
use crate::norms::{holder_sides, l1_norm, luxemburg_norm, orlicz_norm, Norm};
use crate::weights::{
    check_axioms, grs_sequence, level_extrema, lq_membership, nonsubadditive_example, sharpen, sharpen_p,
    sharpen_p_lq_bound, sharpen_p_shells, uniform_grs_weight, variation, witness_ratio, witness_ratio_closed,
    wfq_weight, PositiveSequence, Weight,
};
use crate::young::YoungFunction;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentId {
    Thm1,
    Weights,
    Calculus,
    Suite,
}

impl ExperimentId {
    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentId::Thm1 => "thm1",
            ExperimentId::Weights => "weights",
            ExperimentId::Calculus => "calculus",
            ExperimentId::Suite => "suite",
        }
    }

    fn randomized(self) -> bool {
        !matches!(self, ExperimentId::Weights)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HaarSpec {
    #[default]
    Normalized,
    Counting,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupSpec {
    CyclicSum {
        orders: Vec<u64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        depth: Option<usize>,
        #[serde(default)]
        haar: HaarSpec,
        #[serde(default)]
        lazy: bool,
    },
    LeptinHulanicki {
        depth: usize,
        #[serde(default)]
        haar: HaarSpec,
        #[serde(default)]
        lazy: bool,
    },
    Shell {
        indices: Vec<u64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tail_bound: Option<u64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum YoungSpec {
    PPower { p: f64 },
    ExpMinus,
    Cosh,
    Xlog,
}

impl YoungSpec {
    pub fn build(&self) -> Result<YoungFunction> {
        let phi = match *self {
            YoungSpec::PPower { p } => YoungFunction::p_power(p)?,
            YoungSpec::ExpMinus => YoungFunction::ExpMinus,
            YoungSpec::Cosh => YoungFunction::Cosh,
            YoungSpec::Xlog => YoungFunction::Xlog,
        };
        phi.validate()?;
        Ok(phi)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WeightSpec {
    Radial {
        values: Vec<f64>,
    },
    Sharpen {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        base: Option<Box<WeightSpec>>,
    },
    SharpenP {
        p: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        base: Option<Box<WeightSpec>>,
    },
    Wfq {
        f: PositiveSequence,
        q: f64,
    },
    ExampleNonsubadd,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlateauSpec {
    pub p: f64,
    pub q: f64,
    pub eps: f64,
}

fn default_gamma() -> f64 {
    0.5
}

fn default_tol() -> f64 {
    1e-6
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalculusSpec {
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    pub plateau: PlateauSpec,
    #[serde(default = "default_tol")]
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ElementSpec {
    /// Seeded random self-adjoint elements supported in `K_level`.
    Random { count: usize, level: usize },
    /// `scale (δ_a + δ_{a^{-1}}) / 2` for the `generator`-th chain generator.
    GeneratorPair {
        generator: usize,
        #[serde(default = "one")]
        scale: f64,
    },
    Unit,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Relative gap allowed between the final Gelfand value and the radius.
    #[serde(default = "default_tol_rel")]
    pub tol_rel: f64,
    /// Slack on proven inequalities.
    #[serde(default = "default_margin")]
    pub margin: f64,
}

fn default_tol_rel() -> f64 {
    0.05
}

fn default_margin() -> f64 {
    1e-9
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { tol_rel: default_tol_rel(), margin: default_margin() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub csv: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub json: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiments: Vec<ExperimentId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub group: GroupSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub young: Option<YoungSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<WeightSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub calculus: Option<CalculusSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elements: Option<ElementSpec>,
    /// Sample count for randomized suites (default 1000).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    /// Number of squarings in Gelfand sequences (default 12).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kmax: Option<u32>,
    /// Support level of sampled elements (default 2, capped at the top level).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<usize>,
    /// Length of GRS sequences (default 1000).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grs_n: Option<usize>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputSpec>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Canonical JSON of everything except output paths.
    pub fn canonical(&self) -> String {
        let mut c = self.clone();
        c.output = None;
        let mut ids = c.experiments.clone();
        ids.sort();
        ids.dedup();
        c.experiments = ids;
        serde_json::to_string(&c).expect("config serializes")
    }

    /// Hex SHA-256 prefix of the crate version and the canonical config.
    pub fn param_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(VERSION.as_bytes());
        h.update([0]);
        h.update(self.canonical().as_bytes());
        h.finalize().iter().take(8).fold(String::new(), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
    }

    fn ordered_experiments(&self) -> Vec<ExperimentId> {
        let mut ids = self.experiments.clone();
        ids.sort();
        ids.dedup();
        ids
    }

    fn young(&self) -> Result<YoungFunction> {
        self.young.as_ref().map_or_else(|| YoungFunction::p_power(2.0), |y| y.build())
    }

    fn seed(&self, id: ExperimentId) -> Result<u64> {
        self.seed.ok_or_else(|| Error::Config(format!("experiment {} needs a seed", id.as_str())))
    }

    fn chain(&self) -> Result<GroupChain> {
        match model(&self.group)? {
            Model::Chain(c) => Ok(c),
            Model::Shell(_) => Err(Error::Config("this experiment needs a group chain, not a shell model".into())),
        }
    }

    fn samples(&self) -> usize {
        self.samples.unwrap_or(1000)
    }

    /// Builds every object the listed experiments need, without running them.
    pub fn validate(&self) -> Result<()> {
        if self.experiments.is_empty() {
            return Err(Error::Config("experiments must list at least one of thm1, weights, calculus, suite".into()));
        }
        let m = model(&self.group)?;
        self.young()?;
        if !(self.tolerances.tol_rel > 0.0 && self.tolerances.margin >= 0.0) {
            return Err(Error::Config("tolerances must be positive".into()));
        }
        if matches!(self.kmax, Some(k) if k > 40) {
            return Err(Error::Config("kmax must be at most 40".into()));
        }
        if let Some(w) = &self.weight {
            build_weight(w, &m)?;
        }
        for id in self.ordered_experiments() {
            if id.randomized() {
                self.seed(id)?;
            }
            match id {
                ExperimentId::Weights => {}
                ExperimentId::Thm1 | ExperimentId::Suite => {
                    self.chain()?;
                }
                ExperimentId::Calculus => {
                    self.chain()?;
                    let c = self
                        .calculus
                        .ok_or_else(|| Error::Config("calculus experiment needs a calculus spec".into()))?;
                    if !(c.tol > 0.0) {
                        return Err(Error::Config("calculus tol must be positive".into()));
                    }
                    crate::convalg::check_gamma(c.gamma)?;
                    let pp = c.plateau;
                    if !(pp.p > 0.0 && pp.eps > 0.0 && pp.p + pp.eps < pp.q - pp.eps && pp.q < 2.0 * PI) {
                        return Err(Error::Validation(format!(
                            "plateau needs 0 < p, p+eps < q-eps, q < 2π; got {pp:?}"
                        )));
                    }
                }
            }
        }
        if let Some(ElementSpec::Random { count, level }) = &self.elements {
            if *count == 0 || *level == 0 {
                return Err(Error::Config("random elements need count >= 1 and level >= 1".into()));
            }
        }
        Ok(())
    }
}

pub enum Model {
    Chain(GroupChain),
    Shell(ShellModel),
}

impl Model {
    fn levels(&self) -> usize {
        match self {
            Model::Chain(c) => c.levels(),
            Model::Shell(s) => MeasureModel::levels(s),
        }
    }

    fn shell_measures(&self) -> Vec<f64> {
        match self {
            Model::Chain(c) => c.shell_measures_f64(),
            Model::Shell(s) => s.shell_measures_f64(),
        }
    }

    /// Bounded-index shell data, taken from the chain when there is one.
    fn shell_model(&self) -> Result<ShellModel> {
        match self {
            Model::Shell(s) => Ok(s.clone()),
            Model::Chain(c) => {
                let idx: Vec<u64> = c.indices().iter().map(|&i| i as u64).collect();
                let bound = idx.iter().copied().max().unwrap_or(2).max(2);
                ShellModel::new(idx, Some(bound))
            }
        }
    }
}

pub fn model(spec: &GroupSpec) -> Result<Model> {
    let haar = |h: &HaarSpec| match h {
        HaarSpec::Normalized => Haar::Normalized,
        HaarSpec::Counting => Haar::Counting,
    };
    Ok(match spec {
        GroupSpec::CyclicSum { orders, depth, haar: h, lazy } => {
            let depth = depth.unwrap_or(orders.len());
            let opts = ChainOptions { haar: haar(h), ..ChainOptions::default() };
            Model::Chain(if *lazy {
                GroupChain::cyclic_sum_lazy_with(orders, depth, &opts)?
            } else {
                GroupChain::cyclic_sum_with(orders, depth, &opts)?
            })
        }
        GroupSpec::LeptinHulanicki { depth, haar: h, lazy } => {
            let c = if *lazy { GroupChain::leptin_hulanicki_lazy(*depth)? } else { GroupChain::leptin_hulanicki(*depth)? };
            Model::Chain(c.with_haar(haar(h)))
        }
        GroupSpec::Shell { indices, tail_bound } => Model::Shell(ShellModel::new(indices.clone(), *tail_bound)?),
    })
}

pub fn build_weight(spec: &WeightSpec, model: &Model) -> Result<Weight> {
    let base = |b: &Option<Box<WeightSpec>>| -> Result<Weight> {
        match b {
            Some(b) => build_weight(b, model),
            None => Ok(Weight::trivial(model.levels())),
        }
    };
    let w = match (spec, model) {
        (WeightSpec::Radial { values }, _) => {
            if values.len() < model.levels() {
                return Err(Error::Validation(format!(
                    "radial weight has {} values, the model has {} levels",
                    values.len(),
                    model.levels()
                )));
            }
            Weight::radial(values.clone())?
        }
        (WeightSpec::Sharpen { base: b }, Model::Chain(c)) => sharpen(&base(b)?, c)?,
        (WeightSpec::SharpenP { p, base: b }, Model::Chain(c)) => sharpen_p(&base(b)?, c, *p)?,
        (WeightSpec::Sharpen { base: b }, Model::Shell(_)) => {
            let w = base(b)?;
            let v = w.shell_values().ok_or_else(|| Error::Validation("shell models carry radial weights only".into()))?;
            Weight::radial(running_max(v))?
        }
        (WeightSpec::SharpenP { p, base: b }, Model::Shell(_)) => {
            let w = base(b)?;
            let v = w.shell_values().ok_or_else(|| Error::Validation("shell models carry radial weights only".into()))?;
            Weight::radial(sharpen_p_shells(&running_max(v)[..model.levels()], &model.shell_measures(), *p)?)?
        }
        (WeightSpec::Wfq { f, q }, m) => wfq_weight(&m.shell_model()?, f, *q)?,
        (WeightSpec::ExampleNonsubadd, Model::Chain(c)) => nonsubadditive_example(c)?,
        (WeightSpec::ExampleNonsubadd, Model::Shell(_)) => {
            return Err(Error::Validation("example_nonsubadd needs the cyclic sum chain".into()))
        }
    };
    Ok(w)
}

fn running_max(v: &[f64]) -> Vec<f64> {
    v.iter()
        .scan(f64::MIN, |m, &x| {
            *m = m.max(x);
            Some(*m)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Ok,
    Warn,
    Info,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Ok => "ok",
            Verdict::Warn => "warn",
            Verdict::Info => "info",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub experiment: ExperimentId,
    pub name: String,
    pub value: f64,
    pub bound: Option<f64>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Strength {
    Hard,
    Soft,
}

struct Rows {
    id: ExperimentId,
    rows: Vec<ReportRow>,
}

impl Rows {
    fn new(id: ExperimentId) -> Self {
        Self { id, rows: Vec::new() }
    }

    fn info(&mut self, name: impl Into<String>, value: f64) {
        self.rows.push(ReportRow { experiment: self.id, name: name.into(), value, bound: None, verdict: Verdict::Info });
    }

    fn push(&mut self, s: Strength, name: String, value: f64, bound: f64, holds: bool) {
        let verdict = match (s, holds) {
            (Strength::Hard, true) => Verdict::Pass,
            (Strength::Hard, false) => Verdict::Fail,
            (Strength::Soft, true) => Verdict::Ok,
            (Strength::Soft, false) => Verdict::Warn,
        };
        self.rows.push(ReportRow { experiment: self.id, name, value, bound: Some(bound), verdict });
    }

    fn le(&mut self, s: Strength, name: impl Into<String>, value: f64, bound: f64) {
        self.push(s, name.into(), value, bound, value <= bound);
    }

    fn ge(&mut self, s: Strength, name: impl Into<String>, value: f64, bound: f64) {
        self.push(s, format!("{}_lower", name.into()), value, bound, value >= bound);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub param_hash: String,
    pub config: ExperimentConfig,
    pub rows: Vec<ReportRow>,
}

#[derive(Serialize)]
struct Sidecar<'a> {
    version: &'static str,
    param_hash: &'a str,
    config: &'a ExperimentConfig,
    hard_failures: usize,
    soft_warnings: usize,
    verdicts: Vec<SidecarVerdict<'a>>,
}

#[derive(Serialize)]
struct SidecarVerdict<'a> {
    experiment: &'static str,
    name: &'a str,
    value: f64,
    bound: f64,
    verdict: &'static str,
}

impl Report {
    pub fn hard_failures(&self) -> usize {
        self.rows.iter().filter(|r| r.verdict == Verdict::Fail).count()
    }

    pub fn soft_warnings(&self) -> usize {
        self.rows.iter().filter(|r| r.verdict == Verdict::Warn).count()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("experiment,param_hash,name,value,bound,verdict\n");
        for r in &self.rows {
            let bound = r.bound.map(|b| b.to_string()).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                r.experiment.as_str(),
                self.param_hash,
                r.name,
                r.value,
                bound,
                r.verdict.as_str()
            );
        }
        out
    }

    /// Config plus every contract verdict; finite values only, so the JSON is valid.
    pub fn sidecar_json(&self) -> String {
        let verdicts = self
            .rows
            .iter()
            .filter(|r| r.verdict != Verdict::Info)
            .map(|r| SidecarVerdict {
                experiment: r.experiment.as_str(),
                name: &r.name,
                value: finite(r.value),
                bound: finite(r.bound.unwrap_or(f64::NAN)),
                verdict: r.verdict.as_str(),
            })
            .collect();
        let s = Sidecar {
            version: VERSION,
            param_hash: &self.param_hash,
            config: &self.config,
            hard_failures: self.hard_failures(),
            soft_warnings: self.soft_warnings(),
            verdicts,
        };
        serde_json::to_string_pretty(&s).expect("sidecar serializes") + "\n"
    }
}

fn finite(x: f64) -> f64 {
    if x.is_finite() {
        x
    } else if x.is_nan() {
        0.0
    } else {
        x.signum() * f64::MAX
    }
}

/// Runs every listed experiment in the fixed order thm1, weights, calculus, suite.
pub fn run(config: &ExperimentConfig) -> Result<Report> {
    config.validate()?;
    let mut rows = Vec::new();
    for id in config.ordered_experiments() {
        rows.extend(match id {
            ExperimentId::Thm1 => run_thm1(config)?,
            ExperimentId::Weights => run_weights(config)?,
            ExperimentId::Calculus => run_calculus(config)?,
            ExperimentId::Suite => run_suite(config)?,
        });
    }
    Ok(Report { param_hash: config.param_hash(), config: config.clone(), rows })
}

fn support_level(config: &ExperimentConfig, chain: &GroupChain) -> usize {
    config.level.unwrap_or(2).clamp(1, chain.levels())
}

fn elements(config: &ExperimentConfig, chain: &GroupChain, rng: &mut ChaCha8Rng) -> Result<Vec<FinSuppFun>> {
    let default = ElementSpec::Random { count: 5, level: support_level(config, chain) };
    match config.elements.as_ref().unwrap_or(&default) {
        ElementSpec::Random { count, level } => {
            let level = (*level).min(chain.levels());
            let support = (!chain.is_enumerable(level)).then_some(16);
            (0..*count).map(|_| FinSuppFun::random_self_adjoint(chain, level, support, rng)).collect()
        }
        ElementSpec::GeneratorPair { generator, scale } => {
            let gens = chain.generators();
            let a = *gens.get(*generator).ok_or_else(|| {
                Error::Config(format!("generator {generator} out of range, the chain has {}", gens.len()))
            })?;
            let c = Complex64::new(0.5 * scale, 0.0);
            Ok(vec![FinSuppFun::from_terms(chain, [(a, c), (chain.inv(a), c)])?])
        }
        ElementSpec::Unit => Ok(vec![FinSuppFun::unit(chain)]),
    }
}

/// Gelfand sequences in L¹ and in the Orlicz norm weighted by `ω♯_1` of the
/// configured base weight, against the exact spectral radius.
pub fn run_thm1(config: &ExperimentConfig) -> Result<Vec<ReportRow>> {
    let mut out = Rows::new(ExperimentId::Thm1);
    let chain = config.chain()?;
    let chain = if chain.levels() >= 2 { chain.standardize()? } else { chain };
    let base = match &config.weight {
        Some(w) => build_weight(w, &Model::Chain(chain.clone()))?,
        None => Weight::trivial(chain.levels()),
    };
    let sharp1 = sharpen_p(&base, &chain, 1.0)?;
    let phi = config.young()?;
    let norms = [Norm::L1, Norm::Orlicz { phi, weight: Some(sharp1) }];
    let kmax = config.kmax.unwrap_or(12);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed(ExperimentId::Thm1)?);
    for (i, f) in elements(config, &chain, &mut rng)?.iter().enumerate() {
        let reports = gelfand_sequences(f, &norms, kmax)?;
        let radius = reports[0].exact_radius;
        if let Some(r) = radius {
            out.info(format!("f{i}.radius"), r);
        }
        for (tag, rep) in ["l1", "orlicz_w"].iter().zip(&reports) {
            for (k, &v) in rep.values.iter().enumerate() {
                out.info(format!("f{i}.{tag}.k{k}"), v);
            }
            if let Some(r) = radius {
                let last = *rep.values.last().unwrap();
                let err = if r == 0.0 { last } else { (last - r).abs() / r };
                out.le(Strength::Soft, format!("f{i}.{tag}.final_rel_error"), err, config.tolerances.tol_rel);
            }
        }
        if let Some(r) = radius {
            // ν(f) <= ‖f^n‖₁^{1/n} for the L¹ norm
            let min = reports[0].values.iter().copied().fold(f64::INFINITY, f64::min);
            out.ge(Strength::Hard, format!("f{i}.l1.min_value"), min, r - config.tolerances.margin * r.max(1.0));
        }
    }
    Ok(out.rows)
}

/// Construction values, axioms, GRS sequences, `L^q` sums and witness ratios.
pub fn run_weights(config: &ExperimentConfig) -> Result<Vec<ReportRow>> {
    let mut out = Rows::new(ExperimentId::Weights);
    let m = model(&config.group)?;
    let spec = config.weight.clone().unwrap_or(WeightSpec::Radial { values: vec![1.0; m.levels()] });
    let omega = build_weight(&spec, &m)?;
    let margin = config.tolerances.margin;
    let levels = m.levels();
    if let Some(v) = omega.shell_values() {
        for (i, &a) in v.iter().take(levels).enumerate() {
            out.info(format!("omega.shell{}", i + 1), a);
        }
    }
    match &m {
        Model::Chain(chain) => weights_on_chain(&mut out, config, chain, &omega, margin)?,
        Model::Shell(shell) => {
            let v = omega.shell_values().expect("shell weights are radial");
            let sp = sharpen_p_shells(&running_max(v)[..levels], &m.shell_measures(), 1.0)?;
            for (i, &a) in sp.iter().enumerate() {
                out.info(format!("sharpen_p1.shell{}", i + 1), a);
            }
            let rep = lq_membership(&Weight::radial(sp.clone())?, shell, 1.0, levels, None)?;
            let bound = sharpen_p_lq_bound(running_max(v)[0], 1.0, levels);
            out.le(Strength::Hard, "sharpen_p1.lq_partial", *rep.partial_sums.last().unwrap(), bound);
        }
    }
    if let WeightSpec::Wfq { f, q } = &spec {
        let shell = m.shell_model()?;
        let rep = lq_membership(&omega, &shell, *q, levels, None)?;
        for (l, &s) in rep.partial_sums.iter().enumerate() {
            // partial_sums[l] covers L = l + 1 levels
            out.le(Strength::Hard, format!("wfq.lq_partial.L{}", l + 1), s, 1.0 + f.partial_sum(l + 1));
        }
    }
    Ok(out.rows)
}

fn weights_on_chain(
    out: &mut Rows,
    config: &ExperimentConfig,
    chain: &GroupChain,
    omega: &Weight,
    margin: f64,
) -> Result<()> {
    let sharp = sharpen(omega, chain)?;
    let sharp_p = sharpen_p(omega, chain, 1.0)?;
    for (i, (&a, &b)) in sharp.shell_values().unwrap().iter().zip(sharp_p.shell_values().unwrap()).enumerate() {
        out.info(format!("sharpen.shell{}", i + 1), a);
        out.info(format!("sharpen_p1.shell{}", i + 1), b);
    }
    // ω <= ω♯ <= ω♯_1 and ω♯ <= (Var+1) ω on every enumerable level
    let top = (1..=chain.levels()).rev().find(|&l| chain.is_enumerable(l));
    let var = variation(omega, chain, top.unwrap_or(0))?;
    out.info("variation", var);
    if let Some(top) = top {
        let (mut chain_gap, mut bv_gap) = (f64::MIN, f64::MIN);
        for &x in chain.elements(top)? {
            let (w, s, sp) = (omega.eval(chain, x)?, sharp.eval(chain, x)?, sharp_p.eval(chain, x)?);
            chain_gap = chain_gap.max((w - s).max(s - sp));
            bv_gap = bv_gap.max(s - (var + 1.0) * w);
        }
        out.le(Strength::Hard, "sandwich.omega_sharp_sharp_p", chain_gap, 0.0);
        out.le(Strength::Hard, "sandwich.bounded_variation", bv_gap, 0.0);

        let ax = check_axioms(omega, chain, top)?;
        out.info("axioms.pairs", ax.pairs as f64);
        out.ge(Strength::Hard, "axioms.min_value", ax.min_value, 1.0);
        out.le(Strength::Hard, "axioms.submult_ratio", ax.submult_ratio, 1.0 + margin);
        out.le(Strength::Hard, "axioms.asymmetry", ax.asymmetry, 0.0);
        out.info("axioms.subadditive_constant", ax.subadditive_constant);
        let mf = if omega.flags().subadditive_max_form { Strength::Hard } else { Strength::Soft };
        out.le(mf, "axioms.max_form_constant", ax.max_form_constant, 1.0);
        for (i, &v) in ax.level_max.iter().enumerate() {
            out.info(format!("axioms.level_max{}", i + 1), v);
        }
    }

    let n = config.grs_n.unwrap_or(1000);
    for (g, &x) in chain.generators().iter().enumerate() {
        let rep = grs_sequence(omega, chain, x, n)?;
        let violations = rep.values.iter().zip(&rep.bounds).filter(|(&v, &b)| v < 1.0 || v > b).count();
        out.info(format!("grs.x{g}.order"), rep.order as f64);
        out.info(format!("grs.x{g}.cyclic_sup"), rep.cyclic_sup);
        out.info(format!("grs.x{g}.final"), *rep.values.last().unwrap_or(&1.0));
        out.le(Strength::Hard, format!("grs.x{g}.violations"), violations as f64, 0.0);
    }
    let int_w = uniform_grs_weight(omega, chain)?;
    for (k, v) in int_w.root_sequence().iter().enumerate() {
        out.info(format!("omega_prime.root{}", k + 1), *v);
    }
    let range = int_w.values.len() as i64;
    out.le(Strength::Soft, "omega_prime.submult_ratio", int_w.submultiplicativity(range), 1.0 + margin);

    let levels = chain.levels();
    let rep = lq_membership(&sharp_p, chain, 1.0, levels, None)?;
    let a1 = level_extrema(omega, chain, 1)?.max;
    let bound = sharpen_p_lq_bound(a1, 1.0, levels);
    for (l, &s) in rep.partial_sums.iter().enumerate() {
        out.le(Strength::Hard, format!("sharpen_p1.lq_partial.L{}", l + 1), s, bound + margin);
    }

    if omega.label() == "example_nonsubadd" {
        let n_max = (chain.levels() / 4).min(5) as u32;
        let mut prev = f64::MIN;
        for k in 1..=n_max {
            let r = witness_ratio(omega, chain, k)?;
            let closed = witness_ratio_closed(k);
            out.le(Strength::Hard, format!("witness.r{k}.abs_error"), (r - closed).abs(), 1e-12 * closed.max(1.0));
            out.ge(Strength::Hard, format!("witness.r{k}.increase"), r - prev, f64::MIN_POSITIVE);
            out.info(format!("witness.r{k}"), r);
            prev = r;
        }
    }
    Ok(())
}

fn companion(pp: &PlateauSpec) -> PlateauSpec {
    let eps = (pp.p / 4.0).min((2.0 * PI - pp.q) / 4.0);
    PlateauSpec { p: pp.p / 2.0, q: pp.q + (2.0 * PI - pp.q) / 2.0, eps }
}

fn build_plateau(pp: &PlateauSpec, gamma: f64) -> Result<AGammaFunction> {
    plateau(pp.p, pp.q, pp.eps, gamma)
}

/// Plateau profile, dual-path deviations, homomorphism residuals, the
/// approximate-identity table and the growth profile.
pub fn run_calculus(config: &ExperimentConfig) -> Result<Vec<ReportRow>> {
    let mut out = Rows::new(ExperimentId::Calculus);
    let spec = config.calculus.expect("validated");
    let chain = config.chain()?;
    let level = support_level(config, &chain);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed(ExperimentId::Calculus)?);
    let phi = build_plateau(&spec.plateau, spec.gamma)?;
    let psi = build_plateau(&companion(&spec.plateau), spec.gamma)?;

    let check = phi.plateau_check().expect("plateau");
    out.info("plateau.stored_range", phi.range() as f64);
    out.info("plateau.tail_l1", phi.tail_l1());
    out.le(Strength::Hard, "plateau.inside_dev", check.inside_dev, 1e-6);
    out.le(Strength::Hard, "plateau.outside_max", check.outside_max, 1e-6);
    out.ge(Strength::Hard, "plateau.min", check.min, -1e-6);
    out.le(Strength::Hard, "plateau.max", check.max, 1.0 + 1e-6);
    out.le(Strength::Hard, "plateau.real_defect", phi.real_defect(), 1e-12);
    out.le(Strength::Hard, "plateau.at_zero_abs", phi.eval(0.0).abs(), 1e-8);
    let wn = phi.weighted_norm()?;
    out.info("plateau.weighted_norm", wn.partial);
    out.info("plateau.weighted_summed_to", wn.summed_to as f64);
    out.le(Strength::Hard, "plateau.weighted_tail_rel", (wn.upper - wn.partial) / wn.partial, WEIGHTED_TAIL_REL);
    for (x, v) in phi.profile(256) {
        out.info(format!("profile.x{x:.6}"), v);
    }

    let pairs = config.samples.unwrap_or(10);
    let norm = Norm::L1;
    let prod = pointwise_product(&phi, &psi)?;
    let (mut dual, mut partition, mut hom) = (0.0f64, 0.0f64, 0.0f64);
    let mut fs = Vec::with_capacity(pairs);
    for _ in 0..pairs {
        let support = (!chain.is_enumerable(level)).then_some(16);
        let f = FinSuppFun::random_self_adjoint(&chain, level, support, &mut rng)?;
        let a = apply_series(&phi, &f, spec.tol, &norm)?;
        let b = apply_spectral(&phi, &f)?;
        dual = dual.max(l1_norm(&a.value.sub(&b)?, None)?);
        let pf = apply_spectral(&psi, &f)?;
        partition = partition.max(l1_norm(&convolve(&pf, &b)?.sub(&b)?, None)?);
        let lhs = apply_series(&prod, &f, spec.tol, &norm)?.value;
        let rhs = convolve(&a.value, &apply_series(&psi, &f, spec.tol, &norm)?.value)?;
        hom = hom.max(l1_norm(&lhs.sub(&rhs)?, None)?);
        fs.push(f);
    }
    out.info("pairs", pairs as f64);
    out.le(Strength::Hard, "dual_path.max_deviation", dual, spec.tol + 1e-8);
    out.le(Strength::Hard, "partition.max_residual", partition, 1e-8);
    out.le(Strength::Hard, "homomorphism.max_residual", hom, 1e-6);

    let at_one = phi.eval(1.0);
    out.info("phi_at_one", at_one);
    if (at_one - 1.0).abs() <= 1e-6 {
        let g = FinSuppFun::indicator(&chain, level)?
            .scale(Complex64::new(0.5, 0.0))
            .add(&FinSuppFun::indicator(&chain, 1)?)?;
        let table = approx_identity_convergence(&chain, &phi, &norm, &g)?;
        for row in &table.rows {
            out.info(format!("approx_identity.K{}", row.level), row.error);
        }
        out.le(Strength::Hard, "approx_identity.at_unit", table.at_unit(), 1e-8);
        let worst = table.rows.windows(2).map(|w| w[1].error - w[0].error).fold(0.0, f64::max);
        out.le(Strength::Hard, "approx_identity.max_increase", worst, 1e-9);
    } else {
        out.le(Strength::Soft, "approx_identity.phi_at_one_dev", (at_one - 1.0).abs(), 1e-6);
    }

    if let Some(f) = fs.first() {
        let gp = growth_profile(f, spec.gamma, 64, &norm)?;
        for &(n, v) in &gp.rows {
            out.info(format!("growth.n{n}"), v);
        }
        out.info("growth.fitted_constant", gp.fitted_constant);
        let worst = gp.rows.iter().map(|r| r.1).fold(0.0, f64::max);
        out.le(Strength::Hard, "growth.max_vs_unitary_bound", worst, gp.unitary_bound * (1.0 + 1e-12));
    }
    Ok(out.rows)
}

/// Proven inequalities over seeded samples.
pub fn run_suite(config: &ExperimentConfig) -> Result<Vec<ReportRow>> {
    let mut out = Rows::new(ExperimentId::Suite);
    let chain = config.chain()?;
    let level = support_level(config, &chain);
    let seed = config.seed(ExperimentId::Suite)?;
    let samples = config.samples();
    let margin = config.tolerances.margin;
    let phi = config.young()?;
    let base = match &config.weight {
        Some(w) => build_weight(w, &Model::Chain(chain.clone()))?,
        None => Weight::trivial(chain.levels()),
    };
    let omega = sharpen_p(&base, &chain, 1.0)?;

    let ineq = inequality_suite(&chain, level, &phi, &omega, samples, seed)?;
    out.info("samples", samples as f64);
    out.info("r2.fitted_constant", ineq.r2);
    out.le(Strength::Hard, "r3.orlicz", ineq.r3[0], 1.0 + margin);
    out.le(Strength::Hard, "r3.luxemburg", ineq.r3[1], 1.0 + margin);
    out.le(Strength::Hard, "rl.orlicz", ineq.rl[0], 1.0 + margin);
    out.le(Strength::Hard, "rl.luxemburg", ineq.rl[1], 1.0 + margin);

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let support = (!chain.is_enumerable(level)).then_some(16);
    let (mut holder, mut s_min, mut s_max, mut radial) = (0.0f64, f64::INFINITY, 0.0f64, f64::MIN);
    let holder_ready = phi.complement().is_solver_ready();
    for i in 0..samples {
        let f = FinSuppFun::random(&chain, level, support, &mut rng)?;
        let g = FinSuppFun::random(&chain, level, support, &mut rng)?;
        if holder_ready {
            let (lhs, rhs) = holder_sides(&f, &g, &phi)?;
            holder = holder.max(lhs / rhs);
        }
        let ratio = orlicz_norm(&f, &phi, Some(&omega))? / luxemburg_norm(&f, &phi, Some(&omega))?;
        s_min = s_min.min(ratio);
        s_max = s_max.max(ratio);
        let n = 1 + (i % 8) as u64;
        let (lhs, rhs, _) = radial_majorant_check(&f, &omega, n)?;
        radial = radial.max(lhs - rhs);
    }
    if holder_ready {
        out.le(Strength::Hard, "holder.max_ratio", holder, 1.0 + margin);
    }
    out.ge(Strength::Hard, "sandwich.min", s_min, 1.0 - margin);
    out.le(Strength::Hard, "sandwich.max", s_max, 2.0 + margin);
    out.le(Strength::Hard, "radial_majorant.max_excess", radial, margin);

    // u(nf) = n u(f) + Σ_{k<n} u(kf) * u(f)
    let tol = 1e-12;
    let mut resid = [0.0f64; 3];
    let u_count = (samples / 20).max(1);
    for _ in 0..u_count {
        let f = FinSuppFun::random_self_adjoint(&chain, level, support, &mut rng)?;
        let u = |k: f64| u_series(&f, Complex64::new(k, 0.0), tol, &Norm::L1).map(|s| s.value);
        let u1 = u(1.0)?;
        for (slot, n) in (2..=4).enumerate() {
            let mut rhs = u1.scale(Complex64::new(n as f64, 0.0));
            for k in 1..n {
                rhs = rhs.add(&convolve(&u(k as f64)?, &u1)?)?;
            }
            resid[slot] = resid[slot].max(l1_norm(&u(n as f64)?.sub(&rhs)?, None)?);
        }
    }
    for (slot, r) in resid.iter().enumerate() {
        let n = slot + 2;
        out.le(Strength::Hard, format!("u_recursion.n{n}"), *r, n as f64 * tol + margin);
    }
    Ok(out.rows)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CatalogEntry {
    pub section: &'static str,
    pub kind: &'static str,
    pub params: &'static str,
}

pub fn catalog() -> Vec<CatalogEntry> {
    let e = |section, kind, params| CatalogEntry { section, kind, params };
    vec![
        e("group", "cyclic_sum", "orders: [n_1, ...], depth?, haar?: normalized|counting, lazy?"),
        e("group", "leptin_hulanicki", "depth (1-2 enumerable, up to 4 lazy), haar?, lazy?"),
        e("group", "shell", "indices: [..], tail_bound? (weights experiment only)"),
        e("young", "p_power", "p >= 1"),
        e("young", "exp_minus", ""),
        e("young", "cosh", ""),
        e("young", "xlog", ""),
        e("weight", "radial", "values: non-decreasing, >= 1, one per level"),
        e("weight", "sharpen", "base? (default trivial)"),
        e("weight", "sharpen_p", "p >= 1, base?"),
        e("weight", "wfq", "f: {kind: geometric|inverse_power|constant, ...}, q >= 1"),
        e("weight", "example_nonsubadd", "cyclic_sum with orders 1, 2, 3, ..."),
        e("elements", "random", "count, level (needs seed)"),
        e("elements", "generator_pair", "generator, scale?"),
        e("elements", "unit", ""),
        e("calculus", "plateau", "gamma?, plateau: {p, q, eps}, tol?"),
        e("experiment", "thm1", "Gelfand sequences vs exact spectral radius"),
        e("experiment", "weights", "constructions, axioms, GRS, L^q sums, witness ratios"),
        e("experiment", "calculus", "plateau, dual paths, homomorphism, approximate identity, growth"),
        e("experiment", "suite", "Hölder, module and translation bounds, sandwich, radial majorant, u-recursion"),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(json: &str) -> ExperimentConfig {
        ExperimentConfig::from_json(json).unwrap()
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let bad = r#"{"experiments":["weights"],"group":{"kind":"cyclic_sum","orders":[2,2]},"colour":1}"#;
        assert!(matches!(ExperimentConfig::from_json(bad), Err(Error::Config(_))));
        let nested = r#"{"experiments":["weights"],"group":{"kind":"cyclic_sum","orders":[2,2],"size":3}}"#;
        assert!(ExperimentConfig::from_json(nested).is_err());
        let young = r#"{"experiments":["weights"],"group":{"kind":"cyclic_sum","orders":[2]},"young":{"kind":"p_power","p":2,"q":1}}"#;
        assert!(ExperimentConfig::from_json(young).is_err());
    }

    #[test]
    fn seed_is_mandatory_for_randomized_suites() {
        let c = cfg(r#"{"experiments":["suite"],"group":{"kind":"cyclic_sum","orders":[2,2,2]}}"#);
        assert!(matches!(c.validate(), Err(Error::Config(_))));
        let w = cfg(r#"{"experiments":["weights"],"group":{"kind":"cyclic_sum","orders":[2,2,2]}}"#);
        assert!(w.validate().is_ok());
    }

    #[test]
    fn hash_ignores_output_and_order() {
        let a = cfg(r#"{"experiments":["weights","thm1"],"seed":1,"group":{"kind":"cyclic_sum","orders":[2,2]}}"#);
        let b = cfg(
            r#"{"experiments":["thm1","weights"],"seed":1,"group":{"kind":"cyclic_sum","orders":[2,2]},"output":{"csv":"x.csv"}}"#,
        );
        assert_eq!(a.param_hash(), b.param_hash());
        let c = cfg(r#"{"experiments":["thm1"],"seed":2,"group":{"kind":"cyclic_sum","orders":[2,2]}}"#);
        assert_ne!(a.param_hash(), c.param_hash());
        assert_eq!(a.param_hash().len(), 16);
    }

    #[test]
    fn thm1_generator_pair() {
        let c = cfg(r#"{"experiments":["thm1"],"seed":0,
            "group":{"kind":"cyclic_sum","orders":[2,2,2,2],"haar":"counting"},
            "elements":{"kind":"generator_pair","generator":1}}"#);
        let rows = run_thm1(&c).unwrap();
        let get = |rows: &[ReportRow], n: &str| rows.iter().find(|r| r.name == n).unwrap().value;
        assert!((get(&rows, "f0.radius") - 1.0).abs() < 1e-12);
        assert!(rows.iter().all(|r| r.verdict != Verdict::Fail && r.verdict != Verdict::Warn));

        let mut scaled = c.clone();
        scaled.elements = Some(ElementSpec::GeneratorPair { generator: 1, scale: 3.0 });
        let rows3 = run_thm1(&scaled).unwrap();
        assert!((get(&rows3, "f0.radius") - 3.0).abs() < 1e-12);
        let (a, b) = (get(&rows, "f0.orlicz_w.k12"), get(&rows3, "f0.orlicz_w.k12"));
        assert!((b / a - 3.0).abs() < 1e-9);

        let mut unit = c.clone();
        unit.elements = Some(ElementSpec::Unit);
        let rows = run_thm1(&unit).unwrap();
        assert!((get(&rows, "f0.l1.k12") - 1.0).abs() < 1e-3);
    }

    #[test]
    fn weights_golden_rows() {
        let c = cfg(r#"{"experiments":["weights"],"group":{"kind":"cyclic_sum","orders":[2,2,2]}}"#);
        let rows = run_weights(&c).unwrap();
        let get = |n: &str| rows.iter().find(|r| r.name == n).unwrap().value;
        assert_eq!([get("sharpen_p1.shell1"), get("sharpen_p1.shell2"), get("sharpen_p1.shell3")], [2.0, 5.0, 20.0]);
        assert!((get("sharpen_p1.lq_partial.L3") - 0.8).abs() < 1e-15);
        assert!(rows.iter().all(|r| r.verdict != Verdict::Fail));

        let w = cfg(r#"{"experiments":["weights"],"group":{"kind":"shell","indices":[2,2,2,2,2],"tail_bound":2},
            "weight":{"kind":"wfq","f":{"kind":"geometric","ratio":0.5},"q":1}}"#);
        let rows = run_weights(&w).unwrap();
        assert!(rows.iter().any(|r| r.name == "wfq.lq_partial.L6" && r.verdict == Verdict::Pass));
        assert!(rows.iter().all(|r| r.verdict != Verdict::Fail));
    }

    #[test]
    fn csv_is_deterministic() {
        let c = cfg(r#"{"experiments":["suite"],"seed":5,"samples":40,"group":{"kind":"cyclic_sum","orders":[2,2,2]}}"#);
        let a = run(&c).unwrap();
        let b = run(&c).unwrap();
        assert_eq!(a.to_csv(), b.to_csv());
        assert_eq!(a.hard_failures(), 0);
        assert!(a.to_csv().starts_with("experiment,param_hash,name,value,bound,verdict\n"));
        let side: serde_json::Value = serde_json::from_str(&a.sidecar_json()).unwrap();
        assert_eq!(side["param_hash"], a.param_hash);
    }

    #[test]
    fn shell_model_rejected_for_algebra_experiments() {
        let c = cfg(r#"{"experiments":["thm1"],"seed":1,"group":{"kind":"shell","indices":[2,2]}}"#);
        assert!(c.validate().is_err());
    }
}
