//! Weights `ω: G -> [1, ∞)` on group chains: radial constructions, the
//! sharpened weights `ω♯` and `ω♯_p`, bounded-index weights `ω_{f,q}`, the
//! non-sub-additive example, and checkers for the weight axioms and the GRS
//! condition.

use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::group::{Elem, GroupChain, MeasureModel, ShellModel};
use crate::numeric::{kahan_sum, zeta, zeta_tail};

/// Pointwise weight evaluator.
pub type PointwiseFn = Arc<dyn Fn(&GroupChain, Elem) -> f64 + Send + Sync>;

/// Sample size used for sups over levels that cannot be enumerated.
pub const LAZY_SAMPLE: usize = 10_000;
/// Largest number of pairs `check_axioms` visits exhaustively.
pub const PAIR_CAP: u128 = 100_000_000;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct WeightFlags {
    /// `ω(xy) <= max(ω(x), ω(y))` holds by construction.
    pub subadditive_max_form: bool,
    /// Some level sup was estimated by sampling.
    pub heuristic: bool,
    /// Built on a chain whose indices are not non-decreasing.
    pub nonstandard_chain: bool,
}

#[derive(Clone)]
enum Repr {
    /// `a_1` on `K_1`, `a_i` on `K_i \ K_{i-1}`.
    Radial(Vec<f64>),
    Pointwise(PointwiseFn),
}

#[derive(Clone)]
pub struct Weight {
    label: String,
    repr: Repr,
    flags: WeightFlags,
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut d = f.debug_struct("Weight");
        d.field("label", &self.label);
        if let Repr::Radial(v) = &self.repr {
            d.field("shells", v);
        }
        d.field("flags", &self.flags).finish()
    }
}

impl Weight {
    /// Radial weight from shell values; values must be `>= 1` and non-decreasing.
    pub fn radial(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return invalid("radial weight needs at least one shell value");
        }
        if let Some(v) = values.iter().find(|v| !(**v >= 1.0 && v.is_finite())) {
            return invalid(format!("shell value {v} is not a finite value >= 1"));
        }
        if values.windows(2).any(|w| w[1] < w[0]) {
            return invalid("shell values must be non-decreasing");
        }
        Ok(Self {
            label: "radial".into(),
            repr: Repr::Radial(values),
            flags: WeightFlags { subadditive_max_form: true, ..Default::default() },
        })
    }

    /// `ω ≡ 1` on `levels` levels.
    pub fn trivial(levels: usize) -> Self {
        Self::radial(vec![1.0; levels.max(1)]).expect("constant 1 is a radial weight").labeled("trivial")
    }

    pub fn pointwise(label: impl Into<String>, f: PointwiseFn) -> Self {
        Self { label: label.into(), repr: Repr::Pointwise(f), flags: WeightFlags::default() }
    }

    pub fn labeled(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn flags(&self) -> &WeightFlags {
        &self.flags
    }

    pub fn shell_values(&self) -> Option<&[f64]> {
        match &self.repr {
            Repr::Radial(v) => Some(v),
            Repr::Pointwise(_) => None,
        }
    }

    pub fn is_radial(&self) -> bool {
        matches!(self.repr, Repr::Radial(_))
    }

    pub fn eval(&self, chain: &GroupChain, x: Elem) -> Result<f64> {
        match &self.repr {
            Repr::Radial(v) => {
                let level = chain.level_of(x);
                v.get(level - 1)
                    .copied()
                    .ok_or_else(|| Error::WeightRange { weight: self.label.clone(), level })
            }
            Repr::Pointwise(f) => Ok(f(chain, x)),
        }
    }
}

/// `ω_a = a_1 χ_{K_1} + Σ a_i χ_{K_i \ K_{i-1}}`; needs one value per level.
pub fn radial_weight(model: &impl MeasureModel, a: &[f64]) -> Result<Weight> {
    if a.len() < model.levels() {
        return invalid(format!("{} shell values for {} levels", a.len(), model.levels()));
    }
    Weight::radial(a.to_vec())
}

/// Max and min of `ω` over one level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelExtrema {
    pub max: f64,
    pub min: f64,
    pub sampled: bool,
}

/// Exhaustive max/min of `ω` over `K_level`; radial weights read their
/// shell values, non-enumerable levels fall back to sampling.
pub fn level_extrema(omega: &Weight, chain: &GroupChain, level: usize) -> Result<LevelExtrema> {
    if let Some(v) = omega.shell_values() {
        if v.len() < level {
            return Err(Error::WeightRange { weight: omega.label.clone(), level });
        }
        let slice = &v[..level];
        return Ok(LevelExtrema {
            max: slice.iter().copied().fold(f64::MIN, f64::max),
            min: slice.iter().copied().fold(f64::MAX, f64::min),
            sampled: false,
        });
    }
    let mut max = f64::MIN;
    let mut min = f64::MAX;
    let mut visit = |x: Elem| -> Result<()> {
        let w = omega.eval(chain, x)?;
        max = max.max(w);
        min = min.min(w);
        Ok(())
    };
    if chain.is_enumerable(level) {
        for &x in chain.elements(level)? {
            visit(x)?;
        }
        Ok(LevelExtrema { max, min, sampled: false })
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ level as u64);
        visit(chain.identity())?;
        for g in chain.generators_of(level) {
            visit(g)?;
        }
        for _ in 0..LAZY_SAMPLE {
            visit(chain.random_element(level, &mut rng))?;
        }
        Ok(LevelExtrema { max, min, sampled: true })
    }
}

/// `ω♯` with `a_i = sup_{K_i} ω`.
pub fn sharpen(omega: &Weight, chain: &GroupChain) -> Result<Weight> {
    let mut values = Vec::with_capacity(chain.levels());
    let mut sampled = false;
    for level in 1..=chain.levels() {
        let ext = level_extrema(omega, chain, level)?;
        sampled |= ext.sampled;
        values.push(ext.max);
    }
    let mut w = Weight::radial(values)?.labeled(format!("sharpen({})", omega.label));
    w.flags.heuristic = sampled || omega.flags.heuristic;
    Ok(w)
}

/// Conjugate exponent used by `ω♯_p`: `p/(p-1)` for `p > 1`, `1` at `p = 1`.
pub fn conjugate_exponent(p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return invalid(format!("p must be >= 1, got {p}"));
    }
    Ok(if p == 1.0 { 1.0 } else if p.is_infinite() { 1.0 } else { p / (p - 1.0) })
}

/// Shell values of `ω♯_p` from the level sups `a_i` and shell measures:
/// `(a_1 + 1)` on `K_1`, `(a_i + i^2) mu(K_i \ K_{i-1})^{1/q}` on later shells.
pub fn sharpen_p_shells(a: &[f64], shells: &[f64], p: f64) -> Result<Vec<f64>> {
    let q = conjugate_exponent(p)?;
    if a.len() != shells.len() {
        return invalid("one level sup per shell required");
    }
    Ok(a.iter()
        .zip(shells)
        .enumerate()
        .map(|(k, (&ai, &mu))| {
            let i = (k + 1) as f64;
            if k == 0 {
                ai + 1.0
            } else {
                (ai + i * i) * mu.powf(1.0 / q)
            }
        })
        .collect())
}

/// `ω♯_p`.
pub fn sharpen_p(omega: &Weight, chain: &GroupChain, p: f64) -> Result<Weight> {
    conjugate_exponent(p)?;
    let sharp = sharpen(omega, chain)?;
    let values = sharpen_p_shells(sharp.shell_values().unwrap(), &chain.shell_measures_f64(), p)?;
    let mut w = Weight::radial(values)?.labeled(format!("sharpen_p({}, p={p})", omega.label));
    w.flags.heuristic = sharp.flags.heuristic;
    w.flags.nonstandard_chain = !chain.is_standard();
    Ok(w)
}

/// `1/(a_1+1)^q + Σ_{i=2}^{levels} i^{-2q}`: the bound dominating the
/// `L^q` partial sums of `1/ω♯_p` over the first `levels` shells.
pub fn sharpen_p_lq_bound(a1: f64, q: f64, levels: usize) -> f64 {
    (a1 + 1.0).powf(-q) + kahan_sum((2..=levels).map(|i| (i as f64).powf(-2.0 * q)))
}

/// `sup_{i <= up_to} (max_{K_i} ω - min_{K_i} ω)`.
pub fn variation(omega: &Weight, chain: &GroupChain, up_to: usize) -> Result<f64> {
    let mut var = 0.0f64;
    for level in 1..=up_to.min(chain.levels()) {
        let e = level_extrema(omega, chain, level)?;
        var = var.max(e.max - e.min);
    }
    Ok(var)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrsReport {
    /// `ω(x^n)^{1/n}` for `n = 1..=N`.
    pub values: Vec<f64>,
    /// `C^{1/n}` for `n = 1..=N`.
    pub bounds: Vec<f64>,
    /// `C = max_{<x>} ω`.
    pub cyclic_sup: f64,
    pub order: usize,
}

impl GrsReport {
    /// Every value lies in `[1, C^{1/n}]`, exact comparison.
    pub fn contained(&self) -> bool {
        self.values.iter().zip(&self.bounds).all(|(&v, &b)| v >= 1.0 && v <= b)
    }
}

/// `(ω(x^n)^{1/n})_{n <= N}` with the certificate `ω(x^n) <= C` from the
/// finite cyclic group `<x>`.
pub fn grs_sequence(omega: &Weight, chain: &GroupChain, x: Elem, n_max: usize) -> Result<GrsReport> {
    let cyc = chain.cyclic_subgroup(x);
    let weights = cyc.iter().map(|&y| omega.eval(chain, y)).collect::<Result<Vec<_>>>()?;
    let c = weights.iter().copied().fold(f64::MIN, f64::max);
    let order = cyc.len();
    let values = (1..=n_max).map(|n| weights[n % order].powf(1.0 / n as f64)).collect();
    let bounds = (1..=n_max).map(|n| c.powf(1.0 / n as f64)).collect();
    Ok(GrsReport { values, bounds, cyclic_sup: c, order })
}

/// Radial weight on ℤ, `values[k] = ω'(±k)`, constant beyond the last entry.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegerWeight {
    pub values: Vec<f64>,
    pub heuristic: bool,
}

impl IntegerWeight {
    pub fn eval(&self, n: i64) -> f64 {
        let k = (n.unsigned_abs() as usize).min(self.values.len() - 1);
        self.values[k]
    }

    /// `ω'(n)^{1/n}` for `n = 1..` over the materialized range.
    pub fn root_sequence(&self) -> Vec<f64> {
        (1..self.values.len()).map(|n| self.values[n].powf(1.0 / n as f64)).collect()
    }

    /// Worst ratio `ω'(m+n) / (ω'(m) ω'(n))` over `|m|, |n|, |m+n| <= range`.
    pub fn submultiplicativity(&self, range: i64) -> f64 {
        let mut worst = 0.0f64;
        for m in -range..=range {
            for n in -range..=range {
                if (m + n).abs() <= range {
                    worst = worst.max(self.eval(m + n) / (self.eval(m) * self.eval(n)));
                }
            }
        }
        worst
    }
}

/// `ω'(n) = max_{K_{|n|}} ω`, with `ω'(0) = max_{K_1} ω` since chains start at level 1.
pub fn uniform_grs_weight(omega: &Weight, chain: &GroupChain) -> Result<IntegerWeight> {
    let mut values = Vec::with_capacity(chain.levels() + 1);
    let mut heuristic = false;
    for level in 1..=chain.levels() {
        let e = level_extrema(omega, chain, level)?;
        heuristic |= e.sampled;
        if level == 1 {
            values.push(e.max);
        }
        values.push(e.max);
    }
    Ok(IntegerWeight { values, heuristic })
}

/// A registered closed-form bound on the terms `t_i` past the partial sums.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TailBound {
    /// `t_i <= c r^i`.
    Geometric { c: f64, ratio: f64 },
    /// `t_i <= c i^{-s}`.
    Polynomial { c: f64, exponent: f64 },
}

impl TailBound {
    /// Bound on `Σ_{i > last} t_i`; infinite when the comparison series diverges.
    pub fn tail_after(&self, last: usize) -> f64 {
        match *self {
            TailBound::Geometric { c, ratio } if ratio < 1.0 => c * ratio.powi(last as i32 + 1) / (1.0 - ratio),
            TailBound::Polynomial { c, exponent } if exponent > 1.0 => c * zeta_tail(exponent, last as u64),
            _ => f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Convergence {
    /// Partial sums plus registered tail bound.
    Convergent { limit_bound: f64 },
    /// Terms do not decrease to 0.
    Divergent,
    /// No registered bound and no evidence either way.
    Unknown,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LqReport {
    /// `S_L` for `L = 1..=levels`.
    pub partial_sums: Vec<f64>,
    pub verdict: Convergence,
}

/// Partial sums `mu(K_1)/a_1^q + Σ_{i=2}^L mu(K_i \ K_{i-1})/a_i^q` of
/// `∫ (1/ω)^q` for a radial weight.
pub fn lq_membership(
    omega: &Weight,
    model: &impl MeasureModel,
    q: f64,
    levels: usize,
    tail: Option<TailBound>,
) -> Result<LqReport> {
    if !(q > 0.0) {
        return invalid(format!("q must be positive, got {q}"));
    }
    let a = omega
        .shell_values()
        .ok_or_else(|| Error::Validation("lq_membership needs a radial weight".into()))?;
    let levels = levels.min(model.levels());
    if a.len() < levels {
        return Err(Error::WeightRange { weight: omega.label.clone(), level: a.len() + 1 });
    }
    let shells = model.shell_measures_f64();
    let terms: Vec<f64> = (0..levels).map(|i| shells[i] / a[i].powf(q)).collect();
    let mut partial_sums = Vec::with_capacity(levels);
    let mut acc = crate::numeric::KahanSum::new();
    for &t in &terms {
        acc.add(t);
        partial_sums.push(acc.value());
    }
    let verdict = match tail {
        Some(bound) => {
            let rest = bound.tail_after(levels);
            if rest.is_finite() {
                Convergence::Convergent { limit_bound: acc.value() + rest }
            } else {
                Convergence::Unknown
            }
        }
        None if terms.len() >= 2 && terms.windows(2).all(|w| w[1] >= w[0]) => Convergence::Divergent,
        None => Convergence::Unknown,
    };
    Ok(LqReport { partial_sums, verdict })
}

/// Positive sequences `f(n)`, `n >= 1`, with known summability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PositiveSequence {
    /// `ratio^n`.
    Geometric { ratio: f64 },
    /// `n^{-exponent}`.
    InversePower { exponent: f64 },
    /// `value` for every `n`.
    Constant { value: f64 },
}

impl PositiveSequence {
    pub fn at(&self, n: usize) -> f64 {
        let n = n as f64;
        match *self {
            Self::Geometric { ratio } => ratio.powf(n),
            Self::InversePower { exponent } => n.powf(-exponent),
            Self::Constant { value } => value,
        }
    }

    pub fn is_summable(&self) -> bool {
        match *self {
            Self::Geometric { ratio } => ratio > 0.0 && ratio < 1.0,
            Self::InversePower { exponent } => exponent > 1.0,
            Self::Constant { .. } => false,
        }
    }

    /// `Σ_{n>=1} f(n)` when summable.
    pub fn total(&self) -> Option<f64> {
        match *self {
            Self::Geometric { ratio } if self.is_summable() => Some(ratio / (1.0 - ratio)),
            Self::InversePower { exponent } if self.is_summable() => Some(zeta(exponent)),
            _ => None,
        }
    }

    pub fn partial_sum(&self, last: usize) -> f64 {
        kahan_sum((1..=last).map(|n| self.at(n)))
    }
}

/// `ω_{f,q} = χ_{K_1} + Σ_n (M^n / f(n))^{1/q} χ_{K_{n+1} \ K_n}` for a
/// bounded-index model with `M = sup [K_{n+1}:K_n]`.
pub fn wfq_weight(model: &ShellModel, f: &PositiveSequence, q: f64) -> Result<Weight> {
    if !(q >= 1.0) {
        return invalid(format!("q must be >= 1, got {q}"));
    }
    let m = model
        .index_bound()
        .ok_or_else(|| Error::Validation("ω_{f,q} needs a bounded-index model".into()))?;
    if !f.is_summable() {
        return invalid(format!("{f:?} is not summable"));
    }
    let mut values = vec![1.0];
    for n in 1..model.levels() {
        let fn_ = f.at(n);
        if !(fn_ > 0.0) {
            return invalid(format!("f({n}) = {fn_} is not positive"));
        }
        values.push(((m as f64).powi(n as i32) / fn_).powf(1.0 / q));
    }
    Weight::radial(values).map(|w| w.labeled(format!("wfq(M={m}, q={q})")))
}

fn pow_max(n: u64, m: u64) -> f64 {
    (n as f64).powi(m.max(n - m) as i32)
}

/// `ω(x) = Π n_k^{max(m_k, n_k - m_k)}` over the nonzero exponents of
/// `x = Π x_{n_k}^{m_k}` in `⊕ C_n`. Needs the chain with orders `1, 2, 3, ...`.
pub fn nonsubadditive_example(chain: &GroupChain) -> Result<Weight> {
    let orders = chain
        .cyclic_orders()
        .ok_or_else(|| Error::Validation("example weight needs the cyclic sum ⊕ C_n".into()))?;
    if orders.iter().enumerate().any(|(i, &n)| n != i as u64 + 1) {
        return invalid("example weight needs factor orders 1, 2, 3, ...");
    }
    let f: PointwiseFn = Arc::new(|chain: &GroupChain, x: Elem| {
        let digits = chain.cyclic_digits(x).expect("cyclic sum chain");
        digits
            .iter()
            .enumerate()
            .filter(|(_, &m)| m != 0)
            .map(|(k, &m)| pow_max(k as u64 + 1, m))
            .product()
    });
    Ok(Weight::pointwise("example_nonsubadd", f))
}

/// `(2n)^n (4n)^{2n} / ((2n)^n + (4n)^{2n})`.
pub fn witness_ratio_closed(n: u32) -> f64 {
    let a = (2.0 * n as f64).powi(n as i32);
    let b = (4.0 * n as f64).powi(2 * n as i32);
    a * b / (a + b)
}

/// `ω(x_{2n}^n x_{4n}^{2n}) / (ω(x_{2n}^n) + ω(x_{4n}^{2n}))` evaluated through the weight.
pub fn witness_ratio(omega: &Weight, chain: &GroupChain, n: u32) -> Result<f64> {
    let n = n as usize;
    let a = chain
        .cyclic_power(2 * n, n as u64)
        .ok_or_else(|| Error::Validation(format!("chain has no factor C_{}", 2 * n)))?;
    let b = chain
        .cyclic_power(4 * n, 2 * n as u64)
        .ok_or_else(|| Error::Validation(format!("chain has no factor C_{}", 4 * n)))?;
    let num = omega.eval(chain, chain.mul(a, b))?;
    Ok(num / (omega.eval(chain, a)? + omega.eval(chain, b)?))
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomReport {
    pub level: usize,
    pub pairs: u128,
    pub exhaustive: bool,
    /// `min ω` over the visited points.
    pub min_value: f64,
    pub submultiplicative: bool,
    /// `max ω(xy) / (ω(x) ω(y))`.
    pub submult_ratio: f64,
    pub symmetric: bool,
    /// `max |ω(x^{-1}) - ω(x)|`.
    pub asymmetry: f64,
    /// Observed `C` in `ω(xy) <= C (ω(x) + ω(y))`.
    pub subadditive_constant: f64,
    /// Observed `C` in `ω(xy) <= C max(ω(x), ω(y))`.
    pub max_form_constant: f64,
    /// `max_{K_i} ω` for `i = 1..=level`, witnesses boundedness on compacts.
    pub level_max: Vec<f64>,
}

/// Checks the weight axioms over pairs of `K_level`: exhaustive when the
/// level is enumerable and has at most `PAIR_CAP` pairs, else 10^6 sampled
/// pairs from a fixed seed.
pub fn check_axioms(omega: &Weight, chain: &GroupChain, level: usize) -> Result<AxiomReport> {
    let mut report = AxiomReport {
        level,
        pairs: 0,
        exhaustive: true,
        min_value: f64::MAX,
        submultiplicative: true,
        submult_ratio: 0.0,
        symmetric: true,
        asymmetry: 0.0,
        subadditive_constant: 0.0,
        max_form_constant: 0.0,
        level_max: Vec::new(),
    };
    for l in 1..=level {
        report.level_max.push(level_extrema(omega, chain, l)?.max);
    }
    let mut visit = |x: Elem, y: Elem, wx: f64, wy: f64| -> Result<()> {
        let wxy = omega.eval(chain, chain.mul(x, y))?;
        report.pairs += 1;
        report.submult_ratio = report.submult_ratio.max(wxy / (wx * wy));
        report.subadditive_constant = report.subadditive_constant.max(wxy / (wx + wy));
        report.max_form_constant = report.max_form_constant.max(wxy / wx.max(wy));
        Ok(())
    };
    let n = chain.order(level);
    if chain.is_enumerable(level) && n * n <= PAIR_CAP {
        let els = chain.elements(level)?;
        let ws = els.iter().map(|&x| omega.eval(chain, x)).collect::<Result<Vec<_>>>()?;
        for (i, &x) in els.iter().enumerate() {
            for (j, &y) in els.iter().enumerate() {
                visit(x, y, ws[i], ws[j])?;
            }
        }
        for (&x, &w) in els.iter().zip(&ws) {
            report.min_value = report.min_value.min(w);
            report.asymmetry = report.asymmetry.max((omega.eval(chain, chain.inv(x))? - w).abs());
        }
    } else {
        report.exhaustive = false;
        let mut rng = ChaCha8Rng::seed_from_u64(0xa710_u64 ^ level as u64);
        for _ in 0..1_000_000 {
            let x = chain.random_element(level, &mut rng);
            let y = chain.random_element(level, &mut rng);
            let (wx, wy) = (omega.eval(chain, x)?, omega.eval(chain, y)?);
            report.min_value = report.min_value.min(wx.min(wy));
            report.asymmetry = report.asymmetry.max((omega.eval(chain, chain.inv(x))? - wx).abs());
            visit(x, y, wx, wy)?;
        }
    }
    report.submultiplicative = report.submult_ratio <= 1.0;
    report.symmetric = report.asymmetry == 0.0;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain222() -> GroupChain {
        GroupChain::cyclic_sum(&[2, 2, 2], 3).unwrap()
    }

    fn example_chain(depth: usize) -> GroupChain {
        let orders: Vec<u64> = (1..=depth as u64).collect();
        GroupChain::cyclic_sum_lazy(&orders, depth).unwrap()
    }

    #[test]
    fn radial_examples() {
        let c = chain222();
        let w = radial_weight(&c, &[1.0, 1.0, 1.0]).unwrap();
        for &x in c.elements(3).unwrap() {
            assert_eq!(w.eval(&c, x).unwrap(), 1.0);
        }
        let w = radial_weight(&c, &[1.0, 2.0, 4.0]).unwrap();
        let x = c.generators()[1];
        assert_eq!(c.level_of(x), 2);
        assert_eq!(w.eval(&c, x).unwrap(), 2.0);
        assert!(radial_weight(&c, &[1.0, 3.0, 2.0]).is_err());
        assert!(radial_weight(&c, &[0.5, 3.0, 4.0]).is_err());
        assert!(radial_weight(&c, &[1.0, 3.0]).is_err());
    }

    #[test]
    fn radial_max_form_exhaustive() {
        let c = chain222();
        let w = radial_weight(&c, &[1.0, 2.0, 4.0]).unwrap();
        let els = c.elements(3).unwrap();
        let mut pairs = 0;
        for &x in els {
            for &y in els {
                let (a, b, ab) = (w.eval(&c, x).unwrap(), w.eval(&c, y).unwrap(), w.eval(&c, c.mul(x, y)).unwrap());
                assert!(ab <= a.max(b));
                pairs += 1;
            }
        }
        assert_eq!(pairs, 64);
    }

    #[test]
    fn sharpen_examples() {
        let c = chain222();
        let s = sharpen(&Weight::trivial(3), &c).unwrap();
        assert_eq!(s.shell_values().unwrap(), &[1.0, 1.0, 1.0]);

        let ec = example_chain(6);
        let w = nonsubadditive_example(&ec).unwrap();
        let s = sharpen(&w, &ec).unwrap();
        assert_eq!(s.shell_values().unwrap()[1], 2.0);
        assert!(s.flags().subadditive_max_form);
        for &x in ec.elements(6).unwrap() {
            assert!(w.eval(&ec, x).unwrap() <= s.eval(&ec, x).unwrap());
        }
        // idempotent on non-decreasing radial weights
        let r = Weight::radial(vec![1.0, 3.0, 3.5]).unwrap();
        assert_eq!(sharpen(&r, &c).unwrap().shell_values(), r.shell_values());
    }

    #[test]
    fn sharpen_p_examples() {
        let c = chain222();
        let w = sharpen_p(&Weight::trivial(3), &c, 1.0).unwrap();
        assert_eq!(w.shell_values().unwrap(), &[2.0, 5.0, 20.0]);
        let lq = lq_membership(&w, &c, 1.0, 3, None).unwrap();
        assert!((lq.partial_sums[2] - 0.8).abs() < 1e-15);
        let pi2 = std::f64::consts::PI.powi(2);
        assert!(0.8 < 0.5 + pi2 / 6.0 - 1.0);
        assert!(lq.partial_sums[2] <= sharpen_p_lq_bound(1.0, 1.0, 3));
        assert!(sharpen_p(&Weight::trivial(3), &c, 0.5).is_err());

        let ec = example_chain(6);
        let ex = nonsubadditive_example(&ec).unwrap();
        let sharp = sharpen(&ex, &ec).unwrap();
        let sharp_p = sharpen_p(&ex, &ec, 2.0).unwrap();
        for &x in ec.elements(6).unwrap() {
            let (a, b, d) = (ex.eval(&ec, x).unwrap(), sharp.eval(&ec, x).unwrap(), sharp_p.eval(&ec, x).unwrap());
            assert!(a <= b && b <= d);
        }
    }

    #[test]
    fn sharpen_p_flags_nonstandard_chains() {
        let c = GroupChain::cyclic_sum(&[2, 4, 2, 3], 4).unwrap();
        assert!(sharpen_p(&Weight::trivial(4), &c, 1.0).unwrap().flags().nonstandard_chain);
        let s = c.standardize().unwrap();
        assert!(!sharpen_p(&Weight::trivial(s.levels()), &s, 1.0).unwrap().flags().nonstandard_chain);
    }

    #[test]
    fn variation_examples() {
        let c = chain222();
        assert_eq!(variation(&Weight::trivial(3), &c, 3).unwrap(), 0.0);
        let w = Weight::radial(vec![1.0, 2.0, 4.0]).unwrap();
        assert_eq!(variation(&w, &c, 3).unwrap(), 3.0);
        // bounded-variation sandwich
        let s = sharpen(&w, &c).unwrap();
        for &x in c.elements(3).unwrap() {
            let (a, b) = (w.eval(&c, x).unwrap(), s.eval(&c, x).unwrap());
            assert!(a <= b && b <= 4.0 * a);
        }
    }

    #[test]
    fn grs_examples() {
        let c = chain222();
        let triv = grs_sequence(&Weight::trivial(3), &c, c.generators()[0], 50).unwrap();
        assert!(triv.values.iter().all(|&v| v == 1.0));

        let w = sharpen_p(&Weight::trivial(3), &c, 1.0).unwrap();
        let x = c.generators()[2];
        let r = grs_sequence(&w, &c, x, 100).unwrap();
        assert_eq!(r.order, 2);
        assert_eq!(r.cyclic_sup, 20.0);
        assert!(r.values[99] <= 20f64.powf(0.01));
        assert!(r.contained());

        let ec = example_chain(6);
        let ex = nonsubadditive_example(&ec).unwrap();
        let x4 = ec.cyclic_power(4, 1).unwrap();
        assert_eq!(ex.eval(&ec, x4).unwrap(), 64.0);
        assert_eq!(ex.eval(&ec, ec.pow(x4, 3)).unwrap(), 64.0);
        let r = grs_sequence(&ex, &ec, x4, 1000).unwrap();
        assert_eq!(r.cyclic_sup, 64.0);
        assert!(r.contained());
        assert!(*r.values.last().unwrap() < 1.005);
    }

    #[test]
    fn uniform_grs_examples() {
        let c = chain222();
        let w = uniform_grs_weight(&Weight::trivial(3), &c).unwrap();
        assert!(w.values.iter().all(|&v| v == 1.0));
        let r = Weight::radial(vec![1.0, 2.0, 4.0]).unwrap();
        let w = uniform_grs_weight(&r, &c).unwrap();
        assert_eq!((w.eval(1), w.eval(2), w.eval(-3), w.eval(0)), (1.0, 2.0, 4.0, 1.0));
        // ω'(2) = 2 > ω'(1)^2: not sub-multiplicative for this weight
        assert!(w.submultiplicativity(3) > 1.0);
        let r = Weight::radial(vec![2.0, 4.0, 8.0]).unwrap();
        assert!(uniform_grs_weight(&r, &c).unwrap().submultiplicativity(3) <= 1.0);
    }

    #[test]
    fn lq_examples() {
        let c = GroupChain::cyclic_sum(&[2; 12], 12).unwrap();
        let lq = lq_membership(&Weight::trivial(12), &c, 1.0, 12, None).unwrap();
        assert_eq!(lq.verdict, Convergence::Divergent);
        assert_eq!(*lq.partial_sums.last().unwrap(), 2048.0);

        let model = ShellModel::constant(2, 30).unwrap();
        let a: Vec<f64> = (1..=30).map(|i| 2f64.powi(i)).collect();
        let w = radial_weight(&model, &a).unwrap();
        // terms 2^{i-2}/4^i <= 2^{-i-2} for i >= 2
        let tail = TailBound::Geometric { c: 0.25, ratio: 0.5 };
        let lq = lq_membership(&w, &model, 2.0, 30, Some(tail)).unwrap();
        let oracle = {
            // exact rational sum: 1/4 + Σ_{i>=2} 2^{-i-2} = 3/8
            0.25 + (2..200).map(|i| 2f64.powi(-i - 2)).sum::<f64>()
        };
        assert!((oracle - 0.375).abs() < 1e-15);
        assert!((lq.partial_sums[29] - 0.375).abs() < 1e-9);
        match lq.verdict {
            Convergence::Convergent { limit_bound } => assert!(limit_bound >= 0.375 && limit_bound < 0.375 + 1e-9),
            v => panic!("{v:?}"),
        }
        assert!(lq.partial_sums.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn wfq_examples() {
        let model = ShellModel::constant(2, 20).unwrap();
        let f = PositiveSequence::Geometric { ratio: 0.5 };
        let w = wfq_weight(&model, &f, 1.0).unwrap();
        let v = w.shell_values().unwrap();
        for n in 1..20 {
            assert_eq!(v[n], 4f64.powi(n as i32));
        }
        let lq = lq_membership(&w, &model, 1.0, 20, None).unwrap();
        // partial_sums[l] covers L = l + 1 levels
        for (l, s) in lq.partial_sums.iter().enumerate() {
            assert!(*s < 1.0 + f.partial_sum(l + 1));
        }
        assert!(*lq.partial_sums.last().unwrap() < 2.0);

        let model3 = ShellModel::constant(3, 8).unwrap();
        let f2 = PositiveSequence::InversePower { exponent: 2.0 };
        let w = wfq_weight(&model3, &f2, 2.0).unwrap();
        for n in 1..8 {
            let expected = (3f64.powi(n as i32) * (n * n) as f64).sqrt();
            assert!((w.shell_values().unwrap()[n] - expected).abs() < 1e-12 * expected);
        }

        let bad = PositiveSequence::Constant { value: 1.0 };
        assert!(wfq_weight(&model, &bad, 1.0).is_err());
        let unbounded = ShellModel::new(vec![2, 3, 4], None).unwrap();
        assert!(wfq_weight(&unbounded, &f, 1.0).is_err());
    }

    #[test]
    fn nonsubadditive_examples() {
        let ec = example_chain(6);
        let w = nonsubadditive_example(&ec).unwrap();
        assert_eq!(w.eval(&ec, ec.cyclic_power(4, 2).unwrap()).unwrap(), 16.0);
        assert_eq!(w.eval(&ec, ec.identity()).unwrap(), 1.0);
        assert!((witness_ratio_closed(1) - 32.0 / 18.0).abs() < 1e-15);
        assert!((witness_ratio(&w, &ec, 1).unwrap() - 32.0 / 18.0).abs() < 1e-15);
        let r: Vec<f64> = (1..=5).map(witness_ratio_closed).collect();
        assert!(r.windows(2).all(|w| w[1] > w[0]));
        assert!(nonsubadditive_example(&chain222()).is_err());
        assert!(witness_ratio(&w, &ec, 2).is_err());
    }

    #[test]
    fn axiom_examples() {
        let c = chain222();
        let r = check_axioms(&Weight::trivial(3), &c, 3).unwrap();
        assert!(r.submultiplicative && r.symmetric && r.exhaustive);
        assert_eq!(r.subadditive_constant, 0.5);
        assert_eq!(r.pairs, 64);

        let w = Weight::radial(vec![1.0, 2.0, 4.0]).unwrap();
        let r = check_axioms(&w, &c, 3).unwrap();
        assert!(r.subadditive_constant <= 1.0);
        assert!(r.max_form_constant <= 1.0);

        let ec = example_chain(4);
        let ex = nonsubadditive_example(&ec).unwrap();
        let r = check_axioms(&ex, &ec, 4).unwrap();
        assert!(r.subadditive_constant >= 32.0 / 18.0);
        assert!(r.submultiplicative && r.symmetric);
        assert_eq!(r.min_value, 1.0);
    }

    #[test]
    fn check_axioms_samples_lazy_levels() {
        let c = GroupChain::leptin_hulanicki_lazy(3).unwrap();
        let w = Weight::radial(vec![1.0, 2.0, 3.0]).unwrap();
        let r = check_axioms(&w, &c, 3).unwrap();
        assert!(!r.exhaustive);
        assert!(r.submultiplicative && r.symmetric);
    }
}
