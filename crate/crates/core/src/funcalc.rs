//! Smooth periodic functions with `e^{2|n|^γ}`-summable Fourier coefficients
//! and the functional calculus `φ{f} = Σ φ̂(n) u(inf)` for self-adjoint
//! elements of the group algebra.

use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::convalg::{check_gamma, convolve, regular_rep, unitary_bound, RegRepMatrix, UnitaryOrbit};
use crate::element::FinSuppFun;
use crate::error::{invalid, Error, Result};
use crate::group::GroupChain;
use crate::norms::Norm;
use crate::numeric::{kahan_sum, zeta, zeta_tail, KahanSum};

/// Grid size used to synthesize function values from coefficients.
pub const GRID: usize = 1 << 14;
/// Certified bound on the unweighted coefficient tail past the stored range.
pub const STORED_TAIL: f64 = 1e-14;
/// Relative size of the certified tail in the weighted coefficient norm.
pub const WEIGHTED_TAIL_REL: f64 = 1e-8;

/// Number of series terms used for `log sinc` below the direct-product cutoff.
const LOG_SINC_TERMS: usize = 10;
/// Terms of the (all-negative) `log sinc` series kept in envelope bounds.
const ENVELOPE_TERMS: usize = 30;
/// Below `MID_ARG`, `sinc` is decreasing and exceeds every later value.
const MID_ARG: f64 = 2.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlateauParams {
    pub p: f64,
    pub q: f64,
    pub eps: f64,
    /// Mollifier widths are `a_k = c k^{-s}`.
    pub c: f64,
    pub s: f64,
}

/// Tables reused across many coefficient evaluations.
#[derive(Default)]
struct Workspace {
    /// `k^{-s}` at index `k`.
    pw: Vec<f64>,
    /// `ln k!` at index `k`.
    ln_fact: Vec<f64>,
    tail_key: Option<u64>,
    /// `(ζ(2j)/(j π^{2j}), ln Σ_{k>K} k^{-2js})`.
    tails: Vec<(f64, f64)>,
}

impl Workspace {
    fn ensure(&mut self, s: f64, k: u64) {
        let k = k as usize;
        if self.pw.len() <= k {
            let from = self.pw.len().max(1);
            if self.pw.is_empty() {
                self.pw.push(0.0);
                self.ln_fact.push(0.0);
            }
            for i in from..=k.max(1) {
                self.pw.push((i as f64).powf(-s));
                let prev = self.ln_fact[i - 1];
                self.ln_fact.push(prev + (i as f64).ln());
            }
        }
    }

    fn tails(&mut self, s: f64, k: u64) -> &[(f64, f64)] {
        if self.tail_key != Some(k) {
            self.tails = (1..=LOG_SINC_TERMS)
                .map(|j| {
                    let j2 = 2.0 * j as f64;
                    (zeta(j2) / (j as f64 * PI.powf(j2)), zeta_tail(j2 * s, k).ln())
                })
                .collect();
            self.tail_key = Some(k);
        }
        &self.tails
    }
}

impl PlateauParams {
    /// `#{k >= 1 : y k^{-s} >= t}`.
    fn count_at_least(&self, y: f64, t: f64) -> u64 {
        if y < t {
            return 0;
        }
        let mut k = (y / t).powf(1.0 / self.s).floor() as u64;
        while y * ((k + 1) as f64).powf(-self.s) >= t {
            k += 1;
        }
        while k > 0 && y * (k as f64).powf(-self.s) < t {
            k -= 1;
        }
        k
    }

    /// `log |μ̂(n)|` and its sign, for `μ̂(n) = Π_k sinc(n a_k)`, `n > 0`.
    fn log_mollifier(&self, n: f64, ws: &mut Workspace) -> (f64, f64) {
        let nc = n * self.c;
        // factors with n a_k >= 1/2 directly, the rest through the log-sinc series
        let k_direct = (2.0 * nc).powf(1.0 / self.s).floor() as u64;
        ws.ensure(self.s, k_direct);
        let mut log = KahanSum::new();
        let mut prod = 1.0f64;
        let mut negative = false;
        for &w in &ws.pw[1..=k_direct as usize] {
            let v = (nc * w).sin();
            if v == 0.0 {
                return (f64::NEG_INFINITY, 0.0);
            }
            negative ^= v < 0.0;
            prod *= v.abs();
            if prod < 1e-200 {
                log.add(prod.ln());
                prod = 1.0;
            }
        }
        log.add(prod.ln());
        // Σ ln x_k = K ln(nc) - s ln K!
        log.add(-(k_direct as f64) * nc.ln() + self.s * ws.ln_fact[k_direct as usize]);
        // ln(sin x / x) = -Σ_j ζ(2j) x^{2j} / (j π^{2j})
        let lnc = nc.ln();
        for (j, &(coef, lt)) in ws.tails(self.s, k_direct).iter().enumerate() {
            let j = (j + 1) as f64;
            log.add(-coef * (2.0 * j * lnc + lt).exp());
        }
        (log.value(), if negative { -1.0 } else { 1.0 })
    }

    /// Upper bound on `ln sup_{n >= a} |μ̂(n)|`, from factor bounds that hold
    /// for every `x >= y_k = a c k^{-s}`: `1/y_k` when `y_k >= π`,
    /// `sinc(MID_ARG)` on `[MID_ARG, π)`, and `sinc(y_k)` below, the last
    /// through a truncation of the negative log-sinc series and an integral
    /// lower bound on `Σ k^{-2js}`.
    fn log_mollifier_bound(&self, a: f64, ws: &mut Workspace) -> f64 {
        let ac = a * self.c;
        let s = self.s;
        let k_pi = self.count_at_least(ac, PI);
        let k_mid = self.count_at_least(ac, MID_ARG);
        ws.ensure(s, k_pi);
        let mut log = -(k_pi as f64) * ac.ln() + s * ws.ln_fact[k_pi as usize];
        log += (k_mid - k_pi) as f64 * (MID_ARG.sin() / MID_ARG).ln();
        let lac = ac.ln();
        let lk = ((k_mid + 1) as f64).ln();
        for j in 1..=ENVELOPE_TERMS {
            let j2 = 2.0 * j as f64;
            let sigma = j2 * s;
            let coef = zeta(j2) / (j as f64 * PI.powf(j2));
            log -= coef * (j2 * lac + (1.0 - sigma) * lk - (sigma - 1.0).ln()).exp();
        }
        log
    }

    fn indicator_coefficient(&self, n: i64) -> Complex64 {
        let (alpha, beta) = (self.p + self.eps / 2.0, self.q - self.eps / 2.0);
        if n == 0 {
            return Complex64::new((beta - alpha) / (2.0 * PI), 0.0);
        }
        let nf = n as f64;
        let num = Complex64::from_polar(1.0, -nf * alpha) - Complex64::from_polar(1.0, -nf * beta);
        num / Complex64::new(0.0, 2.0 * PI * nf)
    }

    fn coefficient(&self, n: i64, ws: &mut Workspace) -> Complex64 {
        if n == 0 {
            return self.indicator_coefficient(0);
        }
        let (log, sign) = self.log_mollifier(n.unsigned_abs() as f64, ws);
        self.indicator_coefficient(n) * (sign * log.exp())
    }

    /// `log |φ̂(n)|` for `n > 0`, without underflow.
    fn log_abs_coefficient(&self, n: u64, ws: &mut Workspace) -> f64 {
        let (log, _) = self.log_mollifier(n as f64, ws);
        log + self.indicator_coefficient(n as i64).norm().ln()
    }

    /// Certified bound on `Σ_{|n|>N} |φ̂(n)|`: `|ĥ(n)| <= 1/(πn)` and
    /// `|μ̂(n)| <= Π_{k<=K} 1/(n a_k)` give `(2/π) P_K N^{-K}/K`, minimized over `K`.
    fn log_tail_bound(&self, n: f64) -> f64 {
        let mut best = f64::INFINITY;
        let mut log_p = 0.0;
        for k in 1..=20_000u64 {
            log_p += -(self.c.ln() - self.s * (k as f64).ln());
            let v = (2.0 / PI).ln() + log_p - k as f64 * n.ln() - (k as f64).ln();
            best = best.min(v);
            if v > best + 50.0 {
                break;
            }
        }
        best
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Source {
    Plateau(PlateauParams),
    Product,
    Zero,
}

/// `Σ |φ̂(n)| e^{2|n|^γ}`: summed part plus a certified upper bound on the whole.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedNorm {
    pub partial: f64,
    /// Certified upper bound on the full weighted norm.
    pub upper: f64,
    /// Last index summed explicitly.
    pub summed_to: u64,
}

/// A real 2π-periodic function in `A_γ`, stored as `φ̂(n)` for `|n| <= N`
/// with a certified bound on `Σ_{|n|>N} |φ̂(n)|`.
#[derive(Debug, Clone)]
pub struct AGammaFunction {
    gamma: f64,
    coeffs: Vec<Complex64>,
    tail_l1: f64,
    source: Source,
    weighted: Arc<OnceLock<Result<WeightedNorm>>>,
    factors: Option<Arc<(AGammaFunction, AGammaFunction)>>,
}

impl AGammaFunction {
    pub fn zero(gamma: f64) -> Result<Self> {
        check_gamma(gamma)?;
        Ok(Self {
            gamma,
            coeffs: vec![Complex64::default()],
            tail_l1: 0.0,
            source: Source::Zero,
            weighted: Arc::default(),
            factors: None,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn source(&self) -> Source {
        self.source
    }

    /// Largest stored `|n|`.
    pub fn range(&self) -> usize {
        (self.coeffs.len() - 1) / 2
    }

    /// `φ̂(n)`, zero outside the stored range.
    pub fn coefficient(&self, n: i64) -> Complex64 {
        let big_n = self.range() as i64;
        if n.abs() > big_n {
            Complex64::default()
        } else {
            self.coeffs[(n + big_n) as usize]
        }
    }

    /// Certified bound on `Σ_{|n|>N} |φ̂(n)|`.
    pub fn tail_l1(&self) -> f64 {
        self.tail_l1
    }

    /// `Σ_{|n| > n0} |φ̂(n)|` including the certified tail.
    pub fn tail_from(&self, n0: usize) -> f64 {
        let big_n = self.range();
        let stored = kahan_sum(
            (n0 + 1..=big_n).flat_map(|n| [self.coefficient(n as i64).norm(), self.coefficient(-(n as i64)).norm()]),
        );
        stored + self.tail_l1
    }

    /// Max `|φ̂(-n) - conj φ̂(n)|`.
    pub fn real_defect(&self) -> f64 {
        (0..=self.range() as i64)
            .map(|n| (self.coefficient(-n) - self.coefficient(n).conj()).norm())
            .fold(0.0, f64::max)
    }

    /// `φ(x) = Σ φ̂(n) e^{inx}` over the stored range.
    pub fn eval(&self, x: f64) -> f64 {
        let big_n = self.range() as i64;
        kahan_sum((-big_n..=big_n).map(|n| (self.coefficient(n) * Complex64::from_polar(1.0, n as f64 * x)).re))
    }

    /// Values at `x_j = 2π j / GRID` by inverse FFT.
    pub fn grid_values(&self) -> Vec<f64> {
        let mut buf = vec![Complex64::default(); GRID];
        let big_n = self.range() as i64;
        for n in -big_n..=big_n {
            buf[n.rem_euclid(GRID as i64) as usize] += self.coefficient(n);
        }
        FftPlanner::new().plan_fft_inverse(GRID).process(&mut buf);
        buf.into_iter().map(|z| z.re).collect()
    }

    /// `(x, φ(x))` at every `stride`-th grid point.
    pub fn profile(&self, stride: usize) -> Vec<(f64, f64)> {
        let stride = stride.max(1);
        self.grid_values()
            .into_iter()
            .enumerate()
            .step_by(stride)
            .map(|(j, v)| (2.0 * PI * j as f64 / GRID as f64, v))
            .collect()
    }

    /// Checks the plateau shape on the synthesis grid.
    pub fn plateau_check(&self) -> Option<PlateauCheck> {
        let Source::Plateau(pp) = self.source else { return None };
        let values = self.grid_values();
        let mut check = PlateauCheck { inside_dev: 0.0, outside_max: 0.0, min: f64::MAX, max: f64::MIN };
        for (j, &v) in values.iter().enumerate() {
            let x = 2.0 * PI * j as f64 / GRID as f64;
            if x >= pp.p + pp.eps && x <= pp.q - pp.eps {
                check.inside_dev = check.inside_dev.max((v - 1.0).abs());
            }
            if x < pp.p || x > pp.q {
                check.outside_max = check.outside_max.max(v.abs());
            }
            check.min = check.min.min(v);
            check.max = check.max.max(v);
        }
        Some(check)
    }

    /// `Σ |φ̂(n)| e^{2|n|^γ}`, computed on first use.
    pub fn weighted_norm(&self) -> Result<WeightedNorm> {
        self.weighted
            .get_or_init(|| match self.source {
                Source::Zero => Ok(WeightedNorm { partial: 0.0, upper: 0.0, summed_to: 0 }),
                Source::Plateau(pp) => plateau_weighted_norm(&pp, self.gamma),
                Source::Product => {
                    let (a, b) = &**self.factors.as_ref().expect("products keep their factors");
                    let partial = kahan_sum((-(self.range() as i64)..=self.range() as i64).map(|n| {
                        self.coefficient(n).norm() * (2.0 * (n.unsigned_abs() as f64).powf(self.gamma)).exp()
                    }));
                    // the weight is sub-multiplicative, so the factors' norms bound the product's
                    let upper = a.weighted_norm()?.upper * b.weighted_norm()?.upper;
                    Ok(WeightedNorm { partial, upper, summed_to: self.range() as u64 })
                }
            })
            .clone()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlateauCheck {
    /// `max |φ - 1|` on `[p+ε, q-ε]`.
    pub inside_dev: f64,
    /// `max |φ|` outside `[p, q]`.
    pub outside_max: f64,
    pub min: f64,
    pub max: f64,
}

impl PlateauCheck {
    pub fn holds(&self, tol: f64) -> bool {
        self.inside_dev <= tol && self.outside_max <= tol && self.min >= -tol && self.max <= 1.0 + tol
    }
}

/// A smooth `φ` with `0 <= φ <= 1`, `supp φ ∩ [0, 2π] ⊆ [p, q]` and `φ = 1`
/// on `[p+ε, q-ε]`: the indicator of `[p+ε/2, q-ε/2]` convolved with the
/// infinite convolution of normalized indicators of `[-a_k, a_k]`,
/// `a_k = c k^{-s}`, `s = 2/(1+γ)`, `Σ 2a_k = ε/2`.
pub fn plateau(p: f64, q: f64, eps: f64, gamma: f64) -> Result<AGammaFunction> {
    check_gamma(gamma)?;
    if !(p > 0.0 && eps > 0.0 && p + eps < q - eps && q < 2.0 * PI) {
        return invalid(format!("plateau needs 0 < p, p+eps < q-eps, q < 2π; got p={p}, q={q}, eps={eps}"));
    }
    let s = 2.0 / (1.0 + gamma);
    let c = eps / (4.0 * zeta(s));
    let pp = PlateauParams { p, q, eps, c, s };

    // smallest N whose certified tail is below STORED_TAIL
    let target = STORED_TAIL.ln();
    let mut hi = 16.0f64;
    while pp.log_tail_bound(hi) > target {
        hi *= 2.0;
    }
    let mut lo = hi / 2.0;
    while hi - lo > 1.0 {
        let mid = (0.5 * (lo + hi)).floor();
        if pp.log_tail_bound(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let big_n = hi as i64;
    let mut ws = Workspace::default();
    let positive: Vec<Complex64> = (0..=big_n).map(|n| pp.coefficient(n, &mut ws)).collect();
    let mut coeffs = Vec::with_capacity(2 * big_n as usize + 1);
    coeffs.extend(positive[1..].iter().rev().map(|z| z.conj()));
    coeffs.extend_from_slice(&positive);
    Ok(AGammaFunction {
        gamma,
        coeffs,
        tail_l1: pp.log_tail_bound(big_n as f64).exp(),
        source: Source::Plateau(pp),
        weighted: Arc::default(),
        factors: None,
    })
}

/// Certified bound on `Σ_{|n| >= a} |φ̂(n)| e^{2|n|^γ}`. Blocks `[a, a + a^{1-γ})`
/// keep the weight's growth within a block bounded; each block is bounded by
/// its length times `1/(π a)`, the mollifier bound at `a` and the weight at the
/// right end. Summation stops once block bounds halve from one block to the
/// next and are negligible against the sum, the rest bounded geometrically.
fn weighted_tail_bound(pp: &PlateauParams, gamma: f64, a: f64, ws: &mut Workspace) -> f64 {
    let mut acc = KahanSum::new();
    let mut start = a;
    let mut prev = f64::INFINITY;
    for _ in 0..10_000_000 {
        let len = start.powf(1.0 - gamma).floor().max(1.0);
        let end = start + len - 1.0;
        let log_block = len.ln() - (PI * start).ln() + pp.log_mollifier_bound(start, ws) + 2.0 * end.powf(gamma);
        let block = log_block.exp();
        acc.add(block);
        if log_block < prev - std::f64::consts::LN_2 && (acc.value() == 0.0 || log_block < acc.value().ln() - 40.0) {
            acc.add(block);
            break;
        }
        prev = log_block;
        start = end + 1.0;
    }
    2.0 * acc.value()
}

fn plateau_weighted_norm(pp: &PlateauParams, gamma: f64) -> Result<WeightedNorm> {
    let log_w = |n: f64| 2.0 * n.powf(gamma);
    let mut ws = Workspace::default();
    let mut bound_ws = Workspace::default();
    let mut total = KahanSum::new();
    total.add(pp.indicator_coefficient(0).norm());
    let mut n = 0u64;
    const BLOCK: u64 = 4096;
    loop {
        for _ in 0..BLOCK {
            n += 1;
            let lt = pp.log_abs_coefficient(n, &mut ws) + log_w(n as f64);
            total.add(2.0 * lt.exp());
        }
        if n as f64 * pp.c >= 1.0 {
            let tail = weighted_tail_bound(pp, gamma, (n + 1) as f64, &mut bound_ws);
            if tail <= WEIGHTED_TAIL_REL * total.value() {
                return Ok(WeightedNorm { partial: total.value(), upper: total.value() + tail, summed_to: n });
            }
        }
        if n > 20_000_000 {
            return Err(Error::Numeric("weighted coefficient norm did not certify by n = 2e7".into()));
        }
    }
}

/// Coefficient convolution over the stored ranges, with the ℓ¹ truncation
/// error of the inputs carried into the product's tail bound.
pub fn pointwise_product(phi: &AGammaFunction, psi: &AGammaFunction) -> Result<AGammaFunction> {
    if phi.gamma != psi.gamma {
        return invalid(format!("gamma mismatch: {} vs {}", phi.gamma, psi.gamma));
    }
    if phi.source == Source::Zero || psi.source == Source::Zero {
        return AGammaFunction::zero(phi.gamma);
    }
    let (na, nb) = (phi.range() as i64, psi.range() as i64);
    let big_n = na + nb;
    let mut coeffs = vec![Complex64::default(); 2 * big_n as usize + 1];
    for m in -na..=na {
        let a = phi.coefficient(m);
        for k in -nb..=nb {
            coeffs[(m + k + big_n) as usize] += a * psi.coefficient(k);
        }
    }
    let l1 = |f: &AGammaFunction| kahan_sum(f.coeffs.iter().map(|z| z.norm()));
    let tail_l1 = phi.tail_l1 * (l1(psi) + psi.tail_l1) + l1(phi) * psi.tail_l1;
    Ok(AGammaFunction {
        gamma: phi.gamma,
        coeffs,
        tail_l1,
        source: Source::Product,
        weighted: Arc::default(),
        factors: Some(Arc::new((phi.clone(), psi.clone()))),
    })
}

/// `φ{f}` with a certified bound on the omitted terms.
#[derive(Debug, Clone)]
pub struct CalculusValue {
    pub value: FinSuppFun,
    /// Largest `|n|` summed.
    pub terms: usize,
    pub tail_bound: f64,
}

fn require_self_adjoint(f: &FinSuppFun) -> Result<()> {
    if f.is_self_adjoint(1e-12) {
        Ok(())
    } else {
        invalid("functional calculus needs a self-adjoint element")
    }
}

/// `Σ_{|n|<=N} φ̂(n) u(inf)` with `u(inf) = pullback(E^n - I)`, `E = exp(i π(f))`,
/// and `N` the first cutoff with `B_K Σ_{|n|>N} |φ̂(n)| < tol`.
pub fn apply_series(phi: &AGammaFunction, f: &FinSuppFun, tol: f64, norm: &Norm) -> Result<CalculusValue> {
    require_self_adjoint(f)?;
    if !(tol > 0.0) {
        return invalid(format!("tol must be positive, got {tol}"));
    }
    let chain = f.chain();
    let level = f.level();
    let bound = unitary_bound(norm, chain, level)?;
    // suffix sums of |φ̂(n)| + |φ̂(-n)|, plus the certified tail
    let big_n = phi.range();
    let mut suffix = vec![phi.tail_l1; big_n + 2];
    for n in (1..=big_n).rev() {
        suffix[n] = suffix[n + 1] + phi.coefficient(n as i64).norm() + phi.coefficient(-(n as i64)).norm();
    }
    let cutoff = (0..=big_n)
        .find(|&n| bound * suffix[n + 1] < tol)
        .ok_or_else(|| Error::Numeric(format!("stored coefficients cannot reach tol {tol} (B_K = {bound})")))?;
    let orbit = UnitaryOrbit::new(f)?;
    let backward = orbit.forward.adjoint();
    let (mut v, mut w) = (orbit.start(), orbit.start());
    let e = orbit.start();
    let mut acc = nalgebra::DVector::from_element(e.len(), Complex64::default());
    for n in 1..=cutoff {
        v = &orbit.forward * v;
        w = &backward * w;
        let (cp, cm) = (phi.coefficient(n as i64), phi.coefficient(-(n as i64)));
        acc += (&v - &e) * cp + (&w - &e) * cm;
    }
    let m = chain.point_mass();
    let coeffs: Vec<Complex64> = acc.iter().map(|z| z / m).collect();
    Ok(CalculusValue {
        value: FinSuppFun::from_dense(chain, orbit.level, &coeffs)?,
        terms: cutoff,
        tail_bound: bound * suffix[cutoff + 1],
    })
}

/// Scalar `g(λ) = Σ φ̂(n) (e^{inλ} - 1)` over the stored range.
pub fn spectral_function(phi: &AGammaFunction, lambda: f64) -> Complex64 {
    let big_n = phi.range() as i64;
    let mut re = KahanSum::new();
    let mut im = KahanSum::new();
    for n in -big_n..=big_n {
        let z = phi.coefficient(n) * (Complex64::from_polar(1.0, n as f64 * lambda) - 1.0);
        re.add(z.re);
        im.add(z.im);
    }
    Complex64::new(re.value(), im.value())
}

/// `g(π(f))` through the Hermitian eigendecomposition of `π(f)`.
pub fn matrix_function(phi: &AGammaFunction, f: &FinSuppFun) -> Result<RegRepMatrix> {
    require_self_adjoint(f)?;
    let rep = regular_rep(f, f.level())?;
    let eig = rep.matrix.clone().symmetric_eigen();
    let values: Vec<Complex64> = eig.eigenvalues.iter().map(|&l| spectral_function(phi, l)).collect();
    let v = &eig.eigenvectors;
    let scaled = DMatrix::from_fn(v.nrows(), v.ncols(), |i, j| v[(i, j)] * values[j]);
    Ok(RegRepMatrix { level: rep.level, matrix: scaled * v.adjoint() })
}

/// `φ{f}` as `pullback(φ(π(f)))`.
pub fn apply_spectral(phi: &AGammaFunction, f: &FinSuppFun) -> Result<FinSuppFun> {
    crate::convalg::pullback(f.chain(), &matrix_function(phi, f)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApproxIdentityRow {
    /// Level `j` of `χ_{K_j}/μ(K_j)`; `0` stands for the unit `δ_e/m`.
    pub level: usize,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApproxIdentityTable {
    /// From the top level down to the unit.
    pub rows: Vec<ApproxIdentityRow>,
}

impl ApproxIdentityTable {
    pub fn at_unit(&self) -> f64 {
        self.rows.last().map(|r| r.error).unwrap_or(0.0)
    }

    /// Errors never increase along the family by more than `tol`.
    pub fn non_increasing(&self, tol: f64) -> bool {
        self.rows.windows(2).all(|w| w[1].error <= w[0].error + tol)
    }
}

/// `‖φ{f_j} * g - g‖` for `f_j = χ_{K_j}/μ(K_j)`, `j = L..1`, then `f = δ_e/m`.
pub fn approx_identity_convergence(
    chain: &GroupChain,
    phi: &AGammaFunction,
    norm: &Norm,
    g: &FinSuppFun,
) -> Result<ApproxIdentityTable> {
    let at_one = phi.eval(1.0);
    if (at_one - 1.0).abs() > 1e-6 {
        return invalid(format!("approximate identities need φ(1) = 1, got {at_one}"));
    }
    let top = g.level().max(1);
    let mut rows = Vec::new();
    for level in (1..=top).rev() {
        let fj = FinSuppFun::normalized_indicator(chain, level)?;
        let pf = apply_spectral(phi, &fj)?;
        rows.push(ApproxIdentityRow { level, error: norm.eval(&convolve(&pf, g)?.sub(g)?)? });
    }
    let pu = apply_spectral(phi, &FinSuppFun::unit(chain))?;
    rows.push(ApproxIdentityRow { level: 0, error: norm.eval(&convolve(&pu, g)?.sub(g)?)? });
    Ok(ApproxIdentityTable { rows })
}
