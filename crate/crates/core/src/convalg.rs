//! The convolution algebra over a group chain: products, involution, the
//! regular representation, exact spectra, Gelfand sequences, the series
//! `u(f) = Σ f^{*k}/k!` and the norm inequalities of the weighted algebras.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::element::FinSuppFun;
use crate::error::{invalid, Error, Result};
use crate::group::{Elem, GroupChain};
use crate::norms::{l1_norm, Norm};
use crate::numeric::kahan_sum;
use crate::weights::{level_extrema, uniform_grs_weight, Weight};
use crate::young::YoungFunction;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Dense coefficients over the enumeration of one level.
fn dense_convolve(chain: &GroupChain, level: usize, a: &[Complex64], b: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = a.len();
    let m = chain.point_mass();
    let mut out = vec![ZERO; n];
    let table = chain.mul_table(level)?;
    for (i, &ai) in a.iter().enumerate() {
        if ai == ZERO {
            continue;
        }
        let ai = ai * m;
        match table {
            Some(t) => {
                let row = &t[i * n..(i + 1) * n];
                for (j, &bj) in b.iter().enumerate() {
                    out[row[j] as usize] += ai * bj;
                }
            }
            None => {
                for (j, &bj) in b.iter().enumerate() {
                    if bj != ZERO {
                        out[chain.mul_pos(level, i, j)?] += ai * bj;
                    }
                }
            }
        }
    }
    Ok(out)
}

fn check_same_chain(f: &FinSuppFun, g: &FinSuppFun) -> Result<()> {
    if f.chain() == g.chain() {
        Ok(())
    } else {
        Err(Error::ChainMismatch)
    }
}

/// `(f * g)(x) = m Σ_y f(y) g(y^{-1} x)`.
pub fn convolve(f: &FinSuppFun, g: &FinSuppFun) -> Result<FinSuppFun> {
    check_same_chain(f, g)?;
    let chain = f.chain();
    let level = f.level().max(g.level());
    if chain.is_enumerable(level) {
        let out = dense_convolve(chain, level, &f.to_dense(level)?, &g.to_dense(level)?)?;
        return FinSuppFun::from_dense(chain, level, &out);
    }
    let m = chain.point_mass();
    let mut terms = Vec::with_capacity(f.support_len() * g.support_len());
    for (y, a) in f.terms() {
        for (z, b) in g.terms() {
            terms.push((chain.mul(y, z), a * b * m));
        }
    }
    FinSuppFun::from_terms(chain, terms)
}

/// `f*(x) = conj(f(x^{-1}))`.
pub fn involution(f: &FinSuppFun) -> FinSuppFun {
    f.adjoint()
}

/// `f^{*n}` rescaled to unit L¹ norm, with `log ‖f^{*n}‖₁` carried separately.
pub fn power_scaled(f: &FinSuppFun, n: u64) -> Result<(FinSuppFun, f64)> {
    if n == 0 {
        return invalid("power_scaled needs n >= 1");
    }
    let chain = f.chain();
    let level = f.level();
    if f.is_zero() {
        return Ok((f.clone(), f64::NEG_INFINITY));
    }
    let normalize = |v: Vec<Complex64>, log: f64| -> (Vec<Complex64>, f64) {
        let s = chain.point_mass() * kahan_sum(v.iter().map(|c| c.norm()));
        (v.into_iter().map(|c| c / s).collect(), log + s.ln())
    };
    let (mut base, mut base_log) = normalize(f.to_dense(level)?, 0.0);
    let mut acc: Option<(Vec<Complex64>, f64)> = None;
    let mut k = n;
    loop {
        if k & 1 == 1 {
            acc = Some(match acc {
                None => (base.clone(), base_log),
                Some((a, l)) => normalize(dense_convolve(chain, level, &a, &base)?, l + base_log),
            });
        }
        k >>= 1;
        if k == 0 {
            break;
        }
        let (sq, l) = normalize(dense_convolve(chain, level, &base, &base)?, 2.0 * base_log);
        base = sq;
        base_log = l;
    }
    let (v, log) = acc.expect("n >= 1");
    Ok((FinSuppFun::from_dense(chain, level, &v)?, log))
}

/// `π(f)` on `ℂ[K_level]`: entry `(x, y) = m f(x y^{-1})`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegRepMatrix {
    pub level: usize,
    pub matrix: DMatrix<Complex64>,
}

pub fn regular_rep(f: &FinSuppFun, level: usize) -> Result<RegRepMatrix> {
    let chain = f.chain();
    if f.level() > level {
        return invalid(format!("support level {} exceeds level {level}", f.level()));
    }
    let els = chain.elements(level)?;
    let n = els.len();
    let m = chain.point_mass();
    let mut matrix = DMatrix::from_element(n, n, ZERO);
    let support: Vec<(usize, Complex64)> = f
        .terms()
        .map(|(u, c)| Ok((chain.position(level, u)?.expect("support inside level"), c * m)))
        .collect::<Result<_>>()?;
    for y in 0..n {
        for &(u, c) in &support {
            // x y^{-1} = u  <=>  x = u y
            matrix[(chain.mul_pos(level, u, y)?, y)] = c;
        }
    }
    Ok(RegRepMatrix { level, matrix })
}

/// Reads `f(x) = Mat(x, e) / m`.
pub fn pullback(chain: &GroupChain, rep: &RegRepMatrix) -> Result<FinSuppFun> {
    let e = chain.position(rep.level, chain.identity())?.expect("identity is enumerated");
    let m = chain.point_mass();
    let col: Vec<Complex64> = rep.matrix.column(e).iter().map(|c| c / m).collect();
    FinSuppFun::from_dense(chain, rep.level, &col)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<Complex64>,
    /// Computed by the Hermitian solver.
    pub hermitian: bool,
}

impl Spectrum {
    pub fn radius(&self) -> f64 {
        self.eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_imag(&self) -> f64 {
        self.eigenvalues.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(a: &DMatrix<Complex64>) -> Vec<f64> {
    let mut v: Vec<f64> = a.clone().symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Eigenvalues of an arbitrary complex matrix (complex Schur form), sorted by
/// real then imaginary part.
pub fn general_eigenvalues(a: &DMatrix<Complex64>) -> Result<Vec<Complex64>> {
    let m = faer::Mat::<faer::c64>::from_fn(a.nrows(), a.ncols(), |i, j| {
        let z = a[(i, j)];
        faer::c64::new(z.re, z.im)
    });
    let ev = m.eigenvalues().map_err(|e| Error::Numeric(format!("eigenvalue solver: {e:?}")))?;
    let mut out: Vec<Complex64> = ev.into_iter().map(|z| Complex64::new(z.re, z.im)).collect();
    out.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    Ok(out)
}

/// Spectrum of `π(f)` at the support level of `f`: Hermitian solver for
/// self-adjoint `f`, the general solver otherwise.
pub fn spectrum_exact(f: &FinSuppFun) -> Result<Spectrum> {
    let rep = regular_rep(f, f.level())?;
    if f.is_self_adjoint(1e-12) {
        let eigenvalues = hermitian_eigenvalues(&rep.matrix).into_iter().map(|x| Complex64::new(x, 0.0)).collect();
        Ok(Spectrum { eigenvalues, hermitian: true })
    } else {
        Ok(Spectrum { eigenvalues: general_eigenvalues(&rep.matrix)?, hermitian: false })
    }
}

/// Spectral radius of `π(f)`; Hermitian path when `f` is self-adjoint.
pub fn spectral_radius(f: &FinSuppFun) -> Result<f64> {
    Ok(spectrum_exact(f)?.radius())
}

/// `‖f^{*2^k}‖^{2^{-k}}` for `k = 0..=kmax` in one norm.
#[derive(Debug, Clone, PartialEq)]
pub struct GelfandReport {
    pub norm: String,
    pub values: Vec<f64>,
    pub exact_radius: Option<f64>,
    /// `|values[kmax] - radius| / radius`.
    pub final_rel_error: Option<f64>,
}

impl GelfandReport {
    /// Whether every value stays above the radius (minus `slack`).
    pub fn above_radius(&self, slack: f64) -> Option<bool> {
        self.exact_radius.map(|r| self.values.iter().all(|&v| v >= r - slack))
    }
}

/// Gelfand sequences in several norms from one chain of squarings. Each
/// squaring is renormalized by its L¹ norm with the logarithm accumulated.
pub fn gelfand_sequences(f: &FinSuppFun, norms: &[Norm], kmax: u32) -> Result<Vec<GelfandReport>> {
    if kmax > 40 {
        return invalid(format!("kmax must be at most 40, got {kmax}"));
    }
    let chain = f.chain();
    let level = f.level();
    let exact_radius = if chain.is_enumerable(level) { Some(spectral_radius(f)?) } else { None };
    let mut values = vec![Vec::with_capacity(kmax as usize + 1); norms.len()];
    let mut cur = f.clone();
    let mut log_scale = 0.0f64;
    for k in 0..=kmax {
        let root = 2f64.powi(-(k as i32));
        for (norm, vals) in norms.iter().zip(values.iter_mut()) {
            let v = norm.eval(&cur)?;
            vals.push(if v == 0.0 { 0.0 } else { ((log_scale + v.ln()) * root).exp() });
        }
        if k == kmax {
            break;
        }
        cur = convolve(&cur, &cur)?;
        let s = l1_norm(&cur, None)?;
        if s == 0.0 {
            for vals in values.iter_mut() {
                vals.resize(kmax as usize + 1, 0.0);
            }
            break;
        }
        if !s.is_finite() {
            return Err(Error::Numeric(format!("L¹ norm overflowed at k = {}", k + 1)));
        }
        cur = cur.scale(Complex64::new(1.0 / s, 0.0));
        log_scale = 2.0 * log_scale + s.ln();
    }
    Ok(norms
        .iter()
        .zip(values)
        .map(|(norm, values)| {
            let final_rel_error = exact_radius.map(|r| {
                let last = *values.last().unwrap();
                if r == 0.0 { last } else { (last - r).abs() / r }
            });
            GelfandReport { norm: norm.label(), values, exact_radius, final_rel_error }
        })
        .collect())
}

pub fn gelfand_sequence(f: &FinSuppFun, norm: &Norm, kmax: u32) -> Result<GelfandReport> {
    Ok(gelfand_sequences(f, std::slice::from_ref(norm), kmax)?.remove(0))
}

/// `c_N = max_{x ∈ K_level} ‖δ_x‖_N / m`, so that `‖h‖_N <= c_N ‖h‖₁` for `h`
/// supported in `K_level`.
pub fn l1_conversion(norm: &Norm, chain: &GroupChain, level: usize) -> Result<f64> {
    let wmax = match norm.weight() {
        Some(w) => level_extrema(w, chain, level)?.max,
        None => 1.0,
    };
    let m = chain.point_mass();
    Ok(norm.from_magnitudes(&[wmax], m)? / m)
}

/// Partial sum of `u(tf)` with a certified tail bound.
#[derive(Debug, Clone)]
pub struct USeries {
    pub value: FinSuppFun,
    /// Number of terms summed.
    pub terms: usize,
    /// Bound on the remainder in the requested norm.
    pub tail_bound: f64,
}

/// `Σ_{k=1}^K (tf)^{*k}/k!` with `K` the first index where
/// `c_N x^{K+1}/(K+1)! e^x < tol`, `x = |t| ‖f‖₁`.
pub fn u_series(f: &FinSuppFun, t: Complex64, tol: f64, norm: &Norm) -> Result<USeries> {
    if !(tol > 0.0) {
        return invalid(format!("tol must be positive, got {tol}"));
    }
    let chain = f.chain();
    let level = f.level();
    let x = t.norm() * l1_norm(f, None)?;
    if x == 0.0 {
        return Ok(USeries { value: FinSuppFun::zero(chain), terms: 0, tail_bound: 0.0 });
    }
    let c = l1_conversion(norm, chain, level)?;
    let tail = |k: usize| {
        // x^{k+1}/(k+1)! e^x in log form
        let lg: f64 = (1..=k + 1).map(|j| (j as f64).ln()).sum();
        (c.ln() + (k + 1) as f64 * x.ln() - lg + x).exp()
    };
    let mut terms = 1;
    while tail(terms) >= tol {
        terms += 1;
        if terms > 100_000 {
            return Err(Error::Numeric("u-series needs more than 1e5 terms".into()));
        }
    }
    let tf = f.scale(t).to_dense(level)?;
    let mut term = tf.clone();
    let mut sum = tf.clone();
    for k in 2..=terms {
        term = dense_convolve(chain, level, &term, &tf)?;
        let inv = 1.0 / k as f64;
        term.iter_mut().for_each(|z| *z *= inv);
        sum.iter_mut().zip(&term).for_each(|(s, z)| *s += z);
    }
    Ok(USeries { value: FinSuppFun::from_dense(chain, level, &sum)?, terms, tail_bound: tail(terms) })
}

/// `pullback(exp(t π(f)) - I)`.
pub fn u_exact(f: &FinSuppFun, t: Complex64) -> Result<FinSuppFun> {
    let level = f.level();
    let rep = regular_rep(f, level)?;
    let n = rep.matrix.nrows();
    let e = (rep.matrix * t).exp() - DMatrix::identity(n, n);
    pullback(f.chain(), &RegRepMatrix { level, matrix: e })
}

/// `E = exp(i π(f))` and the column of `e`, for iterating `u(inf)`.
pub(crate) struct UnitaryOrbit {
    pub level: usize,
    pub forward: DMatrix<Complex64>,
    pub e: usize,
}

impl UnitaryOrbit {
    pub fn new(f: &FinSuppFun) -> Result<Self> {
        let level = f.level();
        let rep = regular_rep(f, level)?;
        let forward = (rep.matrix * Complex64::new(0.0, 1.0)).exp();
        let e = f.chain().position(level, f.chain().identity())?.expect("identity is enumerated");
        Ok(Self { level, forward, e })
    }

    pub fn start(&self) -> DVector<Complex64> {
        let mut v = DVector::from_element(self.forward.nrows(), ZERO);
        v[self.e] = Complex64::new(1.0, 0.0);
        v
    }

    /// Coefficients of `u(inf)` from `v = E^n e_e`.
    pub fn coefficients(&self, v: &DVector<Complex64>, m: f64) -> Vec<Complex64> {
        v.iter()
            .enumerate()
            .map(|(i, &z)| (if i == self.e { z - 1.0 } else { z }) / m)
            .collect()
    }
}

/// `B_K = (2/m) ‖χ_K‖_N`: bounds `‖u(inf)‖_N` for self-adjoint `f` in `K`.
pub fn unitary_bound(norm: &Norm, chain: &GroupChain, level: usize) -> Result<f64> {
    let chi = FinSuppFun::indicator(chain, level)?;
    Ok(2.0 / chain.point_mass() * norm.eval(&chi)?)
}

pub const GAMMA_MIN: f64 = 0.415_037_499_278_843_8; // log2(4/3)

pub(crate) fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma > GAMMA_MIN && gamma < 1.0) {
        return invalid(format!("gamma must lie in (log2(4/3), 1), got {gamma}"));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthProfile {
    /// `(n, ‖u(inf)‖)` for `n = 0..=N`.
    pub rows: Vec<(u64, f64)>,
    /// `max_n ‖u(inf)‖ e^{-2 n^γ}`.
    pub fitted_constant: f64,
    pub unitary_bound: f64,
}

impl GrowthProfile {
    pub fn within_unitary_bound(&self) -> bool {
        self.rows.iter().all(|&(_, v)| v <= self.unitary_bound * (1.0 + 1e-12))
    }
}

/// `‖u(inf)‖` for `n <= N`, from powers of `exp(i π(f))`.
pub fn growth_profile(f: &FinSuppFun, gamma: f64, n_max: u64, norm: &Norm) -> Result<GrowthProfile> {
    check_gamma(gamma)?;
    if !f.is_self_adjoint(1e-12) {
        return invalid("growth_profile needs a self-adjoint element");
    }
    let chain = f.chain();
    let orbit = UnitaryOrbit::new(f)?;
    let m = chain.point_mass();
    let mut v = orbit.start();
    let mut rows = vec![(0, 0.0)];
    for n in 1..=n_max {
        v = &orbit.forward * v;
        let h = FinSuppFun::from_dense(chain, orbit.level, &orbit.coefficients(&v, m))?;
        rows.push((n, norm.eval(&h)?));
    }
    let fitted_constant = rows
        .iter()
        .map(|&(n, val)| val * (-2.0 * (n as f64).powf(gamma)).exp())
        .fold(0.0, f64::max);
    Ok(GrowthProfile { rows, fitted_constant, unitary_bound: unitary_bound(norm, chain, f.level())? })
}

/// Largest observed ratios of the convolution inequalities over a sample.
#[derive(Debug, Clone, PartialEq)]
pub struct InequalityReport {
    pub samples: usize,
    /// `max ‖f*g‖ / (‖f‖₁‖g‖ + ‖f‖‖g‖₁)`: the fitted constant.
    pub r2: f64,
    /// `max ‖f*g‖ / (‖f‖_{1,ω}‖g‖)` for the Orlicz and Luxemburg norms.
    pub r3: [f64; 2],
    /// `max ‖L_x f‖ / (ω(x)‖f‖)` for the Orlicz and Luxemburg norms.
    pub rl: [f64; 2],
    /// The weight carries no sub-additivity metadata, so `r2` is exploratory.
    pub exploratory: bool,
}

impl InequalityReport {
    pub fn hard_contracts_hold(&self, slack: f64) -> bool {
        self.r3.iter().chain(&self.rl).all(|&r| r <= 1.0 + slack)
    }
}

/// Random `f, g` in `K_level` and `x ∈ K_level`, fixed seed.
pub fn inequality_suite(
    chain: &GroupChain,
    level: usize,
    phi: &YoungFunction,
    omega: &Weight,
    samples: usize,
    seed: u64,
) -> Result<InequalityReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let orlicz = Norm::Orlicz { phi: phi.clone(), weight: Some(omega.clone()) };
    let lux = Norm::Luxemburg { phi: phi.clone(), weight: Some(omega.clone()) };
    let mut report = InequalityReport {
        samples,
        r2: 0.0,
        r3: [0.0; 2],
        rl: [0.0; 2],
        exploratory: !omega.flags().subadditive_max_form,
    };
    let support = chain.is_enumerable(level).then_some(None).unwrap_or(Some(8));
    for _ in 0..samples {
        let f = FinSuppFun::random(chain, level, support, &mut rng)?;
        let g = FinSuppFun::random(chain, level, support, &mut rng)?;
        let x = chain.random_element(level, &mut rng);
        let fg = convolve(&f, &g)?;
        let (f1, g1) = (l1_norm(&f, None)?, l1_norm(&g, None)?);
        let f1w = l1_norm(&f, Some(omega))?;
        let wx = omega.eval(chain, x)?;
        let lx = f.left_translate(x);
        for (i, norm) in [&orlicz, &lux].into_iter().enumerate() {
            let (nf, ng, nfg) = (norm.eval(&f)?, norm.eval(&g)?, norm.eval(&fg)?);
            if i == 0 {
                report.r2 = report.r2.max(nfg / (f1 * ng + nf * g1));
            }
            report.r3[i] = report.r3[i].max(nfg / (f1w * ng));
            report.rl[i] = report.rl[i].max(norm.eval(&lx)? / (wx * nf));
        }
    }
    Ok(report)
}

/// `(‖f^{*n}‖_{1,ω}, ‖a^{*n}‖_{ℓ¹(ℤ,ω')})` with `a_i` the mass of `|f|` on the
/// shell `K_i \ K_{i-1}`, placed at `i`. Both sides are divided by `‖f‖₁^n`;
/// the common factor's logarithm is returned third.
pub fn radial_majorant_check(f: &FinSuppFun, omega: &Weight, n: u64) -> Result<(f64, f64, f64)> {
    if n == 0 || n > 1 << 20 {
        return invalid(format!("n must lie in 1..=2^20, got {n}"));
    }
    let chain = f.chain();
    let omega_int = uniform_grs_weight(omega, chain)?;
    let top = chain.levels();
    let (pow, log_scale) = power_scaled(f, n)?;
    let lhs = l1_norm(&pow, Some(omega))?;

    let f1 = l1_norm(f, None)?;
    let m = chain.point_mass();
    let mut shells = vec![0.0; top + 1];
    for (x, c) in f.terms() {
        shells[chain.level_of(x)] += m * c.norm() / f1;
    }
    // ω' is constant beyond the top level, so indices saturate there
    let conv = |a: &[f64], b: &[f64]| -> Vec<f64> {
        let mut out = vec![0.0; top + 1];
        for (i, &ai) in a.iter().enumerate().filter(|(_, v)| **v != 0.0) {
            for (j, &bj) in b.iter().enumerate() {
                out[(i + j).min(top)] += ai * bj;
            }
        }
        out
    };
    let mut base = shells;
    let mut acc: Option<Vec<f64>> = None;
    let mut k = n;
    while k > 0 {
        if k & 1 == 1 {
            acc = Some(match acc {
                None => base.clone(),
                Some(a) => conv(&a, &base),
            });
        }
        k >>= 1;
        if k > 0 {
            base = conv(&base, &base);
        }
    }
    let a_n = acc.expect("n >= 1");
    let rhs = kahan_sum(a_n.iter().enumerate().map(|(i, &v)| v * omega_int.eval(i as i64)));
    // lhs was normalized by ‖f^{*n}‖₁; bring it to the ‖f‖₁^n scale
    let lhs = lhs * (log_scale - n as f64 * f1.ln()).exp();
    Ok((lhs, rhs, n as f64 * f1.ln()))
}

/// Translate-and-compare helper: `‖L_x f‖ / ‖f‖` for a single point.
pub fn translation_ratio(f: &FinSuppFun, x: Elem, norm: &Norm) -> Result<f64> {
    Ok(norm.eval(&f.left_translate(x))? / norm.eval(f)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Haar;
    use crate::weights::sharpen_p;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn c4() -> GroupChain {
        GroupChain::cyclic_sum(&[4], 1).unwrap().with_haar(Haar::Counting)
    }

    fn cos_element(chain: &GroupChain, a: Elem) -> FinSuppFun {
        FinSuppFun::from_terms(chain, [(a, c(0.5)), (chain.inv(a), c(0.5))]).unwrap()
    }

    #[test]
    fn convolve_examples() {
        let ch = GroupChain::cyclic_sum(&[2, 2, 2], 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = FinSuppFun::random(&ch, 2, None, &mut rng).unwrap();
        let u = FinSuppFun::unit(&ch);
        assert!(convolve(&f, &u).unwrap().max_abs_diff(&f) < 1e-15);
        let h = FinSuppFun::indicator(&ch, 1).unwrap();
        assert!(convolve(&h, &h).unwrap().max_abs_diff(&h) < 1e-15);

        let g = c4();
        let a = g.generators()[0];
        let d = FinSuppFun::delta(&g, a, c(1.0)).unwrap();
        assert_eq!(convolve(&d, &d).unwrap(), FinSuppFun::delta(&g, g.mul(a, a), c(1.0)).unwrap());
        assert!(convolve(&d, &FinSuppFun::unit(&ch)).is_err());
    }

    #[test]
    fn lazy_chains_convolve_sparsely() {
        let ch = GroupChain::leptin_hulanicki_lazy(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let f = FinSuppFun::random(&ch, 3, Some(5), &mut rng).unwrap();
        let g = FinSuppFun::random(&ch, 3, Some(5), &mut rng).unwrap();
        let fg = convolve(&f, &g).unwrap();
        let lhs = involution(&fg);
        let rhs = convolve(&involution(&g), &involution(&f)).unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-14);
    }

    #[test]
    fn associativity_is_exact_on_dyadic_inputs() {
        let ch = GroupChain::leptin_hulanicki(1).unwrap().with_haar(Haar::Counting);
        let els = ch.elements(1).unwrap();
        let mk = |s: usize| {
            FinSuppFun::from_terms(
                &ch,
                els.iter().enumerate().map(|(i, &x)| (x, Complex64::new(((i * s) % 5) as f64 - 2.0, ((i + s) % 3) as f64 * 0.5))),
            )
            .unwrap()
        };
        let (f, g, h) = (mk(1), mk(2), mk(3));
        let left = convolve(&convolve(&f, &g).unwrap(), &h).unwrap();
        let right = convolve(&f, &convolve(&g, &h).unwrap()).unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn involution_properties() {
        let g = c4();
        let a = g.generators()[0];
        let d = FinSuppFun::delta(&g, a, c(1.0)).unwrap();
        assert_eq!(involution(&d), FinSuppFun::delta(&g, g.inv(a), c(1.0)).unwrap());
        let s = cos_element(&g, a);
        assert_eq!(involution(&s), s);
        let ch = GroupChain::leptin_hulanicki(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10 {
            let f = FinSuppFun::random(&ch, 2, Some(10), &mut rng).unwrap();
            let g2 = FinSuppFun::random(&ch, 2, Some(10), &mut rng).unwrap();
            assert_eq!(involution(&involution(&f)), f);
            let lhs = involution(&convolve(&f, &g2).unwrap());
            let rhs = convolve(&involution(&g2), &involution(&f)).unwrap();
            assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        }
    }

    #[test]
    fn regular_representation() {
        let ch = GroupChain::leptin_hulanicki(1).unwrap();
        let n = ch.order(1) as usize;
        let u = regular_rep(&FinSuppFun::unit(&ch), 1).unwrap();
        assert_eq!(u.matrix, DMatrix::identity(n, n));
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..10 {
            let f = FinSuppFun::random(&ch, 1, None, &mut rng).unwrap();
            let g = FinSuppFun::random(&ch, 1, None, &mut rng).unwrap();
            let pf = regular_rep(&f, 1).unwrap();
            let pg = regular_rep(&g, 1).unwrap();
            let pfg = regular_rep(&convolve(&f, &g).unwrap(), 1).unwrap();
            assert!((&pf.matrix * &pg.matrix - &pfg.matrix).camax() <= 1e-12);
            assert_eq!(regular_rep(&involution(&f), 1).unwrap().matrix, pf.matrix.adjoint());
            assert_eq!(pullback(&ch, &pf).unwrap(), f);
        }
        let s = FinSuppFun::random_self_adjoint(&ch, 1, None, &mut rng).unwrap();
        let ps = regular_rep(&s, 1).unwrap().matrix;
        assert!((&ps - ps.adjoint()).camax() < 1e-15);
    }

    #[test]
    fn spectrum_examples() {
        let g = c4();
        let s = spectrum_exact(&cos_element(&g, g.generators()[0])).unwrap();
        assert!(s.hermitian);
        let expected = [-1.0, 0.0, 0.0, 1.0];
        for (z, e) in s.eigenvalues.iter().zip(expected) {
            assert!((z.re - e).abs() < 1e-12 && z.im == 0.0);
        }
        let ch = GroupChain::leptin_hulanicki(1).unwrap();
        let s = spectrum_exact(&FinSuppFun::unit(&ch)).unwrap();
        assert_eq!(s.eigenvalues.len(), 8);
        assert!(s.eigenvalues.iter().all(|z| (z - 1.0).norm() < 1e-12));

        // χ_{K_1} at level 2 of (2,2): eigenvalue 1 with multiplicity [K_2:K_1]
        let ch = GroupChain::cyclic_sum(&[2, 2], 2).unwrap();
        let h = FinSuppFun::indicator(&ch, 1).unwrap();
        let rep = regular_rep(&h, 2).unwrap();
        let ev = hermitian_eigenvalues(&rep.matrix);
        let ones = ev.iter().filter(|&&x| (x - 1.0).abs() < 1e-12).count();
        let zeros = ev.iter().filter(|&&x| x.abs() < 1e-12).count();
        assert_eq!((ones, zeros), (2, 2));
    }

    #[test]
    fn general_solver_agrees_with_hermitian_solver() {
        let ch = GroupChain::leptin_hulanicki(1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let f = FinSuppFun::random_self_adjoint(&ch, 1, None, &mut rng).unwrap();
            let rep = regular_rep(&f, 1).unwrap();
            let herm = hermitian_eigenvalues(&rep.matrix);
            let mut gen: Vec<f64> = general_eigenvalues(&rep.matrix).unwrap().iter().map(|z| z.re).collect();
            gen.sort_by(f64::total_cmp);
            assert!(general_eigenvalues(&rep.matrix).unwrap().iter().all(|z| z.im.abs() <= 1e-9));
            for (a, b) in herm.iter().zip(&gen) {
                assert!((a - b).abs() < 1e-9);
            }
        }
        // a non-normal element: δ_a on C_4 has eigenvalues the 4th roots of unity
        let g = c4();
        let d = FinSuppFun::delta(&g, g.generators()[0], c(1.0)).unwrap();
        let s = spectrum_exact(&d).unwrap();
        assert!(!s.hermitian);
        assert!((s.radius() - 1.0).abs() < 1e-12);
        assert!((s.max_imag() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gelfand_examples() {
        let ch = GroupChain::cyclic_sum(&[2, 2], 2).unwrap();
        let r = gelfand_sequence(&FinSuppFun::unit(&ch), &Norm::L1, 12).unwrap();
        assert!((r.exact_radius.unwrap() - 1.0).abs() < 1e-12);
        assert!((r.values[12] - 1.0).abs() < 1e-3);

        let g = c4();
        let f = cos_element(&g, g.generators()[0]);
        let r = gelfand_sequence(&f, &Norm::L1, 12).unwrap();
        assert!(r.final_rel_error.unwrap() < 0.05);
        assert_eq!(r.above_radius(1e-9), Some(true));

        let ch = GroupChain::cyclic_sum(&[4, 2], 2).unwrap();
        let w = sharpen_p(&Weight::trivial(2), &ch, 1.0).unwrap();
        let f = cos_element(&ch, ch.generators()[0]);
        let norm = Norm::Orlicz { phi: YoungFunction::PPower { p: 2.0 }, weight: Some(w) };
        let r = gelfand_sequence(&f, &norm, 12).unwrap();
        assert!(r.final_rel_error.unwrap() < 0.05);
        assert!(r.values[12] < r.values[0]);
    }

    #[test]
    fn u_series_examples() {
        let ch = GroupChain::cyclic_sum(&[2, 2], 2).unwrap();
        let h = FinSuppFun::indicator(&ch, 1).unwrap();
        let t = Complex64::new(0.7, 0.0);
        let s = u_series(&h, t, 1e-12, &Norm::L1).unwrap();
        let expected = h.scale(c(0.7f64.exp_m1()));
        assert!(s.value.max_abs_diff(&expected) < 1e-12);
        assert!(s.tail_bound < 1e-12);
        assert!(u_series(&h, c(0.0), 1e-9, &Norm::L1).unwrap().value.is_zero());
        let ex = u_exact(&h, t).unwrap();
        assert!(ex.max_abs_diff(&expected) < 1e-12);
        assert!(u_exact(&h, c(0.0)).unwrap().is_zero());
    }

    #[test]
    fn u_series_matches_matrix_exponential() {
        let ch = GroupChain::leptin_hulanicki(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = FinSuppFun::random_self_adjoint(&ch, 1, None, &mut rng).unwrap();
        let t = Complex64::new(0.0, 5.0);
        let tol = 1e-8;
        let s = u_series(&f, t, tol, &Norm::L1).unwrap();
        let e = u_exact(&f, t).unwrap();
        assert!(l1_norm(&s.value.sub(&e).unwrap(), None).unwrap() <= tol + 1e-10);
    }

    #[test]
    fn u_recursion() {
        let ch = GroupChain::cyclic_sum(&[2, 2, 2], 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let tol = 1e-12;
        for _ in 0..5 {
            let f = FinSuppFun::random_self_adjoint(&ch, 2, None, &mut rng).unwrap();
            let u = |k: f64| u_series(&f, c(k), tol, &Norm::L1).unwrap().value;
            let u1 = u(1.0);
            for n in 2..=4 {
                let mut rhs = u1.scale(c(n as f64));
                for k in 1..n {
                    rhs = rhs.add(&convolve(&u(k as f64), &u1).unwrap()).unwrap();
                }
                let res = l1_norm(&u(n as f64).sub(&rhs).unwrap(), None).unwrap();
                assert!(res <= n as f64 * tol + 1e-9, "n={n}: {res}");
            }
        }
    }

    #[test]
    fn growth_profile_examples() {
        let ch = GroupChain::cyclic_sum(&[2, 2], 2).unwrap();
        let h = FinSuppFun::indicator(&ch, 1).unwrap();
        let p = growth_profile(&h, 0.5, 30, &Norm::L1).unwrap();
        assert_eq!(p.rows[0], (0, 0.0));
        for &(n, v) in &p.rows {
            let expected = (Complex64::new(0.0, n as f64).exp() - 1.0).norm();
            assert!((v - expected).abs() < 1e-10);
        }
        assert!(p.within_unitary_bound());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = FinSuppFun::random_self_adjoint(&ch, 2, None, &mut rng).unwrap();
        assert!(growth_profile(&f, 0.5, 200, &Norm::L1).unwrap().within_unitary_bound());
        assert!(growth_profile(&f, 0.4, 10, &Norm::L1).is_err());
    }

    #[test]
    fn inequality_examples() {
        let ch = GroupChain::cyclic_sum(&[2, 2, 2], 3).unwrap();
        let w = sharpen_p(&Weight::trivial(3), &ch, 1.0).unwrap();
        let phi = YoungFunction::PPower { p: 2.0 };
        let u = FinSuppFun::unit(&ch);
        let norm = Norm::Orlicz { phi: phi.clone(), weight: Some(w.clone()) };
        let r3 = norm.eval(&convolve(&u, &u).unwrap()).unwrap()
            / (l1_norm(&u, Some(&w)).unwrap() * norm.eval(&u).unwrap());
        assert!(r3 <= 1.0);
        assert!((translation_ratio(&u, ch.identity(), &norm).unwrap() - 1.0).abs() < 1e-15);
        let rep = inequality_suite(&ch, 3, &phi, &w, 100, 9).unwrap();
        assert!(rep.hard_contracts_hold(1e-9), "{rep:?}");
        assert!(!rep.exploratory);
    }

    #[test]
    fn radial_majorant_examples() {
        let ch = GroupChain::cyclic_sum(&[2, 2, 2], 3).unwrap();
        let w = Weight::radial(vec![1.0, 2.0, 4.0]).unwrap();
        let u = FinSuppFun::unit(&ch);
        let (l, r, _) = radial_majorant_check(&u, &w, 1).unwrap();
        assert!((l - r).abs() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for n in [1, 2, 8, 1000] {
            let f = FinSuppFun::random(&ch, 2, None, &mut rng).unwrap();
            let (l, r, _) = radial_majorant_check(&f, &w, n).unwrap();
            assert!(l <= r * (1.0 + 1e-12) + 1e-9, "n={n}: {l} > {r}");
        }
    }
}
