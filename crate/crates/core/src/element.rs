//! Finitely supported complex functions on a group chain: the elements of
//! `C_c(G)` the algebra computations act on.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::group::{Elem, GroupChain};

/// A finitely supported function `G -> ℂ`. Stored entries are nonzero and
/// ordered by element code, so every sum over the support runs in a fixed order.
#[derive(Debug, Clone)]
pub struct FinSuppFun {
    chain: GroupChain,
    terms: BTreeMap<Elem, Complex64>,
}

impl PartialEq for FinSuppFun {
    fn eq(&self, other: &Self) -> bool {
        self.chain == other.chain && self.terms == other.terms
    }
}

impl FinSuppFun {
    pub fn zero(chain: &GroupChain) -> Self {
        Self { chain: chain.clone(), terms: BTreeMap::new() }
    }

    /// Sums duplicate entries and drops exact zeros.
    pub fn from_terms<I: IntoIterator<Item = (Elem, Complex64)>>(chain: &GroupChain, terms: I) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (x, c) in terms {
            if chain.level_of(x) > chain.levels() {
                return Err(Error::Validation(format!("{x} is outside {}", chain.name())));
            }
            *map.entry(x).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        map.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        Ok(Self { chain: chain.clone(), terms: map })
    }

    pub fn delta(chain: &GroupChain, x: Elem, c: Complex64) -> Result<Self> {
        Self::from_terms(chain, [(x, c)])
    }

    /// The convolution unit `δ_e / m`.
    pub fn unit(chain: &GroupChain) -> Self {
        let c = Complex64::new(1.0 / chain.point_mass(), 0.0);
        Self::delta(chain, chain.identity(), c).expect("identity is in every chain")
    }

    /// `χ_{K_level}`.
    pub fn indicator(chain: &GroupChain, level: usize) -> Result<Self> {
        let one = Complex64::new(1.0, 0.0);
        Self::from_terms(chain, chain.elements(level)?.iter().map(|&x| (x, one)))
    }

    /// `χ_{K_level} / mu(K_level)`, an idempotent self-adjoint element.
    pub fn normalized_indicator(chain: &GroupChain, level: usize) -> Result<Self> {
        let mu = chain.point_mass() * chain.order(level) as f64;
        Ok(Self::indicator(chain, level)?.scale(Complex64::new(1.0 / mu, 0.0)))
    }

    /// Random coefficients with real and imaginary parts uniform in `[-1, 1]`.
    /// `support = None` fills all of `K_level` (which must be enumerable);
    /// `Some(s)` draws `s` random elements of `K_level`.
    pub fn random<R: Rng + ?Sized>(
        chain: &GroupChain,
        level: usize,
        support: Option<usize>,
        rng: &mut R,
    ) -> Result<Self> {
        let draw = |rng: &mut R| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        match support {
            None => {
                let els = chain.elements(level)?;
                let terms: Vec<_> = els.iter().map(|&x| (x, draw(rng))).collect();
                Self::from_terms(chain, terms)
            }
            Some(s) => {
                let mut terms = Vec::with_capacity(s);
                for _ in 0..s {
                    let c = draw(rng);
                    terms.push((chain.random_element(level, rng), c));
                }
                Self::from_terms(chain, terms)
            }
        }
    }

    /// `(g + g*) / 2` for a random `g`, rescaled to unit L¹ norm.
    pub fn random_self_adjoint<R: Rng + ?Sized>(
        chain: &GroupChain,
        level: usize,
        support: Option<usize>,
        rng: &mut R,
    ) -> Result<Self> {
        let g = Self::random(chain, level, support, rng)?;
        let f = g.add(&g.adjoint())?.scale(Complex64::new(0.5, 0.0));
        let l1 = f.l1();
        Ok(if l1 > 0.0 { f.scale(Complex64::new(1.0 / l1, 0.0)) } else { f })
    }

    pub fn chain(&self) -> &GroupChain {
        &self.chain
    }

    pub fn get(&self, x: Elem) -> Complex64 {
        self.terms.get(&x).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Elem, Complex64)> + '_ {
        self.terms.iter().map(|(&x, &c)| (x, c))
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest level over the support; 1 for the zero function.
    pub fn level(&self) -> usize {
        self.terms.keys().map(|&x| self.chain.level_of(x)).max().unwrap_or(1)
    }

    fn check_chain(&self, other: &Self) -> Result<()> {
        if self.chain == other.chain {
            Ok(())
        } else {
            Err(Error::ChainMismatch)
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let terms = self.terms.iter().map(|(&x, &v)| (x, v * c)).filter(|(_, v)| *v != Complex64::default());
        Self { chain: self.chain.clone(), terms: terms.collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_chain(other)?;
        Self::from_terms(&self.chain, self.terms().chain(other.terms()))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// `f*(x) = conj(f(x^{-1}))`.
    pub fn adjoint(&self) -> Self {
        let terms = self.terms.iter().map(|(&x, c)| (self.chain.inv(x), c.conj()));
        Self { chain: self.chain.clone(), terms: terms.collect() }
    }

    /// `(L_x f)(y) = f(x^{-1} y)`.
    pub fn left_translate(&self, x: Elem) -> Self {
        let terms = self.terms.iter().map(|(&y, &c)| (self.chain.mul(x, y), c));
        Self { chain: self.chain.clone(), terms: terms.collect() }
    }

    /// Unweighted L¹ norm `m Σ |f(x)|`.
    pub fn l1(&self) -> f64 {
        self.chain.point_mass() * crate::numeric::kahan_sum(self.terms.values().map(|c| c.norm()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let keys: std::collections::BTreeSet<Elem> = self.terms.keys().chain(other.terms.keys()).copied().collect();
        keys.into_iter().map(|x| (self.get(x) - other.get(x)).norm()).fold(0.0, f64::max)
    }

    /// `max |f - f*| <= tol * max |f|`.
    pub fn is_self_adjoint(&self, tol: f64) -> bool {
        let scale = self.terms.values().map(|c| c.norm()).fold(0.0, f64::max);
        self.max_abs_diff(&self.adjoint()) <= tol * scale.max(f64::MIN_POSITIVE)
    }

    /// Coefficients over the enumeration of `K_level`.
    pub fn to_dense(&self, level: usize) -> Result<Vec<Complex64>> {
        let mut out = vec![Complex64::default(); self.chain.elements(level)?.len()];
        for (&x, &c) in &self.terms {
            let pos = self.chain.position(level, x)?.ok_or_else(|| {
                Error::Validation(format!("{x} is outside level {level}"))
            })?;
            out[pos] = c;
        }
        Ok(out)
    }

    pub fn from_dense(chain: &GroupChain, level: usize, values: &[Complex64]) -> Result<Self> {
        let els = chain.elements(level)?;
        if els.len() != values.len() {
            return Err(Error::Validation(format!(
                "dense vector has {} entries, level {level} has {}",
                values.len(),
                els.len()
            )));
        }
        let terms = els.iter().copied().zip(values.iter().copied()).filter(|(_, c)| *c != Complex64::default());
        Ok(Self { chain: chain.clone(), terms: terms.collect() })
    }
}
