//! Ascending chains of finite groups `K_1 <= K_2 <= ...` with Haar bookkeeping,
//! plus measure-only shell models for groups that cannot be enumerated.
//!
//! Levels are 1-based throughout: level 1 is the base subgroup `K_1`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{invalid, Error, Result};

/// Default cap on the number of elements a level may have to be enumerated.
pub const DEFAULT_ENUMERATION_CAP: u128 = 1 << 20;
/// Levels up to this size get a precomputed Cayley table.
const TABLE_CAP: usize = 1024;
/// Deepest Leptin–Hulanicki level whose elements fit the packed encoding.
pub const LH_MAX_LAZY_DEPTH: usize = 4;

/// Opaque group element identifier, valid within one chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(u128);

impl Elem {
    pub fn code(self) -> u128 {
        self.0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Haar normalization: `Normalized` puts mass `1/|K_1|` on each point so that
/// `mu(K_1) = 1`; `Counting` puts mass 1 on each point.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Haar {
    #[default]
    Normalized,
    Counting,
}

#[derive(Clone, Copy, Debug)]
pub struct ChainOptions {
    pub cap: u128,
    pub haar: Haar,
}

impl Default for ChainOptions {
    fn default() -> Self {
        Self { cap: DEFAULT_ENUMERATION_CAP, haar: Haar::Normalized }
    }
}

#[derive(Debug)]
enum Law {
    /// `C_{n_1} x C_{n_2} x ...`, elements as mixed-radix integers.
    CyclicSum { orders: Vec<u64>, radix: Vec<u128> },
    /// `(H^H, pointwise) ⋊ H` with `H = C_2^d`; packed as `d` bits of top
    /// component followed by `2^d` entries of `d` bits each.
    LeptinHulanicki { depth: usize },
}

impl Law {
    fn order(&self, d: usize) -> u128 {
        match self {
            Law::CyclicSum { radix, .. } => radix[d],
            Law::LeptinHulanicki { .. } => 1u128 << (d * (1 << d) + d),
        }
    }

    fn mul(&self, a: u128, b: u128) -> u128 {
        match self {
            Law::CyclicSum { orders, radix } => {
                let mut out = 0u128;
                let (mut a, mut b) = (a, b);
                for (i, &n) in orders.iter().enumerate() {
                    if a == 0 && b == 0 {
                        break;
                    }
                    let n = n as u128;
                    let s = (a % n + b % n) % n;
                    out += s * radix[i];
                    a /= n;
                    b /= n;
                }
                out
            }
            Law::LeptinHulanicki { depth } => {
                let (fa, ha) = lh_decode(a, *depth);
                let (fb, hb) = lh_decode(b, *depth);
                let mut f = [0u32; 16];
                for k in 0..(1usize << depth) {
                    f[k] = fa[k] ^ fb[k ^ ha as usize];
                }
                lh_encode(&f, ha ^ hb, *depth)
            }
        }
    }

    fn inv(&self, a: u128) -> u128 {
        match self {
            Law::CyclicSum { orders, radix } => {
                let mut out = 0u128;
                let mut a = a;
                for (i, &n) in orders.iter().enumerate() {
                    if a == 0 {
                        break;
                    }
                    let n = n as u128;
                    let m = a % n;
                    out += ((n - m) % n) * radix[i];
                    a /= n;
                }
                out
            }
            Law::LeptinHulanicki { depth } => {
                let (fa, h) = lh_decode(a, *depth);
                let mut g = [0u32; 16];
                for k in 0..(1usize << depth) {
                    g[k] = fa[k ^ h as usize];
                }
                lh_encode(&g, h, *depth)
            }
        }
    }

    /// Smallest underlying depth `d >= 1` with `a` in `K_d`.
    fn intrinsic_level(&self, a: u128) -> usize {
        match self {
            Law::CyclicSum { radix, .. } => {
                (1..radix.len()).find(|&d| a < radix[d]).unwrap_or(radix.len() - 1)
            }
            Law::LeptinHulanicki { depth } => {
                let (f, h) = lh_decode(a, *depth);
                (1..=*depth)
                    .find(|&d| {
                        let bound = 1u32 << d;
                        h < bound
                            && (0..(1usize << depth)).all(|k| {
                                if k < (1 << d) {
                                    f[k] < bound
                                } else {
                                    f[k] == 0
                                }
                            })
                    })
                    .unwrap_or(*depth)
            }
        }
    }

    fn enumerate(&self, d: usize) -> Vec<Elem> {
        match self {
            Law::CyclicSum { radix, .. } => (0..radix[d]).map(Elem).collect(),
            Law::LeptinHulanicki { depth } => {
                let hsize = 1u32 << d;
                let slots = 1usize << d;
                let nfun = (hsize as u128).pow(slots as u32);
                let mut out = Vec::with_capacity((nfun * hsize as u128) as usize);
                for t in 0..nfun {
                    let mut f = [0u32; 16];
                    let mut rest = t;
                    for slot in f.iter_mut().take(slots) {
                        *slot = (rest % hsize as u128) as u32;
                        rest /= hsize as u128;
                    }
                    for h in 0..hsize {
                        out.push(Elem(lh_encode(&f, h, *depth)));
                    }
                }
                out
            }
        }
    }

    fn random<R: Rng + ?Sized>(&self, d: usize, rng: &mut R) -> Elem {
        match self {
            Law::CyclicSum { radix, .. } => Elem(rng.gen_range(0..radix[d])),
            Law::LeptinHulanicki { depth } => {
                let hsize = 1u32 << d;
                let mut f = [0u32; 16];
                for slot in f.iter_mut().take(1 << d) {
                    *slot = rng.gen_range(0..hsize);
                }
                Elem(lh_encode(&f, rng.gen_range(0..hsize), *depth))
            }
        }
    }

    /// Canonical generators of `K_d`.
    fn generators(&self, d: usize) -> Vec<Elem> {
        match self {
            Law::CyclicSum { orders, radix } => (0..d)
                .filter(|&i| orders[i] > 1)
                .map(|i| Elem(radix[i]))
                .collect(),
            Law::LeptinHulanicki { depth } => {
                let mut gens = Vec::new();
                for b in 0..d {
                    gens.push(Elem(lh_encode(&[0u32; 16], 1 << b, *depth)));
                    let mut f = [0u32; 16];
                    f[0] = 1 << b;
                    gens.push(Elem(lh_encode(&f, 0, *depth)));
                }
                gens
            }
        }
    }
}

fn lh_decode(code: u128, depth: usize) -> ([u32; 16], u32) {
    let mask = (1u128 << depth) - 1;
    let h = (code & mask) as u32;
    let mut f = [0u32; 16];
    for (k, slot) in f.iter_mut().enumerate().take(1 << depth) {
        *slot = ((code >> (depth + k * depth)) & mask) as u32;
    }
    (f, h)
}

fn lh_encode(f: &[u32; 16], h: u32, depth: usize) -> u128 {
    let mut code = h as u128;
    for (k, &v) in f.iter().enumerate().take(1 << depth) {
        code |= (v as u128) << (depth + k * depth);
    }
    code
}

#[derive(Debug)]
struct Enumeration {
    elems: Vec<Elem>,
    /// `None` when the position of an element equals its code.
    index: Option<HashMap<Elem, u32>>,
    table: Option<Vec<u32>>,
    inverse: Vec<u32>,
}

impl Enumeration {
    fn build(law: &Law, d: usize) -> Self {
        let elems = law.enumerate(d);
        let index: Option<HashMap<Elem, u32>> = match law {
            Law::CyclicSum { .. } => None,
            Law::LeptinHulanicki { .. } => {
                Some(elems.iter().enumerate().map(|(i, &e)| (e, i as u32)).collect())
            }
        };
        let pos = |e: Elem| -> u32 {
            match &index {
                None => e.0 as u32,
                Some(map) => map[&e],
            }
        };
        let n = elems.len();
        let inverse = elems.iter().map(|e| pos(Elem(law.inv(e.0)))).collect();
        let table = (n <= TABLE_CAP).then(|| {
            let mut t = Vec::with_capacity(n * n);
            for a in &elems {
                for b in &elems {
                    t.push(pos(Elem(law.mul(a.0, b.0))));
                }
            }
            t
        });
        Self { elems, index, table, inverse }
    }

    fn position(&self, e: Elem) -> Option<usize> {
        match &self.index {
            None => ((e.0 as usize) < self.elems.len()).then_some(e.0 as usize),
            Some(map) => map.get(&e).map(|&i| i as usize),
        }
    }
}

#[derive(Debug, Clone)]
struct Level {
    depth: usize,
    order: u128,
    enumeration: Option<Arc<Enumeration>>,
}

/// An ascending chain of finite groups with a common element encoding.
///
/// Immutable after construction; cheap to clone (shared internals).
#[derive(Debug, Clone)]
pub struct GroupChain {
    name: String,
    law: Arc<Law>,
    levels: Vec<Level>,
    haar: Haar,
}

impl PartialEq for GroupChain {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.law, &other.law)
            && self.haar == other.haar
            && self.levels.iter().map(|l| l.depth).eq(other.levels.iter().map(|l| l.depth))
    }
}

impl GroupChain {
    /// `K_i = C_{orders[0]} x ... x C_{orders[i-1]}`, every level enumerable.
    pub fn cyclic_sum(orders: &[u64], depth: usize) -> Result<Self> {
        Self::cyclic_sum_with(orders, depth, &ChainOptions::default())
    }

    pub fn cyclic_sum_with(orders: &[u64], depth: usize, opts: &ChainOptions) -> Result<Self> {
        let chain = Self::cyclic_sum_lazy_with(orders, depth, opts)?;
        let top = chain.order(depth);
        if top > opts.cap {
            return Err(Error::Size { what: chain.name.clone(), size: top, cap: opts.cap });
        }
        Ok(chain)
    }

    /// Like [`GroupChain::cyclic_sum`] but levels above the cap are kept
    /// multiplication-only.
    pub fn cyclic_sum_lazy(orders: &[u64], depth: usize) -> Result<Self> {
        Self::cyclic_sum_lazy_with(orders, depth, &ChainOptions::default())
    }

    pub fn cyclic_sum_lazy_with(orders: &[u64], depth: usize, opts: &ChainOptions) -> Result<Self> {
        if depth == 0 {
            return invalid("depth must be at least 1");
        }
        if orders.len() < depth {
            return invalid(format!("need {depth} orders, got {}", orders.len()));
        }
        let orders = orders[..depth].to_vec();
        if let Some(i) = orders.iter().position(|&n| n == 0) {
            return invalid(format!("order at position {} is 0", i + 1));
        }
        if let Some(i) = orders.iter().skip(1).position(|&n| n < 2) {
            return invalid(format!("order at position {} gives index 1; inclusions must be proper", i + 2));
        }
        let mut radix = vec![1u128];
        for &n in &orders {
            let next = radix
                .last()
                .unwrap()
                .checked_mul(n as u128)
                .filter(|&v| v < (1u128 << 126))
                .ok_or_else(|| Error::Size {
                    what: "cyclic sum".into(),
                    size: u128::MAX,
                    cap: opts.cap,
                })?;
            radix.push(next);
        }
        let name = format!(
            "cyclic_sum({})",
            orders.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(",")
        );
        let law = Law::CyclicSum { orders, radix };
        Ok(Self::assemble(name, law, depth, opts))
    }

    /// `K_i = (H_i^{H_i}) ⋊ H_i` with `H_i = C_2^i`; only depths 1 and 2 can
    /// be enumerated (orders 8 and 1024).
    pub fn leptin_hulanicki(depth: usize) -> Result<Self> {
        if depth == 0 {
            return invalid("depth must be at least 1");
        }
        if depth > 2 {
            let law = Law::LeptinHulanicki { depth: depth.min(LH_MAX_LAZY_DEPTH) };
            return Err(Error::Size {
                what: format!("leptin_hulanicki depth {depth}"),
                size: law.order(depth.min(LH_MAX_LAZY_DEPTH)),
                cap: DEFAULT_ENUMERATION_CAP,
            });
        }
        Self::leptin_hulanicki_lazy(depth)
    }

    /// Leptin–Hulanicki chain up to depth 4; levels above the enumeration cap
    /// support multiplication only.
    pub fn leptin_hulanicki_lazy(depth: usize) -> Result<Self> {
        if depth == 0 || depth > LH_MAX_LAZY_DEPTH {
            return invalid(format!("leptin_hulanicki depth must be in 1..={LH_MAX_LAZY_DEPTH}"));
        }
        let law = Law::LeptinHulanicki { depth };
        Ok(Self::assemble(format!("leptin_hulanicki({depth})"), law, depth, &ChainOptions::default()))
    }

    fn assemble(name: String, law: Law, depth: usize, opts: &ChainOptions) -> Self {
        let levels = (1..=depth)
            .map(|d| {
                let order = law.order(d);
                let enumeration = (order <= opts.cap).then(|| Arc::new(Enumeration::build(&law, d)));
                Level { depth: d, order, enumeration }
            })
            .collect();
        Self { name, law: Arc::new(law), levels, haar: opts.haar }
    }

    pub fn with_haar(mut self, haar: Haar) -> Self {
        self.haar = haar;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn haar(&self) -> Haar {
        self.haar
    }

    pub fn levels(&self) -> usize {
        self.levels.len()
    }

    fn level(&self, level: usize) -> &Level {
        assert!(level >= 1 && level <= self.levels.len(), "level {level} out of range");
        &self.levels[level - 1]
    }

    pub fn order(&self, level: usize) -> u128 {
        self.level(level).order
    }

    /// `[K_{level+1} : K_level]`.
    pub fn index(&self, level: usize) -> u128 {
        self.order(level + 1) / self.order(level)
    }

    pub fn indices(&self) -> Vec<u128> {
        (1..self.levels()).map(|i| self.index(i)).collect()
    }

    pub fn identity(&self) -> Elem {
        Elem(0)
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.law.mul(a.0, b.0))
    }

    pub fn inv(&self, a: Elem) -> Elem {
        Elem(self.law.inv(a.0))
    }

    pub fn pow(&self, a: Elem, n: u64) -> Elem {
        let mut acc = self.identity();
        let mut base = a;
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    /// The elements of the cyclic subgroup generated by `a`, starting at the identity.
    pub fn cyclic_subgroup(&self, a: Elem) -> Vec<Elem> {
        let mut out = vec![self.identity()];
        let mut cur = a;
        while cur != self.identity() {
            out.push(cur);
            cur = self.mul(cur, a);
        }
        out
    }

    /// Smallest level containing `a`.
    pub fn level_of(&self, a: Elem) -> usize {
        let d = self.law.intrinsic_level(a.0);
        self.levels.iter().position(|l| l.depth >= d).map(|i| i + 1).unwrap_or(self.levels.len() + 1)
    }

    pub fn contains(&self, level: usize, a: Elem) -> bool {
        self.level_of(a) <= level
    }

    pub fn is_enumerable(&self, level: usize) -> bool {
        self.level(level).enumeration.is_some()
    }

    fn enumeration(&self, level: usize) -> Result<&Enumeration> {
        self.level(level)
            .enumeration
            .as_deref()
            .ok_or_else(|| Error::Enumeration { chain: self.name.clone(), level })
    }

    /// Elements of `K_level` in enumeration order.
    pub fn elements(&self, level: usize) -> Result<&[Elem]> {
        Ok(&self.enumeration(level)?.elems)
    }

    pub fn position(&self, level: usize, a: Elem) -> Result<Option<usize>> {
        Ok(self.enumeration(level)?.position(a))
    }

    /// Product of the elements at positions `i` and `j` of `K_level`, as a position.
    pub fn mul_pos(&self, level: usize, i: usize, j: usize) -> Result<usize> {
        let en = self.enumeration(level)?;
        let n = en.elems.len();
        Ok(match &en.table {
            Some(t) => t[i * n + j] as usize,
            None => en
                .position(self.mul(en.elems[i], en.elems[j]))
                .expect("level closed under multiplication"),
        })
    }

    /// Row-major Cayley table of `K_level` in positions, when it is small
    /// enough to be stored.
    pub fn mul_table(&self, level: usize) -> Result<Option<&[u32]>> {
        Ok(self.enumeration(level)?.table.as_deref())
    }

    pub fn inv_pos(&self, level: usize, i: usize) -> Result<usize> {
        Ok(self.enumeration(level)?.inverse[i] as usize)
    }

    pub fn random_element<R: Rng + ?Sized>(&self, level: usize, rng: &mut R) -> Elem {
        self.law.random(self.level(level).depth, rng)
    }

    /// Canonical generators of the top level.
    pub fn generators(&self) -> Vec<Elem> {
        self.law.generators(self.levels.last().unwrap().depth)
    }

    /// Canonical generators of `K_level`.
    pub fn generators_of(&self, level: usize) -> Vec<Elem> {
        self.law.generators(self.level(level).depth)
    }

    /// Factor orders when this is a cyclic sum.
    pub fn cyclic_orders(&self) -> Option<&[u64]> {
        match &*self.law {
            Law::CyclicSum { orders, .. } => Some(orders),
            _ => None,
        }
    }

    /// Exponents `m_k` with `a = x_1^{m_1} x_2^{m_2} ...` for cyclic sums.
    pub fn cyclic_digits(&self, a: Elem) -> Option<Vec<u64>> {
        let orders = self.cyclic_orders()?;
        let mut rest = a.0;
        Some(
            orders
                .iter()
                .map(|&n| {
                    let m = rest % n as u128;
                    rest /= n as u128;
                    m as u64
                })
                .collect(),
        )
    }

    /// Element `x_k^{m}` of the `k`-th factor (1-based) of a cyclic sum.
    pub fn cyclic_power(&self, k: usize, m: u64) -> Option<Elem> {
        match &*self.law {
            Law::CyclicSum { orders, radix } if k >= 1 && k <= orders.len() => {
                Some(Elem((m % orders[k - 1]) as u128 * radix[k - 1]))
            }
            _ => None,
        }
    }

    /// Point mass of the Haar measure.
    pub fn point_mass(&self) -> f64 {
        match self.haar {
            Haar::Normalized => 1.0 / self.order(1) as f64,
            Haar::Counting => 1.0,
        }
    }

    pub fn point_mass_exact(&self) -> BigRational {
        match self.haar {
            Haar::Normalized => BigRational::new(BigInt::one(), BigInt::from(self.order(1))),
            Haar::Counting => BigRational::one(),
        }
    }

    /// Greedy sub-chain with non-decreasing indices. Keeps `K_1` and the top level.
    pub fn standardize(&self) -> Result<Self> {
        if self.levels() < 2 {
            return invalid("standardize needs at least two levels");
        }
        let selected = standard_selection(&self.indices());
        let mut out = self.clone();
        out.levels = selected.iter().map(|&l| self.levels[l - 1].clone()).collect();
        if out.levels.len() != self.levels.len() {
            out.name = format!("{}/std", self.name);
        }
        Ok(out)
    }

    /// True when consecutive indices are non-decreasing.
    pub fn is_standard(&self) -> bool {
        self.indices().windows(2).all(|w| w[0] <= w[1])
    }
}

/// Selected levels (1-based) of a greedy standard decomposition for a chain
/// with the given indices. The first and last level are always kept.
pub fn standard_selection(indices: &[u128]) -> Vec<usize> {
    let mut selected = vec![1usize];
    let mut last_index: u128 = 0;
    let mut running: u128 = 1;
    for (i, &idx) in indices.iter().enumerate() {
        running = running.saturating_mul(idx);
        if running >= last_index {
            selected.push(i + 2);
            last_index = running;
            running = 1;
        }
    }
    if running > 1 {
        // the trailing levels never reached the previous index: merge them
        // into the last selected segment, which only makes it larger
        let top = indices.len() + 1;
        if selected.len() > 1 {
            selected.pop();
        }
        selected.push(top);
    }
    selected
}

/// Measure data of a chain: `mu(K_i)` for each level.
pub trait MeasureModel {
    fn levels(&self) -> usize;
    fn measure(&self, level: usize) -> BigRational;

    /// `(mu(K_1), mu(K_2 \ K_1), mu(K_3 \ K_2), ...)`.
    fn shell_measures(&self) -> Vec<BigRational> {
        let mut out = Vec::with_capacity(self.levels());
        let mut prev = BigRational::zero();
        for i in 1..=self.levels() {
            let m = self.measure(i);
            out.push(&m - &prev);
            prev = m;
        }
        out
    }

    fn shell_measures_f64(&self) -> Vec<f64> {
        self.shell_measures().iter().map(rational_to_f64).collect()
    }
}

impl MeasureModel for GroupChain {
    fn levels(&self) -> usize {
        GroupChain::levels(self)
    }

    fn measure(&self, level: usize) -> BigRational {
        self.point_mass_exact() * BigRational::from_integer(BigInt::from(self.order(level)))
    }
}

/// Measure-only model of a chain: indices `[K_{i+1}:K_i]` and `mu(K_1) = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShellModel {
    indices: Vec<u64>,
    /// Declared supremum of the indices beyond the materialized prefix;
    /// `None` means unbounded.
    tail_bound: Option<u64>,
}

impl ShellModel {
    pub fn new(indices: Vec<u64>, tail_bound: Option<u64>) -> Result<Self> {
        if let Some(i) = indices.iter().position(|&p| p < 2) {
            return invalid(format!("index at position {} is below 2", i + 1));
        }
        if matches!(tail_bound, Some(m) if m < 2) {
            return invalid("tail bound must be at least 2");
        }
        Ok(Self { indices, tail_bound })
    }

    /// All indices equal to `p`, `levels` levels materialized.
    pub fn constant(p: u64, levels: usize) -> Result<Self> {
        Self::new(vec![p; levels.saturating_sub(1)], Some(p))
    }

    pub fn indices(&self) -> &[u64] {
        &self.indices
    }

    /// `sup_n [K_{n+1}:K_n]` when finite.
    pub fn index_bound(&self) -> Option<u64> {
        let tail = self.tail_bound?;
        Some(self.indices.iter().copied().fold(tail, u64::max))
    }

    pub fn has_bounded_index(&self) -> bool {
        self.index_bound().is_some()
    }

    pub fn is_standard(&self) -> bool {
        self.indices.windows(2).all(|w| w[0] <= w[1])
    }
}

impl MeasureModel for ShellModel {
    fn levels(&self) -> usize {
        self.indices.len() + 1
    }

    fn measure(&self, level: usize) -> BigRational {
        assert!(level >= 1 && level <= self.levels());
        let prod = self.indices[..level - 1].iter().fold(BigInt::one(), |acc, &p| acc * p);
        BigRational::from_integer(prod)
    }
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::INFINITY)
}
