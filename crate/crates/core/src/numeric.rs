//! Small numerical kernels shared by the solvers: compensated summation,
//! golden-section search and Riemann zeta tails.

/// Neumaier-compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

pub fn kahan_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut acc = KahanSum::new();
    for v in values {
        acc.add(v);
    }
    acc.value()
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Maximizes a unimodal function on `[lo, hi]`; returns `(argmax, max)`.
pub fn golden_max<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, rel_tol: f64) -> (f64, f64) {
    golden_max_tol(f, lo, hi, 0.0, rel_tol)
}

/// Golden-section maximization stopping once the bracket is shorter than
/// `abs_tol + rel_tol * (|lo| + |hi|)`.
pub fn golden_max_tol<F: Fn(f64) -> f64>(
    f: F,
    mut lo: f64,
    mut hi: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> (f64, f64) {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..400 {
        if (hi - lo).abs() <= abs_tol + rel_tol * (lo.abs() + hi.abs()) {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    let mid = 0.5 * (lo + hi);
    let fm = f(mid);
    [(x1, f1), (x2, f2), (mid, fm)]
        .into_iter()
        .fold((mid, fm), |best, c| if c.1 > best.1 { c } else { best })
}

/// Minimizes a unimodal function on `[lo, hi]`; returns `(argmin, min)`.
pub fn golden_min<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, rel_tol: f64) -> (f64, f64) {
    let (x, v) = golden_max(|x| -f(x), lo, hi, rel_tol);
    (x, -v)
}

/// `sum_{k > K} k^{-s}` for `s > 1`.
///
/// Direct summation up to a cutoff, then Euler–Maclaurin with four
/// Bernoulli corrections. Accurate to roughly machine precision.
pub fn zeta_tail(s: f64, k: u64) -> f64 {
    assert!(s > 1.0, "zeta_tail needs s > 1");
    let start = k + 1;
    let cutoff = start.max((2.0 * s).ceil() as u64 + 64);
    let mut acc = KahanSum::new();
    for j in start..cutoff {
        acc.add((j as f64).powf(-s));
    }
    let n = cutoff as f64;
    let f = n.powf(-s);
    // integral + f(N)/2 - B2/2! f'(N) - B4/4! f'''(N) - ...
    let mut tail = n.powf(1.0 - s) / (s - 1.0) + 0.5 * f;
    let bern = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0];
    let mut fact = 1.0;
    for (j, b) in bern.iter().enumerate() {
        let order = 2 * j + 1;
        fact *= ((2 * j + 1) * (2 * j + 2)) as f64;
        // derivative of x^{-s} of odd order `order`: (-1)^order s(s+1)...(s+order-1) x^{-s-order}
        let mut rising = 1.0;
        for i in 0..order {
            rising *= s + i as f64;
        }
        let deriv = -rising * n.powf(-s - order as f64);
        tail -= b / fact * deriv;
    }
    acc.add(tail);
    acc.value()
}

/// Riemann zeta at `s > 1`.
pub fn zeta(s: f64) -> f64 {
    zeta_tail(s, 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_two_is_basel() {
        let pi2 = std::f64::consts::PI.powi(2);
        assert!((zeta(2.0) - pi2 / 6.0).abs() < 1e-14);
        assert!((zeta(4.0) - pi2 * pi2 / 90.0).abs() < 1e-14);
    }

    #[test]
    fn zeta_tail_matches_brute_force() {
        for &(s, k) in &[(1.5, 3u64), (2.7, 10), (8.0, 0), (24.0, 2)] {
            let brute = kahan_sum((k + 1..2_000_000).map(|j| (j as f64).powf(-s)));
            // remaining tail of the brute-force sum, by integral bound
            let rest = (2_000_000f64).powf(1.0 - s) / (s - 1.0);
            assert!((zeta_tail(s, k) - brute - rest).abs() < 1e-9 * brute.max(1e-300) + 1e-12, "s={s} k={k}");
        }
    }

    #[test]
    fn golden_search_finds_parabola_vertex() {
        let (x, v) = golden_max(|x| -(x - 2.0).powi(2) + 3.0, 0.0, 10.0, 1e-12);
        assert!((x - 2.0).abs() < 1e-6);
        assert!((v - 3.0).abs() < 1e-12);
    }

    #[test]
    fn kahan_beats_naive_on_cancellation() {
        let vals = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(kahan_sum(vals), 2.0);
    }
}
