use lab_core::convalg::{convolve, spectral_radius};
use lab_core::norms::{l1_norm, luxemburg_norm, orlicz_norm};
use lab_core::weights::{grs_sequence, sharpen, sharpen_p};
use lab_core::young::{catalog, young_inequality_margin};
use lab_core::{FinSuppFun, GroupChain, Weight};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn chains() -> Vec<GroupChain> {
    vec![
        GroupChain::cyclic_sum(&[2, 2, 3], 3).unwrap(),
        GroupChain::cyclic_sum(&[3, 2], 2).unwrap(),
        GroupChain::leptin_hulanicki(1).unwrap(),
        GroupChain::leptin_hulanicki(2).unwrap(),
    ]
}

fn element(chain: &GroupChain, seed: u64) -> FinSuppFun {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let level = chain.levels();
    let support = (!chain.is_enumerable(level) || chain.order(level) > 64).then_some(6);
    FinSuppFun::random(chain, level, support, &mut rng).unwrap()
}

fn radial(levels: usize, steps: &[f64]) -> Weight {
    let mut v = vec![1.0];
    for i in 1..levels {
        v.push(v[i - 1] * (1.0 + steps[i % steps.len()]));
    }
    Weight::radial(v).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn convolution_is_associative_and_adjoint_reverses(ci in 0usize..4, s in any::<u64>()) {
        let chain = &chains()[ci];
        let (f, g, h) = (element(chain, s), element(chain, s ^ 1), element(chain, s ^ 2));
        let left = convolve(&convolve(&f, &g).unwrap(), &h).unwrap();
        let right = convolve(&f, &convolve(&g, &h).unwrap()).unwrap();
        let scale = left.l1().max(1.0);
        prop_assert!(l1_norm(&left.sub(&right).unwrap(), None).unwrap() <= 1e-12 * scale);
        let a = convolve(&f, &g).unwrap().adjoint();
        let b = convolve(&g.adjoint(), &f.adjoint()).unwrap();
        prop_assert!(a.max_abs_diff(&b) <= 1e-12 * scale);
    }

    #[test]
    fn weighted_l1_is_submultiplicative(ci in 0usize..4, s in any::<u64>(), steps in prop::collection::vec(0.0f64..3.0, 1..4)) {
        let chain = &chains()[ci];
        let omega = radial(chain.levels(), &steps);
        let (f, g) = (element(chain, s), element(chain, s.wrapping_add(7)));
        let fg = convolve(&f, &g).unwrap();
        for w in [None, Some(&omega)] {
            let lhs = l1_norm(&fg, w).unwrap();
            let rhs = l1_norm(&f, w).unwrap() * l1_norm(&g, w).unwrap();
            prop_assert!(lhs <= rhs * (1.0 + 1e-12));
        }
    }

    #[test]
    fn spectral_radius_below_l1_norm(ci in 0usize..3, s in any::<u64>()) {
        let chain = &chains()[ci];
        let f = element(chain, s);
        prop_assert!(spectral_radius(&f).unwrap() <= f.l1() * (1.0 + 1e-12));
    }

    #[test]
    fn luxemburg_orlicz_sandwich(ci in 0usize..4, s in any::<u64>(), yi in 0usize..5, scale in 0.01f64..50.0) {
        let chain = &chains()[ci];
        let phi = &catalog()[yi].1;
        let f = element(chain, s).scale(num_complex::Complex64::new(scale, 0.0));
        let lux = luxemburg_norm(&f, phi, None).unwrap();
        let orl = orlicz_norm(&f, phi, None).unwrap();
        prop_assert!(orl >= lux * (1.0 - 1e-9) && orl <= 2.0 * lux * (1.0 + 1e-9), "{lux} {orl}");
    }

    #[test]
    fn young_inequality_holds(yi in 0usize..5, x in 0.0f64..20.0, y in 0.0f64..20.0) {
        let phi = &catalog()[yi].1;
        let margin = young_inequality_margin(phi, x, y).unwrap();
        prop_assert!(margin >= -1e-9 * (1.0 + x * y), "{margin}");
    }

    #[test]
    fn sharpened_weights_dominate_and_satisfy_grs(ci in 0usize..3, steps in prop::collection::vec(0.0f64..3.0, 1..4), p in 1.0f64..4.0) {
        let chain = &chains()[ci];
        let omega = radial(chain.levels(), &steps);
        let s = sharpen(&omega, chain).unwrap();
        let sp = sharpen_p(&omega, chain, p).unwrap();
        let top = chain.levels();
        for &x in chain.elements(top).unwrap() {
            let (a, b, c) = (omega.eval(chain, x).unwrap(), s.eval(chain, x).unwrap(), sp.eval(chain, x).unwrap());
            prop_assert!(a <= b && b <= c);
        }
        for x in chain.generators() {
            prop_assert!(grs_sequence(&sp, chain, x, 300).unwrap().contained());
        }
    }
}
