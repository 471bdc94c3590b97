//! Browser bindings for three interactive views: a plateau function of the
//! smooth calculus, a Gelfand sequence against the exact spectral radius, and
//! the sharpened weights on a chosen chain. Every export returns a JSON string.

use lab_core::convalg::gelfand_sequences;
use lab_core::experiments::YoungSpec;
use lab_core::funcalc::plateau;
use lab_core::weights::{grs_sequence, sharpen, sharpen_p};
use lab_core::{FinSuppFun, GroupChain, Norm, Weight};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Largest level order the demo will touch.
const MAX_ORDER: u128 = 4096;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>, String> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| format!("{what}: cannot parse {s:?}")))
        .collect()
}

fn chain_from(orders: &str) -> Result<GroupChain, String> {
    let orders: Vec<u64> = parse_list(orders, "orders")?;
    let chain = GroupChain::cyclic_sum(&orders, orders.len()).map_err(err)?;
    if chain.order(chain.levels()) > MAX_ORDER {
        return Err(format!("top level has {} elements, the demo allows {MAX_ORDER}", chain.order(chain.levels())));
    }
    Ok(chain)
}

/// Samples of a plateau `φ` on `[0, 2π)` with its stored range and shape check.
#[wasm_bindgen]
pub fn plateau_profile(p: f64, q: f64, eps: f64, gamma: f64, points: usize) -> Result<String, String> {
    let phi = plateau(p, q, eps, gamma).map_err(err)?;
    let check = phi.plateau_check().expect("plateau source");
    let stride = (1usize << 14) / points.clamp(16, 1 << 14);
    let (x, y): (Vec<f64>, Vec<f64>) = phi.profile(stride).into_iter().unzip();
    Ok(json!({
        "x": x,
        "y": y,
        "range": phi.range(),
        "tail_l1": phi.tail_l1(),
        "inside_dev": check.inside_dev,
        "outside_max": check.outside_max,
    })
    .to_string())
}

/// `‖f^{*2^k}‖^{2^{-k}}` in L¹ and in the Orlicz norm weighted by `ω♯_1`, for a
/// seeded random self-adjoint `f` on level `level` of `⊕ C_{orders}`.
/// `young` is a JSON Young-function spec such as `{"kind": "cosh"}`.
#[wasm_bindgen]
pub fn gelfand_curve(orders: &str, level: usize, young: &str, seed: u32, kmax: u32) -> Result<String, String> {
    let chain = chain_from(orders)?;
    if level == 0 || level > chain.levels() {
        return Err(format!("level must lie in 1..={}", chain.levels()));
    }
    let phi = serde_json::from_str::<YoungSpec>(young).map_err(err)?.build().map_err(err)?;
    let omega = sharpen_p(&Weight::trivial(chain.levels()), &chain, 1.0).map_err(err)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed as u64);
    let f = FinSuppFun::random_self_adjoint(&chain, level, None, &mut rng).map_err(err)?;
    let norms = [Norm::L1, Norm::Orlicz { phi, weight: Some(omega) }];
    let reps = gelfand_sequences(&f, &norms, kmax.min(20)).map_err(err)?;
    Ok(json!({
        "radius": reps[0].exact_radius,
        "l1": reps[0].values,
        "orlicz": reps[1].values,
    })
    .to_string())
}

/// Shell values of a radial `ω`, `ω♯` and `ω♯_p`, plus `ω♯_p(x^n)^{1/n}` along
/// the first generator with its certificate `C^{1/n}`.
#[wasm_bindgen]
pub fn weight_shells(orders: &str, values: &str, p: f64, n_max: usize) -> Result<String, String> {
    let chain = chain_from(orders)?;
    let values: Vec<f64> = parse_list(values, "values")?;
    if values.len() < chain.levels() {
        return Err(format!("need {} shell values, got {}", chain.levels(), values.len()));
    }
    let omega = Weight::radial(values).map_err(err)?;
    let sharp = sharpen(&omega, &chain).map_err(err)?;
    let sharp_p = sharpen_p(&omega, &chain, p).map_err(err)?;
    let x = *chain.generators().last().ok_or("chain has no generators")?;
    let grs = grs_sequence(&sharp_p, &chain, x, n_max.clamp(1, 2000)).map_err(err)?;
    let levels = chain.levels();
    Ok(json!({
        "omega": &omega.shell_values().unwrap()[..levels],
        "sharpen": sharp.shell_values(),
        "sharpen_p": sharp_p.shell_values(),
        "grs": grs.values,
        "grs_bound": grs.bounds,
        "order": grs.order,
    })
    .to_string())
}
