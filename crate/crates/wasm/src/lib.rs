//! Browser bindings: unit-ball outlines, Santaló curves and Lozanovskii
//! weights for the static page in `www/`.

use banachgeo::lozanovskii::{alpha_beta, lozanovskii_factor};
use banachgeo::volume::santalo_product;
use banachgeo::{Exponent, McConfig, Norm, NormedSpace, SpaceSpec};
use wasm_bindgen::prelude::*;

fn parse_space(spec: &str) -> Result<NormedSpace, String> {
    let value: serde_json::Value = serde_json::from_str(spec).map_err(|e| e.to_string())?;
    SpaceSpec::from_json(&value, "space").and_then(|s| s.build()).map_err(|e| e.to_string())
}

/// Boundary of the unit ball (or of its polar with `dual`) of a
/// two-dimensional space, as interleaved `x, y` coordinates.
#[wasm_bindgen]
pub fn unit_ball_outline(spec: &str, points: u32, dual: bool) -> Result<Vec<f64>, String> {
    let space = parse_space(spec)?;
    if space.dim() != 2 {
        return Err(format!("outline needs a two-dimensional space, got dimension {}", space.dim()));
    }
    let points = points.max(8);
    let mut out = Vec::with_capacity(2 * points as usize);
    for i in 0..points {
        let t = std::f64::consts::TAU * i as f64 / points as f64;
        let u = [t.cos(), t.sin()];
        let r = if dual { space.dual_eval(&u) } else { space.eval(&u) };
        out.push(u[0] / r);
        out.push(u[1] / r);
    }
    Ok(out)
}

/// `n (|B| |B°|)^{1/n}` for `ℓ_p^n`, `n = 1..=max_n`, from the exact
/// volume formulas.
#[wasm_bindgen]
pub fn santalo_curve(p: f64, max_n: u32) -> Result<Vec<f64>, String> {
    let p = Exponent::new(p).map_err(|e| e.to_string())?;
    let mc = McConfig::new(0, 0);
    (1..=max_n as usize)
        .map(|n| santalo_product(&NormedSpace::lp(n, p), &mc).map(|o| o.value).map_err(|e| e.to_string()))
        .collect()
}

/// Lozanovskii factorization as JSON: of `spec` itself when `blocks` is
/// empty, else the block weights `α, β` of `(Σ ℓ_1^{n_k})` over `spec`.
#[wasm_bindgen]
pub fn lozanovskii_weights(spec: &str, blocks: Vec<u32>) -> Result<String, String> {
    let space = parse_space(spec)?;
    let f = if blocks.is_empty() {
        lozanovskii_factor(&space)
    } else {
        if blocks.len() != space.dim() || blocks.contains(&0) {
            return Err(format!("need {} positive block dimensions", space.dim()));
        }
        let dims: Vec<usize> = blocks.iter().map(|&b| b as usize).collect();
        alpha_beta(&space, &dims)
    }
    .map_err(|e| e.to_string())?;
    serde_json::to_string(&f).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_outline_touches_the_corners() {
        let pts = unit_ball_outline(r#"{"family":"lp","dim":2,"p":"inf"}"#, 8, false).unwrap();
        assert!((pts[2] - 1.0).abs() < 1e-12 && (pts[3] - 1.0).abs() < 1e-12);
        let polar = unit_ball_outline(r#"{"family":"lp","dim":2,"p":"inf"}"#, 8, true).unwrap();
        assert!((polar[2] - 0.5).abs() < 1e-12);
        assert!(unit_ball_outline(r#"{"family":"lp","dim":3,"p":2}"#, 8, false).is_err());
    }

    #[test]
    fn santalo_curve_of_the_disc() {
        let c = santalo_curve(2.0, 2).unwrap();
        assert!((c[1] - 2.0 * std::f64::consts::PI).abs() < 1e-9);
        assert_eq!(santalo_curve(1.0, 4).unwrap(), santalo_curve(f64::INFINITY, 4).unwrap());
    }

    #[test]
    fn uniform_weights_for_linf() {
        let json = lozanovskii_weights(r#"{"family":"lp","dim":2,"p":"inf"}"#, vec![1, 3]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert!((v["alpha"][1].as_f64().unwrap() - 0.75).abs() < 1e-9);
        assert!(lozanovskii_weights(r#"{"family":"lp","dim":2,"p":2}"#, vec![1]).is_err());
    }
}
