//! Convexity and concavity constants of the `ℓ_s` lattices.
//!
//! For `ℓ_s^m` these are `K^r = max(1, m^{1/s − 1/r})` and
//! `K_q = max(1, m^{1/q − 1/s})`. Weighted `ℓ_s` is lattice-isometric to
//! `ℓ_s` and has the same constants. Other lattices have no closed form and
//! return `None`.

use crate::exponent::Exponent;
use crate::space::{Family, NormedSpace};

fn lattice_exponent(e: &NormedSpace) -> Option<Exponent> {
    match e.family() {
        Family::Lp { p } | Family::WeightedLp { p, .. } => Some(*p),
        Family::Sum { .. } => None,
    }
}

/// `K^r(E)`, the `r`-convexity constant.
pub fn convexity_constant(e: &NormedSpace, r: Exponent) -> Option<f64> {
    let s = lattice_exponent(e)?;
    Some((e.dim() as f64).powf(s.recip() - r.recip()).max(1.0))
}

/// `K_q(E)`, the `q`-concavity constant.
pub fn concavity_constant(e: &NormedSpace, q: Exponent) -> Option<f64> {
    let s = lattice_exponent(e)?;
    Some((e.dim() as f64).powf(q.recip() - s.recip()).max(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lp_anchors() {
        let e = NormedSpace::lp(4, Exponent::TWO);
        assert_eq!(convexity_constant(&e, Exponent::ONE), Some(1.0));
        assert!((convexity_constant(&e, Exponent::INF).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(concavity_constant(&e, Exponent::INF), Some(1.0));
        assert!((concavity_constant(&e, Exponent::ONE).unwrap() - 2.0).abs() < 1e-12);
        let s = NormedSpace::sum(e.clone(), vec![e.clone(); 4]).unwrap();
        assert_eq!(convexity_constant(&s, Exponent::ONE), None);
    }
}
