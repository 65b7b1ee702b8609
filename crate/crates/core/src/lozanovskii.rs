//! Lozanovskii factorization of a 1-unconditional norm.
//!
//! The maximizer `z` of `Σ log z_i` over the unit ball of `Z` gives
//! `τ = z` and `σ = 1/(n z)`. At the optimum the gradient `1/z` is `n`
//! times a norming functional of `z`, so `‖σ‖_{Z*} = 1`; this is checked,
//! not assumed.
//!
//! The maximizer has a closed form for every family here. For weights
//! `c_i > 0`, `max Σ c_i log z_i` over `B_{ℓ_p}` is `z_i = (c_i / Σ c)^{1/p}`;
//! weighted spaces rescale coordinatewise; and over `(Σ X_k)_E` the problem
//! splits into one problem per block plus one on `E` with the block weight
//! totals. A generic log-coordinate ascent is kept as an independent route.

use serde::Serialize;

use crate::error::{GeoError, Result};
use crate::exponent::Exponent;
use crate::norm::Norm;
use crate::space::{Family, NormedSpace};

/// Deviation allowed between `‖τ‖_Z`, `‖σ‖_{Z*}` and one.
pub const NORM_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Norms {
    pub tau: f64,
    pub sigma: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Checks {
    /// `max_i |τ_i σ_i − 1/n|`.
    pub product_residual: f64,
    /// `(‖Σ α_k e_k*‖_{E*}, ‖Σ β_k e_k‖_E)`, present for block factorizations.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eq2_11: Option<(f64, f64)>,
    /// `min_k α_k β_k n / n_k`; at least one.
    pub eq2_12: f64,
    /// `Σ n_k log(α_k β_k / n_k) + n log n`; nonnegative.
    pub eq2_13: f64,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LozanovskiiFactorization {
    pub z: Vec<f64>,
    pub tau: Vec<f64>,
    pub sigma: Vec<f64>,
    pub block_dims: Vec<usize>,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub norms: Norms,
    pub checks: Checks,
}

/// `argmax Σ c_i log z_i` over the unit ball, in closed form.
pub fn weighted_log_maximizer(space: &NormedSpace, c: &[f64]) -> Vec<f64> {
    assert_eq!(c.len(), space.dim());
    let total: f64 = c.iter().sum();
    match space.family() {
        Family::Lp { p } => lp_maximizer(*p, c, total),
        Family::WeightedLp { p, weights } => {
            lp_maximizer(*p, c, total).iter().zip(weights).map(|(u, w)| u / w).collect()
        }
        Family::Sum { outer, parts } => {
            let mut block_c = Vec::with_capacity(parts.len());
            let mut inner = Vec::with_capacity(parts.len());
            let mut off = 0;
            for part in parts {
                let ck = &c[off..off + part.dim()];
                block_c.push(ck.iter().sum::<f64>());
                inner.push(weighted_log_maximizer(part, ck));
                off += part.dim();
            }
            let b = weighted_log_maximizer(outer, &block_c);
            inner.into_iter().zip(b).flat_map(|(zk, bk)| zk.into_iter().map(move |v| v * bk)).collect()
        }
    }
}

fn lp_maximizer(p: Exponent, c: &[f64], total: f64) -> Vec<f64> {
    match p {
        Exponent::Infinity => vec![1.0; c.len()],
        Exponent::Finite(p) => c.iter().map(|ci| (ci / total).powf(1.0 / p)).collect(),
    }
}

#[derive(Clone, Copy, Debug)]
pub struct AscentOptions {
    pub max_iter: usize,
    pub tol: f64,
}

impl Default for AscentOptions {
    fn default() -> Self {
        AscentOptions { max_iter: 20_000, tol: 1e-10 }
    }
}

/// Generic route: ascent on `f(y) = Σ y_i − n log ‖e^y‖` with Armijo
/// backtracking, started from the normalized uniform vector. Works for any
/// norm with a gradient; on kinks it typically stagnates and reports so.
pub fn log_product_ascent(norm: &dyn Norm, opts: &AscentOptions) -> Result<Vec<f64>> {
    let n = norm.dim();
    let nf = n as f64;
    let f = |y: &[f64]| -> f64 {
        let z: Vec<f64> = y.iter().map(|v| v.exp()).collect();
        y.iter().sum::<f64>() - nf * norm.eval(&z).ln()
    };
    let normalize = |y: Vec<f64>| -> Vec<f64> {
        let z: Vec<f64> = y.iter().map(|v| v.exp()).collect();
        let s = norm.eval(&z).ln();
        y.iter().map(|v| (v - s).max(1e-14_f64.ln())).collect()
    };
    let residual = |y: &[f64]| -> f64 {
        let sigma: Vec<f64> = y.iter().map(|v| 1.0 / (nf * v.exp())).collect();
        (norm.dual_eval(&sigma) - 1.0).abs()
    };
    let mut y = normalize(vec![0.0; n]);
    let mut fy = f(&y);
    let mut step: f64 = 1.0;
    for _ in 0..opts.max_iter {
        let z: Vec<f64> = y.iter().map(|v| v.exp()).collect();
        let psi = norm.support_functional(&z);
        // ∂f/∂y_i = 1 − n ψ_i z_i / ‖z‖, with ‖z‖ = 1 after normalization
        let g: Vec<f64> = psi.iter().zip(&z).map(|(p, zi)| 1.0 - nf * p * zi).collect();
        let gg: f64 = g.iter().map(|v| v * v).sum();
        if gg.sqrt() < opts.tol * nf {
            break;
        }
        let mut accepted = false;
        step = (step * 2.0).min(1.0);
        while step > 1e-16 {
            let cand: Vec<f64> = y.iter().zip(&g).map(|(a, b)| a + step * b).collect();
            let fc = f(&cand);
            if fc >= fy + 1e-4 * step * gg {
                y = normalize(cand);
                fy = f(&y);
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    let r = residual(&y);
    let z: Vec<f64> = y.iter().map(|v| v.exp()).collect();
    if r > opts.tol.max(1e-8) {
        return Err(GeoError::Stagnated { residual: r, best: z });
    }
    Ok(z)
}

fn assemble(space: &NormedSpace, z: Vec<f64>, outer: Option<&NormedSpace>) -> LozanovskiiFactorization {
    let n = z.len();
    let nf = n as f64;
    let sigma: Vec<f64> = z.iter().map(|v| 1.0 / (nf * v)).collect();
    let block_dims = space.block_dims();
    let mut alpha = Vec::with_capacity(block_dims.len());
    let mut beta = Vec::with_capacity(block_dims.len());
    let mut off = 0;
    for &d in &block_dims {
        alpha.push(z[off..off + d].iter().sum::<f64>());
        beta.push(sigma[off..off + d].iter().fold(0.0_f64, |m, v| m.max(*v)));
        off += d;
    }
    let norms = Norms { tau: space.eval(&z), sigma: space.dual_eval(&sigma) };
    let product_residual = z.iter().zip(&sigma).map(|(t, s)| (t * s - 1.0 / nf).abs()).fold(0.0, f64::max);
    let eq2_11 = outer.map(|e| (e.dual_eval(&alpha), e.eval(&beta)));
    let eq2_12 = block_dims
        .iter()
        .zip(alpha.iter().zip(&beta))
        .map(|(&d, (a, b))| a * b * nf / d as f64)
        .fold(f64::INFINITY, f64::min);
    let eq2_13 = block_dims
        .iter()
        .zip(alpha.iter().zip(&beta))
        .map(|(&d, (a, b))| d as f64 * (a.ln() + b.ln() - (d as f64).ln()))
        .sum::<f64>()
        + nf * nf.ln();
    let ok = product_residual <= 1e-10
        && (norms.tau - 1.0).abs() <= NORM_TOL
        && (norms.sigma - 1.0).abs() <= NORM_TOL
        && eq2_11.is_none_or(|(a, b)| (a - 1.0).abs() <= NORM_TOL && (b - 1.0).abs() <= NORM_TOL)
        && eq2_12 * (1.0 + 1e-8) >= 1.0
        && eq2_13 >= (1.0 - 1e-8_f64).ln();
    LozanovskiiFactorization {
        tau: z.clone(),
        z,
        sigma,
        block_dims,
        alpha,
        beta,
        norms,
        checks: Checks { product_residual, eq2_11, eq2_12, eq2_13, ok },
    }
}

fn validated(f: LozanovskiiFactorization) -> Result<LozanovskiiFactorization> {
    if f.checks.ok {
        Ok(f)
    } else {
        Err(GeoError::Stagnated { residual: (f.norms.sigma - 1.0).abs(), best: f.z })
    }
}

/// Factorization of `Z`; blocks (for `α`, `β`) are the summands when `Z`
/// is a direct sum and the whole space otherwise.
pub fn lozanovskii_factor(space: &NormedSpace) -> Result<LozanovskiiFactorization> {
    let z = weighted_log_maximizer(space, &vec![1.0; space.dim()]);
    validated(assemble(space, z, None))
}

/// `α`, `β` for `E` and block sizes `n_k`, from `Z = (Σ ℓ_1^{n_k})_{E*}`.
/// `E` is normalized first.
pub fn alpha_beta(outer: &NormedSpace, block_dims: &[usize]) -> Result<LozanovskiiFactorization> {
    if block_dims.len() != outer.dim() {
        return Err(GeoError::InvalidSpace(format!(
            "{} block sizes for an outer space of dimension {}",
            block_dims.len(),
            outer.dim()
        )));
    }
    if block_dims.contains(&0) {
        return Err(GeoError::InvalidSpace("block sizes must be positive".into()));
    }
    let e = outer.normalized();
    let z_space =
        NormedSpace::sum(e.dual(), block_dims.iter().map(|&d| NormedSpace::lp(d, Exponent::ONE)).collect())?;
    let z = weighted_log_maximizer(&z_space, &vec![1.0; z_space.dim()]);
    validated(assemble(&z_space, z, Some(&e)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn lr_closed_form() {
        for r in [1.0, 1.5, 2.0, 4.0] {
            let n = 5;
            let f = lozanovskii_factor(&NormedSpace::lp(n, Exponent::new(r).unwrap())).unwrap();
            let expect = (n as f64).powf(-1.0 / r);
            assert!(f.z.iter().all(|v| (v - expect).abs() < 1e-14));
            assert!((f.norms.tau - 1.0).abs() < 1e-12 && (f.norms.sigma - 1.0).abs() < 1e-12);
        }
        let f = lozanovskii_factor(&NormedSpace::lp(4, Exponent::ONE)).unwrap();
        assert!(close(&f.sigma, &[1.0; 4], 1e-15));
    }

    #[test]
    fn weighted_l1_closed_form() {
        let w = vec![0.5, 2.0, 3.0];
        let f = lozanovskii_factor(&NormedSpace::weighted_lp(Exponent::ONE, w.clone()).unwrap()).unwrap();
        let z: Vec<f64> = w.iter().map(|wi| 1.0 / (3.0 * wi)).collect();
        assert!(close(&f.z, &z, 1e-15));
        assert!(close(&f.sigma, &w, 1e-14));
    }

    #[test]
    fn linf_outer_gives_block_fractions() {
        let f = alpha_beta(&NormedSpace::lp(3, Exponent::INF), &[2, 3, 1]).unwrap();
        assert!(close(&f.alpha, &[2.0 / 6.0, 3.0 / 6.0, 1.0 / 6.0], 1e-15));
        assert!(close(&f.beta, &[1.0; 3], 1e-15));
        assert!(f.checks.eq2_13.abs() < 1e-12);
    }

    #[test]
    fn single_block_is_tight() {
        let f = alpha_beta(&NormedSpace::lp(1, Exponent::TWO), &[4]).unwrap();
        assert!((f.alpha[0] * f.beta[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn mixed_outer_satisfies_checks() {
        let f = alpha_beta(&NormedSpace::lp(2, Exponent::TWO), &[1, 2]).unwrap();
        assert!(f.checks.ok);
        let (a, b) = f.checks.eq2_11.unwrap();
        assert!((a - 1.0).abs() < 1e-12 && (b - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ascent_matches_closed_form_on_smooth_norms() {
        let spaces = [
            NormedSpace::lp(4, Exponent::new(3.0).unwrap()),
            NormedSpace::weighted_lp(Exponent::new(1.5).unwrap(), vec![1.0, 2.0, 0.7]).unwrap(),
            NormedSpace::sum(
                NormedSpace::lp(2, Exponent::TWO),
                vec![NormedSpace::lp(2, Exponent::new(4.0).unwrap()), NormedSpace::lp(3, Exponent::TWO)],
            )
            .unwrap(),
        ];
        for s in &spaces {
            let exact = lozanovskii_factor(s).unwrap();
            let z = log_product_ascent(s, &AscentOptions::default()).unwrap();
            assert!(close(&z, &exact.z, 1e-6), "{s}: {z:?} vs {:?}", exact.z);
        }
    }

    #[test]
    fn rejects_bad_block_sizes() {
        assert!(alpha_beta(&NormedSpace::lp(2, Exponent::TWO), &[1]).is_err());
        assert!(alpha_beta(&NormedSpace::lp(2, Exponent::TWO), &[1, 0]).is_err());
    }
}
