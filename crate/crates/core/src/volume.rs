//! Unit-ball volumes: closed forms, seeded Monte Carlo and zonotopes.

use itertools::Itertools;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{GeoError, Result};
use crate::exponent::Exponent;
use crate::norm::Norm;
use crate::operator::LinOperator;
use crate::report::{Observed, Status, Verdict};
use crate::rng::{chunks, par_map, sphere_point, symmetric_unit, Streams, DEFAULT_CHUNK};
use crate::space::NormedSpace;

/// Largest dimension accepted by the Monte Carlo estimators.
pub const MC_DIM_CAP: usize = 12;
pub const MIN_SAMPLES: usize = 10_000;
/// Largest number of column subsets summed by [`zonotope_volume`].
pub const ZONOTOPE_CAP: u128 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum VolumeMethod {
    Exact,
    RadialMc,
    HitOrMiss,
    ZonotopeExact,
}

impl VolumeMethod {
    pub fn tag(self) -> &'static str {
        match self {
            VolumeMethod::Exact => "EXACT",
            VolumeMethod::RadialMc => "RADIAL_MC",
            VolumeMethod::HitOrMiss => "HIT_OR_MISS",
            VolumeMethod::ZonotopeExact => "ZONOTOPE_EXACT",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumeEstimate {
    pub value: f64,
    pub method: VolumeMethod,
    pub samples: u64,
    pub seed: u64,
    pub stderr: f64,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub degenerate: bool,
}

impl VolumeEstimate {
    pub fn exact(value: f64) -> Self {
        VolumeEstimate { value, method: VolumeMethod::Exact, samples: 0, seed: 0, stderr: 0.0, degenerate: false }
    }

    pub fn relative_stderr(&self) -> f64 {
        if self.value > 0.0 { self.stderr / self.value } else { f64::INFINITY }
    }

    /// Usable in a verification verdict.
    pub fn is_precise(&self) -> bool {
        self.relative_stderr() < 0.05
    }

    pub fn observed(&self) -> Observed {
        Observed::estimate(self.value, self.stderr, self.method.tag())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub samples: usize,
    pub seed: u64,
    pub chunk: usize,
}

impl McConfig {
    pub fn new(samples: usize, seed: u64) -> Self {
        McConfig { samples, seed, chunk: DEFAULT_CHUNK }
    }
}

/// `log |B_{ℓ_p^n}| = n log 2 + n log Γ(1 + 1/p) − log Γ(1 + n/p)`.
pub fn lp_ball_log_volume(n: usize, p: Exponent) -> f64 {
    let n = n as f64;
    match p {
        Exponent::Infinity => n * std::f64::consts::LN_2,
        Exponent::Finite(p) => {
            n * std::f64::consts::LN_2 + n * libm::lgamma(1.0 + 1.0 / p) - libm::lgamma(1.0 + n / p)
        }
    }
}

pub fn lp_ball_volume_exact(n: usize, p: Exponent) -> VolumeEstimate {
    assert!(n >= 1, "dimension must be positive");
    VolumeEstimate::exact(lp_ball_log_volume(n, p).exp())
}

/// Exact volume where a closed form exists, radial Monte Carlo otherwise.
pub fn ball_volume(space: &NormedSpace, cfg: &McConfig) -> Result<VolumeEstimate> {
    match space.exact_volume() {
        Some(v) => Ok(VolumeEstimate::exact(v)),
        None => radial_volume(space, cfg),
    }
}

/// Sample means and covariances of `‖u‖_k^{-n}` for several norms over one
/// shared stream of uniform directions `u`.
#[derive(Clone, Debug)]
pub struct RadialMoments {
    pub samples: usize,
    pub mean: Vec<f64>,
    /// Sample covariance of the per-direction values.
    pub cov: Vec<Vec<f64>>,
}

pub fn radial_moments(norms: &[&dyn Norm], cfg: &McConfig) -> Result<RadialMoments> {
    let n = norms.first().map_or(0, |s| s.dim());
    if let Some(bad) = norms.iter().find(|s| s.dim() != n) {
        return Err(GeoError::DimensionMismatch { expected: n, got: bad.dim() });
    }
    if n > MC_DIM_CAP {
        return Err(GeoError::DimensionCap { dim: n, cap: MC_DIM_CAP });
    }
    if cfg.samples < MIN_SAMPLES {
        return Err(GeoError::TooFewSamples { got: cfg.samples, min: MIN_SAMPLES });
    }
    let k = norms.len();
    let streams = Streams::new(cfg.seed);
    let parts = chunks(cfg.samples, cfg.chunk);
    let sums = par_map(parts.len(), |c| {
        let mut s = vec![0.0; k];
        let mut ss = vec![vec![0.0; k]; k];
        let mut v = vec![0.0; k];
        for i in parts[c].clone() {
            let u = sphere_point(&mut streams.stream(i as u64), n);
            for (j, s) in norms.iter().enumerate() {
                v[j] = s.eval(&u).powi(-(n as i32));
            }
            for a in 0..k {
                s[a] += v[a];
                for b in 0..k {
                    ss[a][b] += v[a] * v[b];
                }
            }
        }
        (s, ss)
    });
    let total = cfg.samples as f64;
    let mut s = vec![0.0; k];
    let mut ss = vec![vec![0.0; k]; k];
    for (cs, css) in &sums {
        for a in 0..k {
            s[a] += cs[a];
            for b in 0..k {
                ss[a][b] += css[a][b];
            }
        }
    }
    let mean: Vec<f64> = s.iter().map(|v| v / total).collect();
    let mut cov = vec![vec![0.0; k]; k];
    for a in 0..k {
        for b in 0..k {
            cov[a][b] = (ss[a][b] - total * mean[a] * mean[b]) / (total - 1.0);
        }
        cov[a][a] = cov[a][a].max(0.0);
    }
    Ok(RadialMoments { samples: cfg.samples, mean, cov })
}

/// `|B| = |B_2^n| · E ‖u‖^{-n}` for `u` uniform on the Euclidean sphere.
pub fn radial_volume(norm: &dyn Norm, cfg: &McConfig) -> Result<VolumeEstimate> {
    let m = radial_moments(&[norm], cfg)?;
    let n = norm.dim();
    let unit = lp_ball_log_volume(n, Exponent::TWO).exp();
    Ok(VolumeEstimate {
        value: unit * m.mean[0],
        method: VolumeMethod::RadialMc,
        samples: cfg.samples as u64,
        seed: cfg.seed,
        stderr: unit * (m.cov[0][0] / m.samples as f64).sqrt(),
        degenerate: false,
    })
}

/// Hit-or-miss in the box `Π [-h_i, h_i]`.
pub fn hit_or_miss_box<F>(half_widths: &[f64], member: F, cfg: &McConfig) -> Result<VolumeEstimate>
where
    F: Fn(&[f64]) -> bool + Sync,
{
    if cfg.samples < MIN_SAMPLES {
        return Err(GeoError::TooFewSamples { got: cfg.samples, min: MIN_SAMPLES });
    }
    let n = half_widths.len();
    let streams = Streams::new(cfg.seed);
    let parts = chunks(cfg.samples, cfg.chunk);
    let hits: u64 = par_map(parts.len(), |c| {
        let mut x = vec![0.0; n];
        let mut h = 0u64;
        for i in parts[c].clone() {
            let mut rng = streams.stream(i as u64);
            for (xi, w) in x.iter_mut().zip(half_widths) {
                *xi = w * symmetric_unit(&mut rng);
            }
            h += member(&x) as u64;
        }
        h
    })
    .into_iter()
    .sum();
    let box_vol: f64 = half_widths.iter().map(|h| 2.0 * h).product();
    let f = hits as f64 / cfg.samples as f64;
    Ok(VolumeEstimate {
        value: f * box_vol,
        method: VolumeMethod::HitOrMiss,
        samples: cfg.samples as u64,
        seed: cfg.seed,
        stderr: box_vol * (f * (1.0 - f) / cfg.samples as f64).sqrt(),
        degenerate: hits == 0,
    })
}

/// Hit-or-miss on the unit ball; the box half-widths are `‖e_i‖_*`.
pub fn hit_or_miss(norm: &dyn Norm, cfg: &McConfig) -> Result<VolumeEstimate> {
    let n = norm.dim();
    let h: Vec<f64> = (0..n)
        .map(|i| {
            let mut e = vec![0.0; n];
            e[i] = 1.0;
            norm.dual_eval(&e)
        })
        .collect();
    hit_or_miss_box(&h, |x| norm.eval(x) <= 1.0, cfg)
}

/// `|T(B_X)| = |det T| |B_X|`.
pub fn image_volume(t: &LinOperator, base: &VolumeEstimate) -> Result<VolumeEstimate> {
    let d = t.det()?.abs();
    Ok(VolumeEstimate {
        value: d * base.value,
        stderr: d * base.stderr,
        degenerate: d == 0.0 || base.degenerate,
        ..base.clone()
    })
}

/// Hit-or-miss estimate of `|T(B_X)|` for invertible square `T`.
pub fn image_hit_or_miss(t: &LinOperator, cfg: &McConfig) -> Result<VolumeEstimate> {
    let n = t.matrix().nrows();
    let det = t.det()?;
    let inv = t.matrix().clone().try_inverse().filter(|_| det != 0.0);
    let Some(inv) = inv else {
        return Ok(VolumeEstimate {
            value: 0.0,
            method: VolumeMethod::HitOrMiss,
            samples: 0,
            seed: cfg.seed,
            stderr: 0.0,
            degenerate: true,
        });
    };
    // sup over the image of y_i is ‖Tᵀ e_i‖_{X*}
    let h: Vec<f64> = (0..n)
        .map(|i| t.domain().dual_eval(&t.matrix().row(i).iter().copied().collect::<Vec<_>>()))
        .collect();
    hit_or_miss_box(&h, |y| t.domain().eval(&crate::linalg::mat_vec(&inv, y)) <= 1.0, cfg)
}

fn check_zonotope(columns: &DMatrix<f64>) -> Result<()> {
    let (n, big_n) = columns.shape();
    if big_n < n {
        return Err(GeoError::InvalidOperator(format!("zonotope needs at least {n} columns, got {big_n}")));
    }
    let count = crate::linalg::binomial(big_n, n);
    if count > ZONOTOPE_CAP {
        return Err(GeoError::EnumerationCap(count));
    }
    Ok(())
}

fn subset_matrix(columns: &DMatrix<f64>, s: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(columns.nrows(), s.len(), |i, j| columns[(i, s[j])])
}

/// `|T(B_{ℓ_∞^N})| = 2^n Σ_{|S| = n} |det T_S|`.
pub fn zonotope_volume(columns: &DMatrix<f64>) -> Result<VolumeEstimate> {
    check_zonotope(columns)?;
    let n = columns.nrows();
    let total: f64 = (0..columns.ncols())
        .combinations(n)
        .map(|s| subset_matrix(columns, &s).determinant().abs())
        .sum();
    let scale = columns.iter().fold(0.0_f64, |m, v| m.max(v.abs())).powi(n as i32);
    let degenerate = total <= 1e-13 * scale;
    Ok(VolumeEstimate {
        value: if degenerate { 0.0 } else { 2f64.powi(n as i32) * total },
        method: VolumeMethod::ZonotopeExact,
        samples: 0,
        seed: 0,
        stderr: 0.0,
        degenerate,
    })
}

/// `log Σ_S |det T_S|` and its gradient, or `None` when degenerate.
pub fn zonotope_log_volume_grad(columns: &DMatrix<f64>) -> Result<Option<(f64, DMatrix<f64>)>> {
    check_zonotope(columns)?;
    let n = columns.nrows();
    let mut total = 0.0;
    let mut grad = DMatrix::zeros(n, columns.ncols());
    for s in (0..columns.ncols()).combinations(n) {
        let ts = subset_matrix(columns, &s);
        let lu = ts.clone().lu();
        let d = lu.determinant();
        if d == 0.0 {
            continue;
        }
        total += d.abs();
        // ∂|det A|/∂A = |det A| A^{-T}
        if let Some(inv) = lu.try_inverse() {
            let g = inv.transpose() * d.abs();
            for (j, &col) in s.iter().enumerate() {
                for i in 0..n {
                    grad[(i, col)] += g[(i, j)];
                }
            }
        }
    }
    if total <= 0.0 {
        return Ok(None);
    }
    Ok(Some((n as f64 * std::f64::consts::LN_2 + total.ln(), grad / total)))
}

/// `n (|B_X| |B_{X*}|)^{1/n}` with its error and method.
pub fn santalo_product(space: &NormedSpace, cfg: &McConfig) -> Result<Observed> {
    let dual = space.dual();
    let n = space.dim() as f64;
    if let (Some(a), Some(b)) = (space.exact_log_volume(), dual.exact_log_volume()) {
        return Ok(Observed::exact(n * ((a + b) / n).exp()));
    }
    let m = radial_moments(&[space, &dual], cfg)?;
    let unit = lp_ball_log_volume(space.dim(), Exponent::TWO).exp();
    let prod = unit * unit * m.mean[0] * m.mean[1];
    let value = n * prod.powf(1.0 / n);
    // delta method on log(mean_0 mean_1)
    let var_log = (m.cov[0][0] / (m.mean[0] * m.mean[0])
        + m.cov[1][1] / (m.mean[1] * m.mean[1])
        + 2.0 * m.cov[0][1] / (m.mean[0] * m.mean[1]))
        / m.samples as f64;
    Ok(Observed::estimate(value, value * var_log.max(0.0).sqrt() / n, VolumeMethod::RadialMc.tag()))
}

/// Checks `|B_X| / |B_Y| = Π |B_{X_k}| / |B_{Y_k}|` for `X = (Σ X_k)_E`,
/// `Y = (Σ Y_k)_E`. The left side is a shared-direction radial ratio; the
/// right side uses exact block volumes where available.
pub fn verify_lemma_2_1(
    outer: &NormedSpace,
    x_parts: &[NormedSpace],
    y_parts: &[NormedSpace],
    cfg: &McConfig,
) -> Result<Verdict> {
    if x_parts.len() != y_parts.len() {
        return Err(GeoError::InvalidSpace(format!("{} X blocks but {} Y blocks", x_parts.len(), y_parts.len())));
    }
    if let Some(k) = x_parts.iter().zip(y_parts).position(|(a, b)| a.dim() != b.dim()) {
        return Err(GeoError::InvalidSpace(format!("block {k} has mismatched dimensions")));
    }
    let x = NormedSpace::sum(outer.clone(), x_parts.to_vec())?;
    let y = NormedSpace::sum(outer.clone(), y_parts.to_vec())?;
    let m = radial_moments(&[&x, &y], cfg)?;
    let ratio = m.mean[0] / m.mean[1];
    let ns = m.samples as f64;
    let rel_var = (m.cov[0][0] / (m.mean[0] * m.mean[0]) + m.cov[1][1] / (m.mean[1] * m.mean[1])
        - 2.0 * m.cov[0][1] / (m.mean[0] * m.mean[1]))
        / ns;
    let ratio_err = ratio * rel_var.max(0.0).sqrt();

    let mut product = 1.0;
    let mut product_rel_var = 0.0;
    let mut method = "EXACT";
    for (k, (a, b)) in x_parts.iter().zip(y_parts).enumerate() {
        let sub = McConfig { seed: Streams::new(cfg.seed).child_seed(k as u64), ..*cfg };
        let va = ball_volume(a, &sub)?;
        let vb = ball_volume(b, &sub)?;
        if va.method != VolumeMethod::Exact || vb.method != VolumeMethod::Exact {
            method = "RADIAL_MC";
        }
        product *= va.value / vb.value;
        product_rel_var += va.relative_stderr().powi(2) + vb.relative_stderr().powi(2);
    }
    let product_err = product * product_rel_var.sqrt();
    let sigma = (ratio_err * ratio_err + product_err * product_err).sqrt();
    let discrepancy = (ratio - product).abs();
    let precise = ratio_err / ratio < 0.05 && product_err / product < 0.05;
    let status = if discrepancy <= 3.0 * sigma {
        Status::Pass
    } else if !precise {
        Status::Inconclusive
    } else {
        Status::Fail
    };
    Ok(Verdict::new(format!("lemma2.1 {}", x.label()))
        .obs("mc_ratio", Observed::estimate(ratio, ratio_err, VolumeMethod::RadialMc.tag()))
        .obs("block_product", Observed::estimate(product, product_err, method))
        .obs("relative_discrepancy", Observed::estimate(discrepancy / product, sigma / product, "derived"))
        .tol("sigmas", 3.0)
        .status(status))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn closed_forms() {
        assert!((lp_ball_volume_exact(2, Exponent::TWO).value - PI).abs() < 1e-13);
        assert!((lp_ball_volume_exact(3, Exponent::ONE).value - 4.0 / 3.0).abs() < 1e-13);
        assert!((lp_ball_volume_exact(4, Exponent::INF).value - 16.0).abs() < 1e-12);
        assert!((lp_ball_volume_exact(3, Exponent::TWO).value - 4.0 * PI / 3.0).abs() < 1e-13);
    }

    #[test]
    fn radial_cube() {
        let s = NormedSpace::lp(3, Exponent::INF);
        let v = radial_volume(&s, &McConfig::new(200_000, 3)).unwrap();
        assert!((v.value - 8.0).abs() < 0.08, "{v:?}");
        assert!((v.value - 8.0).abs() < 4.0 * v.stderr);
    }

    #[test]
    fn radial_guards() {
        let s = NormedSpace::lp(13, Exponent::TWO);
        assert!(matches!(radial_volume(&s, &McConfig::new(20_000, 1)), Err(GeoError::DimensionCap { .. })));
        let s = NormedSpace::lp(2, Exponent::TWO);
        assert!(matches!(radial_volume(&s, &McConfig::new(10, 1)), Err(GeoError::TooFewSamples { .. })));
    }

    #[test]
    fn radial_is_bit_stable_across_chunk_layouts_of_equal_size() {
        let s = NormedSpace::lp(4, Exponent::new(1.5).unwrap());
        let a = radial_volume(&s, &McConfig::new(30_000, 9)).unwrap();
        let b = radial_volume(&s, &McConfig::new(30_000, 9)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn zonotope_examples() {
        let square = DMatrix::identity(2, 2);
        assert_eq!(zonotope_volume(&square).unwrap().value, 4.0);
        let hex = DMatrix::from_row_slice(2, 3, &[1.0, 0.0, 1.0, 0.0, 1.0, 1.0]);
        assert_eq!(zonotope_volume(&hex).unwrap().value, 12.0);
        let diamond = DMatrix::from_row_slice(2, 2, &[0.5, 0.5, 0.5, -0.5]);
        assert!((zonotope_volume(&diamond).unwrap().value - 2.0).abs() < 1e-15);
        let flat = DMatrix::from_row_slice(2, 3, &[1.0, 2.0, 3.0, 2.0, 4.0, 6.0]);
        assert!(zonotope_volume(&flat).unwrap().degenerate);
    }

    #[test]
    fn zonotope_gradient_matches_differences() {
        let t = DMatrix::from_row_slice(2, 3, &[1.0, 0.3, -0.7, 0.2, 1.1, 0.4]);
        let (f, g) = zonotope_log_volume_grad(&t).unwrap().unwrap();
        let h = 1e-6;
        for i in 0..2 {
            for j in 0..3 {
                let mut tp = t.clone();
                tp[(i, j)] += h;
                let (fp, _) = zonotope_log_volume_grad(&tp).unwrap().unwrap();
                assert!(((fp - f) / h - g[(i, j)]).abs() < 1e-4);
            }
        }
    }

    #[test]
    fn image_volume_scales() {
        let s = NormedSpace::lp(2, Exponent::TWO);
        let t = LinOperator::new(s.clone(), s, DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 3.0])).unwrap();
        let v = image_volume(&t, &VolumeEstimate::exact(PI)).unwrap();
        assert!((v.value - 6.0 * PI).abs() < 1e-12);
        let sing = t.scaled(0.0);
        assert!(image_volume(&sing, &VolumeEstimate::exact(PI)).unwrap().degenerate);
    }

    #[test]
    fn santalo_exact_values() {
        let v = santalo_product(&NormedSpace::lp(2, Exponent::TWO), &McConfig::new(MIN_SAMPLES, 0)).unwrap();
        assert!((v.value - 2.0 * PI).abs() < 1e-12);
        let v = santalo_product(&NormedSpace::lp(3, Exponent::ONE), &McConfig::new(MIN_SAMPLES, 0)).unwrap();
        assert!((v.value - 3.0 * (32.0_f64 / 3.0).cbrt()).abs() < 1e-12);
    }

    #[test]
    fn lemma_2_1_identity_case_is_exact() {
        let outer = NormedSpace::lp(2, Exponent::TWO);
        let parts = vec![NormedSpace::lp(2, Exponent::ONE), NormedSpace::lp(1, Exponent::TWO)];
        let v = verify_lemma_2_1(&outer, &parts, &parts, &McConfig::new(MIN_SAMPLES, 5)).unwrap();
        assert_eq!(v.status, Status::Pass);
        assert_eq!(v.observed["mc_ratio"].value, 1.0);
        assert_eq!(v.observed["relative_discrepancy"].value, 0.0);
    }
}
