//! Verification suites and sweeps.
//!
//! Each suite reads a JSON config (every field optional), draws its
//! instances from the config seed and returns a [`Report`] whose payload is
//! a pure function of the resolved config.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{GeoError, Result};
use crate::exponent::Exponent;
use crate::lozanovskii::{alpha_beta, lozanovskii_factor, LozanovskiiFactorization, NORM_TOL};
use crate::operator::{LinOperator, OptBudget};
use crate::report::{Observed, Report, Status, Verdict};
use crate::rng::{gaussian_vec, index, symmetric_unit, Streams};
use crate::space::NormedSpace;
use crate::summing::{verify_lemma_1_7, verify_lemma_2_2, verify_thm_1_3};
use crate::volume::{ball_volume, lp_ball_volume_exact, radial_volume, santalo_product, verify_lemma_2_1, McConfig};
use crate::vr::{mixed_blocks, trend_slope, verify_lemma_2_4, vr_product_experiment, ProductConfig};

/// Suite names accepted by [`run_suite`].
pub const SUITES: [&str; 8] = ["lemma2.1", "lemma2.3", "lemma2.4", "thm1.3", "lemma2.2", "lemma1.7", "thm2.6", "santalo"];

const EXPONENTS: [f64; 6] = [1.0, 1.5, 2.0, 3.0, 4.0, f64::INFINITY];

pub use crate::error::parse_json as parse_config;

fn budget_named(name: &str, seed: u64) -> Result<OptBudget> {
    OptBudget::named(name, seed).ok_or_else(|| GeoError::Spec {
        field: "config.budget".into(),
        message: format!("unknown budget `{name}`; use quick, default or thorough"),
    })
}

fn exponent<R: rand_core::Rng>(rng: &mut R, choices: &[f64]) -> Exponent {
    Exponent::new(choices[index(rng, choices.len())]).expect("valid choices")
}

/// Block sizes in `1..=max_block` for `m` blocks with total at most `cap`.
fn block_dims<R: rand_core::Rng>(rng: &mut R, m: usize, max_block: usize, cap: usize) -> Vec<usize> {
    let mut dims: Vec<usize> = (0..m).map(|_| 1 + index(rng, max_block)).collect();
    while dims.iter().sum::<usize>() > cap {
        let k = dims.iter().enumerate().max_by_key(|(_, d)| **d).map(|(k, _)| k).expect("nonempty");
        dims[k] -= 1;
    }
    dims
}

fn gaussian_matrix<R: rand_core::Rng>(rng: &mut R, rows: usize, cols: usize) -> nalgebra::DMatrix<f64> {
    nalgebra::DMatrix::from_column_slice(rows, cols, &gaussian_vec(rng, rows * cols))
}

/// `E` as an `ℓ_r` or weighted `ℓ_r` of dimension `m`.
fn random_outer<R: rand_core::Rng>(rng: &mut R, m: usize, weighted: bool) -> NormedSpace {
    let r = exponent(rng, &EXPONENTS);
    if weighted && index(rng, 2) == 1 {
        let w = (0..m).map(|_| 1.25 + 0.75 * symmetric_unit(rng)).collect();
        NormedSpace::weighted_lp(r, w).expect("positive weights")
    } else {
        NormedSpace::lp(m, r)
    }
}

pub fn run_suite(name: &str, config: &Value) -> Result<Report> {
    let (resolved, verdicts) = match name {
        "lemma2.1" => lemma_2_1(parse_config(config, "config")?),
        "lemma2.3" => lemma_2_3(parse_config(config, "config")?),
        "lemma2.4" => lemma_2_4(parse_config(config, "config")?),
        "thm1.3" => thm_1_3(parse_config(config, "config")?),
        "lemma2.2" => lemma_2_2(parse_config(config, "config")?),
        "lemma1.7" => lemma_1_7(parse_config(config, "config")?),
        "thm2.6" => thm_2_6(parse_config(config, "config")?),
        "santalo" => santalo(parse_config(config, "config")?),
        other => {
            return Err(GeoError::Spec {
                field: "suite".into(),
                message: format!("unknown suite `{other}`; expected one of {}", SUITES.join(", ")),
            })
        }
    }?;
    let seed = resolved.get("seed").and_then(Value::as_u64).unwrap_or(0);
    let mut report = Report::new(name, resolved, verdicts);
    report.provenance.seeds = vec![seed];
    Ok(report)
}

/// Named preset configs. `default` reproduces the acceptance settings;
/// `quick` shrinks instance counts and samples.
pub fn preset(suite: &str, name: &str) -> Result<Value> {
    if !SUITES.contains(&suite) {
        return Err(GeoError::Spec { field: "suite".into(), message: format!("unknown suite `{suite}`") });
    }
    match name {
        "default" => Ok(serde_json::json!({})),
        "quick" => Ok(match suite {
            "lemma2.1" => serde_json::json!({"instances": 5, "samples": 100_000}),
            "lemma2.3" => serde_json::json!({"instances": 10}),
            "lemma2.4" => serde_json::json!({"instances": 5, "samples": 50_000}),
            "thm1.3" => serde_json::json!({"instances": 4}),
            "lemma2.2" => serde_json::json!({"instances": 2}),
            "lemma1.7" => serde_json::json!({"instances": 2}),
            "thm2.6" => serde_json::json!({"coherence_ps": [2.0], "sweep_dims": [2, 3, 4]}),
            _ => serde_json::json!({"dims": [2, 3]}),
        }),
        other => Err(GeoError::Spec { field: "preset".into(), message: format!("unknown preset `{other}`; use default or quick") }),
    }
}

fn resolved<T: Serialize>(cfg: &T) -> Value {
    serde_json::to_value(cfg).expect("configs serialize")
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Lemma21Config {
    pub seed: u64,
    pub instances: usize,
    pub samples: usize,
    pub max_dim: usize,
}

impl Default for Lemma21Config {
    fn default() -> Self {
        Lemma21Config { seed: 1, instances: 20, samples: 400_000, max_dim: 8 }
    }
}

fn lemma_2_1(cfg: Lemma21Config) -> Result<(Value, Vec<Verdict>)> {
    let streams = Streams::new(cfg.seed);
    let mut out = Vec::new();
    for i in 0..cfg.instances {
        let mut rng = streams.stream(i as u64);
        let m = 2 + index(&mut rng, 2);
        let dims = block_dims(&mut rng, m, 3, cfg.max_dim);
        let outer = random_outer(&mut rng, m, true);
        let xs: Vec<NormedSpace> = dims.iter().map(|&d| NormedSpace::lp(d, exponent(&mut rng, &EXPONENTS))).collect();
        let ys: Vec<NormedSpace> = dims.iter().map(|&d| NormedSpace::lp(d, exponent(&mut rng, &EXPONENTS))).collect();
        let mc = McConfig::new(cfg.samples, streams.child_seed(i as u64));
        out.push(match verify_lemma_2_1(&outer, &xs, &ys, &mc) {
            Ok(v) => rename(v, format!("lemma2.1 #{i}")),
            Err(e) => Verdict::errored(format!("lemma2.1 #{i}"), &e),
        });
    }
    Ok((resolved(&cfg), out))
}

fn rename(mut v: Verdict, prefix: String) -> Verdict {
    let old = std::mem::take(&mut v.name);
    let suffix = old.split_once(' ').map(|(_, s)| s.to_string()).unwrap_or_default();
    v.name = if suffix.is_empty() { prefix } else { format!("{prefix} {suffix}") };
    v
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Lemma23Config {
    pub seed: u64,
    pub instances: usize,
    pub max_dim: usize,
    pub product_tol: f64,
    pub norm_tol: f64,
    pub closed_form_tol: f64,
}

impl Default for Lemma23Config {
    fn default() -> Self {
        Lemma23Config { seed: 1, instances: 50, max_dim: 12, product_tol: 1e-10, norm_tol: NORM_TOL, closed_form_tol: 1e-8 }
    }
}

fn factorization_verdict(name: String, f: &LozanovskiiFactorization, cfg: &Lemma23Config) -> Verdict {
    let c = &f.checks;
    let mut ok = c.product_residual <= cfg.product_tol
        && (f.norms.tau - 1.0).abs() <= cfg.norm_tol
        && (f.norms.sigma - 1.0).abs() <= cfg.norm_tol
        && c.eq2_12 >= 1.0 - 1e-9
        && c.eq2_13 >= -1e-9;
    let mut v = Verdict::new(name)
        .obs("product_residual", Observed::exact(c.product_residual))
        .obs("tau_norm", Observed::exact(f.norms.tau))
        .obs("sigma_norm", Observed::exact(f.norms.sigma))
        .obs("eq2_12", Observed::exact(c.eq2_12))
        .obs("eq2_13", Observed::exact(c.eq2_13))
        .tol("product", cfg.product_tol)
        .tol("norm", cfg.norm_tol);
    if let Some((a, b)) = c.eq2_11 {
        ok &= (a - 1.0).abs() <= cfg.norm_tol && (b - 1.0).abs() <= cfg.norm_tol;
        v = v.obs("eq2_11_alpha", Observed::exact(a)).obs("eq2_11_beta", Observed::exact(b));
    }
    v.status(Status::from_bool(ok))
}

fn max_dev(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn lemma_2_3(cfg: Lemma23Config) -> Result<(Value, Vec<Verdict>)> {
    let streams = Streams::new(cfg.seed);
    let mut out = Vec::new();
    for i in 0..cfg.instances {
        let mut rng = streams.stream(i as u64);
        let m = 1 + index(&mut rng, 4);
        let dims = block_dims(&mut rng, m, 4, cfg.max_dim);
        let outer = if index(&mut rng, 4) == 0 && m >= 2 {
            // a nested lattice: ℓ_r of ℓ_s blocks
            let inner = NormedSpace::lp(1, exponent(&mut rng, &EXPONENTS));
            let head = NormedSpace::lp(m - 1, exponent(&mut rng, &EXPONENTS));
            NormedSpace::sum(exponent_space(&mut rng, 2), vec![head, inner])?
        } else {
            random_outer(&mut rng, m, true)
        };
        let name = format!("lemma2.3 #{i} {outer} {dims:?}");
        out.push(match alpha_beta(&outer, &dims) {
            Ok(f) => factorization_verdict(name, &f, &cfg),
            Err(e) => Verdict::errored(name, &e),
        });
    }
    let tol = cfg.closed_form_tol;
    for r in [1.0, 1.5, 2.0, 4.0] {
        let n = 6;
        let f = lozanovskii_factor(&NormedSpace::lp(n, Exponent::new(r)?))?;
        let dev = max_dev(&f.z, &vec![(n as f64).powf(-1.0 / r); n]);
        out.push(closed_form(format!("lemma2.3 closed form l_{r}^{n}"), dev, tol));
    }
    let w = vec![0.5, 1.0, 2.0, 4.0];
    let f = lozanovskii_factor(&NormedSpace::weighted_lp(Exponent::ONE, w.clone())?)?;
    let z: Vec<f64> = w.iter().map(|wi| 1.0 / (w.len() as f64 * wi)).collect();
    out.push(closed_form("lemma2.3 closed form weighted l_1".into(), max_dev(&f.z, &z), tol));
    let dims = [2, 3, 1, 4];
    let f = alpha_beta(&NormedSpace::lp(4, Exponent::INF), &dims)?;
    let alpha: Vec<f64> = dims.iter().map(|&d| d as f64 / 10.0).collect();
    let dev = max_dev(&f.alpha, &alpha).max(max_dev(&f.beta, &[1.0; 4]));
    out.push(closed_form("lemma2.3 closed form l_inf outer".into(), dev, tol));
    Ok((resolved(&cfg), out))
}

fn exponent_space<R: rand_core::Rng>(rng: &mut R, m: usize) -> NormedSpace {
    NormedSpace::lp(m, exponent(rng, &EXPONENTS))
}

fn closed_form(name: String, dev: f64, tol: f64) -> Verdict {
    Verdict::new(name).obs("max_deviation", Observed::exact(dev)).tol("abs", tol).status(Status::from_bool(dev <= tol))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Lemma24Config {
    pub seed: u64,
    pub instances: usize,
    pub c_floor: f64,
    pub samples: usize,
    pub max_dim: usize,
}

impl Default for Lemma24Config {
    fn default() -> Self {
        Lemma24Config { seed: 1, instances: 20, c_floor: 0.1, samples: 200_000, max_dim: 8 }
    }
}

fn lemma_2_4(cfg: Lemma24Config) -> Result<(Value, Vec<Verdict>)> {
    let streams = Streams::new(cfg.seed);
    let mut out = Vec::new();
    let two = Exponent::TWO;
    let instance = |name: String, outer: &NormedSpace, blocks: &[LinOperator], seed: u64| {
        let mc = McConfig::new(cfg.samples, seed);
        match verify_lemma_2_4(outer, blocks, cfg.c_floor, &mc) {
            Ok(v) => rename(v, name),
            Err(e) => Verdict::errored(name, &e),
        }
    };
    for i in 0..cfg.instances {
        let mut rng = streams.stream(i as u64);
        let m = 1 + index(&mut rng, 3);
        let dims = block_dims(&mut rng, m, 3, cfg.max_dim);
        let outer = random_outer(&mut rng, m, true);
        let mut blocks = Vec::new();
        for &d in &dims {
            let x = NormedSpace::lp(d, exponent(&mut rng, &EXPONENTS));
            blocks.push(LinOperator::new(x, NormedSpace::lp(d, two), gaussian_matrix(&mut rng, d, d))?);
        }
        out.push(instance(format!("lemma2.4 #{i}"), &outer, &blocks, streams.child_seed(i as u64)));
    }
    let mut rng = streams.stream(u64::MAX >> 1);
    let single = LinOperator::new(NormedSpace::lp(3, Exponent::new(3.0)?), NormedSpace::lp(3, two), gaussian_matrix(&mut rng, 3, 3))?;
    let v = instance("lemma2.4 single block".into(), &NormedSpace::lp(1, two), &[single], 7);
    let dev = (v.observed.get("c_obs").map_or(f64::NAN, |o| o.value) - 1.0).abs();
    let exact_status = Status::from_bool(dev <= 1e-9);
    out.push(v.tol("single_block_abs", 1e-9).status(exact_status));
    let id = LinOperator::identity(NormedSpace::lp(2, two));
    out.push(instance("lemma2.4 square of discs".into(), &NormedSpace::lp(2, Exponent::INF), &[id.clone(), id], 8));
    Ok((resolved(&cfg), out))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Thm13Config {
    pub seed: u64,
    pub instances: usize,
    pub p: Exponent,
    pub budget: String,
    /// `K^p(E*)` for outer spaces without a lattice anchor.
    pub k_convexity: Option<f64>,
}

impl Default for Thm13Config {
    fn default() -> Self {
        Thm13Config { seed: 1, instances: 20, p: Exponent::ONE, budget: "quick".into(), k_convexity: None }
    }
}

fn thm_1_3(cfg: Thm13Config) -> Result<(Value, Vec<Verdict>)> {
    let streams = Streams::new(cfg.seed);
    let mut out = Vec::new();
    let part_exps = [1.0, 2.0, f64::INFINITY];
    let cod_exps = [1.0, 1.5, 2.0, f64::INFINITY];
    let run = |name: String, outer: &NormedSpace, blocks: &[LinOperator], seed: u64| -> Result<Verdict> {
        let budget = budget_named(&cfg.budget, seed)?;
        Ok(match verify_thm_1_3(outer, blocks, cfg.p, cfg.k_convexity, &budget) {
            Ok(v) => rename(v, name),
            Err(e) => Verdict::errored(name, &e),
        })
    };
    for i in 0..cfg.instances {
        let mut rng = streams.stream(i as u64);
        let m = 2 + index(&mut rng, 2);
        let outer = NormedSpace::lp(m, if i % 2 == 0 { Exponent::INF } else { Exponent::TWO });
        let mut blocks = Vec::new();
        for _ in 0..m {
            let x = NormedSpace::lp(2, exponent(&mut rng, &part_exps));
            let y = NormedSpace::lp(2, exponent(&mut rng, &cod_exps));
            blocks.push(LinOperator::new(x, y, gaussian_matrix(&mut rng, 2, 2))?);
        }
        out.push(run(format!("thm1.3 #{i} {outer}"), &outer, &blocks, streams.child_seed(i as u64))?);
    }
    let mut rng = streams.stream(u64::MAX >> 1);
    let rank_one: Vec<LinOperator> = (0..3)
        .map(|_| {
            let f = gaussian_vec(&mut rng, 2);
            let y = gaussian_vec(&mut rng, 2);
            let m = nalgebra::DMatrix::from_fn(2, 2, |i, j| y[i] * f[j]);
            LinOperator::new(NormedSpace::lp(2, Exponent::TWO), NormedSpace::lp(2, Exponent::TWO), m)
        })
        .collect::<Result<_>>()?;
    out.push(run("thm1.3 rank-one blocks".into(), &NormedSpace::lp(3, Exponent::INF), &rank_one, 11)?);
    out.push(run("thm1.3 single block".into(), &NormedSpace::lp(1, Exponent::INF), &rank_one[..1], 12)?);
    Ok((resolved(&cfg), out))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Lemma22Config {
    pub seed: u64,
    /// Random instances per exponent.
    pub instances: usize,
    pub ps: Vec<Exponent>,
    pub band: f64,
    pub budget: String,
}

impl Default for Lemma22Config {
    fn default() -> Self {
        Lemma22Config {
            seed: 1,
            instances: 5,
            ps: vec![Exponent::ONE, Exponent::TWO, Exponent::Finite(4.0)],
            band: 4.0,
            budget: "quick".into(),
        }
    }
}

fn lemma_2_2(cfg: Lemma22Config) -> Result<(Value, Vec<Verdict>)> {
    let streams = Streams::new(cfg.seed);
    let mut out = Vec::new();
    let two = Exponent::TWO;
    let run = |name: String, outer: &NormedSpace, blocks: &[LinOperator], p: Exponent, seed: u64| -> Result<Verdict> {
        let budget = budget_named(&cfg.budget, seed)?;
        Ok(match verify_lemma_2_2(outer, blocks, p, cfg.band, &budget) {
            Ok(v) => rename(v, name),
            Err(e) => Verdict::errored(name, &e),
        })
    };
    let mut c_max = 0.0_f64;
    let mut idx = 0u64;
    for &p in &cfg.ps {
        for i in 0..cfg.instances {
            let mut rng = streams.stream(idx);
            let m = 2 + index(&mut rng, 2);
            let outer = NormedSpace::lp(m, exponent(&mut rng, &[1.0, 2.0, f64::INFINITY]));
            let mut blocks = Vec::new();
            for _ in 0..m {
                let x = NormedSpace::lp(2, exponent(&mut rng, &[1.0, 2.0, f64::INFINITY]));
                blocks.push(LinOperator::new(x, NormedSpace::lp(2, two), gaussian_matrix(&mut rng, 2, 2))?);
            }
            let v = run(format!("lemma2.2 p={p} #{i} {outer}"), &outer, &blocks, p, streams.child_seed(idx))?;
            if let Some(c) = v.observed.get("c_left") {
                c_max = c_max.max(c.hi());
            }
            out.push(v);
            idx += 1;
        }
    }
    let diag = |d: [f64; 2]| LinOperator::new(NormedSpace::lp(2, two), NormedSpace::lp(2, two), nalgebra::DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(&d)));
    let orth = [diag([2.0, 1.0])?, diag([0.5, 3.0])?];
    let v = run("lemma2.2 orthogonal blocks".into(), &NormedSpace::lp(2, two), &orth, two, 21)?;
    let dev = v.observed.get("c_left").map_or(f64::NAN, |o| (o.value - 0.5f64.sqrt()).abs());
    let st = v.status.and(Status::from_bool(dev <= 0.01));
    out.push(v.tol("inverse_root_two_abs", 0.01).status(st));
    let single = [diag([1.5, 0.5])?];
    out.push(run("lemma2.2 single block".into(), &NormedSpace::lp(1, two), &single, Exponent::ONE, 22)?);
    out.push(
        Verdict::new("lemma2.2 max c_left")
            .obs("c_left_max", Observed::exact(c_max))
            .tol("band", cfg.band)
            .status(Status::from_bool(c_max <= cfg.band)),
    );
    Ok((resolved(&cfg), out))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Lemma17Config {
    pub seed: u64,
    pub instances: usize,
    pub ps: Vec<Exponent>,
    pub budget: String,
}

impl Default for Lemma17Config {
    fn default() -> Self {
        Lemma17Config { seed: 1, instances: 4, ps: vec![Exponent::ONE, Exponent::TWO], budget: "quick".into() }
    }
}

fn lemma_1_7(cfg: Lemma17Config) -> Result<(Value, Vec<Verdict>)> {
    let streams = Streams::new(cfg.seed);
    let mut out = Vec::new();
    let mut idx = 0u64;
    for &p in &cfg.ps {
        for i in 0..cfg.instances {
            let mut rng = streams.stream(idx);
            let x = NormedSpace::lp(2, exponent(&mut rng, &[1.0, 2.0, f64::INFINITY]));
            let y = NormedSpace::lp(4, if i % 2 == 0 { Exponent::INF } else { Exponent::ONE });
            let name = format!("lemma1.7 p={p} #{i} {x}->{y}");
            let t = LinOperator::new(x, y, gaussian_matrix(&mut rng, 4, 2))?;
            let budget = budget_named(&cfg.budget, streams.child_seed(idx))?;
            out.push(match verify_lemma_1_7(&t, p, &budget) {
                Ok(v) => rename(v, name),
                Err(e) => Verdict::errored(name, &e),
            });
            idx += 1;
        }
    }
    Ok((resolved(&cfg), out))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Thm26Config {
    pub seed: u64,
    pub coherence_ps: Vec<Exponent>,
    pub coherence_tol: f64,
    pub sweep_dims: Vec<usize>,
    pub sweep_p: Exponent,
    pub slope_tol: f64,
    pub product: ProductConfig,
    pub budget: String,
    pub samples: usize,
}

impl Default for Thm26Config {
    fn default() -> Self {
        Thm26Config {
            seed: 1,
            coherence_ps: vec![Exponent::TWO, Exponent::Finite(4.0), Exponent::INF],
            coherence_tol: 0.04,
            sweep_dims: (2..=8).collect(),
            sweep_p: Exponent::TWO,
            slope_tol: 0.05,
            product: ProductConfig::default(),
            budget: "quick".into(),
            samples: 200_000,
        }
    }
}

/// One mixed-block row of the product sweep at total dimension `n`.
pub fn thm_2_6_row(n: usize, p: Exponent, product: &ProductConfig, budget: &OptBudget, mc: &McConfig) -> Verdict {
    let parts = mixed_blocks(n);
    let outer = NormedSpace::lp(parts.len(), Exponent::TWO);
    let name = format!("thm2.6 mixed n={n} p={p}");
    match vr_product_experiment(&outer, &parts, p, product, budget, mc) {
        Ok(v) => rename(v, name),
        Err(e) => Verdict::errored(name, &e),
    }
}

fn thm_2_6(cfg: Thm26Config) -> Result<(Value, Vec<Verdict>)> {
    let streams = Streams::new(cfg.seed);
    let mut out = Vec::new();
    for (i, &p) in cfg.coherence_ps.iter().enumerate() {
        let seed = streams.child_seed(i as u64);
        let parts = vec![NormedSpace::lp(2, p), NormedSpace::lp(1, p)];
        let name = format!("thm2.6 coherent p={p}");
        let v = vr_product_experiment(
            &NormedSpace::lp(2, p),
            &parts,
            p,
            &cfg.product,
            &budget_named(&cfg.budget, seed)?,
            &McConfig::new(cfg.samples, seed),
        );
        out.push(match v {
            Ok(v) => {
                let dev_g = (v.observed["G"].value - 1.0).abs();
                let dev_v = (v.observed["V"].value - 1.0).abs();
                let st = v.status.and(Status::from_bool(dev_g <= cfg.coherence_tol && dev_v <= cfg.coherence_tol));
                rename(v, name).tol("unit_rel", cfg.coherence_tol).status(st)
            }
            Err(e) => Verdict::errored(name, &e),
        });
    }
    let two = Exponent::TWO;
    let seed = streams.child_seed(100);
    let parts = vec![NormedSpace::lp(2, Exponent::ONE), NormedSpace::lp(2, Exponent::INF)];
    let v = vr_product_experiment(
        &NormedSpace::lp(2, two),
        &parts,
        two,
        &cfg.product,
        &budget_named(&cfg.budget, seed)?,
        &McConfig::new(cfg.samples, seed),
    );
    out.push(match v {
        Ok(v) => rename(v, "thm2.6 l1 and linf blocks".into()),
        Err(e) => Verdict::errored("thm2.6 l1 and linf blocks", &e),
    });
    let p_conj = cfg.sweep_p.conjugate().value();
    let (mut xs, mut ls, mut rs) = (Vec::new(), Vec::new(), Vec::new());
    for &n in &cfg.sweep_dims {
        let seed = streams.child_seed(200 + n as u64);
        let row = thm_2_6_row(n, cfg.sweep_p, &cfg.product, &budget_named(&cfg.budget, seed)?, &McConfig::new(cfg.samples, seed));
        if let (Some(l), Some(r)) = (row.observed.get("L_obs"), row.observed.get("R_obs")) {
            xs.push(n as f64);
            ls.push((l.value / p_conj).ln());
            rs.push(r.value.ln());
        }
        out.push(row);
    }
    if xs.len() >= 2 {
        let sl = trend_slope(&xs, &ls);
        let sr = trend_slope(&xs, &rs);
        let max_l = ls.iter().copied().fold(f64::NEG_INFINITY, f64::max).exp();
        let max_r = rs.iter().copied().fold(f64::NEG_INFINITY, f64::max).exp();
        out.push(
            Verdict::new("thm2.6 sweep trend")
                .obs("slope_log_L_over_pconj", Observed::exact(sl))
                .obs("slope_log_R", Observed::exact(sr))
                .obs("max_L_over_pconj", Observed::exact(max_l))
                .obs("max_R", Observed::exact(max_r))
                .tol("slope", cfg.slope_tol)
                .status(Status::from_bool(sl.abs() <= cfg.slope_tol && sr.abs() <= cfg.slope_tol)),
        );
    }
    Ok((resolved(&cfg), out))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SantaloConfig {
    pub seed: u64,
    pub ps: Vec<Exponent>,
    pub dims: Vec<usize>,
    pub band: [f64; 2],
    pub polarity_tol: f64,
    pub samples: usize,
}

impl Default for SantaloConfig {
    fn default() -> Self {
        SantaloConfig {
            seed: 1,
            ps: vec![Exponent::ONE, Exponent::TWO, Exponent::INF],
            dims: (2..=6).collect(),
            band: [2.0, 2.0 * PI],
            polarity_tol: 1e-9,
            samples: 200_000,
        }
    }
}

/// One row: `n (|B_X| |B_{X*}|)^{1/n}` for `ℓ_p^n` against the band.
pub fn santalo_row(p: Exponent, n: usize, band: [f64; 2], mc: &McConfig) -> Verdict {
    let name = format!("santalo l_{p}^{n}");
    match santalo_product(&NormedSpace::lp(n, p), mc) {
        Ok(o) => {
            let inside = o.value >= band[0] && o.value <= band[1];
            Verdict::new(name).obs("normalized_product", o).tol("band_lo", band[0]).tol("band_hi", band[1]).status(Status::from_bool(inside))
        }
        Err(e) => Verdict::errored(name, &e),
    }
}

fn santalo(cfg: SantaloConfig) -> Result<(Value, Vec<Verdict>)> {
    let mut out = Vec::new();
    let mc = McConfig::new(cfg.samples, cfg.seed);
    for &p in &cfg.ps {
        for &n in &cfg.dims {
            out.push(santalo_row(p, n, cfg.band, &mc));
        }
    }
    for &n in &cfg.dims {
        let a = santalo_product(&NormedSpace::lp(n, Exponent::ONE), &mc)?;
        let b = santalo_product(&NormedSpace::lp(n, Exponent::INF), &mc)?;
        let dev = (a.value - b.value).abs();
        out.push(
            Verdict::new(format!("santalo polarity n={n}"))
                .obs("l1", a)
                .obs("linf", b)
                .tol("abs", cfg.polarity_tol)
                .status(Status::from_bool(dev <= cfg.polarity_tol)),
        );
    }
    Ok((resolved(&cfg), out))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepKind {
    Santalo,
    #[serde(rename = "thm2.6")]
    Thm26,
    Volume,
}

/// A Cartesian grid of cases, one verdict row each.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub kind: SweepKind,
    #[serde(default)]
    pub dims: Vec<usize>,
    #[serde(default)]
    pub ps: Vec<Exponent>,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_budget")]
    pub budget: String,
    #[serde(default)]
    pub band: Option<[f64; 2]>,
}

fn default_seeds() -> Vec<u64> {
    vec![1]
}

fn default_samples() -> usize {
    1_000_000
}

fn default_budget() -> String {
    "quick".into()
}

pub fn run_sweep(config: &Value) -> Result<Report> {
    let cfg: SweepConfig = parse_config(config, "grid")?;
    let mut out = Vec::new();
    for &seed in &cfg.seeds {
        for &p in &cfg.ps {
            for &n in &cfg.dims {
                let mc = McConfig::new(cfg.samples, seed);
                out.push(match cfg.kind {
                    SweepKind::Santalo => santalo_row(p, n, cfg.band.unwrap_or([2.0, 2.0 * PI]), &mc),
                    SweepKind::Thm26 => {
                        let budget = budget_named(&cfg.budget, seed)?;
                        thm_2_6_row(n, p, &ProductConfig::default(), &budget, &mc)
                    }
                    SweepKind::Volume => volume_row(p, n, &mc),
                });
            }
        }
    }
    let mut report = Report::new("sweep", resolved(&cfg), out);
    report.provenance.seeds = cfg.seeds.clone();
    Ok(report)
}

/// Radial Monte Carlo against the exact `ℓ_p` ball volume: within three
/// standard errors and one percent.
pub fn volume_row(p: Exponent, n: usize, mc: &McConfig) -> Verdict {
    let name = format!("volume l_{p}^{n} seed={}", mc.seed);
    let exact = lp_ball_volume_exact(n, p).value;
    match radial_volume(&NormedSpace::lp(n, p), mc) {
        Ok(v) => {
            let dev = (v.value - exact).abs();
            let ok = dev <= 3.0 * v.stderr && dev <= 0.01 * exact;
            Verdict::new(name)
                .obs("radial", v.observed())
                .obs("exact", Observed::exact(exact))
                .tol("sigmas", 3.0)
                .tol("rel", 0.01)
                .status(Status::from_bool(ok))
        }
        Err(e) => Verdict::errored(name, &e),
    }
}

/// `|B|` for a space spec, exact when possible.
pub fn volume_of(space: &NormedSpace, mc: &McConfig) -> Result<crate::volume::VolumeEstimate> {
    ball_volume(space, mc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_fields_are_named() {
        let err = run_suite("lemma2.1", &serde_json::json!({"instancez": 3})).unwrap_err();
        match err {
            GeoError::Spec { message, .. } => assert!(message.contains("instancez"), "{message}"),
            other => panic!("{other:?}"),
        }
        let err = run_suite("lemma2.4", &serde_json::json!({"c_floor": "x"})).unwrap_err();
        assert!(matches!(err, GeoError::Spec { ref field, .. } if field == "config.c_floor"), "{err:?}");
    }

    #[test]
    fn unknown_suite_and_preset() {
        assert!(run_suite("lemma9", &serde_json::json!({})).is_err());
        assert!(preset("santalo", "huge").is_err());
    }

    #[test]
    fn closed_form_factorizations_pass() {
        let r = run_suite("lemma2.3", &serde_json::json!({"instances": 3})).unwrap();
        assert_eq!(r.count(Status::Fail), 0, "{}", r.to_json());
    }

    #[test]
    fn empty_grid_is_empty() {
        let r = run_sweep(&serde_json::json!({"kind": "santalo"})).unwrap();
        assert!(r.verdicts.is_empty());
        assert_eq!(r.exit_code(false), 0);
    }

    #[test]
    fn santalo_rows_are_exact() {
        let r = run_sweep(&serde_json::json!({"kind": "santalo", "dims": [2], "ps": [1, "inf"]})).unwrap();
        assert_eq!(r.verdicts.len(), 2);
        assert_eq!(r.verdicts[0].observed["normalized_product"].value, r.verdicts[1].observed["normalized_product"].value);
    }
}
