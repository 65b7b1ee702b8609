//! Finite-dimensional 1-unconditional normed spaces: ℓ_p, weighted ℓ_p and
//! unconditional direct sums `(Σ X_k)_E`.
//!
//! Norms and dual norms are closed-form for every family. The weighted
//! family is a diagonal rescaling, `‖x‖ = ‖(w_i x_i)‖_p`, so its dual is the
//! weighted `ℓ_{p'}` with reciprocal weights. A direct sum is normed by
//! applying the outer norm to the vector of block norms, and its dual is the
//! sum of the duals over the dual outer space.

use std::fmt;

use itertools::Itertools;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{GeoError, Result};
use crate::exponent::Exponent;
use crate::norm::Norm;

#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    Lp { p: Exponent },
    WeightedLp { p: Exponent, weights: Vec<f64> },
    Sum { outer: Box<NormedSpace>, parts: Vec<NormedSpace> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct NormedSpace {
    dim: usize,
    family: Family,
    label: String,
}

impl NormedSpace {
    pub fn lp(dim: usize, p: Exponent) -> Self {
        assert!(dim >= 1, "dimension must be positive");
        NormedSpace { dim, family: Family::Lp { p }, label: format!("l{p}^{dim}") }
    }

    pub fn weighted_lp(p: Exponent, weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(GeoError::InvalidSpace("weighted space needs at least one weight".into()));
        }
        if let Some(i) = weights.iter().position(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(GeoError::InvalidSpace(format!("weight {i} must be finite and positive")));
        }
        let dim = weights.len();
        Ok(NormedSpace { dim, family: Family::WeightedLp { p, weights }, label: format!("wl{p}^{dim}") })
    }

    /// `(Σ parts)_outer`. The outer space is normalized first (weights
    /// rescaled so every basis vector has norm one).
    pub fn sum(outer: NormedSpace, parts: Vec<NormedSpace>) -> Result<Self> {
        if outer.dim != parts.len() {
            return Err(GeoError::InvalidSpace(format!(
                "outer space has dimension {} but {} parts were given",
                outer.dim,
                parts.len()
            )));
        }
        let outer = outer.normalized();
        debug_assert!((0..outer.dim).all(|k| {
            let mut e = vec![0.0; outer.dim];
            e[k] = 1.0;
            (outer.eval(&e) - 1.0).abs() < 1e-12
        }));
        let dim = parts.iter().map(|p| p.dim).sum();
        let label = format!("({})_{}", parts.iter().map(|p| p.label.as_str()).join(" + "), outer.label);
        Ok(NormedSpace { dim, family: Family::Sum { outer: Box::new(outer), parts }, label })
    }

    /// `(Σ_k X)_E` with `m` copies of `X`.
    pub fn power(outer: NormedSpace, part: NormedSpace) -> Result<Self> {
        let m = outer.dim;
        NormedSpace::sum(outer, vec![part; m])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Block dimensions of a direct sum; `[dim]` otherwise.
    pub fn block_dims(&self) -> Vec<usize> {
        match &self.family {
            Family::Sum { parts, .. } => parts.iter().map(|p| p.dim).collect(),
            _ => vec![self.dim],
        }
    }

    pub fn parts(&self) -> Option<(&NormedSpace, &[NormedSpace])> {
        match &self.family {
            Family::Sum { outer, parts } => Some((outer, parts)),
            _ => None,
        }
    }

    /// Same shape with every weight replaced by one, recursively.
    pub fn normalized(&self) -> NormedSpace {
        match &self.family {
            Family::Lp { .. } => self.clone(),
            Family::WeightedLp { p, .. } => NormedSpace::lp(self.dim, *p),
            Family::Sum { outer, parts } => {
                NormedSpace::sum(outer.normalized(), parts.iter().map(|p| p.normalized()).collect())
                    .expect("normalization preserves shape")
            }
        }
    }

    pub fn dual(&self) -> NormedSpace {
        match &self.family {
            Family::Lp { p } => NormedSpace::lp(self.dim, p.conjugate()),
            Family::WeightedLp { p, weights } => {
                NormedSpace::weighted_lp(p.conjugate(), weights.iter().map(|w| 1.0 / w).collect())
                    .expect("reciprocal weights are positive")
            }
            Family::Sum { outer, parts } => {
                NormedSpace::sum(outer.dual(), parts.iter().map(|p| p.dual()).collect())
                    .expect("dual preserves shape")
            }
        }
    }

    /// The plain exponent when the space is `ℓ_p` (or a normalized weighted
    /// `ℓ_p`), which is what the lattice-constant anchors need.
    pub fn lp_exponent(&self) -> Option<Exponent> {
        match &self.family {
            Family::Lp { p } => Some(*p),
            Family::WeightedLp { p, weights } if weights.iter().all(|w| *w == 1.0) => Some(*p),
            _ => None,
        }
    }

    fn check(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(GeoError::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        if let Some(i) = x.iter().position(|v| !v.is_finite()) {
            return Err(GeoError::NonFinite(i));
        }
        Ok(())
    }

    /// Checked `‖x‖`.
    pub fn norm(&self, x: &[f64]) -> Result<f64> {
        self.check(x)?;
        Ok(self.eval(x))
    }

    /// Checked dual norm `sup{⟨f,x⟩ : ‖x‖ ≤ 1}`.
    pub fn dual_norm(&self, f: &[f64]) -> Result<f64> {
        self.check(f)?;
        Ok(self.dual_eval(f))
    }

    fn blocks<'a>(&self, x: &'a [f64]) -> Vec<&'a [f64]> {
        let mut out = Vec::new();
        let mut off = 0;
        for d in self.block_dims() {
            out.push(&x[off..off + d]);
            off += d;
        }
        out
    }

    /// `Some(w)` when `‖x‖ = ‖diag(w)x‖_p`; sums are not diagonal.
    fn diagonal(&self) -> Option<(Exponent, Option<&[f64]>)> {
        match &self.family {
            Family::Lp { p } => Some((*p, None)),
            Family::WeightedLp { p, weights } => Some((*p, Some(weights))),
            Family::Sum { .. } => None,
        }
    }

    pub fn to_spec(&self) -> SpaceSpec {
        match &self.family {
            Family::Lp { p } => SpaceSpec::Lp { dim: self.dim, p: *p },
            Family::WeightedLp { p, weights } => SpaceSpec::Wlp { p: *p, weights: weights.clone() },
            Family::Sum { outer, parts } => SpaceSpec::Sum {
                outer: Box::new(outer.to_spec()),
                parts: parts.iter().map(|p| p.to_spec()).collect(),
            },
        }
    }

    /// Exact unit-ball volume where a closed form exists: ℓ_p and weighted
    /// ℓ_p balls, and direct sums over an ℓ_p outer space (polar
    /// coordinates blockwise reduce the sum to a Dirichlet integral).
    pub fn exact_volume(&self) -> Option<f64> {
        self.exact_log_volume().map(f64::exp)
    }

    pub fn exact_log_volume(&self) -> Option<f64> {
        match &self.family {
            Family::Lp { p } => Some(crate::volume::lp_ball_log_volume(self.dim, *p)),
            Family::WeightedLp { p, weights } => Some(
                crate::volume::lp_ball_log_volume(self.dim, *p) - weights.iter().map(|w| w.ln()).sum::<f64>(),
            ),
            Family::Sum { outer, parts } => {
                let q = outer.lp_exponent()?;
                let mut log_vol = 0.0;
                for part in parts {
                    log_vol += part.exact_log_volume()? + (part.dim as f64).ln();
                }
                match q {
                    // ∫_{[0,1]^m} Π t_k^{n_k-1} dt = Π 1/n_k
                    Exponent::Infinity => {
                        log_vol -= parts.iter().map(|p| (p.dim as f64).ln()).sum::<f64>();
                    }
                    // ∫_{Σ t_k^q ≤ 1, t ≥ 0} Π t_k^{n_k-1} dt = Π Γ(n_k/q) / (q^m Γ(1 + n/q))
                    Exponent::Finite(q) => {
                        let m = parts.len() as f64;
                        log_vol += parts.iter().map(|p| libm::lgamma(p.dim as f64 / q)).sum::<f64>();
                        log_vol -= m * q.ln() + libm::lgamma(1.0 + self.dim as f64 / q);
                    }
                }
                Some(log_vol)
            }
        }
    }
}

impl fmt::Display for NormedSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

fn lp_support(p: Exponent, x: &[f64]) -> Vec<f64> {
    let n = p.lp_norm(x);
    if n == 0.0 {
        return vec![0.0; x.len()];
    }
    match p {
        Exponent::Infinity => {
            let (i, _) = x
                .iter()
                .enumerate()
                .fold((0, -1.0), |(bi, bv), (i, v)| if v.abs() > bv { (i, v.abs()) } else { (bi, bv) });
            let mut out = vec![0.0; x.len()];
            out[i] = x[i].signum();
            out
        }
        Exponent::Finite(1.0) => {
            x.iter().map(|v| if *v == 0.0 { 0.0 } else { v.signum() }).collect()
        }
        Exponent::Finite(q) => x.iter().map(|v| v.signum() * (v.abs() / n).powf(q - 1.0)).collect(),
    }
}

fn sign_vectors(n: usize, cap: usize) -> Option<Vec<Vec<f64>>> {
    if n >= 63 || (1usize << n) > cap {
        return None;
    }
    Some(
        (0..1usize << n)
            .map(|mask| (0..n).map(|i| if mask >> i & 1 == 1 { -1.0 } else { 1.0 }).collect())
            .collect(),
    )
}

fn signed_units(n: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(2 * n);
    for i in 0..n {
        for s in [1.0, -1.0] {
            let mut e = vec![0.0; n];
            e[i] = s;
            out.push(e);
        }
    }
    out
}

/// Generators of the ball `{‖diag(w)x‖_p ≤ 1}`.
fn diagonal_generators(n: usize, p: Exponent, w: Option<&[f64]>, cap: usize) -> Option<Vec<Vec<f64>>> {
    let gens = match p {
        Exponent::Infinity => sign_vectors(n, cap)?,
        Exponent::Finite(1.0) => signed_units(n),
        _ => return None,
    };
    Some(match w {
        None => gens,
        Some(w) => gens.into_iter().map(|g| g.iter().zip(w).map(|(v, wi)| v / wi).collect()).collect(),
    })
}

/// Generators of `(Σ X_k)_E` from those of the parts, for `E = ℓ_1`
/// (union of the embedded part balls) and `E = ℓ_∞` (product of the balls).
fn sum_generators(
    outer_p: Option<Exponent>,
    dims: &[usize],
    part_gens: Vec<Option<Vec<Vec<f64>>>>,
    cap: usize,
) -> Option<Vec<Vec<f64>>> {
    let n: usize = dims.iter().sum();
    let part_gens: Vec<Vec<Vec<f64>>> = part_gens.into_iter().collect::<Option<_>>()?;
    match outer_p? {
        Exponent::Finite(1.0) => {
            let mut out = Vec::new();
            let mut off = 0;
            for (gens, d) in part_gens.iter().zip(dims) {
                for g in gens {
                    let mut v = vec![0.0; n];
                    v[off..off + d].copy_from_slice(g);
                    out.push(v);
                }
                off += d;
            }
            (out.len() <= cap).then_some(out)
        }
        Exponent::Infinity => {
            let count = part_gens.iter().try_fold(1usize, |acc, g| acc.checked_mul(g.len()))?;
            if count > cap {
                return None;
            }
            Some(
                part_gens
                    .iter()
                    .map(|g| g.iter())
                    .multi_cartesian_product()
                    .map(|choice| choice.into_iter().flatten().copied().collect())
                    .collect(),
            )
        }
        _ => None,
    }
}

impl Norm for NormedSpace {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &[f64]) -> f64 {
        match &self.family {
            Family::Lp { p } => p.lp_norm(x),
            Family::WeightedLp { p, weights } => {
                let y: Vec<f64> = x.iter().zip(weights).map(|(v, w)| v * w).collect();
                p.lp_norm(&y)
            }
            Family::Sum { outer, parts } => {
                let b: Vec<f64> = self.blocks(x).iter().zip(parts).map(|(xk, part)| part.eval(xk)).collect();
                outer.eval(&b)
            }
        }
    }

    fn dual_eval(&self, f: &[f64]) -> f64 {
        match &self.family {
            Family::Lp { p } => p.conjugate().lp_norm(f),
            Family::WeightedLp { p, weights } => {
                let y: Vec<f64> = f.iter().zip(weights).map(|(v, w)| v / w).collect();
                p.conjugate().lp_norm(&y)
            }
            Family::Sum { outer, parts } => {
                let b: Vec<f64> =
                    self.blocks(f).iter().zip(parts).map(|(fk, part)| part.dual_eval(fk)).collect();
                outer.dual_eval(&b)
            }
        }
    }

    fn support_functional(&self, x: &[f64]) -> Vec<f64> {
        match &self.family {
            Family::Lp { p } => lp_support(*p, x),
            Family::WeightedLp { p, weights } => {
                let y: Vec<f64> = x.iter().zip(weights).map(|(v, w)| v * w).collect();
                lp_support(*p, &y).iter().zip(weights).map(|(g, w)| g * w).collect()
            }
            Family::Sum { outer, parts } => {
                let blocks = self.blocks(x);
                let b: Vec<f64> = blocks.iter().zip(parts).map(|(xk, part)| part.eval(xk)).collect();
                let g = outer.support_functional(&b);
                blocks
                    .iter()
                    .zip(parts)
                    .zip(&g)
                    .flat_map(|((xk, part), gk)| part.support_functional(xk).into_iter().map(move |v| v * gk))
                    .collect()
            }
        }
    }

    fn dual_support_point(&self, f: &[f64]) -> Vec<f64> {
        match &self.family {
            Family::Lp { p } => lp_support(p.conjugate(), f),
            Family::WeightedLp { p, weights } => {
                let y: Vec<f64> = f.iter().zip(weights).map(|(v, w)| v / w).collect();
                lp_support(p.conjugate(), &y).iter().zip(weights).map(|(g, w)| g / w).collect()
            }
            Family::Sum { outer, parts } => {
                let blocks = self.blocks(f);
                let b: Vec<f64> = blocks.iter().zip(parts).map(|(fk, part)| part.dual_eval(fk)).collect();
                let h = outer.dual_support_point(&b);
                blocks
                    .iter()
                    .zip(parts)
                    .zip(&h)
                    .flat_map(|((fk, part), hk)| part.dual_support_point(fk).into_iter().map(move |v| v * hk))
                    .collect()
            }
        }
    }

    fn ball_generators(&self, cap: usize) -> Option<Vec<Vec<f64>>> {
        match self.diagonal() {
            Some((p, w)) => diagonal_generators(self.dim, p, w, cap),
            None => {
                let (outer, parts) = self.parts()?;
                let gens = parts.iter().map(|p| p.ball_generators(cap)).collect();
                sum_generators(outer.lp_exponent(), &self.block_dims(), gens, cap)
            }
        }
    }

    fn dual_ball_generators(&self, cap: usize) -> Option<Vec<Vec<f64>>> {
        match self.diagonal() {
            Some((p, w)) => {
                let inv: Option<Vec<f64>> = w.map(|w| w.iter().map(|v| 1.0 / v).collect());
                diagonal_generators(self.dim, p.conjugate(), inv.as_deref(), cap)
            }
            None => {
                let (outer, parts) = self.parts()?;
                let gens = parts.iter().map(|p| p.dual_ball_generators(cap)).collect();
                sum_generators(outer.lp_exponent().map(Exponent::conjugate), &self.block_dims(), gens, cap)
            }
        }
    }

    fn euclidean_weights(&self) -> Option<Vec<f64>> {
        match &self.family {
            Family::Lp { p } if p.is_two() => Some(vec![1.0; self.dim]),
            Family::WeightedLp { p, weights } if p.is_two() => Some(weights.clone()),
            Family::Sum { outer, parts } if outer.lp_exponent() == Some(Exponent::TWO) => {
                let mut w = Vec::with_capacity(self.dim);
                for part in parts {
                    w.extend(part.euclidean_weights()?);
                }
                Some(w)
            }
            _ => None,
        }
    }

    fn euclidean_forms(&self, cap: usize) -> Option<Vec<DMatrix<f64>>> {
        let defaults = || {
            crate::norm::default_forms(self.euclidean_weights(), || self.dual_ball_generators(2 * cap), self.dim, cap)
        };
        let Some((outer, parts)) = self.parts() else { return defaults() };
        let dims = self.block_dims();
        let offsets: Vec<usize> = dims.iter().scan(0, |acc, d| { let o = *acc; *acc += d; Some(o) }).collect();
        match outer.lp_exponent() {
            // max_k ‖y_k‖: union of the part forms
            Some(Exponent::Infinity) => {
                let mut out = Vec::new();
                for ((part, &off), &d) in parts.iter().zip(&offsets).zip(&dims) {
                    for a in part.euclidean_forms(cap)? {
                        let mut m = DMatrix::zeros(a.nrows(), self.dim);
                        m.view_mut((0, off), (a.nrows(), d)).copy_from(&a);
                        out.push(m);
                    }
                    if out.len() > cap {
                        return None;
                    }
                }
                Some(out)
            }
            // (Σ ‖y_k‖²)^{1/2}: one stacked form per choice of part forms
            Some(Exponent::Finite(2.0)) => {
                let part_forms: Vec<Vec<DMatrix<f64>>> =
                    parts.iter().map(|p| p.euclidean_forms(cap)).collect::<Option<_>>()?;
                let count = part_forms.iter().try_fold(1usize, |acc, f| acc.checked_mul(f.len()))?;
                if count > cap {
                    return defaults();
                }
                Some(
                    part_forms
                        .iter()
                        .map(|f| f.iter())
                        .multi_cartesian_product()
                        .map(|choice| {
                            let rows: usize = choice.iter().map(|a| a.nrows()).sum();
                            let mut m = DMatrix::zeros(rows, self.dim);
                            let mut r = 0;
                            for ((a, &off), &d) in choice.iter().zip(&offsets).zip(&dims) {
                                m.view_mut((r, off), (a.nrows(), d)).copy_from(a);
                                r += a.nrows();
                            }
                            m
                        })
                        .collect(),
                )
            }
            _ => defaults(),
        }
    }

    fn dual_euclidean_forms(&self, cap: usize) -> Option<Vec<DMatrix<f64>>> {
        self.dual().euclidean_forms(cap)
    }

    fn label(&self) -> String {
        self.label.clone()
    }
}

/// JSON form of a space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase", deny_unknown_fields)]
pub enum SpaceSpec {
    Lp { dim: usize, p: Exponent },
    Wlp { p: Exponent, weights: Vec<f64> },
    Sum { outer: Box<SpaceSpec>, parts: Vec<SpaceSpec> },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LpFields {
    #[serde(rename = "family")]
    _family: serde::de::IgnoredAny,
    dim: usize,
    p: Exponent,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WlpFields {
    #[serde(rename = "family")]
    _family: serde::de::IgnoredAny,
    p: Exponent,
    weights: Vec<f64>,
}

impl SpaceSpec {
    /// Parses a JSON space spec, naming the offending field by its full
    /// path below `path` on error.
    pub fn from_json(v: &serde_json::Value, path: &str) -> Result<SpaceSpec> {
        let spec_err = |field: String, message: String| GeoError::Spec { field, message };
        let obj = v.as_object().ok_or_else(|| spec_err(path.into(), "expected an object".into()))?;
        let family = obj
            .get("family")
            .and_then(|f| f.as_str())
            .ok_or_else(|| spec_err(format!("{path}.family"), "missing; expected lp, wlp or sum".into()))?;
        match family {
            "lp" => {
                let f: LpFields = crate::error::parse_json(v, path)?;
                Ok(SpaceSpec::Lp { dim: f.dim, p: f.p })
            }
            "wlp" => {
                let f: WlpFields = crate::error::parse_json(v, path)?;
                Ok(SpaceSpec::Wlp { p: f.p, weights: f.weights })
            }
            "sum" => {
                if let Some(k) = obj.keys().find(|k| !["family", "outer", "parts"].contains(&k.as_str())) {
                    return Err(spec_err(format!("{path}.{k}"), "unknown field; expected outer or parts".into()));
                }
                let outer = obj.get("outer").ok_or_else(|| spec_err(format!("{path}.outer"), "missing".into()))?;
                let parts = obj
                    .get("parts")
                    .and_then(|p| p.as_array())
                    .ok_or_else(|| spec_err(format!("{path}.parts"), "missing or not an array".into()))?;
                Ok(SpaceSpec::Sum {
                    outer: Box::new(SpaceSpec::from_json(outer, &format!("{path}.outer"))?),
                    parts: parts
                        .iter()
                        .enumerate()
                        .map(|(i, p)| SpaceSpec::from_json(p, &format!("{path}.parts[{i}]")))
                        .collect::<Result<_>>()?,
                })
            }
            other => Err(spec_err(format!("{path}.family"), format!("unknown family `{other}`; expected lp, wlp or sum"))),
        }
    }

    pub fn build(&self) -> Result<NormedSpace> {
        self.build_at("space")
    }

    pub(crate) fn build_at(&self, path: &str) -> Result<NormedSpace> {
        let wrap = |field: String, e: GeoError| GeoError::Spec { field, message: e.to_string() };
        match self {
            SpaceSpec::Lp { dim, .. } if *dim == 0 => {
                Err(GeoError::Spec { field: format!("{path}.dim"), message: "must be positive".into() })
            }
            SpaceSpec::Lp { dim, p } => Ok(NormedSpace::lp(*dim, *p)),
            SpaceSpec::Wlp { p, weights } => {
                NormedSpace::weighted_lp(*p, weights.clone()).map_err(|e| wrap(format!("{path}.weights"), e))
            }
            SpaceSpec::Sum { outer, parts } => {
                let outer_space = outer.build_at(&format!("{path}.outer"))?;
                let parts = parts
                    .iter()
                    .enumerate()
                    .map(|(i, p)| p.build_at(&format!("{path}.parts[{i}]")))
                    .collect::<Result<Vec<_>>>()?;
                NormedSpace::sum(outer_space, parts).map_err(|e| wrap(format!("{path}.parts"), e))
            }
        }
    }
}

impl Serialize for NormedSpace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_spec().serialize(s)
    }
}

impl<'de> Deserialize<'de> for NormedSpace {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        SpaceSpec::deserialize(d)?.build().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inf() -> Exponent {
        Exponent::INF
    }

    #[test]
    fn euclidean_norm() {
        let s = NormedSpace::lp(2, Exponent::TWO);
        assert_eq!(s.norm(&[3.0, 4.0]).unwrap(), 5.0);
    }

    #[test]
    fn sum_norm_is_outer_of_block_norms() {
        let s = NormedSpace::sum(
            NormedSpace::lp(2, inf()),
            vec![NormedSpace::lp(2, Exponent::ONE), NormedSpace::lp(2, Exponent::TWO)],
        )
        .unwrap();
        assert_eq!(s.dim(), 4);
        assert_eq!(s.norm(&[1.0, 1.0, 3.0, 4.0]).unwrap(), 5.0);
    }

    #[test]
    fn weighted_l1() {
        let s = NormedSpace::weighted_lp(Exponent::ONE, vec![2.0, 3.0]).unwrap();
        assert_eq!(s.norm(&[1.0, -1.0]).unwrap(), 5.0);
        // dual is max |f_i| / w_i
        assert!((s.dual_norm(&[4.0, 3.0]).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn l1_dual_is_linf() {
        let s = NormedSpace::lp(3, Exponent::ONE);
        assert_eq!(s.dual_norm(&[1.0, -2.0, 3.0]).unwrap(), 3.0);
    }

    #[test]
    fn sum_dual_is_l1_of_block_l2() {
        let s = NormedSpace::power(NormedSpace::lp(2, inf()), NormedSpace::lp(2, Exponent::TWO)).unwrap();
        assert!((s.dual_norm(&[3.0, 4.0, 0.0, 1.0]).unwrap() - 6.0).abs() < 1e-12);
    }

    #[test]
    fn errors_on_bad_input() {
        let s = NormedSpace::lp(2, Exponent::TWO);
        assert!(matches!(s.norm(&[1.0]), Err(GeoError::DimensionMismatch { .. })));
        assert!(matches!(s.norm(&[1.0, f64::NAN]), Err(GeoError::NonFinite(1))));
        assert!(NormedSpace::weighted_lp(Exponent::ONE, vec![1.0, 0.0]).is_err());
        assert!(NormedSpace::sum(NormedSpace::lp(3, inf()), vec![NormedSpace::lp(1, inf())]).is_err());
    }

    #[test]
    fn outer_is_normalized_at_construction() {
        let outer = NormedSpace::weighted_lp(Exponent::TWO, vec![2.0, 5.0]).unwrap();
        let s = NormedSpace::sum(outer, vec![NormedSpace::lp(1, inf()), NormedSpace::lp(1, inf())]).unwrap();
        assert!((s.eval(&[1.0, 0.0]) - 1.0).abs() < 1e-15);
        assert!((s.eval(&[0.0, 1.0]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn support_functional_attains_norm() {
        let spaces = [
            NormedSpace::lp(3, Exponent::new(1.5).unwrap()),
            NormedSpace::lp(3, inf()),
            NormedSpace::weighted_lp(Exponent::new(3.0).unwrap(), vec![1.0, 2.0, 0.5]).unwrap(),
            NormedSpace::sum(
                NormedSpace::lp(2, Exponent::new(4.0).unwrap()),
                vec![NormedSpace::lp(2, Exponent::ONE), NormedSpace::lp(1, Exponent::TWO)],
            )
            .unwrap(),
        ];
        let x = [0.3, -1.2, 0.7];
        for s in &spaces {
            let psi = s.support_functional(&x);
            assert!((crate::norm::dot(&psi, &x) - s.eval(&x)).abs() < 1e-12, "{s}");
            assert!(s.dual_eval(&psi) <= 1.0 + 1e-12, "{s}");
            let y = s.dual_support_point(&x);
            assert!((crate::norm::dot(&y, &x) - s.dual_eval(&x)).abs() < 1e-12, "{s}");
            assert!(s.eval(&y) <= 1.0 + 1e-12, "{s}");
        }
    }

    #[test]
    fn generators_of_sums() {
        let s = NormedSpace::sum(
            NormedSpace::lp(2, inf()),
            vec![NormedSpace::lp(2, Exponent::ONE), NormedSpace::lp(1, inf())],
        )
        .unwrap();
        let g = s.ball_generators(1000).unwrap();
        assert_eq!(g.len(), 4 * 2);
        assert!(g.iter().all(|v| (s.eval(v) - 1.0).abs() < 1e-15));
        let d = s.dual_ball_generators(1000).unwrap();
        // dual is the l1-sum of (linf^2, l1^1): 4 + 2 generators
        assert_eq!(d.len(), 6);
        assert!(NormedSpace::lp(2, Exponent::TWO).ball_generators(1000).is_none());
    }

    #[test]
    fn forms_reproduce_the_norm() {
        let spaces = [
            NormedSpace::lp(3, Exponent::TWO),
            NormedSpace::lp(3, Exponent::ONE),
            NormedSpace::lp(3, inf()),
            NormedSpace::sum(
                NormedSpace::lp(2, Exponent::TWO),
                vec![NormedSpace::lp(2, Exponent::ONE), NormedSpace::lp(2, inf())],
            )
            .unwrap(),
            NormedSpace::sum(
                NormedSpace::lp(2, inf()),
                vec![NormedSpace::lp(2, Exponent::TWO), NormedSpace::lp(1, inf())],
            )
            .unwrap(),
        ];
        let y = [0.3, -1.1, 0.8, 0.25];
        for s in &spaces {
            let y = &y[..s.dim()];
            let v = nalgebra::DVector::from_column_slice(y);
            let via_forms = s.euclidean_forms(1 << 10).unwrap().iter().map(|a| (a * &v).norm()).fold(0.0, f64::max);
            assert!((via_forms - s.eval(y)).abs() < 1e-12, "{s}");
            // the dual of the last space is an ℓ_1-sum with a Euclidean part, which has no forms
            if let Some(forms) = s.dual_euclidean_forms(1 << 10) {
                let dual = forms.iter().map(|a| (a * &v).norm()).fold(0.0, f64::max);
                assert!((dual - s.dual_eval(y)).abs() < 1e-12, "{s}");
            }
        }
        assert!(spaces[..4].iter().all(|s| s.dual_euclidean_forms(1 << 10).is_some()));
        assert!(NormedSpace::lp(3, Exponent::new(3.0).unwrap()).euclidean_forms(1 << 10).is_none());
    }

    #[test]
    fn spec_round_trip_and_errors() {
        let json = r#"{"family":"sum","outer":{"family":"lp","dim":2,"p":"inf"},
            "parts":[{"family":"lp","dim":2,"p":1},{"family":"wlp","p":2,"weights":[1,2]}]}"#;
        let s: NormedSpace = serde_json::from_str(json).unwrap();
        assert_eq!(s.dim(), 4);
        let back: NormedSpace = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(s, back);

        let bad: SpaceSpec = serde_json::from_str(
            r#"{"family":"sum","outer":{"family":"lp","dim":2,"p":2},
               "parts":[{"family":"lp","dim":1,"p":2},{"family":"wlp","p":2,"weights":[1,-2]}]}"#,
        )
        .unwrap();
        match bad.build() {
            Err(GeoError::Spec { field, .. }) => assert_eq!(field, "space.parts[1].weights"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn exact_volume_of_sum_over_linf_is_product() {
        let s = NormedSpace::sum(
            NormedSpace::lp(2, inf()),
            vec![NormedSpace::lp(2, Exponent::ONE), NormedSpace::lp(2, Exponent::TWO)],
        )
        .unwrap();
        assert!((s.exact_volume().unwrap() - 2.0 * std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn exact_volume_of_lp_sum_of_lp_is_lp() {
        for p in [1.0, 1.5, 2.0, 3.0] {
            let p = Exponent::new(p).unwrap();
            let s = NormedSpace::sum(
                NormedSpace::lp(3, p),
                vec![NormedSpace::lp(2, p), NormedSpace::lp(1, p), NormedSpace::lp(3, p)],
            )
            .unwrap();
            let direct = NormedSpace::lp(6, p).exact_volume().unwrap();
            assert!((s.exact_volume().unwrap() / direct - 1.0).abs() < 1e-12);
        }
    }
}
