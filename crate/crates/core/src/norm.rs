//! The norm-oracle interface shared by every computation in the crate.
//!
//! A [`Norm`] evaluates a norm on `R^n` together with its dual, exposes
//! support functionals (subgradients), and, for polytope balls, a finite
//! generating set whose absolute convex hull is the unit ball. Convex
//! functions over a ball are maximized on such a generating set, which is
//! what makes several quantities exactly computable.

use nalgebra::DMatrix;

/// Default ceiling on materialized generator sets.
pub const GENERATOR_CAP: usize = 1 << 14;

pub trait Norm: Send + Sync {
    fn dim(&self) -> usize;

    /// `‖x‖`. Callers guarantee `x.len() == self.dim()`.
    fn eval(&self, x: &[f64]) -> f64;

    /// `sup { ⟨f, x⟩ : ‖x‖ ≤ 1 }`.
    fn dual_eval(&self, f: &[f64]) -> f64;

    /// A functional `ψ` with `‖ψ‖_* ≤ 1` and `ψ(x) = ‖x‖`.
    fn support_functional(&self, x: &[f64]) -> Vec<f64>;

    /// A point `x` with `‖x‖ ≤ 1` and `f(x) = ‖f‖_*`.
    fn dual_support_point(&self, f: &[f64]) -> Vec<f64>;

    /// Finite set `G` with `B = conv(G)`, or `None` when the ball is not a
    /// polytope or the set would exceed `cap`.
    fn ball_generators(&self, cap: usize) -> Option<Vec<Vec<f64>>>;

    /// Same for the dual ball.
    fn dual_ball_generators(&self, cap: usize) -> Option<Vec<Vec<f64>>>;

    /// `w` such that `‖x‖ = ‖diag(w) x‖_2`, when the norm is Euclidean.
    fn euclidean_weights(&self) -> Option<Vec<f64>> {
        None
    }

    /// Matrices `A_c` with `‖y‖ = max_c ‖A_c y‖_2`, when the norm has such a
    /// finite description with at most `cap` terms. Euclidean norms give one
    /// diagonal matrix; polytope norms give one row per dual generator.
    fn euclidean_forms(&self, cap: usize) -> Option<Vec<DMatrix<f64>>> {
        default_forms(self.euclidean_weights(), || self.dual_ball_generators(2 * cap), self.dim(), cap)
    }

    /// Same description for the dual norm.
    fn dual_euclidean_forms(&self, cap: usize) -> Option<Vec<DMatrix<f64>>> {
        let w = self.euclidean_weights().map(|w| w.iter().map(|v| 1.0 / v).collect());
        default_forms(w, || self.ball_generators(2 * cap), self.dim(), cap)
    }

    fn label(&self) -> String {
        format!("norm^{}", self.dim())
    }
}

/// Forms from Euclidean weights, else from generators taken up to sign.
pub fn default_forms(
    weights: Option<Vec<f64>>,
    gens: impl FnOnce() -> Option<Vec<Vec<f64>>>,
    n: usize,
    cap: usize,
) -> Option<Vec<DMatrix<f64>>> {
    if let Some(w) = weights {
        return Some(vec![DMatrix::from_diagonal(&nalgebra::DVector::from_vec(w))]);
    }
    let gens = up_to_sign(gens()?);
    (gens.len() <= cap).then(|| gens.iter().map(|g| DMatrix::from_row_slice(1, n, g)).collect())
}

/// The dual norm of `N`, with primal and dual roles swapped.
pub struct Dual<'a, N: Norm + ?Sized>(pub &'a N);

impl<N: Norm + ?Sized> Norm for Dual<'_, N> {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn eval(&self, x: &[f64]) -> f64 {
        self.0.dual_eval(x)
    }
    fn dual_eval(&self, f: &[f64]) -> f64 {
        self.0.eval(f)
    }
    fn support_functional(&self, x: &[f64]) -> Vec<f64> {
        self.0.dual_support_point(x)
    }
    fn dual_support_point(&self, f: &[f64]) -> Vec<f64> {
        self.0.support_functional(f)
    }
    fn ball_generators(&self, cap: usize) -> Option<Vec<Vec<f64>>> {
        self.0.dual_ball_generators(cap)
    }
    fn dual_ball_generators(&self, cap: usize) -> Option<Vec<Vec<f64>>> {
        self.0.ball_generators(cap)
    }
    fn euclidean_weights(&self) -> Option<Vec<f64>> {
        self.0.euclidean_weights().map(|w| w.iter().map(|v| 1.0 / v).collect())
    }
    fn euclidean_forms(&self, cap: usize) -> Option<Vec<DMatrix<f64>>> {
        self.0.dual_euclidean_forms(cap)
    }
    fn dual_euclidean_forms(&self, cap: usize) -> Option<Vec<DMatrix<f64>>> {
        self.0.euclidean_forms(cap)
    }
    fn label(&self) -> String {
        format!("({})*", self.0.label())
    }
}

/// A subspace `F = range(B)` of a polytope space `Y`, coordinatized by
/// `c ↦ Bc` and carrying the restricted norm `‖c‖_F = ‖Bc‖_Y`.
///
/// The unit ball of `F` is a polytope whose vertices are enumerated at
/// construction; they generate the ball and give the dual (quotient) norm.
pub struct SubspaceNorm<'a, N: Norm + ?Sized> {
    ambient: &'a N,
    basis: DMatrix<f64>,
    vertices: Vec<Vec<f64>>,
}

impl<'a, N: Norm + ?Sized> SubspaceNorm<'a, N> {
    /// `basis` is `dim(Y) × k` with full column rank. Returns `None` when the
    /// ambient dual ball has no finite generating set.
    pub fn new(ambient: &'a N, basis: DMatrix<f64>) -> Option<Self> {
        assert_eq!(basis.nrows(), ambient.dim());
        let facets = ambient.dual_ball_generators(GENERATOR_CAP)?;
        // B_F = { c : ψ(Bc) ≤ 1 for every dual generator ψ }
        let rows: Vec<Vec<f64>> = facets
            .iter()
            .map(|psi| {
                let v = basis.tr_mul(&nalgebra::DVector::from_column_slice(psi));
                v.iter().copied().collect()
            })
            .collect();
        let vertices = crate::linalg::polytope_vertices(&rows, basis.ncols());
        Some(SubspaceNorm { ambient, basis, vertices })
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    fn embed(&self, c: &[f64]) -> Vec<f64> {
        let v = &self.basis * nalgebra::DVector::from_column_slice(c);
        v.iter().copied().collect()
    }
}

impl<N: Norm + ?Sized> Norm for SubspaceNorm<'_, N> {
    fn dim(&self) -> usize {
        self.basis.ncols()
    }
    fn eval(&self, c: &[f64]) -> f64 {
        self.ambient.eval(&self.embed(c))
    }
    fn dual_eval(&self, f: &[f64]) -> f64 {
        self.vertices.iter().map(|v| dot(f, v).abs()).fold(0.0, f64::max)
    }
    fn support_functional(&self, c: &[f64]) -> Vec<f64> {
        let psi = self.ambient.support_functional(&self.embed(c));
        let v = self.basis.tr_mul(&nalgebra::DVector::from_column_slice(&psi));
        v.iter().copied().collect()
    }
    fn dual_support_point(&self, f: &[f64]) -> Vec<f64> {
        let mut best = (f64::NEG_INFINITY, vec![0.0; self.dim()]);
        for v in &self.vertices {
            let s = dot(f, v);
            if s.abs() > best.0 {
                best = (s.abs(), v.iter().map(|x| x * s.signum()).collect());
            }
        }
        best.1
    }
    fn ball_generators(&self, cap: usize) -> Option<Vec<Vec<f64>>> {
        (self.vertices.len() <= cap).then(|| self.vertices.clone())
    }
    fn dual_ball_generators(&self, cap: usize) -> Option<Vec<Vec<f64>>> {
        // B_{F*} = Bᵀ(B_{Y*}); images of the ambient dual generators suffice.
        let gens = self.ambient.dual_ball_generators(cap)?;
        Some(
            gens.iter()
                .map(|psi| {
                    let v = self.basis.tr_mul(&nalgebra::DVector::from_column_slice(psi));
                    v.iter().copied().collect()
                })
                .collect(),
        )
    }
    fn label(&self) -> String {
        format!("F{}⊂{}", self.dim(), self.ambient.label())
    }
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Keeps one representative of each `{g, -g}` pair.
pub fn up_to_sign(gens: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    gens.into_iter()
        .filter(|g| g.iter().find(|v| v.abs() > 0.0).is_some_and(|&lead| lead > 0.0))
        .collect()
}
