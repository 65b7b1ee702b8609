//! Linear operators between normed spaces and their operator norms.
//!
//! `‖T: X → Y‖` is computed exactly whenever both norms admit a finite
//! Euclidean-form description (`‖y‖_Y = max_c ‖A_c y‖_2` and
//! `‖f‖_{X*} = max_d ‖B_dᵀ f‖_2`): then `‖T‖ = max_{c,d} σ_max(A_c T B_d)`.
//! This covers ℓ_1, ℓ_2 and ℓ_∞ (weighted or not) and their ℓ_2- and
//! ℓ_∞-sums. Everything else falls back to a monotone nonlinear power
//! iteration with multistart, reported as a heuristic bracket.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{GeoError, Result};
use crate::norm::Norm;
use crate::rng::{gaussian_vec, par_map, Streams};
use crate::space::{NormedSpace, SpaceSpec};

/// Largest number of `(c, d)` form pairs enumerated for an exact norm.
pub const PIECE_CAP: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq)]
pub struct LinOperator {
    domain: NormedSpace,
    codomain: NormedSpace,
    matrix: DMatrix<f64>,
}

impl LinOperator {
    /// `matrix` is `codomain.dim() × domain.dim()`.
    pub fn new(domain: NormedSpace, codomain: NormedSpace, matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.nrows() != codomain.dim() {
            return Err(GeoError::InvalidOperator(format!(
                "matrix has {} rows but the codomain has dimension {}",
                matrix.nrows(),
                codomain.dim()
            )));
        }
        if matrix.ncols() != domain.dim() {
            return Err(GeoError::InvalidOperator(format!(
                "matrix has {} columns but the domain has dimension {}",
                matrix.ncols(),
                domain.dim()
            )));
        }
        if let Some(i) = matrix.iter().position(|v| !v.is_finite()) {
            return Err(GeoError::NonFinite(i));
        }
        Ok(LinOperator { domain, codomain, matrix })
    }

    pub fn identity(space: NormedSpace) -> Self {
        let n = space.dim();
        LinOperator { domain: space.clone(), codomain: space, matrix: DMatrix::identity(n, n) }
    }

    pub fn domain(&self) -> &NormedSpace {
        &self.domain
    }

    pub fn codomain(&self) -> &NormedSpace {
        &self.codomain
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn is_square(&self) -> bool {
        self.matrix.is_square()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        crate::linalg::mat_vec(&self.matrix, x)
    }

    /// `T*: Y* → X*`.
    pub fn adjoint(&self) -> LinOperator {
        LinOperator {
            domain: self.codomain.dual(),
            codomain: self.domain.dual(),
            matrix: self.matrix.transpose(),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinOperator) -> Result<LinOperator> {
        if other.codomain.dim() != self.domain.dim() {
            return Err(GeoError::DimensionMismatch { expected: self.domain.dim(), got: other.codomain.dim() });
        }
        LinOperator::new(other.domain.clone(), self.codomain.clone(), &self.matrix * &other.matrix)
    }

    pub fn with_spaces(&self, domain: NormedSpace, codomain: NormedSpace) -> Result<LinOperator> {
        LinOperator::new(domain, codomain, self.matrix.clone())
    }

    pub fn scaled(&self, s: f64) -> LinOperator {
        LinOperator { matrix: &self.matrix * s, ..self.clone() }
    }

    /// Determinant in the coordinate bases; square operators only.
    pub fn det(&self) -> Result<f64> {
        if !self.is_square() {
            return Err(GeoError::NotSquare { rows: self.matrix.nrows(), cols: self.matrix.ncols() });
        }
        Ok(self.matrix.determinant())
    }

    pub fn to_spec(&self) -> OperatorSpec {
        OperatorSpec {
            matrix: crate::linalg::to_rows(&self.matrix),
            domain: self.domain.to_spec(),
            codomain: self.codomain.to_spec(),
        }
    }
}

/// JSON form of an operator; `matrix` is row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorSpec {
    pub matrix: Vec<Vec<f64>>,
    pub domain: SpaceSpec,
    pub codomain: SpaceSpec,
}

impl OperatorSpec {
    /// Parses a JSON operator spec with field paths below `op`.
    pub fn from_json(v: &serde_json::Value) -> Result<OperatorSpec> {
        let obj = v.as_object().ok_or_else(|| GeoError::Spec { field: "op".into(), message: "expected an object".into() })?;
        if let Some(k) = obj.keys().find(|k| !["matrix", "domain", "codomain"].contains(&k.as_str())) {
            return Err(GeoError::Spec { field: format!("op.{k}"), message: "unknown field; expected matrix, domain or codomain".into() });
        }
        let get = |k: &str| obj.get(k).ok_or_else(|| GeoError::Spec { field: format!("op.{k}"), message: "missing".into() });
        Ok(OperatorSpec {
            matrix: crate::error::parse_json(get("matrix")?, "op.matrix")?,
            domain: SpaceSpec::from_json(get("domain")?, "op.domain")?,
            codomain: SpaceSpec::from_json(get("codomain")?, "op.codomain")?,
        })
    }

    pub fn build(&self) -> Result<LinOperator> {
        let domain = self.domain.build_at("op.domain")?;
        let codomain = self.codomain.build_at("op.codomain")?;
        let rows = self.matrix.len();
        let cols = self.matrix.first().map_or(0, |r| r.len());
        if let Some(i) = self.matrix.iter().position(|r| r.len() != cols) {
            return Err(GeoError::Spec { field: format!("op.matrix[{i}]"), message: "ragged row".into() });
        }
        if rows != codomain.dim() || cols != domain.dim() {
            return Err(GeoError::Spec {
                field: "op.matrix".into(),
                message: format!(
                    "shape {rows}x{cols} does not match codomain/domain dimensions {}x{}",
                    codomain.dim(),
                    domain.dim()
                ),
            });
        }
        LinOperator::new(domain, codomain, crate::linalg::from_rows(&self.matrix))
            .map_err(|e| GeoError::Spec { field: "op.matrix".into(), message: e.to_string() })
    }
}

impl Serialize for LinOperator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_spec().serialize(s)
    }
}

/// `⊕ α_k T_k` between `(Σ X_k)_E` and `(Σ Y_k)_E`.
pub fn block_diagonal(ops: &[LinOperator], scalars: &[f64], outer: &NormedSpace) -> Result<LinOperator> {
    block_diagonal_into(ops, scalars, outer, outer)
}

/// `⊕ α_k T_k` between `(Σ X_k)_E` and `(Σ Y_k)_F`.
pub fn block_diagonal_into(
    ops: &[LinOperator],
    scalars: &[f64],
    outer: &NormedSpace,
    cod_outer: &NormedSpace,
) -> Result<LinOperator> {
    if ops.len() != scalars.len() || ops.len() != outer.dim() || ops.len() != cod_outer.dim() {
        return Err(GeoError::InvalidOperator(format!(
            "{} blocks, {} scalars, outer dimension {}",
            ops.len(),
            scalars.len(),
            outer.dim()
        )));
    }
    let domain = NormedSpace::sum(outer.clone(), ops.iter().map(|t| t.domain.clone()).collect())?;
    let codomain = NormedSpace::sum(cod_outer.clone(), ops.iter().map(|t| t.codomain.clone()).collect())?;
    let mut m = DMatrix::zeros(codomain.dim(), domain.dim());
    let (mut r, mut c) = (0, 0);
    for (t, a) in ops.iter().zip(scalars) {
        m.view_mut((r, c), t.matrix.shape()).copy_from(&(&t.matrix * *a));
        r += t.matrix.nrows();
        c += t.matrix.ncols();
    }
    LinOperator::new(domain, codomain, m)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptBudget {
    pub restarts: usize,
    pub iterations: usize,
    pub seed: u64,
}

impl Default for OptBudget {
    fn default() -> Self {
        OptBudget { restarts: 32, iterations: 500, seed: 0 }
    }
}

impl OptBudget {
    /// Named presets: `quick`, `default`, `thorough`.
    pub fn named(name: &str, seed: u64) -> Option<Self> {
        let (restarts, iterations) = match name {
            "quick" => (8, 150),
            "default" => (32, 500),
            "thorough" => (96, 1500),
            _ => return None,
        };
        Some(OptBudget { restarts, iterations, seed })
    }

    pub fn with_seed(self, seed: u64) -> Self {
        OptBudget { seed, ..self }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum NormMethod {
    /// Enumeration over finite Euclidean-form descriptions.
    Exact,
    /// Multistart power iteration; the upper end is not certified.
    Heuristic,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormBracket {
    pub lower: f64,
    pub upper: f64,
    pub method: NormMethod,
    /// Unit vector of the domain attaining `lower`.
    pub maximizer: Vec<f64>,
    /// Norm-one functional on the codomain with `ψ(T x) = lower`.
    pub functional: Vec<f64>,
    pub converged: bool,
}

impl NormBracket {
    pub fn certified(&self) -> bool {
        self.method == NormMethod::Exact
    }
}

pub fn operator_norm(t: &LinOperator, budget: &OptBudget) -> NormBracket {
    operator_norm_between(&t.domain, &t.codomain, &t.matrix, budget)
}

pub fn operator_norm_between(dom: &dyn Norm, cod: &dyn Norm, m: &DMatrix<f64>, budget: &OptBudget) -> NormBracket {
    if m.iter().all(|v| *v == 0.0) {
        return NormBracket {
            lower: 0.0,
            upper: 0.0,
            method: NormMethod::Exact,
            maximizer: vec![0.0; m.ncols()],
            functional: vec![0.0; m.nrows()],
            converged: true,
        };
    }
    if let Some(pieces) = FormPieces::new(dom, cod, PIECE_CAP) {
        let best = pieces.eval(m);
        return NormBracket {
            lower: best.value,
            upper: best.value,
            method: NormMethod::Exact,
            maximizer: best.x,
            functional: best.psi,
            converged: true,
        };
    }
    power_multistart(dom, cod, m, budget)
}

/// Top singular triple, with cheap paths for vectors.
fn top_sv(m: &DMatrix<f64>) -> (f64, DVector<f64>, DVector<f64>) {
    if m.ncols() == 1 {
        let s = m.column(0).norm();
        let u = if s > 0.0 { m.column(0) / s } else { DVector::zeros(m.nrows()) };
        return (s, u, DVector::from_element(1, 1.0));
    }
    if m.nrows() == 1 {
        let s = m.row(0).norm();
        let v = if s > 0.0 { m.row(0).transpose() / s } else { DVector::zeros(m.ncols()) };
        return (s, DVector::from_element(1, 1.0), v);
    }
    let svd = m.clone().svd(true, true);
    let (i, s) = svd.singular_values.argmax();
    let u = svd.u.expect("requested u").column(i).into_owned();
    let v = svd.v_t.expect("requested v_t").row(i).transpose();
    (s, u, v)
}

/// `(σ_max, c, d, u, v)` for one piece `A_c T B_d`.
type Piece = (f64, usize, usize, DVector<f64>, DVector<f64>);

/// The finite family `{σ_max(A_c T B_d)}` whose maximum is `‖T‖`.
#[derive(Clone, Debug)]
pub struct FormPieces {
    left: Vec<DMatrix<f64>>,
    right: Vec<DMatrix<f64>>,
}

#[derive(Clone, Debug)]
pub struct PieceMax {
    pub value: f64,
    pub x: Vec<f64>,
    pub psi: Vec<f64>,
}

impl FormPieces {
    pub fn new(dom: &dyn Norm, cod: &dyn Norm, cap: usize) -> Option<Self> {
        let left = cod.euclidean_forms(cap)?;
        let right: Vec<DMatrix<f64>> = dom.dual_euclidean_forms(cap)?.iter().map(|b| b.transpose()).collect();
        (left.len().checked_mul(right.len())? <= cap).then_some(FormPieces { left, right })
    }

    pub fn len(&self) -> usize {
        self.left.len() * self.right.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn triples(&self, m: &DMatrix<f64>) -> Vec<Piece> {
        let per_right = |d: usize| {
            let tb = m * &self.right[d];
            self.left
                .iter()
                .enumerate()
                .map(|(c, a)| {
                    let (s, u, v) = top_sv(&(a * &tb));
                    (s, c, d, u, v)
                })
                .collect::<Vec<_>>()
        };
        if self.len() >= 4096 {
            par_map(self.right.len(), per_right).into_iter().flatten().collect()
        } else {
            (0..self.right.len()).flat_map(per_right).collect()
        }
    }

    pub fn eval(&self, m: &DMatrix<f64>) -> PieceMax {
        let mut best: Option<Piece> = None;
        for t in self.triples(m) {
            if best.as_ref().is_none_or(|b| t.0 > b.0) {
                best = Some(t);
            }
        }
        let (value, c, d, u, v) = best.expect("at least one piece");
        let x = (&self.right[d] * v).iter().copied().collect();
        let psi = (self.left[c].transpose() * u).iter().copied().collect();
        PieceMax { value, x, psi }
    }

    /// `(1/β) log Σ exp(β σ_i)` and its gradient in `T`.
    pub fn smooth(&self, m: &DMatrix<f64>, beta: f64) -> (f64, DMatrix<f64>) {
        let triples = self.triples(m);
        let max = triples.iter().map(|t| t.0).fold(f64::NEG_INFINITY, f64::max);
        let weights: Vec<f64> = triples.iter().map(|t| (beta * (t.0 - max)).exp()).collect();
        let z: f64 = weights.iter().sum();
        let mut grad = DMatrix::zeros(m.nrows(), m.ncols());
        for ((_, c, d, u, v), w) in triples.iter().zip(&weights) {
            if *w < 1e-16 * z {
                continue;
            }
            let psi = self.left[*c].transpose() * u;
            let x = &self.right[*d] * v;
            grad += (psi * x.transpose()) * (w / z);
        }
        (max + z.ln() / beta, grad)
    }
}

/// Ascent `x ← dual_support_point(Tᵀ ψ(Tx))`; `‖Tx‖` never decreases.
fn power_iteration(
    dom: &dyn Norm,
    cod: &dyn Norm,
    m: &DMatrix<f64>,
    x0: Vec<f64>,
    iterations: usize,
) -> (f64, Vec<f64>, Vec<f64>, bool) {
    let n0 = dom.eval(&x0);
    let mut x: Vec<f64> = if n0 > 0.0 { x0.iter().map(|v| v / n0).collect() } else { x0 };
    let mut y = crate::linalg::mat_vec(m, &x);
    let mut val = cod.eval(&y);
    let mut psi = cod.support_functional(&y);
    for _ in 0..iterations {
        let f = crate::linalg::mat_t_vec(m, &psi);
        let cand = dom.dual_support_point(&f);
        let cy = crate::linalg::mat_vec(m, &cand);
        let cval = cod.eval(&cy);
        if cval <= val * (1.0 + 1e-13) {
            return (val, x, psi, true);
        }
        x = cand;
        y = cy;
        val = cval;
        psi = cod.support_functional(&y);
    }
    (val, x, psi, false)
}

fn power_multistart(dom: &dyn Norm, cod: &dyn Norm, m: &DMatrix<f64>, budget: &OptBudget) -> NormBracket {
    let n = m.ncols();
    let streams = Streams::new(budget.seed);
    let mut starts: Vec<Vec<f64>> = vec![crate::linalg::top_singular(m).1];
    for i in 0..n.min(16) {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        starts.push(e);
    }
    for r in 0..budget.restarts.max(1) {
        starts.push(gaussian_vec(&mut streams.stream(r as u64), n));
    }
    let runs = par_map(starts.len(), |i| power_iteration(dom, cod, m, starts[i].clone(), budget.iterations));
    let mut order: Vec<usize> = (0..runs.len()).collect();
    order.sort_by(|&a, &b| runs[b].0.total_cmp(&runs[a].0).then(a.cmp(&b)));
    let best = &runs[order[0]];
    let quartile = &runs[order[(order.len() / 4).min(order.len() - 1)]];
    let spread = if best.0 > 0.0 { (best.0 - quartile.0) / best.0 } else { 0.0 };
    let delta = spread.max(1e-9);
    NormBracket {
        lower: best.0,
        upper: best.0 * (1.0 + delta),
        method: NormMethod::Heuristic,
        maximizer: best.1.clone(),
        functional: best.2.clone(),
        converged: runs.iter().all(|r| r.3),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent::Exponent;

    fn lp(n: usize, p: f64) -> NormedSpace {
        NormedSpace::lp(n, Exponent::new(p).unwrap())
    }

    #[test]
    fn identity_has_norm_one() {
        for p in [1.0, 1.5, 2.0, 3.0, f64::INFINITY] {
            let t = LinOperator::identity(lp(3, p));
            let b = operator_norm(&t, &OptBudget::default());
            assert!((b.lower - 1.0).abs() < 1e-9 && (b.upper - 1.0).abs() < 1e-6, "p={p}: {b:?}");
        }
    }

    #[test]
    fn diagonal_linf_to_l1_sums_entries() {
        let d = [1.0, -2.0, 0.5];
        let t = LinOperator::new(lp(3, f64::INFINITY), lp(3, 1.0), DMatrix::from_diagonal(&DVector::from_row_slice(&d)))
            .unwrap();
        let b = operator_norm(&t, &OptBudget::default());
        assert!(b.certified());
        assert!((b.lower - 3.5).abs() < 1e-12 && b.upper == b.lower);
    }

    #[test]
    fn hadamard_like_linf_to_l1() {
        let m = DMatrix::from_row_slice(2, 2, &[0.5, 0.5, 0.5, -0.5]);
        let t = LinOperator::new(lp(2, f64::INFINITY), lp(2, 1.0), m).unwrap();
        let b = operator_norm(&t, &OptBudget::default());
        assert!((b.lower - 1.0).abs() < 1e-12 && b.certified());
    }

    #[test]
    fn zero_operator() {
        let t = LinOperator::new(lp(2, 3.0), lp(2, 1.5), DMatrix::zeros(2, 2)).unwrap();
        let b = operator_norm(&t, &OptBudget::default());
        assert_eq!((b.lower, b.upper), (0.0, 0.0));
    }

    #[test]
    fn maximizer_and_functional_certify_lower() {
        let m = DMatrix::from_row_slice(2, 3, &[1.0, -0.4, 2.0, 0.3, 0.9, -1.2]);
        for (p, q) in [(1.0, 2.0), (2.0, f64::INFINITY), (3.0, 1.5), (f64::INFINITY, 4.0)] {
            let t = LinOperator::new(lp(3, p), lp(2, q), m.clone()).unwrap();
            let b = operator_norm(&t, &OptBudget::default());
            let x = &b.maximizer;
            assert!(t.domain().eval(x) <= 1.0 + 1e-9);
            assert!((t.codomain().eval(&t.apply(x)) - b.lower).abs() < 1e-9);
            assert!(t.codomain().dual_eval(&b.functional) <= 1.0 + 1e-9);
            assert!((crate::norm::dot(&b.functional, &t.apply(x)) - b.lower).abs() < 1e-9);
        }
    }

    #[test]
    fn heuristic_agrees_with_exact_where_both_apply() {
        let m = DMatrix::from_row_slice(3, 3, &[1.0, 2.0, -1.0, 0.5, -0.3, 0.8, 2.0, 0.1, 0.4]);
        let dom = lp(3, 2.0);
        let cod = NormedSpace::sum(lp(2, 2.0), vec![lp(2, 1.0), lp(1, 2.0)]).unwrap();
        let exact = operator_norm_between(&dom, &cod, &m, &OptBudget::default());
        let heur = power_multistart(&dom, &cod, &m, &OptBudget::default());
        assert!(exact.certified());
        assert!(heur.lower <= exact.lower * (1.0 + 1e-12));
        assert!((heur.lower - exact.lower).abs() < 1e-6 * exact.lower);
    }

    #[test]
    fn block_diagonal_determinant() {
        let t1 = LinOperator::new(lp(2, 2.0), lp(2, 2.0), DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0])).unwrap();
        let t2 = LinOperator::new(lp(1, 1.0), lp(1, 1.0), DMatrix::from_element(1, 1, 5.0)).unwrap();
        let outer = lp(2, f64::INFINITY);
        let t = block_diagonal(&[t1.clone(), t2.clone()], &[2.0, 3.0], &outer).unwrap();
        let expected = 2.0_f64.powi(2) * t1.det().unwrap() * 3.0 * t2.det().unwrap();
        assert!((t.det().unwrap() - expected).abs() < 1e-12);
        assert_eq!(t.matrix()[(0, 2)], 0.0);
        assert_eq!(t.matrix()[(2, 0)], 0.0);
    }

    #[test]
    fn operator_spec_errors_name_fields() {
        let spec: OperatorSpec = serde_json::from_str(
            r#"{"matrix":[[1,0],[0]],"domain":{"family":"lp","dim":2,"p":2},"codomain":{"family":"lp","dim":2,"p":2}}"#,
        )
        .unwrap();
        match spec.build() {
            Err(GeoError::Spec { field, .. }) => assert_eq!(field, "op.matrix[1]"),
            other => panic!("{other:?}"),
        }
    }
}
