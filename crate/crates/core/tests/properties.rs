use banachgeo::norm::dot;
use banachgeo::summing::{pi_p_bracket, pi_p_lower};
use banachgeo::volume::{hit_or_miss_box, radial_volume, zonotope_volume};
use banachgeo::vr::vr_estimate;
use banachgeo::{operator_norm, Exponent, LinOperator, McConfig, Norm, NormedSpace, OptBudget};
use itertools::Itertools;
use nalgebra::DMatrix;
use proptest::collection::vec;
use proptest::prelude::*;

fn exponent() -> impl Strategy<Value = Exponent> {
    prop::sample::select(vec![1.0, 1.5, 2.0, 3.0, 4.0, f64::INFINITY]).prop_map(|p| Exponent::new(p).unwrap())
}

fn space() -> impl Strategy<Value = NormedSpace> {
    prop_oneof![
        (1usize..6, exponent()).prop_map(|(n, p)| NormedSpace::lp(n, p)),
        (exponent(), vec(0.2f64..5.0, 1..6)).prop_map(|(p, w)| NormedSpace::weighted_lp(p, w).unwrap()),
        (exponent(), vec((1usize..3, exponent()), 1..4)).prop_map(|(r, parts)| {
            let outer = NormedSpace::lp(parts.len(), r);
            NormedSpace::sum(outer, parts.into_iter().map(|(d, q)| NormedSpace::lp(d, q)).collect()).unwrap()
        }),
    ]
}

fn space_and_vectors() -> impl Strategy<Value = (NormedSpace, Vec<f64>, Vec<f64>)> {
    space().prop_flat_map(|s| {
        let n = s.dim();
        (Just(s), vec(-10.0f64..10.0, n), vec(-10.0f64..10.0, n))
    })
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = DMatrix<f64>> {
    vec(-2.0f64..2.0, rows * cols).prop_map(move |v| DMatrix::from_column_slice(rows, cols, &v))
}

struct Scaled<'a>(&'a NormedSpace, f64);

impl Norm for Scaled<'_> {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn eval(&self, x: &[f64]) -> f64 {
        self.0.eval(x) / self.1
    }
    fn dual_eval(&self, f: &[f64]) -> f64 {
        self.0.dual_eval(f) * self.1
    }
    fn support_functional(&self, x: &[f64]) -> Vec<f64> {
        self.0.support_functional(x).iter().map(|v| v / self.1).collect()
    }
    fn dual_support_point(&self, f: &[f64]) -> Vec<f64> {
        self.0.dual_support_point(f).iter().map(|v| v * self.1).collect()
    }
    fn ball_generators(&self, _: usize) -> Option<Vec<Vec<f64>>> {
        None
    }
    fn dual_ball_generators(&self, _: usize) -> Option<Vec<Vec<f64>>> {
        None
    }
}

/// `y` lies in the zonotope iff `|⟨u, y⟩| ≤ Σ_j |⟨u, m_j⟩|` for every
/// facet normal `u`, and facet normals annihilate `n − 1` generators.
fn in_zonotope(cols: &DMatrix<f64>, normals: &[Vec<f64>], y: &[f64]) -> bool {
    normals.iter().all(|u| {
        let h: f64 = cols.column_iter().map(|c| dot(u, c.as_slice()).abs()).sum();
        dot(u, y).abs() <= h
    })
}

fn facet_normals(cols: &DMatrix<f64>) -> Vec<Vec<f64>> {
    let n = cols.nrows();
    (0..cols.ncols())
        .combinations(n - 1)
        .map(|s| {
            let sub = DMatrix::from_fn(n - 1, n, |i, j| cols[(j, s[i])]);
            let eig = (sub.transpose() * &sub).symmetric_eigen();
            let k = eig.eigenvalues.imin();
            eig.eigenvectors.column(k).iter().copied().collect()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn norm_axioms((s, x, y) in space_and_vectors(), lambda in -5.0f64..5.0) {
        let nx = s.eval(&x);
        prop_assert!(nx >= 0.0);
        let sx: Vec<f64> = x.iter().map(|v| lambda * v).collect();
        prop_assert!(close(s.eval(&sx), lambda.abs() * nx, 1e-9));
        let sum: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        prop_assert!(s.eval(&sum) <= (nx + s.eval(&y)) * (1.0 + 1e-9));
        prop_assert_eq!(s.eval(&vec![0.0; s.dim()]), 0.0);
    }

    #[test]
    fn duality_and_holder((s, x, f) in space_and_vectors()) {
        prop_assert!(dot(&f, &x).abs() <= s.dual_eval(&f) * s.eval(&x) * (1.0 + 1e-9) + 1e-12);
        prop_assert!(close(s.dual().eval(&f), s.dual_eval(&f), 1e-9));
        prop_assert!(close(s.dual().dual().eval(&x), s.eval(&x), 1e-9));
        if s.eval(&x) > 1e-9 {
            let g = s.support_functional(&x);
            prop_assert!(close(s.dual_eval(&g), 1.0, 1e-9));
            prop_assert!(close(dot(&g, &x), s.eval(&x), 1e-9));
        }
        if s.dual_eval(&f) > 1e-9 {
            let z = s.dual_support_point(&f);
            prop_assert!(close(s.eval(&z), 1.0, 1e-9));
            prop_assert!(close(dot(&f, &z), s.dual_eval(&f), 1e-9));
        }
    }

    #[test]
    fn unconditional((s, x, y) in space_and_vectors()) {
        let flipped: Vec<f64> = x.iter().zip(&y).map(|(a, b)| if *b < 0.0 { -a } else { *a }).collect();
        prop_assert!(close(s.eval(&flipped), s.eval(&x), 1e-12));
        let smaller: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a * (b.abs() / 10.0)).collect();
        prop_assert!(s.eval(&smaller) <= s.eval(&x) * (1.0 + 1e-12));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn doubling_the_ball_scales_volume(s in space(), seed in any::<u64>()) {
        let cfg = McConfig::new(10_000, seed);
        let base = radial_volume(&s, &cfg).unwrap();
        let doubled = radial_volume(&Scaled(&s, 2.0), &cfg).unwrap();
        let factor = 2f64.powi(s.dim() as i32);
        prop_assert!(close(doubled.value, factor * base.value, 1e-9));
        prop_assert!(close(doubled.stderr, factor * base.stderr, 1e-9));
    }

    #[test]
    fn zonotope_matches_hit_or_miss(cols in (2usize..4).prop_flat_map(|n| matrix(n, n + 1)), seed in any::<u64>()) {
        let z = zonotope_volume(&cols).unwrap();
        prop_assume!(!z.degenerate);
        let normals = facet_normals(&cols);
        let h: Vec<f64> = cols.row_iter().map(|r| r.iter().map(|v| v.abs()).sum()).collect();
        let hm = hit_or_miss_box(&h, |y| in_zonotope(&cols, &normals, y), &McConfig::new(200_000, seed)).unwrap();
        prop_assert!((z.value - hm.value).abs() <= 4.0 * hm.stderr + 1e-9 * z.value, "{} vs {} ± {}", z.value, hm.value, hm.stderr);
    }

    #[test]
    fn square_zonotope_is_a_parallelotope(cols in (1usize..5).prop_flat_map(|n| matrix(n, n))) {
        let z = zonotope_volume(&cols).unwrap();
        let n = cols.nrows() as i32;
        prop_assert!(close(z.value, 2f64.powi(n) * cols.determinant().abs(), 1e-9));
    }
}

fn lp2(p: Exponent) -> NormedSpace {
    NormedSpace::lp(2, p)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn summing_norms_form_an_ideal(
        ps in vec(prop::sample::select(vec![1.0, 2.0, f64::INFINITY]), 4),
        p in prop::sample::select(vec![1.0, 2.0]),
        a in matrix(2, 2), t in matrix(2, 2), b in matrix(2, 2), seed in any::<u64>(),
    ) {
        let e: Vec<Exponent> = ps.iter().map(|&q| Exponent::new(q).unwrap()).collect();
        let p = Exponent::new(p).unwrap();
        let budget = OptBudget::named("quick", seed).unwrap();
        let bop = LinOperator::new(lp2(e[0]), lp2(e[1]), b).unwrap();
        let top = LinOperator::new(lp2(e[1]), lp2(e[2]), t).unwrap();
        let aop = LinOperator::new(lp2(e[2]), lp2(e[3]), a).unwrap();
        let composed = aop.compose(&top.compose(&bop).unwrap()).unwrap();
        let lower = pi_p_lower(&composed, p, &budget).value;
        let upper = operator_norm(&aop, &budget).upper * pi_p_bracket(&top, p, &budget).unwrap().upper * operator_norm(&bop, &budget).upper;
        prop_assert!(lower <= upper * (1.0 + 1e-6) + 1e-12, "{lower} > {upper}");
    }

    #[test]
    fn summing_norms_decrease_in_p(
        qs in vec(prop::sample::select(vec![1.0, 2.0, f64::INFINITY]), 2),
        t in matrix(2, 3), seed in any::<u64>(),
    ) {
        let dom = NormedSpace::lp(3, Exponent::new(qs[0]).unwrap());
        let t = LinOperator::new(dom, lp2(Exponent::new(qs[1]).unwrap()), t).unwrap();
        let budget = OptBudget::named("quick", seed).unwrap();
        let exps = [Exponent::ONE, Exponent::TWO, Exponent::Finite(4.0), Exponent::INF];
        let brackets: Vec<_> = exps.iter().map(|&p| pi_p_bracket(&t, p, &budget).unwrap()).collect();
        for w in brackets.windows(2) {
            prop_assert!(w[1].lower <= w[0].upper * (1.0 + 1e-6) + 1e-12, "{:?}", w);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn volume_ratio_ignores_coordinate_order(
        w in vec(0.5f64..2.0, 3), q in prop::sample::select(vec![1.0, 3.0, f64::INFINITY]),
        p in prop::sample::select(vec![2.0, f64::INFINITY]), seed in any::<u64>(),
    ) {
        let q = Exponent::new(q).unwrap();
        let p = Exponent::new(p).unwrap();
        let permuted = vec![w[2], w[0], w[1]];
        // the quick budget can stop in a worse local optimum at p = ∞
        let budget = OptBudget::named("default", seed).unwrap();
        let mc = McConfig::new(10_000, seed);
        let a = vr_estimate(&NormedSpace::weighted_lp(q, w).unwrap(), p, 3, &budget, &mc).unwrap();
        let b = vr_estimate(&NormedSpace::weighted_lp(q, permuted).unwrap(), p, 3, &budget, &mc).unwrap();
        prop_assert!(close(a.value, b.value, 1e-2), "{} vs {}", a.value, b.value);
    }
}
