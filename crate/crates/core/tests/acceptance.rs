//! Acceptance criteria 1 to 9, one PASS/FAIL line each.
//!
//! Every criterion is evaluated as stated. The harness exits nonzero when an
//! outcome differs from `EXPECTED`; the single expected FAIL is the Santaló
//! band `[2, 2π]`, which `n (|B||B°|)^{1/n}` leaves for every `n ≥ 3`
//! (the Euclidean value tends to `2πe`).

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use banachgeo::suites::{run_suite, volume_row};
use banachgeo::summing::{pi_p_bracket, pi_p_lower};
use banachgeo::vr::{vr_best, vr_estimate};
use banachgeo::{Exponent, LinOperator, McConfig, NormedSpace, OptBudget, Report, Status};
use nalgebra::DMatrix;
use rand_chacha::rand_core::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

const EXPECTED: [bool; 9] = [true, true, true, true, true, true, true, false, true];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn suite(name: &str) -> Report {
    run_suite(name, &serde_json::json!({})).expect("default config is valid")
}

fn all_pass(r: &Report) -> bool {
    r.verdicts.iter().all(|v| v.status == Status::Pass)
}

fn failures(r: &Report) -> String {
    let bad: Vec<&str> = r.verdicts.iter().filter(|v| v.status != Status::Pass).map(|v| v.name.as_str()).collect();
    if bad.is_empty() {
        format!("{} verdicts PASS", r.verdicts.len())
    } else {
        format!("not PASS: {}", bad.join("; "))
    }
}

fn exps(ps: &[f64]) -> Vec<Exponent> {
    ps.iter().map(|&p| Exponent::new(p).unwrap()).collect()
}

fn criterion_1() -> Outcome {
    let mut worst = Duration::ZERO;
    let mut bad = Vec::new();
    for p in exps(&[1.0, 1.5, 2.0, 4.0, f64::INFINITY]) {
        for n in 2..=6 {
            let t = Instant::now();
            let v = volume_row(p, n, &McConfig::new(1_000_000, 1000 + n as u64));
            let dt = t.elapsed();
            worst = worst.max(dt);
            if v.status != Status::Pass || dt > Duration::from_secs(30) {
                bad.push(v.name);
            }
        }
    }
    outcome(bad.is_empty(), format!("25 cases, slowest {worst:.2?}, off: {bad:?}"))
}

fn criterion_4() -> Outcome {
    let mut bad = Vec::new();
    let mut worst = 0.0_f64;
    for p in exps(&[1.5, 2.0, 4.0, f64::INFINITY]) {
        for n in 1..=5 {
            let budget = OptBudget::named("default", 40 + n as u64).unwrap();
            let r = vr_best(&NormedSpace::lp(n, p), p, &budget, &McConfig::new(200_000, 7)).unwrap();
            let dev = (r.value - 1.0).abs();
            worst = worst.max(dev);
            if dev > 0.02 {
                bad.push(format!("l_{p}^{n}={:.4}", r.value));
            }
        }
    }
    let budget = OptBudget::named("default", 5).unwrap();
    let mc = McConfig::new(200_000, 5);
    let sq = vr_estimate(&NormedSpace::lp(2, Exponent::INF), Exponent::TWO, 2, &budget, &mc).unwrap().value;
    let sq_oracle = square_against_disc_oracle();
    let diamond = vr_best(&NormedSpace::lp(2, Exponent::ONE), Exponent::INF, &budget, &mc).unwrap().value;
    let diamond_oracle = diamond_against_cube_oracle();
    let target = (4.0 / PI).sqrt();
    let ok_sq = (sq / target - 1.0).abs() <= 0.02 && (sq_oracle / target - 1.0).abs() <= 0.02;
    let ok_di = (diamond - 1.0).abs() <= 0.02 && (diamond_oracle - 1.0).abs() <= 0.02;
    if !ok_sq {
        bad.push(format!("vr(l_inf^2,l_2)={sq:.5} oracle {sq_oracle:.5}"));
    }
    if !ok_di {
        bad.push(format!("vr(l_1^2,l_inf)={diamond:.5} oracle {diamond_oracle:.5}"));
    }
    outcome(
        bad.is_empty(),
        format!("max |vr-1| on l_p^n {worst:.2e}; square {sq:.5} (target {target:.5}); diamond {diamond:.5}; off: {bad:?}"),
    )
}

/// `T: ℓ_2^2 → ℓ_∞^2` has norm the largest Euclidean row length, so
/// norm-one maps have unit rows at angles `a, b` and `|T(B_2)| = π |sin(b − a)|`.
fn square_against_disc_oracle() -> f64 {
    let steps = 720;
    let mut best = 0.0_f64;
    for i in 0..steps {
        for j in 0..steps {
            let (a, b) = (PI * i as f64 / steps as f64, PI * j as f64 / steps as f64);
            best = best.max(PI * (b - a).sin().abs());
        }
    }
    (4.0 / best).sqrt()
}

/// Grid search over `T: ℓ_∞^2 → ℓ_1^2`: `|T(B_∞)| = 4 |det T|` and
/// `‖T‖ = max ‖c_1 ± c_2‖_1`.
fn diamond_against_cube_oracle() -> f64 {
    let k = 20;
    let grid: Vec<f64> = (-k..=k).map(|i| i as f64 / k as f64).collect();
    let mut best = 0.0_f64;
    for &a in &grid {
        for &b in &grid {
            for &c in &grid {
                for &d in &grid {
                    let norm = ((a + b).abs() + (c + d).abs()).max((a - b).abs() + (c - d).abs());
                    if norm > 0.0 {
                        best = best.max(4.0 * (a * d - b * c).abs() / (norm * norm));
                    }
                }
            }
        }
    }
    (2.0 / best).sqrt()
}

fn gaussian(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| StandardNormal.sample(rng))
}

fn criterion_7(thm13: &Report, lemma17: &Report) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let qs = exps(&[1.0, 1.5, 2.0, 3.0, f64::INFINITY]);
    let ps = exps(&[1.0, 2.0, 4.0]);
    let mut inverted = 0;
    let mut heuristic = 0;
    for i in 0..100u64 {
        let (n, m) = (2 + (rng.next_u64() % 2) as usize, 2 + (rng.next_u64() % 2) as usize);
        let dom = NormedSpace::lp(n, qs[(rng.next_u64() % 5) as usize]);
        let cod = NormedSpace::lp(m, qs[(rng.next_u64() % 5) as usize]);
        let p = ps[(i % 3) as usize];
        let t = LinOperator::new(dom, cod, gaussian(&mut rng, m, n)).unwrap();
        let b = pi_p_bracket(&t, p, &OptBudget::named("quick", i).unwrap()).unwrap();
        if b.lower > b.upper {
            inverted += 1;
        }
        if !b.certified() {
            heuristic += 1;
        }
    }
    let mut hs_off = 0;
    for i in 0..20u64 {
        let (n, m) = (2 + (i % 3) as usize, 2 + (i % 2) as usize);
        let t = LinOperator::new(NormedSpace::lp(n, Exponent::TWO), NormedSpace::lp(m, Exponent::TWO), gaussian(&mut rng, m, n)).unwrap();
        let hs = t.matrix().norm();
        let b = pi_p_bracket(&t, Exponent::TWO, &OptBudget::named("quick", 500 + i).unwrap()).unwrap();
        if b.lower > hs * 1.05 || b.upper < hs * 0.95 {
            hs_off += 1;
        }
        // the lower bound alone also reaches the Hilbert-Schmidt value
        if pi_p_lower(&t, Exponent::TWO, &OptBudget::named("quick", 500 + i).unwrap()).value < hs * 0.95 {
            hs_off += 1;
        }
    }
    let pass = inverted == 0 && hs_off == 0 && all_pass(thm13) && all_pass(lemma17);
    outcome(
        pass,
        format!(
            "inverted brackets {inverted}/100 ({heuristic} heuristic); HS misses {hs_off}/20; thm1.3 {}; lemma1.7 {}",
            failures(thm13),
            failures(lemma17)
        ),
    )
}

fn criterion_8(r: &Report) -> Outcome {
    let band: Vec<String> = r
        .verdicts
        .iter()
        .filter(|v| v.name.starts_with("santalo l_") && v.status != Status::Pass)
        .map(|v| format!("{}={:.4}", v.name.trim_start_matches("santalo "), v.observed["normalized_product"].value))
        .collect();
    let polarity = r.verdicts.iter().filter(|v| v.name.starts_with("santalo polarity")).all(|v| v.status == Status::Pass);
    outcome(
        band.is_empty() && polarity,
        format!("polarity {}; outside [2, 2pi]: {}", if polarity { "PASS" } else { "FAIL" }, band.join(", ")),
    )
}

fn main() {
    let start = Instant::now();
    let mut reports = Vec::new();
    let mut results: Vec<(usize, Outcome)> = Vec::new();
    let mut report = |n: usize, o: Outcome| {
        println!("criterion {n}: {} - {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        results.push((n, o));
    };

    report(1, criterion_1());
    let r = suite("lemma2.1");
    report(2, outcome(all_pass(&r), failures(&r)));
    reports.push(r);
    let r = suite("lemma2.3");
    report(3, outcome(all_pass(&r), failures(&r)));
    reports.push(r);
    report(4, criterion_4());
    let r = suite("lemma2.4");
    report(5, outcome(all_pass(&r), failures(&r)));
    reports.push(r);
    let r = suite("thm2.6");
    report(6, outcome(all_pass(&r), failures(&r)));
    reports.push(r);
    let thm13 = suite("thm1.3");
    let lemma17 = suite("lemma1.7");
    report(7, criterion_7(&thm13, &lemma17));
    reports.push(thm13);
    reports.push(lemma17);
    let r = suite("santalo");
    report(8, criterion_8(&r));
    reports.push(r);
    reports.push(suite("lemma2.2"));

    let differing: Vec<&str> = reports
        .iter()
        .filter(|r| suite(&r.suite).payload_json() != r.payload_json())
        .map(|r| r.suite.as_str())
        .collect();
    report(9, outcome(differing.is_empty(), format!("{} suites rerun, differing: {differing:?}", reports.len())));

    let elapsed = start.elapsed();
    println!("total runtime {elapsed:.1?} (target 10 min)");
    let unexpected: Vec<usize> = results.iter().filter(|(n, o)| o.pass != EXPECTED[n - 1]).map(|(n, _)| *n).collect();
    if !unexpected.is_empty() {
        eprintln!("unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
