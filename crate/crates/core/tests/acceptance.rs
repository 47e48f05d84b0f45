//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line (run with `--nocapture` to see them). Tolerances are
//! pinned in the assertions.

use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use bitgas_core::bitcore::{generate_source, BitString, SourceSpec};
use bitgas_core::ensemble::{
    build_b_ensemble, build_c_ensemble, empirical_temperature, ground_state_fraction,
};
use bitgas_core::experiment::{sweep_rows, SweepSpec};
use bitgas_core::theory::{
    self, binomial_population_b, critical_temperature, ground_state_b, ground_state_c_closed,
    ground_state_c_exact, invert_temperature_b, invert_temperature_c, temperature_b,
    temperature_c, theory_curve, Formula, ModelParams,
};

fn report(id: u32, name: &str, pass: bool, detail: &str) {
    println!(
        "criterion {id:2} ({name}): {} {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {id} ({name}) failed: {detail}");
}

fn hamming_naive(b: &BitString, n: usize) -> u64 {
    let m = b.len();
    (0..m).filter(|&i| b.bit(i) != b.bit((i + n) % m)).count() as u64
}

#[test]
fn criterion_01_parity_law() {
    let start = Instant::now();
    // exhaustive M = 8
    for v in 0u16..256 {
        let mut b = BitString::zeros(8).unwrap();
        for i in 0..8 {
            if v >> i & 1 == 1 {
                b.set_bit(i, true);
            }
        }
        for n in 0..8 {
            let h = b.hamming_cyclic(n).unwrap();
            assert_eq!(h, hamming_naive(&b, n), "v={v} n={n}");
            assert_eq!(h % 2, 0, "v={v} n={n}");
        }
    }
    // 10^4 random cases, M <= 4096
    let mut rng = StdRng::seed_from_u64(0xACCE97);
    for case in 0..10_000 {
        let m = rng.random_range(1..=4096usize);
        let n = rng.random_range(0..m);
        let mut b = BitString::zeros(m).unwrap();
        for i in 0..m {
            if rng.random::<bool>() {
                b.set_bit(i, true);
            }
        }
        let h = b.hamming_cyclic(n).unwrap();
        assert_eq!(h, hamming_naive(&b, n), "case {case}: m={m} n={n}");
        assert_eq!(h % 2, 0, "case {case}: m={m} n={n}");
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        1,
        "parity law & kernel oracle",
        elapsed < 5.0,
        &format!("2048 exhaustive + 10^4 random cases in {elapsed:.2}s"),
    );
}

#[test]
fn criterion_02_critical_temperature() {
    let tc = critical_temperature(16384);
    report(
        2,
        "critical temperature",
        (tc - 3.8856e-5).abs() <= 1e-9,
        &format!("T_c(16384) = {tc:.6e}"),
    );
}

#[test]
fn criterion_03_condensed_point() {
    let start = Instant::now();
    let m = 16384;
    let t = 6.3e-5;
    let p = ModelParams::c_from_temperature(m, t).unwrap().p;
    let mut fractions = Vec::new();
    let mut concentration_ok = true;
    for seed in 0..20u64 {
        let src = generate_source(&SourceSpec::new(m, p, seed).unwrap()).unwrap();
        let h = build_c_ensemble(&src, m - 1, false).unwrap();
        fractions.push(ground_state_fraction(&h).1);
        // >= 99% of mass in at most 6 macrostates
        let mut counts: Vec<u64> = h.counts().values().copied().collect();
        counts.sort_unstable_by(|a, b| b.cmp(a));
        let top6: u64 = counts.iter().take(6).sum();
        if (top6 as f64) < 0.99 * h.total as f64 {
            concentration_ok = false;
        }
    }
    let mean_frac = fractions.iter().sum::<f64>() / fractions.len() as f64;
    let elapsed = start.elapsed().as_secs_f64();
    report(
        3,
        "condensed-point reproduction",
        (0.735..=0.835).contains(&mean_frac) && concentration_ok && elapsed < 120.0,
        &format!("mean N_0/N = {mean_frac:.4} over 20 seeds, top-6 >= 99%: {concentration_ok}, {elapsed:.1}s"),
    );
}

#[test]
fn criterion_04_stirling_agreement() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for &m in &[1024usize, 16384] {
        let lo = 1.1 * critical_temperature(m);
        let hi = 0.2;
        for i in 0..50 {
            let t = lo * (hi / lo).powf(i as f64 / 49.0);
            let exact = ground_state_c_exact(t, m).unwrap().raw;
            let closed = ground_state_c_closed(t, m).unwrap().raw;
            worst = worst.max((exact - closed).abs() / closed);
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        4,
        "Stirling agreement",
        worst <= 0.02 && elapsed < 5.0,
        &format!("max |exact-closed|/closed = {worst:.4} on 2x50-point grids"),
    );
}

#[test]
fn criterion_05_b_model_fit() {
    let start = Instant::now();
    let n = 1_000_000usize;
    let m = 64usize;
    let src = generate_source(&SourceSpec::new(n * m, 0.5, 2024).unwrap()).unwrap();
    let h = build_b_ensemble(&src, n, m).unwrap();
    let mut tvd = 0.0;
    for b in 0..=m {
        let emp = h.counts().get(&(b as u64)).copied().unwrap_or(0) as f64 / n as f64;
        let pmf = binomial_population_b(b, 0.5, m, 1).unwrap();
        tvd += (emp - pmf).abs();
    }
    tvd /= 2.0;
    let temp = empirical_temperature(&h).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    report(
        5,
        "B-model distribution fit",
        tvd <= 0.02 && (temp - 0.25).abs() <= 0.005 && elapsed < 30.0,
        &format!("TVD = {tvd:.4}, T = {temp:.4}, {elapsed:.1}s"),
    );
}

#[test]
fn criterion_06_figure1_ordering_and_endpoints() {
    let start = Instant::now();
    let bits = vec![1024usize, 4096, 16384];
    let spec = SweepSpec {
        bits: bits.clone(),
        t_min: 1e-5,
        t_max: 0.25,
        t_count: 100,
        log_spaced: true,
        sample: false,
        seed: 1,
        sample_count: None,
    };
    let rows = sweep_rows(&spec).unwrap();
    assert_eq!(rows.len(), 300);
    let ordering_ok = rows.iter().all(|r| r.n0_c_exact >= r.n0_b);

    // analytic curves strictly decreasing in T (raw, unclamped values --
    // the clamped plateau at 1.0 below T_c is constant by construction)
    let mut monotone_ok = true;
    for &m in &bits {
        let mut prev_c = f64::INFINITY;
        let mut prev_b = f64::INFINITY;
        for i in 0..100 {
            let t = 1e-5 * (0.25f64 / 1e-5).powf(i as f64 / 99.0);
            let c = ground_state_c_closed(t, m).unwrap().raw;
            let b = ground_state_b(t, m).unwrap();
            if c >= prev_c || b >= prev_b {
                monotone_ok = false;
            }
            prev_c = c;
            prev_b = b;
        }
    }

    // endpoints at T = T_c(M)
    let mut closed_at_tc_ok = true;
    let mut eq12_at_tc = Vec::new();
    for &m in &bits {
        let tc = critical_temperature(m);
        let closed = ground_state_c_closed(tc, m).unwrap().fraction;
        if (closed - 1.0).abs() > 1e-12 {
            closed_at_tc_ok = false;
        }
        eq12_at_tc.push(ground_state_b(tc, m).unwrap());
    }
    let eq12_ok = eq12_at_tc.iter().all(|v| (v - 0.5).abs() <= 0.02);
    let elapsed = start.elapsed().as_secs_f64();
    report(
        6,
        "figure-1 ordering and endpoints",
        ordering_ok && monotone_ok && closed_at_tc_ok && eq12_ok && elapsed < 10.0,
        &format!(
            "ordering {ordering_ok}, monotone {monotone_ok}, Eq.7(T_c)=1 {closed_at_tc_ok}, \
             Eq.12(T_c) = {eq12_at_tc:.4?} vs 0.5 +/- 0.02 -> {eq12_ok}"
        ),
    );
}

#[test]
fn criterion_07_normalizations() {
    let start = Instant::now();
    // sum of Eq. 8 over [0, M] = N to 1e-9 relative at M = 64
    let n = 1_000_000u64;
    let sum8: f64 = (0..=64)
        .map(|b| binomial_population_b(b, 0.5, 64, n).unwrap())
        .sum();
    let norm8_ok = (sum8 - n as f64).abs() / n as f64 <= 1e-9;

    // sum of Eq. 2 over even values = N within 1% at M = 16384, p = 0.3
    let params = ModelParams::c_from_p(16384, 0.3).unwrap();
    let curve2 = theory_curve(Formula::AdjustedBinomial, &params, n, 0, 16384).unwrap();
    let sum2: f64 = curve2.points.iter().map(|&(_, p)| p).sum();
    let norm2_err = (sum2 - n as f64).abs() / n as f64;

    // adjusted-binomial vs normal within 5% on the +/- 3 sqrt(MT) band
    let band = 3.0 * (16384.0 * params.temperature).sqrt();
    let normal = theory_curve(Formula::Normal, &params, n, 0, 16384).unwrap();
    let mut worst = 0.0f64;
    for (&(v, adj), &(v2, nor)) in curve2.points.iter().zip(&normal.points) {
        assert_eq!(v, v2);
        if (v as f64 - params.mean).abs() <= band {
            worst = worst.max((adj - nor).abs() / nor);
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        7,
        "normalization suite",
        norm8_ok && norm2_err <= 0.01 && worst <= 0.05 && elapsed < 10.0,
        &format!(
            "sum Eq.8 rel err {:.1e}, sum Eq.2 rel err {norm2_err:.4}, band disagreement {worst:.4}",
            (sum8 - n as f64).abs() / n as f64
        ),
    );
}

#[test]
fn criterion_08_inversion_round_trips() {
    let m = 16384;
    let mut worst_c = 0.0f64;
    let mut worst_b = 0.0f64;
    for i in 1..=1000 {
        let t = 0.25 * i as f64 / 1000.0;
        let cbar = invert_temperature_c(t, m).unwrap();
        worst_c = worst_c.max((temperature_c(cbar, m).unwrap() - t).abs());
        let p = invert_temperature_b(t).unwrap();
        worst_b = worst_b.max((temperature_b(p).unwrap() - t).abs());
    }
    report(
        8,
        "inversion round-trips",
        worst_c <= 1e-12 && worst_b <= 1e-12,
        &format!("max |T round-trip error|: C {worst_c:.2e}, B {worst_b:.2e}"),
    );
}

#[test]
fn criterion_09_performance_and_thread_determinism() {
    let m = 1usize << 20;
    let n = 1usize << 16;
    let spec = SourceSpec::new(m, 0.3, 42).unwrap();
    let start = Instant::now();
    let src = generate_source(&spec).unwrap();
    let h = build_c_ensemble(&src, n, false).unwrap();
    let elapsed = start.elapsed().as_secs_f64();

    // same result on a 2-thread pool
    let pool = rayon::ThreadPoolBuilder::new().num_threads(2).build().unwrap();
    let h2 = pool.install(|| {
        let src = generate_source(&spec).unwrap();
        build_c_ensemble(&src, n, false).unwrap()
    });
    report(
        9,
        "performance M=2^20 N=2^16",
        elapsed < 60.0 && h == h2,
        &format!("{elapsed:.1}s, thread-count independent: {}", h == h2),
    );
}

#[test]
fn criterion_10_mean_law() {
    let start = Instant::now();
    let m = 4096;
    let mut ok = true;
    let mut detail = String::new();
    for &p in &[0.1, 0.3, 0.5] {
        let mut acc = 0.0;
        for seed in 0..10u64 {
            let src = generate_source(&SourceSpec::new(m, p, seed).unwrap()).unwrap();
            let h = build_c_ensemble(&src, m - 1, false).unwrap();
            acc += h.mean;
        }
        let mean = acc / 10.0;
        let expect = theory::cbar_from_p(p, m);
        let rel = (mean - expect).abs() / expect;
        detail.push_str(&format!("p={p}: rel err {rel:.4}; "));
        if rel > 0.05 {
            ok = false;
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        10,
        "mean law",
        ok && elapsed < 60.0,
        &format!("{detail}{elapsed:.1}s"),
    );
}
