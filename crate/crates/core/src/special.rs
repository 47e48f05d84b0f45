//! Log-gamma and log-space binomial mass, the numerical core behind the
//! population formulas. The generalized pmf takes real-valued "trial" and
//! "success" counts, with every factorial read as Gamma(x + 1).

const LANCZOS_G: f64 = 7.0;
// Godfrey coefficients for g = 7, n = 9; relative error below 1e-14 on
// the positive real axis.
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of Gamma(x) for x > 0 via the Lanczos approximation.
pub fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0, "ln_gamma requires x > 0, got {x}");
    if x < 0.5 {
        // reflection formula
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let z = x - 1.0;
    let mut a = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        a += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (z + 0.5) * t.ln() - t + a.ln()
}

/// ln of the Gamma-generalized binomial mass
/// `C(n, k) * p^k * (1-p)^(n-k)` with real n, k; requires `0 < p < 1`
/// and `0 <= k <= n`.
pub fn ln_binomial_pmf(n: f64, k: f64, p: f64) -> f64 {
    debug_assert!(p > 0.0 && p < 1.0);
    debug_assert!(k >= 0.0 && k <= n);
    let ln_coef = ln_gamma(n + 1.0) - ln_gamma(k + 1.0) - ln_gamma(n - k + 1.0);
    let a = if k == 0.0 { 0.0 } else { k * p.ln() };
    let b = if k == n { 0.0 } else { (n - k) * (1.0 - p).ln() };
    ln_coef + a + b
}
