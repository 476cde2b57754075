//! Constants and the two special functions the Mellin closed form needs.

use std::f64::consts::PI;

/// Euler–Mascheroni constant.
#[allow(clippy::excessive_precision)]
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082;

/// ζ(2) = π²/6.
#[allow(clippy::excessive_precision)]
pub const ZETA_2: f64 = 1.644_934_066_848_226_436_472_415_166_646;

/// ζ(4) = π⁴/90.
#[allow(clippy::excessive_precision)]
pub const ZETA_4: f64 = 1.082_323_233_711_138_191_516_003_696_541;

/// Lanczos coefficients for g = 7, n = 9.
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(x) for real `x` by the Lanczos approximation, with reflection below 1/2.
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    let x = x - 1.0;
    let g = 7.0;
    let mut a = LANCZOS[0];
    let t = x + g + 0.5;
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
}

/// Dirichlet eta η(s) = Σ_{k≥1} (−1)^{k−1} k^{−s}, the alternating zeta
/// function, for real `s > 0`.
///
/// Uses the Cohen–Rodriguez Villegas–Zagier acceleration; the error after
/// `terms` terms is about 2·5.83^{−terms}.
pub fn dirichlet_eta(s: f64) -> f64 {
    dirichlet_eta_terms(s, 30)
}

pub fn dirichlet_eta_terms(s: f64, terms: usize) -> f64 {
    let n = terms as f64;
    let d = (3.0 + 8f64.sqrt()).powf(n);
    let d = 0.5 * (d + 1.0 / d);
    let mut b = -1.0;
    let mut c = -d;
    let mut sum = 0.0;
    for k in 0..terms {
        let kf = k as f64;
        c = b - c;
        sum += c / (kf + 1.0).powf(s);
        b *= (kf + n) * (kf - n) / ((kf + 0.5) * (kf + 1.0));
    }
    sum / d
}

/// Harmonic number H_m = Σ_{k≤m} 1/k.
pub fn harmonic_number(m: u64) -> f64 {
    (1..=m).rev().map(|k| 1.0 / k as f64).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_known_values() {
        assert!((gamma(1.0) - 1.0).abs() < 1e-14);
        assert!((gamma(0.5) - PI.sqrt()).abs() < 1e-14);
        assert!((gamma(5.0) - 24.0).abs() < 1e-11);
        assert!((gamma(1.5) - 0.5 * PI.sqrt()).abs() < 1e-14);
        // Γ(0.1) = 9.513507698668731836…
        assert!((gamma(0.1) - 9.513_507_698_668_732).abs() < 1e-12);
        // Γ(x) ~ 1/x − γ near 0
        assert!((gamma(1e-6) - (1e6 - EULER_GAMMA)).abs() < 1e-5);
    }

    #[test]
    fn eta_known_values() {
        assert!((dirichlet_eta(1.0) - std::f64::consts::LN_2).abs() < 1e-14);
        assert!((dirichlet_eta(2.0) - ZETA_2 / 2.0).abs() < 1e-14);
        // η(1/2) = 0.6048986434216303…
        assert!((dirichlet_eta(0.5) - 0.604_898_643_421_630_4).abs() < 1e-13);
        // η(s) → 1/2 as s → 0
        assert!((dirichlet_eta(1e-9) - 0.5).abs() < 1e-8);
    }

    #[test]
    fn eta_matches_direct_partial_sums() {
        // brute force with pairwise averaging of consecutive partial sums
        let s = 1.5;
        let mut partial = 0.0;
        let mut prev = 0.0;
        for k in 1..=2_000_000u64 {
            prev = partial;
            let term = (k as f64).powf(-s);
            partial += if k % 2 == 1 { term } else { -term };
        }
        let averaged = 0.5 * (partial + prev);
        assert!((dirichlet_eta(s) - averaged).abs() < 1e-9);
    }

    #[test]
    fn constants_are_consistent() {
        assert!((ZETA_2 - PI * PI / 6.0).abs() < 1e-15);
        assert!((ZETA_4 - PI.powi(4) / 90.0).abs() < 1e-15);
        assert!((harmonic_number(5) - 137.0 / 60.0).abs() < 1e-15);
        assert_eq!(harmonic_number(0), 0.0);
    }
}
