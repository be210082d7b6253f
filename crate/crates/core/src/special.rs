//! Gamma function and Euclidean unit-ball volumes.

use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Lanczos approximation (g = 7, 9 terms), reflection for `x < 1/2`.
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    let x = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
}

/// Volume of the Euclidean unit ball in `R^n`, `pi^(n/2) / Gamma(n/2 + 1)`.
pub fn unit_ball_volume(n: usize) -> crate::Result<f64> {
    if n == 0 {
        return Err(crate::Error::InvalidParameter(
            "unit ball dimension must be positive".into(),
        ));
    }
    let half = n as f64 / 2.0;
    Ok(PI.powf(half) / gamma(half + 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_at_integers_and_half_integers() {
        let mut fact = 1.0;
        for k in 1..20 {
            assert!((gamma(k as f64) / fact - 1.0).abs() < 1e-13, "Gamma({k})");
            fact *= k as f64;
        }
        assert!((gamma(0.5) - PI.sqrt()).abs() < 1e-14);
        assert!((gamma(2.5) - 0.75 * PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn ball_volumes() {
        assert!((unit_ball_volume(1).unwrap() - 2.0).abs() < 1e-14);
        assert!((unit_ball_volume(2).unwrap() - PI).abs() < 1e-14);
        assert!((unit_ball_volume(3).unwrap() - 4.0 * PI / 3.0).abs() < 1e-14);
        assert!((unit_ball_volume(4).unwrap() - PI * PI / 2.0).abs() < 1e-13);
        assert!((unit_ball_volume(6).unwrap() - PI.powi(3) / 6.0).abs() < 1e-13);
        assert!(unit_ball_volume(0).is_err());
    }
}
