use std::f64::consts::PI;

use num_complex::Complex64;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
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

/// Complex Gamma function by the Lanczos approximation (g = 7, nine
/// coefficients) with reflection for `Re z < 1/2`.
pub fn gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        let pi = Complex64::new(PI, 0.0);
        return pi / ((pi * z).sin() * gamma(1.0 - z));
    }
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        let g = |x: f64| gamma(Complex64::new(x, 0.0));
        assert!((g(1.0) - 1.0).norm() < 1e-14);
        assert!((g(0.5) - PI.sqrt()).norm() < 1e-13);
        assert!((g(5.0) - 24.0).norm() < 1e-12);
        assert!((g(0.25) - 3.625_609_908_221_908_3).norm() / 3.6 < 1e-13);
        // Γ(1+i) = 0.49801566811835604 - 0.15494982830181069 i
        let v = gamma(Complex64::new(1.0, 1.0));
        assert!((v - Complex64::new(0.498_015_668_118_356, -0.154_949_828_301_810_7)).norm() < 1e-13);
    }

    #[test]
    fn recurrence_holds_on_strip() {
        for k in 0..20 {
            let z = Complex64::new(0.05 * k as f64, -1.0 + 0.1 * k as f64);
            let lhs = gamma(z + 1.0);
            let rhs = z * gamma(z);
            assert!((lhs - rhs).norm() <= 1e-13 * lhs.norm().max(1.0));
        }
    }
}
