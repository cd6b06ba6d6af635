use std::f64::consts::PI;

use crate::quantum::C64;

/// Below this distance from a revival the uniform-superposition sums are
/// evaluated by their Taylor series instead of the pole form.
const TAYLOR_RADIUS: f64 = 1e-2;
const TAYLOR_ORDER: usize = 18;

/// Phase x reduced to (−π, π].
pub(crate) fn reduce_phase(x: f64) -> f64 {
    x - 2.0 * PI * (x / (2.0 * PI)).round()
}

/// Closed forms for a uniform N-level superposition under H = ħω·Σ n|n⟩⟨n|.
#[derive(Debug, Clone, Copy)]
pub(crate) struct UniformSums {
    /// (1/N)·Σ zⁿ with z = e^{−ix}
    pub f: C64,
    /// (1/N)·Σ n·zⁿ
    pub s: C64,
    /// 1 − |f|²
    pub infidelity: f64,
    pub z1: C64,
    pub z2: C64,
}

pub(crate) fn uniform_sums(n: usize, x: f64) -> UniformSums {
    let d = reduce_phase(x);
    let nf = n as f64;
    let z = C64::from_polar(1.0, -d);
    let z1 = C64::new(1.0, 0.0) - z;
    let z2 = C64::from_polar(1.0, -(nf - 1.0) * d);

    let (f, s) = if d.abs() < TAYLOR_RADIUS {
        let mut f = C64::new(0.0, 0.0);
        let mut s = C64::new(0.0, 0.0);
        let mut coeff = C64::new(1.0, 0.0);
        let sums: Vec<f64> = (0..=TAYLOR_ORDER + 1)
            .map(|p| (0..n).map(|k| (k as f64).powi(p as i32)).sum())
            .collect();
        for p in 0..=TAYLOR_ORDER {
            if p > 0 {
                coeff *= C64::new(0.0, -d) / p as f64;
            }
            f += coeff * sums[p];
            s += coeff * sums[p + 1];
        }
        (f / nf, s / nf)
    } else {
        let zn = C64::from_polar(1.0, -nf * d);
        let f = (C64::new(1.0, 0.0) - zn) / (z1 * nf);
        let s = z / (z1 * nf) * ((C64::new(1.0, 0.0) - z2) / z1 - z2 * (nf - 1.0));
        (f, s)
    };

    let infidelity = (1..n)
        .map(|k| (nf - k as f64) * (0.5 * k as f64 * d).sin().powi(2))
        .sum::<f64>()
        * 4.0
        / (nf * nf);
    UniformSums { f, s, infidelity: infidelity.clamp(0.0, 1.0), z1, z2 }
}

/// 1 − (1 − u)^m without cancellation.
pub(crate) fn power_infidelity(u: f64, m: usize) -> f64 {
    let u = u.clamp(0.0, 1.0);
    (-(m as f64 * (-u).ln_1p()).exp_m1()).clamp(0.0, 1.0)
}

pub(crate) fn cpow(z: C64, k: usize) -> C64 {
    z.powu(k as u32)
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(n: usize, x: f64) -> (C64, C64) {
        let nf = n as f64;
        let f = (0..n).map(|k| C64::from_polar(1.0, -(k as f64) * x)).sum::<C64>() / nf;
        let s = (0..n)
            .map(|k| C64::from_polar(k as f64, -(k as f64) * x))
            .sum::<C64>()
            / nf;
        (f, s)
    }

    #[test]
    fn sums_match_brute_force_across_branches() {
        for n in [2, 3, 4, 7, 16] {
            for i in 0..400 {
                let x = -0.03 + i as f64 * 0.0317;
                let u = uniform_sums(n, x);
                let (f, s) = brute(n, x);
                assert!((u.f - f).norm() < 1e-12, "f n={n} x={x}");
                assert!((u.s - s).norm() < 1e-10 * n as f64, "s n={n} x={x}");
                assert!((u.infidelity - (1.0 - f.norm_sqr())).abs() < 1e-12);
            }
            for x in [0.0, 2.0 * PI, 4.0 * PI, 2.0 * PI + 0.0099, 2.0 * PI + 0.0101] {
                let u = uniform_sums(n, x);
                let (f, s) = brute(n, x);
                assert!((u.f - f).norm() < 1e-12);
                assert!((u.s - s).norm() < 1e-10 * n as f64);
            }
        }
    }

    #[test]
    fn power_infidelity_edges() {
        assert_eq!(power_infidelity(0.0, 3), 0.0);
        assert_eq!(power_infidelity(1.0, 3), 1.0);
        assert!((power_infidelity(1e-20, 2) - 2e-20).abs() < 1e-34);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6.0);
        assert_eq!(binomial(8, 0), 1.0);
        assert_eq!(binomial(8, 3), 56.0);
    }
}
