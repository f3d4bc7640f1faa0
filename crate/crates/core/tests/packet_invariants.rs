use proptest::prelude::*;
use slitflow::interference::compute_normalization;
use slitflow::presets::{self, PRESET_NAMES};
use slitflow::{DoubleSlitConfig, GaussianPacket, PhysicalScales};

/// Plain adaptive Simpson, kept apart from the library's Gauss–Kronrod rule.
fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn step<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
                + step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
        }
    }
    let n = 200;
    let h = (b - a) / n as f64;
    (0..n)
        .map(|i| {
            let (lo, hi) = (a + i as f64 * h, a + (i + 1) as f64 * h);
            let (fa, fm, fb) = (f(lo), f(0.5 * (lo + hi)), f(hi));
            let whole = h / 6.0 * (fa + 4.0 * fm + fb);
            step(f, lo, hi, fa, fm, fb, whole, tol / n as f64, 40)
        })
        .sum()
}

#[test]
fn mass_between_matches_simpson() {
    for name in PRESET_NAMES {
        let cfg = presets::preset_slits(name).unwrap();
        for (t, a, b) in [
            (0.0, -7.0, 6.0),
            (5.0, -3.0, 2.5),
            (20.0, -40.0, 45.0),
            (11.0, 0.0, 0.7),
        ] {
            let ours = cfg.mass_between(t, a, b);
            let reference = simpson(&|x| cfg.total_intensity(t, x), a, b, 1e-14);
            assert!((ours - reference).abs() <= 1e-10, "{name} t={t}: {ours} vs {reference}");
        }
    }
}

#[test]
fn normalization_matches_simpson() {
    for name in PRESET_NAMES {
        let cfg = presets::preset_slits(name).unwrap();
        let (lo, hi) = cfg.support(0.0, 12.0);
        let mass = simpson(&|x| cfg.total_intensity(0.0, x), lo, hi, 1e-14);
        assert!((mass - 1.0).abs() <= 1e-10, "{name}: {mass}");
        let n = compute_normalization(cfg.packet1(), cfg.packet2(), cfg.scales()).unwrap();
        assert_eq!(n, cfg.normalization());
    }
}

fn packet_strategy() -> impl Strategy<Value = (GaussianPacket, PhysicalScales)> {
    (
        -5.0..5.0f64,
        -2.0..2.0f64,
        0.1..5.0f64,
        0.1..3.0f64,
        0.2..3.0f64,
        0.2..3.0f64,
    )
        .prop_map(|(c, v, s, w, hbar, m)| {
            (
                GaussianPacket::new(c, v, s, w).unwrap(),
                PhysicalScales::new(hbar, m).unwrap(),
            )
        })
}

proptest! {
    #[test]
    fn width_is_even_in_time((p, scales) in packet_strategy(), t in 0.0..100.0f64) {
        prop_assert_eq!(p.sigma_t(&scales, t), p.sigma_t(&scales, -t));
        prop_assert!(p.sigma_t(&scales, t) >= p.sigma0);
    }

    #[test]
    fn width_identity((p, scales) in packet_strategy(), t in -100.0..100.0f64) {
        let lhs = p.sigma_sq(&scales, t) - p.sigma0 * p.sigma0;
        let rhs = (p.u0(&scales) * t).powi(2);
        prop_assert!((lhs - rhs).abs() <= 4.0 * f64::EPSILON * p.sigma_sq(&scales, t));
    }

    #[test]
    fn osmotic_is_log_gradient_of_amplitude((p, scales) in packet_strategy(), t in 0.0..10.0f64, z in -2.5..2.5f64) {
        let x = p.moving_center(t) + z * p.sigma_t(&scales, t);
        let h = 1e-4 * p.sigma_t(&scales, t);
        let grad = (p.amplitude(&scales, t, x + h).ln() - p.amplitude(&scales, t, x - h).ln()) / (2.0 * h);
        let expect = -scales.hbar() / scales.mass() * grad;
        let u = p.osmotic_velocity(&scales, t, x);
        prop_assert!((u - expect).abs() <= 1e-6 * (1.0 + expect.abs()), "{} vs {}", u, expect);
    }

    #[test]
    fn mirrored_config_has_mirrored_density(
        (p1, scales) in packet_strategy(),
        (p2, _) in packet_strategy(),
        t in 0.0..20.0f64,
        x in -15.0..15.0f64,
    ) {
        let cfg = DoubleSlitConfig::new(p1, p2, scales, 1.0).unwrap();
        let mirror = cfg.mirrored();
        let a = cfg.total_intensity(t, x);
        let b = mirror.total_intensity(t, -x);
        prop_assert!((a - b).abs() <= 1e-12 * cfg.peak_bound(t));
    }

    #[test]
    fn symmetric_density_is_even(c in 1.0..8.0f64, v in -1.0..1.0f64, s in 0.3..3.0f64, t in 0.0..20.0f64, x in 0.0..15.0f64) {
        let cfg = DoubleSlitConfig::symmetric(c, v, s, PhysicalScales::natural(), 1.0).unwrap();
        let a = cfg.total_intensity(t, x);
        let b = cfg.total_intensity(t, -x);
        prop_assert!((a - b).abs() <= 1e-12 * cfg.peak_bound(t));
    }
}
