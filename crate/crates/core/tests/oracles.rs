mod common;

use common::*;
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use srzf::asymptotics::{empirical_stieltjes, stieltjes_derivative};
use srzf::channel::{sample_channel, SeedStream};
use srzf::metrics::{per_user_esnr, per_user_sinr};
use srzf::montecarlo::{estimate_ergodic_rate_with, evaluate_realization};
use srzf::precoding::{leakage, normalize_power, rzf_shaping_matrix, srzf_shaping_matrix};
use srzf::tuning::{tune_srzf, GridConfig};
use srzf::*;

#[test]
fn srzf_matches_gradient_descent_minimizer() {
    let h = random_matrix(4, 8, 101);
    let g = random_matrix(2, 8, 102);
    let a = srzf_shaping_matrix(&h, &g, SrzfParams::new(0.5, 2.0).unwrap()).unwrap();
    let x = gradient_descent_rls(&h, &g, 2.0, 0.5);
    let err = frobenius(&(&a - &x));
    assert!(err <= 1e-6, "{err}");
}

#[test]
fn push_through_identity() {
    let h = random_matrix(3, 6, 7);
    let a = rzf_shaping_matrix(&h, RzfParams::new(0.7).unwrap()).unwrap();
    let m_side =
        inverse(&(h.adjoint() * &h + CMatrix::identity(6, 6) * Complex64::from(0.7))) * h.adjoint();
    assert!(frobenius(&(&a - &m_side)) <= 1e-12);
}

#[test]
fn q_is_positive_definite_with_floor_lambda() {
    for seed in 0..10 {
        let h = random_matrix(6, 12, seed);
        let g = random_matrix(4, 12, seed + 100);
        let lambda = 0.3;
        let q = q_matrix(&h, &g, 1.7, lambda);
        let eig = q.symmetric_eigenvalues();
        let min = eig.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(min >= lambda - 1e-12, "{min}");
    }
}

#[test]
fn sherman_morrison_leakage_chain() {
    let h = random_matrix(4, 8, 31);
    let g = random_matrix(3, 8, 32);
    let direct = direct_blocks(&h, &g, 1.3, 0.4);
    let via_qk = leakage_via_qk(&h, &g, 1.3, 0.4);
    let via_gamma = sherman_morrison_blocks(&h, &g, 1.3, 0.4);
    for (k, &l) in via_qk.iter().enumerate() {
        assert!(rel_err(l, direct.l[k]) <= 1e-9);
        assert!(rel_err(via_gamma.l[k], direct.l[k]) <= 1e-9);
    }
}

#[test]
fn sinr_and_esnr_assemble_from_blocks() {
    let h = random_matrix(5, 10, 41);
    let g = random_matrix(3, 10, 42);
    let (theta, lambda) = (0.8, 0.6);
    let noise = NoiseProfile::new(0.5, 2.0, 3.0).unwrap();
    let a = srzf_shaping_matrix(&h, &g, SrzfParams::new(lambda, theta).unwrap()).unwrap();
    let out = normalize_power(a, noise.power()).unwrap();
    let sinr = per_user_sinr(&h, &out.w, noise.sigma2()).unwrap();
    let esnr = per_user_esnr(&g, &out.w, noise.rho2()).unwrap();
    let b = sherman_morrison_blocks(&h, &g, theta, lambda);
    assert!(rel_err(b.beta, out.beta) <= 1e-9);
    let (mu_l, mu_o) = (noise.mu_l(), noise.mu_o());
    for k in 0..5 {
        assert!(rel_err(mu_l * b.u[k] / (b.beta + mu_l * b.i[k]), sinr[k]) <= 1e-9);
        assert!(rel_err(mu_o * b.l[k] / b.beta, esnr[k]) <= 1e-9);
    }
}

#[test]
fn rates_invariant_under_joint_noise_and_power_scaling() {
    let dims = SystemDims::new(12, 6, 3).unwrap();
    let ch = sample_channel(dims, &SeedStream::new(5));
    let spec = SchemeSpec::Srzf(SrzfParams::new(0.5, 1.5).unwrap());
    let base = NoiseProfile::new(0.8, 0.4, 1.0).unwrap();
    let (r0, _) = evaluate_realization(&ch, &base, &spec).unwrap();
    for c in [0.01, 3.0, 250.0] {
        let scaled = NoiseProfile::new(0.8 * c, 0.4 * c, c).unwrap();
        let (r1, _) = evaluate_realization(&ch, &scaled, &spec).unwrap();
        for (a, b) in r0.rate.iter().zip(&r1.rate) {
            assert!((a - b).abs() <= 1e-12, "{a} {b}");
        }
    }
}

/// One trial at M=2, K=1, J=1 redone with scalar arithmetic.
#[test]
fn single_trial_matches_straight_line_evaluation() {
    let dims = SystemDims::new(2, 1, 1).unwrap();
    let noise = NoiseProfile::new(0.7, 1.3, 2.0).unwrap();
    let (lambda, theta) = (0.4, 1.9);
    let seed = 2024;
    let spec = SchemeSpec::Srzf(SrzfParams::new(lambda, theta).unwrap());
    let est =
        estimate_ergodic_rate_with(dims, &noise, &spec, 1, seed, Execution::Sequential).unwrap();

    let ch = sample_channel(dims, &SeedStream::new(seed).child(0));
    let (h0, h1) = (ch.h[(0, 0)], ch.h[(0, 1)]);
    let (g0, g1) = (ch.g[(0, 0)], ch.g[(0, 1)]);
    // Q = conj(h) h^T + theta conj(g) g^T + lambda I, entries by hand.
    let q00 = h0.norm_sqr() + theta * g0.norm_sqr() + lambda;
    let q11 = h1.norm_sqr() + theta * g1.norm_sqr() + lambda;
    let q01 = h0.conj() * h1 + g0.conj() * g1 * theta;
    let q10 = q01.conj();
    let det = q00 * q11 - q01.norm_sqr();
    // A = Q^{-1} conj(h)
    let a0 = (h0.conj() * q11 - q01 * h1.conj()) / det;
    let a1 = (h1.conj() * q00 - q10 * h0.conj()) / det;
    let beta = (a0.norm_sqr() + a1.norm_sqr()) / 2.0;
    let s = (noise.power() / beta).sqrt();
    let (w0, w1) = (a0 * s, a1 * s);
    let sinr = (h0 * w0 + h1 * w1).norm_sqr() / noise.sigma2();
    let esnr = (g0 * w0 + g1 * w1).norm_sqr() / noise.rho2();
    let rate = ((1.0 + sinr) / (1.0 + esnr)).log2().max(0.0);
    assert!((est.mean - rate).abs() <= 1e-12, "{} vs {rate}", est.mean);
}

#[test]
fn empirical_stieltjes_merged_case_at_m512() {
    let dims = SystemDims::new(512, 256, 128).unwrap();
    let ch = sample_channel(dims, &SeedStream::new(77));
    let emp = empirical_stieltjes(&ch.h, &ch.g, 1.0, 1.0).unwrap();
    assert!((emp - 0.693_000_468_164_691_3).abs() <= 0.01, "{emp}");
}

#[test]
fn empirical_stieltjes_rzf_case_at_m512() {
    let dims = SystemDims::new(512, 256, 0).unwrap();
    let ch = sample_channel(dims, &SeedStream::new(78));
    let emp = empirical_stieltjes(&ch.h, &ch.g, 0.0, 0.5).unwrap();
    let x =
        solve_fixed_point(&AsymptoticInputs::new(0.5, 0.0, 0.0, 0.5, 1.0, 1.0).unwrap()).unwrap();
    assert!((emp - x).abs() <= 0.01, "{emp} vs {x}");
}

#[test]
fn rzf_sinr_limit_matches_m512_empirical_mean() {
    let dims = SystemDims::new(512, 256, 128).unwrap();
    let ch = sample_channel(dims, &SeedStream::new(79));
    let zeta = 0.5;
    let noise = NoiseProfile::from_snr(1.0, 1.0).unwrap();
    let spec = SchemeSpec::Rzf(RzfParams::new(zeta).unwrap());
    let (rates, _) = evaluate_realization(&ch, &noise, &spec).unwrap();
    let empirical = rates.sinr.iter().sum::<f64>() / rates.sinr.len() as f64;
    let p =
        asymptotic_rate(&AsymptoticInputs::new(0.5, 0.25, 0.0, zeta, 1.0, 1.0).unwrap()).unwrap();
    assert!(
        rel_err(empirical, p.sinr_asy) <= 0.02,
        "{empirical} vs {}",
        p.sinr_asy
    );
}

#[test]
fn rank_one_downdate_barely_moves_resolvent_trace() {
    for seed in 0..5 {
        let h = random_matrix(16, 32, seed);
        let g = random_matrix(8, 32, seed + 50);
        let lambda = 0.25;
        let q = q_matrix(&h, &g, 2.0, lambda);
        let full = inverse(&q).trace().re;
        for k in [0, 7, 15] {
            let v = conj_row(&h, k);
            let down = inverse(&(&q - &v * v.adjoint())).trace().re;
            assert!((down - full).abs() / 32.0 <= 2.0 / (lambda * 32.0));
        }
    }
}

#[test]
fn derivative_matches_finite_difference() {
    for &(al, ao, th, lam) in &[
        (0.5, 0.25, 1.0, 1.0),
        (0.5, 0.25, 2.13, 0.4577),
        (0.0625, 0.03125, 1.07, 0.0624),
        (1.5, 0.7, 0.0, 0.05),
    ] {
        let inputs = AsymptoticInputs::new(al, ao, th, lam, 1.0, 1.0).unwrap();
        let x = solve_fixed_point(&inputs).unwrap();
        let gp = stieltjes_derivative(x, &inputs);
        let step = 1e-5;
        let lo = solve_fixed_point(&inputs.with_params(lam - step, th)).unwrap();
        let hi = solve_fixed_point(&inputs.with_params(lam + step, th)).unwrap();
        let fd = (lo - hi) / (2.0 * step);
        assert!(rel_err(fd, gp) <= 1e-5, "{fd} vs {gp}");
    }
}

#[test]
fn fixed_point_root_is_the_unique_sign_change() {
    let inputs = AsymptoticInputs::new(0.8, 0.4, 3.0, 0.2, 1.0, 1.0).unwrap();
    let x = solve_fixed_point(&inputs).unwrap();
    let n = 10_000;
    let mut prev = inputs.residual(1e-12);
    assert!(prev < 0.0);
    for i in 1..=n {
        let t = i as f64 / n as f64 / inputs.lambda;
        let r = inputs.residual(t);
        assert!(r > prev, "g must increase");
        if prev < 0.0 && r >= 0.0 {
            assert!(x > t - 1.0 / (n as f64 * inputs.lambda) && x <= t);
        }
        prev = r;
    }
}

/// Gap between simulation and limit should not grow with M.
#[test]
fn simulation_approaches_limit_as_m_grows() {
    let op = OperatingPoint::new(0.5, 0.25, 1.0, 1.0).unwrap();
    let tuned = tune_srzf(&op, &GridConfig::default()).unwrap();
    let spec = tuned.spec().unwrap();
    let noise = NoiseProfile::from_snr(1.0, 1.0).unwrap();
    let mut last: Option<(f64, f64)> = None;
    for m in [32, 64, 128] {
        let dims = SystemDims::from_loads(m, 0.5, 0.25).unwrap();
        let est =
            estimate_ergodic_rate_with(dims, &noise, &spec, 300, 11, Execution::Parallel).unwrap();
        let gap = (est.mean - tuned.rate_star).abs();
        if let Some((prev_gap, prev_se)) = last {
            assert!(
                gap <= prev_gap + 2.0 * (prev_se + est.stderr),
                "M={m}: {gap} after {prev_gap}"
            );
        }
        last = Some((gap, est.stderr));
    }
    assert!(last.unwrap().0 < 0.02);
}

#[test]
fn monte_carlo_self_averages_at_m128() {
    let dims = SystemDims::from_loads(128, 0.5, 0.25).unwrap();
    let noise = NoiseProfile::from_snr(1.0, 1.0).unwrap();
    let spec = SchemeSpec::Srzf(SrzfParams::new(0.4577, 2.131).unwrap());
    let est = estimate_ergodic_rate_with(dims, &noise, &spec, 100, 3, Execution::Parallel).unwrap();
    assert!(est.std_dev < 0.1, "{}", est.std_dev);
}

#[test]
fn alpha_o_sweep_is_non_increasing_for_tuned_srzf() {
    let mut prev = f64::INFINITY;
    for ao in [0.0, 0.25, 0.5] {
        let op = OperatingPoint::new(0.5, ao, 1.0, 1.0).unwrap();
        let t = tune_srzf(&op, &GridConfig::default()).unwrap();
        assert!(
            t.rate_star <= prev + 1e-9,
            "alpha_o={ao}: {} after {prev}",
            t.rate_star
        );
        prev = t.rate_star;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn theta_zero_srzf_equals_rzf(seed in 0u64..10_000, m in 2usize..24, lambda in 0.05f64..5.0) {
        let k = 1 + (seed as usize % m);
        let j = seed as usize % 5;
        let h = random_matrix(k, m, seed);
        let g = random_matrix(j, m, seed ^ 0xABCD);
        let s = srzf_shaping_matrix(&h, &g, SrzfParams::new(lambda, 0.0).unwrap()).unwrap();
        let r = rzf_shaping_matrix(&h, RzfParams::new(lambda).unwrap()).unwrap();
        prop_assert!(frobenius(&(&s - &r)) <= 1e-12);
    }

    #[test]
    fn leakage_non_increasing_in_theta(seed in 0u64..10_000, t1 in 0.0f64..5.0, dt in 0.01f64..10.0) {
        let h = random_matrix(4, 10, seed);
        let g = random_matrix(3, 10, seed + 1);
        let a1 = srzf_shaping_matrix(&h, &g, SrzfParams::new(0.5, t1).unwrap()).unwrap();
        let a2 = srzf_shaping_matrix(&h, &g, SrzfParams::new(0.5, t1 + dt).unwrap()).unwrap();
        prop_assert!(leakage(&g, &a2) <= leakage(&g, &a1) * (1.0 + 1e-12));
    }

    #[test]
    fn power_constraint_met_with_equality(seed in 0u64..10_000, power in 1e-3f64..1e3) {
        let a = random_matrix(8, 4, seed);
        let out = normalize_power(a, power).unwrap();
        prop_assert!(out.power_error() <= 1e-9);
    }

    #[test]
    fn fixed_point_residual_and_bracket(
        al in 0.0f64..3.0, ao in 0.0f64..3.0, th in 0.0f64..100.0, log_lam in -3.0f64..3.0,
    ) {
        let lam = 10f64.powf(log_lam);
        let inputs = AsymptoticInputs::new(al, ao, th, lam, 1.0, 1.0).unwrap();
        let x = solve_fixed_point(&inputs).unwrap();
        prop_assert!(x > 0.0 && x <= 1.0 / lam);
        prop_assert!(inputs.residual(x).abs() <= 1e-12);
    }

    #[test]
    fn channel_sampling_is_deterministic(seed in any::<u64>(), m in 1usize..12, k in 1usize..6, j in 0usize..6) {
        let dims = SystemDims::new(m, k, j).unwrap();
        let a = sample_channel(dims, &SeedStream::new(seed));
        let b = sample_channel(dims, &SeedStream::new(seed));
        prop_assert_eq!(a, b);
    }
}

#[test]
fn empty_h_is_rejected_by_precoders() {
    let h: CMatrix = DMatrix::zeros(0, 4);
    assert!(srzf_shaping_matrix(&h, &h, SrzfParams::new(1.0, 1.0).unwrap()).is_err());
    assert!(rzf_shaping_matrix(&h, RzfParams::new(1.0).unwrap()).is_err());
}
