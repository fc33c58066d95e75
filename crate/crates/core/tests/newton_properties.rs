use pb_core::{assemble, solve, ForcingStrategy, Grid, Grid64, NewtonConfig, ProblemSpec, ProblemSpec64, Termination};

fn default_system(n: usize) -> pb_core::DiscreteSystem64 {
    assemble(&Grid64::unit_square(n, n).unwrap(), &ProblemSpec64::default())
}

#[test]
fn strategies_agree_and_adaptive_is_cheaper() {
    let cfg = NewtonConfig::default();
    for n in [8, 16, 32] {
        let sys = default_system(n);
        let fixed = solve(&sys, &cfg, &ForcingStrategy::fixed()).unwrap();
        let adaptive = solve(&sys, &cfg, &ForcingStrategy::power_of_ten()).unwrap();
        assert_eq!(fixed.reason, Termination::ResidualTol);
        assert_eq!(adaptive.reason, Termination::ResidualTol);
        assert!(fixed.outer_iterations().abs_diff(adaptive.outer_iterations()) <= 2);
        assert!(adaptive.total_inner_iters < fixed.total_inner_iters, "{n}");
    }
}

#[test]
fn terminal_residuals_decrease() {
    let sys = default_system(64);
    for strategy in [ForcingStrategy::fixed(), ForcingStrategy::power_of_ten()] {
        let rep = solve(&sys, &NewtonConfig::default(), &strategy).unwrap();
        assert_eq!(rep.reason, Termination::ResidualTol);
        let seq = rep.residual_sequence();
        let tail = &seq[seq.len() - 3..];
        assert!(tail[0] > tail[1] && tail[1] > tail[2], "{seq:?}");
    }
}

#[test]
fn inner_tolerances_follow_schedule() {
    let sys = default_system(16);
    let rep = solve(&sys, &NewtonConfig::default(), &ForcingStrategy::power_of_ten()).unwrap();
    for rec in &rep.history {
        assert_eq!(rec.inner_tol, 10f64.powi(-(rec.k as i32 + 1)));
        assert!(rec.inner_converged);
    }
    let rep = solve(&sys, &NewtonConfig::default(), &ForcingStrategy::fixed()).unwrap();
    assert!(rep.history.iter().all(|r| r.inner_tol == 1e-15));
}

#[test]
fn telemetry_sums() {
    let sys = default_system(24);
    let rep = solve(&sys, &NewtonConfig::default(), &ForcingStrategy::power_of_ten()).unwrap();
    assert_eq!(
        rep.total_inner_iters,
        rep.history.iter().map(|r| r.inner_iters).sum::<usize>()
    );
    assert!(rep.history.iter().enumerate().all(|(i, r)| r.k == i));
    assert!(rep.converged == rep.reason.is_converged());
}

#[test]
fn bitwise_reproducible() {
    let sys = default_system(32);
    let cfg = NewtonConfig::default();
    let a = solve(&sys, &cfg, &ForcingStrategy::fixed()).unwrap();
    let b = solve(&default_system(32), &cfg, &ForcingStrategy::fixed()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn single_precision_pipeline() {
    let sys = assemble(
        &Grid::<f32>::unit_square(16, 16).unwrap(),
        &ProblemSpec::<f32>::default(),
    );
    let cfg = NewtonConfig {
        tol_residual: 1e-3,
        tol_step: 1e-4,
        ..NewtonConfig::default()
    };
    let rep = solve(&sys, &cfg, &ForcingStrategy::PowerOfTen { floor: 1e-6, stride: 1 }).unwrap();
    assert!(rep.converged, "{:?}", rep.reason);
    let double = solve(&default_system(16), &NewtonConfig::default(), &ForcingStrategy::fixed()).unwrap();
    for (s, d) in rep.final_p.iter().zip(&double.final_p) {
        assert!((f64::from(*s) - d).abs() < 1e-3);
    }
}
