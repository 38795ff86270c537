mod common;

use std::sync::OnceLock;

use common::*;
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

use escqe::fci::{FciSpectrum, Irrep};
use escqe::molint::{Geometry, MolecularSystem};
use escqe::refstates::{enumerate_csfs, prepare_csf, CsfSpec, GuessKind, GuessSpec};
use escqe::residuals::ProjectionSet;
use escqe::solver::{starting_points, ConstraintStrategy, OptimizerConfig, Solver, Termination};

fn h4() -> &'static (MolecularSystem, FciSpectrum, Solver) {
    static F: OnceLock<(MolecularSystem, FciSpectrum, Solver)> = OnceLock::new();
    F.get_or_init(|| {
        let sys = MolecularSystem::from_geometry(Geometry::h4_rectangle(1.0, 1.5).unwrap(), "sto-3g").unwrap();
        let fci = FciSpectrum::for_system(&sys).unwrap();
        let solver = Solver::for_system(&sys, OptimizerConfig::default()).unwrap();
        (sys, fci, solver)
    })
}

/// Ŝ² = Ŝ₋Ŝ₊ + Ŝz² + Ŝz over interleaved spin orbitals, from ladder matrices.
fn s_squared(r: usize) -> CMat {
    let n = 2 * r;
    let dim = 1 << n;
    let mut s_plus = CMat::zeros(dim, dim);
    let mut sz = CMat::zeros(dim, dim);
    for p in 0..r {
        let (a, b) = (2 * p, 2 * p + 1);
        s_plus += ladder(n, a, true) * ladder(n, b, false);
        sz += (ladder(n, a, true) * ladder(n, a, false) - ladder(n, b, true) * ladder(n, b, false)) * c(0.5);
    }
    s_plus.adjoint() * &s_plus + &sz * &sz + sz
}

#[test]
fn csfs_are_spin_eigenfunctions() {
    let s2 = s_squared(4);
    let csfs = enumerate_csfs(4, 4, 0);
    assert_eq!(csfs.len(), 36);
    for spec in &csfs {
        let psi = prepare_csf(spec).unwrap();
        let s = spec.s2() as f64 / 2.0;
        let v = CVec::from_column_slice(psi.amplitudes());
        let residual = (&s2 * &v - &v * c(s * (s + 1.0))).norm();
        assert!(residual < 1e-10, "{spec}: {residual}");
    }
}

#[test]
fn csf_pool_spans_the_sector() {
    let (_, _, solver) = h4();
    let pool = solver.guesses(GuessKind::Csf).unwrap();
    assert_eq!(pool.len(), 36);
    let rows: Vec<Complex64> = pool.iter().flat_map(|g| g.state.amplitudes().to_vec()).collect();
    let m = DMatrix::from_row_slice(36, 256, &rows);
    let gram = &m * m.adjoint();
    let svd = gram.clone().svd(false, false);
    let rank = svd.singular_values.iter().filter(|&&s| s > 1e-8).count();
    assert_eq!(rank, 36);
    assert!(max_diff(&gram, &CMat::identity(36, 36)) < 1e-10);
}

#[test]
fn determinant_pool_starts_from_aufbau() {
    let (sys, _, solver) = h4();
    let pool = solver.guesses(GuessKind::Sd).unwrap();
    assert_eq!(pool.len(), 36);
    match &pool[0].spec {
        GuessSpec::Determinant(d) => assert_eq!(d.occupied, vec![0, 1, 2, 3]),
        other => panic!("unexpected first guess {other}"),
    }
    assert!((pool[0].energy - sys.scf.energy).abs() < 1e-10);
    for w in pool.windows(2) {
        assert!(w[0].energy <= w[1].energy);
    }
}

#[test]
fn open_shell_triplets_stall_with_finite_variance() {
    // P holds the exact lower states outside the (S=1, A1g) manifold, which
    // these three CSFs span.
    let (_, fci, solver) = h4();
    let triplets: Vec<CsfSpec> = enumerate_csfs(4, 4, 0)
        .into_iter()
        .filter(|c| c.occupations == vec![1, 1, 1, 1] && c.s2() == 2)
        .collect();
    assert_eq!(triplets.len(), 3);
    for spec in &triplets {
        let psi = prepare_csf(spec).unwrap();
        let e = solver.op.expectation(&psi).re;
        let mut p = ProjectionSet::new();
        for (k, &ek) in fci.energies().iter().enumerate() {
            let label = &fci.labels[k];
            let same_manifold = label.spin == Some(1.0) && label.irrep == Some(Irrep::A1g);
            if ek < e - 1e-6 && !same_manifold {
                p.push(fci.state(k).unwrap(), ek, None);
            }
        }
        let run = solver
            .run_single_state(&spec.to_string(), &psi, &p, &ConstraintStrategy::default(), &solver.config)
            .unwrap();
        assert!(run.record.acpse_norm.unwrap_or(f64::INFINITY) < solver.config.residual_threshold, "{spec}");
        assert!(run.record.variance > 1e-5, "{spec}: {}", run.record.variance);
    }
}

#[test]
fn two_electron_spectrum_is_exact_along_the_bond() {
    for r in [0.5, 1.0, 2.0] {
        let sys = MolecularSystem::from_geometry(Geometry::h2(r).unwrap(), "sto-3g").unwrap();
        let config = OptimizerConfig {
            residual_threshold: 1e-8,
            ..OptimizerConfig::default()
        };
        let solver = Solver::for_system(&sys, config).unwrap();
        let runs = solver
            .run_spectrum(&starting_points(&solver.guesses(GuessKind::Csf).unwrap()), 4, &ConstraintStrategy::default())
            .unwrap();
        for run in &runs {
            assert_eq!(run.record.termination, Termination::Converged);
            assert!(run.record.variance < 1e-10, "r={r}: {}", run.record.variance);
        }
    }
}

#[test]
fn history_reproduces_final_state() {
    let (_, fci, solver) = h4();
    let pool = solver.guesses(GuessKind::Csf).unwrap();
    let mut p = ProjectionSet::new();
    p.push(fci.state(0).unwrap(), fci.energies()[0], None);
    let run = solver
        .run_single_state("second", &pool[1].state, &p, &ConstraintStrategy::default(), &solver.config)
        .unwrap();
    let replay = run.gadgets.run(&run.initial);
    let diff = replay
        .amplitudes()
        .iter()
        .zip(run.state.amplitudes())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    assert!(diff < 1e-10);
    assert!(run.record.converged);
    assert!((run.record.energy - fci.energies()[1]).abs() < 1e-6);
}

fn strategy() -> impl Strategy<Value = ConstraintStrategy> {
    prop_oneof![
        (0.0f64..5.0).prop_map(|lambda| ConstraintStrategy::Lagrangian { lambda }),
        (0.01f64..5.0).prop_map(|mu| ConstraintStrategy::Penalty { mu }),
        (0.0f64..5.0, 0.01f64..5.0, 1.0f64..4.0)
            .prop_map(|(lambda0, mu, growth)| ConstraintStrategy::Augmented { lambda0, mu, growth }),
        (0.01f64..5.0).prop_map(|beta| ConstraintStrategy::Deflation { beta }),
    ]
}

proptest! {
    #[test]
    fn strategy_text_round_trips(s in strategy()) {
        let back: ConstraintStrategy = s.to_string().parse().unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn csf_text_round_trips(i in 0usize..36) {
        let spec = enumerate_csfs(4, 4, 0).swap_remove(i);
        prop_assert_eq!(spec.to_string().parse::<CsfSpec>().unwrap(), spec);
    }
}
