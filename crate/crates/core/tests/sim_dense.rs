mod common;

use common::*;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use escqe::secondq::{GeneratorBasis, Hermiticity, Pauli, PauliSum, PauliWord, TwoBodyCoefficients};
use escqe::sim::{
    apply_gadget, apply_generator_step, apply_two_body_step, controlled_pair_overlap, controlled_pair_tdm,
    inner_product, transition_2rdm, CompiledOperator, GadgetSequence, StateVector,
};

fn random_word(rng: &mut ChaCha8Rng, n: usize) -> PauliWord {
    (0..n).fold(PauliWord::identity(), |w, q| {
        w.with(q, [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][rng.gen_range(0..4)])
    })
}

fn random_state(rng: &mut ChaCha8Rng, n: usize) -> StateVector {
    StateVector::from_amplitudes(n, random_vector(rng, 1 << n)).unwrap()
}

fn random_sequence(rng: &mut ChaCha8Rng, n: usize, len: usize) -> GadgetSequence {
    let mut s = GadgetSequence::new(n);
    for _ in 0..len {
        s.push(random_word(rng, n), rng.gen_range(-1.5..1.5));
    }
    s
}

#[test]
fn gadget_matches_dense_exponential() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..40 {
        let n = 5;
        let w = random_word(&mut rng, n);
        let theta: f64 = rng.gen_range(-3.0..3.0);
        let psi = random_state(&mut rng, n);
        let p = from_row_major(32, &PauliSum::from_term(n, w, c(1.0)).to_dense());
        let u = CMat::identity(32, 32) * c(theta.cos()) + p * Complex64::new(0.0, theta.sin());
        let expect = u * CVec::from_column_slice(psi.amplitudes());
        let mut out = psi.clone();
        apply_gadget(&mut out, &w, theta);
        let diff = out.amplitudes().iter().zip(expect.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(diff < 1e-12, "{diff}");
    }
}

#[test]
fn compiled_expectation_matches_quadratic_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let n = 6;
    let mut op = PauliSum::zero(n);
    for _ in 0..25 {
        op.add_term(random_word(&mut rng, n), c(rng.gen_range(-1.0..1.0)));
    }
    let dense = from_row_major(1 << n, &op.to_dense());
    let compiled = CompiledOperator::new(&op);
    for _ in 0..5 {
        let a = random_state(&mut rng, n);
        let b = random_state(&mut rng, n);
        let q = quad_form(&dense, a.amplitudes(), a.amplitudes());
        assert!((compiled.expectation(&a) - q).norm() < 1e-12);
        let m = quad_form(&dense, a.amplitudes(), b.amplitudes());
        assert!((compiled.matrix_element(&a, &b) - m).norm() < 1e-12);
    }
}

#[test]
fn transition_rdm_matches_dense_gamma() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let n = 6;
    let a = random_state(&mut rng, n);
    let b = random_state(&mut rng, n);
    let d = transition_2rdm(&a, &b);
    for _ in 0..30 {
        let v: Vec<usize> = (0..4).map(|_| rng.gen_range(0..n)).collect();
        let g = gamma_sparse(n, v[0], v[1], v[2], v[3]);
        let expect = quad_form(&g, a.amplitudes(), b.amplitudes());
        assert!((d.get(v[0], v[1], v[2], v[3]) - expect).norm() < 1e-10, "{v:?}");
    }
}

#[test]
fn ancilla_circuits_match_direct_simulation() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let n = 6;
    for trial in 0..6 {
        let init_k = random_state(&mut rng, n);
        let init_j = random_state(&mut rng, n);
        let seq_k = random_sequence(&mut rng, n, 3 + trial);
        let seq_j = random_sequence(&mut rng, n, 7 - trial);
        let psi_k = seq_k.run(&init_k);
        let psi_j = seq_j.run(&init_j);
        let ov = controlled_pair_overlap(&seq_k, &init_k, &seq_j, &init_j).unwrap();
        assert!((ov - inner_product(&psi_j, &psi_k)).norm() < 1e-12);
        let d = transition_2rdm(&psi_j, &psi_k);
        for _ in 0..4 {
            let v: Vec<usize> = (0..4).map(|_| rng.gen_range(0..n)).collect();
            let g = [v[0], v[1], v[2], v[3]];
            let t = controlled_pair_tdm(&seq_k, &init_k, &seq_j, &init_j, g).unwrap();
            assert!((t - d.get(g[0], g[1], g[2], g[3])).norm() < 1e-12, "{g:?}");
        }
    }
}

#[test]
fn pair_excitation_step_matches_dense_exponential() {
    let n = 6;
    let mut a = TwoBodyCoefficients::zeros(n, Hermiticity::AntiHermitian);
    a.set_anti_hermitian(0, 1, 2, 3, Complex64::new(0.7, -0.4));
    let mut m = CMat::zeros(64, 64);
    for i in 0..n {
        for k in 0..n {
            for j in 0..n {
                for l in 0..n {
                    let v = a.get(i, k, j, l);
                    if v.norm() > 0.0 {
                        m += gamma_sparse(n, i, k, l, j) * v;
                    }
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let psi = random_state(&mut rng, n);
    let eps = 1e-3;
    let expect = expm(&(m * c(eps))) * CVec::from_column_slice(psi.amplitudes());
    let mut out = psi.clone();
    apply_two_body_step(&mut out, &a, eps).unwrap();
    let diff = out.amplitudes().iter().zip(expect.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    assert!(diff < 1e-10, "{diff}");
}

fn generator_defect(basis: &GeneratorBasis, x: &[f64], psi: &StateVector, m: &CMat, eps: f64) -> f64 {
    let exact = expm(&(m * c(eps))) * CVec::from_column_slice(psi.amplitudes());
    let mut s = psi.clone();
    apply_generator_step(&mut s, basis, x, eps).unwrap();
    s.amplitudes().iter().zip(exact.iter()).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
}

#[test]
fn trotter_defect_scales_quadratically() {
    let basis = GeneratorBasis::new(8).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let x: Vec<f64> = (0..basis.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let m = from_row_major(256, &basis.to_pauli(&x).to_dense());
    let psi = StateVector::from_amplitudes(8, random_sector_vector(&mut rng, 8, 2, 2)).unwrap();
    for eps in [0.04, 0.02] {
        let ratio = generator_defect(&basis, &x, &psi, &m, eps) / generator_defect(&basis, &x, &psi, &m, eps / 2.0);
        assert!((ratio / 4.0 - 1.0).abs() < 0.2, "eps={eps}: ratio {ratio}");
    }
}

fn sector_counts(amps: &[Complex64]) -> Vec<(u32, u32)> {
    let alpha: usize = 0b0101_0101;
    amps.iter()
        .enumerate()
        .filter(|(_, a)| a.norm() > 1e-12)
        .map(|(b, _)| ((b & alpha).count_ones(), (b & !alpha).count_ones()))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn generator_steps_are_unitary_and_symmetry_preserving(seed in any::<u64>(), eps in -2.0f64..2.0) {
        let basis = GeneratorBasis::new(8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x: Vec<f64> = (0..basis.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut s = StateVector::from_amplitudes(8, random_sector_vector(&mut rng, 8, 2, 2)).unwrap();
        let seq = apply_generator_step(&mut s, &basis, &x, eps).unwrap();
        prop_assert!((s.norm() - 1.0).abs() < 1e-12);
        prop_assert!(sector_counts(s.amplitudes()).iter().all(|&c| c == (2, 2)));
        prop_assert!(seq.len() > 0);
    }

    #[test]
    fn sequences_replay_identically(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let init = random_state(&mut rng, 4);
        let seq = random_sequence(&mut rng, 4, 6);
        let mut applied = init.clone();
        seq.apply(&mut applied);
        let replayed = seq.run(&init);
        prop_assert_eq!(applied.amplitudes(), replayed.amplitudes());
        prop_assert!((applied.norm() - 1.0).abs() < 1e-12);
    }
}
