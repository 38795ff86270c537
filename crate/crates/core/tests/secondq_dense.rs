mod common;

use common::*;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use escqe::fci::{enumerate_sector, sector_hamiltonian};
use escqe::secondq::{
    assemble_hamiltonian, gamma_op, jw_fermion_op, two_body_to_pauli, GeneratorBasis, Hermiticity, Ladder, Pauli,
    PauliSum, PauliWord, TwoBodyCoefficients,
};

#[test]
fn ladder_operators_match_fock_matrices() {
    for n in 1..=5 {
        for p in 0..n {
            for (op, create) in [(Ladder::Create, true), (Ladder::Annihilate, false)] {
                let dense = from_row_major(1 << n, &jw_fermion_op(op, p, n).unwrap().to_dense());
                assert!(max_diff(&dense, &ladder(n, p, create)) < 1e-10, "n={n} p={p} {op:?}");
            }
        }
    }
}

#[test]
fn gamma_matches_fock_oracle_on_eight_modes() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..12 {
        let idx: Vec<usize> = (0..4).map(|_| rng.gen_range(0..8)).collect();
        let (i, k, l, j) = (idx[0], idx[1], idx[2], idx[3]);
        let dense = from_row_major(256, &gamma_op(i, k, l, j, 8).unwrap().to_dense());
        assert!(max_diff(&dense, &gamma_sparse(8, i, k, l, j)) < 1e-12, "({i},{k},{l},{j})");
    }
}

#[test]
fn gamma_agrees_with_ladder_products() {
    let dense = gamma(4, 0, 3, 1, 2);
    assert!(max_diff(&dense, &gamma_sparse(4, 0, 3, 1, 2)) < 1e-15);
}

#[test]
fn hamiltonian_matches_fock_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for r in [2, 4] {
        let h = random_hamiltonian(&mut rng, r);
        let pauli = assemble_hamiltonian(&h);
        assert!(pauli.is_hermitian(1e-12));
        let dense = from_row_major(1 << (2 * r), &pauli.to_dense());
        assert!(max_diff(&dense, &hamiltonian(&h)) < 1e-10, "r={r}");
    }
}

#[test]
fn sector_matrix_is_projection_of_qubit_hamiltonian() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let h = random_hamiltonian(&mut rng, 4);
    let full = hamiltonian(&h);
    let basis = enumerate_sector(4, 2, 2).unwrap();
    assert_eq!(basis.dim(), 36);
    let sector = sector_hamiltonian(&h, &basis);
    let dets = basis.determinants();
    let mut worst: f64 = 0.0;
    for (a, &da) in dets.iter().enumerate() {
        for (b, &db) in dets.iter().enumerate() {
            worst = worst.max((full[(da as usize, db as usize)] - c(sector[(a, b)])).norm());
        }
    }
    assert!(worst < 1e-10, "{worst}");
}

fn random_anti_hermitian(rng: &mut ChaCha8Rng, n: usize) -> TwoBodyCoefficients {
    let mut t = TwoBodyCoefficients::zeros(n, Hermiticity::AntiHermitian);
    for _ in 0..10 {
        let (i, k, j, l) = loop {
            let v: Vec<usize> = (0..4).map(|_| rng.gen_range(0..n)).collect();
            if v[0] != v[1] && v[2] != v[3] {
                break (v[0], v[1], v[2], v[3]);
            }
        };
        let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if (i, k) == (j, l) || (i, k) == (l, j) {
            t.set_anti_hermitian(i, k, j, l, Complex64::new(0.0, z.im));
        } else {
            t.set_anti_hermitian(i, k, j, l, z);
        }
    }
    t
}

#[test]
fn two_body_operator_is_anti_hermitian_and_matches_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let n = 6;
    for _ in 0..4 {
        let a = random_anti_hermitian(&mut rng, n);
        let m = from_row_major(1 << n, &two_body_to_pauli(&a).unwrap().to_dense());
        assert!(max_diff(&m.adjoint(), &(-&m)) < 1e-12);
        let mut oracle = CMat::zeros(1 << n, 1 << n);
        for i in 0..n {
            for k in 0..n {
                for j in 0..n {
                    for l in 0..n {
                        let v = a.get(i, k, j, l);
                        if v.norm() > 0.0 {
                            oracle += gamma_sparse(n, i, k, l, j) * v;
                        }
                    }
                }
            }
        }
        assert!(max_diff(&m, &oracle) < 1e-12);
    }
}

#[test]
fn generator_basis_size_and_adjointness() {
    let basis = GeneratorBasis::new(8).unwrap();
    assert_eq!(basis.len(), 328);
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let a = random_anti_hermitian(&mut rng, 8);
    let grad = basis.project(&a);
    for _ in 0..5 {
        let x: Vec<f64> = (0..basis.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let lhs: f64 = grad.iter().zip(&x).map(|(g, x)| g * x).sum();
        let rhs = basis.to_coefficients(&x).pairing(&a).re;
        assert!((lhs - rhs).abs() < 1e-10 * (1.0 + rhs.abs()), "{lhs} vs {rhs}");
    }
}

fn pauli_strategy(n: usize) -> impl Strategy<Value = PauliWord> {
    proptest::collection::vec(0u8..4, n).prop_map(|v| {
        v.iter().enumerate().fold(PauliWord::identity(), |w, (q, &p)| {
            w.with(
                q,
                match p {
                    0 => Pauli::I,
                    1 => Pauli::X,
                    2 => Pauli::Y,
                    _ => Pauli::Z,
                },
            )
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn word_product_matches_dense(a in pauli_strategy(3), b in pauli_strategy(3)) {
        let n = 3;
        let da = from_row_major(8, &PauliSum::from_term(n, a, c(1.0)).to_dense());
        let db = from_row_major(8, &PauliSum::from_term(n, b, c(1.0)).to_dense());
        let (phase, w) = a.mul(&b);
        let dp = from_row_major(8, &PauliSum::from_term(n, w, phase).to_dense());
        prop_assert!(max_diff(&(&da * &db), &dp) < 1e-14);
        let commute = max_diff(&(&da * &db), &(&db * &da)) < 1e-14;
        prop_assert_eq!(a.commutes_with(&b), commute);
    }

    #[test]
    fn words_square_to_identity(a in pauli_strategy(4)) {
        let d = from_row_major(16, &PauliSum::from_term(4, a, c(1.0)).to_dense());
        prop_assert!(max_diff(&(&d * &d), &CMat::identity(16, 16)) < 1e-14);
    }

    #[test]
    fn render_parse_round_trip(a in pauli_strategy(6)) {
        prop_assert_eq!(PauliWord::parse(&a.render(6)).unwrap(), a);
    }

    #[test]
    fn canonical_anticommutation(p in 0usize..4, q in 0usize..4) {
        let n = 4;
        let ap = from_row_major(16, &jw_fermion_op(Ladder::Annihilate, p, n).unwrap().to_dense());
        let cq = from_row_major(16, &jw_fermion_op(Ladder::Create, q, n).unwrap().to_dense());
        let anti = &ap * &cq + &cq * &ap;
        let expect = if p == q { CMat::identity(16, 16) } else { CMat::zeros(16, 16) };
        prop_assert!(max_diff(&anti, &expect) < 1e-14);
    }
}
