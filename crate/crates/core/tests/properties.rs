use hilbert_trunc::bases::OrthonormalBasis;
use hilbert_trunc::matrix::{null_space_basis, HouseholderQr};
use hilbert_trunc::operators::BoundedOperator;
use hilbert_trunc::truncation::{compress, solve_cg};
use hilbert_trunc::{
    qr_least_squares, singular_values, Coefficients, DenseMatrix, Element, Function, L2Space, SeqDomain,
    Sequence, SequenceLaw,
};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DenseMatrix {
    DenseMatrix::from_fn(rows, cols, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

fn residual(a: &DenseMatrix, x: &[Complex64], b: &[Complex64]) -> f64 {
    a.mul_vec(x)
        .unwrap()
        .iter()
        .zip(b)
        .map(|(p, q)| (p - q).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

fn norm(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[test]
fn least_squares_beats_perturbations() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for instance in 0..100 {
        let n = 2 + instance % 9;
        let rank = 1 + rng.gen_range(0..n);
        // Rank-deficient square matrix as a product of thin factors.
        let a = random_matrix(&mut rng, n, rank)
            .matmul(&random_matrix(&mut rng, rank, n))
            .unwrap();
        let b: Vec<Complex64> = (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), 0.0)).collect();
        let x = qr_least_squares(&a, &Coefficients::from_vec(b.clone(), "e")).unwrap();
        let x = x.values();
        let r0 = residual(&a, x, &b);
        for _ in 0..10 {
            let d: Vec<Complex64> = x
                .iter()
                .map(|z| z + Complex64::new(rng.gen_range(-1e-3..1e-3), rng.gen_range(-1e-3..1e-3)))
                .collect();
            assert!(residual(&a, &d, &b) >= r0 - 1e-12);
        }
        // Moving along the null space keeps the residual and increases the norm.
        for v in null_space_basis(&a) {
            let d: Vec<Complex64> = x.iter().zip(&v).map(|(p, q)| p + q * 0.1).collect();
            assert!((residual(&a, &d, &b) - r0).abs() < 1e-10);
            assert!(norm(&d) >= norm(x) - 1e-12);
        }
    }
}

#[test]
fn singular_values_invariant_under_unitaries() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let sp = L2Space::for_truncation(0.0, 1.0, 12).unwrap();
    let leg = OrthonormalBasis::legendre(&sp);
    let zero = Element::Func(Function::zero(&sp));
    let a = compress(&BoundedOperator::volterra(), &leg, &leg, 12, &zero).unwrap().matrix;
    let sv = singular_values(&a);
    for _ in 0..5 {
        let u = HouseholderQr::new(&random_matrix(&mut rng, 12, 12), false).q();
        let w = HouseholderQr::new(&random_matrix(&mut rng, 12, 12), false).q();
        let rotated = u.matmul(&a).unwrap().matmul(&w.adjoint()).unwrap();
        for (p, q) in sv.iter().zip(singular_values(&rotated)) {
            assert!((p - q).abs() < 1e-12);
        }
    }
}

#[test]
fn exact_coefficients_solve_truncations_asymptotically() {
    let sp = L2Space::for_truncation(0.0, 1.0, 200).unwrap();
    let fou = OrthonormalBasis::fourier(&sp);
    let v = BoundedOperator::volterra();
    let f = Element::Func(Function::polynomial(&sp, &[0.0, 1.0]));
    let g = v.apply(&f).unwrap();
    let eps: Vec<f64> = [10usize, 25, 50, 100, 200]
        .iter()
        .map(|&n| {
            let p = compress(&v, &fou, &fou, n, &g).unwrap();
            let af = p.matrix.mul_vec(&fou.coordinates(&f, n).unwrap()).unwrap();
            residual(&DenseMatrix::identity(n), &af, p.rhs.values())
        })
        .collect();
    for w in eps.windows(2) {
        assert!(w[1] < w[0], "{eps:?}");
    }
}

/// `σ_max` of the `2N × 2N` compression with its leading `N × N` block removed.
fn off_block_norm(op: &BoundedOperator, basis: &OrthonormalBasis, zero: &Element, n: usize) -> f64 {
    let a = compress(op, basis, basis, 2 * n, zero).unwrap().matrix;
    let cut = DenseMatrix::from_fn(2 * n, 2 * n, |i, j| if i < n && j < n { c(0.0) } else { a[(i, j)] });
    singular_values(&cut)[0]
}

#[test]
fn compact_compressions_converge_in_norm() {
    let sp = L2Space::for_truncation(0.0, 1.0, 80).unwrap();
    let leg = OrthonormalBasis::legendre(&sp);
    let zero = Element::Func(Function::zero(&sp));
    let v = BoundedOperator::volterra();
    let vols: Vec<f64> = [5, 10, 20, 40].iter().map(|&n| off_block_norm(&v, &leg, &zero, n)).collect();

    let shift = BoundedOperator::weighted_right_shift(SequenceLaw::power(1.0, 1.0)).unwrap();
    let e = OrthonormalBasis::canonical(SeqDomain::Natural);
    let zero = Element::Seq(Sequence::zero(SeqDomain::Natural));
    let shifts: Vec<f64> = [5, 10, 20, 40].iter().map(|&n| off_block_norm(&shift, &e, &zero, n)).collect();

    for s in [&vols, &shifts] {
        for w in s.windows(2) {
            assert!(w[1] < w[0], "{s:?}");
        }
        assert!(*s.last().unwrap() < 0.05, "{s:?}");
    }
    // The isometric right shift keeps a unit off-block.
    let r = BoundedOperator::right_shift();
    assert!((off_block_norm(&r, &e, &zero, 20) - 1.0).abs() < 1e-12);
}

#[test]
fn cg_error_obeys_source_condition_rate() {
    let d = SeqDomain::Natural;
    let len = 200usize;
    let op = BoundedOperator::multiplication_seq(SequenceLaw::power(1.0, 1.0)).unwrap();
    let window = |law: &dyn Fn(f64) -> f64| {
        Element::Seq(Sequence::new(d, 1, (1..=len).map(|n| c(law(n as f64))).collect()).unwrap())
    };
    let f = window(&|n| n.powi(-2));
    let g = op.apply(&f).unwrap();
    // f0 − f = A^{γ/2} u with γ = 1 and u_n = 1/n.
    let gamma = 1.0;
    let f0 = f.add(&window(&|n| n.powf(-gamma / 2.0) / n)).unwrap();
    let its = solve_cg(&op, &g, 20, &f0).unwrap();
    let errs: Vec<f64> = its.iter().map(|it| it.iterate.sub(&f).unwrap().norm().unwrap()).collect();
    let rate = |n: usize, cst: f64| (cst / (2 * n + 1) as f64).powf(gamma);
    let cst = (0..=3)
        .map(|n| (2 * n + 1) as f64 * errs[n].powf(1.0 / gamma))
        .fold(0.0, f64::max);
    for (n, e) in errs.iter().enumerate() {
        assert!(*e <= rate(n, cst) * (1.0 + 1e-9), "N = {n}: {e} > {}", rate(n, cst));
    }
    assert!(errs[20] <= 1e-3 * errs[0], "{errs:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn least_squares_is_exact_for_consistent_full_rank(seed in 0u64..1000, n in 1usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_matrix(&mut rng, n, n);
        prop_assume!(*singular_values(&a).last().unwrap() > 1e-6);
        let x: Vec<Complex64> = (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let b = a.mul_vec(&x).unwrap();
        let y = qr_least_squares(&a, &Coefficients::from_vec(b, "e")).unwrap();
        for (p, q) in x.iter().zip(y.values()) {
            prop_assert!((p - q).norm() < 1e-8);
        }
    }
}
