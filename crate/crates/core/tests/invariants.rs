//! Cross-module properties on seeded random instances: the algebraic
//! identities hold as proptest cases, the statistical claims as fixed-seed
//! loops so failures replay exactly.

use std::collections::BTreeMap;

use num_complex::Complex;
use num_rational::Rational64;
use num_traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use cnormal::eigen::gaussian_matrix;
use cnormal::matrix::inner;
use cnormal::measure::{SparseFn, sparse_compose};
use cnormal::{
    c_normal_decompose, classification_battery, classify_composition, classify_multiplication,
    classify_symbol_symmetry, conjugate_normal_canonical, conjugated_section, eig_hermitian,
    eig_normal, generate_c_normal, haar_unitary, is_antilinearly_normal, is_c_normal_toeplitz,
    is_c_skew_symmetric, is_c_symmetric, is_conjugate_normal, phi_sim, radon_nikodym,
    toeplitz_section, AntilinearOp, CanonicalBlocks, Conjugation, DecompositionVariant,
    DiscreteMeasureSpace, Matrix, Operator, PointId, PointMap, Symbol, ToleranceContext,
};

type C64 = Complex<f64>;
type Tol = ToleranceContext<f64>;

fn rng(tag: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(tag)
}

fn random_vector(n: usize, rng: &mut ChaCha20Rng) -> Vec<C64> {
    (0..n).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

fn random_conjugation(dim: usize, rng: &mut ChaCha20Rng) -> Conjugation<f64> {
    match rng.gen_range(0..4u8) {
        0 => Conjugation::identity(dim),
        1 => Conjugation::flip(dim),
        2 => Conjugation::xi_theta(dim, rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)),
        _ => Conjugation::random(dim, rng),
    }
}

fn random_blocks(dim: usize, rng: &mut ChaCha20Rng) -> CanonicalBlocks<f64> {
    let mut singles = Vec::new();
    let mut pairs = Vec::new();
    let mut left = dim;
    while left > 0 {
        if left >= 2 && rng.gen_bool(0.4) {
            pairs.push((rng.gen_range(0.0..1.5), 0.1 + rng.gen_range(0.0..1.5)));
            left -= 2;
        } else {
            singles.push(rng.gen_range(0.05..2.0));
            left -= 1;
        }
    }
    CanonicalBlocks::new(singles, pairs)
}

fn matrix_from_parts(n: usize, parts: &[(f64, f64)]) -> Matrix<f64> {
    Matrix::from_fn(n, n, |i, j| {
        let (re, im) = parts[i * n + j];
        C64::new(re, im)
    })
}

fn entry_strategy() -> impl Strategy<Value = (f64, f64)> {
    (-1.0..1.0f64, -1.0..1.0f64)
}

// ---------------------------------------------------------------------------
// Matrix algebra and eigensolvers

proptest! {
    #[test]
    fn product_adjoint_reverses_factors(
        a in prop::collection::vec(entry_strategy(), 36),
        b in prop::collection::vec(entry_strategy(), 36),
    ) {
        let a = matrix_from_parts(6, &a);
        let b = matrix_from_parts(6, &b);
        let lhs = (&a * &b).adjoint();
        let rhs = &b.adjoint() * &a.adjoint();
        prop_assert!((&lhs - &rhs).frobenius_norm() <= 1e-14);
    }
}

#[test]
fn hermitian_eigensolver_reconstructs_random_instances() {
    let mut rng = rng(0x6865726d);
    for trial in 0..100 {
        let n = 2 + trial % 7;
        let x: Matrix<f64> = gaussian_matrix(n, &mut rng);
        let h = (&x + &x.adjoint()).scale(C64::new(0.5, 0.0));
        let e = eig_hermitian(&h).unwrap();
        let lambda = Matrix::from_fn(n, n, |i, j| {
            if i == j { C64::new(e.values[i], 0.0) } else { C64::zero() }
        });
        let recon = &(&e.vectors * &lambda) * &e.vectors.adjoint();
        let resid = (&h - &recon).frobenius_norm();
        assert!(
            resid <= 1e-10 * h.frobenius_norm().max(1.0),
            "trial {trial}: reconstruction residual {resid:.3e}"
        );
    }
}

#[test]
fn normal_eigensolver_agrees_with_hermitian_on_hermitian_input() {
    let tol = Tol::default();
    let mut rng = rng(0x6e6f726d);
    for trial in 0..30 {
        let n = 2 + trial % 7;
        let x: Matrix<f64> = gaussian_matrix(n, &mut rng);
        let h = (&x + &x.adjoint()).scale(C64::new(0.5, 0.0));
        let eh = eig_hermitian(&h).unwrap();
        let en = eig_normal(&h, &tol).unwrap();
        let scale = h.frobenius_norm().max(1.0);
        // Both are sorted descending by (re, im); Hermitian spectra are real.
        for i in 0..n {
            assert!((en.values[i].re - eh.values[i]).abs() <= 1e-9 * scale);
            assert!(en.values[i].im.abs() <= 1e-9 * scale);
        }
    }
}

// ---------------------------------------------------------------------------
// Conjugations

#[test]
fn conjugations_are_antiunitary_involutions() {
    let mut rng = rng(0x636f6e6a);
    for dim in 1..=7 {
        let built: Vec<Conjugation<f64>> = vec![
            Conjugation::identity(dim),
            Conjugation::flip(dim),
            Conjugation::xi_theta(dim, 0.7, -1.3),
            Conjugation::random(dim, &mut rng),
        ];
        for c in &built {
            let m = c.matrix();
            assert!((m - &m.transpose()).frobenius_norm() <= 1e-14);
            for _ in 0..25 {
                let h = random_vector(dim, &mut rng);
                let g = random_vector(dim, &mut rng);
                let gap = (inner(&c.apply(&h), &c.apply(&g)) - inner(&g, &h)).norm();
                assert!(gap <= 1e-12, "dim {dim}: <Ch, Cg> != <g, h> by {gap:.3e}");
                let twice = c.apply(&c.apply(&h));
                let drift: f64 =
                    twice.iter().zip(&h).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
                assert!(drift <= 1e-12, "dim {dim}: C^2 moved a vector by {drift:.3e}");
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Antilinear calculus

#[test]
fn antilinear_adjoint_identity_holds() {
    let mut rng = rng(0x61646a74);
    for trial in 0..100 {
        let n = 2 + trial % 7;
        let x = AntilinearOp::new(gaussian_matrix(n, &mut rng));
        let v = random_vector(n, &mut rng);
        let w = random_vector(n, &mut rng);
        let lhs = inner(&x.apply(&v), &w);
        let rhs = inner(&v, &x.sharp().apply(&w)).conj();
        assert!((lhs - rhs).norm() <= 1e-12, "trial {trial}");
    }
}

#[test]
fn antilinear_normality_matches_commutator_oracle() {
    let tol = Tol::default();
    let mut rng = rng(0x6f72636c);
    let check = |x: &AntilinearOp<f64>| {
        let via_matrix = is_antilinearly_normal(x, &tol);
        let left = cnormal::compose_antilinear_antilinear(x, &x.sharp());
        let right = cnormal::compose_antilinear_antilinear(&x.sharp(), x);
        let resid = (&left.matrix - &right.matrix).frobenius_norm();
        let scale = x.matrix.frobenius_norm();
        let direct = tol.check(resid, scale * scale);
        assert_eq!(via_matrix, direct, "commutator residual {resid:.3e}");
        via_matrix
    };
    let mut normal_seen = 0;
    for trial in 0..200 {
        let n = 2 + trial % 7;
        check(&AntilinearOp::new(gaussian_matrix(n, &mut rng)));
        // Structured instance: U D U^t with canonical D is conjugate-normal,
        // so the antilinear operator it represents is normal.
        let c = Conjugation::identity(n);
        let m = generate_c_normal(&c, &random_blocks(n, &mut rng), rng.gen()).unwrap();
        if check(&AntilinearOp::new(m)) {
            normal_seen += 1;
        }
    }
    assert_eq!(normal_seen, 200);
}

proptest! {
    #[test]
    fn operator_composition_is_associative(
        kinds in prop::collection::vec(any::<bool>(), 3),
        a in prop::collection::vec(entry_strategy(), 16),
        b in prop::collection::vec(entry_strategy(), 16),
        c in prop::collection::vec(entry_strategy(), 16),
    ) {
        let wrap = |antilinear: bool, m: Matrix<f64>| {
            if antilinear {
                Operator::Antilinear(AntilinearOp::new(m))
            } else {
                Operator::Linear(cnormal::LinearOp::new(m))
            }
        };
        let x = wrap(kinds[0], matrix_from_parts(4, &a));
        let y = wrap(kinds[1], matrix_from_parts(4, &b));
        let z = wrap(kinds[2], matrix_from_parts(4, &c));
        let left = x.compose(&y).compose(&z);
        let right = x.compose(&y.compose(&z));
        prop_assert_eq!(left.is_antilinear(), right.is_antilinear());
        let gap = (left.matrix() - right.matrix()).frobenius_norm();
        prop_assert!(gap <= 1e-12, "associativity gap {:.3e}", gap);
    }
}

#[test]
fn conjugate_normality_survives_unitary_congruence() {
    let tol = Tol::default();
    let mut rng = rng(0x636f6e67);
    for trial in 0..50 {
        let n = 2 + trial % 7;
        let c = Conjugation::identity(n);
        let m = generate_c_normal(&c, &random_blocks(n, &mut rng), rng.gen()).unwrap();
        assert!(is_conjugate_normal(&m, &tol));
        let u: Matrix<f64> = haar_unitary(n, &mut rng);
        let moved = &(&u * &m) * &u.transpose();
        assert!(is_conjugate_normal(&moved, &tol), "trial {trial}");
    }
}

// ---------------------------------------------------------------------------
// The classification battery

#[test]
fn battery_flags_agree_on_random_instances() {
    let tol = Tol::new(1e-9, 1e-9);
    let mut rng = rng(0x62617474);
    for trial in 0..60 {
        let dim = 2 + trial % 7;
        let c = random_conjugation(dim, &mut rng);
        let loose: Matrix<f64> = gaussian_matrix(dim, &mut rng);
        let report = classification_battery(&loose, &c, &tol).unwrap();
        assert!(report.flags_agree(), "trial {trial} (unstructured): {:?}", report.flags);

        let built = generate_c_normal(&c, &random_blocks(dim, &mut rng), rng.gen()).unwrap();
        let report = classification_battery(&built, &c, &tol).unwrap();
        assert!(report.flags_agree(), "trial {trial} (generated): {:?}", report.flags);
        assert!(report.c_normal, "trial {trial}: generated instance must classify true");
    }
}

#[test]
fn perturbation_separates_generated_instances() {
    let tol = Tol::new(1e-9, 1e-9);
    let c = Conjugation::flip(4);
    let blocks = CanonicalBlocks::new(vec![1.3, 0.6], vec![(0.5, 1.1)]);
    let n = generate_c_normal(&c, &blocks, 41).unwrap();
    let clean = classification_battery(&n, &c, &tol).unwrap();
    assert!(clean.flags.values().all(|&v| v), "clean instance must pass every condition");

    let mut bumped = n.clone();
    bumped[(0, 0)] += C64::new(1e-3, 0.0);
    let dirty = classification_battery(&bumped, &c, &tol).unwrap();
    assert!(
        dirty.flags.values().all(|&v| !v),
        "the 1e-3 bump must break every condition: {:?}",
        dirty.flags
    );
}

#[test]
fn unitary_operators_are_c_normal() {
    let tol = Tol::default();
    let mut rng = rng(0x756e6974);
    for trial in 0..100 {
        let dim = 2 + trial % 5;
        let u: Matrix<f64> = haar_unitary(dim, &mut rng);
        let c = random_conjugation(dim, &mut rng);
        let report = classification_battery(&u, &c, &tol).unwrap();
        assert!(report.c_normal, "trial {trial}: a unitary must be C-normal");
        assert!(report.flags_agree());
    }
}

#[test]
fn structured_symmetries_imply_c_normal() {
    let tol = Tol::default();
    let mut rng = rng(0x73796d6d);
    for trial in 0..40 {
        let dim = 2 + trial % 6;
        let c = random_conjugation(dim, &mut rng);
        let g = c.matrix();
        let b: Matrix<f64> = gaussian_matrix(dim, &mut rng);
        let transported = &(g * &b.transpose()) * &g.conj();

        let symmetric = &b + &transported;
        assert!(is_c_symmetric(&symmetric, &c, &tol));
        let report = classification_battery(&symmetric, &c, &tol).unwrap();
        assert!(report.c_normal && report.c_symmetric, "trial {trial} (symmetric part)");

        let skew = &b - &transported;
        assert!(is_c_skew_symmetric(&skew, &c, &tol));
        let report = classification_battery(&skew, &c, &tol).unwrap();
        assert!(report.c_normal && report.c_skew_symmetric, "trial {trial} (skew part)");
    }
}

// ---------------------------------------------------------------------------
// Canonical form

#[test]
fn canonical_decomposition_contracts() {
    let tol = Tol::default();
    let mut rng = rng(0x63616e6f);
    for trial in 0..30 {
        let n = 2 + trial % 7;
        let c = Conjugation::identity(n);
        let m = generate_c_normal(&c, &random_blocks(n, &mut rng), rng.gen()).unwrap();

        // The derived matrix M conj(M) of a conjugate-normal M is normal.
        let b = &m * &m.conj();
        let scale = b.frobenius_norm().max(1.0);
        assert!(b.normality_residual() <= 1e-9 * scale);

        let dec = conjugate_normal_canonical(&m, &tol).unwrap();
        assert!(dec.u.is_unitary(&tol));
        assert!(dec.blocks.singles.iter().all(|&r| r >= 0.0));
        assert!(dec.blocks.pairs.iter().all(|&(s, t)| s >= 0.0 && t >= 0.0));
        let recomputed =
            (&dec.d - &(&(&dec.u * &m) * &dec.u.transpose())).frobenius_norm();
        assert!(
            (dec.residual - recomputed).abs() <= 1e-14 * m.frobenius_norm().max(1.0),
            "trial {trial}: stored residual {:.3e} vs recomputed {recomputed:.3e}",
            dec.residual
        );
    }
}

#[test]
fn canonical_roundtrip_recovers_blocks() {
    let tol = Tol::default();
    let mut rng = rng(0x72747270);
    for trial in 0..30 {
        let dim = 2 + trial % 7;
        let c = match trial % 3 {
            0 => Conjugation::flip(dim),
            1 => Conjugation::identity(dim),
            _ => Conjugation::xi_theta(dim, rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)),
        };
        let blocks = random_blocks(dim, &mut rng);
        let n = generate_c_normal(&c, &blocks, rng.gen()).unwrap();
        let dec = c_normal_decompose(&n, &c, DecompositionVariant::OperatorConjugation, &tol)
            .unwrap();
        let gap = blocks
            .normalized()
            .distance(&dec.canonical.blocks.normalized())
            .expect("block shapes must match");
        assert!(gap <= 1e-7, "trial {trial}: block gap {gap:.3e}");
        let bound = 1e-8 * n.frobenius_norm().max(1.0);
        assert!(dec.reconstruction_residual <= bound, "trial {trial}");
    }
}

// ---------------------------------------------------------------------------
// Toeplitz symbols

#[test]
fn symbol_symmetry_matches_masked_section_oracle() {
    let tol = Tol::default();
    let mut rng = rng(0x73656374);
    let n = 40usize;
    let thetas = [0.0, 0.9, 2.2];
    for trial in 0..100 {
        let theta = thetas[trial % thetas.len()];
        let xi = rng.gen_range(-3.0..3.0);
        let w = 1 + (trial / 3) % 5;
        // Analytic half at random; the coanalytic half either mirrors it
        // (symmetric), mirrors it negated with no mean (skew), or is free.
        let mut entries: Vec<(i64, C64)> = Vec::new();
        for k in 1..=w as i64 {
            entries.push((k, C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))));
        }
        match trial % 3 {
            0 => {
                for k in 1..=w as i64 {
                    let v = entries[(k - 1) as usize].1;
                    entries.push((-k, C64::from_polar(1.0, k as f64 * theta) * v));
                }
                entries.push((0, C64::new(rng.gen_range(-1.0..1.0), 0.0)));
            }
            1 => {
                for k in 1..=w as i64 {
                    let v = entries[(k - 1) as usize].1;
                    entries.push((-k, -(C64::from_polar(1.0, k as f64 * theta) * v)));
                }
            }
            _ => {
                for k in 1..=w as i64 {
                    entries.push((
                        -k,
                        C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                    ));
                }
                entries.push((0, C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))));
            }
        }
        let sym = Symbol::from_entries(&entries).unwrap();
        let (coef_sym, coef_skew) = classify_symbol_symmetry(&sym, theta, &tol);

        let a = toeplitz_section(&sym, n).unwrap();
        let cac = conjugated_section(&a, xi, theta).unwrap();
        let astar = a.adjoint();
        let mut sym_gap = 0.0f64;
        let mut skew_gap = 0.0f64;
        for l in w..n - w {
            for k in w..n - w {
                sym_gap = sym_gap.max((cac[(l, k)] - astar[(l, k)]).norm());
                skew_gap = skew_gap.max((cac[(l, k)] + astar[(l, k)]).norm());
            }
        }
        let scale = entries.iter().map(|(_, v)| v.norm()).fold(1.0, f64::max);
        assert_eq!(coef_sym, sym_gap <= 1e-10 * scale, "trial {trial}: symmetric verdicts");
        assert_eq!(coef_skew, skew_gap <= 1e-10 * scale, "trial {trial}: skew verdicts");
    }
}

#[test]
fn section_identity_survives_adjoints() {
    let mut rng = rng(0x61646a73);
    for trial in 0..25 {
        let w = 1 + trial % 5;
        let entries: Vec<(i64, C64)> = (1..=w as i64)
            .map(|k| (k, C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
            .collect();
        let plus = Symbol::from_entries(&entries).unwrap();
        let theta = rng.gen_range(-3.0..3.0);
        let xi = rng.gen_range(-3.0..3.0);
        let n = 12;

        let lhs = conjugated_section(&toeplitz_section(&plus, n).unwrap(), xi, theta).unwrap();
        let rhs = toeplitz_section(&phi_sim(&plus, xi, theta), n).unwrap();
        let base = (&lhs - &rhs).frobenius_norm();
        assert!(base <= 1e-13, "trial {trial}: base identity gap {base:.3e}");

        // Conjugating commutes with taking adjoints, so the adjoint sections
        // satisfy the reflected identity.
        let lhs_adj =
            conjugated_section(&toeplitz_section(&plus, n).unwrap().adjoint(), xi, theta)
                .unwrap();
        let rhs_adj = toeplitz_section(&phi_sim(&plus, xi, theta), n).unwrap().adjoint();
        let adj = (&lhs_adj - &rhs_adj).frobenius_norm();
        assert!(adj <= 1e-13, "trial {trial}: adjoint identity gap {adj:.3e}");
    }
}

proptest! {
    #[test]
    fn analytic_reflection_is_an_involution(
        parts in prop::collection::vec(entry_strategy(), 1..6),
        theta in -3.0..3.0f64,
        xi in -3.0..3.0f64,
    ) {
        let entries: Vec<(i64, C64)> = parts
            .iter()
            .enumerate()
            .map(|(i, &(re, im))| (i as i64 + 1, C64::new(re, im)))
            .collect();
        let plus = Symbol::from_entries(&entries).unwrap();
        let twice = phi_sim(&phi_sim(&plus, xi, theta), xi, theta);
        if theta == 0.0 {
            prop_assert_eq!(twice.coeffs(), plus.coeffs());
        } else {
            for (k, v) in plus.coeffs() {
                let gap = (twice.coeff(*k) - v).norm();
                prop_assert!(gap <= 1e-14 * v.norm().max(1.0));
            }
        }
    }

    #[test]
    fn toeplitz_verdicts_ignore_unimodular_scaling(
        parts in prop::collection::vec(entry_strategy(), 7),
        phase in -3.0..3.0f64,
        theta in -1.5..1.5f64,
    ) {
        let entries: Vec<(i64, C64)> = parts
            .iter()
            .enumerate()
            .map(|(i, &(re, im))| (i as i64 - 3, C64::new(re, im)))
            .collect();
        let sym = Symbol::from_entries(&entries).unwrap();
        let tol = Tol::default();
        let base = is_c_normal_toeplitz(&sym, 0.4, theta, &tol);
        let scaled = is_c_normal_toeplitz(
            &sym.scale(C64::from_polar(1.0, phase)),
            0.4,
            theta,
            &tol,
        );
        prop_assert_eq!(base.c_normal, scaled.c_normal);
        prop_assert_eq!(base.c_symmetric, scaled.c_symmetric);
        prop_assert_eq!(base.c_skew_symmetric, scaled.c_skew_symmetric);
        match (base.eta, scaled.eta) {
            (Some(e1), Some(e2)) => prop_assert!((e1 - e2).norm() <= 1e-12),
            (None, None) => {}
            other => prop_assert!(false, "eta presence changed: {:?}", other),
        }
    }
}

// ---------------------------------------------------------------------------
// Discrete measure spaces

fn rational_space(weights: &[Rational64]) -> DiscreteMeasureSpace<Rational64> {
    let atoms: Vec<(PointId, Rational64)> =
        weights.iter().enumerate().map(|(i, &w)| (i.to_string(), w)).collect();
    DiscreteMeasureSpace::finite(atoms).unwrap()
}

fn map_from_indices(image: &[usize]) -> PointMap {
    PointMap::total(
        image.iter().enumerate().map(|(i, &j)| (i.to_string(), j.to_string())).collect(),
    )
}

/// All permutations of `0..n` in lexicographic-ish order via Heap's method.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut all = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    fn heap(k: usize, arr: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(arr.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, arr, out);
            if k % 2 == 0 {
                arr.swap(i, k - 1);
            } else {
                arr.swap(0, k - 1);
            }
        }
    }
    heap(n, &mut current, &mut all);
    all
}

fn involutions(n: usize) -> Vec<Vec<usize>> {
    permutations(n)
        .into_iter()
        .filter(|p| (0..n).all(|i| p[p[i]] == i))
        .collect()
}

#[test]
fn change_of_variables_identity_random_instances() {
    let grid = [
        Rational64::new(1, 1),
        Rational64::new(1, 2),
        Rational64::new(2, 1),
        Rational64::new(3, 1),
    ];
    let mut rng = rng(0x63646572);
    for trial in 0..100 {
        let n = 2 + trial % 5;
        let weights: Vec<Rational64> = (0..n).map(|_| grid[rng.gen_range(0..grid.len())]).collect();
        let space = rational_space(&weights);
        let image: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
        let t = map_from_indices(&image);
        let h = radon_nikodym(&t, &space).unwrap();
        let f: Vec<Complex<Rational64>> = (0..n)
            .map(|_| {
                Complex::new(
                    Rational64::new(rng.gen_range(-5..5), rng.gen_range(1..4)),
                    Rational64::new(rng.gen_range(-5..5), rng.gen_range(1..4)),
                )
            })
            .collect();
        let mut lhs = Complex::<Rational64>::zero();
        let mut rhs = Complex::<Rational64>::zero();
        for (i, p) in space.points().iter().enumerate() {
            let w = Complex::new(*space.weight(p).unwrap(), Rational64::zero());
            let tp: usize = t.apply(p).unwrap().parse().unwrap();
            lhs = lhs + f[tp] * w;
            rhs = rhs + f[i] * Complex::new(h.values()[i], Rational64::zero()) * w;
        }
        assert_eq!(lhs, rhs, "trial {trial}: the integral identity must hold exactly");
    }
}

#[test]
fn change_of_variables_identity_float_lane() {
    let mut rng = rng(0x63646566);
    for trial in 0..50 {
        let n = 2 + trial % 5;
        let weights: Vec<f64> = (0..n).map(|_| rng.gen_range(0.25..4.0)).collect();
        let atoms: Vec<(PointId, f64)> =
            weights.iter().enumerate().map(|(i, &w)| (i.to_string(), w)).collect();
        let space = DiscreteMeasureSpace::finite(atoms).unwrap();
        let image: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
        let t = map_from_indices(&image);
        let h = radon_nikodym(&t, &space).unwrap();
        let f: Vec<C64> = random_vector(n, &mut rng);
        let mut lhs = C64::zero();
        let mut rhs = C64::zero();
        for i in 0..n {
            lhs += f[image[i]] * weights[i];
            rhs += f[i] * h.values()[i] * weights[i];
        }
        let scale = weights.iter().sum::<f64>().max(1.0);
        assert!((lhs - rhs).norm() <= 1e-12 * scale, "trial {trial}");
    }
}

/// Random involution compatible with a weight assignment: pair up equal-weight
/// atoms at random, leaving the rest fixed.
fn random_involution(weights: &[Rational64], rng: &mut ChaCha20Rng) -> Vec<usize> {
    let n = weights.len();
    let mut alpha: Vec<usize> = (0..n).collect();
    let mut free: Vec<usize> = (0..n).collect();
    while free.len() >= 2 {
        let x = free.swap_remove(rng.gen_range(0..free.len()));
        if rng.gen_bool(0.5) {
            continue;
        }
        let partners: Vec<usize> =
            free.iter().copied().filter(|&y| weights[y] == weights[x]).collect();
        if partners.is_empty() {
            continue;
        }
        let y = partners[rng.gen_range(0..partners.len())];
        alpha[x] = y;
        alpha[y] = x;
        free.retain(|&z| z != y);
    }
    alpha
}

#[test]
fn finite_composition_criterion_matches_battery() {
    let grid = [Rational64::new(1, 1), Rational64::new(1, 2), Rational64::new(2, 1)];
    let tol = Tol::default();
    let mut rng = rng(0x70726f70);
    for trial in 0..150 {
        let n = 2 + trial % 5;
        let weights: Vec<Rational64> =
            (0..n).map(|_| grid[rng.gen_range(0..grid.len())]).collect();
        let alpha_idx = random_involution(&weights, &mut rng);
        let space = rational_space(&weights);
        let alpha = map_from_indices(&alpha_idx);
        let image: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
        let t = map_from_indices(&image);
        let r = classify_composition(&t, &alpha, &space, &tol).unwrap();
        assert_eq!(r.criterion, r.c_normal, "trial {trial}: criterion vs battery");
        assert_eq!(r.normal_criterion, r.normal, "trial {trial}: normality criterion");
    }
}

#[test]
fn multiplication_criterion_matches_battery() {
    let grid = [Rational64::new(1, 1), Rational64::new(1, 2), Rational64::new(2, 1)];
    let tol = Tol::default();
    let mut rng = rng(0x6d756c74);
    for trial in 0..60 {
        let n = 2 + trial % 5;
        let weights: Vec<Rational64> =
            (0..n).map(|_| grid[rng.gen_range(0..grid.len())]).collect();
        let alpha_idx = random_involution(&weights, &mut rng);
        let space = rational_space(&weights);
        let alpha = map_from_indices(&alpha_idx);
        let mut phi: BTreeMap<PointId, C64> = BTreeMap::new();
        for i in 0..n {
            // Half the trials force |phi| to be alpha-invariant so both
            // verdicts fire; the rest are generic.
            let v = C64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            phi.insert(i.to_string(), v);
        }
        if trial % 2 == 0 {
            let snapshot = phi.clone();
            for i in 0..n {
                let j = alpha_idx[i];
                if j > i {
                    let v = snapshot[&i.to_string()];
                    let spin = C64::from_polar(1.0, rng.gen_range(-3.0..3.0));
                    phi.insert(j.to_string(), v * spin);
                }
            }
        }
        let r = classify_multiplication(&phi, &alpha, &space, &tol).unwrap();
        assert_eq!(r.criterion, r.c_normal, "trial {trial}");
    }
}

/// Exhaustive search over small finite spaces: every composition operator
/// whose battery verdict is true also turns out to be plain normal. The
/// windowed two-rail space is the smallest structure we know that separates
/// the two, and it is not finite; this pins the observation down as a
/// regression.
#[test]
fn finite_c_normal_composition_operators_are_normal() {
    let tol = Tol::default();
    let mut hits = 0usize;
    let mut confirmed = 0usize;

    let mut search = |weight_grid: &[Rational64], n: usize| {
        let perms = permutations(n);
        let invs = involutions(n);
        let mut weight_choices = vec![0usize; n];
        loop {
            let weights: Vec<Rational64> =
                weight_choices.iter().map(|&i| weight_grid[i]).collect();
            for alpha_idx in &invs {
                if !(0..n).all(|i| weights[alpha_idx[i]] == weights[i]) {
                    continue;
                }
                for sigma in &perms {
                    // h(x) = w(sigma^{-1} x) / w(x) for a permutation map.
                    let mut pre = vec![0usize; n];
                    for (i, &j) in sigma.iter().enumerate() {
                        pre[j] = i;
                    }
                    let h =
                        |x: usize| -> Rational64 { weights[pre[x]] / weights[x] };
                    let criterion = (0..n).all(|x| h(sigma[x]) == h(alpha_idx[x]));
                    if !criterion {
                        continue;
                    }
                    hits += 1;
                    assert!(
                        (0..n).all(|x| h(sigma[x]) == h(x)),
                        "criterion-true but not normal: weights {weights:?}, \
                         sigma {sigma:?}, alpha {alpha_idx:?}"
                    );
                    // Sampled battery confirmation on the hits.
                    if hits % 97 == 0 {
                        let space = rational_space(&weights);
                        let t = map_from_indices(sigma);
                        let alpha = map_from_indices(alpha_idx);
                        let r = classify_composition(&t, &alpha, &space, &tol).unwrap();
                        assert!(r.c_normal && r.criterion && r.normal && r.normal_criterion);
                        confirmed += 1;
                    }
                }
            }
            // Odometer step over the weight grid.
            let mut digit = 0;
            loop {
                if digit == n {
                    return;
                }
                weight_choices[digit] += 1;
                if weight_choices[digit] < weight_grid.len() {
                    break;
                }
                weight_choices[digit] = 0;
                digit += 1;
            }
        }
    };

    search(
        &[Rational64::new(1, 1), Rational64::new(2, 1), Rational64::new(4, 1)],
        3,
    );
    search(
        &[Rational64::new(1, 1), Rational64::new(1, 2), Rational64::new(2, 1)],
        4,
    );
    search(&[Rational64::new(1, 1), Rational64::new(2, 1)], 5);
    assert!(hits > 1000, "the search space must actually produce C-normal instances");
    assert!(confirmed > 0);
}

#[test]
fn windowed_ladder_composition_walks_the_rails() {
    // An indicator pulled back through the two-rail map lands where the map
    // says it must: t(neg:-1) = pos:0 and t(pos:-1) = neg:-1, so composing
    // twice carries 1_{pos:0} to 1_{pos:-1}.
    let (space, t, _alpha) = cnormal::ladder_space(4).unwrap();
    let mut f: SparseFn<Rational64> = SparseFn::new();
    f.insert("pos:0".to_string(), Complex::new(Rational64::new(1, 1), Rational64::zero()));
    let pulled = sparse_compose(&t, &space, &f).unwrap();
    assert_eq!(pulled.len(), 1);
    assert!(pulled.contains_key("neg:-1"));
    let twice = sparse_compose(&t, &space, &pulled).unwrap();
    assert_eq!(twice.len(), 1);
    assert!(twice.contains_key("pos:-1"));
}
