use nalgebra::{DMatrix, DVector};
use phasecraft_core::cocycle::{
    coboundary, coboundary_preimage, cocycle_space, cohomology_dim, cohomology_report, radical,
    CocycleError, KForm, MultiIndices,
};
use phasecraft_core::lie_core::{fixtures, LieAlgebraSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Explicit formula
/// (δω)(X_0..X_k) = Σ_{i<j} (−1)^{i+j} ω([X_i, X_j], X_0, …, X̂_i, …, X̂_j, …, X_k)
/// evaluated on basis tuples.
fn explicit_coboundary(alg: &LieAlgebraSpec, w: &KForm) -> KForm {
    let n = alg.dim();
    let k = w.degree();
    let mut out = KForm::zero(n, k + 1);
    let target = MultiIndices::new(n, k + 1);
    let unit = |i: usize| {
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        v
    };
    let mut coeffs = Vec::new();
    for idx in target.iter() {
        let mut total = 0.0;
        for i in 0..=k {
            for j in i + 1..=k {
                let br = alg.bracket(&unit(idx[i]), &unit(idx[j]));
                let rest: Vec<Vec<f64>> = (0..=k).filter(|&m| m != i && m != j).map(|m| unit(idx[m])).collect();
                let mut args: Vec<&[f64]> = vec![br.as_slice()];
                args.extend(rest.iter().map(|v| v.as_slice()));
                let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                total += sign * w.eval(&args);
            }
        }
        coeffs.push(total);
    }
    out = out.plus(&KForm::from_coeffs(n, k + 1, coeffs));
    out
}

fn random_form(rng: &mut ChaCha8Rng, n: usize, k: usize) -> KForm {
    let len = MultiIndices::new(n, k).len();
    KForm::from_coeffs(n, k, (0..len).map(|_| rng.random_range(-1.0..1.0)).collect())
}

fn algebras() -> Vec<LieAlgebraSpec> {
    fixtures::NAMES.iter().map(|n| fixtures::by_name(n).unwrap()).collect()
}

#[test]
fn wedge_follows_determinant_convention() {
    let a = KForm::monomial(3, &[0]);
    let b = KForm::monomial(3, &[1]);
    let ab = a.wedge(&b);
    assert_eq!(ab.eval(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]]), 1.0);
    assert_eq!(b.wedge(&a), ab.scaled(-1.0));
    assert_eq!(a.wedge(&a).max_abs(), 0.0);
    assert_eq!(KForm::monomial(3, &[2, 0, 1]).get(&[0, 1, 2]), 1.0);
    assert_eq!(KForm::monomial(3, &[1, 0, 2]).get(&[0, 1, 2]), -1.0);
}

#[test]
fn antiderivation_matches_explicit_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for alg in algebras() {
        for k in 0..3usize.min(alg.dim()) {
            for _ in 0..3 {
                let w = random_form(&mut rng, alg.dim(), k);
                let d = coboundary(&alg, &w).unwrap();
                let oracle = explicit_coboundary(&alg, &w);
                let diff = d.plus(&oracle.scaled(-1.0)).max_abs();
                assert!(diff < 1e-12, "{} degree {k}: {diff}", alg.label());
            }
        }
    }
}

#[test]
fn coboundary_squares_to_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for alg in algebras() {
        let n = alg.dim();
        for i in 0..200 {
            let k = 1 + i % 2;
            if k + 2 > n {
                continue;
            }
            let w = random_form(&mut rng, n, k);
            let dd = coboundary(&alg, &coboundary(&alg, &w).unwrap()).unwrap();
            assert!(dd.max_abs() <= 1e-12, "{}", alg.label());
        }
    }
}

#[test]
fn abelian_duals_are_closed() {
    let alg = LieAlgebraSpec::abelian(4);
    for k in 0..4 {
        assert_eq!(coboundary(&alg, &KForm::monomial(4, &[k])).unwrap().max_abs(), 0.0);
    }
}

#[test]
fn top_degree_overflows() {
    let alg = fixtures::so3();
    let err = coboundary(&alg, &KForm::monomial(3, &[0, 1, 2])).unwrap_err();
    assert_eq!(err, CocycleError::DegreeOverflow { degree: 3, dim: 3 });
}

#[test]
fn heisenberg_central_dual() {
    // Θ = 0, Q = 1..3, P = 4..6
    let alg = fixtures::heisenberg(3);
    let d = coboundary(&alg, &KForm::monomial(7, &[0])).unwrap();
    let mut expect = KForm::zero(7, 2);
    for j in 0..3 {
        expect = expect.plus(&KForm::monomial(7, &[4 + j, 1 + j]));
    }
    assert_eq!(d, expect);
}

#[test]
fn heisenberg_dimensions() {
    let alg = fixtures::heisenberg(3);
    let r = cohomology_report(&alg);
    assert_eq!((r.z1, r.b1, r.h1), (6, 0, 6));
    assert_eq!(r.z2, 15);
    assert_eq!(r.b2, 1);
    // the closed two-forms are exactly those without Θ*
    for z in cocycle_space(&alg, 2) {
        for j in 1..7 {
            assert!(z.get(&[0, j]).abs() < 1e-10);
        }
    }
}

#[test]
fn so3_cocycles_are_all_two_forms() {
    let alg = fixtures::so3();
    let z = cocycle_space(&alg, 2);
    assert_eq!(z.len(), 3);
    // orthonormal
    for (i, a) in z.iter().enumerate() {
        for (j, b) in z.iter().enumerate() {
            let dot: f64 = a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| x * y).sum();
            assert!((dot - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12);
        }
    }
    let plane = cocycle_space(&LieAlgebraSpec::abelian(2), 2);
    assert_eq!(plane.len(), 1);
}

#[test]
fn semisimple_cohomology_vanishes() {
    for alg in [fixtures::so3(), fixtures::sl2(), fixtures::so13()] {
        assert_eq!(cohomology_dim(&alg, 1), 0, "{}", alg.label());
        assert_eq!(cohomology_dim(&alg, 2), 0, "{}", alg.label());
        for z in cocycle_space(&alg, 2) {
            let (_, residual) = coboundary_preimage(&alg, &z).unwrap();
            assert!(residual <= 1e-9);
        }
    }
}

#[test]
fn galilei_has_one_dimensional_second_cohomology() {
    let alg = fixtures::galilei();
    assert_eq!(cohomology_dim(&alg, 2), 1);
    assert_eq!(cohomology_dim(&alg, 1), 1);
    // the mass cocycle Σ K_i* ∧ P_i* is closed and not exact
    let mut mass = KForm::zero(10, 2);
    for i in 0..3 {
        mass = mass.plus(&KForm::monomial(10, &[4 + i, 1 + i]));
    }
    assert!(coboundary(&alg, &mass).unwrap().max_abs() < 1e-14);
    let (_, residual) = coboundary_preimage(&alg, &mass).unwrap();
    assert!(residual > 0.1);
}

#[test]
fn euclidean_group_is_cohomologically_trivial() {
    let alg = fixtures::e3();
    assert_eq!(cohomology_dim(&alg, 1), 0);
    assert_eq!(cohomology_dim(&alg, 2), 0);
}

#[test]
fn coboundaries_are_cocycles() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for alg in algebras() {
        if alg.dim() < 3 {
            continue;
        }
        let w = random_form(&mut rng, alg.dim(), 1);
        let b = coboundary(&alg, &w).unwrap();
        assert!(coboundary(&alg, &b).unwrap().max_abs() < 1e-10);
    }
}

#[test]
fn cocycles_have_even_rank() {
    for alg in algebras() {
        for z in cocycle_space(&alg, 2) {
            let svd = z.to_matrix().svd(false, false);
            let r = svd.singular_values.iter().filter(|&&s| s > 1e-10).count();
            assert_eq!(r % 2, 0, "{}", alg.label());
        }
    }
}

fn same_span(basis: &[DVector<f64>], expect: &[usize], n: usize) -> bool {
    if basis.len() != expect.len() {
        return false;
    }
    let mut p = DMatrix::zeros(n, n);
    for v in basis {
        p += v * v.transpose();
    }
    let mut q = DMatrix::zeros(n, n);
    for &i in expect {
        q[(i, i)] = 1.0;
    }
    (p - q).amax() < 1e-10
}

#[test]
fn radical_of_so3_cocycle_is_the_third_axis() {
    let alg = fixtures::so3();
    let rad = radical(&alg, &KForm::monomial(3, &[0, 1])).unwrap();
    assert!(same_span(&rad.basis, &[2], 3));
    assert_eq!(rad.codim, 2);
}

#[test]
fn radical_of_heisenberg_rotation_cocycle() {
    // Θ = 0, Q = 1..3, P = 4..6, J = 7..9
    let alg = fixtures::heisenberg_rotations();
    let (m, s) = (1.7, 0.6);
    let mut w = KForm::monomial(10, &[7, 8]).scaled(s);
    for j in 0..3 {
        w = w.plus(&KForm::monomial(10, &[4 + j, 1 + j]).scaled(m));
    }
    assert!(coboundary(&alg, &w).unwrap().max_abs() < 1e-14);
    // exact: ω = δ(m Θ* − S J₃*)
    let pre = KForm::monomial(10, &[0]).scaled(m).plus(&KForm::monomial(10, &[9]).scaled(-s));
    assert!(coboundary(&alg, &pre).unwrap().plus(&w.scaled(-1.0)).max_abs() < 1e-14);
    let rad = radical(&alg, &w).unwrap();
    assert!(same_span(&rad.basis, &[0, 9], 10));
    assert_eq!(rad.codim, 8);
}

#[test]
fn radical_of_zero_form_is_everything() {
    let alg = fixtures::sl2();
    let rad = radical(&alg, &KForm::zero(3, 2)).unwrap();
    assert_eq!(rad.basis.len(), 3);
    assert_eq!(rad.codim, 0);
}

#[test]
fn non_cocycle_radical_is_rejected() {
    // in so(3) every two-form is closed; use Heisenberg with Θ* ∧ Q₁* (not closed)
    // whose null space {Q₂,Q₃,P_1..3} is not a subalgebra
    let alg = fixtures::heisenberg(3);
    let w = KForm::monomial(7, &[0, 1]);
    assert!(coboundary(&alg, &w).unwrap().max_abs() > 0.5);
    assert!(matches!(radical(&alg, &w), Err(CocycleError::NotSubalgebra { .. })));
}
