use nalgebra::DMatrix;
use phasecraft_core::lie_core::{adjoint_matrix, coadjoint, fixtures, group_exp, GroupTag, LieAlgebraSpec};
use phasecraft_core::poisson::{
    bracket, casimir_so3, darboux_brackets, darboux_so3, darboux_so3_inverse, flow, hamiltonian_vf,
    jacobi_residual, BracketSign, PoissonError, PoissonStructure, ScalarField,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_points(rng: &mut ChaCha8Rng, n: usize, count: usize) -> Vec<Vec<f64>> {
    (0..count).map(|_| (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()).collect()
}

fn random_quadratic(rng: &mut ChaCha8Rng, n: usize) -> ScalarField {
    let a = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    let b = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    ScalarField::quadratic(a, b, 0.0)
}

#[test]
fn canonical_pair() {
    let p = PoissonStructure::Canonical { n: 1 };
    let q = ScalarField::coordinate(2, 0);
    let m = ScalarField::coordinate(2, 1);
    assert_eq!(bracket(&p, &q, &m, &[0.3, -0.2]).unwrap(), 1.0);
    assert_eq!(bracket(&p, &m, &q, &[0.3, -0.2]).unwrap(), -1.0);
}

#[test]
fn so3_coordinate_brackets() {
    let p = PoissonStructure::lie_poisson(fixtures::so3());
    let z = [0.4, -1.1, 2.3];
    let c = |i| ScalarField::coordinate(3, i);
    assert_eq!(bracket(&p, &c(0), &c(1), &z).unwrap(), z[2]);
    assert_eq!(bracket(&p, &c(1), &c(2), &z).unwrap(), z[0]);
    assert_eq!(bracket(&p, &c(2), &c(0), &z).unwrap(), z[1]);
    let minus = PoissonStructure::LiePoisson { algebra: fixtures::so3(), sign: BracketSign::Minus };
    assert_eq!(bracket(&minus, &c(0), &c(1), &z).unwrap(), -z[2]);
}

#[test]
fn bracket_is_antisymmetric() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for name in ["so3", "sl2", "heisenberg", "galilei"] {
        let alg = fixtures::by_name(name).unwrap();
        let n = alg.dim();
        let p = PoissonStructure::lie_poisson(alg);
        let f = random_quadratic(&mut rng, n);
        let g = random_quadratic(&mut rng, n);
        for z in random_points(&mut rng, n, 5) {
            assert!(bracket(&p, &f, &f, &z).unwrap().abs() < 1e-14);
            let fg = bracket(&p, &f, &g, &z).unwrap();
            let gf = bracket(&p, &g, &f, &z).unwrap();
            assert!((fg + gf).abs() < 1e-13);
        }
    }
}

/// Exact Jacobi sum for quadratic functions under a linear Poisson tensor, using
/// the analytic derivative of `{f,g}` (oracle independent of finite differences).
fn analytic_jacobi(alg: &LieAlgebraSpec, fs: [&ScalarField; 3], z: &[f64]) -> f64 {
    let n = alg.dim();
    let p = PoissonStructure::lie_poisson(alg.clone());
    let hess = |f: &ScalarField| {
        let mut h = DMatrix::zeros(n, n);
        let g0 = f.gradient(&vec![0.0; n]);
        for j in 0..n {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            let gj = f.gradient(&e);
            for i in 0..n {
                h[(i, j)] = gj[i] - g0[i];
            }
        }
        h
    };
    // d{f,g}_k = Σ_ab ∂_a f C^k_ab ∂_b g + (Hf Γ ∇g)_k − (Hg Γ ∇f)_k
    let dbr = |f: &ScalarField, g: &ScalarField| {
        let df = nalgebra::DVector::from_vec(f.gradient(z));
        let dg = nalgebra::DVector::from_vec(g.gradient(z));
        let gm = p.matrix(z);
        let mut out = &hess(f) * (&gm * &dg) - &hess(g) * (&gm * &df);
        for k in 0..n {
            let mut s = 0.0;
            for a in 0..n {
                for b in 0..n {
                    s += df[a] * alg.c(k, a, b) * dg[b];
                }
            }
            out[k] += s;
        }
        out
    };
    let pair = |f: &ScalarField, g: &ScalarField, h: &ScalarField| {
        let d = dbr(f, g);
        let dh = nalgebra::DVector::from_vec(h.gradient(z));
        d.dot(&(p.matrix(z) * dh))
    };
    let [f, g, h] = fs;
    pair(f, g, h) + pair(g, h, f) + pair(h, f, g)
}

#[test]
fn jacobi_identity_on_quadratics() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for name in ["so3", "sl2", "gl2", "heisenberg", "e3", "affine_line"] {
        let alg = fixtures::by_name(name).unwrap();
        let n = alg.dim();
        let p = PoissonStructure::lie_poisson(alg.clone());
        for _ in 0..4 {
            let (f, g, h) = (random_quadratic(&mut rng, n), random_quadratic(&mut rng, n), random_quadratic(&mut rng, n));
            let pts = random_points(&mut rng, n, 3);
            for z in &pts {
                assert!(analytic_jacobi(&alg, [&f, &g, &h], z).abs() < 1e-12, "{name}");
            }
            let fd = jacobi_residual(&p, &f, &g, &h, &pts).unwrap();
            assert!(fd < 1e-6, "{name}: {fd}");
        }
    }
}

#[test]
fn non_poisson_bivector_fails_jacobi() {
    // {x,y} = 1, {y,z} = y, {z,x} = 0: the cyclic sum on coordinates is −1
    let p = PoissonStructure::Bivector {
        dim: 3,
        eval: std::sync::Arc::new(|z: &[f64]| {
            let mut m = DMatrix::zeros(3, 3);
            m[(0, 1)] = 2.0;
            m[(1, 2)] = 2.0 * z[1];
            m
        }),
    };
    let c = |i| ScalarField::coordinate(3, i);
    let r = jacobi_residual(&p, &c(0), &c(1), &c(2), &[vec![0.5, 0.7, 0.2]]).unwrap();
    assert!((r - 1.0).abs() < 1e-6);
}

#[test]
fn leibniz_rule() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let alg = fixtures::sl2();
    let p = PoissonStructure::lie_poisson(alg);
    let (f, g, h) = (random_quadratic(&mut rng, 3), random_quadratic(&mut rng, 3), random_quadratic(&mut rng, 3));
    let gh = ScalarField::product(&g, &h);
    for z in random_points(&mut rng, 3, 5) {
        let lhs = bracket(&p, &f, &gh, &z).unwrap();
        let rhs = bracket(&p, &f, &g, &z).unwrap() * h.value(&z) + g.value(&z) * bracket(&p, &f, &h, &z).unwrap();
        assert!((lhs - rhs).abs() < 1e-12);
    }
}

#[test]
fn rigid_body_vector_field() {
    // H = Σ z_a² / 2I_a; the minus bracket gives ż = z × Ω
    let inertia = [1.0, 2.0, 3.0];
    let h = ScalarField::quadratic(DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(3, inertia.iter().map(|i| 1.0 / i))), vec![0.0; 3], 0.0);
    let z = [1.0, 1.0, 1.0];
    let minus = PoissonStructure::LiePoisson { algebra: fixtures::so3(), sign: BracketSign::Minus };
    let v = hamiltonian_vf(&minus, &h, &z).unwrap();
    let w = [1.0, 0.5, 1.0 / 3.0];
    let cross = [z[1] * w[2] - z[2] * w[1], z[2] * w[0] - z[0] * w[2], z[0] * w[1] - z[1] * w[0]];
    for i in 0..3 {
        assert!((v[i] - cross[i]).abs() < 1e-15);
    }
    assert!((v[0] + 1.0 / 6.0).abs() < 1e-15 && (v[1] - 2.0 / 3.0).abs() < 1e-15 && (v[2] + 0.5).abs() < 1e-15);
    let plus = PoissonStructure::lie_poisson(fixtures::so3());
    assert_eq!(hamiltonian_vf(&plus, &h, &z).unwrap(), -v);
}

#[test]
fn harmonic_oscillator_flow() {
    let p = PoissonStructure::Canonical { n: 1 };
    let h = ScalarField::quadratic(DMatrix::identity(2, 2), vec![0.0; 2], 0.0);
    let v = hamiltonian_vf(&p, &h, &[1.0, 0.0]).unwrap();
    assert_eq!(v.as_slice(), &[0.0, -1.0]);
    let z = flow(&p, &h, &[1.0, 0.0], 1e-3, 1000).unwrap();
    assert!((z[0] - 1f64.cos()).abs() < 1e-12);
    assert!((z[1] + 1f64.sin()).abs() < 1e-12);
}

#[test]
fn lie_poisson_flow_keeps_energy_and_casimir() {
    let inertia = [1.0, 2.0, 3.0];
    let h = ScalarField::quadratic(DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(3, inertia.iter().map(|i| 1.0 / i))), vec![0.0; 3], 0.0);
    let p = PoissonStructure::lie_poisson(fixtures::so3());
    let z0 = [0.3, 1.0, -0.4];
    let z = flow(&p, &h, &z0, 1e-3, 10_000).unwrap();
    assert!((h.value(&z) - h.value(&z0)).abs() < 1e-10);
    assert!((casimir_so3(&z) - casimir_so3(&z0)).abs() < 1e-10);
}

#[test]
fn casimirs_are_central() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let p = PoissonStructure::lie_poisson(fixtures::so3());
    let c = ScalarField::new(3, casimir_so3).with_gradient(|z| z.iter().map(|v| 2.0 * v).collect());
    // Heisenberg: the central coordinate Θ is a Casimir
    let heis = fixtures::heisenberg(2);
    let ph = PoissonStructure::lie_poisson(heis);
    let theta = ScalarField::coordinate(5, 0);
    for _ in 0..10 {
        let f = random_quadratic(&mut rng, 3);
        let z = random_points(&mut rng, 3, 1).remove(0);
        assert!(bracket(&p, &c, &f, &z).unwrap().abs() < 1e-13);
        let g = random_quadratic(&mut rng, 5);
        let w = random_points(&mut rng, 5, 1).remove(0);
        assert_eq!(bracket(&ph, &theta, &g, &w).unwrap(), 0.0);
    }
}

#[test]
fn gradient_checks() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let f = random_quadratic(&mut rng, 4);
    let pts = random_points(&mut rng, 4, 5);
    assert!(f.gradient_check(&pts).unwrap() < 1e-8);
    let wrong = ScalarField::new(2, |z| z[0] * z[1]).with_gradient(|z| vec![z[1], 2.0 * z[0]]);
    assert!(wrong.gradient_check(&[vec![1.0, 1.0]]).unwrap() > 0.1);
    assert!(ScalarField::new(2, |z| z[0]).gradient_check(&pts).is_none());
}

#[test]
fn dimension_mismatch() {
    let p = PoissonStructure::lie_poisson(fixtures::so3());
    let f = ScalarField::coordinate(2, 0);
    assert_eq!(
        bracket(&p, &f, &f, &[1.0, 2.0, 3.0]),
        Err(PoissonError::DimensionMismatch { expected: 3, got: 2 })
    );
}

#[test]
fn darboux_chart_examples() {
    let alg = fixtures::so3();
    let (q, p, r) = darboux_so3(&[0.0, 2.0, 1.0]).unwrap();
    assert!((q - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    assert_eq!(p, 1.0);
    assert!((r - 5f64.sqrt()).abs() < 1e-15);
    let z = darboux_so3_inverse(q, p, r);
    assert!(z[0].abs() < 1e-15 && (z[1] - 2.0).abs() < 1e-15 && z[2] == 1.0);
    let [qp, qz, pz] = darboux_brackets(&alg, &[0.0, 2.0, 1.0]).unwrap();
    assert!((qp - 1.0).abs() < 1e-15);
    assert!(qz.abs() < 1e-15 && pz.abs() < 1e-15);
    assert_eq!(darboux_so3(&[0.0, 0.0, 0.0]), Err(PoissonError::OriginOrbit));
    assert_eq!(darboux_so3(&[0.0, 0.0, 1.0]), Err(PoissonError::ChartSingular));
}

proptest! {
    #[test]
    fn darboux_pair_is_canonical(z in prop::array::uniform3(-2.0f64..2.0)) {
        prop_assume!(z[0].hypot(z[1]) > 1e-3);
        let [qp, qz, pz] = darboux_brackets(&fixtures::so3(), &z).unwrap();
        prop_assert!((qp - 1.0).abs() < 1e-12);
        prop_assert!(qz.abs() < 1e-12 && pz.abs() < 1e-12);
    }

    #[test]
    fn coadjoint_action_is_poisson(
        x in prop::array::uniform3(-1.0f64..1.0),
        z in prop::array::uniform3(-1.0f64..1.0),
        a in prop::array::uniform3(-1.0f64..1.0),
        b in prop::array::uniform3(-1.0f64..1.0),
    ) {
        // linear functions f_a(z) = ⟨z, a⟩ pulled back along Ad*_g stay in bracket relation
        let alg = fixtures::so3();
        let p = PoissonStructure::lie_poisson(alg.clone());
        let g = group_exp(&alg.to_matrix(&x).unwrap(), GroupTag::rotations(3)).unwrap();
        let am = adjoint_matrix(&alg, &g).unwrap();
        let zg = coadjoint(&alg, &g, &z).unwrap();
        let fa = ScalarField::linear(a.to_vec());
        let fb = ScalarField::linear(b.to_vec());
        let lhs = bracket(&p, &fa, &fb, zg.as_slice()).unwrap();
        // f ∘ Ad*_g is linear with coefficients A^{-1} a
        let inv = am.clone().try_inverse().unwrap();
        let pa = inv.clone() * nalgebra::DVector::from_column_slice(&a);
        let pb = inv * nalgebra::DVector::from_column_slice(&b);
        let rhs = bracket(&p, &ScalarField::linear(pa.as_slice().to_vec()), &ScalarField::linear(pb.as_slice().to_vec()), &z).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-12);
    }
}
