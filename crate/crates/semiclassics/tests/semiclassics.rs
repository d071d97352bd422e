use std::f64::consts::PI;

use num_complex::Complex64;
use phasecraft_semiclassics::states::{cat, gaussian, oscillator_state, spreading_gaussian, Grid};
use phasecraft_semiclassics::*;
use proptest::prelude::*;

const WIDE: Grid = Grid { n: 512, qmin: -8.0, qmax: 8.0 };
const SMALL: Grid = Grid { n: 128, qmin: -8.0, qmax: 8.0 };

fn ground(grid: Grid) -> GridWavefunction {
    oscillator_state(0, grid, 1.0, 1.0, 1.0).unwrap()
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[test]
fn rejects_bad_grids() {
    let amps = vec![Complex64::new(1.0, 0.0); 100];
    assert_eq!(GridWavefunction::new(0.0, 0.1, amps, 1.0, 1.0), Err(SemiclassicsError::NotPowerOfTwo(100)));
    assert!(GridWavefunction::new(0.0, -0.1, vec![Complex64::new(0.0, 0.0); 4], 1.0, 1.0).is_err());
}

#[test]
fn oscillator_states_are_orthonormal() {
    let states: Vec<_> = (0..4).map(|k| oscillator_state(k, WIDE, 1.0, 1.0, 1.0).unwrap()).collect();
    for (i, a) in states.iter().enumerate() {
        for (j, b) in states.iter().enumerate() {
            let ip = a.inner(b).unwrap();
            assert!((ip - Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0)).norm() < 1e-10);
        }
    }
}

#[test]
fn parseval_and_gaussian_momentum_profile() {
    let sigma = 0.7;
    let psi = gaussian(sigma, 0.5, 1.5, WIDE, 1.0, 1.0).unwrap();
    for refine in [1, 2] {
        let (ps, hat) = psi.momentum_amplitudes_refined(refine);
        let dp = ps[1] - ps[0];
        let total: f64 = hat.iter().map(|a| a.norm_sqr()).sum::<f64>() * dp * refine as f64;
        if refine == 1 {
            assert!((total - psi.norm().powi(2)).abs() < 1e-10);
        }
        let sp = 1.0 / (2.0 * sigma);
        for (p, a) in ps.iter().zip(&hat) {
            let expect = (2.0 * PI * sp * sp).powf(-0.5) * (-(p - 1.5).powi(2) / (2.0 * sp * sp)).exp();
            assert!((a.norm_sqr() - expect).abs() < 1e-10);
        }
    }
}

#[test]
fn oscillator_ground_state_wigner_is_gaussian() {
    let w = wigner_transform(&ground(WIDE)).unwrap();
    assert_eq!((w.nq, w.np), (512, 512));
    let mut worst: f64 = 0.0;
    let mut lowest = f64::INFINITY;
    for j in 0..w.nq {
        for k in 0..w.np {
            let (q, p) = (w.q(j), w.p(k));
            let v = w.at(j, k).re;
            worst = worst.max((v - (-(q * q) - p * p).exp() / PI).abs());
            lowest = lowest.min(v);
        }
    }
    assert!(worst <= 1e-6, "{worst}");
    assert!(lowest >= -1e-9);
    let raw = cross_wigner(&ground(WIDE), &ground(WIDE)).unwrap();
    assert!(raw.max_imag() <= 1e-10);
}

#[test]
fn first_excited_state_is_negative_at_origin() {
    let w = wigner_transform(&oscillator_state(1, WIDE, 1.0, 1.0, 1.0).unwrap()).unwrap();
    let (j, k) = (256, 256);
    assert!(w.q(j).abs() < 1e-12 && w.p(k).abs() < 1e-12);
    assert!(w.at(j, k).re < 0.0);
    assert!((w.at(j, k).re + 1.0 / PI).abs() < 1e-6);
}

#[test]
fn translation_covariance() {
    let s = 32;
    let shift = s as f64 * (16.0 / 512.0);
    let a = gaussian(0.8, -1.0, 0.7, WIDE, 1.0, 1.0).unwrap();
    let b = gaussian(0.8, -1.0 + shift, 0.7, WIDE, 1.0, 1.0).unwrap();
    let (wa, wb) = (wigner_transform(&a).unwrap(), wigner_transform(&b).unwrap());
    let mut worst: f64 = 0.0;
    for j in 0..512 - s {
        for k in 0..512 {
            worst = worst.max((wb.at(j + s, k) - wa.at(j, k)).norm());
        }
    }
    // the shifted state sees a different slice of its tails at the window edges
    assert!(worst < 1e-9, "{worst}");
}

fn check_marginals(psi: &GridWavefunction) -> (Vec<f64>, Vec<f64>) {
    let w = wigner_transform(psi).unwrap();
    let (pos, mom) = marginals(&w);
    assert!(max_diff(&pos, &psi.density()) <= 1e-8);
    let (ps, hat) = psi.momentum_amplitudes_refined(2);
    assert!(max_diff(&ps, &(0..w.np).map(|k| w.p(k)).collect::<Vec<_>>()) < 1e-12);
    let direct: Vec<f64> = hat.iter().map(|a| a.norm_sqr()).collect();
    assert!(max_diff(&mom, &direct) <= 1e-8, "{}", max_diff(&mom, &direct));
    assert!(pos.iter().chain(&mom).all(|&v| v >= -1e-12));
    (pos, mom)
}

#[test]
fn marginals_match_direct_densities() {
    let (pos, mom) = check_marginals(&ground(WIDE));
    // both marginals are the same Gaussian
    let w = wigner_transform(&ground(WIDE)).unwrap();
    for j in (0..512).step_by(7) {
        let q = w.q(j);
        assert!((pos[j] - (-(q * q)).exp() / PI.sqrt()).abs() < 1e-10);
        let p = w.p(j);
        assert!((mom[j] - (-(p * p)).exp() / PI.sqrt()).abs() < 1e-10);
    }

    let sigma = 1.1;
    let (pos, mom) = check_marginals(&gaussian(sigma, 0.0, 0.0, WIDE, 1.0, 1.0).unwrap());
    let w = wigner_transform(&gaussian(sigma, 0.0, 0.0, WIDE, 1.0, 1.0).unwrap()).unwrap();
    let var = |xs: &[f64], d: f64, at: &dyn Fn(usize) -> f64| xs.iter().enumerate().map(|(i, v)| v * at(i).powi(2) * d).sum::<f64>();
    assert!((var(&pos, w.dq, &|j| w.q(j)) - sigma * sigma).abs() < 1e-8);
    assert!((var(&mom, w.dp, &|k| w.p(k)) - (1.0 / (2.0 * sigma)).powi(2)).abs() < 1e-8);
}

#[test]
fn cat_state_marginal_stays_positive() {
    let grid = Grid { n: 512, qmin: -10.0, qmax: 10.0 };
    let psi = cat(2.5, grid, 1.0, 1.0).unwrap();
    let (pos, _) = check_marginals(&psi);
    let w = wigner_transform(&psi).unwrap();
    let min = w.real_part().into_iter().fold(f64::INFINITY, f64::min);
    assert!(min < -0.05, "interference fringes must go negative: {min}");
    let at = |q: f64| pos[((q + 10.0) * 25.6).round() as usize];
    assert!(at(2.5) > 4.0 * at(0.0) && at(-2.5) > 4.0 * at(0.0));
}

#[test]
fn coarse_grids_are_refused() {
    let narrow = gaussian(0.01, 0.0, 0.0, WIDE, 1.0, 1.0).unwrap();
    assert!(matches!(wigner_transform(&narrow), Err(SemiclassicsError::GridTooCoarse { .. })));
    let clipped = gaussian(1.0, 7.5, 0.0, WIDE, 1.0, 1.0).unwrap();
    assert!(matches!(wigner_transform(&clipped), Err(SemiclassicsError::GridTooCoarse { .. })));
}

fn random_phase_function(template: &PhaseGrid, seed: u64) -> PhaseGrid {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    PhaseGrid { values: (0..template.values.len()).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect(), ..template.clone() }
}

#[test]
fn fast_star_product_matches_brute_force() {
    let psi = oscillator_state(0, Grid { n: 16, qmin: -4.0, qmax: 4.0 }, 1.0, 1.0, 1.0).unwrap();
    let template = PhaseGrid::conjugate_to(&psi, vec![Complex64::new(0.0, 0.0); 256]);
    let a = random_phase_function(&template, 1);
    let b = random_phase_function(&template, 2);
    let fast = star_product(&a, &b).unwrap();
    let slow = star_product_naive(&a, &b).unwrap();
    assert!(fast.max_abs_diff(&slow) < 1e-10);
}

fn small_wigner(k: usize) -> PhaseGrid {
    wigner_transform(&oscillator_state(k, SMALL, 1.0, 1.0, 1.0).unwrap()).unwrap()
}

#[test]
fn star_identity_and_conjugation() {
    let a = small_wigner(1);
    let b = random_phase_function(&a, 3);
    let one = PhaseGrid::constant(&a, Complex64::new(1.0, 0.0));
    assert!(star_product(&one, &a).unwrap().max_abs_diff(&a) <= 1e-8);
    assert!(star_product(&a, &one).unwrap().max_abs_diff(&a) <= 1e-8);
    let lhs = star_product(&a, &b).unwrap().conj();
    let rhs = star_product(&b.conj(), &a.conj()).unwrap();
    assert!(lhs.max_abs_diff(&rhs) <= 1e-8);
}

#[test]
fn star_product_is_associative_on_gaussians() {
    let a = wigner_transform(&gaussian(1.0, 0.5, 0.0, SMALL, 1.0, 1.0).unwrap()).unwrap();
    let b = wigner_transform(&gaussian(0.8, -0.5, 1.0, SMALL, 1.0, 1.0).unwrap()).unwrap();
    let c = wigner_transform(&gaussian(1.2, 0.0, -0.7, SMALL, 1.0, 1.0).unwrap()).unwrap();
    let left = star_product(&star_product(&a, &b).unwrap(), &c).unwrap();
    let right = star_product(&a, &star_product(&b, &c).unwrap()).unwrap();
    assert!(left.max_abs_diff(&right) <= 1e-6);
}

#[test]
fn pure_state_symbols_multiply_like_matrix_units() {
    let s0 = oscillator_state(0, SMALL, 1.0, 1.0, 1.0).unwrap();
    let s1 = oscillator_state(1, SMALL, 1.0, 1.0, 1.0).unwrap();
    let h = 2.0 * PI;
    // ϱ_ij = 2πħ W[|i⟩⟨j|] satisfies ϱ_ij ∗ ϱ_kl = δ_jk ϱ_il
    let r00 = cross_wigner(&s0, &s0).unwrap().scaled(h);
    let r01 = cross_wigner(&s0, &s1).unwrap().scaled(h);
    let r10 = cross_wigner(&s1, &s0).unwrap().scaled(h);
    assert!(star_product(&r00, &r00).unwrap().max_abs_diff(&r00) <= 1e-8);
    assert!(star_product(&r01, &r10).unwrap().max_abs_diff(&r00) <= 1e-8);
    assert!(star_product(&r01, &r01).unwrap().values.iter().all(|v| v.norm() <= 1e-8));
    assert!(star_product(&r10, &r00).unwrap().max_abs_diff(&r10) <= 1e-8);
}

#[test]
fn star_trace_identities() {
    let a = small_wigner(0);
    let b = small_wigner(2);
    let c = random_phase_function(&a, 4);
    let ab = phase_integral(&star_product(&a, &b).unwrap());
    let pointwise = PhaseGrid { values: a.values.iter().zip(&b.values).map(|(x, y)| x * y).collect(), ..a.clone() };
    assert!((ab - phase_integral(&pointwise)).norm() <= 1e-7);
    // orthogonal states
    assert!(ab.norm() <= 1e-7);
    let ac = phase_integral(&star_product(&a, &c).unwrap());
    let ca = phase_integral(&star_product(&c, &a).unwrap());
    assert!((ac - ca).norm() <= 1e-8);
    // ... though the products differ pointwise
    assert!(star_product(&a, &c).unwrap().max_abs_diff(&star_product(&c, &a).unwrap()) > 1e-3);
}

#[test]
fn star_product_grid_errors() {
    let a = small_wigner(0);
    let other = wigner_transform(&ground(WIDE)).unwrap();
    assert_eq!(star_product(&a, &other), Err(SemiclassicsError::GridMismatch));
    let squeezed = PhaseGrid { dp: a.dp * 2.0, ..a.clone() };
    assert!(matches!(star_product(&squeezed, &squeezed), Err(SemiclassicsError::InvalidGrid(_))));
}

#[test]
fn van_vleck_examples() {
    let (m, t) = (2.0, 0.5);
    let free = |q: &[f64], a: &[f64]| m * (q[0] - a[0]).powi(2) / (2.0 * t);
    assert!((van_vleck(free, &[0.3], &[-1.0], 1e-4).unwrap() + m / t).abs() < 1e-6);
    let polar = |q: &[f64], a: &[f64]| q[0] * a[0];
    assert!((van_vleck(polar, &[2.0], &[3.0], 1e-4).unwrap() - 1.0).abs() < 1e-6);
    // harmonic oscillator action between a at time 0 and q at time t
    let (w, t) = (1.3, 0.7);
    let ho = move |q: &[f64], a: &[f64]| m * w / (2.0 * (w * t).sin()) * ((q[0] * q[0] + a[0] * a[0]) * (w * t).cos() - 2.0 * q[0] * a[0]);
    let expect = -m * w / (w * t).sin();
    for (q, a) in [(0.0, 0.0), (1.2, -0.4), (-2.0, 3.0)] {
        assert!((van_vleck(ho, &[q], &[a], 1e-4).unwrap() - expect).abs() < 1e-6);
    }
    // two dimensions, free
    let free2 = |q: &[f64], a: &[f64]| m * ((q[0] - a[0]).powi(2) + (q[1] - a[1]).powi(2)) / (2.0 * t);
    assert!((van_vleck(free2, &[0.1, 0.2], &[0.3, -0.1], 1e-4).unwrap() - (m / t).powi(2)).abs() < 1e-6);
    let separable = |q: &[f64], a: &[f64]| q[0] * q[0] + a[0] * a[0];
    assert!(matches!(van_vleck(separable, &[1.0], &[1.0], 1e-4), Err(SemiclassicsError::TurningPoint(_))));
}

#[test]
fn wkb_of_linear_action_is_a_plane_wave() {
    let a = 1.75;
    let template = ground(WIDE);
    let psi = wkb_wavefunction(|q| q * a, |_| 1.0, &template).unwrap();
    for j in 0..psi.len() - 1 {
        let ratio = psi.amps[j + 1] / psi.amps[j];
        assert!((ratio - Complex64::from_polar(1.0, a * psi.dx)).norm() < 1e-12);
    }
    assert!(wkb_wavefunction(|q| q, |_| -1.0, &template).is_err());
}

#[test]
fn free_propagator_values() {
    assert_eq!(free_propagator(&[1.0], 0.0, 1.0, 1.0), Err(SemiclassicsError::ZeroTime));
    let k = free_propagator(&[0.0], 2.0, 1.0, 1.0).unwrap();
    assert!((k.norm() - (1.0 / (4.0 * PI)).sqrt()).abs() < 1e-15);
    assert!((k.arg() + PI / 4.0).abs() < 1e-15);
    let k3 = free_propagator(&[0.0, 0.0, 0.0], 2.0, 1.0, 1.0).unwrap();
    assert!((k3 - k.powi(3)).norm() < 1e-15);
}

#[test]
fn propagator_convolution_matches_spectral_evolution() {
    let grid = Grid { n: 1024, qmin: -16.0, qmax: 16.0 };
    let psi = gaussian(1.0, 0.0, 0.5, grid, 1.0, 1.0).unwrap();
    let t = 0.8;
    let evolved = propagate_free(&psi, t).unwrap();
    for j in [400usize, 500, 512, 530, 600] {
        let q = psi.q(j);
        let conv: Complex64 = (0..psi.len()).map(|i| free_propagator(&[q - psi.q(i)], t, 1.0, 1.0).unwrap() * psi.amps[i]).sum::<Complex64>() * psi.dx;
        assert!((conv - evolved.amps[j]).norm() < 1e-6, "{j}: {}", (conv - evolved.amps[j]).norm());
    }
}

#[test]
fn gaussian_spreads_as_predicted() {
    let grid = Grid { n: 1024, qmin: -16.0, qmax: 16.0 };
    let psi = gaussian(1.0, 0.0, 0.0, grid, 1.0, 1.0).unwrap();
    let evolved = propagate_free(&psi, 1.0).unwrap();
    let exact = spreading_gaussian(1.0, 0.0, 1.0, 1.0, 1.0);
    let err = evolved.positions().iter().zip(&evolved.amps).map(|(&q, a)| (a - exact(q)).norm()).fold(0.0, f64::max);
    assert!(err <= 1e-6, "{err}");
    assert!((evolved.norm() - 1.0).abs() <= 1e-8);
    let width2: f64 = evolved.positions().iter().zip(evolved.density()).map(|(q, d)| q * q * d).sum::<f64>() * evolved.dx;
    assert!((width2 - 1.25).abs() < 1e-8, "{width2}");
}

#[test]
fn plane_waves_pick_up_the_kinetic_phase() {
    let grid = Grid { n: 256, qmin: -8.0, qmax: 8.0 };
    let k = 2.0 * PI * 5.0 / 16.0;
    let (hbar, m, t) = (0.7, 1.3, 2.1);
    let psi = GridWavefunction::from_fn(grid.n, grid.qmin, grid.qmax, hbar, m, |q| Complex64::from_polar(1.0, k * q)).unwrap();
    let out = propagate_free_periodic(&psi, t);
    let phase = Complex64::from_polar(1.0, -hbar * k * k * t / (2.0 * m));
    for (a, b) in out.amps.iter().zip(&psi.amps) {
        assert!((a - b * phase).norm() < 1e-12);
    }
}

#[test]
fn short_times_approach_the_identity() {
    let psi = gaussian(1.0, 0.0, 1.0, WIDE, 1.0, 1.0).unwrap();
    let dist = |t: f64| {
        let out = propagate_free(&psi, t).unwrap();
        out.amps.iter().zip(&psi.amps).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt() * psi.dx.sqrt()
    };
    let d: Vec<f64> = [1e-1, 1e-2, 1e-3, 1e-4].iter().map(|&t| dist(t)).collect();
    assert!(d.windows(2).all(|w| w[1] < w[0] * 0.2));
    assert!(d[3] < 1e-3);
}

#[test]
fn spreading_past_the_window_is_refused() {
    let psi = gaussian(0.3, 0.0, 0.0, Grid { n: 128, qmin: -4.0, qmax: 4.0 }, 1.0, 1.0).unwrap();
    assert!(matches!(propagate_free(&psi, 10.0), Err(SemiclassicsError::GridTooCoarse { .. })));
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

#[test]
fn stationary_values() {
    let grid = linspace(-5.0, 5.0, 201);
    let s = stat_values(|q| (q - 1.0).powi(2), &grid).unwrap();
    assert_eq!(s.len(), 1);
    assert!(s[0].value.abs() < 1e-15 && (s[0].x - 1.0).abs() < 1e-8);
    let two = stat_values(|q: f64| q.powi(3) - 3.0 * q, &grid).unwrap();
    let xs: Vec<f64> = two.iter().map(|p| p.x).collect();
    assert_eq!(xs.len(), 2);
    assert!((xs[0] + 1.0).abs() < 1e-8 && (xs[1] - 1.0).abs() < 1e-8);
    assert!((two[0].value - 2.0).abs() < 1e-12 && (two[1].value + 2.0).abs() < 1e-12);
    assert_eq!(stat_values(|q| 2.0 * q, &grid), Err(SemiclassicsError::NoCriticalPoint));
}

#[test]
fn free_characteristic_composes() {
    let m = 1.7;
    let (t1, t2) = (0.4, 1.1);
    let grid = linspace(-20.0, 20.0, 401);
    for (x, y) in [(0.0, 1.0), (2.5, -1.5), (-3.0, 4.0)] {
        let got = compose_characteristic(free_phase(m, t1), free_phase(m, t2), x, y, &grid).unwrap();
        assert_eq!(got.len(), 1);
        let expect = free_phase(m, t1 + t2)(x, y);
        assert!((got[0] - expect).abs() <= 1e-10, "{} vs {expect}", got[0]);
    }
}

#[test]
fn overlap_phase_of_quadratic_actions() {
    let s1 = |q: f64| 0.3 * q * q / 2.0 + 0.5 * q;
    let s2 = |q: f64| 1.1 * q * q / 2.0 - 0.7 * q;
    let (da, db) = (1.1 - 0.3, -0.7 - 0.5);
    let expect = -db * db / (2.0 * da);
    let got = stat_values(|q| s2(q) - s1(q), &linspace(-10.0, 10.0, 101)).unwrap();
    assert!((got[0].value - expect).abs() < 1e-12);
}

/// Weight of the Wigner function within `|p − S'(q)| < r`.
fn tube_mass(w: &PhaseGrid, slope: impl Fn(f64) -> f64, r: f64) -> f64 {
    let mut total = 0.0;
    for j in 0..w.nq {
        for k in 0..w.np {
            if (w.p(k) - slope(w.q(j))).abs() < r {
                total += w.at(j, k).re * w.dq * w.dp;
            }
        }
    }
    total
}

#[test]
fn wkb_states_concentrate_on_the_lagrangian_curve() {
    let grid = Grid { n: 1024, qmin: -8.0, qmax: 8.0 };
    let s = |q: f64| 0.25 * q * q + 0.5 * q;
    let slope = |q: f64| 0.5 * q + 0.5;
    let d = |q: f64| (-q * q / 2.0).exp() / (2.0 * PI).sqrt();
    let masses: Vec<f64> = [1.0, 0.5, 0.25, 0.125]
        .iter()
        .map(|&hbar| {
            let template = GridWavefunction::from_fn(grid.n, grid.qmin, grid.qmax, hbar, 1.0, |_| Complex64::new(0.0, 0.0)).unwrap();
            let psi = wkb_wavefunction(s, d, &template).unwrap();
            tube_mass(&wigner_transform(&psi).unwrap(), slope, 0.5)
        })
        .collect();
    assert!(masses.windows(2).all(|w| w[1] > w[0]), "{masses:?}");
    assert!(masses[3] > 0.99 && masses[3] <= 1.0 + 1e-9);
}

/// `∂D/∂t + ∂(D v)/∂q` for the quantum density with the classical velocity field.
fn continuity_residual(hbar: f64) -> f64 {
    let grid = Grid { n: 1024, qmin: -12.0, qmax: 12.0 };
    let (p0, m, t, dt) = (1.0, 1.0, 1.0, 1e-3);
    let psi = gaussian(1.0, 0.0, p0, grid, hbar, m).unwrap();
    let before = propagate_free(&psi, t - dt).unwrap().density();
    let after = propagate_free(&psi, t + dt).unwrap().density();
    let now = propagate_free(&psi, t).unwrap().density();
    let v = p0 / m;
    let dx = psi.dx;
    (1..grid.n - 1)
        .map(|j| {
            let dd_dt = (after[j] - before[j]) / (2.0 * dt);
            let flux = v * (now[j + 1] - now[j - 1]) / (2.0 * dx);
            (dd_dt + flux).abs()
        })
        .fold(0.0, f64::max)
}

#[test]
fn continuity_holds_in_the_semiclassical_limit() {
    let r: Vec<f64> = [1.0, 0.5, 0.25, 0.125].iter().map(|&h| continuity_residual(h)).collect();
    assert!(r.windows(2).all(|w| w[1] < w[0]), "{r:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn wigner_normalization_and_reality(q0 in -2.0f64..2.0, p0 in -2.0f64..2.0, sigma in 0.6f64..1.5) {
        let psi = gaussian(sigma, q0, p0, Grid { n: 256, qmin: -12.0, qmax: 12.0 }, 1.0, 1.0).unwrap();
        let raw = cross_wigner(&psi, &psi).unwrap();
        prop_assert!(raw.max_imag() <= 1e-10);
        let total: f64 = raw.real_part().iter().sum::<f64>() * raw.dq * raw.dp;
        prop_assert!((total - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn free_evolution_is_unitary(t in 0.0f64..2.0, p0 in -1.0f64..1.0) {
        let psi = gaussian(1.0, 0.0, p0, Grid { n: 512, qmin: -16.0, qmax: 16.0 }, 1.0, 1.0).unwrap();
        let out = propagate_free(&psi, t).unwrap();
        prop_assert!((out.norm() - 1.0).abs() <= 1e-8);
    }
}
