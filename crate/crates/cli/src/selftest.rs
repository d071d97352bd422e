//! The acceptance suite. Each criterion is a pure function of the seed so that two runs
//! with the same seed write identical reports.

use std::collections::BTreeMap;
use std::f64::consts::{LN_2, PI};

use nalgebra::{DMatrix, DVector};
use phasecraft_core::cocycle::{coboundary, cohomology_report, radical, KForm, MultiIndices};
use phasecraft_core::lie_core::{fixtures, killing_tensor, GroupElement, GroupTag};
use phasecraft_core::poisson::{darboux_brackets, jacobi_residual, PoissonStructure, ScalarField};
use phasecraft_dynamics::affine_body::{
    hamiltonian_affine, hamiltonian_standard, lattice_dynamics, lattice_hamiltonian, to_two_polar, AffineConstants,
    AffineState, InertiaModel, LatticeParams, LatticeState, LatticeVariant,
};
use phasecraft_dynamics::euler_dynamics::{
    conservation_report, integrate, relative_equilibria_residual, stationary_spins_so3, CriticalSet,
};
use phasecraft_dynamics::{BodyState, Chirality, InvariantModel, Method};
use phasecraft_ensembles::{
    entropy_continuous, entropy_discrete, entropy_family, normalize_density, phase_metric, phase_metric_volume,
    shell_probability, shell_samples, PhaseRegion, ShellEnsemble,
};
use phasecraft_semiclassics::states::{gaussian, oscillator_state, spreading_gaussian, Grid};
use phasecraft_semiclassics::{
    compose_characteristic, free_phase, marginals, phase_integral, propagate_free, star_product, wigner_transform,
    Complex64, PhaseGrid,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::output::{Artifacts, Check};
use crate::CliError;

#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub pass: bool,
    /// Measured quantities next to the bounds they were held to.
    pub measured: BTreeMap<String, f64>,
    pub note: String,
}

pub struct Criterion {
    pub id: usize,
    pub slug: &'static str,
    pub title: &'static str,
    pub run: fn(u64) -> Result<Outcome, String>,
}

pub fn criteria() -> Vec<Criterion> {
    vec![
        Criterion { id: 1, slug: "bracket_identities", title: "Jacobi identity of canonical and Lie-Poisson brackets", run: bracket_identities },
        Criterion { id: 2, slug: "rigid_body", title: "free asymmetric top conserves energy, Casimir and spatial spin", run: rigid_body },
        Criterion { id: 3, slug: "symmetric_top", title: "symmetric top keeps its third body spin component", run: symmetric_top },
        Criterion { id: 4, slug: "relative_equilibria", title: "six stationary axis spins stay fixed", run: relative_equilibria },
        Criterion { id: 5, slug: "killing_degeneracy", title: "Killing metric makes every F a relative equilibrium", run: killing_degeneracy },
        Criterion { id: 6, slug: "affine_lattice_equivalence", title: "affine and standard models equal their lattice forms", run: lattice_equivalence },
        Criterion { id: 7, slug: "dissociation_threshold", title: "bound and scattering pairs of the hyperbolic lattice", run: dissociation_threshold },
        Criterion { id: 8, slug: "cohomology_fixtures", title: "cohomology of bundled algebras and cocycle radicals", run: cohomology_fixtures },
        Criterion { id: 9, slug: "phase_metric_volume", title: "phase metric volume equals alpha^n beta^n", run: phase_metric_criterion },
        Criterion { id: 10, slug: "entropy", title: "entropy values and maximality of the uniform shell", run: entropy_criterion },
        Criterion { id: 11, slug: "wigner_suite", title: "Wigner functions, marginals and the star product", run: wigner_suite },
        Criterion { id: 12, slug: "free_propagation", title: "free Gaussian spreading and Feynman composition", run: free_propagation },
        Criterion { id: 13, slug: "darboux_chart", title: "Darboux brackets on so(3) coadjoint orbits", run: darboux_chart },
    ]
}

/// Runs the selected criteria (all when `only` is empty), writes `selftest.json` and
/// returns one check per criterion.
pub fn run_suite(seed: u64, only: &[usize], art: &mut Artifacts) -> Result<Vec<Check>, CliError> {
    let all = criteria();
    if let Some(bad) = only.iter().find(|id| !all.iter().any(|c| c.id == **id)) {
        return Err(CliError::Invalid(format!("no acceptance criterion {bad}; selftest covers 1..={}", all.len())));
    }
    let mut checks = Vec::new();
    let mut records = Vec::new();
    for c in all.iter().filter(|c| only.is_empty() || only.contains(&c.id)) {
        let outcome = evaluate(c, seed);
        checks.push(Check {
            name: format!("criterion_{:02}_{}", c.id, c.slug),
            value: f64::from(u8::from(outcome.pass)),
            bound: None,
            pass: outcome.pass,
        });
        records.push(serde_json::json!({ "id": c.id, "title": c.title, "outcome": outcome }));
    }
    art.write_json("selftest.json", &serde_json::json!({ "seed": seed, "criteria": records }))?;
    Ok(checks)
}

pub fn evaluate(c: &Criterion, seed: u64) -> Outcome {
    (c.run)(seed).unwrap_or_else(|e| Outcome { pass: false, measured: BTreeMap::new(), note: format!("error: {e}") })
}

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Collects `name → (value, bound)` pairs; passes when every value is within its bound.
#[derive(Default)]
struct Tally {
    measured: BTreeMap<String, f64>,
    pass: bool,
    notes: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Self { pass: true, ..Default::default() }
    }

    fn at_most(&mut self, name: &str, value: f64, bound: f64) {
        self.measured.insert(name.into(), value);
        self.measured.insert(format!("{name}.bound"), bound);
        if !(value <= bound) {
            self.pass = false;
            self.notes.push(format!("{name} = {value:.3e} exceeds {bound:.1e}"));
        }
    }

    fn holds(&mut self, name: &str, ok: bool) {
        self.measured.insert(name.into(), f64::from(u8::from(ok)));
        if !ok {
            self.pass = false;
            self.notes.push(format!("{name} does not hold"));
        }
    }

    fn info(&mut self, name: &str, value: f64) {
        self.measured.insert(name.into(), value);
    }

    fn done(self) -> Result<Outcome, String> {
        let note = if self.notes.is_empty() { String::new() } else { self.notes.join("; ") };
        Ok(Outcome { pass: self.pass, measured: self.measured, note })
    }
}

fn random_quadratic(rng: &mut ChaCha8Rng, n: usize) -> ScalarField {
    let a = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    let b = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    ScalarField::quadratic(a, b, 0.0)
}

fn bracket_identities(seed: u64) -> Result<Outcome, String> {
    let mut rng = rng(seed, 1);
    let structures = vec![
        ("canonical_1", PoissonStructure::Canonical { n: 1 }),
        ("canonical_2", PoissonStructure::Canonical { n: 2 }),
        ("canonical_3", PoissonStructure::Canonical { n: 3 }),
        ("so3", PoissonStructure::lie_poisson(fixtures::so3())),
        ("gl3", PoissonStructure::lie_poisson(fixtures::gl(3))),
    ];
    let mut t = Tally::new();
    for (name, p) in &structures {
        let n = p.dim();
        let mut worst: f64 = 0.0;
        for _ in 0..100 {
            let (f, g, h) = (random_quadratic(&mut rng, n), random_quadratic(&mut rng, n), random_quadratic(&mut rng, n));
            let z: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            worst = worst.max(jacobi_residual(p, &f, &g, &h, &[z]).map_err(err)?);
        }
        t.at_most(&format!("jacobi_{name}"), worst, 1e-6);
    }
    t.done()
}

fn identity3() -> GroupElement {
    GroupElement::identity(3, GroupTag::rotations(3))
}

fn random_spin(rng: &mut ChaCha8Rng) -> [f64; 3] {
    [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)]
}

fn rigid_body(seed: u64) -> Result<Outcome, String> {
    let mut rng = rng(seed, 2);
    let model = InvariantModel::rigid_body([1.0, 2.0, 3.0]).map_err(err)?;
    let s0 = random_spin(&mut rng);
    let traj = integrate(&model, &BodyState::new(identity3(), &s0), 1e-3, 10.0, Method::LieMidpoint, 1).map_err(err)?;
    let report = conservation_report(&model, &traj);
    let norm0 = traj.states[0].sigma.norm();
    let norm_drift = traj.states.iter().map(|s| (s.sigma.norm() - norm0).abs()).fold(0.0, f64::max) / norm0;
    let spatial = report.momentum_drift.iter().copied().fold(0.0, f64::max);
    let mut t = Tally::new();
    t.at_most("energy_drift", report.energy_drift, 1e-8);
    t.at_most("body_spin_norm_drift", norm_drift, 1e-10);
    t.at_most("spatial_spin_drift", spatial, 1e-6);
    t.done()
}

fn symmetric_top(seed: u64) -> Result<Outcome, String> {
    let mut rng = rng(seed, 3);
    let model = InvariantModel::rigid_body([2.0, 2.0, 1.0]).map_err(err)?;
    let s0 = random_spin(&mut rng);
    let traj = integrate(&model, &BodyState::new(identity3(), &s0), 1e-3, 10.0, Method::LieMidpoint, 1).map_err(err)?;
    let drift = traj.states.iter().map(|s| (s.sigma[2] - s0[2]).abs()).fold(0.0, f64::max);
    let mut t = Tally::new();
    t.at_most("third_component_drift", drift, 1e-8);
    t.done()
}

fn relative_equilibria(seed: u64) -> Result<Outcome, String> {
    let mut rng = rng(seed, 4);
    let moments = [1.0, 2.0, 3.0];
    let s = rng.random_range(0.5..2.0);
    let sets = stationary_spins_so3(moments, s);
    let mut points = Vec::new();
    for set in &sets {
        match set {
            CriticalSet::Point(p) => points.push(*p),
            other => return Err(format!("unexpected critical set {other:?}")),
        }
    }
    let mut t = Tally::new();
    t.holds("six_points", points.len() == 6);
    let mut expect = Vec::new();
    for axis in 0..3 {
        for sign in [1.0, -1.0] {
            let mut e = [0.0; 3];
            e[axis] = sign * s;
            expect.push(e);
        }
    }
    let match_err = expect
        .iter()
        .map(|e| {
            points
                .iter()
                .map(|p| (0..3).map(|k| (p[k] - e[k]).abs()).fold(0.0, f64::max))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max);
    t.at_most("axis_point_error", match_err, 1e-12);
    let model = InvariantModel::rigid_body(moments).map_err(err)?;
    let mut drift: f64 = 0.0;
    for p in &points {
        let traj = integrate(&model, &BodyState::new(identity3(), p), 1e-3, 1.0, Method::LieMidpoint, 1).map_err(err)?;
        for st in &traj.states {
            drift = drift.max((0..3).map(|k| (st.sigma[k] - p[k]).abs()).fold(0.0, f64::max));
        }
    }
    t.at_most("stationary_drift", drift, 1e-9);
    t.done()
}

fn killing_degeneracy(seed: u64) -> Result<Outcome, String> {
    let mut rng = rng(seed, 5);
    let alg = fixtures::so3();
    let killing = killing_tensor(&alg, 1.0, 0.0);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        // −K = 2·Id is positive on the compact algebra; the residual vanishes identically and
        // what remains is rounding of order ulp(|γ| |F|²), so F and γ are kept at unit scale
        let gamma = killing.scaled(-rng.random_range(0.25..4.0));
        let model = InvariantModel::new(alg.clone(), gamma, Chirality::Left, GroupTag::rotations(3)).map_err(err)?;
        let f = random_spin(&mut rng);
        worst = worst.max(relative_equilibria_residual(&model, &f).map_err(err)?.amax());
    }
    let mut t = Tally::new();
    t.at_most("residual", worst, 1e-14);
    t.done()
}

fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0))
}

/// Orientation-preserving with well separated singular values.
fn random_config(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    loop {
        let phi = random_matrix(rng, n) * 1.5;
        if phi.determinant() < 0.05 {
            continue;
        }
        let mut s: Vec<f64> = phi.clone().singular_values().iter().copied().collect();
        s.sort_by(f64::total_cmp);
        if s.windows(2).all(|w| (w[1] / w[0]).ln() > 0.05) {
            return phi;
        }
    }
}

fn lattice_equivalence(seed: u64) -> Result<Outcome, String> {
    let mut rng = rng(seed, 6);
    let (mut affine_worst, mut standard_worst) = (0.0f64, 0.0f64);
    for i in 0..200 {
        let n = 2 + i % 2;
        let phi = random_config(&mut rng, n);
        let sh = random_matrix(&mut rng, n);
        let state = AffineState::internal(phi.clone(), sh.clone()).map_err(err)?;
        let lat = to_two_polar(&phi, &sh).map_err(err)?.lattice;
        let a = rng.random_range(0.3..3.0);
        let model = InertiaModel::affine(1.0, Chirality::Left, AffineConstants::new(a, 0.0, 0.0).map_err(err)?).map_err(err)?;
        let value = hamiltonian_affine(&model, &state).map_err(err)?;
        let other = lattice_hamiltonian(&LatticeParams::new(LatticeVariant::Hyperbolic, a), &lat).map_err(err)?;
        affine_worst = affine_worst.max((value - other).abs() / (1.0 + value.abs()));
        let inertia = rng.random_range(0.3..3.0);
        let value = hamiltonian_standard(&InertiaModel::isotropic(1.0, inertia, n).map_err(err)?, &state).map_err(err)?;
        let other = lattice_hamiltonian(&LatticeParams::new(LatticeVariant::Calogero, inertia), &lat).map_err(err)?;
        standard_worst = standard_worst.max((value - other).abs() / (1.0 + value.abs()));
    }
    let mut t = Tally::new();
    t.at_most("affine_vs_hyperbolic", affine_worst, 1e-8);
    t.at_most("standard_vs_calogero", standard_worst, 1e-8);
    t.done()
}

fn pair_state(m: f64, n: f64, delta: f64, rel_p: f64) -> LatticeState {
    LatticeState {
        q: DVector::from_vec(vec![delta / 2.0, -delta / 2.0]),
        p: DVector::from_vec(vec![rel_p, -rel_p]),
        m: DMatrix::from_row_slice(2, 2, &[0.0, m, -m, 0.0]),
        n: DMatrix::from_row_slice(2, 2, &[0.0, n, -n, 0.0]),
    }
}

fn dissociation_threshold(_seed: u64) -> Result<Outcome, String> {
    let params = LatticeParams::new(LatticeVariant::Hyperbolic, 1.0);
    let mut t = Tally::new();
    let mut mn_drift: f64 = 0.0;
    let mut widest: f64 = 0.0;
    let mut all_monotone = true;
    let mut all_turned = true;
    for (m, n, bound) in [(1.0, 1.2, true), (-1.0, 1.2, true), (1.0, -1.2, true), (1.0, 0.8, false), (-1.0, 0.8, false), (1.0, -0.8, false)] {
        let init = if bound { pair_state(m, n, 4.0, 0.0) } else { pair_state(m, n, 4.0, -0.3) };
        let run = lattice_dynamics(&params, &init, 1e-3, 100_000).map_err(err)?;
        for s in &run {
            mn_drift = mn_drift.max((s.state.m[(0, 1)] - m).abs()).max((s.state.n[(0, 1)] - n).abs());
        }
        let sep: Vec<f64> = run.iter().map(|s| (s.state.q[0] - s.state.q[1]).abs()).collect();
        if bound {
            widest = widest.max(sep.iter().copied().fold(0.0, f64::max));
        } else {
            let turn = sep.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).map(|x| x.0).unwrap_or(0);
            all_turned &= turn > 0 && turn < sep.len() - 1;
            all_monotone &= sep[turn..].windows(2).all(|w| w[1] >= w[0]) && sep[sep.len() - 1] > sep[0];
        }
    }
    t.at_most("bound_max_separation", widest, 20.0);
    t.holds("scattering_has_closest_approach", all_turned);
    t.holds("scattering_separates_monotonically", all_monotone);
    t.at_most("mn_drift", mn_drift, 1e-10);
    t.done()
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

fn cohomology_fixtures(seed: u64) -> Result<Outcome, String> {
    let mut t = Tally::new();
    for name in ["so3", "sl2", "so13"] {
        let r = cohomology_report(&fixtures::by_name(name).ok_or("missing fixture")?);
        t.holds(&format!("{name}_h1_h2_vanish"), r.h1 == 0 && r.h2 == 0);
    }
    let g = cohomology_report(&fixtures::galilei());
    t.info("galilei_h2", g.h2 as f64);
    t.holds("galilei_h2_is_one", g.h2 == 1);

    // Θ = 0, Q = 1..3, P = 4..6, J = 7..9
    let alg = fixtures::heisenberg_rotations();
    let mut w = KForm::monomial(10, &[7, 8]).scaled(0.6);
    for j in 0..3 {
        w = w.plus(&KForm::monomial(10, &[4 + j, 1 + j]).scaled(1.7));
    }
    let rad = radical(&alg, &w).map_err(err)?;
    t.holds("heisenberg_rotations_radical_theta_j3", same_span(&rad.basis, &[0, 9], 10));
    let rad = radical(&fixtures::so3(), &KForm::monomial(3, &[0, 1])).map_err(err)?;
    t.holds("so3_radical_lz", same_span(&rad.basis, &[2], 3));

    let mut rng = rng(seed, 8);
    let algebras: Vec<_> = fixtures::NAMES.iter().filter_map(|n| fixtures::by_name(n)).filter(|a| a.dim() >= 3).collect();
    let mut worst: f64 = 0.0;
    for i in 0..200 {
        let alg = &algebras[i % algebras.len()];
        let n = alg.dim();
        let k = if n >= 4 { 1 + i % 2 } else { 1 };
        let len = MultiIndices::new(n, k).len();
        let form = KForm::from_coeffs(n, k, (0..len).map(|_| rng.random_range(-1.0..1.0)).collect());
        let dd = coboundary(alg, &coboundary(alg, &form).map_err(err)?).map_err(err)?;
        worst = worst.max(dd.max_abs());
    }
    t.at_most("coboundary_squared", worst, 1e-12);
    t.done()
}

fn random_spd(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let a = random_matrix(rng, n);
    &a * a.transpose() + DMatrix::identity(n, n) * 0.5
}

fn phase_metric_criterion(seed: u64) -> Result<Outcome, String> {
    let mut rng = rng(seed, 9);
    let (mut worst, mut det_worst) = (0.0f64, 0.0f64);
    for i in 0..100 {
        let n = 1 + i % 3;
        let g = random_spd(&mut rng, n);
        let gamma: Vec<DMatrix<f64>> = (0..n)
            .map(|_| {
                let a = random_matrix(&mut rng, n);
                &a + a.transpose()
            })
            .collect();
        let p = DVector::from_fn(n, |_, _| rng.random_range(-2.0..2.0));
        let (alpha, beta): (f64, f64) = (rng.random_range(0.2..3.0), rng.random_range(0.2..3.0));
        let target = (alpha * beta).powi(n as i32);
        let volume = phase_metric_volume(&g, &gamma, &p, alpha, beta).map_err(err)?;
        worst = worst.max((volume - target).abs() / target.max(1.0));
        let det = phase_metric(&g, &gamma, &p, alpha, beta).map_err(err)?.determinant();
        det_worst = det_worst.max((det - target).abs() / target.max(1.0));
    }
    let mut t = Tally::new();
    t.at_most("volume_vs_alpha_n_beta_n", worst, 1e-10);
    // the determinant itself is αⁿβⁿ; the volume density is its square root
    t.info("det_vs_alpha_n_beta_n", det_worst);
    t.done()
}

fn entropy_criterion(seed: u64) -> Result<Outcome, String> {
    let mut t = Tally::new();
    let mut uniform_err: f64 = 0.0;
    for n in 1..=64 {
        let p = vec![1.0 / n as f64; n];
        uniform_err = uniform_err.max((entropy_discrete(&p).map_err(err)? - (n as f64).ln()).abs());
    }
    t.at_most("uniform_vs_ln_n", uniform_err, 1e-12);
    let mut point = vec![0.0; 7];
    point[3] = 1.0;
    t.holds("point_mass_is_zero", entropy_discrete(&point).map_err(err)? == 0.0);
    t.at_most("family_at_half", (entropy_family(2, 0.5) - LN_2).abs(), 1e-14);

    let region = PhaseRegion::cube(1, 3.0, 1.0).map_err(err)?;
    let oscillator = ScalarField::quadratic(DMatrix::identity(2, 2), vec![0.0, 0.0], 0.0);
    let shell = ShellEnsemble::new(oscillator, 1.0, 0.3, 50_000, seed).map_err(err)?;
    let z = shell_probability(&shell, &region, &ScalarField::constant(2, 1.0)).map_err(err)?.z;
    let points = shell_samples(&shell, &region).map_err(err)?;
    let cells = vec![z / points.len() as f64; points.len()];
    let uniform = entropy_continuous(&normalize_density(&vec![1.0; points.len()], &cells).map_err(err)?, &cells).map_err(err)?;
    let mut rng = rng(seed, 10);
    let mut best_other = f64::NEG_INFINITY;
    for _ in 0..50 {
        let w: Vec<f64> = (0..points.len()).map(|_| rng.random_range(0.0..1.0)).collect();
        let s = entropy_continuous(&normalize_density(&w, &cells).map_err(err)?, &cells).map_err(err)?;
        best_other = best_other.max(s);
    }
    t.info("uniform_shell_entropy", uniform);
    t.info("best_reweighted_entropy", best_other);
    t.holds("uniform_shell_is_maximal", best_other < uniform);
    t.done()
}

fn wigner_suite(_seed: u64) -> Result<Outcome, String> {
    let grid = Grid { n: 512, qmin: -8.0, qmax: 8.0 };
    let ground = oscillator_state(0, grid, 1.0, 1.0, 1.0).map_err(err)?;
    let excited = oscillator_state(1, grid, 1.0, 1.0, 1.0).map_err(err)?;
    let w0 = wigner_transform(&ground).map_err(err)?;
    let w1 = wigner_transform(&excited).map_err(err)?;
    let mut t = Tally::new();
    let (mut gauss, mut lowest) = (0.0f64, f64::INFINITY);
    for j in 0..w0.nq {
        for k in 0..w0.np {
            let (q, p) = (w0.q(j), w0.p(k));
            let v = w0.at(j, k).re;
            gauss = gauss.max((v - (-(q * q) - p * p).exp() / PI).abs());
            lowest = lowest.min(v);
        }
    }
    t.at_most("ground_vs_gaussian", gauss, 1e-6);
    t.at_most("ground_negativity", -lowest, 1e-9);
    let origin = w1.at(grid.n / 2, grid.n / 2).re;
    t.info("excited_at_origin", origin);
    t.holds("excited_negative_at_origin", origin < 0.0);

    let mut marginal: f64 = 0.0;
    for (psi, w) in [(&ground, &w0), (&excited, &w1)] {
        let (pos, mom) = marginals(w);
        let (_, hat) = psi.momentum_amplitudes_refined(2);
        let d = psi.density();
        marginal = marginal.max(pos.iter().zip(&d).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
        marginal = marginal.max(mom.iter().zip(&hat).map(|(a, b)| (a - b.norm_sqr()).abs()).fold(0.0, f64::max));
    }
    t.at_most("marginals", marginal, 1e-8);

    let one = PhaseGrid::constant(&w0, Complex64::new(1.0, 0.0));
    let unit = star_product(&one, &w1).map_err(err)?.max_abs_diff(&w1);
    t.at_most("unit_star", unit, 1e-8);
    let shifted = wigner_transform(&gaussian(0.9, 0.6, -0.4, grid, 1.0, 1.0).map_err(err)?).map_err(err)?;
    let lhs = phase_integral(&star_product(&w0, &shifted).map_err(err)?);
    let pointwise = PhaseGrid { values: w0.values.iter().zip(&shifted.values).map(|(a, b)| a * b).collect(), ..w0.clone() };
    let rhs = phase_integral(&pointwise);
    t.info("trace_value", rhs.re);
    t.at_most("trace_star_vs_integral", (lhs - rhs).norm(), 1e-7);
    t.done()
}

fn free_propagation(seed: u64) -> Result<Outcome, String> {
    let grid = Grid { n: 1024, qmin: -16.0, qmax: 16.0 };
    let psi = gaussian(1.0, 0.0, 0.0, grid, 1.0, 1.0).map_err(err)?;
    let out = propagate_free(&psi, 1.0).map_err(err)?;
    let exact = spreading_gaussian(1.0, 0.0, 1.0, 1.0, 1.0);
    let field = out.positions().iter().zip(&out.amps).map(|(&q, a)| (a - exact(q)).norm()).fold(0.0, f64::max);
    let width2: f64 = out.positions().iter().zip(out.density()).map(|(q, d)| q * q * d).sum::<f64>() * out.dx;
    let mut t = Tally::new();
    t.at_most("wavefunction_vs_closed_form", field, 1e-6);
    t.at_most("width_squared_vs_1.25", (width2 - 1.25).abs(), 1e-6);
    t.at_most("norm_change", (out.norm() - psi.norm()).abs(), 1e-8);

    let mut rng = rng(seed, 12);
    let zs: Vec<f64> = (0..=600).map(|i| -30.0 + 0.1 * i as f64).collect();
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let (m, tau) = (rng.random_range(0.5..2.0), rng.random_range(0.5..2.0));
        let split = rng.random_range(0.1..0.9) * tau;
        let (x, y) = (rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
        let got = compose_characteristic(free_phase(m, split), free_phase(m, tau - split), x, y, &zs).map_err(err)?;
        if got.len() != 1 {
            return Err(format!("expected one stationary value, got {}", got.len()));
        }
        worst = worst.max((got[0] - free_phase(m, tau)(x, y)).abs());
    }
    t.at_most("composition", worst, 1e-10);
    t.done()
}

fn darboux_chart(seed: u64) -> Result<Outcome, String> {
    let mut rng = rng(seed, 13);
    let alg = fixtures::so3();
    let mut worst = [0.0f64; 3];
    let mut count = 0;
    while count < 100 {
        let z = random_spin(&mut rng).map(|v| 2.0 * v);
        let r = (z[0] * z[0] + z[1] * z[1] + z[2] * z[2]).sqrt();
        if r < 1e-3 || z[2].abs() > 0.9 * r {
            continue;
        }
        let b = darboux_brackets(&alg, &z).map_err(err)?;
        worst[0] = worst[0].max((b[0] - 1.0).abs());
        worst[1] = worst[1].max(b[1].abs());
        worst[2] = worst[2].max(b[2].abs());
        count += 1;
    }
    let mut t = Tally::new();
    t.at_most("q_p_minus_one", worst[0], 1e-8);
    t.at_most("q_casimir", worst[1], 1e-8);
    t.at_most("p_casimir", worst[2], 1e-8);
    t.done()
}
