//! One function per subcommand: build the model from its config, run it, write artifacts
//! and return the declared checks.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use phasecraft_core::cocycle::{coboundary, coboundary_preimage, cohomology_report, radical, KForm};
use phasecraft_core::lie_core::{BilinearForm, GroupElement, GroupTag, LieAlgebraSpec};
use phasecraft_core::poisson::ScalarField;
use phasecraft_dynamics::affine_body::{
    from_two_polar, hamiltonian_affine, hamiltonian_standard, lattice_dynamics, to_two_polar, AffineConstants,
    AffineError, AffineState, InertiaModel, LatticeParams, LatticeState, LatticeVariant, TwoPolarState,
};
use phasecraft_dynamics::euler_dynamics::{conservation_report, integrate, Potential};
use phasecraft_dynamics::{BodyState, Chirality, InvariantModel, Method};
use phasecraft_ensembles::{liouville_volume, shell_probability, PhaseRegion, ShellEnsemble};
use phasecraft_semiclassics::states::{cat, gaussian, oscillator_state, Grid};
use phasecraft_semiclassics::{marginals, wigner_transform};
use serde_json::json;

use crate::output::{Artifacts, Check, Checks, Manifest, RunRecord};
use crate::scenario::{
    matrix, square, vector, AffineConfig, AffineModelName, ChiralityName, CohomologyConfig, Config, EnsembleConfig,
    EulerConfig, MethodName, ObservableSpec, PotentialSpec, Scenario, StateSpec, WignerConfig,
};
use crate::{selftest, CliError};

/// Runs a validated scenario, writing everything under `out`.
pub fn run(scenario: &Scenario, out: &Path, seed_flag: Option<u64>) -> Result<Manifest, CliError> {
    let mut art = Artifacts::create(out)?;
    let tol = &scenario.tolerances;
    let checks = match &scenario.config {
        Config::Euler(c) => euler(c, tol, &mut art)?,
        Config::Affine(c) => affine(c, tol, &mut art)?,
        Config::Ensemble(c) => {
            let seed = seed_flag.or(c.seed).or(scenario.seed).ok_or_else(|| {
                CliError::Invalid("ensemble sampling needs a seed (config.seed, seed or --seed)".into())
            })?;
            ensemble(c, seed, tol, &mut art)?
        }
        Config::Wigner(c) => wigner(c, tol, &mut art)?,
        Config::Cohomology(c) => cohomology(c, tol, &mut art)?,
        Config::Selftest(c) => {
            let seed = seed_flag
                .or(scenario.seed)
                .ok_or_else(|| CliError::Invalid("selftest needs a seed (seed or --seed)".into()))?;
            if !tol.is_empty() {
                return Err(CliError::Invalid("selftest uses fixed acceptance tolerances".into()));
            }
            selftest::run_suite(seed, &c.only, &mut art)?
        }
    };
    art.finish(RunRecord { subcommand: scenario.subcommand.name().into(), checks })
}

fn stride(steps: usize, every: Option<usize>) -> usize {
    every.unwrap_or(steps / 1000).max(1)
}

fn group_tag(alg: &LieAlgebraSpec) -> GroupTag {
    match alg.label() {
        "so3" => GroupTag::rotations(3),
        "so13" => GroupTag::SpecialOrthogonal(vec![1.0, -1.0, -1.0, -1.0]),
        _ => GroupTag::GeneralLinear,
    }
}

fn euler(cfg: &EulerConfig, tol: &BTreeMap<String, f64>, art: &mut Artifacts) -> Result<Vec<Check>, CliError> {
    let mut checks = Checks::new(
        &[("energy_drift", 1e-8), ("casimir_drift", 1e-10), ("momentum_drift", 1e-6), ("group_residual", 1e-9)],
        tol,
    )?;
    let alg = cfg.algebra.resolve()?;
    let n = alg.dim();
    let metric = match (&cfg.metric, &cfg.principal_moments) {
        (Some(rows), None) => BilinearForm::new(square("metric", rows, n)?)?,
        (None, Some(moments)) => BilinearForm::diagonal(vector("principal_moments", moments, n)?.as_slice()),
        _ => return Err(CliError::Invalid("give exactly one of metric and principal_moments".into())),
    };
    let chirality = match cfg.chirality {
        ChiralityName::Left => Chirality::Left,
        ChiralityName::Right => Chirality::Right,
    };
    let tag = group_tag(&alg);
    let d = alg
        .basis()
        .and_then(|b| b.first())
        .map(|m| m.nrows())
        .ok_or_else(|| CliError::Invalid(format!("algebra {} has no matrix basis", alg.label())))?;
    let mut model = InvariantModel::new(alg, metric, chirality, tag.clone())?;
    if let PotentialSpec::HeavyTop { weight, center } = cfg.potential {
        if d != 3 {
            return Err(CliError::Invalid("heavy_top needs 3×3 group matrices".into()));
        }
        model = model.with_potential(Potential::heavy_top(weight, center));
    }
    let g = match &cfg.initial.g {
        Some(rows) => GroupElement { matrix: square("initial.g", rows, d)?, tag },
        None => GroupElement::identity(d, tag),
    };
    if g.membership_residual() > checks.bound("group_residual") {
        return Err(CliError::Invalid(format!("initial.g is off the group by {:e}", g.membership_residual())));
    }
    let state = BodyState::new(g, vector("initial.sigma", &cfg.initial.sigma, n)?.as_slice());
    let method = match cfg.method {
        MethodName::LieMidpoint => Method::LieMidpoint,
        MethodName::Rk4 => Method::Rk4,
    };
    if !(cfg.t_end >= 0.0) {
        return Err(CliError::Invalid(format!("t_end must be non-negative, got {}", cfg.t_end)));
    }
    let steps = (cfg.t_end / cfg.dt).round() as usize;
    let traj = integrate(&model, &state, cfg.dt, cfg.t_end, method, stride(steps, cfg.every))?;
    let report = conservation_report(&model, &traj);

    let first = &traj.diagnostics[0];
    let m = first.casimirs.len();
    let mut header = vec!["t".to_string()];
    header.extend((1..=n).map(|i| format!("sigma_{i}")));
    header.push("energy".into());
    header.extend((1..=m).map(|i| format!("casimir_{i}")));
    header.push("energy_drift".into());
    header.extend((1..=m).map(|i| format!("casimir_drift_{i}")));
    header.push("momentum_drift".into());
    let rel = |v: f64, v0: f64| (v - v0).abs() / if v0 != 0.0 { v0.abs() } else { 1.0 };
    let mnorm = first.momentum_map.iter().map(|v| v * v).sum::<f64>().sqrt();
    let rows: Vec<Vec<f64>> = traj
        .states
        .iter()
        .zip(&traj.diagnostics)
        .map(|(s, d)| {
            let mut row = vec![s.time];
            row.extend(s.sigma.iter());
            row.push(d.energy);
            row.extend(&d.casimirs);
            row.push(rel(d.energy, first.energy));
            row.extend(d.casimirs.iter().zip(&first.casimirs).map(|(c, c0)| rel(*c, *c0)));
            let dm = d.momentum_map.iter().zip(&first.momentum_map).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            row.push(dm / if mnorm > 0.0 { mnorm } else { 1.0 });
            row
        })
        .collect();
    art.write_csv("trajectory.csv", &header, &rows)?;

    let group_residual = traj.states.iter().map(|s| s.g.membership_residual()).fold(0.0, f64::max);
    let casimir_drift = report.casimir_drift.iter().copied().fold(0.0, f64::max);
    let momentum_drift = report.momentum_drift.iter().copied().fold(0.0, f64::max);
    art.write_json(
        "conservation.json",
        &json!({
            "samples": report.samples,
            "energy_drift": report.energy_drift,
            "casimir_drift": report.casimir_drift,
            "momentum_drift": report.momentum_drift,
            "momentum_conserved": report.momentum_conserved,
            "casimirs_conserved": report.casimirs_conserved,
            "group_residual": group_residual,
            "final_sigma": traj.states.last().map(|s| s.sigma.as_slice().to_vec()),
        }),
    )?;
    checks.at_most("energy_drift", report.energy_drift);
    if m > 0 && report.casimirs_conserved {
        checks.at_most("casimir_drift", casimir_drift);
    }
    if report.momentum_conserved {
        checks.at_most("momentum_drift", momentum_drift);
    }
    checks.at_most("group_residual", group_residual);
    Ok(checks.into_vec())
}

fn require(name: &str, v: Option<f64>) -> Result<f64, CliError> {
    v.ok_or_else(|| CliError::Invalid(format!("constants.{name} is required for this model")))
}

fn orthogonal(name: &str, m: &DMatrix<f64>) -> Result<(), CliError> {
    let n = m.nrows();
    let err = (m.transpose() * m - DMatrix::identity(n, n)).amax();
    if err > 1e-10 || m.determinant() < 0.0 {
        return Err(CliError::Invalid(format!("{name} must be special orthogonal (residual {err:e})")));
    }
    Ok(())
}

fn antisymmetric(name: &str, m: &DMatrix<f64>) -> Result<(), CliError> {
    if (m + m.transpose()).amax() > 1e-12 {
        return Err(CliError::Invalid(format!("{name} must be antisymmetric")));
    }
    Ok(())
}

fn affine(cfg: &AffineConfig, tol: &BTreeMap<String, f64>, art: &mut Artifacts) -> Result<Vec<Check>, CliError> {
    let mut checks = Checks::new(&[("energy_drift_rate", 1e-7), ("mn_drift", 1e-10), ("reduction", 1e-8)], tol)?;
    let c = &cfg.constants;
    if !(c.mass > 0.0) {
        return Err(CliError::Invalid("constants.mass must be positive".into()));
    }
    use AffineModelName as A;
    let (variant, inertia) = match cfg.model {
        A::Standard | A::Calogero => (LatticeVariant::Calogero, require("inertia", c.inertia)?),
        A::AffineLeft | A::AffineRight => {
            if c.inv_b != 0.0 || c.inv_c != 0.0 {
                return Err(CliError::Invalid(
                    "the lattice reduction of affine models needs inv_b = inv_c = 0".into(),
                ));
            }
            (LatticeVariant::Hyperbolic, require("a", c.a)?)
        }
        A::Hyperbolic => (LatticeVariant::Hyperbolic, require("a", c.a)?),
        A::Trigonometric => (LatticeVariant::Trigonometric, require("a", c.a)?),
    };
    let params = LatticeParams { variant, inertia, dilatation_well: c.dilatation_well };

    let init = &cfg.initial;
    let mut translational = 0.0;
    let (lattice, config) = if let Some(phi_rows) = &init.phi {
        if init.q.is_some() || init.l.is_some() || init.r.is_some() || init.m.is_some() || init.n.is_some() {
            return Err(CliError::Invalid("initial mixes configuration (phi) and lattice (L, q, R, M, N) data".into()));
        }
        if cfg.model == A::Trigonometric {
            return Err(CliError::Invalid("the trigonometric lattice takes lattice initial data".into()));
        }
        let phi = matrix("initial.phi", phi_rows)?;
        let n = phi.nrows();
        let phi = square("initial.phi", phi_rows, n)?;
        let sh = square(
            "initial.sigma_hat",
            init.sigma_hat.as_ref().ok_or_else(|| CliError::Invalid("initial.sigma_hat is required with phi".into()))?,
            n,
        )?;
        let x = init.x.as_deref().map_or(Ok(DVector::zeros(n)), |v| vector("initial.x", v, n))?;
        let p = init.p.as_deref().map_or(Ok(DVector::zeros(n)), |v| vector("initial.p", v, n))?;
        translational = p.norm_squared() / (2.0 * c.mass);
        AffineState::new(x, phi.clone(), p, sh.clone())?;
        let tp = to_two_polar(&phi, &sh)?;
        (tp.lattice, Some((phi, sh)))
    } else {
        if init.sigma_hat.is_some() || init.x.is_some() {
            return Err(CliError::Invalid("sigma_hat and x belong with phi".into()));
        }
        let q = init.q.as_deref().ok_or_else(|| CliError::Invalid("initial needs phi or q".into()))?;
        let n = q.len();
        let q = vector("initial.q", q, n)?;
        let p = init.p.as_deref().map_or(Ok(DVector::zeros(n)), |v| vector("initial.p", v, n))?;
        let zeros = DMatrix::zeros(n, n);
        let m = init.m.as_ref().map_or(Ok(zeros.clone()), |r| square("initial.M", r, n))?;
        let nn = init.n.as_ref().map_or(Ok(zeros), |r| square("initial.N", r, n))?;
        antisymmetric("initial.M", &m)?;
        antisymmetric("initial.N", &nn)?;
        let l = init.l.as_ref().map_or(Ok(DMatrix::identity(n, n)), |r| square("initial.L", r, n))?;
        let r = init.r.as_ref().map_or(Ok(DMatrix::identity(n, n)), |r| square("initial.R", r, n))?;
        orthogonal("initial.L", &l)?;
        orthogonal("initial.R", &r)?;
        let lattice = LatticeState { q, p, m, n: nn };
        let config = match cfg.model {
            A::Standard | A::AffineLeft | A::AffineRight => {
                Some(from_two_polar(&TwoPolarState { l, r, lattice: lattice.clone(), degenerate: false })?)
            }
            _ => None,
        };
        (lattice, config)
    };
    let n = lattice.dim();

    // the configuration-space Hamiltonian must equal the reduced one
    let mut reduction = None;
    if let Some((phi, sh)) = &config {
        let state = AffineState::internal(phi.clone(), sh.clone())?;
        let value = match cfg.model {
            A::Standard => hamiltonian_standard(&InertiaModel::isotropic(c.mass, inertia, n)?, &state)?,
            A::AffineLeft | A::AffineRight => {
                let side = if cfg.model == A::AffineLeft { Chirality::Left } else { Chirality::Right };
                let consts = AffineConstants::new(inertia, c.inv_b, c.inv_c)?;
                hamiltonian_affine(&InertiaModel::affine(c.mass, side, consts)?, &state)?
            }
            _ => f64::NAN,
        };
        if value.is_finite() {
            let reduced = lattice_hamiltonian_or_collision(&params, &lattice, 0.0)?;
            let well = params.dilatation_well * (lattice.q.sum() / n as f64).powi(2) / 2.0;
            reduction = Some((value + well - reduced).abs() / (1.0 + value.abs()));
        }
    }

    if !(cfg.t_end >= 0.0) {
        return Err(CliError::Invalid(format!("t_end must be non-negative, got {}", cfg.t_end)));
    }
    let steps = (cfg.t_end / cfg.dt).round() as usize;
    let every = stride(steps, cfg.every);
    let mut samples = Vec::with_capacity(steps / every + 2);
    let mut state = lattice.clone();
    let e0 = lattice_hamiltonian_or_collision(&params, &state, 0.0)?;
    let mut energy = e0;
    let (mut energy_drift, mut mn_drift) = (0.0f64, 0.0f64);
    let mut min_sep = f64::INFINITY;
    let separation = |s: &LatticeState| {
        let mut d = f64::INFINITY;
        for a in 0..n {
            for b in a + 1..n {
                d = d.min((s.q[a] - s.q[b]).abs());
            }
        }
        d
    };
    let row = |t: f64, s: &LatticeState, e: f64| {
        let mut r = vec![t];
        r.extend(s.q.iter());
        r.extend(s.p.iter());
        r.extend([e, s.m.norm(), s.n.norm()]);
        r
    };
    samples.push(row(0.0, &state, energy));
    for k in 1..=steps {
        let t_prev = (k - 1) as f64 * cfg.dt;
        let next = lattice_dynamics(&params, &state, cfg.dt, 1).map_err(|e| collision(e, t_prev))?;
        let s = next.into_iter().next_back().expect("one step yields two samples");
        state = s.state;
        energy = s.energy;
        energy_drift = energy_drift.max((energy - e0).abs());
        mn_drift = mn_drift.max((&state.m - &lattice.m).amax()).max((&state.n - &lattice.n).amax());
        min_sep = min_sep.min(separation(&state));
        if k % every == 0 || k == steps {
            samples.push(row(k as f64 * cfg.dt, &state, energy));
        }
    }
    let mut header = vec!["t".to_string()];
    header.extend((1..=n).map(|i| format!("q_{i}")));
    header.extend((1..=n).map(|i| format!("p_{i}")));
    header.extend(["energy", "m_norm", "n_norm"].map(String::from));
    art.write_csv("lattice.csv", &header, &samples)?;

    let rate = if cfg.t_end > 0.0 { energy_drift / cfg.t_end } else { 0.0 };
    art.write_json(
        "conservation.json",
        &json!({
            "model": format!("{:?}", cfg.model),
            "lattice": format!("{variant:?}"),
            "n": n,
            "steps": steps,
            "energy_initial": e0,
            "energy_final": energy,
            "energy_drift": energy_drift,
            "energy_drift_rate": rate,
            "mn_drift": mn_drift,
            "min_separation": if min_sep.is_finite() { Some(min_sep) } else { None },
            "translational_energy": translational,
            "reduction_residual": reduction,
        }),
    )?;
    checks.at_most("energy_drift_rate", rate);
    if n == 2 {
        // M₁₂ and N₁₂ Poisson-commute with the pair Hamiltonian
        checks.at_most("mn_drift", mn_drift);
    }
    if let Some(r) = reduction {
        checks.at_most("reduction", r);
    }
    Ok(checks.into_vec())
}

fn collision(e: AffineError, t: f64) -> CliError {
    match e {
        AffineError::SingularConfiguration { .. } => CliError::Collision { t, source: e },
        other => other.into(),
    }
}

fn lattice_hamiltonian_or_collision(params: &LatticeParams, s: &LatticeState, t: f64) -> Result<f64, CliError> {
    phasecraft_dynamics::affine_body::lattice_hamiltonian(params, s).map_err(|e| collision(e, t))
}

fn observable(spec: &ObservableSpec, dof: usize) -> Result<ScalarField, CliError> {
    let arity = 2 * dof;
    Ok(match spec {
        ObservableSpec::Harmonic => ScalarField::quadratic(DMatrix::identity(arity, arity) * 0.5, vec![0.0; arity], 0.0),
        ObservableSpec::Free => {
            let mut a = DMatrix::zeros(arity, arity);
            for i in dof..arity {
                a[(i, i)] = 0.5;
            }
            ScalarField::quadratic(a, vec![0.0; arity], 0.0)
        }
        ObservableSpec::Pendulum => ScalarField::new(arity, move |z| {
            (0..dof).map(|i| 0.5 * z[dof + i] * z[dof + i] - z[i].cos()).sum()
        })
        .with_gradient(move |z| {
            let mut g = vec![0.0; 2 * dof];
            for i in 0..dof {
                g[i] = z[i].sin();
                g[dof + i] = z[dof + i];
            }
            g
        }),
        ObservableSpec::Quadratic(q) => {
            let a = square("observable.quadratic.a", &q.a, arity)?;
            let b = q.b.as_deref().map_or(Ok(DVector::zeros(arity)), |b| vector("observable.quadratic.b", b, arity))?;
            ScalarField::quadratic(a, b.as_slice().to_vec(), q.c)
        }
    })
}

fn ensemble(cfg: &EnsembleConfig, seed: u64, tol: &BTreeMap<String, f64>, art: &mut Artifacts) -> Result<Vec<Check>, CliError> {
    let mut checks = Checks::new(&[("shell_mean_offset", 0.5 * cfg.epsilon), ("relative_stderr_z", 0.05)], tol)?;
    let pairs = |b: &[[f64; 2]]| b.iter().map(|r| (r[0], r[1])).collect::<Vec<_>>();
    let region = PhaseRegion::new(pairs(&cfg.region.q), pairs(&cfg.region.p), cfg.hbar)?.with_periodic_q(cfg.region.periodic_q);
    let dof = region.dof();
    let arity = 2 * dof;
    let obs = observable(&cfg.observable, dof)?;
    let shell = ShellEnsemble::new(obs.clone(), cfg.a, cfg.epsilon, cfg.samples, seed)?;
    let base = shell_probability(&shell, &region, &ScalarField::constant(arity, 1.0))?;

    let mut fields: Vec<(String, ScalarField)> = vec![("A".into(), obs.clone()), ("A^2".into(), ScalarField::product(&obs, &obs))];
    for i in 0..dof {
        let q = ScalarField::coordinate(arity, i);
        let p = ScalarField::coordinate(arity, dof + i);
        fields.push((format!("q{}^2", i + 1), ScalarField::product(&q, &q)));
        fields.push((format!("p{}^2", i + 1), ScalarField::product(&p, &p)));
    }
    let mut expectations = BTreeMap::new();
    let mut mean_a = f64::NAN;
    for (name, f) in &fields {
        let est = shell_probability(&shell, &region, f)?;
        if name == "A" {
            mean_a = est.mean;
        }
        expectations.insert(name.clone(), json!({ "mean": est.mean, "stderr": est.stderr }));
    }
    let entropy = base.z.ln();
    art.write_json(
        "ensemble.json",
        &json!({
            "Z": base.z,
            "entropy": entropy,
            "stderr": { "Z": base.z_stderr, "entropy": base.z_stderr / base.z },
            "expectations": expectations,
            "hits": base.hits,
            "samples": base.samples,
            "seed": seed,
            "liouville_volume": liouville_volume(&region),
        }),
    )?;
    checks.at_most("shell_mean_offset", (mean_a - cfg.a).abs());
    checks.at_most("relative_stderr_z", base.z_stderr / base.z);
    Ok(checks.into_vec())
}

fn wigner(cfg: &WignerConfig, tol: &BTreeMap<String, f64>, art: &mut Artifacts) -> Result<Vec<Check>, CliError> {
    let mut checks =
        Checks::new(&[("marginal_q", 1e-8), ("marginal_p", 1e-8), ("normalization", 1e-8), ("bound_excess", 1e-9)], tol)?;
    let grid = Grid { n: cfg.grid.n, qmin: cfg.grid.qmin, qmax: cfg.grid.qmax };
    let (h, m) = (cfg.hbar, cfg.mass);
    let psi = match &cfg.state {
        StateSpec::HoGround => oscillator_state(0, grid, h, m, cfg.omega)?,
        StateSpec::HoExcited { k } => oscillator_state(*k, grid, h, m, cfg.omega)?,
        StateSpec::Gaussian { sigma, q0, p0 } => gaussian(*sigma, *q0, *p0, grid, h, m)?,
        StateSpec::Cat { d } => cat(*d, grid, h, m)?,
    };
    let w = wigner_transform(&psi)?;
    let (pos, mom) = marginals(&w);
    let direct_q = psi.density();
    let (ps, hat) = psi.momentum_amplitudes_refined(2);
    let direct_p: Vec<f64> = hat.iter().map(|a| a.norm_sqr()).collect();

    art.write("wigner.f64", &w.to_le_bytes())?;
    art.write_json(
        "wigner.json",
        &json!({
            "file": "wigner.f64",
            "dtype": "float64",
            "endianness": "little",
            "layout": "row-major; value (j, k) at index j*np + k, q_j = q0 + j*dq, p_k = p0 + k*dp",
            "nq": w.nq,
            "np": w.np,
            "q0": w.q0,
            "dq": w.dq,
            "p0": w.p0,
            "dp": w.dp,
            "hbar": w.hbar,
            "normalization": "sum(W) * dq * dp = <psi|psi>",
        }),
    )?;
    let diff = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let rows_q: Vec<Vec<f64>> = (0..w.nq).map(|j| vec![w.q(j), pos[j], direct_q[j]]).collect();
    let rows_p: Vec<Vec<f64>> = (0..w.np).map(|k| vec![ps[k], mom[k], direct_p[k]]).collect();
    let header = |x: &str| vec![x.to_string(), "from_wigner".into(), "direct".into()];
    art.write_csv("marginal_q.csv", &header("q"), &rows_q)?;
    art.write_csv("marginal_p.csv", &header("p"), &rows_p)?;

    let re = w.real_part();
    let total: f64 = re.iter().sum::<f64>() * w.dq * w.dp;
    let peak = re.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    checks.at_most("marginal_q", diff(&pos, &direct_q));
    checks.at_most("marginal_p", diff(&mom, &direct_p));
    checks.at_most("normalization", (total - psi.norm().powi(2)).abs());
    // |W| ≤ 1/(πħ) for normalized states
    checks.at_most("bound_excess", peak * PI * h - 1.0);
    Ok(checks.into_vec())
}

fn cohomology(cfg: &CohomologyConfig, tol: &BTreeMap<String, f64>, art: &mut Artifacts) -> Result<Vec<Check>, CliError> {
    let mut checks = Checks::new(&[("jacobi", 1e-12), ("omega_closed", 1e-12)], tol)?;
    let alg = cfg.algebra.resolve()?;
    let n = alg.dim();
    let r = cohomology_report(&alg);
    let jacobi = alg.jacobi_residual();
    let mut omega_report = serde_json::Value::Null;
    let mut closed = None;
    if let Some(rows) = &cfg.omega {
        let m = square("omega", rows, n)?;
        antisymmetric("omega", &m)?;
        let w = KForm::from_matrix(&m);
        let residual = coboundary(&alg, &w)?.max_abs();
        let (_, exact_residual) = coboundary_preimage(&alg, &w)?;
        closed = Some(residual);
        let rad = if residual <= checks.bound("omega_closed") { Some(radical(&alg, &w)?) } else { None };
        omega_report = json!({
            "closed_residual": residual,
            "exact_residual": exact_residual,
            "radical_dim": rad.as_ref().map(|r| r.basis.len()),
            "rank": rad.as_ref().map(|r| r.codim),
            "radical_basis": rad.as_ref().map(|r| r.basis.iter().map(|v| v.as_slice().to_vec()).collect::<Vec<_>>()),
        });
    }
    let report = json!({
        "algebra": alg.label(),
        "dim": n,
        "jacobi_residual": jacobi,
        "Z1": r.z1, "B1": r.b1, "H1": r.h1,
        "Z2": r.z2, "B2": r.b2, "H2": r.h2,
        "omega": omega_report,
    });
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    art.write_json("cohomology.json", &report)?;
    checks.at_most("jacobi", jacobi);
    if let Some(c) = closed {
        checks.at_most("omega_closed", c);
    }
    Ok(checks.into_vec())
}
