use std::thread;

use phasecraft_core::poisson::{flow, PoissonStructure, ScalarField};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::measure::{liouville_volume, PhaseRegion};
use crate::EnsembleError;

/// Independent generator streams per run; error bars come from batch means.
pub const BATCHES: usize = 16;

/// Time step of the RK4 flow used by [`invariance_check`].
const FLOW_STEP: f64 = 1e-2;

/// Points with `|A − a| ≤ ε/2`, sampled uniformly from a box.
#[derive(Clone, Debug)]
pub struct ShellEnsemble {
    pub observable: ScalarField,
    pub center: f64,
    pub epsilon: f64,
    pub samples: usize,
    pub seed: u64,
}

impl ShellEnsemble {
    pub fn new(observable: ScalarField, center: f64, epsilon: f64, samples: usize, seed: u64) -> Result<Self, EnsembleError> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(EnsembleError::InvalidShell(format!("ε = {epsilon}")));
        }
        if samples < BATCHES {
            return Err(EnsembleError::InvalidShell(format!("need at least {BATCHES} samples, got {samples}")));
        }
        Ok(Self { observable, center, epsilon, samples, seed })
    }

    pub fn contains(&self, z: &[f64]) -> bool {
        (self.observable.value(z) - self.center).abs() <= 0.5 * self.epsilon
    }

    fn check(&self, region: &PhaseRegion) -> Result<(), EnsembleError> {
        let arity = 2 * region.dof();
        if self.observable.arity() != arity {
            return Err(EnsembleError::DimensionMismatch { expected: arity, got: self.observable.arity() });
        }
        Ok(())
    }
}

/// Runs `work(rng, count)` on every batch, one thread each, with stream `b` of `seed`.
fn run_batches<T: Send>(seed: u64, samples: usize, work: impl Fn(&mut ChaCha8Rng, usize) -> T + Sync) -> Vec<T> {
    let work = &work;
    thread::scope(|s| {
        let handles: Vec<_> = (0..BATCHES)
            .map(|b| {
                let count = samples / BATCHES + usize::from(b < samples % BATCHES);
                s.spawn(move || {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(b as u64);
                    work(&mut rng, count)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("batch worker panicked")).collect()
    })
}

fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShellEstimate {
    /// `∫ f χ dμ / ∫ χ dμ`.
    pub mean: f64,
    pub stderr: f64,
    /// `∫ χ dμ` over the region.
    pub z: f64,
    pub z_stderr: f64,
    pub hits: usize,
    pub samples: usize,
}

/// Shell average of `f` and the shell's Liouville measure `Z`.
pub fn shell_probability(shell: &ShellEnsemble, region: &PhaseRegion, f: &ScalarField) -> Result<ShellEstimate, EnsembleError> {
    shell.check(region)?;
    if f.arity() != shell.observable.arity() {
        return Err(EnsembleError::DimensionMismatch { expected: shell.observable.arity(), got: f.arity() });
    }
    let per_batch = run_batches(shell.seed, shell.samples, |rng, count| {
        let (mut hits, mut sum) = (0usize, 0.0);
        for _ in 0..count {
            let z = region.sample(rng);
            if shell.contains(&z) {
                hits += 1;
                sum += f.value(&z);
            }
        }
        (hits, sum, count)
    });
    let hits: usize = per_batch.iter().map(|b| b.0).sum();
    if hits == 0 {
        return Err(EnsembleError::EmptyShell);
    }
    let total: f64 = per_batch.iter().map(|b| b.1).sum();
    let ratios: Vec<f64> = per_batch.iter().filter(|b| b.0 > 0).map(|b| b.1 / b.0 as f64).collect();
    let vol = liouville_volume(region);
    let fractions: Vec<f64> = per_batch.iter().map(|b| vol * b.0 as f64 / b.2 as f64).collect();
    let (_, z_stderr) = mean_and_stderr(&fractions);
    Ok(ShellEstimate {
        mean: total / hits as f64,
        stderr: mean_and_stderr(&ratios).1,
        z: vol * hits as f64 / shell.samples as f64,
        z_stderr,
        hits,
        samples: shell.samples,
    })
}

/// The sampled points that fall in the shell, batch by batch.
pub fn shell_samples(shell: &ShellEnsemble, region: &PhaseRegion) -> Result<Vec<Vec<f64>>, EnsembleError> {
    shell.check(region)?;
    let per_batch = run_batches(shell.seed, shell.samples, |rng, count| {
        (0..count).map(|_| region.sample(rng)).filter(|z| shell.contains(z)).collect::<Vec<_>>()
    });
    let points: Vec<Vec<f64>> = per_batch.into_iter().flatten().collect();
    if points.is_empty() {
        return Err(EnsembleError::EmptyShell);
    }
    Ok(points)
}

/// Monte Carlo estimate of `∫ ϱ dμ` over `{a₁ ≤ A ≤ a₂}` within the region, with its standard error.
pub fn interval_probability(
    region: &PhaseRegion,
    density: &ScalarField,
    observable: &ScalarField,
    bounds: (f64, f64),
    samples: usize,
    seed: u64,
) -> Result<(f64, f64), EnsembleError> {
    if samples < BATCHES {
        return Err(EnsembleError::InvalidShell(format!("need at least {BATCHES} samples, got {samples}")));
    }
    let vol = liouville_volume(region);
    let per_batch = run_batches(seed, samples, |rng, count| {
        let mut sum = 0.0;
        for _ in 0..count {
            let z = region.sample(rng);
            let a = observable.value(&z);
            if (bounds.0..=bounds.1).contains(&a) {
                sum += density.value(&z);
            }
        }
        (sum, count)
    });
    let total: f64 = per_batch.iter().map(|b| b.0).sum();
    let estimates: Vec<f64> = per_batch.iter().map(|b| vol * b.0 / b.1 as f64).collect();
    Ok((vol * total / samples as f64, mean_and_stderr(&estimates).1))
}

#[derive(Clone, Debug, PartialEq)]
pub struct InvarianceReport {
    /// Total-variation distance between binned shell densities before and after the flow.
    pub drift: f64,
    /// Total-variation distance between two disjoint halves of the initial sample,
    /// the scale of pure sampling noise.
    pub noise: f64,
    pub hits: usize,
}

fn histogram(points: &[Vec<f64>], region: &PhaseRegion, bins: usize) -> Vec<f64> {
    let dim = 2 * region.dof();
    let mut h = vec![0.0; bins.pow(dim as u32) + 1];
    for z in points {
        let mut idx = 0;
        let mut inside = true;
        for (i, &x) in z.iter().enumerate() {
            let (lo, hi) = region.bounds(i);
            if !(lo..=hi).contains(&x) {
                inside = false;
                break;
            }
            let k = (((x - lo) / (hi - lo)) * bins as f64).floor().min(bins as f64 - 1.0) as usize;
            idx = idx * bins + k;
        }
        let slot = if inside { idx } else { h.len() - 1 };
        h[slot] += 1.0;
    }
    let n = points.len().max(1) as f64;
    h.iter_mut().for_each(|x| *x /= n);
    h
}

fn total_variation(a: &[f64], b: &[f64]) -> f64 {
    0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>()
}

/// Pushes the shell sample through the Hamiltonian flow of `h` for time `tau`
/// and compares binned densities.
pub fn invariance_check(
    shell: &ShellEnsemble,
    region: &PhaseRegion,
    h: &ScalarField,
    tau: f64,
    bins_per_axis: usize,
) -> Result<InvarianceReport, EnsembleError> {
    let points = shell_samples(shell, region)?;
    let structure = PoissonStructure::Canonical { n: region.dof() };
    let steps = (tau.abs() / FLOW_STEP).ceil().max(1.0) as usize;
    let dt = tau / steps as f64;
    let chunk = points.len().div_ceil(BATCHES);
    let moved: Result<Vec<Vec<f64>>, EnsembleError> = thread::scope(|s| {
        let handles: Vec<_> = points
            .chunks(chunk)
            .map(|part| {
                let structure = &structure;
                s.spawn(move || {
                    part.iter()
                        .map(|z| {
                            let mut w = flow(structure, h, z, dt, steps)?;
                            region.wrap(&mut w);
                            Ok(w)
                        })
                        .collect::<Result<Vec<_>, EnsembleError>>()
                })
            })
            .collect();
        let mut out = Vec::with_capacity(points.len());
        for handle in handles {
            out.extend(handle.join().expect("flow worker panicked")?);
        }
        Ok(out)
    });
    let moved = moved?;
    let before = histogram(&points, region, bins_per_axis);
    let after = histogram(&moved, region, bins_per_axis);
    let (even, odd): (Vec<_>, Vec<_>) = points.iter().enumerate().partition(|(i, _)| i % 2 == 0);
    let even: Vec<Vec<f64>> = even.into_iter().map(|(_, z)| z.clone()).collect();
    let odd: Vec<Vec<f64>> = odd.into_iter().map(|(_, z)| z.clone()).collect();
    let noise = total_variation(&histogram(&even, region, bins_per_axis), &histogram(&odd, region, bins_per_axis));
    Ok(InvarianceReport { drift: total_variation(&before, &after), noise, hits: points.len() })
}
