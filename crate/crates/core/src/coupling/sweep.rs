use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{phi_eps, Coupling, Outcome};
use crate::delta::ExactMetric;
use crate::error::{Error, Result};
use crate::schedule::Profile;

/// Scaling constants `c` swept for the moments `E[φ(d/c)]`.
pub const C_GRID: [f64; 6] = [0.5, 1.0, 2.0, 4.0, 8.0, 16.0];

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub eps: f64,
    pub c_grid: Vec<f64>,
    /// Points drawn when the truncation is too large to sweep exhaustively.
    pub samples: u64,
    pub seed: u64,
    /// Sweeps are exhaustive up to this many points.
    pub exhaustive_limit: u64,
    /// Points whose `Δ`-distance is also computed exactly.
    pub exact_samples: u64,
    pub exact_node_cap: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            eps: 0.5,
            c_grid: C_GRID.to_vec(),
            samples: 100_000,
            seed: 0,
            exhaustive_limit: 1_000_000,
            exact_samples: 0,
            exact_node_cap: 100_000,
        }
    }
}

/// Distances moved by one generator over the swept points.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorStats {
    pub label: String,
    pub points: u64,
    pub out_of_truncation: u64,
    /// Whether distinct points have distinct images; known for exhaustive sweeps.
    pub injective: Option<bool>,
    pub histogram: BTreeMap<u64, u64>,
    /// `(c, moment)`: `E[φ_ε(d/c)]` for `Δ → ℤ`, `ln E[exp ρ(d/c)]` for `ℤ → Δ`.
    pub moments: Vec<(f64, f64)>,
}

impl GeneratorStats {
    pub fn domain(&self) -> u64 {
        self.points - self.out_of_truncation
    }

    pub fn moment(&self, c: f64) -> Option<f64> {
        self.moments.iter().find(|m| m.0 == c).map(|m| m.1)
    }

    pub fn max_distance(&self) -> Option<u64> {
        self.histogram.keys().next_back().copied()
    }
}

#[derive(Clone, Debug)]
pub struct IntegrabilityReport {
    pub level: u32,
    pub eps: f64,
    pub size: u64,
    pub exhaustive: bool,
    pub seed: u64,
    pub points: u64,
    /// `d_ℤ(x, x·s)` for `s ∈ S_Δ`.
    pub delta_to_z: Vec<GeneratorStats>,
    /// Upper bounds on `d_Δ(x, x ± 1)`.
    pub z_to_delta: Vec<GeneratorStats>,
    pub exact_checked: u64,
    pub exact_known: u64,
    /// Points where the exact length exceeded the bound.
    pub exact_violations: u64,
}

impl IntegrabilityReport {
    pub fn generator(&self, label: &str) -> Option<&GeneratorStats> {
        self.delta_to_z.iter().chain(&self.z_to_delta).find(|g| g.label == label)
    }
}

#[derive(Clone, Default)]
struct Acc {
    oot: Vec<u64>,
    hist: Vec<BTreeMap<u64, u64>>,
}

impl Acc {
    fn new(k: usize) -> Self {
        Self { oot: vec![0; k], hist: vec![BTreeMap::new(); k] }
    }

    fn merge(mut self, other: Self) -> Self {
        for (i, (o, h)) in other.oot.into_iter().zip(other.hist).enumerate() {
            self.oot[i] += o;
            for (d, c) in h {
                *self.hist[i].entry(d).or_default() += c;
            }
        }
        self
    }

    fn record(&mut self, i: usize, d: Option<u64>) {
        match d {
            Some(d) => *self.hist[i].entry(d).or_default() += 1,
            None => self.oot[i] += 1,
        }
    }
}

fn points(c: &Coupling, cfg: &SweepConfig) -> (bool, Vec<u64>) {
    if c.len() <= cfg.exhaustive_limit {
        (true, (0..c.len()).collect())
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        (false, (0..cfg.samples).map(|_| rng.gen_range(0..c.len())).collect())
    }
}

/// Sweeps both partial actions over the truncation and summarizes the
/// distances. Moments are evaluated from the histograms, so the output does
/// not depend on thread scheduling.
pub fn simulate(c: &Coupling, profile: &Profile, cfg: &SweepConfig) -> Result<IntegrabilityReport> {
    if !(cfg.eps > 0.0) || cfg.c_grid.iter().any(|&x| !(x > 0.0)) {
        return Err(Error::Config("ε and every scaling constant must be positive".into()));
    }
    let dp = c.dp();
    let (exhaustive, pts) = points(c, cfg);
    let gens = dp.generators();
    let seen: Vec<Vec<AtomicU64>> = if exhaustive {
        gens.iter().map(|_| (0..c.len().div_ceil(64)).map(|_| AtomicU64::new(0)).collect()).collect()
    } else {
        Vec::new()
    };
    let collided: Vec<AtomicBool> = gens.iter().map(|_| AtomicBool::new(false)).collect();
    let acc = pts
        .par_iter()
        .try_fold(
            || Acc::new(gens.len()),
            |mut acc, &x| -> Result<Acc> {
                for (i, &s) in gens.iter().enumerate() {
                    let image = c.act_delta(s, x)?.inside();
                    if let (Some(y), Some(bits)) = (image, seen.get(i)) {
                        let bit = 1u64 << (y % 64);
                        if bits[(y / 64) as usize].fetch_or(bit, Ordering::Relaxed) & bit != 0 {
                            collided[i].store(true, Ordering::Relaxed);
                        }
                    }
                    acc.record(i, image.map(|y| y.abs_diff(x)));
                }
                Ok(acc)
            },
        )
        .try_reduce(|| Acc::new(gens.len()), |a, b| Ok(a.merge(b)))?;
    let n_pts = pts.len() as u64;
    let delta_to_z = gens
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let hist = acc.hist[i].clone();
            let moments = cfg.c_grid.iter().map(|&cc| (cc, phi_moment(&hist, profile, cfg.eps, cc))).collect();
            GeneratorStats {
                label: s.to_string(),
                points: n_pts,
                out_of_truncation: acc.oot[i],
                injective: exhaustive.then(|| !collided[i].load(Ordering::Relaxed)),
                histogram: hist,
                moments,
            }
        })
        .collect();

    let steps = [1i64, -1];
    let zacc = pts
        .par_iter()
        .try_fold(
            || Acc::new(2),
            |mut acc, &x| -> Result<Acc> {
                for (i, &d) in steps.iter().enumerate() {
                    let dist = c.schreier_distance_delta(x, d, None)?.inside();
                    acc.record(i, dist.map(|v| u64::try_from(v.upper).unwrap_or(u64::MAX)));
                }
                Ok(acc)
            },
        )
        .try_reduce(|| Acc::new(2), |a, b| Ok(a.merge(b)))?;
    let z_to_delta = steps
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let hist = zacc.hist[i].clone();
            let moments = cfg.c_grid.iter().map(|&cc| (cc, ln_psi_moment(&hist, profile, cc))).collect();
            GeneratorStats {
                label: if *d > 0 { "z+".into() } else { "z-".into() },
                points: n_pts,
                out_of_truncation: zacc.oot[i],
                injective: exhaustive.then_some(true),
                histogram: hist,
                moments,
            }
        })
        .collect();

    let (exact_checked, exact_known, exact_violations) = exact_pass(c, cfg, &pts)?;
    Ok(IntegrabilityReport {
        level: c.level(),
        eps: cfg.eps,
        size: c.len(),
        exhaustive,
        seed: cfg.seed,
        points: n_pts,
        delta_to_z,
        z_to_delta,
        exact_checked,
        exact_known,
        exact_violations,
    })
}

/// Exact `Δ`-lengths on an evenly spaced subset of the swept points.
fn exact_pass(c: &Coupling, cfg: &SweepConfig, pts: &[u64]) -> Result<(u64, u64, u64)> {
    if cfg.exact_samples == 0 || pts.is_empty() {
        return Ok((0, 0, 0));
    }
    let metric = ExactMetric::new(c.dp(), cfg.exact_node_cap);
    let stride = (pts.len() as u64 / cfg.exact_samples).max(1) as usize;
    let chosen: Vec<u64> = pts.iter().step_by(stride).take(cfg.exact_samples as usize).copied().collect();
    let results: Vec<Vec<(u128, Option<u32>)>> = chosen
        .par_iter()
        .map(|&x| {
            [1i64, -1]
                .iter()
                .map(|&d| c.schreier_distance_delta(x, d, Some((&metric, cfg.exact_node_cap))))
                .filter_map(|r| r.map(Outcome::inside).transpose())
                .map(|r| r.map(|v| (v.upper, v.exact)))
                .collect()
        })
        .collect::<Result<_>>()?;
    let flat: Vec<_> = results.into_iter().flatten().collect();
    let known = flat.iter().filter(|v| v.1.is_some()).count() as u64;
    let bad = flat.iter().filter(|v| v.1.is_some_and(|e| e as u128 > v.0)).count() as u64;
    Ok((flat.len() as u64, known, bad))
}

fn phi_moment(hist: &BTreeMap<u64, u64>, profile: &Profile, eps: f64, c: f64) -> f64 {
    let total: u64 = hist.values().sum();
    if total == 0 {
        return 0.0;
    }
    hist.iter().map(|(&d, &n)| n as f64 * phi_eps(profile, eps, d as f64 / c)).sum::<f64>() / total as f64
}

/// `ln E[exp ρ(d/c)]` by log-sum-exp.
fn ln_psi_moment(hist: &BTreeMap<u64, u64>, profile: &Profile, c: f64) -> f64 {
    let total: u64 = hist.values().sum();
    if total == 0 {
        return f64::NEG_INFINITY;
    }
    let logs: Vec<f64> = hist.iter().map(|(&d, &n)| profile.rho(d as f64 / c) + (n as f64).ln()).collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    top + logs.iter().map(|l| (l - top).exp()).sum::<f64>().ln() - (total as f64).ln()
}
