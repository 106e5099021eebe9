//! Monte Carlo bookkeeping: estimates, streaming moments and worker streams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sampling parameters shared by every Monte Carlo routine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct McConfig {
    pub samples: usize,
    pub seed: u64,
    pub workers: usize,
}

impl McConfig {
    pub fn new(samples: usize, seed: u64) -> Self {
        Self { samples, seed, workers: 1 }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }
}

/// A Monte Carlo estimate. Exact evaluations carry `samples = 0` and `std_error = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MVEstimate {
    pub value: f64,
    pub std_error: f64,
    pub samples: usize,
    pub seed: u64,
}

impl MVEstimate {
    pub fn exact(value: f64, seed: u64) -> Self {
        Self { value, std_error: 0.0, samples: 0, seed }
    }

    pub fn is_exact(&self) -> bool {
        self.samples == 0
    }

    pub fn scaled(self, factor: f64) -> Self {
        Self { value: self.value * factor, std_error: self.std_error * factor.abs(), ..self }
    }

    /// `(target - value) / std_error`; zero when both agree exactly.
    pub fn z_score(&self, target: f64) -> f64 {
        let diff = self.value - target;
        if self.std_error > 0.0 {
            diff / self.std_error
        } else if diff.abs() <= 1e-12 * target.abs().max(1.0) {
            0.0
        } else {
            f64::INFINITY.copysign(diff)
        }
    }
}

/// Welford accumulator with Chan's parallel merge.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunningStats {
    count: u64,
    mean: f64,
    m2: f64,
}

impl RunningStats {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(&mut self, other: &RunningStats) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n = (self.count + other.count) as f64;
        let delta = other.mean - self.mean;
        self.mean += delta * other.count as f64 / n;
        self.m2 += other.m2 + delta * delta * self.count as f64 * other.count as f64 / n;
        self.count += other.count;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn sample_variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.m2 / (self.count - 1) as f64).max(0.0)
        }
    }

    pub fn std_error(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.sample_variance() / self.count as f64).sqrt()
        }
    }

    pub fn estimate(&self, seed: u64) -> MVEstimate {
        MVEstimate { value: self.mean, std_error: self.std_error(), samples: self.count as usize, seed }
    }
}

/// Independent stream for worker `index` under `seed`.
pub fn worker_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Splits `cfg.samples` into contiguous per-worker quotas and runs `job`
/// on scoped threads; results come back in worker order, so merging them
/// sequentially is deterministic for a fixed `(seed, workers)`.
pub fn run_workers<A, F>(cfg: &McConfig, job: F) -> Result<Vec<A>>
where
    A: Send,
    F: Fn(usize, &mut ChaCha8Rng, usize) -> Result<A> + Sync,
{
    let workers = cfg.workers.max(1).min(cfg.samples.max(1));
    let base = cfg.samples / workers;
    let extra = cfg.samples % workers;
    let quota = |w: usize| base + usize::from(w < extra);
    if workers == 1 {
        return Ok(vec![job(0, &mut worker_rng(cfg.seed, 0), cfg.samples)?]);
    }
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let job = &job;
                scope.spawn(move || job(w, &mut worker_rng(cfg.seed, w), quota(w)))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().map_err(|_| Error::InvalidInput("worker thread panicked".into()))?)
            .collect()
    })
}
