//! Streaming moments and standardized comparisons.

use serde::Serialize;

/// Welford accumulator, mergeable (Chan et al.).
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Running {
    pub n: u64,
    pub mean: f64,
    m2: f64,
}

impl Running {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(self, other: Running) -> Running {
        if self.n == 0 {
            return other;
        }
        if other.n == 0 {
            return self;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        let mean = self.mean + delta * other.n as f64 / n as f64;
        let m2 = self.m2 + other.m2 + delta * delta * (self.n as f64 * other.n as f64) / n as f64;
        Running { n, mean, m2 }
    }

    /// Sample variance.
    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            self.m2 / (self.n - 1) as f64
        }
    }

    /// Standard error of the mean.
    pub fn stderr(&self) -> f64 {
        if self.n == 0 {
            return f64::INFINITY;
        }
        (self.variance() / self.n as f64).sqrt()
    }
}

impl FromIterator<f64> for Running {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut r = Running::default();
        for x in iter {
            r.push(x);
        }
        r
    }
}

/// `|mean_a - mean_b| / √(se_a² + se_b²)`; zero when both estimates are
/// exact and equal.
pub fn two_sample_z(a: &Running, b: &Running) -> f64 {
    let diff = (a.mean - b.mean).abs();
    let se = a.stderr().hypot(b.stderr());
    standardize(diff, se)
}

/// `|mean - target| / se`.
pub fn one_sample_z(a: &Running, target: f64) -> f64 {
    standardize((a.mean - target).abs(), a.stderr())
}

fn standardize(diff: f64, se: f64) -> f64 {
    if diff == 0.0 {
        0.0
    } else if se == 0.0 {
        f64::INFINITY
    } else {
        diff / se
    }
}
