//! The exact distribution of the completion time, computed over site types
//! instead of sampled.
//!
//! Subtrees grow independently, so for a site `s` filled after an
//! exponential wait `W` (rate = total concentration of its candidates) by
//! monomer `m`, `T_s = W + max(T_left, T_right)`, and unusable sites have
//! `T = 0`. The CDF of each `T_s` lives on a uniform grid. Between grid
//! points the product `F_left F_right` is taken to be linear, which gives
//! the exact one-step update
//!
//! `F(t+h) = e^{-λh} F(t) + (α - β) H(t) + β H(t+h)`
//!
//! with `α = 1 - e^{-λh}` and `β = 1 - α/(λh)`. Exponential tails and
//! deep graphs are both fine; only cycles are rejected.

use rand::Rng;
use thiserror::Error;

use crate::model::{InsertionSystem, SiteGraph};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LawError {
    #[error("site-type closure exceeds {0} nodes")]
    Truncated(usize),
    #[error("site-type closure has a cycle; completion time may be unbounded")]
    Cycle,
    #[error("tail mass {mass:e} beyond horizon {horizon} after {attempts} enlargements")]
    Horizon { horizon: f64, mass: f64, attempts: u32 },
}

#[derive(Clone, Copy, Debug)]
pub struct LawOptions {
    /// Grid intervals.
    pub grid: usize,
    /// Acceptable probability mass past the horizon.
    pub tail: f64,
    pub max_nodes: usize,
}

impl Default for LawOptions {
    fn default() -> Self {
        LawOptions {
            grid: 1 << 15,
            tail: 1e-12,
            max_nodes: 1 << 22,
        }
    }
}

/// CDF of the completion time from the initiator: `cdf[k] = P(T <= k h)`.
#[derive(Clone, Debug)]
pub struct CompletionLaw {
    pub step: f64,
    pub cdf: Vec<f64>,
    pub site_types: usize,
}

impl CompletionLaw {
    pub fn compute(system: &InsertionSystem, options: LawOptions) -> Result<CompletionLaw, LawError> {
        let graph = SiteGraph::build(system, options.max_nodes);
        if graph.is_truncated() {
            return Err(LawError::Truncated(options.max_nodes));
        }
        if graph.find_cycle().is_some() {
            return Err(LawError::Cycle);
        }
        let order = graph.post_order();
        let rate = |n: usize| -> f64 {
            graph
                .edges(n)
                .iter()
                .map(|e| system.monomer(e.monomer).rate())
                .sum()
        };

        // expected length of the slowest single path, a floor on the mean
        let mut floor = vec![0.0f64; graph.len()];
        for &n in &order {
            let edges = graph.edges(n);
            if !edges.is_empty() {
                let lam = rate(n);
                let sub = edges
                    .iter()
                    .map(|e| floor[e.left].max(floor[e.right]))
                    .fold(f64::INFINITY, f64::min);
                floor[n] = 1.0 / lam + sub;
            }
        }
        let root = graph.root();
        if floor[root] == 0.0 {
            return Ok(CompletionLaw {
                step: 1.0,
                cdf: vec![1.0; 2],
                site_types: graph.len(),
            });
        }

        let mut horizon = 8.0 * floor[root];
        let mut attempts = 0;
        loop {
            let step = horizon / options.grid as f64;
            let cdf = solve(&graph, &order, &rate, system, options.grid + 1, step);
            let mass = 1.0 - cdf[options.grid];
            if mass <= options.tail {
                return Ok(CompletionLaw {
                    step,
                    cdf,
                    site_types: graph.len(),
                });
            }
            attempts += 1;
            if attempts > 12 {
                return Err(LawError::Horizon { horizon, mass, attempts });
            }
            horizon *= 2.0;
        }
    }

    pub fn horizon(&self) -> f64 {
        self.step * (self.cdf.len() - 1) as f64
    }

    /// `E[T] = ∫ (1 - F)`, trapezoid rule.
    pub fn mean(&self) -> f64 {
        let mut s = 0.0;
        for w in self.cdf.windows(2) {
            s += (2.0 - w[0] - w[1]) * 0.5;
        }
        s * self.step
    }

    /// `E[T²] - E[T]²` with `E[T²] = 2 ∫ t (1 - F)`.
    pub fn variance(&self) -> f64 {
        let mut s = 0.0;
        for (k, w) in self.cdf.windows(2).enumerate() {
            let t0 = k as f64 * self.step;
            let t1 = t0 + self.step;
            s += (t0 * (1.0 - w[0]) + t1 * (1.0 - w[1])) * 0.5;
        }
        let m = self.mean();
        2.0 * s * self.step - m * m
    }

    pub fn cdf_at(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return self.cdf[0];
        }
        let pos = t / self.step;
        let k = pos.floor() as usize;
        if k + 1 >= self.cdf.len() {
            return *self.cdf.last().unwrap();
        }
        self.cdf[k] + (self.cdf[k + 1] - self.cdf[k]) * (pos - k as f64)
    }

    /// Smallest `t` with `F(t) >= q`, interpolated.
    pub fn quantile(&self, q: f64) -> f64 {
        let k = self.cdf.partition_point(|&f| f < q);
        if k == 0 {
            return 0.0;
        }
        if k >= self.cdf.len() {
            return self.horizon();
        }
        let (f0, f1) = (self.cdf[k - 1], self.cdf[k]);
        let frac = if f1 > f0 { (q - f0) / (f1 - f0) } else { 0.0 };
        (k as f64 - 1.0 + frac) * self.step
    }

    /// `P(T > t)`.
    pub fn survival(&self, t: f64) -> f64 {
        1.0 - self.cdf_at(t)
    }

    /// An independent draw of `T` by inversion.
    pub fn sample(&self, rng: &mut impl Rng) -> f64 {
        self.quantile(rng.random::<f64>())
    }
}

fn solve(
    graph: &SiteGraph,
    order: &[usize],
    rate: &dyn Fn(usize) -> f64,
    system: &InsertionSystem,
    points: usize,
    step: f64,
) -> Vec<f64> {
    // parents still waiting for each node's CDF
    let mut pending = vec![0u32; graph.len()];
    for n in 0..graph.len() {
        for e in graph.edges(n) {
            pending[e.left] += 1;
            pending[e.right] += 1;
        }
    }
    // None means T = 0, i.e. F = 1 everywhere
    let mut cdfs: Vec<Option<Vec<f64>>> = vec![None; graph.len()];
    let mut h = vec![0.0f64; points];
    for &n in order {
        let edges = graph.edges(n);
        if edges.is_empty() {
            continue;
        }
        let lam = rate(n);
        let x = lam * step;
        let decay = (-x).exp();
        let alpha = -(-x).exp_m1();
        // series near zero: β = x/2 - x²/6 + ...
        let beta = if x < 1e-4 { x / 2.0 - x * x / 6.0 } else { 1.0 - alpha / x };
        let mut f = vec![0.0f64; points];
        let mut acc = vec![0.0f64; points];
        for e in edges {
            let p = system.monomer(e.monomer).rate() / lam;
            match (&cdfs[e.left], &cdfs[e.right]) {
                (None, None) => h.iter_mut().for_each(|v| *v = 1.0),
                (Some(a), None) | (None, Some(a)) => h.copy_from_slice(a),
                (Some(a), Some(b)) => {
                    for ((v, x), y) in h.iter_mut().zip(a).zip(b) {
                        *v = x * y;
                    }
                }
            }
            for k in 0..points - 1 {
                acc[k + 1] += p * ((alpha - beta) * h[k] + beta * h[k + 1]);
            }
        }
        for k in 0..points - 1 {
            f[k + 1] = (decay * f[k] + acc[k + 1]).min(1.0);
        }
        for e in edges {
            for c in [e.left, e.right] {
                pending[c] -= 1;
                if pending[c] == 0 {
                    cdfs[c] = None;
                }
            }
        }
        cdfs[n] = Some(f);
    }
    cdfs[graph.root()].take().unwrap_or_else(|| vec![1.0; points])
}
