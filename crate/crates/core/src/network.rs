//! Communication topologies and time-varying schedules.
//!
//! Weight matrices are symmetric, nonnegative, and zero on the diagonal.
//! A schedule cycles through frames of fixed step counts; individual frames
//! may be disconnected as long as the union over every window of `B` steps
//! is connected (uniform connectivity).

use crate::error::{Error, Result};
use crate::rng::Stream;

/// Symmetric nonnegative link-weight matrix with zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix {
    n: usize,
    w: Vec<f64>,
}

impl WeightMatrix {
    /// Validate and wrap a dense row-major matrix.
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: entries.len(),
            });
        }
        for i in 0..n {
            let d = entries[i * n + i];
            if d != 0.0 {
                return Err(Error::InvalidConfig(format!(
                    "weight matrix diagonal ({i}, {i}) = {d} must be zero"
                )));
            }
            for j in (i + 1)..n {
                let w_ij = entries[i * n + j];
                let w_ji = entries[j * n + i];
                if w_ij != w_ji {
                    return Err(Error::AsymmetricWeights { i, j, w_ij, w_ji });
                }
                if w_ij < 0.0 || !w_ij.is_finite() {
                    return Err(Error::InvalidConfig(format!(
                        "weight ({i}, {j}) = {w_ij} must be finite and >= 0"
                    )));
                }
            }
        }
        Ok(Self { n, w: entries })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            w: vec![0.0; n * n],
        }
    }

    /// Build from undirected edges; duplicates are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut m = Self::zeros(n);
        for &(i, j, weight) in edges {
            if i >= n || j >= n {
                return Err(Error::InvalidConfig(format!(
                    "edge ({i}, {j}) out of range for n = {n}"
                )));
            }
            if i == j {
                return Err(Error::InvalidConfig(format!("self-loop at node {i}")));
            }
            if weight < 0.0 || !weight.is_finite() {
                return Err(Error::InvalidConfig(format!(
                    "edge ({i}, {j}) weight {weight} must be finite and >= 0"
                )));
            }
            if m.w[i * n + j] != 0.0 {
                return Err(Error::InvalidConfig(format!("duplicate edge ({i}, {j})")));
            }
            m.w[i * n + j] = weight;
            m.w[j * n + i] = weight;
        }
        Ok(m)
    }

    pub fn complete(n: usize, weight: f64) -> Result<Self> {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                edges.push((i, j, weight));
            }
        }
        Self::from_edges(n, &edges)
    }

    pub fn ring(n: usize, weight: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidConfig(format!(
                "ring needs at least 3 nodes, got {n}"
            )));
        }
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, weight)).collect();
        Self::from_edges(n, &edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.w[i * self.n + j]
    }

    pub fn row_sum(&self, i: usize) -> f64 {
        self.w[i * self.n..(i + 1) * self.n].iter().sum()
    }

    pub fn max_row_sum(&self) -> f64 {
        (0..self.n)
            .map(|i| self.row_sum(i))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Undirected active edges `(i, j, w)` with `i < j` and `w > 0`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| {
            ((i + 1)..self.n).filter_map(move |j| {
                let w = self.get(i, j);
                (w > 0.0).then_some((i, j, w))
            })
        })
    }

    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }

    /// Both directions of every active edge, for per-link noise sampling.
    pub fn directed_links(&self) -> Vec<(usize, usize)> {
        let mut links = Vec::with_capacity(2 * self.edge_count());
        for (i, j, _) in self.edges() {
            links.push((i, j));
            links.push((j, i));
        }
        links
    }

    /// True iff the positive-weight graph has a single connected component.
    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut queue = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(i) = queue.pop() {
            let row = &self.w[i * self.n..(i + 1) * self.n];
            for (j, &w) in row.iter().enumerate() {
                if !seen[j] && w > 0.0 {
                    seen[j] = true;
                    count += 1;
                    queue.push(j);
                }
            }
        }
        count == self.n
    }
}

/// Erdős–Rényi graph: each undirected pair is linked independently with
/// probability `p` at the given weight. Deterministic per seed; the draw for
/// a pair depends only on `(seed, i, j)`.
pub fn gen_erdos_renyi(n: usize, p: f64, weight: f64, seed: u64) -> Result<WeightMatrix> {
    if n < 2 {
        return Err(Error::InvalidConfig(format!(
            "need at least 2 nodes, got {n}"
        )));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidConfig(format!(
            "link probability must be in [0, 1], got {p}"
        )));
    }
    if weight <= 0.0 || !weight.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "link weight must be finite and > 0, got {weight}"
        )));
    }
    let mut m = WeightMatrix::zeros(n);
    for i in 0..n {
        for j in (i + 1)..n {
            let u = Stream::keyed(&[seed, i as u64, j as u64]).next_f64();
            if u < p {
                m.w[i * n + j] = weight;
                m.w[j * n + i] = weight;
            }
        }
    }
    Ok(m)
}

/// One schedule frame: a topology held for a fixed number of steps.
#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleFrame {
    pub weights: WeightMatrix,
    pub duration: u64,
}

/// Cyclic sequence of weight matrices indexed by step.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkSchedule {
    frames: Vec<ScheduleFrame>,
    window_b: Option<u64>,
    period: u64,
}

impl NetworkSchedule {
    pub fn new(frames: Vec<ScheduleFrame>) -> Result<Self> {
        if frames.is_empty() {
            return Err(Error::EmptySchedule);
        }
        let n = frames[0].weights.n();
        let mut period = 0u64;
        for (k, frame) in frames.iter().enumerate() {
            if frame.weights.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: frame.weights.n(),
                });
            }
            if frame.duration == 0 {
                return Err(Error::InvalidConfig(format!("frame {k} has zero duration")));
            }
            period += frame.duration;
        }
        Ok(Self {
            frames,
            window_b: None,
            period,
        })
    }

    /// A single topology held forever.
    pub fn static_graph(weights: WeightMatrix) -> Self {
        Self {
            period: 1,
            frames: vec![ScheduleFrame {
                weights,
                duration: 1,
            }],
            window_b: None,
        }
    }

    /// Declare the uniform-connectivity window; rejected if the schedule is
    /// not union-connected over every window of `b` steps.
    pub fn with_window(mut self, b: u64) -> Result<Self> {
        if b == 0 {
            return Err(Error::InvalidConfig("window B must be >= 1".into()));
        }
        if !self.check_b_connectivity(b) {
            return Err(Error::InvalidConfig(format!(
                "schedule is not union-connected over every window of {b} steps"
            )));
        }
        self.window_b = Some(b);
        Ok(self)
    }

    pub fn window_b(&self) -> Option<u64> {
        self.window_b
    }

    pub fn n(&self) -> usize {
        self.frames[0].weights.n()
    }

    pub fn frames(&self) -> &[ScheduleFrame] {
        &self.frames
    }

    /// Steps before the schedule repeats.
    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn frame_index_at(&self, step: u64) -> usize {
        let mut t = step % self.period;
        for (k, frame) in self.frames.iter().enumerate() {
            if t < frame.duration {
                return k;
            }
            t -= frame.duration;
        }
        unreachable!("period covers all residues");
    }

    /// The weight matrix governing `step`; schedules repeat cyclically.
    pub fn at(&self, step: u64) -> &WeightMatrix {
        &self.frames[self.frame_index_at(step)].weights
    }

    /// True iff the union of active edges over every window of `b`
    /// consecutive steps (of the infinite cyclic unrolling) is connected.
    pub fn check_b_connectivity(&self, b: u64) -> bool {
        if b == 0 {
            return false;
        }
        let n = self.n();
        // Windows repeat with the schedule period, so checking every start
        // inside one period covers all of them.
        for start in 0..self.period {
            let mut union = WeightMatrix::zeros(n);
            for t in start..start + b {
                let frame = self.at(t);
                for (i, j, _) in frame.edges() {
                    union.w[i * n + j] = 1.0;
                    union.w[j * n + i] = 1.0;
                }
            }
            if !union.is_connected() {
                return false;
            }
        }
        true
    }
}
