//! Brownian paths on explicit time grids.
//!
//! Paths are built from sequential Gaussian increments drawn from a counter
//! stream keyed by the path seed, so `(grid, seed)` determines every value.
//! Bridge refinement inserts points between existing samples without touching
//! them.

use alloc::vec::Vec;

use crate::error::BrownianError;
use crate::rng::{derive, Stream};

/// Strictly increasing times starting at 0.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeGrid {
    times: Vec<f64>,
}

impl TimeGrid {
    pub fn new(times: Vec<f64>) -> Result<Self, BrownianError> {
        if times.first() != Some(&0.0) {
            return Err(BrownianError::InvalidGrid);
        }
        if times
            .windows(2)
            .any(|w| !(w[1] > w[0]) || !w[1].is_finite())
        {
            return Err(BrownianError::InvalidGrid);
        }
        Ok(Self { times })
    }

    /// Sorts and deduplicates `points`, drops negatives, and prepends 0.
    pub fn from_points(points: &[f64]) -> Result<Self, BrownianError> {
        let mut times: Vec<f64> = Vec::with_capacity(points.len() + 1);
        times.push(0.0);
        let mut rest: Vec<f64> = points.iter().copied().filter(|t| *t > 0.0).collect();
        if rest.iter().any(|t| !t.is_finite()) {
            return Err(BrownianError::InvalidGrid);
        }
        rest.sort_by(f64::total_cmp);
        rest.dedup();
        times.extend(rest);
        Self::new(times)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Index of an exact grid point.
    pub fn index_of(&self, t: f64) -> Option<usize> {
        self.times.binary_search_by(|x| x.total_cmp(&t)).ok()
    }

    /// Precomputes `sqrt(Δt)` for repeated sampling on this grid.
    pub fn plan(&self) -> GridPlan {
        GridPlan {
            sqrt_dt: self
                .times
                .windows(2)
                .map(|w| libm::sqrt(w[1] - w[0]))
                .collect(),
        }
    }
}

/// Increment scales of a grid, for allocation-free resampling.
#[derive(Clone, Debug)]
pub struct GridPlan {
    sqrt_dt: Vec<f64>,
}

impl GridPlan {
    pub fn len(&self) -> usize {
        self.sqrt_dt.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Writes `B` at every grid time into `out`; identical to [`sample_path`].
    pub fn sample_into(&self, seed: u64, out: &mut [f64]) {
        assert_eq!(out.len(), self.len());
        let mut stream = Stream::new(seed);
        let mut acc = 0.0;
        out[0] = 0.0;
        for (slot, s) in out[1..].iter_mut().zip(&self.sqrt_dt) {
            acc += s * stream.next_normal();
            *slot = acc;
        }
    }
}

/// Brownian values on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct PathSample {
    pub grid: TimeGrid,
    pub values: Vec<f64>,
    pub seed: u64,
}

impl PathSample {
    /// A path with prescribed values, for deterministic scenarios.
    pub fn from_values(grid: TimeGrid, values: Vec<f64>, seed: u64) -> Result<Self, BrownianError> {
        if values.len() != grid.len() {
            return Err(BrownianError::InvalidGrid);
        }
        Ok(Self { grid, values, seed })
    }

    pub fn value_at(&self, t: f64) -> Option<f64> {
        self.grid.index_of(t).map(|i| self.values[i])
    }
}

pub fn sample_path(grid: &TimeGrid, seed: u64) -> PathSample {
    let mut values = alloc::vec![0.0; grid.len()];
    grid.plan().sample_into(seed, &mut values);
    PathSample {
        grid: grid.clone(),
        values,
        seed,
    }
}

/// Value at `t` of a Brownian bridge from `(t0, v0)` to `(t1, v1)`, given a
/// standard normal `z`.
#[inline]
pub fn bridge_point(t0: f64, v0: f64, t1: f64, v1: f64, t: f64, z: f64) -> f64 {
    let span = t1 - t0;
    let w = (t - t0) / span;
    v0 + w * (v1 - v0) + libm::sqrt((t - t0) * (t1 - t) / span) * z
}

/// Inserts Brownian-bridge samples at `new_times` inside the grid segment
/// `(segment.0, segment.1)`. Each new point is conditioned on its nearest known
/// neighbours, so the joint law of the refined path is exact.
pub fn refine_bridge(
    path: &PathSample,
    segment: (usize, usize),
    new_times: &[f64],
    seed: u64,
) -> Result<PathSample, BrownianError> {
    let (i0, i1) = segment;
    let times = path.grid.times();
    if !(i0 < i1 && i1 < times.len()) {
        return Err(BrownianError::InvalidSegment(i0, i1));
    }
    if new_times.is_empty() {
        return Ok(path.clone());
    }
    let (lo, hi) = (times[i0], times[i1]);
    for w in new_times.windows(2) {
        if !(w[1] > w[0]) {
            return Err(BrownianError::InvalidGrid);
        }
    }
    for &t in new_times {
        if !(t > lo && t < hi) {
            return Err(BrownianError::TimesOutsideSegment(t));
        }
        if path.grid.index_of(t).is_some() {
            return Err(BrownianError::InvalidGrid);
        }
    }

    let mut stream = Stream::new(derive(
        derive(path.seed, seed),
        ((i0 as u64) << 32) ^ i1 as u64,
    ));
    let mut out_t = Vec::with_capacity(times.len() + new_times.len());
    let mut out_v = Vec::with_capacity(times.len() + new_times.len());
    out_t.extend_from_slice(&times[..=i0]);
    out_v.extend_from_slice(&path.values[..=i0]);

    let mut next = i0 + 1;
    for &t in new_times {
        while times[next] < t {
            out_t.push(times[next]);
            out_v.push(path.values[next]);
            next += 1;
        }
        let (t0, v0) = (*out_t.last().unwrap(), *out_v.last().unwrap());
        let v = bridge_point(
            t0,
            v0,
            times[next],
            path.values[next],
            t,
            stream.next_normal(),
        );
        out_t.push(t);
        out_v.push(v);
    }
    out_t.extend_from_slice(&times[next..]);
    out_v.extend_from_slice(&path.values[next..]);

    Ok(PathSample {
        grid: TimeGrid { times: out_t },
        values: out_v,
        seed: path.seed,
    })
}

/// `B̃(u) = (t2 − t1)^{-1/2} (B(t1 + (t2 − t1) u) − B(t1))` at the grid points in `[t1, t2]`.
#[derive(Clone, Debug, PartialEq)]
pub struct RescaledPath {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

pub fn rescale_markov(path: &PathSample, t1: f64, t2: f64) -> Result<RescaledPath, BrownianError> {
    let i1 = path
        .grid
        .index_of(t1)
        .ok_or(BrownianError::TimesNotOnGrid(t1))?;
    let i2 = path
        .grid
        .index_of(t2)
        .ok_or(BrownianError::TimesNotOnGrid(t2))?;
    if i1 >= i2 {
        return Err(BrownianError::InvalidSegment(i1, i2));
    }
    let span = t2 - t1;
    let scale = 1.0 / libm::sqrt(span);
    let base = path.values[i1];
    let times = path.grid.times()[i1..=i2]
        .iter()
        .map(|t| (t - t1) / span)
        .collect();
    let values = path.values[i1..=i2]
        .iter()
        .map(|v| (v - base) * scale)
        .collect();
    Ok(RescaledPath { times, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn grid_validation() {
        assert!(TimeGrid::new(vec![0.0, 1.0, 2.0]).is_ok());
        assert_eq!(
            TimeGrid::new(vec![0.5, 1.0]),
            Err(BrownianError::InvalidGrid)
        );
        assert_eq!(
            TimeGrid::new(vec![0.0, 1.0, 1.0]),
            Err(BrownianError::InvalidGrid)
        );
        let g = TimeGrid::from_points(&[2.0, 1.0, 1.0, 1.5]).unwrap();
        assert_eq!(g.times(), &[0.0, 1.0, 1.5, 2.0]);
    }

    #[test]
    fn trivial_grid_and_determinism() {
        let g = TimeGrid::new(vec![0.0]).unwrap();
        assert_eq!(sample_path(&g, 9).values, vec![0.0]);
        let g = TimeGrid::new(vec![0.0, 1.0]).unwrap();
        let a = sample_path(&g, 123);
        let b = sample_path(&g, 123);
        assert_eq!(a.values[1].to_bits(), b.values[1].to_bits());
        assert_ne!(a.values[1], sample_path(&g, 124).values[1]);
    }

    #[test]
    fn refine_no_op_and_preserves_existing() {
        let g = TimeGrid::new(vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        let p = sample_path(&g, 5);
        assert_eq!(refine_bridge(&p, (1, 2), &[], 1).unwrap(), p);
        let r = refine_bridge(&p, (0, 3), &[0.5, 1.5, 2.5], 1).unwrap();
        assert_eq!(r.grid.times(), &[0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0]);
        for (t, v) in g.times().iter().zip(&p.values) {
            assert_eq!(r.value_at(*t), Some(*v));
        }
        assert_eq!(
            refine_bridge(&p, (1, 2), &[2.5], 1),
            Err(BrownianError::TimesOutsideSegment(2.5))
        );
    }

    #[test]
    fn rescale_unit_span() {
        let g = TimeGrid::new(vec![0.0, 1.0, 1.5, 2.0]).unwrap();
        let p = sample_path(&g, 77);
        let r = rescale_markov(&p, 1.0, 2.0).unwrap();
        assert_eq!(r.times, vec![0.0, 0.5, 1.0]);
        for (k, v) in r.values.iter().enumerate() {
            assert_eq!(*v, p.values[k + 1] - p.values[1]);
        }
        assert_eq!(
            rescale_markov(&p, 1.2, 2.0),
            Err(BrownianError::TimesNotOnGrid(1.2))
        );
        let zero = PathSample::from_values(g, vec![0.0; 4], 0).unwrap();
        assert!(rescale_markov(&zero, 1.0, 1.5)
            .unwrap()
            .values
            .iter()
            .all(|v| *v == 0.0));
    }
}
