//! Hitting events on a level of the construction.
//!
//! For a level-`n` interval `I = [r, s]`:
//!
//! * `Z_n(I)`: `f(r) ≤ B(s) ≤ f(s)`, evaluated at the right endpoint;
//! * `Y_n(I)`: `B` crosses the diagonal of `I × f_{b_n}(I)`.
//!
//! `Z_{b_n}` and `Y_{b_n}` count the intervals where the events occur. The
//! exact oracle computes every `P(Z_n(I))` and pairwise joint probability from
//! Gaussian and bivariate Gaussian integrals.

use alloc::vec::Vec;

use crate::brownian::{bridge_point, GridPlan, PathSample, TimeGrid};
use crate::cantor::CantorFunction;
use crate::error::EventsError;
use crate::rng::{derive, replicate_seed, Stream};
use crate::special::{bvn_rectangle_c, integrate, norm_interval, norm_pdf};
use crate::stats::{batch_se, Accumulator, Estimate, Fanout, IntBatches, BATCHES};

/// Oracle cap on the number of intervals (`k^n ≤ 256`).
pub const ORACLE_CAP: u64 = 256;

/// Default number of bridge points per interval in refinement mode.
pub const DEFAULT_REFINE_DEPTH: u32 = 128;

const Y_STREAM: u64 = 0x59;

/// How diagonal crossings between grid points are detected.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum YMode {
    /// Bernoulli draw with the exact bridge crossing probability
    /// `exp(−2 D_a D_b / Δt)` for each same-sign grid step.
    Exact,
    /// Sign changes among this many bridge points per interval.
    Refine(u32),
    /// Endpoint sign changes only.
    Endpoints,
}

/// Indicators of one path at one level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventOutcome {
    pub level: usize,
    pub replicate: u64,
    pub z: Option<Vec<bool>>,
    pub y: Option<Vec<bool>>,
}

impl EventOutcome {
    pub fn z_count(&self) -> usize {
        self.z
            .as_ref()
            .map_or(0, |z| z.iter().filter(|b| **b).count())
    }

    pub fn y_count(&self) -> usize {
        self.y
            .as_ref()
            .map_or(0, |y| y.iter().filter(|b| **b).count())
    }
}

fn grid_index(path: &PathSample, t: f64) -> Result<usize, EventsError> {
    path.grid.index_of(t).ok_or(EventsError::GridMisaligned(t))
}

/// `Z_n(I)` for every level-`n` interval.
pub fn eval_z(
    cf: &CantorFunction,
    path: &PathSample,
    n: usize,
) -> Result<EventOutcome, EventsError> {
    let nodes = cf.level_nodes(n)?;
    let mut z = Vec::with_capacity(nodes.len());
    for node in nodes.iter() {
        let v = path.values[grid_index(path, node.right)?];
        z.push(node.f_left() <= v && v <= node.f_right());
    }
    Ok(EventOutcome {
        level: n,
        replicate: path.seed,
        z: Some(z),
        y: None,
    })
}

/// Crossing test for `D = B − diagonal` on one interval, given `D` at the
/// known grid points inside it.
fn diagonal_crossed(times: &[f64], d: &[f64], mode: YMode, stream: &mut Stream) -> bool {
    for w in d.windows(2) {
        if w[0] * w[1] <= 0.0 {
            return true;
        }
    }
    match mode {
        YMode::Endpoints => false,
        YMode::Exact => {
            let mut miss = 1.0;
            for i in 1..d.len() {
                let dt = times[i] - times[i - 1];
                miss *= 1.0 - libm::exp(-2.0 * d[i - 1] * d[i] / dt);
            }
            stream.next_open01() < 1.0 - miss
        }
        YMode::Refine(points) => {
            let (r, s) = (times[0], *times.last().unwrap());
            let h = (s - r) / (points as f64 + 1.0);
            let mut seg = 1;
            let (mut t0, mut v0) = (r, d[0]);
            for j in 1..=points {
                let t = r + h * j as f64;
                while times[seg] <= t {
                    t0 = times[seg];
                    v0 = d[seg];
                    seg += 1;
                }
                let (t1, v1) = (times[seg], d[seg]);
                // skip draws whose crossing chance is below double precision
                if v0 * v1 > 0.0 && libm::exp(-2.0 * v0 * v1 / (t1 - t0)) < 1e-16 {
                    continue;
                }
                let v = bridge_point(t0, v0, t1, v1, t, stream.next_normal());
                if v * v0 <= 0.0 {
                    return true;
                }
                t0 = t;
                v0 = v;
            }
            false
        }
    }
}

fn y_stream(seed: u64, n: usize, index: u64) -> Stream {
    Stream::new(derive(derive(seed, Y_STREAM), ((n as u64) << 48) ^ index))
}

/// `Y_n(I)` for every level-`n` interval. Grid points inside an interval are
/// used as known values; the path between them is resolved per `mode`.
pub fn eval_y_with(
    cf: &CantorFunction,
    path: &PathSample,
    n: usize,
    mode: YMode,
) -> Result<EventOutcome, EventsError> {
    let nodes = cf.level_nodes(n)?;
    let times = path.grid.times();
    let mut y = Vec::with_capacity(nodes.len());
    let mut ts = Vec::new();
    let mut ds = Vec::new();
    for node in nodes.iter() {
        let ir = grid_index(path, node.left)?;
        let is = grid_index(path, node.right)?;
        let (fl, fr) = (node.f_left(), node.f_right());
        let width = node.right - node.left;
        ts.clear();
        ds.clear();
        for i in ir..=is {
            let diag = fl + (times[i] - node.left) / width * (fr - fl);
            ts.push(times[i]);
            ds.push(path.values[i] - diag);
        }
        let mut stream = y_stream(path.seed, n, node.index);
        y.push(diagonal_crossed(&ts, &ds, mode, &mut stream));
    }
    Ok(EventOutcome {
        level: n,
        replicate: path.seed,
        z: None,
        y: Some(y),
    })
}

/// `Y_n(I)` by bridge refinement with `refine_depth` points per interval.
pub fn eval_y(
    cf: &CantorFunction,
    path: &PathSample,
    n: usize,
    refine_depth: u32,
) -> Result<EventOutcome, EventsError> {
    eval_y_with(cf, path, n, YMode::Refine(refine_depth))
}

/// `Y_n(I)` with exact bridge crossing probabilities.
pub fn eval_y_exact(
    cf: &CantorFunction,
    path: &PathSample,
    n: usize,
) -> Result<EventOutcome, EventsError> {
    eval_y_with(cf, path, n, YMode::Exact)
}

/// Time grid holding `0` and every level-`n` endpoint, with index maps.
#[derive(Clone, Debug)]
pub struct LevelGrid {
    pub level: usize,
    pub grid: TimeGrid,
    plan: GridPlan,
    left: Vec<u32>,
    right: Vec<u32>,
    f_lo: Vec<f64>,
    f_hi: Vec<f64>,
}

impl LevelGrid {
    pub fn new(cf: &CantorFunction, n: usize) -> Result<Self, EventsError> {
        let nodes = cf.level_nodes(n)?;
        let mut pts = Vec::with_capacity(2 * nodes.len());
        for node in nodes.iter() {
            pts.push(node.left);
            pts.push(node.right);
        }
        let grid =
            TimeGrid::from_points(&pts).map_err(|_| EventsError::GridMisaligned(f64::NAN))?;
        let find = |t: f64| {
            grid.index_of(t)
                .map(|i| i as u32)
                .ok_or(EventsError::GridMisaligned(t))
        };
        let mut left = Vec::with_capacity(nodes.len());
        let mut right = Vec::with_capacity(nodes.len());
        for node in nodes.iter() {
            left.push(find(node.left)?);
            right.push(find(node.right)?);
        }
        Ok(Self {
            level: n,
            plan: grid.plan(),
            grid,
            left,
            right,
            f_lo: nodes.iter().map(|x| x.f_left()).collect(),
            f_hi: nodes.iter().map(|x| x.f_right()).collect(),
        })
    }

    pub fn intervals(&self) -> usize {
        self.left.len()
    }

    pub fn points(&self) -> usize {
        self.grid.len()
    }

    /// Samples `B` on the grid.
    pub fn sample(&self, seed: u64, values: &mut [f64]) {
        self.plan.sample_into(seed, values);
    }

    pub fn z_hit(&self, values: &[f64], i: usize) -> bool {
        let v = values[self.right[i] as usize];
        self.f_lo[i] <= v && v <= self.f_hi[i]
    }

    pub fn y_hit(&self, values: &[f64], i: usize, mode: YMode, seed: u64) -> bool {
        let (ir, is) = (self.left[i] as usize, self.right[i] as usize);
        let d0 = values[ir] - self.f_lo[i];
        let d1 = values[is] - self.f_hi[i];
        if d0 * d1 <= 0.0 {
            return true;
        }
        let times = self.grid.times();
        let mut stream = y_stream(seed, self.level, i as u64);
        diagonal_crossed(&[times[ir], times[is]], &[d0, d1], mode, &mut stream)
    }

    /// Wraps sampled values as a [`PathSample`].
    pub fn to_path(&self, values: &[f64], seed: u64) -> PathSample {
        PathSample {
            grid: self.grid.clone(),
            values: values.to_vec(),
            seed,
        }
    }
}

/// Values on the [`LevelGrid`] built top-down: `B(1)`, `B(2)` first, then each
/// interval's child endpoints by Brownian-bridge draws between the parent's
/// endpoints. Same law as [`LevelGrid::sample`], independent construction.
pub fn hierarchical_values(cf: &CantorFunction, lg: &LevelGrid, seed: u64, out: &mut [f64]) {
    let mut s = Stream::new(derive(seed, 0xB21D));
    let times = lg.grid.times();
    let n = lg.level;
    let k = cf.branching() as u64;
    out[0] = 0.0;
    let idx = |t: f64| lg.grid.index_of(t).expect("aligned");
    let i1 = idx(1.0);
    let i2 = idx(2.0);
    out[i1] = s.next_normal();
    out[i2] = out[i1] + s.next_normal();
    // left of [0, 1] is fixed, so only interior endpoints need bridging
    let mut parents: Vec<(usize, usize)> = alloc::vec![(i1, i2)];
    for m in 1..=n {
        let mut next = Vec::with_capacity(parents.len() * k as usize);
        for (p, &(pl, pr)) in parents.iter().enumerate() {
            let mut prev = pl;
            let mut kids = Vec::with_capacity(k as usize);
            for j in 0..k {
                let node = cf.node(m, p as u64 * k + j).expect("level in range");
                let (a, b) = (idx(node.left), idx(node.right));
                kids.push((a, b));
            }
            for &(a, b) in &kids {
                for c in [a, b] {
                    if c != prev && c != pr && c != pl {
                        out[c] = bridge_point(
                            times[prev],
                            out[prev],
                            times[pr],
                            out[pr],
                            times[c],
                            s.next_normal(),
                        );
                    }
                    prev = c.max(prev);
                }
            }
            next.extend(kids);
        }
        parents = next;
    }
}

/// Result of [`zero_in_cantor_detector`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Detection {
    /// `Z_{b_n} > 0`.
    pub z_positive: bool,
    /// Firing indicator per level `1..=n` (index 0 is level 1).
    pub fired: Vec<bool>,
    /// Deepest level with a firing interval and its leftmost address.
    pub deepest: Option<(usize, Vec<u8>)>,
}

/// Scans levels `1..=n` for intervals where `Z_m` fires.
pub fn zero_in_cantor_detector(
    cf: &CantorFunction,
    path: &PathSample,
    n: usize,
) -> Result<Detection, EventsError> {
    let mut fired = Vec::with_capacity(n);
    let mut deepest = None;
    for m in 1..=n {
        let out = eval_z(cf, path, m)?;
        let z = out.z.unwrap();
        let first = z.iter().position(|b| *b);
        fired.push(first.is_some());
        if let Some(i) = first {
            deepest = Some((m, cf.node(m, i as u64)?.address()));
        }
    }
    Ok(Detection {
        z_positive: *fired.last().unwrap_or(&false),
        fired,
        deepest,
    })
}

/// Exact Gaussian quantities for the `Z_n` events.
#[derive(Clone, Debug)]
pub struct ZOracle {
    pub level: usize,
    pub branching: u32,
    /// Right endpoints `s_I` as `s + s_lo` in double-double.
    pub s: Vec<f64>,
    pub s_lo: Vec<f64>,
    /// `f(r_I)`, `f(s_I)`.
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    /// `P(Z_n(I))`.
    pub p: Vec<f64>,
    joint: Vec<f64>,
    pub mean: f64,
    pub second_moment: f64,
}

impl ZOracle {
    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    /// `P(Z_n(I) ∧ Z_n(J))`.
    pub fn joint(&self, i: usize, j: usize) -> f64 {
        self.joint[i * self.p.len() + j]
    }

    /// `P(Z_n(J) | Z_n(I))`.
    pub fn conditional(&self, i: usize, j: usize) -> f64 {
        self.joint(i, j) / self.p[i]
    }

    /// `(E Z)² / E(Z²)`.
    pub fn pz_bound(&self) -> f64 {
        self.mean * self.mean / self.second_moment
    }
}

/// Joint probability of two endpoint events, `s_i < s_j`, as a bivariate
/// normal rectangle with correlation `√(s_i/s_j)`. `gap = s_j − s_i` is passed
/// separately so that close endpoints keep their precision.
pub fn joint_z(s_i: f64, lo_i: f64, hi_i: f64, s_j: f64, lo_j: f64, hi_j: f64, gap: f64) -> f64 {
    let (ri, rj) = (libm::sqrt(s_i), libm::sqrt(s_j));
    bvn_rectangle_c(
        lo_i / ri,
        hi_i / ri,
        lo_j / rj,
        hi_j / rj,
        libm::sqrt(s_i / s_j),
        gap / s_j,
    )
}

pub fn exact_z_oracle(cf: &CantorFunction, n: usize) -> Result<ZOracle, EventsError> {
    let count = cf.count(n.min(cf.depth()));
    if n <= cf.depth() && count > ORACLE_CAP {
        return Err(EventsError::OracleCapExceeded {
            level: n,
            intervals: count,
            cap: ORACLE_CAP,
        });
    }
    let nodes = cf.level_nodes(n)?;
    let m = nodes.len();
    let s: Vec<f64> = nodes.iter().map(|x| x.right).collect();
    let s_lo: Vec<f64> = nodes.iter().map(|x| x.right_lo).collect();
    let lo: Vec<f64> = nodes.iter().map(|x| x.f_left()).collect();
    let hi: Vec<f64> = nodes.iter().map(|x| x.f_right()).collect();
    let p: Vec<f64> = (0..m)
        .map(|i| {
            let r = libm::sqrt(s[i]);
            norm_interval(lo[i] / r, hi[i] / r)
        })
        .collect();
    let mut joint = alloc::vec![0.0; m * m];
    let mut pair_sum = 0.0;
    for i in 0..m {
        joint[i * m + i] = p[i];
        for j in i + 1..m {
            let q = joint_z(
                s[i],
                lo[i],
                hi[i],
                s[j],
                lo[j],
                hi[j],
                nodes[i].right_gap(&nodes[j]),
            );
            joint[i * m + j] = q;
            joint[j * m + i] = q;
            pair_sum += q;
        }
    }
    let mean: f64 = p.iter().sum();
    Ok(ZOracle {
        level: n,
        branching: cf.branching(),
        s,
        s_lo,
        lo,
        hi,
        p,
        joint,
        mean,
        second_moment: mean + 2.0 * pair_sum,
    })
}

/// `P(Z_n(J) | Z_n(I))` for `s_I < s_J` by integrating the transition density
/// over the conditioning window (Markov route).
pub fn conditional_by_transition(oracle: &ZOracle, i: usize, j: usize) -> f64 {
    let gap = (oracle.s[j] - oracle.s[i]) + (oracle.s_lo[j] - oracle.s_lo[i]);
    let (ri, rd) = (libm::sqrt(oracle.s[i]), libm::sqrt(gap));
    let (lo_i, hi_i, lo_j, hi_j) = (oracle.lo[i], oracle.hi[i], oracle.lo[j], oracle.hi[j]);
    // the inner probability steps at lo_j and hi_j over a width of order rd
    let mut cuts = alloc::vec![lo_i, hi_i];
    for edge in [lo_j, hi_j] {
        for w in [-16.0, -4.0, -1.0, 0.0, 1.0, 4.0, 16.0] {
            let x = edge + w * rd;
            if x > lo_i && x < hi_i {
                cuts.push(x);
            }
        }
    }
    cuts.sort_by(f64::total_cmp);
    let mass: f64 = cuts
        .windows(2)
        .map(|c| {
            integrate(
                |x| norm_pdf(x / ri) / ri * norm_interval((lo_j - x) / rd, (hi_j - x) / rd),
                c[0],
                c[1],
                1e-18,
            )
        })
        .sum();
    mass / oracle.p[i]
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SecondMomentCheck {
    /// `Σ P(I) + 2 Σ_{I<J} P(I ∧ J)` from the bivariate rectangles.
    pub direct: f64,
    /// `E(Z) + 2 Σ_{I<J} P(I) P(J | I)` with transition-density conditionals.
    pub decomposed: f64,
    pub discrepancy: f64,
}

/// Evaluates `E(Z²)` along two independent routes.
pub fn second_moment_decomposition_check(oracle: &ZOracle) -> SecondMomentCheck {
    let m = oracle.len();
    let mut pairs = 0.0;
    for i in 0..m {
        for j in i + 1..m {
            pairs += oracle.p[i] * conditional_by_transition(oracle, i, j);
        }
    }
    let decomposed = oracle.mean + 2.0 * pairs;
    SecondMomentCheck {
        direct: oracle.second_moment,
        decomposed,
        discrepancy: libm::fabs(decomposed - oracle.second_moment),
    }
}

/// Monte Carlo settings for [`simulate_moments`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentConfig {
    pub level: usize,
    pub replicates: u64,
    pub seed: u64,
    pub y_mode: YMode,
    /// Attach oracle moments when `k^n ≤ ORACLE_CAP`.
    pub oracle: bool,
}

/// Per-replicate path seed at a level.
pub fn level_seed(master: u64, level: usize, replicate: u64) -> u64 {
    replicate_seed(derive(master, level as u64), replicate)
}

/// Integer sufficient statistics of `Z_{b_n}` and `Y_{b_n}`.
#[derive(Clone, Debug)]
pub struct MomentAccumulator {
    pub z: IntBatches,
    pub z2: IntBatches,
    pub z_pos: IntBatches,
    pub y: IntBatches,
    pub y_pos: IntBatches,
    /// `Z_n(I)` hit counts per interval.
    pub per_interval: Vec<u64>,
    scratch: Vec<f64>,
}

impl MomentAccumulator {
    pub fn new(intervals: usize, points: usize) -> Self {
        Self {
            z: IntBatches::default(),
            z2: IntBatches::default(),
            z_pos: IntBatches::default(),
            y: IntBatches::default(),
            y_pos: IntBatches::default(),
            per_interval: alloc::vec![0; intervals],
            scratch: alloc::vec![0.0; points],
        }
    }

    pub fn replicates(&self) -> u64 {
        self.z.count()
    }

    /// Records one replicate given the sampled values.
    pub fn record(&mut self, lg: &LevelGrid, replicate: u64, seed: u64, y_mode: Option<YMode>) {
        let values = core::mem::take(&mut self.scratch);
        let mut z = 0u64;
        let mut y = 0u64;
        for i in 0..lg.intervals() {
            if lg.z_hit(&values, i) {
                z += 1;
                self.per_interval[i] += 1;
            }
            if let Some(mode) = y_mode {
                if lg.y_hit(&values, i, mode, seed) {
                    y += 1;
                }
            }
        }
        self.scratch = values;
        self.z.add(replicate, z);
        self.z2.add(replicate, z * z);
        self.z_pos.add(replicate, (z > 0) as u64);
        self.y.add(replicate, y);
        self.y_pos.add(replicate, (y > 0) as u64);
    }

    pub fn scratch_mut(&mut self) -> &mut [f64] {
        &mut self.scratch
    }

    /// Paley–Zygmund ratio from the Monte Carlo moments, with batch-means SE.
    pub fn pz_estimate(&self) -> Estimate {
        let m1 = self.z.estimate().value;
        let m2 = self.z2.estimate().value;
        let b1 = self.z.batch_means();
        let b2 = self.z2.batch_means();
        let ratios: Vec<f64> = b1
            .iter()
            .zip(&b2)
            .filter(|(_, m2)| **m2 > 0.0)
            .map(|(m1, m2)| m1 * m1 / m2)
            .collect();
        Estimate {
            value: if m2 > 0.0 { m1 * m1 / m2 } else { f64::NAN },
            se: batch_se(&ratios),
        }
    }
}

impl Accumulator for MomentAccumulator {
    fn merge(&mut self, other: Self) {
        self.z.merge(other.z);
        self.z2.merge(other.z2);
        self.z_pos.merge(other.z_pos);
        self.y.merge(other.y);
        self.y_pos.merge(other.y_pos);
        for (a, b) in self.per_interval.iter_mut().zip(other.per_interval) {
            *a += b;
        }
    }
}

/// Monte Carlo and oracle moments of `Z_{b_n}`, `Y_{b_n}` at one level.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentReport {
    pub level: usize,
    pub branching: u32,
    pub mean_z: Estimate,
    pub second_moment_z: Estimate,
    pub mean_z_exact: Option<f64>,
    pub second_moment_z_exact: Option<f64>,
    /// `(E Z)²/E(Z²)` from the oracle.
    pub pz_lower_bound: Option<f64>,
    /// The same ratio from the Monte Carlo moments.
    pub pz_monte_carlo: Estimate,
    pub prob_z_positive: Estimate,
    pub mean_y: Estimate,
    pub prob_y_positive: Estimate,
    /// Per-interval frequencies of `Z_n(I)`.
    pub interval_frequencies: Vec<f64>,
    pub replicates: u64,
    pub seed: u64,
}

/// Runs `replicates` independent paths at one level through `fanout`.
pub fn simulate_moments<F: Fanout>(
    cf: &CantorFunction,
    cfg: &MomentConfig,
    fanout: &F,
) -> Result<MomentReport, EventsError> {
    let n = cfg.level;
    let lg = LevelGrid::new(cf, n)?;
    let oracle = if cfg.oracle && cf.count(n) <= ORACLE_CAP {
        Some(exact_z_oracle(cf, n)?)
    } else {
        None
    };
    let y_mode = Some(cfg.y_mode);
    let acc = fanout.run(
        cfg.replicates,
        || MomentAccumulator::new(lg.intervals(), lg.points()),
        |acc, r| {
            let seed = level_seed(cfg.seed, n, r);
            lg.sample(seed, acc.scratch_mut());
            acc.record(&lg, r, seed, y_mode);
        },
    );
    Ok(report_from(
        &acc,
        cf.branching(),
        n,
        cfg.seed,
        oracle.as_ref(),
    ))
}

/// Assembles a report from accumulated statistics.
pub fn report_from(
    acc: &MomentAccumulator,
    branching: u32,
    level: usize,
    seed: u64,
    oracle: Option<&ZOracle>,
) -> MomentReport {
    let reps = acc.replicates();
    MomentReport {
        level,
        branching,
        mean_z: acc.z.estimate(),
        second_moment_z: acc.z2.estimate(),
        mean_z_exact: oracle.map(|o| o.mean),
        second_moment_z_exact: oracle.map(|o| o.second_moment),
        pz_lower_bound: oracle.map(|o| o.pz_bound()),
        pz_monte_carlo: acc.pz_estimate(),
        prob_z_positive: acc.z_pos.estimate(),
        mean_y: acc.y.estimate(),
        prob_y_positive: acc.y_pos.estimate(),
        interval_frequencies: acc
            .per_interval
            .iter()
            .map(|c| *c as f64 / reps.max(1) as f64)
            .collect(),
        replicates: reps,
        seed,
    }
}

/// `(E Z)²/E(Z²)`.
pub fn pz_from_moments(mean: f64, second_moment: f64) -> Result<f64, EventsError> {
    if !(second_moment > 0.0) {
        return Err(EventsError::ZeroSecondMoment);
    }
    Ok(mean * mean / second_moment)
}

/// Paley–Zygmund lower bound on `P(Z_{b_n} > 0)`: oracle moments when
/// present, otherwise the Monte Carlo ratio with its standard error.
pub fn paley_zygmund(report: &MomentReport) -> Result<Estimate, EventsError> {
    match (report.mean_z_exact, report.second_moment_z_exact) {
        (Some(m1), Some(m2)) => pz_from_moments(m1, m2).map(Estimate::exact),
        _ => {
            pz_from_moments(report.mean_z.value, report.second_moment_z.value)?;
            Ok(report.pz_monte_carlo)
        }
    }
}

/// One row of [`diagonal_moment_bounds_check`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiagonalRow {
    pub level: usize,
    pub a: f64,
    pub mean_y: Estimate,
    /// `E(Y_{b_n}) / k^n`, the interval-averaged `P(Y_n(I))`.
    pub interval_probability: Estimate,
    /// `E(Y_{b_n}) / max(1, a_n)`, bounded in both regimes.
    pub scaled: Estimate,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalTable {
    pub rows: Vec<DiagonalRow>,
    /// Fitted band `[Ĉ_lo, Ĉ_hi]` for `scaled` (±3 SE around the extremes).
    pub c_lo: f64,
    pub c_hi: f64,
}

/// Estimates `P(Y_n(I))` and `E(Y_{b_n})` per level and fits the constant band
/// of `E(Y_{b_n}) / max(1, a_n)`.
pub fn diagonal_moment_bounds_check<F: Fanout>(
    cf: &CantorFunction,
    levels: &[usize],
    replicates: u64,
    seed: u64,
    y_mode: YMode,
    fanout: &F,
) -> Result<DiagonalTable, EventsError> {
    let mut rows = Vec::with_capacity(levels.len());
    for &n in levels {
        let report = simulate_moments(
            cf,
            &MomentConfig {
                level: n,
                replicates,
                seed,
                y_mode,
                oracle: false,
            },
            fanout,
        )?;
        let a = cf.a(n);
        let scale = a.max(1.0);
        let count = cf.count(n) as f64;
        let m = report.mean_y;
        rows.push(DiagonalRow {
            level: n,
            a,
            mean_y: m,
            interval_probability: Estimate {
                value: m.value / count,
                se: m.se / count,
            },
            scaled: Estimate {
                value: m.value / scale,
                se: m.se / scale,
            },
        });
    }
    let c_lo = rows
        .iter()
        .map(|r| r.scaled.value - 3.0 * r.scaled.se)
        .fold(f64::INFINITY, f64::min);
    let c_hi = rows
        .iter()
        .map(|r| r.scaled.value + 3.0 * r.scaled.se)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(DiagonalTable { rows, c_lo, c_hi })
}

/// Number of batches used by every Monte Carlo estimate.
pub const fn batches() -> usize {
    BATCHES
}
