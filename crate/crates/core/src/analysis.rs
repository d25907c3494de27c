//! Analytic side of the zero-set dichotomy: the series `S(z)` and its closed
//! bound, conditional-probability sums, balanced-address censuses with the
//! exponential Chebyshev bound, first-moment lower bounds for balanced
//! intervals, LIL ratio profiles, cut probabilities, the isolated-zone
//! construction and Hölder diagnostics.

use alloc::vec::Vec;
use core::f64::consts::{E, PI};

use crate::cantor::CantorFunction;
use crate::error::AnalysisError;
use crate::events::{joint_z, level_seed, LevelGrid, YMode};
use crate::sequences::{
    classify, generate_a, ConvergenceHeuristic, SequenceKind, SequenceSpec, Verdict,
};
use crate::special::{norm_cdf, norm_interval};
use crate::stats::{batch_se, linear_fit, Accumulator, Estimate, Fanout, IntBatches, BATCHES};

/// `S(z) = z Σ_{k≥1} (k+1) exp(−(kz)²/2)` with a certified tail bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SValue {
    pub value: f64,
    /// Upper bound on the omitted terms `k > terms`.
    pub tail_bound: f64,
    pub terms: usize,
}

/// Upper bound on `z Σ_{k>K} (k+1) e^{−(kz)²/2}`, valid once the summand is
/// decreasing past `K` (i.e. `K(K+1) z² > 1`).
fn s_tail(z: f64, k: usize) -> f64 {
    let kz = k as f64 * z;
    z * (libm::exp(-kz * kz / 2.0) / (z * z)
        + libm::sqrt(PI / 2.0) / z * libm::erfc(kz / core::f64::consts::SQRT_2))
}

/// Sums `S(z)`, doubling `terms` until the certified tail is below
/// `1e-15 · max(1, S)`.
pub fn s_function(z: f64, terms: usize) -> SValue {
    assert!(z > 0.0, "z must be positive");
    let mut k_max = terms.max(1);
    loop {
        let decreasing = (k_max as f64) * (k_max as f64 + 1.0) * z * z > 1.0;
        let mut sum = 0.0;
        for k in 1..=k_max {
            let kz = k as f64 * z;
            sum += (k as f64 + 1.0) * libm::exp(-kz * kz / 2.0);
        }
        let value = z * sum;
        if decreasing {
            let tail = s_tail(z, k_max);
            if tail < 1e-15 * value.max(1.0) {
                return SValue {
                    value,
                    tail_bound: tail,
                    terms: k_max,
                };
            }
        }
        k_max *= 2;
    }
}

/// `g(z) = (z/(1 − e^{−z}))² (2e^{−z} − e^{−2z})`.
pub fn comparison_factor(z: f64) -> f64 {
    let q = z / -libm::expm1(-z);
    let e = libm::exp(-z);
    q * q * (2.0 * e - e * e)
}

/// Closed-form bound `e^{1/2} z^{−1} g(z) ≥ S(z)`.
pub fn s_bound(z: f64) -> f64 {
    libm::exp(0.5) / z * comparison_factor(z)
}

/// Supremum of [`comparison_factor`] on `(0, ∞)`: log-grid scan on
/// `[1e−6, 50]` refined by golden-section search, compared with the limit
/// `g(0+) = 1`.
pub fn comparison_factor_sup() -> (f64, f64) {
    let mut best = (0.0, 1.0);
    let steps = 4000;
    let (lo, hi) = (libm::log(1e-6), libm::log(50.0));
    let mut best_i = 0;
    for i in 0..=steps {
        let z = libm::exp(lo + (hi - lo) * i as f64 / steps as f64);
        let g = comparison_factor(z);
        if g > best.1 {
            best = (z, g);
            best_i = i;
        }
    }
    let at = |i: i64| libm::exp(lo + (hi - lo) * (i.clamp(0, steps as i64)) as f64 / steps as f64);
    let (a, b) = (at(best_i as i64 - 1), at(best_i as i64 + 1));
    let (z, g) = golden_max(comparison_factor, a, b, 100);
    if g > best.1 {
        best = (z, g);
    }
    best
}

fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    let r = (libm::sqrt(5.0) - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iters {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    if fc > fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// `c_2 = e^{1/2} sup g / √(2πε)`.
pub fn c2_constant(epsilon: f64) -> f64 {
    libm::exp(0.5) * comparison_factor_sup().1 / libm::sqrt(2.0 * PI * epsilon)
}

/// Both sides of the conditional-sum inequality for one pair of sibling
/// subtrees.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConditionalSumBound {
    pub z: f64,
    /// `Σ_{i,j} P(Z_n(J_j) | Z_n(I_i))` over the leftmost sibling pair at level `ℓ+1`.
    pub lhs: f64,
    /// `1 + S(z)/√(2πε)`.
    pub rhs: f64,
    /// `1 + c_2 a_ℓ / 2^{ℓ−n}`.
    pub rhs_simplified: f64,
}

/// Evaluates the conditional-probability sum for the first two children of the
/// leftmost level-`ℓ` interval against its series and simplified bounds.
pub fn conditional_sum_bound(
    cf: &CantorFunction,
    n: usize,
    ell: usize,
) -> Result<ConditionalSumBound, AnalysisError> {
    if cf.branching() != 2 {
        return Err(AnalysisError::InvalidArgument(
            "conditional sums are defined for k = 2",
        ));
    }
    if ell >= n {
        return Err(AnalysisError::InvalidArgument("requires 0 ≤ ℓ < n"));
    }
    let eps = cf.spec().epsilon;
    let half = 1u64 << (n - ell - 1);
    let mut s = Vec::with_capacity(2 * half as usize);
    for i in 0..2 * half {
        s.push(cf.node(n, i)?);
    }
    let p: Vec<f64> = s
        .iter()
        .map(|x| {
            let r = libm::sqrt(x.right);
            norm_interval(x.f_left() / r, x.f_right() / r)
        })
        .collect();
    let mut lhs = 0.0;
    for i in 0..half as usize {
        let a = &s[i];
        for b in &s[half as usize..] {
            let q = joint_z(
                a.right,
                a.f_left(),
                a.f_right(),
                b.right,
                b.f_left(),
                b.f_right(),
                a.right_gap(b),
            );
            lhs += q / p[i];
        }
    }
    let z = libm::pow(2.0, ell as f64 - n as f64) / cf.a(ell);
    let sv = s_function(z, 64);
    Ok(ConditionalSumBound {
        z,
        lhs,
        rhs: 1.0 + sv.value / libm::sqrt(2.0 * PI * eps),
        rhs_simplified: 1.0 + c2_constant(eps) / z,
    })
}

/// `2 Σ_{ℓ=0}^{n} (2^{−(n−ℓ)} + c_2 a_ℓ)`, the second-moment roll-up.
pub fn second_moment_rollup(cf: &CantorFunction, n: usize) -> f64 {
    let c2 = c2_constant(cf.spec().epsilon);
    (0..=n)
        .map(|l| libm::pow(2.0, l as f64 - n as f64) + c2 * cf.a(l))
        .sum::<f64>()
        * 2.0
}

/// Bracketing quantities `(b_ℓ)^{−1/2} k^{−n}` and `(ε b_ℓ)^{−1/2} k^{−n}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EasyBounds {
    pub lo: f64,
    pub hi: f64,
}

pub fn easy_conditional_bounds(cf: &CantorFunction, n: usize, ell: usize) -> EasyBounds {
    let scale = libm::pow(cf.branching() as f64, -(n as f64));
    let b = cf.b(ell);
    EasyBounds {
        lo: scale / libm::sqrt(b),
        hi: scale / libm::sqrt(cf.spec().epsilon * b),
    }
}

/// Constants fitted so that every oracle conditional lies in
/// `[ĉ_3 · lo, ĉ_4 · hi]`.
#[derive(Clone, Debug, PartialEq)]
pub struct FittedConditionals {
    pub c3: f64,
    pub c4: f64,
    /// Largest conditional per common-ancestor level, with the pair realizing it.
    pub max_by_level: Vec<(f64, usize, usize)>,
}

pub fn fit_conditional_constants(
    cf: &CantorFunction,
    oracle: &crate::events::ZOracle,
) -> Result<FittedConditionals, AnalysisError> {
    let n = oracle.level;
    let m = oracle.len();
    let mut c3 = f64::INFINITY;
    let mut c4 = 0.0f64;
    let mut max_by_level = alloc::vec![(0.0, 0, 0); n];
    for i in 0..m {
        let ni = cf.node(n, i as u64)?;
        for j in i + 1..m {
            let nj = cf.node(n, j as u64)?;
            let ell = crate::cantor::common_ancestor_level(&ni, &nj)?;
            let q = oracle.conditional(i, j);
            let eb = easy_conditional_bounds(cf, n, ell);
            c3 = c3.min(q / eb.lo);
            c4 = c4.max(q / eb.hi);
            if q > max_by_level[ell].0 {
                max_by_level[ell] = (q, i, j);
            }
        }
    }
    Ok(FittedConditionals {
        c3,
        c4,
        max_by_level,
    })
}

/// Which addresses count as balanced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BalanceRule {
    /// At least `n/3` zeros.
    ZeroFractionThird,
    /// `Σ v_i / a_i ≤ d_n = ½ Σ 1/a_i`.
    WeightedSum,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CensusReport {
    pub n: usize,
    pub rule: BalanceRule,
    pub d_n: Option<f64>,
    pub balanced_count: u64,
    pub unbalanced_count: u64,
    /// Exponential Chebyshev bound on the unbalanced fraction.
    pub chebyshev_bound: f64,
    /// Optimizing exponential parameter.
    pub theta: f64,
}

impl CensusReport {
    pub fn unbalanced_fraction(&self) -> f64 {
        self.unbalanced_count as f64 / libm::pow(2.0, self.n as f64)
    }
}

/// Largest level the census accepts.
pub const CENSUS_MAX_LEVEL: usize = 40;

fn weighted_unbalanced(s: f64, d: f64) -> bool {
    s > d + 1e-9 * d.abs().max(1.0)
}

/// `ln( e^{−θd} Π ½(1 + e^{θ w_i}) )`.
fn log_chebyshev(theta: f64, d: f64, w: &[f64]) -> f64 {
    let mut acc = -theta * d;
    for &wi in w {
        // ln(½(1 + e^{x})) computed without overflow
        let x = theta * wi;
        acc += if x > 0.0 {
            x + libm::log1p(libm::exp(-x)) - core::f64::consts::LN_2
        } else {
            libm::log1p(libm::exp(x)) - core::f64::consts::LN_2
        };
    }
    acc
}

/// `min_θ e^{−θd} Π ½(1 + e^{θ w_i})` by golden-section search on
/// `ln θ ∈ [ln 1e−3, ln 1e3]`.
pub fn chebyshev_bound(d: f64, weights: &[f64]) -> (f64, f64) {
    let f = |u: f64| -log_chebyshev(libm::exp(u), d, weights);
    let (u, v) = golden_max(f, libm::log(1e-3), libm::log(1e3), 200);
    let mut best = (libm::exp(u), -v);
    for u in [libm::log(1e-3), libm::log(1e3)] {
        let val = log_chebyshev(libm::exp(u), d, weights);
        if val < best.1 {
            best = (libm::exp(u), val);
        }
    }
    (libm::exp(best.1), best.0)
}

fn binomial_row(n: usize) -> Vec<u64> {
    let mut row = alloc::vec![1u64; n + 1];
    for i in 1..n {
        row[i] = row[i - 1] * (n - i + 1) as u64 / i as u64;
    }
    row
}

/// Exact balanced/unbalanced counts at level `n` and the exponential
/// Chebyshev bound on the unbalanced fraction.
pub fn census(
    spec: &SequenceSpec,
    n: usize,
    rule: BalanceRule,
) -> Result<CensusReport, AnalysisError> {
    if n == 0 || n > CENSUS_MAX_LEVEL {
        return Err(AnalysisError::InvalidArgument(
            "census level must be in 1..=40",
        ));
    }
    let total = 1u64 << n;
    match rule {
        BalanceRule::ZeroFractionThird => {
            // unbalanced ⇔ 3·zeros < n
            let row = binomial_row(n);
            let unbalanced: u64 = (0..=n).filter(|z| 3 * z < n).map(|z| row[z]).sum();
            // unbalanced ⇔ ones > 2n/3
            let w = alloc::vec![1.0; n];
            let (bound, theta) = chebyshev_bound(2.0 * n as f64 / 3.0, &w);
            Ok(CensusReport {
                n,
                rule,
                d_n: None,
                balanced_count: total - unbalanced,
                unbalanced_count: unbalanced,
                chebyshev_bound: bound,
                theta,
            })
        }
        BalanceRule::WeightedSum => {
            let a = generate_a(spec, n)?;
            let w: Vec<f64> = a.iter().map(|x| 1.0 / x).collect();
            let d = 0.5 * w.iter().sum::<f64>();
            let unbalanced = count_weighted_unbalanced(&w, d);
            let (bound, theta) = chebyshev_bound(d, &w);
            Ok(CensusReport {
                n,
                rule,
                d_n: Some(d),
                balanced_count: total - unbalanced,
                unbalanced_count: unbalanced,
                chebyshev_bound: bound,
                theta,
            })
        }
    }
}

fn subset_sums(w: &[f64]) -> Vec<f64> {
    let mut sums = alloc::vec![0.0];
    for &x in w {
        let len = sums.len();
        for i in 0..len {
            sums.push(sums[i] + x);
        }
    }
    sums
}

/// Meet-in-the-middle count of `v ∈ {0,1}^n` with `Σ v_i w_i > d`.
fn count_weighted_unbalanced(w: &[f64], d: f64) -> u64 {
    let (lo, hi) = w.split_at(w.len() / 2);
    let mut left = subset_sums(lo);
    left.sort_by(f64::total_cmp);
    let right = subset_sums(hi);
    let mut count = 0u64;
    for r in right {
        // first left sum making the total unbalanced
        let idx = left.partition_point(|l| !weighted_unbalanced(l + r, d));
        count += (left.len() - idx) as u64;
    }
    count
}

/// Enumerates all `2^n` addresses; used to cross-check [`census`].
pub fn census_brute_force(
    spec: &SequenceSpec,
    n: usize,
    rule: BalanceRule,
) -> Result<(u64, u64), AnalysisError> {
    if n > 24 {
        return Err(AnalysisError::InvalidArgument(
            "enumeration is limited to n ≤ 24",
        ));
    }
    let w: Vec<f64> = match rule {
        BalanceRule::ZeroFractionThird => Vec::new(),
        BalanceRule::WeightedSum => generate_a(spec, n)?.iter().map(|x| 1.0 / x).collect(),
    };
    let d = 0.5 * w.iter().sum::<f64>();
    let mut unbalanced = 0u64;
    for v in 0u64..(1 << n) {
        let bad = match rule {
            BalanceRule::ZeroFractionThird => 3 * (n as u32 - v.count_ones()) < n as u32,
            BalanceRule::WeightedSum => {
                // bit n−i holds v_i
                let s: f64 = (0..n)
                    .filter(|i| v >> (n - 1 - i) & 1 == 1)
                    .map(|i| w[i])
                    .sum();
                weighted_unbalanced(s, d)
            }
        };
        unbalanced += bad as u64;
    }
    Ok(((1u64 << n) - unbalanced, unbalanced))
}

/// Whether a binary address is balanced.
pub fn is_balanced(address: &[u8], rule: BalanceRule, weights: &[f64]) -> bool {
    match rule {
        BalanceRule::ZeroFractionThird => {
            3 * address.iter().filter(|v| **v == 0).count() >= address.len()
        }
        BalanceRule::WeightedSum => {
            let d = 0.5 * weights.iter().sum::<f64>();
            let s: f64 = address
                .iter()
                .zip(weights)
                .filter(|(v, _)| **v == 1)
                .map(|(_, w)| w)
                .sum();
            !weighted_unbalanced(s, d)
        }
    }
}

/// Lower bounds on `E(Z_{b_n} | A_I)` for a balanced address.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BalancedBound {
    /// Sum over `v_ℓ = 0`, `εa_ℓ² ≤ 1/4`, of the triangle estimate.
    pub triangle: f64,
    /// Sum over `v_ℓ = 0`, `εa_ℓ² > 1/4`, with prefactor `1/(2√(2π) a_ℓ)`.
    pub rectangle: f64,
    /// The same sum with prefactor `1/(2√(2ε) a_ℓ)`.
    pub rectangle_variant: f64,
    /// `triangle + rectangle`.
    pub total: f64,
    /// `triangle + rectangle_variant`.
    pub total_variant: f64,
    /// `Σ √(ε/π) ∫_x^{x+y} e^{−t²} dt` before the triangle/rectangle step.
    pub integral_form: f64,
    /// The Gaussian sum before integration, when `n ≤ 24`.
    pub discrete_form: Option<f64>,
}

/// Per-level pieces of [`BalancedBound`] for `ℓ = 1..=n−2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BalancedTerm {
    pub ell: usize,
    pub branch_value: f64,
    pub variant_value: f64,
    pub integral: f64,
    pub triangle_branch: bool,
}

pub fn balanced_terms(spec: &SequenceSpec, n: usize) -> Result<Vec<BalancedTerm>, AnalysisError> {
    let a = generate_a(spec, n.max(1))?;
    let eps = spec.epsilon;
    let root = libm::sqrt(2.0 * eps);
    let mut out = Vec::new();
    for ell in 1..n.saturating_sub(1) {
        let al = a[ell - 1];
        let p = libm::pow(2.0, ell as f64 - n as f64);
        let x = (p + 0.5) / (root * al);
        let xy = (p + 1.0) / (root * al);
        let integral = libm::sqrt(eps) / 2.0 * (libm::erfc(x) - libm::erfc(xy));
        let triangle_branch = eps * al * al <= 0.25;
        let (branch_value, variant_value) = if triangle_branch {
            let v =
                libm::sqrt(2.0) * eps * al / (4.0 * libm::sqrt(PI) * (p + 0.5)) * libm::exp(-x * x);
            (v, v)
        } else {
            let g = libm::exp(-xy * xy);
            (
                g / (2.0 * libm::sqrt(2.0 * PI) * al),
                g / (2.0 * libm::sqrt(2.0 * eps) * al),
            )
        };
        out.push(BalancedTerm {
            ell,
            branch_value,
            variant_value,
            integral,
            triangle_branch,
        });
    }
    Ok(out)
}

pub fn balanced_first_moment_lower(
    spec: &SequenceSpec,
    n: usize,
    address: &[u8],
) -> Result<BalancedBound, AnalysisError> {
    if address.len() != n {
        return Err(AnalysisError::InvalidArgument(
            "address length must equal n",
        ));
    }
    let terms = balanced_terms(spec, n)?;
    let mut b = BalancedBound {
        triangle: 0.0,
        rectangle: 0.0,
        rectangle_variant: 0.0,
        total: 0.0,
        total_variant: 0.0,
        integral_form: 0.0,
        discrete_form: None,
    };
    for t in terms.iter().filter(|t| address[t.ell - 1] == 0) {
        if t.triangle_branch {
            b.triangle += t.branch_value;
        } else {
            b.rectangle += t.branch_value;
            b.rectangle_variant += t.variant_value;
        }
        b.integral_form += t.integral;
    }
    b.total = b.triangle + b.rectangle;
    b.total_variant = b.triangle + b.rectangle_variant;
    if n <= 24 {
        let a = generate_a(spec, n.max(1))?;
        let eps = spec.epsilon;
        let mut sum = 0.0;
        for t in terms.iter().filter(|t| address[t.ell - 1] == 0) {
            let al = a[t.ell - 1];
            let p = libm::pow(2.0, t.ell as f64 - n as f64);
            let m = 1u64 << (n - t.ell - 1);
            let pre = p / (libm::sqrt(2.0 * PI) * al);
            for j in 1..=m {
                let u = (j + m) as f64 * p / (libm::sqrt(eps) * al);
                sum += pre * libm::exp(-0.5 * u * u);
            }
        }
        b.discrete_form = Some(sum);
    }
    Ok(b)
}

/// `C(n)`: the smallest [`BalancedBound::total`] over addresses with at
/// least `n/3` zeros. Zeros at `ℓ ∈ {n−1, n}` contribute nothing, so the
/// minimum places zeros at the cheapest levels.
pub fn balanced_uniform_bound(spec: &SequenceSpec, n: usize) -> Result<f64, AnalysisError> {
    let mut vals: Vec<f64> = balanced_terms(spec, n)?
        .iter()
        .map(|t| t.branch_value)
        .collect();
    vals.extend([0.0, 0.0].iter().take(n.min(2)));
    vals.sort_by(f64::total_cmp);
    let need = n.div_ceil(3);
    Ok(vals.iter().take(need).sum())
}

/// Budget inequality `1 ≥ E(Z_{b_n}) ≥ Σ_{I balanced} E(Z_{b_n} | A_I) P(A_I)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BudgetCheck {
    pub lhs: f64,
    pub mean_z: Estimate,
    /// `Σ_I bound(I) · P̂(A_I)`.
    pub rhs: Estimate,
    /// `P̂(Y_n(I) for some balanced I)`.
    pub p_balanced_y: Estimate,
    /// `C(n)` and the implied bound `1/C(n)`.
    pub c_n: f64,
    pub implied_bound: f64,
}

#[derive(Clone, Debug)]
struct BudgetAcc {
    /// Per-batch counts of `A_I`, row-major `[batch][interval]`.
    leftmost: Vec<u32>,
    z: IntBatches,
    any: IntBatches,
    scratch: Vec<f64>,
}

impl Accumulator for BudgetAcc {
    fn merge(&mut self, other: Self) {
        for (a, b) in self.leftmost.iter_mut().zip(other.leftmost) {
            *a += b;
        }
        self.z.merge(other.z);
        self.any.merge(other.any);
    }
}

/// Monte Carlo check of the first-moment budget under [`BalanceRule::ZeroFractionThird`].
pub fn first_moment_budget_check<F: Fanout>(
    cf: &CantorFunction,
    n: usize,
    replicates: u64,
    seed: u64,
    fanout: &F,
) -> Result<BudgetCheck, AnalysisError> {
    if cf.branching() != 2 {
        return Err(AnalysisError::InvalidArgument(
            "binary addresses require k = 2",
        ));
    }
    let spec = cf.spec();
    let lg = LevelGrid::new(cf, n)?;
    let m = lg.intervals();
    let nodes = cf.level_nodes(n)?;
    let mut bound = alloc::vec![0.0; m];
    let mut balanced = alloc::vec![false; m];
    for (i, node) in nodes.iter().enumerate() {
        let addr = node.address();
        if is_balanced(&addr, BalanceRule::ZeroFractionThird, &[]) {
            balanced[i] = true;
            bound[i] = balanced_first_moment_lower(spec, n, &addr)?.total;
        }
    }
    let acc = fanout.run(
        replicates,
        || BudgetAcc {
            leftmost: alloc::vec![0; BATCHES * m],
            z: IntBatches::default(),
            any: IntBatches::default(),
            scratch: alloc::vec![0.0; lg.points()],
        },
        |acc, r| {
            let s = level_seed(seed, n, r);
            let mut values = core::mem::take(&mut acc.scratch);
            lg.sample(s, &mut values);
            let mut z = 0;
            let mut first = None;
            for i in 0..m {
                z += lg.z_hit(&values, i) as u64;
                if first.is_none() && balanced[i] && lg.y_hit(&values, i, YMode::Exact, s) {
                    first = Some(i);
                }
            }
            acc.scratch = values;
            acc.z.add(r, z);
            acc.any.add(r, first.is_some() as u64);
            if let Some(i) = first {
                acc.leftmost[(r % BATCHES as u64) as usize * m + i] += 1;
            }
        },
    );
    let mut batch_rhs = Vec::new();
    let mut total = 0.0;
    let batch_n = {
        let mut v = alloc::vec![0u64; BATCHES];
        for r in 0..replicates.min(BATCHES as u64) {
            v[r as usize] = (replicates - r).div_ceil(BATCHES as u64);
        }
        v
    };
    for b in 0..BATCHES {
        if batch_n[b] == 0 {
            continue;
        }
        let row = &acc.leftmost[b * m..(b + 1) * m];
        let s: f64 = row.iter().zip(&bound).map(|(c, w)| *c as f64 * w).sum();
        total += s;
        batch_rhs.push(s / batch_n[b] as f64);
    }
    let c_n = balanced_uniform_bound(spec, n)?;
    Ok(BudgetCheck {
        lhs: 1.0,
        mean_z: acc.z.estimate(),
        rhs: Estimate {
            value: total / replicates as f64,
            se: batch_se(&batch_rhs),
        },
        p_balanced_y: acc.any.estimate(),
        c_n,
        implied_bound: if c_n > 0.0 { 1.0 / c_n } else { f64::INFINITY },
    })
}

/// Trend of a LIL profile.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LilClass {
    Diverging,
    Vanishing,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LilProfile {
    pub t: f64,
    /// Levels `ℓ` used.
    pub levels: Vec<usize>,
    /// Bracket scales `b_ℓ`, strictly decreasing.
    pub scales: Vec<f64>,
    /// Exact `|f(s_ℓ) − f(t)| = k^{−(ℓ+1)}` for `s_ℓ` at distance `b_{ℓ+1}`.
    pub increments: Vec<f64>,
    /// `k^{−(ℓ+1)} / √(2 b_ℓ ln ln(1/b_ℓ))`.
    pub ratios: Vec<f64>,
    pub class: LilClass,
}

/// Number of trailing ratios the classifier inspects.
pub const LIL_WINDOW: usize = 5;

pub fn classify_lil(ratios: &[f64]) -> LilClass {
    if ratios.len() < LIL_WINDOW {
        return LilClass::Inconclusive;
    }
    let tail = &ratios[ratios.len() - LIL_WINDOW..];
    let increasing = tail.windows(2).all(|w| w[1] > w[0]);
    let decreasing = tail.windows(2).all(|w| w[1] < w[0]);
    if tail.iter().all(|r| *r > 1.5) && increasing {
        LilClass::Diverging
    } else if tail.iter().all(|r| *r < 0.75) && decreasing {
        LilClass::Vanishing
    } else {
        LilClass::Inconclusive
    }
}

/// LIL ratio profile at an endpoint `t` of the construction. For each level
/// `ℓ` from the anchor's level up to `depth − 1`, the companion point `s_ℓ`
/// is the far endpoint of the level-`(ℓ+1)` interval at `t`; the ratio uses
/// the scale bracket `b_{ℓ+1} ≤ |s − t| ≤ b_ℓ` at its upper end, which bounds
/// the LIL ratio from below over the bracket.
pub fn lil_profile(cf: &CantorFunction, t: f64, depth: usize) -> Result<LilProfile, AnalysisError> {
    let depth = depth.min(cf.depth());
    let mut anchor = None;
    for m in 0..=depth {
        if let Some(node) = cf.locate(t, m)? {
            if node.left == t || node.right == t {
                anchor = Some(m);
                break;
            }
        }
    }
    let m0 = anchor.ok_or(AnalysisError::AnchorNotEndpoint(t))?;
    let k = cf.branching() as f64;
    let mut p = LilProfile {
        t,
        levels: Vec::new(),
        scales: Vec::new(),
        increments: Vec::new(),
        ratios: Vec::new(),
        class: LilClass::Inconclusive,
    };
    for ell in m0..depth {
        let b = cf.b(ell);
        if !(b < 1.0 / E) {
            continue;
        }
        let inc = libm::pow(k, -((ell + 1) as f64));
        let ll = libm::log(libm::log(1.0 / b));
        p.levels.push(ell);
        p.scales.push(b);
        p.increments.push(inc);
        p.ratios.push(inc / libm::sqrt(2.0 * b * ll));
    }
    p.class = classify_lil(&p.ratios);
    Ok(p)
}

/// One `|J|` of a cut sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CutEstimate {
    pub j_lo: f64,
    pub j_hi: f64,
    /// Covering level (largest `n` with `|J| ≤ k^{−n}`).
    pub level: usize,
    /// First of the two consecutive covering intervals.
    pub first_index: u64,
    pub estimate: Estimate,
    /// `estimate / |J|`.
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CutSweep {
    pub cuts: Vec<CutEstimate>,
    /// Least-squares slope of `ln estimate` against `ln |J|`.
    pub slope: f64,
    /// Monte Carlo `P(0 ≤ B(1) ≤ 1)` from the same paths.
    pub alpha_mc: Estimate,
    pub alpha_exact: f64,
    /// Level at which the zero event is proxied.
    pub proxy_level: usize,
}

/// `P(0 ≤ B(1) ≤ 1) = Φ(1) − Φ(0)`.
pub fn alpha_anchor() -> f64 {
    norm_cdf(1.0) - norm_cdf(0.0)
}

fn covering(j: (f64, f64), k: u32, max_level: usize) -> (usize, u64) {
    let len = j.1 - j.0;
    let kf = k as f64;
    let mut n = 0;
    while n < max_level && len <= libm::pow(kf, -((n + 1) as f64)) {
        n += 1;
    }
    let count = (k as u64).pow(n as u32);
    let first = ((j.0 * count as f64) as u64).min(count.saturating_sub(2));
    (n, first)
}

#[derive(Clone, Debug)]
struct CutAcc {
    hits: Vec<IntBatches>,
    alpha: IntBatches,
    scratch: Vec<f64>,
}

impl Accumulator for CutAcc {
    fn merge(&mut self, other: Self) {
        for (a, b) in self.hits.iter_mut().zip(other.hits) {
            a.merge(b);
        }
        self.alpha.merge(other.alpha);
    }
}

/// Estimates `P(Z(C_b ∩ f_b^{-1}(J)))` for several value windows `J` from
/// common paths. The zero event in the two covering intervals is proxied by
/// `Z_D` firing at one of their level-`D` descendants.
pub fn cut_probability_sweep<F: Fanout>(
    cf: &CantorFunction,
    windows: &[(f64, f64)],
    proxy_level: usize,
    replicates: u64,
    seed: u64,
    fanout: &F,
) -> Result<CutSweep, AnalysisError> {
    let d = proxy_level;
    if d > cf.depth() {
        return Err(AnalysisError::InvalidArgument(
            "proxy level exceeds the built depth",
        ));
    }
    let k = cf.branching() as u64;
    let lg = LevelGrid::new(cf, d)?;
    let one = lg.grid.index_of(1.0).expect("1 is an endpoint");
    // descendant ranges [lo, hi) at level D for each window
    let mut ranges = Vec::with_capacity(windows.len());
    let mut meta = Vec::with_capacity(windows.len());
    for &w in windows {
        if !(w.1 > w.0 && w.0 >= 0.0 && w.1 <= 1.0) {
            return Err(AnalysisError::InvalidArgument("windows must lie in [0, 1]"));
        }
        let (n, first) = covering(w, cf.branching(), d);
        let span = k.pow((d - n) as u32);
        let last = (first + 2).min(k.pow(n as u32));
        ranges.push((first * span, last * span));
        meta.push((n, first));
    }
    let acc = fanout.run(
        replicates,
        || CutAcc {
            hits: alloc::vec![IntBatches::default(); windows.len()],
            alpha: IntBatches::default(),
            scratch: alloc::vec![0.0; lg.points()],
        },
        |acc, r| {
            let s = level_seed(seed, d, r);
            let mut values = core::mem::take(&mut acc.scratch);
            lg.sample(s, &mut values);
            for (w, &(lo, hi)) in ranges.iter().enumerate() {
                let hit = (lo..hi).any(|i| lg.z_hit(&values, i as usize));
                acc.hits[w].add(r, hit as u64);
            }
            let b1 = values[one];
            acc.alpha.add(r, (0.0..=1.0).contains(&b1) as u64);
            acc.scratch = values;
        },
    );
    let mut cuts = Vec::with_capacity(windows.len());
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for (w, est) in windows.iter().zip(&acc.hits) {
        let e = est.estimate();
        let (n, first) = meta[cuts.len()];
        let len = w.1 - w.0;
        if e.value > 0.0 {
            xs.push(libm::log(len));
            ys.push(libm::log(e.value));
        }
        cuts.push(CutEstimate {
            j_lo: w.0,
            j_hi: w.1,
            level: n,
            first_index: first,
            estimate: e,
            ratio: e.value / len,
        });
    }
    let slope = if xs.len() >= 2 {
        linear_fit(&xs, &ys).0
    } else {
        f64::NAN
    };
    Ok(CutSweep {
        cuts,
        slope,
        alpha_mc: acc.alpha.estimate(),
        alpha_exact: alpha_anchor(),
        proxy_level: d,
    })
}

/// Single-window version of [`cut_probability_sweep`].
pub fn cut_probability_bound<F: Fanout>(
    cf: &CantorFunction,
    j: (f64, f64),
    proxy_level: usize,
    replicates: u64,
    seed: u64,
    fanout: &F,
) -> Result<CutEstimate, AnalysisError> {
    Ok(cut_probability_sweep(cf, &[j], proxy_level, replicates, seed, fanout)?.cuts[0])
}

/// Centered windows of length `k^{−m}` for `m = 1..=m_max`.
pub fn halving_windows(k: u32, m_max: usize) -> Vec<(f64, f64)> {
    (1..=m_max)
        .map(|m| {
            let len = libm::pow(k as f64, -(m as f64));
            (0.5 - len / 2.0, 0.5 + len / 2.0)
        })
        .collect()
}

/// Exclusion windows at one level of the isolated-zone construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZoneLevel {
    pub n: usize,
    /// `a'_n = √a_n`.
    pub a_prime: f64,
    /// `½ √b'_n = ½ k^{−n} a'_n`.
    pub half_width: f64,
    /// `k^n + 1` windows centred at `j k^{−n}`.
    pub windows: u64,
}

impl ZoneLevel {
    /// `J_{j,n}`.
    pub fn window(&self, k: u32, j: u64) -> (f64, f64) {
        let c = j as f64 * libm::pow(k as f64, -(self.n as f64));
        (c - self.half_width, c + self.half_width)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IsolatedZone {
    pub n0: usize,
    /// `n_0` recomputed with `2ĉ_1` and `ĉ_1/2`, bracketing the effect of the
    /// estimation error in `ĉ_1`.
    pub n0_if_c1_doubled: usize,
    pub n0_if_c1_halved: usize,
    /// `p̂ / (2ĉ_1)`.
    pub threshold: f64,
    /// `Σ_{n≥n_0} a'_n`.
    pub tail_sum: f64,
    /// Window layout for `n_0 ≤ n ≤` built depth (empty if `n_0` lies deeper).
    pub levels: Vec<ZoneLevel>,
    /// `Σ_{n≥n_0} (k^n + 1) k^{-n} a'_n`, an upper bound on the measure of `M_{n_0}`.
    pub measure: f64,
    /// `2 Σ_{n≥n_0} a'_n`.
    pub measure_bound: f64,
    /// First level with `b_n < b'_n < k^{−2n}` (i.e. `a_n < 1`).
    pub valid_from: usize,
    pub surviving_probability: f64,
}

/// Tail sums `T(n) = Σ_{m≥n} √a_m` for `n = 1..=len`.
fn sqrt_tails(spec: &SequenceSpec, horizon: usize) -> Result<Vec<f64>, AnalysisError> {
    let terms: Vec<f64> = generate_a(spec, horizon)?
        .iter()
        .map(|a| libm::sqrt(*a))
        .collect();
    let remainder = match &spec.kind {
        SequenceKind::Geometric { x } => {
            let r = 1.0 / libm::sqrt(*x);
            terms[horizon - 1] * r / (1.0 - r)
        }
        SequenceKind::Power { d } if *d > 2.0 => {
            let e = d / 2.0;
            libm::pow(horizon as f64, 1.0 - e) / (e - 1.0)
        }
        SequenceKind::Custom(_) => {
            let h = ConvergenceHeuristic::default();
            let window = &terms[horizon / 2..];
            if !h.looks_summable(window) {
                return Err(AnalysisError::InvalidArgument("Σ √a_n does not converge"));
            }
            let r = window.windows(2).map(|w| w[1] / w[0]).fold(0.0, f64::max);
            terms[horizon - 1] * r / (1.0 - r)
        }
        _ => return Err(AnalysisError::InvalidArgument("Σ √a_n does not converge")),
    };
    let mut tails = alloc::vec![0.0; horizon + 1];
    tails[horizon] = remainder;
    for n in (1..=horizon).rev() {
        tails[n - 1] = tails[n] + terms[n - 1];
    }
    // tails[i] = Σ_{m ≥ i+1}
    Ok(tails)
}

fn first_below(tails: &[f64], threshold: f64, from: usize) -> usize {
    (from.max(1)..=tails.len())
        .find(|&n| tails[n - 1] <= threshold)
        .unwrap_or(tails.len())
}

/// Chooses `a'_n = √a_n`, finds `n_0` with `Σ_{n≥n_0} a'_n ≤ p̂/(2ĉ_1)`, and
/// describes the exclusion windows through the built depth.
pub fn isolated_zone_construction(
    cf: &CantorFunction,
    p_hat: f64,
    c1_hat: f64,
) -> Result<IsolatedZone, AnalysisError> {
    if !(p_hat > 0.0 && c1_hat > 0.0) {
        return Err(AnalysisError::InvalidArgument("p̂ and ĉ_1 must be positive"));
    }
    let spec = cf.spec();
    let verdict = classify(
        spec,
        64.min(spec.table_len().unwrap_or(64)).max(16),
        ConvergenceHeuristic::default(),
    );
    if !(verdict.positive_by_sum_a && verdict.verdict == Verdict::PositiveProbability) {
        return Err(AnalysisError::RegimeMismatch);
    }
    let horizon = spec.table_len().unwrap_or(256);
    let tails = sqrt_tails(spec, horizon)?;
    let a = generate_a(spec, horizon)?;
    let valid_from = a.iter().position(|x| *x < 1.0).map_or(horizon, |i| i + 1);
    let threshold = p_hat / (2.0 * c1_hat);
    let n0 = first_below(&tails, threshold, valid_from);
    let n0_if_c1_doubled = first_below(&tails, threshold / 2.0, valid_from);
    let n0_if_c1_halved = first_below(&tails, threshold * 2.0, valid_from);
    let k = cf.branching();
    let kf = k as f64;
    let mut measure = tails[horizon] * (1.0 + libm::pow(kf, -(horizon as f64)));
    for n in n0..=horizon {
        measure += libm::sqrt(a[n - 1]) * (1.0 + libm::pow(kf, -(n as f64)));
    }
    let bound = 2.0 * tails[n0 - 1];
    let mut levels = Vec::new();
    for n in n0..=cf.depth() {
        let ap = libm::sqrt(cf.a(n));
        let half_width = 0.5 * libm::pow(kf, -(n as f64)) * ap;
        levels.push(ZoneLevel {
            n,
            a_prime: ap,
            half_width,
            windows: (k as u64).pow(n as u32) + 1,
        });
    }
    Ok(IsolatedZone {
        n0,
        n0_if_c1_doubled,
        n0_if_c1_halved,
        threshold,
        tail_sum: tails[n0 - 1],
        levels,
        measure,
        measure_bound: bound,
        valid_from,
        surviving_probability: p_hat / 2.0,
    })
}

/// Hölder exponents from the sequence formula and from the construction.
#[derive(Clone, Debug, PartialEq)]
pub struct HolderDiagnostics {
    /// Limit of `−n ln k / ln a_n` when it stabilizes.
    pub paper_sigma: Option<f64>,
    /// The sequence `−n ln k / ln a_n`.
    pub paper_sequence: Vec<f64>,
    /// Slope of `ln ω(δ)` against `ln δ` for the modulus of continuity of
    /// `f_{b_D}` over dyadic `δ`.
    pub empirical_sigma: f64,
    /// `D ln k / (−ln b_D)`, the exponent implied by increments `k^{−D}` over
    /// scale `b_D`.
    pub scale_sigma: f64,
    pub depth: usize,
}

/// Largest number of breakpoints used for the modulus of continuity.
pub const HOLDER_MAX_INTERVALS: u64 = 1 << 13;

fn interp(xs: &[f64], ys: &[f64], t: f64) -> f64 {
    if t <= xs[0] {
        return ys[0];
    }
    if t >= xs[xs.len() - 1] {
        return ys[ys.len() - 1];
    }
    let i = xs.partition_point(|x| *x <= t);
    let (x0, x1) = (xs[i - 1], xs[i]);
    if x1 == x0 {
        return ys[i];
    }
    ys[i - 1] + (t - x0) / (x1 - x0) * (ys[i] - ys[i - 1])
}

pub fn holder_diagnostics(
    cf: &CantorFunction,
    depth: usize,
) -> Result<HolderDiagnostics, AnalysisError> {
    if depth < 8 {
        return Err(AnalysisError::InvalidArgument("depth must be at least 8"));
    }
    let k = cf.branching() as f64;
    let spec = cf.spec();
    let probe = spec.table_len().unwrap_or(256).min(256);
    let a = generate_a(spec, probe)?;
    let seq: Vec<f64> = a
        .iter()
        .enumerate()
        .map(|(i, an)| -((i + 1) as f64) * libm::log(k) / libm::log(*an))
        .collect();
    let paper_sigma = {
        let last = seq[seq.len() - 1];
        let mid = seq[seq.len() / 2];
        let stable = last.is_finite() && last > 0.0 && ((last - mid) / last).abs() < 1e-3;
        stable.then_some(last)
    };

    let mut d = depth.min(cf.depth());
    while cf.count(d) > HOLDER_MAX_INTERVALS {
        d -= 1;
    }
    let bp = cf.breakpoints(d)?;
    let xs: Vec<f64> = bp.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = bp.iter().map(|p| p.1).collect();
    let floor = cf.b(d - 1).max(cf.b(d) * 4.0);
    let (mut lx, mut ly) = (Vec::new(), Vec::new());
    let mut delta = 0.25;
    while delta >= floor {
        let mut w = 0.0f64;
        for &x in &xs {
            w = w.max(interp(&xs, &ys, x + delta) - interp(&xs, &ys, x));
            w = w.max(interp(&xs, &ys, x) - interp(&xs, &ys, x - delta));
        }
        lx.push(libm::log(delta));
        ly.push(libm::log(w));
        delta /= 2.0;
    }
    let empirical_sigma = if lx.len() >= 2 {
        linear_fit(&lx, &ly).0
    } else {
        f64::NAN
    };
    Ok(HolderDiagnostics {
        paper_sigma,
        paper_sequence: seq,
        empirical_sigma,
        scale_sigma: d as f64 * libm::log(k) / -libm::log(cf.b(d)),
        depth: d,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cantor::build_tree;
    use alloc::vec;

    fn binary(kind: SequenceKind, eps: f64) -> SequenceSpec {
        SequenceSpec::binary(kind, eps).unwrap()
    }

    #[test]
    fn s_large_z() {
        let v = s_function(10.0, 8);
        let want = 2.0 * 10.0 * libm::exp(-50.0);
        assert!(((v.value - want) / want).abs() < 1e-12);
        assert!((want - 3.857e-21).abs() < 1e-24);
    }

    #[test]
    fn s_bound_on_grid() {
        for i in 0..200 {
            let z = libm::pow(10.0, -2.0 + 3.0 * i as f64 / 199.0);
            assert!(s_function(z, 16).value < s_bound(z), "z={z}");
        }
    }

    #[test]
    fn s_doubling_is_stable() {
        for z in [0.01, 0.1, 0.5, 1.0, 3.0] {
            let a = s_function(z, 16);
            let b = s_function(z, 2 * a.terms);
            assert!(
                (a.value - b.value).abs() <= 1e-15 * a.value.max(1.0),
                "z={z}"
            );
        }
    }

    #[test]
    fn comparison_factor_is_bounded() {
        let (z, g) = comparison_factor_sup();
        assert!((1.0..2.0).contains(&g) && z > 0.0);
        for i in 1..1000 {
            assert!(comparison_factor(i as f64 / 100.0) <= g + 1e-12);
        }
    }

    #[test]
    fn conditional_sum_substitution() {
        let s = binary(SequenceKind::Geometric { x: 1.5 }, 0.5);
        let cf = build_tree(&s, 6).unwrap();
        let r = conditional_sum_bound(&cf, 6, 2).unwrap();
        let sv = s_function(r.z, 64).value;
        assert_eq!(r.rhs, 1.0 + sv / libm::sqrt(2.0 * PI * 0.5));
        assert!(r.lhs <= r.rhs && r.rhs <= r.rhs_simplified);
    }

    #[test]
    fn easy_bounds_ratio() {
        let s = binary(SequenceKind::Geometric { x: 1.5 }, 0.3);
        let cf = build_tree(&s, 4).unwrap();
        let e = easy_conditional_bounds(&cf, 4, 2);
        assert!((e.hi / e.lo - 1.0 / libm::sqrt(0.3)).abs() < 1e-12);
    }

    #[test]
    fn census_small_cases() {
        let s = binary(SequenceKind::Constant { a: 1.0 }, 0.25);
        let c = census(&s, 3, BalanceRule::ZeroFractionThird).unwrap();
        assert_eq!((c.balanced_count, c.unbalanced_count), (7, 1));
        let c1 = census(&s, 1, BalanceRule::ZeroFractionThird).unwrap();
        assert_eq!((c1.balanced_count, c1.unbalanced_count), (1, 1));
        // n = 20: zeros ≤ 6 are unbalanced
        let c20 = census(&s, 20, BalanceRule::ZeroFractionThird).unwrap();
        let row = binomial_row(20);
        assert_eq!(c20.unbalanced_count, row[..=6].iter().sum::<u64>());
        let c10 = census(&s, 10, BalanceRule::ZeroFractionThird).unwrap();
        assert!(c20.unbalanced_fraction() < c10.unbalanced_fraction());
    }

    #[test]
    fn census_matches_enumeration() {
        let lin = binary(SequenceKind::Linear, 0.1);
        for n in 1..=12 {
            for rule in [BalanceRule::ZeroFractionThird, BalanceRule::WeightedSum] {
                let c = census(&lin, n, rule).unwrap();
                let (b, u) = census_brute_force(&lin, n, rule).unwrap();
                assert_eq!(
                    (c.balanced_count, c.unbalanced_count),
                    (b, u),
                    "n={n} {rule:?}"
                );
                assert!(c.unbalanced_fraction() <= c.chebyshev_bound + 1e-15);
            }
        }
    }

    #[test]
    fn balanced_bound_examples() {
        let s = binary(SequenceKind::Constant { a: 1.0 }, 0.25);
        let ones = vec![1u8; 10];
        assert_eq!(
            balanced_first_moment_lower(&s, 10, &ones).unwrap().total,
            0.0
        );
        let b10 = balanced_first_moment_lower(&s, 10, &[0u8; 10]).unwrap();
        let b30 = balanced_first_moment_lower(&s, 30, &[0u8; 30]).unwrap();
        assert!(b30.total > b10.total);
        assert!(b10.integral_form >= b10.total);
        assert!(b10.discrete_form.unwrap() >= b10.integral_form);
    }

    #[test]
    fn lil_closed_forms() {
        let s = binary(SequenceKind::Constant { a: 1.0 }, 0.25);
        let cf = build_tree(&s, 30).unwrap();
        let p = lil_profile(&cf, 1.0, 30).unwrap();
        for (l, r) in p.levels.iter().zip(&p.ratios) {
            let b = libm::pow(4.0, -(*l as f64));
            let want = 0.5 * libm::pow(2.0, -(*l as f64))
                / libm::sqrt(2.0 * b * libm::log(libm::log(1.0 / b)));
            assert!((r - want).abs() < 1e-9);
        }
        assert_eq!(p.class, LilClass::Vanishing);
        assert!(matches!(
            lil_profile(&cf, 1.5, 30),
            Err(AnalysisError::AnchorNotEndpoint(_))
        ));
    }

    #[test]
    fn holder_geometric() {
        let x = 2.0;
        let s = binary(SequenceKind::Geometric { x }, 0.5);
        let cf = build_tree(&s, 12).unwrap();
        let h = holder_diagnostics(&cf, 12).unwrap();
        assert!((h.paper_sigma.unwrap() - libm::log(2.0) / libm::log(x)).abs() < 1e-12);
        let want = libm::log(2.0) / (2.0 * libm::log(2.0 * x));
        assert!((h.scale_sigma - want).abs() < 1e-12);
        let p = binary(SequenceKind::Power { d: 2.0 }, 0.5);
        let cf = build_tree(&p, 10).unwrap();
        assert_eq!(holder_diagnostics(&cf, 10).unwrap().paper_sigma, None);
    }

    #[test]
    fn isolated_zone_geometric() {
        let s = binary(SequenceKind::Geometric { x: 4.0 }, 0.5);
        let cf = build_tree(&s, 12).unwrap();
        let z = isolated_zone_construction(&cf, 0.3, 1.0).unwrap();
        assert!(z.tail_sum <= z.threshold);
        assert!(z.measure <= z.measure_bound + 1e-15);
        assert!(z.n0_if_c1_halved <= z.n0 && z.n0 <= z.n0_if_c1_doubled);
        let bigger = isolated_zone_construction(&cf, 0.6, 1.0).unwrap();
        assert!(bigger.n0 <= z.n0);
        let c = binary(SequenceKind::Constant { a: 0.5 }, 0.5);
        let cfc = build_tree(&c, 6).unwrap();
        assert_eq!(
            isolated_zone_construction(&cfc, 0.3, 1.0),
            Err(AnalysisError::RegimeMismatch)
        );
    }
}
