//! Gap sequences `(a_n)`, their interval scales `b_n = (k^{-n} a_n)^2`, the
//! structural gap conditions, and the zero-set classifier.
//!
//! Index conventions: `a_0 = 1` is fixed so that `b_0 = 1` and the initial
//! interval is `[1, 2]`; user-visible sequences start at `a_1`.

use alloc::vec::Vec;

use crate::error::SequenceError;

/// Level cap where plain `f64` scales remain comfortably representable.
pub const MAX_LEVEL: usize = 40;

/// Growth cap used for the head of [`SequenceKind::Linear`]: `a_n = min(n, 1.3^{n−1})`.
pub const LINEAR_HEAD_GROWTH: f64 = 1.3;

#[derive(Clone, Debug, PartialEq)]
pub enum SequenceKind {
    /// `a_n = x^{-n}`, `x > 1` (middle-`(1 - 1/x)` Cantor sets).
    Geometric { x: f64 },
    /// `a_n = n^{-d}`.
    Power { d: f64 },
    /// `a_n = a`.
    Constant { a: f64 },
    /// `a_n = (ln n)^{-1/2}` for `n ≥ 2`, with `a_1 = a_2`.
    InverseLogSqrt,
    /// `a_n = n` for large `n`; the head is capped at `1.3^{n−1}` so that gaps
    /// stay open under the fixed `a_0 = 1`.
    Linear,
    /// Explicit table `a_1, a_2, ...`.
    Custom(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SequenceSpec {
    pub kind: SequenceKind,
    /// Number of children per interval, `k ≥ 2`.
    pub branching: u32,
    /// The `ε` of the gap condition `a_n² − a_{n+1}²/k ≥ ε a_n²`.
    pub epsilon: f64,
}

impl SequenceSpec {
    pub fn new(kind: SequenceKind, branching: u32, epsilon: f64) -> Result<Self, SequenceError> {
        let spec = Self {
            kind,
            branching,
            epsilon,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Binary spec with the given `ε`.
    pub fn binary(kind: SequenceKind, epsilon: f64) -> Result<Self, SequenceError> {
        Self::new(kind, 2, epsilon)
    }

    pub fn validate(&self) -> Result<(), SequenceError> {
        if self.branching < 2 {
            return Err(SequenceError::BranchingTooSmall(self.branching));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(SequenceError::EpsilonOutOfRange(self.epsilon));
        }
        match &self.kind {
            SequenceKind::Geometric { x } if !(*x > 1.0 && x.is_finite()) => Err(
                SequenceError::InvalidParameter("geometric ratio x must exceed 1"),
            ),
            SequenceKind::Power { d } if !(*d > 0.0 && d.is_finite()) => Err(
                SequenceError::InvalidParameter("power exponent d must be positive"),
            ),
            SequenceKind::Constant { a } if !(*a > 0.0 && a.is_finite()) => Err(
                SequenceError::InvalidParameter("constant a must be positive"),
            ),
            SequenceKind::Custom(table) => {
                for (i, &v) in table.iter().enumerate() {
                    if !(v > 0.0 && v.is_finite()) {
                        return Err(SequenceError::NonPositiveEntry {
                            index: i + 1,
                            value: v,
                        });
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// `a_n` for `n ≥ 1` (closed-form kinds) or `None` past the end of a table.
    pub fn a(&self, n: usize) -> Option<f64> {
        if n == 0 {
            return Some(1.0);
        }
        let nf = n as f64;
        Some(match &self.kind {
            SequenceKind::Geometric { x } => libm::pow(*x, -nf),
            SequenceKind::Power { d } => libm::pow(nf, -*d),
            SequenceKind::Constant { a } => *a,
            SequenceKind::InverseLogSqrt => 1.0 / libm::sqrt(libm::log(nf.max(2.0))),
            SequenceKind::Linear => nf.min(libm::pow(LINEAR_HEAD_GROWTH, nf - 1.0)),
            SequenceKind::Custom(table) => return table.get(n - 1).copied(),
        })
    }

    /// Largest level this spec can describe (`None` for closed forms).
    pub fn table_len(&self) -> Option<usize> {
        match &self.kind {
            SequenceKind::Custom(t) => Some(t.len()),
            _ => None,
        }
    }

    pub fn is_closed_form(&self) -> bool {
        !matches!(self.kind, SequenceKind::Custom(_))
    }
}

/// `a_1 ..= a_{n_max}`.
pub fn generate_a(spec: &SequenceSpec, n_max: usize) -> Result<Vec<f64>, SequenceError> {
    if n_max == 0 {
        return Err(SequenceError::InvalidParameter("n_max must be at least 1"));
    }
    if let Some(len) = spec.table_len() {
        if len < n_max {
            return Err(SequenceError::TableTooShort {
                needed: n_max,
                got: len,
            });
        }
    }
    let mut out = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let v = spec.a(n).expect("length checked above");
        if !(v > 0.0) {
            return Err(SequenceError::NonPositiveEntry { index: n, value: v });
        }
        out.push(v);
    }
    Ok(out)
}

/// One level of the scale ladder.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DerivedScales {
    pub n: usize,
    pub a: f64,
    /// Interval length at level `n`.
    pub b: f64,
}

/// `b_n = a_n² / k^{2n}`; divides by the exact integer power whenever it is
/// representable, so `k = 2` scales carry no rounding beyond `a_n²`.
pub fn scale_from_a(a: f64, k: u32, n: usize) -> f64 {
    let a2 = a * a;
    let kk = (k as f64) * (k as f64);
    let mut denom = 1.0f64;
    for _ in 0..n {
        denom *= kk;
    }
    if denom < 9.007_199_254_740_992e15 || k.is_power_of_two() {
        a2 / denom
    } else {
        a2 * libm::pow(kk, -(n as f64))
    }
}

/// Scales for levels `0 ..= n_max`, with `a_0 = 1`, `b_0 = 1`.
pub fn derive_b(spec: &SequenceSpec, n_max: usize) -> Result<Vec<DerivedScales>, SequenceError> {
    let a = generate_a(spec, n_max.max(1))?;
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(DerivedScales {
        n: 0,
        a: 1.0,
        b: 1.0,
    });
    for (i, &an) in a.iter().enumerate().take(n_max) {
        let n = i + 1;
        out.push(DerivedScales {
            n,
            a: an,
            b: scale_from_a(an, spec.branching, n),
        });
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EpsilonCheck {
    pub holds: bool,
    /// `min_n (1 − a_{n+1}²/(k a_n²))`, clipped at 0.
    pub largest_valid_epsilon: f64,
}

/// Gap condition `a_n² − a_{n+1}²/k ≥ ε a_n²` for `0 ≤ n < n_max`, including the
/// fixed `a_0 = 1` (the root split). Evaluated in the normalized form
/// `1 − a_{n+1}²/(k a_n²) ≥ ε`. Tables shorter than `n_max` are checked as far
/// as they go.
pub fn check_epsilon_condition(spec: &SequenceSpec, n_max: usize) -> EpsilonCheck {
    let last = match spec.table_len() {
        Some(len) => n_max.min(len),
        None => n_max,
    };
    let k = spec.branching as f64;
    let mut min_margin = f64::INFINITY;
    let mut prev = 1.0;
    for n in 1..=last {
        let cur = spec.a(n).unwrap_or(f64::NAN);
        let margin = 1.0 - (cur * cur) / (k * prev * prev);
        if margin < min_margin || margin.is_nan() {
            min_margin = margin;
        }
        prev = cur;
    }
    if !min_margin.is_finite() {
        min_margin = if min_margin == f64::INFINITY {
            1.0
        } else {
            0.0
        };
    }
    EpsilonCheck {
        holds: min_margin >= spec.epsilon,
        largest_valid_epsilon: min_margin.max(0.0),
    }
}

/// Weak gap condition with a positive sequence `x_n`:
/// `a_n² − a_{n+1}²/k ≥ x_n` and `x_n < a_n²` for `1 ≤ n < n_max`.
/// `x_table[0]` is `x_1`.
pub fn check_corollary_condition(
    spec: &SequenceSpec,
    x_table: &[f64],
    n_max: usize,
) -> Result<bool, SequenceError> {
    if x_table.len() < n_max {
        return Err(SequenceError::TableTooShort {
            needed: n_max,
            got: x_table.len(),
        });
    }
    let a = generate_a(spec, n_max)?;
    let k = spec.branching as f64;
    for n in 1..n_max {
        let an2 = a[n - 1] * a[n - 1];
        let an1 = a[n];
        let x = x_table[n - 1];
        if !(x > 0.0) || !(an2 - an1 * an1 / k >= x) || !(x < an2) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Partial-sum heuristics used for tables.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergenceHeuristic {
    /// A series is declared summable when the geometric remainder bound
    /// implied by the worst tail ratio is at most `1/margin` of the tail
    /// window's own mass.
    pub margin: f64,
}

impl Default for ConvergenceHeuristic {
    fn default() -> Self {
        Self { margin: 10.0 }
    }
}

impl ConvergenceHeuristic {
    /// Ratio test with margin on a window of terms.
    pub fn looks_summable(&self, window: &[f64]) -> bool {
        if window.len() < 4 {
            return false;
        }
        let mut r = 0.0f64;
        for w in window.windows(2) {
            r = r.max(w[1] / w[0]);
        }
        if !(r < 1.0) {
            return false;
        }
        let mass: f64 = window.iter().sum();
        let last = *window.last().unwrap();
        let remainder = last * r / (1.0 - r);
        remainder * self.margin <= mass
    }
}

/// How the `c_n` sequence of a window witness is chosen.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WindowSequence {
    /// `c_n = c` for all `n`.
    Constant(f64),
    /// `c_n = 1/n`.
    Harmonic,
}

/// Witness for the window condition
/// `1/c_n ≥ a_n ≥ (1/((8−δ) ε ln(1/c_n)))^{1/2}` with `Σ c_n = ∞`, `n ≥ n_0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WindowWitness {
    pub c: WindowSequence,
    pub delta: f64,
    pub n0: usize,
    pub epsilon: f64,
}

/// Witness for `Σ_{ℓ≤n} 1/a_ℓ → ∞` with `Σ_{ℓ≤n} 1/a_ℓ ≤ C ln n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogGrowthWitness {
    pub c: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    PositiveProbability,
    ZeroProbability,
    Undecided,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassificationVerdict {
    pub positive_by_sum_a: bool,
    pub positive_by_sum_inv_a: bool,
    pub zero_by_window: Option<WindowWitness>,
    pub zero_by_log_growth: Option<LogGrowthWitness>,
    /// The tightest weak-gap sequence `x_n = a_n² − a_{n+1}²/k`, recorded when
    /// the `ε` condition fails but every gap stays open.
    pub weak_gap_x: Option<Vec<f64>>,
    pub verdict: Verdict,
}

/// Default `δ` for window witnesses.
pub const WINDOW_DELTA: f64 = 0.1;

fn window_constant(lo: f64, hi: f64, eps: f64, delta: f64) -> f64 {
    (1.0 / hi).min(libm::exp(-1.0 / ((8.0 - delta) * eps * lo * lo)))
}

fn verdict_from(
    positive_by_sum_a: bool,
    positive_by_sum_inv_a: bool,
    zero_by_window: Option<WindowWitness>,
    zero_by_log_growth: Option<LogGrowthWitness>,
    weak_gap_x: Option<Vec<f64>>,
) -> ClassificationVerdict {
    let verdict = if positive_by_sum_a || positive_by_sum_inv_a {
        Verdict::PositiveProbability
    } else if zero_by_window.is_some() || zero_by_log_growth.is_some() {
        Verdict::ZeroProbability
    } else {
        Verdict::Undecided
    };
    let positive = verdict == Verdict::PositiveProbability;
    ClassificationVerdict {
        positive_by_sum_a,
        positive_by_sum_inv_a,
        zero_by_window: if positive { None } else { zero_by_window },
        zero_by_log_growth: if positive { None } else { zero_by_log_growth },
        weak_gap_x,
        verdict,
    }
}

/// Classifies a sequence against the positive-probability criteria
/// (`Σ a_n < ∞` or `Σ 1/a_n < ∞`) and the zero-probability criteria
/// (window condition, logarithmic growth of `Σ 1/a_ℓ`).
///
/// Closed-form kinds are decided symbolically. Tables use only the second
/// half of the probe range, so edits to the head never change a decided
/// verdict.
pub fn classify(
    spec: &SequenceSpec,
    n_probe: usize,
    tail_test: ConvergenceHeuristic,
) -> ClassificationVerdict {
    let n_probe = n_probe.max(16);
    let eps_check = check_epsilon_condition(spec, n_probe);
    let eps = eps_check.largest_valid_epsilon;
    let delta = WINDOW_DELTA;

    match &spec.kind {
        SequenceKind::Geometric { .. } => verdict_from(true, false, None, None, None),
        SequenceKind::Power { d } => verdict_from(*d > 1.0, false, None, None, None),
        SequenceKind::Constant { a } => {
            let w = (eps > 0.0).then(|| WindowWitness {
                c: WindowSequence::Constant(window_constant(*a, *a, eps, delta)),
                delta,
                n0: 1,
                epsilon: eps,
            });
            verdict_from(false, false, w, None, None)
        }
        SequenceKind::InverseLogSqrt => {
            // c_n = 1/n works iff (8 − δ) ε ≥ 1
            let w = ((8.0 - delta) * eps >= 1.0).then_some(WindowWitness {
                c: WindowSequence::Harmonic,
                delta,
                n0: 2,
                epsilon: eps,
            });
            verdict_from(false, false, w, None, None)
        }
        SequenceKind::Linear => {
            let mut partial = 0.0;
            let mut c = 0.0f64;
            for n in 1..=n_probe.max(64) {
                partial += 1.0 / spec.a(n).unwrap();
                if n >= 2 {
                    c = c.max(partial / libm::log(n as f64));
                }
            }
            verdict_from(false, false, None, Some(LogGrowthWitness { c }), None)
        }
        SequenceKind::Custom(table) => {
            let n = n_probe.min(table.len());
            let start = n / 2;
            let window = &table[start..n];
            let inv: Vec<f64> = window.iter().map(|v| 1.0 / v).collect();
            let by_a = tail_test.looks_summable(window);
            let by_inv = tail_test.looks_summable(&inv);

            let weak_gap_x = if eps_check.largest_valid_epsilon > 0.0 {
                None
            } else {
                weak_gaps(spec, n)
            };
            if weak_gap_x.is_some() || eps <= 0.0 {
                // only the weak-gap criteria apply; they are checked with the
                // same ratio heuristic on x_n
                let (pa, pi) = match &weak_gap_x {
                    Some(x) => {
                        let xs = &x[start.min(x.len())..];
                        let ta: Vec<f64> = xs
                            .iter()
                            .zip(window)
                            .map(|(x, a)| a * a / libm::sqrt(*x))
                            .collect();
                        let ti: Vec<f64> = xs.iter().map(|x| 1.0 / libm::sqrt(*x)).collect();
                        (tail_test.looks_summable(&ta), tail_test.looks_summable(&ti))
                    }
                    None => (false, false),
                };
                return verdict_from(pa, pi, None, None, weak_gap_x);
            }

            let mut distinct: Vec<f64> = Vec::new();
            for &v in window {
                if !distinct
                    .iter()
                    .any(|&d| libm::fabs(d - v) <= 1e-12 * d.abs().max(v.abs()))
                {
                    distinct.push(v);
                }
            }
            let finite_set = distinct.len() <= (window.len() / 4).max(1);
            let w = finite_set.then(|| {
                let lo = distinct.iter().cloned().fold(f64::INFINITY, f64::min);
                let hi = distinct.iter().cloned().fold(0.0, f64::max);
                WindowWitness {
                    c: WindowSequence::Constant(window_constant(lo, hi, eps, delta)),
                    delta,
                    n0: start + 1,
                    epsilon: eps,
                }
            });
            verdict_from(by_a, by_inv, w, None, None)
        }
    }
}

fn weak_gaps(spec: &SequenceSpec, n: usize) -> Option<Vec<f64>> {
    let k = spec.branching as f64;
    let mut out = Vec::with_capacity(n);
    for i in 1..n {
        let a = spec.a(i)?;
        let b = spec.a(i + 1)?;
        let x = a * a - b * b / k;
        if !(x > 0.0) {
            return None;
        }
        out.push(x);
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn custom(t: &[f64], k: u32) -> SequenceSpec {
        SequenceSpec::new(SequenceKind::Custom(t.to_vec()), k, 0.1).unwrap()
    }

    #[test]
    fn generates_closed_forms() {
        let g = SequenceSpec::binary(SequenceKind::Geometric { x: 2.0 }, 0.5).unwrap();
        assert_eq!(generate_a(&g, 3).unwrap(), vec![0.5, 0.25, 0.125]);
        let p = SequenceSpec::binary(SequenceKind::Power { d: 2.0 }, 0.5).unwrap();
        assert_eq!(generate_a(&p, 3).unwrap(), vec![1.0, 0.25, 1.0 / 9.0]);
        let l = SequenceSpec::binary(SequenceKind::Linear, 0.1).unwrap();
        let a = generate_a(&l, 12).unwrap();
        assert_eq!((a[0], a[1]), (1.0, 1.3));
        assert_eq!(a[9..], [10.0, 11.0, 12.0]);
        assert!(a.windows(2).all(|w| w[1] / w[0] <= 1.3 + 1e-12));
        assert!(check_epsilon_condition(&l, 40).largest_valid_epsilon > 0.15);
    }

    #[test]
    fn custom_table_passthrough_and_errors() {
        let t = [libm::sqrt(1.6), libm::sqrt(0.64), 0.8];
        let s = custom(&t, 2);
        assert_eq!(generate_a(&s, 3).unwrap(), t.to_vec());
        assert_eq!(
            generate_a(&s, 4),
            Err(SequenceError::TableTooShort { needed: 4, got: 3 })
        );
        assert!(matches!(
            SequenceSpec::binary(SequenceKind::Custom(vec![1.0, -2.0]), 0.1),
            Err(SequenceError::NonPositiveEntry { index: 2, .. })
        ));
        assert!(SequenceSpec::binary(SequenceKind::Geometric { x: 1.0 }, 0.1).is_err());
        assert!(SequenceSpec::binary(SequenceKind::Constant { a: 1.0 }, 1.0).is_err());
    }

    #[test]
    fn derive_b_figure_tables() {
        let s = custom(&[libm::sqrt(1.6), libm::sqrt(0.64), 0.8], 2);
        let b: Vec<f64> = derive_b(&s, 3).unwrap().iter().map(|d| d.b).collect();
        for (got, want) in b.iter().zip([1.0, 0.4, 0.04, 0.01]) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
        let s3 = custom(&[libm::sqrt(1.8), 1.8, 2.7], 3);
        let b: Vec<f64> = derive_b(&s3, 3).unwrap().iter().map(|d| d.b).collect();
        for (got, want) in b.iter().zip([1.0, 0.2, 0.04, 0.01]) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn geometric_scales_follow_power_law() {
        let x = 1.5;
        let s = SequenceSpec::binary(SequenceKind::Geometric { x }, 0.5).unwrap();
        for d in derive_b(&s, 20).unwrap() {
            let want = libm::pow(2.0 * x, -2.0 * d.n as f64);
            assert!(((d.b - want) / want).abs() < 1e-13);
        }
    }

    #[test]
    fn dyadic_squares_are_exact() {
        // a_n² = 9/16 exactly, so b_n = 9/16 · 4^{-n} with no rounding
        let a = 0.75;
        assert_eq!(scale_from_a(a, 2, 7), 0.5625 / 16384.0);
        assert_eq!(scale_from_a(a, 2, 30), 0.5625 * libm::pow(2.0, -60.0));
    }

    #[test]
    fn epsilon_condition_examples() {
        let c = SequenceSpec::binary(SequenceKind::Constant { a: 1.0 }, 0.1).unwrap();
        assert_eq!(check_epsilon_condition(&c, 10).largest_valid_epsilon, 0.5);
        let bad = custom(&[1.0, 2.0], 2);
        let r = check_epsilon_condition(&bad, 2);
        assert_eq!(r.largest_valid_epsilon, 0.0);
        assert!(!r.holds);
        let g = SequenceSpec::binary(SequenceKind::Geometric { x: 1.2 }, 0.1).unwrap();
        assert!(check_epsilon_condition(&g, 30).largest_valid_epsilon >= 0.5);
        let p = SequenceSpec::binary(SequenceKind::Power { d: 1.5 }, 0.1).unwrap();
        assert!(check_epsilon_condition(&p, 30).largest_valid_epsilon >= 0.5);
    }

    #[test]
    fn corollary_condition_examples() {
        let ones = SequenceSpec::binary(SequenceKind::Constant { a: 1.0 }, 0.1).unwrap();
        assert!(check_corollary_condition(&ones, &[0.4; 8], 8).unwrap());
        assert!(!check_corollary_condition(&ones, &[0.6; 8], 8).unwrap());
        assert!(check_corollary_condition(&ones, &[0.4; 3], 8).is_err());

        // a_n² − a_{n+1}²/2 evaluated by hand: 1.6 − 0.32 = 1.28 ≥ 0.8 and
        // 0.64 − 0.32 = 0.32 ≥ 0.32 (tight)
        let t = [libm::sqrt(1.6), libm::sqrt(0.64), 0.8];
        let fig = custom(&t, 2);
        let x: Vec<f64> = t.iter().map(|a| 0.5 * a * a).collect();
        assert!(check_corollary_condition(&fig, &x, 3).unwrap());
    }

    #[test]
    fn classify_closed_forms() {
        let h = ConvergenceHeuristic::default();
        let g = SequenceSpec::binary(SequenceKind::Geometric { x: 1.5 }, 0.5).unwrap();
        let v = classify(&g, 32, h);
        assert_eq!(v.verdict, Verdict::PositiveProbability);
        assert!(v.positive_by_sum_a);

        let ils = SequenceSpec::binary(SequenceKind::InverseLogSqrt, 0.25).unwrap();
        let v = classify(&ils, 32, h);
        assert_eq!(v.verdict, Verdict::ZeroProbability);
        assert_eq!(v.zero_by_window.unwrap().c, WindowSequence::Harmonic);

        let lin = SequenceSpec::binary(SequenceKind::Linear, 0.1).unwrap();
        let v = classify(&lin, 32, h);
        assert_eq!(v.verdict, Verdict::ZeroProbability);
        assert!(v.zero_by_log_growth.unwrap().c > 1.0);

        let c = SequenceSpec::binary(SequenceKind::Constant { a: 1.0 }, 0.25).unwrap();
        let v = classify(&c, 32, h);
        assert_eq!(v.verdict, Verdict::ZeroProbability);
        match v.zero_by_window.unwrap().c {
            WindowSequence::Constant(c) => assert!(c > 0.0 && c <= 1.0),
            other => panic!("unexpected {other:?}"),
        }

        for d in [0.3, 0.5, 0.75, 1.0] {
            let p = SequenceSpec::binary(SequenceKind::Power { d }, 0.25).unwrap();
            assert_eq!(classify(&p, 32, h).verdict, Verdict::Undecided, "d={d}");
        }
        let p = SequenceSpec::binary(SequenceKind::Power { d: 1.5 }, 0.25).unwrap();
        assert_eq!(classify(&p, 32, h).verdict, Verdict::PositiveProbability);
    }

    #[test]
    fn window_witness_satisfies_inequality() {
        let a = 0.7;
        let eps = 0.3;
        let c = window_constant(a, a, eps, WINDOW_DELTA);
        assert!(1.0 / c >= a);
        assert!(a >= libm::sqrt(1.0 / ((8.0 - WINDOW_DELTA) * eps * libm::log(1.0 / c))) - 1e-12);
    }

    #[test]
    fn classify_tables() {
        let h = ConvergenceHeuristic::default();
        let geo: Vec<f64> = (1..=32).map(|n| libm::pow(1.5, -(n as f64))).collect();
        assert_eq!(
            classify(&custom(&geo, 2), 32, h).verdict,
            Verdict::PositiveProbability
        );
        let harmonic: Vec<f64> = (1..=32).map(|n| 1.0 / n as f64).collect();
        assert_eq!(
            classify(&custom(&harmonic, 2), 32, h).verdict,
            Verdict::Undecided
        );
        let two_values: Vec<f64> = (1..=32)
            .map(|n| if n % 2 == 0 { 0.6 } else { 0.8 })
            .collect();
        let v = classify(&custom(&two_values, 2), 32, h);
        assert_eq!(v.verdict, Verdict::ZeroProbability);
        assert!(v.zero_by_window.is_some());
    }
}
