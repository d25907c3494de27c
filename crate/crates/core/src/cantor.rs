//! Interval families `𝔠_{b_n}` and the piecewise-linear approximations
//! `f_{b_n}` of the generalized (k-ary) Cantor function on `[1, 2]`.
//!
//! A level-`n` interval is addressed by its k-ary digits `v_1 … v_n`, packed
//! into an integer index so that index order is spatial order. Endpoints are
//! `1 + Σ v_i · (b_{i−1} − b_i)/(k − 1)` evaluated in double-double and then
//! rounded once; right endpoints of last children are taken from the ancestor
//! they share, so every coarse endpoint is bit-identical to the corresponding
//! fine endpoint.

use alloc::borrow::Cow;
use alloc::vec::Vec;

use crate::error::CantorError;
use crate::sequences::{derive_b, DerivedScales, SequenceSpec, MAX_LEVEL};

/// Levels with at most this many intervals are stored explicitly.
pub const MATERIALIZE_LIMIT: u64 = 1 << 20;

/// Absolute tolerance used to snap times onto endpoints in `[1, 2]`.
const SNAP: f64 = 4.0 * f64::EPSILON;

/// Unevaluated sum `hi + lo` with `|lo| ≤ ulp(hi)/2`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Extended {
    pub hi: f64,
    pub lo: f64,
}

impl Extended {
    pub const fn new(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    #[inline]
    fn two_sum(a: f64, b: f64) -> Self {
        let s = a + b;
        let bb = s - a;
        let err = (a - (s - bb)) + (b - bb);
        Self { hi: s, lo: err }
    }

    #[inline]
    pub fn add(self, o: Self) -> Self {
        let s = Self::two_sum(self.hi, o.hi);
        let lo = s.lo + self.lo + o.lo;
        Self::two_sum(s.hi, lo)
    }

    #[inline]
    pub fn add_f64(self, x: f64) -> Self {
        self.add(Self::new(x))
    }

    /// Multiplication by a small non-negative integer.
    #[inline]
    pub fn scale(self, m: u32) -> Self {
        let m = m as f64;
        let p = self.hi * m;
        let err = libm::fma(self.hi, m, -p);
        Self::two_sum(p, err + self.lo * m)
    }

    /// `(a − b) / d` for `d ≥ 1`.
    fn diff_div(a: f64, b: f64, d: u32) -> Self {
        let diff = Self::two_sum(a, -b);
        let d = d as f64;
        let q = diff.hi / d;
        let r = libm::fma(-q, d, diff.hi) + diff.lo;
        Self::two_sum(q, r / d)
    }

    /// `t − self` rounded to `f64`.
    #[inline]
    pub fn offset(self, t: f64) -> f64 {
        (t - self.hi) - self.lo
    }
}

/// One interval of `𝔠_{b_n}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntervalNode {
    pub level: usize,
    /// Address `v_1 … v_n` read as a base-`k` integer.
    pub index: u64,
    pub branching: u32,
    pub left: f64,
    pub right: f64,
    pub left_lo: f64,
    pub right_lo: f64,
}

impl IntervalNode {
    /// Address digits, most significant first.
    pub fn address(&self) -> Vec<u8> {
        let k = self.branching as u64;
        let mut out = alloc::vec![0u8; self.level];
        let mut idx = self.index;
        for slot in out.iter_mut().rev() {
            *slot = (idx % k) as u8;
            idx /= k;
        }
        out
    }

    /// `k^level`, the common denominator of the endpoint values.
    pub fn denominator(&self) -> u64 {
        (self.branching as u64).pow(self.level as u32)
    }

    /// `f(left) = index / k^level`.
    pub fn f_left(&self) -> f64 {
        self.index as f64 / self.denominator() as f64
    }

    /// `f(right) = (index + 1) / k^level`.
    pub fn f_right(&self) -> f64 {
        (self.index + 1) as f64 / self.denominator() as f64
    }

    pub fn width(&self) -> f64 {
        (self.right - self.left) + (self.right_lo - self.left_lo)
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.left + self.right)
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.left && t <= self.right
    }

    /// `later.right − self.right` without the cancellation of the rounded
    /// endpoints.
    pub fn right_gap(&self, later: &IntervalNode) -> f64 {
        (later.right - self.right) + (later.right_lo - self.right_lo)
    }

    /// Ancestor at `level ≤ self.level`.
    pub fn ancestor_index(&self, level: usize) -> u64 {
        let k = self.branching as u64;
        self.index / k.pow((self.level - level) as u32)
    }
}

/// Enclosure of a value of the limit function.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Enclosure {
    pub lo: f64,
    pub hi: f64,
}

impl Enclosure {
    pub fn exact(v: f64) -> Self {
        Self { lo: v, hi: v }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Where a time falls in the level-`n` construction.
#[derive(Clone, Copy, Debug, PartialEq)]
enum Position {
    Below,
    Above,
    /// Plateau value `num / k^level` on a gap opened at `level`.
    Gap {
        num: u64,
        level: usize,
    },
    /// Inside the level-`n` interval with the given index and left endpoint.
    Inside {
        index: u64,
        left: Extended,
    },
}

#[derive(Clone, Debug)]
pub struct CantorFunction {
    spec: SequenceSpec,
    depth: usize,
    k: u32,
    scales: Vec<DerivedScales>,
    steps: Vec<Extended>,
    pow_k: Vec<u64>,
    levels: Vec<Vec<IntervalNode>>,
}

/// Largest depth for which `k^depth` fits the index type and doubles suffice.
pub fn max_depth(k: u32) -> usize {
    let mut d = 0usize;
    let mut p: u64 = 1;
    while d < MAX_LEVEL {
        match p.checked_mul(k as u64) {
            Some(q) => {
                p = q;
                d += 1;
            }
            None => break,
        }
    }
    d
}

/// Builds the tree through `depth`; rejects closing sibling gaps.
pub fn build_tree(spec: &SequenceSpec, depth: usize) -> Result<CantorFunction, CantorError> {
    spec.validate()?;
    let k = spec.branching;
    let max = max_depth(k);
    if depth > max {
        return Err(CantorError::DepthTooLarge { depth, max });
    }
    let scales = derive_b(spec, depth.max(1))?;
    let scales: Vec<DerivedScales> = scales.into_iter().take(depth + 1).collect();
    for n in 0..depth {
        let gap = scales[n].b - (k as f64) * scales[n + 1].b;
        if !(gap > 0.0) {
            return Err(CantorError::DegenerateGap { level: n, gap });
        }
    }
    let mut steps = alloc::vec![Extended::default()];
    for n in 1..=depth {
        steps.push(Extended::diff_div(scales[n - 1].b, scales[n].b, k - 1));
    }
    let pow_k: Vec<u64> = (0..=depth).map(|n| (k as u64).pow(n as u32)).collect();

    let mut cf = CantorFunction {
        spec: spec.clone(),
        depth,
        k,
        scales,
        steps,
        pow_k,
        levels: Vec::new(),
    };
    for n in 0..=depth {
        if cf.pow_k[n] > MATERIALIZE_LIMIT {
            break;
        }
        let nodes = (0..cf.pow_k[n]).map(|i| cf.compute_node(n, i)).collect();
        cf.levels.push(nodes);
    }
    Ok(cf)
}

impl CantorFunction {
    pub fn spec(&self) -> &SequenceSpec {
        &self.spec
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn branching(&self) -> u32 {
        self.k
    }

    pub fn scales(&self) -> &[DerivedScales] {
        &self.scales
    }

    /// Interval length at level `n`.
    pub fn b(&self, n: usize) -> f64 {
        self.scales[n].b
    }

    pub fn a(&self, n: usize) -> f64 {
        self.scales[n].a
    }

    /// Distance between left endpoints of neighbouring children at level `n`.
    pub fn step(&self, n: usize) -> f64 {
        self.steps[n].hi
    }

    /// Number of intervals at level `n`.
    pub fn count(&self, n: usize) -> u64 {
        self.pow_k[n]
    }

    /// `num / k^level` as `f64`.
    pub fn fraction(&self, num: u64, level: usize) -> f64 {
        num as f64 / self.pow_k[level] as f64
    }

    fn check_level(&self, n: usize) -> Result<(), CantorError> {
        if n > self.depth {
            Err(CantorError::LevelExceedsDepth {
                level: n,
                depth: self.depth,
            })
        } else {
            Ok(())
        }
    }

    fn compute_node(&self, level: usize, index: u64) -> IntervalNode {
        let k = self.k as u64;
        let mut digits = [0u32; MAX_LEVEL + 1];
        let mut idx = index;
        for i in (1..=level).rev() {
            digits[i] = (idx % k) as u32;
            idx /= k;
        }
        // p = shallowest level whose right endpoint this node shares
        let mut p = level;
        while p > 0 && digits[p] == self.k - 1 {
            p -= 1;
        }
        let mut left = Extended::new(1.0);
        let mut left_p = left;
        for (i, &d) in digits.iter().enumerate().take(level + 1).skip(1) {
            if d != 0 {
                left = left.add(self.steps[i].scale(d));
            }
            if i == p {
                left_p = left;
            }
        }
        let right = left_p.add_f64(self.scales[p].b);
        IntervalNode {
            level,
            index,
            branching: self.k,
            left: left.hi,
            right: right.hi,
            left_lo: left.lo,
            right_lo: right.lo,
        }
    }

    /// Level-`n` interval with the given index.
    pub fn node(&self, level: usize, index: u64) -> Result<IntervalNode, CantorError> {
        self.check_level(level)?;
        assert!(index < self.pow_k[level], "index out of range");
        Ok(match self.levels.get(level) {
            Some(nodes) => nodes[index as usize],
            None => self.compute_node(level, index),
        })
    }

    /// All level-`n` intervals in spatial order.
    pub fn level_nodes(&self, n: usize) -> Result<Cow<'_, [IntervalNode]>, CantorError> {
        self.check_level(n)?;
        Ok(match self.levels.get(n) {
            Some(nodes) => Cow::Borrowed(nodes.as_slice()),
            None => Cow::Owned(
                (0..self.pow_k[n])
                    .map(|i| self.compute_node(n, i))
                    .collect(),
            ),
        })
    }

    fn descend(&self, t: f64, n: usize) -> Position {
        if t < 1.0 - SNAP {
            return Position::Below;
        }
        if t > 2.0 + SNAP {
            return Position::Above;
        }
        let k = self.k;
        let mut left = Extended::new(1.0);
        let mut index = 0u64;
        for m in 0..n {
            let step = self.steps[m + 1];
            let b_next = self.scales[m + 1].b;
            let off = left.offset(t);
            let mut j = if off <= 0.0 {
                0
            } else {
                ((off / step.hi) as u64).min((k - 1) as u64) as u32
            };
            if j + 1 < k && left.add(step.scale(j + 1)).offset(t) >= -SNAP {
                j += 1;
            }
            let child = left.add(step.scale(j));
            let c_off = child.offset(t);
            if c_off < -SNAP && j > 0 {
                return Position::Gap {
                    num: index * k as u64 + j as u64,
                    level: m + 1,
                };
            }
            if c_off > b_next + SNAP && j + 1 < k {
                return Position::Gap {
                    num: index * k as u64 + j as u64 + 1,
                    level: m + 1,
                };
            }
            left = child;
            index = index * k as u64 + j as u64;
        }
        Position::Inside { index, left }
    }

    /// `f_{b_n}(t)`.
    pub fn evaluate_fbn(&self, n: usize, t: f64) -> Result<f64, CantorError> {
        self.check_level(n)?;
        Ok(match self.descend(t, n) {
            Position::Below => 0.0,
            Position::Above => 1.0,
            Position::Gap { num, level } => self.fraction(num, level),
            Position::Inside { index, left } => {
                let off = left.offset(t);
                let b = self.scales[n].b;
                if off <= SNAP {
                    self.fraction(index, n)
                } else if off >= b - SNAP {
                    self.fraction(index + 1, n)
                } else {
                    let denom = self.pow_k[n] as f64;
                    (index as f64 + off / b) / denom
                }
            }
        })
    }

    /// Enclosure of `f_b(t)` of width at most `max(tol, k^{-depth})`; exact on
    /// gaps, outside `[1, 2]`, and at endpoints.
    pub fn evaluate_fb(&self, t: f64, tol: f64) -> Enclosure {
        let mut n = 0;
        let mut width = 1.0;
        while n < self.depth && width > tol {
            n += 1;
            width /= self.k as f64;
        }
        match self.descend(t, n) {
            Position::Below => Enclosure::exact(0.0),
            Position::Above => Enclosure::exact(1.0),
            Position::Gap { num, level } => Enclosure::exact(self.fraction(num, level)),
            Position::Inside { index, left } => {
                let off = left.offset(t);
                if off <= SNAP {
                    Enclosure::exact(self.fraction(index, n))
                } else if off >= self.scales[n].b - SNAP {
                    Enclosure::exact(self.fraction(index + 1, n))
                } else {
                    Enclosure {
                        lo: self.fraction(index, n),
                        hi: self.fraction(index + 1, n),
                    }
                }
            }
        }
    }

    /// The level-`n` interval containing `t`, if `t ∈ C_{b_n}`.
    pub fn locate(&self, t: f64, n: usize) -> Result<Option<IntervalNode>, CantorError> {
        self.check_level(n)?;
        Ok(match self.descend(t, n) {
            Position::Inside { index, .. } => Some(self.node(n, index)?),
            _ => None,
        })
    }

    /// Breakpoints of `f_{b_n}` on `[1, 2]` in increasing order, paired with
    /// their values.
    pub fn breakpoints(&self, n: usize) -> Result<Vec<(f64, f64)>, CantorError> {
        let nodes = self.level_nodes(n)?;
        let mut out = Vec::with_capacity(2 * nodes.len());
        for node in nodes.iter() {
            out.push((node.left, node.f_left()));
            out.push((node.right, node.f_right()));
        }
        Ok(out)
    }
}

/// Length of the longest common address prefix of two same-level intervals.
pub fn common_ancestor_level(i: &IntervalNode, j: &IntervalNode) -> Result<usize, CantorError> {
    if i.level != j.level {
        return Err(CantorError::MismatchedLevels {
            left: i.level,
            right: j.level,
        });
    }
    let k = i.branching as u64;
    let (mut a, mut b, mut l) = (i.index, j.index, i.level);
    while a != b {
        a /= k;
        b /= k;
        l -= 1;
    }
    Ok(l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::SequenceKind;
    use alloc::vec;

    fn fig1() -> CantorFunction {
        let s = SequenceSpec::binary(
            SequenceKind::Custom(vec![libm::sqrt(1.6), libm::sqrt(0.64), 0.8]),
            0.1,
        )
        .unwrap();
        build_tree(&s, 3).unwrap()
    }

    fn fig3() -> CantorFunction {
        let s = SequenceSpec::new(
            SequenceKind::Custom(vec![libm::sqrt(1.8), 1.8, 2.7]),
            3,
            0.1,
        )
        .unwrap();
        build_tree(&s, 3).unwrap()
    }

    #[test]
    fn root_node() {
        let cf = fig1();
        let root = cf.node(0, 0).unwrap();
        assert_eq!((root.left, root.right), (1.0, 2.0));
        assert_eq!((root.f_left(), root.f_right()), (0.0, 1.0));
    }

    #[test]
    fn figure_one_level_one() {
        let cf = fig1();
        let l1 = cf.level_nodes(1).unwrap();
        assert!((l1[0].left - 1.0).abs() < 1e-15 && (l1[0].right - 1.4).abs() < 1e-15);
        assert!((l1[1].left - 1.6).abs() < 1e-15 && l1[1].right == 2.0);
        assert_eq!(cf.evaluate_fbn(1, 1.5).unwrap(), 0.5);
        assert_eq!(cf.evaluate_fbn(1, 1.0).unwrap(), 0.0);
        assert!((cf.evaluate_fbn(1, 1.2).unwrap() - 0.25).abs() < 1e-14);
        assert_eq!(cf.evaluate_fb(1.41, 1e-9), Enclosure::exact(0.5));
        let n = cf.locate(1.9, 1).unwrap().unwrap();
        assert_eq!(n.address(), vec![1]);
    }

    #[test]
    fn figure_three_level_one() {
        let cf = fig3();
        let l1 = cf.level_nodes(1).unwrap();
        assert_eq!(l1.len(), 3);
        for (j, node) in l1.iter().enumerate() {
            assert!((node.width() - 0.2).abs() < 1e-14);
            assert!((node.left - (1.0 + 0.4 * j as f64)).abs() < 1e-14);
        }
        assert!((cf.evaluate_fbn(1, 1.3).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!((cf.evaluate_fbn(1, 1.7).unwrap() - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn outside_range() {
        let cf = fig1();
        assert_eq!(cf.evaluate_fbn(3, 0.5).unwrap(), 0.0);
        assert_eq!(cf.evaluate_fbn(3, 2.5).unwrap(), 1.0);
        assert_eq!(cf.evaluate_fbn(3, 2.0).unwrap(), 1.0);
        assert!(matches!(
            cf.evaluate_fbn(4, 1.0),
            Err(CantorError::LevelExceedsDepth { .. })
        ));
    }

    #[test]
    fn locate_extremes() {
        let cf = fig1();
        assert_eq!(cf.locate(1.0, 3).unwrap().unwrap().address(), vec![0, 0, 0]);
        assert_eq!(cf.locate(2.0, 3).unwrap().unwrap().address(), vec![1, 1, 1]);
        assert_eq!(cf.locate(1.5, 3).unwrap(), None);
    }

    #[test]
    fn shared_right_endpoints_are_identical() {
        let cf = fig3();
        for n in 1..=3 {
            for node in cf.level_nodes(n).unwrap().iter() {
                if node.index % 3 == 2 {
                    let parent = cf.node(n - 1, node.index / 3).unwrap();
                    assert_eq!(node.right.to_bits(), parent.right.to_bits());
                }
                if node.index % 3 == 0 {
                    let parent = cf.node(n - 1, node.index / 3).unwrap();
                    assert_eq!(node.left.to_bits(), parent.left.to_bits());
                }
            }
        }
    }

    #[test]
    fn degenerate_gap_rejected() {
        let s = SequenceSpec::binary(SequenceKind::Custom(vec![1.0, 2.0]), 0.1).unwrap();
        assert!(matches!(
            build_tree(&s, 2),
            Err(CantorError::DegenerateGap { level: 1, .. })
        ));
    }

    #[test]
    fn ancestor_levels() {
        let cf = {
            let s = SequenceSpec::binary(SequenceKind::Geometric { x: 1.5 }, 0.5).unwrap();
            build_tree(&s, 4).unwrap()
        };
        let at = |bits: &[u64]| {
            let idx = bits.iter().fold(0, |a, b| 2 * a + b);
            cf.node(bits.len(), idx).unwrap()
        };
        assert_eq!(
            common_ancestor_level(&at(&[0, 0]), &at(&[0, 1])).unwrap(),
            1
        );
        assert_eq!(
            common_ancestor_level(&at(&[0, 0, 0]), &at(&[1, 0, 0])).unwrap(),
            0
        );
        assert_eq!(
            common_ancestor_level(&at(&[0, 1, 1, 0]), &at(&[0, 1, 1, 1])).unwrap(),
            3
        );
        assert!(common_ancestor_level(&at(&[0]), &at(&[0, 1])).is_err());
    }
}
