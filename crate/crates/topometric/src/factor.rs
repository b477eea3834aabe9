//! Catalog factors: point sets, the metric `d_i`, the gauge `ρ_i`, and the
//! per-factor primitive closed pieces that boxes are made of.
//!
//! Five factor kinds are supported. Interval factors come in a minimal
//! flavour (metric topology) and a maximal flavour (0/1 distance over the
//! usual topology). `ConvergentSeq` is ℕ ∪ {ω} with the one-point
//! compactification topology and the discrete distance. `ExampleGlue` is the
//! disjoint union of `[0,1]` with ℕ where ω is glued to `Left 0`: the points
//! `Right n` converge topologically to `Left 0` while staying at distance one
//! from every `Left` point.

use crate::error::{Error, Result};
use crate::exact::{rat_int, rat_one, rat_zero, Rat};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Factor {
    /// Rationals in `[lo, hi]`; `d = ρ = |x − y|`.
    MinInterval { lo: Rat, hi: Rat },
    /// Rationals in `[lo, hi]`; `ρ = |x − y|`, `d` is the 0/1 distance.
    MaxInterval { lo: Rat, hi: Rat },
    /// Points `0..n`; `d = ρ` = 0/1.
    FiniteDiscrete { size: u32 },
    /// ℕ ∪ {ω}; `ρ` pulled back through `n ↦ 1/(n+1)`, `ω ↦ 0`; `d` = 0/1.
    ConvergentSeq,
    /// `Left t` for `t ∈ [0,1]` and `Right n` for `n ∈ ℕ`.
    ExampleGlue,
}

/// One coordinate of a point, matching its factor kind.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Coord {
    Rational(Rat),
    Index(u32),
    Nat(u64),
    Omega,
    Left(Rat),
    Right(u64),
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coord::Rational(q) => write!(f, "{}", q),
            Coord::Index(i) => write!(f, "{}", i),
            Coord::Nat(n) => write!(f, "{}", n),
            Coord::Omega => write!(f, "omega"),
            Coord::Left(q) => write!(f, "left({})", q),
            Coord::Right(n) => write!(f, "right({})", n),
        }
    }
}

/// `1/(n+1)`, the gauge parameter of the n-th sequence point.
pub fn seq_value(n: u64) -> Rat {
    Rat::new(1.into(), (n + 1).into())
}

impl Factor {
    pub fn validate_coord(&self, c: &Coord) -> Result<()> {
        let ok = match (self, c) {
            (Factor::MinInterval { lo, hi } | Factor::MaxInterval { lo, hi }, Coord::Rational(q)) => {
                q >= lo && q <= hi
            }
            (Factor::FiniteDiscrete { size }, Coord::Index(i)) => i < size,
            (Factor::ConvergentSeq, Coord::Nat(_) | Coord::Omega) => true,
            (Factor::ExampleGlue, Coord::Left(t)) => !t.is_negative() && *t <= rat_one(),
            (Factor::ExampleGlue, Coord::Right(_)) => true,
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "coordinate {} outside factor {:?}",
                c, self
            )))
        }
    }

    /// The metric `d_i`.
    pub fn dist(&self, a: &Coord, b: &Coord) -> Rat {
        match self {
            Factor::MinInterval { .. } => match (a, b) {
                (Coord::Rational(x), Coord::Rational(y)) => (x - y).abs(),
                _ => unreachable!("validated coords"),
            },
            Factor::MaxInterval { .. } | Factor::FiniteDiscrete { .. } | Factor::ConvergentSeq => {
                if a == b {
                    rat_zero()
                } else {
                    rat_one()
                }
            }
            Factor::ExampleGlue => match (a, b) {
                (Coord::Left(x), Coord::Left(y)) => (x - y).abs(),
                (Coord::Right(n), Coord::Right(m)) => {
                    if n == m {
                        rat_zero()
                    } else {
                        rat_one()
                    }
                }
                _ => rat_one(),
            },
        }
    }

    /// The gauge `ρ_i` that metrizes the factor topology.
    pub fn gauge(&self, a: &Coord, b: &Coord) -> Rat {
        match self {
            Factor::MinInterval { .. } | Factor::MaxInterval { .. } => match (a, b) {
                (Coord::Rational(x), Coord::Rational(y)) => (x - y).abs(),
                _ => unreachable!("validated coords"),
            },
            Factor::FiniteDiscrete { .. } => {
                if a == b {
                    rat_zero()
                } else {
                    rat_one()
                }
            }
            Factor::ConvergentSeq => {
                let v = |c: &Coord| match c {
                    Coord::Nat(n) => seq_value(*n),
                    Coord::Omega => rat_zero(),
                    _ => unreachable!("validated coords"),
                };
                (v(a) - v(b)).abs()
            }
            Factor::ExampleGlue => match (a, b) {
                (Coord::Left(x), Coord::Left(y)) => (x - y).abs(),
                (Coord::Right(n), Coord::Right(m)) => (seq_value(*n) - seq_value(*m)).abs(),
                (Coord::Left(t), Coord::Right(n)) | (Coord::Right(n), Coord::Left(t)) => {
                    t + seq_value(*n)
                }
                _ => unreachable!("validated coords"),
            },
        }
    }

    pub fn full_piece(&self) -> Piece {
        match self {
            Factor::MinInterval { lo, hi } | Factor::MaxInterval { lo, hi } => Piece::Interval {
                lo: lo.clone(),
                hi: hi.clone(),
            },
            Factor::FiniteDiscrete { size } => Piece::Finite((0..*size).collect()),
            Factor::ConvergentSeq => Piece::Seq(SeqSet {
                finite: BTreeSet::new(),
                omega: true,
                tail_from: Some(0),
            }),
            Factor::ExampleGlue => Piece::Glue(GlueSet {
                left: Some((rat_zero(), rat_one())),
                right_finite: BTreeSet::new(),
                right_tail: Some(0),
            }),
        }
    }

    /// A deterministic interior representative, used for tie-breaking.
    pub fn representative(&self, piece: &Piece) -> Coord {
        match piece {
            Piece::Interval { lo, hi } => Coord::Rational((lo + hi) / rat_int(2)),
            Piece::Finite(set) => Coord::Index(*set.iter().next().expect("nonempty")),
            Piece::Seq(s) => {
                if let Some(n) = s.finite.iter().next() {
                    Coord::Nat(*n)
                } else if s.omega {
                    Coord::Omega
                } else {
                    unreachable!("nonempty seq piece")
                }
            }
            Piece::Glue(g) => {
                if let Some((lo, hi)) = &g.left {
                    Coord::Left((lo + hi) / rat_int(2))
                } else if let Some(n) = g.right_finite.iter().next() {
                    Coord::Right(*n)
                } else if let Some(k) = g.right_tail {
                    Coord::Right(k)
                } else {
                    unreachable!("nonempty glue piece")
                }
            }
        }
    }
}

/// Closed subset of ℕ ∪ {ω}: a finite part, optionally ω, optionally a full
/// tail `{n ≥ k} ∪ {ω}`. A tail forces ω (otherwise the set is not closed).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeqSet {
    pub finite: BTreeSet<u64>,
    pub omega: bool,
    pub tail_from: Option<u64>,
}

impl SeqSet {
    pub fn normalized(mut self) -> Result<Self> {
        if let Some(k) = self.tail_from {
            if !self.omega {
                return Err(Error::Domain(
                    "sequence tail without omega is not closed".into(),
                ));
            }
            self.finite.retain(|n| *n < k);
        }
        Ok(self)
    }

    pub fn is_empty(&self) -> bool {
        self.finite.is_empty() && !self.omega && self.tail_from.is_none()
    }

    pub fn contains_nat(&self, n: u64) -> bool {
        self.finite.contains(&n) || self.tail_from.map_or(false, |k| n >= k)
    }

    pub fn union(&self, other: &SeqSet) -> SeqSet {
        let tail_from = match (self.tail_from, other.tail_from) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let mut finite: BTreeSet<u64> = self.finite.union(&other.finite).copied().collect();
        if let Some(k) = tail_from {
            finite.retain(|n| *n < k);
        }
        SeqSet {
            finite,
            omega: self.omega || other.omega,
            tail_from,
        }
    }

    pub fn intersects(&self, other: &SeqSet) -> bool {
        if self.omega && other.omega {
            return true;
        }
        if let (Some(a), Some(_)) = (self.tail_from, other.tail_from) {
            let _ = a;
            return true; // both tails are cofinite in ℕ
        }
        if let Some(k) = self.tail_from {
            if other.finite.iter().any(|n| *n >= k) {
                return true;
            }
        }
        if let Some(k) = other.tail_from {
            if self.finite.iter().any(|n| *n >= k) {
                return true;
            }
        }
        !self.finite.is_disjoint(&other.finite)
    }

    pub fn max_finite(&self) -> Option<u64> {
        self.finite.iter().next_back().copied()
    }
}

/// Closed subset of the glue factor: an optional closed `Left` interval, a
/// finite set of `Right` points, and optionally a right tail `{Right n ≥ k}`.
/// A right tail forces `Left 0` into the left part (its topological limit).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlueSet {
    pub left: Option<(Rat, Rat)>,
    pub right_finite: BTreeSet<u64>,
    pub right_tail: Option<u64>,
}

impl GlueSet {
    pub fn normalized(mut self) -> Result<Self> {
        if let Some((lo, hi)) = &self.left {
            if lo > hi || lo.is_negative() || *hi > rat_one() {
                return Err(Error::Domain(format!(
                    "glue left interval [{}, {}] invalid",
                    lo, hi
                )));
            }
        }
        if let Some(k) = self.right_tail {
            let has_zero = self
                .left
                .as_ref()
                .map_or(false, |(lo, _)| lo.is_zero());
            if !has_zero {
                return Err(Error::Domain(
                    "glue right tail without Left 0 is not closed".into(),
                ));
            }
            self.right_finite.retain(|n| *n < k);
        }
        Ok(self)
    }

    pub fn is_empty(&self) -> bool {
        self.left.is_none() && self.right_finite.is_empty() && self.right_tail.is_none()
    }

    pub fn contains(&self, c: &Coord) -> bool {
        match c {
            Coord::Left(t) => self
                .left
                .as_ref()
                .map_or(false, |(lo, hi)| t >= lo && t <= hi),
            Coord::Right(n) => {
                self.right_finite.contains(n) || self.right_tail.map_or(false, |k| *n >= k)
            }
            _ => false,
        }
    }

    fn right_intersects(&self, other: &GlueSet) -> bool {
        if self.right_tail.is_some() && other.right_tail.is_some() {
            return true;
        }
        if let Some(k) = self.right_tail {
            if other.right_finite.iter().any(|n| *n >= k) {
                return true;
            }
        }
        if let Some(k) = other.right_tail {
            if self.right_finite.iter().any(|n| *n >= k) {
                return true;
            }
        }
        !self.right_finite.is_disjoint(&other.right_finite)
    }

    pub fn max_right_finite(&self) -> Option<u64> {
        self.right_finite.iter().next_back().copied()
    }
}

/// A primitive closed piece in one factor. Constructors normalize and reject
/// non-closed data; a `Piece` value is always nonempty and closed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Piece {
    Interval { lo: Rat, hi: Rat },
    Finite(BTreeSet<u32>),
    Seq(SeqSet),
    Glue(GlueSet),
}

impl Piece {
    pub fn interval(lo: Rat, hi: Rat) -> Result<Piece> {
        if lo > hi {
            return Err(Error::Domain(format!("empty interval [{}, {}]", lo, hi)));
        }
        Ok(Piece::Interval { lo, hi })
    }

    pub fn contains(&self, c: &Coord) -> bool {
        match (self, c) {
            (Piece::Interval { lo, hi }, Coord::Rational(q)) => q >= lo && q <= hi,
            (Piece::Finite(set), Coord::Index(i)) => set.contains(i),
            (Piece::Seq(s), Coord::Nat(n)) => s.contains_nat(*n),
            (Piece::Seq(s), Coord::Omega) => s.omega,
            (Piece::Glue(g), c) => g.contains(c),
            _ => false,
        }
    }

    pub fn intersects(&self, other: &Piece) -> bool {
        match (self, other) {
            (Piece::Interval { lo: a, hi: b }, Piece::Interval { lo: c, hi: d }) => {
                a.max(c) <= b.min(d)
            }
            (Piece::Finite(x), Piece::Finite(y)) => !x.is_disjoint(y),
            (Piece::Seq(x), Piece::Seq(y)) => x.intersects(y),
            (Piece::Glue(x), Piece::Glue(y)) => {
                let lefts = match (&x.left, &y.left) {
                    (Some((a, b)), Some((c, d))) => a.max(c) <= b.min(d),
                    _ => false,
                };
                lefts || x.right_intersects(y)
            }
            _ => false,
        }
    }

    /// Set distance `inf d_i(p, q)` between two pieces of the same factor.
    pub fn dist(&self, other: &Piece, factor: &Factor) -> Rat {
        match factor {
            Factor::MinInterval { .. } => match (self, other) {
                (Piece::Interval { lo: a, hi: b }, Piece::Interval { lo: c, hi: d }) => {
                    interval_gap(a, b, c, d)
                }
                _ => unreachable!("piece kind matches factor"),
            },
            Factor::MaxInterval { .. } | Factor::FiniteDiscrete { .. } | Factor::ConvergentSeq => {
                if self.intersects(other) {
                    rat_zero()
                } else {
                    rat_one()
                }
            }
            Factor::ExampleGlue => match (self, other) {
                (Piece::Glue(x), Piece::Glue(y)) => {
                    let mut best: Option<Rat> = None;
                    let mut push = |v: Rat| {
                        best = Some(match best.take() {
                            None => v,
                            Some(b) => b.min(v),
                        })
                    };
                    if let (Some((a, b)), Some((c, d))) = (&x.left, &y.left) {
                        push(interval_gap(a, b, c, d));
                    }
                    let x_has_right = !x.right_finite.is_empty() || x.right_tail.is_some();
                    let y_has_right = !y.right_finite.is_empty() || y.right_tail.is_some();
                    if x_has_right && y_has_right {
                        push(if x.right_intersects(y) { rat_zero() } else { rat_one() });
                    }
                    if (x.left.is_some() && y_has_right) || (y.left.is_some() && x_has_right) {
                        push(rat_one());
                    }
                    best.expect("nonempty pieces")
                }
                _ => unreachable!("piece kind matches factor"),
            },
        }
    }

    /// Point-to-piece metric distance `d_i(x, P)`.
    pub fn dist_point(&self, c: &Coord, factor: &Factor) -> Rat {
        match factor {
            Factor::MinInterval { .. } => match (self, c) {
                (Piece::Interval { lo, hi }, Coord::Rational(q)) => point_gap(q, lo, hi),
                _ => unreachable!(),
            },
            Factor::MaxInterval { .. } | Factor::FiniteDiscrete { .. } | Factor::ConvergentSeq => {
                if self.contains(c) {
                    rat_zero()
                } else {
                    rat_one()
                }
            }
            Factor::ExampleGlue => match (self, c) {
                (Piece::Glue(g), Coord::Left(t)) => {
                    let mut best: Option<Rat> = None;
                    if let Some((lo, hi)) = &g.left {
                        best = Some(point_gap(t, lo, hi));
                    }
                    if !g.right_finite.is_empty() || g.right_tail.is_some() {
                        let one = rat_one();
                        best = Some(best.map_or(one.clone(), |b| b.min(one)));
                    }
                    best.expect("nonempty piece")
                }
                (Piece::Glue(g), Coord::Right(n)) => {
                    if g.contains(c) {
                        rat_zero()
                    } else {
                        let _ = n;
                        // every other point is at distance one from Right n
                        rat_one()
                    }
                }
                _ => unreachable!(),
            },
        }
    }

    /// Point-to-piece gauge distance `inf ρ_i(x, P)`; the infimum is attained
    /// for every catalog piece, so the result is zero iff `x ∈ P`.
    pub fn gauge_point(&self, c: &Coord, factor: &Factor) -> Rat {
        match factor {
            Factor::MinInterval { .. } | Factor::MaxInterval { .. } => match (self, c) {
                (Piece::Interval { lo, hi }, Coord::Rational(q)) => point_gap(q, lo, hi),
                _ => unreachable!(),
            },
            Factor::FiniteDiscrete { .. } => {
                if self.contains(c) {
                    rat_zero()
                } else {
                    rat_one()
                }
            }
            Factor::ConvergentSeq => match (self, c) {
                (Piece::Seq(s), _) => {
                    let t = match c {
                        Coord::Nat(n) => seq_value(*n),
                        Coord::Omega => rat_zero(),
                        _ => unreachable!(),
                    };
                    let mut best: Option<Rat> = None;
                    let mut push = |v: Rat| {
                        best = Some(match best.take() {
                            None => v,
                            Some(b) => b.min(v),
                        })
                    };
                    for n in &s.finite {
                        push((seq_value(*n) - &t).abs());
                    }
                    if s.omega {
                        push(t.clone());
                    }
                    if let Some(k) = s.tail_from {
                        push(nearest_seq_value_dist(&t, k));
                    }
                    best.expect("nonempty piece")
                }
                _ => unreachable!(),
            },
            Factor::ExampleGlue => match (self, c) {
                (Piece::Glue(g), Coord::Left(t)) => {
                    let mut best: Option<Rat> = None;
                    let mut push = |v: Rat| {
                        best = Some(match best.take() {
                            None => v,
                            Some(b) => b.min(v),
                        })
                    };
                    if let Some((lo, hi)) = &g.left {
                        push(point_gap(t, lo, hi));
                    }
                    // ρ(Left t, Right n) = t + 1/(n+1): smallest over the
                    // finite part at its largest index. A right tail is
                    // dominated by Left 0, which its closedness invariant
                    // forces into the left part.
                    if let Some(n) = g.max_right_finite() {
                        push(t + seq_value(n));
                    }
                    best.expect("nonempty piece")
                }
                (Piece::Glue(g), Coord::Right(n)) => {
                    let v = seq_value(*n);
                    let mut best: Option<Rat> = None;
                    let mut push = |x: Rat| {
                        best = Some(match best.take() {
                            None => x,
                            Some(b) => b.min(x),
                        })
                    };
                    if let Some((lo, _)) = &g.left {
                        push(lo + &v);
                    }
                    for m in &g.right_finite {
                        push((seq_value(*m) - &v).abs());
                    }
                    if let Some(k) = g.right_tail {
                        if *n >= k {
                            push(rat_zero());
                        } else {
                            // nearest tail value is 1/(k+1), the largest one
                            push(&v - seq_value(k));
                        }
                    }
                    best.expect("nonempty piece")
                }
                _ => unreachable!(),
            },
        }
    }

    /// The closed metric ball `{x : d_i(x, P) ≤ r}` inside this factor.
    pub fn inflate(&self, r: &Rat, factor: &Factor) -> Piece {
        debug_assert!(!r.is_negative());
        let one = rat_one();
        match factor {
            Factor::MinInterval { lo: flo, hi: fhi } => match self {
                Piece::Interval { lo, hi } => Piece::Interval {
                    lo: (lo - r).max(flo.clone()),
                    hi: (hi + r).min(fhi.clone()),
                },
                _ => unreachable!(),
            },
            Factor::MaxInterval { .. } | Factor::FiniteDiscrete { .. } | Factor::ConvergentSeq => {
                if *r >= one {
                    factor.full_piece()
                } else {
                    self.clone()
                }
            }
            Factor::ExampleGlue => {
                if *r >= one {
                    return factor.full_piece();
                }
                match self {
                    Piece::Glue(g) => {
                        let left = g.left.as_ref().map(|(lo, hi)| {
                            ((lo - r).max(rat_zero()), (hi + r).min(rat_one()))
                        });
                        Piece::Glue(GlueSet {
                            left,
                            right_finite: g.right_finite.clone(),
                            right_tail: g.right_tail,
                        })
                    }
                    _ => unreachable!(),
                }
            }
        }
    }

    /// Closest pair of points realizing `dist(self, other)`.
    pub fn closest_pair(&self, other: &Piece, factor: &Factor) -> (Coord, Coord) {
        match factor {
            Factor::MinInterval { .. } | Factor::MaxInterval { .. } => match (self, other) {
                (Piece::Interval { lo: a, hi: b }, Piece::Interval { lo: c, hi: d }) => {
                    let (p, q) = interval_closest(a, b, c, d);
                    (Coord::Rational(p), Coord::Rational(q))
                }
                _ => unreachable!(),
            },
            Factor::FiniteDiscrete { .. } => match (self, other) {
                (Piece::Finite(x), Piece::Finite(y)) => {
                    if let Some(common) = x.intersection(y).next() {
                        (Coord::Index(*common), Coord::Index(*common))
                    } else {
                        (
                            Coord::Index(*x.iter().next().expect("nonempty")),
                            Coord::Index(*y.iter().next().expect("nonempty")),
                        )
                    }
                }
                _ => unreachable!(),
            },
            Factor::ConvergentSeq => match (self, other) {
                (Piece::Seq(x), Piece::Seq(y)) => {
                    if let Some(n) = seq_common(x, y) {
                        (n.clone(), n)
                    } else {
                        (factor.representative(self), factor.representative(other))
                    }
                }
                _ => unreachable!(),
            },
            Factor::ExampleGlue => match (self, other) {
                (Piece::Glue(x), Piece::Glue(y)) => glue_closest(x, y, self, other, factor),
                _ => unreachable!(),
            },
        }
    }
}

fn seq_common(x: &SeqSet, y: &SeqSet) -> Option<Coord> {
    if x.omega && y.omega {
        return Some(Coord::Omega);
    }
    match (x.tail_from, y.tail_from) {
        (Some(a), Some(b)) => return Some(Coord::Nat(a.max(b))),
        _ => {}
    }
    if let Some(k) = x.tail_from {
        if let Some(n) = y.finite.iter().find(|n| **n >= k) {
            return Some(Coord::Nat(*n));
        }
    }
    if let Some(k) = y.tail_from {
        if let Some(n) = x.finite.iter().find(|n| **n >= k) {
            return Some(Coord::Nat(*n));
        }
    }
    x.finite.intersection(&y.finite).next().map(|n| Coord::Nat(*n))
}

fn glue_closest(
    x: &GlueSet,
    y: &GlueSet,
    px: &Piece,
    py: &Piece,
    factor: &Factor,
) -> (Coord, Coord) {
    // Left-left contact dominates whenever it attains the set distance.
    if let (Some((a, b)), Some((c, d))) = (&x.left, &y.left) {
        let gap = interval_gap(a, b, c, d);
        if gap == px.dist(py, factor) {
            let (p, q) = interval_closest(a, b, c, d);
            return (Coord::Left(p), Coord::Left(q));
        }
    }
    // Right-right common point next.
    let xr = SeqSet {
        finite: x.right_finite.clone(),
        omega: false,
        tail_from: x.right_tail,
    };
    let yr = SeqSet {
        finite: y.right_finite.clone(),
        omega: false,
        tail_from: y.right_tail,
    };
    if let Some(Coord::Nat(n)) = seq_common(&xr, &yr) {
        return (Coord::Right(n), Coord::Right(n));
    }
    (factor.representative(px), factor.representative(py))
}

/// Distance from the nearest value `1/(n+1)` with `n ≥ k` (or 0, for ω) to `t`.
fn nearest_seq_value_dist(t: &Rat, k: u64) -> Rat {
    let vk = seq_value(k);
    if t >= &vk {
        return t - vk;
    }
    if t.is_zero() {
        return rat_zero(); // ω belongs to the tail
    }
    // 1/(n+1) ≤ t ⟺ n ≥ 1/t − 1; check the two neighbours around 1/t − 1.
    let inv = Rat::one() / t.clone();
    let lower_n = (inv.clone() - Rat::one()).floor().to_integer();
    let mut best = t.clone(); // distance to the ω value 0
    for delta in 0..=1u64 {
        let n = if lower_n.is_negative() {
            delta
        } else {
            let base: u64 = lower_n.clone().try_into().unwrap_or(u64::MAX - 1);
            base + delta
        };
        let n = n.max(k);
        let d = (seq_value(n) - t).abs();
        if d < best {
            best = d;
        }
    }
    best
}

fn interval_gap(a: &Rat, b: &Rat, c: &Rat, d: &Rat) -> Rat {
    let lo = a.max(c);
    let hi = b.min(d);
    if lo <= hi {
        rat_zero()
    } else {
        lo - hi
    }
}

fn point_gap(q: &Rat, lo: &Rat, hi: &Rat) -> Rat {
    if q < lo {
        lo - q
    } else if q > hi {
        q - hi
    } else {
        rat_zero()
    }
}

fn interval_closest(a: &Rat, b: &Rat, c: &Rat, d: &Rat) -> (Rat, Rat) {
    let lo = a.max(c);
    let hi = b.min(d);
    if lo <= hi {
        (lo.clone(), lo.clone())
    } else if b < c {
        (b.clone(), c.clone())
    } else {
        (a.clone(), d.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn min01() -> Factor {
        Factor::MinInterval {
            lo: rat_int(0),
            hi: rat_int(1),
        }
    }

    #[test]
    fn glue_metric_matches_example() {
        let f = Factor::ExampleGlue;
        let l0 = Coord::Left(rat_int(0));
        let l_half = Coord::Left(rat(1, 2));
        let r3 = Coord::Right(3);
        let r7 = Coord::Right(7);
        assert_eq!(f.dist(&l0, &l_half), rat(1, 2));
        assert_eq!(f.dist(&l0, &r3), rat_int(1));
        assert_eq!(f.dist(&r3, &r7), rat_int(1));
        assert_eq!(f.dist(&r3, &r3), rat_int(0));
        // gauge: Right n approaches Left 0
        assert_eq!(f.gauge(&l0, &r3), rat(1, 4));
        assert_eq!(f.gauge(&r3, &r7), rat(1, 4) - rat(1, 8));
    }

    #[test]
    fn seq_tail_requires_omega() {
        let bad = SeqSet {
            finite: BTreeSet::new(),
            omega: false,
            tail_from: Some(3),
        };
        assert!(bad.normalized().is_err());
        let good = SeqSet {
            finite: [1u64, 5].into_iter().collect(),
            omega: true,
            tail_from: Some(4),
        }
        .normalized()
        .unwrap();
        assert_eq!(good.finite.len(), 1); // 5 absorbed by the tail
        assert!(good.contains_nat(9));
    }

    #[test]
    fn glue_tail_requires_left_zero() {
        let bad = GlueSet {
            left: None,
            right_finite: BTreeSet::new(),
            right_tail: Some(2),
        };
        assert!(bad.normalized().is_err());
        let good = GlueSet {
            left: Some((rat_int(0), rat(1, 4))),
            right_finite: BTreeSet::new(),
            right_tail: Some(2),
        };
        assert!(good.normalized().is_ok());
    }

    #[test]
    fn inflate_min_interval_clips() {
        let f = min01();
        let p = Piece::interval(rat(1, 5), rat(2, 5)).unwrap();
        let b = p.inflate(&rat(3, 10), &f);
        assert_eq!(
            b,
            Piece::Interval {
                lo: rat_int(0),
                hi: rat(7, 10)
            }
        );
    }

    #[test]
    fn inflate_max_interval_stays_put_below_one() {
        let f = Factor::MaxInterval {
            lo: rat_int(0),
            hi: rat_int(1),
        };
        let p = Piece::interval(rat(1, 5), rat(2, 5)).unwrap();
        assert_eq!(p.inflate(&rat(1, 2), &f), p);
        assert_eq!(
            p.inflate(&rat_int(1), &f),
            Piece::Interval {
                lo: rat_int(0),
                hi: rat_int(1)
            }
        );
    }

    #[test]
    fn seq_gauge_distance_attained() {
        let f = Factor::ConvergentSeq;
        let tail = Piece::Seq(
            SeqSet {
                finite: BTreeSet::new(),
                omega: true,
                tail_from: Some(4),
            }
            .normalized()
            .unwrap(),
        );
        // point 1 has value 1/2; nearest tail value is 1/5
        assert_eq!(tail.gauge_point(&Coord::Nat(1), &f), rat(1, 2) - rat(1, 5));
        // omega lies in the tail
        assert_eq!(tail.gauge_point(&Coord::Omega, &f), rat_int(0));
        // a nat deep in the tail
        assert_eq!(tail.gauge_point(&Coord::Nat(9), &f), rat_int(0));
    }

    #[test]
    fn glue_gauge_tail_dominated_by_left_zero() {
        let f = Factor::ExampleGlue;
        let g = Piece::Glue(
            GlueSet {
                left: Some((rat_int(0), rat(1, 10))),
                right_finite: BTreeSet::new(),
                right_tail: Some(3),
            }
            .normalized()
            .unwrap(),
        );
        // ρ(Left 1/2, piece): nearest left point is 1/10 → 2/5; any tail right
        // costs at least 1/2.
        assert_eq!(g.gauge_point(&Coord::Left(rat(1, 2)), &f), rat(2, 5));
        // Right 1 (value 1/2): to tail values ≤ 1/4 → 1/4; to Left 0 → 1/2.
        assert_eq!(g.gauge_point(&Coord::Right(1), &f), rat(1, 4));
    }
}
