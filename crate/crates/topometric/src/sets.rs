//! Exact closed-set machinery: product boxes, finite unions of boxes, and
//! the representable closed-set algebra (box unions plus shifted gauge
//! half-spaces). Membership is decidable at every rational point with no
//! tolerance; set distances between box unions are exact and come with the
//! minimizing pair of points.

use crate::error::{Error, Result};
use crate::exact::{rat_zero, ExtDist, Rat};
use crate::factor::{Coord, Factor, Piece};
use crate::space::{Point, Space};
use num_traits::Signed;
use std::fmt;

/// A product of one nonempty closed piece per factor; closed in the space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductBox {
    pub pieces: Vec<Piece>,
}

impl ProductBox {
    pub fn full(space: &Space) -> ProductBox {
        ProductBox {
            pieces: space.factors().iter().map(|f| f.full_piece()).collect(),
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.pieces
            .iter()
            .zip(&p.coords)
            .all(|(piece, c)| piece.contains(c))
    }

    pub fn intersects(&self, other: &ProductBox) -> bool {
        self.pieces
            .iter()
            .zip(&other.pieces)
            .all(|(a, b)| a.intersects(b))
    }

    /// `d(A, B) = max_i d_i(A_i, B_i)` under the supremum metric: each
    /// coordinate minimizes independently.
    pub fn dist(&self, other: &ProductBox, space: &Space) -> Rat {
        let mut best = rat_zero();
        for (i, f) in space.factors().iter().enumerate() {
            let d = self.pieces[i].dist(&other.pieces[i], f);
            if d > best {
                best = d;
            }
        }
        best
    }

    pub fn dist_point(&self, p: &Point, space: &Space) -> Rat {
        let mut best = rat_zero();
        for (i, f) in space.factors().iter().enumerate() {
            let d = self.pieces[i].dist_point(&p.coords[i], f);
            if d > best {
                best = d;
            }
        }
        best
    }

    /// Exact gauge distance from a point: `ρ` is a weighted sum, so the
    /// per-factor infima add up.
    pub fn gauge_point(&self, p: &Point, space: &Space) -> Rat {
        let one = crate::exact::rat_one();
        let mut total = rat_zero();
        for (i, f) in space.factors().iter().enumerate() {
            let g = self.pieces[i].gauge_point(&p.coords[i], f).min(one.clone());
            total += space.weight(i) * g;
        }
        total
    }

    pub fn witness_pair(&self, other: &ProductBox, space: &Space) -> (Point, Point) {
        let mut a = Vec::with_capacity(space.dim());
        let mut b = Vec::with_capacity(space.dim());
        for (i, f) in space.factors().iter().enumerate() {
            let (p, q) = self.pieces[i].closest_pair(&other.pieces[i], f);
            a.push(p);
            b.push(q);
        }
        (Point { coords: a }, Point { coords: b })
    }

    pub fn inflate(&self, r: &Rat, space: &Space) -> ProductBox {
        ProductBox {
            pieces: space
                .factors()
                .iter()
                .zip(&self.pieces)
                .map(|(f, p)| p.inflate(r, f))
                .collect(),
        }
    }

    pub fn intersect(&self, other: &ProductBox, space: &Space) -> Option<ProductBox> {
        let mut pieces = Vec::with_capacity(space.dim());
        for (i, f) in space.factors().iter().enumerate() {
            pieces.push(intersect_pieces(&self.pieces[i], &other.pieces[i], f)?);
        }
        Some(ProductBox { pieces })
    }

    pub fn is_full(&self, space: &Space) -> bool {
        self.pieces
            .iter()
            .zip(space.factors())
            .all(|(p, f)| p == &f.full_piece())
    }
}

fn intersect_pieces(a: &Piece, b: &Piece, factor: &Factor) -> Option<Piece> {
    match (a, b) {
        (Piece::Interval { lo: x, hi: y }, Piece::Interval { lo: u, hi: v }) => {
            let lo = x.max(u).clone();
            let hi = y.min(v).clone();
            (lo <= hi).then_some(Piece::Interval { lo, hi })
        }
        (Piece::Finite(x), Piece::Finite(y)) => {
            let z: std::collections::BTreeSet<u32> = x.intersection(y).copied().collect();
            (!z.is_empty()).then_some(Piece::Finite(z))
        }
        (Piece::Seq(x), Piece::Seq(y)) => {
            let tail_from = match (x.tail_from, y.tail_from) {
                (Some(a), Some(b)) => Some(a.max(b)),
                _ => None,
            };
            let mut finite: std::collections::BTreeSet<u64> = x
                .finite
                .iter()
                .filter(|n| y.contains_nat(**n))
                .chain(y.finite.iter().filter(|n| x.contains_nat(**n)))
                .copied()
                .collect();
            if let Some(k) = tail_from {
                finite.retain(|n| *n < k);
            }
            let omega = x.omega && y.omega;
            let s = crate::factor::SeqSet {
                finite,
                omega,
                tail_from,
            };
            // Intersection of closed sets: a surviving tail keeps ω with it.
            (!s.is_empty()).then_some(Piece::Seq(s))
        }
        (Piece::Glue(x), Piece::Glue(y)) => {
            let left = match (&x.left, &y.left) {
                (Some((a, b)), Some((c, d))) => {
                    let lo = a.max(c).clone();
                    let hi = b.min(d).clone();
                    (lo <= hi).then_some((lo, hi))
                }
                _ => None,
            };
            let right_tail = match (x.right_tail, y.right_tail) {
                // tails force Left 0 in both, so 0 survives in `left`
                (Some(a), Some(b)) => Some(a.max(b)),
                _ => None,
            };
            let in_right = |g: &crate::factor::GlueSet, n: u64| {
                g.right_finite.contains(&n) || g.right_tail.map_or(false, |k| n >= k)
            };
            let mut right_finite: std::collections::BTreeSet<u64> = x
                .right_finite
                .iter()
                .filter(|n| in_right(y, **n))
                .chain(y.right_finite.iter().filter(|n| in_right(x, **n)))
                .copied()
                .collect();
            if let Some(k) = right_tail {
                right_finite.retain(|n| *n < k);
            }
            let g = crate::factor::GlueSet {
                left,
                right_finite,
                right_tail,
            };
            (!g.is_empty()).then_some(Piece::Glue(g))
        }
        _ => None,
    }
}

/// Finite union of product boxes; the exact closed-set currency.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BoxUnion {
    pub boxes: Vec<ProductBox>,
}

impl BoxUnion {
    pub fn empty() -> BoxUnion {
        BoxUnion { boxes: Vec::new() }
    }

    pub fn full(space: &Space) -> BoxUnion {
        BoxUnion {
            boxes: vec![ProductBox::full(space)],
        }
    }

    pub fn from_boxes(boxes: Vec<ProductBox>) -> BoxUnion {
        BoxUnion { boxes }
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    pub fn is_full(&self, space: &Space) -> bool {
        self.boxes.iter().any(|b| b.is_full(space))
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.boxes.iter().any(|b| b.contains(p))
    }

    pub fn union_with(&mut self, other: &BoxUnion) {
        self.boxes.extend(other.boxes.iter().cloned());
    }

    pub fn union(mut self, other: &BoxUnion) -> BoxUnion {
        self.union_with(other);
        self
    }

    pub fn intersect(&self, other: &BoxUnion, space: &Space) -> BoxUnion {
        let mut out = Vec::new();
        for a in &self.boxes {
            for b in &other.boxes {
                if let Some(c) = a.intersect(b, space) {
                    out.push(c);
                }
            }
        }
        BoxUnion { boxes: out }.coalesced(space)
    }

    pub fn intersects(&self, other: &BoxUnion) -> bool {
        self.boxes
            .iter()
            .any(|a| other.boxes.iter().any(|b| a.intersects(b)))
    }

    /// Exact metric distance from a point (∞ for the empty set).
    pub fn dist_point(&self, p: &Point, space: &Space) -> ExtDist {
        self.boxes
            .iter()
            .map(|b| ExtDist::finite(b.dist_point(p, space)))
            .fold(ExtDist::Infinite, ExtDist::min)
    }

    /// Exact gauge distance from a point (∞ for the empty set); zero iff the
    /// point belongs to the union.
    pub fn gauge_point(&self, p: &Point, space: &Space) -> ExtDist {
        self.boxes
            .iter()
            .map(|b| ExtDist::finite(b.gauge_point(p, space)))
            .fold(ExtDist::Infinite, ExtDist::min)
    }

    /// The closed metric neighbourhood `{x : d(x, self) ≤ r}`, again a box
    /// union (computed factor by factor), hence topologically closed.
    pub fn inflate(&self, r: &Rat, space: &Space) -> Result<BoxUnion> {
        if r.is_negative() {
            return Err(Error::Precondition(format!("negative radius {}", r)));
        }
        Ok(BoxUnion {
            boxes: self.boxes.iter().map(|b| b.inflate(r, space)).collect(),
        }
        .coalesced(space))
    }

    /// Merge boxes that differ in at most one factor by mergeable pieces.
    /// Keeps 1-factor unions canonical-small and trims staircase unions.
    pub fn coalesced(mut self, space: &Space) -> BoxUnion {
        // Drop exact duplicates and boxes contained in another box.
        self.boxes.dedup();
        let mut changed = true;
        let mut rounds = 0;
        while changed && rounds < 4 {
            changed = false;
            rounds += 1;
            'outer: for i in 0..self.boxes.len() {
                for j in (i + 1)..self.boxes.len() {
                    if let Some(merged) = try_merge(&self.boxes[i], &self.boxes[j], space) {
                        self.boxes[i] = merged;
                        self.boxes.swap_remove(j);
                        changed = true;
                        break 'outer;
                    }
                }
            }
        }
        self
    }
}

/// Merge two boxes when they agree on all factors but one and the differing
/// pieces union into a single piece (or one box absorbs the other).
fn try_merge(a: &ProductBox, b: &ProductBox, space: &Space) -> Option<ProductBox> {
    let mut diff = None;
    for i in 0..space.dim() {
        if a.pieces[i] != b.pieces[i] {
            if diff.is_some() {
                return None;
            }
            diff = Some(i);
        }
    }
    let Some(i) = diff else {
        return Some(a.clone()); // identical
    };
    let merged = union_pieces(&a.pieces[i], &b.pieces[i])?;
    let mut pieces = a.pieces.clone();
    pieces[i] = merged;
    Some(ProductBox { pieces })
}

fn union_pieces(a: &Piece, b: &Piece) -> Option<Piece> {
    match (a, b) {
        (Piece::Interval { lo: x, hi: y }, Piece::Interval { lo: u, hi: v }) => {
            // union is an interval iff they overlap or touch
            if x.max(u) <= y.min(v) {
                Some(Piece::Interval {
                    lo: x.min(u).clone(),
                    hi: y.max(v).clone(),
                })
            } else {
                None
            }
        }
        (Piece::Finite(x), Piece::Finite(y)) => Some(Piece::Finite(x.union(y).copied().collect())),
        (Piece::Seq(x), Piece::Seq(y)) => Some(Piece::Seq(x.union(y))),
        (Piece::Glue(x), Piece::Glue(y)) => {
            let left = match (&x.left, &y.left) {
                (Some((a1, b1)), Some((a2, b2))) => {
                    if a1.max(a2) <= b1.min(b2) {
                        Some((a1.min(a2).clone(), b1.max(b2).clone()))
                    } else {
                        return None; // two separated left intervals: keep boxes apart
                    }
                }
                (Some(l), None) | (None, Some(l)) => Some(l.clone()),
                (None, None) => None,
            };
            let right_tail = match (x.right_tail, y.right_tail) {
                (Some(p), Some(q)) => Some(p.min(q)),
                (p, q) => p.or(q),
            };
            let mut right_finite: std::collections::BTreeSet<u64> =
                x.right_finite.union(&y.right_finite).copied().collect();
            if let Some(k) = right_tail {
                right_finite.retain(|n| *n < k);
            }
            // closedness: a surviving tail needs Left 0
            if right_tail.is_some() && !left.as_ref().map_or(false, |(lo, _)| lo.is_zero()) {
                return None;
            }
            Some(Piece::Glue(crate::factor::GlueSet {
                left,
                right_finite,
                right_tail,
            }))
        }
        _ => None,
    }
}

/// Exact set distance between two box unions, with a minimizing pair.
/// Empty operand ⟹ `∞` and no witness.
pub fn dist_sets(space: &Space, a: &BoxUnion, b: &BoxUnion) -> (ExtDist, Option<(Point, Point)>) {
    let mut best: Option<(Rat, Point, Point)> = None;
    for ba in &a.boxes {
        for bb in &b.boxes {
            let d = ba.dist(bb, space);
            let better = match &best {
                None => true,
                Some((cur, _, _)) => &d < cur,
            };
            if better {
                let (p, q) = ba.witness_pair(bb, space);
                best = Some((d, p, q));
            }
        }
    }
    match best {
        Some((d, p, q)) => (ExtDist::finite(d), Some((p, q))),
        None => (ExtDist::Infinite, None),
    }
}

/// A shifted gauge half-space `{x : ρ(x, A) − ρ(x, B) ≥ θ}`; closed because
/// both gauge distances are continuous in the topology.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfSpace {
    pub near: BoxUnion,
    pub far: BoxUnion,
    pub theta: Rat,
}

impl HalfSpace {
    pub fn contains(&self, p: &Point, space: &Space) -> bool {
        let a = self.near.gauge_point(p, space);
        let b = self.far.gauge_point(p, space);
        match (a, b) {
            (ExtDist::Infinite, _) => true,
            (ExtDist::Finite(_), ExtDist::Infinite) => false,
            (ExtDist::Finite(x), ExtDist::Finite(y)) => x - y >= self.theta,
        }
    }
}

/// Machine-representable closed set: a finite union of boxes and gauge
/// half-spaces. Membership at rational points is exact.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RepClosedSet {
    pub boxes: BoxUnion,
    pub halves: Vec<HalfSpace>,
}

impl RepClosedSet {
    pub fn from_boxes(boxes: BoxUnion) -> RepClosedSet {
        RepClosedSet {
            boxes,
            halves: Vec::new(),
        }
    }

    pub fn contains(&self, p: &Point, space: &Space) -> bool {
        self.boxes.contains(p) || self.halves.iter().any(|h| h.contains(p, space))
    }

    pub fn definitely_empty(&self) -> bool {
        self.boxes.is_empty() && self.halves.is_empty()
    }
}

/// An open set kept as a predicate: either the complement of a representable
/// closed set or a strict gauge comparison.
#[derive(Clone, Debug)]
pub enum OpenSet {
    Empty,
    Full,
    ComplementOf(RepClosedSet),
    /// `{x : ρ(x, near) < ρ(x, far)}`
    GaugeLess { near: BoxUnion, far: BoxUnion },
}

impl OpenSet {
    pub fn contains(&self, p: &Point, space: &Space) -> bool {
        match self {
            OpenSet::Empty => false,
            OpenSet::Full => true,
            OpenSet::ComplementOf(c) => !c.contains(p, space),
            OpenSet::GaugeLess { near, far } => {
                near.gauge_point(p, space) < far.gauge_point(p, space)
            }
        }
    }
}

impl fmt::Display for BoxUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.boxes.is_empty() {
            return write!(f, "(empty)");
        }
        for (i, b) in self.boxes.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            for (j, p) in b.pieces.iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", crate::parse::piece_to_string(p))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int};
    use crate::factor::Coord;
    use crate::exact::rat_zero;

    fn min01() -> Space {
        Space::new(vec![Factor::MinInterval {
            lo: rat_int(0),
            hi: rat_int(1),
        }])
        .unwrap()
    }

    fn iv(space: &Space, lo: Rat, hi: Rat) -> BoxUnion {
        let _ = space;
        BoxUnion::from_boxes(vec![ProductBox {
            pieces: vec![Piece::Interval { lo, hi }],
        }])
    }

    #[test]
    fn interval_gap_distance() {
        let s = min01();
        let a = iv(&s, rat_int(0), rat(1, 5));
        let b = iv(&s, rat(4, 5), rat_int(1));
        let (d, w) = dist_sets(&s, &a, &b);
        assert_eq!(d, ExtDist::finite(rat(3, 5)));
        let (p, q) = w.unwrap();
        assert_eq!(s.dist(&p, &q).unwrap(), rat(3, 5));
        assert!(a.contains(&p) && b.contains(&q));
    }

    #[test]
    fn empty_operand_is_infinite() {
        let s = min01();
        let a = iv(&s, rat_int(0), rat(1, 5));
        let (d, w) = dist_sets(&s, &a, &BoxUnion::empty());
        assert_eq!(d, ExtDist::Infinite);
        assert!(w.is_none());
    }

    #[test]
    fn two_factor_set_distance_minimizes_per_coordinate() {
        let s = Space::new(vec![
            Factor::MaxInterval {
                lo: rat_int(0),
                hi: rat_int(1),
            },
            Factor::MinInterval {
                lo: rat_int(0),
                hi: rat_int(1),
            },
        ])
        .unwrap();
        let a = BoxUnion::from_boxes(vec![ProductBox {
            pieces: vec![
                Piece::Interval {
                    lo: rat(1, 5),
                    hi: rat(1, 5),
                },
                Piece::Interval {
                    lo: rat_int(0),
                    hi: rat(1, 10),
                },
            ],
        }]);
        let b = BoxUnion::from_boxes(vec![ProductBox {
            pieces: vec![
                Piece::Interval {
                    lo: rat(1, 5),
                    hi: rat(1, 5),
                },
                Piece::Interval {
                    lo: rat(1, 2),
                    hi: rat(3, 5),
                },
            ],
        }]);
        let (d, _) = dist_sets(&s, &a, &b);
        // shared max-coordinate contributes 0; the min factor gap is 2/5
        assert_eq!(d, ExtDist::finite(rat(2, 5)));
    }

    #[test]
    fn inflation_is_exact_ball_membership() {
        let s = min01();
        let a = iv(&s, rat(1, 5), rat(2, 5));
        let ball = a.inflate(&rat(3, 10), &s).unwrap();
        let inside = Point {
            coords: vec![Coord::Rational(rat(7, 10))],
        };
        let outside = Point {
            coords: vec![Coord::Rational(rat(71, 100))],
        };
        assert!(ball.contains(&inside));
        assert!(!ball.contains(&outside));
        assert!(a.inflate(&rat(-1, 2), &s).is_err());
    }

    #[test]
    fn halfspace_membership_and_closedness_predicates() {
        let s = min01();
        let near = iv(&s, rat_int(0), rat(1, 10));
        let far = iv(&s, rat(9, 10), rat_int(1));
        let h = HalfSpace {
            near,
            far,
            theta: rat_zero(),
        };
        // ρ(x, near) − ρ(x, far) ≥ 0 ⟺ x at least as gauge-close to `far`
        let close_to_far = Point {
            coords: vec![Coord::Rational(rat(4, 5))],
        };
        let close_to_near = Point {
            coords: vec![Coord::Rational(rat(1, 5))],
        };
        assert!(h.contains(&close_to_far, &s));
        assert!(!h.contains(&close_to_near, &s));
    }

    #[test]
    fn coalesce_merges_touching_intervals() {
        let s = min01();
        let u = iv(&s, rat_int(0), rat(1, 2)).union(&iv(&s, rat(1, 2), rat_int(1)));
        let c = u.coalesced(&s);
        assert_eq!(c.boxes.len(), 1);
        assert!(c.is_full(&s));
    }
}
