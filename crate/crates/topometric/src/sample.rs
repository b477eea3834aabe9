//! Seeded deterministic sampling: points, grids, and the structural
//! gauge-convergent sequences each factor supports. Identical seeds give
//! identical samples, so every refutation-style report is reproducible.

use crate::exact::{rat_int, Rat};
use crate::factor::{Coord, Factor, Piece};
use crate::sets::{BoxUnion, ProductBox};
use crate::space::{Point, Space};
use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Sampler {
    space: Space,
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(space: Space, seed: u64) -> Sampler {
        Sampler {
            space,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    fn dyadic_in(&mut self, lo: &Rat, hi: &Rat, denom_pow: u32) -> Rat {
        let steps = 1u64 << denom_pow;
        let k = self.rng.gen_range(0..=steps);
        lo + (hi - lo) * Rat::new(BigInt::from(k), BigInt::from(steps))
    }

    pub fn coord(&mut self, factor: &Factor) -> Coord {
        match factor {
            Factor::MinInterval { lo, hi } | Factor::MaxInterval { lo, hi } => {
                Coord::Rational(self.dyadic_in(lo, hi, 7))
            }
            Factor::FiniteDiscrete { size } => Coord::Index(self.rng.gen_range(0..*size)),
            Factor::ConvergentSeq => {
                if self.rng.gen_ratio(1, 6) {
                    Coord::Omega
                } else {
                    Coord::Nat(self.rng.gen_range(0..24))
                }
            }
            Factor::ExampleGlue => {
                if self.rng.gen_bool(0.5) {
                    let (z, o) = (rat_int(0), rat_int(1));
                    Coord::Left(self.dyadic_in(&z, &o, 7))
                } else {
                    Coord::Right(self.rng.gen_range(0..24))
                }
            }
        }
    }

    pub fn point(&mut self) -> Point {
        let factors: Vec<Factor> = self.space.factors().to_vec();
        Point {
            coords: factors.iter().map(|f| self.coord(f)).collect(),
        }
    }

    /// A point of a given box union (uniform over boxes, then per piece).
    pub fn point_in(&mut self, set: &BoxUnion) -> Option<Point> {
        if set.is_empty() {
            return None;
        }
        let idx = self.rng.gen_range(0..set.boxes.len());
        let b = set.boxes[idx].clone();
        let factors: Vec<Factor> = self.space.factors().to_vec();
        let coords = factors
            .iter()
            .zip(&b.pieces)
            .map(|(f, p)| self.coord_in_piece(f, p))
            .collect();
        Some(Point { coords })
    }

    fn coord_in_piece(&mut self, factor: &Factor, piece: &Piece) -> Coord {
        match piece {
            Piece::Interval { lo, hi } => Coord::Rational(self.dyadic_in(lo, hi, 7)),
            Piece::Finite(set) => {
                let items: Vec<u32> = set.iter().copied().collect();
                Coord::Index(items[self.rng.gen_range(0..items.len())])
            }
            Piece::Seq(s) => {
                let mut options: Vec<Coord> = s.finite.iter().map(|n| Coord::Nat(*n)).collect();
                if s.omega {
                    options.push(Coord::Omega);
                }
                if let Some(k) = s.tail_from {
                    for extra in 0..6u64 {
                        options.push(Coord::Nat(k + extra * extra));
                    }
                }
                options.swap_remove(self.rng.gen_range(0..options.len()))
            }
            Piece::Glue(g) => {
                let mut options: Vec<Coord> = Vec::new();
                if let Some((lo, hi)) = &g.left {
                    options.push(Coord::Left(self.dyadic_in(lo, hi, 7)));
                }
                for n in &g.right_finite {
                    options.push(Coord::Right(*n));
                }
                if let Some(k) = g.right_tail {
                    for extra in 0..4u64 {
                        options.push(Coord::Right(k + extra * extra));
                    }
                }
                options.swap_remove(self.rng.gen_range(0..options.len()))
            }
        }
    }

    /// A gauge-convergent sequence toward `target`, following the factor's
    /// convergence structure (interval shrink, n → ω, Right n → Left 0).
    /// The k-th term is within gauge distance ~2^{-k} of the target.
    pub fn converging_sequence(&mut self, target: &Point, len: usize) -> Vec<Point> {
        let factors: Vec<Factor> = self.space.factors().to_vec();
        (1..=len)
            .map(|k| Point {
                coords: factors
                    .iter()
                    .zip(&target.coords)
                    .map(|(f, c)| converging_coord(f, c, k as u32))
                    .collect(),
            })
            .collect()
    }

    /// Deterministic sub-sample of at most `budget` items from `items`.
    pub fn subsample<T: Clone>(&mut self, items: &[T], budget: usize) -> Vec<T> {
        if items.len() <= budget {
            return items.to_vec();
        }
        let mut picked = Vec::with_capacity(budget);
        for _ in 0..budget {
            picked.push(items[self.rng.gen_range(0..items.len())].clone());
        }
        picked
    }
}

fn converging_coord(factor: &Factor, c: &Coord, k: u32) -> Coord {
    let step = crate::exact::pow2_neg(k + 1);
    match (factor, c) {
        (Factor::MinInterval { lo, hi } | Factor::MaxInterval { lo, hi }, Coord::Rational(q)) => {
            let moved = if q < hi { q + &step } else { q - &step };
            let clipped = moved.max(lo.clone()).min(hi.clone());
            Coord::Rational(clipped)
        }
        (Factor::FiniteDiscrete { .. }, c) => c.clone(),
        (Factor::ConvergentSeq, Coord::Omega) => Coord::Nat((k as u64 + 1) * 4),
        (Factor::ConvergentSeq, Coord::Nat(n)) => Coord::Nat(*n),
        (Factor::ExampleGlue, Coord::Left(t)) => {
            if t.is_zero() {
                // the interesting direction: naturals crash into Left 0
                Coord::Right((k as u64 + 1) * 4)
            } else {
                let moved = (t - step).max(rat_int(0));
                Coord::Left(moved)
            }
        }
        (Factor::ExampleGlue, Coord::Right(n)) => Coord::Right(*n),
        _ => c.clone(),
    }
}

/// Per-factor grid coordinates at a dyadic mesh, clipped to a piece.
pub fn piece_grid(factor: &Factor, piece: &Piece, mesh_pow: u32) -> Vec<Coord> {
    match piece {
        Piece::Interval { lo, hi } => rat_grid(lo, hi, mesh_pow)
            .into_iter()
            .map(Coord::Rational)
            .collect(),
        Piece::Finite(set) => set.iter().map(|i| Coord::Index(*i)).collect(),
        Piece::Seq(s) => {
            let mut out: Vec<Coord> = s.finite.iter().map(|n| Coord::Nat(*n)).collect();
            if let Some(kk) = s.tail_from {
                for extra in [0u64, 1, 2, 5, 13, 40] {
                    out.push(Coord::Nat(kk + extra));
                }
            }
            if s.omega {
                out.push(Coord::Omega);
            }
            out
        }
        Piece::Glue(g) => {
            let mut out: Vec<Coord> = Vec::new();
            if let Some((lo, hi)) = &g.left {
                out.extend(rat_grid(lo, hi, mesh_pow).into_iter().map(Coord::Left));
            }
            for n in &g.right_finite {
                out.push(Coord::Right(*n));
            }
            if let Some(kk) = g.right_tail {
                for extra in [0u64, 1, 2, 5, 13, 40] {
                    out.push(Coord::Right(kk + extra));
                }
            }
            out
        }
    }
    .tap_dedup()
}

fn rat_grid(lo: &Rat, hi: &Rat, mesh_pow: u32) -> Vec<Rat> {
    let mesh = crate::exact::pow2_neg(mesh_pow);
    let mut out = Vec::new();
    // align to multiples of the mesh inside [lo, hi], endpoints included
    let start = (lo / &mesh).ceil();
    let end = (hi / &mesh).floor();
    out.push(lo.clone());
    let mut k = start;
    while k <= end {
        let v = &k * &mesh;
        if &v > lo && &v < hi {
            out.push(v);
        }
        k += Rat::from_integer(BigInt::from(1));
    }
    if hi > lo {
        out.push(hi.clone());
    }
    out
}

trait TapDedup {
    fn tap_dedup(self) -> Self;
}

impl TapDedup for Vec<Coord> {
    fn tap_dedup(mut self) -> Self {
        self.sort();
        self.dedup();
        self
    }
}

/// Grid points of a whole box union (mesh per interval-like factor), with a
/// deterministic budget cut applied by the caller if needed.
pub fn set_grid(space: &Space, set: &BoxUnion, mesh_pow: u32, cap: usize) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::new();
    for b in &set.boxes {
        let per_factor: Vec<Vec<Coord>> = space
            .factors()
            .iter()
            .zip(&b.pieces)
            .map(|(f, p)| piece_grid(f, p, mesh_pow))
            .collect();
        cartesian(&per_factor, &mut out, cap);
        if out.len() >= cap {
            break;
        }
    }
    out.sort();
    out.dedup();
    out
}

fn cartesian(per_factor: &[Vec<Coord>], out: &mut Vec<Point>, cap: usize) {
    let mut idx = vec![0usize; per_factor.len()];
    loop {
        if out.len() >= cap {
            return;
        }
        out.push(Point {
            coords: idx
                .iter()
                .zip(per_factor)
                .map(|(i, v)| v[*i].clone())
                .collect(),
        });
        let mut carry = per_factor.len();
        for i in (0..per_factor.len()).rev() {
            idx[i] += 1;
            if idx[i] < per_factor[i].len() {
                carry = i;
                break;
            }
            idx[i] = 0;
        }
        if carry == per_factor.len() {
            return;
        }
    }
}

/// Grid over the full space.
pub fn space_grid(space: &Space, mesh_pow: u32, cap: usize) -> Vec<Point> {
    set_grid(space, &BoxUnion::full(space), mesh_pow, cap)
}

/// Convenience: a full box over one factor piece in a 1-factor space.
pub fn single_factor_box(piece: Piece) -> ProductBox {
    ProductBox {
        pieces: vec![piece],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use num_traits::Zero;

    #[test]
    fn sampling_is_deterministic_per_seed() {
        let s = Space::new(vec![Factor::ExampleGlue, Factor::ConvergentSeq]).unwrap();
        let a: Vec<Point> = {
            let mut smp = Sampler::new(s.clone(), 11);
            (0..10).map(|_| smp.point()).collect()
        };
        let b: Vec<Point> = {
            let mut smp = Sampler::new(s.clone(), 11);
            (0..10).map(|_| smp.point()).collect()
        };
        assert_eq!(a, b);
    }

    #[test]
    fn converging_sequences_converge_in_gauge() {
        let s = Space::new(vec![Factor::ExampleGlue]).unwrap();
        let mut smp = Sampler::new(s.clone(), 3);
        let target = Point {
            coords: vec![Coord::Left(rat(0, 1))],
        };
        let seq = smp.converging_sequence(&target, 10);
        let last_gap = s.gauge(&seq[9], &target).unwrap();
        let first_gap = s.gauge(&seq[0], &target).unwrap();
        assert!(last_gap < first_gap);
        assert!(!last_gap.is_zero()); // approaches through Right points
    }

    #[test]
    fn rat_grid_includes_endpoints_and_mesh_points() {
        let g = rat_grid(&rat(1, 5), &rat(4, 5), 2);
        assert!(g.contains(&rat(1, 5)));
        assert!(g.contains(&rat(4, 5)));
        assert!(g.contains(&rat(1, 2)));
        assert!(g.contains(&rat(1, 4)));
    }
}
