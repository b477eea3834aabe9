//! Exact rational scalars and the extended distance value `[0, ∞]`.
//!
//! Every comparison that decides a strict inequality in the construction
//! (ledger conditions, separation certificates, membership) runs on
//! `BigRational`, never on floats.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_zero() -> Rat {
    Rat::zero()
}

pub fn rat_one() -> Rat {
    Rat::one()
}

/// 2^{-k} as an exact rational.
pub fn pow2_neg(k: u32) -> Rat {
    Rat::new(BigInt::one(), BigInt::one() << k)
}

/// Distance value in `[0, ∞]`. `Infinite` absorbs under `max` and `+`,
/// and is the distance to an empty set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtDist {
    Finite(Rat),
    Infinite,
}

impl ExtDist {
    pub fn zero() -> Self {
        ExtDist::Finite(Rat::zero())
    }

    pub fn finite(q: Rat) -> Self {
        debug_assert!(!q.is_negative(), "distances are nonnegative");
        ExtDist::Finite(q)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtDist::Finite(q) if q.is_zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtDist::Finite(_))
    }

    pub fn as_finite(&self) -> Option<&Rat> {
        match self {
            ExtDist::Finite(q) => Some(q),
            ExtDist::Infinite => None,
        }
    }

    pub fn max(self, other: ExtDist) -> ExtDist {
        match (self, other) {
            (ExtDist::Infinite, _) | (_, ExtDist::Infinite) => ExtDist::Infinite,
            (ExtDist::Finite(a), ExtDist::Finite(b)) => ExtDist::Finite(a.max(b)),
        }
    }

    pub fn min(self, other: ExtDist) -> ExtDist {
        match (self, other) {
            (ExtDist::Infinite, d) | (d, ExtDist::Infinite) => d,
            (ExtDist::Finite(a), ExtDist::Finite(b)) => ExtDist::Finite(a.min(b)),
        }
    }

    pub fn add(self, other: ExtDist) -> ExtDist {
        match (self, other) {
            (ExtDist::Infinite, _) | (_, ExtDist::Infinite) => ExtDist::Infinite,
            (ExtDist::Finite(a), ExtDist::Finite(b)) => ExtDist::Finite(a + b),
        }
    }

    /// Subtraction for the rescaling step, with the convention `∞ − ∞ = 0`.
    /// `∞ − finite = ∞`; a finite value never subtracts below what the
    /// caller allows (the rescaling corollary only shifts by per-coordinate
    /// infima, so `finite − ∞` does not arise there and maps to 0).
    pub fn sub_rescale(self, other: &ExtDist) -> ExtDist {
        match (self, other) {
            (ExtDist::Infinite, ExtDist::Infinite) => ExtDist::zero(),
            (ExtDist::Infinite, ExtDist::Finite(_)) => ExtDist::Infinite,
            (ExtDist::Finite(_), ExtDist::Infinite) => ExtDist::zero(),
            (ExtDist::Finite(a), ExtDist::Finite(b)) => ExtDist::Finite(a - b),
        }
    }
}

impl PartialOrd for ExtDist {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtDist {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtDist::Infinite, ExtDist::Infinite) => Ordering::Equal,
            (ExtDist::Infinite, _) => Ordering::Greater,
            (_, ExtDist::Infinite) => Ordering::Less,
            (ExtDist::Finite(a), ExtDist::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for ExtDist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtDist::Finite(q) => write!(f, "{}", q),
            ExtDist::Infinite => write!(f, "inf"),
        }
    }
}

impl From<Rat> for ExtDist {
    fn from(q: Rat) -> Self {
        ExtDist::Finite(q)
    }
}

/// The rational with the smallest denominator (then smallest numerator
/// magnitude) strictly inside the open interval `(lo, hi)`.
///
/// Stern-Brocot style descent. Keeps the constants produced round after
/// round of the saturation lemma from accumulating denominator growth.
pub fn simplest_in_open(lo: &Rat, hi: &Rat) -> Rat {
    assert!(lo < hi, "empty open interval");
    if lo.is_negative() && hi.is_positive() {
        return Rat::zero();
    }
    if !lo.is_negative() {
        simplest_pos(lo.clone(), Some(hi.clone()))
    } else {
        // lo < hi <= 0: mirror into the nonnegative half.
        -simplest_pos(-hi.clone(), Some(-lo.clone()))
    }
}

/// Simplest rational in `(lo, hi)` with `lo >= 0`; `hi = None` means `+∞`.
fn simplest_pos(lo: Rat, hi: Option<Rat>) -> Rat {
    let floor = lo.floor();
    let next_int = floor.clone() + Rat::one();
    match &hi {
        None => return next_int,
        Some(h) => {
            if &next_int < h {
                return next_int;
            }
        }
    }
    // No integer inside: (lo, hi) ⊆ [n, n+1]; recurse on reciprocals of the
    // fractional parts (continued-fraction step).
    let h = hi.expect("bounded here");
    let rec_lo = Rat::one() / (h - &floor);
    let rec_hi = if lo == floor {
        None
    } else {
        Some(Rat::one() / (lo - &floor))
    };
    floor + Rat::one() / simplest_pos(rec_lo, rec_hi)
}

/// Parse a rational from `p/q`, an integer, or an exact decimal string.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty rational literal".into());
    }
    if let Some((p, q)) = s.split_once('/') {
        let num: BigInt = p
            .trim()
            .parse()
            .map_err(|_| format!("bad numerator in '{}'", s))?;
        let den: BigInt = q
            .trim()
            .parse()
            .map_err(|_| format!("bad denominator in '{}'", s))?;
        if den.is_zero() {
            return Err(format!("zero denominator in '{}'", s));
        }
        return Ok(Rat::new(num, den));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let sign = if whole.trim_start().starts_with('-') {
            -Rat::one()
        } else {
            Rat::one()
        };
        let whole_mag: BigInt = if whole.is_empty() || whole == "-" {
            BigInt::zero()
        } else {
            whole
                .parse::<BigInt>()
                .map_err(|_| format!("bad decimal '{}'", s))?
                .abs()
        };
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(format!("bad decimal '{}'", s));
        }
        let digits: BigInt = frac.parse().map_err(|_| format!("bad decimal '{}'", s))?;
        let scale = BigInt::from(10u8).pow(frac.len() as u32);
        let mag = Rat::from_integer(whole_mag) + Rat::new(digits, scale);
        return Ok(sign * mag);
    }
    s.parse::<BigInt>()
        .map(Rat::from_integer)
        .map_err(|_| format!("bad rational '{}'", s))
}

pub fn rat_to_f64(q: &Rat) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pow2_neg_values() {
        assert_eq!(pow2_neg(0), rat_int(1));
        assert_eq!(pow2_neg(3), rat(1, 8));
        assert_eq!(pow2_neg(10), rat(1, 1024));
    }

    #[test]
    fn extdist_absorbs() {
        let inf = ExtDist::Infinite;
        let one = ExtDist::finite(rat_int(1));
        assert_eq!(inf.clone().max(one.clone()), ExtDist::Infinite);
        assert_eq!(inf.clone().add(one.clone()), ExtDist::Infinite);
        assert_eq!(inf.clone().sub_rescale(&inf), ExtDist::zero());
        assert!(one < inf);
    }

    #[test]
    fn simplest_rational_picks_small_denominators() {
        assert_eq!(simplest_in_open(&rat(5, 6), &rat_int(1)), rat(6, 7));
        assert_eq!(simplest_in_open(&rat(5, 3), &rat_int(2)), rat(7, 4));
        assert_eq!(simplest_in_open(&rat(1, 3), &rat(1, 2)), rat(2, 5));
        assert_eq!(simplest_in_open(&rat(-1, 2), &rat(1, 2)), rat_zero());
        assert_eq!(simplest_in_open(&rat_int(0), &rat_int(5)), rat_int(1));
        let got = simplest_in_open(&rat(99, 100), &rat(100, 101));
        assert!(got > rat(99, 100) && got < rat(100, 101));
    }

    #[test]
    fn parse_rat_forms() {
        assert_eq!(parse_rat("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_rat("0.125").unwrap(), rat(1, 8));
        assert_eq!(parse_rat("-0.5").unwrap(), rat(-1, 2));
        assert_eq!(parse_rat("7").unwrap(), rat_int(7));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }
}
