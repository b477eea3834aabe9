//! Product spaces: the supremum metric `d`, the weighted gauge `ρ`, and the
//! refutation-style axiom verifier.

use crate::error::{Error, Result};
use crate::exact::{pow2_neg, rat_one, rat_zero, Rat};
use crate::factor::{Coord, Factor};
use num_traits::Zero;
use std::fmt;
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Space {
    factors: Arc<Vec<Factor>>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Point {
    pub coords: Vec<Coord>,
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, ")")
    }
}

impl Space {
    pub fn new(factors: Vec<Factor>) -> Result<Space> {
        if factors.is_empty() {
            return Err(Error::Domain("a space needs at least one factor".into()));
        }
        Ok(Space {
            factors: Arc::new(factors),
        })
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn dim(&self) -> usize {
        self.factors.len()
    }

    /// Gauge weight of factor `i`: `2^{-i}`.
    pub fn weight(&self, i: usize) -> Rat {
        pow2_neg(i as u32)
    }

    pub fn validate(&self, p: &Point) -> Result<()> {
        if p.coords.len() != self.dim() {
            return Err(Error::Domain(format!(
                "point has {} coordinates, space has {} factors",
                p.coords.len(),
                self.dim()
            )));
        }
        for (f, c) in self.factors.iter().zip(&p.coords) {
            f.validate_coord(c)?;
        }
        Ok(())
    }

    /// Supremum metric `d(x, y) = max_i d_i(x_i, y_i)`.
    pub fn dist(&self, x: &Point, y: &Point) -> Result<Rat> {
        self.validate(x)?;
        self.validate(y)?;
        let mut best = rat_zero();
        for (i, f) in self.factors.iter().enumerate() {
            let d = f.dist(&x.coords[i], &y.coords[i]);
            if d > best {
                best = d;
            }
        }
        Ok(best)
    }

    /// Gauge `ρ(x, y) = Σ_i 2^{-i}·min(ρ_i(x_i, y_i), 1)`.
    pub fn gauge(&self, x: &Point, y: &Point) -> Result<Rat> {
        self.validate(x)?;
        self.validate(y)?;
        let mut total = rat_zero();
        for (i, f) in self.factors.iter().enumerate() {
            let g = f.gauge(&x.coords[i], &y.coords[i]).min(rat_one());
            total += self.weight(i) * g;
        }
        Ok(total)
    }
}

/// Outcome of the axiom verifier: either every sampled check passed, or a
/// concrete witness refutes one axiom.
#[derive(Clone, Debug)]
pub struct AxiomReport {
    pub checks_run: usize,
    pub counterexample: Option<AxiomViolation>,
}

#[derive(Clone, Debug)]
pub struct AxiomViolation {
    pub axiom: &'static str,
    pub detail: String,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.counterexample {
            None => write!(f, "PASS ({} checks)", self.checks_run),
            Some(v) => write!(f, "FAIL [{}]: {}", v.axiom, v.detail),
        }
    }
}

/// Refutation-style verification of the two topometric axioms plus the
/// metric axioms for `d` and `ρ`, on seeded samples.
///
/// Lower semi-continuity is tested along per-factor convergence structure:
/// for sampled targets `x`, `y`, gauge-convergent sequences `x_k → x`,
/// `y_k → y` are built and `liminf d(x_k, y_k) ≥ d(x, y)` is checked in the
/// form "the tail of `d(x_k, y_k)` never stays below `d(x, y)`".
pub fn verify_axioms(space: &Space, sample_budget: usize, seed: u64) -> Result<AxiomReport> {
    verify_axioms_with(space, sample_budget, seed, |s, x, y| s.dist(x, y))
}

/// Same checks, with the metric supplied by a closure so tests can inject
/// a deliberately corrupted distance and watch the verifier refuse it.
pub fn verify_axioms_with<D>(
    space: &Space,
    sample_budget: usize,
    seed: u64,
    dist: D,
) -> Result<AxiomReport>
where
    D: Fn(&Space, &Point, &Point) -> Result<Rat>,
{
    if sample_budget < 1 {
        return Err(Error::Precondition("sample_budget must be >= 1".into()));
    }
    let mut sampler = crate::sample::Sampler::new(space.clone(), seed);
    let mut checks = 0usize;

    let points: Vec<Point> = (0..sample_budget.max(3)).map(|_| sampler.point()).collect();

    // Metric axioms for d and ρ on sampled triples.
    for w in points.windows(3) {
        let (x, y, z) = (&w[0], &w[1], &w[2]);
        for (name, m) in [("d", true), ("rho", false)] {
            let dd = |a: &Point, b: &Point| -> Result<Rat> {
                if m {
                    dist(space, a, b)
                } else {
                    space.gauge(a, b)
                }
            };
            let dxy = dd(x, y)?;
            let dyx = dd(y, x)?;
            let dxz = dd(x, z)?;
            let dyz = dd(y, z)?;
            checks += 4;
            if dxy != dyx {
                return Ok(report_fail(
                    checks,
                    "symmetry",
                    format!("{}({}, {}) = {} but reversed gives {}", name, x, y, dxy, dyx),
                ));
            }
            if dxz > dxy.clone() + dyz.clone() {
                return Ok(report_fail(
                    checks,
                    "triangle",
                    format!("{}: {} > {} + {} via {}, {}, {}", name, dxz, dxy, dyz, x, y, z),
                ));
            }
            let dxx = dd(x, x)?;
            if !dxx.is_zero() {
                return Ok(report_fail(
                    checks,
                    "identity",
                    format!("{}({}, {}) = {} != 0", name, x, x, dxx),
                ));
            }
        }
    }

    // Refinement: d(x, y) > 0 for sampled x ≠ y (and ρ likewise).
    for w in points.windows(2) {
        let (x, y) = (&w[0], &w[1]);
        if x != y {
            checks += 1;
            let d = dist(space, x, y)?;
            if d.is_zero() {
                return Ok(report_fail(
                    checks,
                    "refinement",
                    format!("d({}, {}) = 0 for distinct points", x, y),
                ));
            }
            if space.gauge(x, y)?.is_zero() {
                return Ok(report_fail(
                    checks,
                    "gauge-separation",
                    format!("rho({}, {}) = 0 for distinct points", x, y),
                ));
            }
        }
    }

    // Lower semi-continuity along structural convergent sequences.
    let depth = 8usize;
    for w in points.windows(2) {
        let (x, y) = (&w[0], &w[1]);
        let target = dist(space, x, y)?;
        let xs = sampler.converging_sequence(x, depth);
        let ys = sampler.converging_sequence(y, depth);
        checks += 1;
        let mut all_below = true;
        for (xk, yk) in xs.iter().zip(&ys) {
            if dist(space, xk, yk)? >= target {
                all_below = false;
                break;
            }
        }
        // The sequences converge within `depth` steps by construction, so a
        // full tail strictly under the limit distance refutes lsc.
        if all_below && !target.is_zero() {
            return Ok(report_fail(
                checks,
                "lower-semi-continuity",
                format!(
                    "sequences toward {} and {} keep d below d(x,y) = {}",
                    x, y, target
                ),
            ));
        }
    }

    Ok(AxiomReport {
        checks_run: checks,
        counterexample: None,
    })
}

fn report_fail(checks: usize, axiom: &'static str, detail: String) -> AxiomReport {
    AxiomReport {
        checks_run: checks,
        counterexample: Some(AxiomViolation { axiom, detail }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn space_mm() -> Space {
        Space::new(vec![
            Factor::MaxInterval {
                lo: rat(0, 1),
                hi: rat(1, 1),
            },
            Factor::MinInterval {
                lo: rat(0, 1),
                hi: rat(1, 1),
            },
        ])
        .unwrap()
    }

    fn pt2(a: Rat, b: Rat) -> Point {
        Point {
            coords: vec![Coord::Rational(a), Coord::Rational(b)],
        }
    }

    #[test]
    fn sup_metric_examples() {
        let s = space_mm();
        // equal max-coordinate contributes 0
        assert_eq!(
            s.dist(&pt2(rat(3, 10), rat(1, 2)), &pt2(rat(3, 10), rat(9, 10)))
                .unwrap(),
            rat(2, 5)
        );
        // distinct points in the 0/1 factor dominate
        assert_eq!(
            s.dist(&pt2(rat(3, 10), rat(1, 2)), &pt2(rat(2, 5), rat(1, 2)))
                .unwrap(),
            rat(1, 1)
        );
    }

    #[test]
    fn min_interval_distance() {
        let s = Space::new(vec![Factor::MinInterval {
            lo: rat(0, 1),
            hi: rat(1, 1),
        }])
        .unwrap();
        let x = Point {
            coords: vec![Coord::Rational(rat(1, 5))],
        };
        let y = Point {
            coords: vec![Coord::Rational(rat(9, 10))],
        };
        assert_eq!(s.dist(&x, &y).unwrap(), rat(7, 10));
    }

    #[test]
    fn coordinate_outside_domain_is_an_error() {
        let s = space_mm();
        let bad = pt2(rat(3, 2), rat(0, 1));
        assert!(s.dist(&bad, &bad).is_err());
    }

    #[test]
    fn axioms_pass_on_catalog_products() {
        let s = Space::new(vec![
            Factor::ExampleGlue,
            Factor::ConvergentSeq,
            Factor::FiniteDiscrete { size: 3 },
        ])
        .unwrap();
        let report = verify_axioms(&s, 24, 7).unwrap();
        assert!(report.passed(), "{}", report);
    }

    #[test]
    fn corrupted_metric_fails_refinement() {
        let s = Space::new(vec![Factor::MinInterval {
            lo: rat(0, 1),
            hi: rat(1, 1),
        }])
        .unwrap();
        let report = verify_axioms_with(&s, 24, 7, |sp, x, y| {
            // zero out every distance: refinement must catch it
            let _ = sp.dist(x, y)?;
            Ok(rat(0, 1))
        })
        .unwrap();
        assert!(!report.passed());
        assert_eq!(
            report.counterexample.as_ref().unwrap().axiom,
            "refinement"
        );
    }
}
