//! Exact geometry on two-dimensional rate polytopes.
//!
//! Regions have at most a dozen halfspaces, so every vertex is found by
//! intersecting each pair of boundary lines (the two axes included) and
//! keeping the feasible intersections.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::RatePair;
use crate::regions::{Halfspace, RateRegion};

/// Absolute slack allowed when filtering candidate vertices.
const FEASIBILITY_TOL: f64 = 1e-12;
/// Halfspaces with slack below this at the optimum are reported as binding.
const BINDING_TOL: f64 = 1e-10;
const DEDUP_TOL: f64 = 1e-10;
/// Objective values closer than this are ties.
const TIE_TOL: f64 = 1e-12;

/// A constraint active at an optimum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Binding {
    /// Index of the region in the input list.
    pub region: usize,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpSolution {
    pub value: f64,
    pub point: RatePair,
    pub binding: Vec<Binding>,
    /// More than one vertex attains the optimum (an optimal edge).
    pub degenerate: bool,
}

impl LpSolution {
    pub fn binding_labels(&self) -> Vec<&str> {
        self.binding.iter().map(|b| b.label.as_str()).collect()
    }
}

/// Boundary line `a * x + b * y = c`.
#[derive(Clone, Copy)]
struct Line {
    a: f64,
    b: f64,
    c: f64,
}

impl From<&Halfspace> for Line {
    fn from(h: &Halfspace) -> Self {
        Line {
            a: f64::from(h.coef_private),
            b: f64::from(h.coef_common),
            c: h.bound,
        }
    }
}

fn intersect(l: Line, m: Line) -> Option<(f64, f64)> {
    let det = l.a * m.b - l.b * m.a;
    if det.abs() < 1e-14 {
        return None;
    }
    let x = (l.c * m.b - l.b * m.c) / det;
    let y = (l.a * m.c - l.c * m.a) / det;
    Some((x, y))
}

fn feasible(halfspaces: &[&Halfspace], x: f64, y: f64, tol: f64) -> bool {
    x >= -tol
        && y >= -tol
        && halfspaces
            .iter()
            .all(|h| f64::from(h.coef_private) * x + f64::from(h.coef_common) * y <= h.bound + tol)
}

/// Feasible vertices of the intersection of the given halfspaces with the
/// non-negative quadrant. Not ordered; deduplicated.
fn enumerate_vertices(halfspaces: &[&Halfspace]) -> Vec<RatePair> {
    let mut lines: Vec<Line> = vec![
        Line {
            a: 1.0,
            b: 0.0,
            c: 0.0,
        },
        Line {
            a: 0.0,
            b: 1.0,
            c: 0.0,
        },
    ];
    lines.extend(halfspaces.iter().map(|h| Line::from(*h)));

    let mut out: Vec<RatePair> = Vec::new();
    for (i, &l) in lines.iter().enumerate() {
        for &m in &lines[i + 1..] {
            let Some((x, y)) = intersect(l, m) else {
                continue;
            };
            if !feasible(halfspaces, x, y, FEASIBILITY_TOL) {
                continue;
            }
            let p = RatePair {
                r_private: x.max(0.0),
                r_common: y.max(0.0),
            };
            let dup = out.iter().any(|q| {
                (q.r_private - p.r_private).abs() <= DEDUP_TOL
                    && (q.r_common - p.r_common).abs() <= DEDUP_TOL
            });
            if !dup {
                out.push(p);
            }
        }
    }
    out
}

fn collect<'a>(regions: &[&'a RateRegion]) -> Result<Vec<(usize, &'a Halfspace)>> {
    let mut hs = Vec::new();
    for (i, r) in regions.iter().enumerate() {
        r.check_bounded()?;
        hs.extend(r.halfspaces.iter().map(|h| (i, h)));
    }
    Ok(hs)
}

/// Maximizes `R_p + R_c` over the intersection of the given regions.
///
/// Ties between optimal vertices go to the one with the largest private
/// rate, and mark the solution degenerate.
pub fn max_sum_rate(regions: &[&RateRegion]) -> Result<LpSolution> {
    let tagged = collect(regions)?;
    let halfspaces: Vec<&Halfspace> = tagged.iter().map(|(_, h)| *h).collect();
    let vertices = enumerate_vertices(&halfspaces);
    // Bounds are non-negative, so the origin is always feasible.
    assert!(!vertices.is_empty(), "feasible set lost the origin");

    let mut best = vertices[0];
    for &v in &vertices[1..] {
        let (dv, db) = (v.sum(), best.sum());
        if dv > db + TIE_TOL || ((dv - db).abs() <= TIE_TOL && v.r_private > best.r_private) {
            best = v;
        }
    }
    let degenerate = vertices.iter().any(|v| {
        (v.sum() - best.sum()).abs() <= TIE_TOL
            && ((v.r_private - best.r_private).abs() > DEDUP_TOL
                || (v.r_common - best.r_common).abs() > DEDUP_TOL)
    });
    let binding = tagged
        .iter()
        .filter(|(_, h)| h.slack(best).abs() <= BINDING_TOL)
        .map(|(i, h)| Binding {
            region: *i,
            label: h.label.clone(),
        })
        .collect();
    Ok(LpSolution {
        value: best.sum(),
        point: best,
        binding,
        degenerate,
    })
}

/// Whether `point` satisfies every halfspace of `region` within `tol`.
pub fn contains(region: &RateRegion, point: RatePair, tol: f64) -> bool {
    region.halfspaces.iter().all(|h| h.slack(point) >= -tol)
}

/// Extreme points of a region, counterclockwise starting from the origin.
pub fn vertices(region: &RateRegion) -> Result<Vec<RatePair>> {
    region.check_bounded()?;
    let hs: Vec<&Halfspace> = region.halfspaces.iter().collect();
    let mut vs = enumerate_vertices(&hs);
    if vs.len() < 2 {
        return Ok(vs);
    }
    let n = vs.len() as f64;
    let cx = vs.iter().map(|v| v.r_private).sum::<f64>() / n;
    let cy = vs.iter().map(|v| v.r_common).sum::<f64>() / n;
    let angle = |v: &RatePair| (v.r_common - cy).atan2(v.r_private - cx);
    vs.sort_by(|a, b| angle(a).partial_cmp(&angle(b)).unwrap_or(Ordering::Equal));
    if let Some(origin) = vs
        .iter()
        .position(|v| v.r_private.abs() <= DEDUP_TOL && v.r_common.abs() <= DEDUP_TOL)
    {
        vs.rotate_left(origin);
    }
    Ok(vs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn hand_region() -> RateRegion {
        RateRegion::from_bounds(&[
            (1, 0, 1.0, "private-single"),
            (0, 1, 0.5, "common"),
            (1, 2, 1.5, "sum-2"),
            (1, 3, 1.8, "sum-3"),
        ])
        .unwrap()
    }

    #[test]
    fn hand_lp() {
        let sol = max_sum_rate(&[&hand_region()]).unwrap();
        assert!((sol.value - 1.25).abs() < 1e-15);
        assert!((sol.point.r_private - 1.0).abs() < 1e-15);
        assert!((sol.point.r_common - 0.25).abs() < 1e-15);
        assert_eq!(sol.binding_labels(), vec!["private-single", "sum-2"]);
        assert!(!sol.degenerate);
    }

    #[test]
    fn common_forced_to_zero() {
        let r = RateRegion::from_bounds(&[(1, 0, 1.0, "p"), (0, 1, 0.0, "c")]).unwrap();
        let sol = max_sum_rate(&[&r]).unwrap();
        assert_eq!(sol.value, 1.0);
        assert_eq!(
            sol.point,
            RatePair {
                r_private: 1.0,
                r_common: 0.0
            }
        );
    }

    #[test]
    fn tie_prefers_private() {
        let r = RateRegion::from_bounds(&[(1, 0, 1.0, "p"), (0, 1, 1.0, "c"), (1, 1, 1.5, "s")])
            .unwrap();
        let sol = max_sum_rate(&[&r]).unwrap();
        assert!(sol.degenerate);
        assert_eq!(
            sol.point,
            RatePair {
                r_private: 1.0,
                r_common: 0.5
            }
        );
    }

    #[test]
    fn unbounded_rejected() {
        let r = RateRegion {
            halfspaces: vec![Halfspace::new(1, 1, 1.0, "s").unwrap()],
            provenance: crate::regions::Provenance::custom(),
        };
        assert!(matches!(max_sum_rate(&[&r]), Err(Error::Unbounded(_))));
        assert!(vertices(&r).is_err());
        assert!(RateRegion::new(r.halfspaces.clone(), r.provenance.clone()).is_err());
    }

    #[test]
    fn containment() {
        let r = hand_region();
        assert!(contains(&r, RatePair::default(), 0.0));
        assert!(!contains(
            &r,
            RatePair {
                r_private: 1.01,
                r_common: 0.0
            },
            1e-12
        ));
    }

    #[test]
    fn square_vertices() {
        let r = RateRegion::from_bounds(&[(1, 0, 1.0, "p"), (0, 1, 1.0, "c")]).unwrap();
        let vs = vertices(&r).unwrap();
        let pts: Vec<(f64, f64)> = vs.iter().map(|v| (v.r_private, v.r_common)).collect();
        assert_eq!(pts, vec![(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]);
    }

    #[test]
    fn intersection_only_shrinks() {
        let a = hand_region();
        let b = RateRegion::from_bounds(&[(1, 0, 0.7, "p"), (0, 1, 2.0, "c"), (1, 1, 1.0, "s")])
            .unwrap();
        let va = max_sum_rate(&[&a]).unwrap().value;
        let vab = max_sum_rate(&[&a, &b]).unwrap();
        assert!(vab.value <= va);
        assert!(contains(&a, vab.point, 1e-12) && contains(&b, vab.point, 1e-12));
        assert!(vab.binding.iter().any(|x| x.region == 1));
    }
}
