//! Segment intersection and the per-edge conflict relation of the station graph.
//!
//! Stations are points in the plane and every pair of stations is joined by a
//! straight flight corridor. Two corridors conflict when their segments share
//! at least one point; vehicles flying conflicting corridors at the same time
//! must be separated vertically. Intersection is decided with orientation-sign
//! tests rather than slope arithmetic, so vertical segments need no special
//! casing.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point in the 2D plane housing a station.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// An undirected edge of the fully connected station graph, stored with
/// `a < b` so each edge has exactly one identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeId {
    a: usize,
    b: usize,
}

impl EdgeId {
    /// Canonical edge between two distinct station indices.
    pub fn new(a: usize, b: usize) -> Result<Self> {
        if a == b {
            return Err(Error::InvalidInput(format!(
                "edge endpoints must differ, got {a} and {b}"
            )));
        }
        Ok(if a < b { EdgeId { a, b } } else { EdgeId { a: b, b: a } })
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn b(&self) -> usize {
        self.b
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

/// How contact at a shared station endpoint is classified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EndpointPolicy {
    /// Edges that touch anywhere conflict, including at a shared station.
    /// Two vehicles converging on one station at the same altitude is a
    /// physical conflict, so this is the default.
    #[default]
    Conservative,
    /// Contact only at a shared segment endpoint does not count.
    Strict,
}

/// For every edge `e` of the station graph, the set of edges intersecting it.
///
/// The relation is symmetric and irreflexive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConflictSets {
    n_stations: usize,
    sets: Vec<BTreeSet<EdgeId>>,
}

impl ConflictSets {
    pub fn n_stations(&self) -> usize {
        self.n_stations
    }

    /// All edges of the complete graph in canonical order.
    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        let n = self.n_stations;
        (0..n).flat_map(move |a| (a + 1..n).map(move |b| EdgeId { a, b }))
    }

    pub fn conflicts_of(&self, e: EdgeId) -> &BTreeSet<EdgeId> {
        &self.sets[self.index(e)]
    }

    /// Whether distinct edges `e` and `d` intersect. An edge is never in its
    /// own set; callers that treat co-located flights as conflicting must
    /// check edge equality themselves.
    pub fn in_conflict(&self, e: EdgeId, d: EdgeId) -> bool {
        e != d && self.sets[self.index(e)].contains(&d)
    }

    fn index(&self, e: EdgeId) -> usize {
        debug_assert!(e.b < self.n_stations);
        // position of (a,b) in lexicographic order over a < b
        e.a * (2 * self.n_stations - e.a - 1) / 2 + (e.b - e.a - 1)
    }
}

/// Sign of the cross product (q - p) x (r - p): the side of line pq that r
/// lies on. Computed directly from the double-precision expression with no
/// tolerance; generated instances use modest integer-ish coordinates.
fn orientation(p: Point2, q: Point2, r: Point2) -> i8 {
    let v = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// Given collinear p, q, r: does q lie on the closed segment pr?
fn on_segment(p: Point2, q: Point2, r: Point2) -> bool {
    q.x <= p.x.max(r.x) && q.x >= p.x.min(r.x) && q.y <= p.y.max(r.y) && q.y >= p.y.min(r.y)
}

fn points_equal(p: Point2, q: Point2) -> bool {
    p.x == q.x && p.y == q.y
}

fn closed_segments_intersect(p1: Point2, p2: Point2, q1: Point2, q2: Point2) -> bool {
    let o1 = orientation(p1, p2, q1);
    let o2 = orientation(p1, p2, q2);
    let o3 = orientation(q1, q2, p1);
    let o4 = orientation(q1, q2, p2);

    (o1 != o2 && o3 != o4)
        || (o1 == 0 && on_segment(p1, q1, p2))
        || (o2 == 0 && on_segment(p1, q2, p2))
        || (o3 == 0 && on_segment(q1, p1, q2))
        || (o4 == 0 && on_segment(q1, p2, q2))
}

/// Do the closed segments p1p2 and q1q2 share at least one point?
///
/// Under [`EndpointPolicy::Strict`], contact only at a shared segment
/// endpoint is discounted; collinear segments overlapping in more than a
/// point intersect under both policies.
pub fn segments_intersect(
    p1: Point2,
    p2: Point2,
    q1: Point2,
    q2: Point2,
    policy: EndpointPolicy,
) -> Result<bool> {
    for p in [p1, p2, q1, q2] {
        if !p.is_finite() {
            return Err(Error::InvalidInput("segment endpoint is not finite".into()));
        }
    }
    if points_equal(p1, p2) || points_equal(q1, q2) {
        return Err(Error::InvalidInput("zero-length segment".into()));
    }

    if !closed_segments_intersect(p1, p2, q1, q2) {
        return Ok(false);
    }
    if policy == EndpointPolicy::Conservative {
        return Ok(true);
    }

    let shares_endpoint = points_equal(p1, q1)
        || points_equal(p1, q2)
        || points_equal(p2, q1)
        || points_equal(p2, q2);
    if !shares_endpoint {
        return Ok(true);
    }

    // Segments touching at a shared endpoint meet only there unless they are
    // collinear, in which case the overlap may have positive length.
    let collinear = orientation(p1, p2, q1) == 0 && orientation(p1, p2, q2) == 0;
    if !collinear {
        return Ok(false);
    }
    // Project onto the dominant axis and measure the overlap interval.
    let dx = (p2.x - p1.x).abs();
    let dy = (p2.y - p1.y).abs();
    let key = |p: Point2| if dx >= dy { p.x } else { p.y };
    let (p_lo, p_hi) = minmax(key(p1), key(p2));
    let (q_lo, q_hi) = minmax(key(q1), key(q2));
    Ok(p_lo.max(q_lo) < p_hi.min(q_hi))
}

fn minmax(a: f64, b: f64) -> (f64, f64) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Builds the full conflict relation for a station set: for every unordered
/// edge pair (e, d) of the complete graph, d enters E'_e exactly when the
/// segments intersect under the given policy.
pub fn conflict_sets(stations: &[Point2], policy: EndpointPolicy) -> Result<ConflictSets> {
    if stations.len() < 2 {
        return Err(Error::InvalidInput(format!(
            "need at least 2 stations, got {}",
            stations.len()
        )));
    }
    for (i, p) in stations.iter().enumerate() {
        if !p.is_finite() {
            return Err(Error::InvalidInput(format!("station {i} has non-finite coordinates")));
        }
        for (j, q) in stations.iter().enumerate().skip(i + 1) {
            if points_equal(*p, *q) {
                return Err(Error::InvalidInput(format!(
                    "stations {i} and {j} share coordinates ({}, {})",
                    p.x, p.y
                )));
            }
        }
    }

    let n = stations.len();
    let edges: Vec<EdgeId> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| EdgeId { a, b }))
        .collect();
    let mut sets = vec![BTreeSet::new(); edges.len()];
    for (i, &e) in edges.iter().enumerate() {
        for (j, &d) in edges.iter().enumerate().skip(i + 1) {
            let hit = segments_intersect(
                stations[e.a],
                stations[e.b],
                stations[d.a],
                stations[d.b],
                policy,
            )?;
            if hit {
                sets[i].insert(d);
                sets[j].insert(e);
            }
        }
    }
    Ok(ConflictSets { n_stations: n, sets })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(x: f64, y: f64) -> Point2 {
        Point2::new(x, y)
    }

    fn isect(a: (f64, f64), b: (f64, f64), c: (f64, f64), d: (f64, f64), pol: EndpointPolicy) -> bool {
        segments_intersect(p(a.0, a.1), p(b.0, b.1), p(c.0, c.1), p(d.0, d.1), pol).unwrap()
    }

    use EndpointPolicy::{Conservative, Strict};

    #[test]
    fn crossing_diagonals() {
        assert!(isect((0.0, 0.0), (2.0, 2.0), (0.0, 2.0), (2.0, 0.0), Conservative));
        assert!(isect((0.0, 0.0), (2.0, 2.0), (0.0, 2.0), (2.0, 0.0), Strict));
    }

    #[test]
    fn parallel_disjoint() {
        assert!(!isect((0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0), Conservative));
    }

    #[test]
    fn shared_endpoint_depends_on_policy() {
        assert!(isect((0.0, 0.0), (1.0, 1.0), (1.0, 1.0), (2.0, 0.0), Conservative));
        assert!(!isect((0.0, 0.0), (1.0, 1.0), (1.0, 1.0), (2.0, 0.0), Strict));
    }

    #[test]
    fn collinear_overlap_both_policies() {
        assert!(isect((0.0, 0.0), (3.0, 0.0), (1.0, 0.0), (2.0, 0.0), Conservative));
        assert!(isect((0.0, 0.0), (3.0, 0.0), (1.0, 0.0), (2.0, 0.0), Strict));
    }

    #[test]
    fn collinear_touching_only_at_endpoint() {
        assert!(isect((0.0, 0.0), (1.0, 1.0), (1.0, 1.0), (2.0, 2.0), Conservative));
        assert!(!isect((0.0, 0.0), (1.0, 1.0), (1.0, 1.0), (2.0, 2.0), Strict));
    }

    #[test]
    fn vertical_segments_are_handled() {
        assert!(isect((1.0, -1.0), (1.0, 1.0), (0.0, 0.0), (2.0, 0.0), Conservative));
        assert!(!isect((1.0, 1.0), (1.0, 3.0), (0.0, 0.0), (2.0, 0.0), Conservative));
    }

    #[test]
    fn t_contact_conflicts_under_both_policies() {
        // endpoint of one segment interior to the other: not a shared endpoint
        assert!(isect((0.0, 0.0), (2.0, 0.0), (1.0, 0.0), (1.0, 5.0), Strict));
    }

    #[test]
    fn degenerate_segment_rejected() {
        let e = segments_intersect(p(0.0, 0.0), p(0.0, 0.0), p(1.0, 0.0), p(2.0, 0.0), Conservative);
        assert!(matches!(e, Err(Error::InvalidInput(_))));
    }

    #[test]
    fn triangle_strict_has_no_conflicts() {
        let st = [p(0.0, 0.0), p(4.0, 0.0), p(2.0, 3.0)];
        let cs = conflict_sets(&st, Strict).unwrap();
        for e in cs.edges() {
            assert!(cs.conflicts_of(e).is_empty(), "edge {e} should be free");
        }
    }

    #[test]
    fn unit_square_strict_only_diagonals_conflict() {
        let st = [p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0), p(0.0, 1.0)];
        let cs = conflict_sets(&st, Strict).unwrap();
        let d1 = EdgeId::new(0, 2).unwrap();
        let d2 = EdgeId::new(1, 3).unwrap();
        // brute-force expectation over all 15 edge pairs: only the diagonals cross
        for e in cs.edges() {
            for d in cs.edges() {
                if e >= d {
                    continue;
                }
                let expected = (e == d1 && d == d2) || (e == d2 && d == d1);
                assert_eq!(cs.in_conflict(e, d), expected, "pair {e} {d}");
            }
        }
    }

    #[test]
    fn duplicate_stations_rejected() {
        let st = [p(0.0, 0.0), p(1.0, 1.0), p(0.0, 0.0)];
        assert!(matches!(conflict_sets(&st, Conservative), Err(Error::InvalidInput(_))));
    }

    /// Direct evaluation of the published slope-based inequality test. Only
    /// defined for non-vertical, non-parallel segment pairs; endpoints must be
    /// sorted by x within each segment.
    fn slope_formula_oracle(e1: Point2, e2: Point2, d1: Point2, d2: Point2) -> Option<bool> {
        let (e1, e2) = if e1.x <= e2.x { (e1, e2) } else { (e2, e1) };
        let (d1, d2) = if d1.x <= d2.x { (d1, d2) } else { (d2, d1) };
        if e2.x == e1.x || d2.x == d1.x {
            return None; // vertical
        }
        let me = (e2.y - e1.y) / (e2.x - e1.x);
        let md = (d2.y - d1.y) / (d2.x - d1.x);
        if me == md {
            return None; // parallel
        }
        let x = (d1.x * md - d1.y - e1.x * me + e1.y) / (md - me);
        Some(e1.x.max(d1.x) <= x && x <= e2.x.min(d2.x))
    }

    fn station_strategy(n: usize) -> impl Strategy<Value = Vec<Point2>> {
        proptest::collection::vec((0i32..40, 0i32..40), n).prop_filter_map(
            "stations must be pairwise distinct",
            |v| {
                let pts: Vec<Point2> = v.iter().map(|&(x, y)| p(x as f64, y as f64)).collect();
                for i in 0..pts.len() {
                    for j in i + 1..pts.len() {
                        if points_equal(pts[i], pts[j]) {
                            return None;
                        }
                    }
                }
                Some(pts)
            },
        )
    }

    proptest! {
        #[test]
        fn conflict_sets_symmetric_and_irreflexive(st in station_strategy(6), strict in any::<bool>()) {
            let policy = if strict { Strict } else { Conservative };
            let cs = conflict_sets(&st, policy).unwrap();
            for e in cs.edges() {
                prop_assert!(!cs.conflicts_of(e).contains(&e));
                for &d in cs.conflicts_of(e) {
                    prop_assert!(cs.conflicts_of(d).contains(&e), "asymmetry at {e} {d}");
                }
            }
        }

        #[test]
        fn conservative_matches_slope_formula(st in station_strategy(5)) {
            let cs = conflict_sets(&st, Conservative).unwrap();
            let edges: Vec<EdgeId> = cs.edges().collect();
            for (i, &e) in edges.iter().enumerate() {
                for &d in edges.iter().skip(i + 1) {
                    if let Some(expected) =
                        slope_formula_oracle(st[e.a()], st[e.b()], st[d.a()], st[d.b()])
                    {
                        prop_assert_eq!(cs.in_conflict(e, d), expected, "pair {} {}", e, d);
                    }
                }
            }
        }

        #[test]
        fn rigid_transforms_preserve_conflicts(
            st in station_strategy(5),
            angle_deg in 0u32..360,
            tx in -50i32..50,
            ty in -50i32..50,
            strict in any::<bool>(),
        ) {
            // Exact-zero orientations (collinear triples) may flip sign under a
            // rotated float evaluation; restrict to robustly non-degenerate sets.
            for i in 0..st.len() {
                for j in 0..st.len() {
                    for k in 0..st.len() {
                        if i != j && j != k && i != k {
                            prop_assume!(orientation(st[i], st[j], st[k]) != 0);
                        }
                    }
                }
            }
            let policy = if strict { Strict } else { Conservative };
            let a = (angle_deg as f64).to_radians();
            let (s, c) = a.sin_cos();
            let moved: Vec<Point2> = st
                .iter()
                .map(|q| p(c * q.x - s * q.y + tx as f64, s * q.x + c * q.y + ty as f64))
                .collect();
            let before = conflict_sets(&st, policy).unwrap();
            let after = conflict_sets(&moved, policy).unwrap();
            prop_assert_eq!(before.sets, after.sets);
        }
    }
}
