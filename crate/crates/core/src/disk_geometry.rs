//! Points of the open unit disk, closed boundary arc sets, the distance
//! function to the singular set, and boundary-refined sampling grids.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Normalize an angle into `[0, 2pi)`.
pub fn normalize_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// A point of the open unit disk in polar form: radius in `[0, 1)`, angle
/// normalized to `[0, 2pi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskPoint {
    r: f64,
    theta: f64,
}

impl DiskPoint {
    pub fn new(r: f64, theta: f64) -> Result<Self> {
        if !r.is_finite() || !theta.is_finite() {
            return Err(Error::Domain("disk point coordinates must be finite".into()));
        }
        if !(0.0..1.0).contains(&r) {
            return Err(Error::Domain(format!("radius must lie in [0, 1), got {r}")));
        }
        Ok(Self { r, theta: normalize_angle(theta) })
    }

    pub fn origin() -> Self {
        Self { r: 0.0, theta: 0.0 }
    }

    pub fn radius(self) -> f64 {
        self.r
    }

    pub fn angle(self) -> f64 {
        self.theta
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::from_polar(self.r, self.theta)
    }

    pub fn from_complex(z: Complex64) -> Result<Self> {
        Self::new(z.norm(), normalize_angle(z.arg()))
    }

    /// The point `tau * z` on the same ray.
    pub fn scaled(self, tau: f64) -> Result<Self> {
        if !tau.is_finite() || tau < 0.0 || tau * self.r >= 1.0 {
            return Err(Error::Domain(format!("scale factor {tau} leaves the disk")));
        }
        Ok(Self { r: tau * self.r, theta: self.theta })
    }
}

#[derive(Serialize, Deserialize)]
struct BoundarySetJson {
    arcs: Vec<[f64; 2]>,
}

/// A closed subset of the unit circle: a finite union of closed angular
/// intervals, points allowed as degenerate intervals. Stored normalized to
/// disjoint sorted arcs inside `[0, 2pi]`; an input arc that wraps past `2pi`
/// is split in two.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BoundarySetJson", into = "BoundarySetJson")]
pub struct BoundarySet {
    arcs: Vec<(f64, f64)>,
}

impl TryFrom<BoundarySetJson> for BoundarySet {
    type Error = Error;
    fn try_from(raw: BoundarySetJson) -> Result<Self> {
        let arcs: Vec<(f64, f64)> = raw.arcs.iter().map(|p| (p[0], p[1])).collect();
        BoundarySet::new(&arcs)
    }
}

impl From<BoundarySet> for BoundarySetJson {
    fn from(set: BoundarySet) -> Self {
        BoundarySetJson { arcs: set.arcs.iter().map(|&(a, b)| [a, b]).collect() }
    }
}

impl BoundarySet {
    /// Build from raw `(alpha, beta)` pairs in radians. `beta < alpha` means
    /// the arc runs from `alpha` through `2pi` to `beta`; any arc of length
    /// `>= 2pi` is the full circle. Overlapping arcs are merged.
    pub fn new(arcs: &[(f64, f64)]) -> Result<Self> {
        let mut segments: Vec<(f64, f64)> = Vec::new();
        for &(a, b) in arcs {
            if !a.is_finite() || !b.is_finite() {
                return Err(Error::Domain("arc endpoints must be finite".into()));
            }
            let len = if b >= a { b - a } else { b - a + TAU };
            if len >= TAU {
                return Ok(Self::full_circle());
            }
            let start = normalize_angle(a);
            let end = start + len;
            if end > TAU {
                segments.push((start, TAU));
                segments.push((0.0, end - TAU));
            } else {
                segments.push((start, end));
            }
        }
        segments.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut merged: Vec<(f64, f64)> = Vec::new();
        for seg in segments {
            match merged.last_mut() {
                Some(last) if seg.0 <= last.1 => last.1 = last.1.max(seg.1),
                _ => merged.push(seg),
            }
        }
        Ok(Self { arcs: merged })
    }

    pub fn full_circle() -> Self {
        Self { arcs: vec![(0.0, TAU)] }
    }

    /// A single boundary point, as a degenerate arc.
    pub fn point(theta: f64) -> Self {
        let t = normalize_angle(theta);
        Self { arcs: vec![(t, t)] }
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn is_full_circle(&self) -> bool {
        self.arcs.len() == 1 && self.arcs[0].0 == 0.0 && self.arcs[0].1 == TAU
    }

    /// Normalized arcs `(alpha_k, beta_k)` with `0 <= alpha_k <= beta_k <= 2pi`.
    pub fn arcs(&self) -> &[(f64, f64)] {
        &self.arcs
    }

    /// Total angular length `|E*|`.
    pub fn total_length(&self) -> f64 {
        self.arcs.iter().map(|&(a, b)| b - a).sum()
    }

    /// Closed membership test for the angle `theta`.
    pub fn contains_angle(&self, theta: f64) -> bool {
        let t = normalize_angle(theta);
        self.arcs.iter().any(|&(a, b)| {
            (t >= a && t <= b) || (t == 0.0 && b == TAU)
        })
    }

    /// Endpoints of all arcs (one value for a degenerate arc).
    pub fn endpoints(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(2 * self.arcs.len());
        for &(a, b) in &self.arcs {
            out.push(a);
            if b > a {
                out.push(b);
            }
        }
        out
    }

    /// True when every arc of `self` lies inside some arc of `other`, up to
    /// an angular slack `tol`.
    pub fn contained_in(&self, other: &Self, tol: f64) -> bool {
        if other.is_full_circle() {
            return true;
        }
        self.arcs.iter().all(|&(a, b)| {
            other.arcs.iter().any(|&(oa, ob)| a >= oa - tol && b <= ob + tol)
                // An arc of `other` split at the wrap point covers [oa, 2pi] + [0, ob].
                || other.contains_angle(a) && other.contains_angle(b) && b - a <= tol
        })
    }
}

/// Chordal distance from `r e^{i theta}` to `e^{i phi}`, in the
/// cancellation-safe form `sqrt((1-r)^2 + 4 r sin^2((theta-phi)/2))`.
fn chord(r: f64, theta: f64, phi: f64) -> f64 {
    let s = ((theta - phi) * 0.5).sin();
    ((1.0 - r) * (1.0 - r) + 4.0 * r * s * s).sqrt()
}

/// Distance from a disk point to the boundary set: `1 - r` when the angle of
/// `z` falls inside an arc, otherwise the chord to the nearest arc endpoint.
pub fn rho(z: DiskPoint, set: &BoundarySet) -> Result<f64> {
    if set.is_empty() {
        return Err(Error::EmptyBoundarySet);
    }
    let t = z.angle();
    let r = z.radius();
    let mut best = f64::INFINITY;
    for &(a, b) in set.arcs() {
        let offset = normalize_angle(t - a);
        if offset <= b - a {
            best = best.min(1.0 - r);
        } else {
            best = best.min(chord(r, t, a)).min(chord(r, t, b));
        }
    }
    Ok(best)
}

/// Both sides of the radial scaling inequality `rho(z) <= 2 rho(tau z)`,
/// returned as `(rho(z), 2 rho(tau z))` for property sweeps.
pub fn scaling_gap(z: DiskPoint, tau: f64, set: &BoundarySet) -> Result<(f64, f64)> {
    if !tau.is_finite() || tau <= 0.0 || tau >= 1.0 {
        return Err(Error::Domain(format!("tau must lie in (0, 1), got {tau}")));
    }
    let lhs = rho(z, set)?;
    let rhs = 2.0 * rho(z.scaled(tau)?, set)?;
    Ok((lhs, rhs))
}

/// One radius layer of a sampling grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridLayer {
    pub depth: u32,
    pub radius: f64,
    pub angles: Vec<f64>,
}

/// Deterministic layered grid: layer `k` sits at radius `1 - 2^-k` and
/// carries a uniform angle set plus dyadic clusters around each arc endpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplingGrid {
    layers: Vec<GridLayer>,
}

impl SamplingGrid {
    pub fn layers(&self) -> &[GridLayer] {
        &self.layers
    }

    pub fn max_depth(&self) -> u32 {
        self.layers.last().map_or(0, |l| l.depth)
    }

    pub fn point_count(&self) -> usize {
        self.layers.iter().map(|l| l.angles.len()).sum()
    }
}

/// Angle set used at dyadic depth `k`: `angular_budget` uniform angles plus,
/// for every arc endpoint `e`, the angles `e` and `e +- 2^-m` for
/// `m = max(0, k-2) ..= k+3`. The full circle gets no endpoint clusters
/// (its distance function is angle-independent).
pub fn layer_angles(set: &BoundarySet, depth: u32, angular_budget: u32) -> Vec<f64> {
    let mut angles: Vec<f64> = (0..angular_budget)
        .map(|j| j as f64 * TAU / angular_budget as f64)
        .collect();
    if !set.is_full_circle() {
        for e in set.endpoints() {
            angles.push(e);
            for m in depth.saturating_sub(2)..=depth + 3 {
                let off = 0.5f64.powi(m as i32);
                angles.push(normalize_angle(e + off));
                angles.push(normalize_angle(e - off));
            }
        }
    }
    angles.sort_by(f64::total_cmp);
    angles.dedup();
    angles
}

/// Build the layered grid for depths `1..=max_depth`.
pub fn build_grid(set: &BoundarySet, max_depth: u32, angular_budget: u32) -> Result<SamplingGrid> {
    if angular_budget == 0 {
        return Err(Error::Domain("angular budget must be positive".into()));
    }
    if max_depth == 0 || max_depth > 40 {
        return Err(Error::Domain(format!(
            "grid depth must lie in 1..=40, got {max_depth}"
        )));
    }
    let layers = (1..=max_depth)
        .map(|k| GridLayer {
            depth: k,
            radius: 1.0 - 0.5f64.powi(k as i32),
            angles: layer_angles(set, k, angular_budget),
        })
        .collect();
    Ok(SamplingGrid { layers })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn polar_cartesian_roundtrip() {
        let z = DiskPoint::new(0.73, 5.1).unwrap();
        let back = DiskPoint::from_complex(z.to_complex()).unwrap();
        assert!((back.radius() - z.radius()).abs() < 1e-14 * z.radius());
        assert!((back.angle() - z.angle()).abs() < 1e-14);
    }

    #[test]
    fn rejects_points_outside_disk() {
        assert!(DiskPoint::new(1.0, 0.0).is_err());
        assert!(DiskPoint::new(-0.1, 0.0).is_err());
        assert!(DiskPoint::new(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn rho_collinear_point() {
        let e = BoundarySet::point(0.0);
        let z = DiskPoint::new(0.5, 0.0).unwrap();
        assert!((rho(z, &e).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rho_full_circle_is_one_minus_r() {
        let e = BoundarySet::full_circle();
        for (r, t) in [(0.0, 0.0), (0.3, 1.0), (0.9999, 4.2)] {
            let z = DiskPoint::new(r, t).unwrap();
            assert!((rho(z, &e).unwrap() - (1.0 - r)).abs() <= 1e-14);
        }
    }

    #[test]
    fn rho_euclidean_to_point() {
        // |0.8 i - 1| = sqrt(1.64)
        let e = BoundarySet::point(0.0);
        let z = DiskPoint::new(0.8, std::f64::consts::FRAC_PI_2).unwrap();
        assert!((rho(z, &e).unwrap() - 1.64f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn rho_errors_on_empty_set() {
        let e = BoundarySet::new(&[]).unwrap();
        let z = DiskPoint::new(0.5, 0.0).unwrap();
        assert_eq!(rho(z, &e), Err(Error::EmptyBoundarySet));
    }

    #[test]
    fn scaling_gap_examples() {
        let e = BoundarySet::point(0.0);
        let z = DiskPoint::new(0.9, 0.0).unwrap();
        let (lhs, rhs) = scaling_gap(z, 0.5, &e).unwrap();
        assert!((lhs - 0.1).abs() < 1e-15);
        assert!((rhs - 1.1).abs() < 1e-15);
        assert!(lhs <= rhs);

        let full = BoundarySet::full_circle();
        let (l2, r2) = scaling_gap(z, 0.25, &full).unwrap();
        assert!((l2 - 0.1).abs() < 1e-15);
        assert!((r2 - 2.0 * (1.0 - 0.25 * 0.9)).abs() < 1e-15);
    }

    #[test]
    fn scaling_gap_rejects_bad_tau() {
        let e = BoundarySet::point(0.0);
        let z = DiskPoint::new(0.5, 0.0).unwrap();
        assert!(scaling_gap(z, 0.0, &e).is_err());
        assert!(scaling_gap(z, 1.0, &e).is_err());
    }

    #[test]
    fn scaling_gap_seeded_sweep() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..500 {
            let n_arcs = rng.random_range(1..=4usize);
            let arcs: Vec<(f64, f64)> = (0..n_arcs)
                .map(|_| {
                    let a = rng.random_range(0.0..TAU);
                    let len = rng.random_range(0.0..1.0);
                    (a, a + len)
                })
                .collect();
            let set = BoundarySet::new(&arcs).unwrap();
            let z = DiskPoint::new(rng.random_range(0.0..1.0), rng.random_range(0.0..TAU)).unwrap();
            let tau = rng.random_range(0.001..0.999);
            let (lhs, rhs) = scaling_gap(z, tau, &set).unwrap();
            assert!(lhs <= rhs + 1e-12, "lhs={lhs} rhs={rhs}");
        }
    }

    #[test]
    fn wrap_around_arc_is_split_and_merged() {
        let set = BoundarySet::new(&[(5.5, 7.0)]).unwrap();
        assert_eq!(set.arcs().len(), 2);
        assert!(set.contains_angle(6.0));
        assert!(set.contains_angle(0.3));
        assert!(!set.contains_angle(3.0));
        assert!((set.total_length() - 1.5).abs() < 1e-12);
    }

    #[test]
    fn overlapping_arcs_merge() {
        let set = BoundarySet::new(&[(0.0, 1.0), (0.5, 2.0)]).unwrap();
        assert_eq!(set.arcs(), &[(0.0, 2.0)]);
    }

    #[test]
    fn json_schema_roundtrip() {
        let set = BoundarySet::new(&[(0.1, 0.4), (2.0, 2.0)]).unwrap();
        let text = serde_json::to_string(&set).unwrap();
        assert!(text.contains("\"arcs\""));
        let back: BoundarySet = serde_json::from_str(&text).unwrap();
        assert_eq!(back, set);
    }

    #[test]
    fn grid_construction_examples() {
        let e = BoundarySet::point(0.0);
        let grid = build_grid(&e, 3, 8).unwrap();
        let radii: Vec<f64> = grid.layers().iter().map(|l| l.radius).collect();
        assert_eq!(radii, vec![0.5, 0.75, 0.875]);
        // Angles cluster near the singular point.
        let near_zero = grid.layers()[2]
            .angles
            .iter()
            .filter(|&&t| !(0.26..=TAU - 0.26).contains(&t))
            .count();
        assert!(near_zero >= 8, "got {near_zero}");

        // Full circle: no endpoint refinement, exactly the uniform budget.
        let full = build_grid(&BoundarySet::full_circle(), 1, 4).unwrap();
        assert_eq!(full.layers()[0].angles.len(), 4);

        let again = build_grid(&e, 3, 8).unwrap();
        assert_eq!(grid, again);
    }

    #[test]
    fn grid_contains_near_minimal_rho_angle() {
        let set = BoundarySet::new(&[(1.0, 1.5), (4.0, 4.0)]).unwrap();
        let grid = build_grid(&set, 10, 16).unwrap();
        for layer in grid.layers() {
            let true_min = 1.0 - layer.radius;
            let layer_min = layer
                .angles
                .iter()
                .map(|&t| rho(DiskPoint::new(layer.radius, t).unwrap(), &set).unwrap())
                .fold(f64::INFINITY, f64::min);
            assert!(
                layer_min <= true_min + 0.5f64.powi(layer.depth as i32 + 2),
                "depth {} min {layer_min} true {true_min}",
                layer.depth
            );
        }
    }

    #[test]
    fn grid_rejects_bad_parameters() {
        let e = BoundarySet::point(0.0);
        assert!(build_grid(&e, 3, 0).is_err());
        assert!(build_grid(&e, 0, 4).is_err());
        assert!(build_grid(&e, 41, 4).is_err());
    }

    fn arb_set() -> impl Strategy<Value = BoundarySet> {
        proptest::collection::vec((0.0..TAU, 0.0..1.5f64), 1..4)
            .prop_map(|arcs| {
                let pairs: Vec<(f64, f64)> =
                    arcs.into_iter().map(|(a, len)| (a, a + len)).collect();
                BoundarySet::new(&pairs).unwrap()
            })
    }

    proptest! {
        #[test]
        fn rho_scaling_inequality(
            r in 0.0..0.999f64,
            theta in 0.0..TAU,
            tau in 0.001..0.999f64,
            set in arb_set(),
        ) {
            let z = DiskPoint::new(r, theta).unwrap();
            let (lhs, rhs) = scaling_gap(z, tau, &set).unwrap();
            prop_assert!(lhs <= rhs + 1e-12);
        }

        #[test]
        fn rho_midpoint_radius_bound(
            r in 0.0..0.999f64,
            theta in 0.0..TAU,
            set in arb_set(),
        ) {
            // rho at radius (1+r)/2 is at least half of rho at radius r.
            let z = DiskPoint::new(r, theta).unwrap();
            let half_step = DiskPoint::new((1.0 + r) / 2.0, theta).unwrap();
            let a = rho(half_step, &set).unwrap();
            let b = rho(z, &set).unwrap();
            prop_assert!(a >= 0.5 * b - 1e-12, "a={a} b={b}");
        }

        #[test]
        fn rho_is_one_lipschitz(
            r1 in 0.0..0.999f64,
            t1 in 0.0..TAU,
            r2 in 0.0..0.999f64,
            t2 in 0.0..TAU,
            set in arb_set(),
        ) {
            let z1 = DiskPoint::new(r1, t1).unwrap();
            let z2 = DiskPoint::new(r2, t2).unwrap();
            let d = (z1.to_complex() - z2.to_complex()).norm();
            let dr = (rho(z1, &set).unwrap() - rho(z2, &set).unwrap()).abs();
            prop_assert!(dr <= d + 1e-12);
        }

        #[test]
        fn rho_boundary_circle_exact(r in 0.0..0.999f64, theta in 0.0..TAU) {
            let z = DiskPoint::new(r, theta).unwrap();
            let d = rho(z, &BoundarySet::full_circle()).unwrap();
            prop_assert!((d - (1.0 - r)).abs() <= 1e-14);
        }

        #[test]
        fn roundtrip_polar(r in 0.0..0.999f64, theta in -10.0..10.0f64) {
            let z = DiskPoint::new(r, theta).unwrap();
            let back = DiskPoint::from_complex(z.to_complex()).unwrap();
            prop_assert!((back.radius() - z.radius()).abs() <= 1e-14 * z.radius().max(1e-300));
            let dt = (back.angle() - z.angle()).abs();
            prop_assert!(dt.min(TAU - dt) <= 1e-13);
        }
    }
}
