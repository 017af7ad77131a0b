use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::geometry::compact::Shape;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComplementVerdict {
    Pass,
    Fail,
    Inconclusive,
}

/// Axis-aligned box `(min, max)`.
pub type BoundingBox = ([f64; 2], [f64; 2]);

/// Square of side `4 max(1, d_max)` centered at 0.
pub fn default_box(shapes: &[&Shape]) -> BoundingBox {
    let d = shapes.iter().map(|s| s.max_modulus()).fold(1.0, f64::max);
    ([-2.0 * d, -2.0 * d], [2.0 * d, 2.0 * d])
}

/// Raster test that the complement of the union of `shapes` is connected.
///
/// A cell is covered when the set comes within half a cell diagonal of its
/// center. The uncovered cells are flood-filled from the box boundary at
/// resolutions `grid_n` and `2 grid_n`; the verdicts must agree.
pub fn connected_complement_check(shapes: &[&Shape], bbox: Option<BoundingBox>, grid_n: usize) -> ComplementVerdict {
    let grid_n = grid_n.max(64);
    let (mut lo, mut hi) = bbox.unwrap_or_else(|| default_box(shapes));
    // Pad so every set is strictly interior.
    for s in shapes {
        let (a, b) = s.bounding_box();
        for i in 0..2 {
            lo[i] = lo[i].min(a[i]);
            hi[i] = hi[i].max(b[i]);
        }
    }
    let pad = 0.05 * (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-9);
    let bbox = ([lo[0] - pad, lo[1] - pad], [hi[0] + pad, hi[1] + pad]);
    let coarse = raster_connected(shapes, bbox, grid_n);
    let fine = raster_connected(shapes, bbox, 2 * grid_n);
    match (coarse, fine) {
        (true, true) => ComplementVerdict::Pass,
        (false, false) => ComplementVerdict::Fail,
        _ => ComplementVerdict::Inconclusive,
    }
}

fn raster_connected(shapes: &[&Shape], (lo, hi): BoundingBox, n: usize) -> bool {
    let (w, h) = ((hi[0] - lo[0]) / n as f64, (hi[1] - lo[1]) / n as f64);
    let half_diag = 0.5 * w.hypot(h);
    let idx = |i: usize, j: usize| i * n + j;
    let covered: Vec<bool> = (0..n * n)
        .map(|c| {
            let (i, j) = (c / n, c % n);
            let p = [lo[0] + (i as f64 + 0.5) * w, lo[1] + (j as f64 + 0.5) * h];
            shapes.iter().any(|s| s.distance(p) <= half_diag)
        })
        .collect();
    let mut seen = vec![false; n * n];
    let mut queue = VecDeque::new();
    for k in 0..n {
        for (i, j) in [(k, 0), (k, n - 1), (0, k), (n - 1, k)] {
            if !covered[idx(i, j)] && !seen[idx(i, j)] {
                seen[idx(i, j)] = true;
                queue.push_back((i, j));
            }
        }
    }
    while let Some((i, j)) = queue.pop_front() {
        let neighbors = [(i.wrapping_sub(1), j), (i + 1, j), (i, j.wrapping_sub(1)), (i, j + 1)];
        for (a, b) in neighbors {
            if a < n && b < n && !covered[idx(a, b)] && !seen[idx(a, b)] {
                seen[idx(a, b)] = true;
                queue.push_back((a, b));
            }
        }
    }
    (0..n * n).all(|c| covered[c] || seen[c])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn disc(x: f64, y: f64, r: f64) -> Shape {
        Shape::Disc { center: [x, y], radius: r }
    }

    fn ring(radius: f64, count: usize, r: f64) -> Vec<Shape> {
        (0..count)
            .map(|j| {
                let t = std::f64::consts::TAU * j as f64 / count as f64;
                disc(radius * t.cos(), radius * t.sin(), r)
            })
            .collect()
    }

    #[test]
    fn examples() {
        let d = disc(0.0, 0.0, 1.0);
        assert_eq!(connected_complement_check(&[&d], None, 64), ComplementVerdict::Pass);
        let two = [disc(-1.0, 0.0, 0.3), disc(1.5, 0.5, 0.2)];
        let refs: Vec<&Shape> = two.iter().collect();
        assert_eq!(connected_complement_check(&refs, None, 64), ComplementVerdict::Pass);
        let annulus = ring(1.0, 40, 0.15);
        let refs: Vec<&Shape> = annulus.iter().collect();
        assert_eq!(connected_complement_check(&refs, None, 64), ComplementVerdict::Fail);
    }

    #[test]
    fn circle_arc_with_gap_passes() {
        let arc = Shape::Arc { center: [0.0, 0.0], radius: 1.2, theta_lo: 0.5, theta_hi: 5.5 };
        assert_eq!(connected_complement_check(&[&arc], None, 64), ComplementVerdict::Pass);
        let full = Shape::Arc { center: [0.0, 0.0], radius: 1.2, theta_lo: 0.0, theta_hi: std::f64::consts::TAU };
        assert_eq!(connected_complement_check(&[&full], None, 64), ComplementVerdict::Fail);
    }

    proptest! {
        // Adding a set that lies outside the ring cannot fill the enclosed hole.
        #[test]
        fn failing_union_stays_failing(x in 1.6f64..1.9, y in -1.9f64..1.9, r in 0.01f64..0.08) {
            let mut shapes = ring(1.0, 40, 0.15);
            shapes.push(disc(x, y, r));
            let refs: Vec<&Shape> = shapes.iter().collect();
            let bbox = Some(([-2.0, -2.0], [2.0, 2.0]));
            prop_assert_eq!(connected_complement_check(&refs, bbox, 64), ComplementVerdict::Fail);
        }
    }
}
