//! Planar domains described by an inside predicate and a distance to the
//! boundary, in double precision (they drive Monte-Carlo walks).

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::compact::{point_in_polygon, segment_distance};

pub trait Domain: Send + Sync {
    fn contains(&self, z: Complex64) -> bool;
    /// Distance from an inside point to the boundary.
    fn distance(&self, z: Complex64) -> f64;
    /// A boundary point closest to `z`.
    fn nearest_boundary(&self, z: Complex64) -> Complex64;
    /// Characteristic size, used to scale stopping tolerances.
    fn scale(&self) -> f64 {
        1.0
    }
}

/// Increasing profile `psi(t) = min(1, scale * t^a)` on `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerPsi {
    pub a: f64,
    pub scale: f64,
}

impl PowerPsi {
    pub fn eval(&self, t: f64) -> f64 {
        (self.scale * t.max(0.0).powf(self.a)).min(1.0)
    }
}

#[derive(Clone)]
pub enum DomainDesc {
    UnitDisc,
    /// `{-1 < Re z < 1}`.
    Strip,
    Disc {
        center: Complex64,
        radius: f64,
    },
    /// `{P(., zeta) > c}`.
    TangentDisc {
        c: f64,
        zeta: Complex64,
    },
    /// `{z in D : Re z > 1 - psi(|Im z|)}`; build with [`DomainDesc::psi_region`].
    PsiRegion {
        psi: PowerPsi,
        curve: Arc<Vec<Complex64>>,
    },
    /// Interior of a simple closed polygon.
    Polygon(Vec<Complex64>),
    Custom(Arc<dyn Domain>),
}

impl fmt::Debug for DomainDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainDesc::UnitDisc => write!(f, "UnitDisc"),
            DomainDesc::Strip => write!(f, "Strip"),
            DomainDesc::Disc { center, radius } => write!(f, "Disc({center}, {radius})"),
            DomainDesc::TangentDisc { c, zeta } => write!(f, "TangentDisc(c={c}, zeta={zeta})"),
            DomainDesc::PsiRegion { psi, .. } => write!(f, "PsiRegion({psi:?})"),
            DomainDesc::Polygon(p) => write!(f, "Polygon({} vertices)", p.len()),
            DomainDesc::Custom(_) => write!(f, "Custom"),
        }
    }
}

fn disc_nearest(center: Complex64, radius: f64, z: Complex64) -> Complex64 {
    let d = z - center;
    if d.norm() == 0.0 {
        center + radius
    } else {
        center + d * (radius / d.norm())
    }
}

fn nearest_on_segment(a: Complex64, b: Complex64, p: Complex64) -> Complex64 {
    let u = b - a;
    let len2 = u.norm_sqr();
    let t = if len2 == 0.0 { 0.0 } else { (((p - a) * u.conj()).re / len2).clamp(0.0, 1.0) };
    a + u * t
}

/// Nearest point of a polyline whose vertices have increasing imaginary
/// parts. Segments are scanned outward from `z.im` until their `im` range
/// is farther away than the best distance so far.
fn nearest_on_curve(curve: &[Complex64], z: Complex64) -> Complex64 {
    let nseg = curve.len() - 1;
    let start = curve.partition_point(|v| v.im < z.im).clamp(1, nseg) - 1;
    let gap = |j: usize| (curve[j].im - z.im).max(z.im - curve[j + 1].im).max(0.0);
    let mut best = nearest_on_segment(curve[start], curve[start + 1], z);
    let mut best_d = (best - z).norm();
    let visit = |j: usize, best: &mut Complex64, best_d: &mut f64| {
        let q = nearest_on_segment(curve[j], curve[j + 1], z);
        let d = (q - z).norm();
        if d < *best_d {
            *best = q;
            *best_d = d;
        }
    };
    for j in (0..start).rev() {
        if gap(j) >= best_d {
            break;
        }
        visit(j, &mut best, &mut best_d);
    }
    for j in start + 1..nseg {
        if gap(j) >= best_d {
            break;
        }
        visit(j, &mut best, &mut best_d);
    }
    best
}

const PSI_CURVE_POINTS: usize = 4096;

impl DomainDesc {
    pub fn tangent_disc(c: f64, zeta: Complex64) -> Self {
        DomainDesc::TangentDisc { c, zeta }
    }

    pub fn psi_region(psi: PowerPsi) -> Self {
        DomainDesc::PsiRegion { psi, curve: Arc::new(Self::psi_curve(&psi)) }
    }

    fn as_disc(&self) -> Option<(Complex64, f64)> {
        match self {
            DomainDesc::UnitDisc => Some((Complex64::new(0.0, 0.0), 1.0)),
            DomainDesc::Disc { center, radius } => Some((*center, *radius)),
            DomainDesc::TangentDisc { c, zeta } => Some((zeta * (c / (c + 1.0)), 1.0 / (c + 1.0))),
            _ => None,
        }
    }

    /// Boundary curve `x = 1 - psi(|y|)` inside the closed disc, as a polyline
    /// from the lower to the upper crossing with the unit circle.
    fn psi_curve(psi: &PowerPsi) -> Vec<Complex64> {
        // The curve meets the circle where (1 - psi(y))^2 + y^2 = 1; bisect.
        let g = |y: f64| (1.0 - psi.eval(y)).powi(2) + y * y - 1.0;
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if g(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let n = PSI_CURVE_POINTS;
        (0..=2 * n)
            .map(|i| {
                let y = hi * (i as f64 - n as f64) / n as f64;
                Complex64::new(1.0 - psi.eval(y.abs()), y)
            })
            .collect()
    }

    /// Checks that `distance > 0` exactly on inside points of an
    /// `n x n` grid over `[-lim, lim]^2`.
    pub fn validate(&self, n: usize, lim: f64) -> Result<()> {
        for i in 0..n {
            for j in 0..n {
                let z = Complex64::new(
                    -lim + 2.0 * lim * (i as f64 + 0.5) / n as f64,
                    -lim + 2.0 * lim * (j as f64 + 0.5) / n as f64,
                );
                let inside = self.contains(z);
                let d = if inside { self.distance(z) } else { 0.0 };
                if inside != (d > 0.0) {
                    return Err(Error::Precondition(format!("domain predicate and distance disagree at {z}")));
                }
            }
        }
        Ok(())
    }
}

impl Domain for DomainDesc {
    fn contains(&self, z: Complex64) -> bool {
        if let Some((c, r)) = self.as_disc() {
            return (z - c).norm() < r;
        }
        match self {
            DomainDesc::Strip => z.re.abs() < 1.0,
            DomainDesc::PsiRegion { psi, .. } => z.norm() < 1.0 && z.re > 1.0 - psi.eval(z.im.abs()),
            DomainDesc::Polygon(p) => {
                let pts: Vec<[f64; 2]> = p.iter().map(|v| [v.re, v.im]).collect();
                point_in_polygon(&pts, [z.re, z.im])
            }
            DomainDesc::Custom(d) => d.contains(z),
            _ => unreachable!(),
        }
    }

    fn distance(&self, z: Complex64) -> f64 {
        if let Some((c, r)) = self.as_disc() {
            return (r - (z - c).norm()).max(0.0);
        }
        match self {
            DomainDesc::Strip => (1.0 - z.re.abs()).max(0.0),
            DomainDesc::PsiRegion { curve, .. } => {
                if !self.contains(z) {
                    return 0.0;
                }
                let to_curve = (nearest_on_curve(curve, z) - z).norm();
                to_curve.min(1.0 - z.norm()).max(f64::MIN_POSITIVE)
            }
            DomainDesc::Polygon(p) => {
                if !self.contains(z) {
                    return 0.0;
                }
                let n = p.len();
                (0..n)
                    .map(|i| {
                        let (a, b) = (p[i], p[(i + 1) % n]);
                        segment_distance([a.re, a.im], [b.re, b.im], [z.re, z.im])
                    })
                    .fold(f64::INFINITY, f64::min)
            }
            DomainDesc::Custom(d) => d.distance(z),
            _ => unreachable!(),
        }
    }

    fn nearest_boundary(&self, z: Complex64) -> Complex64 {
        if let Some((c, r)) = self.as_disc() {
            return disc_nearest(c, r, z);
        }
        match self {
            DomainDesc::Strip => Complex64::new(if z.re >= 0.0 { 1.0 } else { -1.0 }, z.im),
            DomainDesc::PsiRegion { curve, .. } => {
                let best = nearest_on_curve(curve, z);
                let circ = disc_nearest(Complex64::new(0.0, 0.0), 1.0, z);
                if (circ - z).norm() < (best - z).norm() {
                    circ
                } else {
                    best
                }
            }
            DomainDesc::Polygon(p) => {
                let n = p.len();
                (0..n)
                    .map(|i| nearest_on_segment(p[i], p[(i + 1) % n], z))
                    .min_by(|a, b| (a - z).norm().total_cmp(&(b - z).norm()))
                    .expect("polygon has edges")
            }
            DomainDesc::Custom(d) => d.nearest_boundary(z),
            _ => unreachable!(),
        }
    }

    fn scale(&self) -> f64 {
        match self {
            DomainDesc::Disc { radius, .. } => *radius,
            DomainDesc::TangentDisc { c, .. } => 1.0 / (c + 1.0),
            DomainDesc::Polygon(p) => {
                let (lo, hi) = p.iter().fold((p[0], p[0]), |(lo, hi), v| {
                    (Complex64::new(lo.re.min(v.re), lo.im.min(v.im)), Complex64::new(hi.re.max(v.re), hi.im.max(v.im)))
                });
                (hi.re - lo.re).max(hi.im - lo.im)
            }
            DomainDesc::Custom(d) => d.scale(),
            _ => 1.0,
        }
    }
}
