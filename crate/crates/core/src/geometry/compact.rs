use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{ComplexValue, Precision, Real};

/// Exact parameters of a compact plane set. Points are `[re, im]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Shape {
    Disc {
        center: [f64; 2],
        radius: f64,
    },
    /// Axis-aligned closed rectangle.
    Rectangle {
        min: [f64; 2],
        max: [f64; 2],
    },
    /// `{center + radius e^{i theta} : theta_lo <= theta <= theta_hi}`.
    Arc {
        center: [f64; 2],
        radius: f64,
        theta_lo: f64,
        theta_hi: f64,
    },
    Segment {
        a: [f64; 2],
        b: [f64; 2],
    },
    /// A closed polyline bounds a filled polygon.
    Polyline {
        points: Vec<[f64; 2]>,
        closed: bool,
    },
    Union {
        parts: Vec<Shape>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeTag {
    Disc,
    Rectangle,
    Arc,
    Segment,
    Polyline,
    Union,
}

impl Shape {
    pub fn tag(&self) -> ShapeTag {
        match self {
            Shape::Disc { .. } => ShapeTag::Disc,
            Shape::Rectangle { .. } => ShapeTag::Rectangle,
            Shape::Arc { .. } => ShapeTag::Arc,
            Shape::Segment { .. } => ShapeTag::Segment,
            Shape::Polyline { .. } => ShapeTag::Polyline,
            Shape::Union { .. } => ShapeTag::Union,
        }
    }

    #[allow(clippy::neg_cmp_op_on_partial_ord)] // rejects NaN too
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Precondition(m.to_string()));
        match self {
            Shape::Disc { radius, .. } if !(*radius >= 0.0) => bad("disc radius must be >= 0"),
            Shape::Rectangle { min, max } if min[0] > max[0] || min[1] > max[1] => {
                bad("rectangle min must not exceed max")
            }
            Shape::Arc { radius, theta_lo, theta_hi, .. } if !(*radius > 0.0) || theta_hi < theta_lo => {
                bad("arc needs radius > 0 and theta_lo <= theta_hi")
            }
            Shape::Polyline { points, closed } if points.is_empty() || (*closed && points.len() < 3) => {
                bad("polyline needs points (closed polylines need >= 3)")
            }
            Shape::Union { parts } if parts.is_empty() => bad("union needs at least one part"),
            Shape::Union { parts } => parts.iter().try_for_each(Shape::validate),
            _ => Ok(()),
        }
    }

    /// Exact `max |z|` over the shape.
    pub fn max_modulus(&self) -> f64 {
        let m = |p: &[f64; 2]| p[0].hypot(p[1]);
        match self {
            Shape::Disc { center, radius } => m(center) + radius,
            Shape::Rectangle { min, max } => [[min[0], min[1]], [min[0], max[1]], [max[0], min[1]], [max[0], max[1]]]
                .iter()
                .map(m)
                .fold(0.0, f64::max),
            Shape::Arc { center, radius, theta_lo, theta_hi } => {
                let end = |t: f64| m(&[center[0] + radius * t.cos(), center[1] + radius * t.sin()]);
                let mut best = end(*theta_lo).max(end(*theta_hi));
                // The farthest point of the full circle lies in the direction of the center.
                if m(center) > 0.0 {
                    let dir = center[1].atan2(center[0]);
                    let tau = std::f64::consts::TAU;
                    let k = ((theta_lo - dir) / tau).ceil();
                    if dir + k * tau <= *theta_hi {
                        best = best.max(m(center) + radius);
                    }
                } else {
                    best = *radius;
                }
                best
            }
            Shape::Segment { a, b } => m(a).max(m(b)),
            Shape::Polyline { points, .. } => points.iter().map(m).fold(0.0, f64::max),
            Shape::Union { parts } => parts.iter().map(Shape::max_modulus).fold(0.0, f64::max),
        }
    }

    /// Inclusive bounding box `(min, max)`.
    pub fn bounding_box(&self) -> ([f64; 2], [f64; 2]) {
        match self {
            Shape::Disc { center, radius } => {
                ([center[0] - radius, center[1] - radius], [center[0] + radius, center[1] + radius])
            }
            Shape::Rectangle { min, max } => (*min, *max),
            Shape::Arc { center, radius, .. } => {
                ([center[0] - radius, center[1] - radius], [center[0] + radius, center[1] + radius])
            }
            Shape::Segment { a, b } => ([a[0].min(b[0]), a[1].min(b[1])], [a[0].max(b[0]), a[1].max(b[1])]),
            Shape::Polyline { points, .. } => {
                points.iter().fold(([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]), |(lo, hi), p| {
                    ([lo[0].min(p[0]), lo[1].min(p[1])], [hi[0].max(p[0]), hi[1].max(p[1])])
                })
            }
            Shape::Union { parts } => parts
                .iter()
                .map(Shape::bounding_box)
                .fold(([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]), |(lo, hi), (a, b)| {
                    ([lo[0].min(a[0]), lo[1].min(a[1])], [hi[0].max(b[0]), hi[1].max(b[1])])
                }),
        }
    }

    /// Euclidean distance from `p` to the shape (0 inside solid shapes).
    pub fn distance(&self, p: [f64; 2]) -> f64 {
        match self {
            Shape::Disc { center, radius } => ((p[0] - center[0]).hypot(p[1] - center[1]) - radius).max(0.0),
            Shape::Rectangle { min, max } => {
                let dx = (min[0] - p[0]).max(p[0] - max[0]).max(0.0);
                let dy = (min[1] - p[1]).max(p[1] - max[1]).max(0.0);
                dx.hypot(dy)
            }
            Shape::Arc { center, radius, theta_lo, theta_hi } => {
                let (dx, dy) = (p[0] - center[0], p[1] - center[1]);
                let tau = std::f64::consts::TAU;
                let phi = dy.atan2(dx);
                let k = ((theta_lo - phi) / tau).ceil();
                if phi + k * tau <= *theta_hi {
                    (dx.hypot(dy) - radius).abs()
                } else {
                    let end = |t: f64| (dx - radius * t.cos()).hypot(dy - radius * t.sin());
                    end(*theta_lo).min(end(*theta_hi))
                }
            }
            Shape::Segment { a, b } => segment_distance(*a, *b, p),
            Shape::Polyline { points, closed } => {
                if *closed && point_in_polygon(points, p) {
                    return 0.0;
                }
                let n = points.len();
                if n == 1 {
                    return (p[0] - points[0][0]).hypot(p[1] - points[0][1]);
                }
                let open = points.windows(2).map(|w| segment_distance(w[0], w[1], p));
                let close = closed.then(|| segment_distance(points[n - 1], points[0], p));
                open.chain(close).fold(f64::INFINITY, f64::min)
            }
            Shape::Union { parts } => parts.iter().map(|s| s.distance(p)).fold(f64::INFINITY, f64::min),
        }
    }

    /// Whether the shape has nonempty interior that should be sampled.
    pub fn is_solid(&self) -> bool {
        match self {
            Shape::Disc { radius, .. } => *radius > 0.0,
            Shape::Rectangle { min, max } => min[0] < max[0] && min[1] < max[1],
            Shape::Polyline { closed, .. } => *closed,
            _ => false,
        }
    }

    fn boundary_samples(&self, n: usize, prec: Precision) -> Vec<ComplexValue> {
        let n = n.max(1);
        match self {
            Shape::Disc { center, radius } => {
                let c = ComplexValue::from_f64(prec, center[0], center[1]);
                let r = prec.real(*radius);
                let two_pi = prec.pi() * 2u32;
                (0..n)
                    .map(|j| {
                        let theta = Real::with_val(prec.bits(), &two_pi * j as u32) / n as u32;
                        &c + &ComplexValue::from_polar(&r, &theta)
                    })
                    .collect()
            }
            Shape::Arc { center, radius, theta_lo, theta_hi } => {
                let c = ComplexValue::from_f64(prec, center[0], center[1]);
                let r = prec.real(*radius);
                let lo = prec.real(*theta_lo);
                let span = prec.real(*theta_hi) - &lo;
                let denom = (n.max(2) - 1) as u32;
                (0..n.max(2))
                    .map(|j| {
                        let theta = Real::with_val(prec.bits(), &span * j as u32) / denom + &lo;
                        &c + &ComplexValue::from_polar(&r, &theta)
                    })
                    .collect()
            }
            Shape::Segment { a, b } => polyline_samples(&[*a, *b], false, n.max(2), prec),
            Shape::Rectangle { min, max } => {
                let pts = [[min[0], min[1]], [max[0], min[1]], [max[0], max[1]], [min[0], max[1]]];
                polyline_samples(&pts, true, n, prec)
            }
            Shape::Polyline { points, closed } => polyline_samples(points, *closed, n, prec),
            Shape::Union { parts } => parts.iter().flat_map(|s| s.boundary_samples(n, prec)).collect(),
        }
    }

    fn interior_samples(&self, n: usize, prec: Precision) -> Vec<ComplexValue> {
        if n == 0 {
            return Vec::new();
        }
        match self {
            Shape::Disc { center, radius } if *radius > 0.0 => {
                // Concentric rings with point counts proportional to the radius.
                let rings = ((n as f64 / 3.0).sqrt().ceil() as usize).max(1);
                let total: usize = (1..=rings).sum();
                let c = ComplexValue::from_f64(prec, center[0], center[1]);
                let two_pi = prec.pi() * 2u32;
                let mut out = vec![c.clone()];
                for i in 1..=rings {
                    let per = ((n * i) as f64 / total as f64).ceil() as usize;
                    let r = prec.real(*radius) * i as u32 / (rings + 1) as u32;
                    for j in 0..per.max(3) {
                        // Stagger rings by half a step.
                        let theta =
                            Real::with_val(prec.bits(), &two_pi * (2 * j + (i % 2)) as u32) / (2 * per.max(3)) as u32;
                        out.push(&c + &ComplexValue::from_polar(&r, &theta));
                    }
                }
                out
            }
            Shape::Rectangle { min, max } if self.is_solid() => {
                let w = max[0] - min[0];
                let h = max[1] - min[1];
                let nx = ((n as f64 * w / h).sqrt().round() as usize).max(1);
                let ny = (n / nx).max(1);
                let mut out = Vec::with_capacity(nx * ny);
                for i in 0..nx {
                    for j in 0..ny {
                        let x = min[0] + w * (i as f64 + 0.5) / nx as f64;
                        let y = min[1] + h * (j as f64 + 0.5) / ny as f64;
                        out.push(ComplexValue::from_f64(prec, x, y));
                    }
                }
                out
            }
            Shape::Polyline { points, closed: true } => {
                let (lo, hi) = self.bounding_box();
                let area_box = (hi[0] - lo[0]) * (hi[1] - lo[1]);
                let area = polygon_area(points).abs().max(1e-300);
                let m = ((n as f64 * area_box / area).sqrt().ceil() as usize).max(2);
                let mut out = Vec::new();
                for i in 0..m {
                    for j in 0..m {
                        let x = lo[0] + (hi[0] - lo[0]) * (i as f64 + 0.5) / m as f64;
                        let y = lo[1] + (hi[1] - lo[1]) * (j as f64 + 0.5) / m as f64;
                        if point_in_polygon(points, [x, y]) {
                            out.push(ComplexValue::from_f64(prec, x, y));
                        }
                    }
                }
                out
            }
            Shape::Union { parts } => parts.iter().flat_map(|s| s.interior_samples(n, prec)).collect(),
            _ => Vec::new(),
        }
    }
}

fn polyline_samples(points: &[[f64; 2]], closed: bool, n: usize, prec: Precision) -> Vec<ComplexValue> {
    if points.len() == 1 {
        return vec![ComplexValue::from_f64(prec, points[0][0], points[0][1])];
    }
    let mut edges: Vec<([f64; 2], [f64; 2])> = points.windows(2).map(|w| (w[0], w[1])).collect();
    if closed {
        edges.push((points[points.len() - 1], points[0]));
    }
    let len = |e: &([f64; 2], [f64; 2])| (e.1[0] - e.0[0]).hypot(e.1[1] - e.0[1]);
    let total: f64 = edges.iter().map(len).sum();
    let mut out = Vec::new();
    for e in &edges {
        let k = ((n as f64 * len(e) / total).round() as usize).max(1);
        let a = ComplexValue::from_f64(prec, e.0[0], e.0[1]);
        let d = &ComplexValue::from_f64(prec, e.1[0], e.1[1]) - &a;
        for i in 0..k {
            let t = prec.real(i as f64) / k as u32;
            out.push(&a + &d.scale(&t));
        }
    }
    if !closed {
        let last = points[points.len() - 1];
        out.push(ComplexValue::from_f64(prec, last[0], last[1]));
    }
    out
}

pub(crate) fn segment_distance(a: [f64; 2], b: [f64; 2], p: [f64; 2]) -> f64 {
    let (ux, uy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = ux * ux + uy * uy;
    let t = if len2 == 0.0 { 0.0 } else { (((p[0] - a[0]) * ux + (p[1] - a[1]) * uy) / len2).clamp(0.0, 1.0) };
    (p[0] - a[0] - t * ux).hypot(p[1] - a[1] - t * uy)
}

pub(crate) fn polygon_area(points: &[[f64; 2]]) -> f64 {
    let n = points.len();
    (0..n)
        .map(|i| {
            let (a, b) = (points[i], points[(i + 1) % n]);
            a[0] * b[1] - b[0] * a[1]
        })
        .sum::<f64>()
        / 2.0
}

/// Even-odd rule.
pub(crate) fn point_in_polygon(points: &[[f64; 2]], p: [f64; 2]) -> bool {
    let n = points.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (points[i], points[j]);
        if (a[1] > p[1]) != (b[1] > p[1]) {
            let x = a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
            if p[0] < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

/// Sample counts used when discretizing a shape.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleDensity {
    pub boundary: usize,
    pub interior: usize,
}

impl SampleDensity {
    pub fn scaled(self, factor: usize) -> Self {
        SampleDensity { boundary: self.boundary * factor, interior: self.interior * factor }
    }
}

impl Default for SampleDensity {
    fn default() -> Self {
        SampleDensity { boundary: 256, interior: 64 }
    }
}

/// Discretized compact set: exact shape parameters plus boundary and
/// interior samples. Sup-norms over the set are taken over these samples.
#[derive(Clone, Debug)]
pub struct CompactSet {
    pub id: String,
    pub shape: Shape,
    pub density: SampleDensity,
    pub boundary_samples: Vec<ComplexValue>,
    pub interior_samples: Vec<ComplexValue>,
    pub d_max: Real,
    prec: Precision,
}

impl CompactSet {
    pub fn sample(id: impl Into<String>, shape: Shape, density: SampleDensity, prec: Precision) -> Result<Self> {
        shape.validate()?;
        let boundary_samples = shape.boundary_samples(density.boundary, prec);
        let interior_samples = shape.interior_samples(density.interior, prec);
        let mut d_max = Real::with_val(prec.bits(), 0);
        for z in boundary_samples.iter().chain(&interior_samples) {
            let a = z.abs();
            if a > d_max {
                d_max = a;
            }
        }
        Ok(CompactSet { id: id.into(), shape, density, boundary_samples, interior_samples, d_max, prec })
    }

    /// Same shape, `factor` times as many samples.
    pub fn densified(&self, factor: usize) -> Self {
        CompactSet::sample(self.id.clone(), self.shape.clone(), self.density.scaled(factor), self.prec)
            .expect("shape already validated")
    }

    pub fn union(id: impl Into<String>, sets: &[&CompactSet]) -> Self {
        let prec = sets[0].prec;
        let shape = Shape::Union { parts: sets.iter().map(|s| s.shape.clone()).collect() };
        let mut out = CompactSet {
            id: id.into(),
            shape,
            density: sets[0].density,
            boundary_samples: sets.iter().flat_map(|s| s.boundary_samples.iter().cloned()).collect(),
            interior_samples: sets.iter().flat_map(|s| s.interior_samples.iter().cloned()).collect(),
            d_max: Real::with_val(prec.bits(), 0),
            prec,
        };
        for s in sets {
            if s.d_max > out.d_max {
                out.d_max = s.d_max.clone();
            }
        }
        out
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    pub fn shape_tag(&self) -> ShapeTag {
        self.shape.tag()
    }

    pub fn samples(&self) -> impl Iterator<Item = &ComplexValue> {
        self.boundary_samples.iter().chain(&self.interior_samples)
    }

    pub fn len(&self) -> usize {
        self.boundary_samples.len() + self.interior_samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Max of `g` over the samples, doubling the sample count until the
    /// value changes by less than 1% (or `max_doublings` is reached).
    /// Returns the value and the sample count it was taken over.
    pub fn sup_with_densification<F: Fn(&ComplexValue) -> f64>(&self, g: F, max_doublings: usize) -> (f64, usize) {
        let sup = |s: &CompactSet| s.samples().map(&g).fold(f64::NEG_INFINITY, f64::max);
        let mut cur = self.clone();
        let mut value = sup(&cur);
        for _ in 0..max_doublings {
            let next = cur.densified(2);
            let v = sup(&next);
            let settled = (v - value).abs() <= 0.01 * value.abs().max(f64::MIN_POSITIVE);
            cur = next;
            value = v;
            if settled {
                break;
            }
        }
        (value, cur.len())
    }
}
