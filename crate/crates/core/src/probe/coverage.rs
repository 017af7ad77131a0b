//! Box-grid coverage of sampled values, as a finite stand-in for density.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{region_samples, ApproachRegion};
use crate::numerics::{ComplexValue, Real};

use super::Evaluable;

/// Closed rectangle `[re0, re1] x [im0, im1]` of the value plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub re: [f64; 2],
    pub im: [f64; 2],
}

impl Window {
    pub fn centered(half_width: f64) -> Self {
        Window { re: [-half_width, half_width], im: [-half_width, half_width] }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |r: [f64; 2]| r[0].is_finite() && r[1].is_finite() && r[0] < r[1];
        if ok(self.re) && ok(self.im) {
            Ok(())
        } else {
            Err(Error::Precondition(format!("degenerate window {self:?}")))
        }
    }

    /// Cell index of `v`, or `None` outside the window.
    fn cell(&self, v: Complex64, n: usize) -> Option<u32> {
        let axis = |x: f64, r: [f64; 2]| -> Option<usize> {
            if !(x >= r[0] && x <= r[1]) {
                return None;
            }
            let i = ((x - r[0]) / (r[1] - r[0]) * n as f64) as usize;
            Some(i.min(n - 1))
        };
        Some((axis(v.im, self.im)? * n + axis(v.re, self.re)?) as u32)
    }

    /// Corners `(re0, im0, re1, im1)` of cell `idx`.
    pub fn cell_rect(&self, idx: u32, n: usize) -> [f64; 4] {
        let (i, j) = (idx as usize % n, idx as usize / n);
        let hx = (self.re[1] - self.re[0]) / n as f64;
        let hy = (self.im[1] - self.im[0]) / n as f64;
        let x0 = self.re[0] + i as f64 * hx;
        let y0 = self.im[0] + j as f64 * hy;
        [x0, y0, x0 + hx, y0 + hy]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverageScore {
    pub window: Window,
    pub grid_n: usize,
    /// Hit cells over `grid_n^2`.
    pub hit_fraction: f64,
    pub samples_used: usize,
    /// Sorted indices `row * grid_n + col` of the hit cells.
    pub hits: Vec<u32>,
}

impl CoverageScore {
    pub fn hit_cells(&self) -> usize {
        self.hits.len()
    }

    /// Hit cells lying entirely outside the closed disc `D(center, radius)`.
    pub fn hits_outside_disc(&self, center: Complex64, radius: f64) -> usize {
        self.hits
            .iter()
            .filter(|&&idx| {
                let [x0, y0, x1, y1] = self.window.cell_rect(idx, self.grid_n);
                let nx = center.re.clamp(x0, x1);
                let ny = center.im.clamp(y0, y1);
                (Complex64::new(nx, ny) - center).norm() > radius
            })
            .count()
    }
}

/// Coverage of `values`; non-finite values are counted as samples but hit
/// nothing.
pub fn coverage(values: &[ComplexValue], window: Window, grid_n: usize) -> Result<CoverageScore> {
    window.validate()?;
    if grid_n == 0 {
        return Err(Error::Precondition("grid_n must be positive".into()));
    }
    let mut hits: Vec<u32> =
        values.iter().filter(|v| v.is_finite()).filter_map(|v| window.cell(v.to_c64(), grid_n)).collect();
    hits.sort_unstable();
    hits.dedup();
    Ok(CoverageScore {
        window,
        grid_n,
        hit_fraction: hits.len() as f64 / (grid_n * grid_n) as f64,
        samples_used: values.len(),
        hits,
    })
}

pub fn plessner_probe<F: Evaluable + ?Sized>(
    f: &F,
    r: &ApproachRegion,
    window: Window,
    grid_n: usize,
    depth: usize,
    per_level: usize,
) -> Result<CoverageScore> {
    let values: Vec<ComplexValue> = region_samples(r, depth, per_level).iter().map(|z| f.eval_at(z)).collect();
    coverage(&values, window, grid_n)
}

/// Coverage after each depth `1..=depth`; the samples are nested, so the
/// curve is non-decreasing.
pub fn plessner_curve<F: Evaluable + ?Sized>(
    f: &F,
    r: &ApproachRegion,
    window: Window,
    grid_n: usize,
    depth: usize,
    per_level: usize,
) -> Result<Vec<CoverageScore>> {
    let values: Vec<ComplexValue> = region_samples(r, depth, per_level).iter().map(|z| f.eval_at(z)).collect();
    (1..=depth).map(|d| coverage(&values[..d * per_level], window, grid_n)).collect()
}

/// Coverage of `f(r_m zeta)` with `r_m = 1 - 2^{-m}`, `m = 1..=r_levels`.
pub fn radial_density<F: Evaluable + ?Sized>(
    f: &F,
    zeta: &ComplexValue,
    window: Window,
    grid_n: usize,
    r_levels: usize,
) -> Result<CoverageScore> {
    let values: Vec<ComplexValue> = radial_points(zeta, r_levels).iter().map(|z| f.eval_at(z)).collect();
    coverage(&values, window, grid_n)
}

fn radial_points(zeta: &ComplexValue, r_levels: usize) -> Vec<ComplexValue> {
    let p = zeta.prec();
    (1..=r_levels)
        .map(|m| {
            let r = Real::with_val(p, 1u32) - (Real::with_val(p, 1u32) >> m as i32);
            zeta.scale(&r)
        })
        .collect()
}

/// `sup |f|` over the samples of an approach region, against a level `a`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundednessReport {
    pub level: f64,
    pub max_abs: f64,
    pub samples: usize,
    pub bounded: bool,
}

pub fn boundedness_report<F: Evaluable + ?Sized>(
    f: &F,
    r: &ApproachRegion,
    depth: usize,
    per_level: usize,
    level: f64,
) -> BoundednessReport {
    let pts = region_samples(r, depth, per_level);
    let max_abs = pts
        .iter()
        .map(|z| {
            let v = f.eval_at(z).abs().to_f64();
            if v.is_nan() {
                f64::INFINITY
            } else {
                v
            }
        })
        .fold(0.0, f64::max);
    BoundednessReport { level, max_abs, samples: pts.len(), bounded: max_abs <= level }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Precision;

    fn p() -> Precision {
        Precision::default()
    }

    fn region(theta: f64) -> ApproachRegion {
        ApproachRegion::new(ComplexValue::unit(&p().real(theta)), p().real(2.0), p().real(0.5)).unwrap()
    }

    #[test]
    fn constant_hits_one_cell() {
        let c = |_: &ComplexValue| ComplexValue::from_f64(p(), 0.3, -0.2);
        let s = plessner_probe(&c, &region(0.4), Window::centered(2.0), 32, 6, 16).unwrap();
        assert_eq!(s.hit_cells(), 1);
        assert_eq!(s.hit_fraction, 1.0 / 1024.0);
        assert_eq!(s.samples_used, 96);
        let z = radial_density(
            &|_: &ComplexValue| ComplexValue::zero(p()),
            &ComplexValue::one(p()),
            Window::centered(1.0),
            16,
            10,
        )
        .unwrap();
        assert_eq!(z.hit_cells(), 1);
    }

    #[test]
    fn cells_follow_the_grid() {
        let w = Window { re: [0.0, 4.0], im: [0.0, 2.0] };
        let vals: Vec<ComplexValue> = [(0.5, 0.5), (0.6, 0.4), (3.9, 1.9), (4.0, 2.0), (5.0, 0.0), (f64::NAN, 0.0)]
            .iter()
            .map(|&(x, y)| ComplexValue::from_f64(p(), x, y))
            .collect();
        let s = coverage(&vals, w, 4).unwrap();
        assert_eq!(s.hits, vec![0, 4, 15]);
        assert_eq!(s.samples_used, 6);
        assert!(coverage(&vals, Window { re: [1.0, 1.0], im: [0.0, 1.0] }, 4).is_err());
    }

    #[test]
    fn identity_along_a_radius_stays_on_a_segment() {
        let id = |z: &ComplexValue| z.clone();
        let n = 32;
        let s = radial_density(&id, &ComplexValue::unit(&p().real(0.7)), Window::centered(1.5), n, 40).unwrap();
        assert!(s.hit_cells() <= 2 * n);
    }

    #[test]
    fn moebius_image_is_thin() {
        // Oracle: 1/(1-z) maps each radial segment of the region onto an arc,
        // so the image touches O(grid_n) cells rather than O(grid_n^2).
        let f = |z: &ComplexValue| (&ComplexValue::one(p()) - z).recip();
        let n = 32;
        let s = plessner_probe(&f, &region(0.0), Window::centered(20.0), n, 8, 32).unwrap();
        assert!(s.hit_cells() <= 8 * n, "{}", s.hit_cells());
    }

    #[test]
    fn curve_is_monotone() {
        let f = |z: &ComplexValue| (&ComplexValue::one(p()) - z).recip();
        let c = plessner_curve(&f, &region(0.0), Window::centered(20.0), 32, 8, 32).unwrap();
        assert!(c.windows(2).all(|w| w[0].hit_fraction <= w[1].hit_fraction));
        assert_eq!(c[7], plessner_probe(&f, &region(0.0), Window::centered(20.0), 32, 8, 32).unwrap());
    }

    #[test]
    fn bounded_function_is_confined() {
        let f = |z: &ComplexValue| (z * z).scale(&p().real(0.9));
        let s = radial_density(&f, &ComplexValue::unit(&p().real(1.3)), Window::centered(2.0), 64, 30).unwrap();
        assert_eq!(s.hits_outside_disc(Complex64::new(0.0, 0.0), 0.9), 0);
        let b = boundedness_report(&f, &region(1.3), 10, 16, 0.9);
        assert!(b.bounded && b.max_abs <= 0.9);
    }
}
