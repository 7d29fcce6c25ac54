//! Basin-of-attraction rendering, boundary extraction and PPM output.

mod boundary;
mod ppm;

use num_complex::Complex;
use rayon::prelude::*;

use crate::algebra::{RationalMap, ToleranceConfig};
use crate::dynamics::{critical_orbit_attractors, CycleInfo};
use crate::error::{Error, Result};
use crate::scalar::{Point, Real};

pub use boundary::{extract_boundary, BoundaryMask};
pub use ppm::{basin_ppm_bytes, mask_ppm_bytes, parse_ppm, read_ppm, write_ppm, Palette, PpmImage};

/// Environment variable capping the number of render workers.
pub const THREADS_ENV: &str = "JULIA_SYM_THREADS";

/// Square pixel grid. Pixel `(row, col)` covers the cell whose center is
/// `left + (col + ½) h + i (top - (row + ½) h)`, with `h = width / pixels`
/// and row 0 at the top.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec<T> {
    pub center: Complex<T>,
    pub width: T,
    pub pixels: usize,
}

impl<T: Real> GridSpec<T> {
    pub fn new(center: Complex<T>, width: T, pixels: usize) -> Result<Self> {
        if pixels < 16 {
            return Err(Error::InvalidParameters("render", format!("pixels = {pixels} < 16")));
        }
        if !(width > T::zero()) || !width.is_finite() {
            return Err(Error::InvalidParameters("render", format!("width = {width} must be positive")));
        }
        Ok(Self { center, width, pixels })
    }

    /// Pixel spacing `h`.
    pub fn spacing(&self) -> T {
        self.width / T::from_usize_lossy(self.pixels)
    }

    fn left(&self) -> T {
        self.center.re - self.width / T::lit(2.0)
    }

    fn top(&self) -> T {
        self.center.im + self.width / T::lit(2.0)
    }

    pub fn pixel_center(&self, row: usize, col: usize) -> Complex<T> {
        let h = self.spacing();
        let half = T::lit(0.5);
        Complex::new(
            self.left() + (T::from_usize_lossy(col) + half) * h,
            self.top() - (T::from_usize_lossy(row) + half) * h,
        )
    }

    /// Fractional `(row, col)` of a plane point; integer values are pixel centers.
    pub fn locate(&self, z: Complex<T>) -> (T, T) {
        let h = self.spacing();
        let half = T::lit(0.5);
        ((self.top() - z.im) / h - half, (z.re - self.left()) / h - half)
    }

    /// Nearest pixel, if the point lies inside the grid.
    pub fn nearest_pixel(&self, z: Complex<T>) -> Option<(usize, usize)> {
        let (r, c) = self.locate(z);
        let (r, c) = (r.round(), c.round());
        let n = T::from_usize_lossy(self.pixels);
        if r < T::zero() || c < T::zero() || r >= n || c >= n {
            return None;
        }
        Some((r.to_usize()?, c.to_usize()?))
    }

    pub fn len(&self) -> usize {
        self.pixels * self.pixels
    }

    pub fn is_empty(&self) -> bool {
        self.pixels == 0
    }
}

/// Per-pixel outcome.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    /// Index into [`BasinImage::attractors`].
    Attractor(u16),
    /// Captured by `∞` as an attracting fixed point.
    Infinity,
    Undecided,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RenderParams<T> {
    pub max_iter: u32,
    /// Chordal capture radius.
    pub eps: T,
    /// Worker threads; `None` reads `JULIA_SYM_THREADS`, then falls back to all cores.
    pub workers: Option<usize>,
}

impl<T: Real> Default for RenderParams<T> {
    fn default() -> Self {
        Self {
            max_iter: 1000,
            eps: T::lit(1e-6).max(T::epsilon() * T::lit(1e3)),
            workers: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BasinImage<T> {
    pub grid: GridSpec<T>,
    pub labels: Vec<Label>,
    pub iterations: Vec<u32>,
    pub attractors: Vec<CycleInfo<T>>,
}

impl<T: Real> BasinImage<T> {
    pub fn label(&self, row: usize, col: usize) -> Label {
        self.labels[row * self.grid.pixels + col]
    }

    pub fn undecided_fraction(&self) -> f64 {
        let n = self.labels.iter().filter(|l| **l == Label::Undecided).count();
        n as f64 / self.labels.len() as f64
    }
}

/// Worker count from the explicit setting, the environment, or the machine.
pub fn resolve_workers(explicit: Option<usize>) -> usize {
    explicit
        .or_else(|| std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse().ok()))
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Renders with the attracting cycles found from critical orbits.
pub fn render_basins<T: Real>(
    r: &RationalMap<T>,
    grid: GridSpec<T>,
    params: &RenderParams<T>,
    tol: &ToleranceConfig<T>,
) -> Result<BasinImage<T>> {
    let attractors = critical_orbit_attractors(r, tol)?.attractors;
    Ok(render_with_attractors(r, grid, params, attractors))
}

/// Renders against a given attractor inventory. Output is identical for any
/// worker count since each pixel is computed independently.
pub fn render_with_attractors<T: Real>(
    r: &RationalMap<T>,
    grid: GridSpec<T>,
    params: &RenderParams<T>,
    attractors: Vec<CycleInfo<T>>,
) -> BasinImage<T> {
    let n = grid.pixels;
    let mut labels = vec![Label::Undecided; n * n];
    let mut iterations = vec![0u32; n * n];
    let ids: Vec<Label> = attractors
        .iter()
        .enumerate()
        .map(|(i, c)| if c.is_infinity_fixed() { Label::Infinity } else { Label::Attractor(i as u16) })
        .collect();
    let work = |(row, (lrow, irow)): (usize, (&mut [Label], &mut [u32]))| {
        for col in 0..n {
            let (label, it) = classify_pixel(r, Point::Finite(grid.pixel_center(row, col)), params, &attractors, &ids);
            lrow[col] = label;
            irow[col] = it;
        }
    };
    let workers = resolve_workers(params.workers);
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(|| {
            labels
                .par_chunks_mut(n)
                .zip(iterations.par_chunks_mut(n))
                .enumerate()
                .for_each(work)
        }),
        Err(_) => labels
            .chunks_mut(n)
            .zip(iterations.chunks_mut(n))
            .enumerate()
            .for_each(work),
    }
    BasinImage {
        grid,
        labels,
        iterations,
        attractors,
    }
}

const VALIDATION_STEPS: usize = 20;

fn classify_pixel<T: Real>(
    r: &RationalMap<T>,
    start: Point<T>,
    params: &RenderParams<T>,
    attractors: &[CycleInfo<T>],
    ids: &[Label],
) -> (Label, u32) {
    let mut z = start;
    for it in 0..=params.max_iter {
        if let Some(i) = attractors.iter().position(|c| c.contains(&z, params.eps)) {
            // capture must persist inside a 10·eps ball around the same cycle
            let wide = params.eps * T::lit(10.0);
            let mut w = z;
            let held = (0..VALIDATION_STEPS).all(|_| {
                w = r.eval_point(w);
                attractors[i].contains(&w, wide)
            });
            if held {
                return (ids[i], it);
            }
        }
        if it < params.max_iter {
            z = r.eval_point(z);
        }
    }
    (Label::Undecided, params.max_iter)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_rational;

    fn tol() -> ToleranceConfig<f64> {
        ToleranceConfig::default()
    }

    fn map(s: &str) -> RationalMap<f64> {
        parse_rational(s, &tol()).unwrap()
    }

    #[test]
    fn grid_mapping() {
        let g = GridSpec::new(Complex::new(0.0, 0.0), 4.0, 16).unwrap();
        assert_eq!(g.spacing(), 0.25);
        assert_eq!(g.pixel_center(0, 0), Complex::new(-1.875, 1.875));
        assert_eq!(g.pixel_center(15, 15), Complex::new(1.875, -1.875));
        assert_eq!(g.nearest_pixel(Complex::new(-1.875, 1.875)), Some((0, 0)));
        assert_eq!(g.locate(Complex::new(1.875, -1.875)), (15.0, 15.0));
        assert_eq!(g.nearest_pixel(Complex::new(2.1, 0.0)), None);
        assert!(GridSpec::new(Complex::new(0.0, 0.0), 4.0, 8).is_err());
        assert!(GridSpec::new(Complex::new(0.0, 0.0), -1.0, 32).is_err());
    }

    #[test]
    fn squaring_map_basins() {
        let grid = GridSpec::new(Complex::new(0.0, 0.0), 4.0, 64).unwrap();
        let img = render_basins(&map("z^2"), grid, &RenderParams::default(), &tol()).unwrap();
        for row in 0..64 {
            for col in 0..64 {
                let z = grid.pixel_center(row, col);
                let label = img.label(row, col);
                if z.norm() < 0.95 {
                    assert!(matches!(label, Label::Attractor(_)), "{z}");
                } else if z.norm() > 1.05 {
                    assert_eq!(label, Label::Infinity, "{z}");
                }
            }
        }
    }

    #[test]
    fn newton_half_planes() {
        let grid = GridSpec::new(Complex::new(0.0, 0.0), 4.0, 32).unwrap();
        let img = render_basins(&map("(z^2-1)/(2z)"), grid, &RenderParams::default(), &tol()).unwrap();
        let top = img.label(0, 5);
        let bottom = img.label(31, 5);
        assert_ne!(top, bottom);
        for row in 0..32 {
            for col in 0..32 {
                let expect = if row < 16 { top } else { bottom };
                assert_eq!(img.label(row, col), expect);
            }
        }
    }

    #[test]
    fn worker_count_does_not_change_output() {
        let grid = GridSpec::new(Complex::new(0.1, 0.0), 3.0, 48).unwrap();
        let r = map("z^2 - 1");
        let a = render_basins(&r, grid, &RenderParams { workers: Some(1), ..Default::default() }, &tol()).unwrap();
        let b = render_basins(&r, grid, &RenderParams { workers: Some(3), ..Default::default() }, &tol()).unwrap();
        assert_eq!(a, b);
    }
}
