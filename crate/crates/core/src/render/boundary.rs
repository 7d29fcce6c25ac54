use num_complex::Complex;

use crate::scalar::Real;

use super::{BasinImage, GridSpec, Label};

/// Empirical Julia set: undecided pixels and pixels with a differently
/// labeled 4-neighbor.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryMask<T> {
    pub grid: GridSpec<T>,
    pub marked: Vec<bool>,
}

impl<T: Real> BoundaryMask<T> {
    pub fn is_marked(&self, row: usize, col: usize) -> bool {
        self.marked[row * self.grid.pixels + col]
    }

    pub fn count(&self) -> usize {
        self.marked.iter().filter(|m| **m).count()
    }

    /// `(row, col)` of every marked pixel, row-major.
    pub fn marked_pixels(&self) -> Vec<(usize, usize)> {
        let n = self.grid.pixels;
        (0..n * n).filter(|&k| self.marked[k]).map(|k| (k / n, k % n)).collect()
    }

    pub fn marked_points(&self) -> Vec<Complex<T>> {
        self.marked_pixels()
            .into_iter()
            .map(|(r, c)| self.grid.pixel_center(r, c))
            .collect()
    }
}

pub fn extract_boundary<T: Real>(img: &BasinImage<T>) -> BoundaryMask<T> {
    let n = img.grid.pixels;
    let mut marked = vec![false; n * n];
    for row in 0..n {
        for col in 0..n {
            let here = img.label(row, col);
            let differs = |r: usize, c: usize| img.label(r, c) != here;
            marked[row * n + col] = here == Label::Undecided
                || (row > 0 && differs(row - 1, col))
                || (row + 1 < n && differs(row + 1, col))
                || (col > 0 && differs(row, col - 1))
                || (col + 1 < n && differs(row, col + 1));
        }
    }
    BoundaryMask { grid: img.grid, marked }
}
