use std::path::Path;

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::{BasinImage, BoundaryMask, Label};

/// Colors per attractor id, for infinity, and for undecided pixels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Palette {
    pub attractors: Vec<[u8; 3]>,
    pub infinity: [u8; 3],
    pub undecided: [u8; 3],
}

impl Default for Palette {
    fn default() -> Self {
        Self {
            attractors: vec![
                [230, 57, 70],
                [69, 123, 157],
                [244, 162, 97],
                [42, 157, 143],
                [131, 56, 236],
                [255, 190, 11],
                [58, 134, 255],
                [251, 86, 7],
            ],
            infinity: [200, 210, 225],
            undecided: [0, 0, 0],
        }
    }
}

const RAMP: u32 = 60;

impl Palette {
    /// Hue by label, darkened linearly with the capture iteration up to 60 steps.
    pub fn color(&self, label: Label, iterations: u32) -> [u8; 3] {
        let base = match label {
            Label::Undecided => return self.undecided,
            Label::Infinity => self.infinity,
            Label::Attractor(i) => self.attractors[i as usize % self.attractors.len()],
        };
        let shade = 4 * RAMP - 3 * iterations.min(RAMP);
        base.map(|c| (c as u32 * shade / (4 * RAMP)) as u8)
    }
}

fn header(width: usize, height: usize) -> Vec<u8> {
    format!("P6\n{width} {height}\n255\n").into_bytes()
}

pub fn basin_ppm_bytes<T: Real>(img: &BasinImage<T>, palette: &Palette) -> Vec<u8> {
    let n = img.grid.pixels;
    let mut out = header(n, n);
    for (label, it) in img.labels.iter().zip(&img.iterations) {
        out.extend_from_slice(&palette.color(*label, *it));
    }
    out
}

/// Black marked pixels on white.
pub fn mask_ppm_bytes<T: Real>(mask: &BoundaryMask<T>) -> Vec<u8> {
    let n = mask.grid.pixels;
    let mut out = header(n, n);
    for &m in &mask.marked {
        out.extend_from_slice(if m { &[0, 0, 0] } else { &[255, 255, 255] });
    }
    out
}

pub fn write_ppm(path: impl AsRef<Path>, bytes: &[u8]) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, bytes).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PpmImage {
    pub width: usize,
    pub height: usize,
    pub rgb: Vec<u8>,
}

impl PpmImage {
    pub fn pixel(&self, row: usize, col: usize) -> [u8; 3] {
        let k = 3 * (row * self.width + col);
        [self.rgb[k], self.rgb[k + 1], self.rgb[k + 2]]
    }
}

pub fn read_ppm(path: impl AsRef<Path>) -> Result<PpmImage> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_ppm(&bytes)
}

/// Binary P6 with maxval 255; `#` comments in the header are skipped.
pub fn parse_ppm(bytes: &[u8]) -> Result<PpmImage> {
    let mut pos = 0;
    let mut fields = Vec::new();
    while fields.len() < 4 {
        while pos < bytes.len() && (bytes[pos].is_ascii_whitespace() || bytes[pos] == b'#') {
            if bytes[pos] == b'#' {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
            } else {
                pos += 1;
            }
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err(Error::MalformedImage("truncated header".into()));
        }
        fields.push(String::from_utf8_lossy(&bytes[start..pos]).into_owned());
    }
    // exactly one whitespace byte separates the header from the raster
    pos += 1;
    if fields[0] != "P6" {
        return Err(Error::MalformedImage(format!("magic `{}` is not P6", fields[0])));
    }
    let parse = |s: &str| s.parse::<usize>().map_err(|_| Error::MalformedImage(format!("bad header field `{s}`")));
    let (width, height, maxval) = (parse(&fields[1])?, parse(&fields[2])?, parse(&fields[3])?);
    if maxval != 255 {
        return Err(Error::MalformedImage(format!("maxval {maxval} unsupported")));
    }
    let need = width * height * 3;
    if bytes.len() < pos + need {
        return Err(Error::MalformedImage(format!("raster has {} bytes, expected {need}", bytes.len().saturating_sub(pos))));
    }
    Ok(PpmImage {
        width,
        height,
        rgb: bytes[pos..pos + need].to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use num_complex::Complex;

    use super::*;
    use crate::render::GridSpec;

    fn image() -> BasinImage<f64> {
        let grid = GridSpec::new(Complex::new(0.0, 0.0), 2.0, 16).unwrap();
        let labels = (0..256)
            .map(|k| match k % 3 {
                0 => Label::Attractor((k % 5) as u16),
                1 => Label::Infinity,
                _ => Label::Undecided,
            })
            .collect();
        let iterations = (0..256).map(|k| k as u32).collect();
        BasinImage { grid, labels, iterations, attractors: Vec::new() }
    }

    #[test]
    fn round_trip() {
        let img = image();
        let bytes = basin_ppm_bytes(&img, &Palette::default());
        let dir = std::env::temp_dir().join(format!("julia-sym-ppm-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("basins.ppm");
        write_ppm(&path, &bytes).unwrap();
        let back = read_ppm(&path).unwrap();
        assert_eq!((back.width, back.height), (16, 16));
        for row in 0..16 {
            for col in 0..16 {
                let k = row * 16 + col;
                assert_eq!(back.pixel(row, col), Palette::default().color(img.labels[k], img.iterations[k]));
            }
        }
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn undecided_is_black_and_output_is_stable() {
        let img = image();
        let p = Palette::default();
        assert_eq!(p.color(Label::Undecided, 3), [0, 0, 0]);
        assert_eq!(basin_ppm_bytes(&img, &p), basin_ppm_bytes(&img, &p));
        assert!(basin_ppm_bytes(&img, &p).starts_with(b"P6\n16 16\n255\n"));
    }

    #[test]
    fn io_errors_carry_the_path() {
        let err = read_ppm("/nonexistent/dir/x.ppm").unwrap_err();
        assert!(err.to_string().contains("/nonexistent/dir/x.ppm"));
        assert!(parse_ppm(b"P3\n1 1\n255\n\0\0\0").is_err());
        assert!(parse_ppm(b"P6\n2 2\n255\n\0").is_err());
    }
}
