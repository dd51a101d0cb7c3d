//! Image loading, Gaussian smoothing and Sobel gradients.
//!
//! Images are stored as row-major `f64` intensities in `[0, 1]`. The
//! coordinate frame is the usual raster one: `x` grows to the right, `y`
//! grows downward.

use std::path::Path;

use image::{DynamicImage, ImageReader};

use crate::error::{Error, Result};

/// Grayscale raster with intensities in `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl GrayImage {
    /// Builds an image from row-major data. Fails if the buffer length does not
    /// match the dimensions or an intensity falls outside `[0, 1]`.
    pub fn from_vec(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Dimension {
                width,
                height,
                min: 1,
            });
        }
        if data.len() != width * height {
            return Err(Error::Contract(format!(
                "buffer has {} values, expected {}",
                data.len(),
                width * height
            )));
        }
        if let Some(v) = data.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::Domain(format!("intensity {v} outside [0, 1]")));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    /// An image filled with `value` (clamped to `[0, 1]`).
    pub fn filled(width: usize, height: usize, value: f64) -> Self {
        Self {
            width,
            height,
            data: vec![value.clamp(0.0, 1.0); width * height],
        }
    }

    /// Builds an image by evaluating `f(x, y)` at every pixel. Values are clamped
    /// to `[0, 1]`.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y).clamp(0.0, 1.0));
            }
        }
        Self {
            width,
            height,
            data,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    /// Converts to an 8-bit luma buffer (used for overlays).
    pub fn to_luma8(&self) -> image::GrayImage {
        image::GrayImage::from_fn(self.width as u32, self.height as u32, |x, y| {
            let v = self.get(x as usize, y as usize);
            image::Luma([(v * 255.0).round() as u8])
        })
    }
}

/// Horizontal and vertical Sobel responses.
#[derive(Clone, Debug, PartialEq)]
pub struct RawGradients {
    pub width: usize,
    pub height: usize,
    pub gx: Vec<f64>,
    pub gy: Vec<f64>,
}

impl RawGradients {
    #[inline]
    pub fn at(&self, x: usize, y: usize) -> (f64, f64) {
        let i = y * self.width + x;
        (self.gx[i], self.gy[i])
    }
}

/// Loads an 8-bit PNG, PGM or PPM file as a grayscale image.
///
/// Color pixels are reduced with the luma weights `0.299 R + 0.587 G + 0.114 B`.
pub fn load_grayscale(path: impl AsRef<Path>) -> Result<GrayImage> {
    let path = path.as_ref();
    let reader = ImageReader::open(path)
        .map_err(|e| Error::io(path, e))?
        .with_guessed_format()
        .map_err(|e| Error::io(path, e))?;
    let decoded = reader.decode().map_err(|e| match e {
        image::ImageError::IoError(io) => Error::io(path, io),
        other => Error::Format(format!("{}: {other}", path.display())),
    })?;
    from_dynamic(&decoded)
}

/// Converts a decoded 8-bit image to [`GrayImage`].
pub fn from_dynamic(img: &DynamicImage) -> Result<GrayImage> {
    let (w, h) = (img.width() as usize, img.height() as usize);
    let data: Vec<f64> = match img {
        DynamicImage::ImageLuma8(buf) => buf.pixels().map(|p| p.0[0] as f64 / 255.0).collect(),
        DynamicImage::ImageLumaA8(buf) => buf.pixels().map(|p| p.0[0] as f64 / 255.0).collect(),
        DynamicImage::ImageRgb8(buf) => {
            buf.pixels().map(|p| luma(p.0[0], p.0[1], p.0[2])).collect()
        }
        DynamicImage::ImageRgba8(buf) => {
            buf.pixels().map(|p| luma(p.0[0], p.0[1], p.0[2])).collect()
        }
        other => {
            return Err(Error::Format(format!(
                "only 8-bit images are supported, got {:?}",
                other.color()
            )))
        }
    };
    GrayImage::from_vec(w, h, data)
}

fn luma(r: u8, g: u8, b: u8) -> f64 {
    let v = (0.299 * r as f64 + 0.587 * g as f64 + 0.114 * b as f64) / 255.0;
    v.clamp(0.0, 1.0)
}

const GAUSS_RADIUS: usize = 2;

/// Normalized 5-tap Gaussian with unit standard deviation, sampled at the
/// integer offsets `-2..=2`.
pub fn gaussian_kernel() -> [f64; 2 * GAUSS_RADIUS + 1] {
    let mut k = [0.0; 2 * GAUSS_RADIUS + 1];
    for (i, w) in k.iter_mut().enumerate() {
        let d = i as f64 - GAUSS_RADIUS as f64;
        *w = (-0.5 * d * d).exp();
    }
    let sum: f64 = k.iter().sum();
    k.iter_mut().for_each(|w| *w /= sum);
    k
}

/// Separable 5x5 Gaussian smoothing (sigma = 1) with edge replication.
pub fn gaussian_smooth(img: &GrayImage) -> Result<GrayImage> {
    let (w, h) = (img.width, img.height);
    let n = 2 * GAUSS_RADIUS + 1;
    if w < n || h < n {
        return Err(Error::Dimension {
            width: w,
            height: h,
            min: n,
        });
    }
    let k = gaussian_kernel();
    let r = GAUSS_RADIUS as isize;
    let clamp = |v: isize, hi: usize| v.clamp(0, hi as isize - 1) as usize;

    let mut tmp = vec![0.0; w * h];
    for y in 0..h {
        let row = &img.data[y * w..(y + 1) * w];
        for x in 0..w {
            let mut acc = 0.0;
            for (j, kw) in k.iter().enumerate() {
                acc += kw * row[clamp(x as isize + j as isize - r, w)];
            }
            tmp[y * w + x] = acc;
        }
    }

    let mut out = vec![0.0; w * h];
    for y in 0..h {
        for x in 0..w {
            let mut acc = 0.0;
            for (j, kw) in k.iter().enumerate() {
                acc += kw * tmp[clamp(y as isize + j as isize - r, h) * w + x];
            }
            out[y * w + x] = acc.clamp(0.0, 1.0);
        }
    }
    Ok(GrayImage {
        width: w,
        height: h,
        data: out,
    })
}

/// 3x3 Sobel gradients. `gx` is positive when intensity increases to the
/// right, `gy` when it increases downward. The one-pixel border is zero.
pub fn sobel(img: &GrayImage) -> Result<RawGradients> {
    let (w, h) = (img.width, img.height);
    if w < 3 || h < 3 {
        return Err(Error::Dimension {
            width: w,
            height: h,
            min: 3,
        });
    }
    let mut gx = vec![0.0; w * h];
    let mut gy = vec![0.0; w * h];
    let d = &img.data;
    for y in 1..h - 1 {
        let up = (y - 1) * w;
        let mid = y * w;
        let down = (y + 1) * w;
        for x in 1..w - 1 {
            let (l, r) = (x - 1, x + 1);
            let sx = (d[up + r] + 2.0 * d[mid + r] + d[down + r])
                - (d[up + l] + 2.0 * d[mid + l] + d[down + l]);
            let sy = (d[down + l] + 2.0 * d[down + x] + d[down + r])
                - (d[up + l] + 2.0 * d[up + x] + d[up + r]);
            gx[mid + x] = sx;
            gy[mid + x] = sy;
        }
    }
    Ok(RawGradients {
        width: w,
        height: h,
        gx,
        gy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::io::Write;

    fn write_tmp(bytes: &[u8], ext: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::Builder::new().suffix(ext).tempfile().unwrap();
        f.write_all(bytes).unwrap();
        f.flush().unwrap();
        f
    }

    #[test]
    fn pgm_full_scale_pixel() {
        let f = write_tmp(b"P5\n1 1\n255\n\xff", ".pgm");
        let img = load_grayscale(f.path()).unwrap();
        assert_eq!((img.width(), img.height()), (1, 1));
        assert_eq!(img.data(), &[1.0]);
    }

    #[test]
    fn ppm_red_uses_luma_weights() {
        let f = write_tmp(b"P6\n1 1\n255\n\xff\x00\x00", ".ppm");
        let img = load_grayscale(f.path()).unwrap();
        assert!((img.get(0, 0) - 0.299).abs() < 1e-12);
    }

    #[test]
    fn pgm_values_divided_by_255() {
        let f = write_tmp(
            &[b"P5\n2 2\n255\n".as_slice(), &[0, 51, 102, 204]].concat(),
            ".pgm",
        );
        let img = load_grayscale(f.path()).unwrap();
        let expected = [0.0, 0.2, 0.4, 0.8];
        for (a, b) in img.data().iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn png_roundtrip_gray() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.png");
        image::GrayImage::from_raw(3, 1, vec![0, 128, 255])
            .unwrap()
            .save(&p)
            .unwrap();
        let img = load_grayscale(&p).unwrap();
        assert_eq!(img.width(), 3);
        assert!((img.get(1, 0) - 128.0 / 255.0).abs() < 1e-12);
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = load_grayscale("/definitely/not/here.pgm").unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
    }

    #[test]
    fn sixteen_bit_is_format_error() {
        // maxval 65535 decodes to a 16-bit luma buffer
        let f = write_tmp(b"P5\n1 1\n65535\n\xff\xff", ".pgm");
        let err = load_grayscale(f.path()).unwrap_err();
        assert!(matches!(err, Error::Format(_)), "{err:?}");
    }

    #[test]
    fn garbage_is_format_error() {
        let f = write_tmp(b"not an image at all", ".png");
        assert!(matches!(load_grayscale(f.path()), Err(Error::Format(_))));
    }

    #[test]
    fn smoothing_preserves_constant() {
        let img = GrayImage::filled(9, 7, 0.5);
        let s = gaussian_smooth(&img).unwrap();
        assert!(s.data().iter().all(|v| (v - 0.5).abs() < 1e-12));
    }

    #[test]
    fn impulse_response_center_is_kernel_center() {
        // Oracle: the 2D kernel sampled directly as exp(-(x^2+y^2)/2), normalized.
        let mut sum = 0.0;
        for dy in -2i32..=2 {
            for dx in -2i32..=2 {
                sum += (-0.5 * (dx * dx + dy * dy) as f64).exp();
            }
        }
        let center = 1.0 / sum;
        let img = GrayImage::from_fn(9, 9, |x, y| if x == 4 && y == 4 { 1.0 } else { 0.0 });
        let s = gaussian_smooth(&img).unwrap();
        assert!((s.get(4, 4) - center).abs() < 1e-12);
        assert!((center - 0.162_102_4).abs() < 1e-6);
    }

    #[test]
    fn smoothing_keeps_interior_ramp() {
        let img = GrayImage::from_fn(9, 5, |x, _| x as f64 / 10.0);
        let s = gaussian_smooth(&img).unwrap();
        for y in 0..5 {
            for x in 2..7 {
                assert!((s.get(x, y) - x as f64 / 10.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn smoothing_rejects_small_images() {
        let img = GrayImage::filled(4, 10, 0.0);
        assert!(matches!(
            gaussian_smooth(&img),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn sobel_vertical_step() {
        // Hand convolution: both columns adjacent to the step see 4 * height.
        let img = GrayImage::from_fn(8, 6, |x, _| if x >= 4 { 1.0 } else { 0.0 });
        let g = sobel(&img).unwrap();
        for y in 1..5 {
            assert_eq!(g.at(3, y), (4.0, 0.0));
            assert_eq!(g.at(4, y), (4.0, 0.0));
            assert_eq!(g.at(1, y), (0.0, 0.0));
            assert_eq!(g.at(6, y), (0.0, 0.0));
        }
    }

    #[test]
    fn sobel_constant_is_zero() {
        let g = sobel(&GrayImage::filled(5, 5, 0.3)).unwrap();
        assert!(g.gx.iter().chain(&g.gy).all(|v| *v == 0.0));
    }

    #[test]
    fn sobel_border_is_zero() {
        let img = GrayImage::from_fn(6, 5, |x, y| ((x * 7 + y * 3) % 5) as f64 / 5.0);
        let g = sobel(&img).unwrap();
        for y in 0..5 {
            for x in 0..6 {
                if x == 0 || y == 0 || x == 5 || y == 4 {
                    assert_eq!(g.at(x, y), (0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn sobel_rejects_tiny_image() {
        assert!(sobel(&GrayImage::filled(2, 5, 0.0)).is_err());
    }

    fn transpose(img: &GrayImage) -> GrayImage {
        GrayImage::from_fn(img.height(), img.width(), |x, y| img.get(y, x))
    }

    #[test]
    fn sobel_transpose_swaps_axes() {
        let img = GrayImage::from_fn(7, 5, |x, y| ((x * x + 3 * y) % 11) as f64 / 11.0);
        let g = sobel(&img).unwrap();
        let gt = sobel(&transpose(&img)).unwrap();
        for y in 0..5 {
            for x in 0..7 {
                let (gx, gy) = g.at(x, y);
                let (tx, ty) = gt.at(y, x);
                assert!((gx - ty).abs() < 1e-12 && (gy - tx).abs() < 1e-12);
            }
        }
    }

    proptest! {
        #[test]
        fn gradients_rotate_with_image(
            w in 3usize..12,
            h in 3usize..12,
            seed in proptest::collection::vec(0.0f64..=1.0, 144),
        ) {
            let img = GrayImage::from_fn(w, h, |x, y| seed[(y * 12 + x) % 144]);
            // Rotation mapping old (x, y) to new (y, w - 1 - x).
            let rot = GrayImage::from_fn(h, w, |xn, yn| img.get(w - 1 - yn, xn));
            let g = sobel(&img).unwrap();
            let gr = sobel(&rot).unwrap();
            for yn in 1..w - 1 {
                for xn in 1..h - 1 {
                    let (ox, oy) = (w - 1 - yn, xn);
                    let (gx, gy) = g.at(ox, oy);
                    let (rx, ry) = gr.at(xn, yn);
                    prop_assert!((rx - gy).abs() < 1e-9);
                    prop_assert!((ry + gx).abs() < 1e-9);
                }
            }
        }

        #[test]
        fn smoothing_stays_in_unit_range(
            seed in proptest::collection::vec(0.0f64..=1.0, 64),
        ) {
            let img = GrayImage::from_fn(8, 8, |x, y| seed[y * 8 + x]);
            let s = gaussian_smooth(&img).unwrap();
            prop_assert!(s.data().iter().all(|v| (0.0..=1.0).contains(v)));
        }
    }
}
