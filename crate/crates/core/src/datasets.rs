//! Loaders for homography benchmark sequences.
//!
//! Two layouts are recognized. Oxford style: `img1.ppm`, `img2.ppm`, ... with
//! `H1to2p`, ... HPatches style: `1.ppm`, `2.ppm`, ... with `H_1_2`, ...
//! Homography files hold nine numbers, row-major, mapping the reference image
//! onto the test image.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::evaluation::Homography;

const IMAGE_EXTENSIONS: [&str; 4] = ["ppm", "pgm", "pnm", "png"];

#[derive(Clone, Debug)]
pub struct Sequence {
    pub name: String,
    pub ref_image: PathBuf,
    /// Test images with the homography mapping the reference onto them.
    pub tests: Vec<(PathBuf, Homography)>,
    /// Content of `transform.txt`, or `unknown`.
    pub transformation: String,
}

pub fn parse_homography(text: &str) -> Result<Homography> {
    let values = text
        .split_whitespace()
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| Error::Parse(format!("not a number: {t:?}")))
        })
        .collect::<Result<Vec<f64>>>()?;
    if values.len() != 9 {
        return Err(Error::Parse(format!(
            "expected 9 numbers, found {}",
            values.len()
        )));
    }
    Homography::new(std::array::from_fn(|r| {
        std::array::from_fn(|c| values[3 * r + c])
    }))
}

pub fn parse_homography_file(path: impl AsRef<Path>) -> Result<Homography> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_homography(&text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

/// Three lines of three numbers, each printed with the shortest
/// representation that parses back to the same value.
pub fn write_homography(h: &Homography) -> String {
    h.rows()
        .iter()
        .map(|r| format!("{} {} {}\n", r[0], r[1], r[2]))
        .collect()
}

#[derive(Clone, Copy, PartialEq)]
enum Naming {
    Oxford,
    HPatches,
}

impl Naming {
    fn homography_name(self, n: u32) -> String {
        match self {
            Naming::Oxford => format!("H1to{n}p"),
            Naming::HPatches => format!("H_1_{n}"),
        }
    }
}

/// Recognizes `imgN.ext` and `N.ext` image files.
fn image_index(path: &Path) -> Option<(Naming, u32)> {
    let ext = path.extension()?.to_str()?.to_ascii_lowercase();
    if !IMAGE_EXTENSIONS.contains(&ext.as_str()) {
        return None;
    }
    let stem = path.file_stem()?.to_str()?;
    match stem.strip_prefix("img") {
        Some(n) => n.parse().ok().map(|n| (Naming::Oxford, n)),
        None => stem.parse().ok().map(|n| (Naming::HPatches, n)),
    }
}

fn check_decodable(path: &Path) -> Result<()> {
    image::image_dimensions(path)
        .map(|_| ())
        .map_err(|e| Error::Load(format!("cannot decode {}: {e}", path.display())))
}

pub fn load_sequence(dir: impl AsRef<Path>) -> Result<Sequence> {
    let dir = dir.as_ref();
    let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut images = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if let Some((naming, n)) = path.is_file().then(|| image_index(&path)).flatten() {
            images.push((n, naming, path));
        }
    }
    images.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.2.cmp(&b.2)));

    let Some(pos) = images.iter().position(|i| i.0 == 1) else {
        return Err(Error::Load(format!(
            "{}: no reference image (img1.* or 1.*)",
            dir.display()
        )));
    };
    let (_, naming, ref_image) = images.remove(pos);
    check_decodable(&ref_image)?;

    let mut tests = Vec::new();
    for (n, style, path) in images.into_iter().filter(|i| i.0 >= 2 && i.1 == naming) {
        if tests.iter().any(|(_, m, _)| *m == n) {
            continue;
        }
        let h_path = dir.join(style.homography_name(n));
        if !h_path.is_file() {
            return Err(Error::Load(format!(
                "{}: missing homography {} for {}",
                dir.display(),
                style.homography_name(n),
                path.display()
            )));
        }
        check_decodable(&path)?;
        let h = parse_homography_file(&h_path)?;
        h.inverse()?;
        tests.push((path, n, h));
    }

    let transformation = fs::read_to_string(dir.join("transform.txt"))
        .ok()
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .unwrap_or_else(|| "unknown".to_string());
    let name = dir
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| dir.display().to_string());
    Ok(Sequence {
        name,
        ref_image,
        tests: tests.into_iter().map(|(p, _, h)| (p, h)).collect(),
        transformation,
    })
}

/// Subdirectories of `root` in name order, each loaded as a sequence.
pub fn load_dataset(root: impl AsRef<Path>) -> Result<Vec<(PathBuf, Result<Sequence>)>> {
    let root = root.as_ref();
    let mut dirs: Vec<PathBuf> = fs::read_dir(root)
        .map_err(|e| Error::io(root, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_dir())
        .collect();
    dirs.sort();
    Ok(dirs
        .into_iter()
        .map(|d| {
            let s = load_sequence(&d);
            (d, s)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imaging::GrayImage;
    use proptest::prelude::*;

    fn write_image(dir: &Path, name: &str) {
        GrayImage::filled(8, 8, 0.5)
            .to_luma8()
            .save(dir.join(name))
            .unwrap();
    }

    #[test]
    fn parse_examples() {
        assert_eq!(
            parse_homography("1 0 0\n0 1 0\n0 0 1").unwrap(),
            Homography::identity()
        );
        assert_eq!(
            parse_homography("2 0 0 0 2 0 0 0 2").unwrap(),
            Homography::identity()
        );
        assert!(matches!(
            parse_homography("1 0 0 0 1 0 0 0"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse_homography("1 0 0 0 1 0 0 0 x"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse_homography("1 1 0 1 1 0 0 0 1"),
            Err(Error::SingularMatrix)
        ));
    }

    #[test]
    fn oxford_layout() {
        let d = tempfile::tempdir().unwrap();
        write_image(d.path(), "img1.ppm");
        write_image(d.path(), "img2.ppm");
        fs::write(d.path().join("H1to2p"), "1 0 5\n0 1 0\n0 0 1\n").unwrap();
        fs::write(d.path().join("transform.txt"), "blur\n").unwrap();
        let s = load_sequence(d.path()).unwrap();
        assert_eq!(s.tests.len(), 1);
        assert_eq!(s.transformation, "blur");
        assert_eq!(s.tests[0].1.apply([0.0, 0.0]).unwrap(), [5.0, 0.0]);
    }

    #[test]
    fn hpatches_layout() {
        let d = tempfile::tempdir().unwrap();
        for n in ["1.ppm", "2.ppm", "3.ppm"] {
            write_image(d.path(), n);
        }
        fs::write(d.path().join("H_1_2"), "1 0 0 0 1 0 0 0 1").unwrap();
        fs::write(d.path().join("H_1_3"), "1 0 0 0 1 0 0 0 1").unwrap();
        let s = load_sequence(d.path()).unwrap();
        assert_eq!(s.tests.len(), 2);
        assert!(s.tests[0].0.ends_with("2.ppm") && s.tests[1].0.ends_with("3.ppm"));
        assert_eq!(s.transformation, "unknown");
    }

    #[test]
    fn missing_homography_is_named() {
        let d = tempfile::tempdir().unwrap();
        for n in ["1.ppm", "2.ppm", "3.ppm"] {
            write_image(d.path(), n);
        }
        fs::write(d.path().join("H_1_2"), "1 0 0 0 1 0 0 0 1").unwrap();
        let err = load_sequence(d.path()).unwrap_err().to_string();
        assert!(err.contains("H_1_3"), "{err}");
    }

    #[test]
    fn undecodable_image_is_rejected() {
        let d = tempfile::tempdir().unwrap();
        write_image(d.path(), "1.ppm");
        fs::write(d.path().join("2.ppm"), b"not an image").unwrap();
        fs::write(d.path().join("H_1_2"), "1 0 0 0 1 0 0 0 1").unwrap();
        assert!(matches!(load_sequence(d.path()), Err(Error::Load(_))));
    }

    proptest! {
        #[test]
        fn write_then_parse_round_trips(v in proptest::array::uniform9(-1e3f64..1e3)) {
            let Ok(h) = Homography::new([[v[0], v[1], v[2]], [v[3], v[4], v[5]], [v[6], v[7], v[8]]]) else {
                return Ok(());
            };
            let back = parse_homography(&write_homography(&h)).unwrap();
            let (a, b) = (h.rows(), back.rows());
            for r in 0..3 {
                for c in 0..3 {
                    prop_assert!((a[r][c] - b[r][c]).abs() <= 1e-12 * a[r][c].abs().max(1.0));
                }
            }
        }
    }
}
