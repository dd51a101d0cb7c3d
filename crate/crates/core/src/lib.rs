//! Line segment detection by level-line guided edge drawing, and a
//! homography-based repeatability benchmark.
//!
//! ```no_run
//! use lsd_levelline::{detect, load_grayscale, DetectorParams};
//!
//! let img = load_grayscale("building.png")?;
//! for s in detect(&img, &DetectorParams::default())? {
//!     println!("{:?} -> {:?}", s.p1, s.p2);
//! }
//! # Ok::<(), lsd_levelline::Error>(())
//! ```

pub mod bench;
pub mod datasets;
pub mod detector;
pub mod edge_drawing;
pub mod edge_refine;
pub mod error;
pub mod evaluation;
pub mod gradient_field;
pub mod imaging;
pub mod params;
pub mod record;
pub mod segment_fitting;
pub mod svg;
pub mod synth;

pub use detector::{detect, detect_detailed, Detection};
pub use error::{Error, Result};
pub use evaluation::{match_segments, repeatability, EvalConfig, Homography, MatchReport};
pub use imaging::{load_grayscale, GrayImage};
pub use params::DetectorParams;
pub use record::DetectionRecord;
pub use segment_fitting::{LineParams, LineSegment};
