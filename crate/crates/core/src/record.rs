//! JSON detection records.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::DetectorParams;
use crate::segment_fitting::{LineParams, LineSegment};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SegmentRecord {
    pub x1: f64,
    pub y1: f64,
    pub x2: f64,
    pub y2: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub support: usize,
    pub mean_dist: f64,
    pub mean_angle: f64,
}

impl From<&LineSegment> for SegmentRecord {
    fn from(s: &LineSegment) -> Self {
        Self {
            x1: s.p1[0],
            y1: s.p1[1],
            x2: s.p2[0],
            y2: s.p2[1],
            a: s.line.a,
            b: s.line.b,
            c: s.line.c,
            support: s.support,
            mean_dist: s.mean_dist,
            mean_angle: s.mean_angle,
        }
    }
}

impl From<&SegmentRecord> for LineSegment {
    fn from(r: &SegmentRecord) -> Self {
        Self {
            line: LineParams {
                a: r.a,
                b: r.b,
                c: r.c,
            },
            p1: [r.x1, r.y1],
            p2: [r.x2, r.y2],
            support: r.support,
            mean_dist: r.mean_dist,
            mean_angle: r.mean_angle,
        }
    }
}

/// Detection output for one image.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectionRecord {
    pub image: String,
    pub width: usize,
    pub height: usize,
    pub params: DetectorParams,
    pub segments: Vec<SegmentRecord>,
}

impl DetectionRecord {
    pub fn new(
        image: impl Into<String>,
        width: usize,
        height: usize,
        params: DetectorParams,
        segments: &[LineSegment],
    ) -> Self {
        Self {
            image: image.into(),
            width,
            height,
            params,
            segments: segments.iter().map(SegmentRecord::from).collect(),
        }
    }

    pub fn line_segments(&self) -> Vec<LineSegment> {
        self.segments.iter().map(LineSegment::from).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("records always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("detection record: {e}")))
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json() + "\n").map_err(|e| Error::io(path, e))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }
}
