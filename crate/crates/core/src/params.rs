use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tunable thresholds of the detector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectorParams {
    /// Minimum normalized gradient magnitude for a pixel to take part in drawing.
    pub grad_thresh: f64,
    /// Anchor equalization radius in pixels.
    pub equalize_radius: f64,
    /// Endpoint distance (px) below which chains are loops or get merged.
    pub endpoint_thresh: f64,
    /// Minimum fraction of points passing both validation checks.
    pub inlier_ratio: f64,
    /// Point-to-line distance threshold (px).
    pub dist_thresh: f64,
    /// Level-line to line angle threshold (degrees).
    pub angle_thresh: f64,
    /// Weight of the angle term in the refinement loss.
    pub rho: f64,
    /// Shortest segment emitted (px).
    pub min_length: f64,
    /// Number of chain points used for the initial fit.
    pub init_window: usize,
    /// Consecutive rejections that stop segment growth.
    pub max_consecutive_rejects: usize,
    /// Refine the initial window fit before growing.
    pub init_refine: bool,
    /// Validate level-line angles in addition to distances.
    pub angle_check: bool,
}

impl Default for DetectorParams {
    fn default() -> Self {
        Self {
            grad_thresh: 0.2,
            equalize_radius: 10.0,
            endpoint_thresh: 3.0,
            inlier_ratio: 0.5,
            dist_thresh: 3.0,
            angle_thresh: 20.0,
            rho: 2.0,
            min_length: 15.0,
            init_window: 9,
            max_consecutive_rejects: 3,
            init_refine: true,
            angle_check: true,
        }
    }
}

impl DetectorParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("grad_thresh", self.grad_thresh),
            ("equalize_radius", self.equalize_radius),
            ("endpoint_thresh", self.endpoint_thresh),
            ("inlier_ratio", self.inlier_ratio),
            ("dist_thresh", self.dist_thresh),
            ("angle_thresh", self.angle_thresh),
            ("rho", self.rho),
            ("min_length", self.min_length),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParam(format!("{name} must be > 0, got {v}")));
            }
        }
        if self.inlier_ratio > 1.0 {
            return Err(Error::InvalidParam(format!(
                "inlier_ratio must be in (0, 1], got {}",
                self.inlier_ratio
            )));
        }
        if self.angle_thresh >= 90.0 {
            return Err(Error::InvalidParam(format!(
                "angle_thresh must be < 90 degrees, got {}",
                self.angle_thresh
            )));
        }
        if self.init_window < 2 {
            return Err(Error::InvalidParam("init_window must be >= 2".into()));
        }
        if self.max_consecutive_rejects == 0 {
            return Err(Error::InvalidParam(
                "max_consecutive_rejects must be >= 1".into(),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let p = DetectorParams::default();
        p.validate().unwrap();
        assert_eq!(p.grad_thresh, 0.2);
        assert_eq!(
            (p.inlier_ratio, p.dist_thresh, p.angle_thresh),
            (0.5, 3.0, 20.0)
        );
        assert_eq!(p.rho, 2.0);
        assert_eq!(p.min_length, 15.0);
    }

    #[test]
    fn rejects_bad_values() {
        let bad = [
            DetectorParams {
                grad_thresh: 0.0,
                ..Default::default()
            },
            DetectorParams {
                inlier_ratio: 1.5,
                ..Default::default()
            },
            DetectorParams {
                angle_thresh: 90.0,
                ..Default::default()
            },
            DetectorParams {
                rho: -1.0,
                ..Default::default()
            },
            DetectorParams {
                init_window: 1,
                ..Default::default()
            },
        ];
        for p in bad {
            assert!(p.validate().is_err(), "{p:?}");
        }
    }
}
