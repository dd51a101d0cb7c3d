//! End-to-end detection: smoothing, gradients, anchors, drawing, chain
//! refinement and segment fitting.

use crate::edge_drawing::{draw_edges, EdgeChain};
use crate::edge_refine::refine_chains;
use crate::error::Result;
use crate::gradient_field::{
    build_gradient_field, equalize_anchors, extract_anchors, Anchor, GradientField,
};
use crate::imaging::{gaussian_smooth, sobel, GrayImage};
use crate::params::DetectorParams;
use crate::segment_fitting::{extract_segments, LineSegment};

/// Every intermediate product of one detection run.
#[derive(Clone, Debug)]
pub struct Detection {
    pub field: GradientField,
    pub anchors: Vec<Anchor>,
    pub chains: Vec<EdgeChain>,
    pub segments: Vec<LineSegment>,
}

/// Detects line segments in `img`.
pub fn detect(img: &GrayImage, params: &DetectorParams) -> Result<Vec<LineSegment>> {
    Ok(detect_detailed(img, params)?.segments)
}

pub fn detect_detailed(img: &GrayImage, params: &DetectorParams) -> Result<Detection> {
    params.validate()?;
    let smooth = gaussian_smooth(img)?;
    let field = build_gradient_field(&sobel(&smooth)?, params.grad_thresh);
    let anchors = equalize_anchors(&extract_anchors(&field), params.equalize_radius);
    let chains = refine_chains(draw_edges(&field, &anchors), params.endpoint_thresh);
    let segments = chains
        .iter()
        .flat_map(|c| extract_segments(c, &field, params))
        .collect();
    Ok(Detection {
        field,
        anchors,
        chains,
        segments,
    })
}
