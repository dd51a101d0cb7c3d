//! SVG overlay of detections on the source image.

use std::fmt::Write as _;
use std::io::Cursor;

use base64::engine::general_purpose::STANDARD;
use base64::Engine as _;

use crate::error::{Error, Result};
use crate::gradient_field::GradientField;
use crate::imaging::GrayImage;
use crate::segment_fitting::LineSegment;

const TICK_LENGTH: f64 = 6.0;

/// Renders `img` with one polyline per segment. When `field` is given, a
/// short tick at each segment midpoint shows the local level-line.
pub fn render_svg(
    img: &GrayImage,
    segments: &[LineSegment],
    field: Option<&GradientField>,
) -> Result<String> {
    let mut png = Vec::new();
    img.to_luma8()
        .write_to(&mut Cursor::new(&mut png), image::ImageFormat::Png)
        .map_err(|e| Error::Format(format!("png encoding: {e}")))?;
    let (w, h) = (img.width(), img.height());

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" xmlns:xlink="http://www.w3.org/1999/xlink" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(
        s,
        r#"<image width="{w}" height="{h}" xlink:href="data:image/png;base64,{}"/>"#,
        STANDARD.encode(&png)
    );
    let _ = writeln!(s, r#"<g fill="none" stroke="red" stroke-width="1">"#);
    for seg in segments {
        let _ = writeln!(
            s,
            r#"<polyline points="{:.3},{:.3} {:.3},{:.3}"/>"#,
            seg.p1[0], seg.p1[1], seg.p2[0], seg.p2[1]
        );
    }
    s.push_str("</g>\n");

    if let Some(field) = field {
        let _ = writeln!(s, r#"<g stroke="cyan" stroke-width="1">"#);
        for seg in segments {
            let [mx, my] = seg.midpoint();
            let (px, py) = (mx.round() as i64, my.round() as i64);
            if !field.contains(px, py) || !field.is_valid(px as usize, py as usize) {
                continue;
            }
            let [u, v] = field.level(px as usize, py as usize);
            let _ = writeln!(
                s,
                r#"<line x1="{mx:.3}" y1="{my:.3}" x2="{:.3}" y2="{:.3}"/>"#,
                mx + TICK_LENGTH * u,
                my + TICK_LENGTH * v
            );
        }
        s.push_str("</g>\n");
    }
    s.push_str("</svg>\n");
    Ok(s)
}
