//! Edge drawing guided by level-lines.
//!
//! From every anchor the drawer walks along the pixel's level-line, looking
//! only at the three neighbors within 45 degrees of the quantized travel
//! direction and stepping to the strongest one. Each walk runs forward and
//! backward so that an anchor in the middle of an edge yields a single chain.

use crate::error::{Error, Result};
use crate::gradient_field::{
    anchor_order, gradient_axis, quantize, Anchor, GradientField, COMPASS,
};

/// Pixel coordinate `(x, y)`.
pub type Pixel = (usize, usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainKind {
    Line,
    Loop,
}

/// Ordered run of edge pixels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeChain {
    pub points: Vec<Pixel>,
    pub kind: ChainKind,
}

impl EdgeChain {
    pub fn new(points: Vec<Pixel>) -> Self {
        Self {
            points,
            kind: ChainKind::Line,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn first(&self) -> Pixel {
        self.points[0]
    }

    pub fn last(&self) -> Pixel {
        self.points[self.points.len() - 1]
    }
}

/// The three neighbor offsets within 45 degrees of direction `dir`: the
/// straight step first, then the side step with the lower compass index.
pub fn candidate_offsets(dir: u8) -> Result<[(i32, i32); 3]> {
    if dir > 7 {
        return Err(Error::Domain(format!("direction {dir} outside 0..=7")));
    }
    Ok(candidates(dir))
}

#[inline]
fn candidates(dir: u8) -> [(i32, i32); 3] {
    let k = dir as usize;
    let a = (k + 7) % 8;
    let b = (k + 1) % 8;
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    [COMPASS[k], COMPASS[lo], COMPASS[hi]]
}

/// Draws edge chains from `anchors`, strongest first. Pixels are claimed by
/// at most one chain, and anchors on an already drawn edge are skipped. A walk ends when no candidate is valid or when the
/// strongest valid candidate is already claimed.
pub fn draw_edges(field: &GradientField, anchors: &[Anchor]) -> Vec<EdgeChain> {
    let mut order = anchors.to_vec();
    order.sort_by(anchor_order);

    let mut visited = vec![false; field.width() * field.height()];
    let mut chains = Vec::new();
    for a in order {
        let idx = field.index(a.x, a.y);
        if visited[idx] || !field.is_valid(a.x, a.y) || cross_section_claimed(field, &visited, a) {
            continue;
        }
        visited[idx] = true;
        let [u, v] = field.level(a.x, a.y);
        let forward = walk(field, &mut visited, (a.x, a.y), [u, v]);
        let backward = walk(field, &mut visited, (a.x, a.y), [-u, -v]);

        let mut points = Vec::with_capacity(forward.len() + backward.len() + 1);
        points.extend(backward.into_iter().rev());
        points.push((a.x, a.y));
        points.extend(forward);
        if points.len() >= 2 {
            chains.push(EdgeChain::new(points));
        }
    }
    chains
}

/// True when a pixel next to the anchor across its level-line already belongs
/// to a chain, so the edge through the anchor has been drawn. Two-pixel-wide
/// ridges would otherwise be drawn twice.
fn cross_section_claimed(field: &GradientField, visited: &[bool], a: Anchor) -> bool {
    let (dx, dy) = gradient_axis(field.dir(a.x, a.y));
    [1i64, -1].iter().any(|s| {
        let (nx, ny) = (a.x as i64 + s * dx as i64, a.y as i64 + s * dy as i64);
        field.contains(nx, ny) && visited[field.index(nx as usize, ny as usize)]
    })
}

fn walk(field: &GradientField, visited: &mut [bool], start: Pixel, dir0: [f64; 2]) -> Vec<Pixel> {
    let mut out = Vec::new();
    let (mut x, mut y) = start;
    let mut travel = dir0;
    loop {
        let mut best: Option<(Pixel, (i32, i32), f64)> = None;
        for (dx, dy) in candidates(quantize(travel[0], travel[1])) {
            let nx = x as i64 + dx as i64;
            let ny = y as i64 + dy as i64;
            if !field.contains(nx, ny) {
                continue;
            }
            let (nx, ny) = (nx as usize, ny as usize);
            if !field.is_valid(nx, ny) {
                continue;
            }
            let m = field.mag(nx, ny);
            if best.is_none_or(|(_, _, bm)| m > bm) {
                best = Some(((nx, ny), (dx, dy), m));
            }
        }
        // Running into an existing chain ends the walk; stepping around it
        // onto a weaker parallel ridge would trace the edge's shoulders.
        let Some(((nx, ny), (dx, dy), _)) = best else {
            break;
        };
        if visited[field.index(nx, ny)] {
            break;
        }
        visited[field.index(nx, ny)] = true;
        out.push((nx, ny));
        let [u, v] = field.level(nx, ny);
        travel = if u * f64::from(dx) + v * f64::from(dy) < 0.0 {
            [-u, -v]
        } else {
            [u, v]
        };
        x = nx;
        y = ny;
    }
    out
}
