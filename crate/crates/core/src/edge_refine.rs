//! Loop/line classification, endpoint merging and loop reordering.
//!
//! Loops are rotated so that they start at their sharpest corner, scored by
//! chord-to-point distance accumulation (CPDA): for chords spanning `L`
//! consecutive points, every point accumulates its distance to each chord that
//! strictly contains it. The accumulations for `L` in {10, 20, 30} are each
//! normalized to a maximum of one and multiplied together.

use std::collections::HashMap;

use crate::edge_drawing::{ChainKind, EdgeChain, Pixel};
use crate::error::{Error, Result};

/// Shortest chain that may be called a loop.
pub const MIN_LOOP_LEN: usize = 8;

/// Chord lengths (in points) used by the corner score.
pub const CHORD_LENGTHS: [usize; 3] = [10, 20, 30];

/// Scores within this distance of the maximum count as ties.
const SCORE_TIE_EPS: f64 = 1e-9;

fn dist(a: Pixel, b: Pixel) -> f64 {
    (a.0 as f64 - b.0 as f64).hypot(a.1 as f64 - b.1 as f64)
}

/// Tags a chain as `Loop` when its ends are within `endpoint_thresh` and it is
/// long enough to enclose an area, `Line` otherwise.
pub fn classify_chain(mut chain: EdgeChain, endpoint_thresh: f64) -> EdgeChain {
    chain.kind =
        if chain.len() >= MIN_LOOP_LEN && dist(chain.first(), chain.last()) <= endpoint_thresh {
            ChainKind::Loop
        } else {
            ChainKind::Line
        };
    chain
}

struct Group {
    points: Vec<Pixel>,
    // endpoint ids (2 * chain index + side) currently at the two ends
    start: usize,
    end: usize,
    kind: ChainKind,
    first_member: usize,
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Joins line chains whose endpoints lie within `endpoint_thresh`, closest
/// pair first, until no pair qualifies. Merged chains are re-classified and
/// loops are left untouched. Output follows the order of each result's
/// earliest input chain.
pub fn merge_line_chains(chains: Vec<EdgeChain>, endpoint_thresh: f64) -> Vec<EdgeChain> {
    let n = chains.len();
    let endpoint = |c: &EdgeChain, side: usize| if side == 0 { c.first() } else { c.last() };

    // Bucket line-chain endpoints so candidate pairs come from nearby cells.
    let cell = endpoint_thresh.max(1.0);
    let key = |p: Pixel| {
        (
            (p.0 as f64 / cell).floor() as i64,
            (p.1 as f64 / cell).floor() as i64,
        )
    };
    let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (i, c) in chains.iter().enumerate() {
        if c.kind == ChainKind::Line && !c.is_empty() {
            for side in 0..2 {
                buckets
                    .entry(key(endpoint(c, side)))
                    .or_default()
                    .push(2 * i + side);
            }
        }
    }
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for (i, c) in chains.iter().enumerate() {
        if c.kind != ChainKind::Line || c.is_empty() {
            continue;
        }
        for side in 0..2 {
            let e1 = 2 * i + side;
            let p = endpoint(c, side);
            let (kx, ky) = key(p);
            for gy in ky - 1..=ky + 1 {
                for gx in kx - 1..=kx + 1 {
                    let Some(ids) = buckets.get(&(gx, gy)) else {
                        continue;
                    };
                    for &e2 in ids {
                        let j = e2 / 2;
                        if j <= i {
                            continue;
                        }
                        let d = dist(p, endpoint(&chains[j], e2 % 2));
                        if d <= endpoint_thresh {
                            pairs.push((d, e1, e2));
                        }
                    }
                }
            }
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let mut parent: Vec<usize> = (0..n).collect();
    let mut groups: Vec<Option<Group>> = chains
        .into_iter()
        .enumerate()
        .map(|(i, c)| {
            Some(Group {
                points: c.points,
                start: 2 * i,
                end: 2 * i + 1,
                kind: c.kind,
                first_member: i,
            })
        })
        .collect();

    for (_, e1, e2) in pairs {
        let g1 = find(&mut parent, e1 / 2);
        let g2 = find(&mut parent, e2 / 2);
        if g1 == g2 {
            continue;
        }
        let (a, b) = (groups[g1].as_ref().unwrap(), groups[g2].as_ref().unwrap());
        if a.kind != ChainKind::Line || b.kind != ChainKind::Line {
            continue;
        }
        if (a.start != e1 && a.end != e1) || (b.start != e2 && b.end != e2) {
            continue;
        }
        let mut a = groups[g1].take().unwrap();
        let mut b = groups[g2].take().unwrap();
        // Orient so the joined ends meet in the middle: ...a, e1 | e2, b...
        if a.start == e1 {
            a.points.reverse();
            std::mem::swap(&mut a.start, &mut a.end);
        }
        if b.end == e2 {
            b.points.reverse();
            std::mem::swap(&mut b.start, &mut b.end);
        }
        a.points.extend(b.points);
        let merged = classify_chain(EdgeChain::new(a.points), endpoint_thresh);
        parent[g2] = g1;
        groups[g1] = Some(Group {
            points: merged.points,
            start: a.start,
            end: b.end,
            kind: merged.kind,
            first_member: a.first_member.min(b.first_member),
        });
    }

    let mut out: Vec<Group> = groups.into_iter().flatten().collect();
    out.sort_by_key(|g| g.first_member);
    out.into_iter()
        .map(|g| EdgeChain {
            points: g.points,
            kind: g.kind,
        })
        .collect()
}

/// Corner score of every point of a polyline. Open polylines give zero for
/// points within `L` of either end for chord length `L`; polylines shorter
/// than `2 * 30 + 1` points score zero everywhere.
pub fn corner_scores(points: &[[f64; 2]], closed: bool) -> Vec<f64> {
    let n = points.len();
    let longest = *CHORD_LENGTHS.iter().max().unwrap();
    let mut score = vec![0.0; n];
    if n < 2 * longest + 1 {
        return score;
    }
    score.iter_mut().for_each(|s| *s = 1.0);
    for &len in &CHORD_LENGTHS {
        let mut acc = vec![0.0; n];
        for (i, slot) in acc.iter_mut().enumerate() {
            if !closed && (i < len || i + len > n - 1) {
                continue;
            }
            let p = points[i];
            let mut sum = 0.0;
            // chords [s, s + len - 1] with s < i < s + len - 1
            for back in 1..len - 1 {
                let s = (i + n - back) % n;
                let e = (s + len - 1) % n;
                sum += point_chord_distance(p, points[s], points[e]);
            }
            *slot = sum;
        }
        let max = acc.iter().cloned().fold(0.0, f64::max);
        for (s, a) in score.iter_mut().zip(&acc) {
            *s *= if max > 0.0 { a / max } else { 0.0 };
        }
    }
    score
}

fn point_chord_distance(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len = dx.hypot(dy);
    if len == 0.0 {
        return (p[0] - a[0]).hypot(p[1] - a[1]);
    }
    ((p[0] - a[0]) * dy - (p[1] - a[1]) * dx).abs() / len
}

/// Corner scores of an edge chain; loops wrap cyclically.
pub fn cpda_corner_scores(chain: &EdgeChain) -> Vec<f64> {
    let pts: Vec<[f64; 2]> = chain
        .points
        .iter()
        .map(|&(x, y)| [x as f64, y as f64])
        .collect();
    corner_scores(&pts, chain.kind == ChainKind::Loop)
}

/// Index of the highest score; near-ties resolve to the lowest index.
pub fn sharpest_index(scores: &[f64]) -> usize {
    let max = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    scores
        .iter()
        .position(|s| *s >= max - SCORE_TIE_EPS)
        .unwrap_or(0)
}

/// Rotates a loop so that it starts at its sharpest corner.
pub fn reorder_loop_chain(chain: EdgeChain) -> Result<EdgeChain> {
    if chain.kind != ChainKind::Loop {
        return Err(Error::Contract("only loop chains can be reordered".into()));
    }
    let start = sharpest_index(&cpda_corner_scores(&chain));
    let mut chain = chain;
    chain.points.rotate_left(start);
    Ok(chain)
}

/// Classification, merging and loop reordering in one pass.
pub fn refine_chains(chains: Vec<EdgeChain>, endpoint_thresh: f64) -> Vec<EdgeChain> {
    let classified = chains
        .into_iter()
        .map(|c| classify_chain(c, endpoint_thresh))
        .collect();
    merge_line_chains(classified, endpoint_thresh)
        .into_iter()
        .map(|c| match c.kind {
            ChainKind::Loop => reorder_loop_chain(c).expect("loop chain"),
            ChainKind::Line => c,
        })
        .collect()
}
