//! Fire-egress distance: maximum geodesic walking distance from the entrance
//! to any accessible cell.
//!
//! Multi-source Dijkstra over the walkable mask with 8-connectivity.
//! Orthogonal steps cost `scale`, diagonal steps cost `scale * sqrt(2)`, and a
//! diagonal step is permitted only when both adjacent orthogonal cells are
//! walkable (no corner cutting through walls). Distances are accumulated in
//! step units and multiplied by `scale` at the end, so doubling the scale
//! exactly doubles every distance.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::SQRT_2;

use thiserror::Error;

use crate::plan::Floorplan;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EgressError {
    #[error("no entrance cell")]
    NoEntrance,
}

#[derive(Debug, Clone)]
pub struct EgressResult {
    pub max_distance: f64,
    pub farthest_cell: (usize, usize),
    pub unreachable_cells: usize,
    /// Per-cell distance in meters; infinity for unreachable or non-walkable cells.
    pub distance_field: Vec<f64>,
}

/// A cell is walkable iff it is Room, Door or Entrance.
pub fn walkable_mask(plan: &Floorplan) -> Vec<bool> {
    plan.grid().iter().map(|l| l.is_walkable()).collect()
}

struct HeapEntry {
    dist: f64,
    idx: usize,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.dist == other.dist && self.idx == other.idx
    }
}
impl Eq for HeapEntry {}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap by distance, index tie-break for determinism
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.idx.cmp(&self.idx))
    }
}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub fn egress_distance(plan: &Floorplan) -> Result<EgressResult, EgressError> {
    let walk = walkable_mask(plan);
    let (w, h) = (plan.width(), plan.height());
    let mut dist = vec![f64::INFINITY; w * h];
    let mut heap = BinaryHeap::new();

    for (i, &l) in plan.grid().iter().enumerate() {
        if l == crate::plan::CellLabel::Entrance {
            dist[i] = 0.0;
            heap.push(HeapEntry { dist: 0.0, idx: i });
        }
    }
    if heap.is_empty() {
        return Err(EgressError::NoEntrance);
    }

    let at = |x: isize, y: isize| -> Option<usize> {
        (x >= 0 && y >= 0 && x < w as isize && y < h as isize)
            .then(|| y as usize * w + x as usize)
    };

    while let Some(HeapEntry { dist: d, idx: i }) = heap.pop() {
        if d > dist[i] {
            continue;
        }
        let (x, y) = ((i % w) as isize, (i / w) as isize);
        // orthogonal
        for (dx, dy) in [(0isize, -1isize), (0, 1), (-1, 0), (1, 0)] {
            if let Some(j) = at(x + dx, y + dy) {
                if walk[j] && d + 1.0 < dist[j] {
                    dist[j] = d + 1.0;
                    heap.push(HeapEntry { dist: dist[j], idx: j });
                }
            }
        }
        // diagonal, both orthogonal companions must be walkable
        for (dx, dy) in [(-1isize, -1isize), (1, -1), (-1, 1), (1, 1)] {
            let (Some(j), Some(a), Some(b)) = (at(x + dx, y + dy), at(x + dx, y), at(x, y + dy))
            else {
                continue;
            };
            if walk[j] && walk[a] && walk[b] && d + SQRT_2 < dist[j] {
                dist[j] = d + SQRT_2;
                heap.push(HeapEntry { dist: dist[j], idx: j });
            }
        }
    }

    let scale = plan.scale();
    let mut max_steps = 0.0f64;
    let mut farthest = 0usize;
    let mut unreachable = 0usize;
    for i in 0..dist.len() {
        if !walk[i] {
            continue;
        }
        if dist[i].is_infinite() {
            unreachable += 1;
        } else if dist[i] > max_steps {
            max_steps = dist[i];
            farthest = i;
        }
    }
    let field: Vec<f64> = dist.iter().map(|&d| d * scale).collect();

    Ok(EgressResult {
        max_distance: max_steps * scale,
        farthest_cell: (farthest % w, farthest / w),
        unreachable_cells: unreachable,
        distance_field: field,
    })
}

/// Inclusive bound: a plan at exactly the limit complies. Unreachable walkable
/// cells fail regardless of distance.
pub fn egress_pass(result: &EgressResult, limit: f64) -> bool {
    result.max_distance <= limit && result.unreachable_cells == 0
}
