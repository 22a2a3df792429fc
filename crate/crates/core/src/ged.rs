//! Graph edit distance between adjacency graphs.
//!
//! Unit costs: node insert/delete 1, node kind substitution 1, edge
//! insert/delete 1, edge connection-type substitution 0.5. Exact
//! branch-and-bound search up to [`EXACT_NODE_LIMIT`] nodes; larger graphs
//! fall back to a greedy assignment upper bound flagged `approx`.

use serde::Serialize;

use crate::plan::RoomKind;
use crate::topology::{AdjacencyGraph, Connection};

pub const EXACT_NODE_LIMIT: usize = 12;

const NODE_SUB: f64 = 1.0;
const NODE_INDEL: f64 = 1.0;
const EDGE_INDEL: f64 = 1.0;
const EDGE_SUB: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GedResult {
    pub cost: f64,
    /// False when the greedy upper bound was used.
    pub approx: bool,
}

struct Side {
    kinds: Vec<RoomKind>,
    // dense connection matrix, None = no edge
    adj: Vec<Option<Connection>>,
}

impl Side {
    fn from_graph(g: &AdjacencyGraph) -> Side {
        let n = g.nodes.len();
        let mut adj = vec![None; n * n];
        for e in &g.edges {
            adj[e.a * n + e.b] = Some(e.connection);
            adj[e.b * n + e.a] = Some(e.connection);
        }
        Side {
            kinds: g.nodes.iter().map(|n| n.kind).collect(),
            adj,
        }
    }

    fn n(&self) -> usize {
        self.kinds.len()
    }

    fn edge(&self, i: usize, j: usize) -> Option<Connection> {
        self.adj[i * self.n() + j]
    }
}

fn edge_match_cost(a: Option<Connection>, b: Option<Connection>) -> f64 {
    match (a, b) {
        (None, None) => 0.0,
        (Some(x), Some(y)) if x == y => 0.0,
        (Some(_), Some(_)) => EDGE_SUB,
        _ => EDGE_INDEL,
    }
}

/// Cost of a complete mapping (a-node -> b-node or deletion).
fn mapping_cost(a: &Side, b: &Side, map: &[Option<usize>]) -> f64 {
    let mut cost = 0.0;
    let mut used = vec![false; b.n()];
    for (i, m) in map.iter().enumerate() {
        match m {
            Some(j) => {
                used[*j] = true;
                if a.kinds[i] != b.kinds[*j] {
                    cost += NODE_SUB;
                }
            }
            None => cost += NODE_INDEL,
        }
    }
    cost += used.iter().filter(|&&u| !u).count() as f64 * NODE_INDEL;

    // a-a pairs (covers matched edges, deletions and mapped-pair insertions)
    for i in 0..a.n() {
        for k in i + 1..a.n() {
            let be = match (map[i], map[k]) {
                (Some(p), Some(q)) => b.edge(p, q),
                _ => None,
            };
            cost += edge_match_cost(a.edge(i, k), be);
        }
    }
    // b edges with at least one endpoint not in the image are insertions
    for p in 0..b.n() {
        for q in p + 1..b.n() {
            if b.edge(p, q).is_some() && !(used[p] && used[q]) {
                cost += EDGE_INDEL;
            }
        }
    }
    cost
}

struct Search<'s> {
    a: &'s Side,
    b: &'s Side,
    best: f64,
    map: Vec<Option<usize>>,
    used: Vec<bool>,
}

impl Search<'_> {
    /// Admissible bound on remaining node costs from kind multisets.
    fn remaining_bound(&self, next: usize) -> f64 {
        let ra = self.a.n() - next;
        let rb = self.used.iter().filter(|&&u| !u).count();
        let mut matches = 0usize;
        for kind in RoomKind::ALL {
            let ca = self.a.kinds[next..].iter().filter(|&&k| k == kind).count();
            let cb = (0..self.b.n())
                .filter(|&j| !self.used[j] && self.b.kinds[j] == kind)
                .count();
            matches += ca.min(cb);
        }
        (ra.max(rb) - matches) as f64 * NODE_INDEL.min(NODE_SUB)
    }

    fn dfs(&mut self, i: usize, cost: f64) {
        if cost >= self.best {
            return;
        }
        if i == self.a.n() {
            // remaining b nodes are inserted along with their edges
            let mut total = cost;
            for j in 0..self.b.n() {
                if !self.used[j] {
                    total += NODE_INDEL;
                }
            }
            for p in 0..self.b.n() {
                for q in p + 1..self.b.n() {
                    if self.b.edge(p, q).is_some() && !(self.used[p] && self.used[q]) {
                        total += EDGE_INDEL;
                    }
                }
            }
            if total < self.best {
                self.best = total;
            }
            return;
        }
        if cost + self.remaining_bound(i) >= self.best {
            return;
        }

        for j in 0..self.b.n() {
            if self.used[j] {
                continue;
            }
            let mut step = if self.a.kinds[i] == self.b.kinds[j] {
                0.0
            } else {
                NODE_SUB
            };
            for k in 0..i {
                let be = match self.map[k] {
                    Some(q) => self.b.edge(j, q),
                    None => None,
                };
                step += edge_match_cost(self.a.edge(i, k), be);
            }
            self.map[i] = Some(j);
            self.used[j] = true;
            self.dfs(i + 1, cost + step);
            self.used[j] = false;
            self.map[i] = None;
        }

        // delete a-node i
        let mut step = NODE_INDEL;
        for k in 0..i {
            if self.a.edge(i, k).is_some() {
                step += EDGE_INDEL;
            }
        }
        self.map[i] = None;
        self.dfs(i + 1, cost + step);
    }
}

fn greedy_mapping(a: &Side, b: &Side) -> Vec<Option<usize>> {
    let mut map = vec![None; a.n()];
    let mut used = vec![false; b.n()];
    // same-kind matches first, by degree affinity order (index order is fine
    // for an upper bound)
    for i in 0..a.n() {
        if let Some(j) = (0..b.n()).find(|&j| !used[j] && b.kinds[j] == a.kinds[i]) {
            map[i] = Some(j);
            used[j] = true;
        }
    }
    for i in 0..a.n() {
        if map[i].is_none() {
            if let Some(j) = (0..b.n()).find(|&j| !used[j]) {
                map[i] = Some(j);
                used[j] = true;
            }
        }
    }
    map
}

pub fn ged(ga: &AdjacencyGraph, gb: &AdjacencyGraph) -> GedResult {
    let a = Side::from_graph(ga);
    let b = Side::from_graph(gb);

    if a.n().max(b.n()) > EXACT_NODE_LIMIT {
        let map = greedy_mapping(&a, &b);
        return GedResult {
            cost: mapping_cost(&a, &b, &map),
            approx: true,
        };
    }

    // greedy upper bound seeds the branch-and-bound
    let seed = mapping_cost(&a, &b, &greedy_mapping(&a, &b));
    let mut search = Search {
        a: &a,
        b: &b,
        best: seed,
        map: vec![None; a.n()],
        used: vec![false; b.n()],
    };
    search.dfs(0, 0.0);
    GedResult {
        cost: search.best,
        approx: false,
    }
}
