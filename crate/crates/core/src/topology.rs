//! Room-adjacency graph extraction and the functional-connectivity rule catalog.
//!
//! Rules are strategy objects behind [`ConnectivityRule`]; `rule_catalog_v1`
//! is the registry evaluated by [`check_connectivity`]. A rule that does not
//! apply to the plan (its room kinds are absent) is skipped, and the score is
//! the fraction of applicable rules that pass.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::plan::{extract_rooms, CellLabel, Floorplan, PlanError, RoomKind};

pub const RULES_VERSION: &str = "v1";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TopologyError {
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error("entrance opens into wall")]
    EntranceOpensIntoWall,
    #[error("entrance opens into {0} rooms")]
    EntranceAmbiguous(usize),
}

/// Connection strength order: Door > Open > WindowLink. Parallel connections
/// between the same pair collapse to the strongest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Connection {
    WindowLink,
    Open,
    Door,
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphNode {
    pub id: String,
    pub kind: RoomKind,
    pub area: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GraphEdge {
    pub a: usize,
    pub b: usize,
    pub connection: Connection,
}

#[derive(Debug, Clone)]
pub struct AdjacencyGraph {
    /// Sorted by room id (kind, instance).
    pub nodes: Vec<GraphNode>,
    /// Unordered pairs with a < b, sorted.
    pub edges: Vec<GraphEdge>,
    /// Index of the room 8-adjacent to the entrance cells.
    pub entrance_room: usize,
}

impl AdjacencyGraph {
    pub fn kind(&self, i: usize) -> RoomKind {
        self.nodes[i].kind
    }

    pub fn connection(&self, a: usize, b: usize) -> Option<Connection> {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        self.edges
            .iter()
            .find(|e| e.a == a && e.b == b)
            .map(|e| e.connection)
    }

    /// Neighbors over Door and Open edges only (circulation subgraph).
    pub fn circulation_neighbors(&self, i: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for e in &self.edges {
            if matches!(e.connection, Connection::Door | Connection::Open) {
                if e.a == i {
                    out.push(e.b);
                } else if e.b == i {
                    out.push(e.a);
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "nodes": self.nodes.iter().map(|n| serde_json::json!({
                "id": n.id, "kind": format!("{:?}", n.kind), "area": n.area,
            })).collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|e| serde_json::json!({
                "a": self.nodes[e.a].id, "b": self.nodes[e.b].id,
                "connection": format!("{:?}", e.connection),
            })).collect::<Vec<_>>(),
            "entrance_room": self.nodes[self.entrance_room].id,
        })
    }
}

pub fn build_adjacency(plan: &Floorplan) -> Result<AdjacencyGraph, TopologyError> {
    let rooms = extract_rooms(plan)?;
    let nodes: Vec<GraphNode> = rooms
        .iter()
        .map(|r| GraphNode {
            id: r.id(),
            kind: r.kind,
            area: r.area,
        })
        .collect();

    // cell -> room index
    let mut owner = vec![usize::MAX; plan.width() * plan.height()];
    for (ri, room) in rooms.iter().enumerate() {
        for &(x, y) in &room.cells {
            owner[plan.idx(x, y)] = ri;
        }
    }

    let mut best: BTreeMap<(usize, usize), Connection> = BTreeMap::new();
    let join = |a: usize, b: usize, c: Connection, best: &mut BTreeMap<(usize, usize), Connection>| {
        if a == b {
            return;
        }
        let key = if a < b { (a, b) } else { (b, a) };
        let e = best.entry(key).or_insert(c);
        if c > *e {
            *e = c;
        }
    };

    for y in 0..plan.height() {
        for x in 0..plan.width() {
            match plan.cell(x, y) {
                CellLabel::Door | CellLabel::Window => {
                    let conn = if plan.cell(x, y) == CellLabel::Door {
                        Connection::Door
                    } else {
                        Connection::WindowLink
                    };
                    let adj: Vec<usize> = plan
                        .neighbors4(x, y)
                        .filter_map(|(nx, ny)| {
                            let o = owner[plan.idx(nx, ny)];
                            (o != usize::MAX).then_some(o)
                        })
                        .collect();
                    for i in 0..adj.len() {
                        for j in i + 1..adj.len() {
                            join(adj[i], adj[j], conn, &mut best);
                        }
                    }
                }
                CellLabel::Room { .. } => {
                    let here = owner[plan.idx(x, y)];
                    // scan right and down to visit each adjacency once
                    for (nx, ny) in [(x + 1, y), (x, y + 1)] {
                        if nx < plan.width() && ny < plan.height() {
                            let o = owner[plan.idx(nx, ny)];
                            if o != usize::MAX && o != here {
                                join(here, o, Connection::Open, &mut best);
                            }
                        }
                    }
                }
                _ => {}
            }
        }
    }

    let edges: Vec<GraphEdge> = best
        .into_iter()
        .map(|((a, b), connection)| GraphEdge { a, b, connection })
        .collect();

    // entrance room: the unique room 8-adjacent to an Entrance cell
    let mut entrance_rooms: Vec<usize> = Vec::new();
    for y in 0..plan.height() {
        for x in 0..plan.width() {
            if plan.cell(x, y) == CellLabel::Entrance {
                for (nx, ny) in plan.neighbors8(x, y) {
                    let o = owner[plan.idx(nx, ny)];
                    if o != usize::MAX && !entrance_rooms.contains(&o) {
                        entrance_rooms.push(o);
                    }
                }
            }
        }
    }
    match entrance_rooms.len() {
        0 => Err(TopologyError::EntranceOpensIntoWall),
        1 => Ok(AdjacencyGraph {
            nodes,
            edges,
            entrance_room: entrance_rooms[0],
        }),
        n => Err(TopologyError::EntranceAmbiguous(n)),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RuleResult {
    pub rule: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConnectivityScore {
    /// Fraction of applicable rules passed, in [0,1].
    pub score: f64,
    pub rule_results: Vec<RuleResult>,
}

pub trait ConnectivityRule {
    fn id(&self) -> &'static str;
    /// None when the rule's room kinds are absent from the plan.
    fn check(&self, g: &AdjacencyGraph) -> Option<(bool, String)>;
}

fn has_kind(g: &AdjacencyGraph, kind: RoomKind) -> bool {
    g.nodes.iter().any(|n| n.kind == kind)
}

/// BFS over Door/Open edges from the entrance room, visiting only nodes
/// accepted by `allow` (the entrance room is always allowed as the start).
fn circulation_reach(g: &AdjacencyGraph, allow: impl Fn(usize) -> bool) -> Vec<bool> {
    let mut seen = vec![false; g.nodes.len()];
    let mut queue = vec![g.entrance_room];
    seen[g.entrance_room] = true;
    while let Some(i) = queue.pop() {
        for j in g.circulation_neighbors(i) {
            if !seen[j] && allow(j) {
                seen[j] = true;
                queue.push(j);
            }
        }
    }
    seen
}

struct R1AllReachable;
impl ConnectivityRule for R1AllReachable {
    fn id(&self) -> &'static str {
        "R1"
    }
    fn check(&self, g: &AdjacencyGraph) -> Option<(bool, String)> {
        let reach = circulation_reach(g, |_| true);
        let missing: Vec<&str> = g
            .nodes
            .iter()
            .enumerate()
            .filter(|(i, n)| n.kind != RoomKind::Balcony && !reach[*i])
            .map(|(_, n)| n.id.as_str())
            .collect();
        if missing.is_empty() {
            Some((true, "all rooms reachable from entrance".to_string()))
        } else {
            Some((false, format!("unreachable rooms: {}", missing.join(", "))))
        }
    }
}

struct R2EntrancePublic;
impl ConnectivityRule for R2EntrancePublic {
    fn id(&self) -> &'static str {
        "R2"
    }
    fn check(&self, g: &AdjacencyGraph) -> Option<(bool, String)> {
        let kind = g.kind(g.entrance_room);
        let ok = matches!(
            kind,
            RoomKind::LivingRoom | RoomKind::Corridor | RoomKind::DiningRoom
        );
        Some((ok, format!("entrance opens into {:?}", kind)))
    }
}

struct R3KitchenServes;
impl ConnectivityRule for R3KitchenServes {
    fn id(&self) -> &'static str {
        "R3"
    }
    fn check(&self, g: &AdjacencyGraph) -> Option<(bool, String)> {
        if !has_kind(g, RoomKind::Kitchen) {
            return None;
        }
        for (i, n) in g.nodes.iter().enumerate() {
            if n.kind != RoomKind::Kitchen {
                continue;
            }
            let served = g.circulation_neighbors(i).into_iter().any(|j| {
                matches!(g.kind(j), RoomKind::LivingRoom | RoomKind::DiningRoom)
            });
            if !served {
                return Some((
                    false,
                    format!("{} has no door/open edge to a living or dining room", n.id),
                ));
            }
        }
        Some((true, "every kitchen serves a living or dining room".to_string()))
    }
}

struct R4BedroomPrivacy;
impl ConnectivityRule for R4BedroomPrivacy {
    fn id(&self) -> &'static str {
        "R4"
    }
    fn check(&self, g: &AdjacencyGraph) -> Option<(bool, String)> {
        if !has_kind(g, RoomKind::Bedroom) {
            return None;
        }
        // Reachable set through public intermediates only; a bedroom passes if
        // it borders that set (or is itself the entrance room).
        let public = circulation_reach(g, |j| {
            !matches!(g.kind(j), RoomKind::Bathroom | RoomKind::Bedroom)
        });
        for (i, n) in g.nodes.iter().enumerate() {
            if n.kind != RoomKind::Bedroom {
                continue;
            }
            let ok = i == g.entrance_room
                || g.circulation_neighbors(i).into_iter().any(|j| public[j]);
            if !ok {
                return Some((
                    false,
                    format!("{} reachable only through a bathroom or bedroom", n.id),
                ));
            }
        }
        Some((true, "bedroom circulation avoids bathrooms and bedrooms".to_string()))
    }
}

struct R5BathroomEnclosed;
impl ConnectivityRule for R5BathroomEnclosed {
    fn id(&self) -> &'static str {
        "R5"
    }
    fn check(&self, g: &AdjacencyGraph) -> Option<(bool, String)> {
        if !has_kind(g, RoomKind::Bathroom) {
            return None;
        }
        for (i, n) in g.nodes.iter().enumerate() {
            if n.kind != RoomKind::Bathroom {
                continue;
            }
            let has_door = g.edges.iter().any(|e| {
                (e.a == i || e.b == i) && e.connection == Connection::Door
            });
            if !has_door {
                return Some((false, format!("{} has no door edge", n.id)));
            }
        }
        Some((true, "every bathroom has a door".to_string()))
    }
}

struct R6BalconyAppendage;
impl ConnectivityRule for R6BalconyAppendage {
    fn id(&self) -> &'static str {
        "R6"
    }
    fn check(&self, g: &AdjacencyGraph) -> Option<(bool, String)> {
        if !has_kind(g, RoomKind::Balcony) {
            return None;
        }
        for (i, n) in g.nodes.iter().enumerate() {
            if n.kind != RoomKind::Balcony {
                continue;
            }
            let links: Vec<usize> = g
                .edges
                .iter()
                .filter(|e| {
                    (e.a == i || e.b == i)
                        && matches!(e.connection, Connection::Door | Connection::WindowLink)
                })
                .map(|e| if e.a == i { e.b } else { e.a })
                .filter(|&j| g.kind(j) != RoomKind::Balcony)
                .collect();
            if links.len() != 1 {
                return Some((
                    false,
                    format!("{} linked to {} interior rooms, expected 1", n.id, links.len()),
                ));
            }
        }
        Some((true, "every balcony is an appendage of one room".to_string()))
    }
}

pub fn rule_catalog_v1() -> Vec<Box<dyn ConnectivityRule>> {
    vec![
        Box::new(R1AllReachable),
        Box::new(R2EntrancePublic),
        Box::new(R3KitchenServes),
        Box::new(R4BedroomPrivacy),
        Box::new(R5BathroomEnclosed),
        Box::new(R6BalconyAppendage),
    ]
}

pub fn check_connectivity(graph: &AdjacencyGraph) -> ConnectivityScore {
    let mut results = Vec::new();
    let mut applicable = 0usize;
    let mut passed = 0usize;
    for rule in rule_catalog_v1() {
        if let Some((ok, detail)) = rule.check(graph) {
            applicable += 1;
            if ok {
                passed += 1;
            }
            results.push(RuleResult {
                rule: rule.id().to_string(),
                passed: ok,
                detail,
            });
        }
    }
    let score = if applicable == 0 {
        1.0
    } else {
        passed as f64 / applicable as f64
    };
    ConnectivityScore {
        score,
        rule_results: results,
    }
}

pub fn connectivity_pass(score: &ConnectivityScore) -> bool {
    score.score == 1.0
}
