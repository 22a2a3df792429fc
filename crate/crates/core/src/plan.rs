//! Floorplan grid representation and the `.fpgrid` text codec.
//!
//! A plan is a labeled occupancy grid with a physical scale. The on-disk
//! format is one JSON header line (sorted keys, LF endings) followed by
//! `height` rows of two-character cell codes. Serialization is canonical:
//! structurally equal plans produce byte-identical files.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::Value;
use thiserror::Error;

pub const DEFAULT_SCALE: f64 = 0.0703125; // 18 m / 256 cells
pub const DEFAULT_WALL_HEIGHT: f64 = 2.8;

pub const MIN_DIM: usize = 8;
pub const MAX_DIM: usize = 1024;
pub const MAX_INSTANCES: u8 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
pub enum RoomKind {
    LivingRoom,
    Bedroom,
    Kitchen,
    Bathroom,
    Balcony,
    DiningRoom,
    Storage,
    Corridor,
}

impl RoomKind {
    pub const ALL: [RoomKind; 8] = [
        RoomKind::LivingRoom,
        RoomKind::Bedroom,
        RoomKind::Kitchen,
        RoomKind::Bathroom,
        RoomKind::Balcony,
        RoomKind::DiningRoom,
        RoomKind::Storage,
        RoomKind::Corridor,
    ];

    pub fn letter(self) -> char {
        match self {
            RoomKind::LivingRoom => 'L',
            RoomKind::Bedroom => 'B',
            RoomKind::Kitchen => 'K',
            RoomKind::Bathroom => 'T',
            RoomKind::Balcony => 'A',
            RoomKind::DiningRoom => 'D',
            RoomKind::Storage => 'S',
            RoomKind::Corridor => 'C',
        }
    }

    pub fn from_letter(c: char) -> Option<RoomKind> {
        Some(match c {
            'L' => RoomKind::LivingRoom,
            'B' => RoomKind::Bedroom,
            'K' => RoomKind::Kitchen,
            'T' => RoomKind::Bathroom,
            'A' => RoomKind::Balcony,
            'D' => RoomKind::DiningRoom,
            'S' => RoomKind::Storage,
            'C' => RoomKind::Corridor,
            _ => return None,
        })
    }
}

impl fmt::Display for RoomKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellLabel {
    Exterior,
    Wall,
    Door,
    Window,
    Entrance,
    Room { kind: RoomKind, instance: u8 },
}

impl CellLabel {
    pub fn code(self) -> String {
        match self {
            CellLabel::Exterior => "..".to_string(),
            CellLabel::Wall => "##".to_string(),
            CellLabel::Door => "DR".to_string(),
            CellLabel::Window => "WN".to_string(),
            CellLabel::Entrance => "EN".to_string(),
            CellLabel::Room { kind, instance } => format!("{}{}", kind.letter(), instance),
        }
    }

    pub fn from_code(code: &str) -> Option<CellLabel> {
        match code {
            ".." => return Some(CellLabel::Exterior),
            "##" => return Some(CellLabel::Wall),
            "DR" => return Some(CellLabel::Door),
            "WN" => return Some(CellLabel::Window),
            "EN" => return Some(CellLabel::Entrance),
            _ => {}
        }
        let mut chars = code.chars();
        let letter = chars.next()?;
        let digit = chars.next()?;
        if chars.next().is_some() {
            return None;
        }
        let kind = RoomKind::from_letter(letter)?;
        let instance = digit.to_digit(10)? as u8;
        Some(CellLabel::Room { kind, instance })
    }

    pub fn is_room(self) -> bool {
        matches!(self, CellLabel::Room { .. })
    }

    /// Room, Door and Entrance cells are traversable; Wall/Window/Exterior are not.
    pub fn is_walkable(self) -> bool {
        matches!(self, CellLabel::Room { .. } | CellLabel::Door | CellLabel::Entrance)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlanError {
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("grid dimension mismatch, row {row}")]
    DimensionMismatch { row: usize },
    #[error("unknown cell code `{code}` at row {row}, col {col}")]
    UnknownCellCode { row: usize, col: usize, code: String },
    #[error("width and height must be in [{MIN_DIM}, {MAX_DIM}], got {width}x{height}")]
    DimensionOutOfRange { width: usize, height: usize },
    #[error("scale must be positive, got {0}")]
    BadScale(f64),
    #[error("wall_height must be positive, got {0}")]
    BadWallHeight(f64),
    #[error("no entrance")]
    NoEntrance,
    #[error("multiple entrances")]
    MultipleEntrances,
    #[error("entrance does not touch the exterior boundary")]
    EntranceNotOnBoundary,
    #[error("room {code} split into disjoint components")]
    RoomSplit { code: String },
    #[error("interior is not a single enclosed region")]
    InteriorNotConnected,
    #[error("room cell at row {row}, col {col} touches the exterior")]
    Unenclosed { row: usize, col: usize },
}

/// Labeled occupancy grid with physical scale. Immutable after construction;
/// every constructor path validates the structural invariants.
#[derive(Debug, Clone, PartialEq)]
pub struct Floorplan {
    id: String,
    width: usize,
    height: usize,
    scale: f64,
    wall_height: f64,
    grid: Vec<CellLabel>,
    meta: Option<Value>,
}

impl Floorplan {
    pub fn new(
        id: impl Into<String>,
        width: usize,
        height: usize,
        scale: f64,
        wall_height: f64,
        grid: Vec<CellLabel>,
    ) -> Result<Floorplan, PlanError> {
        let plan = Floorplan {
            id: id.into(),
            width,
            height,
            scale,
            wall_height,
            grid,
            meta: None,
        };
        plan.validate()?;
        Ok(plan)
    }

    /// Rebuilds a plan from an edited grid, keeping header fields.
    pub fn with_grid(&self, grid: Vec<CellLabel>) -> Result<Floorplan, PlanError> {
        let plan = Floorplan {
            grid,
            ..self.clone()
        };
        plan.validate()?;
        Ok(plan)
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Floorplan {
        self.id = id.into();
        self
    }

    pub fn id(&self) -> &str {
        &self.id
    }
    pub fn width(&self) -> usize {
        self.width
    }
    pub fn height(&self) -> usize {
        self.height
    }
    pub fn scale(&self) -> f64 {
        self.scale
    }
    pub fn wall_height(&self) -> f64 {
        self.wall_height
    }
    pub fn grid(&self) -> &[CellLabel] {
        &self.grid
    }
    pub fn meta(&self) -> Option<&Value> {
        self.meta.as_ref()
    }

    #[inline]
    pub fn idx(&self, x: usize, y: usize) -> usize {
        y * self.width + x
    }

    #[inline]
    pub fn cell(&self, x: usize, y: usize) -> CellLabel {
        self.grid[y * self.width + x]
    }

    /// 4-neighbors inside the grid.
    pub fn neighbors4(&self, x: usize, y: usize) -> impl Iterator<Item = (usize, usize)> {
        let (w, h) = (self.width as isize, self.height as isize);
        let (x, y) = (x as isize, y as isize);
        [(0isize, -1isize), (0, 1), (-1, 0), (1, 0)]
            .into_iter()
            .filter_map(move |(dx, dy)| {
                let (nx, ny) = (x + dx, y + dy);
                (nx >= 0 && ny >= 0 && nx < w && ny < h).then_some((nx as usize, ny as usize))
            })
    }

    pub fn neighbors8(&self, x: usize, y: usize) -> impl Iterator<Item = (usize, usize)> {
        let (w, h) = (self.width as isize, self.height as isize);
        let (x, y) = (x as isize, y as isize);
        [
            (-1isize, -1isize),
            (0, -1),
            (1, -1),
            (-1, 0),
            (1, 0),
            (-1, 1),
            (0, 1),
            (1, 1),
        ]
        .into_iter()
        .filter_map(move |(dx, dy)| {
            let (nx, ny) = (x + dx, y + dy);
            (nx >= 0 && ny >= 0 && nx < w && ny < h).then_some((nx as usize, ny as usize))
        })
    }

    /// True when the cell borders the outside world: 4-adjacent to an
    /// Exterior cell or lying on the grid edge.
    pub fn is_exterior_facing(&self, x: usize, y: usize) -> bool {
        if x == 0 || y == 0 || x == self.width - 1 || y == self.height - 1 {
            return true;
        }
        self.neighbors4(x, y)
            .any(|(nx, ny)| self.cell(nx, ny) == CellLabel::Exterior)
    }

    pub fn validate(&self) -> Result<(), PlanError> {
        if self.width < MIN_DIM
            || self.width > MAX_DIM
            || self.height < MIN_DIM
            || self.height > MAX_DIM
        {
            return Err(PlanError::DimensionOutOfRange {
                width: self.width,
                height: self.height,
            });
        }
        if !(self.scale > 0.0) || !self.scale.is_finite() {
            return Err(PlanError::BadScale(self.scale));
        }
        if !(self.wall_height > 0.0) || !self.wall_height.is_finite() {
            return Err(PlanError::BadWallHeight(self.wall_height));
        }
        assert_eq!(self.grid.len(), self.width * self.height);

        self.check_entrance()?;
        self.check_room_components()?;
        self.check_interior()?;
        Ok(())
    }

    fn check_entrance(&self) -> Result<(), PlanError> {
        let entrances: Vec<usize> = (0..self.grid.len())
            .filter(|&i| self.grid[i] == CellLabel::Entrance)
            .collect();
        if entrances.is_empty() {
            return Err(PlanError::NoEntrance);
        }
        let comp = self.flood4(entrances[0], |l| l == CellLabel::Entrance);
        if comp.len() != entrances.len() {
            return Err(PlanError::MultipleEntrances);
        }
        let touches = entrances.iter().any(|&i| {
            let (x, y) = (i % self.width, i / self.width);
            self.is_exterior_facing(x, y)
        });
        if !touches {
            return Err(PlanError::EntranceNotOnBoundary);
        }
        Ok(())
    }

    fn check_room_components(&self) -> Result<(), PlanError> {
        let mut seen: BTreeMap<(RoomKind, u8), usize> = BTreeMap::new();
        let mut counts: BTreeMap<(RoomKind, u8), usize> = BTreeMap::new();
        for (i, &l) in self.grid.iter().enumerate() {
            if let CellLabel::Room { kind, instance } = l {
                *counts.entry((kind, instance)).or_default() += 1;
                seen.entry((kind, instance)).or_insert(i);
            }
        }
        for (&(kind, instance), &start) in &seen {
            let label = CellLabel::Room { kind, instance };
            let comp = self.flood4(start, |l| l == label);
            if comp.len() != counts[&(kind, instance)] {
                return Err(PlanError::RoomSplit { code: label.code() });
            }
        }
        Ok(())
    }

    fn check_interior(&self) -> Result<(), PlanError> {
        // All non-Exterior cells must form one 4-connected region...
        let interior: Vec<usize> = (0..self.grid.len())
            .filter(|&i| self.grid[i] != CellLabel::Exterior)
            .collect();
        if let Some(&start) = interior.first() {
            let comp = self.flood4(start, |l| l != CellLabel::Exterior);
            if comp.len() != interior.len() {
                return Err(PlanError::InteriorNotConnected);
            }
        }
        // ...and only Wall/Window/Door/Entrance may face the outside.
        for &i in &interior {
            let (x, y) = (i % self.width, i / self.width);
            if self.grid[i].is_room() && self.is_exterior_facing(x, y) {
                return Err(PlanError::Unenclosed { row: y + 1, col: x + 1 });
            }
        }
        Ok(())
    }

    fn flood4(&self, start: usize, pred: impl Fn(CellLabel) -> bool) -> Vec<usize> {
        let mut visited = vec![false; self.grid.len()];
        let mut stack = vec![start];
        let mut out = Vec::new();
        visited[start] = true;
        while let Some(i) = stack.pop() {
            out.push(i);
            let (x, y) = (i % self.width, i / self.width);
            for (nx, ny) in self.neighbors4(x, y) {
                let j = self.idx(nx, ny);
                if !visited[j] && pred(self.grid[j]) {
                    visited[j] = true;
                    stack.push(j);
                }
            }
        }
        out
    }
}

/// One room instance: a 4-connected component of identical (kind, instance) labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Room {
    pub kind: RoomKind,
    pub instance: u8,
    pub cells: Vec<(usize, usize)>,
    pub area: f64,
}

impl Room {
    pub fn id(&self) -> String {
        format!("{}{}", self.kind.letter(), self.instance)
    }
}

/// Connected-component decomposition of the Room cells, ordered by (kind, instance).
pub fn extract_rooms(plan: &Floorplan) -> Result<Vec<Room>, PlanError> {
    let mut by_label: BTreeMap<(RoomKind, u8), Vec<(usize, usize)>> = BTreeMap::new();
    for y in 0..plan.height() {
        for x in 0..plan.width() {
            if let CellLabel::Room { kind, instance } = plan.cell(x, y) {
                by_label.entry((kind, instance)).or_default().push((x, y));
            }
        }
    }
    let mut rooms = Vec::with_capacity(by_label.len());
    for ((kind, instance), cells) in by_label {
        let label = CellLabel::Room { kind, instance };
        let start = plan.idx(cells[0].0, cells[0].1);
        let comp = plan.flood4(start, |l| l == label);
        if comp.len() != cells.len() {
            return Err(PlanError::RoomSplit { code: label.code() });
        }
        let area = cells.len() as f64 * plan.scale() * plan.scale();
        rooms.push(Room {
            kind,
            instance,
            cells,
            area,
        });
    }
    Ok(rooms)
}

pub fn parse_plan(bytes: &[u8]) -> Result<Floorplan, PlanError> {
    let text = std::str::from_utf8(bytes)
        .map_err(|_| PlanError::MalformedHeader("not valid UTF-8".to_string()))?;
    let mut lines = text.split('\n');
    let header_line = lines
        .next()
        .ok_or_else(|| PlanError::MalformedHeader("empty input".to_string()))?
        .trim_end_matches('\r');

    let header: Value = serde_json::from_str(header_line)
        .map_err(|e| PlanError::MalformedHeader(e.to_string()))?;
    let obj = header
        .as_object()
        .ok_or_else(|| PlanError::MalformedHeader("header is not a JSON object".to_string()))?;

    let mut id = None;
    let mut width = None;
    let mut height = None;
    let mut scale = DEFAULT_SCALE;
    let mut wall_height = DEFAULT_WALL_HEIGHT;
    let mut meta = None;
    for (k, v) in obj {
        match k.as_str() {
            "id" => {
                id = Some(
                    v.as_str()
                        .ok_or_else(|| PlanError::MalformedHeader("id must be a string".into()))?
                        .to_string(),
                )
            }
            "width" => {
                width = Some(v.as_u64().ok_or_else(|| {
                    PlanError::MalformedHeader("width must be a positive integer".into())
                })? as usize)
            }
            "height" => {
                height = Some(v.as_u64().ok_or_else(|| {
                    PlanError::MalformedHeader("height must be a positive integer".into())
                })? as usize)
            }
            "scale" => {
                scale = v
                    .as_f64()
                    .ok_or_else(|| PlanError::MalformedHeader("scale must be a number".into()))?
            }
            "wall_height" => {
                wall_height = v.as_f64().ok_or_else(|| {
                    PlanError::MalformedHeader("wall_height must be a number".into())
                })?
            }
            "meta" => meta = Some(v.clone()),
            other => {
                return Err(PlanError::MalformedHeader(format!(
                    "unexpected key `{other}`"
                )))
            }
        }
    }
    let id = id.ok_or_else(|| PlanError::MalformedHeader("missing `id`".into()))?;
    let width = width.ok_or_else(|| PlanError::MalformedHeader("missing `width`".into()))?;
    let height = height.ok_or_else(|| PlanError::MalformedHeader("missing `height`".into()))?;

    let mut grid = Vec::with_capacity(width * height);
    let mut row = 0usize;
    for line in lines {
        let line = line.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        row += 1;
        if row > height {
            return Err(PlanError::DimensionMismatch { row });
        }
        let tokens: Vec<&str> = line.split(' ').collect();
        if tokens.len() != width {
            return Err(PlanError::DimensionMismatch { row });
        }
        for (col, tok) in tokens.iter().enumerate() {
            let label = CellLabel::from_code(tok).ok_or_else(|| PlanError::UnknownCellCode {
                row,
                col: col + 1,
                code: tok.to_string(),
            })?;
            grid.push(label);
        }
    }
    if row != height {
        return Err(PlanError::DimensionMismatch { row: row + 1 });
    }

    let plan = Floorplan {
        id,
        width,
        height,
        scale,
        wall_height,
        grid,
        meta,
    };
    plan.validate()?;
    Ok(plan)
}

/// Canonical form: sorted header keys, LF line endings, single trailing newline.
pub fn serialize_plan(plan: &Floorplan) -> Vec<u8> {
    let mut header: BTreeMap<&str, Value> = BTreeMap::new();
    header.insert("height", Value::from(plan.height() as u64));
    header.insert("id", Value::from(plan.id()));
    if let Some(meta) = plan.meta() {
        header.insert("meta", meta.clone());
    }
    header.insert("scale", Value::from(plan.scale()));
    header.insert("wall_height", Value::from(plan.wall_height()));
    header.insert("width", Value::from(plan.width() as u64));

    let mut out = serde_json::to_string(&header).expect("header serializes");
    out.push('\n');
    for y in 0..plan.height() {
        let row: Vec<String> = (0..plan.width()).map(|x| plan.cell(x, y).code()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out.into_bytes()
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// 8x8 minimal plan: perimeter walls, one entrance, interior all L0.
    pub(crate) fn minimal_plan_text() -> String {
        let mut s =
            String::from("{\"id\":\"mini\",\"width\":8,\"height\":8,\"scale\":0.5,\"wall_height\":2.8}\n");
        for y in 0..8 {
            let mut row = Vec::new();
            for x in 0..8 {
                let code = if y == 0 && x == 3 {
                    "EN"
                } else if y == 0 || y == 7 || x == 0 || x == 7 {
                    "##"
                } else {
                    "L0"
                };
                row.push(code);
            }
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    #[test]
    fn parse_minimal_plan() {
        let plan = parse_plan(minimal_plan_text().as_bytes()).unwrap();
        assert_eq!(plan.width(), 8);
        assert_eq!(plan.height(), 8);
        let rooms = extract_rooms(&plan).unwrap();
        assert_eq!(rooms.len(), 1);
        assert_eq!(rooms[0].kind, RoomKind::LivingRoom);
        assert_eq!(rooms[0].cells.len(), 36);
    }

    #[test]
    fn row_length_mismatch_reports_row() {
        let mut text = minimal_plan_text();
        // drop the last token of the third grid row
        let lines: Vec<&str> = text.split('\n').collect();
        let mut bad = lines.clone();
        let shortened = lines[3].rsplit_once(' ').unwrap().0.to_string();
        bad[3] = &shortened;
        text = bad.join("\n");
        let err = parse_plan(text.as_bytes()).unwrap_err();
        assert_eq!(err, PlanError::DimensionMismatch { row: 3 });
        assert_eq!(err.to_string(), "grid dimension mismatch, row 3");
    }

    #[test]
    fn two_entrance_components_rejected() {
        let text = minimal_plan_text().replace("## ## ## EN", "## EN ## EN");
        let err = parse_plan(text.as_bytes()).unwrap_err();
        assert_eq!(err, PlanError::MultipleEntrances);
        assert_eq!(err.to_string(), "multiple entrances");
    }

    #[test]
    fn unknown_code_rejected() {
        let text = minimal_plan_text().replace("L0", "Z0");
        let err = parse_plan(text.as_bytes()).unwrap_err();
        assert!(matches!(err, PlanError::UnknownCellCode { .. }));
    }

    #[test]
    fn round_trip_is_identity() {
        let plan = parse_plan(minimal_plan_text().as_bytes()).unwrap();
        let bytes = serialize_plan(&plan);
        let plan2 = parse_plan(&bytes).unwrap();
        assert_eq!(plan, plan2);
        assert_eq!(serialize_plan(&plan2), bytes);
    }

    #[test]
    fn serialize_is_canonical_for_fixture() {
        // hand-canonicalized: sorted keys, LF endings
        let plan = parse_plan(minimal_plan_text().as_bytes()).unwrap();
        let out = String::from_utf8(serialize_plan(&plan)).unwrap();
        let first = out.lines().next().unwrap();
        assert_eq!(
            first,
            "{\"height\":8,\"id\":\"mini\",\"scale\":0.5,\"wall_height\":2.8,\"width\":8}"
        );
        assert!(out.ends_with('\n'));
        assert!(!out.contains('\r'));
    }

    #[test]
    fn meta_preserved_opaquely() {
        let text = minimal_plan_text().replace(
            "\"id\":\"mini\"",
            "\"id\":\"mini\",\"meta\":{\"note\":\"x\"}",
        );
        let plan = parse_plan(text.as_bytes()).unwrap();
        assert_eq!(plan.meta().unwrap()["note"], "x");
        let out = String::from_utf8(serialize_plan(&plan)).unwrap();
        assert!(out.contains("\"meta\":{\"note\":\"x\"}"));
    }

    #[test]
    fn unexpected_header_key_rejected() {
        let text = minimal_plan_text().replace("\"id\":\"mini\"", "\"id\":\"mini\",\"bogus\":1");
        assert!(matches!(
            parse_plan(text.as_bytes()),
            Err(PlanError::MalformedHeader(_))
        ));
    }

    #[test]
    fn header_defaults_applied() {
        let text = minimal_plan_text().replace(
            "{\"id\":\"mini\",\"width\":8,\"height\":8,\"scale\":0.5,\"wall_height\":2.8}",
            "{\"id\":\"mini\",\"width\":8,\"height\":8}",
        );
        let plan = parse_plan(text.as_bytes()).unwrap();
        assert_eq!(plan.scale(), DEFAULT_SCALE);
        assert_eq!(plan.wall_height(), DEFAULT_WALL_HEIGHT);
    }

    #[test]
    fn split_room_label_rejected() {
        // two L0 patches separated by a wall column
        let mut text = String::from("{\"id\":\"s\",\"width\":9,\"height\":8}\n");
        for y in 0..8 {
            let mut row = Vec::new();
            for x in 0..9 {
                let code = if y == 0 && x == 2 {
                    "EN"
                } else if y == 0 || y == 7 || x == 0 || x == 8 || x == 4 {
                    "##"
                } else {
                    "L0"
                };
                row.push(code);
            }
            text.push_str(&row.join(" "));
            text.push('\n');
        }
        let err = parse_plan(text.as_bytes()).unwrap_err();
        assert_eq!(
            err,
            PlanError::RoomSplit {
                code: "L0".to_string()
            }
        );
    }

    #[test]
    fn l_shaped_room_area() {
        // L-shaped B0 region, hand-counted cells
        let mut text = String::from("{\"id\":\"l\",\"width\":8,\"height\":8,\"scale\":0.5}\n");
        for y in 0..8 {
            let mut row = Vec::new();
            for x in 0..8 {
                let code = if y == 0 && x == 3 {
                    "EN"
                } else if y == 0 || y == 7 || x == 0 || x == 7 {
                    "##"
                } else if y <= 3 || x <= 3 {
                    "B0"
                } else {
                    "L0"
                };
                row.push(code);
            }
            text.push_str(&row.join(" "));
            text.push('\n');
        }
        // interior 6x6; B0 = rows 1..=3 full (18) + rows 4..=6 cols 1..=3 (9) = 27
        let plan = parse_plan(text.as_bytes()).unwrap();
        let rooms = extract_rooms(&plan).unwrap();
        let b0 = rooms.iter().find(|r| r.kind == RoomKind::Bedroom).unwrap();
        assert_eq!(b0.cells.len(), 27);
        assert!((b0.area - 27.0 * 0.25).abs() < 1e-12);
    }

    #[test]
    fn area_additivity() {
        let plan = parse_plan(minimal_plan_text().as_bytes()).unwrap();
        let rooms = extract_rooms(&plan).unwrap();
        let room_cells: usize = rooms.iter().map(|r| r.cells.len()).sum();
        let non_exterior = plan
            .grid()
            .iter()
            .filter(|&&l| l != CellLabel::Exterior)
            .count();
        let other = plan
            .grid()
            .iter()
            .filter(|&&l| {
                matches!(
                    l,
                    CellLabel::Wall | CellLabel::Door | CellLabel::Window | CellLabel::Entrance
                )
            })
            .count();
        assert_eq!(room_cells + other, non_exterior);
    }
}
