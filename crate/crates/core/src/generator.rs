//! Procedural floorplan synthesis and boundary-preserving mutation.
//!
//! `synth` builds valid plans from a room program by banded splitting: the
//! living room forms a central band and the remaining rooms fill side strips,
//! each with a door into the living room. At noise > 0, rule-violating
//! defects are injected with that probability. `mutate` proposes one random
//! structural edit and re-validates; the exterior footprint is never touched.

use serde::Serialize;
use thiserror::Error;

use crate::plan::{extract_rooms, CellLabel, Floorplan, PlanError, Room, RoomKind};
use crate::rng::CounterRng;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenError {
    #[error("footprint {width}x{height} too small for a {rooms}-room program")]
    FootprintTooSmall {
        width: usize,
        height: usize,
        rooms: usize,
    },
    #[error("room program must contain exactly one living room")]
    BadProgram,
    #[error("room program is empty")]
    EmptyProgram,
    #[error("no applicable mutation")]
    NoApplicableMutation,
    #[error(transparent)]
    Plan(#[from] PlanError),
}

#[derive(Debug, Clone)]
pub struct GenSpec {
    pub width: usize,
    pub height: usize,
    pub scale: f64,
    pub wall_height: f64,
    /// Room program; must contain exactly one LivingRoom.
    pub rooms: Vec<RoomKind>,
    pub seed: u64,
    /// Probability of injecting one rule-violating defect, in [0,1].
    pub noise: f64,
}

impl GenSpec {
    pub fn new(width: usize, height: usize, rooms: Vec<RoomKind>, seed: u64) -> GenSpec {
        GenSpec {
            width,
            height,
            scale: 0.25,
            wall_height: 2.8,
            rooms,
            seed,
            noise: 0.0,
        }
    }

    fn validate(&self) -> Result<(), GenError> {
        if self.rooms.is_empty() {
            return Err(GenError::EmptyProgram);
        }
        if self
            .rooms
            .iter()
            .filter(|&&k| k == RoomKind::LivingRoom)
            .count()
            != 1
        {
            return Err(GenError::BadProgram);
        }
        Ok(())
    }
}

struct GridBuf {
    w: usize,
    h: usize,
    cells: Vec<CellLabel>,
}

impl GridBuf {
    fn walled(w: usize, h: usize) -> GridBuf {
        let mut cells = vec![CellLabel::Wall; w * h];
        for y in 1..h - 1 {
            for x in 1..w - 1 {
                cells[y * w + x] = CellLabel::Exterior; // filled by rooms below
            }
        }
        GridBuf { w, h, cells }
    }

    fn set(&mut self, x: usize, y: usize, l: CellLabel) {
        self.cells[y * self.w + x] = l;
    }

    fn fill(&mut self, x0: usize, x1: usize, y0: usize, y1: usize, l: CellLabel) {
        for y in y0..=y1 {
            for x in x0..=x1 {
                self.set(x, y, l);
            }
        }
    }
}

/// Splits `total` rows into `n` parts of at least 2 each, distributing the
/// remainder to seeded positions.
fn split_heights(total: usize, n: usize, rng: &mut CounterRng) -> Option<Vec<usize>> {
    let walls = n - 1;
    if total < 2 * n + walls {
        return None;
    }
    let usable = total - walls;
    let base = usable / n;
    let extra = usable % n;
    let mut heights = vec![base; n];
    let mut order: Vec<usize> = (0..n).collect();
    rng.shuffle(&mut order);
    for &i in order.iter().take(extra) {
        heights[i] += 1;
    }
    Some(heights)
}

pub fn synth(spec: &GenSpec) -> Result<Floorplan, GenError> {
    spec.validate()?;
    let (w, h) = (spec.width, spec.height);
    if w < 8 || h < 8 {
        return Err(GenError::FootprintTooSmall {
            width: w,
            height: h,
            rooms: spec.rooms.len(),
        });
    }
    let mut rng = CounterRng::new(spec.seed);

    // assign instances in program order
    let mut counts = std::collections::BTreeMap::new();
    let mut program: Vec<(RoomKind, u8)> = Vec::new();
    for &k in &spec.rooms {
        let c = counts.entry(k).or_insert(0u8);
        if *c >= crate::plan::MAX_INSTANCES {
            return Err(GenError::BadProgram);
        }
        program.push((k, *c));
        *c += 1;
    }
    let living = program
        .iter()
        .position(|&(k, _)| k == RoomKind::LivingRoom)
        .unwrap();
    let mut others: Vec<(RoomKind, u8)> = program
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != living)
        .map(|(_, &p)| p)
        .collect();
    rng.shuffle(&mut others);

    let iw = w - 2; // interior width
    let ih = h - 2;
    let mut grid = GridBuf::walled(w, h);
    let too_small = || GenError::FootprintTooSmall {
        width: w,
        height: h,
        rooms: spec.rooms.len(),
    };

    let living_label = CellLabel::Room {
        kind: RoomKind::LivingRoom,
        instance: program[living].1,
    };

    // (strip rooms, strip x-range, living x-range)
    let two_strips = others.len() > 3;
    let mut door_cells: Vec<(usize, usize)> = Vec::new();
    let mut strip_layouts: Vec<(Vec<(RoomKind, u8)>, usize, usize, usize)> = Vec::new();
    // tuple: (rooms, x0, x1, wall_x) with the door wall at wall_x

    let (living_x0, living_x1);
    if others.is_empty() {
        living_x0 = 1;
        living_x1 = w - 2;
    } else if !two_strips {
        if iw < 7 {
            return Err(too_small());
        }
        let ws = (iw / 3).clamp(3, iw - 4);
        let wall_x = w - 2 - ws; // strip occupies wall_x+1 ..= w-2
        living_x0 = 1;
        living_x1 = wall_x - 1;
        strip_layouts.push((others.clone(), wall_x + 1, w - 2, wall_x));
    } else {
        if iw < 11 {
            return Err(too_small());
        }
        let ws = (iw / 3).clamp(3, (iw - 5) / 2);
        let left_wall = 1 + ws;
        let right_wall = w - 2 - ws;
        living_x0 = left_wall + 1;
        living_x1 = right_wall - 1;
        if living_x1 < living_x0 + 2 {
            return Err(too_small());
        }
        let split = others.len() / 2;
        strip_layouts.push((others[..split].to_vec(), 1, left_wall - 1, left_wall));
        strip_layouts.push((others[split..].to_vec(), right_wall + 1, w - 2, right_wall));
    }

    grid.fill(living_x0, living_x1, 1, h - 2, living_label);

    for (rooms, x0, x1, wall_x) in &strip_layouts {
        if rooms.is_empty() {
            // annex the empty strip to the living room
            grid.fill(*wall_x, *x1, 1, h - 2, living_label);
            continue;
        }
        grid.fill(*wall_x, *wall_x, 1, h - 2, CellLabel::Wall);
        let heights = split_heights(ih, rooms.len(), &mut rng).ok_or_else(too_small)?;
        let mut y = 1usize;
        for (i, &(kind, instance)) in rooms.iter().enumerate() {
            let room_h = heights[i];
            grid.fill(*x0, *x1, y, y + room_h - 1, CellLabel::Room { kind, instance });
            // door into the living room at a seeded row of this span
            let dy = y + rng.gen_range(room_h as u64) as usize;
            grid.set(*wall_x, dy, CellLabel::Door);
            door_cells.push((*wall_x, dy));
            y += room_h;
            if i + 1 < rooms.len() {
                // divider wall between strip rooms
                grid.fill(*x0, *x1, y, y, CellLabel::Wall);
                y += 1;
            }
        }
    }

    // entrance on the top perimeter over the living band
    let ex = living_x0 + rng.gen_range((living_x1 - living_x0 + 1) as u64) as usize;
    grid.set(ex, 0, CellLabel::Entrance);

    // windows: 1-2 per room on its exterior wall
    let mut window_cells: Vec<(usize, usize)> = Vec::new();
    {
        let owner = owner_map(&grid);
        let candidates = window_candidates(&grid, &owner);
        let mut by_room: std::collections::BTreeMap<usize, Vec<(usize, usize)>> =
            std::collections::BTreeMap::new();
        for (cell, room) in candidates {
            by_room.entry(room).or_default().push(cell);
        }
        for (_, cells) in by_room {
            let n = 1 + rng.gen_range(2) as usize;
            let mut picks = cells;
            for _ in 0..n.min(picks.len()) {
                let i = rng.gen_range(picks.len() as u64) as usize;
                window_cells.push(picks.swap_remove(i));
            }
        }
        for &(x, y) in &window_cells {
            grid.set(x, y, CellLabel::Window);
        }
    }

    // defect injection
    let noise_ppm = (spec.noise.clamp(0.0, 1.0) * 1_000_000.0) as u64;
    if noise_ppm > 0 && rng.gen_ratio(noise_ppm, 1_000_000) {
        inject_defect(&mut grid, &door_cells, &window_cells, &mut rng);
    }

    let plan = Floorplan::new(
        format!("synth-{:016x}", spec.seed),
        w,
        h,
        spec.scale,
        spec.wall_height,
        grid.cells,
    )?;
    Ok(plan)
}

/// cell index -> room ordinal (usize::MAX for non-room); grid-local version
/// used before a Floorplan exists.
fn owner_map(grid: &GridBuf) -> Vec<(RoomKind, u8)> {
    grid.cells
        .iter()
        .map(|l| match l {
            CellLabel::Room { kind, instance } => (*kind, *instance),
            _ => (RoomKind::LivingRoom, u8::MAX),
        })
        .collect()
}

/// Perimeter wall cells adjacent to exactly one room; returns (cell, room tag index).
fn window_candidates(
    grid: &GridBuf,
    owner: &[(RoomKind, u8)],
) -> Vec<((usize, usize), usize)> {
    let (w, h) = (grid.w, grid.h);
    let mut out = Vec::new();
    for y in 0..h {
        for x in 0..w {
            if grid.cells[y * w + x] != CellLabel::Wall {
                continue;
            }
            if !(x == 0 || y == 0 || x == w - 1 || y == h - 1) {
                continue;
            }
            let mut rooms = Vec::new();
            for (nx, ny) in neighbors4(x, y, w, h) {
                if grid.cells[ny * w + nx].is_room() {
                    let tag = owner[ny * w + nx];
                    let key = (tag.0 as usize) * 16 + tag.1 as usize;
                    if !rooms.contains(&key) {
                        rooms.push(key);
                    }
                }
            }
            if rooms.len() == 1 {
                out.push(((x, y), rooms[0]));
            }
        }
    }
    out
}

fn neighbors4(x: usize, y: usize, w: usize, h: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::with_capacity(4);
    if y > 0 {
        v.push((x, y - 1));
    }
    if y + 1 < h {
        v.push((x, y + 1));
    }
    if x > 0 {
        v.push((x - 1, y));
    }
    if x + 1 < w {
        v.push((x + 1, y));
    }
    v
}

fn inject_defect(
    grid: &mut GridBuf,
    doors: &[(usize, usize)],
    windows: &[(usize, usize)],
    rng: &mut CounterRng,
) {
    #[derive(Clone, Copy)]
    enum Defect {
        MissingDoor,
        ExcessWindows,
        Windowless,
        PrivateEntrance,
    }
    let mut menu = vec![Defect::ExcessWindows, Defect::PrivateEntrance];
    if !doors.is_empty() {
        menu.push(Defect::MissingDoor);
    }
    if !windows.is_empty() {
        menu.push(Defect::Windowless);
    }
    match menu[rng.gen_range(menu.len() as u64) as usize] {
        Defect::MissingDoor => {
            let (x, y) = doors[rng.gen_range(doors.len() as u64) as usize];
            grid.set(x, y, CellLabel::Wall);
        }
        Defect::ExcessWindows => {
            let owner = owner_map(grid);
            for ((x, y), _) in window_candidates(grid, &owner) {
                grid.set(x, y, CellLabel::Window);
            }
        }
        Defect::Windowless => {
            for &(x, y) in windows {
                grid.set(x, y, CellLabel::Wall);
            }
        }
        Defect::PrivateEntrance => {
            // relabel the living room to a bedroom: entrance now opens into a
            // private room and kitchens lose their serving path
            let mut used = [false; 10];
            for l in &grid.cells {
                if let CellLabel::Room {
                    kind: RoomKind::Bedroom,
                    instance,
                } = l
                {
                    used[*instance as usize] = true;
                }
            }
            if let Some(free) = used.iter().position(|&u| !u) {
                for l in grid.cells.iter_mut() {
                    if matches!(
                        l,
                        CellLabel::Room {
                            kind: RoomKind::LivingRoom,
                            ..
                        }
                    ) {
                        *l = CellLabel::Room {
                            kind: RoomKind::Bedroom,
                            instance: free as u8,
                        };
                    }
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Direction {
    North,
    South,
    West,
    East,
}

/// A straight run of Wall/Door cells separating two rooms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WallSegment {
    pub vertical: bool,
    /// Column (vertical) or row (horizontal) of the wall.
    pub fixed: usize,
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Mutation {
    ShiftWall { segment: WallSegment, delta: i8 },
    ResizeRoom { room: String, direction: Direction, cells: u8 },
    AddWindow { cell: (usize, usize) },
    RemoveWindow { cell: (usize, usize) },
    MoveDoor { from: (usize, usize), to: (usize, usize) },
    RelabelRoom { room: String, kind: RoomKind },
    AddDoor { cell: (usize, usize) },
}

#[derive(Debug, Clone)]
pub enum MutationOutcome {
    Applied { plan: Floorplan, mutation: Mutation },
    Rejected { mutation: Mutation, reason: String },
}

struct Analysis {
    rooms: Vec<Room>,
    owner: Vec<usize>, // room index or usize::MAX
}

fn analyze(plan: &Floorplan) -> Result<Analysis, PlanError> {
    let rooms = extract_rooms(plan)?;
    let mut owner = vec![usize::MAX; plan.grid().len()];
    for (i, r) in rooms.iter().enumerate() {
        for &(x, y) in &r.cells {
            owner[plan.idx(x, y)] = i;
        }
    }
    Ok(Analysis { rooms, owner })
}

/// Maximal straight Wall/Door runs with a single distinct room on each side
/// and Wall cells sealing both ends.
fn wall_runs(plan: &Floorplan, an: &Analysis) -> Vec<(WallSegment, usize, usize)> {
    let (w, h) = (plan.width(), plan.height());
    let mut runs = Vec::new();

    let mut scan = |vertical: bool| {
        let (outer, inner) = if vertical { (w, h) } else { (h, w) };
        for f in 1..outer - 1 {
            let mut i = 1usize;
            while i < inner - 1 {
                let cell = |p: usize| if vertical { plan.cell(f, p) } else { plan.cell(p, f) };
                let side = |p: usize, d: isize| {
                    let s = (f as isize + d) as usize;
                    if vertical {
                        an.owner[plan.idx(s, p)]
                    } else {
                        an.owner[plan.idx(p, s)]
                    }
                };
                let is_sep = |p: usize| {
                    matches!(cell(p), CellLabel::Wall | CellLabel::Door)
                        && side(p, -1) != usize::MAX
                        && side(p, 1) != usize::MAX
                };
                if !is_sep(i) {
                    i += 1;
                    continue;
                }
                let a = side(i, -1);
                let b = side(i, 1);
                let start = i;
                let mut end = i;
                while end + 1 < inner - 1
                    && is_sep(end + 1)
                    && side(end + 1, -1) == a
                    && side(end + 1, 1) == b
                {
                    end += 1;
                }
                // sealed ends and distinct rooms
                let sealed = |p: isize| {
                    if p < 0 || p as usize >= inner {
                        return true;
                    }
                    let l = cell(p as usize);
                    l == CellLabel::Wall || l == CellLabel::Window || l == CellLabel::Entrance
                };
                if a != b && sealed(start as isize - 1) && sealed(end as isize + 1) && !is_sep(end + 1) {
                    runs.push((
                        WallSegment {
                            vertical,
                            fixed: f,
                            start,
                            end,
                        },
                        a,
                        b,
                    ));
                }
                i = end + 1;
            }
        }
    };
    scan(true);
    scan(false);
    runs
}

/// Applies a segment shift; `delta` is -1 (toward lower coordinate) or +1.
fn apply_shift(
    plan: &Floorplan,
    an: &Analysis,
    seg: &WallSegment,
    a: usize,
    b: usize,
    delta: i8,
) -> Result<Floorplan, String> {
    let d = delta as isize;
    if d != -1 && d != 1 {
        return Err("delta must be +-1".to_string());
    }
    // the room on the shrinking side must keep at least one cell behind the
    // vacated column/row
    let (shrink, grow) = if d < 0 { (a, b) } else { (b, a) };
    let _ = grow;
    let mut grid = plan.grid().to_vec();
    let grow_label = {
        let r = &an.rooms[if d < 0 { b } else { a }];
        CellLabel::Room {
            kind: r.kind,
            instance: r.instance,
        }
    };
    for p in seg.start..=seg.end {
        let (wx, wy) = if seg.vertical { (seg.fixed, p) } else { (p, seg.fixed) };
        let (nx, ny) = if seg.vertical {
            ((wx as isize + d) as usize, wy)
        } else {
            (wx, (wy as isize + d) as usize)
        };
        let (bx, by) = if seg.vertical {
            ((wx as isize + 2 * d) as usize, wy)
        } else {
            (wx, (wy as isize + 2 * d) as usize)
        };
        if bx >= plan.width() || by >= plan.height() {
            return Err("shift runs off the grid".to_string());
        }
        if an.owner[plan.idx(nx, ny)] != shrink {
            return Err("vacated cell not owned by shrinking room".to_string());
        }
        if an.owner[plan.idx(bx, by)] != shrink {
            return Err("shrinking room would vanish".to_string());
        }
        grid[plan.idx(nx, ny)] = plan.cell(wx, wy); // wall/door moves over
        grid[plan.idx(wx, wy)] = grow_label;
    }
    plan.with_grid(grid).map_err(|e| e.to_string())
}

fn exterior_mask(plan: &Floorplan) -> Vec<bool> {
    plan.grid()
        .iter()
        .map(|&l| l == CellLabel::Exterior)
        .collect()
}

fn add_window_candidates(plan: &Floorplan) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for y in 0..plan.height() {
        for x in 0..plan.width() {
            if plan.cell(x, y) == CellLabel::Wall
                && plan.is_exterior_facing(x, y)
                && plan.neighbors4(x, y).any(|(nx, ny)| plan.cell(nx, ny).is_room())
            {
                out.push((x, y));
            }
        }
    }
    out
}

fn add_door_candidates(plan: &Floorplan, an: &Analysis) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for y in 1..plan.height() - 1 {
        for x in 1..plan.width() - 1 {
            if plan.cell(x, y) != CellLabel::Wall || plan.is_exterior_facing(x, y) {
                continue;
            }
            let lr = (an.owner[plan.idx(x - 1, y)], an.owner[plan.idx(x + 1, y)]);
            let ud = (an.owner[plan.idx(x, y - 1)], an.owner[plan.idx(x, y + 1)]);
            let through = |(p, q): (usize, usize)| p != usize::MAX && q != usize::MAX && p != q;
            if through(lr) || through(ud) {
                out.push((x, y));
            }
        }
    }
    out
}

/// Enumerates every applicable mutation in deterministic order.
fn enumerate_moves(plan: &Floorplan, an: &Analysis) -> Vec<Mutation> {
    let mut moves = Vec::new();

    for cell in add_window_candidates(plan) {
        moves.push(Mutation::AddWindow { cell });
    }
    for y in 0..plan.height() {
        for x in 0..plan.width() {
            if plan.cell(x, y) == CellLabel::Window {
                moves.push(Mutation::RemoveWindow { cell: (x, y) });
            }
        }
    }
    let door_targets = add_door_candidates(plan, an);
    for &cell in &door_targets {
        moves.push(Mutation::AddDoor { cell });
    }
    let mut doors = Vec::new();
    for y in 0..plan.height() {
        for x in 0..plan.width() {
            if plan.cell(x, y) == CellLabel::Door {
                doors.push((x, y));
            }
        }
    }
    for &from in &doors {
        for &to in &door_targets {
            if to != from {
                moves.push(Mutation::MoveDoor { from, to });
            }
        }
    }
    for r in &an.rooms {
        for kind in RoomKind::ALL {
            if kind != r.kind {
                moves.push(Mutation::RelabelRoom {
                    room: r.id(),
                    kind,
                });
            }
        }
    }
    for (seg, _, _) in wall_runs(plan, an) {
        moves.push(Mutation::ShiftWall { segment: seg, delta: -1 });
        moves.push(Mutation::ShiftWall { segment: seg, delta: 1 });
    }
    // room-centric resize aliases: grow each room by one cell per side where
    // a suitable run exists
    for (seg, a, b) in wall_runs(plan, an) {
        let (dir_a, dir_b) = if seg.vertical {
            (Direction::East, Direction::West)
        } else {
            (Direction::South, Direction::North)
        };
        // growing room a moves the wall away from it (delta +1)
        moves.push(Mutation::ResizeRoom {
            room: an.rooms[a].id(),
            direction: dir_a,
            cells: 1,
        });
        moves.push(Mutation::ResizeRoom {
            room: an.rooms[b].id(),
            direction: dir_b,
            cells: 1,
        });
    }
    moves
}

fn free_instance(plan: &Floorplan, kind: RoomKind) -> Option<u8> {
    let mut used = [false; 10];
    for l in plan.grid() {
        if let CellLabel::Room { kind: k, instance } = l {
            if *k == kind {
                used[*instance as usize] = true;
            }
        }
    }
    used.iter().position(|&u| !u).map(|i| i as u8)
}

fn apply_mutation(
    plan: &Floorplan,
    an: &Analysis,
    m: &Mutation,
) -> Result<Floorplan, String> {
    let mut grid = plan.grid().to_vec();
    match m {
        Mutation::AddWindow { cell: (x, y) } => {
            grid[plan.idx(*x, *y)] = CellLabel::Window;
        }
        Mutation::RemoveWindow { cell: (x, y) } => {
            grid[plan.idx(*x, *y)] = CellLabel::Wall;
        }
        Mutation::AddDoor { cell: (x, y) } => {
            grid[plan.idx(*x, *y)] = CellLabel::Door;
        }
        Mutation::MoveDoor { from, to } => {
            grid[plan.idx(from.0, from.1)] = CellLabel::Wall;
            grid[plan.idx(to.0, to.1)] = CellLabel::Door;
        }
        Mutation::RelabelRoom { room, kind } => {
            let r = an
                .rooms
                .iter()
                .find(|r| &r.id() == room)
                .ok_or_else(|| format!("no room {room}"))?;
            let instance =
                free_instance(plan, *kind).ok_or_else(|| format!("no free {kind:?} slot"))?;
            for &(x, y) in &r.cells {
                grid[plan.idx(x, y)] = CellLabel::Room {
                    kind: *kind,
                    instance,
                };
            }
        }
        Mutation::ShiftWall { segment, delta } => {
            let runs = wall_runs(plan, an);
            let (seg, a, b) = runs
                .iter()
                .find(|(s, _, _)| s == segment)
                .ok_or_else(|| "segment no longer exists".to_string())?;
            return apply_shift(plan, an, seg, *a, *b, *delta);
        }
        Mutation::ResizeRoom { room, direction, .. } => {
            let runs = wall_runs(plan, an);
            // pick the longest run adjacent to this room on the given side
            let mut best: Option<(&WallSegment, usize, usize, i8)> = None;
            for (seg, a, b) in &runs {
                let (vertical, grow_delta, grower) = match direction {
                    Direction::East if seg.vertical => (true, 1i8, *a),
                    Direction::West if seg.vertical => (true, -1i8, *b),
                    Direction::South if !seg.vertical => (false, 1i8, *a),
                    Direction::North if !seg.vertical => (false, -1i8, *b),
                    _ => continue,
                };
                let _ = vertical;
                if an.rooms[grower].id() != *room {
                    continue;
                }
                let len = seg.end - seg.start;
                if best.map_or(true, |(s, _, _, _)| s.end - s.start < len) {
                    best = Some((seg, *a, *b, grow_delta));
                }
            }
            let (seg, a, b, delta) =
                best.ok_or_else(|| format!("no wall to shift for {room}"))?;
            return apply_shift(plan, an, seg, a, b, delta);
        }
    }
    plan.with_grid(grid).map_err(|e| e.to_string())
}

fn variant_key(m: &Mutation) -> u8 {
    match m {
        Mutation::ShiftWall { .. } => 0,
        Mutation::ResizeRoom { .. } => 1,
        Mutation::AddWindow { .. } => 2,
        Mutation::RemoveWindow { .. } => 3,
        Mutation::MoveDoor { .. } => 4,
        Mutation::RelabelRoom { .. } => 5,
        Mutation::AddDoor { .. } => 6,
    }
}

/// Samples one mutation (uniform over applicable mutation types, then
/// uniform within the type), applies it and re-validates. Rejected samples
/// are reported, not retried. Type-first sampling keeps rare move families
/// from being drowned out by combinatorially large ones.
pub fn mutate(plan: &Floorplan, seed: u64) -> Result<MutationOutcome, GenError> {
    let an = analyze(plan)?;
    let moves = enumerate_moves(plan, &an);
    if moves.is_empty() {
        return Err(GenError::NoApplicableMutation);
    }
    let mut rng = CounterRng::new(seed);
    let mut kinds: Vec<u8> = moves.iter().map(variant_key).collect();
    kinds.sort_unstable();
    kinds.dedup();
    let kind = kinds[rng.gen_range(kinds.len() as u64) as usize];
    let of_kind: Vec<&Mutation> = moves.iter().filter(|m| variant_key(m) == kind).collect();
    let mutation = of_kind[rng.gen_range(of_kind.len() as u64) as usize].clone();
    match apply_mutation(plan, &an, &mutation) {
        Ok(candidate) => {
            if exterior_mask(plan) != exterior_mask(&candidate) {
                return Ok(MutationOutcome::Rejected {
                    mutation,
                    reason: "exterior footprint changed".to_string(),
                });
            }
            Ok(MutationOutcome::Applied {
                plan: candidate,
                mutation,
            })
        }
        Err(reason) => Ok(MutationOutcome::Rejected { mutation, reason }),
    }
}
