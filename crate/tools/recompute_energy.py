#!/usr/bin/env python3
"""Independent recomputation of the monthly energy profile for a .fpgrid plan.

Used to produce (and cross-check) the golden energy fixture. Deliberately
shares no code with the Rust implementation.

Usage: recompute_energy.py plan.fpgrid params.json climate.json
Prints a JSON object: {"profile": 12x5 kWh matrix, "eui": ..., "floor_area": ...}
"""

import json
import sys

DAYS = [31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31]
KIND_BY_LETTER = {
    "L": "LivingRoom",
    "B": "Bedroom",
    "K": "Kitchen",
    "T": "Bathroom",
    "A": "Balcony",
    "D": "DiningRoom",
    "S": "Storage",
    "C": "Corridor",
}


def load_plan(path):
    with open(path, encoding="utf-8") as f:
        header = json.loads(f.readline())
        rows = [line.rstrip("\n").split(" ") for line in f if line.strip()]
    w, h = header["width"], header["height"]
    assert len(rows) == h and all(len(r) == w for r in rows)
    return header, rows


def exterior_facing(rows, x, y):
    w, h = len(rows[0]), len(rows)
    if x in (0, w - 1) or y in (0, h - 1):
        return True
    return any(
        rows[ny][nx] == ".."
        for nx, ny in ((x - 1, y), (x + 1, y), (x, y - 1), (x, y + 1))
    )


def main():
    plan_path, params_path, climate_path = sys.argv[1:4]
    header, rows = load_plan(plan_path)
    params = json.load(open(params_path))
    climate = json.load(open(climate_path))

    scale = header.get("scale", 0.0703125)
    wall_height = header.get("wall_height", 2.8)

    ext_walls = ext_windows = 0
    room_area = {}  # kind -> m^2
    for y, row in enumerate(rows):
        for x, tok in enumerate(row):
            if tok == "##" and exterior_facing(rows, x, y):
                ext_walls += 1
            elif tok == "WN" and exterior_facing(rows, x, y):
                ext_windows += 1
            elif tok[0] in KIND_BY_LETTER and tok[1].isdigit():
                kind = KIND_BY_LETTER[tok[0]]
                room_area[kind] = room_area.get(kind, 0.0) + scale * scale

    window_area = ext_windows * scale * params["window_height"]
    wall_area = ext_walls * scale * wall_height - window_area
    floor_area = sum(room_area.values())

    ua = params["u_wall"] * wall_area + params["u_window"] * window_area
    light_w = sum(params["lighting_pd"][k] * a for k, a in room_area.items())
    equip_w = sum(params["equipment_pd"][k] * a for k, a in room_area.items())
    wet = room_area.get("Kitchen", 0.0) + room_area.get("Bathroom", 0.0)
    eta = params["gain_utilization"]

    profile = []
    for m in range(12):
        cl = climate["months"][m]
        days = DAYS[m]
        lighting = light_w * params["hours_lighting"] * days / 1000.0
        equipment = equip_w * params["hours_equipment"] * days / 1000.0
        q_int = lighting + equipment
        q_sol = window_area * cl["solar"] * params["shgc"]
        heating = max(0.0, ua * cl["hdd"] * 24.0 / 1000.0 - eta * (q_int + q_sol))
        heating /= params["eff_heating"]
        season = cl["cdd"] + cl["hdd"]
        sol_w = cl["cdd"] / season if season > 0.0 else cl["cdd"]
        cooling = (
            ua * cl["cdd"] * 24.0 / 1000.0 + (1.0 - eta) * q_int + q_sol * sol_w
        ) / params["cop_cooling"]
        cooling = max(0.0, cooling)
        hot_water = params["hot_water"] * wet * days / 365.0
        profile.append([heating, cooling, lighting, equipment, hot_water])

    total = sum(sum(row) for row in profile)
    print(
        json.dumps(
            {
                "profile": profile,
                "eui": total / floor_area,
                "floor_area": floor_area,
            },
            indent=2,
        )
    )


if __name__ == "__main__":
    main()
