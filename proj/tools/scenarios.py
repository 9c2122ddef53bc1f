#!/usr/bin/env python3
"""Writes the benchmark scenario files in ../scenarios.

The course is an open octagon-like loop of eight waypoints, 278 m long, with
alternating axis-aligned and diagonal legs. Obstacles are placed relative to
the legs so the layout can be reasoned about in course coordinates
(s along the leg, n to its left).
"""
import json
import math
import pathlib

WAYPOINTS = [(0.0, 0.0), (39.8, 0.0), (67.8, 28.0), (67.8, 67.8), (39.8, 95.8),
             (0.0, 95.8), (-28.0, 67.8), (-28.0, 28.0)]
BOUNDS = [-45.0, -15.0, 85.0, 110.0]
CUBE = 2.0
POCKET_WIDTH = 1
POCKET_DEPTH = 1


def leg(i):
    a, b = WAYPOINTS[i], WAYPOINTS[i + 1]
    d = (b[0] - a[0], b[1] - a[1])
    length = math.hypot(*d)
    return a, (d[0] / length, d[1] / length), length


def at(i, s, n):
    """World point s meters along leg i and n meters to its left."""
    a, t, _ = leg(i)
    return (a[0] + s * t[0] - n * t[1], a[1] + s * t[1] + n * t[0]), math.atan2(t[1], t[0])


def cylinder(i, s, n, r=1.0):
    (x, y), _ = at(i, s, n)
    return {"type": "cylinder", "pose": [round(x, 4), round(y, 4), 0.0], "size": [r, 2.0]}


def cube(i, s, n):
    (x, y), yaw = at(i, s, n)
    return {"type": "box", "pose": [round(x, 4), round(y, 4), round(yaw, 6)],
            "size": [CUBE, CUBE, CUBE]}


def pocket(i, s, offset, facing_travel=True, gap_cubes=POCKET_WIDTH, arm_cubes=POCKET_DEPTH):
    """U of cubes across leg i: a back wall centered `s` along the leg and
    `offset` to its left, plus two arms enclosing a pocket gap_cubes wide and
    arm_cubes deep. facing_travel puts the opening toward a robot driving the
    leg forward."""
    sign = 1.0 if facing_travel else -1.0
    half = (gap_cubes + 1) / 2.0
    wall = [offset + CUBE * (k - half) for k in range(gap_cubes + 2)]
    out = [cube(i, s, n) for n in wall]
    for a in range(1, arm_cubes + 1):
        out += [cube(i, s - sign * a * CUBE, n) for n in (wall[0], wall[-1])]
    return out


def scenario(name, obstacles):
    return {"name": name, "bounds": BOUNDS, "waypoints": [list(w) for w in WAYPOINTS],
            "obstacles": obstacles}


def main():
    out = pathlib.Path(__file__).resolve().parent.parent / "scenarios"
    out.mkdir(exist_ok=True)
    # Cylinders and convex cubes sit beside the course line, alternating
    # sides, so the straight path is free but the optimizer has to deflect.
    cylinders = []
    convex = []
    for i in range(len(WAYPOINTS) - 1):
        for k, s in enumerate((12.0, 26.0)):
            side = 1.0 if (i + k) % 2 == 0 else -1.0
            cylinders.append(cylinder(i, s, side * 1.6))
            convex.append(cube(i, s, side * 1.7))
    nonconvex = []
    # U pockets centered on the course line halfway along every other leg,
    # two opening toward forward travel and two toward backward travel.
    for i, forward in ((0, True), (2, False), (4, True), (6, False)):
        _, _, length = leg(i)
        nonconvex += pocket(i, length / 2, 0.0, facing_travel=forward)
    scenarios = {
        "free": [],
        "cylinders": cylinders,
        "cubes_convex": convex,
        "cubes_nonconvex": nonconvex,
    }
    for name, obstacles in scenarios.items():
        path = out / f"{name}.json"
        path.write_text(json.dumps(scenario(name, obstacles), indent=2) + "\n")
        print(path)


if __name__ == "__main__":
    main()
