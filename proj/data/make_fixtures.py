#!/usr/bin/env python3
"""Regenerates the bundled scene fixtures (scene*.json, walk.json, pads.json).

All scenes share one desk-scale room: 4.0 x 3.5 x 3.0 m, a table in the
middle with a small arm mounted on its top. Coordinates are metres, z up.
"""

import json
import math
from pathlib import Path

HERE = Path(__file__).resolve().parent

ROOM = {"min": [0.0, 0.0, 0.0], "max": [4.0, 3.5, 3.0]}
TABLE_TOP_Z = 0.75
TABLE_CENTER = (2.0, 1.75)
TABLE_HALF = (0.6, 0.4)
BASE = (2.0, 1.55, TABLE_TOP_Z)
REACH = 0.9


def box(center, half):
    return {"type": "box", "center": r3(center), "half_extents": r3(half)}


def table():
    cx, cy = TABLE_CENTER
    hx, hy = TABLE_HALF
    top = box((cx, cy, TABLE_TOP_Z - 0.025), (hx, hy, 0.025))
    legs = []
    for sx in (-1, 1):
        for sy in (-1, 1):
            legs.append(box((cx + sx * (hx - 0.05), cy + sy * (hy - 0.05), (TABLE_TOP_Z - 0.05) / 2),
                            (0.03, 0.03, (TABLE_TOP_Z - 0.05) / 2)))
    return [top] + legs


def r3(v):
    return [round(c, 4) for c in v]


def robot(yaw_deg=0.0, lift=0.0):
    """Three-link arm on the table; yaw turns the arm about the base axis."""
    bx, by, bz = BASE
    c, s = math.cos(math.radians(yaw_deg)), math.sin(math.radians(yaw_deg))

    def at(radial, z):
        return r3((bx + c * radial, by + s * radial, bz + z))

    shoulder = at(0.0, 0.20)
    elbow = at(0.0, 0.60)
    wrist = at(0.35, 0.70 + lift)
    tool = at(0.55, 0.55 + lift)
    links = [
        {"type": "cylinder", "a": r3((bx, by, bz)), "b": shoulder, "radius": 0.08},
        {"type": "capsule", "a": shoulder, "b": elbow, "radius": 0.06},
        {"type": "capsule", "a": elbow, "b": wrist, "radius": 0.05},
        {"type": "capsule", "a": wrist, "b": tool, "radius": 0.04},
    ]
    return {"base": {"position": list(BASE), "orientation": [1, 0, 0, 0]}, "reach": REACH, "links": links}


def human(name, foot, heading_deg, lean_deg=0.0, arms=None, sit=False):
    """Standing (or seated) skeleton at `foot`, facing `heading_deg` from +x.

    `arms` overrides joints with world coordinates.
    """
    h = math.radians(heading_deg)
    fwd = (math.cos(h), math.sin(h))
    left = (-fwd[1], fwd[0])

    def world(lateral, forward, z):
        return (foot[0] + lateral * left[0] + forward * fwd[0], foot[1] + lateral * left[1] + forward * fwd[1], z)

    k = {}
    if sit:
        k["l_ankle"], k["r_ankle"] = world(0.1, 0.45, 0.08), world(-0.1, 0.45, 0.08)
        k["l_knee"], k["r_knee"] = world(0.1, 0.45, 0.48), world(-0.1, 0.45, 0.48)
        k["l_hip"], k["r_hip"] = world(0.1, 0.0, 0.48), world(-0.1, 0.0, 0.48)
        pelvis_z = 0.50
    else:
        k["l_ankle"], k["r_ankle"] = world(0.1, 0.0, 0.08), world(-0.1, 0.0, 0.08)
        k["l_knee"], k["r_knee"] = world(0.1, 0.0, 0.50), world(-0.1, 0.0, 0.50)
        k["l_hip"], k["r_hip"] = world(0.1, 0.0, 0.92), world(-0.1, 0.0, 0.92)
        pelvis_z = 0.95
    k["pelvis"] = world(0.0, 0.0, pelvis_z)
    a = math.radians(lean_deg)
    torso = 0.50
    neck_f, neck_z = torso * math.sin(a), pelvis_z + torso * math.cos(a)
    k["neck"] = world(0.0, neck_f, neck_z)
    k["head"] = world(0.0, neck_f + 0.2 * math.sin(a), neck_z + 0.2 * math.cos(a))
    sh_f, sh_z = neck_f - 0.03 * math.sin(a), neck_z - 0.03 * math.cos(a)
    k["l_shoulder"], k["r_shoulder"] = world(0.2, sh_f, sh_z), world(-0.2, sh_f, sh_z)
    k["l_elbow"], k["r_elbow"] = world(0.22, sh_f, sh_z - 0.28), world(-0.22, sh_f, sh_z - 0.28)
    k["l_wrist"], k["r_wrist"] = world(0.24, sh_f + 0.05, sh_z - 0.54), world(-0.24, sh_f + 0.05, sh_z - 0.54)
    for joint, p in (arms or {}).items():
        k[joint] = p
    return {"name": name, "limb_radius": 0.07, "head_radius": 0.11, "keypoints": {j: r3(p) for j, p in k.items()}}


def reaching_human():
    # In front of the table (y < 1.35), right hand reaching toward the arm.
    return human("reacher", (2.25, 0.80), 90.0, lean_deg=10.0,
                 arms={"r_elbow": (2.08, 1.10, 1.20), "r_wrist": (2.02, 1.38, 1.05)})


def leaning_human():
    # Beside the table, leaning over it with both hands near the robot.
    return human("leaner", (1.15, 1.75), 0.0, lean_deg=35.0,
                 arms={"l_elbow": (1.55, 1.95, 1.10), "l_wrist": (1.80, 1.80, 0.86),
                       "r_elbow": (1.55, 1.52, 1.10), "r_wrist": (1.80, 1.58, 0.88)})


def seated_worker():
    # Works at a bench behind the leaning human as seen from the left wall.
    return human("worker", (0.55, 1.70), 180.0, sit=True,
                 arms={"l_elbow": (0.40, 1.50, 0.85), "l_wrist": (0.25, 1.55, 0.82),
                       "r_elbow": (0.40, 1.90, 0.85), "r_wrist": (0.25, 1.85, 0.82)})


def scene(name, humans, extra_statics=(), rob=None):
    return {"name": name, "workspace": ROOM, "statics": table() + list(extra_statics), "robot": rob or robot(),
            "humans": humans}


def walk():
    """27 snapshots: a person walks in from the door, reaches, and leaves
    while the arm sweeps its yaw."""
    snaps = []
    path = []
    for i in range(27):
        t = i / 26.0
        if t < 0.4:  # approach from the front-left corner
            u = t / 0.4
            path.append(((0.5 + 1.6 * u, 0.5 + 0.2 * u), 60.0 - 30.0 * u, False))
        elif t < 0.7:  # reach over the table
            path.append(((2.1, 0.75), 90.0, True))
        else:  # leave toward the right
            u = (t - 0.7) / 0.3
            path.append(((2.1 + 1.4 * u, 0.75 - 0.2 * u), 0.0 - 20.0 * u, False))
    for i, (foot, heading, reach) in enumerate(path):
        arms = None
        if reach:
            arms = {"r_elbow": (1.95, 1.05, 1.20), "r_wrist": (1.95, 1.35, 1.02)}
        yaw = -60.0 + 120.0 * i / 26.0
        snaps.append({"robot": robot(yaw_deg=yaw, lift=0.05 * math.sin(i / 4.0)),
                      "humans": [human("walker", foot, heading, lean_deg=15.0 if reach else 0.0, arms=arms)]})
    return {"name": "walk", "workspace": ROOM, "statics": table(), "snapshots": snaps}


def pads():
    """Small room for pad semantics: the person stands on pad A, right arm
    stretched out over pad B; the robot sits in the far corner."""
    room = {"min": [0.0, 0.0, 0.0], "max": [3.0, 2.0, 2.5]}
    person = human("stander", (1.0, 1.0), 0.0,
                   arms={"r_shoulder": (1.0, 0.8, 1.42), "r_elbow": (1.4, 0.8, 1.40),
                         "r_wrist": (1.9, 0.8, 1.38)})
    rob = {"base": {"position": [2.7, 1.7, 0.0], "orientation": [1, 0, 0, 0]}, "reach": 0.3,
           "links": [{"type": "cylinder", "a": [2.7, 1.7, 0.0], "b": [2.7, 1.7, 0.25], "radius": 0.05}]}
    return {"name": "pads", "workspace": room, "statics": [], "robot": rob, "humans": [person]}


def main():
    fixtures = {
        "scene1.json": scene("scene1", [reaching_human()]),
        "scene2.json": scene("scene2", [leaning_human()]),
        "scene3.json": scene("scene3", [leaning_human(), seated_worker()],
                             extra_statics=[box((0.20, 1.70, 0.72), (0.18, 0.5, 0.02))]),
        "walk.json": walk(),
        "pads.json": pads(),
    }
    for name, doc in fixtures.items():
        (HERE / name).write_text(json.dumps(doc, indent=1) + "\n")


if __name__ == "__main__":
    main()
