#!/usr/bin/env python3
"""Independent oracles for the frozen expectations in the C++ tests.

Nothing here imports the library: counts come from brute-force loops over
cell centres, scores from exact rational arithmetic. Rerun after changing a
fixture and paste the printed values into the tests.
"""

import json
import math
from fractions import Fraction
from pathlib import Path

import numpy as np

DATA = Path(__file__).resolve().parents[2] / "data"

BONES = [("head", "neck"), ("neck", "l_shoulder"), ("neck", "r_shoulder"), ("l_shoulder", "l_elbow"),
         ("l_elbow", "l_wrist"), ("r_shoulder", "r_elbow"), ("r_elbow", "r_wrist"), ("neck", "pelvis"),
         ("pelvis", "l_hip"), ("pelvis", "r_hip"), ("l_hip", "l_knee"), ("l_knee", "l_ankle"),
         ("r_hip", "r_knee"), ("r_knee", "r_ankle")]


def f1(tp, fp, fn, tn, uo, uf):
    d = 2 * tp + fp + fn + uf + uo
    return Fraction(1) if d == 0 else Fraction(2 * tp, d)


def kappa(tp, fp, fn, tn, uo, uf):
    s = tp + fp + fn + tn + uo + uf
    p = (tp + fp, tn + fn, uo + uf)
    t = (tp + fn + uo, fp + tn + uf, 0)
    chance = sum(a * b for a, b in zip(p, t))
    den = s * s - chance
    if den == 0:
        return Fraction(1) if tp + tn == s else Fraction(0)
    return Fraction(s * (tp + tn) - chance, den)


# (tp, fp, fn, tn, uo, uf)
CONFUSIONS = [
    (40, 5, 5, 40, 0, 10),      # worked example
    (2, 1, 1, 0, 2, 0),
    (100, 0, 0, 0, 0, 0),
    (0, 0, 0, 100, 0, 0),
    (0, 0, 0, 0, 30, 70),
    (0, 0, 0, 0, 0, 50),
    (50, 50, 0, 0, 0, 0),
    (25, 25, 25, 25, 0, 0),
    (0, 10, 10, 0, 0, 0),
    (10, 0, 0, 10, 0, 0),
    (1, 0, 0, 0, 0, 0),
    (0, 1, 0, 0, 0, 0),
    (0, 0, 1, 0, 0, 0),
    (0, 0, 0, 0, 1, 0),
    (3, 7, 11, 13, 17, 19),
    (350, 9650, 0, 0, 0, 0),
    (67, 95, 40, 4000, 309, 7363),
    (123456, 7890, 1234, 987654, 4321, 56789),
    (0, 0, 5, 5, 0, 0),
    (5, 0, 0, 0, 0, 5),
    (1, 2, 3, 4, 5, 6),
    (1000, 1, 1, 1000, 1, 1),
]


def metric_table():
    print("// tp, fp, fn, tn, uo, uf, f1, kappa")
    for c in CONFUSIONS:
        print("{%d, %d, %d, %d, %d, %d, %r, %r}," % (*c, float(f1(*c)), float(kappa(*c))))


def centres(origin, res, dims):
    axes = [origin[a] + res * (np.arange(dims[a]) + 0.5) for a in range(3)]
    z, y, x = np.meshgrid(axes[2], axes[1], axes[0], indexing="ij")
    return x.ravel(), y.ravel(), z.ravel()


def dims_of(lo, hi, res):
    return [max(1, math.ceil((hi[a] - lo[a]) / res - 1e-9)) for a in range(3)]


def seg_dist(px, py, pz, a, b):
    ab = np.subtract(b, a)
    l2 = float(ab @ ab)
    t = np.clip(((px - a[0]) * ab[0] + (py - a[1]) * ab[1] + (pz - a[2]) * ab[2]) / l2, 0.0, 1.0)
    dx, dy, dz = px - (a[0] + t * ab[0]), py - (a[1] + t * ab[1]), pz - (a[2] + t * ab[2])
    return np.sqrt(dx * dx + dy * dy + dz * dz)


def sphere_count():
    res = 0.05
    g = np.arange(-5, 6) * res
    x, y, z = np.meshgrid(g, g, g)
    print("sphere r=0.1 on a cell centre:", int(((x * x + y * y + z * z) <= 0.1 * 0.1).sum()))


def cylinder_count():
    # Keypoints (0.5125, 0.5, 0.5) and (0.9125, 0.5, 0.5) in a 1 m box, res 0.05, r 0.05.
    res = 0.05
    x, y, z = centres([0, 0, 0], res, [20, 20, 20])
    a, b = (0.5125, 0.5, 0.5), (0.9125, 0.5, 0.5)
    ab = np.subtract(b, a)
    t = ((x - a[0]) * ab[0] + (y - a[1]) * ab[1] + (z - a[2]) * ab[2]) / float(ab @ ab)
    dx, dy, dz = x - (a[0] + t * ab[0]), y - (a[1] + t * ab[1]), z - (a[2] + t * ab[2])
    inside = (t >= 0) & (t <= 1) & (dx * dx + dy * dy + dz * dz <= 0.05 * 0.05)
    print("cylinder 0.4 m, r 0.05:", int(inside.sum()))


def robot_roi_count(name):
    doc = json.loads((DATA / name).read_text())
    res = 0.05
    lo, hi = doc["workspace"]["min"], doc["workspace"]["max"]
    x, y, z = centres(lo, res, dims_of(lo, hi, res))
    c = doc["robot"]["base"]["position"]
    r = doc["robot"]["reach"]
    d2 = (x - c[0]) ** 2 + (y - c[1]) ** 2 + (z - c[2]) ** 2
    n = int(((d2 <= r * r) & (z >= c[2])).sum())
    print(f"{name} robot ROI cells at 0.05: {n} (half-sphere volume / cell = {2 / 3 * math.pi * r ** 3 / res ** 3:.1f})")


def pads_fixture():
    doc = json.loads((DATA / "pads.json").read_text())
    res = 0.05
    lo, hi = doc["workspace"]["min"], doc["workspace"]["max"]
    x, y, z = centres(lo, res, dims_of(lo, hi, res))
    human = doc["humans"][0]
    kp = human["keypoints"]
    occ = np.zeros_like(x, dtype=bool)
    for a, b in BONES:
        occ |= seg_dist(x, y, z, kp[a], kp[b]) <= human["limb_radius"]
    h = kp["head"]
    occ |= (x - h[0]) ** 2 + (y - h[1]) ** 2 + (z - h[2]) ** 2 <= human["head_radius"] ** 2
    link = doc["robot"]["links"][0]
    a, b = np.array(link["a"]), np.array(link["b"])
    ab = b - a
    t = ((x - a[0]) * ab[0] + (y - a[1]) * ab[1] + (z - a[2]) * ab[2]) / float(ab @ ab)
    dx, dy, dz = x - (a[0] + t * ab[0]), y - (a[1] + t * ab[1]), z - (a[2] + t * ab[2])
    occ |= (t >= 0) & (t <= 1) & (dx * dx + dy * dy + dz * dz <= link["radius"] ** 2)

    def prism(cx, cy, z_hi):
        hx, hy = 0.5 * 1.0, 0.5 * 0.75
        return (x >= cx - hx) & (x <= cx + hx) & (y >= cy - hy) & (y <= cy + hy) & (z >= 0.0) & (z <= z_hi)

    pred = np.zeros_like(x, dtype=np.int8)  # 0 unknown, 1 free, 2 occupied
    for cx, cy in ((1.0, 0.99), (2.0, 0.79)):
        active = bool((prism(cx, cy, 0.1) & occ).any())
        pred = np.maximum(pred, np.where(prism(cx, cy, hi[2]), 2 if active else 1, 0).astype(np.int8))
        print(f"pad ({cx}, {cy}) active: {active}")

    pts = np.array([kp[j] for j in kp])
    margin = max(human["limb_radius"], human["head_radius"]) + 0.05
    bmin, bmax = pts.min(axis=0) - margin, pts.max(axis=0) + margin
    roi = (x >= bmin[0]) & (x <= bmax[0]) & (y >= bmin[1]) & (y <= bmax[1]) & (z >= bmin[2]) & (z <= bmax[2])
    a_pr, b_pr = prism(1.0, 0.99, hi[2]), prism(2.0, 0.79, hi[2])

    def tally(mask):
        p, t = pred[mask], occ[mask]
        return dict(tp=int(((p == 2) & t).sum()), fp=int(((p == 2) & ~t).sum()), fn=int(((p == 1) & t).sum()),
                    tn=int(((p == 1) & ~t).sum()), uo=int(((p == 0) & t).sum()), uf=int(((p == 0) & ~t).sum()))

    print("pads human ROI:", tally(roi))
    print("  in A:", tally(roi & a_pr))
    print("  in B:", tally(roi & b_pr))
    print("  outside both:", int((roi & ~a_pr & ~b_pr).sum()))


if __name__ == "__main__":
    metric_table()
    sphere_count()
    cylinder_count()
    for n in ("scene1.json", "scene2.json", "scene3.json"):
        robot_roi_count(n)
    pads_fixture()
