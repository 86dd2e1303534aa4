"""Built-in self checks: each suite compares the engine against a slower,
independently written oracle and reports pass/fail with timings.

The suites deliberately re-derive expected results from first principles
(exhaustive scans, brute-force distance checks) rather than calling back
into the code under test, so a shared bug cannot hide.
"""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass

import numpy as np

from . import canvas as canvaslib
from .canvas import BrushStamp, create_canvas, rasterize_stamp
from .errors import PendingStampWarning
from .geometry import DEFAULT_MAX_T, Mesh, Ray, build_accel, ray_intersect
from .relation import DEFAULT_F, MarkerPoint, RelationGroup, RelationSet, fill, lookup_groups
from .shapes import lat_long_sphere, unit_quad

#: f sweep exercised by the threshold matrix (matches the reference study).
F_SWEEP = (0.1, 0.5, 1.0, 3.0, 5.0, 8.0, 10.0, 20.0, 50.0, 100.0, 1000.0)

_SEED = 20260823


@dataclass
class SuiteResult:
    name: str
    ok: bool
    detail: str
    elapsed: float


def exhaustive_raycast(mesh: Mesh, origin, direction, max_t: float = DEFAULT_MAX_T):
    """Closest hit by testing every triangle with vectorized Möller-Trumbore.

    Completely independent of the BVH path; ties on t resolve to the lowest
    triangle index, the same contract ray_intersect promises.  Returns
    (triangle_index, t) or None.
    """
    origin = np.asarray(origin, dtype=np.float64)
    direction = np.asarray(direction, dtype=np.float64)
    direction = direction / np.linalg.norm(direction)
    v0 = mesh.vertices[mesh.triangles[:, 0]]
    e1 = mesh.vertices[mesh.triangles[:, 1]] - v0
    e2 = mesh.vertices[mesh.triangles[:, 2]] - v0
    pvec = np.cross(direction[None, :], e2)
    det = np.einsum("ij,ij->i", e1, pvec)
    valid = np.abs(det) > 1e-12
    safe_det = np.where(valid, det, 1.0)
    inv_det = 1.0 / safe_det
    tvec = origin[None, :] - v0
    u = np.einsum("ij,ij->i", tvec, pvec) * inv_det
    qvec = np.cross(tvec, e1)
    v = (qvec @ direction) * inv_det
    t = np.einsum("ij,ij->i", e2, qvec) * inv_det
    valid &= (u >= -1e-9) & (v >= -1e-9) & (u + v <= 1.0 + 1e-9)
    valid &= (t > 0.0) & (t <= max_t)
    if not valid.any():
        return None
    candidates = np.flatnonzero(valid)
    order = np.lexsort((candidates, t[candidates]))
    best = candidates[order[0]]
    return int(best), float(t[best])


def _random_rays(rng: np.random.Generator, count: int, spread: float = 1.2):
    """Rays from a shell around the origin aimed near (not always at) it."""
    origins = rng.normal(size=(count, 3))
    origins /= np.linalg.norm(origins, axis=1, keepdims=True)
    origins *= 3.0
    targets = rng.uniform(-spread, spread, size=(count, 3))
    directions = targets - origins
    return origins, directions


def check_raycast(rays_per_mesh: int = 1500) -> tuple[bool, str]:
    rng = np.random.default_rng(_SEED)
    mismatches = 0
    checked = 0
    for mesh in (lat_long_sphere(), unit_quad()):
        accel = build_accel(mesh)
        origins, directions = _random_rays(rng, rays_per_mesh)
        for origin, direction in zip(origins, directions):
            expected = exhaustive_raycast(mesh, origin, direction)
            hit = ray_intersect(mesh, accel, Ray(origin, direction))
            checked += 1
            if expected is None:
                mismatches += hit is not None
            elif hit is None:
                mismatches += 1
            else:
                index, t = expected
                if hit.triangle_index != index or abs(hit.t - t) > 1e-6:
                    mismatches += 1
    return mismatches == 0, f"{checked} rays, {mismatches} disagree with exhaustive scan"


def check_disc_coverage(trials: int = 120) -> tuple[bool, str]:
    rng = np.random.default_rng(_SEED + 1)
    size = 96
    yy, xx = np.mgrid[0:size, 0:size]
    bad = 0
    for _ in range(trials):
        radius = int(rng.integers(1, 33))
        # Bias centers toward edges so clipping paths get exercised too.
        cx = int(rng.integers(-radius, size + radius))
        cy = int(rng.integers(-radius, size + radius))
        color = tuple(int(c) for c in rng.integers(0, 256, size=3)) + (255,)
        buffer = create_canvas(size, size).base
        rasterize_stamp(buffer, BrushStamp((cx, cy), radius, color))
        inside = (xx - cx) ** 2 + (yy - cy) ** 2 <= radius * radius
        expect = np.empty_like(buffer)
        expect[:] = canvaslib.WHITE
        expect[inside] = color
        bad += not np.array_equal(buffer, expect)
    return bad == 0, f"{trials} stamps, {bad} differ from per-pixel distance test"


def check_lookup(trials: int = 400) -> tuple[bool, str]:
    rng = np.random.default_rng(_SEED + 2)
    size = (512, 512)
    relations = RelationSet(size, size, f=DEFAULT_F)
    for gid in range(40):
        pics = [MarkerPoint((int(rng.integers(0, 512)), int(rng.integers(0, 512))),
                            int(rng.integers(1, 33))) for _ in range(rng.integers(1, 4))]
        words = [MarkerPoint((int(rng.integers(0, 512)), int(rng.integers(0, 512))),
                             int(rng.integers(1, 33))) for _ in range(rng.integers(1, 4))]
        relations.groups.append(RelationGroup(id=gid, pic_points=pics, word_points=words))
    bad = 0
    for _ in range(trials):
        pos = (int(rng.integers(0, 512)), int(rng.integers(0, 512)))
        got = lookup_groups(relations, pos)
        want = []
        for g in relations.groups:
            if any((p.position[0] - pos[0]) ** 2 + (p.position[1] - pos[1]) ** 2
                   < relations.f ** 2 for p in g.pic_points):
                want.append(g.id)
        bad += got != sorted(want)
    return bad == 0, f"{trials} lookups, {bad} differ from brute force"


def _one_group_set(f: float, pic, word=(10, 10)) -> RelationSet:
    relations = RelationSet((256, 256), (256, 256), f=f)
    relations.groups.append(RelationGroup(
        id=0, pic_points=[MarkerPoint(pic, 4)], word_points=[MarkerPoint(word, 4)]))
    relations._next_id = 1
    return relations


def check_f_threshold(f_values=F_SWEEP) -> tuple[bool, str]:
    """The threshold matrix: strict "< f" matching at controlled distances."""
    failures = []
    red = (255, 0, 0, 255)
    for f in f_values:
        relations = _one_group_set(float(f), pic=(100, 100))
        img = create_canvas(256, 256)
        uv = create_canvas(256, 256)
        matched = fill(relations, (102, 100), red, img, uv)  # distance 2
        if (len(matched) == 1) != (f > 2):
            failures.append(f"f={f}: distance-2 fill {'matched' if matched else 'missed'}")
    for distance, want in ((7, True), (8, False), (9, False)):
        relations = _one_group_set(8.0, pic=(100, 100))
        img = create_canvas(256, 256)
        uv = create_canvas(256, 256)
        matched = fill(relations, (100 + distance, 100), red, img, uv)
        if bool(matched) != want:
            failures.append(f"f=8 distance {distance}: expected {'hit' if want else 'miss'}")
    # Two groups 40 px apart: a generous f catches both, the standard f one.
    for f, want_count in ((50.0, 2), (8.0, 1)):
        relations = _one_group_set(f, pic=(100, 100))
        relations.groups.append(RelationGroup(
            id=1, pic_points=[MarkerPoint((140, 100), 4)],
            word_points=[MarkerPoint((20, 20), 4)]))
        relations._next_id = 2
        img = create_canvas(256, 256)
        uv = create_canvas(256, 256)
        matched = fill(relations, (101, 100), red, img, uv)
        if len(matched) != want_count:
            failures.append(f"f={f} two groups: matched {len(matched)}, wanted {want_count}")
    if failures:
        return False, "; ".join(failures)
    return True, f"{len(f_values)} f values plus boundary and overlap cases"


def check_stamp_timing(count: int = 6000, budget: float = 2.0) -> tuple[bool, str]:
    rng = np.random.default_rng(_SEED + 3)
    target = create_canvas(1024, 1024)
    centers = rng.integers(0, 1024, size=(count, 2))
    radii = rng.integers(1, 33, size=count)
    colors = rng.integers(0, 256, size=(count, 3))
    start = time.perf_counter()
    warned_at = None
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        for i in range(count):
            canvaslib.add_pending_stamp(target, BrushStamp(
                (int(centers[i, 0]), int(centers[i, 1])), int(radii[i]),
                tuple(int(c) for c in colors[i]) + (255,)))
            if caught and warned_at is None:
                warned_at = i + 1
    composited = canvaslib.composite(target)
    elapsed = time.perf_counter() - start
    problems = []
    if elapsed >= budget:
        problems.append(f"{count} stamps + composite took {elapsed:.2f}s (budget {budget}s)")
    if warned_at != target.warn_threshold + 1:
        problems.append(f"warning at stamp {warned_at}, expected {target.warn_threshold + 1}")
    if sum(issubclass(w.category, PendingStampWarning) for w in caught) != 1:
        problems.append("expected exactly one pending-stamp warning")
    if composited.shape != (1024, 1024, 4):
        problems.append("composite shape wrong")
    if problems:
        return False, "; ".join(problems)
    return True, f"{count} stamps + composite in {elapsed:.2f}s, warning at {warned_at}"


SUITES = {
    "raycast": check_raycast,
    "disc": check_disc_coverage,
    "lookup": check_lookup,
    "f-threshold": check_f_threshold,
    "stamps": check_stamp_timing,
}


def run_suites(names=None, f_override: float | None = None) -> list[SuiteResult]:
    """Run the named suites (all by default) and collect results.

    f_override replaces the f sweep in the threshold suite; values that
    violate the f > 0 contract make that suite fail, which is the intended
    way to prove the check is live.
    """
    selected = list(SUITES) if names is None else list(names)
    results = []
    for name in selected:
        if name not in SUITES:
            raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
        runner = SUITES[name]
        if name == "f-threshold" and f_override is not None:
            runner = lambda: check_f_threshold((f_override,))
        start = time.perf_counter()
        try:
            ok, detail = runner()
        except Exception as exc:
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(SuiteResult(name, ok, detail, time.perf_counter() - start))
    return results


def format_table(results) -> str:
    width = max(len(r.name) for r in results)
    lines = []
    for r in results:
        status = "PASS" if r.ok else "FAIL"
        lines.append(f"{r.name:<{width}}  {status}  {r.elapsed:6.2f}s  {r.detail}")
    return "\n".join(lines)
