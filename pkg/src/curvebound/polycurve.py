"""Piecewise geodesic curves: validation, turning angles, total curvature.

A polygonal curve is an ordered vertex list joined by minimizing geodesic
segments of its ambient space form.  Open curves are first class: endpoint
vertices carry no turning angle.  Total curvature is the sum of exterior
angles; a cusp (exterior angle pi) is reported as a flag, not an error.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import GeometryError
from .spaceform import (
    Isometry,
    Kind,
    Point,
    SpaceForm,
    _dist_can,
    _interp_can,
    dist_arrays,
    embed,
    unembed,
    vertex_angle_arrays,
)

SIMPLE_TOL = 1e-9
MINIMIZING_TOL = 1e-8


@dataclass
class PolygonalCurve:
    """Ordered vertices in model coords, joined by geodesic segments."""

    space: SpaceForm
    vertices: np.ndarray  # (k, ambient_dim) in space.model coordinates
    closed: bool = True

    def __post_init__(self):
        self.vertices = np.atleast_2d(np.asarray(self.vertices, dtype=float))
        if self.vertices.shape[-1] != self.space.ambient_dim:
            raise GeometryError(
                f"vertex coords have length {self.vertices.shape[-1]}, "
                f"expected {self.space.ambient_dim}"
            )

    @classmethod
    def from_points(cls, points: list[Point], closed: bool = True) -> "PolygonalCurve":
        if not points:
            raise GeometryError("empty vertex list")
        space = points[0].space
        for p in points[1:]:
            if p.space != space:
                raise GeometryError("all vertices must share one space form")
        return cls(space, np.stack([p.coords for p in points]), closed)

    @property
    def k(self) -> int:
        return self.vertices.shape[0]

    @property
    def n_segments(self) -> int:
        return self.k if self.closed else self.k - 1

    def point(self, i: int) -> Point:
        return Point(self.vertices[i], self.space)

    def segment(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        j = (i + 1) % self.k
        return self.vertices[i], self.vertices[j]

    def segment_lengths(self) -> np.ndarray:
        v = self.vertices
        w = np.roll(v, -1, axis=0) if self.closed else v[1:]
        v = v if self.closed else v[:-1]
        return dist_arrays(self.space, v, w)

    def length(self) -> float:
        return float(np.sum(self.segment_lengths()))

    def apply_isometry(self, iso: Isometry) -> "PolygonalCurve":
        return PolygonalCurve(self.space, iso.apply(self.vertices), self.closed)


@dataclass
class SphericalPolygon:
    """Unit vectors joined by minor great-circle arcs."""

    vertices: np.ndarray  # (k, n) unit vectors
    closed: bool = True

    def __post_init__(self):
        self.vertices = np.atleast_2d(np.asarray(self.vertices, dtype=float))
        norms = np.linalg.norm(self.vertices, axis=-1)
        if np.any(np.abs(norms - 1.0) > 1e-6):
            raise GeometryError("spherical polygon vertices must be unit vectors")


@dataclass
class SimplicityReport:
    simple: bool
    violations: list[str] = field(default_factory=list)


# ---------------------------------------------------------------------------
# segment/segment and point/segment distances
# ---------------------------------------------------------------------------


def _segseg_euclid(p1, q1, p2, q2) -> np.ndarray:
    """Min distance between segments [p1,q1] and [p2,q2]; batch friendly."""
    p1, q1, p2, q2 = (np.asarray(a, dtype=float) for a in (p1, q1, p2, q2))
    d1 = q1 - p1
    d2 = q2 - p2
    r = p1 - p2
    a = np.sum(d1 * d1, axis=-1)
    e = np.sum(d2 * d2, axis=-1)
    f = np.sum(d2 * r, axis=-1)
    c = np.sum(d1 * r, axis=-1)
    b = np.sum(d1 * d2, axis=-1)
    den = a * e - b * b
    s = np.where(den > 1e-30, (b * f - c * e) / np.where(den > 1e-30, den, 1.0), 0.0)
    s = np.clip(s, 0.0, 1.0)
    t = np.where(e > 1e-30, (b * s + f) / np.where(e > 1e-30, e, 1.0), 0.0)
    t_clamped = np.clip(t, 0.0, 1.0)
    s = np.where(
        t != t_clamped,
        np.clip(np.where(a > 1e-30, (b * t_clamped - c) / np.where(a > 1e-30, a, 1.0), 0.0), 0.0, 1.0),
        s,
    )
    t = t_clamped
    x = p1 + s[..., None] * d1
    y = p2 + t[..., None] * d2
    return np.linalg.norm(x - y, axis=-1)


def _segseg_curved(kind: Kind, a0, a1, b0, b1, grid: int = 17, rounds: int = 30) -> float:
    """Min distance between two geodesic segments via refined grid search.

    Endpoints are in canonical coords.  Curved segments have no closed-form
    pairwise intersection, so we sample and locally refine the (s, t) cell.
    """
    lo_s, hi_s, lo_t, hi_t = 0.0, 1.0, 0.0, 1.0
    best = np.inf
    for _ in range(rounds):
        s = np.linspace(lo_s, hi_s, grid)
        t = np.linspace(lo_t, hi_t, grid)
        pa = _interp_can(kind, a0, a1, s)
        pb = _interp_can(kind, b0, b1, t)
        d = _dist_can(kind, pa[:, None, :], pb[None, :, :])
        i, j = np.unravel_index(np.argmin(d), d.shape)
        best = min(best, float(d[i, j]))
        ws = (hi_s - lo_s) / (grid - 1)
        wt = (hi_t - lo_t) / (grid - 1)
        lo_s, hi_s = max(0.0, s[i] - ws), min(1.0, s[i] + ws)
        lo_t, hi_t = max(0.0, t[j] - wt), min(1.0, t[j] + wt)
        if ws < 1e-13 and wt < 1e-13:
            break
    return best


def segment_pair_distance(space: SpaceForm, a0, a1, b0, b1) -> float:
    """Min distance between geodesic segments [a0,a1] and [b0,b1]."""
    if space.kind is Kind.EUCLIDEAN:
        return float(_segseg_euclid(a0, a1, b0, b1))
    e = [embed(space, np.asarray(x, dtype=float)) for x in (a0, a1, b0, b1)]
    return _segseg_curved(space.kind, *e)


def _point_seg_euclid(p, a, b) -> np.ndarray:
    p, a, b = (np.asarray(x, dtype=float) for x in (p, a, b))
    d = b - a
    den = np.sum(d * d, axis=-1)
    t = np.clip(np.sum((p - a) * d, axis=-1) / np.where(den > 1e-30, den, 1.0), 0.0, 1.0)
    return np.linalg.norm(a + t[..., None] * d - p, axis=-1)


def _point_seg_curved(kind: Kind, p, a, b, grid: int = 33, rounds: int = 30) -> float:
    lo, hi = 0.0, 1.0
    best = np.inf
    for _ in range(rounds):
        t = np.linspace(lo, hi, grid)
        x = _interp_can(kind, a, b, t)
        d = _dist_can(kind, p[None, :], x)
        i = int(np.argmin(d))
        best = min(best, float(d[i]))
        w = (hi - lo) / (grid - 1)
        lo, hi = max(0.0, t[i] - w), min(1.0, t[i] + w)
        if w < 1e-13:
            break
    return best


def point_segment_distance(space: SpaceForm, p, a, b) -> float:
    if space.kind is Kind.EUCLIDEAN:
        return float(_point_seg_euclid(p, a, b))
    pc = embed(space, np.asarray(p, dtype=float))
    ac = embed(space, np.asarray(a, dtype=float))
    bc = embed(space, np.asarray(b, dtype=float))
    return _point_seg_curved(space.kind, pc, ac, bc)


def point_curve_distance(space: SpaceForm, p, curve: PolygonalCurve) -> float:
    best = np.inf
    for i in range(curve.n_segments):
        a, b = curve.segment(i)
        best = min(best, point_segment_distance(space, p, a, b))
    return best


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------


def validate(curve: PolygonalCurve, tol: float = SIMPLE_TOL) -> SimplicityReport:
    """Check the curve is well formed and simple.

    simple = no two non-adjacent segments intersect and adjacent segments
    meet only at the shared vertex.  Non-adjacent proximity below tol counts
    as an intersection.
    """
    violations: list[str] = []
    k = curve.k
    if k < (3 if curve.closed else 2):
        violations.append("too few vertices")
        return SimplicityReport(False, violations)

    lens = curve.segment_lengths()
    for i, ell in enumerate(lens):
        if ell < tol:
            violations.append(f"coincident consecutive vertices at segment {i}")
    if curve.space.kind is Kind.SPHERE:
        for i, ell in enumerate(lens):
            if np.pi - ell < MINIMIZING_TOL:
                violations.append(f"segment {i} joins near-antipodal endpoints")
    if violations:
        return SimplicityReport(False, violations)

    # adjacent segments: a zero interior angle means the curve retraces itself
    v = curve.vertices
    idx = range(k) if curve.closed else range(1, k - 1)
    for i in idx:
        prev_i = (i - 1) % k
        next_i = (i + 1) % k
        ang = float(vertex_angle_arrays(curve.space, v[i], v[prev_i], v[next_i]))
        if ang < tol:
            violations.append(f"cusp overlap at vertex {i}")

    nseg = curve.n_segments
    for i in range(nseg):
        for j in range(i + 1, nseg):
            adjacent = (j == i + 1) or (curve.closed and i == 0 and j == nseg - 1)
            if adjacent:
                continue
            a0, a1 = curve.segment(i)
            b0, b1 = curve.segment(j)
            d = segment_pair_distance(curve.space, a0, a1, b0, b1)
            if d < tol:
                violations.append(f"segments {i} and {j} intersect (distance {d:.2e})")

    return SimplicityReport(not violations, violations)


def simple_mask_euclidean(vertices: np.ndarray, closed: bool = True, tol: float = SIMPLE_TOL) -> np.ndarray:
    """Vectorized simplicity test for a batch of Euclidean polygons (B, k, d)."""
    v = np.asarray(vertices, dtype=float)
    b, k, _ = v.shape
    ok = np.ones(b, dtype=bool)
    nxt = np.roll(v, -1, axis=1) if closed else v[:, 1:]
    cur = v if closed else v[:, :-1]
    ok &= np.all(np.linalg.norm(nxt - cur, axis=-1) > tol, axis=1)
    nseg = k if closed else k - 1
    for i in range(nseg):
        for j in range(i + 1, nseg):
            adjacent = (j == i + 1) or (closed and i == 0 and j == nseg - 1)
            if adjacent:
                continue
            d = _segseg_euclid(
                v[:, i], v[:, (i + 1) % k], v[:, j], v[:, (j + 1) % k]
            )
            ok &= d > tol
    return ok


# ---------------------------------------------------------------------------
# turning angles and total curvature
# ---------------------------------------------------------------------------


def turning_angles(curve: PolygonalCurve) -> np.ndarray:
    """Exterior angle (pi - interior angle) at each interior vertex."""
    v = curve.vertices
    k = curve.k
    if curve.closed:
        if k < 3:
            raise GeometryError("closed curve needs at least 3 vertices")
        p = v
        u = np.roll(v, 1, axis=0)
        w = np.roll(v, -1, axis=0)
    else:
        if k < 3:
            return np.zeros(0)
        p = v[1:-1]
        u = v[:-2]
        w = v[2:]
    interior = vertex_angle_arrays(curve.space, p, u, w)
    return np.pi - interior


def cusp_vertices(curve: PolygonalCurve, tol: float = 1e-9) -> list[int]:
    """Indices of interior vertices whose exterior angle equals pi within tol."""
    ang = turning_angles(curve)
    hits = np.nonzero(np.pi - ang < tol)[0]
    offset = 0 if curve.closed else 1
    return [int(i) + offset for i in hits]


def total_curvature(curve: PolygonalCurve) -> float:
    """Sum of exterior angles over the interior vertices; always >= 0."""
    return float(np.sum(turning_angles(curve)))


def total_curvature_batch(space: SpaceForm, vertices: np.ndarray, closed: bool = True) -> np.ndarray:
    """Total curvature of a batch of polygons (B, k, d) in model coords."""
    v = np.asarray(vertices, dtype=float)
    if closed:
        p, u, w = v, np.roll(v, 1, axis=1), np.roll(v, -1, axis=1)
    else:
        p, u, w = v[:, 1:-1], v[:, :-2], v[:, 2:]
    interior = vertex_angle_arrays(space, p, u, w)
    return np.sum(np.pi - interior, axis=-1)


# ---------------------------------------------------------------------------
# tangent indicatrix
# ---------------------------------------------------------------------------


def tangent_indicatrix(curve: PolygonalCurve) -> SphericalPolygon:
    """Unit tangent polygon of a closed Euclidean polygon."""
    if curve.space.kind is not Kind.EUCLIDEAN:
        raise GeometryError("tangent indicatrix is defined for Euclidean curves")
    if not curve.closed:
        raise GeometryError("tangent indicatrix needs a closed curve")
    diffs = np.roll(curve.vertices, -1, axis=0) - curve.vertices
    norms = np.linalg.norm(diffs, axis=-1, keepdims=True)
    if np.any(norms < 1e-14):
        raise GeometryError("zero-length segment")
    return SphericalPolygon(diffs / norms, closed=True)


def spherical_length(poly: SphericalPolygon) -> float:
    """Sum of arc lengths arccos<p_i, p_(i+1)> along the polygon."""
    v = poly.vertices
    w = np.roll(v, -1, axis=0) if poly.closed else v[1:]
    u = v if poly.closed else v[:-1]
    dots = np.clip(np.sum(u * w, axis=-1), -1.0, 1.0)
    return float(np.sum(np.arccos(dots)))


def indicatrix_length_batch(vertices: np.ndarray) -> np.ndarray:
    """Spherical length of the tangent indicatrix for a batch (B, k, d)."""
    v = np.asarray(vertices, dtype=float)
    diffs = np.roll(v, -1, axis=1) - v
    t = diffs / np.linalg.norm(diffs, axis=-1, keepdims=True)
    dots = np.clip(np.sum(t * np.roll(t, -1, axis=1), axis=-1), -1.0, 1.0)
    return np.sum(np.arccos(dots), axis=-1)
