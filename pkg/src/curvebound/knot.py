"""Polygonal knot detection via the diagram determinant.

A closed simple polygon in R^3 is projected along a generic direction to
a knot diagram; the determinant (the coloring-matrix minor, equal to the
Alexander polynomial's absolute value at -1) is 1 for the unknot and 3
for a trefoil.  Determinant 1 is reported as "no obstruction found", not
as a proof of unknottedness.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field

import numpy as np

from .errors import ConstructionError, GeometryError
from .polycurve import PolygonalCurve
from .spaceform import Kind, SpaceForm, as_rng

PARALLEL_TOL = 1e-7
PARAM_TOL = 1e-9
COINCIDENCE_TOL = 1e-9
DEPTH_TOL = 1e-9


@dataclass
class Crossing:
    over_arc: int
    under_in_arc: int
    under_out_arc: int
    sign: int


@dataclass
class Diagram:
    crossings: list[Crossing]
    n_arcs: int
    gauss_code: list[int] = field(default_factory=list)

    def __post_init__(self):
        for c in self.crossings:
            for a in (c.over_arc, c.under_in_arc, c.under_out_arc):
                if not 0 <= a < max(self.n_arcs, 1):
                    raise GeometryError("crossing references an invalid arc")


def _check_input(curve: PolygonalCurve) -> None:
    if curve.space.kind is not Kind.EUCLIDEAN or curve.space.dim != 3:
        raise GeometryError("knot projection expects a curve in R^3")
    if not curve.closed:
        raise GeometryError("knot projection expects a closed curve")
    if curve.k < 3:
        raise GeometryError("need at least 3 vertices")


def project(curve: PolygonalCurve, direction) -> Diagram:
    """Orthogonal projection of a closed simple polygon to a knot diagram.

    The direction must be generic: no segment parallel to it, no vertex
    image on a non-incident segment image, all crossings transverse with
    parameters away from the endpoints, no triple points, and clear
    over/under depth separation.  Violations raise ConstructionError.
    """
    _check_input(curve)
    d = np.asarray(direction, dtype=float)
    nd = np.linalg.norm(d)
    if nd < 1e-12:
        raise GeometryError("projection direction must be nonzero")
    d = d / nd

    ref = np.array([0.0, 0.0, 1.0]) if abs(d[2]) < 0.9 else np.array([1.0, 0.0, 0.0])
    e1 = ref - np.dot(ref, d) * d
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(d, e1)

    v = curve.vertices
    k = curve.k
    p2 = v @ np.stack([e1, e2], axis=-1)   # (k, 2) plane images
    depth = v @ d
    scale = float(np.max(np.ptp(p2, axis=0))) or 1.0

    seg2 = np.roll(p2, -1, axis=0) - p2
    len2 = np.linalg.norm(seg2, axis=-1)
    len3 = np.linalg.norm(np.roll(v, -1, axis=0) - v, axis=-1)
    if np.any(len2 < PARALLEL_TOL * len3):
        raise ConstructionError("a segment is nearly parallel to the direction")

    for j in range(k):
        a, b, u = p2[j], p2[(j + 1) % k], seg2[j]
        for i in range(k):
            if i in (j, (j + 1) % k):
                continue
            t = np.clip(np.dot(p2[i] - a, u) / np.dot(u, u), 0.0, 1.0)
            if np.linalg.norm(a + t * u - p2[i]) < COINCIDENCE_TOL * scale:
                raise ConstructionError("a vertex image lies on a segment image")

    crossings_raw = []   # (seg_i, s, seg_j, t, depth_i, depth_j)
    for i in range(k):
        for j in range(i + 1, k):
            if j == i + 1 or (i == 0 and j == k - 1):
                continue
            p, u = p2[i], seg2[i]
            q, w = p2[j], seg2[j]
            det = u[0] * w[1] - u[1] * w[0]
            r = q - p
            if abs(det) < 1e-12 * len2[i] * len2[j]:
                if _seg2d_distance(p, p + u, q, q + w) < COINCIDENCE_TOL * scale:
                    raise ConstructionError("near-parallel overlapping segment images")
                continue
            s = (r[0] * w[1] - r[1] * w[0]) / det
            t = (r[0] * u[1] - r[1] * u[0]) / det
            if not (-PARAM_TOL < s < 1.0 + PARAM_TOL and -PARAM_TOL < t < 1.0 + PARAM_TOL):
                continue
            if min(s, 1.0 - s, t, 1.0 - t) < PARAM_TOL:
                raise ConstructionError("crossing too close to a vertex image")
            di = depth[i] + s * (depth[(i + 1) % k] - depth[i])
            dj = depth[j] + t * (depth[(j + 1) % k] - depth[j])
            if abs(di - dj) < DEPTH_TOL * scale:
                raise ConstructionError("crossing depths not separated")
            crossings_raw.append((i, s, j, t, di, dj))

    by_segment: dict[int, list[float]] = {}
    for i, s, j, t, _, _ in crossings_raw:
        by_segment.setdefault(i, []).append(s)
        by_segment.setdefault(j, []).append(t)
    for params in by_segment.values():
        params.sort()
        for a, b in zip(params[:-1], params[1:]):
            if b - a < PARAM_TOL:
                raise ConstructionError("triple point in projection")

    n = len(crossings_raw)
    if n == 0:
        return Diagram([], 0, [])

    # traversal positions: (segment, parameter); under-passages cut the arcs
    unders = []   # (position, crossing_id)
    overs = []    # (position, crossing_id)
    for cid, (i, s, j, t, di, dj) in enumerate(crossings_raw):
        if di > dj:
            overs.append(((i, s), cid))
            unders.append(((j, t), cid))
        else:
            overs.append(((j, t), cid))
            unders.append(((i, s), cid))
    unders.sort(key=lambda e: e[0])
    under_pos = [e[0] for e in unders]

    def arc_of(pos) -> int:
        # arc a runs from under event a to under event a+1 (cyclically)
        idx = bisect_right(under_pos, pos) - 1
        return idx % n

    crossings = []
    for cid, (i, s, j, t, di, dj) in enumerate(crossings_raw):
        over_pos, under_pos_c = ((i, s), (j, t)) if di > dj else ((j, t), (i, s))
        a = under_pos.index(under_pos_c)
        under_out = a
        under_in = (a - 1) % n
        over_arc = arc_of(over_pos)
        useg = under_pos_c[0]
        oseg = over_pos[0]
        cross_z = seg2[oseg][0] * seg2[useg][1] - seg2[oseg][1] * seg2[useg][0]
        crossings.append(Crossing(over_arc, under_in, under_out, 1 if cross_z > 0 else -1))

    events = sorted(
        [(pos, cid, 1) for pos, cid in overs] + [(pos, cid, -1) for pos, cid in unders]
    )
    gauss = [sign * (cid + 1) for _, cid, sign in events]
    return Diagram(crossings, n, gauss)


def _seg2d_distance(a0, a1, b0, b1) -> float:
    best = np.inf
    for p, q, r in ((a0, b0, b1), (a1, b0, b1), (b0, a0, a1), (b1, a0, a1)):
        u = r - q
        t = np.clip(np.dot(p - q, u) / max(np.dot(u, u), 1e-30), 0.0, 1.0)
        best = min(best, float(np.linalg.norm(q + t * u - p)))
    return best


# ---------------------------------------------------------------------------
# determinant
# ---------------------------------------------------------------------------


def _bareiss_det(m: list[list[int]]) -> int:
    """Exact integer determinant by fraction-free Gaussian elimination."""
    n = len(m)
    if n == 0:
        return 1
    m = [row[:] for row in m]
    sign = 1
    prev = 1
    for col in range(n - 1):
        if m[col][col] == 0:
            pivot = next((r for r in range(col + 1, n) if m[r][col] != 0), None)
            if pivot is None:
                return 0
            m[col], m[pivot] = m[pivot], m[col]
            sign = -sign
        for r in range(col + 1, n):
            for c in range(col + 1, n):
                m[r][c] = (m[r][c] * m[col][col] - m[r][col] * m[col][c]) // prev
            m[r][col] = 0
        prev = m[col][col]
    return sign * m[n - 1][n - 1]


def determinant(diagram: Diagram) -> int:
    """Knot determinant: |det| of an (n-1)x(n-1) minor of the coloring matrix.

    Row per crossing: 2 x_over - x_under_in - x_under_out (the Wirtinger
    presentation matrix at t = -1).  Diagrams with no crossings give 1.
    """
    n = len(diagram.crossings)
    if n == 0:
        return 1
    rows = []
    for c in diagram.crossings:
        row = [0] * diagram.n_arcs
        row[c.over_arc] += 2
        row[c.under_in_arc] -= 1
        row[c.under_out_arc] -= 1
        rows.append(row)
    minor = [row[: n - 1] for row in rows[: n - 1]]
    return abs(_bareiss_det(minor))


# ---------------------------------------------------------------------------
# drivers and reference curves
# ---------------------------------------------------------------------------


def random_projection(curve: PolygonalCurve, rng=0, retries: int = 100) -> Diagram:
    """Project along random directions until one is generic."""
    rng = as_rng(rng)
    last = None
    for _ in range(retries):
        d = rng.standard_normal(3)
        try:
            return project(curve, d)
        except ConstructionError as exc:
            last = exc
    raise ConstructionError(
        f"no generic projection direction found in {retries} tries: {last}"
    )


def knot_determinant(curve: PolygonalCurve, direction=None, rng=0,
                     retries: int = 100) -> int:
    """Determinant of the curve's knot type (projection-independent)."""
    if direction is not None:
        return determinant(project(curve, direction))
    return determinant(random_projection(curve, rng=rng, retries=retries))


def hexagonal_trefoil() -> PolygonalCurve:
    """A minimal-stick trefoil: the (2,3) torus parametrization
    (sin t + 2 sin 2t, cos t - 2 cos 2t, -sin 3t) sampled at six equally
    spaced parameters offset by pi/6 so consecutive vertices alternate
    between the planes z = -1 and z = +1."""
    t = np.pi / 6.0 + np.pi * np.arange(6) / 3.0
    verts = np.stack(
        [np.sin(t) + 2.0 * np.sin(2.0 * t),
         np.cos(t) - 2.0 * np.cos(2.0 * t),
         -np.sin(3.0 * t)],
        axis=1,
    )
    return PolygonalCurve(SpaceForm.euclidean(3), verts, closed=True)


def granny_curve() -> PolygonalCurve:
    """Connected sum of two hexagonal trefoils (12 sticks).

    The second summand is the first translated by +12 in x.  One edge is cut
    from each hexagon and the four loose ends are rejoined by two bridges:
    the forward bridge connects the right extreme of the first summand to
    the left extreme of the second, so its interior stays in the empty slab
    between them; the return bridge runs inside the plane y = 2, which meets
    either hexagon only at a single vertex."""
    t1 = hexagonal_trefoil().vertices
    t2 = t1 + np.array([12.0, 0.0, 0.0])
    a = [t1[i] for i in (1, 2, 3, 4, 5, 0)]   # cut edge 0 -> 1
    b = [t2[i] for i in (5, 0, 1, 2, 3, 4)]   # cut edge 4 -> 5
    verts = np.array(a + b)
    return PolygonalCurve(SpaceForm.euclidean(3), verts, closed=True)
