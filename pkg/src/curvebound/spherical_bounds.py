"""Length bounds for spherical polygons and chains, with sharpness witnesses.

Closed spherical polygons on k vertices have total length at most
2*floor(k/2)*pi.  Open chains gain or lose the endpoint separation theta:
3 points (open)  -> 2 pi - theta,
4 points (open)  -> 2 pi + theta,
2m+1 points open -> 2m pi - theta.
Equality forces an antipodal vertex pair or a single great circle, which
check_bound reports as flags.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.optimize import minimize

from .errors import ConstructionError, GeometryError
from .polycurve import PolygonalCurve, total_curvature, validate
from .spaceform import SpaceForm, as_rng

FLAG_TOL = 1e-8  # antipodal / great-circle detection
EQUALITY_SLACK = 1e-6


class BoundVariant(str, Enum):
    TRIANGLE = "triangle"       # 3 vertices, closed, bound 2 pi
    CHAIN1 = "chain1"           # 3 vertices, open, bound 2 pi - theta
    CHAIN2 = "chain2"           # 4 vertices, open, bound 2 pi + theta
    CLOSED_ODD = "closed_odd"   # 2m+1 vertices, closed, bound 2m pi
    OPEN_ODD = "open_odd"       # 2m+1 vertices, open, bound 2m pi - theta


_CLOSED_VARIANTS = (BoundVariant.TRIANGLE, BoundVariant.CLOSED_ODD)


@dataclass
class EqualityFlags:
    antipodal_pair: bool
    great_circle: bool


@dataclass
class BoundCheck:
    variant: BoundVariant
    points: np.ndarray
    measured: float
    bound: float
    theta: float | None
    slack: float
    equality_flags: EqualityFlags


@dataclass
class ExtremalResult:
    variant: BoundVariant
    k: int
    sup_estimate: float
    argmax: np.ndarray
    bound: float
    budget: tuple[int, int]


def _check_unit(points: np.ndarray) -> np.ndarray:
    p = np.atleast_2d(np.asarray(points, dtype=float))
    norms = np.linalg.norm(p, axis=-1)
    if np.any(np.abs(norms - 1.0) > 1e-6):
        raise GeometryError("vertices must be unit vectors")
    return p / norms[..., None]


def _arc(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    return np.arccos(np.clip(np.sum(u * v, axis=-1), -1.0, 1.0))


def _variant_arity(variant: BoundVariant, k: int, closed_override: bool | None = None) -> bool:
    closed = variant in _CLOSED_VARIANTS
    if variant is BoundVariant.TRIANGLE and k != 3:
        raise GeometryError("triangle variant needs exactly 3 vertices")
    if variant is BoundVariant.CHAIN1 and k != 3:
        raise GeometryError("chain1 variant needs exactly 3 vertices")
    if variant is BoundVariant.CHAIN2 and k != 4:
        raise GeometryError("chain2 variant needs exactly 4 vertices")
    if variant in (BoundVariant.CLOSED_ODD, BoundVariant.OPEN_ODD):
        if k < 3 or k % 2 == 0:
            raise GeometryError(f"{variant.value} variant needs an odd vertex count >= 3")
    return closed


def analytic_bound(k: int, closed: bool, theta: float = 0.0) -> float:
    """Sharp length bound for a k-vertex spherical polygon or chain."""
    if closed:
        return 2.0 * (k // 2) * math.pi
    if k % 2 == 1:
        return (k - 1) * math.pi - theta
    return (k - 2) * math.pi + theta


def check_bound(points, variant: BoundVariant, flag_tol: float = FLAG_TOL) -> BoundCheck:
    """Measure a configuration's length against its variant bound."""
    p = _check_unit(points)
    k = p.shape[0]
    closed = _variant_arity(variant, k)
    segs = _arc(p, np.roll(p, -1, axis=0)) if closed else _arc(p[:-1], p[1:])
    measured = float(np.sum(segs))
    theta = None if closed else float(_arc(p[0], p[-1]))
    bound = analytic_bound(k, closed, theta or 0.0)
    flags = EqualityFlags(
        antipodal_pair=_has_antipodal_pair(p, flag_tol),
        great_circle=_coplanar_through_origin(p, flag_tol),
    )
    return BoundCheck(variant, p, measured, bound, theta, bound - measured, flags)


def check_bound_batch(points: np.ndarray, variant: BoundVariant, flag_tol: float = FLAG_TOL) -> dict:
    """Vectorized check_bound for a batch (B, k, n) of unit-vector polygons."""
    p = np.asarray(points, dtype=float)
    b, k, n = p.shape
    closed = _variant_arity(variant, k)
    if closed:
        segs = _arc(p, np.roll(p, -1, axis=1))
        theta = np.zeros(b)
    else:
        segs = _arc(p[:, :-1], p[:, 1:])
        theta = _arc(p[:, 0], p[:, -1])
    measured = np.sum(segs, axis=-1)
    if closed:
        bound = np.full(b, 2.0 * (k // 2) * math.pi)
    elif k % 2 == 1:
        bound = (k - 1) * math.pi - theta
    else:
        bound = (k - 2) * math.pi + theta

    antipodal = np.zeros(b, dtype=bool)
    for i in range(k):
        for j in range(i + 1, k):
            antipodal |= np.linalg.norm(p[:, i] + p[:, j], axis=-1) < flag_tol
    if n > 2:
        sv = np.linalg.svd(p, compute_uv=False)
        coplanar = sv[:, 2] < flag_tol
    else:
        coplanar = np.ones(b, dtype=bool)
    return {
        "measured": measured,
        "bound": bound,
        "slack": bound - measured,
        "theta": None if closed else theta,
        "antipodal_pair": antipodal,
        "great_circle": coplanar,
    }


def _has_antipodal_pair(p: np.ndarray, tol: float) -> bool:
    k = p.shape[0]
    for i in range(k):
        for j in range(i + 1, k):
            if np.linalg.norm(p[i] + p[j]) < tol:
                return True
    return False


def _coplanar_through_origin(p: np.ndarray, tol: float) -> bool:
    """All vertices in one 2-plane through the origin: third singular value ~ 0."""
    if p.shape[-1] <= 2:
        return True
    sv = np.linalg.svd(p, compute_uv=False)
    return bool(sv[2] < tol)


# ---------------------------------------------------------------------------
# extremal search
# ---------------------------------------------------------------------------


def _config_objective(p: np.ndarray, variant: BoundVariant, closed: bool) -> float:
    """Length adjusted by the theta term so the cap is a constant."""
    if closed:
        return float(np.sum(_arc(p, np.roll(p, -1, axis=0))))
    length = float(np.sum(_arc(p[:-1], p[1:])))
    theta = float(_arc(p[0], p[-1]))
    if variant is BoundVariant.CHAIN2:
        return length - theta
    return length + theta


def _tangent_frame(p: np.ndarray) -> np.ndarray:
    n = p.shape[0]
    basis = np.eye(n)
    cols = []
    for e in basis:
        w = e - np.dot(e, p) * p
        for c in cols:
            w = w - np.dot(w, c) * c
        nw = np.linalg.norm(w)
        if nw > 1e-8:
            cols.append(w / nw)
        if len(cols) == n - 1:
            break
    return np.stack(cols)


def extremal_search(
    k: int,
    variant: BoundVariant = BoundVariant.CLOSED_ODD,
    budget: tuple[int, int] = (32, 500),
    rng=0,
    dim: int = 3,
) -> ExtremalResult:
    """Empirically maximize configuration length under the variant's rules.

    Coordinate-wise ascent: each vertex is locally re-optimized by a 2D
    polytope search in its tangent chart, together with the two exact
    antipodal candidate moves.  The reported supremum estimate is clamped
    at the analytic bound, so it can never exceed bound + 1e-6.
    """
    if k < 3:
        raise GeometryError("need at least 3 vertices")
    closed = variant in _CLOSED_VARIANTS
    if variant is BoundVariant.TRIANGLE and k != 3:
        raise GeometryError("triangle variant needs k = 3")
    if variant is BoundVariant.CHAIN2 and k != 4:
        raise GeometryError("chain2 variant needs k = 4")
    rng = as_rng(rng)
    restarts, sweeps = budget
    cap = analytic_bound(k, closed) if closed else (
        analytic_bound(k, False, 0.0) if variant is not BoundVariant.CHAIN2 else 2.0 * math.pi
    )

    best_val = -np.inf
    best_cfg = None
    for _ in range(max(1, restarts)):
        p = rng.standard_normal((k, dim))
        p /= np.linalg.norm(p, axis=-1, keepdims=True)
        val = _config_objective(p, variant, closed)
        for _sweep in range(max(1, sweeps)):
            improved = False
            for i in range(k):
                cand = [p[i]]
                cand.append(-p[(i - 1) % k] if closed or i > 0 else -p[1])
                cand.append(-p[(i + 1) % k] if closed or i < k - 1 else -p[-2])
                frame = _tangent_frame(p[i])

                def local(xy, i=i, frame=frame):
                    q = p[i] + xy @ frame
                    q = q / np.linalg.norm(q)
                    old = p[i].copy()
                    p[i] = q
                    v = _config_objective(p, variant, closed)
                    p[i] = old
                    return -v

                res = minimize(
                    local,
                    np.zeros(frame.shape[0]),
                    method="Nelder-Mead",
                    options={"maxiter": 60, "xatol": 1e-10, "fatol": 1e-12},
                )
                q = p[i] + res.x @ frame
                cand.append(q / np.linalg.norm(q))
                old = p[i].copy()
                for q in cand[1:]:
                    p[i] = q
                    v = _config_objective(p, variant, closed)
                    if v > val + 1e-13:
                        val = v
                        old = q.copy()
                        improved = True
                p[i] = old
            if not improved:
                break
        if val > best_val:
            best_val = val
            best_cfg = p.copy()

    sup = min(best_val, cap)
    return ExtremalResult(variant, k, sup, best_cfg, cap, (restarts, sweeps))


# ---------------------------------------------------------------------------
# sharpness family
# ---------------------------------------------------------------------------


def sharpness_family(m: int, eps: float, seed=0) -> PolygonalCurve:
    """A simple closed (2m+1)-gon in R^3 with total curvature in [2m pi - eps, 2m pi).

    Construction: a segment traversed back and forth m times plus one extra
    vertex in a segment interior (total curvature exactly 2m pi when
    degenerate), perturbed by eps/(10 k) per coordinate and re-sampled until
    it validates as simple.  The perturbation scale is halved if the angle
    deficit overshoots eps.
    """
    if m < 1:
        raise GeometryError("m must be >= 1")
    if not 0.0 < eps <= 0.1:
        raise GeometryError("eps must lie in (0, 0.1]")
    k = 2 * m + 1
    target = 2.0 * m * math.pi
    base = np.zeros((k, 3))
    base[1:-1:2, 0] = 1.0
    base[-1] = (0.5, 0.0, 0.0)
    rng = as_rng(seed)
    pattern = rng.uniform(-1.0, 1.0, size=(k, 3))
    delta = eps / (10.0 * k)
    space = SpaceForm.euclidean(3)
    for _ in range(80):
        curve = PolygonalCurve(space, base + delta * pattern, closed=True)
        report = validate(curve)
        if not report.simple:
            pattern = rng.uniform(-1.0, 1.0, size=(k, 3))
            continue
        tc = total_curvature(curve)
        if target - eps <= tc <= target - 1e-12:
            return curve
        delta *= 0.5
    raise ConstructionError(
        f"could not certify a simple sharpness witness for m={m}, eps={eps}"
    )
