from __future__ import annotations

import numpy as np
import pytest

from curvebound import (
    ConstructionError,
    Crossing,
    Diagram,
    GeometryError,
    PolygonalCurve,
    SpaceForm,
    determinant,
    granny_curve,
    hexagonal_trefoil,
    knot_determinant,
    project,
    random_projection,
    validate,
)

from conftest import euclidean_curve, random_simple_polygons
from goeritz_oracle import checkerboard_determinant

Z_AXIS = np.array([0.0, 0.0, 1.0])


def kink_quadrilateral():
    # projects along z to a one-crossing bowtie; a 4-gon is always unknotted
    return euclidean_curve([[0, 0, 0], [2, 2, 0.5], [2, 0, 1], [0, 2, 1.5]])


def generic_direction(curve, rng):
    for _ in range(60):
        d = rng.standard_normal(3)
        try:
            project(curve, d)
            return d
        except ConstructionError:
            continue
    raise AssertionError("no generic direction found")


# ---------------------------------------------------------------------------
# reference curves
# ---------------------------------------------------------------------------


def test_trefoil_is_simple_and_alternates():
    curve = hexagonal_trefoil()
    assert curve.k == 6
    assert validate(curve).simple
    assert curve.vertices[:, 2] == pytest.approx(
        np.array([-1, 1, -1, 1, -1, 1]), abs=1e-12
    )


def test_granny_is_simple():
    curve = granny_curve()
    assert curve.k == 12
    assert validate(curve).simple


# ---------------------------------------------------------------------------
# projection
# ---------------------------------------------------------------------------


def test_trefoil_axis_projection():
    dia = project(hexagonal_trefoil(), Z_AXIS)
    assert len(dia.crossings) == 3
    assert dia.n_arcs == 3
    assert len(dia.gauss_code) == 6
    # alternating: over and under passages strictly alternate along the curve
    signs = [1 if g > 0 else -1 for g in dia.gauss_code]
    assert all(a != b for a, b in zip(signs, signs[1:]))
    assert sorted(abs(g) for g in dia.gauss_code) == [1, 1, 2, 2, 3, 3]


def test_projection_rejects_parallel_direction():
    curve = hexagonal_trefoil()
    d = curve.vertices[1] - curve.vertices[0]
    with pytest.raises(ConstructionError):
        project(curve, d)


def test_projection_rejects_unseparated_depths():
    flat = euclidean_curve([[0, 0, 0], [2, 2, 0], [2, 0, 0], [0, 2, 0]])
    with pytest.raises(ConstructionError):
        project(flat, Z_AXIS)


def test_projection_input_validation():
    curve = hexagonal_trefoil()
    with pytest.raises(GeometryError):
        project(curve, np.zeros(3))
    chain = euclidean_curve([[0, 0, 0], [1, 0, 0], [1, 1, 0]], closed=False)
    with pytest.raises(GeometryError):
        project(chain, Z_AXIS)
    sphere_curve = PolygonalCurve(SpaceForm.sphere(2), np.eye(3))
    with pytest.raises(GeometryError):
        project(sphere_curve, Z_AXIS)


def test_simple_convex_polygon_has_no_crossings(rng):
    t = 2.0 * np.pi * np.arange(5) / 5.0
    flatish = np.stack([np.cos(t), np.sin(t), 0.01 * rng.normal(size=5)], axis=1)
    dia = project(euclidean_curve(flatish), Z_AXIS)
    assert dia.crossings == []
    assert determinant(dia) == 1


def test_diagram_validates_arc_indices():
    with pytest.raises(GeometryError):
        Diagram([Crossing(5, 0, 0, 1)], n_arcs=2)


# ---------------------------------------------------------------------------
# determinant against the checkerboard oracle
# ---------------------------------------------------------------------------


def test_trefoil_determinant_many_directions(rng):
    curve = hexagonal_trefoil()
    assert knot_determinant(curve, direction=Z_AXIS) == 3
    for _ in range(8):
        d = generic_direction(curve, rng)
        assert knot_determinant(curve, direction=d) == 3
        oracle = checkerboard_determinant(curve.vertices, d)
        assert oracle.determinant == 3
        assert oracle.n_crossings == len(project(curve, d).crossings)


def test_granny_determinant_many_directions(rng):
    curve = granny_curve()
    for _ in range(5):
        d = generic_direction(curve, rng)
        assert knot_determinant(curve, direction=d) == 9
        assert checkerboard_determinant(curve.vertices, d).determinant == 9


def test_kink_determinant():
    curve = kink_quadrilateral()
    dia = project(curve, Z_AXIS)
    assert len(dia.crossings) == 1
    assert determinant(dia) == 1
    oracle = checkerboard_determinant(curve.vertices, Z_AXIS)
    assert oracle.determinant == 1
    assert oracle.n_faces == 3


def test_random_pentagons_match_oracle(rng):
    polys = random_simple_polygons(rng, 20)
    for verts in polys:
        curve = euclidean_curve(verts)
        d = generic_direction(curve, rng)
        mod = knot_determinant(curve, direction=d)
        oracle = checkerboard_determinant(verts, d)
        assert mod == oracle.determinant == 1
        assert oracle.n_crossings == len(project(curve, d).crossings)


def test_determinant_is_odd(rng):
    # knot determinants are always odd
    for curve in (hexagonal_trefoil(), granny_curve(), kink_quadrilateral()):
        d = generic_direction(curve, rng)
        assert knot_determinant(curve, direction=d) % 2 == 1


def test_random_projection_driver(rng):
    assert knot_determinant(hexagonal_trefoil(), rng=4) == 3
    dia = random_projection(granny_curve(), rng=4)
    assert determinant(dia) == 9
    assert len(dia.crossings) >= 6
