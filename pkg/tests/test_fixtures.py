import math

import numpy as np
import pytest

from affinestruct.affine_core import AffineMap, compose, inverse
from affinestruct.errors import InvalidParameter
from affinestruct.fixtures import (
    GOLDEN_ANGLE,
    ExampleId,
    build_example,
    max_circular_gap,
    preserves_radial_metric,
    radial_metric,
    radial_metric_defect,
)
from affinestruct.line_groups import Tag, classify_cyclic

from .conftest import assert_maps_close


def test_similarity_torus_generators_verbatim():
    G, meta = build_example("SimilarityTorus")
    assert G.names == ["a", "b"]
    np.testing.assert_array_equal(G["a"].linear, [[0.5, 0.0], [0.0, 0.5]])
    np.testing.assert_array_equal(G["a"].translation, [0.0, 1.0])
    np.testing.assert_array_equal(G["b"].linear, [[1.0, -1.0], [1.0, 1.0]])
    np.testing.assert_array_equal(G["b"].translation, [2.0, 0.0])
    assert meta["polygon"] == [[0.0, 0.0], [2.0, 0.0], [1.0, 1.0], [0.0, 1.0]]


def test_similarity_torus_common_fixed_point():
    G, meta = build_example("SimilarityTorus")
    p = np.array(meta["fixed_point"])
    for g in G.maps:
        np.testing.assert_allclose(g(p), p, atol=1e-12)


def test_invariant_line_torus_generators():
    G, meta = build_example("InvariantLine3Torus", lam=2.0)
    assert_maps_close(G["a"], AffineMap.translation_by([1.0, 0.0, 0.0]), atol=0.0)
    assert_maps_close(G["b"], AffineMap.linear_map(np.diag([1.0, 2.0, 2.0])), atol=0.0)
    assert meta["invariant_line"]["direction"] == [1.0, 0.0, 0.0]


def test_irrational_screw_generator():
    theta = 0.7
    G, _ = build_example("IrrationalScrew", theta=theta)
    c, s = math.cos(theta), math.sin(theta)
    np.testing.assert_allclose(G["a"].linear, [[1, 0, 0], [0, c, -s], [0, s, c]])
    np.testing.assert_array_equal(G["a"].translation, [1.0, 0.0, 0.0])
    assert build_example("IrrationalScrew")[1]["theta"] == GOLDEN_ANGLE


def test_hopf_examples():
    G, meta = build_example("HopfManifold", n=4, lam=3.0)
    assert_maps_close(G["h"], AffineMap.linear_map(3.0 * np.eye(4)), atol=0.0)
    assert meta["quotient"] == "S^1 x S^3"
    G, meta = build_example("HopfCylinder")
    assert_maps_close(G["d"], AffineMap.linear_map(2.0 * np.eye(2)), atol=0.0)
    assert meta["metric"] == "(dx^2+dy^2)/(x^2+y^2)"


@pytest.mark.parametrize(
    "example, kwargs",
    [
        ("HopfCylinder", {"lam": 0.0}),
        ("HopfCylinder", {"lam": -1.0}),
        ("InvariantLine3Torus", {"lam": 1.0}),
        ("InvariantLine3Torus", {"lam": 0.5}),
        ("HopfManifold", {"n": 1}),
        ("HopfManifold", {"lam": -2.0}),
    ],
)
def test_parameter_ranges(example, kwargs):
    with pytest.raises(InvalidParameter):
        build_example(example, **kwargs)


def test_unknown_example():
    with pytest.raises(ValueError):
        build_example("KleinBottle")


@pytest.mark.parametrize("example", list(ExampleId))
def test_every_example_builds(example):
    G, meta = build_example(example)
    assert meta["id"] == example.value
    assert len(G) >= 1


def test_radial_metric_invariance():
    d = build_example("HopfCylinder", lam=2.0)[0]["d"]
    assert radial_metric_defect(d, samples=100) <= 1e-9
    b = build_example("SimilarityTorus")[0]["b"]
    rot_dil = compose(AffineMap.linear_map(b.linear), d)
    assert preserves_radial_metric(rot_dil)
    assert preserves_radial_metric(inverse(rot_dil))
    # the metric is centred at the origin: b itself moves the centre, a shear is not conformal
    assert not preserves_radial_metric(b)
    assert not preserves_radial_metric(AffineMap.linear_map([[1.0, 1.0], [0.0, 1.0]]))


def test_radial_metric_hand_value():
    # at p = (3, 4), v = (1, 0): |v|^2 / |p|^2 = 1 / 25; under 2x both scale by 4
    assert radial_metric([3.0, 4.0], [1.0, 0.0])[0] == pytest.approx(1 / 25)
    assert radial_metric([6.0, 8.0], [2.0, 0.0])[0] == pytest.approx(1 / 25)


def gap_oracle(theta, iterates):
    """Sort k*theta mod 2 pi directly; no matrices involved."""
    ang = sorted(math.fmod(k * theta, 2 * math.pi) % (2 * math.pi) for k in range(iterates + 1))
    gaps = [b - a for a, b in zip(ang, ang[1:])] + [ang[0] + 2 * math.pi - ang[-1]]
    return max(gaps)


@pytest.mark.parametrize("theta", [GOLDEN_ANGLE, 1.0, math.sqrt(2.0), 0.1])
def test_circular_gap_matches_oracle(theta):
    screw = build_example("IrrationalScrew", theta=theta)[0]["a"]
    assert max_circular_gap(screw, 200) == pytest.approx(gap_oracle(theta, 200), abs=1e-9)


def test_screw_classification():
    screw = build_example("IrrationalScrew")[0]["a"]
    assert classify_cyclic(screw).tag is Tag.MappingTorus
