"""Built-in example groups: lattices, Hopf quotients, the similarity torus and friends."""

from __future__ import annotations

import enum
import math

import numpy as np

from .affine_core import AffineMap, GroupPresentation, apply
from .errors import InvalidParameter
from .flows import induced_transverse_action

GOLDEN_FRACTION = (math.sqrt(5.0) - 1.0) / 2.0
GOLDEN_ANGLE = 2.0 * math.pi * GOLDEN_FRACTION

RADIAL_METRIC = "(dx^2+dy^2)/(x^2+y^2)"
SIMILARITY_POLYGON = [[0.0, 0.0], [2.0, 0.0], [1.0, 1.0], [0.0, 1.0]]
EDGE_LABELS = ["alpha", "beta", "gamma", "delta"]


class ExampleId(str, enum.Enum):
    TranslationTorus = "TranslationTorus"
    HopfCylinder = "HopfCylinder"
    SimilarityTorus = "SimilarityTorus"
    InvariantLine3Torus = "InvariantLine3Torus"
    IrrationalScrew = "IrrationalScrew"
    HopfManifold = "HopfManifold"


def _x_axis(dim):
    direction = [0.0] * dim
    direction[0] = 1.0
    return {"point": [0.0] * dim, "direction": direction}


def build_example(
    example: ExampleId | str,
    lam: float | None = None,
    theta: float | None = None,
    n: int | None = None,
) -> tuple[GroupPresentation, dict]:
    """Generators and metadata for one of the built-in examples.

    ``lam`` is the dilation factor (HopfCylinder, InvariantLine3Torus,
    HopfManifold), ``theta`` the screw angle, ``n`` the HopfManifold dimension.
    """
    example = ExampleId(example)
    meta: dict = {"id": example.value}

    if example is ExampleId.TranslationTorus:
        G = GroupPresentation.of(
            a=AffineMap.translation_by([1.0, 0.0]),
            b=AffineMap.translation_by([0.0, 1.0]),
        )
        meta.update(
            structure="euclidean",
            fixed_point=None,
            polygon=[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]],
            domain="R^2",
        )

    elif example is ExampleId.HopfCylinder:
        lam = 2.0 if lam is None else float(lam)
        if not lam > 0:
            raise InvalidParameter("dilation factor must be positive")
        G = GroupPresentation.of(d=AffineMap.linear_map(lam * np.eye(2)))
        meta.update(
            structure="radiant",
            fixed_point=[0.0, 0.0],
            domain="R^2 minus origin",
            metric=RADIAL_METRIC,
            lam=lam,
        )

    elif example is ExampleId.SimilarityTorus:
        G = GroupPresentation.of(
            a=AffineMap([[0.5, 0.0], [0.0, 0.5]], [0.0, 1.0]),
            b=AffineMap([[1.0, -1.0], [1.0, 1.0]], [2.0, 0.0]),
        )
        meta.update(
            structure="similarity",
            fixed_point=[0.0, 2.0],
            polygon=SIMILARITY_POLYGON,
            edge_labels=EDGE_LABELS,
            domain="R^2 minus the fixed point",
        )

    elif example is ExampleId.InvariantLine3Torus:
        lam = 2.0 if lam is None else float(lam)
        if not lam > 1:
            raise InvalidParameter("InvariantLine3Torus needs lam > 1")
        G = GroupPresentation.of(
            a=AffineMap.translation_by([1.0, 0.0, 0.0]),
            b=AffineMap.linear_map(np.diag([1.0, lam, lam])),
        )
        meta.update(
            structure="invariant line, pure translations on the line",
            invariant_line=_x_axis(3),
            domain="R x (R^2 minus origin)",
            lam=lam,
        )

    elif example is ExampleId.IrrationalScrew:
        theta = GOLDEN_ANGLE if theta is None else float(theta)
        c, s = math.cos(theta), math.sin(theta)
        G = GroupPresentation.of(
            a=AffineMap([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]], [1.0, 0.0, 0.0]),
        )
        meta.update(
            structure="mapping torus of a disk rotation",
            invariant_line=_x_axis(3),
            domain="R x closed unit disk",
            theta=theta,
        )

    else:
        n = 3 if n is None else int(n)
        lam = 2.0 if lam is None else float(lam)
        if n < 2:
            raise InvalidParameter("HopfManifold needs n >= 2")
        if not lam > 0:
            raise InvalidParameter("dilation factor must be positive")
        G = GroupPresentation.of(h=AffineMap.linear_map(lam * np.eye(n)))
        meta.update(
            structure="radiant",
            fixed_point=[0.0] * n,
            domain=f"R^{n} minus origin",
            quotient=f"S^1 x S^{n - 1}",
            n=n,
            lam=lam,
        )
    return G, meta


def radial_metric(p, v) -> np.ndarray:
    """|v|^2 / |p|^2, evaluated row-wise."""
    p = np.atleast_2d(p)
    v = np.atleast_2d(v)
    return np.sum(v * v, axis=1) / np.sum(p * p, axis=1)


def radial_metric_defect(f: AffineMap, samples: int = 100, seed: int = 0) -> float:
    """Largest relative gap between the pullback of the radial metric under f and the metric."""
    rng = np.random.default_rng(seed)
    dirs = rng.normal(size=(samples, f.dim))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    pts = dirs * rng.uniform(0.1, 5.0, size=(samples, 1))
    vecs = rng.normal(size=(samples, f.dim))
    pulled = radial_metric(apply(f, pts), vecs @ f.linear.T)
    base = radial_metric(pts, vecs)
    return float(np.max(np.abs(pulled - base) / base))


def preserves_radial_metric(f: AffineMap, samples: int = 100, seed: int = 0, tol: float = 1e-9) -> bool:
    return radial_metric_defect(f, samples, seed) <= tol


def max_circular_gap(screw: AffineMap, iterates: int = 200) -> float:
    """Largest angular gap left by the orbit of (1, 0) under the disk rotation induced by ``screw``.

    The orbit has ``iterates + 1`` points (start included).
    """
    rot = induced_transverse_action(screw)
    if rot.dim != 2:
        raise InvalidParameter("expected a screw motion of R x R^2")
    p = np.array([1.0, 0.0])
    pts = [p]
    for _ in range(iterates):
        p = apply(rot, p)
        pts.append(p)
    pts = np.array(pts)
    ang = np.sort(np.mod(np.arctan2(pts[:, 1], pts[:, 0]), 2.0 * np.pi))
    gaps = np.diff(np.concatenate([ang, [ang[0] + 2.0 * np.pi]]))
    return float(gaps.max())
