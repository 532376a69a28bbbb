"""Closed-form model flows and the saturation / line-avoidance checks built on them.

Coordinates on R x R^n are (x, y) with x the invariant-line coordinate.

* Parallel:    (x, y) -> (x + t, y)
* Radial:      p -> e^{-t} p          (flow of the attracting field -y^i d/dy^i)
* Cylindrical: (x, y) -> (x, e^{-t} y)   (radial on every leaf x = const)
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .affine_core import TOL, AffineMap, GroupPresentation, Word, apply, evaluate_word, inverse
from .errors import (
    DimensionMismatch,
    InvalidParameter,
    NotInGroup,
    NotLinePreserving,
    SamplerPrecondition,
    ScalesLine,
)
from .line_groups import BlockForm, membership

ABSORB_DIRECTIONS = 32
ABSORB_TIMES = 16


class FlowKind(str, enum.Enum):
    Parallel = "Parallel"
    Radial = "Radial"
    Cylindrical = "Cylindrical"


@dataclass(frozen=True)
class FlowSpec:
    kind: FlowKind
    dimension: int

    def __post_init__(self):
        object.__setattr__(self, "kind", FlowKind(self.kind))
        if self.dimension < 1:
            raise InvalidParameter("dimension must be positive")
        if self.kind is not FlowKind.Radial and self.dimension < 2:
            raise InvalidParameter(f"{self.kind.value} flow needs a line factor and a transverse factor")


@dataclass(frozen=True, eq=False)
class Ball:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        c = np.array(self.center, dtype=float).reshape(-1)
        c.setflags(write=False)
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "radius", float(self.radius))
        if not self.radius > 0:
            raise InvalidParameter("ball radius must be positive")


def flow(spec: FlowSpec, t: float, p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.shape[-1] != spec.dimension:
        raise DimensionMismatch(f"point of dimension {p.shape[-1]} for a {spec.dimension}-dimensional flow")
    if spec.kind is FlowKind.Radial:
        return np.exp(-t) * p
    out = p.copy()
    if spec.kind is FlowKind.Parallel:
        out[..., 0] += t
    else:
        out[..., 1:] *= np.exp(-t)
    return out


@dataclass(frozen=True)
class CommutationReport:
    commutes: bool
    counterexample: dict | None = None

    def __bool__(self):
        return self.commutes


def commutes_with_flow(spec: FlowSpec, f: AffineMap, samples: int = 64, seed: int = 0, tol: float = TOL):
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        t = rng.uniform(-2.0, 2.0)
        p = rng.normal(size=spec.dimension)
        lhs = apply(f, flow(spec, t, p))
        rhs = flow(spec, t, apply(f, p))
        if not np.allclose(lhs, rhs, atol=tol, rtol=tol):
            return CommutationReport(
                False, {"t": t, "point": p.tolist(), "f_after_flow": lhs.tolist(), "flow_after_f": rhs.tolist()}
            )
    return CommutationReport(True)


def radial_saturation_contains(U: Ball, q) -> bool:
    """Whether q lies in the union of all radial-flow translates of the open ball U."""
    q = np.asarray(q, dtype=float).reshape(-1)
    c = U.center
    if q.size != c.size:
        raise DimensionMismatch("query and ball dimensions differ")
    qq = float(q @ q)
    cc = float(c @ c)
    rho2 = U.radius**2
    if qq == 0.0:
        return cc < rho2
    qc = float(q @ c)
    # min over s > 0 of |s q - c|^2; infimum |c|^2 approached as s -> 0+ when q.c <= 0
    dist2 = cc - qc * qc / qq if qc > 0 else cc
    return dist2 < rho2


def _sphere_directions(dim: int, count: int) -> np.ndarray:
    if dim == 1:
        return np.array([[1.0], [-1.0]])
    if dim == 2:
        ang = np.linspace(0.0, 2 * np.pi, count, endpoint=False)
        return np.column_stack([np.cos(ang), np.sin(ang)])
    v = np.random.default_rng(0).normal(size=(count, dim))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def forward_absorbing(U: Ball, tol: float = TOL) -> bool:
    """Whether e^{-t} U is contained in U for every t >= 0.

    For a ball this holds exactly when the origin lies in the closed ball;
    the analytic answer is cross-checked on a grid of boundary points and times.
    """
    c, rho = U.center, U.radius
    analytic = float(np.linalg.norm(c)) <= rho * (1.0 + tol)
    if not analytic:
        return False
    boundary = c + rho * _sphere_directions(c.size, ABSORB_DIRECTIONS)
    for t in np.linspace(0.1, 10.0, ABSORB_TIMES):
        dist = np.linalg.norm(np.exp(-t) * boundary - c, axis=1)
        if np.any(dist > rho * (1.0 + tol) + tol):
            raise RuntimeError(f"absorption cross-check failed at t={t:.3g}")
    return True


def induced_transverse_action(f: BlockForm | AffineMap, tol: float = TOL) -> AffineMap:
    """The affine map y -> A y + v induced on the transverse factor R^n.

    Accepts a BlockForm (v = 0) or an AffineMap with first linear column
    (1, 0, ..., 0), whose translation tail is v.
    """
    if isinstance(f, BlockForm):
        if abs(f.r - 1.0) > tol:
            raise ScalesLine(f"element scales the invariant line by r = {f.r:.6g}")
        return AffineMap(f.A, np.zeros(f.n))
    if f.dim < 2:
        raise DimensionMismatch("need dimension >= 2")
    col = f.linear[:, 0]
    if np.any(np.abs(col[1:]) > tol):
        raise NotLinePreserving("linear part moves the line direction e1", {"linear_first_column": col.tolist()})
    if abs(col[0] - 1.0) > tol:
        raise ScalesLine(f"element scales the line direction by {col[0]:.6g}")
    return AffineMap(f.linear[1:, 1:], f.translation[1:])


@dataclass(frozen=True)
class AvoidanceReport:
    samples: int
    max_word_length: int
    min_transverse_norm: float
    worst_word: list
    sample_min_transverse_norm: float
    hits: int

    def to_dict(self) -> dict:
        return {
            "samples": self.samples,
            "max_word_length": self.max_word_length,
            "min_transverse_norm": self.min_transverse_norm,
            "worst_word": self.worst_word,
            "sample_min_transverse_norm": self.sample_min_transverse_norm,
            "hits": self.hits,
        }


def default_sampler(dimension: int) -> Callable[[np.random.Generator, int], np.ndarray]:
    """Points (x, y) with x uniform in [-5, 5] and |y| in [0.1, 2]."""

    def sample(rng, count):
        x = rng.uniform(-5.0, 5.0, size=(count, 1))
        y = rng.normal(size=(count, dimension - 1))
        y /= np.linalg.norm(y, axis=1, keepdims=True)
        y *= rng.uniform(0.1, 2.0, size=(count, 1))
        return np.hstack([x, y])

    return sample


def line_avoidance_check(
    G: GroupPresentation,
    domain_sampler: Callable[[np.random.Generator, int], np.ndarray] | None = None,
    samples: int = 10_000,
    max_word_length: int = 8,
    seed: int = 0,
    tol: float = TOL,
) -> AvoidanceReport:
    """Falsification harness: random words never carry an off-line point onto the line.

    Each sample point (with y != 0) is moved by a random word of
    length 1..L, letter by letter; the smallest |y| seen over every prefix is reported.
    """
    for name, g in G.generators:
        if not membership(g, "G_trans", tol):
            raise NotInGroup(f"generator {name!r} does not act by pure translation on the invariant line")
    rng = np.random.default_rng(seed)
    sampler = domain_sampler or default_sampler(G.dimension)
    pts = np.asarray(sampler(rng, samples), dtype=float)
    if pts.shape != (samples, G.dimension):
        raise SamplerPrecondition(f"sampler returned shape {pts.shape}, expected {(samples, G.dimension)}")
    y0 = np.linalg.norm(pts[:, 1:], axis=1)
    if np.any(y0 <= tol):
        raise SamplerPrecondition("sample points must lie off the invariant line (|y| > tol)")

    steps = {}
    for i, g in enumerate(G.maps):
        steps[(i, 1)] = g
        steps[(i, -1)] = inverse(g)
    letters = list(steps)

    best = np.inf
    worst_word: list = []
    hits = 0
    lengths = rng.integers(1, max_word_length + 1, size=samples)
    choices = rng.integers(0, len(letters), size=(samples, max_word_length))
    for k in range(samples):
        p = pts[k]
        word = []
        for j in range(lengths[k]):
            letter = letters[choices[k, j]]
            # applying letters in sequence builds the word right to left
            p = apply(steps[letter], p)
            word.insert(0, letter)
            norm = float(np.linalg.norm(p[1:]))
            if norm < tol:
                hits += 1
            if norm < best:
                best = norm
                worst_word = [list(x) for x in word]
    return AvoidanceReport(samples, max_word_length, best, worst_word, float(y0.min()), hits)


def word_transverse_factor(G: GroupPresentation, w: Word) -> np.ndarray:
    """Transverse linear block A_w of a G_trans word."""
    return evaluate_word(G, w).linear[1:, 1:]
