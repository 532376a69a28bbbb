"""Developing map by analytic continuation over a finite chart complex.

A chart complex is a graph of charts with one affine transition per directed
edge.  ``transitions[(i, j)]`` carries chart-j coordinates into chart-i
coordinates.  A path is a sequence of polylines, each in the coordinates of
its own chart; developing it rewrites every piece into the coordinates of the
first chart by the running product of transitions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable

import numpy as np

from .affine_core import TOL, AffineMap, apply, compose, inverse, maps_close
from .errors import DimensionMismatch, MissingTransition, NotALoop, SeamMismatch
from .sampling import random_affine_map

SEAM_TOL = 1e-6

ChartId = Hashable


@dataclass(frozen=True, eq=False)
class ChartComplex:
    dimension: int
    chart_ids: tuple
    transitions: dict

    def __post_init__(self):
        ids = tuple(self.chart_ids)
        if len(set(ids)) != len(ids):
            raise ValueError("chart ids must be unique")
        object.__setattr__(self, "chart_ids", ids)
        trans = dict(self.transitions)
        object.__setattr__(self, "transitions", trans)
        known = set(ids)
        for (i, j), g in trans.items():
            if i not in known or j not in known:
                raise MissingTransition(f"transition ({i!r}, {j!r}) references an unknown chart")
            if g.dim != self.dimension:
                raise DimensionMismatch(f"transition ({i!r}, {j!r}) has dimension {g.dim}")
            if i == j:
                if not maps_close(g, AffineMap.identity(self.dimension)):
                    raise ValueError(f"self-transition on chart {i!r} must be the identity")
                continue
            back = trans.get((j, i))
            if back is None:
                raise MissingTransition(f"transition ({i!r}, {j!r}) has no reverse")
            if not maps_close(compose(g, back), AffineMap.identity(self.dimension)):
                raise ValueError(f"transitions ({i!r}, {j!r}) and ({j!r}, {i!r}) are not inverse")

    @classmethod
    def from_edges(cls, dimension: int, chart_ids, edges) -> "ChartComplex":
        """Build from one-directional edges ``(i, j, g_ij)``; reverses are filled in."""
        trans = {}
        for i, j, g in edges:
            trans[(i, j)] = g
            trans.setdefault((j, i), inverse(g))
        return cls(dimension, tuple(chart_ids), trans)

    def transition(self, i, j) -> AffineMap:
        if i == j and (i, j) not in self.transitions:
            return AffineMap.identity(self.dimension)
        try:
            return self.transitions[(i, j)]
        except KeyError:
            raise MissingTransition(f"no transition from chart {j!r} into chart {i!r}") from None

    def neighbors(self, i) -> list:
        return [j for (a, j) in self.transitions if a == i and j != i]

    def to_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "charts": list(self.chart_ids),
            "transitions": [
                {"from": i, "to": j, "map": g.to_dict()} for (i, j), g in self.transitions.items()
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ChartComplex":
        edges = [(t["from"], t["to"], AffineMap.from_dict(t["map"])) for t in d["transitions"]]
        return cls.from_edges(int(d["dimension"]), d["charts"], edges)


@dataclass(frozen=True, eq=False)
class DevPath:
    segments: tuple

    def __post_init__(self):
        segs = []
        for chart, pts in self.segments:
            arr = np.array(pts, dtype=float)
            if arr.ndim != 2 or arr.shape[0] == 0:
                raise ValueError(f"segment in chart {chart!r} must be a nonempty list of points")
            arr.setflags(write=False)
            segs.append((chart, arr))
        if not segs:
            raise ValueError("path needs at least one segment")
        object.__setattr__(self, "segments", tuple(segs))

    @property
    def charts(self) -> list:
        return [c for c, _ in self.segments]

    @property
    def start(self) -> np.ndarray:
        return self.segments[0][1][0]

    @property
    def end(self) -> np.ndarray:
        return self.segments[-1][1][-1]

    def reversed(self) -> "DevPath":
        return DevPath(tuple((c, pts[::-1]) for c, pts in reversed(self.segments)))

    def to_dict(self) -> dict:
        return {"segments": [{"chart": c, "points": pts.tolist()} for c, pts in self.segments]}

    @classmethod
    def from_dict(cls, d: dict) -> "DevPath":
        return cls(tuple((s["chart"], s["points"]) for s in d["segments"]))


def concatenate(first: DevPath, second: DevPath) -> DevPath:
    """first followed by second; the join is a seam with an identity transition
    when both sides sit in the same chart."""
    return DevPath(first.segments + second.segments)


@dataclass(frozen=True, eq=False)
class DevelopedPath:
    polyline: np.ndarray
    accumulated: AffineMap

    @property
    def terminal(self) -> np.ndarray:
        return self.polyline[-1]

    def to_dict(self) -> dict:
        return {
            "polyline": self.polyline.tolist(),
            "terminal": self.terminal.tolist(),
            "accumulated": self.accumulated.to_dict(),
        }


def develop(cc: ChartComplex, path: DevPath, seam_tol: float = SEAM_TOL) -> DevelopedPath:
    acc = AffineMap.identity(cc.dimension)
    prev_chart, prev_pts = path.segments[0]
    if prev_chart not in cc.chart_ids:
        raise MissingTransition(f"unknown chart {prev_chart!r}")
    if prev_pts.shape[1] != cc.dimension:
        raise DimensionMismatch(f"segment 0 has points of dimension {prev_pts.shape[1]}")
    out = [prev_pts]
    for k, (chart, pts) in enumerate(path.segments[1:], start=1):
        if pts.shape[1] != cc.dimension:
            raise DimensionMismatch(f"segment {k} has points of dimension {pts.shape[1]}")
        g = cc.transition(prev_chart, chart)
        gap = float(np.linalg.norm(apply(g, pts[0]) - prev_pts[-1]))
        if gap > seam_tol:
            raise SeamMismatch(k, gap)
        acc = compose(acc, g)
        out.append(apply(acc, pts))
        prev_chart, prev_pts = chart, pts
    polyline = np.vstack(out)
    polyline.setflags(write=False)
    return DevelopedPath(polyline, acc)


def loop_holonomy(cc: ChartComplex, loop: DevPath, seam_tol: float = SEAM_TOL) -> AffineMap:
    charts = loop.charts
    if charts[0] != charts[-1]:
        raise NotALoop(f"path starts in chart {charts[0]!r} but ends in {charts[-1]!r}")
    return develop(cc, loop, seam_tol).accumulated


@dataclass(frozen=True)
class EquivarianceReport:
    ok: bool
    checks: int
    max_error: float
    failures: tuple = ()

    def __bool__(self):
        return self.ok

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "checks": self.checks,
            "max_error": self.max_error,
            "failures": list(self.failures),
        }


def _equivariance_error(cc: ChartComplex, beta: DevPath, gamma: DevPath, seam_tol: float) -> float:
    hol = loop_holonomy(cc, beta, seam_tol)
    left = develop(cc, concatenate(beta, gamma), seam_tol).terminal
    right = apply(hol, develop(cc, gamma, seam_tol).terminal)
    return float(np.max(np.abs(left - right)))


def equivariance_check(
    cc: ChartComplex,
    beta: DevPath,
    gamma: DevPath,
    trials: int = 0,
    seed: int = 0,
    tol: float = TOL,
    seam_tol: float = SEAM_TOL,
) -> EquivarianceReport:
    """Check dev(beta . gamma) = hol(beta) dev(gamma).

    The given gamma is always checked; ``trials`` extra paths are drawn at
    random from gamma's starting point.
    """
    if beta.charts[-1] != gamma.charts[0]:
        raise SeamMismatch(len(beta.segments), float("inf"))
    gammas = [gamma]
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        gammas.append(random_path(cc, gamma.charts[0], gamma.start, rng))
    errors = [_equivariance_error(cc, beta, g, seam_tol) for g in gammas]
    failures = tuple(k for k, e in enumerate(errors) if e > tol)
    return EquivarianceReport(not failures, len(errors), max(errors), failures)


def random_path(
    cc: ChartComplex,
    start_chart,
    start_point,
    rng: np.random.Generator,
    steps: int | None = None,
    points_per_segment: int = 3,
    scale: float = 1.0,
) -> DevPath:
    """Random seam-consistent path walking the chart graph from (start_chart, start_point)."""
    if steps is None:
        steps = int(rng.integers(1, 6))
    chart = start_chart
    p = np.asarray(start_point, dtype=float)
    segments = []
    for k in range(steps + 1):
        pts = [p]
        for _ in range(points_per_segment - 1):
            pts.append(pts[-1] + scale * rng.normal(size=cc.dimension))
        segments.append((chart, np.array(pts)))
        if k == steps:
            break
        nbrs = cc.neighbors(chart)
        if not nbrs:
            break
        nxt = nbrs[int(rng.integers(len(nbrs)))]
        # same point in the next chart's coordinates
        p = apply(cc.transition(nxt, chart), pts[-1])
        chart = nxt
    return DevPath(tuple(segments))


def random_loop(
    cc: ChartComplex,
    base_chart,
    base_point,
    rng: np.random.Generator,
    steps: int | None = None,
) -> DevPath:
    """Random closed path based at (base_chart, base_point).

    Walks out along a random path and returns through a (generally different)
    chart sequence back to base_chart, finishing at base_point.
    """
    out = random_path(cc, base_chart, base_point, rng, steps)
    back = _graph_route(cc, out.charts[-1], base_chart, rng)
    segments = list(out.segments)
    chart = out.charts[-1]
    p = out.end
    for k, nxt in enumerate(back):
        p = apply(cc.transition(nxt, chart), p)
        chart = nxt
        if k < len(back) - 1:
            segments.append((chart, np.array([p])))
    segments.append((chart, np.array([p, base_point], dtype=float)))
    return DevPath(tuple(segments))


def _graph_route(cc: ChartComplex, src, dst, rng) -> list:
    """Charts visited after src on a shortest route to dst (random tie-breaks)."""
    if src == dst:
        return []
    parents = {src: None}
    frontier = [src]
    while frontier and dst not in parents:
        nxt_frontier = []
        for c in frontier:
            nbrs = cc.neighbors(c)
            for idx in rng.permutation(len(nbrs)):
                n = nbrs[int(idx)]
                if n not in parents:
                    parents[n] = c
                    nxt_frontier.append(n)
        frontier = nxt_frontier
    if dst not in parents:
        raise MissingTransition(f"no route from chart {src!r} to chart {dst!r}")
    route = []
    c = dst
    while c != src:
        route.append(c)
        c = parents[c]
    return route[::-1]


def random_chart_complex(
    rng: np.random.Generator,
    n_charts: int,
    dimension: int,
    extra_edges: int = 2,
) -> ChartComplex:
    """Connected random complex: a random spanning tree plus a few extra edges."""
    ids = list(range(n_charts))
    edges = []
    for j in ids[1:]:
        i = int(rng.integers(j))
        edges.append((i, j, random_affine_map(rng, dimension)))
    present = {(min(i, j), max(i, j)) for i, j, _ in edges}
    for _ in range(extra_edges):
        i, j = (int(x) for x in rng.choice(n_charts, size=2, replace=False))
        if (min(i, j), max(i, j)) not in present:
            present.add((min(i, j), max(i, j)))
            edges.append((i, j, random_affine_map(rng, dimension)))
    return ChartComplex.from_edges(dimension, ids, edges)
