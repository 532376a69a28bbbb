"""Render orbit copies of a fundamental polygon under a planar affine group as SVG."""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from shapely.geometry import GeometryCollection, MultiPolygon, Polygon, box

from .affine_core import AffineMap, GroupPresentation, apply, compose, inverse
from .errors import InvalidParameter

FINGERPRINT_STEP = 1e-7
DEFAULT_VIEWPORT = ((-1.0, -1.0), (5.0, 3.0))
PIXELS_PER_UNIT = 100
GREEK = {"alpha": "α", "beta": "β", "gamma": "γ", "delta": "δ"}


@dataclass(frozen=True, eq=False)
class TilingJob:
    polygon: np.ndarray
    group: GroupPresentation
    max_word_length: int = 6
    viewport: tuple = DEFAULT_VIEWPORT
    output: str | None = None
    edge_labels: tuple | None = None

    def __post_init__(self):
        poly = np.array(self.polygon, dtype=float)
        if poly.ndim != 2 or poly.shape[1] != 2 or poly.shape[0] < 3:
            raise InvalidParameter("polygon needs at least 3 planar vertices")
        shape = Polygon(poly)
        if not shape.is_valid or not shape.exterior.is_simple:
            raise InvalidParameter("polygon must be simple")
        if not shape.exterior.is_ccw:
            raise InvalidParameter("polygon vertices must be listed counterclockwise")
        if self.group.dimension != 2:
            raise InvalidParameter(f"tiling needs a planar group, got dimension {self.group.dimension}")
        if self.max_word_length < 0:
            raise InvalidParameter("max_word_length must be >= 0")
        (x0, y0), (x1, y1) = self.viewport
        if not (x1 > x0 and y1 > y0):
            raise InvalidParameter("viewport needs positive extent in both axes")
        poly.setflags(write=False)
        object.__setattr__(self, "polygon", poly)
        object.__setattr__(self, "viewport", ((float(x0), float(y0)), (float(x1), float(y1))))


Letter = tuple  # (generator index, +1 or -1)


def _letter_key(letter):
    i, e = letter
    return (i, 0 if e > 0 else 1)


def word_key(word) -> tuple:
    return tuple(_letter_key(x) for x in word)


def fingerprint(f: AffineMap, step: float = FINGERPRINT_STEP) -> tuple:
    entries = np.concatenate([f.linear.ravel(), f.translation])
    return tuple(np.round(entries / step).astype(np.int64).tolist())


def enumerate_group_elements(G: GroupPresentation, max_length: int) -> list[tuple[tuple, AffineMap]]:
    """Reduced words up to ``max_length`` with their maps, one per distinct map.

    Generators are treated as free.  Shorter words claim a fingerprint first;
    within a length, lexicographic order decides.
    """
    letters = sorted(((i, e) for i in range(len(G)) for e in (1, -1)), key=_letter_key)
    step = {(i, 1): G[i] for i in range(len(G))}
    step.update({(i, -1): inverse(G[i]) for i in range(len(G))})

    identity = AffineMap.identity(G.dimension)
    seen = {fingerprint(identity)}
    kept = [((), identity)]
    frontier = [((), identity)]
    for _ in range(max_length):
        nxt = []
        for word, f in frontier:
            for letter in letters:
                if word and word[-1] == (letter[0], -letter[1]):
                    continue
                g = compose(f, step[letter])
                w = word + (letter,)
                # reduced words keep extending even if their map was seen
                nxt.append((w, g))
                fp = fingerprint(g)
                if fp not in seen:
                    seen.add(fp)
                    kept.append((w, g))
        frontier = nxt
    kept.sort(key=lambda item: word_key(item[0]))
    return kept


def format_word(word, names) -> str:
    return " ".join(names[i] if e == 1 else f"{names[i]}^-1" for i, e in word)


def _fmt(x: float) -> str:
    return "%.12g" % (float(x) + 0.0)


def _path_d(points) -> str:
    pts = list(points)
    head = f"M{_fmt(pts[0][0])} {_fmt(pts[0][1])}"
    return head + "".join(f" L{_fmt(x)} {_fmt(y)}" for x, y in pts[1:]) + " Z"


def _pieces(geom):
    if isinstance(geom, Polygon):
        return [] if geom.is_empty else [geom]
    if isinstance(geom, (MultiPolygon, GeometryCollection)):
        return [g for part in geom.geoms for g in _pieces(part)]
    return []


@dataclass(frozen=True, eq=False)
class TileCopy:
    word: tuple
    label: str
    polygons: list  # list of (k, 2) arrays
    clipped: bool


def tiling_copies(job: TilingJob) -> list[TileCopy]:
    (x0, y0), (x1, y1) = job.viewport
    window = box(x0, y0, x1, y1)
    names = job.group.names
    copies = []
    for word, f in enumerate_group_elements(job.group, job.max_word_length):
        pts = apply(f, job.polygon)
        label = format_word(word, names)
        inside = np.all((pts[:, 0] >= x0) & (pts[:, 0] <= x1) & (pts[:, 1] >= y0) & (pts[:, 1] <= y1))
        if inside:
            copies.append(TileCopy(word, label, [pts], False))
            continue
        pieces = _pieces(Polygon(pts).intersection(window))
        pieces = [p for p in pieces if p.area > 0]
        if pieces:
            copies.append(TileCopy(word, label, [np.array(p.exterior.coords)[:-1] for p in pieces], True))
    return copies


def render_tiling(job: TilingJob) -> str:
    (x0, y0), (x1, y1) = job.viewport
    w, h = x1 - x0, y1 - y0
    svg = ET.Element(
        "svg",
        xmlns="http://www.w3.org/2000/svg",
        version="1.1",
        width=_fmt(w * PIXELS_PER_UNIT),
        height=_fmt(h * PIXELS_PER_UNIT),
        viewBox=f"{_fmt(x0)} {_fmt(-y1)} {_fmt(w)} {_fmt(h)}",
    )
    # model y points up
    root = ET.SubElement(svg, "g", transform="scale(1,-1)", fill="none", stroke="black")
    for copy in tiling_copies(job):
        identity = not copy.word
        for poly in copy.polygons:
            attrs = {
                "d": _path_d(poly),
                "data-word": copy.label,
                "stroke-width": "1",
                "vector-effect": "non-scaling-stroke",
            }
            if identity:
                attrs.update({"class": "fundamental", "stroke": "red", "stroke-width": "2"})
            elif copy.clipped:
                attrs["class"] = "clipped"
            ET.SubElement(root, "path", attrs)
    _edge_labels(svg, job)
    text = ET.tostring(svg, encoding="unicode")
    if job.output:
        Path(job.output).write_text(text + "\n", encoding="utf-8")
    return text


def _edge_labels(svg, job: TilingJob):
    poly = job.polygon
    k = poly.shape[0]
    labels = job.edge_labels or (
        tuple(GREEK.values()) if k == 4 else tuple(f"e{i + 1}" for i in range(k))
    )
    labels = [GREEK.get(lab, lab) for lab in labels]
    size = 0.03 * min(job.viewport[1][0] - job.viewport[0][0], job.viewport[1][1] - job.viewport[0][1])
    group = ET.SubElement(svg, "g", {"class": "edge-labels", "font-size": _fmt(size), "fill": "red"})
    centroid = poly.mean(axis=0)
    for i in range(k):
        mid = 0.5 * (poly[i] + poly[(i + 1) % k])
        # nudge toward the interior so labels sit inside the fundamental domain
        pos = mid + 0.12 * (centroid - mid)
        ET.SubElement(
            group, "text", x=_fmt(pos[0]), y=_fmt(-pos[1]), **{"text-anchor": "middle"}
        ).text = labels[i]


def parse_tiling(svg_text: str) -> dict[str, list[np.ndarray]]:
    """Map each data-word label to the vertex arrays of its path elements."""
    root = ET.fromstring(svg_text)
    out: dict[str, list[np.ndarray]] = {}
    for el in root.iter("{http://www.w3.org/2000/svg}path"):
        tokens = el.get("d").replace("M", " ").replace("L", " ").replace("Z", " ").split()
        pts = np.array([float(t) for t in tokens]).reshape(-1, 2)
        out.setdefault(el.get("data-word"), []).append(pts)
    return out


def edge_gluing_check(
    svg_text: str,
    group: GroupPresentation,
    generator: str = "b",
    source_edge: int = 3,
    target_edge: int = 1,
) -> dict:
    """Check that ``generator`` carries edge ``source_edge`` of the identity copy onto
    edge ``target_edge`` of the identity copy, and that the rendered copy agrees.

    Edge i runs from vertex i to vertex i+1.  For the similarity torus the
    defaults check that b maps delta onto beta, i.e. delta' of bQ is glued to beta of Q.
    """
    copies = parse_tiling(svg_text)
    base = copies[""][0]
    image = copies[generator][0]
    g = group[generator]
    k = base.shape[0]

    def edge(poly, i):
        return np.array([poly[i], poly[(i + 1) % k]])

    mapped = apply(g, edge(base, source_edge))
    rendered = edge(image, source_edge)
    target = edge(base, target_edge)
    render_err = float(np.max(np.abs(mapped - rendered)))
    # glued edges have opposite orientation
    glue_err = float(np.max(np.abs(mapped - target[::-1])))
    return {"render_error": render_err, "gluing_error": glue_err}
