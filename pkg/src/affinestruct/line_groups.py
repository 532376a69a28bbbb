"""Affine maps of R x R^n preserving the line R x 0.

Such a map has block form::

    [ r  w ] [ d ]
    [ 0  A ] [ 0 ]

with r != 0 and A invertible.  This module decomposes maps into that form,
normalizes the shear row by conjugation, extracts fixed-point witnesses, and
classifies cyclic groups generated by a single line-preserving map.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .affine_core import (
    DET_TOL,
    TOL,
    AffineMap,
    GroupPresentation,
    apply,
    compose,
    eigen_one_space,
    inverse,
    maps_close,
)
from .errors import (
    DimensionMismatch,
    EigenvalueOne,
    NotAnEigenvector,
    NotLinePreserving,
    ScalesLine,
    SingularMap,
)

ORBIT_HORIZON = 60
ORBIT_TARGET = 1e-6

MAPPING_TORUS_NOTE = (
    "CompleteObstruction: the quotient by this cyclic group is the mapping torus of the "
    "transverse linear part; a closed oriented (n+1)-manifold cannot arise this way since "
    "the top homology of a mapping torus of R^n vanishes. Reported, not computed."
)


@dataclass(frozen=True, eq=False)
class BlockForm:
    r: float
    w: np.ndarray
    A: np.ndarray
    d: float

    def __post_init__(self):
        w = np.array(self.w, dtype=float).reshape(-1)
        A = np.array(self.A, dtype=float).reshape(w.size, w.size)
        w.setflags(write=False)
        A.setflags(write=False)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "r", float(self.r))
        object.__setattr__(self, "d", float(self.d))
        if abs(self.r) <= DET_TOL:
            raise SingularMap("line scaling r must be nonzero")
        if abs(np.linalg.det(A)) <= DET_TOL:
            raise SingularMap("transverse block A must be invertible")

    @property
    def n(self) -> int:
        """Transverse dimension."""
        return self.w.size

    def to_affine(self) -> AffineMap:
        n = self.n
        linear = np.zeros((n + 1, n + 1))
        linear[0, 0] = self.r
        linear[0, 1:] = self.w
        linear[1:, 1:] = self.A
        translation = np.zeros(n + 1)
        translation[0] = self.d
        return AffineMap(linear, translation)

    def to_dict(self) -> dict:
        return {"r": self.r, "w": self.w.tolist(), "A": self.A.tolist(), "d": self.d}


def reassemble(h: BlockForm) -> AffineMap:
    return h.to_affine()


def block_decompose(f: AffineMap, tol: float = TOL) -> BlockForm:
    if f.dim < 2:
        raise DimensionMismatch("line-preserving maps need dimension n+1 >= 2")
    col = f.linear[1:, 0]
    trans = f.translation[1:]
    offending = {}
    if np.any(np.abs(col) > tol):
        offending["linear_first_column"] = col.tolist()
    if np.any(np.abs(trans) > tol):
        offending["translation_tail"] = trans.tolist()
    if offending:
        raise NotLinePreserving(
            "map does not preserve the line R x 0: " + ", ".join(f"{k}={v}" for k, v in offending.items()),
            offending,
        )
    return BlockForm(f.linear[0, 0], f.linear[0, 1:], f.linear[1:, 1:], f.translation[0])


def _as_block(h) -> BlockForm:
    return h if isinstance(h, BlockForm) else block_decompose(h)


def _require_unit_scaling(h: BlockForm, tol: float):
    if abs(h.r - 1.0) > tol:
        raise ScalesLine(f"element scales the invariant line by r = {h.r:.6g}")


def translation_character(h, tol: float = TOL) -> float:
    """Translation along the invariant line; a homomorphism on the r = 1 subgroup."""
    h = _as_block(h)
    _require_unit_scaling(h, tol)
    return h.d


def shear(v) -> AffineMap:
    """Linear shear (x, y) -> (x + v.y, y)."""
    v = np.asarray(v, dtype=float).reshape(-1)
    linear = np.eye(v.size + 1)
    linear[0, 1:] = v
    return AffineMap(linear, np.zeros(v.size + 1))


def conjugate(c: AffineMap, f: AffineMap) -> AffineMap:
    """c o f o c^-1."""
    return compose(compose(c, f), inverse(c))


def shear_normal_form(h, tol: float = TOL) -> tuple[AffineMap, BlockForm]:
    """Kill the shear row w by conjugating with a shear along the line.

    Conjugating by the shear with row v turns w into w + v(A - I), so v is the
    solution of v(A - I) = -w.  Requires 1 not to be an eigenvalue of A.
    """
    h = _as_block(h)
    _require_unit_scaling(h, tol)
    if eigen_one_space(h.A).shape[0]:
        raise EigenvalueOne("A - I is singular; the shear row cannot be normalized away")
    m = h.A - np.eye(h.n)
    v = np.linalg.solve(m.T, -h.w)
    return shear(v), BlockForm(h.r, h.w + v @ m, h.A, h.d)


def freeness_violation_witness(h, u, tol: float = TOL) -> np.ndarray | None:
    """Point (0, k u) fixed by h when w.u != 0, else None."""
    h = _as_block(h)
    _require_unit_scaling(h, tol)
    u = np.asarray(u, dtype=float).reshape(-1)
    if u.size != h.n:
        raise DimensionMismatch(f"u has length {u.size}, expected {h.n}")
    if not np.allclose(h.A @ u, u, atol=tol, rtol=0.0):
        raise NotAnEigenvector("A u != u")
    wu = float(h.w @ u)
    if abs(wu) <= tol:
        return None
    k = -h.d / wu
    return np.concatenate([[0.0], k * u])


class Tag(str, enum.Enum):
    NonProperScaling = "NonProperScaling"
    LineFixedPoints = "LineFixedPoints"
    FreenessViolation = "FreenessViolation"
    NonCompactInvariantPlane = "NonCompactInvariantPlane"
    MappingTorus = "MappingTorus"
    CompleteObstruction = "CompleteObstruction"


@dataclass(frozen=True, eq=False)
class ClassificationVerdict:
    tag: Tag
    witness: dict[str, Any]
    notes: str = ""
    subject: AffineMap | None = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {"tag": self.tag.value, "witness": _jsonable(self.witness), "notes": self.notes}


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (AffineMap, BlockForm)):
        return x.to_dict()
    if isinstance(x, np.generic):
        return x.item()
    return x


def _contracting_orbit(h: AffineMap, b: BlockForm, horizon: int, target: float) -> dict:
    x_fixed = b.d / (1.0 - b.r)
    fixed = np.zeros(h.dim)
    fixed[0] = x_fixed
    # iterate the map that contracts toward the line fixed point
    step, direction = (h, "forward") if abs(b.r) < 1.0 else (inverse(h), "backward")
    p = fixed.copy()
    p[0] += 1.0
    orbit = [p]
    distances = [float(np.linalg.norm(p - fixed))]
    while len(orbit) <= horizon and distances[-1] >= target:
        p = apply(step, p)
        orbit.append(p)
        distances.append(float(np.linalg.norm(p - fixed)))
    return {
        "line_fixed_point": fixed,
        "direction": direction,
        "orbit": np.array(orbit),
        "distances": distances,
        "reached_target": distances[-1] < target,
    }


def classify_cyclic(
    h: AffineMap,
    tol: float = TOL,
    horizon: int = ORBIT_HORIZON,
    target: float = ORBIT_TARGET,
) -> ClassificationVerdict:
    """Run the complete-structure decision tree on the cyclic group generated by h."""
    b = block_decompose(h, tol)
    notes = []
    subject = h
    if b.r < 0:
        subject = compose(h, h)
        b = block_decompose(subject, tol)
        notes.append("input reverses the line; classified its square (index-two subgroup)")

    if abs(b.r - 1.0) > tol:
        witness = _contracting_orbit(subject, b, horizon, target)
        if not witness["reached_target"]:
            notes.append(f"orbit did not reach {target:g} within {horizon} iterations")
        return ClassificationVerdict(Tag.NonProperScaling, witness, "; ".join(notes), subject)

    if abs(b.d) <= tol:
        witness = {"fixed_point": np.zeros(subject.dim)}
        return ClassificationVerdict(Tag.LineFixedPoints, witness, "; ".join(notes), subject)

    kernel = eigen_one_space(b.A)
    if kernel.shape[0] == 0:
        conj, normalized = shear_normal_form(b, tol)
        witness = {"conjugator": conj, "normalized": normalized, "transverse_linear": b.A}
        notes.append(MAPPING_TORUS_NOTE)
        return ClassificationVerdict(Tag.MappingTorus, witness, "; ".join(notes), subject)

    pairings = np.abs(kernel @ b.w)
    best = int(np.argmax(pairings))
    if pairings[best] > tol:
        u = kernel[best]
        point = freeness_violation_witness(b, u, tol)
        witness = {"fixed_point": point, "eigenvector": u}
        return ClassificationVerdict(Tag.FreenessViolation, witness, "; ".join(notes), subject)

    u = kernel[0]
    e1 = np.zeros(subject.dim)
    e1[0] = 1.0
    witness = {"plane_basis": np.array([e1, np.concatenate([[0.0], u])])}
    notes.append("invariant plane quotient is a non-compact cylinder")
    return ClassificationVerdict(Tag.NonCompactInvariantPlane, witness, "; ".join(notes), subject)


def verify_verdict(v: ClassificationVerdict, tol: float = TOL, target: float = ORBIT_TARGET) -> bool:
    """Replay the witness carried by a verdict against its classified map."""
    h = v.subject
    w = v.witness
    if v.tag in (Tag.LineFixedPoints, Tag.FreenessViolation):
        p = np.asarray(w["fixed_point"])
        return bool(np.allclose(apply(h, p), p, atol=tol, rtol=0.0))
    if v.tag is Tag.NonProperScaling:
        d = np.asarray(w["distances"])
        fixed = np.asarray(w["line_fixed_point"])
        step = h if w["direction"] == "forward" else inverse(h)
        if not np.allclose(apply(step, fixed), fixed, atol=tol, rtol=0.0):
            return False
        orbit = np.asarray(w["orbit"])
        replayed = [orbit[0]]
        for _ in range(len(orbit) - 1):
            replayed.append(apply(step, replayed[-1]))
        return bool(
            np.allclose(replayed, orbit, atol=tol, rtol=tol)
            and np.all(np.diff(d) < 0)
            and d[-1] < target
        )
    if v.tag is Tag.NonCompactInvariantPlane:
        basis = np.asarray(w["plane_basis"])
        rng = np.random.default_rng(0)
        pts = rng.normal(size=(16, 2)) @ basis
        images = apply(h, pts)
        # residual after projecting onto span(basis); basis is orthonormal
        resid = images - (images @ basis.T) @ basis
        return bool(np.all(np.abs(resid) <= tol))
    if v.tag is Tag.MappingTorus:
        conj = w["conjugator"]
        normalized = w["normalized"]
        return bool(
            np.all(np.abs(normalized.w) <= tol)
            and maps_close(conjugate(conj, h), normalized.to_affine(), atol=tol, rtol=tol)
        )
    return False


def radiant_conjugator(G: GroupPresentation, tol: float = TOL):
    """Common fixed point of all generators, or None.

    Returns ``(p, conj, linearized)`` where ``conj`` translates p to the origin
    and ``linearized`` is the presentation conjugated by it.
    """
    n = G.dimension
    m = np.vstack([g.linear - np.eye(n) for g in G.maps])
    rhs = np.concatenate([-g.translation for g in G.maps])
    p, *_ = np.linalg.lstsq(m, rhs, rcond=None)
    residual = max(float(np.linalg.norm(apply(g, p) - p)) for g in G.maps)
    if residual >= tol:
        return None
    conj = AffineMap.translation_by(-p)
    linearized = GroupPresentation(n, tuple((name, conjugate(conj, g)) for name, g in G.generators))
    return p, conj, linearized


GROUP_TAGS = ("G", "G_plus", "P", "G_trans", "G_trans_refl")


def membership(f: AffineMap, group_tag: str, tol: float = TOL) -> bool:
    """Structural membership in one of the line-related subgroups.

    G: preserves R x 0.  G_plus: also r > 0.  P: fixes the direction e1 with
    r = 1, translation free.  G_trans: r = 1.  G_trans_refl: r = +-1.
    """
    if group_tag not in GROUP_TAGS:
        raise ValueError(f"unknown group tag {group_tag!r}; expected one of {GROUP_TAGS}")
    if f.dim < 2:
        return False
    col = f.linear[:, 0]
    if group_tag == "P":
        return bool(abs(col[0] - 1.0) <= tol and np.all(np.abs(col[1:]) <= tol))
    try:
        b = block_decompose(f, tol)
    except NotLinePreserving:
        return False
    if group_tag == "G":
        return True
    if group_tag == "G_plus":
        return b.r > tol
    if group_tag == "G_trans":
        return abs(b.r - 1.0) <= tol
    return abs(abs(b.r) - 1.0) <= tol
