"""Affine group algebra over R^n.

An :class:`AffineMap` is the pair (linear part, translation) acting by
``p -> linear @ p + translation``.  Values are immutable; every operation
returns a new map.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, InvalidWord, SingularMap

TOL = 1e-9
DET_TOL = 1e-12
RANK_TOL = 1e-9


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class AffineMap:
    linear: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        linear = _frozen(self.linear)
        translation = _frozen(self.translation)
        if linear.ndim != 2 or linear.shape[0] != linear.shape[1] or linear.shape[0] < 1:
            raise DimensionMismatch(f"linear part must be square, got shape {linear.shape}")
        if translation.shape != (linear.shape[0],):
            raise DimensionMismatch(
                f"translation has shape {translation.shape}, expected ({linear.shape[0]},)"
            )
        if not (np.all(np.isfinite(linear)) and np.all(np.isfinite(translation))):
            raise SingularMap("non-finite entries")
        det = np.linalg.det(linear)
        if abs(det) < DET_TOL:
            raise SingularMap(f"|det| = {abs(det):.3g} below {DET_TOL:g}")
        object.__setattr__(self, "linear", linear)
        object.__setattr__(self, "translation", translation)

    @property
    def dim(self) -> int:
        return self.linear.shape[0]

    @classmethod
    def identity(cls, n: int) -> "AffineMap":
        return cls(np.eye(n), np.zeros(n))

    @classmethod
    def translation_by(cls, v: Sequence[float]) -> "AffineMap":
        v = np.asarray(v, dtype=float)
        return cls(np.eye(v.size), v)

    @classmethod
    def linear_map(cls, m) -> "AffineMap":
        m = np.asarray(m, dtype=float)
        return cls(m, np.zeros(m.shape[0]))

    def augmented(self) -> np.ndarray:
        """(n+1)x(n+1) homogeneous matrix."""
        n = self.dim
        out = np.eye(n + 1)
        out[:n, :n] = self.linear
        out[:n, n] = self.translation
        return out

    def __matmul__(self, other: "AffineMap") -> "AffineMap":
        return compose(self, other)

    def __call__(self, p) -> np.ndarray:
        return apply(self, p)

    def __repr__(self):
        return f"AffineMap(linear={self.linear.tolist()}, translation={self.translation.tolist()})"

    def to_dict(self) -> dict:
        return {"linear": self.linear.tolist(), "translation": self.translation.tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> "AffineMap":
        return cls(d["linear"], d["translation"])


def maps_close(f: AffineMap, g: AffineMap, atol: float = TOL, rtol: float = TOL) -> bool:
    if f.dim != g.dim:
        return False
    return bool(
        np.allclose(f.linear, g.linear, atol=atol, rtol=rtol)
        and np.allclose(f.translation, g.translation, atol=atol, rtol=rtol)
    )


def _check_dims(f: AffineMap, g: AffineMap):
    if f.dim != g.dim:
        raise DimensionMismatch(f"dimensions {f.dim} and {g.dim} differ")


def compose(f: AffineMap, g: AffineMap) -> AffineMap:
    """Return f o g (apply g first)."""
    _check_dims(f, g)
    return AffineMap(f.linear @ g.linear, f.linear @ g.translation + f.translation)


def inverse(f: AffineMap) -> AffineMap:
    inv = np.linalg.inv(f.linear)
    return AffineMap(inv, -inv @ f.translation)


def apply(f: AffineMap, p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.shape[-1] != f.dim:
        raise DimensionMismatch(f"point of dimension {p.shape[-1]} for a map of dimension {f.dim}")
    # works for a single point or a stack of points (k, n)
    return p @ f.linear.T + f.translation


def power(f: AffineMap, k: int) -> AffineMap:
    """f^k by repeated multiplication; negative k inverts once first."""
    base = inverse(f) if k < 0 else f
    out = AffineMap.identity(f.dim)
    for _ in range(abs(k)):
        out = compose(out, base)
    return out


@dataclass(frozen=True)
class GroupPresentation:
    """Named generators of a finitely generated subgroup of Aff(n, R)."""

    dimension: int
    generators: tuple[tuple[str, AffineMap], ...]

    def __post_init__(self):
        gens = tuple((str(name), m) for name, m in self.generators)
        names = [name for name, _ in gens]
        if len(set(names)) != len(names):
            raise InvalidWord(f"generator names not unique: {names}")
        for name, m in gens:
            if m.dim != self.dimension:
                raise DimensionMismatch(
                    f"generator {name!r} has dimension {m.dim}, presentation has {self.dimension}"
                )
        object.__setattr__(self, "generators", gens)

    @classmethod
    def of(cls, **maps: AffineMap) -> "GroupPresentation":
        items = tuple(maps.items())
        if not items:
            raise InvalidWord("need at least one generator to infer the dimension")
        return cls(items[0][1].dim, items)

    @property
    def names(self) -> list[str]:
        return [name for name, _ in self.generators]

    @property
    def maps(self) -> list[AffineMap]:
        return [m for _, m in self.generators]

    def __len__(self):
        return len(self.generators)

    def __getitem__(self, key) -> AffineMap:
        if isinstance(key, str):
            for name, m in self.generators:
                if name == key:
                    return m
            raise KeyError(key)
        return self.generators[key][1]

    def to_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "generators": [{"name": name, "map": m.to_dict()} for name, m in self.generators],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GroupPresentation":
        gens = tuple((g["name"], AffineMap.from_dict(g["map"])) for g in d["generators"])
        return cls(int(d["dimension"]), gens)


Letter = tuple[int, int]


@dataclass(frozen=True)
class Word:
    letters: tuple[Letter, ...] = ()

    def __post_init__(self):
        letters = tuple((int(i), int(e)) for i, e in self.letters)
        for i, e in letters:
            if e == 0:
                raise InvalidWord("exponents must be nonzero")
            if i < 0:
                raise InvalidWord(f"negative generator index {i}")
        object.__setattr__(self, "letters", letters)

    def __add__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __len__(self):
        return len(self.letters)

    def inverse(self) -> "Word":
        return Word(tuple((i, -e) for i, e in reversed(self.letters)))

    def format(self, names: Sequence[str] | None = None) -> str:
        parts = []
        for i, e in self.letters:
            name = names[i] if names else f"g{i}"
            parts.append(name if e == 1 else f"{name}^{e}")
        return " ".join(parts)


def evaluate_word(G: GroupPresentation, w: Word | Iterable[Letter]) -> AffineMap:
    """Left-to-right product of generator powers; the empty word is the identity."""
    if not isinstance(w, Word):
        w = Word(tuple(w))
    out = AffineMap.identity(G.dimension)
    for i, e in w.letters:
        if i >= len(G):
            raise InvalidWord(f"generator index {i} out of range for {len(G)} generators")
        out = compose(out, power(G[i], e))
    return out


def _rank_split(m: np.ndarray, tol: float):
    """SVD of m with singular values thresholded at tol * max(1, sigma_max)."""
    u, s, vt = np.linalg.svd(m)
    cutoff = tol * max(1.0, s[0] if s.size else 0.0)
    rank = int(np.sum(s > cutoff))
    return u, s, vt, rank


def _canonical_sign(v: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(v)))
    return -v if v[k] < 0 else v


def eigen_one_space(A, tol: float = RANK_TOL) -> np.ndarray:
    """Orthonormal basis (rows) of ker(A - I); shape (0, n) when 1 is not an eigenvalue."""
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    _, _, vt, rank = _rank_split(A - np.eye(n), tol)
    basis = vt[rank:]
    if basis.shape[0] == n:
        # whole space: prefer the standard basis
        return np.eye(n)
    return np.array([_canonical_sign(v) for v in basis]).reshape(-1, n)


@dataclass(frozen=True, eq=False)
class UniqueFixedPoint:
    point: np.ndarray

    def to_dict(self):
        return {"kind": "unique", "point": self.point.tolist()}


@dataclass(frozen=True, eq=False)
class FixedFlat:
    """The affine subspace point + span(directions) of fixed points."""

    point: np.ndarray
    directions: np.ndarray

    @property
    def dimension(self) -> int:
        return self.directions.shape[0]

    def to_dict(self):
        return {
            "kind": "flat",
            "point": self.point.tolist(),
            "directions": self.directions.tolist(),
        }


@dataclass(frozen=True, eq=False)
class NoFixedPoint:
    residual: float

    def to_dict(self):
        return {"kind": "none", "residual": self.residual}


FixedPointResult = UniqueFixedPoint | FixedFlat | NoFixedPoint


def fixed_points(f: AffineMap, tol: float = TOL) -> FixedPointResult:
    """Solve (A - I) x = -b."""
    n = f.dim
    m = f.linear - np.eye(n)
    rhs = -f.translation
    u, s, vt, rank = _rank_split(m, RANK_TOL)
    if rank == n:
        return UniqueFixedPoint(_frozen(np.linalg.solve(m, rhs)))
    # minimum-norm least-squares solution on the numerically nonsingular part
    coeffs = (u[:, :rank].T @ rhs) / s[:rank]
    x = vt[:rank].T @ coeffs
    residual = float(np.linalg.norm(m @ x - rhs))
    if residual > tol * max(1.0, float(np.linalg.norm(rhs))):
        return NoFixedPoint(residual)
    directions = np.eye(n) if rank == 0 else np.array([_canonical_sign(v) for v in vt[rank:]])
    return FixedFlat(_frozen(x), _frozen(directions))
