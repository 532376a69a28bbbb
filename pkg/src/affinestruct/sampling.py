"""Seeded random generators for maps and block forms used by the harnesses."""

from __future__ import annotations

import numpy as np

from .affine_core import AffineMap


def random_orthogonal(rng: np.random.Generator, n: int) -> np.ndarray:
    q, r = np.linalg.qr(rng.normal(size=(n, n)))
    return q * np.sign(np.diag(r))


def random_gl(rng: np.random.Generator, n: int, spread: float = 0.5) -> np.ndarray:
    """Well-conditioned invertible matrix: Q1 diag(e^s) Q2 with |s| <= spread."""
    s = np.exp(rng.uniform(-spread, spread, size=n))
    return random_orthogonal(rng, n) @ np.diag(s) @ random_orthogonal(rng, n)


def random_affine_map(rng: np.random.Generator, n: int, spread: float = 0.5, shift: float = 1.0) -> AffineMap:
    return AffineMap(random_gl(rng, n, spread), shift * rng.normal(size=n))


def gl_without_eigenvalue_one(rng: np.random.Generator, n: int, gap: float = 0.2) -> np.ndarray:
    """P diag(lam) P^-1 with real eigenvalues |lam - 1| >= gap and |lam| >= gap (gap <= 1/2)."""
    lam = rng.uniform(gap, 1.5, size=n) * rng.choice([-1.0, 1.0], size=n) + 1.0
    # keep away from singular too
    lam = np.where(np.abs(lam) < gap, np.copysign(gap, lam), lam)
    p = random_gl(rng, n, 0.3)
    return p @ np.diag(lam) @ np.linalg.inv(p)


def gl_with_eigenvector(rng: np.random.Generator, n: int, u: np.ndarray) -> np.ndarray:
    """Invertible A with A u = u."""
    u = np.asarray(u, dtype=float)
    u = u / np.linalg.norm(u)
    # orthonormal completion with u first
    q = random_orthogonal(rng, n)
    q[:, 0] = u
    q, _ = np.linalg.qr(q)
    if q[:, 0] @ u < 0:
        q[:, 0] *= -1
    block = np.eye(n)
    if n > 1:
        block[0, 1:] = rng.normal(size=n - 1) * 0.5
        block[1:, 1:] = random_gl(rng, n - 1, 0.4)
    return q @ block @ q.T
