"""Lattice geometry: bases, unit-covolume normalization, dual lattices,
shell enumeration, and 2D Wigner-Seitz cells."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, RangeError

__all__ = [
    "Lattice",
    "Cell",
    "Shell",
    "make_triangular",
    "make_square",
    "make_integers_1d",
    "dual",
    "shells",
    "wigner_seitz",
]

# absolute tolerance for grouping lattice-vector norms into shells
SHELL_GROUP_TOL = 1e-9


@dataclass(frozen=True)
class Lattice:
    """Full-rank lattice given by basis columns; covolume is |det(basis)|."""

    dimension: int
    basis: np.ndarray
    covolume: float = field(default=0.0)

    def __post_init__(self):
        basis = np.asarray(self.basis, dtype=float)
        if basis.shape != (self.dimension, self.dimension):
            raise DomainError("basis must be a d x d matrix")
        det = float(np.linalg.det(basis))
        if abs(det) < 1e-12:
            raise DomainError("basis is singular")
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "covolume", abs(det))

    def normalize(self) -> "Lattice":
        """Rescale the basis so the covolume becomes exactly 1."""
        scale = self.covolume ** (-1.0 / self.dimension)
        return Lattice(self.dimension, self.basis * scale)

    def scaled(self, factor: float) -> "Lattice":
        return Lattice(self.dimension, self.basis * factor)

    def to_json(self) -> str:
        return json.dumps(
            {
                "dimension": self.dimension,
                "basis": [float(x) for x in self.basis.reshape(-1)],
                "covolume": self.covolume,
            }
        )

    @staticmethod
    def from_json(text: str) -> "Lattice":
        data = json.loads(text)
        d = int(data["dimension"])
        basis = np.array(data["basis"], dtype=float).reshape(d, d)
        return Lattice(d, basis)


@dataclass(frozen=True)
class Cell:
    """Planar Wigner-Seitz cell: convex, centrally symmetric, CCW vertices."""

    vertices: np.ndarray
    area: float


@dataclass(frozen=True)
class Shell:
    """All lattice vectors sharing one norm."""

    radius: float
    points: np.ndarray


def make_triangular() -> Lattice:
    """Unit-covolume triangular lattice, basis c(1,0) and c(1/2, sqrt(3)/2)
    with c^2 = 2/sqrt(3)."""
    c = math.sqrt(2.0 / math.sqrt(3.0))
    basis = np.array([[c, 0.5 * c], [0.0, 0.5 * math.sqrt(3.0) * c]])
    return Lattice(2, basis)


def make_square(d: int = 2) -> Lattice:
    """Integer lattice Z^d."""
    if d < 1:
        raise DomainError("dimension must be >= 1")
    return Lattice(d, np.eye(d))


def make_integers_1d() -> Lattice:
    """The one-dimensional lattice Z."""
    return Lattice(1, np.array([[1.0]]))


def dual(lat: Lattice) -> Lattice:
    """Dual lattice (inverse-transpose basis); covolume inverts."""
    return Lattice(lat.dimension, np.linalg.inv(lat.basis).T)


def _integer_ranges(lat: Lattice, r_max: float) -> np.ndarray:
    # |n_i| <= r_max * |row_i of basis^-1|
    inv = np.linalg.inv(lat.basis)
    bounds = np.ceil(r_max * np.linalg.norm(inv, axis=1) + 1e-9).astype(int)
    grids = np.meshgrid(*[np.arange(-b, b + 1) for b in bounds], indexing="ij")
    return np.stack([g.reshape(-1) for g in grids], axis=1)


def shells(lat: Lattice, r_max: float) -> list[Shell]:
    """All nonzero lattice vectors of norm <= r_max, grouped by norm."""
    if r_max <= 0:
        raise DomainError("r_max must be positive")
    coords = _integer_ranges(lat, r_max)
    vectors = coords @ lat.basis.T
    norms = np.linalg.norm(vectors, axis=1)
    keep = (norms > 0.5 * SHELL_GROUP_TOL) & (norms <= r_max + SHELL_GROUP_TOL)
    vectors, norms = vectors[keep], norms[keep]
    order = np.argsort(norms, kind="stable")
    vectors, norms = vectors[order], norms[order]

    result: list[Shell] = []
    start = 0
    for i in range(1, len(norms) + 1):
        if i == len(norms) or norms[i] - norms[start] > SHELL_GROUP_TOL:
            result.append(Shell(float(np.mean(norms[start:i])), vectors[start:i]))
            start = i
    return result


def _clip_halfplane(vertices: np.ndarray, normal: np.ndarray, offset: float) -> np.ndarray:
    # keep the region normal . x <= offset (Sutherland-Hodgman step)
    out = []
    n = len(vertices)
    for i in range(n):
        cur, nxt = vertices[i], vertices[(i + 1) % n]
        c_in = np.dot(normal, cur) <= offset + 1e-13
        n_in = np.dot(normal, nxt) <= offset + 1e-13
        if c_in:
            out.append(cur)
        if c_in != n_in:
            t = (offset - np.dot(normal, cur)) / np.dot(normal, nxt - cur)
            out.append(cur + t * (nxt - cur))
    return np.array(out) if out else np.empty((0, 2))


def _dedupe_ring(vertices: np.ndarray, tol: float = 1e-11) -> np.ndarray:
    keep = []
    for v in vertices:
        if not keep or np.linalg.norm(v - keep[-1]) > tol:
            keep.append(v)
    if len(keep) > 1 and np.linalg.norm(keep[0] - keep[-1]) <= tol:
        keep.pop()
    return np.array(keep)


def wigner_seitz(lat: Lattice) -> Cell:
    """Wigner-Seitz cell of a 2D lattice by half-plane intersection over the
    first two neighbor shells."""
    if lat.dimension != 2:
        raise RangeError("Wigner-Seitz cells are constructed in d = 2 only")
    r = 2.5 * lat.covolume**0.5
    first_shells = shells(lat, r)
    while len(first_shells) < 2:
        r *= 1.6
        first_shells = shells(lat, r)
    neighbors = first_shells[:2]
    box = 10.0 * neighbors[-1].radius
    poly = np.array([[-box, -box], [box, -box], [box, box], [-box, box]])
    for shell in neighbors:
        for v in shell.points:
            poly = _clip_halfplane(poly, v, 0.5 * float(np.dot(v, v)))
    poly = _dedupe_ring(poly)
    # order CCW around the origin
    ang = np.arctan2(poly[:, 1], poly[:, 0])
    poly = poly[np.argsort(ang)]
    area = 0.5 * float(
        np.sum(poly[:, 0] * np.roll(poly[:, 1], -1) - np.roll(poly[:, 0], -1) * poly[:, 1])
    )
    return Cell(poly, abs(area))
