"""Vietoris-Rips filtrations and persistent homology in dimensions 0-2.

Two routes produce barcodes:

* the explicit route: :func:`build_vr_filtration` enumerates simplices as
  Python objects and :func:`compute_persistence` runs the textbook column
  reduction of the mod-2 boundary matrix.  Transparent, handles any
  filtration, and is the reference for small complexes.
* the array route: :func:`rips_barcode` dispatches to numba kernels
  (see ``_reduction``) that compute the identical barcode orders of
  magnitude faster.  This is what the per-point scoring loop uses.

The two are tested against each other and against a brute-force oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .core import INF, Barcode
from . import _reduction


@dataclass(frozen=True)
class Simplex:
    """A simplex given by its sorted vertex tuple and appearance scale.

    The scale is the diameter of the vertex set (0 for vertices), so every
    face appears no later than the simplex itself.
    """

    vertices: tuple[int, ...]
    value: float

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    def faces(self):
        v = self.vertices
        return [tuple(v[i] for i in range(len(v)) if i != k) for k in range(len(v))]


@dataclass(frozen=True)
class Filtration:
    """Simplices sorted by (value, dimension, vertex lexicographic order)."""

    simplices: tuple[Simplex, ...]
    eps_max: float

    def __len__(self) -> int:
        return len(self.simplices)

    def index_of(self) -> dict[tuple[int, ...], int]:
        return {s.vertices: i for i, s in enumerate(self.simplices)}


def build_vr_filtration(dist: np.ndarray, max_dim: int, eps_max: float) -> Filtration:
    """Enumerate every simplex of dimension <= max_dim whose diameter is
    <= eps_max, in filtration order.

    ``dist`` is a symmetric distance matrix restricted to the vertex set.
    ``eps_max`` may be 0 (degenerate complexes of coincident points).
    """
    dist = np.asarray(dist, dtype=np.float64)
    if dist.ndim != 2 or dist.shape[0] != dist.shape[1]:
        raise ValueError("dist must be a square matrix")
    if max_dim not in (1, 2, 3):
        raise ValueError(f"max_dim must be in {{1, 2, 3}}, got {max_dim}")
    if eps_max < 0:
        raise ValueError(f"eps_max must be nonnegative, got {eps_max}")

    n = dist.shape[0]
    simplices: list[Simplex] = [Simplex((i,), 0.0) for i in range(n)]
    for size in range(2, max_dim + 2):
        for verts in combinations(range(n), size):
            diam = max(dist[a, b] for a, b in combinations(verts, 2))
            if diam <= eps_max:
                simplices.append(Simplex(verts, float(diam)))
    simplices.sort(key=lambda s: (s.value, s.dim, s.vertices))
    return Filtration(tuple(simplices), float(eps_max))


@dataclass(frozen=True)
class PersistencePairing:
    """Output of the reduction: (birth index, death index) pairs into the
    filtration, plus the indices of essential (never-dying) simplices."""

    pairs: tuple[tuple[int, int], ...]
    essential: tuple[int, ...]


def compute_persistence(filtration: Filtration) -> PersistencePairing:
    """Standard left-to-right column reduction of the mod-2 boundary matrix.

    Columns are kept as sparse sets of row indices; a column whose lowest
    remaining 1 sits in row r pairs simplex r (birth) with this simplex
    (death); columns that reduce to zero are essential candidates.
    """
    index_of = filtration.index_of()
    m = len(filtration)
    columns: list[set[int] | None] = [None] * m
    pivot_owner: dict[int, int] = {}
    pairs: list[tuple[int, int]] = []

    for j, s in enumerate(filtration.simplices):
        if s.dim == 0:
            continue
        col = set()
        for face in s.faces():
            col ^= {index_of[face]}
        while col:
            low = max(col)
            owner = pivot_owner.get(low)
            if owner is None:
                pivot_owner[low] = j
                pairs.append((low, j))
                columns[j] = col
                break
            col ^= columns[owner]

    paired = {i for p in pairs for i in p}
    essential = tuple(i for i in range(m) if i not in paired)
    return PersistencePairing(tuple(pairs), essential)


def barcode(
    pairing: PersistencePairing, filtration: Filtration, dims=(0, 1, 2)
) -> Barcode:
    """Turn a pairing into per-dimension intervals.

    Essential classes get infinite death; zero-length intervals are dropped.
    """
    dims = set(dims)
    if not dims <= {0, 1, 2}:
        raise ValueError(f"dims must be a subset of {{0, 1, 2}}, got {dims}")
    bc = Barcode()
    simplices = filtration.simplices
    for birth_i, death_i in pairing.pairs:
        dim = simplices[birth_i].dim
        if dim in dims:
            bc.add(dim, simplices[birth_i].value, simplices[death_i].value)
    for i in pairing.essential:
        dim = simplices[i].dim
        if dim in dims:
            bc.add(dim, simplices[i].value, INF)
    return bc


def finite_bars(bc: Barcode, dim: int) -> list[tuple[float, float]]:
    """All finite intervals of the given dimension."""
    if dim not in (0, 1, 2):
        raise ValueError(f"dim must be in {{0, 1, 2}}, got {dim}")
    return bc.finite(dim)


def rips_barcode(
    dist: np.ndarray, max_dim: int, eps_max: float, dims=(0, 1, 2)
) -> Barcode:
    """Barcode of the Vietoris-Rips filtration, computed by the fast array
    engine.  Equivalent to build + reduce + barcode on the same inputs."""
    dims = set(dims)
    if not dims <= {0, 1, 2}:
        raise ValueError(f"dims must be a subset of {{0, 1, 2}}, got {dims}")
    if max_dim not in (1, 2, 3):
        raise ValueError(f"max_dim must be in {{1, 2, 3}}, got {max_dim}")
    dist = np.ascontiguousarray(dist, dtype=np.float64)
    raw = _reduction.rips_persistence(dist, float(eps_max), max_dim, dims=dims)
    bc = Barcode()
    for dim in (0, 1, 2):
        if dim not in dims:
            continue
        for b, d in raw[dim]:
            bc.add(dim, b, d)
    return bc
