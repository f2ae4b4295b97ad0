"""Point clouds, metric plumbing, neighbourhoods and barcode containers.

Everything here is shared by the selection algorithms: clouds are immutable
after construction, distances are plain double-precision Euclidean, and a
delta-neighbourhood is a closed metric ball with the centre point removed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import pdist, squareform

INF = math.inf


def _as_points(points) -> np.ndarray:
    arr = np.asarray(points, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    return arr


@dataclass(frozen=True)
class PointCloud:
    """N points in R^d with an optional per-point signal/noise tag.

    ``labels`` is a boolean array, True for signal points.  Arrays are
    frozen after construction so clouds can be shared across workers.
    """

    points: np.ndarray
    labels: np.ndarray | None = None

    def __post_init__(self):
        pts = _as_points(self.points)
        if pts.size == 0 or pts.shape[0] < 1:
            raise ValueError("point cloud must contain at least one point")
        if pts.shape[1] < 1:
            raise ValueError("points must have dimension >= 1")
        if not np.all(np.isfinite(pts)):
            raise ValueError("point coordinates must be finite")
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)
        if self.labels is not None:
            lab = np.asarray(self.labels, dtype=bool)
            if lab.shape != (pts.shape[0],):
                raise ValueError(
                    f"labels must have length {pts.shape[0]}, got {lab.shape}"
                )
            lab.flags.writeable = False
            object.__setattr__(self, "labels", lab)

    @property
    def n_points(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]


def euclidean_distance(a, b) -> float:
    """Euclidean distance between two coordinate vectors."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(np.sqrt(np.sum((a - b) ** 2)))


def pairwise_distances(cloud: PointCloud) -> np.ndarray:
    """Full symmetric n x n Euclidean distance matrix with zero diagonal.

    The full matrix is fine at the scales we work at (a few thousand
    points); neighbourhood queries are simple row scans.
    """
    if cloud.n_points < 1:
        raise ValueError("cannot compute distances of an empty cloud")
    if cloud.n_points == 1:
        return np.zeros((1, 1))
    # pdist computes each pair once, so the matrix is exactly symmetric
    return squareform(pdist(cloud.points))


def delta_neighborhood(
    cloud: PointCloud,
    y: int,
    delta: float,
    dist: np.ndarray | None = None,
) -> np.ndarray:
    """Indices of all points within the closed ball of radius delta around
    point ``y``, excluding ``y`` itself.

    ``dist`` may carry a precomputed pairwise distance matrix; otherwise
    distances from ``y`` are computed on the fly.
    """
    n = cloud.n_points
    if not 0 <= y < n:
        raise ValueError(f"point index {y} out of range for {n} points")
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    if dist is not None:
        row = dist[y]
    else:
        diffs = cloud.points - cloud.points[y]
        row = np.sqrt(np.einsum("ij,ij->i", diffs, diffs))
    idx = np.flatnonzero(row <= delta)
    return idx[idx != y]


@dataclass
class Barcode:
    """Persistence intervals per homology dimension (0, 1, 2).

    Intervals are (birth, death) with death possibly ``inf``.  Zero-length
    intervals carry no persistence and are dropped on insertion.
    """

    intervals: dict[int, list[tuple[float, float]]] = field(
        default_factory=lambda: {0: [], 1: [], 2: []}
    )

    def add(self, dim: int, birth: float, death: float) -> None:
        if death < birth:
            raise ValueError(f"death {death} before birth {birth}")
        if death == birth:
            return  # no persistence
        self.intervals.setdefault(dim, []).append((birth, death))

    def bars(self, dim: int) -> list[tuple[float, float]]:
        return list(self.intervals.get(dim, []))

    def finite(self, dim: int) -> list[tuple[float, float]]:
        return [(b, d) for b, d in self.intervals.get(dim, []) if d != INF]

    def n_infinite(self, dim: int) -> int:
        return sum(1 for _, d in self.intervals.get(dim, []) if d == INF)

    def max_finite_persistence(self, dims) -> float:
        """Longest finite bar across the given dimensions, 0.0 if none."""
        best = 0.0
        for dim in dims:
            for b, d in self.finite(dim):
                if d - b > best:
                    best = d - b
        return best
