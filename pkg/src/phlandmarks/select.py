"""Landmark selection: random, maxmin, dense core, local-PH scores, k-means--.

All selectors are pure functions of (cloud, parameters, rng seed) and
return a :class:`SelectionResult`.  The local-PH selector scores every
point by the longest finite bar of the Vietoris-Rips barcode of its
delta-neighbourhood; points with fewer than two neighbours are super
outliers and only become landmarks once everything else is taken.
"""

from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.spatial.distance import cdist

from .core import PointCloud, pairwise_distances
from . import _reduction


class SelectionError(RuntimeError):
    """Raised when a selector cannot produce the requested landmark set."""

    def __init__(self, message: str, mapped: int = 0):
        super().__init__(message)
        self.mapped = mapped


class PhDims(Enum):
    """Which barcode dimensions feed the outlierness score."""

    ALL = "all"  # dimensions 0, 1, 2
    DIM1 = "dim1"  # dimension 1 only


class Direction(Enum):
    """Score interpretation: small scores first or large scores first."""

    ASCENDING = "asc"
    DESCENDING = "desc"


@dataclass(frozen=True)
class PhScoreMode:
    """Score dimensions plus ordering direction.

    The headline pairings are (ALL, ASCENDING) and (DIM1, DESCENDING);
    other combinations work but are flagged as non-standard.
    """

    dims: PhDims = PhDims.ALL
    direction: Direction = Direction.ASCENDING

    @property
    def is_standard(self) -> bool:
        return (self.dims, self.direction) in (
            (PhDims.ALL, Direction.ASCENDING),
            (PhDims.DIM1, Direction.DESCENDING),
        )

    @classmethod
    def all_dims(cls) -> "PhScoreMode":
        return cls(PhDims.ALL, Direction.ASCENDING)

    @classmethod
    def dim1(cls) -> "PhScoreMode":
        return cls(PhDims.DIM1, Direction.DESCENDING)


@dataclass
class SelectionResult:
    """Ordered landmark indices plus selector byproducts.

    ``scores`` holds the per-point selector score when the method has one
    (NaN marks super outliers).  ``super_outliers`` is only populated by
    the PH selector; such points appear in the landmark list strictly
    after every non-super-outlier point.
    """

    landmarks: np.ndarray
    super_outliers: np.ndarray = field(default_factory=lambda: np.empty(0, np.int64))
    scores: np.ndarray | None = None
    method_tag: str = ""

    def __post_init__(self):
        self.landmarks = np.asarray(self.landmarks, dtype=np.int64)
        self.super_outliers = np.asarray(self.super_outliers, dtype=np.int64)
        if len(np.unique(self.landmarks)) != len(self.landmarks):
            raise ValueError("landmarks must be distinct indices")

    def __len__(self) -> int:
        return len(self.landmarks)


def _dist_or_compute(cloud: PointCloud, dist: np.ndarray | None) -> np.ndarray:
    return pairwise_distances(cloud) if dist is None else dist


def _check_m(m: int, n: int) -> None:
    if not 1 <= m <= n:
        raise ValueError(f"m must be in [1, {n}], got {m}")


def select_random(cloud: PointCloud, m: int, rng: np.random.Generator) -> SelectionResult:
    """m distinct indices drawn uniformly without replacement, in draw order."""
    _check_m(m, cloud.n_points)
    landmarks = rng.choice(cloud.n_points, size=m, replace=False)
    return SelectionResult(landmarks=landmarks, method_tag="random")


def select_maxmin(
    cloud: PointCloud,
    m: int,
    rng: np.random.Generator,
    dist: np.ndarray | None = None,
    first: int | None = None,
) -> SelectionResult:
    """Greedy maxmin: each landmark maximises the minimum distance to the
    landmarks picked so far; ties go to the lowest index.

    ``first`` pins the initial (otherwise uniformly random) landmark,
    which is useful for reproducing a specific run.
    """
    n = cloud.n_points
    _check_m(m, n)
    dist = _dist_or_compute(cloud, dist)
    if first is None:
        first = int(rng.integers(n))
    elif not 0 <= first < n:
        raise ValueError(f"first index {first} out of range")
    landmarks = np.empty(m, dtype=np.int64)
    landmarks[0] = first
    mind = dist[first].copy()
    mind[first] = -np.inf
    for i in range(1, m):
        nxt = int(np.argmax(mind))  # argmax takes the first (lowest) index on ties
        landmarks[i] = nxt
        np.minimum(mind, dist[nxt], out=mind)
        mind[nxt] = -np.inf
    return SelectionResult(landmarks=landmarks, method_tag="maxmin")


def density_rho_K(
    cloud: PointCloud, K: int, dist: np.ndarray | None = None
) -> np.ndarray:
    """Distance from each point to its K-th nearest other point.

    The density estimate used by dense-core selection is the reciprocal of
    this distance; coincident points give 0, i.e. infinite density.
    """
    n = cloud.n_points
    if not 1 <= K <= n - 1:
        raise ValueError(f"K must be in [1, {n - 1}], got {K}")
    dist = _dist_or_compute(cloud, dist)
    # row k-th smallest including the self zero = K-th nearest other point
    return np.partition(dist, K, axis=1)[:, K]


def select_dense_core(
    cloud: PointCloud,
    m: int,
    K: int,
    dist: np.ndarray | None = None,
    rho: np.ndarray | None = None,
) -> SelectionResult:
    """The m densest points: smallest K-th neighbour distance first, ties
    by lowest index.

    ``rho`` may carry precomputed K-th neighbour distances (they are
    deterministic per cloud, so sweeps compute them once)."""
    _check_m(m, cloud.n_points)
    if rho is None:
        rho = density_rho_K(cloud, K, dist)
    order = np.lexsort((np.arange(cloud.n_points), rho))
    return SelectionResult(
        landmarks=order[:m], scores=rho, method_tag=f"dense_core[K={K}]"
    )


# ---------------------------------------------------------------------------
# local persistent-homology scores


def _collinear_axis(sub_pts: np.ndarray) -> int | None:
    """Axis index if the points differ in exactly one coordinate
    (bit-exact), -1 if they all coincide, None otherwise.

    On an axis-aligned 1-D point set the Rips complex is a disjoint
    union of collapsible cliques at every scale, so dimensions >= 1
    carry no bars and dimension 0 merges along consecutive gaps.  The
    line-shaped noise clouds produce neighbourhoods with hundreds of
    points; this shortcut keeps their scoring exact and cheap.
    """
    diffs = sub_pts != sub_pts[0]
    varying = np.flatnonzero(diffs.any(axis=0))
    if varying.size == 0:
        return -1
    if varying.size == 1:
        return int(varying[0])
    return None


def _local_score(sub_dist: np.ndarray, sub_pts: np.ndarray, dims: PhDims) -> float:
    """Longest finite bar of the local VR filtration over the requested
    dimensions (eps_max = neighbourhood diameter, simplices up to dim 3)."""
    axis = _collinear_axis(sub_pts)
    if axis is not None:
        if dims is PhDims.DIM1 or axis == -1:
            return 0.0
        order = np.argsort(sub_pts[:, axis], kind="stable")
        best = 0.0
        for t in range(order.size - 1):
            gap = sub_dist[order[t], order[t + 1]]
            if gap > best:
                best = gap
        return float(best)

    eps = float(sub_dist.max())
    if eps == 0.0:
        return 0.0
    if dims is PhDims.ALL:
        raw = _reduction.rips_persistence(sub_dist, eps, 3, dims=(0, 1, 2))
        wanted = (0, 1, 2)
    else:
        raw = _reduction.rips_persistence(sub_dist, eps, 2, dims=(1,))
        wanted = (1,)
    best = 0.0
    for dim in wanted:
        for b, d in raw[dim]:
            if d != np.inf and d - b > best:
                best = d - b
    return best


def ph_outlierness(
    cloud: PointCloud,
    y: int,
    delta: float,
    dims: PhDims = PhDims.ALL,
    dist: np.ndarray | None = None,
) -> float | None:
    """PH outlierness of point ``y``: the longest finite bar in the local
    VR barcode of its delta-neighbourhood, or None for a super outlier
    (fewer than two neighbours within delta)."""
    n = cloud.n_points
    if not 0 <= y < n:
        raise ValueError(f"point index {y} out of range for {n} points")
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    dist = _dist_or_compute(cloud, dist)
    row = dist[y]
    nbrs = np.flatnonzero(row <= delta)
    nbrs = nbrs[nbrs != y]
    if nbrs.size <= 1:
        return None
    sub = np.ascontiguousarray(dist[np.ix_(nbrs, nbrs)])
    return _local_score(sub, cloud.points[nbrs], dims)


def score_all_points(
    cloud: PointCloud,
    delta: float,
    dims: PhDims = PhDims.ALL,
    dist: np.ndarray | None = None,
    threads: int = 1,
) -> tuple[np.ndarray, np.ndarray]:
    """Outlierness score for every point plus the super-outlier mask.

    Scores are gathered by point index so the result does not depend on
    the worker count; super outliers carry NaN.
    """
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    dist = _dist_or_compute(cloud, dist)
    n = cloud.n_points
    scores = np.full(n, np.nan)
    super_mask = np.zeros(n, dtype=bool)
    within = dist <= delta

    def work(y: int) -> None:
        nbrs = np.flatnonzero(within[y])
        nbrs = nbrs[nbrs != y]
        if nbrs.size <= 1:
            super_mask[y] = True
            return
        sub = np.ascontiguousarray(dist[np.ix_(nbrs, nbrs)])
        scores[y] = _local_score(sub, cloud.points[nbrs], dims)

    if threads <= 1:
        for y in range(n):
            work(y)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(work, range(n)))
    return scores, super_mask


def select_ph_landmarks(
    cloud: PointCloud,
    m: int,
    delta: float,
    mode: PhScoreMode,
    rng: np.random.Generator,
    dist: np.ndarray | None = None,
    scores: np.ndarray | None = None,
    super_mask: np.ndarray | None = None,
    threads: int = 1,
) -> SelectionResult:
    """PH landmarks: order non-super-outliers by their outlierness score
    (ascending or descending per ``mode``), randomising every block of
    tied scores, and append super outliers in random order only once all
    other points are taken.

    ``scores``/``super_mask`` may carry a precomputed scoring (it is
    deterministic, so sweeps compute it once per sample and only
    re-randomise the shuffles).
    """
    n = cloud.n_points
    _check_m(m, n)
    if not mode.is_standard:
        warnings.warn(
            f"non-standard score mode {mode.dims.value}/{mode.direction.value}",
            UserWarning,
            stacklevel=2,
        )
    if scores is None or super_mask is None:
        scores, super_mask = score_all_points(
            cloud, delta, mode.dims, dist=dist, threads=threads
        )

    shuffle_rng, super_rng = rng.spawn(2)
    nonsup = np.flatnonzero(~super_mask)
    shuffled = nonsup[shuffle_rng.permutation(nonsup.size)]
    key = scores[shuffled]
    if mode.direction is Direction.DESCENDING:
        key = -key
    ranked = shuffled[np.argsort(key, kind="stable")]

    if m <= ranked.size:
        landmarks = ranked[:m]
    else:
        sup = np.flatnonzero(super_mask)
        sup = sup[super_rng.permutation(sup.size)]
        landmarks = np.concatenate([ranked, sup[: m - ranked.size]])

    tag = f"ph[{mode.dims.value},{mode.direction.value},delta={delta:g}]"
    return SelectionResult(
        landmarks=landmarks,
        super_outliers=np.flatnonzero(super_mask),
        scores=scores,
        method_tag=tag,
    )


# ---------------------------------------------------------------------------
# k-means-- and the landmark mapping stage


@dataclass
class KmmState:
    """Converged k-means-- state.

    ``centers`` are means (not data points); ``outliers`` the indices of
    the j points discarded in the final iteration; ``objective`` the sum
    of squared distances of retained points to their nearest center.
    ``objective_history`` records the objective after every iteration.
    """

    centers: np.ndarray
    outliers: np.ndarray
    objective: float
    objective_history: list[float]
    n_iterations: int


def kmeans_minus_minus(
    cloud: PointCloud, k: int, j: int, rng: np.random.Generator
) -> KmmState:
    """k-means with the j points farthest from the current centers set
    aside as outliers each iteration.

    Stops when the objective changes by at most 1e-4 or after 100
    iterations.  A center whose cluster empties keeps its position for
    that iteration.
    """
    n = cloud.n_points
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if j < 0:
        raise ValueError(f"j must be >= 0, got {j}")
    if k + j > n:
        raise ValueError(f"k + j = {k + j} exceeds {n} points")

    pts = cloud.points
    centers = pts[rng.choice(n, size=k, replace=False)].copy()
    e_prev = -1.0
    history: list[float] = []
    outliers = np.empty(0, dtype=np.int64)
    iterations = 0

    for it in range(1, 101):
        iterations = it
        d_all = cdist(pts, centers)
        nearest = d_all.min(axis=1)
        assign = d_all.argmin(axis=1)
        order = np.argsort(-nearest, kind="stable")  # farthest first, ties by index
        outliers = np.sort(order[:j]).astype(np.int64)
        retained = np.ones(n, dtype=bool)
        retained[outliers] = False
        for r in range(k):
            members = retained & (assign == r)
            if members.any():
                centers[r] = pts[members].mean(axis=0)
        e = float((cdist(pts[retained], centers).min(axis=1) ** 2).sum())
        history.append(e)
        if abs(e - e_prev) <= 1e-4:
            break
        e_prev = e

    return KmmState(
        centers=centers,
        outliers=outliers,
        objective=history[-1],
        objective_history=history,
        n_iterations=iterations,
    )


def _map_centers_to_points(
    centers: np.ndarray, pts: np.ndarray, pool: np.ndarray
) -> list[int]:
    """Assign each center its nearest distinct retained data point.

    Per pass: centers are processed by ascending min-distance to the
    pool; when an assignment duplicates an earlier one from the same
    pass, the duplicate is discarded, the committed assignments are
    removed from the pool and the colliding center re-enters the next
    pass with the remaining unprocessed centers.
    """
    k = centers.shape[0]
    mapped: list[int] = []
    active = np.arange(k)
    pool = np.array(pool, dtype=np.int64)  # ascending, so argmin ties -> lowest index
    while len(mapped) < k:
        if pool.size == 0:
            raise SelectionError(
                f"ran out of candidate points after mapping {len(mapped)} of "
                f"{k} centers",
                mapped=len(mapped),
            )
        d = cdist(centers[active], pts[pool])
        order = np.argsort(d.min(axis=1), kind="stable")
        taken: set[int] = set()
        assigned: list[int] = []
        processed = order.size
        for s, oi in enumerate(order):
            y = int(pool[np.argmin(d[oi])])
            if y in taken:
                processed = s  # commit 0..s-1, keep the colliding center
                break
            taken.add(y)
            assigned.append(y)
        mapped.extend(assigned)
        pool = pool[~np.isin(pool, assigned)]
        active = active[order[processed:]]
    return mapped


def select_kmm_landmarks(
    cloud: PointCloud,
    m: int,
    p_signal: float,
    include_outliers: bool,
    rng: np.random.Generator,
) -> SelectionResult:
    """k-means-- landmarks: k = round(p_signal * m) cluster centers mapped
    to distinct data points, with the j = m - k outliers appended when
    ``include_outliers`` is set."""
    n = cloud.n_points
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if not 0 < p_signal <= 1:
        raise ValueError(f"p_signal must be in (0, 1], got {p_signal}")
    k = max(1, round(p_signal * m))
    j = m - k
    if k + j > n:
        raise ValueError(f"m = {m} exceeds {n} points")

    state = kmeans_minus_minus(cloud, k, j, rng)
    retained = np.setdiff1d(np.arange(n), state.outliers)
    mapped = _map_centers_to_points(state.centers, cloud.points, retained)

    if include_outliers:
        # final-iteration ranking order: farthest from the centers first
        d_out = cdist(cloud.points[state.outliers], state.centers).min(axis=1)
        out_order = state.outliers[np.argsort(-d_out, kind="stable")]
        landmarks = np.concatenate([np.asarray(mapped, np.int64), out_order])
    else:
        landmarks = np.asarray(mapped, np.int64)

    variant = "with-outliers" if include_outliers else "centers-only"
    return SelectionResult(
        landmarks=landmarks,
        method_tag=f"kmm[p={p_signal:g},k={k},j={j},{variant}]",
    )
