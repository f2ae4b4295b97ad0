"""Benchmark harness: signal-fraction sweeps, delta sweeps, histograms and
global barcodes over the synthetic datasets.

Seeds follow one scheme everywhere: the dataset is drawn from the
sub-stream (seed, 0) and the selector cell for density index d,
realization r from (seed, 1, d, r).  Cells are independent, so results
do not depend on the worker count and sweeps with the same config are
byte-identical.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import Barcode, PointCloud, pairwise_distances
from .data import DEFAULT_DELTA, GENERATORS, SyntheticSample, generate
from .select import (
    Direction,
    PhDims,
    PhScoreMode,
    SelectionResult,
    density_rho_K,
    score_all_points,
    select_dense_core,
    select_kmm_landmarks,
    select_maxmin,
    select_ph_landmarks,
    select_random,
)
from .vr import rips_barcode

_STREAM_SELECT = 1

GLOBAL_BARCODE_CAP = 400


def _cell_rng(seed: int, density_idx: int, realization: int) -> np.random.Generator:
    return np.random.default_rng(
        np.random.SeedSequence((seed, _STREAM_SELECT, density_idx, realization))
    )


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


@dataclass(frozen=True)
class SelectorSpec:
    """Method name plus its parameters.

    ``direction=None`` picks the headline pairing for the score dims
    (ascending for all-dims, descending for dim-1).  ``p_signal=None``
    makes the k-means-- split default to the dataset's signal probability.
    """

    method: str  # random | maxmin | dense_core | ph | kmm
    delta: float | None = None
    dims: PhDims = PhDims.ALL
    direction: Direction | None = None
    k_nn: int = 1
    include_outliers: bool = False
    p_signal: float | None = None

    def __post_init__(self):
        if self.method not in ("random", "maxmin", "dense_core", "ph", "kmm"):
            raise ValueError(f"unknown selector method {self.method!r}")

    def mode(self) -> PhScoreMode:
        direction = self.direction
        if direction is None:
            direction = (
                Direction.ASCENDING if self.dims is PhDims.ALL else Direction.DESCENDING
            )
        return PhScoreMode(self.dims, direction)

    def resolved_delta(self, dataset: str) -> float:
        if self.delta is not None:
            return self.delta
        return DEFAULT_DELTA.get(dataset, 0.2)

    def tag(self, dataset: str, p: float) -> str:
        if self.method == "ph":
            mode = self.mode()
            return (
                f"ph[{mode.dims.value},{mode.direction.value},"
                f"delta={self.resolved_delta(dataset):g}]"
            )
        if self.method == "dense_core":
            return f"dense_core[K={self.k_nn}]"
        if self.method == "kmm":
            ps = self.p_signal if self.p_signal is not None else p
            variant = "with-outliers" if self.include_outliers else "centers-only"
            return f"kmm[p={ps:g},{variant}]"
        return self.method


DEFAULT_DENSITIES = tuple(np.arange(1, 51) / 50.0)  # 0.02 .. 1.0, step 0.02
DEFAULT_REALIZATIONS = 20


@dataclass(frozen=True)
class ExperimentConfig:
    dataset: str
    n: int
    p: float
    selector: SelectorSpec
    densities: tuple[float, ...] = DEFAULT_DENSITIES
    realizations: int = DEFAULT_REALIZATIONS
    seed: int = 0
    threads: int = 1

    def __post_init__(self):
        if self.dataset not in GENERATORS:
            raise ValueError(f"unknown dataset {self.dataset!r}")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not 0 <= self.p <= 1:
            raise ValueError("p must be in [0, 1]")
        if self.realizations < 1:
            raise ValueError("realizations must be >= 1")
        dens = tuple(float(d) for d in self.densities)
        if not dens:
            raise ValueError("densities must be nonempty")
        if any(not 0 < d <= 1 for d in dens):
            raise ValueError("densities must lie in (0, 1]")
        if list(dens) != sorted(dens):
            raise ValueError("densities must be sorted ascending")
        object.__setattr__(self, "densities", dens)
        if self.threads < 1:
            raise ValueError("threads must be >= 1")


@dataclass
class SweepTable:
    """Mean/std signal fraction per density plus the raw per-realization
    fractions they were computed from."""

    rows: list[tuple[float, float, float, str]] = field(default_factory=list)
    raw: list[tuple[float, int, float]] = field(default_factory=list)

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("density,mean_signal_fraction,std_population,selector\n")
            for density, mean, std, tag in self.rows:
                fh.write(f"{_fmt(density)},{_fmt(mean)},{_fmt(std)},{tag}\n")

    def raw_to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("density,realization,signal_fraction\n")
            for density, realization, frac in self.raw:
                fh.write(f"{_fmt(density)},{realization},{_fmt(frac)}\n")


def raw_companion_path(out_path) -> Path:
    p = Path(out_path)
    return p.with_name(p.stem + ".raw" + (p.suffix or ".csv"))


def signal_fraction(selection: SelectionResult, labels: np.ndarray) -> float:
    """Fraction of the selected landmarks that carry the signal label."""
    if len(selection) == 0:
        raise ValueError("selection is empty")
    labels = np.asarray(labels, dtype=bool)
    return float(labels[selection.landmarks].sum() / len(selection))


def _run_selector_cell(
    spec: SelectorSpec,
    sample: SyntheticSample,
    m: int,
    rng: np.random.Generator,
    dist: np.ndarray | None,
    ph_cache: tuple[np.ndarray, np.ndarray] | None,
    rho_cache: np.ndarray | None = None,
) -> SelectionResult:
    cloud = sample.cloud
    if spec.method == "random":
        return select_random(cloud, m, rng)
    if spec.method == "maxmin":
        return select_maxmin(cloud, m, rng, dist=dist)
    if spec.method == "dense_core":
        return select_dense_core(cloud, m, spec.k_nn, dist=dist, rho=rho_cache)
    if spec.method == "ph":
        scores, super_mask = ph_cache
        return select_ph_landmarks(
            cloud,
            m,
            spec.resolved_delta(sample.kind),
            spec.mode(),
            rng,
            dist=dist,
            scores=scores,
            super_mask=super_mask,
        )
    if spec.method == "kmm":
        p_signal = spec.p_signal if spec.p_signal is not None else sample.p
        return select_kmm_landmarks(cloud, m, p_signal, spec.include_outliers, rng)
    raise ValueError(f"unknown selector method {spec.method!r}")


def run_fraction_sweep(
    config: ExperimentConfig, sample: SyntheticSample | None = None
) -> SweepTable:
    """Signal-fraction curve over the density grid.

    One dataset per config; the selector reruns ``realizations`` times per
    density with derived sub-seeds.  PH scores (and dense-core densities)
    are deterministic per sample, so they are computed once and shared
    across realizations; only the shuffles vary.
    """
    if sample is None:
        sample = generate(config.dataset, config.n, config.p, config.seed)
    cloud = sample.cloud
    if cloud.labels is None:
        raise ValueError("fraction sweeps need a labeled sample")
    spec = config.selector

    dist = None
    if spec.method in ("maxmin", "dense_core", "ph"):
        dist = pairwise_distances(cloud)
    ph_cache = None
    rho_cache = None
    if spec.method == "ph":
        ph_cache = score_all_points(
            cloud,
            spec.resolved_delta(sample.kind),
            spec.mode().dims,
            dist=dist,
            threads=config.threads,
        )
    elif spec.method == "dense_core":
        rho_cache = density_rho_K(cloud, spec.k_nn, dist)

    n_dens = len(config.densities)
    reps = config.realizations
    fractions = np.empty((n_dens, reps))

    def cell(di: int, r: int) -> None:
        m = round(config.densities[di] * cloud.n_points)
        rng = _cell_rng(config.seed, di, r)
        try:
            sel = _run_selector_cell(spec, sample, m, rng, dist, ph_cache, rho_cache)
        except Exception as exc:
            raise RuntimeError(
                f"selector failed at density={config.densities[di]} "
                f"realization={r} (dataset={config.dataset}, seed={config.seed})"
            ) from exc
        fractions[di, r] = signal_fraction(sel, cloud.labels)

    cells = [(di, r) for di in range(n_dens) for r in range(reps)]
    if config.threads > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            list(pool.map(lambda c: cell(*c), cells))
    else:
        for di, r in cells:
            cell(di, r)

    table = SweepTable()
    tag = spec.tag(config.dataset, config.p)
    for di, density in enumerate(config.densities):
        fr = fractions[di]
        table.rows.append((density, float(fr.mean()), float(fr.std()), tag))
        for r in range(reps):
            table.raw.append((density, r, float(fr[r])))
    return table


def run_super_outlier_sweep(
    sample: SyntheticSample, deltas, dist: np.ndarray | None = None
) -> list[tuple[float, int]]:
    """Number of points with fewer than two delta-neighbours, per delta.

    The count is non-increasing in delta; that containment property is
    asserted on every sweep.
    """
    deltas = [float(d) for d in deltas]
    if any(d <= 0 for d in deltas):
        raise ValueError("all deltas must be positive")
    if dist is None:
        dist = pairwise_distances(sample.cloud)
    n = sample.cloud.n_points
    rows = []
    for delta in deltas:
        degree = (dist <= delta).sum(axis=1) - 1  # diagonal removed
        rows.append((delta, int((degree <= 1).sum())))
    by_delta = sorted(rows)
    for (d1, c1), (d2, c2) in zip(by_delta, by_delta[1:]):
        if c2 > c1:
            raise AssertionError(
                f"super-outlier count increased from {c1} (delta={d1}) "
                f"to {c2} (delta={d2})"
            )
    return rows


@dataclass
class HistogramResult:
    """Outlierness scores binned at fixed width, split by label, with
    super outliers counted separately."""

    bin_edges: np.ndarray
    signal_counts: np.ndarray
    noise_counts: np.ndarray
    super_signal: int
    super_noise: int
    scores: np.ndarray
    super_mask: np.ndarray

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("row_kind,bin_left,bin_right,signal_count,noise_count\n")
            for i in range(len(self.signal_counts)):
                fh.write(
                    f"bin,{_fmt(self.bin_edges[i])},{_fmt(self.bin_edges[i + 1])},"
                    f"{self.signal_counts[i]},{self.noise_counts[i]}\n"
                )
            fh.write(f"super_outliers,,,{self.super_signal},{self.super_noise}\n")


def run_histogram(
    sample: SyntheticSample,
    delta: float,
    mode: PhScoreMode,
    bin_width: float = 0.01,
    dist: np.ndarray | None = None,
    threads: int = 1,
) -> HistogramResult:
    """Per-label histograms of the outlierness scores at fixed bin width."""
    if bin_width <= 0:
        raise ValueError("bin_width must be positive")
    labels = sample.cloud.labels
    if labels is None:
        raise ValueError("histograms need a labeled sample")
    scores, super_mask = score_all_points(
        sample.cloud, delta, mode.dims, dist=dist, threads=threads
    )
    scored = ~super_mask
    if scored.any():
        top = float(np.max(scores[scored]))
        n_bins = max(1, int(np.ceil(top / bin_width)) or 1)
        if top >= n_bins * bin_width:  # top score exactly on the last edge
            n_bins += 1
    else:
        n_bins = 0
    edges = np.arange(n_bins + 1) * bin_width
    sig = np.zeros(n_bins, dtype=np.int64)
    noi = np.zeros(n_bins, dtype=np.int64)
    if n_bins:
        sig_scores = scores[scored & labels]
        noi_scores = scores[scored & ~labels]
        sig = np.histogram(sig_scores, bins=edges)[0]
        noi = np.histogram(noi_scores, bins=edges)[0]
    return HistogramResult(
        bin_edges=edges,
        signal_counts=sig,
        noise_counts=noi,
        super_signal=int((super_mask & labels).sum()),
        super_noise=int((super_mask & ~labels).sum()),
        scores=scores,
        super_mask=super_mask,
    )


def run_global_barcode(
    sample: SyntheticSample,
    selection: SelectionResult,
    take: int,
    eps_max: float,
    dims=(1,),
    cap: int = GLOBAL_BARCODE_CAP,
    allow_large: bool = False,
) -> Barcode:
    """Vietoris-Rips barcode of the first ``take`` landmarks.

    Refuses takes beyond ``cap`` unless explicitly overridden; full VR
    complexes grow fast with the landmark count.
    """
    if not 1 <= take <= len(selection):
        raise ValueError(f"take must be in [1, {len(selection)}], got {take}")
    if take > cap and not allow_large:
        raise ValueError(
            f"take={take} exceeds the complexity cap {cap}; pass allow_large=True "
            f"(or --allow-large) to override"
        )
    dims = set(dims)
    subset = selection.landmarks[:take]
    sub_cloud = PointCloud(sample.cloud.points[subset])
    dist = pairwise_distances(sub_cloud)
    max_dim = min(3, max(dims) + 1)
    return rips_barcode(dist, max_dim, eps_max, dims)


def barcode_to_csv(bc: Barcode, path) -> None:
    """Interval CSV: dim,birth,death with the literal ``inf`` for essential
    classes."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("dim,birth,death\n")
        for dim in (0, 1, 2):
            for birth, death in sorted(bc.bars(dim)):
                d = "inf" if death == np.inf else _fmt(death)
                fh.write(f"{dim},{_fmt(birth)},{d}\n")


def selection_to_csv(selection: SelectionResult, path) -> None:
    """Landmark indices in selection order; score column is empty for
    selectors that do not produce scores."""
    scores = selection.scores
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("rank,point_index,score\n")
        for rank, idx in enumerate(selection.landmarks):
            s = ""
            if scores is not None:
                val = scores[idx]
                s = "" if np.isnan(val) else _fmt(val)
            fh.write(f"{rank},{idx},{s}\n")


def delta_sweep_to_csv(rows, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("delta,super_outliers\n")
        for delta, count in rows:
            fh.write(f"{_fmt(delta)},{count}\n")
