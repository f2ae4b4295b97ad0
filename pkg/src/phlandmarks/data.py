"""Synthetic labeled point clouds: a topological signal plus designed noise.

Each generator draws a Bernoulli(p) label per point and fills signal
points from the manifold sampler and noise points from the noise model.
Same seed, same sample, bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import PointCloud


@dataclass(frozen=True)
class SyntheticSample:
    """A labeled cloud plus the parameters that produced it."""

    cloud: PointCloud
    kind: str
    n: int
    p: float
    seed: int | None = None

    @property
    def labels(self) -> np.ndarray:
        return self.cloud.labels


def _unit_sphere(rng: np.random.Generator, size: int) -> np.ndarray:
    """Uniform points on S^2 by normalizing standard Gaussian triples."""
    out = rng.normal(size=(size, 3))
    norms = np.linalg.norm(out, axis=1)
    while True:  # zero-norm draws are essentially impossible, but be exact
        bad = norms == 0.0
        if not bad.any():
            break
        out[bad] = rng.normal(size=(int(bad.sum()), 3))
        norms[bad] = np.linalg.norm(out[bad], axis=1)
    return out / norms[:, None]


def uniform_sphere_point(rng: np.random.Generator) -> np.ndarray:
    """One point drawn uniformly from the surface of the unit sphere."""
    return _unit_sphere(rng, 1)[0]


def sample_laplace(mu: float, b: float, rng: np.random.Generator, size=None):
    """Laplace(mu, scale b) via the inverse CDF:
    mu - b * sgn(u) * ln(1 - 2|u|) with u uniform on (-1/2, 1/2)."""
    if b <= 0:
        raise ValueError(f"scale must be positive, got {b}")
    scalar = size is None
    k = 1 if scalar else int(size)
    u = rng.uniform(-0.5, 0.5, size=k)
    while True:
        bad = u <= -0.5  # uniform() includes the lower endpoint
        if not bad.any():
            break
        u[bad] = rng.uniform(-0.5, 0.5, size=int(bad.sum()))
    x = mu - b * np.sign(u) * np.log1p(-2.0 * np.abs(u))
    return float(x[0]) if scalar else x


def _split_labels(n: int, p: float, rng: np.random.Generator) -> np.ndarray:
    if n < 1:
        raise ValueError(f"N must be >= 1, got {n}")
    if not 0 <= p <= 1:
        raise ValueError(f"p must be in [0, 1], got {p}")
    return rng.random(n) < p


def gen_sphere_cube(n: int, p: float, rng: np.random.Generator) -> SyntheticSample:
    """Unit-sphere signal, noise uniform in the filled cube [-1, 1]^3."""
    labels = _split_labels(n, p, rng)
    pts = np.empty((n, 3))
    pts[labels] = _unit_sphere(rng, int(labels.sum()))
    pts[~labels] = rng.uniform(-1.0, 1.0, size=(int((~labels).sum()), 3))
    return SyntheticSample(PointCloud(pts, labels), "sphere_cube", n, p)


def gen_sphere_plane(n: int, p: float, rng: np.random.Generator) -> SyntheticSample:
    """Unit-sphere signal, noise (u, v, 0) with u, v uniform in [-3, 3]."""
    labels = _split_labels(n, p, rng)
    pts = np.zeros((n, 3))
    pts[labels] = _unit_sphere(rng, int(labels.sum()))
    noise_n = int((~labels).sum())
    pts[~labels, :2] = rng.uniform(-3.0, 3.0, size=(noise_n, 2))
    return SyntheticSample(PointCloud(pts, labels), "sphere_plane", n, p)


def gen_sphere_line(n: int, p: float, rng: np.random.Generator) -> SyntheticSample:
    """Unit-sphere signal, noise (a, 0, 0) with a uniform in [-50, 50]."""
    labels = _split_labels(n, p, rng)
    pts = np.zeros((n, 3))
    pts[labels] = _unit_sphere(rng, int(labels.sum()))
    pts[~labels, 0] = rng.uniform(-50.0, 50.0, size=int((~labels).sum()))
    return SyntheticSample(PointCloud(pts, labels), "sphere_line", n, p)


def gen_sphere_laplace(
    n: int,
    p: float,
    rng: np.random.Generator,
    mu: float = 4.0,
    b: float = 0.5,
) -> SyntheticSample:
    """Unit-sphere signal, noise (a, 0, 0) with a Laplace(mu, b) restricted
    to [-50, 50] by rejection (the rejection probability is negligible at
    the default parameters).

    ``b`` is the Laplace scale; pass sigma/sqrt(2) instead to read the
    stated width as a standard deviation.
    """
    labels = _split_labels(n, p, rng)
    pts = np.zeros((n, 3))
    pts[labels] = _unit_sphere(rng, int(labels.sum()))
    noise_n = int((~labels).sum())
    alpha = sample_laplace(mu, b, rng, size=noise_n)
    if noise_n:
        while True:
            bad = (alpha < -50.0) | (alpha > 50.0)
            if not bad.any():
                break
            alpha[bad] = sample_laplace(mu, b, rng, size=int(bad.sum()))
    pts[~labels, 0] = alpha
    return SyntheticSample(PointCloud(pts, labels), "sphere_laplace", n, p)


def gen_torus(n: int, p: float, rng: np.random.Generator) -> SyntheticSample:
    """Flat torus in R^4: (cos g, sin g, cos f, sin f); noise scales the two
    circle radii by independent uniforms on (0, 2)."""
    labels = _split_labels(n, p, rng)
    pts = np.empty((n, 4))
    ns = int(labels.sum())
    g = rng.uniform(0.0, 2 * np.pi, size=ns)
    f = rng.uniform(0.0, 2 * np.pi, size=ns)
    pts[labels] = np.column_stack([np.cos(g), np.sin(g), np.cos(f), np.sin(f)])
    nn = n - ns
    g = rng.uniform(0.0, 2 * np.pi, size=nn)
    f = rng.uniform(0.0, 2 * np.pi, size=nn)
    r = rng.uniform(0.0, 2.0, size=nn)
    rh = rng.uniform(0.0, 2.0, size=nn)
    pts[~labels] = np.column_stack(
        [r * np.cos(g), r * np.sin(g), rh * np.cos(f), rh * np.sin(f)]
    )
    return SyntheticSample(PointCloud(pts, labels), "torus", n, p)


def _klein_coords(g, f, r, c):
    x = np.cos(g) * (r * np.cos(f) + c)
    y = np.sin(g) * (r * np.cos(f) + c)
    z = np.cos(g / 2) * r * np.sin(f)
    w = np.sin(g / 2) * np.sin(f)
    return np.column_stack([x, y, z, w])


def gen_klein(n: int, p: float, rng: np.random.Generator) -> SyntheticSample:
    """Figure-8 Klein bottle in R^4 with r = 3, C = 2; noise redraws
    r in [2, 4] and C in [1, 3] per point (the w coordinate keeps the
    signal formula, which carries no radial parameter)."""
    labels = _split_labels(n, p, rng)
    pts = np.empty((n, 4))
    ns = int(labels.sum())
    g = rng.uniform(0.0, 2 * np.pi, size=ns)
    f = rng.uniform(0.0, 2 * np.pi, size=ns)
    pts[labels] = _klein_coords(g, f, 3.0, 2.0)
    nn = n - ns
    g = rng.uniform(0.0, 2 * np.pi, size=nn)
    f = rng.uniform(0.0, 2 * np.pi, size=nn)
    rn = rng.uniform(2.0, 4.0, size=nn)
    cn = rng.uniform(1.0, 3.0, size=nn)
    pts[~labels] = _klein_coords(g, f, rn, cn)
    return SyntheticSample(PointCloud(pts, labels), "klein", n, p)


GENERATORS = {
    "sphere_cube": gen_sphere_cube,
    "sphere_plane": gen_sphere_plane,
    "sphere_line": gen_sphere_line,
    "sphere_laplace": gen_sphere_laplace,
    "torus": gen_torus,
    "klein": gen_klein,
}

# headline neighbourhood radii per dataset kind
DEFAULT_DELTA = {
    "sphere_cube": 0.2,
    "sphere_plane": 0.2,
    "sphere_line": 0.2,
    "sphere_laplace": 0.2,
    "torus": 0.5,
    "klein": 0.6,
}


def generate(kind: str, n: int, p: float, seed: int) -> SyntheticSample:
    """Generate a dataset by kind name with a reproducible seed."""
    if kind not in GENERATORS:
        raise ValueError(f"unknown dataset kind {kind!r}; choose from {sorted(GENERATORS)}")
    rng = np.random.default_rng(np.random.SeedSequence((seed, 0)))
    sample = GENERATORS[kind](n, p, rng)
    return SyntheticSample(sample.cloud, kind, n, p, seed)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def sample_to_csv(sample: SyntheticSample, path) -> None:
    """One row per point: coordinates then the signal/noise label.

    The first line is a comment carrying the generation parameters; the
    second is the column header.
    """
    cloud = sample.cloud
    d = cloud.dim
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(
            f"# dataset={sample.kind},n={sample.n},p={_fmt(sample.p)},"
            f"seed={sample.seed}\n"
        )
        fh.write(",".join(f"x{i}" for i in range(d)) + ",label\n")
        for row, lab in zip(cloud.points, cloud.labels):
            coords = ",".join(_fmt(v) for v in row)
            fh.write(f"{coords},{'signal' if lab else 'noise'}\n")
