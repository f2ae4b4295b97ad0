"""Landmark selection for persistent homology on noisy point clouds."""

from .core import (
    Barcode,
    PointCloud,
    delta_neighborhood,
    euclidean_distance,
    pairwise_distances,
)
from .vr import (
    Filtration,
    PersistencePairing,
    Simplex,
    barcode,
    build_vr_filtration,
    compute_persistence,
    finite_bars,
    rips_barcode,
)
from .select import (
    Direction,
    KmmState,
    PhDims,
    PhScoreMode,
    SelectionError,
    SelectionResult,
    density_rho_K,
    kmeans_minus_minus,
    ph_outlierness,
    score_all_points,
    select_dense_core,
    select_kmm_landmarks,
    select_maxmin,
    select_ph_landmarks,
    select_random,
)
from .data import (
    DEFAULT_DELTA,
    GENERATORS,
    SyntheticSample,
    gen_klein,
    gen_sphere_cube,
    gen_sphere_laplace,
    gen_sphere_line,
    gen_sphere_plane,
    gen_torus,
    generate,
    sample_laplace,
    sample_to_csv,
    uniform_sphere_point,
)
from .experiment import (
    ExperimentConfig,
    HistogramResult,
    SelectorSpec,
    SweepTable,
    run_fraction_sweep,
    run_global_barcode,
    run_histogram,
    run_super_outlier_sweep,
    signal_fraction,
)

__version__ = "0.1.0"
