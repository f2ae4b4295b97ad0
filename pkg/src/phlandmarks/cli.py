"""Command-line interface.

Subcommands: gen, select, sweep, delta-sweep, hist, barcode.  All emit
CSV.  A key-value config file can predefine any flag; explicit flags
win over the file.
"""

from __future__ import annotations

import argparse
import sys

from .data import GENERATORS, generate, sample_to_csv
from .experiment import (
    DEFAULT_DENSITIES,
    DEFAULT_REALIZATIONS,
    ExperimentConfig,
    SelectorSpec,
    _cell_rng,
    barcode_to_csv,
    delta_sweep_to_csv,
    raw_companion_path,
    run_fraction_sweep,
    run_global_barcode,
    run_histogram,
    run_super_outlier_sweep,
    selection_to_csv,
    _run_selector_cell,
)
from .core import pairwise_distances
from .select import Direction, PhDims, score_all_points

_METHODS = ("random", "maxmin", "dense_core", "ph", "kmm")

_DEFAULTS = {
    "dataset": "sphere_cube",
    "n": 3000,
    "p": 0.6,
    "method": "ph",
    "delta": None,  # dataset-dependent default
    "mode": "all",
    "direction": None,  # paired with mode
    "k_nn": 1,
    "include_outliers": False,
    "densities": None,  # full grid
    "reps": DEFAULT_REALIZATIONS,
    "seed": 0,
    "threads": 1,
    "m": None,
    "deltas": None,
    "bin_width": 0.01,
    "take": None,
    "eps_max": None,
    "dims": "1",
    "allow_large": False,
}


def _add_common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--config", help="key=value file mirroring the flags")
    sp.add_argument("--dataset", choices=sorted(GENERATORS))
    sp.add_argument("--n", type=int)
    sp.add_argument("--p", type=float)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--out", required=False, help="output CSV path")
    sp.add_argument("--threads", type=int)


def _add_selector(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--method", choices=_METHODS)
    sp.add_argument("--delta", type=float)
    sp.add_argument("--mode", choices=("all", "dim1"))
    sp.add_argument("--direction", choices=("asc", "desc"))
    sp.add_argument("--k-nn", type=int, dest="k_nn")
    sp.add_argument("--include-outliers", action="store_const", const=True,
                    dest="include_outliers")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phlandmarks",
        description="Landmark selection benchmarks for persistent homology",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("gen", help="emit a dataset CSV")
    _add_common(sp)

    sp = sub.add_parser("select", help="emit a landmark-indices CSV")
    _add_common(sp)
    _add_selector(sp)
    sp.add_argument("--m", type=int, help="number of landmarks")

    sp = sub.add_parser("sweep", help="signal-fraction sweep CSV")
    _add_common(sp)
    _add_selector(sp)
    sp.add_argument("--densities", help="comma-separated densities in (0,1]")
    sp.add_argument("--reps", type=int)

    sp = sub.add_parser("delta-sweep", help="super-outlier counts per delta")
    _add_common(sp)
    sp.add_argument("--deltas", help="comma-separated deltas")

    sp = sub.add_parser("hist", help="outlierness histogram CSV")
    _add_common(sp)
    sp.add_argument("--delta", type=float)
    sp.add_argument("--mode", choices=("all", "dim1"))
    sp.add_argument("--direction", choices=("asc", "desc"))
    sp.add_argument("--bin-width", type=float, dest="bin_width")

    sp = sub.add_parser("barcode", help="global VR barcode on landmarks")
    _add_common(sp)
    _add_selector(sp)
    sp.add_argument("--take", type=int, help="use the first TAKE landmarks")
    sp.add_argument("--eps-max", type=float, dest="eps_max")
    sp.add_argument("--dims", help="comma-separated homology dims, e.g. 0,1")
    sp.add_argument("--allow-large", action="store_const", const=True,
                    dest="allow_large")
    return parser


def _parse_config_file(path: str) -> dict:
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key = value")
            key, _, val = line.partition("=")
            values[key.strip().replace("-", "_")] = val.strip()
    return values


_BOOL_KEYS = {"include_outliers", "allow_large"}
_INT_KEYS = {"n", "seed", "threads", "m", "reps", "k_nn", "take"}
_FLOAT_KEYS = {"p", "delta", "bin_width", "eps_max"}


def _coerce(key: str, val: str):
    if key in _BOOL_KEYS:
        return val.lower() in ("1", "true", "yes", "on")
    if key in _INT_KEYS:
        return int(val)
    if key in _FLOAT_KEYS:
        return float(val)
    return val


def _resolve(args: argparse.Namespace) -> argparse.Namespace:
    """builtin defaults < config file < explicit flags."""
    merged = dict(_DEFAULTS)
    if getattr(args, "config", None):
        for key, val in _parse_config_file(args.config).items():
            if key not in merged and key != "out":
                raise ValueError(f"unknown config key {key!r}")
            merged[key] = _coerce(key, val) if key != "out" else val
    for key, val in vars(args).items():
        if val is not None:
            merged[key] = val
    ns = argparse.Namespace(**merged)
    ns.command = args.command
    return ns


def _parse_float_list(text: str) -> tuple[float, ...]:
    return tuple(float(tok) for tok in text.split(",") if tok.strip())


def _selector_spec(opts) -> SelectorSpec:
    dims = PhDims.ALL if opts.mode == "all" else PhDims.DIM1
    direction = None
    if opts.direction is not None:
        direction = Direction.ASCENDING if opts.direction == "asc" else Direction.DESCENDING
    return SelectorSpec(
        method=opts.method,
        delta=opts.delta,
        dims=dims,
        direction=direction,
        k_nn=opts.k_nn,
        include_outliers=bool(opts.include_outliers),
    )


def _require_out(opts) -> str:
    if not getattr(opts, "out", None):
        raise ValueError("--out PATH is required")
    return opts.out


def cmd_gen(opts) -> None:
    sample = generate(opts.dataset, opts.n, opts.p, opts.seed)
    sample_to_csv(sample, _require_out(opts))


def cmd_select(opts) -> None:
    if opts.m is None:
        raise ValueError("--m is required for select")
    sample = generate(opts.dataset, opts.n, opts.p, opts.seed)
    spec = _selector_spec(opts)
    dist = None
    ph_cache = None
    if spec.method in ("maxmin", "dense_core", "ph"):
        dist = pairwise_distances(sample.cloud)
    if spec.method == "ph":
        ph_cache = score_all_points(
            sample.cloud,
            spec.resolved_delta(sample.kind),
            spec.mode().dims,
            dist=dist,
            threads=opts.threads,
        )
    rng = _cell_rng(opts.seed, 0, 0)
    sel = _run_selector_cell(spec, sample, opts.m, rng, dist, ph_cache)
    selection_to_csv(sel, _require_out(opts))


def cmd_sweep(opts) -> None:
    densities = (
        _parse_float_list(opts.densities)
        if isinstance(opts.densities, str)
        else DEFAULT_DENSITIES
    )
    config = ExperimentConfig(
        dataset=opts.dataset,
        n=opts.n,
        p=opts.p,
        selector=_selector_spec(opts),
        densities=densities,
        realizations=opts.reps,
        seed=opts.seed,
        threads=opts.threads,
    )
    table = run_fraction_sweep(config)
    out = _require_out(opts)
    table.to_csv(out)
    table.raw_to_csv(raw_companion_path(out))


def cmd_delta_sweep(opts) -> None:
    if not opts.deltas:
        raise ValueError("--deltas is required for delta-sweep")
    sample = generate(opts.dataset, opts.n, opts.p, opts.seed)
    rows = run_super_outlier_sweep(sample, _parse_float_list(opts.deltas))
    delta_sweep_to_csv(rows, _require_out(opts))


def cmd_hist(opts) -> None:
    sample = generate(opts.dataset, opts.n, opts.p, opts.seed)
    dims = PhDims.ALL if opts.mode == "all" else PhDims.DIM1
    direction = None
    if opts.direction is not None:
        direction = Direction.ASCENDING if opts.direction == "asc" else Direction.DESCENDING
    spec = SelectorSpec("ph", delta=opts.delta, dims=dims, direction=direction)
    hist = run_histogram(
        sample,
        spec.resolved_delta(sample.kind),
        spec.mode(),
        bin_width=opts.bin_width,
        threads=opts.threads,
    )
    hist.to_csv(_require_out(opts))


def cmd_barcode(opts) -> None:
    if opts.take is None:
        raise ValueError("--take is required for barcode")
    if opts.eps_max is None:
        raise ValueError("--eps-max is required for barcode")
    sample = generate(opts.dataset, opts.n, opts.p, opts.seed)
    spec = _selector_spec(opts)
    dist = None
    ph_cache = None
    if spec.method in ("maxmin", "dense_core", "ph"):
        dist = pairwise_distances(sample.cloud)
    if spec.method == "ph":
        ph_cache = score_all_points(
            sample.cloud,
            spec.resolved_delta(sample.kind),
            spec.mode().dims,
            dist=dist,
            threads=opts.threads,
        )
    rng = _cell_rng(opts.seed, 0, 0)
    sel = _run_selector_cell(spec, sample, opts.take, rng, dist, ph_cache)
    dims = tuple(int(tok) for tok in str(opts.dims).split(",") if tok.strip())
    bc = run_global_barcode(
        sample,
        sel,
        take=opts.take,
        eps_max=opts.eps_max,
        dims=dims,
        allow_large=bool(opts.allow_large),
    )
    barcode_to_csv(bc, _require_out(opts))


_COMMANDS = {
    "gen": cmd_gen,
    "select": cmd_select,
    "sweep": cmd_sweep,
    "delta-sweep": cmd_delta_sweep,
    "hist": cmd_hist,
    "barcode": cmd_barcode,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        opts = _resolve(args)
        _COMMANDS[opts.command](opts)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
