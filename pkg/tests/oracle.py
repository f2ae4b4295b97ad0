"""Brute-force persistence oracle, independent of the package internals.

Enumerates every simplex up to dimension 3, builds the dense mod-2
boundary matrix and runs the unoptimized left-to-right reduction with
explicit low() scans.  Only fit for tiny complexes; that is the point.
"""

import math
from itertools import combinations

import numpy as np

INF = math.inf


def oracle_barcode(dmat, eps_max, max_dim=3, dims=(0, 1, 2)):
    """Interval lists per dimension, zero-length bars dropped."""
    n = dmat.shape[0]
    simplices = []
    for size in range(1, max_dim + 2):
        for verts in combinations(range(n), size):
            if size == 1:
                val = 0.0
            else:
                val = max(dmat[a][b] for a, b in combinations(verts, 2))
            if val <= eps_max:
                simplices.append((verts, val))
    simplices.sort(key=lambda s: (s[1], len(s[0]), s[0]))
    index = {verts: i for i, (verts, _) in enumerate(simplices)}
    m = len(simplices)

    boundary = np.zeros((m, m), dtype=np.uint8)
    for j, (verts, _) in enumerate(simplices):
        if len(verts) == 1:
            continue
        for k in range(len(verts)):
            face = verts[:k] + verts[k + 1 :]
            boundary[index[face], j] = 1

    def low(col):
        rows = np.flatnonzero(boundary[:, col])
        return int(rows[-1]) if rows.size else -1

    pairs = []
    for j in range(m):
        lj = low(j)
        while lj != -1:
            owner = -1
            for k in range(j):
                if low(k) == lj:
                    owner = k
                    break
            if owner == -1:
                break
            boundary[:, j] ^= boundary[:, owner]
            lj = low(j)
        if lj != -1:
            pairs.append((lj, j))

    paired = {i for p in pairs for i in p}
    bars = {0: [], 1: [], 2: []}
    for bi, di in pairs:
        verts, bval = simplices[bi]
        dval = simplices[di][1]
        dim = len(verts) - 1
        if dim in bars and dim in set(dims) and dval > bval:
            bars[dim].append((bval, dval))
    for i in range(m):
        if i in paired:
            continue
        verts, bval = simplices[i]
        dim = len(verts) - 1
        if dim in bars and dim in set(dims):
            bars[dim].append((bval, INF))
    return bars


def sorted_bars(bars, dim):
    return sorted(bars.get(dim, []) if isinstance(bars, dict) else bars.bars(dim))
