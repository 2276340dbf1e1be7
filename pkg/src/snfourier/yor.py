"""Young's orthogonal representation of S_n.

Basis vectors are standard tableaux in last-letter order. Adjacent
transpositions act by the classic two-line rule: diagonal entry 1/dist and
off-diagonal sqrt(1 - 1/dist^2) coupling each tableau with the one obtained
by swapping k and k+1, where dist is the axial distance from k to k+1. All
matrices are real orthogonal, so inverses are transposes.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from . import _backend
from .partitions import Partition, irrep_dimension
from .perms import Permutation, lehmer_encode, lehmer_rank

Tableau = tuple[tuple[int, ...], ...]


@lru_cache(maxsize=None)
def standard_tableaux(lam: Partition) -> tuple[Tableau, ...]:
    """All standard Young tableaux of shape lam, in last-letter order."""
    n = lam.weight

    def rec(shape: tuple[int, ...]):
        if sum(shape) == 0:
            yield ()
            return
        m = sum(shape)
        # corners scanned bottom row first puts tableaux with m lower earlier
        for i in range(len(shape) - 1, -1, -1):
            if shape[i] > 0 and (i == len(shape) - 1 or shape[i] > shape[i + 1]):
                smaller = shape[:i] + (shape[i] - 1,) + shape[i + 1 :]
                for partial in rec(smaller):
                    yield partial + ((i, shape[i] - 1, m),)

    out = []
    for placements in rec(lam.parts):
        rows: list[list[int]] = [[0] * p for p in lam.parts]
        for i, j, value in placements:
            rows[i][j] = value
        out.append(tuple(tuple(r) for r in rows if r))
    return tuple(out)


@lru_cache(maxsize=None)
def _generator_data(lam: Partition):
    """Per-generator sparse action: diag, offd, partner index arrays.

    Row t of the matrix for tau_k is diag[t] on the diagonal plus offd[t] in
    column partner[t]; partner[t] == t exactly when offd[t] == 0.
    """
    tabs = standard_tableaux(lam)
    index = {tab: t for t, tab in enumerate(tabs)}
    d = len(tabs)
    n = lam.weight
    diag = np.zeros((n - 1, d) if n > 1 else (0, d))
    offd = np.zeros_like(diag)
    partner = np.tile(np.arange(d), (max(n - 1, 0), 1))
    for t, tab in enumerate(tabs):
        pos = {v: (i, j) for i, row in enumerate(tab) for j, v in enumerate(row)}
        for k in range(1, n):
            (r1, c1), (r2, c2) = pos[k], pos[k + 1]
            dist = (c2 - c1) - (r2 - r1)
            diag[k - 1, t] = 1.0 / dist
            if abs(dist) > 1:
                offd[k - 1, t] = math.sqrt(1.0 - 1.0 / dist**2)
                swapped = tuple(
                    tuple(k + 1 if v == k else k if v == k + 1 else v for v in row)
                    for row in tab
                )
                partner[k - 1, t] = index[swapped]
    diag.setflags(write=False)
    offd.setflags(write=False)
    partner.setflags(write=False)
    return diag, offd, partner


def yor_generator(lam: Partition, k: int) -> np.ndarray:
    """Matrix of the adjacent transposition tau_k in the lam irreducible."""
    n = lam.weight
    if not 1 <= k <= n - 1:
        raise ValueError(f"k must be in 1..{n - 1}, got {k}")
    diag, offd, partner = _generator_data(lam)
    d = diag.shape[1]
    mat = np.zeros((d, d))
    rows = np.arange(d)
    mat[rows, rows] = diag[k - 1]
    mat[rows, partner[k - 1]] += offd[k - 1]
    return mat


def irrep_of(lam: Partition, perm: Permutation) -> np.ndarray:
    """Representation matrix of perm, built from its adjacent factorization."""
    if perm.n != lam.weight:
        raise ValueError("permutation degree and partition weight differ")
    diag, offd, partner = _generator_data(lam)
    mat = np.eye(diag.shape[1])
    line = list(perm.one_line)
    # bubble sort records tau_k factors; applying them left to right rebuilds perm
    for i in range(len(line)):
        for k in range(len(line) - 1, i, -1):
            if line[k - 1] > line[k]:
                line[k - 1], line[k] = line[k], line[k - 1]
                g = k - 1
                mat = diag[g][:, None] * mat + offd[g][:, None] * mat[partner[g]]
    return mat


@lru_cache(maxsize=None)
def irrep_stack(n: int, lam: Partition) -> np.ndarray:
    """All n! representation matrices, indexed by permutation rank.

    Shape (n!, d, d) with stack[r] the matrix of the rank-r permutation.
    Cached read-only; one Gray-code sweep builds the whole stack.
    """
    if lam.weight != n:
        raise ValueError("partition weight must equal n")
    diag, offd, partner = _generator_data(lam)
    stack = _backend.irrep_stack_from_generators(n, diag, offd, partner)
    stack.setflags(write=False)
    return stack
