"""Integer partitions of n, irreducible dimensions, and class data for S_n.

Partitions are weakly decreasing tuples of positive parts. Enumeration order
is reverse lexicographic, so (n,) comes first and (1, ..., 1) last; every
index-based layout elsewhere in the package assumes this order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import TYPE_CHECKING, NamedTuple

from .errors import check_degree

if TYPE_CHECKING:
    from .perms import Permutation


@dataclass(frozen=True)
class Partition:
    """A partition of some positive integer, stored as its parts."""

    parts: tuple[int, ...]

    def __post_init__(self):
        if not self.parts:
            raise ValueError("partition needs at least one part")
        prev = None
        for p in self.parts:
            if not isinstance(p, int) or p < 1:
                raise ValueError(f"parts must be positive integers, got {p!r}")
            if prev is not None and p > prev:
                raise ValueError("parts must be weakly decreasing")
            prev = p

    @property
    def weight(self) -> int:
        return sum(self.parts)

    def conjugate(self) -> "Partition":
        cols = [sum(1 for p in self.parts if p > c) for c in range(self.parts[0])]
        return Partition(tuple(cols))

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)


@lru_cache(maxsize=None)
def enumerate_partitions(n: int) -> tuple[Partition, ...]:
    """All partitions of n in reverse lexicographic order."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")

    def rec(remaining, cap):
        if remaining == 0:
            yield ()
            return
        for first in range(min(remaining, cap), 0, -1):
            for rest in rec(remaining - first, first):
                yield (first,) + rest

    return tuple(Partition(parts) for parts in rec(n, n))


@lru_cache(maxsize=None)
def irrep_dimension(lam: Partition) -> int:
    """Dimension of the irreducible indexed by lam, by the hook length formula."""
    conj = lam.conjugate().parts
    hooks = 1
    for i, row in enumerate(lam.parts):
        for j in range(row):
            hooks *= (row - j) + (conj[j] - i) - 1
    dim, rem = divmod(math.factorial(lam.weight), hooks)
    assert rem == 0
    return dim


@lru_cache(maxsize=None)
def transposition_character_ratio(lam: Partition) -> Fraction:
    """Normalized character chi(tau)/dim at any transposition tau, exact.

    Equals (sum_i C(lam_i, 2) - sum_j C(lam'_j, 2)) / C(n, 2); ranges over
    [-1, 1] and flips sign under conjugation.
    """
    n = lam.weight
    if n < 2:
        return Fraction(1)
    rows = sum(math.comb(p, 2) for p in lam.parts)
    cols = sum(math.comb(p, 2) for p in lam.conjugate().parts)
    return Fraction(rows - cols, math.comb(n, 2))


def diffusion_eigenvalue(lam: Partition, p) -> Fraction:
    """Fourier eigenvalue p + (1-p) * ratio of the lazy transposition walk.

    Exact when p is a Fraction or int; floats are converted exactly
    (binary floats are dyadic rationals), so callers keep full control of
    rounding by passing a Fraction.
    """
    p = Fraction(p)
    return p + (1 - p) * transposition_character_ratio(lam)


def partition_count_asymptotic(n: int) -> float:
    """Hardy-Ramanujan leading term exp(pi sqrt(2n/3)) / (4 n sqrt(3))."""
    if n < 1:
        raise ValueError("n must be positive")
    return math.exp(math.pi * math.sqrt(2.0 * n / 3.0)) / (4.0 * n * math.sqrt(3.0))


def _class_size(n: int, cycle_type: tuple[int, ...]) -> int:
    mult: dict[int, int] = {}
    for k in cycle_type:
        mult[k] = mult.get(k, 0) + 1
    denom = 1
    for k, m in mult.items():
        denom *= k**m * math.factorial(m)
    size, rem = divmod(math.factorial(n), denom)
    assert rem == 0
    return size


def _class_representative(n: int, cycle_type: tuple[int, ...]):
    # consecutive blocks: cycle type (3,2) on n=5 -> (2,3,1,5,4)
    one_line = []
    start = 1
    for k in cycle_type:
        block = list(range(start + 1, start + k)) + [start]
        one_line.extend(block)
        start += k
    from .perms import Permutation

    return Permutation(tuple(one_line))


class ConjugacyClass(NamedTuple):
    cycle_type: Partition
    size: int
    representative: "Permutation"


@lru_cache(maxsize=None)
def conjugacy_classes(n: int) -> tuple[ConjugacyClass, ...]:
    """One record per class, cycle types in reverse lexicographic order."""
    check_degree(n)
    out = []
    for lam in enumerate_partitions(n):
        ctype = lam.parts
        out.append(
            ConjugacyClass(lam, _class_size(n, ctype), _class_representative(n, ctype))
        )
    return tuple(out)


@lru_cache(maxsize=None)
def character(lam: Partition, cycle_type: Partition) -> int:
    """Irreducible character value chi_lam at the given cycle type.

    Computed as the trace of the orthogonal representation at a class
    representative, then checked to be within 1e-6 of an integer.
    """
    if cycle_type.weight != lam.weight:
        raise ValueError("cycle type and partition weigh different n")
    from . import yor

    rep = _class_representative(lam.weight, cycle_type.parts)
    trace = float(yor.irrep_of(lam, rep).trace())
    nearest = round(trace)
    assert abs(trace - nearest) < 1e-6
    return nearest


def kronecker_multiplicity(lam: Partition, mu: Partition, nu: Partition) -> int:
    """Multiplicity of nu inside the tensor product of lam and mu.

    Exact class sum (1/n!) sum_C |C| chi_lam chi_mu chi_nu over rational
    arithmetic; the result is verified to be a nonnegative integer.
    """
    n = lam.weight
    if mu.weight != n or nu.weight != n:
        raise ValueError("all three partitions must share the same weight")
    check_degree(n, guard=8)
    total = Fraction(0)
    for cls in conjugacy_classes(n):
        ctype = cls.cycle_type
        total += cls.size * character(lam, ctype) * character(mu, ctype) * character(
            nu, ctype
        )
    mult = total / math.factorial(n)
    assert mult.denominator == 1 and mult >= 0
    return int(mult)
