"""Permutations of {1..n}: one-line and Lehmer forms, ranking, composition.

Conventions used throughout the package:

* positions, items and values are 1-based in every public interface;
* composition is (a . b)(i) = a(b(i)), so b acts first;
* tau_k is the adjacent transposition of k and k+1, and right-composing
  sigma . tau_k swaps slots k and k+1 of the one-line form;
* ranks are big-endian factorial-base values of Lehmer digits, which orders
  S_n lexicographically by one-line form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _backend


@dataclass(frozen=True)
class Permutation:
    """A bijection on {1..n} in one-line form: slot i holds the image of i."""

    one_line: tuple[int, ...]

    def __post_init__(self):
        ol = tuple(int(v) for v in self.one_line)
        object.__setattr__(self, "one_line", ol)
        if sorted(ol) != list(range(1, len(ol) + 1)):
            raise ValueError(f"not a permutation of 1..{len(ol)}: {ol}")

    @property
    def n(self) -> int:
        return len(self.one_line)

    def __call__(self, i: int) -> int:
        return self.one_line[i - 1]


@dataclass(frozen=True)
class LehmerCode:
    """Digit string l_1..l_n with l_i in {0..n-i}; the last digit is 0."""

    digits: tuple[int, ...]

    def __post_init__(self):
        digs = tuple(int(v) for v in self.digits)
        object.__setattr__(self, "digits", digs)
        n = len(digs)
        for i, d in enumerate(digs):
            if not 0 <= d <= n - i - 1:
                raise ValueError(f"digit {d} out of range at slot {i + 1} for n={n}")

    @property
    def n(self) -> int:
        return len(self.digits)


def identity(n: int) -> Permutation:
    return Permutation(tuple(range(1, n + 1)))


def compose(a: Permutation, b: Permutation) -> Permutation:
    """(a . b)(i) = a(b(i)); b acts first."""
    if a.n != b.n:
        raise ValueError("degree mismatch")
    return Permutation(tuple(a.one_line[v - 1] for v in b.one_line))


def inverse(p: Permutation) -> Permutation:
    inv = [0] * p.n
    for i, v in enumerate(p.one_line):
        inv[v - 1] = i + 1
    return Permutation(tuple(inv))


def adjacent_transposition(n: int, k: int) -> Permutation:
    """tau_k, swapping k and k+1."""
    if not 1 <= k <= n - 1:
        raise ValueError(f"k must be in 1..{n - 1}, got {k}")
    ol = list(range(1, n + 1))
    ol[k - 1], ol[k] = ol[k], ol[k - 1]
    return Permutation(tuple(ol))


def lehmer_encode(p: Permutation) -> LehmerCode:
    """Count, per slot, the later values that are smaller."""
    ol = p.one_line
    n = p.n
    return LehmerCode(
        tuple(
            sum(1 for j in range(i + 1, n) if ol[j] < ol[i]) for i in range(n)
        )
    )


def lehmer_decode(code: LehmerCode) -> Permutation:
    """Pick the d-th smallest value still available, per digit."""
    avail = list(range(1, code.n + 1))
    return Permutation(tuple(avail.pop(d) for d in code.digits))


def lehmer_rank(code: LehmerCode) -> int:
    """Big-endian factorial-base value of the digits."""
    n = code.n
    return sum(d * math.factorial(n - 1 - i) for i, d in enumerate(code.digits))


def lehmer_unrank(rank: int, n: int) -> LehmerCode:
    if not 0 <= rank < math.factorial(n):
        raise ValueError(f"rank {rank} out of range for n={n}")
    digits = []
    for i in range(n):
        w = math.factorial(n - 1 - i)
        digits.append(rank // w)
        rank %= w
    return LehmerCode(tuple(digits))


def adjacent_update(code: LehmerCode, k: int) -> LehmerCode:
    """Digits of sigma . tau_k from the digits of sigma.

    Right-composing with tau_k touches only slots k and k+1: with
    a = l_k, b = l_{k+1}, the new pair is (b, a-1) when a > b and
    (b+1, a) otherwise.
    """
    if not 1 <= k <= code.n - 1:
        raise ValueError(f"k must be in 1..{code.n - 1}, got {k}")
    a, b = code.digits[k - 1], code.digits[k]
    pair = (b, a - 1) if a > b else (b + 1, a)
    return LehmerCode(code.digits[: k - 1] + pair + code.digits[k + 1 :])


def reorder_sequence(
    n: int, indices: tuple[int, ...], mode: str
) -> tuple[Permutation, tuple[int, ...]]:
    """Adjacent-swap plan moving the given slots to the front or the back.

    Returns (pi, seq). Right-composing sigma with the tau_k of seq, in order,
    yields sigma . pi, whose leading (mode="to_front") or trailing
    (mode="to_back") slots read the chosen indices in ascending order; slots
    already in place cost nothing, and len(seq) <= k*n overall.
    """
    idx = sorted(int(i) for i in indices)
    if len(set(idx)) != len(idx):
        raise ValueError("indices must be distinct")
    if idx and not (1 <= idx[0] and idx[-1] <= n):
        raise ValueError(f"indices must lie in 1..{n}")
    k = len(idx)
    seq: list[int] = []
    if mode == "to_front":
        for slot, i in enumerate(idx, start=1):
            seq.extend(range(i - 1, slot - 1, -1))
    elif mode == "to_back":
        for slot in range(k, 0, -1):
            seq.extend(range(idx[slot - 1], n - k + slot))
    else:
        raise ValueError(f"mode must be to_front|to_back, got {mode!r}")
    ol = list(range(1, n + 1))
    for s in seq:
        ol[s - 1], ol[s] = ol[s], ol[s - 1]
    return Permutation(tuple(ol)), tuple(seq)


def register_qubits(n: int) -> int:
    """Qubits needed to hold all Lehmer digit registers: sum of ceil(log2 k)."""
    return sum((k - 1).bit_length() for k in range(2, n + 1))


@lru_cache(maxsize=None)
def all_one_lines(n: int) -> np.ndarray:
    """(n!, n) array of 1-based one-line forms, row r = permutation of rank r."""
    out = _backend.all_perms0(n) + 1
    out.flags.writeable = False
    return out


def all_lehmer_digits(n: int) -> np.ndarray:
    """(n!, n) array of Lehmer digits, row r = digits of rank r. Read-only."""
    return _backend.all_digits(n)


def ranks_after_sequence(n: int, seq: tuple[int, ...]) -> np.ndarray:
    """Rank of sigma_r composed with the swap sequence, for every rank r."""
    moved = _backend.apply_swaps(_backend.all_digits(n), np.asarray(seq, dtype=np.int64))
    return moved @ _backend.factorial_weights(n)
