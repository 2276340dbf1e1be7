"""Wall-clock comparison of the numba and numpy kernel editions.

Both editions are always importable; SNFOURIER_BACKEND only selects which one
the library dispatches to, so this script times the two directly against each
other on the same inputs.

Run:  python3 benchmarks/backend_bench.py [--n 6] [--repeats 5]
"""

import argparse
import math
import time

import numpy as np

from snfourier import _backend
from snfourier.partitions import enumerate_partitions, irrep_dimension
from snfourier.yor import _generator_data


def best_of(repeats, fn, *args):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser(
        description="compare the numba and numpy kernel editions"
    )
    parser.add_argument("--n", type=int, default=6, help="degree (n! state size)")
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()
    n = args.n
    fact = math.factorial(n)

    lines = np.asarray(_backend.all_perms0(n)) + 1
    digits = np.asarray(_backend.all_digits(n))
    seq = np.asarray(_backend.swap_sequence(n))
    weights = np.asarray(_backend.factorial_weights(n))
    lam = max(enumerate_partitions(n), key=irrep_dimension)
    diag, offd, partner = (np.asarray(a) for a in _generator_data(lam))
    rng = np.random.default_rng(0)
    q = rng.random(fact)
    q /= q.sum()
    h = rng.standard_normal(fact)
    perms0 = np.asarray(_backend.all_perms0(n))
    inv0 = np.asarray(_backend.all_inverses0(n))

    cases = [
        ("encode_batch", (lines,)),
        ("decode_batch", (digits,)),
        ("apply_swaps", (digits, seq)),
        ("irrep_stack", (seq, diag, offd, partner, weights)),
        ("convolve", (q, h, perms0, inv0, weights)),
    ]

    print(f"n = {n} ({fact} permutations), largest block {lam.parts} "
          f"(d = {irrep_dimension(lam)}), best of {args.repeats}\n")
    header = f"{'kernel':<14} {'numba':>12} {'numpy':>12} {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for name, call_args in cases:
        nb_fn = _backend.IMPL_NUMBA[name]
        np_fn = _backend.IMPL_NUMPY[name]
        nb_fn(*call_args)  # trigger JIT compilation outside the timed region
        t_nb = best_of(args.repeats, nb_fn, *call_args)
        t_np = best_of(args.repeats, np_fn, *call_args)
        print(f"{name:<14} {t_nb * 1e3:>10.3f}ms {t_np * 1e3:>10.3f}ms "
              f"{t_np / t_nb:>8.1f}x")


if __name__ == "__main__":
    main()
