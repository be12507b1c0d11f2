"""Compare the compiled and pure-Python modular kernels.

Usage: python benchmarks/bench_kernels.py [--size N] [--repeat R]
"""

import argparse
import random
import timeit

from qsuper import _pykernels

try:
    from qsuper import _ckernels
except ImportError:
    _ckernels = None

PRIME = 2**31 - 1


def random_matrix(rows, cols, rank, seed=0):
    rng = random.Random(seed)
    left = [[rng.randrange(PRIME) for _ in range(rank)] for _ in range(rows)]
    right = [[rng.randrange(PRIME) for _ in range(cols)] for _ in range(rank)]
    return [[sum(left[i][t] * right[t][j] for t in range(rank)) % PRIME for j in range(cols)] for i in range(rows)]


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--size", type=int, default=120)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    n = args.size
    M = random_matrix(n, n, n - 7)
    backends = {"python": _pykernels}
    if _ckernels is not None:
        backends["cython"] = _ckernels
    ranks = {}
    for name, mod in backends.items():
        ranks[name] = mod.rank_mod(M, PRIME)
        t = min(timeit.repeat(lambda: mod.rank_mod(M, PRIME), number=1, repeat=args.repeat))
        u = min(timeit.repeat(lambda: mod.matmul_mod(M, M, PRIME), number=1, repeat=args.repeat))
        print(f"{name:7s} rank_mod {t * 1e3:9.2f} ms   matmul_mod {u * 1e3:9.2f} ms   rank={ranks[name]}")
    if len(set(ranks.values())) != 1:
        raise SystemExit("backends disagree")
    if _ckernels is None:
        print("compiled kernels not built; only the fallback was timed")


if __name__ == "__main__":
    main()
