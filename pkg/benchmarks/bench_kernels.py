#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Both backends are imported side by side (the KOROBOVQMC_NO_NUMBA env flag
only controls which one the library binds by default), so this script times
them on the workloads that dominate the verification and worst-case-error
scans and prints a speedup table.

Usage: python benchmarks/bench_kernels.py [--quick]
"""

import argparse
import time

import numpy as np

from korobovqmc import _kernels as K


def timeit(fn, *args, repeat=3):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def bench(name, np_fn, nb_fn, args, check=None):
    t_np, r_np = timeit(np_fn, *args)
    if nb_fn is None:
        print(f"{name:<44} numpy {t_np * 1e3:9.2f} ms   numba unavailable")
        return
    nb_fn(*args)  # compile outside the timed region
    t_nb, r_nb = timeit(nb_fn, *args)
    if check is not None:
        check(r_np, r_nb)
    print(
        f"{name:<44} numpy {t_np * 1e3:9.2f} ms   numba {t_nb * 1e3:9.2f} ms"
        f"   speedup {t_np / t_nb:6.1f}x"
    )


def close(a, b):
    assert np.max(np.abs(np.asarray(a) - np.asarray(b))) < 1e-9


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--quick", action="store_true", help="smaller workloads")
    opts = parser.parse_args()

    rng = np.random.default_rng(0)
    p = 61
    m = 20_000 if opts.quick else 200_000
    d = 3

    kmat = rng.integers(-64, 65, size=(m, d), dtype=np.int64)
    kmod = kmat % p
    kmodq = kmat % (p * p)

    print(f"rows: m={m}, p={p}, d={d};  tables: p**d={p**d}")
    bench(
        "S-block row scan (flat Horner sums)",
        K.rows_weyl_s_np, K.rows_weyl_s_nb, (kmod, p), close,
    )
    bench(
        "U-block row scan (phase-root counts)",
        K.rows_count_u_np, K.rows_count_u_nb, (kmod, p), close,
    )
    bench(
        "T-block row scan (derivative collapse)",
        K.rows_weyl_t_np, K.rows_weyl_t_nb, (kmodq % p, kmodq, p), close,
    )
    bench(
        "S residue table build",
        K.table_weyl_s_np, K.table_weyl_s_nb, (p, d), close,
    )
    bench(
        "U residue count table build",
        K.table_count_u_np, K.table_count_u_nb, (p, d), close,
    )

    q = 97 if opts.quick else 409
    kred2 = rng.integers(0, q * q, size=d, dtype=np.int64)
    bench(
        f"T flat block sum (p={q}, {q * q} points)",
        K.weyl_flat_t_np, K.weyl_flat_t_nb, (q, kred2),
        lambda a, b: close([a], [b]),
    )


if __name__ == "__main__":
    main()
