"""Hot kernels: modular-Horner phase residues and normalized Weyl sums.

Every quantity this package measures reduces to sums of ``exp(2*pi*i*r/den)``
where ``r`` is an exact integer residue of a polynomial ``k_1*n + k_2*n^2 +
... + k_d*n^d`` modulo ``den`` (``den = p`` for the S/U families, ``p**2``
for T).  Residues are always built by modular Horner recursion on int64,
never by floating-point powering; only the final complex exponential is
inexact.  Moduli must satisfy ``den <= 2**31`` so the int64 products
``acc * n`` cannot overflow (callers enforce this).

Two interchangeable backends are defined side by side:

* ``*_nb``: numba ``@njit`` loops (row scans and table builds run under
  ``prange``; results are deterministic because parallel iterations write
  disjoint slots and reductions happen afterwards in numpy).
* ``*_np``: pure-numpy implementations of the same signatures.

The public unsuffixed names are bound at import time.  Numba is preferred
when it imports cleanly unless the environment variable
``KOROBOVQMC_NO_NUMBA`` is set to something truthy.  Both backends remain
importable so tests can assert their equivalence and
``benchmarks/bench_kernels.py`` can time one against the other.

Exact identities used by the fast paths (cross-checked against the flat
sums in the test suite):

* U family: summing ``exp(2*pi*i*a*s/p)`` over ``a = 0..p-1`` gives ``p``
  when ``s == 0 (mod p)`` and ``0`` otherwise, so the normalized U sum
  equals ``(#roots of the phase polynomial in [0,p)) / p``.
* T family: writing ``n = a + b*p`` gives ``P(n) = P(a) + b*p*P'(a)
  (mod p**2)``, so the normalized T sum equals ``(1/p) * sum of
  exp(2*pi*i*P(a)/p**2) over the a in [0,p) with P'(a) == 0 (mod p)``.
"""

from __future__ import annotations

import math
import os

import numpy as np

TWO_PI = 2.0 * math.pi

_flag = os.environ.get("KOROBOVQMC_NO_NUMBA", "").strip().lower()
NUMBA_REQUESTED = _flag in ("", "0", "false", "no")

try:
    from numba import njit, prange

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - exercised via the env-flag fallback
    NUMBA_AVAILABLE = False

    def njit(*args, **kwargs):  # type: ignore[no-redef]
        raise RuntimeError("numba is not available")

    prange = range  # type: ignore[assignment]


# --------------------------------------------------------------------------
# pure-numpy backend
# --------------------------------------------------------------------------

def _horner_rows_np(kmod, n, modulus):
    """Residues of sum_j k_j * n^j (j=1..d) for one n and many k rows."""
    d = kmod.shape[1]
    acc = kmod[:, d - 1].copy()
    for j in range(d - 2, -1, -1):
        acc = (acc * n + kmod[:, j]) % modulus
    return (acc * n) % modulus


def weyl_flat_s_np(p, kred):
    """Normalized S-family block sum; ``kred`` reduced mod p, shape (d,)."""
    n = np.arange(p, dtype=np.int64)
    d = len(kred)
    acc = np.full(p, kred[d - 1], dtype=np.int64)
    for j in range(d - 2, -1, -1):
        acc = (acc * n + kred[j]) % p
    r = (acc * n) % p
    z = np.exp((2j * np.pi / p) * r)
    return complex(math.fsum(z.real), math.fsum(z.imag)) / p


def weyl_flat_t_np(p, kred2):
    """Normalized T-family block sum; ``kred2`` reduced mod p**2."""
    q = p * p
    n = np.arange(q, dtype=np.int64)
    d = len(kred2)
    acc = np.full(q, kred2[d - 1], dtype=np.int64)
    for j in range(d - 2, -1, -1):
        acc = (acc * n + kred2[j]) % q
    r = (acc * n) % q
    z = np.exp((2j * np.pi / q) * r)
    return complex(math.fsum(z.real), math.fsum(z.imag)) / q


def weyl_flat_u_np(p, kred):
    """Normalized U-family block sum over points ordered (a, n) lexicographic."""
    n = np.arange(p, dtype=np.int64)
    d = len(kred)
    acc = np.full(p, kred[d - 1], dtype=np.int64)
    for j in range(d - 2, -1, -1):
        acc = (acc * n + kred[j]) % p
    s = (acc * n) % p
    a = np.arange(p, dtype=np.int64)
    r = (a[:, None] * s[None, :]) % p
    z = np.exp((2j * np.pi / p) * r.ravel())
    return complex(math.fsum(z.real), math.fsum(z.imag)) / (p * p)


def _unit_roots_np(den):
    return np.exp((2j * np.pi / den) * np.arange(den))


def rows_weyl_s_np(kmod, p):
    """S-block sums for many frequencies; ``kmod`` int64 (m, d) in [0, p)."""
    m = kmod.shape[0]
    roots = _unit_roots_np(p)
    out = np.zeros(m, dtype=np.complex128)
    for n in range(p):
        out += roots[_horner_rows_np(kmod, n, p)]
    return out / p


def rows_weyl_t_np(kmodp, kmodq, p):
    """T-block sums via the derivative collapse; residues mod p and mod p**2."""
    m, d = kmodp.shape
    q = p * p
    roots = _unit_roots_np(q)
    dcoef = np.empty_like(kmodp)
    for i in range(d):
        dcoef[:, i] = ((i + 1) * kmodp[:, i]) % p
    out = np.zeros(m, dtype=np.complex128)
    for a in range(p):
        acc = dcoef[:, d - 1].copy()
        for i in range(d - 2, -1, -1):
            acc = (acc * a + dcoef[:, i]) % p
        stationary = np.flatnonzero(acc == 0)
        if stationary.size == 0:
            continue
        r = _horner_rows_np(kmodq[stationary], a, q)
        out[stationary] += roots[r]
    return out / p


def rows_count_u_np(kmod, p):
    """Root counts N0 of the phase polynomial; U-block sum equals N0/p."""
    m = kmod.shape[0]
    counts = np.zeros(m, dtype=np.int64)
    for n in range(p):
        r = _horner_rows_np(kmod, n, p)
        counts += r == 0
    return counts


def _residue_grid_np(p, d):
    idx = np.arange(p**d, dtype=np.int64)
    return [(idx // p**j) % p for j in range(d)]


def table_weyl_s_np(p, d):
    """S-block sums for all p**d residue vectors, mixed-radix indexed."""
    cols = _residue_grid_np(p, d)
    roots = _unit_roots_np(p)
    out = np.zeros(p**d, dtype=np.complex128)
    for n in range(p):
        acc = cols[d - 1].copy()
        for j in range(d - 2, -1, -1):
            acc = (acc * n + cols[j]) % p
        out += roots[(acc * n) % p]
    return out / p


def table_count_u_np(p, d):
    """Phase-polynomial root counts for all p**d residue vectors."""
    cols = _residue_grid_np(p, d)
    counts = np.zeros(p**d, dtype=np.int64)
    for n in range(p):
        acc = cols[d - 1].copy()
        for j in range(d - 2, -1, -1):
            acc = (acc * n + cols[j]) % p
        counts += ((acc * n) % p) == 0
    return counts


# --------------------------------------------------------------------------
# numba backend
# --------------------------------------------------------------------------

if NUMBA_AVAILABLE:

    @njit(cache=True)
    def _weyl_flat_s_nb(p, kred):
        d = kred.shape[0]
        sr = 0.0
        si = 0.0
        cr = 0.0
        ci = 0.0
        for n in range(p):
            acc = kred[d - 1]
            for j in range(d - 2, -1, -1):
                acc = (acc * n + kred[j]) % p
            r = (acc * n) % p
            ang = TWO_PI * (r / p)
            # Kahan-compensated accumulation, real and imaginary parts
            y = math.cos(ang) - cr
            t = sr + y
            cr = (t - sr) - y
            sr = t
            y = math.sin(ang) - ci
            t = si + y
            ci = (t - si) - y
            si = t
        return complex(sr, si) / p

    @njit(cache=True)
    def _weyl_flat_t_nb(p, kred2):
        q = p * p
        d = kred2.shape[0]
        sr = 0.0
        si = 0.0
        cr = 0.0
        ci = 0.0
        for n in range(q):
            acc = kred2[d - 1]
            for j in range(d - 2, -1, -1):
                acc = (acc * n + kred2[j]) % q
            r = (acc * n) % q
            ang = TWO_PI * (r / q)
            y = math.cos(ang) - cr
            t = sr + y
            cr = (t - sr) - y
            sr = t
            y = math.sin(ang) - ci
            t = si + y
            ci = (t - si) - y
            si = t
        return complex(sr, si) / q

    @njit(cache=True)
    def _weyl_flat_u_nb(p, kred):
        d = kred.shape[0]
        s = np.empty(p, dtype=np.int64)
        for n in range(p):
            acc = kred[d - 1]
            for j in range(d - 2, -1, -1):
                acc = (acc * n + kred[j]) % p
            s[n] = (acc * n) % p
        cosr = np.empty(p, dtype=np.float64)
        sinr = np.empty(p, dtype=np.float64)
        for r in range(p):
            ang = TWO_PI * (r / p)
            cosr[r] = math.cos(ang)
            sinr[r] = math.sin(ang)
        sr = 0.0
        si = 0.0
        cr = 0.0
        ci = 0.0
        for a in range(p):
            for n in range(p):
                r = (a * s[n]) % p
                y = cosr[r] - cr
                t = sr + y
                cr = (t - sr) - y
                sr = t
                y = sinr[r] - ci
                t = si + y
                ci = (t - si) - y
                si = t
        return complex(sr, si) / (p * p)

    @njit(cache=True, parallel=True)
    def _rows_weyl_s_nb(kmod, p):
        m, d = kmod.shape
        cosr = np.empty(p, dtype=np.float64)
        sinr = np.empty(p, dtype=np.float64)
        for r in range(p):
            ang = TWO_PI * (r / p)
            cosr[r] = math.cos(ang)
            sinr[r] = math.sin(ang)
        out = np.empty(m, dtype=np.complex128)
        for i in prange(m):
            sr = 0.0
            si = 0.0
            for n in range(p):
                acc = kmod[i, d - 1]
                for j in range(d - 2, -1, -1):
                    acc = (acc * n + kmod[i, j]) % p
                r = (acc * n) % p
                sr += cosr[r]
                si += sinr[r]
            out[i] = complex(sr, si) / p
        return out

    @njit(cache=True, parallel=True)
    def _rows_weyl_t_nb(kmodp, kmodq, p):
        m, d = kmodp.shape
        q = p * p
        # a root table pays for itself once m * d exceeds q and stays small
        use_table = q <= 4_194_304 and m * d >= q
        cosr = np.empty(q if use_table else 0, dtype=np.float64)
        sinr = np.empty(q if use_table else 0, dtype=np.float64)
        if use_table:
            for r in range(q):
                ang = TWO_PI * (r / q)
                cosr[r] = math.cos(ang)
                sinr[r] = math.sin(ang)
        out = np.empty(m, dtype=np.complex128)
        for i in prange(m):
            sr = 0.0
            si = 0.0
            for a in range(p):
                dacc = (d * kmodp[i, d - 1]) % p
                for j in range(d - 2, -1, -1):
                    dacc = (dacc * a + (j + 1) * kmodp[i, j]) % p
                if dacc != 0:
                    continue
                acc = kmodq[i, d - 1]
                for j in range(d - 2, -1, -1):
                    acc = (acc * a + kmodq[i, j]) % q
                r = (acc * a) % q
                if use_table:
                    sr += cosr[r]
                    si += sinr[r]
                else:
                    ang = TWO_PI * (r / q)
                    sr += math.cos(ang)
                    si += math.sin(ang)
            out[i] = complex(sr, si) / p
        return out

    @njit(cache=True, parallel=True)
    def _rows_count_u_nb(kmod, p):
        m, d = kmod.shape
        counts = np.empty(m, dtype=np.int64)
        for i in prange(m):
            c = 0
            for n in range(p):
                acc = kmod[i, d - 1]
                for j in range(d - 2, -1, -1):
                    acc = (acc * n + kmod[i, j]) % p
                if (acc * n) % p == 0:
                    c += 1
            counts[i] = c
        return counts

    @njit(cache=True, parallel=True)
    def _table_weyl_s_nb(p, d):
        size = p**d
        strides = np.empty(d, dtype=np.int64)
        s = 1
        for j in range(d):
            strides[j] = s
            s *= p
        cosr = np.empty(p, dtype=np.float64)
        sinr = np.empty(p, dtype=np.float64)
        for r in range(p):
            ang = TWO_PI * (r / p)
            cosr[r] = math.cos(ang)
            sinr[r] = math.sin(ang)
        out = np.empty(size, dtype=np.complex128)
        for idx in prange(size):
            # little-endian mixed-radix decode: digit j = coefficient of x^(j+1)
            digits = np.empty(d, dtype=np.int64)
            for j in range(d):
                digits[j] = (idx // strides[j]) % p
            sr = 0.0
            si = 0.0
            for n in range(p):
                acc = digits[d - 1]
                for j in range(d - 2, -1, -1):
                    acc = (acc * n + digits[j]) % p
                r = (acc * n) % p
                sr += cosr[r]
                si += sinr[r]
            out[idx] = complex(sr, si) / p
        return out

    @njit(cache=True, parallel=True)
    def _table_count_u_nb(p, d):
        size = p**d
        strides = np.empty(d, dtype=np.int64)
        s = 1
        for j in range(d):
            strides[j] = s
            s *= p
        counts = np.empty(size, dtype=np.int64)
        for idx in prange(size):
            digits = np.empty(d, dtype=np.int64)
            for j in range(d):
                digits[j] = (idx // strides[j]) % p
            c = 0
            for n in range(p):
                acc = digits[d - 1]
                for j in range(d - 2, -1, -1):
                    acc = (acc * n + digits[j]) % p
                if (acc * n) % p == 0:
                    c += 1
            counts[idx] = c
        return counts

    def weyl_flat_s_nb(p, kred):
        return _weyl_flat_s_nb(p, np.ascontiguousarray(kred, dtype=np.int64))

    def weyl_flat_t_nb(p, kred2):
        return _weyl_flat_t_nb(p, np.ascontiguousarray(kred2, dtype=np.int64))

    def weyl_flat_u_nb(p, kred):
        return _weyl_flat_u_nb(p, np.ascontiguousarray(kred, dtype=np.int64))

    def rows_weyl_s_nb(kmod, p):
        return _rows_weyl_s_nb(np.ascontiguousarray(kmod, dtype=np.int64), p)

    def rows_weyl_t_nb(kmodp, kmodq, p):
        return _rows_weyl_t_nb(
            np.ascontiguousarray(kmodp, dtype=np.int64),
            np.ascontiguousarray(kmodq, dtype=np.int64),
            p,
        )

    def rows_count_u_nb(kmod, p):
        return _rows_count_u_nb(np.ascontiguousarray(kmod, dtype=np.int64), p)

    def table_weyl_s_nb(p, d):
        return _table_weyl_s_nb(p, d)

    def table_count_u_nb(p, d):
        return _table_count_u_nb(p, d)

else:
    weyl_flat_s_nb = None
    weyl_flat_t_nb = None
    weyl_flat_u_nb = None
    rows_weyl_s_nb = None
    rows_weyl_t_nb = None
    rows_count_u_nb = None
    table_weyl_s_nb = None
    table_count_u_nb = None


USE_NUMBA = NUMBA_AVAILABLE and NUMBA_REQUESTED
BACKEND = "numba" if USE_NUMBA else "numpy"

if USE_NUMBA:
    weyl_flat_s = weyl_flat_s_nb
    weyl_flat_t = weyl_flat_t_nb
    weyl_flat_u = weyl_flat_u_nb
    rows_weyl_s = rows_weyl_s_nb
    rows_weyl_t = rows_weyl_t_nb
    rows_count_u = rows_count_u_nb
    table_weyl_s = table_weyl_s_nb
    table_count_u = table_count_u_nb
else:
    weyl_flat_s = weyl_flat_s_np
    weyl_flat_t = weyl_flat_t_np
    weyl_flat_u = weyl_flat_u_np
    rows_weyl_s = rows_weyl_s_np
    rows_weyl_t = rows_weyl_t_np
    rows_count_u = rows_count_u_np
    table_weyl_s = table_weyl_s_np
    table_count_u = table_count_u_np
