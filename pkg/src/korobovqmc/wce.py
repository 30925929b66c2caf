"""Worst-case integration error machinery for the log-weighted Fourier space.

The function space is all f with sum_k |fhat(k)| * max(1, log|k|_inf) finite
(natural log).  For an equal-weight rule with normalized exponential sums
W(k), the worst-case error over the unit ball equals

    sup_{k != 0} |W(k)| / max(1, log|k|_inf),

which this module brackets two-sidedly: a frequency-box scan gives the
supremum over 0 < |k|_inf <= K exactly (a lower bound on the sup), and the
tail beyond the box is capped by 1/log(K) because |W| <= 1 and the weight
exceeds log(K) there.  Whenever the box supremum reaches the tail cap the
bracket collapses and the worst-case error is computed exactly.

The scan covers only frequencies whose first nonzero component is positive:
W(-k) is the exact complex conjugate of W(k), so the ratio is symmetric and
the half-space supremum equals the full one.  Reported maximizers are the
lexicographically smallest within that half-space (ties broken by scan
order), so e.g. a maximizing pair {-9, +9} is reported as (9,).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import CapacityError, DomainError
from .pointsets import FAMILIES, CompositePointSet, composite_count
from .primes import DEFAULT_C_P

SCAN_BUDGET = 4_000_000
TABLE_CAP = 4_000_000

WCE_CSV_HEADER = "family,M,d,N,K,lower,upper,bound_in_M,bound_in_N,c_p"


def weight(k) -> float:
    """Frequency weight max(1, log|k|_inf); weight(0) is defined as 1."""
    m = max(abs(int(v)) for v in k) if len(k) else 0
    if m <= 1:
        return 1.0
    return max(1.0, math.log(m))


def initial_error() -> float:
    """Worst-case error of the zero algorithm: exactly 1 in this space."""
    return 1.0


@dataclass(frozen=True)
class WceBounds:
    family: str
    M: int
    d: int
    c_P: float
    n_points: int
    bound_in_M: float
    bound_in_N: float

    @property
    def vacuous(self) -> bool:
        """True when a reported bound exceeds the initial error 1."""
        return self.bound_in_M > 1.0 or self.bound_in_N > 1.0

    def to_json_dict(self) -> dict:
        return {
            "family": self.family,
            "M": self.M,
            "d": self.d,
            "c_p": self.c_P,
            "N": self.n_points,
            "bound_in_M": self.bound_in_M,
            "bound_in_N": self.bound_in_N,
            "vacuous": self.vacuous,
            "initial_error": initial_error(),
        }


def wce_upper(family: str, M: int, d: int, c_P: float = DEFAULT_C_P) -> WceBounds:
    """Theorem-style upper bounds, in M and in the point count N.

    S:     8d / (c_P * sqrt(M))   and   8d / (c_P * N^(1/4))
    T, U:  8d / (c_P * M)         and   8d / (c_P * N^(1/3))

    Values above 1 are reported verbatim (the trivial bound is the initial
    error 1); see the ``vacuous`` flag.
    """
    if family not in FAMILIES:
        raise DomainError(f"unknown family {family!r}; expected one of {FAMILIES}")
    if M < 2:
        raise DomainError(f"band parameter must be >= 2, got {M}")
    if d < 1:
        raise DomainError(f"dimension must be >= 1, got {d}")
    if not 0.0 < c_P < 1.0:
        raise DomainError(f"c_P must lie in (0,1), got {c_P}")
    n = composite_count(family, M)
    if family == "S":
        in_m = 8.0 * d / (c_P * math.sqrt(M))
        in_n = 8.0 * d / (c_P * n**0.25)
    else:
        in_m = 8.0 * d / (c_P * M)
        in_n = 8.0 * d / (c_P * n ** (1.0 / 3.0))
    return WceBounds(
        family=family,
        M=int(M),
        d=int(d),
        c_P=c_P,
        n_points=n,
        bound_in_M=in_m,
        bound_in_N=in_n,
    )


@dataclass(frozen=True)
class WceEstimate:
    lower: float
    upper: float
    K: int
    argmax_k: tuple[int, ...]
    exhaustive: bool

    @property
    def certified_exact(self) -> bool:
        """True when the box supremum reaches the tail cap, so lower == sup."""
        return self.exhaustive and self.upper == self.lower

    def to_json_dict(self) -> dict:
        return {
            "K": self.K,
            "lower": self.lower,
            "upper": self.upper,
            "argmax_k": list(self.argmax_k),
            "exhaustive": self.exhaustive,
            "certified_exact": self.certified_exact,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


def half_space_frequencies(K: int, d: int) -> np.ndarray:
    """All k with first nonzero component positive and |k|_inf <= K, in
    lexicographic order (most leading zeros first)."""
    segments = []
    for i in range(d - 1, -1, -1):
        axes = (
            [np.zeros(1, dtype=np.int64)] * i
            + [np.arange(1, K + 1, dtype=np.int64)]
            + [np.arange(-K, K + 1, dtype=np.int64)] * (d - 1 - i)
        )
        grid = np.meshgrid(*axes, indexing="ij")
        segments.append(np.stack(grid, axis=-1).reshape(-1, d))
    return np.vstack(segments)


def _residue_index(kmat: np.ndarray, p: int, d: int) -> np.ndarray:
    kmod = kmat % p
    idx = kmod[:, 0].copy()
    stride = 1
    for j in range(1, d):
        stride *= p
        idx += kmod[:, j] * stride
    return idx


def composite_abs_scan(cps: CompositePointSet, kmat: np.ndarray) -> np.ndarray:
    """|composite Weyl sum| per row of kmat.

    Per-block values are computed through the fast per-family paths
    (residue tables for S/U when they pay off, the derivative collapse for
    T); these agree with the flat definitional sums to ~1e-13 and the test
    suite pins that equivalence.
    """
    m, d = kmat.shape
    acc = np.zeros(m, dtype=np.complex128)
    total = 0
    for block in cps.blocks:
        p = block.p
        c = block.count
        total += c
        if cps.family == "S":
            if p**d <= min(TABLE_CAP, 8 * m):
                table = _kernels.table_weyl_s(p, d)
                vals = table[_residue_index(kmat, p, d)]
            else:
                vals = _kernels.rows_weyl_s(kmat % p, p)
            acc += c * vals
        elif cps.family == "U":
            if p**d <= min(TABLE_CAP, 8 * m):
                counts = _kernels.table_count_u(p, d)[_residue_index(kmat, p, d)]
            else:
                counts = _kernels.rows_count_u(kmat % p, p)
            acc += (c / p) * counts
        else:
            kmodq = kmat % (p * p)
            acc += c * _kernels.rows_weyl_t(kmodq % p, kmodq, p)
    return np.abs(acc) / total


def wce_truncated(
    cps: CompositePointSet,
    K: int,
    budget: int = SCAN_BUDGET,
    sample: int | None = None,
    seed: int = 0,
) -> WceEstimate:
    """Two-sided worst-case error bracket from a frequency-box scan.

    lower = max over 0 < |k|_inf <= K of |W(k)| / weight(k); with an
    exhaustive scan, upper = max(lower, 1/log K).  K >= 3 so the tail cap
    is below 1.  If the (conjugate-folded) box exceeds ``budget`` and no
    ``sample`` size was requested, a capacity error is raised; a sampled
    scan keeps the lower bound but reports the trivial upper bound 1.
    """
    K = int(K)
    if K < 3:
        raise DomainError(f"box radius must be >= 3, got {K}")
    d = cps.d
    hs_size = ((2 * K + 1) ** d - 1) // 2
    if hs_size <= budget:
        kmat = half_space_frequencies(K, d)
        exhaustive = True
    elif sample is not None:
        rng = np.random.default_rng([seed, K, d])
        chunks = []
        need = int(sample)
        while need > 0:
            batch = rng.integers(-K, K + 1, size=(2 * need, d), dtype=np.int64)
            batch = batch[~np.all(batch == 0, axis=1)][:need]
            chunks.append(batch)
            need -= batch.shape[0]
        kmat = np.vstack(chunks)
        exhaustive = False
    else:
        raise CapacityError(
            f"frequency box ({hs_size} half-space points) exceeds budget {budget}; "
            "pass a sample size to scan stochastically"
        )
    absw = composite_abs_scan(cps, kmat)
    weights = np.maximum(1.0, np.log(np.maximum(np.abs(kmat).max(axis=1), 1)))
    ratios = absw / weights
    i = int(np.argmax(ratios))  # first maximizer = lexicographically smallest
    lower = float(ratios[i])
    tail_cap = 1.0 / math.log(K)
    upper = max(lower, tail_cap) if exhaustive else 1.0
    return WceEstimate(
        lower=lower,
        upper=upper,
        K=K,
        argmax_k=tuple(int(v) for v in kmat[i]),
        exhaustive=exhaustive,
    )


def info_complexity_bound(eps: float, d: int, c_P: float = DEFAULT_C_P) -> int:
    """Point-count bound ceil((8/c_P)^3 * eps^-3 * d^3) for worst-case error
    <= eps (normalized and absolute criteria coincide: initial error is 1)."""
    if not 0.0 < eps < 1.0:
        raise DomainError(f"tolerance must lie in (0,1), got {eps}")
    if d < 1:
        raise DomainError(f"dimension must be >= 1, got {d}")
    if not 0.0 < c_P < 1.0:
        raise DomainError(f"c_P must lie in (0,1), got {c_P}")
    return math.ceil((8.0 / c_P) ** 3 * eps**-3.0 * d**3)


def wce_csv_row(bounds: WceBounds, estimate: WceEstimate) -> str:
    return (
        f"{bounds.family},{bounds.M},{bounds.d},{bounds.n_points},{estimate.K},"
        f"{estimate.lower:.17g},{estimate.upper:.17g},"
        f"{bounds.bound_in_M:.17g},{bounds.bound_in_N:.17g},{bounds.c_P:.17g}"
    )
