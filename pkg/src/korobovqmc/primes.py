"""Prime sieving, the half-open prime band, and density calibration.

The band for parameter M collects the primes p with ceil(M/2) < p <= M.
Its cardinality obeys two-sided bounds of the form

    c_P * M / log(M)  <=  |band(M)|  <=  C_P * M / log(M)

for absolute constants 0 < c_P < 1 < C_P.  No closed-form constants are
assumed anywhere in this package: ``calibrate_density`` scans a range of M
exhaustively and reports the extreme ratios together with safe recommended
constants, and every bound-producing operation takes c_P explicitly.  All
logarithms are natural.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

# Safe default established by the calibration scan up to 1e5: the minimum of
# |band(M)| * log(M) / M over 2 <= M <= 1e5 is log(10)/10 ~ 0.2303 (at M=10),
# so 1/4 would already be invalid while 1/5 is covered with margin.
DEFAULT_C_P = 0.2


def sieve_primes(limit: int) -> np.ndarray:
    """All primes <= limit, ascending, as an int64 array.

    Supported for limits of at least 1e7 (a plain boolean Eratosthenes
    sieve; memory is one byte per candidate).
    """
    limit = int(limit)
    if limit < 2:
        raise DomainError(f"sieve limit must be >= 2, got {limit}")
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


def is_prime(n: int) -> bool:
    """Trial-division primality check (adequate for block parameters)."""
    n = int(n)
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class PrimeBand:
    """The primes p with ceil(M/2) < p <= M, ascending."""

    M: int
    primes: tuple[int, ...]

    @property
    def count(self) -> int:
        return len(self.primes)


def prime_band(M: int) -> PrimeBand:
    """Prime band for M: strict lower bound ceil(M/2), inclusive upper M."""
    M = int(M)
    if M < 2:
        raise DomainError(f"band parameter must be >= 2, got {M}")
    lo = (M + 1) // 2  # ceil(M/2)
    primes = sieve_primes(M)
    band = primes[primes > lo]
    return PrimeBand(M=M, primes=tuple(int(p) for p in band))


@dataclass(frozen=True)
class DensityCalibration:
    """Extremes of |band(M)| * log(M) / M over 2 <= M <= M_max."""

    M_max: int
    min_ratio: float
    argmin_M: int
    max_ratio: float
    argmax_M: int
    recommended_c_P: float
    recommended_C_P: float

    def to_json_dict(self) -> dict:
        return {
            "m_max": self.M_max,
            "min_ratio": self.min_ratio,
            "argmin_m": self.argmin_M,
            "max_ratio": self.max_ratio,
            "argmax_m": self.argmax_M,
            "c_p": self.recommended_c_P,
            "C_p": self.recommended_C_P,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


def band_ratios(M_max: int) -> np.ndarray:
    """Vector of |band(M)| * log(M) / M for M = 2..M_max (index 0 is M=2)."""
    M_max = int(M_max)
    if M_max < 2:
        raise DomainError(f"M_max must be >= 2, got {M_max}")
    is_p = np.ones(M_max + 1, dtype=bool)
    is_p[:2] = False
    for p in range(2, math.isqrt(M_max) + 1):
        if is_p[p]:
            is_p[p * p :: p] = False
    pi = np.cumsum(is_p)  # pi[x] = number of primes <= x
    M = np.arange(2, M_max + 1, dtype=np.int64)
    counts = pi[M] - pi[(M + 1) // 2]
    if counts.min() < 1:
        raise AssertionError("empty prime band encountered; sieve is broken")
    return counts * np.log(M) / M


def calibrate_density(M_max: int) -> DensityCalibration:
    """Scan M = 2..M_max and recommend constants covering the observed ratios.

    recommended_c_P is the largest reciprocal integer 1/n not exceeding the
    scanned minimum; recommended_C_P is the smallest integer >= 2 covering
    the scanned maximum.  Only the scanned range is claimed.
    """
    ratios = band_ratios(M_max)
    imin = int(np.argmin(ratios))
    imax = int(np.argmax(ratios))
    min_ratio = float(ratios[imin])
    max_ratio = float(ratios[imax])
    n = max(2, math.ceil(1.0 / min_ratio))
    if 1.0 / n > min_ratio:  # guard the ceil against float edges
        n += 1
    return DensityCalibration(
        M_max=int(M_max),
        min_ratio=min_ratio,
        argmin_M=imin + 2,
        max_ratio=max_ratio,
        argmax_M=imax + 2,
        recommended_c_P=1.0 / n,
        recommended_C_P=float(max(2, math.ceil(max_ratio))),
    )
