"""Korobov p-set blocks (families S, T, U) and their prime-band composites.

Points are stored exactly: an integer numerator matrix plus one common
denominator per block (p for S and U, p**2 for T), so downstream phase
computations stay in exact residue arithmetic.  Composites keep per-prime
block structure, and duplicate points across blocks (the origin belongs to
every block) are retained with multiplicity; the cubature normalization is
the total multiset count.

Enumeration order is fixed everywhere: primes ascending, then point index n
ascending ((a, n) lexicographic for U), which pins floating-point
accumulation order downstream.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, TextIO

import numpy as np

from .errors import CapacityError, DomainError
from .primes import is_prime, prime_band

FAMILIES = ("S", "T", "U")

# int64 modular products acc*n stay below 2**62 as long as the modulus is
# at most 2**31; for T the modulus is p**2.
MAX_P_SU = 2**31
MAX_P_T = 46340  # isqrt(2**31)


@dataclass(frozen=True)
class RationalPoint:
    """One cube point with exact coordinates numerators[j] / den."""

    numerators: tuple[int, ...]
    den: int


@dataclass(frozen=True)
class KorobovBlock:
    family: str
    p: int
    d: int
    den: int
    numerators: np.ndarray  # (count, d) int64, entries in [0, den)

    @property
    def count(self) -> int:
        return self.numerators.shape[0]

    def point(self, i: int) -> RationalPoint:
        return RationalPoint(tuple(int(v) for v in self.numerators[i]), self.den)

    @property
    def points(self) -> list[RationalPoint]:
        return [self.point(i) for i in range(self.count)]

    def to_unit_cube_array(self) -> np.ndarray:
        """Float coordinates in [0,1)^d, one row per point."""
        return self.numerators / float(self.den)


def _power_columns(n: np.ndarray, d: int, modulus: int) -> np.ndarray:
    """Columns n^j mod modulus for j = 1..d, by iterated multiplication."""
    cols = np.empty((n.shape[0], d), dtype=np.int64)
    acc = n % modulus
    cols[:, 0] = acc
    for j in range(1, d):
        acc = (acc * n) % modulus
        cols[:, j] = acc
    return cols


def korobov_block(family: str, p: int, d: int) -> KorobovBlock:
    """Construct one p-set block.

    S: p points ({n/p}, {n^2/p}, ..., {n^d/p}), n = 0..p-1.
    T: p**2 points with denominator p**2, n = 0..p**2-1.
    U: p**2 points ({a*n/p}, ..., {a*n^d/p}), (a, n) in [0,p)^2 lexicographic.
    """
    p = int(p)
    d = int(d)
    if family not in FAMILIES:
        raise DomainError(f"unknown family {family!r}; expected one of {FAMILIES}")
    if d < 1:
        raise DomainError(f"dimension must be >= 1, got {d}")
    if not is_prime(p):
        raise DomainError(f"block parameter must be prime, got {p}")
    if family == "T":
        if p > MAX_P_T:
            raise CapacityError(
                f"family T needs p**2 <= 2**31 for exact int64 arithmetic; got p={p}"
            )
        den = p * p
        n = np.arange(den, dtype=np.int64)
        nums = _power_columns(n, d, den)
    elif family == "S":
        if p > MAX_P_SU:
            raise CapacityError(f"family S supports p <= 2**31; got p={p}")
        den = p
        n = np.arange(p, dtype=np.int64)
        nums = _power_columns(n, d, den)
    else:  # U
        if p > MAX_P_SU:
            raise CapacityError(f"family U supports p <= 2**31; got p={p}")
        den = p
        n = np.arange(p, dtype=np.int64)
        base = _power_columns(n, d, den)  # (p, d)
        a = np.arange(p, dtype=np.int64)
        nums = (a[:, None, None] * base[None, :, :] % den).reshape(p * p, d)
    nums.setflags(write=False)
    return KorobovBlock(family=family, p=p, d=d, den=den, numerators=nums)


@dataclass(frozen=True)
class CompositePointSet:
    family: str
    M: int
    d: int
    blocks: tuple[KorobovBlock, ...]

    @property
    def total_count(self) -> int:
        return sum(b.count for b in self.blocks)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(b.p for b in self.blocks)


def composite_point_set(family: str, M: int, d: int) -> CompositePointSet:
    """Union-with-multiplicity of blocks over the prime band of M."""
    band = prime_band(M)
    blocks = tuple(korobov_block(family, p, d) for p in band.primes)
    return CompositePointSet(family=family, M=int(M), d=int(d), blocks=blocks)


def composite_count(family: str, M: int) -> int:
    """Total point count without building the blocks: sum p or sum p**2."""
    band = prime_band(M)
    if family == "S":
        return sum(band.primes)
    if family in ("T", "U"):
        return sum(p * p for p in band.primes)
    raise DomainError(f"unknown family {family!r}; expected one of {FAMILIES}")


def to_unit_cube(point: RationalPoint) -> np.ndarray:
    """Round-to-nearest float coordinates numerators/den, always in [0,1)."""
    return np.asarray(point.numerators, dtype=np.float64) / float(point.den)


def write_pointset(cps: CompositePointSet, out: TextIO) -> None:
    """Plain-text export: header line, then one point per line with 17
    significant digits per coordinate."""
    out.write(
        f"# family={cps.family} M={cps.M} d={cps.d} count={cps.total_count}\n"
    )
    for block in cps.blocks:
        coords = block.to_unit_cube_array()
        for row in coords:
            out.write(" ".join(f"{v:.17g}" for v in row))
            out.write("\n")


def iter_unit_cube_rows(cps: CompositePointSet) -> Iterable[np.ndarray]:
    """Per-block float coordinate arrays, primes ascending."""
    for block in cps.blocks:
        yield block.to_unit_cube_array()
