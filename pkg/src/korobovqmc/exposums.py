"""Normalized exponential (Weyl) sums over p-set blocks and composites,
single-prime and composite bound formulas, and an empirical verification
harness.

Conventions:

* A frequency is an integer vector k of length d (zeros and negatives
  allowed); |k|_inf is the max absolute component.
* ``p | k`` means p divides every component of k.  The single-prime bounds
  apply to ``p`` not dividing ``k``; when ``p | k`` the trivial bound 1 is
  used instead.
* Block sums are averages of exp(2*pi*i*k.x) over the block points, with
  the phase reduced to an exact integer residue before the exponential.

Known sharpness caveats, verified by brute force in the test suite and
reported (not hidden) by the harness:

* family U: the classical constant (d-1)/p undercounts by one root of the
  phase polynomial (n = 0 always contributes); the empirically sharp
  constant is d/p, so ``verify_lemma`` reports violations for U at d >= 2.
* family T: the constant (d-1)/p requires p > d; for p <= d the derivative
  of the phase polynomial can vanish identically mod p (e.g. p = 3, d = 3,
  k = (0,0,1)) and the sum exceeds the bound.
* d = 1 degenerates the S/U constants to zero while the sums can be
  nonzero; the harness verifies the trivial bound 1 there instead and
  flags it in the report notes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import DomainError
from .pointsets import (
    MAX_P_T,
    FAMILIES,
    CompositePointSet,
    KorobovBlock,
    composite_count,
)
from .primes import DEFAULT_C_P, is_prime, prime_band

EXHAUSTIVE_CAP = 1_000_000
INEQ_SLACK = 1e-9


def inf_norm(k) -> int:
    """Max absolute component of a frequency vector."""
    vals = [abs(int(v)) for v in k]
    if not vals:
        raise DomainError("frequency vector must be non-empty")
    return max(vals)


def _reduce(k, modulus: int) -> np.ndarray:
    """Exact componentwise reduction into [0, modulus) via Python ints."""
    return np.array([int(v) % modulus for v in k], dtype=np.int64)


@dataclass(frozen=True)
class WeylSumResult:
    value: complex
    count: int


def block_weyl_value(family: str, p: int, d: int, k) -> complex:
    """Normalized block sum without materializing the point set."""
    if family not in FAMILIES:
        raise DomainError(f"unknown family {family!r}; expected one of {FAMILIES}")
    if len(k) != d:
        raise DomainError(f"frequency has length {len(k)}, block dimension is {d}")
    if family == "S":
        return _kernels.weyl_flat_s(p, _reduce(k, p))
    if family == "T":
        return _kernels.weyl_flat_t(p, _reduce(k, p * p))
    return _kernels.weyl_flat_u(p, _reduce(k, p))


def weyl_sum_block(block: KorobovBlock, k) -> WeylSumResult:
    """Average of exp(2*pi*i*k.x) over one block, exact residue phases."""
    value = block_weyl_value(block.family, block.p, block.d, k)
    return WeylSumResult(value=value, count=block.count)


def composite_weyl_value(family: str, primes, d: int, k) -> complex:
    """Count-weighted average of block sums over the given primes, ascending."""
    num_r: list[float] = []
    num_i: list[float] = []
    total = 0
    for p in primes:
        c = p if family == "S" else p * p
        v = block_weyl_value(family, p, d, k)
        num_r.append(c * v.real)
        num_i.append(c * v.imag)
        total += c
    return complex(math.fsum(num_r), math.fsum(num_i)) / total


def weyl_sum_composite(cps: CompositePointSet, k) -> WeylSumResult:
    if len(k) != cps.d:
        raise DomainError(
            f"frequency has length {len(k)}, composite dimension is {cps.d}"
        )
    value = composite_weyl_value(cps.family, cps.primes, cps.d, k)
    return WeylSumResult(value=value, count=cps.total_count)


# --------------------------------------------------------------------------
# bound formulas
# --------------------------------------------------------------------------

def _check_nonzero(k) -> None:
    if all(int(v) == 0 for v in k):
        raise DomainError("frequency k = 0 is excluded from the bounds")


def lemma_bound(family: str, p: int, d: int, k) -> float:
    """Single-prime bound: 1 when p | k, else (d-1)/sqrt(p) for S and
    (d-1)/p for T and U."""
    if family not in FAMILIES:
        raise DomainError(f"unknown family {family!r}; expected one of {FAMILIES}")
    _check_nonzero(k)
    if all(int(v) % p == 0 for v in k):
        return 1.0
    if family == "S":
        return (d - 1) / math.sqrt(p)
    return (d - 1) / p


def corollary_bound(
    family: str, M: int, d: int, k, c_P: float = DEFAULT_C_P
) -> float:
    """Composite bound in terms of the density constant c_P.

    S:     2(d-1)/sqrt(M) + 4*log|k|_inf / (c_P*M)
    T, U:  4(d-1)/M       + 4*log|k|_inf / (c_P*M)
    """
    if family not in FAMILIES:
        raise DomainError(f"unknown family {family!r}; expected one of {FAMILIES}")
    _check_nonzero(k)
    if not 0.0 < c_P < 1.0:
        raise DomainError(f"c_P must lie in (0,1), got {c_P}")
    logk = math.log(inf_norm(k))  # log 1 = 0 by convention
    tail = 4.0 * logk / (c_P * M)
    if family == "S":
        return 2.0 * (d - 1) / math.sqrt(M) + tail
    return 4.0 * (d - 1) / M + tail


def corollary_bound_exact(family: str, M: int, d: int, k) -> float:
    """Sharper composite bound with the band cardinality read off exactly.

    Follows the composite-bound derivation but keeps the actual point count
    instead of substituting the density inequality:

    S:     2(d-1)/sqrt(M) + (2*log|k|_inf / log(ceil(M/2)+1)) * M   / N
    T, U:  4(d-1)/M       + (2*log|k|_inf / log(ceil(M/2)+1)) * M^2 / N

    where N is the composite total count.
    """
    if family not in FAMILIES:
        raise DomainError(f"unknown family {family!r}; expected one of {FAMILIES}")
    _check_nonzero(k)
    n_points = composite_count(family, M)
    base = (M + 1) // 2 + 1
    divisors = 2.0 * math.log(inf_norm(k)) / math.log(base)
    if family == "S":
        return 2.0 * (d - 1) / math.sqrt(M) + divisors * M / n_points
    return 4.0 * (d - 1) / M + divisors * M * M / n_points


# --------------------------------------------------------------------------
# verification harness
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class VerificationReport:
    family: str
    mode: str  # "lemma" | "corollary_cP" | "corollary_exact"
    cases_checked: int
    violations: int
    max_ratio: float
    argmax_scale: int  # p for lemma mode, M for corollary modes
    argmax_d: int
    argmax_k: tuple[int, ...]
    passed: bool
    notes: tuple[str, ...] = field(default=())

    def to_json_dict(self) -> dict:
        return {
            "family": self.family,
            "mode": self.mode,
            "cases_checked": self.cases_checked,
            "max_ratio": self.max_ratio,
            "argmax": {
                "p_or_M": self.argmax_scale,
                "d": self.argmax_d,
                "k": list(self.argmax_k),
            },
            "passed": self.passed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


def _full_box(K: int, d: int) -> np.ndarray:
    axes = [np.arange(-K, K + 1, dtype=np.int64)] * d
    grid = np.meshgrid(*axes, indexing="ij")
    return np.stack(grid, axis=-1).reshape(-1, d)


def _sample_box(rng, K: int, d: int, count: int, reject_mod: int | None = None):
    """Uniform nonzero frequencies from [-K, K]^d; optionally reject p | k."""
    chunks = []
    need = count
    while need > 0:
        batch = rng.integers(-K, K + 1, size=(max(2 * need, 64), d), dtype=np.int64)
        keep = ~np.all(batch == 0, axis=1)
        if reject_mod is not None:
            keep &= ~np.all(batch % reject_mod == 0, axis=1)
        batch = batch[keep][:need]
        chunks.append(batch)
        need -= batch.shape[0]
    return np.vstack(chunks)


def _family_code(family: str) -> int:
    return FAMILIES.index(family)


def _block_values_rows(family: str, p: int, kmat: np.ndarray) -> np.ndarray:
    """|normalized block sum| per row of kmat (int64, any sign)."""
    if family == "S":
        return np.abs(_kernels.rows_weyl_s(kmat % p, p))
    if family == "U":
        return _kernels.rows_count_u(kmat % p, p) / p
    q = p * p
    kmodq = kmat % q
    return np.abs(_kernels.rows_weyl_t(kmodq % p, kmodq, p))


def verify_lemma(
    family: str,
    p_list,
    d_list,
    K: int | None = None,
    sample: int = 10_000,
    seed: int = 0,
    tol: float = INEQ_SLACK,
    exhaustive_cap: int = EXHAUSTIVE_CAP,
) -> VerificationReport:
    """Check |W(k)| against the single-prime bound over frequency boxes.

    Per (p, d) the box [-K, K]^d (K defaults to p) is scanned exhaustively
    when it holds at most ``exhaustive_cap`` frequencies (pass 0 to force
    sampling), otherwise ``sample`` frequencies are drawn with a
    seed-deterministic generator.  k = 0 and p | k are excluded.
    Violations are reported, never raised.
    """
    if family not in FAMILIES:
        raise DomainError(f"unknown family {family!r}; expected one of {FAMILIES}")
    cases = 0
    violations = 0
    best_ratio = -1.0
    best_at = (0, 0, ())
    notes: list[str] = []
    for p in p_list:
        p = int(p)
        if not is_prime(p):
            raise DomainError(f"p_list must contain primes, got {p}")
        if p * p > 2**31 and family == "T":
            raise DomainError(f"family T supports p <= {MAX_P_T}")
        for d in d_list:
            d = int(d)
            Kp = p if K is None else int(K)
            if (2 * Kp + 1) ** d <= exhaustive_cap:
                kmat = _full_box(Kp, d)
                keep = ~np.all(kmat % p == 0, axis=1)
                kmat = kmat[keep]
            else:
                rng = np.random.default_rng([seed, _family_code(family), p, d])
                kmat = _sample_box(rng, Kp, d, sample, reject_mod=p)
            absw = _block_values_rows(family, p, kmat)
            if d == 1 and family in ("S", "U"):
                bound = 1.0
                note = f"d=1 {family}: degenerate 0 bound replaced by trivial bound 1"
                if note not in notes:
                    notes.append(note)
            elif family == "S":
                bound = (d - 1) / math.sqrt(p)
            else:
                bound = (d - 1) / p
            violations += int(np.count_nonzero(absw > bound + tol))
            ratios = absw / (bound if bound > 0 else 1.0)
            i = int(np.argmax(ratios))
            if ratios[i] > best_ratio:
                best_ratio = float(ratios[i])
                best_at = (p, d, tuple(int(v) for v in kmat[i]))
            cases += kmat.shape[0]
    return VerificationReport(
        family=family,
        mode="lemma",
        cases_checked=cases,
        violations=violations,
        max_ratio=best_ratio,
        argmax_scale=best_at[0],
        argmax_d=best_at[1],
        argmax_k=best_at[2],
        passed=violations == 0,
        notes=tuple(notes),
    )


def verify_corollary(
    family: str,
    M_list,
    d_list,
    mode: str = "corollary_cP",
    kmax: int = 10**6,
    sample: int = 1000,
    seed: int = 0,
    c_P: float = DEFAULT_C_P,
    tol: float = INEQ_SLACK,
) -> VerificationReport:
    """Check composite |W(k)| against a composite bound on sampled frequencies.

    ``mode`` selects the bound: "corollary_cP" uses the c_P form,
    "corollary_exact" the exact-band form.  Frequencies are drawn uniformly
    from [-kmax, kmax]^d \\ {0} with a seed-deterministic generator.
    """
    if family not in FAMILIES:
        raise DomainError(f"unknown family {family!r}; expected one of {FAMILIES}")
    if mode not in ("corollary_cP", "corollary_exact"):
        raise DomainError(f"unknown corollary mode {mode!r}")
    cases = 0
    violations = 0
    best_ratio = -1.0
    best_at = (0, 0, ())
    for M in M_list:
        M = int(M)
        primes = prime_band(M).primes
        for d in d_list:
            d = int(d)
            rng = np.random.default_rng([seed, _family_code(family), M, d])
            kmat = _sample_box(rng, int(kmax), d, sample)
            for row in kmat:
                value = abs(composite_weyl_value(family, primes, d, row))
                if mode == "corollary_cP":
                    bound = corollary_bound(family, M, d, row, c_P=c_P)
                else:
                    bound = corollary_bound_exact(family, M, d, row)
                if value > bound + tol:
                    violations += 1
                ratio = value / (bound if bound > 0 else 1.0)
                if ratio > best_ratio:
                    best_ratio = float(ratio)
                    best_at = (M, d, tuple(int(v) for v in row))
                cases += 1
    return VerificationReport(
        family=family,
        mode=mode,
        cases_checked=cases,
        violations=violations,
        max_ratio=best_ratio,
        argmax_scale=best_at[0],
        argmax_d=best_at[1],
        argmax_k=best_at[2],
        passed=violations == 0,
    )
