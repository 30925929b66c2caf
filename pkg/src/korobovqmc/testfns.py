"""Integrands with explicit Fourier data: finite Fourier polynomials and
truncated Weierstrass-type products, plus QMC application and convergence
experiments.

All integrands here carry their exact integral and their exact norm in the
log-weighted space, so measured integration errors can be compared against
worst-case bounds without any hidden truncation error: the truncation level
of a Weierstrass product is part of the integrand's definition and the
experiment integrates the truncated function exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from itertools import product as iter_product

import numpy as np

from .errors import CapacityError, DomainError
from .pointsets import CompositePointSet
from .primes import DEFAULT_C_P
from .wce import weight, wce_upper

EXPANSION_CAP = 10**7

EXPERIMENT_CSV_HEADER = "family,M,d,N,abs_error,bound,norm,ratio"


def _canonical(k: tuple[int, ...]) -> tuple[int, ...]:
    """Representative of the conjugate pair {k, -k}: first nonzero positive."""
    for v in k:
        if v > 0:
            return k
        if v < 0:
            return tuple(-x for x in k)
    return k  # k == 0


@dataclass(frozen=True)
class FourierPolynomial:
    """Finitely supported, conjugate-symmetric Fourier sum (real-valued).

    ``terms`` maps integer frequency tuples to complex coefficients and must
    satisfy coef(-k) == conj(coef(k)) so the function is real; the exact
    integral is the k = 0 coefficient.
    """

    d: int
    terms: dict[tuple[int, ...], complex]

    def __post_init__(self):
        zero = (0,) * self.d
        for k, c in self.terms.items():
            if len(k) != self.d:
                raise DomainError(f"term {k} has wrong dimension (d={self.d})")
            neg = tuple(-v for v in k)
            cneg = self.terms.get(neg)
            if cneg is None or abs(cneg - complex(c).conjugate()) > 1e-12:
                raise DomainError(
                    f"conjugate symmetry violated at k={k}: need coef(-k)=conj(coef(k))"
                )
        c0 = self.terms.get(zero, 0j)
        if abs(complex(c0).imag) > 1e-12:
            raise DomainError("mean coefficient must be real")

    @property
    def exact_integral(self) -> float:
        return complex(self.terms.get((0,) * self.d, 0j)).real

    def _pairs(self):
        """(canonical k, coefficient) with each conjugate pair listed once."""
        seen = set()
        out = []
        for k in self.terms:
            if all(v == 0 for v in k):
                continue
            kc = _canonical(k)
            if kc in seen:
                continue
            seen.add(kc)
            out.append((kc, complex(self.terms[kc])))
        return out

    def evaluate_many(self, X: np.ndarray) -> np.ndarray:
        """Real values at the rows of X, via grouped conjugate pairs."""
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.d:
            raise DomainError(f"points have dimension {X.shape[1]}, expected {self.d}")
        vals = np.full(X.shape[0], self.exact_integral)
        for k, c in self._pairs():
            theta = 2.0 * np.pi * (X @ np.asarray(k, dtype=np.float64))
            vals += 2.0 * (c.real * np.cos(theta) - c.imag * np.sin(theta))
        return vals


@dataclass(frozen=True)
class WeierstrassProduct:
    """Product over coordinates of the truncated lacunary cosine series

        w(x) = sum_{l=0}^{L-1} 2^(-beta*l) * cos(2*pi*2^l*x),

    either prod_j w(x_j) (zero mean) or prod_j (1 + w(x_j)) (mean one)."""

    beta: float
    L: int
    d: int
    form: str  # "product_of_omega" | "product_of_one_plus_omega"

    def __post_init__(self):
        if self.beta <= 0:
            raise DomainError(f"beta must be positive, got {self.beta}")
        if self.L < 1:
            raise DomainError(f"truncation level must be >= 1, got {self.L}")
        if self.d < 1:
            raise DomainError(f"dimension must be >= 1, got {self.d}")
        if self.form not in ("product_of_omega", "product_of_one_plus_omega"):
            raise DomainError(f"unknown form {self.form!r}")

    @property
    def exact_integral(self) -> float:
        return 0.0 if self.form == "product_of_omega" else 1.0

    def factor_values(self, x: np.ndarray) -> np.ndarray:
        vals = np.zeros_like(x, dtype=np.float64)
        for level in range(self.L):
            vals += 2.0 ** (-self.beta * level) * np.cos(
                2.0 * np.pi * (2.0**level) * x
            )
        return vals

    def evaluate_many(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.d:
            raise DomainError(f"points have dimension {X.shape[1]}, expected {self.d}")
        out = np.ones(X.shape[0])
        for j in range(self.d):
            w = self.factor_values(X[:, j])
            out *= w if self.form == "product_of_omega" else 1.0 + w
        return out

    def to_fourier_polynomial(self) -> FourierPolynomial:
        """Tensor-product expansion; raises on more than 1e7 terms."""
        one_plus = self.form == "product_of_one_plus_omega"
        factor: list[tuple[int, float]] = []
        if one_plus:
            factor.append((0, 1.0))
        for level in range(self.L):
            c = 2.0 ** (-self.beta * level) / 2.0
            factor.append((2**level, c))
            factor.append((-(2**level), c))
        if len(factor) ** self.d > EXPANSION_CAP:
            raise CapacityError(
                f"expansion would need {len(factor) ** self.d} terms "
                f"(cap {EXPANSION_CAP}); reduce L or d"
            )
        terms: dict[tuple[int, ...], complex] = {}
        for combo in iter_product(factor, repeat=self.d):
            k = tuple(f for f, _ in combo)
            coef = 1.0
            for _, c in combo:
                coef *= c
            terms[k] = complex(coef)
        return FourierPolynomial(d=self.d, terms=terms)


def evaluate(f, x) -> float:
    """Pointwise value of an integrand at one point of the unit cube."""
    x = np.asarray(x, dtype=np.float64).reshape(1, -1)
    return float(f.evaluate_many(x)[0])


def norm_fd(f: FourierPolynomial) -> float:
    """Space norm sum |coef(k)| * weight(k), summed largest-|coef| first."""
    items = sorted(f.terms.items(), key=lambda kv: (-abs(kv[1]), kv[0]))
    return math.fsum(abs(c) * weight(k) for k, c in items)


def weierstrass_norm_bound(w: WeierstrassProduct) -> float:
    """Exact space norm of the truncated product, by full expansion."""
    return norm_fd(w.to_fourier_polynomial())


def qmc_apply(cps: CompositePointSet, f) -> float:
    """Equal-weight rule: average of f over the composite multiset.

    Blocks are visited primes-ascending, points index-ascending, and the
    accumulation is compensated (exact per-block fsum, then fsum across
    blocks).
    """
    partials = []
    total = 0
    for block in cps.blocks:
        X = block.to_unit_cube_array()
        if hasattr(f, "evaluate_many"):
            vals = f.evaluate_many(X)
        else:
            vals = np.array([f(x) for x in X], dtype=np.float64)
        partials.append(math.fsum(vals))
        total += block.count
    return math.fsum(partials) / total


def spectral_error(cps: CompositePointSet, f: FourierPolynomial) -> float:
    """|sum over k != 0 of coef(k) * W(k)|, the rule's exact error on f."""
    from .exposums import composite_weyl_value

    acc_r: list[float] = []
    acc_i: list[float] = []
    for k, c in sorted(f.terms.items()):
        if all(v == 0 for v in k):
            continue
        w = composite_weyl_value(cps.family, cps.primes, cps.d, k)
        z = complex(c) * w
        acc_r.append(z.real)
        acc_i.append(z.imag)
    return abs(complex(math.fsum(acc_r), math.fsum(acc_i)))


@dataclass(frozen=True)
class ExperimentRow:
    family: str
    M: int
    d: int
    N: int
    abs_error: float
    bound: float
    norm: float
    ratio: float

    def to_csv(self) -> str:
        return (
            f"{self.family},{self.M},{self.d},{self.N},"
            f"{self.abs_error:.17g},{self.bound:.17g},"
            f"{self.norm:.17g},{self.ratio:.17g}"
        )


def convergence_experiment(
    family: str,
    d: int,
    M_list,
    f,
    exact_integral: float | None = None,
    norm: float | None = None,
    c_P: float = DEFAULT_C_P,
) -> list[ExperimentRow]:
    """Measured error vs. the point-count bound across an ascending M sweep.

    ``bound`` in each row is the N-form worst-case bound times the
    integrand's space norm, so ratio <= 1 is the bound check whenever the
    norm is exact.
    """
    M_list = [int(M) for M in M_list]
    if any(b <= a for a, b in zip(M_list, M_list[1:])):
        raise DomainError("M_list must be strictly ascending")
    if exact_integral is None:
        exact_integral = f.exact_integral
    if norm is None:
        if isinstance(f, WeierstrassProduct):
            norm = weierstrass_norm_bound(f)
        elif isinstance(f, FourierPolynomial):
            norm = norm_fd(f)
        else:
            raise DomainError("a norm must be supplied for black-box integrands")
    from .pointsets import composite_point_set

    rows = []
    for M in M_list:
        cps = composite_point_set(family, M, d)
        estimate = qmc_apply(cps, f)
        err = abs(estimate - exact_integral)
        bound = wce_upper(family, M, d, c_P).bound_in_N * norm
        rows.append(
            ExperimentRow(
                family=family,
                M=M,
                d=d,
                N=cps.total_count,
                abs_error=err,
                bound=bound,
                norm=norm,
                ratio=err / bound if bound > 0 else math.inf,
            )
        )
    return rows


def write_experiment_csv(rows, out) -> None:
    out.write(EXPERIMENT_CSV_HEADER + "\n")
    for row in rows:
        out.write(row.to_csv() + "\n")


# --------------------------------------------------------------------------
# integrand (de)serialization for the CLI
# --------------------------------------------------------------------------

def integrand_from_dict(spec: dict):
    kind = spec.get("type")
    if kind == "weierstrass":
        return WeierstrassProduct(
            beta=float(spec["beta"]),
            L=int(spec["L"]),
            d=int(spec["d"]),
            form=str(spec.get("form", "product_of_omega")),
        )
    if kind == "fourier_poly":
        terms: dict[tuple[int, ...], complex] = {}
        for item in spec["terms"]:
            k = tuple(int(v) for v in item["k"])
            terms[k] = complex(float(item.get("re", 0.0)), float(item.get("im", 0.0)))
        return FourierPolynomial(d=int(spec["d"]), terms=terms)
    raise DomainError(f"unknown integrand type {kind!r}")


def integrand_to_dict(f) -> dict:
    if isinstance(f, WeierstrassProduct):
        return {
            "type": "weierstrass",
            "d": f.d,
            "beta": f.beta,
            "L": f.L,
            "form": f.form,
        }
    if isinstance(f, FourierPolynomial):
        return {
            "type": "fourier_poly",
            "d": f.d,
            "terms": [
                {"k": list(k), "re": complex(c).real, "im": complex(c).imag}
                for k, c in sorted(f.terms.items())
            ],
        }
    raise DomainError(f"cannot serialize integrand of type {type(f)!r}")


def load_integrand(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return integrand_from_dict(json.load(fh))


def random_fourier_polynomial(
    rng: np.random.Generator,
    d: int,
    max_pairs: int = 9,
    kmax: int = 50,
    include_mean: bool = True,
) -> FourierPolynomial:
    """Random conjugate-symmetric polynomial with at most 2*max_pairs + 1
    terms, for spectral-identity experiments."""
    n_pairs = int(rng.integers(1, max_pairs + 1))
    terms: dict[tuple[int, ...], complex] = {}
    if include_mean:
        terms[(0,) * d] = complex(rng.normal())
    while sum(1 for k in terms if any(k)) < 2 * n_pairs:
        k = tuple(int(v) for v in rng.integers(-kmax, kmax + 1, size=d))
        if not any(k) or k in terms:
            continue
        c = complex(rng.normal(), rng.normal())
        terms[k] = c
        terms[tuple(-v for v in k)] = c.conjugate()
    return FourierPolynomial(d=d, terms=terms)
