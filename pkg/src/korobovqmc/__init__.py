"""Composite Korobov p-set QMC rules, exponential-sum bounds, and worst-case
integration error in the log-weighted space of absolutely convergent Fourier
series."""

from ._kernels import BACKEND
from .errors import CapacityError, DomainError
from .exposums import (
    VerificationReport,
    WeylSumResult,
    corollary_bound,
    corollary_bound_exact,
    inf_norm,
    lemma_bound,
    verify_corollary,
    verify_lemma,
    weyl_sum_block,
    weyl_sum_composite,
)
from .pointsets import (
    CompositePointSet,
    KorobovBlock,
    RationalPoint,
    composite_point_set,
    korobov_block,
    to_unit_cube,
    write_pointset,
)
from .primes import (
    DEFAULT_C_P,
    DensityCalibration,
    PrimeBand,
    calibrate_density,
    prime_band,
    sieve_primes,
)
from .testfns import (
    FourierPolynomial,
    WeierstrassProduct,
    convergence_experiment,
    evaluate,
    norm_fd,
    qmc_apply,
    spectral_error,
    weierstrass_norm_bound,
)
from .wce import (
    WceBounds,
    WceEstimate,
    info_complexity_bound,
    initial_error,
    wce_truncated,
    wce_upper,
    weight,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CapacityError",
    "CompositePointSet",
    "DEFAULT_C_P",
    "DensityCalibration",
    "DomainError",
    "FourierPolynomial",
    "KorobovBlock",
    "PrimeBand",
    "RationalPoint",
    "VerificationReport",
    "WceBounds",
    "WceEstimate",
    "WeierstrassProduct",
    "WeylSumResult",
    "calibrate_density",
    "composite_point_set",
    "convergence_experiment",
    "corollary_bound",
    "corollary_bound_exact",
    "evaluate",
    "inf_norm",
    "info_complexity_bound",
    "initial_error",
    "korobov_block",
    "lemma_bound",
    "norm_fd",
    "prime_band",
    "qmc_apply",
    "sieve_primes",
    "spectral_error",
    "to_unit_cube",
    "verify_corollary",
    "verify_lemma",
    "wce_truncated",
    "wce_upper",
    "weierstrass_norm_bound",
    "weight",
    "weyl_sum_block",
    "weyl_sum_composite",
    "write_pointset",
]
