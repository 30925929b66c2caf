import math

import numpy as np
import pytest

from korobovqmc.errors import CapacityError, DomainError
from korobovqmc.exposums import weyl_sum_composite
from korobovqmc.pointsets import composite_count, composite_point_set
from korobovqmc.testfns import FourierPolynomial, qmc_apply
from korobovqmc.wce import (
    WCE_CSV_HEADER,
    half_space_frequencies,
    info_complexity_bound,
    initial_error,
    wce_csv_row,
    wce_truncated,
    wce_upper,
    weight,
)
from oracles import brute_wce_lower

FAMILIES = ("S", "T", "U")


def test_weight_examples():
    assert weight((1, 0)) == 1.0
    assert weight((2, -1)) == 1.0  # log 2 < 1
    assert weight((9,)) == pytest.approx(math.log(9))
    assert weight((0, 0)) == 1.0


def test_initial_error():
    assert initial_error() == 1.0


def test_exact_wce_t41():
    cps = composite_point_set("T", 4, 1)
    est = wce_truncated(cps, 20)
    assert est.lower == pytest.approx(1 / math.log(9), abs=1e-12)
    assert est.upper == est.lower
    assert est.argmax_k == (9,)
    assert est.certified_exact
    assert est.exhaustive


def test_wce_s20_empty_box():
    # smallest band prime is 11 > K, so every box sum vanishes
    cps = composite_point_set("S", 20, 1)
    est = wce_truncated(cps, 10)
    assert est.lower < 1e-14
    assert est.upper == pytest.approx(1 / math.log(10))
    assert not est.certified_exact


def test_wce_tail_cap_only():
    cps = composite_point_set("S", 20, 1)
    est = wce_truncated(cps, 3)
    assert est.lower < 1e-14
    assert est.upper == pytest.approx(1 / math.log(3))


def test_wce_rejects_small_K():
    cps = composite_point_set("S", 8, 1)
    with pytest.raises(DomainError):
        wce_truncated(cps, 2)


def test_wce_monotone_in_K():
    cps = composite_point_set("T", 4, 1)
    prev = None
    for K in (3, 9, 20, 40):
        est = wce_truncated(cps, K)
        if prev is not None:
            assert est.lower >= prev.lower - 1e-15
            assert est.upper <= max(prev.upper, est.lower) + 1e-15
        prev = est


def test_wce_matches_bruteforce_full_box():
    for family, M, d, K in (("U", 4, 2, 5), ("S", 8, 2, 6), ("T", 4, 2, 5)):
        cps = composite_point_set(family, M, d)
        est = wce_truncated(cps, K)
        want, want_k = brute_wce_lower(family, cps.primes, d, K)
        assert est.lower == pytest.approx(want, abs=1e-12)


def test_wce_argmax_in_half_space():
    cps = composite_point_set("U", 8, 2)
    est = wce_truncated(cps, 16)
    k = est.argmax_k
    first_nonzero = next(v for v in k if v != 0)
    assert first_nonzero > 0


def test_half_space_enumeration():
    hs = half_space_frequencies(2, 2)
    assert hs.shape == (((5**2) - 1) // 2, 2)
    as_tuples = [tuple(r) for r in hs.tolist()]
    assert as_tuples[0] == (0, 1)  # lexicographically smallest member
    assert as_tuples == sorted(as_tuples)
    assert all(next(v for v in k if v) > 0 for k in as_tuples)
    # exactly one of {k, -k} present
    full = set(as_tuples)
    assert all(tuple(-v for v in k) not in full for k in as_tuples)


def test_wce_sandwich_small():
    for family in FAMILIES:
        for M in (8, 16):
            for d in (1, 2):
                cps = composite_point_set(family, M, d)
                est = wce_truncated(cps, 16)
                b = wce_upper(family, M, d)
                assert est.lower <= min(1.0, b.bound_in_M) + 1e-9
                assert est.lower <= b.bound_in_N + 1e-9
                assert est.lower <= est.upper


def test_wce_certificate_means_equality():
    cps = composite_point_set("T", 4, 1)
    est = wce_truncated(cps, 20)
    assert est.lower >= 1 / math.log(20)
    assert est.upper == est.lower


def test_wce_budget_and_sampling():
    cps = composite_point_set("S", 8, 4)
    with pytest.raises(CapacityError):
        wce_truncated(cps, 64, budget=10_000)
    est = wce_truncated(cps, 64, budget=10_000, sample=500, seed=1)
    assert not est.exhaustive
    assert est.upper == 1.0
    again = wce_truncated(cps, 64, budget=10_000, sample=500, seed=1)
    assert est == again


def test_wce_upper_formulas():
    b = wce_upper("S", 16, 2, 0.2)
    assert b.bound_in_M == pytest.approx(20.0)
    n = composite_count("S", 16)
    assert b.n_points == n
    assert b.bound_in_N == pytest.approx(8 * 2 / (0.2 * n**0.25))
    assert b.vacuous
    bt = wce_upper("T", 64, 1, 0.2)
    nt = composite_count("T", 64)
    assert bt.bound_in_M == pytest.approx(8 / (0.2 * 64))
    assert bt.bound_in_N == pytest.approx(8 / (0.2 * nt ** (1 / 3)))
    with pytest.raises(DomainError):
        wce_upper("S", 1, 2)
    with pytest.raises(DomainError):
        wce_upper("S", 16, 2, c_P=1.0)


def test_single_frequency_attainment():
    # a unit-norm cosine at frequency k integrates with error |Re W|/weight;
    # the phase-optimized version attains |W|/weight
    cps = composite_point_set("T", 8, 2)
    k = (1, 2)
    w = weight(k)
    W = weyl_sum_composite(cps, k).value
    f_cos = FourierPolynomial(2, {k: 1 / (2 * w), (-1, -2): 1 / (2 * w)})
    err = abs(qmc_apply(cps, f_cos) - f_cos.exact_integral)
    assert err == pytest.approx(abs(W.real) / w, abs=1e-12)
    phase = complex(math.cos(-math.atan2(W.imag, W.real)), math.sin(-math.atan2(W.imag, W.real)))
    coef = phase / (2 * w)
    f_opt = FourierPolynomial(2, {k: coef, (-1, -2): coef.conjugate()})
    err_opt = abs(qmc_apply(cps, f_opt) - f_opt.exact_integral)
    assert err_opt == pytest.approx(abs(W) / w, abs=1e-9)
    # and the attained value is exactly what the scan reports at this k
    est = wce_truncated(cps, 16)
    assert est.lower >= err_opt - 1e-9


def test_wce_lower_is_ratio_at_argmax():
    # the reported lower must reproduce from the flat contract path
    for family, M, d in (("S", 8, 2), ("T", 8, 2), ("U", 8, 2)):
        cps = composite_point_set(family, M, d)
        est = wce_truncated(cps, 12)
        w = abs(weyl_sum_composite(cps, est.argmax_k).value)
        assert est.lower == pytest.approx(w / weight(est.argmax_k), abs=1e-12)


def test_error_norm_inequality(rng):
    # measured error <= upper bracket * space norm, for any integrand whose
    # support the box covers or the tail cap dominates
    from korobovqmc.testfns import norm_fd, random_fourier_polynomial

    for family in FAMILIES:
        cps = composite_point_set(family, 8, 2)
        est = wce_truncated(cps, 16)
        b = wce_upper(family, 8, 2)
        for _ in range(5):
            f = random_fourier_polynomial(rng, 2, max_pairs=6, kmax=40)
            err = abs(qmc_apply(cps, f) - f.exact_integral)
            assert err <= est.upper * norm_fd(f) + 1e-9
            assert err <= b.bound_in_N * norm_fd(f) + 1e-9


def test_info_complexity_values():
    assert info_complexity_bound(0.5, 2, 0.2) == 4_096_000
    assert info_complexity_bound(0.5, 1, 0.2) == 512_000
    with pytest.raises(DomainError):
        info_complexity_bound(0.0, 2)
    with pytest.raises(DomainError):
        info_complexity_bound(1.0, 2)
    with pytest.raises(DomainError):
        info_complexity_bound(0.5, 0)


def test_info_complexity_monotonicity():
    eps_grid = [0.1, 0.3, 0.5, 0.7, 0.9]
    d_grid = [1, 2, 3, 4, 5]
    table = {(e, d): info_complexity_bound(e, d, 0.2) for e in eps_grid for d in d_grid}
    for d in d_grid:
        vals = [table[(e, d)] for e in eps_grid]
        assert vals == sorted(vals, reverse=True)
    for e in eps_grid:
        vals = [table[(e, d)] for d in d_grid]
        assert vals == sorted(vals)


def test_wce_csv_row():
    bounds = wce_upper("T", 4, 1, 0.2)
    cps = composite_point_set("T", 4, 1)
    est = wce_truncated(cps, 20)
    row = wce_csv_row(bounds, est)
    fields = row.split(",")
    assert len(fields) == len(WCE_CSV_HEADER.split(","))
    assert fields[0] == "T"
    assert float(fields[5]) == pytest.approx(est.lower)
