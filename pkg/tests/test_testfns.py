import io
import math
from itertools import product

import numpy as np
import pytest

from korobovqmc.errors import CapacityError, DomainError
from korobovqmc.pointsets import composite_point_set
from korobovqmc.testfns import (
    EXPERIMENT_CSV_HEADER,
    FourierPolynomial,
    WeierstrassProduct,
    convergence_experiment,
    evaluate,
    integrand_from_dict,
    integrand_to_dict,
    norm_fd,
    qmc_apply,
    random_fourier_polynomial,
    spectral_error,
    weierstrass_norm_bound,
    write_experiment_csv,
)
from oracles import brute_norm_fd


def cos_poly(freq=1, d=1):
    k = tuple([freq] + [0] * (d - 1))
    nk = tuple(-v for v in k)
    return FourierPolynomial(d, {k: 0.5 + 0j, nk: 0.5 + 0j})


def test_evaluate_cosine():
    f = cos_poly()
    assert evaluate(f, [0.0]) == pytest.approx(1.0, abs=1e-15)
    assert evaluate(f, [0.25]) == pytest.approx(0.0, abs=1e-15)
    assert evaluate(f, [0.5]) == pytest.approx(-1.0, abs=1e-15)


def test_weierstrass_value_at_zero():
    w = WeierstrassProduct(2.0, 2, 1, "product_of_omega")
    assert evaluate(w, [0.0]) == pytest.approx(1.25)
    w2 = WeierstrassProduct(2.0, 2, 2, "product_of_one_plus_omega")
    assert evaluate(w2, [0.0, 0.0]) == pytest.approx(2.25**2)


def test_symmetry_validation():
    with pytest.raises(DomainError):
        FourierPolynomial(1, {(1,): 1.0 + 0j})  # missing conjugate
    with pytest.raises(DomainError):
        FourierPolynomial(1, {(1,): 1j, (-1,): 1j})  # not conjugate
    with pytest.raises(DomainError):
        FourierPolynomial(1, {(0,): 1j})  # imaginary mean


def test_dimension_mismatch():
    f = cos_poly(d=2)
    with pytest.raises(DomainError):
        evaluate(f, [0.1])


def test_norm_examples():
    assert norm_fd(cos_poly(1)) == pytest.approx(1.0)
    assert norm_fd(cos_poly(3)) == pytest.approx(math.log(3))
    const = FourierPolynomial(1, {(0,): 1.0 + 0j})
    assert norm_fd(const) == pytest.approx(1.0)


def test_norm_matches_plain_sum(rng):
    f = random_fourier_polynomial(rng, 2, max_pairs=8, kmax=30)
    assert norm_fd(f) == pytest.approx(brute_norm_fd(f.terms), abs=1e-12)


def test_weierstrass_norm_1d():
    assert weierstrass_norm_bound(
        WeierstrassProduct(2.0, 1, 1, "product_of_omega")
    ) == pytest.approx(1.0)
    assert weierstrass_norm_bound(
        WeierstrassProduct(2.0, 2, 1, "product_of_omega")
    ) == pytest.approx(1.25)


def test_weierstrass_norm_2d_not_square_of_factor():
    w = WeierstrassProduct(1.5, 3, 2, "product_of_omega")
    norm2 = weierstrass_norm_bound(w)
    factor = weierstrass_norm_bound(WeierstrassProduct(1.5, 3, 1, "product_of_omega"))
    # cross terms use the max-coordinate weight, so the product norm is
    # strictly below the product of factor norms once weights exceed 1
    assert norm2 < factor**2


def test_weierstrass_expansion_against_brute(rng):
    beta, L, d = 1.5, 3, 2
    w = WeierstrassProduct(beta, L, d, "product_of_omega")
    poly = w.to_fourier_polynomial()
    # brute tensor expansion
    factor = []
    for level in range(L):
        c = 2.0 ** (-beta * level) / 2.0
        factor.append((2**level, c))
        factor.append((-(2**level), c))
    want = {}
    for combo in product(factor, repeat=d):
        k = tuple(f for f, _ in combo)
        coef = 1.0
        for _, c in combo:
            coef *= c
        want[k] = coef
    assert set(poly.terms) == set(want)
    for k, c in want.items():
        assert poly.terms[k] == pytest.approx(c)
    # pointwise agreement between product evaluation and expansion
    X = rng.random((20, d))
    assert np.allclose(w.evaluate_many(X), poly.evaluate_many(X), atol=1e-12)
    # and the norm agrees with the independent plain sum
    assert weierstrass_norm_bound(w) == pytest.approx(brute_norm_fd(want), abs=1e-12)


def test_weierstrass_norm_growth_in_L():
    beta, d = 1.5, 2
    norms = [
        weierstrass_norm_bound(WeierstrassProduct(beta, L, d, "product_of_omega"))
        for L in range(1, 9)
    ]
    factors = [
        weierstrass_norm_bound(WeierstrassProduct(beta, L, 1, "product_of_omega"))
        for L in range(1, 9)
    ]
    for i in range(len(norms) - 1):
        L = i + 1
        inc = norms[i + 1] - norms[i]
        assert inc > 0
        tau = 2.0 ** (-beta * L) * max(1.0, math.log(2.0**L))
        assert inc <= d * factors[i + 1] ** (d - 1) * tau + 1e-12


def test_weierstrass_capacity():
    with pytest.raises(CapacityError):
        WeierstrassProduct(1.0, 8, 8, "product_of_omega").to_fourier_polynomial()


def test_weierstrass_validation():
    with pytest.raises(DomainError):
        WeierstrassProduct(0.0, 2, 1, "product_of_omega")
    with pytest.raises(DomainError):
        WeierstrassProduct(1.0, 0, 1, "product_of_omega")
    with pytest.raises(DomainError):
        WeierstrassProduct(1.0, 2, 1, "product")


def test_qmc_constant_is_exact():
    cps = composite_point_set("S", 8, 2)
    const = FourierPolynomial(2, {(0, 0): 1.0 + 0j})
    assert qmc_apply(cps, const) == 1.0


def test_qmc_cosine_s31():
    cps = composite_point_set("S", 4, 1)  # single block p=3
    assert abs(qmc_apply(cps, cos_poly())) < 1e-15


def test_qmc_accepts_plain_callable():
    cps = composite_point_set("S", 4, 1)
    got = qmc_apply(cps, lambda x: 1.0)
    assert got == 1.0


def test_spectral_identity(rng):
    for family in ("S", "T", "U"):
        cps = composite_point_set(family, 8, 2)
        for _ in range(5):
            f = random_fourier_polynomial(rng, 2, max_pairs=6, kmax=40)
            err = abs(qmc_apply(cps, f) - f.exact_integral)
            assert abs(err - spectral_error(cps, f)) < 1e-10


def test_zero_mean_product_error_is_estimate_magnitude():
    w = WeierstrassProduct(1.5, 3, 2, "product_of_omega")
    cps = composite_point_set("T", 8, 2)
    assert w.exact_integral == 0.0
    assert abs(qmc_apply(cps, w) - 0.0) == abs(qmc_apply(cps, w))


def test_convergence_experiment_rows():
    w = WeierstrassProduct(1.5, 4, 2, "product_of_omega")
    rows = convergence_experiment("T", 2, [8, 16, 32], w)
    assert [r.M for r in rows] == [8, 16, 32]
    for r in rows:
        assert r.family == "T"
        assert r.ratio <= 1 + 1e-9
        assert r.ratio == pytest.approx(r.abs_error / r.bound)
    assert rows[-1].abs_error < rows[0].abs_error


def test_convergence_constant_integrand_zero_error():
    const = FourierPolynomial(2, {(0, 0): 1.0 + 0j})
    rows = convergence_experiment("S", 2, [8, 16], const)
    assert all(r.abs_error == 0.0 for r in rows)


def test_convergence_requires_ascending():
    w = WeierstrassProduct(1.5, 2, 2, "product_of_omega")
    with pytest.raises(DomainError):
        convergence_experiment("T", 2, [16, 8], w)


def test_experiment_csv_format():
    w = WeierstrassProduct(1.5, 2, 2, "product_of_omega")
    rows = convergence_experiment("T", 2, [8, 16], w)
    buf = io.StringIO()
    write_experiment_csv(rows, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == EXPERIMENT_CSV_HEADER == "family,M,d,N,abs_error,bound,norm,ratio"
    assert len(lines) == 3
    fields = lines[1].split(",")
    assert fields[0] == "T" and int(fields[1]) == 8
    assert float(fields[7]) == pytest.approx(float(fields[4]) / float(fields[5]))


def test_integrand_json_round_trip(rng):
    w = WeierstrassProduct(1.5, 8, 2, "product_of_omega")
    assert integrand_from_dict(integrand_to_dict(w)) == w
    f = random_fourier_polynomial(rng, 2, max_pairs=4, kmax=20)
    f2 = integrand_from_dict(integrand_to_dict(f))
    assert f2.terms == f.terms
    with pytest.raises(DomainError):
        integrand_from_dict({"type": "nope"})


def test_random_polynomial_support(rng):
    for _ in range(20):
        f = random_fourier_polynomial(rng, 3, max_pairs=9, kmax=50)
        assert len(f.terms) <= 2 * 9 + 1
        assert all(abs(v) <= 50 for k in f.terms for v in k)
