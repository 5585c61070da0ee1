import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from quasibasis.seqspace import (
    CoeffVector,
    GaussPolyVector,
    ScalarSequence,
    dps_for,
    dyadic_flag,
    gauss_distance,
    gauss_gram,
    inner,
    inner_coeff,
    inner_gauss,
    norm,
    seq_diagnostics,
)

complexes = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)
coeff_lists = st.lists(complexes, min_size=1, max_size=12)


def quad_inner(f, g):
    """Adaptive-quadrature oracle for <f, g> on the real line."""
    re = integrate.quad(lambda x: (np.conj(f(x)) * g(x)).real, -np.inf, np.inf, epsabs=1e-13, epsrel=1e-12)[0]
    im = integrate.quad(lambda x: (np.conj(f(x)) * g(x)).imag, -np.inf, np.inf, epsabs=1e-13, epsrel=1e-12)[0]
    return complex(re, im)


# --- coefficient vectors ------------------------------------------------------


def test_unit_and_padding():
    e3 = CoeffVector.unit(3)
    assert e3.dim == 3 and e3.coefficients[2] == 1
    assert (e3 + CoeffVector.unit(1)).coefficients.tolist() == [1, 0, 1]
    assert e3.padded(5).dim == 5
    with pytest.raises(ValueError):
        e3.padded(2)
    with pytest.raises(ValueError):
        CoeffVector.unit(0)


def test_coefficients_are_read_only():
    v = CoeffVector([1, 2])
    with pytest.raises(ValueError):
        v.coefficients[0] = 5


def test_exact_arithmetic_stays_rational():
    v = CoeffVector([Fraction(1, 3), Fraction(1, 6)], exact=True)
    w = v * Fraction(3) - CoeffVector([1], exact=True)
    assert w.exact
    assert list(w.coefficients) == [0, Fraction(1, 2)]
    assert v.norm2() == Fraction(5, 36)
    assert inner_coeff(v, v) == Fraction(5, 36)


def test_mixed_exact_float_falls_back_to_float():
    v = CoeffVector([Fraction(1, 2)], exact=True) + CoeffVector([0.5])
    assert not v.exact
    assert v.coefficients[0] == 1.0


@given(coeff_lists, coeff_lists)
@settings(max_examples=80, deadline=None)
def test_inner_conjugate_symmetric(a, b):
    u, v = CoeffVector(a), CoeffVector(b)
    assert inner(u, v) == pytest.approx(np.conj(inner(v, u)), abs=1e-9)


@given(coeff_lists, coeff_lists, complexes)
@settings(max_examples=80, deadline=None)
def test_inner_linear_in_second_slot(a, b, c):
    u, v = CoeffVector(a), CoeffVector(b)
    assert inner(u, c * v) == pytest.approx(c * inner(u, v), abs=1e-7)
    assert inner(c * u, v) == pytest.approx(np.conj(c) * inner(u, v), abs=1e-7)


@given(coeff_lists)
@settings(max_examples=50, deadline=None)
def test_norm_matches_numpy(a):
    assert CoeffVector(a).norm() == pytest.approx(np.linalg.norm(a), rel=1e-12, abs=1e-300)


# --- polynomial times Gaussian -------------------------------------------------


def test_rate_must_be_positive():
    with pytest.raises(ValueError):
        GaussPolyVector([1], 0.0)


def test_trailing_zeros_stripped_and_zero_vector():
    f = GaussPolyVector([1, 2, 0, 0], 0.5)
    assert f.degree == 1
    assert GaussPolyVector([0, 0], 0.5).is_zero()


def test_mixing_rates_is_rejected():
    with pytest.raises(ValueError):
        GaussPolyVector([1], 0.25) + GaussPolyVector([1], 0.75)


@pytest.mark.parametrize(
    "p, a, q, b",
    [([1], 0.5, [1], 0.5), ([0, 1, 2], 0.25, [3, 0, -1, 1j], 0.75), ([1, -2, 0, 0, 1], 0.5, [2, 1], 0.5)],
)
def test_inner_against_quad(p, a, q, b):
    f, g = GaussPolyVector(p, a), GaussPolyVector(q, b)
    assert inner_gauss(f, g) == pytest.approx(quad_inner(f, g), rel=1e-10, abs=1e-12)


def test_inner_exact_gaussian_moment():
    # <x^k e^{-x^2/2}, x^k e^{-x^2/2}> = Gamma(k + 1/2)
    for k in range(0, 12):
        f = GaussPolyVector([0] * k + [1], 0.5)
        assert inner_gauss(f, f).real == pytest.approx(math.gamma(k + 0.5), rel=1e-13)


def test_high_degree_uses_extended_precision():
    k = 40
    f = GaussPolyVector([0] * k + [1], 0.5)
    val = inner_gauss(f, f, dps=60)
    with mpmath.workdps(60):
        assert abs(val - mpmath.gamma(k + mpmath.mpf(1) / 2)) < mpmath.mpf(10) ** -40 * mpmath.gamma(k + 0.5)
    # float result routed through mpmath as well
    assert inner_gauss(f, f).real == pytest.approx(math.gamma(k + 0.5), rel=1e-13)


def test_gram_matches_pairwise():
    fs = [GaussPolyVector([1, k], 0.25) for k in range(4)]
    gs = [GaussPolyVector([0, 0, 1, k], 0.75) for k in range(3)]
    G = gauss_gram(fs, gs)
    for i, f in enumerate(fs):
        for j, g in enumerate(gs):
            assert G[i, j] == pytest.approx(inner_gauss(f, g), abs=1e-14)


def test_gram_rejects_mixed_combined_rates_and_low_order():
    with pytest.raises(ValueError):
        gauss_gram([GaussPolyVector([1], 0.25), GaussPolyVector([1], 0.5)], [GaussPolyVector([1], 0.5)])
    with pytest.raises(ValueError):
        gauss_gram([GaussPolyVector([0, 0, 0, 1], 0.5)], [GaussPolyVector([0, 0, 0, 1], 0.5)], order=2)


@given(st.lists(st.floats(-3, 3), min_size=1, max_size=6), st.sampled_from([0.25, 0.5, 0.75]),
       st.floats(-2, 2))
@settings(max_examples=40, deadline=None)
def test_derivative_against_finite_difference(p, rate, x):
    f = GaussPolyVector(p, rate)
    d = f.derivative()
    h = 1e-5
    fd = (f(x + h) - f(x - h)) / (2 * h)
    assert complex(d(x)) == pytest.approx(complex(fd), abs=1e-6 * (1 + sum(map(abs, p))))


def test_times_poly():
    f = GaussPolyVector([1, 1], 0.5).times_poly([0, 1])
    assert f.poly == (0, 1, 1)


def test_distance_across_rates_matches_quad():
    f, g = GaussPolyVector([1], 0.5), GaussPolyVector([1, 0, 0.1], 0.75)
    expect = math.sqrt(integrate.quad(lambda x: abs(f(x) - g(x)) ** 2, -np.inf, np.inf, epsabs=1e-14)[0])
    assert gauss_distance(f, g) == pytest.approx(expect, rel=1e-9)
    assert gauss_distance(f, f) == 0.0
    assert norm(f) == pytest.approx(math.pi ** 0.25, rel=1e-14)


def test_dps_for_grows_with_degree():
    assert dps_for(0) == 40
    assert dps_for(50) > dps_for(10)


# --- scalar sequences ------------------------------------------------------------


@pytest.mark.parametrize(
    "spec, n, value",
    [("inv_n", 4, 0.25), ("inv_n2", 2, 0.25), ("geom:0.5", 3, 0.125), ("const:2", 9, 2.0),
     ("power:1.5", 4, 0.125), ("osc", 2, 2.5), ("index", 3, 3.0), ("shifted", 1, 0.0), ("1,2,3", 2, 2.0)],
)
def test_sequence_presets(spec, n, value):
    s = ScalarSequence.from_spec(spec)
    assert float(np.real(s(n))) == pytest.approx(value)
    assert s.values(5)[n - 1].real == pytest.approx(value) if n <= 5 else True


def test_inline_list_is_zero_beyond_its_length():
    s = ScalarSequence.from_spec("1,2")
    assert s(3) == 0.0


@pytest.mark.parametrize("spec", ["bogus", "geom:", "geom:abc", "power:x", ""])
def test_bad_sequence_specs(spec):
    with pytest.raises(ValueError):
        ScalarSequence.from_spec(spec)


def test_dyadic_flag_cases():
    assert dyadic_flag(1.0, 1.5, 1.75) == "bounded"
    assert dyadic_flag(1.0, 2.0, 3.0) == "growing"
    assert dyadic_flag(1.0, 2.0, 2.93) == "inconclusive"
    assert dyadic_flag(1.0, 1.0, 1.0) == "bounded"


def test_seq_diagnostics_flags():
    rep = seq_diagnostics(ScalarSequence.from_spec("inv_n"), 4096)
    assert rep.flags["l1"] == "growing"
    assert rep.flags["l2"] == "bounded"
    assert rep.flags["weighted_l2"] == "growing"
    assert rep.l2 == pytest.approx(math.pi ** 2 / 6, abs=1e-3)
    rep2 = seq_diagnostics(ScalarSequence.from_spec("inv_n2"), 4096)
    assert rep2.flags["weighted_l2"] == "bounded"
    assert rep2.flags["sqrt_weighted_l1"] == "bounded"
    assert set(rep2.as_dict()) >= {"label", "N", "flags", "l1"}
    with pytest.raises(ValueError):
        seq_diagnostics(ScalarSequence.from_spec("inv_n"), 0)
