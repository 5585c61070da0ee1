import math
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from quasibasis.families import (
    DomainError,
    FamilyKind,
    GaussOp,
    apply_gauss_operator,
    bareiss_det,
    example_pair,
    expansion_matrix,
    family,
    family_member,
    gauss_compose,
    h_vector,
)
from quasibasis.seqspace import GaussPolyVector, gauss_distance, inner, inner_coeff, norm


def test_ex1_members():
    assert list(family_member("ex1_x", 3, exact=True).coefficients) == [1, Fraction(1, 2), Fraction(1, 3)]
    assert family_member("ex1_y", 2).coefficients.tolist() == [0, 2, -3]


def test_ex2_members():
    assert family_member("ex2_x", 3).coefficients.tolist() == [1, -1, 1]
    assert family_member("ex2_x", 4).coefficients.tolist() == [-1, 1, -1, 1]
    assert family_member("ex2_y", 2).coefficients.tolist() == [0, 1, 1]


def test_dim_hint_pads():
    assert family_member("ex1_y", 1, dim_hint=6).dim == 6


@pytest.mark.parametrize("kind, n", [("ex1_x", 0), ("ex2_y", 0), ("ex3_x", -1)])
def test_index_below_base(kind, n):
    with pytest.raises(IndexError):
        family_member(kind, n)


@pytest.mark.parametrize("example", ["ex1", "ex2"])
def test_coefficient_biorthogonality_exact(example):
    xf, yf = example_pair(example, exact=True)
    for k in range(1, 26):
        for l in range(1, 26):
            assert inner_coeff(xf(k), yf(l)) == (1 if k == l else 0)


def test_ex3_members_against_sympy_hermite_functions():
    x = sympy.symbols("x")
    for n in (0, 3, 7):
        c = 1 / sympy.sqrt(2 ** n * sympy.factorial(n) * sympy.sqrt(sympy.pi))
        ref = sympy.lambdify(x, c * sympy.hermite(n, x) * sympy.exp(-x ** 2 / 4))
        f = family_member("ex3_x", n)
        for t in (-1.3, 0.2, 2.5):
            assert complex(f(t)).real == pytest.approx(float(ref(t)), rel=1e-12, abs=1e-15)


def test_ex3_biorthogonality_against_quad():
    for k in range(4):
        for l in range(4):
            xk, yl = family_member("ex3_x", k), family_member("ex3_y", l)
            val = integrate.quad(lambda t: (complex(xk(t)) * complex(yl(t))).real, -np.inf, np.inf)[0]
            assert val == pytest.approx(1.0 if k == l else 0.0, abs=1e-10)


def test_high_index_members_are_extended_precision():
    assert family_member("ex3_y", 16).is_mp
    assert not family_member("ex3_y", 15).is_mp
    assert abs(inner(family_member("ex3_x", 30), family_member("ex3_y", 30)) - 1) < 1e-12


def test_h_vector_is_last_x_member():
    h = h_vector(8, exact=True)
    assert h == family_member("ex1_x", 8, exact=True)
    with pytest.raises(ValueError):
        h_vector(0)


def test_family_members_range():
    assert len(family("ex3_x").members(5)) == 6
    assert len(family("ex1_x").members(5)) == 5


# --- expansion matrix --------------------------------------------------------------


square_int_matrices = st.integers(1, 6).flatmap(
    lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=n, max_size=n)
)


@given(square_int_matrices)
@settings(max_examples=80, deadline=None)
def test_bareiss_matches_sympy(rows):
    assert bareiss_det(rows) == int(sympy.Matrix(rows).det())


def test_bareiss_rejects_non_square():
    with pytest.raises(ValueError):
        bareiss_det([[1, 2]])


def test_expansion_matrix_columns_are_x_members():
    T = expansion_matrix(6)
    A = T.as_array()
    for n in range(1, 7):
        col = A[:n, n - 1]
        assert col.tolist() == family_member("ex2_x", n).coefficients.real.astype(int).tolist()
        assert not A[n:, n - 1].any()
    assert T.det == 1


@given(st.lists(st.integers(-20, 20), min_size=1, max_size=15))
@settings(max_examples=60, deadline=None)
def test_expansion_solve_round_trip(c):
    T = expansion_matrix(len(c))
    alpha = T.solve(c)
    assert T.apply(alpha) == c
    assert all(isinstance(a, Fraction) for a in alpha)


def test_expansion_solve_checks_length():
    with pytest.raises(ValueError):
        expansion_matrix(3).solve([1, 2])


# --- operators on Gaussian vectors ----------------------------------------------------


def test_T_maps_e_to_y():
    for n in range(5):
        e = family_member("ref_e_gauss", n)
        assert gauss_distance(apply_gauss_operator("T", e), family_member("ex3_y", n)) < 1e-15
        assert gauss_distance(apply_gauss_operator("Tinv", e), family_member("ex3_x", n)) < 1e-15


def test_Tinv_domain():
    f = family_member("ex3_x", 2)
    with pytest.raises(DomainError):
        apply_gauss_operator(GaussOp.T_MULT_INV, f)


def test_hosc_against_finite_differences():
    f = GaussPolyVector([0.3, -1, 0.5, 0.2], 0.5)
    hf = apply_gauss_operator("hosc", f)
    h = 1e-4
    for t in (-1.1, 0.0, 0.7, 2.0):
        d2 = (complex(f(t + h)) - 2 * complex(f(t)) + complex(f(t - h))) / h ** 2
        expect = 0.5 * (-d2 + t * t * complex(f(t)))
        assert complex(hf(t)) == pytest.approx(expect, abs=1e-6)


@pytest.mark.parametrize("n", [0, 1, 4, 9])
def test_H1_H2_eigenvectors(n):
    y, x = family_member("ex3_y", n), family_member("ex3_x", n)
    assert norm(apply_gauss_operator("H1", y) - (n + 0.5) * y) <= 1e-10 * norm(y)
    assert norm(apply_gauss_operator("H2", x) - (n + 0.5) * x) <= 1e-10 * norm(x)


def test_similarity_by_composition():
    f = family_member("ref_e_gauss", 3) + 0.5 * family_member("ref_e_gauss", 1)
    lhs = gauss_compose("T", "hosc", "Tinv")(f)
    assert gauss_distance(lhs, apply_gauss_operator("H1", f)) < 1e-12


def test_zero_vector_passes_through():
    z = GaussPolyVector([], 0.5)
    assert apply_gauss_operator("H1", z).is_zero()


def test_family_kind_properties():
    assert FamilyKind.EX3_X.gaussian and FamilyKind.EX3_X.base_index == 0
    assert not FamilyKind.EX2_Y.gaussian and FamilyKind.EX2_Y.base_index == 1


# --- listed invariants and small cases -------------------------------------------


def test_listed_members():
    y0 = family_member("ex3_y", 0)
    assert y0.rate == 0.75 and y0.poly[0] == pytest.approx(math.pi ** -0.25, rel=1e-15) and y0.degree == 0
    assert list(family_member("ex2_y", 2).coefficients) == [0, 1, 1]
    assert family_member("ex1_x", 5, exact=True).coefficients.tolist().count(0) == 0


def test_ex2_x_against_e_table():
    for n in range(1, 31):
        x = family_member("ex2_x", n, dim_hint=31).coefficients
        for k in range(1, 31):
            assert x[k - 1] == ((-1) ** (n + k) if n >= k else 0)


def test_norm_product_at_least_one():
    for n in range(0, 41):
        x, y = family_member("ex3_x", n), family_member("ex3_y", n)
        assert norm(x) * norm(y) >= 1 - 1e-12


def test_h_vector_small():
    assert h_vector(3, exact=True).norm2() == Fraction(49, 36)
    assert h_vector(1, exact=True) == family_member("ref_e_coeff", 1, exact=True)


@pytest.mark.parametrize("M", [1, 2, 8])
def test_expansion_det_small(M):
    T = expansion_matrix(M)
    assert T.det == 1 and all(T.entries[i][i] == 1 for i in range(M))
    if M == 1:
        assert T.entries == ((1,),)


def test_hosc_ground_state():
    e0 = family_member("ref_e_gauss", 0)
    assert norm(apply_gauss_operator("hosc", e0) - 0.5 * e0) < 1e-15


def test_Tinv_on_y0_gives_e0():
    out = apply_gauss_operator("Tinv", family_member("ex3_y", 0))
    assert out.rate == 0.5 and gauss_distance(out, family_member("ref_e_gauss", 0)) == 0.0
