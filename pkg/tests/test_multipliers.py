import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quasibasis.families import example_pair, family_member
from quasibasis.multipliers import (
    Classification,
    Direction,
    EdgeIndexError,
    LadderOperator,
    MetricOperator,
    MultiplierOperator,
    adjoint_pairing_residual,
    classify_increments,
    combination,
    diagnose,
    factorization_residual,
    find_adjoint_counterexample,
    formal_frame,
    intertwining_residual,
    member_matrix,
    metric_apply,
    metric_matrix,
    multiplier_apply,
    multiplier_matrix,
    psd_sqrt,
)
from quasibasis.seqspace import CoeffVector, ScalarSequence, distance, norm

COEFF_EXAMPLES = ["ex1", "ex2"]
ALL_EXAMPLES = ["ex1", "ex2", "ex3"]


def brute_multiplier(example, alpha, f, N, dim):
    """Dense-matrix oracle for H_xy f on coefficient examples."""
    xf, yf = example_pair(example)
    H = multiplier_matrix(xf, yf, alpha, N, dim)
    return H @ f.padded(dim).coefficients


@pytest.mark.parametrize("example", COEFF_EXAMPLES)
def test_multiplier_matches_matrix_oracle(example):
    rng = np.random.default_rng(3)
    alpha = ScalarSequence.from_spec("inv_n")
    f = CoeffVector(rng.normal(size=6) + 1j * rng.normal(size=6))
    xf, yf = example_pair(example)
    got = MultiplierOperator(xf, yf, alpha, 10)(f)
    expect = brute_multiplier(example, alpha, f, 10, 12)
    np.testing.assert_allclose(got.padded(12).coefficients, expect, atol=1e-12)


@pytest.mark.parametrize("example", ALL_EXAMPLES)
def test_eigenrelation(example):
    xf, yf = example_pair(example)
    alpha = ScalarSequence(lambda n: 2.0 + 1j / (n + 1), "a")
    H = MultiplierOperator(xf, yf, alpha, 12)
    for k in range(xf.base_index, 10):
        x = xf(k)
        a = alpha(k)
        assert norm(H(x) - a * x) <= 1e-12 * (1 + abs(a) * norm(x))


@pytest.mark.parametrize("example", COEFF_EXAMPLES)
def test_identity_collapse(example):
    xf, yf = example_pair(example)
    one = ScalarSequence.constant(1.0)
    for k in range(1, 8):
        assert distance(MultiplierOperator(xf, yf, one, 10)(xf(k)), xf(k)) < 1e-13
        assert distance(MultiplierOperator(yf, xf, one, 10)(yf(k)), yf(k)) < 1e-13


@pytest.mark.parametrize("example", COEFF_EXAMPLES)
@pytest.mark.parametrize("N", [3, 8, 20])
def test_metric_matrices_are_hermitian_psd(example, N):
    xf, yf = example_pair(example)
    for fam in (xf, yf):
        S = metric_matrix(fam, ScalarSequence.from_spec("inv_n2"), N, N + 1)
        np.testing.assert_allclose(S, S.conj().T, atol=1e-14)
        assert np.linalg.eigvalsh(S).min() >= -1e-10 * np.trace(S).real


def test_metric_maps_y_to_weighted_x():
    xf, yf = example_pair("ex1")
    beta = ScalarSequence.geometric(0.5)
    Sx = MetricOperator(xf, beta, 12)
    for n in range(1, 10):
        assert distance(Sx(yf(n)), beta(n) * xf(n)) < 1e-13


def test_metric_rejects_nonpositive_weights():
    xf, _ = example_pair("ex1")
    with pytest.raises(ValueError):
        MetricOperator(xf, ScalarSequence.from_spec("shifted"), 5)


def test_ladder_validation():
    xf, yf = example_pair("ex1")
    with pytest.raises(ValueError):
        LadderOperator(Direction.LOWER, xf, yf, ScalarSequence.from_spec("inv_n"), 5)
    with pytest.raises(ValueError):
        LadderOperator(Direction.LOWER, xf, yf, ScalarSequence.from_list([0, 2, 1, 3, 4, 5, 6]), 5)
    with pytest.raises(ValueError):
        LadderOperator(Direction.LOWER, xf, yf, ScalarSequence(lambda n: 1j * (n - 1), "c"), 5)


def test_ladder_shifts_members():
    xf, yf = example_pair("ex2")
    alpha = ScalarSequence.from_spec("shifted")
    A = LadderOperator(Direction.LOWER, xf, yf, alpha, 10)
    B = LadderOperator(Direction.RAISE, xf, yf, alpha, 10)
    assert norm(A(xf(1))) == 0
    assert distance(A(xf(4)), np.sqrt(3) * xf(3)) < 1e-13
    assert distance(B(xf(4)), np.sqrt(4) * xf(5)) < 1e-13


@pytest.mark.parametrize("example", ALL_EXAMPLES)
@pytest.mark.parametrize("mirror", [False, True])
def test_factorization(example, mirror):
    xf, _ = example_pair(example)
    b = xf.base_index
    alpha = ScalarSequence(lambda n: 0.5 * (n - b) + 0.1 * (n - b) ** 2, "lad")
    coeffs = {b: 1.0, b + 2: -0.5j, b + 5: 2.0}
    r, s = factorization_residual(example_pair(example), alpha, coeffs, 8, mirror=mirror)
    assert r <= 1e-10 * s


def test_factorization_edge_refusal():
    alpha = ScalarSequence.from_spec("shifted")
    with pytest.raises(EdgeIndexError):
        factorization_residual(example_pair("ex1"), alpha, {6: 1.0}, 6)


@pytest.mark.parametrize("example", ALL_EXAMPLES)
def test_intertwining(example):
    alpha = ScalarSequence(lambda n: np.cos(n) + 1 / (n + 1), "a")
    beta = ScalarSequence.geometric(0.6)
    b = example_pair(example)[0].base_index
    for n in (b, b + 3):
        (r1, s1), (r2, s2) = intertwining_residual(example_pair(example), alpha, beta, n, 8)
        assert r1 <= 1e-10 * s1 and r2 <= 1e-10 * s2
    with pytest.raises(EdgeIndexError):
        intertwining_residual(example_pair(example), alpha, beta, 8, 8)


@given(st.lists(st.floats(-3, 3), min_size=5, max_size=5), st.lists(st.complex_numbers(max_magnitude=3), min_size=3, max_size=3))
@settings(max_examples=30, deadline=None)
def test_adjoint_pairing_real_alpha(vals, coeffs):
    xf, yf = example_pair("ex1")
    alpha = ScalarSequence.from_list(vals)
    f = combination(yf, {1: coeffs[0], 3: coeffs[1]})
    h = combination(xf, {2: coeffs[2], 4: 1.0})
    r, s = adjoint_pairing_residual((xf, yf), alpha, f, h, 6)
    assert r <= 1e-10 * s


def test_complex_alpha_breaks_adjoint_pairing():
    alpha = ScalarSequence(lambda n: 1j / n ** 2, "i/n^2")
    found = find_adjoint_counterexample(example_pair("ex1"), alpha, 6)
    assert found is not None and found[2] > 1e-10
    assert find_adjoint_counterexample(example_pair("ex1"), ScalarSequence.from_spec("inv_n"), 6) is None


def test_tail_classification_rules():
    assert classify_increments((1.0, 1.0, 1.0), (0.1, 1e-12), 1e-9) is Classification.CONVERGED
    assert classify_increments((1.0, 2.0, 3.0), (1.0, 1.0), 1e-9) is Classification.GROWING
    assert classify_increments((1.0, 2.0, 2.5), (1.0, 0.5), 1e-9) is Classification.INCONCLUSIVE
    d = diagnose([CoeffVector([1]), CoeffVector([1, 1]), CoeffVector([1, 1, 1])], (1, 2, 3))
    assert d.increments == (1.0, 1.0) and d.classification is Classification.GROWING


def test_truncation_stability_when_converged():
    xf, yf = example_pair("ex3")
    f = family_member("ref_e_gauss", 0)
    op = MetricOperator(yf, ScalarSequence.constant(1.0), 20)
    v1, d1 = metric_apply(op, f, tol=1e-6)
    v2, d2 = metric_apply(MetricOperator(yf, ScalarSequence.constant(1.0), 40), f, tol=1e-6)
    if d1.classification is Classification.CONVERGED:
        assert distance(v1, v2) <= d1.tolerance * (1 + norm(v1))
    assert d2.classification is Classification.CONVERGED


def test_growing_series_is_data():
    xf, yf = example_pair("ex1")
    op = MultiplierOperator(yf, xf, ScalarSequence.from_spec("const:1"), 64)
    # <x_n, e_1> = 1 for every n, so sum y_n never settles
    _, d = multiplier_apply(op, CoeffVector.unit(1))
    assert d.classification is Classification.GROWING


def test_psd_sqrt():
    rng = np.random.default_rng(0)
    M = rng.normal(size=(5, 5))
    S = M @ M.T
    R = psd_sqrt(S)
    np.testing.assert_allclose(R @ R, S, atol=1e-10)
    with pytest.raises(np.linalg.LinAlgError):
        psd_sqrt(-S)


@pytest.mark.parametrize("example", COEFF_EXAMPLES)
def test_formal_frame(example):
    ff = formal_frame(example_pair(example), ScalarSequence.from_spec("inv_n2"), ScalarSequence.geometric(0.5), 12)
    assert ff.orthonormality_residual <= 1e-8
    assert ff.eigen_residual <= 1e-8
    assert ff.consistency_residual <= 1e-8


def test_formal_frame_brute_force_gram():
    # <e_hat_m, e_hat_n> = (beta_n / beta_m)**(1/2) delta_mn follows from S_x y_n = beta_n x_n
    beta = ScalarSequence.geometric(0.5)
    ff = formal_frame(example_pair("ex1"), ScalarSequence.from_spec("inv_n2"), beta, 8)
    X = member_matrix(example_pair("ex1")[0], 8, 8)
    Y = member_matrix(example_pair("ex1")[1], 8, 8)
    np.testing.assert_allclose(X.conj().T @ Y, np.eye(8), atol=1e-13)
    G = ff.e_hat.conj().T @ ff.e_hat
    np.testing.assert_allclose(np.diag(G)[:7], 1.0, atol=1e-10)


def test_formal_frame_rejects_gaussian_example():
    with pytest.raises(ValueError):
        formal_frame(example_pair("ex3"), ScalarSequence.from_spec("inv_n"), ScalarSequence.geometric(0.5), 5)


# --- listed examples -------------------------------------------------------------------


def test_listed_multiplier_examples():
    x1, y1 = example_pair("ex1")
    H = MultiplierOperator(x1, y1, ScalarSequence.from_spec("index"), 10)
    assert distance(H(x1(2)), 2 * x1(2)) < 1e-14
    x2, y2 = example_pair("ex2")
    Hyx = MultiplierOperator(y2, x2, ScalarSequence.from_spec("inv_n2"), 10)
    assert distance(Hyx(y2(3)), y2(3) * (1 / 9)) < 1e-14
    one = MultiplierOperator(x1, y1, ScalarSequence.constant(1.0), 10)
    assert distance(one(CoeffVector.unit(1)), CoeffVector.unit(1)) < 1e-14


def test_listed_metric_examples():
    x1, y1 = example_pair("ex1")
    beta = ScalarSequence.geometric(0.5)
    gamma = ScalarSequence(lambda n: 2.0 ** n, "2^n")
    assert distance(MetricOperator(x1, beta, 10)(y1(2)), 0.25 * x1(2)) < 1e-14
    back = MetricOperator(x1, beta, 10)(MetricOperator(y1, gamma, 10)(x1(3)))
    assert distance(back, x1(3)) < 1e-12
    x3, y3 = example_pair("ex3")
    out, diag = metric_apply(MetricOperator(y3, ScalarSequence.constant(1.0), 4), x3(0))
    assert distance(out, y3(0)) < 1e-14


def test_listed_ladder_examples():
    xf, yf = example_pair("ex1")
    alpha = ScalarSequence.from_spec("shifted")
    A = LadderOperator(Direction.LOWER, xf, yf, alpha, 10)
    B = LadderOperator(Direction.RAISE, xf, yf, alpha, 10)
    assert norm(A(xf(1))) == 0
    assert distance(A(xf(3)), np.sqrt(2) * xf(2)) < 1e-14
    assert distance(B(xf(2)), np.sqrt(2) * xf(3)) < 1e-14


def test_listed_factorization_examples():
    alpha = ScalarSequence.from_spec("shifted")
    pair = example_pair("ex1")
    assert factorization_residual(pair, alpha, {1: 1.0}, 6)[0] == 0
    r, _ = factorization_residual(pair, alpha, {2: 1.0, 5: 3.0}, 8)
    assert r <= 1e-12
    r, _ = factorization_residual(pair, alpha, {2: 1.0, 5: 3.0}, 8, mirror=True)
    assert r <= 1e-12


@pytest.mark.parametrize("example, n", [("ex1", 3), ("ex2", 4), ("ex1", 1)])
def test_listed_intertwining_examples(example, n):
    (r1, _), (r2, _) = intertwining_residual(example_pair(example), ScalarSequence.from_spec("inv_n2"),
                                            ScalarSequence.geometric(0.5), n, 8)
    assert r1 <= 1e-12 and r2 <= 1e-12


def test_listed_adjoint_examples():
    xf, yf = example_pair("ex1")
    alpha = ScalarSequence.from_spec("inv_n")
    assert adjoint_pairing_residual((xf, yf), alpha, yf(1), xf(1), 5)[0] == 0
    rng = np.random.default_rng(11)
    f = combination(yf, {int(k): complex(*rng.normal(size=2)) for k in rng.choice(np.arange(1, 9), 5, replace=False)})
    h = combination(xf, {int(k): complex(*rng.normal(size=2)) for k in rng.choice(np.arange(1, 9), 5, replace=False)})
    assert adjoint_pairing_residual((xf, yf), alpha, f, h, 9)[0] <= 1e-12
