"""Multiplier, metric and ladder operators built from a biorthogonal pair."""

import numpy as np

from quasibasis import LadderOperator, MetricOperator, MultiplierOperator, ScalarSequence, example_pair, formal_frame
from quasibasis.multipliers import Direction, factorization_residual, find_adjoint_counterexample, intertwining_residual
from quasibasis.seqspace import distance

xf, yf = example_pair("ex2")
alpha = ScalarSequence.from_spec("shifted")  # alpha_n = n - 1, vanishing at n = 1
N = 20

H = MultiplierOperator(xf, yf, alpha, N)
A = LadderOperator(Direction.LOWER, xf, yf, alpha, N)
B = LadderOperator(Direction.RAISE, xf, yf, alpha, N)
print("H x_4 = 3 x_4:", distance(H(xf(4)), 3 * xf(4)))
print("A x_4 = sqrt(3) x_3:", distance(A(xf(4)), np.sqrt(3) * xf(3)))
print("B A = H on x_2 - 0.5 x_6:", factorization_residual((xf, yf), alpha, {2: 1.0, 6: -0.5}, N)[0])

beta = ScalarSequence.geometric(0.5)
Sx = MetricOperator(xf, beta, N)
print("S_x y_3 = beta_3 x_3:", distance(Sx(yf(3)), 0.125 * xf(3)))
(r1, _), (r2, _) = intertwining_residual((xf, yf), ScalarSequence.from_spec("inv_n2"), beta, 5, N)
print("intertwining residuals at n = 5:", r1, r2)

# a complex alpha breaks the pairing <f, H_xy h> = <H_yx f, h>
found = find_adjoint_counterexample((xf, yf), ScalarSequence(lambda n: 1j / n ** 2, "i/n^2"), 8)
print("counterexample (f on y, h on x, residual):", found)

# formal orthonormal frame and the self-adjoint h_xy
ff = formal_frame((xf, yf), ScalarSequence.from_spec("inv_n2"), beta, 12)
print(f"e_hat orthonormality {ff.orthonormality_residual:.1e}, eigen {ff.eigen_residual:.1e}, "
      f"two constructions agree to {ff.consistency_residual:.1e}")
print("h_xy Hermitian to", np.abs(ff.h_xy - ff.h_xy.conj().T).max())
