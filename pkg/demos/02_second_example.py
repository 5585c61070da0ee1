"""Second example: F_x is a basis, F_y is not.

x_n = sum_{k<=n} (-1)**(n+k) e_k and y_n = e_n + e_{n+1}.
"""

import numpy as np

from quasibasis import ScalarSequence, expansion_matrix
from quasibasis.verify import dense_definedness_probe, ex2_e1_failure, ex2_expansion_solver

T = expansion_matrix(6)
print("T_6 =")
print(T.as_array())
print("det T_6 =", T.det)

# every finite vector has finite x-coordinates
alpha, res = ex2_expansion_solver([3, 0, -1, 2, 0, 5])
print("alpha =", [str(a) for a in alpha], " round-trip residual", res)

# e_1 has no y-expansion: the candidate partial sums stay at distance one
rep = ex2_e1_failure(200)
print("distance of sum_{n<=N} (-1)^(n+1) y_n from e_1 at N = 200:", rep.values["distance_at_N_max"])

# the norm identity behind the dense domain of H_yx
for p in (0.4, 0.6, 1.0):
    rep = dense_definedness_probe("ex2", "Hyx", ScalarSequence.power(p), 2 ** 14)
    v = rep.values
    print(f"alpha_n = n^-{p}: identity {v['formula_norm2']:.6f} direct {v['direct_norm2']:.6f} "
          f"bound {v['bound_3l2']:.3f}  series {v['tail']['classification']}")

# S_x needs beta_n sqrt(n) summable
for p in (1.0, 2.0):
    rep = dense_definedness_probe("ex2", "Sx", ScalarSequence.power(p), 2 ** 14)
    print(f"S_x with beta_n = n^-{p}: {rep.values['tail']['classification']} "
          f"(condition {rep.values['condition_flag']})")
