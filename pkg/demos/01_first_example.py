"""First example: a complete biorthogonal pair that is not a basis.

x_n = sum_{k<=n} e_k / k and y_n = n e_n - (n+1) e_{n+1}.
"""

import math
from fractions import Fraction

from quasibasis import ScalarSequence, example_pair, h_vector
from quasibasis.seqspace import CoeffVector, inner_coeff
from quasibasis.verify import dense_definedness_probe, ex1_expansion_escape, quasi_basis_residual

xf, yf = example_pair("ex1", exact=True)
print("x_3 =", xf(3))
print("y_2 =", yf(2))

# biorthogonality, in exact rationals
print("<x_k, y_l> for k, l <= 4:")
for k in range(1, 5):
    print("  ", [inner_coeff(xf(k), yf(l)) for l in range(1, 5)])

# h = sum e_k / k is orthogonal to every y_n, so F_y is not complete
h = h_vector(12, exact=True)
print("<y_n, h_12> for n < 12:", {inner_coeff(yf(n), h) for n in range(1, 12)})
print("||h_12||^2 =", float(h.norm2()), " pi^2/6 =", math.pi ** 2 / 6)

# ...and h_N is always x_N, so no fixed coefficient sequence reaches h
rep = ex1_expansion_escape(25)
print("coefficients of h_25 on x_1..x_25 are nonzero only at", rep.values["alpha_nonzero"])

# on finite vectors the quasi-basis identity still holds
f = CoeffVector([Fraction(1), Fraction(-2), Fraction(1, 3)], exact=True)
g = CoeffVector([Fraction(5), Fraction(0), Fraction(0), Fraction(7)], exact=True)
print("quasi-basis residuals for finite f, g:", quasi_basis_residual(example_pair("ex1"), f.to_float(), g.to_float(), 5))

# H_yx is densely defined when {n alpha_n} is square summable
for spec in ("inv_n2", "inv_n"):
    rep = dense_definedness_probe("ex1", "Hyx", ScalarSequence.from_spec(spec), 2 ** 14)
    tail = rep.values["tail"]
    print(f"sum alpha_n y_n with alpha = {spec}: {tail['classification']}, "
          f"partial norms {[round(v, 6) for v in tail['norms']]}")
