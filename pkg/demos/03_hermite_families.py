"""Third example: deformed Hermite functions.

x_n = c_n H_n exp(-x^2/4), y_n = c_n H_n exp(-3x^2/4) against the oscillator
eigenfunctions e_n = c_n H_n exp(-x^2/2).  T multiplies by exp(-x^2/4), so
y_n = T e_n and x_n = T^-1 e_n.
"""

from quasibasis import DomainError, apply_gauss_operator, family_member
from quasibasis.seqspace import inner, norm
from quasibasis.verify import ex3_norm_suite, ex3_sy_is_t_squared

x, y, e = (lambda n, k=k: family_member(k, n) for k in ("ex3_x", "ex3_y", "ref_e_gauss"))

print("<x_3, y_3> =", inner(x(3), y(3)).real, " <x_3, y_5> =", abs(inner(x(3), y(5))))

# both deformed Hamiltonians share the oscillator spectrum n + 1/2
for n in (0, 4, 9):
    r1 = norm(apply_gauss_operator("H1", y(n)) - (n + 0.5) * y(n)) / norm(y(n))
    r2 = norm(apply_gauss_operator("H2", x(n)) - (n + 0.5) * x(n)) / norm(x(n))
    print(f"n = {n}: H1 y_n residual {r1:.1e}, H2 x_n residual {r2:.1e}")

# T^-1 is unbounded: it only applies while the Gaussian still decays
f = y(0)
for step in range(1, 4):
    try:
        f = apply_gauss_operator("Tinv", f)
        print(f"T^-{step} y_0 has rate {f.rate}")
    except DomainError as exc:
        print(f"step {step}: {exc}")

# ||x_n|| ||y_n|| grows like sqrt(3^n / n): F_x is not a Riesz basis
for n in (5, 20, 40):
    print(f"n = {n}: ||x_n|| ||y_n|| = {norm(x(n)) * norm(y(n)):.4g}")
for rep in ex3_norm_suite(n_max=61, ratio_n_max=40, growth_n=60, growth_tol=0.05):
    print(rep.check_id, rep.classification.value, {k: v for k, v in rep.values.items() if "constant" in k or "step" in k})

# S_y = T^2 on a test vector
main, _ = ex3_sy_is_t_squared(e(1) + 2 * e(4), 40)
print("|| S_y f - T^2 f || for f = e_1 + 2 e_4:", f"{main.residual:.1e}")
# T^2 e_0 = pi^-1/4 exp(-x^2), whose norm is 2^-1/4
t2 = apply_gauss_operator("T", apply_gauss_operator("T", e(0)))
print("T^2 e_0: rate", t2.rate, " norm", round(norm(t2), 12), " 2^-1/4 =", round(2 ** -0.25, 12))
