"""
Lifting a stable prime through a square root
============================================

"""

from sigchev import QQ, Inclusion, SigmaAlgebra, lift_search

K = QQ.extend_algebraic("r2", [-2, 0, 1])  # Q(sqrt 2)

# S = K[u, x]/(u - x^2) with s(u) = u, s(x) = -x; R = K[u] inside it
S = SigmaAlgebra(K, ["u", "x"], lambda u, x: [u, -x], lambda u, x: [u - x**2])
R = S.subalgebra(["u"])

report = lift_search(Inclusion(R, S), [R.var("u") - 2], 1, 4)
print(report.fiber_polynomial, report.factors)  # x^2 - 2 splits over K
print(len(report.lifts_at(1)), len(report.lifts_at(2)))  # 0 fixed by s, 2 fixed by s^2
print(report.permutation)  # s swaps the two lifts

# at u = 0 the fibre is a double point and the lift is s-stable
S0 = SigmaAlgebra(QQ, ["u", "x"], lambda u, x: [u, -x], lambda u, x: [u - x**2])
R0 = S0.subalgebra(["u"])
print(lift_search(Inclusion(R0, S0), [R0.var("u")], 1, 4).to_json()["lifts"])
