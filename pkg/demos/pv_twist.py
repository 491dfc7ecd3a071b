"""
Two solution rings for delta(y) = y/2
=====================================

"""

from fractions import Fraction

from sigchev import QQ, delta_constants, dmatrix, make_deltasigma_field, pv_construct
from sigchev import sigma_l_isomorphism_search

k = QQ.extend_algebraic("r2", [-2, 0, 1]).extend_transcendental("x")  # Q(sqrt 2)(x)
x = k.gen("x")
K = make_deltasigma_field(k, {"x": x}, {"x": 2 * x})  # delta = x d/dx, s(x) = 2x

plus = pv_construct(K, Fraction(1, 2), "+")  # s(y) = r2*y
minus = pv_construct(K, Fraction(1, 2), "-")  # s(y) = -r2*y
print(plus.presentation(), plus.to_json()["sigma_y"], minus.to_json()["sigma_y"])

D = dmatrix(plus, minus)
print(D.to_json())  # delta(D) = 0, s(D) = -D

print(sigma_l_isomorphism_search(plus, minus))  # isomorphic only for s^2
print(sigma_l_isomorphism_search(plus, plus))
print(delta_constants(plus, 4).to_json())  # no new constants
