"""
Prolonging difference kernels
=============================

"""

from sigchev import QQ, make_kernel, prolong, realize, sigma_field
from sigchev.kernels import _namer
from sigchev.polyring import PolyRing

K = sigma_field(QQ)  # Q with the identity
ring = PolyRing(QQ, _namer(("x",)))
x, sx = ring.var(0), ring.var(1)  # x and s1(x)

benign = make_kernel(K, ["x"], [[sx**2 - x]], 1)  # s(x)^2 = x
tower = realize(benign, 6)
print([k.tower_degrees()[0] for k in tower.kernels])  # 2, 4, 8, ...
print(tower.truncation_law())  # each ideal contracts to the previous one

# twisting s(x)^2 = 2 x^2 splits; the lex-least factor is kept
split = prolong(make_kernel(K, ["x"], [[sx**2 - 2 * x**2]], 1))
print(split.provenance[-1])
print(split.describe())
