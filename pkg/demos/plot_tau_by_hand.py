"""
Computing one translate two ways
================================

A four-dimensional module over the graded Kronecker algebra, its minimal
resolution, and its translate, first through the Nakayama functor and then
through the intermediate modules Sigma^i.
"""
import os

from heartknit import Heart, label_string, parse_algebra, parse_module
from heartknit.cli import composition_diagram

here = os.path.dirname(os.path.abspath(__file__))
data = os.path.join(here, "..", "tests", "data")

# The algebra: vertices 1 and 2, alpha in degree 0, beta in degree -1.
A = parse_algebra(open(os.path.join(data, "kronecker.hk")).read())
H = Heart.of(A, 2)
M = H.member(parse_module(open(os.path.join(data, "M.hk")).read(), A), "M")
print(label_string(M))
print(composition_diagram(M))

# The 2-term tower: generator shifts record where the projectives sit.
P = M.tower(H.d).P
print("generators", P.gens)

# Nakayama route.
t = H.tau(M)
print("tau M =", label_string(t))

# Sigma route, with the intermediate modules kept.
trace = []
s = H.tau_sigma(M, trace)
for kind, i, m in trace:
    print(kind, i, m.graded_dims())
print("agree:", label_string(s) == label_string(t))

# The translate of a projective is zero, and flagged as such.
z = H.tau(H.projective("1"))
print(z.is_zero, z.flags)
