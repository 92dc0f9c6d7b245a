"""Rotation surfaces as subsets of the bicomplex numbers."""

import math

import numpy as np

from rotsurf4 import Bicomplex, bc_inverse, bc_mul, group_axiom_check, lie_subgroup_verdict, to_matrix
from rotsurf4.bicomplex import format_bicomplex, hyperquadric_residual
from rotsurf4.errors import InversionError
from rotsurf4.profiles import circle, vranceanu
from rotsurf4.surface import surface_map

x, y = Bicomplex(1, 1, 0, 0), Bicomplex(1, 0, 1, 0)
print(f"({format_bicomplex(x)}) x ({format_bicomplex(y)}) = {format_bicomplex(bc_mul(x, y))}")
print("matrix image of 1+2i+3j+4ij:")
print(to_matrix(Bicomplex(1, 2, 3, 4)))

try:
    bc_inverse(Bicomplex(1, 0, 0, 1))
except InversionError as exc:
    print("\n1+ij:", exc)

s = np.linspace(-2, 2, 9)
t = np.linspace(-math.pi, math.pi, 7)
print("\ngroup axioms on a 9x7 grid (all pairs):")
for name, prof in [("clifford torus", circle(1.0)), ("circle lambda=2", circle(2.0)),
                   ("circle lambda=-1", circle(-1.0)), ("vranceanu k=0.3", vranceanu(0.3))]:
    X = surface_map(prof)
    rep = group_axiom_check(X, s, t)
    S, T = np.meshgrid(s, t)
    hq = np.max(np.abs(hyperquadric_residual(X(S, T))))
    print(f"  {name:17s} closure {rep.closure_residual:8.1e}  inverse {rep.inverse_residual:8.1e}  "
          f"identity {rep.identity_residual:8.1e}  pass={str(rep.passed):5s}  x1x4-x2x3 {hq:.0e}")

print("\npolar rule u(s1+s2) = u(s1) u(s2), theta linear:")
for name, u, th in [("u=1", lambda s: 1.0 + 0 * np.asarray(s), lambda s: np.asarray(s, float)),
                    ("u=2", lambda s: 2.0 + 0 * np.asarray(s), lambda s: np.asarray(s, float)),
                    ("u=e^(0.3s)", lambda s: np.exp(0.3 * np.asarray(s)), lambda s: np.asarray(s, float))]:
    v = lie_subgroup_verdict(u, th)
    print(f"  {name:10s} subgroup={str(v.subgroup):5s} agrees with axiom check={v.agree}  ({v.rule})")
