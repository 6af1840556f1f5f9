"""Exact numbers for two twists, homology congruences and a dihedral check."""

from fractions import Fraction

import numpy as np

from windmills import thurston as th

print("n   T_c T_d^-1               T_c T_d^-2")
for n in range(1, 6):
    l1 = th.stretch_factor(th.derivative("c d^-1", n))
    l2 = th.stretch_factor(th.derivative("c d^-2", n))
    print(f"{n}   {str(l1):24s} {l2}")

# The two stretch factors live in Q(sqrt(n^2+4)) and Q(sqrt(n^2+2)).
ns = np.arange(1, 10001, dtype=np.int64)
same = np.flatnonzero(th.squarefree_parts(ns * ns + 2) == th.squarefree_parts(ns * ns + 4))
print("n <= 10^4 with equal squarefree parts:", same.size)

rep = th.HomologyRep.standard(2)
cert = th.congruence_certificate(5, 7, rep, "a1", m_range=(2, 1000))
print("levels containing the fifth twist power:", [m for m, a, _ in cert["table"] if a])
print(cert["conclusion"])

for n in (1, 2, 3):
    (rot, refl), _ = th.dihedral_power_commutator(5, n)
    print(f"[r, h^{n}] in D_10: rotation by {rot}, reflection bit {refl}")
