"""A finite tree read as a projection complex.

On a tree, d_y(x, z) is 1 exactly when y sits on the geodesic from x to z.
Feeding that system back through the complex construction should return the
tree we started from, and every measured constant should be zero.
"""

import random
from fractions import Fraction

from windmills import build_complex, measure_constants, random_tree, tree_distance_system, verify_axioms

rng = random.Random(7)
tree = random_tree(12, rng)
print("tree edges:", sorted(tuple(sorted(e)) for e in tree.edges))

ds = tree_distance_system(tree)
axioms = verify_axioms(ds)
print("axioms hold:", axioms.ok, "| largest count of big projections:", axioms.finiteness_max)

# K = 1/2 keeps only pairs that no third vertex separates: the tree edges.
g = build_complex(ds, Fraction(1, 2))
print("complex equals the tree:", (g.adjacency == tree.adjacency).all())

# K = 1 is too generous: every pair becomes an edge.
print("K = 1 gives", len(build_complex(ds, 1).edges()), "edges on", tree.n, "vertices")

c = measure_constants(ds, g)
print(f"K_e = {c.K_e}, K_p = {c.K_p}, K_g = {c.K_g}, so L must be at least {c.L_threshold}")
