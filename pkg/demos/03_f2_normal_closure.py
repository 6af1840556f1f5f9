"""The normal closure of a^2 and b^2 in the free group.

Vertices are the lines g<a> and g<b> in the Cayley tree, and projections
are measured along lines.  The family assigns <g a^2 g^-1> to the line
g<a>.  Each level of the windmill keeps finding new orbits, which is the
finite shadow of an infinitely generated free product.

The kernel of F2 -> Z/2 * Z/2 (both letters sent to involutions) serves as
an independent oracle: every certified word must land in it.
"""

from windmills.runs import build_run
from windmills.windmill import free_product_certificate

run = build_run({"instance": "f2_axes", "radius": 5, "word_bound": 6, "max_words": 400})
cert = free_product_certificate(
    run.action, run.family, run.graph, run.v0, 2, run.word_bound,
    constants=run.constants, local=run.local, oracle=run.oracle, max_words=run.max_words,
    signature_vertices=run.signature_vertices,
)
print("factors found (first five):")
for o in cert.O[:5]:
    print(f"  level {o['level']}: R at {o['vertex']:8s} generated by {o['generators'][0]}")
print("rank:", cert.rank, "|", cert.target)
print("kernel oracle agreed on", cert.summary["oracle_agree"], "of", cert.tested, "words")
