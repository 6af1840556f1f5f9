"""Recovering Z/3 * Z/3 from its action on the Bass-Serre tree.

The spinning family is the vertex stabilizers.  The windmill around <r>
picks one new orbit representative, <s>, and the certificate then checks
every alternating word up to the bound: each has a pivot that all
geodesics from the basepoint must pass through.
"""

from windmills.metric import spinning_threshold
from windmills.runs import build_run
from windmills.windmill import build_windmill, free_product_certificate

run = build_run({"instance": "z3z3", "radius": 5, "word_bound": 6})
print("truncation:", run.settings["truncation_size"], "vertices")
print("measured threshold L(P) =", spinning_threshold(run.constants))

wd = build_windmill(run.action, run.family, run.graph, run.v0, 2)
for lev in wd.levels:
    print(f"level {lev.index}: |W| = {len(lev.W):3d}  new orbit representatives {lev.O}")

cert = free_product_certificate(
    run.action, run.family, run.graph, run.v0, 2, run.word_bound,
    constants=run.constants, local=run.local, oracle=run.oracle, wd=wd,
    signature_vertices=run.signature_vertices,
)
s = cert.summary
print("target:", cert.target)
print("words tested:", cert.tested, "| all nontrivial:", cert.ok)
print("smallest pivot projection:", s["min_metric_value"], "| remember slack:", s["remember_min_slack"])
