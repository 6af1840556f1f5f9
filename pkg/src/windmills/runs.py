"""Assemble a pipeline run from a JSON description.

A run names either a built-in instance::

    {"instance": "z3z3", "radius": 6, "depth": 2, "word_bound": 10}
    {"instance": "f2_axes", "n": 2, "radius": 8, "depth": 2, "word_bound": 8, "max_words": 2000}

or explicit finite data::

    {"action": {"generators": {"a": [1, 2, 0]}, "oracle": {...}?},
     "family": {"representatives": {"0": ["a"]}},
     "complex": {"system": <distance system or path>, "K": "1/2"},
     "v0": 0, "depth": 2, "word_bound": 4}

Nested objects may be replaced by paths relative to the run file.
"""

from dataclasses import dataclass, field
from pathlib import Path

from .action import EquivariantFamily, permutation_action
from .errors import InputError
from .instances import CyclicFreeProduct, SupportedDistance, F2Axes, Z3Z3Tree, dihedral_quotient_trivial
from .io import load_distance_system, rational, read_json
from .metric import build_complex, label_function, measure_constants
from .words import free_reduce

__all__ = ["Run", "build_run"]


@dataclass
class Run:
    name: str
    action: object
    family: object
    graph: object
    distance: object
    constants: object
    v0: object
    depth: int = 2
    word_bound: int = 4
    max_words: int = None
    local: object = None
    oracle: object = None
    signature_vertices: list = None
    orbit_invariant: object = None
    quotient_size: int = None
    spin_vertices: list = None
    spin_witnesses: list = None
    tree_neighbors: object = None
    system: object = None
    settings: dict = field(default_factory=dict)


def _resolve(value, base):
    if isinstance(value, str) and value.endswith(".json"):
        return read_json(Path(base) / value)
    return value


def _instance_run(desc):
    name = desc["instance"]
    K = rational(desc.get("K", "1/2"))
    depth = int(desc.get("depth", 2))
    if name == "z3z3":
        inst = Z3Z3Tree()
        radius = int(desc.get("radius", 6))
        verts = inst.ball(radius)
        small = inst.ball(min(radius, 3))
        v0 = desc.get("v0", inst.root)
        oracle = lambda raw: raw != "" and inst.normal_form(raw) == raw
        sig = [v0, "<s>" if v0 == "<r>" else inst.neighbors(v0)[0]]
        extra = dict(orbit_invariant=lambda v: v[-2], quotient_size=2)
        spin = inst.ball(min(radius, 2))
        witnesses = inst.ball(min(radius, 4))
        word_bound = int(desc.get("word_bound", 10))
    elif name == "f2_axes":
        inst = F2Axes(int(desc.get("n", 2)))
        radius = int(desc.get("radius", 8))
        verts = inst.cayley_lines(radius)
        small = inst.cayley_lines(min(radius, 2))
        v0 = desc.get("v0", inst.root)
        oracle = lambda raw: free_reduce(raw) != "" and inst.in_kernel(raw)
        sig = [v0, inst.neighbors(v0)[1]]
        extra = {}
        spin = inst.cayley_lines(min(radius, 1))
        witnesses = inst.cayley_lines(min(radius, 3))
        word_bound = int(desc.get("word_bound", 8))
    else:
        raise InputError(f"unknown instance {name!r}")
    if v0 not in set(verts):
        raise InputError(f"v0 {v0!r} is outside the truncation")
    ds_small = inst.distance_system(small)
    g_small = build_complex(ds_small, K)
    constants = measure_constants(ds_small, g_small)

    def local(points):
        region = inst.region(points)
        ds = inst.distance_system(region)
        return ds, build_complex(ds, K)

    return Run(
        name=name,
        action=inst.action(verts),
        family=inst.family(),
        graph=inst.graph(verts),
        distance=SupportedDistance(inst.d, inst.support),
        constants=constants,
        v0=v0,
        depth=depth,
        word_bound=word_bound,
        max_words=desc.get("max_words"),
        local=local,
        oracle=oracle,
        signature_vertices=sig,
        spin_vertices=spin,
        spin_witnesses=witnesses,
        tree_neighbors=lambda v: inst.neighbors(v, kmax=1),
        system=ds_small,
        settings={"K": K, "radius": radius, "truncation_size": len(verts), "constants_region": len(small)},
        **extra,
    )


def _oracle(desc):
    if not desc:
        return None, None
    kind = desc.get("type")
    if kind == "free_product":
        fp = CyclicFreeProduct(desc.get("letters", "rs"), tuple(desc.get("orders", (3, 3))))
        return fp.normal_form, (lambda raw: raw != "" and fp.normal_form(raw) == raw)
    if kind == "dihedral_kernel":
        return None, (lambda raw: free_reduce(raw) != "" and dihedral_quotient_trivial(raw))
    raise InputError(f"unknown oracle type {kind!r}")


def _explicit_run(desc, base):
    act = _resolve(desc.get("action"), base)
    fam = _resolve(desc.get("family"), base)
    cpx = _resolve(desc.get("complex"), base)
    if not act or not fam or not cpx:
        raise InputError("a run needs 'action', 'family' and 'complex'")
    normal_form, oracle = _oracle(_resolve(act.get("oracle"), base))
    perms = act.get("generators")
    if not isinstance(perms, dict):
        raise InputError("'generators' must map letters to permutation lists")
    action = permutation_action(perms, normal_form)
    reps = {}
    for k, words in (fam.get("representatives") or {}).items():
        key = int(k) if isinstance(k, str) and k.lstrip("-").isdigit() else k
        if key not in action:
            raise InputError(f"family vertex {k!r} is not acted on")
        reps[key] = list(words)
    ds = load_distance_system(_resolve(cpx.get("system"), base))
    if ds.n != len(action.vertices):
        raise InputError(f"system has {ds.n} vertices but the action has {len(action.vertices)}")
    K = rational(cpx.get("K", "1/2"))
    g = build_complex(ds, K)
    v0 = desc.get("v0", 0)
    if v0 not in action:
        raise InputError(f"v0 {v0!r} is not a vertex")
    return Run(
        name="explicit",
        action=action,
        family=EquivariantFamily(reps),
        graph=g,
        distance=label_function(ds),
        constants=measure_constants(ds, g),
        v0=v0,
        depth=int(desc.get("depth", 2)),
        word_bound=int(desc.get("word_bound", 4)),
        max_words=desc.get("max_words"),
        oracle=oracle,
        system=ds,
        settings={"K": K, "truncation_size": ds.n},
    )


def build_run(desc, base="."):
    desc = read_json(desc)
    if "instance" in desc:
        return _instance_run(desc)
    return _explicit_run(desc, base)
