"""Group actions on vertex sets, equivariant families, spinning and symmetrization."""

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InputError, TruncationError
from .metric import domain_mask, label_function
from .words import conjugate, free_reduce, inverse, power, reduced_words, shortlex_key

__all__ = [
    "GroupAction",
    "EquivariantFamily",
    "SpinningReport",
    "permutation_action",
    "check_invariance",
    "check_equivariance",
    "check_spinning",
    "symmetrize",
]


@dataclass
class GroupAction:
    """Generators acting on vertex labels.

    ``generators`` maps each lowercase letter to a callable on labels and
    ``inverses`` maps it to the callable of the inverse letter.  ``vertices``
    is the finite truncation the checks enumerate over; the rules themselves
    may be defined beyond it.  ``normal_form`` is an optional quotient
    oracle: a function sending a word to a canonical word, the empty word
    exactly for the identity.  ``word_rule(word, v)``, when given, applies a
    whole word in one step and must agree with letter-by-letter application.
    """

    generators: dict
    inverses: dict
    vertices: list
    normal_form: object = None
    sort_key: object = None
    word_rule: object = None

    def __post_init__(self):
        self.vertices = list(self.vertices)
        self._vset = set(self.vertices)
        missing = set(self.generators) ^ set(self.inverses)
        if missing:
            raise InputError(f"generators without inverse: {sorted(missing)}")
        self._rules = dict(self.generators)
        for k, f in self.inverses.items():
            self._rules[k.upper()] = f

    @property
    def letters(self):
        return "".join(sorted(self.generators))

    def __contains__(self, v):
        return v in self._vset

    def act(self, word, v, strict=False):
        """Apply ``word`` to ``v`` (rightmost letter first).

        With ``strict`` every intermediate vertex must stay in the truncation.
        """
        if self.word_rule is not None and not strict:
            return self.word_rule(word, v)
        for ch in reversed(word):
            try:
                v = self._rules[ch](v)
            except KeyError:
                raise InputError(f"unknown letter {ch!r} or vertex {v!r}") from None
            if strict and v not in self._vset:
                raise TruncationError(f"word {word!r} leaves the truncation")
        return v

    def reduce(self, word):
        if self.normal_form is not None:
            return self.normal_form(word)
        return free_reduce(word)

    def is_trivial(self, word):
        """True/False when decidable, ``None`` when inconclusive.

        Decided by the quotient oracle if present, else by the action on the
        truncation (a moved vertex proves nontriviality; an identity
        permutation is conclusive only for finite actions closed under the
        generators).
        """
        if self.normal_form is not None:
            return self.normal_form(word) == ""
        for v in self.vertices:
            if self.act(word, v) != v:
                return False
        return True if self.closed() else None

    def closed(self):
        if not hasattr(self, "_closed"):
            self._closed = all(
                f(v) in self._vset for f in self._rules.values() for v in self.vertices
            )
        return self._closed

    def permutation(self, word):
        """Images of the truncation vertices whose image stays inside it."""
        out = {}
        for v in self.vertices:
            w = self.act(word, v)
            if w in self._vset:
                out[v] = w
        return out

    def key(self, v):
        return self.sort_key(v) if self.sort_key else v

    def element_key(self, word):
        """Canonical key of the element ``word`` represents.

        The normal form when an oracle is given; for a closed finite action
        the permutation it induces; otherwise the freely reduced word.
        """
        if self.normal_form is not None:
            return self.normal_form(word)
        if self.closed():
            return tuple(self.act(word, v) for v in self.vertices)
        return free_reduce(word)

    def restricted(self, vertices):
        """The same rules with a different truncation."""
        return GroupAction(self.generators, self.inverses, vertices, self.normal_form,
                           self.sort_key, self.word_rule)


def permutation_action(perms, normal_form=None):
    """Action of a finite group given by permutation lists on ``0..n-1``."""
    if not perms:
        raise InputError("no generators given")
    n = len(next(iter(perms.values())))
    gens, invs = {}, {}
    for name, p in perms.items():
        if len(name) != 1 or not name.islower():
            raise InputError(f"generator names must be single lowercase letters: {name!r}")
        p = list(p)
        if sorted(p) != list(range(n)):
            raise InputError(f"generator {name!r} is not a permutation of 0..{n - 1}")
        q = [0] * n
        for i, j in enumerate(p):
            q[j] = i
        gens[name] = p.__getitem__
        invs[name] = q.__getitem__
    return GroupAction(gens, invs, list(range(n)), normal_form)


@dataclass
class EquivariantFamily:
    """Subgroups ``R_v`` given by generator words.

    ``representatives`` assigns generator words to orbit representatives.
    Other vertices get conjugated generators: ``transporter(v)`` must return
    ``(rep, g)`` with ``g . rep == v``.  Without a transporter, one is found
    by breadth-first search through the action on the truncation.
    """

    representatives: dict
    transporter: object = None

    def _transport(self, v, action):
        if v in self.representatives:
            return v, ""
        if self.transporter is not None:
            return self.transporter(v)
        if not hasattr(self, "_bfs"):
            self._bfs = _orbit_transporters(action, list(self.representatives))
        try:
            return self._bfs[v]
        except KeyError:
            raise InputError(f"vertex {v!r} has no assigned R and no orbit representative") from None

    def generators(self, v, action):
        rep, g = self._transport(v, action)
        return [action.reduce(conjugate(g, x)) for x in self.representatives[rep]]


def _orbit_transporters(action, reps):
    out = {}
    queue = deque()
    for r in sorted(reps, key=action.key):
        if r not in out:
            out[r] = (r, "")
            queue.append(r)
    letters = sorted(action.letters + action.letters.upper(), key=shortlex_key)
    while queue:
        u = queue.popleft()
        rep, g = out[u]
        for ch in letters:
            w = action.act(ch, u)
            if w in action and w not in out:
                out[w] = (rep, free_reduce(ch + g))
                queue.append(w)
    return out


def _group_words(action, word_bound):
    return [w for w in reduced_words(action.letters, word_bound) if w]


def check_invariance(action, ds, word_bound):
    """Check ``d_{gy}(gx, gz) == d_y(x, z)`` on table entries, words up to ``word_bound``.

    Triples whose image leaves the labelled vertex set are skipped and counted.
    """
    labels = list(ds.labels)
    index = {v: i for i, v in enumerate(labels)}
    for v in labels:
        if v not in action:
            raise InputError(f"action is not defined on vertex {v!r}")
    n = ds.n
    per_size = lambda k: k * (k - 1) * (k - 1)
    violations = []
    checked = skipped = 0
    for g in _group_words(action, word_bound):
        img = np.array([index.get(action.act(g, v), -1) for v in labels], dtype=np.int64)
        keep = np.flatnonzero(img >= 0)
        moved = img[keep]
        before = ds.num[np.ix_(keep, keep, keep)]
        after = ds.num[np.ix_(moved, moved, moved)]
        bad = np.argwhere((before != after) & domain_mask(len(keep)))
        checked += per_size(len(keep))
        skipped += per_size(n) - per_size(len(keep))
        for y, x, z in bad[: 25 - len(violations)]:
            violations.append({"g": g, "triple": [labels[keep[y]], labels[keep[x]], labels[keep[z]]]})
    return {
        "ok": not violations,
        "word_bound": word_bound,
        "checked": checked,
        "skipped_outside_truncation": skipped,
        "violations": violations,
    }


def _same_subgroup_generators(action, gens_a, gens_b):
    closure = lambda gs: {action.reduce(x) for x in gs} | {action.reduce(inverse(x)) for x in gs}
    if action.normal_form is not None:
        return closure(gens_a) == closure(gens_b)
    perm = lambda gs: {tuple(sorted(action.permutation(x).items(), key=lambda kv: action.key(kv[0])))
                       for x in closure(gs)}
    return perm(gens_a) == perm(gens_b)


def check_equivariance(fam, action, word_bound):
    """Check ``g R_v g^-1 == R_{gv}`` for truncation vertices and words up to ``word_bound``."""
    failures = []
    checked = 0
    skipped = 0
    for v in action.vertices:
        gens = fam.generators(v, action)
        for g in [""] + _group_words(action, word_bound):
            gv = action.act(g, v)
            if gv not in action:
                skipped += 1
                continue
            checked += 1
            conj = [conjugate(g, x) for x in gens]
            if not _same_subgroup_generators(action, conj, fam.generators(gv, action)):
                if len(failures) < 25:
                    failures.append({"g": g, "v": v, "gv": gv})
    return {
        "ok": not failures,
        "word_bound": word_bound,
        "checked": checked,
        "skipped_outside_truncation": skipped,
        "failures": failures,
    }


@dataclass
class SpinningReport:
    L_required: Fraction
    L_measured: Fraction
    pass_: bool
    word_bound: int
    tested: int = 0
    skipped: int = 0
    tree_condition: bool = None
    witness: dict = None

    def to_dict(self):
        return {
            "L_required": self.L_required,
            "L_measured": self.L_measured,
            "pass": self.pass_,
            "word_bound": self.word_bound,
            "tested": self.tested,
            "skipped_inconclusive": self.skipped,
            "tree_condition": self.tree_condition,
            "witness": self.witness,
        }


def subgroup_elements(action, gens, word_bound):
    """Nontrivial elements of ``<gens>`` spelled with at most ``word_bound`` generators.

    Returns ``(elements, skipped)``; ``skipped`` counts words whose
    triviality could not be decided.
    """
    if not gens:
        return [], 0
    if len(gens) == 1:
        words = [power(gens[0], k) for k in range(1, word_bound + 1)]
        words += [power(gens[0], -k) for k in range(1, word_bound + 1)]
    else:
        names = "abcdefghijklmnopqrstuvwxyz"[: len(gens)]
        sub = {c: g for c, g in zip(names, gens)}
        words = []
        for w in reduced_words(names, word_bound):
            if w:
                words.append("".join(sub[c] if c.islower() else inverse(sub[c.lower()]) for c in w))
    seen = set()
    out = []
    skipped = 0
    for w in words:
        key = action.element_key(w)
        if key in seen:
            continue
        triv = action.is_trivial(w)
        if triv is None:
            skipped += 1
            continue
        seen.add(key)
        if not triv:
            out.append(action.reduce(w))
    return out, skipped


def check_spinning(fam, action, distance, L, word_bound, vertices=None, tree=None, witnesses=None):
    """Measure ``min d_v(w, h w)`` over nontrivial ``h`` in ``R_v`` and ``w != v``.

    ``distance`` is a ``DistanceSystem`` or a callable ``(v, x, z) -> d_v(x, z)``
    on labels (which may be defined beyond the truncation).  ``witnesses`` lists
    the points ``w`` to try (default: every vertex).  ``tree``, when given, is a neighbour
    function of the underlying tree and enables the check that nontrivial
    ``h`` moves every edge at ``v``.
    """
    L = Fraction(L)
    distance = label_function(distance)
    vertices = action.vertices if vertices is None else list(vertices)
    witnesses = action.vertices if witnesses is None else list(witnesses)
    best = None
    witness = None
    tested = 0
    skipped = 0
    tree_ok = None if tree is None else True
    for v in vertices:
        gens = fam.generators(v, action)
        elems, sk = subgroup_elements(action, gens, word_bound)
        skipped += sk
        for h in elems:
            if tree is not None:
                for u in tree(v):
                    if action.act(h, u) == u:
                        tree_ok = False
                        witness = witness or {"h": h, "v": v, "fixed_edge_to": u}
            for w in witnesses:
                if w == v:
                    continue
                tested += 1
                val = Fraction(distance(v, w, action.act(h, w)))
                if best is None or val < best:
                    best = val
                    if tree_ok is not False:
                        witness = {"h": h, "v": v, "w": w, "d": val}
    if best is None:
        best = L if L else Fraction(0)
        measured = None
    else:
        measured = best
    ok = (measured is None or measured >= L) and tree_ok is not False
    return SpinningReport(L, measured, ok, word_bound, tested, skipped, tree_ok, witness)


def symmetrize(fam, action, orbit_data):
    """Symmetrize generator sets over components in one stabilizer orbit.

    ``fam`` maps each component to its generator words.  Each entry of
    ``orbit_data`` is a pair ``(components, conjugators)`` with
    ``conjugators[0] == ""`` and ``conjugators[i] . components[0] ==
    components[i]``.  Component ``X_j`` receives every conjugate
    ``(g_j g_i^-1) F_{X_i} (g_j g_i^-1)^-1``.  Returns the new mapping and the
    number of generator words produced before deduplication.
    """
    out = {k: list(v) for k, v in fam.items()}
    produced = 0
    for comps, gs in orbit_data:
        if len(comps) != len(gs):
            raise InputError("components and conjugators differ in length")
        if action.reduce(gs[0]) != "":
            raise InputError("the first conjugator must be the identity")
        for X, g in zip(comps, gs):
            if action.act(g, comps[0]) != X:
                raise InputError(f"conjugator {g!r} does not map {comps[0]!r} to {X!r}")
        for j, Xj in enumerate(comps):
            new = []
            for i, Xi in enumerate(comps):
                c = gs[j] + inverse(gs[i])
                for f in fam.get(Xi, []):
                    new.append(action.reduce(conjugate(c, f)))
                    produced += 1
            merged = []
            for w in new:
                if w not in merged:
                    merged.append(w)
            out[Xj] = merged
    return out, produced
