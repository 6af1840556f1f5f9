"""Exact models built on the Bass-Serre tree of a free product of two cyclic groups.

Group elements are words in two letters (say ``r`` and ``s``); the factor
orders are finite (``>= 2``) or ``0`` for infinite cyclic.  Vertices of the
tree are left cosets ``g<t>`` of the factor subgroups, labelled by strings
``"rep<t>"`` where ``rep`` is the normal form of ``g`` with any trailing
``t``-syllable removed.  Two cosets are adjacent when they share an element.

Two instances use this model:

* ``Z3Z3Tree``: ``Z/3 * Z/3`` on its tree with the indicator distance system
  and the vertex-stabilizer family.
* ``F2Axes``: the free group on ``a, b``.  Each vertex ``g<a>`` is read as
  the line ``{g a^k}`` in the Cayley tree, and ``d_y(x, z)`` is the distance
  between the nearest-point projections of lines ``x`` and ``z`` to line ``y``.
  The family is ``R_{g<t>} = <g t^n g^-1>``.
"""

from collections import deque
from fractions import Fraction

import numpy as np

from .action import EquivariantFamily, GroupAction
from .errors import InputError, ParameterError
from .metric import DistanceSystem, LabelGraph, domain_mask
from .trees import Tree, tree_distance_system
from .words import inverse, power, reduced_words, shortlex_key

__all__ = ["CyclicFreeProduct", "Z3Z3Tree", "F2Axes", "dihedral_quotient_trivial"]


def _runs(word):
    """Split a word into maximal runs of one letter (case-insensitive)."""
    out = []
    for ch in word:
        if out and out[-1][0].lower() == ch.lower():
            out[-1] += ch
        else:
            out.append(ch)
    return out


class CyclicFreeProduct:
    def __init__(self, letters="rs", orders=(3, 3)):
        if len(letters) != 2 or len(set(letters.lower())) != 2:
            raise ParameterError("need two distinct letters")
        for p in orders:
            if p == 1 or p < 0:
                raise ParameterError(f"factor order must be 0 or at least 2, got {p}")
        self.letters = letters.lower()
        self.orders = dict(zip(self.letters, orders))
        self.root = f"<{self.letters[0]}>"

    # -- group -------------------------------------------------------------
    def _norm(self, t, e):
        p = self.orders[t]
        if not p:
            return e
        k = e % p
        return k - p if k > p // 2 else k

    def normal_form(self, word):
        stack = []
        for ch in word:
            t = ch.lower()
            if t not in self.orders:
                raise InputError(f"letter {ch!r} is not a generator")
            e = 1 if ch.islower() else -1
            if stack and stack[-1][0] == t:
                k = self._norm(t, stack[-1][1] + e)
                if k:
                    stack[-1][1] = k
                else:
                    stack.pop()
            else:
                stack.append([t, self._norm(t, e)])
        return "".join(power(t, k) for t, k in stack)

    def is_identity(self, word):
        return self.normal_form(word) == ""

    @staticmethod
    def _strip(t, word):
        i = len(word)
        while i and word[i - 1].lower() == t:
            i -= 1
        return word[:i]

    # -- vertices ----------------------------------------------------------
    @staticmethod
    def parse(v):
        if len(v) < 3 or v[-3] != "<" or v[-1] != ">":
            raise InputError(f"malformed vertex label {v!r}")
        return v[:-3], v[-2]

    def vertex(self, g, t):
        return f"{self._strip(t, self.normal_form(g))}<{t}>"

    def other(self, t):
        return self.letters[1] if t == self.letters[0] else self.letters[0]

    def act(self, word, v):
        rep, t = self.parse(v)
        return self.vertex(word + rep, t)

    @staticmethod
    def sort_key(v):
        rep, t = v[:-3], v[-2]
        return shortlex_key(rep) + (t,)

    def neighbors(self, v, kmax=1):
        """Tree neighbours; ``kmax`` bounds the exponent range for an infinite factor."""
        rep, t = self.parse(v)
        u = self.other(t)
        p = self.orders[t]
        ks = range(-((p - 1) // 2), p // 2 + 1) if p else range(-kmax, kmax + 1)
        out = []
        for k in ks:
            if k == 0:
                out.append(f"{self._strip(u, rep)}<{u}>")
            else:
                out.append(f"{rep}{power(t, k)}<{u}>")
        return out

    def parent(self, v):
        rep, t = self.parse(v)
        if not rep:
            return None if v == self.root else self.root
        u = rep[-1].lower()
        return f"{self._strip(u, rep)}<{u}>"

    def ancestors(self, v):
        out = [v]
        while True:
            p = self.parent(out[-1])
            if p is None:
                return out
            out.append(p)

    def path(self, u, v):
        up, vp = self.ancestors(u), self.ancestors(v)
        common = set(vp)
        i = next(i for i, x in enumerate(up) if x in common)
        j = vp.index(up[i])
        return up[: i + 1] + vp[:j][::-1]

    def distance(self, u, v):
        return len(self.path(u, v)) - 1

    def hull(self, points):
        points = list(points)
        seen = {}
        for p in points:
            for x in self.path(points[0], p):
                seen[x] = None
        return list(seen)

    def region(self, points, pad=1):
        """Convex hull of ``points`` plus its neighbours (exponent range 1)."""
        seen = dict.fromkeys(self.hull(points))
        if pad:
            for x in list(seen):
                for y in self.neighbors(x, kmax=1):
                    seen.setdefault(y)
        return sorted(seen, key=self.sort_key)

    def ball(self, radius, center=None, kmax=None):
        center = center or self.root
        kmax = radius if kmax is None else kmax
        dist = {center: 0}
        queue = deque([center])
        while queue:
            x = queue.popleft()
            if dist[x] == radius:
                continue
            for y in self.neighbors(x, kmax):
                if y not in dist:
                    dist[y] = dist[x] + 1
                    queue.append(y)
        return sorted(dist, key=self.sort_key)

    def tree(self, labels):
        labels = list(labels)
        inside = set(labels)
        edges = [(v, self.parent(v)) for v in labels if self.parent(v) in inside]
        return Tree(labels, edges)

    def graph(self, vertices):
        """The tree restricted to ``vertices`` as a label graph."""
        vertices = list(vertices)
        kmax = max((len(self.parse(v)[0]) for v in vertices), default=0) + 1
        return LabelGraph(vertices, lambda v: self.neighbors(v, kmax))

    def action(self, vertices):
        gens = {x: (lambda v, x=x: self.act(x, v)) for x in self.letters}
        invs = {x: (lambda v, x=x: self.act(x.upper(), v)) for x in self.letters}
        return GroupAction(gens, invs, vertices, self.normal_form, self.sort_key, self.act)


class SupportedDistance:
    """Label distance ``(y, x, z) -> d_y(x, z)`` that also reports its support."""

    def __init__(self, d, support):
        self.d = d
        self.support = support

    def __call__(self, y, x, z):
        return self.d(y, x, z)


class Z3Z3Tree(CyclicFreeProduct):
    """``Z/3 * Z/3 = <r> * <s>`` acting on its Bass-Serre tree."""

    def __init__(self):
        super().__init__("rs", (3, 3))

    def distance_system(self, labels):
        return tree_distance_system(self.tree(labels))

    def d(self, y, x, z):
        return int(self.distance(x, y) + self.distance(y, z) == self.distance(x, z))

    def support(self, x, z):
        """Vertices ``y`` with ``d(y, x, z)`` possibly nonzero: the geodesic from x to z."""
        return self.path(x, z)

    def family(self):
        """Vertex stabilizers: ``R_{g<t>} = <g t g^-1>``."""
        return EquivariantFamily(
            {"<r>": ["r"], "<s>": ["s"]},
            transporter=lambda v: (f"<{v[-2]}>", self.parse(v)[0]),
        )


class F2Axes(CyclicFreeProduct):
    """Free group ``<a> * <b>`` with the line-projection distance system."""

    def __init__(self, n=2):
        if n < 1:
            raise ParameterError("power n must be positive")
        super().__init__("ab", (0, 0))
        self.n = n

    def position(self, y, x):
        """Signed coordinate of the projection of line ``x`` onto line ``y``.

        Reps are reduced words, so ``rep_y^-1 rep_x`` reduces by cancelling
        the common prefix.  Unless ``rep_y`` is a prefix of ``rep_x`` the
        result starts with a letter of the other type (``rep_y`` never ends
        in its own letter) and the projection is the point ``rep_y`` itself.
        """
        ry, t = self.parse(y)
        rx, _ = self.parse(x)
        if not rx.startswith(ry):
            return 0
        rest = rx[len(ry):]
        if not rest or rest[0].lower() != t:
            return 0
        run = _runs(rest)[0]
        return len(run) if run[0] == t else -len(run)

    def d(self, y, x, z):
        return abs(self.position(y, x) - self.position(y, z))

    def support(self, x, z):
        """Lines ``y`` with ``d(y, x, z)`` possibly nonzero.

        ``position(y, x)`` vanishes unless ``rep_y`` is a prefix of ``rep_x``,
        so only lines based at prefixes of either representative can see a
        difference.
        """
        out = {}
        for v in (x, z):
            rep, _ = self.parse(v)
            for k in range(len(rep) + 1):
                p = rep[:k]
                for t in self.letters:
                    if not p or p[-1].lower() != t:
                        out.setdefault(f"{p}<{t}>")
        return list(out)

    def distance_system(self, labels):
        labels = list(labels)
        n = len(labels)
        P = np.zeros((n, n), dtype=np.int64)
        for i, y in enumerate(labels):
            for j, x in enumerate(labels):
                if i != j:
                    P[i, j] = self.position(y, x)
        num = np.abs(P[:, :, None] - P[:, None, :])
        num[~domain_mask(n)] = 0
        return DistanceSystem(num, 1, Fraction(0), labels)

    def cayley_lines(self, radius):
        """Lines meeting the Cayley ball of the given radius around the identity."""
        out = []
        for w in reduced_words(self.letters, radius):
            for t in self.letters:
                if not w or w[-1].lower() != t:
                    out.append(f"{w}<{t}>")
        return sorted(out, key=self.sort_key)

    def family(self):
        """``R_{g<t>} = <g t^n g^-1>``."""
        return EquivariantFamily(
            {"<a>": [power("a", self.n)], "<b>": [power("b", self.n)]},
            transporter=lambda v: (f"<{v[-2]}>", self.parse(v)[0]),
        )

    def in_kernel(self, word):
        """Membership in the kernel of ``F2 -> Z/2 * Z/2`` sending both letters to involutions."""
        return dihedral_quotient_trivial(word)


def dihedral_quotient_trivial(word):
    """True when ``word`` dies in ``<x> * <y>`` with ``x^2 = y^2 = 1``.

    Letters are sent to their lowercase involution; adjacent equal letters cancel.
    """
    stack = []
    for ch in word.lower():
        if stack and stack[-1] == ch:
            stack.pop()
        else:
            stack.append(ch)
    return not stack
