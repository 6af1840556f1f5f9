"""Finite distance systems, the projection complex graph and its constants.

Distances are exact rationals.  A system on ``n`` vertices stores an integer
array ``num`` of shape ``(n, n, n)`` together with a common denominator, so
that ``d_y(x, z) == Fraction(num[y, x, z], den)``.  Entries with ``y`` equal
to ``x`` or ``z`` are outside the domain and are kept at zero.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import floor, lcm

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .errors import InputError, NoPathError, ParameterError

__all__ = [
    "DistanceSystem",
    "AxiomReport",
    "ComplexGraph",
    "ConstantsReport",
    "verify_axioms",
    "build_complex",
    "all_geodesics",
    "measure_constants",
    "spinning_threshold",
    "spinning_m",
    "sum_distance_systems",
    "LabelGraph",
    "label_function",
    "as_label_graph",
]

MAX_WITNESSES = 25


def _frac(v):
    if isinstance(v, Fraction):
        return v
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, float):
        raise InputError(f"floating point value {v!r} not allowed; use 'p/q'")
    return Fraction(v)


def domain_mask(n):
    """Boolean mask of the triples ``(y, x, z)`` with ``y`` not in ``{x, z}``."""
    idx = np.arange(n)
    y = idx[:, None, None]
    return (y != idx[None, :, None]) & (y != idx[None, None, :])


@dataclass
class DistanceSystem:
    num: np.ndarray
    den: int = 1
    theta: Fraction = Fraction(0)
    labels: list = None

    def __post_init__(self):
        self.num = np.asarray(self.num, dtype=np.int64)
        if self.num.ndim != 3 or len(set(self.num.shape)) != 1:
            raise InputError(f"distance table must be n x n x n, got {self.num.shape}")
        if self.den <= 0:
            raise InputError("denominator must be positive")
        self.theta = _frac(self.theta)
        if self.theta < 0:
            raise InputError("theta must be non-negative")
        if (self.num < 0).any():
            y, x, z = map(int, np.argwhere(self.num < 0)[0])
            raise InputError(f"negative distance at (y, x, z) = ({y}, {x}, {z})")
        n = self.n
        if self.labels is None:
            self.labels = list(range(n))
        elif len(self.labels) != n:
            raise InputError("labels do not match the table size")
        self.num[~domain_mask(n)] = 0
        self._index = None

    @property
    def n(self):
        return self.num.shape[0]

    def index(self, label):
        if self._index is None:
            self._index = {lab: i for i, lab in enumerate(self.labels)}
        return self._index[label]

    def d(self, y, x, z):
        """Exact ``d_y(x, z)`` for vertex indices."""
        if y == x or y == z:
            raise InputError(f"d_{y}({x}, {z}) is outside the domain")
        return Fraction(int(self.num[y, x, z]), self.den)

    def scaled(self, value):
        """``value`` expressed in units of ``1/den`` (exact, may be a Fraction)."""
        return _frac(value) * self.den

    @classmethod
    def from_entries(cls, n, entries, theta=0, default=0, labels=None):
        """Build from ``(y, x, z, value)`` records.

        Entries are symmetrised in ``(x, z)``.  With ``default=None`` every
        triple of the domain must be supplied.
        """
        if default not in (0, None):
            raise InputError("only default=0 or default=None are supported")
        vals = {}
        for rec in entries:
            y, x, z, v = rec
            y, x, z = int(y), int(x), int(z)
            if not (0 <= y < n and 0 <= x < n and 0 <= z < n):
                raise InputError(f"entry ({y}, {x}, {z}) out of range for n={n}")
            if y == x or y == z:
                raise InputError(f"entry ({y}, {x}, {z}) outside the domain of d_{y}")
            v = _frac(v)
            for key in ((y, x, z), (y, z, x)):
                if key in vals and vals[key] != v:
                    raise InputError(f"conflicting values for (y, x, z) = {key}")
                vals[key] = v
        if default is None:
            for y in range(n):
                for x in range(n):
                    for z in range(n):
                        if y != x and y != z and x != z and (y, x, z) not in vals:
                            raise InputError(f"missing table entry (y, x, z) = ({y}, {x}, {z})")
        den = lcm(1, _frac(theta).denominator, *(v.denominator for v in vals.values()))
        num = np.zeros((n, n, n), dtype=np.int64)
        for (y, x, z), v in vals.items():
            num[y, x, z] = v * den
        return cls(num, den, _frac(theta), labels)

    @classmethod
    def from_function(cls, labels, func, theta=0):
        """Tabulate ``func(y, x, z)`` over label triples of the domain."""
        labels = list(labels)
        n = len(labels)
        vals = np.empty((n, n, n), dtype=object)
        vals.fill(Fraction(0))
        for yi, y in enumerate(labels):
            for xi, x in enumerate(labels):
                if xi == yi:
                    continue
                for zi in range(xi, n):
                    if zi == yi:
                        continue
                    v = _frac(func(y, x, labels[zi]))
                    vals[yi, xi, zi] = v
                    vals[yi, zi, xi] = v
        den = lcm(1, _frac(theta).denominator, *(v.denominator for v in vals.flat))
        num = np.vectorize(lambda v: int(v * den), otypes=[np.int64])(vals)
        return cls(num, den, _frac(theta), labels)

    def entries(self):
        """Nonzero entries as ``(y, x, z, Fraction)`` with ``x < z``."""
        out = []
        for y, x, z in np.argwhere(self.num != 0):
            if x < z:
                out.append((int(y), int(x), int(z), Fraction(int(self.num[y, x, z]), self.den)))
        return out


@dataclass
class AxiomReport:
    symmetry_ok: bool
    triangle_ok: bool
    triples_ok: bool
    finiteness_ok: bool
    finiteness_max: int
    witnesses: list = field(default_factory=list)
    degenerate: bool = False

    @property
    def ok(self):
        return self.symmetry_ok and self.triangle_ok and self.triples_ok and self.finiteness_ok

    def to_dict(self):
        return {
            "symmetry_ok": self.symmetry_ok,
            "triangle_ok": self.triangle_ok,
            "triples_ok": self.triples_ok,
            "finiteness_ok": self.finiteness_ok,
            "finiteness_max": self.finiteness_max,
            "degenerate": self.degenerate,
            "witnesses": self.witnesses,
        }


def _take(mask, limit=MAX_WITNESSES):
    return [tuple(int(i) for i in row) for row in np.argwhere(mask)[:limit]]


def verify_axioms(ds):
    """Check the four projection complex axioms by exhaustive enumeration."""
    n = ds.n
    if n <= 2:
        return AxiomReport(True, True, True, True, 0, [], degenerate=True)
    num = ds.num
    dom = domain_mask(n)
    witnesses = []

    asym = dom & (num != num.transpose(0, 2, 1))
    for y, x, z in _take(asym):
        witnesses.append({"axiom": "symmetry", "tuple": [y, x, z]})
    symmetry_ok = not asym.any()

    big = np.iinfo(np.int64).max // 4
    triangle_ok = True
    for y in range(n):
        m = num[y].copy()
        m[y, :] = big
        m[:, y] = big
        through = m[:, :, None] + m[None, :, :]
        best = through.min(axis=1)
        bad = best < m
        bad[y, :] = False
        bad[:, y] = False
        if bad.any():
            triangle_ok = False
            for x, w in _take(bad, MAX_WITNESSES - len(witnesses)):
                z = int(through[x, :, w].argmin())
                witnesses.append({"axiom": "triangle", "tuple": [y, x, z, w]})

    # integer entries: num > theta  <=>  num > floor(theta)
    theta = floor(ds.scaled(ds.theta))
    # triples (y, x, z) all distinct: min(d_y(x, z), d_z(x, y)) <= theta
    a = num
    b = num.transpose(2, 1, 0)
    idx = np.arange(n)
    distinct = dom & (idx[None, :, None] != idx[None, None, :])
    bad = distinct & (np.minimum(a, b) > theta)
    for y, x, z in _take(bad):
        witnesses.append({"axiom": "triples", "tuple": [x, y, z]})
    triples_ok = not bad.any()

    counts = (dom & (num > theta)).sum(axis=0)
    return AxiomReport(
        symmetry_ok, triangle_ok, triples_ok, True, int(counts.max()), witnesses
    )


@dataclass
class ComplexGraph:
    K: Fraction
    adjacency: np.ndarray
    labels: list = None
    _dist: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        self.adjacency = np.asarray(self.adjacency, dtype=bool)
        if self.labels is None:
            self.labels = list(range(self.n))
        self._index = {lab: i for i, lab in enumerate(self.labels)}

    @property
    def n(self):
        return self.adjacency.shape[0]

    def index(self, label):
        return self._index[label]

    def neighbors(self, i):
        return [int(j) for j in np.flatnonzero(self.adjacency[i])]

    def edges(self):
        return [(int(x), int(z)) for x, z in np.argwhere(np.triu(self.adjacency, 1))]

    def distances(self):
        """All-pairs path distances; ``-1`` marks disconnected pairs."""
        if self._dist is None:
            self._dist = _apsp(self.adjacency)
        return self._dist

    def diameter(self):
        d = self.distances()
        return int(d.max()) if (d >= 0).all() else None


def _apsp(adj):
    n = adj.shape[0]
    if n == 0:
        return np.zeros((0, 0), dtype=np.int64)
    if n <= 160:
        # frontier expansion with dense products beats sparse setup on small graphs
        A = adj.astype(np.float32)
        out = np.full((n, n), -1, dtype=np.int64)
        frontier = np.eye(n, dtype=bool)
        reach = frontier.copy()
        out[frontier] = 0
        k = 0
        while frontier.any():
            k += 1
            frontier = ((frontier.astype(np.float32) @ A) > 0) & ~reach
            out[frontier] = k
            reach |= frontier
        return out
    d = shortest_path(csr_matrix(adj.astype(np.int8)), unweighted=True, directed=False)
    return np.where(np.isinf(d), -1, d).astype(np.int64)


def build_complex(ds, K):
    """The graph joining ``x, z`` when ``d_y(x, z) <= K`` for every other ``y``.

    The unmodified functions ``d_y`` are used in the edge rule.
    """
    K = _frac(K)
    if K <= 0:
        raise ParameterError(f"K must be positive, got {K}")
    n = ds.n
    worst = np.where(domain_mask(n), ds.num, 0).max(axis=0) if n else np.zeros((0, 0))
    # worst / den <= K  <=>  worst * K.den <= K.num * den
    adj = worst * K.denominator <= K.numerator * ds.den
    np.fill_diagonal(adj, False)
    return ComplexGraph(K, adj, list(ds.labels))


def all_geodesics(g, x, z, limit=None):
    """Every shortest vertex path from ``x`` to ``z``, in lexicographic order."""
    d = g.distances()
    if d[x, z] < 0:
        raise NoPathError(f"vertices {x} and {z} are not connected")
    length = int(d[x, z])
    paths = []

    def extend(path):
        if limit is not None and len(paths) >= limit:
            return
        u = path[-1]
        if u == z:
            paths.append(tuple(path))
            return
        k = len(path)
        for v in g.neighbors(u):
            if d[x, v] == k and d[v, z] == length - k:
                path.append(v)
                extend(path)
                path.pop()

    extend([x])
    return paths


@dataclass
class ConstantsReport:
    K_e: Fraction
    K_p: Fraction
    K_g: Fraction
    theta: Fraction
    path_bound: int = None
    degenerate: bool = False

    @property
    def m(self):
        return spinning_m(self)

    @property
    def L_threshold(self):
        return spinning_threshold(self)

    def to_dict(self):
        return {
            "K_e": self.K_e,
            "K_p": self.K_p,
            "K_g": self.K_g,
            "theta": self.theta,
            "m": self.m,
            "L_threshold": self.L_threshold,
            "path_bound": self.path_bound,
            "degenerate": self.degenerate,
        }


def spinning_m(c):
    return 11 * _frac(c.K_e) + 6 * _frac(c.K_g) + 5 * _frac(c.K_p)


def spinning_threshold(c):
    """``3 (11 K_e + 6 K_g + 5 K_p + theta) + 1``."""
    return 3 * (spinning_m(c) + _frac(c.theta)) + 1


def measure_constants(ds, g, path_bound=None):
    """Measure the edge, path and geodesic constants of ``g`` exactly.

    The path constant is a supremum over paths avoiding the closed
    2-neighbourhood of ``y``; it only depends on the endpoints, so it is
    computed from shortest paths in the graph with that neighbourhood
    removed, restricted to lengths ``<= path_bound`` (default twice the
    diameter).
    """
    n = ds.n
    if n <= 2:
        z = Fraction(0)
        return ConstantsReport(z, z, z, ds.theta, path_bound or 0, degenerate=True)
    num = ds.num
    dom = domain_mask(n)
    adj = g.adjacency
    dist = g.distances()
    if path_bound is None:
        diam = g.diameter()
        path_bound = 2 * diam if diam is not None else 2 * n

    ke = int(np.where(dom & adj[None, :, :], num, 0).max())

    kg = 0
    kp = 0
    for y in range(n):
        keep = np.ones(n, dtype=bool)
        keep[y] = False
        sub = _apsp(adj & keep[:, None] & keep[None, :])
        ok = keep[:, None] & keep[None, :] & (sub == dist) & (dist >= 0)
        if ok.any():
            kg = max(kg, int(num[y][ok].max()))

        far = (dist[y] > 2) | (dist[y] < 0)
        if far.any():
            sub = _apsp(adj & far[:, None] & far[None, :])
            ok = far[:, None] & far[None, :] & (sub >= 0) & (sub <= path_bound)
            if ok.any():
                kp = max(kp, int(num[y][ok].max()))

    den = ds.den
    return ConstantsReport(Fraction(ke, den), Fraction(kp, den), Fraction(kg, den), ds.theta, path_bound)


def sum_distance_systems(components, grouping, theta_unit=1):
    """Add component distance functions vertexwise.

    ``grouping[y]`` lists the indices of the component systems whose
    ``d_y`` are summed to give the new ``d_y``.  The result carries
    ``theta = 12 * C * theta_unit`` where ``C`` is the largest group size.
    """
    if not components:
        raise InputError("no component systems given")
    n = components[0].n
    for k, c in enumerate(components):
        if c.n != n:
            raise InputError(f"component {k} has {c.n} vertices, expected {n}")
    if len(grouping) != n:
        raise InputError(f"grouping covers {len(grouping)} vertices, expected {n}")
    den = lcm(*(c.den for c in components))
    num = np.zeros((n, n, n), dtype=np.int64)
    C = 1
    for y in range(n):
        group = list(grouping[y])
        if not group:
            raise InputError(f"vertex {y} has an empty component group")
        C = max(C, len(group))
        for k in group:
            if not 0 <= k < len(components):
                raise InputError(f"vertex {y}: component {k} is undefined")
            c = components[k]
            num[y] += c.num[y] * (den // c.den)
    theta = 12 * C * _frac(theta_unit)
    return DistanceSystem(num, den, theta, list(components[0].labels))


def label_function(ds):
    """``d_y(x, z)`` as a function of vertex labels.

    Accepts a ``DistanceSystem`` or an existing callable (returned as is).
    """
    if isinstance(ds, DistanceSystem):
        return lambda y, x, z: ds.d(ds.index(y), ds.index(x), ds.index(z))
    return ds


class LabelGraph:
    """A graph on labels given by a neighbour rule, restricted to ``labels``."""

    def __init__(self, labels, neighbors):
        self.labels = list(labels)
        self._set = set(self.labels)
        self._rule = neighbors
        self._cache = {}

    def __contains__(self, v):
        return v in self._set

    def neighbors_of(self, v):
        if v not in self._cache:
            self._cache[v] = [u for u in self._rule(v) if u in self._set and u != v]
        return self._cache[v]

    @classmethod
    def from_complex(cls, g):
        lab = g.labels
        return cls(lab, lambda v: [lab[j] for j in g.neighbors(g.index(v))])


def as_label_graph(g):
    return LabelGraph.from_complex(g) if isinstance(g, ComplexGraph) else g
