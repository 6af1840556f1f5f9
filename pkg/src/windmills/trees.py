"""Finite trees viewed as projection complexes, axes and projections."""

from dataclasses import dataclass, field
from fractions import Fraction
import numpy as np

from .errors import InputError, ParameterError, TruncationError
from .metric import DistanceSystem, domain_mask, _apsp
from .words import free_reduce, reduced_words, shortlex_key

__all__ = [
    "Tree",
    "TreeIsometry",
    "AxisBundle",
    "random_tree",
    "free_group_ball",
    "tree_distance_system",
    "nearest_point_projection",
    "axis_of",
    "axis_distance_system",
    "distance_formula_check",
    "projection_table",
    "DistanceFormulaReport",
    "word_isometry",
]


@dataclass
class Tree:
    """A finite simplicial tree on labelled vertices.

    ``radius`` records the truncation radius when the tree is a ball in a
    larger (infinite) tree; ``None`` means the tree is the whole object.
    """

    vertices: list
    edges: list
    radius: int = None

    def __post_init__(self):
        self.vertices = list(self.vertices)
        self._index = {v: i for i, v in enumerate(self.vertices)}
        if len(self._index) != len(self.vertices):
            raise InputError("duplicate tree vertices")
        n = len(self.vertices)
        adj = np.zeros((n, n), dtype=bool)
        for u, v in self.edges:
            i, j = self._index[u], self._index[v]
            if i == j:
                raise InputError(f"self-loop at {u!r}")
            adj[i, j] = adj[j, i] = True
        self.adjacency = adj
        if n and adj.sum() // 2 != n - 1:
            raise InputError(f"{n} vertices need {n - 1} edges, got {adj.sum() // 2}")
        self.dist = _apsp(adj)
        if n and (self.dist < 0).any():
            raise InputError("tree is not connected")

    @property
    def n(self):
        return len(self.vertices)

    def index(self, v):
        try:
            return self._index[v]
        except KeyError:
            raise TruncationError(f"vertex {v!r} lies outside the truncation") from None

    def __contains__(self, v):
        return v in self._index

    def distance(self, u, v):
        return int(self.dist[self.index(u), self.index(v)])

    def neighbors(self, v):
        return [self.vertices[j] for j in np.flatnonzero(self.adjacency[self.index(v)])]

    def geodesic(self, u, v):
        i, j = self.index(u), self.index(v)
        path = [i]
        while path[-1] != j:
            cur = path[-1]
            for k in np.flatnonzero(self.adjacency[cur]):
                if self.dist[k, j] == self.dist[cur, j] - 1:
                    path.append(int(k))
                    break
        return [self.vertices[k] for k in path]

    def boundary(self):
        """Vertices at the truncation radius (empty for a whole tree)."""
        if self.radius is None:
            return set()
        centre = self.vertices[0]
        return {v for v in self.vertices if self.distance(centre, v) == self.radius}


def random_tree(n, rng):
    """Uniform random labelled tree on ``0..n-1`` via a Pruefer sequence."""
    if n == 1:
        return Tree([0], [])
    if n == 2:
        return Tree([0, 1], [(0, 1)])
    seq = [rng.randrange(n) for _ in range(n - 2)]
    degree = [1] * n
    for s in seq:
        degree[s] += 1
    edges = []
    for s in seq:
        leaf = min(i for i in range(n) if degree[i] == 1)
        edges.append((leaf, s))
        degree[leaf] -= 1
        degree[s] -= 1
    u, v = [i for i in range(n) if degree[i] == 1]
    edges.append((u, v))
    return Tree(list(range(n)), edges)


def free_group_ball(radius, letters="ab"):
    """Ball of the given radius around the identity in the free group Cayley tree."""
    verts = sorted(reduced_words(letters, radius), key=shortlex_key)
    edges = [(w[:-1], w) for w in verts if w]
    return Tree(verts, edges, radius=radius)


def tree_distance_system(t, theta=0):
    """Indicator system: ``d_y(x, z) = 1`` iff ``y`` lies on the geodesic ``[x, z]``."""
    d = t.dist
    between = d[:, :, None] + d[None, :, :]  # [x, y, z] -> d(x,y) + d(y,z)
    table = (between == d[:, None, :]).transpose(1, 0, 2).astype(np.int64)
    return DistanceSystem(table, 1, Fraction(theta), list(t.vertices))


def nearest_point_projection(t, target, p):
    """All vertices of ``target`` at minimal distance from ``p``."""
    target = list(target)
    if not target:
        raise ParameterError("projection target is empty")
    i = t.index(p)
    idx = [t.index(v) for v in target]
    dists = t.dist[i, idx]
    best = dists.min()
    return [v for v, dv in zip(target, dists) if dv == best]


@dataclass
class TreeIsometry:
    """An isometry given by exact forward/backward rules on vertex labels."""

    forward: object
    backward: object
    name: str = ""

    def __call__(self, v):
        return self.forward(v)


@dataclass
class AxisBundle:
    vertices: list
    owner: str = ""
    translation_length: int = None

    def __post_init__(self):
        self.vertices = list(self.vertices)

    def __len__(self):
        return len(self.vertices)


def _displacement(t, f, v):
    w = f.forward(v)
    if w in t:
        return t.distance(v, w)
    u = f.backward(v)
    if u in t:
        return t.distance(u, v)
    return None


def axis_of(t, f):
    """Translation axis of ``f`` inside the truncation, or ``"elliptic"``.

    The translation length of a tree isometry is its minimal vertex
    displacement; the axis is the set of vertices realising it.
    """
    disp = {}
    for v in t.vertices:
        dv = _displacement(t, f, v)
        if dv is not None:
            disp[v] = dv
    if not disp:
        raise TruncationError("no vertex of the truncation has a computable image")
    for v, dv in disp.items():
        if f.backward(f.forward(v)) != v:
            raise InputError(f"isometry rules are not mutually inverse at {v!r}")
    tau = min(disp.values())
    if tau == 0:
        return "elliptic"
    line = [v for v in t.vertices if disp.get(v) == tau]
    axis = AxisBundle(line, f.name, tau)
    _check_path(t, axis)
    return axis


def _check_path(t, axis):
    idx = [t.index(v) for v in axis.vertices]
    sub = t.adjacency[np.ix_(idx, idx)]
    deg = sub.sum(axis=1)
    if len(idx) > 1 and (deg.max() > 2 or (deg == 1).sum() != 2):
        raise InputError(f"axis {axis.owner!r} does not induce a path")


def axis_distance_system(t, axes):
    """Distances ``d_a(b, c) = diam(pi_a(b) U pi_a(c))`` between axes.

    ``theta`` is the measured maximum of ``diam pi_a(b)`` over distinct
    axes.  Projections of an axis are unions of vertexwise projections.
    """
    k = len(axes)
    sets = [frozenset(a.vertices) for a in axes]
    for i in range(k):
        for j in range(i + 1, k):
            if sets[i] == sets[j]:
                raise ParameterError(f"axes {i} and {j} coincide")
    proj = {}
    delta = 0
    for a in range(k):
        for b in range(k):
            if a == b:
                continue
            pts = set()
            for p in axes[b].vertices:
                pts.update(nearest_point_projection(t, axes[a].vertices, p))
            proj[a, b] = sorted(t.index(p) for p in pts)
            delta = max(delta, _diam(t, proj[a, b]))
    num = np.zeros((k, k, k), dtype=np.int64)
    for a in range(k):
        for b in range(k):
            for c in range(b, k):
                if a in (b, c):
                    continue
                v = _diam(t, proj[a, b] + proj[a, c])
                num[a, b, c] = num[a, c, b] = v
    labels = [a.owner or i for i, a in enumerate(axes)]
    return DistanceSystem(num, 1, Fraction(delta), labels)


def _diam(t, idx):
    if not idx:
        return 0
    return int(t.dist[np.ix_(idx, idx)].max())


def projection_table(t, axes):
    """``P[a, v]``: index of the unique projection of vertex ``v`` to axis ``a``."""
    out = np.empty((len(axes), t.n), dtype=np.int64)
    for a, ax in enumerate(axes):
        idx = np.array([t.index(v) for v in ax.vertices])
        d = t.dist[idx]
        out[a] = idx[d.argmin(axis=0)]
        # ties would mean a projection of diameter > 0 onto a geodesic in a tree
        if ((d == d.min(axis=0)).sum(axis=0) > 1).any():
            raise InputError(f"axis {ax.owner!r} is not a geodesic segment")
    return out


@dataclass
class DistanceFormulaReport:
    M: Fraction
    pairs: int
    holds: bool
    min_slack: Fraction
    minimal_M: Fraction
    delta: Fraction
    failures: list = field(default_factory=list)

    def to_dict(self):
        return dict(self.__dict__)


CHUNK = 1 << 16


def distance_formula_check(t, axes, M=None, samples=None):
    """Check ``d(x, y) >= (1/6) * sum_a cut_M(d_a(x, y))`` on vertex pairs.

    ``cut_M(v)`` is ``v`` when ``v >= M`` and 0 otherwise.  ``M`` defaults
    to the measured ``Delta + 1``.  ``samples`` is a list of vertex pairs;
    by default every pair of the truncation is tested.
    """
    delta = axis_distance_system(t, axes).theta if len(axes) > 1 else Fraction(0)
    M = delta + 1 if M is None else Fraction(M)
    P = projection_table(t, axes)
    n = t.n
    if samples is None:
        xs, ys = np.triu_indices(n)
    else:
        xs = np.array([t.index(x) for x, _ in samples], dtype=np.int64)
        ys = np.array([t.index(y) for _, y in samples], dtype=np.int64)
    d = t.dist[xs, ys]
    top = 0
    sums = {}

    def total(cut):
        # cut_M(v) for integer v: v >= M  <=>  v >= ceil(M)
        thr = -(-cut.numerator // cut.denominator)
        if thr not in sums:
            out = np.zeros(len(d), dtype=np.int64)
            for lo in range(0, len(d), CHUNK):
                blk = slice(lo, lo + CHUNK)
                per_axis = t.dist[P[:, xs[blk]], P[:, ys[blk]]]
                out[blk] = np.where(per_axis >= thr, per_axis, 0).sum(axis=0)
            sums[thr] = out
        return sums[thr]

    for lo in range(0, len(d), CHUNK):
        blk = slice(lo, lo + CHUNK)
        top = max(top, int(t.dist[P[:, xs[blk]], P[:, ys[blk]]].max(initial=0)))
    slack = 6 * d - total(M)
    bad = np.flatnonzero(slack < 0)
    failures = [(t.vertices[xs[i]], t.vertices[ys[i]]) for i in bad[:25]]
    minimal = Fraction(0)
    while minimal <= top and (6 * d - total(minimal) < 0).any():
        minimal += 1
    return DistanceFormulaReport(
        M,
        len(d),
        not len(bad),
        Fraction(int(slack.min()), 6) if len(d) else Fraction(0),
        minimal,
        delta,
        failures,
    )


def word_isometry(word):
    """Left multiplication by ``word`` on free group elements."""
    inv = word[::-1].swapcase()
    return TreeIsometry(
        lambda v: free_reduce(word + v),
        lambda v: free_reduce(inv + v),
        word,
    )
