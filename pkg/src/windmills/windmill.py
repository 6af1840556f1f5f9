"""Windmills, syllables, pivots, waypoints and free-product certificates."""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .action import subgroup_elements
from .errors import InputError, NoPathError, TruncationError
from .metric import all_geodesics, as_label_graph, label_function
from .words import power

__all__ = [
    "WindmillLevel",
    "WindmillData",
    "FreeProductWord",
    "FreeProductCertificate",
    "build_windmill",
    "syllable_decompose",
    "pivot_points",
    "waypoint_report",
    "locality_check",
    "remember_check",
    "bounded_orbit_classify",
    "free_product_certificate",
    "element_order",
]


@dataclass
class WindmillLevel:
    index: int
    W: list
    N: list
    L: list
    O: list
    H: list
    connected: bool = True
    lost_moves: int = 0

    def to_dict(self):
        return {
            "level": self.index,
            "W_size": len(self.W),
            "N_size": len(self.N),
            "L_size": len(self.L),
            "O": self.O,
            "H": self.H,
            "connected": self.connected,
            "moves_leaving_truncation": self.lost_moves,
        }


@dataclass
class WindmillData:
    v0: object
    levels: list
    vertices: list
    truncated_at: int = None

    def __post_init__(self):
        self._level = {}
        for lev in self.levels:
            for v in lev.O:
                self._level.setdefault(v, lev.index)

    @property
    def depth(self):
        return len(self.levels) - 1

    @property
    def O(self):
        return [v for lev in self.levels for v in lev.O]

    def level_of(self, v):
        try:
            return self._level[v]
        except KeyError:
            raise InputError(f"{v!r} is not an orbit representative of the windmill") from None

    def to_dict(self):
        return {
            "v0": self.v0,
            "depth": self.depth,
            "truncated_at": self.truncated_at,
            "truncation_size": len(self.vertices),
            "levels": [lev.to_dict() for lev in self.levels],
        }


def _trivial(a, word):
    if a.normal_form is not None:
        return a.normal_form(word) == ""
    return a.is_trivial(word) is True


def _element_key(a, word):
    return a.element_key(word)


def _dedupe_words(a, words):
    out = []
    for w in words:
        w = a.reduce(w)
        if w and w not in out and not _trivial(a, w):
            out.append(w)
    return out


def _moves(a, H):
    return list(H) + [a.reduce(w[::-1].swapcase()) for w in H]


def _orbit_representatives(a, H, points, inside):
    parent = {p: p for p in points}

    def find(p):
        while parent[p] != p:
            parent[p] = parent[parent[p]]
            p = parent[p]
        return p

    lost = 0
    moves = _moves(a, H)
    for p in sorted(points, key=a.key):
        for h in moves:
            q = a.act(h, p)
            if q in parent:
                rp, rq = find(p), find(q)
                if rp != rq:
                    parent[max(rp, rq, key=a.key)] = min(rp, rq, key=a.key)
            else:
                lost += 1
    reps = sorted({find(p) for p in points}, key=a.key)
    return reps, lost


def _closure(a, H, start, inside):
    seen = set(start)
    stack = sorted(start, key=a.key)
    left = 0
    moves = _moves(a, H)
    while stack:
        x = stack.pop()
        for h in moves:
            y = a.act(h, x)
            if y not in inside:
                left += 1
            elif y not in seen:
                seen.add(y)
                stack.append(y)
    return seen, left


def _connected(G, verts):
    verts = set(verts)
    if not verts:
        return True
    start = next(iter(verts))
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in G.neighbors_of(x):
            if y in verts and y not in seen:
                seen.add(y)
                stack.append(y)
    return seen == verts


def build_windmill(a, fam, g, v0, depth):
    """Levels ``0..depth`` of the windmill around ``v0`` inside the truncation.

    ``g`` is a ``ComplexGraph`` or any object with ``labels``,
    ``neighbors_of`` and membership (a ``LabelGraph``).  Generator words
    that carry a vertex outside the truncation are counted; the first level
    where that happens is recorded in ``truncated_at``.
    """
    G = as_label_graph(g)
    if v0 not in G:
        raise InputError(f"basepoint {v0!r} is not a vertex of the graph")
    if depth < 0:
        raise InputError("depth must be non-negative")
    inside = set(G.labels)
    H = _dedupe_words(a, fam.generators(v0, a))
    levels = [WindmillLevel(0, [v0], [v0], [], [v0] if H else [], H)]
    W = {v0}
    truncated = None
    for i in range(1, depth + 1):
        N = set(W)
        for x in W:
            N.update(G.neighbors_of(x))
        L = N - W
        O, lost = _orbit_representatives(a, H, L, inside)
        newH = list(H)
        for v in O:
            for w in _dedupe_words(a, fam.generators(v, a)):
                if w not in newH:
                    newH.append(w)
        Wn, left = _closure(a, newH, N, inside)
        conn = _connected(G, Wn)
        if (lost or left) and truncated is None:
            truncated = i
        levels.append(
            WindmillLevel(
                i,
                sorted(Wn, key=a.key),
                sorted(N, key=a.key),
                sorted(L, key=a.key),
                O,
                newH,
                conn,
                lost + left,
            )
        )
        W, H = Wn, newH
    return WindmillData(v0, levels, list(G.labels), truncated)


@dataclass
class FreeProductWord:
    """Syllables ``(tag, word)``; ``tag`` is the vertex of an ``R_v`` factor, ``None`` for the lower level."""

    level: int
    syllables: list

    @property
    def word(self):
        return "".join(w for _, w in self.syllables)

    def __len__(self):
        return len(self.syllables)

    def to_dict(self):
        return {"level": self.level, "syllables": [[t, w] for t, w in self.syllables]}


def syllable_decompose(w, level, wd, a):
    """Canonical syllable form at ``level`` of a word given as ``(v, element)`` pairs.

    Letters from representatives of lower levels merge into lower-level
    syllables; consecutive letters from the same top-level vertex merge too.
    Trivial products are dropped and their neighbours merged.
    """
    stack = []
    for v, x in w:
        lv = wd.level_of(v)
        if lv > level:
            raise InputError(f"{v!r} lives at level {lv}, above {level}")
        tag = v if (lv == level and level > 0) else None
        if stack and stack[-1][0] == tag:
            merged = a.reduce(stack[-1][1] + x)
            if _trivial(a, merged):
                stack.pop()
            else:
                stack[-1][1] = merged
        elif not _trivial(a, x):
            stack.append([tag, a.reduce(x)])
    return FreeProductWord(level, [tuple(s) for s in stack])


def pivot_points(h, a):
    """``w_j = h_1 ... h_{j-1} v_j`` for each top-level syllable ``h_j``."""
    prefix = ""
    out = []
    for tag, x in h.syllables:
        if tag is not None:
            out.append(a.act(prefix, tag))
        prefix += x
    return out


def _safe_d(d, y, x, z):
    if y == x or y == z:
        return None
    return Fraction(d(y, x, z))


def waypoint_report(h, pivots, g, v0, a, ds=None, threshold=None, limit=None):
    """Metric and graph forms of the waypoint statements for ``h``.

    Metric form: ``d_w(v0, h v0) > threshold`` for each pivot ``w`` (needs
    ``ds``).  Graph form: each pivot lies on every geodesic from ``v0`` to
    ``h v0`` in ``g``, and the pivots occur in order along each of them.
    """
    target = a.act(h.word, v0)
    rep = {"target": target, "pivots": list(pivots), "geodesics": 0}
    if not pivots:
        rep.update(metric_ok=True, graph_ok=True, order_ok=True, distinct_ok=True,
                   waypoints=[], metric_values=[], vacuous=True)
        return rep
    rep["vacuous"] = False
    rep["distinct_ok"] = len(set(pivots)) == len(pivots)
    if ds is not None:
        d = label_function(ds)
        vals = [_safe_d(d, w, v0, target) for w in pivots]
        rep["metric_values"] = vals
        rep["threshold"] = threshold
        rep["metric_ok"] = all(v is not None and v > threshold for v in vals)
    for p in [v0, target, *pivots]:
        if p not in g._index:
            raise TruncationError(f"vertex {p!r} is outside the complex region")
    idx = [g.index(p) for p in pivots]
    try:
        paths = all_geodesics(g, g.index(v0), g.index(target), limit)
    except NoPathError:
        paths = []
    through = [all(i in path for path in paths) and bool(paths) for i in idx]
    order = True
    for path in paths:
        pos = [path.index(i) if i in path else -1 for i in idx]
        if -1 in pos or any(p >= q for p, q in zip(pos, pos[1:])):
            order = False
    rep["geodesics"] = len(paths)
    rep["waypoints"] = through
    rep["graph_ok"] = all(through)
    rep["order_ok"] = order and bool(paths)
    return rep


def locality_check(wd, ds, g=None, constants=None):
    """Projections to vertices outside ``W_i`` stay small (exhaustive on the truncation).

    For each level ``i`` with a next level: ``d_v(v0, x) <= m`` for
    ``x`` in ``N_{i+1}`` and ``v`` outside ``W_i``; and for ``i >= 2``,
    ``d_v(x, y) <= K_p`` for ``x, y`` in ``W_{i-2}`` and ``v`` outside ``W_i``.
    """
    d = label_function(ds)
    m = constants.m
    Kp = constants.K_p
    v0 = wd.v0
    verts = wd.vertices
    near_max = Fraction(0)
    far_max = Fraction(0)
    near_tested = far_tested = 0
    failures = []
    # a distance that knows where it can be nonzero lets us skip the zeros
    support = getattr(d, "support", None)

    def candidates(outside, x, y):
        if support is None:
            return outside, 0
        sup = [v for v in support(x, y) if v in outside]
        return sup, len(outside) - len(sup)

    for i in range(wd.depth):
        Wi = set(wd.levels[i].W)
        outside = {v: None for v in verts if v not in Wi}
        for x in wd.levels[i + 1].N:
            vs, zeros = candidates(outside, v0, x)
            near_tested += zeros - (x in outside and x not in vs)
            for v in vs:
                if v == x:
                    continue
                val = d(v, v0, x)
                near_tested += 1
                if val > near_max:
                    near_max = Fraction(val)
                if val > m and len(failures) < 25:
                    failures.append({"kind": "C", "level": i, "v": v, "x": x, "value": Fraction(val)})
        if i >= 2:
            base = wd.levels[i - 2].W
            for xi, x in enumerate(base):
                for y in base[xi:]:
                    vs, zeros = candidates(outside, x, y)
                    far_tested += zeros - sum(1 for u in {x, y} if u in outside and u not in vs)
                    for v in vs:
                        if v in (x, y):
                            continue
                        val = d(v, x, y)
                        far_tested += 1
                        if val > far_max:
                            far_max = Fraction(val)
                        if val > Kp and len(failures) < 25:
                            failures.append({"kind": "Theta", "level": i, "v": v, "x": x, "y": y,
                                             "value": Fraction(val)})
    return {
        "ok": not failures,
        "m": m,
        "K_p": Kp,
        "C_tested": near_tested,
        "C_max": near_max,
        "Theta_tested": far_tested,
        "Theta_max": far_max,
        "failures": failures,
    }


def remember_check(h, pivots, ds, v0, a, constants, L):
    """``d_{w_k}(v0, h v0) >= d_{v_k}(v0, h_k v0) / 3`` for every pivot, with slack.

    Also checks ``d_{w_k}(v0, h v0) >= L - 2(m + theta)`` and that
    ``L - 2(m + theta) > m + theta``.
    """
    d = label_function(ds)
    L = Fraction(L)
    mt = constants.m + constants.theta
    floor = L - 2 * mt
    target = a.act(h.word, v0)
    tops = [(tag, x) for tag, x in h.syllables if tag is not None]
    rows = []
    ok = floor > mt
    for (tag, x), w in zip(tops, pivots):
        lhs = _safe_d(d, w, v0, target)
        local = _safe_d(d, tag, v0, a.act(x, v0))
        if lhs is None or local is None:
            rows.append({"pivot": w, "lhs": lhs, "rhs": None, "slack": None})
            ok = False
            continue
        rhs = local / 3
        row = {"pivot": w, "lhs": lhs, "rhs": rhs, "slack": lhs - rhs, "floor_ok": lhs >= floor}
        ok = ok and row["slack"] >= 0 and row["floor_ok"]
        rows.append(row)
    slacks = [r["slack"] for r in rows if r["slack"] is not None]
    return {
        "ok": ok,
        "floor": floor,
        "m_plus_theta": mt,
        "strict_gap": floor > mt,
        "min_slack": min(slacks) if slacks else None,
        "rows": rows,
    }


def bounded_orbit_classify(h, a, truncation, fam, v0, distance, powers=10, search_bound=None):
    """Decide whether ``<h>`` has a bounded ``v0``-orbit and, if so, find ``w`` with ``h`` in ``R_w``.

    ``distance(u, v)`` is the path distance in the complex.  Bounded orbits
    of tree isometries are detected exactly by the scan: the distances
    ``d(v0, h^k v0)`` stop growing after ``k = 2``.
    """
    if _trivial(a, h):
        return {"class": "trivial"}
    dist = [distance(v0, a.act(power(h, k), v0)) for k in range(1, powers + 1)]
    if powers >= 2 and max(dist) > max(dist[:2]):
        drift = Fraction(dist[-1] - dist[0], powers - 1)
        return {"class": "unbounded up to bound", "drift": drift, "distances": dist}
    radius = max(dist)
    target = a.reduce(h)
    cands = [w for w in truncation if distance(v0, w) <= radius]
    cands.sort(key=lambda w: (distance(v0, w), a.key(w)))
    bound = search_bound or max(powers, len(target) + 1)
    fixed = None
    for w in cands:
        if a.act(h, w) != w:
            continue
        fixed = fixed or w
        elems, skipped = subgroup_elements(a, fam.generators(w, a), bound)
        if target in elems:
            return {"class": "in R_w", "w": w, "distances": dist}
    if fixed is not None:
        return {"class": "fixes w outside R_w", "w": fixed, "distances": dist}
    return {"class": "unknown", "distances": dist}


def element_order(a, word, bound=24):
    """Order of ``word`` (``0`` for infinite or undecided up to ``bound``)."""
    for k in range(1, bound + 1):
        if _trivial(a, power(word, k)):
            return k
    return 0


@dataclass
class FreeProductCertificate:
    O: list
    word_bound: int
    tested: int
    skipped: int
    target: str
    rank: object
    ok: bool
    summary: dict = field(default_factory=dict)
    counterexample: dict = None
    evidence: list = field(default_factory=list)

    def to_dict(self):
        return {
            "isomorphism_target": self.target,
            "rank": self.rank,
            "O": self.O,
            "word_bound": self.word_bound,
            "tested_words": self.tested,
            "skipped_inconclusive": self.skipped,
            "ok": self.ok,
            "summary": self.summary,
            "counterexample": self.counterexample,
            "evidence": self.evidence,
        }


def _syllables_for(a, gens, bound):
    """Nontrivial elements of ``<gens>`` with their spelling length, shortest first."""
    out = []
    seen = set()
    if len(gens) == 1:
        order = element_order(a, gens[0])
        ks = []
        for k in range(1, bound + 1):
            ks += [k, -k]
        for k in ks:
            w = a.reduce(power(gens[0], k))
            key = _element_key(a, w)
            if key in seen or _trivial(a, w):
                continue
            seen.add(key)
            out.append((abs(k) if not order else min(k % order, -k % order), w))
    else:
        for n in range(1, bound + 1):
            elems, _ = subgroup_elements(a, gens, n)
            for w in elems:
                key = _element_key(a, w)
                if key not in seen:
                    seen.add(key)
                    out.append((n, w))
    out.sort(key=lambda t: t[0])
    return out


def _enumerate(alpha, bound, cap):
    """Sequences of alphabet indices with distinct consecutive vertices, shortlex."""

    def gen(n, last):
        if n == 0:
            yield []
            return
        for j, (vi, length, _) in enumerate(alpha):
            if vi != last and length <= n:
                for rest in gen(n - length, vi):
                    yield [j] + rest

    count = 0
    for n in range(1, bound + 1):
        for seq in gen(n, None):
            yield seq
            count += 1
            if cap is not None and count >= cap:
                return


def _cyclically_reduced(h):
    return len(h) >= 2 and h.syllables[0][0] != h.syllables[-1][0]


def free_product_certificate(a, fam, g, v0, depth, word_bound, *, constants=None, ds=None,
                             local=None, oracle=None, max_words=None, wd=None, L=None,
                             signature_vertices=None, orbit_invariant=None, quotient_size=None,
                             keep_evidence=20):
    """Certify that ``<R_v : v in O>`` is the free product of the ``R_v`` on tested words.

    Every canonical nontrivial word of total spelling length ``<= word_bound``
    (at most ``max_words`` of them, shortlex) must map to a nontrivial
    element with a pivot that lies on every geodesic from ``v0`` to ``h v0``.

    ``local(points)`` returns ``(ds, g)`` for a region containing ``points``
    on which geodesics and projections are exact; otherwise the given
    ``ds``/``g`` are used.  ``oracle(word)`` must return True for every
    certified word (an independent description of the subgroup).
    """
    wd = wd or build_windmill(a, fam, g, v0, depth)
    O = [v for v in wd.O if _dedupe_words(a, fam.generators(v, a))]
    if constants is None:
        mt = Fraction(0)
    else:
        mt = constants.m + constants.theta
    factors = []
    alpha = []
    for vi, v in enumerate(O):
        gens = _dedupe_words(a, fam.generators(v, a))
        order = element_order(a, gens[0]) if len(gens) == 1 else None
        factors.append(f"Z/{order}" if order else ("Z" if order == 0 else f"<{', '.join(gens)}>"))
        for length, w in _syllables_for(a, gens, word_bound):
            alpha.append((vi, length, w))
    last = wd.levels[-1]
    growing = bool(last.O) and wd.depth > 0
    rank = "infinite" if growing and wd.truncated_at is not None else len(O)
    if not O:
        target = "trivial group"
    elif rank == "infinite":
        target = " * ".join(factors) + " * ... (infinite rank)"
    else:
        target = " * ".join(factors)

    sig_vertices = signature_vertices or [v0, *O]
    threads = max(1, int(os.environ.get("WINDMILL_THREADS", "1") or 1))

    def check(seq):
        spelled = [(O[alpha[j][0]], alpha[j][2]) for j in seq]
        level = max(wd.level_of(v) for v, _ in spelled)
        h = syllable_decompose(spelled, level, wd, a)
        raw = "".join(x for _, x in spelled)
        word = a.reduce(raw)
        res = {"word": [[v, x] for v, x in spelled], "element": word, "level": level}
        triv = a.is_trivial(word)
        res["trivial"] = triv
        if oracle is not None:
            res["oracle"] = bool(oracle(raw))
        res["signature"] = tuple(a.act(word, v) for v in sig_vertices)
        if level == 0:
            res["pivots"] = []
            res["waypoint_ok"] = triv is False
            return res
        piv = pivot_points(h, a)
        res["pivots"] = piv
        target_v = a.act(h.word, v0)
        if local is not None:
            extra = [p for tag, x in h.syllables if tag is not None for p in (tag, a.act(x, v0))]
            lds, lg = local([v0, target_v, *piv, *extra])
        else:
            lds, lg = ds, g
        wr = waypoint_report(h, piv, lg, v0, a, lds, mt)
        res["metric_ok"] = wr.get("metric_ok")
        res["graph_ok"] = wr["graph_ok"]
        res["order_ok"] = wr["order_ok"]
        res["distinct_ok"] = wr["distinct_ok"]
        res["geodesics"] = wr["geodesics"]
        res["metric_values"] = wr.get("metric_values")
        res["waypoint_ok"] = any(wr["waypoints"])
        if constants is not None and lds is not None:
            rc = remember_check(h, piv, lds, v0, a, constants, L if L is not None else constants.L_threshold)
            res["remember_ok"] = rc["ok"]
            res["remember_min_slack"] = rc["min_slack"]
        if _cyclically_reduced(h):
            counts = []
            for p in range(2, 5):
                hp = syllable_decompose(spelled * p, level, wd, a)
                counts.append(len(pivot_points(hp, a)) == p * len(piv))
            res["power_pivots_ok"] = all(counts)
        return res

    seqs = list(_enumerate(alpha, word_bound, max_words))
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            results = list(pool.map(check, seqs))
    else:
        results = [check(s) for s in seqs]

    skipped = sum(1 for r in results if r["trivial"] is None)
    counter = None
    stats = {
        "pivots_tested": 0,
        "metric_ok": True,
        "graph_ok": True,
        "order_ok": True,
        "distinct_ok": True,
        "remember_ok": True,
        "remember_min_slack": None,
        "min_metric_value": None,
        "oracle_agree": 0,
        "power_pivot_words": 0,
        "power_pivots_ok": True,
    }
    for r in results:
        if r["trivial"] is None:
            continue
        bad = r["trivial"] or not r["waypoint_ok"]
        if oracle is not None:
            if r["oracle"]:
                stats["oracle_agree"] += 1
            else:
                bad = True
        if bad and counter is None:
            counter = {k: v for k, v in r.items() if k != "signature"}
        if r["level"] == 0:
            continue
        stats["pivots_tested"] += len(r["pivots"])
        for key in ("metric_ok", "graph_ok", "order_ok", "distinct_ok", "remember_ok"):
            if r.get(key) is False:
                stats[key] = False
        vals = [v for v in (r.get("metric_values") or []) if v is not None]
        if vals:
            lo = min(vals)
            if stats["min_metric_value"] is None or lo < stats["min_metric_value"]:
                stats["min_metric_value"] = lo
        s = r.get("remember_min_slack")
        if s is not None and (stats["remember_min_slack"] is None or s < stats["remember_min_slack"]):
            stats["remember_min_slack"] = s
        if "power_pivots_ok" in r:
            stats["power_pivot_words"] += 1
            stats["power_pivots_ok"] = stats["power_pivots_ok"] and r["power_pivots_ok"]

    # distinct canonical words must give distinct elements, and distinct
    # elements must act differently on the truncation
    sigs = {}
    keys = set()
    collisions = 0
    full = lambda w: tuple(a.act(w, v) for v in wd.vertices)
    for r in results:
        if r["trivial"] is None:
            continue
        key = _element_key(a, r["element"])
        if key in keys:
            collisions += 1
        keys.add(key)
        prev = sigs.setdefault(r["signature"], r["element"])
        if prev != r["element"] and full(prev) == full(r["element"]):
            collisions += 1
    stats["injective_on_tested"] = collisions == 0
    stats["oracle_total"] = len(results) - skipped if oracle is not None else None
    stats["threshold_m_plus_theta"] = mt
    stats["inclusion_realized"] = counter is None and collisions == 0
    stats["windmill_truncated_at"] = wd.truncated_at
    stats["O_per_level"] = [len(lev.O) for lev in wd.levels]
    if orbit_invariant is not None:
        inv = [orbit_invariant(v) for v in O]
        G = as_label_graph(g)
        stats["fundamental_domain"] = (
            len(set(inv)) == len(inv)
            and (quotient_size is None or len(inv) == quotient_size)
            and _connected(G, O)
        )
    ok = counter is None and collisions == 0 and stats["power_pivots_ok"]
    if orbit_invariant is not None:
        ok = ok and stats["fundamental_domain"]
    evidence = []
    for r in results[:keep_evidence]:
        evidence.append({k: v for k, v in r.items() if k != "signature"})
    O_out = [{"vertex": v, "level": wd.level_of(v), "generators": _dedupe_words(a, fam.generators(v, a)),
              "factor": f} for v, f in zip(O, factors)]
    return FreeProductCertificate(O_out, word_bound, len(results) - skipped, skipped, target, rank, ok,
                                  stats, counter, evidence)
