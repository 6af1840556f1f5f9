"""Exact arithmetic for two-curve twist groups, homology congruence and dihedral parity."""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
import re

import numpy as np

from .errors import InputError, ParameterError

__all__ = [
    "QuadraticNumber",
    "Mat2",
    "parse_twist_word",
    "derivative",
    "classify_nt",
    "stretch_factor",
    "squarefree_part",
    "squarefree_parts",
    "normal_independence",
    "HomologyRep",
    "homology_twist_action",
    "congruence_certificate",
    "dihedral_power_commutator",
    "dihedral_permutation_commutator",
    "partition_compatible",
    "swap_impossible",
]


# -- squarefree parts --------------------------------------------------------

def _primes_upto(n):
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve).astype(np.int64)


def squarefree_part(n):
    """The squarefree kernel: ``n`` divided by its largest square divisor."""
    n = int(n)
    if n < 1:
        raise ParameterError(f"squarefree part needs a positive integer, got {n}")
    out = 1
    p = 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e ^= 1
        if e:
            out *= p
        p += 1 if p == 2 else 2
    return out * n


def squarefree_parts(values):
    """Vectorized trial division over an array of positive integers below ``2**62``."""
    vals = np.asarray(values, dtype=np.int64)
    if (vals < 1).any():
        raise ParameterError("squarefree parts need positive integers")
    rem = vals.copy()
    out = np.ones_like(vals)
    top = int(rem.max()) if rem.size else 1
    for p in _primes_upto(isqrt(top)):
        odd = np.zeros(rem.shape, dtype=bool)
        hit = rem % p == 0
        while hit.any():
            rem[hit] //= p
            odd ^= hit
            hit = rem % p == 0
        out[odd] *= p
    # whatever survives trial division up to sqrt is 1 or a prime
    return out * rem


def _sqrt_split(n):
    """Write a non-negative integer as ``c^2 * q`` with ``q`` squarefree; return ``(c, q)``."""
    if n == 0:
        return 0, 1
    q = squarefree_part(n)
    return isqrt(n // q), q


# -- quadratic numbers -------------------------------------------------------

@dataclass(frozen=True)
class QuadraticNumber:
    """``a + b * sqrt(d)`` with rational ``a, b`` and squarefree ``d``."""

    a: Fraction
    b: Fraction = Fraction(0)
    d: int = 1

    def __post_init__(self):
        a, b, d = Fraction(self.a), Fraction(self.b), int(self.d)
        if d < 1:
            raise ParameterError("only real quadratic fields are supported")
        c, q = _sqrt_split(d)
        b *= c
        if q == 1:
            a, b = a + b, Fraction(0)
        if b == 0:
            q = 1
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", q)

    @classmethod
    def sqrt(cls, r):
        r = Fraction(r)
        if r < 0:
            raise ParameterError("square root of a negative number")
        # sqrt(p/q) = sqrt(p q) / q
        return cls(0, Fraction(1, r.denominator), r.numerator * r.denominator)

    def _coerce(self, other):
        if not isinstance(other, QuadraticNumber):
            other = QuadraticNumber(Fraction(other))
        d = self.d if self.b else other.d
        if other.b and self.b and other.d != self.d:
            raise ParameterError(f"mixing fields Q(sqrt {self.d}) and Q(sqrt {other.d})")
        return other, d

    def __add__(self, other):
        other, d = self._coerce(other)
        return QuadraticNumber(self.a + other.a, self.b + other.b, d)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(-self.a, -self.b, self.d)

    def __sub__(self, other):
        return self + (-other if isinstance(other, QuadraticNumber) else -Fraction(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other, d = self._coerce(other)
        return QuadraticNumber(self.a * other.a + self.b * other.b * d,
                               self.a * other.b + self.b * other.a, d)

    __rmul__ = __mul__

    def conjugate(self):
        return QuadraticNumber(self.a, -self.b, self.d)

    def norm(self):
        return self.a * self.a - self.b * self.b * self.d

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("zero has no inverse")
        c = self.conjugate()
        return QuadraticNumber(c.a / n, c.b / n, self.d)

    def __truediv__(self, other):
        other, _ = self._coerce(other)
        return self * other.inverse()

    def __eq__(self, other):
        if not isinstance(other, QuadraticNumber):
            try:
                other = QuadraticNumber(Fraction(other))
            except (TypeError, ValueError):
                return NotImplemented
        return (self.a, self.b, self.d) == (other.a, other.b, other.d)

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def sign(self):
        """Exact sign of the real value."""
        # compare a with -b sqrt(d) by squaring with care for signs
        if self.b == 0:
            return (self.a > 0) - (self.a < 0)
        sb = 1 if self.b > 0 else -1
        if self.a == 0 or (self.a > 0) == (sb > 0):
            return sb if self.a == 0 else (1 if self.a > 0 else -1)
        big = self.a * self.a > self.b * self.b * self.d
        return (1 if self.a > 0 else -1) if big else sb

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        a = "" if self.a == 0 else f"{self.a} + "
        b = "" if self.b == 1 else f"{self.b}*"
        return f"{a}{b}sqrt({self.d})"

    def to_dict(self):
        return {"a": self.a, "b": self.b, "d": self.d, "text": str(self)}


# -- 2x2 matrices and twist words --------------------------------------------

@dataclass(frozen=True)
class Mat2:
    """Integer 2x2 matrix up to global sign; stored with a canonical sign."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        vals = [int(self.a), int(self.b), int(self.c), int(self.d)]
        if vals[0] * vals[3] - vals[1] * vals[2] != 1:
            raise InputError(f"determinant of {vals} is not 1")
        first = next(v for v in vals if v)
        if first < 0:
            vals = [-v for v in vals]
        for name, v in zip("abcd", vals):
            object.__setattr__(self, name, v)

    @classmethod
    def identity(cls):
        return cls(1, 0, 0, 1)

    def __matmul__(self, o):
        return Mat2(self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                    self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d)

    def inverse(self):
        return Mat2(self.d, -self.b, -self.c, self.a)

    def power(self, k):
        base = self if k >= 0 else self.inverse()
        out = Mat2.identity()
        for _ in range(abs(k)):
            out = out @ base
        return out

    @property
    def trace(self):
        return self.a + self.d

    def rows(self):
        return [[self.a, self.b], [self.c, self.d]]


_SYMBOLS = {"c": "c", "d": "d", "A": "c", "B": "d"}
_TOKEN = re.compile(r"^(?:T_?)?([cdAB])(?:\^\(?(-?\d+)\)?)?$")


def parse_twist_word(w):
    """Accept ``[["c", 1], ["d", -1]]`` or text like ``"T_c T_d^-2"`` / ``"c d^-1"``."""
    if isinstance(w, str):
        out = []
        for tok in w.split():
            mt = _TOKEN.match(tok)
            if not mt:
                raise InputError(f"cannot parse twist token {tok!r}")
            out.append((mt.group(1), int(mt.group(2) or 1)))
        w = out
    parsed = []
    for item in w:
        try:
            sym, e = item
        except (TypeError, ValueError):
            raise InputError(f"twist letters are (symbol, exponent) pairs, got {item!r}") from None
        if sym not in _SYMBOLS:
            raise InputError(f"unknown twist symbol {sym!r}")
        e = int(e)
        if e == 0:
            raise InputError("twist exponents must be nonzero")
        parsed.append((_SYMBOLS[sym], e))
    return parsed


def derivative(w, n):
    """Product of ``DT_c = [[1, n], [0, 1]]`` and ``DT_d = [[1, 0], [-n, 1]]`` powers."""
    if int(n) < 1:
        raise ParameterError("intersection number n must be positive")
    gens = {"c": Mat2(1, n, 0, 1), "d": Mat2(1, 0, -n, 1)}
    out = Mat2.identity()
    for sym, e in parse_twist_word(w):
        out = out @ gens[sym].power(e)
    return out


def classify_nt(m):
    t = abs(m.trace)
    if t < 2:
        return "periodic"
    if t == 2:
        return "reducible"
    return "pseudo_anosov"


def stretch_factor(m):
    """Leading eigenvalue ``(t + sqrt(t^2 - 4)) / 2`` with ``t = |trace|``."""
    if classify_nt(m) != "pseudo_anosov":
        raise ParameterError(f"matrix with trace {m.trace} is not hyperbolic")
    t = abs(m.trace)
    return QuadraticNumber(Fraction(t, 2)) + QuadraticNumber.sqrt(t * t - 4) * Fraction(1, 2)


def normal_independence(f1, f2, n):
    """One-sided certificate: stretch factors in distinct quadratic fields."""
    lams = []
    for f in (f1, f2):
        m = derivative(f, n)
        if classify_nt(m) != "pseudo_anosov":
            raise ParameterError(f"{f!r} is not pseudo-Anosov for n = {n}")
        lams.append((m, stretch_factor(m)))
    (m1, l1), (m2, l2) = lams
    out = {
        "n": n,
        "traces": [m1.trace, m2.trace],
        "stretch_factors": [l1, l2],
        "fields": [l1.d, l2.d],
    }
    if l1.d != l2.d:
        out["result"] = "independent"
        out["reason"] = (
            f"the stretch factors generate Q(sqrt {l1.d}) and Q(sqrt {l2.d}); "
            "irrational elements of distinct quadratic fields have no common nonzero power"
        )
    else:
        out["result"] = "inconclusive"
        out["reason"] = f"both stretch factors lie in Q(sqrt {l1.d})"
    return out


# -- homology ----------------------------------------------------------------

@dataclass
class HomologyRep:
    """Integer homology of rank ``2g`` with a symplectic form and named classes."""

    form: np.ndarray
    classes: dict

    def __post_init__(self):
        J = np.asarray(self.form, dtype=np.int64)
        if J.ndim != 2 or J.shape[0] != J.shape[1] or J.shape[0] % 2:
            raise InputError("the form must be a square matrix of even size")
        if not (J == -J.T).all():
            raise InputError("the form must be antisymmetric")
        if round(abs(np.linalg.det(J.astype(float)))) == 0:
            raise InputError("the form is degenerate")
        self.form = J
        cls = {}
        for k, v in self.classes.items():
            v = np.asarray(v, dtype=np.int64)
            if v.shape != (J.shape[0],):
                raise InputError(f"class {k!r} has the wrong length")
            cls[k] = v
        self.classes = cls

    @property
    def rank(self):
        return self.form.shape[0]

    @classmethod
    def standard(cls, g, classes=None):
        """``<e_i, e_{g+i}> = +1``; default classes ``a1..ag, b1..bg`` and ``sep = 0``."""
        if g < 1:
            raise ParameterError("genus must be positive")
        J = np.zeros((2 * g, 2 * g), dtype=np.int64)
        J[:g, g:] = np.eye(g, dtype=np.int64)
        J[g:, :g] = -np.eye(g, dtype=np.int64)
        if classes is None:
            eye = np.eye(2 * g, dtype=np.int64)
            classes = {f"a{i + 1}": eye[i] for i in range(g)}
            classes.update({f"b{i + 1}": eye[g + i] for i in range(g)})
            classes["sep"] = np.zeros(2 * g, dtype=np.int64)
        return cls(J, classes)

    def pairing(self, x, y):
        return int(np.asarray(x) @ self.form @ np.asarray(y))


def _class_vector(rep, c):
    if isinstance(c, str):
        try:
            return rep.classes[c]
        except KeyError:
            raise InputError(f"unknown curve class {c!r}") from None
    v = np.asarray(c, dtype=np.int64)
    if v.shape != (rep.rank,):
        raise InputError("class vector has the wrong length")
    return v


def transvection(rep, c, k=1):
    """``x -> x + k <c, x> c`` as an integer matrix acting on column vectors."""
    c = _class_vector(rep, c)
    return np.eye(rep.rank, dtype=np.int64) + k * np.outer(c, c @ rep.form)


def homology_twist_action(rep, w):
    """Compose transvections for ``[(class, exponent), ...]``, leftmost applied last."""
    M = np.eye(rep.rank, dtype=np.int64)
    for c, e in w:
        M = M @ transvection(rep, c, int(e))
    if not (M.T @ rep.form @ M == rep.form).all():
        raise InputError("composed action does not preserve the form")
    return M


def _is_prime(p):
    return p >= 2 and all(p % q for q in range(2, isqrt(p) + 1))


def congruence_certificate(p1, p2, rep, c_class, f1=None, f2=None, m_range=(2, 1000), c2_class=None):
    """Level-``m`` membership of ``f1^p1`` and ``f2^p2`` for every ``m`` in ``m_range``.

    ``f1`` and ``f2`` default to the single twist about ``c_class`` (and
    ``c2_class``, defaulting to ``c_class``).  Each power must act on
    homology like the matching transvection power; then membership in the
    level-``m`` kernel is compared with ``m | p`` for each ``m``.
    """
    if p1 == p2:
        raise ParameterError("p1 and p2 must differ")
    for p in (p1, p2):
        if not _is_prime(p):
            raise ParameterError(f"{p} is not prime")
    c = _class_vector(rep, c_class)
    c2 = _class_vector(rep, c2_class) if c2_class is not None else c
    for v in (c, c2):
        if not v.any():
            raise ParameterError("the curve class must be nonzero")
        if gcd(*map(int, v)) != 1:
            raise ParameterError("the curve class must be primitive")
    f1 = f1 if f1 is not None else [(c, 1)]
    f2 = f2 if f2 is not None else [(c2, 1)]
    lo, hi = m_range
    if lo < 1 or hi < lo:
        raise ParameterError(f"bad m range {m_range}")

    def power_action(w, p, cls):
        M = np.linalg.matrix_power(homology_twist_action(rep, w), p)
        T = transvection(rep, cls, p)
        return M, bool((M == T).all())

    M1, same1 = power_action(f1, p1, c)
    M2, same2 = power_action(f2, p2, c2)
    D1 = np.abs(M1 - np.eye(rep.rank, dtype=np.int64))
    D2 = np.abs(M2 - np.eye(rep.rank, dtype=np.int64))
    g1 = gcd(*map(int, D1.ravel()))
    g2 = gcd(*map(int, D2.ravel()))
    table = []
    mismatches = []
    both = []
    for m in range(lo, hi + 1):
        in1 = bool((D1 % m == 0).all())
        in2 = bool((D2 % m == 0).all())
        div1, div2 = p1 % m == 0, p2 % m == 0
        table.append([m, in1, in2])
        if in1 != div1 or in2 != div2:
            mismatches.append(m)
        if in1 and in2 and m > 1:
            both.append(m)
    ok = same1 and same2 and not mismatches and not both
    return {
        "p1": p1,
        "p2": p2,
        "m_range": [lo, hi],
        "power_matches_transvection": [same1, same2],
        "entry_gcd": [g1, g2],
        "iff_divides": not mismatches,
        "mismatches": mismatches,
        "levels_containing_both": both,
        "ok": ok,
        "conclusion": (
            "no proper level-m subgroup contains N" if ok else "certificate failed"
        ),
        "extension": (
            f"M - I has entry gcd {g1} (resp. {g2}), so level-m membership holds exactly when m divides it, for every m"
        ),
        "table": [row for row in table if row[1] or row[2]],
    }


# -- dihedral parity -----------------------------------------------------------

def _dmul(x, y, g):
    """``r^a k^s f^e`` triples; ``k r k = r^-1`` and ``f`` is central."""
    a, s, e = x
    b, t, u = y
    return ((a + (-b if s else b)) % g, s ^ t, e + u)


def _dinv(x, g):
    a, s, e = x
    return ((a if s else -a) % g, s, -e)


def _dpow(x, n, g):
    out = (0, 0, 0)
    base = x if n >= 0 else _dinv(x, g)
    for _ in range(abs(n)):
        out = _dmul(out, base, g)
    return out


def dihedral_power_commutator(g, n):
    """``[r, h^n] = r h^n r^-1 h^-n`` with ``h = k f`` in ``D_2g x <f>``.

    Returns ``(rotation exponent, reflection bit)`` together with ``h^n``.
    """
    if g < 3:
        raise ParameterError("need g >= 3")
    r = (1, 0, 0)
    h = (0, 1, 1)
    hn = _dpow(h, n, g)
    comm = _dmul(_dmul(_dmul(r, hn, g), _dinv(r, g), g), _dinv(hn, g), g)
    if comm[2] != 0:
        raise AssertionError("central factor failed to cancel")
    return (comm[0], comm[1]), hn


def _perm(g, a, s):
    """``r^a k^s`` on the vertices of a ``2g``-gon: ``r: i -> i+2``, ``k: i -> -i``."""
    N = 2 * g
    idx = np.arange(N)
    kk = (-idx) % N if s else idx
    return (kk + 2 * a) % N


def dihedral_permutation_commutator(g, n):
    """The same commutator computed with permutations of a ``2g``-gon.

    ``f`` is sent to the half-turn ``i -> i + g``, which is central.
    """
    N = 2 * g
    idx = np.arange(N)
    r = (idx + 2) % N
    k = (-idx) % N
    f = (idx + g) % N
    compose = lambda p, q: p[q]  # (p o q)(i) = p(q(i))
    inv = lambda p: np.argsort(p)
    h = compose(k, f)
    hn = idx.copy()
    for _ in range(n):
        hn = compose(hn, h)
    comm = compose(compose(compose(r, hn), inv(r)), inv(hn))
    for a in range(g):
        for s in (0, 1):
            if (comm == _perm(g, a, s)).all():
                return (a, s)
    raise AssertionError("commutator is not a dihedral element")


# -- partitions and swaps ------------------------------------------------------

def _check_partition(P, name):
    blocks = [frozenset(b) for b in P]
    if any(not b for b in blocks):
        raise InputError(f"{name} has an empty block")
    seen = set()
    for b in blocks:
        if seen & b:
            raise InputError(f"{name} has overlapping blocks")
        seen |= b
    return blocks, seen


def partition_compatible(P1, P2):
    """Every block of each partition contains or lies in some block of the other.

    Returns ``(compatible, witness)``; ``witness`` is an offending block or ``None``.
    """
    B1, U1 = _check_partition(P1, "P1")
    B2, U2 = _check_partition(P2, "P2")
    if U1 != U2:
        raise InputError("the partitions cover different sets")
    for X, Y, side in ((B1, B2, "P1"), (B2, B1, "P2")):
        for b in X:
            if not any(b <= c or c <= b for c in Y):
                return False, {"side": side, "block": sorted(b)}
    return True, None


def swap_impossible(A, B):
    """No symmetry can exchange two multicurves with different numbers of curves."""
    return len(A) != len(B)
