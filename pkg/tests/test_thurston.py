from fractions import Fraction
import random

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from windmills import thurston as th
from windmills.errors import InputError, ParameterError

Q = th.QuadraticNumber


def sympy_squarefree(n):
    out = 1
    for p, e in sympy.factorint(n).items():
        if e % 2:
            out *= p
    return out


def test_squarefree_part_against_sympy():
    rng = random.Random(11)
    sample = [1, 2, 4, 12, 49, 50, 10 ** 8 + 4] + [rng.randrange(1, 10 ** 9) for _ in range(300)]
    for n in sample:
        assert th.squarefree_part(n) == sympy_squarefree(n)


def test_vectorised_squarefree_parts_match_scalar():
    ns = np.arange(1, 2001, dtype=np.int64)
    vals = ns * ns + 4
    got = th.squarefree_parts(vals)
    assert [int(v) for v in got] == [sympy_squarefree(int(v)) for v in vals]


def test_quadratic_canonical_form():
    assert Q(0, 1, 8) == Q(0, 2, 2)
    assert Q(1, 3, 9) == Q(10)
    assert Q.sqrt(Fraction(1, 2)) == Q(0, Fraction(1, 2), 2)
    assert str(Q(1, 2, 5)) == "1 + 2*sqrt(5)"
    with pytest.raises(ParameterError):
        Q(0, 1, 2) + Q(0, 1, 3)


@given(st.integers(-20, 20), st.integers(-20, 20), st.integers(-20, 20), st.integers(-20, 20),
       st.sampled_from([2, 3, 5, 6, 7]))
def test_quadratic_field_arithmetic(a, b, c, e, d):
    x, y = Q(a, b, d), Q(c, e, d)
    assert (x + y) - y == x
    assert (x * y) == (y * x)
    if x != Q(0):
        assert x * x.inverse() == Q(1)
        assert x.norm() == a * a - b * b * d
    # sign agrees with sympy's exact evaluation
    val = sympy.Rational(a) + sympy.Rational(b) * sympy.sqrt(d)
    assert x.sign() == int(sympy.sign(val))


def test_twist_word_parsing():
    assert th.parse_twist_word("T_c T_d^-2") == [("c", 1), ("d", -2)]
    assert th.parse_twist_word("A B^(3)") == [("c", 1), ("d", 3)]
    assert th.parse_twist_word([["c", 1]]) == [("c", 1)]
    for bad in ("x", "c^0", [["c"]]):
        with pytest.raises(InputError):
            th.parse_twist_word(bad)


def test_derivative_matrices():
    assert th.derivative("c", 3).rows() == [[1, 3], [0, 1]]
    assert th.derivative("d", 3).rows() == [[1, 0], [-3, 1]]
    m = th.derivative("c d^-1", 2)
    assert m.rows() == [[5, 2], [2, 1]] and m.trace == 6
    with pytest.raises(ParameterError):
        th.derivative("c", 0)


@pytest.mark.parametrize("word,n,trace,cls", [
    ("c d", 1, 1, "periodic"),
    ("c", 1, 2, "reducible"),
    ("c d", 2, -2, "reducible"),
    ("c d", 3, -7, "pseudo_anosov"),
    ("c d^-1", 1, 3, "pseudo_anosov"),
    ("c^2 d^-1", 1, 4, "pseudo_anosov"),
])
def test_trace_rule(word, n, trace, cls):
    # tr(T_c^p T_d^q) = 2 - p q n^2 up to the global sign
    m = th.derivative(word, n)
    assert abs(m.trace) == abs(trace)
    assert th.classify_nt(m) == cls


def test_periodic_matrices_have_finite_order():
    m = th.derivative("c d", 1)
    assert m.power(6) == th.Mat2.identity()


def test_stretch_factor_is_the_leading_root():
    for n in range(1, 8):
        m = th.derivative("c d^-2", n)
        lam = th.stretch_factor(m)
        t = abs(m.trace)
        assert lam * lam - lam * t + 1 == Q(0)
        assert Q(1) < lam
    with pytest.raises(ParameterError):
        th.stretch_factor(th.derivative("c", 1))


def test_normal_independence():
    rep = th.normal_independence("c d^-1", "c d^-2", 2)
    assert rep["result"] == "independent" and rep["fields"] == [2, 6]
    same = th.normal_independence("c d^-1", "d^-1 c", 2)
    assert same["result"] == "inconclusive"


def test_standard_form_and_transvection():
    rep = th.HomologyRep.standard(2)
    J = rep.form
    assert rep.pairing(rep.classes["a1"], rep.classes["b1"]) == 1
    T = th.transvection(rep, "a1")
    assert (T.T @ J @ T == J).all()
    # x -> x + k <c, x> c with <a1, b1> = 1 moves b1 by +a1
    assert list(T @ rep.classes["b1"]) == list(rep.classes["b1"] + rep.classes["a1"])
    assert list(T @ rep.classes["a2"]) == list(rep.classes["a2"])


def test_bad_forms_are_rejected():
    with pytest.raises(InputError):
        th.HomologyRep(np.eye(2, dtype=int), {})
    with pytest.raises(InputError):
        th.HomologyRep(np.zeros((2, 2), dtype=int), {})


def test_congruence_certificate():
    rep = th.HomologyRep.standard(2)
    cert = th.congruence_certificate(5, 7, rep, "a1", m_range=(2, 60))
    assert cert["ok"] and cert["entry_gcd"] == [5, 7]
    assert cert["table"] == [[5, True, False], [7, False, True]]
    assert cert["conclusion"] == "no proper level-m subgroup contains N"


def test_congruence_rejections():
    rep = th.HomologyRep.standard(2)
    with pytest.raises(ParameterError):
        th.congruence_certificate(4, 7, rep, "a1")
    with pytest.raises(ParameterError):
        th.congruence_certificate(5, 7, rep, "sep")
    with pytest.raises(ParameterError):
        th.congruence_certificate(5, 7, rep, [2, 0, 0, 0])
    with pytest.raises(InputError):
        th.congruence_certificate(5, 7, rep, "zz")


def test_congruence_with_a_word_that_is_not_a_twist_power():
    rep = th.HomologyRep.standard(2)
    cert = th.congruence_certificate(5, 7, rep, "a1", f1=[("a1", 1), ("b1", 1)], m_range=(2, 30))
    assert not cert["ok"] and cert["power_matches_transvection"][0] is False


def test_dihedral_models():
    for g in (3, 4, 7):
        for n in range(1, 9):
            sym, hn = th.dihedral_power_commutator(g, n)
            assert sym == th.dihedral_permutation_commutator(g, n)
            assert sym == ((2 % g, 0) if n % 2 else (0, 0))
            if n % 2 == 0:
                assert hn == (0, 0, n)
    with pytest.raises(ParameterError):
        th.dihedral_power_commutator(2, 1)


def test_partitions_and_swaps():
    assert th.partition_compatible([[1, 2], [3]], [[1, 2, 3]]) == (True, None)
    ok, w = th.partition_compatible([[1, 2], [3, 4, 5]], [[1, 3], [2, 4, 5]])
    assert not ok and w == {"side": "P1", "block": [1, 2]}
    with pytest.raises(InputError):
        th.partition_compatible([[1], [1, 2]], [[1, 2]])
    with pytest.raises(InputError):
        th.partition_compatible([[1]], [[1, 2]])
    assert th.swap_impossible(["x"], ["y", "z"])
    assert not th.swap_impossible(["x"], ["y"])
