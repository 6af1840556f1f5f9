from fractions import Fraction
import random

import pytest
from sympy.combinatorics.prufer import Prufer

from windmills.errors import InputError, ParameterError, TruncationError
from windmills.trees import (
    AxisBundle,
    Tree,
    TreeIsometry,
    axis_distance_system,
    axis_of,
    distance_formula_check,
    free_group_ball,
    nearest_point_projection,
    projection_table,
    random_tree,
    word_isometry,
)
from windmills.words import power


def test_random_tree_agrees_with_sympy_prufer_decoding():
    # replay the same Pruefer sequence through sympy's decoder
    for seed in range(20):
        rng = random.Random(seed)
        n = rng.randint(3, 30)
        t = random_tree(n, rng)
        rng2 = random.Random(seed)
        rng2.randint(3, 30)
        code = [rng2.randrange(n) for _ in range(n - 2)]
        ours = {frozenset(e) for e in t.edges}
        theirs = {frozenset(e) for e in Prufer.to_tree(code)}
        assert ours == theirs


def test_small_random_trees():
    rng = random.Random(0)
    assert random_tree(1, rng).n == 1
    assert random_tree(2, rng).edges == [(0, 1)]


def test_tree_validation():
    with pytest.raises(InputError):
        Tree([0, 1, 2], [(0, 1)])
    with pytest.raises(InputError):
        Tree([0, 1, 2, 3], [(0, 1), (1, 0), (2, 3)])
    with pytest.raises(InputError):
        Tree([0, 0], [])


def test_geodesic_and_boundary():
    t = free_group_ball(2)
    assert t.n == 1 + 4 + 12
    assert t.geodesic("ab", "B") == ["ab", "a", "", "B"]
    assert len(t.boundary()) == 12
    with pytest.raises(TruncationError):
        t.index("aaa")


def test_nearest_point_projection():
    t = free_group_ball(3)
    line = ["A", "", "a"]
    assert nearest_point_projection(t, line, "ab") == ["a"]
    assert nearest_point_projection(t, line, "bA") == [""]


def test_axis_of_translation_and_elliptic():
    t = free_group_ball(4)
    ax = axis_of(t, word_isometry("ab"))
    assert ax.translation_length == 2
    assert "" in ax.vertices and "ab" in ax.vertices and "BA" in ax.vertices
    ident = TreeIsometry(lambda v: v, lambda v: v, "1")
    assert axis_of(t, ident) == "elliptic"


def test_axis_of_conjugate_is_translated():
    t = free_group_ball(4)
    ax = axis_of(t, word_isometry("baB"))
    assert ax.translation_length == 1
    assert set(ax.vertices) == {"b" + power("a", k) for k in range(-3, 4)}


def test_axis_distance_system_on_disjoint_lines():
    t = free_group_ball(3)
    axes = [AxisBundle(["A", "", "a"], "a"), AxisBundle(["bA", "b", "ba"], "bab")]
    ds = axis_distance_system(t, axes)
    assert ds.n == 2 and ds.theta == 0
    P = projection_table(t, axes)
    assert t.vertices[P[0, t.index("ba")]] == ""


def test_distance_formula_on_a_single_axis():
    t = free_group_ball(3)
    axes = [axis_of(t, word_isometry("a"))]
    rep = distance_formula_check(t, axes)
    assert rep.holds and rep.M == 1
    # the a-line alone: the sum is the projected distance, at most d(x, y)
    assert rep.min_slack >= 0


def test_coincident_axes_are_rejected():
    t = free_group_ball(2)
    with pytest.raises(ParameterError):
        distance_formula_check(t, [axis_of(t, word_isometry("a")), axis_of(t, word_isometry("aa"))])


def test_sampled_pairs():
    t = free_group_ball(2)
    axes = [axis_of(t, word_isometry("a")), axis_of(t, word_isometry("b"))]
    rep = distance_formula_check(t, axes, samples=[("aa", "bb"), ("A", "B")])
    assert rep.pairs == 2 and rep.holds
    assert rep.delta == 0 and rep.M == Fraction(1)
