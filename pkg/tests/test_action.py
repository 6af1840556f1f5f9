from fractions import Fraction

import pytest

from windmills.action import (
    EquivariantFamily,
    check_equivariance,
    check_invariance,
    check_spinning,
    permutation_action,
    subgroup_elements,
    symmetrize,
)
from windmills.errors import InputError, TruncationError
from windmills.instances import Z3Z3Tree
from windmills.metric import DistanceSystem
from windmills.trees import Tree, tree_distance_system

# a star with centre 0; the generator rotates the three leaves
STAR = Tree([0, 1, 2, 3], [(0, 1), (0, 2), (0, 3)])
ROT = {"a": [0, 2, 3, 1]}


@pytest.fixture
def star():
    return permutation_action(ROT), tree_distance_system(STAR)


def test_permutation_action_basics(star):
    a, _ = star
    assert a.act("a", 1) == 2
    assert a.act("A", 1) == 3
    assert a.act("aA", 2) == 2
    assert a.is_trivial("aaa") is True
    assert a.is_trivial("aa") is False
    assert a.closed()
    with pytest.raises(InputError):
        permutation_action({"a": [0, 0, 1]})
    with pytest.raises(InputError):
        permutation_action({"ab": [0, 1]})


def test_strict_action_detects_leaving_truncation():
    inst = Z3Z3Tree()
    a = inst.action(inst.ball(1)).restricted(inst.ball(1))
    a.word_rule = None
    with pytest.raises(TruncationError):
        a.act("rsr", inst.root, strict=True)


def test_invariance_of_the_star_system(star):
    a, ds = star
    rep = check_invariance(a, ds, 3)
    assert rep["ok"] and rep["checked"] > 0


def test_invariance_catches_a_non_invariant_system(star):
    a, ds = star
    num = ds.num.copy()
    num[1, 2, 3] = num[1, 3, 2] = 1  # not matched by d_2(3, 1)
    bad = DistanceSystem(num)
    rep = check_invariance(a, bad, 1)
    assert not rep["ok"] and rep["violations"]


def test_equivariance_of_bfs_transported_family(star):
    a, _ = star
    fam = EquivariantFamily({0: ["a"], 1: []})
    assert fam.generators(2, a) == []
    rep = check_equivariance(fam, a, 3)
    assert rep["ok"]


def test_equivariance_failure_is_reported():
    a = permutation_action({"a": [1, 0, 2]})
    # a swaps 0 and 1, so R_1 must be a R_0 a^-1 = <a>, not the trivial group
    fam = EquivariantFamily({0: ["a"], 1: [], 2: []})
    rep = check_equivariance(fam, a, 1)
    assert not rep["ok"]


def test_subgroup_elements_of_a_rotation(star):
    a, _ = star
    elems, skipped = subgroup_elements(a, ["a"], 5)
    assert elems == ["a", "aa"]
    assert skipped == 0


def test_spinning_on_the_star(star):
    a, ds = star
    fam = EquivariantFamily({0: ["a"], 1: []})
    rep = check_spinning(fam, a, ds, 1, 3, tree=STAR.neighbors)
    assert rep.pass_ and rep.L_measured == 1 and rep.tree_condition
    too_much = check_spinning(fam, a, ds, 2, 3)
    assert not too_much.pass_ and too_much.witness["d"] == 1


def test_spinning_with_witness_subset(star):
    a, ds = star
    fam = EquivariantFamily({0: ["a"], 1: []})
    rep = check_spinning(fam, a, ds, 1, 3, vertices=[0], witnesses=[1])
    assert rep.tested == 2 and rep.L_measured == 1


def test_spinning_without_nontrivial_elements_is_vacuous(star):
    a, ds = star
    rep = check_spinning(EquivariantFamily({0: [], 1: []}), a, ds, 5, 2)
    assert rep.pass_ and rep.L_measured is None


def test_symmetrize_over_an_orbit(star):
    a, _ = star
    fam = {1: ["a"], 2: [], 3: []}
    out, produced = symmetrize(fam, a, [([1, 2, 3], ["", "a", "aa"])])
    assert produced == 3
    assert out[2] == [a.reduce("a" + "a" + "A")]
    with pytest.raises(InputError):
        symmetrize(fam, a, [([1, 2], ["", "aa"])])


def test_z3_family_is_equivariant():
    inst = Z3Z3Tree()
    a = inst.action(inst.ball(3))
    assert check_equivariance(inst.family(), a, 2)["ok"]
    rep = check_spinning(inst.family(), a, inst.d, Fraction(1), 2, vertices=inst.ball(1), witnesses=inst.ball(3))
    assert rep.pass_ and rep.L_measured == 1
