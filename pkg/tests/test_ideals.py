import itertools
import json

import numpy as np
import pytest

from oriflag import errors
from oriflag.bruhat import involution_action, make_parabolic_type, position_space
from oriflag.domain import sphere_space
from oriflag.ideals import (
    Ideal, census_to_json, down_closure, enumerate_balanced, grassmannian_exists,
    grassmannian_fixed_point_oracle, is_balanced, is_fat, is_ideal, is_slim,
    minimal_fat_ideal, right_translate,
)
from oriflag.weyl import GroupContext, antidiag, compose, diag, mbar_elements


def sl3():
    space = position_space(GroupContext(3))
    return space, involution_action(space, antidiag([1, -1, 1]))


def brute_force_balanced(space, action):
    """Every choice of one class per orbit, kept when downward closed."""
    orbits = sorted({(min(i, action(i)), max(i, action(i))) for i in range(len(space))})
    found = set()
    for pick in itertools.product((0, 1), repeat=len(orbits)):
        mask = sum(1 << o[p] for o, p in zip(orbits, pick))
        if is_ideal(space, mask):
            found.add(mask)
    return found


def test_sl3_census():
    space, act = sl3()
    census = enumerate_balanced(space, act)
    assert census.count == 21
    assert len(census.mbar_classes) == 7
    assert sorted(i for block in census.mbar_classes for i in block) == list(range(21))
    assert {I.members for I in census.ideals} == brute_force_balanced(space, act)


def test_sl3_case_ii_single_ideal():
    ctx = GroupContext(3)
    w0 = antidiag([-1, 1, 1])
    R = make_parabolic_type(ctx, [], [compose(w0, w0)])
    space = position_space(ctx, R)
    act = involution_action(space, w0)
    census = enumerate_balanced(space, act)
    assert census.count == 1
    assert {I.members for I in census.ideals} == brute_force_balanced(space, act)


def test_sphere_space_two_ideals():
    space = sphere_space(3)
    act = involution_action(space, antidiag([1, -1, 1]))
    census = enumerate_balanced(space, act)
    assert [I.labels() for I in census.ideals] == [["+1 +2 +3", "+2 +1 -3"], ["+1 +2 +3", "-2 +1 +3"]]


def test_shuffle_does_not_change_result():
    space, act = sl3()
    base = enumerate_balanced(space, act)
    for seed in range(5):
        assert enumerate_balanced(space, act, shuffle_seed=seed).ideals == base.ideals


def test_every_census_member_is_balanced():
    space, act = sl3()
    for I in enumerate_balanced(space, act).ideals:
        assert is_balanced(I, act)
        assert is_fat(I, act) and is_slim(I, act)
        assert len(I) == len(space) // 2


def test_right_mbar_translation_keeps_balanced():
    space, act = sl3()
    census = enumerate_balanced(space, act)
    members = {I.members for I in census.ideals}
    for I in census.ideals:
        for m in mbar_elements(space.ctx):
            J = right_translate(I, m)
            assert J.members in members


def test_not_an_ideal_raises():
    space, act = sl3()
    top = len(space) - 1
    with pytest.raises(errors.NotAnIdealError):
        is_fat(Ideal(space, 1 << top), act)
    assert is_ideal(space, down_closure(space, 1 << top))


def test_minimal_fat_ideal_is_balanced():
    space, act = sl3()
    I = minimal_fat_ideal(space, act)
    assert is_balanced(I, act)


def test_fixed_point_cases():
    ctx = GroupContext(3)
    S = make_parabolic_type(ctx, [1], mbar_elements(ctx))
    space = position_space(ctx, None, S)
    act = involution_action(space, antidiag([1, -1, 1]))
    assert act.fixed_points()
    assert enumerate_balanced(space, act).count == 0
    with pytest.raises(errors.FixedPointError):
        minimal_fat_ideal(space, act)


def test_projective_sl4_census_count():
    space = position_space(GroupContext(4, projective=True))
    w0 = antidiag([1, -1, 1, -1], projective=True)
    census = enumerate_balanced(space, involution_action(space, w0))
    assert census.count == 4732
    assert len(census.mbar_classes) == 1240


@pytest.mark.parametrize("n", range(3, 9))
def test_grassmannian_rule(n):
    for k in range(1, n):
        stated = (n % 2 == 0 and k % 2 == 1) or (n % 2 == 1 and (k * (n + k + 2) // 2) % 2 == 1)
        assert grassmannian_exists(n, k) == stated
        assert grassmannian_fixed_point_oracle(n, k) == stated


def test_grassmannian_range():
    with pytest.raises(ValueError):
        grassmannian_exists(4, 4)
    with pytest.raises(ValueError):
        grassmannian_fixed_point_oracle(2, 0)


def test_census_json():
    space, act = sl3()
    doc = json.loads(census_to_json(enumerate_balanced(space, act)))
    assert doc["count"] == 21
    assert len(doc["mbar_classes"]) == 7


def test_balanced_needs_half_size_even_with_extra_E():
    ctx = GroupContext(3)
    R = make_parabolic_type(ctx, [], [diag([-1, 1, -1])])
    space = position_space(ctx, R)
    act = involution_action(space, antidiag([1, -1, 1]))
    census = enumerate_balanced(space, act)
    assert {I.members for I in census.ideals} == brute_force_balanced(space, act)
    assert all(len(I) * 2 == len(space) for I in census.ideals)


@pytest.mark.parametrize("n", range(3, 9))
def test_grassmannian_rule_against_matrix_action(n):
    # the antidiagonal transversality type acting on oriented coordinate k-planes;
    # a fixed plane is one mapped to itself with the same orientation
    W = np.zeros((n, n))
    for j in range(1, n + 1):
        W[n - j, j - 1] = (-1) ** (j + 1)
    eye = np.eye(n)
    for k in range(1, n):
        fixed = False
        for subset in itertools.combinations(range(n), k):
            cols = list(subset)
            image = W[:, cols]
            if set(np.nonzero(image)[0]) != set(cols):
                continue
            if np.linalg.det(eye[:, cols].T @ image) > 0:
                fixed = True
        assert grassmannian_exists(n, k) == (not fixed)
