import json

import numpy as np
import pytest

from oriflag.bruhat import involution_action
from oriflag.errors import NotProximalError
from oriflag.flags import canonicalize
from oriflag.ideals import enumerate_balanced
from oriflag.domain import (
    RasterImage, attracting_flag, cyclically_reduced, equirect_points, k_membership,
    k_membership_points, line_class_table, load_group_spec, reduced_words, render_sphere,
    sample_limit_set, schottky_example, sphere_grid, sphere_space,
)
from oriflag.representations import irreducible_rep
from oriflag.weyl import antidiag


@pytest.fixture(scope="module")
def sphere_ideals():
    space = sphere_space(3)
    census = enumerate_balanced(space, involution_action(space, antidiag([1, -1, 1])))
    return space, census.ideals


def random_sl2(rng):
    A = rng.normal(size=(2, 2))
    if np.linalg.det(A) < 0:
        A[:, 0] *= -1
    return A / np.sqrt(np.linalg.det(A))


def test_word_counts():
    assert len(reduced_words(2, 1)) == 4
    assert len(reduced_words(2, 3)) == 4 + 12 + 36
    assert cyclically_reduced((1, 2, -1, 2))
    assert not cyclically_reduced((1, 2, -1))


def test_sample_counts_without_powers():
    spec = schottky_example()
    assert [len(sample_limit_set(spec, L)) for L in (1, 2, 3, 4)] == [4, 12, 36, 108]


def test_attracting_flag_of_diagonal():
    assert np.allclose(attracting_flag(np.diag([4.0, 1.0, 0.25])).rep, np.eye(3))
    expected = np.array([[0, 0, 1], [0, -1, 0], [1, 0, 0]], dtype=float)
    assert np.allclose(attracting_flag(np.diag([0.25, 1.0, 4.0])).rep, expected)


def test_rotation_is_not_proximal():
    with pytest.raises(NotProximalError):
        attracting_flag(irreducible_rep(3, ((0, -1), (1, 0)), exact=False))


def test_equivariance_inside_irreducible_image():
    rng = np.random.default_rng(0)
    checked = 0
    for _ in range(50):
        a = irreducible_rep(3, random_sl2(rng), exact=False)
        g = irreducible_rep(3, random_sl2(rng) @ np.diag([3.0, 1 / 3]) @ random_sl2(rng), exact=False)
        if abs(np.trace(g)) < 3.5:
            continue
        lhs = attracting_flag(a @ g @ np.linalg.inv(a))
        rhs = canonicalize(a @ attracting_flag(g).rep)
        assert lhs.close_to(rhs, 1e-6)
        checked += 1
    assert checked > 10


def test_conjugated_diagonal_up_to_signs():
    rng = np.random.default_rng(4)
    for _ in range(20):
        h = rng.normal(size=(3, 3))
        h[:, 0] *= np.sign(np.linalg.det(h))
        f = attracting_flag(h @ np.diag([5.0, 1.0, 0.2]) @ np.linalg.inv(h))
        c = canonicalize(h)
        assert np.allclose(np.abs(f.rep), np.abs(c.rep), atol=1e-6)


def test_samples_lie_on_the_veronese_curve():
    # limit lines of a group inside iota_3(SL2) satisfy x0 x2 = x1^2 / 2 in this basis
    for s in sample_limit_set(schottky_example(), 4):
        x = s.flag.rep[:, 0]
        assert abs(x[0] * x[2] - x[1] ** 2 / 2) < 1e-8


def test_sphere_space_structure(sphere_ideals):
    space, ideals = sphere_ideals
    assert len(space) == 4
    assert line_class_table(space).tolist() == [[0, 0], [1, 2], [3, 3]]
    assert len(ideals) == 2


def test_limit_point_is_in_k(sphere_ideals):
    space, ideals = sphere_ideals
    samples = sample_limit_set(schottky_example(), 3)
    for s in samples[:10]:
        assert k_membership(s.flag.rep[:, 0], samples, ideals[0])
        assert k_membership(-s.flag.rep[:, 0], samples, ideals[0])


def test_membership_grows_with_length(sphere_ideals):
    _, ideals = sphere_ideals
    spec = schottky_example()
    pts = sphere_grid(2000)
    prev = None
    for L in (2, 3, 4, 5):
        flags = np.array([s.flag.rep for s in sample_limit_set(spec, L)])
        cur = k_membership_points(pts, flags, ideals[0], tol=0.02)
        if prev is not None:
            assert not (prev & ~cur).any()
        prev = cur


def test_render_is_deterministic(sphere_ideals):
    _, ideals = sphere_ideals
    spec = schottky_example()
    a = render_sphere(spec, 3, ideals[0], width=40, height=20)
    b = render_sphere(spec, 3, ideals[0], width=40, height=20)
    assert a.pixels == b.pixels
    assert a.to_ppm().startswith(b"P6\n40 20\n255\n")
    assert 0 < a.mask().sum() < 40 * 20


def test_render_rejects_other_dimensions(sphere_ideals):
    _, ideals = sphere_ideals
    spec = load_group_spec({"n": 5, "rank": 1, "via": "irreducible", "generators": [[[2, 0], [0, 0.5]]]})
    with pytest.raises(ValueError):
        render_sphere(spec, 2, ideals[0])


def test_raster_validation():
    with pytest.raises(ValueError):
        RasterImage(2, 2, b"\x00" * 5)
    with pytest.raises(ValueError):
        RasterImage(0, 2, b"")


def test_equirect_points_are_unit():
    p = equirect_points(8, 4)
    assert p.shape == (32, 3)
    assert np.allclose(np.linalg.norm(p, axis=1), 1.0)


def test_load_group_spec():
    doc = {"n": 3, "rank": 2, "via": "irreducible",
           "generators": [[[2, 0], [0, 0.5]], [[1.25, 0.75], [0.75, 1.25]]]}
    spec = load_group_spec(json.dumps(doc))
    assert spec.n == 3 and spec.rank == 2
    assert np.allclose(spec.word_matrix((1, -1)), np.eye(3))
    with pytest.raises(ValueError):
        load_group_spec({"n": 3, "rank": 1, "via": "direct", "generators": [np.diag([2, 1, 1]).tolist()]})
