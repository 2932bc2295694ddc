from fractions import Fraction

import numpy as np
import pytest

from oriflag.flags import bruhat_factorize
from oriflag.representations import (
    ROT90, block_embedding, block_spec, block_transversality, exponents,
    hitchin_w0, interlacer, irreducible_rep, wk_formula,
)
from oriflag.weyl import antidiag, canonicalize_transverse_under_conjugation, compose, to_matrix


def rot(t):
    return np.array([[np.cos(t), -np.sin(t)], [np.sin(t), np.cos(t)]])


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_irreducible_rep_is_homomorphism(n):
    rng = np.random.default_rng(n)
    for _ in range(10):
        A = rng.normal(size=(2, 2))
        B = rng.normal(size=(2, 2))
        lhs = irreducible_rep(n, A @ B, exact=False)
        rhs = irreducible_rep(n, A, exact=False) @ irreducible_rep(n, B, exact=False)
        assert np.allclose(lhs, rhs)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_rotations_go_to_rotations(n):
    R = irreducible_rep(n, rot(0.7), exact=False)
    assert np.allclose(R.T @ R, np.eye(n))
    assert np.isclose(np.linalg.det(R), 1.0)


def test_exact_for_signed_permutations():
    M = irreducible_rep(3, ROT90)
    assert M.dtype == object
    assert all(isinstance(x, Fraction) for x in M.ravel())
    assert to_matrix(bruhat_factorize(M.tolist())) == [[0, 0, 1], [0, -1, 0], [1, 0, 0]]


def test_unipotent_needs_floats():
    M = irreducible_rep(3, ((1, 1), (0, 1)))
    assert M.dtype == float
    assert np.isclose(M[0, 1], np.sqrt(2))


def test_diagonal_image():
    M = irreducible_rep(4, ((2, 0), (0, Fraction(1, 2))))
    assert [M[i, i] for i in range(4)] == [8, 2, Fraction(1, 2), Fraction(1, 8)]


def test_hitchin_w0_n3():
    assert hitchin_w0(3) == antidiag([1, -1, 1])


@pytest.mark.parametrize("n", range(2, 10))
def test_hitchin_w0_matches_rotation(n):
    w = bruhat_factorize(irreducible_rep(n, ROT90).tolist(), projective=n % 2 == 0)
    assert w == hitchin_w0(n)


@pytest.mark.parametrize("n", [3, 5, 7, 9])
def test_block_formula(n):
    for k in range(0, n):
        computed, formula = block_transversality(n, k)
        assert computed == formula


@pytest.mark.parametrize("n", [3, 5, 7, 9])
def test_wk_squares_to_rotation_image(n):
    # w_k^2 is the image of -1, moved into place by the interlacing permutation
    for k in range(1, n):
        w = wk_formula(n, k)
        square = np.array(to_matrix(compose(w, w)))
        m = np.array(block_embedding(n, k, ((-1, 0), (0, -1))), dtype=float)
        Z = np.array(to_matrix(interlacer(n, k)), dtype=float)
        assert np.array_equal(square, Z @ m @ Z.T)


def test_block_embedding_shape():
    M = block_embedding(5, 2, ROT90)
    assert M.shape == (5, 5)
    assert np.all(M[:2, 2:] == 0) and np.all(M[2:, :2] == 0)
    with pytest.raises(ValueError):
        block_embedding(5, 5, ROT90)


def test_exponents_and_interlacer():
    assert exponents(5, 2) == [1, -1, 2, 0, -2]
    z = interlacer(5, 2)
    D = np.diag([2.0 ** e for e in exponents(5, 2)])
    Z = np.array(to_matrix(z), dtype=float)
    d = np.diag(Z @ D @ Z.T)
    assert np.all(np.diff(d) < 0)
    with pytest.raises(ValueError):
        interlacer(4, 2)


def test_block_spec_validation():
    assert block_spec(7, 2).delta == (-1) ** 2
    with pytest.raises(ValueError):
        block_spec(6, 2)
    with pytest.raises(ValueError):
        block_spec(5, 0)


def test_block_types_n5():
    canon = [str(canonicalize_transverse_under_conjugation(wk_formula(5, k))[0]) for k in range(1, 5)]
    assert canon == ["-5 -4 +3 +2 +1", "+5 -4 -3 +2 +1", "+5 -4 -3 +2 +1", "-5 -4 +3 +2 +1"]
    assert str(canonicalize_transverse_under_conjugation(hitchin_w0(5))[0]) == "+5 +4 +3 +2 +1"
