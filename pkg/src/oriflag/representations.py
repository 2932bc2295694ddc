"""
The irreducible representation SL(2) -> SL(n) on Sym^{n-1} R^2 in the
orthonormal basis e_i = sqrt(C(n-1, i-1)) X^{n-i} Y^{i-1}, block embeddings
A -> diag(iota_k(A), iota_{n-k}(A)), and the transversality types they
produce.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np

from .errors import VerificationError
from .flags import bruhat_factorize
from .weyl import (
    SignedPermutation, _make, antidiag, canonicalize_transverse_under_conjugation,
    compose, from_matrix, inverse, is_transverse, to_matrix,
)

__all__ = [
    "ROT90", "irreducible_rep", "block_embedding", "interlacer", "BlockSpec",
    "block_spec", "wk_formula", "block_transversality", "hitchin_w0",
    "exponents",
]

ROT90 = ((0, 1), (-1, 0))


def _exact_square_root(q: Fraction) -> Fraction | None:
    num, den = q.numerator, q.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


def _poly_pow(a, c, m: int) -> list:
    # coefficients of Y^t in (aX + cY)^m
    return [math.comb(m, t) * a ** (m - t) * c ** t for t in range(m + 1)]


def _convolve(p: list, q: list) -> list:
    out = [0] * (len(p) + len(q) - 1)
    for i, x in enumerate(p):
        if x:
            for j, y in enumerate(q):
                out[i + j] += x * y
    return out


def irreducible_rep(n: int, A, exact: bool | None = None) -> np.ndarray:
    """Matrix of Sym^{n-1}(A) in the orthonormal monomial basis.

    With rational input the result is an object array of Fractions when
    every entry is rational (e.g. for signed permutation or diagonal A);
    otherwise a float array.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    (a, b), (c, d) = [tuple(row) for row in A]
    rational = all(isinstance(x, Rational) for x in (a, b, c, d))
    if exact is None:
        exact = rational
    if exact and not rational:
        raise ValueError("exact mode needs rational entries")
    if exact:
        a, b, c, d = (Fraction(x) for x in (a, b, c, d))
    else:
        a, b, c, d = (float(x) for x in (a, b, c, d))
    binom = [math.comb(n - 1, i) for i in range(n)]
    out = [[0] * n for _ in range(n)]
    float_needed = False
    for j in range(n):
        # image of X^{n-1-j} Y^j, j = 0..n-1
        coeffs = _convolve(_poly_pow(a, c, n - 1 - j), _poly_pow(b, d, j))
        for i in range(n):
            x = coeffs[i]
            if exact:
                if x == 0:
                    out[i][j] = Fraction(0)
                    continue
                r = _exact_square_root(Fraction(binom[j], binom[i]))
                if r is None:
                    float_needed = True
                    out[i][j] = float(x) * math.sqrt(binom[j] / binom[i])
                else:
                    out[i][j] = x * r
            else:
                out[i][j] = x * math.sqrt(binom[j] / binom[i])
    if exact and not float_needed:
        return np.array(out, dtype=object)
    return np.array(out, dtype=float)


def block_embedding(n: int, k: int, A) -> np.ndarray:
    """diag(iota_k(A), iota_{n-k}(A)); k = 0 gives iota_n(A)."""
    if not 0 <= k <= n - 1:
        raise ValueError(f"need 0 <= k <= n-1, got k={k}, n={n}")
    if k == 0:
        return irreducible_rep(n, A)
    top = irreducible_rep(k, A)
    bot = irreducible_rep(n - k, A)
    dtype = object if top.dtype == object and bot.dtype == object else float
    out = np.zeros((n, n), dtype=dtype)
    if dtype == object:
        out[:] = Fraction(0)
    out[:k, :k] = top
    out[k:, k:] = bot
    return out


def exponents(n: int, k: int) -> list[int]:
    """Exponents of lambda on the diagonal of b_k(diag(lambda, 1/lambda))."""
    if k == 0 or k == n:
        return [n - 1 - 2 * i for i in range(n)]
    return [k - 1 - 2 * i for i in range(k)] + [n - k - 1 - 2 * i for i in range(n - k)]


def interlacer(n: int, k: int) -> SignedPermutation:
    """Signed permutation z with z g_lambda z^-1 diagonal and decreasing."""
    ex = exponents(n, k)
    if len(set(ex)) != len(ex):
        raise ValueError(f"repeated exponents for n={n}, k={k}; needs n odd")
    order = sorted(range(n), key=lambda j: -ex[j])
    perm = [0] * n
    for rank, j in enumerate(order, start=1):
        perm[j] = rank
    signs = [1] * n
    inv = sum(1 for x in range(n) for y in range(x + 1, n) if perm[x] > perm[y])
    if inv % 2:
        signs[-1] = -1
    return _make(perm, signs)


@dataclass(frozen=True)
class BlockSpec:
    n: int
    k: int
    q: int
    Q: int
    delta: int


def block_spec(n: int, k: int) -> BlockSpec:
    if n < 3 or n % 2 == 0:
        raise ValueError(f"block types need odd n >= 3, got {n}")
    if not 1 <= k <= n - 1:
        raise ValueError(f"need 1 <= k <= n-1, got {k}")
    q, Q = min(k, n - k), max(k, n - k)
    delta = (-1) ** ((k - 1) // 2) if k % 2 else (-1) ** ((n - k - 1) // 2)
    return BlockSpec(n, k, q, Q, delta)


def wk_formula(n: int, k: int) -> SignedPermutation:
    """The closed-form antidiagonal w_k built from the J, delta, K, L blocks."""
    s = block_spec(n, k)
    J = [1] * ((n - 1) // 2)
    K = [(-1) ** (t + 1) for t in range(s.q - 1)]
    L = [(-1) ** (s.Q - 1)] * ((s.Q - s.q + 1) // 2)
    signs = J + [s.delta] + K + L
    assert len(signs) == n
    return antidiag(signs)


def _as_signed_perm(M: np.ndarray, projective: bool = False) -> SignedPermutation:
    return from_matrix([[int(x) for x in row] for row in M], projective)


def block_transversality(n: int, k: int) -> tuple[SignedPermutation, SignedPermutation]:
    """(computed, formula) canonical forms of w_k; raises on mismatch."""
    z = interlacer(n, k)
    b = _as_signed_perm(block_embedding(n, k, ROT90))
    conj = compose(compose(z, b), inverse(z))
    w = bruhat_factorize(to_matrix(conj))
    if not is_transverse(w):
        raise VerificationError(f"z b_k(rot90) z^-1 is not transverse: {w}")
    computed = canonicalize_transverse_under_conjugation(w)[0]
    if k == 0:
        formula = canonicalize_transverse_under_conjugation(hitchin_w0(n))[0]
    else:
        formula = canonicalize_transverse_under_conjugation(wk_formula(n, k))[0]
    if computed != formula:
        raise VerificationError(f"w_k mismatch for n={n}, k={k}: computed {computed}, formula {formula}")
    return computed, formula


def hitchin_w0(n: int) -> SignedPermutation:
    """Antidiagonal with entry (n+1-j, j) = (-1)^(j+1).

    For even n this is only defined up to -1, so the projective class is
    returned; for odd n it is an honest element of SL(n).
    """
    projective = n % 2 == 0
    perm = [n + 1 - j for j in range(1, n + 1)]
    signs = [(-1) ** (j + 1) for j in range(1, n + 1)]
    return _make(perm, signs, projective)
