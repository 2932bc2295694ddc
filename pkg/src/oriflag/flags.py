"""
Numeric oriented flags and the signed Bruhat factorization g in B0 w B0,
where B0 is the group of upper triangular matrices with positive diagonal.

Exact inputs (ints, Fractions) are eliminated fraction-free with Python
integers, so the recovered cell is ground truth.  Float inputs go through
the same elimination with a relative zero threshold.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from numbers import Integral, Rational

import numpy as np

from .errors import DegenerateInputError
from .weyl import SignedPermutation, _make

__all__ = [
    "DEFAULT_EPS", "default_eps", "OrientedFlag", "canonicalize",
    "bruhat_factorize", "bruhat_factorize_batch", "relative_position",
    "OrientedSubspace", "oriented_sum", "oriented_intersection",
    "orientation_sign", "flag_part",
]

DEFAULT_EPS = 1e-9
# entries below NOISE_FACTOR * machine epsilon (relative) are exact zeros
NOISE_FACTOR = 1e3


def default_eps() -> float:
    env = os.environ.get("ORIFLAG_EPS")
    return float(env) if env else DEFAULT_EPS


def _is_exact(g) -> bool:
    if isinstance(g, np.ndarray):
        if g.dtype.kind in "iub":
            return True
        if g.dtype != object:
            return False
    return all(isinstance(x, (Integral, Rational)) and not isinstance(x, bool) or isinstance(x, bool)
               for row in g for x in row)


def _to_int_rows(g) -> list[list[int]]:
    rows = [[Fraction(x) for x in row] for row in g]
    den = 1
    for row in rows:
        for x in row:
            den = den * x.denominator // math.gcd(den, x.denominator)
    return [[int(x * den) for x in row] for row in rows]


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _factorize_exact(rows: list[list[int]], projective: bool) -> SignedPermutation:
    n = len(rows)
    M = [list(r) for r in rows]
    used = [False] * n
    perm, signs = [], []
    for j in range(n):
        p = -1
        for r in range(n - 1, -1, -1):
            if not used[r] and M[r][j] != 0:
                p = r
                break
        if p < 0:
            raise DegenerateInputError(f"matrix is singular (column {j + 1})")
        piv = M[p][j]
        s = _sign(piv)
        a = abs(piv)
        # rows above: row_r <- |piv| row_r - s x row_p  (upper triangular, positive diagonal)
        for r in range(p):
            x = M[r][j]
            if x:
                M[r] = [a * u - s * x * v for u, v in zip(M[r], M[p])]
                g = 0
                for u in M[r]:
                    g = math.gcd(g, u)
                if g > 1:
                    M[r] = [u // g for u in M[r]]
        # columns to the right: col_k <- |piv| col_k - s M[p][k] col_j
        for k in range(j + 1, n):
            x = M[p][k]
            if x:
                for r in range(n):
                    M[r][k] = a * M[r][k] - s * x * M[r][j]
        used[p] = True
        perm.append(p + 1)
        signs.append(s)
    return _make(perm, signs, projective)


def _noise_floor(eps: float) -> float:
    # relative size of rounding residue left by the elimination itself
    return min(eps, NOISE_FACTOR * np.finfo(float).eps)


def _factorize_float(g: np.ndarray, eps: float, snap: bool, projective: bool) -> SignedPermutation:
    M = np.array(g, dtype=float)
    n = M.shape[0]
    used = np.zeros(n, dtype=bool)
    noise = _noise_floor(eps)
    perm, signs = [], []
    for j in range(n):
        col = M[:, j]
        scale = max(np.linalg.norm(col), np.finfo(float).tiny)
        free = ~used
        live = free & (np.abs(col) > noise * scale)
        if not live.any():
            raise DegenerateInputError(f"no usable pivot in column {j + 1}")
        p = int(np.where(live)[0][-1])
        if abs(col[p]) <= eps * scale:
            if not snap:
                raise DegenerateInputError(
                    f"column {j + 1}: pivot {col[p]:.3g} is under tolerance {eps * scale:.3g}")
            big = free & (np.abs(col) > eps * scale)
            if not big.any():
                raise DegenerateInputError(f"no usable pivot in column {j + 1}")
            p = int(np.where(big)[0][-1])
        below = free.copy()
        below[: p + 1] = False
        piv = col[p]
        M[below, j] = 0.0
        factors = M[:p, j] / piv
        M[:p, :] -= np.outer(factors, M[p, :])
        M[:p, j] = 0.0
        rfac = M[p, j + 1:] / piv
        M[:, j + 1:] -= np.outer(M[:, j], rfac)
        M[p, j + 1:] = 0.0
        used[p] = True
        perm.append(p + 1)
        signs.append(1 if piv > 0 else -1)
    return _make(perm, signs, projective)


def bruhat_factorize(g, eps: float | None = None, snap: bool = False,
                     projective: bool = False) -> SignedPermutation:
    """The signed permutation w with g in B0 w B0.

    Needs det(g) > 0; only the sign pattern matters, so g need not be
    rescaled to det 1.  Integer or Fraction entries are handled exactly.
    In float mode entries at rounding-noise level count as zero.  A pivot
    with |x| <= eps * |column| is ambiguous between two cells and raises
    DegenerateInputError; with ``snap`` the next larger entry is used
    instead, which gives the smaller cell.
    """
    if _is_exact(g):
        rows = _to_int_rows(g)
        w = _factorize_exact(rows, projective)
    else:
        w = _factorize_float(np.asarray(g, dtype=float), default_eps() if eps is None else eps,
                             snap, projective)
    return w


def bruhat_factorize_batch(gs: np.ndarray, eps: float | None = None) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorised float factorization of a stack of matrices.

    Returns ``(perm, signs, ok)`` with 1-based perm rows; ``ok`` is False
    where the scalar version would raise.
    """
    eps = default_eps() if eps is None else eps
    M = np.array(gs, dtype=float)
    B, n, _ = M.shape
    used = np.zeros((B, n), dtype=bool)
    perm = np.zeros((B, n), dtype=np.int64)
    signs = np.zeros((B, n), dtype=np.int64)
    ok = np.ones(B, dtype=bool)
    idx = np.arange(B)
    rows = np.arange(n)
    noise = _noise_floor(eps)
    for j in range(n):
        col = M[:, :, j]
        scale = np.linalg.norm(col, axis=1, keepdims=True)
        free = ~used
        live = free & (np.abs(col) > noise * scale)
        has = live.any(axis=1)
        p = np.where(has, n - 1 - np.argmax(live[:, ::-1], axis=1), 0)
        below = free & (rows[None, :] > p[:, None])
        bad = ~has | (np.abs(col[idx, p]) <= eps * scale[:, 0])
        ok &= ~bad
        col[below] = 0.0
        piv = col[idx, p]
        piv = np.where(piv == 0, 1.0, piv)
        above = rows[None, :] < p[:, None]
        factors = np.where(above, col / piv[:, None], 0.0)
        prow = M[idx, p, :]
        M -= factors[:, :, None] * prow[:, None, :]
        rfac = M[idx, p, :] / piv[:, None]
        rfac[:, : j + 1] = 0.0
        M -= M[:, :, j][:, :, None] * rfac[:, None, :]
        used[idx, p] = True
        perm[:, j] = p + 1
        signs[:, j] = np.where(piv > 0, 1, -1)
    return perm, signs, ok


@dataclass(frozen=True)
class OrientedFlag:
    """A complete oriented flag, stored as the rotation Q of g = Q u."""
    rep: np.ndarray

    @property
    def n(self) -> int:
        return self.rep.shape[0]

    def part(self, k: int) -> "OrientedSubspace":
        return OrientedSubspace(self.rep[:, :k])

    def close_to(self, other: "OrientedFlag", tol: float = 1e-8) -> bool:
        return bool(np.max(np.abs(self.rep - other.rep)) < tol)


def canonicalize(g, eps: float | None = None) -> OrientedFlag:
    eps = default_eps() if eps is None else eps
    a = np.asarray(g, dtype=float)
    d = np.linalg.det(a)
    scale = np.linalg.norm(a) ** a.shape[0] if a.size else 1.0
    if abs(d) <= eps * scale:
        raise DegenerateInputError(f"determinant {d:.3g} is numerically zero")
    if d < 0:
        raise DegenerateInputError("negative determinant does not define a point of G/B0")
    q, r = np.linalg.qr(a)
    q = q * np.sign(np.diag(r))[None, :]
    return OrientedFlag(q)


def flag_part(f: OrientedFlag, k: int) -> "OrientedSubspace":
    return f.part(k)


def relative_position(F1: OrientedFlag, F2: OrientedFlag, space, eps: float | None = None,
                      snap: bool = False) -> int:
    """Class index of pos(F1, F2) in ``space``."""
    g = F1.rep.T @ F2.rep
    w = bruhat_factorize(g, eps=eps, snap=snap, projective=space.ctx.projective)
    return space.class_of[w]


@dataclass(frozen=True)
class OrientedSubspace:
    basis: np.ndarray

    def __post_init__(self):
        b = np.atleast_2d(np.asarray(self.basis, dtype=float))
        if b.shape[0] < b.shape[1]:
            raise ValueError("more basis vectors than ambient dimension")
        if b.shape[1] and np.linalg.svd(b, compute_uv=False)[-1] <= 1e-12 * max(1.0, np.linalg.norm(b)):
            raise DegenerateInputError("basis columns are linearly dependent")
        object.__setattr__(self, "basis", b)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def ambient(self) -> int:
        return self.basis.shape[0]

    def flipped(self) -> "OrientedSubspace":
        b = self.basis.copy()
        b[:, -1] *= -1
        return OrientedSubspace(b)

    def __neg__(self):
        return self.flipped()


def orientation_sign(A: OrientedSubspace, B: OrientedSubspace, tol: float = 1e-9) -> int:
    """+1 if A and B are equal oriented subspaces, -1 if opposite, 0 if the spans differ."""
    if A.dim != B.dim:
        return 0
    coeffs, *_ = np.linalg.lstsq(A.basis, B.basis, rcond=None)
    if np.max(np.abs(A.basis @ coeffs - B.basis), initial=0.0) > tol * max(1.0, np.linalg.norm(B.basis)):
        return 0
    return int(np.sign(np.linalg.det(coeffs))) if A.dim else 1


def oriented_sum(A: OrientedSubspace, B: OrientedSubspace, tol: float = 1e-9) -> OrientedSubspace:
    """Positive basis of A followed by positive basis of B."""
    if A.dim + B.dim > A.ambient:
        raise DegenerateInputError("dimensions exceed the ambient space")
    out = np.hstack([A.basis, B.basis])
    s = np.linalg.svd(out, compute_uv=False)
    if s.size and s[-1] <= tol * max(1.0, s[0]):
        raise DegenerateInputError("summands are not transverse")
    return OrientedSubspace(out)


def _oriented_like(basis: np.ndarray, rest: np.ndarray, first: bool) -> np.ndarray:
    # flip the last column of basis unless [basis|rest] (or [rest|basis]) is positive
    full = np.hstack([basis, rest]) if first else np.hstack([rest, basis])
    if np.linalg.det(full) < 0:
        basis = basis.copy()
        basis[:, -1] *= -1
    return basis


def oriented_intersection(A: OrientedSubspace, B: OrientedSubspace, eps: float = 1e-9) -> OrientedSubspace:
    """A cap B, oriented so that A' + (A cap B) + B' is the standard R^n,
    where A' (B') complements the intersection in A (B) and is oriented by
    A' + B = R^n (A + B' = R^n)."""
    n = A.ambient
    if np.linalg.matrix_rank(np.hstack([A.basis, B.basis]), tol=eps) < n:
        raise DegenerateInputError("A + B is not the whole space")
    c = A.dim + B.dim - n
    if c < 1:
        raise DegenerateInputError("intersection is zero-dimensional")
    stacked = np.hstack([A.basis, -B.basis])
    _, _, vt = np.linalg.svd(stacked)
    null = vt[-c:].T
    C = A.basis @ null[: A.dim]
    qc, _ = np.linalg.qr(C)
    proj = np.eye(n) - qc @ qc.T
    Ap = _complement(proj @ A.basis, A.dim - c)
    Bp = _complement(proj @ B.basis, B.dim - c)
    if Ap.shape[1]:
        Ap = _oriented_like(Ap, B.basis, first=True)
    if Bp.shape[1]:
        Bp = _oriented_like(Bp, A.basis, first=False)
    full = np.hstack([Ap, C, Bp])
    if np.linalg.det(full) < 0:
        C = C.copy()
        C[:, -1] *= -1
    return OrientedSubspace(C)


def _complement(vectors: np.ndarray, k: int) -> np.ndarray:
    if k == 0:
        return vectors[:, :0]
    u, _, _ = np.linalg.svd(vectors, full_matrices=False)
    return u[:, :k]
