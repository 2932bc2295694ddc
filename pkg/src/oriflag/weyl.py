"""
Signed permutation matrices of determinant one: the extended Weyl group of
SL(n, R), optionally modulo -1 for PSL(n, R) when n is even.

An element is stored as one-line data: column ``j`` (1-based) of the matrix
has a single nonzero entry ``signs[j-1]`` in row ``perm[j-1]``.

>>> w = compose(generator(Ctx(3), 1), generator(Ctx(3), 2))
>>> encode(w)
'+2 +3 -1'
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

__all__ = [
    "GroupContext", "Ctx", "SignedPermutation", "identity", "compose", "inverse", "generator",
    "mbar_elements", "transverse_elements", "all_elements", "length",
    "reduced_word", "word_product", "opposition", "canonicalize_transverse_under_conjugation",
    "encode", "decode", "antidiag", "diag", "from_matrix", "to_matrix",
    "is_transverse", "is_mbar", "projection", "longest_length",
]


@dataclass(frozen=True)
class GroupContext:
    """Ambient group: SL(n, R), or PSL(n, R) when ``projective``."""
    n: int
    projective: bool = False

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"rank must be at least 2, got n={self.n}")
        if self.projective and self.n % 2:
            raise ValueError("projective mode needs n even (-I must have det 1)")


@dataclass(frozen=True, order=False)
class SignedPermutation:
    perm: tuple[int, ...]
    signs: tuple[int, ...]
    projective: bool = False

    @property
    def n(self) -> int:
        return len(self.perm)

    @property
    def ctx(self) -> GroupContext:
        return GroupContext(self.n, self.projective)

    def __mul__(self, other: SignedPermutation) -> SignedPermutation:
        return compose(self, other)

    def __str__(self) -> str:
        return encode(self)

    def __repr__(self) -> str:
        tag = ", projective" if self.projective else ""
        return f"SignedPermutation({encode(self)!r}{tag})"

    def entry(self, row: int, col: int) -> int:
        """Matrix entry at 1-based (row, col)."""
        return self.signs[col - 1] if self.perm[col - 1] == row else 0


def _perm_sign(perm: Sequence[int]) -> int:
    inv = sum(1 for a, b in itertools.combinations(perm, 2) if a > b)
    return -1 if inv % 2 else 1


def _make(perm, signs, projective=False, check=True) -> SignedPermutation:
    perm = tuple(int(p) for p in perm)
    signs = tuple(int(s) for s in signs)
    if check:
        n = len(perm)
        if sorted(perm) != list(range(1, n + 1)) or len(signs) != n:
            raise ValueError(f"not a signed permutation: {perm} {signs}")
        if any(s not in (1, -1) for s in signs):
            raise ValueError(f"signs must be +1/-1: {signs}")
        if _perm_sign(perm) * math.prod(signs) != 1:
            raise ValueError(f"determinant is not +1: {perm} {signs}")
    if projective and signs[0] == -1:
        signs = tuple(-s for s in signs)
    return SignedPermutation(perm, signs, projective)


def identity(ctx: GroupContext) -> SignedPermutation:
    return SignedPermutation(tuple(range(1, ctx.n + 1)), (1,) * ctx.n, ctx.projective)


def compose(a: SignedPermutation, b: SignedPermutation) -> SignedPermutation:
    """Matrix product ``a @ b``."""
    if a.n != b.n:
        raise ValueError(f"rank mismatch: {a.n} vs {b.n}")
    if a.projective != b.projective:
        raise ValueError("cannot mix SL and PSL elements")
    pa, sa = a.perm, a.signs
    perm = tuple(pa[p - 1] for p in b.perm)
    signs = tuple(s * sa[p - 1] for p, s in zip(b.perm, b.signs))
    return _make(perm, signs, a.projective, check=False)


def inverse(w: SignedPermutation) -> SignedPermutation:
    # orthogonal matrix: inverse is the transpose
    n = w.n
    perm = [0] * n
    signs = [0] * n
    for j, (p, s) in enumerate(zip(w.perm, w.signs), start=1):
        perm[p - 1] = j
        signs[p - 1] = s
    return _make(perm, signs, w.projective, check=False)


def generator(ctx: GroupContext, i: int) -> SignedPermutation:
    """The rotation block [[0, -1], [1, 0]] in rows/columns i, i+1."""
    if not 1 <= i <= ctx.n - 1:
        raise ValueError(f"root index {i} out of range 1..{ctx.n - 1}")
    perm = list(range(1, ctx.n + 1))
    signs = [1] * ctx.n
    perm[i - 1], perm[i] = i + 1, i
    signs[i] = -1
    return _make(perm, signs, ctx.projective, check=False)


def diag(signs: Sequence[int], projective: bool = False) -> SignedPermutation:
    return _make(range(1, len(signs) + 1), signs, projective)


def antidiag(signs: Sequence[int], projective: bool = False) -> SignedPermutation:
    """Antidiagonal element; ``signs`` read from the top-right entry down to
    the bottom-left one, i.e. entry (r, n+1-r) is ``signs[r-1]``."""
    n = len(signs)
    perm = [n + 1 - j for j in range(1, n + 1)]
    col_signs = [signs[n - j] for j in range(1, n + 1)]
    return _make(perm, col_signs, projective)


def is_mbar(w: SignedPermutation) -> bool:
    return w.perm == tuple(range(1, w.n + 1))


def is_transverse(w: SignedPermutation) -> bool:
    n = w.n
    return w.perm == tuple(range(n, 0, -1))


@lru_cache(maxsize=None)
def mbar_elements(ctx: GroupContext) -> tuple[SignedPermutation, ...]:
    """Diagonal sign matrices of determinant one (classes mod -1 in PSL)."""
    out = []
    seen = set()
    for signs in itertools.product((1, -1), repeat=ctx.n):
        if math.prod(signs) != 1:
            continue
        m = _make(range(1, ctx.n + 1), signs, ctx.projective, check=False)
        if m not in seen:
            seen.add(m)
            out.append(m)
    return tuple(sorted(out, key=encode))


@lru_cache(maxsize=None)
def transverse_elements(ctx: GroupContext) -> tuple[SignedPermutation, ...]:
    """Antidiagonal lifts of the longest Weyl element."""
    n = ctx.n
    parity = (n * (n - 1) // 2) % 2
    out = []
    seen = set()
    for signs in itertools.product((1, -1), repeat=n):
        if signs.count(-1) % 2 != parity:
            continue
        t = antidiag(signs, ctx.projective)
        if t not in seen:
            seen.add(t)
            out.append(t)
    return tuple(sorted(out, key=encode))


@lru_cache(maxsize=None)
def all_elements(ctx: GroupContext) -> tuple[SignedPermutation, ...]:
    """Every element, sorted by (length, encoding)."""
    out = set()
    for perm in itertools.permutations(range(1, ctx.n + 1)):
        sp = _perm_sign(perm)
        for signs in itertools.product((1, -1), repeat=ctx.n):
            if sp * math.prod(signs) == 1:
                out.add(_make(perm, signs, ctx.projective, check=False))
    return tuple(sorted(out, key=lambda w: (length(w), encode(w))))


def projection(w: SignedPermutation) -> tuple[int, ...]:
    """Underlying permutation in the Weyl group."""
    return w.perm


def length(w: SignedPermutation) -> int:
    p = w.perm
    return sum(1 for a, b in itertools.combinations(p, 2) if a > b)


def longest_length(n: int) -> int:
    return n * (n - 1) // 2


def _left_descents(w: SignedPermutation) -> list[int]:
    # s_i w is shorter iff row i+1 is hit by an earlier column than row i
    pos = {row: j for j, row in enumerate(w.perm)}
    return [i for i in range(1, w.n) if pos[i + 1] < pos[i]]


def reduced_word(w: SignedPermutation, largest: bool = False) -> tuple[list[int], SignedPermutation]:
    """Write ``w = v(a_1) ... v(a_k) m`` with k = length(w) and m diagonal.

    Peels off the smallest left descent at each step (the largest one when
    ``largest`` is set; both give valid reduced words).
    """
    ctx = w.ctx
    word = []
    cur = w
    while True:
        desc = _left_descents(cur)
        if not desc:
            break
        i = max(desc) if largest else min(desc)
        word.append(i)
        cur = compose(inverse(generator(ctx, i)), cur)
    assert is_mbar(cur)
    return word, cur


def word_product(ctx: GroupContext, word: Iterable[int], m: SignedPermutation | None = None) -> SignedPermutation:
    out = identity(ctx)
    for i in word:
        out = compose(out, generator(ctx, i))
    if m is not None:
        out = compose(out, m)
    return out


def opposition(ctx: GroupContext, i: int) -> int:
    if not 1 <= i <= ctx.n - 1:
        raise ValueError(f"root index {i} out of range 1..{ctx.n - 1}")
    return ctx.n - i


def canonicalize_transverse_under_conjugation(w0: SignedPermutation) -> tuple[SignedPermutation, SignedPermutation]:
    """Normal form of a transverse element under conjugation by diagonal
    sign matrices.

    The upper-right block of size (n-1)//2 (n odd) or (n-2)//2 (n even) is
    made all +1.  Returns ``(normal_form, m)`` with ``normal_form = m w0 m^-1``.
    """
    if not is_transverse(w0):
        raise ValueError(f"{encode(w0)} is not transverse (antidiagonal)")
    n = w0.n
    block = (n - 1) // 2 if n % 2 else (n - 2) // 2
    eps = [1] * n
    for r in range(1, block + 1):
        # antidiagonal entry in row r sits in column n+1-r
        if w0.entry(r, n + 1 - r) == -1:
            eps[r - 1] = -1
    if math.prod(eps) == -1:
        # the untouched middle row (n odd) or row n/2 (n even) fixes parity
        mid = (n + 1) // 2 if n % 2 else n // 2
        eps[mid - 1] = -1
    m = diag(eps, w0.projective)
    return compose(compose(m, w0), inverse(m)), m


def encode(w: SignedPermutation) -> str:
    """Signed one-line notation, e.g. ``'+2 -1 +3'``."""
    return " ".join(f"{'+' if s > 0 else '-'}{p}" for p, s in zip(w.perm, w.signs))


def decode(text: str, projective: bool = False) -> SignedPermutation:
    tokens = text.replace(",", " ").split()
    perm, signs = [], []
    for tok in tokens:
        if tok[0] in "+-":
            signs.append(-1 if tok[0] == "-" else 1)
            perm.append(int(tok[1:]))
        else:
            signs.append(1)
            perm.append(int(tok))
    return _make(perm, signs, projective)


def to_matrix(w: SignedPermutation) -> list[list[int]]:
    n = w.n
    rows = [[0] * n for _ in range(n)]
    for j, (p, s) in enumerate(zip(w.perm, w.signs)):
        rows[p - 1][j] = s
    return rows


def from_matrix(rows, projective: bool = False) -> SignedPermutation:
    """Read a signed permutation matrix (entries must be exactly 0/+1/-1)."""
    n = len(rows)
    perm, signs = [], []
    for j in range(n):
        nz = [(i, rows[i][j]) for i in range(n) if rows[i][j] != 0]
        if len(nz) != 1 or nz[0][1] not in (1, -1):
            raise ValueError(f"column {j + 1} is not a signed basis vector")
        perm.append(nz[0][0] + 1)
        signs.append(int(nz[0][1]))
    return _make(perm, signs, projective)


Ctx = GroupContext
canonicalize_transverse = canonicalize_transverse_under_conjugation
