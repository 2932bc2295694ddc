"""
Limit flags of matrix Schottky groups and the removed set K of a balanced
ideal, evaluated pointwise on the sphere of oriented lines and rasterized.

Limit flags are sampled as attracting flags of group elements given by
cyclically reduced words.  The orientation lift comes from QR power
iteration started at a fixed generic flag.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import errors
from .bruhat import PositionSpace, _mbar_theta, make_parabolic_type, position_space
from .flags import OrientedFlag
from .ideals import Ideal
from .representations import block_embedding, irreducible_rep
from .weyl import GroupContext, mbar_elements

log = logging.getLogger(__name__)

__all__ = [
    "MatrixGroupSpec", "LimitSample", "RasterImage", "reduced_words",
    "cyclically_reduced", "attracting_flag", "attracting_flags_batch",
    "sample_limit_set", "sphere_space", "line_class_table", "k_membership",
    "k_membership_points", "render_sphere", "schottky_example",
    "fuchsian_example", "load_group_spec", "sphere_grid", "equirect_points",
]


@dataclass(frozen=True)
class MatrixGroupSpec:
    n: int
    generators: tuple   # float n x n arrays

    @property
    def rank(self) -> int:
        return len(self.generators)

    def word_matrix(self, word: Sequence[int]) -> np.ndarray:
        g = np.eye(self.n)
        for letter in word:
            g = g @ self._letter(letter)
        return g

    def _letter(self, letter: int) -> np.ndarray:
        m = self.generators[abs(letter) - 1]
        return m if letter > 0 else np.linalg.inv(m)


def _via(A, n: int, via: str) -> np.ndarray:
    if via == "direct":
        return np.asarray(A, dtype=float)
    if via == "irreducible":
        return np.asarray(irreducible_rep(n, A, exact=False), dtype=float)
    if via.startswith("block:"):
        return np.asarray(block_embedding(n, int(via.split(":")[1]), A), dtype=float)
    raise ValueError(f"unknown representation {via!r}")


def load_group_spec(doc: dict | str) -> MatrixGroupSpec:
    """Read ``{n, rank, generators, via}``; generators are 2x2 unless via is direct."""
    if isinstance(doc, str):
        doc = json.loads(doc)
    n = int(doc["n"])
    via = doc.get("via", "direct")
    gens = tuple(_via(g, n, via) for g in doc["generators"])
    if "rank" in doc and int(doc["rank"]) != len(gens):
        raise ValueError(f"rank {doc['rank']} but {len(gens)} generators")
    for g in gens:
        if g.shape != (n, n):
            raise ValueError(f"generator has shape {g.shape}, expected {(n, n)}")
        if abs(np.linalg.det(g) - 1) > 1e-8 * max(1.0, np.linalg.norm(g) ** n):
            raise ValueError("generators must have determinant 1")
    return MatrixGroupSpec(n, gens)


def _hyperbolic(length: float) -> np.ndarray:
    return np.array([[math.cosh(length), math.sinh(length)], [math.sinh(length), math.cosh(length)]])


def _rotation(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s], [s, c]])


def schottky_example(n: int = 3, length: float = 1.5) -> MatrixGroupSpec:
    """Rank 2 Fuchsian Schottky group with perpendicular axes, through iota_n."""
    a = _hyperbolic(length)
    r = _rotation(math.pi / 4)
    b = r @ a @ r.T
    return MatrixGroupSpec(n, (_via(a, n, "irreducible"), _via(b, n, "irreducible")))


def fuchsian_example(n: int = 3, length: float = 1.0) -> MatrixGroupSpec:
    """Cyclic group generated by one hyperbolic element (rank 1)."""
    return MatrixGroupSpec(n, (_via(_hyperbolic(length), n, "irreducible"),))


def reduced_words(rank: int, L: int) -> list[tuple[int, ...]]:
    """Freely reduced nonempty words of length <= L; letters are +-1..+-rank."""
    if L < 1:
        raise ValueError("L must be at least 1")
    letters = [i for g in range(1, rank + 1) for i in (g, -g)]
    out = []
    layer = [(x,) for x in letters]
    for _ in range(L):
        out.extend(layer)
        layer = [w + (x,) for w in layer for x in letters if x != -w[-1]]
    return out


def cyclically_reduced(word: Sequence[int]) -> bool:
    return len(word) <= 1 or word[0] != -word[-1]


def _is_proper_power(word: Sequence[int]) -> bool:
    n = len(word)
    return any(n % d == 0 and tuple(word[:d]) * (n // d) == tuple(word) for d in range(1, n))


STALL_TOL = 1e-6


def _qr_pos(a: np.ndarray) -> np.ndarray:
    q, r = np.linalg.qr(a)
    d = np.sign(np.diagonal(r, axis1=-2, axis2=-1))
    d = np.where(d == 0, 1.0, d)
    q = q * d[..., None, :]
    # the last column is fixed by the others and det = +1; trusting the sign
    # of r_nn fails when g is numerically singular
    flip = np.linalg.det(q) < 0
    q[..., :, -1] = np.where(flip[..., None], -q[..., :, -1], q[..., :, -1])
    return q


BASE_ANGLE = 0.3183


def base_flag(n: int) -> np.ndarray:
    """Starting flag of the power iteration: iota_n of a rotation by a fixed
    generic angle.  The standard flag itself is fixed by diagonal elements
    and would stall there; this one is in general position and, for groups
    inside iota_n(SL2), keeps the lift on the image of the circle."""
    c, s = math.cos(BASE_ANGLE), math.sin(BASE_ANGLE)
    return np.asarray(irreducible_rep(n, ((c, -s), (s, c)), exact=False), dtype=float)


def attracting_flag(g, iters: int = 200, tol: float = 1e-9) -> OrientedFlag:
    """Limit of the oriented flags g^m f0, by orthonormalize-then-multiply,
    where f0 is :func:`base_flag`."""
    flags, ok = attracting_flags_batch(np.asarray(g, dtype=float)[None], iters=iters, tol=tol)
    if not ok[0]:
        raise errors.NotProximalError(f"power iteration did not settle within {iters} steps")
    return OrientedFlag(flags[0])


def attracting_flags_batch(gs: np.ndarray, iters: int = 200, tol: float = 1e-9) -> tuple[np.ndarray, np.ndarray]:
    """Stacked version; returns (flags, converged)."""
    gs = np.asarray(gs, dtype=float)
    # rescale to keep long words in range; positive scaling does not move flags
    gs = gs / np.linalg.norm(gs, axis=(1, 2), keepdims=True)
    q = np.broadcast_to(base_flag(gs.shape[1]), gs.shape).copy()
    prev = np.full(len(gs), np.inf)
    done = np.zeros(len(gs), dtype=bool)
    for _ in range(iters):
        nq = _qr_pos(gs @ q)
        delta = np.max(np.abs(nq - q), axis=(1, 2))
        q = np.where(done[:, None, None], q, nq)
        # rounding noise grows with the condition number of g, so a change
        # that has stopped shrinking at a small level also counts as settled
        done |= (delta < tol) | ((delta < STALL_TOL) & (delta > 0.5 * prev))
        prev = delta
        if done.all():
            break
    return q, done


@dataclass(frozen=True)
class LimitSample:
    word: tuple
    flag: OrientedFlag


def sample_limit_set(spec: MatrixGroupSpec, L: int, iters: int = 200, tol: float = 1e-9,
                     twist=None) -> list[LimitSample]:
    """Attracting flags of all cyclically reduced, non-power words of length <= L.

    Words whose power iteration does not settle are skipped and counted in
    a log warning.  ``twist`` (an element of M-bar) is applied on the right
    to every flag, giving another continuous lift.
    """
    words = [w for w in reduced_words(spec.rank, L) if cyclically_reduced(w) and not _is_proper_power(w)]
    if not words:
        return []
    mats = _word_matrices(spec, words)
    flags, ok = attracting_flags_batch(mats, iters=iters, tol=tol)
    if (~ok).any():
        log.warning("skipped %d of %d words without a settled attracting flag", int((~ok).sum()), len(words))
    tw = None
    if twist is not None:
        tw = np.diag(np.array(twist.signs, dtype=float))
    out = []
    for w, f, good in zip(words, flags, ok):
        if good:
            out.append(LimitSample(w, OrientedFlag(f @ tw if tw is not None else f)))
    return out


def _word_matrices(spec: MatrixGroupSpec, words) -> np.ndarray:
    cache = {(): np.eye(spec.n)}
    out = np.empty((len(words), spec.n, spec.n))
    for k, w in enumerate(words):
        prefix = w[:-1]
        if prefix not in cache:
            cache[prefix] = spec.word_matrix(prefix)
        g = cache[prefix] @ spec._letter(w[-1])
        # normalise cached products so length-L words stay finite
        g = g / np.linalg.norm(g)
        cache[w] = g
        out[k] = g
    return out


def sphere_space(n: int = 3) -> PositionSpace:
    """Oriented lines in R^n (n odd) against oriented partial flags of
    dimensions (n-1)/2 and (n+1)/2, each up to a simultaneous flip."""
    if n < 3 or n % 2 == 0:
        raise ValueError("sphere space needs odd n >= 3")
    ctx = GroupContext(n)
    h = (n - 1) // 2
    theta = [i for i in range(1, n) if i not in (h, h + 1)]
    E = [m for m in mbar_elements(ctx) if m.signs[h] == 1]
    eta = list(range(2, n))
    R = make_parabolic_type(ctx, theta, E)
    S = make_parabolic_type(ctx, eta, _mbar_theta(ctx, eta))
    return position_space(ctx, R, S)


def line_class_table(space: PositionSpace) -> np.ndarray:
    """table[r, s] = class of an element whose first column is (+-)e_{r+1};
    s = 0 for +, 1 for -.  Requires that S only sees the first column."""
    n = space.ctx.n
    table = -np.ones((n, 2), dtype=np.int64)
    for i, coset in enumerate(space.members):
        for w in coset:
            r, s = w.perm[0] - 1, 0 if w.signs[0] > 0 else 1
            if table[r, s] not in (-1, i):
                raise ValueError("space is not a space of oriented lines")
            table[r, s] = i
    if (table < 0).any():
        raise ValueError("space is not a space of oriented lines")
    return table


def _member_mask(flag_reps: np.ndarray, points: np.ndarray, good: np.ndarray, tol: float) -> np.ndarray:
    # coordinates of every point in every flag basis: (F, n, N)
    c = np.matmul(np.swapaxes(flag_reps, 1, 2), points.T)
    n = c.shape[1]
    # class is read off the lowest coordinate that is not negligible
    res = good[0][(c[:, 0] < 0).astype(np.intp)]
    for r in range(1, n):
        cr = c[:, r]
        res = np.where(np.abs(cr) > tol, good[r][(cr < 0).astype(np.intp)], res)
    return res.any(axis=0)


def k_membership_points(points: np.ndarray, flags: np.ndarray, ideal: Ideal, tol: float = 1e-9,
                        chunk: int = 1 << 23) -> np.ndarray:
    """Vectorised membership of the oriented lines through ``points`` (N, n) in K."""
    table = line_class_table(ideal.space)
    in_ideal = np.array([i in ideal for i in range(len(ideal.space))], dtype=bool)
    good = in_ideal[table]
    points = np.asarray(points, dtype=float)
    points = points / np.linalg.norm(points, axis=1, keepdims=True)
    out = np.zeros(len(points), dtype=bool)
    if len(flags) == 0:
        return out
    flags = np.asarray(flags, dtype=float)
    step = max(1, chunk // max(1, len(points) * flags.shape[1]))
    for start in range(0, len(flags), step):
        out |= _member_mask(flags[start:start + step], points, good, tol)
    return out


def k_membership(p, samples: Sequence[LimitSample], ideal: Ideal, space: PositionSpace | None = None,
                 tol: float = 1e-9) -> bool:
    """Whether the oriented line spanned by ``p`` lies in K.

    Coordinates of p with |x| <= tol count as zero, which resolves
    boundary cases to the smaller cell.
    """
    if space is not None and space is not ideal.space:
        raise ValueError("ideal belongs to a different space")
    flags = np.array([s.flag.rep for s in samples]) if samples else np.zeros((0,) * 3)
    pts = np.asarray(p, dtype=float).reshape(1, -1)
    return bool(k_membership_points(pts, flags, ideal, tol)[0])


@dataclass(frozen=True)
class RasterImage:
    width: int
    height: int
    pixels: bytes = field(repr=False)

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError("image dimensions must be positive")
        if len(self.pixels) != 3 * self.width * self.height:
            raise ValueError("pixel buffer has the wrong length")

    def to_ppm(self) -> bytes:
        return f"P6\n{self.width} {self.height}\n255\n".encode("ascii") + self.pixels

    def save(self, path) -> None:
        with open(path, "wb") as fh:
            fh.write(self.to_ppm())

    def mask(self) -> np.ndarray:
        a = np.frombuffer(self.pixels, dtype=np.uint8).reshape(self.height, self.width, 3)
        return a[..., 0] < 128


def equirect_points(width: int, height: int) -> np.ndarray:
    """Unit vectors at pixel centres, row-major, north pole on top."""
    lon = (np.arange(width) + 0.5) / width * 2 * np.pi - np.pi
    lat = np.pi / 2 - (np.arange(height) + 0.5) / height * np.pi
    lo, la = np.meshgrid(lon, lat)
    return np.stack([np.cos(la) * np.cos(lo), np.cos(la) * np.sin(lo), np.sin(la)], axis=-1).reshape(-1, 3)


def sphere_grid(count: int) -> np.ndarray:
    """Fibonacci points on S^2."""
    k = np.arange(count) + 0.5
    z = 1 - 2 * k / count
    r = np.sqrt(1 - z * z)
    phi = k * math.pi * (3 - math.sqrt(5))
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)


DARK = (24, 24, 40)
LIGHT = (238, 236, 228)


def render_sphere(spec: MatrixGroupSpec, L: int, ideal: Ideal, width: int = 400, height: int = 200,
                  tol: float | None = None, samples: Sequence[LimitSample] | None = None) -> RasterImage:
    """Equirectangular picture of S^2; dark pixels are in K."""
    if spec.n != 3:
        raise ValueError("rendering supports n = 3 only")
    if samples is None:
        samples = sample_limit_set(spec, L)
    tol = math.pi / height if tol is None else tol
    flags = np.array([s.flag.rep for s in samples]) if samples else np.zeros((0, 3, 3))
    inside = k_membership_points(equirect_points(width, height), flags, ideal, tol)
    px = np.empty((len(inside), 3), dtype=np.uint8)
    px[inside] = DARK
    px[~inside] = LIGHT
    return RasterImage(width, height, px.tobytes())
