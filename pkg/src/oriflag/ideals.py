"""
Ideals in a position space: fat, slim and balanced ideals relative to an
order-reversing involution, exhaustive enumeration of the balanced ones,
and the existence criterion for oriented Grassmannians.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass

from . import errors
from .bruhat import InvolutionAction, PositionSpace
from .weyl import compose, mbar_elements

__all__ = [
    "Ideal", "BalancedCensus", "is_ideal", "down_closure", "is_fat", "is_slim",
    "is_balanced", "enumerate_balanced", "minimal_fat_ideal",
    "right_translate", "grassmannian_exists", "grassmannian_fixed_point_oracle",
    "census_to_json",
]


def _bits(mask: int):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


@dataclass(frozen=True)
class Ideal:
    space: PositionSpace
    members: int

    def __contains__(self, i: int) -> bool:
        return bool(self.members >> i & 1)

    def __len__(self) -> int:
        return bin(self.members).count("1")

    def indices(self) -> list[int]:
        return list(_bits(self.members))

    def labels(self) -> list[str]:
        return sorted(self.space.label(i) for i in _bits(self.members))

    def __eq__(self, other):
        return isinstance(other, Ideal) and self.space is other.space and self.members == other.members

    def __hash__(self):
        return hash(self.members)


def is_ideal(space: PositionSpace, mask: int) -> bool:
    return all(space.below[i] & ~mask == 0 for i in _bits(mask))


def down_closure(space: PositionSpace, mask: int) -> int:
    out = 0
    for i in _bits(mask):
        out |= space.below[i]
    return out


def _checked(I: Ideal) -> int:
    if not is_ideal(I.space, I.members):
        raise errors.NotAnIdealError("member set is not downward closed")
    return I.members


def is_fat(I: Ideal, action: InvolutionAction) -> bool:
    mask = _checked(I)
    full = (1 << len(I.space)) - 1
    # x not in I  =>  w0 x in I
    return action.apply_mask(full & ~mask) & ~mask == 0


def is_slim(I: Ideal, action: InvolutionAction) -> bool:
    mask = _checked(I)
    return action.apply_mask(mask) & mask == 0


def is_balanced(I: Ideal, action: InvolutionAction) -> bool:
    return is_fat(I, action) and is_slim(I, action)


def right_translate(I: Ideal, m) -> Ideal:
    """I m, for m in M-bar; M-bar normalizes every parabolic type."""
    space = I.space
    mask = 0
    for i in _bits(I.members):
        mask |= 1 << space.class_of[compose(space.classes[i], m)]
    return Ideal(space, mask)


@dataclass(frozen=True)
class BalancedCensus:
    ideals: tuple
    mbar_classes: tuple   # tuples of indices into ideals

    @property
    def count(self) -> int:
        return len(self.ideals)


def _sort_key(I: Ideal):
    return I.labels()


def enumerate_balanced(space: PositionSpace, action: InvolutionAction,
                       shuffle_seed: int | None = None) -> BalancedCensus:
    """All balanced ideals, by depth-first search over sigma-orbits.

    Picking x forces its down-set into I and the sigma-image of that
    down-set out of I.  ``shuffle_seed`` permutes the branching order, which
    must not change the result.
    """
    N = len(space)
    sigma = action.map
    if any(sigma[i] == i for i in range(N)):
        return BalancedCensus((), ())
    down = space.below
    sdown = tuple(action.apply_mask(d) for d in down)
    orbits = sorted({(min(i, sigma[i]), max(i, sigma[i])) for i in range(N)})
    if shuffle_seed is not None:
        rng = random.Random(shuffle_seed)
        rng.shuffle(orbits)
        orbits = [tuple(rng.sample(o, 2)) for o in orbits]
    results = []

    def dfs(k: int, inc: int, exc: int) -> None:
        while k < len(orbits):
            a, b = orbits[k]
            if (inc | exc) >> a & 1:
                k += 1
                continue
            for x in (a, b):
                ni = inc | down[x]
                ne = exc | sdown[x]
                if ni & ne == 0:
                    dfs(k + 1, ni, ne)
            return
        results.append(inc)

    dfs(0, 0, 0)
    ideals = sorted((Ideal(space, m) for m in results), key=_sort_key)
    return BalancedCensus(tuple(ideals), _mbar_orbits(space, ideals))


def _mbar_orbits(space: PositionSpace, ideals) -> tuple:
    pos = {I.members: k for k, I in enumerate(ideals)}
    ms = mbar_elements(space.ctx)
    # class permutation induced by each m
    perms = [[space.class_of[compose(rep, m)] for rep in space.classes] for m in ms]
    seen = set()
    blocks = []
    for k, I in enumerate(ideals):
        if k in seen:
            continue
        block = set()
        for p in perms:
            mask = 0
            for i in _bits(I.members):
                mask |= 1 << p[i]
            block.add(pos[mask])
        seen |= block
        blocks.append(tuple(sorted(block)))
    return tuple(blocks)


def minimal_fat_ideal(space: PositionSpace, action: InvolutionAction) -> Ideal:
    """Shrink the full poset while staying a fat ideal.  The result is
    balanced whenever the involution has no fixed point."""
    if action.fixed_points():
        raise errors.FixedPointError(
            f"w0 fixes class {space.label(action.fixed_points()[0])}")
    N = len(space)
    order = sorted(range(N), key=lambda i: (-space.rank(i), space.label(i)))
    I = Ideal(space, (1 << N) - 1)
    changed = True
    while changed:
        changed = False
        for i in order:
            if i not in I:
                continue
            # removing a maximal element keeps an ideal
            if space.above(i) & I.members != 1 << i:
                continue
            cand = Ideal(space, I.members & ~(1 << i))
            if is_fat(cand, action):
                I = cand
                changed = True
    return I


def _check_nk(n: int, k: int) -> None:
    if n < 3 or not 1 <= k <= n - 1:
        raise ValueError(f"need n >= 3 and 1 <= k <= n-1, got n={n}, k={k}")


def grassmannian_exists(n: int, k: int) -> bool:
    """Whether the oriented Grassmannian of k-planes admits a balanced ideal
    for the Hitchin transversality type."""
    _check_nk(n, k)
    if n % 2 == 0:
        return k % 2 == 1
    return (k * (n + k + 2) // 2) % 2 == 1


def grassmannian_fixed_point_oracle(n: int, k: int) -> bool:
    """Brute force: True iff the w0 action on (sign, k-subset) has no fixed point."""
    _check_nk(n, k)
    base = k * (k - 1) // 2
    for subset in itertools.combinations(range(1, n + 1), k):
        image = tuple(sorted(n + 1 - i for i in subset))
        if image != subset:
            continue
        sign_flip = (base + sum(i + 1 for i in subset)) % 2
        if sign_flip == 0:
            return False
    return True


def census_to_json(census: BalancedCensus) -> str:
    return json.dumps({
        "count": census.count,
        "ideals": [I.labels() for I in census.ideals],
        "mbar_classes": [list(b) for b in census.mbar_classes],
    })
