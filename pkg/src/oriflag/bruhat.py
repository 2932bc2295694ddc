"""
Refined Bruhat order on the extended Weyl group, oriented parabolic types
R = <v(theta), E>, and the finite posets R \\ W / S of relative positions.

The order on W is combinatorial: w' <= w iff w' is obtained from a reduced
word of w by deleting or squaring letters (the set A_w).  On a double coset
space the class of w' lies below the class of w iff w' is in R A_w S.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from . import errors
from .weyl import (
    GroupContext, SignedPermutation, all_elements, compose, encode, generator,
    identity, inverse, is_mbar, is_transverse, length,
    opposition, reduced_word,
)

__all__ = [
    "ParabolicType", "PositionSpace", "InvolutionAction", "make_parabolic_type",
    "recover_theta_E", "lower_set", "leq_tilde", "position_space",
    "covering_relations", "folding_check", "involution_action", "hasse_dot",
    "space_to_json", "generate_subgroup", "FULL_SPACE_LIMIT",
]

# full W for n >= 5 has 1920+ elements; refuse unless forced
FULL_SPACE_LIMIT = 4


def generate_subgroup(ctx: GroupContext, gens: Iterable[SignedPermutation]) -> frozenset:
    """Closure of ``gens`` under composition (finite group, so inverses come free)."""
    gens = list(gens)
    out = {identity(ctx)}
    frontier = list(out)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = compose(x, g)
                if y not in out:
                    out.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(out)


@dataclass(frozen=True)
class ParabolicType:
    ctx: GroupContext
    theta: frozenset
    E: frozenset
    elements: frozenset = field(repr=False)

    def __len__(self) -> int:
        return len(self.elements)

    def describe(self) -> dict:
        return {
            "theta": sorted(self.theta),
            "E": sorted(encode(m) for m in self.E),
        }


def _mbar_theta(ctx: GroupContext, theta) -> frozenset:
    group = generate_subgroup(ctx, [generator(ctx, i) for i in sorted(theta)])
    return frozenset(x for x in group if is_mbar(x))


def make_parabolic_type(ctx: GroupContext, theta: Iterable[int], E: Iterable[SignedPermutation] = ()) -> ParabolicType:
    """Validate (theta, E) and build the element set of <v(theta), E>.

    ``E`` may omit the identity; it is always added.
    """
    theta = frozenset(int(i) for i in theta)
    if any(not 1 <= i <= ctx.n - 1 for i in theta):
        raise errors.ThetaNotProperError(f"theta {sorted(theta)} not inside 1..{ctx.n - 1}")
    if len(theta) == ctx.n - 1:
        raise errors.ThetaNotProperError("theta must be a proper subset of the simple roots")
    E = set(E) | {identity(ctx)}
    for m in E:
        if not is_mbar(m) or m.n != ctx.n or m.projective != ctx.projective:
            raise errors.NotSubgroupError(f"{encode(m)} is not in M-bar for this context")
    if any(compose(a, b) not in E for a in E for b in E):
        raise errors.NotSubgroupError("E is not closed under composition")
    missing = _mbar_theta(ctx, theta) - E
    if missing:
        raise errors.MissingMbarThetaError(
            "E must contain " + ", ".join(sorted(encode(m) for m in missing)))
    gens = [generator(ctx, i) for i in sorted(theta)] + sorted(E, key=encode)
    elements = generate_subgroup(ctx, gens)
    return ParabolicType(ctx, theta, frozenset(E), elements)


def trivial_type(ctx: GroupContext) -> ParabolicType:
    return make_parabolic_type(ctx, (), ())


def recover_theta_E(R: Iterable[SignedPermutation]) -> tuple[frozenset, frozenset]:
    R = frozenset(R)
    if not R:
        raise errors.NotParabolicSetError("empty set")
    ctx = next(iter(R)).ctx
    n = ctx.n
    theta = set()
    for x in R:
        moved = [j for j in range(1, n + 1) if x.perm[j - 1] != j]
        if len(moved) == 2 and moved[1] == moved[0] + 1:
            theta.add(moved[0])
    E = frozenset(x for x in R if is_mbar(x))
    try:
        rebuilt = make_parabolic_type(ctx, theta, E)
    except errors.InvalidParabolicType as exc:
        raise errors.NotParabolicSetError(str(exc)) from exc
    if rebuilt.elements != R:
        raise errors.NotParabolicSetError("set is not of the form <v(theta)> E")
    return frozenset(theta), E


def _expand(word: Sequence[int], m: SignedPermutation) -> frozenset:
    ctx = m.ctx
    cur = {m}
    # right to left: prepend v^e for e in {0, 1, 2}
    for i in reversed(word):
        v = generator(ctx, i)
        v2 = compose(v, v)
        nxt = set(cur)
        for x in cur:
            nxt.add(compose(v, x))
            nxt.add(compose(v2, x))
        cur = nxt
    return frozenset(cur)


@lru_cache(maxsize=None)
def lower_set(w: SignedPermutation, largest: bool = False) -> frozenset:
    """A_w: everything below w in the refined Bruhat order (w included)."""
    word, m = reduced_word(w, largest=largest)
    return _expand(word, m)


def leq_tilde(a: SignedPermutation, b: SignedPermutation) -> bool:
    return a in lower_set(b)


@dataclass(frozen=True)
class PositionSpace:
    ctx: GroupContext
    R: ParabolicType
    S: ParabolicType
    classes: tuple                      # canonical representatives
    class_of: dict = field(repr=False)  # element -> class index
    below: tuple = field(repr=False)    # below[i]: bitmask of classes <= i
    members: tuple = field(repr=False)  # elements of each double coset

    def __len__(self) -> int:
        return len(self.classes)

    def leq(self, i: int, j: int) -> bool:
        return bool(self.below[j] >> i & 1)

    def index(self, w: SignedPermutation) -> int:
        return self.class_of[w]

    def label(self, i: int) -> str:
        return encode(self.classes[i])

    def rank(self, i: int) -> int:
        """Length of the shortest member of the class."""
        return min(length(x) for x in self.members[i])

    def above(self, i: int) -> int:
        return sum(1 << j for j in range(len(self)) if self.below[j] >> i & 1)

    def leq_matrix(self) -> list[list[bool]]:
        N = len(self)
        return [[self.leq(i, j) for j in range(N)] for i in range(N)]


def position_space(ctx: GroupContext, R: ParabolicType | None = None, S: ParabolicType | None = None,
                   force: bool = False) -> PositionSpace:
    """The poset R \\ W / S.  Classes are sorted by the length of their
    shortest member, then by the encoding of the canonical representative."""
    R = R or trivial_type(ctx)
    S = S or trivial_type(ctx)
    trivial = len(R.elements) == 1 and len(S.elements) == 1
    if ctx.n > FULL_SPACE_LIMIT and (trivial or ctx.n > 6) and not force:
        raise errors.TooLargeError(
            f"n={ctx.n}: the full poset is too large to build by default; pass force=True")
    seen = {}
    cosets = []
    for w in all_elements(ctx):
        if w in seen:
            continue
        coset = frozenset(compose(compose(r, w), s) for r in R.elements for s in S.elements)
        for x in coset:
            seen[x] = len(cosets)
        cosets.append(coset)
    reps = [min(c, key=encode) for c in cosets]
    # shortest member first: strictly smaller classes have strictly shorter
    # shortest members, so this is a linear extension
    minlen = [min(length(x) for x in c) for c in cosets]
    order = sorted(range(len(cosets)), key=lambda i: (minlen[i], encode(reps[i])))
    classes = tuple(reps[i] for i in order)
    members = tuple(cosets[i] for i in order)
    class_of = {x: k for k, c in enumerate(members) for x in c}
    below = []
    for rep in classes:
        mask = 0
        for a in lower_set(rep):
            mask |= 1 << class_of[a]
        below.append(mask)
    return PositionSpace(ctx, R, S, classes, class_of, tuple(below), members)


def covering_relations(space: PositionSpace) -> list[tuple[int, int]]:
    """Hasse edges (lower, upper)."""
    N = len(space)
    edges = []
    for j in range(N):
        strict = space.below[j] & ~(1 << j)
        for i in range(N):
            if not strict >> i & 1:
                continue
            # i is covered by j unless something strictly between
            between = strict & ~(1 << i)
            if any(between >> k & 1 and space.below[k] >> i & 1 for k in range(N)):
                continue
            edges.append((i, j))
    return edges


@lru_cache(maxsize=None)
def _reflections(ctx: GroupContext) -> frozenset:
    out = set()
    for x in all_elements(ctx):
        xi = inverse(x)
        for i in range(1, ctx.n):
            v = generator(ctx, i)
            out.add(compose(compose(x, v), xi))
            out.add(compose(compose(x, inverse(v)), xi))
    return frozenset(out)


def folding_check(a: SignedPermutation, b: SignedPermutation) -> bool:
    """Whether a = q b for a conjugate q of some v(alpha)^{+-1}.

    Only meaningful when a is one step shorter than b.
    """
    if length(b) != length(a) + 1:
        raise ValueError(f"need length(b) = length(a) + 1, got {length(a)} and {length(b)}")
    return compose(a, inverse(b)) in _reflections(a.ctx)


@dataclass(frozen=True)
class InvolutionAction:
    space: PositionSpace
    w0: SignedPermutation
    map: tuple

    def __call__(self, i: int) -> int:
        return self.map[i]

    def fixed_points(self) -> list[int]:
        return [i for i, j in enumerate(self.map) if i == j]

    def apply_mask(self, mask: int) -> int:
        out = 0
        i = 0
        while mask:
            if mask & 1:
                out |= 1 << self.map[i]
            mask >>= 1
            i += 1
        return out


def involution_action(space: PositionSpace, w0: SignedPermutation) -> InvolutionAction:
    """Left multiplication by a transverse w0 on R \\ W / S."""
    ctx = space.ctx
    if not is_transverse(w0):
        raise errors.NotTransverseError(f"{encode(w0)} is not a lift of the longest element")
    E = space.R.E
    w0i = inverse(w0)
    if {compose(compose(w0, m), w0i) for m in E} != set(E):
        raise errors.NotNormalizingError(f"{encode(w0)} does not normalize E")
    if compose(w0, w0) not in E:
        raise errors.SquareNotInEError(f"w0^2 = {encode(compose(w0, w0))} is not in E")
    theta = space.R.theta
    if {opposition(ctx, i) for i in theta} != set(theta):
        raise errors.ThetaNotInvariantError(f"theta {sorted(theta)} is not invariant under opposition")
    mapping = tuple(space.class_of[compose(w0, rep)] for rep in space.classes)
    N = len(space)
    for i in range(N):
        if mapping[mapping[i]] != i:
            raise errors.VerificationError("w0 action is not an involution")
        for j in range(N):
            if space.leq(i, j) and not space.leq(mapping[j], mapping[i]):
                raise errors.VerificationError("w0 action does not reverse the order")
    return InvolutionAction(space, w0, mapping)


def _q(s: str) -> str:
    return '"' + s.replace('"', '\\"') + '"'


def hasse_dot(space: PositionSpace, action: InvolutionAction | None = None, name: str = "positions") -> str:
    lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=box, fontname=monospace];"]
    ranks: dict[int, list[int]] = {}
    for i in range(len(space)):
        ranks.setdefault(space.rank(i), []).append(i)
    for r in sorted(ranks):
        nodes = " ".join(f"n{i};" for i in ranks[r])
        lines.append(f"  {{ rank=same; {nodes} }}")
    for i in range(len(space)):
        lines.append(f"  n{i} [label={_q(space.label(i))}];")
    for a, b in covering_relations(space):
        lines.append(f"  n{a} -> n{b};")
    if action is not None:
        for i, j in enumerate(action.map):
            if i < j:
                lines.append(f"  n{i} -> n{j} [style=dashed, color=red, dir=both, constraint=false];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def space_to_json(space: PositionSpace) -> str:
    doc = {
        "n": space.ctx.n,
        "projective": space.ctx.projective,
        "R": space.R.describe(),
        "S": space.S.describe(),
        "classes": [space.label(i) for i in range(len(space))],
        "leq": space.leq_matrix(),
    }
    return json.dumps(doc)
