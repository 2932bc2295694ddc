"""Oriented flag manifolds of SL(n, R): refined Bruhat order, balanced
ideals, relative positions of oriented flags and limit-set domains."""

from .weyl import GroupContext, SignedPermutation
from .bruhat import ParabolicType, PositionSpace, position_space, make_parabolic_type
from .ideals import Ideal, enumerate_balanced
from .flags import OrientedFlag, bruhat_factorize

__version__ = "0.1.0"

__all__ = [
    "GroupContext", "SignedPermutation", "ParabolicType", "PositionSpace",
    "position_space", "make_parabolic_type", "Ideal", "enumerate_balanced",
    "OrientedFlag", "bruhat_factorize",
]
