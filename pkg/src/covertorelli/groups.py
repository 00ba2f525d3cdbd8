"""Finite abelian groups given as explicit products of cyclic groups.

Character values are never complex numbers: a character evaluated on an
element returns the exponent ``e`` of a fixed primitive ``m``-th root of
unity, ``chi(g) = zeta**e`` with ``m = |G|``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce
from math import gcd, lcm, prod
from typing import Iterable, Sequence

from .errors import GroupMismatch

__all__ = [
    "AbelianGroup",
    "GroupElement",
    "Character",
    "eval_character",
    "order_of_element",
    "subgroup_order",
    "direct_sum_check",
    "enumerate_characters",
]


@dataclass(frozen=True)
class AbelianGroup:
    """``Z/m_1 x ... x Z/m_t``, presentation kept exactly as given."""

    elementary_divisors: tuple[int, ...]

    def __post_init__(self):
        divs = tuple(int(m) for m in self.elementary_divisors)
        if not divs:
            raise ValueError("a group needs at least one cyclic factor")
        if any(m < 2 for m in divs):
            raise ValueError(f"cyclic factors must have order >= 2, got {divs}")
        object.__setattr__(self, "elementary_divisors", divs)

    @property
    def order(self) -> int:
        return prod(self.elementary_divisors)

    @property
    def rank(self) -> int:
        return len(self.elementary_divisors)

    def element(self, exponents: Sequence[int]) -> "GroupElement":
        return GroupElement(self, tuple(exponents))

    def character(self, exponents: Sequence[int]) -> "Character":
        return Character(self, tuple(exponents))

    def identity(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.rank)

    def trivial_character(self) -> "Character":
        return Character(self, (0,) * self.rank)

    def elements(self) -> list["GroupElement"]:
        ranges = [range(m) for m in self.elementary_divisors]
        return [GroupElement(self, e) for e in itertools.product(*ranges)]


def _reduce(group: AbelianGroup, exponents: Sequence[int]) -> tuple[int, ...]:
    if len(exponents) != group.rank:
        raise GroupMismatch(
            f"exponent vector {tuple(exponents)} has wrong length for {group.elementary_divisors}"
        )
    return tuple(int(e) % m for e, m in zip(exponents, group.elementary_divisors))


@dataclass(frozen=True)
class GroupElement:
    group: AbelianGroup
    exponents: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "exponents", _reduce(self.group, self.exponents))

    def __add__(self, other: "GroupElement") -> "GroupElement":
        _same_group(self.group, other.group)
        return GroupElement(self.group, tuple(a + b for a, b in zip(self.exponents, other.exponents)))

    def __neg__(self) -> "GroupElement":
        return GroupElement(self.group, tuple(-a for a in self.exponents))

    def __mul__(self, k: int) -> "GroupElement":
        return GroupElement(self.group, tuple(k * a for a in self.exponents))

    __rmul__ = __mul__

    def is_identity(self) -> bool:
        return not any(self.exponents)


@dataclass(frozen=True)
class Character:
    group: AbelianGroup
    exponents: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "exponents", _reduce(self.group, self.exponents))

    def __mul__(self, other: "Character") -> "Character":
        _same_group(self.group, other.group)
        return Character(self.group, tuple(a + b for a, b in zip(self.exponents, other.exponents)))

    def inverse(self) -> "Character":
        return Character(self.group, tuple(-a for a in self.exponents))

    def is_trivial(self) -> bool:
        return not any(self.exponents)

    def __call__(self, g: GroupElement) -> int:
        return eval_character(self, g)


def _same_group(a: AbelianGroup, b: AbelianGroup) -> None:
    if a.elementary_divisors != b.elementary_divisors:
        raise GroupMismatch(f"{a.elementary_divisors} != {b.elementary_divisors}")


def eval_character(chi: Character, g: GroupElement) -> int:
    """Exponent ``e`` in ``[0, m)`` with ``chi(g) = zeta**e``."""
    _same_group(chi.group, g.group)
    m = chi.group.order
    return sum(c * e * (m // mj) for c, e, mj in zip(chi.exponents, g.exponents,
                                                     chi.group.elementary_divisors)) % m


def order_of_element(g: GroupElement) -> int:
    orders = (mj // gcd(mj, e) for e, mj in zip(g.exponents, g.group.elementary_divisors))
    return reduce(lcm, orders, 1)


def subgroup_order(elements: Iterable[GroupElement]) -> int:
    """Order of the subgroup generated by ``elements``, by closure enumeration."""
    elements = list(elements)
    if not elements:
        raise ValueError("subgroup_order needs at least one element")
    group = elements[0].group
    for g in elements[1:]:
        _same_group(group, g.group)
    seen = {group.identity().exponents}
    frontier = [group.identity()]
    while frontier:
        nxt = []
        for h in frontier:
            for g in elements:
                k = h + g
                if k.exponents not in seen:
                    seen.add(k.exponents)
                    nxt.append(k)
        frontier = nxt
    return len(seen)


def direct_sum_check(elements: Iterable[GroupElement]) -> bool:
    """True iff the cyclic subgroups ``<g>`` form a direct sum inside G."""
    elements = list(elements)
    return subgroup_order(elements) == prod(order_of_element(g) for g in elements)


def enumerate_characters(group: AbelianGroup) -> list[Character]:
    # itertools.product is lexicographic, so the trivial character comes first
    ranges = [range(m) for m in group.elementary_divisors]
    return [Character(group, e) for e in itertools.product(*ranges)]
