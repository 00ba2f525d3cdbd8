"""Building data of an abelian cover of projective n-space, in degree terms.

Line bundles on P^n are recorded by their degree, so ``L_chi`` becomes the
integer ``ell[chi]`` and each branch divisor ``D_i`` the integer ``d_i``.
The canonical bundle has degree ``-(n+1)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Any, Optional, Sequence

from .errors import NonIntegralEigensheaf, TotallyRamifiedViolation
from .groups import (
    AbelianGroup,
    Character,
    GroupElement,
    direct_sum_check,
    enumerate_characters,
    eval_character,
    order_of_element,
    subgroup_order,
)

__all__ = [
    "BranchComponent",
    "CoverData",
    "Check",
    "ValidationReport",
    "a_exponent",
    "epsilon",
    "d_pair_degree",
    "support",
    "delta_chi",
    "derive_eigensheaf_degrees",
    "validate",
    "bott_dim",
    "check_property_AB_projective",
    "effective_bound_check",
    "in_semigroup",
]


@dataclass(frozen=True)
class BranchComponent:
    label: GroupElement
    degree: int
    section: Optional[Any] = None  # a HomogPoly of degree ``degree``

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError(f"branch degree must be >= 1, got {self.degree}")
        if self.branch_order < 2:
            raise ValueError(f"branch label {self.label.exponents} has order < 2")

    @property
    def branch_order(self) -> int:
        return order_of_element(self.label)


@dataclass(frozen=True)
class CoverData:
    ambient_dim: int
    group: AbelianGroup
    branch: tuple[BranchComponent, ...]
    eigensheaf_degrees: dict = field(compare=False)

    def __post_init__(self):
        object.__setattr__(self, "branch", tuple(self.branch))

    @property
    def characters(self) -> list[Character]:
        return enumerate_characters(self.group)

    @property
    def nontrivial_characters(self) -> list[Character]:
        return self.characters[1:]

    @property
    def r(self) -> int:
        return len(self.branch)

    @property
    def degrees(self) -> list[int]:
        return [b.degree for b in self.branch]

    @property
    def sections(self) -> list:
        return [b.section for b in self.branch]

    def ell(self, chi: Character) -> int:
        return self.eigensheaf_degrees[chi.exponents]

    def with_sections(self, sections: Sequence) -> "CoverData":
        branch = tuple(
            BranchComponent(b.label, b.degree, s) for b, s in zip(self.branch, sections, strict=True)
        )
        return CoverData(self.ambient_dim, self.group, branch, dict(self.eigensheaf_degrees))

    def gamma_generators(self) -> list[int]:
        gens = {self.ell(chi) for chi in self.nontrivial_characters}
        gens.update(self.degrees)
        return sorted(g for g in gens if g > 0)

    def in_gamma(self, degree: int) -> bool:
        """Membership of ``degree`` in the semigroup generated by the building data, minus 0."""
        return degree > 0 and in_semigroup(degree, tuple(self.gamma_generators()))


@lru_cache(maxsize=4096)
def in_semigroup(x: int, generators: tuple[int, ...]) -> bool:
    if x < 0:
        return False
    reachable = [True] + [False] * x
    for v in range(1, x + 1):
        reachable[v] = any(g <= v and reachable[v - g] for g in generators)
    return reachable[x]


def a_exponent(cover: CoverData, i: int, chi: Character) -> int:
    """The ``a`` in ``[0, m_i)`` with ``chi(g_i) = zeta**(m * a / m_i)``."""
    comp = cover.branch[i]
    m = cover.group.order
    e = eval_character(chi, comp.label)
    # e is a multiple of m / m_i because g_i has order m_i
    return e * comp.branch_order // m


def epsilon(cover: CoverData, i: int, chi: Character, phi: Character) -> int:
    return (a_exponent(cover, i, chi) + a_exponent(cover, i, phi)) // cover.branch[i].branch_order


def d_pair_degree(cover: CoverData, chi: Character, phi: Character) -> int:
    return sum(epsilon(cover, i, chi, phi) * b.degree for i, b in enumerate(cover.branch))


def support(cover: CoverData, chi: Character) -> list[int]:
    """Indices of the components of D_{chi, chi^-1}."""
    return [i for i in range(cover.r) if a_exponent(cover, i, chi) != 0]


def delta_chi(cover: CoverData, chi: Character) -> list[int]:
    return [i for i, b in enumerate(cover.branch) if a_exponent(cover, i, chi) != b.branch_order - 1]


def derive_eigensheaf_degrees(
    ambient_dim: int,
    group: AbelianGroup,
    branch: Sequence[BranchComponent],
    require_generation: bool = True,
) -> CoverData:
    """Solve the fundamental relations for ``ell_chi = sum_i a^i_chi d_i / m_i``.

    The relations are then re-verified on the result rather than assumed.
    """
    if ambient_dim < 2:
        raise ValueError("ambient dimension must be >= 2")
    branch = tuple(branch)
    if not branch:
        raise ValueError("branch list is empty")
    for b in branch:
        if b.label.group != group:
            raise ValueError("branch label belongs to a different group")
    if require_generation and subgroup_order([b.label for b in branch]) != group.order:
        raise TotallyRamifiedViolation(
            "branch labels generate a subgroup of order "
            f"{subgroup_order([b.label for b in branch])} < |G| = {group.order}"
        )
    shell = CoverData(ambient_dim, group, branch, {})
    ell = {}
    for chi in enumerate_characters(group):
        num = 0
        for i, b in enumerate(branch):
            num += a_exponent(shell, i, chi) * b.degree * (group.order // b.branch_order)
        if num % group.order:
            raise NonIntegralEigensheaf(
                f"degree of L_chi for chi={chi.exponents} is {num}/{group.order}, not an integer"
            )
        ell[chi.exponents] = num // group.order
    cover = CoverData(ambient_dim, group, branch, ell)
    bad = _relation_failures(cover)
    if bad:
        raise AssertionError(f"fundamental relations fail for {bad[:3]}")
    return cover


def _relation_failures(cover: CoverData) -> list[tuple]:
    bad = []
    for chi, phi in itertools.product(cover.characters, repeat=2):
        lhs = cover.ell(chi) + cover.ell(phi)
        rhs = cover.ell(chi * phi) + d_pair_degree(cover, chi, phi)
        if lhs != rhs:
            bad.append((chi.exponents, phi.exponents, lhs, rhs))
    return bad


@dataclass
class Check:
    name: str
    passed: bool
    hard: bool = True
    details: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "hard": self.hard,
            "details": self.details,
            "warnings": list(self.warnings),
        }


@dataclass
class ValidationReport:
    checks: list[Check]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if c.hard)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {"passed": self.passed, "checks": [c.to_dict() for c in self.checks]}


def validate(cover: CoverData, strict: bool = False) -> ValidationReport:
    """Run the fundamental-relation, ramification, direct-sum and ampleness checks.

    With ``strict=False`` an adjoint bundle of degree exactly 0 (nef but not
    ample) is a warning; with ``strict=True`` it fails the check.
    """
    n = cover.ambient_dim
    chars = cover.characters
    bad = _relation_failures(cover)
    relations = Check(
        "fundamental_relations",
        not bad,
        details={"count": len(chars) ** 2, "failures": [list(map(list, b[:2])) for b in bad]},
    )

    gen_order = subgroup_order([b.label for b in cover.branch])
    ramification = Check(
        "total_ramification",
        gen_order == cover.group.order,
        details={"generated_order": gen_order, "group_order": cover.group.order},
    )

    failing = []
    n_subsets = 0
    for t in range(2, min(n, cover.r) + 1):
        for idx in itertools.combinations(range(cover.r), t):
            n_subsets += 1
            if not direct_sum_check([cover.branch[i].label for i in idx]):
                failing.append(list(idx))
    direct_sum = Check(
        "direct_sum", not failing, details={"subsets_checked": n_subsets, "failures": failing}
    )

    canonical = -(n + 1)
    amp = Check("assumption_ampleness", True)
    entries = []
    for i, b in enumerate(cover.branch):
        entries.append((f"D_{i}", b.degree))
        entries.append((f"omega(D_{i})", canonical + b.degree))
    for chi in cover.nontrivial_characters:
        tag = ",".join(map(str, chi.exponents))
        entries.append((f"L[{tag}]", cover.ell(chi)))
        entries.append((f"omega*L[{tag}]", canonical + cover.ell(chi)))
    for name, deg in entries:
        amp.details[name] = deg
        if deg < 0 or (deg == 0 and (strict or not name.startswith("omega"))):
            amp.passed = False
        elif deg == 0:
            amp.warnings.append(f"{name} has degree 0: nef but not ample")
    return ValidationReport([relations, ramification, direct_sum, amp])


def bott_dim(n: int, p: int, q: int, k: int) -> int:
    """``h^q(P^n, Omega^p(k))`` by Bott's formula."""
    if not (0 <= p <= n and 0 <= q <= n):
        raise ValueError(f"need 0 <= p, q <= n, got p={p}, q={q}, n={n}")
    if q == 0:
        if k > p:
            return comb(k + n - p, k) * comb(k - 1, p)
        return 1 if k == 0 and p == 0 else 0
    if q == n:
        return bott_dim(n, n - p, 0, -k)
    return 1 if k == 0 and p == q else 0


def check_property_AB_projective(cover: CoverData) -> dict:
    """Sufficient criterion for properties (A) and (B) over P^n.

    A ``False`` here is inconclusive, not a proof that (A) or (B) fails.
    """
    n = cover.ambient_dim
    ok = all(cover.ell(chi) - (n + 1) > 0 for chi in cover.nontrivial_characters) and all(
        d - (n + 1) > 0 for d in cover.degrees
    )
    return {"A": ok, "B": ok, "criterion": "sufficient", "inconclusive": not ok}


def effective_bound_check(n: int, e_degree: int, cover: CoverData) -> dict:
    if n % 2:
        c = comb(n - 1, (n - 1) // 2)
    else:
        c = comb(n - 1, n // 2)
    e_n = c * (-(n + 1) + 2 * n * e_degree)
    canonical = -(n + 1)
    part_i = {}
    part_ii = {}
    for i, d in enumerate(cover.degrees):
        part_i[f"D_{i}"] = d > e_n
        part_i[f"omega(D_{i})"] = canonical + d > e_n
        part_ii[f"D_{i}"] = d >= (n + 1) * e_degree
    for chi in cover.nontrivial_characters:
        tag = ",".join(map(str, chi.exponents))
        ell = cover.ell(chi)
        part_i[f"L[{tag}]"] = ell > e_n
        part_i[f"omega*L[{tag}]"] = canonical + ell > e_n
        part_ii[f"L[{tag}]"] = ell >= (n + 1) * e_degree
    return {
        "c": c,
        "E_n_degree": e_n,
        "i": all(part_i.values()),
        "ii": all(part_ii.values()),
        "i_details": part_i,
        "ii_details": part_ii,
    }
