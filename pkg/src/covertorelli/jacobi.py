"""Jacobi modules of a cover of P^n, one graded piece at a time.

A context fixes a set of branch components ``J`` with sections ``s_j`` of
degree ``d_j``.  The piece ``(k, t)`` is the quotient of

    A = sum over multi-indices a (|a| = k) of  S_{a.d + t}

(``S_e`` = forms of degree e) by the span of two generator families indexed
by multi-indices b with |b| = k - 1:

* insertions: ``mu * s_j`` placed in slot ``b + e_j``;
* derivation tuples: for a vector field ``mu * d/dx_v`` the element whose
  ``b + e_j`` component is ``mu * ds_j/dx_v``, for every j at once.

Twists are degrees: the line bundle ``omega^p (x) O(e)`` is ``t = -p(n+1) + e``.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import ContextMismatch, SingularInput, TopPieceNotOneDimensional
from .linalg import Echelon, RationalMatrix, Subspace, rank
from .poly import (
    HomogPoly,
    jacobian_smoothness_check,
    monomial_basis,
    normal_crossings_check,
    partial_derivative,
    singular_point_witness,
)

__all__ = [
    "JacobiContext",
    "JacobiPiece",
    "piece_dimension",
    "image_generators",
    "jacobi_dim",
    "top_piece_check",
    "multiply",
    "duality_pairing",
    "duality_report",
]


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


class JacobiContext:
    """A component subset of a cover together with a cache of computed pieces."""

    def __init__(self, cover, component_set: Iterable[int], certified: bool = False):
        comps = tuple(sorted(set(component_set)))
        if not comps:
            raise ValueError("component_set must be non-empty")
        self.cover = cover
        self.components = comps
        self.n = cover.ambient_dim
        self.sections: list[HomogPoly] = [cover.branch[i].section for i in comps]
        if any(s is None for s in self.sections):
            raise ValueError("every component in a Jacobi context needs a section")
        self.degrees = [cover.branch[i].degree for i in comps]
        self.certified = certified
        self._pieces: dict[tuple[int, int], JacobiPiece] = {}
        self._lock = threading.Lock()
        self._partials = [[partial_derivative(s, v) for v in range(self.n + 1)] for s in self.sections]

    @classmethod
    def for_character(cls, cover, chi, certified: bool = False) -> "JacobiContext":
        from .cover import support

        return cls(cover, support(cover, chi), certified=certified)

    @classmethod
    def full(cls, cover, certified: bool = False) -> "JacobiContext":
        return cls(cover, range(cover.r), certified=certified)

    @property
    def total_degree(self) -> int:
        return sum(self.degrees)

    @property
    def top_twist(self) -> int:
        return -2 * (self.n + 1) + self.total_degree

    def partner_twist(self, t: int) -> int:
        return self.top_twist - t

    def multi_indices(self, k: int) -> tuple[tuple[int, ...], ...]:
        if k < 0:
            return ()
        return monomial_basis(len(self.components) - 1, k)

    def slot_degree(self, a: Sequence[int], t: int) -> int:
        return sum(x * d for x, d in zip(a, self.degrees)) + t

    def certify(self) -> None:
        """Raise SingularInput unless every section is smooth and the crossings pass."""
        for i, s in zip(self.components, self.sections):
            if not jacobian_smoothness_check(s):
                raise SingularInput(f"section of component {i} is singular",
                                    witness=singular_point_witness(s))
        if len(self.sections) > 1:
            res = normal_crossings_check(self.sections)
            if res.verdict == "fail":
                raise SingularInput(f"components {res.components} are not transverse", witness=res.witness)
        self.certified = True

    def piece(self, k: int, t: int) -> "JacobiPiece":
        key = (k, t)
        with self._lock:
            hit = self._pieces.get(key)
        if hit is not None:
            return hit
        built = JacobiPiece(self, k, t)
        with self._lock:
            return self._pieces.setdefault(key, built)

    def same_as(self, other: "JacobiContext") -> bool:
        return other is self or (
            other.components == self.components
            and other.n == self.n
            and all(a == b for a, b in zip(self.sections, other.sections))
        )


class JacobiPiece:
    """One graded piece R^k_t: ambient coordinates, image echelon, quotient basis."""

    def __init__(self, ctx: JacobiContext, k: int, t: int):
        self.ctx = ctx
        self.k = k
        self.t = t
        self.coords: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
        for a in ctx.multi_indices(k):
            for mono in monomial_basis(ctx.n, ctx.slot_degree(a, t)):
                self.coords.append((a, mono))
        self.index = {c: i for i, c in enumerate(self.coords)}
        self.echelon = Echelon(len(self.coords))
        for g in self.generators():
            self.echelon.add(g)
        pivots = set(self.echelon.rows)
        self.quotient_basis = [i for i in range(len(self.coords)) if i not in pivots]
        self._qpos = {c: j for j, c in enumerate(self.quotient_basis)}

    @property
    def ambient_dim(self) -> int:
        return len(self.coords)

    @property
    def dim(self) -> int:
        return len(self.quotient_basis)

    @property
    def image_rank(self) -> int:
        return self.echelon.rank

    def generators(self) -> list[dict[int, Fraction]]:
        ctx, k, t = self.ctx, self.k, self.t
        if k < 1:
            return []
        idx = self.index
        n = ctx.n
        J = len(ctx.components)
        gens: list[dict[int, Fraction]] = []
        for b in ctx.multi_indices(k - 1):
            base = ctx.slot_degree(b, t)
            slots = [tuple(x + (1 if j == jj else 0) for jj, x in enumerate(b)) for j in range(J)]
            for j in range(J):
                for mu in monomial_basis(n, base):
                    gens.append({idx[slots[j], _add(mu, m)]: c for m, c in ctx.sections[j].terms.items()})
            for v in range(n + 1):
                for mu in monomial_basis(n, base + 1):
                    vec: dict[int, Fraction] = {}
                    for j in range(J):
                        for m, c in ctx._partials[j][v].terms.items():
                            vec[idx[slots[j], _add(mu, m)]] = c
                    if vec:
                        gens.append(vec)
        return gens

    def image(self) -> Subspace:
        return Subspace.span(self.ambient_dim, self.generators())

    def normal_form(self, vec: dict[int, object]) -> dict[int, Fraction]:
        return self.echelon.normal_form(vec)

    def coordinates(self, vec: dict[int, object]) -> list[Fraction]:
        """Coordinates of the class of ``vec`` in the quotient basis."""
        out = [Fraction(0)] * self.dim
        for c, x in self.normal_form(vec).items():
            out[self._qpos[c]] = x
        return out

    def basis_labels(self) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
        return [self.coords[i] for i in self.quotient_basis]


def piece_dimension(ctx: JacobiContext, k: int, t: int) -> int:
    return sum(len(monomial_basis(ctx.n, ctx.slot_degree(a, t))) for a in ctx.multi_indices(k))


def image_generators(ctx: JacobiContext, k: int, t: int) -> RationalMatrix:
    p = ctx.piece(k, t)
    return RationalMatrix.from_columns(p.ambient_dim, p.generators())


def jacobi_dim(ctx: JacobiContext, k: int, t: int) -> int:
    return ctx.piece(k, t).dim


def top_piece_check(ctx: JacobiContext) -> bool:
    if not ctx.certified:
        ctx.certify()
    return jacobi_dim(ctx, ctx.n, ctx.top_twist) == 1


def multiply(
    ctx: JacobiContext,
    first: tuple[int, int],
    second: tuple[int, int],
    other: Optional[JacobiContext] = None,
    verify: bool = True,
) -> RationalMatrix:
    """Matrix of ``R^k_{t1} (x) R^h_{t2} -> R^{k+h}_{t1+t2}`` on quotient bases.

    Column ``i * dim2 + j`` holds the product of basis element i of the first
    piece with basis element j of the second.  With ``verify`` the products of
    image generators with the other factor's basis are checked to vanish.
    """
    if other is not None and not ctx.same_as(other):
        raise ContextMismatch("multiplication needs identical contexts")
    (k, t1), (h, t2) = first, second
    p1, p2 = ctx.piece(k, t1), ctx.piece(h, t2)
    target = ctx.piece(k + h, t1 + t2)

    def product(v1: dict, v2: dict) -> dict:
        out: dict[int, object] = {}
        for i, x in v1.items():
            a1, m1 = p1.coords[i]
            for j, y in v2.items():
                a2, m2 = p2.coords[j]
                c = target.index[_add(a1, a2), _add(m1, m2)]
                out[c] = out.get(c, 0) + x * y
        return out

    cols = []
    for i in p1.quotient_basis:
        for j in p2.quotient_basis:
            cols.append(dict(enumerate(target.coordinates(product({i: 1}, {j: 1})))))
    if verify:
        for g in p1.generators():
            for j in p2.quotient_basis:
                if target.normal_form(product(g, {j: 1})):
                    raise AssertionError("multiplication is not well defined on the quotient")
        for g in p2.generators():
            for i in p1.quotient_basis:
                if target.normal_form(product({i: 1}, g)):
                    raise AssertionError("multiplication is not well defined on the quotient")
    return RationalMatrix.from_columns(target.dim, cols)


def duality_pairing(ctx: JacobiContext, k: int, t: int, verify: bool = True) -> RationalMatrix:
    """Pairing ``R^k_t x R^{n-k}_{t'} -> R^n_top`` as a dim x dim' matrix."""
    n = ctx.n
    top = ctx.piece(n, ctx.top_twist)
    if top.dim != 1:
        raise TopPieceNotOneDimensional(f"top piece has dimension {top.dim}")
    t2 = ctx.partner_twist(t)
    M = multiply(ctx, (k, t), (n - k, t2), verify=verify)
    d1, d2 = jacobi_dim(ctx, k, t), jacobi_dim(ctx, n - k, t2)
    return RationalMatrix(d1, d2, {(c // d2, c % d2): x for (_, c), x in M.entries.items()})


def duality_hypotheses(ctx: JacobiContext, t: int) -> dict:
    """Semigroup membership conditions under which the pairing is perfect."""
    cover = ctx.cover
    n = ctx.n
    lam = t + (n + 1)  # the piece is omega (x) L with deg L = lam
    D = ctx.total_degree
    first = cover.in_gamma(lam) and cover.in_gamma(D - lam)
    second = cover.in_gamma(lam + (n + 1)) and cover.in_gamma(n + 1 - lam + D)
    return {"L_degree": lam, "holds": first or second, "direct": first, "twisted": second}


def duality_report(ctx: JacobiContext, k: int, t: int) -> dict:
    n = ctx.n
    t2 = ctx.partner_twist(t)
    d1, d2 = jacobi_dim(ctx, k, t), jacobi_dim(ctx, n - k, t2)
    P = duality_pairing(ctx, k, t)
    r = rank(P)
    return {
        "k": k,
        "twist": t,
        "partner_k": n - k,
        "partner_twist": t2,
        "dim": d1,
        "partner_dim": d2,
        "pairing_rank": r,
        "dims_equal": d1 == d2,
        "nondegenerate": d1 == d2 == r,
        "hypotheses": duality_hypotheses(ctx, t),
    }
