"""Eigenspace Hodge numbers, the tangent space T_s, the maps rho_chi and the
infinitesimal Torelli certificate, all assembled from Jacobi-module pieces."""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence, TypeVar

from .cover import CoverData, bott_dim, check_property_AB_projective, support
from .errors import EmptyCharacterSet, SingularInput
from .groups import Character, eval_character
from .jacobi import JacobiContext, duality_report, jacobi_dim, multiply
from .linalg import RationalMatrix, Subspace, intersect, kernel_basis, rank
from .poly import (
    HomogPoly,
    jacobian_smoothness_check,
    monomial_basis,
    monomial_index,
    normal_crossings_check,
    partial_derivative,
    singular_point_witness,
)

__all__ = [
    "certify_cover",
    "CoverInvariants",
    "HodgeEigentable",
    "TangentSpace",
    "TorelliCertificate",
    "bott_row",
    "hodge_row",
    "hodge_eigentable",
    "lemma_hypotheses",
    "invariant_tangent_dim",
    "rho_factor",
    "rho_map",
    "kernel_analysis",
    "full_kernel_intersection",
    "torelli_certificate",
    "duality_suite",
]

T = TypeVar("T")


def _pmap(fn: Callable[..., T], items: Sequence, threads: int = 1) -> list[T]:
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def certify_cover(cover: CoverData, primes=(101, 211, 307), trials: int = 2, seed: int = 0) -> dict:
    """Smoothness of every branch section plus the normal-crossing sampler.

    Raises SingularInput on a singular section or a verified bad crossing.
    """
    report = {"sections": [], "crossings": None}
    for i, b in enumerate(cover.branch):
        if b.section is None:
            raise SingularInput(f"branch component {i} has no section")
        smooth = jacobian_smoothness_check(b.section)
        entry = {"index": i, "smooth": smooth, "witness": None}
        if not smooth:
            w = singular_point_witness(b.section)
            entry["witness"] = list(w) if w else None
            report["sections"].append(entry)
            raise SingularInput(f"section {i} is singular", witness=w)
        report["sections"].append(entry)
    if cover.r > 1:
        res = normal_crossings_check(cover.sections, primes=primes, trials=trials, seed=seed)
        report["crossings"] = res.to_dict()
        if res.verdict == "fail":
            raise SingularInput(f"branch components {list(res.components)} are not transverse",
                                witness=res.witness)
    return report


class CoverInvariants:
    """Shared per-cover state: Jacobi contexts, cached by component set."""

    def __init__(self, cover: CoverData, certified: bool = True, threads: int = 1):
        self.cover = cover
        self.threads = threads
        self.certified = certified
        self._contexts: dict[tuple[int, ...], JacobiContext] = {}

    def context(self, components: Iterable[int]) -> JacobiContext:
        key = tuple(sorted(components))
        ctx = self._contexts.get(key)
        if ctx is None:
            ctx = self._contexts.setdefault(key, JacobiContext(self.cover, key, certified=self.certified))
        return ctx

    def char_context(self, chi: Character) -> JacobiContext:
        return self.context(support(self.cover, chi))

    def full_context(self) -> JacobiContext:
        return self.context(range(self.cover.r))

    def u_twist(self, chi: Character) -> int:
        """Twist of omega (x) L_{chi^-1}, the piece that computes U^{k,chi}."""
        return -(self.cover.ambient_dim + 1) + self.cover.ell(chi.inverse())


def _inv(cover_or_inv) -> CoverInvariants:
    if isinstance(cover_or_inv, CoverInvariants):
        return cover_or_inv
    return CoverInvariants(cover_or_inv)


# --- Hodge table ----------------------------------------------------------------


@dataclass
class HodgeEigentable:
    n: int
    rows: dict  # character exponents -> tuple of dim U^{k,chi}, k = 0..n
    invariant: tuple

    @property
    def totals(self) -> tuple:
        return tuple(self.invariant[k] + sum(r[k] for r in self.rows.values()) for k in range(self.n + 1))

    def serre_symmetric(self, group) -> bool:
        for exps, row in self.rows.items():
            partner = self.rows[group.character(exps).inverse().exponents]
            if any(row[k] != partner[self.n - k] for k in range(self.n + 1)):
                return False
        return True

    def to_dict(self) -> dict:
        return {
            "rows": [{"character": list(e), "dims": list(r)} for e, r in self.rows.items()],
            "invariant": list(self.invariant),
            "totals": list(self.totals),
        }


def bott_row(n: int) -> tuple:
    return tuple(bott_dim(n, n - k, k, 0) for k in range(n + 1))


def hodge_row(cover_or_inv, chi: Character) -> tuple:
    inv = _inv(cover_or_inv)
    n = inv.cover.ambient_dim
    if chi.is_trivial():
        return bott_row(n)
    ctx = inv.char_context(chi)
    t = inv.u_twist(chi)
    return tuple(jacobi_dim(ctx, k, t) for k in range(n + 1))


def hodge_eigentable(cover_or_inv) -> HodgeEigentable:
    inv = _inv(cover_or_inv)
    chars = inv.cover.nontrivial_characters
    rows = _pmap(lambda c: hodge_row(inv, c), chars, inv.threads)
    n = inv.cover.ambient_dim
    return HodgeEigentable(n, {c.exponents: r for c, r in zip(chars, rows)}, bott_row(n))


def lemma_hypotheses(cover: CoverData) -> dict:
    """Conditions checked before Jacobi pieces are read as cohomology groups."""
    n = cover.ambient_dim
    ab = check_property_AB_projective(cover)
    members = {}
    for chi in cover.nontrivial_characters:
        lam = cover.ell(chi.inverse())
        partner = sum(cover.degrees[i] for i in support(cover, chi)) - lam
        members[",".join(map(str, chi.exponents))] = cover.in_gamma(lam) and cover.in_gamma(partner)
    return {"property_AB": ab, "gamma_membership": members}


def invariant_tangent_dim(cover_or_inv) -> int:
    inv = _inv(cover_or_inv)
    n = inv.cover.ambient_dim
    ctx = inv.full_context()
    return jacobi_dim(ctx, n - 1, -2 * (n + 1) + ctx.total_degree)


# --- tangent space and rho -----------------------------------------------------


class TangentSpace:
    """T_s = sum_i H^0(O(d_i)) / (s_i); block i drops the leading monomial of s_i."""

    def __init__(self, cover: CoverData):
        self.cover = cover
        n = cover.ambient_dim
        self.coords: list[tuple[int, tuple[int, ...]]] = []
        self.blocks: list[list[int]] = []
        self._lead = []
        for i, b in enumerate(cover.branch):
            lead = b.section.leading_monomial()
            self._lead.append(lead)
            block = []
            for m in monomial_basis(n, b.degree):
                if m != lead:
                    block.append(len(self.coords))
                    self.coords.append((i, m))
            self.blocks.append(block)
        self.index = {c: j for j, c in enumerate(self.coords)}

    @property
    def dim(self) -> int:
        return len(self.coords)

    @property
    def block_dims(self) -> list[int]:
        return [len(b) for b in self.blocks]

    def vector(self, i: int, poly: HomogPoly) -> dict[int, Fraction]:
        """Class of ``poly`` in block i, reduced modulo s_i."""
        s = self.cover.branch[i].section
        lead = self._lead[i]
        c = poly.terms.get(lead, 0)
        if c:
            poly = poly - s * (Fraction(c) / s.terms[lead])
        return {self.index[i, m]: x for m, x in poly.terms.items()}

    def block_subspace(self, i: int) -> Subspace:
        return Subspace.span(self.dim, [{j: 1} for j in self.blocks[i]])

    def derivation_vectors(self) -> list[dict[int, Fraction]]:
        """Tangent directions ``(theta(s_i))_i`` for theta = x_a d/dx_b."""
        n = self.cover.ambient_dim
        out = []
        for a, b in itertools.product(range(n + 1), repeat=2):
            xa = HomogPoly.monomial(tuple(int(v == a) for v in range(n + 1)))
            vec: dict[int, Fraction] = {}
            for i, br in enumerate(self.cover.branch):
                vec.update(self.vector(i, xa * partial_derivative(br.section, b)))
            out.append({k: x for k, x in vec.items() if x})
        return out

    def derivation_subspace(self) -> Subspace:
        return Subspace.span(self.dim, self.derivation_vectors())


def rho_factor(cover_or_inv, chi: Character, ts: Optional[TangentSpace] = None) -> RationalMatrix:
    """The surjection T_s -> R^{1,chi}_O: blocks outside the support map to zero."""
    inv = _inv(cover_or_inv)
    ts = ts or TangentSpace(inv.cover)
    ctx = inv.char_context(chi)
    R1 = ctx.piece(1, 0)
    slot = {comp: tuple(int(j == jj) for jj in range(len(ctx.components))) for j, comp in enumerate(ctx.components)}
    cols = []
    for i, m in ts.coords:
        if i not in slot:
            cols.append({})
            continue
        cols.append(dict(enumerate(R1.coordinates({R1.index[slot[i], m]: 1}))))
    return RationalMatrix.from_columns(R1.dim, cols)


def rho_map(cover_or_inv, chi: Character, ts: Optional[TangentSpace] = None) -> RationalMatrix:
    """Matrix of T_s -> Hom(U^{0,chi}, U^{1,chi}).

    Row ``u * dim U^1 + w`` is the w-th coordinate of the image of the u-th
    basis element of U^0.
    """
    inv = _inv(cover_or_inv)
    if chi.is_trivial():
        raise ValueError("rho_chi is defined for nontrivial characters")
    ts = ts or TangentSpace(inv.cover)
    ctx = inv.char_context(chi)
    t = inv.u_twist(chi)
    F = rho_factor(inv, chi, ts)
    M = multiply(ctx, (1, 0), (0, t))  # R^1_O (x) R^0_t -> R^1_t
    d0 = ctx.piece(0, t).dim
    d1 = ctx.piece(1, t).dim
    by_col: dict[int, list] = {}
    for (w, c), x in M.entries.items():
        by_col.setdefault(c, []).append((w, x))
    entries: dict[tuple[int, int], Fraction] = {}
    for (q, v), coef in F.entries.items():
        for u in range(d0):
            for w, x in by_col.get(q * d0 + u, ()):
                key = (u * d1 + w, v)
                entries[key] = entries.get(key, 0) + coef * x
    return RationalMatrix(d0 * d1, ts.dim, entries)


def kernel_analysis(cover_or_inv, i: int, ts: Optional[TangentSpace] = None) -> dict:
    """Compare K_i = intersection of ker rho_chi over chi(g_i) = 1, chi != 1,
    with E_i = block_i + derivation tuples."""
    inv = _inv(cover_or_inv)
    cover = inv.cover
    chars = [c for c in cover.nontrivial_characters if eval_character(c, cover.branch[i].label) == 0]
    if not chars:
        raise EmptyCharacterSet(f"no nontrivial character is trivial on g_{i}")
    ts = ts or TangentSpace(cover)
    kernels = _pmap(lambda c: kernel_basis(rho_map(inv, c, ts)), chars, inv.threads)
    K = kernels[0]
    for other in kernels[1:]:
        K = intersect(K, other)
    E = Subspace.span(ts.dim, [{j: 1} for j in ts.blocks[i]] + ts.derivation_vectors())
    contained = K.contains_subspace(E)
    return {
        "index": i,
        "characters": [list(c.exponents) for c in chars],
        "kernel_dims": [k.dim for k in kernels],
        "K_dim": K.dim,
        "E_dim": E.dim,
        "block_dim": len(ts.blocks[i]),
        "derivation_dim": ts.derivation_subspace().dim,
        "E_contained_in_K": contained,
        "equal": contained and K.dim == E.dim,
    }


def full_kernel_intersection(cover_or_inv, ts: Optional[TangentSpace] = None) -> dict:
    inv = _inv(cover_or_inv)
    ts = ts or TangentSpace(inv.cover)
    chars = inv.cover.nontrivial_characters
    kernels = _pmap(lambda c: kernel_basis(rho_map(inv, c, ts)), chars, inv.threads)
    K = kernels[0]
    for other in kernels[1:]:
        K = intersect(K, other)
    D = ts.derivation_subspace()
    return {
        "dim": K.dim,
        "derivation_dim": D.dim,
        "contains_derivations": K.contains_subspace(D),
        "equals_derivations": K == D,
    }


# --- Torelli certificate ---------------------------------------------------------


@dataclass
class TorelliCertificate:
    pairs: list = field(default_factory=list)
    hypotheses: dict = field(default_factory=dict)

    @property
    def verified(self) -> bool:
        return all(p["surjective"] for p in self.pairs)

    def to_dict(self) -> dict:
        return {
            "r_part_verified": self.verified,
            "i_part": "not checked",
            "pairs": self.pairs,
            "hypotheses": self.hypotheses,
        }


def _torelli_pair(inv: CoverInvariants, chi: Character, phi: Character) -> dict:
    cover = inv.cover
    n = cover.ambient_dim
    ctx = inv.char_context(chi)
    t1 = -(n + 1) + cover.ell(phi.inverse())
    t2 = -(n + 1) + cover.ell(chi)
    M = multiply(ctx, (0, t1), (n - 1, t2))
    target = M.rows
    r = rank(M)
    return {
        "chi": list(chi.exponents),
        "phi": list(phi.exponents),
        "source_dims": [jacobi_dim(ctx, 0, t1), jacobi_dim(ctx, n - 1, t2)],
        "target_dim": target,
        "rank": r,
        "surjective": r == target,
    }


def torelli_certificate(cover_or_inv) -> TorelliCertificate:
    inv = _inv(cover_or_inv)
    chars = inv.cover.nontrivial_characters
    pairs = list(itertools.product(chars, repeat=2))
    results = _pmap(lambda cp: _torelli_pair(inv, *cp), pairs, inv.threads)
    return TorelliCertificate(results, check_property_AB_projective(inv.cover))


def duality_suite(cover_or_inv) -> dict:
    """Duality checks on U-pieces of every nontrivial character, for every k."""
    inv = _inv(cover_or_inv)
    n = inv.cover.ambient_dim

    def one(chi):
        ctx = inv.char_context(chi)
        top = ctx.piece(n, ctx.top_twist).dim
        t = inv.u_twist(chi)
        entries = [duality_report(ctx, k, t) for k in range(n + 1)] if top == 1 else []
        return {"character": list(chi.exponents), "top_dim": top, "top_twist": ctx.top_twist, "pieces": entries}

    chars = inv.cover.nontrivial_characters
    rows = _pmap(one, chars, inv.threads)
    ok = all(r["top_dim"] == 1 and all(e["nondegenerate"] for e in r["pieces"]) for r in rows)
    return {"all_nondegenerate": ok, "characters": rows}
