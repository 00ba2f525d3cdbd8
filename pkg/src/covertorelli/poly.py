"""Homogeneous polynomials over Q in the coordinates x_0, ..., x_n of P^n."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .errors import DegreeMismatch, DegreeTooSmall, MissingSection
from .linalg import Echelon, RationalMatrix

__all__ = [
    "HomogPoly",
    "monomial_basis",
    "monomial_index",
    "partial_derivative",
    "multiplication_matrix",
    "jacobian_smoothness_check",
    "singular_point_witness",
    "TransversalityResult",
    "pairwise_transversality_check",
    "normal_crossings_check",
    "CoverEquations",
    "cover_equations",
    "random_section",
    "linear_substitution",
]

Monomial = tuple[int, ...]


@lru_cache(maxsize=None)
def monomial_basis(n: int, d: int) -> tuple[Monomial, ...]:
    """Exponent vectors of degree d in n+1 variables, graded-lex (x_0 > x_1 > ...)."""
    if d < 0:
        return ()
    out = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            out.append(prefix + (remaining,))
            return
        for e in range(remaining, -1, -1):
            rec(prefix + (e,), remaining - e, slots - 1)

    rec((), d, n + 1)
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_index(n: int, d: int) -> dict[Monomial, int]:
    return {m: i for i, m in enumerate(monomial_basis(n, d))}


def _add(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


@dataclass(frozen=True)
class HomogPoly:
    num_vars: int
    degree: int
    terms: Mapping[Monomial, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for m, c in self.terms.items():
            m = tuple(int(e) for e in m)
            if len(m) != self.num_vars or sum(m) != self.degree or min(m) < 0:
                raise DegreeMismatch(f"monomial {m} does not have {self.num_vars} vars and degree {self.degree}")
            c = Fraction(c)
            if c:
                clean[m] = c
        object.__setattr__(self, "terms", clean)

    @property
    def n(self) -> int:
        return self.num_vars - 1

    @classmethod
    def zero(cls, num_vars: int, degree: int) -> "HomogPoly":
        return cls(num_vars, degree, {})

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff=1) -> "HomogPoly":
        return cls(len(exps), sum(exps), {tuple(exps): coeff})

    @classmethod
    def fermat(cls, n: int, d: int) -> "HomogPoly":
        return cls(n + 1, d, {tuple(d if j == i else 0 for j in range(n + 1)): 1 for i in range(n + 1)})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "HomogPoly") -> "HomogPoly":
        self._compatible(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return HomogPoly(self.num_vars, self.degree, out)

    def __neg__(self) -> "HomogPoly":
        return HomogPoly(self.num_vars, self.degree, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "HomogPoly") -> "HomogPoly":
        return self + (-other)

    def __mul__(self, other) -> "HomogPoly":
        if isinstance(other, HomogPoly):
            if other.num_vars != self.num_vars:
                raise DegreeMismatch("different numbers of variables")
            out: dict[Monomial, Fraction] = {}
            for a, c in self.terms.items():
                for b, e in other.terms.items():
                    m = _add(a, b)
                    out[m] = out.get(m, 0) + c * e
            return HomogPoly(self.num_vars, self.degree + other.degree, out)
        c = Fraction(other)
        return HomogPoly(self.num_vars, self.degree, {m: c * x for m, x in self.terms.items()})

    __rmul__ = __mul__

    def _compatible(self, other: "HomogPoly") -> None:
        if other.num_vars != self.num_vars or (other.degree != self.degree and other.terms and self.terms):
            raise DegreeMismatch(f"cannot add degree {self.degree} and degree {other.degree}")

    def __eq__(self, other) -> bool:
        return (isinstance(other, HomogPoly) and self.num_vars == other.num_vars
                and self.degree == other.degree and self.terms == other.terms)

    def __hash__(self):
        return hash((self.num_vars, self.degree, frozenset(self.terms.items())))

    def leading_monomial(self) -> Monomial:
        """First monomial of the graded-lex basis that occurs in the support."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self.terms)

    def coefficient_vector(self) -> dict[int, Fraction]:
        idx = monomial_index(self.n, self.degree)
        return {idx[m]: c for m, c in self.terms.items()}

    def evaluate(self, point: Sequence) -> Fraction:
        total = Fraction(0)
        for m, c in self.terms.items():
            term = c
            for x, e in zip(point, m):
                if e:
                    term *= Fraction(x) ** e
            total += term
        return total

    def reduce_mod(self, p: int) -> Optional[dict[Monomial, int]]:
        out = {}
        for m, c in self.terms.items():
            if c.denominator % p == 0:
                return None
            v = c.numerator * pow(c.denominator, -1, p) % p
            if v:
                out[m] = v
        return out

    def is_proportional_to(self, other: "HomogPoly") -> bool:
        if self.is_zero() or other.is_zero() or self.terms.keys() != other.terms.keys():
            return False
        m = next(iter(self.terms))
        ratio = self.terms[m] / other.terms[m]
        return all(self.terms[k] == ratio * other.terms[k] for k in self.terms)

    def to_json(self) -> list:
        return [[list(m), c.numerator, c.denominator] for m, c in sorted(self.terms.items(), reverse=True)]

    @classmethod
    def from_json(cls, data: Iterable, num_vars: int, degree: int) -> "HomogPoly":
        terms: dict[Monomial, Fraction] = {}
        for entry in data:
            exps, num, den = entry
            m = tuple(int(e) for e in exps)
            terms[m] = terms.get(m, 0) + Fraction(int(num), int(den))
        return cls(num_vars, degree, terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(f"x{i}^{e}" if e > 1 else f"x{i}" for i, e in enumerate(m) if e)
            parts.append(f"{c}*{mono}" if mono else str(c))
        return " + ".join(parts)


def partial_derivative(p: HomogPoly, k: int) -> HomogPoly:
    if p.degree == 0:
        return HomogPoly.zero(p.num_vars, 0)
    out = {}
    for m, c in p.terms.items():
        if m[k]:
            mm = list(m)
            mm[k] -= 1
            out[tuple(mm)] = c * m[k]
    return HomogPoly(p.num_vars, p.degree - 1, out)


def linear_substitution(p: HomogPoly, A: Sequence[Sequence]) -> HomogPoly:
    """``p(A x)``: substitute ``x_i -> sum_j A[i][j] x_j``."""
    nv = p.num_vars
    forms = [HomogPoly(nv, 1, {tuple(int(k == j) for k in range(nv)): A[i][j] for j in range(nv)})
             for i in range(nv)]
    powers: dict[tuple[int, int], HomogPoly] = {}

    def power(i, e):
        if (i, e) not in powers:
            powers[i, e] = HomogPoly(nv, 0, {(0,) * nv: 1}) if e == 0 else power(i, e - 1) * forms[i]
        return powers[i, e]

    out = HomogPoly.zero(nv, p.degree)
    for m, c in p.terms.items():
        term = HomogPoly(nv, 0, {(0,) * nv: c})
        for i, e in enumerate(m):
            if e:
                term = term * power(i, e)
        out = out + term
    return out


def multiplication_matrix(p: HomogPoly, d_from: int) -> RationalMatrix:
    """Matrix of ``q -> p*q`` from degree ``d_from`` to ``d_from + deg p``."""
    n = p.n
    src = monomial_basis(n, d_from)
    dst = monomial_index(n, d_from + p.degree)
    entries = {}
    for j, mu in enumerate(src):
        for m, c in p.terms.items():
            entries[dst[_add(mu, m)], j] = c
    return RationalMatrix(len(dst), len(src), entries)


def _partials_span_echelon(s: HomogPoly, target: int) -> tuple[Echelon, int]:
    n = s.n
    idx = monomial_index(n, target)
    ech = Echelon(len(idx))
    for k in range(n + 1):
        dk = partial_derivative(s, k)
        for mu in monomial_basis(n, target - dk.degree):
            ech.add({idx[_add(mu, m)]: c for m, c in dk.terms.items()})
    return ech, len(idx)


def jacobian_smoothness_check(s: HomogPoly) -> bool:
    """True iff ``V(s)`` is smooth.

    The partials have no common zero exactly when they generate every form of
    degree ``(n+1)(d-2) + 1``.
    """
    if s.degree < 2:
        raise DegreeTooSmall(f"smoothness criterion needs degree >= 2, got {s.degree}")
    target = (s.n + 1) * (s.degree - 2) + 1
    ech, dim = _partials_span_echelon(s, target)
    return ech.rank == dim


def _small_points(n: int, bound: int):
    """Primitive integer points of P^n with coordinates in [-bound, bound], first nonzero > 0."""
    for pt in itertools.product(range(-bound, bound + 1), repeat=n + 1):
        nz = [x for x in pt if x]
        if nz and nz[0] > 0:
            yield pt


def singular_point_witness(s: HomogPoly, bound: int = 3) -> Optional[tuple[int, ...]]:
    """Search small integer points for a common zero of s and its partials."""
    partials = [partial_derivative(s, k) for k in range(s.num_vars)]
    for pt in _small_points(s.n, bound):
        if all(q.evaluate(pt) == 0 for q in partials) and s.evaluate(pt) == 0:
            return pt
    return None


# --- sampling over finite fields ------------------------------------------------


def _eval_mod(coeffs: dict[Monomial, int], pts: np.ndarray, p: int) -> np.ndarray:
    out = np.zeros(len(pts), dtype=np.int64)
    if not coeffs:
        return out
    maxdeg = max(max(m) for m in coeffs)
    pw = [[np.ones(len(pts), dtype=np.int64)] for _ in range(pts.shape[1])]
    for v in range(pts.shape[1]):
        for _ in range(maxdeg):
            pw[v].append(pw[v][-1] * pts[:, v] % p)
    for m, c in coeffs.items():
        term = np.full(len(pts), c, dtype=np.int64)
        for v, e in enumerate(m):
            if e:
                term = term * pw[v][e] % p
        out = (out + term) % p
    return out


def _plane_points(n: int, p: int, rng: random.Random) -> np.ndarray:
    """All F_p-points of a random projective plane in P^n, as ambient coordinates."""
    uvw = [(1, a, b) for a in range(p) for b in range(p)] + [(0, 1, b) for b in range(p)] + [(0, 0, 1)]
    uvw = np.array(uvw, dtype=np.int64)
    if n == 2:
        return uvw
    while True:
        frame = np.array([[rng.randrange(p) for _ in range(n + 1)] for _ in range(3)], dtype=np.int64)
        if _rank_mod_p_dense(frame.tolist(), p) == 3:
            break
    return uvw @ frame % p


def _rank_mod_p_dense(rows: list[list[int]], p: int) -> int:
    rows = [[x % p for x in r] for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][c], -1, p)
        rows[rank] = [x * inv % p for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def _exact_rank(rows: list[list[Fraction]]) -> int:
    return Echelon(len(rows[0])).extend({j: x for j, x in enumerate(r) if x} for r in rows).rank


@dataclass
class TransversalityResult:
    verdict: str  # "pass" | "fail" | "inconclusive"
    witness: Optional[tuple[int, ...]] = None
    components: tuple[int, ...] = ()
    reason: str = ""
    points_sampled: int = 0

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "witness": list(self.witness) if self.witness is not None else None,
            "components": list(self.components),
            "reason": self.reason,
            "points_sampled": self.points_sampled,
        }


def _verify_witness(polys: Sequence[HomogPoly], pt: Sequence[int]) -> bool:
    """Exact check: every poly vanishes at pt and their gradients are dependent."""
    if any(q.evaluate(pt) != 0 for q in polys):
        return False
    grads = [[partial_derivative(q, k).evaluate(pt) for k in range(q.num_vars)] for q in polys]
    return _exact_rank(grads) < len(polys)


def _lift(pt: np.ndarray, p: int) -> tuple[int, ...]:
    return tuple(int(x) if x <= p // 2 else int(x) - p for x in pt)


def normal_crossings_check(
    polys: Sequence[HomogPoly],
    primes: Sequence[int] = (101, 211, 307),
    trials: int = 2,
    seed: int = 0,
) -> TransversalityResult:
    """Probabilistic normal-crossing test for the union of the divisors ``V(polys)``.

    At every sampled F_p-point, the sections vanishing there must number at
    most n and have independent gradients mod p.  A violation is reported as
    ``fail`` only after it is verified exactly at an integer lift of the point.
    """
    polys = list(polys)
    n = polys[0].n
    for a, b in itertools.combinations(range(len(polys)), 2):
        if polys[a].is_proportional_to(polys[b]):
            return TransversalityResult("fail", None, (a, b), "identical divisors")
    rng = random.Random(seed)
    sampled = 0
    unverified = []
    for p in primes:
        reduced = [q.reduce_mod(p) for q in polys]
        grads = [[partial_derivative(q, k).reduce_mod(p) for k in range(n + 1)] for q in polys]
        if any(r is None for r in reduced) or any(g is None for gs in grads for g in gs):
            continue
        for _ in range(trials if n > 2 else 1):
            pts = _plane_points(n, p, rng)
            values = np.stack([_eval_mod(r, pts, p) for r in reduced])
            vanish = values == 0
            counts = vanish.sum(axis=0)
            hit = np.nonzero(counts >= 2)[0]
            sampled += int(len(hit))
            for idx in hit:
                comps = tuple(int(c) for c in np.nonzero(vanish[:, idx])[0])
                pt = pts[idx : idx + 1]
                rows = [[int(_eval_mod(g, pt, p)[0]) for g in grads[c]] for c in comps]
                if len(comps) > n or _rank_mod_p_dense(rows, p) < len(comps):
                    lifted = _lift(pts[idx], p)
                    if _verify_witness([polys[c] for c in comps], lifted):
                        return TransversalityResult("fail", lifted, comps,
                                                    "dependent gradients at a common zero", sampled)
                    unverified.append(comps)
    if unverified:
        return TransversalityResult("inconclusive", None, unverified[0],
                                    "non-transverse point mod p without an exact lift", sampled)
    if sampled == 0 and len(polys) > 1:
        return TransversalityResult("inconclusive", None, (), "no intersection points sampled", 0)
    return TransversalityResult("pass", None, (), "", sampled)


def pairwise_transversality_check(
    s_i: HomogPoly,
    s_j: HomogPoly,
    trials: int = 2,
    primes: Sequence[int] = (101, 211, 307),
    seed: int = 0,
) -> TransversalityResult:
    return normal_crossings_check([s_i, s_j], primes=primes, trials=trials, seed=seed)


# --- cover equations ------------------------------------------------------------


@dataclass
class CoverEquations:
    relations: list[dict]

    def to_dict(self) -> dict:
        return {"count": len(self.relations), "relations": self.relations}


def cover_equations(cover) -> CoverEquations:
    """The relations ``z_chi z_phi = (prod_i s_i^eps) z_{chi phi}`` over nontrivial pairs."""
    from .cover import epsilon  # local: cover imports nothing from here

    for i, b in enumerate(cover.branch):
        if b.section is None:
            raise MissingSection(f"branch component {i} has no section")
        if b.section.degree != b.degree:
            raise DegreeMismatch(f"section {i} has degree {b.section.degree}, expected {b.degree}")
    rels = []
    chars = cover.nontrivial_characters
    for chi in chars:
        for phi in chars:
            prod_ = chi * phi
            eps = [epsilon(cover, i, chi, phi) for i in range(cover.r)]
            rhs_deg = sum(e * b.degree for e, b in zip(eps, cover.branch))
            lhs = cover.ell(chi) + cover.ell(phi)
            if lhs != cover.ell(prod_) + rhs_deg:
                raise AssertionError(f"degree balance fails for {chi.exponents}, {phi.exponents}")
            z = lambda c: "z[" + ",".join(map(str, c.exponents)) + "]"
            factors = [f"s{i}" for i, e in enumerate(eps) if e]
            if not prod_.is_trivial():
                factors.append(z(prod_))
            rels.append({
                "chi": list(chi.exponents),
                "phi": list(phi.exponents),
                "epsilon": eps,
                "product": None if prod_.is_trivial() else list(prod_.exponents),
                "degree": lhs,
                "equation": f"{z(chi)}*{z(phi)} = " + ("*".join(factors) if factors else "1"),
            })
    return CoverEquations(rels)


def random_section(n: int, degree: int, seed: int) -> HomogPoly:
    """Dense form with nonzero integer coefficients in [-10, 10], seeded."""
    if degree < 1:
        raise ValueError("degree must be >= 1")
    rng = random.Random(seed)
    pool = [c for c in range(-10, 11) if c]
    return HomogPoly(n + 1, degree, {m: rng.choice(pool) for m in monomial_basis(n, degree)})


def binomial_dim(n: int, d: int) -> int:
    return comb(d + n, n) if d >= 0 else 0
