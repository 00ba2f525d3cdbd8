"""Sparse exact linear algebra over Q.

Vectors are sparse dicts ``{index: value}``.  Elimination keeps integer rows
(denominators are cleared on entry and each row is divided by its content),
so no Fraction arithmetic happens inside the inner loops.  Pivots are always
the smallest nonzero index, which makes the pivot set a canonical invariant
of the spanned subspace.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

from .errors import AmbientMismatch

__all__ = [
    "RationalMatrix",
    "Subspace",
    "Echelon",
    "rank",
    "rank_mod_p",
    "kernel_basis",
    "intersect",
    "quotient_dim",
    "DEFAULT_PRIME",
]

DEFAULT_PRIME = 2**61 - 1


def _integral(v: Mapping[int, object]) -> dict[int, int]:
    """Scale a rational sparse vector to a primitive integer vector."""
    den = 1
    for x in v.values():
        if isinstance(x, Fraction):
            den = lcm(den, x.denominator)
    out = {}
    for k, x in v.items():
        if x:
            y = x * den
            out[k] = y.numerator if isinstance(y, Fraction) else int(y)
    return _primitive(out)


def _primitive(v: dict[int, int]) -> dict[int, int]:
    g = 0
    for x in v.values():
        g = gcd(g, x)
        if g == 1:
            return v
    if g > 1:
        return {k: x // g for k, x in v.items()}
    return v


class Echelon:
    """Incremental row echelon form of a subspace of Q^N.

    ``rows`` maps each pivot index to an integer row whose smallest nonzero
    index is that pivot.
    """

    def __init__(self, ambient_dim: int):
        self.ambient_dim = ambient_dim
        self.rows: dict[int, dict[int, int]] = {}
        self._reduced: dict[int, dict[int, int]] | None = None

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> list[int]:
        return sorted(self.rows)

    def _reduce(self, v: dict[int, int]) -> dict[int, int]:
        """Clear every pivot coordinate of ``v``; the result is defined up to scale."""
        rows = self.rows
        while v:
            hits = [c for c in v if c in rows]
            if not hits:
                break
            c = min(hits)
            row = rows[c]
            p = row[c]
            a = v[c]
            g = gcd(p, a)
            p //= g
            a //= g
            if p != 1:
                v = {k: x * p for k, x in v.items()}
            for k, x in row.items():
                y = v.get(k, 0) - a * x
                if y:
                    v[k] = y
                else:
                    v.pop(k, None)
            v = _primitive(v)
        return v

    def add(self, v: Mapping[int, object]) -> bool:
        """Insert ``v``; return True iff it was independent of the current rows."""
        w = self._reduce(_integral(v))
        if not w:
            return False
        self.rows[min(w)] = _primitive(w)
        self._reduced = None
        return True

    def extend(self, vectors: Iterable[Mapping[int, object]]) -> "Echelon":
        for v in vectors:
            self.add(v)
        return self

    def contains(self, v: Mapping[int, object]) -> bool:
        w = self._reduce(_integral(v))
        return not w

    def normal_form(self, v: Mapping[int, object]) -> dict[int, Fraction]:
        """Unique representative of ``v`` modulo the span, supported off the pivots."""
        red = self.reduced_rows()
        out: dict[int, Fraction] = {}
        for k, x in v.items():
            if not x:
                continue
            row = red.get(k)
            if row is None:
                out[k] = out.get(k, 0) + Fraction(x)
                continue
            coef = Fraction(x) / row[k]
            for j, y in row.items():
                if j != k:
                    out[j] = out.get(j, 0) - coef * y
        return {k: x for k, x in out.items() if x}

    def reduced_rows(self) -> dict[int, dict[int, int]]:
        """Integer rows in reduced echelon form (zero at every other pivot)."""
        if self._reduced is not None:
            return self._reduced
        done: dict[int, dict[int, int]] = {}
        for c in sorted(self.rows, reverse=True):
            v = dict(self.rows[c])
            while True:
                hits = [k for k in v if k != c and k in done]
                if not hits:
                    break
                k = min(hits)
                row = done[k]
                p, a = row[k], v[k]
                g = gcd(p, a)
                p //= g
                a //= g
                v = {j: x * p for j, x in v.items()}
                for j, x in row.items():
                    y = v.get(j, 0) - a * x
                    if y:
                        v[j] = y
                    else:
                        v.pop(j, None)
                v = _primitive(v)
            done[c] = v
        self._reduced = done
        return done


class RationalMatrix:
    """Sparse exact matrix; treat as immutable once built."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Mapping[tuple[int, int], object] | None = None):
        self.rows = rows
        self.cols = cols
        clean = {}
        for (i, j), x in (entries or {}).items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise IndexError(f"entry {(i, j)} outside {rows}x{cols}")
            x = Fraction(x)
            if x:
                clean[i, j] = x
        self.entries = clean

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[object]]) -> "RationalMatrix":
        rows = len(data)
        cols = len(data[0]) if rows else 0
        return cls(rows, cols, {(i, j): x for i, r in enumerate(data) for j, x in enumerate(r) if x})

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[Mapping[int, object]]) -> "RationalMatrix":
        return cls(rows, len(columns), {(i, j): x for j, col in enumerate(columns) for i, x in col.items()})

    @classmethod
    def identity(cls, k: int) -> "RationalMatrix":
        return cls(k, k, {(i, i): 1 for i in range(k)})

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def to_dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (i, j), x in self.entries.items():
            out[i][j] = x
        return out

    def row_vectors(self) -> list[dict[int, Fraction]]:
        out = [dict() for _ in range(self.rows)]
        for (i, j), x in self.entries.items():
            out[i][j] = x
        return out

    def column_vectors(self) -> list[dict[int, Fraction]]:
        out = [dict() for _ in range(self.cols)]
        for (i, j), x in self.entries.items():
            out[j][i] = x
        return out

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(self.cols, self.rows, {(j, i): x for (i, j), x in self.entries.items()})

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        by_row: dict[int, list] = {}
        for (k, j), x in other.entries.items():
            by_row.setdefault(k, []).append((j, x))
        out: dict[tuple[int, int], Fraction] = {}
        for (i, k), x in self.entries.items():
            for j, y in by_row.get(k, ()):
                out[i, j] = out.get((i, j), 0) + x * y
        return RationalMatrix(self.rows, other.cols, out)

    def scale_row(self, i: int, c) -> "RationalMatrix":
        return RationalMatrix(self.rows, self.cols,
                              {(a, b): x * c if a == i else x for (a, b), x in self.entries.items()})

    def scale_col(self, j: int, c) -> "RationalMatrix":
        return RationalMatrix(self.rows, self.cols,
                              {(a, b): x * c if b == j else x for (a, b), x in self.entries.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalMatrix) and self.shape == other.shape and self.entries == other.entries

    def __repr__(self) -> str:
        return f"RationalMatrix({self.rows}x{self.cols}, nnz={len(self.entries)})"


def rank_mod_p(M: RationalMatrix, p: int = DEFAULT_PRIME) -> int:
    """Rank of M reduced mod p.  Never exceeds the rational rank."""
    rows: list[dict[int, int]] = []
    for v in M.row_vectors():
        w = {}
        for j, x in v.items():
            if x.denominator % p == 0:
                raise ZeroDivisionError(f"denominator divisible by {p}")
            y = x.numerator * pow(x.denominator, -1, p) % p
            if y:
                w[j] = y
        rows.append(w)
    pivots: dict[int, dict[int, int]] = {}
    for w in rows:
        while w:
            c = min(w)
            if c not in pivots:
                inv = pow(w[c], -1, p)
                pivots[c] = {k: x * inv % p for k, x in w.items()}
                break
            a = w[c]
            for k, x in pivots[c].items():
                y = (w.get(k, 0) - a * x) % p
                if y:
                    w[k] = y
                else:
                    w.pop(k, None)
    return len(pivots)


def rank(M: RationalMatrix, modular_prepass: bool = False, prime: int = DEFAULT_PRIME) -> int:
    """Exact rank.

    The optional modular pass only short-cuts the case where the mod-p rank
    is already maximal; otherwise the exact elimination decides.
    """
    if not M.entries:
        return 0
    if modular_prepass:
        try:
            rp = rank_mod_p(M, prime)
        except ZeroDivisionError:
            rp = -1
        if rp == min(M.rows, M.cols):
            return rp
    # rank over the shorter side
    vectors = M.row_vectors() if M.rows <= M.cols else M.column_vectors()
    ambient = M.cols if M.rows <= M.cols else M.rows
    return Echelon(ambient).extend(vectors).rank


@dataclass(frozen=True)
class Subspace:
    """Subspace of Q^ambient_dim spanned by independent columns of ``basis``."""

    ambient_dim: int
    basis: RationalMatrix

    def __post_init__(self):
        if self.basis.rows != self.ambient_dim:
            raise AmbientMismatch(f"basis has {self.basis.rows} rows, ambient is {self.ambient_dim}")

    @classmethod
    def span(cls, ambient_dim: int, vectors: Iterable[Mapping[int, object]]) -> "Subspace":
        """Keep, in order, each vector that is independent of the earlier ones."""
        ech = Echelon(ambient_dim)
        kept = [dict(v) for v in vectors if ech.add(v)]
        return cls(ambient_dim, RationalMatrix.from_columns(ambient_dim, kept))

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, RationalMatrix(ambient_dim, 0))

    @property
    def dim(self) -> int:
        return self.basis.cols

    def vectors(self) -> list[dict[int, Fraction]]:
        return self.basis.column_vectors()

    def echelon(self) -> Echelon:
        return Echelon(self.ambient_dim).extend(self.vectors())

    def contains(self, v: Mapping[int, object]) -> bool:
        return self.echelon().contains(v)

    def contains_subspace(self, other: "Subspace") -> bool:
        if other.ambient_dim != self.ambient_dim:
            raise AmbientMismatch("ambient dimensions differ")
        ech = self.echelon()
        return all(ech.contains(v) for v in other.vectors())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace) or other.ambient_dim != self.ambient_dim:
            return False
        return self.dim == other.dim and self.contains_subspace(other)

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim} in Q^{self.ambient_dim})"


def kernel_basis(M: RationalMatrix) -> Subspace:
    """Basis of ``{v : M v = 0}``, one primitive integer vector per free column."""
    ech = Echelon(M.cols).extend(M.row_vectors())
    red = ech.reduced_rows()
    free = [j for j in range(M.cols) if j not in red]
    basis = []
    for f in free:
        v: dict[int, Fraction] = {f: Fraction(1)}
        for c, row in red.items():
            x = row.get(f)
            if x:
                v[c] = Fraction(-x, row[c])
        basis.append(_integral(v))
    return Subspace(M.cols, RationalMatrix.from_columns(M.cols, basis))


def intersect(A: Subspace, B: Subspace) -> Subspace:
    if A.ambient_dim != B.ambient_dim:
        raise AmbientMismatch(f"{A.ambient_dim} != {B.ambient_dim}")
    if A.dim == 0 or B.dim == 0:
        return Subspace.zero(A.ambient_dim)
    # kernel of [A | -B] gives pairs (u, w) with A u = B w
    entries = dict(A.basis.entries)
    for (i, j), x in B.basis.entries.items():
        entries[i, A.dim + j] = -x
    K = kernel_basis(RationalMatrix(A.ambient_dim, A.dim + B.dim, entries))
    vectors = []
    cols = A.basis.column_vectors()
    for u in K.vectors():
        v: dict[int, Fraction] = {}
        for j, c in u.items():
            if j < A.dim:
                for i, x in cols[j].items():
                    v[i] = v.get(i, 0) + c * x
        vectors.append({i: x for i, x in v.items() if x})
    return Subspace.span(A.ambient_dim, vectors)


def quotient_dim(total_dim: int, image: Subspace) -> int:
    if image.ambient_dim != total_dim:
        raise AmbientMismatch(f"image lives in Q^{image.ambient_dim}, not Q^{total_dim}")
    return total_dim - image.dim
