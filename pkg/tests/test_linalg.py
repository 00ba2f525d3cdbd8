import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from covertorelli.errors import AmbientMismatch
from covertorelli.linalg import (
    Echelon,
    RationalMatrix,
    Subspace,
    intersect,
    kernel_basis,
    quotient_dim,
    rank,
    rank_mod_p,
)
from covertorelli.poly import HomogPoly, monomial_basis, partial_derivative

entries = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def matrices(draw, max_rows=6, max_cols=6):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    # sparse-ish entries so that rank deficiency actually shows up
    cell = st.one_of(st.just(Fraction(0)), st.just(Fraction(0)), entries)
    return [[draw(cell) for _ in range(c)] for _ in range(r)]


def _sympy_rank(dense):
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in dense]).rank()


def _apply(M, v):
    out = [Fraction(0)] * M.rows
    for (i, j), x in M.entries.items():
        out[i] += x * v.get(j, 0)
    return out


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_rank_matches_sympy(dense):
    M = RationalMatrix.from_dense(dense)
    r = _sympy_rank(dense)
    assert rank(M) == r
    assert rank(M.transpose()) == r
    assert rank(M, modular_prepass=True) == r
    assert rank_mod_p(M, 7) <= r


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_kernel_rank_nullity(dense):
    M = RationalMatrix.from_dense(dense)
    K = kernel_basis(M)
    assert K.dim == M.cols - rank(M)
    for v in K.vectors():
        assert all(x == 0 for x in _apply(M, v))


@settings(max_examples=40, deadline=None)
@given(matrices(6, 5), matrices(6, 5))
def test_intersection_dimension_formula(a, b):
    n = 6
    A = Subspace.span(n, [{i: x for i, x in enumerate(row) if x} for row in a])
    B = Subspace.span(n, [{i: x for i, x in enumerate(row) if x} for row in b])
    C = intersect(A, B)
    S = Subspace.span(n, A.vectors() + B.vectors())
    assert C.dim == A.dim + B.dim - S.dim
    assert A.contains_subspace(C) and B.contains_subspace(C)


def test_seeded_random_kernel():
    rng = random.Random(5)
    dense = [[Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(8)] for _ in range(5)]
    assert _sympy_rank(dense) == 5
    assert kernel_basis(RationalMatrix.from_dense(dense)).dim == 3


def test_random_subspaces_of_q6_meet_in_dimension_two():
    rng = random.Random(11)
    for _ in range(5):
        vecs = [{j: Fraction(rng.randint(-6, 6)) for j in range(6)} for _ in range(8)]
        A = Subspace.span(6, vecs[:4])
        B = Subspace.span(6, vecs[4:])
        assert A.dim == B.dim == 4
        assert intersect(A, B).dim == 2


def test_fermat_jacobian_generators():
    # x_j * dF/dx_i for the Fermat sextic: nine distinct monomials x_j x_i^5
    F = HomogPoly.fermat(2, 6)
    basis = monomial_basis(2, 6)
    idx = {m: k for k, m in enumerate(basis)}
    cols = []
    support = set()
    for i in range(3):
        dF = partial_derivative(F, i)
        for j in range(3):
            xj = HomogPoly.monomial(tuple(int(v == j) for v in range(3)))
            g = xj * dF
            cols.append({idx[m]: c for m, c in g.terms.items()})
            support |= set(g.terms)
    M = RationalMatrix.from_columns(len(basis), cols)
    assert M.shape == (28, 9)
    assert len(support) == 9
    assert rank(M) == 9
    assert quotient_dim(28, Subspace.span(28, cols)) == 19


def test_echelon_normal_form_and_canonical_pivots():
    ech = Echelon(4).extend([{0: 1, 1: 1}, {1: 2, 2: Fraction(1, 2)}])
    assert ech.pivots == [0, 1]
    assert ech.contains({0: 2, 1: 4, 2: Fraction(1, 2)})
    nf = ech.normal_form({0: 1})
    assert set(nf) <= {2, 3}
    # v - nf(v) lies in the span
    diff = {0: Fraction(1)}
    for k, x in nf.items():
        diff[k] = diff.get(k, 0) - x
    assert ech.contains(diff)
    other = Echelon(4).extend([{1: 2, 2: Fraction(1, 2)}, {0: 3, 1: 3}])
    assert other.pivots == ech.pivots


def test_subspace_equality_and_mismatch():
    A = Subspace.span(3, [{0: 1}, {1: 1}])
    B = Subspace.span(3, [{0: 1, 1: 1}, {0: 1, 1: -1}])
    assert A == B
    with pytest.raises(AmbientMismatch):
        intersect(A, Subspace.zero(4))
    assert intersect(A, Subspace.zero(3)).dim == 0


def test_matrix_product_and_identity():
    M = RationalMatrix.from_dense([[1, 2], [3, Fraction(1, 3)]])
    assert M @ RationalMatrix.identity(2) == M
    assert (M @ M).to_dense() == [[7, Fraction(8, 3)], [4, Fraction(55, 9)]]
    assert M.scale_row(0, 0).to_dense()[0] == [0, 0]


def test_modular_prepass_can_undercount():
    # det = p, so the rank collapses mod p but the exact rank is 2
    p = 101
    M = RationalMatrix.from_dense([[1, 0], [0, p]])
    assert rank_mod_p(M, p) == 1
    assert rank(M, modular_prepass=True, prime=p) == 2
