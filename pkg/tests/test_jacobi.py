import pytest

from covertorelli.errors import ContextMismatch, SingularInput, TopPieceNotOneDimensional
from covertorelli.jacobi import (
    JacobiContext,
    duality_pairing,
    duality_report,
    image_generators,
    jacobi_dim,
    multiply,
    piece_dimension,
    top_piece_check,
)
from covertorelli.linalg import RationalMatrix, rank
from covertorelli.poly import HomogPoly, monomial_basis

from conftest import double_sextic


@pytest.fixture(scope="module")
def fermat_ctx(sextic_cover):
    return JacobiContext.full(sextic_cover)


@pytest.fixture(scope="module")
def chi1_ctx(bidouble_cover):
    chi1 = bidouble_cover.group.character((0, 1))
    return JacobiContext.for_character(bidouble_cover, chi1)


def _socle_oracle(d, n=2):
    # Jacobian ring of the Fermat form: monomials with all exponents <= d-2
    return {deg: sum(1 for m in monomial_basis(n, deg) if max(m) <= d - 2) for deg in range(0, 3 * (d - 2) + 1)}


def test_piece_dimension_examples(fermat_ctx, chi1_ctx):
    assert piece_dimension(fermat_ctx, 1, 0) == 28
    assert chi1_ctx.components == (1, 2)
    assert piece_dimension(chi1_ctx, 1, 1) == 42
    assert piece_dimension(fermat_ctx, 0, 0) == 1


def test_image_ranks(fermat_ctx, chi1_ctx):
    assert rank(image_generators(fermat_ctx, 1, 0)) == 9
    assert rank(image_generators(chi1_ctx, 1, 1)) == 21
    assert image_generators(fermat_ctx, 1, -20).rows == 0


def test_fermat_pieces_match_jacobian_ring(fermat_ctx):
    # R^1_t is the Jacobian ring in degree t+6, R^2_t in degree t+12
    oracle = _socle_oracle(6)
    for t in range(-6, 1):
        assert jacobi_dim(fermat_ctx, 1, t) == oracle.get(t + 6, 0)
    assert jacobi_dim(fermat_ctx, 1, 0) == 19
    assert jacobi_dim(fermat_ctx, 2, 0) == oracle[12] == 1
    assert jacobi_dim(fermat_ctx, 0, 0) == 1


def test_top_piece(fermat_ctx, chi1_ctx):
    assert fermat_ctx.top_twist == 0
    assert top_piece_check(fermat_ctx)
    assert top_piece_check(chi1_ctx)


def test_top_piece_needs_smooth_sections():
    bad = double_sextic(HomogPoly(3, 6, {(6, 0, 0): 1, (0, 6, 0): 1}))
    with pytest.raises(SingularInput):
        top_piece_check(JacobiContext.full(bad))


def test_multiply_by_one_is_identity(fermat_ctx):
    M = multiply(fermat_ctx, (0, 0), (1, 0))
    assert M == RationalMatrix.identity(19)


def test_fermat_multiplication_surjective(fermat_ctx):
    assert rank(multiply(fermat_ctx, (0, 0), (1, 0))) == 19


def test_multiply_rejects_foreign_context(fermat_ctx, chi1_ctx):
    with pytest.raises(ContextMismatch):
        multiply(fermat_ctx, (0, 0), (1, 0), other=chi1_ctx)
    same = JacobiContext.full(fermat_ctx.cover)
    assert multiply(fermat_ctx, (0, 0), (1, 0), other=same).shape == (19, 19)


def test_image_products_vanish(fermat_ctx):
    # verify=True multiplies every image generator by the other basis and
    # checks that the product reduces to zero in the target
    M = multiply(fermat_ctx, (1, -3), (1, 0), verify=True)
    assert M.rows == jacobi_dim(fermat_ctx, 2, -3)
    gen = fermat_ctx.piece(1, 0).generators()[0]
    assert fermat_ctx.piece(1, 0).normal_form(gen) == {}


def test_duality_pairing_fermat(fermat_ctx):
    P = duality_pairing(fermat_ctx, 1, 0)
    assert P.shape == (19, 19)
    assert rank(P) == 19
    P0 = duality_pairing(fermat_ctx, 0, 0)
    P2 = duality_pairing(fermat_ctx, 2, 0)
    assert P0.shape == (1, 1) and rank(P0) == 1
    assert P2 == P0.transpose()


def test_duality_transpose_symmetry(chi1_ctx):
    t = 1
    A = duality_pairing(chi1_ctx, 0, t)
    B = duality_pairing(chi1_ctx, 2, chi1_ctx.partner_twist(t))
    assert A == B.transpose()


def test_duality_report_fields(chi1_ctx):
    rep = duality_report(chi1_ctx, 1, 1)
    assert rep["dim"] == rep["partner_dim"] == rep["pairing_rank"] == 21
    assert rep["nondegenerate"]
    assert rep["hypotheses"]["holds"]


def test_pairing_needs_one_dimensional_top():
    # x0^6 + x1^6 is singular, so its Jacobian ring has a large degree-12 piece
    bad = double_sextic(HomogPoly(3, 6, {(6, 0, 0): 1, (0, 6, 0): 1}))
    ctx = JacobiContext.full(bad)
    assert jacobi_dim(ctx, 2, ctx.top_twist) > 1
    with pytest.raises(TopPieceNotOneDimensional):
        duality_pairing(ctx, 0, 0)
