import pytest

from covertorelli.errors import EmptyCharacterSet, SingularInput
from covertorelli.ivhs import (
    CoverInvariants,
    TangentSpace,
    bott_row,
    certify_cover,
    full_kernel_intersection,
    hodge_eigentable,
    hodge_row,
    invariant_tangent_dim,
    kernel_analysis,
    lemma_hypotheses,
    rho_factor,
    rho_map,
    torelli_certificate,
)
from covertorelli.jacobi import jacobi_dim
from covertorelli.linalg import kernel_basis, rank
from covertorelli.poly import HomogPoly, binomial_dim

from conftest import double_sextic, make_cover


def test_sextic_table(sextic_inv):
    table = hodge_eigentable(sextic_inv)
    assert table.rows == {(1,): (1, 19, 1)}
    assert table.invariant == (0, 1, 0)
    assert table.totals == (1, 20, 1)
    assert table.serre_symmetric(sextic_inv.cover.group)


def test_bidouble_table(bidouble_inv):
    table = hodge_eigentable(bidouble_inv)
    assert set(table.rows.values()) == {(3, 21, 3)}
    assert table.totals == (9, 64, 9)
    assert table.serre_symmetric(bidouble_inv.cover.group)


def test_trivial_character_gives_bott_row(sextic_cover):
    assert hodge_row(sextic_cover, sextic_cover.group.trivial_character()) == bott_row(2) == (0, 1, 0)


def test_threaded_table_is_identical(bidouble_cover, bidouble_inv):
    threaded = hodge_eigentable(CoverInvariants(bidouble_cover, threads=4))
    assert threaded.to_dict() == hodge_eigentable(bidouble_inv).to_dict()


def test_invariant_tangent_dims(sextic_inv, bidouble_inv):
    # sections modulo scaling and PGL(3): (28 - 1) - 8 and 3*(15 - 1) - 8
    assert invariant_tangent_dim(sextic_inv) == (binomial_dim(2, 6) - 1) - 8 == 19
    assert invariant_tangent_dim(bidouble_inv) == 3 * (binomial_dim(2, 4) - 1) - 8 == 34
    quartic = make_cover((2,), 2, [((1,), 4, 5)])
    assert invariant_tangent_dim(quartic) == (binomial_dim(2, 4) - 1) - 8 == 6


def test_tangent_space(sextic_cover, bidouble_cover):
    ts = TangentSpace(sextic_cover)
    assert ts.dim == 27
    s = sextic_cover.branch[0].section
    assert ts.vector(0, s) == {}
    assert ts.vector(0, s * 5) == {}
    assert TangentSpace(bidouble_cover).block_dims == [14, 14, 14]
    assert ts.derivation_subspace().dim == 8


def test_sextic_rho(sextic_inv):
    cover = sextic_inv.cover
    chi = cover.nontrivial_characters[0]
    ts = TangentSpace(cover)
    R = rho_map(sextic_inv, chi, ts)
    assert rank(R) == 19
    K = kernel_basis(R)
    assert K.dim == 8
    assert K == ts.derivation_subspace()


def test_bidouble_rho_rank(bidouble_inv):
    cover = bidouble_inv.cover
    chi1 = cover.group.character((0, 1))
    ctx = bidouble_inv.char_context(chi1)
    r = rank(rho_map(bidouble_inv, chi1))
    assert r == rank(rho_factor(bidouble_inv, chi1)) == jacobi_dim(ctx, 1, 0) == 20
    assert kernel_basis(rho_map(bidouble_inv, chi1)).dim == 42 - 20


def test_rho_rejects_trivial_character(sextic_inv):
    with pytest.raises(ValueError):
        rho_map(sextic_inv, sextic_inv.cover.group.trivial_character())


def test_kernel_analysis_double_cover_is_empty(sextic_inv):
    with pytest.raises(EmptyCharacterSet):
        kernel_analysis(sextic_inv, 0)


def test_kernel_analysis_bidouble(bidouble_inv):
    res = kernel_analysis(bidouble_inv, 0)
    assert res["characters"] == [[0, 1]]
    assert res["K_dim"] == res["E_dim"] == 22
    assert (res["block_dim"], res["derivation_dim"]) == (14, 8)
    assert res["equal"]


def test_full_intersection_bidouble(bidouble_inv):
    res = full_kernel_intersection(bidouble_inv)
    assert res["dim"] == 8
    assert res["equals_derivations"]


def test_torelli_sextic(sextic_inv):
    cert = torelli_certificate(sextic_inv)
    assert cert.verified
    (pair,) = cert.pairs
    assert pair["source_dims"] == [1, 19] and pair["target_dim"] == 19 and pair["rank"] == 19
    assert cert.to_dict()["i_part"] == "not checked"


def test_torelli_bidouble(bidouble_inv):
    cert = torelli_certificate(bidouble_inv)
    assert len(cert.pairs) == 9
    assert cert.verified
    assert cert.hypotheses["A"]


def test_certify_rejects_singular_branch():
    bad = double_sextic(HomogPoly(3, 6, {(6, 0, 0): 1, (0, 6, 0): 1}))
    with pytest.raises(SingularInput) as err:
        certify_cover(bad)
    assert err.value.witness == (0, 0, 1)


def test_certify_rejects_tangent_branches():
    c1 = HomogPoly(3, 4, {(4, 0, 0): -1, (0, 2, 2): 1, (0, 4, 0): 1, (0, 0, 4): 1})
    c2 = c1 + HomogPoly.monomial((0, 4, 0)) * 2
    labels = ((1, 0), (0, 1))
    cover = make_cover((2, 2), 2, [(lab, 4, s) for lab, s in zip(labels, (c1, c2))])
    # both quartics are smooth; they meet tangentially along x1 = 0
    with pytest.raises(SingularInput) as err:
        certify_cover(cover)
    w = err.value.witness
    assert w[1] == 0 and c1.evaluate(w) == 0 and c2.evaluate(w) == 0


def test_lemma_hypotheses(sextic_cover, bidouble_cover):
    assert lemma_hypotheses(bidouble_cover)["property_AB"]["A"]
    hyp = lemma_hypotheses(sextic_cover)
    assert hyp["property_AB"]["inconclusive"]
    assert all(hyp["gamma_membership"].values())
