import pytest

from covertorelli.cover import BranchComponent, derive_eigensheaf_degrees
from covertorelli.groups import AbelianGroup
from covertorelli.ivhs import CoverInvariants
from covertorelli.poly import HomogPoly, random_section

BIDOUBLE_LABELS = ((1, 0), (0, 1), (1, 1))


def make_cover(divisors, n, items, require_generation=True):
    """items: (label, degree, section or seed or None)."""
    G = AbelianGroup(tuple(divisors))
    comps = []
    for label, degree, s in items:
        if isinstance(s, int):
            s = random_section(n, degree, s)
        comps.append(BranchComponent(G.element(label), degree, s))
    return derive_eigensheaf_degrees(n, G, comps, require_generation)


def double_sextic(section=None):
    return make_cover((2,), 2, [((1,), 6, section or HomogPoly.fermat(2, 6))])


def bidouble_quartics(seeds=(1, 2, 3)):
    return make_cover((2, 2), 2, [(lab, 4, s) for lab, s in zip(BIDOUBLE_LABELS, seeds)])


@pytest.fixture(scope="session")
def sextic_cover():
    return double_sextic()


@pytest.fixture(scope="session")
def bidouble_cover():
    return bidouble_quartics()


@pytest.fixture(scope="session")
def sextic_inv(sextic_cover):
    return CoverInvariants(sextic_cover)


@pytest.fixture(scope="session")
def bidouble_inv(bidouble_cover):
    return CoverInvariants(bidouble_cover)


ACCEPTANCE_LINES: dict[int, str] = {}


def record(criterion: int, ok: bool, detail: str) -> None:
    ACCEPTANCE_LINES[criterion] = f"criterion {criterion}: {'PASS' if ok else 'FAIL'}  {detail}"


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
