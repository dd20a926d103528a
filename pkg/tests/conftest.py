from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import settings, strategies as st

from algstar.forms import FourierForm
from algstar.radial import IM, ModelParams, RadialSymbol

settings.register_profile("algstar", deadline=None, max_examples=30, derandomize=True)
settings.load_profile("algstar")

small = st.fractions(min_value=-3, max_value=3, max_denominator=5)


@st.composite
def monomials(draw):
    m = draw(st.integers(-3, 3))
    s = Fraction(draw(st.integers(-4, 4)), 2)
    t = draw(st.integers(-1, 2))
    re, im = draw(small), draw(small)
    return RadialSymbol.monomial(m, s, re, t) + RadialSymbol.monomial(m, s, im, t) * IM


@st.composite
def symbols(draw, max_terms=3):
    out = RadialSymbol.zero()
    for mono in draw(st.lists(monomials(), min_size=1, max_size=max_terms)):
        out = out + mono
    return out


@st.composite
def forms(draw, degree=None, basis="e", max_terms=3):
    p = draw(st.integers(0, 4)) if degree is None else degree
    idx = list(combinations(range(4), p))
    out = FourierForm.zero(p, basis)
    for _ in range(draw(st.integers(1, max_terms))):
        I = draw(st.sampled_from(idx))
        k = draw(st.integers(-2, 2))
        out = out + FourierForm.basis_form(I, draw(symbols(2)), k, basis)
    return out


@pytest.fixture
def params():
    return ModelParams()


_ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = []


@pytest.fixture
def acceptance(request):
    """Record one PASS/FAIL line per criterion; printed in the terminal summary."""
    lines = request.config.stash[_ACCEPTANCE]

    def record(number: int, ok: bool, detail: str) -> None:
        lines.append((number, f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"))

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
