import os

from hypothesis import HealthCheck, settings, strategies as st

from affq.lattice import AlgebraType, GMonomial

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("ci", deadline=None, max_examples=25)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

A3 = AlgebraType("A", 3)
A4 = AlgebraType("A", 4)
B2 = AlgebraType("B", 2)
B3 = AlgebraType("B", 3)
SMALL_ALGEBRAS = [A3, B2]


def monomials(n: int, shifts=(-8, 8), max_vars: int = 4):
    var = st.tuples(st.integers(1, n), st.integers(*shifts), st.integers(-2, 2))
    return st.lists(var, max_size=max_vars).map(GMonomial)


def polynomials(n: int, max_terms: int = 4):
    from affq.lattice import QPolynomial
    term = st.tuples(monomials(n, max_vars=3), st.integers(-3, 3))
    return st.lists(term, max_size=max_terms).map(
        lambda ts: sum((QPolynomial.monomial(m, c) for m, c in ts), QPolynomial.zero()))


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
