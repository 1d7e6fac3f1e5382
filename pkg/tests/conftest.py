import sys
from fractions import Fraction
from pathlib import Path

from hypothesis import HealthCheck, settings, strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from prseq.linalg import RationalMatrix  # noqa: E402

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

rationals = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 4))
signs = st.sampled_from([Fraction(-1), Fraction(0), Fraction(1)])


@st.composite
def symmetric_matrices(draw, min_n=1, max_n=5, entries=None, zero_diagonal=False):
    entries = entries if entries is not None else st.one_of(rationals, signs)
    n = draw(st.integers(min_n, max_n))
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            v = Fraction(0) if (i == j and zero_diagonal) else draw(entries)
            rows[i][j] = rows[j][i] = v
    return RationalMatrix(rows)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for number in sorted(results):
            terminalreporter.write_line(results[number])
