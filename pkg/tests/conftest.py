from __future__ import annotations

from fractions import Fraction

from hypothesis import HealthCheck, settings, strategies as st

from kcontact.calculus import DiffForm, VectorField
from kcontact.symcore import Chart, Point, TrigPoly, circle_point

settings.register_profile(
    "kit",
    derandomize=True,
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("kit")

# x, y linear; th angular -> slots (x, y, sin th, cos th)
MIXED = Chart.of("x", "y", "th", angular=("th",))
PLANE = Chart.of("x1", "x2", "x3")

small_q = st.fractions(min_value=-5, max_value=5, max_denominator=6)


def polys(chart: Chart, max_deg: int = 2, max_terms: int = 4):
    mono = st.tuples(*[st.integers(0, max_deg) for _ in range(chart.nslots)])
    return st.dictionaries(mono, small_q, max_size=max_terms).map(lambda d: TrigPoly(chart, d))


def fields(chart: Chart, max_deg: int = 2, max_terms: int = 3):
    return st.lists(polys(chart, max_deg, max_terms), min_size=chart.dim, max_size=chart.dim).map(
        lambda cs: VectorField(chart, cs)
    )


def one_forms(chart: Chart, max_deg: int = 2):
    return st.lists(polys(chart, max_deg, 3), min_size=chart.dim, max_size=chart.dim).map(
        lambda cs: DiffForm.one_form(chart, cs)
    )


def points(chart: Chart):
    def build(vals):
        out = []
        for (_, kind), v in zip(chart.coords, vals):
            out.append(v if kind == "linear" else circle_point(v))
        return Point(chart, tuple(out))

    return st.lists(small_q, min_size=chart.dim, max_size=chart.dim).map(build)


def q(v) -> Fraction:
    return Fraction(v)


# acceptance summary lines, filled by test_acceptance.py
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])
