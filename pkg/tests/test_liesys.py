from __future__ import annotations

import io
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from kcontact import catalog
from kcontact.distrib import random_points
from kcontact.liesys import (
    IntegrationError,
    ISO2Element,
    TDepCoefficients,
    check_superposition,
    compile_field,
    convergence_order,
    integrate_rk4,
    iso2_action,
    unicycle_error,
    wrap_angle,
)
from kcontact.parser import parse_chart, parse_vector_field
from kcontact.symcore import circle_point


def basis():
    f = catalog.zero_trailer_fields()
    return [f["X1"], f["X2"], f["X3"]]


G = ISO2Element(Fraction(3, 5), Fraction(4, 5), (1, -2))


class TestCoefficients:
    def test_parse_and_eval(self):
        b = TDepCoefficients.parse(["1", "t", "1/2*t^2 - 3"])
        assert b(2.0) == [1.0, 2.0, -1.0]
        assert str(b) == "1, t, 1/2*t^2 - 3"

    def test_zero(self):
        assert TDepCoefficients.parse(["0"])(5.0) == [0.0]


class TestRK4:
    def test_linear_flow(self):
        r1 = parse_chart("x1")
        traj = integrate_rk4([parse_vector_field("d_x1", r1)], TDepCoefficients.constant(1), [0.0], (0, 1), 1e-3)
        assert abs(traj.final()[0] - 1) <= 1e-12
        assert len(traj.times) == 1001
        assert all(a < b for a, b in zip(traj.times, traj.times[1:]))

    def test_unicycle(self):
        traj = integrate_rk4(basis(), TDepCoefficients.constant(1, 1, 0), [0, 0, 0], (0, math.pi), 1e-3)
        for t, x in zip(traj.times[::100], traj.states[::100]):
            assert abs(x[0] - math.sin(t)) < 1e-8
            assert abs(x[1] - (1 - math.cos(t))) < 1e-8

    def test_order(self):
        assert 3.7 <= convergence_order(basis()) <= 4.3
        assert 12 < unicycle_error(basis(), 32) / unicycle_error(basis(), 64) < 20

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            integrate_rk4(basis(), TDepCoefficients.constant(1, 1, 0), [0, 0, 0], (0, 1), 0)
        with pytest.raises(ValueError):
            integrate_rk4(basis(), TDepCoefficients.constant(1, 1), [0, 0, 0], (0, 1), 0.1)
        with pytest.raises(ValueError):
            integrate_rk4(basis(), TDepCoefficients.constant(1, 1, 0), [0, 0], (0, 1), 0.1)

    def test_blow_up(self):
        r1 = parse_chart("x1")
        with pytest.raises(IntegrationError):
            integrate_rk4([parse_vector_field("x1^2*d_x1", r1)], TDepCoefficients.constant(1), [1.0], (0, 2), 0.01)

    def test_csv(self):
        traj = integrate_rk4(basis(), TDepCoefficients.constant(1, 1, 0), [0, 0, 3.0], (0, 1), 0.5)
        text = traj.to_csv()
        lines = text.splitlines()
        assert lines[0] == "t,xi1,xi2,theta0"
        assert len(lines) == 4
        last = [float(v) for v in lines[-1].split(",")]
        assert -math.pi < last[3] <= math.pi  # wrapped
        assert last[3] == pytest.approx(wrap_angle(traj.final()[2]))
        assert lines[1] == "0,0,0,3"


class TestFloatEvaluation:
    @pytest.mark.parametrize("name", catalog.list_entries())
    def test_matches_exact(self, name):
        e = catalog.get_entry(name)
        pool = list(e.generators) + list(e.vg_basis) + [f for r in e.symmetry_candidates for f in r.fields]
        pts = random_points(e.chart, 20, "float-check")
        for x in pool:
            f = compile_field(x)
            for p in pts:
                raw = [float(v) if kind == "linear" else math.atan2(v[0], v[1])
                       for (_, kind), v in zip(e.chart.coords, p.values)]
                exact = [float(v) for v in x.evaluate(p)]
                for a, b in zip(f(raw), exact):
                    assert a == pytest.approx(b, rel=1e-12, abs=1e-9)


class TestISO2:
    def test_identity(self):
        assert iso2_action(ISO2Element.identity(), [0.3, -1.0, 2.0]) == [0.3, -1.0, 2.0]

    def test_quarter_turn(self):
        g = ISO2Element(1, 0)
        x = iso2_action(g, [1.0, 0.0, 0.0])
        assert x[0] == pytest.approx(0) and x[1] == pytest.approx(1) and x[2] == pytest.approx(math.pi / 2)

    def test_off_circle(self):
        with pytest.raises(ValueError):
            ISO2Element(1, 1)

    @given(st.fractions(-3, 3, max_denominator=5), st.fractions(-3, 3, max_denominator=5),
           st.tuples(st.fractions(-2, 2, max_denominator=4), st.fractions(-2, 2, max_denominator=4)),
           st.tuples(st.fractions(-2, 2, max_denominator=4), st.fractions(-2, 2, max_denominator=4)),
           st.tuples(st.floats(-2, 2), st.floats(-2, 2), st.floats(-3, 3)))
    def test_left_action(self, t1, t2, l1, l2, x):
        g1 = ISO2Element(*circle_point(t1), l1)
        g2 = ISO2Element(*circle_point(t2), l2)
        g12 = g1 * g2
        assert g12.s**2 + g12.c**2 == 1
        a = iso2_action(g1, iso2_action(g2, list(x)))
        b = iso2_action(g12, list(x))
        assert a[0] == pytest.approx(b[0], abs=1e-12) and a[1] == pytest.approx(b[1], abs=1e-12)
        assert wrap_angle(a[2] - b[2]) == pytest.approx(0, abs=1e-12)
        assert (g1 * g1.inverse()) == ISO2Element.identity()


class TestSuperposition:
    def test_identity_exact(self):
        r = check_superposition(basis(), TDepCoefficients.parse(["1", "t", "0"]), ISO2Element.identity(),
                                [0.1, 0.2, 0.3], (0, 1), 1e-2, 0.0)
        assert r.discrepancy == 0 and r.passed

    def test_acceptance_case(self):
        r = check_superposition(basis(), TDepCoefficients.parse(["1", "t", "0"]), G, [0.0, 0.0, 0.0], (0, 1), 1e-3, 1e-6)
        assert r.passed and r.discrepancy < 1e-6

    def test_discrepancy_is_rounding_level(self):
        # RK4 commutes with affine maps, so the residual is floating-point noise, not truncation error
        b = TDepCoefficients.parse(["1", "t", "0"])
        coarse = check_superposition(basis(), b, G, [0.3, -0.2, 0.5], (0, 1), 1e-1, 1e-15)
        assert coarse.discrepancy < 1e-14
        strict = check_superposition(basis(), b, G, [0.3, -0.2, 0.5], (0, 1), 1e-1, 0.0)
        assert not strict.passed

    def test_wrong_chart(self):
        r2 = parse_chart("x1 x2 x3")
        with pytest.raises(ValueError):
            check_superposition([parse_vector_field("d_x1", r2)] * 3, TDepCoefficients.constant(1, 0, 0), G,
                                [0, 0, 0], (0, 1), 0.1, 1e-6)
