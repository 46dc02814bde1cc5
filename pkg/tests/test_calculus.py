from __future__ import annotations

from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, strategies as st

from conftest import MIXED, PLANE, fields, one_forms, points, polys
from kcontact.calculus import (
    DiffForm,
    MultiVector,
    SingularFrameError,
    VectorField,
    dual_coframe,
    evaluate_field,
    exterior_derivative,
    interior_product,
    lie_bracket,
    lie_derivative_form,
    lie_derivative_form_cartan,
    pair,
    schouten_vf_multivector,
    volume_coefficient,
    wedge_forms,
    wedge_vectors,
)
from kcontact.catalog import zero_trailer_fields
from kcontact.parser import parse_chart, parse_poly, parse_vector_field
from kcontact.symcore import Point, RatFrac, TrigPoly

R4 = parse_chart("x1 x2 x3 x4")
ZT = parse_chart("chart xi1 xi2 theta0:angle")


def V(text, chart=R4):
    return parse_vector_field(text, chart)


def forms(chart, *rows):
    return [DiffForm.one_form(chart, [parse_poly(t, chart) for t in r]) for r in rows]


class TestBracketExamples:
    def test_class1_relations(self):
        x1, x2 = V("d_x4"), V("x4*d_x3 + x3*d_x2 + d_x1")
        assert lie_bracket(x1, x2) == V("d_x3")
        assert lie_bracket(x2, V("d_x3")) == V("-d_x2")
        assert lie_bracket(V("x1*d_x2 + d_x3"), x2).is_zero()

    def test_print(self):
        r6 = parse_chart("x1 x2 x3 x4 x5 x6")
        x = V("d_x1 + x3*d_x2 + (x6 + 1)*d_x5", r6)
        assert str(x) == "d_x1 + x3*d_x2 + (x6 + 1)*d_x5"
        assert str(VectorField.zero(r6)) == "0"

    def test_evaluate_field(self):
        r6 = parse_chart("x1 x2 x3 x4 x5 x6")
        x2 = V("x5*(d_x1 + x3*d_x2 + x4*d_x3) + d_x4", parse_chart("x1 x2 x3 x4 x5"))
        pt = Point(x2.chart, (1, 2, 3, 4, 0))
        assert evaluate_field(x2, pt) == [0, 0, 0, 1, 0]
        assert evaluate_field(V("x6*d_x2", r6), Point(r6, (0, 0, 0, 0, 0, 2))) == [0, 2, 0, 0, 0, 0]


class TestBracketProperties:
    @given(fields(PLANE), fields(PLANE))
    def test_antisymmetry(self, x, y):
        assert lie_bracket(x, y) == -lie_bracket(y, x)

    @given(fields(PLANE), fields(PLANE), fields(PLANE))
    def test_jacobi(self, x, y, z):
        total = lie_bracket(x, lie_bracket(y, z)) + lie_bracket(y, lie_bracket(z, x)) + lie_bracket(z, lie_bracket(x, y))
        assert total.is_zero()

    @given(fields(MIXED), fields(MIXED), fields(MIXED))
    def test_jacobi_with_angles(self, x, y, z):
        total = lie_bracket(x, lie_bracket(y, z)) + lie_bracket(y, lie_bracket(z, x)) + lie_bracket(z, lie_bracket(x, y))
        assert total.is_zero()

    @given(fields(MIXED), fields(MIXED), polys(MIXED))
    def test_bracket_is_commutator(self, x, y, f):
        assert lie_bracket(x, y).apply(f) == x.apply(y.apply(f)) - y.apply(x.apply(f))


def _to_sympy(p: TrigPoly, syms):
    return sum(sp.Rational(c.numerator, c.denominator) * sp.prod([s**e for s, e in zip(syms, m)])
               for m, c in p.items()) if p.terms else sp.Integer(0)


class TestSympyOracle:
    """Independent bracket computation in sympy with (s, c) and the derivation th -> c d/ds - s d/dc."""

    X, Y, S, C = sp.symbols("x y s c")

    def d(self, expr, name):
        if name == "th":
            return self.C * sp.diff(expr, self.S) - self.S * sp.diff(expr, self.C)
        return sp.diff(expr, {"x": self.X, "y": self.Y}[name])

    @given(fields(MIXED), fields(MIXED))
    def test_bracket_matches_sympy(self, a, b):
        syms = (self.X, self.Y, self.S, self.C)
        names = MIXED.names
        sa = [_to_sympy(c, syms) for c in a.comps]
        sb = [_to_sympy(c, syms) for c in b.comps]
        got = lie_bracket(a, b)
        for i in range(3):
            ref = sum(sa[j] * self.d(sb[i], names[j]) - sb[j] * self.d(sa[i], names[j]) for j in range(3))
            diff = sp.expand(ref - _to_sympy(got.comps[i], syms))
            assert sp.rem(diff, self.S**2 + self.C**2 - 1, self.S) == 0


class TestMultivectors:
    def test_wedge_examples(self):
        d1, d2 = V("d_x1"), V("d_x2")
        assert wedge_vectors([d1, d1]).is_zero()
        bi = wedge_vectors([d1, d2])
        assert bi.comps == {(0, 1): TrigPoly.const(R4, 1)}
        assert str(bi) == "d_x1^d_x2"

    def test_zero_trailer_volume(self):
        f = zero_trailer_fields()
        tri = wedge_vectors([f["X1"], f["X2"], f["X3"]])
        c = tri.component((0, 1, 2))
        assert c.is_constant() and not c.is_zero()

    def test_wedge_overflow(self):
        r2 = parse_chart("x1 x2")
        bi = wedge_vectors([V("d_x1", r2), V("d_x2", r2)])
        with pytest.raises(ValueError):
            bi.wedge(MultiVector.from_field(V("d_x1", r2)))

    def test_schouten_examples(self):
        r3 = parse_chart("x1 x2 x3")
        assert schouten_vf_multivector(V("d_x1", r3), wedge_vectors([V("d_x2", r3), V("d_x3", r3)])).is_zero()
        b = wedge_vectors([V("d_x1", r3), V("d_x2", r3)])
        assert schouten_vf_multivector(V("x1*d_x1", r3), b) == -b
        x1, x2 = V("d_x4"), V("x4*d_x3 + x3*d_x2 + d_x1")
        assert schouten_vf_multivector(V("x1*d_x2 + d_x3"), wedge_vectors([x1, x2])).is_zero()

    @given(fields(PLANE, max_deg=1), fields(PLANE, max_deg=1), fields(PLANE, max_deg=1))
    def test_schouten_leibniz(self, y, a, b):
        A, B = MultiVector.from_field(a), MultiVector.from_field(b)
        lhs = schouten_vf_multivector(y, A.wedge(B))
        rhs = schouten_vf_multivector(y, A).wedge(B) + A.wedge(schouten_vf_multivector(y, B))
        assert lhs == rhs

    @given(fields(MIXED), fields(MIXED))
    def test_schouten_on_vectors_is_bracket(self, y, a):
        assert schouten_vf_multivector(y, MultiVector.from_field(a)) == MultiVector.from_field(lie_bracket(y, a))


class TestForms:
    def test_d_examples(self):
        assert exterior_derivative(DiffForm.differential(ZT, "xi1")).is_zero()
        e1, e2, e3 = forms(ZT, ("0", "0", "1"), ("1", "0", "xi2"), ("0", "1", "-xi1"))
        assert exterior_derivative(e3) == wedge_forms(e1, e2)
        assert exterior_derivative(e2) == -wedge_forms(e1, e3)
        assert str(exterior_derivative(e3)) == "-dxi1^dtheta0"

    def test_wedge_examples(self):
        dth = DiffForm.differential(ZT, "theta0")
        assert wedge_forms(dth, dth).is_zero()
        e1, e2, e3 = forms(ZT, ("0", "0", "1"), ("1", "0", "xi2"), ("0", "1", "-xi1"))
        vol = volume_coefficient(wedge_forms(e3, exterior_derivative(e3)))
        assert vol.is_constant() and not vol.is_zero()
        assert volume_coefficient(wedge_forms(wedge_forms(e1, e2), e3)) == 1

    def test_interior_examples(self):
        dx1, dx2 = DiffForm.differential(R4, "x1"), DiffForm.differential(R4, "x2")
        assert interior_product(V("d_x1"), dx1).scalar() == 1
        assert interior_product(V("d_x2"), wedge_forms(dx1, dx2)) == -dx1
        f = zero_trailer_fields()
        eta = dual_coframe([f["Y1"], f["Y2"], f["Y3"]])
        assert pair(eta[2], f["Y3"]) == 1

    def test_lie_derivative_examples(self):
        dx1 = DiffForm.differential(R4, "x1")
        assert lie_derivative_form(V("d_x1"), dx1).is_zero()
        assert lie_derivative_form(V("x1*d_x1"), dx1) == dx1
        f = zero_trailer_fields()
        _, e2, _ = forms(ZT, ("0", "0", "1"), ("1", "0", "xi2"), ("0", "1", "-xi1"))
        assert lie_derivative_form(f["X1"], e2).is_zero()

    def test_top_degree_d_raises(self):
        r1 = parse_chart("x1")
        with pytest.raises(ValueError):
            exterior_derivative(DiffForm.differential(r1, "x1"))

    @given(polys(MIXED))
    def test_dd_functions(self, f):
        assert exterior_derivative(exterior_derivative(DiffForm.function(f))).is_zero()

    @given(one_forms(PLANE))
    def test_dd_one_forms(self, w):
        assert exterior_derivative(exterior_derivative(w)).is_zero()

    @given(one_forms(MIXED))
    def test_dd_one_forms_angles(self, w):
        assert exterior_derivative(exterior_derivative(w)).is_zero()

    @given(fields(MIXED), one_forms(MIXED))
    def test_cartan_formula(self, x, w):
        assert lie_derivative_form(x, w) == lie_derivative_form_cartan(x, w)

    @given(fields(PLANE), one_forms(PLANE), one_forms(PLANE))
    def test_cartan_formula_two_forms(self, x, a, b):
        w = wedge_forms(a, b)
        assert lie_derivative_form(x, w) == lie_derivative_form_cartan(x, w)

    @given(fields(MIXED), fields(MIXED), one_forms(MIXED))
    def test_lie_derivative_pairing(self, x, y, w):
        # X(w(Y)) = (L_X w)(Y) + w([X, Y])
        assert x.apply(pair(w, y)) == pair(lie_derivative_form(x, w), y) + pair(w, lie_bracket(x, y))


class TestCoframe:
    def test_coordinate_frame(self):
        frame = [V(f"d_x{i}") for i in range(1, 5)]
        assert dual_coframe(frame) == [DiffForm.differential(R4, f"x{i}") for i in range(1, 5)]

    def test_zero_trailer(self):
        f = zero_trailer_fields()
        eta = dual_coframe([f["Y1"], f["Y2"], f["Y3"]])
        assert eta == forms(ZT, ("0", "0", "1"), ("1", "0", "xi2"), ("0", "1", "-xi1"))
        assert str(eta[1]) == "dxi1 + xi2*dtheta0"

    def test_rational_coframe(self):
        r1 = parse_chart("x1")
        (eta,) = dual_coframe([V("(1 + x1^2)*d_x1", r1)])
        c = eta.component((0,))
        assert isinstance(c, RatFrac)
        assert c == RatFrac(TrigPoly.const(r1, 1), parse_poly("1 + x1^2", r1))

    def test_singular(self):
        with pytest.raises(SingularFrameError):
            dual_coframe([V("d_x1"), V("d_x1"), V("d_x3"), V("d_x4")])

    @given(st.lists(polys(PLANE, max_deg=1, max_terms=2), min_size=3, max_size=3))
    def test_duality(self, offs):
        # unitriangular-plus-perturbation frames are never singular
        a, b, c = offs
        frame = [
            VectorField(PLANE, [TrigPoly.const(PLANE, 1), a, b]),
            VectorField(PLANE, [TrigPoly.zero(PLANE), TrigPoly.const(PLANE, 1), c]),
            VectorField(PLANE, [a * c, b, TrigPoly.const(PLANE, 1) + b * b]),
        ]
        try:
            eta = dual_coframe(frame)
        except SingularFrameError:
            return
        for i, e in enumerate(eta):
            for j, y in enumerate(frame):
                val = pair(e, y)
                one = 1 if i == j else 0
                if isinstance(val, RatFrac):
                    assert val == RatFrac.lift(TrigPoly.const(PLANE, one), PLANE)
                else:
                    assert val == one
