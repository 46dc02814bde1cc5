from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import PLANE
from kcontact import catalog, linalg
from kcontact.calculus import VectorField
from kcontact.liealg import (
    StructureConstants,
    bracket_closure,
    constant_decompose,
    is_locally_automorphic,
    normalize_element,
    structure_constants,
    verify_structure_constants,
)
from kcontact.parser import parse_chart, parse_vector_field
from kcontact.symcore import TrigPoly

R2 = parse_chart("x1 x2")


def V(text, chart):
    return parse_vector_field(text, chart)


def class1():
    return catalog.get_entry("class1")


class TestConstants:
    def test_normalizes_order(self):
        c = StructureConstants(3, {(2, 1, 3): -1})
        assert c.entries == {(1, 2, 3): Fraction(1)}
        assert c.c(2, 1, 3) == -1
        assert c.to_json() == [[1, 2, 3, "1"]]

    def test_rejects_bad_index(self):
        with pytest.raises(ValueError):
            StructureConstants(2, {(1, 2, 3): 1})

    def test_jacobi_detects(self):
        # c_123 = 1, c_132 = -1 is so(2) x| R^2 and fine; breaking it must show up
        ok = StructureConstants(3, {(1, 2, 3): 1, (1, 3, 2): -1})
        assert not ok.jacobi_violations()
        bad = StructureConstants(3, {(1, 2, 3): 1, (2, 3, 1): 1, (1, 3, 1): 1})
        assert bad.jacobi_violations()


class TestDecompose:
    def test_examples(self):
        e = class1()
        assert constant_decompose(V("d_x3", e.chart), e.vg_basis) == [0, 0, 1, 0]
        assert constant_decompose(V("-d_x2", e.chart), e.vg_basis) == [0, 0, 0, -1]
        assert constant_decompose(V("x1*d_x2", e.chart), e.vg_basis) is None

    @given(st.lists(st.lists(st.fractions(-3, 3, max_denominator=3), min_size=3, max_size=3), min_size=1, max_size=3),
           st.lists(st.fractions(-3, 3, max_denominator=3), min_size=3, max_size=3))
    def test_matches_rank_test(self, coefs, target):
        # basis fields a_i x1 d_x1 + b_i x2 d_x2 + c_i d_x3 -> decomposition exists iff ranks agree
        def field(v):
            return VectorField(PLANE, [TrigPoly(PLANE, {(1, 0, 0): v[0]}), TrigPoly(PLANE, {(0, 1, 0): v[1]}),
                                       TrigPoly.const(PLANE, v[2])])

        basis = [field(c) for c in coefs]
        got = constant_decompose(field(target), basis)
        cols = [list(col) for col in zip(*coefs)]
        solvable = linalg.rank(cols) == linalg.rank([row + [t] for row, t in zip(cols, target)])
        assert (got is not None) == solvable
        if got is not None:
            recombined = [sum(a * c[k] for a, c in zip(got, coefs)) for k in range(3)]
            assert recombined == list(target)


class TestClosure:
    def test_class1(self):
        e = class1()
        res = bracket_closure(e.generators, 4)
        assert res.status == "closed" and len(res.basis) == 4
        assert res.constants.entries == {(1, 2, 3): 1, (2, 3, 4): -1}

    def test_zero_trailer(self):
        e = catalog.get_entry("zero_trailer")
        res = bracket_closure(e.generators, 3)
        assert res.status == "closed"
        assert res.constants.entries == {(1, 2, 3): 1, (1, 3, 2): -1}

    def test_affine(self):
        res = bracket_closure([V("d_x1", R2), V("x1*d_x1", R2)], 2)
        assert res.status == "closed"
        assert res.constants.entries == {(1, 2, 1): 1}

    def test_bound(self):
        res = bracket_closure([V("d_x1", R2), V("x1^2*d_x2", R2)], 3)
        assert res.status == "not-closed-within-bound"
        assert res.constants is None

    def test_one_trailer_dimension(self):
        res = bracket_closure(catalog.n_trailer(1).generators, 16)
        assert res.status == "closed" and len(res.basis) == 6

    @pytest.mark.parametrize("name", ["class1", "class2", "class4", "class6", "zero_trailer", "one_trailer"])
    def test_self_consistent(self, name):
        res = bracket_closure(catalog.get_entry(name).generators, 16)
        assert not res.constants.jacobi_violations()
        assert verify_structure_constants(res.basis, res.constants).passed

    def test_normalize_element(self):
        x = V("-2/3*d_x1 + 4/3*x1*d_x2", R2)
        assert normalize_element(x) == V("-d_x1 + 2*x1*d_x2", R2)


class TestVerify:
    def test_class1(self):
        e = class1()
        assert verify_structure_constants(e.vg_basis, e.expected_constants).passed

    def test_class2(self):
        e = catalog.get_entry("class2")
        exp = StructureConstants(5, {(1, 2, 3): 1, (2, 3, 4): -1, (2, 4, 5): -1})
        assert verify_structure_constants(e.vg_basis, exp).passed

    def test_perturbed(self):
        e = class1()
        bad = StructureConstants(4, {(1, 2, 3): 2, (2, 3, 4): -1})
        rep = verify_structure_constants(e.vg_basis, bad)
        assert not rep.passed
        assert [(p.i, p.j) for p in rep.mismatches] == [(1, 2)]

    def test_class5_table_entry(self):
        # the printed c_248 disagrees with [X2, X4] = -X5
        e = catalog.get_entry("class5")
        rep = verify_structure_constants(e.vg_basis, e.expected_constants)
        assert [(p.i, p.j) for p in rep.mismatches] == [(2, 4)]
        assert structure_constants(e.vg_basis).c(2, 4, 5) == -1


class TestAutomorphic:
    def test_examples(self):
        zt = catalog.get_entry("zero_trailer")
        assert is_locally_automorphic(zt.vg_basis).passed
        assert is_locally_automorphic(class1().vg_basis).passed
        assert not is_locally_automorphic([V("d_x1", R2), V("d_x1", R2)]).passed
