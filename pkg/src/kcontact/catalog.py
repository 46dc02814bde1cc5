"""Hard-coded distributions, their claimed facts, and the per-entry verifier.

Claims are stored as expectations.  A disagreement between a claim and the
computation becomes a ``finding`` record; it never aborts a run.
"""

from __future__ import annotations

import hashlib
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Callable, Sequence

from .calculus import (
    DiffForm,
    VectorField,
    dual_coframe,
    exterior_derivative,
    interior_product,
    lie_bracket,
    lie_derivative_form,
    lie_derivative_form_cartan,
    volume_coefficient,
    wedge_forms,
    wedge_vectors,
)
from .distrib import (
    Distribution,
    KContactReport,
    Locus,
    ad_distribution,
    constant_point,
    default_points,
    generic_rank,
    is_goursat,
    is_lie_symmetry,
    kcontact_verify,
    rank_at,
    schouten_symmetry_check,
    derived_flag,
    spanning_locus,
)
from .liealg import (
    StructureConstants,
    bracket_closure,
    constant_decompose,
    is_locally_automorphic,
    verify_structure_constants,
)
from .parser import parse_chart, parse_poly, parse_vector_field
from .symcore import ANGULAR, LINEAR, Chart, Point, TrigPoly

PASS, FAIL, FINDING = "pass", "fail", "finding"


@dataclass
class CheckRecord:
    name: str
    computed: str
    expected: str
    status: str  # pass | fail | finding
    locus: str = ""  # where the claim is stated

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "computed": self.computed,
            "expected": self.expected,
            "status": self.status,
            "locus": self.locus,
        }


@dataclass
class VerificationReport:
    entry: str
    checks: list[CheckRecord] = field(default_factory=list)
    loci: list[dict] = field(default_factory=list)
    wall_time: float = 0.0

    def add(self, name: str, ok: bool, computed, expected, locus: str = "", *, claim: bool = True) -> CheckRecord:
        """Record a check; a failed catalog claim is a finding, a failed kit invariant a fail."""
        status = PASS if ok else (FINDING if claim else FAIL)
        rec = CheckRecord(name, str(computed), str(expected), status, locus)
        self.checks.append(rec)
        return rec

    @property
    def findings(self) -> list[CheckRecord]:
        return [c for c in self.checks if c.status == FINDING]

    @property
    def failures(self) -> list[CheckRecord]:
        return [c for c in self.checks if c.status == FAIL]

    @property
    def ok(self) -> bool:
        return all(c.status == PASS for c in self.checks)

    def check(self, name: str) -> CheckRecord:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_json(self, timings: bool = False) -> dict:
        out = {
            "entry": self.entry,
            "status": "pass" if self.ok else ("fail" if self.failures else "findings"),
            "checks": [c.to_json() for c in self.checks],
            "loci": self.loci,
        }
        if timings:
            out["wall_time"] = round(self.wall_time, 6)
        return out


@dataclass
class SymmetryRegion:
    description: str
    fields: list[VectorField]
    locus: str  # source locus of the claim, for findings
    allowed: TrigPoly | None = None  # region excludes the zero set of this polynomial
    points: list[Point] = field(default_factory=list)


@dataclass
class CatalogEntry:
    name: str
    chart: Chart
    generators: list[VectorField]
    vg_basis: list[VectorField] = field(default_factory=list)
    expected_constants: StructureConstants | None = None
    symmetry_candidates: list[SymmetryRegion] = field(default_factory=list)
    expected_k: int | None = None
    expected_verdict: str | None = None
    sample_points: list[Point] = field(default_factory=list)
    expected_flag: tuple[int, ...] | None = None
    goursat: bool = True
    locus: str = ""
    expected_closure_dim: int | None = None

    @property
    def distribution(self) -> Distribution:
        return Distribution(self.chart, tuple(self.generators))


# ---------------------------------------------------------------------------
# building blocks


def _fields(chart: Chart, *texts: str, defs=None) -> list[VectorField]:
    return [parse_vector_field(t, chart, defs) for t in texts]


def _consts(dim: int, text: str) -> StructureConstants:
    """``"1,2,3=1; 2,3,4=-1"`` -> StructureConstants."""
    entries = {}
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        idx, val = part.split("=")
        i, j, k = (int(v) for v in idx.split(","))
        entries[(i, j, k)] = Fraction(val)
    return StructureConstants(dim, entries)


def _point(chart: Chart, **vals) -> Point:
    base = constant_point(chart, 0)
    values = list(base.values)
    for name, v in vals.items():
        values[chart.index(name)] = v
    return Point(chart, tuple(values))


def _points_with(chart: Chart, name: str, value, seed: str) -> list[Point]:
    """Origin-like and pseudo-random points pinned to ``name = value``."""
    from .distrib import random_points

    out = [_point(chart, **{name: value})]
    for p in random_points(chart, 3, seed):
        vals = list(p.values)
        vals[chart.index(name)] = Fraction(value)
        out.append(Point(chart, tuple(vals)))
    return out


_R = {n: parse_chart(" ".join(f"x{i}" for i in range(1, n + 1))) for n in (4, 5, 6)}

_TRIANGULAR_REEB = [
    "d_x2",
    "x1*d_x2 + d_x3",
    "1/2*x1^2*d_x2 + x1*d_x3 + d_x4",
    "1/6*x1^3*d_x2 + 1/2*x1^2*d_x3 + x1*d_x4 + d_x5",
]

# class 7 and 8 Reeb candidates: Y_i from the class-7/8 proof, plus the d_x6 parts of Table 1
_Y = [
    "x1^3*d_x2 + 3*x1^2*d_x3 + 6*x1*d_x4 - 6*x5^2*d_x5",
    "-x1^3*d_x1 - 3*x1^2*x2*d_x2 - 6*x1*x2*d_x3 - (6*C - 3*x1^2*x4)*d_x4 - 6*x5*(x1^2 - 2*x3*x5)*d_x5",
    "2*x1^2*B*d_x1 + (9*x1*x2^2 - x1^3*x3^2)*d_x2 + 3*(3*x2 - x1*x3)*C*d_x3"
    " + (24*x2*x3 - 6*x1*C*x4 + 2*x1^3*x4^2)*d_x4"
    " + 6*x5*(x1^2*x3 - x1^3*x4 - (4*x3^2 + 3*x2*x4)*x5 + 3*x1*(x2 + x3*x4*x5))*d_x5",
    "-3*x1*B^2*d_x1 + (-3*x2 - 2*x1*x3)*B^2*d_x2 - 6*x3*B^2*d_x3"
    " - 3*(3*x2 - x1*x3)*(8*x3^2 - 9*x1*x3*x4 + x4*(3*x2 + 2*x1^2*x4))*d_x4"
    " + 6*x5*(2*x3 - x1*x4)*(3*x1*B + x5*(4*x3^2 - 7*x1*x3*x4 + x4*(9*x2 + x1^2*x4)))*d_x5",
]

_F7 = [
    "-18*x5*D",
    "12*x4*x5^3 - 12*x1*x5^2 - 9*x1^2*D + 36*x3*x5*D",
    "12*x1^2*(x3*D - x4*x5^2) - 2*x1^3*(3*x5 + 5*x4*D) - 6*x5*(8*x3*x4*x5^2 + 12*x3^2*D + 9*x2*x4*D)"
    " + 6*x1*(3*x4^2*x5^3 + 4*x2*D + x3*x5*(8*x5 + 9*x4*D))",
    "9*x2^2*D + 48*x3^2*x5*(x3 + x4*x5^2 + x3*x6) - 6*x1*x3*x5*(8*x3*x5 + 9*x4^2*x5^2 + 18*x3*x4*D)"
    " - 2*x1^3*(3*x3*x5 + 5*x3*x4*D + 3*x4^2*x5*(x4 + 2*x5 + x4*x6))"
    " + 3*x1^2*(4*x4^3*x5^3 + 7*x3^2*D + 2*x3*x4*x5*(10*x5 + 9*x4*D))"
    " + 6*x2*(3*x4^2*x5^3 + 18*x3*x4*x5*D + x1^2*(3*x5 + 5*x4*D) - x1*(11*x3*D + 6*x4*x5^2 + 9*x4^2*x5*D))",
]

_F8 = [
    "18*x5*x6",
    "3*x6*(3*(x1^2 - 4*x3*x5) + 4*E*x5*x6)",
    "2*x6*(-12*x1*x2 - 6*x1^2*x3 + 5*x1^3*x4 + 36*x3^2*x5 + 27*x2*x4*x5 - 27*x1*x3*x4*x5"
    " + 3*E*(x1^2 - 8*x3*x5 + 3*x1*x4*x5)*x6)",
    "3*x6*(-9*x2^2 + 66*x1*x2*x3 - 21*x1^2*x3^2 - 30*x1^2*x2*x4 + 10*x1^3*x3*x4 - 48*x3^3*x5"
    " - 108*x2*x3*x4*x5 + 108*x1*x3^2*x4*x5 + 54*x1*x2*x4^2*x5 - 54*x1^2*x3*x4^2*x5 + 6*x1^3*x4^3*x5"
    " + 6*E*((8*x3^2 + 3*x2*x4)*x5 - 3*x1*(x2 + 3*x3*x4*x5) + x1^2*(x3 + 2*x4^2*x5))*x6)",
]


def _defs(chart: Chart) -> dict[str, TrigPoly]:
    p = lambda t: parse_poly(t, chart)  # noqa: E731
    return {
        "B": p("-3*x2 + x1*x3"),
        "C": p("x2 + x1*x3"),
        "D": p("x6 + 1"),
        "E": p("x5*(x1 - x5*x4)"),
    }


def reeb_candidates(cls: int) -> list[VectorField]:
    """S_1..S_4 = Y_i + F_i d_x6 for class 7 or 8."""
    ch = _R[6]
    defs = _defs(ch)
    fs = {7: _F7, 8: _F8}[cls]
    return [parse_vector_field(f"{y} + ({f})*d_x6", ch, defs) for y, f in zip(_Y, fs)]


def generating_function_components(i: int) -> list[TrigPoly]:
    """d_x1..d_x3 components of Y^A for A_i = x1^(4-i) (x1 x3 - 3 x2)^(i-1)."""
    ch = _R[6]
    a = parse_poly(f"x1^{4 - i}*(x1*x3 - 3*x2)^{i - 1}", ch)
    x3 = parse_poly("x3", ch)
    a1, a2, a3 = (a.diff(f"x{k}") for k in (1, 2, 3))
    return [-a3, a - x3 * a3, a1 + x3 * a2]


def transcription_checksum() -> str:
    """sha256 over the canonical printed forms of the class-7/8 candidates."""
    text = "\n".join(str(s) for cls in (7, 8) for s in reeb_candidates(cls))
    return hashlib.sha256(text.encode()).hexdigest()


def n_trailer(n: int) -> Distribution:
    """Rank-two n-trailer distribution on (xi1, xi2, theta0, ..., theta_n)."""
    if n < 0:
        raise ValueError("the number of trailers must be non-negative")
    names = ["xi1", "xi2"] + [f"theta{i}" for i in range(n + 1)]
    ch = Chart(tuple((nm, ANGULAR if nm.startswith("theta") else LINEAR) for nm in names))
    s = [TrigPoly.sin(ch, f"theta{i}") for i in range(n + 1)]
    c = [TrigPoly.cos(ch, f"theta{i}") for i in range(n + 1)]

    def cos_diff(j: int) -> TrigPoly:  # cos(theta_j - theta_{j-1})
        return c[j] * c[j - 1] + s[j] * s[j - 1]

    def sin_diff(j: int) -> TrigPoly:  # sin(theta_j - theta_{j-1})
        return s[j] * c[j - 1] - c[j] * s[j - 1]

    pi = [TrigPoly.const(ch, 1)] * (n + 1)
    for i in range(n - 1, -1, -1):
        pi[i] = pi[i + 1] * cos_diff(i + 1)
    comps = {"xi1": pi[0] * c[0], "xi2": pi[0] * s[0]}
    for i in range(n):
        comps[f"theta{i}"] = pi[i + 1] * sin_diff(i + 1)
    x1 = VectorField.coordinate(ch, f"theta{n}")
    x2 = VectorField.from_dict(ch, comps)
    return Distribution(ch, (x1, x2))


def cartan_235(f: TrigPoly) -> Distribution:
    """<d_q, d_x + p d_y + q d_p + F(q) d_z> on (x, y, z, p, q)."""
    ch = f.chart
    if ch.names != ("x", "y", "z", "p", "q"):
        raise ValueError("F must live on the chart x y z p q")
    if any(f.depends_on(v) for v in ("x", "y", "z", "p")):
        raise ValueError("F must depend on q only")
    if f.diff("q").diff("q").is_zero():
        raise ValueError("F violates d^2F/dq^2 != 0")
    x1 = parse_vector_field("d_q", ch)
    x2 = parse_vector_field("d_x + p*d_y + q*d_p", ch) + VectorField.coordinate(ch, "z") * f
    return Distribution(ch, (x1, x2))


# ---------------------------------------------------------------------------
# entries


def _class_entry(
    cls: int,
    m: int,
    basis: Sequence[str],
    consts: str,
    regions: Callable[[Chart], list[SymmetryRegion]],
    k: int | None,
    verdict: str,
    extra_points: Callable[[Chart], list[Point]] = lambda ch: [],
) -> CatalogEntry:
    ch = _R[m]
    vg = _fields(ch, *basis)
    return CatalogEntry(
        name=f"class{cls}",
        chart=ch,
        generators=vg[:2],
        vg_basis=vg,
        expected_constants=_consts(len(vg), consts),
        symmetry_candidates=regions(ch),
        expected_k=k,
        expected_verdict=verdict,
        sample_points=default_points(ch, f"class{cls}") + extra_points(ch),
        expected_flag=tuple(range(2, m + 1)),
        locus=f"Table 1, class {cls}",
    )


def _global(cls: int, texts: Sequence[str]) -> Callable[[Chart], list[SymmetryRegion]]:
    return lambda ch: [SymmetryRegion("global", _fields(ch, *texts), f"Table 1, class {cls}")]


def _class3_regions(ch: Chart) -> list[SymmetryRegion]:
    return [
        SymmetryRegion(
            "x5 != 0",
            _fields(ch, *_TRIANGULAR_REEB[:3]),
            "Table 1, class 3, x5!=0 branch",
            allowed=parse_poly("x5", ch),
        ),
        SymmetryRegion(
            "x5 = 0",
            _fields(ch, "d_x1", "d_x2", "d_x3"),
            "Table 1, class 3, x5=0 branch",
            points=_points_with(ch, "x5", 0, "class3:x5=0"),
        ),
    ]


def _dense(cls: int) -> Callable[[Chart], list[SymmetryRegion]]:
    return lambda ch: [
        SymmetryRegion("dense subset", reeb_candidates(cls), f"Table 1, class {cls}, S1-S4")
    ]


def _entry_class1() -> CatalogEntry:
    return _class_entry(
        1, 4, ["d_x4", "x4*d_x3 + x3*d_x2 + d_x1", "d_x3", "d_x2"], "1,2,3=1; 2,3,4=-1",
        _global(1, _TRIANGULAR_REEB[:2]), 2, "two-contact",
    )


def _entry_class2() -> CatalogEntry:
    return _class_entry(
        2, 5, ["d_x5", "x5*d_x4 + x4*d_x3 + x3*d_x2 + d_x1", "d_x4", "d_x3", "d_x2"],
        "1,2,3=1; 2,3,4=-1; 2,4,5=-1",
        _global(2, _TRIANGULAR_REEB[:3]), 3, "three-contact",
    )


def _entry_class3() -> CatalogEntry:
    return _class_entry(
        3, 5,
        ["d_x5", "x5*(d_x1 + x3*d_x2 + x4*d_x3) + d_x4", "d_x1 + x3*d_x2 + x4*d_x3", "d_x3", "d_x2", "x5*d_x2"],
        "1,2,3=1; 1,6,5=1; 2,3,4=1; 2,4,6=-1; 3,4,5=-1",
        _class3_regions, 3, "three-contact",
        lambda ch: _points_with(ch, "x5", 0, "class3:x5=0"),
    )


def _entry_class4() -> CatalogEntry:
    return _class_entry(
        4, 6, ["d_x6", "x6*d_x5 + x5*d_x4 + x4*d_x3 + x3*d_x2 + d_x1", "d_x5", "d_x4", "d_x3", "d_x2"],
        "1,2,3=1; 2,3,4=-1; 2,4,5=-1; 2,5,6=-1",
        _global(4, _TRIANGULAR_REEB), 4, "four-contact",
    )


def _entry_class5() -> CatalogEntry:
    return _class_entry(
        5, 6,
        [
            "d_x6", "d_x5 + x6*(x5*d_x4 + x4*d_x3 + x3*d_x2 + d_x1)", "d_x1 + x3*d_x2 + x4*d_x3 + x5*d_x4",
            "d_x4", "x6*d_x3", "d_x3", "x6^2*d_x2", "x6*d_x2", "d_x2",
        ],
        "1,2,3=1; 1,8,9=1; 2,3,4=1; 1,5,6=1; 2,4,8=-1; 2,5,7=-1; 2,6,8=-1; 3,4,6=-1; 3,5,8=-1; 3,6,9=-1;"
        " 1,7,8=2",
        _global(5, _TRIANGULAR_REEB), 4, "four-contact",
        lambda ch: _points_with(ch, "x6", 0, "class5:x6=0"),
    )


def _entry_class6() -> CatalogEntry:
    return _class_entry(
        6, 6,
        [
            "d_x6", "x6*d_x5 + d_x4 + x5*(x4*d_x3 + x3*d_x2 + d_x1)", "d_x5", "d_x1 + x3*d_x2 + x4*d_x3",
            "d_x3", "x5*d_x2", "x6*d_x2", "d_x2",
        ],
        "1,2,3=1; 1,7,8=1; 2,4,5=1; 2,6,7=1; 3,6,8=1; 2,3,4=-1; 2,5,6=-1; 4,5,8=-1",
        lambda ch: [], None, "not-k-contact",
        lambda ch: _points_with(ch, "x5", 0, "class6:x5=0"),
    )


def _entry_class7() -> CatalogEntry:
    return _class_entry(
        7, 6,
        [
            "d_x6", "(x6 + 1)*d_x5 + d_x4 + x5*(x4*d_x3 + x3*d_x2 + d_x1)", "d_x5", "d_x1 + x3*d_x2 + x4*d_x3",
            "d_x3", "x5*d_x2", "d_x2", "(1 + x6)*d_x2",
        ],
        "1,2,3=1; 1,8,7=1; 2,4,5=1; 2,6,8=1; 3,6,7=1; 2,3,4=-1; 2,5,6=-1; 4,5,7=-1",
        _dense(7), 4, "four-contact-on-dense-subset",
        lambda ch: _points_with(ch, "x5", 0, "class7:x5=0")
        + _points_with(ch, "x6", 0, "class7:x6=0")
        + _points_with(ch, "x6", -1, "class7:x6=-1"),
    )


def _entry_class8() -> CatalogEntry:
    return _class_entry(
        8, 6,
        [
            "d_x6", "d_x5 + x6*(d_x4 + x5*(x4*d_x3 + x3*d_x2 + d_x1))", "x5*(d_x1 + x3*d_x2 + x4*d_x3) + d_x4",
            "d_x1 + x3*d_x2 + x4*d_x3", "x6*d_x3", "d_x3", "x5*x6^2*d_x2", "x5*x6*d_x2", "x5*d_x2", "d_x2",
            "x6^2*d_x2", "x6*d_x2",
        ],
        "1,2,3=1; 1,5,6=1; 1,8,9=1; 1,12,10=1; 2,3,4=1; 2,4,5=1; 2,7,11=1; 2,8,12=1; 2,9,10=1; 3,4,6=1;"
        " 2,5,7=-1; 2,6,8=-1; 3,5,8=-1; 3,6,9=-1; 4,5,12=-1; 4,6,10=-1; 1,7,8=2; 1,11,12=2",
        _dense(8), 4, "four-contact-on-dense-subset",
        lambda ch: _points_with(ch, "x5", 0, "class8:x5=0") + _points_with(ch, "x6", 0, "class8:x6=0"),
    )


ZERO_TRAILER_CHART = parse_chart("chart xi1 xi2 theta0:angle")


def zero_trailer_fields() -> dict[str, VectorField]:
    ch = ZERO_TRAILER_CHART
    names = ["X1", "X2", "X3", "Y1", "Y2", "Y3"]
    texts = [
        "d_theta0",
        "cos(theta0)*d_xi1 + sin(theta0)*d_xi2",
        "-sin(theta0)*d_xi1 + cos(theta0)*d_xi2",
        "-xi2*d_xi1 + xi1*d_xi2 + d_theta0",
        "d_xi1",
        "d_xi2",
    ]
    return dict(zip(names, _fields(ch, *texts)))


def _entry_zero_trailer() -> CatalogEntry:
    ch = ZERO_TRAILER_CHART
    f = zero_trailer_fields()
    return CatalogEntry(
        name="zero_trailer",
        chart=ch,
        generators=[f["X1"], f["X2"]],
        vg_basis=[f["X1"], f["X2"], f["X3"]],
        expected_constants=_consts(3, "1,2,3=1; 1,3,2=-1"),
        sample_points=default_points(ch, "zero_trailer"),
        expected_flag=(2, 3),
        locus="Sec. 3, zero-trailer",
    )


def _entry_one_trailer() -> CatalogEntry:
    d = n_trailer(1)
    return CatalogEntry(
        name="one_trailer",
        chart=d.chart,
        generators=list(d.generators),
        sample_points=default_points(d.chart, "one_trailer"),
        expected_flag=(2, 3, 4),
        locus="Sec. 3, one-trailer",
        expected_closure_dim=6,
    )


def _entry_cartan_36() -> CatalogEntry:
    ch = parse_chart("x1 x2 x3 u1 u2 u3")
    return CatalogEntry(
        name="cartan_36",
        chart=ch,
        generators=_fields(ch, "d_x3 - x2*d_u1", "d_x1 - x3*d_u2", "d_x2 - x1*d_u3"),
        symmetry_candidates=[SymmetryRegion("global", _fields(ch, "d_u1", "d_u2", "d_u3"), "Sec. 4, (3,6)")],
        expected_k=3,
        expected_verdict="three-contact",
        sample_points=default_points(ch, "cartan_36"),
        expected_flag=(3, 6),
        goursat=False,
        locus="Sec. 4, (3,6) distribution",
    )


def _entry_cartan_235() -> CatalogEntry:
    ch = parse_chart("x y z p q")
    d = cartan_235(parse_poly("q^2", ch))
    return CatalogEntry(
        name="cartan_235",
        chart=ch,
        generators=list(d.generators),
        symmetry_candidates=[SymmetryRegion("global", _fields(ch, "d_x", "d_y", "d_z"), "Sec. 4, (2,3,5)")],
        expected_k=3,
        expected_verdict="three-contact",
        sample_points=default_points(ch, "cartan_235"),
        expected_flag=(2, 3, 5),
        goursat=False,
        locus="Sec. 4, (2,3,5) distribution with F=q^2",
    )


def _entry_cartan_47qc() -> CatalogEntry:
    ch = parse_chart("u1 u2 u3 x1 x2 x3 x4")
    return CatalogEntry(
        name="cartan_47qc",
        chart=ch,
        generators=_fields(
            ch,
            "x2*d_u1 - x1*d_u2 + x3*d_u3 + d_x4",
            "x1*d_u1 - x2*d_u2 - d_x3",
            "x1*d_u3 + d_x2",
            "d_x1",
        ),
        symmetry_candidates=[SymmetryRegion("global", _fields(ch, "d_u1", "d_u2", "d_u3"), "Sec. 4, qc (4,7)")],
        expected_k=3,
        expected_verdict="three-contact",
        sample_points=default_points(ch, "cartan_47qc"),
        expected_flag=(4, 7),
        goursat=False,
        locus="Sec. 4, flat qc (4,7) distribution",
    )


_BUILDERS: dict[str, Callable[[], CatalogEntry]] = {
    "class1": _entry_class1,
    "class2": _entry_class2,
    "class3": _entry_class3,
    "class4": _entry_class4,
    "class5": _entry_class5,
    "class6": _entry_class6,
    "class7": _entry_class7,
    "class8": _entry_class8,
    "zero_trailer": _entry_zero_trailer,
    "one_trailer": _entry_one_trailer,
    "cartan_36": _entry_cartan_36,
    "cartan_235": _entry_cartan_235,
    "cartan_47qc": _entry_cartan_47qc,
}


def list_entries() -> list[str]:
    return list(_BUILDERS)


@lru_cache(maxsize=None)
def get_entry(name: str) -> CatalogEntry:
    try:
        return _BUILDERS[name]()
    except KeyError:
        raise KeyError(f"unknown catalog entry {name!r}; known: {', '.join(_BUILDERS)}") from None


# ---------------------------------------------------------------------------
# verification


def _locus_json(name: str, locus: Locus) -> dict:
    return {
        "name": name,
        "description": locus.description,
        "minors": [str(m) for m in locus.minors],
        "determinant": str(locus.determinant) if locus.determinant is not None else None,
    }


def unit_multiple_of_power(p: TrigPoly, base: TrigPoly, max_power: int = 8) -> int | None:
    """k >= 1 with p = c * base^k for a nonzero rational c, else None."""
    if p.is_zero() or base.is_constant():
        return None
    for k in range(1, max_power + 1):
        q = base**k
        if q.degree() > p.degree():
            return None
        ratio = p.leading()[1] / q.leading()[1]
        if p == q * ratio:
            return k
    return None


def _bracket_text(sym: str, gen: str, br: VectorField) -> str:
    return f"[{sym},{gen}] = {br}"


def _verify_goursat(entry: CatalogEntry, rep: VerificationReport) -> None:
    d = entry.distribution
    if entry.goursat:
        v = is_goursat(d, entry.sample_points)
        computed = f"ranks {v.ranks}" + ("" if not v.failures else f"; {'; '.join(v.failures)}")
        rep.add("goursat", v.passed, computed, f"ranks {v.expected}", entry.locus)
    elif entry.expected_flag is not None:
        flag = derived_flag(d)
        rep.add("derived flag", flag.ranks == entry.expected_flag, f"ranks {flag.ranks}",
                f"ranks {entry.expected_flag}", entry.locus)


def _verify_constants(entry: CatalogEntry, rep: VerificationReport) -> None:
    if entry.expected_constants is None or not entry.vg_basis:
        return
    cr = verify_structure_constants(entry.vg_basis, entry.expected_constants)
    if cr.passed:
        computed = str(entry.expected_constants)
    else:
        computed = "; ".join(
            f"[X{p.i},X{p.j}]: computed {'not a VG basis' if p.computed is None else [str(v) for v in p.computed]}"
            f" expected {[str(v) for v in p.expected]}"
            for p in cr.mismatches
        )
    rep.add("structure constants", cr.passed, computed, str(entry.expected_constants), f"{entry.locus}, constants")
    jac = entry.expected_constants.jacobi_violations()
    rep.add("constants satisfy Jacobi", not jac, f"{len(jac)} violations", "0 violations",
            f"{entry.locus}, constants")
    # closure of the two generators inside the stated algebra
    res = bracket_closure(entry.generators, max_dim=len(entry.vg_basis) + 4)
    inside = res.status == "closed" and all(constant_decompose(b, entry.vg_basis) is not None for b in res.basis)
    rep.add(
        "closure of <X1,X2> spans the stated algebra",
        inside and len(res.basis) == len(entry.vg_basis),
        f"{res.status}, dimension {len(res.basis)}" + ("" if inside else ", leaves the stated span"),
        f"closed, dimension {len(entry.vg_basis)}",
        entry.locus,
    )


def _verify_region(entry: CatalogEntry, region: SymmetryRegion, rep: VerificationReport) -> bool:
    """k-contact checks for one candidate family; returns True if everything matches."""
    d = entry.distribution
    pts = region.points or entry.sample_points
    kr: KContactReport = kcontact_verify(d, region.fields, pts)
    tag = f"{region.description}: "
    ok_all = True
    for i, v in enumerate(kr.symmetry_checks, 1):
        bad = "; ".join(_bracket_text(f"S{i}", f"X{j + 1}", b) + " not in D" for j, b in v.offending)
        rep.add(tag + f"S{i} is a Lie symmetry", v.passed, bad or "all brackets in D",
                "all brackets in D", region.locus)
        ok_all &= v.passed
        if len(d.generators) == 2:
            sv = schouten_symmetry_check(region.fields[i - 1], d)
            rep.add(tag + f"S{i} bivector criterion agrees", sv.passed == v.passed,
                    f"bivector criterion {'pass' if sv.passed else 'fail'}",
                    f"direct test {'pass' if v.passed else 'fail'}", region.locus, claim=False)
    for c in kr.commutation_checks:
        rep.add(tag + f"[S{c.i + 1},S{c.j + 1}] = 0", c.passed, str(c.bracket), "0", region.locus)
        ok_all &= c.passed
    loc = kr.spanning_locus
    rep.loci.append(_locus_json(tag + "spanning locus", loc))
    dense = entry.expected_verdict == "four-contact-on-dense-subset"
    if loc.empty:
        rep.add(tag + "S + D spans TM", True, f"determinant {loc.determinant}, degenerate nowhere",
                "degenerate nowhere" if not dense else "not identically zero", region.locus)
    elif loc.everywhere:
        rep.add(tag + "S + D spans TM", False, "determinant vanishes identically",
                "not identically zero", region.locus)
        ok_all = False
    else:
        det = loc.determinant
        explained = region.allowed is not None and unit_multiple_of_power(det, region.allowed) is not None
        if dense or explained:
            rep.add(tag + "S + D spans TM", True, f"degenerate on {loc.description}",
                    "not identically zero" if dense else f"degenerate at most on {{{region.allowed} = 0}}",
                    region.locus)
        else:
            rep.add(tag + "S + D spans TM (spanning-locus refinement)", False,
                    f"determinant {det}; degenerate on {loc.description}", "degenerate nowhere", region.locus)
            ok_all = False
    ni = kr.nonintegrability
    fails = [str(p.point) for p in ni.points if p.status == "fail"]
    rep.add(tag + "maximally non-integrable", ni.passed,
            f"{sum(p.status == 'pass' for p in ni.points)} points pass" + (f"; fails at {fails}" if fails else ""),
            "non-degenerate at every regular test point", entry.locus)
    ok_all &= ni.passed
    return ok_all


def _verify_kcontact(entry: CatalogEntry, rep: VerificationReport) -> None:
    if entry.expected_verdict == "not-k-contact":
        obs = class6_obstruction_check(entry)
        rep.checks.extend(obs.checks)
        rep.loci.extend(obs.loci)
        ok = all(c.status == PASS for c in obs.checks)
        rep.add("k-contact verdict", ok, "not-k-contact corroborated" if ok else "obstruction not reproduced",
                "not-k-contact", entry.locus)
        return
    if not entry.symmetry_candidates:
        return
    if entry.expected_verdict == "four-contact-on-dense-subset":
        _verify_generating_functions(entry, rep)
    results = [_verify_region(entry, r, rep) for r in entry.symmetry_candidates]
    for region, ok in zip(entry.symmetry_candidates, results):
        rep.add(f"{region.description}: {entry.expected_verdict}", ok,
                f"{entry.expected_verdict} corroborated" if ok else "not corroborated",
                entry.expected_verdict, region.locus)


def _verify_generating_functions(entry: CatalogEntry, rep: VerificationReport) -> None:
    ys = [parse_vector_field(y, entry.chart, _defs(entry.chart)) for y in _Y]
    for i, y in enumerate(ys, 1):
        want = generating_function_components(i)
        bad = [f"d_x{k + 1}: printed {y.comps[k]}, from A{i}: {want[k]}" for k in range(3) if y.comps[k] != want[k]]
        rep.add(f"Y{i} matches its generating function A{i}", not bad, "; ".join(bad) or "components 1-3 agree",
                "components 1-3 agree", "Theorem 2 proof, Y^A formula")


def _verify_ad_flag(entry: CatalogEntry, rep: VerificationReport) -> None:
    if not entry.goursat or entry.expected_verdict == "not-k-contact":
        return
    x1, x2 = entry.generators
    fields = ad_distribution(x1, x2, entry.chart.dim - 2)
    r = generic_rank(fields)
    rep.add("ad-flag generic rank", r == entry.chart.dim, r, entry.chart.dim, entry.locus, claim=False)


def _verify_closure_dim(entry: CatalogEntry, rep: VerificationReport, max_dim: int) -> None:
    if entry.expected_closure_dim is None:
        return
    res = bracket_closure(entry.generators, max_dim)
    computed = f"{res.status}, dimension {len(res.basis)}"
    if res.status == "closed":
        computed += f"; constants {res.constants}; basis {[str(b) for b in res.basis]}"
    rep.add("VG algebra dimension", res.status == "closed" and len(res.basis) == entry.expected_closure_dim,
            computed, f"closed, dimension {entry.expected_closure_dim}", f"{entry.locus}, VG algebra")


def verify_entry(name: str, max_dim: int = 16) -> VerificationReport:
    start = time.perf_counter()
    entry = get_entry(name)
    rep = VerificationReport(name)
    _verify_goursat(entry, rep)
    _verify_constants(entry, rep)
    _verify_closure_dim(entry, rep, max_dim)
    _verify_ad_flag(entry, rep)
    if name == "zero_trailer":
        suite = zero_trailer_contact_suite()
        rep.checks.extend(suite.checks)
        rep.loci.extend(suite.loci)
    if name == "cartan_36":
        _cartan36_brackets(entry, rep)
    _verify_kcontact(entry, rep)
    rep.wall_time = time.perf_counter() - start
    return rep


def _cartan36_brackets(entry: CatalogEntry, rep: VerificationReport) -> None:
    x1, x2, x3 = entry.generators
    s1, s2, s3 = entry.symmetry_candidates[0].fields
    for label, br, s in (("[X1,X3]", lie_bracket(x1, x3), s1), ("[X2,X1]", lie_bracket(x2, x1), s2),
                         ("[X3,X2]", lie_bracket(x3, x2), s3)):
        rep.add(f"{label} = {s}", br == s, br, s, "Sec. 4, (3,6), S1=[X1,X3]")


def class6_obstruction_check(entry: CatalogEntry | None = None) -> VerificationReport:
    """ad-flag of class 6 has generic rank 6 but rank 5 on x5 = 0."""
    start = time.perf_counter()
    entry = entry or get_entry("class6")
    ch = entry.chart
    rep = VerificationReport("class6_obstruction")
    loc = "Theorem 2 proof, class 6"
    x1, x2 = entry.generators
    fields = ad_distribution(x1, x2, 4)
    vg = entry.vg_basis
    labels = []
    for j, (f, idx) in enumerate(zip(fields[2:], (3, 4, 5, 6)), 1):
        target = vg[idx - 1]
        sign = "+" if f == target else "-" if f == -target else None
        labels.append(f"ad^{j} = {sign}X{idx}" if sign else f"ad^{j} = {f}")
    ok = all("X" in lab.split("=")[1] for lab in labels)
    rep.add("ad-iterates reproduce X3..X6 up to sign", ok, ", ".join(labels),
            "-X3, X4, -X5, X6 (up to sign)", loc)
    r = generic_rank(fields)
    rep.add("ad-flag generic rank", r == 6, r, 6, loc)
    pts = _points_with(ch, "x5", 0, "class6:obstruction")[:3]
    for p in pts:
        rk = rank_at(fields, p)
        rep.add(f"ad-flag rank at {p}", rk == 5, rk, 5, loc)
    p1 = _point(ch, x5=1)
    rk = rank_at(fields, p1)
    rep.add(f"ad-flag rank at {p1}", rk == 6, rk, 6, loc)
    locus = spanning_locus(fields)
    x5 = parse_poly("x5", ch)
    k = unit_multiple_of_power(locus.determinant, x5) if locus.determinant is not None else None
    rep.add("rank-drop locus contained in {x5 = 0}", k is not None,
            f"determinant {locus.determinant}", "unit multiple of a power of x5", loc)
    rep.loci.append(_locus_json("ad-flag rank drop", locus))
    rep.wall_time = time.perf_counter() - start
    return rep


# ---------------------------------------------------------------------------
# zero-trailer contact structure


def _forms(ch: Chart, *rows: Sequence[str]) -> list[DiffForm]:
    return [DiffForm.one_form(ch, [parse_poly(t, ch) for t in r]) for r in rows]


def zero_trailer_contact_suite() -> VerificationReport:
    start = time.perf_counter()
    ch = ZERO_TRAILER_CHART
    f = zero_trailer_fields()
    xs = [f["X1"], f["X2"], f["X3"]]
    ys = [f["Y1"], f["Y2"], f["Y3"]]
    rep = VerificationReport("zero_trailer_contact")
    sec = "Sec. 3, zero-trailer"

    consts = _consts(3, "1,2,3=1; 1,3,2=-1")
    cr = verify_structure_constants(xs, consts)
    rep.add("[X1,X2]=X3, [X1,X3]=-X2, [X2,X3]=0", cr.passed,
            "; ".join(f"[X{p.i},X{p.j}]={p.computed}" for p in cr.pairs), str(consts), sec)

    for i, y in enumerate(ys, 1):
        for j, x in enumerate(xs, 1):
            br = lie_bracket(y, x)
            rep.add(f"[Y{i},X{j}] = 0", br.is_zero(), br, "0", f"{sec}, Lie symmetries of V0")
    half = (ys[1] + ys[2]) * Fraction(1, 2)
    rep.add("(Y2+Y3)/2 commutes with X1, X2, X3", all(lie_bracket(half, x).is_zero() for x in xs),
            [str(lie_bracket(half, x)) for x in xs], "all 0", sec)

    la = is_locally_automorphic(xs)
    rep.add("X1^X2^X3 non-vanishing (locally automorphic)", la.passed and la.locus is not None and la.locus.empty,
            f"rank {la.rank}, determinant {la.locus.determinant if la.locus else None}", "constant nonzero", sec)

    eta = dual_coframe(ys)
    expected = _forms(ch, ("0", "0", "1"), ("1", "0", "xi2"), ("0", "1", "-xi1"))
    for i, (e, x) in enumerate(zip(eta, expected), 1):
        rep.add(f"dual coframe eta{i}", e == x, e, x, f"{sec}, dual frame")
    e1, e2, e3 = expected

    d1, d2, d3 = (exterior_derivative(e) for e in expected)
    rep.add("d eta1 = 0", d1.is_zero(), d1, "0", sec)
    rep.add("d eta3 = eta1^eta2", d3 == wedge_forms(e1, e2), d3, wedge_forms(e1, e2), sec)
    rep.add("d eta2 = -eta1^eta3", d2 == -wedge_forms(e1, e3), d2, -wedge_forms(e1, e3), sec)

    for label, w in (("eta3", e3), ("eta2", e2), ("eta1+eta2", e1 + e2)):
        top = wedge_forms(w, exterior_derivative(w))
        vol = volume_coefficient(top)
        ok = vol.is_constant() and not vol.is_zero()
        rep.add(f"{label} ^ d{label} != 0", ok, f"{vol} * dxi1^dxi2^dtheta0", "nonzero constant multiple", sec)
        rep.loci.append({"name": f"{label} contact degeneracy", "description": "nowhere" if ok else "unknown",
                         "minors": [] if ok else [str(vol)], "determinant": str(vol)})

    vol = volume_coefficient(wedge_forms(wedge_forms(e1, e2), e3))
    rep.add("eta1^eta2^eta3 = volume", vol == 1, vol, 1, sec)

    for w_label, w in (("eta2", e2), ("eta3", e3)):
        for i, x in enumerate(xs, 1):
            direct = lie_derivative_form(x, w)
            cartan = lie_derivative_form_cartan(x, w)
            rep.add(f"L_X{i} {w_label} = 0", direct.is_zero(), direct, "0", f"{sec}, L_Xi eta2 = 0")
            rep.add(f"L_X{i} {w_label}: Cartan formula agrees", direct == cartan, cartan, direct, sec, claim=False)

    for label, y, w in (("Y3", ys[2], e3), ("Y2", ys[1], e2)):
        one = interior_product(y, w).scalar()
        rep.add(f"i_{label} eta{label[1]} = 1", one == 1, one, 1, f"{sec}, Reeb vector field")
        rest = interior_product(y, exterior_derivative(w))
        rep.add(f"i_{label} d eta{label[1]} = 0", rest.is_zero(), rest, "0", f"{sec}, Reeb vector field")

    y12 = lie_bracket(ys[0], ys[1])
    w = wedge_vectors([y12, ys[0], ys[1]])
    rep.add("[Y1,Y2]^Y1^Y2 != 0", not w.is_zero(), w, "nonzero", sec)

    for label, dist, reeb in (("ker eta3 = <Y1,Y2>", (ys[0], ys[1]), ys[2]),
                              ("ker eta2 = <Y1,Y3>", (ys[0], ys[2]), ys[1])):
        kr = kcontact_verify(Distribution(ch, dist), [reeb], default_points(ch, "zero_trailer"))
        rep.add(f"{label} is contact with Reeb field {reeb}", kr.overall == "pass", kr.overall, "pass", sec)
        rep.loci.append(_locus_json(f"{label} spanning locus", kr.spanning_locus))
    rep.wall_time = time.perf_counter() - start
    return rep
