"""Ranks, derived flags, Goursat and Lie-symmetry tests, and k-contact verification.

Generic ranks are decided exactly: a random rational point proposes a basis
whose nonvanishing minor certifies the lower bound, and bordered minors
(which must vanish identically) certify the upper bound.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from . import linalg
from .calculus import (
    MultiVector,
    VectorField,
    lie_bracket,
    schouten_vf_multivector,
    wedge_vectors,
)
from .symcore import ANGULAR, Chart, ChartMismatchError, Point, RatFrac, TrigPoly, circle_point

DEFAULT_SEED = 20240607


@dataclass(frozen=True)
class Distribution:
    chart: Chart
    generators: tuple[VectorField, ...]

    def __post_init__(self) -> None:
        if not self.generators:
            raise ValueError("a distribution needs at least one generator")
        for g in self.generators:
            if g.chart != self.chart:
                raise ChartMismatchError(f"generator on {g.chart}, distribution on {self.chart}")
        object.__setattr__(self, "generators", tuple(self.generators))

    @classmethod
    def of(cls, *gens: VectorField) -> "Distribution":
        return cls(gens[0].chart, tuple(gens))


@dataclass(frozen=True)
class Locus:
    """Degenerate set = common zero set of ``minors``; empty list = nowhere."""

    minors: tuple[TrigPoly, ...]
    description: str
    determinant: TrigPoly | None = None

    @property
    def empty(self) -> bool:
        return not self.minors

    @property
    def everywhere(self) -> bool:
        return bool(self.minors) and all(m.is_zero() for m in self.minors)


# ---------------------------------------------------------------------------
# points


def random_points(chart: Chart, n: int, seed: int | str = DEFAULT_SEED) -> list[Point]:
    """Deterministic pseudo-random rational points (small heights)."""
    rng = random.Random(f"{seed}:{chart}")
    pts = []
    for _ in range(n):
        vals = []
        for _, kind in chart.coords:
            q = Fraction(rng.randint(-9, 9), rng.randint(1, 7))
            vals.append(circle_point(q) if kind == ANGULAR else q)
        pts.append(Point(chart, tuple(vals)))
    return pts


def constant_point(chart: Chart, value: int) -> Point:
    """All linear coordinates at ``value``; angles at (0, 1) for 0 and (3/5, 4/5) otherwise."""
    ang = (Fraction(0), Fraction(1)) if value == 0 else (Fraction(3, 5), Fraction(4, 5))
    return Point(chart, tuple(ang if k == ANGULAR else Fraction(value) for _, k in chart.coords))


def default_points(chart: Chart, seed: int | str = DEFAULT_SEED) -> list[Point]:
    return [constant_point(chart, 0), constant_point(chart, 1), *random_points(chart, 3, seed)]


# ---------------------------------------------------------------------------
# ranks


def _matrix(fields: Sequence[VectorField]) -> list[list[TrigPoly]]:
    return [list(f.comps) for f in fields]


def _same_chart(fields: Sequence[VectorField]) -> Chart:
    if not fields:
        raise ValueError("no fields given")
    ch = fields[0].chart
    for f in fields:
        if f.chart != ch:
            raise ChartMismatchError(f"{f.chart} vs {ch}")
    return ch


class _MinorCache:
    """r x r minors of a fixed list of fields, keyed by column tuple."""

    def __init__(self, rows: list[list[TrigPoly]], zero: TrigPoly):
        self.rows = rows
        self.zero = zero
        self.cache: dict = {}

    def get(self, cols: tuple[int, ...]) -> TrigPoly:
        if cols not in self.cache:
            self.cache[cols] = linalg.symbolic_det(self.rows, self.zero, cols) if self.rows else self.zero + 1
        return self.cache[cols]


def _bordered_minor(cache: _MinorCache, cols: tuple[int, ...], extra: Sequence[TrigPoly]) -> TrigPoly:
    """det of the basis rows stacked over ``extra`` on ``cols``, expanded along ``extra``."""
    r = len(cols) - 1
    total = cache.zero
    for k, c in enumerate(cols):
        e = extra[c]
        if e.is_zero():
            continue
        m = cache.get(cols[:k] + cols[k + 1 :])
        if m.is_zero():
            continue
        # row ``extra`` sits last (index r); cofactor sign (-1)^(r + k)
        t = e * m
        total = total - t if (r + k) % 2 else total + t
    return total


@dataclass
class GenericBasis:
    """Indices of a generically independent subset and a certifying column set."""

    rows: list[int]
    cols: list[int]
    cache: _MinorCache

    @property
    def rank(self) -> int:
        return len(self.rows)

    def witness_minor(self) -> TrigPoly:
        return self.cache.get(tuple(self.cols))


def _certify_member(basis: GenericBasis, vec: Sequence[TrigPoly], n: int) -> tuple[bool, int | None, TrigPoly | None]:
    """Check the bordered minors for ``vec``; return (member, offending column, minor)."""
    J = basis.cols
    for j in range(n):
        if j in J:
            continue
        cols = tuple(sorted([*J, j]))
        m = _bordered_minor(basis.cache, cols, vec)
        if not m.is_zero():
            return False, j, m
    return True, None, None


def generic_basis(fields: Sequence[VectorField], seed: int | str = DEFAULT_SEED) -> GenericBasis:
    ch = _same_chart(fields)
    zero = TrigPoly.zero(ch)
    n = ch.dim
    best: tuple[list[int], list[int]] = ([], [])
    for pt in random_points(ch, 2, seed):
        vals = [f.evaluate(pt) for f in fields]
        rows, cols = linalg.independent_rows(vals)
        if len(rows) > len(best[0]):
            best = (rows, cols)
        if len(rows) == min(n, len(fields)):
            break
    rows, cols = best
    cache = _MinorCache([list(fields[i].comps) for i in rows], zero)
    basis = GenericBasis(list(rows), list(cols), cache)
    # upper bound: every other field must have vanishing bordered minors
    changed = True
    while changed and basis.rank < n:
        changed = False
        for i, f in enumerate(fields):
            if i in basis.rows:
                continue
            ok, j, _ = _certify_member(basis, f.comps, n)
            if not ok:
                rows = sorted([*basis.rows, i])
                cols = sorted([*basis.cols, j])
                basis = GenericBasis(rows, cols, _MinorCache([list(fields[k].comps) for k in rows], zero))
                changed = True
                break
    return basis


def generic_rank(fields: Sequence[VectorField], seed: int | str = DEFAULT_SEED) -> int:
    """Largest r such that some r x r minor of the component matrix is not identically zero."""
    if not fields:
        return 0
    return generic_basis(fields, seed).rank


def rank_at(fields: Sequence[VectorField], pt: Point) -> int:
    ch = _same_chart(fields)
    if pt.chart != ch:
        raise ChartMismatchError(f"point on {pt.chart}, fields on {ch}")
    return linalg.rank([f.evaluate(pt) for f in fields])


def is_member(x: VectorField, d: Distribution, seed: int | str = DEFAULT_SEED) -> bool:
    """X lies in span(D) wherever D attains its generic rank."""
    basis = generic_basis(d.generators, seed)
    return _certify_member(basis, x.comps, d.chart.dim)[0]


# ---------------------------------------------------------------------------
# derived flag


@dataclass
class FlagLevel:
    generators: list[VectorField]
    rank: int


@dataclass
class DerivedFlag:
    chart: Chart
    levels: list[FlagLevel]
    stabilized: bool

    @property
    def ranks(self) -> tuple[int, ...]:
        return tuple(lv.rank for lv in self.levels)


def _dedupe(fields: Sequence[VectorField]) -> list[VectorField]:
    out: list[VectorField] = []
    seen: set[VectorField] = set()
    for f in fields:
        if f.is_zero() or f in seen or -f in seen:
            continue
        seen.add(f)
        out.append(f)
    return out


def derived_flag(d: Distribution, max_depth: int | None = None, seed: int | str = DEFAULT_SEED) -> DerivedFlag:
    """D^(l+1) = D^(l) + [D^(l), D^(l)].

    Brackets are taken between a generic basis of each level; the level's
    generator list keeps all earlier generators so pointwise ranks see them.
    """
    n = d.chart.dim
    if max_depth is None:
        max_depth = n
    if max_depth < 0:
        raise ValueError("max_depth must be non-negative")
    gens = list(d.generators)
    basis = generic_basis(gens, seed)
    levels = [FlagLevel(gens, basis.rank)]
    stabilized = False
    for _ in range(max_depth):
        if levels[-1].rank >= n:
            break
        b = [gens[i] for i in basis.rows]
        brackets = [lie_bracket(u, v) for u, v in combinations(b, 2)]
        gens = _dedupe([*gens, *brackets])
        basis = generic_basis(gens, seed)
        levels.append(FlagLevel(gens, basis.rank))
        if basis.rank == levels[-2].rank:
            stabilized = True
            break
    return DerivedFlag(d.chart, levels, stabilized)


@dataclass
class GoursatVerdict:
    passed: bool
    ranks: tuple[int, ...]
    expected: tuple[int, ...]
    pointwise: list[tuple[Point, tuple[int, ...]]] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)


def is_goursat(d: Distribution, points: Sequence[Point] = (), seed: int | str = DEFAULT_SEED) -> GoursatVerdict:
    if len(d.generators) != 2:
        raise ValueError(f"a Goursat test needs exactly two generators, got {len(d.generators)}")
    n = d.chart.dim
    flag = derived_flag(d, n, seed)
    expected = tuple(range(2, n + 1))
    failures = []
    if flag.ranks != expected:
        failures.append(f"generic flag ranks {flag.ranks} != {expected}")
    pointwise = []
    for pt in points:
        rs = tuple(rank_at(lv.generators, pt) for lv in flag.levels)
        pointwise.append((pt, rs))
        if rs != expected[: len(rs)] or len(rs) != len(expected):
            failures.append(f"flag ranks {rs} at {pt}")
    return GoursatVerdict(not failures, flag.ranks, expected, pointwise, failures)


# ---------------------------------------------------------------------------
# symmetries


@dataclass
class SymmetryVerdict:
    passed: bool
    brackets: list[VectorField]
    offending: list[tuple[int, VectorField]] = field(default_factory=list)


def is_lie_symmetry(y: VectorField, d: Distribution, seed: int | str = DEFAULT_SEED) -> SymmetryVerdict:
    basis = generic_basis(d.generators, seed)
    brackets = [lie_bracket(y, g) for g in d.generators]
    bad = [(i, b) for i, b in enumerate(brackets) if not _certify_member(basis, b.comps, d.chart.dim)[0]]
    return SymmetryVerdict(not bad, brackets, bad)


@dataclass
class SchoutenVerdict:
    passed: bool
    bracket: MultiVector
    factor: TrigPoly | RatFrac | None


def schouten_symmetry_check(y: VectorField, d: Distribution) -> SchoutenVerdict:
    """Y preserves D = <X1, X2> iff [Y, X1^X2] = f X1^X2 for some function f."""
    if len(d.generators) != 2:
        raise ValueError("the bivector criterion needs exactly two generators")
    biv = wedge_vectors(list(d.generators))
    if biv.is_zero():
        raise ValueError("X1 ^ X2 vanishes identically")
    lie = schouten_vf_multivector(y, biv)
    keys = sorted(set(biv.comps) | set(lie.comps))
    for i, j in combinations(keys, 2):
        if not (lie.component(i) * biv.component(j) - lie.component(j) * biv.component(i)).is_zero():
            return SchoutenVerdict(False, lie, None)
    k0 = min(biv.comps, key=lambda k: (not biv.comps[k].is_constant(), k))
    factor = RatFrac(lie.component(k0), biv.comps[k0]).simplify()
    return SchoutenVerdict(True, lie, factor)


def ad_distribution(x1: VectorField, x2: VectorField, k: int) -> list[VectorField]:
    """[X1, X2, ad_X2 X1, ..., ad_X2^k X1] with ad_X2 Z = [X2, Z]."""
    if x1.chart != x2.chart:
        raise ChartMismatchError("ad-distribution of fields on different charts")
    if k < 1:
        raise ValueError("k must be at least 1")
    out = [x1, x2]
    cur = x1
    for _ in range(k):
        cur = lie_bracket(x2, cur)
        out.append(cur)
    return out


# ---------------------------------------------------------------------------
# maximal non-integrability


@dataclass
class PointNonintegrability:
    point: Point
    status: str  # "pass" | "fail" | "rank-deficient"
    rank: int


@dataclass
class NonintegrabilityVerdict:
    passed: bool
    points: list[PointNonintegrability]


def _quotient_coords(dp: list[list[Fraction]], n: int):
    """Return a function mapping a vector to its coordinates in T_pM / D_p."""
    comp = []
    span = [list(r) for r in dp]
    for j in range(n):
        e = [Fraction(int(i == j)) for i in range(n)]
        if linalg.rank(span + [e]) > len(span):
            span.append(e)
            comp.append(j)
    # columns of the change-of-basis matrix: D_p rows followed by chosen unit vectors
    basis_t = [[span[c][r] for c in range(n)] for r in range(n)]
    k = len(dp)

    def project(v: Sequence[Fraction]) -> list[Fraction]:
        sol = linalg.solve(basis_t, list(v))
        return sol[k:]

    return project


def max_nonintegrable(
    d: Distribution,
    pts: Sequence[Point] = (),
    seed: int | str = DEFAULT_SEED,
    n_random: int = 3,
) -> NonintegrabilityVerdict:
    """rho(X, Y) = [X, Y] mod D must be non-degenerate at every regular test point."""
    ch = d.chart
    n = ch.dim
    basis = generic_basis(d.generators, seed)
    gens = [d.generators[i] for i in basis.rows]
    r = len(gens)
    brackets = {(a, b): lie_bracket(gens[a], gens[b]) for a, b in combinations(range(r), 2)}
    results = []
    for pt in [*pts, *random_points(ch, n_random, f"{seed}:nonint")]:
        dp = [g.evaluate(pt) for g in gens]
        rk = linalg.rank(dp)
        if rk < r:
            results.append(PointNonintegrability(pt, "rank-deficient", rk))
            continue
        if r == n:
            results.append(PointNonintegrability(pt, "fail", rk))
            continue
        project = _quotient_coords(dp, n)
        rho = {}
        for (a, b), br in brackets.items():
            q = project(br.evaluate(pt))
            rho[(a, b)] = q
            rho[(b, a)] = [-v for v in q]
        zero_q = [Fraction(0)] * (n - r)
        # column a: stacked rho(g_a, g_b) over b
        cols = []
        for a in range(r):
            col = []
            for b in range(r):
                col += rho.get((a, b), zero_q)
            cols.append(col)
        rows = [list(x) for x in zip(*cols)]
        ok = linalg.rank(rows) == r
        results.append(PointNonintegrability(pt, "pass" if ok else "fail", rk))
    regular = [p for p in results if p.status != "rank-deficient"]
    return NonintegrabilityVerdict(bool(regular) and all(p.status == "pass" for p in regular), results)


# ---------------------------------------------------------------------------
# spanning locus and k-contact verification


def normalize_certificate(p: TrigPoly) -> TrigPoly:
    """Scale so the leading coefficient is one."""
    if p.is_zero():
        return p
    return p * (1 / p.leading()[1])


def spanning_locus(fields: Sequence[VectorField]) -> Locus:
    ch = _same_chart(fields)
    if len(fields) != ch.dim:
        raise ValueError(f"spanning locus needs {ch.dim} fields, got {len(fields)}")
    det = linalg.symbolic_det(_matrix(fields), TrigPoly.zero(ch))
    if det.is_zero():
        return Locus((det,), "everywhere (determinant vanishes identically)", det)
    if det.is_constant():
        return Locus((), "nowhere", det)
    cert = normalize_certificate(det)
    return Locus((cert,), f"{{{cert} = 0}}", det)


@dataclass
class CommutationCheck:
    i: int
    j: int
    bracket: VectorField

    @property
    def passed(self) -> bool:
        return self.bracket.is_zero()


@dataclass
class KContactReport:
    k: int
    symmetry_checks: list[SymmetryVerdict]
    commutation_checks: list[CommutationCheck]
    spanning_locus: Locus
    nonintegrability: NonintegrabilityVerdict
    overall: str  # "pass" | "pass-on-dense-subset" | "fail"


def kcontact_verify(
    d: Distribution,
    s: Sequence[VectorField],
    pts: Sequence[Point] = (),
    seed: int | str = DEFAULT_SEED,
) -> KContactReport:
    ch = d.chart
    basis = generic_basis(d.generators, seed)
    if len(s) + basis.rank != ch.dim:
        raise ValueError(f"{len(s)} symmetries + rank {basis.rank} != dimension {ch.dim}")
    sym = [is_lie_symmetry(si, d, seed) for si in s]
    comm = [CommutationCheck(i, j, lie_bracket(s[i], s[j])) for i, j in combinations(range(len(s)), 2)]
    locus = spanning_locus([*s, *(d.generators[i] for i in basis.rows)])
    nonint = max_nonintegrable(d, pts, seed)
    symbolic_ok = all(v.passed for v in sym) and all(c.passed for c in comm) and nonint.passed
    if not symbolic_ok or locus.everywhere:
        overall = "fail"
    elif locus.empty:
        overall = "pass"
    else:
        overall = "pass-on-dense-subset"
    return KContactReport(len(s), sym, comm, locus, nonint, overall)
