"""Floating-point Lie systems dx/dt = sum_a b_a(t) X_a(x) and the ISO(2) superposition check."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence, TextIO

from .calculus import VectorField
from .parser import parse_poly
from .symcore import LINEAR, Chart, TrigPoly

TIME_CHART = Chart.of("t")


class IntegrationError(RuntimeError):
    pass


@dataclass(frozen=True)
class TDepCoefficients:
    """b_a(t) as univariate rational polynomials, stored as ascending coefficient tuples."""

    polys: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def constant(cls, *values) -> "TDepCoefficients":
        return cls(tuple((Fraction(v),) for v in values))

    @classmethod
    def parse(cls, texts: Sequence[str]) -> "TDepCoefficients":
        polys = []
        for text in texts:
            p = parse_poly(text, TIME_CHART)
            deg = p.degree() if not p.is_zero() else 0
            polys.append(tuple(p.coefficient((k,)) for k in range(deg + 1)))
        return cls(tuple(polys))

    def __len__(self) -> int:
        return len(self.polys)

    def __call__(self, t: float) -> list[float]:
        out = []
        for coefs in self.polys:
            v = 0.0
            for c in reversed(coefs):
                v = v * t + float(c)
            out.append(v)
        return out

    def __str__(self) -> str:
        return ", ".join(str(TrigPoly(TIME_CHART, {(k,): c for k, c in enumerate(p)})) for p in self.polys)


def _slot_values(chart: Chart, x: Sequence[float]) -> list[float]:
    out: list[float] = []
    for (_, kind), v in zip(chart.coords, x):
        if kind == LINEAR:
            out.append(v)
        else:
            out += [math.sin(v), math.cos(v)]
    return out


def compile_poly(p: TrigPoly) -> Callable[[Sequence[float]], float]:
    terms = [(float(c), [(i, e) for i, e in enumerate(m) if e]) for m, c in p.items()]

    def f(slots: Sequence[float]) -> float:
        total = 0.0
        for c, powers in terms:
            for i, e in powers:
                c *= slots[i] ** e
            total += c
        return total

    return f


def compile_field(x: VectorField) -> Callable[[Sequence[float]], list[float]]:
    """Float evaluator taking raw coordinates (angles as radians)."""
    comps = [compile_poly(c) for c in x.comps]
    chart = x.chart

    def f(state: Sequence[float]) -> list[float]:
        slots = _slot_values(chart, state)
        return [c(slots) for c in comps]

    return f


@dataclass
class Trajectory:
    chart: Chart
    times: list[float]
    states: list[list[float]]
    step: float

    def final(self) -> list[float]:
        return self.states[-1]

    def wrapped(self, state: Sequence[float]) -> list[float]:
        return [wrap_angle(v) if kind != LINEAR else v for (_, kind), v in zip(self.chart.coords, state)]

    def write_csv(self, out: TextIO) -> None:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["t", *self.chart.names])
        for t, x in zip(self.times, self.states):
            w.writerow(["%.17g" % t, *("%.17g" % v for v in self.wrapped(x))])

    def to_csv(self) -> str:
        buf = io.StringIO()
        self.write_csv(buf)
        return buf.getvalue()


def wrap_angle(v: float) -> float:
    """Representative in (-pi, pi]."""
    w = math.remainder(v, 2 * math.pi)
    return math.pi if w == -math.pi else w


def integrate_rk4(
    basis: Sequence[VectorField],
    b: TDepCoefficients,
    x0: Sequence[float],
    t_span: tuple[float, float],
    h: float,
) -> Trajectory:
    """Classical RK4 with N = ceil(length / h) equal steps."""
    if not basis:
        raise ValueError("empty basis")
    chart = basis[0].chart
    if any(x.chart != chart for x in basis):
        raise ValueError("basis fields live on different charts")
    if len(b) != len(basis):
        raise ValueError(f"{len(b)} coefficients for a basis of size {len(basis)}")
    if not h > 0:
        raise ValueError("step size must be positive")
    if len(x0) != chart.dim:
        raise ValueError(f"initial state has {len(x0)} entries, chart has dimension {chart.dim}")
    t0, t1 = map(float, t_span)
    if not t1 > t0:
        raise ValueError("t_span must be increasing")
    fields = [compile_field(x) for x in basis]
    n = chart.dim

    def rhs(t: float, x: list[float]) -> list[float]:
        coefs = b(t)
        out = [0.0] * n
        for c, f in zip(coefs, fields):
            if c:
                for i, v in enumerate(f(x)):
                    out[i] += c * v
        return out

    steps = max(1, math.ceil((t1 - t0) / h - 1e-12))
    he = (t1 - t0) / steps
    x = [float(v) for v in x0]
    times, states = [t0], [list(x)]
    for k in range(steps):
        t = t0 + k * he
        try:
            k1 = rhs(t, x)
            k2 = rhs(t + he / 2, [a + he / 2 * d for a, d in zip(x, k1)])
            k3 = rhs(t + he / 2, [a + he / 2 * d for a, d in zip(x, k2)])
            k4 = rhs(t + he, [a + he * d for a, d in zip(x, k3)])
        except OverflowError:
            raise IntegrationError(f"overflow near t={t!r}") from None
        x = [a + he / 6 * (p + 2 * q + 2 * r + s) for a, p, q, r, s in zip(x, k1, k2, k3, k4)]
        if not all(math.isfinite(v) for v in x):
            raise IntegrationError(f"non-finite state at t={t + he!r}")
        times.append(t0 + (k + 1) * he)
        states.append(list(x))
    return Trajectory(chart, times, states, he)


# ---------------------------------------------------------------------------
# ISO(2)


@dataclass(frozen=True)
class ISO2Element:
    s: Fraction
    c: Fraction
    lam: tuple[Fraction, Fraction] = (Fraction(0), Fraction(0))

    def __post_init__(self) -> None:
        object.__setattr__(self, "s", Fraction(self.s))
        object.__setattr__(self, "c", Fraction(self.c))
        object.__setattr__(self, "lam", (Fraction(self.lam[0]), Fraction(self.lam[1])))
        if self.s**2 + self.c**2 != 1:
            raise ValueError(f"(s, c) = ({self.s}, {self.c}) is not on the unit circle")

    @classmethod
    def identity(cls) -> "ISO2Element":
        return cls(Fraction(0), Fraction(1))

    @property
    def angle(self) -> float:
        return math.atan2(self.s, self.c)

    def rotate(self, v: Sequence) -> tuple:
        return (self.c * v[0] - self.s * v[1], self.s * v[0] + self.c * v[1])

    def __mul__(self, other: "ISO2Element") -> "ISO2Element":
        # (A1, l1)(A2, l2) = (A1 A2, l1 + A1 l2)
        s = self.s * other.c + self.c * other.s
        c = self.c * other.c - self.s * other.s
        r = self.rotate(other.lam)
        return ISO2Element(s, c, (self.lam[0] + r[0], self.lam[1] + r[1]))

    def inverse(self) -> "ISO2Element":
        inv = ISO2Element(-self.s, self.c)
        r = inv.rotate(self.lam)
        return ISO2Element(-self.s, self.c, (-r[0], -r[1]))

    def __str__(self) -> str:
        return f"((s,c)=({self.s},{self.c}), lambda=({self.lam[0]},{self.lam[1]}))"


def iso2_action(g: ISO2Element, x: Sequence[float]) -> list[float]:
    """(xi, theta0) -> (lambda + A xi, theta0 + angle)."""
    if len(x) != 3:
        raise ValueError("the ISO(2) action is defined on (xi1, xi2, theta0)")
    s, c = float(g.s), float(g.c)
    return [
        float(g.lam[0]) + c * x[0] - s * x[1],
        float(g.lam[1]) + s * x[0] + c * x[1],
        x[2] + g.angle,
    ]


@dataclass
class SuperpositionReport:
    discrepancy: float
    tol: float
    passed: bool
    steps: int
    step: float
    worst_time: float = 0.0
    mapped_final: list[float] = field(default_factory=list)
    direct_final: list[float] = field(default_factory=list)


def check_superposition(
    basis: Sequence[VectorField],
    b: TDepCoefficients,
    g: ISO2Element,
    x0: Sequence[float],
    t_span: tuple[float, float],
    h: float,
    tol: float,
) -> SuperpositionReport:
    """Compare g . x_p(t) with the solution started at g . x0 (sup norm, angles mod 2 pi)."""
    chart = basis[0].chart
    if chart.dim != 3 or [k for _, k in chart.coords] != [LINEAR, LINEAR, "angular"]:
        raise ValueError("superposition check needs the zero-trailer chart (xi1, xi2, theta0:angle)")
    xp = integrate_rk4(basis, b, x0, t_span, h)
    direct = integrate_rk4(basis, b, iso2_action(g, x0), t_span, h)
    worst, worst_t = 0.0, xp.times[0]
    for t, a, d in zip(xp.times, xp.states, direct.states):
        m = iso2_action(g, a)
        diff = max(abs(m[0] - d[0]), abs(m[1] - d[1]), abs(wrap_angle(m[2] - d[2])))
        if diff > worst:
            worst, worst_t = diff, t
    return SuperpositionReport(
        worst, tol, worst <= tol, len(xp.times) - 1, xp.step, worst_t,
        iso2_action(g, xp.final()), direct.final(),
    )


def unicycle_error(basis: Sequence[VectorField], steps: int) -> float:
    """Sup error at t = pi of b = (1, 1, 0) from the origin against (sin t, 1 - cos t, t)."""
    t1 = math.pi
    traj = integrate_rk4(basis, TDepCoefficients.constant(1, 1, 0), (0.0, 0.0, 0.0), (0.0, t1), t1 / steps)
    x = traj.final()
    exact = (math.sin(t1), 1 - math.cos(t1), t1)
    return max(abs(a - e) for a, e in zip(x, exact))


def convergence_order(basis: Sequence[VectorField], coarse: int = 32) -> float:
    return math.log2(unicycle_error(basis, coarse) / unicycle_error(basis, 2 * coarse))
