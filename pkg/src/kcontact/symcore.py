"""Exact trig-polynomial arithmetic over coordinate charts.

Coefficients live in Q[x_1, ..., x_a, s_1, c_1, ..., s_b, c_b] / (s_i^2 + c_i^2 - 1),
where the x's are linear coordinates and (s_i, c_i) stand for sin/cos of an
angular coordinate.  Every polynomial is kept in a normal form in which no
sine exponent exceeds one, which makes zero-testing a dictionary lookup.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping, Sequence, Union

Rat = Fraction
Number = Union[int, Fraction]

LINEAR = "linear"
ANGULAR = "angular"


class ChartMismatchError(ValueError):
    """Raised when objects attached to different charts are combined."""


@dataclass(frozen=True)
class Chart:
    """An ordered coordinate system.

    ``coords`` is a tuple of ``(name, kind)`` pairs, kind being ``"linear"`` or
    ``"angular"``.  Monomial exponent vectors use one slot per linear
    coordinate and two consecutive slots (sin, cos) per angular one, in chart
    order.
    """

    coords: tuple[tuple[str, str], ...]

    def __post_init__(self) -> None:
        if not self.coords:
            raise ValueError("a chart needs at least one coordinate")
        names = [n for n, _ in self.coords]
        if any(not n for n in names):
            raise ValueError("coordinate names must be non-empty")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate coordinate names in {names}")
        for n, kind in self.coords:
            if kind not in (LINEAR, ANGULAR):
                raise ValueError(f"unknown coordinate kind {kind!r} for {n}")
        slots = []
        pos = 0
        for _, kind in self.coords:
            if kind == LINEAR:
                slots.append((pos,))
                pos += 1
            else:
                slots.append((pos, pos + 1))
                pos += 2
        object.__setattr__(self, "_slots", tuple(slots))
        object.__setattr__(self, "_nslots", pos)
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(names)})

    @classmethod
    def of(cls, *names: str, angular: Iterable[str] = ()) -> "Chart":
        ang = set(angular)
        return cls(tuple((n, ANGULAR if n in ang else LINEAR) for n in names))

    @property
    def dim(self) -> int:
        return len(self.coords)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.coords)

    @property
    def nslots(self) -> int:
        return self._nslots

    @property
    def has_angles(self) -> bool:
        return any(k == ANGULAR for _, k in self.coords)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown coordinate {name!r} for chart {self}") from None

    def kind(self, name: str) -> str:
        return self.coords[self.index(name)][1]

    def slots(self, i: int) -> tuple[int, ...]:
        return self._slots[i]

    def slot_symbols(self) -> list[str]:
        """Printable symbol per exponent slot."""
        out = []
        for name, kind in self.coords:
            if kind == LINEAR:
                out.append(name)
            else:
                out += [f"sin({name})", f"cos({name})"]
        return out

    def __str__(self) -> str:
        return "chart " + " ".join(n + (":angle" if k == ANGULAR else "") for n, k in self.coords)


def _check_chart(a: Chart, b: Chart) -> None:
    if a != b:
        raise ChartMismatchError(f"chart mismatch: {a} vs {b}")


@dataclass(frozen=True)
class Point:
    """An exact point on a chart.

    ``values[i]`` is a Fraction for a linear coordinate and an ``(s, c)`` pair
    with ``s**2 + c**2 == 1`` for an angular one.
    """

    chart: Chart
    values: tuple

    def __post_init__(self) -> None:
        if len(self.values) != self.chart.dim:
            raise ValueError(f"point has {len(self.values)} values, chart has dimension {self.chart.dim}")
        vals = []
        for (name, kind), v in zip(self.chart.coords, self.values):
            if kind == LINEAR:
                if isinstance(v, tuple):
                    raise ValueError(f"linear coordinate {name} needs a scalar value")
                vals.append(Fraction(v))
            else:
                if not (isinstance(v, tuple) and len(v) == 2):
                    raise ValueError(f"angular coordinate {name} needs an (s, c) pair")
                s, c = Fraction(v[0]), Fraction(v[1])
                if s * s + c * c != 1:
                    raise ValueError(f"({s}, {c}) is not on the unit circle")
                vals.append((s, c))
        object.__setattr__(self, "values", tuple(vals))

    def slot_values(self) -> list[Fraction]:
        out: list[Fraction] = []
        for (_, kind), v in zip(self.chart.coords, self.values):
            if kind == LINEAR:
                out.append(v)
            else:
                out += [v[0], v[1]]
        return out

    def value(self, name: str):
        return self.values[self.chart.index(name)]

    def __str__(self) -> str:
        parts = []
        for (name, kind), v in zip(self.chart.coords, self.values):
            parts.append(f"{name}={v}" if kind == LINEAR else f"{name}=({v[0]},{v[1]})")
        return "(" + ", ".join(parts) + ")"


def circle_point(t: Number) -> tuple[Fraction, Fraction]:
    """Rational point on the unit circle from the stereographic parameter ``t``."""
    t = Fraction(t)
    d = 1 + t * t
    return (2 * t / d, (1 - t * t) / d)


# ---------------------------------------------------------------------------
# normal form


def _reduce_monomial(m: tuple[int, ...], chart: Chart) -> list[tuple[tuple[int, ...], int]]:
    """Rewrite sin^2 -> 1 - cos^2 until every sine exponent is at most one."""
    out = [(m, 1)]
    for i, (_, kind) in enumerate(chart.coords):
        if kind != ANGULAR:
            continue
        si, ci = chart.slots(i)
        nxt = []
        for mono, coef in out:
            es = mono[si]
            if es < 2:
                nxt.append((mono, coef))
                continue
            k, r = divmod(es, 2)
            base = list(mono)
            base[si] = r
            for j in range(k + 1):
                mm = base.copy()
                mm[ci] += 2 * j
                nxt.append((tuple(mm), coef * comb(k, j) * (-1) ** j))
        out = nxt
    return out


def _normalize(terms: Mapping[tuple[int, ...], Fraction], chart: Chart) -> dict:
    out: dict = {}
    if chart.has_angles:
        for m, c in terms.items():
            if not c:
                continue
            for mm, k in _reduce_monomial(m, chart):
                out[mm] = out.get(mm, 0) + c * k
    else:
        for m, c in terms.items():
            if c:
                out[m] = out.get(m, 0) + c
    return {m: Fraction(c) for m, c in out.items() if c}


def term_key(m: tuple[int, ...]) -> tuple:
    """Graded lexicographic key; larger means earlier in printed output."""
    return (sum(m), m)


class TrigPoly:
    """Immutable trig-polynomial in normal form."""

    __slots__ = ("chart", "_terms", "_hash")

    def __init__(self, chart: Chart, terms: Mapping[tuple[int, ...], Number] | None = None, *, _normal: bool = False):
        self.chart = chart
        if not terms:
            self._terms = {}
        elif _normal:
            self._terms = dict(terms)
        else:
            self._terms = _normalize(terms, chart)
        self._hash = None

    # constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, chart: Chart) -> "TrigPoly":
        return cls(chart, {}, _normal=True)

    @classmethod
    def const(cls, chart: Chart, value: Number) -> "TrigPoly":
        value = Fraction(value)
        if not value:
            return cls.zero(chart)
        return cls(chart, {(0,) * chart.nslots: value}, _normal=True)

    @classmethod
    def coord(cls, chart: Chart, name: str) -> "TrigPoly":
        i = chart.index(name)
        if chart.coords[i][1] != LINEAR:
            raise ValueError(f"{name} is angular; use sin()/cos()")
        m = [0] * chart.nslots
        m[chart.slots(i)[0]] = 1
        return cls(chart, {tuple(m): Fraction(1)}, _normal=True)

    @classmethod
    def sin(cls, chart: Chart, name: str) -> "TrigPoly":
        return cls._trig(chart, name, 0)

    @classmethod
    def cos(cls, chart: Chart, name: str) -> "TrigPoly":
        return cls._trig(chart, name, 1)

    @classmethod
    def _trig(cls, chart: Chart, name: str, which: int) -> "TrigPoly":
        i = chart.index(name)
        if chart.coords[i][1] != ANGULAR:
            raise ValueError(f"sin/cos applied to linear coordinate {name}")
        m = [0] * chart.nslots
        m[chart.slots(i)[which]] = 1
        return cls(chart, {tuple(m): Fraction(1)}, _normal=True)

    # basic queries --------------------------------------------------------

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coefficient(self, m: tuple[int, ...]) -> Fraction:
        return self._terms.get(m, Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and not any(next(iter(self._terms))))

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self._terms.get((0,) * self.chart.nslots, Fraction(0))

    def degree(self) -> int:
        return max((sum(m) for m in self._terms), default=-1)

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        return sorted(self._terms.items(), key=lambda t: term_key(t[0]), reverse=True)

    def leading(self) -> tuple[tuple[int, ...], Fraction]:
        return max(self._terms.items(), key=lambda t: term_key(t[0]))

    def depends_on(self, name: str) -> bool:
        slots = self.chart.slots(self.chart.index(name))
        return any(m[s] for m in self._terms for s in slots)

    # arithmetic -----------------------------------------------------------

    def _coerce(self, other) -> "TrigPoly | None":
        if isinstance(other, TrigPoly):
            _check_chart(self.chart, other.chart)
            return other
        if isinstance(other, (int, Fraction)):
            return TrigPoly.const(self.chart, other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self._terms)
        for m, c in o._terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return TrigPoly(self.chart, out, _normal=True)

    __radd__ = __add__

    def __neg__(self) -> "TrigPoly":
        return TrigPoly(self.chart, {m: -c for m, c in self._terms.items()}, _normal=True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return TrigPoly.zero(self.chart)
            return TrigPoly(self.chart, {m: c * other for m, c in self._terms.items()}, _normal=True)
        if not isinstance(other, TrigPoly):
            return NotImplemented
        _check_chart(self.chart, other.chart)
        if not self._terms or not other._terms:
            return TrigPoly.zero(self.chart)
        out: dict = {}
        get = out.get
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = get(m, 0) + c1 * c2
        if self.chart.has_angles:
            return TrigPoly(self.chart, out)
        return TrigPoly(self.chart, {m: c for m, c in out.items() if c}, _normal=True)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "TrigPoly":
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = TrigPoly.const(self.chart, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        if isinstance(other, TrigPoly) and other.is_constant() and not other.is_zero():
            return self * (1 / other.constant_value())
        if isinstance(other, TrigPoly):
            return RatFrac(self, other)
        return NotImplemented

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self._terms == TrigPoly.const(self.chart, other)._terms
        if isinstance(other, RatFrac):
            return other == self
        if not isinstance(other, TrigPoly):
            return NotImplemented
        return self.chart == other.chart and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.chart, frozenset(self._terms.items())))
        return self._hash

    # calculus -------------------------------------------------------------

    def diff(self, name: str) -> "TrigPoly":
        """Exact partial derivative with respect to coordinate ``name``."""
        i = self.chart.index(name)
        slots = self.chart.slots(i)
        out: dict = {}
        if len(slots) == 1:
            (k,) = slots
            for m, c in self._terms.items():
                e = m[k]
                if e:
                    mm = list(m)
                    mm[k] = e - 1
                    mm = tuple(mm)
                    out[mm] = out.get(mm, 0) + c * e
            return TrigPoly(self.chart, {m: c for m, c in out.items() if c}, _normal=True)
        si, ci = slots
        for m, c in self._terms.items():
            a, b = m[si], m[ci]
            if a:  # a s^(a-1) c^(b+1)
                mm = list(m)
                mm[si] = a - 1
                mm[ci] = b + 1
                mm = tuple(mm)
                out[mm] = out.get(mm, 0) + c * a
            if b:  # -b s^(a+1) c^(b-1)
                mm = list(m)
                mm[si] = a + 1
                mm[ci] = b - 1
                mm = tuple(mm)
                out[mm] = out.get(mm, 0) - c * b
        return TrigPoly(self.chart, out)

    def evaluate(self, pt: Point) -> Fraction:
        _check_chart(self.chart, pt.chart)
        vals = pt.slot_values()
        total = Fraction(0)
        for m, c in self._terms.items():
            v = c
            for x, e in zip(vals, m):
                if e:
                    v *= x**e
            total += v
        return total

    def substitute_slots(self, vals: Sequence[float]) -> float:
        """Float evaluation given one value per exponent slot."""
        total = 0.0
        for m, c in self._terms.items():
            v = float(c)
            for x, e in zip(vals, m):
                if e:
                    v *= x**e
            total += v
        return total

    def denominator_lcm(self) -> int:
        from math import lcm

        return lcm(*(c.denominator for c in self._terms.values())) if self._terms else 1

    def numerator_gcd(self) -> int:
        from math import gcd

        return gcd(*(c.numerator for c in self._terms.values())) if self._terms else 1

    # printing -------------------------------------------------------------

    def monomial_str(self, m: tuple[int, ...]) -> str:
        syms = self.chart.slot_symbols()
        parts = []
        for s, e in zip(syms, m):
            if e == 1:
                parts.append(s)
            elif e > 1:
                parts.append(f"{s}^{e}")
        return "*".join(parts)

    def signed_terms(self) -> list[tuple[int, str]]:
        """(sign, unsigned text) per term in canonical order."""
        out = []
        for m, c in self.sorted_terms():
            sign = -1 if c < 0 else 1
            a = abs(c)
            mono = self.monomial_str(m)
            if not mono:
                txt = str(a)
            elif a == 1:
                txt = mono
            else:
                txt = f"{a}*{mono}"
            out.append((sign, txt))
        return out

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        out = ""
        for k, (sign, txt) in enumerate(self.signed_terms()):
            if k == 0:
                out = ("-" if sign < 0 else "") + txt
            else:
                out += (" - " if sign < 0 else " + ") + txt
        return out

    def __repr__(self) -> str:
        return f"TrigPoly({str(self)!r})"


class RatFrac:
    """Quotient of two trig-polynomials; equality by cross-multiplication."""

    __slots__ = ("num", "den")

    def __init__(self, num: TrigPoly, den: TrigPoly):
        _check_chart(num.chart, den.chart)
        if den.is_zero():
            raise ZeroDivisionError("RatFrac with identically zero denominator")
        self.num = num
        self.den = den

    @property
    def chart(self) -> Chart:
        return self.num.chart

    @staticmethod
    def lift(x, chart: Chart) -> "RatFrac":
        if isinstance(x, RatFrac):
            return x
        if isinstance(x, TrigPoly):
            return RatFrac(x, TrigPoly.const(x.chart, 1))
        return RatFrac(TrigPoly.const(chart, x), TrigPoly.const(chart, 1))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def simplify(self) -> "TrigPoly | RatFrac":
        """Collapse to a TrigPoly when the denominator is constant."""
        if self.den.is_constant():
            return self.num * (1 / self.den.constant_value())
        return self

    def __add__(self, other):
        if not isinstance(other, (RatFrac, TrigPoly, int, Fraction)):
            return NotImplemented
        o = RatFrac.lift(other, self.chart)
        if self.den == o.den:
            return RatFrac(self.num + o.num, self.den)
        return RatFrac(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFrac":
        return RatFrac(-self.num, self.den)

    def __sub__(self, other):
        if not isinstance(other, (RatFrac, TrigPoly, int, Fraction)):
            return NotImplemented
        return self + (-RatFrac.lift(other, self.chart))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, (RatFrac, TrigPoly, int, Fraction)):
            return NotImplemented
        o = RatFrac.lift(other, self.chart)
        return RatFrac(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = RatFrac.lift(other, self.chart)
        return RatFrac(self.num * o.den, self.den * o.num)

    def __eq__(self, other) -> bool:
        if not isinstance(other, (RatFrac, TrigPoly, int, Fraction)):
            return NotImplemented
        o = RatFrac.lift(other, self.chart)
        return self.num * o.den == o.num * self.den

    __hash__ = None

    def diff(self, name: str) -> "RatFrac":
        return RatFrac(self.num.diff(name) * self.den - self.num * self.den.diff(name), self.den * self.den)

    def evaluate(self, pt: Point) -> Fraction:
        d = self.den.evaluate(pt)
        if not d:
            raise ZeroDivisionError(f"denominator {self.den} vanishes at {pt}")
        return self.num.evaluate(pt) / d

    def __str__(self) -> str:
        return f"({self.num})/({self.den})"

    def __repr__(self) -> str:
        return f"RatFrac({str(self)!r})"


Coefficient = Union[TrigPoly, RatFrac]


def unnormalized(chart: Chart, terms: Mapping[tuple[int, ...], Number]) -> TrigPoly:
    """Wrap a raw term map without reducing it.

    Only meant as input to :func:`trig_normalize`; arithmetic on such a value
    may return non-canonical results.
    """
    return TrigPoly(chart, {m: Fraction(c) for m, c in terms.items() if c}, _normal=True)


def trig_normalize(p: TrigPoly) -> TrigPoly:
    """Rewrite sin^2 -> 1 - cos^2 until every sine exponent is at most one."""
    return TrigPoly(p.chart, p._terms)
