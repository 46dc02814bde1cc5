"""Vector fields, multivectors and differential forms with exact coefficients."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .linalg import cofactor_matrix, symbolic_det
from .symcore import Chart, ChartMismatchError, Coefficient, Point, RatFrac, TrigPoly


def _check(a: Chart, b: Chart) -> None:
    if a != b:
        raise ChartMismatchError(f"chart mismatch: {a} vs {b}")


def _coef_str(c: Coefficient) -> tuple[int, str]:
    """Sign and printable multiplier for a component coefficient."""
    if isinstance(c, RatFrac):
        return 1, str(c)
    terms = c.signed_terms()
    if len(terms) == 1:
        sign, txt = terms[0]
        return sign, ("" if txt == "1" else txt)
    return 1, f"({c})"


def _join(pieces: list[tuple[int, str]]) -> str:
    if not pieces:
        return "0"
    out = ""
    for k, (sign, txt) in enumerate(pieces):
        if k == 0:
            out = ("-" if sign < 0 else "") + txt
        else:
            out += (" - " if sign < 0 else " + ") + txt
    return out


class VectorField:
    """A vector field sum_i comps[i] * d/dx_i on a chart."""

    __slots__ = ("chart", "comps")

    def __init__(self, chart: Chart, comps: Sequence[TrigPoly]):
        if len(comps) != chart.dim:
            raise ValueError(f"{len(comps)} components for a chart of dimension {chart.dim}")
        for c in comps:
            _check(chart, c.chart)
        self.chart = chart
        self.comps = tuple(comps)

    @classmethod
    def zero(cls, chart: Chart) -> "VectorField":
        z = TrigPoly.zero(chart)
        return cls(chart, [z] * chart.dim)

    @classmethod
    def coordinate(cls, chart: Chart, name: str) -> "VectorField":
        i = chart.index(name)
        z, one = TrigPoly.zero(chart), TrigPoly.const(chart, 1)
        return cls(chart, [one if k == i else z for k in range(chart.dim)])

    @classmethod
    def from_dict(cls, chart: Chart, comps: Mapping[str, TrigPoly]) -> "VectorField":
        out = [TrigPoly.zero(chart)] * chart.dim
        for name, c in comps.items():
            out[chart.index(name)] = c
        return cls(chart, out)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.comps)

    def __add__(self, other: "VectorField") -> "VectorField":
        if not isinstance(other, VectorField):
            return NotImplemented
        _check(self.chart, other.chart)
        return VectorField(self.chart, [a + b for a, b in zip(self.comps, other.comps)])

    def __sub__(self, other: "VectorField") -> "VectorField":
        if not isinstance(other, VectorField):
            return NotImplemented
        _check(self.chart, other.chart)
        return VectorField(self.chart, [a - b for a, b in zip(self.comps, other.comps)])

    def __neg__(self) -> "VectorField":
        return VectorField(self.chart, [-a for a in self.comps])

    def __mul__(self, f) -> "VectorField":
        if isinstance(f, (int, Fraction, TrigPoly)):
            return VectorField(self.chart, [a * f for a in self.comps])
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, VectorField):
            return NotImplemented
        return self.chart == other.chart and self.comps == other.comps

    def __hash__(self) -> int:
        return hash(self.comps)

    def apply(self, f: Coefficient) -> Coefficient:
        """Directional derivative X(f)."""
        total = None
        for name, a in zip(self.chart.names, self.comps):
            if a.is_zero():
                continue
            d = f.diff(name)
            if d.is_zero():
                continue
            term = d * a
            total = term if total is None else total + term
        return (f * 0) if total is None else total

    def evaluate(self, pt: Point) -> list[Fraction]:
        _check(self.chart, pt.chart)
        return [c.evaluate(pt) for c in self.comps]

    def __str__(self) -> str:
        pieces = []
        for name, c in zip(self.chart.names, self.comps):
            if c.is_zero():
                continue
            sign, mult = _coef_str(c)
            pieces.append((sign, f"{mult}*d_{name}" if mult else f"d_{name}"))
        return _join(pieces)

    def __repr__(self) -> str:
        return f"VectorField({str(self)!r})"


def lie_bracket(x: VectorField, y: VectorField) -> VectorField:
    """[X, Y]^i = X(Y^i) - Y(X^i)."""
    _check(x.chart, y.chart)
    return VectorField(x.chart, [x.apply(b) - y.apply(a) for a, b in zip(x.comps, y.comps)])


def evaluate_field(x: VectorField, pt: Point) -> list[Fraction]:
    return x.evaluate(pt)


# ---------------------------------------------------------------------------
# alternating tensors


def _sort_sign(idx: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Sign of the sorting permutation (0 if an index repeats) and sorted tuple."""
    if len(set(idx)) != len(idx):
        return 0, ()
    lst = list(idx)
    sign = 1
    for i in range(len(lst)):
        for j in range(len(lst) - 1 - i):
            if lst[j] > lst[j + 1]:
                lst[j], lst[j + 1] = lst[j + 1], lst[j]
                sign = -sign
    return sign, tuple(lst)


class _Alternating:
    """Sparse antisymmetric tensor keyed by strictly increasing index tuples."""

    __slots__ = ("chart", "degree", "comps")

    def __init__(self, chart: Chart, degree: int, comps: Mapping[tuple[int, ...], Coefficient] | None = None):
        if degree < 0 or degree > chart.dim:
            raise ValueError(f"degree {degree} out of range for dimension {chart.dim}")
        clean = {}
        for idx, c in (comps or {}).items():
            if len(idx) != degree or list(idx) != sorted(set(idx)):
                raise ValueError(f"index {idx} is not strictly increasing of length {degree}")
            if any(i < 0 or i >= chart.dim for i in idx):
                raise ValueError(f"index {idx} out of range")
            _check(chart, c.chart)
            if not c.is_zero():
                clean[tuple(idx)] = c
        self.chart = chart
        self.degree = degree
        self.comps = clean

    @classmethod
    def _accumulate(cls, chart: Chart, degree: int, pieces: Iterable[tuple[Sequence[int], Coefficient]]):
        acc: dict = {}
        for idx, c in pieces:
            sign, key = _sort_sign(idx)
            if not sign or c.is_zero():
                continue
            c = c if sign > 0 else -c
            acc[key] = acc[key] + c if key in acc else c
        return cls(chart, degree, acc)

    def is_zero(self) -> bool:
        return not self.comps

    def component(self, idx: Sequence[int]) -> Coefficient:
        sign, key = _sort_sign(idx)
        z = TrigPoly.zero(self.chart)
        if not sign:
            return z
        c = self.comps.get(key, z)
        return c if sign > 0 else -c

    def _same(self, other) -> None:
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        _check(self.chart, other.chart)
        if self.degree != other.degree:
            raise ValueError("degree mismatch")

    def __add__(self, other):
        self._same(other)
        return type(self)._accumulate(self.chart, self.degree, [*self.comps.items(), *other.comps.items()])

    def __neg__(self):
        return type(self)(self.chart, self.degree, {k: -v for k, v in self.comps.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, f):
        return type(self)(self.chart, self.degree, {k: v * f for k, v in self.comps.items()})

    def __eq__(self, other) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        if self.chart != other.chart or self.degree != other.degree:
            return False
        keys = set(self.comps) | set(other.comps)
        return all(self.component(k) == other.component(k) for k in keys)

    __hash__ = None

    def _wedge_raw(self, other) -> list:
        pieces = []
        for i, a in self.comps.items():
            for j, b in other.comps.items():
                if set(i) & set(j):
                    continue
                pieces.append((i + j, a * b))
        return pieces


class MultiVector(_Alternating):
    """Alternating contravariant k-tensor (sum of wedges of coordinate fields)."""

    __slots__ = ()

    @classmethod
    def from_field(cls, x: VectorField) -> "MultiVector":
        return cls(x.chart, 1, {(i,): c for i, c in enumerate(x.comps)})

    def wedge(self, other: "MultiVector") -> "MultiVector":
        _check(self.chart, other.chart)
        deg = self.degree + other.degree
        if deg > self.chart.dim:
            raise ValueError(f"wedge degree {deg} exceeds dimension {self.chart.dim}")
        return MultiVector._accumulate(self.chart, deg, self._wedge_raw(other))

    def __str__(self) -> str:
        names = self.chart.names
        pieces = []
        for idx in sorted(self.comps):
            sign, mult = _coef_str(self.comps[idx])
            basis = "^".join(f"d_{names[i]}" for i in idx)
            pieces.append((sign, f"{mult}*{basis}" if mult else basis))
        return _join(pieces)

    __repr__ = __str__


class DiffForm(_Alternating):
    """Differential k-form; coefficients are TrigPoly or RatFrac."""

    __slots__ = ()

    @classmethod
    def function(cls, f: Coefficient) -> "DiffForm":
        return cls(f.chart, 0, {(): f})

    @classmethod
    def differential(cls, chart: Chart, name: str) -> "DiffForm":
        return cls(chart, 1, {(chart.index(name),): TrigPoly.const(chart, 1)})

    @classmethod
    def one_form(cls, chart: Chart, comps: Sequence[Coefficient]) -> "DiffForm":
        return cls(chart, 1, {(i,): c for i, c in enumerate(comps)})

    def scalar(self) -> Coefficient:
        if self.degree != 0:
            raise ValueError("not a 0-form")
        return self.comps.get((), TrigPoly.zero(self.chart))

    def __str__(self) -> str:
        names = self.chart.names
        if self.degree == 0:
            return str(self.scalar())
        pieces = []
        for idx in sorted(self.comps):
            sign, mult = _coef_str(self.comps[idx])
            basis = "^".join(f"d{names[i]}" for i in idx)
            pieces.append((sign, f"{mult}*{basis}" if mult else basis))
        return _join(pieces)

    __repr__ = __str__


def wedge_vectors(fields: Sequence[VectorField]) -> MultiVector:
    if not fields:
        raise ValueError("empty wedge")
    chart = fields[0].chart
    if len(fields) > chart.dim:
        raise ValueError("more factors than the chart dimension")
    out = MultiVector.from_field(fields[0])
    for f in fields[1:]:
        _check(chart, f.chart)
        out = out.wedge(MultiVector.from_field(f))
    return out


def wedge_forms(a: DiffForm, b: DiffForm) -> DiffForm:
    _check(a.chart, b.chart)
    deg = a.degree + b.degree
    if deg > a.chart.dim:
        raise ValueError(f"wedge degree {deg} exceeds dimension {a.chart.dim}")
    if a.degree == 0:
        return b.scale(a.scalar()) if not a.is_zero() else DiffForm(a.chart, deg)
    if b.degree == 0:
        return a.scale(b.scalar()) if not b.is_zero() else DiffForm(a.chart, deg)
    return DiffForm._accumulate(a.chart, deg, a._wedge_raw(b))


def schouten_vf_multivector(y: VectorField, b: MultiVector) -> MultiVector:
    """[Y, B] for a vector field Y and a k-vector B (the Lie derivative of B along Y).

    On a coordinate wedge this is the Leibniz sum over factors with
    [Y, d_m] = -sum_i d_m(Y^i) d_i.
    """
    _check(y.chart, b.chart)
    names = y.chart.names
    pieces = []
    for idx, c in b.comps.items():
        pieces.append((idx, y.apply(c)))
        for r, m in enumerate(idx):
            for i, yi in enumerate(y.comps):
                dy = yi.diff(names[m])
                if dy.is_zero():
                    continue
                new = idx[:r] + (i,) + idx[r + 1 :]
                pieces.append((new, -(c * dy)))
    return MultiVector._accumulate(y.chart, b.degree, pieces)


def exterior_derivative(w: DiffForm) -> DiffForm:
    if w.degree >= w.chart.dim:
        raise ValueError("exterior derivative of a top-degree form")
    names = w.chart.names
    pieces = []
    for idx, c in w.comps.items():
        for i, n in enumerate(names):
            d = c.diff(n)
            if not d.is_zero():
                pieces.append(((i,) + idx, d))
    return DiffForm._accumulate(w.chart, w.degree + 1, pieces)


def interior_product(x: VectorField, w: DiffForm) -> DiffForm:
    _check(x.chart, w.chart)
    if w.degree < 1:
        raise ValueError("interior product needs a form of degree >= 1")
    pieces = []
    for idx, c in w.comps.items():
        for r, m in enumerate(idx):
            xm = x.comps[m]
            if xm.is_zero():
                continue
            t = c * xm
            pieces.append((idx[:r] + idx[r + 1 :], t if r % 2 == 0 else -t))
    return DiffForm._accumulate(w.chart, w.degree - 1, pieces)


def lie_derivative_form(x: VectorField, w: DiffForm) -> DiffForm:
    """L_X w from the component formula (L_X w)_I = X(w_I) + sum_r w_{..m..} d_{i_r} X^m."""
    _check(x.chart, w.chart)
    names = x.chart.names
    pieces = []
    for idx, c in w.comps.items():
        pieces.append((idx, x.apply(c)))
        for r, m in enumerate(idx):
            xm = x.comps[m]
            for i, n in enumerate(names):
                d = xm.diff(n)
                if d.is_zero():
                    continue
                pieces.append((idx[:r] + (i,) + idx[r + 1 :], c * d))
    return DiffForm._accumulate(x.chart, w.degree, pieces)


def lie_derivative_form_cartan(x: VectorField, w: DiffForm) -> DiffForm:
    """L_X w = i_X dw + d(i_X w)."""
    _check(x.chart, w.chart)
    if w.degree == 0:
        return DiffForm.function(x.apply(w.scalar()))
    a = interior_product(x, exterior_derivative(w)) if w.degree < w.chart.dim else DiffForm(w.chart, w.degree)
    return a + exterior_derivative(interior_product(x, w))


def pair(w: DiffForm, x: VectorField) -> Coefficient:
    """w(X) for a 1-form."""
    if w.degree != 1:
        raise ValueError("pairing needs a 1-form")
    return interior_product(x, w).scalar()


class SingularFrameError(ValueError):
    pass


def frame_matrix(frame: Sequence[VectorField]) -> list[list[TrigPoly]]:
    return [list(f.comps) for f in frame]


def dual_coframe(frame: Sequence[VectorField]) -> list[DiffForm]:
    """One-forms eta_i with eta_i(frame_j) = delta_ij.

    Coefficients are TrigPoly when the frame determinant is a nonzero
    constant and unreduced RatFrac otherwise.
    """
    if not frame:
        raise ValueError("empty frame")
    chart = frame[0].chart
    for f in frame:
        _check(chart, f.chart)
    if len(frame) != chart.dim:
        raise ValueError(f"frame of size {len(frame)} on a chart of dimension {chart.dim}")
    m = frame_matrix(frame)
    zero = TrigPoly.zero(chart)
    det = symbolic_det(m, zero)
    if det.is_zero():
        raise SingularFrameError("frame determinant vanishes identically")
    cof = cofactor_matrix(m, zero)
    out = []
    for i in range(chart.dim):
        if det.is_constant():
            inv = 1 / det.constant_value()
            comps = [c * inv for c in cof[i]]
        else:
            comps = [RatFrac(c, det) for c in cof[i]]
        out.append(DiffForm.one_form(chart, comps))
    return out


def volume_coefficient(w: DiffForm) -> Coefficient:
    """Coefficient of dx_1 ^ ... ^ dx_n in a top-degree form."""
    if w.degree != w.chart.dim:
        raise ValueError("not a top-degree form")
    return w.component(tuple(range(w.chart.dim)))
