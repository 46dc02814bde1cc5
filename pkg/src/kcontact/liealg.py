"""Real-span decompositions, bracket closure and structure constants.

Convention: [X_i, X_j] = sum_k c_{ijk} X_k, indices 1-based, only i < j stored.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from . import linalg
from .calculus import VectorField, lie_bracket
from .distrib import Locus, generic_rank, spanning_locus


@dataclass(frozen=True)
class StructureConstants:
    dim: int
    entries: Mapping[tuple[int, int, int], Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean = {}
        for (i, j, k), v in self.entries.items():
            v = Fraction(v)
            if not (1 <= i <= self.dim and 1 <= j <= self.dim and 1 <= k <= self.dim):
                raise ValueError(f"index ({i},{j},{k}) outside 1..{self.dim}")
            if i == j:
                if v:
                    raise ValueError(f"c_{i}{j}{k} must vanish by antisymmetry")
                continue
            if i > j:
                i, j, v = j, i, -v
            if v:
                clean[(i, j, k)] = clean.get((i, j, k), 0) + v
        object.__setattr__(self, "entries", {key: v for key, v in sorted(clean.items()) if v})

    def c(self, i: int, j: int, k: int) -> Fraction:
        if i == j:
            return Fraction(0)
        if i > j:
            return -self.entries.get((j, i, k), Fraction(0))
        return self.entries.get((i, j, k), Fraction(0))

    def vector(self, i: int, j: int) -> list[Fraction]:
        return [self.c(i, j, k) for k in range(1, self.dim + 1)]

    def jacobi_violations(self) -> list[tuple[int, int, int, int]]:
        """(i, j, k, l) with sum_m c_ijm c_mkl + c_jkm c_mil + c_kim c_mjl != 0."""
        n = self.dim
        bad = []
        for i, j, k in combinations(range(1, n + 1), 3):
            for l in range(1, n + 1):
                s = sum(
                    self.c(i, j, m) * self.c(m, k, l)
                    + self.c(j, k, m) * self.c(m, i, l)
                    + self.c(k, i, m) * self.c(m, j, l)
                    for m in range(1, n + 1)
                )
                if s:
                    bad.append((i, j, k, l))
        return bad

    def to_json(self) -> list[list]:
        return [[i, j, k, str(v)] for (i, j, k), v in self.entries.items()]

    def __str__(self) -> str:
        if not self.entries:
            return "(abelian)"
        return ", ".join(f"c{i},{j},{k}={v}" for (i, j, k), v in self.entries.items())


def constant_decompose(x: VectorField, basis: Sequence[VectorField]) -> list[Fraction] | None:
    """Rational constants a with X = sum a_i basis_i exactly, or None."""
    ch = x.chart
    if not basis:
        return [] if x.is_zero() else None
    for b in basis:
        if b.chart != ch:
            raise ValueError("chart mismatch in constant_decompose")
    # one equation per (component, monomial)
    keys = set()
    for f in (x, *basis):
        for i, c in enumerate(f.comps):
            keys.update((i, m) for m in c.terms)
    keys = sorted(keys)
    a = [[b.comps[i].coefficient(m) for b in basis] for i, m in keys]
    rhs = [x.comps[i].coefficient(m) for i, m in keys]
    return linalg.solve(a, rhs)


def normalize_element(x: VectorField) -> VectorField:
    """Primitive integer coefficients; last nonzero component has positive leading coefficient."""
    from math import gcd, lcm

    coefs = [c for comp in x.comps for _, c in comp.items()]
    if not coefs:
        return x
    den = lcm(*(c.denominator for c in coefs))
    num = gcd(*(int(c * den) for c in coefs))
    scale = Fraction(den, num)
    last = next(c for c in reversed(x.comps) if not c.is_zero())
    if last.leading()[1] < 0:
        scale = -scale
    return x * scale


@dataclass
class ClosureResult:
    status: str  # "closed" | "not-closed-within-bound"
    basis: list[VectorField]
    constants: StructureConstants | None


def structure_constants(basis: Sequence[VectorField]) -> StructureConstants | None:
    """Constants of a closed basis, or None if some bracket leaves the real span."""
    entries = {}
    for i, j in combinations(range(len(basis)), 2):
        coef = constant_decompose(lie_bracket(basis[i], basis[j]), basis)
        if coef is None:
            return None
        for k, v in enumerate(coef):
            if v:
                entries[(i + 1, j + 1, k + 1)] = v
    return StructureConstants(len(basis), entries)


def bracket_closure(seed: Sequence[VectorField], max_dim: int = 16) -> ClosureResult:
    """Adjoin brackets in (i, j) lexicographic order until the real span closes."""
    if max_dim < len(seed):
        raise ValueError("max_dim smaller than the seed")
    basis: list[VectorField] = []
    for s in seed:
        if constant_decompose(s, basis) is None:
            basis.append(s)
    j = 1
    while j < len(basis):
        for i in range(j):
            b = lie_bracket(basis[i], basis[j])
            if b.is_zero() or constant_decompose(b, basis) is not None:
                continue
            basis.append(normalize_element(b))
            if len(basis) > max_dim:
                return ClosureResult("not-closed-within-bound", basis, None)
        j += 1
    return ClosureResult("closed", basis, structure_constants(basis))


@dataclass
class PairComparison:
    i: int
    j: int
    computed: list[Fraction] | None
    expected: list[Fraction]

    @property
    def matches(self) -> bool:
        return self.computed is not None and self.computed == self.expected


@dataclass
class ConstantsReport:
    passed: bool
    pairs: list[PairComparison]
    not_vg_basis: bool

    @property
    def mismatches(self) -> list[PairComparison]:
        return [p for p in self.pairs if not p.matches]


def verify_structure_constants(basis: Sequence[VectorField], expected: StructureConstants) -> ConstantsReport:
    if len(basis) != expected.dim:
        raise ValueError(f"basis of size {len(basis)} vs constants of dimension {expected.dim}")
    pairs = []
    for i, j in combinations(range(1, len(basis) + 1), 2):
        coef = constant_decompose(lie_bracket(basis[i - 1], basis[j - 1]), basis)
        pairs.append(PairComparison(i, j, coef, expected.vector(i, j)))
    not_vg = any(p.computed is None for p in pairs)
    return ConstantsReport(all(p.matches for p in pairs), pairs, not_vg)


@dataclass
class AutomorphicVerdict:
    passed: bool
    rank: int
    locus: Locus | None


def is_locally_automorphic(basis: Sequence[VectorField]) -> AutomorphicVerdict:
    if not basis:
        return AutomorphicVerdict(False, 0, None)
    n = basis[0].chart.dim
    rk = generic_rank(basis)
    locus = spanning_locus(basis) if len(basis) == n else None
    return AutomorphicVerdict(len(basis) == n and rk == n, rk, locus)
