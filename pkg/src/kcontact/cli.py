"""``kit`` command-line front end."""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Sequence

from . import catalog
from .calculus import lie_bracket
from .distrib import (
    DEFAULT_SEED,
    Distribution,
    derived_flag,
    is_goursat,
    is_lie_symmetry,
    kcontact_verify,
    schouten_symmetry_check,
)
from .liealg import StructureConstants, bracket_closure, verify_structure_constants
from .liesys import (
    IntegrationError,
    ISO2Element,
    TDepCoefficients,
    check_superposition,
    integrate_rk4,
)
from .parser import ParseError, parse_chart, parse_vector_field
from .symcore import LINEAR, Chart, Point

SCHEMA_VERSION = "1"
EXIT_OK, EXIT_FINDINGS, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class Report:
    def __init__(self, verb: str, argv: Sequence[str]):
        self.verb = verb
        self.argv = list(argv)
        self.results: dict = {}
        self.checks: list[dict] = []
        self.findings: list[dict] = []
        self.timings: dict[str, float] = {}
        self.lines: list[str] = []

    def check(self, name: str, ok: bool, computed, expected, locus: str = "") -> None:
        rec = {"name": name, "computed": str(computed), "expected": str(expected),
               "status": "pass" if ok else "fail", "locus": locus}
        self.checks.append(rec)
        self.lines.append(f"[{rec['status']}] {name}: {computed}" + ("" if ok else f" (expected {expected})"))

    def say(self, line: str = "") -> None:
        self.lines.append(line)

    @property
    def exit_code(self) -> int:
        bad = self.findings or any(c["status"] != "pass" for c in self.checks)
        return EXIT_FINDINGS if bad else EXIT_OK

    def document(self, timings: bool) -> dict:
        doc = {
            "schema_version": SCHEMA_VERSION,
            "command": {"verb": self.verb, "argv": self.argv},
            "results": {**self.results, "checks": self.checks},
            "findings": self.findings,
        }
        if timings:
            doc["timings"] = {k: round(v, 6) for k, v in self.timings.items()}
        return doc


# ---------------------------------------------------------------------------
# input helpers


def _chart(text: str | None) -> Chart:
    if not text:
        raise UsageError("--chart is required")
    return parse_chart(text)


def _fields(chart: Chart, texts: Sequence[str]):
    return [parse_vector_field(t, chart) for t in texts]


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a rational number: {text!r}") from None


def parse_points(text: str | None, chart: Chart) -> list[Point]:
    """``"0,1,3/5:4/5;1,2,0:1"``: angular entries are ``s:c`` on the unit circle."""
    if not text:
        return []
    out = []
    for chunk in text.split(";"):
        if not chunk.strip():
            continue
        vals = chunk.split(",")
        if len(vals) != chart.dim:
            raise UsageError(f"point {chunk!r} has {len(vals)} entries, chart has dimension {chart.dim}")
        coords = []
        for (name, kind), v in zip(chart.coords, vals):
            if kind == LINEAR:
                coords.append(_rational(v))
            else:
                s, sep, c = v.partition(":")
                if not sep:
                    raise UsageError(f"angular coordinate {name} needs an s:c pair, got {v!r}")
                coords.append((_rational(s), _rational(c)))
        try:
            out.append(Point(chart, tuple(coords)))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    return out


def _floats(text: str, n: int | None = None, what: str = "values") -> list[float]:
    try:
        vals = [float(_rational(v)) if "/" in v else float(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"malformed {what}: {text!r}") from None
    if n is not None and len(vals) != n:
        raise UsageError(f"expected {n} {what}, got {len(vals)}")
    return vals


def _constants(text: str, dim: int) -> StructureConstants:
    entries = {}
    for part in text.split(";"):
        if not part.strip():
            continue
        try:
            idx, val = part.split("=")
            i, j, k = (int(v) for v in idx.split(","))
        except ValueError:
            raise UsageError(f"malformed structure constant {part.strip()!r}; use i,j,k=value") from None
        entries[(i, j, k)] = _rational(val)
    try:
        return StructureConstants(dim, entries)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _zero_trailer_basis():
    f = catalog.zero_trailer_fields()
    return [f["X1"], f["X2"], f["X3"]]


# ---------------------------------------------------------------------------
# verbs


def cmd_bracket(a, rep: Report) -> None:
    ch = _chart(a.chart)
    x, y = _fields(ch, [a.x, a.y])
    br = lie_bracket(x, y)
    rep.results["bracket"] = str(br)
    rep.say(str(br))


def cmd_flag(a, rep: Report) -> None:
    ch = _chart(a.chart)
    flag = derived_flag(Distribution(ch, tuple(_fields(ch, a.generators))), a.max_depth, a.seed)
    rep.results["ranks"] = list(flag.ranks)
    rep.results["stabilized"] = flag.stabilized
    rep.results["levels"] = [
        {"depth": i, "rank": lvl.rank, "generators": [str(g) for g in lvl.generators]}
        for i, lvl in enumerate(flag.levels)
    ]
    rep.say(f"ranks {flag.ranks}" + (" (stabilized)" if flag.stabilized else ""))


def cmd_goursat(a, rep: Report) -> None:
    ch = _chart(a.chart)
    d = Distribution(ch, tuple(_fields(ch, a.generators)))
    v = is_goursat(d, parse_points(a.points, ch), a.seed)
    rep.results["ranks"] = list(v.ranks)
    rep.results["pointwise"] = [{"point": str(p), "ranks": list(r)} for p, r in v.pointwise]
    rep.check("goursat", v.passed, f"ranks {v.ranks}" + "".join(f"; {f}" for f in v.failures), f"ranks {v.expected}")


def cmd_symmetry(a, rep: Report) -> None:
    ch = _chart(a.chart)
    d = Distribution(ch, tuple(_fields(ch, a.generators)))
    y = parse_vector_field(a.sym, ch)
    v = is_lie_symmetry(y, d, a.seed)
    rep.results["brackets"] = [str(b) for b in v.brackets]
    for i, b in enumerate(v.brackets, 1):
        rep.say(f"[Y,X{i}] = {b}")
    rep.check("Lie symmetry", v.passed,
              "all brackets in D" if v.passed else "; ".join(f"[Y,X{i + 1}] = {b} not in D" for i, b in v.offending),
              "all brackets in D")
    if len(d.generators) == 2:
        sv = schouten_symmetry_check(y, d)
        rep.results["bivector_bracket"] = str(sv.bracket)
        rep.results["bivector_factor"] = None if sv.factor is None else str(sv.factor)
        rep.check("bivector criterion agrees", sv.passed == v.passed,
                  f"[Y, X1^X2] = {sv.bracket}" + (f" = ({sv.factor}) X1^X2" if sv.factor is not None else ""),
                  "agreement with the direct test")


def cmd_kcontact(a, rep: Report) -> None:
    ch = _chart(a.chart)
    d = Distribution(ch, tuple(_fields(ch, a.gen)))
    s = _fields(ch, a.sym)
    try:
        kr = kcontact_verify(d, s, parse_points(a.points, ch), a.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    for i, v in enumerate(kr.symmetry_checks, 1):
        rep.check(f"S{i} is a Lie symmetry", v.passed,
                  "all brackets in D" if v.passed
                  else "; ".join(f"[S{i},X{j + 1}] = {b} not in D" for j, b in v.offending),
                  "all brackets in D")
    for c in kr.commutation_checks:
        rep.check(f"[S{c.i + 1},S{c.j + 1}] = 0", c.passed, c.bracket, "0")
    loc = kr.spanning_locus
    rep.results["spanning_locus"] = {
        "description": loc.description,
        "minors": [str(m) for m in loc.minors],
        "determinant": None if loc.determinant is None else str(loc.determinant),
    }
    rep.check("S + D spans TM somewhere", not loc.everywhere,
              f"determinant {loc.determinant}; degenerate on {loc.description}", "not identically zero")
    ni = kr.nonintegrability
    rep.results["nonintegrability"] = [{"point": str(p.point), "status": p.status, "rank": p.rank} for p in ni.points]
    rep.check("maximally non-integrable", ni.passed,
              ", ".join(f"{p.status}" for p in ni.points), "pass at every regular point")
    rep.results["overall"] = kr.overall
    rep.say(f"overall: {kr.overall}")


def cmd_closure(a, rep: Report) -> None:
    ch = _chart(a.chart)
    try:
        res = bracket_closure(_fields(ch, a.generators), a.max_dim)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rep.results["status"] = res.status
    rep.results["basis"] = [str(b) for b in res.basis]
    rep.results["constants"] = None if res.constants is None else res.constants.to_json()
    for i, b in enumerate(res.basis, 1):
        rep.say(f"X{i} = {b}")
    if res.constants is not None:
        rep.say(f"constants: {res.constants}")
    rep.check("closure", res.status == "closed", f"{res.status}, dimension {len(res.basis)}",
              f"closed within {a.max_dim}")


def cmd_constants(a, rep: Report) -> None:
    ch = _chart(a.chart)
    basis = _fields(ch, a.basis)
    if a.expected is None:
        from .liealg import structure_constants

        c = structure_constants(basis)
        rep.results["constants"] = None if c is None else c.to_json()
        rep.check("basis closes under brackets", c is not None, c if c is not None else "not a VG basis",
                  "constant structure constants")
        return
    exp = _constants(a.expected, len(basis))
    cr = verify_structure_constants(basis, exp)
    rep.results["pairs"] = [
        {"i": p.i, "j": p.j, "computed": None if p.computed is None else [str(v) for v in p.computed],
         "expected": [str(v) for v in p.expected]}
        for p in cr.pairs
    ]
    for p in cr.pairs:
        rep.check(f"[X{p.i},X{p.j}]", p.matches,
                  "outside the real span" if p.computed is None else [str(v) for v in p.computed],
                  [str(v) for v in p.expected])


def _verify_one(name: str) -> catalog.VerificationReport:
    return catalog.verify_entry(name)


def cmd_catalog_verify(a, rep: Report) -> None:
    if a.list:
        rep.results["entries"] = catalog.list_entries()
        for n in catalog.list_entries():
            rep.say(n)
        return
    if a.all == bool(a.name):
        raise UsageError("give exactly one entry NAME or --all")
    names = catalog.list_entries() if a.all else [a.name]
    for n in names:
        if n not in catalog.list_entries():
            raise UsageError(f"unknown catalog entry {n!r}; known: {', '.join(catalog.list_entries())}")
    if a.jobs > 1 and len(names) > 1:
        with ProcessPoolExecutor(a.jobs) as pool:
            reports = list(pool.map(_verify_one, names))
    else:
        reports = [_verify_one(n) for n in names]
    reports.sort(key=lambda r: names.index(r.entry))
    rep.results["entries"] = [r.to_json(a.timings) for r in reports]
    for r in reports:
        rep.timings[r.entry] = r.wall_time
        rep.say(f"== {r.entry}")
        for c in r.checks:
            extra = "" if c.status == "pass" else f" (expected {c.expected}; {c.locus})"
            rep.say(f"  [{c.status}] {c.name}: {c.computed}{extra}")
        for c in r.checks:
            if c.status != "pass":
                rep.findings.append({"entry": r.entry, **c.to_json()})
    n_find = len(rep.findings)
    rep.say(f"{len(reports)} entries, {n_find} findings")


def cmd_obstruction(a, rep: Report) -> None:
    r = catalog.class6_obstruction_check()
    rep.results["checks_detail"] = r.to_json()["checks"]
    rep.results["loci"] = r.loci
    for c in r.checks:
        rep.check(c.name, c.status == "pass", c.computed, c.expected, c.locus)
    if all(c.status == "pass" for c in r.checks):
        rep.say("not-k-contact corroborated")


def cmd_trailer(a, rep: Report) -> None:
    if a.n < 0:
        raise UsageError("--n must be non-negative")
    d = catalog.n_trailer(a.n)
    rep.results["chart"] = str(d.chart)
    rep.results["generators"] = [str(g) for g in d.generators]
    rep.say(str(d.chart))
    for i, g in enumerate(d.generators, 1):
        rep.say(f"X{i} = {g}")
    v = is_goursat(d, parse_points(a.points, d.chart), a.seed)
    rep.results["ranks"] = list(v.ranks)
    rep.check("goursat", v.passed, f"ranks {v.ranks}", f"ranks {v.expected}")
    if a.closure:
        res = bracket_closure(d.generators, a.max_dim)
        rep.results["closure"] = {
            "status": res.status,
            "basis": [str(b) for b in res.basis],
            "constants": None if res.constants is None else res.constants.to_json(),
        }
        rep.say(f"closure: {res.status}, dimension {len(res.basis)}")


def _system(a):
    if a.chart:
        ch = _chart(a.chart)
        basis = _fields(ch, a.basis)
    else:
        basis = _zero_trailer_basis()
    if not basis:
        raise UsageError("no basis fields")
    coeffs = TDepCoefficients.parse([c for c in a.coeffs.split(";")])
    return basis, coeffs


def _tspan(text: str) -> tuple[float, float]:
    t0, t1 = _floats(text, 2, "--tspan bounds")
    return t0, t1


def cmd_simulate(a, rep: Report) -> None:
    basis, coeffs = _system(a)
    ch = basis[0].chart
    x0 = _floats(a.x0, ch.dim, "initial values") if a.x0 else [0.0] * ch.dim
    try:
        traj = integrate_rk4(basis, coeffs, x0, _tspan(a.tspan), a.step)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rep.results["steps"] = len(traj.times) - 1
    rep.results["step"] = traj.step
    rep.results["final"] = ["%.17g" % v for v in traj.wrapped(traj.final())]
    if a.csv:
        with open(a.csv, "w", newline="") as fh:
            traj.write_csv(fh)
        rep.say(f"wrote {len(traj.times)} samples to {a.csv}")
    else:
        rep.say(traj.to_csv().rstrip("\n"))


def cmd_superpose(a, rep: Report) -> None:
    basis, coeffs = _system(a)
    vals = [_rational(v) for v in a.g.split(",")]
    if len(vals) != 4:
        raise UsageError("--g takes s,c,lambda1,lambda2")
    try:
        g = ISO2Element(vals[0], vals[1], (vals[2], vals[3]))
        x0 = _floats(a.x0, 3, "initial values") if a.x0 else [0.0, 0.0, 0.0]
        r = check_superposition(basis, coeffs, g, x0, _tspan(a.tspan), a.step, a.tol)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rep.results.update(discrepancy="%.6e" % r.discrepancy, tol=a.tol, steps=r.steps, worst_time="%.17g" % r.worst_time)
    rep.check("superposition", r.passed, "discrepancy %.3e" % r.discrepancy, f"<= {a.tol:g}")


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", metavar="PATH", help="write the JSON report to PATH ('-' for stdout)")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--timings", action="store_true", help="include wall-clock timings in the report")

    p = argparse.ArgumentParser(prog="kit", description="Exact checks for Goursat and k-contact distributions.")
    sub = p.add_subparsers(dest="verb", required=True, metavar="VERB")

    def add(name: str, fn, help: str, chart: bool = False) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, parents=[common], help=help)
        if chart:
            sp.add_argument("--chart", required=True, help='coordinates, e.g. "x1 x2 theta0:angle"')
        sp.set_defaults(fn=fn)
        return sp

    sp = add("bracket", cmd_bracket, "Lie bracket of two vector fields", chart=True)
    sp.add_argument("x")
    sp.add_argument("y")

    sp = add("flag", cmd_flag, "derived flag ranks", chart=True)
    sp.add_argument("generators", nargs="+")
    sp.add_argument("--max-depth", type=int)

    sp = add("goursat", cmd_goursat, "Goursat test", chart=True)
    sp.add_argument("generators", nargs=2)
    sp.add_argument("--points")

    sp = add("symmetry", cmd_symmetry, "Lie-symmetry test", chart=True)
    sp.add_argument("--sym", required=True)
    sp.add_argument("generators", nargs="+")

    sp = add("kcontact", cmd_kcontact, "k-contact verification", chart=True)
    sp.add_argument("--gen", action="append", required=True)
    sp.add_argument("--sym", action="append", required=True)
    sp.add_argument("--points")

    sp = add("closure", cmd_closure, "bracket closure and structure constants", chart=True)
    sp.add_argument("generators", nargs="+")
    sp.add_argument("--max-dim", type=int, default=16)

    sp = add("constants", cmd_constants, "structure constants of a basis", chart=True)
    sp.add_argument("basis", nargs="+")
    sp.add_argument("--expected", help='e.g. "1,2,3=1; 2,3,4=-1"')

    sp = add("catalog-verify", cmd_catalog_verify, "verify catalog entries")
    sp.add_argument("name", nargs="?")
    sp.add_argument("--all", action="store_true")
    sp.add_argument("--list", action="store_true")
    sp.add_argument("--jobs", type=int, default=1)

    add("obstruction", cmd_obstruction, "class-6 ad-flag rank drop")

    sp = add("trailer", cmd_trailer, "n-trailer distribution")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--points")
    sp.add_argument("--closure", action="store_true")
    sp.add_argument("--max-dim", type=int, default=16)

    for name, fn, help in (("simulate", cmd_simulate, "RK4 integration of a Lie system"),
                           ("superpose", cmd_superpose, "ISO(2) superposition check")):
        sp = add(name, fn, help)
        sp.add_argument("--chart", help="defaults to the zero-trailer chart")
        sp.add_argument("--basis", action="append", default=[])
        sp.add_argument("--coeffs", required=True, help='b(t) separated by ";", e.g. "1;t;0"')
        sp.add_argument("--x0")
        sp.add_argument("--tspan", default="0,1")
        sp.add_argument("--step", type=float, default=1e-3)
        if name == "simulate":
            sp.add_argument("--csv", metavar="PATH")
        else:
            sp.add_argument("--g", required=True, help="s,c,lambda1,lambda2")
            sp.add_argument("--tol", type=float, default=1e-6)
    return p


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    rep = Report(a.verb, argv)
    start = time.perf_counter()
    try:
        a.fn(a, rep)
    except ParseError as exc:
        print(f"kit: input error: {exc}", file=stderr)
        return EXIT_USAGE
    except (UsageError, ValueError, KeyError) as exc:
        print(f"kit: error: {exc}", file=stderr)
        return EXIT_USAGE
    except IntegrationError as exc:
        print(f"kit: integration failed: {exc}", file=stderr)
        return EXIT_FINDINGS
    rep.timings["total"] = time.perf_counter() - start
    if a.timings:
        rep.say("timings: " + ", ".join(f"{k}={v:.3f}s" for k, v in rep.timings.items()))
    doc = json.dumps(rep.document(a.timings), indent=2) + "\n"
    if a.json == "-":
        stdout.write(doc)
    else:
        stdout.write("\n".join(rep.lines) + "\n")
        if a.json:
            with open(a.json, "w") as fh:
                fh.write(doc)
    return rep.exit_code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
