"""Command-line front end.

Exit codes: 0 success, 1 a verification failed, 2 invalid input,
3 request outside the supported range.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__
from .errors import (
    FixtureError,
    HKError,
    InequalityViolated,
    Unsupported,
)
from .exactcore import Q, format_rational

EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_UNSUPPORTED = 0, 1, 2, 3


@dataclass
class Report:
    """Flat key -> string map plus named pass/fail flags."""

    command: str
    results: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)
    plain: bool = False  # output already printed in plain form

    def put(self, key: str, value) -> None:
        self.results[key] = _render(value)

    def check(self, key: str, ok: bool) -> None:
        self.checks[key] = bool(ok)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_json(self, approx: bool = False) -> str:
        data = {"command": self.command, "results": dict(sorted(self.results.items())),
                "checks": dict(sorted(self.checks.items()))}
        if approx:
            data["approx"] = {k: a for k, a in ((k, _approx(v)) for k, v in sorted(self.results.items())) if a}
        return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False)

    def to_tsv(self, approx: bool = False) -> str:
        rows = [("command", "", self.command)]
        rows += [("result", k, v) for k, v in sorted(self.results.items())]
        rows += [("check", k, "pass" if v else "fail") for k, v in sorted(self.checks.items())]
        lines = []
        for kind, k, v in rows:
            cols = [kind, k, v]
            if approx and kind == "result":
                cols.append(_approx(v))
            lines.append("\t".join(cols))
        return "\n".join(lines)

    def emit(self, fmt: str, approx: bool = False, out=None) -> None:
        out = sys.stdout if out is None else out
        out.write((self.to_json(approx) if fmt == "json" else self.to_tsv(approx)) + "\n")


def parse_tsv(text: str) -> dict:
    """Inverse of Report.to_tsv (used to compare the two formats)."""
    data = {"command": "", "results": {}, "checks": {}}
    for line in text.splitlines():
        kind, key, value = line.split("\t")[:3]
        if kind == "command":
            data["command"] = value
        elif kind == "result":
            data["results"][key] = value
        elif kind == "check":
            data["checks"][key] = value == "pass"
    return data


def _render(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, (int, Fraction)):
        return format_rational(value)
    if value is None:
        return "none"
    return str(value)


def _approx(s: str) -> str:
    try:
        return f"{float(Q(s)):.12g}"
    except (ValueError, ZeroDivisionError, TypeError):
        return ""


def _rationals(text: str) -> list[Fraction]:
    try:
        return [Q(x.strip()) for x in text.split(",") if x.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a list of rationals: {text!r} ({exc})") from None


def _rational(text: str) -> Fraction:
    try:
        return Q(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r} ({exc})") from None


# ---------------------------------------------------------------------------
# subcommands


def cmd_rr(args, rep: Report) -> None:
    from .rrfujiki import rr_k3n, rr_kumn, rr_scale

    p = {"k3n": rr_k3n, "kumn": rr_kumn}[args.type](args.n)
    if args.scale is not None:
        p = rr_scale(p, args.scale)
    for i, a in enumerate(p.coeffs):
        rep.put(f"A{i}", a)
    rep.put("polynomial", str(p))
    if args.eval is not None:
        rep.put(f"RR({format_rational(args.eval)})", p(args.eval))


def _put_bound(rep: Report, br) -> None:
    rep.put("condition_holds", br.condition_holds)
    rep.put("bound", br.bound)
    if br.mu is not None:
        rep.put("mu", br.mu)
    rep.put("attained_iff", br.attained_iff)


def cmd_bound(args, rep: Report) -> None:
    from .errors import InvalidInput
    from .rrfujiki import b2_bound_from_coeffs, b2_bound_from_mu

    if args.coeffs is not None:
        if len(args.coeffs) != 3:
            raise InvalidInput("--coeffs takes exactly three values A0,A1,A2")
        _put_bound(rep, b2_bound_from_coeffs(args.n, *args.coeffs))
    else:
        _put_bound(rep, b2_bound_from_mu(args.n, args.mu))


def cmd_fujiki(args, rep: Report) -> None:
    from .errors import InvalidInput
    from .rrfujiki import RRPoly, degree4_from_rr, hitchin_sawon_check, rr_k3n, rr_kumn

    if args.type:
        if args.n is None:
            raise InvalidInput("--type needs --n")
        p = {"k3n": rr_k3n, "kumn": rr_kumn}[args.type](args.n)
    elif args.coeffs:
        p = RRPoly(len(args.coeffs) - 1, tuple(args.coeffs), smooth=False)
    else:
        raise InvalidInput("--from-rr needs --type/--n or --coeffs")
    t = degree4_from_rr(p, args.b2)
    for k, v in t.as_strings().items():
        rep.put(f"C({k})", v)
    rep.put("hitchin_sawon_residual", hitchin_sawon_check(t))


def cmd_orbifold(args, rep: Report) -> None:
    from .errors import InvalidInput
    from .orbifold import builtin_profile, derive, derived_as_strings, load_profile
    from .reproduce import appendix_k4

    if args.action == "k4-appendix":
        tup, inv = appendix_k4()
        names = ["sigma2_fixed", "a4", "R", "a2", "chi_top", "C(c4)", "C(td4)", "C(c2^2)"]
        for k, v in zip(names, tup):
            rep.put(k, v)
        rep.put("C(c2)", inv.C_c2_surd.render("C1"))
        rep.check("salamon", inv.salamon_residual == 0)
        return
    if args.profile:
        prof = load_profile(args.profile)
    elif args.builtin:
        try:
            prof = builtin_profile(args.builtin)
        except (FileNotFoundError, OSError):
            raise InvalidInput(f"no builtin profile {args.builtin!r}") from None
    else:
        raise InvalidInput("orbifold derive needs --profile FILE or --builtin NAME")
    inv = derive(prof)
    rep.put("name", prof.name)
    for k, v in derived_as_strings(inv).items():
        rep.put(k, v)
    if inv.salamon_residual is not None:
        rep.check("salamon", inv.salamon_residual == 0)


def cmd_catalog(args, rep: Report) -> None:
    from .catalog import (
        ch4_ratio,
        conj_ch4_value,
        conj_ch8_report,
        conj_positivity_sc,
        load_entry,
        og10_sequential_solve,
        verify_q_structure,
    )
    from .genus import evaluate, todd_component
    from .rrfujiki import c2_verbitsky_check, hitchin_sawon_check

    e = load_entry(args.name, args.fixture_dir)
    t = e.table
    rep.put("name", e.name)
    rep.put("n", e.n)
    rep.put("b2", e.b2)
    for k, v in t.as_strings().items():
        rep.put(f"C({k})", v)
    if args.verify:
        rep.check("hitchin_sawon", hitchin_sawon_check(t) == 0)
        if t.complete_to() == 2 * t.n:
            rep.check(f"td{2 * t.n}=n+1", evaluate(todd_component(t.n), t) == t.n + 1)
        if e.chern_q_coeffs:
            res = verify_q_structure(e)
            rep.put("q_structure_checked", len(res))
            rep.check("q_structure", all(v == 0 for _, v in res))
        try:
            vr = c2_verbitsky_check(t, e.b2)
            rep.put("verbitsky_lhs", vr.lhs)
            rep.put("verbitsky_rhs", vr.rhs)
            rep.put("c2_in_verbitsky", vr.is_in_verbitsky)
        except InequalityViolated:
            rep.check("verbitsky_inequality", False)
    if args.solve_og10:
        for k, v in sorted(og10_sequential_solve().items()):
            rep.put(f"mu{k}", v)
    if args.conjectures:
        rep.put("C(ch4)/C(1)", ch4_ratio(t))
        rep.put("conjectured C(ch4)/C(1)", conj_ch4_value(t.n))
        rep.check("ch4_conjecture", ch4_ratio(t) == conj_ch4_value(t.n))
        if t.n >= 4 and t.complete_to() >= 8:
            r = conj_ch8_report(e)
            rep.put("ch8_ratio", r["ratio"])
            rep.put("conjectured ch8_ratio", r["conjectured"])
            rep.put("ch8_match", r["match"])
        if t.complete_to() == 2 * t.n:
            bad = conj_positivity_sc(t)
            rep.put("positivity_violations", ", ".join(k for k, _ in bad) or "none")
            rep.check("positivity", not bad)


def cmd_enumerate(args, rep: Report) -> None:
    from .catalog import enumerate_betti, enumerate_fourfold_tables

    if args.what == "fourfolds":
        for i, t in enumerate(enumerate_fourfold_tables(), 1):
            for k, v in t.as_strings().items():
                rep.put(f"row{i}.C({k})", v)
    else:
        for i, (b2, b3, b4) in enumerate(enumerate_betti(), 1):
            rep.put(f"row{i}", f"b2={b2} b3={b3} b4={b4}")


def cmd_genus(args, rep: Report) -> None:
    from .genus import GENUS_KINDS

    cp = GENUS_KINDS[args.klass](args.k)
    if args.plain:
        print("\n".join(cp.lines()))
        rep.plain = True
    for mon, c in cp.items():
        rep.put(str(mon), c)


def cmd_graphs(args, rep: Report) -> None:
    from .graphpair import GraphVector, expected_wheeling, glue, sawon_identities, strut, wheel, wheeling_expansion

    def compare(name, got, want):
        for k, v in got.as_strings().items():
            rep.put(f"{name}.{k}", v)
        rep.check(name, got == want)

    if args.verify == "basic":
        T = GraphVector.basis
        compare("<w2,l>", glue(wheel(2), strut()), T("Theta") * 2)
        compare("<w2,w2>", glue(wheel(2), wheel(2)), T("Theta2") * 2)
        compare("<w4,l^2>", glue(wheel(4), strut() ** 2), T("Theta2") * 20)
        compare("<w2^2,l^2>", glue(wheel(2) * wheel(2), strut() ** 2),
                T("Theta", "Theta") * 8 + T("Theta2") * 16)
    elif args.verify == "wheeling":
        ns = [args.n] if args.n is not None else [1, 2, 3, 4]
        for n in ns:
            if not 1 <= n <= 4:
                raise Unsupported("wheeling expansions are available for 1 <= n <= 4")
            compare(f"wheeling{n}", wheeling_expansion(n), expected_wheeling(n))
    else:
        for key, (lhs, rhs, _) in sawon_identities().items():
            compare(f"<{key},l^4>/384", lhs, rhs)


def cmd_reproduce(args, rep: Report) -> None:
    from .reproduce import CHECK_IDS, reproduce

    only = args.only or None
    if only:
        unknown = [i for i in only if i not in CHECK_IDS]
        if unknown:
            from .errors import InvalidInput

            raise InvalidInput(f"unknown check id(s) {unknown}; known: {', '.join(CHECK_IDS)}")
    results = reproduce(only, args.fixture_dir)
    for r in results:
        rep.check(r.id, r.ok)
        for k, v in r.values.items():
            rep.put(f"{r.id}.{k}", v)
        print(r.line(), file=sys.stderr)
    failed = [r for r in results if not r.ok]
    if failed:
        print(f"first failing check: {failed[0].id}", file=sys.stderr)


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["tsv", "json"], default="tsv")
    common.add_argument("--approx", action="store_true", help="add decimal approximations")

    ap = argparse.ArgumentParser(prog="hkinv", description="Exact invariants of hyperkaehler manifolds.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("rr", parents=[common], help="Riemann-Roch polynomial of a known series")
    p.add_argument("--type", choices=["k3n", "kumn"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--scale", type=int)
    p.add_argument("--eval", type=_rational)
    p.set_defaults(func=cmd_rr)

    p = sub.add_parser("bound", parents=[common], help="b2 bound")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--coeffs", type=_rationals, help="A0,A1,A2")
    g.add_argument("--mu", type=_rational, help="C(c2^2)/C(c4)")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("fujiki", parents=[common], help="degree-4 Fujiki constants from RR")
    p.add_argument("--from-rr", action="store_true", required=True)
    p.add_argument("--type", choices=["k3n", "kumn"])
    p.add_argument("--n", type=int)
    p.add_argument("--coeffs", type=_rationals, help="A0,...,An")
    p.add_argument("--b2", type=int)
    p.set_defaults(func=cmd_fujiki)

    p = sub.add_parser("orbifold", parents=[common], help="orbifold derivations")
    p.add_argument("action", choices=["derive", "k4-appendix"])
    p.add_argument("--profile", help="profile JSON file")
    p.add_argument("--builtin", help="name of a shipped profile")
    p.set_defaults(func=cmd_orbifold)

    p = sub.add_parser("catalog", parents=[common], help="known deformation types")
    p.add_argument("--name", required=True)
    p.add_argument("--verify", action="store_true")
    p.add_argument("--solve-og10", action="store_true")
    p.add_argument("--conjectures", action="store_true")
    p.add_argument("--fixture-dir", help="alternative data directory")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("enumerate", parents=[common], help="enumerations of fourfold tables")
    p.add_argument("--what", choices=["fourfolds", "betti"], required=True)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("genus", parents=[common], help="multiplicative genus components")
    p.add_argument("--class", dest="klass", choices=["ch", "td", "td-half"], required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--plain", action="store_true", help="print 'coeff * monomial' lines only")
    p.set_defaults(func=cmd_genus)

    p = sub.add_parser("graphs", parents=[common], help="graph homology identities")
    p.add_argument("--verify", choices=["basic", "wheeling", "sawon"], required=True)
    p.add_argument("--n", type=int)
    p.set_defaults(func=cmd_graphs)

    p = sub.add_parser("reproduce", parents=[common], help="run every check")
    p.add_argument("--only", action="append", metavar="ID")
    p.add_argument("--fixture-dir", help="alternative data directory")
    p.set_defaults(func=cmd_reproduce)
    return ap


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INVALID
    rep = Report(" ".join(["hkinv"] + list(sys.argv[1:] if argv is None else argv)))
    try:
        args.func(args, rep)
    except Unsupported as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except FixtureError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except AssertionError as exc:
        print(f"consistency check failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (HKError, ValueError, KeyError, ZeroDivisionError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if not rep.plain:
        rep.emit(args.format, args.approx)
    return EXIT_OK if rep.ok else EXIT_FAIL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
