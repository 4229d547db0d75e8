"""Command-line front end.

Exit status: 0 when every checked law passes, 1 on a law failure, 2 on a
usage or configuration error. The seed defaults to ``$GYROFUZZ_SEED`` and
then to 0.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import completion, exact, fuzzy_metric as fm, norms, table_io
from .gyro_core import (Gyrogroup, MobiusDisk, MobiusPoint, cyclic_group, format_literal, parse_literal,
                        rationals_additive, real_line, verify_gyrogroup_axioms, verify_identities)
from .report import PropertyReport, fmt_witness
from .tnorm import TNorm, TNormConfigError, get_tnorm, parse_tnorm_file

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class Instance:
    G: Gyrogroup
    norm: norms.Gyronorm
    N: norms.FuzzyGyronorm
    M: fm.FuzzyMetric
    table: table_io.CayleyTable | None = None


# -- selectors ---------------------------------------------------------------


def parse_grid(text: str) -> tuple[Fraction, ...]:
    try:
        grid = tuple(Fraction(v) for v in text.split(",") if v.strip())
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad t-grid {text!r}; expected comma-separated rationals") from None
    if not grid or any(t <= 0 for t in grid):
        raise UsageError("t-grid values must be positive")
    return grid


def resolve_tnorm(name: str, exact_mode: bool) -> TNorm:
    try:
        if Path(name).is_file():
            return parse_tnorm_file(Path(name).read_text(encoding="utf-8"), exact_mode)
        return get_tnorm(name, exact_mode)
    except TNormConfigError as e:
        raise UsageError(str(e)) from None


def resolve_group(name: str) -> Gyrogroup:
    if name == "q-add":
        return rationals_additive()
    if name == "r-add":
        return real_line()
    if name.startswith("z") and name[1:].isdigit() and int(name[1:]) >= 1:
        return cyclic_group(int(name[1:]))
    tables = table_io.bundled_tables()
    if name in tables:
        return table_io.load_table(tables[name]).gyrogroup(name)
    raise UsageError(f"unknown group {name!r}; try z<n>, q-add, r-add or one of {sorted(tables)}")


def load_table_selector(path: str) -> table_io.CayleyTable:
    try:
        return table_io.load_table(table_io.resolve_table_path(path))
    except FileNotFoundError:
        raise UsageError(f"table file not found: {path}") from None
    except (table_io.TableParseError, ValueError) as e:
        raise UsageError(f"{path}: {e}") from None


def resolve_instance(selector: str, tnorm: str, tol: float) -> Instance:
    table = None
    if selector in ("mobius-exact", "mobius-float"):
        exact_mode = selector == "mobius-exact"
        G = MobiusDisk(exact=exact_mode, tol=tol)
        nrm = norms.abs_gyronorm(G)
    elif selector.startswith("group:"):
        exact_mode = True
        G = resolve_group(selector[len("group:"):])
        nrm = norms.discrete_gyronorm(G) if G.elements() is not None else norms.abs_gyronorm(G)
    elif selector.startswith("table:"):
        exact_mode = True
        table = load_table_selector(selector[len("table:"):])
        G = None
        nrm = None
    else:
        raise UsageError(f"unknown instance {selector!r}; use mobius-exact, mobius-float, "
                         "group:<name> or table:<path>")
    T = resolve_tnorm(tnorm, exact_mode)
    if table is not None:
        if table_io.prove_gyrogroup(table).verdict == table_io.NOT_GYROGROUP:
            return Instance(None, None, None, None, table)
        G = table.gyrogroup(Path(selector).stem)
        nrm = norms.discrete_gyronorm(G)
    N = norms.fuzzy_from_gyronorm(nrm, T)
    return Instance(G, nrm, N, fm.metric_from_fuzzy_gyronorm(N), table)


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("GYROFUZZ_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"GYROFUZZ_SEED must be an integer, got {env!r}") from None


def _emit(args, rep: PropertyReport, extra: list[str] | None = None,
          passed: bool | None = None) -> int:
    passed = rep.passed if passed is None else passed
    if args.output == "json":
        text = rep.to_json() + "\n"
    else:
        lines = (extra or []) + rep.lines()
        lines.append(f"{'PASS' if passed else 'FAIL'} {rep.suite}")
        text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK if passed else EXIT_FAIL


def _exhaustive_n(G: Gyrogroup, samples: int, arity: int = 4) -> int:
    elems = G.elements()
    return samples if elems is None else max(samples, len(elems) ** arity)


# -- commands --------------------------------------------------------------------


def cmd_verify(args) -> int:
    seed = _seed(args)
    inst = resolve_instance(args.instance, args.tnorm, args.tol)
    grid = parse_grid(args.t_grid)
    rep = PropertyReport(f"verify:{args.instance}", seed=seed, samples=args.samples)
    extra = []
    if inst.table is not None:
        diag = table_io.prove_gyrogroup(inst.table)
        extra.append(f"verdict: {diag.verdict}")
        chk = rep.law("prove-gyrogroup")
        chk.record(diag.verdict != table_io.NOT_GYROGROUP, 0.0 if diag.verdict != table_io.NOT_GYROGROUP else 1.0,
                   diag.to_dict())
        if inst.G is None:
            return _emit(args, rep, extra)
    G, n = inst.G, args.samples
    rep.merge(verify_gyrogroup_axioms(G, _exhaustive_n(G, n), seed), "axioms")
    rep.merge(verify_identities(G, _exhaustive_n(G, n, 3), seed), "identities")
    rep.merge(norms.verify_gyronorm(inst.norm, n, seed), "gyronorm")
    rep.merge(norms.verify_fuzzy_gyronorm(inst.N, n, seed, grid), "fuzzy-gyronorm")
    rep.merge(fm.verify_fuzzy_metric(inst.M, n, seed, grid), "fuzzy-metric")
    rep.merge(fm.check_invariance(inst.M, "left", n, seed, grid), "invariance")
    rep.merge(fm.check_invariance(inst.M, "gyration", n, seed, grid), "invariance")
    rep.merge(fm.round_trip_check(inst.N, n, seed, grid), "round-trip")
    rep.samples = n
    return _emit(args, rep, extra)


def _literal(text: str, G: MobiusDisk) -> MobiusPoint:
    try:
        p = parse_literal(text, G.exact)
    except ValueError as e:
        raise UsageError(str(e)) from None
    if not G.is_member(p):
        raise UsageError(f"{text} is not inside the open unit disk")
    return p


def _positive(text: str | None, exact_mode: bool):
    if text is None:
        raise UsageError("this expression needs --t")
    try:
        v = Fraction(text) if exact_mode else float(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad number {text!r}") from None
    if v <= 0:
        raise UsageError("t must be positive")
    return v


def _fmt_value(v) -> str:
    if isinstance(v, exact.Real):
        return f"{v} ~ {float(v)!r}"
    return str(v)


ARITY = {"oplus": 2, "neg": 1, "gyr": 3, "norm": 1, "fuzzynorm": 1, "metric": 2}


def cmd_eval(args) -> int:
    G = MobiusDisk(exact=not args.float, tol=args.tol)
    want = ARITY[args.expr]
    if len(args.elements) != want:
        raise UsageError(f"{args.expr} takes {want} element(s), got {len(args.elements)}")
    pts = [_literal(s, G) for s in args.elements]
    expr = args.expr
    if expr == "oplus":
        out = format_literal(G.oplus(*pts))
    elif expr == "neg":
        out = format_literal(G.neg(pts[0]))
    elif expr == "gyr":
        out = format_literal(G.gyr(*pts))
    else:
        nrm = norms.abs_gyronorm(G)
        if expr == "norm":
            out = _fmt_value(nrm(pts[0]))
        else:
            T = resolve_tnorm(args.tnorm, G.exact)
            N = norms.fuzzy_from_gyronorm(nrm, T)
            t = _positive(args.t, G.exact)
            if expr == "fuzzynorm":
                out = _fmt_value(N(pts[0], t))
            else:
                out = _fmt_value(fm.metric_from_fuzzy_gyronorm(N)(pts[0], pts[1], t))
    print(out)
    return EXIT_OK


def cmd_klee(args) -> int:
    seed = _seed(args)
    inst = resolve_instance(args.instance, args.tnorm, args.tol)
    if inst.G is None:
        raise UsageError(f"{args.instance} is not a gyrogroup")
    rep = fm.check_klee(inst.M, args.samples, seed, parse_grid(args.t_grid))
    # the four conditions are findings; only an audit violation is a failure
    extra = [f"{c}: {'holds' if rep.holds(c) else 'fails'} on samples" for c in fm.KLEE_CONDITIONS]
    return _emit(args, rep, extra, passed=rep.consistent)


def cmd_invariance(args) -> int:
    seed = _seed(args)
    inst = resolve_instance(args.instance, args.tnorm, args.tol)
    if inst.G is None:
        raise UsageError(f"{args.instance} is not a gyrogroup")
    rep = fm.check_invariance(inst.M, args.side, args.samples, seed, parse_grid(args.t_grid))
    return _emit(args, rep)


def cmd_complete(args) -> int:
    seed = _seed(args)
    try:
        fixtures = completion.load_fixtures(args.fixtures)
    except (OSError, ValueError) as e:
        raise UsageError(f"cannot load fixtures: {e}") from None
    eps = _positive(args.eps, True)
    T = resolve_tnorm(args.tnorm, True)
    if args.base in ("q-add", "r-add"):
        space = completion.rational_completion(T, seed=seed)
    elif args.base == "mobius-exact":
        G = MobiusDisk()
        space = completion.CompletionSpace(G, fm.gyronorm_metric(norms.abs_gyronorm(G)), T, seed=seed)
    else:
        raise UsageError(f"unknown base {args.base!r}; use q-add or mobius-exact")
    names = [args.fixture] + ([args.with_] if args.with_ else [])
    for name in names:
        if name not in fixtures:
            raise UsageError(f"unknown fixture {name!r}; available: {', '.join(sorted(fixtures))}")
        if fixtures[name].cauchy is not True:
            raise UsageError(f"fixture {name!r} is not declared Cauchy")
    rep = PropertyReport(f"complete:{args.base}:{'+'.join(names)}", seed=seed, samples=len(names))
    extra = []
    if args.base == "mobius-exact":
        chk = rep.law("lifting-precondition")
        chk.record(space.invariant, 0.0, space.invariance.failures[0].witness if not space.invariant else None)
        extra.append("lifted operations refused: metric is not invariant on both sides"
                     if not space.invariant else "metric invariant on both sides")
        return _emit(args, rep, extra)

    fa = fixtures[args.fixture]
    fb = fixtures[args.with_] if args.with_ else fa
    p, q = fa.point(space), fb.point(space)
    ra, rb = fa.oracle(), fb.oracle()

    def oracle_law(law, point, value):
        delta = completion.oracle_delta(point, value, eps)
        ok = delta < completion.to_decimal(eps)
        rep.law(law).record(ok, float(delta), fmt_witness(delta=f"{delta:.3e}", eps=eps))
        extra.append(f"{law}: oracle delta {delta:.3e}")

    oracle_law("point", p, ra)
    oracle_law("hat-oplus", space.hat_oplus(p, q), ra + rb)
    oracle_law("hat-neg", space.hat_neg(p), -ra)
    oracle_law("hat-gyr", space.hat_gyr(p, q, p), ra)
    e = space.embed(space.base.identity)
    ok = completion.approx_eq(space.hat_oplus(space.hat_neg(p), p), e, eps)
    rep.law("left-inverse").record(ok, 0.0 if ok else 1.0, fmt_witness(eps=eps))
    return _emit(args, rep, extra)


def cmd_table_check(args) -> int:
    table = load_table_selector(args.path)
    diag = table_io.prove_gyrogroup(table)
    if args.output == "json":
        text = json.dumps(diag.to_dict(), indent=2) + "\n"
    else:
        text = diag.verdict
        if diag.failing_axiom:
            text += f"\nfailing axiom: {diag.failing_axiom}"
            if diag.witness:
                text += f"\nwitness: ({', '.join(diag.witness)})"
        text += "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_FAIL if diag.verdict == table_io.NOT_GYROGROUP else EXIT_OK


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="random seed (default $GYROFUZZ_SEED or 0)")
    common.add_argument("--output", choices=("text", "json"), default="text")
    common.add_argument("--out", help="write the report to this file instead of stdout")
    common.add_argument("--tnorm", default="min", help="min, product, lukasiewicz or a tabulated t-norm file")
    common.add_argument("--tol", type=float, default=1e-9, help="tolerance in float mode")

    suite = argparse.ArgumentParser(add_help=False, parents=[common])
    suite.add_argument("--instance", default="mobius-exact",
                       help="mobius-exact | mobius-float | group:<name> | table:<path>")
    suite.add_argument("--samples", type=int, default=1000)
    suite.add_argument("--t-grid", default="1/4,1/2,1,2,4")

    ap = argparse.ArgumentParser(prog="gyrofuzz", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    sub.add_parser("verify", parents=[suite], help="run every law suite on an instance").set_defaults(func=cmd_verify)

    p = sub.add_parser("eval", parents=[common], help="evaluate one Möbius expression")
    p.add_argument("expr", choices=sorted(ARITY))
    p.add_argument("elements", nargs="*", help="element literals such as 1/2+0i")
    p.add_argument("--t", help="the fuzzy parameter t")
    p.add_argument("--float", action="store_true", help="float arithmetic (decimals allowed)")
    p.set_defaults(func=cmd_eval)

    sub.add_parser("klee", parents=[suite], help="Klee-type conditions and their audit").set_defaults(func=cmd_klee)

    p = sub.add_parser("invariance", parents=[suite], help="gyrotranslation / gyration invariance")
    p.add_argument("--side", choices=fm.SIDES, default="left")
    p.set_defaults(func=cmd_invariance)

    p = sub.add_parser("complete", parents=[common], help="completion demo against a real oracle")
    p.add_argument("--base", default="q-add")
    p.add_argument("--fixture", default="sqrt2")
    p.add_argument("--with", dest="with_", help="second fixture for the sum (default: the same)")
    p.add_argument("--eps", default="1e-9")
    p.add_argument("--fixtures", help="fixture JSON file (default: bundled)")
    p.set_defaults(func=cmd_complete, tnorm="product")

    p = sub.add_parser("table-check", parents=[common], help="decide whether a Cayley table is a gyrogroup")
    p.add_argument("path")
    p.set_defaults(func=cmd_table_check)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if getattr(args, "samples", 1) < 1:
        print("gyrofuzz: --samples must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as e:
        print(f"gyrofuzz: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
