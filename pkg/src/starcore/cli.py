"""Command-line front end.

Exit codes: 0 computed, 1 a scenario check or bracket assertion failed,
2 usage or parse error, 3 a resource cap was hit.
"""
from __future__ import annotations

import argparse
import json
import logging
import re
import sys
import time
from importlib.resources import files

from . import groebner
from .closure import ClosureConfig, TestIdealInput, replay, star_member, starsp_member
from .core import (
    check_criteria,
    core_bracket,
    frobenius_scaling,
    reduction_number_one,
)
from .errors import ScenarioAssertionError, StarcoreError, UsageError
from .ideals import Ideal, QuotientRing
from .oracle import cross_check
from .polyring import format_poly
from .scenario import Evaluator, parse_ideal, parse_ring, parse_scenario, run_scenario

EXAMPLES = ("xyz", "quintic", "decic", "cubic-mainm", "mainsop")
DEFAULT_P = 32003

log = logging.getLogger("starcore")


def example_source(name: str) -> str:
    if name not in EXAMPLES:
        raise UsageError(f"unknown example {name!r}; choose from {', '.join(EXAMPLES)}")
    return (files("starcore") / "data" / f"{name}.sc").read_text()


def _infer_ring(texts, p: int) -> QuotientRing:
    names = sorted({w for t in texts for w in re.findall(r"[A-Za-z_][A-Za-z0-9_]*", t)})
    if not names:
        names = ["x"]
    return QuotientRing(names, p)


def _ring(args, texts) -> QuotientRing:
    if args.ring:
        return parse_ring(args.ring, args.p)
    return _infer_ring(texts, args.p or DEFAULT_P)


def _ideal_view(a: Ideal) -> dict:
    return {"generators": a.gen_strings(), "gb": a.gb_strings()}


def _braces(a: Ideal) -> str:
    return "{" + ", ".join(reversed(a.gb_strings())) + "}"


def _envelope(command: str, ring: QuotientRing | None, **parts) -> dict:
    return {
        "scenario": {"command": command, **parts.get("scenario", {})},
        "ring": ring.to_dict() if ring else None,
        "verdicts": parts.get("verdicts", {}),
        "criteria": parts.get("criteria"),
        "ideals": parts.get("ideals", {}),
        "timings": parts.get("timings", {}),
    }


def _cfg(args, gorenstein: bool = False) -> ClosureConfig:
    return ClosureConfig(args.qmax, gorenstein)


# ---------------------------------------------------------------------------
# ideal operations


def cmd_gb(args):
    R = _ring(args, args.gens)
    A = parse_ideal(", ".join(args.gens), R)
    return _envelope("gb", R, ideals={"result": _ideal_view(A)}), _braces(A)


def _binary(args, op):
    R = _ring(args, [args.a, args.b])
    A, B = parse_ideal(args.a, R), parse_ideal(args.b, R)
    out = op(A, B)
    return _envelope(args.command, R, ideals={"a": _ideal_view(A), "b": _ideal_view(B), "result": _ideal_view(out)}), _braces(out)


def cmd_colon(args):
    return _binary(args, lambda a, b: a.colon(b))


def cmd_intersect(args):
    return _binary(args, lambda a, b: a & b)


def cmd_product(args):
    return _binary(args, lambda a, b: a * b)


def cmd_power(args):
    R = _ring(args, [args.a])
    A = parse_ideal(args.a, R)
    out = A ** args.n
    return _envelope("power", R, ideals={"a": _ideal_view(A), "result": _ideal_view(out)}), _braces(out)


def cmd_bracket(args):
    R = _ring(args, [args.a])
    A = parse_ideal(args.a, R)
    out = A.bracket(args.q)
    return _envelope("bracket", R, ideals={"a": _ideal_view(A), "result": _ideal_view(out)}), _braces(out)


def cmd_nf(args):
    R = _ring(args, [args.f, args.a])
    f = R(args.f)
    A = parse_ideal(args.a, R)
    r = A.reduce(f)
    return _envelope("nf", R, ideals={"a": _ideal_view(A)}, verdicts={"normal_form": format_poly(r)}), format_poly(r)


def cmd_member(args):
    R = _ring(args, [args.f, args.a])
    A = parse_ideal(args.a, R)
    ok = A.contains(R(args.f))
    return _envelope("member", R, ideals={"a": _ideal_view(A)}, verdicts={"member": ok}), str(ok).lower()


def _closure_cmd(args, fn):
    texts = [args.f, args.a] + ([args.tau] if args.tau else [])
    R = _ring(args, texts)
    A = parse_ideal(args.a, R)
    tau = TestIdealInput(parse_ideal(args.tau, R) if args.tau else R.maximal(),
                         "command line" if args.tau else "default: maximal ideal")
    v = fn(R(args.f), A, tau, _cfg(args, args.gorenstein_parameter))
    d = v.to_dict()
    d["replays"] = replay(v, R) if v.status.value != "Unknown" else None
    text = f"{v.status.value} ({v.rule.value})"
    return _envelope(args.command, R, ideals={"a": _ideal_view(A)}, verdicts={"verdict": d}), text


def cmd_star_member(args):
    return _closure_cmd(args, star_member)


def cmd_starsp_member(args):
    return _closure_cmd(args, starsp_member)


# ---------------------------------------------------------------------------
# scenario-level commands


def _load(args):
    if args.example:
        src, name = example_source(args.scenario), args.scenario
    else:
        try:
            with open(args.scenario, encoding="utf-8") as fh:
                src = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {args.scenario}: {exc.strerror}") from None
        name = args.scenario
    return parse_scenario(src, name, args.p)


def _scenario_input(args):
    scn = _load(args)
    if not scn.has_input():
        raise UsageError("the scenario does not define J")
    cfg = _cfg(args, "gorenstein_parameter" in scn.flags)
    ev = Evaluator(scn, cfg)
    return scn, ev.reduction_input()


def cmd_criteria(args):
    scn, inp = _scenario_input(args)
    rep = check_criteria(inp)
    text = json.dumps(rep.to_dict(), indent=2)
    return _envelope("criteria", scn.ring, criteria=rep.to_dict(), scenario={"id": scn.name}), text


def cmd_core_bracket(args):
    scn, inp = _scenario_input(args)
    crit = check_criteria(inp)
    br = core_bracket(inp, crit)
    crit_d = crit.to_dict()
    crit_d["bracket"] = br.to_dict()
    lines = [f"conclusion: {crit.conclusion.value}"]
    for k in ("lower", "formula", "alt_formula", "finite_intersection"):
        lines.append(f"{k}: {_braces(getattr(br, k))}")
    lines += [f"{k}: {str(v).lower()}" for k, v in br.checks.items()]
    return _envelope("core-bracket", scn.ring, criteria=crit_d, scenario={"id": scn.name}), "\n".join(lines)


def cmd_frob_scale(args):
    scn, inp = _scenario_input(args)
    res = frobenius_scaling(inp, args.e)
    lines = [f"e={r.e} q={r.q}: {r.criteria.conclusion.value}; special (a) {r.special_a}, (b) {r.special_b}"
             for r in res.rows]
    lines.append(f"confirmed from e = {res.threshold}")
    return _envelope("frob-scale", scn.ring, criteria={"scaling": res.to_dict()}, scenario={"id": scn.name}), "\n".join(lines)


def cmd_red_number(args):
    scn, inp = _scenario_input(args)
    ok = reduction_number_one(inp)
    return _envelope("red-number", scn.ring, verdicts={"reduction_number_one": ok}, scenario={"id": scn.name}), \
        f"r_J(I) = 1: {str(ok).lower()}"


def _report_text(rep: dict) -> str:
    scn = rep["scenario"]
    lines = [f"scenario {scn['id']}  ring {rep['ring']['characteristic']}: "
             f"{', '.join(rep['ring']['variables'])} / ({', '.join(rep['ring']['relations'])})"]
    for w in scn["warnings"]:
        lines.append(f"warning: {w}")
    crit = rep["criteria"]
    if crit:
        lines.append(f"criteria: a1={crit['hypothesis_a1']} a2={crit['hypothesis_a2']} b={crit['hypothesis_b']} "
                     f"-> {crit['conclusion']}")
        for k, v in crit["witnesses"].items():
            lines.append(f"  witness {k}: {v}")
        br = crit["bracket"]
        for k in ("lower", "formula", "alt_formula", "finite_intersection"):
            lines.append(f"  {k}: {{{', '.join(reversed(br[k]))}}}")
        for k, v in br["checks"].items():
            lines.append(f"  {k}: {str(v).lower()}")
        lines.append(f"  r_J(I) = 1: {str(crit['reduction_number_one']).lower()}")
        if "scaling" in crit:
            for row in crit["scaling"]["rows"]:
                lines.append(f"  scaling e={row['e']} q={row['q']}: {row['criteria']['conclusion']}, "
                             f"special a={row['special_a']} b={row['special_b']}")
            lines.append(f"  confirmed from e = {crit['scaling']['confirmed_from_e']}")
    for d in rep["verdicts"]["check_details"]:
        mark = "ok  " if d["ok"] else "FAIL"
        extra = f"  (witness {d['witness']})" if "witness" in d else ""
        lines.append(f"{mark} {d['label']}: {d['command']} -> {json.dumps(d['actual'])}, "
                     f"expected {json.dumps(d['expected'])}{extra}")
    return "\n".join(lines)


def cmd_run(args):
    scn = _load(args)
    t0 = time.perf_counter()
    rep, failed = run_scenario(scn, _cfg(args))
    rep["timings"]["total"] = round(time.perf_counter() - t0, 4)
    if failed:
        args._failed = failed
    return rep, _report_text(rep)


def cmd_example(args):
    args.example = True
    return cmd_run(args)


def cmd_selftest(args):
    t0 = time.perf_counter()
    bad = cross_check(args.count, args.seed or 0)
    t1 = time.perf_counter()
    replays = {}
    for name in EXAMPLES:
        scn = parse_scenario(example_source(name), name)
        rep, _ = run_scenario(scn, _cfg(args))
        verdicts = rep["verdicts"]["u_in_J_sp"] + [c["verdict"] for c in rep["verdicts"]["closure"]]
        replays[name] = [replay(v, scn.ring) for v in verdicts if v["status"] != "Unknown"]
    ok = not bad and all(all(v) for v in replays.values())
    if not ok:
        args._failed = ["selftest"]
    text = [f"oracle cross-check: {args.count} instances, {len(bad)} disagreements"]
    text += [f"certificate replay {k}: {sum(v)}/{len(v)}" for k, v in replays.items()]
    return _envelope("selftest", None, verdicts={"disagreements": bad, "replays": replays},
                     timings={"cross_check": round(t1 - t0, 4), "replay": round(time.perf_counter() - t1, 4)}), "\n".join(text)


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the JSON report")
    common.add_argument("--qmax", type=int, default=None, help="largest Frobenius power q used by closure rules")
    common.add_argument("--seed", type=int, default=None, help="seed for randomized commands")
    common.add_argument("--max-degree", type=int, default=None, help="degree cap for Gröbner basis elements")
    common.add_argument("--p", type=int, default=None, help="characteristic (overrides the scenario's)")
    common.add_argument("--ring", default=None, help="ring as F(p)[x,y,z] / (relations); inferred if omitted")
    common.add_argument("-v", "--verbose", action="store_true")

    ap = argparse.ArgumentParser(prog="starcore", description="Tight-closure computations in prime characteristic.")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        sp.set_defaults(func=fn, example=False)
        return sp

    sp = add("gb", cmd_gb, "reduced Gröbner basis of the given generators")
    sp.add_argument("gens", nargs="+")
    sp = add("nf", cmd_nf, "normal form of f modulo an ideal")
    sp.add_argument("f")
    sp.add_argument("a")
    for name, fn in (("colon", cmd_colon), ("intersect", cmd_intersect), ("product", cmd_product)):
        sp = add(name, fn, f"{name} of two ideals")
        sp.add_argument("a")
        sp.add_argument("b")
    sp = add("power", cmd_power, "ordinary power A^n")
    sp.add_argument("a")
    sp.add_argument("n", type=int)
    sp = add("bracket", cmd_bracket, "Frobenius bracket power A^[q]")
    sp.add_argument("a")
    sp.add_argument("q", type=int)
    sp = add("member", cmd_member, "ideal membership")
    sp.add_argument("f")
    sp.add_argument("a")
    for name, fn in (("star-member", cmd_star_member), ("starsp-member", cmd_starsp_member)):
        sp = add(name, fn, "three-valued closure membership")
        sp.add_argument("f")
        sp.add_argument("a")
        sp.add_argument("--tau", default=None, help="test ideal generators (default: the maximal ideal)")
        sp.add_argument("--gorenstein-parameter", action="store_true")
    for name, fn in (("criteria", cmd_criteria), ("core-bracket", cmd_core_bracket),
                     ("red-number", cmd_red_number), ("run", cmd_run)):
        sp = add(name, fn, f"{name} for a scenario file")
        sp.add_argument("scenario")
        sp.add_argument("--example", action="store_true", help="treat SCENARIO as a bundled example id")
    sp = add("frob-scale", cmd_frob_scale, "Frobenius scaling rows for a scenario file")
    sp.add_argument("scenario")
    sp.add_argument("--example", action="store_true", help="treat SCENARIO as a bundled example id")
    sp.add_argument("--e", type=int, nargs="+", default=[0, 1])
    sp = add("example", cmd_example, "run a bundled example")
    sp.add_argument("scenario", choices=EXAMPLES, metavar="id")
    sp = add("selftest", cmd_selftest, "oracle cross-check and certificate replay")
    sp.add_argument("--count", type=int, default=100)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, format="%(levelname)s: %(message)s")
    if args.max_degree is not None:
        groebner.limits.max_degree = args.max_degree
    args._failed = []
    try:
        report, text = args.func(args)
    except ScenarioAssertionError as exc:
        print(f"assertion failed: {exc}", file=sys.stderr)
        return exc.exit_code
    except StarcoreError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=False))
    else:
        print(text)
    if args._failed:
        print(f"failed checks: {', '.join(args._failed)}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
