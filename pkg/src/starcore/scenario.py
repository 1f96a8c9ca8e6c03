"""Scenario files: a small line-oriented language for rings, ideals and checks.

Grammar (``#`` starts a comment, statements end with ``;``)::

    ring R = F(7)[x, y, z] / (x^3 + y^3 + z^3);
    ideal J = (y, z);
    ideal U = (x^2);
    ideal I = J + U;           # + sum, & intersection, * product, : colon,
    ideal C = J:I;             # A^n power, A^[q] bracket power, (A) grouping
    ideal m = maximal;         # m is the maximal ideal unless redefined
    tau = m^3;
    flag gorenstein_parameter;
    scale 0, 1;                # Frobenius scaling rows q = p^e
    mainsop params = (x^3, y^3), t = 2, extra = (x*y*z^4);
    check label: member x^5*z^2, J*(J:I) expect true;

The ideals named ``J`` and ``U`` (with ``tau``) define the reduction input
that the criteria, bracket and scaling reports are computed from.
"""
from __future__ import annotations

import logging
import re
import time
from dataclasses import dataclass, field

from .closure import ClosureConfig, TestIdealInput, degree_criterion, star_member, starsp_member
from .core import (
    StarReductionInput,
    chain_conditions,
    check_criteria,
    contained,
    core_bracket,
    frobenius_scaling,
    mainsop_input,
    reduction_number_one,
    tau_lower_bound_members,
    _first_missing,
)
from .errors import ParseError, UsageError
from .ideals import Ideal, QuotientRing
from .oracle import oracle_equal_up_to, oracle_member
from .polyring import PolyParser, Token, format_poly, tokenize

log = logging.getLogger(__name__)

FLAGS = {"gorenstein_parameter"}

# argument kinds per check command: p = polynomial, i = ideal expression, n = integer, w = word
COMMANDS = {
    "member": "pi",
    "subset": "ii",
    "local_subset": "ii",
    "equal": "ii",
    "local_equal": "ii",
    "degree_criterion": "pi",
    "star_member": "pi",
    "starsp_member": "pi",
    "oracle_member": "pi",
    "oracle_equal": "iin",
    "criteria": "",
    "red_number": "",
    "tau_lower_bound": "",
    "bracket": "w",
    "scale_threshold": "",
}
NEEDS_INPUT = {"criteria", "red_number", "tau_lower_bound", "bracket", "scale_threshold"}


@dataclass
class Check:
    label: str
    command: str
    args: list
    expected: object
    line: int


@dataclass
class Scenario:
    name: str
    ring: QuotientRing
    ideals: dict = field(default_factory=dict)  # name -> expression tree
    tau: tuple | None = None
    flags: set = field(default_factory=set)
    checks: list = field(default_factory=list)
    scale: list = field(default_factory=list)
    mainsop: dict | None = None

    def has_input(self) -> bool:
        return self.mainsop is not None or "J" in self.ideals


def _strip_comments(src: str) -> str:
    # blank out comments but keep columns intact
    return re.sub(r"#[^\n]*", lambda m: " " * len(m.group(0)), src)


class ScenarioParser(PolyParser):
    def __init__(self, src: str, p: int | None = None):
        super().__init__(tokenize(_strip_comments(src)), None)
        self.p_override = p
        self.qring: QuotientRing | None = None
        self.scn: Scenario | None = None
        self.labels: set = set()

    # token helpers
    def at_word(self, *words) -> bool:
        t = self.peek()
        return t.kind == "ident" and t.text in words

    def word(self) -> Token:
        t = self.next()
        if t.kind != "ident":
            raise self.error(f"expected a name, found {t.text or 'end of input'!r}", t)
        return t

    def number(self) -> int:
        t = self.next()
        if t.kind != "num":
            raise self.error(f"expected an integer, found {t.text or 'end of input'!r}", t)
        return int(t.text)

    def parse(self, name: str) -> Scenario:
        if self.peek().kind == "end":
            raise self.error("empty scenario")
        while self.peek().kind != "end":
            t = self.peek()
            if t.kind != "ident":
                raise self.error(f"expected a statement, found {t.text!r}")
            if self.scn is None and t.text != "ring":
                raise self.error("the first statement must declare the ring")
            handler = getattr(self, f"stmt_{t.text}", None)
            if handler is None:
                raise self.error(f"unknown statement {t.text!r}")
            self.next()
            handler(t, name)
            self.expect(";")
        scn = self.scn
        if scn.has_input() and scn.tau is None:
            raise self.error("a scenario with J needs a tau statement")
        for c in scn.checks:
            if c.command in NEEDS_INPUT and not scn.has_input():
                raise ParseError(f"check {c.command!r} needs the ideal J", c.line, 1)
        return scn

    # statements
    def stmt_ring(self, start: Token, name: str):
        if self.scn is not None:
            raise self.error("exactly one ring per scenario", start)
        self.word()  # ring name, informational
        self.expect("=")
        f = self.word()
        if f.text != "F":
            raise self.error("expected F(<p>)", f)
        self.expect("(")
        ptok = self.peek()
        p = self.number()
        self.expect(")")
        self.expect("[")
        variables = [self.word().text]
        while self.at(","):
            self.next()
            variables.append(self.word().text)
        self.expect("]")
        if len(set(variables)) != len(variables):
            raise self.error("repeated variable name", start)
        if self.p_override is not None:
            p = self.p_override
        try:
            self.qring = QuotientRing(variables, p)
        except UsageError as exc:
            raise ParseError(str(exc), ptok.line, ptok.col) from None
        self.ring = self.qring.poly_ring
        rels = []
        if self.at("/"):
            self.next()
            rels = self.poly_list()
        self.qring = QuotientRing(variables, self.qring.char, rels)
        self.scn = Scenario(name, self.qring)

    def stmt_ideal(self, start: Token, name: str):
        t = self.word()
        if t.text in self.scn.ideals:
            raise self.error(f"duplicate ideal name {t.text!r}", t)
        if t.text in self.ring.variables:
            raise self.error(f"ideal name {t.text!r} clashes with a ring variable", t)
        self.expect("=")
        if self.at_word("maximal"):
            self.next()
            expr = ("maximal",)
        else:
            expr = self.ideal_expr()
        self.scn.ideals[t.text] = expr

    def stmt_tau(self, start: Token, name: str):
        if self.scn.tau is not None:
            raise self.error("tau is already set", start)
        self.expect("=")
        self.scn.tau = self.ideal_expr()

    def stmt_flag(self, start: Token, name: str):
        t = self.word()
        if t.text not in FLAGS:
            raise self.error(f"unknown flag {t.text!r}", t)
        self.scn.flags.add(t.text)

    def stmt_scale(self, start: Token, name: str):
        es = [self.number()]
        while self.at(","):
            self.next()
            es.append(self.number())
        self.scn.scale = es

    def stmt_mainsop(self, start: Token, name: str):
        if self.scn.has_input():
            raise self.error("J is already defined", start)
        fields = {}
        for key in ("params", "t", "extra"):
            if key != "params":
                self.expect(",")
            k = self.word()
            if k.text != key:
                raise self.error(f"expected {key!r}", k)
            self.expect("=")
            fields[key] = self.number() if key == "t" else self.poly_list()
        self.scn.mainsop = fields
        for n in ("J", "U", "I"):
            if n in self.scn.ideals:
                raise self.error(f"mainsop defines {n}, which is already taken", start)
            self.scn.ideals[n] = ("input", n)

    def stmt_check(self, start: Token, name: str):
        label = None
        if self.peek().kind == "ident" and self.toks[self.pos + 1].text == ":":
            label = self.next().text
            self.next()
        cmd = self.word()
        kinds = COMMANDS.get(cmd.text)
        if kinds is None:
            raise self.error(f"unknown check command {cmd.text!r}", cmd)
        args = []
        for i, k in enumerate(kinds):
            if i:
                self.expect(",")
            if k == "p":
                args.append(self.expr())
            elif k == "i":
                args.append(self.ideal_expr())
            elif k == "n":
                args.append(self.number())
            else:
                args.append(self.word().text)
        e = self.word()
        if e.text != "expect":
            raise self.error("expected 'expect'", e)
        lit = self.next()
        if lit.kind == "num":
            expected = int(lit.text)
        elif lit.kind == "ident":
            expected = {"true": True, "false": False, "none": None}.get(lit.text, lit.text)
        else:
            raise self.error(f"bad literal {lit.text!r}", lit)
        label = label or f"{cmd.text}_{len(self.scn.checks) + 1}"
        if label in self.labels:
            raise self.error(f"duplicate check label {label!r}", start)
        self.labels.add(label)
        self.scn.checks.append(Check(label, cmd.text, args, expected, start.line))

    # ideal expressions
    def poly_list(self) -> list:
        self.expect("(")
        polys = [self.expr()]
        while self.at(","):
            self.next()
            polys.append(self.expr())
        self.expect(")")
        return polys

    def ideal_expr(self):
        node = self.ideal_term()
        while self.at("+", "&"):
            op = self.next().text
            node = (op, node, self.ideal_term())
        return node

    def ideal_term(self):
        node = self.ideal_factor()
        while self.at("*", ":"):
            op = self.next().text
            node = (op, node, self.ideal_factor())
        return node

    def ideal_factor(self):
        node = self.ideal_atom()
        while self.at("^"):
            self.next()
            if self.at("["):
                self.next()
                q = self.number()
                self.expect("]")
                if not self.qring.char.is_power(q):
                    raise self.error(f"bracket exponent {q} is not a power of {self.qring.p}")
                node = ("bracket", node, q)
            else:
                node = ("power", node, self.number())
        return node

    def _is_ideal_name(self, t: Token) -> bool:
        return t.kind == "ident" and (t.text in self.scn.ideals or (t.text == "m" and "m" not in self.ring.variables))

    def ideal_atom(self):
        t = self.peek()
        if t.kind == "ident":
            if not self._is_ideal_name(t):
                raise self.error(f"unknown ideal {t.text!r}", t)
            self.next()
            return ("name", t.text)
        if self.at("("):
            nxt = self.toks[self.pos + 1]
            if self._is_ideal_name(nxt):
                self.next()
                node = self.ideal_expr()
                self.expect(")")
                return node
            return ("gens", tuple(self.poly_list()))
        raise self.error(f"expected an ideal, found {t.text or 'end of input'!r}", t)


def parse_scenario(src: str, name: str = "scenario", p: int | None = None) -> Scenario:
    """Parse scenario text; errors carry line and column. ``p`` overrides the characteristic."""
    return ScenarioParser(src, p).parse(name)


# ---------------------------------------------------------------------------
# evaluation


class Evaluator:
    def __init__(self, scn: Scenario, cfg: ClosureConfig):
        self.scn = scn
        self.ring = scn.ring
        self.cfg = cfg
        self.memo: dict = {}
        self.inp: StarReductionInput | None = None
        self.mainsop_hyp: dict | None = None

    def tau(self) -> TestIdealInput:
        return TestIdealInput(self.ideal(self.scn.tau), "scenario tau statement")

    def ideal(self, node) -> Ideal:
        if node in self.memo:
            return self.memo[node]
        kind = node[0]
        R = self.ring
        if kind == "maximal":
            out = R.maximal()
        elif kind == "gens":
            out = Ideal(R, list(node[1]))
        elif kind == "name":
            name = node[1]
            out = self.ideal(self.scn.ideals[name]) if name in self.scn.ideals else R.maximal()
        elif kind == "input":
            inp = self.reduction_input()
            out = {"J": inp.J, "U": inp.U, "I": inp.I}[node[1]]
        elif kind == "power":
            out = self.ideal(node[1]) ** node[2]
        elif kind == "bracket":
            out = self.ideal(node[1]).bracket(node[2])
        else:
            a, b = self.ideal(node[1]), self.ideal(node[2])
            out = {"+": lambda: a + b, "&": lambda: a & b, "*": lambda: a * b, ":": lambda: a.colon(b)}[kind]()
        self.memo[node] = out
        return out

    def reduction_input(self) -> StarReductionInput:
        if self.inp is not None:
            return self.inp
        scn = self.scn
        if scn.mainsop is not None:
            ms = scn.mainsop
            self.inp, self.mainsop_hyp = mainsop_input(self.ring, ms["params"], ms["t"], ms["extra"], self.tau(), self.cfg)
        else:
            J = self.ideal(("name", "J"))
            U = self.ideal(("name", "U")) if "U" in scn.ideals else Ideal(self.ring, [])
            self.inp = StarReductionInput.build(self.ring, J.user_gens, U.user_gens, self.tau(), self.cfg)
        return self.inp


def _jsonable(v):
    if hasattr(v, "value"):
        return v.value
    return v


def run_scenario(scn: Scenario, cfg: ClosureConfig | None = None, strict: bool = True) -> tuple:
    """Evaluate a scenario; returns (report dict, list of failed check labels).

    The report has the keys scenario, ring, verdicts, criteria, ideals, timings.
    """
    cfg = cfg or ClosureConfig()
    if "gorenstein_parameter" in scn.flags:
        cfg = ClosureConfig(cfg.q_max, True)
    cfg.resolve_qmax(scn.ring.p)
    ev = Evaluator(scn, cfg)
    timings: dict = {}
    ideals: dict = {}
    criteria = None
    u_verdicts: list = []
    warnings: list = []
    notes: list = []
    extras: dict = {}

    t0 = time.perf_counter()
    for name, node in scn.ideals.items():
        a = ev.ideal(node)
        ideals[name] = {"generators": a.gen_strings(), "gb": a.gb_strings()}
    timings["ideals"] = time.perf_counter() - t0

    if scn.has_input():
        t0 = time.perf_counter()
        inp = ev.reduction_input()
        timings["input"] = time.perf_counter() - t0
        u_verdicts = [v.to_dict() for v in inp.u_verdicts]
        warnings.extend(inp.warnings)
        notes.extend(inp.notes)

        t0 = time.perf_counter()
        crit = check_criteria(inp)
        timings["criteria"] = time.perf_counter() - t0
        t0 = time.perf_counter()
        br = core_bracket(inp, crit, strict=strict)
        timings["bracket"] = time.perf_counter() - t0
        t0 = time.perf_counter()
        criteria = crit.to_dict()
        criteria["bracket"] = br.to_dict()
        criteria["reduction_number_one"] = reduction_number_one(inp)
        criteria["tau_lower_bound_members"] = tau_lower_bound_members(inp)
        criteria["chain_conditions_J"] = chain_conditions(inp, inp.J)
        if ev.mainsop_hyp is not None:
            criteria["mainsop_hypotheses"] = ev.mainsop_hyp
        timings["extras"] = time.perf_counter() - t0
        if scn.scale:
            t0 = time.perf_counter()
            scaling = frobenius_scaling(inp, scn.scale)
            criteria["scaling"] = scaling.to_dict()
            extras["scale_threshold"] = scaling.threshold
            timings["scaling"] = time.perf_counter() - t0
        extras["bracket"] = br.checks
        extras["criteria"] = crit.conclusion.value
        extras["red_number"] = criteria["reduction_number_one"]
        extras["tau_lower_bound"] = all(criteria["tau_lower_bound_members"])
        ideals["J:I"] = {"generators": inp.colon.gen_strings(), "gb": inp.colon.gb_strings()}
        ideals["tau*I"] = {"generators": br.lower.gen_strings(), "gb": br.lower.gb_strings()}
        ideals["J(J:I)"] = {"generators": br.formula.gen_strings(), "gb": br.formula.gb_strings()}
        ideals["I(J:I)"] = {"generators": br.alt_formula.gen_strings(), "gb": br.alt_formula.gb_strings()}
        ideals["finite_intersection"] = {"generators": br.finite_intersection.gen_strings(),
                                         "gb": br.finite_intersection.gb_strings()}

    t0 = time.perf_counter()
    checks: dict = {}
    details: list = []
    closure: list = []
    failed: list = []
    for c in scn.checks:
        actual, witness = _run_check(ev, c, extras, closure)
        ok = actual == c.expected
        checks[c.label] = actual
        row = {"label": c.label, "command": c.command, "expected": c.expected, "actual": actual, "ok": ok}
        if witness is not None:
            row["witness"] = witness
        details.append(row)
        if not ok:
            failed.append(c.label)
    timings["checks"] = time.perf_counter() - t0

    report = {
        "scenario": {
            "id": scn.name,
            "flags": sorted(scn.flags),
            "q_max": cfg.resolve_qmax(scn.ring.p),
            "tau": ev.tau().tau.gen_strings() if scn.tau is not None else None,
            "checks_passed": not failed,
            "failed_checks": failed,
            "warnings": warnings,
            "notes": notes,
        },
        "ring": scn.ring.to_dict(),
        "verdicts": {
            "u_in_J_sp": u_verdicts,
            "closure": closure,
            "checks": checks,
            "check_details": details,
        },
        "criteria": criteria,
        "ideals": ideals,
        "timings": {k: round(v, 4) for k, v in timings.items()},
    }
    return report, failed


def _run_check(ev: Evaluator, c: Check, extras: dict, closure: list) -> tuple:
    cmd, args = c.command, c.args
    if cmd in NEEDS_INPUT:
        if cmd == "bracket":
            if args[0] not in extras["bracket"]:
                raise UsageError(f"unknown bracket check {args[0]!r}")
            return extras["bracket"][args[0]], None
        if cmd == "scale_threshold" and "scale_threshold" not in extras:
            raise UsageError("scale_threshold needs a scale statement")
        return extras[cmd], None
    vals = [ev.ideal(a) if k == "i" else (ev.ring(a) if k == "p" else a) for a, k in zip(args, COMMANDS[cmd])]
    if cmd == "member":
        return vals[1].contains(vals[0]), None
    if cmd in ("subset", "local_subset"):
        small, big = vals
        ok = big.contains(small) if cmd == "subset" else contained(small, big)
        witness = None
        if not ok:
            if cmd == "subset":
                witness = next((format_poly(g) for g in small.user_gens if not big.contains(g)), None)
            else:
                witness = _first_missing(small, big)
        return ok, witness
    if cmd == "equal":
        return vals[0].equals(vals[1]), None
    if cmd == "local_equal":
        return contained(vals[0], vals[1]) and contained(vals[1], vals[0]), None
    if cmd == "degree_criterion":
        return degree_criterion(vals[0], vals[1]), None
    if cmd in ("star_member", "starsp_member"):
        fn = star_member if cmd == "star_member" else starsp_member
        v = fn(vals[0], vals[1], ev.tau(), ev.cfg)
        closure.append({"label": c.label, "verdict": v.to_dict()})
        return v.status.value, None
    if cmd == "oracle_member":
        return oracle_member(vals[0], vals[1]), None
    if cmd == "oracle_equal":
        return oracle_equal_up_to(vals[0], vals[1], vals[2]), None
    raise UsageError(f"unknown check command {cmd!r}")


def parse_ring(text: str, p: int | None = None) -> QuotientRing:
    """Parse ``F(p)[vars] / (relations)`` (the right-hand side of a ring statement)."""
    parser = ScenarioParser(f"ring R = {text};", p)
    parser.next()
    parser.stmt_ring(parser.toks[0], "ring")
    parser.expect(";")
    if parser.peek().kind != "end":
        raise parser.error(f"unexpected {parser.peek().text!r}")
    return parser.qring


def _gen_list(src: str, ring: QuotientRing) -> list:
    parser = PolyParser(tokenize(src), ring.poly_ring)
    parser.expect("(")
    gens = [parser.expr()]
    while parser.at(","):
        parser.next()
        gens.append(parser.expr())
    parser.expect(")")
    if parser.peek().kind != "end":
        raise parser.error(f"unexpected {parser.peek().text!r}")
    return gens


def parse_ideal(text: str, ring: QuotientRing) -> Ideal:
    """Parse a generator list such as ``x^2, y*z`` or ``(x^2, y*z)``."""
    src = text.strip()
    if not src:
        raise ParseError("empty ideal", 1, 1)
    if src.startswith("("):
        try:
            return Ideal(ring, _gen_list(src, ring))
        except ParseError:
            pass  # e.g. "(x+y)*z", a single generator
    return Ideal(ring, _gen_list(f"({src})", ring))
