"""Three-valued tight-closure membership with replayable certificates.

No decision procedure for tight closure is known, so membership is answered
by a fixed list of sound proof rules, tried in order:

1. ``AlreadyInIdeal``: f in I, hence f in I*.
2. ``DegreeCriterion``: on K[x,y,z]/(x^k+y^k+z^k) with I = (x^a, y^b, z^c),
   a, b, c <= k, a+b+c <= 2k and p not dividing k, every form of degree
   >= k lies in I* (valid over an algebraically closed field).
3. ``GorensteinParameterColon``: I* is contained in I : tau always; when the
   caller asserts R Gorenstein and I a parameter ideal the two agree, so
   f in I : tau proves f in I*. Off unless the flag is set.
4. ``TestIdealRefutation``: tau * I* is contained in I, so tau * f not in I
   refutes.
5. ``FrobeniusRefutation``: f in I* forces f^q in (I^[q])*, hence
   c * f^q in I^[q] for every c in tau. One failing (c, q) refutes.

Anything else is ``Unknown`` with the evidence rows that were checked.
Every proved verdict carries a list of claims that :func:`replay` re-checks
with plain ideal operations.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .errors import UsageError
from .ideals import Ideal, QuotientRing
from .polyring import Polynomial, format_poly


class Status(str, enum.Enum):
    PROVED_IN = "ProvedIn"
    PROVED_OUT = "ProvedOut"
    UNKNOWN = "Unknown"


class Rule(str, enum.Enum):
    ALREADY_IN_IDEAL = "AlreadyInIdeal"
    DEGREE_CRITERION = "DegreeCriterion"
    GORENSTEIN_PARAMETER_COLON = "GorensteinParameterColon"
    TEST_IDEAL_REFUTATION = "TestIdealRefutation"
    FROBENIUS_REFUTATION = "FrobeniusRefutation"
    EVIDENCE_ONLY = "EvidenceOnly"


ALGEBRAICALLY_CLOSED_CAVEAT = "valid over the algebraic closure of the coefficient field"


@dataclass
class TestIdealInput:
    """A test ideal supplied by the caller; the engine trusts it and records where it came from."""

    __test__ = False  # not a pytest class

    tau: Ideal
    provenance: str = "user assertion"

    def __post_init__(self):
        if not self.tau.user_gens or self.tau.is_zero():
            raise UsageError("the test ideal must be nonzero")


@dataclass
class ClosureConfig:
    q_max: int | None = None
    gorenstein_parameter: bool = False

    def resolve_qmax(self, p: int) -> int:
        q = self.q_max if self.q_max is not None else p * p
        if q < p or q % p:
            raise UsageError(f"q_max must be a positive power of p={p}, got {q}")
        r = q
        while r % p == 0:
            r //= p
        if r != 1:
            raise UsageError(f"q_max must be a power of p={p}, got {q}")
        return q


@dataclass
class EvidenceRow:
    q: int
    check: str
    holds: bool

    def to_dict(self) -> dict:
        return {"q": self.q, "check": self.check, "holds": self.holds}


@dataclass
class Claim:
    """``element in ideal`` (optionally after bracket power / colon) is ``expected``.

    The ideal is given by generator strings; relations of the ring are implied.
    ``kind="degree_criterion"`` claims carry the hypotheses in ``data`` instead.
    """

    element: str
    ideal: list
    expected: bool
    bracket: int = 1
    colon_by: list | None = None
    kind: str = "member"
    data: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "element": self.element, "ideal": list(self.ideal), "expected": self.expected}
        if self.bracket != 1:
            d["bracket"] = self.bracket
        if self.colon_by is not None:
            d["colon_by"] = list(self.colon_by)
        if self.data:
            d["data"] = dict(self.data)
        return d


@dataclass
class ClosureVerdict:
    status: Status
    rule: Rule
    element: str
    ideal: list
    q_max: int
    evidence: list = field(default_factory=list)
    certificate: list = field(default_factory=list)
    caveats: list = field(default_factory=list)
    closure: str = "*"

    @property
    def proved_in(self) -> bool:
        return self.status is Status.PROVED_IN

    @property
    def proved_out(self) -> bool:
        return self.status is Status.PROVED_OUT

    def to_dict(self) -> dict:
        return {
            "closure": self.closure,
            "element": self.element,
            "ideal": list(self.ideal),
            "status": self.status.value,
            "rule": self.rule.value,
            "q_max": self.q_max,
            "evidence": [r.to_dict() for r in self.evidence],
            "certificate": [c.to_dict() for c in self.certificate],
            "caveats": list(self.caveats),
        }


def _gens(a: Ideal) -> list:
    return a.gen_strings()


def _paren(f: Polynomial) -> str:
    return f"({format_poly(f)})"


# ---------------------------------------------------------------------------
# degree criterion

def _diagonal_degree(ring: QuotientRing) -> int | None:
    """k if R = K[x,y,z]/(x^k+y^k+z^k) in the ring's own variables, else None."""
    if len(ring.variables) != 3 or len(ring.relations) != 1:
        return None
    rel = ring.relations[0]
    if len(rel.terms) != 3 or any(c != 1 for _, c in rel.terms):
        return None
    ks = set()
    for e, _ in rel.terms:
        nz = [x for x in e if x]
        if len(nz) != 1:
            return None
        ks.add(nz[0])
    if len(ks) != 1:
        return None
    covered = {next(i for i, x in enumerate(e) if x) for e, _ in rel.terms}
    return ks.pop() if covered == {0, 1, 2} else None


def _pure_power_exponents(a: Ideal) -> list | None:
    """[d_x, d_y, d_z] if the user generators are exactly one pure power of each variable."""
    if len(a.user_gens) != 3:
        return None
    ds = [None, None, None]
    for g in a.user_gens:
        if not g.is_monomial() or g.lead_coeff != 1:
            return None
        e = g.lead_exp
        nz = [i for i, x in enumerate(e) if x]
        if len(nz) != 1 or ds[nz[0]] is not None:
            return None
        ds[nz[0]] = e[nz[0]]
    return ds


def degree_criterion(f: Polynomial, a: Ideal) -> bool:
    """True iff the diagonal-hypersurface degree bound puts f in a*; never raises on shape mismatch."""
    ring = a.ring
    k = _diagonal_degree(ring)
    if k is None:
        return False
    ds = _pure_power_exponents(a)
    if ds is None:
        return False
    if any(d > k for d in ds) or sum(ds) > 2 * k:
        return False
    if k % ring.p == 0:
        return False
    f = ring(f)
    if f.is_zero() or not f.is_homogeneous() or f.degree() < k:
        return False
    return True


# ---------------------------------------------------------------------------
# rule evaluation

@dataclass
class Firing:
    status: Status
    rule: Rule
    certificate: list
    caveats: list = field(default_factory=list)


def _frobenius_qs(p: int, q_max: int) -> list:
    qs, q = [], p
    while q <= q_max:
        qs.append(q)
        q *= p
    return qs


def evaluate_rules(f, a: Ideal, tau: TestIdealInput, cfg: ClosureConfig | None = None,
                   stop_at_first: bool = False):
    """Run every proof rule; returns (firings, evidence rows).

    With ``stop_at_first`` the scan ends at the first rule that fires, in rule order.
    """
    cfg = cfg or ClosureConfig()
    ring = a.ring
    tau_ideal = tau.tau
    if tau_ideal.ring != ring:
        raise UsageError("test ideal lives in a different ring")
    f = ring(f)
    q_max = cfg.resolve_qmax(ring.p)
    firings: list = []
    evidence: list = []
    fs = format_poly(f)

    def done():
        return stop_at_first and firings

    # (1)
    if a.contains(f):
        firings.append(Firing(Status.PROVED_IN, Rule.ALREADY_IN_IDEAL, [Claim(fs, _gens(a), True)]))
    if done():
        return firings, evidence
    # (2)
    if degree_criterion(f, a):
        k = _diagonal_degree(ring)
        claim = Claim(fs, _gens(a), True, kind="degree_criterion",
                      data={"k": k, "exponents": _pure_power_exponents(a), "relation": format_poly(ring.relations[0])})
        firings.append(Firing(Status.PROVED_IN, Rule.DEGREE_CRITERION, [claim], [ALGEBRAICALLY_CLOSED_CAVEAT]))
    if done():
        return firings, evidence
    # (3)
    if cfg.gorenstein_parameter:
        colon = a.colon(tau_ideal)
        holds = colon.contains(f)
        evidence.append(EvidenceRow(1, f"{fs} in I : tau", holds))
        if holds:
            firings.append(Firing(Status.PROVED_IN, Rule.GORENSTEIN_PARAMETER_COLON,
                                  [Claim(fs, _gens(a), True, colon_by=_gens(tau_ideal))],
                                  ["assumes R Gorenstein and I generated by parameters (user flag)"]))
    if done():
        return firings, evidence
    # (4)
    for c in tau_ideal.user_gens:
        cf = c * f
        holds = a.contains(cf)
        evidence.append(EvidenceRow(1, f"{format_poly(c)} * f in I", holds))
        if not holds:
            firings.append(Firing(Status.PROVED_OUT, Rule.TEST_IDEAL_REFUTATION,
                                  [Claim(f"{_paren(c)}*{_paren(f)}", _gens(a), False)]))
            break
    if done():
        return firings, evidence
    # (5)
    rel = ring.relation_ideal
    test_elements = [c for c in tau_ideal.user_gens if not rel.contains(c)]
    refuted = False
    for q in _frobenius_qs(ring.p, q_max):
        aq = a.bracket(q)
        fq = f.frobenius_power(q)
        for c in test_elements:
            holds = aq.contains(c * fq)
            evidence.append(EvidenceRow(q, f"{format_poly(c)} * f^{q} in I^[{q}]", holds))
            if not holds:
                firings.append(Firing(Status.PROVED_OUT, Rule.FROBENIUS_REFUTATION,
                                      [Claim(f"{_paren(c)}*{_paren(f)}^{q}", _gens(a), False, bracket=q)]))
                refuted = True
                break
        if refuted:
            break
    return firings, evidence


def star_member(f, a: Ideal, tau: TestIdealInput, cfg: ClosureConfig | None = None) -> ClosureVerdict:
    """Is f in the tight closure of a?"""
    cfg = cfg or ClosureConfig()
    q_max = cfg.resolve_qmax(a.ring.p)
    f = a.ring(f)
    firings, evidence = evaluate_rules(f, a, tau, cfg, stop_at_first=True)
    if firings:
        fire = firings[0]
        return ClosureVerdict(fire.status, fire.rule, format_poly(f), _gens(a), q_max,
                              evidence, fire.certificate, fire.caveats)
    return ClosureVerdict(Status.UNKNOWN, Rule.EVIDENCE_ONLY, format_poly(f), _gens(a), q_max, evidence)


def starsp_member(f, a: Ideal, tau: TestIdealInput, cfg: ClosureConfig | None = None) -> ClosureVerdict:
    """Is f in the special tight closure of a?

    Proved in when f lies in m*a, or when f is a form in a* of degree larger
    than every minimal generator of the homogeneous ideal a. Proved out only
    through a refutation of f in a*, since the special closure sits inside a*.
    """
    cfg = cfg or ClosureConfig()
    ring = a.ring
    q_max = cfg.resolve_qmax(ring.p)
    f = ring(f)
    fs = format_poly(f)
    m = ring.maximal()
    ma = m * a
    if ma.contains(f):
        return ClosureVerdict(Status.PROVED_IN, Rule.ALREADY_IN_IDEAL, fs, _gens(a), q_max, [],
                              [Claim(fs, _gens(ma), True)], closure="*sp")
    star = star_member(f, a, tau, cfg)
    if star.proved_out:
        return ClosureVerdict(Status.PROVED_OUT, star.rule, fs, _gens(a), q_max, star.evidence,
                              star.certificate, star.caveats, closure="*sp")
    if star.proved_in and f.is_homogeneous() and a.is_homogeneous():
        top = max(g.degree() for g in a.min_gens())
        if f.degree() > top:
            claim = Claim(fs, _gens(a), True, kind="degree_exceeds_generators",
                          data={"degree": f.degree(), "max_generator_degree": top})
            return ClosureVerdict(Status.PROVED_IN, star.rule, fs, _gens(a), q_max, star.evidence,
                                  star.certificate + [claim], star.caveats, closure="*sp")
    evidence = list(star.evidence)
    p = ring.p
    tau_gens = [c for c in tau.tau.user_gens if not ring.relation_ideal.contains(c)]
    for q0 in (p, p * p):
        q = 1
        while q0 * q <= q_max:
            target = m.bracket(q) * a.bracket(q0 * q)
            fq = f.frobenius_power(q)
            for c in tau_gens:
                evidence.append(EvidenceRow(q, f"{format_poly(c)} * f^{q} in m^[{q}] I^[{q0 * q}]",
                                            target.contains(c * fq)))
            q *= p
    return ClosureVerdict(Status.UNKNOWN, Rule.EVIDENCE_ONLY, fs, _gens(a), q_max, evidence,
                          caveats=star.caveats, closure="*sp")


def star_independent(gens, tau: TestIdealInput, cfg: ClosureConfig | None = None, ring: QuotientRing | None = None) -> list:
    """Verdict of f_i in (f_1, ..., f_i^, ..., f_n)* for each i; proved independent iff all are ProvedOut."""
    gens = list(gens)
    if not gens:
        raise UsageError("star_independent needs a nonempty list")
    ring = ring or tau.tau.ring
    out = []
    for i, f in enumerate(gens):
        others = Ideal(ring, gens[:i] + gens[i + 1:])
        out.append(star_member(f, others, tau, cfg))
    return out


# ---------------------------------------------------------------------------
# certificate replay

def replay_claim(claim: Claim | dict, ring: QuotientRing) -> bool:
    """Re-check one claim with ideal operations only."""
    if isinstance(claim, dict):
        claim = Claim(claim["element"], claim["ideal"], claim["expected"], claim.get("bracket", 1),
                      claim.get("colon_by"), claim.get("kind", "member"), claim.get("data", {}))
    parse = ring.poly_ring.parse
    element = parse(claim.element)
    ideal = Ideal(ring, [parse(g) for g in claim.ideal])
    if claim.kind == "member":
        if claim.bracket != 1:
            ideal = ideal.bracket(claim.bracket)
        if claim.colon_by is not None:
            ideal = ideal.colon(Ideal(ring, [parse(g) for g in claim.colon_by]))
        return ideal.contains(element) == claim.expected
    if claim.kind == "degree_criterion":
        k = claim.data["k"]
        x, y, z = ring.gens()
        if ring.relations != (parse(claim.data["relation"]),) or ring.relations[0] != x ** k + y ** k + z ** k:
            return False
        ds = claim.data["exponents"]
        if Ideal(ring, [x ** ds[0], y ** ds[1], z ** ds[2]]).gb.elements != ideal.gb.elements:
            return False
        if any(d > k for d in ds) or sum(ds) > 2 * k or k % ring.p == 0:
            return False
        return element.is_homogeneous() and element.degree() >= k and claim.expected
    if claim.kind == "degree_exceeds_generators":
        if not ideal.is_homogeneous():
            return False
        top = max(g.degree() for g in ideal.min_gens())
        return element.is_homogeneous() and element.degree() > top and claim.expected
    raise UsageError(f"unknown claim kind {claim.kind!r}")


def replay(verdict: ClosureVerdict | dict, ring: QuotientRing) -> bool:
    """True iff every claim of a proved verdict re-verifies (vacuously false for Unknown)."""
    if isinstance(verdict, dict):
        status, certificate = verdict["status"], verdict["certificate"]
    else:
        status, certificate = verdict.status.value, verdict.certificate
    if status == Status.UNKNOWN.value or not certificate:
        return False
    return all(replay_claim(c, ring) for c in certificate)
