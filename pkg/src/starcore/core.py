"""*-core machinery: criteria checks, the core bracket, reduction families, Frobenius scaling.

The true *-core is an infinite intersection and is never claimed outright.
What is computed is a bracket

    tau*I  <=  *-core(I)  <=  J ∩ (∩_{i,j} J_{i,j})

together with the candidate J(J:I); the criteria report says whether the
containments that collapse the bracket onto J(J:I) hold.

Rings are local in the theory and affine here. Every containment below is
checked after localizing at the origin, which for (quasi-)homogeneous data is
the same as the plain affine check; the finite intersection is reported as
the contraction of its localization.
"""
from __future__ import annotations

import enum
import itertools
import logging
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from .closure import ClosureConfig, ClosureVerdict, Status, TestIdealInput, starsp_member
from .errors import ResourceError, ScenarioAssertionError, UsageError
from .ideals import Ideal, QuotientRing, intersect_all
from .polyring import Polynomial, format_poly

log = logging.getLogger(__name__)

SPECIAL_CLOSURE_LABEL = "relative to certified *sp generators"


class Conclusion(str, enum.Enum):
    CONFIRMED = "ConfirmedFormula"
    UPPER = "UpperBoundOnly"
    LOWER = "LowerBoundOnly"
    INCONCLUSIVE = "Inconclusive"


def contained(small: Ideal, big: Ideal) -> bool:
    """small <= big after localizing at the origin."""
    if big.is_quasi_homogeneous() is not None:
        return big.contains(small)
    return big.local_contains(small)


def local_equal(a: Ideal, b: Ideal) -> bool:
    return contained(a, b) and contained(b, a)


def _first_missing(small: Ideal, big: Ideal) -> str | None:
    for g in small.user_gens:
        if not contained(Ideal(small.ring, [g]), big):
            return format_poly(g)
    return None


@dataclass
class StarReductionInput:
    """J = (f_1..f_n), I = J + (u_1..u_s) with u_j certified (or evidenced) in J^{*sp}."""

    ring: QuotientRing
    J_gens: tuple
    U_gens: tuple
    tau: TestIdealInput
    cfg: ClosureConfig = field(default_factory=ClosureConfig)
    u_verdicts: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @classmethod
    def build(cls, ring: QuotientRing, J_gens: Sequence, U_gens: Sequence, tau: TestIdealInput,
              cfg: ClosureConfig | None = None, certify: bool = True, notes: Sequence[str] = ()) -> "StarReductionInput":
        cfg = cfg or ClosureConfig()
        J_gens = [ring(f) for f in J_gens]
        U_gens = [ring(u) for u in U_gens]
        if not J_gens:
            raise UsageError("J needs at least one generator")
        J = Ideal(ring, J_gens)
        if J.is_homogeneous():
            minimal = J.min_gens()
            if len(minimal) != len(J_gens):
                J_gens = minimal
        inp = cls(ring, tuple(J_gens), tuple(U_gens), tau, cfg, notes=list(notes))
        if certify:
            for u in U_gens:
                v = starsp_member(u, inp.J, tau, cfg)
                if v.status is Status.PROVED_OUT:
                    raise UsageError(f"{format_poly(u)} is provably not in the special tight closure of J ({v.rule.value})")
                if v.status is Status.UNKNOWN:
                    msg = f"{format_poly(u)} in J^*sp is not certified; proceeding on evidence only"
                    log.warning(msg)
                    inp.warnings.append(msg)
                inp.u_verdicts.append(v)
        return inp

    @cached_property
    def J(self) -> Ideal:
        return Ideal(self.ring, self.J_gens)

    @cached_property
    def U(self) -> Ideal:
        return Ideal(self.ring, self.U_gens)

    @cached_property
    def I(self) -> Ideal:
        return Ideal(self.ring, self.J_gens + self.U_gens)

    @cached_property
    def m(self) -> Ideal:
        return self.ring.maximal()

    @cached_property
    def colon(self) -> Ideal:
        """(J : I)."""
        if not self.U_gens:
            return self.ring.unit()
        return self.J.colon(self.I)

    @cached_property
    def formula(self) -> Ideal:
        return self.J * self.colon

    @property
    def n(self) -> int:
        return len(self.J_gens)

    @property
    def s(self) -> int:
        return len(self.U_gens)

    def scaled(self, q: int) -> "StarReductionInput":
        """Frobenius image: f_i^q, u_j^q; closure verdicts are inherited (u in J^*sp gives u^q in (J^[q])^*sp)."""
        self.ring.char.exponent(q)
        if q == 1:
            return self
        note = f"Frobenius image q={q}; u-verdicts inherited from q=1"
        return StarReductionInput(self.ring, tuple(f.frobenius_power(q) for f in self.J_gens),
                                  tuple(u.frobenius_power(q) for u in self.U_gens), self.tau, self.cfg,
                                  list(self.u_verdicts), list(self.warnings), self.notes + [note])

    def to_dict(self) -> dict:
        return {
            "J": [format_poly(f) for f in self.J_gens],
            "U": [format_poly(u) for u in self.U_gens],
            "tau": self.tau.tau.gen_strings(),
            "tau_provenance": self.tau.provenance,
            "u_verdicts": [v.to_dict() for v in self.u_verdicts],
            "warnings": list(self.warnings),
            "notes": list(self.notes),
        }


@dataclass
class CriteriaReport:
    hypothesis_a1: list
    hypothesis_a2: list
    hypothesis_b: list
    conclusion: Conclusion
    witnesses: dict = field(default_factory=dict)
    colon: list = field(default_factory=list)

    @property
    def confirmed(self) -> bool:
        return self.conclusion is Conclusion.CONFIRMED

    def to_dict(self) -> dict:
        return {
            "hypothesis_a1": list(self.hypothesis_a1),
            "hypothesis_a2": list(self.hypothesis_a2),
            "hypothesis_b": list(self.hypothesis_b),
            "conclusion": self.conclusion.value,
            "witnesses": dict(self.witnesses),
            "colon_J_I": list(self.colon),
        }


def check_criteria(inp: StarReductionInput) -> CriteriaReport:
    """Decide the hypotheses of the *-core criteria by exact containments.

    a1: (f_1..f_i^..f_n) : f_i <= (J:I) for every i
    a2: u_j (J:u_j) <= J(J:I) for every j
    b:  u_j (J:I) <= m J(J:I) for every j

    a1 and a2 bound the *-core above by J(J:I), b bounds it below.
    """
    ring = inp.ring
    JI = inp.colon
    JJI = inp.formula
    mJJI = inp.m * JJI
    witnesses: dict = {}
    a1 = []
    for i, f in enumerate(inp.J_gens):
        others = Ideal(ring, inp.J_gens[:i] + inp.J_gens[i + 1:])
        c = others.colon(f)
        ok = contained(c, JI)
        a1.append(ok)
        if not ok:
            witnesses[f"a1[{i}]"] = _first_missing(c, JI)
    a2, b = [], []
    for j, u in enumerate(inp.U_gens):
        lhs = Ideal(ring, [u]) * inp.J.colon(u)
        ok = contained(lhs, JJI)
        a2.append(ok)
        if not ok:
            witnesses[f"a2[{j}]"] = _first_missing(lhs, JJI)
        lhs = Ideal(ring, [u]) * JI
        ok = contained(lhs, mJJI)
        b.append(ok)
        if not ok:
            witnesses[f"b[{j}]"] = _first_missing(lhs, mJJI)
    upper = all(a1) and all(a2)
    lower = all(b)
    if upper and lower:
        conclusion = Conclusion.CONFIRMED
    elif upper:
        conclusion = Conclusion.UPPER
    elif lower:
        conclusion = Conclusion.LOWER
    else:
        conclusion = Conclusion.INCONCLUSIVE
    return CriteriaReport(a1, a2, b, conclusion, witnesses, JI.gb_strings())


def reduction_family(inp: StarReductionInput, coeff_box: str = "canonical", cap: int = 10_000) -> list:
    """Minimal *-reductions of the shape (f_1 + v_1, ..., f_n + v_n), v_i in (U).

    ``canonical`` gives J and the n*s ideals J_{i,j} (u_j added to f_i), ordered by (i, j);
    ``full_field`` gives every f_i + sum_j a_ij u_j with a_ij in F_p.
    """
    ring = inp.ring
    if coeff_box == "canonical":
        family = [inp.J]
        for i in range(inp.n):
            for u in inp.U_gens:
                gens = list(inp.J_gens)
                gens[i] = gens[i] + u
                family.append(Ideal(ring, gens))
        return family
    if coeff_box != "full_field":
        raise UsageError(f"unknown coefficient box {coeff_box!r}")
    count = ring.p ** (inp.n * inp.s)
    if count > cap:
        raise ResourceError(f"full-field family has {count} members, above the cap {cap}")
    family = []
    for coeffs in itertools.product(range(ring.p), repeat=inp.n * inp.s):
        gens = []
        for i, f in enumerate(inp.J_gens):
            g = f
            for j, u in enumerate(inp.U_gens):
                g = g + u.scale(coeffs[i * inp.s + j])
            gens.append(g)
        family.append(Ideal(ring, gens))
    return family


@dataclass
class CoreBracket:
    lower: Ideal
    formula: Ideal
    alt_formula: Ideal
    finite_intersection: Ideal
    affine_intersection: Ideal
    checks: dict

    def to_dict(self) -> dict:
        return {
            "lower": self.lower.gb_strings(),
            "formula": self.formula.gb_strings(),
            "alt_formula": self.alt_formula.gb_strings(),
            "finite_intersection": self.finite_intersection.gb_strings(),
            "affine_intersection_is_local": self.affine_intersection.equals(self.finite_intersection),
            "checks": dict(self.checks),
        }


def core_bracket(inp: StarReductionInput, criteria: CriteriaReport | None = None, strict: bool = True) -> CoreBracket:
    """Compute tau*I, J(J:I), I(J:I) and the finite intersection of the canonical family.

    With ``strict`` a failed sandwich (tau*I not in the intersection) or, under
    confirmed criteria, unequal upper members raise ScenarioAssertionError.
    """
    criteria = criteria or check_criteria(inp)
    lower = inp.tau.tau * inp.I
    formula = inp.formula
    alt = inp.I * inp.colon
    affine = intersect_all(reduction_family(inp, "canonical"))
    fi = affine.localize()
    checks = {
        "lower_in_finite_intersection": fi.contains(lower),
        "lower_in_formula": contained(lower, formula),
        "formula_eq_alt_formula": formula.equals(alt),
        "formula_eq_finite_intersection": formula.equals(fi),
        "formula_in_finite_intersection": fi.contains(formula),
    }
    bracket = CoreBracket(lower, formula, alt, fi, affine, checks)
    if strict:
        if not checks["lower_in_finite_intersection"]:
            raise ScenarioAssertionError("tau*I is not contained in the finite intersection of minimal *-reductions")
        if criteria.confirmed and not (checks["formula_eq_alt_formula"] and checks["formula_eq_finite_intersection"]):
            raise ScenarioAssertionError("criteria confirmed but J(J:I), I(J:I) and the finite intersection differ")
    return bracket


def reduction_number_one(inp: StarReductionInput) -> bool:
    """I^2 = J I."""
    return (inp.I ** 2).equals(inp.J * inp.I)


def tau_lower_bound_members(inp: StarReductionInput) -> list:
    """tau*I <= K (locally) for each K of the canonical family, in family order."""
    lower = inp.tau.tau * inp.I
    return [contained(lower, K) for K in reduction_family(inp, "canonical")]


def tau_lower_bound_check(inp: StarReductionInput) -> bool:
    return all(tau_lower_bound_members(inp))


def chain_conditions(inp: StarReductionInput, K: Ideal) -> dict:
    """Decidable stand-ins for the minimal *-reduction characterization.

    I^{*sp} is replaced by the certified part (U): checks (U) ∩ K <= m I and I = (U) + K.
    """
    if not K.user_gens:
        raise UsageError("K has no generators")
    if not contained(K, inp.I):
        raise UsageError("chain_conditions: K is not contained in I")
    k_gens = K.min_gens() if K.is_homogeneous() else K.trimmed().user_gens
    if len(k_gens) != inp.n:
        raise UsageError(f"chain_conditions: K has {len(k_gens)} generators, expected n={inp.n}")
    UK = inp.U & K if inp.U_gens else Ideal(inp.ring, [])
    return {
        "label": SPECIAL_CLOSURE_LABEL,
        "sp_cap_K_in_mI": contained(UK, inp.m * inp.I),
        "I_eq_sp_plus_K": local_equal(inp.I, inp.U + K),
    }


def special_conditions(inp: StarReductionInput, q: int) -> tuple:
    """For the Frobenius image at q: (a) per i and (b) per k as booleans.

    (a) (f_1^q..f_i^q^..f_n^q) : f_i^q <= tau
    (b) u_k^q (J^[q] : u_k^q) <= m tau J^[q]
    """
    ring = inp.ring
    tau = inp.tau.tau
    Fq = [f.frobenius_power(q) for f in inp.J_gens]
    Jq = Ideal(ring, Fq)
    a = []
    for i, fq in enumerate(Fq):
        others = Ideal(ring, Fq[:i] + Fq[i + 1:])
        a.append(contained(others.colon(fq), tau))
    target = inp.m * tau * Jq
    b = []
    for u in inp.U_gens:
        uq = u.frobenius_power(q)
        b.append(contained(Ideal(ring, [uq]) * Jq.colon(uq), target))
    return a, b


@dataclass
class ScalingRow:
    e: int
    q: int
    special_a: list
    special_b: list
    criteria: CriteriaReport
    bracket: CoreBracket

    def to_dict(self) -> dict:
        return {
            "e": self.e,
            "q": self.q,
            "special_a": list(self.special_a),
            "special_b": list(self.special_b),
            "criteria": self.criteria.to_dict(),
            "bracket": self.bracket.to_dict(),
        }


@dataclass
class ScalingResult:
    rows: list
    threshold: int | None

    def to_dict(self) -> dict:
        return {"rows": [r.to_dict() for r in self.rows], "confirmed_from_e": self.threshold}


def frobenius_scaling(inp: StarReductionInput, e_list: Sequence[int]) -> ScalingResult:
    """Re-run the criteria and the bracket on (J^[q], I^[q]) for q = p^e, e in e_list.

    e = 0 reproduces the unscaled run. The threshold is the least tested e
    from which every tested row is ConfirmedFormula; nothing is claimed
    beyond the tested exponents.
    """
    rows = []
    for e in sorted(set(e_list)):
        if e < 0:
            raise UsageError("Frobenius exponents must be non-negative")
        q = inp.ring.p ** e
        scaled = inp.scaled(q)
        a, b = special_conditions(inp, q)
        crit = check_criteria(scaled)
        rows.append(ScalingRow(e, q, a, b, crit, core_bracket(scaled, crit)))
    threshold = None
    for row in reversed(rows):
        if not row.criteria.confirmed:
            break
        threshold = row.e
    return ScalingResult(rows, threshold)


def mainsop_input(ring: QuotientRing, params: Sequence, t: int, u_primes: Sequence, tau: TestIdealInput,
                  cfg: ClosureConfig | None = None) -> tuple:
    """J = (x_1^t, x_2^t, x_3, ..., x_d) and u_j = (x_1 x_2)^(t-1) u'_j.

    Returns (input, hypotheses) where hypotheses records x_1, x_2 in tau and t >= 2.
    """
    params = [ring(x) for x in params]
    if len(params) < 2:
        raise UsageError("need at least two parameters")
    if t < 2:
        raise UsageError("t must be at least 2")
    x1, x2 = params[0], params[1]
    J_gens = [x1 ** t, x2 ** t] + params[2:]
    U_gens = [(x1 * x2) ** (t - 1) * ring(v) for v in u_primes]
    hyp = {
        "x1_in_tau": tau.tau.contains(x1),
        "x2_in_tau": tau.tau.contains(x2),
        "t_at_least_2": t >= 2,
    }
    inp = StarReductionInput.build(ring, J_gens, U_gens, tau, cfg,
                                   notes=[f"parameter ideal instance with t={t}"])
    return inp, hyp


def reduction_number_experiment(trials: int = 20, seed: int = 0, p: int = 7, degrees: Sequence[int] = (3, 4, 5)) -> list:
    """Random J = (x^a, y^b, z^c) <= I = J + (u) on diagonal hypersurfaces, u certified by the degree criterion.

    Logs whether I^2 = J I in each trial; asserts nothing.
    """
    from .closure import degree_criterion

    rng = random.Random(seed)
    results = []
    while len(results) < trials:
        k = rng.choice([d for d in degrees if d % p])
        ring = QuotientRing("xyz", p, [f"x^{k}+y^{k}+z^{k}"])
        ds = [rng.randint(1, k) for _ in range(3)]
        if sum(ds) > 2 * k:
            continue
        x, y, z = ring.gens()
        J = [x ** ds[0], y ** ds[1], z ** ds[2]]
        deg = rng.randint(k, k + 2)
        a = rng.randint(0, deg)
        b = rng.randint(0, deg - a)
        u = x ** a * y ** b * z ** (deg - a - b)
        Jid = Ideal(ring, J)
        if Jid.contains(u) or not degree_criterion(u, Jid):
            continue
        tau = TestIdealInput(ring.maximal(), "unused: experiment needs no test elements")
        inp = StarReductionInput(ring, tuple(J), (u,), tau)
        r1 = reduction_number_one(inp)
        log.info("k=%d J=%s u=%s r_J(I)=1: %s", k, ds, format_poly(u), r1)
        results.append({"k": k, "exponents": ds, "u": format_poly(u), "reduction_number_one": r1})
    return results


def verdict_summary(v: ClosureVerdict) -> str:
    return f"{v.status.value} ({v.rule.value})"


def poly_list(polys: Sequence[Polynomial]) -> list:
    return [format_poly(f) for f in polys]
