"""Ideal calculus in a quotient ring R = S/(F).

Ideals of R are modelled as ideals of the ambient polynomial ring S that
contain the relations F; every algorithm runs in S. Intersections and colons
go through elimination of a tag variable.
"""
from __future__ import annotations

import itertools
from functools import cached_property
from typing import Iterable, Sequence

from .errors import UsageError, UnsupportedError
from .field import PrimeChar
from .groebner import GroebnerBasis, buchberger, eliminate, normal_form
from .polyring import GREVLEX, Polynomial, PolynomialRing, format_poly

TAG = "_t"


class QuotientRing:
    """R = F_p[variables] / (relations)."""

    def __init__(self, variables: Sequence[str], p: int | PrimeChar, relations: Iterable = ()):
        char = p if isinstance(p, PrimeChar) else PrimeChar(p)
        self.poly_ring = PolynomialRing(tuple(variables), char, GREVLEX)
        rels = []
        for r in relations:
            r = self.poly_ring(r)
            if r.is_zero():
                raise UsageError("relations must be nonzero")
            rels.append(r)
        self.relations = tuple(rels)
        if TAG in self.poly_ring.variables:
            raise UsageError(f"variable name {TAG!r} is reserved")

    @property
    def variables(self) -> tuple:
        return self.poly_ring.variables

    @property
    def char(self) -> PrimeChar:
        return self.poly_ring.char

    @property
    def p(self) -> int:
        return self.poly_ring.p

    def __call__(self, x) -> Polynomial:
        return self.poly_ring(x)

    def gens(self) -> list:
        return self.poly_ring.gens()

    def ideal(self, *gens) -> "Ideal":
        if len(gens) == 1 and isinstance(gens[0], (list, tuple)):
            gens = gens[0]
        return Ideal(self, gens)

    def maximal(self) -> "Ideal":
        return Ideal(self, self.gens())

    def unit(self) -> "Ideal":
        return Ideal(self, [self.poly_ring.one()])

    def zero(self) -> "Ideal":
        return Ideal(self, [])

    @cached_property
    def relation_ideal(self) -> "Ideal":
        return Ideal(self, [])

    def is_homogeneous(self) -> bool:
        return all(r.is_homogeneous() for r in self.relations)

    def __eq__(self, other):
        if not isinstance(other, QuotientRing):
            return NotImplemented
        return self.poly_ring == other.poly_ring and self.relations == other.relations

    def __hash__(self):
        return hash((self.poly_ring, self.relations))

    def __str__(self):
        base = str(self.poly_ring)
        if self.relations:
            base += " / (" + ", ".join(map(format_poly, self.relations)) + ")"
        return base

    def to_dict(self) -> dict:
        return {
            "characteristic": self.p,
            "variables": list(self.variables),
            "relations": [format_poly(r) for r in self.relations],
        }


class Ideal:
    """An ideal of a :class:`QuotientRing`, given by user generators.

    The reduced Gröbner basis of ``user_gens + relations`` is computed on
    first use and cached; it is the canonical form used for equality.
    """

    def __init__(self, ring: QuotientRing, gens: Iterable = (), gb: GroebnerBasis | None = None):
        self.ring = ring
        self.user_gens = tuple(g for g in (ring(g) for g in gens) if not g.is_zero())
        self._gb = gb

    @property
    def ambient_gens(self) -> tuple:
        return self.user_gens + self.ring.relations

    @property
    def gb(self) -> GroebnerBasis:
        # write-once; a concurrent duplicate computation yields the same basis
        if self._gb is None:
            self._gb = buchberger(self.ambient_gens, GREVLEX)
        return self._gb

    def _same_ring(self, other: "Ideal"):
        if not isinstance(other, Ideal):
            raise UsageError(f"expected an ideal, got {type(other).__name__}")
        if other.ring is not self.ring and other.ring != self.ring:
            raise UsageError("ideals belong to different rings")

    # predicates -----------------------------------------------------------
    def reduce(self, f) -> Polynomial:
        return normal_form(self.ring(f), self.gb)

    def contains(self, other) -> bool:
        if isinstance(other, Ideal):
            self._same_ring(other)
            return all(self.reduce(g).is_zero() for g in other.user_gens)
        return self.reduce(other).is_zero()

    __contains__ = contains

    def is_unit(self) -> bool:
        return self.gb.contains_one()

    def is_zero(self) -> bool:
        """True iff the ideal is zero in R (all generators lie in the relations)."""
        rel = self.ring.relation_ideal
        return all(rel.reduce(g).is_zero() for g in self.user_gens)

    def is_homogeneous(self) -> bool:
        return all(g.is_homogeneous() for g in self.user_gens) and self.ring.is_homogeneous()

    def equals(self, other: "Ideal") -> bool:
        self._same_ring(other)
        return self.gb.elements == other.gb.elements

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        return self.equals(other)

    def __le__(self, other: "Ideal") -> bool:
        return other.contains(self)

    def __hash__(self):
        return hash((self.ring, self.gb.elements))

    # constructions --------------------------------------------------------
    def __add__(self, other: "Ideal") -> "Ideal":
        self._same_ring(other)
        return Ideal(self.ring, self.user_gens + other.user_gens)

    def __mul__(self, other: "Ideal") -> "Ideal":
        self._same_ring(other)
        a, b = self.trimmed(), other.trimmed()
        return Ideal(self.ring, [f * g for f in a.user_gens for g in b.user_gens]).trimmed()

    def __pow__(self, n: int) -> "Ideal":
        if not isinstance(n, int) or n < 0:
            raise UsageError(f"ideal power needs a non-negative integer, got {n!r}")
        result = self.ring.unit()
        for _ in range(n):
            result = result * self
        return result

    def bracket(self, q: int) -> "Ideal":
        """Frobenius power: generated by the q-th powers of the user generators, relations kept as is."""
        self.ring.char.exponent(q)
        if q == 1:
            return self
        return Ideal(self.ring, [g.frobenius_power(q) for g in self.user_gens])

    def __and__(self, other: "Ideal") -> "Ideal":
        self._same_ring(other)
        gens = _ambient_intersection(self.ambient_gens, other.ambient_gens, self.ring.poly_ring)
        return Ideal(self.ring, gens).trimmed()

    intersect = __and__

    def colon(self, other) -> "Ideal":
        """(self : other); by an element or by an ideal (intersection of the element colons)."""
        if isinstance(other, Ideal):
            self._same_ring(other)
            if not other.user_gens:
                raise UsageError("colon by the zero ideal (no nonzero generators)")
            result = None
            for g in other.user_gens:
                c = self.colon(g)
                result = c if result is None else result & c
            return result
        g = self.ring(other)
        if self.ring.relation_ideal.reduce(g).is_zero() or self.contains(g):
            return self.ring.unit()
        principal = [g]
        gens = _ambient_intersection(self.ambient_gens, principal, self.ring.poly_ring)
        return Ideal(self.ring, [h.exact_div(g) for h in gens]).trimmed()

    def trimmed(self) -> "Ideal":
        """Same ideal with redundant generators dropped (those in the relations, duplicates, and,
        for homogeneous ideals, non-minimal ones)."""
        if self.is_homogeneous() and self.user_gens:
            gens = graded_min_gens(self)
        else:
            rel = self.ring.relation_ideal
            gens, seen = [], set()
            for g in self.user_gens:
                g = g.monic()
                if g in seen or rel.reduce(g).is_zero():
                    continue
                seen.add(g)
                gens.append(g)
        return Ideal(self.ring, gens, self._gb)

    def min_gens(self) -> list:
        return graded_min_gens(self)

    # display --------------------------------------------------------------
    def gb_strings(self) -> list:
        return [format_poly(g) for g in self.gb.elements]

    def gen_strings(self) -> list:
        return [format_poly(g) for g in self.user_gens]

    def __str__(self):
        return "(" + ", ".join(self.gen_strings()) + ")"

    def __repr__(self):
        return f"Ideal{self}"


    # localization at the origin -------------------------------------------
    def saturate(self, other: "Ideal") -> "Ideal":
        """self : other^infinity, by iterated colons."""
        current = self
        while True:
            nxt = current.colon(other)
            if nxt.equals(current):
                return current
            current = nxt

    def has_unit_at_origin(self) -> bool:
        """True iff the ideal is not contained in m = (all variables)."""
        return not self.ring.maximal().contains(self)

    def local_contains(self, other) -> bool:
        """Containment after localizing at the origin: other_m <= self_m iff (self : other) is not in m."""
        if isinstance(other, Ideal):
            self._same_ring(other)
            if not other.user_gens:
                return True
            return self.colon(other).has_unit_at_origin()
        f = self.ring(other)
        if f.is_zero():
            return True
        return self.colon(f).has_unit_at_origin()

    def local_equals(self, other: "Ideal") -> bool:
        return self.local_contains(other) and other.local_contains(self)

    def is_quasi_homogeneous(self, max_weight: int = 8) -> tuple | None:
        """A positive weight vector making the reduced basis homogeneous, or None."""
        return quasi_homogeneous_weights(list(self.gb.elements), self.ring.poly_ring.nvars, max_weight)

    def localize(self, max_power: int | None = None) -> "Ideal":
        """The contraction of the localization at the origin back to the ring.

        Quasi-homogeneous ideals are returned unchanged (all their associated
        primes lie in m). Otherwise the ideal must be primary to m at the
        origin, and then it localizes to self + m^N for the first N with
        self + m^N = self + m^(N+1) (Nakayama puts m^N inside the localization).
        """
        if self.is_unit() or self.is_quasi_homogeneous() is not None:
            return self
        from .groebner import limits

        max_power = max_power or limits.max_degree
        previous = None
        for n in range(1, max_power + 1):
            current = self + monomial_power(self.ring, n)
            if previous is not None and current.equals(previous):
                return previous
            previous = current
        raise UnsupportedError("localize: ideal is neither quasi-homogeneous nor m-primary at the origin "
                               f"(no stable m-power up to {max_power})")


def monomial_power(ring: QuotientRing, n: int) -> Ideal:
    """m^n, generated by all monomials of degree n."""
    nv = ring.poly_ring.nvars
    gens = []
    for combo in itertools.combinations_with_replacement(range(nv), n):
        e = [0] * nv
        for i in combo:
            e[i] += 1
        gens.append(ring.poly_ring.monomial(tuple(e)))
    return Ideal(ring, gens)


def quasi_homogeneous_weights(polys: Sequence[Polynomial], nvars: int, max_weight: int = 8) -> tuple | None:
    """Smallest positive integer weights (lexicographic search) under which every poly is homogeneous."""
    diffs = set()
    for f in polys:
        base = f.terms[0][0] if f.terms else None
        for e, _ in f.terms[1:]:
            diffs.add(tuple(x - y for x, y in zip(e, base)))
    if not diffs:
        return (1,) * nvars
    if all(sum(d) == 0 for d in diffs):
        return (1,) * nvars
    for w in itertools.product(range(1, max_weight + 1), repeat=nvars):
        if all(sum(a * b for a, b in zip(w, d)) == 0 for d in diffs):
            return w
    return None


def _ambient_intersection(a: Sequence[Polynomial], b: Sequence[Polynomial], ring: PolynomialRing) -> list:
    """Generators of (a) ∩ (b) in the ambient ring, by eliminating t from t·a + (1-t)·b."""
    a = [f for f in a if not f.is_zero()]
    b = [f for f in b if not f.is_zero()]
    if not a or not b:
        return []
    ext = ring.extended([TAG])
    t = ext.gen(0)
    one_minus_t = ext.one() - t
    gens = [t * f.embed(ext, offset=1) for f in a] + [one_minus_t * f.embed(ext, offset=1) for f in b]
    return [g.embed(ring, offset=0) for g in eliminate(gens, 1)]


def graded_min_gens(a: Ideal) -> list:
    """Minimal homogeneous generators of ``a`` in R, chosen degree by degree.

    In degree d a candidate is redundant iff its normal form modulo the ideal
    of the relations and the kept lower-degree generators lies in the F_p-span
    of the normal forms of the kept degree-d generators.
    """
    if not a.is_homogeneous():
        raise UnsupportedError("graded_min_gens needs homogeneous generators and relations")
    ring = a.ring
    p = ring.p
    key = ring.poly_ring.key
    by_degree: dict = {}
    for g in a.user_gens:
        by_degree.setdefault(g.degree(), []).append(g.monic())
    chosen: list = []
    for d in sorted(by_degree):
        lower = Ideal(ring, chosen)
        pivots: list = []  # (pivot monomial, row dict) with pivot coefficient 1
        cands = sorted(dict.fromkeys(by_degree[d]), key=lambda g: [key(e) for e in g.support()], reverse=True)
        for g in cands:
            row = lower.reduce(g).as_dict()
            for pe, prow in pivots:
                c = row.get(pe)
                if c:
                    for e, v in prow.items():
                        w = (row.get(e, 0) - c * v) % p
                        if w:
                            row[e] = w
                        else:
                            row.pop(e, None)
            if not row:
                continue
            pe = max(row, key=key)
            inv = pow(row[pe], p - 2, p)
            row = {e: v * inv % p for e, v in row.items()}
            for i, (qe, qrow) in enumerate(pivots):
                c = qrow.get(pe)
                if c:
                    for e, v in row.items():
                        w = (qrow.get(e, 0) - c * v) % p
                        if w:
                            qrow[e] = w
                        else:
                            qrow.pop(e, None)
            pivots.append((pe, row))
            chosen.append(g)
    return chosen


# functional aliases ---------------------------------------------------------

def ideal_sum(a: Ideal, b: Ideal) -> Ideal:
    return a + b


def ideal_product(a: Ideal, b: Ideal) -> Ideal:
    return a * b


def bracket_power(a: Ideal, q: int) -> Ideal:
    return a.bracket(q)


def ideal_intersect(a: Ideal, b: Ideal) -> Ideal:
    return a & b


def ideal_colon(a: Ideal, b) -> Ideal:
    return a.colon(b)


def ideal_contains(a: Ideal, x) -> bool:
    return a.contains(x)


def ideal_equal(a: Ideal, b: Ideal) -> bool:
    return a.equals(b)


def ideal_power(a: Ideal, n: int) -> Ideal:
    return a ** n


def intersect_all(ideals: Sequence[Ideal]) -> Ideal:
    if not ideals:
        raise UsageError("intersection of an empty family")
    result = ideals[0]
    for b in ideals[1:]:
        result = result & b
    return result
