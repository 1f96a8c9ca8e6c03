"""Buchberger's algorithm, normal forms and elimination.

Pairs are processed by the normal selection strategy (smallest lcm degree,
ties broken by basis index) with Buchberger's coprime and chain criteria.
"""
from __future__ import annotations

import heapq
import os
from dataclasses import dataclass
from typing import Sequence

from .errors import ResourceError, UsageError
from .polyring import (
    MonomialOrder,
    Polynomial,
    PolynomialRing,
    mono_coprime,
    mono_div,
    mono_divides,
    mono_lcm,
)


@dataclass
class Limits:
    max_basis: int = 10_000
    max_degree: int = 512


def _default_limits() -> Limits:
    limits = Limits()
    env = os.environ.get("STARCORE_MAX_DEGREE")
    if env:
        limits.max_degree = int(env)
    return limits


limits = _default_limits()


@dataclass(frozen=True)
class GroebnerBasis:
    order: MonomialOrder
    elements: tuple
    reduced: bool = True

    @property
    def ring(self) -> PolynomialRing | None:
        return self.elements[0].ring if self.elements else None

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def lead_exps(self) -> list:
        return [g.lead_exp for g in self.elements]

    def contains_one(self) -> bool:
        return any(not any(g.lead_exp) for g in self.elements)


def _reduce_terms(terms, basis, ring: PolynomialRing, full: bool = True) -> dict:
    """Remainder of ``terms`` modulo ``basis`` (monic polynomials), as a dict.

    With ``full=False`` only the leading term is reduced (top reduction).
    """
    p = ring.p
    key = ring.order.key
    f = dict(terms)
    exps = {}
    heap = []
    for e in f:
        k = key(e)
        exps[k] = e
        heap.append(-k)
    heapq.heapify(heap)
    leads = [(g.lead_exp, g.terms) for g in basis]
    rem = {}
    while heap:
        k = -heapq.heappop(heap)
        e = exps[k]
        c = f.pop(e, 0)
        if not c:
            continue
        for le, gterms in leads:
            if mono_divides(le, e):
                m = mono_div(e, le)
                for ge, gc in gterms[1:]:
                    ne = tuple(x + y for x, y in zip(ge, m))
                    old = f.get(ne)
                    v = ((old or 0) - c * gc) % p
                    if v:
                        f[ne] = v
                        if old is None:
                            nk = key(ne)
                            exps[nk] = ne
                            heapq.heappush(heap, -nk)
                    elif old is not None:
                        del f[ne]
                break
        else:
            rem[e] = c
            if not full:
                rem.update(f)
                break
    return rem


def normal_form(f: Polynomial, gb: GroebnerBasis) -> Polynomial:
    """Complete remainder of f modulo a Gröbner basis; zero iff f is in the ideal."""
    if gb.elements and (f.ring != gb.elements[0].ring):
        raise UsageError(f"normal_form: polynomial ring/order {f.ring} ({f.ring.order}) "
                         f"does not match basis order {gb.order}")
    if f.ring.order != gb.order:
        raise UsageError(f"normal_form: order mismatch {f.ring.order} vs {gb.order}")
    if not gb.elements:
        return f
    return f.ring.from_dict(_reduce_terms(f.terms, gb.elements, f.ring))


def _check_caps(g: Polynomial, size: int):
    if size > limits.max_basis:
        raise ResourceError(f"Gröbner basis exceeded {limits.max_basis} elements")
    d = g.degree()
    if d > limits.max_degree:
        raise ResourceError(f"Gröbner basis element of degree {d} exceeds the degree cap {limits.max_degree}")


def _s_poly(f: Polynomial, g: Polynomial) -> Polynomial:
    lf, lg = f.lead_exp, g.lead_exp
    lcm = mono_lcm(lf, lg)
    # f and g are monic, so the leading terms cancel exactly
    return f.shift(mono_div(lcm, lf)) - g.shift(mono_div(lcm, lg))


def buchberger(gens: Sequence[Polynomial], order: MonomialOrder | None = None) -> GroebnerBasis:
    """Reduced Gröbner basis of the ideal generated by ``gens``.

    ``order`` defaults to the generators' ring order; if it differs the
    generators are re-sorted into a ring with that order.
    """
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return GroebnerBasis(order or MonomialOrder(), (), True)
    ring = gens[0].ring
    for g in gens:
        if g.ring.variables != ring.variables or g.ring.p != ring.p:
            raise UsageError("buchberger: generators live in different rings")
    if order is not None and order != ring.order:
        ring = ring.with_order(order)
    gens = [ring.from_dict(g.as_dict()) if g.ring != ring else g for g in gens]
    order = ring.order

    basis: list = []
    pairs: set = set()
    queue: list = []

    def add(h: Polynomial):
        h = h.monic()
        _check_caps(h, len(basis) + 1)
        k = len(basis)
        lh = h.lead_exp
        basis.append(h)
        for i in range(k):
            li = basis[i].lead_exp
            lcm = mono_lcm(li, lh)
            pairs.add((i, k))
            heapq.heappush(queue, (sum(lcm), k, i))

    for g in gens:
        r = ring.from_dict(_reduce_terms(g.terms, basis, ring))
        if not r.is_zero():
            add(r)
    while queue:
        _, j, i = heapq.heappop(queue)
        if (i, j) not in pairs:
            continue
        pairs.discard((i, j))
        fi, fj = basis[i], basis[j]
        li, lj = fi.lead_exp, fj.lead_exp
        if mono_coprime(li, lj):
            continue
        lcm = mono_lcm(li, lj)
        if _chain_criterion(i, j, lcm, basis, pairs):
            continue
        h = _s_poly(fi, fj)
        r = ring.from_dict(_reduce_terms(h.terms, basis, ring))
        if not r.is_zero():
            add(r)
    return GroebnerBasis(order, tuple(_interreduce(basis, ring)), True)


def _chain_criterion(i, j, lcm, basis, pairs) -> bool:
    """Skip (i, j) if some k has lm_k | lcm and both (i, k), (j, k) were already treated."""
    for k, g in enumerate(basis):
        if k == i or k == j:
            continue
        if not mono_divides(g.lead_exp, lcm):
            continue
        if (min(i, k), max(i, k)) in pairs or (min(j, k), max(j, k)) in pairs:
            continue
        return True
    return False


def _interreduce(basis: list, ring: PolynomialRing) -> list:
    # drop elements whose leading monomial is divisible by another's
    key = ring.order.key
    polys = sorted(basis, key=lambda g: key(g.lead_exp))
    minimal: list = []
    for g in polys:
        if not any(mono_divides(h.lead_exp, g.lead_exp) for h in minimal):
            minimal.append(g)
    reduced = []
    for idx, g in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1:]
        tail = _reduce_terms(g.terms[1:], others, ring)
        tail[g.lead_exp] = g.lead_coeff
        reduced.append(ring.from_dict(tail).monic())
    reduced.sort(key=lambda g: key(g.lead_exp))
    return reduced


def is_groebner(elements: Sequence[Polynomial]) -> bool:
    """True iff every S-polynomial reduces to zero (brute force, no criteria)."""
    elements = [g.monic() for g in elements if not g.is_zero()]
    if not elements:
        return True
    ring = elements[0].ring
    for a in range(len(elements)):
        for b in range(a + 1, len(elements)):
            h = _s_poly(elements[a], elements[b])
            if _reduce_terms(h.terms, elements, ring):
                return False
    return True


def eliminate(gens: Sequence[Polynomial], k: int) -> list:
    """Generators of the ideal intersected with the subring free of the first ``k`` variables.

    The generators must live in a ring whose first ``k`` variables are the
    ones to eliminate; the result is mapped into the ring of the remaining
    variables (default grevlex order).
    """
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return []
    ring = gens[0].ring
    if not 1 <= k < ring.nvars:
        raise UsageError(f"eliminate: k={k} out of range for {ring.nvars} variables")
    block = ring.with_order(MonomialOrder("block", k))
    gb = buchberger(gens, block.order)
    target = PolynomialRing(ring.variables[k:], ring.char)
    out = []
    for g in gb.elements:
        if any(x for e, _ in g.terms for x in e[:k]):
            continue
        out.append(target.from_dict({e[k:]: c for e, c in g.terms}))
    return out
