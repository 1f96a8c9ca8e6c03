"""Macaulay-matrix oracle for homogeneous ideals.

Membership and equality are decided degree by degree with Gaussian
elimination over F_p on the span of all multiples m*g of a fixed degree.
It shares nothing with the Gröbner kernel beyond the polynomial type, which
is what makes it useful as a cross-check.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import UsageError
from .ideals import Ideal, QuotientRing
from .polyring import Polynomial, format_poly


@lru_cache(maxsize=256)
def monomials_of_degree(nvars: int, d: int) -> tuple:
    """Exponent vectors of total degree d, in a fixed order."""
    out = []
    for combo in itertools.combinations_with_replacement(range(nvars), d):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return tuple(out)


def row_reduce(mat: np.ndarray, p: int) -> np.ndarray:
    """Reduced row echelon form mod p; returns only the nonzero rows."""
    m = np.array(mat, dtype=np.int64) % p
    rows, cols = m.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        inv = pow(int(m[r, c]), p - 2, p)
        m[r] = (m[r] * inv) % p
        col = m[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            m[hit] = (m[hit] - np.outer(col[hit], m[r])) % p
        r += 1
    return m[:r]


@dataclass
class MacaulayPiece:
    degree: int
    basis: tuple
    echelon: np.ndarray

    @property
    def rank(self) -> int:
        return int(self.echelon.shape[0])

    def vector(self, f: Polynomial) -> np.ndarray:
        index = {e: i for i, e in enumerate(self.basis)}
        v = np.zeros(len(self.basis), dtype=np.int64)
        for e, c in f.terms:
            v[index[e]] = c
        return v

    def contains_vector(self, v: np.ndarray, p: int) -> bool:
        if self.rank == 0:
            return not np.any(v % p)
        stacked = np.vstack([self.echelon, v[None, :]])
        return row_reduce(stacked, p).shape[0] == self.rank


def _homogeneous_gens(a: Ideal) -> list:
    gens = [g for g in a.ambient_gens if not g.is_zero()]
    for g in gens:
        if not g.is_homogeneous():
            raise UsageError(f"oracle: generator {g} is not homogeneous")
    return gens


def macaulay_piece(a: Ideal, d: int) -> MacaulayPiece:
    """The degree-d part of the ambient ideal, as an echelonized span."""
    nv = a.ring.poly_ring.nvars
    p = a.ring.p
    basis = monomials_of_degree(nv, d)
    index = {e: i for i, e in enumerate(basis)}
    rows = []
    for g in _homogeneous_gens(a):
        k = d - g.degree()
        if k < 0:
            continue
        for m in monomials_of_degree(nv, k):
            row = np.zeros(len(basis), dtype=np.int64)
            for e, c in g.terms:
                row[index[tuple(x + y for x, y in zip(e, m))]] = c
            rows.append(row)
    if not rows:
        return MacaulayPiece(d, basis, np.zeros((0, len(basis)), dtype=np.int64))
    return MacaulayPiece(d, basis, row_reduce(np.array(rows), p))


def default_dmax(*ideals: Ideal, f: Polynomial | None = None) -> int:
    gen_deg = max((g.degree() for a in ideals for g in a.user_gens), default=0)
    rel_deg = max((g.degree() for g in ideals[0].ring.relations), default=0) if ideals else 0
    f_deg = f.degree() if f is not None else 0
    return max(2 * gen_deg, f_deg) + rel_deg


def oracle_member(f, a: Ideal, d_max: int | None = None) -> bool:
    """Whether homogeneous f lies in the ambient ideal a (ring relations included)."""
    f = a.ring(f)
    if not f.is_homogeneous():
        raise UsageError(f"oracle_member: {f} is not homogeneous")
    if f.is_zero():
        return True
    d = f.degree()
    if d_max is not None and d > d_max:
        raise UsageError(f"oracle_member: degree {d} exceeds d_max={d_max}")
    piece = macaulay_piece(a, d)
    return piece.contains_vector(piece.vector(f), a.ring.p)


def oracle_equal_up_to(a: Ideal, b: Ideal, d_max: int | None = None) -> bool:
    """Degree-by-degree span equality of two homogeneous ideals for degrees <= d_max."""
    if a.ring != b.ring:
        raise UsageError("oracle_equal_up_to: ideals live in different rings")
    _homogeneous_gens(a)
    _homogeneous_gens(b)
    if d_max is None:
        d_max = default_dmax(a, b)
    p = a.ring.p
    for d in range(d_max + 1):
        pa, pb = macaulay_piece(a, d), macaulay_piece(b, d)
        if pa.rank != pb.rank:
            return False
        if pa.rank and row_reduce(np.vstack([pa.echelon, pb.echelon]), p).shape[0] != pa.rank:
            return False
    return True


def random_homogeneous(ring, d: int, rng, terms: int = 3) -> Polynomial:
    mons = monomials_of_degree(ring.nvars, d)
    picks = rng.sample(mons, min(terms, len(mons)))
    return ring.from_dict({e: rng.randrange(1, ring.p) for e in picks})


def random_instance(rng, p: int | None = None, max_vars: int = 3, max_gen_degree: int = 6) -> dict:
    """A random homogeneous ideal with a membership query and a comparison ideal."""
    p = p or rng.choice([3, 7])
    nv = rng.randint(1, max_vars)
    R = QuotientRing("xyz"[:nv], p)
    gens = [random_homogeneous(R.poly_ring, rng.randint(1, max_gen_degree), rng, rng.randint(1, 3))
            for _ in range(rng.randint(1, 3))]
    A = Ideal(R, gens)
    # query: either a random combination of generators (a member) or a random form
    d = rng.randint(max(g.degree() for g in gens), 12)
    if rng.random() < 0.5:
        f = R.poly_ring.zero()
        for g in gens:
            if g.degree() <= d:
                f = f + random_homogeneous(R.poly_ring, d - g.degree(), rng, 2) * g
    else:
        f = random_homogeneous(R.poly_ring, d, rng, rng.randint(1, 4))
    # comparison ideal: a shuffled, recombined copy, sometimes with one generator dropped or added
    other = list(gens)
    rng.shuffle(other)
    same_degree = [i for i in range(1, len(other)) if other[i].degree() == other[0].degree()]
    if same_degree:
        other[0] = other[0] + other[same_degree[0]].scale(rng.randrange(1, p))
    roll = rng.random()
    if roll < 0.3 and len(other) > 1:
        other.pop()
    elif roll < 0.6:
        other.append(random_homogeneous(R.poly_ring, rng.randint(1, max_gen_degree), rng, 2))
    return {"ring": R, "ideal": A, "query": f, "other": Ideal(R, other)}


def cross_check(count: int = 100, seed: int = 0, d_max: int = 12) -> list:
    """Compare Gröbner membership/equality with the Macaulay oracle; returns the disagreements."""
    rng = random.Random(seed)
    bad = []
    for k in range(count):
        inst = random_instance(rng)
        A, B, f = inst["ideal"], inst["other"], inst["query"]
        gb_in, mac_in = A.contains(f), oracle_member(f, A)
        gb_eq, mac_eq = A.equals(B), oracle_equal_up_to(A, B, d_max)
        if gb_in != mac_in or gb_eq != mac_eq:
            bad.append({"index": k, "ideal": A.gen_strings(), "other": B.gen_strings(),
                        "query": format_poly(f), "gb": [gb_in, gb_eq], "oracle": [mac_in, mac_eq]})
    return bad
