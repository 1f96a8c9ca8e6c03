"""Monomial orders, sparse polynomials over F_p, and the expression parser.

Monomials are tuples of non-negative ints. Every monomial order is encoded as
an integer sort key, so comparing two monomials is one int comparison; the
packing base bounds single exponents by ``EXPONENT_BOUND``.
"""
from __future__ import annotations

import re
from operator import le
from bisect import bisect_right as _bisect
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import ParseError, ResourceError, UsageError
from .field import FieldElement, PrimeChar, inverse_mod

EXPONENT_BITS = 16
EXPONENT_BOUND = 1 << EXPONENT_BITS
_MASK = EXPONENT_BOUND - 1

Monomial = tuple


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    return all(map(le, a, b))


def mono_div(b: Monomial, a: Monomial) -> Monomial:
    return tuple(y - x for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x if x > y else y for x, y in zip(a, b))


def mono_coprime(a: Monomial, b: Monomial) -> bool:
    return not any(x and y for x, y in zip(a, b))


def _grevlex_key(e: Sequence[int]) -> int:
    key = sum(e)
    for x in reversed(e):
        key = (key << EXPONENT_BITS) | (_MASK - x)
    return key


def _lex_key(e: Sequence[int]) -> int:
    key = 0
    for x in e:
        key = (key << EXPONENT_BITS) | x
    return key


@dataclass(frozen=True)
class MonomialOrder:
    """``lex``, ``grevlex``, or ``block`` (grevlex on the first ``elim`` variables, then grevlex on the rest)."""

    kind: str = "grevlex"
    elim: int = 0

    def __post_init__(self):
        if self.kind not in ("lex", "grevlex", "block"):
            raise UsageError(f"unknown monomial order {self.kind!r}")
        if self.kind == "block" and self.elim < 1:
            raise UsageError("block order needs at least one eliminated variable")

    def key(self, e: Monomial) -> int:
        if max(e, default=0) > _MASK:
            raise ResourceError(f"exponent {max(e)} exceeds the representable bound {_MASK}")
        if self.kind == "grevlex":
            return _grevlex_key(e)
        if self.kind == "lex":
            return _lex_key(e)
        head, tail = e[: self.elim], e[self.elim:]
        return (_grevlex_key(head) << (EXPONENT_BITS * (len(tail) + 1))) | _grevlex_key(tail)

    def __str__(self):
        return f"block({self.elim})" if self.kind == "block" else self.kind


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


@dataclass(frozen=True, eq=True)
class PolynomialRing:
    """The ambient polynomial ring F_p[variables] with a fixed monomial order."""

    variables: tuple
    char: PrimeChar
    order: MonomialOrder = GREVLEX
    _index: dict = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        variables = tuple(self.variables)
        object.__setattr__(self, "variables", variables)
        if isinstance(self.char, int):
            object.__setattr__(self, "char", PrimeChar(self.char))
        if len(set(variables)) != len(variables):
            raise UsageError(f"duplicate variable names in {variables}")
        for v in variables:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", v):
                raise UsageError(f"invalid variable name {v!r}")
        if self.order.kind == "block" and self.order.elim > len(variables):
            raise UsageError("block order eliminates more variables than the ring has")
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(variables)})

    @property
    def p(self) -> int:
        return self.char.p

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def key(self, e: Monomial) -> int:
        return self.order.key(e)

    def one_exp(self) -> Monomial:
        return (0,) * self.nvars

    # construction ---------------------------------------------------------
    def from_dict(self, terms: Mapping[Monomial, int]) -> "Polynomial":
        p = self.p
        items = [(e, c % p) for e, c in terms.items() if c % p]
        key = self.order.key
        items.sort(key=lambda t: key(t[0]), reverse=True)
        return Polynomial(self, tuple(items))

    def zero(self) -> "Polynomial":
        return Polynomial(self, ())

    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, c) -> "Polynomial":
        return self.from_dict({self.one_exp(): int(c)})

    def monomial(self, e: Monomial, c: int = 1) -> "Polynomial":
        if len(e) != self.nvars:
            raise UsageError(f"monomial {e} has wrong length for {self.nvars} variables")
        return self.from_dict({tuple(e): c})

    def gen(self, name_or_index) -> "Polynomial":
        i = self._index[name_or_index] if isinstance(name_or_index, str) else name_or_index
        e = [0] * self.nvars
        e[i] = 1
        return self.monomial(tuple(e))

    def gens(self) -> list:
        return [self.gen(i) for i in range(self.nvars)]

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UsageError(f"unknown variable {name!r}") from None

    def parse(self, src: str) -> "Polynomial":
        return parse_poly(src, self)

    def __call__(self, x) -> "Polynomial":
        if isinstance(x, Polynomial):
            if x.ring == self:
                return x
            raise UsageError("polynomial belongs to a different ring; use embed()")
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, FieldElement):
            x = x.value
        return self.constant(int(x))

    # ring changes ---------------------------------------------------------
    def with_order(self, order: MonomialOrder) -> "PolynomialRing":
        return PolynomialRing(self.variables, self.char, order)

    def extended(self, tags: Sequence[str], order: MonomialOrder | None = None) -> "PolynomialRing":
        """Prepend tag variables (used for elimination)."""
        order = order or MonomialOrder("block", len(tags))
        return PolynomialRing(tuple(tags) + self.variables, self.char, order)

    def __str__(self):
        return f"F({self.p})[{', '.join(self.variables)}]"


class Polynomial:
    """Immutable polynomial: terms sorted strictly descending in the ring order, no zero coefficients."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolynomialRing, terms: tuple):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # basic queries --------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def as_dict(self) -> dict:
        return dict(self.terms)

    @property
    def lead_exp(self) -> Monomial:
        if not self.terms:
            raise UsageError("zero polynomial has no leading term")
        return self.terms[0][0]

    @property
    def lead_coeff(self) -> int:
        return self.terms[0][1] if self.terms else 0

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e, _ in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e, _ in self.terms}) <= 1

    def is_constant(self) -> bool:
        return all(not any(e) for e, _ in self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def support(self) -> list:
        return [e for e, _ in self.terms]

    def coefficient(self, e: Monomial) -> int:
        return dict(self.terms).get(tuple(e), 0)

    def used_variables(self) -> set:
        return {i for e, _ in self.terms for i, x in enumerate(e) if x}

    # arithmetic -----------------------------------------------------------
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring is not self.ring and other.ring != self.ring:
                raise UsageError(f"ring mismatch: {self.ring} ({self.ring.order}) vs {other.ring} ({other.ring.order})")
            return other
        if isinstance(other, (int, FieldElement)):
            return self.ring(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        d = dict(self.terms)
        for e, c in other.terms:
            d[e] = d.get(e, 0) + c
        return self.ring.from_dict(d)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.p
        return Polynomial(self.ring, tuple((e, p - c) for e, c in self.terms))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.ring.p
        d: dict = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = tuple(x + y for x, y in zip(e1, e2))
                d[e] = (d.get(e, 0) + c1 * c2) % p
        return self.ring.from_dict(d)

    __rmul__ = __mul__

    def scale(self, c: int) -> "Polynomial":
        p = self.ring.p
        c %= p
        if c == 0:
            return self.ring.zero()
        return Polynomial(self.ring, tuple((e, v * c % p) for e, v in self.terms))

    def shift(self, m: Monomial, c: int = 1) -> "Polynomial":
        """c * x^m * self; order is preserved because monomial orders are multiplicative."""
        p = self.ring.p
        c %= p
        if c == 0:
            return self.ring.zero()
        return Polynomial(self.ring, tuple((mono_mul(e, m), v * c % p) for e, v in self.terms))

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        return self.scale(inverse_mod(self.lead_coeff, self.ring.p))

    def __pow__(self, n: int) -> "Polynomial":
        if not isinstance(n, int) or n < 0:
            raise UsageError(f"exponent must be a non-negative integer, got {n!r}")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def frobenius_power(self, q: int) -> "Polynomial":
        """self^q for q a power of p.

        Frobenius is additive in characteristic p and fixes F_p, so each term
        c*m maps to c*m^q; no multinomial expansion is needed.
        """
        self.ring.char.exponent(q)
        if q == 1:
            return self
        return self.ring.from_dict({tuple(q * x for x in e): c for e, c in self.terms})

    def exact_div(self, g: "Polynomial") -> "Polynomial":
        """Quotient self / g; raises if g does not divide self."""
        g = self._coerce(g)
        if g.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        p = self.ring.p
        key = self.ring.key
        inv = inverse_mod(g.lead_coeff, p)
        lg = g.lead_exp
        rem = dict(self.terms)
        quot: dict = {}
        while rem:
            e = max(rem, key=key)
            c = rem[e]
            if not mono_divides(lg, e):
                raise UsageError("inexact polynomial division")
            m = mono_div(e, lg)
            qc = c * inv % p
            quot[m] = qc
            for ge, gc in g.terms:
                ne = mono_mul(ge, m)
                v = (rem.get(ne, 0) - qc * gc) % p
                if v:
                    rem[ne] = v
                else:
                    rem.pop(ne, None)
        return self.ring.from_dict(quot)

    def embed(self, ring: PolynomialRing, offset: int | None = None) -> "Polynomial":
        """Map into a ring whose variable list contains this ring's variables.

        Variables are matched by name; ``offset`` instead places them
        positionally starting at that index (tag-variable extension).
        """
        n = ring.nvars
        if offset is not None:
            pos = list(range(offset, offset + self.ring.nvars))
        else:
            pos = [ring.index(v) for v in self.ring.variables]
        d = {}
        for e, c in self.terms:
            ne = [0] * n
            for i, x in zip(pos, e):
                ne[i] = x
            d[tuple(ne)] = c
        return ring.from_dict(d)

    def homogeneous_components(self) -> dict:
        parts: dict = {}
        for e, c in self.terms:
            parts.setdefault(sum(e), {})[e] = c
        return {d: self.ring.from_dict(t) for d, t in parts.items()}

    # comparison / display -------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, FieldElement)):
            other = self.ring(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring.variables, self.ring.p, self.terms))
        return self._hash

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Polynomial({format_poly(self)!r})"


def format_monomial(e: Monomial, names: Sequence[str]) -> str:
    parts = []
    for name, x in zip(names, e):
        if x == 1:
            parts.append(name)
        elif x:
            parts.append(f"{name}^{x}")
    return "*".join(parts)


def format_poly(f: Polynomial) -> str:
    if not f.terms:
        return "0"
    names = f.ring.variables
    out = []
    for e, c in f.terms:
        mono = format_monomial(e, names)
        if not mono:
            out.append(str(c))
        elif c == 1:
            out.append(mono)
        else:
            out.append(f"{c}*{mono}")
    return " + ".join(out)


# ---------------------------------------------------------------------------
# parser

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


@dataclass
class Token:
    kind: str  # "num", "ident", "op", "end"
    text: str
    line: int
    col: int


def tokenize(src: str, line: int = 1, col: int = 1) -> list:
    """Split ``src`` into tokens; ``line``/``col`` give the position of src[0] in its file."""
    line_starts = [0] + [m.end() for m in re.finditer("\n", src)]

    def where(pos):
        i = max(0, _bisect(line_starts, pos) - 1)
        return line + i, pos - line_starts[i] + (col if i == 0 else 1)

    toks = []
    pos = 0
    while True:
        m = _TOKEN_RE.match(src, pos)
        if m is None or m.lastindex is None:
            break
        start = m.start(m.lastindex)
        ln, c = where(start)
        kind = ("num", "ident", "op")[m.lastindex - 1]
        toks.append(Token(kind, m.group(m.lastindex), ln, c))
        pos = m.end()
    ln, c = where(len(src.rstrip()))
    toks.append(Token("end", "", ln, c))
    return toks


def split_identifier(name: str, ring: PolynomialRing) -> list | None:
    """Decompose an identifier into ring variables (implicit products like ``xy``), longest match first."""
    if name in ring._index:
        return [name]
    names = sorted(ring.variables, key=len, reverse=True)

    def go(s):
        if not s:
            return []
        for v in names:
            if s.startswith(v):
                rest = go(s[len(v):])
                if rest is not None:
                    return [v] + rest
        return None

    return go(name)


class PolyParser:
    """Recursive-descent parser over a token list; shared with the scenario parser."""

    def __init__(self, toks: list, ring: PolynomialRing, pos: int = 0):
        self.toks = toks
        self.ring = ring
        self.pos = pos

    def peek(self) -> Token:
        return self.toks[self.pos]

    def next(self) -> Token:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return ParseError(msg, tok.line, tok.col)

    def expect(self, text):
        t = self.next()
        if t.text != text or t.kind == "end":
            raise self.error(f"expected {text!r}, found {t.text or 'end of input'!r}", t)
        return t

    def at(self, *texts) -> bool:
        t = self.peek()
        return t.kind == "op" and t.text in texts

    def expr(self) -> Polynomial:
        sign = 1
        if self.at("+", "-"):
            sign = -1 if self.next().text == "-" else 1
        acc = self.term().scale(sign)
        while self.at("+", "-"):
            op = self.next().text
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def _starts_factor(self) -> bool:
        t = self.peek()
        return t.kind in ("num", "ident") or (t.kind == "op" and t.text == "(")

    def term(self) -> Polynomial:
        acc = self.factor()
        while True:
            if self.at("*"):
                self.next()
                acc = acc * self.factor()
            elif self._starts_factor():
                acc = acc * self.factor()
            else:
                return acc

    def factor(self) -> Polynomial:
        if self.at("-"):
            self.next()
            return -self.factor()
        prefix = None
        t = self.peek()
        if t.kind == "ident" and self.ring is not None:
            parts = split_identifier(t.text, self.ring)
            if parts is not None and len(parts) > 1:
                # in "xy^3" the exponent binds to y only
                self.next()
                prefix = self.ring.one()
                for v in parts[:-1]:
                    prefix = prefix * self.ring.gen(v)
                base = self.ring.gen(parts[-1])
            else:
                base = self.atom()
        else:
            base = self.atom()
        while self.at("^"):
            self.next()
            t = self.peek()
            if t.kind == "op" and t.text == "-":
                raise self.error("negative exponent", t)
            if t.kind != "num":
                raise self.error("exponent must be a non-negative integer literal", t)
            self.next()
            base = base ** int(t.text)
        return base if prefix is None else prefix * base

    def atom(self) -> Polynomial:
        t = self.next()
        ring = self.ring
        if t.kind == "num":
            return ring.constant(int(t.text) % ring.p)
        if t.kind == "ident":
            parts = split_identifier(t.text, ring)
            if parts is None:
                raise self.error(f"unknown variable {t.text!r}", t)
            acc = ring.one()
            for v in parts:
                acc = acc * ring.gen(v)
            return acc
        if t.kind == "op" and t.text == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        raise self.error(f"unexpected {t.text or 'end of input'!r}", t)


def parse_poly(src: str, ring: PolynomialRing) -> Polynomial:
    """Parse a polynomial expression: ``+ - *``, ``^`` with literal exponents, implicit products (``xy^3z^6``)."""
    toks = tokenize(src)
    if toks[0].kind == "end":
        raise ParseError("empty polynomial expression", 1, 1)
    parser = PolyParser(toks, ring)
    f = parser.expr()
    if parser.peek().kind != "end":
        raise parser.error(f"unexpected {parser.peek().text!r}")
    return f


def poly_arith(a: Polynomial, b: Polynomial, op: str) -> Polynomial:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise UsageError(f"unknown operation {op!r}")


def frobenius_power(a: Polynomial, q: int) -> Polynomial:
    return a.frobenius_power(q)


def make_ring(variables: Iterable[str] | str, p: int, order: MonomialOrder = GREVLEX) -> PolynomialRing:
    if isinstance(variables, str):
        variables = [v.strip() for v in variables.split(",") if v.strip()]
    return PolynomialRing(tuple(variables), PrimeChar(p), order)
