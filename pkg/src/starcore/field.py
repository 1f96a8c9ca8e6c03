"""Exact arithmetic in the prime field F_p.

Polynomials store their coefficients as plain ints reduced mod p for speed;
:class:`FieldElement` is the checked, user-facing scalar type.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import UsageError

MAX_CHARACTERISTIC = 2**31


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeChar:
    """The characteristic p of the coefficient field, 2 < p < 2^31."""

    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not 2 < self.p < MAX_CHARACTERISTIC:
            raise UsageError(f"characteristic must be an odd prime below 2^31, got {self.p!r}")
        if not is_prime(self.p):
            raise UsageError(f"{self.p} is not prime")

    def __call__(self, value: int) -> "FieldElement":
        return FieldElement(value, self)

    def __int__(self):
        return self.p

    def is_power(self, q: int) -> bool:
        """True iff q = p^e for some e >= 0."""
        if q < 1:
            return False
        while q % self.p == 0:
            q //= self.p
        return q == 1

    def exponent(self, q: int) -> int:
        if not self.is_power(q):
            raise UsageError(f"{q} is not a power of the characteristic {self.p}")
        e = 0
        while q > 1:
            q //= self.p
            e += 1
        return e


def inverse_mod(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError(f"0 has no inverse mod {p}")
    return pow(a, p - 2, p)


@dataclass(frozen=True)
class FieldElement:
    value: int
    char: PrimeChar

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.char.p)

    def _check(self, other) -> "FieldElement":
        if isinstance(other, int):
            return FieldElement(other, self.char)
        if not isinstance(other, FieldElement):
            return NotImplemented
        if other.char != self.char:
            raise UsageError(f"characteristic mismatch: {self.char.p} vs {other.char.p}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.value + other.value, self.char)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.value - other.value, self.char)

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.value * other.value, self.char)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(-self.value, self.char)

    def inverse(self) -> "FieldElement":
        return FieldElement(inverse_mod(self.value, self.char.p), self.char)

    def __truediv__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** -n
        return FieldElement(pow(self.value, n, self.char.p), self.char)

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} (mod {self.char.p})"


def fe_add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def fe_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def fe_inv(a: FieldElement) -> FieldElement:
    return a.inverse()
