"""Exact field arithmetic for prime fields GF(p) and the rationals.

Prime field elements are canonical residues in ``[0, p)``; rationals are
``fractions.Fraction`` values (always stored reduced with positive
denominator).  Both are immutable, so elements can be shared freely.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import DivisionByZero, MixedFields, UnsupportedField

PRIME = "gf"
RATIONAL = "q"

_MAX_MODULUS = 2**63


def is_prime(p: int) -> bool:
    """Trial division up to sqrt(p)."""
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class FieldDescriptor:
    kind: str
    modulus: int | None = None

    def __post_init__(self):
        if self.kind == PRIME:
            if self.modulus is None or not (2 <= self.modulus < _MAX_MODULUS):
                raise UnsupportedField(f"modulus out of range: {self.modulus}")
            if not is_prime(self.modulus):
                raise UnsupportedField(f"{self.modulus} is not prime")
        elif self.kind == RATIONAL:
            if self.modulus is not None:
                raise UnsupportedField("rationals take no modulus")
        else:
            raise UnsupportedField(f"unknown field kind {self.kind!r}")

    @property
    def is_prime_field(self) -> bool:
        return self.kind == PRIME

    def elem(self, value) -> "FieldElem":
        """Coerce an int, Fraction or element string into a canonical element."""
        if isinstance(value, FieldElem):
            if value.field != self:
                raise MixedFields(f"{value} does not belong to {self}")
            return value
        if isinstance(value, str):
            value = _parse_literal(value, self)
        if self.is_prime_field:
            return FieldElem(self, int(value) % self.modulus)
        return FieldElem(self, Fraction(value))

    def zero(self) -> "FieldElem":
        return self.elem(0)

    def one(self) -> "FieldElem":
        return self.elem(1)

    def __str__(self):
        return f"gf {self.modulus}" if self.is_prime_field else "q"


def _parse_literal(text: str, desc: FieldDescriptor):
    text = text.strip()
    if desc.is_prime_field:
        return int(text)
    return Fraction(text)


def GF(p: int) -> FieldDescriptor:
    return FieldDescriptor(PRIME, p)


def QQ() -> FieldDescriptor:
    return FieldDescriptor(RATIONAL)


@dataclass(frozen=True)
class FieldElem:
    field: FieldDescriptor
    value: object  # int residue or Fraction

    def _check(self, other: "FieldElem"):
        if not isinstance(other, FieldElem) or other.field != self.field:
            raise MixedFields(f"cannot combine {self} with {other}")

    def __add__(self, other):
        self._check(other)
        v = self.value + other.value
        if self.field.is_prime_field:
            v %= self.field.modulus
        return FieldElem(self.field, v)

    def __sub__(self, other):
        self._check(other)
        v = self.value - other.value
        if self.field.is_prime_field:
            v %= self.field.modulus
        return FieldElem(self.field, v)

    def __mul__(self, other):
        self._check(other)
        v = self.value * other.value
        if self.field.is_prime_field:
            v %= self.field.modulus
        return FieldElem(self.field, v)

    def __truediv__(self, other):
        self._check(other)
        if other.is_zero():
            raise DivisionByZero(f"division by zero in {self.field}")
        if self.field.is_prime_field:
            p = self.field.modulus
            return FieldElem(self.field, self.value * pow(other.value, p - 2, p) % p)
        return FieldElem(self.field, self.value / other.value)

    def __neg__(self):
        return self.field.zero() - self

    def is_zero(self) -> bool:
        return self.value == 0

    def literal(self) -> str:
        """Text form used by the SLP file format."""
        return str(self.value)

    def __str__(self):
        return self.literal()


def arith(a: FieldElem, b: FieldElem, op: str) -> FieldElem:
    """Dispatch one of add/sub/mul/div on two elements of the same field."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


def sample_uniform(desc: FieldDescriptor, seed: int) -> FieldElem:
    """Uniform element of GF(p), deterministic in the seed."""
    if not desc.is_prime_field:
        raise UnsupportedField("no finite sampling set for the rationals")
    return FieldElem(desc, random.Random(seed).randrange(desc.modulus))
