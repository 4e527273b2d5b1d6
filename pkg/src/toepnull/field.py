"""Arithmetic in prime fields GF(q).

Field elements carry a reference to their field, so values from
different moduli cannot be mixed silently: mismatched operands raise
:class:`FieldMismatchError` instead of producing garbage.

The modulus is capped (default 13).  Everything downstream of this
module leans on exhaustive verification over all of GF(q)^k, and a
small cap keeps "exhaustive" honest.  Callers that know what they are
doing can lift the cap per field with ``max_q``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

DEFAULT_MAX_Q = 13


class FieldMismatchError(ValueError):
    """Two operands belong to different prime fields."""


def is_prime(n: int) -> bool:
    """Trial division, plenty for the small moduli this package allows."""
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class PrimeField:
    """The prime field GF(q).

    Instances compare and hash by modulus, so two ``PrimeField(5)``
    objects are interchangeable as dictionary keys or dataclass fields.
    """

    __slots__ = ("q",)

    def __init__(self, q: int, *, max_q: int = DEFAULT_MAX_Q) -> None:
        if not isinstance(q, int) or isinstance(q, bool):
            raise ValueError(f"modulus must be an integer, got {q!r}")
        if not is_prime(q):
            raise ValueError(f"modulus must be prime, got {q}")
        if q > max_q:
            raise ValueError(
                f"modulus {q} exceeds the exhaustive-verification cap {max_q}; "
                "pass max_q to allow it"
            )
        self.q = q

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PrimeField) and other.q == self.q

    def __hash__(self) -> int:
        return hash(("PrimeField", self.q))

    def __repr__(self) -> str:
        return f"PrimeField({self.q})"

    def element(self, value: int) -> "FieldElement":
        """The element congruent to ``value``, reduced into [0, q)."""
        return FieldElement(self, value % self.q)

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    def elements(self) -> Iterator["FieldElement"]:
        """All q elements, ascending by value."""
        for v in range(self.q):
            yield FieldElement(self, v)


@dataclass(frozen=True)
class FieldElement:
    """A residue in [0, q) tied to its field."""

    field: PrimeField
    value: int

    def __post_init__(self) -> None:
        if not isinstance(self.value, int) or isinstance(self.value, bool):
            raise ValueError(f"element value must be an integer, got {self.value!r}")
        if not 0 <= self.value < self.field.q:
            raise ValueError(f"element value {self.value} outside [0, {self.field.q})")

    def _match(self, other: "FieldElement") -> None:
        if not isinstance(other, FieldElement):
            raise TypeError(f"expected a FieldElement, got {other!r}")
        if other.field != self.field:
            raise FieldMismatchError(
                f"operands live in GF({self.field.q}) and GF({other.field.q})"
            )

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._match(other)
        return FieldElement(self.field, (self.value + other.value) % self.field.q)

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        self._match(other)
        return FieldElement(self.field, (self.value - other.value) % self.field.q)

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._match(other)
        return FieldElement(self.field, (self.value * other.value) % self.field.q)

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.field, (-self.value) % self.field.q)

    def inverse(self) -> "FieldElement":
        """Multiplicative inverse by Fermat's little theorem."""
        if self.value == 0:
            raise ZeroDivisionError("zero has no multiplicative inverse")
        q = self.field.q
        return FieldElement(self.field, pow(self.value, q - 2, q))

    def __repr__(self) -> str:
        return f"{self.value} (mod {self.field.q})"


def add(x: FieldElement, y: FieldElement) -> FieldElement:
    """x + y in their common field."""
    return x + y


def mul(x: FieldElement, y: FieldElement) -> FieldElement:
    """x * y in their common field."""
    return x * y


def inv(x: FieldElement) -> FieldElement:
    """Multiplicative inverse of a nonzero element."""
    return x.inverse()


def element_value(field: PrimeField, x: Union[FieldElement, int]) -> int:
    """Raw integer value of ``x`` as a member of ``field``.

    Accepts a FieldElement (checked against ``field``) or a bare integer
    already reduced into [0, q).  Used wherever compact integer storage
    meets the element-level API.
    """
    if isinstance(x, FieldElement):
        if x.field != field:
            raise FieldMismatchError(
                f"element of GF({x.field.q}) used where GF({field.q}) is required"
            )
        return x.value
    if isinstance(x, bool) or not isinstance(x, int):
        raise ValueError(f"expected a field element or integer, got {x!r}")
    if not 0 <= x < field.q:
        raise ValueError(f"value {x} outside [0, {field.q})")
    return x
