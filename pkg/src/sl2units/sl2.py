"""Determinant-one 2x2 matrices and structured words over them.

Mat2 is an immutable matrix whose determinant is checked to equal one at
construction, so every value of the type is a genuine element of SL2 of its
ring.  GroupWord is an unevaluated product of factors -- elementary
transvections, diagonal unit matrices, formal inverses, and formal
conjugates g w g^-1 -- which lets callers exhibit *how* a matrix was built
(e.g. as a product of conjugates of a fixed matrix) and still evaluate or
flatten it exactly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .errors import DeterminantNotOne, MixedRings, NonUnitDiagonal, ParseError
from .rings import (
    QuotientRing,
    RingDescriptor,
    RingElement,
    is_unit,
    parse_element,
)


@dataclass(frozen=True)
class Mat2:
    """A 2x2 matrix [[a, b], [c, d]] with determinant one."""

    a: RingElement
    b: RingElement
    c: RingElement
    d: RingElement

    def __post_init__(self):
        ring = self.a.ring
        for entry in (self.b, self.c, self.d):
            if entry.ring != ring:
                raise MixedRings("matrix entries come from different rings")
        det = self.a * self.d - self.b * self.c
        if det != 1:
            raise DeterminantNotOne(f"determinant is {det}, not 1")

    @property
    def ring(self) -> RingDescriptor:
        return self.a.ring

    @property
    def entries(self) -> tuple[RingElement, RingElement, RingElement, RingElement]:
        return (self.a, self.b, self.c, self.d)

    def __mul__(self, other: "Mat2") -> "Mat2":
        if not isinstance(other, Mat2):
            return NotImplemented
        if other.ring != self.ring:
            raise MixedRings("cannot multiply matrices over different rings")
        return Mat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "Mat2":
        """Adjugate; exact because the determinant is one."""
        return Mat2(self.d, -self.b, -self.c, self.a)

    def __pow__(self, n: int) -> "Mat2":
        if n < 0:
            return self.inverse() ** (-n)
        result = identity(self.ring)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_scalar(self) -> bool:
        return not self.b and not self.c and self.a == self.d

    def is_identity(self) -> bool:
        return self == identity(self.ring)

    def trace(self) -> RingElement:
        return self.a + self.d

    def __str__(self):
        return f"[[{self.a},{self.b}],[{self.c},{self.d}]]"

    def __repr__(self):
        return f"{self} over {self.ring.name}"


def identity(ring: RingDescriptor) -> Mat2:
    one, zero = ring.one(), ring.zero()
    return Mat2(one, zero, zero, one)


def elem12(x: RingElement) -> Mat2:
    """Upper elementary matrix [[1, x], [0, 1]]."""
    ring = x.ring
    return Mat2(ring.one(), x, ring.zero(), ring.one())


def elem21(x: RingElement) -> Mat2:
    """Lower elementary matrix [[1, 0], [x, 1]]."""
    ring = x.ring
    return Mat2(ring.one(), ring.zero(), x, ring.one())


def diag(u: RingElement) -> Mat2:
    """Diagonal matrix [[u, 0], [0, 1/u]]; u must be a unit."""
    inv = is_unit(u)
    if inv is None:
        raise NonUnitDiagonal(f"{u} is not a unit of {u.ring.name}")
    zero = u.ring.zero()
    return Mat2(u, zero, zero, inv)


def conjugate(g: Mat2, m: Mat2) -> Mat2:
    """g m g^-1."""
    return g * m * g.inverse()


def commutator(g: Mat2, m: Mat2) -> Mat2:
    """g m g^-1 m^-1."""
    return g * m * g.inverse() * m.inverse()


# ---------------------------------------------------------------------------
# structured words


@dataclass(frozen=True)
class ElemFactor:
    """One transvection: position "12" for upper, "21" for lower."""

    position: str
    argument: RingElement

    def __post_init__(self):
        if self.position not in ("12", "21"):
            raise ValueError(f"position must be '12' or '21', got {self.position!r}")


@dataclass(frozen=True)
class DiagFactor:
    """Diagonal factor diag(u, 1/u)."""

    unit: RingElement

    def __post_init__(self):
        if is_unit(self.unit) is None:
            raise NonUnitDiagonal(f"{self.unit} is not a unit of {self.unit.ring.name}")


@dataclass(frozen=True)
class ConjFactor:
    """Formal conjugate: conjugator * inner * conjugator^-1, kept unexpanded."""

    conjugator: "GroupWord"
    inner: "GroupWord"


@dataclass(frozen=True)
class InvFactor:
    """Formal inverse of a whole word."""

    inner: "GroupWord"


Factor = Union[ElemFactor, DiagFactor, ConjFactor, InvFactor]


@dataclass(frozen=True)
class GroupWord:
    """An ordered product of factors over a fixed ring, evaluated left to right."""

    ring: RingDescriptor
    factors: tuple[Factor, ...] = ()

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        if not isinstance(other, GroupWord):
            return NotImplemented
        if other.ring != self.ring:
            raise MixedRings("cannot concatenate words over different rings")
        return GroupWord(self.ring, self.factors + other.factors)

    def __len__(self):
        return len(self.factors)

    def evaluate(self) -> Mat2:
        m = identity(self.ring)
        for f in self.factors:
            m = m * _evaluate_factor(self.ring, f)
        return m


def _evaluate_factor(ring: RingDescriptor, f: Factor) -> Mat2:
    if isinstance(f, ElemFactor):
        return elem12(f.argument) if f.position == "12" else elem21(f.argument)
    if isinstance(f, DiagFactor):
        return diag(f.unit)
    if isinstance(f, ConjFactor):
        g = f.conjugator.evaluate()
        return g * f.inner.evaluate() * g.inverse()
    if isinstance(f, InvFactor):
        return f.inner.evaluate().inverse()
    raise TypeError(f"unknown factor {f!r}")


def word_identity(ring: RingDescriptor) -> GroupWord:
    return GroupWord(ring)


def word_elem(position: str, argument: RingElement) -> GroupWord:
    return GroupWord(argument.ring, (ElemFactor(position, argument),))


def word_diag(unit: RingElement) -> GroupWord:
    return GroupWord(unit.ring, (DiagFactor(unit),))


def word_conj(conjugator: GroupWord, inner: GroupWord) -> GroupWord:
    if conjugator.ring != inner.ring:
        raise MixedRings("conjugator and inner word live over different rings")
    return GroupWord(inner.ring, (ConjFactor(conjugator, inner),))


def word_inv(inner: GroupWord) -> GroupWord:
    return GroupWord(inner.ring, (InvFactor(inner),))


def flatten(word: GroupWord) -> tuple[ElemFactor, ...]:
    """Expand inverses and conjugates into a flat run of transvections.

    Fails on diagonal factors: those are not elementary, and rewriting them
    is the job of the decomposition routines.
    """
    return tuple(_flatten(word, False))


def _flatten(word: GroupWord, inverted: bool) -> list[ElemFactor]:
    out: list[ElemFactor] = []
    seq = reversed(word.factors) if inverted else word.factors
    for f in seq:
        if isinstance(f, ElemFactor):
            out.append(ElemFactor(f.position, -f.argument) if inverted else f)
        elif isinstance(f, InvFactor):
            out.extend(_flatten(f.inner, not inverted))
        elif isinstance(f, ConjFactor):
            out.extend(_flatten(f.conjugator, False))
            out.extend(_flatten(f.inner, inverted))
            out.extend(_flatten(f.conjugator, True))
        else:
            raise ValueError("cannot flatten a word containing diagonal factors")
    return out


def elementary_length(word: GroupWord) -> int:
    """Number of transvections after full expansion (conjugators counted twice)."""
    return len(flatten(word))


# ---------------------------------------------------------------------------
# serialization

_MATRIX_RE = re.compile(r"^\[\[([^\[\],]+),([^\[\],]+)\],\[([^\[\],]+),([^\[\],]+)\]\]$")


def parse_matrix(ring: RingDescriptor, text: str) -> Mat2:
    """Parse '[[a,b],[c,d]]' with entries in the ring's element syntax."""
    compact = "".join(text.split())
    m = _MATRIX_RE.match(compact)
    if not m:
        raise ParseError(f"cannot parse {text!r} as a 2x2 matrix")
    a, b, c, d = (parse_element(ring, part) for part in m.groups())
    return Mat2(a, b, c, d)


def format_matrix(m: Mat2) -> str:
    return str(m)


def word_to_json(word: GroupWord) -> dict:
    return {"factors": [_factor_to_json(f) for f in word.factors]}


def _factor_to_json(f: Factor) -> dict:
    if isinstance(f, ElemFactor):
        return {"kind": "elem", "position": f.position, "argument": str(f.argument)}
    if isinstance(f, DiagFactor):
        return {"kind": "diag", "unit": str(f.unit)}
    if isinstance(f, ConjFactor):
        return {"kind": "conj", "by": word_to_json(f.conjugator), "word": word_to_json(f.inner)}
    if isinstance(f, InvFactor):
        return {"kind": "inv", "word": word_to_json(f.inner)}
    raise TypeError(f"unknown factor {f!r}")


def word_from_json(ring: RingDescriptor, data) -> GroupWord:
    if not isinstance(data, dict) or not isinstance(data.get("factors"), list):
        raise ParseError("a word must be an object with a 'factors' list")
    return GroupWord(ring, tuple(_factor_from_json(ring, f) for f in data["factors"]))


def _factor_from_json(ring: RingDescriptor, data) -> Factor:
    if not isinstance(data, dict):
        raise ParseError("each factor must be a JSON object")
    kind = data.get("kind")
    try:
        if kind == "elem":
            return ElemFactor(data["position"], parse_element(ring, data["argument"]))
        if kind == "diag":
            return DiagFactor(parse_element(ring, data["unit"]))
        if kind == "conj":
            return ConjFactor(word_from_json(ring, data["by"]), word_from_json(ring, data["word"]))
        if kind == "inv":
            return InvFactor(word_from_json(ring, data["word"]))
    except (KeyError, ValueError) as exc:
        raise ParseError(f"bad {kind} factor: {exc}") from None
    raise ParseError(f"unknown factor kind {kind!r}")


def reduce_mat(m: Mat2, q: QuotientRing) -> tuple[int, int, int, int]:
    """Entrywise image in R/cR, as the quotient's dense integer codes."""
    return (q.encode(m.a), q.encode(m.b), q.encode(m.c), q.encode(m.d))
