"""Exact arithmetic for the three supported coefficient rings.

Supported rings: the integers Z, localizations Z[1/m], and real quadratic
rings Z[sqrt(d)] for squarefree d >= 2.  Elements are immutable values in a
unique canonical form, so equality is plain field comparison and all
arithmetic is exact; nothing here ever rounds.

Alongside the element type the module provides principal ideals with exact
membership tests, finite quotient rings R/cR with canonical residue
enumeration, multiplicative order computation in quotients, and the search
for units of infinite order (trivial for Z[1/m], a Pell search for
Z[sqrt(d)]).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import (
    MixedRings,
    NoInfiniteOrderUnit,
    NonUnit,
    NotUnitInQuotient,
    OrderSearchExhausted,
    ParseError,
    PellSearchExhausted,
    ZeroIdeal,
)

DEFAULT_PELL_CAP = 10**6

INTEGERS = "integers"
LOCALIZED = "localized"
QUADRATIC = "quadratic"


def _prime_factors(n: int) -> tuple[int, ...]:
    assert n >= 2
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out.append(n)
    return tuple(out)


def _is_squarefree(n: int) -> bool:
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        p += 1 if p == 2 else 2
    return True


@dataclass(frozen=True)
class RingDescriptor:
    """Identifies one of the supported rings; equal iff kind and parameter agree."""

    kind: str
    param: int = 0

    def __post_init__(self):
        if self.kind == INTEGERS:
            if self.param != 0:
                raise ValueError("integers take no parameter")
        elif self.kind == LOCALIZED:
            if self.param < 2:
                raise ValueError("localization parameter m must be >= 2")
        elif self.kind == QUADRATIC:
            if self.param < 2 or not _is_squarefree(self.param):
                raise ValueError("quadratic parameter d must be squarefree and >= 2")
        else:
            raise ValueError(f"unknown ring kind {self.kind!r}")

    @property
    def name(self) -> str:
        if self.kind == INTEGERS:
            return "Z"
        if self.kind == LOCALIZED:
            return f"Z[1/{self.param}]"
        return f"Z[sqrt{self.param}]"

    @property
    def inverted_primes(self) -> tuple[int, ...]:
        """Primes made invertible by localization (empty unless kind is localized)."""
        if self.kind == LOCALIZED:
            return _prime_factors(self.param)
        return ()

    def __str__(self):
        return self.name

    def __repr__(self):
        return self.name

    # element constructors

    def from_int(self, n: int) -> "RingElement":
        return RingElement(self, Fraction(n))

    def from_fraction(self, num: int, den: int = 1) -> "RingElement":
        return RingElement(self, Fraction(num, den))

    def from_pair(self, a: int, b: int) -> "RingElement":
        """Element a + b*sqrt(d); only valid for quadratic rings."""
        if self.kind != QUADRATIC and b != 0:
            raise ValueError(f"{self.name} has no irrational part")
        return RingElement(self, Fraction(a), b)

    def zero(self) -> "RingElement":
        return self.from_int(0)

    def one(self) -> "RingElement":
        return self.from_int(1)


def integers() -> RingDescriptor:
    return RingDescriptor(INTEGERS)


def localized(m: int) -> RingDescriptor:
    return RingDescriptor(LOCALIZED, m)


def quadratic(d: int) -> RingDescriptor:
    return RingDescriptor(QUADRATIC, d)


def _strip_primes(n: int, primes: tuple[int, ...]) -> int:
    n = abs(n)
    for p in primes:
        while n and n % p == 0:
            n //= p
    return n


@dataclass(frozen=True, eq=False)
class RingElement:
    """One exact ring element: rat + irr*sqrt(d), with irr = 0 outside quadratic rings.

    The rational part is a Fraction in lowest terms, which makes the
    representation canonical: equal values always have identical fields.
    For quadratic rings the rational part is restricted to integers, for
    Z[1/m] the denominator must be m-smooth.
    """

    ring: RingDescriptor
    rat: Fraction
    irr: int = 0

    def __post_init__(self):
        if self.ring.kind == QUADRATIC:
            if self.rat.denominator != 1:
                raise ValueError("quadratic ring elements have integer coordinates")
        else:
            if self.irr != 0:
                raise ValueError(f"{self.ring.name} has no irrational part")
            den = self.rat.denominator
            if self.ring.kind == INTEGERS:
                if den != 1:
                    raise ValueError(f"{self.rat} is not an integer")
            elif _strip_primes(den, self.ring.inverted_primes) != 1:
                raise ValueError(f"{self.rat} does not lie in {self.ring.name}")

    # -- equality and hashing (canonical form makes this field comparison)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self.irr == 0 and self.rat == other
        if isinstance(other, RingElement):
            return (self.ring, self.rat, self.irr) == (other.ring, other.rat, other.irr)
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, self.rat, self.irr))

    def __bool__(self):
        return self.rat != 0 or self.irr != 0

    # -- arithmetic

    def _coerce(self, other) -> "RingElement":
        if isinstance(other, int):
            return self.ring.from_int(other)
        if isinstance(other, RingElement):
            if other.ring != self.ring:
                raise MixedRings(f"{self.ring.name} vs {other.ring.name}")
            return other
        raise TypeError(f"cannot combine RingElement with {type(other).__name__}")

    def __add__(self, other) -> "RingElement":
        o = self._coerce(other)
        return RingElement(self.ring, self.rat + o.rat, self.irr + o.irr)

    __radd__ = __add__

    def __sub__(self, other) -> "RingElement":
        o = self._coerce(other)
        return RingElement(self.ring, self.rat - o.rat, self.irr - o.irr)

    def __rsub__(self, other) -> "RingElement":
        return self._coerce(other) - self

    def __neg__(self) -> "RingElement":
        return RingElement(self.ring, -self.rat, -self.irr)

    def __mul__(self, other) -> "RingElement":
        o = self._coerce(other)
        if self.ring.kind == QUADRATIC:
            d = self.ring.param
            a, b = int(self.rat), self.irr
            e, f = int(o.rat), o.irr
            return RingElement(self.ring, Fraction(a * e + d * b * f), a * f + b * e)
        return RingElement(self.ring, self.rat * o.rat)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "RingElement":
        if n < 0:
            return self.inverse() ** (-n)
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> "RingElement":
        """Galois conjugate a - b*sqrt(d); identity on the other rings."""
        return RingElement(self.ring, self.rat, -self.irr)

    def field_norm(self) -> Fraction:
        """Product of self with its conjugate (a^2 - d*b^2 for quadratic rings)."""
        if self.ring.kind == QUADRATIC:
            return self.rat * self.rat - self.ring.param * self.irr * self.irr
        return self.rat

    def inverse(self) -> "RingElement":
        inv = is_unit(self)
        if inv is None:
            raise NonUnit(f"{self} is not a unit of {self.ring.name}")
        return inv

    # -- text form (round-trips through parse_element)

    def __str__(self):
        if self.ring.kind != QUADRATIC:
            return str(self.rat)
        a, b, d = int(self.rat), self.irr, self.ring.param
        if b == 0:
            return str(a)
        if b == 1:
            root = f"sqrt({d})"
        elif b == -1:
            root = f"-sqrt({d})"
        else:
            root = f"{b}*sqrt({d})"
        if a == 0:
            return root
        sign = "+" if not root.startswith("-") else ""
        return f"{a}{sign}{root}"

    def __repr__(self):
        return f"{self} in {self.ring.name}"


def is_unit(x: RingElement) -> Optional[RingElement]:
    """Return the inverse of x if x is invertible in its ring, else None."""
    if not x:
        return None
    ring = x.ring
    if ring.kind == QUADRATIC:
        n = x.field_norm()
        if n == 1 or n == -1:
            s = 1 if n == 1 else -1
            return RingElement(ring, x.rat * s, -x.irr * s)
        return None
    if ring.kind == INTEGERS:
        return x if abs(x.rat) == 1 else None
    if _strip_primes(x.rat.numerator, ring.inverted_primes) == 1:
        return RingElement(ring, 1 / x.rat)
    return None


def exact_quotient(x: RingElement, y: RingElement) -> Optional[RingElement]:
    """x / y if the quotient lies in the ring, else None.  y must be nonzero."""
    if x.ring != y.ring:
        raise MixedRings(f"{x.ring.name} vs {y.ring.name}")
    if not y:
        raise ZeroDivisionError("division by the zero element")
    ring = x.ring
    if ring.kind == QUADRATIC:
        n = int(y.field_norm())
        num = x * y.conjugate()
        p, q = int(num.rat), num.irr
        if p % n or q % n:
            return None
        return RingElement(ring, Fraction(p // n), q // n)
    f = x.rat / y.rat
    den = f.denominator
    if ring.kind == INTEGERS:
        return RingElement(ring, f) if den == 1 else None
    if _strip_primes(den, ring.inverted_primes) == 1:
        return RingElement(ring, f)
    return None


def euclidean_size(x: RingElement) -> int:
    """Non-negative size used by division chains; 0 only for x = 0, 1 exactly on units."""
    ring = x.ring
    if ring.kind == QUADRATIC:
        return abs(int(x.field_norm()))
    if ring.kind == INTEGERS:
        return abs(x.rat.numerator)
    return _strip_primes(x.rat.numerator, ring.inverted_primes) if x else 0


def height(x: RingElement) -> int:
    """Max absolute value over the integer data of the canonical form."""
    if x.ring.kind == QUADRATIC:
        return max(abs(int(x.rat)), abs(x.irr))
    return max(abs(x.rat.numerator), x.rat.denominator)


@dataclass(frozen=True)
class PrincipalIdeal:
    """The ideal gR of all multiples of a fixed nonzero generator."""

    generator: RingElement

    def __post_init__(self):
        if not self.generator:
            raise ZeroIdeal("principal ideals require a nonzero generator")

    @property
    def ring(self) -> RingDescriptor:
        return self.generator.ring

    def __contains__(self, x: RingElement) -> bool:
        return in_ideal(x, self)

    def __str__(self):
        return f"({self.generator})"

    def __repr__(self):
        return f"({self.generator}) in {self.ring.name}"


def in_ideal(x: RingElement, ideal: PrincipalIdeal) -> bool:
    """Exact divisibility test: true iff x / generator lies in the ring."""
    return exact_quotient(x, ideal.generator) is not None


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    # returns (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0
    x, nx = 1, 0
    y, ny = 0, 1
    g, ng = a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    if g < 0:
        x, y, g = -x, -y, -g
    return g, x, y


class QuotientRing:
    """The finite ring R/cR with canonical residue representatives.

    For Z and Z[1/m] the quotient is Z/c0 where c0 is the positive generator
    of cR intersected with Z, with all primes of m stripped.  For Z[sqrt(d)]
    residues live in the box below the Hermite normal form of the rank-2
    lattice spanned by c and c*sqrt(d); the index equals |N(c)|.

    Residues are exposed both as canonical RingElements and as dense integer
    codes in range(index); the integer side exists so that group tables and
    breadth-first searches stay cheap.
    """

    def __init__(self, modulus: PrincipalIdeal):
        self.ring = modulus.ring
        self.modulus = modulus
        c = modulus.generator
        if self.ring.kind == QUADRATIC:
            d = self.ring.param
            rows = [[int(c.rat), c.irr], [d * c.irr, int(c.rat)]]
            self._hnf = _hnf_2x2(rows)
            h11, _, h22 = self._hnf
            self.index = h11 * h22
            if self.index != abs(int(c.field_norm())):
                raise AssertionError("HNF determinant disagrees with the field norm")
        else:
            self._c0 = _strip_primes(c.rat.numerator, self.ring.inverted_primes)
            self.index = self._c0
        self._residues: Optional[tuple[RingElement, ...]] = None

    @property
    def residues(self) -> tuple[RingElement, ...]:
        if self._residues is None:
            self._residues = tuple(self.decode(i) for i in range(self.index))
        return self._residues

    def __repr__(self):
        return f"{self.ring.name}/{self.modulus} of index {self.index}"

    # encoded-residue arithmetic

    def encode(self, x: RingElement) -> int:
        if x.ring != self.ring:
            raise MixedRings(f"{x.ring.name} vs {self.ring.name}")
        if self.ring.kind == QUADRATIC:
            r1, r2 = self._box_reduce(int(x.rat), x.irr)
            return r1 * self._hnf[2] + r2
        c0 = self._c0
        if c0 == 1:
            return 0
        num, den = x.rat.numerator, x.rat.denominator
        if den == 1:
            return num % c0
        return num * pow(den, -1, c0) % c0

    def decode(self, i: int) -> RingElement:
        if self.ring.kind == QUADRATIC:
            h22 = self._hnf[2]
            return self.ring.from_pair(i // h22, i % h22)
        return self.ring.from_int(i)

    def _box_reduce(self, x1: int, x2: int) -> tuple[int, int]:
        h11, h12, h22 = self._hnf
        k = x1 // h11
        return x1 - k * h11, (x2 - k * h12) % h22

    def add_enc(self, i: int, j: int) -> int:
        if self.ring.kind != QUADRATIC:
            return (i + j) % self.index if self.index > 1 else 0
        h22 = self._hnf[2]
        r1, r2 = self._box_reduce(i // h22 + j // h22, i % h22 + j % h22)
        return r1 * h22 + r2

    def neg_enc(self, i: int) -> int:
        if self.ring.kind != QUADRATIC:
            return (-i) % self.index if self.index > 1 else 0
        h22 = self._hnf[2]
        r1, r2 = self._box_reduce(-(i // h22), -(i % h22))
        return r1 * h22 + r2

    def mul_enc(self, i: int, j: int) -> int:
        if self.ring.kind != QUADRATIC:
            return (i * j) % self.index if self.index > 1 else 0
        d = self.ring.param
        h22 = self._hnf[2]
        a, b = i // h22, i % h22
        e, f = j // h22, j % h22
        r1, r2 = self._box_reduce(a * e + d * b * f, a * f + b * e)
        return r1 * h22 + r2

    @property
    def one_enc(self) -> int:
        return self.encode(self.ring.one())

    # element-level interface

    def reduce(self, x: RingElement) -> RingElement:
        """Canonical representative of x + cR; constant on cosets."""
        return self.decode(self.encode(x))

    def is_unit(self, x: RingElement) -> bool:
        """Invertibility of the residue class of x."""
        if self.index == 1:
            return True
        if self.ring.kind != QUADRATIC:
            return math.gcd(self.encode(x), self.index) == 1
        # unit iff xR + cR is the whole lattice Z + Z*sqrt(d)
        d = self.ring.param
        r = self.reduce(x)
        a, b = int(r.rat), r.irr
        h11, h12, h22 = self._hnf
        rows = [[a, b], [d * b, a], [h11, h12], [0, h22]]
        g1 = math.gcd(a, d * b, h11)
        if g1 != 1:
            return False
        return _lattice_index_is_one(rows)

    def unit_inverse(self, x: RingElement) -> RingElement:
        """Inverse of the residue class of x, found by scanning the residues."""
        if not self.is_unit(x):
            raise NotUnitInQuotient(f"{x} is not invertible modulo {self.modulus}")
        e = self.encode(x)
        for j in range(self.index):
            if self.mul_enc(e, j) == self.one_enc:
                return self.decode(j)
        raise AssertionError("unit without inverse; quotient arithmetic is broken")

    def unit_group_order(self) -> int:
        """Number of invertible residues, by exhaustive scan."""
        return sum(1 for r in self.residues if self.is_unit(r))


def _hnf_2x2(rows: list[list[int]]) -> tuple[int, int, int]:
    """Row Hermite form (h11, h12; 0, h22) of a nonsingular 2x2 integer matrix.

    Normalized so h11, h22 > 0 and 0 <= h12 < h22.
    """
    (a1, b1), (a2, b2) = rows
    g, s, t = _xgcd(a1, a2)
    if g == 0:
        raise ValueError("first column is zero; lattice is singular")
    top = (g, s * b1 + t * b2)
    bot = (-a2 // g) * b1 + (a1 // g) * b2
    if bot == 0:
        raise ValueError("matrix is singular")
    h22 = abs(bot)
    return g, top[1] % h22, h22


def _lattice_index_is_one(rows: list[list[int]]) -> bool:
    # HNF of a stack of integer rows spanning a sublattice of Z^2: index 1 test
    pairs = [r for r in rows if r[0] or r[1]]
    # eliminate first column
    acc: Optional[list[int]] = None
    seconds = []
    for r in pairs:
        if r[0] == 0:
            seconds.append(r[1])
            continue
        if acc is None:
            acc = list(r)
            continue
        gg, s, t = _xgcd(acc[0], r[0])
        new_second = (-r[0] // gg) * acc[1] + (acc[0] // gg) * r[1]
        acc = [gg, s * acc[1] + t * r[1]]
        seconds.append(new_second)
    if acc is None or acc[0] == 0:
        return False
    g2 = 0
    for s in seconds:
        g2 = math.gcd(g2, s)
    return abs(acc[0]) == 1 and g2 == 1


def quotient(modulus: PrincipalIdeal) -> QuotientRing:
    """Finite quotient R/cR; raises ZeroIdeal before this point if c = 0."""
    return QuotientRing(modulus)


def unit_order(x: RingElement, q: QuotientRing) -> int:
    """Smallest k >= 1 with x^k = 1 modulo the ideal, by iterated multiplication."""
    if x.ring != q.ring:
        raise MixedRings(f"{x.ring.name} vs {q.ring.name}")
    if not q.is_unit(x):
        raise NotUnitInQuotient(f"{x} is not invertible modulo {q.modulus}")
    one = q.one_enc
    base = q.encode(x)
    acc = base
    for k in range(1, q.index + 1):
        if acc == one:
            return k
        acc = q.mul_enc(acc, base)
    raise OrderSearchExhausted(
        f"no order below the cap {q.index}; quotient arithmetic is inconsistent"
    )


def pell_fundamental_unit(d: int, cap: int = DEFAULT_PELL_CAP) -> tuple[int, int]:
    """Smallest (a, b), b >= 1, with a^2 - d*b^2 = +-1, by brute-force search on b."""
    for b in range(1, cap + 1):
        db2 = d * b * b
        for target in (db2 - 1, db2 + 1):
            a = math.isqrt(target)
            if a * a == target:
                return a, b
    raise PellSearchExhausted(f"no Pell solution for d={d} with b <= {cap}")


def infinite_order_unit(ring: RingDescriptor, pell_cap: int = DEFAULT_PELL_CAP) -> RingElement:
    """A unit whose powers never repeat: the smallest inverted prime for Z[1/m],
    the fundamental Pell unit for Z[sqrt(d)]."""
    if ring.kind == INTEGERS:
        raise NoInfiniteOrderUnit("Z has only the units 1 and -1")
    if ring.kind == LOCALIZED:
        return ring.from_int(min(ring.inverted_primes))
    a, b = pell_fundamental_unit(ring.param, pell_cap)
    return ring.from_pair(a, b)


# ---------------------------------------------------------------------------
# text syntax


_RING_RE = re.compile(r"^Z(?:\[\s*(?:1\s*/\s*(\d+)|sqrt\(?\s*(\d+)\s*\)?)\s*\])?$")


def parse_ring(text: str) -> RingDescriptor:
    """Parse 'Z', 'Z[1/m]', or 'Z[sqrtd]' (also accepts 'Z[sqrt(d)]')."""
    m = _RING_RE.match(text.strip())
    if not m:
        raise ParseError(f"cannot parse ring descriptor {text!r}")
    inv, root = m.groups()
    try:
        if inv is not None:
            return localized(int(inv))
        if root is not None:
            return quadratic(int(root))
        return integers()
    except ValueError as exc:
        raise ParseError(str(exc)) from None


_INT_RE = re.compile(r"^[+-]?\d+$")
_FRAC_RE = re.compile(r"^([+-]?\d+)\s*/\s*(\d+)(?:\s*\^\s*(\d+))?$")
_QUAD_RE = re.compile(
    r"^\s*(?:([+-]?\d+)\s*)?"  # optional rational part
    r"(?:(?(1)([+-])|([+-]?))\s*"  # sign separating the root term
    r"(?:(\d+)\s*\*\s*)?sqrt\(?\s*(\d+)\s*\)?)?\s*$"
)


def parse_element(ring: RingDescriptor, text: str) -> RingElement:
    """Parse one element in the ring's text syntax; inverse of str()."""
    text = text.strip()
    if _INT_RE.match(text):
        return ring.from_int(int(text))
    if ring.kind == QUADRATIC:
        m = _QUAD_RE.match(text)
        if m and (m.group(1) is not None or m.group(5) is not None):
            rat_s, sign1, sign2, coeff_s, d_s = m.groups()
            a = int(rat_s) if rat_s is not None else 0
            b = 0
            if d_s is not None:
                if int(d_s) != ring.param:
                    raise ParseError(f"{text!r}: root {d_s} does not match {ring.name}")
                b = int(coeff_s) if coeff_s is not None else 1
                sign = sign1 if sign1 is not None else sign2
                if sign == "-":
                    b = -b
            try:
                return ring.from_pair(a, b)
            except ValueError as exc:
                raise ParseError(str(exc)) from None
        raise ParseError(f"cannot parse {text!r} as an element of {ring.name}")
    m = _FRAC_RE.match(text)
    if m:
        num, den, exp = m.groups()
        d = int(den) ** int(exp) if exp is not None else int(den)
        if d == 0:
            raise ParseError(f"{text!r} has a zero denominator")
        try:
            return ring.from_fraction(int(num), d)
        except ValueError as exc:
            raise ParseError(str(exc)) from None
    raise ParseError(f"cannot parse {text!r} as an element of {ring.name}")


def random_element(ring: RingDescriptor, rng, height_bound: int = 10) -> RingElement:
    """Uniform-ish random element with all integer data bounded by height_bound."""
    h = max(1, height_bound)
    if ring.kind == QUADRATIC:
        return ring.from_pair(rng.randint(-h, h), rng.randint(-h, h))
    if ring.kind == LOCALIZED:
        m = ring.param
        exp = 0
        if m <= h:
            max_exp = 0
            while m ** (max_exp + 1) <= h:
                max_exp += 1
            exp = rng.randint(0, max_exp)
        return ring.from_fraction(rng.randint(-h, h), m**exp)
    return ring.from_int(rng.randint(-h, h))
