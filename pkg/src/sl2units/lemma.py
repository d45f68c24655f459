"""Unit certificates and bounded-conjugate witnesses.

Two constructions live here, both exact and both re-verifiable from their
recorded data alone.

* A unit certificate for a nonzero c: starting from a unit v of infinite
  order, the power u = v^k (k the multiplicative order of v modulo c^2)
  satisfies u - 1 = c^2*y and u^8 != 1.

* A bounded-conjugate witness: for A with nonzero lower-left corner c and a
  certified unit u, the transvection E12((u^4 - u^-4)*z) -- for any z in cR
  -- is written as a product of exactly four conjugates of A and A^-1, with
  every conjugator congruent to the identity modulo c.  The verifier
  recomputes the whole construction and multiplies everything back out.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

from .elemgen import reduces_to_identity
from .errors import (
    FormCheckFailed,
    MixedRings,
    NonUnit,
    ScalarInput,
    UnitCongruenceViolated,
    VerificationFailed,
    ZeroCorner,
    ZeroIdeal,
    ZNotInIdeal,
)
from .rings import (
    DEFAULT_PELL_CAP,
    PrincipalIdeal,
    RingDescriptor,
    RingElement,
    exact_quotient,
    in_ideal,
    infinite_order_unit,
    is_unit,
    quotient,
    unit_order,
)
from .sl2 import (
    GroupWord,
    Mat2,
    commutator,
    conjugate,
    diag,
    elem12,
    elem21,
    identity,
    word_diag,
    word_elem,
)


@dataclass(frozen=True)
class ManyUnitsCertificate:
    """Certified data (c, v, u = v^k, y) with u - 1 = c^2*y and u^8 != 1."""

    c: RingElement
    v: RingElement
    u: RingElement
    k: int
    y: RingElement
    check_u8: bool

    @property
    def ring(self) -> RingDescriptor:
        return self.c.ring


def verify_certificate(cert: ManyUnitsCertificate) -> None:
    """Recheck every certificate invariant; raises VerificationFailed."""
    if not cert.c:
        raise VerificationFailed("certificate has c = 0")
    if cert.k < 1:
        raise VerificationFailed(f"exponent k = {cert.k} is not positive")
    if is_unit(cert.v) is None:
        raise VerificationFailed(f"base {cert.v} is not a unit")
    if cert.u != cert.v**cert.k:
        raise VerificationFailed(f"u is not {cert.v}^{cert.k}")
    if cert.u - 1 != cert.c * cert.c * cert.y:
        raise VerificationFailed("u - 1 does not equal c^2 * y")
    eighth = cert.u**8
    if eighth == 1:
        raise VerificationFailed("u^8 = 1, so u generates no usable ideal")
    if not cert.check_u8:
        raise VerificationFailed("check_u8 flag is unset")


def find_unit(
    c: RingElement,
    ring: Optional[RingDescriptor] = None,
    *,
    pell_cap: int = DEFAULT_PELL_CAP,
) -> ManyUnitsCertificate:
    """Certify a unit u with u - 1 divisible by c^2 and u^8 != 1.

    Takes v of infinite order, computes the order k of v in (R/c^2 R)*, and
    sets u = v^k.  The smallest such k is used so results are deterministic.
    """
    if ring is None:
        ring = c.ring
    elif ring != c.ring:
        raise MixedRings(f"{c.ring.name} vs {ring.name}")
    if not c:
        raise ZeroIdeal("cannot certify a unit for c = 0")
    v = infinite_order_unit(ring, pell_cap)
    k = unit_order(v, quotient(PrincipalIdeal(c * c)))
    u = v**k
    y = exact_quotient(u - 1, c * c)
    if y is None:
        raise FormCheckFailed("u - 1 is not divisible by c^2 despite the order computation")
    cert = ManyUnitsCertificate(c=c, v=v, u=u, k=k, y=y, check_u8=(u**8 != ring.one()))
    verify_certificate(cert)
    return cert


def epsilon_ideal(cert: ManyUnitsCertificate) -> PrincipalIdeal:
    """The ideal ((u^8 - 1) * c); nonzero in these integral domains since u^8 != 1."""
    return PrincipalIdeal((cert.u**8 - 1) * cert.c)


class YParts(NamedTuple):
    """Output of compute_Y: the upper-triangular Y plus the scalars it certifies."""

    Y: Mat2
    q: RingElement
    t: RingElement
    x: RingElement
    y: RingElement


def compute_Y(A: Mat2, u: RingElement) -> YParts:
    """Conjugate A^-1 and A into an upper-triangular product.

    With c the lower-left corner of A and u = 1 + c^2*y, set x = (u^4 - 1)/c
    and t = a*x.  Then E12(t) A^-1 E12(-t) diag(u^2) A diag(u^-2) equals
    [[u^-4, q], [0, u^4]] for some q in cR; x, t, q all lie in cR.  The form
    checks are asserted; FormCheckFailed firing would falsify the algebra.
    """
    if u.ring != A.ring:
        raise MixedRings(f"{A.ring.name} vs {u.ring.name}")
    c = A.c
    if not c:
        raise ZeroCorner("lower-left corner is zero")
    if is_unit(u) is None:
        raise NonUnit(f"{u} is not a unit of {u.ring.name}")
    y = exact_quotient(u - 1, c * c)
    if y is None:
        raise UnitCongruenceViolated(f"{u} - 1 is not divisible by ({c})^2")
    x = exact_quotient(u**4 - 1, c)
    if x is None or x != c * y * (u**3 + u**2 + u + 1):
        raise FormCheckFailed("x != c*y*(u^3 + u^2 + u + 1)")
    ideal = PrincipalIdeal(c)
    if not in_ideal(x, ideal):
        raise FormCheckFailed("x is not in cR")
    t = A.a * x
    if not in_ideal(t, ideal):
        raise FormCheckFailed("t = a*x is not in cR")
    u2 = u * u
    Y = elem12(t) * A.inverse() * elem12(-t) * diag(u2) * A * diag(u2.inverse())
    if Y.c or Y.a != u**-4 or Y.d != u**4:
        raise FormCheckFailed("Y is not upper triangular with diagonal (u^-4, u^4)")
    q = Y.b
    if not in_ideal(q, ideal):
        raise FormCheckFailed("q is not in cR")
    return YParts(Y=Y, q=q, t=t, x=x, y=y)


@dataclass(frozen=True)
class ConjugateFactor:
    """One factor g * core * g^-1, where core is the witnessed matrix (or its
    inverse when core_inverted is set) and g is given as a structured word."""

    conjugator: GroupWord
    core_inverted: bool

    def evaluate(self, core: Mat2) -> Mat2:
        g = self.conjugator.evaluate()
        inner = core.inverse() if self.core_inverted else core
        return g * inner * g.inverse()


@dataclass(frozen=True)
class ConjugateWitness:
    """Four conjugates of A / A^-1 multiplying out to E12((u^4 - u^-4)*z).

    The sign convention is p = -q - z: the triangular identity produces
    E12((u^-4 - u^4)(p + q)), and this choice of p turns it into the target
    exactly (z and -z range over the same ideal).
    """

    matrix: Mat2
    u: RingElement
    z: RingElement
    t: RingElement
    q: RingElement
    p: RingElement
    Y: Mat2
    factors: tuple[ConjugateFactor, ...]
    target: Mat2

    @property
    def ring(self) -> RingDescriptor:
        return self.matrix.ring


def verify_witness(w: ConjugateWitness) -> None:
    """Recheck every witness invariant from the recorded data; raises
    VerificationFailed with the first failure."""
    A = w.matrix
    c = A.c
    if not c:
        raise VerificationFailed("witnessed matrix has zero lower-left corner")
    try:
        parts = compute_Y(A, w.u)
    except Exception as exc:
        raise VerificationFailed(f"recomputing Y failed: {exc}") from None
    if parts.Y != w.Y:
        raise VerificationFailed("recorded Y does not match the recomputation")
    if parts.q != w.q or parts.t != w.t:
        raise VerificationFailed("recorded q or t does not match the recomputation")
    ideal = PrincipalIdeal(c)
    for name, value in (("z", w.z), ("t", w.t), ("q", w.q), ("p", w.p)):
        if not in_ideal(value, ideal):
            raise VerificationFailed(f"{name} = {value} is not in ({c})")
    if w.p != -w.q - w.z:
        raise VerificationFailed("p does not follow the p = -q - z convention")
    u4 = w.u**4
    if w.target != elem12((u4 - u4.inverse()) * w.z):
        raise VerificationFailed("target is not E12((u^4 - u^-4)*z)")
    if len(w.factors) != 4:
        raise VerificationFailed(f"expected exactly 4 factors, found {len(w.factors)}")
    product = identity(A.ring)
    for i, factor in enumerate(w.factors):
        g = factor.conjugator.evaluate()
        if not reduces_to_identity(g, ideal):
            raise VerificationFailed(f"conjugator {i} is not congruent to I mod ({c})")
        product = product * factor.evaluate(A)
    if product != w.target:
        raise VerificationFailed("product of the four conjugate factors misses the target")


def lemma2_witness(A: Mat2, u: RingElement, z: RingElement) -> ConjugateWitness:
    """Build and verify the four-conjugate witness for E12((u^4 - u^-4)*z).

    The four conjugators are E12(t), diag(u^2), M*diag(u^2), and M*E12(t),
    where M = [[u^4, p], [0, u^-4]] = diag(u^4)*E12(p*u^-4) is recorded in
    exactly that regrouped form so the words stay inspectable.
    """
    if z.ring != A.ring:
        raise MixedRings(f"{A.ring.name} vs {z.ring.name}")
    parts = compute_Y(A, u)
    c = A.c
    if not in_ideal(z, PrincipalIdeal(c)):
        raise ZNotInIdeal(f"{z} is not in ({c})")
    p = -parts.q - z
    u2 = u * u
    u4 = u2 * u2
    g1 = word_elem("12", parts.t)
    g2 = word_diag(u2)
    m_word = word_diag(u4) * word_elem("12", p * u4.inverse())
    factors = (
        ConjugateFactor(g1, core_inverted=True),
        ConjugateFactor(g2, core_inverted=False),
        ConjugateFactor(m_word * g2, core_inverted=True),
        ConjugateFactor(m_word * g1, core_inverted=False),
    )
    witness = ConjugateWitness(
        matrix=A,
        u=u,
        z=z,
        t=parts.t,
        q=parts.q,
        p=p,
        Y=parts.Y,
        factors=factors,
        target=elem12((u4 - u4.inverse()) * z),
    )
    verify_witness(witness)
    return witness


# ---------------------------------------------------------------------------
# corner normalization


@dataclass(frozen=True)
class Unchanged:
    """The corner was already nonzero."""


@dataclass(frozen=True)
class Conjugated:
    """The result is g * A * g^-1 for the recorded g."""

    g: Mat2


@dataclass(frozen=True)
class CommutatorTaken:
    """The result is A g A^-1 g^-1 (conjugated afterwards if post_conjugator
    is set, which the 2x2 case never actually needs)."""

    g: Mat2
    post_conjugator: Optional[Mat2] = None


CornerProvenance = object  # Unchanged | Conjugated | CommutatorTaken


class CornerResult(NamedTuple):
    matrix: Mat2
    provenance: CornerProvenance
    norm_factor: int


def _antidiagonal_unit(ring: RingDescriptor) -> Mat2:
    """[[0, 1], [-1, 0]] = E12(1) E21(-1) E12(1); conjugation by it swaps corners."""
    one = ring.one()
    return elem12(one) * elem21(-one) * elem12(one)


def ensure_nonzero_corner(A: Mat2) -> CornerResult:
    """Replace a non-scalar A by a conjugate or commutator whose lower-left
    corner is nonzero.

    Conjugation preserves any conjugation-invariant norm (factor 1); the
    commutator route costs at most a factor of 2 by the triangle inequality,
    which downstream ideal bookkeeping must account for.
    """
    if A.is_scalar():
        raise ScalarInput("scalar matrices stay scalar under conjugation")
    if A.c:
        return CornerResult(A, Unchanged(), 1)
    ring = A.ring
    if A.b:
        g = _antidiagonal_unit(ring)
        return CornerResult(conjugate(g, A), Conjugated(g), 1)
    # non-scalar diagonal: [A, E21(1)] = E21(d^2 - 1) has a nonzero corner
    g = elem21(ring.one())
    m = commutator(A, g)
    if m.c:
        return CornerResult(m, CommutatorTaken(g), 2)
    w = _antidiagonal_unit(ring)
    m = conjugate(w, m)
    if not m.c:
        raise FormCheckFailed("corner normalization produced a zero corner twice")
    return CornerResult(m, CommutatorTaken(g, post_conjugator=w), 2)
