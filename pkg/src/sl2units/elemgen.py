"""Writing determinant-one matrices as products of transvections.

The driver runs Euclidean reduction on the first column: row operations
shrink the lower-left entry against the upper-left one until the matrix is
upper triangular, and the residual diagonal part diag(u, 1/u) is absorbed
through a fixed six-transvection identity.  Division strategies are
per-ring plug-ins (round-to-nearest over Z, Euclid on the prime-to-m parts
over Z[1/m], field-norm rounding over Z[sqrt(2)] and Z[sqrt(3)]).  If a
division step ever fails to shrink -- which the supported rings never do --
the driver falls back to a bounded breadth-first search with a deterministic
move order and raises SearchExhausted when the cap is hit.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .errors import NonUnit, SearchExhausted, UnsupportedRing
from .rings import (
    INTEGERS,
    LOCALIZED,
    QUADRATIC,
    PrincipalIdeal,
    RingDescriptor,
    RingElement,
    euclidean_size,
    exact_quotient,
    is_unit,
    quotient,
)
from .sl2 import (
    ConjFactor,
    DiagFactor,
    ElemFactor,
    GroupWord,
    InvFactor,
    Mat2,
    diag,
    elem12,
    elem21,
    identity,
    reduce_mat,
    word_elem,
)

DEFAULT_DEPTH_CAP = 12
DEFAULT_NODE_CAP = 50_000


@dataclass(frozen=True)
class Decomposition:
    """A matrix together with a flat transvection word that multiplies out to it.

    Both invariants are checked at construction: the word contains only
    ElemFactor nodes, and its evaluation equals the matrix exactly.
    """

    matrix: Mat2
    word: GroupWord

    def __post_init__(self):
        if any(not isinstance(f, ElemFactor) for f in self.word.factors):
            raise ValueError("decomposition words admit only transvection factors")
        if self.word.evaluate() != self.matrix:
            raise ValueError("word does not evaluate to the decomposed matrix")

    @property
    def length(self) -> int:
        return len(self.word.factors)


def h_decomposition(u: RingElement) -> Decomposition:
    """diag(u, 1/u) as the six transvections E12(u) E21(-1/u) E12(u) E12(-1) E21(1) E12(-1)."""
    inv = is_unit(u)
    if inv is None:
        raise NonUnit(f"{u} is not a unit of {u.ring.name}")
    one = u.ring.one()
    word = (
        word_elem("12", u)
        * word_elem("21", -inv)
        * word_elem("12", u)
        * word_elem("12", -one)
        * word_elem("21", one)
        * word_elem("12", -one)
    )
    return Decomposition(diag(u), word)


def expand_diagonals(word: GroupWord) -> GroupWord:
    """Replace every diagonal factor by its six-transvection expansion, recursively."""
    out: list = []
    for f in word.factors:
        if isinstance(f, ElemFactor):
            out.append(f)
        elif isinstance(f, DiagFactor):
            out.extend(h_decomposition(f.unit).word.factors)
        elif isinstance(f, ConjFactor):
            out.append(ConjFactor(expand_diagonals(f.conjugator), expand_diagonals(f.inner)))
        elif isinstance(f, InvFactor):
            out.append(InvFactor(expand_diagonals(f.inner)))
        else:
            raise TypeError(f"unknown factor {f!r}")
    return GroupWord(word.ring, tuple(out))


# ---------------------------------------------------------------------------
# division strategies


def _divide_integers(x: RingElement, y: RingElement) -> RingElement:
    return x.ring.from_int(round(x.rat / y.rat))


def _divide_localized(x: RingElement, y: RingElement) -> RingElement:
    # Euclid on the prime-to-m parts: x = ux*nx and y = uy*ny with ux, uy units,
    # so x - (t*ux/uy)*y = ux*(nx - t*ny) and the remainder size is |nx - t*ny|.
    ring = x.ring
    if not x:
        return ring.zero()
    nx, ny = euclidean_size(x), euclidean_size(y)
    ux = exact_quotient(x, ring.from_int(nx))
    uy = exact_quotient(y, ring.from_int(ny))
    t = round(Fraction(nx, ny))
    return ux * uy.inverse() * t


def _divide_quadratic(x: RingElement, y: RingElement) -> RingElement:
    # rounding x/y componentwise keeps |N(remainder)| <= (d+1)/4 * |N(y)| < |N(y)|
    # for d in {2, 3}
    n = y.field_norm()
    num = x * y.conjugate()
    return x.ring.from_pair(round(num.rat / n), round(Fraction(num.irr) / n))


def _division_for(ring: RingDescriptor):
    if ring.kind == INTEGERS:
        return _divide_integers
    if ring.kind == LOCALIZED:
        return _divide_localized
    if ring.kind == QUADRATIC and ring.param in (2, 3):
        return _divide_quadratic
    raise UnsupportedRing(f"no elementary decomposition strategy for {ring.name}")


# ---------------------------------------------------------------------------
# the decomposition driver


def decompose(
    matrix: Mat2,
    *,
    depth_cap: int = DEFAULT_DEPTH_CAP,
    node_cap: int = DEFAULT_NODE_CAP,
) -> Decomposition:
    """Express the matrix as a product of transvections.

    Supported over Z, Z[1/m], Z[sqrt(2)], and Z[sqrt(3)]; other rings raise
    UnsupportedRing.  The breadth-first fallback (only reachable if a division
    step fails to shrink the Euclidean size) raises SearchExhausted at the cap.
    """
    ring = matrix.ring
    divide = _division_for(ring)
    one = ring.one()
    factors: list[ElemFactor] = []
    m = matrix
    while m.c:
        if m.a == 1:
            # one row operation clears the corner outright
            factors.append(ElemFactor("21", m.c))
            m = elem21(-m.c) * m
            continue
        inv_c = is_unit(m.c)
        if inv_c is not None:
            # unit corner: one row operation pins a = 1, a second clears c
            if m.a != 1:
                t = (one - m.a) * inv_c
                m = elem12(t) * m
                factors.append(ElemFactor("12", -t))
            factors.append(ElemFactor("21", m.c))
            m = elem21(-m.c) * m
            continue
        inv_a = is_unit(m.a) if m.a else None
        if inv_a is not None:
            # unit pivot: steer the corner to 1 and let the branch above finish
            t = (one - m.c) * inv_a
            m = elem21(t) * m
            factors.append(ElemFactor("21", -t))
            continue
        if not m.a:
            # defensive only: a = 0 forces c to be a unit, handled above
            m = elem12(one) * m
            factors.append(ElemFactor("12", -one))
            continue
        if euclidean_size(m.c) >= euclidean_size(m.a):
            q = divide(m.c, m.a)
            r = m.c - q * m.a
            if euclidean_size(r) >= euclidean_size(m.c):
                return _bfs_decompose(matrix, depth_cap, node_cap)
            m = elem21(-q) * m
            factors.append(ElemFactor("21", q))
        else:
            q = divide(m.a, m.c)
            r = m.a - q * m.c
            if euclidean_size(r) >= euclidean_size(m.a):
                return _bfs_decompose(matrix, depth_cap, node_cap)
            m = elem12(-q) * m
            factors.append(ElemFactor("12", q))
    # m is now [[a, b], [0, 1/a]] = diag(a, 1/a) * E12(b/a) with a a unit
    if m.a == 1:
        if m.b:
            factors.append(ElemFactor("12", m.b))
    else:
        factors.extend(h_decomposition(m.a).word.factors)
        shifted = m.b * m.a.inverse()
        if shifted:
            factors.append(ElemFactor("12", shifted))
    return Decomposition(matrix, GroupWord(ring, tuple(factors)))


def _bfs_moves(ring: RingDescriptor) -> list[RingElement]:
    if ring.kind == QUADRATIC:
        pool = [
            ring.from_pair(a, b)
            for a in (-1, 0, 1)
            for b in (-1, 0, 1)
            if (a, b) != (0, 0)
        ]
    else:
        pool = [ring.from_int(v) for v in (-2, -1, 1, 2)]
    pool.sort(key=lambda e: (max(1, abs(e.rat.numerator)), e.rat, e.irr))
    return pool


def _bfs_decompose(matrix: Mat2, depth_cap: int, node_cap: int) -> Decomposition:
    """Breadth-first search over left row operations, deterministic move order."""
    ring = matrix.ring
    args = _bfs_moves(ring)
    moves = [("12", a) for a in args] + [("21", a) for a in args]
    inverses = {
        (pos, a): (elem12(-a) if pos == "12" else elem21(-a)) for pos, a in moves
    }
    ident = identity(ring)
    if matrix == ident:
        return Decomposition(matrix, GroupWord(ring))
    start = matrix
    seen = {start.entries}
    queue: deque[tuple[Mat2, tuple, int]] = deque([(start, (), 0)])
    visited = 0
    while queue:
        current, path, depth = queue.popleft()
        if depth >= depth_cap:
            continue
        for move in moves:
            nxt = inverses[move] * current
            if nxt == ident:
                factors = tuple(ElemFactor(p, a) for p, a in path + (move,))
                return Decomposition(matrix, GroupWord(ring, factors))
            key = nxt.entries
            if key in seen:
                continue
            seen.add(key)
            visited += 1
            if visited > node_cap:
                raise SearchExhausted(
                    f"no elementary word found within {node_cap} explored states"
                )
            queue.append((nxt, path + (move,), depth + 1))
    raise SearchExhausted(f"no elementary word of length <= {depth_cap} found")


@dataclass(frozen=True)
class LengthStats:
    """Word-length summary over a sample; the max is an empirical lower bound
    on any uniform elementary-generation constant for the ring."""

    count: int
    max_length: int
    mean_length: float
    lengths: tuple[int, ...]


def length_stats(sample: list[Mat2], **caps) -> LengthStats:
    lengths = tuple(decompose(m, **caps).length for m in sample)
    if not lengths:
        return LengthStats(0, 0, 0.0, ())
    return LengthStats(len(lengths), max(lengths), sum(lengths) / len(lengths), lengths)


def reduces_to_identity(matrix: Mat2, ideal: PrincipalIdeal) -> bool:
    """Necessary condition for membership in the relative elementary subgroup
    of the ideal: the image of the matrix in SL2(R/cR) is the identity."""
    q = quotient(ideal)
    zero = q.encode(q.ring.zero())
    one = q.one_enc
    return reduce_mat(matrix, q) == (one, zero, zero, one)
