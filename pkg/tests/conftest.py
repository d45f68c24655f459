"""Shared fixtures and samplers for the test suite."""

import random

import pytest

from sl2units.rings import (
    euclidean_size,
    height,
    integers,
    localized,
    quadratic,
    random_element,
)
from sl2units.sl2 import elem12, elem21, identity

ALL_RINGS = [integers(), localized(2), localized(3), localized(6), quadratic(2), quadratic(3)]

# rings whose corner entries admit certified units (Z is excluded: units are +-1)
WITNESS_RINGS = [localized(2), localized(3), localized(6), quadratic(2)]


@pytest.fixture
def rng():
    return random.Random(0x5E7)


def random_sl2(ring, rng, factors=5, arg_height=5):
    """Random determinant-1 matrix built as a short product of transvections."""
    m = identity(ring)
    for _ in range(rng.randint(1, factors)):
        x = random_element(ring, rng, arg_height)
        m = m * (elem12(x) if rng.random() < 0.5 else elem21(x))
    return m


def random_witness_matrix(ring, rng, *, corner_cap=60, entry_cap=1000):
    """Random SL2 matrix with nonzero lower-left corner of bounded size.

    The corner size cap keeps the quotient R/(c^2) small enough that unit
    certification stays fast; the entry cap bounds the height of every entry.
    """
    while True:
        m = random_sl2(ring, rng, factors=4, arg_height=3)
        if not m.c:
            continue
        if euclidean_size(m.c) > corner_cap:
            continue
        if max(height(e) for e in m.entries) > entry_cap:
            continue
        return m


def random_nonzero_nonunit(ring, rng, *, size_cap=40, height_bound=8):
    """Random c suitable for unit certification: c != 0, c not a unit."""
    from sl2units.rings import is_unit

    while True:
        c = random_element(ring, rng, height_bound)
        if not c or is_unit(c) is not None:
            continue
        if euclidean_size(c) > size_cap:
            continue
        return c
