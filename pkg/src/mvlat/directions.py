"""The six edge directions of a canonical diagram.

Direction ``k`` points at angle ``k*pi/3``:

====  =====  =========================
 k    name   size change along the edge
====  =====  =========================
 0    e3     x down, y up
 1    e2     x down, z up
 2    e1     y down, z up
 3    -e3    x up, y down
 4    -e2    x up, z down
 5    -e1    y up, z down
====  =====  =========================

The table is linear: the direction of a size change ``(dx, dy, dz)`` is the
image of its sign vector, so opposite changes give opposite directions.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import MalformedComplexError

NAMES = ("e3", "e2", "e1", "-e3", "-e2", "-e1")

# sign vector of (dx, dy, dz) -> direction index
_SIGNS = {
    (-1, 1, 0): 0,
    (-1, 0, 1): 1,
    (0, -1, 1): 2,
    (1, -1, 0): 3,
    (1, 0, -1): 4,
    (0, 1, -1): 5,
}
SIGNS_OF = {k: s for s, k in _SIGNS.items()}

# direction index -> step in the (lambda, mu) basis, position = lambda*e2 + mu*e3
STEP = {
    0: (0, 1),
    1: (1, 0),
    2: (1, -1),
    3: (0, -1),
    4: (-1, 0),
    5: (-1, 1),
}

ASCENDING = frozenset({2, 1, 3})  # e1, e2, -e3

# coordinate whose size decreases along each direction
DECREASING = {k: s.index(-1) for k, s in SIGNS_OF.items()}


def opposite(k: int) -> int:
    return (k + 3) % 6


def _sign(v: int) -> int:
    return (v > 0) - (v < 0)


def direction_of_change(before, after) -> int:
    """Direction of the move from box corner ``before`` to ``after``."""
    key = tuple(_sign(b - a) for a, b in zip(before, after))
    try:
        return _SIGNS[key]
    except KeyError:
        raise MalformedComplexError(
            f"corners {before} -> {after} do not change exactly one size up and one down"
        ) from None


def ray_direction(dropped_axis: int) -> int:
    """Direction of an unbounded edge whose far side loses coordinate ``dropped_axis``.

    The size along ``dropped_axis`` shrinks and the next coordinate (cyclically)
    is taken to grow without bound.
    """
    signs = [0, 0, 0]
    signs[dropped_axis] = -1
    signs[(dropped_axis + 1) % 3] = 1
    return _SIGNS[tuple(signs)]


def step_vector(k: int) -> tuple[Fraction, Fraction]:
    lam, mu = STEP[k]
    return Fraction(lam), Fraction(mu)


def classify_step(dlam, dmu) -> int | None:
    """Direction index of a nonzero planar step, or None if off the six rays."""
    if dmu == 0:
        return 1 if dlam > 0 else 4 if dlam < 0 else None
    if dlam == 0:
        return 0 if dmu > 0 else 3
    if dlam == -dmu:
        return 2 if dlam > 0 else 5
    return None
