"""Exact integer helpers: symmetric residues, continued fractions, continuants.

Everything here works on Python ints, so there is no overflow to guard
against; callers that export values to fixed-width formats check ranges
themselves (see :func:`check_int64`).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

from .errors import DomainError

INT64_MAX = 2**63 - 1


def check_int64(value: int, what: str = "value") -> int:
    """Raise if ``value`` does not fit a signed 64-bit integer."""
    if not -INT64_MAX - 1 <= value <= INT64_MAX:
        raise OverflowError(f"{what}={value} does not fit in 64 bits")
    return value


def sym_mod(a: int, n: int) -> int:
    """Symmetric residue ``min(a mod n, -a mod n)``, always in ``[0, n // 2]``."""
    if n <= 0:
        raise DomainError(f"modulus must be positive, got {n}")
    r = a % n
    return min(r, n - r)


def cf_expand(p: int, q: int) -> list[int]:
    """Regular continued fraction of ``p/q`` in its shortest form.

    The last partial quotient is at least 2 whenever the expansion has more
    than one term.  ``p`` may be zero or negative; only ``q`` is restricted.
    """
    if q == 0:
        raise DomainError("denominator must be nonzero")
    if q < 0:
        p, q = -p, -q
    terms = []
    while q:
        a, r = divmod(p, q)
        terms.append(a)
        p, q = q, r
    # The Euclidean algorithm already yields the shortest form, except for the
    # degenerate [.., 1] tail which it never produces; keep an explicit guard.
    if len(terms) > 1 and terms[-1] == 1:
        terms.pop()
        terms[-1] += 1
    return terms


def cf_alternate(terms: Sequence[int]) -> list[int]:
    """The other expansion of the same rational (ending with a 1)."""
    terms = list(terms)
    if terms[-1] == 1 and len(terms) > 1:
        terms.pop()
        terms[-1] += 1
    else:
        terms[-1] -= 1
        terms.append(1)
    return terms


def continuant(xs: Sequence[int]) -> int:
    """K(x1, ..., xn) by the three-term recurrence; ``K() == 1``."""
    prev, cur = 0, 1  # K over a (-1)-length window, then K()
    for x in xs:
        prev, cur = cur, cur * x + prev
    return cur


def continuant_window(xs: Sequence[int], start: int, stop: int) -> int:
    """Continuant of ``xs[start:stop]``; a window of length -1 gives 0."""
    length = stop - start
    if length == -1:
        return 0
    if length < -1:
        raise ValueError(f"window length {length} < -1")
    return continuant(xs[start:stop])


def cf_value(terms: Sequence[int]) -> Fraction:
    """Evaluate ``[a0; a1, ..., an]`` as an exact fraction via continuants."""
    terms = list(terms)
    return Fraction(continuant(terms), continuant(terms[1:]))


def planar_minima_2d(b: int, n: int) -> list[tuple[int, int]]:
    """Folded relative minima of the planar lattice spanned by (1, b), (0, n).

    Returns ``g_0, ..., g_{s+1}`` where ``b/n = [0; a1, ..., as]``, as absolute
    value pairs; ``g_0 = (0, n)``, ``g_1 = (1, b)`` and ``g_{s+1} = (n, 0)``.
    """
    if not 1 <= b < n:
        raise DomainError(f"need 1 <= b < N, got b={b}, N={n}")
    if gcd(b, n) != 1:
        raise DomainError(f"gcd(b, N) = {gcd(b, n)} != 1")
    quotients = cf_expand(b, n)[1:]  # a1..as
    s = len(quotients)
    out = []
    for j in range(s + 2):
        # a_i lives at quotients[i - 1]
        x = continuant_window(quotients, 0, j - 1)
        y = continuant_window(quotients, j, s)
        out.append((x, y))
    return out
