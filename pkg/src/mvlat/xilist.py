"""The Xi candidate list: a structural superset of a lattice's relative minima.

Write ``x`` for the first coordinate of a folded point ``(x, |ax|_N, |bx|_N)``.
The range ``[0, N/2)`` splits into ``a`` intervals ``I_k`` and each of those
into a short end piece (type 1), a stretch of length ``a*u + gamma`` next to
it (type 2) and the rest (type 3).  Relative minima of type 1 and 2 sit at a
handful of explicit ``x`` values.  Those of type 3 have ``|bx|_N <= alpha``.

For ``t >= 1`` the list has ``alpha + 5a + 3`` slots, in order:

* ``a`` type-1 slots, one per ``k``;
* ``4a`` type-2 slots, ordered by ``k``, then ``eps``, then left/right root;
* ``alpha`` type-3 slots, ordered by ``z = |bx|_N = 1..alpha``;
* the three axis points.

For ``t = 0`` there is no type-2 stretch and the type-3 bound becomes
``beta``, giving ``a + beta + 3`` slots.  For ``u = 0`` every integer point of
each type-2 stretch gets an extra slot after the ``4a`` formula slots.

Each type-2 candidate sits next to a root ``x = mN/b`` of ``|bx|_N``; the
roots on either side of ``j*N/a`` are used, with ``j = k/2`` (even ``k``) or
``(k+1)/2`` (odd ``k``), since ``I_k`` is adjacent to ``j*N/a``.  For odd
``k`` the stretch lies to the left, so a root exactly at ``j*N/a`` is taken
as the right-hand one and the left-hand one is a full period ``N/b`` away.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor

from .errors import DomainError
from .geocode import GeometricCode, code_from_comb, decode_code, encode_triple
from .minima import LatticeSpec, Point, pareto_minimal
from .numth import cf_expand, continuant, sym_mod

Interval = tuple[Fraction, Fraction]


@dataclass(frozen=True)
class XiEntry:
    slot: int
    kind: str  # "1", "2", "3" or "axis"
    provenance: tuple  # (k,) | (k, eps, side) | (z,) | (axis,)
    raw_x: int | None  # unfolded first coordinate; None for axis points
    point: Point | None  # None when raw_x is a multiple of N
    bound: int | None = None  # type-3 bound on |bx|_N

    @property
    def valid(self) -> bool:
        return self.point is not None


def list_size(code: GeometricCode) -> int:
    if code.t == 0:
        return code.a + code.beta + 3
    return code.alpha + 5 * code.a + 3


def partition_intervals(code: GeometricCode) -> list[dict[str, Interval]]:
    """Per ``k`` the pieces ``I1``, ``I2``, ``I3`` of ``I_k = [kN/2a, (k+1)N/2a)``.

    ``I2`` is omitted when ``t = 0``.
    """
    a, n = code.a, code.N
    w = code.a * code.u + code.gamma
    out = []
    for k in range(a):
        lo = Fraction(k * n, 2 * a)
        hi = Fraction((k + 1) * n, 2 * a)
        if code.t == 0:
            if k % 2 == 0:
                parts = {"I1": (lo, lo + 1), "I3": (lo + 1, hi)}
            else:
                parts = {"I1": (hi - 1, hi), "I3": (lo, hi - 1)}
        elif k % 2 == 0:
            parts = {"I1": (lo, lo + 1), "I2": (lo + 1, lo + w), "I3": (lo + w, hi)}
        else:
            parts = {"I1": (hi - 1, hi), "I2": (hi - w, hi - 1), "I3": (lo, hi - w)}
        out.append(parts)
    return out


def type1_x(a: int, n: int, k: int) -> int:
    if k % 2 == 0:
        return ceil(Fraction(k * n, 2 * a))
    return floor(Fraction((k + 1) * n, 2 * a))


def root_index(k: int) -> int:
    """Index ``j`` with ``j*N/a`` the endpoint of ``I_k`` the type-2 stretch touches."""
    return k // 2 if k % 2 == 0 else (k + 1) // 2


def type2_x(code: GeometricCode, k: int, eps: int, side: int) -> int:
    """Candidate next to the root of ``|bx|_N`` on ``side`` (0 left, 1 right) of ``j*N/a``."""
    a, b, n, beta = code.a, code.b, code.N, code.beta
    j = root_index(k)
    if k % 2 == 0:
        frac = Fraction(j * beta, a) % 1
        root = n * (Fraction(j, a) + Fraction(side, b) - frac / b)
    else:
        # mirror image: the stretch lies left of j*N/a, so a root sitting
        # exactly at j*N/a counts as the right one
        frac = Fraction(-j * beta, a) % 1
        root = n * (Fraction(j, a) + Fraction(side - 1, b) + frac / b)
    return floor(root) + eps


def inverse_of_b(b: int, n: int) -> int:
    """``b'`` with ``|b*b'|_N = 1``, from the penultimate convergent of ``N/b``."""
    terms = cf_expand(n, b)
    bp = continuant(terms[:-1]) % n
    if sym_mod(b * bp, n) != 1:
        raise DomainError(f"continuant inverse failed for b={b}, N={n}")
    return bp


def _fold(spec_a: int, spec_b: int, n: int, x: int) -> Point | None:
    if x % n == 0:
        return None
    return (sym_mod(x, n), sym_mod(spec_a * x, n), sym_mod(spec_b * x, n))


def xi_list(code: GeometricCode) -> list[XiEntry]:
    """Build the ordered candidate list, duplicates and invalid slots included."""
    a, b, n = decode_code(code)
    out: list[XiEntry] = []

    def add(kind, prov, x, bound=None):
        pt = _fold(a, b, n, x) if x is not None else None
        out.append(XiEntry(len(out), kind, prov, x, pt, bound))

    for k in range(a):
        add("1", (k,), type1_x(a, n, k))
    if code.t > 0:
        for k in range(a):
            for eps in (0, 1):
                for side in (0, 1):
                    add("2", (k, eps, side), type2_x(code, k, eps, side))
        if code.u == 0:
            # the stretch is shorter than a but the period N/b barely exceeds
            # it, so points far from the two formula roots can still be minima
            for k, parts in enumerate(partition_intervals(code)):
                lo, hi = parts["I2"]
                for x in range(ceil(lo), ceil(hi)):
                    add("2", (k, "stretch", x), x)
    bound = code.alpha if code.t > 0 else code.beta
    bp = inverse_of_b(b, n)
    for z in range(1, bound + 1):
        add("3", (z,), z * bp, bound)
    for axis in range(3):
        p = [0, 0, 0]
        p[axis] = n
        out.append(XiEntry(len(out), "axis", (axis,), None, tuple(p)))
    if code.u > 0 and len(out) != list_size(code):
        raise AssertionError(f"list has {len(out)} slots, expected {list_size(code)}")
    return out


def vrm_fast(spec: LatticeSpec) -> set[Point]:
    """Relative minima as the Pareto-minimal part of the candidate list."""
    spec.require_coprime()
    code = encode_triple(spec.a, spec.b, spec.N)
    if code.b != spec.b or code.N != spec.N:
        raise AssertionError("geometric code did not round-trip")
    return pareto_minimal(e.point for e in xi_list(code) if e.point is not None)


# -- affine forms -------------------------------------------------------------


@dataclass
class AffineForm:
    """Per coordinate ``(A, C, D)`` with value ``A*N + C*p + D``.

    ``p`` is ``u`` for the first two coordinates and ``t`` for the third.
    """

    coeffs: tuple[tuple[Fraction, Fraction, Fraction], ...]
    failures: list[tuple[int, int, int]]  # (t, u, coordinate)
    checked: int

    @property
    def ok(self) -> bool:
        return not self.failures


def _signed(v: int, n: int) -> int:
    r = v % n
    return r - n if r > n // 2 else r


def prefold_value(code: GeometricCode, s: int) -> tuple[int, int, int]:
    """Integer representative of the ``s``-th entry before folding."""
    a, b, n = decode_code(code)
    e = xi_list(code)[s]
    if e.kind == "axis":
        return tuple(int(c) for c in e.point)
    x = e.raw_x
    v = (x, _signed(a * x, n), _signed(b * x, n))
    if e.kind == "3" and v[2] < 0:
        # -v is the same lattice point up to sign; pick the one with z = k
        v = tuple(-c for c in v)
    return v


def _solve3(rows, rhs):
    m = [[Fraction(v) for v in r] + [Fraction(y)] for r, y in zip(rows, rhs)]
    for c in range(3):
        piv = next((r for r in range(c, 3) if m[r][c] != 0), None)
        if piv is None:
            return None
        m[c], m[piv] = m[piv], m[c]
        for r in range(3):
            if r != c and m[r][c] != 0:
                f = m[r][c] / m[c][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return tuple(m[i][3] / m[i][i] for i in range(3))


def affine_form_check(comb, s: int, grid) -> AffineForm:
    """Fit ``s``-th entry coordinates on three grid cells, verify on the rest."""
    cells = sorted(grid)
    codes = [code_from_comb(comb, t, u) for t, u in cells]
    sizes = {list_size(c) for c in codes}
    if len(sizes) != 1 or s >= sizes.pop():
        raise DomainError(f"slot {s} is not present across the whole grid")
    vals = [prefold_value(c, s) for c in codes]
    coeffs = []
    for coord in range(3):
        param = [(c.u if coord < 2 else c.t) for c in codes]
        rows = [(c.N, p, 1) for c, p in zip(codes, param)]
        fit = None
        for i in range(len(rows)):
            for j in range(i + 1, len(rows)):
                for k in range(j + 1, len(rows)):
                    fit = _solve3([rows[i], rows[j], rows[k]], [vals[i][coord], vals[j][coord], vals[k][coord]])
                    if fit is not None:
                        break
                if fit is not None:
                    break
            if fit is not None:
                break
        if fit is None:
            raise DomainError(f"degenerate fit for coordinate {coord}: grid cells are collinear")
        coeffs.append(fit)
    failures = []
    for (t, u), c, v in zip(cells, codes, vals):
        for coord in range(3):
            A, C, D = coeffs[coord]
            p = u if coord < 2 else t
            if A * c.N + C * p + D != v[coord]:
                failures.append((t, u, coord))
    return AffineForm(tuple(coeffs), failures, len(cells))
