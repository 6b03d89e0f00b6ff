"""Axial sets, Voronoi relative minima and minimal subsets.

A point is a tuple of nonnegative ints.  Relative minima are exactly the
dominance-minimal points (nothing else sits in their box), so the brute-force
path here is a Pareto filter.  Minimal subsets come in two flavours:

``literal``
    ``F`` is minimal when the closed box of ``F`` holds no other relative
    minimum.  Used for abstract finite sets.
``open_interior``
    ``F`` is minimal when no point of the ground set, other than the members
    of ``F`` that lie on the box boundary, sits strictly inside the box.  This
    is the boundary test of the Minkowski polyhedron and is what lattices use.
"""

from __future__ import annotations

import json
from bisect import bisect_left
from dataclasses import dataclass, field
from itertools import combinations
from math import gcd
from typing import Iterable, Literal, Sequence

from .errors import DegenerateInputError, DomainError
from .numth import sym_mod

Point = tuple[int, ...]
Mode = Literal["literal", "open_interior"]


@dataclass(frozen=True)
class AxialSet:
    """Finite point set with one anchor on each coordinate axis."""

    points: frozenset[Point]
    anchors: tuple[int, ...]

    def __post_init__(self):
        dim = len(self.anchors)
        if any(n <= 0 for n in self.anchors):
            raise DomainError(f"anchors must be positive: {self.anchors}")
        for p in self.points:
            if len(p) != dim or any(c < 0 for c in p):
                raise DomainError(f"bad point {p} for dimension {dim}")
        missing = [a for a in self.axis_points() if a not in self.points]
        if missing:
            raise DomainError(f"axis anchors missing from point set: {missing}")

    @classmethod
    def from_points(cls, points: Iterable[Sequence[int]], anchors=None) -> "AxialSet":
        pts = frozenset(tuple(int(c) for c in p) for p in points)
        if anchors is None:
            anchors = _infer_anchors(pts)
        return cls(pts, tuple(int(a) for a in anchors))

    @property
    def dim(self) -> int:
        return len(self.anchors)

    def axis_points(self) -> list[Point]:
        out = []
        for i, n in enumerate(self.anchors):
            p = [0] * self.dim
            p[i] = n
            out.append(tuple(p))
        return out

    def sorted_points(self) -> list[Point]:
        return sorted(self.points)

    def to_json(self) -> dict:
        return {"anchors": list(self.anchors), "points": [list(p) for p in self.sorted_points()]}

    @classmethod
    def from_json(cls, data: dict | str) -> "AxialSet":
        if isinstance(data, str):
            data = json.loads(data)
        return cls.from_points(data["points"], data.get("anchors"))


def _infer_anchors(points: frozenset[Point]) -> tuple[int, ...]:
    if not points:
        raise DomainError("empty point set")
    dim = len(next(iter(points)))
    anchors = []
    for i in range(dim):
        on_axis = [p[i] for p in points if p[i] > 0 and all(c == 0 for j, c in enumerate(p) if j != i)]
        if len(on_axis) != 1:
            raise DomainError(f"axis {i} must carry exactly one point, found {len(on_axis)}")
        anchors.append(on_axis[0])
    return tuple(anchors)


def box(points: Iterable[Point]) -> Point:
    """Componentwise maximum: the far corner of the box of ``points``."""
    return tuple(max(cs) for cs in zip(*points))


def dominates(p: Point, q: Point) -> bool:
    """``p <= q`` componentwise (``p`` lies in the box of ``q``)."""
    return all(a <= b for a, b in zip(p, q))


def strictly_below(p: Point, corner: Point) -> bool:
    return all(a < b for a, b in zip(p, corner))


# -- general position ---------------------------------------------------------


def is_general_position(s: AxialSet) -> tuple[bool, str | None]:
    """Check the general-position conditions; return ``(ok, first_violation)``."""
    n = s.dim
    pts = s.sorted_points()
    if (0,) * n in s.points:
        return False, "origin is a member"
    for i in range(n):
        on_plane = [p for p in pts if p[i] == 0]
        if len(on_plane) != n - 1:
            return False, f"coordinate plane x{i + 1}=0 holds {len(on_plane)} points, expected {n - 1}"
        axes = set()
        for p in on_plane:
            nz = [j for j, c in enumerate(p) if c != 0]
            if len(nz) != 1:
                return False, f"point {p} on plane x{i + 1}=0 is not on a coordinate axis"
            axes.add(nz[0])
        if len(axes) != len(on_plane):
            return False, f"two points of plane x{i + 1}=0 share an axis"
    for i in range(n):
        seen: dict[int, Point] = {}
        for p in pts:
            if p[i] == 0:
                continue
            if p[i] in seen:
                return False, f"plane x{i + 1}={p[i]} holds {seen[p[i]]} and {p}"
            seen[p[i]] = p
    return True, None


def require_general_position(s: AxialSet) -> None:
    ok, why = is_general_position(s)
    if not ok:
        raise DegenerateInputError(why)


# -- relative minima ----------------------------------------------------------


def pareto_minimal(points: Iterable[Point]) -> set[Point]:
    """Dominance-minimal elements of a finite point set (any dimension)."""
    pts = sorted(set(points))
    if not pts:
        return set()
    if len(pts[0]) != 3:
        return {p for p in pts if not any(q != p and dominates(q, p) for q in pts)}
    # 3D sweep in lexicographic order: anything that can dominate p comes
    # earlier.  ``stair`` is the 2D (y, z) front of the points kept so far,
    # sorted by y with z strictly decreasing.
    stair_y: list[int] = []
    stair_z: list[int] = []
    out = set()
    for p in pts:
        _, y, z = p
        i = bisect_left(stair_y, y + 1)  # entries with y' <= y
        if i and stair_z[i - 1] <= z:
            continue
        out.add(p)
        # drop the entries p now shadows: y' >= y and z' >= z, a contiguous run
        k = bisect_left(stair_y, y)
        j = k
        while j < len(stair_y) and stair_z[j] >= z:
            j += 1
        del stair_y[k:j]
        del stair_z[k:j]
        stair_y.insert(k, y)
        stair_z.insert(k, z)
    return out


def vrm_bruteforce(s: AxialSet) -> set[Point]:
    """Voronoi relative minima of a finite axial set."""
    return pareto_minimal(s.points)


# -- minimal subsets ----------------------------------------------------------


def minimal_subsets(
    s: AxialSet,
    ground: Iterable[Point] | None,
    k: int,
    mode: Mode = "literal",
    minima: set[Point] | None = None,
) -> set[frozenset[Point]]:
    """All minimal ``k``-element subsets of the relative minima of ``s``.

    This is the direct enumeration over all ``k``-subsets; the complex builder
    uses a faster construction and is checked against this one.
    """
    if k not in (1, 2, 3):
        raise DomainError(f"k must be 1, 2 or 3, got {k}")
    vrm = sorted(minima if minima is not None else vrm_bruteforce(s))
    if mode == "literal":
        others = vrm
    elif mode == "open_interior":
        others = sorted(set(ground if ground is not None else vrm) | set(vrm))
    else:
        raise DomainError(f"unknown mode {mode!r}")
    out = set()
    for combo in combinations(vrm, k):
        corner = box(combo)
        members = set(combo)
        if mode == "literal":
            bad = any(q not in members and dominates(q, corner) for q in others)
        else:
            bad = any(strictly_below(q, corner) for q in others)
        if not bad:
            out.add(frozenset(combo))
    return out


# -- rank-1 lattices ----------------------------------------------------------


@dataclass(frozen=True)
class LatticeSpec:
    """The lattice spanned by (1, a, b), (0, N, 0), (0, 0, N)."""

    a: int
    b: int
    N: int

    def __post_init__(self):
        if min(self.a, self.b, self.N) <= 0:
            raise DomainError(f"a, b, N must be positive: {self}")

    @property
    def coprime(self) -> bool:
        return gcd(self.a, self.N) == 1 and gcd(self.b, self.N) == 1

    def require_coprime(self) -> None:
        if not self.coprime:
            raise DomainError(f"gcd(a, N) and gcd(b, N) must be 1 for {self.key()}")

    def key(self) -> str:
        return f"({self.a},{self.b},{self.N})"


def fold_point(spec: LatticeSpec, x: int) -> Point:
    n = spec.N
    return (x, sym_mod(spec.a * x, n), sym_mod(spec.b * x, n))


def lattice_representatives(spec: LatticeSpec) -> list[Point]:
    """Axis anchors plus ``(x, |ax|_N, |bx|_N)`` for ``1 <= x <= N // 2``."""
    n = spec.N
    pts = [(n, 0, 0), (0, n, 0), (0, 0, n)]
    a, b = spec.a, spec.b
    for x in range(1, n // 2 + 1):
        ya = a * x % n
        zb = b * x % n
        pts.append((x, min(ya, n - ya), min(zb, n - zb)))
    return pts


def extended_ground(spec: LatticeSpec) -> set[Point]:
    """All folded lattice points in ``[0, N]^3`` except the origin."""
    n = spec.N
    out = {(n, 0, 0), (0, n, 0), (0, 0, n), (0, n, n), (n, n, 0), (n, 0, n), (n, n, n)}
    for x in range(1, n + 1):
        ya, zb = spec.a * x % n, spec.b * x % n
        xs = {x, n - x} if x < n else {n}
        ys = {ya, n - ya}
        zs = {zb, n - zb}
        for px in xs:
            for py in ys:
                for pz in zs:
                    if 0 <= px <= n and (px, py, pz) != (0, 0, 0):
                        out.add((px, py, pz))
    return out


def fold_rank1(spec: LatticeSpec) -> tuple[AxialSet, set[Point]]:
    """Representative axial set and extended witness set of a rank-1 lattice."""
    if not (1 <= spec.a < spec.N and 1 <= spec.b < spec.N):
        raise DomainError(f"need 1 <= a, b < N for {spec.key()}")
    reps = AxialSet(frozenset(lattice_representatives(spec)), (spec.N,) * 3)
    return reps, extended_ground(spec)


def lattice_vrm(spec: LatticeSpec) -> set[Point]:
    """Relative minima of the folded lattice by brute force over representatives."""
    return pareto_minimal(lattice_representatives(spec))


def minima_axial_set(minima: Iterable[Point], anchors: Sequence[int]) -> AxialSet:
    return AxialSet(frozenset(minima), tuple(anchors))


S0 = AxialSet.from_points(
    [(3, 0, 0), (0, 3, 0), (0, 0, 3), (2, 1, 2), (1, 2, 1), (2, 3, 4)]
)
"""The six-point example set; its sixth point is not a relative minimum."""
