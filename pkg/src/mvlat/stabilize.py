"""Stabilization sweeps over two-parameter families of lattices.

A combinatorial part ``(alpha, beta, gamma, a)`` spans the family

    b(t) = alpha*a*t + beta,    N(t, u) = b(t)*(a*u + gamma) + alpha.

Each grid cell gets the signature of its complex (open-interior mode).  The
detector reports the smallest corners ``(t0, u0)`` beyond which the grid is
constant, plus per-row and per-column thresholds.  Everything is relative to
the finite grid: a threshold is only claimed when the block it opens reaches
the outermost row and column with at least two cells each way.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .complex import complex_from_minima, signature
from .errors import DomainError, MVError
from .geocode import cond31, cond32
from .minima import LatticeSpec, lattice_vrm

Comb = tuple[int, int, int, int]

CSV_COLUMNS = ("comb", "t", "u", "a", "b", "N", "signature", "vrm_size")


@dataclass(frozen=True)
class Cell:
    t: int
    u: int
    a: int
    b: int
    N: int
    signature: str | None  # None when the cell has no lattice (b < 2)
    vrm_size: int
    off_code: bool  # alpha >= b(t): the triple's own code has another comb


@dataclass
class StabilizationGrid:
    comb: Comb
    t_max: int
    u_max: int
    cells: dict[tuple[int, int], Cell]

    def sig(self, t: int, u: int) -> str | None:
        return self.cells[(t, u)].signature

    def distinct(self) -> set[str]:
        return {c.signature for c in self.cells.values() if c.signature is not None}

    def csv_rows(self) -> list[tuple]:
        comb = "(" + ",".join(map(str, self.comb)) + ")"
        return [
            (comb, c.t, c.u, c.a, c.b, c.N, c.signature or "", c.vrm_size)
            for _, c in sorted(self.cells.items())
        ]


def family_triple(comb: Comb, t: int, u: int) -> tuple[int, int, int]:
    alpha, beta, gamma, a = comb
    b = alpha * a * t + beta
    return a, b, b * (a * u + gamma) + alpha


def _check_comb(comb: Comb) -> None:
    alpha, beta, gamma, a = comb
    # alpha < b(t) only matters per cell, so test the range part with a large t
    if not cond31(alpha, beta, gamma, a, t=alpha + 1, u=0):
        raise DomainError(f"combinatorial part {comb} violates the range conditions")
    if not cond32(alpha, beta, gamma, a):
        raise DomainError(f"combinatorial part {comb} violates the coprimality conditions")


def cell_of(comb: Comb, t: int, u: int) -> Cell:
    a, b, n = family_triple(comb, t, u)
    if b < 2:
        return Cell(t, u, a, b, n, None, 0, True)
    spec = LatticeSpec(a, b, n)
    spec.require_coprime()
    minima = lattice_vrm(spec)
    sig = signature(complex_from_minima(minima, (n,) * 3))
    return Cell(t, u, a, b, n, sig, len(minima), comb[0] >= b)


def _cell_job(args) -> Cell:
    return cell_of(*args)


def sweep(comb: Comb, t_max: int, u_max: int, jobs: int = 1) -> StabilizationGrid:
    """Signatures on ``[0, t_max] x [0, u_max]``, computed in a deterministic order."""
    comb = tuple(comb)
    _check_comb(comb)
    if t_max < 0 or u_max < 0:
        raise DomainError("grid bounds must be nonnegative")
    keys = [(t, u) for t in range(t_max + 1) for u in range(u_max + 1)]
    args = [(comb, t, u) for t, u in keys]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            cells = list(pool.map(_cell_job, args, chunksize=8))
    else:
        cells = [_cell_job(x) for x in args]
    return StabilizationGrid(comb, t_max, u_max, dict(zip(keys, cells)))


# -- threshold detection ------------------------------------------------------


def _tail_start(values: list) -> int:
    """First index from which the sequence is constant (and not None)."""
    i = len(values) - 1
    if values[i] is None:
        return len(values)
    while i > 0 and values[i - 1] == values[-1]:
        i -= 1
    return i


@dataclass
class StabilizationReport:
    comb: Comb
    grid: tuple[int, int]  # (t_max, u_max)
    stabilized: bool
    t0: int | None
    u0: int | None
    corners: list[tuple[int, int]]  # all minimal corners of constant blocks
    stable_signature: str | None
    row_thresholds: dict[int, int | None]  # u -> minimal t*
    col_thresholds: dict[int, int | None]  # t -> minimal u*
    exceptional: list[tuple[int, int]] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "comb": list(self.comb),
            "grid": list(self.grid),
            "stabilized": self.stabilized,
            "t0": self.t0,
            "u0": self.u0,
            "corners": [list(c) for c in self.corners],
            "stable_signature": self.stable_signature,
            "row_thresholds": {str(k): v for k, v in sorted(self.row_thresholds.items())},
            "col_thresholds": {str(k): v for k, v in sorted(self.col_thresholds.items())},
            "exceptional": [list(c) for c in self.exceptional],
        }

    def within(self, t_bound: int, u_bound: int) -> bool:
        return any(t <= t_bound and u <= u_bound for t, u in self.corners)


def detect_thresholds(grid: StabilizationGrid) -> StabilizationReport:
    tm, um = grid.t_max, grid.u_max
    if tm < 2 or um < 2:
        raise DomainError("threshold detection needs a grid of at least 3x3")
    rows = {}
    for u in range(um + 1):
        start = _tail_start([grid.sig(t, u) for t in range(tm + 1)])
        rows[u] = start if start < tm else None
    cols = {}
    for t in range(tm + 1):
        start = _tail_start([grid.sig(t, u) for u in range(um + 1)])
        cols[t] = start if start < um else None

    stable = grid.sig(tm, um)
    # block[t][u]: every cell with t' >= t, u' >= u carries the stable signature
    ok = [[False] * (um + 2) for _ in range(tm + 2)]
    for t in range(tm + 1):
        ok[t][um + 1] = True
    for u in range(um + 2):
        ok[tm + 1][u] = True
    for t in range(tm, -1, -1):
        for u in range(um, -1, -1):
            ok[t][u] = stable is not None and grid.sig(t, u) == stable and ok[t + 1][u] and ok[t][u + 1]
    corners = []
    for t in range(tm):
        for u in range(um):
            if ok[t][u] and not (t > 0 and ok[t - 1][u]) and not (u > 0 and ok[t][u - 1]):
                corners.append((t, u))
    if corners:
        t0, u0 = min(corners, key=lambda c: (c[0] + c[1], c[0]))
        exceptional = sorted(k for k, c in grid.cells.items() if c.signature != stable)
        return StabilizationReport(grid.comb, (tm, um), True, t0, u0, corners, stable, rows, cols, exceptional)
    return StabilizationReport(grid.comb, (tm, um), False, None, None, [], None, rows, cols, [])


# -- families -----------------------------------------------------------------


@dataclass
class FamilyReport:
    grids: dict[Comb, StabilizationGrid]
    reports: dict[Comb, StabilizationReport]

    def partition(self) -> list[list[Comb]]:
        """Combs grouped by stable signature; unstabilized combs stand alone."""
        groups: dict[str, list[Comb]] = {}
        alone = []
        for comb, rep in self.reports.items():
            if rep.stable_signature is None:
                alone.append([comb])
            else:
                groups.setdefault(rep.stable_signature, []).append(comb)
        return sorted([sorted(g) for g in groups.values()] + alone)

    def csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for comb in sorted(self.grids):
            w.writerows(self.grids[comb].csv_rows())
        return buf.getvalue()

    def thresholds_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("comb", "stabilized", "t0", "u0", "stable_signature"))
        for comb in sorted(self.reports):
            r = self.reports[comb]
            w.writerow(("(" + ",".join(map(str, comb)) + ")", r.stabilized, r.t0, r.u0, r.stable_signature or ""))
        return buf.getvalue()


def family_report(combs, t_max: int = 6, u_max: int = 6, jobs: int = 1) -> FamilyReport:
    grids, reports = {}, {}
    for comb in sorted(set(map(tuple, combs))):
        try:
            g = sweep(comb, t_max, u_max, jobs)
        except MVError as exc:
            raise DomainError(f"sweep failed for {comb}: {exc}") from exc
        grids[comb] = g
        reports[comb] = detect_thresholds(g)
    return FamilyReport(grids, reports)


# -- stable configurations for a = 2, alpha <= 6 -------------------------------


@dataclass(frozen=True)
class TableRow:
    alpha: int
    betas: tuple[int, ...]
    gammas: tuple[int, ...]
    bounds: tuple[int, int]  # lower bounds on the two parameters, unordered
    word: str

    def combs(self) -> list[Comb]:
        return [(self.alpha, b, g, 2) for b in self.betas for g in self.gammas]


A2_TABLE: tuple[TableRow, ...] = (
    TableRow(1, (1,), (0,), (2, 2), "0 3 2"),
    TableRow(2, (1, 3), (1,), (1, 1), "Az 2"),
    TableRow(3, (1,), (0,), (2, 2), "0 2 3 2"),
    TableRow(3, (2,), (0, 1), (1, 1), "Ax bx"),
    TableRow(3, (4,), (0, 1), (1, 1), "0 2 bx"),
    TableRow(3, (5,), (0,), (2, 1), "Ax 3 2"),
    TableRow(4, (1, 5), (1,), (1, 1), "0 bz 2"),
    TableRow(4, (3, 7), (1,), (1, 1), "0 apz 2"),
    TableRow(5, (1,), (0,), (2, 2), "0 3 3 2"),
    TableRow(5, (2,), (0, 1), (1, 1), "Az bx"),
    TableRow(5, (3,), (0,), (2, 2), "Apy 3 2"),
    TableRow(5, (4,), (0, 1), (1, 1), "0 4 bx"),
    TableRow(5, (6,), (0, 1), (1, 1), "0 3 bx"),
    TableRow(5, (7,), (0,), (2, 1), "Az 3 2"),
    TableRow(5, (8,), (0, 1), (1, 1), "Apy bx"),
    TableRow(5, (9,), (0,), (2, 1), "0 4 3 2"),
    TableRow(6, (1, 7), (1,), (1, 1), "0 bz 2"),
    TableRow(6, (5, 11), (1,), (1, 1), "0 cpz 2"),
)
"""Stable configurations for ``a = 2`` and ``alpha <= 6`` with their words."""
