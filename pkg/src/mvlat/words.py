"""Slab decomposition of canonical diagrams into letters and words.

Cutting convention (frozen, version ``w1``):

* cut lines run parallel to ``e3``, i.e. along lines of constant ``lam``;
* the cut levels are the ``lam`` values that carry at least one ``e3`` edge;
* slab ``i`` holds the vertices with ``lam`` in ``[l_i, l_{i+1})``, plus a
  first slab for everything below the lowest level;
* slabs are listed from the one holding ``v_B`` upwards in ``lam``.

A slab's letter records its vertices, the edges inside it, the edges that
leave it towards the previous slab and the directions of longer edges that
cross the slab without an endpoint in it.  Each finite edge has its endpoints
recorded in exactly one letter.  Rays are left out: they sit at the three vertices of finite
degree two and their directions are fixed, so they carry no information.

This convention yields ``1 + s`` slabs for the lattices ``(1, b, N)`` (``s``
partial quotients of ``N/b``) and six slabs for ``(2, 26, 121)``.
"""

from __future__ import annotations

import json
from bisect import bisect_right
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from pathlib import Path

from .diagram import CanonicalDiagram, layout
from .errors import DomainError
from .minima import LatticeSpec, Point
from .numth import cf_expand, planar_minima_2d

CONVENTION = "w1"
CUT_DIRECTIONS = (0, 3)  # e3 and -e3


@dataclass(frozen=True)
class Slab:
    index: int
    lo: Fraction | None  # None for the first slab (unbounded below)
    hi: Fraction | None  # None for the last slab
    vertices: tuple[int, ...]
    internal: tuple[tuple[int, int, int], ...]  # (v, w, direction v->w)
    down: tuple[tuple[int, int, int], ...]  # (v in this slab, w in the previous one, direction)
    serial: str


def cut_levels(d: CanonicalDiagram) -> list[Fraction]:
    return sorted({d.positions[a][0] for a, b, k in d.edges if b is not None and k in CUT_DIRECTIONS})


def _component_serials(recs: dict[int, list[tuple[int, int | None]]], flags: dict[int, str]) -> list[str]:
    """Canonical strings of the connected pieces of a slab (min over start vertices)."""
    left = set(recs)
    out = []
    while left:
        # collect the component of an arbitrary vertex
        seed = min(left)
        comp = {seed}
        stack = [seed]
        while stack:
            v = stack.pop()
            for _, w in recs[v]:
                if w is not None and w not in comp:
                    comp.add(w)
                    stack.append(w)
        left -= comp
        best = None
        for start in sorted(comp):
            order = [start]
            seen = {start}
            i = 0
            while i < len(order):
                v = order[i]
                i += 1
                for _, w in sorted(recs[v], key=lambda kw: kw[0]):
                    if w is not None and w not in seen:
                        seen.add(w)
                        order.append(w)
            lid = {v: j for j, v in enumerate(order)}
            parts = []
            for v in order:
                toks = sorted(f"{k}{'v' if w is None else '>' + str(lid[w])}" for k, w in recs[v])
                parts.append(flags[v] + ":" + ",".join(toks))
            s = ";".join(parts)
            if best is None or s < best:
                best = s
        out.append(best)
    return sorted(out)


def slab_decompose(d: CanonicalDiagram) -> list[Slab]:
    levels = cut_levels(d)
    bands: dict[int, list[int]] = {}
    band_of = {}
    for v, (lam, _) in enumerate(d.positions):
        i = bisect_right(levels, lam)
        bands.setdefault(i, []).append(v)
        band_of[v] = i
    order = sorted(bands)
    rank = {b: r for r, b in enumerate(order)}
    internal: dict[int, list] = {b: [] for b in order}
    down: dict[int, list] = {b: [] for b in order}
    passing: dict[int, list] = {b: [] for b in order}
    for a, b, k in d.edges:
        if b is None:
            continue
        ba, bb = band_of[a], band_of[b]
        if ba == bb:
            internal[ba].append((a, b, k))
            continue
        if ba < bb:
            a, b, k, ba, bb = b, a, (k + 3) % 6, bb, ba
        down[ba].append((a, b, k))
        for mid in order:
            if bb < mid < ba:
                passing[mid].append((k + 3) % 6)
    slabs = []
    for bi in order:
        verts = sorted(bands[bi], key=lambda v: d.positions[v])
        lo = levels[bi - 1] if bi > 0 else None
        hi = levels[bi] if bi < len(levels) else None
        recs: dict[int, list] = {v: [] for v in verts}
        for a, b, k in internal[bi]:
            recs[a].append((k, b))
            recs[b].append(((k + 3) % 6, a))
        for a, b, k in down[bi]:
            recs[a].append((k, None))
        flags = {v: "c" if lo is not None and d.positions[v][0] == lo else "i" for v in verts}
        serial = "|".join(_component_serials(recs, flags))
        if passing[bi]:
            serial += "|pass:" + ",".join(map(str, sorted(passing[bi])))
        slabs.append(
            Slab(rank[bi], lo, hi, tuple(verts), tuple(sorted(internal[bi])), tuple(sorted(down[bi])), serial)
        )
    return slabs


# -- letters and words --------------------------------------------------------


@dataclass
class LetterDictionary:
    """Letter ids in first-seen order, with exemplars and optional names."""

    ids: dict[str, int] = field(default_factory=dict)
    exemplars: dict[int, str] = field(default_factory=dict)  # id -> lattice key
    names: dict[int, str] = field(default_factory=dict)

    def intern(self, serial: str, exemplar: str = "") -> int:
        i = self.ids.get(serial)
        if i is None:
            i = len(self.ids)
            self.ids[serial] = i
            self.exemplars[i] = exemplar
        return i

    def name(self, i: int) -> str:
        return self.names.get(i, f"L{i}")

    def to_json(self) -> dict:
        return {
            "convention": CONVENTION,
            "letters": [
                {"id": i, "serial": s, "exemplar": self.exemplars.get(i, ""), "name": self.names.get(i)}
                for s, i in sorted(self.ids.items(), key=lambda kv: kv[1])
            ],
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "LetterDictionary":
        if isinstance(data, str):
            data = json.loads(data)
        if data.get("convention") != CONVENTION:
            raise DomainError(f"letter dictionary uses convention {data.get('convention')!r}, expected {CONVENTION!r}")
        out = cls()
        for row in sorted(data["letters"], key=lambda r: r["id"]):
            out.ids[row["serial"]] = row["id"]
            out.exemplars[row["id"]] = row.get("exemplar", "")
            if row.get("name") is not None:
                out.names[row["id"]] = row["name"]
        return out

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=1, sort_keys=True) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "LetterDictionary":
        return cls.from_json(Path(path).read_text())


@dataclass
class DiagramWord:
    letters: list[int]
    serials: list[str]

    def __len__(self) -> int:
        return len(self.letters)

    def text(self, dictionary: LetterDictionary | None = None) -> str:
        if dictionary is None:
            return " ".join(f"L{i}" for i in self.letters)
        return " ".join(dictionary.name(i) for i in self.letters)


def word_of(d: CanonicalDiagram, dictionary: LetterDictionary | None = None, exemplar: str = "") -> DiagramWord:
    if dictionary is None:
        dictionary = LetterDictionary()
    slabs = slab_decompose(d)
    serials = [s.serial for s in slabs]
    return DiagramWord([dictionary.intern(s, exemplar) for s in serials], serials)


def table_alignment(rows, dictionary: LetterDictionary | None = None, cells=((3, 3), (4, 4))):
    """Align words of stable family members with the characters of table words.

    ``rows`` carry ``combs()`` and ``word``.  Only rows whose character count
    equals the slab count are aligned; the others are returned as mismatches.
    Returns ``(names, mismatches, dictionary)`` with ``names`` mapping a
    letter id to the set of characters it was aligned with.
    """
    from .geocode import code_from_comb, decode_code

    if dictionary is None:
        dictionary = LetterDictionary()
    names: dict[int, set[str]] = {}
    mismatches = []
    for row in rows:
        chars = row.word.replace(" ", "")
        for comb in row.combs():
            for t, u in cells:
                spec = LatticeSpec(*decode_code(code_from_comb(comb, t, u)))
                w = word_of(lattice_diagram(spec), dictionary, spec.key())
                if len(w) != len(chars):
                    mismatches.append((comb, (t, u), row.word, len(w)))
                    continue
                for i, ch in zip(w.letters, chars):
                    names.setdefault(i, set()).add(ch)
    return names, mismatches, dictionary


def load_names(dictionary: LetterDictionary, path: str | Path | None = None) -> LetterDictionary:
    """Attach character names from the calibration file to matching serials.

    A serial aligned with several characters gets them joined by ``/``.
    """
    if path is None:
        path = Path(__file__).with_name("data") / "letter_names.json"
    data = json.loads(Path(path).read_text())
    if data.get("convention") != CONVENTION:
        raise DomainError(f"name file uses convention {data.get('convention')!r}, expected {CONVENTION!r}")
    for row in data["letters"]:
        i = dictionary.ids.get(row["serial"])
        if i is not None:
            dictionary.names[i] = "/".join(row["names"])
    return dictionary


def lattice_diagram(spec: LatticeSpec) -> CanonicalDiagram:
    from .complex import complex_from_minima
    from .minima import lattice_vrm

    return layout(complex_from_minima(lattice_vrm(spec), (spec.N,) * 3))


# -- the a = 1 family ---------------------------------------------------------


def _check_white(b: int, n: int) -> None:
    if gcd(b, n) != 1:
        raise DomainError(f"gcd(b, N) = {gcd(b, n)} != 1")
    if not 2 <= b <= n / 2:
        raise DomainError(f"need 2 <= b <= N/2, got b={b}, N={n}")


def white_expected(b: int, n: int) -> int:
    """Word length for ``(1, b, N)``: one head letter plus one per partial quotient of N/b."""
    _check_white(b, n)
    return 1 + len(cf_expand(n, b))


def white_vertex_pattern(b: int, n: int) -> set[frozenset[Point]]:
    """Vertex triples of the complex of ``(1, b, N)`` predicted from planar minima."""
    _check_white(b, n)
    planar = planar_minima_2d(b, n)
    s = len(planar) - 2
    gx, gy, gz = (n, 0, 0), (0, n, 0), (0, 0, n)
    tilde = {j: (x, x, y) for j, (x, y) in enumerate(planar) if 1 <= j <= s}
    out = {frozenset((gz, tilde[1], gx)), frozenset((gz, tilde[1], gy))}
    for j in range(1, s):
        out.add(frozenset((tilde[j], tilde[j + 1], gx)))
        out.add(frozenset((tilde[j], tilde[j + 1], gy)))
    out.add(frozenset((tilde[s], gx, gy)))
    return out


# -- alphabet audit -----------------------------------------------------------


@dataclass
class AuditReport:
    lattices: int
    classes: int
    head_classes: set[int]
    occurrences: Counter
    dictionary: LetterDictionary

    @property
    def consistent(self) -> bool:
        """Whether the class count stays within the fourteen-letter alphabet."""
        return self.classes <= 14


def _serials_of(spec: LatticeSpec) -> list[str]:
    return [s.serial for s in slab_decompose(lattice_diagram(spec))]


def alphabet_audit(corpus, dictionary: LetterDictionary | None = None, jobs: int = 1) -> AuditReport:
    """Distinct letter classes over a corpus of ``a = 2`` lattices.

    Slabs are computed in parallel when ``jobs > 1``; letters are interned in
    lattice-key order either way, so ids do not depend on ``jobs``.
    """
    if dictionary is None:
        dictionary = LetterDictionary()
    specs = sorted(corpus, key=lambda s: (s.a, s.b, s.N))
    for spec in specs:
        if spec.a != 2:
            raise DomainError(f"alphabet audit expects a = 2, got {spec.key()}")
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            all_serials = list(pool.map(_serials_of, specs, chunksize=32))
    else:
        all_serials = [_serials_of(s) for s in specs]
    seen: set[int] = set()
    heads: set[int] = set()
    occ: Counter = Counter()
    for spec, serials in zip(specs, all_serials):
        letters = [dictionary.intern(s, spec.key()) for s in serials]
        seen.update(letters)
        heads.add(letters[0])
        occ.update(letters)
    return AuditReport(len(specs), len(seen), heads, occ, dictionary)


def a2_corpus(b_max: int, n_max: int) -> list[LatticeSpec]:
    """Coprime ``(2, b, N)`` with ``2 <= b <= b_max``, ``2b <= N <= n_max``, ``gcd(2, N) = 1``."""
    out = []
    for b in range(2, b_max + 1):
        for n in range(2 * b, n_max + 1):
            if gcd(b, n) == 1 and n % 2 == 1 and n % b:
                out.append(LatticeSpec(2, b, n))
    return out
