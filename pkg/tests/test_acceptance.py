"""Acceptance criteria, one reported pass/fail line each.

The lattice corpus shared by criteria 2, 3, 8 and 9 is every ``(a, b, N)``
with ``1 <= a <= 6``, ``2 <= b < N <= 400``, ``b`` not dividing ``N`` and
``gcd(a, N) = gcd(b, N) = 1``.  It is walked once and the tallies are cached.
"""

import time
from functools import lru_cache
from math import gcd

import pytest

from mvlat.complex import build_complex, complex_from_minima
from mvlat.diagram import layout, validate_diagram
from mvlat.errors import MalformedComplexError
from mvlat.geocode import GeometricCode, cond31, decode_code, encode_triple
from mvlat.minima import S0, LatticeSpec, lattice_vrm
from mvlat.stabilize import A2_TABLE, detect_thresholds, family_report, sweep
from mvlat.words import (
    a2_corpus,
    alphabet_audit,
    lattice_diagram,
    white_expected,
    white_vertex_pattern,
    word_of,
)
from mvlat.xilist import vrm_fast

pytestmark = pytest.mark.slow

G = {1: (3, 0, 0), 2: (0, 3, 0), 3: (0, 0, 3), 4: (2, 1, 2), 5: (1, 2, 1)}
S0_VERTICES = {
    (3, 1, 3): {1, 3, 4},
    (2, 2, 3): {3, 4, 5},
    (3, 2, 2): {1, 4, 5},
    (1, 3, 3): {2, 3, 5},
    (3, 3, 1): {1, 2, 5},
}
S0_EDGES = [{1, 3}, {3, 2}, {1, 2}, {3, 4}, {1, 4}, {4, 5}, {3, 5}, {1, 5}, {2, 5}]


def corpus():
    for n in range(3, 401):
        for a in range(1, 7):
            if gcd(a, n) != 1:
                continue
            for b in range(2, n):
                if n % b and gcd(b, n) == 1:
                    yield a, b, n


def _s0_mismatches(cx) -> list[str]:
    faces = {cx.faces[i] for i in range(len(cx.faces))}
    out = []
    if faces != set(G.values()):
        out.append(f"faces {sorted(faces)}")
    verts = {v.corner: {cx.faces[f] for f in v.faces} for v in cx.vertices}
    if verts != {c: {G[i] for i in s} for c, s in S0_VERTICES.items()}:
        out.append(f"vertices {verts}")
    edges = sorted(sorted(cx.faces[f] for f in e.pair) for e in cx.edges)
    if edges != sorted(sorted(G[i] for i in e) for e in S0_EDGES):
        out.append(f"edges {edges}")
    return out


def test_criterion_1a_s0_default_mode(criterion):
    t = time.perf_counter()
    cx = build_complex(S0)
    dt = time.perf_counter() - t
    bad = _s0_mismatches(cx)
    ok = not bad and dt < 1
    criterion("1a", ok, f"S0 open-interior mode: 5 faces, 9 edges, 5 vertices exact; {dt:.3f}s {bad}")
    assert ok


@pytest.mark.xfail(strict=True, raises=(MalformedComplexError, AssertionError), reason="literal closed-box minimality yields a sixth triple")
def test_criterion_1b_s0_literal_mode(criterion):
    try:
        cx = build_complex(S0, mode="literal")
    except MalformedComplexError as exc:
        criterion("1b", False, f"S0 literal mode raises MalformedComplexError: {exc}")
        raise
    bad = _s0_mismatches(cx)
    criterion("1b", not bad, f"S0 literal mode {bad}")
    assert not bad


@lru_cache(maxsize=None)
def corpus_pass():
    tally = {
        "lattices": 0,
        "mismatch": [],
        "bound": [],
        "oracle_seconds": 0.0,
        "diagram": [],
        "roundtrip": [],
    }
    for a, b, n in corpus():
        spec = LatticeSpec(a, b, n)
        tally["lattices"] += 1
        t = time.perf_counter()
        fast = vrm_fast(spec)
        brute = lattice_vrm(spec)
        tally["oracle_seconds"] += time.perf_counter() - t
        if fast != brute:
            tally["mismatch"].append((a, b, n))
        code = encode_triple(a, b, n)
        if len(brute) > code.alpha + 5 * a + 3:
            tally["bound"].append((a, b, n, len(brute)))
        if decode_code(code) != (a, b, n):
            tally["roundtrip"].append((a, b, n))
        problem = _diagram_problem(brute, n)
        if problem:
            tally["diagram"].append(((a, b, n), problem))
    return tally


def _diagram_problem(minima, n) -> str | None:
    cx = complex_from_minima(minima, (n,) * 3)
    d = layout(cx)
    rep = validate_diagram(d)
    if not rep.ok:
        return f"violations {rep.violations[:2]}"
    if any(t != "boundary" and t not in range(1, 9) for t in rep.vertex_types.values()):
        return "vertex type"
    if set(rep.face_counts) != set(cx.compact_faces):
        return "face template"
    if len(d.trace) != len(cx.compact_faces):
        return f"{len(d.trace)} steps for {len(cx.compact_faces)} compact faces"
    if cx.euler_characteristic() != 1:
        return f"Euler {cx.euler_characteristic()}"
    if len(cx.rays) != 3:
        return f"{len(cx.rays)} rays"
    return None


def test_criterion_2_oracle_equivalence(criterion):
    t = corpus_pass()
    ok = not t["mismatch"] and t["oracle_seconds"] < 300
    criterion(
        "2",
        ok,
        f"{t['lattices']} lattices, {len(t['mismatch'])} fast/brute mismatches, "
        f"{t['oracle_seconds']:.0f}s oracle time {t['mismatch'][:3]}",
    )
    assert ok


def test_criterion_3_cardinality_bound(criterion):
    t = corpus_pass()
    ok = not t["bound"]
    criterion("3", ok, f"{t['lattices']} lattices, {len(t['bound'])} bound violations {t['bound'][:3]}")
    assert ok


def test_criterion_4_white_family(criterion):
    start = time.perf_counter()
    bad = []
    count = 0
    for n in range(4, 301):
        for b in range(2, n // 2 + 1):
            if gcd(b, n) != 1:
                continue
            count += 1
            spec = LatticeSpec(1, b, n)
            cx = complex_from_minima(lattice_vrm(spec), (n,) * 3)
            if {frozenset(cx.faces[f] for f in v.faces) for v in cx.vertices} != white_vertex_pattern(b, n):
                bad.append((b, n, "vertices"))
                continue
            w = word_of(layout(cx))
            if len(w) != white_expected(b, n):
                bad.append((b, n, "length"))
            elif len(set(w.letters[1:])) != 1 or w.letters[0] in w.letters[1:]:
                bad.append((b, n, "letters"))
    dt = time.perf_counter() - start
    ok = not bad and dt < 120
    criterion("4", ok, f"{count} lattices Γ(1,b,N), {len(bad)} failures, {dt:.0f}s {bad[:3]}")
    assert ok


def test_criterion_5_worked_lattice(criterion):
    code = encode_triple(2, 26, 121)
    tup = (code.alpha, code.beta, code.gamma, code.a, code.t, code.u)
    d = lattice_diagram(LatticeSpec(2, 26, 121))
    rep = validate_diagram(d)
    w = word_of(d)
    ok = (
        tup == (17, 26, 0, 2, 0, 2)
        and decode_code(code) == (2, 26, 121)
        and rep.ok
        and len(w) == 6
        and len(set(w.letters)) == 6
    )
    criterion("5", ok, f"code {tup}, {len(rep.violations)} violations, {len(w)} slabs, {len(set(w.letters))} classes")
    assert ok


def test_criterion_6_stable_table(criterion):
    start = time.perf_counter()
    combs = [c for row in A2_TABLE for c in row.combs()]
    fam = family_report(combs, t_max=6, u_max=6)
    problems = []
    for row in A2_TABLE:
        sigs = set()
        for comb in row.combs():
            rep = fam.reports[comb]
            if not rep.stabilized or not rep.within(2, 2):
                problems.append((comb, rep.t0, rep.u0))
            sigs.add(rep.stable_signature)
        if len(sigs) != 1:
            problems.append((row.word, "combs of one row differ"))
    by_sig: dict = {}
    by_word: dict = {}
    for i, row in enumerate(A2_TABLE):
        by_sig.setdefault(fam.reports[row.combs()[0]].stable_signature, set()).add(i)
        by_word.setdefault(row.word, set()).add(i)
    same = sorted(map(sorted, by_sig.values())) == sorted(map(sorted, by_word.values()))
    dt = time.perf_counter() - start
    ok = not problems and same and dt < 600
    criterion(
        "6",
        ok,
        f"18 rows, {len(combs)} combs on 7x7 grids, {len(problems)} problems, "
        f"{len(by_sig)} signature classes vs {len(by_word)} words, {dt:.0f}s {problems[:3]}",
    )
    assert ok


def test_criterion_7_worked_pattern(criterion):
    checks = []
    for gamma in (0, 1):
        g = sweep((7, 2, gamma, 2), 4, 4)
        checks.append(len({g.sig(0, u) for u in range(1, 5)}) == 1)
        checks.append(len({g.sig(t, u) for t in range(1, 5) for u in range(1, 5)}) == 1)
        if gamma == 0:
            checks.append(g.sig(0, 0) == g.sig(1, 0))
        else:
            checks.append(g.sig(0, 0) != g.sig(1, 0))
        checks.append(detect_thresholds(g).stabilized)
    ok = all(checks)
    criterion("7", ok, f"comb (7,2,γ,2): {sum(checks)}/{len(checks)} pattern checks")
    assert ok


def test_criterion_8_diagram_corpus(criterion):
    t = corpus_pass()
    ok = not t["diagram"]
    criterion("8", ok, f"{t['lattices']} diagrams, {len(t['diagram'])} with problems {t['diagram'][:3]}")
    assert ok


def test_criterion_9_geocode_bijection(criterion):
    t = corpus_pass()
    bad = list(t["roundtrip"])
    count = 0
    for a in range(1, 5):
        for alpha in range(1, 9):
            for beta in range(alpha * a):
                for gamma in range(a):
                    for tt in range(4):
                        for u in range(4):
                            if not cond31(alpha, beta, gamma, a, tt, u):
                                continue
                            c = GeometricCode(alpha, beta, gamma, a, tt, u)
                            count += 1
                            if encode_triple(*decode_code(c)) != c:
                                bad.append(c)
    ok = not bad
    criterion("9", ok, f"{t['lattices']} triples decode∘encode, {count} codes encode∘decode, {len(bad)} failures")
    assert ok


@pytest.mark.xfail(strict=True, reason="slab letters give more classes and head classes than the fourteen-letter alphabet allows")
def test_criterion_10_alphabet_audit(criterion):
    start = time.perf_counter()
    rep = alphabet_audit(a2_corpus(11, 1000))
    dt = time.perf_counter() - start
    ok = rep.classes <= 14 and len(rep.head_classes) == 2 and dt < 600
    criterion(
        "10",
        ok,
        f"{rep.lattices} lattices Γ(2,b,N), {rep.classes} letter classes (need <= 14), "
        f"{len(rep.head_classes)} head classes (need 2), {dt:.0f}s",
    )
    assert ok
