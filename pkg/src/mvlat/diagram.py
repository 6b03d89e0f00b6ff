"""Canonical diagrams: edge labels, vertex types, face cycles and layout.

Positions are exact pairs ``(lam, mu)`` meaning ``lam*e2 + mu*e3`` with
``e2 = (1/2, sqrt(3)/2)``, ``e3 = (1, 0)`` and ``e1 = e2 - e3``.  Nothing is
converted to floating point before SVG output.

Every compact face, walked counterclockwise from the tail of its single
``e2`` edge, reads ``e2, e1^n1, -e3, -e2^n2, -e1, e3^n3`` for some
``n1, n2, n3 >= 0``; :func:`face_cycles` uses that template to orient faces.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from . import directions as dirs
from .complex import MVComplex
from .errors import InvariantError, MalformedComplexError

Pos = tuple[Fraction, Fraction]

# x-, y- and z-decreasing direction pairs; the first of each pair is bit 0
GROUPS = ((0, 1), (2, 3), (4, 5))
TEMPLATE_TRANSITIONS = (1, 3, 5)
TEMPLATE_RUNS = (2, 4, 0)


def edge_direction(cx: MVComplex, v: int, e: int) -> int:
    return cx.edge_direction(v, e)


def vertex_labels(cx: MVComplex, v: int) -> list[int]:
    return sorted(cx.edge_direction(v, e) for e in cx.vertex_edges(v))


def vertex_type(cx: MVComplex, v: int) -> int | str:
    """Type ``1..8`` of an interior vertex, or ``"boundary"`` next to a ray."""
    edges = cx.vertex_edges(v)
    if len(edges) != 3:
        raise MalformedComplexError(f"vertex {v} has {len(edges)} edges")
    if any(cx.edges[e].is_ray for e in edges):
        return "boundary"
    return type_of_labels(vertex_labels(cx, v))


def type_of_labels(labels) -> int:
    code = 0
    for bit, group in enumerate(GROUPS):
        hits = [k for k in labels if k in group]
        if len(hits) != 1:
            raise MalformedComplexError(f"labels {labels} do not pick one edge from group {group}")
        code |= (hits[0] == group[1]) << bit
    return code + 1


# -- faces --------------------------------------------------------------------


def _face_chain(cx: MVComplex, f: int) -> tuple[list[int], bool]:
    """Vertices of face ``f`` chained along edges containing ``f``."""
    verts = cx.face_vertices(f)
    if not verts:
        raise MalformedComplexError(f"face {f} has no vertices")
    adj: dict[int, list[int]] = {v: [] for v in verts}
    ends = []
    for v in verts:
        for e, w in cx.neighbors(v):
            if f not in cx.edges[e].pair:
                continue
            if w is None:
                ends.append(v)
            else:
                adj[v].append(w)
    start = ends[0] if ends else verts[0]
    chain = [start]
    prev = None
    while True:
        nxt = [w for w in adj[chain[-1]] if w != prev]
        if ends and chain[-1] in ends and len(chain) > 1:
            break
        if not nxt:
            break
        if nxt[0] == start:
            break
        prev = chain[-1]
        chain.append(nxt[0])
        if len(chain) > len(verts):
            raise MalformedComplexError(f"face {f} boundary does not close")
    if len(chain) != len(verts):
        raise MalformedComplexError(f"face {f} boundary is disconnected")
    return chain, not ends


def cycle_labels(cx: MVComplex, cycle: list[int]) -> list[int]:
    out = []
    for i, v in enumerate(cycle):
        w = cycle[(i + 1) % len(cycle)]
        a, b = cx.vertices[v].faces, cx.vertices[w].faces
        shared = tuple(sorted(set(a) & set(b)))
        out.append(cx.edge_direction(v, cx.edge_between(*shared)))
    return out


def match_template(labels: list[int]) -> tuple[int, int, int] | None:
    """``(n1, n2, n3)`` if ``labels`` (starting at the e2 edge) fits the face template."""
    if not labels or labels[0] != 1:
        return None
    counts = []
    i = 1
    for t, run in zip(TEMPLATE_TRANSITIONS, TEMPLATE_RUNS):
        if t != 1:
            if i >= len(labels) or labels[i] != t:
                return None
            i += 1
        n = 0
        while i < len(labels) and labels[i] == run:
            n += 1
            i += 1
        counts.append(n)
    if i != len(labels):
        return None
    return tuple(counts)


def oriented_face(cx: MVComplex, f: int) -> tuple[list[int], tuple[int, int, int]]:
    """Counterclockwise vertex cycle of a compact face, started at its e2 edge."""
    chain, closed = _face_chain(cx, f)
    if not closed:
        raise MalformedComplexError(f"face {f} is unbounded")
    for cyc in (chain, chain[::-1]):
        labels = cycle_labels(cx, cyc)
        for r in range(len(cyc)):
            if labels[r] != 1:
                continue
            rot = labels[r:] + labels[:r]
            counts = match_template(rot)
            if counts is not None:
                return cyc[r:] + cyc[:r], counts
    raise MalformedComplexError(f"face {f} does not match the face-shape template")


def face_cycles(cx: MVComplex) -> dict[int, list[int]]:
    """Oriented cycle per compact face, and a ray-to-ray path per axis face.

    Axis face paths run ``x: B -> L``, ``y: B -> R`` and ``z: R -> L``.
    """
    out = {}
    for f in cx.compact_faces:
        out[f], _ = oriented_face(cx, f)
    starts = {"x": "B", "y": "B", "z": "R"}
    for axis, f in cx.axis_roles.items():
        chain, closed = _face_chain(cx, f)
        first = cx.special_vertex(starts[axis])
        if chain[0] != first:
            chain = chain[::-1]
        if chain[0] != first:
            raise MalformedComplexError(f"axis face {axis} path does not start at v_{starts[axis]}")
        out[f] = chain
    return out


# -- ascending paths ----------------------------------------------------------


def canonical_ascending_path(cx: MVComplex) -> list[int]:
    """The ascending path through v_R: the y-face chain then the z-face chain."""
    cyc = face_cycles(cx)
    first = cyc[cx.axis_roles["y"]]
    second = cyc[cx.axis_roles["z"]]
    return first + second[1:]


def path_directions(cx: MVComplex, path: list[int]) -> list[int]:
    out = []
    for v, w in zip(path, path[1:]):
        shared = set(cx.vertices[v].faces) & set(cx.vertices[w].faces)
        if len(shared) != 2:
            raise MalformedComplexError(f"vertices {v}, {w} are not adjacent")
        out.append(cx.edge_direction(v, cx.edge_between(*sorted(shared))))
    return out


def is_ascending(cx: MVComplex, path: list[int]) -> bool:
    if not path or path[0] != cx.special_vertex("B") or path[-1] != cx.special_vertex("L"):
        return False
    try:
        ds = path_directions(cx, path)
    except MalformedComplexError:
        return False
    return all(k in dirs.ASCENDING for k in ds) and len(set(path)) == len(path)


def all_ascending_paths(cx: MVComplex, limit: int = 100_000) -> list[list[int]]:
    """Every ascending path (depth-first; only for small complexes)."""
    start, goal = cx.special_vertex("B"), cx.special_vertex("L")
    out: list[list[int]] = []
    stack = [[start]]
    while stack:
        path = stack.pop()
        v = path[-1]
        if v == goal:
            out.append(path)
            if len(out) >= limit:
                break
            continue
        for e, w in cx.neighbors(v):
            if w is not None and w not in path and cx.edge_direction(v, e) in dirs.ASCENDING:
                stack.append(path + [w])
    return out


# -- layout -------------------------------------------------------------------


@dataclass
class CanonicalDiagram:
    """A planar drawing of the 1-skeleton with exact coordinates."""

    positions: list[Pos]
    edges: list[tuple[int, int | None, int]]  # (tail, head or None for a ray, direction)
    faces: dict[int, list[int]]  # compact face -> counterclockwise vertex cycle
    trace: list[dict] = field(default_factory=list)
    boundary: dict[str, int] = field(default_factory=dict)  # B, L, R vertex ids

    def to_json(self) -> dict:
        return {
            "vertices": [
                {"id": i, "lambda": [p[0].numerator, p[0].denominator], "mu": [p[1].numerator, p[1].denominator]}
                for i, p in enumerate(self.positions)
            ],
            "edges": [{"v": [a, b], "dir": k} for a, b, k in self.edges],
            "faces": [{"face": f, "cycle": c} for f, c in sorted(self.faces.items())],
            "trace": self.trace,
            "boundary": self.boundary,
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "CanonicalDiagram":
        if isinstance(data, (str, bytes)):
            data = json.loads(data)
        verts = sorted(data["vertices"], key=lambda v: v["id"])
        return cls(
            positions=[(Fraction(*v["lambda"]), Fraction(*v["mu"])) for v in verts],
            edges=[(e["v"][0], e["v"][1], e["dir"]) for e in data["edges"]],
            faces={f["face"]: list(f["cycle"]) for f in data["faces"]},
            trace=list(data.get("trace", [])),
            boundary=dict(data.get("boundary", {})),
        )

    def vertex_edges(self, v: int) -> list[tuple[int | None, int]]:
        """``(other end, direction leaving v)`` for the edges at ``v``."""
        out = []
        for a, b, k in self.edges:
            if a == v:
                out.append((b, k))
            elif b == v:
                out.append((a, dirs.opposite(k)))
        return out


def _add(p: Pos, lam, mu) -> Pos:
    return (p[0] + lam, p[1] + mu)


def layout(cx: MVComplex) -> CanonicalDiagram:
    """Place every vertex by the ascending-path sweep.

    Starts from the x-face chain ``v_B -> v_L`` on the segment ``[0, e1]`` and
    repeatedly glues the face to the right of the current path that hangs off
    its last ``e2`` edge, until the path reaches ``v_R``.
    """
    cycles = face_cycles(cx)
    vb, vl, vr = (cx.special_vertex(n) for n in "BLR")
    path = list(cycles[cx.axis_roles["x"]])
    if path[0] != vb or path[-1] != vl:
        raise InvariantError("x-face chain does not run from v_B to v_L")
    n = len(path) - 1
    pos: dict[int, Pos] = {}
    for i, v in enumerate(path):
        t = Fraction(i, n) if n else Fraction(0)
        pos[v] = (t, -t)
    trace: list[dict] = []
    done: set[int] = set()
    e2_out = [
        [w for e, w in cx.neighbors(v) if w is not None and cx.edge_direction(v, e) == 1]
        for v in range(len(cx.vertices))
    ]
    while vr not in path:
        on_path = set(path)
        found = None
        for k in range(len(path) - 1, -1, -1):
            for w in e2_out[path[k]]:
                if w not in on_path:
                    found = (k, w)
                    break
            if found:
                break
        if found is None:
            raise InvariantError("no e2 edge leaves an ascending path that misses v_R")
        k, w1 = found
        f = _face_left_of(cx, cycles, path[k], w1)
        cyc = cycles[f]
        r = cyc.index(path[k])
        walk = cyc[r:] + cyc[:r]  # starts p_k, w1, ...
        j = 0
        while k + j + 1 < len(path) and f in cx.vertices[path[k + j + 1]].faces:
            j += 1
        if j < 1:
            raise InvariantError(f"face {f} does not contain the path edge after p_{k}")
        end = walk.index(path[k + j])
        ws = walk[1:end]
        back = walk[end:] + [walk[0]]
        if back[::-1] != path[k : k + j + 1] or not ws or any(w in on_path for w in ws):
            raise InvariantError(f"face {f} is not bounded by the path segment p_{k}..p_{k + j}")
        dlam = pos[path[k + j]][0] - pos[path[k]][0]
        dmu = pos[path[k + j]][1] - pos[path[k]][1]
        if dlam <= 0 or dmu >= 0:
            raise InvariantError(f"recursion step at face {f}: lambda={dlam}, mu={dmu}")
        m = len(ws)
        s2 = Fraction(0) if m == 1 else min(dlam, -dmu) / 2
        w1_pos = _add(pos[path[k]], dlam - s2, 0)
        for i, w in enumerate(ws):
            t = Fraction(i, m - 1) * s2 if m > 1 else Fraction(0)
            pos[w] = _add(w1_pos, t, -t)
        trace.append({"step": len(trace), "face": f, "k": k, "j": j, "m": m})
        done.add(f)
        path = path[: k + 1] + ws + path[k + j :]
    if len(pos) != len(cx.vertices):
        raise InvariantError(f"layout placed {len(pos)} of {len(cx.vertices)} vertices")
    edges = []
    for i, e in enumerate(cx.edges):
        a = e.vertices[0]
        b = e.vertices[1] if len(e.vertices) == 2 else None
        edges.append((a, b, cx.edge_direction(a, i)))
    positions = [pos[v] for v in range(len(cx.vertices))]
    compact = {f: cycles[f] for f in cx.compact_faces}
    return CanonicalDiagram(positions, edges, compact, trace, {"B": vb, "L": vl, "R": vr})


def _face_left_of(cx: MVComplex, cycles, v: int, w: int) -> int:
    shared = set(cx.vertices[v].faces) & set(cx.vertices[w].faces)
    for f in sorted(shared):
        cyc = cycles.get(f)
        if f in cx.axis_faces or cyc is None:
            continue
        i = cyc.index(v)
        if cyc[(i + 1) % len(cyc)] == w:
            return f
    raise InvariantError(f"no compact face lies left of edge {v}->{w}")


# -- validation ---------------------------------------------------------------


def _orient(a: Pos, b: Pos, c: Pos) -> Fraction:
    (ax, ay), (bx, by), (cx_, cy) = map(_xy2, (a, b, c))
    return (bx - ax) * (cy - ay) - (by - ay) * (cx_ - ax)


def _xy2(p: Pos) -> tuple[Fraction, Fraction]:
    # affine image of the hexagonal frame that keeps orientation and rationality:
    # e3 -> (1, 0), e2 -> (0, 1)
    lam, mu = p
    return (mu, lam)


def _segments_cross(p1: Pos, p2: Pos, q1: Pos, q2: Pos) -> bool:
    d1 = _orient(q1, q2, p1)
    d2 = _orient(q1, q2, p2)
    d3 = _orient(p1, p2, q1)
    d4 = _orient(p1, p2, q2)
    if ((d1 > 0) != (d2 > 0)) and d1 != 0 and d2 != 0 and ((d3 > 0) != (d4 > 0)) and d3 != 0 and d4 != 0:
        return True

    def on_seg(a, b, c):
        (ax, ay), (bx, by), (cx_, cy) = map(_xy2, (a, b, c))
        return min(ax, bx) <= cx_ <= max(ax, bx) and min(ay, by) <= cy <= max(ay, by)

    return (
        (d1 == 0 and on_seg(q1, q2, p1))
        or (d2 == 0 and on_seg(q1, q2, p2))
        or (d3 == 0 and on_seg(p1, p2, q1))
        or (d4 == 0 and on_seg(p1, p2, q2))
    )


def _cross(u, v):
    return u[0] * v[1] - u[1] * v[0]


def _upper(v) -> bool:
    return v[1] > 0 or (v[1] == 0 and v[0] > 0)


def _convex_ccw(pts: list[Pos]) -> bool:
    """True when the closed polygon turns left (or goes straight) once around."""
    xy = [_xy2(p) for p in pts]
    n = len(xy)
    vs = [(xy[(i + 1) % n][0] - xy[i][0], xy[(i + 1) % n][1] - xy[i][1]) for i in range(n)]
    if any(v == (0, 0) for v in vs):
        return False
    wraps = 0
    for i in range(n):
        u, v = vs[i], vs[(i + 1) % n]
        c = _cross(u, v)
        if c < 0 or (c == 0 and u[0] * v[0] + u[1] * v[1] < 0):
            return False
        # with left turns only, the direction passes angle 0 exactly here
        if not _upper(u) and _upper(v):
            wraps += 1
    return wraps == 1


def _simple_polygon(pts: list[Pos]) -> bool:
    n = len(pts)
    if n < 3:
        return False
    if _convex_ccw(pts):
        return True
    for i in range(n):
        for j in range(i + 1, n):
            if j == i + 1 or (i == 0 and j == n - 1):
                continue
            if _segments_cross(pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n]):
                return False
    area = sum(_orient(pts[0], pts[i], pts[i + 1]) for i in range(1, n - 1))
    return area > 0


def _integral(points: list[Pos]) -> list[tuple[int, int]]:
    """The same points on a common integer scale (an orientation-preserving map)."""
    scale = 1
    for lam, mu in points:
        scale = lcm(scale, Fraction(lam).denominator, Fraction(mu).denominator)
    return [(int(lam * scale), int(mu * scale)) for lam, mu in points]


@dataclass
class ValidationReport:
    violations: list[tuple[str, str]] = field(default_factory=list)
    vertex_types: dict[int, int | str] = field(default_factory=dict)
    face_counts: dict[int, tuple[int, int, int]] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, code: str, msg: str) -> None:
        self.violations.append((code, msg))


def validate_diagram(d: CanonicalDiagram) -> ValidationReport:
    """Check labels against geometry, vertex types, face shapes and simplicity.

    Violation codes: ``a`` edge not along its label, ``b`` bad vertex type,
    ``c`` face off the template, ``d`` coincident vertices, ``e`` face not a
    simple counterclockwise polygon.
    """
    rep = ValidationReport()
    pos = _integral(d.positions)
    for a, b, k in d.edges:
        if b is None:
            continue
        got = dirs.classify_step(pos[b][0] - pos[a][0], pos[b][1] - pos[a][1])
        if got != k:
            rep.add("a", f"edge {a}->{b} labelled {dirs.NAMES[k]} but drawn along {got}")
    for v in range(len(pos)):
        inc = d.vertex_edges(v)
        if any(w is None for w, _ in inc):
            rep.vertex_types[v] = "boundary"
            continue
        try:
            rep.vertex_types[v] = type_of_labels([k for _, k in inc])
        except MalformedComplexError as exc:
            rep.add("b", f"vertex {v}: {exc}")
    seen: dict[Pos, int] = {}
    for v, p in enumerate(pos):
        if p in seen:
            rep.add("d", f"vertices {seen[p]} and {v} coincide at {d.positions[v]}")
        seen[p] = v
    label = {}
    for a, b, k in d.edges:
        if b is not None:
            label[(a, b)] = k
            label[(b, a)] = dirs.opposite(k)
    for f, cyc in sorted(d.faces.items()):
        try:
            labels = [label[(cyc[i], cyc[(i + 1) % len(cyc)])] for i in range(len(cyc))]
        except KeyError:
            rep.add("c", f"face {f} cycle uses a missing edge")
            continue
        counts = match_template(labels)
        if counts is None:
            rep.add("c", f"face {f} labels {labels} do not fit the template")
        else:
            rep.face_counts[f] = counts
        if not _simple_polygon([pos[v] for v in cyc]):
            rep.add("e", f"face {f} is not a simple counterclockwise polygon")
    return rep


# -- rendering ----------------------------------------------------------------

RAY_SCALE = 0.6
_SQRT3_2 = 3 ** 0.5 / 2


def _plane(p: Pos) -> tuple[float, float]:
    lam, mu = p
    return float(lam) / 2 + float(mu), float(lam) * _SQRT3_2


def _svg(d: CanonicalDiagram) -> str:
    pts = [_plane(p) for p in d.positions]
    finite = [(a, b) for a, b, _ in d.edges if b is not None]
    lengths = [((pts[a][0] - pts[b][0]) ** 2 + (pts[a][1] - pts[b][1]) ** 2) ** 0.5 for a, b in finite]
    ray_len = RAY_SCALE * (sum(lengths) / len(lengths) if lengths else 1.0)
    segs = []
    for a, b, k in d.edges:
        if b is None:
            dl, dm = dirs.step_vector(k)
            ux, uy = _plane((Fraction(dl), Fraction(dm)))
            norm = (ux * ux + uy * uy) ** 0.5
            end = (pts[a][0] + ray_len * ux / norm, pts[a][1] + ray_len * uy / norm)
            segs.append((pts[a], end, True))
        else:
            segs.append((pts[a], pts[b], False))
    xs = [c[0] for s in segs for c in s[:2]] + [p[0] for p in pts]
    ys = [c[1] for s in segs for c in s[:2]] + [p[1] for p in pts]
    pad = 0.1 * ray_len
    x0, x1, y0, y1 = min(xs) - pad, max(xs) + pad, min(ys) - pad, max(ys) + pad
    width = 0.01 * max(x1 - x0, y1 - y0)

    def f(v: float) -> str:
        return f"{v:.6f}".rstrip("0").rstrip(".")

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{f(x0)} {f(-y1)} {f(x1 - x0)} {f(y1 - y0)}">',
        f'<g stroke="black" stroke-width="{f(width)}" fill="none">',
    ]
    for (ax, ay), (bx, by), ray in segs:
        dash = f' stroke-dasharray="{f(4 * width)} {f(2 * width)}"' if ray else ""
        out.append(f'<line x1="{f(ax)}" y1="{f(-ay)}" x2="{f(bx)}" y2="{f(-by)}"{dash}/>')
    out.append("</g>")
    out.append('<g fill="black">')
    for x, y in pts:
        out.append(f'<circle cx="{f(x)}" cy="{f(-y)}" r="{f(2 * width)}"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _dot(d: CanonicalDiagram) -> str:
    # rays become a vertex attribute so that nodes and vertices correspond
    rays: dict[int, list[str]] = {}
    for a, b, k in d.edges:
        if b is None:
            rays.setdefault(a, []).append(dirs.NAMES[k])
    out = ["graph diagram {"]
    for v, (lam, mu) in enumerate(d.positions):
        x, y = _plane((lam, mu))
        extra = f', rays="{",".join(rays[v])}"' if v in rays else ""
        out.append(f'  v{v} [lambda="{lam}", mu="{mu}", pos="{x:.6f},{y:.6f}!"{extra}];')
    for a, b, k in d.edges:
        if b is not None:
            out.append(f'  v{a} -- v{b} [direction="{dirs.NAMES[k]}", dir_id={k}];')
    out.append("}")
    return "\n".join(out) + "\n"


def render(d: CanonicalDiagram, fmt: str = "svg") -> bytes:
    """Serialize a diagram as ``svg``, ``dot`` or ``json``."""
    if fmt == "svg":
        return _svg(d).encode()
    if fmt == "dot":
        return _dot(d).encode()
    if fmt == "json":
        return (json.dumps(d.to_json(), indent=1, sort_keys=True) + "\n").encode()
    raise ValueError(f"unknown render format {fmt!r}")
