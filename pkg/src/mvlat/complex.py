"""Minkowski-Voronoi complex of a finite axial set.

Faces are the relative minima, edges the minimal pairs and vertices the
minimal triples.  A vertex triple ``{p, q, r}`` has one member attaining each
coordinate of its box corner, and no relative minimum lies strictly below the
corner; :func:`_strict_vertices` enumerates those triples in ``O(n^2 log n)``
by fixing the x- and y-attaining members and taking the lowest point of the
remaining quadrant as the z-attaining one.
"""

from __future__ import annotations

import hashlib
import json
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable

import networkx as nx

from . import directions as dirs
from .errors import MalformedComplexError
from .minima import (
    AxialSet,
    Mode,
    Point,
    box,
    is_general_position,
    minimal_subsets,
    vrm_bruteforce,
)
from .errors import DegenerateInputError

AXES = ("x", "y", "z")


@dataclass(frozen=True)
class Vertex:
    faces: tuple[int, int, int]
    corner: Point


@dataclass(frozen=True)
class Edge:
    pair: tuple[int, int]
    vertices: tuple[int, ...]

    @property
    def is_ray(self) -> bool:
        return len(self.vertices) == 1


@dataclass
class MVComplex:
    faces: list[Point]
    edges: list[Edge]
    vertices: list[Vertex]
    axis_roles: dict[str, int]
    _vertex_edges: list[list[int]] = field(default_factory=list, repr=False)
    _edge_index: dict[tuple[int, int], int] = field(default_factory=dict, repr=False)
    _dir_cache: dict[tuple[int, int], int] = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self._index()

    def _index(self):
        self._edge_index = {e.pair: i for i, e in enumerate(self.edges)}
        self._vertex_edges = [[] for _ in self.vertices]
        for i, e in enumerate(self.edges):
            for v in e.vertices:
                self._vertex_edges[v].append(i)
        self._face_vertices = [[] for _ in self.faces]
        for i, v in enumerate(self.vertices):
            for f in v.faces:
                self._face_vertices[f].append(i)

    # -- lookups --------------------------------------------------------------

    def vertex_edges(self, v: int) -> list[int]:
        return self._vertex_edges[v]

    def edge_between(self, f: int, g: int) -> int:
        return self._edge_index[(min(f, g), max(f, g))]

    def other_vertex(self, e: int, v: int) -> int | None:
        vs = self.edges[e].vertices
        if len(vs) == 1:
            return None
        return vs[1] if vs[0] == v else vs[0]

    def neighbors(self, v: int) -> list[tuple[int, int | None]]:
        """``(edge, other vertex or None for a ray)`` for the three edges at ``v``."""
        return [(e, self.other_vertex(e, v)) for e in self._vertex_edges[v]]

    def face_vertices(self, f: int) -> list[int]:
        return self._face_vertices[f]

    def face_index(self, p: Point) -> int:
        return self.faces.index(p)

    @property
    def axis_faces(self) -> set[int]:
        return set(self.axis_roles.values())

    @property
    def compact_faces(self) -> list[int]:
        ax = self.axis_faces
        return [i for i in range(len(self.faces)) if i not in ax]

    @property
    def rays(self) -> list[int]:
        return [i for i, e in enumerate(self.edges) if e.is_ray]

    def special_vertex(self, name: str) -> int:
        """``"B"``, ``"L"`` or ``"R"``: the vertex holding two axis minima."""
        fx, fy, fz = (self.axis_roles[a] for a in AXES)
        pair = {"B": (fx, fy), "L": (fx, fz), "R": (fy, fz)}[name]
        e = self.edges[self.edge_between(*pair)]
        return e.vertices[0]

    def euler_characteristic(self) -> int:
        return len(self.vertices) - len(self.edges) + len(self.faces)

    # -- directions -----------------------------------------------------------

    def edge_direction(self, v: int, e: int) -> int:
        """Direction label of edge ``e`` leaving vertex ``v`` (rays included)."""
        key = (v, e)
        k = self._dir_cache.get(key)
        if k is not None:
            return k
        w = self.other_vertex(e, v)
        if w is not None:
            k = dirs.direction_of_change(self.vertices[v].corner, self.vertices[w].corner)
        else:
            dropped = (set(self.vertices[v].faces) - set(self.edges[e].pair)).pop()
            k = dirs.ray_direction(self.attained_axis(v, dropped))
        self._dir_cache[key] = k
        return k

    def attained_axis(self, v: int, f: int) -> int:
        """Coordinate of vertex ``v``'s box corner attained by face ``f``."""
        corner = self.vertices[v].corner
        p = self.faces[f]
        hits = [i for i in range(3) if p[i] == corner[i]]
        if len(hits) != 1:
            raise MalformedComplexError(f"face {p} attains {len(hits)} sizes of corner {corner}")
        return hits[0]

    # -- serialization --------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "faces": [list(p) for p in self.faces],
            "edges": [{"pair": list(e.pair), "vertices": list(e.vertices)} for e in self.edges],
            "vertices": [{"triple": list(v.faces), "corner": list(v.corner)} for v in self.vertices],
            "axis_roles": dict(self.axis_roles),
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "MVComplex":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(
            faces=[tuple(p) for p in data["faces"]],
            edges=[Edge(tuple(e["pair"]), tuple(e["vertices"])) for e in data["edges"]],
            vertices=[Vertex(tuple(v["triple"]), tuple(v["corner"])) for v in data["vertices"]],
            axis_roles=dict(data["axis_roles"]),
        )


# -- construction -------------------------------------------------------------


def _strict_vertices(pts: list[Point]) -> list[tuple[Point, Point, Point]]:
    out = []
    for p in pts:
        quad = sorted((s for s in pts if s[0] < p[0]), key=lambda s: s[1])
        # running argmin of z over quad, by increasing y
        best: list[Point] = []
        cur = None
        for s in quad:
            if cur is None or s[2] < cur[2]:
                cur = s
            best.append(cur)
        for idx, q in enumerate(quad):
            if q[1] <= p[1]:
                continue
            # y values are distinct, so quad[:idx] is everything below q_y
            if idx == 0:
                continue
            r = best[idx - 1]
            if r[2] > p[2] and r[2] > q[2]:
                out.append((p, q, r))
    return out


def _assemble(minima: list[Point], anchors, triples: Iterable[Iterable[Point]], pairs=None) -> MVComplex:
    faces = sorted(minima)
    fidx = {p: i for i, p in enumerate(faces)}
    vertices = []
    for t in sorted(tuple(sorted(fidx[p] for p in t)) for t in triples):
        vertices.append(Vertex(t, box(faces[i] for i in t)))
    incid: dict[tuple[int, int], list[int]] = defaultdict(list)
    for vi, v in enumerate(vertices):
        a, b, c = v.faces
        for pr in ((a, b), (a, c), (b, c)):
            incid[pr].append(vi)
    if pairs is not None:
        for pr in pairs:
            i, j = sorted(fidx[p] for p in pr)
            incid.setdefault((i, j), [])
    edges = [Edge(pr, tuple(vs)) for pr, vs in sorted(incid.items())]
    roles = {}
    for i, name in enumerate(AXES):
        pt = [0, 0, 0]
        pt[i] = anchors[i]
        roles[name] = fidx[tuple(pt)]
    cx = MVComplex(faces, edges, vertices, roles)
    check_well_formed(cx)
    return cx


def check_well_formed(cx: MVComplex) -> None:
    for i, e in enumerate(cx.edges):
        if len(e.vertices) not in (1, 2):
            raise MalformedComplexError(f"edge {e.pair} lies in {len(e.vertices)} vertices")
    for v in range(len(cx.vertices)):
        if len(cx.vertex_edges(v)) != 3:
            raise MalformedComplexError(f"vertex {v} has {len(cx.vertex_edges(v))} edges")
    ray_pairs = {cx.edges[i].pair for i in cx.rays}
    ax = cx.axis_roles
    expected = {tuple(sorted((ax[a], ax[b]))) for a, b in (("x", "y"), ("x", "z"), ("y", "z"))}
    if ray_pairs != expected:
        raise MalformedComplexError(f"rays {sorted(ray_pairs)} are not the three axis pairs")


def build_complex(
    s: AxialSet,
    ground: Iterable[Point] | None = None,
    mode: Mode = "open_interior",
    minima: Iterable[Point] | None = None,
) -> MVComplex:
    """Build ``MV(s)``.

    ``open_interior`` mode uses the fast vertex enumeration; a ground set may
    be passed for interface symmetry but cannot change the result, since every
    ground point dominates some relative minimum.  ``literal`` mode enumerates
    subsets directly.
    """
    vrm = set(minima) if minima is not None else vrm_bruteforce(s)
    reduced = AxialSet(frozenset(vrm), s.anchors)
    ok, why = is_general_position(reduced)
    if not ok:
        raise DegenerateInputError(f"relative minima not in general position: {why}")
    if mode == "open_interior":
        pts = sorted(vrm)
        return _assemble(pts, s.anchors, _strict_vertices(pts))
    if mode == "literal":
        triples = minimal_subsets(s, None, 3, "literal", minima=vrm)
        pairs = minimal_subsets(s, None, 2, "literal", minima=vrm)
        return _assemble(sorted(vrm), s.anchors, triples, pairs)
    raise ValueError(f"unknown mode {mode!r}")


def complex_from_minima(minima: Iterable[Point], anchors) -> MVComplex:
    """Fast path for callers that already hold the relative minima."""
    pts = sorted(minima)
    return _assemble(pts, tuple(anchors), _strict_vertices(pts))


# -- graphs -------------------------------------------------------------------


def skeleton_graphs(cx: MVComplex, include_rays: bool = False) -> tuple[nx.Graph, nx.Graph]:
    """Voronoi graph (1-skeleton) and Minkowski graph (face adjacency).

    Rays have a single endpoint, so the Voronoi graph records them in its
    ``rays`` attribute instead of as arcs.  The Minkowski graph joins faces
    across finite edges; ``include_rays`` also joins the axis faces that only
    share an unbounded edge.
    """
    vor = nx.Graph(rays=[])
    vor.add_nodes_from(range(len(cx.vertices)))
    mink = nx.Graph()
    mink.add_nodes_from(range(len(cx.faces)))
    for i, e in enumerate(cx.edges):
        if e.is_ray:
            vor.graph["rays"].append((e.vertices[0], i))
            if include_rays:
                mink.add_edge(*e.pair)
        else:
            vor.add_edge(*e.vertices, edge=i)
            mink.add_edge(*e.pair)
    return vor, mink


# -- signatures ---------------------------------------------------------------


def canonical_order(cx: MVComplex) -> list[int]:
    """Vertices in breadth-first order from the bottom vertex, edges taken by label."""
    start = cx.special_vertex("B")
    order = [start]
    seen = {start}
    i = 0
    while i < len(order):
        v = order[i]
        i += 1
        for _, (e, w) in sorted((cx.edge_direction(v, e), (e, w)) for e, w in cx.neighbors(v)):
            if w is not None and w not in seen:
                seen.add(w)
                order.append(w)
    if len(order) != len(cx.vertices):
        raise MalformedComplexError("1-skeleton is disconnected")
    return order


def canonical_form(cx: MVComplex) -> str:
    """Serialization invariant under renaming of minima (labels and axis roles kept)."""
    order = canonical_order(cx)
    cid = {v: i for i, v in enumerate(order)}
    parts = []
    for v in order:
        arcs = []
        for k, w in sorted(
            (cx.edge_direction(v, e), w) for e, w in cx.neighbors(v)
        ):
            arcs.append(f"{k}{'*' if w is None else cid[w]}")
        parts.append(".".join(arcs))
    faces = []
    for f in range(len(cx.faces)):
        role = next((a for a, g in cx.axis_roles.items() if g == f), "")
        faces.append(role + ",".join(map(str, sorted(cid[v] for v in cx.face_vertices(f)))))
    return "v1|" + ";".join(parts) + "|" + ";".join(sorted(faces))


def signature(cx: MVComplex) -> str:
    """Short stable hash of :func:`canonical_form`."""
    return hashlib.sha256(canonical_form(cx).encode()).hexdigest()[:16]


def _incidence_graph(cx: MVComplex, anchored: bool) -> nx.Graph:
    g = nx.Graph()
    roles = {f: a for a, f in cx.axis_roles.items()}
    for f in range(len(cx.faces)):
        g.add_node(("f", f), kind="face", role=roles.get(f, "") if anchored else "")
    for i, v in enumerate(cx.vertices):
        g.add_node(("v", i), kind="vertex", role="")
        for f in v.faces:
            g.add_edge(("v", i), ("f", f))
    return g


def equivalent(c1: MVComplex, c2: MVComplex, *, labeled: bool = False, anchored: bool = True) -> bool:
    """Combinatorial equivalence of two complexes.

    By default this is an incidence-preserving bijection that sends each axis
    face to the axis face of the same role; ``anchored=False`` drops that
    constraint and ``labeled=True`` additionally requires equal edge labels
    (equal canonical forms).
    """
    if labeled:
        if not anchored:
            raise ValueError("labeled equivalence is always anchored")
        return canonical_form(c1) == canonical_form(c2)
    if (len(c1.faces), len(c1.vertices)) != (len(c2.faces), len(c2.vertices)):
        return False
    match = lambda a, b: a["kind"] == b["kind"] and a["role"] == b["role"]  # noqa: E731
    return nx.is_isomorphic(_incidence_graph(c1, anchored), _incidence_graph(c2, anchored), node_match=match)
