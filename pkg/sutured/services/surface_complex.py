"""
Surface Complex Module

Combinatorial model of sutured surfaces and exact relative homology.

A surface is a halfedge structure: every halfedge has a twin (its reversal)
and a head vertex; faces are closed walks of halfedges, oriented
counterclockwise. A halfedge whose twin lies in no face is a boundary
halfedge; the twin itself is called exterior. Sutures (F⁺, F⁻) and the
α-vertices (α⁺, α⁻) are marked boundary vertices.

Operations that change a complex (refinement, face splitting, collars) keep
every existing halfedge and vertex id and only append new ones, so walks
stored on the old complex remain valid.

Relative homology H₁(Σ, roots) is computed with a tree–cotree decomposition:
a spanning forest grown from the roots, a spanning tree of the dual graph
(faces plus one outer node), and the leftover edges, each of which gives one
basis cycle.
"""

import logging
import random
from collections import deque
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cached_property, lru_cache

from sutured.errors import ConsistencyError, StructuralError, ValidationError
from sutured.services.exterior_algebra import CoefficientRing, Multivector
from sutured.utils import linalg

logger = logging.getLogger(__name__)

OUTER = -1


class Mark(Enum):
    F_PLUS = "F_plus"
    ALPHA_PLUS = "alpha_plus"
    F_MINUS = "F_minus"
    ALPHA_MINUS = "alpha_minus"


CYCLIC_PATTERN = (Mark.F_PLUS, Mark.ALPHA_PLUS, Mark.F_MINUS, Mark.ALPHA_MINUS)


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    witness: object = None

    def __str__(self):
        return f"[{self.code}] {self.message} (at {self.witness})"

    def to_dict(self):
        return {"code": self.code, "message": self.message, "witness": self.witness}


@dataclass(frozen=True)
class CombinatorialSurface:
    """Halfedge complex of an oriented compact surface.

    Attributes:
        twin: twin[h] is the reversal of halfedge h.
        head: head[h] is the vertex h points to.
        faces: each face is the counterclockwise cycle of its halfedges.
        n_vertices: vertices are 0 .. n_vertices - 1.
    """

    twin: tuple
    head: tuple
    faces: tuple
    n_vertices: int

    @classmethod
    def build(cls, twin, head, faces, n_vertices):
        return cls(tuple(twin), tuple(head), tuple(tuple(f) for f in faces), n_vertices)

    @classmethod
    def from_polygons(cls, n_vertices, polygons):
        """Build a complex from counterclockwise vertex cycles.

        Edges that appear in only one polygon become boundary edges.
        """
        twin, head = [], []
        directed = {}
        faces = []
        for polygon in polygons:
            face = []
            k = len(polygon)
            for i in range(k):
                u, w = polygon[i], polygon[(i + 1) % k]
                if (u, w) in directed:
                    raise StructuralError(f"directed edge {(u, w)} used by two faces")
                if (w, u) in directed:
                    h = twin[directed[(w, u)]]
                else:
                    h = len(head)
                    head.extend([w, u])
                    twin.extend([h + 1, h])
                    directed[(w, u)] = h + 1
                directed[(u, w)] = h
                face.append(h)
            faces.append(face)
        return cls.build(twin, head, faces, n_vertices)

    # basic derived data

    @property
    def n_halfedges(self):
        return len(self.twin)

    @cached_property
    def tail(self):
        return tuple(self.head[t] for t in self.twin)

    @cached_property
    def face_of(self):
        owner = [OUTER] * self.n_halfedges
        for f, face in enumerate(self.faces):
            for h in face:
                owner[h] = f
        return tuple(owner)

    @cached_property
    def _face_links(self):
        nxt = [None] * self.n_halfedges
        prv = [None] * self.n_halfedges
        for face in self.faces:
            k = len(face)
            for i, h in enumerate(face):
                nxt[h] = face[(i + 1) % k]
                prv[h] = face[(i - 1) % k]
        return tuple(nxt), tuple(prv)

    def next_in_face(self, h):
        return self._face_links[0][h]

    def prev_in_face(self, h):
        return self._face_links[1][h]

    @cached_property
    def edges(self):
        """Canonical halfedge (the smaller id of each twin pair) of every edge."""
        return tuple(h for h in range(self.n_halfedges) if h < self.twin[h])

    @cached_property
    def edge_of(self):
        index = [0] * self.n_halfedges
        for e, h in enumerate(self.edges):
            index[h] = e
            index[self.twin[h]] = e
        return tuple(index)

    def halfedge_sign(self, h):
        return 1 if h < self.twin[h] else -1

    @property
    def n_edges(self):
        return len(self.edges)

    @property
    def n_faces(self):
        return len(self.faces)

    @cached_property
    def euler_characteristic(self):
        return self.n_vertices - self.n_edges + self.n_faces

    def is_boundary_halfedge(self, h):
        return self.face_of[h] != OUTER and self.face_of[self.twin[h]] == OUTER

    def is_interior_edge(self, h):
        return self.face_of[h] != OUTER and self.face_of[self.twin[h]] != OUTER

    @cached_property
    def outgoing(self):
        out = [[] for _ in range(self.n_vertices)]
        for h in range(self.n_halfedges):
            out[self.tail[h]].append(h)
        return tuple(tuple(o) for o in out)

    @cached_property
    def boundary_out(self):
        """Vertex -> the boundary halfedges leaving it."""
        out = {}
        for h in range(self.n_halfedges):
            if self.is_boundary_halfedge(h):
                out.setdefault(self.tail[h], []).append(h)
        return out

    @cached_property
    def boundary_vertices(self):
        return frozenset(self.boundary_out)

    def ccw_next(self, o):
        """Next outgoing halfedge counterclockwise around tail(o); None past the boundary."""
        if self.face_of[o] == OUTER:
            return None
        return self.twin[self.prev_in_face(o)]

    def rotation(self, v):
        """Outgoing halfedges at v in counterclockwise order.

        At a boundary vertex the list starts with the outgoing boundary halfedge
        and ends with the exterior one.
        """
        starts = self.boundary_out.get(v)
        if starts:
            order = [starts[0]]
            while self.face_of[order[-1]] != OUTER and len(order) <= len(self.outgoing[v]):
                order.append(self.ccw_next(order[-1]))
            return order
        if not self.outgoing[v]:
            return []
        first = min(self.outgoing[v])
        order = [first]
        o = self.ccw_next(first)
        while o != first and len(order) <= len(self.outgoing[v]):
            order.append(o)
            o = self.ccw_next(o)
        return order

    @cached_property
    def boundary_cycles(self):
        """Boundary circles as halfedge cycles, each starting at its smallest id."""
        seen = set()
        cycles = []
        for h in range(self.n_halfedges):
            if h in seen or not self.is_boundary_halfedge(h):
                continue
            cycle = []
            g = h
            while g not in seen:
                seen.add(g)
                cycle.append(g)
                g = self.boundary_out[self.head[g]][0]
            cycles.append(tuple(cycle))
        return tuple(cycles)

    @cached_property
    def vertex_components(self):
        label = list(range(self.n_vertices))

        def find(x):
            while label[x] != x:
                label[x] = label[label[x]]
                x = label[x]
            return x

        for h in self.edges:
            a, b = find(self.tail[h]), find(self.head[h])
            if a != b:
                label[max(a, b)] = min(a, b)
        return tuple(find(v) for v in range(self.n_vertices))

    @property
    def n_components(self):
        return len(set(self.vertex_components))

    # chains

    def walk_to_chain(self, walk):
        chain = {}
        for h in walk:
            e = self.edge_of[h]
            chain[e] = chain.get(e, 0) + self.halfedge_sign(h)
        return {e: c for e, c in chain.items() if c}

    def face_chain(self, f):
        return self.walk_to_chain(self.faces[f])

    def chain_boundary(self, chain):
        boundary = {}
        for e, c in chain.items():
            h = self.edges[e]
            boundary[self.head[h]] = boundary.get(self.head[h], 0) + c
            boundary[self.tail[h]] = boundary.get(self.tail[h], 0) - c
        return {v: c for v, c in boundary.items() if c}

    def halfedge_coefficient(self, chain, h):
        return chain.get(self.edge_of[h], 0) * self.halfedge_sign(h)

    def walk_is_connected(self, walk):
        return all(self.head[a] == self.tail[b] for a, b in zip(walk, walk[1:]))

    # validation

    def structural_violations(self):
        found = []
        n = self.n_halfedges
        if len(self.head) != n:
            return [Violation("shape", "twin and head arrays differ in length", len(self.head))]
        for h in range(n):
            t = self.twin[h]
            if not 0 <= t < n or self.twin[t] != h or t == h:
                found.append(Violation("twin", "twin is not a fixed-point-free involution", h))
            if not 0 <= self.head[h] < self.n_vertices:
                found.append(Violation("head", "head vertex out of range", h))
        if found:
            return found
        owner = {}
        for f, face in enumerate(self.faces):
            if not face:
                found.append(Violation("face", "empty face", f))
                continue
            for i, h in enumerate(face):
                if not 0 <= h < n:
                    found.append(Violation("face", "face uses an unknown halfedge", (f, h)))
                    continue
                if h in owner:
                    found.append(Violation("face", "halfedge used by two faces", h))
                owner[h] = f
                following = face[(i + 1) % len(face)]
                if 0 <= following < n and self.head[h] != self.tail[following]:
                    found.append(Violation("face-walk", "face walk is not connected", (f, h)))
        if found:
            return found
        for h in self.edges:
            if self.face_of[h] == OUTER and self.face_of[self.twin[h]] == OUTER:
                found.append(Violation("dangling", "edge lies in no face", h))
        if found:
            return found
        for v in range(self.n_vertices):
            outgoing = self.outgoing[v]
            if not outgoing:
                found.append(Violation("isolated", "vertex has no edges", v))
                continue
            starts = self.boundary_out.get(v, [])
            exterior = [o for o in outgoing if self.face_of[o] == OUTER]
            if len(starts) > 1 or len(exterior) > 1:
                found.append(Violation("manifold", "boundary passes through vertex more than once", v))
                continue
            if sorted(self.rotation(v)) != sorted(outgoing):
                found.append(Violation("manifold", "vertex link is not a single disk or fan", v))
        components = self.vertex_components
        with_boundary = {components[self.tail[h]] for h in range(n) if self.is_boundary_halfedge(h)}
        for root in sorted(set(components)):
            if root not in with_boundary:
                found.append(Violation("closed", "component has no boundary", root))
        return found


@dataclass(frozen=True)
class SuturedMarking:
    F_plus: frozenset = frozenset()
    F_minus: frozenset = frozenset()
    alpha_plus: frozenset = frozenset()
    alpha_minus: frozenset = frozenset()

    @classmethod
    def from_lists(cls, F_plus=(), F_minus=(), alpha_plus=(), alpha_minus=()):
        return cls(frozenset(F_plus), frozenset(F_minus), frozenset(alpha_plus), frozenset(alpha_minus))

    def of(self, mark):
        return getattr(self, mark.value)

    @cached_property
    def by_vertex(self):
        table = {}
        for mark in Mark:
            for v in self.of(mark):
                table.setdefault(v, []).append(mark)
        return table

    def mark_of(self, v):
        marks = self.by_vertex.get(v)
        return marks[0] if marks else None

    @property
    def sutures(self):
        return self.F_plus | self.F_minus

    @property
    def alpha(self):
        return self.alpha_plus | self.alpha_minus

    def restricted(self, vertex_map):
        """Restrict and renumber through ``vertex_map`` (old id -> new id)."""
        return SuturedMarking(*(frozenset(vertex_map[v] for v in self.of(m) if v in vertex_map)
                                for m in (Mark.F_PLUS, Mark.F_MINUS, Mark.ALPHA_PLUS, Mark.ALPHA_MINUS)))

    def to_dict(self):
        return {m.value: sorted(self.of(m)) for m in Mark}


@dataclass(frozen=True)
class SuturedSurface:
    """A combinatorial surface with its suture marking.

    ``designated`` optionally fixes a basis of H₁(Σ, α⁺) by walks (for the
    β-labelled disks and annuli); ``designated_minus`` does the same for
    H₁(Σ, α⁻).
    """

    surface: CombinatorialSurface
    marking: SuturedMarking
    designated: tuple = ()
    labels: tuple = ()
    designated_minus: tuple = ()
    labels_minus: tuple = ()
    name: str = ""

    @property
    def n_F(self):
        return len(self.marking.F_plus)

    @property
    def euler(self):
        return self.surface.euler_characteristic

    @property
    def L(self):
        return self.n_F - self.euler

    @cached_property
    def arc_sign(self):
        """Boundary halfedge -> +1 on A⁺ (after an F⁺ point), -1 on A⁻."""
        signs = {}
        surface = self.surface
        for cycle in surface.boundary_cycles:
            tails = [surface.tail[h] for h in cycle]
            start = next((i for i, v in enumerate(tails) if v in self.marking.sutures), None)
            if start is None:
                continue
            current = 0
            for step in range(len(cycle)):
                i = (start + step) % len(cycle)
                v = tails[i]
                if v in self.marking.F_plus:
                    current = 1
                elif v in self.marking.F_minus:
                    current = -1
                signs[cycle[i]] = current
        return signs

    def arcs(self, sign):
        return frozenset(h for h, s in self.arc_sign.items() if s == sign)

    def with_designated(self, walks, labels, minus=False):
        if minus:
            return replace(self, designated_minus=tuple(map(tuple, walks)), labels_minus=tuple(labels))
        return replace(self, designated=tuple(map(tuple, walks)), labels=tuple(labels))

    def basis_labels(self, minus=False):
        labels = self.labels_minus if minus else self.labels
        size = len(self.designated_minus if minus else self.designated)
        if labels and len(labels) == size:
            return list(labels)
        return None


def validate(s):
    """Every violated invariant of a sutured surface, with a locating witness."""
    surface = s.surface
    found = surface.structural_violations()
    if found:
        return found
    marking = s.marking
    seen = {}
    for mark in Mark:
        for v in sorted(marking.of(mark)):
            if not 0 <= v < surface.n_vertices:
                found.append(Violation("mark-range", f"{mark.value} vertex out of range", v))
                continue
            if v in seen:
                found.append(Violation("mark-overlap", f"vertex is both {seen[v].value} and {mark.value}", v))
            seen[v] = mark
            if v not in surface.boundary_vertices:
                found.append(Violation("mark-interior", f"{mark.value} vertex is not on the boundary", v))
    if found:
        return found
    for cycle in surface.boundary_cycles:
        marks = [seen[surface.tail[h]] for h in cycle if surface.tail[h] in seen]
        counts = {mark: marks.count(mark) for mark in Mark}
        witness = surface.tail[cycle[0]]
        if not marks or len(set(counts.values())) != 1:
            found.append(Violation("mark-count", "boundary circle needs equal positive counts of "
                                   "F⁺, α⁺, F⁻, α⁻", witness))
            continue
        start = marks.index(Mark.F_PLUS)
        rotated = marks[start:] + marks[:start]
        for i, mark in enumerate(rotated):
            if mark is not CYCLIC_PATTERN[i % 4]:
                found.append(Violation("mark-pattern", "boundary marks break the cyclic order "
                                       "F⁺, α⁺, F⁻, α⁻", witness))
                break
    for walk in s.designated + s.designated_minus:
        if not walk or not surface.walk_is_connected(walk):
            found.append(Violation("designated", "designated cycle is not a connected walk", walk[:1]))
    return found


def ensure_valid(s):
    found = validate(s)
    if found:
        raise ValidationError("invalid sutured surface", found)
    return s


# builders


def standard_disk(N):
    """(D², F(N)): one polygon with F₁, α₁, …, F₂N, α₂N counterclockwise.

    Vertex 2(i-1) is F_i and 2(i-1)+1 is α_i; odd indices are positive. The
    designated α⁺ basis is β₁, β₃, …, β₂N₋₃ and the α⁻ basis β₂, …, β₂N₋₂,
    where β_i runs along the boundary from α_i to α_{i+2}.
    """
    if N < 1:
        raise StructuralError("standard_disk needs N >= 1")
    n = 4 * N
    surface = CombinatorialSurface.from_polygons(n, [list(range(n))])
    marking = SuturedMarking.from_lists(
        F_plus=[suture_vertex(i) for i in range(1, 2 * N + 1, 2)],
        F_minus=[suture_vertex(i) for i in range(2, 2 * N + 1, 2)],
        alpha_plus=[alpha_vertex(i) for i in range(1, 2 * N + 1, 2)],
        alpha_minus=[alpha_vertex(i) for i in range(2, 2 * N + 1, 2)],
    )
    plus = [disk_beta_walk(surface, N, i) for i in range(1, 2 * N - 2, 2)]
    minus = [disk_beta_walk(surface, N, i) for i in range(2, 2 * N - 1, 2)]
    return SuturedSurface(
        surface, marking,
        designated=tuple(plus), labels=tuple(f"b{i}" for i in range(1, 2 * N - 2, 2)),
        designated_minus=tuple(minus), labels_minus=tuple(f"b{i}" for i in range(2, 2 * N - 1, 2)),
        name=f"disk-{N}",
    )


def suture_vertex(i):
    return 2 * (i - 1)


def alpha_vertex(i):
    return 2 * (i - 1) + 1


def disk_beta_walk(surface, N, i):
    """Boundary walk α_i → F_{i+1} → α_{i+1} → F_{i+2} → α_{i+2} (indices mod 2N)."""
    n = 4 * N
    out = {surface.tail[h]: h for face in surface.faces for h in face}
    start = alpha_vertex((i - 1) % (2 * N) + 1)
    return tuple(out[(start + k) % n] for k in range(4))


def annulus_grid(rings, sectors):
    """Polar grid annulus: ``rings`` vertex circles of ``sectors`` vertices each.

    Ring 0 is the outer boundary, ring ``rings - 1`` the inner one; vertex
    (i, j) has id ``i * sectors + j``. ``sectors`` must be divisible by 4.
    Marks: outer ring F⁺ at 0, α⁺ at q, F⁻ at 2q, α⁻ at 3q; inner ring F⁻ at 0,
    α⁺ at q, F⁺ at 2q, α⁻ at 3q, with q = sectors // 4. β₁ is the radial walk
    at sector q and β₂ the counterclockwise circle on the middle ring.
    """
    if rings < 3 or sectors < 4 or sectors % 4:
        raise StructuralError("annulus_grid needs rings >= 3 and sectors divisible by 4")

    def vid(i, j):
        return i * sectors + j % sectors

    polygons = []
    for i in range(rings - 1):
        for j in range(sectors):
            polygons.append([vid(i, j), vid(i, j + 1), vid(i + 1, j + 1), vid(i + 1, j)])
    surface = CombinatorialSurface.from_polygons(rings * sectors, polygons)
    q = sectors // 4
    inner = rings - 1
    marking = SuturedMarking.from_lists(
        F_plus=[vid(0, 0), vid(inner, 2 * q)],
        F_minus=[vid(0, 2 * q), vid(inner, 0)],
        alpha_plus=[vid(0, q), vid(inner, q)],
        alpha_minus=[vid(0, 3 * q), vid(inner, 3 * q)],
    )
    beta1 = grid_walk(surface, [vid(i, q) for i in range(rings)])
    middle = rings // 2
    beta2 = grid_walk(surface, [vid(middle, j) for j in range(sectors + 1)])
    return SuturedSurface(surface, marking, designated=(beta1, beta2), labels=("b1", "b2"),
                          name=f"annulus-{rings}x{sectors}")


def grid_walk(surface, vertices):
    """Walk through consecutive vertices of a complex without parallel edges."""
    lookup = {(surface.tail[h], surface.head[h]): h for h in range(surface.n_halfedges)}
    try:
        return tuple(lookup[(a, b)] for a, b in zip(vertices, vertices[1:]))
    except KeyError as exc:
        raise StructuralError(f"no edge between {exc.args[0]}") from exc


def standard_annulus():
    """The annulus with one sutured pair per boundary circle (n(F) = 2, L = 2)."""
    return annulus_grid(11, 8)


def disjoint_union(first, second):
    """Σ₁ ⊔ Σ₂ with ids of the second surface shifted past the first."""
    a, b = first.surface, second.surface
    dh, dv = a.n_halfedges, a.n_vertices
    surface = CombinatorialSurface.build(
        a.twin + tuple(t + dh for t in b.twin),
        a.head + tuple(v + dv for v in b.head),
        a.faces + tuple(tuple(h + dh for h in face) for face in b.faces),
        dv + b.n_vertices,
    )
    shift = {v: v + dv for v in range(b.n_vertices)}
    moved = second.marking.restricted(shift)
    marking = SuturedMarking(*(first.marking.of(m) | moved.of(m)
                               for m in (Mark.F_PLUS, Mark.F_MINUS, Mark.ALPHA_PLUS, Mark.ALPHA_MINUS)))

    def shifted(walks):
        return tuple(tuple(h + dh for h in w) for w in walks)

    both = bool(first.designated) == bool(second.designated)
    designated = first.designated + shifted(second.designated) if both else ()
    labels = first.labels + second.labels if both and first.labels and second.labels else ()
    return SuturedSurface(surface, marking, designated=designated, labels=labels,
                          name=f"{first.name}+{second.name}")


def relabel(s, vertex_perm, halfedge_perm):
    """Apply an isomorphism of complexes given by vertex and halfedge permutations.

    ``halfedge_perm[h]`` is the new id of halfedge h; it must commute with
    twin, head and the face cycles.
    """
    surface = s.surface
    n = surface.n_halfedges
    if sorted(halfedge_perm) != list(range(n)) or sorted(vertex_perm) != list(range(surface.n_vertices)):
        raise StructuralError("relabeling must be a pair of permutations")
    twin = [0] * n
    head = [0] * n
    for h in range(n):
        twin[halfedge_perm[h]] = halfedge_perm[surface.twin[h]]
        head[halfedge_perm[h]] = vertex_perm[surface.head[h]]
    faces = [tuple(halfedge_perm[h] for h in face) for face in surface.faces]
    moved = CombinatorialSurface.build(twin, head, faces, surface.n_vertices)
    vmap = {v: vertex_perm[v] for v in range(surface.n_vertices)}

    def walks(ws):
        return tuple(tuple(halfedge_perm[h] for h in w) for w in ws)

    return SuturedSurface(moved, s.marking.restricted(vmap), walks(s.designated), s.labels,
                          walks(s.designated_minus), s.labels_minus, name=s.name)


# refinement helpers


class _Editor:
    """Mutable copy of a complex used by the refinement helpers."""

    def __init__(self, surface):
        self.twin = list(surface.twin)
        self.head = list(surface.head)
        self.faces = [list(f) for f in surface.faces]
        self.n_vertices = surface.n_vertices

    def new_vertex(self):
        self.n_vertices += 1
        return self.n_vertices - 1

    def new_edge(self, tail, head):
        h = len(self.head)
        self.head.extend([head, tail])
        self.twin.extend([h + 1, h])
        return h, h + 1

    def tail(self, h):
        return self.head[self.twin[h]]

    def freeze(self):
        return CombinatorialSurface.build(self.twin, self.head, self.faces, self.n_vertices)


def _replace_in_faces(faces, h, replacement):
    for face in faces:
        if h in face:
            i = face.index(h)
            face[i:i + 1] = replacement
            return


def subdivide_edge(editor, h):
    """Insert a midpoint on the edge of h; returns (midpoint, {old: new walk piece})."""
    t = editor.twin[h]
    u, w = editor.tail(h), editor.head[h]
    m = editor.new_vertex()
    h2, t2 = editor.new_edge(m, w)
    # h: u -> m, t2: m -> u ; t: w -> m, h2: m -> w
    editor.head[h] = m
    editor.head[t] = m
    editor.head[t2] = u
    editor.twin[h], editor.twin[t2] = t2, h
    editor.twin[t], editor.twin[h2] = h2, t
    _replace_in_faces(editor.faces, h, [h, h2])
    _replace_in_faces(editor.faces, t, [t, t2])
    return m, {h: (h, h2), t: (t, t2)}


def _expand_walk(walk, pieces):
    out = []
    for h in walk:
        out.extend(pieces.get(h, (h,)))
    return tuple(out)


def split_face(surface, f, i, j):
    """Cut face f by a new edge between the tails of its i-th and j-th halfedges.

    Returns (new surface, x) where x runs from corner j to corner i and stays
    in face f; its twin bounds the appended face.
    """
    face = surface.faces[f]
    i, j = sorted((i, j))
    if i == j:
        raise StructuralError("cannot split a face at a single corner")
    editor = _Editor(surface)
    a, b = surface.tail[face[i]], surface.tail[face[j]]
    x, y = editor.new_edge(b, a)
    editor.faces[f] = list(face[i:j]) + [x]
    editor.faces.append(list(face[j:]) + list(face[:i]) + [y])
    return editor.freeze(), x


def refine_complex(surface, walks=()):
    """Midpoint-subdivide interior edges, then star-subdivide every face.

    Returns (surface, walks, face_origin) where face_origin[g] is the old face
    containing new face g.
    """
    editor = _Editor(surface)
    pieces = {}
    for h in surface.edges:
        if surface.is_interior_edge(h):
            _, update = subdivide_edge(editor, h)
            pieces.update(update)
    walks = tuple(_expand_walk(w, pieces) for w in walks)
    origin = list(range(len(editor.faces)))
    for f in range(len(surface.faces)):
        face = list(editor.faces[f])
        c = editor.new_vertex()
        spokes = []
        for h in face:
            spokes.append(editor.new_edge(editor.tail(h), c))
        k = len(face)
        for idx in range(k):
            triangle = [face[idx], spokes[(idx + 1) % k][0], spokes[idx][1]]
            if idx == 0:
                editor.faces[f] = triangle
            else:
                editor.faces.append(triangle)
                origin.append(f)
    return editor.freeze(), walks, tuple(origin)


def refine(s):
    """Refinement of a sutured surface keeping marks and designated walks."""
    surface, walks, _ = refine_complex(s.surface, s.designated + s.designated_minus)
    k = len(s.designated)
    return SuturedSurface(surface, s.marking, walks[:k], s.labels, walks[k:], s.labels_minus,
                          name=s.name)


# relative homology


@dataclass(frozen=True, eq=False)
class HomologyBasis:
    """A basis of H₁(surface, roots) with the data needed to express classes.

    ``walks`` are the basis cycles as halfedge walks; ``change`` converts
    tree–cotree coordinates into coordinates of the designated basis when one
    was supplied.
    """

    surface: CombinatorialSurface
    roots: frozenset
    ring: CoefficientRing
    leftover: tuple
    face_order: tuple
    walks: tuple
    change: tuple = None
    labels: tuple = ()
    tree_paths: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def rank(self):
        return len(self.leftover)

    @cached_property
    def cycles(self):
        return tuple(self.surface.walk_to_chain(w) for w in self.walks)

    def boundary_coefficient(self, chain, v):
        return self.surface.chain_boundary(chain).get(v, 0)

    def tree_coordinates(self, chain):
        surface = self.surface
        stray = {v: c for v, c in surface.chain_boundary(chain).items() if v not in self.roots}
        if stray:
            raise StructuralError(f"chain boundary not supported on the roots: {stray}")
        z = dict(chain)
        for f, e, sign in self.face_order:
            c = z.get(e, 0)
            if not c:
                continue
            for h in surface.faces[f]:
                edge = surface.edge_of[h]
                z[edge] = z.get(edge, 0) - c * sign * surface.halfedge_sign(h)
        return [self.ring.reduce(z.get(x, 0)) for x in self.leftover]

    def coordinates(self, chain):
        coords = self.tree_coordinates(chain)
        if self.change is not None:
            coords = linalg.apply(self.change, coords, self.ring)
        return coords

    def express(self, chain):
        """Degree-one multivector of the class of ``chain``."""
        return Multivector.from_vector(self.coordinates(chain), self.ring) \
            if self.rank else Multivector.zero(0, self.ring)

    def express_walk(self, walk):
        return self.express(self.surface.walk_to_chain(walk))

    def path_to_root(self, v):
        """Tree walk from the root of v's tree down to v."""
        return self.tree_paths[v]


def homology_basis(surface, roots, ring=CoefficientRing.INTEGERS, designated=None, labels=(),
                   verify=True):
    """Tree–cotree basis of H₁(surface, roots).

    Components without a root get their lowest vertex as root, so their
    absolute H₁ is computed.
    """
    ring = CoefficientRing.parse(ring)
    tail, head = surface.tail, surface.head
    adjacency = [[] for _ in range(surface.n_vertices)]
    for h in surface.edges:
        adjacency[tail[h]].append(h)
        adjacency[head[h]].append(surface.twin[h])
    for lst in adjacency:
        lst.sort(key=lambda g: surface.edge_of[g])

    parent = {}
    tree_edges = set()
    effective = set()
    discovered = []
    queue = deque()

    def seed(v):
        parent[v] = None
        effective.add(v)
        discovered.append(v)
        queue.append(v)

    def grow():
        while queue:
            v = queue.popleft()
            for h in adjacency[v]:
                w = head[h]
                if w not in parent:
                    parent[w] = h
                    tree_edges.add(surface.edge_of[h])
                    discovered.append(w)
                    queue.append(w)

    for r in sorted(roots):
        if 0 <= r < surface.n_vertices:
            seed(r)
    grow()
    for v in range(surface.n_vertices):
        if v not in parent:
            logger.debug("component of vertex %s has no root; using it as base point", v)
            seed(v)
            grow()

    paths = {}
    for v in discovered:
        h = parent[v]
        paths[v] = () if h is None else paths[tail[h]] + (h,)
    path_to = paths.__getitem__

    sides = {}
    for e, h in enumerate(surface.edges):
        if e in tree_edges:
            continue
        a, b = surface.face_of[h], surface.face_of[surface.twin[h]]
        if a == b:
            continue
        sides.setdefault(a, []).append((e, b))
        sides.setdefault(b, []).append((e, a))
    visited = {OUTER}
    cotree = set()
    face_order = []
    dual_queue = deque([OUTER])
    while dual_queue:
        node = dual_queue.popleft()
        for e, other in sides.get(node, []):
            if other in visited:
                continue
            visited.add(other)
            cotree.add(e)
            sign = surface.face_chain(other).get(e, 0)
            face_order.append((other, e, sign))
            dual_queue.append(other)
    if len(visited) != surface.n_faces + 1:
        raise ConsistencyError("dual graph is disconnected; the complex has a closed component")

    leftover = tuple(e for e in range(surface.n_edges) if e not in tree_edges and e not in cotree)
    walks = []
    for e in leftover:
        h = surface.edges[e]
        back = tuple(surface.twin[g] for g in reversed(path_to(head[h])))
        walks.append(path_to(tail[h]) + (h,) + back)

    basis = HomologyBasis(surface, frozenset(effective), ring, leftover, tuple(face_order),
                          tuple(walks), None, tuple(labels), paths)
    if verify and ring is CoefficientRing.INTEGERS:
        boundary = [[0] * surface.n_faces for _ in range(surface.n_edges)]
        for f in range(surface.n_faces):
            for e, c in surface.face_chain(f).items():
                boundary[e][f] = c
        if linalg.torsion_coefficients(boundary, surface.n_faces):
            raise ConsistencyError("relative homology has torsion; the complex is malformed")
    if designated:
        columns = [basis.tree_coordinates(surface.walk_to_chain(w)) for w in designated]
        if len(columns) != basis.rank:
            raise ConsistencyError(
                f"{len(columns)} designated cycles for a group of rank {basis.rank}")
        change = linalg.invert(linalg.columns_to_rows(columns, basis.rank), ring)
        basis = HomologyBasis(surface, basis.roots, ring, leftover, basis.face_order,
                              tuple(tuple(w) for w in designated), tuple(map(tuple, change)),
                              tuple(labels), paths)
    return basis


def relative_homology(s, ring=CoefficientRing.INTEGERS, minus=False, verify=True):
    """H₁(Σ, α⁺) (or H₁(Σ, α⁻) with ``minus``) in the designated basis if any."""
    roots = s.marking.alpha_minus if minus else s.marking.alpha_plus
    designated = s.designated_minus if minus else s.designated
    labels = s.labels_minus if minus else s.labels
    basis = homology_basis(s.surface, roots, ring, designated or None, labels, verify)
    if basis.rank != s.L:
        raise ConsistencyError(f"homology rank {basis.rank} differs from L = {s.L}")
    return basis


def express(chain, basis):
    return basis.express(chain)


# subsurfaces


@dataclass(frozen=True)
class Subsurface:
    """Closed union of some faces of a host, renumbered densely.

    ``halfedges[i]``, ``vertices[i]`` and ``faces[i]`` give host ids.
    """

    surface: CombinatorialSurface
    halfedges: tuple
    vertices: tuple
    faces: tuple
    marking: SuturedMarking

    def to_host_walk(self, walk):
        return tuple(self.halfedges[h] for h in walk)

    @property
    def euler(self):
        return self.surface.euler_characteristic


def subsurface(s, faces):
    """The closed union of ``faces`` with markings restricted to it."""
    host = s.surface if isinstance(s, SuturedSurface) else s
    marking = s.marking if isinstance(s, SuturedSurface) else SuturedMarking()
    faces = sorted(set(faces))
    if not faces:
        raise StructuralError("subsurface needs at least one face")
    used = set()
    for f in faces:
        for h in host.faces[f]:
            used.add(h)
            used.add(host.twin[h])
    halfedges = sorted(used)
    h_index = {h: i for i, h in enumerate(halfedges)}
    vertices = sorted({host.head[h] for h in halfedges})
    v_index = {v: i for i, v in enumerate(vertices)}
    surface = CombinatorialSurface.build(
        [h_index[host.twin[h]] for h in halfedges],
        [v_index[host.head[h]] for h in halfedges],
        [[h_index[h] for h in host.faces[f]] for f in faces],
        len(vertices),
    )
    return Subsurface(surface, tuple(halfedges), tuple(vertices), tuple(faces),
                      marking.restricted(v_index))


# intersection pairing


def collar(surface):
    """Attach a collar quad outside every boundary halfedge.

    Returns (collared surface, spokes) with spokes[v] the halfedge from the old
    boundary vertex v to its copy on the new boundary.
    """
    editor = _Editor(surface)
    spokes = {}
    for v in sorted(surface.boundary_vertices):
        copy = editor.new_vertex()
        spokes[v] = editor.new_edge(v, copy)[0]
    for cycle in surface.boundary_cycles:
        for h in cycle:
            u, w = surface.tail[h], surface.head[h]
            top, _ = editor.new_edge(editor.head[spokes[u]], editor.head[spokes[w]])
            editor.faces.append([surface.twin[h], spokes[u], top, editor.twin[spokes[w]]])
    return editor.freeze(), spokes


def intersection_number(surface, chain, walk, collared=None):
    """Algebraic intersection of a relative cycle (boundary on one set of
    boundary vertices) with a walk whose ends lie on a disjoint set.

    Both live on ``surface``; the walk is pushed off to its left inside the
    collared complex and the crossings with the chain are counted.
    """
    big, spokes = collared or collar(surface)
    ends = surface.chain_boundary(chain)
    spoke_ends = {spoke: ends.get(v, 0) for v, spoke in spokes.items()}

    def coefficient(o):
        if o < surface.n_halfedges:
            return surface.halfedge_coefficient(chain, o)
        return spoke_ends.get(o, 0)

    walk = list(walk)
    if not walk:
        return 0
    if surface.tail[walk[0]] == surface.head[walk[-1]]:
        pairs = list(zip(walk, walk[1:] + walk[:1]))
    else:
        first, last = surface.tail[walk[0]], surface.head[walk[-1]]
        if first not in spokes or last not in spokes:
            raise StructuralError("open walk must start and end on the boundary")
        extended = [big.twin[spokes[first]]] + walk + [spokes[last]]
        pairs = list(zip(extended, extended[1:]))
    total = 0
    for h_in, h_out in pairs:
        stop = big.twin[h_in]
        o = big.ccw_next(h_out)
        guard = 0
        while o != stop:
            total -= coefficient(o)
            o = big.ccw_next(o)
            guard += 1
            if o is None or guard > big.n_halfedges:
                raise ConsistencyError("rotation walk left the collared complex")
    return total


def intersection_matrix(s, plus_basis, minus_basis):
    """P[i][j] = I(a_i, b_j) for the α⁺ basis a and the α⁻ basis b."""
    collared = collar(s.surface)
    ring = plus_basis.ring
    return [[ring.reduce(intersection_number(s.surface, a, b, collared)) for b in minus_basis.walks]
            for a in plus_basis.cycles]


# random corpus


def polygon_surface(genus, runs):
    """Side-pairing polygon c₁ d₁ c₁⁻¹ … c_b d_b c_b⁻¹ a₁ b₁ a₁⁻¹ b₁⁻¹ ….

    ``runs[i]`` is the number of unpaired sides d_i, which close up into the
    i-th boundary circle. With no runs the surface is closed.
    """
    sides = []
    for i, length in enumerate(runs):
        if length < 1:
            raise StructuralError(f"boundary run {i} needs at least one side")
        sides.append(("c", i, 1))
        sides.extend([("d", i, 0)] * length)
        sides.append(("c", i, -1))
    for g in range(genus):
        sides.extend([("a", g, 1), ("b", g, 1), ("a", g, -1), ("b", g, -1)])
    if not sides:
        raise StructuralError("a polygon needs at least one side")
    return _polygon_surface(sides)


def random_surface(rng=None, max_genus=2, max_boundaries=3, max_pairs=4, max_sutures=8):
    """A random valid sutured surface from a side-pairing polygon.

    At most ``max_pairs`` F⁺ points are placed on each circle and at most
    ``max_sutures`` on the whole surface.
    """
    rng = rng or random.Random(0)
    genus = rng.randint(0, max_genus)
    n_boundaries = rng.randint(1, min(max_boundaries, max_sutures))
    sutures = []
    left = max_sutures
    for i in range(n_boundaries):
        k = rng.randint(1, min(max_pairs, left - (n_boundaries - i - 1)))
        sutures.append(k)
        left -= k
    surface = polygon_surface(genus, [4 * k + rng.randint(0, 2) for k in sutures])
    if rng.random() < 0.5:
        surface, _, _ = refine_complex(surface)
    marks = {m: [] for m in Mark}
    # boundary circles come out in polygon order, one per entry of ``sutures``
    for cycle, k in zip(surface.boundary_cycles, sutures):
        chosen = sorted(rng.sample(range(len(cycle)), 4 * k))
        for pos, idx in enumerate(chosen):
            marks[CYCLIC_PATTERN[pos % 4]].append(surface.tail[cycle[idx]])
    marking = SuturedMarking.from_lists(marks[Mark.F_PLUS], marks[Mark.F_MINUS],
                                        marks[Mark.ALPHA_PLUS], marks[Mark.ALPHA_MINUS])
    return SuturedSurface(surface, marking, name=f"random-g{genus}-b{n_boundaries}")


def _polygon_surface(sides):
    n = len(sides)
    label = list(range(n))

    def find(x):
        while label[x] != x:
            label[x] = label[label[x]]
            x = label[x]
        return x

    def union(a, b):
        a, b = find(a), find(b)
        if a != b:
            label[max(a, b)] = min(a, b)

    forward = {}
    backward = {}
    for s, (kind, i, direction) in enumerate(sides):
        if kind == "d":
            continue
        (forward if direction == 1 else backward)[(kind, i)] = s
    for key, s in forward.items():
        t = backward[key]
        union(s, (t + 1) % n)
        union((s + 1) % n, t)
    classes = sorted({find(c) for c in range(n)})
    vertex = {c: i for i, c in enumerate(classes)}
    corner = [vertex[find(c)] for c in range(n)]
    twin = [None] * (2 * n)
    head = [None] * (2 * n)
    face = list(range(n))
    for s in range(n):
        head[s] = corner[(s + 1) % n]
    extra = n
    for s, (kind, i, direction) in enumerate(sides):
        if kind == "d":
            twin[s], twin[extra] = extra, s
            head[extra] = corner[s]
            extra += 1
        elif direction == 1:
            t = backward[(kind, i)]
            twin[s], twin[t] = t, s
    return CombinatorialSurface.build(twin[:extra], head[:extra], [face], len(classes))


def inset_face(surface, f):
    """Shrink a copy of face f inside it.

    The inner copy keeps index f and the ring of quads between the two is
    appended. Returns (surface, ring) where ring lists the inner copy's
    halfedges, counterclockwise.
    """
    face = surface.faces[f]
    editor = _Editor(surface)
    corners = [editor.new_vertex() for _ in face]
    k = len(face)
    spokes = [editor.new_edge(surface.tail[h], corners[i]) for i, h in enumerate(face)]
    ring = [editor.new_edge(corners[i], corners[(i + 1) % k]) for i in range(k)]
    editor.faces[f] = [r[0] for r in ring]
    for i, h in enumerate(face):
        editor.faces.append([h, spokes[(i + 1) % k][0], ring[i][1], spokes[i][1]])
    return editor.freeze(), tuple(r[0] for r in ring)


@lru_cache(maxsize=512)
def cached_homology(s, ring, minus=False):
    """relative_homology without the torsion check, memoised per surface."""
    return relative_homology(s, ring, minus=minus, verify=False)


def interior_path(surface, start, end, blocked=frozenset(), min_length=1):
    """Shortest walk from start to end over interior edges whose inner vertices
    are interior vertices outside ``blocked``; None when there is none."""
    boundary = surface.boundary_vertices
    parent = {start: None}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for h in sorted(surface.outgoing[v]):
            if not surface.is_interior_edge(h):
                continue
            w = surface.head[h]
            if w in parent:
                continue
            if w == end:
                if v == start and min_length > 1:
                    continue
                walk = [h]
                while parent[v] is not None:
                    walk.append(parent[v])
                    v = surface.tail[parent[v]]
                return tuple(reversed(walk))
            if w in boundary or w in blocked:
                continue
            parent[w] = h
            queue.append(w)
    return None
