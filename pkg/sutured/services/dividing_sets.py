"""
Dividing Sets Module

A dividing set is an oriented set K of interior edges together with a sign
for every face. K must end exactly at the sutures, separate faces of opposite
sign, and be oriented as part of the boundary of the positive region, so that
∂R⁺(K) = A⁺ ∪ K.

On disks, dividing sets up to isotopy are chord diagrams: noncrossing
matchings of the sutures F₁ … F₂N.
"""

import logging
from collections import deque
from dataclasses import dataclass, replace
from functools import cached_property
from math import comb

from sutured.errors import MalformedInputError, StructuralError, ValidationError
from sutured.services import surface_complex as sc

logger = logging.getLogger(__name__)

PLUS, MINUS = 1, -1


@dataclass(frozen=True)
class DividingSet:
    host: sc.SuturedSurface
    curve_halfedges: frozenset
    face_signs: tuple
    name: str = ""

    @property
    def surface(self):
        return self.host.surface

    def sign(self, f):
        return self.face_signs[f]

    @cached_property
    def curve_edges(self):
        return frozenset(self.surface.edge_of[h] for h in self.curve_halfedges)


@dataclass(frozen=True)
class Region:
    sign: int
    faces: tuple
    isolated: bool


@dataclass(frozen=True)
class RegionDecomposition:
    regions: tuple
    r_plus: tuple
    r_minus: tuple
    I_plus: int
    I_minus: int
    L_K: int
    L_minus_K: int
    plus_surface: object = None
    minus_surface: object = None


# validation


def validate_dividing_set(k):
    """Every violated dividing-set condition, with witnesses."""
    found = sc.validate(k.host)
    if found:
        return found
    surface = k.surface
    if len(k.face_signs) != surface.n_faces or any(s not in (PLUS, MINUS) for s in k.face_signs):
        return [sc.Violation("signs", "every face needs a sign + or -", len(k.face_signs))]
    marking = k.host.marking
    unknown = [h for h in sorted(k.curve_halfedges) if not 0 <= h < surface.n_halfedges]
    if unknown:
        return [sc.Violation("curve", "unknown halfedge", h) for h in unknown]
    degree = {}
    for h in sorted(k.curve_halfedges):
        t = surface.twin[h]
        if t in k.curve_halfedges:
            found.append(sc.Violation("curve", "edge listed in both directions", h))
        if not surface.is_interior_edge(h):
            found.append(sc.Violation("curve-boundary", "dividing curve runs along the boundary", h))
            continue
        left, right = k.sign(surface.face_of[h]), k.sign(surface.face_of[t])
        if left == right:
            found.append(sc.Violation("adjacency", "faces on both sides of K have the same sign", h))
        elif left == MINUS:
            found.append(sc.Violation("orientation", "K is not oriented as the boundary of R+", h))
        for v, direction in ((surface.tail[h], "out"), (surface.head[h], "in")):
            degree.setdefault(v, []).append(direction)
    for h in surface.edges:
        e = surface.edge_of[h]
        if e in k.curve_edges or not surface.is_interior_edge(h):
            continue
        if k.sign(surface.face_of[h]) != k.sign(surface.face_of[surface.twin[h]]):
            found.append(sc.Violation("adjacency", "faces across a non-K edge have different signs", h))
    for v in range(surface.n_vertices):
        ends = degree.get(v, [])
        if v in marking.sutures:
            want = "in" if v in marking.F_plus else "out"
            if ends != [want]:
                found.append(sc.Violation("curve-ends", "∂K ≠ F: a suture must be one end of K", v))
        elif ends:
            if len(ends) != 2 or sorted(ends) != ["in", "out"]:
                found.append(sc.Violation("curve-degree", "K is not a 1-manifold here", v))
            elif v in surface.boundary_vertices:
                found.append(sc.Violation("curve-boundary", "K touches the boundary away from F", v))
    for h, sign in sorted(k.host.arc_sign.items()):
        if k.sign(surface.face_of[h]) != sign:
            found.append(sc.Violation("arc-sign", "boundary arc sign disagrees with its face", h))
    return found


def ensure_valid(k):
    found = validate_dividing_set(k)
    if found:
        raise ValidationError("invalid dividing set", found)
    return k


# regions


def _face_components(k):
    surface = k.surface
    label = list(range(surface.n_faces))

    def find(x):
        while label[x] != x:
            label[x] = label[label[x]]
            x = label[x]
        return x

    for h in surface.edges:
        if surface.edge_of[h] in k.curve_edges or not surface.is_interior_edge(h):
            continue
        a, b = find(surface.face_of[h]), find(surface.face_of[surface.twin[h]])
        if a != b:
            label[max(a, b)] = min(a, b)
    groups = {}
    for f in range(surface.n_faces):
        groups.setdefault(find(f), []).append(f)
    return [tuple(g) for _, g in sorted(groups.items())]


def regions(k):
    """Components of R⁺(K) and R⁻(K), isolation counts and L(K), L⁻(K)."""
    surface = k.surface
    found = []
    for faces in _face_components(k):
        touches = any(surface.is_boundary_halfedge(h) for f in faces for h in surface.faces[f])
        found.append(Region(k.sign(faces[0]), faces, not touches))
    plus = tuple(sorted(f for r in found if r.sign == PLUS for f in r.faces))
    minus = tuple(sorted(f for r in found if r.sign == MINUS for f in r.faces))
    plus_surface = sc.subsurface(k.host, plus) if plus else None
    minus_surface = sc.subsurface(k.host, minus) if minus else None
    n_F = k.host.n_F
    return RegionDecomposition(
        regions=tuple(found),
        r_plus=plus,
        r_minus=minus,
        I_plus=sum(1 for r in found if r.sign == PLUS and r.isolated),
        I_minus=sum(1 for r in found if r.sign == MINUS and r.isolated),
        L_K=n_F - (plus_surface.euler if plus_surface else 0),
        L_minus_K=n_F - (minus_surface.euler if minus_surface else 0),
        plus_surface=plus_surface,
        minus_surface=minus_surface,
    )


def is_non_isolating(k):
    decomposition = regions(k)
    return decomposition.I_plus == 0 and decomposition.I_minus == 0


# construction


def from_curve(host, curve, name=""):
    """Dividing set with the given curve edges; signs and orientation are inferred.

    Face signs come from the boundary arcs (A⁺ faces are positive) and flip
    across every curve edge. Isolated regions get their sign the same way
    from a neighbour.
    """
    surface = host.surface
    edges = {surface.edge_of[h] for h in curve}
    label = list(range(surface.n_faces))

    def find(x):
        while label[x] != x:
            label[x] = label[label[x]]
            x = label[x]
        return x

    for h in surface.edges:
        if surface.edge_of[h] not in edges and surface.is_interior_edge(h):
            a, b = find(surface.face_of[h]), find(surface.face_of[surface.twin[h]])
            if a != b:
                label[max(a, b)] = min(a, b)
    sign = {}
    for h, s in host.arc_sign.items():
        component = find(surface.face_of[h])
        if sign.setdefault(component, s) != s:
            raise StructuralError(f"region of face {surface.face_of[h]} touches both A+ and A-")
    across = {}
    for e in edges:
        h = surface.edges[e]
        a, b = find(surface.face_of[h]), find(surface.face_of[surface.twin[h]])
        across.setdefault(a, []).append(b)
        across.setdefault(b, []).append(a)
    queue = deque(sorted(sign))
    while queue:
        c = queue.popleft()
        for other in across.get(c, []):
            if other not in sign:
                sign[other] = -sign[c]
                queue.append(other)
            elif sign[other] == sign[c]:
                raise StructuralError("curve does not separate regions of opposite sign")
    signs = []
    for f in range(surface.n_faces):
        component = find(f)
        if component not in sign:
            raise StructuralError(f"cannot determine the sign of face {f}")
        signs.append(sign[component])
    oriented = set()
    for e in edges:
        h = surface.edges[e]
        oriented.add(h if signs[surface.face_of[h]] == PLUS else surface.twin[h])
    return DividingSet(host, frozenset(oriented), tuple(signs), name)


def with_closed_circle(k, face=None):
    """Add a small contractible K-circle inside one face.

    The disk it bounds gets the sign opposite to the face, so the new region
    is isolated.
    """
    f = 0 if face is None else face
    surface, ring = sc.inset_face(k.surface, f)
    host = replace(k.host, surface=surface)
    outer = k.sign(f)
    signs = list(k.face_signs) + [outer] * len(ring)
    signs[f] = -outer
    circle = ring if -outer == PLUS else tuple(surface.twin[h] for h in ring)
    return DividingSet(host, k.curve_halfedges | frozenset(circle), tuple(signs),
                       name=f"{k.name}+circle" if k.name else "circle")


# chord diagrams


@dataclass(frozen=True)
class ChordDiagram:
    """Noncrossing perfect matching of the sutures 1 .. 2N, stored as sorted pairs."""

    N: int
    pairs: tuple

    @classmethod
    def from_pairs(cls, pairs):
        pairs = tuple(sorted(tuple(sorted(p)) for p in pairs))
        return cls(len(pairs), pairs)

    @classmethod
    def parse(cls, text):
        try:
            pairs = [tuple(int(x) for x in chunk.split("-")) for chunk in text.replace(" ", "").split(",")]
        except ValueError as exc:
            raise MalformedInputError(f"cannot parse chord diagram {text!r}") from exc
        if any(len(p) != 2 for p in pairs):
            raise MalformedInputError(f"chords are written a-b: {text!r}")
        diagram = cls.from_pairs(pairs)
        problems = diagram.violations()
        if problems:
            raise MalformedInputError(f"{text!r}: {problems[0]}")
        return diagram

    @cached_property
    def matching(self):
        table = {}
        for a, b in self.pairs:
            table[a] = b
            table[b] = a
        return table

    def partner(self, i):
        return self.matching[i]

    def violations(self):
        found = []
        points = sorted(p for pair in self.pairs for p in pair)
        if points != list(range(1, 2 * self.N + 1)):
            found.append(f"chords must use every suture 1..{2 * self.N} once")
            return found
        for a, b in self.pairs:
            if (b - a) % 2 == 0:
                found.append(f"chord {a}-{b} joins sutures of the same sign")
        for a, b in self.pairs:
            for c, d in self.pairs:
                if a < c < b < d:
                    found.append(f"chords {a}-{b} and {c}-{d} cross")
        return found

    def to_text(self):
        return ",".join(f"{a}-{b}" for a, b in self.pairs)

    def __str__(self):
        return self.to_text()

    def rotated(self, steps):
        """Rotate counterclockwise by ``steps`` suture positions."""
        n = 2 * self.N
        return ChordDiagram.from_pairs(((a - 1 + steps) % n + 1, (b - 1 + steps) % n + 1)
                                       for a, b in self.pairs)


def catalan(N):
    return comb(2 * N, N) // (N + 1)


def _matchings(points):
    if not points:
        yield ()
        return
    first = points[0]
    for idx in range(1, len(points), 2):
        inside, outside = points[1:idx], points[idx + 1:]
        for left in _matchings(inside):
            for right in _matchings(outside):
                yield ((first, points[idx]),) + left + right


def enumerate_chord_diagrams(N):
    """All noncrossing matchings of 2N sutures in lexicographic order."""
    if N < 1:
        raise StructuralError("enumerate_chord_diagrams needs N >= 1")
    diagrams = (ChordDiagram.from_pairs(m) for m in _matchings(tuple(range(1, 2 * N + 1))))
    return sorted(diagrams, key=lambda d: d.pairs)


def chord_to_dividing_set(cd):
    """Realise a chord diagram on standard_disk(N) by splitting the polygon."""
    problems = cd.violations()
    if problems:
        raise ValidationError("invalid chord diagram", [sc.Violation("chord", p, cd.to_text()) for p in problems])
    host = sc.standard_disk(cd.N)
    surface = host.surface
    curve = []
    for a, b in cd.pairs:
        va, vb = sc.suture_vertex(a), sc.suture_vertex(b)
        for f, face in enumerate(surface.faces):
            tails = [surface.tail[h] for h in face]
            if va in tails and vb in tails:
                surface, x = sc.split_face(surface, f, tails.index(va), tails.index(vb))
                curve.append(x)
                break
        else:
            raise StructuralError(f"chord {a}-{b} does not fit in one face")
    return from_curve(replace(host, surface=surface), curve, name=cd.to_text())


# the annulus dividing sets


def _annulus_paths(rings, sectors):
    q = sectors // 4
    inner = rings - 1
    mid = rings // 2

    def arc(ring_level, start, stop, boundary):
        # boundary vertex at sector start, along ring_level to sector stop, back out
        steps = list(range(start, stop + 1)) if stop >= start else list(range(start, stop + sectors + 1))
        return [(boundary, start)] + [(ring_level, j) for j in steps] + [(boundary, stop)]

    def reverse_arc(ring_level, start, stop, boundary):
        return list(reversed(arc(ring_level, stop, start, boundary)))

    outer_plus = arc(1, 0, 2 * q, 0)
    outer_minus = arc(1, 2 * q, 4 * q, 0)
    inner_plus = reverse_arc(inner - 1, 2 * q, 0, inner)
    inner_minus = reverse_arc(inner - 1, 4 * q, 2 * q, inner)
    core = [(mid, j) for j in range(sectors + 1)]
    radial = [[(i, s) for i in range(rings)] for s in (0, 2 * q)]

    def staircase(offset):
        path = [(0, offset), (1, offset)]
        turns = min(sectors, rings - 3)
        for i in range(1, turns + 1):
            path.append((i, offset + i))
            path.append((i + 1, offset + i))
        for i in range(turns + 2, rings):
            path.append((i, offset + turns))
        return path

    return {
        "K_plus": [outer_plus, inner_plus],
        "K_minus": [outer_minus, inner_minus],
        "K_0": [outer_minus, core, inner_plus],
        "K_1": [outer_plus, core, inner_minus],
        "L_0": radial,
        "L_1": [staircase(0), staircase(2 * q)],
    }


ANNULUS_SETS = ("K_plus", "K_minus", "K_0", "K_1", "L_0", "L_1")


def annulus_dividing_set(name, host=None):
    """One of the six non-isolating dividing sets of the standard annulus.

    K_plus and K_minus are boundary-parallel arcs around α⁺ resp. α⁻; K_0 and
    K_1 add a core circle; L_0 and L_1 cut the annulus into two strips, L_1
    winding once around the core.
    """
    host = host or sc.standard_annulus()
    rings = host.surface.n_vertices // 8
    sectors = 8
    paths = _annulus_paths(rings, sectors)
    if name not in paths:
        raise StructuralError(f"unknown annulus dividing set {name!r}; choose from {ANNULUS_SETS}")
    curve = []
    for path in paths[name]:
        ids = [i * sectors + j % sectors for i, j in path]
        curve.extend(sc.grid_walk(host.surface, ids))
    return from_curve(host, curve, name=name)


def annulus_dividing_sets(host=None):
    host = host or sc.standard_annulus()
    return {name: annulus_dividing_set(name, host) for name in ANNULUS_SETS}


def from_suture_pairs(host, pairs, name=""):
    """Dividing set whose arcs join the given pairs of suture vertices.

    Arcs are routed through interior vertices of the existing complex and
    must stay disjoint; callers refine the host when there is no room.
    """
    surface = host.surface
    used = set()
    curve = []
    for a, b in pairs:
        if a not in host.marking.sutures or b not in host.marking.sutures:
            raise StructuralError(f"{a} and {b} must both be sutures")
        path = sc.interior_path(surface, a, b, blocked=frozenset(used))
        if path is None:
            raise StructuralError(f"no free interior path joins sutures {a} and {b}")
        used.update(surface.head[h] for h in path)
        used.add(a)
        curve.extend(path)
    return from_curve(host, curve, name=name)
