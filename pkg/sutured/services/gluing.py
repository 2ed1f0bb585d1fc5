"""
Gluing Module

Gluings identify boundary paths γ and γ′ of a sutured surface by an
orientation-reversing map τ. The quotient Σ_τ keeps every face and every
halfedge of the host except the exterior twins of γ ∪ γ′; the halfedges of γ
and γ′ become each other's twins.

The gluing morphism Φ_τ pushes classes forward to H₁(Σ_τ, φ_τ(α⁺)), contracts
with η (the wedge of the swallowed-vertex functionals) and re-expresses the
result over H₁(Σ_τ, α⁺_τ).
"""

import logging
from collections import deque
from dataclasses import dataclass, replace
from functools import cached_property, lru_cache

from sutured.errors import ConsistencyError, StructuralError, ValidationError
from sutured.services import contact
from sutured.services import dividing_sets as ds
from sutured.services import surface_complex as sc
from sutured.services.exterior_algebra import (
    CoefficientRing,
    DualMultivector,
    Multivector,
    indices_of,
    induced_map,
    interior,
    to_text,
    wedge_all,
)
from sutured.services.surface_complex import Mark, Violation
from sutured.utils import linalg

logger = logging.getLogger(__name__)

MARK_IMAGE = {
    None: None,
    Mark.ALPHA_PLUS: Mark.ALPHA_PLUS,
    Mark.ALPHA_MINUS: Mark.ALPHA_MINUS,
    Mark.F_PLUS: Mark.F_MINUS,
    Mark.F_MINUS: Mark.F_PLUS,
}
ALPHA_MARKS = (Mark.ALPHA_PLUS, Mark.ALPHA_MINUS)


def _as_paths(paths):
    paths = list(paths)
    if paths and all(isinstance(h, int) for h in paths):
        return (tuple(paths),)
    return tuple(tuple(int(h) for h in p) for p in paths)


@dataclass(frozen=True)
class Gluing:
    """τ: γ → γ′ given by paired boundary paths.

    The k-th halfedge of ``gamma[i]`` is glued to the k-th halfedge from the
    end of ``gamma_prime[i]``. ``vertex_map`` optionally spells τ out on
    vertices as (v, τ(v)) pairs; it must agree with the paths.
    """

    host: sc.SuturedSurface
    gamma: tuple
    gamma_prime: tuple
    vertex_map: tuple = ()

    @classmethod
    def from_paths(cls, host, gamma, gamma_prime, vertex_map=None):
        pairs = tuple(sorted((int(v), int(w)) for v, w in dict(vertex_map or {}).items()))
        return cls(host, _as_paths(gamma), _as_paths(gamma_prime), pairs)

    def on(self, host):
        """The same identification on a complex sharing the host's boundary ids."""
        return replace(self, host=host)

    @cached_property
    def halfedge_pairs(self):
        pairs = []
        for path, image in zip(self.gamma, self.gamma_prime):
            m = len(path)
            pairs.extend((h, image[m - 1 - k]) for k, h in enumerate(path))
        return tuple(pairs)

    @cached_property
    def _tau(self):
        surface = self.host.surface
        table, conflicts = {}, []
        for h, g in self.halfedge_pairs:
            for v, w in ((surface.tail[h], surface.head[g]), (surface.head[h], surface.tail[g])):
                if table.setdefault(v, w) != w:
                    conflicts.append(v)
        return table, conflicts

    @property
    def tau(self):
        return self._tau[0]

    def is_empty(self):
        return not self.halfedge_pairs


@dataclass(frozen=True)
class GluedSurfaceData:
    gluing: Gluing
    result: sc.SuturedSurface
    vertex_map: tuple
    halfedge_map: tuple
    swallowed: tuple
    demoted: frozenset = frozenset()

    @property
    def host(self):
        return self.gluing.host

    def eta(self, sign=1):
        return GluingOrientationEta(self.swallowed, sign)


@dataclass(frozen=True)
class GluingOrientationEta:
    """η = sign · ε_{v₁} ∧ … ∧ ε_{v_k}, ε_v(x) = coefficient of v in ∂x."""

    vertices: tuple
    sign: int = 1

    def functional(self, basis):
        ring = basis.ring
        factors = [DualMultivector.from_vector([basis.boundary_coefficient(c, v) for c in basis.cycles], ring)
                   if basis.rank else DualMultivector.zero(0, ring)
                   for v in self.vertices]
        return wedge_all(factors, basis.rank, ring, DualMultivector) * self.sign


# validation and the quotient


def _union_find(n, pairs):
    label = list(range(n))

    def find(x):
        while label[x] != x:
            label[x] = label[label[x]]
            x = label[x]
        return x

    for a, b in pairs:
        a, b = find(a), find(b)
        if a != b:
            label[max(a, b)] = min(a, b)
    return [find(v) for v in range(n)]


def _quotient(gluing):
    surface = gluing.host.surface
    roots = _union_find(surface.n_vertices, gluing.tau.items())
    classes = sorted(set(roots))
    number = {c: i for i, c in enumerate(classes)}
    vertex_map = tuple(number[r] for r in roots)
    partner = {}
    for h, g in gluing.halfedge_pairs:
        partner[h], partner[g] = g, h
    removed = {surface.twin[h] for h in partner}
    kept = [h for h in range(surface.n_halfedges) if h not in removed]
    index = {h: i for i, h in enumerate(kept)}
    quotient = sc.CombinatorialSurface.build(
        [index[partner.get(h, surface.twin[h])] for h in kept],
        [vertex_map[surface.head[h]] for h in kept],
        [[index[h] for h in face] for face in surface.faces],
        len(classes),
    )
    halfedge_map = tuple(index[h] if h in index else index[partner[surface.twin[h]]]
                         for h in range(surface.n_halfedges))
    return quotient, vertex_map, halfedge_map


def validate_gluing(gluing):
    """Every violated gluing condition; an empty list means τ is valid."""
    found = sc.validate(gluing.host)
    if found:
        return found
    surface, marking = gluing.host.surface, gluing.host.marking
    if len(gluing.gamma) != len(gluing.gamma_prime):
        return [Violation("gluing-length", "γ and γ′ need the same number of paths",
                          (len(gluing.gamma), len(gluing.gamma_prime)))]
    used = set()
    for path, image in zip(gluing.gamma, gluing.gamma_prime):
        if len(path) != len(image):
            found.append(Violation("gluing-length", "paired paths differ in length", path[:1]))
        for walk in (path, image):
            if not walk:
                found.append(Violation("gluing-path", "empty gluing path", None))
                continue
            if any(not 0 <= h < surface.n_halfedges or not surface.is_boundary_halfedge(h) for h in walk):
                found.append(Violation("gluing-path", "gluing path leaves the boundary", walk[0]))
                continue
            overlap = used.intersection(walk)
            if overlap:
                found.append(Violation("gluing-overlap", "γ and γ′ share a halfedge", min(overlap)))
            used.update(walk)
            if not surface.walk_is_connected(walk):
                found.append(Violation("gluing-path", "gluing path is not connected", walk[0]))
            elif surface.tail[walk[0]] != surface.head[walk[-1]]:
                for v in (surface.tail[walk[0]], surface.head[walk[-1]]):
                    if v not in marking.alpha:
                        found.append(Violation("gluing-ends", "gluing path must end in α", v))
    if found:
        return found
    table, conflicts = gluing._tau
    for v in sorted(set(conflicts)):
        found.append(Violation("gluing-map", "paths send a vertex to two places", v))
    explicit = dict(gluing.vertex_map)
    for v, w in sorted(table.items()):
        if v in explicit and explicit[v] != w:
            found.append(Violation("gluing-map", "vertex_map disagrees with the paths", v))
        if v == w:
            found.append(Violation("gluing-fixed", "τ has a fixed point", v))
        elif marking.mark_of(w) is not MARK_IMAGE[marking.mark_of(v)]:
            found.append(Violation("gluing-marks", "τ must send α± to α± and F± to F∓", v))
    if found:
        return found
    quotient, _, _ = _quotient(gluing)
    for problem in quotient.structural_violations():
        code = "gluing-closed" if problem.code == "closed" else "gluing-quotient"
        found.append(Violation(code, f"quotient: {problem.message}", problem.witness))
    return found


def _quotient_marking(gluing, surface, vertex_map):
    """Boundary images of the marks, one α of each kind kept between sutures."""
    images = {}
    for v, marks in gluing.host.marking.by_vertex.items():
        images.setdefault(vertex_map[v], set()).update(marks)
    kept = {}
    for w, marks in sorted(images.items()):
        if w not in surface.boundary_vertices:
            continue
        if len(marks) != 1:
            raise ValidationError("gluing merges differently marked vertices",
                                  [Violation("gluing-marks", "merged vertex has several marks", w)])
        kept[w] = next(iter(marks))
    demoted = set()
    for cycle in surface.boundary_cycles:
        tails = [surface.tail[h] for h in cycle]
        first = next((i for i, v in enumerate(tails) if kept.get(v) in (Mark.F_PLUS, Mark.F_MINUS)), None)
        if first is None:
            demoted.update(v for v in tails if v in kept)
            continue
        expected, seen = None, False
        for step in range(len(tails)):
            v = tails[(first + step) % len(tails)]
            mark = kept.get(v)
            if mark is Mark.F_PLUS:
                expected, seen = Mark.ALPHA_PLUS, False
            elif mark is Mark.F_MINUS:
                expected, seen = Mark.ALPHA_MINUS, False
            elif mark is not None:
                if mark is expected and not seen:
                    seen = True
                else:
                    demoted.add(v)
    lists = {mark: [] for mark in Mark}
    for w, mark in kept.items():
        if w not in demoted:
            lists[mark].append(w)
    marking = sc.SuturedMarking.from_lists(lists[Mark.F_PLUS], lists[Mark.F_MINUS],
                                           lists[Mark.ALPHA_PLUS], lists[Mark.ALPHA_MINUS])
    return marking, frozenset(demoted)


def glue(gluing):
    """Build Σ_τ with its marking and the swallowed α⁺ images.

    Raises:
        ValidationError: τ is invalid or the quotient is not a sutured surface.
    """
    found = validate_gluing(gluing)
    if found:
        raise ValidationError("invalid gluing", found)
    surface, vertex_map, halfedge_map = _quotient(gluing)
    marking, demoted = _quotient_marking(gluing, surface, vertex_map)
    name = f"{gluing.host.name}/glued" if gluing.host.name else "glued"
    result = sc.SuturedSurface(surface, marking, name=name)
    found = sc.validate(result)
    if found:
        raise ValidationError("glued surface is not a valid sutured surface", found)
    images = {vertex_map[v] for v in gluing.host.marking.alpha_plus}
    swallowed = tuple(sorted(images - marking.alpha_plus))
    logger.debug("glued %s: %d vertices, swallowed %s", name, surface.n_vertices, swallowed)
    return GluedSurfaceData(gluing, result, vertex_map, halfedge_map, swallowed, demoted)


def glue_for(g, host):
    """``g`` itself, or the same gluing redone on a host with extra interior cells."""
    if host.surface == g.host.surface and host.marking == g.host.marking:
        return g
    return glue(g.gluing.on(host))


# pushforward and the morphism


def pushforward_class(g, chain):
    """Image under φ_τ of a 1-chain {edge: coefficient} of the host."""
    source, target = g.host.surface, g.result.surface
    image = {}
    for e, c in chain.items():
        h = g.halfedge_map[source.edges[e]]
        edge = target.edge_of[h]
        image[edge] = image.get(edge, 0) + c * target.halfedge_sign(h)
    return {e: c for e, c in image.items() if c}


@dataclass(frozen=True)
class _MorphismParts:
    push: tuple
    eta: DualMultivector
    inverse: tuple
    source_rank: int
    target_rank: int
    intermediate_rank: int


def _columns(basis, chains):
    return linalg.columns_to_rows([basis.coordinates(c) for c in chains], basis.rank)


@lru_cache(maxsize=128)
def _morphism_parts(g, ring, sign=1):
    host_basis = sc.cached_homology(g.host, ring)
    target_basis = sc.cached_homology(g.result, ring)
    roots = g.result.marking.alpha_plus | frozenset(g.swallowed)
    middle = sc.homology_basis(g.result.surface, roots, ring, verify=False)
    if middle.rank != target_basis.rank + len(g.swallowed):
        raise ConsistencyError(
            f"H1 with swallowed roots has rank {middle.rank}, expected "
            f"{target_basis.rank} + {len(g.swallowed)}")
    push = _columns(middle, [pushforward_class(g, c) for c in host_basis.cycles])
    eta = GluingOrientationEta(g.swallowed, sign).functional(middle)
    surface = g.result.surface
    chains = list(target_basis.cycles)
    chains += [surface.walk_to_chain(target_basis.path_to_root(v)) for v in g.swallowed]
    inverse = linalg.invert(_columns(middle, chains), ring) if chains else []
    return _MorphismParts(tuple(map(tuple, push)), eta, tuple(map(tuple, inverse)),
                          host_basis.rank, target_basis.rank, middle.rank)


def _restrict(parts, z):
    w = induced_map([list(row) for row in parts.inverse], z, target_rank=parts.intermediate_rank)
    limit = 1 << parts.target_rank
    stray = [mask for mask in w.terms if mask >= limit]
    if stray:
        raise ConsistencyError(f"gluing morphism left Λ(Im j): terms {[indices_of(m) for m in stray]}")
    return Multivector(parts.target_rank, dict(w.terms), w.ring)


def gluing_morphism(g, x, eta_sign=1):
    """Φ_τ(x) = ι_η(φ_τ*(x)) expressed over H₁(Σ_τ, α⁺_τ).

    Args:
        g (GluedSurfaceData): the glued surface.
        x (Multivector): element of V(host) in the host's homology basis.
        eta_sign (int): orientation of η; irrelevant over F2.
    """
    parts = _morphism_parts(g, x.ring, eta_sign)
    if x.rank != parts.source_rank:
        raise StructuralError(f"x has rank {x.rank}, the host algebra has rank {parts.source_rank}")
    y = induced_map([list(row) for row in parts.push], x, target_rank=parts.intermediate_rank)
    return _restrict(parts, interior(parts.eta, y))


def morphism_columns(g, ring=CoefficientRing.F2, degree=None):
    """Images of the basis multivectors of V(host), as (source, image) pairs."""
    ring = CoefficientRing.parse(ring)
    rank = sc.cached_homology(g.host, ring).rank
    columns = []
    for mask in range(1 << rank):
        if degree is not None and bin(mask).count("1") != degree:
            continue
        source = Multivector(rank, {mask: 1}, ring)
        columns.append((source, gluing_morphism(g, source)))
    return columns


def morphism_matrix(g, ring=CoefficientRing.F2):
    """Matrix of Φ_τ on the bases {e_I} of both exterior algebras."""
    ring = CoefficientRing.parse(ring)
    columns = morphism_columns(g, ring)
    size = 1 << sc.cached_homology(g.result, ring).rank
    return linalg.columns_to_rows([[image.terms.get(m, 0) for m in range(size)] for _, image in columns],
                                  size)


def describe_morphism(g, ring=CoefficientRing.F2):
    return [{"source": to_text(source), "image": to_text(image)}
            for source, image in morphism_columns(g, ring)]


def is_invertible(g, ring=CoefficientRing.F2):
    ring = CoefficientRing.parse(ring)
    matrix = morphism_matrix(g, ring)
    if not matrix or len(matrix) != len(matrix[0]):
        return False
    return linalg.determinant(matrix, ring) in ((1,) if ring is CoefficientRing.F2 else (1, -1))


def interior_image_is_exterior_of_image(g, ring=CoefficientRing.F2):
    """ι_η maps Λ(H₁(Σ_τ, φ_τ(α⁺))) onto Λ(H₁(Σ_τ, α⁺_τ))."""
    ring = CoefficientRing.parse(ring)
    parts = _morphism_parts(g, ring)
    size = 1 << parts.target_rank
    columns = []
    for mask in range(1 << parts.intermediate_rank):
        z = interior(parts.eta, Multivector(parts.intermediate_rank, {mask: 1}, ring))
        try:
            w = _restrict(parts, z)
        except ConsistencyError:
            return False
        columns.append([w.terms.get(m, 0) for m in range(size)])
    rows = linalg.columns_to_rows(columns, size)
    return linalg.matrix_rank(rows, ring, len(columns)) == size


def with_result_basis(g, walks, labels):
    """``g`` with Σ_τ carrying the designated basis given by the images of host walks."""
    images = [tuple(g.halfedge_map[h] for h in walk) for walk in walks]
    return replace(g, result=g.result.with_designated(images, labels))


# dividing sets


def push_dividing_set(g, k):
    """K_τ, the image of K in Σ_τ; re-glues when K lives on a finer complex."""
    g = glue_for(g, k.host)
    curve = frozenset(g.halfedge_map[h] for h in k.curve_halfedges)
    pushed = ds.DividingSet(g.result, curve, k.face_signs, name=f"{k.name}/glued" if k.name else "glued")
    found = ds.validate_dividing_set(pushed)
    if found:
        raise ValidationError("glued dividing set is invalid", found)
    return pushed


def check_respect(g, k, ring=CoefficientRing.F2, orientation=None, eta_sign=1):
    """Φ_τ(c(K, ω)) = c(K_τ), exactly over F2 and up to sign over the integers.

    ``orientation`` is ω on R⁺(K); the default is the ascending wedge of the
    region basis. The orientation of R⁺(K_τ) is only fixed up to sign, so
    the comparison over the integers is too.
    """
    ring = CoefficientRing.parse(ring)
    g = glue_for(g, k.host)
    image = gluing_morphism(g, contact.contact_element(k, orientation, ring).value, eta_sign)
    expected = contact.contact_element(push_dividing_set(g, k), ring=ring).value
    if ring is CoefficientRing.F2:
        return image == expected
    return image.equals_up_to_sign(expected)


# standard gluings


def disk_to_annulus_gluing(N=4, width=1, host=None):
    """Glue two boundary stretches of (D², F(N)) into an annulus.

    γ runs from α₂ over 4·width boundary edges and γ′ ends at α₂N; every α⁺
    strictly inside γ is swallowed. ``host`` may be any refinement of
    standard_disk(N).
    """
    if width < 1 or N < 2 * width + 2:
        raise StructuralError(f"a width-{width} gluing needs N >= {2 * width + 2}")
    host = host or sc.standard_disk(N)
    n = 4 * N
    length = 4 * width

    def stretch(start):
        return tuple(2 * ((start + j) % n) for j in range(length))

    return Gluing(host, (stretch(sc.alpha_vertex(2)),), (stretch(sc.alpha_vertex(2 * N - 2 * width)),))


# cutting


@dataclass(frozen=True)
class CutResult:
    surface: sc.SuturedSurface
    gluing: Gluing
    arcs: tuple


def _check_arc(s, arc, used):
    surface, marking = s.surface, s.marking
    if len(arc) < 2 or not surface.walk_is_connected(arc):
        raise StructuralError(f"cut arc {arc} must be a connected walk of at least two edges")
    if any(not surface.is_interior_edge(h) for h in arc):
        raise StructuralError(f"cut arc {arc} runs along the boundary")
    vertices = [surface.tail[arc[0]]] + [surface.head[h] for h in arc]
    ends = {marking.mark_of(vertices[0]), marking.mark_of(vertices[-1])}
    if ends != set(ALPHA_MARKS):
        raise StructuralError(f"cut arc {arc} must join an α⁺ vertex to an α⁻ vertex")
    if len(set(vertices)) != len(vertices) or used.intersection(vertices):
        raise StructuralError(f"cut arc {arc} is not embedded")
    if any(v in surface.boundary_vertices for v in vertices[1:-1]):
        raise StructuralError(f"cut arc {arc} touches the boundary in its interior")
    used.update(vertices)
    return vertices


def _left_faces(surface, v, out, stop):
    """Faces met turning counterclockwise at v from ``out`` until ``stop``."""
    faces = set()
    o = out
    for _ in range(len(surface.outgoing[v]) + 1):
        if o is None or o == stop or surface.face_of[o] == sc.OUTER:
            return faces
        faces.add(surface.face_of[o])
        o = surface.ccw_next(o)
    raise ConsistencyError(f"rotation at vertex {v} does not close up")


def _cut_one(s, arc, vertices):
    surface = s.surface
    twin, head = list(surface.twin), list(surface.head)
    n_vertices = surface.n_vertices
    m = len(arc)
    copies = {}
    for k, v in enumerate(vertices):
        if k == 0:
            left = _left_faces(surface, v, arc[0], None)
        elif k == m:
            left = _left_faces(surface, v, surface.rotation(v)[0], surface.twin[arc[-1]])
        else:
            left = _left_faces(surface, v, arc[k], surface.twin[arc[k - 1]])
        copies[v] = n_vertices
        n_vertices += 1
        for h in range(surface.n_halfedges):
            f = surface.face_of[h]
            if surface.head[h] == v and f != sc.OUTER and f not in left:
                head[h] = copies[v]
    for h in arc:
        for g in (h, surface.twin[h]):
            twin.append(g)
            head.append(None)
            twin[g] = len(twin) - 1
    for z in range(len(twin)):
        if z < surface.n_halfedges and surface.face_of[z] != sc.OUTER:
            continue
        head[z] = head[surface.prev_in_face(twin[z])]
    cut = sc.CombinatorialSurface.build(twin, head, surface.faces, n_vertices)
    marks = {mark: set(s.marking.of(mark)) for mark in sc.Mark}
    for v in (vertices[0], vertices[-1]):
        mark = s.marking.mark_of(v)
        marks[mark].add(copies[v])
    middle = vertices[m // 2]
    if s.marking.mark_of(vertices[0]) is Mark.ALPHA_PLUS:
        left_mark, right_mark = Mark.F_MINUS, Mark.F_PLUS
    else:
        left_mark, right_mark = Mark.F_PLUS, Mark.F_MINUS
    marks[left_mark].add(middle)
    marks[right_mark].add(copies[middle])
    marking = sc.SuturedMarking.from_lists(marks[Mark.F_PLUS], marks[Mark.F_MINUS],
                                           marks[Mark.ALPHA_PLUS], marks[Mark.ALPHA_MINUS])
    gamma_prime = tuple(surface.twin[h] for h in reversed(arc))
    return sc.SuturedSurface(cut, marking, name=s.name), tuple(arc), gamma_prime


def cut_open(s, arcs):
    """Cut Σ along arcs from α⁺ to α⁻ through interior vertices.

    Each arc is doubled; its endpoints are doubled with their α marks and a
    new suture is placed in the middle of each copy, with the sign forced by
    the α point that precedes it. Returns a CutResult whose gluing re-glues
    the copies.
    """
    arcs = [tuple(arc) for arc in arcs]
    used = set()
    checked = [(arc, _check_arc(s, arc, used)) for arc in arcs]
    gamma, gamma_prime = [], []
    current = s
    for arc, vertices in checked:
        current, left, right = _cut_one(current, arc, vertices)
        gamma.append(left)
        gamma_prime.append(right)
    if arcs:
        current = replace(current, name=f"{s.name}/cut" if s.name else "cut")
        found = sc.validate(current)
        if found:
            raise ValidationError("cut surface is not a valid sutured surface", found)
    return CutResult(current, Gluing(current, tuple(gamma), tuple(gamma_prime)), tuple(arcs))


# quadrangulation


@dataclass(frozen=True)
class Piece:
    vertices: tuple
    euler: int
    n_F: int
    n_boundary: int

    @property
    def is_disk(self):
        return self.euler == 1 and self.n_boundary == 1

    @property
    def kind(self):
        if self.is_disk and self.n_F in (1, 2):
            return f"F({self.n_F})"
        return f"surface(chi={self.euler}, n_F={self.n_F})"

    @property
    def terminal(self):
        return self.is_disk and self.n_F in (1, 2)


def pieces(s):
    """Connected components of s with their Euler characteristic and suture count."""
    surface = s.surface
    component = surface.vertex_components
    counts = {}

    def bump(root, index, amount=1):
        counts.setdefault(root, [0, 0, 0, 0, []])[index] += amount

    for v in range(surface.n_vertices):
        bump(component[v], 0)
        counts[component[v]][4].append(v)
    for h in surface.edges:
        bump(component[surface.tail[h]], 1)
    for face in surface.faces:
        bump(component[surface.tail[face[0]]], 2)
    for cycle in surface.boundary_cycles:
        bump(component[surface.tail[cycle[0]]], 3)
    found = []
    for root in sorted(counts):
        n_v, n_e, n_f, n_b, vertices = counts[root]
        n_F = sum(1 for v in vertices if v in s.marking.F_plus)
        found.append(Piece(tuple(vertices), n_v - n_e + n_f, n_F, n_b))
    return tuple(found)


@dataclass(frozen=True)
class Quadrangulation:
    """A cut system of s and the total decomposition it produces.

    ``source`` is the refinement of s the arcs live on; ``pieces_surface`` is
    the cut surface and ``gluing`` the reverse gluing τ₀ on it.
    """

    source: sc.SuturedSurface
    pieces_surface: sc.SuturedSurface
    arcs: tuple
    gluing: Gluing
    pieces: tuple

    @property
    def piece_kinds(self):
        return [p.kind for p in self.pieces]


def _genus(piece):
    return (2 - piece.euler - piece.n_boundary) // 2


def _circles(surface):
    circle = {}
    for i, cycle in enumerate(surface.boundary_cycles):
        for h in cycle:
            circle[surface.tail[h]] = i
    return circle


def _separates(surface, walk):
    """Whether cutting along the interior edges of ``walk`` disconnects its component."""
    cut = {surface.edge_of[h] for h in walk}
    component = surface.vertex_components
    root = component[surface.tail[walk[0]]]
    faces = {f for f, face in enumerate(surface.faces) if component[surface.tail[face[0]]] == root}
    start = surface.face_of[walk[0]]
    seen = {start}
    stack = [start]
    while stack:
        f = stack.pop()
        for h in surface.faces[f]:
            g = surface.face_of[surface.twin[h]]
            if g == sc.OUTER or g in seen or surface.edge_of[h] in cut:
                continue
            seen.add(g)
            stack.append(g)
    return seen != faces


def _interior_cycles(surface, interior):
    """Fundamental cycles of the graph spanned by ``interior`` vertices, as closed walks."""
    parent = {}
    for root in sorted(interior):
        if root in parent:
            continue
        parent[root] = None
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for h in sorted(surface.outgoing[v]):
                w = surface.head[h]
                if w in interior and w not in parent:
                    parent[w] = h
                    queue.append(w)
    tree = {surface.edge_of[h] for h in parent.values() if h is not None}

    def down(v):
        walk = []
        while parent[v] is not None:
            walk.append(parent[v])
            v = surface.tail[parent[v]]
        return walk[::-1]

    for h in surface.edges:
        u, w = surface.tail[h], surface.head[h]
        if u not in interior or w not in interior or surface.edge_of[h] in tree:
            continue
        a, b = down(u), down(w)
        k = 0
        while k < min(len(a), len(b)) and a[k] == b[k]:
            k += 1
        yield tuple(a[k:]) + (h,) + tuple(surface.twin[g] for g in reversed(b[k:]))


def _resolved_arcs(s, piece):
    """Arcs ℓ that follow a non-separating interior cycle C from a boundary α⁺
    point back to an α⁻ point on the same circle, C opened at one vertex."""
    surface, marking = s.surface, s.marking
    members = set(piece.vertices)
    interior = frozenset(v for v in members if v not in surface.boundary_vertices)
    circle = _circles(surface)
    for cycle in _interior_cycles(surface, interior):
        if len(cycle) < 2 or _separates(surface, cycle):
            continue
        on = [surface.tail[h] for h in cycle]
        for p in sorted(marking.alpha_plus & members):
            ends = sorted(v for v in marking.alpha_minus & members if circle[v] == circle[p])
            for q in ends:
                for i, w in enumerate(on):
                    first = sc.interior_path(surface, p, w, blocked=frozenset(on))
                    if not first:
                        continue
                    used = frozenset(on) | {surface.head[h] for h in first}
                    last = sc.interior_path(surface, q, on[i - 1], blocked=used)
                    if not last:
                        continue
                    around = (cycle[i:] + cycle[:i])[:-1]
                    arc = first + around + tuple(surface.twin[h] for h in reversed(last))
                    if not _separates(surface, arc):
                        yield arc


def _spoke_arcs(s, piece):
    """Arcs from α⁺ on the piece's first circle to α⁻ on another circle."""
    surface, marking = s.surface, s.marking
    members = set(piece.vertices)
    circle = _circles(surface)
    starts = sorted(marking.alpha_plus & members)
    home = min(circle[v] for v in starts)
    for p in (v for v in starts if circle[v] == home):
        for q in sorted(v for v in marking.alpha_minus & members if circle[v] != home):
            arc = sc.interior_path(surface, p, q, min_length=2)
            if arc:
                yield arc


def _square_arcs(s, piece):
    """Arcs from α⁺ to the α⁻ three sutures further along the circle; each cuts
    off one (D², F(2))."""
    surface, marking = s.surface, s.marking
    members = set(piece.vertices)
    for cycle in surface.boundary_cycles:
        ring = [surface.tail[h] for h in cycle]
        if ring[0] not in members:
            continue
        marks = [marking.mark_of(v) for v in ring]
        n = len(ring)
        for i, v in enumerate(ring):
            if marks[i] is not Mark.ALPHA_PLUS:
                continue
            sutures = 0
            for j in range(1, n):
                mark = marks[(i + j) % n]
                if mark in (Mark.F_PLUS, Mark.F_MINUS):
                    sutures += 1
                elif mark is Mark.ALPHA_MINUS and sutures == 3:
                    arc = sc.interior_path(surface, v, ring[(i + j) % n], min_length=2)
                    if arc:
                        yield arc
                    break


def _next_cut(s, piece):
    if _genus(piece) > 0:
        arcs = _resolved_arcs(s, piece)
    elif piece.n_boundary > 1:
        arcs = _spoke_arcs(s, piece)
    else:
        arcs = _square_arcs(s, piece)
    for arc in arcs:
        try:
            return cut_open(s, [arc])
        except (StructuralError, ConsistencyError) as exc:
            logger.debug("skipping cut arc %s: %s", arc, exc)
    return None


def quadrangulate(s, max_refinements=3, keep_f1=False):
    """Cut s into copies of (D², F(2)) along arcs from α⁺ to α⁻.

    Pieces are reduced one arc at a time: a piece of positive genus is cut
    along an arc that follows a non-separating closed curve, a planar piece
    with several boundary circles along a spoke between two of them, and a
    disk with n(F) ≥ 3 along the arc that cuts off one square. Every cut
    raises the Euler characteristic by one without creating a (D², F(1)), so
    a surface with L = n(F) − χ ends as L squares joined by 2L − n(F) arcs.
    When the complex has no room for the next arc it is refined and the
    construction restarts.

    Raises:
        StructuralError: s has a (D², F(1)) component and ``keep_f1`` is off;
            with ``keep_f1`` those components are carried as atomic pieces.
        ConsistencyError: no arc was found after ``max_refinements`` refinements.
    """
    sc.ensure_valid(s)
    single = [p for p in pieces(s) if p.kind == "F(1)"]
    if single and not keep_f1:
        raise StructuralError(f"{len(single)} (D², F(1)) component(s) admit no quadrangulation")
    source = current = s
    arcs, gamma, gamma_prime = [], [], []
    refinements = 0
    while True:
        pending = [p for p in pieces(current) if not p.terminal]
        if not pending:
            break
        step = _next_cut(current, pending[0])
        if step is None:
            if refinements >= max_refinements:
                raise ConsistencyError(f"no cut arc found for {pending[0].kind}")
            # cut paths do not survive refinement
            source = current = sc.refine(source)
            arcs, gamma, gamma_prime = [], [], []
            refinements += 1
            continue
        arcs.append(step.arcs[0])
        gamma.extend(step.gluing.gamma)
        gamma_prime.extend(step.gluing.gamma_prime)
        current = step.surface
    current = replace(current, designated=(), labels=(), designated_minus=(), labels_minus=())
    gluing = Gluing(current, tuple(gamma), tuple(gamma_prime))
    logger.info("quadrangulated %s into %d pieces with %d arcs", s.name, len(pieces(current)), len(arcs))
    return Quadrangulation(source, current, tuple(arcs), gluing, pieces(current))
