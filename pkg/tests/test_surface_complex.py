import random

import pytest

from sympy import Matrix

from sutured.errors import StructuralError, ValidationError
from sutured.services import dividing_sets as ds
from sutured.services import surface_complex as sc
from sutured.services.exterior_algebra import CoefficientRing, Multivector, induced_map
from sutured.utils import linalg

RINGS = [CoefficientRing.F2, CoefficientRing.INTEGERS]


@pytest.mark.parametrize("N", [1, 2, 3, 4, 5])
def test_standard_disk_is_valid(N):
    disk = sc.standard_disk(N)
    assert sc.validate(disk) == []
    assert disk.n_F == N
    assert disk.euler == 1
    assert disk.L == N - 1
    assert len(disk.designated) == N - 1
    assert disk.labels[:1] == (("b1",) if N > 1 else ())


@pytest.mark.parametrize("ring", RINGS)
@pytest.mark.parametrize("N", [1, 2, 3, 4, 5])
def test_disk_homology_rank_is_L(N, ring):
    disk = sc.standard_disk(N)
    assert sc.relative_homology(disk, ring).rank == N - 1
    assert sc.relative_homology(disk, ring, minus=True).rank == N - 1


def test_standard_annulus(annulus):
    assert sc.validate(annulus) == []
    assert (annulus.n_F, annulus.euler, annulus.L) == (2, 0, 2)
    assert len(annulus.surface.boundary_cycles) == 2
    basis = sc.relative_homology(annulus, CoefficientRing.INTEGERS)
    assert basis.rank == 2
    assert basis.labels == ("b1", "b2")


@pytest.mark.parametrize("seed", range(12))
def test_rank_law_on_random_surfaces(seed):
    s = sc.random_surface(random.Random(seed))
    assert sc.validate(s) == []
    for ring in RINGS:
        assert sc.relative_homology(s, ring).rank == s.n_F - s.euler


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(12, 200))
def test_rank_law_on_many_random_surfaces(seed):
    s = sc.random_surface(random.Random(seed))
    for ring in RINGS:
        assert sc.relative_homology(s, ring).rank == s.L


def test_swapped_signs_break_the_mark_pattern(disk2):
    marking = disk2.marking
    swapped = sc.SuturedMarking(marking.F_minus, marking.F_plus, marking.alpha_plus, marking.alpha_minus)
    broken = sc.SuturedSurface(disk2.surface, swapped)
    codes = {v.code for v in sc.validate(broken)}
    assert "mark-pattern" in codes
    with pytest.raises(ValidationError) as info:
        sc.ensure_valid(broken)
    assert info.value.violations


def test_missing_alpha_is_a_count_violation(disk2):
    marking = disk2.marking
    short = sc.SuturedMarking(marking.F_plus, marking.F_minus, marking.alpha_plus - {1}, marking.alpha_minus)
    codes = {v.code for v in sc.validate(sc.SuturedSurface(disk2.surface, short))}
    assert codes == {"mark-count"}


def test_mark_on_interior_vertex_is_reported(disk2):
    refined = sc.refine(disk2)
    center = refined.surface.n_vertices - 1
    marking = refined.marking
    moved = sc.SuturedMarking(marking.F_plus, marking.F_minus, marking.alpha_plus | {center}, marking.alpha_minus)
    found = sc.validate(sc.SuturedSurface(refined.surface, moved))
    assert any(v.code == "mark-interior" and v.witness == center for v in found)


def test_broken_twin_is_structural(disk2):
    surface = disk2.surface
    twin = list(surface.twin)
    twin[0] = 0
    bad = sc.CombinatorialSurface.build(twin, surface.head, surface.faces, surface.n_vertices)
    assert any(v.code == "twin" for v in bad.structural_violations())


def test_violation_to_dict():
    v = sc.Violation("closed", "component has no boundary", 3)
    assert v.to_dict() == {"code": "closed", "message": "component has no boundary", "witness": 3}


def test_disjoint_union_adds_L(disk2, disk3):
    union = sc.disjoint_union(disk2, disk3)
    assert sc.validate(union) == []
    assert union.L == disk2.L + disk3.L
    assert union.surface.n_components == 2
    assert union.labels == disk2.labels + disk3.labels


def test_identity_relabel_is_a_no_op(disk3):
    surface = disk3.surface
    same = sc.relabel(disk3, list(range(surface.n_vertices)), list(range(surface.n_halfedges)))
    assert same == disk3


def test_relabel_rejects_non_permutations(disk2):
    with pytest.raises(StructuralError):
        sc.relabel(disk2, [0] * disk2.surface.n_vertices, list(range(disk2.surface.n_halfedges)))


@pytest.mark.parametrize("ring", RINGS)
def test_refinement_keeps_homology(disk3, annulus, ring):
    for s in (disk3, annulus):
        refined = sc.refine(s)
        assert sc.validate(refined) == []
        assert refined.marking == s.marking
        assert refined.surface.euler_characteristic == s.euler
        assert sc.relative_homology(refined, ring).rank == s.L


def test_interior_path(disk3):
    assert sc.interior_path(disk3.surface, 1, 7) is None
    refined = sc.refine(disk3)
    path = sc.interior_path(refined.surface, 1, 7, min_length=2)
    assert len(path) == 2
    assert refined.surface.tail[path[0]] == 1
    assert refined.surface.head[path[-1]] == 7


def test_intersection_pairing_is_perfect_on_the_disk():
    disk = sc.standard_disk(4)
    ring = CoefficientRing.F2
    matrix = sc.intersection_matrix(disk, sc.relative_homology(disk, ring),
                                    sc.relative_homology(disk, ring, minus=True))
    assert len(matrix) == 3
    # β₁ meets β₂ but not β₄
    assert matrix[0][0] == 1
    assert matrix[0][1] == 0


def test_random_surfaces_carry_at_most_eight_sutures():
    for seed in range(200):
        s = sc.random_surface(random.Random(seed))
        assert 1 <= s.n_F <= 8, seed


def _rank_by_elimination(s):
    """rank H₁(Σ, α⁺; Q) from the boundary matrices."""
    surface = s.surface
    free = [v for v in range(surface.n_vertices) if v not in s.marking.alpha_plus]
    row = {v: i for i, v in enumerate(free)}
    d1 = [[0] * surface.n_edges for _ in free]
    for e, h in enumerate(surface.edges):
        if surface.head[h] in row:
            d1[row[surface.head[h]]][e] += 1
        if surface.tail[h] in row:
            d1[row[surface.tail[h]]][e] -= 1
    d2 = [[surface.face_chain(f).get(e, 0) for f in range(surface.n_faces)] for e in range(surface.n_edges)]
    rank_d1 = Matrix(d1).rank() if free else 0
    return surface.n_edges - rank_d1 - Matrix(d2).rank()


def test_one_holed_torus_matches_elimination(one_holed_torus):
    s = one_holed_torus
    assert sc.validate(s) == []
    assert (s.euler, s.n_F, s.L) == (-1, 1, 2)
    assert _rank_by_elimination(s) == 2
    for ring in RINGS:
        assert sc.relative_homology(s, ring).rank == 2


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(6))
def test_random_surfaces_match_elimination(seed):
    s = sc.random_surface(random.Random(seed))
    assert _rank_by_elimination(s) == sc.relative_homology(s, CoefficientRing.INTEGERS).rank


def test_closed_torus_is_reported():
    torus = sc.SuturedSurface(sc.polygon_surface(1, []), sc.SuturedMarking())
    assert torus.surface.euler_characteristic == 0
    assert "closed" in {v.code for v in sc.validate(torus)}


def test_empty_polygon_is_rejected():
    with pytest.raises(StructuralError):
        sc.polygon_surface(0, [])


def _add(*chains):
    total = {}
    for chain in chains:
        for e, c in chain.items():
            total[e] = total.get(e, 0) + c
    return {e: c for e, c in total.items() if c}


def test_express_ignores_face_boundaries(disk3):
    ring = CoefficientRing.INTEGERS
    basis = sc.relative_homology(disk3, ring)
    surface = disk3.surface
    b1, b3 = (surface.walk_to_chain(w) for w in disk3.designated)
    assert sc.express(_add(b1, b3, surface.face_chain(0)), basis) == Multivector.from_vector([1, 1], ring)
    assert sc.express(_add(b3, surface.face_chain(0)), basis) == Multivector.from_vector([0, 1], ring)


def test_express_of_a_face_boundary_is_zero(disk3, annulus):
    for s in (disk3, annulus):
        basis = sc.relative_homology(s, CoefficientRing.INTEGERS)
        for f in range(s.surface.n_faces):
            assert sc.express(s.surface.face_chain(f), basis) == Multivector.zero(s.L)


def test_express_needs_boundary_on_alpha_plus(disk3):
    basis = sc.relative_homology(disk3, CoefficientRing.INTEGERS)
    # halfedge 0 runs from F₁ to α₁
    with pytest.raises(StructuralError):
        sc.express(disk3.surface.walk_to_chain((0,)), basis)


@pytest.mark.parametrize("name", ["disk3", "annulus"])
def test_refinement_changes_coordinates_invertibly(name, request):
    s = request.getfixturevalue(name)
    ring = CoefficientRing.INTEGERS
    coarse = sc.homology_basis(s.surface, s.marking.alpha_plus, ring)
    walks = coarse.walks + s.designated
    fine, moved, _ = sc.refine_complex(s.surface, walks)
    fine_basis = sc.homology_basis(fine, s.marking.alpha_plus, ring, verify=False)
    r = coarse.rank
    change = linalg.columns_to_rows([fine_basis.coordinates(fine.walk_to_chain(w)) for w in moved[:r]], r)
    assert linalg.determinant(change, ring) in (1, -1)
    for before, after in zip(walks, moved):
        x = sc.express(s.surface.walk_to_chain(before), coarse)
        y = sc.express(fine.walk_to_chain(after), fine_basis)
        assert induced_map(change, x) == y


@pytest.mark.parametrize("name", ["disk3", "annulus"])
def test_subsurface_of_every_face_is_the_surface(name, request):
    s = request.getfixturevalue(name)
    sub = sc.subsurface(s, range(s.surface.n_faces))
    assert sub.surface == s.surface
    assert sub.marking == s.marking
    assert sub.euler == s.euler


def test_subsurface_of_one_face_is_a_polygon():
    k = ds.chord_to_dividing_set(ds.ChordDiagram.parse("1-2,3-4"))
    face = k.surface.faces[0]
    sub = sc.subsurface(k.host, [0])
    assert sub.euler == 1
    assert sub.surface.n_faces == 1
    assert [len(c) for c in sub.surface.boundary_cycles] == [len(face)]
    assert sub.to_host_walk(sub.surface.faces[0]) == tuple(face)


def test_subsurface_of_positive_regions(six_chord_diagram):
    k = ds.chord_to_dividing_set(six_chord_diagram)
    sub = sc.subsurface(k.host, ds.regions(k).r_plus)
    assert sub.surface.n_components == 3
    assert sub.euler == 3
    assert k.host.n_F - sub.euler == 3


def test_subsurface_needs_faces(disk2):
    with pytest.raises(StructuralError):
        sc.subsurface(disk2, [])
