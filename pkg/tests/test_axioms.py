import random

import pytest

from sutured.errors import StructuralError
from sutured.services import axioms
from sutured.services import dividing_sets as ds
from sutured.services import gluing as gl
from sutured.services import surface_complex as sc
from sutured.services.exterior_algebra import CoefficientRing

F2 = CoefficientRing.F2
Z = CoefficientRing.INTEGERS


def chord(text):
    return ds.chord_to_dividing_set(ds.ChordDiagram.parse(text))


@pytest.mark.parametrize("N,total", [(1, 1), (3, 4), (6, 32)])
def test_grading_of_disks(N, total):
    report = axioms.check_grading(sc.standard_disk(N))
    assert report.verdict
    assert report.axiom == 1
    assert sum(report.details["grading"].values()) == total


def test_grading_of_the_annulus(annulus):
    report = axioms.check_grading(annulus)
    assert report.verdict
    assert report.details["grading"] == {"-2": 1, "0": 2, "2": 1}


@pytest.mark.parametrize("seed", range(5))
def test_grading_of_random_surfaces(seed):
    assert axioms.check_grading(sc.random_surface(random.Random(seed)), Z).verdict


@pytest.mark.parametrize("ring", [F2, Z])
def test_disjoint_union(ring):
    pairs = [("1-2,3-4", "1-4,2-3"), ("1-4,2-3", "1-6,2-5,3-4"), ("1-2", "1-2,3-6,4-5")]
    for first, second in pairs:
        report = axioms.check_disjoint_union(chord(first), chord(second), ring)
        assert report.verdict, report.details


def test_disjoint_union_with_an_isolating_summand():
    circled = ds.with_closed_circle(chord("1-2,3-4"))
    report = axioms.check_disjoint_union(circled, chord("1-4,2-3"))
    assert report.verdict
    assert report.details["expected"] == "0"


def test_trivial_closed_circle(annulus_sets):
    for k in (chord("1-4,2-3"), annulus_sets["K_plus"], annulus_sets["L_1"]):
        report = axioms.check_trivial_closed(k)
        assert report.verdict, k.name
        assert report.witness is None


def test_gluing_axiom_on_a_small_corpus():
    corpus = axioms.gluing_corpus(seed=1, max_n=4, size=20)
    assert len(corpus) == 20
    report = axioms.check_gluing_axiom(corpus, F2, seed=1)
    assert report.verdict
    assert report.details["checked"] == 20


def test_relabelling_a_disk_with_a_dividing_set():
    k = chord("1-2,3-6,4-5")
    vertex_perm, halfedge_perm = axioms.random_relabeling(k.host, random.Random(7))
    report = axioms.check_relabel_invariance(k.host, vertex_perm, halfedge_perm, [k])
    assert report.verdict
    assert report.axiom == 5


@pytest.mark.parametrize("ring", [F2, Z])
@pytest.mark.parametrize("seed", [3, 11])
def test_relabelling_a_gluing(ring, seed):
    k = chord("1-8,2-3,4-7,5-6")
    g = gl.disk_to_annulus_gluing(4, host=k.host)
    vertex_perm, halfedge_perm = axioms.random_relabeling(k.host, random.Random(seed))
    report = axioms.check_relabel_invariance(k.host, vertex_perm, halfedge_perm, [k], [g], ring)
    assert report.verdict
    assert report.details == {"dividing_sets": 1, "gluings": 1}


def _annulus_reflection(annulus):
    """Swap the boundary circles: (i, j) -> (last ring - i, 4 - j)."""
    surface = annulus.surface
    sectors = 8
    last = surface.n_vertices // sectors - 1
    vertex_perm = [(last - v // sectors) * sectors + (4 - v % sectors) % sectors
                   for v in range(surface.n_vertices)]
    by_ends = {(surface.tail[h], surface.head[h]): h for h in range(surface.n_halfedges)}
    halfedge_perm = [by_ends[vertex_perm[surface.tail[h]], vertex_perm[surface.head[h]]]
                     for h in range(surface.n_halfedges)]
    return vertex_perm, halfedge_perm


def test_annulus_reflection_keeps_the_marking(annulus):
    vertex_perm, halfedge_perm = _annulus_reflection(annulus)
    moved = sc.relabel(annulus, vertex_perm, halfedge_perm)
    assert moved.marking == annulus.marking
    assert sc.validate(moved) == []


@pytest.mark.parametrize("ring", [F2, Z])
def test_annulus_reflection_carries_contact_elements(annulus, annulus_sets, ring):
    vertex_perm, halfedge_perm = _annulus_reflection(annulus)
    report = axioms.check_relabel_invariance(annulus, vertex_perm, halfedge_perm,
                                             list(annulus_sets.values()), ring=ring)
    assert report.verdict, report.witness
    assert report.details["dividing_sets"] == 6


def test_relabelling_needs_dividing_sets_on_the_surface(disk3):
    k = chord("1-2,3-6,4-5")
    n_v, n_h = disk3.surface.n_vertices, disk3.surface.n_halfedges
    with pytest.raises(StructuralError):
        axioms.check_relabel_invariance(disk3, list(range(n_v)), list(range(n_h)), [k])


@pytest.mark.parametrize("N", [2, 3, 4, 5])
def test_disk_rotation(N):
    assert axioms.check_disk_rotation(N).verdict
    assert axioms.check_disk_rotation(N, Z).verdict


def test_rotation_step_must_be_even():
    with pytest.raises(StructuralError):
        axioms.disk_rotation_matrix(3, 1)


@pytest.mark.parametrize("N", [2, 3])
def test_quadrangulation_gives_a_basis_on_disks(N):
    report = axioms.check_basis_of_contact_elements(sc.standard_disk(N))
    assert report.verdict, report.details
    assert report.details["elements"] == 2 ** (N - 1)


def test_quadrangulation_gives_a_basis_on_the_annulus(annulus):
    report = axioms.check_basis_of_contact_elements(annulus)
    assert report.verdict, report.details
    assert report.details["rank"] == 4


def test_basis_check_excludes_one_pair_disks():
    with pytest.raises(StructuralError):
        axioms.check_basis_of_contact_elements(sc.standard_disk(1))


def test_uniqueness_hypotheses():
    report = axioms.check_uniqueness_hypotheses()
    assert report.verdict, report.witness
    assert report.axiom is None


@pytest.mark.parametrize("N", [3, 4, 5])
def test_excess_reduction(N):
    for cd in ds.enumerate_chord_diagrams(N):
        report = axioms.check_excess_reduction(cd)
        assert report.verdict, report.witness


def test_report_serialises_witness_only_on_failure():
    ok = axioms.AxiomReport("grading", 1, "disk-2", True)
    assert "witness" not in ok.to_dict()
    failed = axioms.AxiomReport("grading", 1, "disk-2", False, {"ring": "f2"}, seed=4)
    assert failed.to_dict()["witness"] == {"ring": "f2"}
    assert failed.to_dict()["seed"] == 4


@pytest.mark.slow
def test_run_all_passes():
    reports = axioms.run_all(seed=0, max_n=4, corpus_size=30)
    assert reports
    assert all(r.seed == 0 for r in reports)
    assert [r.to_dict() for r in reports if not r.verdict] == []


def test_relabelling_a_wide_gluing_of_a_refined_disk():
    k = chord("1-2,3-12,4-5,6-7,8-11,9-10")
    g = gl.disk_to_annulus_gluing(6, width=2, host=k.host)
    vertex_perm, halfedge_perm = axioms.random_relabeling(k.host, random.Random(5))
    report = axioms.check_relabel_invariance(k.host, vertex_perm, halfedge_perm, [k], [g])
    assert report.verdict, report.witness


@pytest.mark.slow
@pytest.mark.parametrize("ring", [F2, Z])
def test_gluing_axiom_on_the_full_corpus(ring):
    corpus = axioms.gluing_corpus(seed=0, max_n=5, size=200)
    assert len(corpus) == 200
    report = axioms.check_gluing_axiom(corpus, ring, seed=0)
    assert report.verdict, report.witness
    assert report.details["checked"] == 200


@pytest.mark.slow
def test_run_all_at_full_size():
    reports = axioms.run_all(seed=0, max_n=5, corpus_size=200)
    assert [r.to_dict() for r in reports if not r.verdict] == []
    relabels = [r for r in reports if r.check == "relabel"]
    assert len(relabels) == 3
    assert all(r.details["gluings"] == 1 for r in relabels)
