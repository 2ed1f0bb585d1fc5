import pytest

from sutured.errors import MalformedInputError, StructuralError
from sutured.services import dividing_sets as ds
from sutured.services import surface_complex as sc
from sutured.services.contact import contact_element
from sutured.services.exterior_algebra import CoefficientRing, Multivector

CATALAN = {1: 1, 2: 2, 3: 5, 4: 14, 5: 42, 6: 132, 7: 429, 8: 1430}


@pytest.mark.parametrize("N", [1, 2, 3, 4, 5, 6])
def test_enumeration_matches_catalan(N):
    diagrams = ds.enumerate_chord_diagrams(N)
    assert len(diagrams) == CATALAN[N] == ds.catalan(N)
    assert len(set(diagrams)) == len(diagrams)
    assert all(not d.violations() for d in diagrams)


@pytest.mark.slow
@pytest.mark.parametrize("N", [7, 8])
def test_enumeration_matches_catalan_large(N):
    assert len(ds.enumerate_chord_diagrams(N)) == CATALAN[N]


def test_parse_normalises_pairs():
    cd = ds.ChordDiagram.parse("6-5, 4-1,3-2")
    assert cd.to_text() == "1-4,2-3,5-6"
    assert cd.N == 3
    assert cd.partner(4) == 1


@pytest.mark.parametrize("text", ["1-3,2-4", "1-4,2-5,3-6", "1-2,2-3", "1-2,3", "a-b", "1-2,3-8"])
def test_parse_rejects_bad_diagrams(text):
    with pytest.raises(MalformedInputError):
        ds.ChordDiagram.parse(text)


def test_rotation():
    cd = ds.ChordDiagram.parse("1-2,3-4")
    assert cd.rotated(1) == ds.ChordDiagram.parse("1-4,2-3")
    assert cd.rotated(4) == cd


@pytest.mark.parametrize("N", [1, 2, 3, 4])
def test_chord_diagrams_realise_valid_dividing_sets(N):
    for cd in ds.enumerate_chord_diagrams(N):
        k = ds.chord_to_dividing_set(cd)
        assert ds.validate_dividing_set(k) == []
        assert ds.is_non_isolating(k)
        assert k.name == cd.to_text()


def test_regions_of_a_six_chord_diagram(six_chord_diagram):
    decomposition = ds.regions(ds.chord_to_dividing_set(six_chord_diagram))
    plus = [r for r in decomposition.regions if r.sign == ds.PLUS]
    assert len(plus) == 3
    assert decomposition.L_K == 3
    assert decomposition.I_plus == decomposition.I_minus == 0


def test_flipped_signs_are_rejected():
    k = ds.chord_to_dividing_set(ds.ChordDiagram.parse("1-2,3-4"))
    flipped = ds.DividingSet(k.host, k.curve_halfedges, tuple(-s for s in k.face_signs))
    codes = {v.code for v in ds.validate_dividing_set(flipped)}
    assert "orientation" in codes
    assert "arc-sign" in codes


def test_curve_must_end_on_sutures():
    k = ds.chord_to_dividing_set(ds.ChordDiagram.parse("1-2,3-4"))
    dropped = ds.DividingSet(k.host, frozenset(sorted(k.curve_halfedges)[1:]), k.face_signs)
    assert ds.validate_dividing_set(dropped)


def test_closed_circle_isolates_a_region():
    k = ds.chord_to_dividing_set(ds.ChordDiagram.parse("1-4,2-3"))
    circled = ds.with_closed_circle(k)
    assert ds.validate_dividing_set(circled) == []
    assert not ds.is_non_isolating(circled)
    decomposition = ds.regions(circled)
    assert decomposition.I_plus + decomposition.I_minus == 1


def test_annulus_sets_are_valid_and_non_isolating(annulus_sets):
    assert set(annulus_sets) == set(ds.ANNULUS_SETS)
    for name, k in annulus_sets.items():
        assert ds.validate_dividing_set(k) == [], name
        assert ds.is_non_isolating(k), name


def test_annulus_grading(annulus_sets):
    grades = {name: ds.regions(k).L_K for name, k in annulus_sets.items()}
    assert grades == {"K_plus": 0, "K_minus": 2, "K_0": 1, "K_1": 1, "L_0": 1, "L_1": 1}


def test_unknown_annulus_set():
    with pytest.raises(StructuralError):
        ds.annulus_dividing_set("K_2")


def test_routing_suture_pairs_on_a_refined_disk():
    host = sc.refine(sc.refine(sc.standard_disk(2)))
    k = ds.from_suture_pairs(host, [(0, 2), (4, 6)])
    assert ds.validate_dividing_set(k) == []
    value = contact_element(k, ring=CoefficientRing.F2).value
    assert value == Multivector.one(1, CoefficientRing.F2)


def test_routing_needs_room(disk2):
    with pytest.raises(StructuralError):
        ds.from_suture_pairs(disk2, [(0, 2), (4, 6)])


@pytest.mark.parametrize("extra", [10 ** 4, -1])
def test_out_of_range_curve_halfedges_are_reported(extra):
    k = ds.chord_to_dividing_set(ds.ChordDiagram.parse("1-2,3-4"))
    bad = ds.DividingSet(k.host, k.curve_halfedges | {extra}, k.face_signs)
    found = ds.validate_dividing_set(bad)
    assert [(v.code, v.witness) for v in found] == [("curve", extra)]
