import pytest

from sutured.errors import StructuralError
from sutured.services import contact
from sutured.services import dividing_sets as ds
from sutured.services import surface_complex as sc
from sutured.services.exterior_algebra import CoefficientRing, Multivector

F2 = CoefficientRing.F2
Z = CoefficientRing.INTEGERS


def chord(text):
    return ds.chord_to_dividing_set(ds.ChordDiagram.parse(text))


def test_two_pair_disk():
    assert contact.contact_element(chord("1-2,3-4"), ring=F2).value == Multivector.one(1, F2)
    assert contact.contact_element(chord("1-4,2-3"), ring=F2).value == Multivector.basis(1, (0,), F2)


def test_six_chord_example(six_chord_diagram):
    # b1, b3, b5, b7, b9 are generators 0 .. 4
    expected = Multivector(5, {(1, 2, 3): 1, (1, 2, 4): 1}, Z)
    element = contact.contact_element(ds.chord_to_dividing_set(six_chord_diagram), ring=Z)
    assert element.value.equals_up_to_sign(expected)
    assert element.grade == 3
    f2 = contact.contact_element(ds.chord_to_dividing_set(six_chord_diagram), ring=F2)
    assert f2.value == expected.over(F2)
    assert f2.render() == "b3^b5^b7 + b3^b5^b9"


def test_annulus_table(annulus_sets):
    b1 = Multivector.basis(2, (0,), F2)
    b2 = Multivector.basis(2, (1,), F2)
    expected = {
        "K_plus": Multivector.one(2, F2),
        "K_minus": Multivector.top(2, F2),
        "K_0": b2,
        "K_1": b2,
        "L_0": b1,
        "L_1": b1 + b2,
    }
    values = {name: contact.contact_element(k, ring=F2).value for name, k in annulus_sets.items()}
    assert values == expected


def test_annulus_table_over_integers(annulus_sets):
    b1 = Multivector.basis(2, (0,))
    b2 = Multivector.basis(2, (1,))
    assert contact.contact_element(annulus_sets["K_minus"], ring=Z).value.equals_up_to_sign(b1 ^ b2)
    assert contact.contact_element(annulus_sets["L_1"], ring=Z).value.equals_up_to_sign(b1 + b2)


def test_isolating_dividing_set_has_zero_contact_element(annulus_sets):
    for k in (chord("1-4,2-3"), annulus_sets["K_plus"]):
        circled = ds.with_closed_circle(k)
        assert contact.contact_element(circled, ring=F2).is_zero()
        assert contact.contact_element(circled, ring=Z).is_zero()


def test_contact_element_is_homogeneous_of_degree_L_K():
    for cd in ds.enumerate_chord_diagrams(4):
        k = ds.chord_to_dividing_set(cd)
        element = contact.contact_element(k, ring=Z)
        assert element.value.degree() == ds.regions(k).L_K == element.grade
        assert element.value.is_primitive()


def test_orientation_flips_the_sign():
    k = chord("1-4,2-3")
    forward = contact.contact_element(k, contact.HomologyOrientation.standard(1), ring=Z).value
    backward = contact.contact_element(k, contact.HomologyOrientation.standard(1, -1), ring=Z).value
    assert backward == -forward
    assert contact.contact_subset(k).elements == tuple(sorted((forward, backward), key=lambda m: m.items()))


def test_orientation_of_wrong_rank_is_rejected():
    with pytest.raises(StructuralError):
        contact.contact_element(chord("1-4,2-3"), contact.HomologyOrientation.standard(3), ring=Z)


@pytest.mark.parametrize("generator", [
    lambda r: Multivector.top(r) * 2,
    lambda r: Multivector.top(r) + Multivector.one(r),
    lambda r: Multivector.basis(r, (0,)),
])
def test_orientation_must_be_a_unit_top_wedge(six_chord_diagram, generator):
    k = ds.chord_to_dividing_set(six_chord_diagram)
    rank = ds.regions(k).L_K
    with pytest.raises(StructuralError):
        contact.contact_element(k, contact.HomologyOrientation(generator(rank)), ring=Z)


def test_negated_orientation_negates_the_six_chord_element(six_chord_diagram):
    k = ds.chord_to_dividing_set(six_chord_diagram)
    orientation = contact.HomologyOrientation.standard(ds.regions(k).L_K)
    forward = contact.contact_element(k, orientation, ring=Z).value
    assert contact.contact_element(k, -orientation, ring=Z).value == -forward
    assert not forward.is_zero()


def test_intersection_pairing_is_invertible():
    for s in (sc.standard_disk(4), sc.standard_annulus()):
        matrix = contact.dual_basis(s, F2)
        assert len(matrix) == s.L


@pytest.mark.parametrize("N", [2, 3, 4])
def test_duality_on_disks(N):
    for cd in ds.enumerate_chord_diagrams(N):
        assert contact.duality_check(chord(cd.to_text()), F2), cd.to_text()


@pytest.mark.slow
def test_duality_on_disks_of_five_pairs():
    for cd in ds.enumerate_chord_diagrams(5):
        assert contact.duality_check(ds.chord_to_dividing_set(cd), F2), cd.to_text()


def test_duality_on_the_annulus(annulus_sets):
    for name, k in annulus_sets.items():
        assert contact.duality_check(k, F2), name


def test_negative_contact_element_of_k_minus(annulus_sets):
    c_minus = contact.negative_contact_element(annulus_sets["K_minus"], ring=F2)
    assert c_minus.degree() == 0
    assert not c_minus.is_zero()


@pytest.mark.parametrize("N", [2, 3, 4])
def test_region_ranks_are_complementary(N):
    for cd in ds.enumerate_chord_diagrams(N):
        assert contact.rank_complement(ds.chord_to_dividing_set(cd))


def test_rank_complement_on_the_annulus(annulus_sets):
    assert all(contact.rank_complement(k) for k in annulus_sets.values())
