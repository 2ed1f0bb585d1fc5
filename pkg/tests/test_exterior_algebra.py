import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sutured.errors import MalformedInputError, StructuralError
from sutured.services.exterior_algebra import (
    CoefficientRing,
    DualMultivector,
    Multivector,
    embed,
    from_text,
    grade_project,
    induced_map,
    interior,
    merge_sign,
    pair,
    render,
    to_dual,
    to_text,
)

RANK = 4
F2 = CoefficientRing.F2


def multivectors(rank=RANK, ring=CoefficientRing.INTEGERS):
    terms = st.dictionaries(st.integers(0, (1 << rank) - 1), st.integers(-3, 3), max_size=5)
    return terms.map(lambda t: Multivector(rank, t, ring))


@given(multivectors(), multivectors(), multivectors())
@settings(max_examples=60)
def test_wedge_is_associative(a, b, c):
    assert (a ^ b) ^ c == a ^ (b ^ c)


@given(multivectors(), multivectors(), multivectors())
@settings(max_examples=60)
def test_wedge_distributes_over_sum(a, b, c):
    assert a ^ (b + c) == (a ^ b) + (a ^ c)


@given(st.integers(0, RANK - 1), st.integers(0, RANK - 1))
def test_degree_one_generators_anticommute(i, j):
    ei, ej = Multivector.basis(RANK, (i,)), Multivector.basis(RANK, (j,))
    assert ei ^ ej == -(ej ^ ei)


@given(st.lists(st.integers(-5, 5), min_size=RANK, max_size=RANK))
def test_degree_one_square_vanishes(coords):
    v = Multivector.from_vector(coords)
    assert (v ^ v).is_zero()


@given(multivectors(), multivectors(), multivectors())
@settings(max_examples=60)
def test_interior_is_adjoint_to_wedge(e, f, g):
    # <ι_E F | G> = <F | E ∧ G>
    F = to_dual(f)
    assert pair(interior(e, F), g) == pair(F, e ^ g)


def test_interior_on_basis_elements():
    e01 = Multivector.basis(3, (0, 1))
    assert interior(DualMultivector.basis(3, (0,)), e01) == Multivector.basis(3, (1,))
    assert interior(DualMultivector.basis(3, (1,)), e01) == -Multivector.basis(3, (0,))
    assert interior(DualMultivector.basis(3, (2,)), e01).is_zero()


def test_merge_sign():
    assert merge_sign(0b001, 0b010) == 1
    assert merge_sign(0b010, 0b001) == -1
    assert merge_sign(0b011, 0b011) == 0


def test_pair_of_dual_basis_is_one():
    x = Multivector.basis(3, (0, 2))
    assert pair(to_dual(x), x) == 1
    assert pair(to_dual(x), Multivector.basis(3, (1, 2))) == 0


def test_pair_rejects_two_primal_arguments():
    x = Multivector.one(2)
    with pytest.raises(StructuralError):
        pair(x, x)


def test_f2_reduces_coefficients():
    assert Multivector(2, {0b01: 2}, F2).is_zero()
    x = Multivector.basis(2, (0,), F2)
    assert x + x == Multivector.zero(2, F2)
    assert -x == x


def test_mismatched_rank_raises():
    with pytest.raises(StructuralError):
        Multivector.one(2) ^ Multivector.one(3)


def test_mismatched_ring_raises():
    with pytest.raises(StructuralError):
        Multivector.one(2) + Multivector.one(2, F2)


def test_repeated_index_raises():
    with pytest.raises(StructuralError):
        Multivector.basis(3, (1, 1))


def test_induced_map_scales_top_by_determinant():
    top = Multivector.top(2)
    assert induced_map([[2, 1], [1, 1]], top) == top
    assert induced_map([[0, 1], [1, 0]], top) == -top
    assert induced_map([[2, 0], [0, 3]], top) == top * 6


def test_induced_map_changes_rank():
    # β1 ↦ β1 + β2
    image = induced_map([[1], [1]], Multivector.basis(1, (0,)))
    assert image == Multivector.from_vector([1, 1])


def test_grade_projection_and_degree():
    x = Multivector.one(3) + Multivector.basis(3, (0, 1)) + Multivector.basis(3, (2,))
    assert grade_project(x, 2) == Multivector.basis(3, (0, 1))
    assert x.degree() is None
    assert grade_project(x, 1).degree() == 1


def test_embed_shifts_generators():
    assert embed(Multivector.basis(2, (1,)), 5, 2) == Multivector.basis(5, (3,))
    with pytest.raises(StructuralError):
        embed(Multivector.one(3), 4, 2)


def test_equals_up_to_sign():
    x = Multivector.basis(3, (0, 1)) * 2
    assert x.equals_up_to_sign(-x)
    assert not x.equals_up_to_sign(Multivector.basis(3, (0, 2)))


def test_text_form_round_trip():
    x = Multivector.basis(3, (0, 2), coefficient=3) - Multivector.basis(3, (1,))
    assert to_text(x) == "-1·[1] + 3·[0,2]"
    assert from_text(to_text(x), 3) == x
    assert from_text("0", 3) == Multivector.zero(3)
    assert from_text("1", 3, dual=True) == DualMultivector.one(3)


def test_from_text_rejects_garbage():
    with pytest.raises(MalformedInputError):
        from_text("two·[0]", 2)


def test_render_with_labels():
    x = Multivector.basis(3, (0, 2)) + Multivector.basis(3, (1,))
    assert render(x, ["b1", "b3", "b5"]) == "b3 + b1^b5"
    assert render(-Multivector.one(2), ["b1", "b3"]) == "-1"
    assert render(Multivector.zero(1), ["b1"]) == "0"


def test_ring_parse_accepts_aliases():
    assert CoefficientRing.parse("Z") is CoefficientRing.INTEGERS
    assert CoefficientRing.parse("gf2") is F2
    with pytest.raises(MalformedInputError):
        CoefficientRing.parse("q")
