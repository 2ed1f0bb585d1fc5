import pytest

from sutured.errors import MalformedInputError
from sutured.services import dividing_sets as ds
from sutured.services import gluing as gl
from sutured.services import surface_complex as sc
from sutured.services.exterior_algebra import CoefficientRing, Multivector
from sutured.utils import serialization as codec


def test_surface_survives_json(annulus):
    data = codec.load_json(codec.dump_json(codec.surface_to_dict(annulus)))
    assert codec.surface_from_dict(data) == annulus


def test_dividing_set_survives_json():
    k = ds.chord_to_dividing_set(ds.ChordDiagram.parse("1-6,2-3,4-5"))
    data = codec.load_json(codec.dump_json(codec.dividing_set_to_dict(k)))
    assert data["dividing_set"] == "1-6,2-3,4-5"
    assert set(data["signs"].values()) == {"+", "-"}
    assert codec.dividing_set_from_dict(data) == k


def test_gluing_format_uses_a_flat_path_for_one_pair():
    g = gl.disk_to_annulus_gluing(4)
    data = codec.gluing_to_dict(g)
    assert data["gamma"] == [6, 8, 10, 12]
    assert codec.gluing_from_dict(data, g.host) == g


def test_glued_record(rectangle):
    data = codec.glued_to_dict(rectangle, [{"source": "1", "image": "1"}])
    assert data["swallowed"] == list(rectangle.swallowed)
    assert data["morphism"] == [{"source": "1", "image": "1"}]
    assert codec.surface_from_dict(data["surface"]) == rectangle.result


def test_multivector_record():
    x = Multivector.basis(2, (0, 1), CoefficientRing.F2)
    data = codec.multivector_to_dict(x, ["b1", "b2"])
    assert data == {"text": "1·[0,1]", "terms": [[[0, 1], 1]], "rank": 2, "ring": "f2", "rendered": "b1^b2"}


@pytest.mark.parametrize("data", [
    None,
    {"vertices": [0], "halfedges": []},
    {"vertices": [0, 2], "halfedges": [], "faces": [], "marks": {}},
    {"vertices": [0, 1], "halfedges": [{"id": 0, "twin": "x", "head": 1}], "faces": [],
     "marks": {"F_plus": [], "F_minus": [], "alpha_plus": [], "alpha_minus": []}},
])
def test_malformed_surfaces(data):
    with pytest.raises(MalformedInputError):
        codec.surface_from_dict(data)


def test_dividing_set_needs_every_face_signed(disk2):
    data = codec.surface_to_dict(disk2)
    data.update({"K": [], "signs": {}})
    with pytest.raises(MalformedInputError):
        codec.dividing_set_from_dict(data)


def test_invalid_json():
    with pytest.raises(MalformedInputError):
        codec.load_json("{not json")


def test_parsed_surface_is_validated_separately(disk2):
    data = codec.surface_to_dict(disk2)
    data["marks"]["F_plus"] = data["marks"]["F_plus"][:1]
    parsed = codec.surface_from_dict(data)
    assert sc.validate(parsed)
