"""
JSON formats for surfaces, dividing sets, gluings and multivectors.

Surface:
    {"vertices": [0, 1, ...],
     "halfedges": [{"id": 0, "twin": 1, "head": 3}, ...],
     "faces": [[0, 2, 4], ...],
     "marks": {"F_plus": [...], "F_minus": [...], "alpha_plus": [...], "alpha_minus": [...]}}

A dividing set adds {"K": [halfedge ids], "signs": {"0": "+", "1": "-", ...}};
a gluing is {"gamma": [...], "gamma_prime": [...], "vertex_map": {"3": 7}},
where gamma and gamma_prime are either one path or a list of paths.
"""

import json

from sutured.errors import MalformedInputError
from sutured.services import dividing_sets as ds
from sutured.services import surface_complex as sc
from sutured.services.exterior_algebra import render, to_text
from sutured.services.gluing import Gluing
from sutured.utils.helpers import require_keys

SIGN_TEXT = {ds.PLUS: "+", ds.MINUS: "-"}
TEXT_SIGN = {"+": ds.PLUS, "-": ds.MINUS}


def load_json(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInputError(f"invalid JSON: {exc.msg} at line {exc.lineno}") from exc


def dump_json(data):
    return json.dumps(data, sort_keys=True)


def _int_list(values, name):
    try:
        return [int(v) for v in values]
    except (TypeError, ValueError) as exc:
        raise MalformedInputError(f"{name} must be a list of integers") from exc


# surfaces


def surface_to_dict(s):
    surface = s.surface
    data = {
        "vertices": list(range(surface.n_vertices)),
        "halfedges": [{"id": h, "twin": surface.twin[h], "head": surface.head[h]}
                      for h in range(surface.n_halfedges)],
        "faces": [list(face) for face in surface.faces],
        "marks": s.marking.to_dict(),
    }
    if s.name:
        data["name"] = s.name
    if s.designated:
        data["designated"] = [list(w) for w in s.designated]
        data["labels"] = list(s.labels)
    if s.designated_minus:
        data["designated_minus"] = [list(w) for w in s.designated_minus]
        data["labels_minus"] = list(s.labels_minus)
    return data


def surface_from_dict(data):
    """Parse the surface format; the result still has to be validated."""
    require_keys(data, ["vertices", "halfedges", "faces", "marks"])
    vertices = _int_list(data["vertices"], "vertices")
    if sorted(vertices) != list(range(len(vertices))):
        raise MalformedInputError("vertices must be numbered 0 .. n-1")
    records = data["halfedges"]
    if not isinstance(records, list):
        raise MalformedInputError("halfedges must be a list")
    twin = [None] * len(records)
    head = [None] * len(records)
    for record in records:
        require_keys(record, ["id", "twin", "head"])
        h, t, v = _int_list([record["id"], record["twin"], record["head"]], "halfedge fields")
        if not 0 <= h < len(records) or twin[h] is not None:
            raise MalformedInputError(f"halfedge ids must be 0 .. {len(records) - 1}, each once (got {h})")
        twin[h], head[h] = t, v
    faces = [_int_list(face, "faces") for face in data["faces"]]
    marks = data["marks"]
    require_keys(marks, [m.value for m in sc.Mark])
    marking = sc.SuturedMarking.from_lists(*(_int_list(marks[m.value], m.value) for m in
                                             (sc.Mark.F_PLUS, sc.Mark.F_MINUS,
                                              sc.Mark.ALPHA_PLUS, sc.Mark.ALPHA_MINUS)))
    surface = sc.CombinatorialSurface.build(twin, head, faces, len(vertices))
    return sc.SuturedSurface(
        surface, marking,
        designated=tuple(tuple(_int_list(w, "designated")) for w in data.get("designated", [])),
        labels=tuple(data.get("labels", [])),
        designated_minus=tuple(tuple(_int_list(w, "designated_minus")) for w in data.get("designated_minus", [])),
        labels_minus=tuple(data.get("labels_minus", [])),
        name=str(data.get("name", "")),
    )


# dividing sets


def dividing_set_to_dict(k):
    data = surface_to_dict(k.host)
    data["K"] = sorted(k.curve_halfedges)
    data["signs"] = {str(f): SIGN_TEXT[s] for f, s in enumerate(k.face_signs)}
    if k.name:
        data["dividing_set"] = k.name
    return data


def dividing_set_from_dict(data):
    require_keys(data, ["K", "signs"])
    host = surface_from_dict(data)
    signs = data["signs"]
    if not isinstance(signs, dict):
        raise MalformedInputError("signs must map face ids to '+' or '-'")
    face_signs = []
    for f in range(host.surface.n_faces):
        text = signs.get(str(f))
        if text not in TEXT_SIGN:
            raise MalformedInputError(f"face {f} needs a sign '+' or '-'")
        face_signs.append(TEXT_SIGN[text])
    return ds.DividingSet(host, frozenset(_int_list(data["K"], "K")), tuple(face_signs),
                          name=str(data.get("dividing_set", "")))


def walks_from_json(values, surface):
    """A list of halfedge walks, each checked against the surface."""
    if not isinstance(values, list):
        raise MalformedInputError("walks must be a list of halfedge lists")
    walks = []
    for i, walk in enumerate(values):
        walk = _int_list(walk, f"walk {i}")
        stray = [h for h in walk if not 0 <= h < surface.n_halfedges]
        if stray:
            raise MalformedInputError(f"walk {i} uses unknown halfedges {stray}")
        walks.append(tuple(walk))
    return walks


# gluings


def _paths_to_json(paths):
    return list(paths[0]) if len(paths) == 1 else [list(p) for p in paths]


def gluing_to_dict(gluing):
    return {
        "gamma": _paths_to_json(gluing.gamma),
        "gamma_prime": _paths_to_json(gluing.gamma_prime),
        "vertex_map": {str(v): w for v, w in gluing.vertex_map},
    }


def gluing_from_dict(data, host):
    require_keys(data, ["gamma", "gamma_prime"])
    vertex_map = data.get("vertex_map") or {}
    if not isinstance(vertex_map, dict):
        raise MalformedInputError("vertex_map must be an object")
    try:
        return Gluing.from_paths(host, data["gamma"], data["gamma_prime"],
                                 {int(v): int(w) for v, w in vertex_map.items()})
    except (TypeError, ValueError) as exc:
        raise MalformedInputError("gamma, gamma_prime and vertex_map must hold halfedge and vertex ids") from exc


def glued_to_dict(glued, morphism=None):
    data = {
        "surface": surface_to_dict(glued.result),
        "vertex_map": list(glued.vertex_map),
        "swallowed": list(glued.swallowed),
    }
    if morphism is not None:
        data["morphism"] = morphism
    return data


# multivectors


def multivector_to_dict(x, labels=None):
    data = {
        "text": to_text(x),
        "terms": [[list(indices), c] for indices, c in x.items()],
        "rank": x.rank,
        "ring": x.ring.value,
    }
    if labels and len(labels) == x.rank:
        data["rendered"] = render(x, list(labels))
    return data
