"""
TQFT Service Module

Entry points shared by the HTTP API and the command line. Every method takes
plain JSON-like values, runs the computation and returns a dictionary with
the result:

    {"success": True, "data": ...}   or   {"success": False, "error": "..."}

Errors raised by the computation are logged and returned, never re-raised.
"""

import logging

from sutured.errors import SuturedError, ValidationError
from sutured.services import axioms
from sutured.services import contact
from sutured.services import disk_theory as dt
from sutured.services import dividing_sets as ds
from sutured.services import gluing as gl
from sutured.services import surface_complex as sc
from sutured.utils import serialization as codec
from sutured.utils.helpers import log_error, parse_int, parse_positive_int, parse_ring

logger = logging.getLogger(__name__)


class TqftService:
    """
    Service class wrapping the sutured TQFT computations.

    Args:
        ring (str, optional): default coefficient ring, "f2" or "z".
    """

    def __init__(self, ring=None):
        self.ring = parse_ring(ring)

    def _run(self, label, action):
        try:
            return {"success": True, "data": action()}
        except ValidationError as e:
            log_error(f"{label}: {e}")
            return {"success": False, "error": str(e), "violations": [v.to_dict() for v in e.violations]}
        except SuturedError as e:
            log_error(f"{label}: {e}")
            return {"success": False, "error": str(e)}

    def _ring(self, ring):
        return parse_ring(ring, self.ring.value)

    # surfaces

    def validate_surface(self, data):
        def action():
            s = codec.surface_from_dict(data)
            violations = sc.validate(s)
            return {"valid": not violations, "violations": [v.to_dict() for v in violations]}
        return self._run("validate_surface", action)

    def homology(self, data, ring=None, walks=None):
        """Basis of H1(surface, alpha+), plus the classes of any given walks."""
        def action():
            s = sc.ensure_valid(codec.surface_from_dict(data))
            basis = sc.relative_homology(s, self._ring(ring))
            result = {"rank": basis.rank, "L": s.L, "n_F": s.n_F, "euler": s.euler,
                      "labels": list(basis.labels), "cycles": [list(w) for w in basis.walks]}
            if walks is not None:
                classes = [sc.express(s.surface.walk_to_chain(w), basis)
                           for w in codec.walks_from_json(walks, s.surface)]
                result["classes"] = [[x.coefficient((i,)) for i in range(basis.rank)] for x in classes]
            return result
        return self._run("homology", action)

    # contact elements

    def contact_element(self, diagram=None, dividing_set=None, ring=None):
        """Contact element of a chord diagram string or a dividing-set JSON object."""
        def action():
            r = self._ring(ring)
            if diagram is not None:
                cd = ds.ChordDiagram.parse(diagram)
                element = dt.disk_contact_element(cd, r)
                name = cd.to_text()
            else:
                k = ds.ensure_valid(codec.dividing_set_from_dict(dividing_set))
                element = contact.contact_element(k, ring=r)
                name = k.name
            data = codec.multivector_to_dict(element.value, element.labels)
            data.update({"name": name, "grade": element.grade, "value": element.render()})
            return data
        return self._run("contact", action)

    def enumerate_diagrams(self, n, ring=None):
        def action():
            N = parse_positive_int(n, "n")
            r = self._ring(ring)
            return [{"diagram": cd.to_text(), "contact": dt.disk_contact_element(cd, r).render()}
                    for cd in ds.enumerate_chord_diagrams(N)]
        return self._run("enumerate", action)

    def bypass(self, diagram, ring=None):
        def action():
            cd = ds.ChordDiagram.parse(diagram)
            r = self._ring(ring)
            triples = []
            for site in dt.all_bypass_sites(cd):
                triple = dt.bypass_triple_at(cd, site)
                signs = dt.bypass_relation(triple, r)
                triples.append({
                    "site": [list(chord) for chord in site],
                    "members": [m.to_text() for m in triple.members],
                    "contact": [dt.disk_contact_element(m, r).render() for m in triple.members],
                    "signs": list(signs) if signs else None,
                })
            return triples
        return self._run("bypass", action)

    def match(self, first, second):
        def action():
            cd1, cd2 = ds.ChordDiagram.parse(first), ds.ChordDiagram.parse(second)
            oracle = dt.matchable(cd1, cd2)
            wedge = dt.matchable_via_wedge(cd1, cd2)
            return {"oracle": oracle, "wedge": wedge, "agree": oracle == wedge,
                    "loops": dt.loop_count(cd1, cd2)}
        return self._run("match", action)

    def torus(self, diagram, n, p, q, base=0):
        def action():
            cd = ds.ChordDiagram.parse(diagram)
            params = dt.TorusParameters(parse_positive_int(n, "n"), parse_int(p, "p"), parse_positive_int(q, "q"))
            turn = parse_int(base, "base")
            pairing = dt.torus_pairing(cd, params, turn)
            return {"pairing": pairing, "tight": pairing == 1,
                    "oracle": dt.rounded_sphere_oracle(cd, params, turn),
                    "step": params.step}
        return self._run("torus", action)

    # gluing and decomposition

    def glue(self, data, ring=None):
        """Glue a surface; ``data`` holds "surface" and "gluing" objects."""
        def action():
            s = sc.ensure_valid(codec.surface_from_dict(data.get("surface") if isinstance(data, dict) else None))
            g = gl.glue(codec.gluing_from_dict(data.get("gluing"), s))
            return codec.glued_to_dict(g, gl.describe_morphism(g, self._ring(ring)))
        return self._run("glue", action)

    def decompose(self, data, keep_f1=False):
        def action():
            s = sc.ensure_valid(codec.surface_from_dict(data))
            q = gl.quadrangulate(s, keep_f1=bool(keep_f1))
            return {
                "arcs": [list(arc) for arc in q.arcs],
                "pieces": [{"kind": p.kind, "vertices": list(p.vertices)} for p in q.pieces],
                "gluing": codec.gluing_to_dict(q.gluing),
                "surface": codec.surface_to_dict(q.pieces_surface),
            }
        return self._run("decompose", action)

    def run_axioms(self, seed=0, max_n=5, corpus_size=200):
        def action():
            reports = axioms.run_all(parse_int(seed, "seed"), parse_positive_int(max_n, "max_n"),
                                     parse_positive_int(corpus_size, "corpus_size"), self.ring)
            return [r.to_dict() for r in reports]
        return self._run("axioms", action)
