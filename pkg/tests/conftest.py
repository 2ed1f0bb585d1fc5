import pytest

from sutured.app import create_app
from sutured.config import TestConfig
from sutured.services import dividing_sets as ds
from sutured.services import gluing as gl
from sutured.services import surface_complex as sc


@pytest.fixture
def app():
    return create_app(TestConfig)


@pytest.fixture
def disk2():
    return sc.standard_disk(2)


@pytest.fixture
def disk3():
    return sc.standard_disk(3)


@pytest.fixture(scope="session")
def annulus():
    return sc.standard_annulus()


@pytest.fixture(scope="session")
def annulus_sets(annulus):
    return ds.annulus_dividing_sets(annulus)


@pytest.fixture
def six_chord_diagram():
    # positive regions {1}, {3, 5, 7, 11}, {9}
    return ds.ChordDiagram.parse("1-2,3-12,4-5,6-7,8-11,9-10")


@pytest.fixture(scope="session")
def rectangle():
    """(D², F(4)) with two boundary stretches glued into an annulus."""
    return gl.glue(gl.disk_to_annulus_gluing(4))


@pytest.fixture(scope="session")
def one_holed_torus():
    """Genus one, one boundary circle carrying a single F⁺."""
    surface = sc.polygon_surface(1, [4])
    cycle = surface.boundary_cycles[0]
    marks = {m: [surface.tail[cycle[i]]] for i, m in enumerate(sc.CYCLIC_PATTERN)}
    marking = sc.SuturedMarking.from_lists(marks[sc.Mark.F_PLUS], marks[sc.Mark.F_MINUS],
                                           marks[sc.Mark.ALPHA_PLUS], marks[sc.Mark.ALPHA_MINUS])
    return sc.SuturedSurface(surface, marking, name="one-holed-torus")
