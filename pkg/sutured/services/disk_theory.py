"""
Disk Theory Module

Contact elements of chord diagrams on (D², F(N)), bypass triples,
matchability, the rotation maps φ_j and the solid-torus tightness test.

In the β-basis {β₁, β₃, …, β₂N₋₃} of H₁(D², α⁺) the path from α_a to α_b
(a < b, both odd) is β_a + β_{a+2} + … + β_{b-2}, and every positive region
of a chord diagram is a disk whose top class is the wedge of the paths
joining its consecutive α⁺ points.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from math import gcd

from sutured.errors import StructuralError
from sutured.services import contact
from sutured.services import dividing_sets as ds
from sutured.services import surface_complex as sc
from sutured.services.dividing_sets import ChordDiagram
from sutured.services.exterior_algebra import CoefficientRing, Multivector, induced_map, pair, wedge_all

logger = logging.getLogger(__name__)


def _arc_cycles(cd):
    """Regions of D² ∖ K as cycles of boundary arcs (arc j carries α_j)."""
    n = 2 * cd.N
    seen = set()
    cycles = []
    for start in range(1, n + 1):
        if start in seen:
            continue
        cycle = []
        j = start
        while j not in seen:
            seen.add(j)
            cycle.append(j)
            j = cd.partner(j % n + 1)
        cycles.append(tuple(sorted(cycle)))
    return cycles


def positive_regions(cd):
    """α⁺ indices of each positive region, regions ordered by their first index."""
    return sorted(c for c in _arc_cycles(cd) if c[0] % 2 == 1)


def alpha_path(N, a, b, ring=CoefficientRing.INTEGERS):
    """Class of the boundary path α_a → α_b (odd a < b) in the β-basis."""
    vector = [0] * (N - 1)
    for i in range(a, b, 2):
        vector[(i - 1) // 2] = 1
    return Multivector.from_vector(vector, ring) if N > 1 else Multivector.zero(0, ring)


def disk_labels(N):
    return tuple(f"b{i}" for i in range(1, 2 * N - 2, 2))


def disk_contact_element(cd, ring=CoefficientRing.F2):
    """c(K) of a chord diagram by the region rule."""
    ring = CoefficientRing.parse(ring)
    rank = cd.N - 1
    factors = []
    for region in positive_regions(cd):
        factors.extend(alpha_path(cd.N, a, b, ring) for a, b in zip(region, region[1:]))
    value = wedge_all(factors, rank, ring)
    return contact.ContactElement(value, rank + 1 - len(positive_regions(cd)), ring, disk_labels(cd.N))


def agrees_with_pipeline(cd, ring=CoefficientRing.F2):
    """The region rule against the general contact-element computation."""
    ring = CoefficientRing.parse(ring)
    direct = disk_contact_element(cd, ring).value
    general = contact.contact_element(ds.chord_to_dividing_set(cd), ring=ring).value
    return direct == general if ring is CoefficientRing.F2 else direct.equals_up_to_sign(general)


@dataclass(frozen=True)
class DiskContactTable:
    N: int
    ring: CoefficientRing
    entries: dict = field(hash=False, compare=False)

    @classmethod
    def build(cls, N, ring=CoefficientRing.F2):
        ring = CoefficientRing.parse(ring)
        entries = {cd: disk_contact_element(cd, ring) for cd in ds.enumerate_chord_diagrams(N)}
        return cls(N, ring, entries)

    def __getitem__(self, cd):
        return self.entries[cd]

    def __len__(self):
        return len(self.entries)

    def is_injective(self):
        values = [e.value for e in self.entries.values()]
        return len(set(values)) == len(values)

    def all_nonzero(self):
        return all(not e.is_zero() and e.value.is_homogeneous() for e in self.entries.values())


@lru_cache(maxsize=16)
def contact_table(N, ring=CoefficientRing.F2):
    return DiskContactTable.build(N, ring)


# bypass triples


@dataclass(frozen=True)
class BypassTriple:
    site: tuple
    members: tuple

    def contact_elements(self, ring=CoefficientRing.F2):
        return [disk_contact_element(cd, ring).value for cd in self.members]


def _separates(chord, a, b):
    lo, hi = chord
    return (lo < a[0] < hi) != (lo < b[0] < hi)


def _shares_region(cd, first, second):
    n = 2 * cd.N
    for cycle in _arc_cycles(cd):
        chords = {tuple(sorted((j % n + 1, cd.partner(j % n + 1)))) for j in cycle}
        if first in chords and second in chords:
            return True
    return False


def _is_site(cd, site):
    first, middle, last = site
    if len({first, middle, last}) != 3 or not all(c in cd.pairs for c in site):
        return False
    return (_separates(middle, first, last) and _shares_region(cd, first, middle)
            and _shares_region(cd, middle, last))


def all_bypass_sites(cd):
    """Every triple of chords a small disk can cross in succession."""
    sites = []
    for middle in cd.pairs:
        for first in cd.pairs:
            for last in cd.pairs:
                if first < last and _is_site(cd, (first, middle, last)):
                    sites.append((first, middle, last))
    return sites


def bypass_triple_at(cd, site):
    """The three diagrams that agree with cd off a disk crossing the site's chords.

    On the six endpoints z₁ … z₆ (in boundary order) they are the three
    matchings with one long chord: {z₁z₄, z₂z₃, z₅z₆} and its two rotations.
    """
    site = tuple(tuple(sorted(c)) for c in site)
    if len(site) != 3 or not _is_site(cd, site):
        raise StructuralError(f"{site} is not three parallel strands of {cd}")
    z = sorted(p for chord in site for p in chord)
    rest = [c for c in cd.pairs if c not in site]
    members = []
    for shift in range(3):
        w = z[shift:] + z[:shift]
        diagram = ChordDiagram.from_pairs(rest + [(w[0], w[3]), (w[1], w[2]), (w[4], w[5])])
        problems = diagram.violations()
        if problems:
            raise StructuralError(f"bypass at {site} produced an invalid diagram: {problems[0]}")
        members.append(diagram)
    if cd not in members:
        raise StructuralError(f"{site} is not three parallel strands of {cd}")
    return BypassTriple(site, tuple(members))


def bypass_relation(triple, ring=CoefficientRing.F2):
    """Signs ε with Σ εᵢ c(Kᵢ) = 0, or None when no choice works."""
    ring = CoefficientRing.parse(ring)
    values = triple.contact_elements(ring)
    choices = [(1, 1, 1)] if ring is CoefficientRing.F2 else [(1,) + rest for rest in product((1, -1), repeat=2)]
    for signs in choices:
        total = values[0] * signs[0] + values[1] * signs[1] + values[2] * signs[2]
        if total.is_zero():
            return signs
    return None


# matchability


def loop_count(cd1, cd2):
    """Closed curves formed by gluing the two diagrams along the boundary."""
    if cd1.N != cd2.N:
        raise StructuralError(f"diagrams have different N: {cd1.N} and {cd2.N}")
    seen = set()
    loops = 0
    for start in range(1, 2 * cd1.N + 1):
        if start in seen:
            continue
        loops += 1
        point, use_first = start, True
        while True:
            seen.add(point)
            point = (cd1 if use_first else cd2).partner(point)
            seen.add(point)
            use_first = not use_first
            if point == start and use_first:
                break
    return loops


def matchable(cd1, cd2):
    """The glued multicurve on S² is connected.

    Suture i of the second disk is identified with suture i of the first;
    the orientation reversal of the second embedding does not change which
    sutures its chords join.
    """
    return loop_count(cd1, cd2) == 1


def matchable_via_wedge(cd1, cd2, ring=CoefficientRing.F2):
    """c(K₁) ∧ c(K₂) = Ω⁺ (up to sign over the integers)."""
    if cd1.N != cd2.N:
        raise StructuralError(f"diagrams have different N: {cd1.N} and {cd2.N}")
    ring = CoefficientRing.parse(ring)
    product_ = disk_contact_element(cd1, ring).value ^ disk_contact_element(cd2, ring).value
    omega = Multivector.top(cd1.N - 1, ring)
    return product_ == omega if ring is CoefficientRing.F2 else product_.equals_up_to_sign(omega)


# rotations and the solid torus


def rotation_map(N, j, ring=CoefficientRing.INTEGERS):
    """Matrix of φ_j: βᵢ ↦ β_{i+j} from the α⁺ β-basis to the α⁻ β-basis."""
    if j % 2 == 0:
        raise StructuralError(f"rotation step must be odd, got {j}")
    ring = CoefficientRing.parse(ring)
    disk = sc.standard_disk(N)
    minus = sc.cached_homology(disk, ring, True)
    columns = []
    for i in range(1, 2 * N - 2, 2):
        image = minus.express_walk(sc.disk_beta_walk(disk.surface, N, i + j))
        columns.append([image.coefficient((r,)) for r in range(minus.rank)])
    return [[col[r] for col in columns] for r in range(N - 1)]


@dataclass(frozen=True)
class TorusParameters:
    n: int
    p: int
    q: int

    def __post_init__(self):
        if self.n < 1 or self.q < 1 or gcd(self.p, self.q) != 1:
            raise StructuralError(f"need n >= 1, q >= 1 and gcd(p, q) = 1, got {self}")

    @property
    def sutures(self):
        return self.n * self.q

    @property
    def step(self):
        return 2 * self.n * self.p + 1


def _check_torus(cd, params):
    if cd.N != params.sutures:
        raise StructuralError(f"diagram has N = {cd.N}, the torus needs N = n·q = {params.sutures}")


def torus_pairing(cd, params, base=0):
    """⟨φ_{2np+1}(c(K)) | c(K)⟩ over F2, with the disk turned by ``base`` suture pairs."""
    _check_torus(cd, params)
    cd = cd.rotated(2 * base)
    ring = CoefficientRing.F2
    x = disk_contact_element(cd, ring).value
    y = induced_map(rotation_map(cd.N, params.step, ring), x)
    functional = contact.to_functional(sc.standard_disk(cd.N), y, ring)
    return pair(functional, x)


def solid_torus_tight(cd, params, base=0):
    return torus_pairing(cd, params, base) == 1


def rounded_sphere_oracle(cd, params, base=0):
    """Connectedness of K glued to its (2np+1)-step rotation."""
    _check_torus(cd, params)
    cd = cd.rotated(2 * base)
    return matchable(cd, cd.rotated(params.step))


# the annulus Dehn twist


def dehn_twist_map(k):
    """T^k on H₁(annulus, α⁺) in the basis (β₁, β₂): β₁ ↦ β₁ + kβ₂, β₂ ↦ β₂."""
    return [[1, 0], [k, 1]]


def dehn_twist_family(n, ring=CoefficientRing.INTEGERS):
    ring = CoefficientRing.parse(ring)
    value = induced_map(dehn_twist_map(n), Multivector.basis(2, (0,), ring))
    return contact.ContactElement(value, 1, ring, ("b1", "b2"))


# the parallel cut system and excess intersections


@dataclass(frozen=True)
class SkeletonArc:
    """A cut arc of (D², F(N)) from α_start to α_end; ``side`` is the set of
    sutures on the side that contains F₁."""

    start: int
    end: int
    side: frozenset

    def crossings(self, cd):
        return sum(1 for a, b in cd.pairs if (a in self.side) != (b in self.side))


def disk_skeleton(N):
    """N − 2 parallel arcs cutting (D², F(N)) into N − 1 copies of (D², F(2)).

    The i-th arc runs from α_{2N-i+1} to α_{i+2}; the first one cuts off
    F₁, F₂, F₃.
    """
    arcs = []
    for i in range(1, N - 1):
        side = frozenset(range(2 * N - i + 2, 2 * N + 1)) | frozenset(range(1, i + 3))
        arcs.append(SkeletonArc(2 * N - i + 1, i + 2, side))
    return tuple(arcs)


def excess_intersections(cd):
    """Crossings of K with the skeleton beyond the one each arc forces."""
    return sum(arc.crossings(cd) - 1 for arc in disk_skeleton(cd.N))


def reducing_sites(cd, arc):
    """Bypass sites whose three chords all cross ``arc``."""
    return [site for site in all_bypass_sites(cd)
            if all((a in arc.side) != (b in arc.side) for a, b in site)]
