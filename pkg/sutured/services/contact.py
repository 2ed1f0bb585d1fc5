"""
Contact Module

Contact elements c(K) = π_L(K)(i_K*(ω)) in V(Σ, F) = Λ(H₁(Σ, α⁺)), their
negative counterparts in Λ(H₁(Σ, α⁻)) ≅ V(Σ, F)*, and the duality between
the two.

ω is a top-degree generator of Λ(H₁(R⁺(K), α⁺; Z)). Over F2 it is unique;
over the integers it is a choice of sign relative to the ascending wedge of
the subsurface's tree–cotree basis.
"""

import logging
from dataclasses import dataclass

from sutured.errors import ConsistencyError, StructuralError
from sutured.services import dividing_sets as ds
from sutured.services import surface_complex as sc
from sutured.services.exterior_algebra import (
    CoefficientRing,
    DualMultivector,
    Multivector,
    grade_project,
    induced_map,
    interior,
    render,
    to_dual,
)
from sutured.utils import linalg

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HomologyOrientation:
    """Top generator ±e_0 ∧ … ∧ e_{r-1} in a subsurface homology basis."""

    generator: Multivector

    @property
    def sign(self):
        g = self.generator
        top = (1 << g.rank) - 1
        if set(g.terms) != {top} or g.terms[top] not in (1, -1):
            raise StructuralError("orientation generator must be ±(top wedge of a basis)")
        return g.terms[top]

    @classmethod
    def standard(cls, rank, sign=1):
        return cls(Multivector.top(rank) * sign)

    def __neg__(self):
        return HomologyOrientation(-self.generator)


@dataclass(frozen=True)
class ContactElement:
    value: Multivector
    grade: int
    ring: CoefficientRing
    labels: tuple = ()

    def is_zero(self):
        return self.value.is_zero()

    def render(self):
        if self.labels and len(self.labels) == self.value.rank:
            return render(self.value, list(self.labels))
        return str(self.value)

    def __str__(self):
        return self.render()


@dataclass(frozen=True)
class ContactSubset:
    elements: tuple

    def __contains__(self, value):
        return value in self.elements


def _inclusion_matrix(sub, sub_basis, host_basis):
    columns = []
    for walk in sub_basis.walks:
        image = host_basis.express_walk(sub.to_host_walk(walk))
        columns.append([image.coefficient((i,)) for i in range(host_basis.rank)])
    return linalg.columns_to_rows(columns, host_basis.rank)


def _region_push(k, ring, minus, orientation):
    decomposition = ds.regions(k)
    sub = decomposition.minus_surface if minus else decomposition.plus_surface
    host_basis = sc.cached_homology(k.host, ring, minus)
    grade = decomposition.L_minus_K if minus else decomposition.L_K
    if sub is None:
        value = Multivector.one(host_basis.rank, ring) if grade == 0 else Multivector.zero(host_basis.rank, ring)
        return value, grade, host_basis
    roots = sub.marking.alpha_minus if minus else sub.marking.alpha_plus
    sub_basis = sc.homology_basis(sub.surface, roots, ring, verify=False)
    sign = 1
    if orientation is not None:
        if orientation.generator.rank != sub_basis.rank:
            raise StructuralError(
                f"orientation has rank {orientation.generator.rank}, expected {sub_basis.rank}")
        sign = orientation.sign
    omega = Multivector.top(sub_basis.rank, ring) * sign
    matrix = _inclusion_matrix(sub, sub_basis, host_basis)
    pushed = induced_map(matrix, omega, target_rank=host_basis.rank)
    return grade_project(pushed, grade), grade, host_basis


def contact_element(k, orientation=None, ring=CoefficientRing.F2):
    """c(K): push the top generator of H₁(R⁺(K), α⁺) into V(Σ, F).

    Args:
        k (DividingSet): a valid dividing set.
        orientation (HomologyOrientation, optional): defaults to the ascending
            wedge of the subsurface basis.
        ring: CoefficientRing or its tag.

    Returns:
        ContactElement: homogeneous of degree L(K), zero iff K isolates.
    """
    ring = CoefficientRing.parse(ring)
    value, grade, host_basis = _region_push(k, ring, False, orientation)
    return ContactElement(value, grade, ring, host_basis.labels)


def contact_subset(k):
    """{c(K, ω), c(K, -ω)} over the integers."""
    x = contact_element(k, ring=CoefficientRing.INTEGERS).value
    if x.is_zero():
        return ContactSubset((x,))
    return ContactSubset(tuple(sorted((x, -x), key=lambda m: m.items())))


def dual_basis(s, ring=CoefficientRing.F2):
    """Matrix P with P[i][j] = I(a_i, b_j) for the α⁺ basis a and α⁻ basis b.

    Column j holds the coordinates of b_j as a functional on H₁(Σ, α⁺).
    """
    ring = CoefficientRing.parse(ring)
    plus = sc.cached_homology(s, ring, False)
    minus = sc.cached_homology(s, ring, True)
    matrix = sc.intersection_matrix(s, plus, minus)
    try:
        linalg.invert(matrix, ring)
    except ConsistencyError as exc:
        raise ConsistencyError("intersection pairing is not perfect; basis bug") from exc
    return matrix


def to_functional(s, y, ring=CoefficientRing.F2):
    """Convert an element of Λ(H₁(Σ, α⁻)) to a DualMultivector on V(Σ, F)."""
    matrix = dual_basis(s, ring)
    return to_dual(induced_map(matrix, y, target_rank=len(matrix)))


def negative_contact_element(k, orientation=None, ring=CoefficientRing.F2):
    """c⁻(K) in V(Σ, F)*, built from R⁻(K) and α⁻."""
    ring = CoefficientRing.parse(ring)
    value, _, host_basis = _region_push(k, ring, True, orientation)
    if host_basis.rank == 0:
        return to_dual(value)
    return to_functional(k.host, value, ring)


def omega_plus(s, ring=CoefficientRing.F2):
    return Multivector.top(s.L, CoefficientRing.parse(ring))


def omega_minus(s, ring=CoefficientRing.F2):
    return DualMultivector.top(s.L, CoefficientRing.parse(ring))


def duality_check(k, ring=CoefficientRing.F2):
    """c⁺ = ι_{c⁻}Ω⁺ and c⁻ = ι_{c⁺}Ω⁻ (up to sign over the integers)."""
    ring = CoefficientRing.parse(ring)
    plus = contact_element(k, ring=ring).value
    minus = negative_contact_element(k, ring=ring)
    first = interior(minus, omega_plus(k.host, ring))
    second = interior(plus, omega_minus(k.host, ring))
    if ring is CoefficientRing.F2:
        return first == plus and second == minus
    return first.equals_up_to_sign(plus) and second.equals_up_to_sign(minus)


def rank_complement(k, ring=CoefficientRing.F2):
    """rank H₁(R⁺, α⁺) + rank H₁(R⁻, α⁻) == rank H₁(Σ, α⁺) for non-isolating K."""
    decomposition = ds.regions(k)
    ranks = []
    for sub, minus in ((decomposition.plus_surface, False), (decomposition.minus_surface, True)):
        if sub is None:
            ranks.append(0)
            continue
        roots = sub.marking.alpha_minus if minus else sub.marking.alpha_plus
        ranks.append(sc.homology_basis(sub.surface, roots, ring, verify=False).rank)
    return sum(ranks) == k.host.L
