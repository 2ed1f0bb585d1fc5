"""
Exterior Algebra Module

Exact exterior algebra Λ(R^r) over the integers or over F2. Index subsets are
stored as bit patterns, so a term ``b_I`` with ``I = {0, 2}`` is kept under the
key ``0b101``. Merging ``I`` before ``J`` carries the sign
(-1)^#{(i, j) in I x J : i > j}.

Multivector values are immutable and compare by value. ``DualMultivector``
is the same structure tagged as living in the dual algebra Λ(M*).
"""

import logging
from enum import Enum
from functools import reduce
from math import gcd

from sutured.errors import MalformedInputError, StructuralError

logger = logging.getLogger(__name__)

MAX_RANK = 64


class CoefficientRing(Enum):
    INTEGERS = "z"
    F2 = "f2"

    def reduce(self, value):
        value = int(value)
        return value % 2 if self is CoefficientRing.F2 else value

    @classmethod
    def parse(cls, text):
        if isinstance(text, cls):
            return text
        key = str(text).strip().lower()
        aliases = {"z": cls.INTEGERS, "int": cls.INTEGERS, "integers": cls.INTEGERS,
                   "f2": cls.F2, "z2": cls.F2, "gf2": cls.F2}
        if key not in aliases:
            raise MalformedInputError(f"unknown coefficient ring: {text!r}")
        return aliases[key]


def mask_of(indices):
    mask = 0
    for i in indices:
        if mask >> i & 1:
            raise StructuralError(f"repeated index {i} in {tuple(indices)}")
        mask |= 1 << i
    return mask


def indices_of(mask):
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def merge_sign(left, right):
    """Sign of b_left ∧ b_right relative to b_(left ∪ right); 0 if they overlap."""
    if left & right:
        return 0
    crossings = 0
    for j in indices_of(right):
        crossings += bin(left >> (j + 1)).count("1")
    return -1 if crossings & 1 else 1


class Multivector:
    """A sparse element of the exterior algebra on ``rank`` generators.

    Args:
        rank (int): number of degree-one generators.
        terms (dict): bit pattern (or index tuple) -> coefficient.
        ring (CoefficientRing): the base ring.
    """

    __slots__ = ("rank", "terms", "ring")

    def __init__(self, rank, terms=None, ring=CoefficientRing.INTEGERS):
        if not 0 <= rank <= MAX_RANK:
            raise StructuralError(f"rank {rank} outside 0..{MAX_RANK}")
        ring = CoefficientRing.parse(ring)
        clean = {}
        for key, coefficient in (terms or {}).items():
            mask = key if isinstance(key, int) else mask_of(key)
            if mask >> rank:
                raise StructuralError(f"index set {indices_of(mask)} exceeds rank {rank}")
            value = ring.reduce(clean.get(mask, 0) + ring.reduce(coefficient))
            if value:
                clean[mask] = value
            else:
                clean.pop(mask, None)
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "ring", ring)

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    # construction

    @classmethod
    def zero(cls, rank, ring=CoefficientRing.INTEGERS):
        return cls(rank, {}, ring)

    @classmethod
    def one(cls, rank, ring=CoefficientRing.INTEGERS):
        return cls(rank, {0: 1}, ring)

    @classmethod
    def basis(cls, rank, indices, ring=CoefficientRing.INTEGERS, coefficient=1):
        return cls(rank, {mask_of(indices): coefficient}, ring)

    @classmethod
    def from_vector(cls, vector, ring=CoefficientRing.INTEGERS):
        """Degree-one element with the given coordinates."""
        return cls(len(vector), {1 << i: c for i, c in enumerate(vector) if c}, ring)

    @classmethod
    def top(cls, rank, ring=CoefficientRing.INTEGERS):
        return cls(rank, {(1 << rank) - 1: 1}, ring)

    # structure

    def _like(self, terms, rank=None):
        return type(self)(self.rank if rank is None else rank, terms, self.ring)

    def _check_compatible(self, other):
        if type(other) is not type(self):
            raise StructuralError(
                f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.rank != self.rank or other.ring is not self.ring:
            raise StructuralError(
                f"rank/ring mismatch: ({self.rank}, {self.ring.value}) vs "
                f"({other.rank}, {other.ring.value})")

    def is_zero(self):
        return not self.terms

    def degrees(self):
        return sorted({bin(mask).count("1") for mask in self.terms})

    def is_homogeneous(self):
        return len(self.degrees()) <= 1

    def degree(self):
        """The common degree of a homogeneous nonzero element, else None."""
        degrees = self.degrees()
        return degrees[0] if len(degrees) == 1 else None

    def coefficient(self, indices):
        return self.terms.get(mask_of(indices), 0)

    def items(self):
        """(index tuple, coefficient) pairs in canonical order."""
        return [(indices_of(m), self.terms[m]) for m in sorted(self.terms, key=_term_order)]

    def content(self):
        """gcd of the coefficients; 0 for the zero element."""
        return reduce(gcd, (abs(c) for c in self.terms.values()), 0)

    def is_primitive(self):
        return self.content() == 1

    def over(self, ring):
        """Reinterpret the coefficients in another ring (mod-2 reduction for F2)."""
        ring = CoefficientRing.parse(ring)
        return type(self)(self.rank, dict(self.terms), ring)

    def equals_up_to_sign(self, other):
        self._check_compatible(other)
        return self == other or self == -other

    # arithmetic

    def __add__(self, other):
        self._check_compatible(other)
        terms = dict(self.terms)
        for mask, c in other.terms.items():
            terms[mask] = terms.get(mask, 0) + c
        return self._like(terms)

    def __neg__(self):
        return self._like({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        if not isinstance(scalar, int):
            return NotImplemented
        return self._like({m: scalar * c for m, c in self.terms.items()})

    __rmul__ = __mul__

    def __xor__(self, other):
        return wedge(self, other)

    def __eq__(self, other):
        if not isinstance(other, Multivector):
            return NotImplemented
        return (type(self) is type(other) and self.rank == other.rank
                and self.ring is other.ring and self.terms == other.terms)

    def __hash__(self):
        return hash((type(self).__name__, self.rank, self.ring, frozenset(self.terms.items())))

    def __repr__(self):
        return f"{type(self).__name__}(rank={self.rank}, ring={self.ring.value}, {to_text(self)})"

    def __str__(self):
        return to_text(self)


class DualMultivector(Multivector):
    """An element of Λ(M*), paired against ``Multivector`` values."""

    __slots__ = ()


def _term_order(mask):
    return (bin(mask).count("1"), indices_of(mask))


def wedge(a, b):
    """Exterior product a ∧ b."""
    a._check_compatible(b)
    terms = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            sign = merge_sign(ma, mb)
            if sign:
                key = ma | mb
                terms[key] = terms.get(key, 0) + sign * ca * cb
    return a._like(terms)


def wedge_all(factors, rank, ring=CoefficientRing.INTEGERS, cls=Multivector):
    return reduce(wedge, factors, cls.one(rank, ring))


def pair(f, e):
    """The pairing <F | E>; equals det(f_i(e_j)) on decomposables."""
    if not isinstance(f, DualMultivector) or isinstance(e, DualMultivector):
        raise StructuralError("pair expects (DualMultivector, Multivector)")
    if f.rank != e.rank or f.ring is not e.ring:
        raise StructuralError("rank/ring mismatch in pairing")
    total = sum(c * e.terms.get(m, 0) for m, c in f.terms.items())
    return f.ring.reduce(total)


def interior(acting, target):
    """Interior product ι_acting(target).

    With a ``Multivector`` acting on a ``DualMultivector`` this is defined by
    <ι_E F | G> = <F | E ∧ G>; the mirrored form (dual acting on a
    multivector) satisfies <G | ι_F E> = <F ∧ G | E>. On basis elements both
    send the pair (A, B) to sign(A, B∖A)·(B∖A) when A ⊆ B and to 0 otherwise.
    The result has the type of ``target``.
    """
    if isinstance(acting, DualMultivector) == isinstance(target, DualMultivector):
        raise StructuralError("interior product needs one dual and one primal argument")
    if acting.rank != target.rank or acting.ring is not target.ring:
        raise StructuralError("rank/ring mismatch in interior product")
    terms = {}
    for ma, ca in acting.terms.items():
        for mb, cb in target.terms.items():
            if ma & mb != ma:
                continue
            rest = mb & ~ma
            terms[rest] = terms.get(rest, 0) + merge_sign(ma, rest) * ca * cb
    return target._like(terms)


def grade_project(x, grade):
    """Keep exactly the terms of exterior degree ``grade``."""
    return x._like({m: c for m, c in x.terms.items() if bin(m).count("1") == grade})


def induced_map(matrix, x, target_rank=None):
    """Apply Λ(m) to x; column j of ``matrix`` is the image of generator j.

    Args:
        matrix (list): rows of integers, ``len(matrix)`` = target rank.
        x (Multivector): element of the source algebra.
        target_rank (int, optional): needed when the matrix has no rows.
    """
    n_rows = len(matrix) if target_rank is None else target_rank
    n_cols = len(matrix[0]) if matrix else x.rank
    if matrix and len(matrix) != n_rows:
        raise StructuralError("target rank does not match the matrix")
    if n_cols != x.rank:
        raise StructuralError(f"matrix has {n_cols} columns but x has rank {x.rank}")
    cls = type(x)
    images = [cls(n_rows, {1 << i: matrix[i][j] for i in range(n_rows) if matrix[i][j]}, x.ring)
              for j in range(n_cols)]
    result = cls.zero(n_rows, x.ring)
    for mask, c in x.terms.items():
        image = wedge_all([images[j] for j in indices_of(mask)], n_rows, x.ring, cls)
        result = result + image * c
    return result


def embed(x, rank, offset):
    """Shift the generators of x into a larger algebra starting at ``offset``."""
    if offset + x.rank > rank:
        raise StructuralError("block does not fit in the target rank")
    return type(x)(rank, {m << offset: c for m, c in x.terms.items()}, x.ring)


def to_dual(x):
    return DualMultivector(x.rank, dict(x.terms), x.ring)


# text forms


def to_text(x):
    """Canonical form: ``k·[i,j]`` terms joined by `` + ``; ``1`` for the empty wedge."""
    if x.is_zero():
        return "0"
    parts = []
    for indices, c in x.items():
        if not indices:
            parts.append(str(c))
        else:
            parts.append(f"{c}·[{','.join(str(i) for i in indices)}]")
    return " + ".join(parts)


def from_text(text, rank, ring=CoefficientRing.INTEGERS, dual=False):
    cls = DualMultivector if dual else Multivector
    text = text.strip()
    if text == "0":
        return cls.zero(rank, ring)
    terms = {}
    try:
        for part in text.split(" + "):
            part = part.strip()
            if "·" in part:
                coefficient, bracket = part.split("·", 1)
                inner = bracket.strip()[1:-1]
                indices = tuple(int(i) for i in inner.split(",")) if inner else ()
            else:
                coefficient, indices = part, ()
            mask = mask_of(indices)
            terms[mask] = terms.get(mask, 0) + int(coefficient)
    except ValueError as exc:
        raise MalformedInputError(f"cannot parse multivector {text!r}") from exc
    return cls(rank, terms, ring)


def render(x, labels, symbol="^"):
    """Render with named generators, e.g. ``b3^b5^b7 + b3^b5^b9``."""
    if len(labels) != x.rank:
        raise StructuralError("one label per generator is required")
    if x.is_zero():
        return "0"
    out = []
    for indices, c in x.items():
        word = symbol.join(labels[i] for i in indices)
        if not word:
            body = str(abs(c))
        elif abs(c) == 1:
            body = word
        else:
            body = f"{abs(c)}*{word}"
        if not out:
            out.append(body if c > 0 else f"-{body}")
        else:
            out.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(out)
