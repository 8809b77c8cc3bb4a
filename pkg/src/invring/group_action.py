"""Finite matrix groups over a coefficient ring and their graded actions.

Convention: g sends X_j to sum_i g[i][j] X_i (columns are images), so
``Sym^d(g h) = Sym^d(g) Sym^d(h)``.

>>> from .coeff_rings import CoeffRing
>>> G = generate_closure([[[0, -1], [1, -1]]], CoeffRing.integers())
>>> G.order, G.exponent
(3, 3)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .coeff_rings import CoeffRing
from .errors import BoundExceeded, DeskBoundExceeded, InvalidInput, NotInvertible
from .exact_linalg import field_det, field_inverse
from .polynomial import Poly, monomials

SYLOW_BOUND = 64


class GroupElement:
    """Invertible square matrix over a coefficient ring (immutable)."""

    __slots__ = ("ring", "m", "_inv", "_h")

    def __init__(self, matrix, ring: CoeffRing, check: bool = True):
        rows = tuple(tuple(ring.elem(x) for x in r) for r in matrix)
        n = len(rows)
        if check:
            if n == 0 or any(len(r) != n for r in rows):
                raise InvalidInput("group elements must be square matrices")
            if not all(ring.contains(x) for r in rows for x in r):
                raise NotInvertible(f"matrix entries not in {ring}")
            if not ring.is_unit(field_det(rows, ring.one, ring.zero)):
                raise NotInvertible("determinant is not a unit")
        self.ring = ring
        self.m = rows
        self._inv = None
        self._h = None

    @property
    def n(self) -> int:
        return len(self.m)

    @classmethod
    def identity(cls, n: int, ring: CoeffRing) -> "GroupElement":
        return cls([[ring.one if i == j else ring.zero for j in range(n)] for i in range(n)], ring, check=False)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        a, b = self.m, other.m
        n = len(a)
        z = self.ring.zero
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = z
                for k in range(n):
                    if a[i][k] and b[k][j]:
                        acc = acc + a[i][k] * b[k][j]
                row.append(acc)
            rows.append(row)
        return GroupElement(rows, self.ring, check=False)

    def inverse(self) -> "GroupElement":
        if self._inv is None:
            inv = field_inverse([list(r) for r in self.m], self.ring.one, self.ring.zero)
            self._inv = GroupElement(inv, self.ring, check=False)
            self._inv._inv = self
        return self._inv

    def is_identity(self) -> bool:
        return all((x == 1) if i == j else (not x) for i, r in enumerate(self.m) for j, x in enumerate(r))

    def order(self, bound: int = 1000) -> int:
        x = self
        k = 1
        while not x.is_identity():
            x = x * self
            k += 1
            if k > bound:
                raise BoundExceeded(f"element order exceeds {bound}")
        return k

    def rows(self) -> list:
        return [list(r) for r in self.m]

    def __eq__(self, other):
        return isinstance(other, GroupElement) and self.m == other.m

    def __hash__(self):
        if self._h is None:
            self._h = hash(self.m)
        return self._h

    def __repr__(self):
        return f"GroupElement({[[str(x) for x in r] for r in self.m]})"


class FiniteMatrixGroup:
    """A finite group given by generators, with its full element list.

    ``elements[0]`` is the identity; elements appear in breadth-first order.
    """

    def __init__(self, ring: CoeffRing, n: int, generators: list, elements: list):
        self.ring = ring
        self.n = n
        self.generators = list(generators)
        self.elements = list(elements)
        self._index = {g: i for i, g in enumerate(self.elements)}
        self._orders = {}

    @property
    def order(self) -> int:
        return len(self.elements)

    def element_order(self, g: GroupElement) -> int:
        if g not in self._orders:
            self._orders[g] = g.order(self.order)
        return self._orders[g]

    @property
    def exponent(self) -> int:
        e = 1
        for g in self.elements:
            k = self.element_order(g)
            e = e * k // math.gcd(e, k)
        return e

    def index_of(self, g: GroupElement) -> int:
        return self._index[g]

    def __contains__(self, g) -> bool:
        return g in self._index

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def cyclic_generator(self):
        """An element of order |G| (the first in element order) or None."""
        for g in self.elements:
            if self.element_order(g) == self.order:
                return g
        return None

    def is_cyclic(self) -> bool:
        return self.cyclic_generator() is not None

    def subgroup(self, gens) -> "FiniteMatrixGroup":
        return generate_closure(gens, self.ring, bound=self.order, n=self.n)

    def is_subgroup_of(self, other: "FiniteMatrixGroup") -> bool:
        return all(g in other for g in self.elements)

    def left_coset_representatives(self, H: "FiniteMatrixGroup") -> list:
        reps = []
        seen = set()
        for g in self.elements:
            if g in seen:
                continue
            reps.append(g)
            for h in H.elements:
                seen.add(g * h)
        return reps

    def conjugate(self, B) -> "FiniteMatrixGroup":
        """The group B G B^-1 for an invertible matrix B over the same ring."""
        b = B if isinstance(B, GroupElement) else GroupElement(B, self.ring)
        binv = b.inverse()
        return generate_closure([b * g * binv for g in self.generators], self.ring, bound=self.order, n=self.n)

    def describe(self) -> dict:
        return {
            "ring": self.ring.describe(),
            "generators": [[[self.ring.format(x) for x in r] for r in g.m] for g in self.generators],
            "order": self.order,
            "exponent": self.exponent,
        }

    def __repr__(self):
        return f"FiniteMatrixGroup(order={self.order}, ring={self.ring})"


def generate_closure(gens, ring: CoeffRing, bound: int = 1000, n: int | None = None) -> FiniteMatrixGroup:
    """Breadth-first closure of the generators under multiplication.

    Raises BoundExceeded when more than ``bound`` elements appear.
    """
    elems = [g if isinstance(g, GroupElement) else GroupElement(g, ring) for g in gens]
    if n is None:
        if not elems:
            raise InvalidInput("need a generator or an explicit dimension")
        n = elems[0].n
    if any(g.n != n for g in elems):
        raise InvalidInput("generators have different sizes")
    ident = GroupElement.identity(n, ring)
    out = [ident]
    seen = {ident}
    queue = [ident]
    i = 0
    while i < len(queue):
        x = queue[i]
        i += 1
        for s in elems:
            y = x * s
            if y not in seen:
                seen.add(y)
                out.append(y)
                queue.append(y)
                if len(out) > bound:
                    raise BoundExceeded(f"group has more than {bound} elements (or is infinite)")
    return FiniteMatrixGroup(ring, n, elems, out)


def _p_part(n: int, p: int) -> int:
    out = 1
    while n % p == 0:
        n //= p
        out *= p
    return out


def _is_p_power(n: int, p: int) -> bool:
    return _p_part(n, p) == n


def sylow_subgroup(G: FiniteMatrixGroup, p: int) -> FiniteMatrixGroup:
    """A Sylow p-subgroup, grown greedily from p-elements."""
    if G.order > SYLOW_BOUND:
        raise DeskBoundExceeded(f"|G| = {G.order} exceeds the Sylow search bound {SYLOW_BOUND}")
    target = _p_part(G.order, p)
    H = generate_closure([], G.ring, n=G.n)
    if target == 1:
        return H
    p_elems = [g for g in G.elements if not g.is_identity() and _is_p_power(G.element_order(g), p)]
    grown = True
    while H.order < target and grown:
        grown = False
        for x in p_elems:
            if x in H:
                continue
            K = generate_closure(H.generators + [x], G.ring, bound=G.order, n=G.n)
            if _is_p_power(K.order, p):
                H = K
                grown = True
                if H.order == target:
                    break
    if H.order != target:
        raise ArithmeticError("Sylow search did not reach the p-part")
    return H


@dataclass
class GradedActionMatrix:
    degree: int
    matrix: list
    basis: list


def symmetric_power_matrix(g, d: int, ring: CoeffRing | None = None) -> GradedActionMatrix:
    """Matrix of g on degree-d forms, columns indexed by monomials in lex order."""
    if isinstance(g, GroupElement):
        rows, ring = g.m, g.ring
    else:
        if ring is None:
            raise InvalidInput("a ring is needed for raw matrices")
        rows = [[ring.elem(x) for x in r] for r in g]
    n = len(rows)
    basis = monomials(n, d)
    zero = ring.zero
    cols = [Poly.monomial(m, ring.one).act(rows).vector(d, zero) for m in basis]
    k = len(basis)
    return GradedActionMatrix(d, [[cols[j][i] for j in range(k)] for i in range(k)], basis)


def reduction_kernel(G: FiniteMatrixGroup, ring: CoeffRing | None = None) -> FiniteMatrixGroup:
    """Subgroup of elements congruent to the identity modulo the designated prime."""
    ring = ring or G.ring
    if not ring.localized and ring.uniformizer() is None:
        raise InvalidInput("reduction needs a designated prime")
    keep = []
    for g in G.elements:
        ok = True
        for i, r in enumerate(g.m):
            for j, x in enumerate(r):
                y = x - 1 if i == j else x
                if y and ring.valuation(y) < 1:
                    ok = False
        if ok:
            keep.append(g)
    return FiniteMatrixGroup(ring, G.n, [g for g in keep if not g.is_identity()], keep)


def reduction_case(G: FiniteMatrixGroup, ring: CoeffRing | None = None) -> str:
    """'trivial', 'proper' or 'whole' according to the reduction kernel."""
    K = reduction_kernel(G, ring)
    if K.order == 1:
        return "trivial"
    if K.order == G.order:
        return "whole"
    return "proper"
