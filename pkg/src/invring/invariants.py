"""Invariant rings R^G degree by degree, the transfer, Hilbert and Molien series.

Each degree piece is a lattice in restricted coordinates of R_d (see
:mod:`invring.lattice`); polynomials are produced from an O-basis.

>>> from .coeff_rings import CoeffRing
>>> from .group_action import generate_closure
>>> G = generate_closure([[[-1, 0], [0, -1]]], CoeffRing.integers())
>>> hilbert_function(G, 4).values
[1, 0, 3, 0, 5]
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .coeff_rings import CoeffRing
from .errors import CharacteristicPositive, IndexNotInvertible, NotHInvariant, PreconditionFailed
from .group_action import FiniteMatrixGroup, GroupElement, symmetric_power_matrix
from .lattice import (
    Lattice,
    generators_mod,
    kernel_lattice,
    lift_vector,
    o_basis,
    o_multiples,
    restrict_matrix,
    restrict_vector,
    integral_vector,
    tie_break_key,
)
from .polynomial import Poly, monomials

DEFAULT_DEGREE_BOUND = 12


def poly_to_vector(ring: CoeffRing, f: Poly, d: int) -> list:
    """Restricted integral coordinates of a homogeneous polynomial of degree d."""
    return restrict_vector(ring, f.vector(d, ring.zero))


def vector_to_poly(ring: CoeffRing, b, n: int, d: int) -> Poly:
    return Poly.from_vector(lift_vector(ring, b), n, d)


def multiplication_matrix(ring: CoeffRing, s: Poly, n: int, d: int) -> list:
    """Restricted matrix of f -> s*f from R_d to R_{d+e}."""
    e = s.degree() if s else 0
    basis = monomials(n, d)
    cols = [(s * Poly.monomial(m, ring.one)).vector(d + e, ring.zero) for m in basis]
    K = [[cols[j][i] for j in range(len(basis))] for i in range(len(cols[0]) if cols else len(monomials(n, d + e)))]
    return restrict_matrix(ring, K, len(basis))


def scalar_matrix(ring: CoeffRing, c, n: int, d: int) -> list:
    N = len(monomials(n, d))
    K = [[ring.elem(c) if i == j else ring.zero for j in range(N)] for i in range(N)]
    return restrict_matrix(ring, K, N)


class GradedData:
    """A graded sub-lattice of R = A[X_1..X_n], one lattice per degree."""

    def __init__(self, ring: CoeffRing, nvars: int, name: str = ""):
        self.ring = ring
        self.nvars = nvars
        self.name = name
        self._pieces = {}
        self._obases = {}

    def dim(self, d: int) -> int:
        return len(monomials(self.nvars, d)) * self.ring.degree if d >= 0 else 0

    def _compute(self, d: int) -> Lattice:
        raise NotImplementedError

    def piece(self, d: int) -> Lattice:
        if d < 0:
            return Lattice.zero(self.ring, 0)
        if d not in self._pieces:
            self._pieces[d] = self._compute(d)
        return self._pieces[d]

    def compute_through(self, D: int, workers: int | None = None) -> None:
        """Fill degrees 0..D, optionally in parallel; results are keyed by degree."""
        todo = [d for d in range(D + 1) if d not in self._pieces]
        if workers and workers > 1 and len(todo) > 1:
            with ThreadPoolExecutor(max_workers=workers) as ex:
                for d, lat in zip(todo, ex.map(self._compute, todo)):
                    self._pieces[d] = lat
        else:
            for d in todo:
                self.piece(d)

    @property
    def computed_through(self) -> int:
        d = -1
        while d + 1 in self._pieces:
            d += 1
        return d

    def rank(self, d: int) -> int:
        """Rank over the coefficient ring."""
        return self.piece(d).rank // self.ring.degree

    def o_basis_vectors(self, d: int) -> list:
        if d not in self._obases:
            self._obases[d] = o_basis(self.ring, self.piece(d))
        return self._obases[d]

    def basis_polys(self, d: int) -> list:
        return [vector_to_poly(self.ring, b, self.nvars, d) for b in self.o_basis_vectors(d)]

    def contains(self, f: Poly, d: int) -> bool:
        v = integral_vector(self.ring, poly_to_vector(self.ring, f, d))
        return self.piece(d).local_contains(v)

    def product_lattice(self, s: Poly, d: int) -> Lattice:
        """s * S_{d - deg s} inside R_d (restricted coordinates)."""
        e = s.degree()
        src = self.piece(d - e)
        if src.rank == 0:
            return Lattice.zero(self.ring, self.dim(d))
        gens = []
        for b in src.basis:
            f = vector_to_poly(self.ring, b, self.nvars, d - e) * s
            gens.append(integral_vector(self.ring, poly_to_vector(self.ring, f, d)))
        return Lattice(self.ring, self.dim(d), gens)


class PolynomialRingData(GradedData):
    """R itself."""

    def __init__(self, ring: CoeffRing, nvars: int = 2):
        super().__init__(ring, nvars, name="polynomial ring")

    def _compute(self, d):
        return Lattice.full(self.ring, self.dim(d))


class IdealData(GradedData):
    """The ideal of R generated by homogeneous polynomials (a graded module, not a ring)."""

    def __init__(self, ring: CoeffRing, gens: list, nvars: int = 2):
        super().__init__(ring, nvars, name="ideal")
        self.gens = [g if isinstance(g, Poly) else Poly(nvars, g) for g in gens]

    def _compute(self, d):
        out = []
        for g in self.gens:
            e = g.degree()
            if e > d:
                continue
            for m in monomials(self.nvars, d - e):
                f = g * Poly.monomial(m, self.ring.one)
                out.append(integral_vector(self.ring, poly_to_vector(self.ring, f, d)))
        return Lattice(self.ring, self.dim(d), o_multiples(self.ring, out))


class GradedInvariantData(GradedData):
    """R^G computed degreewise as the kernel of the stacked maps Sym^d(g) - I."""

    def __init__(self, group: FiniteMatrixGroup):
        super().__init__(group.ring, group.n, name="invariants")
        self.group = group

    def _compute(self, d):
        ring = self.ring
        N = len(monomials(self.nvars, d))
        stacked = []
        gens = [g for g in self.group.generators if not g.is_identity()]
        for g in gens:
            M = symmetric_power_matrix(g, d).matrix
            for i in range(N):
                stacked.append([M[i][j] - (1 if i == j else 0) for j in range(N)])
        if not stacked:
            return Lattice.full(ring, self.dim(d))
        return kernel_lattice(ring, restrict_matrix(ring, stacked, N), N * ring.degree)

    def is_invariant(self, f: Poly) -> bool:
        return all(f.act(g.m) == f for g in self.group.generators)


def invariants_in_degree(G: FiniteMatrixGroup, d: int, data: GradedInvariantData | None = None) -> list:
    """O-basis of (R_d)^G as polynomials."""
    data = data or GradedInvariantData(G)
    out = data.basis_polys(d)
    for f in out:
        if not data.is_invariant(f):
            raise ArithmeticError("computed invariant is not fixed")
    return out


def transfer(r: Poly, G: FiniteMatrixGroup, H: FiniteMatrixGroup) -> Poly:
    """Average of g.r over the cosets gH, divided by [G:H]."""
    ring = G.ring
    if not H.is_subgroup_of(G):
        raise PreconditionFailed("H is not a subgroup of G")
    if any(r.act(h.m) != r for h in H.generators):
        raise NotHInvariant("r is not fixed by H")
    index = G.order // H.order
    if not ring.is_unit(index):
        raise IndexNotInvertible(f"[G:H] = {index} is not a unit in {ring}")
    acc = Poly(r.n)
    for g in G.left_coset_representatives(H):
        acc = acc + r.act(g.m)
    return acc * (ring.one / ring.elem(index))


@dataclass
class HilbertFunctionData:
    values: list
    numerator: list | None = None
    denominators: tuple | None = None

    def to_json(self) -> dict:
        out = {"values": self.values}
        if self.numerator is not None:
            out["numerator"] = self.numerator
            out["denominators"] = list(self.denominators)
        return out


def hilbert_function(G, D: int, data: GradedData | None = None) -> HilbertFunctionData:
    if data is None:
        data = GradedInvariantData(G)
    return HilbertFunctionData([data.rank(d) for d in range(D + 1)])


def _charpoly_reversed(g: GroupElement) -> list:
    """Coefficients of det(I - t g), low to high (Faddeev-LeVerrier)."""
    ring = g.ring
    A = g.rows()
    n = len(A)
    zero, one = ring.zero, ring.one
    c = [zero] * (n + 1)
    c[n] = one
    Mk = [[zero] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I
        AM = [[sum((A[i][l] * Mk[l][j] for l in range(n)), zero) for j in range(n)] for i in range(n)]
        Mk = [[AM[i][j] + (c[n - k + 1] if i == j else zero) for j in range(n)] for i in range(n)]
        AMk = [[sum((A[i][l] * Mk[l][j] for l in range(n)), zero) for j in range(n)] for i in range(n)]
        tr = sum((AMk[i][i] for i in range(n)), zero)
        c[n - k] = -tr / k
    return list(reversed(c))


def _series_inverse(poly: list, D: int, zero, one) -> list:
    inv0 = one / poly[0]
    out = [zero] * (D + 1)
    out[0] = inv0
    for k in range(1, D + 1):
        acc = zero
        for j in range(1, min(k, len(poly) - 1) + 1):
            if poly[j]:
                acc = acc + poly[j] * out[k - j]
        out[k] = -acc * inv0
    return out


def molien_series(G: FiniteMatrixGroup, D: int) -> list:
    """Coefficients of (1/|G|) sum_g 1/det(1 - t g) through degree D."""
    ring = G.ring
    if ring.characteristic:
        raise CharacteristicPositive("Molien series needs characteristic 0")
    zero, one = ring.zero, ring.one
    total = [zero] * (D + 1)
    for g in G.elements:
        s = _series_inverse(_charpoly_reversed(g), D, zero, one)
        total = [a + b for a, b in zip(total, s)]
    out = []
    for a in total:
        v = ring.elem(a) / G.order
        if ring.kind == "cyclotomic":
            if not v.is_rational():
                raise ArithmeticError("Molien coefficient is not rational")
            v = v.c[0]
        f = Fraction(v)
        if f.denominator != 1:
            raise ArithmeticError("Molien coefficient is not an integer")
        out.append(f.numerator)
    return out


def algebra_generators(G, D: int, data: GradedData | None = None) -> list:
    """(degree, polynomial) pairs generating S through degree D."""
    if data is None:
        data = GradedInvariantData(G)
    ring = data.ring
    gens = []
    for d in range(1, D + 1):
        S = data.piece(d)
        if S.rank == 0:
            continue
        dec = []
        for e, g in gens:
            dec.extend(data.product_lattice(g, d).basis)
        M = Lattice(ring, data.dim(d), dec)
        cands = sorted(data.o_basis_vectors(d), key=lambda v: tie_break_key(v, ring))
        for b in generators_mod(ring, S, M, cands):
            gens.append((d, vector_to_poly(ring, b, data.nvars, d)))
    return gens


def invariant_linear_form(G: FiniteMatrixGroup):
    """A G-fixed linear form not divisible by t, over F_p[t]_(t) for a p-group."""
    ring = G.ring
    if ring.kind != "polyfp" or not ring.localized:
        raise PreconditionFailed("needs the ring F_p[t] localized at (t)")
    order = G.order
    while order % ring.p == 0:
        order //= ring.p
    if order != 1:
        raise PreconditionFailed(f"|G| = {G.order} is not a power of {ring.p}")
    data = GradedInvariantData(G)
    vecs = sorted(data.o_basis_vectors(1), key=lambda v: tie_break_key(v, ring))
    if not vecs:
        return None
    f = vector_to_poly(ring, vecs[0], G.n, 1)
    if not data.is_invariant(f):
        raise ArithmeticError("linear form is not fixed")
    return f
