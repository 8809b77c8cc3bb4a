"""Group cohomology of graded modules: the periodic complex for cyclic groups
and crossed homomorphisms for H^1 of small groups.

Modules may be presented as L / Rel with L = base^dim (restricted
coordinates) and Rel a G-stable sub-lattice; this covers R_n and R_n / pi R_n.
Torsion is reported as invariant factors over the base PID (after
localization); free rank is reported over the coefficient ring.

>>> from .coeff_rings import CoeffRing
>>> Z = CoeffRing.integers()
>>> cyclic_cohomology([[-1, 0], [0, -1]], 2, 1, Z).torsion
[2, 2]
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .coeff_rings import CoeffRing
from .errors import DeskBoundExceeded, InvalidInput, OrderMismatch, PreconditionFailed
from .exact_linalg import Cokernel
from .group_action import FiniteMatrixGroup, GroupElement, generate_closure, symmetric_power_matrix
from .lattice import Lattice, image_lattice, preimage, restrict_matrix
from .polynomial import monomials

CROSSED_HOM_BOUND = 24


def _kmat_mul(A, B, zero):
    n, k, m = len(A), len(B), len(B[0]) if B else 0
    return [[sum((A[i][l] * B[l][j] for l in range(k) if A[i][l] and B[l][j]), zero) for j in range(m)] for i in range(n)]


def _kid(N, one, zero):
    return [[one if i == j else zero for j in range(N)] for i in range(N)]


def _to_cokernel(ring: CoeffRing, q: Cokernel) -> Cokernel:
    return Cokernel(list(q.torsion), q.free_rank // ring.degree)


@dataclass
class CyclicComplex:
    """Cocycle and coboundary lattices of the periodic complex in one degree."""

    Z: Lattice
    B: Lattice

    def group(self, ring: CoeffRing) -> Cokernel:
        return _to_cokernel(ring, self.Z.quotient(self.B))


def _check_order(sigma, m: int, ring: CoeffRing):
    N = len(sigma)
    one, zero = ring.one, ring.zero
    P = _kid(N, one, zero)
    for _ in range(m):
        P = _kmat_mul(P, sigma, zero)
    if P != _kid(N, one, zero):
        raise OrderMismatch(f"sigma^{m} is not the identity")


def cyclic_complex(sigma, m: int, i: int, ring: CoeffRing, relations: Lattice | None = None, check: bool = True) -> CyclicComplex:
    """Cocycles and coboundaries for H^i of a cyclic group of order m.

    ``sigma`` is the matrix of the generator on the degree piece (columns are
    images).  ``relations`` presents the module as a quotient.
    """
    if i < 0:
        raise InvalidInput("cohomological index must be nonnegative")
    sigma = [[ring.elem(x) for x in r] for r in sigma]
    N = len(sigma)
    dim = N * ring.degree
    one, zero = ring.one, ring.zero
    if check and N:
        _check_order(sigma, m, ring)
    rel = relations if relations is not None else Lattice.zero(ring, dim)
    full = Lattice.full(ring, dim)
    if N == 0:
        return CyclicComplex(full, full)
    S = restrict_matrix(ring, [[sigma[a][b] - (one if a == b else zero) for b in range(N)] for a in range(N)], N)
    tr = _kid(N, zero, zero)
    P = _kid(N, one, zero)
    for _ in range(m):
        tr = [[x + y for x, y in zip(r1, r2)] for r1, r2 in zip(tr, P)]
        P = _kmat_mul(P, sigma, zero)
    T = restrict_matrix(ring, tr, N)
    if i == 0:
        return CyclicComplex(preimage(ring, S, full, rel), rel)
    if i % 2 == 1:
        Z = preimage(ring, T, full, rel)
        B = image_lattice(ring, S, full, dim).add(rel.basis)
    else:
        Z = preimage(ring, S, full, rel)
        B = image_lattice(ring, T, full, dim).add(rel.basis)
    return CyclicComplex(Z, B)


def cyclic_cohomology(sigma, m: int, i: int, ring: CoeffRing, relations: Lattice | None = None) -> Cokernel:
    """H^i of the cyclic group of order m generated by ``sigma``.

    i = 0: invariants; i odd: ker Tr / im(sigma - 1); i even: ker(sigma - 1) / im Tr.
    """
    return cyclic_complex(sigma, m, i, ring, relations).group(ring)


@dataclass
class CrossedHomData:
    Z: Lattice
    B: Lattice
    dim: int
    order: int

    def group(self, ring: CoeffRing) -> Cokernel:
        return _to_cokernel(ring, self.Z.quotient(self.B))


def crossed_hom_complex(G: FiniteMatrixGroup, action, ring: CoeffRing, relations: Lattice | None = None, all_pairs: bool = False) -> CrossedHomData:
    """Z^1 and B^1 for the module with ``action(g)`` the matrix of g.

    Unknowns are f(g) for every group element.  By default the cocycle
    identity is imposed for (generator, element) pairs together with
    f(1) = 0, which is equivalent to imposing it for all pairs.
    """
    if G.order > CROSSED_HOM_BOUND:
        raise DeskBoundExceeded(f"|G| = {G.order} exceeds the crossed-homomorphism bound {CROSSED_HOM_BOUND}")
    mats = {g: [[ring.elem(x) for x in r] for r in action(g)] for g in G.elements}
    N = len(mats[G.elements[0]])
    k = ring.degree
    dim = N * k
    order = G.order
    total = order * dim
    rel = relations if relations is not None else Lattice.zero(ring, dim)
    if N == 0:
        full = Lattice.full(ring, 0)
        return CrossedHomData(full, full, 0, order)
    one, zero = ring.one, ring.zero
    restricted = {g: restrict_matrix(ring, mats[g], N) for g in G.elements}
    idx = {g: i for i, g in enumerate(G.elements)}
    firsts = G.generators if not all_pairs else G.elements
    firsts = [s for s in firsts if s in idx]
    rows = []
    # f(1) = 0
    e0 = idx[G.elements[0]]
    for a in range(dim):
        r = [0] * total
        r[e0 * dim + a] = 1
        rows.append(r)
    for s in firsts:
        Ms = restricted[s]
        for h in G.elements:
            sh = s * h
            for a in range(dim):
                r = [0] * total
                for b in range(dim):
                    if Ms[a][b]:
                        r[idx[h] * dim + b] = r[idx[h] * dim + b] + Ms[a][b]
                r[idx[sh] * dim + a] = r[idx[sh] * dim + a] - 1
                r[idx[s] * dim + a] = r[idx[s] * dim + a] + 1
                rows.append(r)
    nconds = len(rows) // dim
    rel_big = Lattice(ring, len(rows), _block_copies(rel.basis, nconds, dim)) if rel.rank else Lattice.zero(ring, len(rows))
    Z = preimage(ring, rows, Lattice.full(ring, total), rel_big)
    # coboundaries g -> g m - m, plus relations in every slot
    d0 = []
    for g in G.elements:
        Mg = restricted[g]
        for a in range(dim):
            d0.append([Mg[a][b] - (1 if a == b else 0) for b in range(dim)])
    B = image_lattice(ring, d0, Lattice.full(ring, dim), total)
    if rel.rank:
        B = B.add(_block_copies(rel.basis, order, dim))
    return CrossedHomData(Z, B, dim, order)


def _block_copies(basis, copies: int, dim: int) -> list:
    out = []
    for c in range(copies):
        for v in basis:
            w = [0] * (copies * dim)
            w[c * dim:(c + 1) * dim] = v
            out.append(w)
    return out


def h1_crossed_homomorphisms(G: FiniteMatrixGroup, action, ring: CoeffRing | None = None, relations: Lattice | None = None, all_pairs: bool = False) -> Cokernel:
    """H^1(G, M) as Z^1 / B^1."""
    ring = ring or G.ring
    return crossed_hom_complex(G, action, ring, relations, all_pairs).group(ring)


def trivial_action_cohomology(k: int, p: int, i: int) -> Cokernel:
    """H^i of a group of order p acting trivially on (F_p)^k, computed from the complex."""
    from .fields import is_prime

    if not is_prime(p):
        raise PreconditionFailed(f"{p} is not prime")
    if i < 0:
        raise PreconditionFailed("index must be nonnegative")
    ring = CoeffRing.integers()
    rel = Lattice(ring, k, [[p if a == b else 0 for b in range(k)] for a in range(k)])
    sigma = [[1 if a == b else 0 for b in range(k)] for a in range(k)]
    return cyclic_cohomology(sigma, p, i, ring, rel)


# ---------------------------------------------------------------------------
# Graded modules
# ---------------------------------------------------------------------------


class GradedGModule:
    """A graded module with a G-action, presented degreewise as L_n / Rel_n."""

    def __init__(self, group: FiniteMatrixGroup, rank, action, relations=None, name: str = ""):
        self.group = group
        self.ring = group.ring
        self._rank = rank
        self._action = action
        self._relations = relations
        self.name = name

    def rank(self, n: int) -> int:
        return self._rank(n) if n >= 0 else 0

    def action(self, g: GroupElement, n: int):
        return self._action(g, n)

    def relations(self, n: int):
        if self._relations is None or n < 0:
            return None
        return self._relations(n)


def polynomial_module(G: FiniteMatrixGroup) -> GradedGModule:
    """R = A[X_1..X_n] with the linear action."""
    nv = G.n
    cache = {}

    def action(g, n):
        key = (g, n)
        if key not in cache:
            cache[key] = symmetric_power_matrix(g, n).matrix
        return cache[key]

    return GradedGModule(G, lambda n: len(monomials(nv, n)), action, name="R")


def reduction_module(G: FiniteMatrixGroup, scalar=None) -> GradedGModule:
    """R / c R for a scalar c (default: the designated prime)."""
    ring = G.ring
    c = ring.elem(scalar if scalar is not None else ring.uniformizer())
    base = polynomial_module(G)
    k = ring.degree

    def rel(n):
        N = len(monomials(G.n, n))
        mm = ring.mult_matrix(c)
        gens = []
        for i in range(N):
            for j in range(k):
                v = [0] * (N * k)
                for a in range(k):
                    v[i * k + a] = mm[a][j]
                gens.append(_integral(ring, v))
        return Lattice(ring, N * k, gens)

    return GradedGModule(G, base.rank, base.action, rel, name=f"R/({ring.format(c)})R")


def _integral(ring, v):
    from .lattice import integral_vector

    return integral_vector(ring, v)


def module_complex(M: GradedGModule, i: int, n: int):
    """Lattices (Z, B) computing H^i(G, M_n); cyclic route when G is cyclic."""
    G = M.group
    sigma = G.cyclic_generator()
    if sigma is not None:
        return cyclic_complex(M.action(sigma, n), G.order, i, M.ring, M.relations(n), check=False)
    if i == 0:
        action = lambda g: M.action(g, n)  # noqa: E731
        N = M.rank(n)
        ring = M.ring
        rows = []
        for g in G.generators:
            A = action(g)
            rows.extend([[A[a][b] - (1 if a == b else 0) for b in range(N)] for a in range(N)])
        dim = N * ring.degree
        rel = M.relations(n) or Lattice.zero(ring, dim)
        if not rows:
            return CyclicComplex(Lattice.full(ring, dim), rel)
        S = restrict_matrix(ring, rows, N)
        big_rel = Lattice(ring, len(S), _block_copies(rel.basis, len(G.generators), dim)) if rel.rank else Lattice.zero(ring, len(S))
        return CyclicComplex(preimage(ring, S, Lattice.full(ring, dim), big_rel), rel)
    if i == 1:
        return crossed_hom_complex(G, lambda g: M.action(g, n), M.ring, M.relations(n))
    raise NotImplementedError("H^i for i >= 2 is only implemented for cyclic groups")


def module_cohomology(M: GradedGModule, i: int, n: int) -> Cokernel:
    if n < 0 or M.rank(n) == 0:
        return Cokernel([], 0)
    return module_complex(M, i, n).group(M.ring)


@dataclass
class CohomologyTable:
    """H^i(G, M_n) for a range of (i, n), in ascending (i, n) order."""

    entries: dict = field(default_factory=dict)

    def rows(self) -> list:
        return [
            {"i": i, "n": n, "torsion": [str(t) for t in c.torsion], "free_rank": c.free_rank}
            for (i, n), c in sorted(self.entries.items())
        ]

    def total(self, i: int) -> Cokernel:
        tors, free = [], 0
        for (j, n), c in sorted(self.entries.items()):
            if j == i:
                tors.extend(c.torsion)
                free += c.free_rank
        return Cokernel(tors, free)

    def __getitem__(self, key):
        return self.entries[key]


def graded_assembly(table_rows) -> CohomologyTable:
    """Assemble per-degree results ``((i, n), Cokernel)`` into a table."""
    table = CohomologyTable()
    for key, val in table_rows:
        if key in table.entries:
            raise InvalidInput(f"duplicate entry {key}")
        table.entries[key] = val
    return table


def cohomology_table(M: GradedGModule, indices, degrees) -> CohomologyTable:
    return graded_assembly(((i, n), module_cohomology(M, i, n)) for i in indices for n in degrees)


def hilbert90_annihilators(M: GradedGModule, invariant_polys, D: int) -> dict:
    """For each n <= D with H^1_n nonzero, find an invariant of positive degree killing it.

    Returns {n: description or None}; None marks degrees to review (no
    annihilator inside the window), which is a flag and not a failure.
    """
    from .invariants import multiplication_matrix

    ring = M.ring
    out = {}
    for n in range(D + 1):
        if M.rank(n) == 0:
            continue
        cx = module_complex(M, 1, n)
        if cx.Z.quotient(cx.B).is_zero():
            continue
        found = None
        for s in invariant_polys:
            e = s.degree()
            if e <= 0 or n + e > D:
                continue
            target = module_complex(M, 1, n + e)
            F = _componentwise(multiplication_matrix(ring, s, M.group.n, n), cx, target)
            if all(_in(target.B, _apply(F, z)) for z in cx.Z.basis):
                found = str(s)
                break
        out[n] = found
    return out


def _componentwise(F, src, target):
    """Block-diagonal copy of F when the complexes are crossed-hom data."""
    if isinstance(src, CrossedHomData):
        copies = src.order
        rows, cols = len(F), len(F[0]) if F else 0
        big = [[0] * (cols * copies) for _ in range(rows * copies)]
        for c in range(copies):
            for a in range(rows):
                for b in range(cols):
                    big[c * rows + a][c * cols + b] = F[a][b]
        return big
    return F


def _apply(F, v):
    out = []
    for r in F:
        acc = 0
        for a, x in zip(r, v):
            if a and x:
                acc = acc + a * x
        out.append(acc)
    return out


def _in(lat: Lattice, v) -> bool:
    from .lattice import integral_vector

    if not any(v):
        return True
    return lat.local_contains(integral_vector(lat.ring, v))
