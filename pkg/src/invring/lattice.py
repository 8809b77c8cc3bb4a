"""Lattices over the base PID with localization, via restriction of scalars.

A vector over the coefficient field of length N is restricted to a vector of
length N * ring.degree over the base field (Q or F_p(t)).  Integral
sub-lattices are held in Hermite form over the base PID (Z or F_p[t]).
For a localized ring, every structural answer (quotients, membership) is
taken after localization: invariant factors are cut down to their part at
the designated prime.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

from .coeff_rings import CYCLOTOMIC, CoeffRing
from .exact_linalg import (
    Cokernel,
    LatticeSolver,
    field_kernel,
    hnf_basis,
    integer_kernel_basis,
    invariant_factors,
)


def _int(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def restrict_vector(ring: CoeffRing, v) -> list:
    out = []
    for x in v:
        out.extend(_int(c) for c in ring.coords(x))
    return out


def lift_vector(ring: CoeffRing, b) -> list:
    k = ring.degree
    return [ring.from_coords(b[i * k:(i + 1) * k]) for i in range(len(b) // k)]


def restrict_matrix(ring: CoeffRing, M, ncols: int) -> list:
    """Block matrix over the base field; block (i, j) = multiplication by M[i][j]."""
    k = ring.degree
    out = [[0] * (ncols * k) for _ in range(len(M) * k)]
    for i, row in enumerate(M):
        for j, x in enumerate(row):
            if x:
                blk = ring.mult_matrix(x)
                for a in range(k):
                    for b in range(k):
                        if blk[a][b]:
                            out[i * k + a][j * k + b] = _int(blk[a][b])
    return out


def integral_vector(ring: CoeffRing, v) -> list:
    """Scale a base-field vector by a unit of the localized base to make it integral."""
    c = ring.clearing_factor(v)
    return [ring.to_base(x * c) for x in v]


def integral_rows(ring: CoeffRing, M) -> list:
    return [integral_vector(ring, r) for r in M]


def mat_apply(M, v, zero=0) -> list:
    out = []
    for r in M:
        acc = zero
        for a, x in zip(r, v):
            if a and x:
                acc = acc + a * x
        out.append(acc)
    return out


def kernel_lattice(ring: CoeffRing, M, ncols: int) -> "Lattice":
    """{x integral : M x = 0} for a restricted base-field matrix M."""
    rows = integral_rows(ring, [r for r in M if any(r)])
    basis = integer_kernel_basis(rows, ring.base, ncols) if rows else _identity(ring, ncols)
    return Lattice(ring, ncols, basis, is_basis=True)


def _identity(ring, n):
    dom = ring.base
    return [[dom.one if i == j else dom.zero for j in range(n)] for i in range(n)]


def localize_factors(ring: CoeffRing, facs) -> list:
    out = []
    for d in facs:
        part = ring.local_part(d)
        if part is not None:
            out.append(part)
    return out


class Lattice:
    """Sub-lattice of base^dim kept as an HNF basis (rows)."""

    def __init__(self, ring: CoeffRing, dim: int, gens, is_basis: bool = False):
        self.ring = ring
        self.dim = dim
        dom = ring.base
        gens = [list(g) for g in gens]
        self.basis = gens if is_basis else hnf_basis(gens, dim, dom)
        self._solver = None

    @classmethod
    def full(cls, ring: CoeffRing, dim: int) -> "Lattice":
        return cls(ring, dim, _identity(ring, dim), is_basis=True)

    @classmethod
    def zero(cls, ring: CoeffRing, dim: int) -> "Lattice":
        return cls(ring, dim, [], is_basis=True)

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def solver(self) -> LatticeSolver:
        if self._solver is None:
            self._solver = LatticeSolver(self.basis, self.dim, self.ring.base)
        return self._solver

    def coords(self, v):
        return self.solver.solve(v)

    def contains(self, v) -> bool:
        return self.solver.solve(v) is not None

    def add(self, gens) -> "Lattice":
        gens = list(gens)
        if not gens:
            return self
        return Lattice(self.ring, self.dim, self.basis + [list(g) for g in gens])

    def o_closure_gens(self, gens) -> list:
        """Generators closed under multiplication by the power basis of the ring."""
        return o_multiples(self.ring, gens)

    def quotient(self, sub: "Lattice") -> Cokernel:
        """Localized structure of self / sub; ``sub`` must lie in self."""
        dom = self.ring.base
        rows = []
        for v in sub.basis:
            c = self.coords(v)
            if c is None:
                raise ValueError("sub-lattice is not contained in the lattice")
            rows.append(c)
        if not rows:
            return Cokernel([], self.rank)
        facs = invariant_factors(rows, dom, self.rank)
        return Cokernel(localize_factors(self.ring, facs), self.rank - len(facs))

    def local_contains(self, v) -> bool:
        if self.contains(v):
            return True
        big = self.add([v])
        return big.quotient(self).is_zero()

    def local_equals(self, other: "Lattice") -> bool:
        """Equality after localization; requires other inside self or vice versa."""
        if self.rank != other.rank:
            return False
        try:
            return self.quotient(other).is_zero()
        except ValueError:
            return other.quotient(self).is_zero()

    def intersect(self, other: "Lattice") -> "Lattice":
        if not self.basis or not other.basis:
            return Lattice.zero(self.ring, self.dim)
        dom = self.ring.base
        k = len(self.basis)
        cols = self.basis + [[-x for x in r] for r in other.basis]
        M = [[c[i] for c in cols] for i in range(self.dim)]
        ker = integer_kernel_basis(M, dom, len(cols))
        out = []
        for y in ker:
            v = [dom.zero] * self.dim
            for a, b in zip(y[:k], self.basis):
                if a:
                    v = [s + a * t for s, t in zip(v, b)]
            out.append(v)
        return Lattice(self.ring, self.dim, out)

    def __repr__(self):
        return f"Lattice(rank={self.rank}, dim={self.dim})"


def o_multiples(ring: CoeffRing, gens) -> list:
    """For cyclotomic rings add zeta^k * g for each generator (restricted coordinates)."""
    gens = [list(g) for g in gens]
    if ring.kind != CYCLOTOMIC:
        return gens
    k = ring.degree
    out = []
    mats = [ring.mult_matrix(b) for b in ring.basis_elements()]
    for g in gens:
        for M in mats:
            v = []
            for i in range(len(g) // k):
                blk = g[i * k:(i + 1) * k]
                v.extend(_int(sum(M[a][b] * blk[b] for b in range(k) if blk[b])) for a in range(k))
            out.append([int(x) for x in v])
    return out


def image_lattice(ring: CoeffRing, F, src: "Lattice", dim: int) -> Lattice:
    """Span of F x for x in src (F a restricted base-field matrix)."""
    gens = []
    for b in src.basis:
        v = mat_apply(F, b)
        if any(v):
            gens.append(integral_vector(ring, v))
    return Lattice(ring, dim, gens)


def preimage(ring: CoeffRing, F, src: Lattice, target: Lattice) -> Lattice:
    """{x in src : F x in target}, F a restricted base-field matrix."""
    dom = ring.base
    k = src.rank
    if k == 0:
        return Lattice.zero(ring, src.dim)
    cols = [mat_apply(F, b) for b in src.basis]
    for t in target.basis:
        cols.append([-x for x in t])
    nrows = len(F)
    rows = []
    for i in range(nrows):
        r = [c[i] for c in cols]
        if any(r):
            rows.append(integral_vector(ring, r))
    if not rows:
        return src
    ker = integer_kernel_basis(rows, dom, len(cols))
    out = []
    for y in ker:
        v = [dom.zero] * src.dim
        for a, b in zip(y[:k], src.basis):
            if a:
                v = [s + a * t for s, t in zip(v, b)]
        out.append(v)
    return Lattice(ring, src.dim, out)


# ---------------------------------------------------------------------------
# O-bases
# ---------------------------------------------------------------------------


def _norm_abs(ring, blk) -> int:
    return abs(ring.from_coords(blk).norm())


def _block_index(ring, basis, k):
    for c in range(len(basis[0]) // k):
        if any(basis[0][c * k:(c + 1) * k]):
            return c
    return None


def o_basis(ring: CoeffRing, lat: Lattice) -> list:
    """A basis of an O-stable lattice over the coefficient ring (restricted vectors).

    For Z and F_p[t] this is the Hermite basis.  For Z[zeta_p] it is a
    pseudo-echelon basis: one vector per pivot coordinate whose pivot entry
    generates the projected ideal.
    """
    if ring.kind != CYCLOTOMIC:
        return [list(b) for b in lat.basis]
    k = ring.degree
    basis = [list(b) for b in lat.basis]
    out = []
    while basis:
        c = _block_index(ring, basis, k)
        heads = [b for b in basis if any(b[c * k:(c + 1) * k])]
        rest = [b for b in basis if not any(b[c * k:(c + 1) * k])]
        w = _ideal_generator(ring, heads, c, k)
        if w is None:
            raise NotImplementedError("no principal generator found for a pivot ideal of Z[zeta_p]")
        out.append(w)
        basis = hnf_basis(rest, lat.dim, ring.base) if rest else []
    return out


def _ideal_generator(ring, heads, c, k):
    blocks = [h[c * k:(c + 1) * k] for h in heads]
    if ring.localized:
        best = min(range(len(heads)), key=lambda i: (ring.valuation(ring.from_coords(blocks[i])), i))
        return heads[best]
    # the blocks of the Hermite rows form a Z-basis of the projected ideal
    from .exact_linalg import determinant

    index = abs(determinant(blocks)) if len(blocks) == k else None
    if index is None:
        return None
    bound = 2 if k <= 6 else 1
    combos = sorted(product(range(-bound, bound + 1), repeat=len(heads)), key=lambda t: (sum(map(abs, t)), [-abs(x) for x in t], [-x for x in t]))
    for coef in combos:
        if not any(coef):
            continue
        blk = [sum(a * b[j] for a, b in zip(coef, blocks)) for j in range(k)]
        if any(blk) and _norm_abs(ring, blk) == index:
            return [sum(a * h[j] for a, h in zip(coef, heads)) for j in range(len(heads[0]))]
    return None


def o_rank(ring: CoeffRing, lat: Lattice) -> int:
    return lat.rank // ring.degree


def tie_break_key(vec, ring: CoeffRing):
    """Smallest monomial support first, then smallest coefficients."""
    k = ring.degree
    n = len(vec) // k
    support = [i for i in range(n) if any(vec[i * k:(i + 1) * k])]
    sizes = []
    for x in vec:
        if ring.kind == "polyfp":
            sizes.append((x.degree(), list(x.c)) if x else (-1, []))
        else:
            sizes.append((abs(x), -x))
    return (support, sizes)


def complement_basis(ring: CoeffRing, S: Lattice, M: Lattice, candidates=None) -> list:
    """O-generators of S / M when that quotient is torsion-free.

    Prefers members of ``candidates`` (default: an O-basis of S in tie-break
    order); falls back to projecting along M with O-linear forms.
    """
    k = ring.degree
    target = (S.rank - M.rank) // k
    if target == 0:
        return []
    if candidates is None:
        candidates = sorted(o_basis(ring, S), key=lambda v: tie_break_key(v, ring))
    chosen = []
    C = M
    for cand in candidates:
        bigger = C.add(o_multiples(ring, [cand]))
        if bigger.rank > C.rank and not S.quotient(bigger).torsion:
            C = bigger
            chosen.append(list(cand))
            if len(chosen) == target:
                break
    if len(chosen) == target and S.quotient(C).is_zero():
        return chosen
    return _complement_by_projection(ring, S, M)


def _complement_by_projection(ring: CoeffRing, S: Lattice, M: Lattice) -> list:
    from .fields import Cyc

    k = ring.degree
    n = S.dim // k
    one, zero = ring.one, ring.zero
    Mvecs = [lift_vector(ring, b) for b in (o_basis(ring, M) if M.rank else [])]
    if Mvecs:
        forms = field_kernel(Mvecs, n, one, zero)
    else:
        forms = [[one if i == j else zero for j in range(n)] for i in range(n)]
    # clear denominators so forms have entries in the order
    cleared = []
    for f in forms:
        den = 1
        for x in f:
            if isinstance(x, Cyc):
                den = den * x.denominator() // _gcd(den, x.denominator())
            elif isinstance(x, Fraction):
                den = den * x.denominator // _gcd(den, x.denominator)
        cleared.append([x * den for x in f])
    F = restrict_matrix(ring, cleared, n)
    images = [integral_vector(ring, mat_apply(F, b, 0)) for b in S.basis]
    img = Lattice(ring, len(F), images)
    ys = o_basis(ring, img)
    solver = LatticeSolver(images, len(F), ring.base)
    out = []
    for y in ys:
        c = solver.solve(y)
        if c is None:
            raise ArithmeticError("projection lift failed")
        v = [0] * S.dim
        for a, b in zip(c, S.basis):
            if a:
                v = [s + a * t for s, t in zip(v, b)]
        out.append(v)
    return out


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def generators_mod(ring: CoeffRing, S: Lattice, M: Lattice, candidates=None) -> list:
    """O-generators of S / M (torsion allowed), chosen greedily then pruned."""
    if candidates is None:
        candidates = sorted(o_basis(ring, S), key=lambda v: tie_break_key(v, ring))
    chosen = []
    C = M
    for cand in candidates:
        if S.quotient(C).is_zero():
            break
        if not C.local_contains(cand):
            C = C.add(o_multiples(ring, [cand]))
            chosen.append(list(cand))
    if not S.quotient(C).is_zero():
        raise ArithmeticError("candidates do not generate the quotient")
    i = 0
    while i < len(chosen):
        rest = chosen[:i] + chosen[i + 1:]
        C2 = M.add(o_multiples(ring, rest)) if rest else M
        if S.quotient(C2).is_zero():
            chosen = rest
        else:
            i += 1
    return chosen
