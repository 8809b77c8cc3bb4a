"""Exact Hermite and Smith normal forms over Z and F_p[t].

Every routine takes an optional ``domain`` describing the Euclidean ring
(``ZZ`` by default, or ``PolyDomain(p)``).  Matrices are lists of rows.
Empty matrices are legal; their shape is carried by :class:`IntMatrix`
or by explicit ``nrows`` / ``ncols`` arguments.

>>> hermite_normal_form([[2, 4], [6, 8]])[0]
[[2, 0], [0, 4]]
>>> smith_normal_form([[2, 0], [0, 3]]).D
[[1, 0], [0, 6]]
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .fields import FpPoly


class IntegerDomain:
    """Z as a Euclidean domain."""

    name = "ZZ"
    zero = 0
    one = 1

    @staticmethod
    def size(a: int) -> int:
        return abs(a)

    @staticmethod
    def divmod(a: int, b: int):
        return divmod(a, b)

    @staticmethod
    def normal_unit(a: int) -> int:
        """Unit u making u * a the normalized associate."""
        return -1 if a < 0 else 1

    @staticmethod
    def is_unit(a: int) -> bool:
        return a in (1, -1)

    @staticmethod
    def coerce(a) -> int:
        if isinstance(a, Fraction):
            if a.denominator != 1:
                raise ValueError(f"{a} is not an integer")
            return a.numerator
        return int(a)

    def __repr__(self):
        return "ZZ"


class PolyDomain:
    """F_p[t] as a Euclidean domain."""

    def __init__(self, p: int):
        self.p = p
        self.name = f"F{p}[t]"
        self.zero = FpPoly(p)
        self.one = FpPoly(p, (1,))

    def size(self, a: FpPoly) -> int:
        return a.degree()

    def divmod(self, a: FpPoly, b: FpPoly):
        return divmod(a, b)

    def normal_unit(self, a: FpPoly) -> FpPoly:
        return FpPoly(self.p, (pow(a.lead(), self.p - 2, self.p),))

    def is_unit(self, a: FpPoly) -> bool:
        return a.degree() == 0

    def coerce(self, a) -> FpPoly:
        if isinstance(a, FpPoly):
            return a
        return FpPoly(self.p, (int(a),))

    def __eq__(self, other):
        return isinstance(other, PolyDomain) and other.p == self.p

    def __hash__(self):
        return hash(("F_p[t]", self.p))

    def __repr__(self):
        return f"PolyDomain({self.p})"


ZZ = IntegerDomain()


class IntMatrix:
    """Integer matrix with an explicit shape, so 0 x n and n x 0 are legal."""

    def __init__(self, data: Sequence[Sequence[int]], cols: int | None = None):
        self.data = [list(r) for r in data]
        if cols is None:
            cols = len(self.data[0]) if self.data else 0
        if any(len(r) != cols for r in self.data):
            raise ValueError("ragged matrix")
        self.cols = cols

    @property
    def rows(self) -> int:
        return len(self.data)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(identity(n), n)

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix(transpose(self.data, self.cols), self.rows)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        return IntMatrix(mat_mul(self.data, other.data, other.cols), other.cols)

    def __eq__(self, other):
        if isinstance(other, IntMatrix):
            return self.cols == other.cols and self.data == other.data
        return self.data == [list(r) for r in other]

    def __getitem__(self, i):
        return self.data[i]

    def __iter__(self):
        return iter(self.data)

    def __repr__(self):
        return f"IntMatrix({self.data}, cols={self.cols})"


@dataclass
class SmithDecomposition:
    """U * A * V = D with D diagonal and d_1 | d_2 | ..."""

    D: list
    U: list
    V: list
    invariant_factors: list = field(default_factory=list)


@dataclass
class Cokernel:
    """Finitely generated module: torsion invariant factors plus free rank."""

    torsion: list
    free_rank: int

    def is_zero(self) -> bool:
        return not self.torsion and self.free_rank == 0

    def order(self):
        out = 1
        for d in self.torsion:
            out = out * d
        return out


def _shape(A, ncols=None):
    if isinstance(A, IntMatrix):
        return A.data, A.cols
    rows = [list(r) for r in A]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    return rows, ncols


def identity(n: int, one=1, zero=0) -> list:
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def transpose(A, ncols: int | None = None) -> list:
    rows, n = _shape(A, ncols)
    return [[r[j] for r in rows] for j in range(n)]


def mat_mul(A, B, bcols: int | None = None) -> list:
    B, n = _shape(B, bcols)
    out = []
    for r in A:
        row = []
        for j in range(n):
            acc = 0
            for k, a in enumerate(r):
                if a:
                    acc = acc + a * B[k][j]
            row.append(acc)
        out.append(row)
    return out


def mat_vec(A, v) -> list:
    out = []
    for r in A:
        acc = 0
        for a, x in zip(r, v):
            if a and x:
                acc = acc + a * x
        out.append(acc)
    return out


def _row_hnf(rows, ncols, dom, trans=None) -> list:
    """In-place row-style HNF.  Returns pivot columns.

    ``trans`` (a list of rows) receives the same row operations.
    """
    m = len(rows)
    one = dom.one
    r = 0
    pivots = []
    for c in range(ncols):
        if r == m:
            break
        found = False
        while True:
            best, bsize = None, None
            for i in range(r, m):
                a = rows[i][c]
                if a:
                    s = dom.size(a)
                    if best is None or s < bsize:
                        best, bsize = i, s
            if best is None:
                break
            found = True
            if best != r:
                rows[r], rows[best] = rows[best], rows[r]
                if trans is not None:
                    trans[r], trans[best] = trans[best], trans[r]
            piv = rows[r][c]
            prow = rows[r]
            clean = True
            for i in range(r + 1, m):
                a = rows[i][c]
                if a:
                    q, rem = dom.divmod(a, piv)
                    row = rows[i]
                    for j in range(c, ncols):
                        if prow[j]:
                            row[j] = row[j] - q * prow[j]
                    if trans is not None:
                        trow, tp = trans[i], trans[r]
                        for j in range(len(tp)):
                            if tp[j]:
                                trow[j] = trow[j] - q * tp[j]
                    if rem:
                        clean = False
            if clean:
                break
        if not found:
            continue
        u = dom.normal_unit(rows[r][c])
        if u != one:
            rows[r] = [u * x for x in rows[r]]
            if trans is not None:
                trans[r] = [u * x for x in trans[r]]
        piv = rows[r][c]
        prow = rows[r]
        for i in range(r):
            a = rows[i][c]
            if a:
                q = dom.divmod(a, piv)[0]
                if q:
                    row = rows[i]
                    for j in range(c, ncols):
                        if prow[j]:
                            row[j] = row[j] - q * prow[j]
                    if trans is not None:
                        trow, tp = trans[i], trans[r]
                        for j in range(len(tp)):
                            if tp[j]:
                                trow[j] = trow[j] - q * tp[j]
        pivots.append(c)
        r += 1
    return pivots


def hermite_normal_form(A, domain=ZZ, ncols: int | None = None):
    """Row-style HNF.  Returns ``(H, U)`` with ``U * A = H`` and U unimodular.

    Pivots are normalized (positive over Z, monic over F_p[t]) and entries
    above a pivot are reduced modulo it.

    >>> hermite_normal_form([[0, 0], [0, 0]])[1]
    [[1, 0], [0, 1]]
    """
    rows, n = _shape(A, ncols)
    rows = [[domain.coerce(x) for x in r] for r in rows]
    U = identity(len(rows), domain.one, domain.zero)
    _row_hnf(rows, n, domain, U)
    return rows, U


def hnf_basis(vectors, dim: int, domain=ZZ) -> list:
    """Nonzero rows of the HNF: a canonical basis of the span."""
    rows = [[domain.coerce(x) for x in v] for v in vectors]
    piv = _row_hnf(rows, dim, domain)
    return rows[: len(piv)]


def rank(A, domain=ZZ, ncols: int | None = None) -> int:
    rows, n = _shape(A, ncols)
    rows = [list(r) for r in rows]
    return len(_row_hnf(rows, n, domain))


def _is_diagonal(D) -> bool:
    for i, r in enumerate(D):
        for j, x in enumerate(r):
            if x and i != j:
                return False
    return True


def _xgcd(a, b, dom):
    """Return (g, s, t) with s*a + t*b = g."""
    r0, r1 = a, b
    s0, s1 = dom.one, dom.zero
    t0, t1 = dom.zero, dom.one
    while r1:
        q, r = dom.divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    return r0, s0, t0


def smith_normal_form(A, domain=ZZ, ncols: int | None = None, transforms: bool = True) -> SmithDecomposition:
    """Smith normal form ``U * A * V = D``.

    >>> smith_normal_form([[2, 4], [6, 8]]).invariant_factors
    [2, 4]
    """
    rows, n = _shape(A, ncols)
    m = len(rows)
    dom = domain
    D = [[dom.coerce(x) for x in r] for r in rows]
    U = identity(m, dom.one, dom.zero) if transforms else None
    Vt = identity(n, dom.one, dom.zero) if transforms else None
    while True:
        _row_hnf(D, n, dom, U)
        if _is_diagonal(D):
            break
        Dt = transpose(D, n)
        _row_hnf(Dt, m, dom, Vt)
        D = transpose(Dt, m)
        if _is_diagonal(D):
            break
    k = min(m, n)
    r = 0
    while r < k and D[r][r]:
        r += 1
    for i in range(r):
        for j in range(i + 1, r):
            a, b = D[i][i], D[j][j]
            if dom.divmod(b, a)[1]:
                g, s, t = _xgcd(a, b, dom)
                ag = dom.divmod(a, g)[0]
                bg = dom.divmod(b, g)[0]
                D[i][i] = g
                D[j][j] = ag * b
                if transforms:
                    # rows: [i; j] <- [[s, t], [-b/g, a/g]] [i; j]
                    ri, rj = U[i], U[j]
                    U[i] = [s * x + t * y for x, y in zip(ri, rj)]
                    U[j] = [-bg * x + ag * y for x, y in zip(ri, rj)]
                    # columns: [i j] <- [i j] [[1, -t*b/g], [1, s*a/g]]
                    ci, cj = Vt[i], Vt[j]
                    Vt[i] = [x + y for x, y in zip(ci, cj)]
                    Vt[j] = [-t * bg * x + s * ag * y for x, y in zip(ci, cj)]
    for i in range(r):
        u = dom.normal_unit(D[i][i])
        if u != dom.one:
            D[i][i] = u * D[i][i]
            if transforms:
                U[i] = [u * x for x in U[i]]
    V = transpose(Vt, n) if transforms else None
    return SmithDecomposition(D, U, V, [D[i][i] for i in range(r)])


def invariant_factors(A, domain=ZZ, ncols: int | None = None) -> list:
    return smith_normal_form(A, domain, ncols, transforms=False).invariant_factors


def integer_kernel_basis(A, domain=ZZ, ncols: int | None = None) -> list:
    """Basis (rows) of {x : A x = 0}, in HNF.

    >>> integer_kernel_basis([[1, 1], [1, 1]])
    [[1, -1]]
    """
    rows, n = _shape(A, ncols)
    m = len(rows)
    At = [[domain.coerce(r[j]) for r in rows] for j in range(n)]
    U = identity(n, domain.one, domain.zero)
    piv = _row_hnf(At, m, domain, U)
    kern = U[len(piv):]
    return hnf_basis(kern, n, domain)


def cokernel_invariant_factors(A, ambient_rank: int | None = None, domain=ZZ) -> Cokernel:
    """Structure of ``ambient / column span of A``.

    >>> cokernel_invariant_factors([[2, 0], [0, 3]])
    Cokernel(torsion=[6], free_rank=0)
    >>> cokernel_invariant_factors([], 2)
    Cokernel(torsion=[], free_rank=2)
    """
    if isinstance(A, IntMatrix):
        rows, n = A.data, A.cols
        ambient_rank = A.rows if ambient_rank is None else ambient_rank
    else:
        rows = [list(r) for r in A]
        if ambient_rank is None:
            ambient_rank = len(rows)
        n = len(rows[0]) if rows else 0
    if not rows:
        rows = [[] for _ in range(ambient_rank)]
    facs = invariant_factors(rows, domain, n)
    torsion = [d for d in facs if not domain.is_unit(d)]
    return Cokernel(torsion, ambient_rank - len(facs))


def quotient_structure(sub_gens, basis_dim: int, domain=ZZ) -> Cokernel:
    """Structure of ``domain^basis_dim / span(sub_gens)`` (gens given as rows)."""
    if not sub_gens:
        return Cokernel([], basis_dim)
    facs = invariant_factors(sub_gens, domain, basis_dim)
    return Cokernel([d for d in facs if not domain.is_unit(d)], basis_dim - len(facs))


class LatticeSolver:
    """Solve ``sum x_i b_i = y`` for a fixed list of generators ``b_i``.

    Generators need not be independent; the returned coordinates refer to
    them and are one particular solution.
    """

    def __init__(self, gens, dim: int, domain=ZZ):
        self.dim = dim
        self.domain = domain
        self.k = len(gens)
        self.H = [[domain.coerce(x) for x in g] for g in gens]
        self.U = identity(self.k, domain.one, domain.zero)
        self.pivots = _row_hnf(self.H, dim, domain, self.U)

    def solve(self, y):
        """Coordinates or None when y is not in the span."""
        dom = self.domain
        rest = [dom.coerce(a) for a in y]
        c = [dom.zero] * len(self.pivots)
        for i, col in enumerate(self.pivots):
            if not rest[col]:
                continue
            q, rem = dom.divmod(rest[col], self.H[i][col])
            if rem:
                return None
            c[i] = q
            row = self.H[i]
            rest = [a - q * b if b else a for a, b in zip(rest, row)]
        if any(rest):
            return None
        x = [dom.zero] * self.k
        for i, q in enumerate(c):
            if q:
                x = [a + q * b if b else a for a, b in zip(x, self.U[i])]
        return x

    def contains(self, y) -> bool:
        return self.solve(y) is not None


def determinant(A) -> int:
    """Bareiss fraction-free determinant of a square integer matrix."""
    M = [list(r) for r in A]
    n = len(M)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Matrices over a field (Fraction, Cyc, RatFunc entries)
# ---------------------------------------------------------------------------


def field_rref(rows, ncols: int, one=1):
    """Reduced row echelon form over a field.  Returns (R, pivots)."""
    R = [list(r) for r in rows]
    piv = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(R)) if R[i][c]), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        inv = one / R[r][c]
        R[r] = [x * inv for x in R[r]]
        for i in range(len(R)):
            if i != r and R[i][c]:
                f = R[i][c]
                R[i] = [a - f * b for a, b in zip(R[i], R[r])]
        piv.append(c)
        r += 1
        if r == len(R):
            break
    return R, piv


def field_kernel(rows, ncols: int, one=1, zero=0) -> list:
    """Basis of the right kernel over a field, one vector per free column."""
    R, piv = field_rref(rows, ncols, one)
    free = [c for c in range(ncols) if c not in piv]
    out = []
    for f in free:
        v = [zero] * ncols
        v[f] = one
        for i, c in enumerate(piv):
            v[c] = -R[i][f]
        out.append(v)
    return out


def field_inverse(A, one=1, zero=0) -> list:
    n = len(A)
    aug = [list(A[i]) + [one if i == j else zero for j in range(n)] for i in range(n)]
    R, piv = field_rref(aug, 2 * n, one)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise ZeroDivisionError("singular matrix")
    return [r[n:] for r in R]


def field_det(A, one=1, zero=0):
    M = [list(r) for r in A]
    n = len(M)
    det = one
    for c in range(n):
        p = next((i for i in range(c, n) if M[i][c]), None)
        if p is None:
            return zero
        if p != c:
            M[c], M[p] = M[p], M[c]
            det = -det
        det = det * M[c][c]
        inv = one / M[c][c]
        for i in range(c + 1, n):
            if M[i][c]:
                f = M[i][c] * inv
                M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    return det
