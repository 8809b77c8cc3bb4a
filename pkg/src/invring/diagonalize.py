"""Diagonalizing order-p matrices over Z[zeta_p] localized at pi = zeta - 1.

An order-p matrix congruent to the identity modulo pi is diagonalizable over
the local ring, with p-th roots of unity as eigenvalues.  The construction
is inductive: take a primitive eigenvector, complete it to a basis using a
unit coordinate, recurse on the quotient, then clear the off-diagonal row.

>>> from .fields import Cyc
>>> z = Cyc.zeta(3)
>>> r = diagonalize_order_p(DVRMatrix.of(3, [[z, z - 1], [0, 1]]))
>>> r.exponents
[1, 0]
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .coeff_rings import CoeffRing
from .errors import EvenPrime, InvalidInput, PreconditionFailed, TraceNonzero
from .exact_linalg import field_det, field_inverse, field_kernel, identity
from .fields import Cyc, pi_inverse


def _mat(ring, A):
    return [[ring.elem(x) for x in r] for r in A]


def _mul(A, B, zero):
    n, m, k = len(A), len(B[0]), len(B)
    return [[sum((A[i][l] * B[l][j] for l in range(k) if A[i][l] and B[l][j]), zero) for j in range(m)] for i in range(n)]


def _mat_pow(A, e, ring):
    out = identity(len(A), ring.one, ring.zero)
    for _ in range(e):
        out = _mul(out, A, ring.zero)
    return out


def _is_identity(A) -> bool:
    return all((x == 1) if i == j else (not x) for i, r in enumerate(A) for j, x in enumerate(r))


def _root_exponent(x, p: int):
    """k with x = zeta^k, or None."""
    for k in range(p):
        if x == Cyc.zeta(p, k):
            return k
    return None


@dataclass
class DVRMatrix:
    """Square matrix over Z[zeta_p]_(pi) of order p, congruent to I mod pi."""

    p: int
    rows: list
    ring: CoeffRing

    @classmethod
    def of(cls, p: int, rows, check: bool = True) -> "DVRMatrix":
        ring = CoeffRing.cyclotomic(p, localize=True)
        m = cls(p, _mat(ring, rows), ring)
        if check:
            m.validate()
        return m

    @property
    def size(self) -> int:
        return len(self.rows)

    def valuation_table(self) -> list:
        return [[self.ring.valuation(x) for x in r] for r in self.rows]

    def validate(self) -> None:
        ring = self.ring
        n = self.size
        if n == 0 or any(len(r) != n for r in self.rows):
            raise PreconditionFailed("matrix must be square")
        if not all(ring.contains(x) for r in self.rows for x in r):
            raise PreconditionFailed("entries must lie in the local ring")
        for i, r in enumerate(self.rows):
            for j, x in enumerate(r):
                y = x - 1 if i == j else x
                if y and ring.valuation(y) < 1:
                    raise PreconditionFailed(f"entry ({i},{j}) is not congruent to the identity mod pi")
        if not _is_identity(_mat_pow(self.rows, self.p, ring)):
            raise PreconditionFailed("matrix does not have order dividing p")

    def is_upper_triangular(self) -> bool:
        return all(not self.rows[i][j] for i in range(self.size) for j in range(i))


@dataclass
class DiagonalizationResult:
    sigma: DVRMatrix
    basis: list  # columns w_1..w_s
    exponents: list  # xi_i = zeta^exponents[i]

    @property
    def eigenvalues(self) -> list:
        return [Cyc.zeta(self.sigma.p, k) for k in self.exponents]

    def verify(self) -> None:
        ring = self.sigma.ring
        B = self.basis
        det = field_det(B, ring.one, ring.zero)
        if not ring.is_unit(det):
            raise ArithmeticError("basis matrix is not invertible over the local ring")
        Binv = field_inverse(B, ring.one, ring.zero)
        D = _mul(_mul(Binv, self.sigma.rows, ring.zero), B, ring.zero)
        for i, r in enumerate(D):
            for j, x in enumerate(r):
                want = self.eigenvalues[i] if i == j else ring.zero
                if x != want:
                    raise ArithmeticError("conjugated matrix is not the claimed diagonal")

    def transcript(self) -> dict:
        ring = self.sigma.ring
        B = self.basis
        Binv = field_inverse(B, ring.one, ring.zero)
        D = _mul(_mul(Binv, self.sigma.rows, ring.zero), B, ring.zero)
        return {
            "sigma": [[ring.format(x) for x in r] for r in self.sigma.rows],
            "B": [[ring.format(x) for x in r] for r in B],
            "exponents": self.exponents,
            "det_B": ring.format(field_det(B, ring.one, ring.zero)),
            "B_inv_sigma_B": [[ring.format(x) for x in r] for r in D],
        }


def _primitive(ring: CoeffRing, v: list) -> list:
    """Scale a nonzero vector by a power of pi so its minimal valuation is 0."""
    v = [ring.elem(x) for x in v]
    m = min(ring.valuation(x) for x in v if x)
    c = (pi_inverse(ring.p) if m > 0 else ring.uniformizer()) ** abs(m)
    return [x * c for x in v]


def _eigen_exponent(ring: CoeffRing, A: list, p: int) -> int:
    """Exponent of the eigenvalue to split off first."""
    n = len(A)
    if all(not A[i][0] for i in range(1, n)):
        k = _root_exponent(A[0][0], p)
        if k is not None:
            return k
    for k in range(p):
        z = Cyc.zeta(p, k)
        M = [[A[i][j] - (z if i == j else ring.zero) for j in range(n)] for i in range(n)]
        if not field_det(M, ring.one, ring.zero):
            return k
    raise PreconditionFailed("no p-th root of unity is an eigenvalue")


def _diagonalize(ring: CoeffRing, A: list, p: int):
    n = len(A)
    zero, one = ring.zero, ring.one
    k = _eigen_exponent(ring, A, p)
    xi = Cyc.zeta(p, k)
    M = [[A[i][j] - (xi if i == j else zero) for j in range(n)] for i in range(n)]
    ker = field_kernel(M, n, one, zero)
    w1 = _primitive(ring, ker[0])
    piv = next(i for i, x in enumerate(w1) if x and ring.valuation(x) == 0)
    B0 = identity(n, one, zero)
    for i in range(n):
        B0[i][piv] = w1[i]
    # order columns as (w1, e_i for i != piv)
    order = [piv] + [i for i in range(n) if i != piv]
    B0 = [[r[c] for c in order] for r in B0]
    if n == 1:
        return B0, [k]
    B0inv = field_inverse(B0, one, zero)
    S = _mul(_mul(B0inv, A, zero), B0, zero)
    if any(S[i][0] for i in range(1, n)):
        raise ArithmeticError("first basis vector is not an eigenvector")
    tau = [r[1:] for r in S[1:]]
    C, exps = _diagonalize(ring, tau, p)
    # basis: w1, then B0 columns 1.. combined by C
    rest = _mul([r[1:] for r in B0], C, zero)
    row = _mul([S[0][1:]], C, zero)[0]
    cols = [[B0[i][0] for i in range(n)]]
    for j, eta_k in enumerate(exps):
        r = row[j]
        col = [rest[i][j] for i in range(n)]
        if r:
            if eta_k == k:
                raise ArithmeticError("nonzero coupling between equal eigenvalues")
            d = r / (Cyc.zeta(p, eta_k) - xi)
            if not ring.contains(d):
                raise ArithmeticError("off-diagonal correction is not integral")
            col = [c + d * w for c, w in zip(col, cols[0])]
        cols.append(col)
    B = [[cols[j][i] for j in range(n)] for i in range(n)]
    return B, [k] + exps


def diagonalize_order_p(sigma: DVRMatrix, p: int | None = None) -> DiagonalizationResult:
    """Basis B over the local ring with B^-1 sigma B diagonal; verified exactly."""
    if p is not None and p != sigma.p:
        raise InvalidInput("prime does not match the matrix ring")
    sigma.validate()
    if not sigma.is_upper_triangular():
        exps = []
        ring = sigma.ring
        for k in range(sigma.p):
            z = Cyc.zeta(sigma.p, k)
            M = [[x - (z if i == j else ring.zero) for j, x in enumerate(r)] for i, r in enumerate(sigma.rows)]
            exps.extend([k] * len(field_kernel(M, sigma.size, ring.one, ring.zero)))
        if len(set(exps)) != sigma.size:
            raise PreconditionFailed("non-triangular input with repeated eigenvalues; conjugate it to upper-triangular form first")
    B, exps = _diagonalize(sigma.ring, sigma.rows, sigma.p)
    res = DiagonalizationResult(sigma, B, exps)
    res.verify()
    return res


@dataclass
class CoboundaryResult:
    theta: list
    u: list

    def to_json(self, ring: CoeffRing) -> dict:
        return {"theta": [ring.format(x) for x in self.theta], "u": [ring.format(x) for x in self.u]}


def solve_coboundary(result: DiagonalizationResult, u) -> CoboundaryResult:
    """theta with sigma(theta) - theta = pi * u, for u of trace zero."""
    sigma = result.sigma
    ring, p = sigma.ring, sigma.p
    u = [ring.elem(x) for x in u]
    Binv = field_inverse(result.basis, ring.one, ring.zero)
    a = [sum((Binv[i][j] * u[j] for j in range(len(u)) if u[j]), ring.zero) for i in range(len(u))]
    trace = [ring.elem(p) * a[i] if result.exponents[i] == 0 else ring.zero for i in range(len(a))]
    if any(trace):
        raise TraceNonzero(f"trace of u in the eigenbasis is {[ring.format(x) for x in trace]}")
    pi = ring.uniformizer()
    coeffs = []
    for ai, k in zip(a, result.exponents):
        if k == 0:
            coeffs.append(ring.zero)
        else:
            c = (Cyc.zeta(p, k) - 1) / pi
            coeffs.append(ai / c)
    theta = [sum((result.basis[i][j] * coeffs[j] for j in range(len(coeffs)) if coeffs[j]), ring.zero) for i in range(len(u))]
    s_theta = [sum((sigma.rows[i][j] * theta[j] for j in range(len(theta)) if theta[j]), ring.zero) for i in range(len(theta))]
    if any(st - t - pi * x for st, t, x in zip(s_theta, theta, u)):
        raise ArithmeticError("coboundary check failed")
    if not all(ring.contains(x) for x in theta):
        raise ArithmeticError("theta is not integral")
    return CoboundaryResult(theta, u)


@dataclass
class NormalForm2x2:
    kind: str  # "diagonal" or "unipotentlike"
    matrix: list
    change: list
    p: int

    def to_json(self) -> dict:
        ring = CoeffRing.cyclotomic(self.p, localize=True)
        return {
            "kind": self.kind,
            "matrix": [[ring.format(x) for x in r] for r in self.matrix],
            "change": [[ring.format(x) for x in r] for r in self.change],
        }


def normal_form_2x2(tau, p: int) -> NormalForm2x2:
    """Reduce [[eps, a], [0, eps^-1]] to a diagonal or an off-diagonal-1 form."""
    if p == 2:
        raise EvenPrime("the normal form needs an odd prime")
    ring = CoeffRing.cyclotomic(p, localize=True)
    T = _mat(ring, tau)
    if len(T) != 2 or any(len(r) != 2 for r in T) or T[1][0]:
        raise PreconditionFailed("expected an upper-triangular 2x2 matrix")
    eps, a, eps_inv = T[0][0], T[0][1], T[1][1]
    k = _root_exponent(eps, p)
    if k is None or k == 0 or eps * eps_inv != 1:
        raise PreconditionFailed("diagonal must be (eps, eps^-1) with eps a primitive p-th root")
    if not ring.contains(a):
        raise PreconditionFailed("off-diagonal entry is not in the local ring")
    one, zero = ring.one, ring.zero
    if not a:
        kind, C = "diagonal", identity(2, one, zero)
    elif ring.valuation(a) >= 1:
        gamma = -a / (eps - eps_inv)
        kind, C = "diagonal", [[one, gamma], [zero, one]]
    else:
        kind, C = "unipotentlike", [[a, zero], [zero, one]]
    if not ring.is_unit(field_det(C, one, zero)):
        raise ArithmeticError("change of basis is not invertible")
    N = _mul(_mul(field_inverse(C, one, zero), T, zero), C, zero)
    want = [[eps, zero if kind == "diagonal" else one], [zero, eps_inv]]
    if N != want:
        raise ArithmeticError("normal form check failed")
    return NormalForm2x2(kind, N, C, p)


def random_order_p_matrix(p: int, size: int, rng: random.Random) -> DVRMatrix:
    """B diag(zeta^k) B^-1 with B upper unitriangular over Z[zeta_p]: order p, upper-triangular, = I mod pi."""
    ring = CoeffRing.cyclotomic(p, localize=True)
    one, zero = ring.one, ring.zero
    exps = [rng.randrange(p) for _ in range(size)]
    B = identity(size, one, zero)
    for i in range(size):
        for j in range(i + 1, size):
            B[i][j] = Cyc(p, [rng.randint(-2, 2) for _ in range(p - 1)])
    D = [[Cyc.zeta(p, exps[i]) if i == j else zero for j in range(size)] for i in range(size)]
    A = _mul(_mul(B, D, zero), field_inverse(B, one, zero), zero)
    return DVRMatrix.of(p, A)


def random_trace_zero_vector(result: DiagonalizationResult, rng: random.Random) -> list:
    """Random integral u whose eigenbasis coordinates vanish on eigenvalue 1."""
    ring, p = result.sigma.ring, result.sigma.p
    a = [ring.zero if k == 0 else Cyc(p, [rng.randint(-3, 3) for _ in range(p - 1)]) for k in result.exponents]
    n = len(a)
    return [sum((result.basis[i][j] * a[j] for j in range(n) if a[j]), ring.zero) for i in range(n)]
