import itertools
import math

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from invring.exact_linalg import (
    LatticeSolver,
    PolyDomain,
    cokernel_invariant_factors,
    determinant,
    hermite_normal_form,
    integer_kernel_basis,
    invariant_factors,
    mat_mul,
    smith_normal_form,
)
from invring.fields import FpPoly

matrices = st.integers(1, 4).flatmap(
    lambda m: st.integers(1, 4).flatmap(
        lambda n: st.lists(st.lists(st.integers(-12, 12), min_size=n, max_size=n), min_size=m, max_size=m)
    )
)


def is_row_hnf(H):
    """Echelon, positive pivots, entries above each pivot in [0, pivot)."""
    last = -1
    zero_seen = False
    for i, row in enumerate(H):
        nz = [j for j, x in enumerate(row) if x]
        if not nz:
            zero_seen = True
            continue
        if zero_seen:
            return False
        c = nz[0]
        if c <= last or row[c] <= 0:
            return False
        if any(not (0 <= H[k][c] < row[c]) for k in range(i)):
            return False
        last = c
    return True


def determinantal_divisors(A):
    """Invariant factors from gcds of k x k minors (independent oracle)."""
    M = sympy.Matrix(A)
    out, prev = [], 1
    for k in range(1, min(M.shape) + 1):
        g = 0
        for rows in itertools.combinations(range(M.rows), k):
            for cols in itertools.combinations(range(M.cols), k):
                g = math.gcd(g, int(M.extract(list(rows), list(cols)).det()))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


@pytest.mark.parametrize(
    "A, H",
    [
        ([[2, 0], [0, 3]], [[2, 0], [0, 3]]),
        ([[0, 0], [0, 0]], [[0, 0], [0, 0]]),
    ],
)
def test_hnf_examples(A, H):
    got, U = hermite_normal_form(A)
    assert got == H
    assert mat_mul(U, A) == got


def test_hnf_reduces_entries_above_pivots():
    # the row lattice of [[2,4],[6,8]] is spanned by (2,0) and (0,4)
    H, U = hermite_normal_form([[2, 4], [6, 8]])
    assert H == [[2, 0], [0, 4]]
    assert abs(sympy.Matrix(U).det()) == 1
    assert is_row_hnf(H)
    # the unreduced form [[2,4],[0,4]] spans the same lattice
    assert sympy.Matrix([[2, 4], [0, 4]]).det() == sympy.Matrix(H).det()


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_hnf_properties(A):
    H, U = hermite_normal_form(A)
    assert mat_mul(U, A) == H
    assert abs(sympy.Matrix(U).det()) == 1
    assert is_row_hnf(H)


@pytest.mark.parametrize(
    "A, factors",
    [
        ([[2, 0], [0, 3]], [1, 6]),
        ([[1, 0, 0], [0, 1, 0], [0, 0, 1]], [1, 1, 1]),
        ([[2, 4], [6, 8]], [2, 4]),
    ],
)
def test_snf_examples(A, factors):
    s = smith_normal_form(A)
    assert s.invariant_factors == factors
    assert mat_mul(mat_mul(s.U, A), s.V) == s.D


@settings(max_examples=120, deadline=None)
@given(matrices)
def test_snf_matches_determinantal_divisors(A):
    s = smith_normal_form(A)
    assert mat_mul(mat_mul(s.U, A), s.V) == s.D
    assert abs(sympy.Matrix(s.U).det()) == 1 and abs(sympy.Matrix(s.V).det()) == 1
    facs = [f for f in s.invariant_factors if f]
    assert all(b % a == 0 for a, b in zip(facs, facs[1:]))
    assert facs == determinantal_divisors(A)


@pytest.mark.parametrize(
    "A, basis",
    [
        ([[1, 1], [1, 1]], [[1, -1]]),
        ([[1, 0], [0, 1]], []),
        ([[0, 0], [0, 0]], [[1, 0], [0, 1]]),
    ],
)
def test_kernel_examples(A, basis):
    assert integer_kernel_basis(A) == basis


@settings(max_examples=100, deadline=None)
@given(matrices)
def test_kernel_is_saturated_and_complete(A):
    K = integer_kernel_basis(A)
    n = len(A[0])
    assert len(K) == n - sympy.Matrix(A).rank()
    for v in K:
        assert all(r[0] == 0 for r in mat_mul(A, [[a] for a in v]))
    if K:
        # saturated: the kernel basis has invariant factors all 1
        assert all(f == 1 for f in invariant_factors(K))


@pytest.mark.parametrize(
    "A, rank, torsion, free",
    [
        ([[2, 0], [0, 3]], 2, [6], 0),
        ([[2 if i == j else 0 for j in range(4)] for i in range(4)], 4, [2, 2, 2, 2], 0),
        ([], 2, [], 2),
    ],
)
def test_cokernel_examples(A, rank, torsion, free):
    c = cokernel_invariant_factors(A, rank)
    assert c.torsion == torsion and c.free_rank == free


def test_solver_handles_dependent_generators():
    s = LatticeSolver([[2], [3]], 1)
    x = s.solve([1])
    assert 2 * x[0] + 3 * x[1] == 1
    assert LatticeSolver([[2, 0], [0, 4]], 2).solve([1, 0]) is None


@settings(max_examples=100, deadline=None)
@given(matrices, st.lists(st.integers(-5, 5), min_size=4, max_size=4))
def test_solver_round_trip(A, coeffs):
    y = [sum(c * row[j] for c, row in zip(coeffs, A)) for j in range(len(A[0]))]
    x = LatticeSolver(A, len(A[0])).solve(y)
    assert x is not None
    assert [sum(c * row[j] for c, row in zip(x, A)) for j in range(len(A[0]))] == y


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_determinant_matches_sympy(A):
    assert determinant(A) == sympy.Matrix(A).det()


def test_polynomial_domain_snf():
    dom = PolyDomain(3)
    t = FpPoly.t(3)
    one = FpPoly.const(3, 1)
    s = smith_normal_form([[t, one], [0 * t, t]], domain=dom)
    # det = t^2 and gcd of entries = 1, so the factors are 1 and t^2
    assert [f.degree() for f in s.invariant_factors] == [0, 2]
