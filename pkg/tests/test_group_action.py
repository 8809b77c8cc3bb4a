import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from invring.coeff_rings import CoeffRing
from invring.errors import BoundExceeded, InvalidInput, NotInvertible
from invring.fields import Cyc, FpPoly, RatFunc
from invring.group_action import (
    GroupElement,
    generate_closure,
    reduction_case,
    reduction_kernel,
    sylow_subgroup,
    symmetric_power_matrix,
)
from invring.polynomial import Poly, monomials

Z = CoeffRing.integers()
X_, Y_ = sympy.symbols("X Y")

small_matrices = st.lists(st.lists(st.integers(-3, 3), min_size=2, max_size=2), min_size=2, max_size=2)


def to_sympy(f: Poly):
    return sympy.Integer(0) + sum(sympy.Rational(str(c)) * X_**m[0] * Y_**m[1] for m, c in f.terms.items())


@pytest.mark.parametrize(
    "gens, order, exponent",
    [
        ([[[-1, 0], [0, -1]]], 2, 2),
        ([[[0, -1], [1, -1]]], 3, 3),
        ([[[0, -1], [1, 0]]], 4, 4),
        ([[[0, -1], [1, 1]]], 6, 6),
        ([[[-1, 0], [0, -1]], [[1, 0], [0, -1]]], 4, 2),
        ([[[0, -1], [1, -1]], [[0, 1], [1, 0]]], 6, 6),
    ],
)
def test_closure_orders(gens, order, exponent):
    G = generate_closure(gens, Z)
    assert G.order == order
    assert G.exponent == exponent


def test_infinite_order_hits_bound():
    with pytest.raises(BoundExceeded):
        generate_closure([[[1, 1], [0, 1]]], Z, bound=100)


def test_non_invertible_generator():
    with pytest.raises(NotInvertible):
        generate_closure([[[2, 0], [0, 1]]], Z)


def test_closure_is_a_group():
    G = generate_closure([[[0, -1], [1, -1]], [[-1, 0], [0, -1]]], Z)
    assert G.order == 6
    for g in G.elements:
        assert g.inverse() in G
        for h in G.elements:
            assert g * h in G
    rng = random.Random(0)
    for _ in range(20):
        a, b, c = (rng.choice(G.elements) for _ in range(3))
        assert (a * b) * c == a * (b * c)


@pytest.mark.parametrize("p, order", [(3, 3), (2, 2)])
def test_sylow_of_cyclic_order_six(p, order):
    G = generate_closure([[[-1, 0], [0, -1]], [[0, -1], [1, -1]]], Z)
    H = sylow_subgroup(G, p)
    assert H.order == order
    assert H.is_subgroup_of(G)


def test_sylow_of_p_group_is_whole_group():
    G = generate_closure([[[0, -1], [1, -1]]], Z)
    assert sylow_subgroup(G, 3).order == 3


def test_sylow_of_dihedral_order_eight():
    G = generate_closure([[[0, -1], [1, 0]], [[1, 0], [0, -1]]], Z)
    assert G.order == 8
    assert sylow_subgroup(G, 2).order == 8
    assert sylow_subgroup(G, 3).order == 1


def test_symmetric_power_examples():
    m = symmetric_power_matrix(GroupElement([[-1, 0], [0, -1]], Z), 2).matrix
    assert m == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    m = symmetric_power_matrix(GroupElement([[2, 0], [0, 3]], CoeffRing.integers(5)), 2).matrix
    assert m == [[4, 0, 0], [0, 6, 0], [0, 0, 9]]


def test_column_convention_over_f3():
    F = CoeffRing.poly(3)
    g = GroupElement([[1, 1], [0, 1]], F)
    X, Y = Poly.var(2, 0, F.one), Poly.var(2, 1, F.one)
    assert X.act(g.m) == X
    assert Y.act(g.m) == X + Y


@settings(max_examples=60, deadline=None)
@given(small_matrices, small_matrices, st.integers(0, 5))
def test_symmetric_power_is_multiplicative(a, b, d):
    Q = CoeffRing.integers(7)
    try:
        g, h = GroupElement(a, Q, check=False), GroupElement(b, Q, check=False)
    except InvalidInput:
        return
    left = sympy.Matrix(symmetric_power_matrix(g, d).matrix) * sympy.Matrix(symmetric_power_matrix(h, d).matrix)
    right = sympy.Matrix(symmetric_power_matrix(g * h, d).matrix)
    assert left == right


@settings(max_examples=60, deadline=None)
@given(small_matrices, st.integers(1, 4), st.data())
def test_action_matches_substitution(a, d, data):
    coeffs = data.draw(st.lists(st.integers(-3, 3), min_size=d + 1, max_size=d + 1))
    f = Poly(2, {m: c for m, c in zip(monomials(2, d), coeffs) if c})
    # g sends X_j to sum_i g[i][j] X_i
    sub = {X_: a[0][0] * X_ + a[1][0] * Y_, Y_: a[0][1] * X_ + a[1][1] * Y_}
    want = sympy.expand(to_sympy(f).subs(sub, simultaneous=True))
    assert sympy.expand(to_sympy(f.act([[Z.elem(v) for v in r] for r in a])) - want) == 0


def test_unit_determinant_of_symmetric_powers():
    G = generate_closure([[[0, -1], [1, 1]]], Z)
    for g in G.elements:
        for d in range(5):
            assert abs(sympy.Matrix(symmetric_power_matrix(g, d).matrix).det()) == 1


def test_reduction_cases():
    O = CoeffRing.cyclotomic(3, localize=True)
    z = Cyc.zeta(3)
    assert reduction_case(generate_closure([[[z, 0], [0, z]]], O)) == "whole"
    assert reduction_case(generate_closure([[[-1, 0], [0, -1]]], CoeffRing.integers(3))) == "trivial"
    assert reduction_case(generate_closure([], O, n=2)) == "trivial"
    G = generate_closure([[[z, 0], [0, z]], [[0, 1], [1, 0]]], O)
    assert reduction_case(G) == "proper"
    assert reduction_kernel(G).order == 3


def test_entries_over_localized_ring():
    Q = CoeffRing.integers(3)
    G = generate_closure([[["1/2", "3/2"], ["1/2", "-1/2"]]], Q)
    assert G.order == 2


def test_polyfp_group_with_rational_function_entries():
    F = CoeffRing.poly(3, localize=True)
    t = RatFunc(FpPoly.t(3))
    G = generate_closure([[[1, t], [0, 1]]], F)
    assert G.order == 3
