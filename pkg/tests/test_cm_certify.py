import pytest
import sympy

from invring.cm_certify import (
    a_invariant,
    cm_check,
    depth_h1_positive,
    depth_search,
    find_hsop,
    freeness_certificate,
    jacobian_independent,
    norm_parameters,
    presented_h1_data,
    regular_sequence_check,
    resultant,
)
from invring.coeff_rings import CoeffRing
from invring.errors import InvalidInput, TorsionRelationFound
from invring.fields import Cyc
from invring.group_action import generate_closure
from invring.invariants import GradedInvariantData, IdealData, PolynomialRingData, hilbert_function
from invring.lattice import Lattice
from invring.polynomial import Poly, monomials

Z = CoeffRing.integers()
s = sympy.Symbol("s")


def xy(ring):
    return Poly.var(2, 0, ring.one), Poly.var(2, 1, ring.one)


def zeta_group(a, b, localize=False):
    O = CoeffRing.cyclotomic(3, localize=localize)
    z = Cyc.zeta(3)
    return generate_closure([[[z**a, 0], [0, z**b]]], O)


def series_ranks(gen_degrees, d1, d2, D):
    """Coefficients of sum t^e / ((1-t^d1)(1-t^d2)) from sympy (independent oracle)."""
    f = sum(s**e for e in gen_degrees) / ((1 - s**d1) * (1 - s**d2))
    ser = sympy.series(f, s, 0, D + 1).removeO()
    return [int(ser.coeff(s, k)) for k in range(D + 1)]


def test_norm_parameters_minus_identity():
    t1, t2 = norm_parameters(generate_closure([[[-1, 0], [0, -1]]], Z))
    X, Y = xy(Z)
    assert {t1, t2} == {X * X, Y * Y}


def test_norm_parameters_diagonal_cyclotomic():
    G = zeta_group(1, 2)
    X, Y = xy(G.ring)
    assert norm_parameters(G) == (X**3, Y**3)


def test_norm_parameters_trivial_group():
    T = generate_closure([], Z, n=2)
    X, Y = xy(Z)
    assert norm_parameters(T) == (X, Y)


@pytest.mark.parametrize(
    "gens",
    [
        [[[0, -1], [1, -1]]],
        [[[0, -1], [1, 0]]],
        [[[0, -1], [1, 1]]],
        [[[1, 0], [0, -1]]],
    ],
)
def test_hsop_is_invariant_and_independent(gens):
    G = generate_closure(gens, Z)
    h = find_hsop(G)
    for t in (h.theta1, h.theta2):
        assert all(t.act(g.m) == t for g in G.generators)
    assert Z.is_unit(resultant(h.theta1, h.theta2, Z))
    assert jacobian_independent(h.theta1, h.theta2, Z)


def test_resultant_matches_sympy():
    X, Y = xy(Z)
    f = X * X + X * Y * 3 + Y * Y * 2
    g = X * X * X - Y * Y * Y
    x = sympy.Symbol("x")
    want = sympy.resultant(x**2 + 3 * x + 2, x**3 - 1, x)
    assert resultant(f, g, Z) == want


def test_regular_sequence_examples():
    R = PolynomialRingData(Z)
    X, Y = xy(Z)
    assert regular_sequence_check(R, [X, Y], 6).regular
    rep = regular_sequence_check(R, [X, X], 6)
    assert not rep.regular and rep.failing_index == 1 and rep.failing_degree == 1
    G = zeta_group(1, 2, localize=True)
    S = GradedInvariantData(G)
    X, Y = xy(G.ring)
    assert regular_sequence_check(S, [X**3, Y**3, G.ring.uniformizer()], 9).regular


def test_regular_sequence_detects_nonregular_scalar():
    # X kills the class of 2 modulo (2X)
    R = PolynomialRingData(Z)
    X, Y = xy(Z)
    assert not regular_sequence_check(R, [X * 2, X], 4).regular


@pytest.mark.parametrize(
    "group, d, degrees",
    [
        ("minus_identity", 2, [0, 2]),
        ("veronese", 3, [0, 3, 3]),
        ("hypersurface", 3, [0, 2, 4]),
    ],
)
def test_freeness_examples(group, d, degrees):
    G = {
        "minus_identity": lambda: generate_closure([[[-1, 0], [0, -1]]], Z),
        "veronese": lambda: zeta_group(1, 1),
        "hypersurface": lambda: zeta_group(1, 2),
    }[group]()
    X, Y = xy(G.ring)
    cert = freeness_certificate(GradedInvariantData(G), X**d, Y**d, 12)
    assert cert.ok
    assert cert.generator_degrees == degrees
    ranks = series_ranks(degrees, d, d, 12)
    assert cert.hilbert == ranks
    assert hilbert_function(G, 12).values == ranks


def test_freeness_refuted_by_torsion_and_relations():
    X, Y = xy(Z)
    with pytest.raises(TorsionRelationFound) as exc:
        freeness_certificate(IdealData(Z, [X, Y]), X, Y, 4)
    assert exc.value.kind == "relation" and exc.value.degree == 2
    with pytest.raises(TorsionRelationFound) as exc:
        freeness_certificate(IdealData(Z, [Poly.const(2, 2), X]), X, Y, 4)
    assert exc.value.kind == "torsion" and exc.value.degree == 1


@pytest.mark.parametrize(
    "degrees, d, a",
    [
        ([0], (1, 1), -2),
        ([0, 3, 3], (3, 3), -3),
        ([0, 2, 4], (3, 3), -2),
    ],
)
def test_a_invariant_examples(degrees, d, a):
    if degrees == [0]:
        X, Y = xy(Z)
        cert = freeness_certificate(PolynomialRingData(Z), X, Y, 6)
    else:
        G = zeta_group(1, 1) if degrees == [0, 3, 3] else zeta_group(1, 2)
        X, Y = xy(G.ring)
        cert = freeness_certificate(GradedInvariantData(G), X**3, Y**3, 9)
    rep = a_invariant(cert)
    assert rep.parameter_degrees == d
    assert rep.a == a and rep.in_class


def test_depth_examples():
    rep = depth_h1_positive(generate_closure([[[-1, 0], [0, -1]]], Z), 8)
    assert rep.status == "multiplier"
    assert depth_h1_positive(generate_closure([[[0, -1], [1, -1]]], CoeffRing.integers(2)), 8).status == "vacuous"
    rep = depth_h1_positive(zeta_group(1, 1, localize=True), 9)
    assert rep.status in ("multiplier", "vacuous")
    assert rep.positive


def test_depth_minus_identity_multiplier_is_injective_by_hand():
    # H^1 of <-I> is R_n / 2R_n in odd degrees; X^2 is injective there
    G = generate_closure([[[-1, 0], [0, -1]]], Z)
    rep = depth_h1_positive(G, 8)
    for n in range(9):
        want = ["2"] * (n + 1) if n % 2 else []
        assert rep.h1_sizes[n] == want


def _socle_fixture(n):
    dim = len(monomials(2, n))
    if n == 0:
        return Lattice(Z, dim, [[2]])
    return Lattice.full(Z, dim)


def test_socle_fixture_is_detected():
    h1 = presented_h1_data(Z, 2, _socle_fixture)
    X, Y = xy(Z)
    rep = depth_search(h1, 4, [X, Y, X + Y], [2], [X, Y])
    assert rep.status == "socle" and rep.socle_degree == 0 and rep.has_socle


def test_free_control_has_multiplier():
    # F_2[X, Y] as a graded module: X is injective, and nothing is a socle class
    h1 = presented_h1_data(Z, 2, lambda n: Lattice(Z, n + 1, [[2 if i == j else 0 for j in range(n + 1)] for i in range(n + 1)]))
    X, Y = xy(Z)
    rep = depth_search(h1, 4, [X], [2], [X, Y])
    assert rep.status == "multiplier" and rep.multiplier == "X"


@pytest.mark.parametrize(
    "gens, D",
    [
        ([[[0, -1], [1, 0]]], 16),
        ([[[0, -1], [1, -1]]], 12),
    ],
)
def test_cm_check_catalog_examples(gens, D):
    v = cm_check(generate_closure(gens, Z), D)
    assert v.certified and v.agree
    assert v.regular_sequence["regular"]
    assert v.a_invariant["a"] <= -2


def test_cm_check_equicharacteristic():
    F = CoeffRing.poly(3, localize=True)
    G = generate_closure([[[1, 1], [0, 1]]], F)
    v = cm_check(G, 9)
    assert v.certified and v.agree
    assert v.freeness["generator_degrees"] == [0, 1, 2]


def test_cm_check_conjugation_invariance():
    G = generate_closure([[[0, -1], [1, -1]]], Z)
    B = [[2, 1], [1, 1]]
    a, b = cm_check(G, 9), cm_check(G.conjugate(B), 9)
    assert a.verdict == b.verdict and a.agree and b.agree
    assert a.freeness["hilbert"] == b.freeness["hilbert"]
    assert a.freeness["generator_degrees"] == b.freeness["generator_degrees"]


def test_cm_check_rejects_three_variables():
    G = generate_closure([[[-1, 0, 0], [0, -1, 0], [0, 0, -1]]], Z)
    with pytest.raises(InvalidInput):
        cm_check(G, 4)


def test_cm_check_default_bound():
    v = cm_check(generate_closure([[[-1, 0], [0, -1]]], Z))
    assert v.degree_bound == 6
