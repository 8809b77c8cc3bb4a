"""Cohen-Macaulay certification of S = R^G through a degree bound.

Two independent tests:

* freeness of S over A[theta1, theta2] for a homogeneous system of
  parameters, checked with the Koszul complex degree by degree
  (S/(theta)S torsion-free and no Koszul relations);
* positivity of the depth of H^1(G, R): search for an element acting
  injectively on the computed H^1, and separately for a socle class killed by
  the maximal homogeneous ideal.

Every verdict holds only through the stated degree bound.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations

from .coeff_rings import CYCLOTOMIC, INTEGERS, CoeffRing
from .cohomology import CrossedHomData, CyclicComplex, _componentwise, module_complex, polynomial_module
from .errors import DegenerateParameters, InvalidInput, TorsionRelationFound
from .exact_linalg import field_det
from .group_action import FiniteMatrixGroup, GroupElement, generate_closure, sylow_subgroup
from .invariants import (
    GradedData,
    GradedInvariantData,
    algebra_generators,
    multiplication_matrix,
    scalar_matrix,
    vector_to_poly,
)
from .lattice import Lattice, complement_basis, integral_vector, mat_apply, preimage, tie_break_key
from .polynomial import Poly, monomials


# ---------------------------------------------------------------------------
# Parameters
# ---------------------------------------------------------------------------


@dataclass
class HSOP:
    theta_pi: object
    theta1: Poly
    theta2: Poly
    resultant: object = None
    source: str = "norm"

    @property
    def degrees(self) -> tuple:
        return (self.theta1.degree(), self.theta2.degree())

    def to_json(self, ring: CoeffRing) -> dict:
        return {
            "theta_pi": None if self.theta_pi is None else ring.format(self.theta_pi),
            "theta1": str(self.theta1),
            "theta2": str(self.theta2),
            "degrees": list(self.degrees),
            "resultant": None if self.resultant is None else ring.format(self.resultant),
            "source": self.source,
        }


def binary_form_coeffs(f: Poly, zero) -> list:
    """Coefficients of X^d, X^(d-1) Y, ..., Y^d."""
    d = f.degree()
    return [f.terms.get((d - i, i), zero) for i in range(d + 1)]


def resultant(f: Poly, g: Poly, ring: CoeffRing):
    """Resultant of two binary forms via the Sylvester determinant."""
    zero, one = ring.zero, ring.one
    a = [ring.elem(x) for x in binary_form_coeffs(f, zero)]
    b = [ring.elem(x) for x in binary_form_coeffs(g, zero)]
    m, n = len(a) - 1, len(b) - 1
    size = m + n
    if size == 0:
        return one
    rows = []
    for i in range(n):
        rows.append([zero] * i + a + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + b + [zero] * (size - n - 1 - i))
    return field_det(rows, one, zero)


def jacobian_independent(f: Poly, g: Poly, ring: CoeffRing, seed: int = 0) -> bool:
    """Jacobian determinant at a seeded random integer point is nonzero."""
    rng = random.Random(seed)
    pt = [ring.elem(rng.randint(1, 97)) for _ in range(2)]

    def d(h: Poly, i: int):
        acc = ring.zero
        for m, c in h.terms.items():
            if m[i]:
                v = c * m[i]
                for j, e in enumerate(m):
                    k = e - 1 if j == i else e
                    v = v * pt[j] ** k
                acc = acc + v
        return acc

    return bool(d(f, 0) * d(g, 1) - d(f, 1) * d(g, 0))


def _orbit_product(G: FiniteMatrixGroup, form: Poly) -> Poly:
    out = Poly.const(form.n, G.ring.one)
    for g in G.elements:
        out = out * form.act(g.m)
    return out


def _normalize(f: Poly, ring: CoeffRing) -> Poly:
    lead = f.terms[f.support()[0]]
    if lead != 1 and ring.is_unit(lead):
        return f * (ring.one / lead)
    return f


def norm_parameters(G: FiniteMatrixGroup):
    """(prod_g g.X, prod_g g.Y); raises DegenerateParameters when dependent."""
    if G.n != 2:
        raise InvalidInput("norm parameters need two variables")
    ring = G.ring
    X, Y = Poly.var(2, 0, ring.one), Poly.var(2, 1, ring.one)
    t1 = _normalize(_orbit_product(G, X), ring)
    t2 = _normalize(_orbit_product(G, Y), ring)
    for t in (t1, t2):
        if any(t.act(g.m) != t for g in G.generators):
            raise ArithmeticError("orbit product is not invariant")
    if not resultant(t1, t2, ring):
        raise DegenerateParameters(f"{t1} and {t2} have a common factor")
    if ring.characteristic == 0 and not jacobian_independent(t1, t2, ring):
        raise DegenerateParameters("Jacobian vanishes at the test point")
    return t1, t2


def _scalar_primes(G: FiniteMatrixGroup) -> list:
    """Prime elements of the coefficient ring lying over primes dividing |G|."""
    ring = G.ring
    if ring.localized:
        if ring.is_unit(G.order):
            return []
        return [ring.uniformizer()]
    if ring.kind == "polyfp":
        return [ring.uniformizer()]
    out = []
    n = G.order
    q = 2
    while n > 1:
        if n % q == 0:
            while n % q == 0:
                n //= q
            if ring.kind == CYCLOTOMIC and q == ring.p:
                out.append(ring.uniformizer())
            else:
                out.append(ring.elem(q))
        q += 1
    return out


def find_hsop(G: FiniteMatrixGroup, data: GradedInvariantData | None = None) -> HSOP:
    """Norm parameters when they form a system of parameters over A, else a search.

    A pair qualifies when its resultant is a unit of A (no common zero
    modulo any prime).  Candidates: invariant basis elements of degree at
    most |G|, their pairwise sums, and orbit products of small linear forms.
    """
    ring = G.ring
    data = data or GradedInvariantData(G)
    pis = _scalar_primes(G)
    theta_pi = pis[0] if pis else None
    try:
        t1, t2 = norm_parameters(G)
        res = resultant(t1, t2, ring)
        if ring.is_unit(res):
            return HSOP(theta_pi, t1, t2, res, "norm")
    except DegenerateParameters:
        pass
    cands = []
    for d in range(1, G.order + 1):
        basis = data.basis_polys(d)
        cands.extend(basis)
        cands.extend(a + b for a, b in combinations(basis, 2))
    X, Y = Poly.var(2, 0, ring.one), Poly.var(2, 1, ring.one)
    for a, b in [(1, 1), (1, -1), (1, 2), (2, 1), (1, -2)]:
        cands.append(_normalize(_orbit_product(G, X * a + Y * b), ring))
    seen = []
    for c in cands:
        if c and c not in seen:
            seen.append(c)
    pairs = sorted(combinations(range(len(seen)), 2), key=lambda ij: (seen[ij[0]].degree() + seen[ij[1]].degree(), ij))
    for i, j in pairs:
        f, g = seen[i], seen[j]
        res = resultant(f, g, ring)
        if res and ring.is_unit(res):
            return HSOP(theta_pi, f, g, res, "search")
    raise DegenerateParameters("no system of parameters found among the candidates")


# ---------------------------------------------------------------------------
# Regular sequences
# ---------------------------------------------------------------------------


@dataclass
class RegularSequenceReport:
    regular: bool
    degree_bound: int
    failing_index: int | None = None
    failing_degree: int | None = None

    def __bool__(self):
        return self.regular

    def to_json(self) -> dict:
        return {
            "regular": self.regular,
            "D": self.degree_bound,
            "failing_index": self.failing_index,
            "failing_degree": self.failing_degree,
        }


def _elem_degree(s) -> int:
    return s.degree() if isinstance(s, Poly) else 0


def _mult(ring: CoeffRing, s, n: int, d: int):
    if isinstance(s, Poly):
        return multiplication_matrix(ring, s, n, d)
    return scalar_matrix(ring, s, n, d)


def _ideal_piece(data: GradedData, elems, d: int) -> Lattice:
    ring = data.ring
    gens = []
    for s in elems:
        e = _elem_degree(s)
        if d - e < 0:
            continue
        src = data.piece(d - e)
        F = _mult(ring, s, data.nvars, d - e)
        for b in src.basis:
            v = mat_apply(F, b)
            if any(v):
                gens.append(integral_vector(ring, v))
    return Lattice(ring, data.dim(d), gens)


def regular_sequence_check(data: GradedData, seq, D: int) -> RegularSequenceReport:
    """Each element is a nonzerodivisor on S modulo the previous ones, degrees <= D."""
    ring = data.ring
    seq = [s if isinstance(s, Poly) else ring.elem(s) for s in seq]
    for k, s in enumerate(seq):
        e = _elem_degree(s)
        prev = seq[:k]
        for d in range(e, D + 1):
            src = data.piece(d - e)
            if src.rank == 0:
                continue
            target = _ideal_piece(data, prev, d)
            F = _mult(ring, s, data.nvars, d - e)
            pre = preimage(ring, F, src, target)
            base = _ideal_piece(data, prev, d - e)
            if not pre.quotient(base).is_zero():
                return RegularSequenceReport(False, D, k, d)
    return RegularSequenceReport(True, D)


# ---------------------------------------------------------------------------
# Freeness
# ---------------------------------------------------------------------------


@dataclass
class FreenessCertificate:
    generator_degrees: list
    generators: list
    parameter_degrees: tuple
    degree_bound: int
    hilbert: list
    residual: list

    @property
    def ok(self) -> bool:
        return not any(self.residual)

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "generator_degrees": self.generator_degrees,
            "generators": [str(g) for g in self.generators],
            "parameter_degrees": list(self.parameter_degrees),
            "D": self.degree_bound,
            "hilbert": self.hilbert,
            "residual": self.residual,
        }


def _free_series(gen_degrees, d1: int, d2: int, D: int) -> list:
    out = [0] * (D + 1)
    for e in gen_degrees:
        for a in range(0, D + 1):
            for b in range(0, D + 1):
                t = e + a * d1 + b * d2
                if t > D:
                    break
                out[t] += 1
            if e + a * d1 > D:
                break
    return out


def _koszul_h1_zero(data: GradedData, t1: Poly, t2: Poly, d: int) -> bool:
    ring = data.ring
    n = data.nvars
    e1, e2 = t1.degree(), t2.degree()
    A, B = data.piece(d - e1), data.piece(d - e2)
    if A.rank == 0 or B.rank == 0:
        return True
    da, db = data.dim(d - e1), data.dim(d - e2)
    F1 = multiplication_matrix(ring, t1, n, d - e1)
    F2 = multiplication_matrix(ring, t2, n, d - e2)
    F = [r1 + r2 for r1, r2 in zip(F1, F2)]
    zero = ring.base.zero
    src = Lattice(ring, da + db, [list(v) + [zero] * db for v in A.basis] + [[zero] * da + list(v) for v in B.basis])
    K = preimage(ring, F, src, Lattice.zero(ring, data.dim(d)))
    if K.rank == 0:
        return True
    C = data.piece(d - e1 - e2)
    gens = []
    if C.rank:
        G2 = multiplication_matrix(ring, t2, n, d - e1 - e2)
        G1 = multiplication_matrix(ring, t1, n, d - e1 - e2)
        for v in C.basis:
            top = mat_apply(G2, v)
            bot = [-x for x in mat_apply(G1, v)]
            gens.append(integral_vector(ring, top + bot))
    im = Lattice(ring, da + db, gens)
    return K.quotient(im).is_zero()


def freeness_certificate(data: GradedData, theta1: Poly, theta2: Poly, D: int) -> FreenessCertificate:
    """Certify that S is free over A[theta1, theta2] through degree D.

    Raises TorsionRelationFound when S/(theta)S has torsion ("torsion") or
    the Koszul complex has a relation ("relation") in some degree <= D.
    """
    ring = data.ring
    e1, e2 = theta1.degree(), theta2.degree()
    if e1 < 1 or e2 < 1:
        raise InvalidInput("parameters must have positive degree")
    gen_degrees, gens = [], []
    hilbert = []
    for d in range(D + 1):
        S = data.piece(d)
        hilbert.append(S.rank // ring.degree)
        M = Lattice(ring, data.dim(d), data.product_lattice(theta1, d).basis + data.product_lattice(theta2, d).basis) if S.rank else S
        q = S.quotient(M)
        if q.torsion:
            raise TorsionRelationFound(d, "torsion", f"S/(theta)S has torsion {[str(t) for t in q.torsion]}")
        if not _koszul_h1_zero(data, theta1, theta2, d):
            raise TorsionRelationFound(d, "relation", "Koszul H_1 is nonzero")
        if q.free_rank:
            cands = sorted(data.o_basis_vectors(d), key=lambda v: tie_break_key(v, ring))
            for b in complement_basis(ring, S, M, cands):
                gens.append(vector_to_poly(ring, b, data.nvars, d))
                gen_degrees.append(d)
    predicted = _free_series(gen_degrees, e1, e2, D)
    residual = [h - p for h, p in zip(hilbert, predicted)]
    return FreenessCertificate(gen_degrees, gens, (e1, e2), D, hilbert, residual)


# ---------------------------------------------------------------------------
# Depth of H^1
# ---------------------------------------------------------------------------


@dataclass
class DepthH1Report:
    status: str  # "multiplier", "socle", "inconclusive", "vacuous"
    degree_bound: int
    multiplier: str | None = None
    multiplier_degree: int | None = None
    window: int | None = None
    socle_degree: int | None = None
    socle_class: list | None = None
    h1_sizes: dict = field(default_factory=dict)
    reason: str = ""

    @property
    def positive(self) -> bool:
        return self.status in ("multiplier", "vacuous")

    @property
    def has_socle(self) -> bool:
        return self.status == "socle"

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "D": self.degree_bound,
            "multiplier": self.multiplier,
            "multiplier_degree": self.multiplier_degree,
            "window": self.window,
            "socle_degree": self.socle_degree,
            "socle_class": self.socle_class,
            "h1": {str(k): v for k, v in sorted(self.h1_sizes.items())},
            "reason": self.reason,
        }


class H1Data:
    """Graded H^1 presented as Z_n / B_n with multiplication by ring elements."""

    def __init__(self, ring: CoeffRing, nvars: int, complex_fn, copies: int = 1):
        self.ring = ring
        self.nvars = nvars
        self._complex_fn = complex_fn
        self._cache = {}
        self.copies = copies

    def complex(self, n: int):
        if n not in self._cache:
            self._cache[n] = self._complex_fn(n)
        return self._cache[n]

    def is_zero(self, n: int) -> bool:
        c = self.complex(n)
        return c.Z.quotient(c.B).is_zero()

    def size(self, n: int) -> list:
        c = self.complex(n)
        q = c.Z.quotient(c.B)
        return [str(t) for t in q.torsion] + (["free^%d" % (q.free_rank // self.ring.degree)] if q.free_rank else [])

    def mult(self, s, n: int):
        F = _mult(self.ring, s, self.nvars, n)
        src = self.complex(n)
        return _componentwise(F, src, None) if isinstance(src, CrossedHomData) else F

    def kernel_of(self, s, n: int, within: Lattice | None = None) -> Lattice:
        """Classes in Z_n (or ``within``) sent into B_{n + deg s} by s."""
        e = _elem_degree(s)
        src = within if within is not None else self.complex(n).Z
        return preimage(self.ring, self.mult(s, n), src, self.complex(n + e).B)


def presented_h1_data(ring: CoeffRing, nvars: int, relations) -> H1Data:
    """Graded module R_n / relations(n) standing in for H^1 (synthetic inputs)."""
    def complex_fn(n):
        dim = len(monomials(nvars, n)) * ring.degree
        rel = relations(n)
        return CyclicComplex(Lattice.full(ring, dim), rel if rel is not None else Lattice.zero(ring, dim))

    return H1Data(ring, nvars, complex_fn)


def group_h1_data(G: FiniteMatrixGroup) -> H1Data:
    M = polynomial_module(G)
    return H1Data(G.ring, G.n, lambda n: module_complex(M, 1, n))


def depth_search(h1: H1Data, D: int, multipliers, socle_scalars, socle_gens) -> DepthH1Report:
    """Search an injective multiplier and, separately, a socle class, through D."""
    sizes = {n: h1.size(n) for n in range(D + 1)}
    nonzero = [n for n in range(D + 1) if sizes[n]]
    if not nonzero:
        return DepthH1Report("vacuous", D, h1_sizes=sizes, reason="H^1 vanishes through D")
    report = DepthH1Report("inconclusive", D, h1_sizes=sizes)
    for s in multipliers:
        e = _elem_degree(s)
        window = [n for n in nonzero if n + e <= D]
        if not window:
            continue
        ok = True
        for n in window:
            if not h1.kernel_of(s, n).quotient(h1.complex(n).B).is_zero():
                ok = False
                break
        if ok:
            report.status = "multiplier"
            report.multiplier = str(s)
            report.multiplier_degree = e
            report.window = D - e
            break
    gmax = max((_elem_degree(a) for a in socle_gens), default=0)
    for n in nonzero:
        if n + gmax > D:
            continue
        A = h1.complex(n).Z
        for c in socle_scalars:
            A = h1.kernel_of(c, n, A)
        for a in socle_gens:
            A = h1.kernel_of(a, n, A)
        B = h1.complex(n).B
        if not A.quotient(B).is_zero():
            witness = next(v for v in A.basis if not B.local_contains(v))
            if report.status == "multiplier":
                raise ArithmeticError("injective multiplier and socle class coexist")
            report.status = "socle"
            report.socle_degree = n
            report.socle_class = [str(x) for x in witness]
            break
    if report.status == "inconclusive":
        report.reason = "no injective multiplier among the candidates"
    return report


def depth_h1_positive(G: FiniteMatrixGroup, D: int, hsop: HSOP | None = None, data: GradedInvariantData | None = None) -> DepthH1Report:
    """Depth test on H^1(G, R) through degree D."""
    ring = G.ring
    if ring.is_unit(G.order):
        return DepthH1Report("vacuous", D, reason=f"|G| = {G.order} is a unit")
    data = data or GradedInvariantData(G)
    scalars = _scalar_primes(G)
    invs = []
    for d in range(1, min(G.order, D) + 1):
        invs.extend(sorted(data.basis_polys(d), key=lambda f: (f.support(), str(f))))
    cands = list(scalars)
    if hsop is not None:
        cands.extend([hsop.theta1, hsop.theta2])
    cands.extend(invs)
    cands.extend(a + b for a, b in combinations(invs, 2) if a.degree() == b.degree())
    gens = [f for _, f in algebra_generators(G, D, data)]
    return depth_search(group_h1_data(G), D, cands, scalars, gens)


# ---------------------------------------------------------------------------
# a-invariant and verdict
# ---------------------------------------------------------------------------


@dataclass
class AInvariantReport:
    numerator: list
    parameter_degrees: tuple
    a: int
    in_class: bool

    def to_json(self) -> dict:
        return {"numerator": self.numerator, "parameter_degrees": list(self.parameter_degrees), "a": self.a, "a_le_minus_2": self.in_class}


def a_invariant(cert: FreenessCertificate) -> AInvariantReport:
    """a = (top generator degree) - d1 - d2, from the rational Hilbert series."""
    if not cert.ok:
        raise InvalidInput("a-invariant needs a valid freeness certificate")
    top = max(cert.generator_degrees)
    num = [0] * (top + 1)
    for e in cert.generator_degrees:
        num[e] += 1
    d1, d2 = cert.parameter_degrees
    a = top - d1 - d2
    return AInvariantReport(num, (d1, d2), a, a <= -2)


@dataclass
class CMVerdict:
    group: dict
    ring: dict
    degree_bound: int
    hsop: dict | None
    freeness: dict
    depth_h1: dict
    agree: bool
    verdict: str
    a_invariant: dict | None = None
    regular_sequence: dict | None = None
    sylow: dict | None = None

    @property
    def certified(self) -> bool:
        return self.verdict == "CM"

    def to_json(self) -> dict:
        out = {
            "group": self.group,
            "ring": self.ring,
            "D": self.degree_bound,
            "hsop": self.hsop,
            "freeness": self.freeness,
            "depth_h1": self.depth_h1,
            "agree": self.agree,
            "verdict": self.verdict,
        }
        if self.a_invariant is not None:
            out["a_invariant"] = self.a_invariant
        if self.regular_sequence is not None:
            out["regular_sequence"] = self.regular_sequence
        if self.sylow is not None:
            out["sylow"] = self.sylow
        return out


def cm_check(G: FiniteMatrixGroup, D: int | None = None, sylow: bool = False) -> CMVerdict:
    """Run both tests and compare them.  Verdict "CM" means certified through D."""
    if G.n != 2:
        raise InvalidInput("cm-check supports two variables")
    if D is None:
        D = 3 * G.order
    sylow_info = None
    target = G
    ring = G.ring
    if sylow and ring.localized and ring.residue_characteristic and G.order % ring.residue_characteristic == 0:
        H = sylow_subgroup(G, ring.residue_characteristic)
        if H.order < G.order:
            target = H
            sylow_info = {"prime": ring.residue_characteristic, "order": H.order, "index": G.order // H.order}
    data = GradedInvariantData(target)
    hsop = find_hsop(target, data)
    try:
        cert = freeness_certificate(data, hsop.theta1, hsop.theta2, D)
        free_ok = cert.ok
        freeness = cert.to_json()
    except TorsionRelationFound as exc:
        cert = None
        free_ok = False
        freeness = {"ok": False, "failure": exc.kind, "degree": exc.degree, "detail": exc.detail}
    depth = depth_h1_positive(target, D, hsop, data)
    agree = free_ok == (not depth.has_socle)
    a_rep = a_invariant(cert).to_json() if cert is not None and cert.ok else None
    reg = None
    if free_ok:
        seq = [hsop.theta1, hsop.theta2] + ([hsop.theta_pi] if hsop.theta_pi is not None else [])
        reg = regular_sequence_check(data, seq, D).to_json()
    verdict = "CM" if free_ok else "not CM"
    return CMVerdict(
        group=target.describe(),
        ring=ring.describe(),
        degree_bound=D,
        hsop=hsop.to_json(ring),
        freeness=freeness,
        depth_h1=depth.to_json(),
        agree=agree,
        verdict=verdict,
        a_invariant=a_rep,
        regular_sequence=reg,
        sylow=sylow_info,
    )
