"""Named verification suites run by ``invring verify``.

Each suite returns a :class:`SuiteResult`: a list of named checks with a
pass flag and a JSON-ready detail, plus every CM verdict it produced (used
for the suite-wide agreement check between the two CM tests).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .coeff_rings import CoeffRing, factor_prime_in_cyclotomic, unramified_check
from .cm_certify import cm_check, freeness_certificate, a_invariant, regular_sequence_check, depth_h1_positive, find_hsop
from .cohomology import cohomology_table, module_cohomology, polynomial_module, trivial_action_cohomology
from .diagonalize import diagonalize_order_p, random_order_p_matrix, random_trace_zero_vector, solve_coboundary
from .fields import Cyc, is_prime
from .group_action import FiniteMatrixGroup, generate_closure
from .invariants import GradedInvariantData, hilbert_function, invariant_linear_form, molien_series
from .polynomial import Poly

SUITES = ("equi", "mixed-cyclic", "veronese", "gl2z-catalog", "unramify-quadratic")

GL2Z_CATALOG = {
    "-I": [[[-1, 0], [0, -1]]],
    "reflection": [[[1, 0], [0, -1]]],
    "order3": [[[0, -1], [1, -1]]],
    "order4": [[[0, -1], [1, 0]]],
    "order6": [[[0, -1], [1, 1]]],
}

# Extra groups used only for the agreement check between the two CM tests.
GL2Z_EXTRA = {
    "swap": [[[0, 1], [1, 0]]],
    "klein": [[[-1, 0], [0, -1]], [[1, 0], [0, -1]]],
}

QUADRATIC_FIELDS = {
    "Q(i)": ([1, 0, 1], -4),
    "Q(sqrt5)": ([-1, -1, 1], 5),
    "Q(sqrt-7)": ([2, -1, 1], -7),
}


@dataclass
class Check:
    name: str
    passed: bool
    detail: object = None

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass
class SuiteResult:
    name: str
    checks: list = field(default_factory=list)
    verdicts: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, detail=None) -> Check:
        c = Check(name, bool(passed), detail)
        self.checks.append(c)
        return c

    def to_json(self) -> dict:
        return {
            "suite": self.name,
            "ok": self.ok,
            "checks": [c.to_json() for c in self.checks],
            "verdicts": [v.to_json() for v in self.verdicts],
        }


def _divides(a: int, b: int) -> bool:
    return b % a == 0


def annihilation_check(G: FiniteMatrixGroup, indices, degrees) -> dict:
    """|G| kills every H^i (i >= 1) on R_n; free rank zero in characteristic 0."""
    M = polynomial_module(G)
    bad = []
    order = G.order
    char0 = G.ring.characteristic == 0
    for i in indices:
        for n in degrees:
            h = module_cohomology(M, i, n)
            ok = all(_divides(int(t), order) for t in h.torsion) if char0 else True
            if char0 and h.free_rank:
                ok = False
            if not ok:
                bad.append({"i": i, "n": n, "torsion": [str(t) for t in h.torsion], "free_rank": h.free_rank})
    neg = cohomology_table(M, list(indices), [-3, -2, -1])
    neg_zero = all(not e.torsion and not e.free_rank for e in neg.entries.values())
    return {"violations": bad, "negative_degrees_vanish": neg_zero, "characteristic_zero": char0}


def _verdict_ok(v) -> bool:
    return v.certified and v.agree and not any(v.freeness.get("residual", [1]))


def run_gl2z_catalog(result: SuiteResult | None = None) -> SuiteResult:
    res = result or SuiteResult("gl2z-catalog")
    Z = CoeffRing.integers()
    for name, gens in GL2Z_CATALOG.items():
        G = generate_closure(gens, Z)
        v = cm_check(G, 4 * G.order)
        res.verdicts.append(v)
        res.add(f"catalog {name} (order {G.order}) CM through D={4 * G.order}", _verdict_ok(v),
                {"generator_degrees": v.freeness.get("generator_degrees"), "depth": v.depth_h1["status"]})
        h = hilbert_function(G, 12).values
        m = molien_series(G, 12)
        res.add(f"catalog {name} ranks equal Molien coefficients through 12", h == m, {"ranks": h, "molien": m})
        ann = annihilation_check(G, [1, 2, 3], range(0, 9))
        res.add(f"catalog {name} cohomology killed by |G|", not ann["violations"] and ann["negative_degrees_vanish"], ann)
    for name, gens in GL2Z_EXTRA.items():
        G = generate_closure(gens, Z)
        v = cm_check(G, 4 * G.order)
        res.verdicts.append(v)
        res.add(f"extra {name} (order {G.order}): tests agree", v.agree, {"verdict": v.verdict, "depth": v.depth_h1["status"]})
    return res


def minus_identity_closed_form(max_n: int = 11) -> dict:
    """H^1(<-I>, R_n) against (Z/2)^(n+1) for odd n and 0 for even n; periodicity."""
    G = generate_closure(GL2Z_CATALOG["-I"], CoeffRing.integers())
    M = polynomial_module(G)
    mismatch, periodic = [], []
    for n in range(max_n + 1):
        h = module_cohomology(M, 1, n)
        want = [2] * (n + 1) if n % 2 else []
        got = [int(t) for t in h.torsion]
        if got != want or h.free_rank:
            mismatch.append({"n": n, "got": got, "want": want})
        for i in (1, 2, 3):
            a, b = module_cohomology(M, i, n), module_cohomology(M, i + 2, n)
            if (a.torsion, a.free_rank) != (b.torsion, b.free_rank):
                periodic.append({"i": i, "n": n})
    return {"mismatch": mismatch, "periodicity_failures": periodic}


def trivial_action_check() -> dict:
    """H^i of a group of order p acting trivially on (F_p)^k equals (F_p)^k."""
    bad = []
    for p in (2, 3, 5):
        for k in (1, 2, 3):
            for i in (1, 2, 3, 4):
                h = trivial_action_cohomology(k, p, i)
                if [int(t) for t in h.torsion] != [p] * k or h.free_rank:
                    bad.append({"p": p, "k": k, "i": i})
    return {"failures": bad}


def diagonalization_run(seed: int = 0, count: int = 100) -> dict:
    rng = random.Random(seed)
    diag_ok = cob_ok = 0
    failures = []
    for t in range(count):
        p = rng.choice([3, 5])
        s = rng.randint(2, 4)
        sigma = random_order_p_matrix(p, s, rng)
        try:
            r = diagonalize_order_p(sigma)
            diag_ok += 1
            solve_coboundary(r, random_trace_zero_vector(r, rng))
            cob_ok += 1
        except Exception as exc:  # recorded, the check fails
            failures.append({"trial": t, "p": p, "size": s, "error": f"{type(exc).__name__}: {exc}"})
    return {"count": count, "diagonalized": diag_ok, "coboundaries": cob_ok, "failures": failures}


def run_mixed_cyclic(seed: int = 0, result: SuiteResult | None = None) -> SuiteResult:
    res = result or SuiteResult("mixed-cyclic")
    cf = minus_identity_closed_form()
    res.add("H^1(<-I>, R_n) closed form for n <= 11", not cf["mismatch"], cf["mismatch"])
    res.add("H^(i+2) = H^i for i = 1..3", not cf["periodicity_failures"], cf["periodicity_failures"])
    tr = trivial_action_check()
    res.add("trivial action on (F_p)^k", not tr["failures"], tr["failures"])
    dg = diagonalization_run(seed)
    res.add("diagonalization of 100 random order-p matrices", dg["diagonalized"] == dg["count"], dg)
    res.add("coboundaries for 100 trace-zero vectors", dg["coboundaries"] == dg["count"], dg)
    O = CoeffRing.cyclotomic(3, localize=True)
    z = Cyc.zeta(3)
    G = generate_closure([[[z, 0], [0, z * z]]], O)
    v = cm_check(G, 12)
    res.verdicts.append(v)
    res.add("<diag(z3, z3^-1)> over Z[z3]_(pi) CM through 12", _verdict_ok(v), v.freeness.get("generator_degrees"))
    ann = annihilation_check(G, [1, 2], range(0, 7))
    res.add("<diag(z3, z3^-1)> cohomology killed by |G|", not ann["violations"] and ann["negative_degrees_vanish"], ann)
    G3 = generate_closure(GL2Z_CATALOG["order3"], CoeffRing.integers(localize=2))
    d = depth_h1_positive(G3, 6)
    res.add("order 3 over Z_(2): depth test vacuous", d.status == "vacuous", d.reason)
    return res


def run_veronese(result: SuiteResult | None = None) -> SuiteResult:
    res = result or SuiteResult("veronese")
    O = CoeffRing.cyclotomic(3, localize=True)
    z = Cyc.zeta(3)
    X, Y = Poly.var(2, 0, O.one), Poly.var(2, 1, O.one)
    for name, gens, want_deg, want_a in [
        ("veronese <diag(z3, z3)>", [[[z, 0], [0, z]]], [0, 3, 3], -3),
        ("hypersurface <diag(z3, z3^-1)>", [[[z, 0], [0, z * z]]], [0, 2, 4], -2),
    ]:
        G = generate_closure(gens, O)
        data = GradedInvariantData(G)
        cert = freeness_certificate(data, X ** 3, Y ** 3, 12)
        a = a_invariant(cert)
        res.add(f"{name}: generator degrees", cert.generator_degrees == want_deg and cert.ok, cert.to_json())
        res.add(f"{name}: a-invariant {want_a}", a.a == want_a and a.in_class, a.to_json())
        if want_a == -2:
            reg = regular_sequence_check(data, [X ** 3, Y ** 3, O.uniformizer()], 12)
            res.add(f"{name}: X^3, Y^3, pi regular through 12", reg.regular, reg.to_json())
        v = cm_check(G, 12)
        res.verdicts.append(v)
        res.add(f"{name}: CM through 12, tests agree", _verdict_ok(v), v.depth_h1["status"])
    return res


def run_equi(result: SuiteResult | None = None) -> SuiteResult:
    res = result or SuiteResult("equi")
    F = CoeffRing.poly(3, localize=True)
    G = generate_closure([[[1, 1], [0, 1]]], F)
    form = invariant_linear_form(G)
    fixed = form is not None and form.degree() == 1 and all(form.act(g.m) == form for g in G.elements)
    res.add("invariant linear form", fixed, str(form))
    v = cm_check(G, 9)
    res.verdicts.append(v)
    res.add("<[[1,1],[0,1]]> over F_3[t]_(t) CM through 9", _verdict_ok(v), v.freeness.get("generator_degrees"))
    h = hilbert_function(G, 6).values
    res.add("Hilbert function through 6", h == [1, 1, 1, 2, 2, 2, 3], h)
    hs = v.freeness.get("hilbert", [])[:7]
    res.add("certificate Hilbert data matches", hs == h, hs)
    ann = annihilation_check(G, [1, 2], range(0, 5))
    res.add("cohomology vanishes in negative degrees", ann["negative_degrees_vanish"], ann)
    return res


def cyclotomic_arithmetic_check(primes=(3, 5, 7, 11), q_limit: int = 50) -> dict:
    bad = []
    for p in primes:
        ring = CoeffRing.cyclotomic(p, localize=True)
        for k in range(1, p):
            if ring.valuation(Cyc.zeta(p, k) - 1) != 1:
                bad.append({"p": p, "root": k, "issue": "valuation of zeta^k - 1"})
        for q in range(2, q_limit):
            if not is_prime(q):
                continue
            s = factor_prime_in_cyclotomic(q, p)
            es = [e for e, _ in s.factors]
            if s.total() != p - 1:
                bad.append({"p": p, "q": q, "issue": "sum ef"})
            if q != p and any(e != 1 for e in es):
                bad.append({"p": p, "q": q, "issue": "ramified"})
            if q == p and es != [p - 1]:
                bad.append({"p": p, "q": q, "issue": "not totally ramified"})
    return {"failures": bad}


def run_unramify_quadratic(result: SuiteResult | None = None) -> SuiteResult:
    res = result or SuiteResult("unramify-quadratic")
    ca = cyclotomic_arithmetic_check()
    res.add("cyclotomic splitting and root-of-unity valuations for p in {3,5,7,11}, q < 50", not ca["failures"], ca["failures"])
    for name, (poly, disc) in QUADRATIC_FIELDS.items():
        for p in (3, 5):
            out = unramified_check(poly, disc, p)
            if out["status"] == "excluded":
                res.add(f"{name}, p={p}: excluded ({p} ramifies in K)", True, out)
                continue
            res.add(f"{name}, p={p}: prime above p unramified over pi", out["status"] == "ok" and out["unramified_over_pi"], out)
    return res


def run_suite(name: str, seed: int = 0) -> SuiteResult:
    if name == "gl2z-catalog":
        return run_gl2z_catalog()
    if name == "mixed-cyclic":
        return run_mixed_cyclic(seed)
    if name == "veronese":
        return run_veronese()
    if name == "equi":
        return run_equi()
    if name == "unramify-quadratic":
        return run_unramify_quadratic()
    raise KeyError(name)
