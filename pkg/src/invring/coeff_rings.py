"""Coefficient rings: Z, Z[zeta_p] and F_p[t], optionally localized.

Elements live in the fraction field (``int``/``Fraction``, :class:`Cyc`,
:class:`RatFunc`); a :class:`CoeffRing` decides membership, units and
valuations.  Linear algebra restricts scalars to the base PID (Z or F_p[t]),
so each ring also exposes coordinates and multiplication matrices.

>>> R = CoeffRing.cyclotomic(3, localize=True)
>>> pi_adic_valuation(Cyc.const(3, 3), R)
2
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import IndexDivisible, InvalidConductor, InvalidInput
from .exact_linalg import ZZ, PolyDomain
from .fields import Cyc, FpPoly, RatFunc, format_poly_in, is_prime, pi_inverse, poly_gcd, valuation_int

INTEGERS = "integers"
CYCLOTOMIC = "cyclotomic"
POLY = "polyfp"


@dataclass(frozen=True)
class CoeffRing:
    """Descriptor of the coefficient ring.

    ``localize`` is a rational prime for ``integers``, ``"pi"`` for
    ``cyclotomic`` and ``"t"`` for ``polyfp``; ``None`` means unlocalized.
    """

    kind: str
    p: int | None = None
    localize: object = None

    def __post_init__(self):
        if self.kind == INTEGERS:
            if self.localize is not None and not (isinstance(self.localize, int) and is_prime(self.localize)):
                raise InvalidInput(f"localization prime {self.localize!r} is not a rational prime")
        elif self.kind == CYCLOTOMIC:
            if not isinstance(self.p, int) or not is_prime(self.p):
                raise InvalidConductor(f"conductor {self.p!r} is not prime")
            if self.localize not in (None, "pi"):
                raise InvalidInput("cyclotomic rings localize only at pi = zeta - 1")
        elif self.kind == POLY:
            if not isinstance(self.p, int) or not is_prime(self.p):
                raise InvalidInput(f"characteristic {self.p!r} is not prime")
            if self.localize not in (None, "t"):
                raise InvalidInput("F_p[t] localizes only at (t)")
        else:
            raise InvalidInput(f"unknown ring kind {self.kind!r}")

    # -- constructors --------------------------------------------------

    @classmethod
    def integers(cls, localize: int | None = None) -> "CoeffRing":
        return cls(INTEGERS, None, localize)

    @classmethod
    def cyclotomic(cls, p: int, localize: bool = False) -> "CoeffRing":
        return cls(CYCLOTOMIC, p, "pi" if localize else None)

    @classmethod
    def poly(cls, p: int, localize: bool = False) -> "CoeffRing":
        return cls(POLY, p, "t" if localize else None)

    # -- descriptors ---------------------------------------------------

    @property
    def localized(self) -> bool:
        return self.localize is not None

    @property
    def characteristic(self) -> int:
        return self.p if self.kind == POLY else 0

    @property
    def base(self):
        return PolyDomain(self.p) if self.kind == POLY else ZZ

    @property
    def degree(self) -> int:
        """Rank over the base PID."""
        return self.p - 1 if self.kind == CYCLOTOMIC else 1

    @property
    def residue_characteristic(self) -> int | None:
        if self.kind == INTEGERS:
            return self.localize
        return self.p

    def describe(self) -> dict:
        out = {"kind": self.kind}
        if self.p is not None:
            out["p"] = self.p
        if self.localize is not None:
            out["localize"] = self.localize
        return out

    def __str__(self):
        if self.kind == INTEGERS:
            return "Z" if self.localize is None else f"Z_({self.localize})"
        if self.kind == CYCLOTOMIC:
            return f"Z[z{self.p}]" + ("_(pi)" if self.localized else "")
        return f"F{self.p}[t]" + ("_(t)" if self.localized else "")

    # -- elements ------------------------------------------------------

    def elem(self, a):
        """Coerce an int, Fraction, string or field element into the field."""
        if isinstance(a, str):
            return parse_element(a, self)
        if self.kind == INTEGERS:
            if isinstance(a, (int, Fraction)):
                return Fraction(a)
            if isinstance(a, Cyc) and a.is_rational():
                return Fraction(a.c[0])
        elif self.kind == CYCLOTOMIC:
            if isinstance(a, Cyc):
                return a
            if isinstance(a, (int, Fraction)):
                return Cyc.const(self.p, a)
        else:
            if isinstance(a, RatFunc):
                return a
            if isinstance(a, FpPoly):
                return RatFunc(a)
            if isinstance(a, int):
                return RatFunc.const(self.p, a)
            if isinstance(a, Fraction):
                return RatFunc.const(self.p, a.numerator) / a.denominator
        raise InvalidInput(f"cannot read {a!r} as an element of {self}")

    @property
    def zero(self):
        return self.elem(0)

    @property
    def one(self):
        return self.elem(1)

    def uniformizer(self):
        """The designated prime element, or None for unlocalized Z."""
        if self.kind == INTEGERS:
            return self.localize
        if self.kind == CYCLOTOMIC:
            return Cyc.zeta(self.p) - 1
        return RatFunc.t(self.p)

    def contains(self, x) -> bool:
        x = self.elem(x)
        if self.kind == INTEGERS:
            den = Fraction(x).denominator
            return den == 1 if self.localize is None else den % self.localize != 0
        if self.kind == CYCLOTOMIC:
            den = x.denominator()
            return den == 1 if not self.localized else den % self.p != 0
        if not self.localized:
            return x.den.degree() == 0
        return x.den.c[0] != 0

    def valuation(self, x):
        """Valuation at the designated prime; ``math.inf`` for zero."""
        x = self.elem(x)
        if not x:
            return math.inf
        if self.kind == INTEGERS:
            if self.localize is None:
                raise InvalidInput("unlocalized Z has no designated prime")
            f = Fraction(x)
            return valuation_int(f.numerator, self.localize) - valuation_int(f.denominator, self.localize)
        if self.kind == CYCLOTOMIC:
            return _cyc_valuation(x)
        return x.t_valuation()

    def is_unit(self, x) -> bool:
        x = self.elem(x)
        if not x or not self.contains(x):
            return False
        if self.localized:
            return self.valuation(x) == 0
        if self.kind == INTEGERS:
            return x in (1, -1)
        if self.kind == CYCLOTOMIC:
            return abs(x.norm()) == 1
        return x.num.degree() == 0

    def residue_is_one(self, x) -> bool:
        """x is congruent to 1 modulo the designated prime."""
        return self.valuation(self.elem(x) - 1) >= 1

    # -- restriction of scalars to the base PID -----------------------

    def coords(self, x) -> list:
        x = self.elem(x)
        if self.kind == CYCLOTOMIC:
            return [Fraction(a) for a in x.c]
        if self.kind == INTEGERS:
            return [Fraction(x)]
        return [x]

    def from_coords(self, cs):
        if self.kind == CYCLOTOMIC:
            return Cyc(self.p, [Fraction(a) if not isinstance(a, FpPoly) else a for a in cs])
        if self.kind == INTEGERS:
            v = Fraction(cs[0])
            return v.numerator if v.denominator == 1 else v
        c = cs[0]
        return c if isinstance(c, RatFunc) else RatFunc(c) if isinstance(c, FpPoly) else RatFunc.const(self.p, c)

    def basis_elements(self) -> list:
        if self.kind == CYCLOTOMIC:
            return [Cyc.zeta(self.p, k) for k in range(self.p - 1)]
        return [self.one]

    def mult_matrix(self, x) -> list:
        """Matrix of multiplication by x on base coordinates (columns = images)."""
        x = self.elem(x)
        cols = [self.coords(x * b) for b in self.basis_elements()]
        n = len(cols)
        return [[cols[j][i] for j in range(n)] for i in range(n)]

    def denominator_of(self, v):
        """Denominator in the base ring of a base-field scalar."""
        if self.kind == POLY:
            return v.den
        return Fraction(v).denominator

    def clearing_factor(self, values):
        """A base scalar c, a unit of the localized base, making c*values integral.

        Raises InvalidInput when a non-unit denominator appears.
        """
        if self.kind == POLY:
            c = FpPoly(self.p, (1,))
            for v in values:
                if isinstance(v, RatFunc) and v:
                    d = v.den
                    if d.degree() > 0:
                        if not self.localized or d.c[0] == 0:
                            raise InvalidInput(f"entry {v} not in {self}")
                        c = c * (d // poly_gcd(c, d))
            return c
        c = 1
        for v in values:
            if v:
                d = Fraction(v).denominator
                if d != 1:
                    q = self.local_base_prime()
                    if q is None or d % q == 0:
                        raise InvalidInput(f"entry {v} not in {self}")
                    c = c * d // math.gcd(c, d)
        return c

    def local_base_prime(self):
        """The prime of the base PID below the designated prime (None if unlocalized)."""
        if not self.localized:
            return None
        if self.kind == INTEGERS:
            return self.localize
        if self.kind == CYCLOTOMIC:
            return self.p
        return FpPoly.t(self.p)

    def to_base(self, v):
        """Integral base-field scalar to the base ring."""
        if self.kind == POLY:
            if isinstance(v, RatFunc):
                if v.den.degree() != 0:
                    raise InvalidInput(f"{v} is not a polynomial")
                return v.num * pow(v.den.c[0], self.p - 2, self.p)
            if isinstance(v, FpPoly):
                return v
            return FpPoly(self.p, (int(v),))
        f = Fraction(v)
        if f.denominator != 1:
            raise InvalidInput(f"{v} is not integral")
        return f.numerator

    def from_base(self, b):
        if self.kind == POLY:
            return RatFunc(b) if isinstance(b, FpPoly) else RatFunc.const(self.p, b)
        return Fraction(b)

    def local_part(self, d):
        """The part of an invariant factor that survives localization (None if a unit)."""
        dom = self.base
        if dom.is_unit(d):
            return None
        if not self.localized:
            return d
        if self.kind == POLY:
            v = d.t_valuation()
            return FpPoly.t(self.p) ** v if v else None
        q = self.local_base_prime()
        v = valuation_int(d, q)
        return q ** v if v else None

    def format(self, x) -> str:
        x = self.elem(x)
        return str(x)


@lru_cache(maxsize=None)
def _cyc_pi(p: int) -> Cyc:
    return Cyc.zeta(p) - 1


def _cyc_valuation(x: Cyc) -> int:
    p = x.p
    den = x.denominator()
    a = x * den
    bound = valuation_int(int(abs(a.norm())), p)
    v = 0
    inv = pi_inverse(p)
    while sum(a.c) % p == 0:
        a = a * inv
        v += 1
        if v > bound:
            raise ArithmeticError("valuation exceeded the norm bound")
    return v - (p - 1) * valuation_int(den, p)


def reduce_cyclotomic(poly, p: int) -> Cyc:
    """Reduce an integer polynomial in zeta (coefficients low to high) mod Phi_p.

    >>> reduce_cyclotomic([0, 0, 0, 0, 1], 5)
    Cyc(5, [-1, -1, -1, -1])
    """
    if not isinstance(p, int) or not is_prime(p):
        raise InvalidConductor(f"conductor {p!r} is not prime")
    return Cyc(p, list(poly) if list(poly) else [0])


def pi_adic_valuation(x, ring: CoeffRing):
    """Exact valuation at the designated prime, ``math.inf`` for zero."""
    return ring.valuation(x)


def is_unit(x, ring: CoeffRing) -> bool:
    return ring.is_unit(x)


def unit_ratio_of_roots(i: int, j: int, p: int) -> Cyc:
    """u with zeta^i - 1 = u (zeta^j - 1); u is a unit of Z[zeta_p]."""
    if not (1 <= i <= p - 1 and 1 <= j <= p - 1):
        raise InvalidInput("exponents must lie in 1..p-1")
    u = (Cyc.zeta(p, i) - 1) / (Cyc.zeta(p, j) - 1)
    if not u.is_integral() or abs(u.norm()) != 1:
        raise ArithmeticError("ratio is not a unit")
    return u


# ---------------------------------------------------------------------------
# Prime splitting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PrimeSplitting:
    q: int
    field: str
    factors: tuple
    degree: int

    @property
    def g(self) -> int:
        return len(self.factors)

    def total(self) -> int:
        return sum(e * f for e, f in self.factors)

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "field": self.field,
            "degree": self.degree,
            "factors": [{"e": e, "f": f} for e, f in self.factors],
            "g": self.g,
            "sum_ef": self.total(),
        }


def multiplicative_order(a: int, n: int) -> int:
    a %= n
    k, x = 1, a
    while x != 1:
        x = x * a % n
        k += 1
    return k


def cyclotomic_poly(p: int) -> list:
    """Phi_p, coefficients low to high."""
    return [1] * p


def _gf_factor(f_low, q):
    """Factor a monic integer polynomial mod q.  Returns [(factor_low, e)]."""
    from sympy.polys.domains import ZZ as SZZ
    from sympy.polys.galoistools import gf_factor

    high = [int(c) % q for c in reversed(f_low)]
    _, facs = gf_factor(high, q, SZZ)
    out = [([int(c) for c in reversed(g)], e) for g, e in facs]
    out.sort(key=lambda t: (len(t[0]), t[0], t[1]))
    return out


def factor_prime_in_cyclotomic(q: int, p: int) -> PrimeSplitting:
    """Splitting of q in Q(zeta_p) from the closed form, cross-checked by factoring Phi_p mod q."""
    if not is_prime(p):
        raise InvalidConductor(f"conductor {p!r} is not prime")
    if not is_prime(q):
        raise InvalidInput(f"{q} is not prime")
    n = p - 1
    if p == 2:
        facs = ((1, 1),)
    elif q == p:
        facs = ((p - 1, 1),)
    else:
        f = multiplicative_order(q, p)
        facs = tuple((1, f) for _ in range(n // f))
    if p > 2:
        if q == p:
            # Phi_p = (x - 1)^(p-1) mod p; Z[zeta] is maximal so Dedekind applies.
            check = tuple((e, len(g) - 1) for g, e in _gf_factor(cyclotomic_poly(p), q))
        else:
            check = factor_prime_dedekind(cyclotomic_poly(p), q).factors
        if tuple(sorted(check)) != tuple(sorted(facs)):
            raise ArithmeticError(f"closed form {facs} disagrees with factorization {check}")
    return PrimeSplitting(q, f"Q(zeta_{p})", facs, n)


def factor_prime_dedekind(minpoly, q: int, field: str = "") -> PrimeSplitting:
    """Factor q in Z[alpha] for monic ``minpoly`` (coefficients low to high).

    Raises IndexDivisible when the Dedekind criterion shows q divides the
    index of Z[alpha] in the maximal order.
    """
    f = [int(c) for c in minpoly]
    if f[-1] != 1:
        raise InvalidInput("minimal polynomial must be monic")
    if not is_prime(q):
        raise InvalidInput(f"{q} is not prime")
    facs = _gf_factor(f, q)
    g = FpPoly(q, (1,))
    h = FpPoly(q, (1,))
    g_int = [1]
    h_int = [1]
    for fac, e in facs:
        g_int = _int_mul(g_int, fac)
        for _ in range(e - 1):
            h_int = _int_mul(h_int, fac)
        g = g * FpPoly(q, fac)
        h = h * FpPoly(q, fac) ** (e - 1)
    gh = _int_mul(g_int, h_int)
    n = max(len(gh), len(f))
    diff = [(f[i] if i < len(f) else 0) - (gh[i] if i < len(gh) else 0) for i in range(n)]
    if any(c % q for c in diff):
        raise ArithmeticError("factorization does not reproduce the polynomial")
    F = FpPoly(q, [c // q for c in diff])
    common = poly_gcd(poly_gcd(F, g), h) if F else poly_gcd(g, h)
    if common.degree() > 0:
        raise IndexDivisible(f"q = {q} divides the index of Z[alpha] (common factor {common})")
    return PrimeSplitting(q, field or f"Z[x]/({_poly_str(f)})", tuple((e, len(fac) - 1) for fac, e in facs), len(f) - 1)


def _int_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _poly_str(f) -> str:
    return format_poly_in(f, "x")


def compositum_minpoly(field_poly, p: int, c: int) -> list | None:
    """Minimal polynomial of zeta_p + c*beta where beta is a root of ``field_poly``.

    Returns None when the result is reducible over Q (the fields intersect).
    """
    import sympy

    x, y = sympy.symbols("x y")
    m = sum(int(a) * y**i for i, a in enumerate(field_poly))
    phi = sum((x - c * y) ** k for k in range(p))
    res = sympy.Poly(sympy.resultant(m, phi, y), x)
    _, facs = sympy.factor_list(res.as_expr(), x)
    if len(facs) != 1 or facs[0][1] != 1:
        return None
    coeffs = [int(a) for a in reversed(res.all_coeffs())]
    if coeffs[-1] != 1:
        coeffs = [a // coeffs[-1] for a in coeffs]
    return coeffs


def unramified_check(field_poly, disc: int, p: int, multipliers=range(1, 8)) -> dict:
    """Factor p in K(zeta_p) for a quadratic field K by the Dedekind criterion.

    Tries generators zeta + c*beta for the listed c and reports those where
    the criterion does not apply.
    """
    if disc % p == 0:
        return {"p": p, "status": "excluded", "reason": f"{p} ramifies in K"}
    skipped = []
    for c in multipliers:
        mp = compositum_minpoly(field_poly, p, c)
        if mp is None:
            skipped.append({"c": c, "reason": "reducible"})
            continue
        try:
            split = factor_prime_dedekind(mp, p)
        except IndexDivisible as exc:
            skipped.append({"c": c, "reason": str(exc)})
            continue
        return {
            "p": p,
            "status": "ok",
            "generator": f"zeta_{p} + {c}*beta",
            "minpoly": mp,
            "splitting": split.to_json(),
            "index_divisible": skipped,
            # each prime of K(zeta) over p has e = e(P/Q) * (p - 1), Q = (zeta - 1)
            "e_over_pi": [str(Fraction(e, p - 1)) for e, _ in split.factors],
            "unramified_over_pi": all(e == p - 1 for e, _ in split.factors),
        }
    return {"p": p, "status": "no-generator", "index_divisible": skipped}


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------


def parse_element(text: str, ring: CoeffRing):
    """Read an element written in the symbol z (cyclotomic) or t (F_p[t])."""
    import sympy

    s = text.strip().replace("^", "**")
    if ring.kind == INTEGERS:
        try:
            v = Fraction(s)
        except ValueError as exc:
            raise InvalidInput(f"cannot parse {text!r} as a rational number") from exc
        return v.numerator if v.denominator == 1 else v
    sym = sympy.Symbol("z" if ring.kind == CYCLOTOMIC else "t")
    try:
        expr = sympy.sympify(s, locals={sym.name: sym, "pi": sym - 1 if ring.kind == CYCLOTOMIC else sym})
        num, den = sympy.fraction(sympy.together(expr))
        pn = sympy.Poly(num, sym)
        pd = sympy.Poly(den, sym)
    except (sympy.SympifyError, sympy.PolynomialError, TypeError) as exc:
        raise InvalidInput(f"cannot parse {text!r}") from exc
    if not all(c.is_rational for c in pn.all_coeffs() + pd.all_coeffs()):
        raise InvalidInput(f"non-rational coefficient in {text!r}")
    nl = [Fraction(int(c.p), int(c.q)) for c in reversed(pn.all_coeffs())]
    dl = [Fraction(int(c.p), int(c.q)) for c in reversed(pd.all_coeffs())]
    if ring.kind == CYCLOTOMIC:
        p = ring.p
        n = Cyc(p, nl)
        d = Cyc(p, dl)
        return n / d
    p = ring.p

    def fp(cs):
        out = []
        for c in cs:
            if c.denominator % p == 0:
                raise InvalidInput(f"denominator divisible by {p} in {text!r}")
            out.append(c.numerator * pow(c.denominator, p - 2, p))
        return FpPoly(p, out)

    return RatFunc(fp(nl), fp(dl))
