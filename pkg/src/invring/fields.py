"""Exact scalars: the cyclotomic field Q(zeta_p), F_p[t] and F_p(t).

Elements are immutable and hashable so they can sit inside group elements.

>>> z = Cyc.zeta(3)
>>> z * z * z == 1
True
>>> (z - 1).norm()
Fraction(3, 1)
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


def _num(x):
    """Return an int when a Fraction is integral."""
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def valuation_int(n: int, q: int) -> int:
    """q-adic valuation of a nonzero integer."""
    n = abs(n)
    v = 0
    while n % q == 0:
        n //= q
        v += 1
    return v


# --------------------------------------------------------------------------
# Q(zeta_p)
# --------------------------------------------------------------------------


def _fold(coeffs: Iterable, p: int) -> tuple:
    """Reduce a coefficient list in zeta modulo zeta^p - 1 and then Phi_p."""
    a = [0] * p
    for i, c in enumerate(coeffs):
        if c:
            a[i % p] += c
    top = a[p - 1]
    if top:
        for i in range(p - 1):
            a[i] -= top
    return tuple(_num(c) for c in a[: p - 1])


class Cyc:
    """Element of Q(zeta_p) in the power basis 1, zeta, ..., zeta^(p-2)."""

    __slots__ = ("p", "c", "_h")

    def __init__(self, p: int, coeffs: Iterable = ()):
        c = list(coeffs)
        if len(c) != p - 1 or any(isinstance(x, Cyc) for x in c):
            c = list(_fold(c, p))
        self.p = p
        self.c = tuple(_num(x) for x in c)
        self._h = None

    @classmethod
    def const(cls, p: int, a) -> "Cyc":
        return cls(p, (a,) + (0,) * (p - 2))

    @classmethod
    def zeta(cls, p: int, k: int = 1) -> "Cyc":
        coeffs = [0] * p
        coeffs[k % p] = 1
        return cls(p, _fold(coeffs, p))

    def _coerce(self, other) -> "Cyc":
        if isinstance(other, Cyc):
            if other.p != self.p:
                raise ValueError("mixing different cyclotomic fields")
            return other
        if isinstance(other, (int, Fraction)):
            return Cyc.const(self.p, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Cyc(self.p, tuple(a + b for a, b in zip(self.c, o.c)))

    __radd__ = __add__

    def __neg__(self):
        return Cyc(self.p, tuple(-a for a in self.c))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Cyc(self.p, tuple(a - b for a, b in zip(self.c, o.c)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyc(self.p, tuple(a * other for a in self.c))
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = self.p
        prod = [0] * (2 * p - 3 if p > 2 else 1)
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(o.c):
                    if b:
                        prod[i + j] += a * b
        return Cyc(p, _fold(prod, p))

    __rmul__ = __mul__

    def conjugate(self, k: int) -> "Cyc":
        """Image under the automorphism zeta -> zeta^k."""
        p = self.p
        out = [0] * p
        for i, a in enumerate(self.c):
            if a:
                out[(i * k) % p] += a
        return Cyc(p, _fold(out, p))

    def norm(self) -> Fraction:
        """Field norm to Q."""
        acc = self
        for k in range(2, self.p):
            acc = acc * self.conjugate(k)
        return Fraction(acc.c[0])

    def inverse(self) -> "Cyc":
        if not self:
            raise ZeroDivisionError("inverse of zero")
        rest = Cyc.const(self.p, 1)
        for k in range(2, self.p):
            rest = rest * self.conjugate(k)
        n = (self * rest).c[0]
        return rest * Fraction(1, n)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / other)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = Cyc.const(self.p, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __bool__(self):
        return any(self.c)

    def __eq__(self, other):
        if isinstance(other, Cyc):
            return self.p == other.p and self.c == other.c
        if isinstance(other, (int, Fraction)):
            return self.c[0] == other and not any(self.c[1:])
        return NotImplemented

    def __hash__(self):
        if self._h is None:
            if not any(self.c[1:]):
                self._h = hash(self.c[0])
            else:
                self._h = hash((self.p, self.c))
        return self._h

    def is_rational(self) -> bool:
        return not any(self.c[1:])

    def is_integral(self) -> bool:
        """True when the power-basis coordinates are integers."""
        return all(isinstance(a, int) for a in self.c)

    def denominator(self) -> int:
        d = 1
        for a in self.c:
            if isinstance(a, Fraction):
                d = d * a.denominator // _gcd(d, a.denominator)
        return d

    def __repr__(self):
        return f"Cyc({self.p}, {list(self.c)})"

    def __str__(self):
        return format_poly_in(self.c, "z")


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def format_poly_in(coeffs, var: str) -> str:
    """Render low-to-high coefficients as a polynomial string."""
    parts = []
    for i, a in enumerate(coeffs):
        if not a:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if not mono:
            s = str(a)
        elif a == 1:
            s = mono
        elif a == -1:
            s = "-" + mono
        elif isinstance(a, Fraction):
            s = f"({a})*{mono}"
        else:
            s = f"{a}*{mono}"
        parts.append(s)
    if not parts:
        return "0"
    out = parts[0]
    for s in parts[1:]:
        out += " - " + s[1:] if s.startswith("-") else " + " + s
    return out


@lru_cache(maxsize=None)
def pi_inverse(p: int) -> Cyc:
    """1 / (zeta - 1) in Q(zeta_p)."""
    return (Cyc.zeta(p) - 1).inverse()


# --------------------------------------------------------------------------
# F_p[t] and F_p(t)
# --------------------------------------------------------------------------


class FpPoly:
    """Polynomial over F_p, coefficients low to high, trailing zeros removed."""

    __slots__ = ("p", "c")

    def __init__(self, p: int, coeffs: Iterable[int] = ()):
        c = [x % p for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.p = p
        self.c = tuple(c)

    @classmethod
    def const(cls, p: int, a: int) -> "FpPoly":
        return cls(p, (a,))

    @classmethod
    def t(cls, p: int) -> "FpPoly":
        return cls(p, (0, 1))

    def degree(self) -> int:
        return len(self.c) - 1

    def lead(self) -> int:
        return self.c[-1] if self.c else 0

    def _coerce(self, other):
        if isinstance(other, FpPoly):
            return other
        if isinstance(other, int):
            return FpPoly(self.p, (other,))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        n = max(len(self.c), len(o.c))
        a = self.c + (0,) * (n - len(self.c))
        b = o.c + (0,) * (n - len(o.c))
        return FpPoly(self.p, [x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return FpPoly(self.p, [-x for x in self.c])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not self.c or not o.c:
            return FpPoly(self.p)
        out = [0] * (len(self.c) + len(o.c) - 1)
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(o.c):
                    out[i + j] += a * b
        return FpPoly(self.p, out)

    __rmul__ = __mul__

    def __divmod__(self, other):
        o = self._coerce(other)
        if not o.c:
            raise ZeroDivisionError("polynomial division by zero")
        p = self.p
        r = list(self.c)
        inv = pow(o.c[-1], p - 2, p) if p > 2 else 1
        dq = len(r) - len(o.c)
        if dq < 0:
            return FpPoly(p), self
        q = [0] * (dq + 1)
        for k in range(dq, -1, -1):
            coef = r[k + len(o.c) - 1] * inv % p
            q[k] = coef
            if coef:
                for j, b in enumerate(o.c):
                    r[k + j] = (r[k + j] - coef * b) % p
        return FpPoly(p, q), FpPoly(p, r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __pow__(self, n: int):
        result = FpPoly(self.p, (1,))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def monic(self) -> "FpPoly":
        if not self.c:
            return self
        inv = pow(self.c[-1], self.p - 2, self.p)
        return self * inv

    def eval(self, x: int) -> int:
        acc = 0
        for a in reversed(self.c):
            acc = (acc * x + a) % self.p
        return acc

    def t_valuation(self) -> int:
        for i, a in enumerate(self.c):
            if a:
                return i
        raise ValueError("valuation of zero")

    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        if isinstance(other, FpPoly):
            return self.p == other.p and self.c == other.c
        if isinstance(other, int):
            return self.c == FpPoly(self.p, (other,)).c
        return NotImplemented

    def __hash__(self):
        if len(self.c) <= 1:
            return hash(self.c[0] if self.c else 0)
        return hash((self.p, self.c))

    def __repr__(self):
        return f"FpPoly({self.p}, {list(self.c)})"

    def __str__(self):
        return format_poly_in(self.c, "t")


def poly_gcd(a: FpPoly, b: FpPoly) -> FpPoly:
    while b:
        a, b = b, a % b
    return a.monic()


class RatFunc:
    """Element of F_p(t) as num/den with den monic and coprime to num."""

    __slots__ = ("p", "num", "den")

    def __init__(self, num: FpPoly, den: FpPoly | None = None):
        p = num.p
        if den is None:
            den = FpPoly(p, (1,))
        if not den:
            raise ZeroDivisionError("zero denominator")
        g = poly_gcd(num, den)
        if g.degree() > 0:
            num, den = num // g, den // g
        lc = den.lead()
        if lc != 1:
            inv = pow(lc, p - 2, p)
            num, den = num * inv, den * inv
        self.p = p
        self.num = num
        self.den = den

    @classmethod
    def const(cls, p: int, a: int) -> "RatFunc":
        return cls(FpPoly(p, (a,)))

    @classmethod
    def t(cls, p: int) -> "RatFunc":
        return cls(FpPoly.t(p))

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, FpPoly):
            return RatFunc(other)
        if isinstance(other, int):
            return RatFunc(FpPoly(self.p, (other,)))
        if isinstance(other, Fraction):
            p = self.p
            return RatFunc(FpPoly(p, (other.numerator,)), FpPoly(p, (other.denominator,)))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if not self.num:
            raise ZeroDivisionError("inverse of zero")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return RatFunc(self.num ** n, self.den ** n)

    def t_valuation(self) -> int:
        return self.num.t_valuation() - self.den.t_valuation()

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        if self.den.degree() == 0:
            return hash(self.num)
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RatFunc({self.num!r}, {self.den!r})"

    def __str__(self):
        if self.den.degree() == 0:
            return str(self.num)
        return f"({self.num})/({self.den})"
