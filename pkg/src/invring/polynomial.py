"""Sparse multivariate polynomials with field-element coefficients.

Monomials are exponent tuples; degree-d bases are listed in lexicographic
order with X_1 greatest, e.g. (X^2, XY, Y^2).

>>> monomials(2, 2)
[(2, 0), (1, 1), (0, 2)]
"""

from __future__ import annotations

from functools import lru_cache


@lru_cache(maxsize=None)
def _monomials(n: int, d: int) -> tuple:
    if n == 0:
        return ((),) if d == 0 else ()
    if n == 1:
        return ((d,),)
    out = []
    for a in range(d, -1, -1):
        for rest in _monomials(n - 1, d - a):
            out.append((a,) + rest)
    return tuple(out)


def monomials(n: int, d: int) -> list:
    return list(_monomials(n, d))


@lru_cache(maxsize=None)
def monomial_index(n: int, d: int) -> dict:
    return {m: i for i, m in enumerate(_monomials(n, d))}


def var_names(n: int) -> list:
    return ["X", "Y", "Z", "W"][:n] if n <= 4 else [f"X{i + 1}" for i in range(n)]


class Poly:
    """Polynomial as a dict from exponent tuples to nonzero coefficients."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: dict | None = None):
        self.n = n
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    @classmethod
    def var(cls, n: int, i: int, one=1) -> "Poly":
        e = [0] * n
        e[i] = 1
        return cls(n, {tuple(e): one})

    @classmethod
    def const(cls, n: int, c) -> "Poly":
        return cls(n, {(0,) * n: c})

    @classmethod
    def monomial(cls, exps, coeff=1) -> "Poly":
        return cls(len(exps), {tuple(exps): coeff})

    @classmethod
    def from_vector(cls, vec, n: int, d: int) -> "Poly":
        return cls(n, {m: c for m, c in zip(_monomials(n, d), vec) if c})

    def vector(self, d: int, zero=0) -> list:
        idx = monomial_index(self.n, d)
        out = [zero] * len(idx)
        for m, c in self.terms.items():
            if sum(m) != d:
                raise ValueError(f"term {m} is not of degree {d}")
            out[idx[m]] = c
        return out

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(self.n, other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out[m] + c if m in out else c
        return Poly(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.n, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, Poly) else -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return Poly(self.n, {m: c * other for m, c in self.terms.items()})
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                v = c1 * c2
                out[m] = out[m] + v if m in out else v
        return Poly(self.n, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Poly.const(self.n, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.n == other.n and self.terms == other.terms
        if not self.terms:
            return not other
        return self.terms == {(0,) * self.n: other}

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def map_coeffs(self, f) -> "Poly":
        return Poly(self.n, {m: f(c) for m, c in self.terms.items()})

    def act(self, g) -> "Poly":
        """Apply the substitution X_j -> sum_i g[i][j] X_i."""
        n = self.n
        forms = []
        for j in range(n):
            forms.append(Poly(n, {tuple(1 if k == i else 0 for k in range(n)): g[i][j] for i in range(n)}))
        cache = {}

        def power(j, e):
            key = (j, e)
            if key not in cache:
                cache[key] = forms[j] ** e
            return cache[key]

        out = Poly(n)
        for m, c in self.terms.items():
            term = Poly.const(n, c)
            for j, e in enumerate(m):
                if e:
                    term = term * power(j, e)
            out = out + term
        return out

    def support(self) -> list:
        """Monomials in basis order (greatest first)."""
        return sorted(self.terms, reverse=True)

    def to_json(self, fmt=str) -> list:
        return [[list(m), fmt(self.terms[m])] for m in self.support()]

    def __repr__(self):
        return f"Poly({self.n}, {self.terms!r})"

    def __str__(self):
        if not self.terms:
            return "0"
        names = var_names(self.n)
        parts = []
        for m in self.support():
            c = self.terms[m]
            mono = "*".join(
                names[i] if e == 1 else f"{names[i]}^{e}" for i, e in enumerate(m) if e
            )
            cs = str(c)
            if not mono:
                parts.append(cs)
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            elif any(ch in cs.lstrip("-") for ch in "+- /") or "z" in cs or "t" in cs:
                parts.append(f"({cs})*{mono}")
            else:
                parts.append(f"{cs}*{mono}")
        out = parts[0]
        for s in parts[1:]:
            out += " - " + s[1:] if s.startswith("-") else " + " + s
        return out
