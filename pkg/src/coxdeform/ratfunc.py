"""Sparse multivariate polynomials and rational functions over the rationals.

Monomials are sorted tuples of ``(name, exponent)`` pairs. Rational functions
are not gcd-reduced; equality is by cross-multiplication.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

Monomial = tuple  # tuple[tuple[str, int], ...]
ONE_MONO: Monomial = ()


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, k in b:
        d[v] = d.get(v, 0) + k
    return tuple(sorted(d.items()))


def _mono_div(a: Monomial, b: Monomial) -> Monomial | None:
    d = dict(a)
    for v, k in b:
        if d.get(v, 0) < k:
            return None
        d[v] -= k
    return tuple(sorted((v, k) for v, k in d.items() if k))


def _mono_str(m: Monomial) -> str:
    return "*".join(v if k == 1 else f"{v}^{k}" for v, k in m)


class Poly:
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        t = {}
        if terms:
            for m, c in dict(terms).items():
                c = Fraction(c)
                if c:
                    t[m] = c
        self.terms = t

    @classmethod
    def const(cls, c) -> "Poly":
        return cls({ONE_MONO: c})

    @classmethod
    def var(cls, name: str) -> "Poly":
        return cls({((name, 1),): 1})

    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return all(m == ONE_MONO for m in self.terms)

    def const_value(self) -> Fraction:
        return self.terms.get(ONE_MONO, Fraction(0))

    def variables(self) -> set[str]:
        return {v for m in self.terms for v, _ in m}

    def degree(self, name: str | None = None) -> int:
        if not self.terms:
            return -1
        if name is None:
            return max(sum(k for _, k in m) for m in self.terms)
        return max(dict(m).get(name, 0) for m in self.terms)

    def __add__(self, o):
        o = _poly(o)
        t = dict(self.terms)
        for m, c in o.terms.items():
            t[m] = t.get(m, 0) + c
        return Poly(t)

    __radd__ = __add__

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, o):
        return self + (-_poly(o))

    def __rsub__(self, o):
        return _poly(o) - self

    def __mul__(self, o):
        o = _poly(o)
        t: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in o.terms.items():
                m = _mono_mul(m1, m2)
                t[m] = t.get(m, 0) + c1 * c2
        return Poly(t)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Poly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, o):
        if not isinstance(o, (Poly, int, Fraction)):
            return NotImplemented
        return self.terms == _poly(o).terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def subs(self, values: dict) -> "Poly":
        """Substitute rationals for some variables."""
        t: dict = {}
        for m, c in self.terms.items():
            rest = []
            for v, k in m:
                if v in values:
                    c = c * Fraction(values[v]) ** k
                else:
                    rest.append((v, k))
            key = tuple(rest)
            t[key] = t.get(key, 0) + c
        return Poly(t)

    def rename(self, mapping: dict) -> "Poly":
        t: dict = {}
        for m, c in self.terms.items():
            d: dict = {}
            for v, k in m:
                nv = mapping.get(v, v)
                d[nv] = d.get(nv, 0) + k
            key = tuple(sorted(d.items()))
            t[key] = t.get(key, 0) + c
        return Poly(t)

    def __call__(self, values: dict) -> Fraction:
        p = self.subs(values)
        if not p.is_const():
            raise ValueError(f"unassigned variables {sorted(p.variables())}")
        return p.const_value()

    def eval_float(self, values: dict) -> float:
        total = 0.0
        for m, c in self.terms.items():
            term = float(c)
            for v, k in m:
                term *= values[v] ** k
            total += term
        return total

    def univariate(self, name: str) -> list[Fraction]:
        """Coefficients low to high; the polynomial must involve only ``name``."""
        extra = self.variables() - {name}
        if extra:
            raise ValueError(f"polynomial also involves {sorted(extra)}")
        coeffs = [Fraction(0)] * (self.degree(name) + 1 if self.terms else 1)
        for m, c in self.terms.items():
            coeffs[dict(m).get(name, 0)] += c
        return coeffs

    def content(self) -> Fraction:
        """Positive rational whose quotient has coprime integer coefficients."""
        if not self.terms:
            return Fraction(1)
        den = lcm(*(c.denominator for c in self.terms.values()))
        num = 0
        for c in self.terms.values():
            num = gcd(num, abs(c.numerator * (den // c.denominator)))
        return Fraction(num, den)

    def _order(self):
        names = sorted(self.variables())
        return lambda m: tuple(dict(m).get(v, 0) for v in names)

    def leading(self, names=None):
        key = (lambda m: tuple(dict(m).get(v, 0) for v in names)) if names else self._order()
        m = max(self.terms, key=key)
        return m, self.terms[m]

    def monomial_gcd(self) -> Monomial:
        it = iter(self.terms)
        g = dict(next(it, ONE_MONO))
        for m in it:
            d = dict(m)
            g = {v: min(k, d.get(v, 0)) for v, k in g.items()}
        return tuple(sorted((v, k) for v, k in g.items() if k))

    def divide_monomial(self, m: Monomial) -> "Poly":
        return Poly({_mono_div(k, m): c for k, c in self.terms.items()})

    def exact_div(self, o: "Poly") -> "Poly | None":
        """Quotient when ``o`` divides ``self`` exactly, else ``None``."""
        if o.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        names = sorted(self.variables() | o.variables())
        key = lambda m: tuple(dict(m).get(v, 0) for v in names)  # noqa: E731
        lm, lc = max(o.terms.items(), key=lambda kv: key(kv[0]))
        rem = Poly(self.terms)
        quot: dict = {}
        for _ in range(10_000):
            if rem.is_zero():
                return Poly(quot)
            rm, rc = max(rem.terms.items(), key=lambda kv: key(kv[0]))
            qm = _mono_div(rm, lm)
            if qm is None:
                return None
            qc = rc / lc
            quot[qm] = quot.get(qm, 0) + qc
            rem = rem - Poly({qm: qc}) * o
        return None

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=lambda m: (-sum(k for _, k in m), m)):
            c = self.terms[m]
            body = _mono_str(m)
            if not body:
                s = str(abs(c))
            elif abs(c) == 1:
                s = body
            else:
                s = f"{abs(c)}*{body}"
            parts.append(("-" if c < 0 else "+", s))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, s in parts[1:]:
            out += f" {sign} {s}"
        return out


def _poly(x) -> Poly:
    if isinstance(x, Poly):
        return x
    if isinstance(x, RatFunc):
        raise TypeError("cannot coerce a rational function to a polynomial")
    return Poly.const(x)


class RatFunc:
    """``num / den`` with ``den`` not identically zero."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=1, *, reduce: bool = True):
        num, den = _poly(num), _poly(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if reduce:
            num, den = _simplify(num, den)
        self.num, self.den = num, den

    @classmethod
    def var(cls, name: str) -> "RatFunc":
        return cls(Poly.var(name))

    @classmethod
    def const(cls, c) -> "RatFunc":
        return cls(Poly.const(c))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_const(self) -> bool:
        return self.num.is_const() and self.den.is_const()

    def variables(self) -> set[str]:
        return self.num.variables() | self.den.variables()

    def __add__(self, o):
        o = _rf(o)
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, reduce=False)

    def __sub__(self, o):
        return self + (-_rf(o))

    def __rsub__(self, o):
        return _rf(o) - self

    def __mul__(self, o):
        o = _rf(o)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = _rf(o)
        if o.is_zero():
            raise ZeroDivisionError("division by an identically zero rational function")
        return RatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, o):
        return _rf(o) / self

    def __eq__(self, o):
        if not isinstance(o, (RatFunc, Poly, int, Fraction)):
            return NotImplemented
        o = _rf(o)
        return (self.num * o.den - o.num * self.den).is_zero()

    def __hash__(self):
        raise TypeError("RatFunc is not hashable; equality is by cross-multiplication")

    def subs(self, values: dict) -> "RatFunc":
        den = self.den.subs(values)
        if den.is_zero():
            raise ZeroDivisionError("denominator vanishes under substitution")
        return RatFunc(self.num.subs(values), den)

    def rename(self, mapping: dict) -> "RatFunc":
        return RatFunc(self.num.rename(mapping), self.den.rename(mapping), reduce=False)

    def __call__(self, values: dict) -> Fraction:
        den = self.den(values)
        if den == 0:
            raise ZeroDivisionError("denominator vanishes at this point")
        return self.num(values) / den

    def eval_float(self, values: dict) -> float:
        return self.num.eval_float(values) / self.den.eval_float(values)

    def __repr__(self):
        return f"RatFunc({self})"

    def __str__(self):
        if self.den.is_const():
            return str(self.num * (1 / self.den.const_value()))
        # clear numerator denominators for display so "1/2/(y)" reads "1/(2*y)"
        scale = lcm(*(c.denominator for c in self.num.terms.values())) if self.num.terms else 1
        num, den = self.num * scale, self.den * scale
        n = str(num)
        if len(num.terms) > 1:
            n = f"({n})"
        return f"{n}/({den})"


def _rf(x) -> RatFunc:
    if isinstance(x, RatFunc):
        return x
    return RatFunc(_poly(x), reduce=False)


def _simplify(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    if num.is_zero():
        return num, Poly.const(1)
    # common monomial factor
    g = _mono_common(num.monomial_gcd(), den.monomial_gcd())
    if g:
        num, den = num.divide_monomial(g), den.divide_monomial(g)
    if not den.is_const():
        q = num.exact_div(den)
        if q is not None:
            return q, Poly.const(1)
        q = den.exact_div(num)
        if q is not None and not num.is_const():
            num, den = Poly.const(1), q
    # scale so the denominator has coprime integer coefficients and a positive leading term
    _, lc = den.leading()
    scale = den.content() * (1 if lc > 0 else -1)
    if scale != 1:
        num, den = num * (1 / scale), den * (1 / scale)
    return num, den


def _mono_common(a: Monomial, b: Monomial) -> Monomial:
    db = dict(b)
    return tuple((v, min(k, db[v])) for v, k in a if v in db and min(k, db[v]) > 0)
