"""Exact Laurent polynomials in one variable ``t``.

Coefficients live in one of three rings, selected by a tag:

* ``"ZZ"`` -- Python ``int``
* ``"QQ"`` -- :class:`fractions.Fraction`
* ``"GF2"`` -- ``int`` reduced mod 2

Values are immutable.  Zero coefficients are never stored.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt
from typing import Iterable, Mapping

RINGS = ("ZZ", "QQ", "GF2")


class RingMismatch(TypeError):
    pass


class NotASquare(ValueError):
    pass


def _coerce(c, ring):
    if ring == "ZZ":
        if isinstance(c, Fraction):
            if c.denominator != 1:
                raise ValueError(f"non-integral coefficient {c} in ZZ")
            return c.numerator
        return int(c)
    if ring == "QQ":
        return Fraction(c)
    return int(c) % 2


class LaurentPoly:
    """Sparse Laurent polynomial ``sum c_j t^j``."""

    __slots__ = ("_c", "ring", "_hash")

    def __init__(self, coeffs: Mapping[int, object] | None = None, ring: str = "ZZ"):
        if ring not in RINGS:
            raise ValueError(f"unknown ring {ring!r}")
        self.ring = ring
        c = {}
        for e, v in (coeffs or {}).items():
            v = _coerce(v, ring)
            if v:
                c[int(e)] = v
        self._c = c
        self._hash = None

    @classmethod
    def _raw(cls, c: dict, ring: str) -> "LaurentPoly":
        obj = cls.__new__(cls)
        obj._c = c
        obj.ring = ring
        obj._hash = None
        return obj

    # -- constructors ------------------------------------------------------

    @classmethod
    def const(cls, c, ring="ZZ"):
        return cls({0: c}, ring)

    @classmethod
    def monomial(cls, c, e, ring="ZZ"):
        return cls({e: c}, ring)

    @classmethod
    def t(cls, ring="ZZ"):
        return cls({1: 1}, ring)

    @classmethod
    def from_list(cls, coeffs: Iterable, shift: int = 0, ring="ZZ"):
        """Build from a coefficient list, lowest exponent first."""
        return cls({shift + i: c for i, c in enumerate(coeffs)}, ring)

    @classmethod
    def zero(cls, ring="ZZ"):
        return cls._raw({}, ring)

    @classmethod
    def one(cls, ring="ZZ"):
        return cls._raw({0: 1 if ring != "QQ" else Fraction(1)}, ring)

    # -- inspection --------------------------------------------------------

    def terms(self) -> dict:
        return dict(self._c)

    def __getitem__(self, e: int):
        return self._c.get(e, 0)

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self):
        return bool(self._c)

    def min_exp(self) -> int:
        return min(self._c)

    def max_exp(self) -> int:
        return max(self._c)

    def degree(self) -> int:
        """Width ``max_exp - min_exp``; ``-1`` for zero."""
        if not self._c:
            return -1
        return self.max_exp() - self.min_exp()

    def leading(self):
        return self._c[self.max_exp()]

    def trailing(self):
        return self._c[self.min_exp()]

    def to_list(self) -> tuple[list, int]:
        """Dense coefficients lowest-first and the exponent shift."""
        if not self._c:
            return [], 0
        lo, hi = self.min_exp(), self.max_exp()
        return [self._c.get(e, 0) for e in range(lo, hi + 1)], lo

    def is_constant(self) -> bool:
        return not self._c or set(self._c) == {0}

    def is_monomial(self) -> bool:
        return len(self._c) == 1

    def to_ring(self, ring: str) -> "LaurentPoly":
        if ring == self.ring:
            return self
        return LaurentPoly(self._c, ring)

    def is_integral(self) -> bool:
        if self.ring != "QQ":
            return True
        return all(v.denominator == 1 for v in self._c.values())

    # -- arithmetic ----------------------------------------------------------

    def _lift(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.ring != self.ring:
                raise RingMismatch(f"{self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly({0: other}, self.ring)
        return NotImplemented

    def _norm(self, v):
        return v % 2 if self.ring == "GF2" else v

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        c = dict(self._c)
        for e, v in other._c.items():
            s = self._norm(c.get(e, 0) + v)
            if s:
                c[e] = s
            else:
                c.pop(e, None)
        return LaurentPoly._raw(c, self.ring)

    __radd__ = __add__

    def __neg__(self):
        if self.ring == "GF2":
            return self
        return LaurentPoly._raw({e: -v for e, v in self._c.items()}, self.ring)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        a, b = self._c, other._c
        if not a or not b:
            return LaurentPoly._raw({}, self.ring)
        c: dict = {}
        for e1, v1 in a.items():
            for e2, v2 in b.items():
                e = e1 + e2
                c[e] = c.get(e, 0) + v1 * v2
        if self.ring == "GF2":
            c = {e: v % 2 for e, v in c.items()}
        return LaurentPoly._raw({e: v for e, v in c.items() if v}, self.ring)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if not self.is_monomial():
                raise ValueError("negative power of a non-unit")
            (e, v), = self._c.items()
            inv = Fraction(1, 1) / v if self.ring == "QQ" else v
            if self.ring == "ZZ" and abs(v) != 1:
                raise ValueError("negative power of a non-unit")
            return LaurentPoly({e * k: inv ** (-k)}, self.ring)
        result = LaurentPoly.one(self.ring)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by ``t**k``."""
        return LaurentPoly._raw({e + k: v for e, v in self._c.items()}, self.ring)

    def scale(self, s) -> "LaurentPoly":
        s = _coerce(s, self.ring)
        if not s:
            return LaurentPoly._raw({}, self.ring)
        return LaurentPoly._raw({e: self._norm(v * s) for e, v in self._c.items()}, self.ring)

    def bar(self) -> "LaurentPoly":
        """The involution ``t -> t^{-1}`` (coefficients are real)."""
        return LaurentPoly._raw({-e: v for e, v in self._c.items()}, self.ring)

    def __call__(self, x):
        """Evaluate at a number (negative exponents need an invertible ``x``)."""
        if not self._c:
            return 0
        lo = self.min_exp()
        acc = 0
        for e in range(self.max_exp(), lo - 1, -1):
            acc = acc * x + self._c.get(e, 0)
        if lo < 0:
            return Fraction(acc) / Fraction(x) ** (-lo)
        return acc * x ** lo

    def subs_power(self, k: int) -> "LaurentPoly":
        """Substitute ``t -> t**k``."""
        return LaurentPoly._raw({e * k: v for e, v in self._c.items()}, self.ring)

    def derivative(self) -> "LaurentPoly":
        return LaurentPoly(
            {e - 1: v * e for e, v in self._c.items() if e != 0}, self.ring
        )

    # -- comparison ----------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly({0: other}, self.ring)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if self.ring != other.ring and {self.ring, other.ring} != {"ZZ", "QQ"}:
            return False
        return self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __repr__(self):
        return f"LaurentPoly({render(self)!r}, ring={self.ring!r})"

    def __str__(self):
        return render(self)

    # -- serialization ---------------------------------------------------------

    def to_json(self) -> dict:
        coeffs, shift = self.to_list()
        if self.ring == "QQ":
            coeffs = [
                int(c) if Fraction(c).denominator == 1 else [Fraction(c).numerator, Fraction(c).denominator]
                for c in coeffs
            ]
        return {"coeffs": coeffs, "shift": shift, "ring": self.ring}

    @classmethod
    def from_json(cls, data: dict) -> "LaurentPoly":
        ring = data.get("ring", "ZZ")
        coeffs = [Fraction(*c) if isinstance(c, list) else c for c in data["coeffs"]]
        return cls.from_list(coeffs, data.get("shift", 0), ring)


def render(f: LaurentPoly, var: str = "t") -> str:
    """Human readable form, highest exponent first, e.g. ``2t^2+27t+2``."""
    if f.is_zero():
        return "0"
    out = []
    for e in sorted(f.terms(), reverse=True):
        c = f[e]
        neg = c < 0
        a = -c if neg else c
        if e == 0:
            body = str(a)
        else:
            mono = var if e == 1 else f"{var}^{e}" if e > 0 else f"{var}^({e})"
            body = mono if a == 1 else f"{a}{mono}" if isinstance(a, int) or Fraction(a).denominator == 1 else f"({a}){mono}"
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append(("-" if neg else "+") + body)
    return "".join(out)


def parse(text: str, ring: str = "ZZ", var: str = "t") -> LaurentPoly:
    """Parse the output of :func:`render` (integer coefficients only)."""
    import re

    s = text.replace(" ", "").replace("−", "-")
    if s == "0":
        return LaurentPoly.zero(ring)
    if s[0] not in "+-":
        s = "+" + s
    pat = re.compile(rf"([+-])(\d*)({var}(?:\^\(?(-?\d+)\)?)?)?")
    pos = 0
    c = {}
    while pos < len(s):
        m = pat.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse {text!r} at {s[pos:]!r}")
        sign, num, mono, ex = m.groups()
        if not num and not mono:
            raise ValueError(f"cannot parse {text!r}")
        v = int(num) if num else 1
        e = 0 if not mono else (int(ex) if ex else 1)
        c[e] = c.get(e, 0) + (-v if sign == "-" else v)
        pos = m.end()
    return LaurentPoly(c, ring)


# ---------------------------------------------------------------------------
# unit-equivalence


class CanonicalPoly(LaurentPoly):
    """Representative of a ``≐`` class over QQ[t^±1].

    Lowest exponent 0, integer coefficients with content 1, positive
    leading coefficient.  Over GF2 only the shift applies.
    """

    __slots__ = ()


def content(f: LaurentPoly) -> Fraction:
    """Positive rational ``c`` with ``f / c`` primitive integral."""
    vals = list(f.terms().values())
    if not vals:
        return Fraction(0)
    den = 1
    for v in vals:
        den = den * Fraction(v).denominator // gcd(den, Fraction(v).denominator)
    num = 0
    for v in vals:
        num = gcd(num, int(Fraction(v) * den))
    return Fraction(num, den)


def canonicalize(f: LaurentPoly) -> CanonicalPoly:
    if f.is_zero():
        raise ValueError("cannot canonicalize the zero polynomial")
    lo = f.min_exp()
    if f.ring == "GF2":
        return CanonicalPoly._raw({e - lo: v for e, v in f.terms().items()}, "GF2")
    c = content(f)
    if f.leading() < 0:
        c = -c
    return CanonicalPoly._raw(
        {e - lo: int(Fraction(v) / c) for e, v in f.terms().items()}, "ZZ"
    )


def doteq(f: LaurentPoly, g: LaurentPoly) -> bool:
    """Equality up to units ``λ t^k`` of QQ[t^±1]."""
    if f.is_zero() or g.is_zero():
        return f.is_zero() and g.is_zero()
    return canonicalize(f) == canonicalize(g)


def is_symmetric(f: LaurentPoly) -> bool:
    if f.is_zero():
        raise ValueError("zero polynomial")
    return canonicalize(f) == canonicalize(f.bar())


# ---------------------------------------------------------------------------
# division over QQ


def _dense_q(f: LaurentPoly) -> tuple[list[Fraction], int]:
    coeffs, shift = f.to_list()
    return [Fraction(c) for c in coeffs], shift


def _from_dense(coeffs, shift, ring):
    return LaurentPoly({shift + i: c for i, c in enumerate(coeffs)}, ring)


def poly_divmod(num: list, den: list) -> tuple[list, list]:
    """Dense long division over QQ, lowest-first coefficient lists."""
    num = list(num)
    dn = len(den) - 1
    lead = Fraction(den[-1])
    if len(num) <= dn:
        return [Fraction(0)], num
    q = [Fraction(0)] * (len(num) - dn)
    for i in range(len(num) - 1, dn - 1, -1):
        c = Fraction(num[i]) / lead
        q[i - dn] = c
        if c:
            for j in range(dn + 1):
                num[i - dn + j] -= c * den[j]
    rem = num[:dn] if dn else [Fraction(0)]
    return q, rem


def divexact(num: LaurentPoly, den: LaurentPoly) -> LaurentPoly | None:
    """Exact quotient ``num / den`` in QQ[t^±1], or ``None`` if not divisible.

    ZZ inputs give a ZZ result when the quotient happens to be integral and
    a QQ result otherwise.  GF2 division stays in GF2.
    """
    if den.ring != num.ring:
        raise RingMismatch(f"{num.ring} vs {den.ring}")
    if den.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if num.is_zero():
        return num
    if num.ring == "GF2":
        from .gf2 import GF2Poly

        a, sa = GF2Poly.from_laurent(num)
        b, sb = GF2Poly.from_laurent(den)
        q, r = divmod(a, b)
        if r:
            return None
        return q.to_laurent(sa - sb)
    n, sn = _dense_q(num)
    d, sd = _dense_q(den)
    if len(n) < len(d):
        return None
    q, r = poly_divmod(n, d)
    if any(r):
        return None
    out = _from_dense(q, sn - sd, "QQ")
    if num.ring == "ZZ" and out.is_integral():
        return out.to_ring("ZZ")
    return out


def sqrt_exact(f: LaurentPoly) -> CanonicalPoly:
    """Square root up to units: returns ``s`` with ``s*s ≐ f``.

    Works on the monic form so that the rational unit is absorbed; the
    result is canonical (integral, primitive, positive leading term).
    Raises :class:`NotASquare` otherwise.
    """
    if f.is_zero():
        raise NotASquare("zero")
    g = canonicalize(f)
    coeffs, _ = g.to_list()
    deg = len(coeffs) - 1
    if deg % 2:
        raise NotASquare(f"odd degree {deg}")
    lead = coeffs[-1]
    r = isqrt(lead)
    if r * r == lead:
        mon = [Fraction(c) for c in coeffs]
        top = Fraction(r)
    else:
        mon = [Fraction(c, lead) for c in coeffs]
        top = Fraction(1)
    h = deg // 2
    s = [Fraction(0)] * (h + 1)
    s[h] = top
    for j in range(1, h + 1):
        acc = mon[deg - j]
        for i in range(1, j):
            acc -= s[h - i] * s[h - j + i]
        s[h - j] = acc / (2 * top)
    cand = _from_dense(s, 0, "QQ")
    monf = _from_dense(mon, 0, "QQ")
    if cand * cand != monf:
        raise NotASquare(f"{render(f)} is not a square up to units")
    return canonicalize(cand)


# ---------------------------------------------------------------------------
# gcd and square-free decomposition over QQ


def gcd_q(f: LaurentPoly, g: LaurentPoly) -> CanonicalPoly:
    """Greatest common divisor in QQ[t^±1], canonicalized."""
    if f.is_zero() and g.is_zero():
        raise ValueError("gcd(0, 0)")
    if f.is_zero():
        return canonicalize(g)
    if g.is_zero():
        return canonicalize(f)
    a, _ = _dense_q(canonicalize(f))
    b, _ = _dense_q(canonicalize(g))
    while any(b):
        _, r = poly_divmod(a, b)
        while len(r) > 1 and r[-1] == 0:
            r.pop()
        a, b = b, r
        if len(b) == 1 and b[0] != 0:
            return canonicalize(LaurentPoly.one("ZZ"))
    return canonicalize(_from_dense(a, 0, "QQ"))


def squarefree_decomposition(f: LaurentPoly) -> list[CanonicalPoly]:
    """Yun's algorithm: ``[a1, a2, ...]`` with ``f ≐ prod a_i^i``."""
    f = canonicalize(f).to_ring("QQ")
    if f.degree() == 0:
        return []
    df = f.derivative()
    a = gcd_q(f, df).to_ring("QQ")
    b = divexact(f, a)
    c = divexact(df, a)
    d = c - b.derivative()
    out = []
    while b.degree() > 0:
        ai = gcd_q(b, d).to_ring("QQ")
        out.append(canonicalize(ai))
        b = divexact(b, ai)
        c = divexact(d, ai)
        d = c - b.derivative()
    while out and out[-1].degree() == 0:
        out.pop()
    return out


def multiplicity(f: LaurentPoly, q: LaurentPoly) -> int:
    """Largest ``j`` with ``q**j`` dividing ``f`` in QQ[t^±1] (``q`` non-unit)."""
    if q.degree() <= 0:
        raise ValueError("multiplicity of a unit is undefined")
    j = 0
    cur = f
    while True:
        nxt = divexact(cur, q)
        if nxt is None:
            return j
        j += 1
        cur = nxt


def geometric(n_terms: int, ratio: int = 1, start: int = 0, ring="ZZ") -> LaurentPoly:
    """``sum_{i=start}^{n_terms-1} (ratio*t)^i``; ``ratio`` is ``1`` or ``-1``."""
    return LaurentPoly({i: ratio ** i for i in range(start, n_terms)}, ring)
