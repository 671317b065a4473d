"""Dense bit-packed polynomials over GF(2).

Bit ``i`` of the integer is the coefficient of ``t^i``.
"""

from __future__ import annotations

from .laurent import LaurentPoly


class GF2Poly:
    __slots__ = ("bits",)

    def __init__(self, bits: int = 0):
        if bits < 0:
            raise ValueError("bit pattern must be non-negative")
        self.bits = bits

    @classmethod
    def from_exponents(cls, exps) -> "GF2Poly":
        b = 0
        for e in exps:
            b ^= 1 << e
        return cls(b)

    @classmethod
    def ones(cls, n: int) -> "GF2Poly":
        """``1 + t + ... + t^{n-1}``."""
        return cls((1 << n) - 1)

    @classmethod
    def from_laurent(cls, f: LaurentPoly) -> tuple["GF2Poly", int]:
        """Return ``(poly, shift)`` with ``f = t^shift * poly`` mod 2."""
        terms = {e: v for e, v in f.terms().items() if int(v) % 2}
        if not terms:
            return cls(0), 0
        lo = min(terms)
        return cls.from_exponents(e - lo for e in terms), lo

    def to_laurent(self, shift: int = 0) -> LaurentPoly:
        return LaurentPoly({shift + e: 1 for e in self.exponents()}, "GF2")

    def exponents(self):
        b, i = self.bits, 0
        while b:
            if b & 1:
                yield i
            b >>= 1
            i += 1

    @property
    def degree(self) -> int:
        return self.bits.bit_length() - 1

    def __bool__(self):
        return self.bits != 0

    def __eq__(self, other):
        if isinstance(other, int):
            return self.bits == other
        return isinstance(other, GF2Poly) and self.bits == other.bits

    def __hash__(self):
        return hash(self.bits)

    def __add__(self, other):
        return GF2Poly(self.bits ^ other.bits)

    __sub__ = __add__

    def __mul__(self, other):
        a, b = self.bits, other.bits
        if a.bit_length() < b.bit_length():
            a, b = b, a
        r = 0
        while b:
            if b & 1:
                r ^= a
            a <<= 1
            b >>= 1
        return GF2Poly(r)

    def __divmod__(self, other):
        if not other.bits:
            raise ZeroDivisionError("GF2 polynomial division by zero")
        a = self.bits
        db = other.degree
        q = 0
        while a and a.bit_length() - 1 >= db:
            s = a.bit_length() - 1 - db
            q |= 1 << s
            a ^= other.bits << s
        return GF2Poly(q), GF2Poly(a)

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def strip_t(self) -> "GF2Poly":
        """Remove factors of ``t`` (units in the Laurent ring)."""
        b = self.bits
        if not b:
            return self
        while not b & 1:
            b >>= 1
        return GF2Poly(b)

    def __repr__(self):
        return f"GF2Poly({self})"

    def __str__(self):
        if not self.bits:
            return "0"
        parts = []
        for e in sorted(self.exponents(), reverse=True):
            parts.append("1" if e == 0 else "t" if e == 1 else f"t^{e}")
        return "+".join(parts)


def gf2_gcd(a: GF2Poly, b: GF2Poly) -> GF2Poly:
    """Monic gcd by Euclid (every nonzero GF(2) polynomial is monic)."""
    if not a and not b:
        raise ValueError("gcd(0, 0)")
    while b:
        a, b = b, a % b
    return a


def gf2_xgcd(a: GF2Poly, b: GF2Poly) -> tuple[GF2Poly, GF2Poly, GF2Poly]:
    """``(g, u, v)`` with ``u*a + v*b = g``."""
    r0, r1 = a, b
    s0, s1 = GF2Poly(1), GF2Poly(0)
    t0, t1 = GF2Poly(0), GF2Poly(1)
    while r1:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 + q * s1
        t0, t1 = t1, t0 + q * t1
    return r0, s0, t0


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def multiplicative_order(a: int, n: int) -> int:
    if n < 2 or a % n == 0:
        raise ValueError(f"{a} is not a unit mod {n}")
    k, x = 1, a % n
    while x != 1:
        x = x * a % n
        k += 1
    return k


def two_is_primitive(p: int) -> bool:
    return multiplicative_order(2, p) == p - 1


def gf2_is_irreducible_cyclotomic(p: int) -> bool:
    """Is ``1 + t + ... + t^{p-1}`` irreducible over GF(2)?

    It is exactly when 2 has order ``p - 1`` modulo ``p``.
    """
    if p % 2 == 0 or not is_prime(p):
        raise ValueError(f"{p} is not an odd prime")
    return two_is_primitive(p)
