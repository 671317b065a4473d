"""Seifert matrices, Alexander polynomials and mod-2 homology of branched covers.

Everything here concerns the pretzel knots ``K+ = P(2n, m, -(2n+1), -m)`` and
``K- = P(2n, m, -(2n-1), -m)`` together with a cover order ``p``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .gf2 import GF2Poly, is_prime, two_is_primitive
from .laurent import CanonicalPoly, LaurentPoly, canonicalize
from .polymat import ModuleStructure, PolyMatrix, gf2t_module_reduce, mat_det


class SpecError(ValueError):
    """Invalid knot parameters."""


class HomologyMismatch(RuntimeError):
    """The Seifert route and the explicit presentation disagree."""


def default_prime(m: int) -> int:
    """Smallest prime divisor of ``m`` at which 2 is a primitive root.

    Falls back to the smallest odd prime divisor when none qualifies, so the
    hypothesis report can say why the obstruction does not apply.
    """
    m = abs(m)
    divisors = [q for q in range(3, m + 1, 2) if m % q == 0 and is_prime(q)]
    if not divisors:
        raise SpecError(f"m = {m} has no odd prime divisor")
    for q in divisors:
        if two_is_primitive(q):
            return q
    return divisors[0]


@dataclass(frozen=True)
class PretzelSpec:
    """Parameters ``(n, m, p, sign)`` of a pretzel knot and its cover order."""

    n: int
    m: int
    p: int
    sign: str = "+"

    def __post_init__(self):
        if self.sign in ("plus", "minus"):
            object.__setattr__(self, "sign", "+" if self.sign == "plus" else "-")
        if not isinstance(self.n, int) or self.n < 1:
            raise SpecError("n must be a positive integer")
        if self.m % 2 == 0:
            raise SpecError("m must be odd")
        if self.m < 3:
            raise SpecError("m must be at least 3")
        if self.sign not in ("+", "-"):
            raise SpecError("sign must be plus or minus")
        if self.p < 3 or not is_prime(self.p):
            raise SpecError("p must be an odd prime")

    @classmethod
    def make(cls, n: int, m: int, p: int | None = None, sign: str = "+") -> "PretzelSpec":
        if m % 2 == 0:
            raise SpecError("m must be odd")
        return cls(n, m, default_prime(m) if p is None else p, sign)

    @property
    def k(self) -> int:
        return (self.m - 1) // 2

    @property
    def a(self) -> int:
        return (2 * self.n) % self.p

    @property
    def b(self) -> int:
        return (2 * self.n) // self.p

    @property
    def third(self) -> int:
        """Crossing count of the third band, ``2n+1`` or ``2n-1``."""
        return 2 * self.n + 1 if self.sign == "+" else 2 * self.n - 1

    @property
    def sign_word(self) -> str:
        return "plus" if self.sign == "+" else "minus"

    def to_json(self) -> dict:
        return {"n": self.n, "m": self.m, "p": self.p, "sign": self.sign_word}


HYPOTHESIS_FLAGS = (
    "m-odd",
    "p-divides-m",
    "two-primitive-mod-p",
    "p-coprime-to-2n(2n±1)",
    "n-ge-(p+1)/2",
    "not-(3,5)",
)


@dataclass
class HypothesisReport:
    flags: dict[str, bool]
    a: int
    b: int
    k: int

    @property
    def all_pass(self) -> bool:
        return all(self.flags.values())

    def failing(self) -> list[str]:
        return [name for name in HYPOTHESIS_FLAGS if not self.flags[name]]

    def structural_pass(self) -> bool:
        """Every flag except the single excluded pair ``(n, p) = (3, 5)``."""
        return all(v for name, v in self.flags.items() if name != "not-(3,5)")

    def to_json(self) -> dict:
        return dict(self.flags)


def hypothesis_check(spec: PretzelSpec) -> HypothesisReport:
    n, m, p = spec.n, spec.m, spec.p
    flags = {
        "m-odd": m % 2 == 1,
        "p-divides-m": m % p == 0,
        "two-primitive-mod-p": two_is_primitive(p),
        "p-coprime-to-2n(2n±1)": (2 * n * spec.third) % p != 0,
        "n-ge-(p+1)/2": 2 * n >= p + 1,
        "not-(3,5)": (n, p) != (3, 5),
    }
    return HypothesisReport(flags, spec.a, spec.b, spec.k)


# ---------------------------------------------------------------------------
# Seifert matrix


def bidiagonal(k: int) -> list[list[int]]:
    """``B_k``: ones on the diagonal, minus ones just above it."""
    return [[1 if j == i else (-1 if j == i + 1 else 0) for j in range(k)] for i in range(k)]


def first_unit_row(k: int) -> list[list[int]]:
    """``U_k``: the ``1 × k`` row ``[1, 0, ..., 0]``."""
    return [[1] + [0] * (k - 1)]


def _transpose(rows: list[list[int]]) -> list[list[int]]:
    return [list(c) for c in zip(*rows)]


def seifert_blocks(spec: PretzelSpec) -> list[int]:
    """Sizes of the five diagonal blocks."""
    n, m = spec.n, spec.m
    third = 2 * n if spec.sign == "+" else 2 * n - 2
    return [2 * n - 1, m - 1, third, m - 1, 1]


def seifert_matrix(spec: PretzelSpec) -> PolyMatrix:
    """Integer Seifert matrix built from ``B_k`` and ``U_k`` blocks.

    For ``K-`` the third band block shrinks from ``2n`` to ``2n-2`` and keeps
    the same shape.
    """
    sizes = seifert_blocks(spec)
    off = [sum(sizes[:i]) for i in range(5)]
    size = sum(sizes)
    rows = [[0] * size for _ in range(size)]

    def put(bi, bj, mat, sgn=1):
        for i, r in enumerate(mat):
            for j, v in enumerate(r):
                rows[off[bi] + i][off[bj] + j] += sgn * v

    s0, s1, s2, s3, _ = sizes
    put(0, 0, bidiagonal(s0), -1)
    put(1, 1, _transpose(bidiagonal(s1)), -1)
    put(1, 4, _transpose(first_unit_row(s1)), -1)
    if s2:
        put(2, 2, _transpose(bidiagonal(s2)))
        put(2, 4, _transpose(first_unit_row(s2)))
    put(3, 3, bidiagonal(s3))
    put(4, 0, first_unit_row(s0), -1)
    put(4, 3, first_unit_row(s3))
    return PolyMatrix(rows, "ZZ")


def alexander_matrix(seifert: PolyMatrix) -> PolyMatrix:
    """``t·A − Aᵀ``."""
    t = LaurentPoly.t("ZZ")
    return seifert * t - seifert.T


def alexander_polynomial(spec: PretzelSpec) -> CanonicalPoly:
    return canonicalize(mat_det(alexander_matrix(seifert_matrix(spec))))


def alexander_closed_form(m: int) -> CanonicalPoly:
    """``(Σ_{i<m} (−t)^i)²``."""
    t = LaurentPoly.t("ZZ")
    s = LaurentPoly.zero("ZZ")
    for i in range(m):
        s = s + (-t) ** i
    return canonicalize(s * s)


# ---------------------------------------------------------------------------
# H_1 of the branched cover with Z/2 coefficients


def explicit_mod2_presentation(spec: PretzelSpec) -> list[list[GF2Poly]]:
    """The 2 × 2 mod-2 presentation with ``Σ_{i<p} t^i`` on the diagonal.

    The corner is ``(Σ_{i<2n+1} t^i)(Σ_{i<2n} t^i)`` for ``K+`` and
    ``(Σ_{i<2n} t^i)(Σ_{i<2n-1} t^i)`` for ``K-``.
    """
    big = max(spec.third, 2 * spec.n)
    corner = GF2Poly.ones(big) * GF2Poly.ones(big - 1)
    sp = GF2Poly.ones(spec.p)
    return [[sp, corner], [GF2Poly(0), sp]]


def branched_cover_h1_mod2(spec: PretzelSpec, cross_check: bool = True) -> ModuleStructure:
    """``H_1(Σ_p; Z/2)`` as an ``F_2[t]``-module.

    The Seifert presentation ``t·A − Aᵀ`` is reduced mod 2, the relation
    ``Σ_{i<p} t^i`` is adjoined on every generator, and the result is
    diagonalised.  With ``cross_check`` the explicit 2 × 2 presentation is
    reduced as well and must give the same structure.
    """
    if spec.m % spec.p:
        raise SpecError(f"p = {spec.p} does not divide m = {spec.m}")
    sp = GF2Poly.ones(spec.p)
    pres = alexander_matrix(seifert_matrix(spec)).to_ring("GF2")
    structure = gf2t_module_reduce(pres, sp)
    if cross_check:
        # The 2 x 2 matrix alone presents F_2[t]/(Σ t^i)^2; the covering
        # relation has to be imposed on its generators as well.
        other = gf2t_module_reduce(explicit_mod2_presentation(spec), sp)
        if structure != other:
            raise HomologyMismatch(
                f"Seifert route gives {structure.to_json()}, explicit route gives {other.to_json()}"
            )
    return structure
