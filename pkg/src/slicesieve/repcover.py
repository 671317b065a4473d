"""The induced representation on the p-fold cyclic cover.

A homomorphism ``π → Z ⋉ V_p`` sending each Wirtinger generator to
``(x, v_i)`` is turned into ``p × p`` matrices over ``Z[t^±1]`` by

    (x^j, v)  ↦  X^j · D_v,     D_v = diag((-1)^χ(t^i v), i = 0..p-1),

where ``X`` is the cyclic companion matrix (ones on the superdiagonal, ``t``
in the lower-left corner) and ``V_p = F2[t]/(1 + t + ... + t^{p-1})``.  The
group law is ``(x^i, v)(x^j, w) = (x^{i+j}, t^{-j} v + w)``; the identity
``X D_v X^{-1} = D_{tv}`` makes the map multiplicative.  With ``v = 0`` the
image is ``X`` itself and with ``v = 1`` it is the sign-twisted ``Y``.

All images are monomial matrices (one nonzero ``±t^e`` per row), which keeps
products of long words cheap.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .gf2 import GF2Poly, is_prime
from .knotpres import (
    REDUCED_COLUMNS,
    GroupRingElem,
    GroupWord,
    Presentation,
    fox_derivative,
    reduced_generator_arcs,
    reduced_presentation,
    wirtinger_presentation,
)
from .laurent import LaurentPoly
from .polymat import PolyMatrix, adjugate, mat_det


class RepresentationError(ValueError):
    pass


class Monomial:
    """``p × p`` monomial matrix: row ``i`` holds ``sign[i] * t^exp[i]`` in column ``perm[i]``."""

    __slots__ = ("perm", "sign", "exp")

    def __init__(self, perm: Sequence[int], sign: Sequence[int], exp: Sequence[int]):
        self.perm = tuple(perm)
        self.sign = tuple(sign)
        self.exp = tuple(exp)

    @classmethod
    def identity(cls, p: int) -> "Monomial":
        return cls(range(p), [1] * p, [0] * p)

    @classmethod
    def companion(cls, p: int) -> "Monomial":
        return cls([(i + 1) % p for i in range(p)], [1] * p, [0] * (p - 1) + [1])

    @classmethod
    def diagonal(cls, signs: Sequence[int]) -> "Monomial":
        return cls(range(len(signs)), signs, [0] * len(signs))

    def __mul__(self, other: "Monomial") -> "Monomial":
        perm, sign, exp = [], [], []
        for i, j in enumerate(self.perm):
            perm.append(other.perm[j])
            sign.append(self.sign[i] * other.sign[j])
            exp.append(self.exp[i] + other.exp[j])
        return Monomial(perm, sign, exp)

    def inverse(self) -> "Monomial":
        p = len(self.perm)
        perm, sign, exp = [0] * p, [0] * p, [0] * p
        for i, j in enumerate(self.perm):
            perm[j] = i
            sign[j] = self.sign[i]
            exp[j] = -self.exp[i]
        return Monomial(perm, sign, exp)

    def __eq__(self, other):
        return isinstance(other, Monomial) and (self.perm, self.sign, self.exp) == (
            other.perm,
            other.sign,
            other.exp,
        )

    def __hash__(self):
        return hash((self.perm, self.sign, self.exp))

    def to_matrix(self) -> PolyMatrix:
        p = len(self.perm)
        z = LaurentPoly.zero("ZZ")
        rows = [[z] * p for _ in range(p)]
        for i, j in enumerate(self.perm):
            rows[i][j] = LaurentPoly.monomial(self.sign[i], self.exp[i])
        return PolyMatrix(rows, "ZZ")


def _check_prime(p: int) -> None:
    if p % 2 == 0 or not is_prime(p):
        raise RepresentationError(f"{p} is not an odd prime")


# ---------------------------------------------------------------------------
# V_p and the character


def vp_modulus(p: int) -> GF2Poly:
    return GF2Poly.ones(p)


def vp_reduce(v: GF2Poly, p: int) -> GF2Poly:
    return v % vp_modulus(p)


@dataclass(frozen=True)
class CharacterData:
    """Character ``χ : V_p → F2`` given by its values on the basis ``1, t, ..., t^{p-2}``.

    The default is ``χ(t^i) = 1`` exactly for ``i ∈ {0, 2}``.  ``seed`` is
    the value imposed on the arc ``γ`` once the meridian is sent to 0.
    """

    p: int
    support: tuple[int, ...] = (0, 2)
    seed: int = 1

    def __post_init__(self):
        _check_prime(self.p)
        if any(i < 0 for i in self.support):
            raise RepresentationError(f"negative index in character support {self.support}")

    @property
    def mask(self) -> int:
        # Indices past the basis are implied by linearity.  For p = 3 the
        # default gives χ(1) = 1, χ(t) = 0 and then χ(t^2) = χ(1 + t) = 1.
        m = 0
        for i in self.support:
            if i < self.p - 1:
                m |= 1 << i
        return m

    def chi(self, v: GF2Poly) -> int:
        r = vp_reduce(v, self.p).bits & self.mask
        return bin(r).count("1") & 1

    def chi_table(self) -> list[int]:
        """``χ(t^i)`` for ``i = 0..p-1``."""
        return [self.chi(GF2Poly(1 << i)) for i in range(self.p)]

    def signs(self, v: GF2Poly) -> list[int]:
        return [-1 if self.chi(GF2Poly(v.bits << i)) else 1 for i in range(self.p)]


@dataclass(frozen=True)
class CompanionPair:
    p: int
    x: PolyMatrix
    y: PolyMatrix
    x_mono: Monomial = field(repr=False)
    y_mono: Monomial = field(repr=False)

    @property
    def a(self) -> PolyMatrix:
        """``diag(-1, -1, 1, ..., 1)``, so that ``y = a x a``."""
        return Monomial.diagonal([-1, -1] + [1] * (self.p - 2)).to_matrix()

    @property
    def x_inv(self) -> PolyMatrix:
        return self.x_mono.inverse().to_matrix()

    @property
    def y_inv(self) -> PolyMatrix:
        return self.y_mono.inverse().to_matrix()


def companion_pair(p: int, character: CharacterData | None = None) -> CompanionPair:
    _check_prime(p)
    character = character or CharacterData(p)
    xm = Monomial.companion(p)
    ym = xm * Monomial.diagonal(character.signs(GF2Poly(1)))
    return CompanionPair(p, xm.to_matrix(), ym.to_matrix(), xm, ym)


# ---------------------------------------------------------------------------
# solving for ρ̃ on a Wirtinger presentation


@dataclass
class RhoSolution:
    p: int
    values: list[GF2Poly]
    nullity: int

    def value(self, arc: int) -> GF2Poly:
        return self.values[arc]


def _mult_columns(poly: GF2Poly, p: int) -> list[int]:
    """Columns of multiplication by ``poly`` on V_p in the basis ``t^0..t^{p-2}``."""
    mod = vp_modulus(p)
    return [((poly * GF2Poly(1 << b)) % mod).bits for b in range(p - 1)]


def solve_rho(
    pres: Presentation, p: int, fixed: Mapping[int, GF2Poly | int]
) -> RhoSolution | None:
    """Solve ``v_l = (1+t) v_i + t v_j`` over V_p for every Wirtinger relation.

    ``fixed`` pins chosen arcs.  Returns a solution with free coordinates set
    to zero together with the nullity, or ``None`` when inconsistent.
    """
    if pres.wirtinger is None:
        raise RepresentationError("need a Wirtinger presentation")
    _check_prime(p)
    d = p - 1
    N = pres.num_generators
    one_plus_t = _mult_columns(GF2Poly(0b11), p)
    times_t = _mult_columns(GF2Poly(0b10), p)
    rows: list[int] = []  # bit N*d is the constant term

    def var(g, b):
        return 1 << (g * d + b)

    const = 1 << (N * d)
    for l, i, j in pres.wirtinger:
        for r in range(d):
            eq = var(l, r)
            for b in range(d):
                if (one_plus_t[b] >> r) & 1:
                    eq ^= var(i, b)
                if (times_t[b] >> r) & 1:
                    eq ^= var(j, b)
            rows.append(eq)
    for g, val in fixed.items():
        bits = vp_reduce(GF2Poly(val) if isinstance(val, int) else val, p).bits
        for r in range(d):
            rows.append(var(g, r) | (const if (bits >> r) & 1 else 0))
    pivots: dict[int, int] = {}
    for eq in rows:
        for col, prow in pivots.items():
            if eq >> col & 1:
                eq ^= prow
        low = eq & (const - 1)
        if not low:
            if eq & const:
                return None
            continue
        col = low.bit_length() - 1
        for c2 in list(pivots):
            if pivots[c2] >> col & 1:
                pivots[c2] ^= eq
        pivots[col] = eq
    sol = 0
    for col, prow in pivots.items():
        if prow & const:
            sol |= 1 << col
    values = []
    mask = (1 << d) - 1
    for g in range(N):
        values.append(GF2Poly((sol >> (g * d)) & mask))
    return RhoSolution(p, values, N * d - len(pivots))


def rho_for(n: int, m: int, p: int, sign: str = "+", seed: int = 1) -> RhoSolution:
    """``ρ̃`` normalised by ``v(e) = 0`` and ``v(γ) = seed``."""
    pres = wirtinger_presentation(n, m, sign)
    arcs = reduced_generator_arcs(n, m, sign)
    sol = solve_rho(pres, p, {arcs["e"]: 0, arcs["γ"]: seed})
    if sol is None:
        raise RepresentationError(f"no homomorphism to Z ⋉ V_{p} with these normalisations")
    return sol


def verify_rho_constraints(n: int, m: int, p: int, sign: str = "+", seed: int = 1) -> bool:
    """The normalised system is solvable, unique, and constant on the two arc classes.

    The four arcs ``e, α, a, η`` take the value 0 and ``γ, b, β, c`` take
    ``seed``.  With ``seed = 0`` the solution is identically zero.
    """
    if m % p:
        raise RepresentationError(f"{p} does not divide {m}")
    try:
        sol = rho_for(n, m, p, sign, seed)
    except RepresentationError:
        return False
    arcs = reduced_generator_arcs(n, m, sign)
    zero = all(sol.value(arcs[g]) == 0 for g in ("e", "α", "a", "η"))
    seeded = all(sol.value(arcs[g]) == GF2Poly(seed) for g in ("γ", "b", "β", "c"))
    return sol.nullity == 0 and zero and seeded


# ---------------------------------------------------------------------------
# applying the representation


@dataclass
class RepImage:
    """Assignment of every generator to a monomial ``p × p`` matrix."""

    p: int
    images: dict[int, Monomial]
    names: list[str] = field(default_factory=list)
    _inverses: dict[int, Monomial] = field(default_factory=dict, repr=False)

    def image(self, g: int, e: int = 1) -> Monomial:
        if g not in self.images:
            label = self.names[g] if g < len(self.names) else g
            raise RepresentationError(f"generator {label} has no assigned matrix")
        if e == 1:
            return self.images[g]
        if g not in self._inverses:
            self._inverses[g] = self.images[g].inverse()
        return self._inverses[g]

    def word(self, w: GroupWord) -> Monomial:
        acc = Monomial.identity(self.p)
        for g, e in w:
            acc = acc * self.image(g, e)
        return acc

    def assignment_labels(self, pair: CompanionPair) -> dict[str, str]:
        """Which generators map to ``x``, ``y`` or something else."""
        out = {}
        for g, mono in self.images.items():
            label = self.names[g] if g < len(self.names) else str(g)
            out[label] = "x" if mono == pair.x_mono else "y" if mono == pair.y_mono else "other"
        return out


def rep_from_values(values: Mapping[int, GF2Poly], character: CharacterData, names=()) -> RepImage:
    X = Monomial.companion(character.p)
    images = {g: X * Monomial.diagonal(character.signs(v)) for g, v in values.items()}
    return RepImage(character.p, images, list(names))


def trivial_rank_one() -> RepImage:
    """``ε`` alone: every generator goes to ``t`` in ``GL_1``."""

    class _AllT(dict):
        def __contains__(self, key):
            return True

        def __getitem__(self, key):
            return Monomial([0], [1], [1])

    return RepImage(1, _AllT())


def apply_rep(e: GroupRingElem | GroupWord, rep: RepImage) -> PolyMatrix:
    if isinstance(e, GroupWord):
        e = GroupRingElem.of(e)
    p = rep.p
    acc: list[list[dict[int, int]]] = [[{} for _ in range(p)] for _ in range(p)]
    for w, c in e.terms.items():
        mono = rep.word(w)
        for i, j in enumerate(mono.perm):
            cell = acc[i][j]
            x = mono.exp[i]
            cell[x] = cell.get(x, 0) + c * mono.sign[i]
    return PolyMatrix([[LaurentPoly(cell, "ZZ") for cell in row] for row in acc], "ZZ")


def _assemble(blocks: list[list[PolyMatrix]]) -> PolyMatrix:
    rows = []
    for brow in blocks:
        size = brow[0].rows
        for i in range(size):
            row = []
            for b in brow:
                row.extend(b.row(i))
            rows.append(row)
    return PolyMatrix(rows, "ZZ")


def phi_fox_blocks(pres: Presentation, rep: RepImage, columns: Sequence[int]) -> list[list[PolyMatrix]]:
    return [[apply_rep(fox_derivative(r, g), rep) for g in columns] for r in pres.relators]


def reduced_rep(n: int, m: int, p: int, sign: str = "+", character: CharacterData | None = None) -> tuple[Presentation, RepImage]:
    """The reduced presentation with each generator sent to ``X D_v``."""
    character = character or CharacterData(p)
    if m % p:
        raise RepresentationError(f"{p} does not divide {m}")
    sol = rho_for(n, m, p, sign, character.seed)
    arcs = reduced_generator_arcs(n, m, sign)
    pres = reduced_presentation(n, m, sign)
    values = {pres.index(nm): sol.value(arc) for nm, arc in arcs.items()}
    return pres, rep_from_values(values, character, pres.generators)


def build_phi_fox_matrix(
    n: int, m: int, p: int, sign: str = "+", character: CharacterData | None = None
) -> PolyMatrix:
    """``Φ`` applied to the reduced Fox matrix with the meridian column removed.

    Block rows follow the seven relators, block columns the order
    ``a, b, c, α, η, β, γ``.
    """
    pres, rep = reduced_rep(n, m, p, sign, character)
    cols = [pres.index(nm) for nm in REDUCED_COLUMNS]
    return _assemble(phi_fox_blocks(pres, rep, cols))


def relator_images(n: int, m: int, p: int, sign: str = "+", character: CharacterData | None = None) -> list[Monomial]:
    pres, rep = reduced_rep(n, m, p, sign, character)
    return [rep.word(r) for r in pres.relators]


def wirtinger_phi_matrix(
    n: int, m: int, p: int, sign: str = "+", character: CharacterData | None = None, drop_relator: int = -1
) -> PolyMatrix:
    """``Φ`` of the full Wirtinger Fox matrix, one relator and the meridian column removed.

    Each arc goes to ``X D_{v_i}`` with the ``v_i`` solved over V_p.  Only
    practical for small ``p`` and ``n``; used to cross-check the reduced form.
    """
    character = character or CharacterData(p)
    pres = wirtinger_presentation(n, m, sign)
    sol = rho_for(n, m, p, sign, character.seed)
    rep = rep_from_values(dict(enumerate(sol.values)), character, pres.generators)
    rels = list(pres.relators)
    del rels[drop_relator]
    cols = [g for g in range(pres.num_generators) if g != pres.meridian]
    sub = Presentation(pres.generators, rels, pres.meridian)
    return _assemble(phi_fox_blocks(sub, rep, cols))


def trivial_fox_matrix(n: int, m: int, sign: str = "+") -> PolyMatrix:
    """Reduced Fox matrix under ``ε`` alone (a ``7 × 7`` matrix)."""
    pres = reduced_presentation(n, m, sign)
    cols = [pres.index(nm) for nm in REDUCED_COLUMNS]
    return _assemble(phi_fox_blocks(pres, trivial_rank_one(), cols))


# ---------------------------------------------------------------------------
# closed forms in x and y


def _geom(base: PolyMatrix, lo: int, hi: int, scale: int = 1) -> PolyMatrix:
    """``sum_{i=lo}^{hi} (scale * base)^i``."""
    p = base.rows
    acc = PolyMatrix.zeros(p, p)
    power = PolyMatrix.identity(p) * (scale ** lo)
    for _ in range(lo):
        power = power * base
    for i in range(lo, hi + 1):
        acc = acc + power
        power = power * base * scale
    return acc


class MatrixForms:
    """``x, y`` and the block matrices built from them for fixed ``p``."""

    def __init__(self, p: int, character: CharacterData | None = None):
        self.pair = companion_pair(p, character)
        self.p = p
        self.x = self.pair.x
        self.y = self.pair.y
        self.one = PolyMatrix.identity(p)
        self.xy = self.x * self.y
        self.yx = self.y * self.x

    def A(self, n: int) -> PolyMatrix:
        return -_geom(self.y, 0, 2 * n, -1)

    def B(self, n: int) -> PolyMatrix:
        return _geom(self.x, 0, 2 * n - 1, -1)

    def C(self, k: int) -> PolyMatrix:
        return self.one + (self.y - 1) * self.x * _geom(self.yx, 0, k - 1)

    def D(self, k: int, n: int) -> PolyMatrix:
        neg_y_pow = (self.y ** (2 * n + 1)) * (-1)
        return _geom(self.y, 0, 2 * n + 1, -1) + (self.y - 1) * self.x * _geom(self.yx, 0, k - 1) * neg_y_pow

    def E(self, k: int) -> PolyMatrix:
        return self.one + (self.x - 1) * self.y * _geom(self.xy, 0, k - 1)

    def F_numerator(self, k: int, n: int) -> tuple[PolyMatrix, LaurentPoly]:
        """``(adj(E_k) (D_{k,n} - y (xy)^k A_n), det E_k)``, so ``F = first / second``."""
        adjE, detE = adjugate(self.E(k))
        rhs = self.D(k, n) - self.y * (self.xy ** k) * self.A(n)
        return adjE.to_ring("QQ") * rhs.to_ring("QQ"), detE

    def hat_matrix(self, k: int, n: int) -> PolyMatrix:
        A, B, C, D, E = self.A(n), self.B(n), self.C(k), self.D(k, n), self.E(k)
        Z = PolyMatrix.zeros(self.p, self.p)
        top = self.y * (self.xy ** k) * A
        return _assemble([[-A, Z, B], [top, C, Z], [D, C, E]])

    def displayed_phi(self, n: int, k: int) -> PolyMatrix:
        """``Φ(Z)`` assembled entry by entry from the closed-form blocks."""
        x, y, xy, yx, one = self.x, self.y, self.xy, self.yx, self.one
        p = self.p
        Z = PolyMatrix.zeros(p, p)
        sx = lambda lo, hi: _geom(x, lo, hi, -1)  # noqa: E731
        sy = lambda lo, hi: _geom(y, lo, hi, -1)  # noqa: E731
        xy_k = xy ** k
        blocks = [
            [x ** (2 * n), Z, Z, -sx(0, 2 * n), sx(0, 2 * n - 1), Z, Z],
            [Z, Z, Z, sx(0, 2 * n - 1), -sx(0, 2 * n - 2), Z, Z],
            [Z, one, Z, Z, Z, -sy(0, 2 * n + 1), sy(1, 2 * n + 1)],
            [Z, Z, one, Z, Z, -sy(0, 2 * n), sy(1, 2 * n)],
            [Z, Z, (y - 1) * _geom(xy, 0, k - 1) * x, Z, Z, Z, one],
            [Z, Z, (x - 1) * _geom(xy, 0, k - 1) * x - xy_k * x, Z, one, Z, Z],
            [y * _geom(xy, 0, k - 1) - _geom(xy, 0, k), (one - x) * _geom(yx, 0, k - 1), Z, Z, Z, yx ** k, Z],
        ]
        return _assemble(blocks)


def det_A_plus_BF(forms: MatrixForms, k: int, n: int) -> LaurentPoly:
    """``det(A_n + B_n F_{k,n})`` computed without fractions.

    With ``F = adj(E) R / det E`` this is
    ``det(det(E) A + B adj(E) R) / det(E)^p``.
    """
    num, detE = forms.F_numerator(k, n)
    A = forms.A(n).to_ring("QQ")
    B = forms.B(n).to_ring("QQ")
    M = A * detE.to_ring("QQ") + B * num
    top = mat_det(M.to_ring("ZZ") if all(e.is_integral() for r in M.entries() for e in r) else M)
    from .laurent import divexact

    q = divexact(top, detE ** forms.p)
    if q is None:
        raise ArithmeticError("det(E)^p does not divide the cleared determinant")
    return q


def matrix_identity_suite(p: int, ns: Sequence[int] | None = None) -> dict[str, bool]:
    """Matrix identities relating ``x``, ``y`` and the blocks ``C, D, E, F``.

    Each identity is checked for ``k = (p−1)/2`` and ``k = (p−1)/2 + p``;
    independence of ``F_{k,n}`` from ``k`` is checked for every ``n`` in
    ``ns`` (default: ``(p+1)/2`` and ``(p+1)/2 + 1``).
    """
    forms = MatrixForms(p)
    x, y, one = forms.x, forms.y, forms.one
    xy = forms.xy
    t = LaurentPoly.t("ZZ")
    ks = [(p - 1) // 2, (p - 1) // 2 + p]
    ns = list(ns) if ns is not None else [(p + 1) // 2, (p + 1) // 2 + 1]
    out: dict[str, bool] = {}
    xa = x * forms.pair.a
    out["y = a x a"] = y == forms.pair.a * x * forms.pair.a
    out["(xa)^p = tI"] = xa ** p == one * t
    out["det(1-xy) != 0"] = not mat_det(one - xy).is_zero()
    out["det(1-x) = det(1-y)"] = mat_det(one - x) == mat_det(one - y)
    for k in ks:
        xyk = xy ** k
        out[f"(xy)^k x = y (xy)^k [k={k}]"] = xyk * x == y * xyk
        out[f"E_k (1-xy) = (1+y(xy)^k)(1-y) [k={k}]"] = forms.E(k) * (one - xy) == (one + y * xyk) * (one - y)
        out[f"C_k (1-yx) = (1+y(xy)^k)(1-x) [k={k}]"] = forms.C(k) * (one - forms.yx) == (one + y * xyk) * (one - x)
        out[f"det C_k = det E_k [k={k}]"] = mat_det(forms.C(k)) == mat_det(forms.E(k))
    k0, k1 = ks
    for n in ns:
        num0, det0 = forms.F_numerator(k0, n)
        num1, det1 = forms.F_numerator(k1, n)
        out[f"F_{{k,n}} independent of k [n={n}]"] = num0 * det1.to_ring("QQ") == num1 * det0.to_ring("QQ")
    return out
