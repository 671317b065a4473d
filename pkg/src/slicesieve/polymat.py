"""Dense matrices over Laurent polynomial rings.

Determinants come in three flavours:

``cofactor``
    Laplace expansion along rows, memoised on the set of used columns and
    skipping zero entries.  Exponential in the worst case; the oracle.
``bareiss``
    Fraction-free elimination directly over QQ[t^±1] with exact division.
``eval-interp``
    Shift every row to an honest polynomial, bound the degree, evaluate at
    consecutive integers ``2, 3, ...``, take integer determinants by Bareiss
    elimination and interpolate.  Three extra sample points check the
    interpolant.  This is the workhorse for the large matrices.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, lcm
from typing import Callable, Iterable, Sequence

from .gf2 import GF2Poly
from .laurent import LaurentPoly, RingMismatch, divexact, doteq

log = logging.getLogger(__name__)

THREADS_ENV = "SLICE_SIEVE_THREADS"


class DimensionMismatch(ValueError):
    pass


class InterpolationError(ArithmeticError):
    """The interpolated determinant failed a consistency check."""


class PolyMatrix:
    """Rectangular grid of :class:`LaurentPoly` sharing one ring tag."""

    __slots__ = ("rows", "cols", "ring", "_e")

    def __init__(self, entries: Sequence[Sequence], ring: str | None = None):
        rows = [list(r) for r in entries]
        if ring is None:
            ring = next(
                (e.ring for r in rows for e in r if isinstance(e, LaurentPoly)), "ZZ"
            )
        width = len(rows[0]) if rows else 0
        grid = []
        for r in rows:
            if len(r) != width:
                raise DimensionMismatch("ragged rows")
            out = []
            for e in r:
                if not isinstance(e, LaurentPoly):
                    e = LaurentPoly.const(e, ring)
                elif e.ring != ring:
                    raise RingMismatch(f"entry ring {e.ring} in a {ring} matrix")
                out.append(e)
            grid.append(tuple(out))
        self._e = tuple(grid)
        self.rows = len(grid)
        self.cols = width
        self.ring = ring

    # -- constructors ------------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int, ring="ZZ") -> "PolyMatrix":
        z = LaurentPoly.zero(ring)
        return cls([[z] * cols for _ in range(rows)], ring)

    @classmethod
    def identity(cls, n: int, ring="ZZ") -> "PolyMatrix":
        z, o = LaurentPoly.zero(ring), LaurentPoly.one(ring)
        return cls([[o if i == j else z for j in range(n)] for i in range(n)], ring)

    @classmethod
    def scalar(cls, n: int, c: LaurentPoly) -> "PolyMatrix":
        z = LaurentPoly.zero(c.ring)
        return cls([[c if i == j else z for j in range(n)] for i in range(n)], c.ring)

    @classmethod
    def block(cls, blocks: Sequence[Sequence["PolyMatrix | int"]], size: int | None = None, ring="ZZ"):
        """Assemble from a grid of blocks; ``0`` and ``1`` stand for zero and identity blocks."""
        if size is None:
            size = next(b.rows for r in blocks for b in r if isinstance(b, PolyMatrix))
        grid = []
        for brow in blocks:
            mats = []
            for b in brow:
                if isinstance(b, PolyMatrix):
                    mats.append(b)
                    ring = b.ring
                elif b == 0:
                    mats.append(None)
                elif b == 1:
                    mats.append("I")
                else:
                    raise ValueError(f"bad block {b!r}")
            for i in range(size):
                row = []
                for m in mats:
                    if m is None:
                        row.extend([LaurentPoly.zero(ring)] * size)
                    elif m == "I":
                        row.extend(LaurentPoly.one(ring) if j == i else LaurentPoly.zero(ring) for j in range(size))
                    else:
                        row.extend(m[i, j] for j in range(m.cols))
                grid.append(row)
        return cls(grid, ring)

    # -- access --------------------------------------------------------------

    def __getitem__(self, ij):
        i, j = ij
        return self._e[i][j]

    def row(self, i: int) -> tuple:
        return self._e[i]

    def entries(self) -> list[list[LaurentPoly]]:
        return [list(r) for r in self._e]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def is_square(self) -> bool:
        return self.rows == self.cols

    def submatrix(self, rows: Iterable[int], cols: Iterable[int]) -> "PolyMatrix":
        cols = list(cols)
        return PolyMatrix([[self._e[i][j] for j in cols] for i in rows], self.ring)

    def get_block(self, bi: int, bj: int, size: int) -> "PolyMatrix":
        return self.submatrix(range(bi * size, (bi + 1) * size), range(bj * size, (bj + 1) * size))

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix([list(c) for c in zip(*self._e)], self.ring) if self.rows else self

    T = property(transpose)

    def map(self, fn: Callable[[LaurentPoly], LaurentPoly]) -> "PolyMatrix":
        return PolyMatrix([[fn(e) for e in r] for r in self._e])

    def to_ring(self, ring: str) -> "PolyMatrix":
        return PolyMatrix([[e.to_ring(ring) for e in r] for r in self._e], ring)

    # -- arithmetic ------------------------------------------------------------

    def _check_same(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} vs {other.shape}")
        if self.ring != other.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")
        return other

    def __add__(self, other):
        if isinstance(other, (int, LaurentPoly)):
            other = PolyMatrix.scalar(self.rows, _as_poly(other, self.ring))
        other = self._check_same(other)
        return PolyMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self._e, other._e)], self.ring)

    __radd__ = __add__

    def __neg__(self):
        return PolyMatrix([[-a for a in r] for r in self._e], self.ring)

    def __sub__(self, other):
        if isinstance(other, (int, LaurentPoly)):
            other = PolyMatrix.scalar(self.rows, _as_poly(other, self.ring))
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, LaurentPoly)):
            c = _as_poly(other, self.ring)
            return PolyMatrix([[a * c for a in r] for r in self._e], self.ring)
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return mat_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, LaurentPoly)):
            return self * other
        return NotImplemented

    __matmul__ = __mul__

    def __pow__(self, k: int) -> "PolyMatrix":
        if k < 0:
            raise ValueError("use an explicit inverse for negative powers")
        result = PolyMatrix.identity(self.rows, self.ring)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.shape == other.shape and self._e == other._e

    def __hash__(self):
        return hash(self._e)

    def is_zero(self) -> bool:
        return all(e.is_zero() for r in self._e for e in r)

    def __repr__(self):
        return f"PolyMatrix({self.rows}x{self.cols}, ring={self.ring})"

    def pretty(self) -> str:
        cells = [[str(e) for e in r] for r in self._e]
        w = max((len(c) for r in cells for c in r), default=1)
        return "\n".join("[" + " ".join(c.rjust(w) for c in r) + "]" for r in cells)

    def to_json(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "ring": self.ring,
            "entries": [[e.to_json() for e in r] for r in self._e],
        }

    @classmethod
    def from_json(cls, data: dict) -> "PolyMatrix":
        return cls(
            [[LaurentPoly.from_json(e) for e in r] for r in data["entries"]],
            data.get("ring", "ZZ"),
        )

    # -- determinants ----------------------------------------------------------

    def det(self, strategy: "DetStrategy | str" = "eval-interp") -> LaurentPoly:
        return mat_det(self, strategy)


def _as_poly(c, ring) -> LaurentPoly:
    if isinstance(c, LaurentPoly):
        return c
    return LaurentPoly.const(c, ring)


def mat_mul(a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    if a.cols != b.rows:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    if a.ring != b.ring:
        raise RingMismatch(f"{a.ring} vs {b.ring}")
    bt = list(zip(*b._e)) if b.rows else [()] * b.cols
    zero = LaurentPoly.zero(a.ring)
    out = []
    for r in a._e:
        nz = [(k, v) for k, v in enumerate(r) if v]
        row = []
        for col in bt:
            acc = zero
            for k, v in nz:
                w = col[k]
                if w:
                    acc = acc + v * w
            row.append(acc)
        out.append(row)
    return PolyMatrix(out, a.ring) if out else PolyMatrix.zeros(0, b.cols, a.ring)


# ---------------------------------------------------------------------------
# determinants


@dataclass(frozen=True)
class DetStrategy:
    mode: str = "eval-interp"
    eval_points: tuple[int, ...] | None = None
    extra_checks: int = 3
    workers: int | None = None

    def __post_init__(self):
        if self.mode not in ("cofactor", "bareiss", "eval-interp"):
            raise ValueError(f"unknown determinant strategy {self.mode!r}")


def mat_det(m: PolyMatrix, strategy: DetStrategy | str = "eval-interp") -> LaurentPoly:
    if isinstance(strategy, str):
        strategy = DetStrategy(strategy)
    if not m.is_square():
        raise DimensionMismatch(f"determinant of a non-square {m.shape} matrix")
    if m.rows == 0:
        return LaurentPoly.one(m.ring)
    if m.ring == "GF2":
        lifted = PolyMatrix([[LaurentPoly(e.terms(), "ZZ") for e in r] for r in m._e], "ZZ")
        return mat_det(lifted, strategy).to_ring("GF2")
    if strategy.mode == "cofactor":
        return det_cofactor(m)
    if strategy.mode == "bareiss":
        return det_bareiss_poly(m)
    return det_eval_interp(m, strategy)


def det_cofactor(m: PolyMatrix) -> LaurentPoly:
    """Laplace expansion with memoisation on used-column sets."""
    n = m.rows
    ring = m.ring
    rows = m.entries()
    order = sorted(range(n), key=lambda i: sum(1 for e in rows[i] if e))
    sign = _perm_sign(order)
    grid = [[(j, rows[i][j]) for j in range(n) if rows[i][j]] for i in order]
    memo: dict[int, LaurentPoly] = {}
    zero = LaurentPoly.zero(ring)

    def minor(r: int, used: int) -> LaurentPoly:
        if r == n:
            return LaurentPoly.one(ring)
        hit = memo.get(used)
        if hit is not None:
            return hit
        acc = zero
        for j, v in grid[r]:
            bit = 1 << j
            if used & bit:
                continue
            sub = minor(r + 1, used | bit)
            if not sub:
                continue
            # sign from the column's position among the unused columns
            pos = j - bin(used & (bit - 1)).count("1")
            term = v * sub
            acc = acc - term if pos & 1 else acc + term
        memo[used] = acc
        return acc

    d = minor(0, 0)
    return d if sign > 0 else -d


def _perm_sign(perm: Sequence[int]) -> int:
    seen = [False] * len(perm)
    sign = 1
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def det_bareiss_poly(m: PolyMatrix) -> LaurentPoly:
    """Fraction-free elimination over QQ[t^±1]."""
    ring = "QQ"
    a = [[e.to_ring(ring) for e in r] for r in m.entries()]
    n = len(a)
    sign = 1
    prev = LaurentPoly.one(ring)
    for k in range(n - 1):
        if not a[k][k]:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return LaurentPoly.zero(m.ring)
        piv = a[k][k]
        rk = a[k]
        for i in range(k + 1, n):
            ri = a[i]
            f = ri[k]
            for j in range(k + 1, n):
                num = ri[j] * piv - f * rk[j] if f else ri[j] * piv
                q = divexact(num, prev)
                if q is None:
                    raise ArithmeticError("Bareiss division was not exact")
                ri[j] = q.to_ring(ring)
            ri[k] = LaurentPoly.zero(ring)
        prev = piv
    d = a[n - 1][n - 1]
    d = d if sign > 0 else -d
    if m.ring == "ZZ":
        if not d.is_integral():
            raise ArithmeticError("integer matrix with a non-integral determinant")
        return d.to_ring("ZZ")
    return d


def int_det(a: list[list[int]]) -> int:
    """Bareiss determinant of an integer matrix."""
    a = [list(r) for r in a]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        rk = a[k]
        if rk[k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    rk = a[k]
                    break
            else:
                return 0
        piv = rk[k]
        tail = range(k + 1, n)
        nzk = [j for j in tail if rk[j]]
        for i in tail:
            ri = a[i]
            f = ri[k]
            if f:
                if prev == 1:
                    for j in tail:
                        ri[j] *= piv
                    for j in nzk:
                        ri[j] -= f * rk[j]
                else:
                    for j in tail:
                        ri[j] *= piv
                    for j in nzk:
                        ri[j] -= f * rk[j]
                    for j in tail:
                        ri[j] //= prev
            elif piv != prev:
                for j in tail:
                    if ri[j]:
                        ri[j] = ri[j] * piv // prev
        prev = piv
    return sign * a[n - 1][n - 1]


@dataclass
class _Prepared:
    rows: list[list[list[tuple[int, int]]]]  # per row, per column: [(exp, coeff)]
    shift: int
    scale: Fraction
    bound: int


def _prepare(m: PolyMatrix) -> _Prepared | None:
    """Shift rows (or columns) to polynomials and clear denominators."""
    grid = m.entries()
    n = m.rows
    scale = Fraction(1)
    if m.ring == "QQ":
        new = []
        for r in grid:
            den = 1
            for e in r:
                for v in e.terms().values():
                    den = lcm(den, Fraction(v).denominator)
            scale *= den
            new.append([e.scale(den) for e in r])
        grid = new

    def bound(g):
        total, shifts = 0, []
        for r in g:
            nz = [e for e in r if e]
            if not nz:
                return None
            lo = min(e.min_exp() for e in nz)
            hi = max(e.max_exp() for e in nz)
            shifts.append(lo)
            total += hi - lo
        return total, shifts

    rb = bound(grid)
    if rb is None:
        return None
    cols = [list(c) for c in zip(*grid)]
    cb = bound(cols)
    if cb is None:
        return None
    if cb[0] < rb[0]:
        total, shifts = cb
        sparse = [[[] for _ in range(n)] for _ in range(n)]
        for j, col in enumerate(cols):
            for i, e in enumerate(col):
                sparse[i][j] = [(x - shifts[j], int(v)) for x, v in e.terms().items()]
    else:
        total, shifts = rb
        sparse = [
            [[(x - shifts[i], int(v)) for x, v in e.terms().items()] for e in r]
            for i, r in enumerate(grid)
        ]
    return _Prepared(sparse, sum(shifts), scale, total)


def _evaluate(prep_rows, x: int) -> list[list[int]]:
    out = []
    for r in prep_rows:
        row = []
        for terms in r:
            if not terms:
                row.append(0)
            elif len(terms) == 1:
                e, c = terms[0]
                row.append(c * x ** e)
            else:
                row.append(sum(c * x ** e for e, c in terms))
        out.append(row)
    return out


def _det_at(args):
    prep_rows, x = args
    return int_det(_evaluate(prep_rows, x))


def _pool_size(strategy: DetStrategy) -> int:
    if strategy.workers is not None:
        return max(1, strategy.workers)
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def newton_interpolate(xs: Sequence[int], ys: Sequence[int]) -> list[Fraction]:
    """Coefficients (lowest first) of the polynomial through ``(xs, ys)``."""
    n = len(xs)
    dd = [Fraction(y) for y in ys]
    consecutive = all(xs[i + 1] - xs[i] == 1 for i in range(n - 1))
    if consecutive:
        diffs = [int(y) for y in ys]
        newton = [Fraction(diffs[0])]
        for j in range(1, n):
            diffs = [diffs[i + 1] - diffs[i] for i in range(len(diffs) - 1)]
            newton.append(Fraction(diffs[0], factorial(j)))
    else:
        newton = [dd[0]]
        for j in range(1, n):
            dd = [(dd[i + 1] - dd[i]) / (xs[i + j] - xs[i]) for i in range(n - j)]
            newton.append(dd[0])
    coeffs = [Fraction(0)] * n
    # Horner on the Newton form: p = c0 + (x-x0)(c1 + (x-x1)(c2 + ...))
    poly = [newton[-1]]
    for j in range(n - 2, -1, -1):
        shifted = [Fraction(0)] + poly
        for i, c in enumerate(poly):
            shifted[i] -= xs[j] * c
        shifted[0] += newton[j]
        poly = shifted
    coeffs[: len(poly)] = poly
    return coeffs


def det_eval_interp(m: PolyMatrix, strategy: DetStrategy | None = None) -> LaurentPoly:
    strategy = strategy or DetStrategy()
    prep = _prepare(m)
    if prep is None:
        return LaurentPoly.zero(m.ring)
    d = prep.bound
    need = d + 1 + strategy.extra_checks
    if strategy.eval_points is not None:
        pts = list(strategy.eval_points)
        if len(pts) < need or len(set(pts)) != len(pts):
            raise ValueError(f"need {need} distinct evaluation points, got {len(pts)}")
    else:
        pts = list(range(2, 2 + need))
    workers = _pool_size(strategy)
    jobs = [(prep.rows, x) for x in pts]
    if workers > 1 and len(pts) > 8:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as ex:
            vals = list(ex.map(_det_at, jobs))
    else:
        vals = [_det_at(j) for j in jobs]
    xs, ys = pts[: d + 1], vals[: d + 1]
    coeffs = newton_interpolate(xs, ys)
    if any(c.denominator != 1 for c in coeffs):
        raise InterpolationError("interpolated determinant is not integral; degree bound too small?")
    poly = LaurentPoly.from_list([int(c) for c in coeffs], 0, "ZZ")
    for x, y in zip(pts[d + 1 :], vals[d + 1 :]):
        if poly(x) != y:
            raise InterpolationError(f"interpolant disagrees with the determinant at t={x}")
    log.debug("eval-interp det: size %d, bound %d, points %d", m.rows, d, len(pts))
    out = poly.shift(prep.shift)
    if m.ring == "QQ":
        return out.to_ring("QQ").scale(Fraction(1) / prep.scale)
    return out


def mat_det_equiv_check(m: PolyMatrix) -> bool:
    """Cofactor and eval-interp determinants agree up to units."""
    a = det_cofactor(m)
    b = det_eval_interp(m)
    return doteq(a, b) if (a or b) else True


def adjugate(m: PolyMatrix) -> tuple[PolyMatrix, LaurentPoly]:
    """``(adj(m), det(m))`` via fraction-free Gauss-Jordan over QQ[t^±1]."""
    n = m.rows
    ring = "QQ"
    one, zero = LaurentPoly.one(ring), LaurentPoly.zero(ring)
    a = [[e.to_ring(ring) for e in r] + [one if i == j else zero for j in range(n)] for i, r in enumerate(m.entries())]
    sign = 1
    prev = one
    for k in range(n):
        if not a[k][k]:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                raise ZeroDivisionError("singular matrix has no inverse")
        piv = a[k][k]
        rk = a[k]
        for i in range(n):
            if i == k:
                continue
            ri = a[i]
            f = ri[k]
            for j in range(2 * n):
                if j == k:
                    continue
                num = ri[j] * piv - f * rk[j]
                q = divexact(num, prev)
                if q is None:
                    raise ArithmeticError("Gauss-Jordan division was not exact")
                ri[j] = q.to_ring(ring)
            ri[k] = zero
        prev = piv
    det = prev if sign > 0 else -prev
    # after the sweep every diagonal entry equals det(with sign of row swaps)
    adj = PolyMatrix([[a[i][n + j] for j in range(n)] for i in range(n)], ring)
    if sign < 0:
        adj = -adj
    return adj.to_ring(m.ring) if m.ring == "ZZ" and all(e.is_integral() for r in adj.entries() for e in r) else adj, (
        det.to_ring("ZZ") if m.ring == "ZZ" and det.is_integral() else det
    )


# ---------------------------------------------------------------------------
# modules over GF2[t]


@dataclass
class ModuleStructure:
    invariant_factors: list[GF2Poly]
    free_rank: int
    f2_dimension: int | None
    cyclic: bool
    iso_to_vp: bool
    moves: list[tuple] = field(default_factory=list, repr=False, compare=False)

    def to_json(self) -> dict:
        return {
            "invariant_factors": [str(f) for f in self.invariant_factors],
            "free_rank": self.free_rank,
            "f2_dimension": self.f2_dimension,
            "cyclic": self.cyclic,
            "iso_to_vp": self.iso_to_vp,
        }


def smith_gf2t(rows: list[list[GF2Poly]], record: bool = True) -> tuple[list[GF2Poly], list[tuple]]:
    """Diagonalise over GF2[t] by Euclidean row/column moves.

    Returns the diagonal (invariant factors in divisibility order, zeros
    last) and the list of moves applied.
    """
    a = [list(r) for r in rows]
    nr = len(a)
    nc = len(a[0]) if nr else 0
    moves: list[tuple] = []
    diag: list[GF2Poly] = []

    def note(*mv):
        if record:
            moves.append(mv)

    for t in range(min(nr, nc)):
        while True:
            best = None
            for i in range(t, nr):
                for j in range(t, nc):
                    e = a[i][j]
                    if e and (best is None or e.degree < best[0]):
                        best = (e.degree, i, j)
                        if e.degree == 0:
                            break
                if best and best[0] == 0:
                    break
            if best is None:
                return diag + [GF2Poly(0)] * (min(nr, nc) - t), moves
            _, i, j = best
            if i != t:
                a[t], a[i] = a[i], a[t]
                note("swap_rows", t, i)
            if j != t:
                for r in a:
                    r[t], r[j] = r[j], r[t]
                note("swap_cols", t, j)
            piv = a[t][t]
            clean = True
            for i in range(t + 1, nr):
                if a[i][t]:
                    q, r = divmod(a[i][t], piv)
                    ri, rt = a[i], a[t]
                    for j in range(t, nc):
                        if rt[j]:
                            ri[j] = ri[j] + q * rt[j]
                    note("add_row", i, t, str(q))
                    if r:
                        clean = False
            for j in range(t + 1, nc):
                if a[t][j]:
                    q, r = divmod(a[t][j], piv)
                    for i in range(t, nr):
                        if a[i][t]:
                            a[i][j] = a[i][j] + q * a[i][t]
                    note("add_col", j, t, str(q))
                    if r:
                        clean = False
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, nr) for j in range(t + 1, nc) if a[i][j] and (a[i][j] % piv)),
                None,
            )
            if bad is not None:
                for j in range(t, nc):
                    a[t][j] = a[t][j] + a[bad][j]
                note("add_row", t, bad, "1")
                continue
            diag.append(piv)
            break
    return diag, moves


def _gf2_of(e: LaurentPoly, lo: int) -> GF2Poly:
    return GF2Poly.from_exponents(x - lo for x, v in e.terms().items() if int(v) % 2)


def gf2t_module_reduce(pres, extra_rel: GF2Poly | None = None) -> ModuleStructure:
    """Structure of the GF2[t^±1]-module presented by ``pres`` (rows are relations).

    ``pres`` is a GF2 :class:`PolyMatrix` or a grid of :class:`GF2Poly`.
    ``extra_rel`` is adjoined as the relation ``extra_rel * g = 0`` on
    every generator.
    """
    if isinstance(pres, PolyMatrix):
        grid = []
        for r in pres.entries():
            nz = [e for e in r if e]
            lo = min((e.min_exp() for e in nz), default=0)
            grid.append([_gf2_of(e, lo) for e in r])
        ncols = pres.cols
    else:
        grid = [list(r) for r in pres]
        ncols = len(grid[0]) if grid else 0
    if extra_rel is not None:
        for j in range(ncols):
            grid.append([extra_rel if i == j else GF2Poly(0) for i in range(ncols)])
    if not grid:
        return ModuleStructure([], ncols, None if ncols else 0, ncols <= 1, False)
    diag, moves = smith_gf2t(grid)
    diag = diag + [GF2Poly(0)] * (ncols - len(diag))
    factors = []
    free = 0
    for d in diag:
        if not d:
            free += 1
            continue
        d = d.strip_t()
        if d.degree > 0:
            factors.append(d)
    dim = None if free else sum(f.degree for f in factors)
    cyclic = free + len(factors) <= 1
    iso = extra_rel is not None and free == 0 and len(factors) == 1 and factors[0] == extra_rel.strip_t()
    return ModuleStructure(factors, free, dim, cyclic, iso, moves)
