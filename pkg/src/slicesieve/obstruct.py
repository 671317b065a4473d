"""Closed forms ``f_b`` and ``g_n``, the twisted polynomial pipeline and the verdict chain.

The certificate that the reduced twisted Alexander polynomial is not a norm
combines a unit-circle root criterion and an Eisenstein test on ``f`` with
exact division of ``g`` by ``f``.  Nothing on the verdict path uses floating
point.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from .homology import PretzelSpec, SpecError, hypothesis_check
from .laurent import (
    CanonicalPoly,
    LaurentPoly,
    NotASquare,
    canonicalize,
    divexact,
    doteq,
    geometric,
    is_symmetric,
    parse,
    render,
    sqrt_exact,
    squarefree_decomposition,
)
from .polymat import DetStrategy, PolyMatrix, mat_det
from .repcover import CharacterData, RepresentationError, build_phi_fox_matrix


class DecompositionError(ValueError):
    """``2n = bp + a`` does not satisfy the closed-form preconditions."""


class NotDivisible(ArithmeticError):
    pass


class CrossCheckError(RuntimeError):
    """Two independent computations of the same object disagree."""


class DegenerateTAP(ArithmeticError):
    """``det Φ(Z)`` vanishes for this character."""


VERDICTS = ("ObstructedNotSlice", "NormNoObstruction", "HypothesesFail", "Inconclusive")


def _t() -> LaurentPoly:
    return LaurentPoly.t("ZZ")


def _alt(lo: int, hi: int) -> LaurentPoly:
    """``Σ_{i=lo}^{hi} (−t)^i`` (zero when ``hi < lo``)."""
    return geometric(hi + 1, -1, lo)


# ---------------------------------------------------------------------------
# closed forms


def decompose(n: int, p: int) -> tuple[int, int]:
    """``(a, b)`` with ``2n = bp + a`` and ``0 ≤ a < p``."""
    return (2 * n) % p, (2 * n) // p


def f_poly(b: int, sign: str = "+") -> CanonicalPoly:
    """``2 Σ_{i≤2b} t^i ± t^b``."""
    if b < 1:
        raise ValueError("b must be at least 1")
    if sign not in ("+", "-"):
        raise ValueError("sign must be '+' or '-'")
    mid = 1 if sign == "+" else -1
    return canonicalize(geometric(2 * b + 1) * 2 + LaurentPoly.monomial(mid, b))


def _check_decomposition(n: int, p: int) -> tuple[int, int]:
    if (2 * n * (2 * n + 1)) % p == 0:
        raise DecompositionError(f"p = {p} divides 2n(2n+1) for n = {n}")
    a, b = decompose(n, p)
    if not 0 < a < p - 1 or b < 1:
        raise DecompositionError(f"2n = {2 * n} = {b}·{p} + {a} needs 0 < a < p-1 and b ≥ 1")
    return a, b


def g_raw(n: int, p: int) -> LaurentPoly:
    """The formula for ``g_n`` before normalisation (defined for any ``a, b``)."""
    a, b = decompose(n, p)
    t = _t()
    s = _alt(0, b - 1)
    return _alt(0, 2 * b) * (4 * a - 6) + (-t) ** b - t * s * s * (4 * (p - 4))


def g_poly(n: int, p: int) -> CanonicalPoly:
    _check_decomposition(n, p)
    return canonicalize(g_raw(n, p))


def beta_poly(b: int) -> LaurentPoly:
    """``2 Σ_{i=1}^{b} (−t)^i``."""
    return _alt(1, b) * 2


def psi_poly(b: int) -> LaurentPoly:
    """``(−1)^b t (2 Σ_{i≤2b} (−t)^i + (−t)^b)``."""
    t = _t()
    return t * (_alt(0, 2 * b) * 2 + (-t) ** b) * ((-1) ** b)


def g_matrix(n: int, p: int) -> PolyMatrix:
    """The 3 × 3 matrix whose determinant is ``(1+t) g_n``."""
    a, b = _check_decomposition(n, p)
    t = _t()
    sgn = (-1) ** b
    return PolyMatrix(
        [
            [beta_poly(b) * (p - a - 2), -1, -1],
            [psi_poly(b), 2 * sgn, t ** (b + 1) * -2],
            [beta_poly(b + 1) * (a - 2), 1, -t],
        ],
        "ZZ",
    )


def g_matrix_route(n: int, p: int) -> CanonicalPoly:
    det = mat_det(g_matrix(n, p))
    q = divexact(det, _t() + 1)
    if q is None:
        raise CrossCheckError(f"1+t does not divide det G_n for n={n}, p={p}")
    return canonicalize(q)


def valid_table_ns(p: int, n_max: int) -> list[int]:
    """``n`` in ``[(p+1)/2, n_max]`` satisfying the closed-form preconditions."""
    out = []
    for n in range((p + 1) // 2, n_max + 1):
        try:
            _check_decomposition(n, p)
        except DecompositionError:
            continue
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# pipeline


@dataclass
class ReducedTAP:
    """``numerator · (t−1)^{−denom_power}`` with optional factors ``(f, g, h)``."""

    numerator: CanonicalPoly
    denom_power: int = 2
    factors: tuple | None = None


def twisted_reduced_polynomial(
    spec: PretzelSpec,
    strategy: DetStrategy | None = None,
    character: CharacterData | None = None,
) -> ReducedTAP:
    if spec.m % spec.p:
        raise SpecError(f"p = {spec.p} does not divide m = {spec.m}")
    phi = build_phi_fox_matrix(spec.n, spec.m, spec.p, spec.sign, character)
    det = mat_det(phi, strategy or DetStrategy())
    if det.is_zero():
        raise DegenerateTAP(f"det Φ(Z) = 0 for {spec}")
    return ReducedTAP(canonicalize(det))


def extract_h(tap: ReducedTAP, f: LaurentPoly, g: LaurentPoly) -> CanonicalPoly:
    """``h`` with ``numerator ≐ f g h²``; it must be integral and symmetric."""
    q = divexact(tap.numerator, f * g)
    if q is None:
        raise NotDivisible(f"f·g does not divide {render(tap.numerator)}")
    if q.degree() == 0:
        h = canonicalize(LaurentPoly.one())
    else:
        h = sqrt_exact(q)
    if not h.is_integral() or not is_symmetric(h):
        raise CrossCheckError(f"h = {render(h)} is not a symmetric integral polynomial")
    tap.factors = (canonicalize(f), canonicalize(g), h)
    return h


@dataclass
class NumeratorSplit:
    """``numerator ≐ f^mult · g · h²`` with ``g`` the odd-multiplicity part."""

    multiplicity: int
    g: CanonicalPoly | None
    h: CanonicalPoly | None


def split_numerator(numerator: LaurentPoly, f: LaurentPoly) -> NumeratorSplit:
    mult = 0
    rest = numerator
    while True:
        nxt = divexact(rest, f)
        if nxt is None:
            break
        rest = nxt
        mult += 1
    if mult == 0:
        return NumeratorSplit(0, None, None)
    odd = LaurentPoly.one("QQ")
    half = LaurentPoly.one("QQ")
    for i, part in enumerate(squarefree_decomposition(rest), start=1):
        part = part.to_ring("QQ")
        if i % 2:
            odd = odd * part
        half = half * part ** (i // 2)
    return NumeratorSplit(mult, canonicalize(odd), canonicalize(half))


# ---------------------------------------------------------------------------
# unit-circle and irreducibility certificates


def _symmetric_coeffs(f: LaurentPoly) -> list[Fraction]:
    c = canonicalize(f)
    coeffs, _ = c.to_list()
    if (len(coeffs) - 1) % 2 or coeffs != coeffs[::-1]:
        raise ValueError(f"{render(c)} is not symmetric of even degree")
    return [Fraction(x) for x in coeffs]


def lakatos_decompose(f: LaurentPoly) -> tuple[Fraction, list[Fraction]]:
    """``(l, [a_1, ..., a_{r/2}])`` with ``f = l Σ_{i≤r} z^i + Σ a_k (z^{r−k} + z^k)``.

    The middle term has ``z^{r−k} + z^k = 2 z^{r/2}``, so its coefficient is
    ``l + 2 a_{r/2}``.
    """
    c = _symmetric_coeffs(f)
    r = len(c) - 1
    if r < 2:
        raise ValueError("degree must be at least 2")
    l = c[0]
    half = r // 2
    a = [c[k] - l for k in range(1, half)]
    a.append((c[half] - l) / 2)
    return l, a


def lakatos_check(f: LaurentPoly) -> bool:
    """``|l| ≥ 2 Σ |a_k|``, which forces every root onto the unit circle."""
    l, a = lakatos_decompose(f)
    return abs(l) >= 2 * sum(abs(x) for x in a)


def symmetric_descent(f: LaurentPoly) -> LaurentPoly:
    """``l`` of degree ``b`` with ``f(t) = t^b l(t + 1/t)``, as a polynomial in ``u``."""
    c = _symmetric_coeffs(f)
    b = (len(c) - 1) // 2
    # chebyshev-style basis: P_0 = 2, P_1 = u, P_{j+1} = u P_j − P_{j−1}; P_j = t^j + t^{−j}
    u = LaurentPoly.t("QQ")
    basis = [LaurentPoly.const(2, "QQ"), u]
    for j in range(1, b):
        basis.append(u * basis[j] - basis[j - 1])
    out = LaurentPoly.const(c[b], "QQ")
    for j in range(1, b + 1):
        out = out + basis[j] * c[b + j]
    return out.to_ring("ZZ") if out.is_integral() else out


def eisenstein_at_2(l: LaurentPoly) -> bool:
    """Eisenstein at 2 for the reversal ``u^b l(1/u)``."""
    if not l.is_integral() or l.is_zero():
        return False
    coeffs, shift = l.to_list()
    if shift != 0:
        return False
    rev = [int(x) for x in reversed(coeffs)]
    if len(rev) < 2:
        return False
    lead, rest, const = rev[-1], rev[:-1], rev[0]
    return lead % 2 == 1 and all(x % 2 == 0 for x in rest) and const % 4 != 0


# ---------------------------------------------------------------------------
# verdict


def _coeffs(f: LaurentPoly | None) -> list[int] | None:
    if f is None:
        return None
    coeffs, _ = canonicalize(f).to_list()
    return [int(x) for x in coeffs]


@dataclass
class NormVerdict:
    lakatos_pass: bool | None = None
    descent_poly: LaurentPoly | None = None
    eisenstein_pass: bool | None = None
    f_divides_g: bool | None = None
    verdict: str = "Inconclusive"
    stage: str | None = None


@dataclass
class ObstructionReport:
    spec: dict
    hypotheses: dict
    a: int
    b: int
    f: list[int] | None
    g: list[int] | None
    h: list[int] | None
    numerator: list[int] | None
    verdict: str
    chain: dict
    stage: str | None = None
    rendered: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "spec": self.spec,
            "hypotheses": self.hypotheses,
            "a": self.a,
            "b": self.b,
            "f": self.f,
            "g": self.g,
            "h": self.h,
            "numerator": self.numerator,
            "verdict": self.verdict,
            "chain": self.chain,
            "stage": self.stage,
            "rendered": self.rendered,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), ensure_ascii=False, indent=2, sort_keys=False)

    @classmethod
    def from_json(cls, data: dict) -> "ObstructionReport":
        return cls(**data)


def _render_list(coeffs: list[int] | None) -> str | None:
    if coeffs is None:
        return None
    return render(LaurentPoly.from_list(coeffs))


def norm_obstruction_verdict(
    spec: PretzelSpec,
    mode: str = "both",
    strategy: DetStrategy | None = None,
    character: CharacterData | None = None,
) -> tuple[NormVerdict, ObstructionReport]:
    """Run the hypothesis checks and the non-norm chain for one spec.

    ``mode`` is ``closed-form`` (no determinant), ``pipeline`` (``g`` read
    off the determinant) or ``both`` (closed-form ``g`` plus extraction of
    ``h`` from the determinant as a cross-check).  ``K-`` always runs the
    pipeline since it has no closed-form ``g``.
    """
    if mode not in ("closed-form", "pipeline", "both"):
        raise ValueError(f"unknown mode {mode!r}")
    if spec.sign == "-":
        mode = "pipeline"
    hyp = hypothesis_check(spec)
    nv = NormVerdict()
    f = g = h = numerator = None

    def report() -> tuple[NormVerdict, ObstructionReport]:
        lists = {"f": _coeffs(f), "g": _coeffs(g), "h": _coeffs(h), "numerator": _coeffs(numerator)}
        rep = ObstructionReport(
            spec=spec.to_json(),
            hypotheses=hyp.to_json(),
            a=hyp.a,
            b=hyp.b,
            verdict=nv.verdict,
            chain={"lakatos": nv.lakatos_pass, "eisenstein": nv.eisenstein_pass, "f_divides_g": nv.f_divides_g},
            stage=nv.stage,
            rendered={k: _render_list(v) for k, v in lists.items()},
            **lists,
        )
        return nv, rep

    if not hyp.structural_pass():
        nv.verdict = "HypothesesFail"
        nv.stage = ",".join(hyp.failing())
        return report()

    f = f_poly(hyp.b, spec.sign)
    if mode in ("closed-form", "both"):
        g = g_poly(spec.n, spec.p)

    if mode in ("pipeline", "both"):
        try:
            tap = twisted_reduced_polynomial(spec, strategy, character)
        except (DegenerateTAP, RepresentationError) as exc:
            nv.stage = f"pipeline: {exc}"
            return report()
        numerator = tap.numerator
        if mode == "both":
            try:
                h = extract_h(tap, f, g)
            except (NotDivisible, NotASquare) as exc:
                raise CrossCheckError(f"closed form and determinant disagree for {spec}: {exc}") from exc
        else:
            split = split_numerator(numerator, f)
            if split.multiplicity != 1:
                nv.stage = f"f appears {split.multiplicity} times in the numerator"
                return report()
            g, h = split.g, split.h
            if not (h.is_integral() and is_symmetric(h) and is_symmetric(g)):
                nv.stage = "numerator does not split as f·g·h² with h symmetric"
                return report()

    if doteq(f, g):
        nv.verdict = "NormNoObstruction"
        nv.stage = "f ≐ g"
        return report()
    if not hyp.all_pass:
        nv.verdict = "HypothesesFail"
        nv.stage = ",".join(hyp.failing())
        return report()

    nv.lakatos_pass = lakatos_check(f)
    nv.descent_poly = symmetric_descent(f)
    nv.eisenstein_pass = eisenstein_at_2(nv.descent_poly)
    nv.f_divides_g = divexact(g, f) is not None
    if not nv.lakatos_pass:
        nv.stage = "lakatos"
    elif not nv.eisenstein_pass:
        nv.stage = "eisenstein"
    elif nv.f_divides_g:
        nv.stage = "f divides g"
    else:
        nv.verdict = "ObstructedNotSlice"
    return report()


# ---------------------------------------------------------------------------
# golden tables


def load_golden(path: str | None = None) -> dict:
    """Golden ``(f_b, g_n)`` rows keyed by ``p`` (as strings)."""
    if path is None:
        text = resources.files("slicesieve").joinpath("data/golden_tables.json").read_text()
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return json.loads(text)


@dataclass
class TableRow:
    n: int
    a: int
    b: int
    f: CanonicalPoly
    g: CanonicalPoly

    def decomposition(self, p: int) -> str:
        return f"{2 * self.n} = {self.b}({p})+{self.a}"


def table_rows(p: int, ns) -> list[TableRow]:
    rows = []
    for n in ns:
        a, b = _check_decomposition(n, p)
        rows.append(TableRow(n, a, b, f_poly(b), g_poly(n, p)))
    return rows


def verify_rows(p: int, golden: dict) -> list[str]:
    """Mismatch messages for the golden rows of ``p`` (empty when all match)."""
    entries = golden.get(str(p))
    if entries is None:
        raise KeyError(f"no golden data for p = {p}")
    problems = []
    for entry in entries["rows"]:
        n = int(entry["n"])
        try:
            row = table_rows(p, [n])[0]
        except DecompositionError as exc:
            problems.append(f"n={n}: {exc}")
            continue
        want_f = canonicalize(parse(entry["f"]))
        want_g = canonicalize(parse(entry["g"]))
        if (row.a, row.b) != (entry["a"], entry["b"]):
            problems.append(f"n={n}: decomposition {row.b}·{p}+{row.a}, expected {entry['b']}·{p}+{entry['a']}")
        if row.f != want_f:
            problems.append(f"n={n}: f = {render(row.f)}, expected {entry['f']}")
        if row.g != want_g:
            problems.append(f"n={n}: g = {render(row.g)}, expected {entry['g']}")
    return problems
