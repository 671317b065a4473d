"""Knot group presentations for the four-strand pretzels and Fox calculus.

Generators are dense integer ids; a :class:`Presentation` carries display
names.  Words are stored fully expanded and freely reduced.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence


class PresentationError(ValueError):
    pass


class GroupWord:
    """A freely reduced word: a tuple of ``(generator, ±1)`` letters."""

    __slots__ = ("letters", "_hash")

    def __init__(self, letters: Iterable[tuple[int, int]] = ()):
        stack: list[tuple[int, int]] = []
        for g, e in letters:
            if e not in (1, -1):
                raise ValueError(f"letter exponent must be ±1, got {e}")
            if stack and stack[-1][0] == g and stack[-1][1] == -e:
                stack.pop()
            else:
                stack.append((g, e))
        self.letters = tuple(stack)
        self._hash = None

    @classmethod
    def gen(cls, g: int, e: int = 1) -> "GroupWord":
        if e == 0:
            return cls()
        sgn = 1 if e > 0 else -1
        return cls([(g, sgn)] * abs(e))

    @classmethod
    def identity(cls) -> "GroupWord":
        return cls()

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        if not isinstance(other, GroupWord):
            return NotImplemented
        return GroupWord(self.letters + other.letters)

    def inverse(self) -> "GroupWord":
        return GroupWord((g, -e) for g, e in reversed(self.letters))

    def __invert__(self):
        return self.inverse()

    def __pow__(self, k: int) -> "GroupWord":
        base = self if k >= 0 else self.inverse()
        return GroupWord(base.letters * abs(k))

    def conj(self, by: "GroupWord") -> "GroupWord":
        """``by * self * by^-1``."""
        return by * self * by.inverse()

    def weight(self) -> int:
        """Image under abelianisation sending every generator to 1."""
        return sum(e for _, e in self.letters)

    def generators(self) -> set[int]:
        return {g for g, _ in self.letters}

    def is_identity(self) -> bool:
        return not self.letters

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __eq__(self, other):
        return isinstance(other, GroupWord) and self.letters == other.letters

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.letters)
        return self._hash

    def cyclic_reduce(self) -> "GroupWord":
        ls = list(self.letters)
        while len(ls) >= 2 and ls[0][0] == ls[-1][0] and ls[0][1] == -ls[-1][1]:
            ls = ls[1:-1]
        return GroupWord(ls)

    def format(self, names: Sequence[str] | None = None) -> str:
        if not self.letters:
            return "1"
        out = []
        i = 0
        ls = self.letters
        while i < len(ls):
            j = i
            while j < len(ls) and ls[j] == ls[i]:
                j += 1
            g, e = ls[i]
            name = names[g] if names else f"x{g}"
            power = (j - i) * e
            out.append(name if power == 1 else f"{name}^{power}")
            i = j
        return " ".join(out)

    def __repr__(self):
        return f"GroupWord({self.format()})"


def same_relator(u: GroupWord, v: GroupWord) -> bool:
    """Equal up to cyclic permutation and inversion (same normal closure generator)."""
    a = u.cyclic_reduce().letters
    for w in (v.cyclic_reduce(), v.inverse().cyclic_reduce()):
        b = w.letters
        if len(a) != len(b):
            continue
        if not a:
            return True
        doubled = b + b
        if any(doubled[i : i + len(a)] == a for i in range(len(b))):
            return True
    return False


class GroupRingElem:
    """Integer combination of group words."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[GroupWord, int] | None = None):
        self.terms = {w: c for w, c in (terms or {}).items() if c}

    @classmethod
    def of(cls, w: GroupWord, c: int = 1) -> "GroupRingElem":
        return cls({w: c})

    @classmethod
    def const(cls, c: int) -> "GroupRingElem":
        return cls({GroupWord(): c})

    @classmethod
    def zero(cls) -> "GroupRingElem":
        return cls()

    @classmethod
    def geometric(cls, w: GroupWord, n: int, right: GroupWord | None = None) -> "GroupRingElem":
        """``sum_{i<n} w^i`` (times ``right`` on the right when given)."""
        right = right or GroupWord()
        return cls({(w ** i) * right: 1 for i in range(n)})

    def _coerce(self, other) -> "GroupRingElem":
        if isinstance(other, GroupRingElem):
            return other
        if isinstance(other, GroupWord):
            return GroupRingElem.of(other)
        if isinstance(other, int):
            return GroupRingElem.const(other)
        raise TypeError(f"cannot combine GroupRingElem with {type(other).__name__}")

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return GroupRingElem(out)

    __radd__ = __add__

    def __neg__(self):
        return GroupRingElem({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out: dict[GroupWord, int] = {}
        for u, c in self.terms.items():
            for v, d in other.terms.items():
                w = u * v
                out[w] = out.get(w, 0) + c * d
        return GroupRingElem(out)

    def __rmul__(self, other):
        return self._coerce(other) * self

    def __eq__(self, other):
        if isinstance(other, (int, GroupWord)):
            other = self._coerce(other)
        return isinstance(other, GroupRingElem) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def augmentation(self) -> int:
        return sum(self.terms.values())

    def format(self, names: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w, c in sorted(self.terms.items(), key=lambda kv: (len(kv[0]), kv[0].letters)):
            body = w.format(names)
            if body == "1":
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append(f"-{body}")
            else:
                parts.append(f"{c}*{body}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"GroupRingElem({self.format()})"


def fox_derivative(w: GroupWord, g: int) -> GroupRingElem:
    """Free derivative of ``w`` with respect to generator ``g``."""
    out: dict[GroupWord, int] = {}
    prefix = GroupWord()
    for h, e in w:
        if h == g:
            if e == 1:
                out[prefix] = out.get(prefix, 0) + 1
            else:
                key = prefix * GroupWord.gen(h, -1)
                out[key] = out.get(key, 0) - 1
        prefix = GroupWord(prefix.letters + ((h, e),))
    return GroupRingElem(out)


def fundamental_identity_holds(w: GroupWord, num_generators: int) -> bool:
    """``Σ_j (∂w/∂x_j)(x_j − 1) = w − 1`` in the free group ring."""
    total = GroupRingElem.zero()
    for g in range(num_generators):
        total = total + fox_derivative(w, g) * (GroupRingElem.of(GroupWord.gen(g)) - 1)
    return total == GroupRingElem.of(w) - 1


@dataclass
class Presentation:
    generators: list[str]
    relators: list[GroupWord]
    meridian: int = 0
    # For Wirtinger presentations: (l, i, j) meaning x_l = x_i x_j x_i^-1.
    wirtinger: list[tuple[int, int, int]] | None = None
    label: str = ""

    @property
    def num_generators(self) -> int:
        return len(self.generators)

    @property
    def deficiency(self) -> int:
        return len(self.generators) - len(self.relators)

    def index(self, name: str) -> int:
        try:
            return self.generators.index(name)
        except ValueError:
            raise PresentationError(f"no generator named {name!r}") from None

    def relator_weights(self) -> list[int]:
        return [r.weight() for r in self.relators]

    def check_weights(self) -> bool:
        return all(w == 0 for w in self.relator_weights())

    def to_text(self) -> str:
        lines = [f"# {self.label}" if self.label else "# presentation"]
        lines.append("generators: " + " ".join(self.generators))
        lines.append(f"meridian: {self.generators[self.meridian]}")
        if self.wirtinger is not None:
            for l, i, j in self.wirtinger:
                g = self.generators
                lines.append(f"{g[l]} = {g[i]} . {g[j]}")
        else:
            for r in self.relators:
                lines.append(r.format(self.generators))
        return "\n".join(lines) + "\n"


def fox_matrix(pres: Presentation, drop: int | str | None = None) -> list[list[GroupRingElem]]:
    """Fox Jacobian with the ``drop`` column removed (default: the meridian)."""
    if drop is None:
        drop = pres.meridian
    elif isinstance(drop, str):
        drop = pres.index(drop)
    if not 0 <= drop < pres.num_generators:
        raise PresentationError(f"generator {drop} is not in the presentation")
    cols = [g for g in range(pres.num_generators) if g != drop]
    return [[fox_derivative(r, g) for g in cols] for r in pres.relators]


# ---------------------------------------------------------------------------
# pretzel diagrams


def _validate(n: int, m: int, sign: str) -> None:
    if n < 1:
        raise PresentationError("n must be a positive integer")
    if m < 3 or m % 2 == 0:
        raise PresentationError("m must be odd and at least 3")
    if sign not in ("+", "-"):
        raise PresentationError("sign must be '+' or '-'")


def band_counts(n: int, m: int, sign: str) -> tuple[int, int, int, int]:
    third = 2 * n + 1 if sign == "+" else 2 * n - 1
    return (2 * n, m, -third, -m)


@dataclass
class DiagramWalk:
    """Arc data of a pretzel diagram.

    ``edge_arc`` maps ``(tangle, level, slot)`` to the arc through that edge;
    level 0 is the top of a column and slot 0 the left strand position.
    """

    counts: tuple[int, ...]
    num_arcs: int
    relations: list[tuple[int, int, int]]
    edge_arc: dict[tuple[int, int, int], int] = field(repr=False)

    def top_arcs(self) -> list[int]:
        return sorted({self.edge_arc[(i, 0, 0)] for i in range(len(self.counts))})


def pretzel_wirtinger(counts: Sequence[int]) -> DiagramWalk:
    """Wirtinger relations of the standard diagram of ``P(counts)``.

    Each tangle is a column of half twists between two vertical strands;
    adjacent tangles are joined at the top and bottom, cyclically.  The walk
    starts on the upper-left edge of the first tangle heading upward and
    numbers arcs in the order they are met, so arc 0 is the starting arc.
    Relations ``(l, i, j)`` read ``x_l = x_i x_j x_i^-1``.
    """
    T = len(counts)
    depth = [abs(c) for c in counts]
    if any(d == 0 for d in depth):
        raise PresentationError("every tangle needs at least one crossing")

    def step(i, lev, slot, d):
        # slot 0 is the left position, d = +1 heading down
        if d == 1:
            if lev == depth[i]:
                if slot == 1:
                    j = (i + 1) % T
                    return (j, depth[j], 0, -1), None
                j = (i - 1) % T
                return (j, depth[j], 1, -1), None
            return (i, lev + 1, 1 - slot, 1), (i, lev, slot == 0)
        if lev == 0:
            if slot == 1:
                return ((i + 1) % T, 0, 0, 1), None
            return ((i - 1) % T, 0, 1, 1), None
        return (i, lev - 1, 1 - slot, -1), (i, lev - 1, slot == 1)

    start = (0, 0, 0, -1)
    state = start
    arc = 0
    over_at: dict = {}
    under_at: dict = {}
    edge_arc: dict = {}
    while True:
        i, lev, slot, d = state
        edge_arc.setdefault((i, lev, slot), arc)
        nxt, crossing = step(*state)
        if crossing is not None:
            ci, cl, backslash = crossing
            # the backslash strand (upper-left to lower-right) is over in positive tangles
            over = backslash if counts[ci] > 0 else not backslash
            if over:
                over_at[(ci, cl)] = (arc, backslash, d)
            else:
                under_at[(ci, cl)] = (arc, arc + 1, backslash, d)
                arc += 1
        state = nxt
        if state == start:
            break
    if len(over_at) + len(under_at) != 2 * sum(depth) or len(under_at) != sum(depth):
        raise PresentationError("diagram is a link, not a knot")
    N = arc
    edge_arc = {e: a % N for e, a in edge_arc.items()}
    rels = []
    for key in sorted(under_at):
        a_in, a_out, backslash, d = under_at[key]
        o, o_back, o_d = over_at[key]
        vo = ((1 if o_back else -1) * o_d, -o_d)
        vu = ((1 if backslash else -1) * d, -d)
        s = vo[0] * vu[1] - vo[1] * vu[0]
        a_in, a_out, o = a_in % N, a_out % N, o % N
        rels.append((a_out, o, a_in) if s > 0 else (a_in, o, a_out))
    return DiagramWalk(tuple(counts), N, rels, edge_arc)


def displayed_wirtinger_relations(n: int, k: int) -> list[tuple[int, int, int]]:
    """The ten relation families for ``P(2n, 2k+1, -2n-1, -2k-1)``, 0-based.

    Family four uses the over-arc offset ``2n+2k+2``; see the notes in the
    README on why this differs from some printed versions.
    """
    N = 4 * n + 4 * k + 3
    R = []
    R += [(i + 1, i + 3 * n + 3 * k + 3, i) for i in range(1, k + 1)]
    R += [(i + 1, i + 2 * n + 2 * k + 2, i) for i in range(k + 1, n + k + 2)]
    R += [(i, i + n + k + 1, i + 1) for i in range(n + k + 2, n + 2 * k + 3)]
    R += [(i, i + 2 * n + 2 * k + 2, i + 1) for i in range(n + 2 * k + 3, 2 * n + 2 * k + 2)]
    R += [(2 * n + 2 * k + 2, 1, 2 * n + 2 * k + 3)]
    R += [(i, i - (n + k), i + 1) for i in range(2 * n + 2 * k + 3, 2 * n + 3 * k + 3)]
    R += [(i + 1, i - (2 * n + 2 * k + 1), i) for i in range(2 * n + 3 * k + 3, 3 * n + 3 * k + 3)]
    R += [(i + 1, i - (3 * n + 3 * k + 2), i) for i in range(3 * n + 3 * k + 3, 3 * n + 4 * k + 4)]
    R += [(i, i - (2 * n + 2 * k + 1), i + 1) for i in range(3 * n + 4 * k + 4, 4 * n + 4 * k + 3)]
    R += [(4 * n + 4 * k + 3, 2 * n + 2 * k + 2, 1)]
    return [((l - 1) % N, (i - 1) % N, (j - 1) % N) for l, i, j in R]


def _wirtinger_word(l: int, i: int, j: int) -> GroupWord:
    xi = GroupWord.gen(i)
    return GroupWord.gen(j).conj(xi) * GroupWord.gen(l, -1)


def wirtinger_presentation(n: int, m: int, sign: str = "+") -> Presentation:
    """Full Wirtinger presentation with generators ``x1 .. xN`` (ids ``0 .. N-1``).

    For ``+`` the relations are the ten displayed families; for ``-`` they
    come from the diagram walk with the third band shortened to ``2n-1``
    crossings.  Both use the same arc numbering, so ``x1`` is the meridian.
    """
    _validate(n, m, sign)
    k = (m - 1) // 2
    if sign == "+":
        rels = displayed_wirtinger_relations(n, k)
        N = 4 * n + 4 * k + 3
    else:
        walk = pretzel_wirtinger(band_counts(n, m, sign))
        N, rels = walk.num_arcs, walk.relations
    names = [f"x{i + 1}" for i in range(N)]
    return Presentation(
        names,
        [_wirtinger_word(*r) for r in rels],
        meridian=0,
        wirtinger=list(rels),
        label=f"Wirtinger P({', '.join(map(str, band_counts(n, m, sign)))})",
    )


def reduced_generator_arcs(n: int, m: int, sign: str = "+") -> dict[str, int]:
    """0-based Wirtinger arcs that become the eight reduced generators.

    They are the arcs on the eight edges joining neighbouring twist columns:
    ``e, a, b, c`` along the top and ``η, α, β, γ`` along the bottom, read
    from the column of ``2n`` crossings rightwards.
    """
    _validate(n, m, sign)
    walk = pretzel_wirtinger(band_counts(n, m, sign))
    depth = [abs(c) for c in walk.counts]
    ea = walk.edge_arc
    return {
        "a": ea[(1, 0, 0)],
        "b": ea[(2, 0, 0)],
        "c": ea[(3, 0, 0)],
        "e": ea[(0, 0, 0)],
        "α": ea[(1, depth[1], 0)],
        "β": ea[(2, depth[2], 0)],
        "γ": ea[(3, depth[3], 0)],
        "η": ea[(0, depth[0], 0)],
    }


REDUCED_NAMES = ["a", "b", "c", "e", "α", "β", "γ", "η"]


def reduced_presentation(n: int, m: int, sign: str = "+") -> Presentation:
    """Eight generators ``a, b, c, e, α, β, γ, η`` and seven relators.

    For ``+`` the relators are the closed-form conjugation relations; each is
    written as ``w`` with ``w = 1`` so that its Fox derivatives take the
    familiar geometric-sum shape.  For ``-`` the same eight arcs are kept and
    the Wirtinger relations are eliminated by :func:`tietze_reduce`.
    """
    _validate(n, m, sign)
    k = (m - 1) // 2
    if sign == "-":
        full = wirtinger_presentation(n, m, sign)
        arcs = reduced_generator_arcs(n, m, sign)
        pres = tietze_reduce(full, [arcs[nm] for nm in REDUCED_NAMES], REDUCED_NAMES)
        pres.label = f"reduced P({', '.join(map(str, band_counts(n, m, sign)))})"
        return pres
    a, b, c, e, al, be, ga, et = (GroupWord.gen(i) for i in range(8))
    ea = et * al
    bg = be * ga
    ec = e * c
    ba = b * a
    rels = [
        ea ** n * a * ea ** (-n) * al.inverse(),
        al * ea ** (n - 1) * e * ea ** (-n),
        b * bg ** n * be * bg ** (-(n + 1)),
        c * bg ** n * be.inverse() * bg ** (-n),
        ga * ec ** k * e.inverse() * ec ** (-k),
        et * ec ** k * e * ec ** (-(k + 1)),
        ba ** k * be * ba ** (-k) * a.inverse(),
    ]
    return Presentation(
        list(REDUCED_NAMES),
        rels,
        meridian=3,
        label=f"reduced P({', '.join(map(str, band_counts(n, m, sign)))})",
    )


# Column order of the reduced Fox matrix once the meridian e is deleted.
REDUCED_COLUMNS = ["a", "b", "c", "α", "η", "β", "γ"]


def reduced_fox_matrix(pres: Presentation) -> list[list[GroupRingElem]]:
    cols = [pres.index(nm) for nm in REDUCED_COLUMNS]
    return [[fox_derivative(r, g) for g in cols] for r in pres.relators]


def tietze_reduce(pres: Presentation, keep: Sequence[int], names: Sequence[str] | None = None) -> Presentation:
    """Eliminate every Wirtinger generator outside ``keep``.

    Unknown arcs are solved for by propagating ``x_l = x_i x_j x_i^-1`` in
    whichever direction is determined.  The relations not consumed become
    relators; the last one is dropped, since one Wirtinger relation is always
    a consequence of the others.
    """
    if pres.wirtinger is None:
        raise PresentationError("Tietze reduction needs Wirtinger relations")
    words: dict[int, GroupWord] = {g: GroupWord.gen(idx) for idx, g in enumerate(keep)}
    pending = list(pres.wirtinger)
    progress = True
    while progress:
        progress = False
        rest = []
        for l, i, j in pending:
            if i in words and j in words and l not in words:
                words[l] = words[j].conj(words[i])
                progress = True
            elif i in words and l in words and j not in words:
                words[j] = words[l].conj(words[i].inverse())
                progress = True
            else:
                rest.append((l, i, j))
        pending = rest
    missing = [g for g in range(pres.num_generators) if g not in words]
    if missing:
        raise PresentationError(f"kept arcs do not determine arcs {missing[:5]}")
    relators = []
    for l, i, j in pending:
        w = words[j].conj(words[i]) * words[l].inverse()
        if not w.is_identity():
            relators.append(w)
    if len(relators) >= len(keep):
        relators = relators[: len(keep) - 1]
    names = list(names) if names else [pres.generators[g] for g in keep]
    meridian = list(keep).index(pres.meridian) if pres.meridian in keep else 0
    return Presentation(names, relators, meridian=meridian)


def presentation_fixture(n: int, m: int, sign: str = "+", reduced: bool = True) -> str:
    pres = reduced_presentation(n, m, sign) if reduced else wirtinger_presentation(n, m, sign)
    return pres.to_text()
