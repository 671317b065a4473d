import re
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slicesieve.homology import PretzelSpec, alexander_closed_form, alexander_polynomial
from slicesieve.knotpres import (
    REDUCED_NAMES,
    GroupRingElem,
    GroupWord,
    PresentationError,
    band_counts,
    displayed_wirtinger_relations,
    fox_derivative,
    fox_matrix,
    fundamental_identity_holds,
    pretzel_wirtinger,
    reduced_generator_arcs,
    reduced_presentation,
    same_relator,
    tietze_reduce,
    wirtinger_presentation,
)
from slicesieve.laurent import LaurentPoly, canonicalize
from slicesieve.polymat import mat_det
from slicesieve.repcover import _assemble, apply_rep, phi_fox_blocks, reduced_rep, trivial_fox_matrix, trivial_rank_one

FIXTURES = Path(__file__).parent / "fixtures"
GRID = [(2, 3), (3, 5), (5, 3), (6, 11), (1, 3), (4, 7)]

x, y = GroupWord.gen(0), GroupWord.gen(1)


def ring(w: GroupWord) -> GroupRingElem:
    return GroupRingElem.of(w)


def parse_display(text: str, names: list[str]) -> list[GroupWord]:
    """Relators ``lhs^-1 · rhs`` from lines like ``a = (η α)^-2 α (η α)^2``."""
    index = {nm: i for i, nm in enumerate(names)}
    token = re.compile(r"\(([^)]*)\)\^(-?\d+)|(\S+?)(?:\^(-?\d+))?(?=\s|$)")
    out = []
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        lhs, rhs = (s.strip() for s in line.split("="))
        word = GroupWord.gen(index[lhs], -1)
        for m in token.finditer(rhs):
            if m.group(1) is not None:
                base = GroupWord()
                for nm in m.group(1).split():
                    base = base * GroupWord.gen(index[nm])
                word = word * base ** int(m.group(2))
            else:
                word = word * GroupWord.gen(index[m.group(3)], int(m.group(4) or 1))
        out.append(word)
    return out


class TestGroupWord:
    def test_free_reduction(self):
        assert GroupWord([(0, 1), (1, 1), (1, -1), (0, -1)]).is_identity()

    def test_inverse(self):
        w = x * y * x.inverse()
        assert (w * w.inverse()).is_identity()

    def test_power_and_weight(self):
        assert ((x * y) ** -3).weight() == -6

    def test_same_relator_rotation_and_inverse(self):
        w = x * y * x * y.inverse()
        rotated = GroupWord(w.letters[2:] + w.letters[:2])
        assert same_relator(w, rotated)
        assert same_relator(w, w.inverse())
        assert not same_relator(w, x * x * y * y.inverse())


class TestFox:
    def test_conjugate(self):
        w = x * y * x.inverse()
        assert fox_derivative(w, 0) == 1 - ring(w)

    def test_generator_and_inverse(self):
        assert fox_derivative(x, 0) == GroupRingElem.const(1)
        assert fox_derivative(x.inverse(), 0) == -ring(x.inverse())
        assert not fox_derivative(y, 0)

    def test_product_rule(self):
        u, v = x * y * x, y.inverse() * x
        assert fox_derivative(u * v, 0) == fox_derivative(u, 0) + ring(u) * fox_derivative(v, 0)

    def test_power(self):
        assert fox_derivative(x ** 4, 0) == GroupRingElem.geometric(x, 4)

    @given(st.lists(st.tuples(st.integers(0, 3), st.sampled_from([1, -1])), max_size=14))
    @settings(max_examples=100)
    def test_fundamental_identity_random_words(self, letters):
        assert fundamental_identity_holds(GroupWord(letters), 4)

    @pytest.mark.parametrize("sign", "+-")
    @pytest.mark.parametrize("n,m", [(2, 3), (3, 5)])
    def test_fundamental_identity_on_relators(self, n, m, sign):
        for pres in (wirtinger_presentation(n, m, sign), reduced_presentation(n, m, sign)):
            for r in pres.relators:
                assert fundamental_identity_holds(r, pres.num_generators)


class TestWirtinger:
    @pytest.mark.parametrize("n,m", GRID)
    def test_generator_count(self, n, m):
        k = (m - 1) // 2
        pres = wirtinger_presentation(n, m, "+")
        assert pres.num_generators == 4 * n + 4 * k + 3
        assert len(pres.relators) == pres.num_generators

    def test_smallest_count(self):
        assert wirtinger_presentation(2, 3).num_generators == 15

    @pytest.mark.parametrize("sign", "+-")
    @pytest.mark.parametrize("n,m", GRID)
    def test_weights(self, n, m, sign):
        pres = wirtinger_presentation(n, m, sign)
        assert pres.check_weights()

    @pytest.mark.parametrize("n,m", GRID)
    def test_displayed_families_agree_with_diagram_walk(self, n, m):
        """The printed families and an independent walk give the same relators."""
        k = (m - 1) // 2
        walk = pretzel_wirtinger(band_counts(n, m, "+"))
        assert walk.num_arcs == 4 * n + 4 * k + 3
        shown = sorted(displayed_wirtinger_relations(n, k))
        assert shown == sorted(walk.relations)

    @pytest.mark.parametrize("sign", "+-")
    def test_conjugation_shape(self, sign):
        pres = wirtinger_presentation(3, 5, sign)
        for l, i, j in pres.wirtinger:
            assert len({l, i, j}) >= 2

    def test_invalid(self):
        with pytest.raises(PresentationError):
            wirtinger_presentation(2, 4)
        with pytest.raises(PresentationError):
            wirtinger_presentation(0, 3)

    def test_text_dump(self):
        text = wirtinger_presentation(2, 3).to_text()
        assert text.splitlines()[1].startswith("generators: x1 x2")
        assert "x2 = " in text


class TestReduced:
    @pytest.mark.parametrize("sign", "+-")
    @pytest.mark.parametrize("n,m", GRID)
    def test_deficiency_one(self, n, m, sign):
        pres = reduced_presentation(n, m, sign)
        assert pres.num_generators == 8 and len(pres.relators) == 7
        assert pres.generators == REDUCED_NAMES
        assert pres.generators[pres.meridian] == "e"

    @pytest.mark.parametrize("sign", "+-")
    @pytest.mark.parametrize("n,m", GRID)
    def test_weights(self, n, m, sign):
        assert reduced_presentation(n, m, sign).check_weights()

    def test_relator_for_a(self):
        pres = reduced_presentation(2, 3)
        a, al, et = (GroupWord.gen(pres.index(nm)) for nm in ("a", "α", "η"))
        ea = et * al
        want = a.inverse() * ea ** -2 * al * ea ** 2
        assert any(same_relator(r, want) for r in pres.relators)

    @pytest.mark.parametrize("n,m", [(2, 3), (3, 5), (6, 11)])
    def test_text_fixture(self, n, m):
        pres = reduced_presentation(n, m)
        expected = parse_display((FIXTURES / f"reduced_{n}_{m}.txt").read_text(), pres.generators)
        assert len(expected) == len(pres.relators)
        for got, want in zip(pres.relators, expected):
            assert same_relator(got, want), got.format(pres.generators)

    @pytest.mark.parametrize("n,m", [(2, 3), (3, 5)])
    def test_closed_form_matches_tietze_route(self, n, m):
        """The reduced relators hold in the full Wirtinger group."""
        full = wirtinger_presentation(n, m, "+")
        arcs = reduced_generator_arcs(n, m, "+")
        derived = tietze_reduce(full, [arcs[nm] for nm in REDUCED_NAMES], REDUCED_NAMES)
        assert len(derived.relators) == 7
        pres, rep = reduced_rep(n, m, m)
        cols = [pres.index(nm) for nm in ("a", "b", "c", "α", "η", "β", "γ")]
        d1 = mat_det(_assemble(phi_fox_blocks(pres, rep, cols)))
        d2 = mat_det(_assemble(phi_fox_blocks(derived, rep, cols)))
        assert canonicalize(d1) == canonicalize(d2)

    def test_fox_matrix_shape(self):
        grid = fox_matrix(reduced_presentation(2, 3), "e")
        assert len(grid) == 7 and all(len(row) == 7 for row in grid)

    def test_fox_matrix_bad_drop(self):
        with pytest.raises(PresentationError):
            fox_matrix(reduced_presentation(2, 3), "z")

    def test_da_entry_literal(self):
        pres = reduced_presentation(2, 3)
        al, et = GroupWord.gen(pres.index("α")), GroupWord.gen(pres.index("η"))
        assert fox_derivative(pres.relators[0], pres.index("a")) == ring((et * al) ** 2)
        assert fox_derivative(pres.relators[2], pres.index("b")) == GroupRingElem.const(1)


class TestFoxDisplayUnderPhi:
    """The printed Fox entries hold once the relators are imposed, so compare images."""

    @staticmethod
    def setup(n, m):
        pres, rep = reduced_rep(n, m, m)
        g = {nm: GroupWord.gen(pres.index(nm)) for nm in pres.generators}
        return pres, rep, g

    @pytest.mark.parametrize("n,m", [(2, 3), (3, 5)])
    def test_b_relator_dbeta(self, n, m):
        pres, rep, g = self.setup(n, m)
        bg = g["β"] * g["γ"]
        want = (ring(g["b"]) - 1) * GroupRingElem.geometric(bg, n + 1)
        got = fox_derivative(pres.relators[2], pres.index("β"))
        assert apply_rep(got, rep) == apply_rep(want, rep)

    @pytest.mark.parametrize("n,m", [(2, 3), (3, 5)])
    def test_a_relator_dalpha(self, n, m):
        pres, rep, g = self.setup(n, m)
        ea = g["η"] * g["α"]
        want = (1 - ring(g["a"])) * GroupRingElem.geometric(ea, n, g["η"]) - 1
        got = fox_derivative(pres.relators[0], pres.index("α"))
        assert apply_rep(got, rep) == apply_rep(want, rep)

    @pytest.mark.parametrize("n,m", [(2, 3), (3, 5)])
    def test_c_relator_dgamma(self, n, m):
        pres, rep, g = self.setup(n, m)
        bg = g["β"] * g["γ"]
        want = (ring(g["c"]) - 1) * GroupRingElem.geometric(bg, n, g["β"])
        got = fox_derivative(pres.relators[3], pres.index("γ"))
        assert apply_rep(got, rep) == apply_rep(want, rep)

    @pytest.mark.parametrize("n,m", [(2, 3), (3, 5)])
    def test_gamma_relator_de(self, n, m):
        pres, rep, g = self.setup(n, m)
        k = (m - 1) // 2
        ec = g["e"] * g["c"]
        want = (ring(g["γ"]) - 1) * GroupRingElem.geometric(ec, k) - ring(ec ** k)
        got = fox_derivative(pres.relators[4], pres.index("e"))
        assert apply_rep(got, rep) == apply_rep(want, rep)


class TestAlexanderViaFox:
    @pytest.mark.parametrize("n,m,sign", [(2, 3, "+"), (3, 5, "+"), (5, 3, "+"), (2, 3, "-"), (3, 5, "-"), (4, 3, "-")])
    def test_reduced_route_matches_seifert(self, n, m, sign):
        fox = canonicalize(mat_det(trivial_fox_matrix(n, m, sign)))
        seifert = alexander_polynomial(PretzelSpec.make(n, m, sign=sign))
        assert fox == seifert == alexander_closed_form(m)

    @pytest.mark.parametrize("sign", "+-")
    def test_full_wirtinger_route(self, sign):
        pres = wirtinger_presentation(2, 3, sign)
        cols = [g for g in range(pres.num_generators) if g != pres.meridian]
        rows = [[apply_rep(fox_derivative(r, g), trivial_rank_one()) for g in cols] for r in pres.relators[:-1]]
        d = canonicalize(mat_det(_assemble(rows)))
        t = LaurentPoly.t()
        assert d == canonicalize((1 - t + t ** 2) ** 2)
