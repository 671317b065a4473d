import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_poly
from slicesieve.gf2 import GF2Poly
from slicesieve.homology import PretzelSpec, alexander_matrix, explicit_mod2_presentation, seifert_matrix
from slicesieve.laurent import LaurentPoly, canonicalize, doteq, parse
from slicesieve.polymat import (
    DetStrategy,
    DimensionMismatch,
    PolyMatrix,
    adjugate,
    det_bareiss_poly,
    det_cofactor,
    det_eval_interp,
    gf2t_module_reduce,
    int_det,
    mat_det,
    mat_det_equiv_check,
    mat_mul,
    newton_interpolate,
)
from slicesieve.repcover import build_phi_fox_matrix, companion_pair

t = LaurentPoly.t()


def random_matrix(rng: random.Random, size: int, max_deg: int = 4) -> PolyMatrix:
    return PolyMatrix([[random_poly(rng, max_deg=max_deg) for _ in range(size)] for _ in range(size)])


def brute_int_det(a):
    """Leibniz expansion, the simplest possible oracle."""
    from itertools import permutations

    n = len(a)
    total = 0
    for perm in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        prod = 1
        for i in range(n):
            prod *= a[i][perm[i]]
        total += -prod if inv % 2 else prod
    return total


class TestMultiplication:
    def test_identity_left(self, rng):
        for size in (1, 3, 5):
            m = random_matrix(rng, size)
            assert PolyMatrix.identity(size) * m == m
            assert m * PolyMatrix.identity(size) == m

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            mat_mul(PolyMatrix.zeros(2, 3), PolyMatrix.zeros(2, 3))

    @pytest.mark.parametrize("p", [3, 5, 7])
    def test_xa_power_is_t(self, p):
        pair = companion_pair(p)
        xa = pair.x * pair.a
        assert xa ** p == PolyMatrix.scalar(p, t)

    @pytest.mark.parametrize("p,n", [(3, 2), (5, 3), (7, 4)])
    def test_alternating_sum_telescopes(self, p, n):
        x = companion_pair(p).x
        one = PolyMatrix.identity(p)
        b_n = PolyMatrix.zeros(p, p)
        for i in range(2 * n):
            b_n = b_n + (x * -1) ** i
        assert (one + x) * b_n == one - x ** (2 * n)

    def test_block_assembly(self):
        a = PolyMatrix([[1, 2], [3, 4]])
        big = PolyMatrix.block([[a, 0], [0, a]])
        assert big.shape == (4, 4)
        assert big.get_block(1, 1, 2) == a
        assert big.get_block(0, 1, 2).is_zero()

    def test_json_round_trip(self, rng):
        m = random_matrix(rng, 3)
        assert PolyMatrix.from_json(m.to_json()) == m


class TestDeterminant:
    def test_identity(self):
        assert mat_det(PolyMatrix.identity(5)) == LaurentPoly.one()

    def test_one_minus_x(self):
        x = companion_pair(3).x
        d = mat_det(PolyMatrix.identity(3) - x, "cofactor")
        assert doteq(d, 1 - t)

    def test_alexander_of_smallest_knot(self):
        spec = PretzelSpec(2, 3, 3)
        d = mat_det(alexander_matrix(seifert_matrix(spec)))
        assert canonicalize(d) == canonicalize((1 - t + t ** 2) ** 2)

    def test_non_square(self):
        with pytest.raises(DimensionMismatch):
            mat_det(PolyMatrix.zeros(2, 3))

    def test_zero_row(self, rng):
        m = random_matrix(rng, 4).entries()
        m[2] = [LaurentPoly.zero()] * 4
        m = PolyMatrix(m)
        for mode in ("cofactor", "bareiss", "eval-interp"):
            assert mat_det(m, mode).is_zero()
        assert mat_det_equiv_check(m)

    def test_int_det_against_leibniz(self, rng):
        for _ in range(50):
            size = rng.randint(1, 5)
            a = [[rng.randint(-50, 50) for _ in range(size)] for _ in range(size)]
            assert int_det(a) == brute_int_det(a)

    def test_newton_interpolation(self):
        xs = [2, 3, 4, 5]
        ys = [x ** 3 - 2 * x + 7 for x in xs]
        assert newton_interpolate(xs, ys) == [7, -2, 0, 1]

    def test_eval_interp_matches_cofactor_random(self, rng):
        """The oracle equivalence property over 200 random matrices."""
        for trial in range(200):
            size = rng.randint(1, 6)
            m = random_matrix(rng, size)
            assert det_eval_interp(m) == det_cofactor(m), f"trial {trial}"

    def test_bareiss_matches_cofactor(self, rng):
        for _ in range(40):
            m = random_matrix(rng, rng.randint(1, 5), max_deg=3)
            assert det_bareiss_poly(m) == det_cofactor(m)

    def test_explicit_points(self, rng):
        m = random_matrix(rng, 3)
        custom = DetStrategy("eval-interp", eval_points=tuple(range(7, 40)))
        assert mat_det(m, custom) == det_cofactor(m)

    def test_equiv_check_on_phi_matrix(self):
        assert mat_det_equiv_check(build_phi_fox_matrix(2, 3, 3))

    def test_multiplicative(self, rng):
        for _ in range(30):
            size = rng.randint(1, 4)
            a, b = random_matrix(rng, size, 2), random_matrix(rng, size, 2)
            assert mat_det(a * b) == mat_det(a) * mat_det(b)

    def test_adjugate(self, rng):
        for _ in range(10):
            m = random_matrix(rng, 3, 2)
            adj, d = adjugate(m)
            assert m * adj == PolyMatrix.scalar(3, d)

    def test_unknown_strategy(self):
        with pytest.raises(ValueError):
            DetStrategy("lu")

    @given(st.integers(min_value=-3, max_value=3), st.integers(min_value=1, max_value=4))
    @settings(max_examples=20)
    def test_scalar_monomial_det(self, k, n):
        m = PolyMatrix.scalar(n, LaurentPoly.monomial(2, k))
        assert mat_det(m) == LaurentPoly.monomial(2 ** n, k * n)


class TestModuleReduce:
    def test_smallest_knot_presentation(self):
        pres = explicit_mod2_presentation(PretzelSpec(2, 3, 3))
        s = gf2t_module_reduce(pres, GF2Poly.ones(3))
        assert s.cyclic
        assert s.invariant_factors == [GF2Poly.from_exponents([0, 1, 2])]
        assert s.f2_dimension == 2
        assert s.iso_to_vp

    def test_identity_is_trivial(self):
        one, zero = GF2Poly(1), GF2Poly(0)
        s = gf2t_module_reduce([[one, zero], [zero, one]])
        assert s.invariant_factors == [] and s.f2_dimension == 0 and s.free_rank == 0

    def test_repeated_irreducible_is_not_cyclic(self):
        q, zero = GF2Poly.from_exponents([0, 1, 2]), GF2Poly(0)
        s = gf2t_module_reduce([[q, zero], [zero, q]])
        assert not s.cyclic
        assert s.invariant_factors == [q, q]
        assert s.f2_dimension == 4

    def test_coprime_factors_merge(self):
        q1, q2, zero = GF2Poly.from_exponents([0, 1]), GF2Poly.from_exponents([0, 1, 2]), GF2Poly(0)
        s = gf2t_module_reduce([[q1, zero], [zero, q2]])
        assert s.cyclic and s.invariant_factors == [q1 * q2]

    def test_units_t_power_removed(self):
        s = gf2t_module_reduce([[GF2Poly.from_exponents([3])]])
        assert s.f2_dimension == 0

    def test_free_part(self):
        s = gf2t_module_reduce([[GF2Poly(0)]])
        assert s.free_rank == 1 and s.f2_dimension is None

    def test_moves_recorded(self):
        pres = explicit_mod2_presentation(PretzelSpec(2, 3, 3))
        assert gf2t_module_reduce(pres, GF2Poly.ones(3)).moves

    def test_laurent_matrix_input(self):
        m = PolyMatrix([[LaurentPoly({-1: 1, 0: 1, 1: 1}, "GF2")]], "GF2")
        s = gf2t_module_reduce(m)
        assert s.invariant_factors == [GF2Poly.from_exponents([0, 1, 2])]

    def test_invariant_factor_divisibility(self, rng):
        for _ in range(30):
            size = rng.randint(1, 3)
            grid = [[GF2Poly(rng.randint(0, 31)) for _ in range(size)] for _ in range(size)]
            s = gf2t_module_reduce(grid, GF2Poly.ones(5))
            fs = s.invariant_factors
            for a, b in zip(fs, fs[1:]):
                assert not (b % a)


def test_parse_matches_matrix_entries():
    x = companion_pair(5).x
    assert x[4, 0] == parse("t")
    assert x[0, 1] == LaurentPoly.one()
