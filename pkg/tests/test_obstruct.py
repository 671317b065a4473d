import json
from fractions import Fraction

import pytest

from slicesieve.homology import PretzelSpec, alexander_closed_form, hypothesis_check
from slicesieve.laurent import LaurentPoly, NotASquare, canonicalize, divexact, doteq, is_symmetric, parse
from slicesieve.obstruct import (
    VERDICTS,
    DecompositionError,
    NotDivisible,
    ObstructionReport,
    ReducedTAP,
    eisenstein_at_2,
    extract_h,
    f_poly,
    g_matrix,
    g_matrix_route,
    g_poly,
    lakatos_check,
    lakatos_decompose,
    load_golden,
    norm_obstruction_verdict,
    split_numerator,
    symmetric_descent,
    table_rows,
    twisted_reduced_polynomial,
    valid_table_ns,
    verify_rows,
)
from slicesieve.polymat import mat_det
from slicesieve.repcover import trivial_fox_matrix

t = LaurentPoly.t()

# h recorded from the first pipeline run; regression data, not ground truth
H_FIXTURES = {
    (2, 3, 3, "+"): "t^2-2t+1",
    (5, 3, 3, "+"): "t^2-2t+1",
    (4, 5, 5, "+"): "t^4-2t^2+1",
    (4, 3, 3, "-"): "t^2-2t+1",
}


class TestClosedForms:
    @pytest.mark.parametrize(
        "b,text",
        [(1, "2t^2+3t+2"), (2, "2t^4+2t^3+3t^2+2t+2"), (3, "2t^6+2t^5+2t^4+3t^3+2t^2+2t+2")],
    )
    def test_f_plus(self, b, text):
        assert f_poly(b) == parse(text)

    def test_f_minus(self):
        assert f_poly(2, "-") == parse("2t^4+2t^3+t^2+2t+2")

    def test_f_rejects_b0(self):
        with pytest.raises(ValueError):
            f_poly(0)

    @pytest.mark.parametrize(
        "n,p,text",
        [(6, 11, "2t^2+27t+2"), (7, 11, "6t^2-35t+6"), (13, 11, "10t^4-38t^3+67t^2-38t+10"), (2, 3, "2t^2-5t+2")],
    )
    def test_g(self, n, p, text):
        assert g_poly(n, p) == parse(text)

    def test_g_invalid_decomposition(self):
        with pytest.raises(DecompositionError):
            g_poly(5, 11)  # 2n = 10 = 0·11 + 10, b = 0
        with pytest.raises(DecompositionError):
            g_poly(11, 11)  # p | 2n

    @pytest.mark.parametrize(
        "n,p,text",
        [(6, 11, "2t^2+27t+2"), (4, 5, "6t^2-11t+6"), (8, 5, "2t^6+2t^5-6t^4+11t^3-6t^2+2t+2")],
    )
    def test_matrix_route(self, n, p, text):
        assert g_matrix_route(n, p) == parse(text)

    @pytest.mark.parametrize("p", [3, 5, 11, 13])
    def test_matrix_route_agrees_everywhere(self, p):
        ns = valid_table_ns(p, 20)
        assert ns
        for n in ns:
            assert g_matrix_route(n, p) == g_poly(n, p), n

    def test_matrix_divisible_by_one_plus_t(self):
        assert divexact(mat_det(g_matrix(9, 5)), t + 1) is not None

    def test_valid_ns(self):
        assert valid_table_ns(11, 14) == [6, 7, 8, 9, 10, 12, 13, 14]
        assert valid_table_ns(5, 9) == [3, 4, 6, 8, 9]

    @pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
    def test_g_not_multiple_of_f(self, p):
        for n in valid_table_ns(p, 20):
            f, g = f_poly((2 * n) // p), g_poly(n, p)
            if (n, p) == (3, 5):
                assert f == g
            else:
                assert divexact(g, f) is None

    def test_symmetric(self):
        for n in valid_table_ns(11, 30):
            assert is_symmetric(g_poly(n, 11))


class TestGolden:
    def test_packaged_tables(self):
        golden = load_golden()
        assert len(golden["11"]["rows"]) == 8 and len(golden["5"]["rows"]) == 5
        assert verify_rows(11, golden) == [] and verify_rows(5, golden) == []

    def test_row_values(self):
        row = table_rows(5, [9])[0]
        assert row.g == parse("6t^6-10t^5+14t^4-19t^3+14t^2-10t+6")
        assert row.decomposition(5) == "18 = 3(5)+3"

    def test_mismatch_reported(self):
        golden = load_golden()
        golden["11"]["rows"][0]["g"] = "2t^2+28t+2"
        problems = verify_rows(11, golden)
        assert len(problems) == 1 and "n=6" in problems[0]

    def test_missing_prime(self):
        with pytest.raises(KeyError):
            verify_rows(13, load_golden())


class TestExtractH:
    def test_planted_square(self):
        f, g, h = f_poly(1), g_poly(6, 11), parse("t^2+3t+1")
        tap = ReducedTAP(canonicalize(f * g * h * h))
        assert extract_h(tap, f, g) == h
        assert tap.factors == (f, g, h)

    def test_planted_non_square(self):
        f, g = f_poly(1), g_poly(6, 11)
        tap = ReducedTAP(canonicalize(f * g * (t + 2)))
        with pytest.raises(NotASquare):
            extract_h(tap, f, g)

    def test_not_divisible(self):
        tap = ReducedTAP(canonicalize(f_poly(1) * (t + 2) ** 2))
        with pytest.raises(NotDivisible):
            extract_h(tap, f_poly(1), g_poly(6, 11))

    def test_split_numerator(self):
        f, g, h = f_poly(2, "-"), parse("2t^2-31t+2"), parse("t^2-2t+1")
        split = split_numerator(f * g * h * h, f)
        assert split.multiplicity == 1 and split.g == g and split.h == h

    def test_split_counts_repeats(self):
        f = f_poly(1)
        assert split_numerator(f * f * parse("t^2+1"), f).multiplicity == 2
        assert split_numerator(parse("t^2+1"), f).multiplicity == 0


class TestCertificates:
    def test_lakatos_f1(self):
        l, a = lakatos_decompose(f_poly(1))
        assert l == 2 and sum(abs(x) for x in a) == Fraction(1, 2)
        assert lakatos_check(f_poly(1))

    def test_lakatos_minus(self):
        assert lakatos_check(f_poly(3, "-"))

    def test_lakatos_violation(self):
        f = parse("t^4+t^3+t^2+t+1") + 5 * (t ** 3 + t)
        assert lakatos_decompose(f) == (1, [5, 0])
        assert not lakatos_check(f)

    def test_lakatos_rejects_asymmetric(self):
        with pytest.raises(ValueError):
            lakatos_check(parse("t^2+t+2"))

    @pytest.mark.parametrize("text,want", [("2t^2+3t+2", "2t+3"), ("2t^4+2t^3+3t^2+2t+2", "2t^2+2t-1"), ("t^2+1", "t")])
    def test_descent(self, text, want):
        assert symmetric_descent(parse(text)) == parse(want)

    def test_descent_reconstructs(self):
        for b in range(1, 8):
            f = f_poly(b)
            l = symmetric_descent(f)
            back = LaurentPoly.zero("QQ")
            w = (t + t ** -1).to_ring("QQ")
            for e, c in l.terms().items():
                back = back + w ** e * c
            assert doteq(back, f)

    def test_descent_rejects_asymmetric(self):
        with pytest.raises(ValueError):
            symmetric_descent(parse("t^2+t+2"))

    def test_eisenstein(self):
        assert eisenstein_at_2(parse("2t+3"))
        assert eisenstein_at_2(parse("2t^2+2t-1"))
        assert not eisenstein_at_2(parse("t^2+1"))
        assert not eisenstein_at_2(parse("4t+3"))

    @pytest.mark.parametrize("sign", "+-")
    def test_f_family(self, sign):
        for b in range(1, 13):
            f = f_poly(b, sign)
            assert lakatos_check(f), b
            assert eisenstein_at_2(symmetric_descent(f)), b


class TestPipeline:
    @pytest.mark.parametrize("spec", list(H_FIXTURES))
    def test_factorisation(self, spec):
        s = PretzelSpec(*spec)
        tap = twisted_reduced_polynomial(s)
        assert tap.denom_power == 2
        if s.sign == "+":
            f, g = f_poly(s.b), g_poly(s.n, s.p)
            h = extract_h(tap, f, g)
        else:
            split = split_numerator(tap.numerator, f_poly(s.b, "-"))
            assert split.multiplicity == 1
            h = split.h
        assert h == parse(H_FIXTURES[spec])
        assert h.is_integral() and is_symmetric(h)

    def test_trivial_character_reproduces_alexander(self):
        d = canonicalize(mat_det(trivial_fox_matrix(2, 3)))
        assert d == alexander_closed_form(3)

    def test_requires_p_divides_m(self):
        from slicesieve.homology import SpecError

        with pytest.raises(SpecError):
            twisted_reduced_polynomial(PretzelSpec(2, 5, 3))


class TestVerdict:
    @pytest.mark.parametrize(
        "spec,verdict",
        [
            ((2, 3, 3, "+"), "ObstructedNotSlice"),
            ((3, 5, 5, "+"), "NormNoObstruction"),
            ((3, 7, 7, "+"), "HypothesesFail"),
            ((2, 5, 5, "+"), "HypothesesFail"),
            ((4, 3, 3, "-"), "ObstructedNotSlice"),
            ((4, 5, 5, "-"), "ObstructedNotSlice"),
        ],
    )
    def test_verdicts(self, spec, verdict):
        nv, report = norm_obstruction_verdict(PretzelSpec(*spec))
        assert nv.verdict == verdict == report.verdict
        assert report.verdict in VERDICTS

    def test_obstructed_chain(self):
        nv, report = norm_obstruction_verdict(PretzelSpec(2, 3, 3))
        assert nv.lakatos_pass and nv.eisenstein_pass and not nv.f_divides_g
        assert hypothesis_check(PretzelSpec(2, 3, 3)).all_pass
        assert report.chain == {"lakatos": True, "eisenstein": True, "f_divides_g": False}
        assert report.f == [2, 3, 2] and report.g == [2, -5, 2] and report.h == [1, -2, 1]

    def test_hypotheses_fail_names_flags(self):
        nv, report = norm_obstruction_verdict(PretzelSpec(3, 7, 7))
        assert "two-primitive-mod-p" in nv.stage
        assert report.f is None and report.numerator is None

    def test_closed_form_mode_skips_pipeline(self):
        _, report = norm_obstruction_verdict(PretzelSpec(6, 11, 11), mode="closed-form")
        assert report.verdict == "ObstructedNotSlice"
        assert report.numerator is None
        assert report.f == [2, 3, 2] and report.g == [2, 27, 2]

    def test_pipeline_mode_recovers_g(self):
        _, report = norm_obstruction_verdict(PretzelSpec(2, 3, 3), mode="pipeline")
        assert report.g == [2, -5, 2]

    def test_bad_mode(self):
        with pytest.raises(ValueError):
            norm_obstruction_verdict(PretzelSpec(2, 3, 3), mode="fast")

    def test_deterministic(self):
        spec = PretzelSpec(4, 5, 5)
        first = norm_obstruction_verdict(spec)[1].dumps()
        assert norm_obstruction_verdict(spec)[1].dumps() == first

    def test_report_round_trip(self):
        _, report = norm_obstruction_verdict(PretzelSpec(2, 3, 3))
        data = json.loads(report.dumps())
        assert ObstructionReport.from_json(data) == report
        assert set(data) >= {"spec", "hypotheses", "a", "b", "f", "g", "h", "numerator", "verdict", "chain"}
        assert data["spec"] == {"n": 2, "m": 3, "p": 3, "sign": "plus"}
