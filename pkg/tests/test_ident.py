from fractions import Fraction as F

import pytest

import piq
from piq.errors import NotPolynomializable, ParseError, SemanticError
from piq.etaq import PiMonomial
from piq.ident import (
    Add,
    Const,
    Mul,
    Neg,
    Pi,
    Pow,
    Sqrt,
    build_sides,
    evaluate,
    evaluate_to_bound,
    normalize_polynomial,
    parse_corpus,
    parse_expression,
    parse_identity,
    to_dsl,
    ts_make,
)
from piq.quasimod import expand_lambert
from piq.series import ScaledSeries
from piq.verify import _pi_series


class TestParse:
    def test_l12_1_shape(self):
        rec = parse_identity("pi(2)^2 + 2*pi(2)*pi(6) = pi(1)*pi(3) + 3*pi(6)^2")
        assert isinstance(rec.lhs, Add) and len(rec.lhs.children) == 2
        assert rec.lhs.children[0] == Pow(Pi(2), F(2))

    def test_sqrt_node(self):
        e = parse_expression("sqrt(pi(1)*pi(3)) * (pi(2)^2 + 3*pi(6)^2)")
        assert isinstance(e, Mul)
        assert isinstance(e.children[0], Sqrt)

    def test_semantic_errors(self):
        with pytest.raises(SemanticError):
            parse_identity("pi(0) = 1")
        with pytest.raises(SemanticError):
            parse_identity("lam(2,2) = 1")
        with pytest.raises(SemanticError):
            parse_identity("lam(1,3) = 1")
        with pytest.raises(SemanticError):
            parse_identity("subst(pi(1), 0) = 1")

    def test_parse_error_position_and_expected(self):
        with pytest.raises(ParseError) as info:
            parse_identity("pi(2 = 1")
        assert info.value.line == 1 and info.value.column == 6
        assert ")" in info.value.expected

    def test_half_integer_exponents(self):
        e = parse_expression("pi(1)^3/2*pi(9)^-1/2")
        assert e.children[0].e == F(3, 2)
        assert e.children[1].e == F(-1, 2)

    def test_exponent_slash_vs_division(self):
        # after ^ the slash binds to the exponent only when digits follow
        e = parse_expression("pi(3)^2/pi(1)^2")
        assert isinstance(e, Mul)
        assert e.children[0].e == F(2)

    def test_rational_atom(self):
        rec = parse_identity("1/24*pi(1) = pi(1)/24")
        const = rec.lhs.children[0]
        assert const == Const(F(1, 24))


class TestRoundTrip:
    def test_corpus_round_trip(self):
        for rec in piq.load_corpus():
            printed = rec.dsl
            again = parse_identity(printed)
            assert again.lhs == rec.lhs and again.rhs == rec.rhs, rec.id

    def test_negative_and_nested(self):
        for text in [
            "-pi(1) + 2 = 1 - pi(1)*(pi(2) - 3)",
            "subst(pi(1) + pi(2), 3) = dl3()",
            "sqrt(pi(1)) - sqrt(pi(9)) = E2(4)*sodd()",
        ]:
            rec = parse_identity(text)
            again = parse_identity(rec.dsl)
            assert again.lhs == rec.lhs and again.rhs == rec.rhs


class TestCorpusFile:
    def test_counts(self):
        records = piq.load_corpus()
        assert len(records) == 47
        pis = [r for r in records if not r.id.startswith("La")]
        lams = [r for r in records if r.id.startswith("La")]
        assert len(pis) == 30 and len(lams) == 17

    def test_unique_ids(self):
        ids = [r.id for r in piq.load_corpus()]
        assert len(ids) == len(set(ids))

    def test_header_required(self):
        with pytest.raises(ParseError):
            parse_corpus("id: x\ndsl: 1 = 1\n")

    def test_duplicate_id_rejected(self):
        text = "piqdsl 1\n\nid: A\ndsl: 1 = 1\n\nid: A\ndsl: 2 = 2\n"
        with pytest.raises(ParseError):
            parse_corpus(text)

    def test_hints_parsed(self):
        text = "piqdsl 1\n\nid: A\nsource: t\ndsl: 1 = 1\nhint.subst: 2\nhint.mode: check\n"
        rec = parse_corpus(text)[0]
        assert rec.hints.subst == 2 and rec.hints.mode == "check"


class TestEvaluate:
    def test_pi_1(self):
        s = evaluate(parse_expression("pi(1)"), 10)
        assert [(e, c) for e, c in list(s.items())[:4]] == [
            (F(1, 4), F(1)),
            (F(5, 4), F(2)),
            (F(9, 4), F(1)),
            (F(13, 4), F(2)),
        ]

    def test_const(self):
        s = evaluate(parse_expression("4"), 5)
        assert dict(s.items()) == {F(0): F(4)}

    def test_l16_1_difference_vanishes_to_40(self):
        rec = parse_identity("pi(1)^2*pi(8) = pi(2)*(pi(4) + 2*pi(8))^2")
        dl = evaluate_to_bound(rec.lhs, 41)
        dr = evaluate_to_bound(rec.rhs, 41)
        assert (dl - dr).is_zero(upto=40)

    def test_lambert_node(self):
        s = evaluate(parse_expression("lam(2,1)"), 6)
        assert s.agrees_with(expand_lambert(piq.LambertSpec("LAM", 2, 1), 6))


def _term_series(t, bound):
    s = _pi_series(t.pi, bound) * t.coef
    for spec in t.lamberts:
        s = s * expand_lambert(spec, max(1, int(bound) + 1))
    assert not t.sqrts
    return s


def _ts_series(terms, bound):
    out = ScaledSeries.zero()
    for t in terms:
        out = out + _term_series(t, bound)
    return out


class TestNormalize:
    def test_l8_1_cleared_terms(self):
        rec = parse_identity("pi(1)^2/(pi(2)*pi(4)) - pi(2)^2/pi(4)^2 = 4", id="L8-1")
        pf = normalize_polynomial(rec)
        got = {t.pi.exponents: t.coef for t in pf.terms}
        want = {
            PiMonomial.make({1: 2, 4: 1}).exponents: F(1),
            PiMonomial.make({2: 3}).exponents: F(-1),
            PiMonomial.make({2: 1, 4: 2}).exponents: F(-4),
        }
        assert got == want
        # every cleared term has weight 3 and exponent sum 2 mod 4
        for t in pf.terms:
            assert t.pi.weight == 3
            assert t.pi.exponent_weighted_sum % 4 == 2

    def test_l12_1_terms(self):
        rec = parse_identity("pi(2)^2 + 2*pi(2)*pi(6) = pi(1)*pi(3) + 3*pi(6)^2")
        pf = normalize_polynomial(rec)
        assert len(pf.terms) == 4
        for t in pf.terms:
            assert t.pi.weight == 2
            assert t.pi.exponent_weighted_sum % 4 == 0

    def test_already_polynomial_is_identity(self):
        rec = parse_identity("pi(1)*pi(3) = pi(2)^2")
        pf = normalize_polynomial(rec)
        assert not pf.clearing.exponents
        assert {t.coef for t in pf.terms} == {F(1), F(-1)}

    def test_sqrt_flag_carried(self):
        rec = parse_identity("sqrt(pi(1)*pi(3)) = pi(2)")
        pf = normalize_polynomial(rec)
        assert any(t.sqrt_flag for t in pf.terms)

    def test_nested_radical_rejected(self):
        with pytest.raises(NotPolynomializable):
            normalize_polynomial(parse_identity("sqrt(1 + sqrt(1 + pi(1))) = 1"))

    def test_normalized_series_matches_cleared_difference(self):
        # evaluate(normalize(rec)) == (evaluate(lhs) - evaluate(rhs)) * den * clearing
        # for every corpus record without radicals
        def has_sqrt(expr):
            from piq.ident import Lambert, Subst
            if isinstance(expr, Sqrt):
                return True
            if isinstance(expr, (Add, Mul)):
                return any(has_sqrt(c) for c in expr.children)
            if isinstance(expr, (Neg, Pow, Subst)):
                return has_sqrt(expr.child)
            return False

        for rec in piq.load_corpus():
            if has_sqrt(rec.lhs) or has_sqrt(rec.rhs):
                continue
            pf = normalize_polynomial(rec)
            bound = 12
            lhs = evaluate_to_bound(rec.lhs, bound)
            rhs = evaluate_to_bound(rec.rhs, bound)
            den = _ts_series(pf.denominator, bound)
            clear = _pi_series(pf.clearing, bound)
            direct = (lhs - rhs) * den * clear
            assert _ts_series(pf.terms, bound).agrees_with(direct, upto=10), rec.id

    def test_build_sides_consistent_with_normalize(self):
        rec = parse_identity("pi(1)^2/(pi(2)*pi(4)) - pi(2)^2/pi(4)^2 = 4")
        lhs_t, rhs_t, clearing = build_sides(rec)
        pf = normalize_polynomial(rec)
        diff = ts_make(list(lhs_t) + [type(t)(-t.coef, t.pi, t.lamberts, t.sqrts) for t in rhs_t])
        assert diff == pf.terms
        assert clearing.exponents == pf.clearing.exponents
