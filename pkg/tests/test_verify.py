from fractions import Fraction as F

import pytest

import piq
from piq.etaq import PiMonomial
from piq.ident import parse_identity
from piq.series import ScaledSeries as S
from piq.verify import (
    ProveConfig,
    RTerm,
    _search_clearing,
    check,
    prove,
    root_match,
    sturm_bound,
)


class TestSturmBound:
    @pytest.mark.parametrize(
        "level,weight,bound",
        [(12, 6, 13), (40, 10, 61), (18, 8, 25), (10, 6, 10), (2, 4, 2)],
    )
    def test_examples(self, level, weight, bound):
        assert sturm_bound(level, weight) == bound

    def test_weight_zero(self):
        assert sturm_bound(1, 0) == 1

    def test_negative_weight_rejected(self):
        with pytest.raises(ValueError):
            sturm_bound(4, -2)


class TestRootMatch:
    def test_equal(self):
        s = S.from_terms({0: 1, 1: 1}, 5)
        assert root_match(s, s, 2)

    def test_opposite_branch(self):
        s = S.from_terms({0: 1, 1: 1}, 5)
        assert not root_match(s, -s, 2)

    def test_l12_3_sides(self):
        rec = next(r for r in piq.load_corpus() if r.id == "L12-3")
        lhs = piq.evaluate_to_bound(rec.lhs, F(9, 4))
        rhs = piq.evaluate_to_bound(rec.rhs, F(9, 4))
        assert root_match(lhs, rhs, 2)
        assert lhs.leading_coefficient() > 0


class TestProve:
    def test_l8_1_certificate_numbers(self):
        rep = prove(parse_identity("pi(1)^2/(pi(2)*pi(4)) - pi(2)^2/pi(4)^2 = 4", id="L8-1"))
        assert rep.verdict == "PROVEN"
        assert rep.weight == 3
        assert rep.level == 16
        assert rep.subst_exponent == 2
        assert rep.sturm_bound == 7
        assert rep.coefficients_compared >= rep.sturm_bound

    def test_l12_3_squared_route(self):
        rep = prove(
            parse_identity(
                "sqrt(pi(2)*pi(6))*(pi(1)^2 - 3*pi(3)^2) = sqrt(pi(1)*pi(3))*(pi(2)^2 + 3*pi(6)^2)",
                id="L12-3",
            )
        )
        assert rep.verdict == "PROVEN"
        assert (rep.weight, rep.level, rep.sturm_bound) == (6, 12, 13)
        cites = rep.certificate.citations
        assert any("squaring" in c for c in cites)
        assert any("branch comparison" in c for c in cites)

    def test_mutated_constant_refuted(self):
        rep = prove(parse_identity("pi(1)^2/(pi(2)*pi(4)) - pi(2)^2/pi(4)^2 = 5", id="bad"))
        assert rep.verdict == "REFUTED"
        assert rep.mismatch is not None
        assert rep.mismatch[0] <= rep.sturm_bound

    def test_non_homogeneous_false_identity_refuted_by_fallback(self):
        rep = prove(parse_identity("pi(1)*pi(3) + pi(2) = pi(2)^2", id="mixed"))
        assert rep.verdict == "REFUTED"

    def test_true_but_unrecognized_pattern_is_uncertified(self):
        # a genuine identity built from patterns outside the reduction rules
        rep = prove(parse_identity("lam(3,1) + lam(3,2) = lam(1,0) - lam(3,0)", id="offrule"))
        assert rep.verdict == "UNCERTIFIED"
        assert "agree" in rep.detail

    def test_bare_constant_uncertified_or_refuted(self):
        rep = prove(parse_identity("pi(1)*pi(3) + 1 = pi(2)^2", id="const"))
        assert rep.verdict in ("UNCERTIFIED", "REFUTED")

    def test_irreducible_lambert_is_checked_not_passed(self):
        # true identity, but the quartic pair rule needs the exact 6:1 ratio
        rep = prove(parse_identity("6*lam4(2,1) + 2*lam(2,1) = dl3() + lam(2,1)", id="nopair"))
        assert rep.verdict == "UNCERTIFIED"
        assert "not a proof" in rep.detail
        rep2 = prove(parse_identity("lam(3,1) = lam(3,1) + 0", id="samepattern"))
        assert rep2.verdict == "PROVEN"  # sides cancel symbolically
        rep3 = prove(parse_identity("lam(3,2) + pi(1)*pi(3) = lam(3,1)", id="irred"))
        assert rep3.verdict == "REFUTED"

    def test_subst_hint_respected(self):
        from piq.ident import Hints

        rec = parse_identity("pi(1)*pi(3) = pi(2)^2 - 2*pi(2)*pi(6) + 3*pi(6)^2", id="h")
        rec = type(rec)(rec.id, rec.source, rec.lhs, rec.rhs, Hints(subst=4))
        rep = prove(rec)
        assert rep.subst_exponent == 4

    def test_clear_hint_changes_certificate_not_verdict(self):
        from piq.ident import Hints

        text = "pi(1)^2/(pi(2)*pi(4)) - pi(2)^2/pi(4)^2 = 4"
        base = prove(parse_identity(text, id="L8-1"))
        rec = parse_identity(text, id="L8-1h")
        rec = type(rec)(rec.id, rec.source, rec.lhs, rec.rhs, Hints(clear="pi(2)*pi(4)^3"))
        hinted = prove(rec)
        assert base.verdict == hinted.verdict == "PROVEN"
        assert (base.weight, base.subst_exponent) == (3, 2)
        assert (hinted.weight, hinted.subst_exponent) == (7, 1)

    def test_trivial_identity(self):
        rep = prove(parse_identity("1 = 1", id="one"))
        assert rep.verdict == "PROVEN"

    def test_monotone_in_clear_weight(self):
        rec = parse_identity("pi(2)*pi(3)^2/(pi(6)*pi(1)^2) = (pi(2) - pi(6))/(pi(2) + 3*pi(6))", id="L12-2")
        r1 = prove(rec, ProveConfig(max_clear_weight=16))
        r2 = prove(rec, ProveConfig(max_clear_weight=32))
        assert r1.verdict == r2.verdict == "PROVEN"
        assert (r1.weight, r1.level, r1.sturm_bound) == (r2.weight, r2.level, r2.sturm_bound)


class TestProvenSoundnessSpotChecks:
    @pytest.mark.parametrize("rid", ["L8-1", "L12-1", "L16-1", "La6-2", "La4-2"])
    def test_check_mode_confirms_proofs(self, rid):
        rec = next(r for r in piq.load_corpus() if r.id == rid)
        proven = prove(rec)
        assert proven.verdict == "PROVEN"
        confirmed = check(rec, 2 * proven.sturm_bound)
        assert confirmed.verdict == "CHECKED"

    def test_minimal_subst_exponent(self):
        for rid in ["L8-1", "L12-1", "L18-5", "L20-5"]:
            rec = next(r for r in piq.load_corpus() if r.id == rid)
            rep = prove(rec)
            assert rep.subst_exponent in (1, 2, 4)


class TestCheck:
    def test_la2_1_first_equality(self):
        rec = parse_identity("6*lam4(2,1) + lam(2,1) = dl3()", id="La2-1a")
        rep = check(rec, 100)
        assert rep.verdict == "CHECKED"
        assert rep.coefficients_compared == 100
        assert prove(rec).verdict == "PROVEN"  # the pair rule fires

    def test_corpus_sanity_sweep_30_terms(self):
        for rec in piq.load_corpus()[:8]:
            rep = check(rec, 30)
            assert rep.verdict == "CHECKED", (rec.id, rep.detail)

    def test_trivial(self):
        assert check(parse_identity("1 = 1"), 1).verdict == "CHECKED"

    def test_check_refutes(self):
        rep = check(parse_identity("pi(1)*pi(3) = pi(2)^2"), 10)
        assert rep.verdict == "REFUTED"
        assert rep.mismatch is not None


class TestClearingSearch:
    def test_search_finds_monomial_for_negative_orders(self):
        # A term with a pole at some cusp: Pi_2^2 / Pi_1 at level 4 shifted
        terms = (RTerm(F(1), PiMonomial.make({1: -1, 2: 2})), RTerm(F(1), PiMonomial.make({1: 3})))
        mono = _search_clearing(terms, (), 4, 16)
        assert mono is not None
        from piq.etaq import cusps, pi_order_at_cusp

        for t in terms:
            for c in cusps(4):
                assert pi_order_at_cusp(t.pi * mono, c, 4) >= 0
        assert mono.exponent_weighted_sum % 4 == 0

    def test_no_search_needed_for_nonnegative(self):
        terms = (RTerm(F(1), PiMonomial.make({1: 2, 2: 2})),)
        assert _search_clearing(terms, (), 4, 16) is None


class TestRootBranchRefutation:
    def test_sign_flip_refutes(self):
        rep = prove(
            parse_identity(
                "pi(3)^2 + 3*pi(1)*pi(9) = -sqrt(pi(1)*pi(9))*(pi(1) + 3*pi(9))",
                id="L18-1-flipped",
            )
        )
        assert rep.verdict == "REFUTED"
        assert "leading" in rep.detail
