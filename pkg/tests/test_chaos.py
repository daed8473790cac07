"""Itinerary construction and Li-Yorke pair scanning."""

from fractions import Fraction

import pytest

from ndslab.chaos import (
    ItineraryConstruction,
    ItineraryFailure,
    lemma21_construct,
    li_yorke_scan,
    orbit_distance_trace,
    proximal_scrambled_candidates,
)
from ndslab.maps import (
    IdentityTerm,
    NdsSpec,
    ShiftPowTerm,
    apply,
    prefix_compose,
    step_normal,
)
from ndslab.spaces import (
    BiWord,
    ShiftSpace,
    all_ones,
    all_zeros,
    contains,
    shift_distance,
)

SHIFT = ShiftSpace()
CONST_SIGMA = NdsSpec(SHIFT, (), ShiftPowTerm(1))
CONST_ID = NdsSpec(SHIFT, (), IdentityTerm())


class TestItineraryConstruction:
    def test_constant_shift_three_levels(self):
        res = lemma21_construct(CONST_SIGMA, all_zeros(), all_ones(), 3, 256)
        assert isinstance(res, ItineraryConstruction)
        assert len(res.witnesses) == 8
        assert list(res.times) == sorted(res.times)
        assert len(set(res.times)) == 3

    def test_witnesses_verified_independently(self):
        res = lemma21_construct(CONST_SIGMA, all_zeros(), all_ones(), 3, 256)
        for label, x in res.witnesses.items():
            point = x
            n = 0
            for i, p in enumerate(res.times):
                while n < p:
                    n += 1
                    point = apply(step_normal(CONST_SIGMA, n), point)
                target = res.levels[i][0] if label[i] == "A" else res.levels[i][1]
                assert contains(SHIFT, target, point)

    def test_zero_levels_trivial(self):
        res = lemma21_construct(CONST_SIGMA, all_zeros(), all_ones(), 0, 16)
        assert isinstance(res, ItineraryConstruction)
        assert res.witnesses == {}

    def test_identity_fails_at_level_one(self):
        res = lemma21_construct(CONST_ID, all_zeros(), all_ones(), 1, 64)
        assert isinstance(res, ItineraryFailure)
        assert res.level == 1

    def test_equal_endpoints_rejected(self):
        with pytest.raises(ValueError):
            lemma21_construct(CONST_SIGMA, all_zeros(), all_zeros(), 2, 64)


class TestLiYorkeScan:
    def test_identical_pair_never_qualifies(self):
        p = all_zeros()
        reports = li_yorke_scan(CONST_SIGMA, [(p, p)], 64)
        assert reports[0].liminf_estimate == 0
        assert reports[0].limsup_estimate == 0
        assert not reports[0].qualifies

    def test_single_disagreement_drifts_away(self):
        y = BiWord.from_window(0, (1,), 0)
        reports = li_yorke_scan(
            CONST_SIGMA, [(all_zeros(), y)], 64,
            eps_low=Fraction(1, 1024), delta_high=Fraction(1, 2),
        )
        rep = reports[0]
        # the lone disagreement shifts away: liminf small, limsup small too
        assert rep.liminf_estimate < Fraction(1, 1024)
        assert rep.limsup_estimate < Fraction(1, 2)
        assert not rep.qualifies

    def test_trace_matches_closed_form_oracle(self):
        y = BiWord(0, (), (0,), (1, 0, 0, 0))
        trace = orbit_distance_trace(CONST_SIGMA, all_zeros(), y, 40)
        for n in range(1, 41):
            direct = shift_distance(
                apply(prefix_compose(CONST_SIGMA, n), all_zeros()),
                apply(prefix_compose(CONST_SIGMA, n), y),
            )
            assert trace[n - 1] == direct

    def test_block_candidates_qualify(self):
        pairs = proximal_scrambled_candidates(all_zeros(), all_ones(), 4)
        reports = li_yorke_scan(CONST_SIGMA, pairs, 2048)
        assert sum(1 for r in reports if r.qualifies) >= 3

    def test_threshold_ordering_enforced(self):
        with pytest.raises(ValueError):
            li_yorke_scan(CONST_SIGMA, [], 64, Fraction(1, 2), Fraction(1, 4))
