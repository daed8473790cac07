"""Phase-space layer: exact metrics, cylinder/arc algebra, basis enumeration.

Derived expectations are computed by independent brute-force oracles
(truncated metric sums, word enumeration) before being asserted.
"""

import math
from fractions import Fraction
from itertools import product as iproduct

import pytest
from hypothesis import given, settings, strategies as st

from ndslab.spaces import (
    AffineAngle,
    AlphaEnclosure,
    AlphaLinear,
    Arc,
    ArcSpan,
    BiWord,
    CircleSpace,
    Cylinder,
    EnclosureUndecided,
    FiniteId,
    FiniteSet,
    FiniteSpace,
    ShiftSpace,
    SpaceMismatch,
    all_ones,
    all_zeros,
    contains,
    diameter,
    diameter_witness_pair,
    distance,
    enumerate_basis,
    interior_point,
    intersect_basic,
    intersect_basic_ex,
    intersects,
    shift_distance,
    value_cmp,
)

SHIFT = ShiftSpace()
CIRCLE = CircleSpace()


def truncated_distance(x, y, T=96):
    """Independent oracle: truncate the metric sum to |i| <= T; the dropped
    tail weighs at most 2^(1-T) per side."""
    total = Fraction(0)
    for i in range(-T, T + 1):
        if x.coord(i) != y.coord(i):
            total += Fraction(1, 1 << abs(i))
    return total


TRUNC_SLACK = Fraction(4, 1 << 96)


biwords = st.builds(
    BiWord,
    window_start=st.integers(-8, 8),
    window=st.lists(st.integers(0, 1), max_size=8).map(tuple),
    left=st.lists(st.integers(0, 1), min_size=1, max_size=4).map(tuple),
    right=st.lists(st.integers(0, 1), min_size=1, max_size=4).map(tuple),
)


class TestShiftMetric:
    def test_identical_points(self):
        x = BiWord(0, (1, 0, 1), (0,), (1, 1, 0))
        assert distance(SHIFT, x, x) == 0

    def test_opposite_constants(self):
        # oracle: sum of 2^-|i|, truncated
        approx = truncated_distance(all_zeros(), all_ones())
        assert abs(approx - 3) < TRUNC_SLACK
        assert distance(SHIFT, all_zeros(), all_ones()) == 3

    @given(biwords, biwords)
    @settings(max_examples=300, deadline=None)
    def test_matches_truncation_oracle(self, x, y):
        exact = shift_distance(x, y)
        assert abs(exact - truncated_distance(x, y)) <= TRUNC_SLACK

    @given(biwords, biwords)
    @settings(max_examples=200, deadline=None)
    def test_symmetry_and_zero(self, x, y):
        assert shift_distance(x, y) == shift_distance(y, x)
        assert (shift_distance(x, y) == 0) == (x == y)

    @given(biwords, biwords, biwords)
    @settings(max_examples=150, deadline=None)
    def test_triangle(self, x, y, z):
        assert shift_distance(x, z) <= shift_distance(x, y) + shift_distance(y, z)

    def test_semantic_equality_across_representations(self):
        a = BiWord(0, (), (0,), (0,))
        b = BiWord(5, (0, 0, 0), (0, 0), (0,))
        assert a == b
        assert shift_distance(a, b) == 0

    def test_space_point_mismatch(self):
        with pytest.raises(SpaceMismatch):
            distance(SHIFT, all_zeros(), FiniteId(1))


class TestFiniteMetric:
    def test_discrete(self):
        space = FiniteSpace(3)
        assert distance(space, FiniteId(1), FiniteId(2)) == 1
        assert distance(space, FiniteId(2), FiniteId(2)) == 0


class TestCircle:
    def test_equal_points_exact_zero(self):
        p = AffineAngle(Fraction(1, 3), 2)
        assert distance(CIRCLE, p, p) == 0

    def test_rational_distance_exact(self):
        d = distance(CIRCLE, AffineAngle(Fraction(1, 8)), AffineAngle(Fraction(7, 8)))
        assert d == Fraction(1, 4)

    def test_irrational_offset_brackets_float(self):
        # independent float oracle
        alpha = math.sqrt(2) - 1
        d = distance(CIRCLE, AffineAngle(Fraction(0), 1), AffineAngle(Fraction(0), 0))
        lo, hi = d.enclosure()
        want = min(alpha, 1 - alpha)
        assert lo <= Fraction(want).limit_denominator(10**15) <= hi or abs(float(lo) - want) < 1e-12

    def test_angle_equality_uses_coefficients(self):
        assert AffineAngle(Fraction(1, 2), 1) != AffineAngle(Fraction(1, 2), 2)
        assert AffineAngle(Fraction(3, 2), 1) == AffineAngle(Fraction(1, 2), 1)

    def test_comparison_refines(self):
        v = AlphaLinear(Fraction(0), Fraction(1))
        assert v.cmp(Fraction(41421356237, 10**11)) > 0
        assert v.cmp(Fraction(41421356238, 10**11)) < 0

    def test_custom_enclosure_can_stay_undecided(self):
        alpha = AlphaEnclosure.custom(Fraction(1, 3), Fraction(1, 2**70))
        v = AlphaLinear(Fraction(0), Fraction(1), alpha)
        with pytest.raises(EnclosureUndecided):
            v.cmp(Fraction(1, 3))

    def test_floor_and_wrap(self):
        v = AlphaLinear(Fraction(5, 2), Fraction(3))
        w = v.wrap()
        assert value_cmp(w, 0) >= 0 and value_cmp(w, 1) < 0

    def test_alpha_bits_env_override(self, monkeypatch):
        v = AlphaLinear(Fraction(0), Fraction(1))
        monkeypatch.setenv("NDSLAB_ALPHA_BITS", "200")
        lo, hi = v.enclosure()
        assert hi - lo <= Fraction(1, 1 << 200)
        monkeypatch.setenv("NDSLAB_ALPHA_BITS", "banana")
        lo, hi = v.enclosure()  # malformed values fall back to the default
        assert hi - lo <= Fraction(1, 1 << 64)


class TestIntersection:
    def test_same_cylinder(self):
        c = Cylinder(0, (1,))
        assert intersect_basic(SHIFT, c, c) == c

    def test_symbol_conflict(self):
        assert intersect_basic(SHIFT, Cylinder(0, (1,)), Cylinder(0, (0,))) is None

    def test_overlapping_merge_matches_enumeration(self):
        a = Cylinder(-1, (0, 1))
        b = Cylinder(0, (1, 0))
        merged = intersect_basic(SHIFT, a, b)
        # oracle: brute force over all words on [-1, 2)
        members = [
            w
            for w in iproduct((0, 1), repeat=3)
            if w[0] == 0 and w[1] == 1 and w[1] == 1 and w[2] == 0
        ]
        assert members == [(0, 1, 0)]
        assert merged == Cylinder(-1, (0, 1, 0))

    def test_gap_merge_keeps_free_middle(self):
        a = Cylinder(-3, (1,))
        b = Cylinder(2, (0,))
        merged = intersect_basic(SHIFT, a, b)
        assert merged.at(-3) == 1 and merged.at(2) == 0 and merged.at(0) is None
        p = merged.interior_point()
        assert contains(SHIFT, a, p) and contains(SHIFT, b, p)

    @given(
        st.integers(-3, 3), st.lists(st.integers(0, 1), min_size=1, max_size=3).map(tuple),
        st.integers(-3, 3), st.lists(st.integers(0, 1), min_size=1, max_size=3).map(tuple),
    )
    @settings(max_examples=300, deadline=None)
    def test_against_word_enumeration(self, s1, w1, s2, w2):
        a, b = Cylinder(s1, w1), Cylinder(s2, w2)
        lo = min(a.start, b.start)
        hi = max(a.end, b.end)
        window = range(lo, hi)
        in_both = [
            w
            for w in iproduct((0, 1), repeat=hi - lo)
            if all(w[i - lo] == s for i, s in a.constrained())
            and all(w[i - lo] == s for i, s in b.constrained())
        ]
        merged = intersect_basic(SHIFT, a, b)
        if merged is None:
            assert not in_both
        else:
            want = [
                w
                for w in iproduct((0, 1), repeat=hi - lo)
                if all(w[i - lo] == s for i, s in merged.constrained())
            ]
            assert want == in_both
        # commutativity up to denotation
        other = intersect_basic(SHIFT, b, a)
        assert (merged is None) == (other is None)
        if merged is not None:
            assert merged == other

    def test_finite_sets(self):
        a = FiniteSet(frozenset({1, 2}))
        b = FiniteSet(frozenset({2, 3}))
        assert intersect_basic(FiniteSpace(3), a, b) == FiniteSet(frozenset({2}))
        assert intersect_basic(FiniteSpace(3), a, FiniteSet(frozenset({3}))) is None

    def test_variant_mismatch(self):
        with pytest.raises(SpaceMismatch):
            intersect_basic(SHIFT, Cylinder(0, (1,)), FiniteSet(frozenset({1})))


class TestArcs:
    def test_disjoint_arcs(self):
        a = Arc(AffineAngle(Fraction(0)), Fraction(1, 8))
        b = Arc(AffineAngle(Fraction(1, 2)), Fraction(1, 8))
        assert intersect_basic(CIRCLE, a, b) is None
        assert not intersects(CIRCLE, a, b)

    def test_identical_arcs(self):
        a = Arc(AffineAngle(Fraction(1, 4)), Fraction(1, 8))
        got, count = intersect_basic_ex(CIRCLE, a, a)
        assert got == a and count == 1

    def test_containment_keeps_rational_form(self):
        big = Arc(AffineAngle(Fraction(0)), Fraction(1, 4))
        small = Arc(AffineAngle(Fraction(0)), Fraction(1, 16))
        assert intersect_basic(CIRCLE, big, small) == small

    def test_partial_overlap_with_irrational_offset(self):
        a = Arc(AffineAngle(Fraction(0)), Fraction(1, 4))
        b = Arc(AffineAngle(Fraction(0), 1), Fraction(1, 4))  # center at alpha
        got, count = intersect_basic_ex(CIRCLE, a, b)
        assert count == 1 and isinstance(got, ArcSpan)
        mid = interior_point(CIRCLE, got)
        assert contains(CIRCLE, a, mid) and contains(CIRCLE, b, mid)

    def test_double_overlap_flags_two_components(self):
        a = Arc(AffineAngle(Fraction(0)), Fraction(3, 8))
        b = Arc(AffineAngle(Fraction(1, 2)), Fraction(3, 8))
        got, count = intersect_basic_ex(CIRCLE, a, b)
        assert count == 2 and got is not None

    def test_touching_open_arcs_are_disjoint(self):
        a = Arc(AffineAngle(Fraction(0)), Fraction(1, 8))
        b = Arc(AffineAngle(Fraction(1, 4)), Fraction(1, 8))
        assert intersect_basic(CIRCLE, a, b) is None


class TestDiameter:
    @pytest.mark.parametrize("w", [1, 2, 3, 4, 5])
    def test_symmetric_window_matches_truncation(self, w):
        cyl = Cylinder(-w, tuple([0] * (2 * w + 1)))
        # oracle: brute-force truncated weight of the free coordinates
        T = 80
        free = sum(
            Fraction(1, 1 << abs(i)) for i in range(-T, T + 1) if not (-w <= i <= w)
        )
        exact = diameter(SHIFT, cyl)
        assert exact == Fraction(2, 1 << w)
        assert abs(exact - free) < Fraction(4, 1 << T)

    def test_diameter_attained_by_witness_pair(self):
        cyl = Cylinder(-2, (1, 0, 1, 1, 0))
        x, y = diameter_witness_pair(SHIFT, cyl)
        assert contains(SHIFT, cyl, x) and contains(SHIFT, cyl, y)
        assert shift_distance(x, y) == diameter(SHIFT, cyl)

    def test_monotone_in_window_growth(self):
        prev = None
        for w in range(1, 7):
            d = diameter(SHIFT, Cylinder(-w, tuple([1] * (2 * w + 1))))
            if prev is not None:
                assert d < prev
            prev = d

    def test_reflection_invariance(self):
        a = diameter(SHIFT, Cylinder(2, (1, 1, 0)))
        b = diameter(SHIFT, Cylinder(-4, (0, 1, 1)))
        assert a == b

    def test_singleton_and_arc(self):
        assert diameter(FiniteSpace(3), FiniteSet(frozenset({1}))) == 0
        assert diameter(CIRCLE, Arc(AffineAngle(Fraction(0)), Fraction(1, 8))) == Fraction(1, 4)


class TestBasis:
    def test_shift_resolution_one(self):
        basis = enumerate_basis(SHIFT, 1)
        assert len(basis) == 8
        assert all(b.start == -1 and len(b.word) == 3 for b in basis)
        assert len(set(basis)) == 8

    def test_finite_singletons(self):
        assert enumerate_basis(FiniteSpace(3), 1) == [
            FiniteSet(frozenset({i})) for i in (1, 2, 3)
        ]

    def test_circle_resolution_four(self):
        basis = enumerate_basis(CIRCLE, 4)
        assert len(basis) == 4
        assert all(b.radius == Fraction(1, 8) for b in basis)

    @given(biwords)
    @settings(max_examples=100, deadline=None)
    def test_every_shift_point_covered(self, x):
        basis = enumerate_basis(SHIFT, 2)
        assert any(contains(SHIFT, b, x) for b in basis)

    @given(st.integers(0, 11), st.integers(-3, 3))
    @settings(max_examples=60, deadline=None)
    def test_generic_circle_points_covered(self, num, c):
        # points with irrational angle, or rational angle off arc boundaries
        p = AffineAngle(Fraction(num, 12), c)
        basis = enumerate_basis(CIRCLE, 4)
        if c == 0 and (Fraction(num, 12) * 8) % 1 == Fraction(1, 2) % 1 and num % 3 == 0:
            return  # boundary midpoints sit between open arcs
        covered = any(contains(CIRCLE, b, p) for b in basis)
        boundary = c == 0 and Fraction(num, 12) in (
            Fraction(1, 8), Fraction(3, 8), Fraction(5, 8), Fraction(7, 8),
        )
        assert covered or boundary

    def test_points_within_diameter(self):
        basis = enumerate_basis(SHIFT, 2)
        A = basis[17]
        p = interior_point(SHIFT, A)
        x, y = diameter_witness_pair(SHIFT, A)
        for q in (x, y):
            assert shift_distance(p, q) <= diameter(SHIFT, A)
