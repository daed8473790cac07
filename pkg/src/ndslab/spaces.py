"""Exact phase spaces: the two-sided full shift, finite discrete spaces, and
the circle with an irrational rotation angle.

All values are immutable and all operations are pure.  Shift and finite
computations are exact rational arithmetic; circle computations are exact
where possible (equal rotation coefficients) and otherwise work through a
refinable rational enclosure of the angle.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Optional, Union


class SpaceMismatch(ValueError):
    """A point or open set was used with a space/variant it does not belong to."""


class EnclosureUndecided(Exception):
    """A comparison could not be decided at the maximum enclosure refinement."""


def _env_alpha_bits() -> int:
    raw = os.environ.get("NDSLAB_ALPHA_BITS", "")
    try:
        bits = int(raw)
    except ValueError:
        bits = 0
    # enclosure width must stay below 2^-64
    return max(bits, 72)


REFINE_RETRIES = 64


# ---------------------------------------------------------------------------
# angle enclosures


@dataclass(frozen=True)
class AlphaEnclosure:
    """Rational enclosure of an irrational angle in (0, 1).

    The builtin kind encloses sqrt(2) - 1 and refines to any precision;
    a custom enclosure is a fixed declared interval and cannot refine past
    its declared width.
    """

    kind: str = "sqrt2m1"
    center: Optional[Fraction] = None
    halfwidth: Optional[Fraction] = None

    @staticmethod
    def sqrt2_minus_1() -> "AlphaEnclosure":
        return AlphaEnclosure("sqrt2m1")

    @staticmethod
    def custom(center: Fraction, halfwidth: Fraction) -> "AlphaEnclosure":
        center = Fraction(center)
        halfwidth = Fraction(halfwidth)
        if halfwidth <= 0:
            raise ValueError("enclosure halfwidth must be positive")
        if not (0 < center - halfwidth and center + halfwidth < 1):
            raise ValueError("enclosure must lie inside (0, 1)")
        return AlphaEnclosure("custom", center, halfwidth)

    @property
    def refinable(self) -> bool:
        return self.kind == "sqrt2m1"

    def bounds(self, bits: int) -> tuple[Fraction, Fraction]:
        """Lower/upper rational bounds; width <= 2^-bits when refinable."""
        if self.kind == "sqrt2m1":
            return _sqrt2m1_bounds(bits)
        return (self.center - self.halfwidth, self.center + self.halfwidth)


_SQRT2M1_CACHE: dict[int, tuple[Fraction, Fraction]] = {}


def _sqrt2m1_bounds(bits: int) -> tuple[Fraction, Fraction]:
    hit = _SQRT2M1_CACHE.get(bits)
    if hit is None:
        s = isqrt(2 << (2 * bits))
        hit = (Fraction(s, 1 << bits) - 1, Fraction(s + 1, 1 << bits) - 1)
        _SQRT2M1_CACHE[bits] = hit
    return hit


DEFAULT_ALPHA = AlphaEnclosure.sqrt2_minus_1()


@dataclass(frozen=True)
class AlphaLinear:
    """The real number q + m*alpha, carried exactly.

    Comparisons against rationals (and other AlphaLinear values over the same
    alpha) are decided by refining the enclosure; they can only stay undecided
    when the two values are genuinely equal as reals, which for m != 0 cannot
    happen against a rational because alpha is irrational.
    """

    q: Fraction
    m: Fraction
    alpha: AlphaEnclosure = DEFAULT_ALPHA

    @property
    def exact(self) -> bool:
        return self.m == 0

    def as_fraction(self) -> Fraction:
        if self.m != 0:
            raise EnclosureUndecided("value is irrational, no exact fraction")
        return self.q

    def enclosure(self, bits: Optional[int] = None) -> tuple[Fraction, Fraction]:
        if self.m == 0:
            return (self.q, self.q)
        bits = bits if bits is not None else _env_alpha_bits()
        lo, hi = self.alpha.bounds(bits)
        a = self.q + self.m * lo
        b = self.q + self.m * hi
        return (a, b) if a <= b else (b, a)

    def __add__(self, other):
        if isinstance(other, AlphaLinear):
            if other.alpha != self.alpha:
                raise SpaceMismatch("mixed alpha enclosures")
            return AlphaLinear(self.q + other.q, self.m + other.m, self.alpha)
        return AlphaLinear(self.q + Fraction(other), self.m, self.alpha)

    def __sub__(self, other):
        if isinstance(other, AlphaLinear):
            if other.alpha != self.alpha:
                raise SpaceMismatch("mixed alpha enclosures")
            return AlphaLinear(self.q - other.q, self.m - other.m, self.alpha)
        return AlphaLinear(self.q - Fraction(other), self.m, self.alpha)

    def __neg__(self):
        return AlphaLinear(-self.q, -self.m, self.alpha)

    def cmp(self, other: Union["AlphaLinear", Fraction, int]) -> int:
        """-1, 0, +1 against another value; raises EnclosureUndecided only
        for non-refinable enclosures that are too wide."""
        if isinstance(other, AlphaLinear):
            diff = self - other
        else:
            diff = self - Fraction(other)
        if diff.m == 0:
            return -1 if diff.q < 0 else (1 if diff.q > 0 else 0)
        base = _env_alpha_bits()
        for retry in range(REFINE_RETRIES + 1):
            lo, hi = diff.enclosure(base + retry)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            if not diff.alpha.refinable:
                break
        raise EnclosureUndecided(f"cannot order {diff} against 0")

    def floor(self) -> int:
        if self.m == 0:
            num, den = self.q.numerator, self.q.denominator
            return num // den
        base = _env_alpha_bits()
        for retry in range(REFINE_RETRIES + 1):
            lo, hi = self.enclosure(base + retry)
            flo = lo.numerator // lo.denominator
            if hi < flo + 1:
                return flo
            if not self.alpha.refinable:
                break
        raise EnclosureUndecided(f"cannot take floor of {self}")

    def wrap(self) -> "AlphaLinear":
        """Reduce into [0, 1)."""
        return self - Fraction(self.floor())

    def float_estimate(self) -> float:
        lo, hi = self.enclosure()
        return float((lo + hi) / 2)


RationalOrEnclosure = Union[Fraction, AlphaLinear]


def value_cmp(a: RationalOrEnclosure, b: Union[RationalOrEnclosure, int]) -> int:
    """Order two exact-or-enclosure values."""
    if isinstance(a, AlphaLinear):
        return a.cmp(b)
    if isinstance(b, AlphaLinear):
        return -b.cmp(a)
    a, b = Fraction(a), Fraction(b)
    return -1 if a < b else (1 if a > b else 0)


# ---------------------------------------------------------------------------
# space descriptions


@dataclass(frozen=True)
class ShiftSpace:
    alphabet_size: int = 2

    def __post_init__(self):
        if self.alphabet_size < 2:
            raise ValueError("alphabet_size must be at least 2")


@dataclass(frozen=True)
class FiniteSpace:
    point_count: int

    def __post_init__(self):
        if self.point_count < 1:
            raise ValueError("point_count must be positive")


@dataclass(frozen=True)
class CircleSpace:
    alpha: AlphaEnclosure = DEFAULT_ALPHA


@dataclass(frozen=True)
class ProductSpace:
    parts: tuple

    def __post_init__(self):
        if len(self.parts) < 2:
            raise ValueError("a product space needs at least two components")


SpaceDesc = Union[ShiftSpace, FiniteSpace, CircleSpace, ProductSpace]


def has_isolated_points(space: SpaceDesc) -> bool:
    if isinstance(space, FiniteSpace):
        return True
    if isinstance(space, ProductSpace):
        return any(has_isolated_points(p) for p in space.parts)
    return False


def space_diameter(space: SpaceDesc) -> Fraction:
    if isinstance(space, ShiftSpace):
        return Fraction(3)
    if isinstance(space, FiniteSpace):
        return Fraction(0) if space.point_count == 1 else Fraction(1)
    if isinstance(space, CircleSpace):
        return Fraction(1, 2)
    return max(space_diameter(p) for p in space.parts)


# ---------------------------------------------------------------------------
# points


@dataclass(frozen=True)
class FiniteId:
    index: int

    def __post_init__(self):
        if self.index < 1:
            raise ValueError("point ids are 1-based")


def _primitive(period: tuple) -> tuple:
    n = len(period)
    for p in range(1, n):
        if n % p == 0 and all(period[i] == period[i % p] for i in range(n)):
            return period[:p]
    return period


@dataclass(frozen=True, eq=False)
class BiWord:
    """A bi-infinite symbol sequence: a finite window with purely periodic
    tails on both sides.  Coordinate i for i < window_start comes from `left`
    repeating leftward; for i >= window_start + len(window) from `right`
    repeating rightward.

    Equality is semantic (same coordinate at every index), independent of the
    chosen representation.
    """

    window_start: int
    window: tuple
    left: tuple
    right: tuple

    def __post_init__(self):
        if not self.left or not self.right:
            raise ValueError("periodic tails must be nonempty")
        object.__setattr__(self, "left", _primitive(tuple(self.left)))
        object.__setattr__(self, "right", _primitive(tuple(self.right)))
        object.__setattr__(self, "window", tuple(self.window))

    @property
    def window_end(self) -> int:
        return self.window_start + len(self.window)

    def coord(self, i: int) -> int:
        if i < self.window_start:
            return self.left[(i - self.window_start) % len(self.left)]
        if i >= self.window_end:
            return self.right[(i - self.window_end) % len(self.right)]
        return self.window[i - self.window_start]

    def shifted(self, e: int) -> "BiWord":
        """The point y with y_i = x_{i+e} (image under the e-th shift power)."""
        if e == 0:
            return self
        # periodic tails are anchored at the window, so only the anchor moves
        return BiWord(self.window_start - e, self.window, self.left, self.right)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BiWord):
            return NotImplemented
        lcm_l = len(self.left) * len(other.left) // gcd(len(self.left), len(other.left))
        lcm_r = len(self.right) * len(other.right) // gcd(len(self.right), len(other.right))
        lo = min(self.window_start, other.window_start) - lcm_l
        hi = max(self.window_end, other.window_end) + lcm_r
        return all(self.coord(i) == other.coord(i) for i in range(lo, hi))

    __hash__ = None  # semantic equality; not hashable

    def __repr__(self):
        w = "".join(str(s) for s in self.window)
        l = "".join(str(s) for s in self.left)
        r = "".join(str(s) for s in self.right)
        return f"BiWord(({l})* [{w}]@{self.window_start} ({r})*)"

    @staticmethod
    def constant(symbol: int) -> "BiWord":
        return BiWord(0, (), (symbol,), (symbol,))

    @staticmethod
    def from_window(window_start: int, window, fill: int = 0) -> "BiWord":
        return BiWord(window_start, tuple(window), (fill,), (fill,))


def all_zeros() -> BiWord:
    return BiWord.constant(0)


def all_ones() -> BiWord:
    return BiWord.constant(1)


def _norm_coeff(c) -> Fraction:
    c = Fraction(c)
    return c


@dataclass(frozen=True)
class AffineAngle:
    """The angle q + c*alpha (mod 1).  Coefficients from corpus points are
    integers; arc intersection midpoints may carry half-integers."""

    q: Fraction
    c: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "q", Fraction(self.q) % 1)
        object.__setattr__(self, "c", _norm_coeff(self.c))

    def lift(self, alpha: AlphaEnclosure) -> AlphaLinear:
        return AlphaLinear(self.q, self.c, alpha)

    def rotated(self, coefficient) -> "AffineAngle":
        return AffineAngle(self.q, self.c + Fraction(coefficient))


@dataclass(frozen=True)
class ProductPoint:
    parts: tuple


Point = Union[FiniteId, BiWord, AffineAngle, ProductPoint]


def _angle_from_linear(v: AlphaLinear) -> AffineAngle:
    w = v.wrap()
    return AffineAngle(w.q, w.m)


def circle_separation(space: CircleSpace, a: AffineAngle, b: AffineAngle) -> AlphaLinear:
    """Circle metric min(t, 1-t) for the angular difference t, exact-aware."""
    diff = AlphaLinear(a.q - b.q, a.c - b.c, space.alpha)
    t = diff.wrap()
    if t.m == 0:
        d = min(t.q, 1 - t.q)
        return AlphaLinear(d, Fraction(0), space.alpha)
    # t irrational: comparison against 1/2 always decides
    if t.cmp(Fraction(1, 2)) < 0:
        return t
    return AlphaLinear(Fraction(1), Fraction(0), space.alpha) - t


# ---------------------------------------------------------------------------
# basic open sets


@dataclass(frozen=True)
class Cylinder:
    """Points agreeing with `word` on the window starting at `start`.

    A None entry leaves that coordinate unconstrained; merged cylinders with
    disjoint windows use this to stay exactly representable.
    """

    start: int
    word: tuple

    def __post_init__(self):
        word = tuple(self.word)
        if not word or all(s is None for s in word):
            raise ValueError("cylinder word must constrain at least one coordinate")
        # canonical form: no unconstrained padding at either end
        lo = 0
        while word[lo] is None:
            lo += 1
        hi = len(word)
        while word[hi - 1] is None:
            hi -= 1
        object.__setattr__(self, "start", self.start + lo)
        object.__setattr__(self, "word", word[lo:hi])

    @property
    def end(self) -> int:
        return self.start + len(self.word)

    def constrained(self):
        for off, s in enumerate(self.word):
            if s is not None:
                yield self.start + off, s

    def at(self, i: int):
        if self.start <= i < self.end:
            return self.word[i - self.start]
        return None

    def interior_point(self, fill: int = 0) -> BiWord:
        window = tuple(fill if s is None else s for s in self.word)
        return BiWord.from_window(self.start, window, fill)


@dataclass(frozen=True)
class FiniteSet:
    ids: frozenset

    def __post_init__(self):
        ids = frozenset(self.ids)
        if not ids:
            raise ValueError("finite open sets must be nonempty")
        object.__setattr__(self, "ids", ids)


@dataclass(frozen=True)
class Arc:
    """Open arc of circumference length 2*radius around `center`."""

    center: AffineAngle
    radius: Fraction

    def __post_init__(self):
        r = Fraction(self.radius)
        if not (0 < r < Fraction(1, 2)):
            raise ValueError("arc radius must lie in (0, 1/2)")
        object.__setattr__(self, "radius", r)


@dataclass(frozen=True)
class ArcSpan:
    """Open arc running counterclockwise from `start` to `end` (exclusive).

    Produced by arc intersections whose endpoints are irrationally offset and
    therefore have no center-radius form with rational radius.
    """

    start: AffineAngle
    end: AffineAngle


@dataclass(frozen=True)
class ProductOpen:
    parts: tuple


BasicOpen = Union[Cylinder, FiniteSet, Arc, ArcSpan, ProductOpen]


def cylinder(start: int, symbols) -> Cylinder:
    return Cylinder(start, tuple(symbols))


def _check_space_point(space: SpaceDesc, p: Point) -> None:
    ok = (
        (isinstance(space, ShiftSpace) and isinstance(p, BiWord))
        or (isinstance(space, FiniteSpace) and isinstance(p, FiniteId))
        or (isinstance(space, CircleSpace) and isinstance(p, AffineAngle))
        or (isinstance(space, ProductSpace) and isinstance(p, ProductPoint))
    )
    if not ok:
        raise SpaceMismatch(f"{type(p).__name__} is not a point of {type(space).__name__}")


# ---------------------------------------------------------------------------
# metric


def _geometric_block(x: BiWord, y: BiWord, a: int, count, period: int, sign: int) -> Fraction:
    """Sum of |x_i - y_i| * 2^(sign*i) over i = a + j*step for blocks of the
    given period, `count` full periods (None = infinitely many), marching in
    direction `sign` (+1 rightward with weights 2^-i, -1 leftward with 2^i).

    Relies on the disagreement pattern being periodic from a onward in the
    marching direction."""
    step = 1 if sign > 0 else -1
    block = Fraction(0)
    for j in range(period):
        i = a + step * j
        if x.coord(i) != y.coord(i):
            block += Fraction(1, 1 << abs(i))
    if not block:
        return block
    ratio = Fraction(1, 1 << period)
    if count is None:
        return block / (1 - ratio)
    return block * (1 - ratio**count) / (1 - ratio)


def shift_distance(x: BiWord, y: BiWord) -> Fraction:
    """d(x, y) = sum over all integers i of |x_i - y_i| / 2^|i|, exactly.

    Periodic stretches are summed as geometric blocks, so the cost depends on
    window and period sizes, not on how far the windows sit from the origin.
    """
    lp = len(x.left) * len(y.left) // gcd(len(x.left), len(y.left))
    rp = len(x.right) * len(y.right) // gcd(len(x.right), len(y.right))
    cuts = sorted({0, x.window_start, x.window_end, y.window_start, y.window_end})
    lo, hi = cuts[0], cuts[-1]

    def tail_period(p: BiWord, a: int, b: int):
        # p's mode on the segment [a, b): its pure period or None inside the window
        if b <= p.window_start:
            return len(p.left)
        if a >= p.window_end:
            return len(p.right)
        return None

    total = Fraction(0)
    # between consecutive cuts each point runs in one fixed mode and the sign
    # of i is constant; window segments are short and summed directly, purely
    # periodic segments collapse to geometric blocks
    for a, b in zip(cuts, cuts[1:]):
        px, py = tail_period(x, a, b), tail_period(y, a, b)
        q = px * py // gcd(px, py) if (px and py) else None
        if q is None or b - a <= 2 * q:
            for i in range(a, b):
                if x.coord(i) != y.coord(i):
                    total += Fraction(1, 1 << abs(i))
            continue
        full, rem = divmod(b - a, q)
        if b <= 0:
            total += _geometric_block(x, y, b - 1, full, q, -1)
            leftover = range(a, a + rem)
        else:
            total += _geometric_block(x, y, a, full, q, +1)
            leftover = range(b - rem, b)
        for i in leftover:
            if x.coord(i) != y.coord(i):
                total += Fraction(1, 1 << abs(i))
    total += _geometric_block(x, y, hi, None, rp, +1)
    total += _geometric_block(x, y, lo - 1, None, lp, -1)
    return total


def distance(space: SpaceDesc, p: Point, q: Point) -> RationalOrEnclosure:
    """Metric of the space: exact rational on shift/finite spaces, exact or
    enclosure-valued on the circle (exact zero for equal points)."""
    _check_space_point(space, p)
    _check_space_point(space, q)
    if isinstance(space, ShiftSpace):
        return shift_distance(p, q)
    if isinstance(space, FiniteSpace):
        return Fraction(0) if p.index == q.index else Fraction(1)
    if isinstance(space, CircleSpace):
        sep = circle_separation(space, p, q)
        return sep.q if sep.exact else sep
    parts = [distance(s, a, b) for s, a, b in zip(space.parts, p.parts, q.parts)]
    if all(isinstance(d, Fraction) for d in parts):
        return max(parts)
    best = parts[0]
    for d in parts[1:]:
        if value_cmp(d, best) > 0:
            best = d
    return best


# ---------------------------------------------------------------------------
# membership


def contains(space: SpaceDesc, A: BasicOpen, p: Point) -> bool:
    _check_space_point(space, p)
    if isinstance(A, Cylinder):
        return all(p.coord(i) == s for i, s in A.constrained())
    if isinstance(A, FiniteSet):
        return p.index in A.ids
    if isinstance(A, Arc):
        sep = circle_separation(space, p, A.center)
        return value_cmp(sep, A.radius) < 0
    if isinstance(A, ArcSpan):
        alpha = space.alpha
        w = (p.lift(alpha) - A.start.lift(alpha)).wrap()
        length = (A.end.lift(alpha) - A.start.lift(alpha)).wrap()
        return value_cmp(w, 0) > 0 and value_cmp(w, length) < 0
    if isinstance(A, ProductOpen):
        return all(contains(s, a, x) for s, a, x in zip(space.parts, A.parts, p.parts))
    raise SpaceMismatch(f"unknown open set {A!r}")


def interior_point(space: SpaceDesc, A: BasicOpen) -> Point:
    """Some point inside A (deterministic)."""
    if isinstance(A, Cylinder):
        return A.interior_point()
    if isinstance(A, FiniteSet):
        return FiniteId(min(A.ids))
    if isinstance(A, Arc):
        return A.center
    if isinstance(A, ArcSpan):
        alpha = space.alpha
        s = A.start.lift(alpha)
        length = (A.end.lift(alpha) - s).wrap()
        mid = s + AlphaLinear(length.q / 2, length.m / 2, alpha)
        return _angle_from_linear(mid)
    if isinstance(A, ProductOpen):
        return ProductPoint(tuple(interior_point(s, a) for s, a in zip(space.parts, A.parts)))
    raise SpaceMismatch(f"unknown open set {A!r}")


# ---------------------------------------------------------------------------
# intersection


def _intersect_cylinders(a: Cylinder, b: Cylinder) -> Optional[Cylinder]:
    lo = min(a.start, b.start)
    hi = max(a.end, b.end)
    merged = []
    for i in range(lo, hi):
        sa, sb = a.at(i), b.at(i)
        if sa is not None and sb is not None and sa != sb:
            return None
        merged.append(sa if sa is not None else sb)
    return Cylinder(lo, tuple(merged))


def _span_of(space: CircleSpace, A: Union[Arc, ArcSpan]) -> tuple[AlphaLinear, AlphaLinear]:
    """(start position, length) of the arc, as exact reals."""
    alpha = space.alpha
    if isinstance(A, Arc):
        start = A.center.lift(alpha) - A.radius
        return start, AlphaLinear(2 * A.radius, Fraction(0), alpha)
    start = A.start.lift(alpha)
    return start, (A.end.lift(alpha) - start).wrap()


def _make_arc(space: CircleSpace, start: AlphaLinear, end: AlphaLinear) -> Union[Arc, ArcSpan]:
    length = end - start
    if length.m == 0 and Fraction(0) < length.q < 1 and length.q / 2 < Fraction(1, 2):
        mid = start + length.q / 2
        return Arc(_angle_from_linear(mid), length.q / 2)
    return ArcSpan(_angle_from_linear(start), _angle_from_linear(end))


def _intersect_arcs(space: CircleSpace, A, B) -> tuple[Optional[BasicOpen], int]:
    sa, la = _span_of(space, A)
    sb, lb = _span_of(space, B)
    # lift B's start relative to A's start into [0, 1)
    w = (sb - sa).wrap()
    components = []
    for shift in (w, w - 1):
        lo = shift if value_cmp(shift, 0) > 0 else AlphaLinear(Fraction(0), Fraction(0), space.alpha)
        hi = shift + lb if value_cmp(shift + lb, la) < 0 else la
        if value_cmp(lo, hi) < 0:
            components.append((sa + lo, sa + hi))
    if not components:
        return None, 0
    first = min(components, key=lambda c: c[0].enclosure()[0])
    return _make_arc(space, first[0], first[1]), len(components)


def intersect_basic_ex(space: SpaceDesc, A: BasicOpen, B: BasicOpen) -> tuple[Optional[BasicOpen], int]:
    """Intersection with component count (arcs may split into two pieces; the
    first component is returned)."""
    if isinstance(A, Cylinder) and isinstance(B, Cylinder):
        r = _intersect_cylinders(A, B)
        return r, (1 if r is not None else 0)
    if isinstance(A, FiniteSet) and isinstance(B, FiniteSet):
        common = A.ids & B.ids
        return (FiniteSet(common), 1) if common else (None, 0)
    if isinstance(A, (Arc, ArcSpan)) and isinstance(B, (Arc, ArcSpan)):
        if not isinstance(space, CircleSpace):
            raise SpaceMismatch("arc intersection needs a circle space")
        return _intersect_arcs(space, A, B)
    if isinstance(A, ProductOpen) and isinstance(B, ProductOpen):
        parts = []
        for s, a, b in zip(space.parts, A.parts, B.parts):
            r, _ = intersect_basic_ex(s, a, b)
            if r is None:
                return None, 0
            parts.append(r)
        return ProductOpen(tuple(parts)), 1
    raise SpaceMismatch(f"cannot intersect {type(A).__name__} with {type(B).__name__}")


def intersect_basic(space: SpaceDesc, A: BasicOpen, B: BasicOpen) -> Optional[BasicOpen]:
    return intersect_basic_ex(space, A, B)[0]


def intersects(space: SpaceDesc, A: BasicOpen, B: BasicOpen) -> bool:
    """Nonemptiness of A intersect B (cheaper than building the intersection)."""
    if isinstance(A, Cylinder) and isinstance(B, Cylinder):
        lo = max(A.start, B.start)
        hi = min(A.end, B.end)
        for i in range(lo, hi):
            sa, sb = A.at(i), B.at(i)
            if sa is not None and sb is not None and sa != sb:
                return False
        return True
    if isinstance(A, FiniteSet) and isinstance(B, FiniteSet):
        return bool(A.ids & B.ids)
    if isinstance(A, Arc) and isinstance(B, Arc) and isinstance(space, CircleSpace):
        sep = circle_separation(space, A.center, B.center)
        return value_cmp(sep, A.radius + B.radius) < 0
    if isinstance(A, ProductOpen) and isinstance(B, ProductOpen):
        return all(intersects(s, a, b) for s, a, b in zip(space.parts, A.parts, B.parts))
    return intersect_basic(space, A, B) is not None


# ---------------------------------------------------------------------------
# diameter and basis


TOTAL_WEIGHT = Fraction(3)  # sum over all integers i of 2^-|i|


def diameter(space: SpaceDesc, A: BasicOpen) -> RationalOrEnclosure:
    """Exact supremum of pairwise distances within A.

    On cylinders the supremum is attained (all unconstrained coordinates can
    disagree).  Arc diameters use the arc length 2*radius, which matches the
    metric supremum for radius <= 1/4; corpus arcs stay below that.
    """
    if isinstance(A, Cylinder):
        constrained = sum(Fraction(1, 1 << abs(i)) for i, _ in A.constrained())
        return TOTAL_WEIGHT - constrained
    if isinstance(A, FiniteSet):
        return Fraction(0) if len(A.ids) == 1 else Fraction(1)
    if isinstance(A, Arc):
        return 2 * A.radius
    if isinstance(A, ArcSpan):
        _, length = _span_of(space, A)
        return length.q if length.exact else length
    if isinstance(A, ProductOpen):
        parts = [diameter(s, a) for s, a in zip(space.parts, A.parts)]
        if all(isinstance(d, Fraction) for d in parts):
            return max(parts)
        best = parts[0]
        for d in parts[1:]:
            if value_cmp(d, best) > 0:
                best = d
        return best
    raise SpaceMismatch(f"unknown open set {A!r}")


def diameter_witness_pair(space: SpaceDesc, A: BasicOpen) -> tuple[Point, Point]:
    """A pair inside A attaining (shift/finite) or approaching (arc) the
    diameter; used as re-checkable separation evidence."""
    if isinstance(A, Cylinder):
        lo = min(A.start, 0) - 1
        hi = max(A.end, 0) + 1

        def build(fill):
            window = tuple(A.at(i) if A.at(i) is not None else fill for i in range(lo, hi))
            return BiWord(lo, window, (fill,), (fill,))

        return build(0), build(1)
    if isinstance(A, FiniteSet):
        ids = sorted(A.ids)
        return FiniteId(ids[0]), FiniteId(ids[-1])
    if isinstance(A, Arc):
        off = A.radius / 2
        return (
            AffineAngle(A.center.q - off, A.center.c),
            AffineAngle(A.center.q + off, A.center.c),
        )
    if isinstance(A, ProductOpen):
        pairs = [diameter_witness_pair(s, a) for s, a in zip(space.parts, A.parts)]
        return (
            ProductPoint(tuple(p[0] for p in pairs)),
            ProductPoint(tuple(p[1] for p in pairs)),
        )
    raise SpaceMismatch(f"no witness pair for {A!r}")


def enumerate_basis(space: SpaceDesc, resolution: int) -> list:
    """Finite topology basis at the given resolution, in deterministic order."""
    if resolution < 1:
        raise ValueError("resolution must be at least 1")
    if isinstance(space, ShiftSpace):
        width = 2 * resolution + 1
        out = []
        for code in range(space.alphabet_size**width):
            word = []
            v = code
            for _ in range(width):
                word.append(v % space.alphabet_size)
                v //= space.alphabet_size
            out.append(Cylinder(-resolution, tuple(reversed(word))))
        return out
    if isinstance(space, FiniteSpace):
        return [FiniteSet(frozenset({i})) for i in range(1, space.point_count + 1)]
    if isinstance(space, CircleSpace):
        r = Fraction(1, 2 * resolution)
        return [Arc(AffineAngle(Fraction(k, resolution)), r) for k in range(resolution)]
    if isinstance(space, ProductSpace):
        out = [ProductOpen(())]
        for part in space.parts:
            sub = enumerate_basis(part, resolution)
            out = [ProductOpen(p.parts + (b,)) for p in out for b in sub]
        return out
    raise SpaceMismatch(f"unknown space {space!r}")
