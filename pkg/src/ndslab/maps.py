"""Map sequences over one phase space: rule-based term dispatch, exact
prefix/window composition into closed normal forms, derived systems (tail,
iterate, product), and validated closed-form laws for cumulative shift
exponents / rotation coefficients (and their finite-space analogue).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Optional, Union

from .spaces import (
    AffineAngle,
    Arc,
    ArcSpan,
    BasicOpen,
    BiWord,
    CircleSpace,
    Cylinder,
    FiniteId,
    FiniteSet,
    FiniteSpace,
    Point,
    ProductOpen,
    ProductPoint,
    ProductSpace,
    ShiftSpace,
    SpaceDesc,
    SpaceMismatch,
)


class OverlappingRules(ValueError):
    """Two rule patterns matched the same index within the validation horizon."""


class LawValidationError(RuntimeError):
    """A derived closed-form law disagreed with stepwise composition."""


# ---------------------------------------------------------------------------
# index patterns


@dataclass(frozen=True)
class EqualsPattern:
    value: int

    def matches(self, n: int) -> bool:
        return n == self.value

    def ordinal(self, n: int) -> int:
        return 1

    def first_match(self) -> int:
        return self.value

    def is_finite(self) -> bool:
        return True


@dataclass(frozen=True)
class ArithProgPattern:
    first: int
    step: int

    def __post_init__(self):
        if self.first < 1 or self.step < 1:
            raise ValueError("arithmetic progressions need first >= 1 and step >= 1")

    def matches(self, n: int) -> bool:
        return n >= self.first and (n - self.first) % self.step == 0

    def ordinal(self, n: int) -> int:
        return (n - self.first) // self.step + 1

    def first_match(self) -> int:
        return self.first

    def is_finite(self) -> bool:
        return False


@dataclass(frozen=True)
class PowerPattern:
    """Matches n = base**k + offset for k = 1, 2, 3, ..."""

    base: int
    offset: int

    def __post_init__(self):
        if self.base < 2 or self.offset < 0:
            raise ValueError("power patterns need base >= 2 and offset >= 0")

    def matches(self, n: int) -> bool:
        v = n - self.offset
        if v < self.base:
            return False
        while v % self.base == 0:
            v //= self.base
        return v == 1

    def ordinal(self, n: int) -> int:
        v = n - self.offset
        k = 0
        while v > 1:
            v //= self.base
            k += 1
        return k

    def first_match(self) -> int:
        return self.base + self.offset

    def is_finite(self) -> bool:
        return False


@dataclass(frozen=True)
class ElsePattern:
    def matches(self, n: int) -> bool:
        return True

    def ordinal(self, n: int) -> int:
        return n

    def first_match(self) -> int:
        return 1

    def is_finite(self) -> bool:
        return False


IndexPattern = Union[EqualsPattern, ArithProgPattern, PowerPattern, ElsePattern]


# ---------------------------------------------------------------------------
# map terms


@dataclass(frozen=True)
class IdentityTerm:
    pass


@dataclass(frozen=True)
class ShiftPowTerm:
    exponent: int


@dataclass(frozen=True)
class RotPowTerm:
    coefficient: int


@dataclass(frozen=True)
class FiniteFnTerm:
    table: tuple  # table[i-1] is the image of id i

    def __post_init__(self):
        if not self.table or any(not (1 <= v <= len(self.table)) for v in self.table):
            raise ValueError("finite map table must be total on 1..n")
        object.__setattr__(self, "table", tuple(self.table))

    @property
    def surjective(self) -> bool:
        return len(set(self.table)) == len(self.table)


@dataclass(frozen=True)
class FamilyTerm:
    """sigma^(coeff*k + add) or rot^(coeff*k + add) at the k-th match of the
    owning rule's pattern."""

    kind: str  # "shift" | "rot"
    coeff: int
    add: int = 0

    def at_ordinal(self, k: int):
        e = self.coeff * k + self.add
        return ShiftPowTerm(e) if self.kind == "shift" else RotPowTerm(e)


MapTerm = Union[IdentityTerm, ShiftPowTerm, RotPowTerm, FiniteFnTerm]
RuleTerm = Union[MapTerm, FamilyTerm]

IDENTITY = IdentityTerm()


def term_exponent(term: MapTerm) -> int:
    """Net shift exponent / rotation coefficient of a concrete term."""
    if isinstance(term, IdentityTerm):
        return 0
    if isinstance(term, ShiftPowTerm):
        return term.exponent
    if isinstance(term, RotPowTerm):
        return term.coefficient
    raise SpaceMismatch("finite map terms have no exponent")


def term_is_surjective(term: MapTerm) -> bool:
    if isinstance(term, FiniteFnTerm):
        return term.surjective
    return True  # shift powers, rotations, identity are bijections


# ---------------------------------------------------------------------------
# system specifications


@dataclass(frozen=True)
class Rule:
    pattern: IndexPattern
    term: RuleTerm


def _patterns_overlap(p: IndexPattern, q: IndexPattern, horizon: int):
    """First index <= horizon matched by both patterns (exact and structural
    for most combinations), or None."""
    if isinstance(p, ElsePattern) or isinstance(q, ElsePattern):
        return 1
    if isinstance(p, EqualsPattern):
        return p.value if q.matches(p.value) else None
    if isinstance(q, EqualsPattern):
        return q.value if p.matches(q.value) else None
    if isinstance(p, ArithProgPattern) and isinstance(q, ArithProgPattern):
        g = _gcd(p.step, q.step)
        if (q.first - p.first) % g != 0:
            return None
        n = max(p.first, q.first)
        # scan one progression; the joint period is lcm of the steps
        lcm = p.step * q.step // g
        start = p.first + ((n - p.first + p.step - 1) // p.step) * p.step
        for i in range(lcm // p.step + 1):
            cand = start + i * p.step
            if q.matches(cand):
                return cand
        return None
    if isinstance(p, PowerPattern) and not isinstance(q, PowerPattern):
        p, q = q, p
    if isinstance(q, PowerPattern):
        n = q.base + q.offset
        while n <= horizon:
            if p.matches(n):
                return n
            n = (n - q.offset) * q.base + q.offset
        return None
    return None


@dataclass(frozen=True)
class NdsSpec:
    """A rule-based map sequence f_1, f_2, ... over one space.

    Every index matches at most one rule; pattern pairs are checked for
    disjointness structurally where possible and up to `validation_horizon`
    for power-pattern combinations.  Unmatched indices get `default`.
    """

    space: SpaceDesc
    rules: tuple = ()
    default: MapTerm = IDENTITY
    validation_horizon: int = 4096
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        for a in range(len(self.rules)):
            for b in range(a + 1, len(self.rules)):
                pa, pb = self.rules[a].pattern, self.rules[b].pattern
                n = _patterns_overlap(pa, pb, self.validation_horizon)
                if n is not None:
                    raise OverlappingRules(
                        f"index {n} matches both {pa} and {pb}"
                    )


@dataclass(frozen=True)
class TailSpec:
    """f_{k,infinity}: the sequence starting at index k of the base system."""

    base: "SystemSpec"
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("tail index must be >= 1")

    @property
    def space(self):
        return self.base.space


@dataclass(frozen=True)
class IterateSpec:
    """The k-th iterate system: step n is the window f over indices
    k(n-1)+1 .. kn of the base."""

    base: "SystemSpec"
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("iterate order must be >= 1")

    @property
    def space(self):
        return self.base.space


@dataclass(frozen=True)
class ProductSpec:
    parts: tuple

    def __post_init__(self):
        if len(self.parts) < 2:
            raise ValueError("a product system needs at least two components")

    @property
    def space(self):
        return ProductSpace(tuple(p.space for p in self.parts))


SystemSpec = Union[NdsSpec, TailSpec, IterateSpec, ProductSpec]


def base_of(spec: SystemSpec) -> SystemSpec:
    while isinstance(spec, (TailSpec, IterateSpec)):
        spec = spec.base
    return spec


# ---------------------------------------------------------------------------
# normal maps


@dataclass(frozen=True)
class ShiftPowMap:
    exponent: int


@dataclass(frozen=True)
class RotPowMap:
    coefficient: int


@dataclass(frozen=True)
class TableMap:
    table: tuple

    @property
    def surjective(self) -> bool:
        return len(set(self.table)) == len(self.table)


@dataclass(frozen=True)
class ProductMap:
    parts: tuple


NormalMap = Union[ShiftPowMap, RotPowMap, TableMap, ProductMap]


def identity_map(space: SpaceDesc) -> NormalMap:
    if isinstance(space, ShiftSpace):
        return ShiftPowMap(0)
    if isinstance(space, CircleSpace):
        return RotPowMap(0)
    if isinstance(space, FiniteSpace):
        return TableMap(tuple(range(1, space.point_count + 1)))
    return ProductMap(tuple(identity_map(p) for p in space.parts))


def term_to_normal(space: SpaceDesc, term: MapTerm) -> NormalMap:
    if isinstance(term, IdentityTerm):
        return identity_map(space)
    if isinstance(term, ShiftPowTerm):
        if not isinstance(space, ShiftSpace):
            raise SpaceMismatch("shift power on a non-shift space")
        return ShiftPowMap(term.exponent)
    if isinstance(term, RotPowTerm):
        if not isinstance(space, CircleSpace):
            raise SpaceMismatch("rotation power on a non-circle space")
        return RotPowMap(term.coefficient)
    if isinstance(term, FiniteFnTerm):
        if not isinstance(space, FiniteSpace) or len(term.table) != space.point_count:
            raise SpaceMismatch("finite map table does not fit the space")
        return TableMap(term.table)
    raise SpaceMismatch(f"unknown term {term!r}")


def compose(after: NormalMap, before: NormalMap) -> NormalMap:
    """after o before"""
    if isinstance(after, ShiftPowMap) and isinstance(before, ShiftPowMap):
        return ShiftPowMap(after.exponent + before.exponent)
    if isinstance(after, RotPowMap) and isinstance(before, RotPowMap):
        return RotPowMap(after.coefficient + before.coefficient)
    if isinstance(after, TableMap) and isinstance(before, TableMap):
        return TableMap(tuple(after.table[v - 1] for v in before.table))
    if isinstance(after, ProductMap) and isinstance(before, ProductMap):
        return ProductMap(tuple(compose(a, b) for a, b in zip(after.parts, before.parts)))
    raise SpaceMismatch(f"cannot compose {type(after).__name__} with {type(before).__name__}")


def apply(m: NormalMap, p: Point) -> Point:
    if isinstance(m, ShiftPowMap):
        if not isinstance(p, BiWord):
            raise SpaceMismatch("shift power applies to shift-space points")
        return p.shifted(m.exponent)
    if isinstance(m, RotPowMap):
        if not isinstance(p, AffineAngle):
            raise SpaceMismatch("rotation applies to circle points")
        return p.rotated(m.coefficient)
    if isinstance(m, TableMap):
        if not isinstance(p, FiniteId):
            raise SpaceMismatch("finite tables apply to finite-space points")
        return FiniteId(m.table[p.index - 1])
    if isinstance(m, ProductMap):
        if not isinstance(p, ProductPoint):
            raise SpaceMismatch("product maps apply to product points")
        return ProductPoint(tuple(apply(c, x) for c, x in zip(m.parts, p.parts)))
    raise SpaceMismatch(f"unknown normal map {m!r}")


def image(m: NormalMap, A: BasicOpen) -> Optional[BasicOpen]:
    """Forward image; nonempty input gives nonempty output."""
    if isinstance(m, ShiftPowMap):
        if not isinstance(A, Cylinder):
            raise SpaceMismatch("shift power images apply to cylinders")
        return Cylinder(A.start - m.exponent, A.word)
    if isinstance(m, RotPowMap):
        if isinstance(A, Arc):
            return Arc(A.center.rotated(m.coefficient), A.radius)
        if isinstance(A, ArcSpan):
            return ArcSpan(A.start.rotated(m.coefficient), A.end.rotated(m.coefficient))
        raise SpaceMismatch("rotation images apply to arcs")
    if isinstance(m, TableMap):
        if not isinstance(A, FiniteSet):
            raise SpaceMismatch("finite table images apply to id sets")
        return FiniteSet(frozenset(m.table[i - 1] for i in A.ids))
    if isinstance(m, ProductMap):
        if not isinstance(A, ProductOpen):
            raise SpaceMismatch("product map images apply to rectangles")
        parts = tuple(image(c, a) for c, a in zip(m.parts, A.parts))
        return ProductOpen(parts)
    raise SpaceMismatch(f"unknown normal map {m!r}")


def preimage(m: NormalMap, A: BasicOpen) -> Optional[BasicOpen]:
    """Full inverse image; None when empty (possible for finite tables)."""
    if isinstance(m, ShiftPowMap):
        return Cylinder(A.start + m.exponent, A.word)
    if isinstance(m, RotPowMap):
        if isinstance(A, Arc):
            return Arc(A.center.rotated(-m.coefficient), A.radius)
        return ArcSpan(A.start.rotated(-m.coefficient), A.end.rotated(-m.coefficient))
    if isinstance(m, TableMap):
        ids = frozenset(i for i in range(1, len(m.table) + 1) if m.table[i - 1] in A.ids)
        return FiniteSet(ids) if ids else None
    if isinstance(m, ProductMap):
        parts = []
        for c, a in zip(m.parts, A.parts):
            r = preimage(c, a)
            if r is None:
                return None
            parts.append(r)
        return ProductOpen(tuple(parts))
    raise SpaceMismatch(f"unknown normal map {m!r}")


# ---------------------------------------------------------------------------
# term dispatch and composition


def eval_term(spec: SystemSpec, i: int) -> MapTerm:
    """The i-th map of the sequence as a concrete term (indexed families get
    their match ordinal substituted)."""
    if i < 1:
        raise ValueError("sequence indices are 1-based")
    if isinstance(spec, TailSpec):
        return eval_term(spec.base, spec.k + i - 1)
    if isinstance(spec, (IterateSpec, ProductSpec)):
        raise SpaceMismatch("derived iterate/product steps are normal maps; use step_normal")
    for rule in spec.rules:
        if rule.pattern.matches(i):
            if isinstance(rule.term, FamilyTerm):
                return rule.term.at_ordinal(rule.pattern.ordinal(i))
            return rule.term
    return spec.default


def step_normal(spec: SystemSpec, i: int) -> NormalMap:
    """The i-th step map as a normal map; total on every system kind."""
    if isinstance(spec, NdsSpec):
        return term_to_normal(spec.space, eval_term(spec, i))
    if isinstance(spec, TailSpec):
        return step_normal(spec.base, spec.k + i - 1)
    if isinstance(spec, IterateSpec):
        return window_compose(spec.base, spec.k * (i - 1) + 1, spec.k)
    if isinstance(spec, ProductSpec):
        return ProductMap(tuple(step_normal(p, i) for p in spec.parts))
    raise SpaceMismatch(f"unknown system {spec!r}")


class _Cumulative:
    """Per-system cache of cumulative exponents / prefix tables; cached and
    uncached composition results are identical by construction."""

    def __init__(self):
        self._lock = threading.Lock()
        self._exponents: dict = {}
        self._tables: dict = {}

    def exponents(self, spec: NdsSpec, upto: int) -> list:
        with self._lock:
            cum = self._exponents.setdefault(spec, [0])
            while len(cum) <= upto:
                i = len(cum)
                cum.append(cum[-1] + term_exponent(eval_term(spec, i)))
            return cum

    def tables(self, spec: NdsSpec, upto: int) -> list:
        with self._lock:
            tabs = self._tables.setdefault(spec, [identity_map(spec.space)])
            while len(tabs) <= upto:
                i = len(tabs)
                tabs.append(compose(term_to_normal(spec.space, eval_term(spec, i)), tabs[-1]))
            return tabs


_CUM = _Cumulative()


def window_compose(spec: SystemSpec, i: int, k: int) -> NormalMap:
    """Exact closed form of the window composition f_{i+k-1} o ... o f_i
    (identity for k = 0)."""
    if i < 1 or k < 0:
        raise ValueError("need i >= 1 and k >= 0")
    if isinstance(spec, TailSpec):
        return window_compose(spec.base, spec.k + i - 1, k)
    if isinstance(spec, IterateSpec):
        return window_compose(spec.base, spec.k * (i - 1) + 1, spec.k * k)
    if isinstance(spec, ProductSpec):
        return ProductMap(tuple(window_compose(p, i, k) for p in spec.parts))
    space = spec.space
    if k == 0:
        return identity_map(space)
    if isinstance(space, (ShiftSpace, CircleSpace)):
        cum = _CUM.exponents(spec, i + k - 1)
        e = cum[i + k - 1] - cum[i - 1]
        return ShiftPowMap(e) if isinstance(space, ShiftSpace) else RotPowMap(e)
    if i == 1:
        return _CUM.tables(spec, k)[k]
    m = identity_map(space)
    for j in range(i, i + k):
        m = compose(term_to_normal(space, eval_term(spec, j)), m)
    return m


def prefix_compose(spec: SystemSpec, n: int) -> NormalMap:
    """f_1^n, the time-n prefix map."""
    return window_compose(spec, 1, n)


# ---------------------------------------------------------------------------
# exponent laws


@dataclass(frozen=True)
class LawPiece:
    """On indices matching `pattern` (with match ordinal k) the cumulative
    exponent equals per_ordinal*k + constant."""

    pattern: IndexPattern
    per_ordinal: int
    constant: int

    def value_at(self, n: int) -> int:
        return self.per_ordinal * self.pattern.ordinal(n) + self.constant

    def is_zero(self) -> bool:
        return self.per_ordinal == 0 and self.constant == 0


@dataclass(frozen=True)
class ExponentLaw:
    """Piecewise closed form for the prefix exponent E(n) (shift) or rotation
    coefficient C(n) (circle); first matching piece wins, the final piece is
    a catch-all."""

    kind: str  # "shift" | "rotation"
    pieces: tuple
    validated_up_to: int

    def value(self, n: int) -> int:
        for piece in self.pieces:
            if piece.pattern.matches(n):
                return piece.value_at(n)
        raise LawValidationError(f"law has no piece covering index {n}")

    def nonzero_pieces(self) -> tuple:
        return tuple(p for p in self.pieces if not p.is_zero())

    def zero_on_residue(self, mod: int, residue: int) -> bool:
        """True when the law forces E(n) = 0 on every n ≡ residue (mod mod)."""
        return all(
            _piece_zero_on_class(piece, mod, residue) for piece in self.pieces
        )

    def zero_on_multiples(self, j: int) -> bool:
        return self.zero_on_residue(j, 0)

    def sparse_support(self) -> bool:
        """True when every index with nonzero exponent lies in a power
        pattern or a finite list, which forces unbounded gaps."""
        return all(
            isinstance(p.pattern, (PowerPattern, EqualsPattern)) for p in self.nonzero_pieces()
        )

    def describe(self) -> str:
        bits = []
        for p in self.pieces:
            pat = p.pattern
            if isinstance(pat, EqualsPattern):
                where = f"n={pat.value}"
            elif isinstance(pat, ArithProgPattern):
                where = f"n={pat.first}+{pat.step}(k-1)"
            elif isinstance(pat, PowerPattern):
                where = f"n={pat.base}^k+{pat.offset}"
            else:
                where = "otherwise"
            form = f"{p.per_ordinal}*k+{p.constant}" if p.per_ordinal else str(p.constant)
            bits.append(f"E({where})={form}")
        return "; ".join(bits) + f" [validated to {self.validated_up_to}]"


def _piece_zero_on_class(piece: LawPiece, mod: int, residue: int) -> bool:
    """Conservatively: does this piece provably never place a nonzero value
    on the class n ≡ residue (mod mod)?"""
    if piece.is_zero():
        return True
    pat = piece.pattern
    if isinstance(pat, EqualsPattern):
        return not (pat.value % mod == residue % mod and piece.value_at(pat.value) != 0)
    if isinstance(pat, ArithProgPattern):
        # the progression meets the class iff the congruences are compatible
        g = _gcd(pat.step, mod)
        return (residue - pat.first) % g != 0
    if isinstance(pat, PowerPattern):
        # base^k mod `mod` is eventually periodic with transient + cycle well
        # under 2*mod, so scanning k up to 4*mod + 8 sees every reachable
        # residue of base^k + offset
        for k in range(1, 4 * mod + 9):
            if (pat.base**k + pat.offset) % mod == residue % mod:
                return False
        return True
    # catch-all piece with a nonzero form touches every class
    return False


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _family_rules(spec: NdsSpec):
    return [r for r in spec.rules if isinstance(r.term, FamilyTerm)]


def _constant_rules(spec: NdsSpec):
    return [r for r in spec.rules if not isinstance(r.term, FamilyTerm)]


def _all_zero_terms(rules, default) -> bool:
    for r in rules:
        if isinstance(r.term, FamilyTerm):
            return False
        if term_exponent(r.term) != 0:
            return False
    return term_exponent(default) == 0


def derive_exponent_law(spec: SystemSpec, horizon: int) -> Optional[ExponentLaw]:
    """Telescoping detection for the cumulative exponent of shift / circle
    systems.  Every emitted piece is validated stepwise up to `horizon`;
    a validation failure is a hard error.  Returns None when no supported
    structure is present (callers fall back to enumeration-only checks)."""
    if isinstance(spec, (IterateSpec, ProductSpec)):
        return None
    if not isinstance(spec.space, (ShiftSpace, CircleSpace)):
        return None
    if isinstance(spec, TailSpec):
        inner, off = spec.base, spec.k - 1
        while isinstance(inner, TailSpec):
            off += inner.k - 1
            inner = inner.base
        if not isinstance(inner, NdsSpec):
            return None
        source = _shift_rules(inner, off)
        if source is None:
            return None
    else:
        source = spec
    kind = "shift" if isinstance(spec.space, ShiftSpace) else "rotation"
    candidate = _law_candidate(source)
    if candidate is None:
        return None
    law = ExponentLaw(kind, tuple(candidate), horizon)
    # validate against the composition path the engine actually uses
    for n in range(1, horizon + 1):
        m = prefix_compose(spec, n)
        actual = m.exponent if isinstance(m, ShiftPowMap) else m.coefficient
        if law.value(n) != actual:
            raise LawValidationError(
                f"derived law disagrees with composition at n={n}: "
                f"{law.value(n)} vs {actual}"
            )
    return law


def _shift_rules(spec: SystemSpec, offset: int) -> Optional[NdsSpec]:
    """Rewrite a base spec's rules for the tail starting `offset` indices in;
    None when a pattern does not survive the reindexing."""
    if not isinstance(spec, NdsSpec) or offset == 0:
        return spec if isinstance(spec, NdsSpec) else None
    rules = []
    for r in spec.rules:
        pat, term = r.pattern, r.term
        if isinstance(pat, EqualsPattern):
            v = pat.value - offset
            if v >= 1:
                rules.append(Rule(EqualsPattern(v), term))
            continue  # dropped rules only shorten the preamble
        if isinstance(pat, ArithProgPattern):
            first = pat.first - offset
            bumps = 0
            while first < 1:
                first += pat.step
                bumps += 1
            if isinstance(term, FamilyTerm) and bumps:
                term = FamilyTerm(term.kind, term.coeff, term.add + term.coeff * bumps)
            rules.append(Rule(ArithProgPattern(first, pat.step), term))
            continue
        return None  # power patterns do not reindex into a supported form
    return NdsSpec(spec.space, tuple(rules), spec.default, spec.validation_horizon)


def _law_candidate(spec: NdsSpec) -> Optional[list]:
    zero_piece = LawPiece(ElsePattern(), 0, 0)
    if _all_zero_terms(spec.rules, spec.default):
        return [zero_piece]
    fams = _family_rules(spec)
    consts = _constant_rules(spec)
    # constant sequence: a single always-on exponent e gives E(n) = e*n
    if not fams and not consts and term_exponent(spec.default) != 0:
        return [LawPiece(ElsePattern(), term_exponent(spec.default), 0)]
    if len(consts) == 1 and not fams and isinstance(consts[0].pattern, ElsePattern):
        return [LawPiece(ElsePattern(), term_exponent(consts[0].term), 0)]
    if not _all_zero_terms(consts, spec.default):
        return _equals_pair_candidate(spec)
    if len(fams) != 2:
        return None
    a, b = fams
    fa, fb = a.term, b.term
    if fa.coeff != -fb.coeff or fa.add != -fb.add:
        return None
    pa, pb = a.pattern, b.pattern
    if isinstance(pa, ArithProgPattern) and isinstance(pb, ArithProgPattern):
        if pa.step != pb.step:
            return None
        if pb.first < pa.first:
            pa, pb, fa, fb = pb, pa, fb, fa
        delta = pb.first - pa.first
        if not (0 < delta < pa.step):
            return None
        # the k-th positive block is in flight on [pa.first+(k-1)step, +delta)
        pieces = [
            LawPiece(ArithProgPattern(pa.first + j, pa.step), fa.coeff, fa.add)
            for j in range(delta)
        ]
        pieces.append(zero_piece)
        return pieces
    if isinstance(pa, PowerPattern) and isinstance(pb, PowerPattern):
        if pa.base != pb.base:
            return None
        if pb.offset < pa.offset:
            pa, pb, fa, fb = pb, pa, fb, fa
        if pb.offset - pa.offset != 1:
            return None
        return [LawPiece(pa, fa.coeff, fa.add), zero_piece]
    return None


def _equals_pair_candidate(spec: NdsSpec) -> Optional[list]:
    """Paired one-shot rules sigma^e at v, sigma^-e at v+1, identity
    elsewhere (the gap-adversary shape)."""
    if _family_rules(spec) or term_exponent(spec.default) != 0:
        return None
    by_value = {}
    for r in spec.rules:
        if not isinstance(r.pattern, EqualsPattern):
            return None
        by_value[r.pattern.value] = term_exponent(r.term)
    pieces = []
    seen = set()
    for v in sorted(by_value):
        if v in seen:
            continue
        e = by_value[v]
        if e == 0:
            seen.add(v)
            continue
        if by_value.get(v + 1) != -e:
            return None
        seen.update({v, v + 1})
        pieces.append(LawPiece(EqualsPattern(v), 0, e))
    pieces.append(LawPiece(ElsePattern(), 0, 0))
    return pieces


# ---------------------------------------------------------------------------
# finite-space analogue: eventually periodic prefix tables


@dataclass(frozen=True)
class TableLaw:
    """Exact description of every prefix table of a finite-space system whose
    rules emit one fixed term from `stabilized_from` on: the prefix tables
    T(1), T(2), ... consist of `preperiod` followed by `cycle` repeating."""

    stabilized_from: int
    preperiod: tuple  # T(1) .. T(len(preperiod))
    cycle: tuple

    def table_at(self, n: int) -> TableMap:
        if n < 1:
            raise ValueError("prefix index must be >= 1")
        if n <= len(self.preperiod):
            return self.preperiod[n - 1]
        return self.cycle[(n - len(self.preperiod) - 1) % len(self.cycle)]

    def all_tables(self) -> tuple:
        return tuple(self.preperiod) + tuple(self.cycle)

    def indices_of(self, predicate) -> tuple:
        """(sorted finite prefix indices, sorted cycle residues) whose tables
        satisfy the predicate; residues are offsets into the repeating cycle."""
        pre = tuple(n for n in range(1, len(self.preperiod) + 1) if predicate(self.preperiod[n - 1]))
        cyc = tuple(j for j in range(len(self.cycle)) if predicate(self.cycle[j]))
        return pre, cyc

    def describe(self) -> str:
        return (
            f"prefix tables stabilize at index {self.stabilized_from}; "
            f"{len(self.preperiod)} leading tables then a cycle of {len(self.cycle)}"
        )


def derive_table_law(spec: SystemSpec) -> Optional[TableLaw]:
    if isinstance(spec, TailSpec):
        inner = derive_table_law(spec.base)
        if inner is None:
            return None
        # recompute directly on the tail; stabilization carries over
        return _table_law_from(spec, max(1, inner.stabilized_from - (spec.k - 1)))
    if not isinstance(spec, NdsSpec) or not isinstance(spec.space, FiniteSpace):
        return None
    stable = _stabilization_index(spec)
    if stable is None:
        return None
    return _table_law_from(spec, stable)


def _stabilization_index(spec: NdsSpec) -> Optional[int]:
    """Smallest r0 such that the rule set structurally guarantees one fixed
    constant term at every index >= r0; None when the tail is not constant."""
    bound = 1
    swallows_tail = []  # rules covering everything from some index on
    partial = []  # infinite rules with gaps (other indices fall to default)
    for r in spec.rules:
        if isinstance(r.term, FamilyTerm):
            return None
        if isinstance(r.pattern, EqualsPattern):
            bound = max(bound, r.pattern.value + 1)
        elif isinstance(r.pattern, ElsePattern):
            swallows_tail.append((1, r.term))
        elif isinstance(r.pattern, ArithProgPattern) and r.pattern.step == 1:
            swallows_tail.append((r.pattern.first, r.term))
        else:
            partial.append((r.pattern.first_match(), r.term))
    if swallows_tail:
        # disjointness validation leaves at most one full-coverage rule and no
        # partial rules beyond its start
        first, _ = swallows_tail[0]
        return max(bound, first)
    terms_beyond = {t for _, t in partial} | {spec.default}
    if len(terms_beyond) == 1:
        return max([bound] + [f for f, _ in partial])
    return None


def _table_law_from(spec: SystemSpec, stable: int) -> TableLaw:
    """Walk prefix tables until the first repeat at or past the stabilization
    point; from there T(n+1) = g o T(n) with a fixed g, so the repeat closes
    a cycle valid for every n."""
    tables = []
    prefix = identity_map(spec.space)
    seen = {}
    n = 0
    while True:
        n += 1
        prefix = compose(step_normal(spec, n), prefix)
        if n >= stable:
            if prefix in seen:
                start = seen[prefix]
                return TableLaw(stable, tuple(tables[: start - 1]), tuple(tables[start - 1 :]))
            seen[prefix] = n
        tables.append(prefix)
        if n > 10_000:
            raise LawValidationError("finite prefix tables failed to cycle")


# ---------------------------------------------------------------------------
# law container used by the checkers


@dataclass(frozen=True)
class SystemLaws:
    exponent: Optional[ExponentLaw] = None
    table: Optional[TableLaw] = None
    components: tuple = ()  # per-part laws for product systems

    @property
    def any(self) -> bool:
        return self.exponent is not None or self.table is not None or bool(self.components)


def derive_laws(spec: SystemSpec, horizon: int) -> SystemLaws:
    if isinstance(spec, ProductSpec):
        return SystemLaws(components=tuple(derive_laws(p, horizon) for p in spec.parts))
    space = spec.space
    if isinstance(space, (ShiftSpace, CircleSpace)):
        return SystemLaws(exponent=derive_exponent_law(spec, horizon))
    if isinstance(space, FiniteSpace):
        return SystemLaws(table=derive_table_law(spec))
    return SystemLaws()


def spec_is_surjective_structurally(spec: SystemSpec) -> Optional[bool]:
    """True/False when decidable from the rule set; None otherwise."""
    if isinstance(spec, TailSpec):
        return spec_is_surjective_structurally(spec.base)
    if isinstance(spec, IterateSpec):
        return spec_is_surjective_structurally(spec.base)
    if isinstance(spec, ProductSpec):
        parts = [spec_is_surjective_structurally(p) for p in spec.parts]
        if all(p is True for p in parts):
            return True
        if any(p is False for p in parts):
            return False
        return None
    for r in spec.rules:
        if not isinstance(r.term, FamilyTerm) and not term_is_surjective(r.term):
            return False  # every pattern fires at least once
    covered = any(
        isinstance(r.pattern, ElsePattern)
        or (isinstance(r.pattern, ArithProgPattern) and r.pattern.step == 1 and r.pattern.first == 1)
        for r in spec.rules
    )
    if covered:
        return True
    return term_is_surjective(spec.default)
