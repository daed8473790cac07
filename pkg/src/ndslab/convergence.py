"""Supremum-metric distances between normal maps, uniform and collective
convergence verdicts, and the equicontinuity modulus used by sensitivity
gap-bound arguments.

On the shift and on finite spaces the sup metric between distinct normal
maps is bounded below by a fixed constant (3 between distinct shift powers,
1 between distinct tables), so convergence verdicts reduce to eventual
equality of terms plus a structural argument that every rule firing beyond
the stabilization index emits the limit term.  No silent extrapolation:
without that structural argument a verdict stays inconclusive.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import maps as mp
from . import spaces as sp


SHIFT_SUP_GAP = Fraction(3)  # sup over x of d(x, sigma^m x) for any m != 0


@dataclass(frozen=True)
class ConvergenceVerdict:
    status: str  # "witnessed" | "refuted" | "inconclusive"
    mode: str  # "uniform" | "collective"
    stabilization_index: Optional[int] = None
    refuting_pair: Optional[tuple] = None  # (r, k, distance lower bound)
    detail: str = ""

    @property
    def witnessed(self) -> bool:
        return self.status == "witnessed"


def sup_distance(space: sp.SpaceDesc, a: mp.NormalMap, b: mp.NormalMap):
    """D(f, g) = sup over x of d(f(x), g(x)); exact rational on shift and
    finite spaces, exact-or-enclosure on the circle."""
    if isinstance(space, sp.ShiftSpace):
        if not isinstance(a, mp.ShiftPowMap) or not isinstance(b, mp.ShiftPowMap):
            raise sp.SpaceMismatch("shift sup distance needs shift powers")
        # for m != 0 a word alternating on blocks of |m| disagrees with its
        # own m-shift at every coordinate, attaining the full weight 3
        return Fraction(0) if a.exponent == b.exponent else SHIFT_SUP_GAP
    if isinstance(space, sp.FiniteSpace):
        if not isinstance(a, mp.TableMap) or not isinstance(b, mp.TableMap):
            raise sp.SpaceMismatch("finite sup distance needs tables")
        return Fraction(0) if a.table == b.table else Fraction(1)
    if isinstance(space, sp.CircleSpace):
        if not isinstance(a, mp.RotPowMap) or not isinstance(b, mp.RotPowMap):
            raise sp.SpaceMismatch("circle sup distance needs rotations")
        if a.coefficient == b.coefficient:
            return Fraction(0)
        # rotations differ by a rigid rotation, so the pointwise distance is
        # constant and equals the circle distance of the offset
        off = sp.AffineAngle(Fraction(0), a.coefficient - b.coefficient)
        zero = sp.AffineAngle(Fraction(0), 0)
        val = sp.circle_separation(space, off, zero)
        return val.q if val.exact else val
    if isinstance(space, sp.ProductSpace):
        parts = [sup_distance(s, x, y) for s, x, y in zip(space.parts, a.parts, b.parts)]
        if all(isinstance(d, Fraction) for d in parts):
            return max(parts)
        best = parts[0]
        for d in parts[1:]:
            if sp.value_cmp(d, best) > 0:
                best = d
        return best
    raise sp.SpaceMismatch(f"unknown space {space!r}")


def _term_equals(space, term: mp.RuleTerm, limit_map: mp.NormalMap) -> bool:
    """Semantic comparison of a rule term against the limit's normal form
    (so an identity term matches an identity table)."""
    if isinstance(term, mp.FamilyTerm):
        if term.coeff != 0:
            return False
        term = term.at_ordinal(1)
    return mp.term_to_normal(space, term) == limit_map


def _limit_stabilization(spec: mp.SystemSpec, limit_map: mp.NormalMap) -> Optional[int]:
    """Smallest r0 such that the rules guarantee term == limit for every
    index >= r0; None when no such structural argument exists."""
    if isinstance(spec, mp.TailSpec):
        inner = _limit_stabilization(spec.base, limit_map)
        return None if inner is None else max(1, inner - (spec.k - 1))
    if not isinstance(spec, mp.NdsSpec):
        return None
    space = spec.space
    bound = 1
    covered_from = None  # index from which the rules swallow every n
    for r in spec.rules:
        pat, term = r.pattern, r.term
        if isinstance(pat, mp.EqualsPattern):
            if not _term_equals(space, term, limit_map):
                bound = max(bound, pat.value + 1)
            continue
        # infinite pattern: every firing index must emit the limit
        if not _term_equals(space, term, limit_map):
            return None
        if isinstance(pat, mp.ElsePattern):
            covered_from = 1
        elif isinstance(pat, mp.ArithProgPattern) and pat.step == 1:
            covered_from = pat.first if covered_from is None else min(covered_from, pat.first)
    if covered_from is not None:
        return max(bound, covered_from)
    if not _term_equals(space, spec.default, limit_map):
        return None
    return bound


def _infinite_non_limit_rule(spec: mp.SystemSpec, limit_map: mp.NormalMap) -> Optional[str]:
    """A structural reason why infinitely many step terms differ from the
    limit (family exponents grow without bound, or a constant non-limit term
    fires on an infinite pattern)."""
    if isinstance(spec, mp.TailSpec):
        return _infinite_non_limit_rule(spec.base, limit_map)
    if not isinstance(spec, mp.NdsSpec):
        return None
    space = spec.space
    for r in spec.rules:
        if isinstance(r.pattern, mp.EqualsPattern):
            continue
        if isinstance(r.term, mp.FamilyTerm) and r.term.coeff != 0:
            return f"rule {r.pattern} emits unboundedly growing powers"
        if not _term_equals(space, r.term, limit_map):
            return f"rule {r.pattern} emits {r.term} infinitely often"
    if not _term_equals(space, spec.default, limit_map) and _default_fires_infinitely(spec):
        return f"the default emits {spec.default} infinitely often"
    return None


def _default_fires_infinitely(spec: mp.NdsSpec) -> bool:
    """Structural: do the rules leave infinitely many indices to the default?
    Only else-rules and arithmetic progressions can cover cofinitely; power
    patterns are too sparse to close residue gaps."""
    if any(isinstance(r.pattern, mp.ElsePattern) for r in spec.rules):
        return False
    progs = [r.pattern for r in spec.rules if isinstance(r.pattern, mp.ArithProgPattern)]
    if not progs:
        return True
    period = 1
    for p in progs:
        period = period * p.step // _gcd(period, p.step)
    start = max(
        [p.first for p in progs]
        + [r.pattern.value + 1 for r in spec.rules if isinstance(r.pattern, mp.EqualsPattern)]
        + [1]
    )
    return any(not any(p.matches(n) for p in progs) for n in range(start, start + period))


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _first_divergent_index(spec, limit_map, space, horizon: int):
    for n in range(1, horizon + 1):
        d = sup_distance(space, mp.step_normal(spec, n), limit_map)
        if sp.value_cmp(d, 0) > 0:
            return n, d
    return None


def check_uniform_convergence(spec: mp.SystemSpec, limit: mp.MapTerm, horizon: int) -> ConvergenceVerdict:
    """Does D(f_n, f) -> 0?  On these discrete-valued sup metrics uniform
    convergence is eventual equality of terms."""
    space = spec.space
    limit_map = mp.term_to_normal(space, limit)
    r0 = _limit_stabilization(spec, limit_map)
    if r0 is not None:
        for n in range(1, min(horizon, r0 + 8) + 1):
            d = sup_distance(space, mp.step_normal(spec, n), limit_map)
            if n >= r0 and sp.value_cmp(d, 0) != 0:
                raise mp.LawValidationError("stabilization argument disagrees with terms")
        return ConvergenceVerdict(
            "witnessed", "uniform", stabilization_index=r0,
            detail=f"every rule firing at n >= {r0} emits the limit term",
        )
    reason = _infinite_non_limit_rule(spec, limit_map)
    if reason is not None:
        probe = _first_divergent_index(spec, limit_map, space, horizon)
        if probe is not None:
            n, d = probe
            return ConvergenceVerdict(
                "refuted", "uniform", refuting_pair=(n, 1, d),
                detail=f"{reason}; D(f_{n}, f) = {d}",
            )
    return ConvergenceVerdict("inconclusive", "uniform", detail="no structural argument either way")


def check_collective_convergence(
    spec: mp.SystemSpec, limit: mp.MapTerm, horizon: int, max_window: int
) -> ConvergenceVerdict:
    """Does D(f_r^k, f^k) -> 0 uniformly in k?  Witnessed needs stabilized
    rules (windows beyond r0 are then limit iterates for every k); refuted
    exhibits a concrete (r, k) separation recurring structurally."""
    space = spec.space
    limit_map = mp.term_to_normal(space, limit)
    r0 = _limit_stabilization(spec, limit_map)
    if r0 is not None:
        limit_pow = mp.identity_map(space)
        for k in range(1, max_window + 1):
            limit_pow = mp.compose(limit_map, limit_pow)
            for r in range(r0, min(horizon, r0 + 8) + 1):
                d = sup_distance(space, mp.window_compose(spec, r, k), limit_pow)
                if sp.value_cmp(d, 0) != 0:
                    raise mp.LawValidationError("stabilization argument disagrees with windows")
        return ConvergenceVerdict(
            "witnessed", "collective", stabilization_index=r0,
            detail=f"windows starting at r >= {r0} equal limit iterates for all k <= {max_window}, "
            "and rules beyond emit only the limit term",
        )
    reason = _infinite_non_limit_rule(spec, limit_map)
    if reason is not None:
        limit_pow = mp.identity_map(space)
        for k in range(1, max_window + 1):
            limit_pow = mp.compose(limit_map, limit_pow)
            for r in range(1, horizon + 1):
                d = sup_distance(space, mp.window_compose(spec, r, k), limit_pow)
                if sp.value_cmp(d, 0) > 0:
                    return ConvergenceVerdict(
                        "refuted", "collective", refuting_pair=(r, k, d),
                        detail=f"{reason}; D(f_{r}^{k}, f^{k}) = {d}",
                    )
    return ConvergenceVerdict("inconclusive", "collective", detail="no structural argument either way")


def equicontinuity_modulus(
    spec: mp.SystemSpec, epsilon: Fraction, k: int, horizon: int
) -> tuple[Optional[Fraction], str]:
    """A xi > 0 with d(x, y) < xi forcing d(f_n^j x, f_n^j y) < epsilon/2 for
    every n <= horizon and j <= k.

    Shift powers are Lipschitz with constant 2^|exponent|, rotations and
    finite tables are nonexpanding.  Returns (None, flag) when the window
    exponents keep growing with n, since no single modulus can work."""
    epsilon = Fraction(epsilon)
    if epsilon <= 0 or k < 1:
        raise ValueError("need epsilon > 0 and k >= 1")
    space = spec.space
    if isinstance(space, (sp.FiniteSpace, sp.CircleSpace)):
        return epsilon / 2, "nonexpanding maps; xi = epsilon/2"
    if not isinstance(space, sp.ShiftSpace):
        return None, "unsupported space"
    worst = 0
    worst_first_half = 0
    for n in range(1, horizon + 1):
        cum = 0
        for j in range(k):
            m = mp.step_normal(spec, n + j)
            cum += m.exponent
            worst = max(worst, abs(cum))
            if n <= horizon // 2:
                worst_first_half = max(worst_first_half, abs(cum))
    if worst > worst_first_half:
        return None, f"window exponents still growing at the horizon (max |E| = {worst})"
    xi = epsilon / (2 ** (worst + 1))
    return xi, f"Lipschitz constant 2^{worst} over all windows, safety factor 2"
