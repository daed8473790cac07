"""Hitting-time sets N(U, V), separation sets N(U, delta), and their
classification as syndetic / thick / cofinite.

Membership is exact on shift and finite spaces.  On the circle an index whose
comparison stays undecided after bounded enclosure refinement is reported
separately and excluded from both members and gap statistics.

The separation test follows the sensitivity reading of the definition:
n is a member when two points of U can be driven more than delta apart by
the time-n prefix map, decided through the attained image diameter.  Gap
statistics use the boundary convention {0, H+1}: the member list is extended
by a virtual 0 on the left and H+1 on the right, and any gap touching the
horizon edge is reported as censored (a lower bound, never an exact gap).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import maps as mp
from . import spaces as sp


@dataclass(frozen=True)
class HittingSet:
    """Times n <= horizon at which the test held, plus per-member evidence
    that can be re-checked independently."""

    kind: str  # "hitting" | "separation"
    spec: mp.SystemSpec
    horizon: int
    members: tuple
    inconclusive: tuple = ()
    u: Optional[sp.BasicOpen] = None
    v: Optional[sp.BasicOpen] = None
    delta: Optional[Fraction] = None
    evidence: tuple = ()  # (n, short description) pairs

    def member_mask(self) -> int:
        mask = 0
        for n in self.members:
            mask |= 1 << n
        return mask


@dataclass(frozen=True)
class FrequencyEvidence:
    """Gap/run statistics of a hitting set over [1, H], with an optional
    structural upgrade backed by a validated law.

    max_gap follows the {0, H+1} boundary convention; eventual_max_gap is the
    largest gap between consecutive members opening in the second half of the
    horizon (the stabilized regime, clear of sporadic early witnesses)."""

    max_gap: int
    eventual_max_gap: int
    longest_run: int
    tail_start: Optional[int]
    first_member: Optional[int]
    censored_final_gap: bool
    structural: Optional[str] = None  # machine-readable reason tag
    structural_detail: str = ""

    @property
    def tag(self) -> str:
        return "structural" if self.structural else "enumerative"


def _hit_once(space, m: mp.NormalMap, U, V) -> tuple[Optional[bool], str]:
    """Does f(U) meet V?  None when the enclosure cannot decide."""
    try:
        img = mp.image(m, U)
        if sp.intersects(space, img, V):
            return True, _describe_open(img)
        return False, ""
    except sp.EnclosureUndecided:
        return None, ""


def _describe_open(A) -> str:
    if isinstance(A, sp.Cylinder):
        word = "".join("." if s is None else str(s) for s in A.word)
        return f"cyl@{A.start}:{word}"
    if isinstance(A, sp.FiniteSet):
        return "{" + ",".join(str(i) for i in sorted(A.ids)) + "}"
    if isinstance(A, sp.Arc):
        return f"arc({A.center.q}+{A.center.c}a,r={A.radius})"
    if isinstance(A, sp.ArcSpan):
        return f"span({A.start.q}+{A.start.c}a..{A.end.q}+{A.end.c}a)"
    if isinstance(A, sp.ProductOpen):
        return "x".join(_describe_open(p) for p in A.parts)
    return repr(A)


def hitting_set(spec: mp.SystemSpec, U, V, horizon: int) -> HittingSet:
    """N(U, V) restricted to [1, horizon]: times n with f_1^n(U) meeting V."""
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    space = spec.space
    members, undecided, evidence = [], [], []
    for n in range(1, horizon + 1):
        m = mp.prefix_compose(spec, n)
        hit, desc = _hit_once(space, m, U, V)
        if hit is None:
            undecided.append(n)
        elif hit:
            members.append(n)
            evidence.append((n, desc))
    return HittingSet(
        "hitting", spec, horizon, tuple(members), tuple(undecided), u=U, v=V,
        evidence=tuple(evidence),
    )


def separation_set(spec: mp.SystemSpec, U, delta: Fraction, horizon: int) -> HittingSet:
    """N(U, delta) restricted to [1, horizon]: times at which some pair in U
    is separated beyond delta.

    The image diameter is attained on cylinders and finite sets, so the
    strict comparison against delta decides membership exactly.  Arc images
    keep their radius under rotation, so circle membership is constant in n.
    """
    delta = Fraction(delta)
    if delta <= 0:
        raise ValueError("delta must be positive")
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    space = spec.space
    members, undecided, evidence = [], [], []
    for n in range(1, horizon + 1):
        m = mp.prefix_compose(spec, n)
        img = mp.image(m, U)
        try:
            diam = sp.diameter(space, img)
            if sp.value_cmp(diam, delta) > 0:
                members.append(n)
                evidence.append((n, _describe_open(img)))
        except sp.EnclosureUndecided:
            undecided.append(n)
    return HittingSet(
        "separation", spec, horizon, tuple(members), tuple(undecided),
        u=U, delta=delta, evidence=tuple(evidence),
    )


def classify_frequency(hs: HittingSet, laws: Optional[mp.SystemLaws] = None) -> FrequencyEvidence:
    """Gap and run statistics under the {0, H+1} boundary convention, with a
    structural tag when a validated law pins behaviour beyond the horizon."""
    members = list(hs.members)
    H = hs.horizon
    extended = [0] + members + [H + 1]
    max_gap = max(b - a for a, b in zip(extended, extended[1:]))
    onset = (H + 1) // 2
    eventual = max(
        (b - a for a, b in zip(members, members[1:]) if a >= onset), default=0
    )
    longest = best = 0
    prev = None
    for n in members:
        best = best + 1 if prev == n - 1 else 1
        longest = max(longest, best)
        prev = n
    tail_start = None
    if members and members[-1] == H:
        # smallest t with [t, H] fully inside the member set
        idx = len(members) - 1
        while idx > 0 and members[idx - 1] == members[idx] - 1:
            idx -= 1
        tail_start = members[idx]
    # the gap ending at the H+1 boundary is only a lower bound
    censored = (not members) or members[-1] < H
    structural, detail = _structural_tag(hs, laws)
    return FrequencyEvidence(
        max_gap=max_gap,
        eventual_max_gap=eventual,
        longest_run=longest,
        tail_start=tail_start,
        first_member=members[0] if members else None,
        censored_final_gap=censored,
        structural=structural,
        structural_detail=detail,
    )


def _sets_disjoint(space, A, B) -> Optional[bool]:
    try:
        return not sp.intersects(space, A, B)
    except sp.EnclosureUndecided:
        return None


def _structural_tag(hs: HittingSet, laws: Optional[mp.SystemLaws]) -> tuple[Optional[str], str]:
    if laws is None:
        return None, ""
    spec = hs.spec
    space = spec.space
    if hs.kind == "hitting":
        law = laws.exponent
        if law is not None and _sets_disjoint(space, hs.u, hs.v):
            if law.sparse_support():
                return (
                    "sparse-support",
                    "nonzero exponents only on power/one-shot indices; with "
                    "disjoint sets the members inherit unbounded gaps: " + law.describe(),
                )
            for modulus in (2, 3):
                for residue in range(modulus):
                    if law.zero_on_residue(modulus, residue):
                        return (
                            "excluded-residue",
                            f"exponent 0 on n≡{residue} (mod {modulus}) and the sets are "
                            "disjoint, so that class never hits: " + law.describe(),
                        )
        if laws.table is not None:
            tab = laws.table
            pre_hits, cyc_hits = tab.indices_of(
                lambda t: sp.intersects(space, mp.image(t, hs.u), hs.v)
            )
            if not cyc_hits:
                return (
                    "finite-support",
                    f"only prefix indices {list(pre_hits)} can ever hit; " + tab.describe(),
                )
            if len(cyc_hits) == len(tab.cycle) and len(pre_hits) == len(tab.preperiod):
                return ("always-hits", "every prefix table moves U onto V: " + tab.describe())
            return (
                "cycle-exact",
                f"hits exactly at prefix indices {list(pre_hits)} and cycle offsets "
                f"{list(cyc_hits)}; " + tab.describe(),
            )
    if hs.kind == "separation":
        law = laws.exponent
        if law is not None and isinstance(space, sp.ShiftSpace):
            diam_u = sp.diameter(space, hs.u)
            if sp.value_cmp(diam_u, hs.delta) <= 0:
                for modulus in (2, 3):
                    for residue in range(modulus):
                        if law.zero_on_residue(modulus, residue):
                            return (
                                "excluded-residue",
                                f"exponent 0 on n≡{residue} (mod {modulus}) and diam(U) <= delta, "
                                "so that class never separates: " + law.describe(),
                            )
    return None, ""


def product_structural_miss(spec: mp.ProductSpec, laws: mp.SystemLaws, U, V) -> Optional[str]:
    """For a product system with disjoint rectangle components, certify that
    every index misses by covering the parities: each residue class mod 2 is
    killed by some component whose law is zero there."""
    if not isinstance(spec, mp.ProductSpec) or not isinstance(U, sp.ProductOpen):
        return None
    claims = []
    for residue in (1, 0):
        found = None
        for j, (part, part_laws) in enumerate(zip(spec.parts, laws.components)):
            law = part_laws.exponent
            if law is None:
                continue
            disjoint = _sets_disjoint(part.space, U.parts[j], V.parts[j])
            if disjoint and law.zero_on_residue(2, residue):
                found = (
                    f"n≡{residue} (mod 2): component {j + 1} has exponent 0 there "
                    f"and disjoint factors ({law.describe()})"
                )
                break
        if found is None:
            return None
        claims.append(found)
    return "; ".join(claims)


def brute_force_hitting(spec: mp.SystemSpec, U, V, horizon: int) -> tuple:
    """Independent oracle: fold step maps one at a time instead of using the
    closed-form prefix composition."""
    space = spec.space
    members = []
    current = U
    for n in range(1, horizon + 1):
        current = mp.image(mp.step_normal(spec, n), current)
        try:
            if sp.intersects(space, current, V):
                members.append(n)
        except sp.EnclosureUndecided:
            pass
    return tuple(members)
