"""Gap geometry: finite gap families, Newhouse thickness, interleaving.

A GapSet is a finite outer description of a compact set: a hull interval
minus finitely many certifiably disjoint open gaps.  Everything here is
enclosure arithmetic; a comparison that cannot be certified either fails
closed (predicates) or raises PrecisionError (orderings that the stepwise
thickness construction depends on).

Thickness is computed stepwise: gaps are processed in decreasing diameter
(ties left to right), each gap is scored by the nearer of the two bridges
that survive on its sides among previously processed gaps, and tau is the
infimum of the scores.  For the base-avoidance families produced by
symbolic.gaps_of_Sk the same infimum has a closed form, implemented in
sk_thickness and cross-validated against the generic routine in the tests.
"""

from __future__ import annotations

import random
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .certificate import (
    Certificate,
    check_flag,
    check_ge,
    GRADE_EVIDENCE,
)
from .realnum import (
    Enclosure,
    PrecisionError,
    as_enclosure,
    bonacci_root,
    enc_max,
    enc_min,
)

__all__ = [
    "Gap",
    "GapSet",
    "MalformedGapSet",
    "ThicknessValue",
    "affine_image",
    "gapset_from_intervals",
    "hausdorff_distance",
    "interleaved",
    "newhouse_certificate",
    "sk_thickness",
    "strongly_interleaved",
    "thickness",
]


class MalformedGapSet(ValueError):
    """The gap data cannot be certified as disjoint open gaps inside the hull."""


@dataclass(frozen=True)
class Gap:
    left: Enclosure
    right: Enclosure
    label: str = ""

    @property
    def width(self) -> Enclosure:
        return self.right - self.left


@dataclass(frozen=True)
class GapSet:
    """Hull interval minus finitely many certified-disjoint open gaps.

    ``gaps`` must already be, or be sortable into, strictly increasing
    position order with certified positive widths and certified separation
    from each other and from the hull endpoints.  ``depth`` is optional
    metadata recording the refinement depth this description was built at;
    it is carried into ThicknessValue so results are always reported as
    finite-depth quantities.
    """

    hull_lo: Enclosure
    hull_hi: Enclosure
    gaps: tuple[Gap, ...]
    depth: Optional[int] = None

    def __post_init__(self):
        if self.hull_lo.lt(self.hull_hi) is not True:
            raise MalformedGapSet("hull must have certified positive length")
        gaps = tuple(sorted(self.gaps, key=lambda g: (g.left.lo, g.right.lo)))
        object.__setattr__(self, "gaps", gaps)
        prev_right = None
        for g in gaps:
            if g.left.lt(g.right) is not True:
                raise MalformedGapSet(f"gap {g.label!r} has no certified positive width")
            if self.hull_lo.lt(g.left) is not True or g.right.lt(self.hull_hi) is not True:
                raise MalformedGapSet(f"gap {g.label!r} not certified interior to the hull")
            if prev_right is not None and prev_right.lt(g.left) is not True:
                raise MalformedGapSet(f"gap {g.label!r} not certified disjoint from its predecessor")
            prev_right = g.right

    def bridges(self) -> list[tuple[Enclosure, Enclosure]]:
        """Closed intervals remaining when the open gaps are removed."""
        out = []
        lo = self.hull_lo
        for g in self.gaps:
            out.append((lo, g.left))
            lo = g.right
        out.append((lo, self.hull_hi))
        return out

    def restrict(self, lo=None, hi=None) -> "GapSet":
        """Truncate to ``[lo, hi]``.  The cut must fall on bridge points:
        a gap that straddles either boundary raises MalformedGapSet."""
        new_lo = self.hull_lo if lo is None else as_enclosure(lo)
        new_hi = self.hull_hi if hi is None else as_enclosure(hi)
        kept = []
        for g in self.gaps:
            inside_lo = new_lo.lt(g.left)
            inside_hi = g.right.lt(new_hi)
            if inside_lo is True and inside_hi is True:
                kept.append(g)
            elif g.right.le(new_lo) is True or new_hi.le(g.left) is True:
                continue
            elif g.left == new_hi or g.right == new_lo:
                # Cut placed exactly on this gap's own endpoint (structural
                # equality of enclosures): the gap sits entirely outside the
                # kept interval, touching it at the cut point.
                continue
            else:
                raise MalformedGapSet(
                    f"gap {g.label!r} straddles a truncation boundary; cut at a bridge point"
                )
        return GapSet(new_lo, new_hi, tuple(kept), depth=self.depth)

    def point_in(self, x) -> Optional[bool]:
        """Tri-valued membership of a point in the described set."""
        x = as_enclosure(x)
        if x.lt(self.hull_lo) is True or self.hull_hi.lt(x) is True:
            return False
        inside_hull = self.hull_lo.le(x) is True and x.le(self.hull_hi) is True
        verdict: Optional[bool] = True if inside_hull else None
        for g in self.gaps:
            if g.left.lt(x) is True and x.lt(g.right) is True:
                return False
            strictly_out = x.le(g.left) is True or g.right.le(x) is True
            if not strictly_out:
                verdict = None
        return verdict


def gapset_from_intervals(hull_lo, hull_hi, pieces: Iterable[tuple], depth=None) -> GapSet:
    """Build a GapSet from closed covering pieces instead of gaps.

    ``pieces`` are (lo, hi) interval endpoints of set members; pieces whose
    separation cannot be certified are merged.  The gaps are the certified
    spacings that remain.  This is the constructor used for cylinder covers,
    where adjacent cylinders may touch or overlap within rounding.
    """
    hull_lo = as_enclosure(hull_lo)
    hull_hi = as_enclosure(hull_hi)
    rows = [(as_enclosure(a), as_enclosure(b)) for (a, b) in pieces]
    if not rows:
        raise MalformedGapSet("need at least one covering piece")
    rows.sort(key=lambda ab: (ab[0].lo, ab[1].lo))
    merged = [list(rows[0])]
    for a, b in rows[1:]:
        if merged[-1][1].lt(a) is True:
            merged.append([a, b])
        else:
            merged[-1][1] = enc_max(merged[-1][1], b)
    gaps = []
    for (left_piece, right_piece) in zip(merged, merged[1:]):
        gaps.append(Gap(left=left_piece[1], right=right_piece[0]))
    return GapSet(hull_lo, hull_hi, tuple(gaps), depth=depth)


@dataclass(frozen=True)
class ThicknessValue:
    """Result of a stepwise thickness evaluation at a recorded depth.

    ``tau is None`` together with ``infinite=True`` means the description
    has no gaps at all (a full interval), whose thickness is unbounded.
    """

    tau: Optional[Enclosure]
    infinite: bool = False
    depth: Optional[int] = None
    gap_count: int = 0


def _width_key(g: Gap) -> tuple[Fraction, Fraction]:
    w = g.width
    return (w.lo, w.hi)


def thickness(gapset: GapSet, tie_rng: Optional[random.Random] = None,
              strict: bool = False) -> ThicknessValue:
    """Stepwise Newhouse thickness of a finite gap description.

    Gaps are processed in decreasing diameter; gaps whose width enclosures
    coincide exactly form a tie block processed left to right (or in an
    order drawn from ``tie_rng``, for invariance testing — the value is
    independent of the choice).  When two width enclosures overlap without
    coinciding, the true diameter order is unknowable at this precision:
    with ``strict=True`` that raises PrecisionError; by default the sort
    order (upper width bound descending) is used as the processing order,
    which is the right call for families whose equal-width gaps acquire
    unequal enclosures through rounding.
    """
    n = len(gapset.gaps)
    if n == 0:
        return ThicknessValue(tau=None, infinite=True, depth=gapset.depth, gap_count=0)

    order = sorted(range(n), key=lambda i: (-gapset.gaps[i].width.hi, gapset.gaps[i].left.lo))
    if strict:
        for a, b in zip(order, order[1:]):
            wa, wb = gapset.gaps[a].width, gapset.gaps[b].width
            if (wa.lo, wa.hi) == (wb.lo, wb.hi):
                continue
            if wa.ge(wb) is not True:
                raise PrecisionError(
                    "cannot certify the diameter processing order at this precision"
                )
    if tie_rng is not None:
        shuffled: list[int] = []
        block: list[int] = []
        block_key: Optional[tuple[Fraction, Fraction]] = None
        for i in order:
            key = _width_key(gapset.gaps[i])
            if key == block_key:
                block.append(i)
            else:
                tie_rng.shuffle(block)
                shuffled.extend(block)
                block, block_key = [i], key
        tie_rng.shuffle(block)
        shuffled.extend(block)
        order = shuffled

    # placed endpoints, keyed by exact lower bounds for bisection; the keys
    # are consistent because the gaps were validated pairwise separated
    right_keys: list[Fraction] = []
    right_vals: list[Enclosure] = []
    left_keys: list[Fraction] = []
    left_vals: list[Enclosure] = []

    tau: Optional[Enclosure] = None
    for i in order:
        g = gapset.gaps[i]
        idx = bisect_right(right_keys, g.left.lo)
        anchor_l = right_vals[idx - 1] if idx > 0 else gapset.hull_lo
        jdx = bisect_left(left_keys, g.right.lo)
        anchor_r = left_vals[jdx] if jdx < len(left_vals) else gapset.hull_hi
        score = enc_min(g.left - anchor_l, anchor_r - g.right) / g.width
        tau = score if tau is None else enc_min(tau, score)
        insort_pos = bisect_left(left_keys, g.left.lo)
        left_keys.insert(insort_pos, g.left.lo)
        left_vals.insert(insort_pos, g.left)
        insort_pos = bisect_left(right_keys, g.right.lo)
        right_keys.insert(insort_pos, g.right.lo)
        right_vals.insert(insort_pos, g.right)

    return ThicknessValue(tau=tau, infinite=False, depth=gapset.depth, gap_count=n)


def sk_thickness(q, k: int, max_delta_len: int) -> ThicknessValue:
    """Finite-depth thickness of the order-k avoidance gap family, in closed
    form, without materializing the gaps.

    Every depth-n gap of the family is a copy of the depth-0 gap scaled by
    q**-n, so the stepwise pass processes whole depth levels at a time and
    the score of a depth-n gap is controlled by the nearest shallower gap
    ending closest on its tight side.  Minimizing over a level gives a
    ratio that is strictly decreasing in depth until the run-length cap
    stops producing new adjacency patterns, after which the infimum sits on
    a plateau.  With p0, p1 the depth-0 gap endpoints and C = p1 - p0:

        tau(0)      = p0 / C
        tau(D>=1)   = (p0 - q**(i-k+1) * p1) / C,   i = min(D-1, k-2)

    The tests cross-validate this against thickness() on materialized
    families for small k and every depth through the plateau.
    """
    if k < 3:
        raise ValueError(
            "order must be at least 3: the order-2 family has touching gaps "
            "(adjacent index words share an endpoint sequence), so no "
            "positive-bridge gap structure exists"
        )
    if max_delta_len < 0:
        raise ValueError("max_delta_len must be nonnegative")
    q = as_enclosure(q)
    root = bonacci_root(k)
    if q.gt(root.value) is not True:
        raise ValueError(
            f"base must certifiably exceed the order-{k} root "
            f"{root.value.str_digits(20)}"
        )
    one = Enclosure(1)
    p0 = (q ** (k - 1) - one) / ((q - one) * (q ** k - one))
    p1 = q ** (k - 1) / (q ** k - one)
    cw = p1 - p0
    if max_delta_len == 0:
        tau = p0 / cw
    else:
        i = min(max_delta_len - 1, k - 2)
        tau = (p0 - q ** (i - k + 1) * p1) / cw
    return ThicknessValue(tau=tau, infinite=False, depth=max_delta_len)


def affine_image(gapset: GapSet, scale, offset) -> GapSet:
    """Image of the described set under x -> scale*x + offset.

    ``scale`` must be certified nonzero; a negative scale reflects the
    family, swapping and reversing the gaps.
    """
    scale = as_enclosure(scale)
    offset = as_enclosure(offset)
    zero = Enclosure(0)
    positive = scale.gt(zero)
    negative = scale.lt(zero)
    if positive is not True and negative is not True:
        raise ValueError("scale must be certified nonzero")

    def fwd(x: Enclosure) -> Enclosure:
        return scale * x + offset

    if positive:
        hull_lo, hull_hi = fwd(gapset.hull_lo), fwd(gapset.hull_hi)
        gaps = tuple(Gap(fwd(g.left), fwd(g.right), g.label) for g in gapset.gaps)
    else:
        hull_lo, hull_hi = fwd(gapset.hull_hi), fwd(gapset.hull_lo)
        gaps = tuple(Gap(fwd(g.right), fwd(g.left), g.label) for g in reversed(gapset.gaps))
    return GapSet(hull_lo, hull_hi, gaps, depth=gapset.depth)


def _contained_in_complement(inner: GapSet, outer: GapSet) -> Optional[bool]:
    """Tri-valued: is inner's hull certifiably inside one component of the
    complement of outer (a gap or an unbounded side)?  True means inner
    misses outer entirely; None means some containment is undecidable."""
    lo, hi = inner.hull_lo, inner.hull_hi
    side_low = hi.lt(outer.hull_lo)
    side_high = outer.hull_hi.lt(lo)
    if side_low is True or side_high is True:
        return True
    uncertain = side_low is None or side_high is None
    # only gaps positioned to straddle the inner hull can contain it
    keys = [g.left.lo for g in outer.gaps]
    start = bisect_right(keys, lo.hi)
    for g in outer.gaps[max(0, start - 2): start + 2]:
        in_gap_l = g.left.lt(lo)
        in_gap_r = hi.lt(g.right)
        if in_gap_l is True and in_gap_r is True:
            return True
        if in_gap_l is not False and in_gap_r is not False:
            uncertain = True
    return None if uncertain else False


def interleaved(a: GapSet, b: GapSet) -> bool:
    """True iff neither described set fits inside a single complementary
    component of the other, certified on the finite descriptions.  Any
    undecidable containment fails closed to False."""
    return (_contained_in_complement(a, b) is False
            and _contained_in_complement(b, a) is False)


def strongly_interleaved(a1, a2, b1, b2, eps) -> Certificate:
    """Certificate that hulls [a1,a2] and [b1,b2] interleave with margin:
    each of b1-a1, a2-b1, b2-a2 certified >= 2*eps."""
    a1, a2 = as_enclosure(a1), as_enclosure(a2)
    b1, b2 = as_enclosure(b1), as_enclosure(b2)
    eps = as_enclosure(eps)
    two_eps = Enclosure(2) * eps
    checks = [
        check_ge("left_stagger", b1 - a1, two_eps),
        check_ge("overlap_core", a2 - b1, two_eps),
        check_ge("right_stagger", b2 - a2, two_eps),
    ]
    return Certificate(
        claim="strongly-interleaved",
        params={"eps": str(eps.lo)},
        checks=checks,
        evidence_depth=None,
        grade=GRADE_EVIDENCE,
    )


def _distance_to_set(x: Enclosure, bset: GapSet) -> Enclosure:
    """Enclosure of dist(x, set described by bset), using the bridge list.

    Scans outward from the bisection position until the window is walled on
    each side by a bridge certified entirely on that side of x (or by the
    ends of the list); bridges beyond such a wall are certifiably farther
    than the wall itself, so the minimum over the window encloses the true
    distance.
    """
    bridges = bset.bridges()
    keys = [u.lo for (u, _) in bridges]
    idx = bisect_right(keys, x.lo)
    lo_j = idx - 1
    while lo_j > 0 and not (bridges[lo_j][1].hi < x.lo):
        lo_j -= 1
    hi_j = idx
    while hi_j < len(bridges) - 1 and not (bridges[hi_j][0].lo > x.hi):
        hi_j += 1
    zero = Enclosure(0)
    best: Optional[Enclosure] = None
    for j in range(max(0, lo_j), min(len(bridges), hi_j + 1)):
        u, v = bridges[j]
        d = enc_max(zero, u - x, x - v)
        best = d if best is None else enc_min(best, d)
    assert best is not None
    return best


def _directed_hausdorff(a: GapSet, b: GapSet) -> tuple[Fraction, Fraction]:
    """Bounds on sup_{x in A} dist(x, B).

    The supremum over a union of closed intervals of the piecewise-linear
    distance-to-B function is attained either at a bridge endpoint of A or
    at a midpoint of a gap of B that belongs to A.  Candidates with
    undecidable membership contribute to the upper bound only.
    """
    half = Fraction(1, 2)
    candidates: list[tuple[Enclosure, Optional[bool]]] = []
    for (u, v) in a.bridges():
        candidates.append((u, True))
        candidates.append((v, True))
    for g in b.gaps:
        mid = (g.left + g.right) * Enclosure(half)
        member = a.point_in(mid)
        if member is not False:
            candidates.append((mid, member))
    lo = Fraction(0)
    hi = Fraction(0)
    for x, member in candidates:
        d = _distance_to_set(x, b)
        hi = max(hi, d.hi)
        if member is True:
            lo = max(lo, d.lo)
    return lo, hi


def hausdorff_distance(a: GapSet, b: GapSet) -> Enclosure:
    """Enclosure of the Hausdorff distance between the two described sets."""
    lo1, hi1 = _directed_hausdorff(a, b)
    lo2, hi2 = _directed_hausdorff(b, a)
    return Enclosure.from_endpoints(max(lo1, lo2), max(hi1, hi2))


def newhouse_certificate(a: GapSet, b: GapSet) -> Certificate:
    """Gap lemma certificate: interleaved hulls and thickness product >= 1.

    Always graded finite-depth-evidence: the inputs are finite outer
    descriptions, so the product bound is a statement about the described
    approximations, not a closed-form inequality about the limit sets.
    """
    inter = interleaved(a, b)
    ta = thickness(a)
    tb = thickness(b)
    checks = [check_flag("interleaved", inter)]
    one = Enclosure(1)
    if ta.infinite or tb.infinite:
        other = tb if ta.infinite else ta
        if other.infinite:
            checks.append(check_flag("thickness_product", True,
                                     note="both descriptions are full intervals"))
        else:
            pos = other.tau.gt(Enclosure(0))
            checks.append(check_flag(
                "thickness_product",
                True if pos is True else (None if pos is None else False),
                note="one description is a full interval; product is unbounded",
            ))
    else:
        checks.append(check_ge("thickness_product", ta.tau * tb.tau, one))
    depths = [d for d in (a.depth, b.depth) if d is not None]
    return Certificate(
        claim="newhouse-intersection",
        params={"gaps_a": len(a.gaps), "gaps_b": len(b.gaps)},
        checks=checks,
        evidence_depth=max(depths) if depths else None,
        grade=GRADE_EVIDENCE,
    )
