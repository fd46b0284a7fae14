"""Digit dynamics: the two forward maps, the switch region, and certified
branch counting.

A point x of the attractor [0, 1/(q-1)] digit-expands by repeatedly
applying f_eps(x) = q x - eps for a digit eps that keeps the value inside
the attractor.  Both digits work exactly on the switch region
J_q = [1/q, 1/(q(q-1))]; elsewhere at most one does.  Counting surviving
digit strings therefore bounds the number of distinct expansions of x:
every certified prefix leaves a remainder inside the attractor, so it
extends to at least one full expansion, and distinct prefixes extend to
distinct expansions.

All memberships are tri-valued and fail closed: a value whose enclosure
straddles a domain boundary contributes to the possible count but never to
the certified one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .certificate import Certificate, GRADE_EVIDENCE, check_flag
from .realnum import Enclosure, as_enclosure, membership, pi_q
from .symbolic import ResourceError

__all__ = [
    "CountReport",
    "DigitMaps",
    "NODE_BUDGET",
    "certify_m_expansions",
    "count_prefixes",
    "map_uniquely_check",
]

#: processed-node cap for the breadth-first branch walk; the count of
#: expansions can be uncountable, so the walk only ever reports bounds and
#: must refuse to pretend otherwise by grinding forever
NODE_BUDGET = 10 ** 6


def _zero() -> Enclosure:
    return as_enclosure(0)


def _require_base(q) -> Enclosure:
    q = as_enclosure(q)
    if q.gt(1) is not True or q.lt(2) is not True:
        raise ValueError("q must be certifiably inside (1, 2)")
    return q


def _coerce_point(x, q: Enclosure) -> Enclosure:
    """Accept exact rationals, decimal strings, enclosures, or digit
    sequences (anything the projection understands)."""
    if hasattr(x, "preperiod") or hasattr(x, "digits"):
        return pi_q(x, q)
    return as_enclosure(x)


@dataclass(frozen=True)
class DigitMaps:
    """The maps x -> qx - eps with their exact domains.

    Binary digits: f_0 on [0, 1/(q(q-1))], f_1 on [1/q, 1/(q-1)]; their
    overlap is the switch region, the only place both digits keep the
    value inside the attractor.  The signed trio (eps in {-1, 0, 1}) acts
    on the symmetric interval [-1/(q-1), 1/(q-1)].
    """
    q: Enclosure
    attractor: tuple[Enclosure, Enclosure] = field(init=False, repr=False)
    switch: tuple[Enclosure, Enclosure] = field(init=False, repr=False)
    extended: tuple[Enclosure, Enclosure] = field(init=False, repr=False)

    def __post_init__(self):
        q = _require_base(self.q)
        object.__setattr__(self, "q", q)
        hi = 1 / (q - 1)
        object.__setattr__(self, "attractor", (_zero(), hi))
        object.__setattr__(self, "switch", (1 / q, hi / q))
        object.__setattr__(self, "extended", (-hi, hi))

    def apply(self, eps: int, x) -> Enclosure:
        if eps not in (-1, 0, 1):
            raise ValueError(f"digit must be -1, 0, or 1, got {eps}")
        return self.q * as_enclosure(x) - eps

    def domain(self, eps: int) -> tuple[Enclosure, Enclosure]:
        """Domain of the binary digit map: the values it keeps inside the
        attractor."""
        if eps == 0:
            return self.attractor[0], self.switch[1]
        if eps == 1:
            return self.switch[0], self.attractor[1]
        raise ValueError(f"binary digit expected, got {eps}")

    def in_attractor(self, x) -> Optional[bool]:
        return membership(as_enclosure(x), *self.attractor)

    def in_switch(self, x) -> Optional[bool]:
        return membership(as_enclosure(x), *self.switch)


@dataclass(frozen=True)
class CountReport:
    """Per-depth prefix counts from the breadth-first branch walk.

    ``certified_min[d-1]`` counts length-d digit strings whose entire
    orbit is certified inside the respective domains — a true lower bound
    for the number of expansions of x.  ``possible_max[d-1]`` additionally
    counts strings with undecided memberships.  ``branch_events`` lists
    (depth, value) for nodes certified inside the switch region, i.e. the
    places where the tree genuinely forks.  ``stabilized`` reports whether
    both counts agree and stay constant over the final quarter of depths.
    """
    x: Enclosure
    depth: int
    certified_min: tuple[int, ...]
    possible_max: tuple[int, ...]
    branch_events: tuple[tuple[int, Enclosure], ...]
    nodes_processed: int
    stabilized: bool


def count_prefixes(q, x, depth: int = 200,
                   node_budget: int = NODE_BUDGET) -> CountReport:
    """Breadth-first walk of the digit branch tree rooted at x.

    A node spawns a child for each digit whose domain does not certifiably
    exclude it; only children reached through all-certified memberships
    count toward ``certified_min``.
    """
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    maps = DigitMaps(q)
    x = _coerce_point(x, maps.q)
    root_in = maps.in_attractor(x)
    if root_in is False:
        raise ValueError("x is certifiably outside the attractor [0, 1/(q-1)]")

    dom0 = maps.domain(0)
    dom1 = maps.domain(1)
    frontier: list[tuple[Enclosure, bool]] = [(x, root_in is True)]
    cmin: list[int] = []
    cmax: list[int] = []
    events: list[tuple[int, Enclosure]] = []
    processed = 0
    for d in range(1, depth + 1):
        nxt: list[tuple[Enclosure, bool]] = []
        for y, certified in frontier:
            processed += 1
            if processed > node_budget:
                raise ResourceError(
                    f"branch walk exceeded the node budget of {node_budget} "
                    f"at depth {d} (frontier size {len(frontier)})")
            m0 = membership(y, *dom0)
            m1 = membership(y, *dom1)
            if m0 is True and m1 is True:
                events.append((d - 1, y))
            if m0 is not False:
                nxt.append((maps.apply(0, y), certified and m0 is True))
            if m1 is not False:
                nxt.append((maps.apply(1, y), certified and m1 is True))
        frontier = nxt
        cmin.append(sum(1 for _, c in frontier if c))
        cmax.append(len(frontier))

    window = max(1, depth // 4)
    tail = cmin[-window:] + cmax[-window:]
    stabilized = len(set(tail)) == 1
    return CountReport(x=x, depth=depth,
                       certified_min=tuple(cmin), possible_max=tuple(cmax),
                       branch_events=tuple(events),
                       nodes_processed=processed, stabilized=stabilized)


def map_uniquely_check(q, x, target, word) -> Optional[bool]:
    """Does x reach ``target`` through ``word`` without ever standing on a
    fork?

    Verifies that applying the binary digits of ``word`` in order carries
    x to ``target`` with the start and every intermediate value certified
    inside the attractor and outside the switch region — the condition
    under which x and target have exactly as many expansions as each
    other.  Returns True when the whole chain is certified, False when any
    requirement is certifiably violated (value leaves a domain, stands in
    the switch region, or misses the target), and None when some
    membership is undecidable at working precision.

    The start must be certifiably off the switch region: a certified
    violation of that raises ValueError, an undecided one returns None.
    """
    maps = DigitMaps(q)
    x = _coerce_point(x, maps.q)
    target = _coerce_point(target, maps.q)
    digits = list(word.digits if hasattr(word, "digits") else
                  (int(c) for c in word) if isinstance(word, str) else word)
    if any(d not in (0, 1) for d in digits):
        raise ValueError("word must use binary digits only")

    in_attr = maps.in_attractor(x)
    in_switch = maps.in_switch(x)
    if in_attr is False or in_switch is True:
        raise ValueError(
            "start must lie in the attractor and off the switch region; "
            "this start certifiably does not")
    verdict: Optional[bool] = True
    if in_attr is None or in_switch is None:
        verdict = None

    y = x
    last = len(digits) - 1
    for i, eps in enumerate(digits):
        m = membership(y, *maps.domain(eps))
        if m is False:
            return False
        if m is None:
            verdict = None
        y = maps.apply(eps, y)
        if i < last:
            forked = maps.in_switch(y)
            if forked is True:
                return False
            if forked is None:
                verdict = None
    if not y.intersects(target):
        return False
    return verdict


def certify_m_expansions(q, x, m: int, depth: int = 200) -> Certificate:
    """Finite-depth evidence that x has exactly m expansions.

    Certifies when the certified lower bound reaches m and the possible
    upper bound sits at m throughout the final quarter of depths.  The
    result is always evidence-grade: equality of the true count with m is
    a statement about an infinite tree, and a deeper walk could in
    principle still fork.
    """
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    report = count_prefixes(q, x, depth)
    window = max(1, depth // 4)
    checks = [
        check_flag(
            "certified_minimum_reaches_m",
            report.certified_min[-1] == m),
        check_flag(
            "possible_maximum_stays_m_over_window",
            all(v == m for v in report.possible_max[-window:]),
            note="exact-count equality is finite-depth evidence, not proof"),
        check_flag(
            "certified_minimum_stable_over_window",
            all(v == m for v in report.certified_min[-window:])),
    ]
    return Certificate(
        claim="expansion-count",
        params={"m": m, "depth": depth, "window": window,
                "q": list(as_enclosure(q).float_bounds()),
                "x": list(report.x.float_bounds())},
        checks=checks,
        evidence_depth=depth,
        grade=GRADE_EVIDENCE,
    )
