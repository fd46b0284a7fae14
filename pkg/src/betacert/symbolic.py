"""Digit words, eventually periodic digit sequences, and the avoidance
subshift whose gap structure drives every thickness bound in the package.

Sequences are over the digit alphabet {-1, 0, 1}; the subshift machinery
only ever sees {0, 1}, the signed digit appears in relative expansions.
A SymbolicSeq is canonicalized on construction so that equal sequences
compare equal: minimal period, preperiod rolled back into the period where
possible, and a trailing zero tail normalized to a finite word.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional

from .realnum import Enclosure, as_enclosure, bonacci_root, pi_q
from .thickness import Gap, GapSet

__all__ = [
    "ResourceError",
    "SubshiftSk",
    "SymbolicSeq",
    "Word",
    "avoids",
    "enumerate_sk_words",
    "gaps_of_Sk",
]

log = logging.getLogger(__name__)

ENUMERATION_BUDGET = 1 << 24


class ResourceError(RuntimeError):
    """An enumeration was refused because its certified size exceeds budget."""


@dataclass(frozen=True)
class Word:
    """Finite digit word over {-1, 0, 1}."""

    digits: tuple[int, ...] = ()

    def __post_init__(self):
        digits = tuple(int(d) for d in self.digits)
        if any(d not in (-1, 0, 1) for d in digits):
            raise ValueError("digits must lie in {-1, 0, 1}")
        object.__setattr__(self, "digits", digits)

    @classmethod
    def from_str(cls, s: str) -> "Word":
        """Parse '0'/'1' characters, with '-' standing for the digit -1."""
        table = {"0": 0, "1": 1, "-": -1}
        try:
            return cls(tuple(table[c] for c in s))
        except KeyError as exc:
            raise ValueError(f"unexpected digit character {exc.args[0]!r}") from None

    @classmethod
    def zeros(cls, n: int) -> "Word":
        return cls((0,) * n)

    @classmethod
    def ones(cls, n: int) -> "Word":
        return cls((1,) * n)

    def __len__(self) -> int:
        return len(self.digits)

    def __iter__(self) -> Iterator[int]:
        return iter(self.digits)

    def __getitem__(self, i):
        got = self.digits[i]
        return Word(got) if isinstance(i, slice) else got

    def __add__(self, other: "Word") -> "Word":
        return Word(self.digits + Word_coerce(other).digits)

    def __mul__(self, n: int) -> "Word":
        return Word(self.digits * n)

    def __str__(self) -> str:
        return "".join("-" if d < 0 else str(d) for d in self.digits)


def Word_coerce(w) -> Word:
    if isinstance(w, Word):
        return w
    if isinstance(w, str):
        return Word.from_str(w)
    return Word(tuple(w))


@dataclass(frozen=True)
class SymbolicSeq:
    """Eventually periodic digit sequence ``preperiod . (period)^inf``.

    An empty period means the finite word followed by zeros forever.
    Construction canonicalizes, so two descriptions of the same sequence
    are equal as values:

    * the period is reduced to its minimal length;
    * while the last preperiod digit equals the last period digit, the
      boundary is rolled left (preperiod shrinks, period rotates);
    * an all-zero period becomes the empty period, and a finite sequence
      drops trailing zeros.
    """

    preperiod: Word = Word()
    period: Word = Word()

    def __post_init__(self):
        pre = list(Word_coerce(self.preperiod).digits)
        per = list(Word_coerce(self.period).digits)
        if per:
            n = len(per)
            for p in range(1, n + 1):
                if n % p == 0 and per == per[:p] * (n // p):
                    per = per[:p]
                    break
        while pre and per and pre[-1] == per[-1]:
            pre.pop()
            per = [per[-1]] + per[:-1]
        if per and all(d == 0 for d in per):
            per = []
        if not per:
            while pre and pre[-1] == 0:
                pre.pop()
        object.__setattr__(self, "preperiod", Word(tuple(pre)))
        object.__setattr__(self, "period", Word(tuple(per)))

    @classmethod
    def finite(cls, word) -> "SymbolicSeq":
        return cls(Word_coerce(word), Word())

    @classmethod
    def periodic(cls, word) -> "SymbolicSeq":
        return cls(Word(), Word_coerce(word))

    @classmethod
    def eventually(cls, pre, per) -> "SymbolicSeq":
        return cls(Word_coerce(pre), Word_coerce(per))

    @property
    def is_finite(self) -> bool:
        return len(self.period) == 0

    def digit(self, i: int) -> int:
        pre, per = self.preperiod.digits, self.period.digits
        if i < len(pre):
            return pre[i]
        if not per:
            return 0
        return per[(i - len(pre)) % len(per)]

    def prefix(self, n: int) -> Word:
        return Word(tuple(self.digit(i) for i in range(n)))

    def shift(self, n: int = 1) -> "SymbolicSeq":
        """Drop the first n digits."""
        pre, per = self.preperiod.digits, self.period.digits
        if n <= len(pre):
            return SymbolicSeq(Word(pre[n:]), self.period)
        if not per:
            return SymbolicSeq(Word(), Word())
        r = (n - len(pre)) % len(per)
        return SymbolicSeq(Word(), Word(per[r:] + per[:r]))

    def __str__(self) -> str:
        if self.is_finite:
            return f"{self.preperiod}" if len(self.preperiod) else "0^inf"
        return f"{self.preperiod}({self.period})^inf"


def avoids(seq, pattern) -> bool:
    """True iff the (finite or eventually periodic) sequence contains no
    occurrence of the finite pattern.

    A window of |preperiod| + 2*|period| + |pattern| digits is scanned:
    every occurrence in the infinite sequence induces one whose start lies
    before |preperiod| + |period|, and such an occurrence ends inside the
    window.  Finite sequences are padded with zeros, matching their value.
    """
    pattern = Word_coerce(pattern)
    if len(pattern) == 0:
        raise ValueError("pattern must be nonempty")
    if isinstance(seq, Word) or isinstance(seq, (tuple, list, str)):
        seq = SymbolicSeq.finite(Word_coerce(seq))
    window = len(seq.preperiod) + 2 * len(seq.period) + len(pattern)
    digits = tuple(seq.digit(i) for i in range(window))
    pat = pattern.digits
    m = len(pat)
    return all(digits[i:i + m] != pat for i in range(window - m + 1))


@dataclass(frozen=True)
class SubshiftSk:
    """Binary sequences avoiding both 0 1^k and 1 0^k."""

    k: int

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("order must be at least 2")

    @property
    def forbidden(self) -> tuple[Word, Word]:
        k = self.k
        return (Word((0,) + (1,) * k), Word((1,) + (0,) * k))

    def contains(self, seq) -> bool:
        a, b = self.forbidden
        return avoids(seq, a) and avoids(seq, b)


@lru_cache(maxsize=None)
def _run_capped_count(k: int, n: int) -> int:
    """Number of binary words of length n whose non-initial runs are all
    shorter than k — equivalently, words avoiding 01^k and 10^k."""
    if n == 0:
        return 1
    # state: (digit, run_length, initial_run?) after some prefix
    counts: dict[tuple[int, int, bool], int] = {}
    for d in (0, 1):
        counts[(d, 1, True)] = 1
    for _ in range(n - 1):
        nxt: dict[tuple[int, int, bool], int] = {}
        for (d, run, initial), c in counts.items():
            for e in (0, 1):
                if e == d:
                    if initial:
                        key = (d, run + 1, True)
                    elif run + 1 <= k - 1:
                        key = (d, run + 1, False)
                    else:
                        continue
                else:
                    key = (e, 1, False)
                nxt[key] = nxt.get(key, 0) + c
        counts = nxt
    return sum(counts.values())


def enumerate_sk_words(k: int, n: int, budget: int = ENUMERATION_BUDGET) -> list[Word]:
    """All length-n binary words avoiding 0 1^k and 1 0^k, ascending lex.

    The count is computed first; if it exceeds ``budget`` the enumeration
    is refused with ResourceError rather than started.
    """
    if k < 2:
        raise ValueError("order must be at least 2")
    if n < 0:
        raise ValueError("length must be nonnegative")
    total = _run_capped_count(k, n)
    if total > budget:
        raise ResourceError(
            f"{total} words of length {n} avoid the order-{k} patterns, "
            f"which exceeds the enumeration budget {budget}"
        )
    out: list[Word] = []
    word: list[int] = []

    def descend(last: int, run: int, initial: bool):
        if len(word) == n:
            out.append(Word(tuple(word)))
            return
        for e in (0, 1):
            if e == last:
                if not initial and run + 1 > k - 1:
                    continue
                word.append(e)
                descend(e, run + 1, initial)
                word.pop()
            else:
                word.append(e)
                descend(e, 1, False)
                word.pop()

    if n == 0:
        return [Word()]
    for e in (0, 1):
        word.append(e)
        descend(e, 1, True)
        word.pop()
    return out


def _admissible_count(k: int, max_len: int) -> int:
    """Number of gap index words of length <= max_len: words whose
    non-initial runs stay below k and whose final non-initial run is at
    most k-2 (so both endpoint tails remain pattern-free)."""
    total = 1  # empty word
    for n in range(1, max_len + 1):
        counts: dict[tuple[int, int, bool], int] = {(0, 1, True): 1, (1, 1, True): 1}
        for _ in range(n - 1):
            nxt: dict[tuple[int, int, bool], int] = {}
            for (d, run, initial), c in counts.items():
                for e in (0, 1):
                    if e == d:
                        if initial:
                            key = (d, run + 1, True)
                        elif run + 1 <= k - 1:
                            key = (d, run + 1, False)
                        else:
                            continue
                    else:
                        key = (e, 1, False)
                    nxt[key] = nxt.get(key, 0) + c
            counts = nxt
        total += sum(c for (d, run, initial), c in counts.items()
                     if initial or run <= k - 2)
    return total


def gaps_of_Sk(q, k: int, max_delta_len: int,
               budget: int = ENUMERATION_BUDGET) -> GapSet:
    """Materialize the gap family of the order-k avoidance set in base q.

    Requires a base certifiably above the order-k root.  Each admissible
    index word delta contributes the open gap between the values of
    delta(01^{k-1})^inf and delta(10^{k-1})^inf; admissibility means both
    tails stay pattern-free: non-initial runs below k throughout delta and
    a final non-initial run of at most k-2.  Gaps are returned inside the
    hull [0, 1/(q-1)], sorted by position, with the index word as label.

    For k = 2 any positive depth fails GapSet validation — adjacent index
    words there share an endpoint sequence, so the gaps touch and the
    family has no positive-bridge structure.
    """
    if k < 2:
        raise ValueError("order must be at least 2")
    if max_delta_len < 0:
        raise ValueError("max_delta_len must be nonnegative")
    q = as_enclosure(q)
    root = bonacci_root(k)
    if q.gt(root.value) is not True:
        raise ValueError(
            f"base must certifiably exceed the order-{k} root "
            f"{root.value.str_digits(20)}"
        )
    total = _admissible_count(k, max_delta_len)
    if total > budget:
        raise ResourceError(
            f"{total} index words up to length {max_delta_len} exceed the "
            f"enumeration budget {budget}"
        )

    one = Enclosure(1)
    hull_lo = Enclosure(0)
    hull_hi = one / (q - one)
    tail0 = SymbolicSeq.periodic(Word((0,) + (1,) * (k - 1)))
    tail1 = SymbolicSeq.periodic(Word((1,) + (0,) * (k - 1)))
    p0 = pi_q(tail0, q)
    p1 = pi_q(tail1, q)

    qinv = one / q
    qinv_pow = [one]
    for _ in range(max_delta_len + 1):
        qinv_pow.append(qinv_pow[-1] * qinv)

    gaps: list[Gap] = []
    word: list[int] = []

    def emit(val: Enclosure):
        scale = qinv_pow[len(word)]
        gaps.append(Gap(left=val + scale * p0, right=val + scale * p1,
                        label="".join(str(d) for d in word)))

    def descend(val: Enclosure, last: int, run: int, initial: bool):
        if initial or run <= k - 2:
            emit(val)
        if len(word) == max_delta_len:
            return
        for e in (0, 1):
            if e == last:
                if not initial and run + 1 > k - 1:
                    continue
                nrun, ninit = run + 1, initial
            else:
                nrun, ninit = 1, False
            word.append(e)
            descend(val + qinv_pow[len(word)] * Enclosure(e) if e else val,
                    e, nrun, ninit)
            word.pop()

    if max_delta_len == 0:
        emit(Enclosure(0))
    else:
        emit(Enclosure(0))
        for e in (0, 1):
            word.append(e)
            val = qinv_pow[1] * Enclosure(e) if e else Enclosure(0)
            descend(val, e, 1, True)
            word.pop()

    gaps.sort(key=lambda g: (g.left.lo, g.right.lo))
    unique: list[Gap] = []
    for g in gaps:
        if unique and unique[-1].left == g.left and unique[-1].right == g.right:
            log.warning(
                "duplicate gap endpoints for index words %r and %r; keeping the first",
                unique[-1].label, g.label,
            )
            continue
        unique.append(g)
    return GapSet(hull_lo, hull_hi, tuple(unique), depth=max_delta_len)
