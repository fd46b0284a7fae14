"""Certified real arithmetic over outward-rounded interval enclosures.

Everything downstream (gap enumeration, thickness, the certification
pipelines) runs on the Enclosure type defined here: a closed interval
[lo, hi] of binary floats, outward-rounded by construction, guaranteed to
contain the exact real number it stands for.  Comparisons are tri-valued:
True / False only when the endpoints certify the answer, None when the
enclosures overlap and the question is undecidable at the working precision.

Also provided:

    bonacci_root(k)     the unique root in (1, 2) of
                            x^k = x^(k-1) + ... + x + 1,
                        isolated by bisection with *exact* integer sign
                        tests of the cancellation-free equivalent
                            x^(k+1) - 2 x^k + 1 = 0
                        (dyadic midpoints, no rounding anywhere);

    pi_q(seq, q)        evaluation of a digit sequence (d_j) as
                            sum_j d_j q^(-j),  d_j in {-1, 0, 1},
                        for finite words (implicitly padded with 0^inf)
                        and eventually periodic sequences, via the closed
                        form  value(u) + q^(-|u|) value(v) / (1 - q^(-|v|));

    projection_gap      |pi_{q1}(seq) - pi_{q2}(seq)| together with a
                        consistency check against the a-priori bound
                            |q1 - q2| / ((q1 - 1)(q2 - 1)).

Precision is a module-global (mpmath's interval context), default 256 bits,
overridable with set_precision() or the `precision` context manager, or the
BETACERT_PREC environment variable at import time.  Values are immutable:
an Enclosure built at one precision keeps its exact endpoints; only new
operations round at the then-current precision.
"""

from __future__ import annotations

import os
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import nextafter
from typing import Optional

from mpmath import iv, mp


DEFAULT_PRECISION = 256

iv.prec = int(os.environ.get("BETACERT_PREC", DEFAULT_PRECISION))


class PrecisionError(ArithmeticError):
    """Raised when the working precision cannot certify a required claim."""


# ======================================================================
# precision control
# ======================================================================

def set_precision(bits: int) -> int:
    """Set the global working precision (bits of mantissa). Returns it."""
    if bits < 64:
        raise ValueError(f"precision must be >= 64 bits, got {bits}")
    iv.prec = bits
    return bits


def get_precision() -> int:
    return iv.prec


@contextmanager
def precision(bits: int):
    """Temporarily run at a different working precision."""
    old = iv.prec
    set_precision(bits)
    try:
        yield
    finally:
        iv.prec = old


# ======================================================================
# Enclosure
# ======================================================================

def _raw_to_fraction(raw) -> Fraction:
    # raw is a libmp mpf tuple (sign, man, exp, bc); man == 0 with bc < 0
    # encodes inf/nan, which never legitimately appears in an enclosure.
    sign, man, exp, bc = raw
    if man == 0:
        if bc != 0:
            raise PrecisionError("non-finite endpoint in enclosure")
        return Fraction(0)
    m = int(man)
    if sign:
        m = -m
    return Fraction(m) * Fraction(2) ** exp if exp >= 0 else Fraction(m, 2 ** (-exp))


def _fraction_to_mpf_exact(fr: Fraction):
    """Exact mpf for a dyadic rational (denominator a power of two)."""
    num, den = fr.numerator, fr.denominator
    with mp.workprec(max(abs(num).bit_length(), den.bit_length(), 64) + 8):
        return mp.mpf(num) / mp.mpf(den)


class Enclosure:
    """A closed interval [lo, hi] certified to contain one exact real.

    Arithmetic delegates to mpmath's interval context (outward rounding);
    comparisons are explicit tri-valued methods -- the class deliberately
    defines no ordering dunders, so an Enclosure can never end up inside
    sorted() by accident.
    """

    __slots__ = ("_iv", "_lo", "_hi")

    def __init__(self, value):
        if isinstance(value, Enclosure):
            self._iv = value._iv
        elif isinstance(value, Fraction):
            self._iv = iv.mpf(value.numerator) / iv.mpf(value.denominator)
        else:
            # int, float, decimal string, ivmpf, mpf
            self._iv = iv.mpf(value)
        self._lo = None
        self._hi = None

    @classmethod
    def from_endpoints(cls, lo, hi) -> "Enclosure":
        if isinstance(lo, Fraction):
            lo = _fraction_to_mpf_exact(lo) if lo.denominator & (lo.denominator - 1) == 0 \
                else iv.mpf(lo.numerator) / iv.mpf(lo.denominator)
        if isinstance(hi, Fraction):
            hi = _fraction_to_mpf_exact(hi) if hi.denominator & (hi.denominator - 1) == 0 \
                else iv.mpf(hi.numerator) / iv.mpf(hi.denominator)
        out = cls.__new__(cls)
        out._iv = iv.mpf([lo, hi])
        out._lo = None
        out._hi = None
        return out

    # -- exact endpoint access -----------------------------------------

    @property
    def lo(self) -> Fraction:
        """Exact lower endpoint as a rational (endpoints are binary floats)."""
        if self._lo is None:
            self._lo = _raw_to_fraction(self._iv._mpi_[0])
        return self._lo

    @property
    def hi(self) -> Fraction:
        if self._hi is None:
            self._hi = _raw_to_fraction(self._iv._mpi_[1])
        return self._hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.hi + self.lo) / 2

    def float_bounds(self) -> tuple[float, float]:
        """Endpoints as doubles, rounded *outward* (for reports only)."""
        lo_f = float(self.lo)
        hi_f = float(self.hi)
        if Fraction(lo_f) > self.lo:
            lo_f = nextafter(lo_f, float("-inf"))
        if Fraction(hi_f) < self.hi:
            hi_f = nextafter(hi_f, float("inf"))
        return lo_f, hi_f

    # -- arithmetic ------------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, Enclosure):
            return other._iv
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            return (iv.mpf(other.numerator) / iv.mpf(other.denominator))
        if isinstance(other, float):
            return iv.mpf(other)
        return None

    def _wrap(self, value) -> "Enclosure":
        out = Enclosure.__new__(Enclosure)
        out._iv = value
        out._lo = None
        out._hi = None
        return out

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else self._wrap(self._iv + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else self._wrap(self._iv - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else self._wrap(o - self._iv)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else self._wrap(self._iv * o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else self._wrap(self._iv / o)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else self._wrap(o / self._iv)

    def __pow__(self, exponent):
        if isinstance(exponent, int):
            return self._wrap(self._iv ** exponent)
        o = self._coerce(exponent)
        return NotImplemented if o is None else self._wrap(self._iv ** o)

    def __neg__(self):
        return self._wrap(-self._iv)

    def __abs__(self):
        return self._wrap(abs(self._iv))

    # -- tri-valued comparisons ------------------------------------------
    #
    # .lt(b) asks: is the real in self certainly < the real in b?
    # True / False only with certainty, else None.  All four are decided
    # exactly on the rational endpoints.

    def lt(self, other) -> Optional[bool]:
        other = as_enclosure(other)
        if self.hi < other.lo:
            return True
        if self.lo >= other.hi:
            return False
        return None

    def le(self, other) -> Optional[bool]:
        other = as_enclosure(other)
        if self.hi <= other.lo:
            return True
        if self.lo > other.hi:
            return False
        return None

    def gt(self, other) -> Optional[bool]:
        other = as_enclosure(other)
        r = self.le(other)
        return None if r is None else not r

    def ge(self, other) -> Optional[bool]:
        other = as_enclosure(other)
        r = self.lt(other)
        return None if r is None else not r

    def encloses(self, x) -> bool:
        """Exact test: does the interval [lo, hi] contain the rational x?"""
        x = Fraction(x)
        return self.lo <= x <= self.hi

    def is_subset_of(self, other: "Enclosure") -> bool:
        return self.lo >= other.lo and self.hi <= other.hi

    def intersects(self, other: "Enclosure") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    # -- structural equality (same endpoints), usable for dedup ----------

    def __eq__(self, other):
        if not isinstance(other, Enclosure):
            return NotImplemented
        return self.lo == other.lo and self.hi == other.hi

    def __hash__(self):
        return hash((self.lo, self.hi))

    def __repr__(self):
        return f"Enclosure({iv.nstr(self._iv, 20)})"

    def str_digits(self, digits: int = 20) -> str:
        return iv.nstr(self._iv, digits)


def as_enclosure(x) -> Enclosure:
    """Coerce int / Fraction / decimal string / Enclosure to an Enclosure."""
    return x if isinstance(x, Enclosure) else Enclosure(x)


def enc_min(*xs: Enclosure) -> Enclosure:
    """Enclosure of min(x_1, ..., x_n) for reals x_i enclosed by xs."""
    lo = min(x.lo for x in xs)
    hi = min(x.hi for x in xs)
    return Enclosure.from_endpoints(lo, hi)


def enc_max(*xs: Enclosure) -> Enclosure:
    lo = max(x.lo for x in xs)
    hi = max(x.hi for x in xs)
    return Enclosure.from_endpoints(lo, hi)


def enc_log(x, base=None) -> Enclosure:
    x = as_enclosure(x)
    out = Enclosure.__new__(Enclosure)
    out._iv = iv.log(x._iv) if base is None else iv.log(x._iv) / iv.log(as_enclosure(base)._iv)
    out._lo = None
    out._hi = None
    return out


def membership(x: Enclosure, lo: Enclosure, hi: Enclosure) -> Optional[bool]:
    """Certified membership of the real x in the interval [lo, hi].

    lo and hi are themselves enclosures of the (possibly irrational)
    interval endpoints.  True means: for every admissible choice of the
    endpoints, x surely lies inside.  False means x surely lies outside.
    None otherwise (fail-closed for callers that count).
    """
    x = as_enclosure(x)
    if x.lo >= lo.hi and x.hi <= hi.lo:
        return True
    if x.hi < lo.lo or x.lo > hi.hi:
        return False
    return None


# ======================================================================
# k-Bonacci roots
# ======================================================================

@dataclass(frozen=True)
class BonacciRoot:
    """The unique root in (1, 2) of x^k = x^(k-1) + ... + x + 1.

    `value` is a certified enclosure; `bracket` the exact dyadic bisection
    bracket it came from, kept for exact downstream sign arguments.
    """
    k: int
    value: Enclosure
    bracket: tuple[Fraction, Fraction]


def characteristic_sign(k: int, x: Fraction) -> int:
    """Exact sign of x^(k+1) - 2 x^k + 1 at a rational point.

    This form has no cancellation blow-up: with x = n/d the sign equals
    sign(n^k (n - 2d) + d^(k+1)), a pure integer computation.
    """
    n, d = x.numerator, x.denominator
    v = n ** k * (n - 2 * d) + d ** (k + 1)
    return (v > 0) - (v < 0)


@lru_cache(maxsize=None)
def _root_bracket(k: int, precision_bits: int) -> tuple[Fraction, Fraction]:
    # On [3/2, 2] the polynomial x^(k+1) - 2x^k + 1 changes sign exactly
    # once, at the root we want: it is negative at 3/2 (value 1 - x^k(2-x)
    # with x^k(2-x) > 1 there for every k >= 2) and equals +1 at x = 2.
    lo, hi = Fraction(3, 2), Fraction(2)
    assert characteristic_sign(k, lo) < 0
    target = Fraction(1, 2 ** (precision_bits + 2))
    while hi - lo > target:
        mid = (lo + hi) / 2
        s = characteristic_sign(k, mid)
        if s < 0:
            lo = mid
        elif s > 0:
            hi = mid
        else:  # rational root impossible for k >= 2, but be total
            return (mid, mid)
    return (lo, hi)


def bonacci_root(k: int, precision_bits: Optional[int] = None) -> BonacciRoot:
    """Certified enclosure of the k-Bonacci base (k = 2: the golden ratio).

    The returned enclosure has width <= 2^(-precision_bits) (default: the
    working precision) and provably contains the unique root in (1, 2):
    the characteristic polynomial changes sign across the bracket, checked
    in exact integer arithmetic.
    """
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    bits = iv.prec if precision_bits is None else precision_bits
    if bits < 64:
        raise ValueError(f"precision_bits must be >= 64, got {bits}")
    lo, hi = _root_bracket(k, bits)
    with precision(bits + 16):
        value = Enclosure.from_endpoints(lo, hi)
    return BonacciRoot(k=k, value=value, bracket=(lo, hi))


# ======================================================================
# projections of digit sequences
# ======================================================================

def _seq_parts(seq) -> tuple[tuple, tuple]:
    """Duck-typed (preperiod, period) digit tuples from seq.

    Accepts anything with .preperiod / .period (each a word or tuple),
    anything with .digits (a finite word, implicitly padded with 0^inf),
    or a bare iterable of digits.
    """
    if hasattr(seq, "preperiod") and hasattr(seq, "period"):
        pre, per = seq.preperiod, seq.period
        pre = tuple(pre.digits) if hasattr(pre, "digits") else tuple(pre)
        per = tuple(per.digits) if hasattr(per, "digits") else tuple(per)
        return pre, per
    if hasattr(seq, "digits"):
        return tuple(seq.digits), ()
    return tuple(seq), ()


def _horner(digits: tuple, q: Enclosure) -> Enclosure:
    # sum_{i=1..n} d_i q^(-i), evaluated back to front, one division per digit
    acc = iv.mpf(0)
    qi = q._iv
    for d in reversed(digits):
        acc = (acc + d) / qi
    out = Enclosure.__new__(Enclosure)
    out._iv = acc
    out._lo = None
    out._hi = None
    return out


def pi_q(seq, q) -> Enclosure:
    """Certified value of a digit sequence in base q:  sum_j d_j q^(-j).

    `seq` may be a finite word (padded with 0^inf) or an eventually periodic
    sequence with preperiod u and period v, evaluated in closed form as

        value(u) + q^(-|u|) * value(v) / (1 - q^(-|v|)).

    Digits may come from {-1, 0, 1}; the result always lies within
    [-1/(q-1), 1/(q-1)].
    """
    q = as_enclosure(q)
    pre, per = _seq_parts(seq)
    for d in pre + per:
        if d not in (-1, 0, 1):
            raise ValueError(f"digit {d!r} outside {{-1, 0, 1}}")
    acc = _horner(pre, q)
    if per:
        pv = _horner(per, q)
        acc = acc + q ** (-len(pre)) * pv / (1 - q ** (-len(per)))
    return acc


def projection_gap(q1, q2, seq) -> Enclosure:
    """|pi_{q1}(seq) - pi_{q2}(seq)|, sanity-checked against the a-priori
    bound |q1 - q2| / ((q1 - 1)(q2 - 1)).

    Returns the computed difference.  A *certified* violation of the bound
    would mean a broken invariant somewhere upstream and raises.
    """
    q1, q2 = as_enclosure(q1), as_enclosure(q2)
    diff = abs(pi_q(seq, q1) - pi_q(seq, q2))
    bound = abs(q1 - q2) / ((q1 - 1) * (q2 - 1))
    if diff.gt(bound) is True:
        raise ArithmeticError(
            f"projection difference {diff!r} certified above its bound {bound!r}"
        )
    return diff
