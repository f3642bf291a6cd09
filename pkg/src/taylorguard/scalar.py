"""Interval scalars on top of MPFR with outward rounding.

A :class:`Scalar` is a closed interval ``[lo, hi]`` whose endpoints are
``gmpy2.mpfr`` values.  Every operation rounds the lower endpoint down and
the upper endpoint up, so the exact result of the mathematical operation is
always contained in the returned interval.

The working precision is ambient: it lives in a context variable set by
:func:`working_precision`, so independent threads (and independent solves)
never share it.  When a decision needed for control flow cannot be made at
the current precision, callers raise :class:`PrecisionExhausted`; the solver
catches it and restarts the whole computation with more bits (see
:func:`next_precision`).
"""

from __future__ import annotations

import contextlib
import contextvars
import enum
import math
import re
from fractions import Fraction
from typing import Iterator, Optional, Union

import gmpy2
from gmpy2 import mpfr, mpq

DEFAULT_PRECISION = 64
GUARD_BITS = 10

Number = Union[int, Fraction, "Scalar"]


class PrecisionExhausted(ArithmeticError):
    """An enclosure was too wide to decide something the algorithm needs."""


class EnclosureError(ArithmeticError):
    """An operation was applied outside its domain (e.g. division by an
    enclosure that contains zero)."""


class Trilean(enum.Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"

    def __bool__(self) -> bool:
        raise TypeError("Trilean has no truth value; compare against Trilean.YES")


YES, NO, UNKNOWN = Trilean.YES, Trilean.NO, Trilean.UNKNOWN


class _Rounding:
    __slots__ = ("bits", "down", "up", "near")

    def __init__(self, bits: int) -> None:
        if bits < 2:
            raise ValueError(f"precision must be at least 2 bits, got {bits}")
        self.bits = bits
        self.down = gmpy2.context(precision=bits, round=gmpy2.RoundDown)
        self.up = gmpy2.context(precision=bits, round=gmpy2.RoundUp)
        self.near = gmpy2.context(precision=bits)


_active: contextvars.ContextVar[_Rounding] = contextvars.ContextVar(
    "taylorguard_rounding", default=_Rounding(DEFAULT_PRECISION)
)


@contextlib.contextmanager
def working_precision(bits: int) -> Iterator[int]:
    """Run the enclosed block with ``bits`` bits of mantissa."""
    token = _active.set(_Rounding(bits))
    try:
        yield bits
    finally:
        _active.reset(token)


def precision() -> int:
    return _active.get().bits


def next_precision(bits: int) -> int:
    """Precision for the next restart after ``bits`` turned out too small."""
    return max(math.ceil(1.5 * bits), bits + 32)


_ZERO = mpfr(0)
_MPFR = type(_ZERO)


def _exact_mpfr(value) -> mpfr:
    if isinstance(value, int):
        return mpfr(value, max(2, value.bit_length()))
    if isinstance(value, float):
        return mpfr(value, 53)
    raise TypeError(f"expected mpfr, int or float endpoint, got {type(value).__name__}")


def _round_rational(q: mpq, ctx) -> mpfr:
    with ctx:
        return mpfr(q)


class Scalar:
    """Closed interval ``[lo, hi]`` enclosing an exact real number."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None) -> None:
        if hi is None:
            hi = lo
        if not isinstance(lo, _MPFR):
            lo = _exact_mpfr(lo)
        if not isinstance(hi, _MPFR):
            hi = _exact_mpfr(hi)
        if not lo <= hi:
            raise ValueError(f"invalid interval [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi

    # -- construction --------------------------------------------------

    @classmethod
    def enclose(cls, value: Union[Number, float, str]) -> "Scalar":
        """Tightest enclosure of an exact value at the working precision.

        Floats are taken at their exact binary value; strings are parsed
        as decimals (see :func:`parse_decimal`).
        """
        if isinstance(value, Scalar):
            return value
        if isinstance(value, str):
            return parse_decimal(value)
        if isinstance(value, float):
            if not math.isfinite(value):
                raise ValueError(f"cannot enclose non-finite float {value}")
            value = Fraction(value)
        if isinstance(value, int):
            if value.bit_length() <= precision():
                return cls(_exact_mpfr(value))
            value = Fraction(value)
        if isinstance(value, Fraction):
            rnd = _active.get()
            q = mpq(value.numerator, value.denominator)
            return cls(_round_rational(q, rnd.down), _round_rational(q, rnd.up))
        raise TypeError(f"cannot enclose {type(value).__name__}")

    @classmethod
    def hull(cls, *values: "Scalar") -> "Scalar":
        return cls(min(v.lo for v in values), max(v.hi for v in values))

    # -- inspection ----------------------------------------------------

    @property
    def width(self) -> mpfr:
        return _active.get().up.sub(self.hi, self.lo)

    @property
    def mid(self) -> mpfr:
        return _active.get().near.div(_active.get().near.add(self.lo, self.hi), 2)

    def is_point(self) -> bool:
        return self.lo == self.hi

    def lower(self) -> "Scalar":
        """Point interval at the lower endpoint."""
        return Scalar(self.lo)

    def upper(self) -> "Scalar":
        return Scalar(self.hi)

    def bounds(self) -> tuple[Fraction, Fraction]:
        """Exact rational endpoints."""
        return (Fraction(*self.lo.as_integer_ratio()),
                Fraction(*self.hi.as_integer_ratio()))

    def contains(self, value: Union[int, Fraction, "Scalar"]) -> bool:
        if isinstance(value, Scalar):
            return self.lo <= value.lo and value.hi <= self.hi
        lo, hi = self.bounds()
        return lo <= value <= hi

    def overlaps(self, other: "Scalar") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def is_positive(self) -> bool:
        return self.lo > 0

    def is_negative(self) -> bool:
        return self.hi < 0

    def __repr__(self) -> str:
        if self.is_point():
            return f"Scalar({float(self.lo)!r})"
        return f"Scalar([{float(self.lo)!r}, {float(self.hi)!r}])"

    # -- arithmetic ----------------------------------------------------

    def __neg__(self) -> "Scalar":
        rnd = _active.get()
        return _mk(rnd.down.minus(self.hi), rnd.up.minus(self.lo))

    def __pos__(self) -> "Scalar":
        return self

    def __abs__(self) -> "Scalar":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return _mk(_ZERO, max(_active.get().up.minus(self.lo), self.hi))

    def __add__(self, other: Number) -> "Scalar":
        other = _coerce(other)
        rnd = _active.get()
        return _mk(rnd.down.add(self.lo, other.lo), rnd.up.add(self.hi, other.hi))

    __radd__ = __add__

    def __sub__(self, other: Number) -> "Scalar":
        other = _coerce(other)
        rnd = _active.get()
        return _mk(rnd.down.sub(self.lo, other.hi), rnd.up.sub(self.hi, other.lo))

    def __rsub__(self, other: Number) -> "Scalar":
        return _coerce(other) - self

    def __mul__(self, other: Number) -> "Scalar":
        other = _coerce(other)
        rnd = _active.get()
        dn, up = rnd.down.mul, rnd.up.mul
        a, b, c, d = self.lo, self.hi, other.lo, other.hi
        if a >= 0:
            if c >= 0:
                return _mk(dn(a, c), up(b, d))
            if d <= 0:
                return _mk(dn(b, c), up(a, d))
            return _mk(dn(b, c), up(b, d))
        if b <= 0:
            if c >= 0:
                return _mk(dn(a, d), up(b, c))
            if d <= 0:
                return _mk(dn(b, d), up(a, c))
            return _mk(dn(a, d), up(a, c))
        if c >= 0:
            return _mk(dn(a, d), up(b, d))
        if d <= 0:
            return _mk(dn(b, c), up(a, c))
        return _mk(min(dn(a, d), dn(b, c)), max(up(a, c), up(b, d)))

    __rmul__ = __mul__

    def __truediv__(self, other: Number) -> "Scalar":
        other = _coerce(other)
        if other.contains_zero():
            raise EnclosureError(f"division by an enclosure containing zero: {other!r}")
        rnd = _active.get()
        dn, up = rnd.down.div, rnd.up.div
        a, b, c, d = self.lo, self.hi, other.lo, other.hi
        if c > 0:
            lo = dn(a, d) if a >= 0 else dn(a, c)
            hi = up(b, c) if b >= 0 else up(b, d)
        else:
            lo = dn(b, d) if b >= 0 else dn(b, c)
            hi = up(a, c) if a >= 0 else up(a, d)
        return _mk(lo, hi)

    def __rtruediv__(self, other: Number) -> "Scalar":
        return _coerce(other) / self

    def __pow__(self, k: int) -> "Scalar":
        if not isinstance(k, int) or k < 0:
            raise TypeError("only nonnegative integer powers are supported")
        if k == 0:
            return Scalar(1)
        if k == 1:
            return self
        rnd = _active.get()
        base = abs(self) if k % 2 == 0 else self
        return _mk(rnd.down.pow(base.lo, k), rnd.up.pow(base.hi, k))

    def sqrt(self) -> "Scalar":
        """Square root; the exact argument is assumed nonnegative, so a
        lower endpoint below zero (from rounding) is clamped."""
        if self.hi < 0:
            raise EnclosureError(f"square root of a negative enclosure {self!r}")
        rnd = _active.get()
        lo = rnd.down.sqrt(self.lo) if self.lo > 0 else _ZERO
        return _mk(lo, rnd.up.sqrt(self.hi))

    def scale2(self, e: int) -> "Scalar":
        """Multiply by ``2**e`` (exact)."""
        rnd = _active.get()
        return _mk(rnd.down.mul_2exp(self.lo, e), rnd.up.mul_2exp(self.hi, e))


def _mk(lo: mpfr, hi: mpfr) -> Scalar:
    s = _new(Scalar)
    s.lo = lo
    s.hi = hi
    return s


_new = object.__new__


def _coerce(x) -> Scalar:
    if isinstance(x, Scalar):
        return x
    return Scalar.enclose(x)


def enclose(value) -> Scalar:
    return Scalar.enclose(value)


def zero() -> Scalar:
    return Scalar(_ZERO)


def symmetric(r: Scalar) -> Scalar:
    """The interval ``[-r.hi, r.hi]``."""
    return _mk(_active.get().down.minus(r.hi), r.hi)


def smin(x: Scalar, y: Scalar) -> Scalar:
    return Scalar(min(x.lo, y.lo), min(x.hi, y.hi))


def smax(x: Scalar, y: Scalar) -> Scalar:
    return Scalar(max(x.lo, y.lo), max(x.hi, y.hi))


def sqrt(x: Scalar) -> Scalar:
    return x.sqrt()


def power_of_two(e: int) -> Scalar:
    return Scalar(_active.get().near.mul_2exp(mpfr(1), e))


# -- three-valued comparisons ------------------------------------------


def compare_lt(x: Scalar, y: Scalar) -> Trilean:
    """Decide ``x < y`` where possible."""
    if x.hi < y.lo:
        return YES
    if x.lo > y.hi:
        return NO
    return UNKNOWN


def multivalued_negative(x: Scalar, k: int) -> Trilean:
    """The overlapping test ``x < -2**-k`` (YES) versus ``x > -2**(1-k)`` (NO).

    For any exact real at least one branch holds, so for a point value the
    answer is never UNKNOWN once the enclosure is narrow enough.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if x.hi < -mpq(1, 1 << k):
        return YES
    if x.lo > -mpq(2, 1 << k):
        return NO
    return UNKNOWN


def certify(answer: Trilean, what: str = "comparison") -> bool:
    """Turn a trilean into a bool, escalating precision on UNKNOWN."""
    if answer is UNKNOWN:
        raise PrecisionExhausted(f"{what} undecidable at {precision()} bits")
    return answer is YES


# -- decimal I/O ---------------------------------------------------------

_DECIMAL = re.compile(r"^\s*([+-]?)(\d+)(?:\.(\d*))?(?:[eE]([+-]?\d+))?\s*$"
                      r"|^\s*([+-]?)\.(\d+)(?:[eE]([+-]?\d+))?\s*$")


def parse_decimal_exact(text: str) -> Fraction:
    """Exact rational value of a decimal literal such as ``-1.25e-3``."""
    m = _DECIMAL.match(text)
    if m is None:
        raise ValueError(f"not a decimal number: {text!r}")
    if m.group(2) is not None:
        sign, whole, frac, exp = m.group(1), m.group(2), m.group(3) or "", m.group(4)
    else:
        sign, whole, frac, exp = m.group(5), "0", m.group(6), m.group(7)
    value = Fraction(int(whole + frac), 10 ** len(frac))
    if exp:
        value *= Fraction(10) ** int(exp)
    return -value if sign == "-" else value


def parse_decimal(text: str) -> Scalar:
    """One-ulp enclosure of a decimal literal at the working precision."""
    return Scalar.enclose(parse_decimal_exact(text))


def to_decimal(x: Scalar, digits: int) -> Optional[str]:
    """Leading decimal digits (``digits`` after the point) of ``x``.

    Returns ``None`` when the enclosure is wider than one unit in the last
    place, meaning more precision is needed.  Otherwise the returned string
    is the truncation (toward zero) of the endpoint farther from zero, and
    the enclosed value lies within one ulp of it.
    """
    if digits < 1:
        raise ValueError("digits must be positive")
    lo, hi = x.bounds()
    scale = 10 ** digits
    if (hi - lo) * scale > 1:
        return None
    far = hi if abs(hi) >= abs(lo) else lo
    mag = math.floor(abs(far) * scale)
    sign = "-" if far < 0 and mag else ""
    whole, frac = divmod(mag, scale)
    return f"{sign}{whole}.{frac:0{digits}d}"


def best_decimal(x: Scalar, max_digits: int) -> Optional[str]:
    """Longest guaranteed decimal with at most ``max_digits`` digits."""
    lo, hi = x.bounds()
    width = hi - lo
    digits = max_digits
    if width > 0:
        # largest d with width * 10**d <= 1
        log_width = math.log10(width.numerator) - math.log10(width.denominator)
        digits = min(max_digits, math.floor(-log_width) + 1)
        while digits >= 1 and width * 10 ** digits > 1:
            digits -= 1
    if digits < 1:
        return None
    return to_decimal(x, digits)
