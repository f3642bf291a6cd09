"""Certified summation of the solution series.

:func:`derive_bounds` turns a flow bound ``U`` on a complex box into a
radius ``R`` on which the solution is analytic and a modulus bound ``M_v``
for each component.  The Cauchy estimate ``|a_n| <= M R**-n`` then bounds
the tail of the series; :func:`eval_series` sums until that tail is below
the requested error and widens the result by it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import gmpy2

from .flow import PolyFlow, State, bound_U
from .scalar import (GUARD_BITS, PrecisionExhausted, Scalar, compare_lt, enclose,
                     power_of_two, precision, smin, symmetric, zero, NO, YES)
from .taylor import SeriesSystem


@dataclass(frozen=True)
class BoundTriple:
    """Flow bound ``U``, validity radius ``R`` and modulus bounds ``M``."""

    U: Scalar
    R: Scalar
    M: tuple[Scalar, ...]


def derive_bounds(F: PolyFlow, s: State, delta, eps) -> BoundTriple:
    delta, eps = enclose(delta), enclose(eps)
    if not (delta.is_positive() and eps.is_positive()):
        raise ValueError("delta and eps must be positive")
    U = bound_U(F, s, delta, eps)
    if U.contains_zero():
        R = delta.lower()
    else:
        R = smin(delta, eps / U).lower()
    M = tuple((abs(w) + R * U).upper() for w in s.point()[1:])
    return BoundTriple(U, R, M)


def truncation_bound(M: Scalar, R: Scalar, z_abs: Scalar, n: int) -> Scalar:
    """Upper bound on ``|sum_{k>n} a_k z**k|`` given ``|a_k| <= M R**-k``."""
    z_abs = abs(enclose(z_abs))
    if z_abs.hi == 0:
        return zero()
    inside = compare_lt(z_abs, R)
    if inside is NO:
        raise ValueError(f"|z| = {z_abs!r} is not inside the radius {R!r}")
    if inside is not YES:
        raise PrecisionExhausted("cannot certify |z| < R")
    ratio = z_abs.upper() / R
    return (M * R / (R - z_abs.upper()) * ratio ** (n + 1)).upper()


def default_target() -> Scalar:
    return power_of_two(-(precision() - GUARD_BITS))


def _log2(x) -> float:
    with gmpy2.context(precision=53):
        return float(gmpy2.log2(x))


def _initial_order(M: Scalar, R: Scalar, z_abs: Scalar, target: Scalar) -> int:
    if M.hi == 0:
        return 0
    lr = _log2(z_abs.hi) - _log2(R.lo)
    if lr >= 0:
        return 0
    gap = _log2(R.lo) - _log2((R - z_abs).lo) if (R - z_abs).lo > 0 else 0.0
    need = _log2(M.hi) + gap - _log2(target.lo)
    return max(0, math.ceil(need / -lr) - 1)


def order_cap(target: Scalar) -> int:
    return 16 * max(1, math.ceil(-_log2(target.lo)))


def eval_series(sys: SeriesSystem, bounds: BoundTriple, z,
                target_err: Optional[Scalar] = None) -> tuple[Scalar, ...]:
    """Enclosures of ``y_v(t0 + z)``, each correct up to the truncation bound.

    The order is the smallest ``n`` whose truncation bound is at most
    ``target_err`` (default ``2**-(p - GUARD_BITS)``) for every component;
    the series is extended as needed.
    """
    z = enclose(z)
    z_abs = abs(z)
    target = enclose(target_err) if target_err is not None else default_target()
    if not target.is_positive():
        raise ValueError("target error must be positive")
    cap = order_cap(target)
    n = 0
    if z_abs.hi > 0:
        n = max(_initial_order(M, bounds.R, z_abs, target) for M in bounds.M)
        while True:
            if n > cap:
                raise PrecisionExhausted(f"series order {n} exceeds the cap {cap}")
            tails = [truncation_bound(M, bounds.R, z_abs, n) for M in bounds.M]
            if all(tail.hi <= target.lo for tail in tails):
                break
            n += 1 + n // 8
    else:
        tails = [zero()] * sys.d
    if n > sys.order:
        sys.extend(n)
    sys.max_used_order = max(sys.max_used_order, n)
    out = []
    for v in range(sys.d):
        a = sys.a[v]
        acc = a[n]
        for k in range(n - 1, -1, -1):
            acc = acc * z + a[k]
        tail = tails[v]
        out.append(sys.base[v] + acc + symmetric(tail))
    return tuple(out)
