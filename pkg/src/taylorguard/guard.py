"""Guard sets with closed-form signed Euclidean distance.

Points live in the extended state space ``(t, x_1, ..., x_d)``.  The signed
distance is positive outside the guard, negative in its interior and zero
on its border; :func:`distance` clips it at zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .scalar import Scalar, enclose, smax, zero


@dataclass(frozen=True)
class HalfSpace:
    """``G = {xi : <a, xi> >= b}``."""

    a: tuple
    b: object
    _a: tuple = field(init=False, repr=False, compare=False)
    _b: Scalar = field(init=False, repr=False, compare=False)
    norm: Scalar = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", tuple(self.a))
        a = tuple(enclose(x) for x in self.a)
        if all(x.contains_zero() for x in a):
            raise ValueError("half-space normal must have a nonzero component")
        sq = zero()
        for x in a:
            sq = sq + x ** 2
        object.__setattr__(self, "_a", a)
        object.__setattr__(self, "_b", enclose(self.b))
        object.__setattr__(self, "norm", sq.sqrt())

    @property
    def dim(self) -> int:
        return len(self.a)

    def enclose(self) -> "HalfSpace":
        return HalfSpace(self.a, self.b)

    def signed_distance(self, xi: Sequence) -> Scalar:
        _check(self.dim, xi)
        dot = zero()
        for ai, x in zip(self._a, xi):
            dot = dot + ai * x
        return (self._b - dot) / self.norm

    def rate_bound(self, U: Scalar) -> Scalar:
        """Bound on ``|d/dt gamma(t, y(t))|`` when every ``|dy_v/dt| <= U``."""
        acc = abs(self._a[0])
        for ai in self._a[1:]:
            acc = acc + abs(ai) * U
        return (acc / self.norm).upper()


@dataclass(frozen=True)
class Ball:
    """Closed Euclidean ball in ``(t, x)``."""

    center: tuple
    radius: object
    _center: tuple = field(init=False, repr=False, compare=False)
    _radius: Scalar = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "center", tuple(self.center))
        r = enclose(self.radius)
        if not r.is_positive():
            raise ValueError("ball radius must be positive")
        object.__setattr__(self, "_center", tuple(enclose(x) for x in self.center))
        object.__setattr__(self, "_radius", r)

    @property
    def dim(self) -> int:
        return len(self.center)

    def enclose(self) -> "Ball":
        return Ball(self.center, self.radius)

    def signed_distance(self, xi: Sequence) -> Scalar:
        _check(self.dim, xi)
        sq = zero()
        for c, x in zip(self._center, xi):
            sq = sq + (enclose(x) - c) ** 2
        return sq.sqrt() - self._radius

    def rate_bound(self, U: Scalar) -> Scalar:
        return (1 + (self.dim - 1) * U ** 2).sqrt().upper()


GuardSpec = HalfSpace | Ball


def _check(dim: int, xi: Sequence) -> None:
    if len(xi) != dim:
        raise ValueError(f"point has {len(xi)} coordinates, guard lives in dimension {dim}")


def time_guard(eta, d: int) -> HalfSpace:
    """The guard ``t >= eta``."""
    return HalfSpace((1,) + (0,) * d, eta)


def signed_distance(g: GuardSpec, xi: Sequence) -> Scalar:
    return g.signed_distance(xi)


def distance(g: GuardSpec, xi: Sequence) -> Scalar:
    return smax(g.signed_distance(xi), zero())
