"""Taylor coefficients of the solution of ``dy/dt = F(t, y)``.

Two constructions are provided:

* :func:`series_linear` for autonomous affine flows, where the coefficient
  of ``t**(l+1)`` only depends on the coefficients of order ``l``;
* :func:`series_general` for any multinomial flow that has been re-centred
  so that the initial value is the zero vector.  It needs the coefficients
  of the powers ``y_v(t)**i``, which are cached per variable.

Coefficients are computed lazily; :meth:`SeriesSystem.extend` appends new
orders and never touches those already computed.
"""

from __future__ import annotations

from typing import Sequence

from .flow import PolyFlow, is_autonomous_linear
from .scalar import Scalar, enclose, zero


def _is_zero(x: Scalar) -> bool:
    return x.lo == 0 and x.hi == 0


class SeriesSystem:
    """Coefficients ``a[v][n]`` of ``y_v(t) = base_v + sum_n a[v][n] t**n``."""

    def __init__(self, flow: PolyFlow, initial: Sequence, *, linear: bool,
                 base: Sequence | None = None) -> None:
        self.flow = flow
        self.d = flow.d
        self.linear = linear
        self.base = tuple(enclose(b) for b in base) if base is not None else (zero(),) * self.d
        self.a: list[list[Scalar]] = [[enclose(w)] for w in initial]
        self.zero_start = all(_is_zero(row[0]) for row in self.a)
        self.max_used_order = 0
        # pow_cache[v][i] holds a^(i)_{v, n} for i >= 2; rows 0 and 1 are implicit
        self.pow_cache: list[dict[int, list[Scalar]]] = [{} for _ in range(self.d)]
        self._one = [Scalar(1)]
        if linear:
            self._linear_terms = []
            for comp in flow.components:
                const, lin = zero(), []
                for exps, c in comp.items():
                    xs = exps[1:]
                    if sum(xs) == 0:
                        const = const + enclose(c)
                    else:
                        lin.append((xs.index(1), enclose(c)))
                self._linear_terms.append((const, lin))
        else:
            self._setup_general()

    # -- bookkeeping ---------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.a[0]) - 1

    def coefficients(self, v: int) -> list[Scalar]:
        return self.a[v]

    def power_row(self, v: int, i: int) -> list[Scalar]:
        """Coefficients of ``y_v(t)**i`` computed so far (without ``base``)."""
        cached = self.pow_cache[v].get(i)
        if cached is not None:
            return cached
        if i == 0:
            return self._one
        if i == 1:
            return self.a[v]
        raise KeyError(f"power {i} of component {v} is not tracked")

    def extend(self, new_order: int) -> "SeriesSystem":
        if new_order < self.order:
            raise ValueError(f"cannot shrink series of order {self.order} to {new_order}")
        step = self._next_linear if self.linear else self._next_general
        while self.order < new_order:
            step()
        return self

    # -- autonomous affine flows ---------------------------------------

    def _next_linear(self) -> None:
        ell = self.order
        new = []
        for const, lin in self._linear_terms:
            acc = const if ell == 0 else zero()
            for j, c in lin:
                acc = acc + c * self.a[j][ell]
            new.append(acc / (ell + 1))
        for row, x in zip(self.a, new):
            row.append(x)

    # -- general multinomial flows -------------------------------------

    def _setup_general(self) -> None:
        if not self.zero_start:
            raise ValueError("general recursion needs a zero initial vector; recenter first")
        top = [1] * self.d
        self._terms = []
        keys = set()
        for comp in self.flow.components:
            terms = []
            for exps, c in comp.items():
                k, xs = exps[0], tuple(exps[1:])
                terms.append((k, xs, enclose(c)))
                keys.add(xs)
                for j, e in enumerate(xs):
                    top[j] = max(top[j], e)
            self._terms.append(terms)
        for v in range(self.d):
            for i in range(2, top[v] + 1):
                self.pow_cache[v][i] = [zero()]
        # products of power series, keyed by partial exponent tuples
        self._products: dict[tuple, list[Scalar]] = {}
        self._recipes: dict[tuple, tuple] = {}
        for xs in sorted(keys):
            self._plan(xs)

    def _plan(self, xs: tuple) -> None:
        nz = [j for j, e in enumerate(xs) if e]
        if len(nz) < 2 or xs in self._recipes:
            return
        last = nz[-1]
        head = xs[:last] + (0,) * (self.d - last)
        self._plan(head)
        self._recipes[xs] = (head, last, xs[last])
        self._products[xs] = [zero()]

    def _product(self, xs: tuple) -> list[Scalar]:
        nz = [j for j, e in enumerate(xs) if e]
        if not nz:
            return self._one
        if len(nz) == 1:
            return self.power_row(nz[0], xs[nz[0]])
        return self._products[xs]

    def _next_general(self) -> None:
        ell = self.order
        if ell >= len(self._one):
            self._one.append(zero())
        if ell > 0:
            for v in range(self.d):
                for i in sorted(self.pow_cache[v]):
                    self.pow_cache[v][i].append(power_step(self, v, i - 1, ell))
            for xs in sorted(self._recipes, key=lambda key: sum(1 for e in key if e)):
                head, var, e = self._recipes[xs]
                left, right = self._product(head), self.power_row(var, e)
                lo_left = sum(head)
                acc = zero()
                for j in range(lo_left, ell - e + 1):
                    x, y = left[j], right[ell - j]
                    if not (_is_zero(x) or _is_zero(y)):
                        acc = acc + x * y
                self._products[xs].append(acc)
        new = []
        for terms in self._terms:
            acc = zero()
            for k, xs, c in terms:
                if k > ell or sum(xs) > ell - k:
                    continue
                q = self._product(xs)[ell - k]
                if not _is_zero(q):
                    acc = acc + c * q
            new.append(acc / (ell + 1))
        for row, x in zip(self.a, new):
            row.append(x)


def power_step(sys: SeriesSystem, v: int, i: int, n: int) -> Scalar:
    """Coefficient ``n`` of ``y_v**(i+1)`` from those of ``y_v`` and ``y_v**i``.

    Needs ``a[v][j]`` and the power row ``i`` up to index ``n``.
    """
    a, prev = sys.a[v], sys.power_row(v, i)
    first = 1 if sys.zero_start else 0
    last = n - i if sys.zero_start else n
    acc = zero()
    for j in range(first, last + 1):
        x, y = a[j], prev[n - j]
        if not (_is_zero(x) or _is_zero(y)):
            acc = acc + x * y
    return acc


def power_series(a: Sequence, i: int, n: int) -> list[Scalar]:
    """Coefficients ``0..n`` of ``(sum_j a_j t**j)**i`` by repeated ``power_step``."""
    flow = PolyFlow([{}])
    sys = SeriesSystem(flow, [a[0]], linear=True)
    sys.a[0] = [enclose(x) for x in a] + [zero()] * max(0, n + 1 - len(a))
    sys.zero_start = _is_zero(sys.a[0][0])
    row = [Scalar(1)] + [zero()] * n
    for power in range(i):
        sys.pow_cache[0][power] = row
        row = [power_step(sys, 0, power, m) for m in range(n + 1)]
    return row


def series_general(E: PolyFlow, order: int = 0, base: Sequence | None = None) -> SeriesSystem:
    """Series of ``dz/dt = E(t, z)``, ``z(0) = 0``, up to ``order``.

    ``base`` is added when the series is summed, so passing the original
    initial value yields the solution of the un-shifted problem.
    """
    sys = SeriesSystem(E, [0] * E.d, linear=False, base=base)
    return sys.extend(order)


def series_linear(F: PolyFlow, w0: Sequence, order: int = 0) -> SeriesSystem:
    """Series of ``dy/dt = F(y)``, ``y(0) = w0``, for autonomous affine ``F``."""
    if not is_autonomous_linear(F):
        raise ValueError("series_linear needs an autonomous flow of degree at most one")
    if len(w0) != F.d:
        raise ValueError(f"initial vector has length {len(w0)}, flow has dimension {F.d}")
    sys = SeriesSystem(F, w0, linear=True)
    return sys.extend(order)


def extend(sys: SeriesSystem, new_order: int) -> SeriesSystem:
    return sys.extend(new_order)
