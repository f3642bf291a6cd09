"""Sparse multinomial flow functions ``F_v(t, x_1, ..., x_d)``.

Each component is a mapping from an exponent tuple ``(k, i_1, ..., i_d)``
to a coefficient, so ``{(0, 0, 1): 1}`` is the monomial ``x_2``.
Coefficients may be exact (``int``/``Fraction``/decimal string) or
:class:`~taylorguard.scalar.Scalar` enclosures; :meth:`PolyFlow.enclose`
turns every coefficient into an enclosure at the working precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .scalar import Scalar, enclose, parse_decimal_exact, zero

Coefficient = Union[int, Fraction, str, Scalar]
Exponent = tuple  # (k, i_1, ..., i_d)


@dataclass(frozen=True)
class Monomial:
    c: Coefficient
    k: int
    i: tuple[int, ...]

    @property
    def exponent(self) -> Exponent:
        return (self.k, *self.i)


@dataclass(frozen=True)
class State:
    """A point ``(t, w)`` of the extended state space.

    Fields may hold exact values (``int``, ``Fraction``, decimal strings);
    :meth:`enclose` converts them at the working precision.
    """

    t: Coefficient
    w: tuple

    def __post_init__(self) -> None:
        object.__setattr__(self, "w", tuple(self.w))

    def enclose(self) -> "State":
        return State(enclose(self.t), tuple(enclose(x) for x in self.w))

    @property
    def d(self) -> int:
        return len(self.w)

    def point(self) -> tuple[Scalar, ...]:
        """The state as an enclosed vector ``(t, w_1, ..., w_d)``."""
        return (enclose(self.t), *(enclose(x) for x in self.w))


class PolyFlow:
    """Flow ``dy/dt = F(t, y)`` with polynomial components."""

    __slots__ = ("d", "mu", "components")

    def __init__(self, components: Sequence[Mapping[Exponent, Coefficient]],
                 d: int | None = None, mu: int | None = None) -> None:
        if d is None:
            d = len(components)
        if d < 1 or len(components) != d:
            raise ValueError(f"need {d} components, got {len(components)}")
        comps = []
        top = 0
        for v, comp in enumerate(components):
            terms = {}
            for exps, c in comp.items():
                exps = tuple(int(e) for e in exps)
                if len(exps) != d + 1:
                    raise ValueError(
                        f"component {v + 1}: exponent {exps} should have {d + 1} entries")
                if min(exps) < 0:
                    raise ValueError(f"component {v + 1}: negative exponent in {exps}")
                terms[exps] = parse_decimal_exact(c) if isinstance(c, str) else c
                top = max(top, *exps)
            comps.append(terms)
        if mu is None:
            mu = top
        elif top > mu:
            raise ValueError(f"exponent {top} exceeds the degree bound mu={mu}")
        self.d = d
        self.mu = mu
        self.components = tuple(comps)

    @classmethod
    def from_monomials(cls, d: int, components: Sequence[Iterable[Monomial]],
                       mu: int | None = None) -> "PolyFlow":
        comps = []
        for v, monos in enumerate(components):
            terms: dict = {}
            for m in monos:
                if len(m.i) != d:
                    raise ValueError(f"component {v + 1}: x-exponent {m.i} has wrong length")
                if m.exponent in terms:
                    raise ValueError(f"component {v + 1}: duplicate exponent {m.exponent}")
                terms[m.exponent] = m.c
            comps.append(terms)
        return cls(comps, d=d, mu=mu)

    def monomials(self, v: int) -> Iterator[Monomial]:
        for (k, *i), c in self.components[v].items():
            yield Monomial(c, k, tuple(i))

    def enclose(self) -> "PolyFlow":
        """Same flow with every coefficient enclosed at the working precision."""
        return PolyFlow([{e: enclose(c) for e, c in comp.items()} for comp in self.components],
                        d=self.d, mu=self.mu)

    def __repr__(self) -> str:
        return f"PolyFlow(d={self.d}, mu={self.mu}, terms={[len(c) for c in self.components]})"


def _check_dim(F: PolyFlow, s: State) -> None:
    if s.d != F.d:
        raise ValueError(f"state has dimension {s.d}, flow has {F.d}")


def _powers(x: Scalar, top: int) -> list[Scalar]:
    return [Scalar(1)] + [x ** n for n in range(1, top + 1)]


def evaluate(F: PolyFlow, s: State) -> tuple[Scalar, ...]:
    """Enclosure of ``F(t, w)``."""
    _check_dim(F, s)
    pw = [_powers(x, F.mu) for x in s.point()]
    out = []
    for comp in F.components:
        acc = zero()
        for exps, c in comp.items():
            term = enclose(c)
            for var, e in enumerate(exps):
                if e:
                    term = term * pw[var][e]
            acc = acc + term
        out.append(acc)
    return tuple(out)


def bound_U(F: PolyFlow, s: State, delta, eps) -> Scalar:
    """Upper bound of ``max_v |F_v|`` on the complex box around ``s``.

    The box is ``|t - t0| <= delta``, ``|x_j - w_j| <= eps``; every monomial
    is bounded by the triangle inequality.  The result is a point enclosure.
    """
    _check_dim(F, s)
    t, *w = s.point()
    radii = [abs(t) + enclose(delta)] + [abs(x) + enclose(eps) for x in w]
    pw = [_powers(r.upper(), F.mu) for r in radii]
    best = zero()
    for comp in F.components:
        acc = zero()
        for exps, c in comp.items():
            term = abs(enclose(c)).upper()
            for var, e in enumerate(exps):
                if e:
                    term = term * pw[var][e]
            acc = acc + term
        if acc.hi > best.hi:
            best = acc.upper()
    return best


def recenter(F: PolyFlow, s: State) -> PolyFlow:
    """``E(t, x) = F(t + t0, x + w)`` as a polynomial in ``(t, x)``.

    Each variable is shifted in turn by binomial expansion; shifts by an
    exact zero are skipped so the monomial structure is preserved.
    """
    _check_dim(F, s)
    shifts = s.point()
    comps = []
    for comp in F.components:
        terms = {e: enclose(c) for e, c in comp.items()}
        for var, shift in enumerate(shifts):
            if shift.is_point() and shift.lo == 0:
                continue
            pw = _powers(shift, F.mu)
            shifted: dict = {}
            for exps, c in terms.items():
                e = exps[var]
                for r in range(e + 1):
                    key = exps[:var] + (r,) + exps[var + 1:]
                    term = c * (comb(e, r) * pw[e - r]) if e != r else c
                    shifted[key] = shifted[key] + term if key in shifted else term
            terms = shifted
        comps.append(terms)
    return PolyFlow(comps, d=F.d, mu=F.mu)


def is_autonomous_linear(F: PolyFlow) -> bool:
    """True when no monomial contains ``t`` and every monomial is of total
    x-degree at most one (decided from the exponents alone)."""
    return all(exps[0] == 0 and sum(exps[1:]) <= 1
               for comp in F.components for exps in comp)
