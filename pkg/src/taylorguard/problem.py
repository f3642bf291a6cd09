"""JSON problem files.

A problem names a flow, an initial state and one guard::

    {
      "dimension": 2,
      "flow": [
        [{"c": "1", "k": 0, "i": [0, 1]}],
        [{"c": "-1", "k": 0, "i": [1, 0]}, {"c": "0.02", "k": 0, "i": [0, 1]}]
      ],
      "initial": {"t0": "0", "w0": ["0", "1"]},
      "guard": {"type": "halfspace", "a": ["0", "-1", "0"], "b": "2"},
      "options": {"delta": "1", "epsilon": "1"}
    }

Numbers are decimal strings (integers are also accepted) so that values
like ``0.02`` are enclosed rather than rounded to binary.  Guard types are
``halfspace``, ``ball`` and ``time`` (``{"type": "time", "eta": "10"}``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

from .flow import Monomial, PolyFlow, State
from .guard import Ball, GuardSpec, HalfSpace, time_guard
from .scalar import parse_decimal_exact
from .stepper import Budget

_BUDGET_KEYS = ("max_big_steps", "max_small_steps", "max_seconds", "max_bits")


class ProblemError(ValueError):
    """Invalid problem file; the message starts with the offending field."""

    def __init__(self, where: str, msg: str) -> None:
        super().__init__(f"{where}: {msg}")
        self.where = where


@dataclass
class ProblemSpec:
    d: int
    flow: list                      # per component, a list of Monomial
    t0: Fraction
    w0: tuple
    guard: dict                     # the tagged description, values as Fractions
    options: dict = field(default_factory=dict)

    def poly_flow(self) -> PolyFlow:
        return PolyFlow.from_monomials(self.d, self.flow)

    def state(self) -> State:
        return State(self.t0, self.w0)

    def guard_spec(self) -> GuardSpec:
        g = self.guard
        if g["type"] == "halfspace":
            return HalfSpace(g["a"], g["b"])
        if g["type"] == "ball":
            return Ball(g["center"], g["radius"])
        return time_guard(g["eta"], self.d)

    def budget(self) -> Budget:
        kw = {k: self.options[k] for k in _BUDGET_KEYS if k in self.options}
        return Budget(**kw)

    @property
    def delta(self) -> Fraction:
        return self.options.get("delta", Fraction(1))

    @property
    def epsilon(self) -> Fraction:
        return self.options.get("epsilon", Fraction(1))


def _number(x: Any, where: str) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise ProblemError(where, f"expected a decimal string, got {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    try:
        return parse_decimal_exact(x)
    except ValueError:
        raise ProblemError(where, f"not a finite decimal: {x!r}") from None


def _integer(x: Any, where: str, minimum: int = 0) -> int:
    if isinstance(x, bool) or not isinstance(x, int) or x < minimum:
        raise ProblemError(where, f"expected an integer >= {minimum}, got {x!r}")
    return x


def _vector(x: Any, where: str, length: Optional[int] = None) -> tuple:
    if not isinstance(x, list):
        raise ProblemError(where, "expected a list")
    if length is not None and len(x) != length:
        raise ProblemError(where, f"expected {length} entries, got {len(x)}")
    return tuple(_number(v, f"{where}[{j}]") for j, v in enumerate(x))


def _object(x: Any, where: str) -> dict:
    if not isinstance(x, dict):
        raise ProblemError(where, "expected an object")
    return x


def _parse_flow(raw: Any, d: int) -> list:
    if raw == []:
        return [[] for _ in range(d)]
    if not isinstance(raw, list) or len(raw) != d:
        raise ProblemError("flow", f"expected a list of {d} components")
    comps = []
    for v, comp in enumerate(raw):
        where = f"flow[{v}]"
        if not isinstance(comp, list):
            raise ProblemError(where, "expected a list of monomials")
        seen = set()
        monos = []
        for m, mono in enumerate(comp):
            w = f"{where}[{m}]"
            mono = _object(mono, w)
            extra = set(mono) - {"c", "k", "i"}
            if extra:
                raise ProblemError(w, f"unknown field {sorted(extra)[0]!r}")
            if "c" not in mono or "i" not in mono:
                raise ProblemError(w, "a monomial needs 'c' and 'i'")
            c = _number(mono["c"], f"{w}.c")
            k = _integer(mono.get("k", 0), f"{w}.k")
            i = mono["i"]
            if not isinstance(i, list) or len(i) != d:
                raise ProblemError(f"{w}.i", f"dimension mismatch: expected {d} exponents")
            i = tuple(_integer(e, f"{w}.i[{j}]") for j, e in enumerate(i))
            if (k, *i) in seen:
                raise ProblemError(w, f"duplicate exponent tuple {(k, *i)}")
            seen.add((k, *i))
            monos.append(Monomial(c, k, i))
        comps.append(monos)
    return comps


def _parse_guard(raw: Any, d: int) -> dict:
    g = _object(raw, "guard")
    tag = g.get("type")
    if tag == "halfspace":
        a = _vector(g.get("a"), "guard.a", d + 1)
        if not any(a):
            raise ProblemError("guard.a", "normal vector is zero")
        return {"type": tag, "a": a, "b": _number(g.get("b"), "guard.b")}
    if tag == "ball":
        r = _number(g.get("radius"), "guard.radius")
        if r <= 0:
            raise ProblemError("guard.radius", "must be positive")
        return {"type": tag, "center": _vector(g.get("center"), "guard.center", d + 1),
                "radius": r}
    if tag == "time":
        return {"type": tag, "eta": _number(g.get("eta"), "guard.eta")}
    raise ProblemError("guard.type", f"unknown guard tag {tag!r}")


def _parse_options(raw: Any) -> dict:
    opts = _object(raw, "options")
    out = {}
    for key, val in opts.items():
        where = f"options.{key}"
        if key in ("delta", "epsilon"):
            x = _number(val, where)
            if x <= 0:
                raise ProblemError(where, "must be positive")
            out[key] = x
        elif key == "max_seconds":
            out[key] = float(_number(val, where))
        elif key in _BUDGET_KEYS:
            out[key] = _integer(val, where, 1)
        else:
            raise ProblemError(where, "unknown option")
    return out


def parse_problem(text: str) -> ProblemSpec:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemError("<file>", f"malformed JSON ({exc})") from None
    raw = _object(raw, "<file>")
    d = _integer(raw.get("dimension"), "dimension", 1)
    flow = _parse_flow(raw.get("flow"), d)
    init = _object(raw.get("initial"), "initial")
    t0 = _number(init.get("t0", "0"), "initial.t0")
    w0 = _vector(init.get("w0"), "initial.w0", d)
    if "guard" not in raw:
        raise ProblemError("guard", "missing")
    guard = _parse_guard(raw["guard"], d)
    options = _parse_options(raw.get("options", {}))
    return ProblemSpec(d, flow, t0, w0, guard, options)


def _dec(x: Fraction) -> str:
    """Exact decimal string for a terminating fraction, ``p/q`` otherwise."""
    q = x.denominator
    twos = fives = 0
    while q % 2 == 0:
        q //= 2
        twos += 1
    while q % 5 == 0:
        q //= 5
        fives += 1
    if q != 1:
        return f"{x.numerator}/{x.denominator}"
    digits = max(twos, fives)
    if digits == 0:
        return str(x.numerator)
    scaled = abs(x.numerator) * 10 ** digits // x.denominator
    sign = "-" if x < 0 else ""
    body = str(scaled).rjust(digits + 1, "0")
    return f"{sign}{body[:-digits]}.{body[-digits:]}"


def problem_to_dict(spec: ProblemSpec) -> dict:
    guard = {}
    for key, val in spec.guard.items():
        if key == "type":
            guard[key] = val
        elif isinstance(val, tuple):
            guard[key] = [_dec(x) for x in val]
        else:
            guard[key] = _dec(val)
    opts = {k: (_dec(v) if isinstance(v, Fraction) else v) for k, v in spec.options.items()}
    if "max_seconds" in opts:
        opts["max_seconds"] = _dec(Fraction(opts["max_seconds"]))
    return {
        "dimension": spec.d,
        "flow": [[{"c": _dec(Fraction(m.c)), "k": m.k, "i": list(m.i)} for m in comp]
                 for comp in spec.flow],
        "initial": {"t0": _dec(spec.t0), "w0": [_dec(x) for x in spec.w0]},
        "guard": guard,
        "options": opts,
    }


def serialize_problem(spec: ProblemSpec) -> str:
    return json.dumps(problem_to_dict(spec), indent=2)
