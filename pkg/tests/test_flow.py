from fractions import Fraction
from random import Random

import pytest

from taylorguard.flow import (Monomial, PolyFlow, State, bound_U, evaluate, is_autonomous_linear,
                              recenter)
from taylorguard.scalar import enclose

from oracles import random_multinomial

DAMPED = [{(0, 0, 1): 1}, {(0, 1, 0): -1, (0, 0, 1): "0.02"}]
SINE = [{(0, 0, 1): 1}, {(0, 1, 0): -1}]


def has(x, q) -> bool:
    lo, hi = x.bounds()
    return lo <= Fraction(q) <= hi


def test_eval_examples():
    y = evaluate(PolyFlow(SINE), State(0, (0, 1)))
    assert has(y[0], 1) and has(y[1], 0)
    y = evaluate(PolyFlow(DAMPED), State(0, (0, 1)))
    assert has(y[0], 1) and has(y[1], Fraction(1, 50))
    y = evaluate(PolyFlow([{}, {}]), State(3, (1, 2)))
    assert all(v.bounds() == (0, 0) for v in y)


def test_bound_U_examples():
    assert bound_U(PolyFlow(DAMPED), State(0, (0, 1)), 1, 1).bounds() == (2, 2)
    assert bound_U(PolyFlow(SINE), State(0, (0, 1)), 1, 1).bounds() == (2, 2)
    assert bound_U(PolyFlow([{}, {}]), State(0, (3, 4)), 1, 1).bounds() == (0, 0)


def test_recenter_examples():
    F = PolyFlow(SINE)
    E = recenter(F, State(5, (0, 0)))
    assert {e for c in E.components for e in c} == {(0, 0, 1), (0, 1, 0)}

    E = recenter(PolyFlow([{(1, 0): 1, (0, 1): 1}]), State(1, (2,)))
    terms = {e: c.bounds() for e, c in E.components[0].items()}
    assert terms == {(1, 0): (1, 1), (0, 1): (1, 1), (0, 0): (3, 3)}

    E = recenter(PolyFlow([{(0, 2): 1}]), State(0, (3,)))
    terms = {e: c.bounds() for e, c in E.components[0].items()}
    assert terms == {(0, 2): (1, 1), (0, 1): (6, 6), (0, 0): (9, 9)}


def test_is_autonomous_linear_examples():
    assert is_autonomous_linear(PolyFlow(DAMPED))
    assert not is_autonomous_linear(PolyFlow([{(1, 1): 1}]))
    assert not is_autonomous_linear(PolyFlow([{(0, 1, 1): 1}, {}]))
    assert is_autonomous_linear(PolyFlow([{}]))


def test_validation():
    with pytest.raises(ValueError):
        PolyFlow([{(0, 1): 1}, {}])            # exponent too short for d=2
    with pytest.raises(ValueError):
        PolyFlow([{(0, -1): 1}])
    with pytest.raises(ValueError):
        PolyFlow([{(0, 3): 1}], mu=2)
    with pytest.raises(ValueError):
        PolyFlow.from_monomials(1, [[Monomial(1, 0, (1,)), Monomial(2, 0, (1,))]])
    with pytest.raises(ValueError):
        evaluate(PolyFlow(SINE), State(0, (1,)))


def test_from_monomials_roundtrip():
    F = PolyFlow.from_monomials(2, [[Monomial(1, 0, (0, 1))],
                                    [Monomial(-1, 0, (1, 0)), Monomial("0.02", 0, (0, 1))]])
    assert F.components == PolyFlow(DAMPED).components
    assert F.mu == 1
    assert sorted(m.exponent for m in F.monomials(1)) == [(0, 0, 1), (0, 1, 0)]


def test_string_coefficients_are_exact():
    F = PolyFlow(DAMPED)
    assert F.components[1][(0, 0, 1)] == Fraction(1, 50)


# -- properties ---------------------------------------------------------

def _rand_state(rng, d):
    return State(Fraction(rng.randint(-6, 6), 3), tuple(Fraction(rng.randint(-6, 6), 4)
                                                        for _ in range(d)))


@pytest.mark.parametrize("seed", range(20))
def test_recenter_shift_correctness(seed):
    rng = Random(seed)
    d = rng.randint(1, 3)
    F = PolyFlow(random_multinomial(rng, d, 3))
    s = _rand_state(rng, d)
    E = recenter(F, s)
    at_zero = evaluate(E, State(0, (0,) * d))
    direct = evaluate(F, s)
    for a, b in zip(at_zero, direct):
        assert a.overlaps(b)


@pytest.mark.parametrize("seed", range(10))
def test_recenter_there_and_back(seed):
    rng = Random(100 + seed)
    d = rng.randint(1, 2)
    F = PolyFlow(random_multinomial(rng, d, 3))
    s = _rand_state(rng, d)
    back = recenter(recenter(F, s), State(-s.t, tuple(-x for x in s.w)))
    for orig, comp in zip(F.components, back.components):
        for e, c in comp.items():
            assert has(c, orig.get(e, 0))


@pytest.mark.parametrize("seed", range(10))
def test_bound_U_dominates_samples(seed):
    rng = Random(200 + seed)
    d = rng.randint(1, 3)
    F = PolyFlow(random_multinomial(rng, d, 3))
    s = _rand_state(rng, d)
    U = bound_U(F, s, 1, 1)
    for _ in range(20):
        t = s.t + Fraction(rng.randint(-8, 8), 8)
        w = tuple(x + Fraction(rng.randint(-8, 8), 8) for x in s.w)
        for y in evaluate(F, State(t, w)):
            assert abs(y).hi <= U.hi
