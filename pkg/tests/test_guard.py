from fractions import Fraction
from random import Random

import pytest

from taylorguard.guard import Ball, HalfSpace, distance, signed_distance, time_guard
from taylorguard.scalar import enclose, sqrt

G = HalfSpace((0, -1, 0), 2)        # x1 <= -2


def pt(*xs):
    return tuple(enclose(Fraction(x)) for x in xs)


def test_signed_distance_examples():
    assert signed_distance(G, pt(0, 0, 1)).bounds() == (2, 2)
    assert signed_distance(G, pt(5, -2, 7)).bounds() == (0, 0)
    assert signed_distance(Ball((0, 0), 1), pt(2, 0)).bounds() == (1, 1)


def test_distance_examples():
    assert distance(G, pt(0, 0, 1)).bounds() == (2, 2)
    assert distance(G, pt(0, -5, 1)).bounds() == (0, 0)
    assert distance(G, pt(0, -2, 1)).bounds() == (0, 0)
    assert signed_distance(G, pt(0, -5, 1)).bounds() == (-3, -3)


def test_time_guard():
    g = time_guard(10, 2)
    for t in ("0", "9.5", "12"):
        assert signed_distance(g, pt(t, 3, -4)).bounds()[0] == 10 - Fraction(t)


def test_validation():
    with pytest.raises(ValueError):
        HalfSpace((0, 0), 1)
    with pytest.raises(ValueError):
        Ball((0, 0), 0)
    with pytest.raises(ValueError):
        signed_distance(G, pt(0, 0))


def test_normalised_halfspace():
    g = HalfSpace((3, 4), 0)
    assert signed_distance(g, pt(-3, -4)).bounds() == (5, 5)


def test_rate_bound():
    assert G.rate_bound(enclose(2)).bounds() == (2, 2)
    assert time_guard(1, 2).rate_bound(enclose(7)).bounds() == (1, 1)
    r = Ball((0, 0, 0), 1).rate_bound(enclose(1))
    assert r.lo * r.lo <= 3 <= r.hi * r.hi


@pytest.mark.parametrize("guard", [G, HalfSpace((1, 2, -1), "0.5"), Ball((1, 0, 2), "1.5")])
def test_lipschitz_and_clipping(guard):
    rng = Random(3)
    for _ in range(50):
        a = [Fraction(rng.randint(-40, 40), 8) for _ in range(3)]
        b = [Fraction(rng.randint(-40, 40), 8) for _ in range(3)]
        ga, gb = signed_distance(guard, pt(*a)), signed_distance(guard, pt(*b))
        da = distance(guard, pt(*a))
        assert ga.lo <= da.hi and da.lo >= 0
        gap = sqrt(enclose(sum((x - y) ** 2 for x, y in zip(a, b))))
        assert abs(ga - gb).lo <= gap.hi
