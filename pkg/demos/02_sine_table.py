"""sin(eta) from y'' = -y, read off at the time guard t >= eta.

The solver never evaluates sin here.  It integrates (sin, cos) up to the
guard and prints the guaranteed decimals of y1 there.  Wrapping makes long horizons expensive, so watch p grow
with eta.
"""
import math

from taylorguard import PolyFlow, State, time_guard
from taylorguard.cli import run
from taylorguard.problem import parse_problem

PROBLEM = """{
  "dimension": 2,
  "flow": [[{"c": "1", "k": 0, "i": [0, 1]}], [{"c": "-1", "k": 0, "i": [1, 0]}]],
  "initial": {"t0": "0", "w0": ["0", "1"]},
  "guard": {"type": "time", "eta": "%s"}
}"""

print(f"{'eta':>5} {'sin(eta)':>14} {'p':>5} {'b':>5} {'s':>5} {'l_max':>6} {'time':>7}")
for eta in (1, 10, 100):
    hit, rec = run(parse_problem(PROBLEM % eta), 40, digits=9)
    st = rec["stats"]
    print(f"{eta:5d} {rec['state_lo'][0]:>14} {st['p']:5d} {st['b']:5d} {st['s']:5d} "
          f"{st['l_max']:6d} {st['time']:7.2f}")
    assert abs(float(rec["state_lo"][0]) - math.sin(eta)) < 2e-9
