"""A non-linear, non-autonomous flow: z' = z^2 + t.

The general recursion (re-centre, then expand around zero) is used here
because the flow has a t term and a square.  The guard is a disc in the
(t, z) plane.
"""
from taylorguard import Ball, PolyFlow, State, solve
from taylorguard.scalar import best_decimal

F = PolyFlow([{(0, 2): 1, (1, 0): 1}])           # z^2 + t
disc = Ball((1, "0.5"), "0.25")

for n in (10, 30, 60):
    hit = solve(F, State(0, (0,)), disc, n)
    print(n, hit.status.value, best_decimal(hit.t_lo, 25), best_decimal(hit.t_hi, 25),
          "z =", best_decimal(hit.state_lo.w[0], 15), hit.stats.table_row())
