"""Damped oscillator hitting the wall x1 = -2.

y1' = y2, y2' = -y1 + 0.02 y2 starting at (0, 1).  The amplitude grows
slowly, and after about twelve swings y1 reaches -2.  We bracket that
time at increasing precision and compare with a plain floating point
event search from scipy.
"""
from scipy.integrate import solve_ivp

from taylorguard import HalfSpace, PolyFlow, State, solve
from taylorguard.scalar import best_decimal

F = PolyFlow([{(0, 0, 1): 1},
              {(0, 1, 0): -1, (0, 0, 1): "0.02"}])   # 0.02 stays exact, it is parsed as a decimal
s0 = State(0, (0, 1))
wall = HalfSpace((0, -1, 0), 2)                      # -x1 >= 2

print(f"{'n':>5} {'p':>5} {'b':>5} {'s':>5} {'l_max':>6} {'time':>7}   bracket")
for n in (20, 50, 100):
    hit = solve(F, s0, wall, n)
    st = hit.stats
    digits = int(n * 0.30103) + 1
    lo, hi = best_decimal(hit.t_lo, digits), best_decimal(hit.t_hi, digits)
    print(f"{n:5d} {st.working_bits:5d} {st.big_steps:5d} {st.small_steps:5d} "
          f"{st.max_order:6d} {st.wall_time:7.2f}   [{lo}, {hi}]")


# the same question asked of an adaptive Runge-Kutta method
def rhs(t, y):
    return [y[1], -y[0] + 0.02 * y[1]]


def hits_wall(t, y):
    return y[0] + 2


hits_wall.terminal = True
for rtol in (1e-6, 1e-9, 1e-12):
    sol = solve_ivp(rhs, (0, 100), [0, 1], method="DOP853", rtol=rtol, atol=rtol,
                    events=hits_wall)
    print(f"DOP853 rtol={rtol:.0e}: t_G ~ {sol.t_events[0][0]:.15f}")

# at rtol 1e-6 the error-controlled steps jump over the first dip below -2
# and report a later crossing; tighter tolerances agree with the brackets
# above only to as many digits as the tolerance suggests, with no guarantee
