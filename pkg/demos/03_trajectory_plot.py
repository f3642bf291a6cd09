"""Plot the accepted step points of the damped benchmark.

Small steps cluster where the trajectory approaches the wall, since the
step size is the guard distance over the speed bound.
"""
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from taylorguard import HalfSpace, PolyFlow, State, solve

F = PolyFlow([{(0, 0, 1): 1}, {(0, 1, 0): -1, (0, 0, 1): "0.02"}])
hit = solve(F, State(0, (0, 1)), HalfSpace((0, -1, 0), 2), 30, keep_trajectory=True)

# midpoints are fine for a picture; the enclosures are far thinner than a pixel
pts = np.array([[float(s.t.mid), float(s.w[0].mid), float(s.w[1].mid)] for s in hit.trajectory])
print(pts.shape[0], "accepted points, widest state enclosure:",
      max(float(x.width) for s in hit.trajectory for x in s.w))

fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(8, 6), sharex=True)
ax1.plot(pts[:, 0], pts[:, 1], lw=0.8)
ax1.axhline(-2, color="k", ls="--", lw=0.8)
ax1.set_ylabel("x1")
ax2.semilogy(pts[1:, 0], np.diff(pts[:, 0]), ".", ms=2)
ax2.set_ylabel("step size")
ax2.set_xlabel("t")
fig.tight_layout()
fig.savefig("damped_trajectory.png", dpi=120)
print("wrote damped_trajectory.png")
