"""Boundary-driven pulses freeze into a standing polarization pattern.

Inject the opposite-helicity pair at z = 0 (a fast smooth ramp to full
polarization, then steady feeding) and transport it through the medium at
unit speed.  Along each characteristic the fields obey the ordinary
mean-field equations, so once the boundary has saturated, the profile at
depth z is the boundary state aged by the transit time z: the polarization
pattern stops moving even though the photons keep streaming through it.
"""

import numpy as np

from polex import BoundaryProfile, MfParams, PulseGrid, run_to_steady, standing_residual

grid = PulseGrid(L=0.5, nz=512, boundary=BoundaryProfile(ramp_time=0.05))
params = MfParams(theta=float(np.arccos(0.99)))
result = run_to_steady(grid, params, 1.0, snapshot_times=np.linspace(0.1, 1.0, 10))

print("snapshot times:", np.round(result.snapshot_times, 2))
print("standing residual for t >= 0.6:", standing_residual(result, 0.6))
print("(the pattern is literally frozen: the late snapshots coincide)")

front_ok = True
for t, snap in zip(result.snapshot_times, result.snapshots):
    ahead = result.z > t
    if ahead.any() and np.max(np.abs(snap[:, ahead])) > 1e-8:
        front_ok = False
print("causality (nothing ahead of the light front):", front_ok)
print("tau3 = -sigma3 exactly:",
      max(np.max(np.abs(s[5] + s[2])) for s in result.snapshots) < 1e-12)

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 4))
    for k, (t, snap) in enumerate(zip(result.snapshot_times, result.snapshots)):
        ax.plot(result.z, snap[2], label=f"t={t:.1f}" if k % 3 == 0 else None,
                color=plt.cm.viridis(t / result.snapshot_times[-1]))
    ax.set_xlabel("z  [units of 1/(n_gamma R), c = 1]")
    ax.set_ylabel("sigma3(z)")
    ax.legend()
    fig.tight_layout()
    fig.savefig("pulse_standing_pattern.png", dpi=150)
    print("\nwrote pulse_standing_pattern.png")
except ImportError:
    print("\nmatplotlib not available; skipping the plot")
