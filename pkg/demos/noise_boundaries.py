"""Boundary curves over the (transmittance, noise) plane.

For each coupling T the scan bisects for the largest noise mean that still
keeps (a) the non-Gaussianity witness satisfied, (b) the BB84 rate positive,
(c) the DI rate positive.  The cross-region where witness and security hold
together opens up once the coupling exceeds roughly 0.3-0.4, which is what
makes the witness useful as a channel pre-check.

Run:  python demos/noise_boundaries.py [output.csv]
Saves a matplotlib figure next to the CSV when matplotlib is importable.
"""

import sys

import numpy as np

from qkdng import (
    Criterion,
    DetectorKind,
    DetectorModel,
    NoiseStatistics,
    ScanConfig,
    sweep,
)

out_path = sys.argv[1] if len(sys.argv) > 1 else "thermal_boundaries.csv"

config = ScanConfig(
    t_grid=tuple(np.linspace(0.1, 0.95, 18)),
    statistics=NoiseStatistics.THERMAL,
    detector=DetectorModel(DetectorKind.PNRD),
    p=1.0,
    nu_cap=5.0,
    tol=1e-4,
)
print("sweeping a perfect-PNRD thermal link (18 grid points) ...")
curve = sweep(config)

ts = curve.t_values()
ng = curve.nu_star(Criterion.NONGAUSS)
bb84 = curve.nu_star(Criterion.BB84)
di = curve.nu_star(Criterion.DI)

print(f"{'T':>6} {'nu*(witness)':>13} {'nu*(BB84)':>11} {'nu*(DI)':>9}")
for i in range(len(ts)):
    print(f"{ts[i]:6.3f} {ng[i]:13.5f} {bb84[i]:11.5f} {di[i]:9.5f}")

rows = ["T,nu_nongauss,nu_bb84,nu_di"]
rows += [f"{ts[i]!r},{ng[i]!r},{bb84[i]!r},{di[i]!r}" for i in range(len(ts))]
with open(out_path, "w") as handle:
    handle.write("\n".join(rows) + "\n")
print(f"\nwrote {out_path}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("matplotlib not installed; skipping the figure")
else:
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.fill_between(ts, 0.0, ng, color="gold", alpha=0.4, label="non-Gaussianity region")
    ax.plot(ts, ng, color="tab:blue", label="witness boundary")
    ax.plot(ts, bb84, color="tab:green", label="BB84 boundary")
    ax.plot(ts, di, color="tab:red", label="DI boundary")
    ax.set_xlabel("coupling transmittance T")
    ax.set_ylabel("max tolerable noise mean")
    ax.legend(loc="upper left")
    fig.tight_layout()
    png_path = out_path.rsplit(".", 1)[0] + ".png"
    fig.savefig(png_path, dpi=150)
    print(f"wrote {png_path}")
