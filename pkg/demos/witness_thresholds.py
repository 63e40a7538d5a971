"""The two non-Gaussianity witnesses and what they accept.

Each witness compares the success-coincidence probability P_s against a
threshold curve in the error probability P_e.  Detected light strictly above
the curve cannot be a mixture of Gaussian states.

Run:  python demos/witness_thresholds.py
"""

import numpy as np

from qkdng import (
    CoincidenceStats,
    DetectorKind,
    pnrd_threshold,
    spad_threshold,
)
from qkdng.witness import evaluate

print("threshold curves (largest Gaussian-compatible P_s):")
print(f"{'P_e':>6} {'SPAD':>10} {'PNRD':>10}")
for p_e in np.arange(0.0, 0.51, 0.05):
    print(f"{p_e:6.2f} {spad_threshold(p_e):10.5f} {pnrd_threshold(p_e):10.5f}")

print()
print("sample verdicts:")
samples = [
    (DetectorKind.PNRD, CoincidenceStats(p_s=0.25, p_e=0.02), "bright, clean PNRD stats"),
    (DetectorKind.PNRD, CoincidenceStats(p_s=0.0878, p_e=0.2593), "thermal T=0.5 nbar=1 point"),
    (DetectorKind.SPAD, CoincidenceStats(p_s=0.1225, p_e=0.0), "lossy but error-free SPAD stats"),
]
for kind, stats, label in samples:
    verdict = evaluate(kind, stats)
    word = "non-Gaussian" if verdict.passed else "not witnessed"
    print(f"  {label:32s} -> {word} (margin {verdict.margin:+.4f})")

print()
print("the PNRD threshold peaks at 1/4, so any link holding P_s above 0.25")
print("passes that witness regardless of its error rate.")
