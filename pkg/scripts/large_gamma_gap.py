"""How fast P_q(Gamma) approaches its Gamma -> infinity limit on the standard width grid.

At large Gamma the deviation scales like 1/Gamma^2, so Gamma^2 times the deviation
should settle to a width-dependent constant.

    python3 scripts/large_gamma_gap.py
"""
import numpy as np

from lossy_witness.gaussian import GaussianPair, ProjectionWidth, purity_output, purity_output_limit

WIDTHS = [0.25 * k for k in range(1, 13)]

for G in (10.0, 100.0, 1e3, 1e4, 1e5):
    devs = np.array(
        [[abs(purity_output(GaussianPair(s, S), ProjectionWidth(G)) - purity_output_limit(GaussianPair(s, S)))
          for S in WIDTHS] for s in WIDTHS]
    )
    i, j = np.unravel_index(np.argmax(devs), devs.shape)
    print(
        f"Gamma={G:8.0f}  max dev {devs[i, j]:.3e} at (sigma, Sigma)=({WIDTHS[i]}, {WIDTHS[j]})"
        f"  Gamma^2*dev={G**2 * devs[i, j]:.4f}  points above 1e-6: {int(np.sum(devs > 1e-6))}"
    )
