"""Closed-form witness quantities against direct quadrature over the standard grid.

    python3 scripts/oracle_sweep.py [POINTS_PER_SIGMA]
"""
import sys
import time

from lossy_witness.gaussian import GaussianPair, ProjectionWidth, witness_gaussian
from lossy_witness.oracle import compare_reports, grid_for_pair, oracle_witness

WIDTHS = [0.25 * k for k in range(1, 13)]
GAMMAS = [0.25, 0.5, 1.0, 2.0, 4.0]


def main(pps=4):
    start = time.perf_counter()
    worst = (0.0, None)
    for s in WIDTHS:
        for S in WIDTHS:
            for G in GAMMAS:
                g, w = GaussianPair(s, S), ProjectionWidth(G)
                dev = compare_reports(witness_gaussian(g, w), oracle_witness(g, w, grid_for_pair(g, w, int(pps))))
                worst = max(worst, (dev, (s, S, G)), key=lambda t: t[0])
    print(f"max deviation {worst[0]:.2e} at (sigma, Sigma, Gamma)={worst[1]} in {time.perf_counter() - start:.1f} s")


if __name__ == "__main__":
    main(*sys.argv[1:])
