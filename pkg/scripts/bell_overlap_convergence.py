"""Overlap of the compressed maximally entangled qudit pair with the Bell state, against d.

    python3 scripts/bell_overlap_convergence.py
"""
import numpy as np

from lossy_witness.qudit import BELL_ASYMPTOTE, bell_overlap

dims = np.unique(np.logspace(np.log10(2), 4, 25).astype(int))
print(f"asymptote pi^2/(pi^2+4) = {BELL_ASYMPTOTE:.6f}")
for d in dims:
    f = bell_overlap(int(d))
    dev = f - BELL_ASYMPTOTE
    # deviation shrinks like 1/d
    print(f"d={d:6d}  F={f:.8f}  F-F_inf={dev: .3e}  d*(F-F_inf)={d * dev: .4f}")
