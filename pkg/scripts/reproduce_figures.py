"""Write the purity surface and the purity-vs-Gamma curve, then print a short digest.

    python3 scripts/reproduce_figures.py [OUT_DIR]
"""
import csv
import sys
from pathlib import Path

from lossy_witness.cli import build_config, run_fig1, run_fig2


def read(path):
    with open(path, newline="") as fh:
        return [{k: float(v) for k, v in row.items()} for row in csv.DictReader(fh)]


def main(out_dir="."):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    surface = read(run_fig1(build_config("fig1", {"output_path": str(out / "fig1.csv")})))
    curve = read(run_fig2(build_config("fig2", {"output_path": str(out / "fig2.csv")})))

    gap = max(r["purity_input"] - r["purity_output_limit"] for r in surface)
    print(f"surface: {len(surface)} points, largest input-minus-output purity {gap:.4f}")
    for row in curve[:: len(curve) // 8]:
        print(f"Gamma={row['Gamma']:.3f}  P_q={row['purity_output']:.6f}  extreme={row['purity_extreme']:.6f}")
    floor = next(r["Gamma"] for r in curve if r["purity_extreme"] < 0.501)
    print(f"extreme curve drops below 0.501 at Gamma ~ {floor:.3f}")


if __name__ == "__main__":
    main(*sys.argv[1:])
