"""Regenerate the S_j-versus-G curves for the (2,2,k) and (3,2,k) scenarios.

Writes one CSV per (n, k) into the output directory (default: results/).
"""
import argparse
from pathlib import Path

import numpy as np

from starshare.cli import gain_sweep_rows, write_csv
from starshare.model import all_selections


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="results")
    parser.add_argument("--steps", type=int, default=1001)
    args = parser.parse_args()
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    grid = np.linspace(0.0, 1.0, args.steps)
    for n in (2, 3):
        for k in (2, 3, 4):
            header, body = gain_sweep_rows(n, k, all_selections(n, 2), grid)
            path = outdir / f"fig2_n{n}_k{k}.csv"
            write_csv(body, header, str(path))
            best = max(body, key=lambda row: row[-2])
            print(f"{path}: max min_s = {best[-2]:.6f} at G = {best[0]:.4f}")


if __name__ == "__main__":
    main()
