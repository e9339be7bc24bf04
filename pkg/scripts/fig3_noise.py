"""S versus shared visibility at G = 0.8 for white (r=0), colored (r=1) and
mixed (r=1/3) noise, plus the critical visibilities."""
import argparse
from pathlib import Path

import numpy as np

from starshare.analysis import critical_visibility
from starshare.cli import noise_sweep_rows, write_csv

R_VALUES = (0.0, 1.0, 1 / 3)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="results")
    parser.add_argument("--steps", type=int, default=1001)
    parser.add_argument("--n", type=int, default=2)
    args = parser.parse_args()
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    grid = np.linspace(0.0, 1.0, args.steps)
    for k in (2, 3):
        header, body = noise_sweep_rows(args.n, k, 0.8, R_VALUES, grid)
        write_csv(body, header, str(outdir / f"fig3_k{k}.csv"))
        for r in R_VALUES:
            v = critical_visibility(args.n, k, r)
            print(f"k={k} r={r:.4f}: critical visibility {v:.6f}")


if __name__ == "__main__":
    main()
