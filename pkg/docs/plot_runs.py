"""Plot the five response curves of one or more ``fuzzypend simulate`` CSVs.

    fuzzypend simulate --controller ts --out ts.csv
    fuzzypend simulate --controller mamdani --out mamdani.csv
    python3 docs/plot_runs.py ts.csv mamdani.csv --out responses.png

Needs matplotlib, which is not a dependency of the package.
"""
import argparse
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from fuzzypend.sim import COLUMNS, QUANTITIES, UNITS, read_trajectory_csv

COLUMN = {"force": "F_ctrl", "theta": "theta", "theta_dot": "theta_dot", "x": "x", "x_dot": "x_dot"}


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("csv", nargs="+", type=Path)
    parser.add_argument("--out", type=Path, default=Path("responses.png"))
    args = parser.parse_args(argv)

    fig, axes = plt.subplots(len(QUANTITIES), 1, sharex=True, figsize=(8, 2.2 * len(QUANTITIES)))
    for path in args.csv:
        data = read_trajectory_csv(path)
        for ax, q in zip(axes, QUANTITIES):
            ax.plot(data[:, 0], data[:, COLUMNS.index(COLUMN[q])], label=path.stem, lw=1)
    for ax, q in zip(axes, QUANTITIES):
        ax.set_ylabel(f"{q} [{UNITS[q]}]")
        ax.grid(alpha=0.3)
    axes[0].legend()
    axes[-1].set_xlabel("t [s]")
    fig.tight_layout()
    fig.savefig(args.out, dpi=120)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
