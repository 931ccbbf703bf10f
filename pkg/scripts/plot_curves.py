#!/usr/bin/env python3
"""Plot curve CSVs produced by the experiment CLI.

Usage: python scripts/plot_curves.py results/sweep/sweep_K8.csv [-o fig.png]

Requires matplotlib (``pip install sparselms[plots]``).
"""

import argparse
import csv
from pathlib import Path


def load_csv(path):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[float(v) for v in row] for row in reader]
    labels = header[1:]
    iterations = [row[0] for row in rows]
    series = [[row[i + 1] for row in rows] for i in range(len(labels))]
    return labels, iterations, series


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("csv", type=Path, help="curve CSV written by the experiment CLI")
    parser.add_argument("-o", "--out", type=Path, help="output image (default: show window)")
    parser.add_argument("--ylim", type=float, nargs=2, help="y-axis limits in dB")
    args = parser.parse_args()

    import matplotlib

    if args.out is not None:
        matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    labels, iterations, series = load_csv(args.csv)
    fig, ax = plt.subplots(figsize=(8, 5))
    for label, values in zip(labels, series):
        ax.plot(iterations, values, label=label, linewidth=1.0)
    ax.set_xlabel("iteration")
    ax.set_ylabel("average MSE (dB)")
    ax.set_title(args.csv.stem)
    if args.ylim:
        ax.set_ylim(*args.ylim)
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    if args.out is not None:
        fig.savefig(args.out, dpi=150)
        print(f"wrote {args.out}")
    else:
        plt.show()


if __name__ == "__main__":
    main()
