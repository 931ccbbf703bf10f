#!/usr/bin/env python3
"""Regularization-weight sweep at the built-in defaults.

Writes per-sparsity curve CSVs and the selection table to
``results/sweep``.  Desk scale (100 runs) by default; pass ``--paper-scale``
for 1000 runs, or any other CLI flag to override the defaults.
"""

import sys

from sparselms.cli import main

if __name__ == "__main__":
    raise SystemExit(main(["sweep", "--out", "results/sweep", *sys.argv[1:]]))
