#!/usr/bin/env python3
"""Algorithm comparison across impulse strengths T in {200, 400, 600}.

All four algorithms at the fixed default cell (K = 8, lambda = 8e-3),
one curve per (algorithm, T); output in ``results/compare_T``.
"""

import sys

from sparselms.cli import main

if __name__ == "__main__":
    raise SystemExit(main(["compare", "--axis", "T", "--out", "results/compare_T", *sys.argv[1:]]))
