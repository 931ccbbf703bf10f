#!/usr/bin/env python3
"""Algorithm comparison across channel sparsities K in {2, 4, 8, 16}.

All four algorithms at fixed T = 400 and lambda = 8e-3, one curve per
(algorithm, K); output in ``results/compare_K``.
"""

import sys

from sparselms.cli import main

if __name__ == "__main__":
    raise SystemExit(
        main(["compare", "--axis", "K", "--k-set", "2,4,8,16", "--out", "results/compare_K", *sys.argv[1:]])
    )
