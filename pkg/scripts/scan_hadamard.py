#!/usr/bin/env python3
"""Scan the Hadamard kernel's code-space fidelity over truncation and envelope.

The kernel acts exactly on the regularized codewords whenever the truncation
is a multiple of 2N (both codeword supports then see identical envelopes), so
the scan mostly confirms flatness at machine precision; off-multiple
truncations show the edge effect.
"""

import argparse

import numpy as np

from cvqec.fock import approx_ideal_rot_codeword, rot_logical_op
from cvqec.verify import logical_action, markdown_table

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--N", type=int, default=2)
    parser.add_argument("--dims", default="64,128,192,256")
    parser.add_argument("--eps", default="1e-1,1e-2,1e-3,1e-4")
    args = parser.parse_args()

    dims = [int(d) for d in args.dims.split(",")]
    eps_values = [float(e) for e in args.eps.split(",")]
    rows = []
    for dim in dims:
        row = [dim]
        for eps in eps_values:
            words = [approx_ideal_rot_codeword(args.N, j, dim, eps) for j in (0, 1)]
            fid = logical_action(rot_logical_op("H", args.N, dim), words, HADAMARD).aligned_fidelity
            row.append(f"{fid:.9f}")
        rows.append(row)
    headers = ["D"] + [f"eps={e:g}" for e in eps_values]
    print(markdown_table(headers, rows))


if __name__ == "__main__":
    main()
