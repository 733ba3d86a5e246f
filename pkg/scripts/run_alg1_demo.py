#!/usr/bin/env python3
"""Walk the block discretization pipeline at a few sizes and show its pieces.

Prints the label family, block spectra for the smallest case, and the exact
identity confirmations for each requested (D, G).
"""

import argparse

from cvqec.isometries import alg1_pipeline, alg1_report


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--sizes", default="1x1,2x2,4x3,8x4", help="comma list of DxG pairs"
    )
    args = parser.parse_args()

    for token in args.sizes.split(","):
        d_str, g_str = token.lower().split("x")
        D, G = int(d_str), int(g_str)
        result = alg1_pipeline(D, G)
        report = alg1_report(D, G)
        print(f"D={D} G={G}: {len(result.labels)} labels, grid dim {len(result.grid_values)}")
        if len(result.grid_values) <= 16:
            for label in result.labels:
                spectrum = result.block_op.blocks[label].exact_diag
                print(f"  block {label}: {[str(v) for v in spectrum]}")
            print(f"  grid: {[str(v) for v in result.grid_values]}")
            print(f"  permutation: {result.sigma}")
        status = "ok" if report["union_ok"] and report["disjoint_ok"] else "BROKEN"
        print(
            f"  spectra disjoint={report['disjoint_ok']} union={report['union_ok']} "
            f"residuals={report['residuals']} -> {status}"
        )


if __name__ == "__main__":
    main()
